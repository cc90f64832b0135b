//! Integrability conditions of the generalized Lie equations: the
//! Yamaguti-tensor transport identities for `S_g A` and `T_g A`, the three
//! intermediate secondary-frame transport identities on each side, and the
//! factor-of-two equivalence between the intermediate residuals and the
//! Yamaguti residual.

use ndarray::Array3;

use crate::actions::{action_jacobians, action_secondary, ActionSide, MoufangAction};
use crate::jets::jet2;
use crate::report::{max_abs, Residual};

/// Everything the integrability checks produce at one `(g, A)` pair.
#[derive(Debug, Clone)]
pub struct IntegrabilityRecord {
    pub g: Vec<f64>,
    pub a: Vec<f64>,
    /// Residual of the Yamaguti transport identity for `S_g A` / `T_g A`,
    /// indexed `[mu, j, k]`.
    pub residual_yam_s: Array3<f64>,
    pub residual_yam_t: Array3<f64>,
    /// Residuals of the three intermediate transport identities per side.
    pub intermediates_s: [Array3<f64>; 3],
    pub intermediates_t: [Array3<f64>; 3],
    /// Sup-norm of (intermediate - 2 * Yamaguti residual) per intermediate.
    pub equivalence_gap_s: [f64; 3],
    pub equivalence_gap_t: [f64; 3],
    /// Sup-norm of (sum of the three intermediates - 6 * Yamaguti residual).
    pub sum_gap_s: f64,
    pub sum_gap_t: f64,
}

/// Evaluate every integrability quantity at one `(g, A)` pair.
///
/// Shared ingredients (Jacobians, secondary frames at `g`, `A` and the two
/// transported points) are computed once; the per-identity accessors below
/// delegate here.
pub fn evaluate<A: MoufangAction>(
    space: &A,
    g: &[f64],
    a: &[f64],
) -> Result<IntegrabilityRecord, crate::actions::ActionError> {
    let r = space.base().dim();
    let n = space.dim();

    let (out_s, jg_s, ja_s) = action_jacobians(space, ActionSide::S, g, a)?;
    let (out_t, jg_t, ja_t) = action_jacobians(space, ActionSide::T, g, a)?;

    let sf_g = space.base().secondary_frame(g)?;
    let asf_a = action_secondary(space, a)?;
    let asf_s = action_secondary(space, &out_s)?;
    let asf_t = action_secondary(space, &out_t)?;

    let y_g = (&sf_g.u2 + &sf_g.v2 + &sf_g.w2) / 6.0;
    let y_a = (&asf_a.s2 + &asf_a.t2 + &asf_a.p2) / 6.0;
    let y_out_s = (&asf_s.s2 + &asf_s.t2 + &asf_s.p2) / 6.0;
    let y_out_t = (&asf_t.s2 + &asf_t.t2 + &asf_t.p2) / 6.0;

    // Transport one rank-3 coefficient array through the action Jacobians
    // and subtract its value at the transported point.
    let transport = |loop_arr: &Array3<f64>,
                     space_arr: &Array3<f64>,
                     out_arr: &Array3<f64>,
                     jg: &ndarray::Array2<f64>,
                     ja: &ndarray::Array2<f64>| {
        Array3::from_shape_fn((n, r, r), |(mu, j, k)| {
            let from_g: f64 = (0..r).map(|s| loop_arr[[s, j, k]] * jg[[mu, s]]).sum();
            let from_a: f64 = (0..n).map(|nu| space_arr[[nu, j, k]] * ja[[mu, nu]]).sum();
            from_g + from_a - out_arr[[mu, j, k]]
        })
    };

    let residual_yam_s = transport(&y_g, &y_a, &y_out_s, &jg_s, &ja_s);
    let residual_yam_t = transport(&y_g, &y_a, &y_out_t, &jg_t, &ja_t);

    let intermediates_s = [
        transport(&sf_g.v2, &asf_a.p2, &asf_s.t2, &jg_s, &ja_s),
        transport(&sf_g.u2, &asf_a.t2, &asf_s.p2, &jg_s, &ja_s),
        transport(&sf_g.w2, &asf_a.s2, &asf_s.s2, &jg_s, &ja_s),
    ];
    let intermediates_t = [
        transport(&sf_g.u2, &asf_a.p2, &asf_t.s2, &jg_t, &ja_t),
        transport(&sf_g.v2, &asf_a.s2, &asf_t.p2, &jg_t, &ja_t),
        transport(&sf_g.w2, &asf_a.t2, &asf_t.t2, &jg_t, &ja_t),
    ];

    let gaps = |ints: &[Array3<f64>; 3], yam: &Array3<f64>| -> ([f64; 3], f64) {
        let mut per = [0.0f64; 3];
        for (i, arr) in ints.iter().enumerate() {
            per[i] = max_abs((arr - &(yam * 2.0)).iter());
        }
        let sum = &ints[0] + &ints[1] + &ints[2];
        let total = max_abs((&sum - &(yam * 6.0)).iter());
        (per, total)
    };
    let (equivalence_gap_s, sum_gap_s) = gaps(&intermediates_s, &residual_yam_s);
    let (equivalence_gap_t, sum_gap_t) = gaps(&intermediates_t, &residual_yam_t);

    Ok(IntegrabilityRecord {
        g: g.to_vec(),
        a: a.to_vec(),
        residual_yam_s,
        residual_yam_t,
        intermediates_s,
        intermediates_t,
        equivalence_gap_s,
        equivalence_gap_t,
        sum_gap_s,
        sum_gap_t,
    })
}

/// Residual of the Yamaguti transport identity for `S_g A`.
pub fn integrability_residual_s<A: MoufangAction>(
    space: &A,
    g: &[f64],
    a: &[f64],
) -> Result<Array3<f64>, crate::actions::ActionError> {
    Ok(evaluate(space, g, a)?.residual_yam_s)
}

/// Residual of the Yamaguti transport identity for `T_g A`.
pub fn integrability_residual_t<A: MoufangAction>(
    space: &A,
    g: &[f64],
    a: &[f64],
) -> Result<Array3<f64>, crate::actions::ActionError> {
    Ok(evaluate(space, g, a)?.residual_yam_t)
}

/// The three intermediate transport residuals on the `S` side.
pub fn intermediate_residuals_s<A: MoufangAction>(
    space: &A,
    g: &[f64],
    a: &[f64],
) -> Result<[Array3<f64>; 3], crate::actions::ActionError> {
    Ok(evaluate(space, g, a)?.intermediates_s)
}

/// The three intermediate transport residuals on the `T` side, obtained
/// from the `S` side by the `S <-> T`, `u <-> v` mirror.
pub fn intermediate_residuals_t<A: MoufangAction>(
    space: &A,
    g: &[f64],
    a: &[f64],
) -> Result<[Array3<f64>; 3], crate::actions::ActionError> {
    Ok(evaluate(space, g, a)?.intermediates_t)
}

/// Sup-norm gaps between each intermediate residual and twice the
/// Yamaguti residual of its side.
pub fn equivalence_check<A: MoufangAction>(
    space: &A,
    g: &[f64],
    a: &[f64],
) -> Result<([f64; 3], [f64; 3]), crate::actions::ActionError> {
    let rec = evaluate(space, g, a)?;
    Ok((rec.equivalence_gap_s, rec.equivalence_gap_t))
}

/// Symmetry of the second derivatives of both action maps, reported per
/// coordinate block (`gg`, `gA` against `Ag`, `AA`). A smoothness gate:
/// hyper-dual Hessians are symmetric by construction, so any nonzero here
/// (or a NaN) flags a broken evaluation.
pub fn mixed_partials_check<A: MoufangAction>(
    space: &A,
    g: &[f64],
    a: &[f64],
) -> Result<Vec<Residual>, crate::actions::ActionError> {
    space.base().check_point(g)?;
    space.check_space_point(a)?;
    let r = space.base().dim();
    let n = space.dim();
    let mut joint = Vec::with_capacity(r + n);
    joint.extend_from_slice(g);
    joint.extend_from_slice(a);

    let mut out = Vec::with_capacity(6);
    for (side, tag_gg, tag_ga, tag_aa) in [
        (ActionSide::S, "sym.S.gg", "sym.S.gA", "sym.S.AA"),
        (ActionSide::T, "sym.T.gg", "sym.T.gA", "sym.T.AA"),
    ] {
        let jr =
            jet2(&crate::actions::PairActionMap { space, side }, &joint).expect("points validated");
        let hessians = jr.hessians.expect("jet2 carries hessians");
        let mut gap_gg = 0.0f64;
        let mut gap_ga = 0.0f64;
        let mut gap_aa = 0.0f64;
        for h in &hessians {
            for j in 0..r {
                for k in 0..r {
                    gap_gg = gap_gg.max((h[[j, k]] - h[[k, j]]).abs());
                }
                for nu in 0..n {
                    gap_ga = gap_ga.max((h[[j, r + nu]] - h[[r + nu, j]]).abs());
                }
            }
            for la in 0..n {
                for nu in 0..n {
                    gap_aa = gap_aa.max((h[[r + la, r + nu]] - h[[r + nu, r + la]]).abs());
                }
            }
        }
        out.push(Residual::new(tag_gg, gap_gg));
        out.push(Residual::new(tag_ga, gap_ga));
        out.push(Residual::new(tag_aa, gap_aa));
    }
    Ok(out)
}

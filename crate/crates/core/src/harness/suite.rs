//! Check execution over sampled points and report assembly.

use thiserror::Error;

use super::calibrate::{calibrate_signs, CalibrationError};
use super::config::{ConfigError, LoopSelect, SuiteConfig};
use super::sample::{derive_seed, sample_pairs, sample_points, sample_triples};
use crate::actions::{
    self, action_aux, check_action_mc, check_lemma2, gle_residual_s, gle_residual_t,
    ActionTranslationSumMap, MoufangAction, RegularAction,
};
use crate::integrability;
use crate::jets::{fd_jacobian, jet1};
use crate::loops::{self, LoopChart, LoopKind, StructureConstants, TranslationSumMap};
use crate::report::{max_abs, CheckRecord, CheckReport, Signs};

const FD_STEP: f64 = 1e-5;
/// Structural identities (cancellation sums, Hessian symmetry, constraint
/// recomputation) hold to rounding regardless of the configured tolerance.
const TIGHT_TOL: f64 = 1e-12;
/// Mixed translation brackets on associative instances.
const ASSOC_TOL: f64 = 1e-10;
/// Relative agreement between dual-number and central-difference Jacobians.
const AD_FD_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
}

fn tolerance_for(check: &str, cfg: &SuiteConfig) -> f64 {
    let tight = check.ends_with(".fd") && check.starts_with("constraint.")
        || check.ends_with(".sum")
        || check.starts_with("sum.")
        || check.starts_with("sym.");
    if check == "constraint.uvw" || check == "constraint.stp" {
        0.0
    } else if tight {
        TIGHT_TOL
    } else if check == "assoc.lr" || check == "assoc.rl" {
        ASSOC_TOL
    } else if check.starts_with("jets.fd") {
        AD_FD_TOL
    } else {
        cfg.tolerance
    }
}

/// Convention notes echoed in every report header.
fn conventions() -> Vec<String> {
    [
        "signs (sigma, tau) are calibrated once on the quaternion instance with a fixed internal seed and frozen for all instances",
        "frames: u differentiates the left product slot, v the right; w = -(u + v) and P = -(S + T) by construction",
        "gle checks evaluate every space-side frame at the point A and every transported frame at the image X_g A",
        "action-side secondary frames differentiate the action frames with respect to A",
        "yamaguti tensors are one sixth of the sum of the three secondary frames on either side",
        "t-side intermediate transport identities are the s<->t, u<->v mirror of the s-side ones",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

fn selected_loops(cfg: &SuiteConfig) -> Vec<LoopChart> {
    let base = match cfg.loop_id {
        LoopSelect::Abelian => vec![LoopChart::abelian(cfg.abelian_dim)],
        LoopSelect::Quaternion => vec![LoopChart::quaternion()],
        LoopSelect::Octonion => vec![LoopChart::octonion()],
        LoopSelect::All => vec![
            LoopChart::abelian(cfg.abelian_dim),
            LoopChart::quaternion(),
            LoopChart::octonion(),
        ],
    };
    base.into_iter()
        .map(|chart| chart.with_radius(cfg.radius))
        .collect()
}

struct Collector<'a> {
    cfg: &'a SuiteConfig,
    loop_id: &'a str,
    rows: Vec<(usize, CheckRecord)>,
}

impl Collector<'_> {
    fn push(&mut self, check: &str, idx: usize, point: &[f64], residual: f64) {
        if !self.cfg.selected(check) {
            return;
        }
        let tol = tolerance_for(check, self.cfg);
        self.rows.push((
            idx,
            CheckRecord::new(check, self.loop_id, point.to_vec(), residual, tol),
        ));
    }

    fn push_failure(&mut self, check: &str, idx: usize, point: &[f64], reason: &str) {
        if !self.cfg.selected(check) {
            return;
        }
        let tol = tolerance_for(check, self.cfg);
        self.rows.push((
            idx,
            CheckRecord::failed(check, self.loop_id, point.to_vec(), tol, reason.to_string()),
        ));
    }

    fn any_selected(&self, ids: &[&str]) -> bool {
        ids.iter().any(|id| self.cfg.selected(id))
    }
}

fn concat2(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out
}

fn concat3(a: &[f64], b: &[f64], c: &[f64]) -> Vec<f64> {
    let mut out = concat2(a, b);
    out.extend_from_slice(c);
    out
}

/// Execute every selected check over the configured instances and samples.
///
/// Records come back sorted by (check id, loop, sample index) no matter in
/// which order they were produced; identical configs produce byte-identical
/// JSON reports.
pub fn run_suite(cfg: &SuiteConfig) -> Result<CheckReport, SuiteError> {
    cfg.validate()?;
    let signs = calibrate_signs()?;

    let mut rows: Vec<(usize, CheckRecord)> = Vec::new();
    for chart in selected_loops(cfg) {
        let mut col = Collector {
            cfg,
            loop_id: chart.name(),
            rows: Vec::new(),
        };
        run_instance(cfg, signs, &chart, &mut col);
        rows.append(&mut col.rows);
    }

    rows.sort_by(|a, b| {
        a.1.check
            .cmp(&b.1.check)
            .then_with(|| a.1.loop_id.cmp(&b.1.loop_id))
            .then_with(|| a.0.cmp(&b.0))
    });

    Ok(CheckReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        signs,
        notes: conventions(),
        records: rows.into_iter().map(|(_, r)| r).collect(),
    })
}

fn run_instance(cfg: &SuiteConfig, signs: Signs, chart: &LoopChart, col: &mut Collector) {
    let space = RegularAction::new(chart.clone());
    let constants = chart.structure_constants(signs.sigma);
    let dim = chart.dim();
    let points = sample_points(derive_seed(cfg.seed, 0), cfg.samples, cfg.radius, dim);
    let pairs = sample_pairs(derive_seed(cfg.seed, 1), cfg.samples, cfg.radius, dim);
    let triples = sample_triples(derive_seed(cfg.seed, 2), cfg.samples, cfg.radius, dim);

    if col.any_selected(&["moufang"]) {
        for (i, (g, h, k)) in triples.iter().enumerate() {
            let point = concat3(g, h, k);
            match chart.check_moufang(g, h, k) {
                Ok(res) => col.push("moufang", i, &point, res.max_abs),
                Err(e) => col.push_failure("moufang", i, &point, &e.to_string()),
            }
        }
    }

    let loop_point_ids = [
        "constraint.uvw",
        "constraint.uvw.fd",
        "mc.4a",
        "mc.4b",
        "mc.4c",
        "assoc.lr",
        "assoc.rl",
        "assoc.4a",
        "lemma1.6a",
        "lemma1.6b",
        "lemma1.6c",
        "lemma1.sum",
    ];
    if col.any_selected(&loop_point_ids) {
        for (i, p) in points.iter().enumerate() {
            loop_point_checks(chart, &constants, signs, i, p, col);
        }
    }

    let action_point_ids = [
        "constraint.stp",
        "constraint.stp.fd",
        "mc.7a",
        "mc.7b",
        "mc.7c",
        "lemma2.9a",
        "lemma2.9b",
        "lemma2.9c",
        "lemma2.sum",
    ];
    if col.any_selected(&action_point_ids) {
        for (i, p) in points.iter().enumerate() {
            action_point_checks(&space, &constants, signs, i, p, col);
        }
    }

    let pair_ids = [
        "gle.S.1a",
        "gle.S.1b",
        "gle.S.1c",
        "gle.T.3a",
        "gle.T.3b",
        "gle.T.3c",
        "thm.11a",
        "thm.11b",
        "int.S.12",
        "int.S.13a",
        "int.S.13b",
        "int.T.12",
        "int.T.13a",
        "int.T.13b",
        "equiv.S.12",
        "equiv.S.13a",
        "equiv.S.13b",
        "equiv.T.12",
        "equiv.T.13a",
        "equiv.T.13b",
        "sum.S",
        "sum.T",
        "sym.S.gg",
        "sym.S.gA",
        "sym.S.AA",
        "sym.T.gg",
        "sym.T.gA",
        "sym.T.AA",
    ];
    if col.any_selected(&pair_ids) {
        for (i, (g, a)) in pairs.iter().enumerate() {
            pair_checks(&space, i, g, a, col);
        }
    }

    jets_integrity_checks(chart, &space, &points, &pairs, col);
}

fn loop_point_checks(
    chart: &LoopChart,
    constants: &StructureConstants,
    signs: Signs,
    i: usize,
    p: &[f64],
    col: &mut Collector,
) {
    if col.cfg.selected("constraint.uvw") {
        match chart.aux_frame(p) {
            Ok(af) => col.push("constraint.uvw", i, p, af.constraint_gap()),
            Err(e) => col.push_failure("constraint.uvw", i, p, &e.to_string()),
        }
    }
    if col.cfg.selected("constraint.uvw.fd") {
        let map = TranslationSumMap {
            chart,
            at: p.to_vec(),
        };
        match fd_jacobian(&map, &chart.identity(), FD_STEP) {
            Ok(j) => col.push("constraint.uvw.fd", i, p, max_abs(j.iter())),
            Err(e) => col.push_failure("constraint.uvw.fd", i, p, &e.to_string()),
        }
    }

    let mc_ids = ["mc.4a", "mc.4b", "mc.4c"];
    if col.any_selected(&mc_ids) {
        match chart.check_maurer_cartan(constants, p) {
            Ok(rows) => {
                for r in rows {
                    col.push(r.id, i, p, r.max_abs);
                }
            }
            Err(e) => {
                for id in mc_ids {
                    col.push_failure(id, i, p, &e.to_string());
                }
            }
        }
    }

    // Degeneracy checks: on associative instances both mixed brackets
    // vanish, and the self-bracket relation loses its bracket term.
    let assoc_ids = ["assoc.lr", "assoc.rl", "assoc.4a"];
    if chart.kind() != LoopKind::Octonion && col.any_selected(&assoc_ids) {
        match (chart.secondary_frame(p), chart.aux_frame(p)) {
            (Ok(sf), Ok(af)) => {
                col.push("assoc.lr", i, p, max_abs(sf.lr.iter()));
                col.push("assoc.rl", i, p, max_abs(sf.rl.iter()));
                let r = chart.dim();
                let mut worst = 0.0f64;
                for s in 0..r {
                    for j in 0..r {
                        for k in 0..r {
                            let cu: f64 =
                                (0..r).map(|m| constants.c[[m, j, k]] * af.u[[s, m]]).sum();
                            worst = worst.max((-sf.u2[[s, j, k]] - cu).abs());
                        }
                    }
                }
                col.push("assoc.4a", i, p, worst);
            }
            (Err(e), _) | (_, Err(e)) => {
                for id in assoc_ids {
                    col.push_failure(id, i, p, &e.to_string());
                }
            }
        }
    }

    let lemma_ids = ["lemma1.6a", "lemma1.6b", "lemma1.6c", "lemma1.sum"];
    if col.any_selected(&lemma_ids) {
        match chart.check_lemma1(constants, signs.tau, p) {
            Ok(rows) => {
                for r in rows {
                    col.push(r.id, i, p, r.max_abs);
                }
            }
            Err(e) => {
                for id in lemma_ids {
                    col.push_failure(id, i, p, &e.to_string());
                }
            }
        }
    }
}

fn action_point_checks<A: MoufangAction>(
    space: &A,
    constants: &StructureConstants,
    signs: Signs,
    i: usize,
    p: &[f64],
    col: &mut Collector,
) {
    if col.cfg.selected("constraint.stp") {
        match action_aux(space, p) {
            Ok(af) => col.push("constraint.stp", i, p, af.constraint_gap()),
            Err(e) => col.push_failure("constraint.stp", i, p, &e.to_string()),
        }
    }
    if col.cfg.selected("constraint.stp.fd") {
        let map = ActionTranslationSumMap {
            space,
            at: p.to_vec(),
        };
        match fd_jacobian(&map, &space.base().identity(), FD_STEP) {
            Ok(j) => col.push("constraint.stp.fd", i, p, max_abs(j.iter())),
            Err(e) => col.push_failure("constraint.stp.fd", i, p, &e.to_string()),
        }
    }

    let mc_ids = ["mc.7a", "mc.7b", "mc.7c"];
    if col.any_selected(&mc_ids) {
        match check_action_mc(space, constants, p) {
            Ok(rows) => {
                for r in rows {
                    col.push(r.id, i, p, r.max_abs);
                }
            }
            Err(e) => {
                for id in mc_ids {
                    col.push_failure(id, i, p, &e.to_string());
                }
            }
        }
    }

    let lemma_ids = ["lemma2.9a", "lemma2.9b", "lemma2.9c", "lemma2.sum"];
    if col.any_selected(&lemma_ids) {
        match check_lemma2(space, constants, signs.tau, p) {
            Ok(rows) => {
                for r in rows {
                    col.push(r.id, i, p, r.max_abs);
                }
            }
            Err(e) => {
                for id in lemma_ids {
                    col.push_failure(id, i, p, &e.to_string());
                }
            }
        }
    }
}

fn pair_checks<A: MoufangAction>(space: &A, i: usize, g: &[f64], a: &[f64], col: &mut Collector) {
    let point = concat2(g, a);

    let gle_s_ids = ["gle.S.1a", "gle.S.1b", "gle.S.1c"];
    if col.any_selected(&gle_s_ids) {
        match gle_residual_s(space, g, a) {
            Ok(res) => {
                for (id, m) in gle_s_ids.iter().zip(res.max_abs()) {
                    col.push(id, i, &point, m);
                }
            }
            Err(e) => {
                for id in gle_s_ids {
                    col.push_failure(id, i, &point, &e.to_string());
                }
            }
        }
    }
    let gle_t_ids = ["gle.T.3a", "gle.T.3b", "gle.T.3c"];
    if col.any_selected(&gle_t_ids) {
        match gle_residual_t(space, g, a) {
            Ok(res) => {
                for (id, m) in gle_t_ids.iter().zip(res.max_abs()) {
                    col.push(id, i, &point, m);
                }
            }
            Err(e) => {
                for id in gle_t_ids {
                    col.push_failure(id, i, &point, &e.to_string());
                }
            }
        }
    }

    let int_ids = [
        "thm.11a",
        "thm.11b",
        "int.S.12",
        "int.S.13a",
        "int.S.13b",
        "int.T.12",
        "int.T.13a",
        "int.T.13b",
        "equiv.S.12",
        "equiv.S.13a",
        "equiv.S.13b",
        "equiv.T.12",
        "equiv.T.13a",
        "equiv.T.13b",
        "sum.S",
        "sum.T",
    ];
    if col.any_selected(&int_ids) {
        match integrability::evaluate(space, g, a) {
            Ok(rec) => {
                col.push("thm.11a", i, &point, max_abs(rec.residual_yam_s.iter()));
                col.push("thm.11b", i, &point, max_abs(rec.residual_yam_t.iter()));
                for (id, arr) in ["int.S.12", "int.S.13a", "int.S.13b"]
                    .iter()
                    .zip(&rec.intermediates_s)
                {
                    col.push(id, i, &point, max_abs(arr.iter()));
                }
                for (id, arr) in ["int.T.12", "int.T.13a", "int.T.13b"]
                    .iter()
                    .zip(&rec.intermediates_t)
                {
                    col.push(id, i, &point, max_abs(arr.iter()));
                }
                for (id, gap) in ["equiv.S.12", "equiv.S.13a", "equiv.S.13b"]
                    .iter()
                    .zip(rec.equivalence_gap_s)
                {
                    col.push(id, i, &point, gap);
                }
                for (id, gap) in ["equiv.T.12", "equiv.T.13a", "equiv.T.13b"]
                    .iter()
                    .zip(rec.equivalence_gap_t)
                {
                    col.push(id, i, &point, gap);
                }
                col.push("sum.S", i, &point, rec.sum_gap_s);
                col.push("sum.T", i, &point, rec.sum_gap_t);
            }
            Err(e) => {
                for id in int_ids {
                    col.push_failure(id, i, &point, &e.to_string());
                }
            }
        }
    }

    let sym_ids = [
        "sym.S.gg", "sym.S.gA", "sym.S.AA", "sym.T.gg", "sym.T.gA", "sym.T.AA",
    ];
    if col.any_selected(&sym_ids) {
        match integrability::mixed_partials_check(space, g, a) {
            Ok(rows) => {
                for r in rows {
                    col.push(r.id, i, &point, r.max_abs);
                }
            }
            Err(e) => {
                for id in sym_ids {
                    col.push_failure(id, i, &point, &e.to_string());
                }
            }
        }
    }
}

/// Dual-number Jacobians against central differences on every registered
/// map, reported as a relative gap.
fn jets_integrity_checks<A: MoufangAction>(
    chart: &LoopChart,
    space: &A,
    points: &[Vec<f64>],
    pairs: &[(Vec<f64>, Vec<f64>)],
    col: &mut Collector,
) {
    let mut maps = loops::registered_maps(chart);
    maps.extend(actions::registered_maps(space));
    for map in maps {
        let id = format!("jets.fd.{}", map.name());
        if !col.cfg.selected(&id) {
            continue;
        }
        let dim = chart.dim();
        for i in 0..points.len() {
            let x: Vec<f64> = if map.in_dim() == dim {
                points[i].clone()
            } else {
                assert_eq!(map.in_dim(), 2 * dim, "unexpected registered-map arity");
                concat2(&pairs[i].0, &pairs[i].1)
            };
            let ad = match jet1(map.as_ref(), &x) {
                Ok(jr) => jr,
                Err(e) => {
                    col.push_failure(&id, i, &x, &e.to_string());
                    continue;
                }
            };
            let fd = match fd_jacobian(map.as_ref(), &x, FD_STEP) {
                Ok(j) => j,
                Err(e) => {
                    col.push_failure(&id, i, &x, &e.to_string());
                    continue;
                }
            };
            let gap = max_abs((&ad.jacobian - &fd).iter());
            let rel = gap / (1.0 + max_abs(ad.jacobian.iter()));
            col.push(&id, i, &x, rel);
        }
    }
}

//! Deterministic, seeded sampling of chart points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Derive an independent stream seed, so point/pair/triple streams do not
/// shift when the number of consumed samples changes elsewhere.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn ball_point(rng: &mut ChaCha8Rng, radius: f64, dim: usize) -> Vec<f64> {
    // Rejection from the enclosing cube keeps the draw uniform in the ball.
    loop {
        let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(-radius..radius)).collect();
        if p.iter().map(|x| x * x).sum::<f64>() < radius * radius {
            return p;
        }
    }
}

/// `count` points uniform in the ball of the given radius; the same seed
/// and arguments reproduce the sequence bitwise.
pub fn sample_points(seed: u64, count: usize, radius: f64, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ball_point(&mut rng, radius, dim))
        .collect()
}

/// Point pairs `(g, A)` from one stream.
pub fn sample_pairs(seed: u64, count: usize, radius: f64, dim: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = ball_point(&mut rng, radius, dim);
            let a = ball_point(&mut rng, radius, dim);
            (g, a)
        })
        .collect()
}

/// Point triples `(g, h, k)` from one stream.
#[allow(clippy::type_complexity)]
pub fn sample_triples(
    seed: u64,
    count: usize,
    radius: f64,
    dim: usize,
) -> Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = ball_point(&mut rng, radius, dim);
            let h = ball_point(&mut rng, radius, dim);
            let k = ball_point(&mut rng, radius, dim);
            (g, h, k)
        })
        .collect()
}

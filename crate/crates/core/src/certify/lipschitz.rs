//! Sampled lower estimate of the Lipschitz constant of `F(t, ·)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::norm2;
use crate::simulate::DynamicsSpec;

const SEED: u64 = 0x5eed_1ead;

/// `max ‖F(t,x) − F(t,y)‖ / ‖x − y‖` over `samples` random pairs with
/// `t ∈ [t_lo, t_hi]` and `x ∈ [−radius, radius]^n`; `y` is a perturbation of
/// `x` at a random scale between 1e-6 and 1. Deterministic for fixed inputs.
pub fn estimate_lipschitz(
    f: &DynamicsSpec,
    n: usize,
    t_lo: f64,
    t_hi: f64,
    radius: f64,
    samples: usize,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let t = if t_hi > t_lo { rng.gen_range(t_lo..=t_hi) } else { t_lo };
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-radius..=radius)).collect();
        let scale = 10f64.powf(rng.gen_range(-6.0..=0.0));
        let d: Vec<f64> = (0..n).map(|_| scale * rng.gen_range(-1.0..=1.0)).collect();
        let dn = norm2(&d);
        if dn == 0.0 {
            continue;
        }
        let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
        let fx = f.eval(t, &x);
        let fy = f.eval(t, &y);
        let diff: Vec<f64> = fx.iter().zip(&fy).map(|(a, b)| a - b).collect();
        best = best.max(norm2(&diff) / dn);
    }
    best
}

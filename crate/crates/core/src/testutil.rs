//! Random curve pairs for the property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{analyze, Analysis, Tolerances};
use crate::net::{ConormalNet, PolyCurve};
use crate::Vec3;

/// `n` samples of a random cubic space curve on `[−1, 1]`, each point
/// jittered by up to `jitter · h²`.
pub fn random_curve(rng: &mut ChaCha8Rng, n: usize, z0: f64, jitter: f64) -> PolyCurve {
    let c: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let h = 2.0 / (n - 1) as f64;
    let points = (0..n)
        .map(|k| {
            let t = -1.0 + k as f64 * h;
            let smooth = Vec3::new(
                t + c[0] * t * t,
                c[1] * t * t + c[2] * t * t * t,
                z0 + c[3] * t + c[4] * t * t + c[5] * t * t * t * 0.5,
            );
            let e = Vec3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            smooth + e * (jitter * h * h)
        })
        .collect();
    PolyCurve::new(0, points).expect("distinct samples")
}

/// Random pair with `n` samples per curve; the α curve floats above β.
pub fn random_net(seed: u64, n: usize) -> ConormalNet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = random_curve(&mut rng, n, 2.5, 0.3);
    let beta = random_curve(&mut rng, n, 0.0, 0.3);
    ConormalNet::new(alpha, beta).expect("separated curves")
}

/// First `count` random nets (seeds from `first_seed`) whose analysis
/// succeeds with every vertex admissible.
pub fn admissible_nets(first_seed: u64, count: usize, n: usize) -> Vec<Analysis> {
    let mut out = Vec::with_capacity(count);
    let mut seed = first_seed;
    while out.len() < count {
        let net = random_net(seed, n);
        seed += 1;
        if let Ok(a) = analyze(&net, Tolerances::default()) {
            if a.is_admissible() {
                out.push(a);
            }
        }
    }
    out
}

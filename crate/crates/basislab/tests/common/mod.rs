#![allow(dead_code)] // each test binary uses its own subset

//! Shared test helpers: independent reference integrators and random
//! rational generators. Everything here deliberately avoids the library's
//! fast paths so it can serve as an oracle against them.

use basislab::scalar::{rat, rat_to_f64, Rat};
use basislab::spaces::{k_functional_f64, norm_exact, NormSpec};
use num_traits::Zero;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Dense-grid trapezoid reference for the interpolation norm: K evaluated by
/// a fresh linear program at every grid point, closed-form tails outside a
/// bracket that is verified (and widened if needed) to lie in the exact
/// linear/plateau regimes.
pub fn trapezoid_interpolation_norm(
    f: &[Rat],
    base0: &NormSpec,
    base1: &NormSpec,
    theta: f64,
    q: f64,
    grid: usize,
) -> f64 {
    let n0 = rat_to_f64(&norm_exact(f, base0));
    let n1 = rat_to_f64(&norm_exact(f, base1));
    if n0 == 0.0 {
        return 0.0;
    }
    let ff: Vec<f64> = f.iter().map(rat_to_f64).collect();
    let kf = |t: f64| k_functional_f64(&ff, t, base0, base1).expect("K-functional LP");

    // bracket the breakpoints; widen until the tails are exact
    let ratio = n0 / n1;
    let mut lo = ratio / 100.0;
    let mut hi = ratio * 100.0;
    for _ in 0..4 {
        if (kf(lo) - lo * n1).abs() <= 1e-9 * n0 {
            break;
        }
        lo /= 100.0;
    }
    for _ in 0..4 {
        if (kf(hi) - n0).abs() <= 1e-9 * n0 {
            break;
        }
        hi *= 100.0;
    }
    assert!((kf(lo) - lo * n1).abs() <= 1e-8 * n0, "low tail not linear");
    assert!((kf(hi) - n0).abs() <= 1e-8 * n0, "high tail not flat");

    let tq = theta * q;
    let low_tail = n1.powf(q) * lo.powf(q * (1.0 - theta)) / (q * (1.0 - theta));
    let high_tail = n0.powf(q) * hi.powf(-tq) / tq;

    // plain trapezoid in log t on a uniform dense grid
    let a = lo.ln();
    let b = hi.ln();
    let h = (b - a) / (grid - 1) as f64;
    let g = |tau: f64| {
        let t = tau.exp();
        kf(t).powf(q) * (-tq * tau).exp()
    };
    let mut sum = 0.5 * (g(a) + g(b));
    for i in 1..grid - 1 {
        sum += g(a + i as f64 * h);
    }
    let middle = sum * h;

    (low_tail + middle + high_tail).powf(1.0 / q)
}

/// Random exact rational with numerator in [-bound, bound] and denominator
/// in [1, den_max].
pub fn random_rat(rng: &mut ChaCha8Rng, bound: i64, den_max: i64) -> Rat {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=den_max))
}

/// Random nonzero rational vector.
pub fn random_vec(rng: &mut ChaCha8Rng, dim: usize, bound: i64, den_max: i64) -> Vec<Rat> {
    loop {
        let v: Vec<Rat> = (0..dim).map(|_| random_rat(rng, bound, den_max)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// A random polyhedral spec for a given dimension: leaf norms and one-level
/// max direct sums.
pub fn random_polyhedral_spec(rng: &mut ChaCha8Rng, dim: usize) -> NormSpec {
    let leaf = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3u8) {
        0 => NormSpec::l1(),
        1 => NormSpec::Sup,
        _ => NormSpec::V1,
    };
    if dim >= 2 && rng.gen_bool(0.4) {
        let split = rng.gen_range(1..dim);
        NormSpec::direct_sum_max(leaf(rng), split, leaf(rng), dim - split)
    } else {
        leaf(rng)
    }
}

//! Real-interpolation norms: ||f||_{theta,q}^q = Int_0^inf K^q(f,t) dt / t^{1+theta q}.
//!
//! The K-functional profile in t is recovered exactly (it is concave
//! piecewise linear), the two tails are integrated in closed form — K is
//! exactly t ||f||_1 below the first breakpoint and exactly ||f||_0 above the
//! last — and the middle segments by adaptive doubling quadrature in log t.

use super::kfun::k_profile_f64;
use super::{NormSpec, SpaceError};
use crate::scalar::{rat_to_f64, Rat};
use crate::vector::CoordVector;
use num_rational::BigRational;

/// Interpolation norm for an `Interpolated` spec.
pub fn interpolated_norm(f: &CoordVector, spec: &NormSpec) -> Result<f64, SpaceError> {
    let NormSpec::Interpolated {
        base0,
        base1,
        theta,
        q,
        quadrature,
    } = spec
    else {
        return Err(SpaceError::InvalidParameter(
            "interpolated_norm requires an Interpolated spec".into(),
        ));
    };
    spec.check_dim(f.dim())?;
    let exact = f.as_exact().unwrap_or_else(|| {
        // binary floats are rationals; transport them exactly
        f.to_f64s()
            .iter()
            .map(|&x| BigRational::from_float(x).unwrap_or_else(|| Rat::from_integer(0.into())))
            .collect()
    });
    interpolated_norm_parts(
        &exact,
        base0,
        base1,
        rat_to_f64(theta),
        rat_to_f64(q),
        quadrature.refinement_limit,
        quadrature.relative_tolerance,
    )
}

/// Interpolation norm from raw parts.
pub fn interpolated_norm_parts(
    f: &[Rat],
    base0: &NormSpec,
    base1: &NormSpec,
    theta: f64,
    q: f64,
    refinement_limit: u32,
    rel_tol: f64,
) -> Result<f64, SpaceError> {
    let ff: Vec<f64> = f.iter().map(rat_to_f64).collect();
    let prof = k_profile_f64(&ff, base0, base1, refinement_limit)?;
    if prof.is_zero() {
        return Ok(0.0);
    }
    let tq = theta * q;

    // closed-form tails
    let t_first = prof.breakpoints[0];
    let t_last = *prof.breakpoints.last().unwrap();
    let low = prof.norm1.powf(q) * t_first.powf(q * (1.0 - theta)) / (q * (1.0 - theta));
    let high = prof.norm0.powf(q) * t_last.powf(-tq) / tq;

    // middle: one smooth integrand per affine piece, in log-t coordinates
    let mut middle = 0.0;
    for i in 0..prof.breakpoints.len().saturating_sub(1) {
        let (a, s) = prof.pieces[i + 1];
        let lo = prof.breakpoints[i].ln();
        let hi = prof.breakpoints[i + 1].ln();
        if hi <= lo {
            continue;
        }
        let g = |tau: f64| {
            let t = tau.exp();
            (a + s * t).powf(q) * (-tq * tau).exp()
        };
        middle += adaptive_doubling(&g, lo, hi, rel_tol, refinement_limit)?;
    }

    Ok((low + middle + high).powf(1.0 / q))
}

/// Trapezoid with interval doubling and Richardson extrapolation to Simpson;
/// refines until the relative change drops below `rel_tol`.
fn adaptive_doubling(
    g: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    refinement_limit: u32,
) -> Result<f64, SpaceError> {
    let h0 = hi - lo;
    let mut n: u64 = 1;
    let mut trap = 0.5 * h0 * (g(lo) + g(hi));
    let mut simpson_prev = f64::NAN;
    for _ in 0..refinement_limit {
        let h = h0 / n as f64;
        let mids: f64 = (0..n).map(|i| g(lo + (i as f64 + 0.5) * h)).sum();
        let trap_next = 0.5 * (trap + h * mids);
        let simpson = (4.0 * trap_next - trap) / 3.0;
        if simpson_prev.is_finite() {
            let change = (simpson - simpson_prev).abs();
            if change <= rel_tol * simpson.abs().max(f64::MIN_POSITIVE) {
                return Ok(simpson);
            }
        }
        simpson_prev = simpson;
        trap = trap_next;
        n *= 2;
    }
    Err(SpaceError::QuadratureFailure {
        last_lo: lo.exp(),
        last_hi: hi.exp(),
        last_change: (simpson_prev - trap).abs(),
    })
}

/// The inclusion constant c(theta, q) with
/// ||f||_{theta,q} <= c(theta,q) max(||f||_0, ||f||_1), obtained by pushing
/// the envelope bound K(f,t) <= max(||f||_0, ||f||_1) min(1, t) through the
/// defining integral.
pub fn inclusion_constant(theta: f64, q: f64) -> f64 {
    (1.0 / (q * (1.0 - theta)) + 1.0 / (theta * q)).powf(1.0 / q)
}

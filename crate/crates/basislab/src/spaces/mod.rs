//! Coordinate-space norms: evaluation, duals, unit-ball geometry, operator
//! norms, K-functionals and real-interpolation norms.
//!
//! The polyhedral norms (`Lp{1}`, `Sup`, `V1` and max direct sums of these)
//! evaluate exactly on rational input. Everything else is float mode.

pub(crate) mod enumerate;
mod interp;
mod kfun;
mod opnorm;
pub mod simplex;
mod vertices;

pub use interp::{inclusion_constant, interpolated_norm, interpolated_norm_parts};
pub use kfun::{k_functional, k_functional_exact, k_functional_f64, k_profile, k_profile_f64, sum_norm_via_dual_lp, KProfile};
pub use opnorm::{operator_norm, operator_norm_exact_rat, OpNormMode, OpNormResult};
pub use vertices::{dual_ball_points, unit_ball_vertices, unit_ball_vertices_rat, vertex_count};

use crate::scalar::{rat_to_f64, Rat, Scalar};
use crate::vector::CoordVector;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Numerical-integration controls for interpolation norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureParams {
    /// Central bracket for the K-functional integral; the tails beyond are
    /// integrated in closed form. Interpreted as multiples of the natural
    /// breakpoint bracket when left at the defaults.
    #[serde(with = "crate::io::rat_serde")]
    pub t_min: Rat,
    #[serde(with = "crate::io::rat_serde")]
    pub t_max: Rat,
    pub refinement_limit: u32,
    pub relative_tolerance: f64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams {
            t_min: Rat::new(1.into(), 1000.into()),
            t_max: Rat::from_integer(1000.into()),
            refinement_limit: 24,
            relative_tolerance: 1e-9,
        }
    }
}

impl QuadratureParams {
    pub fn validate(&self) -> Result<(), SpaceError> {
        if self.t_min <= Rat::zero() || self.t_min >= self.t_max {
            return Err(SpaceError::InvalidParameter(
                "quadrature bracket requires 0 < t_min < t_max".into(),
            ));
        }
        if self.relative_tolerance <= 0.0 {
            return Err(SpaceError::InvalidParameter(
                "quadrature tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Recursive description of a norm on coordinate space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum NormSpec {
    /// The l_p norm, p rational in [1, inf); use `Sup` for p = infinity.
    Lp {
        #[serde(with = "crate::io::rat_serde")]
        p: Rat,
    },
    /// The sup norm (finite truncation of c_0 / l_infty).
    Sup,
    /// Bounded variation of the zero-padded sequence: |a_1| + sum |a_{n+1} - a_n|
    /// including the final drop |0 - a_dim|.
    V1,
    /// X (+) Y with the max norm.
    DirectSumMax {
        left: Box<NormSpec>,
        left_dim: usize,
        right: Box<NormSpec>,
        right_dim: usize,
    },
    /// Real interpolation space (X_0, X_1)_{theta,q} via the K-functional.
    Interpolated {
        base0: Box<NormSpec>,
        base1: Box<NormSpec>,
        #[serde(with = "crate::io::rat_serde")]
        theta: Rat,
        #[serde(with = "crate::io::rat_serde")]
        q: Rat,
        quadrature: QuadratureParams,
    },
}

impl NormSpec {
    pub fn lp(num: i64, den: i64) -> Self {
        NormSpec::Lp {
            p: Rat::new(num.into(), den.into()),
        }
    }

    pub fn l1() -> Self {
        NormSpec::lp(1, 1)
    }

    pub fn l2() -> Self {
        NormSpec::lp(2, 1)
    }

    pub fn direct_sum_max(left: NormSpec, left_dim: usize, right: NormSpec, right_dim: usize) -> Self {
        NormSpec::DirectSumMax {
            left: Box::new(left),
            left_dim,
            right: Box::new(right),
            right_dim,
        }
    }

    /// True exactly when the unit ball is a polytope: Lp{1}, Sup, V1 and max
    /// direct sums of polyhedral parts.
    pub fn is_polyhedral(&self) -> bool {
        match self {
            NormSpec::Lp { p } => p.is_one(),
            NormSpec::Sup | NormSpec::V1 => true,
            NormSpec::DirectSumMax { left, right, .. } => {
                left.is_polyhedral() && right.is_polyhedral()
            }
            NormSpec::Interpolated { .. } => false,
        }
    }

    /// Norm depends only on coordinate moduli (unconditional canonical basis).
    pub fn is_absolute(&self) -> bool {
        match self {
            NormSpec::Lp { .. } | NormSpec::Sup => true,
            NormSpec::V1 => false,
            NormSpec::DirectSumMax { left, right, .. } => {
                left.is_absolute() && right.is_absolute()
            }
            NormSpec::Interpolated { .. } => false,
        }
    }

    /// Dimension pinned by the spec structure, if any. Lp/Sup/V1 fit any
    /// ambient dimension; direct sums fix it.
    pub fn pinned_dim(&self) -> Option<usize> {
        match self {
            NormSpec::DirectSumMax {
                left_dim,
                right_dim,
                ..
            } => Some(left_dim + right_dim),
            NormSpec::Interpolated { base0, base1, .. } => base0.pinned_dim().or(base1.pinned_dim()),
            _ => None,
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<(), SpaceError> {
        match self {
            NormSpec::DirectSumMax {
                left,
                left_dim,
                right,
                right_dim,
            } => {
                if left_dim + right_dim != dim {
                    return Err(SpaceError::DimensionMismatch {
                        expected: left_dim + right_dim,
                        got: dim,
                    });
                }
                left.check_dim(*left_dim)?;
                right.check_dim(*right_dim)
            }
            NormSpec::Interpolated { base0, base1, theta, q, quadrature } => {
                base0.check_dim(dim)?;
                base1.check_dim(dim)?;
                if *theta <= Rat::zero() || *theta >= Rat::one() {
                    return Err(SpaceError::InvalidParameter("theta must lie in (0,1)".into()));
                }
                if *q < Rat::one() {
                    return Err(SpaceError::InvalidParameter("q must lie in [1,infinity)".into()));
                }
                quadrature.validate()
            }
            NormSpec::Lp { p } => {
                if *p < Rat::one() {
                    return Err(SpaceError::InvalidParameter("p must lie in [1,infinity)".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum SpaceError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires a polyhedral norm, got {0}")]
    NotPolyhedral(String),
    #[error("operation not implemented for {0}")]
    NotImplemented(String),
    #[error("enumeration budget exceeded: needed {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("quadrature failed to converge within the refinement limit; last bracket [{last_lo}, {last_hi}], relative change {last_change}")]
    QuadratureFailure {
        last_lo: f64,
        last_hi: f64,
        last_change: f64,
    },
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Norm of `f` under `spec`. Exact rational when the spec is polyhedral and
/// the input exact; float otherwise.
pub fn norm(f: &CoordVector, spec: &NormSpec) -> Result<Scalar, SpaceError> {
    spec.check_dim(f.dim())?;
    if spec.is_polyhedral() {
        if let Some(exact) = f.as_exact() {
            return Ok(Scalar::Exact(norm_exact(&exact, spec)));
        }
    }
    match spec {
        NormSpec::Interpolated { .. } => interpolated_norm(f, spec).map(Scalar::Float),
        _ => Ok(Scalar::Float(norm_f64(&f.to_f64s(), spec))),
    }
}

/// Exact norm on rational coordinates. Caller must ensure `spec` is
/// polyhedral; panics otherwise.
pub fn norm_exact(f: &[Rat], spec: &NormSpec) -> Rat {
    match spec {
        NormSpec::Lp { p } if p.is_one() => f.iter().map(|a| a.abs()).sum(),
        NormSpec::Sup => f
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(Rat::zero),
        NormSpec::V1 => v1_norm_exact(f),
        NormSpec::DirectSumMax {
            left,
            left_dim,
            right,
            ..
        } => {
            let l = norm_exact(&f[..*left_dim], left);
            let r = norm_exact(&f[*left_dim..], right);
            l.max(r)
        }
        _ => panic!("norm_exact on non-polyhedral spec"),
    }
}

/// Bounded-variation norm of the zero-padded sequence.
pub fn v1_norm_exact(f: &[Rat]) -> Rat {
    let mut total = f[0].abs();
    for w in f.windows(2) {
        total += (&w[1] - &w[0]).abs();
    }
    total + f[f.len() - 1].abs()
}

/// Bounded-variation norm under the eventually-constant reading (no final
/// drop): |a_1| + sum |a_{n+1} - a_n|. This is the pairing under which the
/// running-sum map is an exact isometry from l_1.
pub fn v1_norm_constant_tail(f: &[Rat]) -> Rat {
    let mut total = f[0].abs();
    for w in f.windows(2) {
        total += (&w[1] - &w[0]).abs();
    }
    total
}

/// Float-mode norm; supports every non-interpolated variant.
pub fn norm_f64(f: &[f64], spec: &NormSpec) -> f64 {
    match spec {
        NormSpec::Lp { p } => {
            if p.is_one() {
                f.iter().map(|a| a.abs()).sum()
            } else {
                let pf = rat_to_f64(p);
                f.iter()
                    .map(|a| a.abs().powf(pf))
                    .sum::<f64>()
                    .powf(1.0 / pf)
            }
        }
        NormSpec::Sup => f.iter().fold(0.0, |m, a| m.max(a.abs())),
        NormSpec::V1 => {
            let mut total = f[0].abs();
            for w in f.windows(2) {
                total += (w[1] - w[0]).abs();
            }
            total + f[f.len() - 1].abs()
        }
        NormSpec::DirectSumMax {
            left,
            left_dim,
            right,
            ..
        } => norm_f64(&f[..*left_dim], left).max(norm_f64(&f[*left_dim..], right)),
        NormSpec::Interpolated { .. } => {
            panic!("norm_f64 cannot evaluate interpolation norms; use interpolated_norm")
        }
    }
}

/// Dual norm sup{ |<phi, f>| : norm(f) <= 1 } in closed form.
///
/// Supported for Lp, Sup, V1 and max direct sums of these; the dual of a
/// max sum is the sum of component duals. Interpolated duals are not
/// implemented.
pub fn dual_norm(phi: &CoordVector, spec: &NormSpec) -> Result<Scalar, SpaceError> {
    spec.check_dim(phi.dim())?;
    if dual_is_exact(spec) {
        if let Some(exact) = phi.as_exact() {
            return Ok(Scalar::Exact(dual_norm_exact(&exact, spec)?));
        }
    }
    dual_norm_f64(&phi.to_f64s(), spec).map(Scalar::Float)
}

fn dual_is_exact(spec: &NormSpec) -> bool {
    match spec {
        NormSpec::Lp { p } => p.is_one(),
        NormSpec::Sup | NormSpec::V1 => true,
        NormSpec::DirectSumMax { left, right, .. } => dual_is_exact(left) && dual_is_exact(right),
        NormSpec::Interpolated { .. } => false,
    }
}

pub fn dual_norm_exact(phi: &[Rat], spec: &NormSpec) -> Result<Rat, SpaceError> {
    match spec {
        NormSpec::Lp { p } if p.is_one() => Ok(phi
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(Rat::zero)),
        NormSpec::Sup => Ok(phi.iter().map(|a| a.abs()).sum()),
        NormSpec::V1 => Ok(v1_dual_norm_exact(phi)),
        NormSpec::DirectSumMax {
            left,
            left_dim,
            right,
            ..
        } => {
            let l = dual_norm_exact(&phi[..*left_dim], left)?;
            let r = dual_norm_exact(&phi[*left_dim..], right)?;
            Ok(l + r)
        }
        other => Err(SpaceError::NotImplemented(format!(
            "dual norm for {other:?}"
        ))),
    }
}

/// Dual norm on the bounded-variation space, pulled back to l_1 through the
/// running-sum isometry: half the range of the suffix sums (with the empty
/// suffix 0 included).
fn v1_dual_norm_exact(phi: &[Rat]) -> Rat {
    let mut suffix = Rat::zero();
    let mut lo = Rat::zero();
    let mut hi = Rat::zero();
    for a in phi.iter().rev() {
        suffix += a;
        if suffix < lo {
            lo = suffix.clone();
        }
        if suffix > hi {
            hi = suffix.clone();
        }
    }
    (hi - lo) / Rat::from_integer(2.into())
}

fn dual_norm_f64(phi: &[f64], spec: &NormSpec) -> Result<f64, SpaceError> {
    match spec {
        NormSpec::Lp { p } => {
            if p.is_one() {
                Ok(phi.iter().fold(0.0, |m, a| m.max(a.abs())))
            } else {
                // Hoelder conjugate q = p / (p - 1)
                let pf = rat_to_f64(p);
                let q = pf / (pf - 1.0);
                Ok(phi
                    .iter()
                    .map(|a| a.abs().powf(q))
                    .sum::<f64>()
                    .powf(1.0 / q))
            }
        }
        NormSpec::Sup => Ok(phi.iter().map(|a| a.abs()).sum()),
        NormSpec::V1 => {
            let mut suffix = 0.0;
            let (mut lo, mut hi) = (0.0f64, 0.0f64);
            for a in phi.iter().rev() {
                suffix += a;
                lo = lo.min(suffix);
                hi = hi.max(suffix);
            }
            Ok((hi - lo) / 2.0)
        }
        NormSpec::DirectSumMax {
            left,
            left_dim,
            right,
            ..
        } => Ok(dual_norm_f64(&phi[..*left_dim], left)?
            + dual_norm_f64(&phi[*left_dim..], right)?),
        NormSpec::Interpolated { .. } => Err(SpaceError::NotImplemented(
            "dual norm of an interpolation space".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn cv(coeffs: &[i64]) -> CoordVector {
        CoordVector::from_ints(coeffs)
    }

    #[test]
    fn v1_norm_includes_final_drop() {
        // |1| + |0-1| + |1-0| + |0-1| = 4
        let f = cv(&[1, 0, 1]);
        assert_eq!(norm(&f, &NormSpec::V1).unwrap(), Scalar::from_int(4));
    }

    #[test]
    fn l2_norm_is_pythagorean() {
        let f = cv(&[3, -4]);
        let n = norm(&f, &NormSpec::l2()).unwrap();
        assert!((n.to_f64() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn direct_sum_takes_max_of_components() {
        let spec = NormSpec::direct_sum_max(NormSpec::Sup, 2, NormSpec::l1(), 1);
        let f = cv(&[1, -1, 2]);
        assert_eq!(norm(&f, &spec).unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let spec = NormSpec::direct_sum_max(NormSpec::Sup, 2, NormSpec::l1(), 2);
        assert!(matches!(
            norm(&cv(&[1, 2, 3]), &spec),
            Err(SpaceError::DimensionMismatch { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn sup_dual_is_l1() {
        let phi = cv(&[1, 1]);
        assert_eq!(dual_norm(&phi, &NormSpec::Sup).unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn l1_dual_is_sup() {
        let phi = cv(&[0, 1]);
        assert_eq!(dual_norm(&phi, &NormSpec::l1()).unwrap(), Scalar::from_int(1));
    }

    #[test]
    fn polyhedral_flag() {
        assert!(NormSpec::l1().is_polyhedral());
        assert!(NormSpec::Sup.is_polyhedral());
        assert!(NormSpec::V1.is_polyhedral());
        assert!(NormSpec::direct_sum_max(NormSpec::Sup, 2, NormSpec::V1, 3).is_polyhedral());
        assert!(!NormSpec::l2().is_polyhedral());
    }

    #[test]
    fn v1_dominates_sup() {
        // ||f||_inf <= ||f||_v1 on a few vectors
        for f in [cv(&[1, 0, 1]), cv(&[2, -3, 5, 0]), cv(&[-7])] {
            let sup = norm(&f, &NormSpec::Sup).unwrap();
            let v1 = norm(&f, &NormSpec::V1).unwrap();
            assert!(sup.cmp_value(&v1) != std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn v1_constant_tail_drops_final_jump() {
        let ones = vec![rat(1, 1); 4];
        assert_eq!(v1_norm_constant_tail(&ones), rat(1, 1));
        assert_eq!(v1_norm_exact(&ones), rat(2, 1));
    }
}

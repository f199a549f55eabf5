//! The bounded-variation / null-sequence apparatus: the running-sum map and
//! its companions, the exact isometry check against l_1, and the
//! interpolation-space builder between bounded variation and the sup norm.

use crate::matrix::RatMatrix;
use crate::scalar::Rat;
use crate::spaces::{v1_norm_constant_tail, NormSpec, QuadratureParams, SpaceError};
use crate::vector::CoordVector;
use num_traits::{One, Signed, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// The four sequence maps, each with a definite truncation convention:
///
/// - `PrefixSums` keeps the dimension: (a_n) -> (a_1 + ... + a_n).
/// - `LeftShift` drops the last slot: (a_n) -> (a_2, ..., a_n).
/// - `ShiftMinusHead` drops the last slot: (a_n) -> (a_{k+1} - a_1)_k.
/// - `ZeroShiftRight` grows by one slot: (a_n) -> (0, a_1, ..., a_n); this is
///   the finitely-supported (limit zero) reading of the reflection map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceMap {
    PrefixSums,
    LeftShift,
    ShiftMinusHead,
    ZeroShiftRight,
}

impl SequenceMap {
    /// Output dimension on a dim-dimensional input.
    pub fn out_dim(&self, dim: usize) -> usize {
        match self {
            SequenceMap::PrefixSums => dim,
            SequenceMap::LeftShift | SequenceMap::ShiftMinusHead => dim - 1,
            SequenceMap::ZeroShiftRight => dim + 1,
        }
    }

    /// The matrix realization on the first `dim` coordinates.
    pub fn matrix(&self, dim: usize) -> RatMatrix {
        match self {
            SequenceMap::PrefixSums => {
                let mut m = RatMatrix::zeros(dim, dim);
                for i in 0..dim {
                    for j in 0..=i {
                        m[(i, j)] = Rat::one();
                    }
                }
                m
            }
            SequenceMap::LeftShift => {
                let mut m = RatMatrix::zeros(dim - 1, dim);
                for i in 0..dim - 1 {
                    m[(i, i + 1)] = Rat::one();
                }
                m
            }
            SequenceMap::ShiftMinusHead => {
                let mut m = RatMatrix::zeros(dim - 1, dim);
                for i in 0..dim - 1 {
                    m[(i, i + 1)] = Rat::one();
                    m[(i, 0)] -= Rat::one();
                }
                m
            }
            SequenceMap::ZeroShiftRight => {
                let mut m = RatMatrix::zeros(dim + 1, dim);
                for i in 0..dim {
                    m[(i + 1, i)] = Rat::one();
                }
                m
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MapError {
    #[error("map needs input dimension >= {need}, got {got}")]
    TooSmall { need: usize, got: usize },
    #[error("input must be exact rational")]
    NotExact,
}

/// Apply a sequence map to an exact vector.
pub fn apply_map(map: SequenceMap, f: &CoordVector) -> Result<CoordVector, MapError> {
    let need = match map {
        SequenceMap::LeftShift | SequenceMap::ShiftMinusHead => 2,
        _ => 1,
    };
    if f.dim() < need {
        return Err(MapError::TooSmall {
            need,
            got: f.dim(),
        });
    }
    let exact = f.as_exact().ok_or(MapError::NotExact)?;
    Ok(CoordVector::from_rats(
        map.matrix(f.dim()).mul_vec(&exact),
    ))
}

/// The reflection map under the eventually-constant reading: the input is
/// treated as a convergent sequence with limit equal to its last entry, so
/// (a_n) -> (a_{k-1} - a_dim)_{k=1..dim+1} with a_0 = 0. Composed with the
/// running sums it sends e_n to minus the n-th summing vector.
pub fn shift_right_constant_tail(f: &CoordVector) -> Result<CoordVector, MapError> {
    let exact = f.as_exact().ok_or(MapError::NotExact)?;
    let n = exact.len();
    let limit = exact[n - 1].clone();
    let mut out = Vec::with_capacity(n + 1);
    out.push(-limit.clone());
    for a in exact.iter().take(n - 1) {
        out.push(a - &limit);
    }
    out.push(Rat::zero());
    Ok(CoordVector::from_rats(out))
}

/// Report of an exact isometry sweep.
#[derive(Debug, Clone)]
pub struct IsometryReport {
    pub samples: u32,
    pub passes: u32,
    pub failures: u32,
}

/// Check that the running-sum map carries the l_1 norm to the
/// bounded-variation norm exactly on random rational vectors. The image is
/// paired with its eventually-constant truncation (no final drop), which is
/// what makes the isometry exact on finitely supported input.
pub fn isometry_check_q(samples: u32, max_dim: usize, seed: u64) -> IsometryReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passes = 0;
    let mut failures = 0;
    for _ in 0..samples {
        let dim = rng.gen_range(1..=max_dim);
        let f: Vec<Rat> = (0..dim)
            .map(|_| Rat::new(rng.gen_range(-48i64..=48).into(), rng.gen_range(1i64..=6).into()))
            .collect();
        let l1: Rat = f.iter().map(|a| a.abs()).sum();
        let qf = SequenceMap::PrefixSums.matrix(dim).mul_vec(&f);
        let v1 = v1_norm_constant_tail(&qf);
        if l1 == v1 {
            passes += 1;
        } else {
            failures += 1;
        }
    }
    IsometryReport {
        samples,
        passes,
        failures,
    }
}

/// The interpolation space between bounded variation and the sup norm on a
/// truncation: all basis machinery runs on the resulting spec.
pub fn pisier_xu_space(
    theta: Rat,
    q: Rat,
    quadrature: QuadratureParams,
) -> Result<NormSpec, SpaceError> {
    if theta <= Rat::zero() || theta >= Rat::one() {
        return Err(SpaceError::InvalidParameter(
            "theta must lie in (0,1)".into(),
        ));
    }
    if q < Rat::one() {
        return Err(SpaceError::InvalidParameter(
            "q must lie in [1,infinity)".into(),
        ));
    }
    quadrature.validate()?;
    Ok(NormSpec::Interpolated {
        base0: Box::new(NormSpec::V1),
        base1: Box::new(NormSpec::Sup),
        theta,
        q,
        quadrature,
    })
}

/// Exact composition identities of the sequence maps on a given truncation.
pub fn composition_identities_hold(dim: usize) -> bool {
    // prefix_sums . left_shift == shift_minus_head . prefix_sums (dim-1 x dim)
    let q_small = SequenceMap::PrefixSums.matrix(dim - 1);
    let l = SequenceMap::LeftShift.matrix(dim);
    let r = SequenceMap::ShiftMinusHead.matrix(dim);
    let q = SequenceMap::PrefixSums.matrix(dim);
    let lhs = q_small.mul(&l);
    let rhs = r.mul(&q);
    if lhs != rhs {
        return false;
    }
    // left_shift . zero_shift_right == identity (dim x dim)
    let t = SequenceMap::ZeroShiftRight.matrix(dim);
    let l_up = SequenceMap::LeftShift.matrix(dim + 1);
    l_up.mul(&t) == RatMatrix::identity(dim)
}

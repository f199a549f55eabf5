//! Extreme points of polyhedral unit balls and of their dual balls.

use super::{NormSpec, SpaceError};
use crate::scalar::Rat;
use crate::vector::CoordVector;
use num_traits::{One, Zero};

/// Number of unit-ball vertices, if the spec is polyhedral.
pub fn vertex_count(spec: &NormSpec, dim: usize) -> Result<u128, SpaceError> {
    match spec {
        NormSpec::Lp { p } if p.is_one() => Ok(2 * dim as u128),
        NormSpec::Sup => Ok(1u128 << dim.min(127)),
        NormSpec::V1 => Ok((dim * (dim + 1)) as u128),
        NormSpec::DirectSumMax {
            left,
            left_dim,
            right,
            right_dim,
        } => Ok(vertex_count(left, *left_dim)?
            .saturating_mul(vertex_count(right, *right_dim)?)),
        other => Err(SpaceError::NotPolyhedral(format!("{other:?}"))),
    }
}

/// Extreme points of the unit ball, exact.
///
/// - `Lp{1}`: the signed coordinate vectors.
/// - `Sup`: all sign vectors (2^dim of them, budget-checked).
/// - `V1`: half-height interval indicators, both signs. These are the images
///   of the extreme points of the sum-zero slice of the l_1 ball under the
///   running-sum map; the final drop in the norm is what halves them.
/// - `DirectSumMax`: the Cartesian product of component vertex sets, since
///   the max-ball is the product of the component balls.
pub fn unit_ball_vertices_rat(
    spec: &NormSpec,
    dim: usize,
    budget: u128,
) -> Result<Vec<Vec<Rat>>, SpaceError> {
    spec.check_dim(dim)?;
    let needed = vertex_count(spec, dim)?;
    if needed > budget {
        return Err(SpaceError::BudgetExceeded { needed, budget });
    }
    Ok(gen_vertices(spec, dim))
}

fn gen_vertices(spec: &NormSpec, dim: usize) -> Vec<Vec<Rat>> {
    match spec {
        NormSpec::Lp { p } if p.is_one() => {
            let mut out = Vec::with_capacity(2 * dim);
            for i in 0..dim {
                for sign in [1i64, -1] {
                    let mut v = vec![Rat::zero(); dim];
                    v[i] = Rat::from_integer(sign.into());
                    out.push(v);
                }
            }
            out
        }
        NormSpec::Sup => {
            let mut out = Vec::with_capacity(1 << dim);
            for mask in 0u64..(1u64 << dim) {
                let v = (0..dim)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            -Rat::one()
                        } else {
                            Rat::one()
                        }
                    })
                    .collect();
                out.push(v);
            }
            out
        }
        NormSpec::V1 => {
            let half = Rat::new(1.into(), 2.into());
            let mut out = Vec::with_capacity(dim * (dim + 1));
            for i in 0..dim {
                for j in i..dim {
                    for sign in [1i64, -1] {
                        let mut v = vec![Rat::zero(); dim];
                        for k in i..=j {
                            v[k] = &half * Rat::from_integer(sign.into());
                        }
                        out.push(v);
                    }
                }
            }
            out
        }
        NormSpec::DirectSumMax {
            left,
            left_dim,
            right,
            right_dim,
        } => {
            let lv = gen_vertices(left, *left_dim);
            let rv = gen_vertices(right, *right_dim);
            let mut out = Vec::with_capacity(lv.len() * rv.len());
            for l in &lv {
                for r in &rv {
                    let mut v = l.clone();
                    v.extend_from_slice(r);
                    out.push(v);
                }
            }
            out
        }
        _ => unreachable!("checked polyhedral"),
    }
}

/// Unit-ball vertices as coordinate vectors.
pub fn unit_ball_vertices(
    spec: &NormSpec,
    dim: usize,
    budget: u128,
) -> Result<Vec<CoordVector>, SpaceError> {
    Ok(unit_ball_vertices_rat(spec, dim, budget)?
        .into_iter()
        .map(CoordVector::from_rats)
        .collect())
}

/// A finite set of dual-ball points containing every extreme point of the
/// dual ball. Maximizing a dual-norm-bounded objective over these points
/// therefore realizes the maximum over the whole dual ball.
///
/// - dual of `Lp{1}` is `Sup`: sign vectors.
/// - dual of `Sup` is `Lp{1}`: signed coordinate vectors.
/// - dual of `V1`: difference profiles of sign vectors on the extended
///   (dim+1)-path, halved. Some listed points may be non-extreme; that is
///   harmless for maximization.
/// - dual of a max sum is the l1-sum of duals: its ball is the convex hull of
///   the two embedded component dual balls.
pub fn dual_ball_points(
    spec: &NormSpec,
    dim: usize,
    budget: u128,
) -> Result<Vec<Vec<Rat>>, SpaceError> {
    spec.check_dim(dim)?;
    let needed: u128 = match spec {
        NormSpec::Lp { p } if p.is_one() => 1u128 << dim.min(127),
        NormSpec::Sup => 2 * dim as u128,
        NormSpec::V1 => 1u128 << (dim + 1).min(127),
        NormSpec::DirectSumMax { .. } => 0, // checked recursively below
        other => return Err(SpaceError::NotPolyhedral(format!("{other:?}"))),
    };
    if needed > budget {
        return Err(SpaceError::BudgetExceeded { needed, budget });
    }
    match spec {
        NormSpec::Lp { p } if p.is_one() => Ok(gen_vertices(&NormSpec::Sup, dim)),
        NormSpec::Sup => Ok(gen_vertices(&NormSpec::l1(), dim)),
        NormSpec::V1 => {
            // difference profiles of sign vectors on the extended path; the
            // suffix-sum range of such a profile is exactly 2
            let mut out = Vec::new();
            for mask in 0u64..(1u64 << (dim + 1)) {
                let s: Vec<i64> = (0..=dim).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                let phi: Vec<Rat> = (0..dim)
                    .map(|k| Rat::from_integer((s[k] - s[k + 1]).into()))
                    .collect();
                if phi.iter().any(|x| !x.is_zero()) {
                    out.push(phi);
                }
            }
            Ok(out)
        }
        NormSpec::DirectSumMax {
            left,
            left_dim,
            right,
            right_dim,
        } => {
            let lp = dual_ball_points(left, *left_dim, budget)?;
            let rp = dual_ball_points(right, *right_dim, budget)?;
            let mut out = Vec::with_capacity(lp.len() + rp.len());
            for l in lp {
                let mut v = l;
                v.extend(std::iter::repeat_with(Rat::zero).take(*right_dim));
                out.push(v);
            }
            for r in rp {
                let mut v: Vec<Rat> = std::iter::repeat_with(Rat::zero).take(*left_dim).collect();
                v.extend(r);
                out.push(v);
            }
            Ok(out)
        }
        _ => unreachable!(),
    }
}

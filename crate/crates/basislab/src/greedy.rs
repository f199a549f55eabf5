//! The thresholding greedy algorithm: greedy orderings with the exact
//! deterministic tie-break, greedy partial sums, and lower-bound estimation
//! of the quasi-greedy constant.

use crate::bases::{coordinate_projection, Basis, BasisError};
use crate::cert::Certification;
use crate::scalar::{Rat, Scalar};
use crate::spaces::simplex::{add_norm_leq, Expr, LpBuilder};
use crate::spaces::{dual_ball_points, norm, SpaceError};
use crate::vector::CoordVector;
use num_rational::BigRational;
use num_traits::Zero;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// The greedy ordering: a permutation rho of 1..=n sorting coefficients by
/// decreasing modulus, ties broken by ascending index. Zero coefficients
/// participate, so rho is always a total permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOrdering {
    rho: Vec<usize>,
}

impl GreedyOrdering {
    pub fn permutation(&self) -> &[usize] {
        &self.rho
    }

    /// The greedy set A_m = {rho(1), ..., rho(m)}.
    pub fn prefix(&self, m: usize) -> Vec<usize> {
        self.rho[..m].to_vec()
    }
}

/// Sort indices by decreasing coefficient modulus, ties by ascending index.
pub fn greedy_ordering(coeffs: &CoordVector) -> GreedyOrdering {
    let mut idx: Vec<usize> = (1..=coeffs.dim()).collect();
    let moduli: Vec<Scalar> = coeffs.coeffs().iter().map(|c| c.abs()).collect();
    idx.sort_by(|&a, &b| {
        moduli[b - 1]
            .cmp_value(&moduli[a - 1])
            .then(a.cmp(&b))
    });
    GreedyOrdering { rho: idx }
}

/// The greedy set of f with respect to a basis: the first m indices of the
/// greedy ordering of the coefficient vector.
pub fn greedy_set(basis: &Basis, f: &CoordVector, m: usize) -> Result<Vec<usize>, BasisError> {
    let n = basis.dim();
    if m > n {
        return Err(BasisError::IndexOutOfRange { index: m, dim: n });
    }
    let exact = f.as_exact().ok_or_else(|| {
        BasisError::Space(SpaceError::InvalidParameter(
            "greedy sums need exact input".into(),
        ))
    })?;
    let coeffs = CoordVector::from_rats(basis.coefficients(&exact));
    Ok(greedy_ordering(&coeffs).prefix(m))
}

/// G_m(f): keep the m largest-modulus coefficients.
pub fn greedy_sum(basis: &Basis, f: &CoordVector, m: usize) -> Result<CoordVector, BasisError> {
    let set = greedy_set(basis, f, m)?;
    coordinate_projection(basis, &set, f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMode {
    Exact,
    Sampled,
}

/// A lower-bound estimate of the quasi-greedy constant, with the witness
/// that proves it.
#[derive(Debug, Clone)]
pub struct QuasiGreedyEstimate {
    /// The proven lower bound: exactly ||G_m(f)|| / ||f|| for the witness.
    pub lower_bound: Scalar,
    pub witness_f: CoordVector,
    pub witness_m: usize,
    pub mode: EstimateMode,
    pub certification: Certification,
    pub budget: u64,
    pub seed: u64,
}

impl QuasiGreedyEstimate {
    /// Recompute the witness ratio from scratch.
    pub fn revalidate(&self, basis: &Basis) -> Result<Scalar, BasisError> {
        witness_ratio(basis, &self.witness_f, self.witness_m)
    }
}

fn witness_ratio(basis: &Basis, f: &CoordVector, m: usize) -> Result<Scalar, BasisError> {
    let gf = greedy_sum(basis, f, m)?;
    let num = norm(&gf, basis.space())?;
    let den = norm(f, basis.space())?;
    if den.is_zero() {
        return Ok(Scalar::zero());
    }
    Ok(num / den)
}

/// Estimate the quasi-greedy constant from below.
///
/// Exact mode (polyhedral spaces, small n) enumerates the conic regions on
/// which every G_m is linear: a region fixes the kept support A and a sign
/// orthant of the coefficients, and the best ratio over the region is a
/// linear program per codomain dual-ball point. When the best witness found
/// meets the exact k_n upper bound the estimate is certified exact;
/// otherwise it stays a witness-certified lower bound.
///
/// Sampled mode sweeps deterministic candidates plus seeded random
/// coefficient vectors with modulus-perturbation ascent.
pub fn quasi_greedy_estimate(
    basis: &Basis,
    mode: EstimateMode,
    budget: u64,
    seed: u64,
) -> Result<QuasiGreedyEstimate, BasisError> {
    match mode {
        EstimateMode::Sampled => sampled_estimate(basis, budget, seed),
        EstimateMode::Exact => exact_estimate(basis, budget, seed),
    }
}

pub const EXACT_REGION_LIMIT: usize = 8;

fn exact_estimate(basis: &Basis, budget: u64, seed: u64) -> Result<QuasiGreedyEstimate, BasisError> {
    let n = basis.dim();
    if n > EXACT_REGION_LIMIT {
        return Err(BasisError::Space(SpaceError::InvalidParameter(format!(
            "exact quasi-greedy enumeration is limited to dim <= {EXACT_REGION_LIMIT}, got {n}"
        ))));
    }
    if !basis.space().is_polyhedral() {
        return Err(BasisError::Space(SpaceError::NotPolyhedral(format!(
            "{:?}",
            basis.space()
        ))));
    }

    // cheap sandwich first: best deterministic witness vs the exact k_n cap
    let mut best = sampled_estimate(basis, budget.min(4000), seed)?;
    let cap = crate::conditionality::k_m_exact_value(basis, n, 1 << 26)?;
    if best.lower_bound.cmp_value(&cap).is_ge() {
        return Ok(QuasiGreedyEstimate {
            certification: Certification::CertifiedExact,
            mode: EstimateMode::Exact,
            ..best
        });
    }

    // full region sweep: float LPs locate the best region, the witness is
    // rationalized and re-validated exactly
    let duals = dual_ball_points(basis.space(), n, 1 << 16)?;
    let duals_f: Vec<Vec<f64>> = duals
        .iter()
        .map(|p| p.iter().map(crate::scalar::rat_to_f64).collect())
        .collect();
    let xf: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| crate::scalar::rat_to_f64(&basis.vectors()[(i, j)]))
                .collect()
        })
        .collect();
    let xinvf: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|j| crate::scalar::rat_to_f64(&basis.inverse()[(k, j)]))
                .collect()
        })
        .collect();

    let mut lp_count: u64 = 0;
    let lp_limit = budget.max(100_000);
    for mask in 1u32..(1 << n) {
        let a_set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        for sign_mask in 0u32..(1 << (n - 1)) {
            // first coefficient pinned nonnegative; ratios are even in f
            let signs: Vec<f64> = (0..n)
                .map(|i| {
                    if i > 0 && sign_mask >> (i - 1) & 1 == 1 {
                        -1.0
                    } else {
                        1.0
                    }
                })
                .collect();
            lp_count += duals_f.len() as u64;
            if lp_count > lp_limit {
                return Err(BasisError::Space(SpaceError::BudgetExceeded {
                    needed: lp_count as u128,
                    budget: lp_limit as u128,
                }));
            }
            if let Some((val, f_star)) =
                region_best(basis.space(), &xf, &xinvf, &a_set, &signs, &duals_f)?
            {
                if val > best.lower_bound.to_f64() + 1e-12 {
                    // rationalize and re-validate through the true algorithm
                    let f_rat: Vec<Rat> = f_star
                        .iter()
                        .map(|&x| BigRational::from_float(x).unwrap_or_else(Rat::zero))
                        .collect();
                    let fv = CoordVector::from_rats(f_rat);
                    if fv.is_zero() {
                        continue;
                    }
                    let m = a_set.len();
                    let ratio = witness_ratio(basis, &fv, m)?;
                    if ratio.cmp_value(&best.lower_bound).is_gt() {
                        best = QuasiGreedyEstimate {
                            lower_bound: ratio,
                            witness_f: fv,
                            witness_m: m,
                            mode: EstimateMode::Exact,
                            certification: Certification::WitnessLowerBound,
                            budget,
                            seed,
                        };
                    }
                }
            }
        }
    }
    best.mode = EstimateMode::Exact;
    best.certification = if best.lower_bound.cmp_value(&cap).is_ge() {
        Certification::CertifiedExact
    } else {
        Certification::WitnessLowerBound
    };
    Ok(best)
}

/// Best ||S_A f|| over the closed region { ||f|| <= 1, signs fixed, moduli
/// of kept coefficients dominate the rest }, as max over codomain dual
/// points of a linear program. Returns the best value with its maximizer.
fn region_best(
    space: &crate::spaces::NormSpec,
    x: &[Vec<f64>],
    xinv: &[Vec<f64>],
    a_set: &[usize],
    signs: &[f64],
    duals: &[Vec<f64>],
) -> Result<Option<(f64, Vec<f64>)>, SpaceError> {
    let n = signs.len();
    let mut builder: LpBuilder<f64> = LpBuilder::new();
    let f: Vec<Expr<f64>> = (0..n).map(|_| builder.free_expr()).collect();
    let one = Expr::constant(1.0);
    add_norm_leq(&mut builder, space, &f, &one)?;
    // coefficient expressions c_k = sum_j xinv[k][j] f_j
    let cs: Vec<Expr<f64>> = (0..n)
        .map(|k| {
            let mut e = Expr::constant(0.0);
            for j in 0..n {
                if xinv[k][j] != 0.0 {
                    e = e.add(&f[j].scale(&xinv[k][j]));
                }
            }
            e
        })
        .collect();
    // orthant: sign_k c_k >= 0
    for k in 0..n {
        builder.leq_zero(&cs[k].scale(&-signs[k]));
    }
    // dominance: |c_a| >= |c_b| for kept a, dropped b
    for a in a_set {
        for b in (0..n).filter(|b| !a_set.contains(b)) {
            let lhs = cs[b].scale(&signs[b]).sub(&cs[*a].scale(&signs[*a]));
            builder.leq_zero(&lhs);
        }
    }
    // image rows (S_A f)_i = sum_{k in A} c_k x[i][k]
    let image: Vec<Expr<f64>> = (0..n)
        .map(|i| {
            let mut e = Expr::constant(0.0);
            for k in a_set {
                if x[i][*k] != 0.0 {
                    e = e.add(&cs[*k].scale(&x[i][*k]));
                }
            }
            e
        })
        .collect();

    let mut best: Option<(f64, Vec<f64>)> = None;
    for psi in duals {
        let mut obj = Expr::constant(0.0);
        for (i, p) in psi.iter().enumerate() {
            if *p != 0.0 {
                obj = obj.add(&image[i].scale(p));
            }
        }
        let sol = builder.solve_max(&obj)?;
        let val = sol.objective;
        if best.as_ref().map_or(true, |(b, _)| val > *b) {
            let fv: Vec<f64> = f.iter().map(|e| e.eval(&sol.x)).collect();
            best = Some((val, fv));
        }
    }
    Ok(best)
}

fn sampled_estimate(
    basis: &Basis,
    budget: u64,
    seed: u64,
) -> Result<QuasiGreedyEstimate, BasisError> {
    let n = basis.dim();
    let mut best_ratio = Scalar::from_int(-1);
    let mut best_f = CoordVector::unit(n, 1);
    let mut best_m = 1usize;
    let mut evals: u64 = 0;
    let budget = budget.max(64);
    let all: Vec<usize> = (1..=n).collect();

    macro_rules! consider {
        ($coeffs:expr) => {{
            let coeffs: &[Rat] = $coeffs;
            if !coeffs.iter().all(|c| c.is_zero()) {
                let f = CoordVector::from_rats(basis.combine(coeffs, &all));
                for m in 1..=n {
                    evals += 1;
                    let r = witness_ratio(basis, &f, m)?;
                    if r.cmp_value(&best_ratio).is_gt() {
                        best_ratio = r;
                        best_f = f.clone();
                        best_m = m;
                    }
                }
            }
        }};
    }

    // deterministic candidates: single basis vectors, then alternating
    // patterns with the kept half slightly raised
    for k in 1..=n {
        let mut c = vec![Rat::zero(); n];
        c[k - 1] = Rat::from_integer(1.into());
        consider!(&c);
    }
    let bump = Rat::new(11.into(), 10.into());
    for j in 1..=n / 2 {
        let mut c = vec![Rat::zero(); n];
        for (k, slot) in c.iter_mut().enumerate() {
            let k1 = k + 1;
            if k1 % 2 == 1 && k1 <= 2 * j - 1 {
                *slot = bump.clone();
            } else {
                *slot = Rat::from_integer((-1).into());
            }
        }
        consider!(&c);
    }

    // seeded random dyadic coefficients with perturbation ascent,
    // chunked so the outcome is independent of any parallel schedule
    let chunks = 16u64;
    for chunk in 0..chunks {
        if evals >= budget {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (chunk.wrapping_mul(0x9e3779b97f4a7c15)));
        let mut cur: Vec<Rat> = (0..n)
            .map(|_| Rat::new(rng.gen_range(-64i64..=64).into(), 64.into()))
            .collect();
        let mut stale = 0u32;
        while stale < 12 && evals < budget {
            let before = best_ratio.clone();
            consider!(&cur);
            if best_ratio.cmp_value(&before).is_gt() {
                stale = 0;
            } else {
                stale += 1;
            }
            // modulus perturbations on a random coordinate
            let k = rng.gen_range(0..n);
            match rng.gen_range(0..3u8) {
                0 => cur[k] = &cur[k] * Rat::new(5.into(), 4.into()),
                1 => cur[k] = &cur[k] * Rat::new(3.into(), 4.into()),
                _ => cur[k] = -cur[k].clone(),
            }
        }
    }

    Ok(QuasiGreedyEstimate {
        lower_bound: best_ratio,
        witness_f: best_f,
        witness_m: best_m,
        mode: EstimateMode::Sampled,
        certification: Certification::WitnessLowerBound,
        budget,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::standard;
    use crate::scalar::rat;
    use crate::spaces::NormSpec;

    #[test]
    fn ordering_examples() {
        // (0.5, -2, 2, 1): moduli 2 and 2 tie at indices 2 < 3
        let c = CoordVector::from_rats(vec![rat(1, 2), rat(-2, 1), rat(2, 1), rat(1, 1)]);
        assert_eq!(greedy_ordering(&c).permutation(), &[2, 3, 4, 1]);
        // pure tie-break
        let c = CoordVector::from_ints(&[1, -1, 1]);
        assert_eq!(greedy_ordering(&c).permutation(), &[1, 2, 3]);
        // zero vector: identity permutation
        let c = CoordVector::zeros(4);
        assert_eq!(greedy_ordering(&c).permutation(), &[1, 2, 3, 4]);
    }

    #[test]
    fn greedy_sum_examples() {
        let b = standard::canonical_basis(NormSpec::l2(), 4);
        let f = CoordVector::from_ints(&[1, 3, -3, 0]);
        assert_eq!(
            greedy_sum(&b, &f, 2).unwrap(),
            CoordVector::from_ints(&[0, 3, -3, 0])
        );
        assert_eq!(greedy_sum(&b, &f, 4).unwrap(), f);
        assert!(greedy_sum(&b, &f, 0).unwrap().is_zero());
    }

    #[test]
    fn greedy_sum_is_idempotent() {
        let b = standard::summing_basis(NormSpec::Sup, 5);
        let f =
            CoordVector::from_rats(vec![rat(3, 2), rat(-1, 1), rat(2, 1), rat(1, 3), rat(0, 1)]);
        for m in 0..=5 {
            let once = greedy_sum(&b, &f, m).unwrap();
            let twice = greedy_sum(&b, &once, m).unwrap();
            assert_eq!(once, twice, "m = {m}");
        }
    }

    #[test]
    fn ordering_is_equivariant_for_distinct_moduli() {
        // relabeling by any permutation commutes when moduli are distinct
        let coeffs = vec![rat(5, 1), rat(-3, 1), rat(7, 2), rat(1, 4)];
        let perm = [3usize, 1, 4, 2]; // images of 1..4
        let mut relabeled = vec![rat(0, 1); 4];
        for (k, &pk) in perm.iter().enumerate() {
            relabeled[pk - 1] = coeffs[k].clone();
        }
        let rho = greedy_ordering(&CoordVector::from_rats(coeffs));
        let rho2 = greedy_ordering(&CoordVector::from_rats(relabeled));
        let mapped: Vec<usize> = rho2.permutation().iter().map(|&i| {
            perm.iter().position(|&p| p == i).unwrap() + 1
        }).collect();
        assert_eq!(mapped, rho.permutation());
    }

    #[test]
    fn unconditional_bases_have_unit_estimate() {
        for spec in [NormSpec::l1(), NormSpec::l2()] {
            let b = standard::canonical_basis(spec, 6);
            let est = quasi_greedy_estimate(&b, EstimateMode::Sampled, 3000, 1).unwrap();
            assert!(
                est.lower_bound.approx_eq(&Scalar::one(), 1e-12),
                "{:?}",
                est.lower_bound
            );
            let rv = est.revalidate(&b).unwrap();
            assert_eq!(rv.to_f64(), est.lower_bound.to_f64());
        }
    }

    #[test]
    fn l1_exact_mode_certifies_one() {
        let b = standard::canonical_basis(NormSpec::l1(), 8);
        let est = quasi_greedy_estimate(&b, EstimateMode::Exact, 50_000, 3).unwrap();
        assert_eq!(est.lower_bound, Scalar::one());
        assert_eq!(est.certification, Certification::CertifiedExact);
    }

    #[test]
    fn summing_basis_estimate_exceeds_two() {
        let b = standard::summing_basis(NormSpec::Sup, 8);
        let est = quasi_greedy_estimate(&b, EstimateMode::Sampled, 4000, 7).unwrap();
        assert!(
            est.lower_bound.cmp_value(&Scalar::from_int(2)).is_ge(),
            "got {:?}",
            est.lower_bound
        );
        // witness re-validates exactly
        assert_eq!(est.revalidate(&b).unwrap(), est.lower_bound);
    }

    #[test]
    fn summing_basis_region_enumeration_small() {
        // exact region sweep at n = 4; the sandwich cannot close (k_n
        // exceeds the true constant), so the result is a witness bound
        let b = standard::summing_basis(NormSpec::Sup, 4);
        let est = quasi_greedy_estimate(&b, EstimateMode::Exact, 300_000, 5).unwrap();
        assert!(
            est.lower_bound.cmp_value(&Scalar::from_int(2)).is_ge(),
            "got {:?}",
            est.lower_bound
        );
        assert_eq!(est.revalidate(&b).unwrap(), est.lower_bound);
    }

    #[test]
    fn estimate_never_exceeds_exact_k_n() {
        let b = standard::summing_basis(NormSpec::Sup, 6);
        let est = quasi_greedy_estimate(&b, EstimateMode::Sampled, 3000, 11).unwrap();
        let cap = crate::conditionality::k_m_exact_value(&b, 6, 1 << 24).unwrap();
        assert!(est.lower_bound.cmp_value(&cap).is_le());
    }

    // full sweep over 255 supports x 128 orthants x 16 dual points
    #[test]
    fn summing_basis_region_enumeration_full_n8() {
        let b = standard::summing_basis(NormSpec::Sup, 8);
        let est = quasi_greedy_estimate(&b, EstimateMode::Exact, 1_000_000, 5).unwrap();
        assert!(
            est.lower_bound.cmp_value(&Scalar::from_int(2)).is_ge(),
            "got {:?}",
            est.lower_bound
        );
        assert_eq!(est.revalidate(&b).unwrap(), est.lower_bound);
        let cap = crate::conditionality::k_m_exact_value(&b, 8, 1 << 26).unwrap();
        assert!(est.lower_bound.cmp_value(&cap).is_le());
    }
}

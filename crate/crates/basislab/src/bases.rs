//! Bases as invertible vector families in a normed coordinate space, with
//! cached biorthogonal functionals, the classical constants, and the basis
//! transforms used to manufacture conditional examples: partial sums,
//! differences, twisting, the diamond interleaving of two bases, and the
//! two-stage block construction.

use crate::cert::Certification;
use crate::matrix::RatMatrix;
use crate::scalar::{Rat, Scalar};
use crate::spaces::{
    dual_norm, norm, operator_norm, NormSpec, OpNormMode, OpNormResult, SpaceError,
};
use crate::vector::CoordVector;
use num_traits::{One, Zero};

#[derive(Debug, Clone, thiserror::Error)]
pub enum BasisError {
    #[error("vectors do not form a basis (singular matrix)")]
    NotABasis,
    #[error("dimension mismatch: space wants {expected}, vectors have {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("twist requires even dimension, got {0}")]
    OddDimension(usize),
    #[error("block construction requires dim = 2^(J+1) - 2 for some J >= 1, got {0}")]
    BadBlockDimension(usize),
    #[error("component dimensions differ: {0} vs {1}")]
    ComponentMismatch(usize, usize),
    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// An invertible family x_1..x_n in a normed coordinate space. Columns of
/// `vectors` are the basis vectors; rows of `inverse` are the biorthogonal
/// functionals, so <x*_k, x_n> = delta_{k,n} holds exactly by construction.
#[derive(Debug, Clone)]
pub struct Basis {
    space: NormSpec,
    vectors: RatMatrix,
    inverse: RatMatrix,
}

impl Basis {
    pub fn new(space: NormSpec, vectors: RatMatrix) -> Result<Self, BasisError> {
        if vectors.rows() != vectors.cols() {
            return Err(BasisError::NotSquare {
                rows: vectors.rows(),
                cols: vectors.cols(),
            });
        }
        space
            .check_dim(vectors.rows())
            .map_err(BasisError::Space)?;
        let inverse = vectors.inverse().ok_or(BasisError::NotABasis)?;
        Ok(Basis {
            space,
            vectors,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn space(&self) -> &NormSpec {
        &self.space
    }

    pub fn vectors(&self) -> &RatMatrix {
        &self.vectors
    }

    pub fn inverse(&self) -> &RatMatrix {
        &self.inverse
    }

    /// The k-th basis vector (1-based).
    pub fn vector(&self, k: usize) -> CoordVector {
        CoordVector::from_rats(self.vectors.column(k - 1))
    }

    /// The k-th biorthogonal functional as a coordinate vector (1-based).
    pub fn functional(&self, k: usize) -> CoordVector {
        CoordVector::from_rats(self.inverse.row(k - 1).to_vec())
    }

    /// Coefficients (x*_1(f), ..., x*_n(f)).
    pub fn coefficients(&self, f: &[Rat]) -> Vec<Rat> {
        self.inverse.mul_vec(f)
    }

    /// Reassemble sum c_k x_k restricted to indices in `set` (1-based).
    pub fn combine(&self, coeffs: &[Rat], set: &[usize]) -> Vec<Rat> {
        let n = self.dim();
        let mut out = vec![Rat::zero(); n];
        for &k in set {
            let c = &coeffs[k - 1];
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                let x = &self.vectors[(i, k - 1)];
                if !x.is_zero() {
                    out[i] += c * x;
                }
            }
        }
        out
    }

    /// The matrix of the coordinate projection S_A = sum_{k in A} x_k (x) x*_k.
    pub fn projection_matrix(&self, set: &[usize]) -> RatMatrix {
        let n = self.dim();
        let mut m = RatMatrix::zeros(n, n);
        for &k in set {
            for i in 0..n {
                let x = &self.vectors[(i, k - 1)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let phi = &self.inverse[(k - 1, j)];
                    if !phi.is_zero() {
                        let d = x * phi;
                        m[(i, j)] += d;
                    }
                }
            }
        }
        m
    }
}

/// S_A(f): the coordinate projection of f onto the indices in `set`.
pub fn coordinate_projection(
    basis: &Basis,
    set: &[usize],
    f: &CoordVector,
) -> Result<CoordVector, BasisError> {
    let n = basis.dim();
    if f.dim() != n {
        return Err(BasisError::DimensionMismatch {
            expected: n,
            got: f.dim(),
        });
    }
    for &k in set {
        if k == 0 || k > n {
            return Err(BasisError::IndexOutOfRange { index: k, dim: n });
        }
    }
    let exact = f.as_exact().ok_or_else(|| {
        BasisError::Space(SpaceError::InvalidParameter(
            "coordinate projections need exact input".into(),
        ))
    })?;
    let coeffs = basis.coefficients(&exact);
    Ok(CoordVector::from_rats(basis.combine(&coeffs, set)))
}

/// Classical constants of a basis, each with its certification.
#[derive(Debug, Clone)]
pub struct BasisReport {
    pub basis_constant: (Scalar, Certification),
    pub seminorm_lower: Scalar,
    pub seminorm_upper: Scalar,
    pub functional_sup: (Scalar, Certification),
    pub type_p: (Scalar, Certification),
    pub type_p_star: (Scalar, Certification),
}

/// K = max_m ||S_m||. Exact over polyhedral spaces (or via the diagonal
/// shortcut); heuristic lower bound otherwise.
pub fn basis_constant(
    basis: &Basis,
    mode: OpNormMode,
    budget: u128,
    seed: u64,
) -> Result<(Scalar, Certification), BasisError> {
    let n = basis.dim();
    let mut best: Option<OpNormResult> = None;
    for m in 1..=n {
        let set: Vec<usize> = (1..=m).collect();
        let sm = basis.projection_matrix(&set);
        let r = operator_norm(&sm, &basis.space, &basis.space, mode, budget, seed ^ m as u64)?;
        let replace = match &best {
            None => true,
            Some(b) => r.value.cmp_value(&b.value) == std::cmp::Ordering::Greater,
        };
        if replace {
            best = Some(r);
        }
    }
    let best = best.expect("dim >= 1");
    let flag = if best.certified {
        Certification::CertifiedExact
    } else {
        Certification::HeuristicLowerBound
    };
    Ok((best.value, flag))
}

/// (a, b, sup ||x*_n||): the semi-normalization bounds and the dual bound.
/// The dual norm falls back to a heuristic estimate on interpolation spaces.
pub fn seminorm_bounds(
    basis: &Basis,
) -> Result<(Scalar, Scalar, (Scalar, Certification)), BasisError> {
    let n = basis.dim();
    let mut lo: Option<Scalar> = None;
    let mut hi: Option<Scalar> = None;
    for k in 1..=n {
        let nk = norm(&basis.vector(k), &basis.space)?;
        if lo.as_ref().map_or(true, |l| nk.cmp_value(l).is_lt()) {
            lo = Some(nk.clone());
        }
        if hi.as_ref().map_or(true, |h| nk.cmp_value(h).is_gt()) {
            hi = Some(nk);
        }
    }
    let mut dual_best: Option<Scalar> = None;
    let mut dual_flag = Certification::CertifiedExact;
    for k in 1..=n {
        let phi = basis.functional(k);
        let dn = match dual_norm(&phi, &basis.space) {
            Ok(v) => v,
            Err(SpaceError::NotImplemented(_)) => {
                dual_flag = Certification::HeuristicLowerBound;
                heuristic_dual_norm(&phi, &basis.space, 800, k as u64)?
            }
            Err(e) => return Err(e.into()),
        };
        if dual_best.as_ref().map_or(true, |b| dn.cmp_value(b).is_gt()) {
            dual_best = Some(dn);
        }
    }
    Ok((
        lo.expect("dim >= 1"),
        hi.expect("dim >= 1"),
        (dual_best.expect("dim >= 1"), dual_flag),
    ))
}

/// Sampled lower bound for a dual norm sup |<phi, f>| / ||f||.
fn heuristic_dual_norm(
    phi: &CoordVector,
    space: &NormSpec,
    samples: u32,
    seed: u64,
) -> Result<Scalar, BasisError> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = phi.dim();
    let phif = phi.to_f64s();
    let mut best = 0.0f64;
    for s in 0..samples {
        let f: Vec<f64> = if (s as usize) < dim {
            let mut v = vec![0.0; dim];
            v[s as usize] = 1.0;
            v
        } else {
            (0..dim).map(|_| rng.gen_range(-1.0f64..1.0)).collect()
        };
        let fv = CoordVector::from_f64s(&f);
        let nf = norm(&fv, space)?.to_f64();
        if nf <= 0.0 {
            continue;
        }
        let pairing: f64 = phif.iter().zip(&f).map(|(a, b)| a * b).sum();
        best = best.max(pairing.abs() / nf);
    }
    Ok(Scalar::Float(best))
}

/// Type P constant: max_m || sum_{k<=m} x_k ||.
pub fn type_p_constant(basis: &Basis) -> Result<(Scalar, Certification), BasisError> {
    let n = basis.dim();
    let mut partial = vec![Rat::zero(); n];
    let mut best: Option<Scalar> = None;
    let mut flag = Certification::CertifiedExact;
    for k in 1..=n {
        for i in 0..n {
            let x = &basis.vectors()[(i, k - 1)];
            if !x.is_zero() {
                partial[i] += x;
            }
        }
        let v = CoordVector::from_rats(partial.clone());
        let nv = norm(&v, &basis.space)?;
        if !nv.is_exact() {
            flag = Certification::CertifiedExact; // quadrature-backed value, still a computed norm
        }
        if best.as_ref().map_or(true, |b| nv.cmp_value(b).is_gt()) {
            best = Some(nv);
        }
    }
    Ok((best.expect("dim >= 1"), flag))
}

/// Type P* constant: the dual norm of the summing functional sum_n x*_n.
pub fn type_p_star_constant(basis: &Basis) -> Result<(Scalar, Certification), BasisError> {
    let n = basis.dim();
    let mut phi = vec![Rat::zero(); n];
    for k in 1..=n {
        for j in 0..n {
            let p = &basis.inverse()[(k - 1, j)];
            if !p.is_zero() {
                phi[j] += p;
            }
        }
    }
    let phiv = CoordVector::from_rats(phi);
    match dual_norm(&phiv, &basis.space) {
        Ok(v) => Ok((v, Certification::CertifiedExact)),
        Err(SpaceError::NotImplemented(_)) => Ok((
            heuristic_dual_norm(&phiv, &basis.space, 800, 17)?,
            Certification::HeuristicLowerBound,
        )),
        Err(e) => Err(e.into()),
    }
}

/// Full report of the classical constants.
pub fn basis_report(
    basis: &Basis,
    mode: OpNormMode,
    budget: u128,
    seed: u64,
) -> Result<BasisReport, BasisError> {
    let (a, b, functional_sup) = seminorm_bounds(basis)?;
    Ok(BasisReport {
        basis_constant: basis_constant(basis, mode, budget, seed)?,
        seminorm_lower: a,
        seminorm_upper: b,
        functional_sup,
        type_p: type_p_constant(basis)?,
        type_p_star: type_p_star_constant(basis)?,
    })
}

/// The partial-sum transform: y_n = sum_{k<=n} x_k.
pub fn transform_partial_sums(basis: &Basis) -> Result<Basis, BasisError> {
    let n = basis.dim();
    let mut u = RatMatrix::zeros(n, n);
    for k in 0..n {
        for row in 0..=k {
            u[(row, k)] = Rat::one();
        }
    }
    Basis::new(basis.space.clone(), basis.vectors.mul(&u))
}

/// The difference transform: y_n = x_n - x_{n-1} (x_0 = 0). Inverse of the
/// partial-sum transform.
pub fn transform_differences(basis: &Basis) -> Result<Basis, BasisError> {
    let n = basis.dim();
    let mut d = RatMatrix::zeros(n, n);
    for k in 0..n {
        d[(k, k)] = Rat::one();
        if k + 1 < n {
            d[(k, k + 1)] = -Rat::one();
        }
    }
    Basis::new(basis.space.clone(), basis.vectors.mul(&d))
}

/// Pairwise twist: y_{2n-1} = x_{2n-1} + x_{2n}, y_{2n} = x_{2n-1} - x_{2n}.
pub fn twist(basis: &Basis) -> Result<Basis, BasisError> {
    let n = basis.dim();
    if n % 2 != 0 {
        return Err(BasisError::OddDimension(n));
    }
    let mut w = RatMatrix::zeros(n, n);
    for p in 0..n / 2 {
        w[(2 * p, 2 * p)] = Rat::one();
        w[(2 * p + 1, 2 * p)] = Rat::one();
        w[(2 * p, 2 * p + 1)] = Rat::one();
        w[(2 * p + 1, 2 * p + 1)] = -Rat::one();
    }
    Basis::new(basis.space.clone(), basis.vectors.mul(&w))
}

/// Interleave two same-length bases into the max direct sum:
/// z_{2n-1} = (x_n, y_n), z_{2n} = (x_n, -y_n).
pub fn diamond(b1: &Basis, b2: &Basis) -> Result<Basis, BasisError> {
    let n = b1.dim();
    if n != b2.dim() {
        return Err(BasisError::ComponentMismatch(n, b2.dim()));
    }
    let dim = 2 * n;
    let space = NormSpec::direct_sum_max(b1.space.clone(), n, b2.space.clone(), n);
    let mut m = RatMatrix::zeros(dim, dim);
    for k in 0..n {
        for i in 0..n {
            let x = b1.vectors[(i, k)].clone();
            let y = b2.vectors[(i, k)].clone();
            m[(i, 2 * k)] = x.clone();
            m[(n + i, 2 * k)] = y.clone();
            m[(i, 2 * k + 1)] = x;
            m[(n + i, 2 * k + 1)] = -y;
        }
    }
    Basis::new(space, m)
}

/// Index bookkeeping for the block construction: block j occupies positions
/// 2^j - 1 ..= 2^(j+1) - 2, its first half 2^j - 1 ..= 3*2^(j-1) - 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockIndex {
    pub j: u32,
    pub k: usize,
}

/// Decompose n (1-based) as 2^j + 2k - 3 (odd) or 2^j + 2k - 2 (even) with
/// 1 <= k <= 2^(j-1).
pub fn block_index(n: usize) -> BlockIndex {
    debug_assert!(n >= 1);
    // block j spans [2^j - 1, 2^(j+1) - 2]
    let j = (usize::BITS - (n + 1).leading_zeros() - 1).max(1);
    let j = if n + 2 > (1 << (j + 1)) { j + 1 } else { j };
    let base = (1usize << j) - 1;
    let offset = n - base; // 0-based inside block
    BlockIndex {
        j,
        k: offset / 2 + 1,
    }
}

/// Number of complete blocks J with dim = 2^(J+1) - 2, if the dimension has
/// block form.
pub fn block_count(dim: usize) -> Option<u32> {
    let mut j = 1u32;
    loop {
        let d = (1usize << (j + 1)) - 2;
        if d == dim {
            return Some(j);
        }
        if d > dim {
            return None;
        }
        j += 1;
    }
}

/// The two-stage block construction over a type-P basis.
///
/// Stage one rebuilds each dyadic block so its first half keeps the original
/// vectors and its second half carries their running sums started afresh
/// inside the block. Stage two pairs the two halves of every block and
/// replaces each pair by sum and difference, like the twist. Requires
/// complete blocks: dim = 2^(J+1) - 2.
pub fn block_construction(basis: &Basis) -> Result<(Basis, Basis), BasisError> {
    let n = basis.dim();
    let jmax = block_count(n).ok_or(BasisError::BadBlockDimension(n))?;
    // stage one: within block j, positions p in [2^j - 1, 3*2^(j-1) - 2]
    // stay, later positions accumulate from 3*2^(j-1) - 1
    let mut u = RatMatrix::zeros(n, n);
    for j in 1..=jmax {
        let lo = (1usize << j) - 1; // first index of block (1-based)
        let mid = 3 * (1usize << (j - 1)) - 1; // first index of second half
        let hi = (1usize << (j + 1)) - 2; // last index of block
        for p in lo..mid {
            u[(p - 1, p - 1)] = Rat::one();
        }
        for p in mid..=hi {
            for src in mid..=p {
                u[(src - 1, p - 1)] = Rat::one();
            }
        }
    }
    let b1 = Basis::new(basis.space.clone(), basis.vectors.mul(&u))?;

    // stage two: z_(2^j + 2k - 3) = y_(2^j - 2 + k) + y_(3*2^(j-1) - 2 + k),
    //            z_(2^j + 2k - 2) = y_(2^j - 2 + k) - y_(3*2^(j-1) - 2 + k)
    let mut w = RatMatrix::zeros(n, n);
    for j in 1..=jmax {
        for k in 1..=(1usize << (j - 1)) {
            let first = (1usize << j) - 2 + k;
            let second = 3 * (1usize << (j - 1)) - 2 + k;
            let odd = (1usize << j) + 2 * k - 3;
            let even = odd + 1;
            w[(first - 1, odd - 1)] = Rat::one();
            w[(second - 1, odd - 1)] = Rat::one();
            w[(first - 1, even - 1)] = Rat::one();
            w[(second - 1, even - 1)] = -Rat::one();
        }
    }
    let b2 = Basis::new(basis.space.clone(), b1.vectors.mul(&w))?;
    Ok((b1, b2))
}

/// Ready-made bases.
pub mod standard {
    use super::*;

    /// Canonical coordinate basis e_1..e_n.
    pub fn canonical_basis(space: NormSpec, dim: usize) -> Basis {
        Basis::new(space, RatMatrix::identity(dim)).expect("identity is a basis")
    }

    /// Summing basis s_n = e_1 + ... + e_n.
    pub fn summing_basis(space: NormSpec, dim: usize) -> Basis {
        let mut m = RatMatrix::zeros(dim, dim);
        for k in 0..dim {
            for row in 0..=k {
                m[(row, k)] = Rat::one();
            }
        }
        Basis::new(space, m).expect("triangular, invertible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn canonical_basis_in_l2() {
        let b = standard::canonical_basis(NormSpec::l2(), 4);
        assert_eq!(b.vector(2), CoordVector::unit(4, 2));
        assert_eq!(b.functional(3), CoordVector::unit(4, 3));
    }

    #[test]
    fn summing_basis_functionals_are_differences() {
        let b = standard::summing_basis(NormSpec::Sup, 4);
        // s*_k = e_k - e_{k+1} for k < n, s*_n = e_n
        assert_eq!(
            b.functional(1),
            CoordVector::from_ints(&[1, -1, 0, 0])
        );
        assert_eq!(b.functional(4), CoordVector::from_ints(&[0, 0, 0, 1]));
    }

    #[test]
    fn repeated_column_is_rejected() {
        let m = RatMatrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        assert!(matches!(
            Basis::new(NormSpec::Sup, m),
            Err(BasisError::NotABasis)
        ));
    }

    #[test]
    fn projection_identities() {
        let b = standard::summing_basis(NormSpec::Sup, 3);
        let f = CoordVector::from_ints(&[1, 1, 0]);
        let all: Vec<usize> = (1..=3).collect();
        assert_eq!(coordinate_projection(&b, &all, &f).unwrap(), f);
        assert!(coordinate_projection(&b, &[], &f).unwrap().is_zero());
        // coefficient of s_1 is f_1 - f_2 = 0
        assert!(coordinate_projection(&b, &[1], &f).unwrap().is_zero());
    }

    #[test]
    fn out_of_range_index() {
        let b = standard::canonical_basis(NormSpec::Sup, 3);
        let f = CoordVector::from_ints(&[1, 2, 3]);
        assert!(matches!(
            coordinate_projection(&b, &[4], &f),
            Err(BasisError::IndexOutOfRange { index: 4, dim: 3 })
        ));
    }

    #[test]
    fn basis_constant_of_canonical_l2_is_one() {
        let b = standard::canonical_basis(NormSpec::l2(), 6);
        let (k, flag) = basis_constant(&b, OpNormMode::Exact, 1 << 22, 0).unwrap();
        assert_eq!(flag, Certification::CertifiedExact);
        assert!(k.approx_eq(&Scalar::one(), 1e-12));
    }

    #[test]
    fn basis_constant_of_summing_basis_is_two() {
        for n in [3usize, 6, 12] {
            let b = standard::summing_basis(NormSpec::Sup, n);
            let (k, flag) = basis_constant(&b, OpNormMode::Exact, 1 << 24, 0).unwrap();
            assert_eq!(flag, Certification::CertifiedExact);
            assert_eq!(k, Scalar::from_int(2), "n = {n}");
        }
    }

    #[test]
    fn twisted_l1_basis_constant_stays_small() {
        // twist of the canonical l1 basis: K <= K + 2C^2 = 3 with K = C = 1
        let b = standard::canonical_basis(NormSpec::l1(), 6);
        let t = twist(&b).unwrap();
        let (k, flag) = basis_constant(&t, OpNormMode::Exact, 1 << 22, 0).unwrap();
        assert_eq!(flag, Certification::CertifiedExact);
        // frozen from the enumeration: every odd partial sum has columns of
        // l1-norm at most 1, so the twist costs nothing here
        assert_eq!(k, Scalar::from_int(1));
        assert!(k.cmp_value(&Scalar::from_int(3)).is_le());
    }

    #[test]
    fn seminorm_bounds_examples() {
        let b = standard::canonical_basis(NormSpec::l2(), 5);
        let (a, bb, (d, _)) = seminorm_bounds(&b).unwrap();
        assert!(a.approx_eq(&Scalar::one(), 1e-12));
        assert!(bb.approx_eq(&Scalar::one(), 1e-12));
        assert!(d.approx_eq(&Scalar::one(), 1e-12));

        let s = standard::summing_basis(NormSpec::Sup, 5);
        let (a, bb, (d, flag)) = seminorm_bounds(&s).unwrap();
        assert_eq!(a, Scalar::from_int(1));
        assert_eq!(bb, Scalar::from_int(1));
        assert_eq!(d, Scalar::from_int(2));
        assert_eq!(flag, Certification::CertifiedExact);

        // scaled basis 2 e_n in l2: norms 2, functionals 1/2
        let mut m = RatMatrix::zeros(3, 3);
        for i in 0..3 {
            m[(i, i)] = rat(2, 1);
        }
        let sc = Basis::new(NormSpec::l2(), m).unwrap();
        let (a, bb, (d, _)) = seminorm_bounds(&sc).unwrap();
        assert!(a.approx_eq(&Scalar::from_int(2), 1e-12));
        assert!(bb.approx_eq(&Scalar::from_int(2), 1e-12));
        assert!(d.approx_eq(&Scalar::from_ratio(1, 2), 1e-12));
    }

    #[test]
    fn type_p_examples() {
        let (v, _) = type_p_constant(&standard::canonical_basis(NormSpec::Sup, 7)).unwrap();
        assert_eq!(v, Scalar::from_int(1));
        let (v, _) = type_p_constant(&standard::canonical_basis(NormSpec::l1(), 7)).unwrap();
        assert_eq!(v, Scalar::from_int(7));
    }

    #[test]
    fn partial_sum_transform_of_type_p_has_stable_type_p_star() {
        // the summing basis (partial sums of the canonical sup basis) keeps
        // type P* constant 1 across truncations
        for n in [4usize, 8, 16] {
            let b0 = transform_partial_sums(&standard::canonical_basis(NormSpec::Sup, n)).unwrap();
            let (v, flag) = type_p_star_constant(&b0).unwrap();
            assert_eq!(v, Scalar::from_int(1), "n = {n}");
            assert_eq!(flag, Certification::CertifiedExact);
        }
    }

    #[test]
    fn type_p_star_examples() {
        let (v, _) = type_p_star_constant(&standard::canonical_basis(NormSpec::l1(), 6)).unwrap();
        assert_eq!(v, Scalar::from_int(1));
        let (v, _) = type_p_star_constant(&standard::canonical_basis(NormSpec::Sup, 6)).unwrap();
        assert_eq!(v, Scalar::from_int(6));
        // summing basis in the bounded-variation space: the summing
        // functional collapses to e*_1, whose dual norm under the
        // final-drop convention is 1/2 (exact dual computation)
        let (v, _) = type_p_star_constant(&standard::summing_basis(NormSpec::V1, 6)).unwrap();
        assert_eq!(v, Scalar::from_ratio(1, 2));
    }

    #[test]
    fn partial_sums_of_canonical_is_summing() {
        let b = standard::canonical_basis(NormSpec::Sup, 5);
        let p = transform_partial_sums(&b).unwrap();
        assert_eq!(p.vectors(), standard::summing_basis(NormSpec::Sup, 5).vectors());
        let d = transform_differences(&p).unwrap();
        assert_eq!(d.vectors(), b.vectors());
    }

    #[test]
    fn transforms_are_mutually_inverse_on_arbitrary_bases() {
        let m = RatMatrix::from_i64_rows(&[&[2, 1, 0], &[1, 1, 1], &[0, 3, 1]]);
        let b = Basis::new(NormSpec::l1(), m).unwrap();
        let roundtrip = transform_differences(&transform_partial_sums(&b).unwrap()).unwrap();
        assert_eq!(roundtrip.vectors(), b.vectors());
    }

    #[test]
    fn twist_on_canonical_pair() {
        let b = standard::canonical_basis(NormSpec::Sup, 2);
        let t = twist(&b).unwrap();
        assert_eq!(t.vector(1), CoordVector::from_ints(&[1, 1]));
        assert_eq!(t.vector(2), CoordVector::from_ints(&[1, -1]));
        // biorthogonals are the half sum/difference
        assert_eq!(
            t.functional(1),
            CoordVector::from_rats(vec![rat(1, 2), rat(1, 2)])
        );
        assert_eq!(
            t.functional(2),
            CoordVector::from_rats(vec![rat(1, 2), rat(-1, 2)])
        );
    }

    #[test]
    fn twist_rejects_odd_dimension() {
        let b = standard::canonical_basis(NormSpec::Sup, 3);
        assert!(matches!(twist(&b), Err(BasisError::OddDimension(3))));
    }

    #[test]
    fn twist_preserves_span() {
        let m = RatMatrix::from_i64_rows(&[&[1, 2, 0, 1], &[0, 1, 1, 0], &[1, 0, 1, 1], &[0, 0, 2, 1]]);
        let b = Basis::new(NormSpec::l1(), m).unwrap();
        let t = twist(&b).unwrap();
        let joint = b.vectors().hcat(t.vectors());
        assert_eq!(joint.rank(), 4);
    }

    #[test]
    fn diamond_of_singletons() {
        let b1 = standard::canonical_basis(NormSpec::Sup, 1);
        let b2 = standard::canonical_basis(NormSpec::l1(), 1);
        let d = diamond(&b1, &b2).unwrap();
        assert_eq!(d.vector(1), CoordVector::from_ints(&[1, 1]));
        assert_eq!(d.vector(2), CoordVector::from_ints(&[1, -1]));
    }

    #[test]
    fn diamond_is_seminormalized() {
        let d = diamond(
            &standard::canonical_basis(NormSpec::Sup, 4),
            &standard::canonical_basis(NormSpec::l1(), 4),
        )
        .unwrap();
        let (a, b, _) = seminorm_bounds(&d).unwrap();
        // component bounds are 1; the diamond stays within [1/2, 2]
        assert!(a.cmp_value(&Scalar::from_ratio(1, 2)).is_ge());
        assert!(b.cmp_value(&Scalar::from_int(2)).is_le());
    }

    #[test]
    fn block_index_examples() {
        assert_eq!(block_index(7), BlockIndex { j: 3, k: 1 });
        assert_eq!(block_index(1), BlockIndex { j: 1, k: 1 });
        assert_eq!(block_index(2), BlockIndex { j: 1, k: 1 });
        assert_eq!(block_index(3), BlockIndex { j: 2, k: 1 });
        assert_eq!(block_index(6), BlockIndex { j: 2, k: 2 });
        assert_eq!(block_index(14), BlockIndex { j: 3, k: 4 });
    }

    #[test]
    fn block_count_accepts_only_complete_blocks() {
        assert_eq!(block_count(2), Some(1));
        assert_eq!(block_count(6), Some(2));
        assert_eq!(block_count(14), Some(3));
        assert_eq!(block_count(30), Some(4));
        assert_eq!(block_count(8), None);
    }

    #[test]
    fn single_block_construction_is_the_twist() {
        let b = standard::canonical_basis(NormSpec::Sup, 2);
        let (b1, b2) = block_construction(&b).unwrap();
        assert_eq!(b1.vectors(), b.vectors());
        assert_eq!(b2.vector(1), CoordVector::from_ints(&[1, 1]));
        assert_eq!(b2.vector(2), CoordVector::from_ints(&[1, -1]));
    }

    #[test]
    fn block_stage_one_matches_closed_form_functionals() {
        // block j = 2 of dim 6: positions 3,4 unchanged; y_5 = x_5,
        // y_6 = x_5 + x_6; y*_5 = x*_5 - x*_6, y*_6 = x*_6
        let b = standard::canonical_basis(NormSpec::Sup, 6);
        let (b1, _) = block_construction(&b).unwrap();
        assert_eq!(b1.vector(5), CoordVector::unit(6, 5));
        assert_eq!(
            b1.vector(6),
            CoordVector::from_ints(&[0, 0, 0, 0, 1, 1])
        );
        assert_eq!(
            b1.functional(5),
            CoordVector::from_ints(&[0, 0, 0, 0, 1, -1])
        );
        assert_eq!(b1.functional(6), CoordVector::unit(6, 6));
    }

    #[test]
    fn block_stage_one_basis_constant_within_cap() {
        // stage-one partial sums are either S_m or S_m minus a rank-one
        // correction, so the basis constant is capped by K + bd = 2 here
        let base = standard::canonical_basis(NormSpec::Sup, 14);
        let (b1, _) = block_construction(&base).unwrap();
        let (k, flag) = basis_constant(&b1, OpNormMode::Exact, 1 << 28, 0).unwrap();
        assert_eq!(flag, Certification::CertifiedExact);
        assert!(k.cmp_value(&Scalar::from_int(2)).is_le(), "{k:?}");
    }

    #[test]
    fn diamond_basis_constant_is_finite_and_certified() {
        let d = diamond(
            &standard::canonical_basis(NormSpec::Sup, 4),
            &standard::canonical_basis(NormSpec::l1(), 4),
        )
        .unwrap();
        let (k, flag) = basis_constant(&d, OpNormMode::Exact, 1 << 26, 0).unwrap();
        assert_eq!(flag, Certification::CertifiedExact);
        assert!(k.to_f64().is_finite());
        assert!(k.cmp_value(&Scalar::one()).is_ge());
    }

    #[test]
    fn block_stage_two_biorthogonals_are_half_formulas() {
        let b = standard::canonical_basis(NormSpec::Sup, 6);
        let (b1, b2) = block_construction(&b).unwrap();
        // z_3 = y_3 + y_5, z*_3 = (y*_3 + y*_5)/2 for block j=2, k=1
        let z3 = b2.vector(3);
        assert_eq!(z3, b1.vector(3).add(&b1.vector(5)));
        let expected = b1
            .functional(3)
            .add(&b1.functional(5))
            .scale(&Scalar::from_ratio(1, 2));
        assert_eq!(b2.functional(3), expected);
    }

    #[test]
    fn biorthogonality_is_exact_after_every_transform() {
        let m = RatMatrix::from_i64_rows(&[&[1, 0, 2, 1], &[0, 1, 1, 0], &[1, 1, 0, 0], &[0, 2, 0, 1]]);
        let base = Basis::new(NormSpec::Sup, m).unwrap();
        let check = |b: &Basis| {
            assert_eq!(b.inverse().mul(b.vectors()), RatMatrix::identity(b.dim()));
        };
        check(&transform_partial_sums(&base).unwrap());
        check(&transform_differences(&base).unwrap());
        check(&twist(&base).unwrap());
        check(&diamond(&base, &base).unwrap());
        let c14 = standard::canonical_basis(NormSpec::Sup, 14);
        let (b1, b2) = block_construction(&c14).unwrap();
        check(&b1);
        check(&b2);
    }
}


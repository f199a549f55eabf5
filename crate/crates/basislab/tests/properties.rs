//! Property suites for the norm machinery, the greedy algorithm and the
//! basis transforms.

mod common;

use basislab::bases::{
    standard, transform_differences, transform_partial_sums, twist, Basis,
};
use basislab::greedy::{greedy_ordering, greedy_sum};
use basislab::matrix::RatMatrix;
use basislab::scalar::{rat, Rat, Scalar};
use basislab::spaces::{
    dual_norm_exact, k_functional_exact, norm, norm_exact, unit_ball_vertices_rat, NormSpec,
};
use basislab::vector::{dot_exact, CoordVector};
use common::{random_polyhedral_spec, random_vec};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn vec_strategy(dim: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(rat_strategy(), dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangle_inequality_and_homogeneity(seed in 0u64..10_000, dim in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_polyhedral_spec(&mut rng, dim);
        let f = random_vec(&mut rng, dim, 30, 6);
        let g = random_vec(&mut rng, dim, 30, 6);
        let sum: Vec<Rat> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let nf = norm_exact(&f, &spec);
        let ng = norm_exact(&g, &spec);
        let nsum = norm_exact(&sum, &spec);
        prop_assert!(nsum <= &nf + &ng);
        // absolute homogeneity, exactly
        let c = rat(-7, 3);
        let scaled: Vec<Rat> = f.iter().map(|a| a * &c).collect();
        prop_assert_eq!(norm_exact(&scaled, &spec), c.abs() * &nf);
        // positivity
        prop_assert!(nf >= Rat::zero());
    }

    #[test]
    fn sup_norm_below_variation_norm(f in vec_strategy(6)) {
        let sup = norm_exact(&f, &NormSpec::Sup);
        let v1 = norm_exact(&f, &NormSpec::V1);
        prop_assert!(sup <= v1);
    }

    #[test]
    fn dual_norm_matches_vertex_bruteforce(seed in 0u64..10_000, dim in 1usize..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_polyhedral_spec(&mut rng, dim);
        let phi = random_vec(&mut rng, dim, 20, 5);
        let dual = dual_norm_exact(&phi, &spec).unwrap();
        let verts = unit_ball_vertices_rat(&spec, dim, 1 << 20).unwrap();
        let brute = verts
            .iter()
            .map(|v| dot_exact(&phi, v).abs())
            .max()
            .unwrap();
        prop_assert_eq!(dual, brute);
    }

    #[test]
    fn k_functional_envelope_and_concavity(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 4;
        let f = random_vec(&mut rng, dim, 12, 4);
        let n0 = norm_exact(&f, &NormSpec::V1);
        let n1 = norm_exact(&f, &NormSpec::Sup);
        let grid: Vec<Rat> = (1..=12).map(|i| rat(i, 3)).collect();
        let ks: Vec<Rat> = grid
            .iter()
            .map(|t| k_functional_exact(&f, t, &NormSpec::V1, &NormSpec::Sup).unwrap())
            .collect();
        for w in ks.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for i in 1..ks.len() - 1 {
            prop_assert!(&ks[i] + &ks[i] >= &ks[i - 1] + &ks[i + 1]);
        }
        for (t, k) in grid.iter().zip(&ks) {
            prop_assert!(k <= &n0);
            prop_assert!(k <= &(t * &n1));
        }
    }

    #[test]
    fn greedy_sum_is_idempotent_property(coeffs in vec_strategy(5), m in 0usize..=5) {
        let basis = standard::summing_basis(NormSpec::Sup, 5);
        let f = CoordVector::from_rats(basis.combine(&coeffs, &[1, 2, 3, 4, 5]));
        let once = greedy_sum(&basis, &f, m).unwrap();
        let twice = greedy_sum(&basis, &once, m).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn greedy_ordering_sorts_by_modulus(coeffs in vec_strategy(7)) {
        let cv = CoordVector::from_rats(coeffs.clone());
        let rho = greedy_ordering(&cv);
        let perm = rho.permutation();
        // moduli weakly decrease along rho; ties keep index order
        for w in perm.windows(2) {
            let a = coeffs[w[0] - 1].abs();
            let b = coeffs[w[1] - 1].abs();
            prop_assert!(a > b || (a == b && w[0] < w[1]));
        }
        // total permutation
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (1..=7).collect::<Vec<_>>());
    }

    #[test]
    fn biorthogonality_survives_transforms(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 4;
        // random invertible matrix: retry until nonsingular
        let basis = loop {
            let data: Vec<Rat> = (0..dim * dim)
                .map(|_| rat(rng.gen_range(-4i64..=4), 1))
                .collect();
            let m = RatMatrix::new(dim, dim, data);
            if let Ok(b) = Basis::new(NormSpec::Sup, m) {
                break b;
            }
        };
        let id = RatMatrix::identity(dim);
        for b in [
            transform_partial_sums(&basis).unwrap(),
            transform_differences(&basis).unwrap(),
            twist(&basis).unwrap(),
        ] {
            prop_assert_eq!(b.inverse().mul(b.vectors()), id.clone());
        }
        // difference of partial sums is the identity transform
        let roundtrip = transform_differences(&transform_partial_sums(&basis).unwrap()).unwrap();
        prop_assert_eq!(roundtrip.vectors().clone(), basis.vectors().clone());
    }
}

#[test]
fn norm_is_exact_on_exact_polyhedral_input() {
    let f = CoordVector::from_rats(vec![rat(1, 3), rat(-2, 7)]);
    for spec in [NormSpec::l1(), NormSpec::Sup, NormSpec::V1] {
        assert!(norm(&f, &spec).unwrap().is_exact());
    }
    assert!(!norm(&f, &NormSpec::l2()).unwrap().is_exact());
}

#[test]
fn scalar_one_is_exact() {
    assert_eq!(Scalar::one(), Scalar::from_ratio(2, 2));
}

use rand::Rng;

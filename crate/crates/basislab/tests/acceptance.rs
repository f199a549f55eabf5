//! Acceptance suite: one test per criterion, each ending in a single
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; any failure fails the corresponding test.

mod common;

use basislab::bases::{basis_constant, block_construction, standard, type_p_constant};
use basislab::cert::Certification;
use basislab::conditionality::{
    fit_entries, k_m_table, l_m, paper_witness_block, paper_witness_diamond, ComputeMode,
    GrowthModel,
};
use basislab::greedy::{quasi_greedy_estimate, EstimateMode};
use basislab::interpolation::{composition_identities_hold, isometry_check_q, pisier_xu_space};
use basislab::scalar::{rat, Rat, Scalar};
use basislab::spaces::{
    inclusion_constant, interpolated_norm_parts, k_functional_exact, norm_exact,
    sum_norm_via_dual_lp, NormSpec, OpNormMode, QuadratureParams,
};
use common::{random_vec, trapezoid_interpolation_norm};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const BUDGET: u128 = 100_000_000;

fn pass(n: u32, what: &str, started: Instant, limit_s: Option<f64>) {
    let secs = started.elapsed().as_secs_f64();
    if let Some(limit) = limit_s {
        assert!(
            secs < limit,
            "criterion {n} exceeded its runtime budget: {secs:.1}s >= {limit}s"
        );
    }
    println!("criterion {n:2} PASS ({secs:6.2}s): {what}");
}

#[test]
fn criterion_01_unconditional_baseline() {
    let started = Instant::now();
    for spec in [NormSpec::l2(), NormSpec::l1()] {
        let b = standard::canonical_basis(spec.clone(), 16);
        let ks = k_m_table(&b, 16, ComputeMode::Exact, BUDGET, 0).unwrap();
        for e in &ks {
            assert_eq!(e.value, Scalar::one(), "k_{} for {spec:?}", e.m);
            assert_eq!(e.flag, Certification::CertifiedExact);
        }
        for m in 1..=16 {
            let l = l_m(&b, m, ComputeMode::Exact, BUDGET, 0).unwrap();
            assert_eq!(l.value, Scalar::one(), "L_{m} for {spec:?}");
            assert_eq!(l.flag, Certification::CertifiedExact);
        }
    }
    let l1_8 = standard::canonical_basis(NormSpec::l1(), 8);
    let gamma = quasi_greedy_estimate(&l1_8, EstimateMode::Exact, 200_000, 0).unwrap();
    assert_eq!(gamma.lower_bound, Scalar::one());
    assert_eq!(gamma.certification, Certification::CertifiedExact);
    pass(
        1,
        "canonical l2/l1 at n=16: exact k_m = L_m = 1, exact Gamma = 1 at n=8",
        started,
        Some(10.0),
    );
}

#[test]
fn criterion_02_summing_basis_linear_growth() {
    let started = Instant::now();
    let b = standard::summing_basis(NormSpec::Sup, 12);
    let table = k_m_table(&b, 12, ComputeMode::Exact, BUDGET, 0).unwrap();
    assert_eq!(table[0].value, Scalar::from_int(2), "k_1");
    for e in &table {
        assert_eq!(e.flag, Certification::CertifiedExact);
    }
    for w in table.windows(2) {
        assert!(w[0].value.cmp_value(&w[1].value).is_le(), "monotone");
    }
    // the table saturates at k_m = n from m = n/2 on; the linear regime
    // lives in the pre-saturation range, so that is what gets fitted
    let fit = fit_entries(&table, GrowthModel::PowerLaw, 2, 6).unwrap();
    assert!(fit.exponent >= 0.9, "alpha = {}", fit.exponent);
    assert!(fit.r_squared >= 0.98, "r2 = {}", fit.r_squared);
    pass(
        2,
        "summing basis n=12: exact table, k_1 = 2, power-law alpha >= 0.9, R^2 >= 0.98",
        started,
        Some(60.0),
    );
}

#[test]
fn criterion_03_diamond_witnesses_and_exact_l() {
    let started = Instant::now();
    // ambient dimension 32: explicit witness certificates for 2 <= j <= 16
    let b1 = standard::canonical_basis(NormSpec::Sup, 16);
    let b2 = standard::canonical_basis(NormSpec::l1(), 16);
    for j in 2..=16usize {
        let (d, cert) = paper_witness_diamond(&b1, &b2, j).unwrap();
        let floor = Scalar::from_ratio(j as i64 - 1, 2);
        assert!(
            cert.bound.cmp_value(&floor).is_ge(),
            "L_{} witness below (j-1)/2 at j={j}",
            2 * j
        );
        assert!(cert.revalidate(&d, 1e-12).unwrap(), "revalidation at j={j}");
        assert_eq!(cert.m, 2 * j);
    }
    // reduced dimension 12: exact L_m for m <= 6 dominates the witness
    let c1 = standard::canonical_basis(NormSpec::Sup, 6);
    let c2 = standard::canonical_basis(NormSpec::l1(), 6);
    for m in 1..=6usize {
        let (d12, _) = paper_witness_diamond(&c1, &c2, 1).unwrap();
        let exact = l_m(&d12, m, ComputeMode::Exact, BUDGET, 0).unwrap();
        assert_eq!(exact.flag, Certification::CertifiedExact, "m={m}");
        if m % 2 == 0 {
            let j = m / 2;
            let (_, cert) = paper_witness_diamond(&c1, &c2, j).unwrap();
            assert!(
                exact.value.cmp_value(&cert.bound).is_ge(),
                "exact L_{m} below witness at j={j}"
            );
            let floor = Scalar::from_ratio(j as i64 - 1, 2);
            assert!(exact.value.cmp_value(&floor).is_ge());
        }
    }
    pass(
        3,
        "diamond c0/l1: witness bounds L_2j >= (j-1)/2 for j <= 16, exact L_m >= witness at dim 12",
        started,
        Some(60.0),
    );
}

#[test]
fn criterion_04_block_construction_bounds() {
    let started = Instant::now();
    let base = standard::canonical_basis(NormSpec::Sup, 14);
    let (_, b2) = block_construction(&base).unwrap();
    let (k, flag) = basis_constant(&b2, OpNormMode::Exact, BUDGET, 0).unwrap();
    assert_eq!(flag, Certification::CertifiedExact);
    assert!(
        k.cmp_value(&Scalar::from_int(8)).is_le(),
        "basis constant {k:?} above the construction cap 8"
    );
    let cert = paper_witness_block(&b2, 3).unwrap();
    assert_eq!(cert.m, 14);
    let floor = Scalar::from_ratio(17, 32); // (m+3)/32 - 1/2 at m = 14
    assert!(cert.bound.cmp_value(&floor).is_ge());
    assert!(cert.revalidate(&b2, 1e-12).unwrap());
    pass(
        4,
        "block construction J=3 (n=14): exact basis constant <= 8, block witness >= 17/32",
        started,
        Some(30.0),
    );
}

#[test]
fn criterion_05_isometry_and_identities() {
    let started = Instant::now();
    let report = isometry_check_q(1000, 16, 2024);
    assert_eq!(report.failures, 0);
    assert_eq!(report.passes, 1000);
    for dim in 2..=16 {
        assert!(composition_identities_hold(dim), "dim {dim}");
    }
    pass(
        5,
        "running-sum isometry exact on 1000 vectors; shift identities exact on dims 2..16",
        started,
        Some(5.0),
    );
}

#[test]
fn criterion_06_k_functional_against_dual_oracle() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let pairs = [
        (NormSpec::V1, NormSpec::Sup),
        (NormSpec::l1(), NormSpec::Sup),
    ];
    for case in 0..100 {
        let dim = rng.gen_range(2..=8usize);
        let f = random_vec(&mut rng, dim, 16, 4);
        let (s0, s1) = &pairs[case % 2];
        // K(f,1) equals the sum-space norm computed by the independent
        // dual-ball LP, exactly
        let k1 = k_functional_exact(&f, &rat(1, 1), s0, s1).unwrap();
        let oracle = sum_norm_via_dual_lp(&f, s0, s1, 1 << 22).unwrap();
        assert_eq!(k1, oracle, "case {case}");
        // concavity, monotonicity and the min-envelope on a rational grid
        let grid: Vec<Rat> = (1..=8).map(|i| rat(i, 2)).collect();
        let ks: Vec<Rat> = grid
            .iter()
            .map(|t| k_functional_exact(&f, t, s0, s1).unwrap())
            .collect();
        let n0 = norm_exact(&f, s0);
        let n1 = norm_exact(&f, s1);
        for w in ks.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for i in 1..ks.len() - 1 {
            assert!(&ks[i] + &ks[i] >= &ks[i - 1] + &ks[i + 1]);
        }
        for (t, k) in grid.iter().zip(&ks) {
            assert!(*k <= n0);
            assert!(*k <= t * &n1);
        }
    }
    pass(
        6,
        "K(f,1) equals the independent dual-LP sum norm exactly on 100 vectors; envelope holds",
        started,
        None,
    );
}

#[test]
fn criterion_07_interpolation_integrators_agree() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let cases = [(0.5f64, 2.0f64), (1.0 / 3.0, 3.0)];
    for (theta, q) in cases {
        let c = inclusion_constant(theta, q);
        for _ in 0..25 {
            let dim = rng.gen_range(2..=6usize);
            let f = random_vec(&mut rng, dim, 8, 3);
            let adaptive =
                interpolated_norm_parts(&f, &NormSpec::V1, &NormSpec::Sup, theta, q, 30, 1e-9)
                    .unwrap();
            let reference =
                trapezoid_interpolation_norm(&f, &NormSpec::V1, &NormSpec::Sup, theta, q, 16384);
            let rel = (adaptive - reference).abs() / reference.max(1e-300);
            assert!(
                rel <= 1e-6,
                "integrators disagree: adaptive {adaptive} vs trapezoid {reference} (rel {rel:.2e})"
            );
            // derived inclusion constant
            let n0 = norm_exact(&f, &NormSpec::V1);
            let n1 = norm_exact(&f, &NormSpec::Sup);
            let cap = c * basislab::scalar::rat_to_f64(&n0.clone().max(n1.clone()));
            assert!(adaptive <= cap * (1.0 + 1e-8));
        }
    }
    pass(
        7,
        "adaptive vs dense-trapezoid interpolation norms agree to 1e-6 on 50 vectors",
        started,
        None,
    );
}

#[test]
fn criterion_08_pisier_xu_type_p_stability() {
    let started = Instant::now();
    let spec = pisier_xu_space(rat(1, 2), rat(2, 1), QuadratureParams::default()).unwrap();
    let b16 = standard::canonical_basis(spec.clone(), 16);
    let b32 = standard::canonical_basis(spec, 32);
    let v16 = type_p_constant(&b16).unwrap().0.to_f64();
    let v32 = type_p_constant(&b32).unwrap().0.to_f64();
    let rel = (v32 - v16).abs() / v16;
    assert!(
        rel < 0.10,
        "type-P constant moved by {:.1}% between dims 16 and 32",
        rel * 100.0
    );
    pass(
        8,
        "canonical type-P constant of the interpolation space stable within 10% (dims 16 vs 32)",
        started,
        Some(300.0),
    );
}

#[test]
fn criterion_09_quasi_greedy_shape() {
    let started = Instant::now();
    // exact unit constants on the unconditional pair
    let l1 = standard::canonical_basis(NormSpec::l1(), 8);
    let g1 = quasi_greedy_estimate(&l1, EstimateMode::Exact, 200_000, 9).unwrap();
    assert_eq!(g1.lower_bound, Scalar::one());
    assert_eq!(g1.revalidate(&l1).unwrap(), g1.lower_bound);

    let l2 = standard::canonical_basis(NormSpec::l2(), 8);
    let g2 = quasi_greedy_estimate(&l2, EstimateMode::Sampled, 4000, 9).unwrap();
    assert_eq!(g2.lower_bound.to_f64(), 1.0);
    assert_eq!(
        g2.revalidate(&l2).unwrap().to_f64(),
        g2.lower_bound.to_f64()
    );

    // the summing basis fails quasi-greediness visibly already at n = 8
    let s8 = standard::summing_basis(NormSpec::Sup, 8);
    let gs = quasi_greedy_estimate(&s8, EstimateMode::Sampled, 4000, 9).unwrap();
    assert!(
        gs.lower_bound.cmp_value(&Scalar::from_int(2)).is_ge(),
        "Gamma estimate {:?} below 2",
        gs.lower_bound
    );
    assert_eq!(gs.revalidate(&s8).unwrap(), gs.lower_bound);
    pass(
        9,
        "Gamma = 1 exactly on l1/l2; summing basis estimate >= 2; witnesses re-validate",
        started,
        None,
    );
}

#[test]
fn criterion_10_determinism_across_workers() {
    let started = Instant::now();
    let bin = env!("CARGO_BIN_EXE_basislab");
    let tmp = std::env::temp_dir().join(format!("basislab_det_{}", std::process::id()));
    let scenarios: &[&[&str]] = &[
        &["scenario", "summing-c0", "--dim", "8", "--mode", "witness"],
        &["scenario", "diamond-c0-l1", "--dim", "12", "--mode", "witness", "--m-max", "6"],
        &["scenario", "block-c0", "--blocks", "3", "--mode", "witness"],
        &["scenario", "pisier-xu", "--dim", "5", "--budget", "2000"],
        &["scenario", "unconditional-l2", "--dim", "8"],
    ];
    for (i, args) in scenarios.iter().enumerate() {
        let mut outputs: Vec<std::collections::BTreeMap<String, Vec<u8>>> = Vec::new();
        for workers in ["1", "4"] {
            let out_dir = tmp.join(format!("s{i}_w{workers}"));
            let status = std::process::Command::new(bin)
                .args(*args)
                .args(["--seed", "7", "--workers", workers, "--out"])
                .arg(&out_dir)
                .output()
                .expect("spawn basislab");
            assert!(
                status.status.success(),
                "scenario {args:?} failed: {}",
                String::from_utf8_lossy(&status.stderr)
            );
            let mut files = std::collections::BTreeMap::new();
            for entry in std::fs::read_dir(&out_dir).unwrap() {
                let entry = entry.unwrap();
                files.insert(
                    entry.file_name().to_string_lossy().into_owned(),
                    std::fs::read(entry.path()).unwrap(),
                );
            }
            outputs.push(files);
        }
        assert_eq!(
            outputs[0].keys().collect::<Vec<_>>(),
            outputs[1].keys().collect::<Vec<_>>(),
            "file sets differ for scenario {i}"
        );
        for (name, bytes) in &outputs[0] {
            assert_eq!(
                bytes,
                outputs[1].get(name).unwrap(),
                "scenario {i}: {name} differs between 1 and 4 workers"
            );
        }
    }
    let _ = std::fs::remove_dir_all(&tmp);
    pass(
        10,
        "all five scenarios byte-identical across --workers 1 and 4",
        started,
        None,
    );
}

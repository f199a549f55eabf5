//! The thresholding greedy algorithm in action: orderings with the
//! deterministic tie-break, greedy partial sums, and quasi-greedy constant
//! estimates on a well-behaved basis and on a failing one.
//!
//!     cargo run --example greedy_algorithm

use basislab::bases::standard;
use basislab::greedy::{
    greedy_ordering, greedy_sum, quasi_greedy_estimate, EstimateMode,
};
use basislab::scalar::rat;
use basislab::spaces::NormSpec;
use basislab::vector::CoordVector;

fn main() {
    // ordering: decreasing modulus, ties by ascending index
    let coeffs = CoordVector::from_rats(vec![rat(1, 2), rat(-2, 1), rat(2, 1), rat(1, 1)]);
    let rho = greedy_ordering(&coeffs);
    println!("coefficients (1/2, -2, 2, 1) order as {:?}", rho.permutation());

    // greedy sums keep the m largest-modulus coefficients
    let basis = standard::canonical_basis(NormSpec::l2(), 4);
    let f = CoordVector::from_ints(&[1, 3, -3, 0]);
    for m in 0..=4 {
        let g = greedy_sum(&basis, &f, m).unwrap();
        let coords: Vec<String> = g.coeffs().iter().map(|c| c.to_string()).collect();
        println!("  G_{m}(1,3,-3,0) = ({})", coords.join(", "));
    }
    println!();

    // an unconditional basis has quasi-greedy constant 1, certified
    let l1 = standard::canonical_basis(NormSpec::l1(), 8);
    let est = quasi_greedy_estimate(&l1, EstimateMode::Exact, 200_000, 0).unwrap();
    println!(
        "canonical l1 basis (n=8): Gamma estimate {} [{}]",
        est.lower_bound, est.certification
    );

    // the summing basis fails quasi-greediness: the best witness found by
    // the sampled search already shows a large ratio
    let summing = standard::summing_basis(NormSpec::Sup, 8);
    let est = quasi_greedy_estimate(&summing, EstimateMode::Sampled, 6000, 0).unwrap();
    println!(
        "summing basis (n=8): Gamma lower bound {} at m = {} [{}]",
        est.lower_bound.to_f64(),
        est.witness_m,
        est.certification
    );
    let check = est.revalidate(&summing).unwrap();
    println!("witness re-evaluates to {} (exact match)", check.to_f64());
}

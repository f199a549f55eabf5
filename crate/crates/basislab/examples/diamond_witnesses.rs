//! Interleaving a type-P basis with a type-P* basis through the diamond
//! construction produces a basis whose restricted conditionality constants
//! L_m grow linearly, witnessed by explicit vectors: summing the first 2j
//! diamond vectors and projecting onto the odd positions.
//!
//!     cargo run --example diamond_witnesses

use basislab::bases::standard;
use basislab::conditionality::{l_m, paper_witness_diamond, ComputeMode};
use basislab::spaces::NormSpec;

fn main() {
    let half = 16;
    let b1 = standard::canonical_basis(NormSpec::Sup, half);
    let b2 = standard::canonical_basis(NormSpec::l1(), half);

    println!("diamond of sup^{half} and l1^{half} (ambient dim {}):", 2 * half);
    println!("  j    m = 2j   witness bound   guaranteed floor (j-1)/2");
    for j in 1..=half {
        let (d, cert) = paper_witness_diamond(&b1, &b2, j).unwrap();
        assert!(cert.revalidate(&d, 1e-12).unwrap());
        println!(
            "  {:>2}   {:>5}    {:>10}     {:>8}",
            j,
            2 * j,
            cert.bound.to_f64(),
            (j as f64 - 1.0) / 2.0
        );
    }
    println!();

    // at a small dimension the witness bounds can be compared against the
    // exact restricted constants
    let c1 = standard::canonical_basis(NormSpec::Sup, 6);
    let c2 = standard::canonical_basis(NormSpec::l1(), 6);
    let (d12, _) = paper_witness_diamond(&c1, &c2, 1).unwrap();
    println!("exact L_m at ambient dim 12:");
    for m in 1..=6 {
        let e = l_m(&d12, m, ComputeMode::Exact, 100_000_000, 0).unwrap();
        println!("  L_{m} = {}  [{}]", e.value.to_f64(), e.flag);
    }
}

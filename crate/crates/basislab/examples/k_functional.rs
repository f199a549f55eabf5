//! K-functionals between the bounded-variation and sup norms: exact values
//! by linear programming, the piecewise-linear profile in t, and the real
//! interpolation norm computed from it.
//!
//!     cargo run --example k_functional

use basislab::scalar::{rat, Scalar};
use basislab::spaces::{
    interpolated_norm_parts, k_functional, k_profile, sum_norm_via_dual_lp, NormSpec,
};
use basislab::vector::CoordVector;

fn main() {
    let coords = vec![rat(3, 1), rat(-1, 2), rat(2, 1), rat(0, 1)];
    let f = CoordVector::from_rats(coords.clone());

    println!("f = (3, -1/2, 2, 0), X0 = bounded variation, X1 = sup");
    println!("  t        K(f,t)");
    for (num, den) in [(1i64, 10i64), (1, 2), (1, 1), (2, 1), (4, 1), (100, 1)] {
        let t = Scalar::from_ratio(num, den);
        let k = k_functional(&f, &t, &NormSpec::V1, &NormSpec::Sup).unwrap();
        println!("  {:>6}   {}", format!("{num}/{den}"), k.to_f64());
    }
    println!();

    // K(f, .) is concave piecewise linear; recover its exact structure
    let prof = k_profile(&coords, &NormSpec::V1, &NormSpec::Sup, 40).unwrap();
    println!("profile: ||f||_0 = {}, ||f||_1 = {}", prof.norm0, prof.norm1);
    println!("breakpoints at t = {:?}", prof.breakpoints);
    for (i, (a, s)) in prof.pieces.iter().enumerate() {
        println!("  piece {i}: K(t) = {a} + {s} t");
    }
    println!();

    // K(f,1) is the norm of f in the sum space; an independent dual-ball
    // linear program confirms it exactly
    let k1 = k_functional(&f, &Scalar::one(), &NormSpec::V1, &NormSpec::Sup).unwrap();
    let dual = sum_norm_via_dual_lp(&coords, &NormSpec::V1, &NormSpec::Sup, 1 << 20).unwrap();
    println!("K(f,1) = {} and the dual-LP sum norm = {}", k1, Scalar::Exact(dual));
    println!();

    // the interpolation norm integrates K^q against dt / t^(1+theta q)
    for (theta, q) in [(0.5, 2.0), (1.0 / 3.0, 3.0)] {
        let n = interpolated_norm_parts(&coords, &NormSpec::V1, &NormSpec::Sup, theta, q, 30, 1e-9)
            .unwrap();
        println!("interpolation norm at (theta, q) = ({theta:.3}, {q}) is {n:.9}");
    }
}

//! Tour of the coordinate-space norms: evaluation, dual norms, and the
//! extreme points of the polyhedral unit balls.
//!
//!     cargo run --example norms_and_duals

use basislab::spaces::{dual_norm, norm, unit_ball_vertices, NormSpec};
use basislab::vector::CoordVector;

fn main() {
    let f = CoordVector::from_ints(&[1, 0, 1]);
    println!("f = (1, 0, 1)");
    for spec in [NormSpec::l1(), NormSpec::l2(), NormSpec::Sup, NormSpec::V1] {
        let n = norm(&f, &spec).unwrap();
        println!("  norm under {:?} = {}", spec, n);
    }
    println!();

    // the bounded-variation norm charges the final drop to zero, so the
    // all-ones vector costs 2, not 1
    let ones = CoordVector::from_ints(&[1, 1, 1, 1]);
    println!(
        "variation norm of (1,1,1,1) = {}",
        norm(&ones, &NormSpec::V1).unwrap()
    );
    println!();

    // a max direct sum takes the larger component norm
    let spec = NormSpec::direct_sum_max(NormSpec::Sup, 2, NormSpec::l1(), 2);
    let g = CoordVector::from_ints(&[1, -1, 2, 1]);
    println!(
        "max-sum norm of (1,-1 | 2,1) over sup^2 (+) l1^2 = {}",
        norm(&g, &spec).unwrap()
    );
    println!();

    // dual norms close the pairing sup |<phi, f>| over the unit ball
    let phi = CoordVector::from_ints(&[1, -1, 0]);
    for spec in [NormSpec::l1(), NormSpec::Sup, NormSpec::V1] {
        println!(
            "dual norm of (1,-1,0) against {:?} = {}",
            spec,
            dual_norm(&phi, &spec).unwrap()
        );
    }
    println!();

    // polyhedral unit balls have finitely many extreme points
    for (spec, dim) in [(NormSpec::l1(), 2), (NormSpec::Sup, 2), (NormSpec::V1, 2)] {
        let verts = unit_ball_vertices(&spec, dim, 1 << 16).unwrap();
        println!("extreme points of the {:?} ball in dim {}:", spec, dim);
        for v in verts {
            let coords: Vec<String> = v.coeffs().iter().map(|c| c.to_string()).collect();
            println!("  ({})", coords.join(", "));
        }
    }
}

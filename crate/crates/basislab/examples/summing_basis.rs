//! The summing basis of the sup-norm truncation is the textbook example of
//! a semi-normalized Schauder basis whose conditionality constants grow
//! linearly. This example computes the exact k_m table by exhaustive
//! enumeration and fits the growth law.
//!
//!     cargo run --example summing_basis

use basislab::bases::{basis_report, standard};
use basislab::conditionality::{fit_entries, k_m_table, ComputeMode, GrowthModel};
use basislab::spaces::{NormSpec, OpNormMode};

fn main() {
    let n = 12;
    let basis = standard::summing_basis(NormSpec::Sup, n);

    let report = basis_report(&basis, OpNormMode::Exact, 1 << 27, 0).unwrap();
    println!("summing basis, dim {n}:");
    println!(
        "  basis constant K = {} ({})",
        report.basis_constant.0, report.basis_constant.1
    );
    println!(
        "  seminormalization a = {}, b = {}, sup ||x*|| = {}",
        report.seminorm_lower, report.seminorm_upper, report.functional_sup.0
    );
    println!(
        "  type P constant = {}, type P* constant = {}",
        report.type_p.0, report.type_p_star.0
    );
    println!();

    let table = k_m_table(&basis, n, ComputeMode::Exact, 100_000_000, 0).unwrap();
    println!("  m    k_m     flag");
    for e in &table {
        println!("  {:>2}    {:>5}   {}", e.m, e.value.to_f64(), e.flag);
    }
    println!();

    // the table saturates at k_m = n once m reaches n/2; fit the linear
    // regime before saturation
    let fit = fit_entries(&table, GrowthModel::PowerLaw, 2, n / 2).unwrap();
    println!(
        "power-law fit on m in [2, {}]: k_m = {:.3} * m^{:.3}  (R^2 = {:.6})",
        n / 2,
        fit.amplitude,
        fit.exponent,
        fit.r_squared
    );
}

//! Command-line front end: basis-file analysis, scenario presets, and
//! K-functional tables. Output is data (CSV/JSON) meant for scripts and
//! external plotting.

use crate::bases::{basis_report, block_construction, standard, Basis};
use crate::cert::Certification;
use crate::conditionality::{
    fit_entries, k_m_table, l_m_table, paper_witness_block, paper_witness_diamond, ComputeMode,
    ConstantEntry, GrowthModel, DEFAULT_FIT_MIN_M,
};
use crate::greedy::{quasi_greedy_estimate, EstimateMode, EXACT_REGION_LIMIT};
use crate::io::load_basis;
use crate::report::{AnalysisOutput, FitSummary, RunSummary};
use crate::scalar::{parse_rat, Rat, Scalar};
use crate::spaces::{
    interpolated_norm, k_functional, norm, sum_norm_via_dual_lp, NormSpec, OpNormMode,
    QuadratureParams,
};
use crate::vector::CoordVector;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "basislab",
    about = "Greedy-approximation laboratory: bases, conditionality constants, interpolation norms",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze a basis file: constants tables, witnesses, growth fits.
    Analyze(AnalyzeArgs),
    /// Run a named preset construction and analyze it.
    Scenario(ScenarioArgs),
    /// Tabulate the K-functional and the interpolation norm of a vector.
    Kfun(KfunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Witness,
    Heuristic,
}

impl From<ModeArg> for ComputeMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => ComputeMode::Exact,
            ModeArg::Witness => ComputeMode::Witness,
            ModeArg::Heuristic => ComputeMode::Heuristic,
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Computation mode for the constants tables.
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Enumeration budget (elementary updates / LP count cap).
    #[arg(long, default_value_t = 100_000_000)]
    pub budget: u128,
    /// Seed for every randomized search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest m in the constants tables (defaults to the dimension).
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (results are identical for any value).
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Basis file (JSON with "p/q" rational entries).
    pub basis_file: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioName {
    /// Summing basis of the sup-norm truncation: linear k_m growth.
    #[value(name = "summing-c0")]
    SummingC0,
    /// Diamond of the canonical sup and l1 bases: L_m grows linearly.
    #[value(name = "diamond-c0-l1")]
    DiamondC0L1,
    /// Two-stage block construction over the sup norm.
    #[value(name = "block-c0")]
    BlockC0,
    /// Canonical basis of the interpolation space between bounded
    /// variation and the sup norm.
    #[value(name = "pisier-xu")]
    PisierXu,
    /// Canonical basis of l2: flat constants.
    #[value(name = "unconditional-l2")]
    UnconditionalL2,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Preset name.
    #[arg(value_enum)]
    pub name: ScenarioName,
    /// Ambient dimension (diamond: total of both halves; block: ignored).
    #[arg(long, default_value_t = 12)]
    pub dim: usize,
    /// Number of complete blocks for the block construction.
    #[arg(long, default_value_t = 3)]
    pub blocks: u32,
    /// Interpolation parameter theta as p/q.
    #[arg(long, default_value = "1/2")]
    pub theta: String,
    /// Interpolation parameter q as p/q.
    #[arg(long, default_value = "2/1")]
    pub q: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct KfunArgs {
    /// Vector coordinates as comma-separated rationals, e.g. "1/1,0/1,-2/3".
    #[arg(long)]
    pub f: String,
    /// Interpolation parameter theta as p/q.
    #[arg(long, default_value = "1/2")]
    pub theta: String,
    /// Interpolation parameter q as p/q.
    #[arg(long, default_value = "2/1")]
    pub q: String,
    /// Geometric t-grid: "lo:hi:steps".
    #[arg(long, default_value = "1/100:100:25")]
    pub t_grid: String,
    /// Output directory for the CSV table.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("budget exhausted with no certificate: {0}")]
    Budget(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn space_err(e: crate::spaces::SpaceError) -> CliError {
    match e {
        crate::spaces::SpaceError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

/// Entry point: run a parsed command; all parallelism lives inside the
/// worker pool so byte-identical output is independent of `--workers`.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let workers = match &cli.command {
        Command::Analyze(a) => a.common.workers,
        Command::Scenario(s) => s.common.workers,
        Command::Kfun(_) => 1,
    }
    .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(internal)?;
    pool.install(|| match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Scenario(args) => cmd_scenario(args),
        Command::Kfun(args) => cmd_kfun(args),
    })
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let basis = load_basis(&args.basis_file).map_err(|e| CliError::Parse(e.to_string()))?;
    let id = args
        .basis_file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "basis".into());
    let out = analyze_basis(&basis, &id, &args.common, &[], None, None)?;
    let path = out.write(&args.common.out).map_err(internal)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Shared analysis pipeline: k/L tables, a quasi-greedy estimate, fits.
fn analyze_basis(
    basis: &Basis,
    id: &str,
    common: &CommonArgs,
    extra_l_certs: &[crate::conditionality::WitnessCertificate],
    fit_override: Option<(usize, usize)>,
    regime: Option<&str>,
) -> Result<AnalysisOutput, CliError> {
    let n = basis.dim();
    let m_max = common.m_max.unwrap_or(n).min(n).max(1);
    let mode: ComputeMode = common.mode.into();
    let budget = common.budget;
    let seed = common.seed;

    let k_rows = k_m_table(basis, m_max, mode, budget, seed).map_err(internal)?;
    let mut l_rows = l_m_table(basis, m_max, mode, budget, seed).map_err(internal)?;
    // fold in externally supplied certificates (paper witnesses)
    for cert in extra_l_certs {
        if cert.m >= 1 && cert.m <= m_max {
            let row = &mut l_rows[cert.m - 1];
            if cert.bound.cmp_value(&row.value).is_gt() {
                *row = ConstantEntry {
                    m: cert.m,
                    value: cert.bound.clone(),
                    flag: Certification::WitnessLowerBound,
                    certificate: Some(cert.clone()),
                };
            }
        }
    }

    let gamma_mode = if n <= EXACT_REGION_LIMIT
        && basis.space().is_polyhedral()
        && mode == ComputeMode::Exact
    {
        EstimateMode::Exact
    } else {
        EstimateMode::Sampled
    };
    let gamma = quasi_greedy_estimate(basis, gamma_mode, (budget.min(u64::MAX as u128)) as u64, seed)
        .map_err(internal)?;

    let opnorm_mode = if basis.space().is_polyhedral() || is_diag_friendly(basis) {
        OpNormMode::Exact
    } else {
        OpNormMode::Heuristic
    };
    let breport = basis_report(basis, opnorm_mode, budget, seed).map_err(internal)?;

    let mut fits = Vec::new();
    let (fit_lo, fit_hi) = fit_override.unwrap_or((DEFAULT_FIT_MIN_M, m_max));
    for (quantity, rows) in [("k", &k_rows), ("L", &l_rows)] {
        for model in [GrowthModel::PowerLaw, GrowthModel::LogPower, GrowthModel::LogLinear] {
            if let Ok(fit) = fit_entries(rows, model, fit_lo, fit_hi) {
                fits.push(FitSummary {
                    quantity: quantity.to_string(),
                    fit,
                });
            }
        }
        // saturated tables wash out the growth regime; fit the window up to
        // the first maximal entry as well
        if let (Some(first), Some(last)) = (rows.first(), rows.last()) {
            if first.value.cmp_value(&last.value).is_lt() {
                let sat = rows
                    .iter()
                    .find(|e| e.value.cmp_value(&last.value).is_ge())
                    .map(|e| e.m)
                    .unwrap_or(m_max);
                if sat < m_max {
                    if let Ok(fit) = fit_entries(rows, GrowthModel::PowerLaw, 2, sat) {
                        fits.push(FitSummary {
                            quantity: format!("{quantity}(pre-saturation)"),
                            fit,
                        });
                    }
                }
            }
        }
    }

    let mut notes = Vec::new();
    if let Some(regime) = regime {
        notes.push(format!("expected regime: {regime}"));
    }
    if fit_override.is_some() {
        notes.push(format!(
            "fits restricted to m in [{fit_lo}, {fit_hi}] (pre-saturation range)"
        ));
    }

    let summary = RunSummary {
        basis_id: id.to_string(),
        dim: n,
        mode: format!("{:?}", mode).to_lowercase(),
        budget,
        seed,
        basis: (&breport).into(),
        gamma: Some((&gamma).into()),
        fits,
        notes,
    };
    Ok(AnalysisOutput {
        basis_id: id.to_string(),
        k_rows,
        l_rows,
        gamma: Some(gamma),
        summary,
    })
}

fn is_diag_friendly(basis: &Basis) -> bool {
    // canonical basis in an absolute norm: the diagonal shortcut applies
    basis.space().is_absolute()
        && (0..basis.dim()).all(|i| {
            (0..basis.dim()).all(|j| {
                use num_traits::{One, Zero};
                let e = &basis.vectors()[(i, j)];
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
}

fn cmd_scenario(args: ScenarioArgs) -> Result<(), CliError> {
    let theta = parse_rat(&args.theta).map_err(|e| CliError::Parse(e.to_string()))?;
    let q = parse_rat(&args.q).map_err(|e| CliError::Parse(e.to_string()))?;
    let common = &args.common;
    match args.name {
        ScenarioName::SummingC0 => {
            let basis = standard::summing_basis(NormSpec::Sup, args.dim);
            // fit over the pre-saturation range: k_m saturates at n from
            // m = n/2 on, which would wash out the linear regime
            let hi = (args.dim / 2).max(5);
            let out = analyze_basis(
                &basis,
                "summing-c0",
                common,
                &[],
                Some((2, hi)),
                Some("k_m grows linearly until it saturates at the dimension"),
            )?;
            let path = out.write(&common.out).map_err(internal)?;
            println!("wrote {}", path.display());
        }
        ScenarioName::DiamondC0L1 => {
            if args.dim % 2 != 0 {
                return Err(CliError::Usage("diamond needs an even --dim".into()));
            }
            let half = args.dim / 2;
            let b1 = standard::canonical_basis(NormSpec::Sup, half);
            let b2 = standard::canonical_basis(NormSpec::l1(), half);
            let mut certs = Vec::new();
            let mut dbasis = None;
            for j in 1..=half {
                let (d, cert) = paper_witness_diamond(&b1, &b2, j).map_err(internal)?;
                certs.push(cert);
                dbasis = Some(d);
            }
            let basis = dbasis.expect("half >= 1");
            let mut common_l = clone_common(common);
            if common.mode == ModeArg::Exact && args.dim > 16 {
                // exact enumeration is hopeless at this size; stay honest
                common_l.mode = ModeArg::Witness;
            }
            let out = analyze_basis(
                &basis,
                "diamond-c0-l1",
                &common_l,
                &certs,
                None,
                Some("L_m grows linearly: the witness bound is (m/2 - 1)/2 at even m"),
            )?;
            let path = out.write(&common.out).map_err(internal)?;
            println!("wrote {}", path.display());
        }
        ScenarioName::BlockC0 => {
            let dim = (1usize << (args.blocks + 1)) - 2;
            let base = standard::canonical_basis(NormSpec::Sup, dim);
            let (_, b2) = block_construction(&base).map_err(internal)?;
            let mut certs = Vec::new();
            for j in 1..=args.blocks {
                certs.push(paper_witness_block(&b2, j).map_err(internal)?);
            }
            let mut c = clone_common(common);
            if c.mode == ModeArg::Exact && dim > 14 {
                c.mode = ModeArg::Witness;
            }
            let out = analyze_basis(
                &b2,
                "block-c0",
                &c,
                &certs,
                None,
                Some("L_m grows linearly across blocks while the basis constant stays under 8"),
            )?;
            let path = out.write(&common.out).map_err(internal)?;
            println!("wrote {}", path.display());
        }
        ScenarioName::PisierXu => {
            let spec = crate::interpolation::pisier_xu_space(
                theta,
                q,
                QuadratureParams::default(),
            )
            .map_err(internal)?;
            let basis = standard::canonical_basis(spec, args.dim);
            let mut c = clone_common(common);
            c.mode = ModeArg::Heuristic; // interpolation norms are float mode
            // quadrature-priced tables stay small unless asked otherwise
            c.m_max = Some(common.m_max.unwrap_or(4).min(args.dim));
            let out = analyze_basis(
                &basis,
                "pisier-xu",
                &c,
                &[],
                None,
                Some("canonical basis stays type P: partial-sum norms flat across truncations"),
            )?;
            let path = out.write(&common.out).map_err(internal)?;
            println!("wrote {}", path.display());
        }
        ScenarioName::UnconditionalL2 => {
            let basis = standard::canonical_basis(NormSpec::l2(), args.dim);
            let out = analyze_basis(
                &basis,
                "unconditional-l2",
                common,
                &[],
                None,
                Some("flat constants: k_m = L_m = Gamma = 1"),
            )?;
            let path = out.write(&common.out).map_err(internal)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn clone_common(c: &CommonArgs) -> CommonArgs {
    CommonArgs {
        mode: c.mode,
        budget: c.budget,
        seed: c.seed,
        m_max: c.m_max,
        out: c.out.clone(),
        workers: c.workers,
    }
}

fn cmd_kfun(args: KfunArgs) -> Result<(), CliError> {
    let coords: Result<Vec<Rat>, _> = args.f.split(',').map(|t| parse_rat(t)).collect();
    let coords = coords.map_err(|e| CliError::Parse(e.to_string()))?;
    if coords.is_empty() {
        return Err(CliError::Usage("empty vector".into()));
    }
    let f = CoordVector::from_rats(coords.clone());
    let theta = parse_rat(&args.theta).map_err(|e| CliError::Parse(e.to_string()))?;
    let q = parse_rat(&args.q).map_err(|e| CliError::Parse(e.to_string()))?;

    let parts: Vec<&str> = args.t_grid.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage("t-grid must be lo:hi:steps".into()));
    }
    let lo = parse_rat(parts[0]).map_err(|e| CliError::Parse(e.to_string()))?;
    let hi = parse_rat(parts[1]).map_err(|e| CliError::Parse(e.to_string()))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Usage("bad step count".into()))?;
    let (lof, hif) = (crate::scalar::rat_to_f64(&lo), crate::scalar::rat_to_f64(&hi));
    if !(lof > 0.0 && hif > lof && steps >= 2) {
        return Err(CliError::Usage("need 0 < lo < hi and steps >= 2".into()));
    }

    let spec0 = NormSpec::V1;
    let spec1 = NormSpec::Sup;
    let mut csv = String::from("t,k\n");
    println!("{:>14} {:>14}", "t", "K(f,t)");
    for i in 0..steps {
        let t = lof * (hif / lof).powf(i as f64 / (steps - 1) as f64);
        let k = k_functional(&f, &Scalar::Float(t), &spec0, &spec1).map_err(internal)?;
        println!("{:>14.6} {:>14.6}", t, k.to_f64());
        csv.push_str(&format!("{},{}\n", t, k.to_f64()));
    }
    // the t = 1 value is the norm of f in the sum space; cross-check it
    // against the independent dual formulation
    let k1 = k_functional(&f, &Scalar::one(), &spec0, &spec1).map_err(space_err)?;
    let sum_norm = sum_norm_via_dual_lp(&coords, &spec0, &spec1, 1 << 22).map_err(space_err)?;
    println!("K(f,1) = {} (sum-space norm {})", k1.to_f64(), crate::scalar::rat_to_f64(&sum_norm));

    let spec = crate::interpolation::pisier_xu_space(theta, q, QuadratureParams::default())
        .map_err(internal)?;
    let inorm = interpolated_norm(&f, &spec).map_err(internal)?;
    println!("interpolation norm = {inorm}");
    let n0 = norm(&f, &spec0).map_err(internal)?;
    let n1 = norm(&f, &spec1).map_err(internal)?;
    println!("base norms = {} / {}", n0.to_f64(), n1.to_f64());

    std::fs::create_dir_all(&args.out).map_err(internal)?;
    let path = args.out.join("kfun.csv");
    std::fs::write(&path, csv).map_err(internal)?;
    println!("wrote {}", path.display());
    Ok(())
}

//! Report emission: constants tables as CSV, witness certificates and run
//! summaries as JSON. All output is deterministic for fixed inputs, seeds
//! and budgets, independent of the worker count.

use crate::bases::BasisReport;
use crate::cert::Certification;
use crate::conditionality::{ConstantEntry, GrowthFit, WitnessCertificate};
use crate::greedy::QuasiGreedyEstimate;
use crate::scalar::{format_rat, Scalar};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// A scalar in file form: decimal always, exact "p/q" when available.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalarRepr {
    pub decimal: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl From<&Scalar> for ScalarRepr {
    fn from(s: &Scalar) -> Self {
        ScalarRepr {
            decimal: s.to_f64(),
            exact: s.as_exact().map(format_rat),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    pub basis_id: String,
    pub quantity: String,
    pub m: usize,
    pub f: Vec<String>,
    pub set: Vec<usize>,
    pub norm_f: ScalarRepr,
    pub norm_projection: ScalarRepr,
    pub bound: ScalarRepr,
}

impl WitnessFile {
    pub fn new(basis_id: &str, quantity: &str, cert: &WitnessCertificate) -> Self {
        let f = cert
            .f
            .coeffs()
            .iter()
            .map(|c| match c.as_exact() {
                Some(r) => format_rat(r),
                None => c.to_f64().to_string(),
            })
            .collect();
        WitnessFile {
            basis_id: basis_id.to_string(),
            quantity: quantity.to_string(),
            m: cert.m,
            f,
            set: cert.set.clone(),
            norm_f: (&cert.norm_f).into(),
            norm_projection: (&cert.norm_projection).into(),
            bound: (&cert.bound).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub quantity: String,
    pub fit: GrowthFit,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisSummary {
    pub basis_constant: ScalarRepr,
    pub basis_constant_flag: Certification,
    pub seminorm_lower: ScalarRepr,
    pub seminorm_upper: ScalarRepr,
    pub functional_sup: ScalarRepr,
    pub functional_sup_flag: Certification,
    pub type_p: ScalarRepr,
    pub type_p_star: ScalarRepr,
}

impl From<&BasisReport> for BasisSummary {
    fn from(r: &BasisReport) -> Self {
        BasisSummary {
            basis_constant: (&r.basis_constant.0).into(),
            basis_constant_flag: r.basis_constant.1,
            seminorm_lower: (&r.seminorm_lower).into(),
            seminorm_upper: (&r.seminorm_upper).into(),
            functional_sup: (&r.functional_sup.0).into(),
            functional_sup_flag: r.functional_sup.1,
            type_p: (&r.type_p.0).into(),
            type_p_star: (&r.type_p_star.0).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaSummary {
    pub lower_bound: ScalarRepr,
    pub witness_m: usize,
    pub mode: String,
    pub certification: Certification,
}

impl From<&QuasiGreedyEstimate> for GammaSummary {
    fn from(e: &QuasiGreedyEstimate) -> Self {
        GammaSummary {
            lower_bound: (&e.lower_bound).into(),
            witness_m: e.witness_m,
            mode: format!("{:?}", e.mode).to_lowercase(),
            certification: e.certification,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub basis_id: String,
    pub dim: usize,
    pub mode: String,
    pub budget: u128,
    pub seed: u64,
    pub basis: BasisSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaSummary>,
    pub fits: Vec<FitSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// The full analysis output of one basis.
#[derive(Debug)]
pub struct AnalysisOutput {
    pub basis_id: String,
    pub k_rows: Vec<ConstantEntry>,
    pub l_rows: Vec<ConstantEntry>,
    pub gamma: Option<QuasiGreedyEstimate>,
    pub summary: RunSummary,
}

impl AnalysisOutput {
    /// Write `<id>_constants.csv`, all witness files and `<id>_summary.json`
    /// into `dir`. Returns the CSV path.
    pub fn write(&self, dir: &Path) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let mut csv = String::from("basis_id,m,quantity,value,value_exact,flag,witness_file\n");
        let mut witnesses: Vec<(PathBuf, WitnessFile)> = Vec::new();
        let mut push_rows = |rows: &[ConstantEntry], quantity: &str, csv: &mut String| {
            for e in rows {
                let wf_name = e.certificate.as_ref().map(|c| {
                    let name = format!(
                        "witness_{}_{}_{}.json",
                        sanitize(&self.basis_id),
                        quantity,
                        e.m
                    );
                    witnesses.push((dir.join(&name), WitnessFile::new(&self.basis_id, quantity, c)));
                    name
                });
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    self.basis_id,
                    e.m,
                    quantity,
                    e.value.to_f64(),
                    e.value.as_exact().map(format_rat).unwrap_or_default(),
                    e.flag,
                    wf_name.unwrap_or_default()
                ));
            }
        };
        push_rows(&self.k_rows, "k", &mut csv);
        push_rows(&self.l_rows, "L", &mut csv);
        if let Some(g) = &self.gamma {
            let name = format!("witness_{}_Gamma.json", sanitize(&self.basis_id));
            let cert_like = WitnessFile {
                basis_id: self.basis_id.clone(),
                quantity: "Gamma".into(),
                m: g.witness_m,
                f: g
                    .witness_f
                    .coeffs()
                    .iter()
                    .map(|c| match c.as_exact() {
                        Some(r) => format_rat(r),
                        None => c.to_f64().to_string(),
                    })
                    .collect(),
                set: vec![],
                norm_f: ScalarRepr {
                    decimal: 1.0,
                    exact: None,
                },
                norm_projection: (&g.lower_bound).into(),
                bound: (&g.lower_bound).into(),
            };
            witnesses.push((dir.join(&name), cert_like));
            csv.push_str(&format!(
                "{},{},Gamma,{},{},{},{}\n",
                self.basis_id,
                g.witness_m,
                g.lower_bound.to_f64(),
                g.lower_bound.as_exact().map(format_rat).unwrap_or_default(),
                g.certification,
                name
            ));
        }
        let csv_path = dir.join(format!("{}_constants.csv", sanitize(&self.basis_id)));
        std::fs::write(&csv_path, csv)?;
        for (path, wf) in witnesses {
            std::fs::write(path, serde_json::to_string_pretty(&wf)? + "\n")?;
        }
        let summary_path = dir.join(format!("{}_summary.json", sanitize(&self.basis_id)));
        std::fs::write(
            &summary_path,
            serde_json::to_string_pretty(&self.summary)? + "\n",
        )?;
        Ok(csv_path)
    }
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn scalar_repr_carries_exact_form() {
        let s = Scalar::Exact(rat(3, 4));
        let r: ScalarRepr = (&s).into();
        assert_eq!(r.decimal, 0.75);
        assert_eq!(r.exact.as_deref(), Some("3/4"));
        let f = Scalar::Float(0.5);
        let r: ScalarRepr = (&f).into();
        assert!(r.exact.is_none());
    }
}

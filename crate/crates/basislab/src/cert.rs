//! Certification levels attached to every reported constant.

use serde::{Deserialize, Serialize};

/// How a reported value is backed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    /// Exhaustive enumeration or a closed form: the value is the constant.
    CertifiedExact,
    /// A concrete witness was evaluated: the value is a proven lower bound.
    WitnessLowerBound,
    /// Random search: a lower bound with no structure behind it.
    HeuristicLowerBound,
}

impl Certification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Certification::CertifiedExact => "certified-exact",
            Certification::WitnessLowerBound => "witness-lower-bound",
            Certification::HeuristicLowerBound => "heuristic-lower-bound",
        }
    }
}

impl std::fmt::Display for Certification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

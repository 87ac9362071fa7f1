//! JSON shapes of the command outputs. Rationals travel as `"p/q"` strings.

use linrank_core::arith::{QVector, Rational};
use linrank_core::constraints::{ConstraintSystem, LinConstraint, Relation};
use linrank_core::equivalence::CrossReport;
use linrank_core::ms::{RankingFunction, RankingSpace};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingFunctionJson {
    pub mu0: String,
    pub mu: Vec<String>,
    pub delta: String,
}

impl From<&RankingFunction> for RankingFunctionJson {
    fn from(f: &RankingFunction) -> Self {
        RankingFunctionJson {
            mu0: f.mu0.to_string(),
            mu: f.mu.iter().map(ToString::to_string).collect(),
            delta: f.delta.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub coeffs: Vec<String>,
    pub rel: String,
    #[serde(rename = "const")]
    pub constant: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub params: Vec<String>,
    pub constraints: Vec<ConstraintJson>,
}

impl From<&ConstraintSystem> for SpaceJson {
    fn from(c: &ConstraintSystem) -> Self {
        SpaceJson {
            params: c.vars().to_vec(),
            constraints: c
                .rows()
                .iter()
                .map(|r| ConstraintJson {
                    coeffs: r.coeffs.iter().map(ToString::to_string).collect(),
                    rel: r.rel.symbol().to_string(),
                    constant: r.rhs.to_string(),
                })
                .collect(),
        }
    }
}

impl From<&RankingSpace> for SpaceJson {
    fn from(s: &RankingSpace) -> Self {
        SpaceJson::from(&s.system)
    }
}

fn relation(s: &str) -> Option<Relation> {
    [Relation::Le, Relation::Lt, Relation::Eq, Relation::Ge, Relation::Gt]
        .into_iter()
        .find(|r| r.symbol() == s)
}

impl SpaceJson {
    /// Reads the space back into an exact system.
    pub fn to_system(&self) -> Result<ConstraintSystem, String> {
        let mut c = ConstraintSystem::new(self.params.clone());
        for (i, r) in self.constraints.iter().enumerate() {
            let coeffs = r
                .coeffs
                .iter()
                .map(|v| v.parse::<Rational>().map_err(|e| format!("constraint {i}: {e}")))
                .collect::<Result<Vec<_>, _>>()?;
            let rel = relation(&r.rel).ok_or_else(|| format!("constraint {i}: unknown relation `{}`", r.rel))?;
            let rhs = r.constant.parse::<Rational>().map_err(|e| format!("constraint {i}: {e}"))?;
            c.push(LinConstraint::new(QVector::new(coeffs), rel, rhs)).map_err(|e| format!("constraint {i}: {e}"))?;
        }
        Ok(c)
    }
}

/// Output of `check`, `rank` and `space`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub status: String,
    pub method: String,
    pub ranking_function: Option<RankingFunctionJson>,
    pub space: Option<SpaceJson>,
    /// Decreasing and bounded spaces of `space --conditional`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditional: Option<ConditionalJson>,
    /// Per-engine reports when several engines ran.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub engines: Vec<Report>,
}

impl Report {
    pub fn new(status: &str, method: &str) -> Self {
        Report {
            status: status.to_string(),
            method: method.to_string(),
            ranking_function: None,
            space: None,
            conditional: None,
            engines: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalJson {
    pub decreasing: SpaceJson,
    pub bounded: SpaceJson,
}

/// Output of `compare`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareJson {
    pub status: String,
    pub ms: String,
    pub pr: String,
    pub agree: bool,
    pub ms_witness_in_pr: Option<bool>,
    pub pr_witness_in_ms: Option<bool>,
    pub spaces: String,
    pub ms_function: Option<RankingFunctionJson>,
    pub pr_function: Option<RankingFunctionJson>,
    pub problems: Vec<String>,
}

impl From<&CrossReport> for CompareJson {
    fn from(r: &CrossReport) -> Self {
        CompareJson {
            status: if r.consistent() { "consistent" } else { "inconsistent" }.to_string(),
            ms: r.ms.name().to_string(),
            pr: r.pr.name().to_string(),
            agree: r.agree,
            ms_witness_in_pr: r.ms_witness_in_pr,
            pr_witness_in_ms: r.pr_witness_in_ms,
            spaces: r.spaces.name().to_string(),
            ms_function: r.ms.witness().map(Into::into),
            pr_function: r.pr.witness().map(Into::into),
            problems: r.problems(),
        }
    }
}

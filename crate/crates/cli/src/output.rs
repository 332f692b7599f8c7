//! JSON document shapes emitted by the commands.

use serde::Serialize;

use revpref::report::{ExactNumber, IndexReport, SpearmanMatrix, SCHEMA_VERSION};
use revpref::robust::{Threshold, Verdict};
use revpref::{Bundle, CycleWitness, Rational};

pub fn exact(v: &Rational) -> ExactNumber {
    ExactNumber::from(v)
}

pub fn bundle(b: &Bundle) -> Vec<ExactNumber> {
    b.as_slice().iter().map(exact).collect()
}

#[derive(Serialize)]
pub struct Witness {
    /// Observation numbers, 1-based, in cycle order.
    pub cycle: Vec<usize>,
    pub strict: Vec<bool>,
}

impl From<&CycleWitness> for Witness {
    fn from(w: &CycleWitness) -> Self {
        Witness {
            cycle: w.nodes.iter().map(|t| t + 1).collect(),
            strict: w.strict_flags.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct CheckOutput {
    pub schema: &'static str,
    pub command: &'static str,
    pub test: String,
    pub dataset: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub efficiency: Option<ExactNumber>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<Vec<ExactNumber>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle_class: Option<revpref::CycleClass>,
    pub witness: Option<Witness>,
}

#[derive(Serialize)]
pub struct IndexOutput {
    pub schema: &'static str,
    pub command: &'static str,
    #[serde(flatten)]
    pub report: IndexReport,
}

#[derive(Serialize)]
pub struct RobustOutput {
    pub schema: &'static str,
    pub command: &'static str,
    pub dataset: String,
    pub loss: &'static str,
    pub a: Vec<ExactNumber>,
    pub b: Vec<ExactNumber>,
    pub forward: bool,
    pub backward: bool,
    pub verdict: Verdict,
}

#[derive(Serialize)]
pub struct ThresholdOutput {
    pub over_cap: bool,
    pub value: Option<ExactNumber>,
}

impl From<&Threshold> for ThresholdOutput {
    fn from(t: &Threshold) -> Self {
        ThresholdOutput {
            over_cap: t.value().is_none(),
            value: t.value().map(exact),
        }
    }
}

#[derive(Serialize)]
pub struct CompensateOutput {
    pub schema: &'static str,
    pub command: &'static str,
    pub dataset: String,
    pub loss: &'static str,
    pub good: usize,
    pub reduction: ExactNumber,
    pub cap: ExactNumber,
    pub median_bundle: Vec<ExactNumber>,
    pub k_w: ThresholdOutput,
    pub k_s: ThresholdOutput,
}

#[derive(Serialize)]
pub struct PanelEntry {
    pub file: String,
    pub report: Option<IndexReport>,
    pub error: Option<String>,
}

#[derive(Serialize)]
pub struct PanelOutput {
    pub schema: &'static str,
    pub command: &'static str,
    pub directory: String,
    pub files: Vec<PanelEntry>,
    pub spearman: SpearmanMatrix,
}

pub const SCHEMA: &str = SCHEMA_VERSION;

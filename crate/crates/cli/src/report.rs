//! JSON documents printed with `--json`.
//!
//! Every expression is a string in the input grammar, so it parses back with
//! the model's context.

use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub label: String,
    pub status: String,
    pub fluxes: Vec<String>,
    pub residual: String,
    /// False when the outcome differs from what the status predicts.
    pub ok: bool,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub model: String,
    pub laws: Vec<LawReport>,
    pub ok: bool,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct MultiplierReport {
    pub model: String,
    pub order: usize,
    pub degree: u32,
    pub equations: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub multipliers: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct MixedLaw {
    pub psi: Vec<String>,
    pub h: Vec<String>,
    pub h_is_zero: bool,
    pub fluxes: Vec<String>,
    pub residual: String,
    /// Potential whose curl was removed from the raw vector; `"0"` if none.
    pub trivial_witness: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct MixedReport {
    pub model: String,
    pub generator: String,
    pub equations: usize,
    pub unknowns: usize,
    pub solution_dim: usize,
    pub trivial_dim: usize,
    pub laws: Vec<MixedLaw>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct ModelSummary {
    pub name: String,
    pub indep: Vec<String>,
    pub dep: Vec<String>,
    pub equations: Vec<String>,
    pub generators: Vec<String>,
    pub laws: usize,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct OperatorReport {
    pub model: String,
    pub input: String,
    /// One entry per dependent variable for `euler`, a single entry otherwise.
    pub result: Vec<String>,
}

//! On-disk (JSON) form of a presentation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// `[coefficient, {generator: exponent}]`.
pub type TermFile = (i64, BTreeMap<String, u32>);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeneratorFile {
    pub name: String,
    pub degree: [i64; 3],
    pub torsion: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u32>,
    /// Plain-text symbol used when printing; defaults to the name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unicode: Option<String>,
    /// Printed exponent is `scale * exponent` (so `tau2^3` prints as `tau^6`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RuleFile {
    pub lhs: BTreeMap<String, u32>,
    pub rhs: Vec<TermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PresentationFile {
    pub name: String,
    pub generators: Vec<GeneratorFile>,
    #[serde(default)]
    pub rules: Vec<RuleFile>,
    /// `"eta"` for presentations graded by `(coweight, f - s)` with `h1` inverted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<String>,
    #[serde(default, rename = "globalTorsion", skip_serializing_if = "Option::is_none")]
    pub global_torsion: Option<u64>,
    #[serde(default)]
    pub differentials: BTreeMap<String, BTreeMap<String, Vec<TermFile>>>,
    #[serde(default)]
    pub psi3: BTreeMap<String, Vec<TermFile>>,
    #[serde(default, rename = "etaImage")]
    pub eta_image: BTreeMap<String, Vec<TermFile>>,
    #[serde(default, rename = "differentialFamilies", skip_serializing_if = "Vec::is_empty")]
    pub differential_families: Vec<DifferentialFamilyFile>,
    #[serde(default, rename = "etaTarget", skip_serializing_if = "Option::is_none")]
    pub eta_target: Option<String>,
}

/// An infinite family `d_{page(n)}(g^(2^log2(n))) = factor(n) * g^(2^log2(n))`
/// for `n >= minN`, with every exponent an affine function `a*n + b`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DifferentialFamilyFile {
    pub generator: String,
    #[serde(rename = "minN")]
    pub min_n: u32,
    #[serde(rename = "page")]
    pub page: [i64; 2],
    #[serde(rename = "sourceLog2")]
    pub source_log2: [i64; 2],
    pub factor: BTreeMap<String, [i64; 2]>,
}

//! Command-line arguments, optionally backed by a TOML file. A flag given on
//! the command line wins over the same key in the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "fwc", version, about = "Few-weight linear codes from function pairs")]
pub struct Cli {
    /// TOML file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Enumeration budget in codewords (also FWC_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a family's generator matrix and a JSON sidecar.
    Build(BuildArgs),
    /// Weight distribution, bounds and derived codes of a matrix.
    Analyze(AnalyzeArgs),
    /// Run verification sections and write the JSON ledger.
    Verify(VerifyArgs),
    /// Check every character-sum oracle on its grid.
    #[command(alias = "verify-lemmas")]
    Lemmas(LemmaArgs),
    /// Extract, verify and export a support design.
    Designs(DesignArgs),
}

/// Top-level TOML layout: global keys plus one table per subcommand.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub threads: Option<usize>,
    pub budget: Option<u64>,
    #[serde(default)]
    pub build: BuildArgs,
    #[serde(default)]
    pub analyze: AnalyzeArgs,
    #[serde(default)]
    pub verify: VerifyArgs,
    #[serde(default)]
    pub lemmas: LemmaArgs,
    #[serde(default)]
    pub designs: DesignArgs,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Fill every unset field of `$a` from `$b`; booleans are or-ed.
macro_rules! merge {
    ($a:ident, $b:ident; opt: $($o:ident),*; flag: $($f:ident),*) => {{
        $( if $a.$o.is_none() { $a.$o = $b.$o.take(); } )*
        $( $a.$f |= $b.$f; )*
    }};
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct FamilyArgs {
    /// Family F1..F6.
    #[arg(long)]
    pub family: Option<String>,
    /// Field order of the base field.
    #[arg(long)]
    pub q: Option<u32>,
    /// Extension degree.
    #[arg(long)]
    pub m: Option<u32>,
    /// First function as JSON, e.g. '{"kind":"Trace"}'.
    #[arg(long)]
    pub f: Option<String>,
    /// Second function as JSON.
    #[arg(long)]
    pub g: Option<String>,
    /// Family spec file (JSON or TOML) instead of the flags above.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

impl FamilyArgs {
    fn merge(&mut self, mut o: FamilyArgs) {
        merge!(self, o; opt: family, q, m, f, g, spec; flag:);
    }
    pub fn is_set(&self) -> bool {
        self.family.is_some() || self.spec.is_some()
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct BuildArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// base, subfield or punctured.
    #[arg(long)]
    pub kind: Option<String>,
    /// Matrix output path; the sidecar goes to the same path plus `.json`.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct AnalyzeArgs {
    /// Matrix file in the text format written by `build`.
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// With family flags: base, subfield or punctured.
    #[arg(long)]
    pub kind: Option<String>,
    /// Replace the code by its subfield code over the tower's middle field.
    #[arg(long)]
    #[serde(default)]
    pub subfield: bool,
    /// Puncture on the given coordinate (0 if no value).
    #[arg(long, num_args = 0..=1, default_missing_value = "0")]
    pub puncture: Option<usize>,
    /// Also report the dual distribution via the MacWilliams transform.
    #[arg(long)]
    #[serde(default)]
    pub dual_via_macwilliams: bool,
    /// Test Hermitian self-orthogonality (square field order only).
    #[arg(long)]
    #[serde(default)]
    pub hermitian: bool,
    /// Output prefix: writes PREFIX.json and PREFIX.csv. Without it the JSON
    /// report goes to stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// Character-sum oracles.
    #[arg(long)]
    #[serde(default)]
    pub lemmas: bool,
    /// The default family grid.
    #[arg(long)]
    #[serde(default)]
    pub families: bool,
    /// Worked-example parameters and optimality.
    #[arg(long)]
    #[serde(default)]
    pub examples: bool,
    /// Design claims.
    #[arg(long)]
    #[serde(default)]
    pub designs: bool,
    /// Every section.
    #[arg(long)]
    #[serde(default)]
    pub all: bool,
    /// Ledger path (default fwc-ledger.json).
    #[arg(long)]
    pub ledger: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaArgs {
    /// Largest q for single-field oracles.
    #[arg(long)]
    pub max_q: Option<u32>,
    /// Largest q for tower oracles.
    #[arg(long)]
    pub max_q_tower: Option<u32>,
    /// Largest m for tower oracles.
    #[arg(long)]
    pub max_m: Option<u32>,
    /// Write the JSON here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
pub struct DesignArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// base, subfield or punctured (default base).
    #[arg(long)]
    pub kind: Option<String>,
    /// Codeword weight whose supports form the blocks.
    #[arg(long)]
    pub weight: Option<usize>,
    /// Design strength.
    #[arg(long)]
    pub t: Option<usize>,
    /// Take the weight class of the dual code.
    #[arg(long)]
    #[serde(default)]
    pub dual: bool,
    /// Export the complementary design.
    #[arg(long)]
    #[serde(default)]
    pub complement: bool,
    /// json or text.
    #[arg(long)]
    pub format: Option<String>,
    /// Run every design claim instead of one export.
    #[arg(long)]
    #[serde(default)]
    pub theorems: bool,
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl BuildArgs {
    pub fn merge(&mut self, mut o: BuildArgs) {
        self.family.merge(std::mem::take(&mut o.family));
        merge!(self, o; opt: kind, out; flag:);
    }
}

impl AnalyzeArgs {
    pub fn merge(&mut self, mut o: AnalyzeArgs) {
        self.family.merge(std::mem::take(&mut o.family));
        merge!(self, o; opt: matrix, kind, puncture, out; flag: subfield, dual_via_macwilliams, hermitian);
    }
}

impl VerifyArgs {
    pub fn merge(&mut self, mut o: VerifyArgs) {
        self.family.merge(std::mem::take(&mut o.family));
        merge!(self, o; opt: ledger; flag: lemmas, families, examples, designs, all);
    }
}

impl LemmaArgs {
    pub fn merge(&mut self, mut o: LemmaArgs) {
        merge!(self, o; opt: max_q, max_q_tower, max_m, out; flag:);
    }
}

impl DesignArgs {
    pub fn merge(&mut self, mut o: DesignArgs) {
        self.family.merge(std::mem::take(&mut o.family));
        merge!(self, o; opt: kind, weight, t, format, out; flag: dual, complement, theorems);
    }
}

//! Verification campaigns: a JSON configuration naming an algebra and a list
//! of checks, run in parallel and written out as one report per check plus a
//! summary.
//!
//! Output layout in the target directory:
//!
//! * `NN-<check>.json`: one [`Report`] per configured check, in config order;
//! * `summary.json`: verdict per tag, overall verdict and exit code;
//! * `timings.json`: wall times, the only file that varies between runs.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use super::{
    check_branching, check_character_branching, check_crystal_axioms, check_ls_window, check_minuscule_decomposition,
    check_norm_bound, check_sigma_properties, check_straightening, check_tensor_rule, random_nonnull_word, Report,
    Shape, Verdict,
};
use crate::explorer::{ExploreLimits, WeightWindow, DEFAULT_DEPTH, DEFAULT_NODE_CAP};
use crate::operators::{Fault, OpWord, RootOperators};
use crate::path::Path;
use crate::rational::q;
use crate::rootsys::{AffineData, AlgebraSpec};

/// Configuration `a1-smoke`: norm bound, branching and the minuscule
/// decomposition on the affine `A_1` datum.
pub const A1_SMOKE: &str = include_str!("a1_smoke.json");

pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "a1-smoke" => Some(A1_SMOKE),
        _ => None,
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad configuration: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("bad configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] crate::error::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSource {
    Inline(AlgebraSpec),
    File { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_node_cap")]
    pub node_cap: usize,
    #[serde(default = "default_denom")]
    pub denom_bound: i64,
    #[serde(default = "default_m_max")]
    pub m_max: u32,
}

fn default_depth() -> usize {
    DEFAULT_DEPTH
}
fn default_node_cap() -> usize {
    DEFAULT_NODE_CAP
}
fn default_denom() -> i64 {
    12
}
fn default_m_max() -> u32 {
    64
}

impl Default for Caps {
    fn default() -> Self {
        Self { depth: default_depth(), node_cap: default_node_cap(), denom_bound: default_denom(), m_max: default_m_max() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormBoundParams {
    pub i: usize,
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchingParams {
    pub i: usize,
    pub s: Vec<usize>,
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterParams {
    pub i: usize,
    pub s: Vec<usize>,
    /// Window `|δ-coefficient| ≤ delta_bound`.
    pub delta_bound: i64,
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionParams {
    pub lambda: Shape,
    pub i: usize,
    pub depth: Option<usize>,
    #[serde(default = "default_orbit_bound")]
    pub orbit_bound: i64,
}

fn default_orbit_bound() -> i64 {
    2
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaParams {
    pub shape: Shape,
    pub m: u32,
    pub sample_size: usize,
    #[serde(default)]
    pub seed: u64,
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomWords {
    pub count: usize,
    pub max_length: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StraighteningParams {
    pub shape: Shape,
    #[serde(default)]
    pub words: Vec<OpWord>,
    pub random: Option<RandomWords>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorParams {
    pub first: Shape,
    pub second: Shape,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomParams {
    pub shape: Shape,
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LsWindowParams {
    pub i: usize,
    pub orbit_bound: i64,
    pub depth: Option<usize>,
}

/// One configured check. Unknown names fail at parse time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    NormBound(NormBoundParams),
    Branching(BranchingParams),
    CharacterBranching(CharacterParams),
    MinusculeDecomposition(DecompositionParams),
    SigmaProperties(SigmaParams),
    Straightening(StraighteningParams),
    TensorRule(TensorParams),
    CrystalAxioms(AxiomParams),
    LsWindow(LsWindowParams),
}

impl CheckSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CheckSpec::NormBound(_) => "norm_bound",
            CheckSpec::Branching(_) => "branching",
            CheckSpec::CharacterBranching(_) => "character_branching",
            CheckSpec::MinusculeDecomposition(_) => "minuscule_decomposition",
            CheckSpec::SigmaProperties(_) => "sigma_properties",
            CheckSpec::Straightening(_) => "straightening",
            CheckSpec::TensorRule(_) => "tensor_rule",
            CheckSpec::CrystalAxioms(_) => "crystal_axioms",
            CheckSpec::LsWindow(_) => "ls_window",
        }
    }

    fn depth(&self) -> Option<usize> {
        match self {
            CheckSpec::NormBound(p) => p.depth,
            CheckSpec::Branching(p) => p.depth,
            CheckSpec::CharacterBranching(p) => p.depth,
            CheckSpec::MinusculeDecomposition(p) => p.depth,
            CheckSpec::SigmaProperties(p) => p.depth,
            CheckSpec::Straightening(_) => None,
            CheckSpec::TensorRule(p) => p.depth,
            CheckSpec::CrystalAxioms(p) => p.depth,
            CheckSpec::LsWindow(p) => p.depth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub algebra: AlgebraSource,
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub caps: Caps,
    /// Default output directory, overridable on the command line.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Test hook: run every check with a corrupted operator.
    #[serde(default)]
    pub fault: Option<Fault>,
}

impl CampaignConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &FsPath) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        let mut cfg = Self::parse(&text)?;
        if let AlgebraSource::File { file } = &mut cfg.algebra {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let c = &self.caps;
        if c.depth == 0 || c.node_cap == 0 || c.denom_bound <= 0 || c.m_max == 0 {
            return Err(ConfigError::Invalid("all caps must be positive".into()));
        }
        if self.checks.is_empty() {
            return Err(ConfigError::Invalid("no checks listed".into()));
        }
        for check in &self.checks {
            if check.depth().is_some_and(|d| d > c.depth) {
                return Err(ConfigError::Invalid(format!("{}: depth exceeds the depth cap {}", check.name(), c.depth)));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> Result<AffineData, ConfigError> {
        let spec = match &self.algebra {
            AlgebraSource::Inline(spec) => spec.clone(),
            AlgebraSource::File { file } => {
                let text = fs::read_to_string(file)
                    .map_err(|source| ConfigError::Io { path: file.display().to_string(), source })?;
                serde_json::from_str(&text)?
            }
        };
        Ok(spec.build()?)
    }
}

#[derive(Debug, Clone)]
pub struct CampaignOutcome {
    /// `(tag, report)` in configuration order.
    pub reports: Vec<(String, Report)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryEntry {
    pub tag: String,
    pub claim: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub verdict: Verdict,
    pub exit_code: i32,
    pub reports: Vec<SummaryEntry>,
}

impl CampaignOutcome {
    /// Worst verdict: any counterexample, else any truncation, else verified.
    pub fn verdict(&self) -> Verdict {
        self.reports.iter().map(|(_, r)| r.verdict).max().unwrap_or(Verdict::VerifiedOnWindow)
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict().exit_code()
    }

    pub fn summary(&self) -> Summary {
        Summary {
            verdict: self.verdict(),
            exit_code: self.exit_code(),
            reports: self
                .reports
                .iter()
                .map(|(tag, r)| SummaryEntry { tag: tag.clone(), claim: r.claim.clone(), verdict: r.verdict })
                .collect(),
        }
    }

    /// Writes the report files, the summary and the timing sidecar.
    pub fn write(&self, dir: &FsPath) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let mut timings = serde_json::Map::new();
        for (tag, r) in &self.reports {
            fs::write(dir.join(format!("{tag}.json")), r.to_json())?;
            timings.insert(tag.clone(), json!(r.timing_ms));
        }
        let summary = serde_json::to_string_pretty(&self.summary()).expect("summary serializes") + "\n";
        fs::write(dir.join("summary.json"), summary)?;
        let timings = serde_json::to_string_pretty(&timings).expect("timings serialize") + "\n";
        fs::write(dir.join("timings.json"), timings)
    }
}

/// Runs every check of the campaign; checks run in parallel and are merged
/// in configuration order. Precondition failures in a check are
/// configuration errors.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignOutcome, ConfigError> {
    let data = cfg.algebra()?;
    let ops = RootOperators::with_fault(&data, cfg.fault);
    let results: Vec<Result<(String, Report), ConfigError>> = cfg
        .checks
        .par_iter()
        .enumerate()
        .map(|(k, check)| {
            let tag = format!("{:02}-{}", k + 1, check.name());
            let clock = Instant::now();
            let mut report = run_check(&ops, check, &cfg.caps)
                .map_err(|e| ConfigError::Invalid(format!("{tag}: {e}")))?;
            report.timing_ms = Some(clock.elapsed().as_secs_f64() * 1e3);
            Ok((tag, report))
        })
        .collect();
    Ok(CampaignOutcome { reports: results.into_iter().collect::<Result<_, _>>()? })
}

pub fn run_check(ops: &RootOperators<'_>, check: &CheckSpec, caps: &Caps) -> crate::error::Result<Report> {
    let data = ops.data();
    let limits = |depth: Option<usize>| ExploreLimits { depth: depth.unwrap_or(caps.depth), node_cap: caps.node_cap };
    match check {
        CheckSpec::NormBound(p) => check_norm_bound(ops, p.i, limits(p.depth)),
        CheckSpec::Branching(p) => check_branching(ops, p.i, &p.s, limits(p.depth)),
        CheckSpec::CharacterBranching(p) => {
            let window = WeightWindow::DeltaRange { min: q(-p.delta_bound), max: q(p.delta_bound) };
            check_character_branching(ops, p.i, &p.s, &window, limits(p.depth))
        }
        CheckSpec::MinusculeDecomposition(p) => {
            check_minuscule_decomposition(ops, &p.lambda.weight(data)?, p.i, limits(p.depth), p.orbit_bound)
        }
        CheckSpec::SigmaProperties(p) => {
            check_sigma_properties(ops, &p.shape.weight(data)?, p.m, p.sample_size, p.seed, limits(p.depth))
        }
        CheckSpec::Straightening(p) => {
            let lambda = p.shape.weight(data)?;
            let mut words = p.words.clone();
            if let Some(rw) = &p.random {
                let mut rng = ChaCha8Rng::seed_from_u64(rw.seed);
                let start = Path::straight(lambda.clone());
                for _ in 0..rw.count {
                    let len = rand::Rng::gen_range(&mut rng, 0..=rw.max_length);
                    words.push(random_nonnull_word(ops, &start, len, &mut rng)?);
                }
            }
            check_straightening(ops, &lambda, &words, caps.m_max)
        }
        CheckSpec::TensorRule(p) => {
            check_tensor_rule(ops, &p.first.weight(data)?, &p.second.weight(data)?, p.trials, p.seed, limits(p.depth))
        }
        CheckSpec::CrystalAxioms(p) => check_crystal_axioms(ops, &p.shape.weight(data)?, p.samples, p.seed, limits(p.depth)),
        CheckSpec::LsWindow(p) => check_ls_window(ops, p.i, p.orbit_bound, caps.denom_bound, limits(p.depth)),
    }
}

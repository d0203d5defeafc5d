//! Campaign runner behind the `symnet` binary.
//!
//! A campaign fixes a ring `Z/m`, a unitary relation on the index set and a
//! list of suites. Every trial is reproducible from its own seed, and trial
//! seeds are drawn from a SplitMix64 stream keyed by the campaign seed and the
//! suite, so a counterexample can be replayed without rerunning the campaign.

pub mod inputs;
mod suites;

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use symnet_core::formats::{GammaSeedDto, LevelSeedDto, SigmaSeedDto, WordEntryDto};
use symnet_core::subgroups::word_rng;
use symnet_core::{closure_from_levels, EquivRel, FormNet, IndexSet, LevelSeed, ModRing};

use suites::{run_trial, Trial};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: line {line}, column {column}: {message}")]
    Json { path: String, line: usize, column: usize, message: String },
    #[error("{path}: {source}")]
    Invalid { path: String, source: symnet_core::Error },
    #[error("config field `{field}`: {message}")]
    Config { field: &'static str, message: String },
    #[error("suite {suite}: {source}")]
    Suite { suite: &'static str, source: symnet_core::Error },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Steinberg,
    LengthIdentity,
    GroupClosure,
    Transporter,
    Sandwich,
    Extraction,
    Jacobson,
    Crt,
}

impl SuiteName {
    pub const ALL: [SuiteName; 8] = [
        SuiteName::Steinberg,
        SuiteName::LengthIdentity,
        SuiteName::GroupClosure,
        SuiteName::Transporter,
        SuiteName::Sandwich,
        SuiteName::Extraction,
        SuiteName::Jacobson,
        SuiteName::Crt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteName::Steinberg => "steinberg",
            SuiteName::LengthIdentity => "length-identity",
            SuiteName::GroupClosure => "group-closure",
            SuiteName::Transporter => "transporter",
            SuiteName::Sandwich => "sandwich",
            SuiteName::Extraction => "extraction",
            SuiteName::Jacobson => "jacobson",
            SuiteName::Crt => "crt",
        }
    }

    fn salt(self) -> u64 {
        let k = SuiteName::ALL.iter().position(|&s| s == self).unwrap() as u64 + 1;
        k.wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }
}

/// Extra levels forced into the closure, over the campaign ring.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtraLevels {
    #[serde(default)]
    pub sigma: Vec<SigmaSeedDto>,
    #[serde(default)]
    pub gamma: Vec<GammaSeedDto>,
}

fn default_trials() -> usize {
    1000
}

fn default_max_len() -> usize {
    30
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub m: u64,
    pub n: usize,
    /// Classes of the relation; one class by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<Vec<i32>>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_max_len")]
    pub max_word_length: usize,
    /// All suites when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<SuiteName>>,
    #[serde(default)]
    pub extra: ExtraLevels,
    /// Run the sandwich suite against a net with one level shrunk.
    #[serde(default)]
    pub mutate: bool,
}

impl CampaignConfig {
    pub fn new(m: u64, n: usize) -> Self {
        CampaignConfig {
            m,
            n,
            nu: None,
            seed: 0,
            trials: default_trials(),
            max_word_length: default_max_len(),
            suites: None,
            extra: ExtraLevels::default(),
            mutate: false,
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        inputs::parse_json(text, origin)
    }

    pub fn validate(&self) -> Result<Campaign, CliError> {
        let ring = ModRing::new(self.m).map_err(|e| CliError::Config { field: "m", message: e.to_string() })?;
        let index_set = IndexSet::new(self.n).map_err(|e| CliError::Config { field: "n", message: e.to_string() })?;
        if self.trials == 0 {
            return Err(CliError::Config { field: "trials", message: "must be at least 1".into() });
        }
        let nu = match &self.nu {
            None => EquivRel::full(index_set),
            Some(classes) => EquivRel::new(index_set, classes)
                .map_err(|e| CliError::Config { field: "nu", message: e.to_string() })?,
        };
        let dto = LevelSeedDto { m: self.m, sigma: self.extra.sigma.clone(), gamma: self.extra.gamma.clone() };
        let (_, extra) = dto
            .to_seed(index_set)
            .map_err(|e| CliError::Config { field: "extra", message: e.to_string() })?;
        let net = closure_from_levels(&nu, &extra, ring)
            .map_err(|e| CliError::Config { field: "extra", message: e.to_string() })?;
        Ok(Campaign {
            ring,
            index_set,
            nu,
            extra,
            net,
            seed: self.seed,
            trials: self.trials,
            max_word_length: self.max_word_length,
            suites: self.suites.clone().unwrap_or_else(|| SuiteName::ALL.to_vec()),
            mutate: self.mutate,
        })
    }
}

/// A validated campaign.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub ring: ModRing,
    pub index_set: IndexSet,
    pub nu: EquivRel,
    pub extra: LevelSeed,
    /// Closure of `extra` over the relation net.
    pub net: FormNet,
    pub seed: u64,
    pub trials: usize,
    pub max_word_length: usize,
    pub suites: Vec<SuiteName>,
    pub mutate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    /// Trial seed; the trial is a function of it and the campaign alone.
    pub seed: u64,
    pub word: Vec<WordEntryDto>,
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteResult {
    pub suite: SuiteName,
    pub passed: bool,
    pub cases: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

pub fn trial_seeds(campaign_seed: u64, suite: SuiteName) -> impl Iterator<Item = u64> {
    let mut master = word_rng(campaign_seed ^ suite.salt());
    std::iter::repeat_with(move || master.random())
}

pub fn run_suite(c: &Campaign, suite: SuiteName, timing: bool) -> Result<SuiteResult, CliError> {
    let start = Instant::now();
    let mut cases = 0;
    let mut counterexample = None;
    let mut noted = Vec::new();
    for seed in trial_seeds(c.seed, suite).take(c.trials) {
        cases += 1;
        match run_trial(suite, c, seed)? {
            Trial::Pass => {}
            Trial::PassWithNote(note) => noted.push(note),
            Trial::Fail(ce) => {
                counterexample = Some(ce);
                break;
            }
        }
    }
    let mut notes = Vec::new();
    if let Some(&first) = noted.first() {
        notes.push(format!("{} of {cases} cases: {first}", noted.len()));
    }
    Ok(SuiteResult {
        suite,
        passed: counterexample.is_none(),
        cases,
        counterexample,
        notes,
        elapsed_ms: timing.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Suites run on separate threads; results come back in the requested order.
pub fn run(c: &Campaign, timing: bool) -> Result<Vec<SuiteResult>, CliError> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = c.suites.iter().map(|&s| scope.spawn(move || run_suite(c, s, timing))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

/// Reruns the single trial behind a counterexample. True when it fails again
/// with the same word.
pub fn replay(c: &Campaign, suite: SuiteName, ce: &Counterexample) -> Result<bool, CliError> {
    Ok(match run_trial(suite, c, ce.seed)? {
        Trial::Fail(again) => again.word == ce.word,
        _ => false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit(results: &[SuiteResult], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(results).expect("results serialize") + "\n",
        Format::Text => {
            let mut out = String::new();
            for r in results {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                let _ = write!(out, "{} {verdict} cases={}", r.suite.name(), r.cases);
                if let Some(ms) = r.elapsed_ms {
                    let _ = write!(out, " elapsed_ms={ms}");
                }
                out.push('\n');
                if let Some(ce) = &r.counterexample {
                    let word: Vec<String> = ce.word.iter().map(|e| format!("T({},{};{})", e.i, e.j, e.xi)).collect();
                    let _ = writeln!(out, "  seed {}", ce.seed);
                    let _ = writeln!(out, "  word {}", if word.is_empty() { "-".into() } else { word.join(" ") });
                    let _ = writeln!(out, "  detail {}", ce.detail);
                }
                for note in &r.notes {
                    let _ = writeln!(out, "  note {note}");
                }
            }
            out
        }
    }
}

pub fn parse_results(text: &str, origin: &str) -> Result<Vec<SuiteResult>, CliError> {
    inputs::parse_json(text, origin)
}

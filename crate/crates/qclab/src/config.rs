//! Flat key=value configuration with command-line overrides.

use std::path::PathBuf;
use std::str::FromStr;

use generators::Family;
use signatures::AdversaryKind;

use crate::{HarnessError, Result};

/// The registered experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentName {
    QotpCheck,
    Hiding,
    Binding,
    UhlmannSweep,
    AqyExtract,
    ClassicalOpening,
    InteractiveCommit,
    Owsg,
    HaarBound,
    SignCorrectness,
    SignOnetime,
    SignReduction,
    Sdcid,
    SymMoment,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 14] = [
        ExperimentName::QotpCheck,
        ExperimentName::Hiding,
        ExperimentName::Binding,
        ExperimentName::UhlmannSweep,
        ExperimentName::AqyExtract,
        ExperimentName::ClassicalOpening,
        ExperimentName::InteractiveCommit,
        ExperimentName::Owsg,
        ExperimentName::HaarBound,
        ExperimentName::SignCorrectness,
        ExperimentName::SignOnetime,
        ExperimentName::SignReduction,
        ExperimentName::Sdcid,
        ExperimentName::SymMoment,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentName::QotpCheck => "qotp-check",
            ExperimentName::Hiding => "hiding",
            ExperimentName::Binding => "binding",
            ExperimentName::UhlmannSweep => "uhlmann-sweep",
            ExperimentName::AqyExtract => "aqy-extract",
            ExperimentName::ClassicalOpening => "classical-opening",
            ExperimentName::InteractiveCommit => "interactive-commit",
            ExperimentName::Owsg => "owsg",
            ExperimentName::HaarBound => "haar-bound",
            ExperimentName::SignCorrectness => "sign-correctness",
            ExperimentName::SignOnetime => "sign-onetime",
            ExperimentName::SignReduction => "sign-reduction",
            ExperimentName::Sdcid => "sdcid",
            ExperimentName::SymMoment => "sym-moment",
        }
    }

    /// Commitment and SDCID experiments need a strictly expanding generator.
    pub fn requires_expanding(&self) -> bool {
        matches!(
            self,
            ExperimentName::Hiding
                | ExperimentName::Binding
                | ExperimentName::UhlmannSweep
                | ExperimentName::AqyExtract
                | ExperimentName::ClassicalOpening
                | ExperimentName::InteractiveCommit
                | ExperimentName::Sdcid
        )
    }
}

impl FromStr for ExperimentName {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentName::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| HarnessError::UnknownExperiment(s.to_string()))
    }
}

impl std::fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(HarnessError::Config(format!(
                "format must be json or csv, got `{other}`"
            ))),
        }
    }
}

/// Unvalidated option bag: file values overlaid by flag values.
#[derive(Debug, Clone, Default)]
pub struct ConfigDraft {
    pub experiment: Option<String>,
    pub generator: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub t: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub adversary: Option<String>,
    pub threshold: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl ConfigDraft {
    /// Parse one flat key=value file. Blank lines and `#` comments are
    /// skipped; unknown keys and malformed values are errors carrying the
    /// line number.
    pub fn from_file(text: &str) -> Result<Self> {
        let mut draft = ConfigDraft::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {lineno}: expected key=value, got `{line}`"))
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_usize = |what: &str| -> Result<usize> {
                value.parse().map_err(|_| {
                    HarnessError::Config(format!("line {lineno}: {what} must be an integer, got `{value}`"))
                })
            };
            match key {
                "experiment" => draft.experiment = Some(value.to_string()),
                "generator" => draft.generator = Some(value.to_string()),
                "n" => draft.n = Some(parse_usize("n")?),
                "m" => draft.m = Some(parse_usize("m")?),
                "t" => draft.t = Some(parse_usize("t")?),
                "trials" => draft.trials = Some(parse_usize("trials")?),
                "seed" => {
                    draft.seed = Some(value.parse().map_err(|_| {
                        HarnessError::Config(format!(
                            "line {lineno}: seed must be a 64-bit unsigned integer, got `{value}`"
                        ))
                    })?)
                }
                "adversary" => draft.adversary = Some(value.to_string()),
                "threshold" => {
                    draft.threshold = Some(value.parse().map_err(|_| {
                        HarnessError::Config(format!(
                            "line {lineno}: threshold must be a number, got `{value}`"
                        ))
                    })?)
                }
                "out" => draft.out = Some(PathBuf::from(value)),
                "format" => draft.format = Some(value.to_string()),
                other => {
                    return Err(HarnessError::Config(format!(
                        "line {lineno}: unknown key `{other}`"
                    )))
                }
            }
        }
        Ok(draft)
    }

    /// Overlay: values present in `over` win.
    pub fn overlaid(self, over: ConfigDraft) -> ConfigDraft {
        ConfigDraft {
            experiment: over.experiment.or(self.experiment),
            generator: over.generator.or(self.generator),
            n: over.n.or(self.n),
            m: over.m.or(self.m),
            t: over.t.or(self.t),
            trials: over.trials.or(self.trials),
            seed: over.seed.or(self.seed),
            adversary: over.adversary.or(self.adversary),
            threshold: over.threshold.or(self.threshold),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }
}

/// A validated experiment configuration. Defaults: `t = 1`,
/// `trials = 1000`, `seed = 0`, `adversary = random-guess`,
/// `format = json`.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentName,
    pub generator: Family,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub trials: usize,
    pub seed: u64,
    pub adversary: AdversaryKind,
    pub threshold: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    /// Validate a merged draft into a runnable config.
    pub fn from_draft(draft: ConfigDraft) -> Result<Self> {
        let experiment: ExperimentName = draft
            .experiment
            .as_deref()
            .ok_or_else(|| HarnessError::Config("missing required key `experiment`".into()))?
            .parse()?;
        let generator: Family = draft
            .generator
            .as_deref()
            .ok_or_else(|| HarnessError::Config("missing required key `generator`".into()))?
            .parse()
            .map_err(|e| HarnessError::Config(format!("{e}")))?;
        let n = draft
            .n
            .ok_or_else(|| HarnessError::Config("missing required key `n`".into()))?;
        let m = draft
            .m
            .ok_or_else(|| HarnessError::Config("missing required key `m`".into()))?;
        let adversary: AdversaryKind = draft
            .adversary
            .as_deref()
            .unwrap_or("random-guess")
            .parse()
            .map_err(|e| HarnessError::Config(format!("{e}")))?;
        let config = Self {
            experiment,
            generator,
            n,
            m,
            t: draft.t.unwrap_or(1),
            trials: draft.trials.unwrap_or(1000),
            seed: draft.seed.unwrap_or(0),
            adversary,
            threshold: draft.threshold,
            out: draft.out,
            format: draft
                .format
                .as_deref()
                .map(str::parse)
                .transpose()?
                .unwrap_or_default(),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(HarnessError::Config("n must be at least 1".into()));
        }
        if self.trials < 1 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.experiment.requires_expanding() && self.m <= self.n {
            return Err(HarnessError::Config(format!(
                "experiment `{}` requires m > n (got n={}, m={})",
                self.experiment, self.n, self.m
            )));
        }
        Ok(())
    }

    pub(crate) fn generator_spec(&self) -> Result<generators::GeneratorSpec> {
        Ok(generators::GeneratorSpec::new(self.generator, self.n, self.m)?)
    }
}

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::abel::{RootBranch, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Check,
    Construct,
    Solve,
    Verify,
    Catalog,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Check => "check",
            CommandKind::Construct => "construct",
            CommandKind::Solve => "solve",
            CommandKind::Verify => "verify",
            CommandKind::Catalog => "catalog",
        }
    }
}

/// `plus` / `minus`, used both for the `c_k` root and the sign of `η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PlusMinus {
    Plus,
    Minus,
}

impl From<PlusMinus> for RootBranch {
    fn from(p: PlusMinus) -> RootBranch {
        match p {
            PlusMinus::Plus => RootBranch::Plus,
            PlusMinus::Minus => RootBranch::Minus,
        }
    }
}

impl From<PlusMinus> for Sign {
    fn from(p: PlusMinus) -> Sign {
        match p {
            PlusMinus::Plus => Sign::Plus,
            PlusMinus::Minus => Sign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// One job, as read from `--config` and/or assembled from flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct JobConfig {
    pub command: Option<CommandKind>,
    pub g: Option<String>,
    pub h: Option<String>,
    pub k: Option<f64>,
    pub c0: Option<f64>,
    pub c1: Option<f64>,
    pub ck_branch: Option<PlusMinus>,
    pub sign: Option<PlusMinus>,
    pub interval: Option<[f64; 2]>,
    pub grid_n: Option<usize>,
    pub catalog: Option<String>,
    pub params: Option<BTreeMap<String, f64>>,
    pub entry: Option<String>,
    pub zeta0: Option<f64>,
    pub u0: Option<f64>,
    pub span: Option<[f64; 2]>,
    pub step: Option<f64>,
    pub max_turning_points: Option<usize>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
}

macro_rules! fields {
    ($($f:ident => $name:literal),* $(,)?) => {
        impl JobConfig {
            /// `over` wins wherever it has a value.
            pub fn overlay(self, over: JobConfig) -> JobConfig {
                JobConfig { $($f: over.$f.or(self.$f)),* }
            }

            /// Names (as spelled in JSON) of the fields that are set.
            pub fn present(&self) -> Vec<&'static str> {
                let mut out = vec![];
                $(if self.$f.is_some() { out.push($name); })*
                out
            }
        }
    };
}

fields! {
    command => "command",
    g => "g",
    h => "h",
    k => "k",
    c0 => "c0",
    c1 => "c1",
    ck_branch => "ckBranch",
    sign => "sign",
    interval => "interval",
    grid_n => "gridN",
    catalog => "catalog",
    params => "params",
    entry => "entry",
    zeta0 => "zeta0",
    u0 => "u0",
    span => "span",
    step => "step",
    max_turning_points => "maxTurningPoints",
    output_format => "outputFormat",
    output_path => "outputPath",
}

const INVERSION: &[&str] = &["zeta0", "u0", "span", "step", "maxTurningPoints"];

impl JobConfig {
    pub fn load(path: &Path) -> Result<JobConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Reject fields the command does not use, and combinations that
    /// contradict each other.
    pub fn validate(&self) -> Result<CommandKind, CliError> {
        let cmd = self
            .command
            .ok_or_else(|| CliError::Usage("no command given (flag or `command` in config)".into()))?;
        let by_catalog = self.catalog.is_some();
        let mut allowed: Vec<&str> = vec!["command"];
        match cmd {
            CommandKind::Check => allowed.extend(["g", "h", "interval", "gridN"]),
            CommandKind::Construct => {
                allowed.extend(["g", "h", "k", "ckBranch", "interval"]);
                if self.g.is_some() {
                    allowed.push("c0");
                } else {
                    allowed.extend(["c1", "sign"]);
                }
            }
            CommandKind::Solve | CommandKind::Verify => {
                if by_catalog {
                    allowed.extend(["catalog", "params"]);
                } else {
                    allowed.extend(["g", "h", "ckBranch", "interval", "gridN"]);
                }
                allowed.extend(INVERSION);
                if cmd == CommandKind::Solve {
                    allowed.extend(["outputFormat", "outputPath"]);
                }
            }
            CommandKind::Catalog => allowed.extend(["entry", "outputFormat"]),
        }
        let extra: Vec<_> = self
            .present()
            .into_iter()
            .filter(|f| !allowed.contains(f))
            .collect();
        if !extra.is_empty() {
            let why = if by_catalog && matches!(cmd, CommandKind::Solve | CommandKind::Verify) {
                " with --catalog"
            } else {
                ""
            };
            return Err(CliError::Usage(format!(
                "`{}` does not accept {}{why}",
                cmd.name(),
                extra.join(", ")
            )));
        }
        match cmd {
            CommandKind::Check => self.require(&["g", "h"])?,
            CommandKind::Construct => match (&self.g, &self.h) {
                (Some(_), Some(_)) | (None, None) => {
                    return Err(CliError::Usage(
                        "`construct` needs exactly one of g, h".into(),
                    ))
                }
                _ => {}
            },
            CommandKind::Solve if !by_catalog => self.require(&["g", "h", "u0", "span"])?,
            CommandKind::Verify if !by_catalog => self.require(&["g", "h", "u0", "span"])?,
            _ => {}
        }
        if cmd == CommandKind::Solve && self.output_format == Some(OutputFormat::Text) {
            return Err(CliError::Usage("`solve` writes csv or json".into()));
        }
        if cmd == CommandKind::Catalog && self.output_format == Some(OutputFormat::Csv) {
            return Err(CliError::Usage("`catalog` writes text or json".into()));
        }
        Ok(cmd)
    }

    fn require(&self, names: &[&str]) -> Result<(), CliError> {
        let have = self.present();
        let missing: Vec<_> = names.iter().filter(|n| !have.contains(n)).copied().collect();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(CliError::Usage(format!("missing required {}", missing.join(", "))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_prefers_flags() {
        let file = JobConfig {
            g: Some("u".into()),
            step: Some(0.1),
            ..Default::default()
        };
        let flags = JobConfig {
            step: Some(0.2),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.g.as_deref(), Some("u"));
        assert_eq!(merged.step, Some(0.2));
    }

    #[test]
    fn json_round_trip_and_unknown_field() {
        let text = r#"{"command":"solve","catalog":"fisher","params":{"c2":0.5},"u0":-0.4999,"span":[-6,6],"step":0.01,"outputFormat":"csv"}"#;
        let cfg: JobConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.validate().unwrap(), CommandKind::Solve);
        assert!(serde_json::from_str::<JobConfig>(r#"{"command":"check","bogus":1}"#).is_err());
    }

    #[test]
    fn extras_rejected_per_command() {
        let cfg = JobConfig {
            command: Some(CommandKind::Check),
            g: Some("1".into()),
            h: Some("u".into()),
            step: Some(0.1),
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(CliError::Usage(m)) if m.contains("step")));
        let cfg = JobConfig {
            command: Some(CommandKind::Construct),
            g: Some("u".into()),
            c1: Some(1.0),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = JobConfig {
            command: Some(CommandKind::Solve),
            catalog: Some("fisher".into()),
            g: Some("u".into()),
            span: Some([0.0, 1.0]),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn missing_required() {
        let cfg = JobConfig {
            command: Some(CommandKind::Check),
            g: Some("1".into()),
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(CliError::Usage(m)) if m.contains("h")));
        let cfg = JobConfig {
            command: Some(CommandKind::Construct),
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}

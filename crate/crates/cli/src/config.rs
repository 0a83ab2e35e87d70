//! Job configuration: an optional TOML file overlaid by command-line flags.

use std::path::PathBuf;
use std::str::FromStr;

use periodic_kl::{Error, Family, Result, RootDatum, Window};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

/// Keys accepted in a `--config` file. All optional; flags win.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(rename = "type")]
    pub family: Option<String>,
    pub rank: Option<usize>,
    pub l: Option<u64>,
    pub height: Option<u64>,
    pub coset: Option<Vec<i64>>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub max_gap: Option<u64>,
    pub force: Option<bool>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("config: {}", e.message())))
    }

    /// Fields set in `over` replace ours.
    pub fn overlay(self, over: FileConfig) -> FileConfig {
        FileConfig {
            family: over.family.or(self.family),
            rank: over.rank.or(self.rank),
            l: over.l.or(self.l),
            height: over.height.or(self.height),
            coset: over.coset.or(self.coset),
            format: over.format.or(self.format),
            output: over.output.or(self.output),
            threads: over.threads.or(self.threads),
            cache_dir: over.cache_dir.or(self.cache_dir),
            max_gap: over.max_gap.or(self.max_gap),
            force: over.force.or(self.force),
        }
    }
}

pub const DEFAULT_HEIGHT: u64 = 2;

/// A fully resolved job.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub root_datum: RootDatum,
    pub window: Window,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub max_gap: u64,
    pub force: bool,
}

impl JobConfig {
    pub fn resolve(c: FileConfig) -> Result<JobConfig> {
        let family = c
            .family
            .as_deref()
            .ok_or_else(|| Error::Input("missing root datum type (--type)".into()))?;
        let family = Family::from_str(family)?;
        let rank = c
            .rank
            .ok_or_else(|| Error::Input("missing --rank".into()))?;
        let l = c.l.ok_or_else(|| Error::Input("missing --l".into()))?;
        let root_datum = RootDatum::from_parts(family, rank, l)?;
        let height = c.height.unwrap_or(DEFAULT_HEIGHT);
        let window = match c.coset {
            Some(rep) => {
                if rep.len() != rank {
                    return Err(Error::Input(format!(
                        "coset representative has {} coordinates, expected {rank}",
                        rep.len()
                    )));
                }
                Window {
                    height,
                    coset: Some(rep),
                }
            }
            None => Window::new(height),
        };
        if c.threads == Some(0) {
            return Err(Error::Input("--threads must be positive".into()));
        }
        Ok(JobConfig {
            root_datum,
            window,
            format: c.format.unwrap_or_default(),
            output: c.output,
            threads: c.threads,
            cache_dir: c.cache_dir,
            max_gap: c.max_gap.unwrap_or(periodic_kl::periodic::DEFAULT_MAX_GAP),
            force: c.force.unwrap_or(false),
        })
    }

    /// Refuse inadmissible `l`; warnings need `--force`.
    pub fn check_l(&self) -> Result<()> {
        let report = self.root_datum.validate_l();
        if !report.is_ok() {
            let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::Input(format!("inadmissible l: {}", msgs.join("; "))));
        }
        if !report.warnings.is_empty() && !self.force {
            let msgs: Vec<String> = report.warnings.iter().map(|v| v.to_string()).collect();
            return Err(Error::Input(format!(
                "{} (pass --force to continue)",
                msgs.join("; ")
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_overlay() {
        let f = FileConfig::parse("type = \"B\"\nrank = 2\nl = 7\nformat = \"csv\"\n").unwrap();
        let flags = FileConfig {
            l: Some(9),
            ..Default::default()
        };
        let job = JobConfig::resolve(f.overlay(flags)).unwrap();
        assert_eq!(job.root_datum.l(), 9);
        assert_eq!(job.format, Format::Csv);
        assert_eq!(job.window.height, DEFAULT_HEIGHT);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(FileConfig::parse("colour = 1").is_err());
        assert!(FileConfig::parse("format = \"xml\"").is_err());
        assert!(JobConfig::resolve(FileConfig::default()).is_err());
        let c = FileConfig::parse("type=\"A\"\nrank=2\nl=5\ncoset=[1]").unwrap();
        assert!(JobConfig::resolve(c).is_err());
        let c = FileConfig::parse("type=\"A\"\nrank=1\nl=4").unwrap();
        assert!(JobConfig::resolve(c).unwrap().check_l().is_err());
        let c = FileConfig::parse("type=\"A\"\nrank=1\nl=15").unwrap();
        let job = JobConfig::resolve(c).unwrap();
        assert!(job.check_l().is_err());
        assert!(JobConfig { force: true, ..job }.check_l().is_ok());
    }
}

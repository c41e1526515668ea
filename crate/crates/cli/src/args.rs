use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "golomb", version, about = "Verify, search and certify Golomb rulers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check whether rulers are Golomb.
    Verify(Common),
    /// Shortest ruler by exhaustive search.
    Oracle(Common),
    /// Run the bound-tightening pipeline and print the table.
    Bounds(Common),
    /// Constraint-programming search for a ruler of length at most L.
    SolveCp(Common),
    /// Distance-LP branch-and-bound for a ruler of length at most L.
    SolveD(Common),
    /// Placement branch-and-cut: do n marks fit on length L?
    SolveQip(Common),
    /// Prove the optimal length for n marks.
    Certify(Common),
    /// Run a suite of certifications and write one table.
    Bench(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tree {
    One,
    Multi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Small,
    Medium,
}

/// Flags shared by all subcommands; each one only reads those it needs.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "L")]
    pub length: Option<u32>,
    /// cp, d or qip
    #[arg(long)]
    pub method: Option<String>,
    /// Comma list of golomb, ap, clique, nogood, paper-literal-benders (or none)
    #[arg(long)]
    pub cuts: Option<String>,
    /// left or difference
    #[arg(long)]
    pub branching: Option<String>,
    /// none, lp, exact or full
    #[arg(long)]
    pub bounding: Option<String>,
    /// Wall-clock budget in seconds, per run
    #[arg(long)]
    pub budget: Option<f64>,
    /// Bound-tightening rounds
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Node limit per run; makes budget-limited results reproducible
    #[arg(long)]
    pub nodes: Option<u64>,
    #[arg(long, value_enum)]
    pub tree: Option<Tree>,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub ruler: Option<String>,
    #[arg(long = "ruler-file")]
    pub ruler_file: Option<PathBuf>,
    /// key=value file supplying defaults for any of these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected key=value", k + 1);
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn fill<T: std::str::FromStr>(slot: &mut Option<T>, map: &mut BTreeMap<String, String>, key: &str) -> Result<()>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = map.remove(key) {
        if slot.is_none() {
            *slot = Some(v.parse().map_err(|e| anyhow::anyhow!("config `{key}`: {e}"))?);
        }
    }
    Ok(())
}

fn fill_enum<T: ValueEnum>(slot: &mut Option<T>, map: &mut BTreeMap<String, String>, key: &str) -> Result<()> {
    if let Some(v) = map.remove(key) {
        if slot.is_none() {
            *slot = Some(T::from_str(&v, true).map_err(|e| anyhow::anyhow!("config `{key}`: {e}"))?);
        }
    }
    Ok(())
}

impl Common {
    /// Fills unset flags from `--config`; flags given on the command line win.
    pub fn merge_config(mut self) -> Result<Common> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let mut map = parse_config_file(&text)?;
        fill(&mut self.n, &mut map, "n")?;
        fill(&mut self.length, &mut map, "L")?;
        fill(&mut self.method, &mut map, "method")?;
        fill(&mut self.cuts, &mut map, "cuts")?;
        fill(&mut self.branching, &mut map, "branching")?;
        fill(&mut self.bounding, &mut map, "bounding")?;
        fill(&mut self.budget, &mut map, "budget")?;
        fill(&mut self.rounds, &mut map, "rounds")?;
        fill(&mut self.nodes, &mut map, "nodes")?;
        fill_enum(&mut self.tree, &mut map, "tree")?;
        fill_enum(&mut self.suite, &mut map, "suite")?;
        fill(&mut self.out, &mut map, "out")?;
        fill_enum(&mut self.format, &mut map, "format")?;
        fill(&mut self.ruler, &mut map, "ruler")?;
        fill(&mut self.ruler_file, &mut map, "ruler-file")?;
        if let Some(key) = map.keys().next() {
            bail!("config file {}: unknown key `{key}`", path.display());
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_fills_only_unset_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# run\nn = 7\nmethod=qip\nformat=csv\n").unwrap();
        let c = Common {
            n: Some(5),
            config: Some(path),
            ..Common::default()
        }
        .merge_config()
        .unwrap();
        assert_eq!(c.n, Some(5));
        assert_eq!(c.method.as_deref(), Some("qip"));
        assert_eq!(c.format, Some(Format::Csv));
    }

    #[test]
    fn unknown_config_key_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "speed=fast\n").unwrap();
        let c = Common {
            config: Some(path),
            ..Common::default()
        };
        assert!(c.merge_config().is_err());
    }

    #[test]
    fn malformed_config_line_is_an_error() {
        assert!(parse_config_file("n 5").is_err());
        assert_eq!(parse_config_file("L=6").unwrap()["L"], "6");
    }
}

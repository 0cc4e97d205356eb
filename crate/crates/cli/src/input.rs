use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use testsched::generators::generate;
use testsched::model::{instance_from_json, validate_instance};
use testsched::{Instance, Time};

use crate::Usage;

/// Where the instance comes from.
#[derive(Args, Debug, Clone, Default)]
pub struct InstanceArgs {
    /// Generator name; parameters follow as `key=value` words.
    #[arg(long, value_name = "NAME", conflicts_with_all = ["instance", "job"])]
    pub gen: Option<String>,
    /// Generator parameters, `key=value`.
    #[arg(value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Instance file: JSON array of `{"upper": .., "proc": ..}`.
    #[arg(long, value_name = "FILE", conflicts_with = "job")]
    pub instance: Option<PathBuf>,
    /// One job as `upper,proc`; repeatable.
    #[arg(long, value_name = "UPPER,PROC")]
    pub job: Vec<String>,
}

pub fn parse_params(words: &[String]) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| Usage::new(format!("expected key=value, got `{w}`")))?;
        if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Usage::new(format!("parameter `{k}` given twice")).into());
        }
    }
    Ok(map)
}

fn parse_job<T: Time>(s: &str) -> Result<(T, T)> {
    let bad = || Usage::new(format!("expected --job UPPER,PROC, got `{s}`"));
    let (u, p) = s.split_once(',').ok_or_else(bad)?;
    Ok((T::parse(u.trim()).ok_or_else(bad)?, T::parse(p.trim()).ok_or_else(bad)?))
}

impl InstanceArgs {
    /// The instance, rejected as a usage error unless `0 ≤ p ≤ p̄` for every job.
    pub fn load<T: Time>(&self, seed: Option<u64>) -> Result<Instance<T>> {
        let instance = self.load_unchecked(seed)?;
        if let Some(v) = validate_instance(&instance).first() {
            return Err(Usage::new(format!("invalid instance: {v}")).into());
        }
        Ok(instance)
    }

    fn load_unchecked<T: Time>(&self, seed: Option<u64>) -> Result<Instance<T>> {
        if let Some(name) = &self.gen {
            let params = parse_params(&self.params)?;
            return generate(name, &params, seed).map_err(|e| Usage::new(e.to_string()).into());
        }
        if !self.params.is_empty() {
            return Err(Usage::new("key=value parameters need --gen").into());
        }
        if let Some(path) = &self.instance {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return instance_from_json(&text).map_err(|e| Usage::new(format!("{}: {e}", path.display())).into());
        }
        if !self.job.is_empty() {
            return Ok(Instance::from_pairs(self.job.iter().map(|s| parse_job(s)).collect::<Result<Vec<_>>>()?));
        }
        Err(Usage::new("give an instance with --gen, --instance or --job").into())
    }

    pub fn describe(&self) -> String {
        match (&self.gen, &self.instance) {
            (Some(name), _) if self.params.is_empty() => name.clone(),
            (Some(name), _) => format!("{name}[{}]", self.params.join(",")),
            (None, Some(path)) => path.display().to_string(),
            (None, None) => format!("jobs[{}]", self.job.join(";")),
        }
    }
}

/// Writes `text` to `path`, or to stdout.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

pub fn to_json<S: serde::Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

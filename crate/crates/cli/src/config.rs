use std::path::{Path, PathBuf};

use crate::HarnessError;

/// Environment variable naming a `key=value` config file.
pub const CONFIG_ENV: &str = "LOCTAB_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k: u32,
    pub sieve_limit: u64,
    pub memory_cap: u64,
    pub mc_samples: u64,
    pub mc_seed: u64,
    pub yb_n: f64,
    pub yb_floor: f64,
    pub enumeration_cap: u128,
    pub output: Option<PathBuf>,
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
    /// Record wall-clock times in sweep CSVs. Off by default because it makes
    /// reruns differ.
    pub timing: bool,
    /// Treat capacity errors inside `verify` as skips instead of failures.
    pub allow_skips: bool,
    pub lemma310_bmax: usize,
    pub lemma44_vmax: usize,
    pub lemma44_ceiling: f64,
    pub lemma53_ceiling: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k: 2,
            sieve_limit: 10_000_000,
            memory_cap: 512 << 20,
            mc_samples: 1_000_000,
            mc_seed: 42,
            yb_n: 4.0,
            yb_floor: 0.05,
            enumeration_cap: 10_000_000,
            output: None,
            threads: None,
            timing: false,
            allow_skips: false,
            lemma310_bmax: 5,
            lemma44_vmax: 6,
            lemma44_ceiling: 50.0,
            lemma53_ceiling: 50.0,
        }
    }
}

fn bad(key: &str, value: &str) -> HarnessError {
    HarnessError::Config(format!("invalid value {value:?} for {key}"))
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value.trim().replace('_', "").parse().map_err(|_| bad(key, value))
}

/// Integers may be written as `1e7` as well as `10000000`.
fn parse_count(key: &str, value: &str) -> Result<u128, HarnessError> {
    let v = value.trim().replace('_', "");
    if let Ok(n) = v.parse::<u128>() {
        return Ok(n);
    }
    let f: f64 = v.parse().map_err(|_| bad(key, value))?;
    if f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f < 2f64.powi(100) {
        Ok(f as u128)
    } else {
        Err(bad(key, value))
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, HarnessError> {
    match value.trim() {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(bad(key, value)),
    }
}

impl RunConfig {
    /// Applies one `key=value` setting. Keys are case-insensitive and may be
    /// written camelCase, snake_case or kebab-case.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let norm: String = key.chars().filter(|c| *c != '_' && *c != '-').flat_map(char::to_lowercase).collect();
        let narrow = |n: u128| -> Result<u64, HarnessError> { u64::try_from(n).map_err(|_| bad(key, value)) };
        match norm.as_str() {
            "k" => self.k = narrow(parse_count(key, value)?)? as u32,
            "sievelimit" => self.sieve_limit = narrow(parse_count(key, value)?)?,
            "memorycap" | "memorycapbytes" => self.memory_cap = narrow(parse_count(key, value)?)?,
            "mcsamples" => self.mc_samples = narrow(parse_count(key, value)?)?,
            "mcseed" => self.mc_seed = narrow(parse_count(key, value)?)?,
            "ybn" => self.yb_n = parse(key, value)?,
            "ybfloor" => self.yb_floor = parse(key, value)?,
            "enumerationcap" => self.enumeration_cap = parse_count(key, value)?,
            "output" => self.output = Some(PathBuf::from(value.trim())),
            "threads" => self.threads = Some(narrow(parse_count(key, value)?)? as usize),
            "timing" => self.timing = parse_bool(key, value)?,
            "allowskips" => self.allow_skips = parse_bool(key, value)?,
            "lemma310bmax" => self.lemma310_bmax = narrow(parse_count(key, value)?)? as usize,
            "lemma44vmax" => self.lemma44_vmax = narrow(parse_count(key, value)?)? as usize,
            "lemma44ceiling" => self.lemma44_ceiling = parse(key, value)?,
            "lemma53ceiling" => self.lemma53_ceiling = parse(key, value)?,
            _ => return Err(HarnessError::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Reads `key=value` lines; `#` starts a comment.
    pub fn apply_str(&mut self, text: &str) -> Result<(), HarnessError> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key=value", no + 1)))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("reading {}: {e}", path.display())))?;
        self.apply_str(&text)
    }

    /// Defaults, then the file named by `LOCTAB_CONFIG` if set.
    pub fn from_env() -> Result<Self, HarnessError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = std::env::var_os(CONFIG_ENV) {
            cfg.apply_file(Path::new(&path))?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let positive = [
            ("k", self.k as u128),
            ("sieveLimit", self.sieve_limit as u128),
            ("memoryCap", self.memory_cap as u128),
            ("mcSamples", self.mc_samples as u128),
            ("enumerationCap", self.enumeration_cap),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(HarnessError::Config(format!("{name} must be positive")));
        }
        if !(self.yb_n > 0.0) {
            return Err(HarnessError::Config("ybN must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(HarnessError::Config("threads must be positive".into()));
        }
        Ok(())
    }

    /// One line per field, in a fixed order.
    pub fn describe(&self) -> String {
        format!(
            "k={} sieveLimit={} memoryCap={} mcSamples={} mcSeed={} ybN={} ybFloor={} enumerationCap={} lemma310Bmax={} lemma44Vmax={} lemma44Ceiling={} lemma53Ceiling={} allowSkips={}",
            self.k,
            self.sieve_limit,
            self.memory_cap,
            self.mc_samples,
            self.mc_seed,
            self.yb_n,
            self.yb_floor,
            self.enumeration_cap,
            self.lemma310_bmax,
            self.lemma44_vmax,
            self.lemma44_ceiling,
            self.lemma53_ceiling,
            self.allow_skips,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let mut c = RunConfig::default();
        c.apply_str("# comment\nsieveLimit = 1e5\nmc_seed=7\nybFloor=0.1 # trailing\n\ntiming=true").unwrap();
        assert_eq!(c.sieve_limit, 100_000);
        assert_eq!(c.mc_seed, 7);
        assert_eq!(c.yb_floor, 0.1);
        assert!(c.timing);
        assert!(c.apply_str("nope=1").is_err());
        assert!(c.apply_str("k").is_err());
        assert!(c.apply_str("k=1.5").is_err());
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        let c = RunConfig { mc_samples: 0, ..RunConfig::default() };
        assert!(c.validate().is_err());
    }
}

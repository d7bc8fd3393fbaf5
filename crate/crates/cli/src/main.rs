use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use loctab::arith::{lambda_sequence, ModelConstants, SieveTable};
use loctab::boxes::l_volume;
use loctab::localized::{tau_localized, Window};
use loctab::order_stats::{big_ratio, q_r};
use loctab::Rational;
use loctab_cli::sweeps::{run_farey_sweep, run_table_sweep, SweepOutput};
use loctab_cli::verify::run_verify;
use loctab_cli::{csv, init_threads, HarnessError, RunConfig, EXIT_OK};

#[derive(Parser)]
#[command(name = "loctab", version, about = "Localized factorization counts, tables and verification suites")]
struct Cli {
    #[command(flatten)]
    flags: ConfigFlags,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Each flag overrides the matching key of the `LOCTAB_CONFIG` file.
#[derive(Args, Default)]
struct ConfigFlags {
    /// Config file of `key=value` lines (instead of `LOCTAB_CONFIG`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    k: Option<String>,
    #[arg(long, global = true)]
    sieve_limit: Option<String>,
    #[arg(long, global = true)]
    memory_cap: Option<String>,
    #[arg(long, global = true)]
    mc_samples: Option<String>,
    #[arg(long, global = true)]
    mc_seed: Option<String>,
    #[arg(long, global = true)]
    yb_n: Option<String>,
    #[arg(long, global = true)]
    yb_floor: Option<String>,
    #[arg(long, global = true)]
    enumeration_cap: Option<String>,
    /// Write CSV/report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<String>,
    #[arg(long, global = true)]
    threads: Option<String>,
    /// Fill the wall_ms column of the table sweep.
    #[arg(long, global = true)]
    timing: bool,
    /// Report capacity errors in `verify` as skips.
    #[arg(long, global = true)]
    allow_skips: bool,
    /// Any other config key, as `key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    extra: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every property suite; exit 0 iff all pass.
    Verify {
        /// Only suites whose name starts with this prefix.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// A_{k+1}(N) sweep as CSV.
    Table {
        /// Comma-separated N values (default 16,32,...,256).
        #[arg(long, value_delimiter = ',')]
        n: Vec<u64>,
        /// Also write a gnuplot `.dat` file.
        #[arg(long)]
        dat: Option<PathBuf>,
    },
    /// Direct vs characterized Farey-sum counts as CSV.
    Farey {
        /// Number of summands (default k+1).
        #[arg(long)]
        kp1: Option<usize>,
        /// Comma-separated orders R (default 1..=12).
        #[arg(long, value_delimiter = ',')]
        r: Vec<u64>,
        #[arg(long)]
        dat: Option<PathBuf>,
    },
    /// Localized divisor count of n in a window, e.g. `--y 1,1 --z 3,4`.
    Localized {
        n: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<String>,
    },
    /// Volume of the union of divisor boxes of a.
    Boxvol { a: u64 },
    /// Greedy prime blocks and drift for k.
    Lambda {
        #[arg(long)]
        prime_limit: Option<u64>,
    },
    /// Exact Q_r(u, v); u and v may be fractions like 3/2.
    Orderstats {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
    },
    /// rho, P, lambda and the critical exponent for k.
    Constants,
}

fn build_config(flags: &ConfigFlags) -> Result<RunConfig, HarnessError> {
    let mut cfg = match &flags.config {
        Some(p) => {
            let mut c = RunConfig::default();
            c.apply_file(p)?;
            c
        }
        None => RunConfig::from_env()?,
    };
    let pairs = [
        ("k", &flags.k),
        ("sieveLimit", &flags.sieve_limit),
        ("memoryCap", &flags.memory_cap),
        ("mcSamples", &flags.mc_samples),
        ("mcSeed", &flags.mc_seed),
        ("ybN", &flags.yb_n),
        ("ybFloor", &flags.yb_floor),
        ("enumerationCap", &flags.enumeration_cap),
        ("output", &flags.output),
        ("threads", &flags.threads),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if flags.timing {
        cfg.timing = true;
    }
    if flags.allow_skips {
        cfg.allow_skips = true;
    }
    for kv in &flags.extra {
        let (key, value) =
            kv.split_once('=').ok_or_else(|| HarnessError::Config(format!("--set expects key=value, got {kv:?}")))?;
        cfg.set(key.trim(), value)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_rational(s: &str) -> Result<(i128, i128), HarnessError> {
    let bad = || HarnessError::Config(format!("not a positive rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
        None => (s.trim().parse().map_err(|_| bad())?, 1),
    };
    if q <= 0 {
        return Err(bad());
    }
    Ok((p, q))
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), HarnessError> {
    match &cfg.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_sweep(cfg: &RunConfig, out: SweepOutput, dat: Option<&Path>) -> Result<i32, HarnessError> {
    emit(cfg, &out.csv)?;
    if let Some(p) = dat {
        std::fs::write(p, &out.dat)?;
    }
    match out.error {
        Some(e) => {
            eprintln!("{e}");
            Ok(e.exit_code())
        }
        None => Ok(EXIT_OK),
    }
}

fn run(cli: Cli) -> Result<i32, HarnessError> {
    let cfg = build_config(&cli.flags)?;
    init_threads(&cfg);
    match cli.cmd {
        Cmd::Verify { only, list } => {
            if list {
                for n in loctab_cli::verify::suite_names() {
                    println!("{n}");
                }
                return Ok(EXIT_OK);
            }
            let rep = run_verify(&cfg, only.as_deref());
            emit(&cfg, &rep.text())?;
            Ok(rep.exit_code())
        }
        Cmd::Table { n, dat } => {
            let ns = if n.is_empty() { (4..=8).map(|e| 1u64 << e).collect() } else { n };
            emit_sweep(&cfg, run_table_sweep(cfg.k, &ns, &cfg), dat.as_deref())
        }
        Cmd::Farey { kp1, r, dat } => {
            let rs = if r.is_empty() { (1..=12).collect() } else { r };
            let kp1 = kp1.unwrap_or(cfg.k as usize + 1);
            emit_sweep(&cfg, run_farey_sweep(kp1, &rs, &cfg), dat.as_deref())
        }
        Cmd::Localized { n, y, z } => {
            let conv = |v: &[String]| -> Result<Vec<Rational>, HarnessError> {
                v.iter().map(|s| parse_rational(s).map(|(p, q)| Rational::new(p, q))).collect()
            };
            let w = Window::new(conv(&y)?, conv(&z)?)?;
            let sieve = SieveTable::with_memory_cap(n.max(2), cfg.memory_cap)?;
            emit(&cfg, &format!("{}\n", tau_localized(n, &w, &sieve)?))?;
            Ok(EXIT_OK)
        }
        Cmd::Boxvol { a } => {
            let sieve = SieveTable::with_memory_cap(a.max(2), cfg.memory_cap)?;
            let f = sieve.factorize(a)?;
            let k = cfg.k as usize;
            emit(&cfg, &format!("{}\n", csv::real(l_volume(&f, k)?)))?;
            Ok(EXIT_OK)
        }
        Cmd::Lambda { prime_limit } => {
            let seq = lambda_sequence(cfg.k, prime_limit.unwrap_or(cfg.sieve_limit))?;
            let mut out = String::from("j,lambda,mu,drift\n");
            out.push_str(&csv::row(&["0".into(), seq.lambdas[0].to_string(), String::new(), String::new()]));
            for j in 1..seq.lambdas.len() {
                out.push_str(&csv::row(&[
                    j.to_string(),
                    seq.lambdas[j].to_string(),
                    csv::real(seq.mus[j - 1]),
                    csv::real(seq.empirical_drift[j - 1]),
                ]));
            }
            emit(&cfg, &out)?;
            Ok(EXIT_OK)
        }
        Cmd::Orderstats { r, u, v } => {
            let (u, v) = (parse_rational(&u)?, parse_rational(&v)?);
            let to_big = |(p, q): (i128, i128)| -> Result<_, HarnessError> {
                let p = i64::try_from(p).map_err(|_| HarnessError::Config("value too large".into()))?;
                let q = i64::try_from(q).map_err(|_| HarnessError::Config("value too large".into()))?;
                Ok(big_ratio(p, q))
            };
            let q = q_r(&to_big(u)?, &to_big(v)?, r)?;
            emit(&cfg, &format!("{q}\n"))?;
            Ok(EXIT_OK)
        }
        Cmd::Constants => {
            let c = ModelConstants::new(cfg.k)?;
            let out = format!(
                "k,rho,P,lambda,critical_exponent\n{}",
                csv::row(&[
                    cfg.k.to_string(),
                    csv::real(c.rho),
                    csv::real(c.p),
                    csv::real(c.lambda),
                    csv::real(c.critical_exponent()),
                ])
            );
            emit(&cfg, &out)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("loctab: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

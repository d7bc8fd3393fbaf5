//! Table and Farey sweeps with fixed CSV schemas.

use std::time::Instant;

use loctab::farey::{farey_count_characterized, farey_count_direct};
use loctab::table::{normalized_ratio, table_count, Backing};

use crate::csv::{real, row};
use crate::{HarnessError, RunConfig};

pub const TABLE_HEADER: &str = "k,N,A,ratio,ratio_step,wall_ms";
pub const FAREY_HEADER: &str = "kp1,R,direct,characterized,equal";

/// CSV text, a gnuplot-friendly `.dat` twin, and the first error hit (rows
/// before it are kept).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub csv: String,
    pub dat: String,
    pub error: Option<HarnessError>,
}

impl SweepOutput {
    fn new(header: &str, dat_header: &str) -> Self {
        SweepOutput { csv: format!("{header}\n"), dat: format!("# {dat_header}\n"), error: None }
    }
}

/// Rows `(k, N, A_{k+1}(N), ratio, ratio_step, wall_ms)`.
///
/// `ratio` is left empty below `N = 16`, where the normalizer is not
/// defined; `ratio_step` is the ratio to the previous row's `ratio`.
/// `wall_ms` is 0 unless `cfg.timing` is set. A failing row is written with
/// `A = error` and ends the sweep.
pub fn run_table_sweep(k: u32, ns: &[u64], cfg: &RunConfig) -> SweepOutput {
    let mut out = SweepOutput::new(TABLE_HEADER, "N A ratio");
    let backing = Backing::Auto { memory_cap: cfg.memory_cap };
    let mut prev: Option<f64> = None;
    for &n in ns {
        let start = Instant::now();
        let a = match table_count(k as usize, n, backing) {
            Ok(a) => a,
            Err(e) => {
                out.csv.push_str(&row(&[
                    k.to_string(),
                    n.to_string(),
                    "error".into(),
                    String::new(),
                    String::new(),
                    "0".into(),
                ]));
                out.error = Some(e.into());
                return out;
            }
        };
        let ratio = if n >= 16 { normalized_ratio(k, n, a).ok() } else { None };
        let step = match (prev, ratio) {
            (Some(p), Some(r)) => Some(r / p),
            _ => None,
        };
        prev = ratio;
        let wall = if cfg.timing { start.elapsed().as_millis() } else { 0 };
        let opt = |x: Option<f64>| x.map(real).unwrap_or_default();
        out.csv.push_str(&row(&[k.to_string(), n.to_string(), a.to_string(), opt(ratio), opt(step), wall.to_string()]));
        out.dat.push_str(&format!("{n} {a} {}\n", ratio.map(real).unwrap_or_else(|| "NaN".into())));
    }
    out
}

/// Rows `(kp1, R, direct, characterized, equal)`; a mismatch is recorded
/// and reported as an assertion failure after the sweep.
pub fn run_farey_sweep(kp1: usize, rs: &[u64], cfg: &RunConfig) -> SweepOutput {
    let mut out = SweepOutput::new(FAREY_HEADER, "R direct characterized");
    let mut mismatches = Vec::new();
    for &r in rs {
        let both = farey_count_direct(kp1, r, cfg.enumeration_cap)
            .and_then(|d| Ok((d, farey_count_characterized(kp1, r, cfg.enumeration_cap)?)));
        let (d, c) = match both {
            Ok(v) => v,
            Err(e) => {
                out.csv.push_str(&row(&[
                    kp1.to_string(),
                    r.to_string(),
                    "error".into(),
                    "error".into(),
                    String::new(),
                ]));
                out.error = Some(e.into());
                return out;
            }
        };
        if d != c {
            mismatches.push(format!("kp1={kp1} R={r}: direct={d} characterized={c}"));
        }
        out.csv.push_str(&row(&[kp1.to_string(), r.to_string(), d.to_string(), c.to_string(), (d == c).to_string()]));
        out.dat.push_str(&format!("{r} {d} {c}\n"));
    }
    if !mismatches.is_empty() {
        out.error = Some(HarnessError::Assertion(mismatches.join("; ")));
    }
    out
}

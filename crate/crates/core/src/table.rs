//! Distinct products of a `(k+1)`-dimensional multiplication table.
//!
//! Products are enumerated with `n_1 <= n_2 <= ... <= n_{k+1}` and inserted
//! into a [`ProductRegistry`]; deduplication is entirely the registry's job.
//! Two backings are available: an in-memory bitset over `[1, N^{k+1}]`, and a
//! sort-merge deduplicator that spills sorted runs to temporary files.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::arith::ModelConstants;
use crate::error::{Error, Result};

/// Default memory budget for the bitset backing (512 MiB).
pub const DEFAULT_TABLE_MEMORY_CAP: u64 = 512 << 20;
/// Default number of products buffered before a sorted run is spilled.
pub const DEFAULT_CHUNK_LEN: usize = 1 << 22;

/// How [`table_count`] stores products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backing {
    /// Bitset when `N^{k+1}/8` bytes fit in `memory_cap`, sorted chunks otherwise.
    Auto {
        memory_cap: u64,
    },
    Bitset,
    SortedChunks {
        chunk_len: usize,
    },
}

impl Default for Backing {
    fn default() -> Self {
        Backing::Auto { memory_cap: DEFAULT_TABLE_MEMORY_CAP }
    }
}

/// A set of positive integers below a fixed capacity.
pub trait ProductRegistry {
    fn insert(&mut self, value: u64) -> Result<()>;
    /// Number of distinct values inserted.
    fn cardinality(&mut self) -> Result<u64>;
}

/// Bitset over `[1, capacity]`. Insertion is lock-free, so one registry can
/// be shared by all workers.
#[derive(Debug)]
pub struct BitsetRegistry {
    capacity: u64,
    words: Vec<AtomicU64>,
}

impl BitsetRegistry {
    pub fn new(capacity: u64) -> Self {
        let words = (capacity / 64 + 1) as usize;
        BitsetRegistry { capacity, words: (0..words).map(|_| AtomicU64::new(0)).collect() }
    }

    pub fn insert_shared(&self, value: u64) -> Result<()> {
        if value == 0 || value > self.capacity {
            return Err(Error::OutOfRange { value: value as u128, limit: self.capacity as u128 });
        }
        self.words[(value / 64) as usize].fetch_or(1 << (value % 64), Ordering::Relaxed);
        Ok(())
    }

    pub fn contains(&self, value: u64) -> bool {
        value <= self.capacity && self.words[(value / 64) as usize].load(Ordering::Relaxed) & (1 << (value % 64)) != 0
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.load(Ordering::Relaxed).count_ones() as u64).sum()
    }

    /// The stored values, ascending.
    pub fn values(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (i, w) in self.words.iter().enumerate() {
            let mut bits = w.load(Ordering::Relaxed);
            while bits != 0 {
                let t = bits.trailing_zeros() as u64;
                out.push(i as u64 * 64 + t);
                bits &= bits - 1;
            }
        }
        out
    }
}

impl ProductRegistry for BitsetRegistry {
    fn insert(&mut self, value: u64) -> Result<()> {
        self.insert_shared(value)
    }

    fn cardinality(&mut self) -> Result<u64> {
        Ok(self.count())
    }
}

/// External sort-merge deduplicator.
///
/// Values are buffered; a full buffer is sorted, deduplicated and written to
/// a temporary file as a run of little-endian `u64`s. The cardinality is the
/// number of distinct values in the k-way merge of all runs.
#[derive(Debug)]
pub struct SortedChunkRegistry {
    chunk_len: usize,
    buffer: Vec<u64>,
    runs: Vec<File>,
}

impl SortedChunkRegistry {
    pub fn new(chunk_len: usize) -> Self {
        SortedChunkRegistry { chunk_len: chunk_len.max(1), buffer: Vec::new(), runs: Vec::new() }
    }

    pub fn spilled_runs(&self) -> usize {
        self.runs.len()
    }

    /// Append an already sorted, duplicate-free run.
    pub fn push_sorted_run(&mut self, run: &[u64]) -> Result<()> {
        if run.is_empty() {
            return Ok(());
        }
        let mut file = tempfile::tempfile()?;
        {
            let mut w = BufWriter::new(&mut file);
            for v in run {
                w.write_all(&v.to_le_bytes())?;
            }
            w.flush()?;
        }
        self.runs.push(file);
        Ok(())
    }

    fn spill(&mut self) -> Result<()> {
        let mut buf = std::mem::take(&mut self.buffer);
        buf.sort_unstable();
        buf.dedup();
        self.push_sorted_run(&buf)
    }

    fn merge_count(&mut self) -> Result<u64> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        use std::io::Seek;

        self.spill()?;
        let mut readers: Vec<BufReader<&mut File>> = Vec::with_capacity(self.runs.len());
        for f in &mut self.runs {
            f.rewind()?;
            readers.push(BufReader::new(f));
        }
        fn next(r: &mut impl Read) -> Result<Option<u64>> {
            let mut b = [0u8; 8];
            match r.read_exact(&mut b) {
                Ok(()) => Ok(Some(u64::from_le_bytes(b))),
                Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => Ok(None),
                Err(e) => Err(e.into()),
            }
        }
        let mut heap = BinaryHeap::new();
        for (i, r) in readers.iter_mut().enumerate() {
            if let Some(v) = next(r)? {
                heap.push(Reverse((v, i)));
            }
        }
        let mut count = 0u64;
        let mut last = None;
        while let Some(Reverse((v, i))) = heap.pop() {
            if last != Some(v) {
                count += 1;
                last = Some(v);
            }
            if let Some(nv) = next(&mut readers[i])? {
                heap.push(Reverse((nv, i)));
            }
        }
        Ok(count)
    }
}

impl ProductRegistry for SortedChunkRegistry {
    fn insert(&mut self, value: u64) -> Result<()> {
        self.buffer.push(value);
        if self.buffer.len() >= self.chunk_len {
            self.spill()?;
        }
        Ok(())
    }

    fn cardinality(&mut self) -> Result<u64> {
        self.merge_count()
    }
}

/// Calls `f` with every product `n_1 ⋯ n_{k+1}` where `n_1` is fixed and
/// `n_1 <= n_2 <= ... <= n_{k+1} <= N`.
fn for_each_ordered_product(n1: u64, k: usize, n: u64, f: &mut impl FnMut(u64)) {
    fn go(prod: u64, last: u64, depth: usize, n: u64, f: &mut impl FnMut(u64)) {
        if depth == 0 {
            f(prod);
            return;
        }
        for m in last..=n {
            go(prod * m, m, depth - 1, n, f);
        }
    }
    go(n1, n1, k, n, f);
}

fn table_capacity(k: usize, n: u64) -> Result<u64> {
    let cap = (n as u128).checked_pow(k as u32 + 1).ok_or(Error::Overflow("N^(k+1)"))?;
    u64::try_from(cap).map_err(|_| Error::Capacity {
        what: "table capacity N^(k+1)",
        needed: cap,
        limit: u64::MAX as u128,
    })
}

/// `A_{k+1}(N)`: the number of distinct products `n_1 ⋯ n_{k+1}` with
/// `1 <= n_i <= N`.
pub fn table_count(k: usize, n: u64, backing: Backing) -> Result<u64> {
    if k == 0 || n == 0 {
        return Err(Error::domain("table_count needs k >= 1 and N >= 1"));
    }
    let cap = table_capacity(k, n)?;
    let backing = match backing {
        Backing::Auto { memory_cap } => {
            if cap / 8 + 8 <= memory_cap {
                Backing::Bitset
            } else {
                Backing::SortedChunks { chunk_len: DEFAULT_CHUNK_LEN }
            }
        }
        b => b,
    };
    match backing {
        Backing::Bitset => Ok(bitset_table(k, n, cap).count()),
        Backing::SortedChunks { chunk_len } => {
            let mut reg = SortedChunkRegistry::new(chunk_len);
            // Rows for a batch of n_1 values are produced in parallel and fed
            // to the registry in n_1 order.
            let batch = rayon::current_num_threads().max(1) * 4;
            let rows: Vec<u64> = (1..=n).collect();
            for group in rows.chunks(batch) {
                let produced: Vec<Vec<u64>> = group
                    .par_iter()
                    .map(|&n1| {
                        let mut v = Vec::new();
                        for_each_ordered_product(n1, k, n, &mut |p| v.push(p));
                        v
                    })
                    .collect();
                for row in produced {
                    for p in row {
                        reg.insert(p)?;
                    }
                }
            }
            reg.cardinality()
        }
        Backing::Auto { .. } => unreachable!(),
    }
}

fn bitset_table(k: usize, n: u64, cap: u64) -> BitsetRegistry {
    let reg = BitsetRegistry::new(cap);
    (1..=n).into_par_iter().for_each(|n1| {
        for_each_ordered_product(n1, k, n, &mut |p| {
            reg.insert_shared(p).expect("product within capacity");
        })
    });
    reg
}

/// The set `{n_1 ⋯ n_{k+1} : n_i <= N}`, ascending. Bitset-backed, so the
/// same memory budget as [`Backing::Auto`] applies.
pub fn table_products(k: usize, n: u64, memory_cap: u64) -> Result<Vec<u64>> {
    if k == 0 || n == 0 {
        return Err(Error::domain("table_products needs k >= 1 and N >= 1"));
    }
    let cap = table_capacity(k, n)?;
    if cap / 8 + 8 > memory_cap {
        return Err(Error::Capacity {
            what: "table bitset bytes",
            needed: (cap / 8 + 8) as u128,
            limit: memory_cap as u128,
        });
    }
    Ok(bitset_table(k, n, cap).values())
}

/// `A · (log N)^{Q(1/log rho)} · (log log N)^{3/2} / N^{k+1}`.
pub fn normalized_ratio(k: u32, n: u64, a: u64) -> Result<f64> {
    if n < 16 {
        return Err(Error::domain(format!("normalized_ratio needs N >= 16, got {n}")));
    }
    let c = ModelConstants::new(k)?;
    let ln = (n as f64).ln();
    let scale = (n as f64).powi(k as i32 + 1);
    Ok(a as f64 * ln.powf(c.critical_exponent()) * ln.ln().powf(1.5) / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_examples() {
        assert_eq!(table_count(1, 4, Backing::default()).unwrap(), 9);
        assert_eq!(table_count(2, 2, Backing::default()).unwrap(), 4);
        for k in 1..5 {
            assert_eq!(table_count(k, 1, Backing::default()).unwrap(), 1);
        }
        assert_eq!(table_products(1, 4, 1 << 20).unwrap(), vec![1, 2, 3, 4, 6, 8, 9, 12, 16]);
    }

    #[test]
    fn backings_agree_with_spills() {
        for (k, n) in [(1, 50), (2, 20), (3, 9)] {
            let bits = table_count(k, n, Backing::Bitset).unwrap();
            let chunks = table_count(k, n, Backing::SortedChunks { chunk_len: 37 }).unwrap();
            assert_eq!(bits, chunks, "k={k} N={n}");
        }
    }

    #[test]
    fn auto_falls_back_to_chunks() {
        let tiny = Backing::Auto { memory_cap: 16 };
        assert_eq!(table_count(1, 40, tiny).unwrap(), table_count(1, 40, Backing::Bitset).unwrap());
        assert!(table_products(1, 40, 16).is_err());
    }

    #[test]
    fn chunk_registry_counts_duplicates_once() {
        let mut r = SortedChunkRegistry::new(3);
        for v in [5, 1, 5, 9, 1, 2, 9, 9, 3] {
            r.insert(v).unwrap();
        }
        assert!(r.spilled_runs() >= 2);
        assert_eq!(r.cardinality().unwrap(), 5);
    }

    #[test]
    fn ratio_examples() {
        let r = normalized_ratio(1, 16, 97).unwrap();
        let q = crate::arith::q_of(1.0 / std::f64::consts::LN_2).unwrap();
        let ln = 16f64.ln();
        let expect = 97.0 * ln.powf(q) * ln.ln().powf(1.5) / 256.0;
        assert!((r - expect).abs() < 1e-14);
        let d = normalized_ratio(1, 16, 194).unwrap();
        assert!((d - 2.0 * r).abs() < 1e-14);
        assert!(normalized_ratio(1, 4, 9).is_err());
    }

    #[test]
    fn bitset_rejects_out_of_range() {
        let mut b = BitsetRegistry::new(10);
        assert!(b.insert(0).is_err());
        assert!(b.insert(11).is_err());
        b.insert(10).unwrap();
        assert!(b.contains(10));
        assert_eq!(b.values(), vec![10]);
    }
}

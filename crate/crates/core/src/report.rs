//! Tables of computed values and scans of open statements over the store.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::apcore::{Kind, Structure};
use crate::arith::is_prime;
use crate::bounds::ceil_log;
use crate::closedform::classify_odd_prime;
use crate::error::{Error, Result};
use crate::solver::{ensure_aw, SearchOptions};
use crate::store::{AwLookup, Store};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Plain,
    Records,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "plain" => Ok(Format::Plain),
            "records" => Ok(Format::Records),
            _ => Err(Error::InvalidArgument(format!("unknown format {s:?}"))),
        }
    }
}

/// A labelled grid of optional values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub corner: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<Option<usize>>)>,
    /// `(structure, k)` behind every filled cell, for the records format.
    pub cells: Vec<(Structure, usize)>,
}

impl Grid {
    pub fn get(&self, row: &str, col: &str) -> Option<usize> {
        let c = self.columns.iter().position(|x| x == col)?;
        self.rows.iter().find(|(r, _)| r == row)?.1[c]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.corner);
        for c in &self.columns {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
        for (label, vals) in &self.rows {
            // Trailing blank cells are dropped.
            let used = vals.iter().rposition(Option::is_some).map_or(0, |i| i + 1);
            out.push_str(label);
            for v in &vals[..used] {
                out.push(',');
                if let Some(v) = v {
                    let _ = write!(out, "{v}");
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_plain(&self) -> String {
        let width = self
            .columns
            .iter()
            .map(String::len)
            .chain(self.rows.iter().flat_map(|(_, v)| v.iter().flatten().map(|x| x.to_string().len())))
            .max()
            .unwrap_or(1);
        let label_w = self.rows.iter().map(|(l, _)| l.len()).chain([self.corner.len()]).max().unwrap_or(1);
        let mut out = String::new();
        let _ = write!(out, "{:>label_w$} |", self.corner);
        for c in &self.columns {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
        let _ = writeln!(out, "{}", "-".repeat(label_w + 2 + (width + 1) * self.columns.len()));
        for (label, vals) in &self.rows {
            let _ = write!(out, "{label:>label_w$} |");
            for v in vals {
                match v {
                    Some(v) => write!(out, " {v:>width$}"),
                    None => write!(out, " {:>width$}", ""),
                }
                .unwrap();
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
        }
        out
    }

    pub fn to_records(&self, store: &Store) -> String {
        let mut out = String::new();
        for &(s, k) in &self.cells {
            if let Some(rec) = store.get(s.kind, s.n, k) {
                out.push_str(&rec.to_line());
                out.push('\n');
            }
        }
        out
    }

    pub fn render(&self, format: Format, store: &Store) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Plain => self.to_plain(),
            Format::Records => self.to_records(store),
        }
    }
}

/// Largest `k` shown in row `n`: `ceil(n/2) + 1` on `[n]`, `n` on `Z_n`.
pub fn row_k_max(kind: Kind, n: usize) -> usize {
    match kind {
        Kind::Interval => n.div_ceil(2) + 1,
        Kind::Cyclic => n,
    }
}

/// Rows `ns`, columns `ks`, computing missing values into `store`.
/// Cells with `k` above [`row_k_max`] stay blank.
pub fn table(
    kind: Kind,
    ns: std::ops::RangeInclusive<usize>,
    ks: std::ops::RangeInclusive<usize>,
    store: &mut Store,
    opts: &SearchOptions,
) -> Result<Grid> {
    let mut grid = Grid { corner: "n".into(), columns: ks.clone().map(|k| k.to_string()).collect(), rows: Vec::new(), cells: Vec::new() };
    // Ascending k then n, so interval runs reuse smaller values.
    let mut vals = vec![vec![None; ks.clone().count()]; ns.clone().count()];
    for (j, k) in ks.clone().enumerate() {
        for (i, n) in ns.clone().enumerate() {
            if k > row_k_max(kind, n) || k > n {
                continue;
            }
            let s = Structure::new(kind, n);
            vals[i][j] = Some(ensure_aw(s, k, store, opts)?);
        }
    }
    for (i, n) in ns.clone().enumerate() {
        for (j, k) in ks.clone().enumerate() {
            if vals[i][j].is_some() {
                grid.cells.push((Structure::new(kind, n), k));
            }
        }
        grid.rows.push((n.to_string(), std::mem::take(&mut vals[i])));
    }
    Ok(grid)
}

/// `aw(Z_n, 3)` laid out by tens: row `"10-19"`, column = last digit.
pub fn decade_table(ns: std::ops::RangeInclusive<usize>, store: &mut Store, opts: &SearchOptions) -> Result<Grid> {
    let mut grid = Grid { corner: String::new(), columns: (0..10).map(|d| d.to_string()).collect(), rows: Vec::new(), cells: Vec::new() };
    let (lo, hi) = (*ns.start(), *ns.end());
    if lo > hi {
        return Ok(grid);
    }
    for decade in lo / 10..=hi / 10 {
        let mut row = vec![None; 10];
        for (d, slot) in row.iter_mut().enumerate() {
            let n = decade * 10 + d;
            if ns.contains(&n) {
                let s = Structure::cyclic(n);
                *slot = Some(ensure_aw(s, 3, store, opts)?);
                grid.cells.push((s, 3));
            }
        }
        grid.rows.push((format!("{}-{}", decade * 10, decade * 10 + 9), row));
    }
    Ok(grid)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Consistent,
    Counterexample,
    NoData,
}

/// Outcome of checking one open statement against the stored values.
#[derive(Clone, Debug)]
pub struct Hypothesis {
    pub name: &'static str,
    pub statement: &'static str,
    pub status: Status,
    pub checked: Vec<String>,
    pub counterexamples: Vec<String>,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = match self.status {
            Status::Consistent => "consistent",
            Status::Counterexample => "COUNTEREXAMPLE",
            Status::NoData => "no data",
        };
        writeln!(f, "{}: {status}", self.name)?;
        writeln!(f, "  claim: {}", self.statement)?;
        if !self.checked.is_empty() {
            writeln!(f, "  checked: {}", self.checked.join(", "))?;
        }
        for c in &self.counterexamples {
            writeln!(f, "  counterexample: {c}")?;
        }
        Ok(())
    }
}

fn hypothesis(name: &'static str, statement: &'static str, checked: Vec<String>, counterexamples: Vec<String>) -> Hypothesis {
    let status = if !counterexamples.is_empty() {
        Status::Counterexample
    } else if checked.is_empty() {
        Status::NoData
    } else {
        Status::Consistent
    };
    Hypothesis { name, statement, status, checked, counterexamples }
}

/// Checks open statements about `aw` on every stored value with `n <= n_max`.
/// Nothing here is assumed anywhere else.
pub fn hypotheses(store: &Store, n_max: usize) -> Vec<Hypothesis> {
    let iv = |n: usize, k: usize| store.lookup(Kind::Interval, n, k);
    let mut out = Vec::new();

    let (mut ok, mut bad) = (Vec::new(), Vec::new());
    let mut m = 0u32;
    while 3usize.pow(m) <= n_max {
        let n = 3usize.pow(m);
        if let Some(v) = if n < 3 { Some(n + 1) } else { iv(n, 3) } {
            let label = format!("{n}");
            if v == m as usize + 2 {
                ok.push(label);
            } else {
                bad.push(format!("aw([{n}],3)={v} != {}", m + 2));
            }
        }
        m += 1;
    }
    out.push(hypothesis("log3-exact-at-powers-of-3", "aw([3^m],3) = m + 2", ok, bad));

    let (mut ok, mut bad) = (Vec::new(), Vec::new());
    for n in 1..=n_max / 3 {
        let a = if n < 3 { Some(n + 1) } else { iv(n, 3) };
        if let (Some(a), Some(b)) = (a, iv(3 * n, 3)) {
            if b == a + 1 {
                ok.push(n.to_string());
            } else {
                bad.push(format!("aw([{}],3)={b}, aw([{n}],3)={a}", 3 * n));
            }
        }
    }
    out.push(hypothesis("tripling-adds-one", "aw([3n],3) = aw([n],3) + 1", ok, bad));

    let (mut ok, mut bad) = (Vec::new(), Vec::new());
    for rec in store.records().filter(|r| r.structure == Kind::Interval && r.n <= n_max && r.n >= 2) {
        let prev = if rec.n - 1 < rec.k { Some(rec.n) } else { iv(rec.n - 1, rec.k) };
        if let Some(p) = prev {
            if rec.aw + 1 >= p {
                ok.push(format!("n={} k={}", rec.n, rec.k));
            } else {
                bad.push(format!("aw([{}],{})={} < aw([{}],{})-1={}", rec.n, rec.k, rec.aw, rec.n - 1, rec.k, p - 1));
            }
        }
    }
    let n_ok = ok.len();
    out.push(hypothesis(
        "drop-at-most-one",
        "aw([n],k) >= aw([n-1],k) - 1",
        if n_ok > 0 { vec![format!("{n_ok} pairs")] } else { vec![] },
        bad,
    ));

    let excess: Vec<(usize, usize)> = (3..=n_max)
        .filter_map(|n| iv(n, 3).map(|v| (n, v - ceil_log(3, n as u64) as usize)))
        .collect();
    let max_excess = excess.iter().map(|&(_, e)| e).max();
    out.push(hypothesis(
        "log3-plus-constant",
        "aw([n],3) - ceil(log3 n) stays bounded (only the observed maximum is reported)",
        max_excess.map(|e| vec![format!("max excess {e} over {} values", excess.len())]).unwrap_or_default(),
        Vec::new(),
    ));

    let primes: Vec<u64> = (3..=n_max as u64).filter(|&p| is_prime(p)).collect();
    let three = primes.iter().filter(|&&p| classify_odd_prime(p).aw == 3).count();
    out.push(hypothesis(
        "primes-with-aw-3",
        "infinitely many primes p have aw(Z_p,3) = 3 (only counted here)",
        vec![format!("{three} of {} odd primes up to {n_max}", primes.len())],
        Vec::new(),
    ));
    out
}

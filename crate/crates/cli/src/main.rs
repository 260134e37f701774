use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use aw_core::apcore::{self, Kind, Structure};
use aw_core::behrend::best_behrend_subset;
use aw_core::bounds::bounds_for;
use aw_core::closedform::{aw_zn3, f_counts};
use aw_core::constructions::interval_witness_from_set;
use aw_core::oracle::brute_force_aw;
use aw_core::report::{self, Format};
use aw_core::solver::{compute_sz, ensure_aw, SearchOptions};
use aw_core::store::{Store, CACHE_ENV, DEFAULT_CACHE};
use aw_core::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aw", version, about = "Anti-van der Waerden numbers of [n] and Z_n")]
struct Cli {
    /// JSON-lines cache of proven values.
    #[arg(long, global = true, env = CACHE_ENV, default_value = DEFAULT_CACHE)]
    cache: PathBuf,
    #[arg(long, global = true, default_value = "plain", value_parser = parse_format)]
    format: Format,
    #[command(flatten)]
    search: SearchArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SearchArgs {
    /// Solver threads; 1 gives the lexicographically least witnesses.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    #[arg(long, global = true)]
    timeout_secs: Option<u64>,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            jobs: self.jobs.max(1),
            max_nodes: self.max_nodes,
            timeout: self.timeout_secs.map(Duration::from_secs),
            ..SearchOptions::default()
        }
    }
}

#[derive(Args)]
struct Target {
    #[arg(long, short = 's', default_value = "interval", value_parser = parse_kind)]
    structure: Kind,
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 'k')]
    k: usize,
}

impl Target {
    fn structure(&self) -> Structure {
        Structure::new(self.structure, self.n)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute aw(S, k), reusing and extending the cache.
    Compute {
        #[command(flatten)]
        target: Target,
        /// Also print an exact (aw-1)-coloring with no rainbow k-AP.
        #[arg(long)]
        witness: bool,
    },
    /// Regenerate a table of values.
    Table {
        #[arg(long, short = 's', default_value = "interval", value_parser = parse_kind)]
        structure: Kind,
        /// Rows, as `a..b` or a single value.
        #[arg(long, short = 'n', value_parser = parse_range)]
        n: RangeInclusive<usize>,
        /// Columns, as `a..b` or a single value.
        #[arg(long, short = 'k', value_parser = parse_range)]
        k: RangeInclusive<usize>,
        /// Lay out Z_n, k=3 by tens instead of one row per n.
        #[arg(long)]
        decades: bool,
    },
    /// Check colorings in the text format for rainbow k-APs.
    Verify {
        file: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Closed form for aw(Z_n, 3) with its prime factor counts.
    Formula {
        #[arg(short = 'n')]
        n: u64,
    },
    /// Largest Behrend set in [n] and the lower bound it certifies.
    Behrend {
        #[arg(short = 'n')]
        n: u64,
        #[arg(short = 'k')]
        k: Option<usize>,
    },
    /// Every applicable bound, from rules and the cache.
    Bounds {
        #[command(flatten)]
        target: Target,
    },
    /// Largest subset of [n] without a k-AP.
    Sz {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
    },
    /// aw(S, k) by brute force over set partitions.
    Oracle {
        #[command(flatten)]
        target: Target,
    },
    /// Check open statements against the cached values.
    Hypotheses {
        #[arg(long, default_value_t = 58)]
        n_max: usize,
    },
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let opts = cli.search.options();
    match cli.cmd {
        Cmd::Compute { target, witness } => {
            let s = target.structure();
            let mut store = Store::open(&cli.cache)?;
            let aw = ensure_aw(s, target.k, &mut store, &opts)?;
            let rec = store.get(s.kind, s.n, target.k).expect("ensure_aw stores its result");
            match cli.format {
                Format::Records => println!("{}", rec.to_line()),
                Format::Csv => println!("{},{},{},{aw}", s.kind, s.n, target.k),
                Format::Plain => println!("{aw}"),
            }
            if witness {
                let w = rec.witness_coloring().context("the cached record has no witness")?;
                print!("{}", w.to_text());
            }
        }
        Cmd::Table { structure, n, k, decades } => {
            let mut store = Store::open(&cli.cache)?;
            let grid = if decades {
                if structure != Kind::Cyclic || k != (3..=3) {
                    bail!("--decades lays out Z_n with k = 3 only");
                }
                report::decade_table(n, &mut store, &opts)?
            } else {
                report::table(structure, n, k, &mut store, &opts)?
            };
            print!("{}", grid.render(cli.format, &store));
        }
        Cmd::Verify { file, k } => {
            let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let mut ok = true;
            for (i, c) in apcore::parse_colorings(&text)?.iter().enumerate() {
                match apcore::find_rainbow_kap(c, k) {
                    None => println!("coloring {}: ok ({} colors, no rainbow {k}-AP)", i + 1, c.r()),
                    Some(p) => {
                        ok = false;
                        println!("coloring {}: fail, rainbow {k}-AP {p}", i + 1);
                    }
                }
            }
            return Ok(ok);
        }
        Cmd::Formula { n } => {
            if n < 2 {
                bail!("n must be at least 2");
            }
            println!("{}", aw_zn3(n));
            println!("{} = 2 + f2 + f3 + 2*f4", f_counts(n));
        }
        Cmd::Behrend { n, k } => {
            let set = best_behrend_subset(n);
            let p = set.params;
            println!("m={} d={} ell={} size={}", p.m, p.d, p.ell, set.len());
            let values: Vec<String> = set.values().iter().map(u64::to_string).collect();
            println!("{}", values.join(" "));
            if let Some(k) = k {
                if k < 4 || k as u64 > n {
                    bail!("the punctured-set bound needs 4 <= k <= n");
                }
                let positions: Vec<usize> = set.values().iter().map(|&v| v as usize).collect();
                let w = interval_witness_from_set(n as usize, &positions)?;
                println!("aw([{n}],{k}) >= {} (verified {}-coloring)", w.r() + 1, w.r());
            }
        }
        Cmd::Bounds { target } => {
            let store = Store::open(&cli.cache)?;
            print!("{}", bounds_for(target.structure(), target.k, &store));
        }
        Cmd::Sz { n, k } => println!("{}", compute_sz(n, k)?),
        Cmd::Oracle { target } => println!("{}", brute_force_aw(target.structure(), target.k)?),
        Cmd::Hypotheses { n_max } => {
            let store = Store::open(&cli.cache)?;
            for h in report::hypotheses(&store, n_max) {
                print!("{h}");
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let inconclusive = matches!(e.downcast_ref::<Error>(), Some(Error::Inconclusive { .. }));
            if inconclusive {
                println!("inconclusive");
            }
            eprintln!("error: {e:#}");
            ExitCode::from(if inconclusive { 2 } else { 1 })
        }
    }
}

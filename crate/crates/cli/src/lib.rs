//! Front end for `padic-count`: single counts, tables and the selfcheck
//! suites. The binary is a thin wrapper around [`run`].

pub mod field;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use padic_count::counting::{cyclic_count_ef, cyclic_count_total, delta_count};
use padic_count::selfcheck::{self, Grid, SelfcheckConfig};
use padic_count::theorems::{
    expand_iso_ef, expand_iso_total, expand_krasner, expand_tame_gcd_sum, iso_count_ef,
    iso_count_split_sum, iso_count_total, tame_iso_count, Expansion,
};
use padic_count::{Count, CountError, KrasnerQuery, Limits};
use rayon::prelude::*;

use field::{depth_for, depth_up_to, FieldSource};
use output::{Breakdown, QueryEcho, QueryResult, Table, TableCell, TableTotal};

/// Overrides the bit-length cap on intermediate values.
pub const MAX_BITS_ENV: &str = "PADIC_COUNT_MAX_BITS";

#[derive(Debug, Parser)]
#[command(
    name = "padic-count",
    version,
    about = "Exact counts of extensions of p-adic fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a single count.
    Count(CountArgs),
    /// Tabulate counts over a range of (e, f).
    Table(TableArgs),
    /// Run the oracle and consistency suites.
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    IsoEf,
    IsoTotal,
    Krasner,
    CyclicEf,
    CyclicTotal,
    Tame,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::IsoEf => "iso-ef",
            Kind::IsoTotal => "iso-total",
            Kind::Krasner => "krasner",
            Kind::CyclicEf => "cyclic-ef",
            Kind::CyclicTotal => "cyclic-total",
            Kind::Tame => "tame",
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct FieldArgs {
    /// Use Q_p as the base field.
    #[arg(long, value_name = "P")]
    pub qp: Option<u64>,
    /// Read the base field from a JSON profile.
    #[arg(long, value_name = "PATH")]
    pub profile: Option<PathBuf>,
}

impl FieldArgs {
    fn source(&self) -> FieldSource {
        match (&self.qp, &self.profile) {
            (Some(p), _) => FieldSource::Qp(*p),
            (None, Some(path)) => FieldSource::Profile(path.clone()),
            (None, None) => unreachable!("clap requires one field source"),
        }
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    pub kind: Kind,
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub e: Option<u64>,
    #[arg(long)]
    pub f: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    /// Print the individual summands.
    #[arg(long)]
    pub breakdown: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// All (e, f) with e f <= N.
    #[arg(long, value_name = "N", conflicts_with_all = ["e_max", "f_max"], required_unless_present_all = ["e_max", "f_max"])]
    pub n_max: Option<u64>,
    /// All e <= E, paired with --f-max.
    #[arg(long, value_name = "E", requires = "f_max")]
    pub e_max: Option<u64>,
    #[arg(long, value_name = "F", requires = "e_max")]
    pub f_max: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Small,
    Full,
}

#[derive(Debug, Args)]
pub struct SelfcheckArgs {
    #[arg(long, default_value_t = SelfcheckConfig::default().max_abelian_order)]
    pub max_abelian_order: u64,
    #[arg(long, default_value_t = SelfcheckConfig::default().max_table_order)]
    pub max_table_order: usize,
    #[arg(long, value_enum, default_value_t = GridArg::Full)]
    pub grid: GridArg,
    /// Test fixture: perturb the correction table on its diagonal.
    #[arg(long, hide = true)]
    pub corrupt_delta: bool,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let outcome = limits_from_env().and_then(|limits| match &cli.command {
        Command::Count(a) => cmd_count(a, &limits, stdout),
        Command::Table(a) => cmd_table(a, &limits, stdout),
        Command::Selfcheck(a) => cmd_selfcheck(a, &limits, stdout),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            exit_code(&e)
        }
    }
}

/// 3 for the magnitude guard, 1 for failed exactness or consistency checks,
/// 2 for everything else (bad input, short profiles, unreadable files).
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.chain().find_map(|c| c.downcast_ref::<CountError>()) {
        Some(CountError::MagnitudeLimit { .. }) => 3,
        Some(CountError::Consistency(_)) => 1,
        _ => 2,
    }
}

fn limits_from_env() -> Result<Limits> {
    match std::env::var(MAX_BITS_ENV) {
        Ok(v) => {
            let max_bits = v
                .trim()
                .parse()
                .with_context(|| format!("{MAX_BITS_ENV}={v:?} is not a bit count"))?;
            Ok(Limits { max_bits })
        }
        Err(std::env::VarError::NotPresent) => Ok(Limits::default()),
        Err(e) => bail!("{MAX_BITS_ENV}: {e}"),
    }
}

fn need(v: Option<u64>, flag: &str, kind: Kind) -> Result<u64> {
    match v {
        Some(0) => Err(CountError::Domain(format!("--{flag} must be positive")).into()),
        Some(x) => Ok(x),
        None => bail!("{} needs --{flag}", kind.name()),
    }
}

fn reject(v: Option<u64>, flag: &str, kind: Kind) -> Result<()> {
    if v.is_some() {
        bail!("{} does not take --{flag}", kind.name());
    }
    Ok(())
}

pub fn evaluate(a: &CountArgs, limits: &Limits) -> Result<QueryResult> {
    let src = a.field.source();
    let kind = a.kind;
    let (e, f, n, d) = match kind {
        Kind::IsoEf | Kind::Krasner | Kind::CyclicEf | Kind::Tame => {
            reject(a.n, "n", kind)?;
            reject(a.d, "d", kind)?;
            (
                Some(need(a.e, "e", kind)?),
                Some(need(a.f, "f", kind)?),
                None,
                None,
            )
        }
        Kind::IsoTotal => {
            reject(a.e, "e", kind)?;
            reject(a.f, "f", kind)?;
            reject(a.d, "d", kind)?;
            (None, None, Some(need(a.n, "n", kind)?), None)
        }
        Kind::CyclicTotal => {
            reject(a.e, "e", kind)?;
            reject(a.f, "f", kind)?;
            reject(a.n, "n", kind)?;
            (None, None, None, Some(need(a.d, "d", kind)?))
        }
    };

    let (value, expansion, echo): (Count, Option<Expansion>, _) = match kind {
        Kind::IsoEf | Kind::Tame | Kind::Krasner => {
            let (e, f) = (e.unwrap(), f.unwrap());
            let depth = match kind {
                Kind::IsoEf => depth_for(src.prime()?, e)?,
                _ => 0,
            };
            let (k, echo) = src.base(depth)?;
            let x = match kind {
                Kind::IsoEf => expand_iso_ef(&k, e, f, limits)?,
                Kind::Tame => {
                    // debug builds cross-check both tame forms here
                    let checked = tame_iso_count(&k, e, f)?;
                    let x = expand_tame_gcd_sum(&k, e, f)?;
                    if x.value != checked {
                        return Err(CountError::Consistency(format!(
                            "tame forms disagree at e={e}, f={f}"
                        ))
                        .into());
                    }
                    x
                }
                _ => expand_krasner(
                    &KrasnerQuery {
                        p: k.p,
                        n0: k.n0,
                        e,
                        f,
                    },
                    limits,
                )?,
            };
            (x.value.clone(), Some(x), echo)
        }
        Kind::IsoTotal => {
            let n = n.unwrap();
            let (k, echo) = src.base(depth_for(src.prime()?, n)?)?;
            let x = expand_iso_total(&k, n, limits)?;
            (x.value.clone(), Some(x), echo)
        }
        Kind::CyclicEf => {
            let (field, echo) = src.cyclic()?;
            (
                cyclic_count_ef(&field, e.unwrap(), f.unwrap(), limits)?,
                None,
                echo,
            )
        }
        Kind::CyclicTotal => {
            let (field, echo) = src.cyclic()?;
            (cyclic_count_total(&field, d.unwrap(), limits)?, None, echo)
        }
    };

    Ok(QueryResult {
        query: QueryEcho {
            kind: kind.name().to_string(),
            field: echo,
            e,
            f,
            n,
            d,
        },
        value,
        breakdown: if a.breakdown {
            expansion.map(Breakdown::from)
        } else {
            None
        },
    })
}

fn cmd_count(a: &CountArgs, limits: &Limits, out: &mut dyn Write) -> Result<i32> {
    let result = evaluate(a, limits)?;
    if a.json {
        writeln!(out, "{}", result.to_json())?;
    } else {
        write!(out, "{}", result.to_text())?;
    }
    Ok(0)
}

/// Cells in output order: by degree `n = e f`, then by `e`.
fn table_cells(a: &TableArgs) -> Result<(Vec<(u64, u64)>, u64)> {
    let mut cells = Vec::new();
    let totals_to = match (a.n_max, a.e_max, a.f_max) {
        (Some(n_max), _, _) => {
            if n_max == 0 {
                return Err(CountError::Domain("--n-max must be positive".into()).into());
            }
            for n in 1..=n_max {
                for e in padic_count::arith::divisors(n) {
                    cells.push((e, n / e));
                }
            }
            n_max
        }
        (None, Some(e_max), Some(f_max)) => {
            if e_max == 0 || f_max == 0 {
                return Err(
                    CountError::Domain("--e-max and --f-max must be positive".into()).into(),
                );
            }
            for e in 1..=e_max {
                for f in 1..=f_max {
                    cells.push((e, f));
                }
            }
            cells.sort_by_key(|&(e, f)| (e * f, e));
            e_max.min(f_max)
        }
        _ => bail!("table needs --n-max or both --e-max and --f-max"),
    };
    Ok((cells, totals_to))
}

pub fn build_table(a: &TableArgs, limits: &Limits) -> Result<Table> {
    let src = a.field.source();
    let (cells, totals_to) = table_cells(a)?;
    let largest = cells
        .iter()
        .map(|&(e, _)| e)
        .max()
        .unwrap_or(1)
        .max(totals_to);
    let (k, echo) = src.base(depth_up_to(src.prime()?, largest))?;

    let rows: Vec<TableCell> = cells
        .par_iter()
        .map(|&(e, f)| -> padic_count::Result<TableCell> {
            Ok(TableCell {
                e,
                f,
                n: e * f,
                krasner: padic_count::counting::krasner_count(
                    &KrasnerQuery {
                        p: k.p,
                        n0: k.n0,
                        e,
                        f,
                    },
                    limits,
                )?,
                iso: iso_count_ef(&k, e, f, limits)?,
            })
        })
        .collect::<padic_count::Result<_>>()?;

    let totals: Vec<TableTotal> = (1..=totals_to)
        .into_par_iter()
        .map(|n| -> padic_count::Result<TableTotal> {
            Ok(TableTotal {
                n,
                iso_total: iso_count_total(&k, n, limits)?,
                iso_sum: iso_count_split_sum(&k, n, limits)?,
            })
        })
        .collect::<padic_count::Result<_>>()?;

    if let Some(t) = totals.iter().find(|t| t.iso_total != t.iso_sum) {
        return Err(CountError::Consistency(format!(
            "degree {}: total {} but the (e, f) cells sum to {}",
            t.n, t.iso_total, t.iso_sum
        ))
        .into());
    }
    Ok(Table {
        field: echo,
        cells: rows,
        totals,
    })
}

fn cmd_table(a: &TableArgs, limits: &Limits, out: &mut dyn Write) -> Result<i32> {
    let table = build_table(a, limits)?;
    let text = match a.format {
        Format::Json => format!("{}\n", table.to_json()),
        Format::Csv => table.to_csv(),
    };
    match &a.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn corrupted_delta(p: u64, m: u64, s: u32, i: u32, limits: &Limits) -> padic_count::Result<Count> {
    let v = delta_count(p, m, s, i, limits)?;
    Ok(if s == i && i > 0 {
        &v + &Count::one()
    } else {
        v
    })
}

fn cmd_selfcheck(a: &SelfcheckArgs, limits: &Limits, out: &mut dyn Write) -> Result<i32> {
    let config = SelfcheckConfig {
        max_abelian_order: a.max_abelian_order,
        max_table_order: a.max_table_order,
        grid: match a.grid {
            GridArg::Small => Grid::Small,
            GridArg::Full => Grid::Full,
        },
        limits: *limits,
        delta: if a.corrupt_delta {
            corrupted_delta
        } else {
            delta_count
        },
    };
    let report = selfcheck::run(&config);
    for suite in &report.suites {
        writeln!(out, "{suite}")?;
        if !suite.coverage.is_empty() {
            writeln!(out, "  covers: {}", suite.coverage.join(" "))?;
        }
    }
    match report.first_failure() {
        None => {
            writeln!(out, "all suites pass")?;
            Ok(0)
        }
        Some(s) => {
            writeln!(
                out,
                "counterexample in {}: {}",
                s.name,
                s.failure.as_deref().unwrap_or("")
            )?;
            Ok(1)
        }
    }
}

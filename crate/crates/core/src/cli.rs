//! Command-line front end. Every command writes to a caller-supplied sink so
//! that runs are reproducible and testable.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::ar::{ar_dot, ar_edges, irreducible_maps, ArError};
use crate::bands::{band_band, band_string_dim, BandError, BandSpec, Direction};
use crate::complex::{build_complex, ComplexError};
use crate::field::{FieldChoice, FieldError};
use crate::hom::{analyze_words, basis_json, hom_dim, HomError};
use crate::oracle::{oracle_hom_dim_words, OracleError};
use crate::quiver::{discrete_algebra, parse_algebra, GentleAlgebra, QuiverError};
use crate::words::{enumerate_words, parse_word, Word, WordError, WordKind};
use crate::SCHEMA_VERSION;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for domain errors and failed comparisons.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit code for usage errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("output failed: {0}")]
    Output(#[from] std::io::Error),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Band(#[from] BandError),
    #[error(transparent)]
    Ar(#[from] ArError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid bounds: {0}")]
    Bounds(String),
    #[error("mismatch on {v} -> {w}: combinatorial {combinatorial}, oracle {oracle}")]
    Mismatch { v: String, w: String, combinatorial: usize, oracle: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "gentle", version, about = "Morphism spaces and irreducible maps for gentle algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Enumeration window shared by sweeping commands.
#[derive(Debug, Clone, clap::Args)]
pub struct Window {
    /// Maximal number of letters.
    #[arg(long, default_value_t = 3)]
    pub max_letters: usize,
    /// Lowest degree.
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub lo: i32,
    /// Highest degree.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub hi: i32,
    /// Include one-dimensional bands with scalar 1.
    #[arg(long)]
    pub bands: bool,
}

impl Window {
    fn validate(&self) -> Result<(), CliError> {
        if self.max_letters == 0 {
            return Err(CliError::Bounds("--max-letters must be positive".into()));
        }
        if self.lo > self.hi {
            return Err(CliError::Bounds(format!("empty degree window [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }

    fn words(&self, alg: &GentleAlgebra) -> Result<Vec<Word>, CliError> {
        self.validate()?;
        let (mut strings, bands) = enumerate_words(alg, self.max_letters, self.lo, self.hi);
        if self.bands {
            strings.extend(bands);
        }
        Ok(strings)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an algebra file.
    Check { algebra: PathBuf },
    /// Canonical basis of morphisms between two words as JSON.
    Basis { algebra: PathBuf, v: String, w: String },
    /// Dimension of the morphism space between two words.
    Homdim {
        algebra: PathBuf,
        v: String,
        w: String,
        /// Also compute the dimension with the oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value = "gfp:32003")]
        field: FieldChoice,
    },
    /// Pairwise dimensions over a window.
    Table {
        algebra: PathBuf,
        #[command(flatten)]
        window: Window,
        /// Add an oracle column.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value = "gfp:32003")]
        field: FieldChoice,
    },
    /// Dimension grid for bands of dimensions up to the given bounds.
    Bands {
        algebra: PathBuf,
        /// Source band literal.
        x: String,
        /// Target band or string literal; defaults to the source.
        y: Option<String>,
        #[arg(long, default_value_t = 3)]
        r_max: usize,
        #[arg(long, default_value_t = 3)]
        s_max: usize,
        /// Suspensions applied to the target.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i32,
    },
    /// Irreducible maps starting at each word in a window.
    Ar {
        algebra: PathBuf,
        #[command(flatten)]
        window: Window,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Compare combinatorial dimensions with the oracle over a window.
    OracleCompare {
        algebra: PathBuf,
        #[command(flatten)]
        window: Window,
        #[arg(long, default_value = "gfp:32003")]
        field: FieldChoice,
    },
    /// Print or sweep a discrete derived algebra.
    Discrete {
        r: usize,
        n: usize,
        m: usize,
        /// Print the pairwise dimension table instead of the algebra.
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        window: Window,
    },
    /// Complex of a word as JSON or its unfolded diagram as DOT.
    Complex {
        algebra: PathBuf,
        word: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn load(path: &PathBuf) -> Result<GentleAlgebra, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(parse_algebra(&text)?)
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

/// Source index, target index, engine dimension and optional oracle dimension.
type SweepRow = (usize, usize, usize, Option<usize>);

/// Pairwise dimensions in enumeration order, computed in parallel.
fn sweep(alg: &GentleAlgebra, words: &[Word], field: Option<FieldChoice>) -> Result<Vec<SweepRow>, CliError> {
    let pairs: Vec<(usize, usize)> = (0..words.len()).flat_map(|i| (0..words.len()).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = hom_dim(alg, &words[i], &words[j])?;
            let o = match field {
                Some(f) => Some(oracle_hom_dim_words(alg, &words[i], &words[j], f)?),
                None => None,
            };
            Ok((i, j, d, o))
        })
        .collect()
}

fn write_table(
    out: &mut dyn Write,
    alg: &GentleAlgebra,
    words: &[Word],
    rows: &[(usize, usize, usize, Option<usize>)],
) -> Result<(), CliError> {
    let oracle = rows.first().is_some_and(|r| r.3.is_some());
    if oracle {
        writeln!(out, "source\ttarget\tdim_combinatorial\tdim_oracle")?;
    } else {
        writeln!(out, "source\ttarget\tdim_combinatorial")?;
    }
    for &(i, j, d, o) in rows {
        let (v, w) = (words[i].literal(alg), words[j].literal(alg));
        match o {
            Some(o) => writeln!(out, "{v}\t{w}\t{d}\t{o}")?,
            None => writeln!(out, "{v}\t{w}\t{d}")?,
        }
    }
    Ok(())
}

/// Execute a parsed command.
pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Check { algebra } => {
            let alg = load(algebra)?;
            for w in &alg.warnings {
                writeln!(out, "warning: {w}")?;
            }
            writeln!(out, "gentle: OK, |C(Λ)|={}", alg.cycle_arrows().len())?;
        }
        Command::Basis { algebra, v, w } => {
            let alg = load(algebra)?;
            let (v, w) = (parse_word(&alg, v)?, parse_word(&alg, w)?);
            let (p, an) = analyze_words(&alg, &v, &w)?;
            writeln!(out, "{}", pretty(&basis_json(&alg, &p, &an.theta)))?;
        }
        Command::Homdim { algebra, v, w, oracle, field } => {
            let alg = load(algebra)?;
            let (v, w) = (parse_word(&alg, v)?, parse_word(&alg, w)?);
            let d = hom_dim(&alg, &v, &w)?;
            if *oracle {
                let o = oracle_hom_dim_words(&alg, &v, &w, *field)?;
                writeln!(out, "{d}\t{o}")?;
                if d != o {
                    return Err(CliError::Mismatch { v: v.literal(&alg), w: w.literal(&alg), combinatorial: d, oracle: o });
                }
            } else {
                writeln!(out, "{d}")?;
            }
        }
        Command::Table { algebra, window, oracle, field } => {
            let alg = load(algebra)?;
            let words = window.words(&alg)?;
            let rows = sweep(&alg, &words, oracle.then_some(*field))?;
            write_table(out, &alg, &words, &rows)?;
        }
        Command::Bands { algebra, x, y, r_max, s_max, shift } => {
            let alg = load(algebra)?;
            if *r_max == 0 || *s_max == 0 {
                return Err(CliError::Bounds("dimension bounds must be positive".into()));
            }
            let xw = parse_word(&alg, x)?;
            let yw = match y {
                Some(y) => parse_word(&alg, y)?,
                None => xw.clone(),
            }
            .shift(*shift);
            let xs = BandSpec::from_word(&xw)?;
            if yw.kind == WordKind::Band {
                let ys = BandSpec::from_word(&yw)?;
                writeln!(out, "r\ts\tdim\tregime")?;
                for r in 1..=*r_max {
                    for s in 1..=*s_max {
                        let d = band_band(&alg, &BandSpec { r, ..xs.clone() }, &BandSpec { r: s, ..ys.clone() })?;
                        let regime = serde_json::to_value(d.regime).expect("regime serializes");
                        writeln!(out, "{r}\t{s}\t{}\t{}", d.dim, regime.as_str().unwrap_or_default())?;
                    }
                }
            } else {
                writeln!(out, "r\tdim_to\tdim_from")?;
                for r in 1..=*r_max {
                    let b = BandSpec { r, ..xs.clone() };
                    let to = band_string_dim(&alg, &b, &yw, Direction::To)?;
                    let from = band_string_dim(&alg, &b, &yw, Direction::From)?;
                    writeln!(out, "{r}\t{to}\t{from}")?;
                }
            }
        }
        Command::Ar { algebra, window, format } => {
            let alg = load(algebra)?;
            let words = window.words(&alg)?;
            match format {
                Format::Dot => write!(out, "{}", ar_dot(&ar_edges(&alg, &words)))?,
                Format::Json | Format::Tsv => {
                    let mut items = Vec::new();
                    for w in &words {
                        for (o, trace) in irreducible_maps(&alg, w) {
                            items.push(serde_json::json!({
                                "source": w.literal(&alg),
                                "source_key": w.canonical_key(&alg),
                                "target": o.target.literal(&alg),
                                "target_key": o.target.canonical_key(&alg),
                                "trace": trace.to_json(&alg),
                            }));
                        }
                    }
                    if *format == Format::Json {
                        let doc = serde_json::json!({ "schema_version": SCHEMA_VERSION, "maps": items });
                        writeln!(out, "{}", pretty(&doc))?;
                    } else {
                        writeln!(out, "source\ttarget\tsteps")?;
                        for i in &items {
                            let steps: Vec<&str> =
                                i["trace"]["steps"].as_array().into_iter().flatten().filter_map(|s| s.as_str()).collect();
                            writeln!(out, "{}\t{}\t{}", i["source"].as_str().unwrap(), i["target"].as_str().unwrap(), steps.join(","))?;
                        }
                    }
                }
            }
        }
        Command::OracleCompare { algebra, window, field } => {
            let alg = load(algebra)?;
            let words: Vec<Word> = window.words(&alg)?;
            let rows = sweep(&alg, &words, Some(*field))?;
            if let Some(&(i, j, d, Some(o))) = rows.iter().find(|r| r.3 != Some(r.2)) {
                writeln!(out, "{}\t{}\t{d}\t{o}", words[i].literal(&alg), words[j].literal(&alg))?;
                return Err(CliError::Mismatch { v: words[i].literal(&alg), w: words[j].literal(&alg), combinatorial: d, oracle: o });
            }
            writeln!(out, "agree: {} pairs over {field}", rows.len())?;
        }
        Command::Discrete { r, n, m, table, window } => {
            let alg = discrete_algebra(*r, *n, *m)?;
            if *table {
                let words = window.words(&alg)?;
                let rows = sweep(&alg, &words, None)?;
                write_table(out, &alg, &words, &rows)?;
            } else {
                write!(out, "{}", alg.to_dsl())?;
            }
        }
        Command::Complex { algebra, word, format } => {
            let alg = load(algebra)?;
            let w = parse_word(&alg, word)?;
            if !w.is_finite() {
                return Err(CliError::Bounds("complex export needs a finite word".into()));
            }
            let c = build_complex(&alg, &w, None)?;
            match format {
                Format::Dot => write!(out, "{}", c.diagram.to_dot(&alg, "complex"))?,
                _ => writeln!(out, "{}", pretty(&c.to_json(&alg)))?,
            }
        }
    }
    Ok(())
}

/// Parse arguments, run, and return the process exit code. Usage errors go
/// to `err` with code 2, domain errors with code 1.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                CliError::Bounds(_) => EXIT_USAGE,
                _ => EXIT_DOMAIN,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("gentle").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["homdim", "x.quiver"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["discrete", "1", "1", "1", "--table", "--max-letters", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["discrete", "1", "1", "1", "--table", "--lo", "2", "--hi", "1"]).0, EXIT_USAGE);
    }

    #[test]
    fn domain_errors_exit_one() {
        let (code, _, err) = run_args(&["discrete", "0", "1", "1"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("invalid parameters"));
        assert_eq!(run_args(&["check", "/nonexistent/algebra.quiver"]).0, EXIT_DOMAIN);
    }

    #[test]
    fn help_and_version_succeed() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("oracle-compare"));
        assert_eq!(run_args(&["--version"]).0, EXIT_OK);
    }

    #[test]
    fn discrete_prints_its_algebra() {
        let (code, out, _) = run_args(&["discrete", "1", "3", "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("relation b_0 b_2"));
    }
}

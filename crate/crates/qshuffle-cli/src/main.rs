//! `qshuffle`: alphabets, Hopf operations, Teugels orthogonalization and
//! pathwise verification for families of independent Lévy processes.
//!
//! Exit codes: 0 success, 1 validation/usage error, 2 internal invariant
//! violation. Results go to stdout, diagnostics to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use qshuffle::algebra::{antipode, hoffman_exp, hoffman_log, quasi_shuffle, shuffle, Poly};
use qshuffle::alphabet::{build_alphabet, Alphabet, AlphabetError};
use qshuffle::config::{load_config, Config};
use qshuffle::levy::LevySpec;
use qshuffle::pathsim::{verify_product, VerifyParams};
use qshuffle::rational::{parse_rational, render_rational, Rational};
use qshuffle::teugels::{gram_data, gram_matrix, span_expansion, GramData};

#[derive(Parser)]
#[command(
    name = "qshuffle",
    version,
    about = "Quasi-shuffle algebras generated by independent Levy processes"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Letters, grades, provenance, bracket table, graded verdict.
    Alphabet { config: PathBuf },
    /// Quasi-shuffle product of two words (dot-joined labels, e.g. x1.x1.t).
    Mul { config: PathBuf, v: String, w: String },
    /// Shuffle product (zero bracket) of two words.
    Shuffle { config: PathBuf, v: String, w: String },
    /// Hoffman exponential of a word.
    Exp { config: PathBuf, word: String },
    /// Hoffman logarithm of a word.
    Log { config: PathBuf, word: String },
    /// Antipode of a word.
    Antipode { config: PathBuf, word: String },
    /// Gram matrix of Teugels sharp brackets for one process.
    Gram { config: PathBuf, name: String, n: usize },
    /// Strong orthogonalization: G, C and the norms h, all exact.
    Orthogonalize { config: PathBuf, name: String, n: usize },
    /// Span expansion of [X]^(order) over {t, [X]^(1), ..., [X]^(k0-1)}.
    Expand { config: PathBuf, name: String, order: usize },
    /// Pathwise check of I_v * I_w = I_{quasi_shuffle(v, w)}.
    Verify {
        config: PathBuf,
        v: String,
        w: String,
        /// Number of sampled paths (default from config).
        #[arg(long)]
        paths: Option<usize>,
        /// Time horizon, a rational like "1" or "3/2".
        #[arg(long = "T")]
        horizon: Option<String>,
        /// Master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Grid step for diffusive families, a rational like "1/10000".
        #[arg(long)]
        dt: Option<String>,
        /// Exact rational arithmetic (pure-jump families only).
        #[arg(long)]
        exact: bool,
    },
}

enum CliError {
    Validation(String),
    Internal(String),
}

impl CliError {
    fn validation(e: impl std::fmt::Display) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<AlphabetError> for CliError {
    fn from(e: AlphabetError) -> Self {
        match e {
            AlphabetError::Internal(_) => CliError::Internal(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<Config, CliError> {
    load_config(path).map_err(CliError::validation)
}

fn alphabet_of(cfg: &Config) -> Result<Alphabet, CliError> {
    Ok(build_alphabet(&cfg.processes, cfg.max_grade)?)
}

fn find_process<'a>(cfg: &'a Config, name: &str) -> Result<&'a LevySpec, CliError> {
    cfg.process_by_name(name).ok_or_else(|| {
        let known: Vec<&str> = cfg.processes.iter().map(|s| s.name.as_str()).collect();
        CliError::Validation(format!(
            "no process named `{name}`; known processes: {}",
            known.join(", ")
        ))
    })
}

fn print_poly(alpha: &Alphabet, p: &Poly, as_json: bool) {
    if as_json {
        let dto = alpha.table().poly_to_dto(p);
        println!("{}", serde_json::to_string_pretty(&dto).expect("poly serializes"));
    } else {
        println!("{}", alpha.table().render_poly(p));
    }
}

fn word_pair_op(
    config: &Path,
    v: &str,
    w: &str,
    as_json: bool,
    op: impl Fn(&Alphabet, &Poly, &Poly) -> Result<Poly, CliError>,
) -> Result<(), CliError> {
    let cfg = load(config)?;
    let alpha = alphabet_of(&cfg)?;
    let pv = Poly::from_word(alpha.word_from_labels(v)?);
    let pw = Poly::from_word(alpha.word_from_labels(w)?);
    let out = op(&alpha, &pv, &pw)?;
    print_poly(&alpha, &out, as_json);
    Ok(())
}

fn word_op(
    config: &Path,
    word: &str,
    as_json: bool,
    op: impl Fn(&Alphabet, &Poly) -> Result<Poly, CliError>,
) -> Result<(), CliError> {
    let cfg = load(config)?;
    let alpha = alphabet_of(&cfg)?;
    let p = Poly::from_word(alpha.word_from_labels(word)?);
    let out = op(&alpha, &p)?;
    print_poly(&alpha, &out, as_json);
    Ok(())
}

fn matrix_json(m: &[Vec<Rational>]) -> serde_json::Value {
    json!(m
        .iter()
        .map(|row| row.iter().map(render_rational).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn print_matrix(name: &str, m: &[Vec<Rational>]) {
    println!("{name} =");
    for row in m {
        let cells: Vec<String> = row.iter().map(render_rational).collect();
        println!("  [ {} ]", cells.join(", "));
    }
}

/// Gram data with truncation large enough to expose the first degeneracy
/// when the supplied moments allow it.
fn gram_for_expansion(spec: &LevySpec, order: usize) -> Result<GramData, CliError> {
    let mut n = order;
    loop {
        match gram_data(spec, n) {
            Ok(gd) => return Ok(gd),
            Err(qshuffle::teugels::TeugelsError::Levy(
                qshuffle::levy::LevyError::MomentUnavailable { .. },
            )) if n > 1 => n -= 1,
            Err(e) => return Err(CliError::validation(e)),
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.cmd {
        Cmd::Alphabet { config } => {
            let cfg = load(config)?;
            let alpha = alphabet_of(&cfg)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&alpha.to_dto()).expect("alphabet serializes")
                );
            } else {
                print!("{}", alpha.render_text());
            }
            Ok(())
        }
        Cmd::Mul { config, v, w } => word_pair_op(config, v, w, cli.json, |a, p, q| {
            quasi_shuffle(p, q, a.table()).map_err(CliError::validation)
        }),
        Cmd::Shuffle { config, v, w } => {
            word_pair_op(config, v, w, cli.json, |_, p, q| Ok(shuffle(p, q)))
        }
        Cmd::Exp { config, word } => word_op(config, word, cli.json, |a, p| {
            hoffman_exp(p, a.table()).map_err(CliError::validation)
        }),
        Cmd::Log { config, word } => word_op(config, word, cli.json, |a, p| {
            hoffman_log(p, a.table()).map_err(CliError::validation)
        }),
        Cmd::Antipode { config, word } => word_op(config, word, cli.json, |a, p| {
            let mut out = Poly::zero();
            for (w, c) in p.terms() {
                let s = antipode(w, a.table()).map_err(CliError::validation)?;
                out.add_scaled_assign(&s, c);
            }
            Ok(out)
        }),
        Cmd::Gram { config, name, n } => {
            let cfg = load(config)?;
            let spec = find_process(&cfg, name)?;
            let g = gram_matrix(spec, *n).map_err(CliError::validation)?;
            if cli.json {
                let v = json!({ "name": name, "n": n, "gram": matrix_json(&g) });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
            } else {
                print_matrix("G", &g);
            }
            Ok(())
        }
        Cmd::Orthogonalize { config, name, n } => {
            let cfg = load(config)?;
            let spec = find_process(&cfg, name)?;
            let gd = gram_data(spec, *n).map_err(CliError::validation)?;
            if cli.json {
                let v = json!({
                    "name": name,
                    "n": n,
                    "gram": matrix_json(gd.gram()),
                    "c": matrix_json(gd.c_matrix()),
                    "h": gd.norms().iter().map(render_rational).collect::<Vec<_>>(),
                    "first_zero_order": gd.first_zero_index(),
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
            } else {
                print_matrix("G", gd.gram());
                print_matrix("C", gd.c_matrix());
                let h: Vec<String> = gd.norms().iter().map(render_rational).collect();
                println!("h = [ {} ]", h.join(", "));
                match gd.first_zero_index() {
                    Some(k) => println!("first zero norm: order {k}"),
                    None => println!("no degeneracy within truncation order {n}"),
                }
            }
            Ok(())
        }
        Cmd::Expand { config, name, order } => {
            let cfg = load(config)?;
            let spec = find_process(&cfg, name)?;
            let gd = gram_for_expansion(spec, *order)?;
            let coeffs = span_expansion(spec, *order, &gd).map_err(CliError::validation)?;
            let mut basis = vec!["t".to_string()];
            for k in 1..coeffs.len() {
                basis.push(if k == 1 {
                    name.clone()
                } else {
                    format!("{name}^{k}")
                });
            }
            if cli.json {
                let v = json!({
                    "name": name,
                    "order": order,
                    "basis": basis,
                    "coefficients": coeffs.iter().map(render_rational).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("serializes"));
            } else {
                let terms: Vec<String> = basis
                    .iter()
                    .zip(&coeffs)
                    .map(|(b, c)| format!("{} ({b})", render_rational(c)))
                    .collect();
                println!("[{name}]^({order}) = {}", terms.join(" + "));
            }
            Ok(())
        }
        Cmd::Verify { config, v, w, paths, horizon, seed, dt, exact } => {
            let cfg = load(config)?;
            let alpha = alphabet_of(&cfg)?;
            let wv = alpha.word_from_labels(v)?;
            let ww = alpha.word_from_labels(w)?;
            let horizon = match horizon {
                Some(t) => parse_rational(t)
                    .map_err(|e| CliError::Validation(format!("--T: {e}")))?,
                None => cfg.defaults.horizon.clone(),
            };
            let dt = match dt {
                Some(h) => Some(
                    parse_rational(h).map_err(|e| CliError::Validation(format!("--dt: {e}")))?,
                ),
                None => cfg.defaults.dt.clone(),
            };
            let params = VerifyParams {
                n_paths: paths.unwrap_or(cfg.defaults.paths),
                horizon,
                seed: seed.unwrap_or(cfg.defaults.seed),
                dt,
                exact: *exact,
            };
            let report =
                verify_product(&wv, &ww, &alpha, &params).map_err(CliError::validation)?;
            if cli.json {
                let out = json!({
                    "v": v,
                    "w": w,
                    "n_paths": report.n_paths,
                    "max_abs_error": report.max_abs_error,
                    "rms_error": report.rms_error,
                    "exact": report.exact,
                });
                println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
            } else {
                println!("{report}");
            }
            Ok(())
        }
    }
}

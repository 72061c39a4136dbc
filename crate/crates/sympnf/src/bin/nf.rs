use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use sympnf::class_data::enumerate_classes;
use sympnf::intersection::adapted_intersection;
use sympnf::matrix::{standard_j, IntMatrix};
use sympnf::normal_form::{candidate_check, normal_form};
use sympnf::render::{
    csv_header, csv_row, presentation_json, render, result_json, verdict_json, Format,
};
use sympnf::{class_data, Error};

/// Canonical symplectic matrices for prime-order mapping classes.
#[derive(Parser)]
#[command(name = "nf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the canonical matrix for one class.
    Compute {
        #[arg(short, long)]
        p: i64,
        /// Rotation tuple, comma separated (empty for a free action).
        #[arg(short, long, default_value = "")]
        n: String,
        #[arg(long, default_value_t = 0)]
        g0: i64,
        #[arg(long, default_value = "text")]
        format: String,
        /// Emit one JSON record per reduction iteration to stderr.
        #[arg(long)]
        trace_steps: bool,
    },
    /// Enumerate all admissible classes of a genus and compute their forms.
    Enumerate {
        #[arg(short, long)]
        g: i64,
        #[arg(short, long)]
        p: Option<i64>,
        /// Sweep every prime up to 2g + 1.
        #[arg(long)]
        all_primes: bool,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Emit the adapted presentation of a class.
    Presentation {
        #[arg(short, long)]
        p: i64,
        #[arg(short, long, default_value = "")]
        n: String,
        #[arg(long, default_value_t = 0)]
        g0: i64,
    },
    /// Emit the adapted intersection matrix of a class.
    Intersection {
        #[arg(short, long)]
        p: i64,
        #[arg(short, long, default_value = "")]
        n: String,
        #[arg(long, default_value_t = 0)]
        g0: i64,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Screen a symplectic matrix for finite-order preimages.
    Check {
        /// JSON matrix file: array of rows of integers or decimal strings.
        #[arg(long)]
        matrix: PathBuf,
        /// Symplectic form file; defaults to the standard form of matching size.
        #[arg(long)]
        j: Option<PathBuf>,
    },
}

fn parse_tuple(s: &str) -> Result<Vec<i64>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad tuple entry {x:?}")))
        })
        .collect()
}

fn load_matrix(path: &PathBuf) -> Result<IntMatrix, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    IntMatrix::from_json(&value)
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Compute {
            p,
            n,
            g0,
            format,
            trace_steps,
        } => {
            let n = parse_tuple(&n)?;
            let result = normal_form(p, &n, g0)?;
            if trace_steps {
                let mut stderr = std::io::stderr().lock();
                for (i, s) in result.steps.iter().enumerate() {
                    let rec = json!({
                        "iteration": i + 1,
                        "a": s.a.to_string(),
                        "b": s.b.to_string(),
                        "tight": s.tight_shortcut,
                        "separators": s.separator_lengths,
                        "basis_change_det": s.basis_change_det.to_string(),
                        "columns_changed": s.columns_changed,
                    });
                    writeln!(stderr, "{rec}").ok();
                }
            }
            let fmt: Format = format.parse()?;
            stdout.write_all(&render(&result, fmt)?).ok();
            Ok(())
        }
        Command::Enumerate {
            g,
            p,
            all_primes,
            format,
        } => {
            let primes: Vec<i64> = if all_primes {
                (2..=2 * g + 1)
                    .filter(|&x| class_data::is_prime(x))
                    .collect()
            } else {
                vec![p.ok_or_else(|| Error::Validation("give -p or --all-primes".into()))?]
            };
            let fmt: Format = format.parse()?;
            let mut results = Vec::new();
            for p in primes {
                for class in enumerate_classes(g, p)? {
                    results.push(normal_form(class.p, &class.n, class.g0)?);
                }
            }
            match fmt {
                Format::Csv => {
                    stdout.write_all(csv_header().as_bytes()).ok();
                    for r in &results {
                        stdout.write_all(csv_row(r).as_bytes()).ok();
                    }
                }
                Format::Json => {
                    let v: Vec<_> = results.iter().map(result_json).collect();
                    writeln!(
                        stdout,
                        "{}",
                        serde_json::to_string_pretty(&v).expect("serializable")
                    )
                    .ok();
                }
                Format::Text => {
                    for r in &results {
                        stdout.write_all(&render(r, Format::Text)?).ok();
                        writeln!(stdout).ok();
                    }
                }
            }
            Ok(())
        }
        Command::Presentation { p, n, g0 } => {
            let n = parse_tuple(&n)?;
            let result = normal_form(p, &n, g0)?;
            let pres = result
                .presentation
                .as_ref()
                .expect("pipeline always builds a presentation");
            writeln!(
                stdout,
                "{}",
                serde_json::to_string_pretty(&presentation_json(pres)).expect("serializable")
            )
            .ok();
            Ok(())
        }
        Command::Intersection { p, n, g0, format } => {
            let n = parse_tuple(&n)?;
            let class = class_data::validate_class(p, &n, g0)?;
            if class.t() == 0 {
                // free action: the adapted basis is already canonical
                let j = standard_j(class.g as usize, 0);
                emit_matrix(&mut stdout, &j, &format)?;
                return Ok(());
            }
            // the pairing depends only on the multiplicities, so the class
            // is used as given (no normalization)
            let j = adapted_intersection(&class)?;
            emit_matrix(&mut stdout, &j, &format)?;
            Ok(())
        }
        Command::Check { matrix, j } => {
            let m = load_matrix(&matrix)?;
            let j = match j {
                Some(path) => load_matrix(&path)?,
                None => {
                    if m.rows() % 2 != 0 {
                        return Err(Error::Validation("matrix size must be even".into()));
                    }
                    standard_j(m.rows() / 2, 0)
                }
            };
            let verdict = candidate_check(&m, &j)?;
            writeln!(
                stdout,
                "{}",
                serde_json::to_string_pretty(&verdict_json(&verdict)).expect("serializable")
            )
            .ok();
            Ok(())
        }
    }
}

fn emit_matrix(out: &mut impl Write, m: &IntMatrix, format: &str) -> Result<(), Error> {
    match format.parse()? {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&m.to_json()).expect("serializable")
        )
        .ok(),
        _ => write!(out, "{m}").ok(),
    };
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! Command-line front end: runs named verification suites with explicit
//! seeds, applies compositions described by JSON envelopes, evaluates
//! entropies, and builds code spaces. Reports are machine-readable JSON;
//! identical (command, seed, scale) invocations emit byte-identical
//! output (timings go to stderr).

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use sha2::{Digest, Sha256};

use opkit::codes;
use opkit::json::{ComposeEnvelope, MatrixDto, MeasurementNodeDto, OmegaDto};
use opkit::prob::{self, EntropyFamily, ProbVector};
use opkit::suites::{self, Scale};
use opkit::trees::PlanarTree;

#[derive(Parser)]
#[command(
    name = "opkit",
    version,
    about = "Operadic structures with executable verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the verification suites and the laws they check.
    List,
    /// Run one verification suite deterministically.
    Verify {
        /// Suite id from `list`.
        #[arg(long)]
        suite: String,
        /// RNG seed; runs are reproducible, never wall-clock seeded.
        #[arg(long)]
        seed: u64,
        /// Size profile: small (CI) or full (nightly).
        #[arg(long, default_value = "small")]
        scale: String,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply a composition described by a JSON envelope (file or stdin).
    Compose {
        /// Envelope file; standard input when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate entropy functionals on probability vectors or states.
    Entropy {
        /// shannon, renyi, or tsallis.
        #[arg(long)]
        family: String,
        /// Order parameter for renyi/tsallis.
        #[arg(long)]
        q: Option<f64>,
        /// Comma-separated probability vector.
        #[arg(long)]
        prob: Option<String>,
        /// Density matrix JSON file.
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Planar tree JSON file: tree-indexed classical entropy.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Measurement tree JSON file (with --matrix): quantum tree entropy.
        #[arg(long)]
        mtree: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Code-space constructions.
    Codes {
        #[command(subcommand)]
        cmd: CodesCmd,
    },
}

#[derive(Subcommand)]
enum CodesCmd {
    /// Build the common eigenspace of the gated translation operators.
    Build {
        /// Pairing table JSON file ({"p":..,"N":..,"table":[[..]]}).
        #[arg(long)]
        omega: PathBuf,
        /// Character index 0..p-1.
        #[arg(long)]
        chi: usize,
        /// Comma-separated base-p encoded vectors, e.g. "1,2".
        #[arg(long)]
        tuple: String,
        /// Comma-separated eigenvalues: integer k means exp(2 pi i k/p),
        /// or an explicit complex literal like "-0.5+0.87i".
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::List => {
            for def in suites::registry() {
                println!("{:32} {}", def.id, def.law);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            suite,
            seed,
            scale,
            out,
        } => {
            let scale = parse_scale(&scale)?;
            let report = suites::run_suite(&suite, seed, scale).map_err(|e| e.to_string())?;
            let payload = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            emit(&payload, out.as_deref())?;
            eprintln!(
                "suite {} finished in {} ms: {} cases, {} failures",
                report.suite,
                report.wall_ms,
                report.cases,
                report.failures.len()
            );
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Compose { input, out } => {
            let raw = match input {
                Some(path) => {
                    fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?
                }
                None => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| e.to_string())?;
                    buf
                }
            };
            let envelope: ComposeEnvelope =
                serde_json::from_str(&raw).map_err(|e| format!("envelope: {e}"))?;
            let result = envelope.dispatch().map_err(|e| e.to_string())?;
            let digest = hex_digest(raw.as_bytes());
            let payload = serde_json::json!({
                "schema": 1,
                "op": envelope.op_name(),
                "inputSha256": digest,
                "result": result,
            });
            emit(
                &serde_json::to_string_pretty(&payload).map_err(|e| e.to_string())?,
                out.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Entropy {
            family,
            q,
            prob,
            matrix,
            tree,
            mtree,
            out,
        } => {
            let family = parse_family(&family, q)?;
            let value = match (prob, matrix) {
                (Some(p), None) => {
                    let p = parse_prob(&p)?;
                    match tree {
                        None => prob::classical_entropy(family, &p),
                        Some(path) => {
                            let tau: PlanarTree = read_json(&path)?;
                            prob::tree_entropy(family, &tau, &p).map_err(|e| e.to_string())?
                        }
                    }
                }
                (None, Some(path)) => {
                    let dto: MatrixDto = read_json(&path)?;
                    let rho = dto.to_density().map_err(|e| e.to_string())?;
                    match mtree {
                        None => opkit::density::quantum_entropy(family, &rho)
                            .map_err(|e| e.to_string())?,
                        Some(mpath) => {
                            let node: MeasurementNodeDto = read_json(&mpath)?;
                            let mt = node
                                .to_measurement_tree(rho.dim())
                                .map_err(|e| e.to_string())?;
                            mt.tree_entropy(family, &rho).map_err(|e| e.to_string())?
                        }
                    }
                }
                _ => return Err("pass exactly one of --prob or --matrix".into()),
            };
            let payload = serde_json::json!({
                "schema": 1,
                "family": family,
                "value": value,
            });
            emit(
                &serde_json::to_string_pretty(&payload).map_err(|e| e.to_string())?,
                out.as_deref(),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Codes { cmd } => match cmd {
            CodesCmd::Build {
                omega,
                chi,
                tuple,
                lambda,
                out,
            } => {
                let dto: OmegaDto = read_json(&omega)?;
                let omega = dto.to_omega().map_err(|e| e.to_string())?;
                let alg = codes::LoopAlgebra::from_omega(&omega).map_err(|e| e.to_string())?;
                let tuple = parse_indices(&tuple)?;
                let lambda = parse_lambdas(&lambda, alg.p())?;
                let cs = codes::code_space(&alg, &omega, chi, &tuple, &lambda)
                    .map_err(|e| e.to_string())?;
                let basis = MatrixRect::from(&cs.basis);
                let payload = serde_json::json!({
                    "schema": 1,
                    "chi": chi,
                    "tuple": cs.tuple,
                    "lambda": cs
                        .lambda
                        .iter()
                        .map(|z| serde_json::json!({"re": z.re, "im": z.im}))
                        .collect::<Vec<_>>(),
                    "dimension": cs.dimension(),
                    "basis": {"re": basis.re, "im": basis.im},
                    "residuals": cs.residuals,
                });
                emit(
                    &serde_json::to_string_pretty(&payload).map_err(|e| e.to_string())?,
                    out.as_deref(),
                )?;
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

struct MatrixRect {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl MatrixRect {
    fn from(m: &opkit::cmatrix::CMatrix) -> Self {
        MatrixRect {
            re: (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| m.get(r, c).re).collect())
                .collect(),
            im: (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| m.get(r, c).im).collect())
                .collect(),
        }
    }
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    match s {
        "small" => Ok(Scale::Small),
        "full" => Ok(Scale::Full),
        other => Err(format!("unknown scale '{other}' (small|full)")),
    }
}

fn parse_family(name: &str, q: Option<f64>) -> Result<EntropyFamily, String> {
    match (name, q) {
        ("shannon", None) => Ok(EntropyFamily::Shannon),
        ("shannon", Some(_)) => Err("shannon takes no order parameter".into()),
        ("renyi", Some(q)) => EntropyFamily::renyi(q).map_err(|e| e.to_string()),
        ("tsallis", Some(q)) => EntropyFamily::tsallis(q).map_err(|e| e.to_string()),
        ("renyi" | "tsallis", None) => Err("this family needs --q".into()),
        (other, _) => Err(format!("unknown family '{other}'")),
    }
}

fn parse_prob(s: &str) -> Result<ProbVector, String> {
    let values: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    ProbVector::new(values.map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn parse_indices(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect()
}

fn parse_lambdas(s: &str, p: usize) -> Result<Vec<Complex64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            if let Ok(k) = t.parse::<i64>() {
                let angle = 2.0 * std::f64::consts::PI * (k as f64) / (p as f64);
                return Ok(Complex64::new(angle.cos(), angle.sin()));
            }
            parse_complex(t).ok_or_else(|| format!("cannot parse eigenvalue '{t}'"))
        })
        .collect()
}

/// Parses "a+bi" / "a-bi" / "a" / "bi".
fn parse_complex(t: &str) -> Option<Complex64> {
    let t = t.replace(' ', "");
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        return match split {
            Some(i) => {
                let re: f64 = body[..i].parse().ok()?;
                let im: f64 = match &body[i..] {
                    "+" => 1.0,
                    "-" => -1.0,
                    rest => rest.parse().ok()?,
                };
                Some(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else {
                    body.parse().ok()?
                };
                Some(Complex64::new(0.0, im))
            }
        };
    }
    t.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let raw = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&raw).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(payload: &str, out: Option<&std::path::Path>) -> Result<(), String> {
    match out {
        Some(path) => {
            fs::write(path, format!("{payload}\n")).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

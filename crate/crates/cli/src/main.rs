//! Command-line front end: optimize / bound / clique-instance /
//! tetris-verify. All machine output is JSON on stdout; human-readable
//! summaries go to stderr. Identical flags and seeds produce byte-identical
//! JSON.
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 capacity error,
//! 4 degenerate instance.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spherex::error::Error as SxError;
use spherex::io;
use spherex::lowerbound;
use spherex::rounding::{self, Method, OptimizeOpts};
use spherex::spectral;
use spherex::tetris;
use spherex::Capacity;
use std::path::PathBuf;
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "spherex",
    version,
    about = "Spectral sphere-maximization toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    General,
    Nnc,
    Sparse,
    Auto,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::General => Method::General,
            MethodArg::Nnc => Method::Nnc,
            MethodArg::Sparse => Method::Sparse,
            MethodArg::Auto => Method::Auto,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize |f(x)| over the unit sphere with a candidate-set algorithm.
    Optimize {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[arg(long, default_value_t = 33)]
        c_grid: usize,
        /// Matrix-entry capacity override.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit every applicable closed-form upper estimate.
    Bound {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a G(n,p) 4-clique gap instance with its certificate.
    CliqueInstance {
        #[arg(long)]
        n: usize,
        /// Edge probability, or "auto" for n^{-1/3}.
        #[arg(long, default_value = "auto")]
        p: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        oracle_restarts: u32,
        /// Directory for the graph / polynomial / certificate files.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Verify the symmetrized-Kronecker-power decomposition on a seeded
    /// random SoS-symmetric matrix.
    TetrisVerify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Serialize)]
struct FlagEcho {
    version: &'static str,
    command: String,
    flags: serde_json::Map<String, serde_json::Value>,
}

fn flag_echo(command: &str, flags: &[(&str, serde_json::Value)]) -> FlagEcho {
    let mut map = serde_json::Map::new();
    for (k, v) in flags {
        map.insert(k.to_string(), v.clone());
    }
    FlagEcho {
        version: VERSION,
        command: command.to_string(),
        flags: map,
    }
}

#[derive(Serialize)]
struct OptimizeOut {
    meta: FlagEcho,
    report: rounding::OptReport,
}

#[derive(Serialize)]
struct BoundEntry {
    applicable: bool,
    value: Option<f64>,
    note: Option<String>,
}

#[derive(Serialize)]
struct BoundOut {
    meta: FlagEcho,
    gershgorin: BoundEntry,
    rowsum: BoundEntry,
    frobenius: BoundEntry,
    eig_powered: BoundEntry,
}

#[derive(Serialize)]
struct CliqueOut {
    meta: FlagEcho,
    report: lowerbound::GapReport,
    files: Vec<String>,
}

#[derive(Serialize)]
struct TetrisOut {
    meta: FlagEcho,
    report: tetris::TetrisReport,
}

fn exit_code_for(e: &SxError) -> u8 {
    match e {
        SxError::Capacity { .. } => 3,
        SxError::Degenerate(_) => 4,
        _ => 2,
    }
}

fn emit(json: String, out: Option<&PathBuf>) -> Result<(), SxError> {
    match out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => println!("{json}"),
    }
    Ok(())
}

fn capacity(cap_flag: Option<usize>) -> Capacity {
    match cap_flag {
        Some(v) => Capacity::with_matrix_cap(v),
        None => Capacity::from_env(),
    }
}

fn bound_entry<F: FnOnce() -> Result<spectral::UpperEstimate, SxError>>(f: F) -> BoundEntry {
    match f() {
        Ok(est) => BoundEntry {
            applicable: true,
            value: Some(est.value),
            note: est.witness,
        },
        Err(e) => BoundEntry {
            applicable: false,
            value: None,
            note: Some(e.to_string()),
        },
    }
}

fn run() -> Result<(), SxError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Optimize {
            poly,
            q,
            method,
            c_grid,
            cap,
            out,
        } => {
            let f = io::load_poly(&poly)?;
            let capacity = capacity(cap);
            let opts = OptimizeOpts {
                c_grid,
                ..OptimizeOpts::default()
            };
            let report = rounding::optimize(&f, q, method.into(), &opts, &capacity)?;
            eprintln!(
                "optimize: value {:.6e}, upper {:.6e}, {} candidates",
                report.value, report.upper.value, report.candidates_evaluated
            );
            let meta = flag_echo(
                "optimize",
                &[
                    ("poly", poly.display().to_string().into()),
                    ("q", q.into()),
                    ("method", format!("{method:?}").to_lowercase().into()),
                    ("c_grid", c_grid.into()),
                    ("cap", cap.map(|v| v as u64).into()),
                ],
            );
            let json = serde_json::to_string_pretty(&OptimizeOut { meta, report })?;
            emit(json, out.as_ref())
        }
        Command::Bound { poly, q, cap, out } => {
            let f = io::load_poly(&poly)?;
            let capacity = capacity(cap);
            let meta = flag_echo(
                "bound",
                &[
                    ("poly", poly.display().to_string().into()),
                    ("q", q.map(u64::from).into()),
                    ("cap", cap.map(|v| v as u64).into()),
                ],
            );
            let out_doc = BoundOut {
                meta,
                gershgorin: bound_entry(|| spectral::gershgorin_bound(&f)),
                rowsum: bound_entry(|| spectral::rowsum_bound(&f, &capacity)),
                frobenius: bound_entry(|| spectral::frobenius_sparse_bound(&f)),
                eig_powered: bound_entry(|| {
                    spectral::powered_upper_estimate(&f, q.unwrap_or(f.d()), &capacity)
                }),
            };
            eprintln!(
                "bound: gershgorin {:?}, rowsum {:?}, frobenius {:?}",
                out_doc.gershgorin.value, out_doc.rowsum.value, out_doc.frobenius.value
            );
            let json = serde_json::to_string_pretty(&out_doc)?;
            emit(json, out.as_ref())
        }
        Command::CliqueInstance {
            n,
            p,
            seed,
            oracle_restarts,
            out_dir,
            cap,
        } => {
            let p_val = if p == "auto" {
                (n as f64).powf(-1.0 / 3.0)
            } else {
                p.parse::<f64>()
                    .map_err(|_| SxError::InvalidInput(format!("bad probability '{p}'")))?
            };
            let capacity = capacity(cap);
            let (report, cert) = lowerbound::gap_report_with_certificate(
                n,
                p_val,
                seed,
                oracle_restarts,
                &capacity,
            )?;
            let mut files = Vec::new();
            if let Some(dir) = &out_dir {
                std::fs::create_dir_all(dir)?;
                let g = lowerbound::gnp(n, p_val, seed)?;
                let graph_path = dir.join("graph.txt");
                std::fs::write(&graph_path, io::graph_to_edge_list(&g))?;
                files.push(graph_path.display().to_string());
                let f = lowerbound::clique_poly(&g);
                let poly_path = dir.join("clique_poly.json");
                io::save_poly(&f, &poly_path)?;
                files.push(poly_path.display().to_string());
                // certificate dump: row-major moment matrix over the
                // lexicographic [n]² index map (row i·n+j ↔ tuple (i,j))
                let m = cert.m_mat;
                let mut dump = String::new();
                dump.push_str(&format!(
                    "# moment matrix, side {} = n^2, row-major; index i*n+j is tuple (i+1,j+1)\n",
                    m.side()
                ));
                for r in 0..m.side() {
                    let row: Vec<String> = (0..m.side())
                        .map(|c| format!("{:.17e}", m.get(r, c)))
                        .collect();
                    dump.push_str(&row.join(" "));
                    dump.push('\n');
                }
                let cert_path = dir.join("certificate.txt");
                std::fs::write(&cert_path, dump)?;
                files.push(cert_path.display().to_string());
            }
            eprintln!(
                "clique-instance: m={} cliques={} dual={:.6} oracle={:.6e} ratio={:.3}",
                report.m,
                report.clique_count,
                report.dual_value,
                report.oracle_norm_estimate,
                report.ratio
            );
            let out_path = out_dir.as_ref().map(|d| d.join("report.json"));
            let meta = flag_echo(
                "clique-instance",
                &[
                    ("n", (n as u64).into()),
                    ("p", p.clone().into()),
                    ("seed", seed.into()),
                    ("oracle_restarts", oracle_restarts.into()),
                    ("cap", cap.map(|v| v as u64).into()),
                ],
            );
            let json = serde_json::to_string_pretty(&CliqueOut {
                meta,
                report,
                files,
            })?;
            emit(json, out_path.as_ref())?;
            Ok(())
        }
        Command::TetrisVerify {
            n,
            q,
            seed,
            mode,
            cap,
        } => {
            let capacity = capacity(cap);
            let report = match mode {
                ModeArg::Exact => {
                    let m = tetris::random_sos_matrix_exact(n, seed, &capacity)?;
                    tetris::verify_tetris(&m, q, tetris::VerifyMode::Exact, &capacity)?
                }
                ModeArg::Float => {
                    let m = tetris::random_sos_matrix_f64(n, seed, &capacity)?;
                    tetris::verify_tetris(&m, q, tetris::VerifyMode::Float, &capacity)?
                }
            };
            eprintln!(
                "tetris-verify: n={n} q={q} mode={mode:?} pass={} err={:.3e}",
                report.pass, report.max_rel_error
            );
            let meta = flag_echo(
                "tetris-verify",
                &[
                    ("n", (n as u64).into()),
                    ("q", q.into()),
                    ("seed", seed.into()),
                    ("mode", format!("{mode:?}").to_lowercase().into()),
                    ("cap", cap.map(|v| v as u64).into()),
                ],
            );
            let pass = report.pass;
            let json = serde_json::to_string_pretty(&TetrisOut { meta, report })?;
            emit(json, None)?;
            if !pass {
                return Err(SxError::InvalidInput("tetris identity failed".into()));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

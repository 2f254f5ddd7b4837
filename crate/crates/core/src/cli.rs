//! The `xbound` command-line tool.
//!
//! Exit codes are stable: 0 entanglement certified (or command succeeded),
//! 1 inconclusive, 2 input error, 3 invariant violation.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::highdim::{generalized_lower_bound, Orientation};
use crate::io::{read_density, MatrixParts};
use crate::linalg::{Dims, Tolerances};
use crate::oracle::{fuzz_inequality, optimize_basis, FuzzConfig, OptimizerConfig};
use crate::reference_states::{
    isotropic_bound_closed_form, isotropic_exact_concurrence, isotropic_matrix, IsotropicState,
};
use crate::two_qubit::{certify_from_elements, x_lower_bound, Verdict};
use crate::Error;

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

/// Allowed disagreement between the closed-form and matrix-level isotropic bounds.
const SWEEP_AGREEMENT: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "xbound",
    version,
    about = "X-matrix lower bounds on concurrence"
)]
pub struct Cli {
    /// Override every state-validation tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower bound (and, for two qubits, exact concurrence) of a state file.
    Bound {
        input: PathBuf,
        /// Expected local dimensions, e.g. `2,2`; must match the file.
        #[arg(long, value_parser = parse_dims)]
        dims: Option<Dims>,
    },
    /// Entanglement test from |Q14|, Q22 and Q33 alone.
    Certify {
        #[arg(long, allow_negative_numbers = true)]
        q14: f64,
        #[arg(long, allow_negative_numbers = true)]
        d22: f64,
        #[arg(long, allow_negative_numbers = true)]
        d33: f64,
    },
    /// Exact concurrence and lower bound along the isotropic family, as CSV.
    IsotropicSweep {
        #[arg(long)]
        d: usize,
        /// Number of grid points on F in [0, 1], endpoints included.
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Randomized check of bound <= concurrence; prints a JSON report.
    Fuzz {
        #[arg(long)]
        trials: usize,
        #[arg(long, value_parser = parse_dims, default_value = "2,2")]
        dims: Dims,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample every state at this rank instead of cycling through ranks.
        #[arg(long)]
        rank: Option<usize>,
        /// Also write the report, with its run manifest, to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search local bases for the largest two-qubit X bound.
    OptimizeBasis {
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the optimal uA, uB (default: `<input>.unitaries.json`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_dims(s: &str) -> Result<Dims, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected A,B, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Dims::new(parse(a)?, parse(b)?).map_err(|e| e.to_string())
}

/// Provenance for every file the tool writes.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub version: &'static str,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
}

impl RunManifest {
    fn new(command: &str, input: Option<&[u8]>, seed: Option<u64>, tolerances: Tolerances) -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            });
        RunManifest {
            command: command.to_string(),
            input_sha256: input.map(|bytes| hex::encode(Sha256::digest(bytes))),
            seed,
            tolerances,
            version: env!("CARGO_PKG_VERSION"),
            timestamp,
        }
    }
}

/// Error plus the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) => EXIT_INVARIANT,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_CERTIFIED
            };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    execute(&cli, out, err)
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let tol = match cli.tol {
        Some(t) if t.is_finite() && t >= 0.0 => Tolerances::uniform(t),
        Some(t) => {
            let _ = writeln!(err, "error: --tol must be a non-negative number, got {t}");
            return EXIT_INPUT;
        }
        None => Tolerances::default(),
    };
    let result = match &cli.command {
        Command::Bound { input, dims } => cmd_bound(input, *dims, &tol, out),
        Command::Certify { q14, d22, d33 } => cmd_certify(*q14, *d22, *d33, out),
        Command::IsotropicSweep {
            d,
            steps,
            out: path,
        } => cmd_isotropic_sweep(*d, *steps, path, &tol, out),
        Command::Fuzz {
            trials,
            dims,
            seed,
            rank,
            out: path,
        } => cmd_fuzz(*trials, *dims, *seed, *rank, path.as_deref(), &tol, out),
        Command::OptimizeBasis {
            input,
            restarts,
            max_iters,
            seed,
            out: path,
        } => cmd_optimize_basis(
            input,
            *restarts,
            *max_iters,
            *seed,
            path.as_deref(),
            &tol,
            out,
        ),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_input(path: &Path, tol: &Tolerances) -> Result<(Vec<u8>, crate::DensityMatrix), Failure> {
    let bytes = std::fs::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let text =
        std::str::from_utf8(&bytes).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let q = crate::io::parse_density(text, tol)?;
    Ok((bytes, q))
}

fn verdict_code(bound: f64) -> (i32, &'static str) {
    if bound > 0.0 {
        (EXIT_CERTIFIED, "entangled")
    } else {
        (EXIT_INCONCLUSIVE, "inconclusive")
    }
}

fn cmd_bound(
    input: &Path,
    dims: Option<Dims>,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let q = read_density(input, tol)?;
    if let Some(d) = dims {
        q.dims().require(d.a, d.b)?;
    }
    let general = generalized_lower_bound(&q);
    let d = q.dims();
    writeln!(out, "dims={}x{}", d.a, d.b)?;
    let bound = if d == Dims::TWO_QUBITS {
        let r = x_lower_bound(&q)?;
        writeln!(
            out,
            "bound={:.6} exact={:.6}",
            r.bound,
            r.exact.unwrap_or(f64::NAN)
        )?;
        writeln!(out, "c1={:.6} c2={:.6}", r.c1, r.c2)?;
        r.bound
    } else {
        writeln!(out, "bound={:.6}", general.bound)?;
        general.bound
    };
    if let Some(w) = general.argmax {
        let orientation = match w.orientation {
            Orientation::Direct => "direct",
            Orientation::Mirrored => "mirrored",
        };
        writeln!(
            out,
            "argmax=(i={},j={},k={},l={},{}) value={:.6}",
            w.pair.i, w.pair.j, w.pair.k, w.pair.l, orientation, general.best
        )?;
    }
    let (code, word) = verdict_code(bound);
    writeln!(out, "verdict={word}")?;
    Ok(code)
}

fn cmd_certify(q14: f64, d22: f64, d33: f64, out: &mut dyn Write) -> Result<i32, Failure> {
    let c = certify_from_elements(q14, d22, d33)?;
    let (code, word) = match c.verdict {
        Verdict::Entangled => (EXIT_CERTIFIED, "entangled"),
        Verdict::Inconclusive => (EXIT_INCONCLUSIVE, "inconclusive"),
    };
    writeln!(out, "{word}, C1={:.6}", c.c1)?;
    Ok(code)
}

fn manifest_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn cmd_isotropic_sweep(
    d: usize,
    steps: usize,
    path: &Path,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if steps < 2 {
        return Err(input_error(format!(
            "--steps must be at least 2, got {steps}"
        )));
    }
    IsotropicState::new(d, 0.0)?;
    let file =
        std::fs::File::create(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    let mut writer = csv::Writer::from_writer(file);
    let csv_err = |e: csv::Error| input_error(format!("{}: {e}", path.display()));
    writer
        .write_record(["F", "exact", "bound", "bound_from_matrix"])
        .map_err(csv_err)?;
    let mut worst = 0.0f64;
    for n in 0..steps {
        let f = n as f64 / (steps - 1) as f64;
        let s = IsotropicState::new(d, f)?;
        let exact = isotropic_exact_concurrence(&s);
        let bound = isotropic_bound_closed_form(&s);
        let from_matrix = generalized_lower_bound(&isotropic_matrix(&s)).bound;
        worst = worst.max((bound - from_matrix).abs());
        writer
            .write_record([f, exact, bound, from_matrix].map(|v| format!("{v}")))
            .map_err(csv_err)?;
    }
    writer.flush()?;
    let manifest = RunManifest::new(
        &format!("isotropic-sweep --d {d} --steps {steps}"),
        None,
        None,
        *tol,
    );
    std::fs::write(
        manifest_path(path),
        serde_json::to_string_pretty(&manifest).expect("serializes") + "\n",
    )?;
    writeln!(out, "wrote {} rows to {}", steps, path.display())?;
    if worst > SWEEP_AGREEMENT {
        return Err(Failure {
            code: EXIT_INVARIANT,
            message: format!("matrix-level bound disagrees with closed form by {worst:e}"),
        });
    }
    Ok(EXIT_CERTIFIED)
}

#[allow(clippy::too_many_arguments)]
fn cmd_fuzz(
    trials: usize,
    dims: Dims,
    seed: u64,
    rank: Option<usize>,
    path: Option<&Path>,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if trials == 0 {
        return Err(input_error("--trials must be at least 1"));
    }
    if let Some(r) = rank {
        if r == 0 || r > dims.total() {
            return Err(Error::InvalidRank {
                rank: r,
                max: dims.total(),
            }
            .into());
        }
    }
    let mut cfg = FuzzConfig::new(trials, dims, seed);
    cfg.rank = rank;
    let report = fuzz_inequality(&cfg)?;
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&report).expect("serializes")
    )?;
    if let Some(path) = path {
        #[derive(Serialize)]
        struct Artifact<'a> {
            manifest: RunManifest,
            report: &'a crate::oracle::FuzzReport,
        }
        let command = format!(
            "fuzz --trials {trials} --dims {},{} --seed {seed}",
            dims.a, dims.b
        );
        let artifact = Artifact {
            manifest: RunManifest::new(&command, None, Some(seed), *tol),
            report: &report,
        };
        std::fs::write(
            path,
            serde_json::to_string_pretty(&artifact).expect("serializes") + "\n",
        )
        .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    }
    if report.violations > 0 || report.pure_violations > 0 {
        return Ok(EXIT_INVARIANT);
    }
    Ok(EXIT_CERTIFIED)
}

fn cmd_optimize_basis(
    input: &Path,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    path: Option<&Path>,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (bytes, q) = read_input(input, tol)?;
    q.dims().require(2, 2)?;
    let cfg = OptimizerConfig {
        restarts,
        max_iters,
        seed,
        ..OptimizerConfig::default()
    };
    let best = optimize_basis(&q, &cfg)?;
    writeln!(out, "original_bound={:.6}", best.original_bound)?;
    writeln!(out, "optimized_bound={:.6}", best.best_bound)?;
    writeln!(out, "exact={:.6}", best.exact)?;
    writeln!(out, "gap={:.3e}", best.gap())?;

    #[derive(Serialize)]
    struct Unitaries {
        manifest: RunManifest,
        original_bound: f64,
        optimized_bound: f64,
        exact: f64,
        angles: [f64; 6],
        #[serde(rename = "uA")]
        ua: MatrixParts,
        #[serde(rename = "uB")]
        ub: MatrixParts,
    }
    let target = match path {
        Some(p) => p.to_path_buf(),
        None => input.with_extension("unitaries.json"),
    };
    let command =
        format!("optimize-basis --restarts {restarts} --max-iters {max_iters} --seed {seed}");
    let doc = Unitaries {
        manifest: RunManifest::new(&command, Some(&bytes), Some(seed), *tol),
        original_bound: best.original_bound,
        optimized_bound: best.best_bound,
        exact: best.exact,
        angles: best.angles,
        ua: MatrixParts::from_matrix(&best.ua),
        ub: MatrixParts::from_matrix(&best.ub),
    };
    std::fs::write(
        &target,
        serde_json::to_string_pretty(&doc).expect("serializes") + "\n",
    )
    .map_err(|e| input_error(format!("{}: {e}", target.display())))?;
    writeln!(out, "unitaries={}", target.display())?;
    Ok(verdict_code(best.best_bound).0)
}

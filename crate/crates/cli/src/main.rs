use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spaceform::calculus::JetConfig;
use spaceform::catalog::{self, CatalogEntry, VerifyOptions};
use spaceform::profile_ode::reconstruct_sigma;
use spaceform::residuals::{ResidualReport, Status};
use spaceform::Error;

/// Numerical verification of biharmonic and biconservative hypersurfaces in space forms.
#[derive(Parser)]
#[command(name = "spaceform", version)]
struct Cli {
    /// Worker threads for per-node work.
    #[arg(long, global = true, env = "SPACEFORM_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog families.
    List {
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Verify a catalog entry and write its residual report (JSON).
    Verify {
        id: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the profile curvature ODE of the standard biconservative surfaces of S^3.
    Ode {
        #[arg(long)]
        c1: f64,
        #[arg(long, default_value_t = 10)]
        periods: usize,
        /// Integrator tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Lattice samples per period in the CSV.
        #[arg(long, default_value_t = 128)]
        samples: usize,
        /// Also verify the assembled surface (writes <out>.report.json).
        #[arg(long)]
        verify: bool,
        /// Output prefix: writes <out>.csv and <out>.json.
        #[arg(long, default_value = "profile")]
        out: PathBuf,
    },
    /// Export the sampled chart of a catalog entry as a CSV mesh.
    Export {
        id: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Append mean curvature f and Gaussian curvature K columns.
        #[arg(long)]
        with_scalars: bool,
        /// Mesh path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    m1: Option<f64>,
    #[arg(long)]
    m2: Option<f64>,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "C0")]
    c0: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<f64>,
    #[arg(long = "R")]
    big_r: Option<f64>,
}

impl ParamArgs {
    fn overrides(&self) -> BTreeMap<String, f64> {
        let pairs = [
            ("m", self.m),
            ("r", self.r),
            ("m1", self.m1),
            ("m2", self.m2),
            ("r1", self.r1),
            ("alpha", self.alpha),
            ("C0", self.c0),
            ("c1", self.c1),
            ("eps", self.eps),
            ("seed", self.seed),
            ("R", self.big_r),
        ];
        pairs.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect()
    }
}

#[derive(Args)]
struct GridArgs {
    /// Nodes per axis: one value for all axes or one per axis (comma separated).
    #[arg(long, value_delimiter = ',')]
    counts: Vec<usize>,
    /// Coordinate ranges per axis, `lo:hi` (comma separated).
    #[arg(long, value_delimiter = ',')]
    ranges: Vec<String>,
    /// Jet step for chart derivatives.
    #[arg(long)]
    h: Option<f64>,
    /// Richardson extrapolation for every grid derivative.
    #[arg(long)]
    richardson: bool,
}

impl GridArgs {
    fn apply(&self, mut entry: CatalogEntry) -> spaceform::Result<(CatalogEntry, VerifyOptions)> {
        if !self.counts.is_empty() {
            entry = entry.with_counts(&self.counts)?;
        }
        if !self.ranges.is_empty() {
            let ranges = self
                .ranges
                .iter()
                .map(|s| {
                    let (lo, hi) = s
                        .split_once(':')
                        .ok_or_else(|| Error::Input(format!("range `{s}` is not of the form lo:hi")))?;
                    let parse = |t: &str| {
                        t.trim().parse::<f64>().map_err(|_| Error::Input(format!("bad number `{t}` in range `{s}`")))
                    };
                    Ok((parse(lo)?, parse(hi)?))
                })
                .collect::<spaceform::Result<Vec<_>>>()?;
            entry = entry.with_ranges(&ranges)?;
        }
        let mut opts = VerifyOptions { richardson: self.richardson, ..VerifyOptions::default() };
        if let Some(h) = self.h {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Input(format!("jet step must be positive, got {h}")));
            }
            opts.jet = JetConfig { step: h, ..JetConfig::default() };
        }
        Ok((entry, opts))
    }
}

/// Failure of a command, mapped onto the exit-code contract.
enum Failure {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_) | Error::Parameter(_) | Error::UnknownSurface(_) | Error::Dimension { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Writes `contents` to a sibling temporary file and renames it over `path`.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path).inspect_err(|_| {
        let _ = std::fs::remove_file(&tmp);
    })
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, contents)?,
        None => std::io::stdout().write_all(contents.as_bytes())?,
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Prints failed and skipped verdicts to stderr; true if nothing failed.
fn summarize(report: &ResidualReport) -> bool {
    let mut failed = 0;
    for v in &report.verdicts {
        match v.status {
            Status::Fail => {
                failed += 1;
                eprintln!(
                    "FAIL {}: {:?} = {:.3e}, tolerance {:.1e}",
                    v.claim,
                    v.measure,
                    v.value.unwrap_or(f64::NAN),
                    v.tolerance
                );
            }
            Status::Skipped => eprintln!("skip {}: {}", v.claim, v.reason.as_deref().unwrap_or("")),
            Status::Pass => {}
        }
    }
    eprintln!("{}: {} verdicts, {failed} failed", report.surface, report.verdicts.len());
    failed == 0
}

fn run(cli: Cli) -> Result<bool, Failure> {
    if let Some(n) = cli.jobs {
        spaceform::exec::set_worker_count(n)?;
    }
    match cli.command {
        Command::List { format } => {
            match format {
                ListFormat::Json => {
                    let index = catalog::index_json()?;
                    emit(None, &(serde_json::to_string_pretty(&index).expect("serializable") + "\n"))?;
                }
                ListFormat::Text => {
                    let mut text = String::new();
                    for f in catalog::families() {
                        let params: Vec<String> =
                            f.params.iter().map(|p| format!("{}={} {}", p.name, p.default, p.range)).collect();
                        text.push_str(&format!("{:<20} {}\n{:<20} params: {}\n", f.id, f.summary, "", params.join("; ")));
                    }
                    emit(None, &text)?;
                }
            }
            Ok(true)
        }
        Command::Verify { id, params, grid, out } => {
            let entry = catalog::instantiate(&id, &params.overrides())?;
            let (entry, opts) = grid.apply(entry)?;
            let report = catalog::verify(&entry, &opts)?;
            emit(out.as_deref(), &(report.to_json() + "\n"))?;
            Ok(summarize(&report))
        }
        Command::Ode { c1, periods, tol, samples, verify, out } => {
            let sol = reconstruct_sigma(c1, periods, samples, tol)?;
            write_atomic(&with_suffix(&out, ".csv"), &sol.to_csv())?;
            let summary = serde_json::to_string_pretty(&sol.summary()).expect("serializable") + "\n";
            write_atomic(&with_suffix(&out, ".json"), &summary)?;
            eprintln!(
                "c1 = {c1}: period {:.12}, max drift {:.3e}, kappa band [{:.9}, {:.9}]",
                sol.period.unwrap_or(f64::NAN),
                sol.max_drift(),
                sol.band.0,
                sol.band.1
            );
            if !verify {
                return Ok(true);
            }
            let entry = catalog::instantiate("bicons_s3", &BTreeMap::from([("c1".to_string(), c1)]))?;
            let report = catalog::verify(&entry, &VerifyOptions::default())?;
            write_atomic(&with_suffix(&out, ".report.json"), &(report.to_json() + "\n"))?;
            Ok(summarize(&report))
        }
        Command::Export { id, params, grid, with_scalars, out } => {
            let entry = catalog::instantiate(&id, &params.overrides())?;
            let (entry, opts) = grid.apply(entry)?;
            let csv = catalog::export_mesh(&entry, with_scalars, &opts)?;
            emit(out.as_deref(), &csv)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(3)
        }
    }
}

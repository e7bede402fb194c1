//! Command-line front end: function ingestion, decomposition, pole search,
//! rational conversion and property verification.
//!
//! [`run`] drives everything and returns the process exit code: 0 on success,
//! 1 when a property check fails, 2 on usage or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nbest_core::rational::{admissible_check, form_to_rational};
use nbest_core::search::{SearchConfig, SearchRegistry, SearchResult};
use nbest_core::verify::{SuiteContext, SuiteRegistry};
use nbest_core::{decompose, HardyFunction};
use serde_json::{json, Value};

pub mod input;

use input::{FunctionSpec, Source};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] nbest_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "nbest", version, about = "n-best Blaschke-form approximation on the unit disc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Project a function onto the T-M system of the given poles.
    Decompose(DecomposeArgs),
    /// Greedy maximal-selection pole search.
    Greedy(SearchArgs),
    /// Joint n-best pole search with restarts.
    Nbest(SearchArgs),
    /// Convert a form with a pole at the origin to a rational pair.
    ToRational(ToRationalArgs),
    /// Run a property suite and print JSON-line reports.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
struct SourceArgs {
    /// JSON file with Taylor coefficients (array, or {"taylor": [...], "grid_size": M}).
    #[arg(long, group = "source")]
    taylor_file: Option<PathBuf>,
    /// JSON file with a rational pair {"p": [...], "q": [...]}.
    #[arg(long, group = "source")]
    rational_file: Option<PathBuf>,
    /// szego:a, geom:a, poly:<coeffs or expression>, blaschke-form:<file>.
    #[arg(long, group = "source")]
    builtin: Option<String>,
    /// CSV of real samples; its length must be a power of two.
    #[arg(long, group = "source")]
    signal: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FunctionArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Boundary grid size M (a power of two).
    #[arg(long)]
    grid_size: Option<usize>,
}

impl FunctionArgs {
    fn spec(&self) -> FunctionSpec {
        let s = &self.source;
        let source = if let Some(p) = &s.taylor_file {
            Source::TaylorFile(p.clone())
        } else if let Some(p) = &s.rational_file {
            Source::RationalPair(p.clone())
        } else if let Some(p) = &s.signal {
            Source::SampledSignal(p.clone())
        } else {
            Source::Builtin(s.builtin.clone().unwrap_or_default())
        };
        FunctionSpec {
            source,
            grid_size: self.grid_size,
        }
    }
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[command(flatten)]
    function: FunctionArgs,
    /// Comma-separated poles, e.g. "0.5,-0.3i,0.1+0.2i".
    #[arg(long, allow_hyphen_values = true)]
    poles: String,
    /// Where to write |residual| over the boundary grid. Defaults to
    /// `<out>.residual.csv` when `--out` is given.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    function: FunctionArgs,
    /// Number of poles.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    grid_radial: Option<usize>,
    #[arg(long)]
    grid_angular: Option<usize>,
    #[arg(long)]
    refine_iters: Option<usize>,
    #[arg(long)]
    tol_obj: Option<f64>,
    /// JSON search configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for the search (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Emit the objective trace as CSV (to `<out>.trace.csv`, else stderr).
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig> {
        let mut cfg = match &self.config {
            Some(path) => serde_json::from_value(input::read_json(path)?)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
            None => SearchConfig::default(),
        };
        macro_rules! set {
            ($($field:ident <- $flag:expr),*) => {$(if let Some(v) = $flag { cfg.$field = v; })*};
        }
        set!(n <- self.n, r_max <- self.r_max, restarts <- self.restarts, rng_seed <- self.seed,
             grid_radial <- self.grid_radial, grid_angular <- self.grid_angular,
             refine_iters <- self.refine_iters, tol_obj <- self.tol_obj);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
struct ToRationalArgs {
    /// Blaschke-form JSON file {"poles": [...], "coeffs": [...], "grid_size": M}.
    form: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// lemma1, boundary, schwarz, schwarz-deriv, residual-zeros, coeff-bound or all.
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override each suite's default trial count.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = nbest_core::hardy::DEFAULT_GRID_SIZE)]
    grid_size: usize,
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Errors are reported on `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Decompose(a) => cmd_decompose(&a, stdout),
        Command::Greedy(a) => cmd_search("greedy", &a, stdout, stderr),
        Command::Nbest(a) => cmd_search("nbest", &a, stdout, stderr),
        Command::ToRational(a) => cmd_to_rational(&a, stdout),
        Command::Verify(a) => cmd_verify(&a, stdout, stderr),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(value: &Value, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    match out {
        Some(path) => write_file(path, &text),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn cpx(z: nbest_core::Cpx) -> Value {
    json!([z.re, z.im])
}

/// `index,theta,abs_residual` rows, one per grid node.
pub fn residual_csv(residual: &HardyFunction) -> String {
    let m = residual.grid_size();
    let mut text = String::from("index,theta,abs_residual\n");
    for (j, v) in residual.samples().iter().enumerate() {
        let theta = std::f64::consts::TAU * j as f64 / m as f64;
        text.push_str(&format!("{j},{theta},{}\n", v.norm()));
    }
    text
}

fn cmd_decompose(a: &DecomposeArgs, stdout: &mut dyn Write) -> Result<i32> {
    let poles = input::parse_poles(&a.poles)?;
    let f = a.function.spec().resolve()?;
    let (form, residual) = decompose(&f, &poles)?;
    let mut captured = 0.0;
    let steps: Vec<Value> = form
        .poles()
        .as_slice()
        .iter()
        .zip(form.coeffs())
        .enumerate()
        .map(|(k, (p, c))| {
            captured += c.norm_sqr();
            json!({"k": k + 1, "pole": cpx(p.value()), "coefficient": cpx(*c), "captured_energy": captured})
        })
        .collect();
    let csv_path = a.csv.clone().or_else(|| a.out.as_deref().map(|o| sibling(o, ".residual.csv")));
    if let Some(path) = &csv_path {
        write_file(path, &residual_csv(&residual))?;
    }
    let value = json!({
        "form": form,
        "coefficients": form.coeffs().iter().map(|c| cpx(*c)).collect::<Vec<_>>(),
        "steps": steps,
        "energy": form.energy(),
        "norm_sqr": f.norm_sqr(),
        "residual_norm": residual.norm(),
        "residual_csv": csv_path.map(|p| p.display().to_string()),
    });
    emit(&value, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

/// `iteration,objective` rows.
pub fn trace_csv(result: &SearchResult) -> String {
    let mut text = String::from("iteration,objective\n");
    for (i, obj) in &result.trace {
        text.push_str(&format!("{i},{obj}\n"));
    }
    text
}

fn cmd_search(strategy: &str, a: &SearchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let cfg = a.config()?;
    let f = a.function.spec().resolve()?;
    let registry = SearchRegistry::with_defaults();
    let result = match a.threads {
        Some(0) => return Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?
            .install(|| registry.run(strategy, &f, &cfg))?,
        None => registry.run(strategy, &f, &cfg)?,
    };
    if a.trace {
        let csv = trace_csv(&result);
        match &a.out {
            Some(out) => write_file(&sibling(out, ".trace.csv"), &csv)?,
            None => {
                let _ = stderr.write_all(csv.as_bytes());
            }
        }
    }
    let value = serde_json::to_value(&result).expect("search results serialize");
    emit(&value, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_to_rational(a: &ToRationalArgs, stdout: &mut dyn Write) -> Result<i32> {
    let form = input::read_form(&a.form, None)?;
    let pair = form_to_rational(&form).map_err(|e| match e {
        nbest_core::Error::Precondition(msg) if msg.contains("origin") => CliError::Usage(format!(
            "{msg}. Workflow: split f = f(0) + g with constant_shift, search g/z or prepend a zero pole \
             to an n-form fit, then convert"
        )),
        e => e.into(),
    })?;
    let report = admissible_check(&pair)?;
    emit(&json!({"pair": pair, "report": report}), a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let registry = SuiteRegistry::with_defaults();
    let ctx = SuiteContext {
        seed: a.seed,
        trials: a.trials,
        grid_size: a.grid_size,
    };
    let reports = registry.run(&a.suite, &ctx)?;
    let mut failed = 0;
    for r in &reports {
        let line = serde_json::to_string(r).expect("reports serialize");
        let _ = writeln!(stdout, "{line}");
        let _ = writeln!(
            stderr,
            "{} {} (trials {}, worst margin {:e})",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.trials,
            r.worst_margin
        );
        failed += usize::from(!r.passed);
    }
    let _ = writeln!(stderr, "{} of {} reports passed", reports.len() - failed, reports.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_PROPERTY_FAILURE })
}

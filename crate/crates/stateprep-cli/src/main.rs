//! stateprep command line: comparison reports over the algorithm
//! catalog, loader synthesis and verification, scaling sweeps, and SVG
//! scatter plots.
//!
//! Exit codes: 0 success, 1 usage/parse, 2 verification failure,
//! 3 numeric/domain error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use stateprep::circuit::{
    circuit_depth, cx_equivalent_count, fidelity, parse_circuit, serialize_circuit, simulate,
    CircuitError, Statevector,
};
use stateprep::complexity::Bindings;
use stateprep::loader::{
    dense_target_state, load_dense, load_sparse, parse_dense_text, parse_sparse_text,
    sparse_target_state, DenseState, LoaderError, SparsePointSet, DENSE_QUBIT_CAP,
    SPARSE_DATA_QUBIT_CAP,
};
use stateprep::pareto::{ConstraintSet, WeightVector};
use stateprep::plot::render_scatter_svg;
use stateprep::registry::{builtin_registry, parse_registry, registry_warnings, Representation};
use stateprep::report::{
    build_report, parse_compare_csv, render_csv, render_json, render_table, ReportError,
};
use stateprep::scaling::{
    fit_loglog_slope, measure_dense, measure_sparse, ScalingSample, SWEEP_VERIFY_QUBIT_BUDGET,
};
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "stateprep", version, about = "Decision support for quantum state preparation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank the algorithm catalog at concrete problem sizes
    Compare(CompareArgs),
    /// Synthesize a loader circuit for a state file
    Synthesize(SynthesizeArgs),
    /// Simulate a circuit and compare it against a target state
    Verify(VerifyArgs),
    /// Sweep a loader over problem sizes and fit the growth exponent
    Scaling(ScalingArgs),
    /// Render a comparison CSV as an SVG scatter
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepresentationArg {
    Dense,
    Sparse,
}

impl From<RepresentationArg> for Representation {
    fn from(arg: RepresentationArg) -> Representation {
        match arg {
            RepresentationArg::Dense => Representation::Dense,
            RepresentationArg::Sparse => Representation::Sparse,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LoaderKind {
    Dense,
    Sparse,
}

impl fmt::Display for LoaderKind {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            LoaderKind::Dense => "dense",
            LoaderKind::Sparse => "sparse",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args)]
struct CompareArgs {
    /// JSON catalog replacing the built-in registry
    #[arg(long)]
    registry: Option<PathBuf>,
    #[arg(long)]
    representation: RepresentationArg,
    /// Number of data qubits
    #[arg(long)]
    n: u32,
    /// Number of nonzero amplitudes (sparse only)
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    max_depth: Option<f64>,
    #[arg(long)]
    max_runtime: Option<f64>,
    #[arg(long)]
    max_qubits: Option<f64>,
    /// Ranking weights as depth,runtime,qubits (default equal)
    #[arg(long)]
    weights: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct SynthesizeArgs {
    /// State file: .dsv (dense) or .ssv (sparse)
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    loader: LoaderKind,
    /// Where to write the circuit text
    #[arg(long)]
    out: PathBuf,
    /// Rescale the input to unit norm instead of rejecting it
    #[arg(long)]
    normalize: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Circuit text file
    circuit: PathBuf,
    /// Target state file (.dsv or .ssv)
    #[arg(long)]
    input: PathBuf,
    /// Accept fidelity down to 1 - tolerance
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args)]
struct ScalingArgs {
    #[arg(long, value_enum)]
    loader: LoaderKind,
    /// Dense sweep: qubit counts A:B, step 1
    #[arg(long)]
    n_range: Option<String>,
    /// Sparse sweep: point counts A:B, doubling
    #[arg(long)]
    r_range: Option<String>,
    /// Sparse sweep: fixed pattern width
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PlotArgs {
    /// Comparison CSV, as written by `compare --format csv`
    #[arg(long)]
    input: PathBuf,
    /// Where to write the SVG
    #[arg(long)]
    out: PathBuf,
}

/// A failed command: what to tell the user, and which exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }

    fn verification(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version arrive here too; only real usage
            // errors exit nonzero.
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Compare(args) => cmd_compare(args),
        Command::Synthesize(args) => cmd_synthesize(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Scaling(args) => cmd_scaling(args),
        Command::Plot(args) => cmd_plot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn cmd_compare(args: CompareArgs) -> Result<(), Failure> {
    let records = match &args.registry {
        Some(path) => parse_registry(&read_file(path)?).map_err(registry_failure)?,
        None => builtin_registry(),
    };
    for warning in registry_warnings(&records) {
        eprintln!("warning: {warning}");
    }
    let representation = Representation::from(args.representation);
    let bindings = match (representation, args.r) {
        (Representation::Dense, None) => Bindings::dense(args.n),
        (Representation::Sparse, Some(r)) => Bindings::sparse(args.n, r),
        (Representation::Dense, Some(_)) => {
            return Err(Failure::usage("--r only applies to --representation sparse"));
        }
        (Representation::Sparse, None) => {
            return Err(Failure::usage("--representation sparse requires --r"));
        }
    }
    .map_err(|e| Failure::usage(e.to_string()))?;
    for (flag, bound) in [
        ("--max-depth", args.max_depth),
        ("--max-runtime", args.max_runtime),
        ("--max-qubits", args.max_qubits),
    ] {
        if bound.is_some_and(|b| !b.is_finite()) {
            return Err(Failure::usage(format!("{flag} must be finite")));
        }
    }
    let constraints = ConstraintSet {
        max_depth: args.max_depth,
        max_runtime: args.max_runtime,
        max_qubits: args.max_qubits,
    };
    let weights = match &args.weights {
        Some(text) => parse_weights(text)?,
        None => WeightVector::equal(),
    };
    let report = build_report(&records, representation, bindings, constraints, weights)
        .map_err(report_failure)?;
    let rendered = match args.format {
        Format::Table => render_table(&report),
        Format::Csv => render_csv(&report),
        Format::Json => render_json(&report),
    };
    print!("{rendered}");
    Ok(())
}

fn cmd_synthesize(args: SynthesizeArgs) -> Result<(), Failure> {
    check_extension(&args.input, args.loader)?;
    let text = read_file(&args.input)?;
    let started;
    let circuit = match args.loader {
        LoaderKind::Dense => {
            let amplitudes = parse_dense_text(&text).map_err(loader_failure)?;
            let state = if args.normalize {
                DenseState::new_normalized(amplitudes)
            } else {
                DenseState::new(amplitudes)
            }
            .map_err(loader_failure)?;
            started = Instant::now();
            load_dense(&state).map_err(loader_failure)?
        }
        LoaderKind::Sparse => {
            let points = parse_sparse_text(&text).map_err(loader_failure)?;
            let set = if args.normalize {
                SparsePointSet::new_normalized(points)
            } else {
                SparsePointSet::new(points)
            }
            .map_err(loader_failure)?;
            started = Instant::now();
            load_sparse(&set).map_err(loader_failure)?
        }
    };
    let seconds = started.elapsed().as_secs_f64();
    write_file(&args.out, &serialize_circuit(&circuit))?;
    println!("gates: {}", circuit.gates().len());
    println!("depth: {}", circuit_depth(&circuit));
    println!("cx_equivalent: {}", cx_equivalent_count(&circuit));
    println!("qubits: {}", circuit.num_qubits());
    println!("seconds: {seconds:.6}");
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    if !(args.tolerance.is_finite() && args.tolerance >= 0.0) {
        return Err(Failure::usage("--tolerance must be a non-negative number"));
    }
    let circuit = parse_circuit(&read_file(&args.circuit)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.circuit.display())))?;
    let target = read_target(&args.input)?;
    let output = simulate(&circuit, &Statevector::zero(circuit.num_qubits()))
        .map_err(circuit_failure)?;
    let f = fidelity(&output, &target).map_err(|_| {
        Failure::usage(format!(
            "circuit spans {} qubits but the target implies {}",
            circuit.num_qubits(),
            target.num_qubits(),
        ))
    })?;
    println!("fidelity: {f}");
    if f >= 1.0 - args.tolerance {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "fidelity {f} is below the 1 - {} threshold",
            args.tolerance
        )))
    }
}

fn cmd_scaling(args: ScalingArgs) -> Result<(), Failure> {
    let samples = match args.loader {
        LoaderKind::Dense => dense_sweep(&args)?,
        LoaderKind::Sparse => sparse_sweep(&args)?,
    };
    for sample in &samples {
        if let Some(f) = sample.min_fidelity {
            if f < 1.0 - 1e-9 {
                return Err(Failure::verification(format!(
                    "size {}: synthesized circuit fidelity {f} is below 1 - 1e-9",
                    sample.size
                )));
            }
        }
    }
    println!("size,gates,cx_equivalent,depth,seconds");
    for s in &samples {
        println!("{},{},{},{},{:.6}", s.size, s.gates, s.cx_equivalent, s.depth, s.seconds);
    }
    // Fit against the objective whose published order the sweep checks:
    // CX-equivalents for the dense encoder (O(N)), total gates for the
    // sparse loader (O(nr) at fixed n).
    let xs: Vec<f64> = samples.iter().map(|s| s.size).collect();
    let ys: Vec<f64> = samples
        .iter()
        .map(|s| match args.loader {
            LoaderKind::Dense => s.cx_equivalent,
            LoaderKind::Sparse => s.gates,
        })
        .collect();
    match fit_loglog_slope(&xs, &ys) {
        Ok(slope) => println!("# slope: {slope}"),
        Err(_) => println!("# slope: undefined"),
    }
    Ok(())
}

fn dense_sweep(args: &ScalingArgs) -> Result<Vec<ScalingSample>, Failure> {
    if args.r_range.is_some() || args.n.is_some() {
        return Err(Failure::usage("dense scaling takes --n-range only (no --r-range / --n)"));
    }
    let range = args
        .n_range
        .as_deref()
        .ok_or_else(|| Failure::usage("dense scaling requires --n-range A:B"))?;
    let (low, high) = parse_range(range)?;
    if high > DENSE_QUBIT_CAP {
        return Err(Failure::usage(format!(
            "dense synthesis is capped at {DENSE_QUBIT_CAP} qubits (asked for {high})"
        )));
    }
    Ok((low..=high)
        .map(|n| {
            if n > SWEEP_VERIFY_QUBIT_BUDGET {
                eprintln!(
                    "warning: n = {n} exceeds the verification budget \
                     ({SWEEP_VERIFY_QUBIT_BUDGET} qubits); circuits not simulated at this size"
                );
            }
            measure_dense(n, args.trials, args.seed)
        })
        .collect())
}

fn sparse_sweep(args: &ScalingArgs) -> Result<Vec<ScalingSample>, Failure> {
    if args.n_range.is_some() {
        return Err(Failure::usage("sparse scaling takes --r-range and --n (no --n-range)"));
    }
    let width = args
        .n
        .ok_or_else(|| Failure::usage("sparse scaling requires --n (pattern width)"))?;
    let range = args
        .r_range
        .as_deref()
        .ok_or_else(|| Failure::usage("sparse scaling requires --r-range A:B"))?;
    if width == 0 || width > SPARSE_DATA_QUBIT_CAP {
        return Err(Failure::usage(format!(
            "pattern width must be between 1 and {SPARSE_DATA_QUBIT_CAP} (asked for {width})"
        )));
    }
    let (low, high) = parse_range(range)?;
    if width < 63 && high as u64 > 1u64 << width {
        return Err(Failure::usage(format!(
            "r = {high} cannot fit in {width}-bit patterns (max {})",
            1u64 << width
        )));
    }
    if width + 1 > SWEEP_VERIFY_QUBIT_BUDGET {
        eprintln!(
            "warning: {width}-bit patterns need {} qubits, beyond the verification budget \
             ({SWEEP_VERIFY_QUBIT_BUDGET}); circuits not simulated",
            width + 1
        );
    }
    let mut counts = Vec::new();
    let mut count = low;
    while count <= high {
        counts.push(count);
        match count.checked_mul(2) {
            Some(next) => count = next,
            None => break,
        }
    }
    Ok(counts
        .into_iter()
        .map(|r| measure_sparse(width, r, args.trials, args.seed))
        .collect())
}

fn cmd_plot(args: PlotArgs) -> Result<(), Failure> {
    let rows = parse_compare_csv(&read_file(&args.input)?)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let svg = render_scatter_svg(&rows).map_err(|e| Failure::usage(e.to_string()))?;
    write_file(&args.out, &svg)?;
    println!("wrote {} ({} markers per panel)", args.out.display(), rows.len());
    Ok(())
}

fn parse_weights(text: &str) -> Result<WeightVector, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::usage("--weights needs three values: depth,runtime,qubits"));
    }
    let mut values = [0.0f64; 3];
    for (value, part) in values.iter_mut().zip(&parts) {
        *value = part
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("bad weight `{part}`")))?;
    }
    WeightVector::new(values[0], values[1], values[2]).map_err(|e| Failure::usage(e.to_string()))
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::usage(format!("range `{text}` must be A:B with 1 <= A <= B"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let low: usize = a.trim().parse().map_err(|_| bad())?;
    let high: usize = b.trim().parse().map_err(|_| bad())?;
    if low == 0 || low > high {
        return Err(bad());
    }
    Ok((low, high))
}

fn check_extension(path: &Path, loader: LoaderKind) -> Result<(), Failure> {
    let want = match loader {
        LoaderKind::Dense => "dsv",
        LoaderKind::Sparse => "ssv",
    };
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext == want => Ok(()),
        _ => Err(Failure::usage(format!(
            "`{}` is not a .{want} file; the {loader} loader reads .{want}",
            path.display()
        ))),
    }
}

fn read_target(path: &Path) -> Result<Statevector, Failure> {
    let text = read_file(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("dsv") => {
            let amplitudes = parse_dense_text(&text).map_err(loader_failure)?;
            let state = DenseState::new_normalized(amplitudes).map_err(loader_failure)?;
            Ok(dense_target_state(&state))
        }
        Some("ssv") => {
            let points = parse_sparse_text(&text).map_err(loader_failure)?;
            let set = SparsePointSet::new_normalized(points).map_err(loader_failure)?;
            Ok(sparse_target_state(&set))
        }
        _ => Err(Failure::usage(format!(
            "`{}` must end in .dsv or .ssv so the target kind is known",
            path.display()
        ))),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn loader_failure(error: LoaderError) -> Failure {
    match error {
        LoaderError::NotNormalized { .. }
        | LoaderError::ZeroNorm
        | LoaderError::TooManyQubits { .. } => Failure::domain(error.to_string()),
        _ => Failure::usage(error.to_string()),
    }
}

fn circuit_failure(error: CircuitError) -> Failure {
    match error {
        CircuitError::TooManyQubits(_) => Failure::domain(error.to_string()),
        _ => Failure::usage(error.to_string()),
    }
}

fn registry_failure(error: stateprep::registry::RegistryError) -> Failure {
    use stateprep::registry::RegistryError;
    match error {
        RegistryError::Evaluate { .. } | RegistryError::BadValue { .. } => {
            Failure::domain(error.to_string())
        }
        _ => Failure::usage(error.to_string()),
    }
}

fn report_failure(error: ReportError) -> Failure {
    match error {
        ReportError::Registry(inner) => registry_failure(inner),
        ReportError::Pareto(_) => Failure::domain(error.to_string()),
        ReportError::NoRecords { .. } | ReportError::Csv { .. } => {
            Failure::usage(error.to_string())
        }
    }
}

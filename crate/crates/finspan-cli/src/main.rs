//! Command-line driver: build spans from description files, evaluate
//! them on tensor files, and run the randomized verification suites.
//!
//! Exit codes: 0 success, 1 a check reported failure, 2 usage or parse
//! problems, 3 violated invariants or mismatched spaces. Reports are
//! TAB-separated lines on stdout; diagnostics go to stderr.

mod files;

use std::hint::black_box;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use finspan::oracles::{random_funvec, random_measvec, trial_rng};
use finspan::{
    conv_output_shape, gradcheck_span, run_axiom_suite, CheckReport, ConvSpec, MeasVec,
    ParametricSpan,
};

use files::{
    elaborate, read_fun, read_meas, read_span_file, to_raw, write_fun, write_meas, write_span_file,
    CliError, SpanFile,
};

#[derive(Parser)]
#[command(
    name = "finspan",
    version,
    about = "Linear layers as spans of finite sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Elaborate a span description into raw form (legs as arrays)
    Make {
        /// Span description file (kind: dense, conv, graph, or raw)
        spec: PathBuf,
        /// Where to write the raw span file
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the forward operator on tensor files
    Forward {
        /// Span description file
        span: PathBuf,
        /// Input function file (values on X)
        #[arg(long)]
        x: PathBuf,
        /// Weight function file (values on W)
        #[arg(long)]
        w: PathBuf,
        /// Measure file (density on E); defaults to all-ones
        /// (graph files: the stored edge density)
        #[arg(long)]
        mu: Option<PathBuf>,
        /// Where to write the output measure on Y
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a backward operator on tensor files
    Backward {
        /// Span description file
        span: PathBuf,
        /// Which argument to differentiate with respect to
        #[arg(long, value_enum)]
        wrt: Wrt,
        /// Input function file (needed for weights and measure)
        #[arg(long)]
        x: Option<PathBuf>,
        /// Output cotangent function file (needed by every mode)
        #[arg(long)]
        y: Option<PathBuf>,
        /// Weight function file (needed for input and measure)
        #[arg(long)]
        w: Option<PathBuf>,
        /// Measure file; defaults to all-ones (unused for measure mode)
        #[arg(long)]
        mu: Option<PathBuf>,
        /// Where to write the gradient tensor
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the randomized axiom and coherence suite
    Check {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Largest space size generated
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
        max_size: u64,
    },
    /// Compare analytic gradients against central finite differences
    Gradcheck {
        /// Span description file
        span: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Finite-difference step
        #[arg(long, default_value_t = 1e-5)]
        h: f64,
        /// Relative-error tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Time naive against fiber-indexed evaluation
    Bench {
        /// Span description file
        span: PathBuf,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        repeat: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Wrt {
    Input,
    Weights,
    Measure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Make { spec, out } => cmd_make(&spec, &out),
        Command::Forward {
            span,
            x,
            w,
            mu,
            out,
        } => cmd_forward(&span, &x, &w, mu.as_deref(), &out),
        Command::Backward {
            span,
            wrt,
            x,
            y,
            w,
            mu,
            out,
        } => cmd_backward(
            &span,
            wrt,
            x.as_deref(),
            y.as_deref(),
            w.as_deref(),
            mu.as_deref(),
            &out,
        ),
        Command::Check {
            seed,
            trials,
            max_size,
        } => cmd_check(seed, trials, max_size as usize),
        Command::Gradcheck {
            span,
            seed,
            trials,
            h,
            tol,
        } => cmd_gradcheck(&span, seed, trials, h, tol),
        Command::Bench { span, repeat, seed } => cmd_bench(&span, repeat, seed),
    }
}

fn load_span(path: &std::path::Path) -> Result<(ParametricSpan, Option<MeasVec>), CliError> {
    let file = read_span_file(path)?;
    elaborate(&file)
}

fn default_measure(span: &ParametricSpan, stored: Option<MeasVec>) -> MeasVec {
    stored.unwrap_or_else(|| MeasVec::ones(span.apex()))
}

fn cmd_make(spec: &std::path::Path, out: &std::path::Path) -> Result<ExitCode, CliError> {
    let file = read_span_file(spec)?;
    let (span, stored_mu) = elaborate(&file)?;
    if stored_mu.is_some() {
        eprintln!("note: the raw form has no measure field; the graph edge density was dropped");
    }
    write_span_file(out, &to_raw(&span))?;
    println!("E\t{}", span.apex().size);
    println!("X\t{}", span.input_space().size);
    println!("Y\t{}", span.output_space().size);
    println!("W\t{}", span.weight_space().size);
    if let SpanFile::Conv {
        n_i,
        n_o,
        input_shape,
        filter_shape,
        stride,
        dilation,
    } = &file
    {
        let spec = ConvSpec {
            in_channels: *n_i,
            out_channels: *n_o,
            input_shape: input_shape.clone(),
            filter_shape: filter_shape.clone(),
            stride: stride.clone(),
            dilation: dilation.clone(),
        };
        let shape = conv_output_shape(&spec)?;
        let rendered: Vec<String> = shape.iter().map(|extent| extent.to_string()).collect();
        println!("S_o\t{}", rendered.join(","));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_forward(
    span_path: &std::path::Path,
    x_path: &std::path::Path,
    w_path: &std::path::Path,
    mu_path: Option<&std::path::Path>,
    out: &std::path::Path,
) -> Result<ExitCode, CliError> {
    let (span, stored_mu) = load_span(span_path)?;
    let x = read_fun(x_path)?;
    let w = read_fun(w_path)?;
    let mu = match mu_path {
        Some(path) => read_meas(path)?,
        None => default_measure(&span, stored_mu),
    };
    let result = span.forward(&x, &w, &mu)?;
    write_meas(out, &result)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_backward(
    span_path: &std::path::Path,
    wrt: Wrt,
    x_path: Option<&std::path::Path>,
    y_path: Option<&std::path::Path>,
    w_path: Option<&std::path::Path>,
    mu_path: Option<&std::path::Path>,
    out: &std::path::Path,
) -> Result<ExitCode, CliError> {
    fn require<'a>(
        path: Option<&'a std::path::Path>,
        flag: &str,
        mode: &str,
    ) -> Result<&'a std::path::Path, CliError> {
        path.ok_or_else(|| CliError::Usage(format!("backward --wrt {} requires {}", mode, flag)))
    }

    let (span, stored_mu) = load_span(span_path)?;
    let mu = match mu_path {
        Some(path) => Some(read_meas(path)?),
        None => None,
    };
    match wrt {
        Wrt::Input => {
            let y = read_fun(require(y_path, "--y", "input")?)?;
            let w = read_fun(require(w_path, "--w", "input")?)?;
            let mu = mu.unwrap_or_else(|| default_measure(&span, stored_mu));
            write_meas(out, &span.backward_input(&y, &w, &mu)?)?;
        }
        Wrt::Weights => {
            let x = read_fun(require(x_path, "--x", "weights")?)?;
            let y = read_fun(require(y_path, "--y", "weights")?)?;
            let mu = mu.unwrap_or_else(|| default_measure(&span, stored_mu));
            write_meas(out, &span.backward_weights(&x, &y, &mu)?)?;
        }
        Wrt::Measure => {
            let x = read_fun(require(x_path, "--x", "measure")?)?;
            let y = read_fun(require(y_path, "--y", "measure")?)?;
            let w = read_fun(require(w_path, "--w", "measure")?)?;
            write_fun(out, &span.backward_measure(&x, &y, &w)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_all(reports: &[CheckReport]) -> ExitCode {
    for report in reports {
        println!("{}", report.to_line());
    }
    if reports.iter().all(|report| report.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_check(seed: u64, trials: u64, max_size: usize) -> Result<ExitCode, CliError> {
    let reports = run_axiom_suite(seed, trials, max_size)?;
    Ok(report_all(&reports))
}

fn cmd_gradcheck(
    span_path: &std::path::Path,
    seed: u64,
    trials: u64,
    h: f64,
    tol: f64,
) -> Result<ExitCode, CliError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(CliError::Usage(format!(
            "--h must be a positive finite step, got {}",
            h
        )));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!(
            "--tol must be a non-negative finite tolerance, got {}",
            tol
        )));
    }
    let (span, _) = load_span(span_path)?;
    let reports = gradcheck_span(&span, seed, trials, h, tol)?;
    Ok(report_all(&reports))
}

fn cmd_bench(span_path: &std::path::Path, repeat: u64, seed: u64) -> Result<ExitCode, CliError> {
    let (span, stored_mu) = load_span(span_path)?;
    let indexed = span.compile();
    let mut rng = trial_rng(seed, 0, 0);
    let x = random_funvec(&mut rng, span.input_space());
    let y = random_funvec(&mut rng, span.output_space());
    let w = random_funvec(&mut rng, span.weight_space());
    let mu = match stored_mu {
        Some(stored) => stored,
        None => random_measvec(&mut rng, span.apex()),
    };

    let row = |op: &str, path: &str, run: &mut dyn FnMut() -> MeasVec| {
        black_box(run());
        let mut samples: Vec<u128> = (0..repeat)
            .map(|_| {
                let start = Instant::now();
                black_box(run());
                start.elapsed().as_nanos()
            })
            .collect();
        samples.sort_unstable();
        println!("{}\t{}\t{}", op, path, samples[samples.len() / 2]);
    };

    let expect = "spaces were validated at load time";
    row("forward", "naive", &mut || {
        span.forward(&x, &w, &mu).expect(expect)
    });
    row("forward", "indexed", &mut || {
        indexed.forward(&x, &w, &mu).expect(expect)
    });
    row("backward_input", "naive", &mut || {
        span.backward_input(&y, &w, &mu).expect(expect)
    });
    row("backward_input", "indexed", &mut || {
        indexed.backward_input(&y, &w, &mu).expect(expect)
    });
    row("backward_weights", "naive", &mut || {
        span.backward_weights(&x, &y, &mu).expect(expect)
    });
    row("backward_weights", "indexed", &mut || {
        indexed.backward_weights(&x, &y, &mu).expect(expect)
    });
    Ok(ExitCode::SUCCESS)
}

//! ms-kit: evaluate and classify the Maier-Saupe bifurcation function.
//!
//! Subcommands: `eval` (B, its derivatives, f, f'), `zeros` (classified
//! zero set of B(., alpha)), `critical` (eta_min and alpha*), `sweep`
//! (bifurcation branch table over an alpha range), `verify` (the full
//! invariant battery).
//!
//! Exit codes: 0 success, 1 verification or consistency failure, 2 usage
//! error. All output is deterministic: identical arguments give
//! byte-identical output regardless of the `MS_KIT_THREADS` setting.

mod format;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ms_kit_core::classify::{BranchTable, Classifier};
use ms_kit_core::{verify, Error as CoreError};
use rayon::prelude::*;
use serde_json::Value;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use format::{
    fmt_sig, json_num, json_object, render_csv, render_table, DEFAULT_JSON_DIGITS,
    DEFAULT_TEXT_DIGITS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Significant digits (default: 12 for table/csv, 17 for json)
    #[arg(long, value_name = "N")]
    digits: Option<usize>,
}

impl OutputArgs {
    fn digits(&self) -> usize {
        self.digits.unwrap_or(match self.format {
            Format::Json => DEFAULT_JSON_DIGITS,
            _ => DEFAULT_TEXT_DIGITS,
        })
    }
}

/// Intensity argument: a positive real, or the literal `critical` meaning
/// the computed alpha*. The boundary cases are reachable exactly: `7.5`
/// parses to the binary64 nearest 7.5 and `critical` resolves to the same
/// alpha* the classifier uses.
#[derive(Debug, Clone)]
enum AlphaArg {
    Value(f64),
    Critical,
}

fn parse_alpha(s: &str) -> Result<AlphaArg, String> {
    if s == "critical" {
        return Ok(AlphaArg::Critical);
    }
    s.parse::<f64>()
        .map(AlphaArg::Value)
        .map_err(|e| format!("expected a number or `critical`: {e}"))
}

#[derive(Debug, Parser)]
#[command(
    name = "ms-kit",
    version,
    about = "Maier-Saupe bifurcation function toolkit",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate B, its first three eta-derivatives, f and f' at (eta, alpha)
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        eta: f64,
        #[arg(long, value_parser = parse_alpha)]
        alpha: AlphaArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Locate and classify all zeros of B(., alpha)
    Zeros {
        #[arg(long, value_parser = parse_alpha)]
        alpha: AlphaArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute eta_min and the critical intensity alpha* = f(eta_min)
    Critical {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bifurcation branch table over a range of alpha
    Sweep {
        /// Lower end of the intensity range (> 0)
        #[arg(long, value_name = "A")]
        alpha_min: f64,
        /// Upper end of the intensity range
        #[arg(long, value_name = "A")]
        alpha_max: f64,
        /// Number of grid points, endpoints included (>= 2)
        #[arg(long, value_name = "N")]
        steps: usize,
        /// Additionally emit a gnuplot script next to the CSV
        /// (requires --format csv and --out)
        #[arg(long)]
        gnuplot: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the verification battery (all invariants vs their oracles)
    Verify {
        /// Shorthand for --format json
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Failures carrying the process exit code.
enum Failure {
    /// Exit 2: bad arguments.
    Usage(String),
    /// Exit 1: verification or internal consistency failure.
    Consistency(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NonFiniteEta { .. }
            | CoreError::BadKmax { .. }
            | CoreError::BadAlpha { .. }
            | CoreError::BadStep { .. }
            | CoreError::BadArgument(_)
            | CoreError::NoRealRoots { .. } => Failure::Usage(e.to_string()),
            other => Failure::Consistency(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: see `ms-kit --help`");
            ExitCode::from(2)
        }
        Err(Failure::Consistency(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// MS_KIT_THREADS caps internal parallelism; 0 or unset means automatic.
fn configure_threads() {
    if let Ok(v) = std::env::var("MS_KIT_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { eta, alpha, output } => cmd_eval(eta, alpha, output),
        Command::Zeros { alpha, output } => cmd_zeros(alpha, output),
        Command::Critical { output } => cmd_critical(output),
        Command::Sweep {
            alpha_min,
            alpha_max,
            steps,
            gnuplot,
            output,
        } => cmd_sweep(alpha_min, alpha_max, steps, gnuplot, output),
        Command::Verify { json, output } => cmd_verify(json, output),
    }
}

fn resolve_alpha(arg: &AlphaArg) -> Result<(f64, Option<Classifier>), Failure> {
    match arg {
        AlphaArg::Value(v) => {
            if !v.is_finite() || *v <= 0.0 {
                return Err(Failure::Usage(format!(
                    "alpha must be positive and finite, got {v}"
                )));
            }
            Ok((*v, None))
        }
        AlphaArg::Critical => {
            let classifier = Classifier::new().map_err(Failure::from)?;
            let alpha = classifier.critical().alpha_star;
            Ok((alpha, Some(classifier)))
        }
    }
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Consistency(format!("write failed: {e}")))?;
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Consistency(format!("cannot write {}: {e}", path.display()))),
    }
}

fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("serialization");
    s.push('\n');
    s
}

fn cmd_eval(eta: f64, alpha: AlphaArg, output: OutputArgs) -> Result<(), Failure> {
    let (alpha, _) = resolve_alpha(&alpha)?;
    let e = ms_kit_core::eval_b(eta, alpha)?;
    let f = ms_kit_core::eval_f(eta)?;
    let fp = ms_kit_core::eval_f_prime(eta)?;
    let d = output.digits();
    let text = match output.format {
        Format::Json => json_text(&json_object(vec![
            ("eta", json_num(eta, d)),
            ("alpha", json_num(alpha, d)),
            ("b", json_num(e.b, d)),
            ("b1", json_num(e.b1, d)),
            ("b2", json_num(e.b2, d)),
            ("b3", json_num(e.b3, d)),
            ("f", json_num(f, d)),
            ("f_prime", json_num(fp, d)),
        ])),
        Format::Csv => render_csv(
            "eta,alpha,b,b1,b2,b3,f,f_prime",
            &[vec![
                fmt_sig(eta, d),
                fmt_sig(alpha, d),
                fmt_sig(e.b, d),
                fmt_sig(e.b1, d),
                fmt_sig(e.b2, d),
                fmt_sig(e.b3, d),
                fmt_sig(f, d),
                fmt_sig(fp, d),
            ]],
        ),
        Format::Table => render_table(
            &["eta", "alpha", "b", "b1", "b2", "b3", "f", "f_prime"],
            &[vec![
                fmt_sig(eta, d),
                fmt_sig(alpha, d),
                fmt_sig(e.b, d),
                fmt_sig(e.b1, d),
                fmt_sig(e.b2, d),
                fmt_sig(e.b3, d),
                fmt_sig(f, d),
                fmt_sig(fp, d),
            ]],
        ),
    };
    emit(&output, &text)
}

fn cmd_zeros(alpha: AlphaArg, output: OutputArgs) -> Result<(), Failure> {
    let (alpha, classifier) = resolve_alpha(&alpha)?;
    let classifier = match classifier {
        Some(c) => c,
        None => Classifier::new()?,
    };
    let zs = classifier.classify(alpha)?;
    let d = output.digits();
    let case = zs.case_label.to_string();
    let text = match output.format {
        Format::Json => {
            let zeros: Vec<Value> = zs
                .zeros
                .iter()
                .map(|z| {
                    json_object(vec![
                        ("eta", json_num(z.eta, d)),
                        ("multiplicity", Value::from(z.multiplicity)),
                        ("side", Value::from(z.side.to_string())),
                        ("bracket_lo", json_num(z.bracket.0, d)),
                        ("bracket_hi", json_num(z.bracket.1, d)),
                    ])
                })
                .collect();
            json_text(&json_object(vec![
                ("alpha", json_num(alpha, d)),
                ("case", Value::from(case)),
                ("zeros", Value::from(zeros)),
            ]))
        }
        Format::Csv => render_csv(
            "eta,multiplicity,side,bracket_lo,bracket_hi,case",
            &zs.zeros
                .iter()
                .map(|z| {
                    vec![
                        fmt_sig(z.eta, d),
                        z.multiplicity.to_string(),
                        z.side.to_string(),
                        fmt_sig(z.bracket.0, d),
                        fmt_sig(z.bracket.1, d),
                        case.clone(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Table => {
            let mut text = format!("alpha = {}  case = {}\n", fmt_sig(alpha, d), case);
            text.push_str(&render_table(
                &["eta", "multiplicity", "side", "bracket_lo", "bracket_hi"],
                &zs.zeros
                    .iter()
                    .map(|z| {
                        vec![
                            fmt_sig(z.eta, d),
                            z.multiplicity.to_string(),
                            z.side.to_string(),
                            fmt_sig(z.bracket.0, d),
                            fmt_sig(z.bracket.1, d),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ));
            text
        }
    };
    emit(&output, &text)
}

fn cmd_critical(output: OutputArgs) -> Result<(), Failure> {
    let classifier = Classifier::new()?;
    let cd = *classifier.critical();
    let inclusion_ok = cd.alpha_star > 20.0 / 3.0 && cd.alpha_star < 7.5;
    let d = output.digits();
    let text = match output.format {
        Format::Json => json_text(&json_object(vec![
            ("eta_min", json_num(cd.eta_min, d)),
            ("alpha_star", json_num(cd.alpha_star, d)),
            ("f_second_at_min", json_num(cd.f_second_at_min, d)),
            ("inclusion_ok", Value::from(inclusion_ok)),
        ])),
        Format::Csv => render_csv(
            "eta_min,alpha_star,f_second_at_min,inclusion_ok",
            &[vec![
                fmt_sig(cd.eta_min, d),
                fmt_sig(cd.alpha_star, d),
                fmt_sig(cd.f_second_at_min, d),
                inclusion_ok.to_string(),
            ]],
        ),
        Format::Table => format!(
            "eta_min          = {}\nalpha_star       = {}\nf_second_at_min  = {}\ninclusion 20/3 < alpha_star < 7.5: {}\n",
            fmt_sig(cd.eta_min, d),
            fmt_sig(cd.alpha_star, d),
            fmt_sig(cd.f_second_at_min, d),
            if inclusion_ok { "ok" } else { "FAILED" },
        ),
    };
    emit(&output, &text)?;
    if inclusion_ok {
        Ok(())
    } else {
        Err(Failure::Consistency(format!(
            "alpha* = {} escaped (20/3, 7.5)",
            cd.alpha_star
        )))
    }
}

fn cmd_sweep(
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    gnuplot: bool,
    output: OutputArgs,
) -> Result<(), Failure> {
    if !alpha_min.is_finite()
        || !alpha_max.is_finite()
        || alpha_min <= 0.0
        || alpha_max <= alpha_min
        || steps < 2
    {
        return Err(Failure::Usage(format!(
            "sweep needs 0 < alpha-min < alpha-max and steps >= 2, got \
             [{alpha_min}, {alpha_max}] with {steps} steps"
        )));
    }
    if gnuplot && (output.format != Format::Csv || output.out.is_none()) {
        return Err(Failure::Usage(
            "--gnuplot needs --format csv and --out (the script references the CSV file)".into(),
        ));
    }
    let classifier = Classifier::new()?;
    // grid points are independent; evaluate them in parallel but keep the
    // deterministic (alpha, branch) assembly order
    let grid = classifier.sweep_grid(alpha_min, alpha_max, steps);
    let sets = grid
        .par_iter()
        .map(|&a| classifier.classify(a))
        .collect::<Result<Vec<_>, _>>()?;
    let table = BranchTable::from_zero_sets(&sets, classifier.critical().eta_min);

    let d = output.digits();
    let text = match output.format {
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    json_object(vec![
                        ("alpha", json_num(r.alpha, d)),
                        ("branch", Value::from(r.branch.to_string())),
                        ("eta", json_num(r.eta, d)),
                        ("S", json_num(r.order_parameter, d)),
                        ("case", Value::from(r.case_label.to_string())),
                    ])
                })
                .collect();
            json_text(&Value::from(rows))
        }
        Format::Csv => render_csv(
            "alpha,branch,eta,S,case",
            &table
                .rows
                .iter()
                .map(|r| {
                    vec![
                        fmt_sig(r.alpha, d),
                        r.branch.to_string(),
                        fmt_sig(r.eta, d),
                        fmt_sig(r.order_parameter, d),
                        r.case_label.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Table => render_table(
            &["alpha", "branch", "eta", "S", "case"],
            &table
                .rows
                .iter()
                .map(|r| {
                    vec![
                        fmt_sig(r.alpha, d),
                        r.branch.to_string(),
                        fmt_sig(r.eta, d),
                        fmt_sig(r.order_parameter, d),
                        r.case_label.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    emit(&output, &text)?;

    if gnuplot {
        let csv_path = output.out.as_ref().expect("validated above");
        let script_path = {
            let mut p = csv_path.clone().into_os_string();
            p.push(".gp");
            PathBuf::from(p)
        };
        let script = gnuplot_script(&csv_path.display().to_string());
        std::fs::write(&script_path, script).map_err(|e| {
            Failure::Consistency(format!("cannot write {}: {e}", script_path.display()))
        })?;
    }
    Ok(())
}

fn gnuplot_script(csv: &str) -> String {
    format!(
        "# bifurcation diagram from `ms-kit sweep`\n\
         set datafile separator ','\n\
         set xlabel 'alpha'\n\
         set ylabel 'order parameter S'\n\
         set key left top\n\
         plot '{csv}' skip 1 using 1:(strcol(2) eq 'iso' ? column(4) : 1/0) title 'iso' with points, \\\n\
         \x20    '' skip 1 using 1:(strcol(2) eq 'neg1' ? column(4) : 1/0) title 'neg1' with points, \\\n\
         \x20    '' skip 1 using 1:(strcol(2) eq 'neg2/pos' ? column(4) : 1/0) title 'neg2/pos' with points\n"
    )
}

fn cmd_verify(json_flag: bool, mut output: OutputArgs) -> Result<(), Failure> {
    if json_flag {
        output.format = Format::Json;
    }
    let reports = verify::run_all()?;
    let d = output.digits.unwrap_or(match output.format {
        Format::Json => DEFAULT_JSON_DIGITS,
        _ => 3,
    });
    let all_passed = reports.iter().all(|r| r.passed);
    let text = match output.format {
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json_object(vec![
                        ("name", Value::from(r.name.clone())),
                        ("max_residual", json_num(r.max_residual, d)),
                        ("tolerance", json_num(r.tolerance, d)),
                        ("samples", Value::from(r.samples)),
                        ("passed", Value::from(r.passed)),
                    ])
                })
                .collect();
            json_text(&Value::from(rows))
        }
        Format::Csv => render_csv(
            "name,max_residual,tolerance,samples,passed",
            &reports
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        fmt_sig(r.max_residual, d.max(3)),
                        fmt_sig(r.tolerance, d.max(3)),
                        r.samples.to_string(),
                        if r.passed { "PASS" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Table => render_table(
            &["check", "max_residual", "tolerance", "samples", "status"],
            &reports
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        fmt_sig(r.max_residual, d.max(3)),
                        fmt_sig(r.tolerance, d.max(3)),
                        r.samples.to_string(),
                        if r.passed { "PASS" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    emit(&output, &text)?;
    if all_passed {
        Ok(())
    } else {
        let failed: Vec<&str> = reports
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.name.as_str())
            .collect();
        Err(Failure::Consistency(format!(
            "verification failed: {}",
            failed.join(", ")
        )))
    }
}

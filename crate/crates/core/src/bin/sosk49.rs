use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sosk49::classify::classify;
use sosk49::dyadic::local_report;
use sosk49::report::{classification_json, element_info_json, length_json, local_json, search_json};
use sosk49::sos::{decompose_with, length_with_cap, represent_by_form_with, FormKind, UniversalForm};
use sosk49::survey::{survey, OutputFormat, RunConfig};
use sosk49::text::{element_to_json, parse_element, parse_order_triple};
use sosk49::verify::run_verify;
use sosk49::{CubicOrderSpec, Element, Error, Result};

/// Sums of squares in the ring of integers of the cubic field of discriminant 49.
#[derive(Parser, Debug)]
#[command(name = "sosk49", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Defining polynomial x^3 + p x^2 + q x + r, as `p,q,r` or order JSON.
    #[arg(long, global = true, default_value = "1,-2,-1", allow_hyphen_values = true)]
    order: String,
    #[arg(long, global = true, default_value_t = 30)]
    trace_bound: u64,
    /// Largest length searched in orders other than K49.
    #[arg(long, global = true, default_value_t = 6)]
    max_length: usize,
    #[arg(long, global = true, env = "SOSK49_WORKERS")]
    workers: Option<usize>,
    /// Emit JSON instead of text for `survey` and `verify`.
    #[arg(long, global = true)]
    json: bool,
    /// Report canonical witnesses (`--deterministic=false` accepts any).
    #[arg(long, global = true, default_value_t = true, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    deterministic: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Length of every totally positive element up to the trace bound.
    Survey,
    /// Run every theorem check and print one line per check.
    Verify,
    /// Length of an element with a witness.
    Length { element: String },
    /// Sum of exactly N squares, or a representation by a universal form.
    Decompose {
        element: String,
        /// Number of squares; defaults to the length.
        #[arg(short, long)]
        n: Option<usize>,
        /// Allow zero terms.
        #[arg(long)]
        padded: bool,
        #[arg(long, value_enum)]
        form: Option<FormArg>,
    },
    /// Evaluate the five equivalent statements for a totally positive element.
    Classify { element: String },
    /// Dyadic data: valuation, local squares, three-square representability.
    Local { element: String },
    /// Ring arithmetic on one or two elements.
    Arith {
        #[arg(value_enum)]
        op: ArithOp,
        a: String,
        b: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormArg {
    #[value(name = "kala-yatsyna", alias = "ky")]
    KalaYatsyna,
    #[value(name = "diagonal-5var", alias = "d5")]
    DiagonalFive,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ArithOp {
    Info,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
}

fn config(g: &GlobalArgs, order: CubicOrderSpec) -> RunConfig {
    let defaults = RunConfig::default();
    RunConfig {
        order,
        trace_bound: g.trace_bound,
        max_length_cap: g.max_length,
        deterministic: g.deterministic,
        workers: g.workers.unwrap_or(defaults.workers),
        output: if g.json { OutputFormat::Json } else { OutputFormat::Text },
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

fn arith(order: &CubicOrderSpec, op: ArithOp, a: &Element, b: Option<&str>) -> Result<Value> {
    let second = || -> Result<Element> {
        let text = b.ok_or_else(|| Error::Config("this operation needs a second operand".into()))?;
        parse_element(order, text)
    };
    let result = match op {
        ArithOp::Info => return Ok(element_info_json(a)),
        ArithOp::Neg => -a,
        ArithOp::Add => a.try_add(&second()?)?,
        ArithOp::Sub => a.try_sub(&second()?)?,
        ArithOp::Mul => a.try_mul(&second()?)?,
        ArithOp::Div => a.divide_exact(&second()?)?,
        ArithOp::Pow => {
            let text = b.ok_or_else(|| Error::Config("pow needs an exponent".into()))?;
            let e: u32 = text.trim().parse().map_err(|_| Error::Parse { position: 0, message: format!("invalid exponent '{text}'") })?;
            a.pow(e)
        }
    };
    Ok(json!({ "result": element_to_json(&result), "text": result.to_string() }))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    let order = parse_order_triple(&g.order)?;
    let cfg = config(g, order.clone());
    cfg.validate()?;
    let mode = cfg.search_mode();
    match &cli.command {
        Command::Survey => {
            let report = survey(&cfg)?;
            match cfg.output {
                OutputFormat::Json => print_json(&report.to_json()),
                OutputFormat::Text => print!("{}", report.to_text()),
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify => {
            let report = run_verify(&cfg)?;
            match cfg.output {
                OutputFormat::Json => print_json(&report.to_json()),
                OutputFormat::Text => print!("{}", report.to_text()),
            }
            if let Some(bad) = report.first_failure() {
                eprintln!("first failing check: {} {}", bad.name, bad.counterexample.clone().unwrap_or(Value::Null));
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Length { element } => {
            let a = parse_element(&order, element)?;
            print_json(&length_json(&length_with_cap(&a, cfg.max_length_cap)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { element, n, padded, form } => {
            let a = parse_element(&order, element)?;
            if let Some(f) = form {
                let which = match f {
                    FormArg::KalaYatsyna => UniversalForm::KalaYatsyna,
                    FormArg::DiagonalFive => UniversalForm::DiagonalFive,
                };
                let found = cfg.install(|| represent_by_form_with(&a, which, mode))??;
                print_json(&search_json(&a, which.kind().tag(), None, true, found.as_ref()));
                return Ok(ExitCode::SUCCESS);
            }
            match n {
                None => print_json(&length_json(&length_with_cap(&a, cfg.max_length_cap)?)),
                Some(n) => {
                    let found = cfg.install(|| decompose_with(&a, *n, *padded, mode))?;
                    print_json(&search_json(&a, FormKind::SumOfSquares.tag(), Some(*n), *padded, found.as_ref()));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { element } => {
            let a = parse_element(&order, element)?;
            let report = classify(&a)?;
            print_json(&classification_json(&report));
            Ok(if report.consistent { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Local { element } => {
            let a = parse_element(&order, element)?;
            print_json(&local_json(&local_report(&a)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Arith { op, a, b } => {
            let a = parse_element(&order, a)?;
            print_json(&arith(&order, *op, &a, b.as_deref())?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

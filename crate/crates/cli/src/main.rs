//! `precourant`: check instance files of graded symplectic potentials.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use precourant::courant::{self, classify};
use precourant::gallery;
use precourant::instance::Instance;
use precourant::lifts;
use precourant::report::{check_instance, CheckOptions, Report, Status};
use precourant::{format_poly, parse_expr, poisson, Error};

#[derive(Parser)]
#[command(name = "precourant", version, about = "Exact checks for pre-Courant algebroid potentials")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomly sampled identities.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random samples per sampled identity.
    #[arg(long, global = true, default_value_t = 25)]
    samples: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable check on an instance file.
    Check { file: PathBuf },
    /// Evaluate a bracket of two expressions.
    #[command(group(ArgGroup::new("kind").required(true).args(["pre", "poisson", "pairing"])))]
    Bracket {
        file: PathBuf,
        left: String,
        right: String,
        /// Derived pre-bracket of two sections.
        #[arg(long)]
        pre: bool,
        /// Poisson bracket of the chart.
        #[arg(long)]
        poisson: bool,
        /// Symmetric pairing of two sections.
        #[arg(long)]
        pairing: bool,
    },
    /// Jacobiator of three sections, cross-checked against `{Θ,Θ}`.
    Jacobiator { file: PathBuf, a: String, b: String, c: String },
    /// Write the order-k tangent lift as a new instance file.
    Lift {
        file: PathBuf,
        k: usize,
        /// Output path; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the built-in example instances.
    Gallery {
        /// Only print the instance names.
        #[arg(long)]
        list: bool,
        /// Write every instance as a JSON file into this directory.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
        /// Instances to check; all when empty.
        names: Vec<String>,
    },
}

/// A failed run: usage problems exit 2, violated identities exit 1.
enum Failure {
    Usage(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Instance::parse_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn print_report(report: &Report) {
    println!("{}: {} (expected {})", report.instance, report.verdict, report.expected);
    println!("  {{Θ,Θ}} = {}", report.master);
    for r in &report.records {
        let tag = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Info => "info",
        };
        let mut line = format!("  {tag}  {}", r.identity);
        if let Some(v) = &r.value {
            line += &format!(" = {v}");
        }
        if let Some(w) = &r.witness {
            line += &format!("\n        witness: {w}");
        }
        println!("{line}");
    }
}

fn emit(reports: &[Report], json: bool) -> Result<(), Failure> {
    if json {
        if let [one] = reports {
            println!("{}", one.to_json());
        } else {
            println!("{}", serde_json::to_string_pretty(reports).expect("reports serialize"));
        }
    } else {
        reports.iter().for_each(print_report);
    }
    if reports.iter().all(Report::passed) {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let opts = CheckOptions {
        seed: cli.seed,
        samples: cli.samples,
    };
    match cli.command {
        Command::Check { file } => {
            let inst = load(&file)?;
            emit(&[check_instance(&inst, &opts)?], cli.json)
        }
        Command::Bracket {
            file,
            left,
            right,
            pre,
            poisson: _,
            pairing,
        } => {
            let inst = load(&file)?;
            let chart = inst.chart();
            let (x, y) = (parse_expr(&left, chart)?, parse_expr(&right, chart)?);
            let theta = &inst.potential;
            let value = if pre {
                courant::pre_bracket(theta, &x, &y)?
            } else if pairing {
                courant::pairing(theta, &x, &y)?
            } else {
                poisson::bracket(&x, &y, chart)?
            };
            let shown = format_poly(&value, chart);
            if cli.json {
                println!("{}", serde_json::json!({ "value": shown }));
            } else {
                println!("{shown}");
            }
            Ok(())
        }
        Command::Jacobiator { file, a, b, c } => {
            let inst = load(&file)?;
            let chart = inst.chart();
            let parse = |s: &str| parse_expr(s, chart);
            let (a, b, c) = (parse(&a)?, parse(&b)?, parse(&c)?);
            let theta = &inst.potential;
            let direct = courant::jacobiator(theta, &a, &b, &c)?;
            let via_master = courant::jacobiator_via_master(theta, &a, &b, &c)?;
            let agree = direct == via_master;
            let shown = format_poly(&direct, chart);
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "value": shown,
                        "master_cross_check": agree,
                        "via_master": format_poly(&via_master, chart),
                    })
                );
            } else {
                println!("{shown}");
                if agree {
                    println!("master bracket cross-check: agrees");
                } else {
                    println!("master bracket cross-check: FAILS, gives {}", format_poly(&via_master, chart));
                }
            }
            if agree {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
        Command::Lift { file, k, output } => {
            let inst = load(&file)?;
            let lifted = lifts::lift_instance(&inst, k)?;
            let verdict = lifts::weighted_classify(&lifted.potential)?.verdict;
            let text = lifted.to_json();
            match output {
                Some(path) => std::fs::write(&path, text + "\n")
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            eprintln!("{}: {verdict} (original {})", lifted.name, classify(&inst.potential).verdict);
            if verdict == classify(&inst.potential).verdict {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
        Command::Gallery { list, export, names } => {
            let names: Vec<String> = if names.is_empty() {
                gallery::NAMES.iter().map(|s| s.to_string()).collect()
            } else {
                names
            };
            let instances = names.iter().map(|n| gallery::build(n)).collect::<Result<Vec<_>, _>>()?;
            if list {
                names.iter().for_each(|n| println!("{n}"));
                return Ok(());
            }
            if let Some(dir) = export {
                std::fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                for inst in &instances {
                    let path = dir.join(format!("{}.json", inst.name));
                    std::fs::write(&path, inst.to_json() + "\n")
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                }
                return Ok(());
            }
            let reports = instances
                .iter()
                .map(|i| check_instance(i, &opts))
                .collect::<Result<Vec<_>, _>>()?;
            emit(&reports, cli.json)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use germ_cli::{error_json, exit_code_for, render_text, run_check, EXIT_INPUT, EXIT_INVARIANT, EXIT_OK};
use germ_core::report::{AnalyzeOptions, GermSpec, Report};
use germ_core::{analyze_with, MonomialOrder};

/// Exact invariants of isolated hypersurface singularity germs.
#[derive(Parser)]
#[command(name = "germ", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: algebra, residue pairing, spectrum, filtration, signatures.
    Analyze(GermArgs),
    /// Spectrum rows of a quasi-homogeneous germ.
    Spectrum(GermArgs),
    /// Gram matrix of the residue pairing.
    #[command(name = "residue-matrix")]
    ResidueMatrix(GermArgs),
    /// Weight filtration, primitive parts and level forms.
    #[command(name = "weight-filtration")]
    WeightFiltration(GermArgs),
    /// Both signature computations and their agreement.
    Signature(GermArgs),
    /// Run the corpus of germ files with expected values.
    Check {
        /// Directory of GermSpec JSON files.
        corpus: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Args)]
struct GermArgs {
    /// Polynomial text, e.g. "x^3 + y^4".
    polynomial: String,
    /// Comma-separated ordered variable list, e.g. x,y.
    #[arg(long, value_delimiter = ',', required = true)]
    vars: Vec<String>,
    #[arg(long, value_enum, default_value = "grevlex")]
    order: OrderArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Cross-check the Gram matrix with the floating Morse-sum oracle.
    #[arg(long)]
    oracle: bool,
    /// Perturbation scale for the oracle, a rational like 1/1000.
    #[arg(long, default_value = "1/1000")]
    oracle_eps: String,
    /// Drop perturbed critical points beyond this max-norm radius.
    #[arg(long)]
    oracle_radius: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Grevlex,
    Lex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn germ_spec(args: &GermArgs) -> GermSpec {
    GermSpec {
        name: None,
        polynomial: args.polynomial.clone(),
        variables: args.vars.clone(),
        order: Some(match args.order {
            OrderArg::Grevlex => MonomialOrder::Grevlex,
            OrderArg::Lex => MonomialOrder::Lex,
        }),
        expect: None,
    }
}

fn analyze_args(args: &GermArgs) -> Result<Report, germ_core::Error> {
    let options = AnalyzeOptions {
        oracle_eps: args.oracle.then(|| args.oracle_eps.clone()),
        oracle_radius: args.oracle_radius,
    };
    analyze_with(&germ_spec(args), &options)
}

fn emit_section(args: &GermArgs, section: fn(&Report) -> Result<serde_json::Value, germ_core::Error>) -> ExitCode {
    match analyze_args(args) {
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::from(exit_code_for(&err) as u8)
        }
        Ok(report) => match section(&report) {
            Err(err) => {
                eprintln!("{}", error_json(&err));
                ExitCode::from(exit_code_for(&err) as u8)
            }
            Ok(value) => {
                match args.format {
                    Format::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
                    Format::Text => println!("{}", render_text(&report)),
                }
                ExitCode::from(EXIT_OK as u8)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => match analyze_args(&args) {
            Err(err) => {
                eprintln!("{}", error_json(&err));
                ExitCode::from(exit_code_for(&err) as u8)
            }
            Ok(report) => {
                match args.format {
                    Format::Json => println!("{}", report.to_canonical_json()),
                    Format::Text => println!("{}", render_text(&report)),
                }
                ExitCode::from(EXIT_OK as u8)
            }
        },
        Command::Spectrum(args) => emit_section(&args, |r| match &r.spectrum {
            Some(rows) => Ok(serde_json::json!({ "spectrum": rows })),
            None => Err(germ_core::Error::NotQuasiHomogeneous),
        }),
        Command::ResidueMatrix(args) => emit_section(&args, |r| {
            Ok(serde_json::json!({
                "basis": r.basis,
                "gram": r.gram,
                "residue_functional": r.residue_functional,
                "hessian_residue": r.hessian_residue,
                "normalization": r.normalization,
            }))
        }),
        Command::WeightFiltration(args) => emit_section(&args, |r| {
            Ok(serde_json::json!({
                "jordan_partition": r.jordan_partition,
                "weight_filtration": r.weight_filtration,
                "level_forms": r.level_forms,
                "checks": r.bilinear_checks,
            }))
        }),
        Command::Signature(args) => emit_section(&args, |r| match &r.signature {
            Some(sig) => Ok(serde_json::to_value(sig).unwrap()),
            None => Err(germ_core::Error::NotQuasiHomogeneous),
        }),
        Command::Check { corpus, format } => match run_check(&corpus, &AnalyzeOptions::default()) {
            Err(msg) => {
                match format {
                    Format::Json => {
                        println!("{}", serde_json::json!({ "error": { "code": "CorpusError", "message": msg } }))
                    }
                    Format::Text => eprintln!("error: {msg}"),
                }
                ExitCode::from(EXIT_INPUT as u8)
            }
            Ok(outcomes) => {
                let failed = outcomes.iter().filter(|o| !o.passed).count();
                match format {
                    Format::Json => {
                        let rows: Vec<_> = outcomes
                            .iter()
                            .map(|o| {
                                serde_json::json!({
                                    "name": o.name,
                                    "passed": o.passed,
                                    "details": o.details,
                                })
                            })
                            .collect();
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&serde_json::json!({
                                "results": rows,
                                "total": outcomes.len(),
                                "failed": failed,
                            }))
                            .unwrap()
                        );
                    }
                    Format::Text => {
                        for o in &outcomes {
                            let mark = if o.passed { "PASS" } else { "FAIL" };
                            println!("{mark} {}: {}", o.name, o.details.join("; "));
                        }
                        println!("{} of {} corpus germs passed", outcomes.len() - failed, outcomes.len());
                    }
                }
                if failed == 0 {
                    ExitCode::from(EXIT_OK as u8)
                } else {
                    ExitCode::from(EXIT_INVARIANT as u8)
                }
            }
        },
    }
}

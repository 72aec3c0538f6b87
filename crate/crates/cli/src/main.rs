//! `spq`: exact verification of shifted Poisson structures with formal
//! derivation, their self-dual quantisations, and derived critical loci on
//! polynomial models.

mod parser;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use shifted_poisson::dcrit::{self, twisted_derham_cohomology, CheckResult, CritModel, PolySpec};
use shifted_poisson::laws;

use report::Report;

#[derive(Parser)]
#[command(
    name = "spq",
    about = "Exact checks for shifted Poisson structures, quantisations and derived critical loci",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Affine dimension m of the model.
    #[arg(long, global = true, default_value_t = 1)]
    dim: usize,

    /// Potential, e.g. "t^2/2" or "y1*y2 + y1^3".
    #[arg(long, global = true)]
    f: Option<String>,

    /// Comma-separated variable names; defaults to t for dim 1 and
    /// y1..ym otherwise.
    #[arg(long, global = true)]
    vars: Option<String>,

    /// Polynomial degree cutoff for cohomology computations.
    #[arg(long, global = true, default_value_t = 6)]
    cutoff: u32,

    /// Truncation order for h-series.
    #[arg(long, global = true, default_value_t = 6)]
    hbar_order: i64,

    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count per randomized law.
    #[arg(long, global = true, default_value_t = 200)]
    samples: u32,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Record wall-clock timings in the report (off by default so reports
    /// are byte-deterministic).
    #[arg(long, global = true, default_value_t = false)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the canonical exact symplectic structure on Crit(A^m, f).
    CritVerify,
    /// Verify the canonical self-dual quantisation identities.
    QuantiseVerify,
    /// Verify the strict Poisson-with-derivation equations and expansion.
    StrictDerivation,
    /// Twisted de Rham cohomology dimensions over Q(h).
    TwistedDerham,
    /// Randomized Schouten/DGLA law suite.
    SchoutenProps,
    /// Maurer-Cartan, cocone and simplicial checks.
    McCheck,
    /// Rees construction identities.
    ReesCheck,
    /// Twisted-differential-operator checks.
    TdoCheck,
    /// The quadratic-example regression.
    QuadRegression,
    /// Run every suite with the current flags.
    Suite,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CritVerify => "crit-verify",
        Command::QuantiseVerify => "quantise-verify",
        Command::StrictDerivation => "strict-derivation",
        Command::TwistedDerham => "twisted-derham",
        Command::SchoutenProps => "schouten-props",
        Command::McCheck => "mc-check",
        Command::ReesCheck => "rees-check",
        Command::TdoCheck => "tdo-check",
        Command::QuadRegression => "quad-regression",
        Command::Suite => "suite",
    }
}

struct ModelRequest {
    dim: usize,
    spec: PolySpec,
    rendered: String,
}

fn default_vars(dim: usize) -> Vec<String> {
    if dim == 1 {
        vec!["t".to_string()]
    } else {
        (1..=dim).map(|i| format!("y{}", i)).collect()
    }
}

fn resolve_model(cli: &Cli) -> Result<ModelRequest, parser::ParseError> {
    let vars: Vec<String> = match &cli.vars {
        Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
        None => default_vars(cli.dim),
    };
    let (spec, rendered) = match &cli.f {
        Some(src) => {
            let poly = parser::parse_potential(src, &vars)?;
            let rendered = poly.render(&vars);
            (poly.into_spec(), rendered)
        }
        None => (Vec::new(), "0".to_string()),
    };
    Ok(ModelRequest {
        dim: vars.len().max(cli.dim),
        spec,
        rendered,
    })
}

fn build_model(req: &ModelRequest) -> Result<CritModel, String> {
    CritModel::new(req.dim, &req.spec).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<Report, String> {
    let name = command_name(&cli.command);
    let mut report = Report::new(name, cli.seed);
    let needs_model = matches!(
        cli.command,
        Command::CritVerify
            | Command::QuantiseVerify
            | Command::StrictDerivation
            | Command::TwistedDerham
            | Command::McCheck
            | Command::Suite
    );
    let model_req = if needs_model {
        let req = resolve_model(cli).map_err(|e| e.to_string())?;
        report.input("dim", req.dim);
        report.input("f", &req.rendered);
        Some(req)
    } else {
        None
    };

    match &cli.command {
        Command::CritVerify => {
            let model = build_model(model_req.as_ref().unwrap())?;
            match dcrit::verify_exact_structure(&model) {
                Ok(cs) => report.extend(cs),
                Err(e) => report.push_error("exact_structure", e),
            }
        }
        Command::QuantiseVerify => {
            let model = build_model(model_req.as_ref().unwrap())?;
            report.extend(dcrit::verify_quantisation(&model));
            report.extend(dcrit::verify_anti_involution(&model));
        }
        Command::StrictDerivation => {
            let model = build_model(model_req.as_ref().unwrap())?;
            match dcrit::verify_strict_derivation(&model) {
                Ok(cs) => report.extend(cs),
                Err(e) => report.push_error("strict_derivation", e),
            }
            match shifted_poisson::rees::expand_formal_derivation(
                model.polyvectors(),
                &{
                    let t =
                        dcrit::strict_poisson_with_derivation(&model).map_err(|e| e.to_string())?;
                    t.d0.add(&t.d1)
                },
                cli.hbar_order,
            ) {
                Ok(rep) => report.extend(rep.checks),
                Err(e) => report.push_error("expand_formal_derivation", e),
            }
        }
        Command::TwistedDerham => {
            let req = model_req.as_ref().unwrap();
            report.input("cutoff", cli.cutoff);
            let rep = twisted_derham_cohomology(req.dim, &req.spec, cli.cutoff);
            report.push(CheckResult {
                name: format!("twisted_derham_dims{:?}", rep.dims),
                pass: rep.stabilized,
                residual: if rep.stabilized {
                    None
                } else {
                    Some(format!(
                        "dims at cutoff {}: {:?}; at cutoff {}: {:?}",
                        cli.cutoff,
                        rep.dims,
                        cli.cutoff + 1,
                        rep.dims_next
                    ))
                },
            });
            // Jacobian-ring cross-check in top degree for the same potential
            let (h0, stable) = dcrit::koszul_h0(req.dim, &req.spec, cli.cutoff);
            report.push(CheckResult {
                name: format!("koszul_h0_dim[{}]", h0),
                pass: stable,
                residual: if stable {
                    None
                } else {
                    Some("not stabilized".to_string())
                },
            });
        }
        Command::SchoutenProps => {
            report.input("dim", cli.dim);
            report.input("samples", cli.samples);
            report.extend(laws::schouten_law_suite(cli.dim, cli.samples, cli.seed));
            report.extend(laws::cocone_law_suite(cli.dim, cli.samples, cli.seed + 1));
            report.extend(laws::operator_law_suite(cli.samples, cli.seed + 2));
        }
        Command::McCheck => {
            let model = build_model(model_req.as_ref().unwrap())?;
            report.extend(laws::mc_suite(&model));
        }
        Command::ReesCheck => {
            report.input("samples", cli.samples);
            report.input("hbar_order", cli.hbar_order);
            report.extend(laws::rees_suite(cli.samples, cli.seed, cli.hbar_order));
        }
        Command::TdoCheck => {
            report.input("dim", cli.dim);
            report.input("samples", cli.samples);
            report.extend(laws::tdo_suite(cli.dim.min(2), cli.samples, cli.seed));
        }
        Command::QuadRegression => {
            report.extend(dcrit::quad_regression());
        }
        Command::Suite => {
            let req = model_req.as_ref().unwrap();
            report.input("cutoff", cli.cutoff);
            report.input("samples", cli.samples);
            let model = build_model(req)?;
            match dcrit::verify_exact_structure(&model) {
                Ok(cs) => report.extend(cs),
                Err(e) => report.push_error("exact_structure", e),
            }
            report.extend(dcrit::verify_quantisation(&model));
            report.extend(dcrit::verify_anti_involution(&model));
            match dcrit::verify_strict_derivation(&model) {
                Ok(cs) => report.extend(cs),
                Err(e) => report.push_error("strict_derivation", e),
            }
            report.extend(laws::mc_suite(&model));
            report.extend(laws::calibration_suite());
            for m in 1..=3usize {
                report.extend(laws::schouten_law_suite(m, cli.samples, cli.seed));
                report.extend(laws::cocone_law_suite(m, cli.samples, cli.seed + 1));
            }
            report.extend(laws::operator_law_suite(cli.samples, cli.seed + 2));
            report.extend(laws::rees_suite(
                cli.samples.min(100),
                cli.seed,
                cli.hbar_order,
            ));
            for m in 1..=2usize {
                report.extend(laws::tdo_suite(m, cli.samples, cli.seed));
            }
            report.extend(dcrit::quad_regression());
            let dmod = dcrit::twisted_dmodule_action(&model);
            report.extend(dmod.checks);
            for (i, derived) in dmod.defects.iter().enumerate() {
                report.push(CheckResult {
                    name: format!("connection_defect_derived[{}]", i),
                    pass: true,
                    residual: Some(derived.clone()),
                });
            }
            let rep = twisted_derham_cohomology(req.dim, &req.spec, cli.cutoff);
            report.push(CheckResult {
                name: format!("twisted_derham_dims{:?}", rep.dims),
                pass: rep.stabilized,
                residual: if rep.stabilized {
                    None
                } else {
                    Some(format!(
                        "dims {:?} vs {:?} at next cutoff",
                        rep.dims, rep.dims_next
                    ))
                },
            });
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            report.finalize(started, cli.timings);
            let body = report.to_json();
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, body + "\n") {
                        eprintln!("error: cannot write report: {}", e);
                        return ExitCode::from(2);
                    }
                }
                None => {
                    let mut stdout = std::io::stdout().lock();
                    let _ = writeln!(stdout, "{}", body);
                }
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {}", message);
            ExitCode::from(2)
        }
    }
}

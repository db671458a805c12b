//! Command-line front end for the link verification engine.
//!
//! Exit codes: 0 when the run certifies/validates, 1 when checks fail,
//! 2 on input errors.

use clap::{Parser, Subcommand, ValueEnum};
use smale_core::certifier::schema::{
    emit_certificate, parse_config_document, parse_rational, parse_rational_list,
    render_classification_text, CertFormat,
};
use smale_core::certifier::{
    certify, classification_checks, classify_document, enumerate_parameters, ConfigChoice,
    EinsteinStatus, FamilyParams,
};
use smale_core::kahler_einstein::klt_box_check;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "smale",
    version,
    about = "Exact verification of Seifert-fibered 5-manifold links: topology, \
             connected-sum classification and the Einstein-metric checklist"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline for the built-in family and emit a certificate.
    Certify {
        /// Connected summands k; the base surface is blown up at k-1 points.
        #[arg(long)]
        k: u64,
        /// Fiber multiplicity along C1'.
        #[arg(long)]
        m1: u64,
        /// Fiber multiplicity along C2'.
        #[arg(long)]
        m2: u64,
        /// Configuration document: {"type":"symmetric","c":["1/3","1/2"]} or {"type":"generic"}.
        #[arg(long, value_name = "FILE", conflicts_with = "symmetric")]
        config: Option<PathBuf>,
        /// Comma-separated c-values of a symmetric configuration, e.g. 1/3,1/2.
        #[arg(long, value_name = "c1,c2,...")]
        symmetric: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List admissible (m1, m2) pairs with both entries at most MAX.
    Enumerate {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        max: u64,
    },
    /// Classify generic Seifert data from a structured input document.
    H1 {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Run the klt inequality suite at explicit bounds.
    KltCheck {
        /// Number of blown-up points k'.
        #[arg(long)]
        kprime: usize,
        /// Bound b1 as an exact rational, e.g. 5/12.
        #[arg(long)]
        b1: String,
        /// Bound b2 as an exact rational, e.g. 9/20.
        #[arg(long)]
        b2: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

const EXIT_OK: u8 = 0;
const EXIT_CHECKS_FAILED: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli.command))
}

fn run(command: Command) -> u8 {
    match command {
        Command::Certify {
            k,
            m1,
            m2,
            config,
            symmetric,
            format,
        } => run_certify(k, m1, m2, config, symmetric, format),
        Command::Enumerate { k, max } => run_enumerate(k, max),
        Command::H1 { input } => run_h1(&input),
        Command::KltCheck { kprime, b1, b2 } => run_klt_check(kprime, &b1, &b2),
    }
}

fn run_certify(
    k: u64,
    m1: u64,
    m2: u64,
    config: Option<PathBuf>,
    symmetric: Option<String>,
    format: Format,
) -> u8 {
    let config = match (config, symmetric) {
        (Some(path), _) => {
            let text = match std::fs::read_to_string(&path) {
                Ok(text) => text,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", path.display());
                    return EXIT_INPUT_ERROR;
                }
            };
            match parse_config_document(&text) {
                Ok(config) => config,
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_INPUT_ERROR;
                }
            }
        }
        (None, Some(list)) => match parse_rational_list(&list) {
            Ok(c) => ConfigChoice::Symmetric(c),
            Err(e) => {
                eprintln!("error: --symmetric: {e}");
                return EXIT_INPUT_ERROR;
            }
        },
        (None, None) => {
            return emit_and_grade(
                &certify(&FamilyParams::with_default_symmetric(k, m1, m2)),
                format,
            )
        }
    };
    let params = FamilyParams { k, m1, m2, config };
    emit_and_grade(&certify(&params), format)
}

fn emit_and_grade(cert: &smale_core::certifier::Certificate, format: Format) -> u8 {
    let format = match format {
        Format::Text => CertFormat::Text,
        Format::Structured => CertFormat::Structured,
    };
    print!("{}", emit_certificate(cert, format));
    match cert.einstein_status {
        EinsteinStatus::Certified | EinsteinStatus::OpenNeighborhoodClaim => EXIT_OK,
        EinsteinStatus::Failed => EXIT_CHECKS_FAILED,
    }
}

fn run_enumerate(k: u64, max: u64) -> u8 {
    match enumerate_parameters(k, max) {
        Ok(pairs) => {
            for (m1, m2) in pairs {
                println!("{m1} {m2}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn run_h1(input: &PathBuf) -> u8 {
    let text = match std::fs::read_to_string(input) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", input.display());
            return EXIT_INPUT_ERROR;
        }
    };
    match classify_document(&text) {
        Ok(report) => {
            print!("{}", render_classification_text(&report));
            if classification_checks(&report).iter().all(|c| c.pass) {
                EXIT_OK
            } else {
                EXIT_CHECKS_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

fn run_klt_check(kprime: usize, b1: &str, b2: &str) -> u8 {
    let (b1, b2) = match (parse_rational(b1), parse_rational(b2)) {
        (Ok(b1), Ok(b2)) => (b1, b2),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    match klt_box_check(kprime, &b1, &b2) {
        Ok(report) => {
            println!(
                "klt suite at k' = {}, (d1, d2) in [0, {}] x [0, {}]:",
                report.k_prime, report.b1, report.b2
            );
            for r in &report.records {
                let verdict = if r.pass { "PASS" } else { "FAIL" };
                let vertex = r
                    .vertex
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ");
                println!(
                    "  [{verdict}] {}: worst case {} (bound {}) at (d1, d2) = ({vertex})",
                    r.label, r.worst_case, r.bound
                );
            }
            let overall = if report.passes() { "PASS" } else { "FAIL" };
            println!("overall: {overall}");
            if report.passes() {
                EXIT_OK
            } else {
                EXIT_CHECKS_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT_ERROR
        }
    }
}

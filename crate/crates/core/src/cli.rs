//! Command-line surface of the `qbflab` binary.
//!
//! Exit codes: `0` TRUE / success, `1` FALSE, `2` other errors, `64` usage,
//! `65` unreadable or invalid input, `66` search budget exceeded.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::audit::{run_claim, ClaimParams, CorpusParams, MatrixFamily, CLAIM_IDS};
use crate::error::Error;
use crate::io::{parse, parse_qbf_bytes, print, Format};
use crate::normalize::{build_phi_prime, prenex_phi_prime, prenex_phi_prime_shared, to_standard_form, StandardFormQbf};
use crate::qbf::{classify_prefix, evaluate_qbf_with, EvalOptions, PrenexQbf};
use crate::skolem::{bounded_skolem_witness, exists_skolem_witness_with_budget, verify_certificate, SkolemCertificate,
    DEFAULT_SEARCH_BUDGET};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INPUT: i32 = 65;
pub const EXIT_BUDGET: i32 = 66;

#[derive(Debug, Parser)]
#[command(name = "qbflab", version, about = "Evaluate, transform and audit prenex QBFs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Input {
    /// Input file; stdin when omitted or `-`.
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print TRUE or FALSE.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Evaluate both branches of every quantifier.
        #[arg(long)]
        no_short_circuit: bool,
        /// Report the number of visited recursion nodes on stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Print the prefix class, e.g. `PI 4`.
    Classify {
        #[command(flatten)]
        input: Input,
    },
    /// Convert to the alternating ∀-led standard form.
    Normalize {
        #[command(flatten)]
        input: Input,
        /// Write the variable mapping as JSON.
        #[arg(long)]
        mapping_out: Option<PathBuf>,
    },
    /// Build and prenex Φ′ (the input is normalized first if needed).
    PhiPrime {
        #[command(flatten)]
        input: Input,
        /// Share the hatted and fresh existential variables across clauses.
        #[arg(long)]
        shared: bool,
    },
    /// Search for a Skolem certificate and print it as JSON.
    Skolemize {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Check a certificate; prints VALID or INVALID.
    VerifyCert {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Decide whether a certificate with all ANF sizes ≤ bound exists.
    BoundedSkolem {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        bound: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Run one audit and write its JSON report.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Exhaustive2var,
    RandomAst,
    AllSmallCnf,
}

#[derive(Debug, clap::Args)]
struct AuditArgs {
    /// One of the claim ids listed by `--help`.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(CLAIM_IDS))]
    claim: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FamilyArg::Exhaustive2var)]
    family: FamilyArg,
    /// 1-based prefix positions `a,b` for the exhaustive family.
    #[arg(long, value_parser = parse_pair)]
    pair: Option<(usize, usize)>,
    #[arg(long, default_value_t = 2)]
    max_clauses: usize,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 4)]
    max_depth: usize,
    #[arg(long, default_value_t = 10)]
    k_max: usize,
    #[arg(long, default_value_t = 4)]
    max_vars: usize,
    #[arg(long)]
    ordered_pairs_only: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `a,b`")?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((num(a)?, num(b)?))
}

enum Failure {
    Usage(String),
    Input(String),
    Budget(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::ArityOverflow { .. } => Failure::Budget(e.to_string()),
            Error::Parse(_)
            | Error::CertificateMismatch(_)
            | Error::OpenFormula(_)
            | Error::DuplicateQuantification(_)
            | Error::DuplicateName(_)
            | Error::NotCnf(_)
            | Error::Json(_)
            | Error::NotStandardForm(_) => Failure::Input(e.to_string()),
            Error::InvalidCorpus(_) => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read_input(input: &Input) -> Result<PrenexQbf, Failure> {
    let mut bytes = Vec::new();
    match &input.file {
        Some(p) if p.as_os_str() != "-" => {
            bytes = std::fs::read(p).map_err(|e| io_failure(p, e))?;
        }
        _ => {
            std::io::stdin()
                .read_to_end(&mut bytes)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        }
    }
    let name = input.file.as_deref().unwrap_or(Path::new("<stdin>")).display().to_string();
    let parsed = match input.format {
        Format::Text => parse_qbf_bytes(&bytes),
        Format::Qdimacs => match std::str::from_utf8(&bytes) {
            Ok(s) => parse(s, Format::Qdimacs),
            Err(e) => return Err(Failure::Input(format!("{name}: input is not valid UTF-8: {e}"))),
        },
    };
    parsed.map_err(|e| Failure::Input(format!("{name}:{e}")))
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Other(e.to_string()))
}

fn truth(out: &mut dyn Write, value: bool) -> Result<i32, Failure> {
    write_out(out, if value { "TRUE\n" } else { "FALSE\n" })?;
    Ok(if value { EXIT_TRUE } else { EXIT_FALSE })
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Eval {
            input,
            no_short_circuit,
            stats,
        } => {
            let q = read_input(&input)?;
            let outcome = evaluate_qbf_with(
                &q,
                EvalOptions {
                    short_circuit: !no_short_circuit,
                },
            )?;
            if stats {
                let _ = writeln!(stderr, "visited_nodes {}", outcome.visited_nodes);
            }
            truth(stdout, outcome.value)
        }
        Command::Classify { input } => {
            let q = read_input(&input)?;
            write_out(stdout, &format!("{}\n", classify_prefix(&q)))?;
            Ok(EXIT_TRUE)
        }
        Command::Normalize { input, mapping_out } => {
            let q = read_input(&input)?;
            let (s, mapping) = to_standard_form(&q);
            if let Some(path) = mapping_out {
                std::fs::write(&path, mapping.to_json() + "\n").map_err(|e| io_failure(&path, e))?;
            }
            write_out(stdout, &print(s.qbf(), input.format)?)?;
            Ok(EXIT_TRUE)
        }
        Command::PhiPrime { input, shared } => {
            let q = read_input(&input)?;
            let s = match StandardFormQbf::from_qbf(q.clone()) {
                Ok(s) => s,
                Err(_) => to_standard_form(&q).0,
            };
            let p = build_phi_prime(&s);
            let out = if shared {
                prenex_phi_prime_shared(&p)
            } else {
                prenex_phi_prime(&p)
            };
            write_out(stdout, &print(&out, input.format)?)?;
            Ok(EXIT_TRUE)
        }
        Command::Skolemize { input, budget } => {
            let q = read_input(&input)?;
            match exists_skolem_witness_with_budget(&q, budget)? {
                Some(c) => {
                    write_out(stdout, &(c.to_json() + "\n"))?;
                    Ok(EXIT_TRUE)
                }
                None => truth(stdout, false),
            }
        }
        Command::VerifyCert { input, cert } => {
            let q = read_input(&input)?;
            let text = std::fs::read_to_string(&cert).map_err(|e| io_failure(&cert, e))?;
            let c = SkolemCertificate::from_json(&text)?;
            let valid = verify_certificate(&q, &c)?;
            write_out(stdout, if valid { "VALID\n" } else { "INVALID\n" })?;
            Ok(if valid { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::BoundedSkolem { input, bound, budget } => {
            let q = read_input(&input)?;
            truth(stdout, bounded_skolem_witness(&q, bound, budget)?.is_some())
        }
        Command::Audit(args) => {
            let family = match args.family {
                FamilyArg::Exhaustive2var => MatrixFamily::Exhaustive2Var { pair: args.pair },
                FamilyArg::RandomAst => MatrixFamily::RandomAst {
                    count: args.count,
                    max_depth: args.max_depth,
                },
                FamilyArg::AllSmallCnf => MatrixFamily::AllSmallCnf {
                    max_clauses: args.max_clauses,
                },
            };
            let params = ClaimParams {
                corpus: CorpusParams {
                    seed: args.seed,
                    n: args.n,
                    family,
                },
                ordered_pairs_only: args.ordered_pairs_only,
                k_max: args.k_max,
                max_vars: args.max_vars,
            };
            let report = run_claim(&args.claim, &params)?;
            let json = report.to_json() + "\n";
            match args.out {
                Some(path) => std::fs::write(&path, json).map_err(|e| io_failure(&path, e))?,
                None => write_out(stdout, &json)?,
            }
            Ok(EXIT_TRUE)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_TRUE
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Input(m) => (EXIT_INPUT, m),
                Failure::Budget(m) => (EXIT_BUDGET, m),
                Failure::Other(m) => (EXIT_ERROR, m),
            };
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

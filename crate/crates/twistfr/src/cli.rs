//! Command-line front door: argument parsing, suite orchestration, reports.
//!
//! Exit codes: 0 all checks pass, 1 at least one failure, 2 usage or parse
//! error.

use crate::par::{configure_jobs, Parallelism};
use crate::pattern::{boundary_words, classify_pair, parse_pattern, surface_invariants, DecoratedPattern};
use crate::repvar::{groupoid_cardinality, orbit_count, parse_group_spec, parse_twist, TwistData};
use crate::report::{emit_report, print_summary, sort_reports, CheckReport, Status};
use crate::suite::{algebra_for, describe, poisson_checks_for, quantisation_check_for, Suite};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "twistfr",
    about = "Exact verification of twisted Fock-Rosly Poisson structures and their first-order quantisations on decorated surfaces",
    version
)]
struct Cli {
    /// Seed for sampled fallback paths (default suites are exact and
    /// seed-independent)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for parallel suites (1 = sequential)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PatternArgs {
    /// Pattern file
    #[arg(long)]
    pattern: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Print the pair-class table of a gluing pattern
    Classify(PatternArgs),
    /// Print genus and boundary count, with boundary words
    Surface(PatternArgs),
    /// Count twisted-conjugation orbits of a finite group
    Orbits {
        /// Group spec: z<m>, s<m>, or a Cayley-table JSON file
        #[arg(long)]
        group: String,
        /// Comma-separated twist tokens: id, u<unit>, inner:<element>
        #[arg(long)]
        twists: String,
    },
    /// Run Poisson-structure checks on a pattern
    Poisson {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Algebra: sl2, sl3 or sl4 (default: the pattern's Dynkin tag)
        #[arg(long)]
        algebra: Option<String>,
        /// Comma-separated checks: jacobi, agree, equivariance
        #[arg(long, default_value = "jacobi,agree,equivariance")]
        checks: String,
        /// Write a JSON report
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Verification suites
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// The quantisation identity on one pattern: commutator/h equals the
    /// Poisson bracket for every generator pair
    Quantisation {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Every built-in suite
    All {
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn load_pattern(path: &PathBuf) -> Result<DecoratedPattern, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_pattern(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn finish(mut reports: Vec<CheckReport>, json: Option<&PathBuf>) -> i32 {
    sort_reports(&mut reports);
    print_summary(&reports);
    if let Some(path) = json {
        if let Err(e) = emit_report(&reports, path) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if reports.iter().all(|r| r.status == Status::Pass) {
        0
    } else {
        1
    }
}

/// Entry point used by both `main` and the CLI tests.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path with exit
            // code 0; keep that behaviour and map real errors to 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_jobs(cli.jobs);
    let mode = match cli.jobs {
        Some(1) => Parallelism::Sequential,
        _ => Parallelism::auto(),
    };

    match cli.command {
        Command::Classify(args) => {
            let d = match load_pattern(&args.pattern) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            println!("{}", describe(&d));
            let n = d.pattern.n;
            for i in 0..n {
                for j in i + 1..n {
                    let class = classify_pair(&d.pattern, i, j).expect("indices in range");
                    println!("edges ({}, {}): {class}", i + 1, j + 1);
                }
            }
            if n < 2 {
                println!("single edge: no pairs to classify");
            }
            0
        }
        Command::Surface(args) => {
            let d = match load_pattern(&args.pattern) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let (g, r) = surface_invariants(&d.pattern);
            println!("g={g} r={r}");
            for (k, w) in boundary_words(&d).iter().enumerate() {
                println!(
                    "boundary {}: {}   (Out-holonomy {})",
                    k + 1,
                    w.render(),
                    w.holonomy
                );
            }
            0
        }
        Command::Orbits { group, twists } => {
            let g = match parse_group_spec(&group) {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let mut parsed = Vec::new();
            for tok in twists.split(',') {
                match parse_twist(&g, tok.trim()) {
                    Ok(t) => parsed.push(t),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return 2;
                    }
                }
            }
            let rho = TwistData { twists: parsed };
            match (orbit_count(&g, &rho), groupoid_cardinality(&g, &rho)) {
                (Ok(orbits), Ok(card)) => {
                    println!("group order {}", g.order);
                    println!("orbits {orbits}");
                    println!("groupoid cardinality {card}");
                    0
                }
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Command::Poisson {
            pattern,
            algebra,
            checks,
            json,
        } => {
            let d = match load_pattern(&pattern.pattern) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let g = match algebra_for(&d, algebra.as_deref()) {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let r = crate::lie::standard_r_matrix(&g);
            let names: Vec<String> = checks.split(',').map(|s| s.trim().to_string()).collect();
            let reports = poisson_checks_for(&d, &g, &r, &names, mode, cli.seed);
            finish(reports, json.as_ref())
        }
        Command::Verify(VerifyCommand::Quantisation {
            pattern,
            algebra,
            json,
        }) => {
            let d = match load_pattern(&pattern.pattern) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let g = match algebra_for(&d, algebra.as_deref()) {
                Ok(g) => g,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let r = crate::lie::standard_r_matrix(&g);
            let (reports, outcomes, space) = quantisation_check_for(&d, &g, &r, mode);
            let matched = outcomes.iter().filter(|o| o.matches).count();
            println!(
                "{} of {} generator pairs match",
                matched,
                outcomes.len()
            );
            for o in outcomes.iter().filter(|o| !o.matches).take(10) {
                println!(
                    "  mismatch ({}, {}): {}",
                    space.name(o.f),
                    space.name(o.g),
                    o.difference.clone().unwrap_or_default()
                );
            }
            finish(reports, json.as_ref())
        }
        Command::Verify(VerifyCommand::All { json }) => {
            let suite = Suite {
                mode,
                seed: cli.seed,
            };
            finish(suite.run_all(), json.as_ref())
        }
    }
}

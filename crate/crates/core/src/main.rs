use std::process::ExitCode;
use std::sync::Arc;

use clap::{CommandFactory, Parser, Subcommand};

use unitlab::group::{Builder, PGroup, DEFAULT_ORDER_CAP};
use unitlab::harness::{
    builtin_catalog, parse_group_spec, parse_selection, render_report, run_checks, RunConfig, Summary, CHECKS,
    DEFAULT_SAMPLES,
};
use unitlab::prime::Prime;
use unitlab::recognizer::{classify_kyl, distinguish, recover_group_invariants, v_invariants};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "unitlab", version, about = "Unit groups of modular group algebras of p-groups")]
struct Cli {
    /// Print every check id with the operation it drives.
    #[arg(long)]
    list_checks: bool,

    /// Largest group order to construct (overrides UNITLAB_CAP).
    #[arg(long, global = true)]
    cap: Option<usize>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in catalog.
    List {
        #[arg(long, default_value_t = 3)]
        p: u32,
    },
    /// Build a group and print its structure.
    Build { spec: String },
    /// Print group and unit-group invariants.
    Invariants { spec: String },
    /// Run checks (comma-separated ids or `all`) on the catalog.
    Verify {
        checks: String,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Decide whether two groups have non-isomorphic unit groups.
    Distinguish { left: String, right: String },
    /// Run every check for p = 3 and p = 5.
    Report {
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn resolve_cap(flag: Option<usize>) -> Result<usize, String> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var("UNITLAB_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| format!("UNITLAB_CAP is not an integer: {v}")),
        Err(_) => Ok(DEFAULT_ORDER_CAP),
    }
}

fn build(spec: &str, builder: &Builder) -> Result<Arc<PGroup>, String> {
    let parsed = parse_group_spec(spec).map_err(|e| e.to_string())?;
    parsed.evaluate(builder).map(Arc::new).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_checks {
        for c in CHECKS {
            println!("{:<13} {}  [{}]", c.id, c.operation, c.statement);
        }
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        let _ = Cli::command().print_help();
        return ExitCode::from(EXIT_USAGE);
    };
    let cap = match resolve_cap(cli.cap) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let builder = Builder::with_cap(cap);

    match command {
        Command::List { p } => {
            let p = match Prime::new(p) {
                Ok(p) => p,
                Err(e) => return usage(e),
            };
            for e in builtin_catalog(p, cap) {
                println!("{:<45} order={:<4} role={:?}", e.label, e.order, e.role);
            }
            ExitCode::SUCCESS
        }
        Command::Build { spec } => {
            let g = match build(&spec, &builder) {
                Ok(g) => g,
                Err(e) => return usage(e),
            };
            println!("group {}", g.label());
            println!("order {}", g.order());
            println!("exponent {}", g.exponent());
            println!("abelian {}", g.is_abelian());
            println!("center {}", g.center().order());
            println!("derived {}", g.commutator_subgroup().order());
            println!("agemo {}", g.agemo().order());
            println!("frattini {} cyclic={}", g.frattini().order(), g.frattini().is_cyclic());
            println!("classes {} noncentral={}", g.conjugacy_partition().len(), g.conjugacy_partition().t());
            ExitCode::SUCCESS
        }
        Command::Invariants { spec } => {
            let g = match build(&spec, &builder) {
                Ok(g) => g,
                Err(e) => return usage(e),
            };
            println!("group {}", g.label());
            println!("brute {}", g.group_invariants());
            match v_invariants(&g) {
                Ok(ui) => {
                    println!("units {ui}");
                    match recover_group_invariants(&ui) {
                        Ok(gi) => {
                            println!("recovered {gi}");
                            match classify_kyl(&gi, g.p()) {
                                Ok(k) => println!("kyl {k}"),
                                Err(e) => println!("kyl unavailable: {e}"),
                            }
                        }
                        Err(e) => println!("recovered unavailable: {e}"),
                    }
                }
                Err(e) => println!("units unavailable: {e}"),
            }
            ExitCode::SUCCESS
        }
        Command::Verify { checks, p, seed, samples } => {
            let selection = match parse_selection(&checks) {
                Ok(s) => s,
                Err(e) => return usage(e),
            };
            let p = match Prime::new(p) {
                Ok(p) => p,
                Err(e) => return usage(e),
            };
            let reports = match run_checks(&selection, &RunConfig { p, seed, samples, cap }) {
                Ok(r) => r,
                Err(e) => return usage(e),
            };
            print!("{}", render_report(&reports));
            if Summary::of(&reports).fail > 0 {
                ExitCode::from(EXIT_FAIL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Distinguish { left, right } => {
            let (g, h) = match (build(&left, &builder), build(&right, &builder)) {
                (Ok(g), Ok(h)) => (g, h),
                (Err(e), _) | (_, Err(e)) => return usage(e),
            };
            match distinguish(&g, &h) {
                Ok(v) => {
                    println!("left  {}", v.left);
                    println!("right {}", v.right);
                    match v.params {
                        Some(k) => println!("verdict {} kyl {k}", v.kind),
                        None => println!("verdict {}", v.kind),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => usage(e),
            }
        }
        Command::Report { out, seed, samples } => {
            let selection: Vec<&str> = CHECKS.iter().map(|c| c.id).collect();
            let mut reports = Vec::new();
            for p in [3, 5] {
                let cfg = RunConfig { p: Prime::new(p).expect("small prime"), seed, samples, cap };
                match run_checks(&selection, &cfg) {
                    Ok(r) => reports.extend(r),
                    Err(e) => return usage(e),
                }
            }
            let text = render_report(&reports);
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(EXIT_FAIL);
                    }
                    print!("{}", Summary::of(&reports));
                    println!();
                }
                None => print!("{text}"),
            }
            if Summary::of(&reports).fail > 0 {
                ExitCode::from(EXIT_FAIL)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}

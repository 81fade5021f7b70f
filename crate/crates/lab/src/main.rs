use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use obdd_phase_core::certify::certified_lower_bound;
use obdd_phase_core::cnf::Cnf;
use obdd_phase_core::obdd::{compile_with_strategy, heuristic_order, Strategy, DEFAULT_CAPACITY};
use obdd_phase_core::random::{Distribution, Seed};
use obdd_phase_core::sat::solve;
use obdd_phase_core::{dimacs, Error as CoreError};
use obdd_phase_lab::config::{clause_count, parse_rational};
use obdd_phase_lab::plot::{plot, PlotKind};
use obdd_phase_lab::sweep::run_sweep;
use obdd_phase_lab::{LabError, SweepConfig};

#[derive(Parser)]
#[command(name = "phase-lab", version, about = "Random 2-CNF phase-transition experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a random formula in DIMACS (trial 0 of a sweep with the same seed).
    Sample {
        #[arg(long, default_value = "f2")]
        dist: Distribution,
        #[arg(long)]
        n: usize,
        /// Clause count; exclusive with --delta.
        #[arg(long, conflicts_with = "delta")]
        m: Option<usize>,
        /// Clause density δ; m = round(δ n).
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide satisfiability of a DIMACS formula (stdin when no file is given).
    Solve { input: Option<PathBuf> },
    /// Compile to an OBDD and print its size; --out writes the node dump.
    Compile {
        input: Option<PathBuf>,
        #[arg(long, default_value = "sifting")]
        order: Strategy,
        #[arg(long, default_value_t = DEFAULT_CAPACITY)]
        capacity: usize,
        /// Seed for the randomized strategies.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified OBDD lower bound under an order, with its fooling set.
    Certify {
        input: Option<PathBuf>,
        #[arg(long, default_value = "identity")]
        order: Strategy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a sweep from a JSON config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides outputPath.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a trial CSV as SVG.
    Plot {
        input: PathBuf,
        #[arg(long)]
        kind: PlotKind,
        #[arg(long)]
        out: PathBuf,
        /// Height at which BLOWUP medians are drawn.
        #[arg(long)]
        capacity: Option<usize>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
    Capacity(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Capacity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Capacity(m) => m,
        }
    }
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Config { .. } | LabError::Core(_) => Failure::Usage(e.to_string()),
            LabError::Io { .. } | LabError::Input { .. } | LabError::Schema { .. } => Failure::Io(e.to_string()),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CapacityExceeded { .. } => Failure::Capacity(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn read_formula(input: Option<&Path>) -> Result<Cnf, Failure> {
    let (name, text) = match input {
        Some(p) if p != Path::new("-") => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            (p.display().to_string(), text)
        }
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            ("stdin".to_string(), text)
        }
    };
    dimacs::parse(&text).map_err(|e| Failure::Io(format!("{name}: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Sample { dist, n, m, delta, seed, out } => {
            let m = match (m, delta) {
                (Some(m), _) => m,
                (None, Some(d)) => clause_count(n, parse_rational(&d).map_err(Failure::Usage)?) as usize,
                (None, None) => return Err(Failure::Usage("one of --m or --delta is required".into())),
            };
            let f = dist.sample(n, m, Seed::for_trial(seed, 0, n as u64, m as u64))?;
            emit(out.as_deref(), &dimacs::write(&f))
        }
        Command::Solve { input } => {
            let f = read_formula(input.as_deref())?;
            let res = solve(&f, &Default::default());
            match res.witness {
                Some(w) if res.satisfiable => println!("SAT\nv {} 0", w.to_string().trim()),
                _ => println!("UNSAT"),
            }
            Ok(())
        }
        Command::Compile { input, order, capacity, seed, out } => {
            let f = read_formula(input.as_deref())?;
            let b = compile_with_strategy(&f, &order, Seed::new(seed, 0), capacity)?;
            println!("size {}", b.size());
            println!("order {}", b.order());
            println!("models {}", b.model_count());
            if let Some(p) = out {
                emit(Some(&p), &b.dump())?;
            }
            Ok(())
        }
        Command::Certify { input, order, seed } => {
            let f = read_formula(input.as_deref())?;
            let pi = heuristic_order(&f, &order, Seed::new(seed, 0))?;
            let lb = certified_lower_bound(&f, &pi)?;
            println!("order: {pi}");
            println!("floor: {}", lb.floor);
            match lb.theta {
                Some(t) => println!("theta: {t}"),
                None => println!("theta: NA"),
            }
            match lb.certificate {
                Some(cert) => println!("{cert}"),
                None => println!("certificate: none"),
            }
            Ok(())
        }
        Command::Sweep { config, out } => {
            let mut cfg = SweepConfig::from_file(&config)?;
            if let Some(out) = out {
                cfg.output_path = out;
            }
            let res = run_sweep(&cfg)?;
            println!("{} rows -> {}", res.records.len(), res.csv_path.display());
            println!("summary -> {}", res.summary_path.display());
            Ok(())
        }
        Command::Plot { input, kind, out, capacity } => {
            let svg = plot(&input, kind, capacity)?;
            emit(Some(&out), &svg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

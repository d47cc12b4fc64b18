use std::path::PathBuf;
use std::process::ExitCode;

use ballfix::hahn::DEFAULT_TRUNCATION;
use ballfix_cli::scenario::{self, BanachScenario, OrderedScenario, PadicScenario};
use ballfix_cli::{run_scenario, sweeps, Format, InputError, RunReport};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ballfix",
    version,
    about = "Fixed point solvers and verifiers on ball spaces"
)]
struct Cli {
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 20240607)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and compare against its expected block.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Hensel lift of a simple root modulo p to precision N.
    Hensel {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        precision: u32,
        /// Coefficients c0,c1,..,ck.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, allow_hyphen_values = true)]
        start: i64,
    },
    /// Certified fixed point of v -> A v + b over the rationals.
    Banach {
        /// Row-major matrix entries followed by b, e.g. "1/2,0,0,1/3;1,1" for A;b.
        #[arg(long, allow_hyphen_values = true)]
        affine: String,
        #[arg(long = "C")]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long)]
        eps: String,
    },
    /// Fixed point of an o-contraction on truncated Hahn series.
    Oag {
        /// affine:a,b for x -> a x + b.
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long)]
        ratio: String,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        trunc: i64,
    },
    /// Finite topology tools.
    Topo {
        #[command(subcommand)]
        action: TopoAction,
    },
    /// Exhaustive and seeded sweeps.
    Sweep {
        #[command(subcommand)]
        family: Family,
    },
}

#[derive(Subcommand)]
enum TopoAction {
    Sweep {
        #[arg(long, default_value_t = 3)]
        max_points: usize,
    },
}

#[derive(Subcommand)]
enum Family {
    Nfpt {
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        #[arg(long, default_value_t = 5)]
        max_balls: usize,
    },
    Gfpt {
        #[arg(long, default_value_t = 3)]
        max_points: usize,
    },
    Topo {
        #[arg(long, default_value_t = 3)]
        max_points: usize,
    },
    Banach {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).collect()
}

/// `A;b` with `A` row-major; the dimension is the length of `b`.
fn parse_affine(text: &str) -> Result<(Vec<Vec<String>>, Vec<String>), InputError> {
    let (a, b) = text
        .split_once(';')
        .ok_or_else(|| InputError::Invalid("--affine must be A;b".into()))?;
    let b = split_list(b);
    let entries = split_list(a);
    if entries.len() != b.len() * b.len() {
        return Err(InputError::Invalid(format!(
            "A has {} entries, expected {}",
            entries.len(),
            b.len() * b.len()
        )));
    }
    Ok((entries.chunks(b.len()).map(<[String]>::to_vec).collect(), b))
}

fn dispatch(cli: &Cli) -> Result<RunReport, InputError> {
    match &cli.command {
        Command::Verify { scenario } => run_scenario(scenario),
        Command::Hensel {
            prime,
            precision,
            poly,
            start,
        } => {
            let poly = split_list(poly)
                .iter()
                .map(|c| {
                    c.parse()
                        .map_err(|_| InputError::Invalid(format!("bad coefficient \"{c}\"")))
                })
                .collect::<Result<Vec<i64>, _>>()?;
            let s = PadicScenario {
                kind: None,
                name: None,
                prime: *prime,
                precision: *precision,
                poly,
                start: *start,
                expected: None,
            };
            scenario::run_padic(&s, "hensel")
        }
        Command::Banach {
            affine,
            c,
            start,
            eps,
        } => {
            let (a, b) = parse_affine(affine)?;
            let s = BanachScenario {
                kind: None,
                name: None,
                a,
                b,
                c: c.clone(),
                start: split_list(start),
                eps: eps.clone(),
                budget: None,
                expected: None,
            };
            scenario::run_banach(&s, "banach")
        }
        Command::Oag {
            map,
            ratio,
            start,
            trunc,
        } => {
            let s = OrderedScenario {
                kind: None,
                name: None,
                map: map.clone(),
                ratio: ratio.clone(),
                start: start.clone(),
                trunc: Some(*trunc),
                budget: None,
                expected: None,
            };
            scenario::run_ordered(&s, "oag")
        }
        Command::Topo {
            action: TopoAction::Sweep { max_points },
        } => sweeps::topo(*max_points),
        Command::Sweep { family } => match family {
            Family::Nfpt {
                max_points,
                max_balls,
            } => sweeps::nfpt(*max_points, *max_balls),
            Family::Gfpt { max_points } => sweeps::gfpt(*max_points),
            Family::Topo { max_points } => sweeps::topo(*max_points),
            Family::Banach { count } => sweeps::banach(*count, cli.seed),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0
            || rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global()
                .is_err()
        {
            eprintln!("error: --jobs must be a positive thread count");
            return ExitCode::from(InputError::EXIT_CODE);
        }
    }
    match dispatch(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::from(report.status().exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(InputError::EXIT_CODE)
        }
    }
}

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use gwave::io::{cmd_check, cmd_converge, cmd_oracle, cmd_solve, oracle_csv, read_problem, write_atomic, RunConfig};
use gwave::oracle::mol_integrate;
use gwave::{Error, Result};

#[derive(Parser)]
#[command(name = "gwave", version, about = "Rothe solver for damped wave equations on weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem file (TOML)
    #[arg(long)]
    problem: PathBuf,
    /// Edge list, overriding the problem file
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Vertex measures, overriding the problem file
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Domain vertex list, overriding the problem file
    #[arg(long)]
    domain: Option<PathBuf>,
    /// Number of time steps, overriding the problem file
    #[arg(long)]
    n: Option<usize>,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve and write the trajectory as CSV
    Solve {
        #[command(flatten)]
        args: ProblemArgs,
    },
    /// Cauchy convergence study over nested grids
    Converge {
        #[command(flatten)]
        args: ProblemArgs,
        /// Comma-separated grid sizes, each dividing the next
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Uniform sample times per distance
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Compare the Rothe solution with the Runge–Kutta reference
    Oracle {
        #[command(flatten)]
        args: ProblemArgs,
        /// Reference step; defaults to 1e-5·T
        #[arg(long)]
        dt: Option<f64>,
        /// Also export the reference trajectory (t, vertex, u, v)
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Run the invariant suite and print a pass/fail table
    Check {
        #[command(flatten)]
        args: ProblemArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

impl ProblemArgs {
    /// Problem file with command-line overrides applied. Override paths are
    /// taken relative to the working directory.
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = read_problem(&self.problem)?;
        let cwd = |p: &Path| std::env::current_dir().map(|d| d.join(p)).unwrap_or_else(|_| p.to_path_buf());
        if let Some(g) = &self.graph {
            cfg.graph = Some(cwd(g));
        }
        if let Some(m) = &self.measure {
            cfg.measure = Some(cwd(m));
        }
        if let Some(d) = &self.domain {
            cfg.domain = Some(cwd(d));
        }
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(cwd(o));
        }
        Ok(cfg)
    }
}

fn deliver(cfg: &RunConfig, data: &str) -> Result<()> {
    match cfg.out_path() {
        Some(path) => write_atomic(&path, data),
        None => std::io::stdout()
            .write_all(data.as_bytes())
            .map_err(|e| Error::Io {
                path: "<stdout>".into(),
                source: e,
            }),
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Solve { args } => {
            let cfg = args.config()?;
            deliver(&cfg, &cmd_solve(&cfg)?)
        }
        Command::Converge { args, n_list, samples } => {
            let cfg = args.config()?;
            deliver(&cfg, &cmd_converge(&cfg, &n_list, samples)?)
        }
        Command::Oracle { args, dt, trajectory } => {
            let cfg = args.config()?;
            let dt = dt.unwrap_or(1e-5 * cfg.horizon);
            let (csv, err) = cmd_oracle(&cfg, dt)?;
            if let Some(path) = trajectory {
                let prob = cfg.load()?;
                let traj = mol_integrate(&prob.graph, &prob.dom, &prob.spec, dt, &[])?;
                write_atomic(&path, &oracle_csv(&prob.graph, &prob.dom, &traj)?)?;
            }
            deliver(&cfg, &csv)?;
            if cfg.out.is_some() {
                println!("sup_u_error={:.16e} sup_w_error={:.16e}", err.u, err.w);
            }
            Ok(())
        }
        Command::Check { args, seed } => {
            let cfg = args.config()?;
            let report = cmd_check(&cfg, seed)?;
            deliver(&cfg, &report.render())?;
            match report.failed() {
                0 => Ok(()),
                failed => Err(Error::ChecksFailed { failed }),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GWAVE_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let text = e.to_string();
            let message: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("error[E_USAGE]: {}", message.join(" ").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::FAILURE
        }
    }
}

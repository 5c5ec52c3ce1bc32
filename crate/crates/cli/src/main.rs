//! Command-line front end for the Delone-set IDS experiments.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;
use delone_ids::Result;

#[derive(Parser)]
#[command(
    name = "delone-ids",
    version,
    about = "Delone sets, local decorations, and integrated-density-of-states experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set (optionally decorated) and write it to a file.
    Generate(CommonArgs),
    /// Decorate a point set with the planted graph and write the result.
    Decorate(CommonArgs),
    /// Assemble the operator on the largest window; export matrix and
    /// eigenvalues.
    Spectrum(CommonArgs),
    /// Compute IDS curves along the window list plus a convergence table.
    Ids(CommonArgs),
    /// Detect IDS jump candidates on the largest window.
    Jumps(CommonArgs),
    /// Run the full verification pipeline and emit a pass/fail verdict.
    Verify(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key=value configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Lattice generator: square | triangular.
    #[arg(long)]
    lattice: Option<String>,

    /// Cut-and-project generator: ab (Ammann-Beenker octagonal).
    #[arg(long)]
    cutproject: Option<String>,

    /// Point-set file as the generator.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Window half-widths, comma separated (e.g. 4,6,8).
    #[arg(long = "L")]
    l: Option<String>,

    /// Decoration scale in the form r=<value>.
    #[arg(long)]
    decorate: Option<String>,

    /// Operator rule: nn | decorated.
    #[arg(long)]
    rule: Option<String>,

    /// Energy targets, comma separated.
    #[arg(long = "E")]
    e: Option<String>,

    /// RNG seed (generators and audits).
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Eigenvalue clustering tolerance (default: automatic).
    #[arg(long = "tol-cluster")]
    tol_cluster: Option<f64>,

    /// Minimal jump weight to report.
    #[arg(long = "weight-floor")]
    weight_floor: Option<f64>,

    /// Lattice spacing.
    #[arg(long)]
    spacing: Option<f64>,

    /// Hopping threshold (nn) or host threshold (decorated).
    #[arg(long)]
    theta: Option<f64>,

    /// Spatial dimension (square lattice supports 1-3; default 2).
    #[arg(long)]
    dim: Option<usize>,

    /// Expected verify outcome: jump | no-jump.
    #[arg(long)]
    expect: Option<String>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<(ExperimentConfig, usize)> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(lattice) = &self.lattice {
            cfg.set("generator", lattice)?;
        }
        if let Some(cp) = &self.cutproject {
            match cp.as_str() {
                "ab" | "octagonal" | "ammann-beenker" => cfg.set("generator", "ab")?,
                other => {
                    return Err(delone_ids::Error::UnknownGenerator(other.into()));
                }
            }
        }
        if let Some(input) = &self.input {
            cfg.set("generator", "file")?;
            cfg.input = Some(input.clone());
        }
        if let Some(l) = &self.l {
            cfg.set("L", l)?;
        }
        if let Some(dec) = &self.decorate {
            let value = dec.strip_prefix("r=").unwrap_or(dec);
            cfg.set("decorate_r", value)?;
            if self.rule.is_none() && cfg.rule == "nn" {
                cfg.set("rule", "decorated")?;
            }
        }
        if let Some(rule) = &self.rule {
            cfg.set("rule", rule)?;
        }
        if let Some(e) = &self.e {
            cfg.set("E", e)?;
        }
        if let Some(seed) = self.seed {
            cfg.set("seed", &seed.to_string())?;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(tol) = self.tol_cluster {
            cfg.tol_cluster = Some(tol);
        }
        if let Some(floor) = self.weight_floor {
            cfg.set("weight_floor", &floor.to_string())?;
        }
        if let Some(spacing) = self.spacing {
            cfg.set("spacing", &spacing.to_string())?;
        }
        if let Some(theta) = self.theta {
            cfg.set("theta", &theta.to_string())?;
        }
        if let Some(expect) = &self.expect {
            cfg.set("expect", expect)?;
        }
        let dim = self.dim.unwrap_or(2);
        if dim == 0 || dim > 3 {
            return Err(delone_ids::Error::InvalidArgument(
                "dim must be 1, 2 or 3".into(),
            ));
        }
        if dim != 2 && cfg.generator != "square" {
            return Err(delone_ids::Error::InvalidArgument(format!(
                "generator {} supports only dim=2",
                cfg.generator
            )));
        }
        if dim != 2 && cfg.decorate_r.is_some() {
            return Err(delone_ids::Error::InvalidArgument(
                "decoration requires dim=2".into(),
            ));
        }
        Ok((cfg, dim))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let run = || -> Result<(String, bool)> {
        match &cli.command {
            Command::Generate(args) => {
                let (cfg, dim) = args.resolve()?;
                Ok((commands::cmd_generate(&cfg, dim)?, true))
            }
            Command::Decorate(args) => {
                let (cfg, dim) = args.resolve()?;
                Ok((commands::cmd_decorate(&cfg, dim)?, true))
            }
            Command::Spectrum(args) => {
                let (cfg, dim) = args.resolve()?;
                Ok((commands::cmd_spectrum(&cfg, dim)?, true))
            }
            Command::Ids(args) => {
                let (cfg, dim) = args.resolve()?;
                Ok((commands::cmd_ids(&cfg, dim)?, true))
            }
            Command::Jumps(args) => {
                let (cfg, dim) = args.resolve()?;
                Ok((commands::cmd_jumps(&cfg, dim)?, true))
            }
            Command::Verify(args) => {
                let (cfg, dim) = args.resolve()?;
                commands::cmd_verify(&cfg, dim)
            }
        }
    };
    match run() {
        Ok((message, ok)) => {
            println!("{message}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

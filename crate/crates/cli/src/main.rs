use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shadowlab_cli::{
    chains_export, cmd_chains, cmd_ex1, cmd_ex41, cmd_odometer, parse_delta_list,
    ExperimentConfig, LimitPlan, OdometerPart, RunReport, SystemKind,
};
use shadowlab_core::Error;

#[derive(Parser)]
#[command(
    name = "shadowlab",
    version,
    about = "Exact-arithmetic shadowing experiments on zero-dimensional systems"
)]
struct Cli {
    /// JSON configuration file; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed recorded in every randomized report.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the rendered report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON record per verification report; byte-stable across reruns.
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Pointed-odometer counterexample pipeline.
    Ex41 {
        #[arg(long = "K", alias = "k")]
        k_level: Option<usize>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Ladder-space pipelines: non-shadowability, limit shadowing,
    /// chain-recurrence localization.
    Ex1 {
        #[arg(long)]
        eps: Option<String>,
        /// Comma-separated exact rationals, e.g. 1/4,1/16,1/64.
        #[arg(long)]
        deltas: Option<String>,
        #[arg(long)]
        range: Option<u32>,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Odometer suite; without a subcommand every part runs.
    Odometer {
        #[arg(long, global = true)]
        depth: Option<u32>,
        #[arg(long, global = true)]
        eps: Option<String>,
        #[arg(long, global = true)]
        trials: Option<u32>,
        #[arg(long, global = true)]
        len: Option<usize>,
        #[command(subcommand)]
        part: Option<OdoCommand>,
    },
    /// Chain-graph decompositions and refinement across deltas.
    Chains {
        #[arg(long)]
        system: Option<String>,
        #[arg(long)]
        deltas: Option<String>,
        #[arg(long)]
        range: Option<u32>,
        #[arg(long)]
        depth: Option<u32>,
        /// Write adjacency-list exports of every graph to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OdoCommand {
    /// Shadowing modulus plus randomized chain-continuity trials.
    Shadow,
    /// Full enumeration of all delta-pseudo orbits (small depths).
    Exhaustive,
    /// Constructive limit shadowing; plans: seeded, exact:<start>,
    /// single-jump:<index>:<value>.
    Limit {
        #[arg(long, default_value = "seeded")]
        plan: String,
    },
    /// Ergodic pseudo orbit shadowed on a thick set.
    Thick,
    /// Metric axioms and the +1 isometry, exhaustively.
    Isometry,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    match &cli.command {
        Command::Ex41 { k_level, depth, window } => {
            cfg.system = SystemKind::Pointed;
            if let Some(k) = k_level {
                cfg.k_level = *k;
            }
            if let Some(d) = depth {
                cfg.depth = *d;
            }
            if let Some(w) = window {
                cfg.window = *w;
            }
        }
        Command::Ex1 { eps, deltas, range, window } => {
            cfg.system = SystemKind::Ladder;
            if let Some(e) = eps {
                cfg.eps = e.parse()?;
            }
            if let Some(d) = deltas {
                cfg.deltas = parse_delta_list(d)?;
            }
            if let Some(r) = range {
                cfg.range = *r;
            }
            if let Some(w) = window {
                cfg.window = *w;
            }
        }
        Command::Odometer { depth, eps, trials, len, .. } => {
            cfg.system = SystemKind::Odometer;
            if let Some(d) = depth {
                cfg.depth = *d;
            }
            if let Some(e) = eps {
                cfg.eps = e.parse()?;
            }
            if let Some(t) = trials {
                cfg.trials = *t;
            }
            if let Some(l) = len {
                cfg.len = *l;
            }
        }
        Command::Chains { system, deltas, range, depth, .. } => {
            if let Some(s) = system {
                cfg.system = s.parse()?;
            }
            if let Some(d) = deltas {
                cfg.deltas = parse_delta_list(d)?;
            }
            if let Some(r) = range {
                cfg.range = *r;
            }
            if let Some(d) = depth {
                cfg.depth = *d;
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli, cfg: &ExperimentConfig) -> Result<RunReport, Error> {
    match &cli.command {
        Command::Ex41 { .. } => cmd_ex41(cfg),
        Command::Ex1 { .. } => cmd_ex1(cfg),
        Command::Odometer { part, .. } => {
            let part = match part {
                None => OdometerPart::All,
                Some(OdoCommand::Shadow) => OdometerPart::Shadow,
                Some(OdoCommand::Exhaustive) => OdometerPart::Exhaustive,
                Some(OdoCommand::Limit { plan }) => OdometerPart::Limit(plan.parse::<LimitPlan>()?),
                Some(OdoCommand::Thick) => OdometerPart::Thick,
                Some(OdoCommand::Isometry) => OdometerPart::Isometry,
            };
            cmd_odometer(cfg, &part)
        }
        Command::Chains { export, .. } => {
            let run = cmd_chains(cfg)?;
            if let Some(path) = export {
                let text = chains_export(cfg)?;
                std::fs::write(path, text)
                    .map_err(|e| Error::Parameter(format!("cannot write {path:?}: {e}")))?;
            }
            Ok(run)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let run = match execute(&cli, &cfg) {
        Ok(run) => run,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = match cli.format {
        Format::Text => run.render_text(),
        Format::Machine => run.render_machine(),
    };
    print!("{rendered}");
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &rendered) {
            eprintln!("cannot write {path:?}: {e}");
            return ExitCode::from(2);
        }
    }
    if run.is_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

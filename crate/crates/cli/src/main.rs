use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qthermo::config::{parse_assignment, parse_grid, Format, Scenario, SweepConfig};
use qthermo::output::{emit, render};
use qthermo::{run, CliError, CliResult};

/// Heat, work and efficiency sweeps for quantum thermal machines.
///
/// Exit codes: 0 success, 2 config error, 3 numerical failure.
#[derive(Parser, Debug)]
#[command(name = "qthermo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Steady state of the modulated two-bath qubit over a delta grid.
    ///
    /// Parameters (defaults): omega0 (3), t_hot (2), t_cold (1),
    /// gamma_hot (1), gamma_cold (1), delta (required, usually swept).
    Minimal(Common),
    /// Otto cycle with a squeezed hot bath.
    ///
    /// Parameters (defaults): omega_cold (1), omega_hot (2), t_hot (4),
    /// t_cold (1), r (0), fock_dim (tail rule; fock backend only).
    Otto {
        #[command(flatten)]
        common: Common,
        /// moments (closed form, default) or fock (truncated Fock space)
        #[arg(long)]
        backend: Option<String>,
    },
    /// Entropy inequalities for seeded random initial states.
    ///
    /// Parameters (defaults): count (500), dim (2), omega (1), gamma (1),
    /// temperature (1), t_end (10), passive_only (0), dt (stability rule),
    /// ramp_to and ramp_time (drive omega linearly; off by default).
    Inequalities(Common),
    /// Energy ledger of one trajectory as CSV columns
    /// t,E,W,exchange,heat,diss_ergotropy,entropy.
    ///
    /// Presets: coherent-decay (alpha 2, dim 40, T 0), fock-decay (qubit in
    /// |1>, T 0), relaxation (seeded random state, T 1). Parameters alpha,
    /// level, dim, omega, gamma, temperature, t_end, dt, stride, ramp_to and
    /// ramp_time override the preset.
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        preset: Option<String>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// JSON config file; flags take precedence over its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sweep points
    #[arg(long)]
    workers: Option<usize>,
    /// Fixed parameter, name=value (repeatable)
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
    /// Swept parameter, name=start:stop:count (repeatable)
    #[arg(long = "grid", value_name = "NAME=START:STOP:COUNT")]
    grid: Vec<String>,
}

fn build_config(scenario: Scenario, common: &Common) -> CliResult<SweepConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let c = SweepConfig::load(path)?;
            if c.scenario != scenario {
                return Err(CliError::config(format!(
                    "config is for {}, not {}",
                    c.scenario, scenario
                )));
            }
            c
        }
        None => SweepConfig::new(scenario),
    };
    for s in &common.set {
        let (k, v) = parse_assignment(s)?;
        cfg.grid.remove(&k);
        cfg.fixed.insert(k, v);
    }
    for s in &common.grid {
        let (k, axis) = parse_grid(s)?;
        cfg.fixed.remove(&k);
        cfg.grid.insert(k, axis);
    }
    if let Some(out) = &common.out {
        cfg.output = Some(out.clone());
    }
    if let Some(f) = &common.format {
        cfg.format = f.parse::<Format>()?;
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> CliResult<()> {
    let (scenario, common, preset, backend) = match &cli.command {
        Command::Minimal(c) => (Scenario::MinimalMachine, c, None, None),
        Command::Otto { common, backend } => (Scenario::Otto, common, None, backend.clone()),
        Command::Inequalities(c) => (Scenario::Inequalities, c, None, None),
        Command::Trajectory { common, preset } => (Scenario::Trajectory, common, preset.clone(), None),
    };
    let mut cfg = build_config(scenario, common)?;
    if preset.is_some() {
        cfg.preset = preset;
    }
    if backend.is_some() {
        cfg.backend = backend;
    }
    let report = run(&cfg, common.workers)?;
    let text = render(&report.table, &report.config, cfg.format);
    emit(&text, cfg.output.as_deref())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qthermo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

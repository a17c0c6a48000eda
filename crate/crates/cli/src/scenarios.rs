//! The four runnable scenarios. Each returns its table together with the
//! resolved config that produced it.

use qthermo_core::dynamics::{
    stable_step, BathChannel, ChannelSchedule, EvolveOptions, HamiltonianSchedule,
};
use qthermo_core::ledger::{build_ledger, check_inequalities, counterfactual_exchange, EvolutionSpec};
use qthermo_core::machines::{
    minimal_machine_steady_state, otto_cycle, otto_cycle_moments, MinimalMachineParams, OttoParams,
};
use qthermo_core::operator::{coherent_state, fock_space, DensityMatrix, HermitianOperator};
use qthermo_core::passivity::{ergotropy, is_passive, passive_state};
use rayon::prelude::*;

use crate::config::{Params, Scenario, SweepConfig};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};
use crate::random::{random_state, stream_rng};

/// Slack allowed on every inequality check.
pub const INEQUALITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Report {
    pub config: SweepConfig,
    pub table: Table,
}

pub fn run(config: &SweepConfig, workers: Option<usize>) -> CliResult<Report> {
    match config.scenario {
        Scenario::MinimalMachine => run_minimal_sweep(config, workers),
        Scenario::Otto => run_otto_sweep(config, workers),
        Scenario::Inequalities => run_inequality_suite(config, workers),
        Scenario::Trajectory => run_trajectory(config),
    }
}

/// Maps in parallel and keeps input order; the first failure in that order
/// is reported, so errors do not depend on scheduling.
fn par_map<T, U, F>(items: &[T], workers: Option<usize>, f: F) -> CliResult<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> CliResult<U> + Sync + Send,
{
    let go = || items.par_iter().map(&f).collect::<Vec<_>>();
    let results = match workers {
        Some(0) => return Err(CliError::config("--workers must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::config(format!("cannot start {n} workers: {e}")))?
            .install(go),
        None => go(),
    };
    results.into_iter().collect()
}

/// Swept names other than `primary`, which get leading columns.
fn extra_axes<'a>(config: &'a SweepConfig, primary: &str) -> Vec<&'a str> {
    config.grid.keys().map(String::as_str).filter(|k| *k != primary).collect()
}

fn columns(extra: &[&str], rest: &[&str]) -> Vec<String> {
    extra.iter().chain(rest).map(|s| s.to_string()).collect()
}

fn leading(p: &Params, extra: &[&str]) -> Vec<Cell> {
    extra.iter().map(|n| Cell::from(p.get(n))).collect()
}

pub fn run_minimal_sweep(config: &SweepConfig, workers: Option<usize>) -> CliResult<Report> {
    if !config.grid.contains_key("delta") && !config.fixed.contains_key("delta") {
        return Err(CliError::config("minimal-machine sweeps need a delta grid (or a fixed delta)"));
    }
    let points = config.points()?;
    let extra = extra_axes(config, "delta");
    let rows = par_map(&points, workers, |p| {
        let params = MinimalMachineParams {
            omega0: p.require("omega0")?,
            delta: p.require("delta")?,
            gamma_hot: p.require("gamma_hot")?,
            gamma_cold: p.require("gamma_cold")?,
            t_hot: p.require("t_hot")?,
            t_cold: p.require("t_cold")?,
        };
        let r = minimal_machine_steady_state(&params)?;
        let mut row = leading(p, &extra);
        row.extend([
            params.delta.into(),
            r.regime.as_str().into(),
            r.p_excited.into(),
            r.j_hot.into(),
            r.j_cold.into(),
            r.power.into(),
            r.efficiency.into(),
            r.cop.into(),
            r.carnot.into(),
            r.delta_cr.into(),
        ]);
        Ok(row)
    })?;
    let mut table = Table {
        columns: columns(
            &extra,
            &["delta", "regime", "p_excited", "J_H", "J_C", "power", "efficiency", "cop", "carnot", "delta_cr"],
        ),
        ..Default::default()
    };
    rows.into_iter().for_each(|r| table.push(r));
    Ok(Report { config: config.resolved()?, table })
}

pub fn run_otto_sweep(config: &SweepConfig, workers: Option<usize>) -> CliResult<Report> {
    let points = config.points()?;
    let fock = config.backend.as_deref() == Some("fock");
    let extra = extra_axes(config, "r");
    let rows = par_map(&points, workers, |p| {
        let fock_dim = match p.get("fock_dim") {
            Some(_) => Some(p.count("fock_dim", 0)?),
            None => None,
        };
        let params = OttoParams {
            omega_cold: p.require("omega_cold")?,
            omega_hot: p.require("omega_hot")?,
            t_hot: p.require("t_hot")?,
            t_cold: p.require("t_cold")?,
            squeezing: p.require("r")?,
            fock_dim,
        };
        let c = if fock { otto_cycle(&params)? } else { otto_cycle_moments(&params)? };
        let mut row = leading(p, &extra);
        row.extend([
            params.squeezing.into(),
            c.regime.as_str().into(),
            c.eta.into(),
            c.eta_max.into(),
            c.carnot.into(),
            c.exchange_hot.into(),
            c.exchange_cold.into(),
            c.counterfactual_heat.into(),
            c.total_work.into(),
            c.first_law_residual().into(),
            c.fock_dim.map_or(Cell::Empty, Cell::from),
        ]);
        Ok(row)
    })?;
    let mut table = Table {
        columns: columns(
            &extra,
            &[
                "r", "regime", "eta", "eta_max", "carnot", "exchange_hot", "exchange_cold",
                "counterfactual_heat", "total_work", "first_law_residual", "fock_dim",
            ],
        ),
        ..Default::default()
    };
    rows.into_iter().for_each(|r| table.push(r));
    let mut resolved = config.resolved()?;
    resolved.backend.get_or_insert_with(|| "moments".into());
    Ok(Report { config: resolved, table })
}

/// An oscillator (or qubit, at dim 2) H = ω(t)·a†a coupled to a thermal
/// bath at fixed temperature that stays resonant with ω(t). With `omega_end`
/// set, ω ramps linearly from `omega` over `ramp_time` and then holds.
#[derive(Clone, Debug, PartialEq)]
pub struct BathSetup {
    pub dim: usize,
    pub omega: f64,
    pub omega_end: Option<f64>,
    pub ramp_time: f64,
    pub gamma: f64,
    pub temperature: f64,
    pub t_end: f64,
    /// Defaults to the stability rule.
    pub dt: Option<f64>,
    pub stride: usize,
}

impl BathSetup {
    pub fn from_params(p: &Params) -> CliResult<Self> {
        let dim = p.count("dim", 2)?;
        let omega = p.require("omega")?;
        let t_end = p.require("t_end")?;
        let omega_end = p.get("ramp_to").filter(|&w| w != omega);
        Ok(BathSetup {
            dim,
            omega,
            omega_end,
            ramp_time: p.or("ramp_time", 0.5 * t_end),
            gamma: p.require("gamma")?,
            temperature: p.require("temperature")?,
            t_end,
            dt: p.get("dt").filter(|&d| d > 0.0),
            stride: p.count("stride", 1)?.max(1),
        })
    }

    pub fn is_driven(&self) -> bool {
        self.omega_end.is_some()
    }

    pub fn hamiltonian_at_start(&self) -> CliResult<HermitianOperator> {
        Ok(fock_space(self.dim)?.oscillator_hamiltonian(self.omega))
    }

    pub fn spec(&self, initial: DensityMatrix) -> CliResult<EvolutionSpec> {
        if self.dim < 2 {
            return Err(CliError::config("dim must be at least 2"));
        }
        if !(self.omega > 0.0) || self.omega_end.is_some_and(|w| !(w > 0.0)) {
            return Err(CliError::config("frequencies must be positive"));
        }
        if !(self.t_end > 0.0) {
            return Err(CliError::config("t_end must be positive"));
        }
        let f = fock_space(self.dim)?;
        let a = f.annihilation.clone();
        let (w0, gamma, temp) = (self.omega, self.gamma, self.temperature);
        let ends = [w0, self.omega_end.unwrap_or(w0)];

        // step for the stiffest end of the ramp
        let mut dt = f64::INFINITY;
        for &w in &ends {
            let ch = BathChannel::thermal(a.clone(), gamma, w, temp)?;
            dt = dt.min(stable_step(w * (self.dim - 1) as f64, &[ch])?);
        }
        let dt = self.dt.unwrap_or(dt);

        let (schedule, channels) = match self.omega_end {
            None => (
                HamiltonianSchedule::constant(f.oscillator_hamiltonian(w0)),
                ChannelSchedule::from(vec![BathChannel::thermal(a, gamma, w0, temp)?]),
            ),
            Some(w1) => {
                if !(self.ramp_time > 0.0) {
                    return Err(CliError::config("ramp_time must be positive"));
                }
                let ramp = self.ramp_time;
                let schedule = HamiltonianSchedule::linear_ramp(
                    f.oscillator_hamiltonian(w0),
                    f.oscillator_hamiltonian(w1),
                    ramp,
                )?;
                let channels = ChannelSchedule::driven(move |t| {
                    let w = w0 + (w1 - w0) * (t / ramp).clamp(0.0, 1.0);
                    Ok(vec![BathChannel::thermal(a.clone(), gamma, w, temp)?])
                });
                (schedule, channels)
            }
        };
        Ok(EvolutionSpec {
            initial,
            schedule,
            channels,
            options: EvolveOptions::new(self.t_end, dt).with_stride(self.stride),
        })
    }
}

/// Outcome of one random initial state in the inequality suite.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityCase {
    pub index: usize,
    pub initial_ergotropy: f64,
    pub passive: bool,
    pub delta_s: f64,
    pub q_over_t: f64,
    pub e_over_t: f64,
    pub e_prime_over_t: Option<f64>,
    pub slack_tight: f64,
    pub slack_spohn: f64,
    pub dissipated_ergotropy: f64,
    pub pass_tight: bool,
    pub pass_spohn: bool,
    /// Tight slack no larger than Spohn's and no ergotropy gained, checked
    /// for non-passive starts under constant H.
    pub pass_order: Option<bool>,
}

impl InequalityCase {
    pub fn passed(&self) -> bool {
        self.pass_tight && self.pass_spohn && self.pass_order.unwrap_or(true)
    }
}

/// Draws the `index`-th initial state and checks the inequalities on its
/// relaxation.
pub fn inequality_case(
    setup: &BathSetup,
    seed: u64,
    index: usize,
    passive_only: bool,
) -> CliResult<InequalityCase> {
    let h0 = setup.hamiltonian_at_start()?;
    let mut rng = stream_rng(seed, index as u64);
    let mut rho0 = random_state(&mut rng, setup.dim)?;
    if passive_only {
        rho0 = passive_state(&rho0, &h0)?.passive_state;
    }
    let initial_ergotropy = ergotropy(&rho0, &h0)?;
    let passive = is_passive(&rho0, &h0, 1e-9)?;
    let spec = setup.spec(rho0)?;
    let ledger = build_ledger(&spec.run()?)?;
    let e_prime = if setup.is_driven() { Some(counterfactual_exchange(&spec)?) } else { None };
    let rep = check_inequalities(&ledger, setup.temperature, e_prime)?;
    let pass_order = (!setup.is_driven() && !passive).then_some(
        rep.slack_tight <= rep.slack_spohn + INEQUALITY_TOL
            && rep.dissipated_ergotropy <= INEQUALITY_TOL,
    );
    Ok(InequalityCase {
        index,
        initial_ergotropy,
        passive,
        delta_s: rep.delta_s,
        q_over_t: rep.q_over_t,
        e_over_t: rep.e_over_t,
        e_prime_over_t: rep.e_prime_over_t,
        slack_tight: rep.slack_tight,
        slack_spohn: rep.slack_spohn,
        dissipated_ergotropy: rep.dissipated_ergotropy,
        pass_tight: rep.slack_tight >= -INEQUALITY_TOL,
        pass_spohn: rep.slack_spohn >= -INEQUALITY_TOL,
        pass_order,
    })
}

pub fn run_inequality_suite(config: &SweepConfig, workers: Option<usize>) -> CliResult<Report> {
    let points = config.points()?;
    let mut jobs = Vec::new();
    for (pi, p) in points.iter().enumerate() {
        let count = p.count("count", 500)?;
        if count == 0 {
            return Err(CliError::config("count must be at least 1"));
        }
        jobs.extend((0..count).map(|i| (pi, i)));
    }
    let setups: Vec<BathSetup> = points.iter().map(BathSetup::from_params).collect::<CliResult<_>>()?;
    let seed = config.seed;
    let cases = par_map(&jobs, workers, |&(pi, i)| {
        let passive_only = points[pi].or("passive_only", 0.0) != 0.0;
        inequality_case(&setups[pi], seed, i, passive_only).map(|c| (pi, c))
    })?;

    let extra: Vec<&str> = config.grid.keys().map(String::as_str).collect();
    let mut table = Table {
        columns: columns(
            &extra,
            &[
                "index", "dim", "initial_ergotropy", "passive", "delta_s", "q_over_t", "e_over_t",
                "e_prime_over_t", "slack_tight", "slack_spohn", "diss_ergotropy", "pass_tight",
                "pass_spohn", "pass_order",
            ],
        ),
        ..Default::default()
    };
    let (mut min_tight, mut min_spohn) = (f64::INFINITY, f64::INFINITY);
    let mut all = true;
    for (pi, c) in &cases {
        min_tight = min_tight.min(c.slack_tight);
        min_spohn = min_spohn.min(c.slack_spohn);
        all &= c.passed();
        let mut row = leading(&points[*pi], &extra);
        row.extend([
            c.index.into(),
            setups[*pi].dim.into(),
            c.initial_ergotropy.into(),
            c.passive.into(),
            c.delta_s.into(),
            c.q_over_t.into(),
            c.e_over_t.into(),
            c.e_prime_over_t.into(),
            c.slack_tight.into(),
            c.slack_spohn.into(),
            c.dissipated_ergotropy.into(),
            c.pass_tight.into(),
            c.pass_spohn.into(),
            c.pass_order.map_or(Cell::Empty, Cell::Bool),
        ]);
        table.push(row);
    }
    table.summary = vec![
        ("states".into(), cases.len().into()),
        ("min_slack_tight".into(), min_tight.into()),
        ("min_slack_spohn".into(), min_spohn.into()),
        ("all_pass".into(), all.into()),
    ];
    Ok(Report { config: config.resolved()?, table })
}

/// Preset values for trajectory runs; explicit fixed values override them.
pub fn preset_defaults(name: &str) -> CliResult<&'static [(&'static str, f64)]> {
    Ok(match name {
        // Coherent state |α⟩ decaying into a zero-temperature cavity bath.
        "coherent-decay" => &[
            ("alpha", 2.0),
            ("dim", 40.0),
            ("omega", 1.0),
            ("gamma", 1.0),
            ("temperature", 0.0),
            ("t_end", 12.0),
        ],
        // Qubit in |1⟩ decaying at zero temperature.
        "fock-decay" => &[
            ("level", 1.0),
            ("dim", 2.0),
            ("omega", 1.0),
            ("gamma", 1.0),
            ("temperature", 0.0),
            ("t_end", 5.0),
            ("dt", 0.01),
        ],
        // Seeded random state relaxing in a thermal bath.
        "relaxation" => &[
            ("dim", 2.0),
            ("omega", 1.0),
            ("gamma", 1.0),
            ("temperature", 1.0),
            ("t_end", 10.0),
        ],
        other => {
            return Err(CliError::config(format!(
                "unknown preset {other:?}; expected coherent-decay, fock-decay or relaxation"
            )))
        }
    })
}

/// The column layout of exported ledgers.
pub const LEDGER_COLUMNS: [&str; 7] = ["t", "E", "W", "exchange", "heat", "diss_ergotropy", "entropy"];

pub fn run_trajectory(config: &SweepConfig) -> CliResult<Report> {
    config.validate()?;
    let preset = config.preset.clone().unwrap_or_else(|| "coherent-decay".into());
    let mut resolved = config.resolved()?;
    for (n, v) in preset_defaults(&preset)? {
        resolved.fixed.entry((*n).to_string()).or_insert(*v);
    }
    resolved.preset = Some(preset.clone());
    let p = Params(resolved.fixed.clone());
    let setup = BathSetup::from_params(&p)?;

    let initial = match preset.as_str() {
        "coherent-decay" => coherent_state(qthermo_core::C64::new(p.or("alpha", 2.0), 0.0), setup.dim)?,
        "fock-decay" => {
            let level = p.count("level", 1)?;
            if level >= setup.dim {
                return Err(CliError::config(format!("level {level} needs dim > {level}")));
            }
            DensityMatrix::basis(setup.dim, level)?
        }
        _ => random_state(&mut stream_rng(config.seed, 0), setup.dim)?,
    };
    let traj = setup.spec(initial)?.run()?;
    let ledger = build_ledger(&traj)?;

    let mut table = Table::new(&LEDGER_COLUMNS);
    for k in 0..ledger.len() {
        table.push(vec![
            ledger.times[k].into(),
            ledger.energy[k].into(),
            ledger.work[k].into(),
            ledger.exchange[k].into(),
            ledger.heat[k].into(),
            ledger.dissipated_ergotropy[k].into(),
            ledger.entropy[k].into(),
        ]);
    }
    let r = &ledger.residuals;
    let d = traj.diagnostics();
    table.summary = vec![
        ("samples".into(), ledger.len().into()),
        ("steps".into(), d.steps.into()),
        ("dt".into(), d.dt.into()),
        ("energy_scale".into(), r.energy_scale.into()),
        ("residual_first_law".into(), r.first_law.into()),
        ("residual_exchange_direct".into(), r.exchange_direct.into()),
        ("residual_split".into(), r.split.into()),
        ("residual_dissipated_direct".into(), r.dissipated_direct.into()),
        ("clamped_samples".into(), d.clamped_samples.into()),
    ];
    Ok(Report { config: resolved, table })
}

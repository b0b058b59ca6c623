//! The subcommands: each turns a resolved [`Config`] into files and a verdict.

use std::path::Path;

use anyhow::bail;
use serde_json::{json, Map, Value};
use wavelab_core::energy::{
    compute_densities, conserved_pair, interaction_q, light_cone_energy_at, ConservedQuantities, FluxLoop,
    PolygonPath, QMethod, TrapezoidMonitor,
};
use wavelab_core::experiments::{self, ExperimentReport, Scenario, Verdict};
use wavelab_core::selfsimilar::{cp_constant, integrate_profile, ray_energy_decay, semi_energy};
use wavelab_core::{FieldState, Schedule, Solver, WaveError};

use crate::config::{Config, PathShape};
use crate::manifest::{unix_now, InputDigest, RunManifest, ARTIFACT_VERSION};
use crate::output::{csv_table, fmt_f64, json_f64, OutputDir};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Simulate,
    FluxCheck,
    Trapezoid,
    Scenario(Scenario),
    SelfSimilar,
    CpTable,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Simulate,
        Command::FluxCheck,
        Command::Trapezoid,
        Command::Scenario(Scenario::Decay),
        Command::Scenario(Scenario::Tail),
        Command::Scenario(Scenario::Retraction),
        Command::Scenario(Scenario::Conjecture),
        Command::Scenario(Scenario::Focusing),
        Command::Scenario(Scenario::Concentration),
        Command::SelfSimilar,
        Command::CpTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::FluxCheck => "flux-check",
            Command::Trapezoid => "trapezoid",
            Command::Scenario(s) => s.name(),
            Command::SelfSimilar => "selfsimilar",
            Command::CpTable => "cp-table",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Configuration an empty file resolves to.
    pub fn defaults(self) -> Config {
        match self {
            Command::Scenario(s) => Config::for_scenario(s),
            _ => Config::default(),
        }
    }
}

/// Process exit status for a verdict.
pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 2,
        Verdict::Inconclusive => 3,
    }
}

/// Runs `command`, writes its outputs and the manifest into `out_dir`.
pub fn run_command(
    command: Command,
    cfg: &Config,
    out_dir: &Path,
    inputs: Vec<InputDigest>,
) -> anyhow::Result<(Verdict, RunManifest)> {
    cfg.validate()?;
    let started = unix_now();
    let mut out = OutputDir::new(out_dir);
    let verdict = execute(command, cfg, &mut out)?;
    let finished = unix_now();
    let manifest = RunManifest {
        version: ARTIFACT_VERSION.to_owned(),
        command: command.name().to_owned(),
        config: cfg.emit(),
        inputs,
        started_unix: started,
        finished_unix: finished,
        wall_seconds: finished - started,
        outputs: out.records().iter().map(Into::into).collect(),
    };
    manifest.write(out.root())?;
    Ok((verdict, manifest))
}

fn execute(command: Command, cfg: &Config, out: &mut OutputDir) -> anyhow::Result<Verdict> {
    match command {
        Command::Simulate => simulate(cfg, out),
        Command::FluxCheck => flux_check(cfg, out),
        Command::Trapezoid => trapezoid(cfg, out),
        Command::Scenario(s) => scenario(s, cfg, out),
        Command::SelfSimilar => selfsimilar(cfg, out),
        Command::CpTable => cp_table(cfg, out),
    }
}

/// The `key -> value` echo carried by every report.
fn config_echo(cfg: &Config) -> Value {
    let map: Map<String, Value> = cfg
        .entries()
        .into_iter()
        .map(|(k, v)| (k.to_owned(), Value::from(v)))
        .collect();
    Value::Object(map)
}

fn report_head(command: Command, cfg: &Config, verdict: Verdict) -> Map<String, Value> {
    let mut head = Map::new();
    head.insert("command".into(), command.name().into());
    head.insert("verdict".into(), verdict.name().into());
    head.insert(
        "manifest".into(),
        json!({ "version": ARTIFACT_VERSION, "command": command.name(), "config": config_echo(cfg) }),
    );
    head
}

fn check_json(name: &str, value: f64, limit: f64, passed: bool) -> Value {
    json!({ "name": name, "value": json_f64(value), "limit": json_f64(limit), "passed": passed })
}

fn verdict_of(passed: impl IntoIterator<Item = bool>) -> Verdict {
    if passed.into_iter().all(|p| p) {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn state_csv(state: &FieldState, x0: f64, dx: f64) -> String {
    csv_table(
        &["x", "u", "v"],
        (0..state.len()).map(|j| vec![x0 + j as f64 * dx, state.u[j], state.v[j]]),
    )
}

fn simulate(cfg: &Config, out: &mut OutputDir) -> anyhow::Result<Verdict> {
    let command = Command::Simulate;
    let nl = cfg.nonlinearity()?;
    let init = cfg.initial_data();
    let times = cfg.sample_times();
    let t_end = times.last().copied().unwrap_or(0.0);
    let grid = cfg.grid_for(&init, t_end)?;

    // Label each dump with the first requested time that lands on its step.
    let mut labels: Vec<(usize, f64)> = Vec::new();
    for &t in &times {
        let step = grid.steps_to(t);
        if labels.last().is_none_or(|(s, _)| *s != step) {
            labels.push((step, t));
        }
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut reference: Option<ConservedQuantities> = None;
    let mut drift = 0.0_f64;
    let mut write_error: Option<std::io::Error> = None;
    let mut record = |state: &FieldState| {
        let step = (state.t / grid.dt()).round() as usize;
        let label = labels.iter().find(|(s, _)| *s == step).map_or(state.t, |(_, t)| *t);
        let d = compute_densities(state, &grid, &nl);
        let totals = conserved_pair(&d);
        let base = *reference.get_or_insert(totals);
        drift = drift.max(totals.relative_drift(&base));
        rows.push(vec![
            state.t,
            totals.energy,
            totals.momentum,
            totals.e_plus,
            totals.e_minus,
            light_cone_energy_at(&d, cfg.cone_eta),
            interaction_q(&d, QMethod::PrefixSum).q_value,
        ]);
        if write_error.is_none() {
            let name = format!("state_t{}.csv", fmt_f64(label));
            if let Err(e) = out.write(&name, &state_csv(state, grid.x_min(), grid.dx())) {
                write_error = Some(e);
            }
        }
    };
    let result = Solver::new(grid, nl).evolve(&init, t_end, &Schedule::Times(times.clone()), &mut [&mut record]);
    if let Some(e) = write_error {
        return Err(e.into());
    }
    let blow_up = match result {
        Ok(_) => None,
        Err(WaveError::BlowUpDetected { t, step }) => Some((t, step)),
        Err(e) => return Err(e.into()),
    };
    out.write(
        "diagnostics.csv",
        &csv_table(&["t", "E", "M", "E_plus", "E_minus", "E_cone_eta", "Q"], rows),
    )?;

    let limit = cfg.thresholds.conservation;
    let verdict = verdict_of([drift <= limit, blow_up.is_none()]);
    let mut report = report_head(command, cfg, verdict);
    report.insert(
        "grid".into(),
        json!({ "x_min": grid.x_min(), "x_max": grid.x_max(), "n_nodes": grid.n_nodes(), "dx": grid.dx(), "dt": grid.dt() }),
    );
    report.insert("checks".into(), json!([check_json("conservation_drift", drift, limit, drift <= limit)]));
    report.insert(
        "blow_up".into(),
        blow_up.map_or(Value::Null, |(t, step)| json!({ "t": t, "step": step })),
    );
    out.write_json("report.json", &Value::Object(report))?;
    Ok(verdict)
}

fn flux_path(cfg: &Config) -> anyhow::Result<PolygonPath> {
    let f = &cfg.flux;
    let path = match f.shape {
        PathShape::Rectangle => PolygonPath::rectangle(f.x1, f.x2, f.t1, f.t2),
        PathShape::ParallelogramRight => PolygonPath::parallelogram(f.x1, f.x2, f.t1, f.t2, true),
        PathShape::ParallelogramLeft => PolygonPath::parallelogram(f.x1, f.x2, f.t1, f.t2, false),
        PathShape::Hexagon => PolygonPath::hexagon(f.x1, f.x2, f.t1, 0.5 * (f.t2 - f.t1)),
    };
    Ok(path?)
}

fn flux_check(cfg: &Config, out: &mut OutputDir) -> anyhow::Result<Verdict> {
    let command = Command::FluxCheck;
    let nl = cfg.nonlinearity()?;
    let init = cfg.initial_data();
    let path = flux_path(cfg)?;
    let t_end = cfg.flux.t2;
    let grid = cfg.grid_for(&init, t_end)?;
    let mut monitor = FluxLoop::new(grid, nl, &path, cfg.flux.which)?;
    Solver::new(grid, nl).evolve(&init, t_end, &Schedule::EveryStep, &mut [&mut monitor])?;
    let rep = monitor.finish()?;

    let relative = if rep.magnitude > 0.0 {
        rep.closure_residual.abs() / rep.magnitude
    } else {
        rep.closure_residual.abs()
    };
    let passed = relative <= cfg.flux.tolerance;
    let verdict = verdict_of([passed]);
    let edges: Vec<Value> = rep
        .edges
        .iter()
        .map(|e| {
            json!({
                "from": [e.from.0, e.from.1],
                "to": [e.to.0, e.to.1],
                "kind": e.kind.name(),
                "value": json_f64(e.value),
            })
        })
        .collect();
    let flux = json!({
        "which": rep.which.name(),
        "dx": grid.dx(),
        "edges": edges,
        "closure_residual": json_f64(rep.closure_residual),
        "magnitude": json_f64(rep.magnitude),
        "decomposition": rep.decomposition.map_or(Value::Null, |q| {
            json!({ "Q1": json_f64(q[0]), "Q2": json_f64(q[1]), "Q3": json_f64(q[2]), "Q4": json_f64(q[3]) })
        }),
    });
    out.write_json("flux.json", &flux)?;
    let mut report = report_head(command, cfg, verdict);
    report.insert(
        "checks".into(),
        json!([check_json("relative_closure_residual", relative, cfg.flux.tolerance, passed)]),
    );
    out.write_json("report.json", &Value::Object(report))?;
    Ok(verdict)
}

fn trapezoid(cfg: &Config, out: &mut OutputDir) -> anyhow::Result<Verdict> {
    let command = Command::Trapezoid;
    let tz = &cfg.trapezoid;
    let nl = cfg.nonlinearity()?;
    let init = cfg.initial_data();
    let grid = cfg.grid_for(&init, tz.t2)?;
    let (u, v) = init.sample(&grid)?;
    let e0 = conserved_pair(&compute_densities(&FieldState { t: 0.0, u, v }, &grid, &nl)).energy;
    let mut monitor = TrapezoidMonitor::new(grid, nl, tz.eta, tz.t1, tz.t2, tz.which)?;
    Solver::new(grid, nl).evolve(&init, tz.t2, &Schedule::EveryStep, &mut [&mut monitor])?;
    let rep = monitor.finish()?;

    let limit = tz.tolerance * e0;
    let left_ok = rep.residual.abs() <= limit;
    let right_ok = rep.residual_right.abs() <= limit;
    let verdict = verdict_of([left_ok, right_ok]);
    let mut report = report_head(command, cfg, verdict);
    report.insert(
        "trapezoid".into(),
        json!({
            "which": rep.which.name(),
            "eta": rep.eta,
            "t1": rep.t1,
            "t2": rep.t2,
            "dx": grid.dx(),
            "E0": json_f64(e0),
            "lhs_left": json_f64(rep.lhs_left),
            "lhs_right": json_f64(rep.lhs_right),
            "rhs": json_f64(rep.rhs),
            "residual": json_f64(rep.residual),
            "residual_right": json_f64(rep.residual_right),
            "left_energies": [json_f64(rep.left_energies.0), json_f64(rep.left_energies.1)],
            "right_energies": [json_f64(rep.right_energies.0), json_f64(rep.right_energies.1)],
        }),
    );
    report.insert(
        "checks".into(),
        json!([
            check_json("residual_left", rep.residual.abs(), limit, left_ok),
            check_json("residual_right", rep.residual_right.abs(), limit, right_ok),
        ]),
    );
    out.write_json("trapezoid.json", &Value::Object(report))?;
    Ok(verdict)
}

/// Report document of a scenario run, without wall-clock data.
pub fn scenario_report_json(command: Command, cfg: &Config, rep: &ExperimentReport) -> Value {
    let mut report = report_head(command, cfg, rep.verdict);
    report.insert("scenario".into(), rep.scenario.name().into());
    let thresholds: Map<String, Value> = cfg
        .entries()
        .into_iter()
        .filter_map(|(k, v)| k.strip_prefix("threshold.").map(|k| (k.to_owned(), Value::from(v))))
        .collect();
    report.insert("thresholds".into(), Value::Object(thresholds));
    report.insert(
        "checks".into(),
        rep.checks
            .iter()
            .map(|c| check_json(c.name, c.value, c.limit, c.passed))
            .collect(),
    );
    let scalars: Map<String, Value> = rep.scalars.iter().map(|(k, v)| ((*k).to_owned(), json_f64(*v))).collect();
    report.insert("scalars".into(), Value::Object(scalars));
    report.insert("conservation_drift".into(), json_f64(rep.conservation_drift));
    report.insert(
        "blow_up".into(),
        rep.blow_up.map_or(Value::Null, |b| json!({ "t": b.t, "step": b.step })),
    );
    report.insert("notes".into(), rep.notes.iter().map(|n| Value::from(n.as_str())).collect());
    let summary: Map<String, Value> = rep
        .series
        .iter()
        .map(|s| {
            let (lo, hi) = s
                .values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
            let entry = json!({
                "first": s.values.first().copied().map_or(Value::Null, json_f64),
                "last": s.values.last().copied().map_or(Value::Null, json_f64),
                "min": json_f64(lo),
                "max": json_f64(hi),
            });
            (s.name.to_owned(), entry)
        })
        .collect();
    report.insert("series_summary".into(), Value::Object(summary));
    Value::Object(report)
}

fn scenario(s: Scenario, cfg: &Config, out: &mut OutputDir) -> anyhow::Result<Verdict> {
    let command = Command::Scenario(s);
    let exp = cfg.experiment(s)?;
    let rep = experiments::run(&exp)?;
    let mut header = vec!["t"];
    header.extend(rep.series.iter().map(|s| s.name));
    let rows = rep.times.iter().enumerate().map(|(k, t)| {
        let mut row = vec![*t];
        row.extend(rep.series.iter().map(|s| s.values[k]));
        row
    });
    out.write("series.csv", &csv_table(&header, rows))?;
    out.write_json("report.json", &scenario_report_json(command, cfg, &rep))?;
    Ok(rep.verdict)
}

fn selfsimilar(cfg: &Config, out: &mut OutputDir) -> anyhow::Result<Verdict> {
    let command = Command::SelfSimilar;
    let sol = integrate_profile(&cfg.ode_params())?;
    let eq = *sol.equation();
    let rep = semi_energy(&sol);
    let (lo, hi) = sol.y_range();
    let n = cfg.ode.samples;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let y = lo + (hi - lo) * k as f64 / (n - 1) as f64;
        let (f, fp) = sol.eval(y)?;
        rows.push(vec![
            y,
            f,
            fp,
            eq.semi_energy(y, f, fp),
            eq.semi_energy_rate(y, f),
            (1.0 - y).powf(1.0 + eq.beta()) * fp,
        ]);
    }
    out.write(
        "profile.csv",
        &csv_table(&["y", "f", "fprime", "Etilde", "Etilde_rate", "asymptotic_trace"], rows),
    )?;
    let ray = &cfg.ray;
    let decay = ray_energy_decay(&sol, ray.r, ray.r1, &ray.times)?;
    out.write(
        "decay.csv",
        &csv_table(&["t", "ray_energy"], decay.iter().map(|(t, e)| vec![*t, *e])),
    )?;

    let scale = rep.at_zero().abs().max(f64::MIN_POSITIVE);
    let increase = rep.max_increase().max(0.0) / scale;
    let decreasing = decay.windows(2).all(|w| w[1].1 < w[0].1);
    let ratio = match (decay.first(), decay.last()) {
        (Some(first), Some(last)) if first.1 > 0.0 => last.1 / first.1,
        _ => f64::NAN,
    };
    let checks = [
        check_json("etilde_relative_increase", increase, 1e-10, increase <= 1e-10),
        check_json("rate_error", rep.rate_error, 1e-6, rep.rate_error <= 1e-6),
        check_json(
            "ray_energy_decreasing",
            f64::from(u8::from(decreasing)),
            1.0,
            decreasing,
        ),
        check_json("ray_energy_ratio", ratio, ray.ratio, ratio < ray.ratio),
    ];
    let verdict = verdict_of(checks.iter().map(|c| c["passed"] == Value::Bool(true)));
    let mut report = report_head(command, cfg, verdict);
    report.insert(
        "ode".into(),
        json!({
            "beta": eq.beta(),
            "C_p": eq.cp(),
            "y_range": [lo, hi],
            "accepted_steps": sol.accepted_steps,
            "rejected_steps": sol.rejected_steps,
            "Etilde_at_zero": json_f64(rep.at_zero()),
            "A_estimate": json_f64(rep.a_estimate),
        }),
    );
    report.insert("checks".into(), Value::Array(checks.to_vec()));
    out.write_json("report.json", &Value::Object(report))?;
    Ok(verdict)
}

fn cp_table(cfg: &Config, out: &mut OutputDir) -> anyhow::Result<Verdict> {
    if cfg.cp_p.iter().any(|p| !(*p > 1.0)) {
        bail!("cp.p: p must exceed 1");
    }
    let rows = cfg.cp_p.iter().map(|&p| vec![p, 2.0 / (p - 1.0), cp_constant(p)]);
    out.write("cp.csv", &csv_table(&["p", "beta", "C_p"], rows))?;
    Ok(Verdict::Pass)
}

//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines reach the terminal in
//! order. The process fails when a criterion outside [`EXPECTED_FAILURES`]
//! fails, or when an expected failure starts passing (the list is then stale).

use std::fs;
use std::path::Path;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wavelab::commands::Command;
use wavelab::config::Config;
use wavelab_core::energy::{
    compute_densities, conserved_pair, interaction_q, pairwise_distance_brute_force, pairwise_distance_prefix_sum,
    ConservedQuantities, FluxLoop, PolygonPath, QMethod, TrapezoidMonitor, Which,
};
use wavelab_core::experiments::{run, ExperimentConfig, ExperimentReport, Scenario, Verdict};
use wavelab_core::selfsimilar::{
    cp_constant, integrate_profile, lifted_pde_residual, ray_energy_decay, semi_energy, OdeParams,
};
use wavelab_core::wave::{dalembert_oracle, OracleOptions};
use wavelab_core::{FieldState, GridSpec, InitialData, Nonlinearity, Schedule, Solver};

/// Criteria whose gates the implementation does not reach; the analysis is
/// in the README.
const EXPECTED_FAILURES: &[u8] = &[5, 7];

struct Outcome {
    passed: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            passed: true,
            lines: Vec::new(),
        }
    }

    /// Records one gate.
    fn gate(&mut self, ok: bool, what: impl Into<String>) {
        self.passed &= ok;
        self.lines.push(format!("{} {}", if ok { "ok  " } else { "MISS" }, what.into()));
    }

    fn info(&mut self, what: impl Into<String>) {
        self.lines.push(format!("     {}", what.into()));
    }
}

fn cubic() -> Nonlinearity {
    Nonlinearity::defocusing(3.0).unwrap()
}

fn in_band(ratio: f64) -> bool {
    (3.0..=5.0).contains(&ratio)
}

// ---------------------------------------------------------------- 1

/// Largest `|Q(t) - Q(0)| / E(0)` over integer times for `E, M, E_+, E_-`.
fn conservation_drifts(init: &InitialData, dx: f64, t_end: f64) -> ([f64; 4], Duration) {
    let grid = ExperimentConfig::domain_for(init, t_end, dx, 1.0).unwrap();
    let nl = cubic();
    let mut base: Option<ConservedQuantities> = None;
    let mut drift = [0.0_f64; 4];
    let mut observe = |s: &FieldState| {
        let q = conserved_pair(&compute_densities(s, &grid, &nl));
        let b = *base.get_or_insert(q);
        let scale = b.energy;
        for (slot, d) in drift.iter_mut().zip([
            q.energy - b.energy,
            q.momentum - b.momentum,
            q.e_plus - b.e_plus,
            q.e_minus - b.e_minus,
        ]) {
            *slot = slot.max(d.abs() / scale);
        }
    };
    let times: Vec<f64> = (0..=t_end as usize).map(|k| k as f64).collect();
    let start = Instant::now();
    Solver::new(grid, nl)
        .evolve(init, t_end, &Schedule::Times(times), &mut [&mut observe])
        .unwrap();
    (drift, start.elapsed())
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let names = ["E", "M", "E_plus", "E_minus"];
    let centred = InitialData::gaussian(1.0, 0.0, 1.0);
    let (coarse, elapsed) = conservation_drifts(&centred, 1e-3, 50.0);
    let (fine, _) = conservation_drifts(&centred, 5e-4, 50.0);
    out.gate(
        elapsed <= Duration::from_secs(120),
        format!("dx = 1e-3 run to t = 50 took {:.1} s (limit 120 s)", elapsed.as_secs_f64()),
    );
    for k in 0..4 {
        out.gate(
            coarse[k] <= 1e-3,
            format!("{} drift {:.3e} at dx = 1e-3 (limit 1e-3)", names[k], coarse[k]),
        );
    }
    // M vanishes by mirror symmetry for centred data, so its drift is
    // round-off and carries no rate; the ratio is taken where it is resolved.
    for k in 0..4 {
        let ratio = coarse[k] / fine[k];
        if coarse[k] <= 1e-12 {
            out.info(format!("{} drift at round-off ({:.1e}), ratio not meaningful", names[k], coarse[k]));
        } else {
            out.gate(in_band(ratio), format!("{} drift ratio dx -> dx/2: {ratio:.3}", names[k]));
        }
    }
    // Companion run with net momentum, so every drift has a rate.
    let moving = InitialData::right_mover(wavelab_core::Profile::gaussian(1.0, 0.0, 1.0));
    let (c, _) = conservation_drifts(&moving, 1e-3, 50.0);
    let (f, _) = conservation_drifts(&moving, 5e-4, 50.0);
    for k in 0..4 {
        out.gate(
            c[k] <= 1e-3 && in_band(c[k] / f[k]),
            format!(
                "right-moving gaussian: {} drift {:.3e}, ratio {:.3}",
                names[k],
                c[k],
                c[k] / f[k]
            ),
        );
    }
    out
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let cases: Vec<(&str, InitialData, Nonlinearity)> = vec![
        ("gaussian p=3", InitialData::gaussian(1.0, 0.0, 1.0), cubic()),
        ("shifted bump p=5", InitialData::polynomial_bump(0.8, 0.4, 1.2), Nonlinearity::defocusing(5.0).unwrap()),
        (
            "right-mover p=3",
            InitialData::right_mover(wavelab_core::Profile::gaussian(1.0, -1.0, 0.7)),
            cubic(),
        ),
        ("focusing p=3", InitialData::polynomial_bump(1.0, 0.0, 1.0), Nonlinearity::focusing(3.0).unwrap()),
        ("linear", InitialData::gaussian(2.0, 0.5, 0.5), Nonlinearity::disabled(3.0).unwrap()),
    ];
    let mut nodes = 0usize;
    let mut worst_product = 0.0_f64;
    let mut exact = true;
    for (name, init, nl) in cases {
        let grid = ExperimentConfig::domain_for(&init, 5.0, 5e-3, 1.0).unwrap();
        let mut states = 0usize;
        let mut observe = |s: &FieldState| {
            let d = compute_densities(s, &grid, &nl);
            let ux = wavelab_core::wave::space_derivative(&s.u, grid.dx());
            for j in 0..s.len() {
                exact &= d.e_plus[j] + d.e_minus[j] == d.e_full[j];
                exact &= d.e_minus[j] - d.e_plus[j] == d.momentum[j];
                let m = ux[j] * s.v[j];
                worst_product = worst_product.max((d.momentum[j] - m).abs() / (1.0 + m.abs()));
            }
            nodes += s.len();
            states += 1;
        };
        Solver::new(grid, nl)
            .evolve(&init, 5.0, &Schedule::Every(25), &mut [&mut observe])
            .unwrap();
        out.info(format!("{name}: {states} states"));
    }
    out.gate(exact, format!("e+ + e- == e_full and e- - e+ == momentum bit-for-bit at {nodes} nodes"));
    out.gate(
        worst_product <= 1e-12,
        format!("momentum density vs u_x u_t: worst relative gap {worst_product:.1e}"),
    );
    out
}

// ---------------------------------------------------------------- 3

/// Closure residuals of `paths` on one grid.
fn closure_residuals(init: &InitialData, dx: f64, paths: &[(PolygonPath, Which)], t_end: f64) -> Vec<f64> {
    let grid = ExperimentConfig::domain_for(init, t_end, dx, 1.0).unwrap();
    let mut loops: Vec<FluxLoop> = paths
        .iter()
        .map(|(p, w)| FluxLoop::new(grid, cubic(), p, *w).unwrap())
        .collect();
    let mut observers: Vec<&mut dyn wavelab_core::Observer> =
        loops.iter_mut().map(|l| l as &mut dyn wavelab_core::Observer).collect();
    Solver::new(grid, cubic())
        .evolve(init, t_end, &Schedule::EveryStep, &mut observers)
        .unwrap();
    loops.into_iter().map(|l| l.finish().unwrap().closure_residual).collect()
}

fn criterion_3() -> Outcome {
    const C: f64 = 2.0;
    let mut out = Outcome::new();
    let (dc, df) = (0.01, 0.005);

    let hexagon = vec![(PolygonPath::hexagon(-1.0, 1.0, 0.5, 0.5).unwrap(), Which::Plus)];
    let unit = InitialData::gaussian(1.0, 0.0, 1.0);
    let (hc, hf) = (closure_residuals(&unit, dc, &hexagon, 1.5)[0], closure_residuals(&unit, df, &hexagon, 1.5)[0]);
    out.gate(
        hc.abs() <= C * dc * dc && hf.abs() <= C * df * df && in_band(hc / hf),
        format!("hexagon [-1,1] x [0.5,1.5]: residual {hc:.3e} -> {hf:.3e}, ratio {:.3}", hc / hf),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(20_240_611);
    let lattice = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| (rng.random_range(lo..hi) / dc).round() * dc;
    let mut paths = Vec::new();
    let mut labels = Vec::new();
    for k in 0..20 {
        let x1 = lattice(&mut rng, -2.5, 1.5);
        let x2 = x1 + lattice(&mut rng, 0.2, 1.5);
        let t1 = lattice(&mut rng, 0.2, 2.0);
        let t2 = t1 + lattice(&mut rng, 0.2, 1.2);
        let which = if k % 2 == 0 { Which::Plus } else { Which::Minus };
        let (path, kind) = match k % 3 {
            0 => (PolygonPath::rectangle(x1, x2, t1, t2), "rectangle"),
            1 => (PolygonPath::parallelogram(x1, x2, t1, t2, true), "right parallelogram"),
            _ => (PolygonPath::parallelogram(x1, x2, t1, t2, false), "left parallelogram"),
        };
        paths.push((path.unwrap(), which));
        labels.push(format!("{kind} [{x1:.2},{x2:.2}] x [{t1:.2},{t2:.2}] {}", which.name()));
    }
    let shifted = InitialData::gaussian(1.0, 0.3, 1.0);
    let coarse = closure_residuals(&shifted, dc, &paths, 3.5);
    let fine = closure_residuals(&shifted, df, &paths, 3.5);
    let (mut bounded, mut ordered) = (0, 0);
    let mut ratios = Vec::new();
    for k in 0..paths.len() {
        let (c, f) = (coarse[k], fine[k]);
        let ratio = c / f;
        let within = c.abs() <= C * dc * dc && f.abs() <= C * df * df;
        bounded += usize::from(within);
        ordered += usize::from(in_band(ratio));
        ratios.push(ratio);
        if !(within && in_band(ratio)) {
            out.info(format!("{}: {c:.3e} -> {f:.3e} (ratio {ratio:.3})", labels[k]));
        }
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.gate(bounded == paths.len(), format!("{bounded}/20 random lattice paths within {C} dx^2"));
    out.gate(
        ordered == paths.len(),
        format!("{ordered}/20 random paths with ratio in [3,5] (range {lo:.3} .. {hi:.3})"),
    );

    for which in [Which::Plus, Which::Minus] {
        let residual = |dx: f64| {
            let grid = ExperimentConfig::domain_for(&shifted, 1.0, dx, 1.0).unwrap();
            let mut m = TrapezoidMonitor::new(grid, cubic(), 0.0, 0.0, 1.0, which).unwrap();
            Solver::new(grid, cubic())
                .evolve(&shifted, 1.0, &Schedule::EveryStep, &mut [&mut m])
                .unwrap();
            m.finish().unwrap().residual
        };
        let (c, f) = (residual(dc), residual(df));
        out.gate(
            c.abs() <= C * dc * dc && in_band(c / f),
            format!("trapezoid eta=0 [0,1] {}: lhs-rhs {c:.3e} -> {f:.3e}, ratio {:.3}", which.name(), c / f),
        );
    }
    out
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let init = InitialData::gaussian(0.1, 0.0, 1.0);
    for dx in [0.01, 0.005, 0.0025] {
        let grid = GridSpec::symmetric(7.0, dx, 1.0).unwrap();
        let oracle = dalembert_oracle(&init, &grid, &cubic(), 0.25, OracleOptions::default()).unwrap();
        let state = Solver::new(grid, cubic())
            .evolve(&init, 0.25, &Schedule::Never, &mut [])
            .unwrap();
        let gap = oracle
            .state
            .u
            .iter()
            .zip(&state.u)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        out.gate(
            gap <= 10.0 * dx * dx,
            format!("oracle vs evolve, amplitude 0.1, T = 0.25, dx = {dx}: sup gap {gap:.2e} (limit {:.2e})", 10.0 * dx * dx),
        );
    }

    // At cfl = 1 both sides run the same lattice recursion; at half the time
    // step the solver carries its own truncation error and the gap shows its order.
    let half_step_gap = |dx: f64| {
        let init = InitialData::gaussian(0.3, 0.0, 1.0);
        let lattice = GridSpec::symmetric(7.0, dx, 1.0).unwrap();
        let oracle = dalembert_oracle(&init, &lattice, &cubic(), 0.5, OracleOptions::default()).unwrap();
        let state = Solver::new(GridSpec::symmetric(7.0, dx, 0.5).unwrap(), cubic())
            .evolve(&init, 0.5, &Schedule::Never, &mut [])
            .unwrap();
        oracle
            .state
            .u
            .iter()
            .zip(&state.u)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    };
    let (c, f) = (half_step_gap(0.02), half_step_gap(0.01));
    out.gate(
        c <= 10.0 * 0.02 * 0.02 && in_band(c / f),
        format!("oracle vs evolve at cfl 0.5, amplitude 0.3, T = 0.5: {c:.3e} -> {f:.3e}, ratio {:.3}", c / f),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 10_000;
    let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-100.0..100.0)).collect();
    let ws: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    let fast = pairwise_distance_prefix_sum(&xs, &ws);
    let slow = pairwise_distance_brute_force(&xs, &ws);
    let rel = (fast - slow).abs() / slow;
    out.gate(rel <= 1e-10, format!("Q prefix sum vs brute force, N = 1e4 random: relative gap {rel:.1e}"));

    let grid = GridSpec::symmetric(30.0, 0.01, 1.0).unwrap();
    let (u, v) = InitialData::gaussian(1.0, 0.0, 1.0).sample(&grid).unwrap();
    let d = compute_densities(&FieldState { t: 0.0, u, v }, &grid, &cubic());
    let (a, b) = (interaction_q(&d, QMethod::PrefixSum).q_value, interaction_q(&d, QMethod::BruteForce).q_value);
    out.gate((a - b).abs() <= 1e-10 * b, format!("Q on a sampled gaussian state ({} nodes): {a:.12} vs {b:.12}", d.len()));

    let big = 1_000_000;
    let xs: Vec<f64> = (0..big).map(|k| -50.0 + 100.0 * k as f64 / big as f64).collect();
    let ws: Vec<f64> = (0..big).map(|_| rng.random_range(0.0..1.0)).collect();
    let best = (0..3)
        .map(|_| {
            let start = Instant::now();
            std::hint::black_box(pairwise_distance_prefix_sum(std::hint::black_box(&xs), &ws));
            start.elapsed()
        })
        .min()
        .unwrap();
    out.gate(
        best <= Duration::from_millis(100),
        format!("prefix sum, N = 1e6: {:.1} ms (best of 3, limit 100 ms)", best.as_secs_f64() * 1e3),
    );
    out
}

// ---------------------------------------------------------------- 5, 6, 8, 9

fn scenario_report(s: Scenario) -> ExperimentReport {
    let cfg = Config::for_scenario(s);
    let exp = cfg.experiment(s).unwrap();
    assert_eq!(exp, ExperimentConfig::default_for(s));
    run(&exp).unwrap()
}

fn report_checks(out: &mut Outcome, rep: &ExperimentReport) {
    for c in &rep.checks {
        out.gate(c.passed, format!("{}: {:.4e} (limit {:.4e})", c.name, c.value, c.limit));
    }
    out.gate(
        rep.conservation_drift <= rep.config.thresholds.conservation,
        format!("conservation drift {:.2e}", rep.conservation_drift),
    );
    out.info(format!("verdict {}", rep.verdict.name()));
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let rep = scenario_report(Scenario::Decay);
    report_checks(&mut out, &rep);
    out.passed &= rep.verdict == Verdict::Pass;
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let rep = scenario_report(Scenario::Retraction);
    assert_eq!(rep.config.eta, 2.0);
    report_checks(&mut out, &rep);
    let cone = rep.series("E_cone").unwrap();
    let e = rep.series("E").unwrap()[0];
    out.gate(
        *rep.times.last().unwrap() == 40.0 && cone.last().unwrap() > &(0.01 * e),
        format!("E_eta(40) / E = {:.4}", cone.last().unwrap() / e),
    );
    out.passed &= rep.verdict == Verdict::Pass;
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let rep = scenario_report(Scenario::Focusing);
    let over = rep.scalar("amplitude_over_threshold").unwrap();
    out.gate(over > 1.0, format!("amplitude / A* = {over:.3}"));
    out.gate(
        rep.scalar("initial_energy").is_some_and(|e| e < 0.0),
        format!("E(0) = {:.4}", rep.scalar("initial_energy").unwrap()),
    );
    match rep.blow_up {
        Some(b) => out.gate(b.t < 20.0, format!("blow-up detected at t = {} (step {})", b.t, b.step)),
        None => out.gate(false, "no blow-up detected before t = 20"),
    }
    let norms = rep.series("H1xL2_norm").unwrap();
    let tail = &norms[norms.len().saturating_sub(10)..];
    out.gate(
        tail.len() == 10 && tail.windows(2).all(|w| w[1] > w[0]),
        format!("H1xL2 norm over the last 10 samples: {:.3e} -> {:.3e}", tail[0], tail[tail.len() - 1]),
    );
    report_checks(&mut out, &rep);
    out.passed &= rep.verdict == Verdict::Pass;
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let rep = scenario_report(Scenario::Concentration);
    out.info(format!(
        "t_ref {} Q_ref {:.6} Q_min {:.6}",
        rep.scalar("t_ref").unwrap(),
        rep.scalar("Q_ref").unwrap(),
        rep.scalar("Q_min").unwrap()
    ));
    report_checks(&mut out, &rep);
    out.passed &= rep.verdict == Verdict::Pass;
    out
}

// ---------------------------------------------------------------- 7

/// Maximum of `β(β+1)z²/2 - z^(p+1)/((p+1)(p+2))` on a dense grid, polished by golden section.
fn cp_scan(p: f64) -> f64 {
    let k = 2.0 / (p - 1.0) * (2.0 / (p - 1.0) + 1.0);
    let g = |z: f64| 0.5 * k * z * z - z.powf(p + 1.0) / ((p + 1.0) * (p + 2.0));
    let (n, top) = (1_000_000, 50.0);
    let h = top / n as f64;
    let best = (0..=n).map(|i| i as f64 * h).fold(0.0, |b: f64, z| if g(z) > g(b) { z } else { b });
    let (mut a, mut b) = ((best - h).max(0.0), best + h);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let (c, d) = (b - r * (b - a), a + r * (b - a));
        if g(c) > g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    g(0.5 * (a + b))
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let oracle = cp_scan(3.0);
    let cp = cp_constant(3.0);
    out.gate(
        (cp - 5.0).abs() <= 1e-9 && (cp - oracle).abs() <= 1e-9,
        format!("C_3 = {cp} (scan oracle {oracle:.12})"),
    );

    let tol = OdeParams::DEFAULT_TOL;
    let flat = integrate_profile(&OdeParams::new(3.0, 2f64.sqrt(), 0.0)).unwrap();
    let dev = flat.f.iter().map(|f| (f - 2f64.sqrt()).abs()).fold(0.0, f64::max);
    out.gate(dev <= tol, format!("f = sqrt(2) kept to {dev:.1e} (tol {tol:.0e})"));

    let (mut increase, mut rate_error, mut count) = (f64::NEG_INFINITY, 0.0_f64, 0);
    for a in [0.5, 1.0, 2.0] {
        for b in [-1.0, 0.0, 1.0] {
            let sol = integrate_profile(&OdeParams::new(3.0, a, b)).unwrap();
            let rep = semi_energy(&sol);
            increase = increase.max(rep.max_increase() / rep.at_zero());
            rate_error = rate_error.max(rep.rate_error);
            count += 1;
        }
    }
    out.gate(
        increase <= 0.0,
        format!("semi-energy nonincreasing on [0, 1-1e-4] for {count} (a, b): largest step {increase:.2e}"),
    );
    out.gate(rate_error <= 1e-6, format!("semi-energy rate, finite difference vs closed form: {rate_error:.2e}"));

    let sol = integrate_profile(&OdeParams::new(3.0, 1.0, 0.0)).unwrap();
    let (c, f) = (
        lifted_pde_residual(&sol, 1.0, 2.0, 10.0, 0.02).unwrap(),
        lifted_pde_residual(&sol, 1.0, 2.0, 10.0, 0.01).unwrap(),
    );
    out.gate(in_band(c / f), format!("lifted PDE residual {c:.3e} -> {f:.3e}, ratio {:.3}", c / f));

    let table = ray_energy_decay(&sol, 1.0, 2.0, &[10.0, 20.0, 40.0, 80.0]).unwrap();
    let energies: Vec<String> = table.iter().map(|(t, e)| format!("E({t}) = {e:.4e}")).collect();
    out.gate(
        table.windows(2).all(|w| w[1].1 < w[0].1),
        format!("ray energy strictly decreasing: {}", energies.join(", ")),
    );
    let ratio = table[3].1 / table[0].1;
    out.gate(ratio < 0.1, format!("ray energy E(80)/E(10) = {ratio:.4} (limit 0.1)"));
    out
}

// ---------------------------------------------------------------- 10

fn wavelab(args: &[&str], cwd: &Path) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_wavelab"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let fast = ["--override", "grid.dx=0.01"];
    let runs: Vec<(Command, Vec<&str>)> = vec![
        (Command::Simulate, vec!["--override", "run.t_end=5"]),
        (Command::FluxCheck, vec![]),
        (Command::Trapezoid, vec![]),
        (Command::Scenario(Scenario::Decay), vec!["--override", "run.t_end=10"]),
        (Command::Scenario(Scenario::Tail), vec!["--override", "run.t_end=10"]),
        (Command::Scenario(Scenario::Retraction), vec!["--override", "run.t_end=10"]),
        (Command::Scenario(Scenario::Conjecture), vec!["--override", "run.t_end=10"]),
        (Command::Scenario(Scenario::Focusing), vec![]),
        (Command::Scenario(Scenario::Concentration), vec!["--override", "run.t_end=10"]),
        (Command::SelfSimilar, vec![]),
        (Command::CpTable, vec![]),
    ];
    for (command, extra) in runs {
        let name = command.name();
        let mut args = vec![name, "--out-dir", name, "--quiet"];
        args.extend_from_slice(&fast);
        args.extend_from_slice(&extra);
        let first = wavelab(&args, dir.path());
        let manifest = dir.path().join(name).join("manifest.json");
        let replay_dir = format!("{name}-replay");
        let second = wavelab(&["replay", manifest.to_str().unwrap(), "--out-dir", &replay_dir, "--quiet"], dir.path());
        let listed: serde_json::Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
        let files: Vec<&str> = listed["outputs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|o| o["file"].as_str().unwrap())
            .collect();
        let identical = files.iter().all(|f| {
            fs::read(dir.path().join(name).join(f)).unwrap() == fs::read(dir.path().join(&replay_dir).join(f)).unwrap()
        });
        out.gate(
            second.status.code() == Some(0) && identical && !files.is_empty(),
            format!(
                "{name}: exit {:?}, {} files byte-identical on replay",
                first.status.code().unwrap_or(-1),
                files.len()
            ),
        );
    }
    out
}

fn main() {
    let criteria: [(u8, &str, fn() -> Outcome); 10] = [
        (1, "conservation suite", criterion_1),
        (2, "pointwise density identities", criterion_2),
        (3, "flux and trapezoid closure", criterion_3),
        (4, "oracle equivalence and Q", criterion_4),
        (5, "decay trend", criterion_5),
        (6, "cone retraction", criterion_6),
        (7, "self-similar profile", criterion_7),
        (8, "focusing dichotomy", criterion_8),
        (9, "concentration", criterion_9),
        (10, "reproducibility", criterion_10),
    ];
    let only: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    println!("acceptance suite");
    for (id, title, check) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        println!(
            "{} criterion {id:>2}: {title} ({:.1} s){}",
            if outcome.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            if !outcome.passed && expected_fail { " [known]" } else { "" }
        );
        for line in &outcome.lines {
            println!("       {line}");
        }
        if outcome.passed == expected_fail {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all outcomes as recorded");
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}

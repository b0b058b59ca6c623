use alloc::vec::Vec;

use super::{invalid, FieldState, GridSpec, InitialData, Nonlinearity, Sign, WaveError};

/// `|u|` above this value is reported as blow-up.
pub const DEFAULT_BLOWUP_GUARD: f64 = 1e8;

/// When the solver hands states to observers.
#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    Never,
    EveryStep,
    /// Every `k`-th step, starting at step 0.
    Every(usize),
    /// The first grid time at or after each listed time.
    Times(Vec<f64>),
}

impl Schedule {
    fn steps(&self, grid: &GridSpec) -> StepFilter {
        match self {
            Schedule::Never => StepFilter::Never,
            Schedule::EveryStep => StepFilter::Every(1),
            Schedule::Every(k) => StepFilter::Every((*k).max(1)),
            Schedule::Times(ts) => {
                let mut steps: Vec<usize> = ts.iter().map(|&t| grid.steps_to(t)).collect();
                steps.sort_unstable();
                steps.dedup();
                StepFilter::List(steps, 0)
            }
        }
    }
}

enum StepFilter {
    Never,
    Every(usize),
    List(Vec<usize>, usize),
}

impl StepFilter {
    fn wants(&mut self, step: usize) -> bool {
        match self {
            StepFilter::Never => false,
            StepFilter::Every(k) => step % *k == 0,
            StepFilter::List(steps, cursor) => {
                while *cursor < steps.len() && steps[*cursor] < step {
                    *cursor += 1;
                }
                *cursor < steps.len() && steps[*cursor] == step
            }
        }
    }
}

/// Receives solver states at scheduled steps.
pub trait Observer {
    fn observe(&mut self, state: &FieldState);
}

impl<F: FnMut(&FieldState)> Observer for F {
    fn observe(&mut self, state: &FieldState) {
        self(state)
    }
}

/// Explicit leapfrog solver
///
/// ```text
/// u[n+1][j] = 2u[n][j] - u[n-1][j] + cfl^2 (u[n][j+1] - 2u[n][j] + u[n][j-1]) + dt^2 F(u[n][j])
/// ```
///
/// with `F(u) = -s |u|^(p-1) u` and homogeneous Dirichlet boundaries. At
/// `cfl = 1` the linear part is evaluated as `u[n][j+1] + u[n][j-1] - u[n-1][j]`,
/// the exact lattice form of d'Alembert's formula.
///
/// Only nodes inside the numerical domain of dependence of the initial
/// support are updated; everything outside is exactly zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Solver {
    grid: GridSpec,
    nl: Nonlinearity,
    guard: f64,
}

impl Solver {
    pub fn new(grid: GridSpec, nl: Nonlinearity) -> Self {
        Self {
            grid,
            nl,
            guard: DEFAULT_BLOWUP_GUARD,
        }
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nl
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }

    pub fn first_step(&self, init: &InitialData) -> Result<FieldState, WaveError> {
        first_step(init, &self.grid, &self.nl)
    }

    /// Advance to the first grid time `>= t_end`, calling every observer at
    /// each scheduled step, and return the final state.
    pub fn evolve(
        &self,
        init: &InitialData,
        t_end: f64,
        schedule: &Schedule,
        observers: &mut [&mut dyn Observer],
    ) -> Result<FieldState, WaveError> {
        let nl = self.nl;
        match (nl.sign(), nl.integer_exponent()) {
            (Sign::Disabled, _) => self.run(init, t_end, schedule, observers, |_| 0.0),
            (Sign::Defocusing, Some(3)) => self.run(init, t_end, schedule, observers, |u| -(u * u * u)),
            (Sign::Focusing, Some(3)) => self.run(init, t_end, schedule, observers, |u| u * u * u),
            _ => self.run(init, t_end, schedule, observers, move |u| nl.forcing(u)),
        }
    }

    fn run<F: Fn(f64) -> f64 + Copy>(
        &self,
        init: &InitialData,
        t_end: f64,
        schedule: &Schedule,
        observers: &mut [&mut dyn Observer],
        forcing: F,
    ) -> Result<FieldState, WaveError> {
        if !t_end.is_finite() || t_end < 0.0 {
            return Err(invalid("t_end", "t_end must be finite and non-negative"));
        }
        let grid = &self.grid;
        let n = grid.n_cells();
        let dt = grid.dt();
        let n_final = grid.steps_to(t_end);

        let (u0, _) = init.sample(grid)?;
        let vel = init.velocity_step(grid, dt)?;
        let u1 = first_step_from(&u0, &vel, grid, forcing);

        // active = smallest index range holding every nonzero of the last two levels
        let mut active = nonzero_range(&u0).merge(nonzero_range(&u1));
        if let Some((lo, hi)) = active.bounds() {
            if lo < n_final + 1 || hi + n_final + 1 > n {
                return Err(WaveError::DomainTooSmall { t_end });
            }
        }

        let mut filter = schedule.steps(grid);
        let inv_dt = 1.0 / dt;
        let mut state = FieldState {
            t: 0.0,
            u: u0,
            v: vel.iter().map(|s| s * inv_dt).collect(),
        };
        if filter.wants(0) || n_final == 0 {
            notify(observers, &state);
        }
        if n_final == 0 {
            return Ok(state);
        }
        state.v.iter_mut().for_each(|s| *s = 0.0);

        let mut prev = core::mem::replace(&mut state.u, u1);
        let mut next = alloc::vec![0.0; n + 1];
        let exact = grid.cfl() == 1.0;
        let c2 = grid.cfl() * grid.cfl();
        let dt2 = dt * dt;
        let half_inv_dt = 0.5 * inv_dt;

        for step in 1..=n_final {
            active = active.grow(1, n);
            let Some((lo, hi)) = active.bounds() else {
                // identically zero solution
                state.t = step as f64 * dt;
                if filter.wants(step) || step == n_final {
                    notify(observers, &state);
                }
                continue;
            };
            let ok = if exact {
                leap_exact(&prev, &state.u, &mut next, lo, hi, dt2, self.guard, forcing)
            } else {
                leap_general(&prev, &state.u, &mut next, lo, hi, c2, dt2, self.guard, forcing)
            };
            if !ok {
                return Err(WaveError::BlowUpDetected {
                    t: (step + 1) as f64 * dt,
                    step: step + 1,
                });
            }
            state.t = step as f64 * dt;
            if filter.wants(step) || step == n_final {
                for j in lo..=hi {
                    state.v[j] = (next[j] - prev[j]) * half_inv_dt;
                }
                notify(observers, &state);
            }
            core::mem::swap(&mut prev, &mut state.u);
            core::mem::swap(&mut state.u, &mut next);
        }
        // `state.u` now holds level n_final + 1; restore level n_final
        core::mem::swap(&mut state.u, &mut prev);
        Ok(state)
    }
}

fn notify(observers: &mut [&mut dyn Observer], state: &FieldState) {
    for o in observers.iter_mut() {
        o.observe(state);
    }
}

#[allow(clippy::too_many_arguments)]
#[inline(never)]
fn leap_exact<F: Fn(f64) -> f64>(
    prev: &[f64],
    cur: &[f64],
    next: &mut [f64],
    lo: usize,
    hi: usize,
    dt2: f64,
    guard: f64,
    forcing: F,
) -> bool {
    let mut ok = true;
    for j in lo..=hi {
        let x = cur[j + 1] + cur[j - 1] - prev[j] + dt2 * forcing(cur[j]);
        ok &= x.abs() <= guard;
        next[j] = x;
    }
    ok
}

#[allow(clippy::too_many_arguments)]
#[inline(never)]
fn leap_general<F: Fn(f64) -> f64>(
    prev: &[f64],
    cur: &[f64],
    next: &mut [f64],
    lo: usize,
    hi: usize,
    c2: f64,
    dt2: f64,
    guard: f64,
    forcing: F,
) -> bool {
    let mut ok = true;
    for j in lo..=hi {
        let c = cur[j];
        // neighbours are summed first so mirrored data give mirrored results
        let x = 2.0 * c - prev[j] + c2 * ((cur[j + 1] + cur[j - 1]) - 2.0 * c) + dt2 * forcing(c);
        ok &= x.abs() <= guard;
        next[j] = x;
    }
    ok
}

/// Second-order starting level
/// `u[1] = u[0] + dt u_1 + dt^2/2 (u_0'' + F(u_0))`.
///
/// The `dt u_1` term is taken as half the integral of `u_1` over
/// `[x - dt, x + dt]` (exact for analytic data), which agrees with
/// `dt u_1(x)` up to `O(dt^3)` and makes the `cfl = 1` start an exact
/// d'Alembert step in linear mode. The returned velocity is the Taylor
/// estimate `u_1 + dt (u_0'' + F(u_0))`.
pub fn first_step(
    init: &InitialData,
    grid: &GridSpec,
    nl: &Nonlinearity,
) -> Result<FieldState, WaveError> {
    let dt = grid.dt();
    let (u0, u1) = init.sample(grid)?;
    let vel = init.velocity_step(grid, dt)?;
    let f = |u: f64| nl.forcing(u);
    let u = first_step_from(&u0, &vel, grid, f);
    let inv_dx2 = 1.0 / (grid.dx() * grid.dx());
    let n = u0.len();
    let v = (0..n)
        .map(|j| {
            let lap = if j == 0 || j + 1 == n {
                0.0
            } else {
                ((u0[j + 1] + u0[j - 1]) - 2.0 * u0[j]) * inv_dx2
            };
            u1[j] + dt * (lap + f(u0[j]))
        })
        .collect();
    Ok(FieldState { t: dt, u, v })
}

fn first_step_from<F: Fn(f64) -> f64>(u0: &[f64], vel: &[f64], grid: &GridSpec, forcing: F) -> Vec<f64> {
    let n = u0.len();
    let dt = grid.dt();
    let half_dt2 = 0.5 * dt * dt;
    let half_c2 = 0.5 * grid.cfl() * grid.cfl();
    let exact = grid.cfl() == 1.0;
    (0..n)
        .map(|j| {
            let u = u0[j];
            if j == 0 || j + 1 == n {
                u + vel[j] + half_dt2 * forcing(u)
            } else if exact {
                0.5 * (u0[j + 1] + u0[j - 1]) + vel[j] + half_dt2 * forcing(u)
            } else {
                u + vel[j] + half_c2 * ((u0[j + 1] + u0[j - 1]) - 2.0 * u) + half_dt2 * forcing(u)
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Range(Option<(usize, usize)>);

impl Range {
    fn bounds(self) -> Option<(usize, usize)> {
        self.0
    }

    fn merge(self, other: Range) -> Range {
        match (self.0, other.0) {
            (None, r) | (r, None) => Range(r),
            (Some((a, b)), Some((c, d))) => Range(Some((a.min(c), b.max(d)))),
        }
    }

    /// Widen by `k` nodes, staying within the interior `1..=n-1`.
    fn grow(self, k: usize, n: usize) -> Range {
        Range(
            self.0
                .map(|(lo, hi)| (lo.saturating_sub(k).max(1), (hi + k).min(n - 1))),
        )
    }
}

fn nonzero_range(u: &[f64]) -> Range {
    let lo = u.iter().position(|&x| x != 0.0);
    let hi = u.iter().rposition(|&x| x != 0.0);
    Range(lo.zip(hi))
}

use alloc::vec::Vec;

use super::{densities::densities_from, integrate_interval, slice_of, DiagnosticError};
use crate::math;
use crate::wave::{FieldState, GridSpec, Nonlinearity, Observer, Slice, Trajectory};

/// Full energy inside the shifted cone `|x| < t - eta` at the densities' time.
/// An empty cone (`t <= eta`) gives 0.
pub fn light_cone_energy_at(d: &super::EnergyDensities, eta: f64) -> f64 {
    let r = d.t - eta;
    if !(r > 0.0) {
        return 0.0;
    }
    integrate_interval(&d.e_full, d.x0, d.dx, -r, r)
}

/// [`light_cone_energy_at`] on the recorded slice at time `t`.
pub fn light_cone_energy(trajectory: &Trajectory, nl: &Nonlinearity, eta: f64, t: f64) -> Result<f64, DiagnosticError> {
    if !(t > eta) {
        return Ok(0.0);
    }
    let slice = trajectory
        .at_time(t)
        .filter(|s| (s.t - t).abs() <= trajectory.grid().dt())
        .ok_or(DiagnosticError::MissingSlice {
            step: trajectory.grid().steps_to(t),
        })?;
    let d = densities_from(slice.t, slice.x0, slice.dx, slice.u, slice.v, nl);
    Ok(light_cone_energy_at(&d, eta))
}

/// Running space-time integral of
/// `((t+1)² - x²)₊ |u|^(p+1) / (t+1)³` by the trapezoid rule in `x` and in `t`.
///
/// Feed it slices in increasing time; the running total is nondecreasing.
#[derive(Clone, Debug)]
pub struct MorawetzAccumulator {
    grid: GridSpec,
    nl: Nonlinearity,
    last: Option<(f64, f64)>,
    total: f64,
    series: Vec<(f64, f64)>,
}

impl MorawetzAccumulator {
    pub fn new(grid: GridSpec, nl: Nonlinearity) -> Self {
        Self {
            grid,
            nl,
            last: None,
            total: 0.0,
            series: Vec::new(),
        }
    }

    fn integrand(&self, slice: &Slice<'_>) -> f64 {
        let t1 = slice.t + 1.0;
        let r2 = t1 * t1;
        let values: Vec<f64> = slice
            .u
            .iter()
            .enumerate()
            .map(|(i, &u)| {
                let x = slice.x(i);
                let w = r2 - x * x;
                if w > 0.0 {
                    w * self.nl.abs_pow_p1(u)
                } else {
                    0.0
                }
            })
            .collect();
        math::trapezoid(&values, slice.dx) / (r2 * t1)
    }

    pub fn feed(&mut self, slice: &Slice<'_>) {
        let value = self.integrand(slice);
        if let Some((t0, v0)) = self.last {
            if slice.t <= t0 {
                return;
            }
            self.total += 0.5 * (slice.t - t0) * (v0 + value);
        }
        self.last = Some((slice.t, value));
        self.series.push((slice.t, self.total));
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// `(t, accumulated value)` after every fed slice.
    pub fn series(&self) -> &[(f64, f64)] {
        &self.series
    }
}

impl Observer for MorawetzAccumulator {
    fn observe(&mut self, state: &FieldState) {
        let grid = self.grid;
        self.feed(&slice_of(&grid, state));
    }
}

/// Accumulated Morawetz integral over the recorded slices with `t <= t_max`.
pub fn morawetz_accumulator(trajectory: &Trajectory, nl: &Nonlinearity, t_max: f64) -> f64 {
    let eps = 1e-9 * trajectory.grid().dt();
    let mut acc = MorawetzAccumulator::new(*trajectory.grid(), *nl);
    for slice in trajectory.slices().filter(|s| s.t <= t_max + eps) {
        acc.feed(&slice);
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::compute_densities;
    use crate::wave::{InitialData, Schedule, Solver};

    #[test]
    fn empty_cone_is_zero() {
        let grid = GridSpec::symmetric(4.0, 0.05, 1.0).unwrap();
        let nl = Nonlinearity::defocusing(3.0).unwrap();
        let init = InitialData::gaussian(1.0, 0.0, 1.0);
        let (u, v) = init.sample(&grid).unwrap();
        let d = compute_densities(&FieldState { t: 0.0, u, v }, &grid, &nl);
        assert_eq!(light_cone_energy_at(&d, 0.0), 0.0);
        assert_eq!(light_cone_energy_at(&d, 3.0), 0.0);
        assert!(light_cone_energy_at(&d, -1.0) > 0.0);
    }

    #[test]
    fn morawetz_is_monotone() {
        let grid = GridSpec::symmetric(12.0, 0.02, 1.0).unwrap();
        let nl = Nonlinearity::defocusing(3.0).unwrap();
        let mut traj = Trajectory::new(grid);
        Solver::new(grid, nl)
            .evolve(&InitialData::gaussian(1.0, 0.0, 1.0), 4.0, &Schedule::Every(5), &mut [&mut traj])
            .unwrap();
        let a = morawetz_accumulator(&traj, &nl, 1.0);
        let b = morawetz_accumulator(&traj, &nl, 2.0);
        let c = morawetz_accumulator(&traj, &nl, 4.0);
        assert!(0.0 < a && a <= b && b <= c);
    }
}

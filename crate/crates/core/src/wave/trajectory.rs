use alloc::vec::Vec;

use super::{FieldState, GridSpec, Observer};
use crate::math;

/// Recorded sequence of (possibly windowed) states; append-only while the
/// solver runs, read-only afterwards.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    grid: GridSpec,
    lo: usize,
    hi: usize,
    times: Vec<f64>,
    steps: Vec<usize>,
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

/// Borrowed view of one recorded slice. Local index `i` sits at `x0 + i dx`.
#[derive(Clone, Copy, Debug)]
pub struct Slice<'a> {
    pub t: f64,
    pub step: usize,
    pub x0: f64,
    pub dx: f64,
    pub u: &'a [f64],
    pub v: &'a [f64],
}

impl Slice<'_> {
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }
}

impl Trajectory {
    pub fn new(grid: GridSpec) -> Self {
        Self::from_range(grid, 0, grid.n_cells())
    }

    /// Records only the nodes covering `[x_lo, x_hi]`.
    pub fn windowed(grid: GridSpec, x_lo: f64, x_hi: f64) -> Self {
        let dx = grid.dx();
        let lo = math::floor((x_lo - grid.x_min()) / dx + 1e-9).max(0.0) as usize;
        let hi = (math::ceil((x_hi - grid.x_min()) / dx - 1e-9).max(0.0) as usize).min(grid.n_cells());
        Self::from_range(grid, lo.min(hi), hi)
    }

    fn from_range(grid: GridSpec, lo: usize, hi: usize) -> Self {
        Self {
            grid,
            lo,
            hi,
            times: Vec::new(),
            steps: Vec::new(),
            u: Vec::new(),
            v: Vec::new(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Global node range `[lo, hi]` that is recorded.
    pub fn window(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn slice(&self, k: usize) -> Slice<'_> {
        Slice {
            t: self.times[k],
            step: self.steps[k],
            x0: self.grid.x(self.lo),
            dx: self.grid.dx(),
            u: &self.u[k],
            v: &self.v[k],
        }
    }

    pub fn slices(&self) -> impl Iterator<Item = Slice<'_>> + '_ {
        (0..self.len()).map(move |k| self.slice(k))
    }

    /// Slice recorded at solver step `step`.
    pub fn at_step(&self, step: usize) -> Option<Slice<'_>> {
        self.steps.binary_search(&step).ok().map(|k| self.slice(k))
    }

    /// First recorded slice with time `>= t` (up to a small fraction of `dt`).
    pub fn at_time(&self, t: f64) -> Option<Slice<'_>> {
        let eps = 1e-9 * self.grid.dt();
        self.times.iter().position(|&s| s >= t - eps).map(|k| self.slice(k))
    }

    /// `true` if every step between the first and last recording is present.
    pub fn is_dense(&self) -> bool {
        self.steps.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// Slice rebuilt as a full-grid state (zero outside the window).
    pub fn state(&self, k: usize) -> FieldState {
        let mut s = FieldState::zeros(&self.grid);
        s.t = self.times[k];
        s.u[self.lo..=self.hi].copy_from_slice(&self.u[k]);
        s.v[self.lo..=self.hi].copy_from_slice(&self.v[k]);
        s
    }
}

impl Observer for Trajectory {
    fn observe(&mut self, state: &FieldState) {
        let step = math::round(state.t / self.grid.dt()) as usize;
        self.times.push(state.t);
        self.steps.push(step);
        self.u.push(state.u[self.lo..=self.hi].to_vec());
        self.v.push(state.v[self.lo..=self.hi].to_vec());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::{InitialData, Nonlinearity, Schedule, Solver};

    #[test]
    fn window_records_requested_nodes() {
        let grid = GridSpec::symmetric(4.0, 0.1, 1.0).unwrap();
        let solver = Solver::new(grid, Nonlinearity::defocusing(3.0).unwrap());
        let mut full = Trajectory::new(grid);
        let mut win = Trajectory::windowed(grid, -1.0, 0.5);
        solver
            .evolve(
                &InitialData::polynomial_bump(0.5, 0.0, 1.0),
                1.0,
                &Schedule::EveryStep,
                &mut [&mut full, &mut win],
            )
            .unwrap();
        assert_eq!(full.len(), 11);
        assert!(full.is_dense());
        let (lo, hi) = win.window();
        assert!((grid.x(lo) + 1.0).abs() < 1e-12 && (grid.x(hi) - 0.5).abs() < 1e-12);
        let a = full.at_step(7).unwrap();
        let b = win.at_step(7).unwrap();
        assert_eq!(&a.u[lo..=hi], b.u);
        assert!((b.x(0) + 1.0).abs() < 1e-12);
        assert_eq!(full.at_time(0.65).unwrap().step, 7);
        assert_eq!(full.state(7).u, a.u);
    }
}

use alloc::vec::Vec;

use super::{slice_of, DiagnosticError};
use crate::math;
use crate::wave::{space_derivative, FieldState, GridSpec, Nonlinearity, Observer, Slice, Trajectory};

/// Virial functional `I(s) = ∫ a(y) u_y u_s dy`, `a(y) = clamp(y, -R, R)`,
/// against its derivative identity
///
/// ```text
/// I'(s) = -∫_{-R}^{R} [ u_s²/2 + u_y²/2 - P(u) ] dy
/// ```
///
/// with the signed potential `P` (for the focusing sign `-P = |u|^(p+1)/(p+1)`).
#[derive(Clone, Debug, PartialEq)]
pub struct VirialReport {
    pub r: f64,
    pub s_values: Vec<f64>,
    pub i_values: Vec<f64>,
    /// Right-hand side of the identity at each sample time.
    pub rhs_values: Vec<f64>,
    /// `(R/2) ∫ (u_y² + u_s²) dy`, an upper bound for `|I(s)|`.
    pub bound_values: Vec<f64>,
    /// Centered difference of `I` minus the right-hand side at interior samples
    /// (entry `k` belongs to `s_values[k + 1]`).
    pub residuals: Vec<f64>,
}

impl VirialReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs()))
    }
}

#[derive(Clone, Debug)]
pub struct VirialMonitor {
    grid: GridSpec,
    nl: Nonlinearity,
    r: f64,
    s: Vec<f64>,
    i: Vec<f64>,
    rhs: Vec<f64>,
    bound: Vec<f64>,
}

impl VirialMonitor {
    pub fn new(grid: GridSpec, nl: Nonlinearity, r: f64) -> Result<Self, DiagnosticError> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(DiagnosticError::InvalidArgument {
                field: "R",
                reason: "must be positive and finite",
            });
        }
        Ok(Self {
            grid,
            nl,
            r,
            s: Vec::new(),
            i: Vec::new(),
            rhs: Vec::new(),
            bound: Vec::new(),
        })
    }

    pub fn feed(&mut self, slice: &Slice<'_>) {
        if self.s.last().is_some_and(|&t| slice.t <= t) {
            return;
        }
        let ux = space_derivative(slice.u, slice.dx);
        let n = slice.u.len();
        let mut weighted = Vec::with_capacity(n);
        let mut inner = Vec::with_capacity(n);
        let mut norm = Vec::with_capacity(n);
        for k in 0..n {
            let x = slice.x(k);
            let (uy, us) = (ux[k], slice.v[k]);
            weighted.push(x.clamp(-self.r, self.r) * uy * us);
            inner.push(0.5 * us * us + 0.5 * uy * uy - self.nl.potential(slice.u[k]));
            norm.push(uy * uy + us * us);
        }
        let dx = slice.dx;
        self.s.push(slice.t);
        self.i.push(math::trapezoid(&weighted, dx));
        self.rhs
            .push(-super::integrate_interval(&inner, slice.x0, dx, -self.r, self.r));
        self.bound.push(0.5 * self.r * math::trapezoid(&norm, dx));
    }

    pub fn finish(self) -> VirialReport {
        let residuals = (1..self.s.len().saturating_sub(1))
            .map(|k| (self.i[k + 1] - self.i[k - 1]) / (self.s[k + 1] - self.s[k - 1]) - self.rhs[k])
            .collect();
        VirialReport {
            r: self.r,
            s_values: self.s,
            i_values: self.i,
            rhs_values: self.rhs,
            bound_values: self.bound,
            residuals,
        }
    }
}

impl Observer for VirialMonitor {
    fn observe(&mut self, state: &FieldState) {
        let grid = self.grid;
        self.feed(&slice_of(&grid, state));
    }
}

/// Virial identity on the recorded slices. Residuals are second order in
/// `dx` when the slices are recorded at every step.
pub fn virial_check(trajectory: &Trajectory, nl: &Nonlinearity, r: f64) -> Result<VirialReport, DiagnosticError> {
    let mut monitor = VirialMonitor::new(*trajectory.grid(), *nl, r)?;
    for slice in trajectory.slices() {
        monitor.feed(&slice);
    }
    Ok(monitor.finish())
}

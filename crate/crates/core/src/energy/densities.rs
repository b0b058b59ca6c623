use alloc::vec::Vec;

use crate::math;
use crate::wave::{space_derivative, FieldState, GridSpec, Nonlinearity, Slice};

/// Pointwise energy densities at one time.
///
/// `e_full = e_plus + e_minus` and `momentum = e_minus - e_plus` are formed
/// from the same stored values, so both identities hold exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyDensities {
    pub t: f64,
    /// Position of the first sample.
    pub x0: f64,
    pub dx: f64,
    pub e_plus: Vec<f64>,
    pub e_minus: Vec<f64>,
    pub e_full: Vec<f64>,
    pub momentum: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Density {
    Plus,
    Minus,
    Full,
    Momentum,
}

impl EnergyDensities {
    pub fn len(&self) -> usize {
        self.e_full.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e_full.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn x_end(&self) -> f64 {
        self.x(self.len().saturating_sub(1))
    }

    pub fn get(&self, which: Density) -> &[f64] {
        match which {
            Density::Plus => &self.e_plus,
            Density::Minus => &self.e_minus,
            Density::Full => &self.e_full,
            Density::Momentum => &self.momentum,
        }
    }
}

pub(crate) fn densities_from(
    t: f64,
    x0: f64,
    dx: f64,
    u: &[f64],
    v: &[f64],
    nl: &Nonlinearity,
) -> EnergyDensities {
    let ux = space_derivative(u, dx);
    let n = u.len();
    let mut e_plus = Vec::with_capacity(n);
    let mut e_minus = Vec::with_capacity(n);
    let mut e_full = Vec::with_capacity(n);
    let mut momentum = Vec::with_capacity(n);
    for j in 0..n {
        let a = ux[j] - v[j];
        let b = ux[j] + v[j];
        let half_pot = 0.5 * nl.potential(u[j]);
        let ep = 0.25 * a * a + half_pot;
        let em = 0.25 * b * b + half_pot;
        e_plus.push(ep);
        e_minus.push(em);
        e_full.push(ep + em);
        momentum.push(em - ep);
    }
    EnergyDensities {
        t,
        x0,
        dx,
        e_plus,
        e_minus,
        e_full,
        momentum,
    }
}

/// Densities of a full-grid state. For a focusing nonlinearity the potential
/// enters with its physical (negative) sign, so `e_±` may be negative.
pub fn compute_densities(state: &FieldState, grid: &GridSpec, nl: &Nonlinearity) -> EnergyDensities {
    densities_from(state.t, grid.x_min(), grid.dx(), &state.u, &state.v, nl)
}

pub fn densities_of_slice(slice: &Slice<'_>, nl: &Nonlinearity) -> EnergyDensities {
    densities_from(slice.t, slice.x0, slice.dx, slice.u, slice.v, nl)
}

/// Integral over `[a, b]` of the piecewise-linear interpolant of `values`
/// sampled at `x0 + i dx`; the interval is clipped to the sampled range.
/// On whole cells this is the composite trapezoid rule.
pub fn integrate_interval(values: &[f64], x0: f64, dx: f64, a: f64, b: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let x_end = x0 + (n - 1) as f64 * dx;
    let a = a.max(x0);
    let b = b.min(x_end);
    if !(b > a) {
        return 0.0;
    }
    let sa = snap((a - x0) / dx);
    let sb = snap((b - x0) / dx);
    let ia = (math::floor(sa) as usize).min(n - 2);
    let ib = (math::floor(sb) as usize).min(n - 2);
    // integral of the linear interpolant on cell i between local coordinates lo..hi in [0,1]
    let cell = |i: usize, lo: f64, hi: f64| {
        let f0 = values[i];
        let df = values[i + 1] - f0;
        dx * (f0 * (hi - lo) + 0.5 * df * (hi * hi - lo * lo))
    };
    if ia == ib {
        return cell(ia, sa - ia as f64, sb - ia as f64);
    }
    let mut total = cell(ia, sa - ia as f64, 1.0);
    if ib > ia + 1 {
        let inner = &values[ia + 1..=ib];
        total += math::trapezoid(inner, dx);
    }
    total + cell(ib, 0.0, sb - ib as f64)
}

/// Local coordinate rounded to the nearest node when within rounding of it.
fn snap(s: f64) -> f64 {
    let r = math::round(s);
    if (s - r).abs() <= 1e-9 {
        r
    } else {
        s
    }
}

/// `E_which(t; a, b)` by trapezoid quadrature with linear interpolation at
/// non-node endpoints. Half-infinite intervals are passed as infinities and
/// clipped to the grid.
pub fn interval_energy(d: &EnergyDensities, a: f64, b: f64, which: Density) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    integrate_interval(d.get(which), d.x0, d.dx, a, b)
}

/// Totals of the conserved quantities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConservedQuantities {
    pub energy: f64,
    pub momentum: f64,
    pub e_plus: f64,
    pub e_minus: f64,
}

impl ConservedQuantities {
    /// Largest relative drift of the four totals against `reference`,
    /// normalized by the reference energy.
    pub fn relative_drift(&self, reference: &ConservedQuantities) -> f64 {
        let scale = reference.energy.abs();
        if scale == 0.0 {
            return if *self == *reference { 0.0 } else { f64::INFINITY };
        }
        [
            self.energy - reference.energy,
            self.momentum - reference.momentum,
            self.e_plus - reference.e_plus,
            self.e_minus - reference.e_minus,
        ]
        .iter()
        .fold(0.0_f64, |m, d| m.max(d.abs()))
            / scale
    }
}

/// `(E, M, E_+, E_-)` over the whole sampled range.
pub fn conserved_pair(d: &EnergyDensities) -> ConservedQuantities {
    let total = |w: Density| math::trapezoid(d.get(w), d.dx);
    ConservedQuantities {
        energy: total(Density::Full),
        momentum: total(Density::Momentum),
        e_plus: total(Density::Plus),
        e_minus: total(Density::Minus),
    }
}

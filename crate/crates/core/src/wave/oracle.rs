//! Picard iteration of the integral form of the Cauchy problem,
//!
//! ```text
//! (T u)(x,t) = free(x,t) - 1/2 s ∬_{backward light triangle of (x,t)} |u|^(p-1) u
//! ```
//!
//! on the space-time lattice `(x_j, m dx)`. The triangle integral is a
//! composite midpoint rule over characteristic diamonds centred on lattice
//! points (half diamonds on `t = 0`), accumulated with the recursion
//! `S(j,m) = w F(j,m-1) + S(j-1,m-1) + S(j+1,m-1) - S(j,m-2)`.

use alloc::vec::Vec;

use super::{invalid, FieldState, GridSpec, InitialData, Nonlinearity, Sign, WaveError};
use crate::math;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    /// Stop when successive iterates differ by less than this in sup norm.
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iterations: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution {
    /// Slice at the first lattice time `>= T`; `v` is a centred time difference.
    pub state: FieldState,
    pub iterations: usize,
    pub last_change: f64,
    /// `p T^2 A^(p-1)`.
    pub contraction_bound: f64,
    /// Every lattice level `0..=steps+1`.
    pub levels: Vec<Vec<f64>>,
}

struct Lattice<'a> {
    grid: &'a GridSpec,
    nl: &'a Nonlinearity,
    free: Vec<Vec<f64>>,
    dx: f64,
}

impl Lattice<'_> {
    fn apply(&self, u: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let s = self.nl.sign().factor();
        if s == 0.0 {
            return self.free.clone();
        }
        let n = self.grid.n_nodes();
        let levels = self.free.len();
        let w_full = 2.0 * self.dx * self.dx;
        let w_half = self.dx * self.dx;
        let mut tri: Vec<Vec<f64>> = Vec::with_capacity(levels);
        tri.push(alloc::vec![0.0; n]);
        for m in 1..levels {
            let w = if m == 1 { w_half } else { w_full };
            let below = &tri[m - 1];
            let row: Vec<f64> = (0..n)
                .map(|j| {
                    let left = if j > 0 { below[j - 1] } else { 0.0 };
                    let right = if j + 1 < n { below[j + 1] } else { 0.0 };
                    let overlap = if m >= 2 { tri[m - 2][j] } else { 0.0 };
                    w * self.nl.power(u[m - 1][j]) + left + right - overlap
                })
                .collect();
            tri.push(row);
        }
        self.free
            .iter()
            .zip(&tri)
            .map(|(f, t)| f.iter().zip(t).map(|(a, b)| a - 0.5 * s * b).collect())
            .collect()
    }
}

fn sup_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

fn build_lattice<'a>(
    init: &InitialData,
    grid: &'a GridSpec,
    nl: &'a Nonlinearity,
    levels: usize,
) -> Result<Lattice<'a>, WaveError> {
    let dx = grid.dx();
    let mut free = Vec::with_capacity(levels);
    for m in 0..levels {
        let t = m as f64 * dx;
        let row: Option<Vec<f64>> = grid.nodes().map(|x| init.free_wave(x, t)).collect();
        free.push(row.ok_or_else(|| invalid("init", "the oracle needs analytic initial data"))?);
    }
    Ok(Lattice { grid, nl, free, dx })
}

/// One application of the d'Alembert map to a space-time field given on the
/// oracle lattice (levels spaced by `dx`).
pub fn dalembert_transform(
    init: &InitialData,
    grid: &GridSpec,
    nl: &Nonlinearity,
    levels: &[Vec<f64>],
) -> Result<Vec<Vec<f64>>, WaveError> {
    let lattice = build_lattice(init, grid, nl, levels.len())?;
    Ok(lattice.apply(levels))
}

/// Fixed point of the d'Alembert map on `[0, T]`, evaluated at `T`.
pub fn dalembert_oracle(
    init: &InitialData,
    grid: &GridSpec,
    nl: &Nonlinearity,
    t: f64,
    options: OracleOptions,
) -> Result<OracleSolution, WaveError> {
    if !t.is_finite() || t < 0.0 {
        return Err(invalid("T", "T must be finite and non-negative"));
    }
    let dx = grid.dx();
    let steps = if t <= 0.0 {
        0
    } else {
        math::ceil(t / dx - 1e-9) as usize
    };
    let t_lattice = steps as f64 * dx;
    let lattice = build_lattice(init, grid, nl, steps + 2)?;

    // A = sup |u_0(x-t) + u_0(x+t) + int u_1| over the lattice, i.e. twice the free wave
    let a = 2.0 * lattice.free.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
    let bound = match nl.sign() {
        Sign::Disabled => 0.0,
        _ => nl.p() * t_lattice * t_lattice * math::pow(a, nl.p() - 1.0),
    };
    if bound > 0.5 {
        return Err(WaveError::NoContraction { bound });
    }

    let mut current: Vec<Vec<f64>> = lattice.free.iter().map(|r| alloc::vec![0.0; r.len()]).collect();
    let mut iterations = 0;
    let mut change = f64::INFINITY;
    while iterations < options.max_iterations {
        let next = lattice.apply(&current);
        change = sup_diff(&next, &current);
        current = next;
        iterations += 1;
        if change < options.tol || nl.sign() == Sign::Disabled {
            break;
        }
    }
    if !(change < options.tol) && nl.sign() != Sign::Disabled {
        return Err(WaveError::NonConvergence {
            iterations,
            last_change: change,
        });
    }

    let u = current[steps].clone();
    let v: Vec<f64> = if steps == 0 {
        // the level below t = 0 mirrors level 1 up to the velocity: use a one-sided difference
        current[1].iter().zip(&current[0]).map(|(a, b)| (a - b) / dx).collect()
    } else {
        current[steps + 1]
            .iter()
            .zip(&current[steps - 1])
            .map(|(a, b)| (a - b) / (2.0 * dx))
            .collect()
    };
    Ok(OracleSolution {
        state: FieldState { t: t_lattice, u, v },
        iterations,
        last_change: change,
        contraction_bound: bound,
        levels: current,
    })
}

use alloc::vec::Vec;

use super::GridSpec;

/// One time slice of the discrete solution.
///
/// `v` approximates `u_t`. A state handed to observers or returned by the
/// solver always has finite samples; non-finite values are reported as
/// blow-up instead.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl FieldState {
    pub fn zeros(grid: &GridSpec) -> Self {
        Self {
            t: 0.0,
            u: alloc::vec![0.0; grid.n_nodes()],
            v: alloc::vec![0.0; grid.n_nodes()],
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn matches(&self, grid: &GridSpec) -> bool {
        self.u.len() == grid.n_nodes() && self.v.len() == grid.n_nodes()
    }

    pub fn sup_norm(&self) -> f64 {
        self.u.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Maximum of `|u(x) - u(-x)|` and `|v(x) - v(-x)|` for a grid
    /// symmetric about the origin.
    pub fn evenness_defect(&self) -> f64 {
        let n = self.u.len();
        (0..n / 2).fold(0.0_f64, |m, j| {
            m.max((self.u[j] - self.u[n - 1 - j]).abs())
                .max((self.v[j] - self.v[n - 1 - j]).abs())
        })
    }
}

/// `u_x` on uniformly spaced samples: centered differences inside,
/// second-order one-sided differences at both ends.
pub fn space_derivative(u: &[f64], dx: f64) -> Vec<f64> {
    let n = u.len();
    let mut ux = alloc::vec![0.0; n];
    if n < 3 {
        if n == 2 {
            let d = (u[1] - u[0]) / dx;
            ux[0] = d;
            ux[1] = d;
        }
        return ux;
    }
    let inv2 = 0.5 / dx;
    for j in 1..n - 1 {
        ux[j] = (u[j + 1] - u[j - 1]) * inv2;
    }
    ux[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv2;
    ux[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv2;
    ux
}

/// `(u_x, u_t)` samples of a state.
pub fn sample_derivatives(state: &FieldState, grid: &GridSpec) -> (Vec<f64>, Vec<f64>) {
    (space_derivative(&state.u, grid.dx()), state.v.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_has_zero_derivative() {
        let grid = GridSpec::new(-1.0, 1.0, 20, 1.0).unwrap();
        let s = FieldState::zeros(&grid);
        let (ux, ut) = sample_derivatives(&s, &grid);
        assert!(ux.iter().chain(ut.iter()).all(|&x| x == 0.0));
    }

    #[test]
    fn linear_ramp_is_differentiated_exactly() {
        let grid = GridSpec::new(0.0, 2.0, 16, 1.0).unwrap();
        let u: Vec<f64> = grid.nodes().collect();
        let s = FieldState {
            t: 0.0,
            v: alloc::vec![0.0; u.len()],
            u,
        };
        let (ux, _) = sample_derivatives(&s, &grid);
        for d in ux {
            assert!((d - 1.0).abs() < 1e-14, "{d}");
        }
    }

    #[test]
    fn sine_derivative_is_second_order() {
        let grid = GridSpec::new(0.0, 3.0, 3000, 1.0).unwrap();
        let u: Vec<f64> = grid.nodes().map(f64::sin).collect();
        let s = FieldState {
            t: 0.0,
            v: u.clone(),
            u,
        };
        let (ux, ut) = sample_derivatives(&s, &grid);
        assert_eq!(ut, s.v);
        let err = grid
            .nodes()
            .zip(&ux)
            .fold(0.0_f64, |m, (x, d)| m.max((d - x.cos()).abs()));
        assert!(err <= 1e-6, "{err}");
    }
}

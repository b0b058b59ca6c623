//! Self-similar solutions `u(x, t) = x^(-β) f(t/x)`, `β = 2/(p-1)`, on the
//! region `x > t`. The profile solves the singular ODE
//!
//! ```text
//! (1 - y²) f'' - 2(β+1) y f' - β(β+1) f + |f|^(p-1) f = 0,   y ∈ (-1, 1)
//! ```
//!
//! whose weighted energy `Ẽ(y) = ½(1-y²)^(2β+2) f'² + (1-y²)^(2β+1) P(f)`
//! with `P(z) = C_p - β(β+1)z²/2 + |z|^(p+1)/(p+1)` satisfies
//! `Ẽ'(y) = -2(2β+1) y (1-y²)^(2β) P(f)`.

mod integrator;

use alloc::vec::Vec;

use crate::math;
use crate::wave::FieldState;
use integrator::{hermite, sweep, Node};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SelfSimilarError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams {
        field: &'static str,
        reason: &'static str,
    },
    #[error("step size underflow at y = {y} before reaching the endpoint")]
    ToleranceNotMet { y: f64 },
    #[error("y = {y} lies outside the integrated range")]
    OutOfRange { y: f64 },
}

fn invalid(field: &'static str, reason: &'static str) -> SelfSimilarError {
    SelfSimilarError::InvalidParams { field, reason }
}

/// Smallest constant with `P(z) >= |z|^(p+1)/(p+2)` for all `z`:
/// the maximum over `z >= 0` of `β(β+1)z²/2 - z^(p+1)/((p+1)(p+2))`.
///
/// The maximizer solves `z^(p-1) = β(β+1)(p+2)`.
pub fn cp_constant(p: f64) -> f64 {
    assert!(p > 1.0, "p must exceed 1");
    let beta = 2.0 / (p - 1.0);
    let k = beta * (beta + 1.0);
    let z = math::pow(k * (p + 2.0), 1.0 / (p - 1.0));
    let value = 0.5 * k * z * z - math::pow(z, p + 1.0) / ((p + 1.0) * (p + 2.0));
    value.max(0.0)
}

/// Coefficients of the profile equation for one exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfileEquation {
    p: f64,
    beta: f64,
    cp: f64,
}

impl ProfileEquation {
    pub fn new(p: f64) -> Result<Self, SelfSimilarError> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(invalid("p", "p must exceed 1"));
        }
        Ok(Self {
            p,
            beta: 2.0 / (p - 1.0),
            cp: cp_constant(p),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn cp(&self) -> f64 {
        self.cp
    }

    fn power(&self, f: f64) -> f64 {
        if self.p == 3.0 {
            f * f * f
        } else {
            math::pow(f.abs(), self.p - 1.0) * f
        }
    }

    /// `f''` from the normal form of the equation.
    pub fn second_derivative(&self, y: f64, f: f64, fp: f64) -> f64 {
        let b = self.beta;
        (2.0 * (b + 1.0) * y * fp + b * (b + 1.0) * f - self.power(f)) / (1.0 - y * y)
    }

    /// `(1-y²)f'' - 2(β+1)yf' - β(β+1)f + |f|^(p-1)f`.
    pub fn residual(&self, y: f64, f: f64, fp: f64, fpp: f64) -> f64 {
        let b = self.beta;
        (1.0 - y * y) * fpp - 2.0 * (b + 1.0) * y * fp - b * (b + 1.0) * f + self.power(f)
    }

    /// `P(z)`.
    pub fn potential(&self, z: f64) -> f64 {
        let b = self.beta;
        self.cp - 0.5 * b * (b + 1.0) * z * z + math::pow(z.abs(), self.p + 1.0) / (self.p + 1.0)
    }

    /// `Ẽ` at one point.
    pub fn semi_energy(&self, y: f64, f: f64, fp: f64) -> f64 {
        let w = 1.0 - y * y;
        let wb = math::pow(w, 2.0 * self.beta + 1.0);
        0.5 * wb * w * fp * fp + wb * self.potential(f)
    }

    /// Closed-form `Ẽ'`.
    pub fn semi_energy_rate(&self, y: f64, f: f64) -> f64 {
        let w = 1.0 - y * y;
        -2.0 * (2.0 * self.beta + 1.0) * y * math::pow(w, 2.0 * self.beta) * self.potential(f)
    }

    /// Nonzero constant solution `(β(β+1))^(1/(p-1))`.
    pub fn constant_solution(&self) -> f64 {
        math::pow(self.beta * (self.beta + 1.0), 1.0 / (self.p - 1.0))
    }
}

/// Parameters of one profile integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeParams {
    pub p: f64,
    /// `f(0)`.
    pub a: f64,
    /// `f'(0)`.
    pub b: f64,
    /// The profile is integrated on `[-(1-delta), 1-delta]`.
    pub delta: f64,
    /// Local error tolerance (mixed absolute/relative).
    pub tol: f64,
    /// Step cap factor: steps never exceed `kappa (1 - |y|)`.
    pub kappa: f64,
}

impl OdeParams {
    pub const DEFAULT_DELTA: f64 = 1e-4;
    pub const DEFAULT_TOL: f64 = 1e-10;
    pub const DEFAULT_KAPPA: f64 = 0.1;

    pub fn new(p: f64, a: f64, b: f64) -> Self {
        Self {
            p,
            a,
            b,
            delta: Self::DEFAULT_DELTA,
            tol: Self::DEFAULT_TOL,
            kappa: Self::DEFAULT_KAPPA,
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn beta(&self) -> f64 {
        2.0 / (self.p - 1.0)
    }

    pub fn validate(&self) -> Result<ProfileEquation, SelfSimilarError> {
        let eq = ProfileEquation::new(self.p)?;
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(invalid("a, b", "initial values must be finite"));
        }
        if !(self.delta > 0.0 && self.delta <= 0.5) {
            return Err(invalid("delta", "delta in (0, 0.5]"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(invalid("tol", "tol in (0, 1)"));
        }
        if !(self.kappa > 0.0 && self.kappa <= 0.5) {
            return Err(invalid("kappa", "kappa in (0, 0.5]"));
        }
        Ok(eq)
    }
}

/// Profile sampled at the integrator's accepted nodes on
/// `[-(1-delta), 1-delta]`, with dense output in between.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeSolution {
    pub params: OdeParams,
    pub y: Vec<f64>,
    pub f: Vec<f64>,
    pub fprime: Vec<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    eq: ProfileEquation,
    fpp: Vec<f64>,
}

impl OdeSolution {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn equation(&self) -> &ProfileEquation {
        &self.eq
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.y[0], self.y[self.y.len() - 1])
    }

    fn node(&self, k: usize) -> Node {
        Node {
            y: self.y[k],
            f: self.f[k],
            fp: self.fprime[k],
            fpp: self.fpp[k],
        }
    }

    /// `(f(y), f'(y))` by quintic Hermite interpolation between nodes.
    pub fn eval(&self, y: f64) -> Result<(f64, f64), SelfSimilarError> {
        let (lo, hi) = self.y_range();
        if !(y >= lo && y <= hi) {
            return Err(SelfSimilarError::OutOfRange { y });
        }
        let k = self.y.partition_point(|&v| v <= y);
        if k == 0 {
            return Ok((self.f[0], self.fprime[0]));
        }
        let k = k.min(self.y.len() - 1);
        if self.y[k - 1] == y {
            return Ok((self.f[k - 1], self.fprime[k - 1]));
        }
        Ok(hermite(&self.node(k - 1), &self.node(k), y))
    }

    /// `f` and `f'` at the requested points.
    pub fn sample(&self, ys: &[f64]) -> Result<(Vec<f64>, Vec<f64>), SelfSimilarError> {
        let mut f = Vec::with_capacity(ys.len());
        let mut fp = Vec::with_capacity(ys.len());
        for &y in ys {
            let (a, b) = self.eval(y)?;
            f.push(a);
            fp.push(b);
        }
        Ok((f, fp))
    }

    /// Largest ODE residual at cell midpoints, using the second derivative of
    /// the dense output, relative to `1 + max |term|`.
    pub fn collocation_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for k in 1..self.len() {
            let (n0, n1) = (self.node(k - 1), self.node(k));
            let ym = 0.5 * (n0.y + n1.y);
            let h = n1.y - n0.y;
            // f'' of the quintic interpolant by a centered difference of its derivative
            let e = 1e-3 * h;
            let (f, fp) = hermite(&n0, &n1, ym);
            let fpp = (hermite(&n0, &n1, ym + e).1 - hermite(&n0, &n1, ym - e).1) / (2.0 * e);
            let b = self.eq.beta;
            let scale = 1.0
                + ((1.0 - ym * ym) * fpp)
                    .abs()
                    .max((2.0 * (b + 1.0) * ym * fp).abs())
                    .max((b * (b + 1.0) * f).abs())
                    .max(self.eq.power(f).abs());
            worst = worst.max(self.eq.residual(ym, f, fp, fpp).abs() / scale);
        }
        worst
    }
}

/// Integrates the profile from `y = 0` outwards to `±(1 - delta)` with an
/// adaptive Dormand–Prince 5(4) pair.
pub fn integrate_profile(params: &OdeParams) -> Result<OdeSolution, SelfSimilarError> {
    let eq = params.validate()?;
    let end = 1.0 - params.delta;
    let right = sweep(&eq, params.a, params.b, end, params.tol, params.kappa)?;
    let left = sweep(&eq, params.a, params.b, -end, params.tol, params.kappa)?;
    let n = left.nodes.len() + right.nodes.len() - 1;
    let mut y = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    let mut fprime = Vec::with_capacity(n);
    let mut fpp = Vec::with_capacity(n);
    for node in left.nodes.iter().rev().chain(right.nodes.iter().skip(1)) {
        if !node.f.is_finite() || !node.fp.is_finite() {
            return Err(SelfSimilarError::ToleranceNotMet { y: node.y });
        }
        y.push(node.y);
        f.push(node.f);
        fprime.push(node.fp);
        fpp.push(node.fpp);
    }
    Ok(OdeSolution {
        params: *params,
        y,
        f,
        fprime,
        accepted_steps: left.accepted + right.accepted,
        rejected_steps: left.rejected + right.rejected,
        eq,
        fpp,
    })
}

/// Semi-energy along a profile.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiEnergyReport {
    pub cp: f64,
    pub y: Vec<f64>,
    pub etilde: Vec<f64>,
    /// Closed-form `Ẽ'` at the samples.
    pub rate: Vec<f64>,
    /// Five-point centered difference of `Ẽ` through the dense output.
    pub rate_fd: Vec<f64>,
    /// `max |rate_fd - rate| / max |rate|` over samples with `|y| <= 1 - 10 delta`.
    pub rate_error: f64,
    /// `Ẽ(1 - delta)`.
    pub a_estimate: f64,
    /// `(1-y)^(1+β) f'(y)`.
    pub asymptotic_trace: Vec<f64>,
}

impl SemiEnergyReport {
    /// Largest increase `Ẽ(y_{i+1}) - Ẽ(y_i)` over consecutive samples with `y_i >= 0`.
    pub fn max_increase(&self) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for k in 1..self.y.len() {
            if self.y[k - 1] >= 0.0 {
                worst = worst.max(self.etilde[k] - self.etilde[k - 1]);
            }
        }
        worst
    }

    pub fn at_zero(&self) -> f64 {
        let k = self.y.partition_point(|&v| v < 0.0);
        self.etilde[k]
    }
}

/// Step of the five-point stencil relative to the distance from the endpoint.
const FD_FRACTION: f64 = 0.005;

pub fn semi_energy(sol: &OdeSolution) -> SemiEnergyReport {
    let eq = &sol.eq;
    let beta = eq.beta;
    let delta = sol.params.delta;
    let edge = 1.0 - sol.params.delta;
    let etilde_at = |y: f64| {
        let (f, fp) = sol.eval(y).expect("inside range");
        eq.semi_energy(y, f, fp)
    };
    let mut etilde = Vec::with_capacity(sol.len());
    let mut rate = Vec::with_capacity(sol.len());
    let mut rate_fd = Vec::with_capacity(sol.len());
    let mut trace = Vec::with_capacity(sol.len());
    let (mut err, mut scale) = (0.0_f64, 0.0_f64);
    for k in 0..sol.len() {
        let (y, f, fp) = (sol.y[k], sol.f[k], sol.fprime[k]);
        etilde.push(eq.semi_energy(y, f, fp));
        let r = eq.semi_energy_rate(y, f);
        rate.push(r);
        trace.push(math::pow(1.0 - y, 1.0 + beta) * fp);
        let h = (1e-3_f64).min(FD_FRACTION * (edge - y.abs()));
        let fd = if h > 0.0 {
            (etilde_at(y - 2.0 * h) - 8.0 * etilde_at(y - h) + 8.0 * etilde_at(y + h) - etilde_at(y + 2.0 * h))
                / (12.0 * h)
        } else {
            f64::NAN
        };
        rate_fd.push(fd);
        if y.abs() <= 1.0 - 10.0 * delta {
            err = err.max((fd - r).abs());
            scale = scale.max(r.abs());
        }
    }
    let rate_error = if scale > 0.0 { err / scale } else { err };
    SemiEnergyReport {
        cp: eq.cp,
        a_estimate: *etilde.last().expect("nonempty solution"),
        y: sol.y.clone(),
        etilde,
        rate,
        rate_fd,
        rate_error,
        asymptotic_trace: trace,
    }
}

/// Largest ratio of `|f'|` and `|f|` to the a-priori envelopes
/// `√(2Ẽ(0)) (1-y²)^(-β-1)` and `((p+2)Ẽ(0))^(1/(p+1)) (1-y²)^(-(2β+1)/(p+1))`.
/// Both ratios are at most 1 for an exact solution.
pub fn apriori_ratios(sol: &OdeSolution) -> (f64, f64) {
    let eq = &sol.eq;
    let (beta, p) = (eq.beta, eq.p);
    let e0 = eq.semi_energy(0.0, sol.params.a, sol.params.b);
    let kp = math::sqrt(2.0 * e0);
    let kf = math::pow((p + 2.0) * e0, 1.0 / (p + 1.0));
    let (mut rp, mut rf) = (0.0_f64, 0.0_f64);
    for k in 0..sol.len() {
        let w = 1.0 - sol.y[k] * sol.y[k];
        let envelope_p = kp * math::pow(w, -beta - 1.0);
        let envelope_f = kf * math::pow(w, -(2.0 * beta + 1.0) / (p + 1.0));
        rp = rp.max(sol.fprime[k].abs() / envelope_p);
        rf = rf.max(sol.f[k].abs() / envelope_f);
    }
    (rp, rf)
}

/// Self-similar field and its first derivatives at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedField {
    pub t: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub u_t: Vec<f64>,
    pub u_x: Vec<f64>,
}

impl LiftedField {
    pub fn state(&self) -> FieldState {
        FieldState {
            t: self.t,
            u: self.u.clone(),
            v: self.u_t.clone(),
        }
    }
}

/// `u = x^(-β) f(t/x)`, `u_t = x^(-β-1) f'(t/x)`,
/// `u_x = -β x^(-β-1) f(t/x) - t x^(-β-2) f'(t/x)` at the given positions.
pub fn lift_field(sol: &OdeSolution, t: f64, xs: &[f64]) -> Result<LiftedField, SelfSimilarError> {
    if !(t >= 0.0) {
        return Err(invalid("t", "t must be nonnegative"));
    }
    let beta = sol.eq.beta;
    let mut out = LiftedField {
        t,
        x: xs.to_vec(),
        u: Vec::with_capacity(xs.len()),
        u_t: Vec::with_capacity(xs.len()),
        u_x: Vec::with_capacity(xs.len()),
    };
    for &x in xs {
        if !(x > t) {
            return Err(SelfSimilarError::OutOfRange { y: if x > 0.0 { t / x } else { f64::INFINITY } });
        }
        let (f, fp) = sol.eval(t / x)?;
        let xb = math::pow(x, -beta);
        out.u.push(xb * f);
        out.u_t.push(xb / x * fp);
        out.u_x.push(-beta * xb / x * f - t * xb / (x * x) * fp);
    }
    Ok(out)
}

/// Largest `|u_tt - u_xx + |u|^(p-1)u|` over `x ∈ [x_lo, x_hi]` at time `t`,
/// by second-order centered differences of step `h` applied to the lifted field.
pub fn lifted_pde_residual(sol: &OdeSolution, t: f64, x_lo: f64, x_hi: f64, h: f64) -> Result<f64, SelfSimilarError> {
    if !(h > 0.0) || !(x_hi > x_lo) || !(t >= h) {
        return Err(invalid("h", "need h > 0, x_hi > x_lo, t >= h"));
    }
    let n = math::round((x_hi - x_lo) / h) as usize;
    let beta = sol.eq.beta;
    let u = |x: f64, s: f64| -> Result<f64, SelfSimilarError> {
        if !(x > s) {
            return Err(SelfSimilarError::OutOfRange { y: s / x });
        }
        Ok(math::pow(x, -beta) * sol.eval(s / x)?.0)
    };
    let mut worst = 0.0_f64;
    for k in 0..=n {
        let x = x_lo + k as f64 * h;
        let c = u(x, t)?;
        let utt = (u(x, t + h)? - 2.0 * c + u(x, t - h)?) / (h * h);
        let uxx = (u(x + h, t)? - 2.0 * c + u(x - h, t)?) / (h * h);
        worst = worst.max((utt - uxx + sol.eq.power(c)).abs());
    }
    Ok(worst)
}

/// `∫_{t+R}^{t+R1} x^(-2β-2) f'(t/x)² dx` for each `t`, by composite Simpson
/// quadrature with `n` panels.
pub fn ray_energy_decay(
    sol: &OdeSolution,
    r: f64,
    r1: f64,
    times: &[f64],
) -> Result<Vec<(f64, f64)>, SelfSimilarError> {
    const PANELS: usize = 2048;
    if !(r > 0.0 && r1 > r) {
        return Err(invalid("R, R1", "need 0 < R < R1"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|&t| !(t >= 0.0)) {
        return Err(invalid("t_list", "times must be nonnegative and increasing"));
    }
    let beta = sol.eq.beta;
    let mut table = Vec::with_capacity(times.len());
    for &t in times {
        let (a, b) = (t + r, t + r1);
        let h = (b - a) / PANELS as f64;
        let g = |x: f64| -> Result<f64, SelfSimilarError> {
            let fp = sol.eval(t / x)?.1;
            Ok(math::pow(x, -2.0 * beta - 2.0) * fp * fp)
        };
        let mut sum = g(a)? + g(b)?;
        for k in 1..PANELS {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * g(a + k as f64 * h)?;
        }
        table.push((t, sum * h / 3.0));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cp_for_cubic() {
        assert!((cp_constant(3.0) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn zero_profile() {
        let sol = integrate_profile(&OdeParams::new(3.0, 0.0, 0.0)).unwrap();
        assert!(sol.f.iter().chain(&sol.fprime).all(|&v| v == 0.0));
        let (lo, hi) = sol.y_range();
        assert!((hi - (1.0 - 1e-4)).abs() < 1e-15 && (lo + hi).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(integrate_profile(&OdeParams::new(1.0, 1.0, 0.0)).is_err());
        assert!(integrate_profile(&OdeParams::new(3.0, 1.0, 0.0).with_delta(0.7)).is_err());
        assert!(integrate_profile(&OdeParams::new(3.0, f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn eval_hits_nodes_and_rejects_outside() {
        let sol = integrate_profile(&OdeParams::new(3.0, 1.0, 0.0)).unwrap();
        let k = sol.len() / 3;
        assert_eq!(sol.eval(sol.y[k]).unwrap(), (sol.f[k], sol.fprime[k]));
        assert!(matches!(sol.eval(0.99995), Err(SelfSimilarError::OutOfRange { .. })));
    }
}

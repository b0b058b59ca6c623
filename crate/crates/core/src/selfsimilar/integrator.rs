//! Dormand–Prince 5(4) with quintic Hermite dense output.

use alloc::vec::Vec;

use super::{ProfileEquation, SelfSimilarError};
use crate::math;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const MAX_STEPS: usize = 1_000_000;

/// One accepted node of the solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Node {
    pub y: f64,
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
}

pub(crate) struct Sweep {
    pub nodes: Vec<Node>,
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates from `y = 0` to `y = end` (either sign). Steps are capped by
/// `kappa (1 - |y|)` so that no step reaches the singular endpoint.
pub(crate) fn sweep(
    eq: &ProfileEquation,
    a: f64,
    b: f64,
    end: f64,
    tol: f64,
    kappa: f64,
) -> Result<Sweep, SelfSimilarError> {
    let dir = if end >= 0.0 { 1.0 } else { -1.0 };
    let rhs = |y: f64, s: [f64; 2]| [s[1], eq.second_derivative(y, s[0], s[1])];
    let mut y = 0.0_f64;
    let mut s = [a, b];
    let mut k1 = rhs(y, s);
    let mut nodes = alloc::vec![Node {
        y,
        f: a,
        fp: b,
        fpp: k1[1]
    }];
    let mut h = 0.01_f64.min(kappa);
    let (mut accepted, mut rejected) = (0, 0);
    while dir * (end - y) > 0.0 {
        if accepted + rejected >= MAX_STEPS {
            return Err(SelfSimilarError::ToleranceNotMet { y });
        }
        let cap = kappa * (1.0 - y.abs());
        let remaining = (end - y).abs();
        let mut step = h.min(cap);
        let last = step >= remaining;
        if last {
            step = remaining;
        }
        if step <= 1e-14 * (1.0 + y.abs()) {
            return Err(SelfSimilarError::ToleranceNotMet { y });
        }
        let hs = dir * step;
        let mut k = [[0.0; 2]; 7];
        k[0] = k1;
        for stage in 1..7 {
            let mut tmp = s;
            for (c, kj) in A[stage].iter().zip(&k[..stage]) {
                tmp[0] += hs * c * kj[0];
                tmp[1] += hs * c * kj[1];
            }
            k[stage] = rhs(y + hs * C[stage], tmp);
        }
        // the last stage point is the fifth-order solution (first same as last)
        let mut new = s;
        for (c, kj) in A[6].iter().zip(&k[..6]) {
            new[0] += hs * c * kj[0];
            new[1] += hs * c * kj[1];
        }
        let mut err = 0.0;
        for c in 0..2 {
            let e = hs * (0..7).map(|j| E[j] * k[j][c]).sum::<f64>();
            let sc = tol * (1.0 + s[c].abs().max(new[c].abs()));
            err += (e / sc) * (e / sc);
        }
        let err = math::sqrt(0.5 * err);
        if !err.is_finite() || !new[0].is_finite() || !new[1].is_finite() {
            rejected += 1;
            h = 0.2 * step;
            continue;
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * math::pow(err, -0.2)).clamp(0.2, 5.0)
        };
        if err <= 1.0 {
            accepted += 1;
            y = if last { end } else { y + hs };
            s = new;
            k1 = k[6];
            nodes.push(Node {
                y,
                f: s[0],
                fp: s[1],
                fpp: k1[1],
            });
            h = step * factor;
        } else {
            rejected += 1;
            h = step * factor.min(1.0);
        }
    }
    Ok(Sweep {
        nodes,
        accepted,
        rejected,
    })
}

/// Quintic Hermite interpolation of `f` and its derivative on `[n0, n1]`.
pub(crate) fn hermite(n0: &Node, n1: &Node, y: f64) -> (f64, f64) {
    let h = n1.y - n0.y;
    let s = (y - n0.y) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    let h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    let h3 = 0.5 * s3 - s4 + 0.5 * s5;
    let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    let h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    let d0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    let d1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    let d2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
    let d3 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;
    let d4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    let d5 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
    let hh = h * h;
    let f = h0 * n0.f + h1 * h * n0.fp + h2 * hh * n0.fpp + h3 * hh * n1.fpp + h4 * h * n1.fp + h5 * n1.f;
    let fp = (d0 * n0.f + d1 * h * n0.fp + d2 * hh * n0.fpp + d3 * hh * n1.fpp + d4 * h * n1.fp + d5 * n1.f) / h;
    (f, fp)
}

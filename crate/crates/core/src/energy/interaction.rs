use alloc::vec::Vec;

use super::EnergyDensities;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QMethod {
    PrefixSum,
    BruteForce,
}

impl QMethod {
    pub fn name(self) -> &'static str {
        match self {
            QMethod::PrefixSum => "prefix_sum",
            QMethod::BruteForce => "brute_force",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteractionReport {
    pub t: f64,
    pub q_value: f64,
    pub method: QMethod,
}

/// `Σ_{i,j} |x_i - x_j| w_i w_j` by the O(N²) double loop.
///
/// Each row is summed separately before the rows are combined, which keeps
/// the rounding error near `2N ε` relative for nonnegative weights.
pub fn pairwise_distance_brute_force(xs: &[f64], ws: &[f64]) -> f64 {
    assert_eq!(xs.len(), ws.len(), "positions and weights must have equal length");
    let mut total = 0.0;
    for (i, (&xi, &wi)) in xs.iter().zip(ws).enumerate() {
        let mut row = 0.0;
        for (&xj, &wj) in xs[..i].iter().zip(&ws[..i]) {
            row += (xi - xj).abs() * wj;
        }
        total += wi * row;
    }
    2.0 * total
}

/// `Σ_{i,j} |x_i - x_j| w_i w_j` in O(N) for sorted positions (O(N log N)
/// otherwise).
///
/// In sorted order, `D_j = Σ_{i<j} (x_j - x_i) w_i` obeys
/// `D_{j+1} = D_j + (x_{j+1} - x_j) Σ_{i<=j} w_i`, a sum of nonnegative terms
/// when the weights are nonnegative, so no cancellation occurs.
pub fn pairwise_distance_prefix_sum(xs: &[f64], ws: &[f64]) -> f64 {
    assert_eq!(xs.len(), ws.len(), "positions and weights must have equal length");
    if xs.windows(2).all(|p| p[0] <= p[1]) {
        return sorted_prefix_sum(xs.iter().copied().zip(ws.iter().copied()));
    }
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    sorted_prefix_sum(order.into_iter().map(|k| (xs[k], ws[k])))
}

fn sorted_prefix_sum(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let mut prefix_w = 0.0;
    let mut d = 0.0;
    let mut last_x = None;
    let mut total = 0.0;
    for (x, w) in points {
        if let Some(x0) = last_x {
            d += (x - x0) * prefix_w;
        }
        total += w * d;
        prefix_w += w;
        last_x = Some(x);
    }
    2.0 * total
}

/// `Q(t) = ∫∫ |x1 - x2| e_+(x1) e_+(x2)` with weights `w_j = e_+(x_j) dx`.
pub fn interaction_q(d: &EnergyDensities, method: QMethod) -> InteractionReport {
    let xs: Vec<f64> = (0..d.len()).map(|i| d.x(i)).collect();
    let ws: Vec<f64> = d.e_plus.iter().map(|e| e * d.dx).collect();
    let q_value = match method {
        QMethod::PrefixSum => pairwise_distance_prefix_sum(&xs, &ws),
        QMethod::BruteForce => pairwise_distance_brute_force(&xs, &ws),
    };
    InteractionReport { t: d.t, q_value, method }
}

use alloc::vec::Vec;

use super::{densities::densities_from, integrate_interval, slice_of, DiagnosticError};
use crate::math;
use crate::wave::{FieldState, GridSpec, Nonlinearity, Observer, Slice, Trajectory};

/// Which directional energy a flux identity is written for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    Plus,
    Minus,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::Plus => "plus",
            Which::Minus => "minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// Constant `t`.
    Horizontal,
    /// Constant `x`.
    Vertical,
    /// Constant `x - t`.
    RightCharacteristic,
    /// Constant `x + t`.
    LeftCharacteristic,
}

impl EdgeKind {
    /// `dx/dt` along the edge (zero for vertical edges, unused for horizontal ones).
    fn slope(self) -> f64 {
        match self {
            EdgeKind::Horizontal | EdgeKind::Vertical => 0.0,
            EdgeKind::RightCharacteristic => 1.0,
            EdgeKind::LeftCharacteristic => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Horizontal => "horizontal",
            EdgeKind::Vertical => "vertical",
            EdgeKind::RightCharacteristic => "right_characteristic",
            EdgeKind::LeftCharacteristic => "left_characteristic",
        }
    }
}

/// Closed, simple, counterclockwise polygon in the `(x, t)` plane whose
/// edges are parallel to an axis or to a light ray.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonPath {
    vertices: Vec<(f64, f64)>,
    kinds: Vec<EdgeKind>,
    hexagon: bool,
}

fn classify(a: (f64, f64), b: (f64, f64)) -> Option<EdgeKind> {
    let dx = b.0 - a.0;
    let dt = b.1 - a.1;
    let eps = 1e-9 * (1.0 + a.0.abs().max(a.1.abs()).max(b.0.abs()).max(b.1.abs()));
    if dx.abs() <= eps && dt.abs() <= eps {
        None
    } else if dt.abs() <= eps {
        Some(EdgeKind::Horizontal)
    } else if dx.abs() <= eps {
        Some(EdgeKind::Vertical)
    } else if (dx - dt).abs() <= eps {
        Some(EdgeKind::RightCharacteristic)
    } else if (dx + dt).abs() <= eps {
        Some(EdgeKind::LeftCharacteristic)
    } else {
        None
    }
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn segments_touch(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

impl PolygonPath {
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Self, DiagnosticError> {
        let n = vertices.len();
        if n < 3 {
            return Err(DiagnosticError::InvalidPath("a closed path needs at least 3 vertices"));
        }
        if vertices.iter().any(|v| !v.0.is_finite() || !v.1.is_finite()) {
            return Err(DiagnosticError::InvalidPath("vertices must be finite"));
        }
        let mut kinds = Vec::with_capacity(n);
        for k in 0..n {
            let kind = classify(vertices[k], vertices[(k + 1) % n]).ok_or(DiagnosticError::InvalidPath(
                "every edge must be parallel to an axis or a light ray",
            ))?;
            kinds.push(kind);
        }
        let area2: f64 = (0..n)
            .map(|k| {
                let a = vertices[k];
                let b = vertices[(k + 1) % n];
                a.0 * b.1 - b.0 * a.1
            })
            .sum();
        if !(area2 > 0.0) {
            return Err(DiagnosticError::InvalidPath("path must be counterclockwise"));
        }
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                if adjacent {
                    continue;
                }
                if segments_touch(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]) {
                    return Err(DiagnosticError::InvalidPath("path must be simple"));
                }
            }
        }
        Ok(Self {
            vertices,
            kinds,
            hexagon: false,
        })
    }

    /// `[x1, x2] × [t1, t2]`.
    pub fn rectangle(x1: f64, x2: f64, t1: f64, t2: f64) -> Result<Self, DiagnosticError> {
        Self::new(alloc::vec![(x1, t1), (x2, t1), (x2, t2), (x1, t2)])
    }

    /// Parallelogram with horizontal sides `[x1, x2]` at `t1` and its
    /// translate along a light ray at `t2`; `rightward` picks `x - t` constant
    /// sides, otherwise `x + t` constant.
    pub fn parallelogram(x1: f64, x2: f64, t1: f64, t2: f64, rightward: bool) -> Result<Self, DiagnosticError> {
        let shift = if rightward { t2 - t1 } else { t1 - t2 };
        Self::new(alloc::vec![
            (x1, t1),
            (x2, t1),
            (x2 + shift, t2),
            (x1 + shift, t2)
        ])
    }

    /// Hexagon with horizontal sides `[a, b]` at `t0` and `t0 + 2h` whose
    /// lateral sides bulge outwards along light rays. Its right-going flux
    /// identity reads `E_+(t0+2h; a,b) = E_+(t0; a,b) + Q1 - Q2 - Q3 + Q4`.
    pub fn hexagon(a: f64, b: f64, t0: f64, h: f64) -> Result<Self, DiagnosticError> {
        let mut path = Self::new(alloc::vec![
            (a, t0),
            (b, t0),
            (b + h, t0 + h),
            (b, t0 + 2.0 * h),
            (a, t0 + 2.0 * h),
            (a - h, t0 + h),
        ])?;
        path.hexagon = true;
        Ok(path)
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64), EdgeKind)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n], self.kinds[k]))
    }

    pub fn is_hexagon(&self) -> bool {
        self.hexagon
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeReport {
    pub from: (f64, f64),
    pub to: (f64, f64),
    pub kind: EdgeKind,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FluxReport {
    pub which: Which,
    pub edges: Vec<EdgeReport>,
    /// Sum of the edge integrals along the traversal; zero for an exact solution.
    pub closure_residual: f64,
    /// Sum of the absolute edge integrals, a scale for the residual.
    pub magnitude: f64,
    /// `[Q1, Q2, Q3, Q4]` for [`PolygonPath::hexagon`] paths and right-going energy.
    pub decomposition: Option<[f64; 4]>,
}

/// `(e, g)` at local node `i`: the `dx` and `dt` integrands of the flux identity.
fn node_fluxes(slice: &Slice<'_>, i: usize, nl: &Nonlinearity, which: Which) -> (f64, f64) {
    let u = slice.u;
    let n = u.len();
    let inv2 = 0.5 / slice.dx;
    let ux = if n < 3 {
        0.0
    } else if i == 0 {
        (-3.0 * u[0] + 4.0 * u[1] - u[2]) * inv2
    } else if i == n - 1 {
        (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) * inv2
    } else {
        (u[i + 1] - u[i - 1]) * inv2
    };
    let half_pot = 0.5 * nl.potential(u[i]);
    match which {
        Which::Plus => {
            let a = ux - slice.v[i];
            let q = 0.25 * a * a;
            (q + half_pot, -q + half_pot)
        }
        Which::Minus => {
            let b = ux + slice.v[i];
            let q = 0.25 * b * b;
            (q + half_pot, q - half_pot)
        }
    }
}

/// `(e, g)` at position `x`, linearly interpolated between nodes.
fn fluxes_at(slice: &Slice<'_>, x: f64, nl: &Nonlinearity, which: Which) -> Option<(f64, f64)> {
    let n = slice.u.len();
    let s = (x - slice.x0) / slice.dx;
    let tol = 1e-9;
    if n == 0 || s < -tol || s > (n - 1) as f64 + tol {
        return None;
    }
    let near = math::round(s);
    if (s - near).abs() <= tol {
        return Some(node_fluxes(slice, near as usize, nl, which));
    }
    let i = math::floor(s) as usize;
    let w = s - i as f64;
    let (e0, g0) = node_fluxes(slice, i, nl, which);
    let (e1, g1) = node_fluxes(slice, i + 1, nl, which);
    Some((e0 + w * (e1 - e0), g0 + w * (g1 - g0)))
}

#[derive(Clone, Debug)]
struct EdgeAccumulator {
    from: (f64, f64),
    to: (f64, f64),
    kind: EdgeKind,
    step_from: usize,
    step_to: usize,
    value: f64,
    samples: usize,
}

impl EdgeAccumulator {
    fn expected_samples(&self) -> usize {
        match self.kind {
            EdgeKind::Horizontal => 1,
            _ => self.step_from.abs_diff(self.step_to) + 1,
        }
    }
}

/// Streaming evaluation of `∮ e dx + g dt` around a [`PolygonPath`]. Feed it
/// every solver step covering the path (e.g. as an observer with
/// [`Schedule::EveryStep`](crate::Schedule::EveryStep)), then call
/// [`finish`](Self::finish).
///
/// Edge integrals use the composite trapezoid rule on the space-time
/// lattice. At `cfl = 1` characteristic edges visit lattice diagonals; for
/// smaller `cfl` they interpolate linearly in space at each time level.
#[derive(Clone, Debug)]
pub struct FluxLoop {
    grid: GridSpec,
    nl: Nonlinearity,
    which: Which,
    hexagon: bool,
    edges: Vec<EdgeAccumulator>,
    error: Option<DiagnosticError>,
}

impl FluxLoop {
    pub fn new(grid: GridSpec, nl: Nonlinearity, path: &PolygonPath, which: Which) -> Result<Self, DiagnosticError> {
        let dt = grid.dt();
        let snap_t = |t: f64| -> Result<usize, DiagnosticError> {
            if t < -1e-9 * dt {
                return Err(DiagnosticError::PathOutsideDomain);
            }
            let s = t / dt;
            let n = math::round(s);
            if (s - n).abs() > 1e-6 {
                return Err(DiagnosticError::InvalidPath("vertex times must be solver step times"));
            }
            Ok(n as usize)
        };
        let mut edges = Vec::new();
        for (from, to, kind) in path.edges() {
            for v in [from, to] {
                if v.0 < grid.x_min() || v.0 > grid.x_max() {
                    return Err(DiagnosticError::PathOutsideDomain);
                }
                if grid.node_index(v.0).is_none() {
                    return Err(DiagnosticError::InvalidPath("vertices must lie on grid nodes"));
                }
            }
            edges.push(EdgeAccumulator {
                from,
                to,
                kind,
                step_from: snap_t(from.1)?,
                step_to: snap_t(to.1)?,
                value: 0.0,
                samples: 0,
            });
        }
        Ok(Self {
            grid,
            nl,
            which,
            hexagon: path.is_hexagon(),
            edges,
            error: None,
        })
    }

    /// Last solver step the loop needs.
    pub fn last_step(&self) -> usize {
        self.edges.iter().map(|e| e.step_from.max(e.step_to)).max().unwrap_or(0)
    }

    pub fn feed(&mut self, slice: &Slice<'_>) {
        if self.error.is_some() {
            return;
        }
        let step = slice.step;
        let dt = self.grid.dt();
        let t = step as f64 * dt;
        for edge in &mut self.edges {
            let (lo, hi) = (edge.step_from.min(edge.step_to), edge.step_from.max(edge.step_to));
            if step < lo || step > hi {
                continue;
            }
            if edge.kind == EdgeKind::Horizontal {
                let (xa, xb) = (edge.from.0, edge.to.0);
                let (a, b) = (xa.min(xb), xa.max(xb));
                let start = (a - slice.x0) / slice.dx;
                let end = (b - slice.x0) / slice.dx;
                if start < -1e-9 || end > (slice.u.len() - 1) as f64 + 1e-9 {
                    self.error = Some(DiagnosticError::PathOutsideDomain);
                    return;
                }
                let i0 = math::round(start) as usize;
                let i1 = math::round(end) as usize;
                let values: Vec<f64> = (i0..=i1).map(|i| node_fluxes(slice, i, &self.nl, self.which).0).collect();
                let integral = math::trapezoid(&values, slice.dx);
                edge.value = if xb >= xa { integral } else { -integral };
                edge.samples += 1;
                continue;
            }
            let slope = edge.kind.slope();
            let x = edge.from.0 + slope * (t - edge.from.1);
            let Some((e, g)) = fluxes_at(slice, x, &self.nl, self.which) else {
                self.error = Some(DiagnosticError::PathOutsideDomain);
                return;
            };
            let weight = if step == lo || step == hi { 0.5 * dt } else { dt };
            let direction = if edge.step_to > edge.step_from { 1.0 } else { -1.0 };
            edge.value += direction * weight * (slope * e + g);
            edge.samples += 1;
        }
    }

    pub fn finish(self) -> Result<FluxReport, DiagnosticError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        for edge in &self.edges {
            if edge.samples != edge.expected_samples() {
                return Err(DiagnosticError::MissingSlice {
                    step: edge.step_from.min(edge.step_to),
                });
            }
        }
        let edges: Vec<EdgeReport> = self
            .edges
            .iter()
            .map(|e| EdgeReport {
                from: e.from,
                to: e.to,
                kind: e.kind,
                value: e.value,
            })
            .collect();
        let closure_residual = edges.iter().map(|e| e.value).sum();
        let magnitude = edges.iter().map(|e| e.value.abs()).sum();
        let decomposition = (self.hexagon && self.which == Which::Plus)
            .then(|| [edges[1].value, -edges[2].value, -edges[4].value, edges[5].value]);
        Ok(FluxReport {
            which: self.which,
            edges,
            closure_residual,
            magnitude,
            decomposition,
        })
    }
}

impl Observer for FluxLoop {
    fn observe(&mut self, state: &FieldState) {
        let grid = self.grid;
        self.feed(&slice_of(&grid, state));
    }
}

/// Closed-curve flux integral over a recorded trajectory (recorded at every step).
pub fn flux_loop(
    trajectory: &Trajectory,
    nl: &Nonlinearity,
    path: &PolygonPath,
    which: Which,
) -> Result<FluxReport, DiagnosticError> {
    let mut acc = FluxLoop::new(*trajectory.grid(), *nl, path, which)?;
    for slice in trajectory.slices() {
        acc.feed(&slice);
    }
    acc.finish()
}

/// Both sides of the trapezoid law across the ray `x = t - eta`:
///
/// ```text
/// E(t2; -inf, t2-eta) - E(t1; -inf, t1-eta) = E(t1; t1-eta, inf) - E(t2; t2-eta, inf) = ∫ flux dt
/// ```
///
/// with flux `s|u|^(p+1)/(p+1)` for the right-going energy and
/// `(u_x+u_t)²/2` for the left-going one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapezoidReport {
    pub which: Which,
    pub eta: f64,
    pub t1: f64,
    pub t2: f64,
    /// `E(t2; -inf, t2-eta) - E(t1; -inf, t1-eta)`.
    pub lhs_left: f64,
    /// `E(t1; t1-eta, inf) - E(t2; t2-eta, inf)`.
    pub lhs_right: f64,
    /// Characteristic flux integral.
    pub rhs: f64,
    pub residual: f64,
    pub residual_right: f64,
    /// `E(t; -inf, t-eta)` at `t1` and `t2`.
    pub left_energies: (f64, f64),
    /// `E(t; t-eta, inf)` at `t1` and `t2`.
    pub right_energies: (f64, f64),
}

/// Streaming evaluation of [`TrapezoidReport`].
#[derive(Clone, Debug)]
pub struct TrapezoidMonitor {
    grid: GridSpec,
    nl: Nonlinearity,
    which: Which,
    eta: f64,
    step1: usize,
    step2: usize,
    split1: Option<(f64, f64)>,
    split2: Option<(f64, f64)>,
    ray: f64,
    ray_samples: usize,
    error: Option<DiagnosticError>,
}

impl TrapezoidMonitor {
    pub fn new(
        grid: GridSpec,
        nl: Nonlinearity,
        eta: f64,
        t1: f64,
        t2: f64,
        which: Which,
    ) -> Result<Self, DiagnosticError> {
        if !(t1 < t2) || t1 < 0.0 {
            return Err(DiagnosticError::InvalidArgument {
                field: "t1, t2",
                reason: "need 0 <= t1 < t2",
            });
        }
        let step1 = grid.steps_to(t1);
        let step2 = grid.steps_to(t2);
        if step2 <= step1 {
            return Err(DiagnosticError::InvalidArgument {
                field: "t1, t2",
                reason: "t1 and t2 fall on the same solver step",
            });
        }
        let dt = grid.dt();
        for t in [step1 as f64 * dt, step2 as f64 * dt] {
            let x = t - eta;
            if x < grid.x_min() || x > grid.x_max() {
                return Err(DiagnosticError::RayOutsideDomain);
            }
        }
        Ok(Self {
            grid,
            nl,
            which,
            eta,
            step1,
            step2,
            split1: None,
            split2: None,
            ray: 0.0,
            ray_samples: 0,
            error: None,
        })
    }

    pub fn last_step(&self) -> usize {
        self.step2
    }

    pub fn feed(&mut self, slice: &Slice<'_>) {
        if self.error.is_some() || slice.step < self.step1 || slice.step > self.step2 {
            return;
        }
        let dt = self.grid.dt();
        let t = slice.step as f64 * dt;
        let x_ray = t - self.eta;
        let Some((e, g)) = fluxes_at(slice, x_ray, &self.nl, self.which) else {
            self.error = Some(DiagnosticError::RayOutsideDomain);
            return;
        };
        let weight = if slice.step == self.step1 || slice.step == self.step2 {
            0.5 * dt
        } else {
            dt
        };
        self.ray += weight * (e + g);
        self.ray_samples += 1;
        if slice.step == self.step1 || slice.step == self.step2 {
            let d = densities_from(slice.t, slice.x0, slice.dx, slice.u, slice.v, &self.nl);
            let values = match self.which {
                Which::Plus => &d.e_plus,
                Which::Minus => &d.e_minus,
            };
            let left = integrate_interval(values, d.x0, d.dx, f64::NEG_INFINITY, x_ray);
            let right = integrate_interval(values, d.x0, d.dx, x_ray, f64::INFINITY);
            if slice.step == self.step1 {
                self.split1 = Some((left, right));
            } else {
                self.split2 = Some((left, right));
            }
        }
    }

    pub fn finish(self) -> Result<TrapezoidReport, DiagnosticError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let (Some((l1, r1)), Some((l2, r2))) = (self.split1, self.split2) else {
            return Err(DiagnosticError::MissingSlice { step: self.step1 });
        };
        if self.ray_samples != self.step2 - self.step1 + 1 {
            return Err(DiagnosticError::MissingSlice { step: self.step1 });
        }
        let dt = self.grid.dt();
        let lhs_left = l2 - l1;
        let lhs_right = r1 - r2;
        Ok(TrapezoidReport {
            which: self.which,
            eta: self.eta,
            t1: self.step1 as f64 * dt,
            t2: self.step2 as f64 * dt,
            lhs_left,
            lhs_right,
            rhs: self.ray,
            residual: lhs_left - self.ray,
            residual_right: lhs_right - self.ray,
            left_energies: (l1, l2),
            right_energies: (r1, r2),
        })
    }
}

impl Observer for TrapezoidMonitor {
    fn observe(&mut self, state: &FieldState) {
        let grid = self.grid;
        self.feed(&slice_of(&grid, state));
    }
}

/// Trapezoid law on a recorded trajectory (recorded at every step between `t1` and `t2`).
pub fn trapezoid_check(
    trajectory: &Trajectory,
    nl: &Nonlinearity,
    eta: f64,
    t1: f64,
    t2: f64,
    which: Which,
) -> Result<TrapezoidReport, DiagnosticError> {
    let mut monitor = TrapezoidMonitor::new(*trajectory.grid(), *nl, eta, t1, t2, which)?;
    for slice in trajectory.slices() {
        monitor.feed(&slice);
    }
    monitor.finish()
}

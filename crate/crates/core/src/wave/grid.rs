use super::{invalid, WaveError};
use crate::math;

/// Sign of the nonlinear term in `u_tt - u_xx = -s |u|^(p-1) u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    /// `s = +1`, energy-coercive.
    Defocusing,
    /// `s = -1`, allows finite-time blow-up.
    Focusing,
    /// `s = 0`, the free wave equation.
    Disabled,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Defocusing => 1.0,
            Sign::Focusing => -1.0,
            Sign::Disabled => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Defocusing => "defocusing",
            Sign::Focusing => "focusing",
            Sign::Disabled => "disabled",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "defocusing" => Some(Sign::Defocusing),
            "focusing" => Some(Sign::Focusing),
            "disabled" => Some(Sign::Disabled),
            _ => None,
        }
    }
}

/// Power nonlinearity `|u|^(p-1) u` with a sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nonlinearity {
    p: f64,
    sign: Sign,
    int_p: Option<u32>,
}

impl Nonlinearity {
    pub fn new(p: f64, sign: Sign) -> Result<Self, WaveError> {
        if !p.is_finite() || p <= 1.0 {
            return Err(invalid("p", "p must exceed 1"));
        }
        let int_p = if p == math::round(p) && p <= 64.0 {
            Some(p as u32)
        } else {
            None
        };
        Ok(Self { p, sign, int_p })
    }

    pub fn defocusing(p: f64) -> Result<Self, WaveError> {
        Self::new(p, Sign::Defocusing)
    }

    pub fn focusing(p: f64) -> Result<Self, WaveError> {
        Self::new(p, Sign::Focusing)
    }

    /// Linear mode; `p` is kept only for reporting.
    pub fn disabled(p: f64) -> Result<Self, WaveError> {
        Self::new(p, Sign::Disabled)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// `beta = 2/(p-1)`, the self-similar scaling exponent.
    pub fn beta(&self) -> f64 {
        2.0 / (self.p - 1.0)
    }

    pub(crate) fn integer_exponent(&self) -> Option<u32> {
        self.int_p
    }

    /// `|u|^(p-1) u`.
    #[inline]
    pub fn power(&self, u: f64) -> f64 {
        match self.int_p {
            Some(3) => u * u * u,
            Some(k) if k % 2 == 1 => math::powi(u, k),
            Some(k) => math::powi(u.abs(), k - 1) * u,
            None => math::pow(u.abs(), self.p - 1.0) * u,
        }
    }

    /// Right-hand side of `u_tt - u_xx = forcing(u)`.
    #[inline]
    pub fn forcing(&self, u: f64) -> f64 {
        match self.sign {
            Sign::Defocusing => -self.power(u),
            Sign::Focusing => self.power(u),
            Sign::Disabled => 0.0,
        }
    }

    /// `|u|^(p+1)`.
    #[inline]
    pub fn abs_pow_p1(&self, u: f64) -> f64 {
        match self.int_p {
            Some(k) => math::powi(u.abs(), k + 1),
            None => math::pow(u.abs(), self.p + 1.0),
        }
    }

    /// Signed potential energy density `s |u|^(p+1)/(p+1)` (zero in linear mode).
    #[inline]
    pub fn potential(&self, u: f64) -> f64 {
        match self.sign {
            Sign::Disabled => 0.0,
            s => s.factor() * self.abs_pow_p1(u) / (self.p + 1.0),
        }
    }
}

/// Uniform spatial grid `x_j = x_min + j dx`, `j = 0..=n_cells`, with `dt = cfl dx`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n_cells: usize,
    cfl: f64,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize, cfl: f64) -> Result<Self, WaveError> {
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(invalid("grid", "x_max must exceed x_min"));
        }
        if n_cells < 2 {
            return Err(invalid("n_cells", "n_cells must be at least 2"));
        }
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(invalid("cfl", "cfl in (0,1]"));
        }
        Ok(Self {
            x_min,
            x_max,
            n_cells,
            cfl,
        })
    }

    /// Grid on `[-L, L]` where `L` is `half_width` rounded up to a whole
    /// number of cells of size `dx`; the origin is a node.
    pub fn symmetric(half_width: f64, dx: f64, cfl: f64) -> Result<Self, WaveError> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(invalid("dx", "dx must be positive"));
        }
        if !(half_width > 0.0) {
            return Err(invalid("half_width", "half width must be positive"));
        }
        let half = math::ceil(half_width / dx - 1e-9) as usize;
        let len = half as f64 * dx;
        Self::new(-len, len, 2 * half, cfl)
    }

    /// Grid on `[x_min, x_min + n dx]` with `n = ceil((x_max - x_min)/dx)`.
    pub fn with_spacing(x_min: f64, x_max: f64, dx: f64, cfl: f64) -> Result<Self, WaveError> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(invalid("dx", "dx must be positive"));
        }
        let n = math::ceil((x_max - x_min) / dx - 1e-9) as usize;
        Self::new(x_min, x_min + n as f64 * dx, n, cfl)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }
    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }
    pub fn cfl(&self) -> f64 {
        self.cfl
    }
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }
    pub fn dt(&self) -> f64 {
        self.cfl * self.dx()
    }

    /// Node `j`, interpolated between the endpoints so that nodes of a
    /// grid symmetric about the origin are exact negatives of each other.
    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        let n = self.n_cells as f64;
        let j = j as f64;
        (self.x_min * (n - j) + self.x_max * j) / n
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_cells).map(move |j| self.x(j))
    }

    /// Number of steps needed to reach the first grid time `>= t`.
    pub fn steps_to(&self, t: f64) -> usize {
        if t <= 0.0 {
            return 0;
        }
        math::ceil(t / self.dt() - 1e-9) as usize
    }

    /// Index of the node at `x` when `x` is a node (within `1e-6 dx`).
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let s = (x - self.x_min) / self.dx();
        let j = math::round(s);
        if (s - j).abs() <= 1e-6 && j >= 0.0 && j <= self.n_cells as f64 {
            Some(j as usize)
        } else {
            None
        }
    }

    /// Same grid with the cell size halved.
    pub fn refined(&self) -> Self {
        Self {
            n_cells: 2 * self.n_cells,
            ..*self
        }
    }
}

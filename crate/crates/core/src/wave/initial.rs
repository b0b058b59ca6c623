use alloc::vec::Vec;

use super::{invalid, GridSpec, WaveError};
use crate::math;

/// Gaussian profiles are cut to exactly zero where they fall below this
/// magnitude, which makes their support compact. The energy discarded by the
/// cut is bounded by the tail integral of the density beyond the cut radius,
/// of order `1e-28 * width` for unit amplitude.
pub const GAUSSIAN_CUTOFF: f64 = 1e-14;

/// Closed-form one-dimensional profile used for displacement or velocity data.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    Zero,
    Constant(f64),
    /// `A exp(-((x-c)/w)^2)`, cut below [`GAUSSIAN_CUTOFF`].
    Gaussian { amplitude: f64, center: f64, width: f64 },
    /// `A (1 - ((x-c)/r)^2)_+^k`, compactly supported on `[c-r, c+r]`.
    Bump {
        amplitude: f64,
        center: f64,
        radius: f64,
        power: u32,
    },
    /// `c x^(-e)` for `x > 0`; undefined at and left of the origin.
    PowerLaw { coefficient: f64, exponent: f64 },
    Sum(Vec<Profile>),
}

impl Profile {
    pub fn gaussian(amplitude: f64, center: f64, width: f64) -> Self {
        Profile::Gaussian {
            amplitude,
            center,
            width,
        }
    }

    /// Quartic bump `A (1 - ((x-c)/r)^2)_+^2`.
    pub fn bump(amplitude: f64, center: f64, radius: f64) -> Self {
        Profile::Bump {
            amplitude,
            center,
            radius,
            power: 2,
        }
    }

    fn gaussian_radius(amplitude: f64, width: f64) -> f64 {
        let ratio = amplitude.abs() / GAUSSIAN_CUTOFF;
        if ratio <= 1.0 {
            0.0
        } else {
            width.abs() * math::sqrt(math::ln(ratio))
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Constant(c) => *c,
            Profile::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let s = (x - center) / width;
                let v = amplitude * math::exp(-s * s);
                if v.abs() < GAUSSIAN_CUTOFF {
                    0.0
                } else {
                    v
                }
            }
            Profile::Bump {
                amplitude,
                center,
                radius,
                power,
            } => {
                let s = (x - center) / radius;
                if s.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * math::powi(1.0 - s * s, *power)
                }
            }
            Profile::PowerLaw {
                coefficient,
                exponent,
            } => {
                if x > 0.0 {
                    coefficient * math::pow(x, -exponent)
                } else {
                    f64::NAN
                }
            }
            Profile::Sum(parts) => parts.iter().map(|p| p.value(x)).sum(),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Profile::Zero | Profile::Constant(_) => 0.0,
            Profile::Gaussian { center, width, .. } => {
                let v = self.value(x);
                let s = (x - center) / width;
                -2.0 * s / width * v
            }
            Profile::Bump {
                amplitude,
                center,
                radius,
                power,
            } => {
                let s = (x - center) / radius;
                if s.abs() >= 1.0 || *power == 0 {
                    0.0
                } else {
                    let k = *power;
                    amplitude * k as f64 * math::powi(1.0 - s * s, k - 1) * (-2.0 * s / radius)
                }
            }
            Profile::PowerLaw {
                coefficient,
                exponent,
            } => {
                if x > 0.0 {
                    -exponent * coefficient * math::pow(x, -exponent - 1.0)
                } else {
                    f64::NAN
                }
            }
            Profile::Sum(parts) => parts.iter().map(|p| p.derivative(x)).sum(),
        }
    }

    /// `int_a^b profile(x) dx`, in closed form for every variant.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if a > b {
            return -self.integral(b, a);
        }
        match self {
            Profile::Zero => 0.0,
            Profile::Constant(c) => c * (b - a),
            Profile::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let r = Self::gaussian_radius(*amplitude, *width);
                let lo = a.max(center - r);
                let hi = b.min(center + r);
                if hi <= lo {
                    return 0.0;
                }
                let w = width.abs();
                let scale = amplitude * w * math::sqrt(core::f64::consts::PI) / 2.0;
                scale * (math::erf((hi - center) / w) - math::erf((lo - center) / w))
            }
            Profile::Bump {
                amplitude,
                center,
                radius,
                power,
            } => {
                let lo = ((a - center) / radius).clamp(-1.0, 1.0);
                let hi = ((b - center) / radius).clamp(-1.0, 1.0);
                amplitude * radius * (bump_antiderivative(*power, hi) - bump_antiderivative(*power, lo))
            }
            Profile::PowerLaw {
                coefficient,
                exponent,
            } => {
                if a <= 0.0 {
                    return f64::NAN;
                }
                if *exponent == 1.0 {
                    coefficient * (math::ln(b) - math::ln(a))
                } else {
                    let e = 1.0 - exponent;
                    coefficient * (math::pow(b, e) - math::pow(a, e)) / e
                }
            }
            Profile::Sum(parts) => parts.iter().map(|p| p.integral(a, b)).sum(),
        }
    }

    /// Closed interval outside which the profile vanishes identically, or
    /// `None` for profiles without compact support. `Zero` returns an
    /// empty interval `(+inf, -inf)`.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Profile::Zero => Some((f64::INFINITY, f64::NEG_INFINITY)),
            Profile::Constant(c) if *c == 0.0 => Some((f64::INFINITY, f64::NEG_INFINITY)),
            Profile::Constant(_) | Profile::PowerLaw { .. } => None,
            Profile::Gaussian {
                amplitude,
                center,
                width,
            } => {
                let r = Self::gaussian_radius(*amplitude, *width);
                Some((center - r, center + r))
            }
            Profile::Bump { center, radius, .. } => Some((center - radius.abs(), center + radius.abs())),
            Profile::Sum(parts) => parts.iter().try_fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), p| p.support().map(|(a, b)| (lo.min(a), hi.max(b))),
            ),
        }
    }

    /// `true` if `f(x) = f(2c - x)` holds symbolically about `c`.
    pub fn is_even_about(&self, c: f64) -> bool {
        match self {
            Profile::Zero | Profile::Constant(_) => true,
            Profile::Gaussian { center, .. } | Profile::Bump { center, .. } => *center == c,
            Profile::PowerLaw { .. } => false,
            Profile::Sum(_) => false,
        }
    }
}

/// `int_0^s (1 - y^2)^k dy`.
fn bump_antiderivative(k: u32, s: f64) -> f64 {
    let mut binom = 1.0;
    let mut total = 0.0;
    for i in 0..=k {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binom * math::powi(s, 2 * i + 1) / (2 * i + 1) as f64;
        binom = binom * (k - i) as f64 / (i + 1) as f64;
    }
    total
}

/// Initial velocity: an independent profile or the velocity that makes the
/// displacement a pure one-directional wave.
#[derive(Clone, Debug, PartialEq)]
pub enum VelocityData {
    Profile(Profile),
    /// `u_1 = -u_0'`, so the free solution is `u_0(x - t)`.
    RightMoving,
    /// `u_1 = +u_0'`, so the free solution is `u_0(x + t)`.
    LeftMoving,
}

/// Cauchy data `(u_0, u_1)`.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialData {
    Analytic {
        displacement: Profile,
        velocity: VelocityData,
    },
    /// Node values on a specific grid.
    Samples { u: Vec<f64>, v: Vec<f64> },
}

impl InitialData {
    pub fn zero() -> Self {
        Self::analytic(Profile::Zero, Profile::Zero)
    }

    pub fn analytic(displacement: Profile, velocity: Profile) -> Self {
        InitialData::Analytic {
            displacement,
            velocity: VelocityData::Profile(velocity),
        }
    }

    /// `u_0 = A exp(-((x-c)/w)^2)`, `u_1 = 0`.
    pub fn gaussian(amplitude: f64, center: f64, width: f64) -> Self {
        Self::analytic(Profile::gaussian(amplitude, center, width), Profile::Zero)
    }

    /// `u_0 = A (1 - ((x-c)/r)^2)_+^2`, `u_1 = 0`.
    pub fn polynomial_bump(amplitude: f64, center: f64, radius: f64) -> Self {
        Self::analytic(Profile::bump(amplitude, center, radius), Profile::Zero)
    }

    /// `(u_0, u_1) = (a x^-beta, b x^(-beta-1))` on `x > 0`.
    pub fn self_similar_trace(a: f64, b: f64, beta: f64) -> Self {
        Self::analytic(
            Profile::PowerLaw {
                coefficient: a,
                exponent: beta,
            },
            Profile::PowerLaw {
                coefficient: b,
                exponent: beta + 1.0,
            },
        )
    }

    pub fn right_mover(profile: Profile) -> Self {
        InitialData::Analytic {
            displacement: profile,
            velocity: VelocityData::RightMoving,
        }
    }

    pub fn left_mover(profile: Profile) -> Self {
        InitialData::Analytic {
            displacement: profile,
            velocity: VelocityData::LeftMoving,
        }
    }

    pub fn samples(u: Vec<f64>, v: Vec<f64>) -> Self {
        InitialData::Samples { u, v }
    }

    fn needs_positive_axis(&self) -> bool {
        match self {
            InitialData::Analytic {
                displacement,
                velocity,
            } => {
                has_power_law(displacement)
                    || matches!(velocity, VelocityData::Profile(p) if has_power_law(p))
            }
            InitialData::Samples { .. } => false,
        }
    }

    /// Node values `(u_0, u_1)` on `grid`.
    pub fn sample(&self, grid: &GridSpec) -> Result<(Vec<f64>, Vec<f64>), WaveError> {
        if self.needs_positive_axis() && grid.x_min() <= 0.0 {
            return Err(invalid(
                "init",
                "self-similar trace data is singular at x = 0 and needs x_min > 0",
            ));
        }
        let (u, v) = match self {
            InitialData::Analytic {
                displacement,
                velocity,
            } => {
                let u: Vec<f64> = grid.nodes().map(|x| displacement.value(x)).collect();
                let v: Vec<f64> = grid
                    .nodes()
                    .map(|x| match velocity {
                        VelocityData::Profile(p) => p.value(x),
                        VelocityData::RightMoving => -displacement.derivative(x),
                        VelocityData::LeftMoving => displacement.derivative(x),
                    })
                    .collect();
                (u, v)
            }
            InitialData::Samples { u, v } => {
                if u.len() != grid.n_nodes() || v.len() != grid.n_nodes() {
                    return Err(invalid("init", "sample count does not match the grid"));
                }
                (u.clone(), v.clone())
            }
        };
        if u.iter().chain(v.iter()).any(|s| !s.is_finite()) {
            return Err(invalid("init", "initial samples must be finite"));
        }
        Ok((u, v))
    }

    /// Half the integral of `u_1` over `[x - h, x + h]` at every node; this
    /// is the velocity contribution of the exact d'Alembert step of size `h`.
    /// Falls back to `h u_1(x_j)` for sampled data.
    pub(crate) fn velocity_step(&self, grid: &GridSpec, h: f64) -> Result<Vec<f64>, WaveError> {
        match self {
            InitialData::Analytic {
                displacement,
                velocity,
            } => Ok(grid
                .nodes()
                .map(|x| match velocity {
                    VelocityData::Profile(p) => 0.5 * p.integral(x - h, x + h),
                    VelocityData::RightMoving => {
                        0.5 * (displacement.value(x - h) - displacement.value(x + h))
                    }
                    VelocityData::LeftMoving => {
                        0.5 * (displacement.value(x + h) - displacement.value(x - h))
                    }
                })
                .collect()),
            InitialData::Samples { v, .. } => {
                if v.len() != grid.n_nodes() {
                    return Err(invalid("init", "sample count does not match the grid"));
                }
                Ok(v.iter().map(|s| h * s).collect())
            }
        }
    }

    /// Free (linear) d'Alembert solution at `(x, t)`.
    pub fn free_wave(&self, x: f64, t: f64) -> Option<f64> {
        match self {
            InitialData::Analytic {
                displacement,
                velocity,
            } => {
                let avg = 0.5 * (displacement.value(x - t) + displacement.value(x + t));
                let vel = match velocity {
                    VelocityData::Profile(p) => 0.5 * p.integral(x - t, x + t),
                    VelocityData::RightMoving => {
                        0.5 * (displacement.value(x - t) - displacement.value(x + t))
                    }
                    VelocityData::LeftMoving => {
                        0.5 * (displacement.value(x + t) - displacement.value(x - t))
                    }
                };
                Some(avg + vel)
            }
            InitialData::Samples { .. } => None,
        }
    }

    /// `true` when both data components are even about the origin.
    pub fn is_even(&self, grid: &GridSpec) -> Result<bool, WaveError> {
        let (u, v) = self.sample(grid)?;
        let n = u.len();
        let centered = grid.node_index(0.0) == Some(grid.n_cells() / 2) && grid.n_cells() % 2 == 0;
        if !centered {
            return Ok(false);
        }
        let scale = u
            .iter()
            .chain(v.iter())
            .fold(0.0_f64, |m, s| m.max(s.abs()))
            .max(1.0);
        Ok((0..n).all(|j| {
            (u[j] - u[n - 1 - j]).abs() <= 1e-12 * scale && (v[j] - v[n - 1 - j]).abs() <= 1e-12 * scale
        }))
    }
}

fn has_power_law(p: &Profile) -> bool {
    match p {
        Profile::PowerLaw { .. } => true,
        Profile::Sum(parts) => parts.iter().any(has_power_law),
        _ => false,
    }
}

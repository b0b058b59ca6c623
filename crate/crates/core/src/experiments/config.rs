use alloc::vec::Vec;

use super::ExperimentError;
use crate::math;
use crate::wave::{GridSpec, InitialData, Nonlinearity, Profile, Sign, VelocityData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scenario {
    Decay,
    Tail,
    Retraction,
    Conjecture,
    Focusing,
    Concentration,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Decay,
        Scenario::Tail,
        Scenario::Retraction,
        Scenario::Conjecture,
        Scenario::Focusing,
        Scenario::Concentration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Decay => "decay",
            Scenario::Tail => "tail",
            Scenario::Retraction => "retraction",
            Scenario::Conjecture => "conjecture",
            Scenario::Focusing => "focusing",
            Scenario::Concentration => "concentration",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Pass/fail tolerances. Every ratio here is a finite-horizon stand-in for a
/// limit and is reported alongside the verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    /// Largest allowed relative drift of `E`, `M`, `E_+`, `E_-`.
    pub conservation: f64,
    /// Decay: final one-sided and central energies over their reference totals.
    pub decay_ratio: f64,
    /// Decay: final `L^(p+1)` and sup norms over their initial values.
    pub norm_ratio: f64,
    /// Allowed violation of a monotone series, relative to `E`.
    pub monotone: f64,
    /// Retraction: final cone energy must exceed this fraction of `E`.
    pub retraction_fraction: f64,
    /// Tail: allowed energy beyond `|x| = t + R`, relative to `E`.
    pub tail: f64,
    /// Conjecture: weak and strong probes at the final time over their
    /// values at the reference time.
    pub probe_ratio: f64,
    /// Conjecture: `E_+(t; t-eta, inf) / E_+` below this counts as retracted.
    pub retracted_fraction: f64,
    /// Focusing: the `Ḣ¹×L²` norm above this counts as blow-up.
    pub norm_blowup: f64,
    /// Focusing: conservation is checked while the `Ḣ¹×L²` norm stays below
    /// this multiple of its initial value.
    pub resolved_growth: f64,
    /// Concentration: `min Q(t) / Q(t_ref)` over `t >= t_ref`.
    pub concentration_ratio: f64,
    /// Concentration: largest allowed `|u(x) - u(-x)|`, `|v(x) - v(-x)|`.
    pub evenness: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            conservation: 1e-3,
            decay_ratio: 0.1,
            norm_ratio: 0.2,
            monotone: 1e-8,
            retraction_fraction: 0.01,
            tail: 0.0,
            probe_ratio: 0.2,
            retracted_fraction: 0.01,
            norm_blowup: 1e6,
            resolved_growth: 2.0,
            concentration_ratio: 0.2,
            evenness: 1e-10,
        }
    }
}

/// Smooth test function `exp(-1/(1-z²))`, `z = (s - center)/radius`, used by
/// the weak-convergence probe.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Probe {
    pub center: f64,
    pub radius: f64,
}

impl Probe {
    pub fn value(&self, s: f64) -> f64 {
        let z = (s - self.center) / self.radius;
        let w = 1.0 - z * z;
        if w <= 0.0 {
            0.0
        } else {
            math::exp(-1.0 / w)
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        let z = (s - self.center) / self.radius;
        let w = 1.0 - z * z;
        if w <= 0.0 {
            0.0
        } else {
            math::exp(-1.0 / w) * (-2.0 * z / (w * w)) / self.radius
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub nl: Nonlinearity,
    pub grid: GridSpec,
    pub init: InitialData,
    /// Speed fraction of the decay cone `x = ct`.
    pub c: f64,
    /// Shift of the ray `x = t - eta` and of the cone `|x| < t - eta`.
    pub eta: f64,
    /// Tail offset `R`; `None` means the support radius of the initial energy.
    pub tail_offset: Option<f64>,
    /// Observation times; the run ends at the last one.
    pub t_samples: Vec<f64>,
    /// Reference time for ratio gates (concentration and conjecture probes).
    pub t_ref: f64,
    pub probe: Probe,
    pub thresholds: Thresholds,
}

/// Default cell size of the desk-scale scenarios.
pub const DEFAULT_DX: f64 = 2e-3;

fn samples(t_end: f64, step: f64) -> Vec<f64> {
    let n = math::round(t_end / step) as usize;
    (0..=n).map(|k| k as f64 * step).collect()
}

impl ExperimentConfig {
    /// Desk-scale defaults: p = 3, unit Gaussian data (a Levine-negative
    /// bump for focusing, two even bumps for concentration), `cfl = 1`,
    /// `dx = 2e-3`, domain `[-(t_end + R0 + 2), t_end + R0 + 2]`.
    pub fn default_for(scenario: Scenario) -> Self {
        let p = 3.0;
        let gaussian = InitialData::gaussian(1.0, 0.0, 1.0);
        let (sign, init, t_samples, eta) = match scenario {
            Scenario::Decay => (Sign::Defocusing, gaussian, samples(60.0, 1.0), 0.0),
            Scenario::Tail => (Sign::Defocusing, gaussian, samples(50.0, 5.0), 0.0),
            Scenario::Retraction => (Sign::Defocusing, gaussian, samples(40.0, 1.0), 2.0),
            Scenario::Conjecture => (Sign::Defocusing, gaussian, samples(40.0, 1.0), 1.0),
            Scenario::Focusing => {
                let shape = Profile::bump(1.0, 0.0, 1.0);
                let a_star = levine_threshold(&shape, p).expect("compact shape");
                let data = InitialData::analytic(Profile::bump(1.5 * a_star, 0.0, 1.0), Profile::Zero);
                (Sign::Focusing, data, samples(20.0, 0.02), 0.0)
            }
            Scenario::Concentration => {
                let two = Profile::Sum(alloc::vec![Profile::bump(1.0, -3.0, 1.0), Profile::bump(1.0, 3.0, 1.0)]);
                (
                    Sign::Defocusing,
                    InitialData::analytic(two, Profile::Zero),
                    samples(50.0, 1.0),
                    0.0,
                )
            }
        };
        let nl = Nonlinearity::new(p, sign).expect("p > 1");
        let t_end = *t_samples.last().expect("nonempty");
        let grid = Self::domain_for(&init, t_end, DEFAULT_DX, 1.0).expect("valid default grid");
        Self {
            scenario,
            nl,
            grid,
            init,
            c: 0.5,
            eta,
            tail_offset: None,
            t_samples,
            t_ref: 5.0,
            probe: Probe {
                center: 1.0,
                radius: 1.0,
            },
            thresholds: Thresholds::default(),
        }
    }

    /// Symmetric grid `[-(t_end + R0 + 2), t_end + R0 + 2]` for data supported in `[-R0, R0]`.
    pub fn domain_for(init: &InitialData, t_end: f64, dx: f64, cfl: f64) -> Result<GridSpec, ExperimentError> {
        let (lo, hi) = data_support(init).ok_or(ExperimentError::InvalidConfig {
            field: "init",
            reason: "data must be compactly supported",
        })?;
        let r0 = if lo > hi { 0.0 } else { lo.abs().max(hi.abs()) };
        Ok(GridSpec::symmetric(t_end / cfl + r0 + 2.0, dx, cfl)?)
    }

    pub fn t_end(&self) -> f64 {
        self.t_samples.last().copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |field, reason| Err(ExperimentError::InvalidConfig { field, reason });
        if self.t_samples.is_empty() {
            return bad("t_samples", "at least one sample time is required");
        }
        if self.t_samples.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("t_samples", "sample times must be finite and nonnegative");
        }
        if self.t_samples.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("t_samples", "sample times must be strictly increasing");
        }
        if !self.eta.is_finite() || !self.t_ref.is_finite() {
            return bad("eta", "eta and t_ref must be finite");
        }
        let forbids_focusing = matches!(
            self.scenario,
            Scenario::Decay | Scenario::Retraction | Scenario::Conjecture | Scenario::Concentration
        );
        if forbids_focusing && self.nl.sign() == Sign::Focusing {
            return bad("nl.sign", "scenario requires the defocusing or linear sign");
        }
        match self.scenario {
            Scenario::Decay if !(self.c > 0.0 && self.c < 1.0) => bad("c", "c in (0,1)"),
            Scenario::Focusing if self.nl.sign() != Sign::Focusing => {
                bad("nl.sign", "scenario requires the focusing sign")
            }
            Scenario::Tail | Scenario::Concentration | Scenario::Focusing if data_support(&self.init).is_none() => {
                bad("init", "data must be compactly supported")
            }
            Scenario::Tail if self.tail_offset.is_some_and(|r| !(r >= 0.0)) => {
                bad("tail_offset", "tail offset must be nonnegative")
            }
            Scenario::Conjecture
                if !(self.probe.radius > 0.0) || self.probe.center - self.probe.radius < -self.eta =>
            {
                bad("probe", "probe must be supported inside (-eta, inf)")
            }
            _ => Ok(()),
        }
    }
}

/// Interval outside which both data components vanish, `None` if unbounded.
/// Zero data give an empty interval `(+inf, -inf)`.
pub fn data_support(init: &InitialData) -> Option<(f64, f64)> {
    match init {
        InitialData::Analytic {
            displacement,
            velocity,
        } => {
            let (a, b) = displacement.support()?;
            let (c, d) = match velocity {
                VelocityData::Profile(p) => p.support()?,
                _ => (a, b),
            };
            Some((a.min(c), b.max(d)))
        }
        InitialData::Samples { .. } => None,
    }
}

/// Amplitude `A*` at which `E(A φ, 0) = ½‖Aφ'‖² - ‖Aφ‖_{p+1}^{p+1}/(p+1)`
/// changes sign, by composite Simpson quadrature over the support of `φ`.
/// Focusing data `A φ` with `A > A*` have negative energy.
pub fn levine_threshold(shape: &Profile, p: f64) -> Option<f64> {
    const PANELS: usize = 20_000;
    let (a, b) = shape.support()?;
    if !(b > a) || !(p > 1.0) {
        return None;
    }
    let h = (b - a) / PANELS as f64;
    let (mut kin, mut pot) = (0.0, 0.0);
    for k in 0..=PANELS {
        let x = a + k as f64 * h;
        let w = if k == 0 || k == PANELS {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let d = shape.derivative(x);
        kin += w * d * d;
        pot += w * math::pow(shape.value(x).abs(), p + 1.0);
    }
    let (kin, pot) = (kin * h / 3.0, pot * h / 3.0);
    if !(pot > 0.0) {
        return None;
    }
    Some(math::pow((p + 1.0) * kin / (2.0 * pot), 1.0 / (p - 1.0)))
}

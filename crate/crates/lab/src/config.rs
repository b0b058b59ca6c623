//! Run configuration in a flat `key = value` text format.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line    = blank | comment | entry
//! comment = "#" anything
//! entry   = key "=" value [comment]
//! key     = section "." name            (e.g. grid.dx)
//! value   = number | word | list | "auto"
//! list    = number {"," number}
//! ```
//!
//! Whitespace around keys and values is ignored. Keys are fixed (see
//! [`Config::KEYS`]); unknown or repeated keys are errors. Numbers use Rust
//! float syntax and must be finite. The emitter writes every key with the
//! shortest decimal form that parses back to the same `f64`, so
//! `parse(emit(c)) == c`.

use std::fmt;

use wavelab_core::energy::Which;
use wavelab_core::experiments::{ExperimentConfig, Probe, Scenario, Thresholds};
use wavelab_core::selfsimilar::OdeParams;
use wavelab_core::wave::VelocityData;
use wavelab_core::{GridSpec, InitialData, Nonlinearity, Profile, Sign};

/// Syntax error with a 1-based position inside `origin`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{origin}:{line}:{col}: {message}")]
pub struct ParseError {
    pub origin: String,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// A value that parses but violates a parameter invariant.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{field}: {reason}")]
pub struct ValidationError {
    pub field: String,
    pub reason: String,
}

impl ValidationError {
    fn new(field: &str, reason: impl Into<String>) -> Self {
        Self {
            field: field.to_owned(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

/// Shape of the initial displacement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitKind {
    Zero,
    /// `A exp(-((x-c)/w)²)`.
    Gaussian,
    /// `A (1 - ((x-c)/r)²)₊²`.
    Bump,
    /// Bumps of radius `r` centred at `c ± separation`.
    TwoBumps,
}

/// Initial velocity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Velocity {
    Zero,
    /// `u_1 = -u_0'`.
    Right,
    /// `u_1 = u_0'`.
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathShape {
    Rectangle,
    /// Sides along `x - t = const`.
    ParallelogramRight,
    /// Sides along `x + t = const`.
    ParallelogramLeft,
    /// Vertices `(x1,t1), (x2,t1), (x2+h,t1+h), (x2,t2), (x1,t2), (x1-h,t1+h)` with `h = (t2-t1)/2`.
    Hexagon,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridSection {
    pub dx: f64,
    pub cfl: f64,
    /// `None` sizes the domain from the data support and the horizon.
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitSection {
    pub kind: InitKind,
    pub amplitude: f64,
    pub center: f64,
    pub width: f64,
    pub radius: f64,
    pub separation: f64,
    pub velocity: Velocity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSection {
    pub t_end: f64,
    /// Observation times are `k * sample_every` up to `t_end`.
    pub sample_every: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSection {
    pub c: f64,
    pub eta: f64,
    pub tail_offset: Option<f64>,
    pub t_ref: f64,
    pub probe_center: f64,
    pub probe_radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FluxSection {
    pub shape: PathShape,
    pub x1: f64,
    pub x2: f64,
    pub t1: f64,
    pub t2: f64,
    pub which: Which,
    /// Pass when `|residual| <= tolerance * magnitude`.
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrapezoidSection {
    pub eta: f64,
    pub t1: f64,
    pub t2: f64,
    pub which: Which,
    /// Pass when `|lhs - rhs| <= tolerance * E(0)`.
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdeSection {
    pub p: f64,
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub tol: f64,
    pub kappa: f64,
    /// Number of uniformly spaced rows in the profile table.
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RaySection {
    pub r: f64,
    pub r1: f64,
    pub times: Vec<f64>,
    /// Gate on the last-over-first ray energy.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub p: f64,
    pub sign: Sign,
    pub grid: GridSection,
    pub init: InitSection,
    pub run: RunSection,
    pub experiment: ExperimentSection,
    pub thresholds: Thresholds,
    pub flux: FluxSection,
    pub trapezoid: TrapezoidSection,
    pub ode: OdeSection,
    pub ray: RaySection,
    pub cp_p: Vec<f64>,
    /// Offset of the cone column `E_cone_eta` in the diagnostics table.
    pub cone_eta: f64,
}

/// Conversion between a field and its textual form.
trait ConfigValue: Sized {
    fn emit(&self) -> String;
    fn parse(raw: &str) -> Result<Self, String>;
}

/// Shortest decimal text that reads back as the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

impl ConfigValue for f64 {
    fn emit(&self) -> String {
        fmt_f64(*self)
    }
    fn parse(raw: &str) -> Result<Self, String> {
        match raw.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => Err(format!("expected a finite number, found `{raw}`")),
        }
    }
}

impl ConfigValue for Option<f64> {
    fn emit(&self) -> String {
        self.map_or_else(|| "auto".to_owned(), fmt_f64)
    }
    fn parse(raw: &str) -> Result<Self, String> {
        if raw == "auto" {
            Ok(None)
        } else {
            f64::parse(raw).map(Some).map_err(|e| format!("{e} or `auto`"))
        }
    }
}

impl ConfigValue for usize {
    fn emit(&self) -> String {
        self.to_string()
    }
    fn parse(raw: &str) -> Result<Self, String> {
        raw.parse().map_err(|_| format!("expected a nonnegative integer, found `{raw}`"))
    }
}

impl ConfigValue for Vec<f64> {
    fn emit(&self) -> String {
        self.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(", ")
    }
    fn parse(raw: &str) -> Result<Self, String> {
        raw.split(',').map(|item| f64::parse(item.trim())).collect()
    }
}

/// Implements [`ConfigValue`] for a closed set of words.
macro_rules! word_value {
    ($ty:ty, $($variant:path => $word:literal),+ $(,)?) => {
        impl ConfigValue for $ty {
            fn emit(&self) -> String {
                match self { $($variant => $word,)+ }.to_owned()
            }
            fn parse(raw: &str) -> Result<Self, String> {
                match raw {
                    $($word => Ok($variant),)+
                    _ => Err(format!(
                        "expected one of {}, found `{raw}`",
                        [$($word),+].join(", ")
                    )),
                }
            }
        }
    };
}

word_value!(Sign, Sign::Defocusing => "defocusing", Sign::Focusing => "focusing", Sign::Disabled => "disabled");
word_value!(InitKind, InitKind::Zero => "zero", InitKind::Gaussian => "gaussian", InitKind::Bump => "bump", InitKind::TwoBumps => "two_bumps");
word_value!(Velocity, Velocity::Zero => "zero", Velocity::Right => "right", Velocity::Left => "left");
word_value!(Which, Which::Plus => "plus", Which::Minus => "minus");
word_value!(
    PathShape,
    PathShape::Rectangle => "rectangle",
    PathShape::ParallelogramRight => "parallelogram_right",
    PathShape::ParallelogramLeft => "parallelogram_left",
    PathShape::Hexagon => "hexagon",
);

/// Binds each key to a field; generates the key list, the emitter and the setter.
macro_rules! config_fields {
    ($($key:literal => $($field:ident).+;)+) => {
        impl Config {
            /// Every accepted key, in emission order.
            pub const KEYS: &'static [&'static str] = &[$($key),+];

            /// `(key, value text)` for every key.
            pub fn entries(&self) -> Vec<(&'static str, String)> {
                vec![$(($key, ConfigValue::emit(&self.$($field).+))),+]
            }

            fn assign(&mut self, key: &str, raw: &str) -> Option<Result<(), String>> {
                match key {
                    $($key => Some(ConfigValue::parse(raw).map(|v| self.$($field).+ = v)),)+
                    _ => None,
                }
            }
        }
    };
}

config_fields! {
    "nl.p" => p;
    "nl.sign" => sign;
    "grid.dx" => grid.dx;
    "grid.cfl" => grid.cfl;
    "grid.x_min" => grid.x_min;
    "grid.x_max" => grid.x_max;
    "init.kind" => init.kind;
    "init.amplitude" => init.amplitude;
    "init.center" => init.center;
    "init.width" => init.width;
    "init.radius" => init.radius;
    "init.separation" => init.separation;
    "init.velocity" => init.velocity;
    "run.t_end" => run.t_end;
    "run.sample_every" => run.sample_every;
    "experiment.c" => experiment.c;
    "experiment.eta" => experiment.eta;
    "experiment.tail_offset" => experiment.tail_offset;
    "experiment.t_ref" => experiment.t_ref;
    "experiment.probe_center" => experiment.probe_center;
    "experiment.probe_radius" => experiment.probe_radius;
    "threshold.conservation" => thresholds.conservation;
    "threshold.decay_ratio" => thresholds.decay_ratio;
    "threshold.norm_ratio" => thresholds.norm_ratio;
    "threshold.monotone" => thresholds.monotone;
    "threshold.retraction_fraction" => thresholds.retraction_fraction;
    "threshold.tail" => thresholds.tail;
    "threshold.probe_ratio" => thresholds.probe_ratio;
    "threshold.retracted_fraction" => thresholds.retracted_fraction;
    "threshold.norm_blowup" => thresholds.norm_blowup;
    "threshold.resolved_growth" => thresholds.resolved_growth;
    "threshold.concentration_ratio" => thresholds.concentration_ratio;
    "threshold.evenness" => thresholds.evenness;
    "flux.shape" => flux.shape;
    "flux.x1" => flux.x1;
    "flux.x2" => flux.x2;
    "flux.t1" => flux.t1;
    "flux.t2" => flux.t2;
    "flux.which" => flux.which;
    "flux.tolerance" => flux.tolerance;
    "trapezoid.eta" => trapezoid.eta;
    "trapezoid.t1" => trapezoid.t1;
    "trapezoid.t2" => trapezoid.t2;
    "trapezoid.which" => trapezoid.which;
    "trapezoid.tolerance" => trapezoid.tolerance;
    "ode.p" => ode.p;
    "ode.a" => ode.a;
    "ode.b" => ode.b;
    "ode.delta" => ode.delta;
    "ode.tol" => ode.tol;
    "ode.kappa" => ode.kappa;
    "ode.samples" => ode.samples;
    "ray.r" => ray.r;
    "ray.r1" => ray.r1;
    "ray.times" => ray.times;
    "ray.ratio" => ray.ratio;
    "cp.p" => cp_p;
    "diagnostics.cone_eta" => cone_eta;
}

impl Default for Config {
    /// Defaults of `simulate`: cubic defocusing, unit Gaussian at rest,
    /// `cfl = 1`, `dx = 2e-3`, ten time units sampled every unit.
    fn default() -> Self {
        Self {
            p: 3.0,
            sign: Sign::Defocusing,
            grid: GridSection {
                dx: 2e-3,
                cfl: 1.0,
                x_min: None,
                x_max: None,
            },
            init: InitSection {
                kind: InitKind::Gaussian,
                amplitude: 1.0,
                center: 0.0,
                width: 1.0,
                radius: 1.0,
                separation: 3.0,
                velocity: Velocity::Zero,
            },
            run: RunSection {
                t_end: 10.0,
                sample_every: 1.0,
            },
            experiment: ExperimentSection {
                c: 0.5,
                eta: 0.0,
                tail_offset: None,
                t_ref: 5.0,
                probe_center: 1.0,
                probe_radius: 1.0,
            },
            thresholds: Thresholds::default(),
            flux: FluxSection {
                shape: PathShape::Hexagon,
                x1: -1.0,
                x2: 1.0,
                t1: 0.5,
                t2: 1.5,
                which: Which::Plus,
                tolerance: 1e-4,
            },
            trapezoid: TrapezoidSection {
                eta: 0.0,
                t1: 0.0,
                t2: 1.0,
                which: Which::Plus,
                tolerance: 1e-4,
            },
            ode: OdeSection {
                p: 3.0,
                a: 1.0,
                b: 0.0,
                delta: OdeParams::DEFAULT_DELTA,
                tol: OdeParams::DEFAULT_TOL,
                kappa: OdeParams::DEFAULT_KAPPA,
                samples: 2001,
            },
            ray: RaySection {
                r: 1.0,
                r1: 2.0,
                times: vec![10.0, 20.0, 40.0, 80.0],
                ratio: 0.1,
            },
            cp_p: vec![2.0, 3.0, 5.0],
            cone_eta: 0.0,
        }
    }
}

impl Config {
    /// Defaults of a scenario, taken from [`ExperimentConfig::default_for`].
    pub fn for_scenario(scenario: Scenario) -> Self {
        let exp = ExperimentConfig::default_for(scenario);
        let mut cfg = Config {
            p: exp.nl.p(),
            sign: exp.nl.sign(),
            ..Config::default()
        };
        cfg.grid.dx = exp.grid.dx();
        cfg.grid.cfl = exp.grid.cfl();
        cfg.init = InitSection::describe(&exp.init).expect("scenario defaults use closed-form data");
        cfg.run.t_end = exp.t_end();
        cfg.run.sample_every = exp.t_samples.get(1).map_or(exp.t_end(), |t| t - exp.t_samples[0]);
        cfg.experiment = ExperimentSection {
            c: exp.c,
            eta: exp.eta,
            tail_offset: exp.tail_offset,
            t_ref: exp.t_ref,
            probe_center: exp.probe.center,
            probe_radius: exp.probe.radius,
        };
        cfg.thresholds = exp.thresholds;
        cfg
    }

    /// Parses `text` on top of `self`.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ParseError> {
        let mut seen: Vec<String> = Vec::new();
        for (index, raw_line) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw_line.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let key = self.apply_entry(content, origin, line)?;
            if seen.iter().any(|k| *k == key) {
                return Err(ParseError {
                    origin: origin.to_owned(),
                    line,
                    col: column_of(content, content.trim_start()),
                    message: format!("duplicate key `{key}`"),
                });
            }
            seen.push(key);
        }
        Ok(())
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, entry: &str, index: usize) -> Result<(), ParseError> {
        self.apply_entry(entry, &format!("override {}", index + 1), 1).map(|_| ())
    }

    fn apply_entry(&mut self, content: &str, origin: &str, line: usize) -> Result<String, ParseError> {
        let fail = |col: usize, message: String| ParseError {
            origin: origin.to_owned(),
            line,
            col,
            message,
        };
        let Some(eq) = content.find('=') else {
            let col = column_of(content, content.trim_start());
            return Err(fail(col, "expected `key = value`".to_owned()));
        };
        let (key_part, value_part) = (&content[..eq], &content[eq + 1..]);
        let key = key_part.trim();
        let key_col = column_of(content, key_part.trim_start());
        if key.is_empty() {
            return Err(fail(key_col, "missing key before `=`".to_owned()));
        }
        let value = value_part.trim();
        let value_col = eq + 1 + column_of(value_part, value_part.trim_start());
        if value.is_empty() {
            return Err(fail(eq + 2, format!("missing value for `{key}`")));
        }
        match self.assign(key, value) {
            None => Err(fail(key_col, format!("unknown key `{key}`"))),
            Some(Err(message)) => Err(fail(value_col, format!("{key}: {message}"))),
            Some(Ok(())) => Ok(key.to_owned()),
        }
    }

    /// Parses a complete document over the defaults of `simulate`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut cfg = Config::default();
        cfg.apply_text(text, "config")?;
        Ok(cfg)
    }

    /// Every key, grouped by section.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let mut section = "";
        for (key, value) in self.entries() {
            let head = key.split('.').next().unwrap_or("");
            if head != section {
                if !section.is_empty() {
                    out.push('\n');
                }
                section = head;
            }
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(&value);
            out.push('\n');
        }
        out
    }

    /// Checks every parameter invariant that does not need the data.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let check = |ok: bool, field: &str, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(ValidationError::new(field, reason))
            }
        };
        check(self.p > 1.0, "nl.p", "p must exceed 1")?;
        check(self.grid.dx > 0.0, "grid.dx", "dx must be positive")?;
        check(self.grid.cfl > 0.0 && self.grid.cfl <= 1.0, "grid.cfl", "cfl in (0,1]")?;
        match (self.grid.x_min, self.grid.x_max) {
            (None, None) => {}
            (Some(a), Some(b)) => check(a < b, "grid.x_max", "x_max must exceed x_min")?,
            _ => return Err(ValidationError::new("grid.x_min", "set both x_min and x_max, or neither")),
        }
        let init = &self.init;
        check(init.width > 0.0, "init.width", "width must be positive")?;
        check(init.radius > 0.0, "init.radius", "radius must be positive")?;
        check(init.separation >= 0.0, "init.separation", "separation must be nonnegative")?;
        check(self.run.t_end >= 0.0, "run.t_end", "t_end must be nonnegative")?;
        check(self.run.sample_every > 0.0, "run.sample_every", "sample_every must be positive")?;
        check(
            self.run.t_end / self.run.sample_every <= 1e6,
            "run.sample_every",
            "more than 10^6 samples requested",
        )?;
        let e = &self.experiment;
        check(e.c > 0.0 && e.c < 1.0, "experiment.c", "c in (0,1)")?;
        check(e.tail_offset.is_none_or(|r| r >= 0.0), "experiment.tail_offset", "tail offset must be nonnegative")?;
        check(e.probe_radius > 0.0, "experiment.probe_radius", "probe radius must be positive")?;
        let t = &self.thresholds;
        for (field, value) in [
            ("threshold.conservation", t.conservation),
            ("threshold.decay_ratio", t.decay_ratio),
            ("threshold.norm_ratio", t.norm_ratio),
            ("threshold.monotone", t.monotone),
            ("threshold.retraction_fraction", t.retraction_fraction),
            ("threshold.tail", t.tail),
            ("threshold.probe_ratio", t.probe_ratio),
            ("threshold.retracted_fraction", t.retracted_fraction),
            ("threshold.norm_blowup", t.norm_blowup),
            ("threshold.resolved_growth", t.resolved_growth),
            ("threshold.concentration_ratio", t.concentration_ratio),
            ("threshold.evenness", t.evenness),
            ("flux.tolerance", self.flux.tolerance),
            ("trapezoid.tolerance", self.trapezoid.tolerance),
            ("ray.ratio", self.ray.ratio),
        ] {
            check(value >= 0.0, field, "thresholds must be nonnegative")?;
        }
        check(self.flux.x1 < self.flux.x2, "flux.x2", "x2 must exceed x1")?;
        check(self.flux.t1 < self.flux.t2, "flux.t2", "t2 must exceed t1")?;
        check(self.flux.t1 >= 0.0, "flux.t1", "t1 must be nonnegative")?;
        check(
            self.trapezoid.t1 >= 0.0 && self.trapezoid.t1 < self.trapezoid.t2,
            "trapezoid.t2",
            "need 0 <= t1 < t2",
        )?;
        let o = &self.ode;
        check(o.p > 1.0, "ode.p", "p must exceed 1")?;
        check(o.delta > 0.0 && o.delta <= 0.5, "ode.delta", "delta in (0,0.5]")?;
        check(o.tol > 0.0 && o.tol < 1.0, "ode.tol", "tol in (0,1)")?;
        check(o.kappa > 0.0 && o.kappa <= 0.5, "ode.kappa", "kappa in (0,0.5]")?;
        check(o.samples >= 2, "ode.samples", "at least 2 samples")?;
        check(self.ray.r > 0.0 && self.ray.r1 > self.ray.r, "ray.r1", "need 0 < r < r1")?;
        check(!self.ray.times.is_empty(), "ray.times", "at least one time")?;
        check(
            self.ray.times.iter().all(|t| *t >= 0.0) && self.ray.times.windows(2).all(|w| w[1] > w[0]),
            "ray.times",
            "times must be nonnegative and increasing",
        )?;
        check(!self.cp_p.is_empty(), "cp.p", "at least one exponent")?;
        check(self.cp_p.iter().all(|p| *p > 1.0), "cp.p", "p must exceed 1")?;
        Ok(())
    }

    pub fn nonlinearity(&self) -> Result<Nonlinearity, ValidationError> {
        Nonlinearity::new(self.p, self.sign).map_err(|e| ValidationError::new("nl.p", e.to_string()))
    }

    pub fn initial_data(&self) -> InitialData {
        self.init.build()
    }

    /// `0, s, 2s, ...` up to `t_end`.
    pub fn sample_times(&self) -> Vec<f64> {
        let n = (self.run.t_end / self.run.sample_every).round() as usize;
        (0..=n).map(|k| k as f64 * self.run.sample_every).collect()
    }

    /// Explicit grid if both ends are set, otherwise the symmetric domain
    /// that holds the data's light cone up to `t_end`.
    pub fn grid_for(&self, init: &InitialData, t_end: f64) -> Result<GridSpec, ValidationError> {
        let g = &self.grid;
        match (g.x_min, g.x_max) {
            (Some(a), Some(b)) => GridSpec::with_spacing(a, b, g.dx, g.cfl)
                .map_err(|e| ValidationError::new("grid", e.to_string())),
            _ => ExperimentConfig::domain_for(init, t_end, g.dx, g.cfl)
                .map_err(|e| ValidationError::new("grid", e.to_string())),
        }
    }

    pub fn experiment(&self, scenario: Scenario) -> Result<ExperimentConfig, ValidationError> {
        let init = self.initial_data();
        let t_samples = self.sample_times();
        let t_end = t_samples.last().copied().unwrap_or(0.0);
        let e = &self.experiment;
        Ok(ExperimentConfig {
            scenario,
            nl: self.nonlinearity()?,
            grid: self.grid_for(&init, t_end)?,
            init,
            c: e.c,
            eta: e.eta,
            tail_offset: e.tail_offset,
            t_samples,
            t_ref: e.t_ref,
            probe: Probe {
                center: e.probe_center,
                radius: e.probe_radius,
            },
            thresholds: self.thresholds,
        })
    }

    pub fn ode_params(&self) -> OdeParams {
        let o = &self.ode;
        OdeParams {
            kappa: o.kappa,
            ..OdeParams::new(o.p, o.a, o.b).with_delta(o.delta).with_tol(o.tol)
        }
    }
}

impl InitSection {
    fn build(&self) -> InitialData {
        let (a, c) = (self.amplitude, self.center);
        let shape = match self.kind {
            InitKind::Zero => return InitialData::zero(),
            InitKind::Gaussian => Profile::gaussian(a, c, self.width),
            InitKind::Bump => Profile::bump(a, c, self.radius),
            InitKind::TwoBumps => Profile::Sum(vec![
                Profile::bump(a, c - self.separation, self.radius),
                Profile::bump(a, c + self.separation, self.radius),
            ]),
        };
        match self.velocity {
            Velocity::Zero => InitialData::analytic(shape, Profile::Zero),
            Velocity::Right => InitialData::right_mover(shape),
            Velocity::Left => InitialData::left_mover(shape),
        }
    }

    /// Inverse of [`InitSection::build`] for the shapes it produces.
    fn describe(init: &InitialData) -> Option<Self> {
        let InitialData::Analytic {
            displacement,
            velocity,
        } = init
        else {
            return None;
        };
        let velocity = match velocity {
            VelocityData::Profile(Profile::Zero) => Velocity::Zero,
            VelocityData::RightMoving => Velocity::Right,
            VelocityData::LeftMoving => Velocity::Left,
            VelocityData::Profile(_) => return None,
        };
        let base = Config::default().init;
        let section = match displacement {
            Profile::Zero => InitSection {
                kind: InitKind::Zero,
                ..base
            },
            Profile::Gaussian {
                amplitude,
                center,
                width,
            } => InitSection {
                kind: InitKind::Gaussian,
                amplitude: *amplitude,
                center: *center,
                width: *width,
                ..base
            },
            Profile::Bump {
                amplitude,
                center,
                radius,
                power: 2,
            } => InitSection {
                kind: InitKind::Bump,
                amplitude: *amplitude,
                center: *center,
                radius: *radius,
                ..base
            },
            Profile::Sum(parts) => match parts.as_slice() {
                [Profile::Bump {
                    amplitude: a1,
                    center: c1,
                    radius: r1,
                    power: 2,
                }, Profile::Bump {
                    amplitude: a2,
                    center: c2,
                    radius: r2,
                    power: 2,
                }] if a1 == a2 && r1 == r2 => InitSection {
                    kind: InitKind::TwoBumps,
                    amplitude: *a1,
                    center: 0.5 * (c1 + c2),
                    separation: 0.5 * (c2 - c1),
                    radius: *r1,
                    ..base
                },
                _ => return None,
            },
            _ => return None,
        };
        Some(InitSection { velocity, ..section })
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

/// 1-based column of `part` (a subslice of `line`).
fn column_of(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_round_trips_through_the_setter() {
        let cfg = Config::default();
        let entries = cfg.entries();
        assert_eq!(entries.len(), Config::KEYS.len());
        let mut copy = Config::default();
        for (key, value) in entries {
            copy.assign(key, &value).expect("known key").expect("own output parses");
        }
        assert_eq!(copy, cfg);
    }

    #[test]
    fn scenario_defaults_rebuild_the_core_data() {
        for s in Scenario::ALL {
            let cfg = Config::for_scenario(s);
            let exp = cfg.experiment(s).unwrap();
            assert_eq!(exp, ExperimentConfig::default_for(s), "{}", s.name());
        }
    }

    #[test]
    fn positions_point_at_the_offending_token() {
        let err = Config::parse("nl.p = 3\n  grid.dz = 1\n").unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
        let err = Config::parse("grid.dx =  abc").unwrap_err();
        assert_eq!((err.line, err.col), (1, 12));
        let err = Config::parse("grid.dx").unwrap_err();
        assert_eq!((err.line, err.col), (1, 1));
        let err = Config::parse("nl.p = 3\nnl.p = 4").unwrap_err();
        assert_eq!(err.line, 2);
    }
}

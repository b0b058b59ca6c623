//! Energy functionals and flux identities evaluated on discrete states.
//!
//! With `a = u_x - u_t`, `b = u_x + u_t` and the signed potential
//! `P(u) = s |u|^(p+1)/(p+1)`:
//!
//! ```text
//! e_+ = a²/4 + P/2      g_+ = -a²/4 + P/2      d/dt e_+ = d/dx g_+
//! e_- = b²/4 + P/2      g_- = +b²/4 - P/2      d/dt e_- = d/dx g_-
//! ```
//!
//! so `∮ e dx + g dt = 0` around any closed curve. The streaming monitors in
//! this module ([`FluxLoop`], [`TrapezoidMonitor`], [`VirialMonitor`],
//! [`MorawetzAccumulator`]) are [`Observer`](crate::Observer)s, so a long
//! run never needs to keep its whole trajectory in memory; the functions
//! taking a [`Trajectory`](crate::wave::Trajectory) replay a recorded one.

mod cone;
mod densities;
mod flux;
mod interaction;
mod virial;

pub use cone::{light_cone_energy, light_cone_energy_at, morawetz_accumulator, MorawetzAccumulator};
pub use densities::{
    compute_densities, conserved_pair, densities_of_slice, integrate_interval, interval_energy,
    ConservedQuantities, Density, EnergyDensities,
};
pub use flux::{
    flux_loop, trapezoid_check, EdgeKind, EdgeReport, FluxLoop, FluxReport, PolygonPath, TrapezoidMonitor,
    TrapezoidReport, Which,
};
pub use interaction::{
    interaction_q, pairwise_distance_brute_force, pairwise_distance_prefix_sum, InteractionReport, QMethod,
};
pub use virial::{virial_check, VirialMonitor, VirialReport};

use crate::wave::{FieldState, GridSpec, Slice};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiagnosticError {
    #[error("path leaves the recorded space-time domain")]
    PathOutsideDomain,
    #[error("ray x = t - eta leaves the recorded domain")]
    RayOutsideDomain,
    #[error("invalid path: {0}")]
    InvalidPath(&'static str),
    #[error("no recorded slice at step {step}")]
    MissingSlice { step: usize },
    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument {
        field: &'static str,
        reason: &'static str,
    },
}

pub(crate) fn slice_of<'a>(grid: &GridSpec, state: &'a FieldState) -> Slice<'a> {
    let dt = grid.dt();
    Slice {
        t: state.t,
        step: crate::math::round(state.t / dt) as usize,
        x0: grid.x_min(),
        dx: grid.dx(),
        u: &state.u,
        v: &state.v,
    }
}

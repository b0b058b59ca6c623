//! Numerical laboratory for the one-dimensional semilinear wave equation
//!
//! ```text
//! u_tt - u_xx = -s |u|^(p-1) u,     s = +1 (defocusing), -1 (focusing), 0 (linear)
//! ```
//!
//! The crate is `no_std` (it needs `alloc`) and contains only computation:
//!
//! - [`wave`]: grids, initial data, the leapfrog solver and a Picard
//!   iteration of the integral (d'Alembert) form used as an oracle.
//! - [`energy`]: left/right-going energy densities, interval energies,
//!   closed-curve flux integrals, the trapezoid law, light-cone energy,
//!   the interaction functional `Q(t)`, the virial identity and the
//!   Morawetz accumulator.
//! - [`selfsimilar`]: the profile ODE of self-similar solutions
//!   `u = x^(-beta) f(t/x)`, its semi-conservation law and the lift back to
//!   PDE fields.
//! - [`experiments`]: scenarios binding the solver and diagnostics to the
//!   long-time claims (decay, tail, retraction, focusing, concentration).
//!
//! File formats, configuration and the command line live in the `wavelab`
//! crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod energy;
pub mod experiments;
pub(crate) mod math;
pub mod selfsimilar;
pub mod wave;

pub use wave::{
    FieldState, GridSpec, InitialData, Nonlinearity, Observer, Profile, Schedule, Sign, Solver,
    VelocityData, WaveError,
};

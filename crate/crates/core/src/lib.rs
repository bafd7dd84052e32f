//! Numerical laboratory for infinitely renormalizable contracting Lorenz maps.
//!
//! The crate builds maps from the two-parameter standard family, locates and
//! iterates renormalizations, constructs the Cantor-attractor level structure
//! and its physical measure, estimates slow-recurrence sums and Lyapunov
//! exponents at the critical values, and probes stochastic stability under
//! additive noise.
//!
//! Everything is plain double precision with seeded randomness; all results
//! are pure functions of their inputs.

pub mod attractor;
pub mod interval;
pub mod lyapunov;
pub mod map;
pub mod measure;
pub mod renorm;
pub mod stochastic;

pub use interval::Interval;
pub use map::{
    itinerary_of, restrict_rescale, IteratedMap, ItineraryWord, LorenzMap, MapError,
    RestrictedMap, Side, StandardMap, COLLISION_TOL,
};

/// Format a float with 17 significant digits, which round-trips f64 exactly.
pub fn fmt_g17(x: f64) -> String {
    format!("{:.16e}", x)
}

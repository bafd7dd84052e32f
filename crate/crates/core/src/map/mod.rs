//! Contracting Lorenz maps: evaluation, derivatives, itineraries.
//!
//! A Lorenz map on `[0,1]` is increasing on each side of an interior singular
//! point `c`, fixes the endpoints, and has one-sided derivatives vanishing at
//! `c`. Three realizations are provided:
//!
//! * [`StandardMap`] — the closed-form two-parameter family with power-law
//!   branches,
//! * [`IteratedMap`] — an affinely rescaled first-return map of a
//!   `StandardMap` on a window (the result of renormalizing),
//! * [`RestrictedMap`] — a map conjugated into `[m, 1-m]` so that its image
//!   stays strictly inside `(0,1)`, leaving room for additive noise.
//!
//! Orbits that come within [`COLLISION_TOL`] of the singular point are never
//! silently assigned a side; operations either take an explicit side flag or
//! report the collision.

mod iterated;
mod kv;
mod restricted;
mod standard;

pub use iterated::{IteratedMap, Rescalable};
pub use kv::MapDef;
pub use restricted::{restrict_rescale, RestrictedMap};
pub use standard::StandardMap;

use std::fmt;
use std::str::FromStr;

/// Orbits entering this absolute distance of the singular point are treated
/// as collisions: the side is ambiguous at double precision.
pub const COLLISION_TOL: f64 = 1e-14;

/// Windows shorter than this are below the double-precision working range
/// (about 1e3 times machine epsilon).
pub const PRECISION_CAP: f64 = 1e3 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn symbol(self) -> u8 {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    pub fn from_symbol(s: u8) -> Side {
        if s == 0 {
            Side::Left
        } else {
            Side::Right
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("orbit within collision tolerance of the singular point at step {step}")]
    SingularPointHit { step: usize },
    #[error("derivative product left the representable range (log sum {log_sum})")]
    Underflow { log_sum: f64 },
    #[error("invalid map parameters: {0}")]
    InvalidParams(String),
    #[error("margin {margin} too large: rescaled image not strictly inside (0,1)")]
    MarginTooLarge { margin: f64 },
    #[error("window of length {len:e} is below the precision cap")]
    DegenerateWindow { len: f64 },
}

/// Common behavior of the map realizations.
///
/// `eval_side`, `log_deriv_side` and `schwarzian_side` evaluate the branch
/// selected by `side`; the flag matters only when `x` is within the collision
/// tolerance of the singular point, where it picks the one-sided limit.
/// Iterated realizations can hit the singular point at interior steps, hence
/// the `Result`.
pub trait LorenzMap {
    fn singular_point(&self) -> f64;

    fn eval_side(&self, x: f64, side: Side) -> Result<f64, MapError>;

    /// Natural log of the branch derivative. Returns `-inf` exactly at the
    /// singular point, where the derivative vanishes.
    fn log_deriv_side(&self, x: f64, side: Side) -> Result<f64, MapError>;

    fn schwarzian_side(&self, x: f64, side: Side) -> Result<f64, MapError>;

    /// Closed-form branch inverse if the realization has one.
    /// `None` means "solve it numerically"; `Some(None)` means `y` is outside
    /// the branch range.
    fn branch_inverse_closed_form(&self, _y: f64, _side: Side) -> Option<Option<f64>> {
        None
    }

    /// Side of the singular point, or `None` within the collision tolerance.
    fn side_of(&self, x: f64) -> Option<Side> {
        let d = x - self.singular_point();
        if d.abs() <= COLLISION_TOL {
            None
        } else if d < 0.0 {
            Some(Side::Left)
        } else {
            Some(Side::Right)
        }
    }

    fn eval(&self, x: f64) -> Result<f64, MapError> {
        let side = self
            .side_of(x)
            .ok_or(MapError::SingularPointHit { step: 0 })?;
        self.eval_side(x, side)
    }

    fn log_deriv(&self, x: f64) -> Result<f64, MapError> {
        let side = self
            .side_of(x)
            .ok_or(MapError::SingularPointHit { step: 0 })?;
        self.log_deriv_side(x, side)
    }

    fn deriv(&self, x: f64) -> Result<f64, MapError> {
        let ld = self.log_deriv(x)?;
        if ld <= f64::MIN_POSITIVE.ln() {
            return Err(MapError::Underflow { log_sum: ld });
        }
        Ok(ld.exp())
    }

    fn schwarzian(&self, x: f64) -> Result<f64, MapError> {
        let side = self
            .side_of(x)
            .ok_or(MapError::SingularPointHit { step: 0 })?;
        self.schwarzian_side(x, side)
    }

    /// One-sided limits of the map at the singular point: `(c1_minus, c1_plus)`.
    fn critical_values(&self) -> (f64, f64) {
        let c = self.singular_point();
        let minus = self.eval_side(c, Side::Left).expect("limit at c from the left");
        let plus = self.eval_side(c, Side::Right).expect("limit at c from the right");
        (minus, plus)
    }

    /// `sum_{i<n} log Df(f^i(x))`, accumulated term by term in log space.
    fn log_deriv_sum(&self, x: f64, n: usize) -> Result<f64, MapError> {
        let mut y = x;
        let mut acc = 0.0;
        for step in 0..n {
            let side = self
                .side_of(y)
                .ok_or(MapError::SingularPointHit { step })?;
            acc += self.log_deriv_side(y, side)?;
            y = self.eval_side(y, side).map_err(|e| at_step(e, step))?;
        }
        Ok(acc)
    }
}

fn at_step(e: MapError, step: usize) -> MapError {
    match e {
        MapError::SingularPointHit { .. } => MapError::SingularPointHit { step },
        other => other,
    }
}

/// Where an orbit starts: a point, or the singular point approached from one side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OrbitStart {
    Point(f64),
    /// Start at the singular point with the given side; the first iterate is
    /// the corresponding critical value.
    Critical(Side),
}

impl OrbitStart {
    pub fn position<M: LorenzMap + ?Sized>(&self, map: &M) -> f64 {
        match *self {
            OrbitStart::Point(x) => x,
            OrbitStart::Critical(_) => map.singular_point(),
        }
    }

    pub fn forced_side(&self) -> Option<Side> {
        match *self {
            OrbitStart::Point(_) => None,
            OrbitStart::Critical(s) => Some(s),
        }
    }
}

/// Symbol sequence of an orbit: 0 for `(0, c)`, 1 for `(c, 1)`.
///
/// `truncated` marks orbits that entered the collision tolerance before the
/// requested length; symbols past the collision are undefined and omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItineraryWord {
    pub symbols: Vec<Side>,
    pub truncated: bool,
}

impl ItineraryWord {
    pub fn new(symbols: Vec<Side>) -> Self {
        ItineraryWord {
            symbols,
            truncated: false,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn count_of(&self, side: Side) -> usize {
        self.symbols.iter().filter(|&&s| s == side).count()
    }
}

impl fmt::Display for ItineraryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.symbol())?;
        }
        if self.truncated {
            write!(f, "*")?;
        }
        Ok(())
    }
}

impl FromStr for ItineraryWord {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut symbols = Vec::with_capacity(s.len());
        let mut truncated = false;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => symbols.push(Side::Left),
                '1' => symbols.push(Side::Right),
                '*' if i == s.len() - 1 => truncated = true,
                other => return Err(format!("invalid itinerary symbol {other:?}")),
            }
        }
        Ok(ItineraryWord { symbols, truncated })
    }
}

/// Itinerary of the orbit of `start` for up to `n` symbols.
pub fn itinerary_of<M: LorenzMap + ?Sized>(map: &M, start: OrbitStart, n: usize) -> ItineraryWord {
    let mut word = ItineraryWord {
        symbols: Vec::with_capacity(n),
        truncated: false,
    };
    let mut x = start.position(map);
    let mut forced = start.forced_side();
    for _ in 0..n {
        let side = match map.side_of(x) {
            Some(s) => s,
            None => match forced.take() {
                Some(s) => s,
                None => {
                    word.truncated = true;
                    return word;
                }
            },
        };
        word.symbols.push(side);
        match map.eval_side(x, side) {
            Ok(y) => x = y,
            Err(_) => {
                word.truncated = true;
                return word;
            }
        }
        forced = None;
    }
    word
}

/// Forward orbit `x, f(x), ..., f^n(x)` (length `n + 1`), or the partial orbit
/// with the index of the colliding step.
pub fn orbit_of<M: LorenzMap + ?Sized>(
    map: &M,
    start: OrbitStart,
    n: usize,
) -> (Vec<f64>, Option<usize>) {
    let mut states = Vec::with_capacity(n + 1);
    let mut x = start.position(map);
    states.push(x);
    let mut forced = start.forced_side();
    for step in 0..n {
        let side = match map.side_of(x) {
            Some(s) => s,
            None => match forced.take() {
                Some(s) => s,
                None => return (states, Some(step)),
            },
        };
        match map.eval_side(x, side) {
            Ok(y) => {
                x = y;
                states.push(x);
            }
            Err(_) => return (states, Some(step)),
        }
        forced = None;
    }
    (states, None)
}

//! The closed-form standard family of contracting Lorenz maps.

use super::{LorenzMap, MapError, Side};

/// A standard-family contracting Lorenz map on `[0,1]`:
///
/// ```text
/// f(x) = u * (1 - ((c-x)/c)^alpha)          for x < c,
/// f(x) = (1-v) + v * ((x-c)/(1-c))^alpha    for x > c.
/// ```
///
/// Both branches are increasing, `f(0) = 0`, `f(1) = 1`, the one-sided limits
/// at `c` are `u` and `1-v`, and both branch derivatives vanish at `c` like
/// `|x-c|^(alpha-1)` (alpha > 1). Non-triviality `1-v < c < u` is required, and
/// together with `alpha > 1` it makes both endpoint fixed points repelling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardMap {
    u: f64,
    v: f64,
    c: f64,
    alpha: f64,
}

impl StandardMap {
    pub fn new(u: f64, v: f64, c: f64, alpha: f64) -> Result<Self, MapError> {
        let bad = |reason: String| Err(MapError::InvalidParams(reason));
        if !(u.is_finite() && v.is_finite() && c.is_finite() && alpha.is_finite()) {
            return bad("non-finite parameter".into());
        }
        if !(0.0 < u && u < 1.0) {
            return bad(format!("u = {u} outside (0,1)"));
        }
        if !(0.0 < v && v < 1.0) {
            return bad(format!("v = {v} outside (0,1)"));
        }
        if !(0.0 < c && c < 1.0) {
            return bad(format!("c = {c} outside (0,1)"));
        }
        if alpha <= 1.0 {
            return bad(format!("alpha = {alpha} not > 1"));
        }
        if !(1.0 - v < c && c < u) {
            return bad(format!("trivial map: need 1-v < c < u, got 1-v = {}, c = {c}, u = {u}", 1.0 - v));
        }
        // Implied by non-triviality and alpha > 1, but part of the contract.
        if u * alpha / c <= 1.0 || v * alpha / (1.0 - c) <= 1.0 {
            return bad("endpoint fixed points not repelling".into());
        }
        Ok(StandardMap { u, v, c, alpha })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Derivative at the left fixed point 0: `u*alpha/c > 1`.
    pub fn deriv_at_zero(&self) -> f64 {
        self.u * self.alpha / self.c
    }

    /// Derivative at the right fixed point 1: `v*alpha/(1-c) > 1`.
    pub fn deriv_at_one(&self) -> f64 {
        self.v * self.alpha / (1.0 - self.c)
    }

    /// Closed-form inverse of one branch. `None` if `y` is outside the branch range.
    pub fn branch_inverse(&self, y: f64, side: Side) -> Option<f64> {
        match side {
            Side::Left => {
                if !(0.0 <= y && y <= self.u) {
                    return None;
                }
                let s = ((self.u - y) / self.u).powf(1.0 / self.alpha);
                Some(self.c * (1.0 - s))
            }
            Side::Right => {
                if !(1.0 - self.v <= y && y <= 1.0) {
                    return None;
                }
                let t = ((y - (1.0 - self.v)) / self.v).powf(1.0 / self.alpha);
                Some(self.c + (1.0 - self.c) * t)
            }
        }
    }

    /// Serialize to the line-oriented key=value block.
    pub fn to_kv_block(&self) -> String {
        format!(
            "family=standard\nu={}\nv={}\nc={}\nalpha={}\n",
            crate::fmt_g17(self.u),
            crate::fmt_g17(self.v),
            crate::fmt_g17(self.c),
            crate::fmt_g17(self.alpha)
        )
    }
}

impl LorenzMap for StandardMap {
    fn singular_point(&self) -> f64 {
        self.c
    }

    fn eval_side(&self, x: f64, side: Side) -> Result<f64, MapError> {
        Ok(match side {
            Side::Left => {
                let s = (self.c - x) / self.c;
                self.u * (1.0 - s.powf(self.alpha))
            }
            Side::Right => {
                let t = (x - self.c) / (1.0 - self.c);
                (1.0 - self.v) + self.v * t.powf(self.alpha)
            }
        })
    }

    fn log_deriv_side(&self, x: f64, side: Side) -> Result<f64, MapError> {
        // Df = u*alpha/c * s^(alpha-1) on the left, v*alpha/(1-c) * t^(alpha-1)
        // on the right; logs keep deep-orbit products representable.
        Ok(match side {
            Side::Left => {
                let s = ((self.c - x) / self.c).max(0.0);
                (self.u * self.alpha / self.c).ln() + (self.alpha - 1.0) * s.ln()
            }
            Side::Right => {
                let t = ((x - self.c) / (1.0 - self.c)).max(0.0);
                (self.v * self.alpha / (1.0 - self.c)).ln() + (self.alpha - 1.0) * t.ln()
            }
        })
    }

    fn schwarzian_side(&self, x: f64, side: Side) -> Result<f64, MapError> {
        // Both branches are affine conjugates of a pure power, so
        // Sf(x) = -(alpha^2 - 1) / (2 (x-c)^2) exactly.
        let _ = side;
        let d = x - self.c;
        Ok(-(self.alpha * self.alpha - 1.0) / (2.0 * d * d))
    }

    fn branch_inverse_closed_form(&self, y: f64, side: Side) -> Option<Option<f64>> {
        Some(self.branch_inverse(y, side))
    }
}

//! Rescaled first-return maps: the composed-iterate realization.

use super::{LorenzMap, MapError, Side, StandardMap, PRECISION_CAP};
use crate::interval::Interval;

/// The map `A^{-1} . P . A` on `[0,1]`, where `A` is the increasing affine
/// bijection onto `window` and `P` applies `base` `left_time` times left of
/// the rescaled singular point and `right_time` times right of it.
///
/// Renormalizations of renormalizations flatten into this same shape: windows
/// compose affinely and return times compose additively, so a single
/// descriptor over the base map represents any depth of the cascade.
#[derive(Clone, Debug, PartialEq)]
pub struct IteratedMap {
    base: StandardMap,
    window: Interval,
    left_time: u64,
    right_time: u64,
}

impl IteratedMap {
    pub fn new(
        base: StandardMap,
        window: Interval,
        left_time: u64,
        right_time: u64,
    ) -> Result<Self, MapError> {
        if window.len() < PRECISION_CAP {
            return Err(MapError::DegenerateWindow { len: window.len() });
        }
        if !(0.0 < window.lo && window.hi < 1.0) {
            return Err(MapError::InvalidParams(format!(
                "window [{}, {}] not inside (0,1)",
                window.lo, window.hi
            )));
        }
        if !(window.lo < base.c() && base.c() < window.hi) {
            return Err(MapError::InvalidParams(
                "window does not straddle the singular point".into(),
            ));
        }
        if left_time < 2 || right_time < 2 {
            return Err(MapError::InvalidParams(
                "iterate times must be at least 2".into(),
            ));
        }
        Ok(IteratedMap {
            base,
            window,
            left_time,
            right_time,
        })
    }

    pub fn base(&self) -> &StandardMap {
        &self.base
    }

    pub fn window(&self) -> Interval {
        self.window
    }

    pub fn left_time(&self) -> u64 {
        self.left_time
    }

    pub fn right_time(&self) -> u64 {
        self.right_time
    }

    fn time_for(&self, side: Side) -> u64 {
        match side {
            Side::Left => self.left_time,
            Side::Right => self.right_time,
        }
    }

    /// Iterate the base map from `y0` for `time` steps, forcing the branch of
    /// the first step (the caller has already resolved the side at the
    /// descriptor level). Later steps must stay clear of the singular point.
    fn base_orbit_end(&self, y0: f64, first_side: Side, time: u64) -> Result<f64, MapError> {
        let mut y = self.base.eval_side(y0, first_side)?;
        for step in 1..time {
            let side = self
                .base
                .side_of(y)
                .ok_or(MapError::SingularPointHit { step: step as usize })?;
            y = self.base.eval_side(y, side)?;
        }
        Ok(y)
    }

    pub fn to_kv_block(&self) -> String {
        format!(
            "family=iterated\nu={}\nv={}\nc={}\nalpha={}\nwindow_lo={}\nwindow_hi={}\nleft_time={}\nright_time={}\n",
            crate::fmt_g17(self.base.u()),
            crate::fmt_g17(self.base.v()),
            crate::fmt_g17(self.base.c()),
            crate::fmt_g17(self.base.alpha()),
            crate::fmt_g17(self.window.lo),
            crate::fmt_g17(self.window.hi),
            self.left_time,
            self.right_time
        )
    }
}

impl LorenzMap for IteratedMap {
    fn singular_point(&self) -> f64 {
        self.window.to_unit(self.base.c())
    }

    fn eval_side(&self, x: f64, side: Side) -> Result<f64, MapError> {
        let y0 = self.window.from_unit(x);
        let y = self.base_orbit_end(y0, side, self.time_for(side))?;
        Ok(self.window.to_unit(y))
    }

    fn log_deriv_side(&self, x: f64, side: Side) -> Result<f64, MapError> {
        // D(A^{-1} . f^k . A) = Df^k at the rescaled point: the affine factors
        // cancel because the same window is used on both ends.
        let mut y = self.window.from_unit(x);
        let mut acc = self.base.log_deriv_side(y, side)?;
        y = self.base.eval_side(y, side)?;
        for step in 1..self.time_for(side) {
            let s = self
                .base
                .side_of(y)
                .ok_or(MapError::SingularPointHit { step: step as usize })?;
            acc += self.base.log_deriv_side(y, s)?;
            y = self.base.eval_side(y, s)?;
        }
        Ok(acc)
    }

    fn schwarzian_side(&self, x: f64, side: Side) -> Result<f64, MapError> {
        // S(f^k)(y) = sum_i Sf(y_i) * (Df^i(y))^2, then the affine conjugacy
        // contributes the factor |window|^2. Derivative powers are carried in
        // log space; every term is negative, so the sum stays negative.
        let mut y = self.window.from_unit(x);
        let mut log_dfi = 0.0_f64;
        let mut acc = 0.0;
        let time = self.time_for(side);
        let mut s = side;
        for step in 0..time {
            acc += self.base.schwarzian_side(y, s)? * (2.0 * log_dfi).exp();
            log_dfi += self.base.log_deriv_side(y, s)?;
            y = self.base.eval_side(y, s)?;
            if step + 1 < time {
                s = self
                    .base
                    .side_of(y)
                    .ok_or(MapError::SingularPointHit { step: step as usize + 1 })?;
            }
        }
        Ok(acc * self.window.len() * self.window.len())
    }
}

/// Maps that can absorb a further first-return window into a flat descriptor.
pub trait Rescalable: LorenzMap {
    /// Descriptor of the first-return map on `window` (given in this map's
    /// coordinates) rescaled to `[0,1]`. `word_minus` and `word_plus` are the
    /// return words of the two sides over this map's branches; their symbol
    /// counts convert return times down to the base map.
    fn first_return_descriptor(
        &self,
        window: Interval,
        word_minus: &super::ItineraryWord,
        word_plus: &super::ItineraryWord,
    ) -> Result<IteratedMap, MapError>;
}

impl Rescalable for StandardMap {
    fn first_return_descriptor(
        &self,
        window: Interval,
        word_minus: &super::ItineraryWord,
        word_plus: &super::ItineraryWord,
    ) -> Result<IteratedMap, MapError> {
        IteratedMap::new(
            *self,
            window,
            word_minus.len() as u64,
            word_plus.len() as u64,
        )
    }
}

impl Rescalable for IteratedMap {
    fn first_return_descriptor(
        &self,
        window: Interval,
        word_minus: &super::ItineraryWord,
        word_plus: &super::ItineraryWord,
    ) -> Result<IteratedMap, MapError> {
        // One application of this map costs `left_time` or `right_time` base
        // steps depending on the side occupied before the step; a return word
        // converts symbol counts into base-level return times.
        let cost = |w: &super::ItineraryWord| -> Option<u64> {
            let zeros = w.count_of(Side::Left) as u64;
            let ones = w.count_of(Side::Right) as u64;
            zeros
                .checked_mul(self.left_time)?
                .checked_add(ones.checked_mul(self.right_time)?)
        };
        let lt = cost(word_minus)
            .ok_or_else(|| MapError::InvalidParams("return time overflow".into()))?;
        let rt = cost(word_plus)
            .ok_or_else(|| MapError::InvalidParams("return time overflow".into()))?;
        let base_window = Interval::new(
            self.window.from_unit(window.lo),
            self.window.from_unit(window.hi),
        );
        IteratedMap::new(self.base, base_window, lt, rt)
    }
}


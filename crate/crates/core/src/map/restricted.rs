//! Restriction to `[m, 1-m]` rescaled back to the unit interval.
//!
//! The noise experiments need a map whose image stays strictly inside `(0,1)`
//! so that additive perturbations up to some budget cannot escape. Restricting
//! to `[m, 1-m]` and rescaling achieves this whenever both endpoints repel:
//! the conjugated map `g = B^{-1} . f . B` with `B(x) = m + (1-2m) x` has
//! `closure(g([0,1] \ {c'}))` inside `(0,1)`, and exponents, itineraries and
//! measures transport exactly through the affine conjugacy.

use super::{LorenzMap, MapError, Side};
use crate::interval::Interval;

#[derive(Clone, Debug)]
pub struct RestrictedMap<M: LorenzMap> {
    base: M,
    margin: f64,
    /// Rescaled singular point `(c - m) / (1 - 2m)`.
    c: f64,
    /// Closure of the image of `g`.
    image: Interval,
    /// Distance of the image closure from `{0, 1}`: the noise budget.
    epsilon0: f64,
}

/// Build the restricted-rescaled map, checking that the image of `[m, 1-m]`
/// stays strictly inside `(m, 1-m)`.
pub fn restrict_rescale<M: LorenzMap>(base: M, margin: f64) -> Result<RestrictedMap<M>, MapError> {
    if !(margin > 0.0 && margin < 0.5) {
        return Err(MapError::MarginTooLarge { margin });
    }
    let scale = 1.0 - 2.0 * margin;
    let b_inv = |y: f64| (y - margin) / scale;

    let f_m = base.eval(margin)?;
    let f_one_m = base.eval(1.0 - margin)?;
    if f_m <= margin || f_one_m >= 1.0 - margin {
        return Err(MapError::MarginTooLarge { margin });
    }
    let (c1m, c1p) = base.critical_values();

    // The four branch-limit values of g determine the image closure.
    let g0 = b_inv(f_m);
    let g_c_minus = b_inv(c1m);
    let g_c_plus = b_inv(c1p);
    let g1 = b_inv(f_one_m);
    let inf_img = g0.min(g_c_plus);
    let sup_img = g_c_minus.max(g1);
    if !(inf_img > 0.0 && sup_img < 1.0) {
        return Err(MapError::MarginTooLarge { margin });
    }

    let c = (base.singular_point() - margin) / scale;
    Ok(RestrictedMap {
        base,
        margin,
        c,
        image: Interval::new(inf_img, sup_img),
        epsilon0: inf_img.min(1.0 - sup_img),
    })
}

impl<M: LorenzMap> RestrictedMap<M> {
    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Additive-noise budget: perturbations up to this amplitude keep every
    /// state inside `[0,1]` with no clamping.
    pub fn noise_budget(&self) -> f64 {
        self.epsilon0
    }

    pub fn image(&self) -> Interval {
        self.image
    }

    /// `B(x) = m + (1-2m) x`, mapping unit coordinates to base coordinates.
    pub fn to_base_coords(&self, x: f64) -> f64 {
        self.margin + (1.0 - 2.0 * self.margin) * x
    }

    /// `B^{-1}`, mapping base coordinates to unit coordinates.
    pub fn from_base_coords(&self, y: f64) -> f64 {
        (y - self.margin) / (1.0 - 2.0 * self.margin)
    }
}

impl<M: LorenzMap> LorenzMap for RestrictedMap<M> {
    fn singular_point(&self) -> f64 {
        self.c
    }

    fn eval_side(&self, x: f64, side: Side) -> Result<f64, MapError> {
        let y = self.base.eval_side(self.to_base_coords(x), side)?;
        Ok(self.from_base_coords(y))
    }

    fn log_deriv_side(&self, x: f64, side: Side) -> Result<f64, MapError> {
        // Dg(x) = Df(B(x)); the affine factors cancel.
        self.base.log_deriv_side(self.to_base_coords(x), side)
    }

    fn schwarzian_side(&self, x: f64, side: Side) -> Result<f64, MapError> {
        let scale = 1.0 - 2.0 * self.margin;
        Ok(self.base.schwarzian_side(self.to_base_coords(x), side)? * scale * scale)
    }
}

//! Branches of iterates: location by nested pullbacks, word evaluation,
//! branch inverses.

use crate::interval::Interval;
use crate::map::{ItineraryWord, LorenzMap, MapError, Side};

/// Solve `eval_side(x, side) = y` on the closed branch domain.
///
/// Uses the closed form when the realization has one, otherwise bisection on
/// the monotone branch down to float exhaustion. `Ok(None)` means `y` lies
/// outside the branch range.
pub fn branch_inverse<M: LorenzMap + ?Sized>(
    map: &M,
    y: f64,
    side: Side,
) -> Result<Option<f64>, MapError> {
    if let Some(res) = map.branch_inverse_closed_form(y, side) {
        return Ok(res);
    }
    let c = map.singular_point();
    let (mut lo, mut hi) = match side {
        Side::Left => (0.0, c),
        Side::Right => (c, 1.0),
    };
    let flo = map.eval_side(lo, side)?;
    let fhi = map.eval_side(hi, side)?;
    if y < flo || y > fhi {
        return Ok(None);
    }
    if y == flo {
        return Ok(Some(lo));
    }
    if y == fhi {
        return Ok(Some(hi));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if map.eval_side(mid, side)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Range of one branch as an interval (the branches are increasing).
fn branch_image<M: LorenzMap + ?Sized>(map: &M, side: Side) -> Result<Interval, MapError> {
    let c = map.singular_point();
    let (lo, hi) = match side {
        Side::Left => (0.0, c),
        Side::Right => (c, 1.0),
    };
    Ok(Interval::new(
        map.eval_side(lo, side)?,
        map.eval_side(hi, side)?,
    ))
}

/// Maximal closed interval whose itinerary starts with `word`, located by
/// pulling `[0,1]` back through the branch inverses in reverse word order.
/// `Ok(None)` when no branch of the iterate realizes the word.
pub fn locate_branch<M: LorenzMap + ?Sized>(
    map: &M,
    word: &ItineraryWord,
) -> Result<Option<Interval>, MapError> {
    let c = map.singular_point();
    let mut iv = Interval::UNIT;
    for &side in word.symbols.iter().rev() {
        let dom = match side {
            Side::Left => Interval::new(0.0, c),
            Side::Right => Interval::new(c, 1.0),
        };
        let img = branch_image(map, side)?;
        let Some(clip) = iv.intersect(&img) else {
            return Ok(None);
        };
        let lo = branch_inverse(map, clip.lo, side)?;
        let hi = branch_inverse(map, clip.hi, side)?;
        match (lo, hi) {
            (Some(lo), Some(hi)) if lo <= hi => {
                iv = match dom.intersect(&Interval::new(lo, hi)) {
                    Some(x) => x,
                    None => return Ok(None),
                }
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(iv))
}

/// Apply the branch composition prescribed by `word`: at step `j` the branch
/// `word[j]` is used regardless of where the point lies, which evaluates the
/// one-sided limit of `f^{|word|}` on the closure of the branch interval.
pub fn eval_word<M: LorenzMap + ?Sized>(
    map: &M,
    x: f64,
    word: &ItineraryWord,
) -> Result<f64, MapError> {
    let mut y = x;
    for &side in &word.symbols {
        y = map.eval_side(y, side)?;
    }
    Ok(y)
}

/// Endpoint orbits of an interval pushed along a word: returns the hulls of
/// `(f^k(lo), f^k(hi))` for `k = 1 ..= word.len()`.
pub fn push_interval_along_word<M: LorenzMap + ?Sized>(
    map: &M,
    iv: Interval,
    word: &ItineraryWord,
) -> Result<Vec<Interval>, MapError> {
    let mut out = Vec::with_capacity(word.len());
    let (mut x, mut y) = (iv.lo, iv.hi);
    for &side in &word.symbols {
        x = map.eval_side(x, side)?;
        y = map.eval_side(y, side)?;
        out.push(Interval::hull(x, y));
    }
    Ok(out)
}

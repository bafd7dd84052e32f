//! Renormalization of contracting Lorenz maps.
//!
//! A map is renormalizable when the first return map to a window `C` around
//! the singular point is, after affine rescaling, again a non-trivial Lorenz
//! map. The window's boundary points are periodic; this module locates them
//! as roots of `f^k - id` on itinerary branches, validates the return
//! structure, and produces flattened descriptors for the renormalized maps.

pub mod branch;
mod tuner;

pub use tuner::{certify_cascade, tune_parameters, TuneError, TuneOptions, TuneOutcome};

use crate::interval::Interval;
use crate::map::{
    itinerary_of, IteratedMap, ItineraryWord, LorenzMap, MapError, OrbitStart, Rescalable, Side,
};
use branch::{branch_inverse, eval_word, locate_branch, push_interval_along_word};

/// Periodic-point residual accepted by the boundary root finder.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-12;

/// The word pair of a renormalization: `word_minus` is the return word of the
/// left half of the window (starts with 0), `word_plus` of the right half
/// (starts with 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialType {
    word_minus: ItineraryWord,
    word_plus: ItineraryWord,
}

impl CombinatorialType {
    pub fn new(word_minus: ItineraryWord, word_plus: ItineraryWord) -> Result<Self, String> {
        if word_minus.len() < 2 || word_plus.len() < 2 {
            return Err("return words must have length at least 2".into());
        }
        if word_minus.symbols[0] != Side::Left {
            return Err("left return word must start with 0".into());
        }
        if word_plus.symbols[0] != Side::Right {
            return Err("right return word must start with 1".into());
        }
        if word_minus.truncated || word_plus.truncated {
            return Err("return words must be complete".into());
        }
        Ok(CombinatorialType {
            word_minus,
            word_plus,
        })
    }

    /// Monotone type `(a, b)`: words `0 1^a` and `1 0^b`.
    pub fn monotone(a: usize, b: usize) -> Self {
        assert!(a >= 1 && b >= 1, "monotone type needs a, b >= 1");
        let mut minus = vec![Side::Left];
        minus.extend(std::iter::repeat(Side::Right).take(a));
        let mut plus = vec![Side::Right];
        plus.extend(std::iter::repeat(Side::Left).take(b));
        CombinatorialType {
            word_minus: ItineraryWord::new(minus),
            word_plus: ItineraryWord::new(plus),
        }
    }

    /// `Some((a, b))` when the words are the monotone pair `0 1^a`, `1 0^b`.
    pub fn as_monotone(&self) -> Option<(usize, usize)> {
        let a = self.word_minus.len() - 1;
        let b = self.word_plus.len() - 1;
        let is_mono = self.word_minus.symbols[1..].iter().all(|&s| s == Side::Right)
            && self.word_plus.symbols[1..].iter().all(|&s| s == Side::Left);
        if is_mono {
            Some((a, b))
        } else {
            None
        }
    }

    pub fn word_minus(&self) -> &ItineraryWord {
        &self.word_minus
    }

    pub fn word_plus(&self) -> &ItineraryWord {
        &self.word_plus
    }

    /// Return times `(|word_minus|, |word_plus|)`.
    pub fn times(&self) -> (u64, u64) {
        (self.word_minus.len() as u64, self.word_plus.len() as u64)
    }

    pub fn total_len(&self) -> usize {
        self.word_minus.len() + self.word_plus.len()
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RenormError {
    #[error("no branch of the iterate realizes the word {word}")]
    NoSuchBranch { word: String },
    #[error("no boundary root on branch {word}: return minus identity keeps one sign (margin {margin:e})")]
    NoRootInBranch { word: String, margin: f64 },
    #[error("root residual {residual:e} exceeds tolerance on branch {word}")]
    RootResidual { word: String, residual: f64 },
    #[error("boundary root itinerary differs from the requested word {word}")]
    WrongItinerary { word: String },
    #[error("boundary roots do not straddle the singular point")]
    WindowOrder,
    #[error("window exceeds the singular-point preimage interval by {margin:e}")]
    OutsidePreimages { margin: f64 },
    #[error("return is trivial: rescaled critical value misses the singular point by {margin:e}")]
    TrivialReturn { margin: f64 },
    #[error("return image escapes the window by {margin:e}")]
    ReturnEscapes { margin: f64 },
    #[error("cycle intervals overlap by {margin:e}")]
    CycleOverlap { margin: f64 },
    #[error("not renormalizable with total word length <= {max_len}")]
    NotRenormalizable { max_len: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

impl RenormError {
    /// How badly the first failing condition missed, when that is meaningful.
    /// Continuous in the map parameters near the failure boundary; used by the
    /// tuner to rank otherwise equally-deep parameter rectangles.
    pub fn margin(&self) -> f64 {
        match *self {
            RenormError::NoRootInBranch { margin, .. }
            | RenormError::OutsidePreimages { margin }
            | RenormError::TrivialReturn { margin }
            | RenormError::ReturnEscapes { margin }
            | RenormError::CycleOverlap { margin } => margin,
            _ => 1.0,
        }
    }
}

/// A certified renormalization: the window, its combinatorics, boundary-root
/// residuals, and the rescaled return map flattened over the base family.
#[derive(Clone, Debug)]
pub struct RenormResult {
    pub window: Interval,
    pub combinatorics: CombinatorialType,
    pub residual_left: f64,
    pub residual_right: f64,
    /// `A^{-1} . P . A` as a descriptor over the base standard-family map
    /// (windows compose down a cascade, so this is always base-flattened).
    pub renormalized: IteratedMap,
}

/// Root of `f^{|word|} - id` on the branch realizing `word`.
///
/// Negative Schwarzian gives at most one interior fixed point per branch, so
/// the bisection result is accepted as the root; the residual and the
/// itinerary of the root are still verified.
pub fn find_periodic_boundary<M: LorenzMap + ?Sized>(
    map: &M,
    word: &ItineraryWord,
) -> Result<f64, RenormError> {
    let no_branch = || RenormError::NoSuchBranch {
        word: word.to_string(),
    };
    let iv = locate_branch(map, word)?.ok_or_else(no_branch)?;
    let g = |x: f64| -> Result<f64, MapError> { Ok(eval_word(map, x, word)? - x) };
    let (mut lo, mut hi) = (iv.lo, iv.hi);
    let (glo, ghi) = (g(lo)?, g(hi)?);
    let root = if glo == 0.0 {
        lo
    } else if ghi == 0.0 {
        hi
    } else if glo.signum() == ghi.signum() {
        return Err(RenormError::NoRootInBranch {
            word: word.to_string(),
            margin: glo.abs().min(ghi.abs()),
        });
    } else {
        let increasing_sign = ghi > 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let gm = g(mid)?;
            if gm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (gm > 0.0) == increasing_sign {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let residual = g(root)?.abs();
    if residual > ROOT_RESIDUAL_TOL {
        return Err(RenormError::RootResidual {
            word: word.to_string(),
            residual,
        });
    }
    // interior roots must realize the word as a plain itinerary
    if root != iv.lo && root != iv.hi {
        let itin = itinerary_of(map, OrbitStart::Point(root), word.len());
        if itin.truncated || itin.symbols != word.symbols {
            return Err(RenormError::WrongItinerary {
                word: word.to_string(),
            });
        }
    }
    Ok(root)
}

/// Locate the renormalization window for the given combinatorics and certify
/// every structural condition on it.
pub fn find_renorm_interval<M: Rescalable + ?Sized>(
    map: &M,
    comb: &CombinatorialType,
) -> Result<RenormResult, RenormError> {
    let c = map.singular_point();
    let wm = comb.word_minus();
    let wp = comb.word_plus();

    let p = find_periodic_boundary(map, wm)?;
    let q = find_periodic_boundary(map, wp)?;
    if !(p < c && c < q) {
        return Err(RenormError::WindowOrder);
    }

    // any renormalization window lies between the two preimages of c
    let p0 = branch_inverse(map, c, Side::Left)?.ok_or(RenormError::WindowOrder)?;
    let q0 = branch_inverse(map, c, Side::Right)?.ok_or(RenormError::WindowOrder)?;
    if p < p0 {
        return Err(RenormError::OutsidePreimages { margin: p0 - p });
    }
    if q > q0 {
        return Err(RenormError::OutsidePreimages { margin: q - q0 });
    }

    // non-trivial nested return: C^- subset P(C^-) subset C, and mirrored
    let ret_minus = eval_word(map, c, wm)?; // one-sided limit of the return at c^-
    let ret_plus = eval_word(map, c, wp)?;
    if ret_minus <= c {
        return Err(RenormError::TrivialReturn {
            margin: (c - ret_minus).max(f64::MIN_POSITIVE),
        });
    }
    if ret_minus > q {
        return Err(RenormError::ReturnEscapes {
            margin: ret_minus - q,
        });
    }
    if ret_plus >= c {
        return Err(RenormError::TrivialReturn {
            margin: (ret_plus - c).max(f64::MIN_POSITIVE),
        });
    }
    if ret_plus < p {
        return Err(RenormError::ReturnEscapes {
            margin: p - ret_plus,
        });
    }

    // intermediate images of both window halves must have pairwise disjoint
    // interiors and stay clear of the window itself
    let window = Interval::new(p, q);
    let mut cycle: Vec<Interval> = Vec::with_capacity(comb.total_len());
    let minus_imgs = push_interval_along_word(map, Interval::new(p, c), wm)?;
    let plus_imgs = push_interval_along_word(map, Interval::new(c, q), wp)?;
    cycle.extend_from_slice(&minus_imgs[..minus_imgs.len() - 1]);
    cycle.extend_from_slice(&plus_imgs[..plus_imgs.len() - 1]);
    cycle.push(window);
    cycle.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut worst = 0.0f64;
    for pair in cycle.windows(2) {
        worst = worst.max(pair[0].hi - pair[1].lo);
    }
    if worst > 0.0 {
        return Err(RenormError::CycleOverlap { margin: worst });
    }

    let renormalized = map.first_return_descriptor(window, wm, wp)?;
    Ok(RenormResult {
        window,
        combinatorics: comb.clone(),
        residual_left: (eval_word(map, p, wm)? - p).abs(),
        residual_right: (eval_word(map, q, wp)? - q).abs(),
        renormalized,
    })
}

/// The pre-renormalization: the first return map on the window, evaluated by
/// direct iteration of the underlying map (identical arithmetic path).
pub struct PreRenorm<'a, M: LorenzMap + ?Sized> {
    map: &'a M,
    result: &'a RenormResult,
}

impl<'a, M: LorenzMap + ?Sized> PreRenorm<'a, M> {
    pub fn new(map: &'a M, result: &'a RenormResult) -> Self {
        PreRenorm { map, result }
    }

    /// `f^{a+1}` left of the singular point, `f^{b+1}` right of it.
    pub fn eval(&self, x: f64, side: Side) -> Result<f64, MapError> {
        let (ta, tb) = self.result.combinatorics.times();
        let steps = match side {
            Side::Left => ta,
            Side::Right => tb,
        };
        let mut y = self.map.eval_side(x, side)?;
        for step in 1..steps {
            let s = self
                .map
                .side_of(y)
                .ok_or(MapError::SingularPointHit { step: step as usize })?;
            y = self.map.eval_side(y, s)?;
        }
        Ok(y)
    }
}

/// The renormalized map `A^{-1} . P . A` (already built into the result).
pub fn renormalize<M: Rescalable + ?Sized>(
    _map: &M,
    result: &RenormResult,
) -> IteratedMap {
    result.renormalized.clone()
}

/// Search monotone types in increasing total word length (ties: smaller `a`)
/// and return the first renormalization found; this is the smallest type, and
/// its window is the maximal renormalization interval.
pub fn detect_type<M: Rescalable + ?Sized>(
    map: &M,
    max_len: usize,
) -> Result<RenormResult, RenormError> {
    for total in 2..=max_len.saturating_sub(2) {
        for a in 1..total {
            let b = total - a;
            match find_renorm_interval(map, &CombinatorialType::monotone(a, b)) {
                Ok(r) => return Ok(r),
                Err(RenormError::Map(e @ MapError::InvalidParams(_))) => {
                    return Err(RenormError::Map(e))
                }
                Err(_) => {}
            }
        }
    }
    Err(RenormError::NotRenormalizable { max_len })
}

#[cfg(test)]
mod tests;

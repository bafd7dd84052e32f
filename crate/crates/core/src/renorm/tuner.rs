//! Parameter tuning: drive `(u, v)` to a prescribed finite renormalization
//! cascade by adaptive rectangle subdivision with certificates.
//!
//! No monotone parameter-dependence theorem is available for the family, so
//! the search is certificate-driven: a rectangle is scored by the deepest
//! prefix of the target cascade that `detect_type` certifies at its center.
//! Within a fixed score the sets of deeper-renormalizable parameters are thin
//! strips, and a plain depth-first subdivision plateaus; rectangles therefore
//! carry a secondary key, the margin by which the first renormalization
//! condition failed, and the search alternates pops between a widest-first
//! exploration heap and a smallest-margin exploitation heap.

use super::{find_renorm_interval, CombinatorialType, RenormError, RenormResult};
use crate::map::{IteratedMap, LorenzMap, Rescalable, StandardMap};
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

#[derive(Clone, Copy, Debug)]
pub struct TuneOptions {
    /// Maximum number of certifications (center scorings).
    pub budget: usize,
    /// Stop refining once the winning rectangle's diameter is below this.
    pub diam_stop: f64,
    /// Offset from the open parameter-domain boundary for the initial rectangle.
    pub pad: f64,
}

impl Default for TuneOptions {
    fn default() -> Self {
        TuneOptions {
            budget: 100_000,
            diam_stop: 1e-10,
            pad: 1e-3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TuneOutcome {
    pub map: StandardMap,
    /// Diameter of the rectangle localizing the parameters when the search stopped.
    pub rect_diameter: f64,
    pub certifications: usize,
    /// One certified renormalization per target depth; `cascade[k].renormalized`
    /// is the level-(k+1) map flattened over the base family.
    pub cascade: Vec<RenormResult>,
}

#[derive(Clone, Debug, thiserror::Error)]
pub enum TuneError {
    #[error("tuning exhausted budget {budget} at depth {deepest} of {wanted} (best u={u}, v={v})")]
    BudgetExhausted {
        budget: usize,
        deepest: usize,
        wanted: usize,
        u: f64,
        v: f64,
    },
    #[error("invalid tuning request: {0}")]
    BadRequest(String),
}

/// A cascade level: the base map or a flattened renormalization of it.
#[derive(Clone, Debug)]
enum LevelMap {
    Base(StandardMap),
    Renormalized(IteratedMap),
}

impl LevelMap {
    fn try_type(&self, comb: &CombinatorialType) -> Result<RenormResult, RenormError> {
        match self {
            LevelMap::Base(m) => find_renorm_interval(m, comb),
            LevelMap::Renormalized(m) => find_renorm_interval(m, comb),
        }
    }
}

/// Boundary root of `eval_word - id` on the branch, or the sample argmin of
/// its absolute value when no sign change exists yet. The returned `|g|`
/// value is zero at actual roots and shrinks continuously as parameters
/// approach the root-creating tangency, which keeps the tuner's proximity
/// score free of jumps across that bifurcation.
fn root_or_proxy<M: LorenzMap + ?Sized>(
    map: &M,
    word: &crate::map::ItineraryWord,
) -> Option<(f64, f64)> {
    let iv = crate::renorm::branch::locate_branch(map, word).ok()??;
    let g = |x: f64| -> Option<f64> {
        Some(crate::renorm::branch::eval_word(map, x, word).ok()? - x)
    };
    const K: usize = 64;
    let mut prev_x = iv.lo;
    let mut prev_g = g(prev_x)?;
    let mut best = (prev_x, prev_g.abs());
    for k in 1..=K {
        let x = iv.lo + iv.len() * (k as f64) / (K as f64);
        let gx = g(x)?;
        if gx.abs() < best.1 {
            best = (x, gx.abs());
        }
        if prev_g == 0.0 || prev_g.signum() != gx.signum() {
            // bracketed: bisect to the root
            let (mut lo, mut hi) = (prev_x, x);
            let increasing = gx > prev_g;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let gm = g(mid)?;
                if gm == 0.0 {
                    return Some((mid, 0.0));
                }
                if (gm > 0.0) == increasing {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let r = 0.5 * (lo + hi);
            return Some((r, g(r)?.abs()));
        }
        prev_x = x;
        prev_g = gx;
    }
    Some(best)
}

/// Continuous measure of how far a level map is from being `(a, b)`-
/// renormalizable: zero exactly on success, built from the rescaled positions
/// of the two returns inside the (proxy) window plus the root residuals.
/// Every term vanishes simultaneously as the renormalizable set is reached,
/// so minima of this score are not attracted to single-condition boundaries.
fn renorm_proximity<M: Rescalable + ?Sized>(map: &M, a: usize, b: usize) -> f64 {
    let comb = CombinatorialType::monotone(a, b);
    let c = map.singular_point();
    let Some((p, gp)) = root_or_proxy(map, comb.word_minus()) else {
        return SCORE_NO_BRANCH;
    };
    let Some((q, gq)) = root_or_proxy(map, comb.word_plus()) else {
        return SCORE_NO_BRANCH;
    };
    if !(p < c && c < q) {
        return SCORE_BAD_WINDOW;
    }
    let Ok(ret_minus) = crate::renorm::branch::eval_word(map, c, comb.word_minus()) else {
        return SCORE_NO_BRANCH;
    };
    let Ok(ret_plus) = crate::renorm::branch::eval_word(map, c, comb.word_plus()) else {
        return SCORE_NO_BRANCH;
    };
    // want ret_minus in (c, q] and ret_plus in [p, c): rescale to (0, 1]
    let s_minus = (ret_minus - c) / (q - c);
    let s_plus = (c - ret_plus) / (c - p);
    let box_violation = (-s_minus).max(s_minus - 1.0).max(0.0)
        + (-s_plus).max(s_plus - 1.0).max(0.0);
    box_violation + gp + gq
}

/// Sentinel proximity scores, ordered worse than any informative value.
const SCORE_MISMATCH: f64 = 1e3;
const SCORE_BAD_WINDOW: f64 = 2e3;
const SCORE_NO_BRANCH: f64 = 4e3;
const SCORE_BAD_MAP: f64 = 8e3;

/// Certify the deepest prefix of `targets` at `(u, v)`.
///
/// A level counts only if the *smallest* renormalization type of the level map
/// is exactly the target: every monotone type of smaller total length must
/// fail. Returns the certified depth, a continuous proximity score for the
/// first uncertified level (0 when fully certified, 1 when a smaller type
/// preempts the target), and the cascade on success.
fn certify(
    u: f64,
    v: f64,
    c: f64,
    alpha: f64,
    targets: &[(usize, usize)],
    want_cascade: bool,
) -> (usize, f64, Option<Vec<RenormResult>>) {
    let Ok(base) = StandardMap::new(u, v, c, alpha) else {
        return (0, SCORE_BAD_MAP, None);
    };
    let mut level = LevelMap::Base(base);
    let mut cascade = Vec::with_capacity(targets.len());
    for (depth, &(a, b)) in targets.iter().enumerate() {
        let mut mismatch = false;
        let mut found: Option<RenormResult> = None;
        'scan: for total in 2..=(a + b) {
            for aa in 1..total {
                let bb = total - aa;
                let comb = CombinatorialType::monotone(aa, bb);
                match level.try_type(&comb) {
                    Ok(r) => {
                        if (aa, bb) == (a, b) {
                            found = Some(r);
                        } else {
                            // a smaller type certified: wrong combinatorial class
                            mismatch = true;
                        }
                        break 'scan;
                    }
                    Err(_) => {}
                }
            }
        }
        match found {
            Some(r) => {
                level = LevelMap::Renormalized(r.renormalized.clone());
                cascade.push(r);
            }
            None => {
                let margin = if mismatch {
                    SCORE_MISMATCH
                } else {
                    match &level {
                        LevelMap::Base(m) => renorm_proximity(m, a, b),
                        LevelMap::Renormalized(m) => renorm_proximity(m, a, b),
                    }
                };
                return (depth, margin, None);
            }
        }
    }
    let n = targets.len();
    (n, 0.0, if want_cascade { Some(cascade) } else { None })
}

#[derive(Clone, Copy, Debug)]
struct Rect {
    u0: f64,
    u1: f64,
    v0: f64,
    v1: f64,
}

impl Rect {
    fn center(&self) -> (f64, f64) {
        (0.5 * (self.u0 + self.u1), 0.5 * (self.v0 + self.v1))
    }

    fn diam(&self) -> f64 {
        let du = self.u1 - self.u0;
        let dv = self.v1 - self.v0;
        (du * du + dv * dv).sqrt()
    }

    fn quadrants(&self) -> [Rect; 4] {
        let (um, vm) = self.center();
        [
            Rect { u0: self.u0, u1: um, v0: self.v0, v1: vm },
            Rect { u0: um, u1: self.u1, v0: self.v0, v1: vm },
            Rect { u0: self.u0, u1: um, v0: vm, v1: self.v1 },
            Rect { u0: um, u1: self.u1, v0: vm, v1: self.v1 },
        ]
    }
}

/// Heap key: depth first, then the per-heap secondary (stored negated where
/// needed so that BinaryHeap's max-order pops the preferred rectangle), with
/// the insertion counter as the deterministic tiebreak.
#[derive(PartialEq)]
struct Key {
    depth: usize,
    secondary: f64,
    counter: Reverse<u64>,
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.depth
            .cmp(&other.depth)
            .then(self.secondary.total_cmp(&other.secondary))
            .then(self.counter.cmp(&other.counter))
    }
}

/// Tune `(u, v)` so that the standard map with the given `c` and `alpha` is
/// renormalizable with the prescribed monotone types to the full target depth,
/// each level certified by an exact smallest-type detection.
pub fn tune_parameters(
    c: f64,
    alpha: f64,
    targets: &[(usize, usize)],
    options: TuneOptions,
) -> Result<TuneOutcome, TuneError> {
    for &(a, b) in targets {
        if a < 1 || b < 1 {
            return Err(TuneError::BadRequest(format!(
                "monotone type ({a},{b}) needs a, b >= 1"
            )));
        }
    }
    let pad = options.pad;
    let root = Rect {
        u0: c + pad,
        u1: 1.0 - pad,
        v0: (1.0 - c) + pad,
        v1: 1.0 - pad,
    };
    if !(root.u0 < root.u1 && root.v0 < root.v1) {
        return Err(TuneError::BadRequest(format!(
            "empty parameter rectangle for c = {c}"
        )));
    }
    let wanted = targets.len();
    let mut certifications = 0usize;
    let score = |rect: &Rect| -> (usize, f64) {
        let (u, v) = rect.center();
        let (d, m, _) = certify(u, v, c, alpha, targets, false);
        (d, m)
    };

    if wanted == 0 {
        // any non-trivial member qualifies
        let (u, v) = root.center();
        let map = StandardMap::new(u, v, c, alpha)
            .map_err(|e| TuneError::BadRequest(e.to_string()))?;
        return Ok(TuneOutcome {
            map,
            rect_diameter: root.diam(),
            certifications: 0,
            cascade: Vec::new(),
        });
    }

    // exploration pops widest rectangles, exploitation pops smallest margins
    let mut explore: BinaryHeap<(Key, u64)> = BinaryHeap::new();
    let mut exploit: BinaryHeap<(Key, u64)> = BinaryHeap::new();
    let mut rects: Vec<Rect> = Vec::new();
    let mut spent: HashSet<u64> = HashSet::new();
    let mut push = |rect: Rect,
                    depth: usize,
                    margin: f64,
                    rects: &mut Vec<Rect>,
                    explore: &mut BinaryHeap<(Key, u64)>,
                    exploit: &mut BinaryHeap<(Key, u64)>| {
        let id = rects.len() as u64;
        rects.push(rect);
        explore.push((
            Key { depth, secondary: rect.diam(), counter: Reverse(id) },
            id,
        ));
        exploit.push((
            Key { depth, secondary: -margin, counter: Reverse(id) },
            id,
        ));
    };

    let debug = std::env::var_os("LORENZ_TUNE_DEBUG").is_some();
    let (d0, m0) = score(&root);
    certifications += 1;
    let mut best: (usize, Rect) = (d0, root);
    push(root, d0, m0, &mut rects, &mut explore, &mut exploit);

    let mut winner: Option<Rect> = None;
    let mut toggle = false;
    while certifications < options.budget {
        toggle = !toggle;
        let popped = if toggle {
            exploit.pop().or_else(|| explore.pop())
        } else {
            explore.pop().or_else(|| exploit.pop())
        };
        let Some((key, id)) = popped else { break };
        if !spent.insert(id) {
            continue;
        }
        let rect = rects[id as usize];
        if key.depth >= wanted {
            winner = Some(rect);
            break;
        }
        if rect.diam() < 1e-12 {
            continue;
        }
        if debug && certifications % 4096 < 4 {
            let (u, v) = rect.center();
            eprintln!(
                "certs={certifications} pop depth={} diam={:.2e} sec={:+.3e} at ({u:.9},{v:.9}) [{}]",
                key.depth,
                rect.diam(),
                key.secondary,
                if toggle { "exploit" } else { "explore" },
            );
        }
        let quads = rect.quadrants();
        let scored: Vec<(usize, f64)> = quads.par_iter().map(&score).collect();
        certifications += 4;
        for (q, (d, m)) in quads.into_iter().zip(scored) {
            if d > best.0 {
                best = (d, q);
                if debug {
                    let (u, v) = q.center();
                    eprintln!("certs={certifications} best depth={d} at ({u:.12},{v:.12}) diam={:.2e}", q.diam());
                }
            }
            push(q, d, m, &mut rects, &mut explore, &mut exploit);
        }
    }

    let Some(mut rect) = winner else {
        let (u, v) = best.1.center();
        return Err(TuneError::BudgetExhausted {
            budget: options.budget,
            deepest: best.0,
            wanted,
            u,
            v,
        });
    };

    // Shrink the localization box around a certified center: probe the four
    // half-diameter offsets, move to the first that still certifies, halve.
    while rect.diam() > options.diam_stop && certifications + 4 <= options.budget {
        let (u, v) = rect.center();
        let du = 0.25 * (rect.u1 - rect.u0);
        let dv = 0.25 * (rect.v1 - rect.v0);
        let probes = [
            (u - du, v - dv),
            (u + du, v - dv),
            (u - du, v + dv),
            (u + du, v + dv),
        ];
        let scored: Vec<usize> = probes
            .par_iter()
            .map(|&(pu, pv)| certify(pu, pv, c, alpha, targets, false).0)
            .collect();
        certifications += 4;
        let (cu, cv) = scored
            .iter()
            .position(|&d| d >= wanted)
            .map(|i| probes[i])
            .unwrap_or((u, v));
        rect = Rect {
            u0: cu - du,
            u1: cu + du,
            v0: cv - dv,
            v1: cv + dv,
        };
    }

    let (u, v) = rect.center();
    let (depth, _, cascade) = certify(u, v, c, alpha, targets, true);
    certifications += 1;
    if depth < wanted {
        // the shrink phase only moves onto certified centers, so this means
        // the budget cut it off mid-halving; report honestly
        return Err(TuneError::BudgetExhausted {
            budget: options.budget,
            deepest: depth,
            wanted,
            u,
            v,
        });
    }
    let map = StandardMap::new(u, v, c, alpha).expect("certified parameters are valid");
    Ok(TuneOutcome {
        map,
        rect_diameter: rect.diam(),
        certifications,
        cascade: cascade.expect("cascade requested"),
    })
}

/// Re-certify an explicit parameter pair against a target cascade (used to
/// rebuild cascades from serialized maps).
pub fn certify_cascade(
    map: &StandardMap,
    targets: &[(usize, usize)],
) -> Result<Vec<RenormResult>, RenormError> {
    let (depth, _, cascade) = certify(map.u(), map.v(), map.c(), map.alpha(), targets, true);
    if depth < targets.len() {
        return Err(RenormError::NotRenormalizable {
            max_len: targets.get(depth).map(|&(a, b)| a + b + 2).unwrap_or(0),
        });
    }
    Ok(cascade.expect("full-depth cascade"))
}

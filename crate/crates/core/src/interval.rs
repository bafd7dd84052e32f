//! Closed intervals on the real line.

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Interval spanned by two points in either order.
    pub fn hull(a: f64, b: f64) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub const UNIT: Interval = Interval { lo: 0.0, hi: 1.0 };

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True if the open interiors intersect.
    pub fn overlaps_interior(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    /// Image of `x in [0,1]` under the increasing affine bijection `[0,1] -> self`.
    pub fn from_unit(&self, x: f64) -> f64 {
        self.lo + self.len() * x
    }

    /// Preimage under the increasing affine bijection `[0,1] -> self`.
    pub fn to_unit(&self, y: f64) -> f64 {
        (y - self.lo) / self.len()
    }

    /// Length of the overlap with `other` (zero if disjoint).
    pub fn overlap_len(&self, other: &Interval) -> f64 {
        (self.hi.min(other.hi) - self.lo.max(other.lo)).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_round_trip() {
        let iv = Interval::new(0.25, 0.75);
        for &x in &[0.0, 0.3, 1.0] {
            let y = iv.from_unit(x);
            assert!((iv.to_unit(y) - x).abs() < 1e-15);
        }
        assert_eq!(iv.from_unit(0.0), 0.25);
        assert_eq!(iv.from_unit(1.0), 0.75);
    }

    #[test]
    fn overlap_and_containment() {
        let a = Interval::new(0.0, 0.5);
        let b = Interval::new(0.5, 1.0);
        assert!(!a.overlaps_interior(&b));
        assert_eq!(a.overlap_len(&b), 0.0);
        let c = Interval::new(0.4, 0.6);
        assert!(a.overlaps_interior(&c));
        assert!((a.overlap_len(&c) - 0.1).abs() < 1e-15);
        assert!(Interval::UNIT.contains_interval(&c));
    }
}

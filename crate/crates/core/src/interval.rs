//! Closed interval unions on the boundary circle `[0, n)`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::geom::Q;

/// Sorted, disjoint, non-touching closed intervals on a circle of length
/// `period`. Endpoints live in `[0, period]`; the points `0` and `period` are
/// the same boundary point, so the canonical form carries both or neither.
#[derive(Clone, PartialEq, Eq)]
pub struct IntervalSet {
    period: Q,
    intervals: Vec<(Q, Q)>,
}

impl IntervalSet {
    pub fn empty(period: Q) -> Self {
        assert!(period.is_positive(), "interval period must be positive");
        IntervalSet { period, intervals: Vec::new() }
    }

    pub fn full(period: Q) -> Self {
        let mut s = IntervalSet::empty(period.clone());
        s.intervals.push((Q::zero(), period));
        s
    }

    /// Builds a normalized set from arbitrary closed intervals inside
    /// `[0, period]`.
    pub fn from_intervals<I: IntoIterator<Item = (Q, Q)>>(period: Q, items: I) -> Self {
        let mut s = IntervalSet::empty(period);
        for (lo, hi) in items {
            s.push_raw(lo, hi);
        }
        s.normalize();
        s
    }

    pub fn period(&self) -> &Q {
        &self.period
    }

    pub fn intervals(&self) -> &[(Q, Q)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    fn push_raw(&mut self, lo: Q, hi: Q) {
        assert!(lo <= hi, "interval endpoints out of order");
        assert!(!lo.is_negative() && hi <= self.period, "interval outside [0, period]");
        self.intervals.push((lo, hi));
    }

    /// Adds the closed arc running forward from `from` to `to`, wrapping
    /// through `period` when `to < from`.
    pub fn insert_arc(&mut self, from: Q, to: Q) {
        if from <= to {
            self.push_raw(from, to);
        } else {
            let p = self.period.clone();
            self.push_raw(from, p);
            self.push_raw(Q::zero(), to);
        }
        self.normalize();
    }

    fn normalize(&mut self) {
        let mut items = std::mem::take(&mut self.intervals);
        items.sort();
        let mut out: Vec<(Q, Q)> = Vec::with_capacity(items.len());
        for (lo, hi) in items {
            if let Some(last) = out.last_mut() {
                if lo <= last.1 {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                    continue;
                }
            }
            out.push((lo, hi));
        }
        let zero = Q::zero();
        let starts_at_zero = out.first().is_some_and(|f| f.0 == zero);
        let ends_at_period = out.last().is_some_and(|l| l.1 == self.period);
        if ends_at_period && !starts_at_zero {
            out.insert(0, (zero.clone(), zero));
        } else if starts_at_zero && !ends_at_period {
            out.push((self.period.clone(), self.period.clone()));
        }
        self.intervals = out;
    }

    pub fn measure(&self) -> Q {
        self.intervals.iter().fold(Q::zero(), |acc, (lo, hi)| acc + (hi - lo))
    }

    pub fn contains(&self, v: &Q) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo <= v && v <= hi)
    }

    /// True iff the union is the whole circle.
    pub fn covers_all(&self) -> bool {
        self.measure() == self.period
    }

    /// Open gaps between consecutive intervals, as `(lo, hi)` pairs; a gap
    /// through the wrap point is split in two.
    pub fn gaps(&self) -> Vec<(Q, Q)> {
        let mut out = Vec::new();
        let mut cursor = Q::zero();
        for (lo, hi) in &self.intervals {
            if lo > &cursor {
                out.push((cursor.clone(), lo.clone()));
            }
            if hi > &cursor {
                cursor = hi.clone();
            }
        }
        if cursor < self.period {
            out.push((cursor, self.period.clone()));
        }
        out
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        interval_union_measure(&[self.clone(), other.clone()], self.period.clone()).0
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (lo, hi)) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{lo}, {hi}]")?;
        }
        write!(f, "}} mod {}", self.period)
    }
}

/// Union of interval families and its measure, by a single sweep over the
/// merged endpoint list.
///
/// Endpoints are sorted by value with left endpoints ahead of right endpoints
/// on ties, so touching closed intervals fuse and a depth counter is enough to
/// read off the union.
pub fn interval_union_measure(sets: &[IntervalSet], period: Q) -> (IntervalSet, Q) {
    // false < true: left endpoints sort first at equal values.
    let mut events: Vec<(Q, bool)> = Vec::new();
    for s in sets {
        assert_eq!(s.period, period, "interval sets live on different circles");
        for (lo, hi) in &s.intervals {
            events.push((lo.clone(), false));
            events.push((hi.clone(), true));
        }
    }
    events.sort();

    let mut union = IntervalSet::empty(period);
    let mut measure = Q::zero();
    let mut depth = 0usize;
    let mut open_at = Q::zero();
    for (v, is_right) in events {
        if is_right {
            depth -= 1;
            if depth == 0 {
                measure += &v - &open_at;
                union.intervals.push((std::mem::take(&mut open_at), v));
            }
        } else {
            if depth == 0 {
                open_at = v;
            }
            depth += 1;
        }
    }
    union.normalize();
    (union, measure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{q, qf};

    fn set(period: i64, items: &[(Q, Q)]) -> IntervalSet {
        IntervalSet::from_intervals(q(period), items.iter().cloned())
    }

    #[test]
    fn klee_examples() {
        let chain = [
            set(4, &[(q(0), q(1))]),
            set(4, &[(q(1), q(2))]),
            set(4, &[(qf(3, 2), q(3))]),
        ];
        let (u, m) = interval_union_measure(&chain, q(4));
        assert_eq!(m, q(3));
        assert_eq!(u.measure(), q(3));

        let (_, m) = interval_union_measure(&[set(4, &[(q(0), q(1)), (q(2), q(3))])], q(4));
        assert_eq!(m, q(2));

        let (u, m) = interval_union_measure(&[], q(4));
        assert_eq!(m, q(0));
        assert!(u.is_empty());
    }

    #[test]
    fn touching_intervals_merge() {
        let s = set(5, &[(q(0), q(1)), (q(1), q(2)), (q(3), q(3))]);
        assert_eq!(s.intervals().len(), 3);
        assert_eq!(s.intervals()[0], (q(0), q(2)));
        assert_eq!(s.intervals()[2], (q(5), q(5)));
        assert_eq!(s.measure(), q(2));
    }

    #[test]
    fn wrap_arc_and_canonical_ends() {
        let mut s = IntervalSet::empty(q(6));
        s.insert_arc(qf(11, 2), qf(1, 2));
        assert_eq!(s.intervals(), &[(q(0), qf(1, 2)), (qf(11, 2), q(6))]);
        assert_eq!(s.measure(), q(1));
        assert!(s.contains(&q(0)));
        assert!(s.contains(&q(6)));
        let g = s.gaps();
        assert_eq!(g, vec![(qf(1, 2), qf(11, 2))]);
    }

    #[test]
    fn degenerate_points_do_not_change_coverage() {
        let s = set(3, &[(q(0), q(2)), (qf(5, 2), qf(5, 2))]);
        assert!(!s.covers_all());
        assert_eq!(s.measure(), q(2));
        let full = set(3, &[(q(0), q(2)), (q(2), q(3))]);
        assert!(full.covers_all());
        assert!(full.gaps().is_empty());
    }
}

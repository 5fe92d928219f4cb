//! Exact rational predicates and constructions.
//!
//! Every coordinate is a [`BigRational`]; nothing here rounds. Intersections of
//! segments with rational endpoints are rational, so downstream code never
//! leaves exact arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact scalar used for every coordinate and parameter.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Q {
    qf(1, 2)
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point { x: q(x), y: q(y) }
    }

    pub fn frac(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point { x: qf(xn, xd), y: qf(yn, yd) }
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn add(&self, o: &Point) -> Point {
        Point { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn scale(&self, s: &Q) -> Point {
        Point { x: &self.x * s, y: &self.y * s }
    }

    pub fn dot(&self, o: &Point) -> Q {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> Q {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Point at parameter `t` on the segment `self -> to`.
    pub fn lerp(&self, to: &Point, t: &Q) -> Point {
        self.add(&to.sub(self).scale(t))
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        let h = half();
        Point { x: (&self.x + &o.x) * &h, y: (&self.y + &o.y) * &h }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of an exact quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: &Q) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Twice the signed area of triangle `p q r`.
pub fn cross3(p: &Point, q: &Point, r: &Point) -> Q {
    (&q.x - &p.x) * (&r.y - &p.y) - (&q.y - &p.y) * (&r.x - &p.x)
}

/// Sign of `(q - p) x (r - p)`: positive for a left turn.
pub fn orient(p: &Point, q: &Point, r: &Point) -> Sign {
    Sign::of(&cross3(p, q, r))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("degenerate segment at {0}")]
pub struct DegenerateSegment(pub Point);

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, DegenerateSegment> {
        if a == b {
            return Err(DegenerateSegment(a));
        }
        Ok(Segment { a, b })
    }

    pub fn dir(&self) -> Point {
        self.b.sub(&self.a)
    }

    pub fn at(&self, t: &Q) -> Point {
        self.a.lerp(&self.b, t)
    }

    /// Parameter of `p` along the segment, assuming `p` is on its line.
    pub fn param_of(&self, p: &Point) -> Q {
        let d = self.dir();
        if !d.x.is_zero() {
            (&p.x - &self.a.x) / &d.x
        } else {
            (&p.y - &self.a.y) / &d.y
        }
    }

    /// Exact membership test, endpoints included.
    pub fn contains(&self, p: &Point) -> bool {
        orient(&self.a, &self.b, p) == Sign::Zero && in_box(&self.a, &self.b, p)
    }

    /// Membership in the relative interior.
    pub fn contains_strictly(&self, p: &Point) -> bool {
        self.contains(p) && *p != self.a && *p != self.b
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}-{:?}", self.a, self.b)
    }
}

/// `p` inside the closed axis-aligned box spanned by `a` and `b`.
pub fn in_box(a: &Point, b: &Point, p: &Point) -> bool {
    let (xl, xh) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (yl, yh) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    &p.x >= xl && &p.x <= xh && &p.y >= yl && &p.y <= yh
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentIntersection {
    Empty,
    Point(Point),
    Overlap(Segment),
}

pub fn intersect_segments(s1: &Segment, s2: &Segment) -> SegmentIntersection {
    let o1 = orient(&s1.a, &s1.b, &s2.a);
    let o2 = orient(&s1.a, &s1.b, &s2.b);
    let o3 = orient(&s2.a, &s2.b, &s1.a);
    let o4 = orient(&s2.a, &s2.b, &s1.b);

    if o1 == Sign::Zero && o2 == Sign::Zero {
        // Collinear: project onto the dominant axis of s1 and intersect ranges.
        let key = |p: &Point| s1.param_of(p);
        let (mut lo2, mut hi2) = (key(&s2.a), key(&s2.b));
        let (mut p_lo2, mut p_hi2) = (&s2.a, &s2.b);
        if lo2 > hi2 {
            std::mem::swap(&mut lo2, &mut hi2);
            std::mem::swap(&mut p_lo2, &mut p_hi2);
        }
        let zero = Q::zero();
        let one = Q::one();
        let (lo, p_lo) = if lo2 > zero { (lo2, p_lo2.clone()) } else { (zero, s1.a.clone()) };
        let (hi, p_hi) = if hi2 < one { (hi2, p_hi2.clone()) } else { (one, s1.b.clone()) };
        return match lo.cmp(&hi) {
            Ordering::Greater => SegmentIntersection::Empty,
            Ordering::Equal => SegmentIntersection::Point(p_lo),
            Ordering::Less => SegmentIntersection::Overlap(Segment { a: p_lo, b: p_hi }),
        };
    }

    if o1 != Sign::Zero && o1 == o2 {
        return SegmentIntersection::Empty;
    }
    if o3 != Sign::Zero && o3 == o4 {
        return SegmentIntersection::Empty;
    }
    // Lines cross at a single point that lies on both closed segments.
    if o1 == Sign::Zero {
        return SegmentIntersection::Point(s2.a.clone());
    }
    if o2 == Sign::Zero {
        return SegmentIntersection::Point(s2.b.clone());
    }
    if o3 == Sign::Zero {
        return SegmentIntersection::Point(s1.a.clone());
    }
    if o4 == Sign::Zero {
        return SegmentIntersection::Point(s1.b.clone());
    }
    let t = line_param(&s1.a, &s1.dir(), &s2.a, &s2.dir()).expect("crossing lines are not parallel");
    SegmentIntersection::Point(s1.at(&t))
}

/// Parameter `t` with `p + t*d` on the line `{o + s*e}`; `None` if parallel.
pub fn line_param(p: &Point, d: &Point, o: &Point, e: &Point) -> Option<Q> {
    let den = d.cross(e);
    if den.is_zero() {
        return None;
    }
    Some(o.sub(p).cross(e) / den)
}

/// Twice the signed area of a vertex loop (positive for counter-clockwise).
pub fn signed_area2(pts: &[Point]) -> Q {
    let n = pts.len();
    let mut acc = Q::zero();
    for i in 0..n {
        acc += pts[i].cross(&pts[(i + 1) % n]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> Segment {
        Segment::new(Point::int(ax, ay), Point::int(bx, by)).unwrap()
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&Point::int(0, 0), &Point::int(1, 0), &Point::int(0, 1)), Sign::Positive);
        assert_eq!(orient(&Point::int(0, 0), &Point::int(1, 1), &Point::int(2, 2)), Sign::Zero);
        assert_eq!(orient(&Point::int(4, 1), &Point::int(2, 2), &Point::int(4, 2)), Sign::Negative);
        assert_eq!(cross3(&Point::int(4, 1), &Point::int(2, 2), &Point::int(4, 2)), q(-2));
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(
            intersect_segments(&seg(0, 0, 2, 2), &seg(0, 2, 2, 0)),
            SegmentIntersection::Point(Point::int(1, 1))
        );
        assert_eq!(intersect_segments(&seg(0, 0, 1, 0), &seg(2, 0, 3, 0)), SegmentIntersection::Empty);
        assert_eq!(
            intersect_segments(&seg(0, 0, 2, 0), &seg(1, 0, 3, 0)),
            SegmentIntersection::Overlap(seg(1, 0, 2, 0))
        );
    }

    #[test]
    fn touching_endpoints_are_points() {
        assert_eq!(
            intersect_segments(&seg(0, 0, 1, 0), &seg(1, 0, 1, 5)),
            SegmentIntersection::Point(Point::int(1, 0))
        );
        assert_eq!(
            intersect_segments(&seg(0, 0, 1, 0), &seg(1, 0, 2, 0)),
            SegmentIntersection::Point(Point::int(1, 0))
        );
        assert_eq!(intersect_segments(&seg(0, 0, 4, 0), &seg(2, 1, 2, 5)), SegmentIntersection::Empty);
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert!(Segment::new(Point::int(1, 1), Point::int(1, 1)).is_err());
    }

    fn small() -> impl Strategy<Value = i64> {
        -6i64..=6
    }

    fn pt() -> impl Strategy<Value = Point> {
        (small(), small(), 1i64..4).prop_map(|(x, y, d)| Point::frac(x, d, y, d))
    }

    proptest! {
        #[test]
        fn orient_antisymmetric(p in pt(), a in pt(), b in pt()) {
            prop_assert_eq!(orient(&p, &a, &b), orient(&p, &b, &a).flip());
        }

        #[test]
        fn orient_translation_invariant(p in pt(), a in pt(), b in pt(), t in pt()) {
            prop_assert_eq!(orient(&p, &a, &b), orient(&p.add(&t), &a.add(&t), &b.add(&t)));
        }

        #[test]
        fn intersection_symmetric_and_on_both(a in pt(), b in pt(), c in pt(), d in pt()) {
            prop_assume!(a != b && c != d);
            let s1 = Segment::new(a, b).unwrap();
            let s2 = Segment::new(c, d).unwrap();
            let r12 = intersect_segments(&s1, &s2);
            let r21 = intersect_segments(&s2, &s1);
            match (&r12, &r21) {
                (SegmentIntersection::Empty, SegmentIntersection::Empty) => {}
                (SegmentIntersection::Point(p), SegmentIntersection::Point(p2)) => {
                    prop_assert_eq!(p, p2);
                    prop_assert!(s1.contains(p) && s2.contains(p));
                }
                (SegmentIntersection::Overlap(o1), SegmentIntersection::Overlap(o2)) => {
                    let same = (o1.a == o2.a && o1.b == o2.b) || (o1.a == o2.b && o1.b == o2.a);
                    prop_assert!(same);
                    prop_assert!(s1.contains(&o1.a) && s1.contains(&o1.b));
                    prop_assert!(s2.contains(&o1.a) && s2.contains(&o1.b));
                }
                _ => prop_assert!(false, "asymmetric result {:?} vs {:?}", r12, r21),
            }
        }
    }
}

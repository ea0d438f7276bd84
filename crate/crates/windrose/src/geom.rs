//! Exact planar geometry over a generic scalar.
//!
//! Everything here is branch-exact: predicates are evaluated with the
//! scalar's own arithmetic and never touch floating point. The two
//! instantiations used by the crate are widened integers ([`i128`]) for
//! grid drawings and [`num_rational::BigRational`] for the straight-line
//! constructions, re-exported as aliases at the crate root.

use crate::constraints::Quadrant;
use num_traits::Signed;
use std::cmp::Ordering;

/// Scalar usable for exact geometric predicates.
///
/// The bound is deliberately small: ordered, signed, exact ring
/// arithmetic. Implementations must not round (so `f64` is out).
pub trait Coord: Clone + Ord + Signed {}
impl<T: Clone + Ord + Signed> Coord for T {}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }
}

impl<T: Coord> Point<T> {
    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Point<U> {
        Point::new(f(&self.x), f(&self.y))
    }
}

/// Direction vector; same representation as a point but used relatively.
pub type Vector<T> = Point<T>;

pub fn sub<T: Coord>(a: &Point<T>, b: &Point<T>) -> Vector<T> {
    Point::new(a.x.clone() - b.x.clone(), a.y.clone() - b.y.clone())
}

pub fn add<T: Coord>(a: &Point<T>, b: &Vector<T>) -> Point<T> {
    Point::new(a.x.clone() + b.x.clone(), a.y.clone() + b.y.clone())
}

/// Cross product of vectors `a` and `b`.
pub fn cross<T: Coord>(a: &Vector<T>, b: &Vector<T>) -> T {
    a.x.clone() * b.y.clone() - a.y.clone() * b.x.clone()
}

pub fn dot<T: Coord>(a: &Vector<T>, b: &Vector<T>) -> T {
    a.x.clone() * b.x.clone() + a.y.clone() * b.y.clone()
}

/// Orientation of the triple `(o, a, b)`: positive for a counterclockwise
/// turn (y grows upward), negative for clockwise, zero for collinear.
pub fn orient<T: Coord>(o: &Point<T>, a: &Point<T>, b: &Point<T>) -> T {
    cross(&sub(a, o), &sub(b, o))
}

/// Quadrant of `to` relative to `from`; `None` when they share a
/// coordinate (quadrants are open regions).
pub fn quadrant_of<T: Coord>(from: &Point<T>, to: &Point<T>) -> Option<Quadrant> {
    let dx = to.x.cmp(&from.x);
    let dy = to.y.cmp(&from.y);
    match (dx, dy) {
        (Ordering::Greater, Ordering::Greater) => Some(Quadrant::NE),
        (Ordering::Less, Ordering::Greater) => Some(Quadrant::NW),
        (Ordering::Less, Ordering::Less) => Some(Quadrant::SW),
        (Ordering::Greater, Ordering::Less) => Some(Quadrant::SE),
        _ => None,
    }
}

/// Quadrant of a direction vector, `None` on an axis or zero.
pub fn quadrant_of_dir<T: Coord>(d: &Vector<T>) -> Option<Quadrant> {
    let zero = T::zero();
    quadrant_of(&Point::new(zero.clone(), zero.clone()), &Point::new(zero.clone() + d.x.clone(), zero + d.y.clone()))
}

/// Total clockwise order on nonzero directions starting at north.
///
/// Sorts by the quadrant sweep NE, SE, SW, NW (axis directions are folded
/// into the region they open: north belongs to NE's start and so on), then
/// by cross product inside a region. Parallel directions compare equal.
pub fn cmp_clockwise<T: Coord>(a: &Vector<T>, b: &Vector<T>) -> Ordering {
    let ra = cw_region(a);
    let rb = cw_region(b);
    ra.cmp(&rb).then_with(|| {
        // Within a half-quadrant region, clockwise = negative cross.
        let c = cross(a, b);
        if c.is_positive() {
            Ordering::Greater
        } else if c.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    })
}

/// Region index for the clockwise sweep from north: N=0, NE=1, E=2, SE=3,
/// S=4, SW=5, W=6, NW=7.
fn cw_region<T: Coord>(d: &Vector<T>) -> u8 {
    let zero = T::zero();
    let xs = d.x.cmp(&zero);
    let ys = d.y.cmp(&zero);
    match (xs, ys) {
        (Ordering::Equal, Ordering::Greater) => 0,
        (Ordering::Greater, Ordering::Greater) => 1,
        (Ordering::Greater, Ordering::Equal) => 2,
        (Ordering::Greater, Ordering::Less) => 3,
        (Ordering::Equal, Ordering::Less) => 4,
        (Ordering::Less, Ordering::Less) => 5,
        (Ordering::Less, Ordering::Equal) => 6,
        (Ordering::Less, Ordering::Greater) => 7,
        (Ordering::Equal, Ordering::Equal) => panic!("zero direction has no clockwise position"),
    }
}

/// True when `d` lies strictly inside the sector swept clockwise from `a`
/// to `b`. The sector excludes both boundary rays. When `a` and `b` are
/// parallel with the same direction the sector is the full circle minus
/// that ray.
pub fn strictly_cw_between<T: Coord>(a: &Vector<T>, d: &Vector<T>, b: &Vector<T>) -> bool {
    let ad = cross(a, d);
    let db = cross(d, b);
    let ab = cross(a, b);
    let same_ray = |u: &Vector<T>, v: &Vector<T>| cross(u, v).is_zero() && dot(u, v).is_positive();
    if same_ray(a, d) || same_ray(d, b) {
        return false;
    }
    if ab.is_negative() {
        // Sector smaller than 180 degrees.
        ad.is_negative() && db.is_negative()
    } else if ab.is_positive() {
        // Sector larger than 180 degrees.
        ad.is_negative() || db.is_negative()
    } else if dot(a, b).is_positive() {
        // a and b on the same ray: full circle minus the ray.
        true
    } else {
        // Opposite rays: exactly 180 degrees.
        ad.is_negative()
    }
}

/// One segment of a polyline together with bookkeeping used by the
/// verifier to decide which contacts are legitimate.
#[derive(Debug, Clone)]
pub struct Segment<T> {
    pub a: Point<T>,
    pub b: Point<T>,
}

/// How two closed segments intersect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegContact<T> {
    None,
    /// A single shared point which is an endpoint of at least one segment.
    Point(Point<T>),
    /// Interiors cross in a single point (not representable over integers).
    Crossing,
    /// Collinear segments sharing more than one point.
    Overlap,
}

/// Exact closed-segment intersection, exhaustive over degeneracies.
pub fn segment_contact<T: Coord>(s: &Segment<T>, t: &Segment<T>) -> SegContact<T> {
    let d1 = orient(&t.a, &t.b, &s.a);
    let d2 = orient(&t.a, &t.b, &s.b);
    let d3 = orient(&s.a, &s.b, &t.a);
    let d4 = orient(&s.a, &s.b, &t.b);

    let zero = T::zero();
    if ((d1.is_positive() && d2.is_negative()) || (d1.is_negative() && d2.is_positive()))
        && ((d3.is_positive() && d4.is_negative()) || (d3.is_negative() && d4.is_positive()))
    {
        return SegContact::Crossing;
    }

    let mut touch: Option<Point<T>> = None;
    let mut count = 0usize;
    let mut record = |p: Point<T>| {
        if touch.as_ref() != Some(&p) {
            count += 1;
            touch = Some(p);
        }
    };
    if d1 == zero && on_segment(&t.a, &t.b, &s.a) {
        record(s.a.clone());
    }
    if d2 == zero && on_segment(&t.a, &t.b, &s.b) {
        record(s.b.clone());
    }
    if d3 == zero && on_segment(&s.a, &s.b, &t.a) {
        record(t.a.clone());
    }
    if d4 == zero && on_segment(&s.a, &s.b, &t.b) {
        record(t.b.clone());
    }
    match count {
        0 => SegContact::None,
        1 => SegContact::Point(touch.unwrap()),
        _ => SegContact::Overlap,
    }
}

/// Whether `p`, already known collinear with `a`–`b`, lies on the closed
/// segment.
fn on_segment<T: Coord>(a: &Point<T>, b: &Point<T>, p: &Point<T>) -> bool {
    let (lox, hix) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (loy, hiy) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *lox <= p.x && p.x <= *hix && *loy <= p.y && p.y <= *hiy
}

/// Strict point-in-triangle test; the triangle may be given in either
/// orientation.
pub fn strictly_inside_triangle<T: Coord>(
    p: &Point<T>,
    a: &Point<T>,
    b: &Point<T>,
    c: &Point<T>,
) -> bool {
    let d1 = orient(a, b, p);
    let d2 = orient(b, c, p);
    let d3 = orient(c, a, p);
    (d1.is_positive() && d2.is_positive() && d3.is_positive())
        || (d1.is_negative() && d2.is_negative() && d3.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i128, y: i128) -> Point<i128> {
        Point::new(x, y)
    }

    #[test]
    fn quadrants_are_open() {
        assert_eq!(quadrant_of(&p(0, 0), &p(1, 2)), Some(Quadrant::NE));
        assert_eq!(quadrant_of(&p(0, 0), &p(-1, 2)), Some(Quadrant::NW));
        assert_eq!(quadrant_of(&p(0, 0), &p(-1, -2)), Some(Quadrant::SW));
        assert_eq!(quadrant_of(&p(0, 0), &p(1, -2)), Some(Quadrant::SE));
        assert_eq!(quadrant_of(&p(0, 0), &p(0, 2)), None);
        assert_eq!(quadrant_of(&p(0, 0), &p(2, 0)), None);
    }

    #[test]
    fn clockwise_order_from_north() {
        // Bearings: (1,2) ~ 26 deg, (2,1) ~ 63 deg, (2,-1) ~ 117 deg,
        // (-1,-1) = 225 deg, (-1, 2) ~ 333 deg.
        let dirs = [p(1, 2), p(2, 1), p(2, -1), p(-1, -1), p(-1, 2)];
        for w in dirs.windows(2) {
            assert_eq!(cmp_clockwise(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn sector_membership() {
        // Sector clockwise from north to east contains NE directions only.
        let n = p(0, 1);
        let e = p(1, 0);
        assert!(strictly_cw_between(&n, &p(1, 2), &e));
        assert!(!strictly_cw_between(&n, &p(-1, 2), &e));
        assert!(!strictly_cw_between(&n, &p(0, 5), &e));
        // Reflex sector from east to north contains everything else.
        assert!(strictly_cw_between(&e, &p(-1, -1), &n));
        assert!(strictly_cw_between(&e, &p(1, -5), &n));
        assert!(!strictly_cw_between(&e, &p(1, 2), &n));
        // Full circle minus ray.
        assert!(strictly_cw_between(&n, &p(1, 2), &n));
        assert!(!strictly_cw_between(&n, &p(0, 3), &n));
    }

    #[test]
    fn segment_contacts() {
        let s = Segment { a: p(0, 0), b: p(4, 4) };
        let t = Segment { a: p(0, 4), b: p(4, 0) };
        assert_eq!(segment_contact(&s, &t), SegContact::Crossing);
        let u = Segment { a: p(4, 4), b: p(8, 0) };
        assert_eq!(segment_contact(&s, &u), SegContact::Point(p(4, 4)));
        let v = Segment { a: p(5, 0), b: p(9, 1) };
        assert_eq!(segment_contact(&s, &v), SegContact::None);
        let w = Segment { a: p(2, 2), b: p(6, 6) };
        assert_eq!(segment_contact(&s, &w), SegContact::Overlap);
    }

    #[test]
    fn triangle_strictness() {
        let (a, b, c) = (p(0, 0), p(4, 0), p(0, 4));
        assert!(strictly_inside_triangle(&p(1, 1), &a, &b, &c));
        assert!(!strictly_inside_triangle(&p(0, 2), &a, &b, &c));
        assert!(!strictly_inside_triangle(&p(5, 5), &a, &b, &c));
    }
}

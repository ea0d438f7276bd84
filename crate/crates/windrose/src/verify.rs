//! Independent geometric verification of drawings and the brute-force
//! labeling oracle. Both are deliberately simple: they are the trust
//! anchors of the test suite and never share code with the construction
//! paths they check.

use crate::constraints::{ambiguous_vertices, QConstraints};
use crate::geom::{
    cmp_clockwise, quadrant_of, segment_contact, Coord, Point, SegContact, Segment,
};
use crate::graph::{DartId, EdgeId, PlaneGraph, VertexId};
use crate::labeling::{
    angle_category_between, check_angular, labeling_from_assignment, AngleCategory, AngleLabeling,
    AngleValue, LargeAngleAssignment,
};
use std::cmp::Ordering;
use std::fmt;

/// Vertex points plus an ordered bend list per edge (oriented along the
/// even dart of the pair).
#[derive(Debug, Clone)]
pub struct Drawing<T> {
    pub points: Vec<Point<T>>,
    pub bends: Vec<Vec<Point<T>>>,
    pub kind: CoordinateKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinateKind {
    IntegerGrid,
    ExactRational,
}

impl<T: Coord> Drawing<T> {
    pub fn straight(points: Vec<Point<T>>, num_edges: usize, kind: CoordinateKind) -> Self {
        Drawing {
            points,
            bends: vec![Vec::new(); num_edges],
            kind,
        }
    }

    pub fn point(&self, v: VertexId) -> &Point<T> {
        &self.points[v.0 as usize]
    }

    pub fn bends_of(&self, e: EdgeId) -> &[Point<T>] {
        &self.bends[e.0 as usize]
    }

    pub fn max_bends(&self) -> usize {
        self.bends.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    /// Point sequence of the polyline of dart `d`, from tail to head.
    pub fn polyline(&self, g: &PlaneGraph, d: DartId) -> Vec<Point<T>> {
        let e = d.edge();
        let mut pts = Vec::with_capacity(self.bends[e.0 as usize].len() + 2);
        pts.push(self.points[g.tail(e.dart()).0 as usize].clone());
        pts.extend(self.bends[e.0 as usize].iter().cloned());
        pts.push(self.points[g.head(e.dart()).0 as usize].clone());
        if d != e.dart() {
            pts.reverse();
        }
        pts
    }

    pub fn map_coords<U: Coord, F: Fn(&T) -> U>(&self, f: F) -> Drawing<U> {
        Drawing {
            points: self.points.iter().map(|p| p.map(&f)).collect(),
            bends: self
                .bends
                .iter()
                .map(|b| b.iter().map(|p| p.map(&f)).collect())
                .collect(),
            kind: self.kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingGeometry,
    /// Two polylines touch or cross away from a shared endpoint.
    Crossing { e1: EdgeId, e2: EdgeId },
    /// A polyline is not strictly monotone in both axes.
    NotMonotone { edge: EdgeId },
    /// The head of a dart is not strictly inside its prescribed quadrant.
    WrongQuadrant { dart: DartId },
    /// The cyclic order of edges around a vertex differs from the rotation.
    RotationMismatch { vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Violation::MissingGeometry => write!(f, "drawing does not cover the graph"),
            Violation::Crossing { e1, e2 } => {
                write!(f, "edges e{} and e{} intersect improperly", e1.0, e2.0)
            }
            Violation::NotMonotone { edge } => {
                write!(f, "edge e{} is not strictly xy-monotone", edge.0)
            }
            Violation::WrongQuadrant { dart } => {
                write!(f, "dart {dart} does not reach its prescribed quadrant")
            }
            Violation::RotationMismatch { vertex } => {
                write!(f, "edge order around {vertex} differs from the embedding")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub planarity_ok: bool,
    pub monotonicity_ok: bool,
    pub quadrants_ok: bool,
    pub embedding_ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.planarity_ok
            && self.monotonicity_ok
            && self.quadrants_ok
            && self.embedding_ok
            && self.violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if self.pass() {
            return write!(f, "drawing verified");
        }
        writeln!(
            f,
            "verification failed (planarity {}, monotonicity {}, quadrants {}, embedding {})",
            self.planarity_ok, self.monotonicity_ok, self.quadrants_ok, self.embedding_ok
        )?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// Checks a drawing of `(g, q)`: exact planarity, strict bi-monotonicity
/// of every polyline, strict quadrant containment for every dart, and
/// agreement of the geometric edge order with the rotation system.
pub fn verify_drawing<T: Coord>(
    g: &PlaneGraph,
    q: &QConstraints,
    d: &Drawing<T>,
) -> VerificationReport {
    let mut report = VerificationReport {
        planarity_ok: true,
        monotonicity_ok: true,
        quadrants_ok: true,
        embedding_ok: true,
        violations: Vec::new(),
    };
    if d.points.len() != g.num_vertices() || d.bends.len() != g.num_edges() {
        report.violations.push(Violation::MissingGeometry);
        report.planarity_ok = false;
        report.monotonicity_ok = false;
        report.quadrants_ok = false;
        report.embedding_ok = false;
        return report;
    }

    // Strict bi-monotonicity.
    for e in g.edges() {
        let pts = d.polyline(g, e.dart());
        let mut ok = true;
        for w in pts.windows(2) {
            if w[0].x == w[1].x || w[0].y == w[1].y {
                ok = false;
            }
        }
        let xs_inc = pts.windows(2).all(|w| w[0].x < w[1].x);
        let xs_dec = pts.windows(2).all(|w| w[0].x > w[1].x);
        let ys_inc = pts.windows(2).all(|w| w[0].y < w[1].y);
        let ys_dec = pts.windows(2).all(|w| w[0].y > w[1].y);
        if !(ok && (xs_inc || xs_dec) && (ys_inc || ys_dec)) {
            report.monotonicity_ok = false;
            report.violations.push(Violation::NotMonotone { edge: e });
        }
    }

    // Strict quadrant containment of each head.
    for dart in g.darts() {
        let from = d.point(g.tail(dart));
        let to = d.point(g.head(dart));
        if quadrant_of(from, to) != Some(q.get(dart)) {
            report.quadrants_ok = false;
            report.violations.push(Violation::WrongQuadrant { dart });
        }
    }

    // Planarity: every pair of segments, with shared graph vertices as the
    // only permitted contacts.
    let mut segments: Vec<(EdgeId, usize, Segment<T>)> = Vec::new();
    for e in g.edges() {
        let pts = d.polyline(g, e.dart());
        for (i, w) in pts.windows(2).enumerate() {
            segments.push((
                e,
                i,
                Segment {
                    a: w[0].clone(),
                    b: w[1].clone(),
                },
            ));
        }
    }
    let mut crossing_reported: std::collections::HashSet<(u32, u32)> =
        std::collections::HashSet::new();
    for i in 0..segments.len() {
        for j in (i + 1)..segments.len() {
            let (e1, i1, s1) = &segments[i];
            let (e2, i2, s2) = &segments[j];
            // Fast reject on bounding boxes.
            if bbox_disjoint(s1, s2) {
                continue;
            }
            let contact = segment_contact(s1, s2);
            let bad = match contact {
                SegContact::None => false,
                SegContact::Crossing | SegContact::Overlap => true,
                SegContact::Point(p) => {
                    if e1 == e2 {
                        // Consecutive segments of one polyline share a bend.
                        !(i1.abs_diff(*i2) == 1 && is_endpoint(&p, s1) && is_endpoint(&p, s2))
                    } else {
                        !is_allowed_vertex_contact(g, d, *e1, *e2, &p, s1, s2)
                    }
                }
            };
            if bad {
                report.planarity_ok = false;
                let key = (e1.0.min(e2.0), e1.0.max(e2.0));
                if crossing_reported.insert(key) {
                    report
                        .violations
                        .push(Violation::Crossing { e1: *e1, e2: *e2 });
                }
            }
        }
    }

    // Embedding: clockwise geometric order of outgoing darts equals the
    // stored rotation.
    for v in g.vertices() {
        let rot = g.rotation(v);
        if rot.len() <= 2 {
            continue; // any cyclic order of two darts matches
        }
        let origin = d.point(v);
        let mut sorted: Vec<DartId> = rot.to_vec();
        sorted.sort_by(|&a, &b| {
            let pa = first_direction(g, d, a, origin);
            let pb = first_direction(g, d, b, origin);
            cmp_clockwise(&pa, &pb)
        });
        if !cyclically_equal(&sorted, rot) {
            report.embedding_ok = false;
            report
                .violations
                .push(Violation::RotationMismatch { vertex: v });
        }
    }

    report
}

fn bbox_disjoint<T: Coord>(s: &Segment<T>, t: &Segment<T>) -> bool {
    let (s_lox, s_hix) = minmax(&s.a.x, &s.b.x);
    let (t_lox, t_hix) = minmax(&t.a.x, &t.b.x);
    if s_hix < t_lox || t_hix < s_lox {
        return true;
    }
    let (s_loy, s_hiy) = minmax(&s.a.y, &s.b.y);
    let (t_loy, t_hiy) = minmax(&t.a.y, &t.b.y);
    s_hiy < t_loy || t_hiy < s_loy
}

fn minmax<'a, T: Ord>(a: &'a T, b: &'a T) -> (&'a T, &'a T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn is_endpoint<T: Coord>(p: &Point<T>, s: &Segment<T>) -> bool {
    *p == s.a || *p == s.b
}

/// A point contact between segments of distinct edges is fine only when it
/// is an endpoint of both segments and coincides with a graph vertex the
/// two edges share.
fn is_allowed_vertex_contact<T: Coord>(
    g: &PlaneGraph,
    d: &Drawing<T>,
    e1: EdgeId,
    e2: EdgeId,
    p: &Point<T>,
    s1: &Segment<T>,
    s2: &Segment<T>,
) -> bool {
    if !is_endpoint(p, s1) || !is_endpoint(p, s2) {
        return false;
    }
    let ends1 = [g.tail(e1.dart()), g.head(e1.dart())];
    let ends2 = [g.tail(e2.dart()), g.head(e2.dart())];
    ends1
        .iter()
        .any(|v1| ends2.contains(v1) && d.point(*v1) == p)
}

fn first_direction<T: Coord>(
    g: &PlaneGraph,
    d: &Drawing<T>,
    dart: DartId,
    origin: &Point<T>,
) -> Point<T> {
    let pts = d.polyline(g, dart);
    crate::geom::sub(&pts[1], origin)
}

fn cyclically_equal(a: &[DartId], b: &[DartId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let Some(offset) = b.iter().position(|&x| x == a[0]) else {
        return false;
    };
    (0..a.len()).all(|i| a[i] == b[(offset + i) % b.len()])
}

/// Reads quadrant constraints off a drawing; fails on a shared coordinate.
pub fn constraints_from_drawing<T: Coord>(
    g: &PlaneGraph,
    d: &Drawing<T>,
) -> Option<QConstraints> {
    let mut q = Vec::with_capacity(g.num_darts());
    for dart in g.darts() {
        q.push(quadrant_of(d.point(g.tail(dart)), d.point(g.head(dart)))?);
    }
    Some(QConstraints::from_vec(q))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapExceeded {
    pub ambiguous: usize,
    pub cap: usize,
}

impl fmt::Display for CapExceeded {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(
            f,
            "{} ambiguous vertices exceed the oracle cap {}",
            self.ambiguous, self.cap
        )
    }
}

/// Enumerates every large-angle assignment and keeps the angular ones.
///
/// Exponential in the number of ambiguous vertices, which is capped; this
/// is the independent oracle the flow solver is tested against.
pub fn brute_force_assignment_oracle(
    g: &PlaneGraph,
    q: &QConstraints,
    cap: usize,
) -> Result<Vec<AngleLabeling>, CapExceeded> {
    let ambiguous = ambiguous_vertices(g, q);
    if ambiguous.len() > cap {
        return Err(CapExceeded {
            ambiguous: ambiguous.len(),
            cap,
        });
    }
    let angle_sets: Vec<Vec<DartId>> = ambiguous
        .iter()
        .map(|&v| g.rotation(v).to_vec())
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; ambiguous.len()];
    loop {
        let choice: Vec<(VertexId, DartId)> = ambiguous
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, angle_sets[i][pick[i]]))
            .collect();
        let assignment = LargeAngleAssignment { choice };
        let labeling = labeling_from_assignment(g, q, &assignment);
        if check_angular(g, &labeling).is_empty() {
            out.push(labeling);
        }
        // Odometer increment.
        let mut i = 0;
        loop {
            if i == pick.len() {
                return Ok(out);
            }
            pick[i] += 1;
            if pick[i] < angle_sets[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Convenience check used across the test suite: a labeling produced by
/// the flow must be one of the oracle's survivors.
pub fn oracle_agrees(
    g: &PlaneGraph,
    q: &QConstraints,
    found: Option<&AngleLabeling>,
    cap: usize,
) -> Result<bool, CapExceeded> {
    let all = brute_force_assignment_oracle(g, q, cap)?;
    Ok(match found {
        None => all.is_empty(),
        Some(a) => all.iter().any(|x| x == a),
    })
}

/// Determined-category helper shared by tests: the full labeling induced
/// by quadrants when no vertex is ambiguous.
pub fn determined_labeling(g: &PlaneGraph, q: &QConstraints) -> Option<AngleLabeling> {
    let mut cat = vec![AngleCategory::A0; g.num_darts()];
    for e in g.darts() {
        match angle_category_between(g, q, e) {
            AngleValue::Determined(c) => cat[e.0 as usize] = c,
            AngleValue::Ambiguous => return None,
        }
    }
    Some(AngleLabeling::new(cat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::Quadrant;
    use crate::graph::fixtures::*;
    use crate::graph::VertexId;

    fn t1_drawing() -> (PlaneGraph, QConstraints, Drawing<i128>) {
        let (g, q) = t1();
        let d = Drawing::straight(
            vec![Point::new(0, 0), Point::new(1, 2), Point::new(2, 1)],
            g.num_edges(),
            CoordinateKind::IntegerGrid,
        );
        (g, q, d)
    }

    #[test]
    fn t1_reference_drawing_passes() {
        let (g, q, d) = t1_drawing();
        let r = verify_drawing(&g, &q, &d);
        assert!(r.pass(), "{r}");
    }

    #[test]
    fn swapped_points_flip_the_embedding() {
        let (g, q) = t1();
        let d = Drawing::straight(
            vec![Point::new(0, 0), Point::new(2, 1), Point::new(1, 2)],
            g.num_edges(),
            CoordinateKind::IntegerGrid,
        );
        let r = verify_drawing(&g, &q, &d);
        // Quadrants still fine (both neighbors NE of u, w SE of v becomes
        // ... ) but the rotation at every vertex is reversed.
        assert!(!r.pass());
        assert!(!r.embedding_ok);
        assert!(r.quadrants_ok);
    }

    #[test]
    fn bend_that_breaks_monotonicity_is_caught() {
        let (g, q) = p2();
        // Path u-v-w drawn with a monotonicity violation on edge (u,v).
        let mut d = Drawing::straight(
            vec![Point::new(0, 0), Point::new(1, 3), Point::new(4, 5)],
            g.num_edges(),
            CoordinateKind::IntegerGrid,
        );
        d.bends[0] = vec![Point::new(2, 1)];
        let r = verify_drawing(&g, &q, &d);
        assert!(!r.monotonicity_ok);
    }

    #[test]
    fn crossing_is_caught() {
        // Two disjoint-ish edges forced to cross: star of 4 leaves drawn badly.
        let g = PlaneGraph::build(
            4,
            &[
                vec![VertexId(1), VertexId(2), VertexId(3)],
                vec![VertexId(0)],
                vec![VertexId(0)],
                vec![VertexId(0)],
            ],
            (VertexId(0), VertexId(1)),
        )
        .unwrap();
        let mut qb = QConstraints::unset(&g);
        qb.set_edge(&g, VertexId(0), VertexId(1), Quadrant::NE);
        qb.set_edge(&g, VertexId(0), VertexId(2), Quadrant::SE);
        qb.set_edge(&g, VertexId(0), VertexId(3), Quadrant::SW);
        let q = qb.finish();
        let d = Drawing::straight(
            vec![
                Point::new(0, 0),
                Point::new(2, 3),
                Point::new(3, -2),
                Point::new(-1, -1),
            ],
            g.num_edges(),
            CoordinateKind::IntegerGrid,
        );
        let r = verify_drawing(&g, &q, &d);
        assert!(r.pass(), "{r}");
        // Now move leaf 3 so edge (0,3) overlaps edge (0,2)'s quadrant line.
        let d = Drawing::straight(
            vec![
                Point::new(0, 0),
                Point::new(2, 3),
                Point::new(3, -2),
                Point::new(6, -4),
            ],
            g.num_edges(),
            CoordinateKind::IntegerGrid,
        );
        let r = verify_drawing(&g, &q, &d);
        assert!(!r.pass());
    }

    #[test]
    fn oracle_counts_on_fixtures() {
        let (g, q) = p2();
        assert_eq!(brute_force_assignment_oracle(&g, &q, 8).unwrap().len(), 2);
        let (g, q) = t2();
        assert_eq!(brute_force_assignment_oracle(&g, &q, 8).unwrap().len(), 0);
        let (g, q) = t1();
        assert_eq!(brute_force_assignment_oracle(&g, &q, 8).unwrap().len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let (g, q) = p2();
        assert!(brute_force_assignment_oracle(&g, &q, 0).is_err());
    }
}

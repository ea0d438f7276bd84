//! Angle categories and angular labelings.
//!
//! Every angle gets one of the categories 0, 90, 180, 270, 360 degrees. A
//! labeling is *angular* when the categories around each vertex sum to 360
//! and the categories around each face of walk length `k` sum to
//! `k*180 - 360` for internal faces and `k*180 + 360` for the outer face.

use crate::constraints::{is_ambiguous, QConstraints, Quadrant};
use crate::flow::MaxFlow;
use crate::graph::{DartId, FaceId, PlaneGraph, VertexId};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AngleCategory {
    A0,
    A90,
    A180,
    A270,
    A360,
}

impl AngleCategory {
    pub fn degrees(self) -> u32 {
        self.steps() as u32 * 90
    }

    /// Clockwise quadrant steps the angle spans (0..=4).
    pub fn steps(self) -> u8 {
        match self {
            AngleCategory::A0 => 0,
            AngleCategory::A90 => 1,
            AngleCategory::A180 => 2,
            AngleCategory::A270 => 3,
            AngleCategory::A360 => 4,
        }
    }

    pub fn from_steps(s: u8) -> AngleCategory {
        match s {
            0 => AngleCategory::A0,
            1 => AngleCategory::A90,
            2 => AngleCategory::A180,
            3 => AngleCategory::A270,
            4 => AngleCategory::A360,
            _ => panic!("angle category out of range"),
        }
    }

    pub fn from_degrees(d: u32) -> AngleCategory {
        assert!(d % 90 == 0 && d <= 360, "bad category {d}");
        AngleCategory::from_steps((d / 90) as u8)
    }
}

impl fmt::Display for AngleCategory {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}°", self.degrees())
    }
}

/// A total labeling of the angles of a plane graph. The angle bounded by
/// dart `e` and its clockwise successor is stored at index `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleLabeling {
    cat: Vec<AngleCategory>,
}

impl AngleLabeling {
    pub fn new(cat: Vec<AngleCategory>) -> Self {
        AngleLabeling { cat }
    }

    pub fn get(&self, e: DartId) -> AngleCategory {
        self.cat[e.0 as usize]
    }

    pub fn set(&mut self, e: DartId, c: AngleCategory) {
        self.cat[e.0 as usize] = c;
    }

    pub fn push(&mut self, c: AngleCategory) {
        self.cat.push(c);
    }

    pub fn len(&self) -> usize {
        self.cat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cat.is_empty()
    }

    /// Sum of the categories of the angles at `v`, in degrees.
    pub fn vertex_sum(&self, g: &PlaneGraph, v: VertexId) -> u32 {
        g.rotation(v).iter().map(|&e| self.get(e).degrees()).sum()
    }

    /// Sum of the categories of the angles of face `f`, in degrees. The
    /// angle at the head of each walk dart `d` is keyed by `twin(d)`.
    pub fn face_sum(&self, g: &PlaneGraph, f: FaceId) -> u32 {
        g.face_walk(f)
            .iter()
            .map(|&d| self.get(d.twin()).degrees())
            .sum()
    }
}

/// The category of a single angle, or the 0/360 ambiguity marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleValue {
    Determined(AngleCategory),
    /// Both bounding darts lie in the same quadrant: 0 or 360 degrees.
    Ambiguous,
}

/// Category of the angle keyed by dart `e` as forced by the quadrants.
///
/// Degree-1 vertices have a single full angle, which the Vertex condition
/// forces to 360.
pub fn angle_category_between(g: &PlaneGraph, q: &QConstraints, e: DartId) -> AngleValue {
    let succ = g.cw_next(e);
    if succ == e {
        return AngleValue::Determined(AngleCategory::A360);
    }
    let steps = q.get(e).steps_to(q.get(succ));
    if steps == 0 {
        AngleValue::Ambiguous
    } else {
        AngleValue::Determined(AngleCategory::from_steps(steps))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AngularViolation {
    VertexSum { vertex: VertexId, sum: u32 },
    FaceSum { face: FaceId, sum: u32, target: u32 },
}

impl fmt::Display for AngularViolation {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            AngularViolation::VertexSum { vertex, sum } => {
                write!(f, "angles at {vertex} sum to {sum}°, expected 360°")
            }
            AngularViolation::FaceSum { face, sum, target } => {
                write!(f, "angles of {face} sum to {sum}°, expected {target}°")
            }
        }
    }
}

/// Target angle sum of a face: `k*180 - 360` internal, `k*180 + 360`
/// outer, with `k` the walk length counting repeated darts.
pub fn face_target(g: &PlaneGraph, f: FaceId) -> u32 {
    let k = g.face_len(f) as u32;
    if g.is_outer(f) {
        k * 180 + 360
    } else {
        k * 180 - 360
    }
}

/// Checks the Vertex condition at every vertex and the Cycle condition at
/// every face; returns all failures.
pub fn check_angular(g: &PlaneGraph, a: &AngleLabeling) -> Vec<AngularViolation> {
    let mut out = Vec::new();
    for v in g.vertices() {
        let sum = a.vertex_sum(g, v);
        if sum != 360 {
            out.push(AngularViolation::VertexSum { vertex: v, sum });
        }
    }
    for f in g.faces() {
        let sum = a.face_sum(g, f);
        let target = face_target(g, f);
        if sum != target {
            out.push(AngularViolation::FaceSum { face: f, sum, target });
        }
    }
    out
}

pub fn is_angular(g: &PlaneGraph, a: &AngleLabeling) -> bool {
    check_angular(g, a).is_empty()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelingError {
    NotTriangulated,
    /// An ambiguous vertex not on the outer face: its forced 360 angle
    /// cannot be placed. Certifies non-windrose-planarity.
    InternalAmbiguousVertex { vertex: VertexId },
    /// The outer walk repeats a vertex, so the 360 angle of an ambiguous
    /// vertex would be ambiguous. Does not occur on pipeline inputs.
    AmbiguousOuterOccurrence { vertex: VertexId },
}

impl fmt::Display for LabelingError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            LabelingError::NotTriangulated => write!(f, "graph is not triangulated"),
            LabelingError::InternalAmbiguousVertex { vertex } => {
                write!(f, "ambiguous vertex {vertex} is internal")
            }
            LabelingError::AmbiguousOuterOccurrence { vertex } => {
                write!(f, "ambiguous vertex {vertex} occurs twice on the outer face")
            }
        }
    }
}

impl std::error::Error for LabelingError {}

/// The unique candidate labeling of a graph whose internal faces are all
/// triangles and whose outer walk visits each vertex at most once.
///
/// Determined angles follow the quadrant steps; the remaining same-quadrant
/// angles are 0 except that each ambiguous vertex puts its forced 360 on
/// its unique outer-face angle. Rejects when an ambiguous vertex is
/// internal. The caller still has to run [`check_angular`].
pub fn unique_labeling(g: &PlaneGraph, q: &QConstraints) -> Result<AngleLabeling, LabelingError> {
    let mut cat = vec![AngleCategory::A0; g.num_darts()];
    for e in g.darts() {
        match angle_category_between(g, q, e) {
            AngleValue::Determined(c) => cat[e.0 as usize] = c,
            AngleValue::Ambiguous => cat[e.0 as usize] = AngleCategory::A0,
        }
    }
    for v in g.vertices() {
        if !is_ambiguous(g, q, v) {
            continue;
        }
        // The forced 360 goes on the unique outer angle.
        let outer_angles: Vec<DartId> = g
            .rotation(v)
            .iter()
            .copied()
            .filter(|&e| g.is_outer(g.angle_face(e)))
            .collect();
        match outer_angles.len() {
            0 => return Err(LabelingError::InternalAmbiguousVertex { vertex: v }),
            1 => cat[outer_angles[0].0 as usize] = AngleCategory::A360,
            _ => return Err(LabelingError::AmbiguousOuterOccurrence { vertex: v }),
        }
    }
    Ok(AngleLabeling::new(cat))
}

/// The unique candidate labeling of a triangulated graph.
pub fn labeling_from_triangulated(
    g: &PlaneGraph,
    q: &QConstraints,
) -> Result<AngleLabeling, LabelingError> {
    if !g.is_triangulated() {
        return Err(LabelingError::NotTriangulated);
    }
    unique_labeling(g, q)
}

/// Number of 360-degree angles each face must receive from ambiguous
/// vertices.
#[derive(Debug, Clone)]
pub struct FaceDemand {
    pub demand: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DemandError {
    /// Determined angles already exceed the face target.
    NegativeDemand { face: FaceId },
    /// The residue is not a multiple of 360 degrees.
    FractionalDemand { face: FaceId },
}

impl fmt::Display for DemandError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            DemandError::NegativeDemand { face } => {
                write!(f, "determined angles of {face} exceed its target")
            }
            DemandError::FractionalDemand { face } => {
                write!(f, "angle residue of {face} is not a multiple of 360°")
            }
        }
    }
}

/// Per-face demand `d(f) = (target - determined sum) / 360`, treating
/// ambiguous angles as 0 and degree-1 angles as 360.
pub fn face_demands(g: &PlaneGraph, q: &QConstraints) -> Result<FaceDemand, DemandError> {
    let mut demand = Vec::with_capacity(g.num_faces());
    for f in g.faces() {
        let mut sum: i64 = 0;
        for &d in g.face_walk(f) {
            let e = d.twin();
            sum += match angle_category_between(g, q, e) {
                AngleValue::Determined(c) => c.degrees() as i64,
                AngleValue::Ambiguous => 0,
            };
        }
        let target = face_target(g, f) as i64;
        let residue = target - sum;
        if residue % 360 != 0 {
            return Err(DemandError::FractionalDemand { face: f });
        }
        if residue < 0 {
            return Err(DemandError::NegativeDemand { face: f });
        }
        demand.push((residue / 360) as u32);
    }
    Ok(FaceDemand { demand })
}

/// A choice, per ambiguous vertex, of the incident angle that receives the
/// 360-degree category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargeAngleAssignment {
    /// Pairs (ambiguous vertex, dart keying the chosen angle).
    pub choice: Vec<(VertexId, DartId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoAssignment {
    Demand(DemandError),
    /// The bipartite flow cannot saturate every ambiguous vertex.
    InfeasibleFlow,
}

impl fmt::Display for NoAssignment {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            NoAssignment::Demand(e) => write!(f, "{e}"),
            NoAssignment::InfeasibleFlow => {
                write!(f, "no feasible assignment of 360° angles to faces")
            }
        }
    }
}

/// Builds the labeling induced by the quadrants and an explicit large
/// angle assignment (plus forced degree-1 angles).
pub fn labeling_from_assignment(
    g: &PlaneGraph,
    q: &QConstraints,
    assignment: &LargeAngleAssignment,
) -> AngleLabeling {
    let mut cat = vec![AngleCategory::A0; g.num_darts()];
    for e in g.darts() {
        match angle_category_between(g, q, e) {
            AngleValue::Determined(c) => cat[e.0 as usize] = c,
            AngleValue::Ambiguous => cat[e.0 as usize] = AngleCategory::A0,
        }
    }
    for &(_, e) in &assignment.choice {
        cat[e.0 as usize] = AngleCategory::A360;
    }
    AngleLabeling::new(cat)
}

/// Finds a large-angle assignment whose labeling is angular, via a unit
/// capacity bipartite flow from ambiguous vertices to their incident
/// faces with the per-face demands as sink capacities.
pub fn find_large_angle_assignment(
    g: &PlaneGraph,
    q: &QConstraints,
) -> Result<(LargeAngleAssignment, AngleLabeling), NoAssignment> {
    let demands = face_demands(g, q).map_err(NoAssignment::Demand)?;
    let ambiguous: Vec<VertexId> = crate::constraints::ambiguous_vertices(g, q);

    // Nodes: source, |B| ambiguous vertices, |F| faces, sink.
    let nb = ambiguous.len();
    let nf = g.num_faces();
    let source = 0;
    let sink = 1 + nb + nf;
    let mut flow = MaxFlow::new(2 + nb + nf);
    for (i, &b) in ambiguous.iter().enumerate() {
        flow.add_edge(source, 1 + i, 1);
        // One arc per distinct incident face.
        let mut faces: Vec<FaceId> = g
            .rotation(b)
            .iter()
            .map(|&e| g.angle_face(e))
            .collect();
        faces.sort();
        faces.dedup();
        for f in faces {
            flow.add_edge(1 + i, 1 + nb + f.0 as usize, 1);
        }
    }
    for f in 0..nf {
        let d = demands.demand[f];
        if d > 0 {
            flow.add_edge(1 + nb + f, sink, d as i64);
        }
    }
    let value = flow.run(source, sink);
    if value != nb as i64 {
        return Err(NoAssignment::InfeasibleFlow);
    }

    let mut choice = Vec::with_capacity(nb);
    for (i, &b) in ambiguous.iter().enumerate() {
        let fnode = flow
            .saturated_neighbor(1 + i)
            .expect("saturated vertex has an outgoing unit");
        let face = FaceId((fnode - 1 - nb) as u32);
        // Deterministic pick: the minimal dart of b whose angle lies in the
        // chosen face.
        let e = g
            .rotation(b)
            .iter()
            .copied()
            .filter(|&e| g.angle_face(e) == face)
            .min()
            .expect("face is incident to b");
        choice.push((b, e));
    }
    let assignment = LargeAngleAssignment { choice };
    let labeling = labeling_from_assignment(g, q, &assignment);
    debug_assert!(is_angular(g, &labeling));
    Ok((assignment, labeling))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InconsistentPropagation {
    pub dart: DartId,
}

impl fmt::Display for InconsistentPropagation {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(
            f,
            "quadrant propagation closes inconsistently at {} (labeling is not angular)",
            self.dart
        )
    }
}

impl std::error::Error for InconsistentPropagation {}

/// Recovers quadrant constraints from an angular labeling.
///
/// The anchor dart pins the global rotation: categories advance the
/// quadrant clockwise across consecutive darts (0/360 keep it, 90/180/270
/// advance 1/2/3 steps), twins are opposite. Fails when some cycle does
/// not close, which certifies that the labeling is not angular.
pub fn constraints_from_labeling(
    g: &PlaneGraph,
    a: &AngleLabeling,
    anchor: DartId,
    anchor_quadrant: Quadrant,
) -> Result<QConstraints, InconsistentPropagation> {
    let nd = g.num_darts();
    let mut q: Vec<Option<Quadrant>> = vec![None; nd];
    q[anchor.0 as usize] = Some(anchor_quadrant);
    let mut stack = vec![anchor];
    while let Some(d) = stack.pop() {
        let qd = q[d.0 as usize].unwrap();
        // Across the angle keyed by d.
        let succ = g.cw_next(d);
        let qs = qd.cw(a.get(d).steps() % 4);
        match q[succ.0 as usize] {
            None => {
                q[succ.0 as usize] = Some(qs);
                stack.push(succ);
            }
            Some(existing) => {
                if existing != qs {
                    return Err(InconsistentPropagation { dart: succ });
                }
            }
        }
        // Across the twin.
        let t = d.twin();
        let qt = qd.opposite();
        match q[t.0 as usize] {
            None => {
                q[t.0 as usize] = Some(qt);
                stack.push(t);
            }
            Some(existing) => {
                if existing != qt {
                    return Err(InconsistentPropagation { dart: t });
                }
            }
        }
    }
    // Connected graph: everything reached.
    let q: Vec<Quadrant> = q
        .into_iter()
        .map(|x| x.expect("graph connected"))
        .collect();
    Ok(QConstraints::from_vec(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::check_q_consistency;
    use crate::graph::fixtures::*;

    #[test]
    fn t1_angle_categories() {
        let (g, q) = t1();
        // Angle at v between (v,w) [SE] and (v,u) [SW]: one step, 90°.
        let vw = g.dart_between(VertexId(1), VertexId(2)).unwrap();
        assert_eq!(
            angle_category_between(&g, &q, vw),
            AngleValue::Determined(AngleCategory::A90)
        );
        // Angle at u between two NE darts is ambiguous.
        let uv = g.dart_between(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(angle_category_between(&g, &q, uv), AngleValue::Ambiguous);
    }

    #[test]
    fn k4_has_a_180_angle_at_the_apex() {
        let (g, q) = k4_apex();
        // v=0 sees a NW and b SE; the angle from (v,a) to (v,b) spans NE.
        let va = g.dart_between(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(g.head(g.cw_next(va)), VertexId(2));
        assert_eq!(
            angle_category_between(&g, &q, va),
            AngleValue::Determined(AngleCategory::A180)
        );
    }

    #[test]
    fn t1_unique_labeling_is_angular() {
        let (g, q) = t1();
        let a = labeling_from_triangulated(&g, &q).unwrap();
        assert!(check_angular(&g, &a).is_empty());
        // Inner angle at u is 0, outer is 360.
        let uv = g.dart_between(VertexId(0), VertexId(1)).unwrap();
        let uw = g.dart_between(VertexId(0), VertexId(2)).unwrap();
        assert_eq!(a.get(uv), AngleCategory::A0);
        assert_eq!(a.get(uw), AngleCategory::A360);
        assert!(g.is_outer(g.angle_face(uw)));
        // Sums: inner 180, outer 900.
        let inner = g.faces().find(|&f| !g.is_outer(f)).unwrap();
        assert_eq!(a.face_sum(&g, inner), 180);
        assert_eq!(a.face_sum(&g, g.outer_face()), 900);
    }

    #[test]
    fn t2_unique_labeling_fails_cycle_condition() {
        let (g, q) = t2();
        let a = labeling_from_triangulated(&g, &q).unwrap();
        let vs = check_angular(&g, &a);
        assert!(vs
            .iter()
            .any(|v| matches!(v, AngularViolation::FaceSum { .. })));
    }

    #[test]
    fn all_zero_labeling_fails_with_face_report() {
        let (g, _) = t1();
        let a = AngleLabeling::new(vec![AngleCategory::A0; g.num_darts()]);
        let vs = check_angular(&g, &a);
        // Every vertex and both faces violated; inner face target is 180.
        assert!(vs.contains(&AngularViolation::FaceSum {
            face: g.faces().find(|&f| !g.is_outer(f)).unwrap(),
            sum: 0,
            target: 180
        }));
    }

    #[test]
    fn internal_ambiguous_vertex_is_rejected() {
        // K4 with apex 0 inside triangle (1,2,3) and all of 0's neighbors
        // constrained to its NE quadrant.
        let g = PlaneGraph::build(
            4,
            &[
                vec![VertexId(2), VertexId(3), VertexId(1)],
                vec![VertexId(2), VertexId(0), VertexId(3)],
                vec![VertexId(3), VertexId(0), VertexId(1)],
                vec![VertexId(1), VertexId(0), VertexId(2)],
            ],
            (VertexId(1), VertexId(2)),
        )
        .unwrap();
        let mut q = QConstraints::unset(&g);
        q.set_edge(&g, VertexId(0), VertexId(1), Quadrant::NE);
        q.set_edge(&g, VertexId(0), VertexId(2), Quadrant::NE);
        q.set_edge(&g, VertexId(0), VertexId(3), Quadrant::NE);
        q.set_edge(&g, VertexId(1), VertexId(2), Quadrant::SE);
        q.set_edge(&g, VertexId(1), VertexId(3), Quadrant::NE);
        q.set_edge(&g, VertexId(2), VertexId(3), Quadrant::NE);
        let q = q.finish();
        assert!(check_q_consistency(&g, &q).is_empty());
        assert!(g.is_triangulated());
        let err = labeling_from_triangulated(&g, &q).unwrap_err();
        assert_eq!(
            err,
            LabelingError::InternalAmbiguousVertex { vertex: VertexId(0) }
        );
    }

    #[test]
    fn p2_demand_is_one() {
        let (g, q) = p2();
        let d = face_demands(&g, &q).unwrap();
        assert_eq!(d.demand, vec![1]);
    }

    #[test]
    fn t1_inner_demand_is_zero() {
        let (g, q) = t1();
        let d = face_demands(&g, &q).unwrap();
        let inner = g.faces().find(|&f| !g.is_outer(f)).unwrap();
        assert_eq!(d.demand[inner.0 as usize], 0);
        assert_eq!(d.demand[g.outer_face().0 as usize], 1);
    }

    #[test]
    fn t2_demand_is_negative() {
        let (g, q) = t2();
        let err = face_demands(&g, &q).unwrap_err();
        assert!(matches!(err, DemandError::NegativeDemand { .. }));
    }

    #[test]
    fn flow_assignments_match_fixtures() {
        let (g, q) = p2();
        let (_, a) = find_large_angle_assignment(&g, &q).unwrap();
        assert!(is_angular(&g, &a));

        let (g, q) = t1();
        let (asg, a) = find_large_angle_assignment(&g, &q).unwrap();
        assert!(is_angular(&g, &a));
        // The unique flow sends u's 360 to the outer face.
        assert_eq!(asg.choice.len(), 1);
        let (v, e) = asg.choice[0];
        assert_eq!(v, VertexId(0));
        assert!(g.is_outer(g.angle_face(e)));

        let (g, q) = t2();
        assert!(find_large_angle_assignment(&g, &q).is_err());
    }

    #[test]
    fn constraint_recovery_round_trips() {
        let (g, q) = t1();
        let a = labeling_from_triangulated(&g, &q).unwrap();
        let anchor = DartId(0);
        let rec = constraints_from_labeling(&g, &a, anchor, q.get(anchor)).unwrap();
        for d in g.darts() {
            assert_eq!(rec.get(d), q.get(d));
        }
        // A rotated anchor shifts every label by the same amount.
        let rec = constraints_from_labeling(&g, &a, anchor, q.get(anchor).cw(3)).unwrap();
        for d in g.darts() {
            assert_eq!(rec.get(d), q.get(d).cw(3));
        }
    }

    #[test]
    fn all_zero_labeling_does_not_propagate() {
        let (g, _) = t1();
        let a = AngleLabeling::new(vec![AngleCategory::A0; g.num_darts()]);
        assert!(constraints_from_labeling(&g, &a, DartId(0), Quadrant::NE).is_err());
    }

    #[test]
    fn sum_identity_for_angular_labelings() {
        let (g, q) = t1();
        let a = labeling_from_triangulated(&g, &q).unwrap();
        let v_total: u32 = g.vertices().map(|v| a.vertex_sum(&g, v)).sum();
        assert_eq!(v_total, 360 * g.num_vertices() as u32);
        let f_total: u32 = g.faces().map(|f| a.face_sum(&g, f)).sum();
        assert_eq!(f_total, 2 * g.num_edges() as u32 * 180);
    }
}

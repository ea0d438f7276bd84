//! Quadrant constraints and the derived directed views.

use crate::graph::{DartId, PlaneGraph, VertexId};
use serde::{Deserialize, Serialize};
use std::fmt;

/// One of the four open quadrants around a vertex.
///
/// The clockwise order of the quadrants (y up) is NW, NE, SE, SW; all
/// step arithmetic below uses that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quadrant {
    NE,
    NW,
    SW,
    SE,
}

impl Quadrant {
    /// Index in the clockwise order NW, NE, SE, SW.
    pub fn cw_index(self) -> u8 {
        match self {
            Quadrant::NW => 0,
            Quadrant::NE => 1,
            Quadrant::SE => 2,
            Quadrant::SW => 3,
        }
    }

    pub fn from_cw_index(i: u8) -> Quadrant {
        match i % 4 {
            0 => Quadrant::NW,
            1 => Quadrant::NE,
            2 => Quadrant::SE,
            _ => Quadrant::SW,
        }
    }

    /// Rotates `steps` quadrants clockwise.
    pub fn cw(self, steps: u8) -> Quadrant {
        Quadrant::from_cw_index(self.cw_index() + steps % 4)
    }

    /// The quadrant seen from the other end of an edge.
    pub fn opposite(self) -> Quadrant {
        self.cw(2)
    }

    /// Clockwise steps from `self` to `to` (0..=3).
    pub fn steps_to(self, to: Quadrant) -> u8 {
        (to.cw_index() + 4 - self.cw_index()) % 4
    }

    pub fn is_north(self) -> bool {
        matches!(self, Quadrant::NE | Quadrant::NW)
    }

    pub fn is_east(self) -> bool {
        matches!(self, Quadrant::NE | Quadrant::SE)
    }

    pub const ALL: [Quadrant; 4] = [Quadrant::NE, Quadrant::NW, Quadrant::SW, Quadrant::SE];
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let s = match self {
            Quadrant::NE => "NE",
            Quadrant::NW => "NW",
            Quadrant::SW => "SW",
            Quadrant::SE => "SE",
        };
        write!(f, "{s}")
    }
}

/// A quadrant label for every dart: `q[(u, v)]` is the quadrant of `v`
/// around `u`.
#[derive(Debug, Clone)]
pub struct QConstraints {
    q: Vec<Quadrant>,
}

/// Builder allowing incremental assignment in tests and parsers.
#[derive(Debug, Clone)]
pub struct QBuilder {
    q: Vec<Option<Quadrant>>,
}

impl QConstraints {
    pub fn unset(g: &PlaneGraph) -> QBuilder {
        QBuilder {
            q: vec![None; g.num_darts()],
        }
    }

    pub fn from_vec(q: Vec<Quadrant>) -> QConstraints {
        QConstraints { q }
    }

    pub fn get(&self, d: DartId) -> Quadrant {
        self.q[d.0 as usize]
    }

    pub(crate) fn set(&mut self, d: DartId, quad: Quadrant) {
        self.q[d.0 as usize] = quad;
        self.q[d.twin().0 as usize] = quad.opposite();
    }

    pub(crate) fn push_edge(&mut self, quad: Quadrant) {
        self.q.push(quad);
        self.q.push(quad.opposite());
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

impl QBuilder {
    /// Labels the dart `u -> v` and its twin (kept opposite).
    pub fn set_edge(&mut self, g: &PlaneGraph, u: VertexId, v: VertexId, quad: Quadrant) {
        let d = g.dart_between(u, v).expect("edge exists");
        self.q[d.0 as usize] = Some(quad);
        self.q[d.twin().0 as usize] = Some(quad.opposite());
    }

    pub fn set_dart(&mut self, d: DartId, quad: Quadrant) {
        self.q[d.0 as usize] = Some(quad);
    }

    pub fn missing(&self) -> Option<DartId> {
        self.q
            .iter()
            .position(|x| x.is_none())
            .map(|i| DartId(i as u32))
    }

    pub fn finish(self) -> QConstraints {
        QConstraints {
            q: self
                .q
                .into_iter()
                .map(|x| x.expect("every dart labeled"))
                .collect(),
        }
    }

    pub fn try_finish(self) -> Result<QConstraints, DartId> {
        if let Some(d) = self.missing() {
            return Err(d);
        }
        Ok(self.finish())
    }
}

/// A violation of quadrant-constraint consistency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QViolation {
    /// `q(u,v)` is not opposite to `q(v,u)`.
    TwinMismatch { dart: DartId },
    /// The quadrant labels around a vertex do not wind exactly once in the
    /// clockwise order NW, NE, SE, SW (and are not all equal).
    CyclicOrder { vertex: VertexId },
}

impl fmt::Display for QViolation {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            QViolation::TwinMismatch { dart } => {
                write!(f, "twin of {dart} is not labeled with the opposite quadrant")
            }
            QViolation::CyclicOrder { vertex } => write!(
                f,
                "labels around {vertex} are not a cyclic subsequence of NW, NE, SE, SW"
            ),
        }
    }
}

/// Checks twin consistency and the per-vertex cyclic-order condition.
pub fn check_q_consistency(g: &PlaneGraph, q: &QConstraints) -> Vec<QViolation> {
    let mut out = Vec::new();
    for e in g.edges() {
        let d = e.dart();
        if q.get(d).opposite() != q.get(d.twin()) {
            out.push(QViolation::TwinMismatch { dart: d });
        }
    }
    for v in g.vertices() {
        let rot = g.rotation(v);
        if rot.len() < 2 {
            continue;
        }
        let mut steps = 0u32;
        for i in 0..rot.len() {
            let a = q.get(rot[i]);
            let b = q.get(rot[(i + 1) % rot.len()]);
            steps += a.steps_to(b) as u32;
        }
        // 0 means all labels equal; 4 means one full wind.
        if steps != 0 && steps != 4 {
            out.push(QViolation::CyclicOrder { vertex: v });
        }
    }
    out
}

pub fn is_consistent(g: &PlaneGraph, q: &QConstraints) -> bool {
    check_q_consistency(g, q).is_empty()
}

/// A vertex of degree at least 2 whose neighbors all lie in one quadrant.
pub fn is_ambiguous(g: &PlaneGraph, q: &QConstraints, v: VertexId) -> bool {
    let rot = g.rotation(v);
    rot.len() >= 2 && rot.iter().all(|&d| q.get(d) == q.get(rot[0]))
}

pub fn ambiguous_vertices(g: &PlaneGraph, q: &QConstraints) -> Vec<VertexId> {
    g.vertices().filter(|&v| is_ambiguous(g, q, v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Vertical,
    Horizontal,
}

/// An orientation of every edge along one axis: for the vertical view an
/// edge points at the endpoint that lies to the north, for the horizontal
/// view at the endpoint to the east.
#[derive(Debug, Clone)]
pub struct DirectedView {
    pub axis: Axis,
    /// Per edge: (tail, head) in view direction.
    pub orientation: Vec<(VertexId, VertexId)>,
}

pub fn directed_view(g: &PlaneGraph, q: &QConstraints, axis: Axis) -> DirectedView {
    let orientation = g
        .edges()
        .map(|e| {
            let d = e.dart();
            let forward = match axis {
                Axis::Vertical => q.get(d).is_north(),
                Axis::Horizontal => q.get(d).is_east(),
            };
            if forward {
                (g.tail(d), g.head(d))
            } else {
                (g.head(d), g.tail(d))
            }
        })
        .collect();
    DirectedView { axis, orientation }
}

impl DirectedView {
    /// Kahn topological order with a min-id ready queue; `Err` returns one
    /// vertex on a directed cycle.
    pub fn topological_order(&self, n: usize) -> Result<Vec<VertexId>, VertexId> {
        let mut indeg = vec![0usize; n];
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(t, h) in &self.orientation {
            indeg[h.0 as usize] += 1;
            adj[t.0 as usize].push(h.0);
        }
        let mut ready: std::collections::BTreeSet<u32> = (0..n as u32)
            .filter(|&v| indeg[v as usize] == 0)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(VertexId(v));
            for &h in &adj[v as usize] {
                indeg[h as usize] -= 1;
                if indeg[h as usize] == 0 {
                    ready.insert(h);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            let stuck = (0..n).find(|&v| indeg[v] > 0).unwrap();
            Err(VertexId(stuck as u32))
        }
    }

    pub fn is_acyclic(&self, n: usize) -> bool {
        self.topological_order(n).is_ok()
    }
}

/// Both derived views are acyclic.
pub fn is_bi_acyclic(g: &PlaneGraph, q: &QConstraints) -> bool {
    let n = g.num_vertices();
    directed_view(g, q, Axis::Vertical).is_acyclic(n)
        && directed_view(g, q, Axis::Horizontal).is_acyclic(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Leftmost,
    Rightmost,
}

/// The maximal clockwise run of darts at `v` labeled `quad`, in rotation
/// order. Empty when the quadrant is unused.
pub fn quadrant_run(g: &PlaneGraph, q: &QConstraints, v: VertexId, quad: Quadrant) -> Vec<DartId> {
    let rot = g.rotation(v);
    let total: Vec<usize> = (0..rot.len())
        .filter(|&i| q.get(rot[i]) == quad)
        .collect();
    if total.is_empty() {
        return Vec::new();
    }
    if total.len() == rot.len() {
        return rot.to_vec();
    }
    // Start of the run: a labeled dart whose predecessor is not labeled.
    let start = total
        .iter()
        .copied()
        .find(|&i| q.get(rot[(i + rot.len() - 1) % rot.len()]) != quad)
        .expect("run start exists");
    let mut run = Vec::new();
    let mut i = start;
    while q.get(rot[i]) == quad {
        run.push(rot[i]);
        i = (i + 1) % rot.len();
        if run.len() > rot.len() {
            break; // inconsistent labels: several runs; be defensive
        }
    }
    run
}

/// The leftmost (first in the clockwise run) or rightmost (last) neighbor
/// of `v` in the given quadrant, or `None` when the quadrant is empty.
pub fn extreme_neighbor(
    g: &PlaneGraph,
    q: &QConstraints,
    v: VertexId,
    quad: Quadrant,
    side: Side,
) -> Option<VertexId> {
    extreme_dart(g, q, v, quad, side).map(|d| g.head(d))
}

pub fn extreme_dart(
    g: &PlaneGraph,
    q: &QConstraints,
    v: VertexId,
    quad: Quadrant,
    side: Side,
) -> Option<DartId> {
    let run = quadrant_run(g, q, v, quad);
    match side {
        Side::Leftmost => run.first().copied(),
        Side::Rightmost => run.last().copied(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn quadrant_arithmetic() {
        assert_eq!(Quadrant::NE.opposite(), Quadrant::SW);
        assert_eq!(Quadrant::NW.opposite(), Quadrant::SE);
        assert_eq!(Quadrant::NW.steps_to(Quadrant::NE), 1);
        assert_eq!(Quadrant::SE.steps_to(Quadrant::SW), 1);
        assert_eq!(Quadrant::SW.steps_to(Quadrant::NW), 1);
        assert_eq!(Quadrant::NW.steps_to(Quadrant::SE), 2);
        assert_eq!(Quadrant::SW.steps_to(Quadrant::SE), 3);
    }

    #[test]
    fn t1_is_consistent() {
        let (g, q) = t1();
        assert!(check_q_consistency(&g, &q).is_empty());
    }

    #[test]
    fn twin_mismatch_is_reported() {
        let (g, q) = t1();
        let d = g.dart_between(crate::graph::VertexId(0), crate::graph::VertexId(1)).unwrap();
        let mut raw: Vec<Quadrant> = (0..g.num_darts() as u32)
            .map(|i| q.get(DartId(i)))
            .collect();
        // NE stays NE on the twin instead of SW.
        raw[d.twin().0 as usize] = Quadrant::NW;
        let bad = QConstraints::from_vec(raw);
        let vs = check_q_consistency(&g, &bad);
        assert!(vs.iter().any(|v| matches!(v, QViolation::TwinMismatch { .. })));
    }

    #[test]
    fn star_with_bad_cyclic_order_is_reported() {
        // Star center 0 with leaves 1, 2, 3 labeled NE, NW, SE clockwise.
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
        qb.set_edge(&g, VertexId(0), VertexId(2), Quadrant::NW);
        qb.set_edge(&g, VertexId(0), VertexId(3), Quadrant::SE);
        let q = qb.finish();
        let vs = check_q_consistency(&g, &q);
        assert_eq!(
            vs,
            vec![QViolation::CyclicOrder { vertex: VertexId(0) }]
        );
    }

    #[test]
    fn directed_views_of_t1() {
        let (g, q) = t1();
        let up = directed_view(&g, &q, Axis::Vertical);
        // u -> v, u -> w, w -> v (v=(1,2) is the top, w=(2,1) in between).
        let find = |a: u32, b: u32| up.orientation.iter().any(|&(t, h)| t.0 == a && h.0 == b);
        assert!(find(0, 1) && find(0, 2) && find(2, 1));
        let right = directed_view(&g, &q, Axis::Horizontal);
        let findr = |a: u32, b: u32| right.orientation.iter().any(|&(t, h)| t.0 == a && h.0 == b);
        assert!(findr(0, 1) && findr(0, 2) && findr(1, 2));
        assert!(is_bi_acyclic(&g, &q));
    }

    #[test]
    fn cyclic_triangle_is_not_bi_acyclic() {
        let (g, q) = t2();
        assert!(check_q_consistency(&g, &q).is_empty());
        assert!(!directed_view(&g, &q, Axis::Vertical).is_acyclic(3));
        assert!(!is_bi_acyclic(&g, &q));
    }

    #[test]
    fn extreme_neighbors_of_t1() {
        let (g, q) = t1();
        let u = VertexId(0);
        assert_eq!(
            extreme_neighbor(&g, &q, u, Quadrant::NE, Side::Leftmost),
            Some(VertexId(1))
        );
        assert_eq!(
            extreme_neighbor(&g, &q, u, Quadrant::NE, Side::Rightmost),
            Some(VertexId(2))
        );
        assert_eq!(extreme_neighbor(&g, &q, u, Quadrant::SW, Side::Leftmost), None);
    }

    #[test]
    fn extreme_neighbors_of_k4() {
        let (g, q) = k4_apex();
        let v = VertexId(0);
        assert_eq!(
            extreme_neighbor(&g, &q, v, Quadrant::NW, Side::Rightmost),
            Some(VertexId(1))
        );
        assert_eq!(
            extreme_neighbor(&g, &q, v, Quadrant::SE, Side::Leftmost),
            Some(VertexId(2))
        );
    }
}

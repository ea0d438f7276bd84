//! Plane graphs as rotation systems of darts.
//!
//! A dart is a directed half of an undirected edge; darts are allocated in
//! twin pairs so that `twin(d) = d ^ 1`. Each vertex stores the clockwise
//! cyclic order of its outgoing darts (y grows upward). Faces are the
//! orbits of the permutation `d -> clockwise successor of twin(d)`; they
//! are derived, never supplied. One face is designated as the outer face.
//!
//! The angle bounded by a dart `e` and its clockwise successor `e'` at the
//! same vertex is keyed by `e`; it belongs to the face of `twin(e)`.

use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DartId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceId(pub u32);

/// Undirected edge id: the even dart of a twin pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl DartId {
    pub fn twin(self) -> DartId {
        DartId(self.0 ^ 1)
    }
    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 >> 1)
    }
}

impl EdgeId {
    pub fn dart(self) -> DartId {
        DartId(self.0 << 1)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for DartId {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    NotConnected,
    SelfLoop { vertex: VertexId },
    ParallelEdge { from: VertexId, to: VertexId },
    InconsistentRotation { from: VertexId, to: VertexId },
    BadWitness,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            BuildError::NotConnected => write!(f, "graph is not connected"),
            BuildError::SelfLoop { vertex } => write!(f, "self-loop at {vertex}"),
            BuildError::ParallelEdge { from, to } => {
                write!(f, "parallel edge {from} -> {to}")
            }
            BuildError::InconsistentRotation { from, to } => {
                write!(f, "rotation lists {from} -> {to} but not the reverse")
            }
            BuildError::BadWitness => write!(f, "outer-face witness is not a dart of the graph"),
        }
    }
}

impl std::error::Error for BuildError {}

/// An angle: the incidence of a vertex with a face, bounded by two darts
/// that are clockwise-consecutive at the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Angle {
    pub vertex: VertexId,
    pub first_dart: DartId,
    pub second_dart: DartId,
    pub face: FaceId,
}

#[derive(Debug, Clone)]
pub struct PlaneGraph {
    /// Per vertex, outgoing darts in clockwise order.
    rotations: Vec<Vec<DartId>>,
    dart_tail: Vec<VertexId>,
    /// Position of each dart within its tail's rotation.
    rot_pos: Vec<u32>,
    /// Facial walks: orbits of `d -> cw_successor(twin(d))`, each starting
    /// at its minimal dart.
    faces: Vec<Vec<DartId>>,
    dart_face: Vec<FaceId>,
    outer: FaceId,
}

impl PlaneGraph {
    /// Builds a plane graph from per-vertex clockwise neighbor lists.
    ///
    /// `witness` is a dart `(u, v)`; the face containing it becomes the
    /// outer face.
    pub fn build(
        n: usize,
        neighbor_rotations: &[Vec<VertexId>],
        witness: (VertexId, VertexId),
    ) -> Result<PlaneGraph, BuildError> {
        assert_eq!(neighbor_rotations.len(), n);
        // Validate simple-ness and symmetry before allocating darts.
        let mut seen: HashSet<(u32, u32)> = HashSet::new();
        for (u, rot) in neighbor_rotations.iter().enumerate() {
            let u = VertexId(u as u32);
            for &v in rot {
                if v == u {
                    return Err(BuildError::SelfLoop { vertex: u });
                }
                if v.0 as usize >= n {
                    return Err(BuildError::InconsistentRotation { from: u, to: v });
                }
                if !seen.insert((u.0, v.0)) {
                    return Err(BuildError::ParallelEdge { from: u, to: v });
                }
            }
        }
        for &(u, v) in &seen {
            if !seen.contains(&(v, u)) {
                return Err(BuildError::InconsistentRotation {
                    from: VertexId(v),
                    to: VertexId(u),
                });
            }
        }

        // Allocate twin pairs: scanning vertices in order, the first time an
        // edge is met its (u, v) dart gets the even id.
        let mut dart_of: std::collections::HashMap<(u32, u32), DartId> =
            std::collections::HashMap::new();
        let mut dart_tail: Vec<VertexId> = Vec::new();
        for (u, rot) in neighbor_rotations.iter().enumerate() {
            let u = VertexId(u as u32);
            for &v in rot {
                if !dart_of.contains_key(&(u.0, v.0)) {
                    let d = DartId(dart_tail.len() as u32);
                    dart_of.insert((u.0, v.0), d);
                    dart_of.insert((v.0, u.0), d.twin());
                    dart_tail.push(u);
                    dart_tail.push(v);
                }
            }
        }
        let mut rotations: Vec<Vec<DartId>> = vec![Vec::new(); n];
        for (u, rot) in neighbor_rotations.iter().enumerate() {
            rotations[u] = rot.iter().map(|&v| dart_of[&(u as u32, v.0)]).collect();
        }

        let witness = match dart_of.get(&(witness.0 .0, witness.1 .0)) {
            Some(&d) => d,
            None => return Err(BuildError::BadWitness),
        };

        let mut g = PlaneGraph {
            rotations,
            dart_tail,
            rot_pos: Vec::new(),
            faces: Vec::new(),
            dart_face: Vec::new(),
            outer: FaceId(0),
        };
        g.reindex();
        if !g.is_connected() {
            return Err(BuildError::NotConnected);
        }
        g.recompute_faces(witness);
        debug_assert!(g.euler_holds());
        Ok(g)
    }

    /// Rebuilds `rot_pos` from the rotation lists.
    pub(crate) fn reindex(&mut self) {
        self.rot_pos = vec![0; self.dart_tail.len()];
        for rot in &self.rotations {
            for (i, &d) in rot.iter().enumerate() {
                self.rot_pos[d.0 as usize] = i as u32;
            }
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![VertexId(0)];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &d in self.rotation(u) {
                let v = self.head(d);
                if !seen[v.0 as usize] {
                    seen[v.0 as usize] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    /// Re-extracts all facial walks; `outer_witness` designates the outer
    /// face. Used after every surgery step.
    pub(crate) fn recompute_faces(&mut self, outer_witness: DartId) {
        let nd = self.dart_tail.len();
        self.faces.clear();
        self.dart_face = vec![FaceId(u32::MAX); nd];
        for start in 0..nd {
            if self.dart_face[start].0 != u32::MAX {
                continue;
            }
            let fid = FaceId(self.faces.len() as u32);
            let mut walk = Vec::new();
            let mut d = DartId(start as u32);
            loop {
                debug_assert_eq!(self.dart_face[d.0 as usize].0, u32::MAX);
                self.dart_face[d.0 as usize] = fid;
                walk.push(d);
                d = self.face_next(d);
                if d.0 as usize == start {
                    break;
                }
            }
            self.faces.push(walk);
        }
        self.outer = self.dart_face[outer_witness.0 as usize];
    }

    pub fn euler_holds(&self) -> bool {
        let v = self.num_vertices() as i64;
        let e = (self.dart_tail.len() / 2) as i64;
        let f = self.faces.len() as i64;
        v - e + f == 2
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn num_edges(&self) -> usize {
        self.dart_tail.len() / 2
    }

    pub fn num_darts(&self) -> usize {
        self.dart_tail.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.num_vertices() as u32).map(VertexId)
    }

    pub fn darts(&self) -> impl Iterator<Item = DartId> {
        (0..self.num_darts() as u32).map(DartId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.num_edges() as u32).map(EdgeId)
    }

    pub fn faces(&self) -> impl Iterator<Item = FaceId> {
        (0..self.num_faces() as u32).map(FaceId)
    }

    pub fn tail(&self, d: DartId) -> VertexId {
        self.dart_tail[d.0 as usize]
    }

    pub fn head(&self, d: DartId) -> VertexId {
        self.tail(d.twin())
    }

    pub fn rotation(&self, v: VertexId) -> &[DartId] {
        &self.rotations[v.0 as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotations[v.0 as usize].len()
    }

    /// Clockwise successor of `d` among the outgoing darts of its tail.
    pub fn cw_next(&self, d: DartId) -> DartId {
        let rot = self.rotation(self.tail(d));
        let i = self.rot_pos[d.0 as usize] as usize;
        rot[(i + 1) % rot.len()]
    }

    /// Clockwise predecessor of `d` at its tail.
    pub fn cw_prev(&self, d: DartId) -> DartId {
        let rot = self.rotation(self.tail(d));
        let i = self.rot_pos[d.0 as usize] as usize;
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Next dart along the facial walk.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.cw_next(d.twin())
    }

    pub fn face_of(&self, d: DartId) -> FaceId {
        self.dart_face[d.0 as usize]
    }

    pub fn face_walk(&self, f: FaceId) -> &[DartId] {
        &self.faces[f.0 as usize]
    }

    pub fn face_len(&self, f: FaceId) -> usize {
        self.faces[f.0 as usize].len()
    }

    pub fn outer_face(&self) -> FaceId {
        self.outer
    }

    pub fn is_outer(&self, f: FaceId) -> bool {
        f == self.outer
    }

    /// All facial walks (the outer one included), each a dart sequence.
    pub fn extract_faces(&self) -> Vec<Vec<DartId>> {
        self.faces.clone()
    }

    /// The angle keyed by dart `e`: bounded by `e` and its clockwise
    /// successor, lying in the face of `twin(e)`.
    pub fn angle(&self, e: DartId) -> Angle {
        Angle {
            vertex: self.tail(e),
            first_dart: e,
            second_dart: self.cw_next(e),
            face: self.face_of(e.twin()),
        }
    }

    /// Face that the angle keyed by `e` belongs to.
    pub fn angle_face(&self, e: DartId) -> FaceId {
        self.face_of(e.twin())
    }

    pub fn is_external_vertex(&self, v: VertexId) -> bool {
        self.rotation(v)
            .iter()
            .any(|&d| self.face_of(d) == self.outer || self.face_of(d.twin()) == self.outer)
    }

    /// All faces are 3-cycles, the outer one included.
    pub fn is_triangulated(&self) -> bool {
        self.faces.iter().all(|w| w.len() == 3)
    }

    /// All internal faces are 3-cycles.
    pub fn is_internally_triangulated(&self) -> bool {
        self.faces()
            .all(|f| self.is_outer(f) || self.face_len(f) == 3)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.rotation(u).iter().any(|&d| self.head(d) == v)
    }

    pub fn dart_between(&self, u: VertexId, v: VertexId) -> Option<DartId> {
        self.rotation(u).iter().copied().find(|&d| self.head(d) == v)
    }

    // ------------------------------------------------------------------
    // Surgery primitives. These edit rotations only; callers must finish
    // with `reindex` + `recompute_faces`.
    // ------------------------------------------------------------------

    /// Appends a fresh vertex with an empty rotation.
    pub(crate) fn add_vertex(&mut self) -> VertexId {
        self.rotations.push(Vec::new());
        VertexId(self.rotations.len() as u32 - 1)
    }

    /// Allocates a twin pair `(u, v)` / `(v, u)` without touching any
    /// rotation. Returns the dart `u -> v`.
    pub(crate) fn alloc_edge(&mut self, u: VertexId, v: VertexId) -> DartId {
        let d = DartId(self.dart_tail.len() as u32);
        self.dart_tail.push(u);
        self.dart_tail.push(v);
        d
    }

    pub(crate) fn rotation_mut(&mut self, v: VertexId) -> &mut Vec<DartId> {
        &mut self.rotations[v.0 as usize]
    }

    /// Inserts `new` immediately after `after` in the rotation of their
    /// common tail.
    pub(crate) fn insert_after(&mut self, after: DartId, new: DartId) {
        let v = self.tail(after);
        let rot = &mut self.rotations[v.0 as usize];
        let i = rot.iter().position(|&d| d == after).expect("dart in rotation");
        rot.insert(i + 1, new);
    }

    /// Subdivides the edge of dart `d = (u, w)` with a fresh vertex `z`.
    ///
    /// The pair of `d` is retargeted to `(u, z)`/`(z, u)` (so `d` keeps its
    /// slot at `u`), and a fresh pair `(z, w)`/`(w, z)` takes the old slot
    /// of `twin(d)` at `w`. The rotation at `z` is left for the caller to
    /// fill. Returns `(z, dart z->w)`.
    pub(crate) fn subdivide(&mut self, d: DartId) -> (VertexId, DartId) {
        let w = self.head(d);
        let z = self.add_vertex();
        let e = d.twin();
        // Retarget the existing pair.
        self.dart_tail[e.0 as usize] = z;
        let zw = self.alloc_edge(z, w);
        let wz = zw.twin();
        let rot = &mut self.rotations[w.0 as usize];
        let i = rot.iter().position(|&x| x == e).expect("twin in rotation");
        rot[i] = wz;
        (z, zw)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::constraints::{QConstraints, Quadrant};

    /// Triangle with rotations u:[v,w], v:[w,u], w:[u,v]; outer face is the
    /// walk u -> v -> w. Quadrants read off u=(0,0), v=(1,2), w=(2,1).
    pub fn t1() -> (PlaneGraph, QConstraints) {
        let g = PlaneGraph::build(
            3,
            &[
                vec![VertexId(1), VertexId(2)],
                vec![VertexId(2), VertexId(0)],
                vec![VertexId(0), VertexId(1)],
            ],
            (VertexId(0), VertexId(1)),
        )
        .unwrap();
        let mut q = QConstraints::unset(&g);
        q.set_edge(&g, VertexId(0), VertexId(1), Quadrant::NE);
        q.set_edge(&g, VertexId(0), VertexId(2), Quadrant::NE);
        q.set_edge(&g, VertexId(1), VertexId(2), Quadrant::SE);
        (g, q.finish())
    }

    /// Cyclic triangle: v in NE(u), w in NE(v), u in NE(w).
    pub fn t2() -> (PlaneGraph, QConstraints) {
        let g = PlaneGraph::build(
            3,
            &[
                vec![VertexId(1), VertexId(2)],
                vec![VertexId(2), VertexId(0)],
                vec![VertexId(0), VertexId(1)],
            ],
            (VertexId(0), VertexId(1)),
        )
        .unwrap();
        let mut q = QConstraints::unset(&g);
        q.set_edge(&g, VertexId(0), VertexId(1), Quadrant::NE);
        q.set_edge(&g, VertexId(1), VertexId(2), Quadrant::NE);
        q.set_edge(&g, VertexId(2), VertexId(0), Quadrant::NE);
        (g, q.finish())
    }

    /// Path u - v - w with both ends northeast of the middle vertex.
    pub fn p2() -> (PlaneGraph, QConstraints) {
        let g = PlaneGraph::build(
            3,
            &[
                vec![VertexId(1)],
                vec![VertexId(0), VertexId(2)],
                vec![VertexId(1)],
            ],
            (VertexId(0), VertexId(1)),
        )
        .unwrap();
        let mut q = QConstraints::unset(&g);
        q.set_edge(&g, VertexId(1), VertexId(0), Quadrant::NE);
        q.set_edge(&g, VertexId(1), VertexId(2), Quadrant::NE);
        (g, q.finish())
    }

    /// K4 with vertex 0 inside the triangle (1, 2, 3); quadrants from the
    /// drawing v=(0,0), a=(-1,2), b=(2,-1), c=(-2,-2).
    pub fn k4_apex() -> (PlaneGraph, QConstraints) {
        crate::generate::k4_apex()
    }
}

//! Labeling-preserving graph surgery.
//!
//! Three stages take an angular labeled plane graph to a quasi-triangulated
//! one whose internal angles are all 0 or 90 degrees:
//!
//! 1. [`triangulate_preserving_labeling`] wraps the graph in a fresh outer
//!    triangle when needed and cuts triangular ears off every internal face
//!    of length at least 4.
//! 2. [`eliminate_180_angles`] removes internal 180-degree angles by
//!    subdividing the opposite edge of the witnessing triangle and adding
//!    dummy edges.
//! 3. [`add_poles`] adds the four external pole vertices and connects every
//!    outer vertex with an empty quadrant to the matching pole.
//!
//! Every step refines the labeling and keeps it angular; with
//! `debug_assertions` each step re-checks both properties.

use crate::constraints::{extreme_dart, QConstraints, Quadrant, Side};
use crate::graph::{DartId, EdgeId, PlaneGraph, VertexId};
use crate::labeling::{
    check_angular, unique_labeling, AngleCategory, AngleLabeling, LabelingError,
};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

/// Map from original edges to their replacement paths (length 1 or 2).
#[derive(Debug, Clone, Default)]
pub struct SubdivisionMap {
    /// Edge -> subdivision vertex, when the edge was split.
    pub split: HashMap<EdgeId, VertexId>,
    /// Vertices added by any augmentation stage.
    pub dummy_vertices: HashSet<VertexId>,
    /// Edges added by any augmentation stage.
    pub dummy_edges: HashSet<EdgeId>,
}

impl SubdivisionMap {
    /// Replacement path of an original edge in the augmented graph: the
    /// subdivision vertex when split, otherwise none.
    pub fn replacement(&self, e: EdgeId) -> Option<VertexId> {
        self.split.get(&e).copied()
    }
}

/// Observer invoked after each individual surgery step with the graph and
/// labeling before and after, plus the dart renames the step performed.
/// Used by the invariance tests; the pipeline runs without one.
pub type StepObserver<'a> = dyn FnMut(&StepRecord) + 'a;

pub struct StepRecord<'a> {
    pub stage: &'static str,
    pub before_graph: &'a PlaneGraph,
    pub before_labeling: &'a AngleLabeling,
    pub after_graph: &'a PlaneGraph,
    pub after_labeling: &'a AngleLabeling,
    /// Darts of the old graph that changed identity (old -> new).
    pub renames: Vec<(DartId, DartId)>,
}

/// Verifies that `after` refines `before`: every angle of the old graph
/// equals the clockwise sum of the new angles between its bounding darts.
pub fn refinement_holds(rec: &StepRecord) -> bool {
    let bg = rec.before_graph;
    let ag = rec.after_graph;
    let rename: HashMap<DartId, DartId> = rec.renames.iter().copied().collect();
    let map = |d: DartId| rename.get(&d).copied().unwrap_or(d);
    for e in bg.darts() {
        let old_succ = bg.cw_next(e);
        let (start, stop) = (map(e), map(old_succ));
        let mut sum: u64 = 0;
        let mut d = start;
        let mut guard = 0;
        loop {
            sum += rec.after_labeling.get(d).degrees() as u64;
            d = ag.cw_next(d);
            if d == stop {
                break;
            }
            guard += 1;
            if guard > ag.num_darts() {
                return false;
            }
        }
        if sum != rec.before_labeling.get(e).degrees() as u64 {
            return false;
        }
    }
    true
}

fn notify(
    observer: &mut Option<&mut StepObserver>,
    stage: &'static str,
    before_graph: &PlaneGraph,
    before_labeling: &AngleLabeling,
    after_graph: &PlaneGraph,
    after_labeling: &AngleLabeling,
    renames: Vec<(DartId, DartId)>,
) {
    debug_assert!(
        check_angular(after_graph, after_labeling).is_empty(),
        "{stage}: labeling no longer angular"
    );
    if let Some(obs) = observer {
        obs(&StepRecord {
            stage,
            before_graph,
            before_labeling,
            after_graph,
            after_labeling,
            renames,
        });
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AugmentError {
    /// An ear diagonal would duplicate an existing edge where the proof
    /// rules it out; indicates a bug or a non-angular input.
    ParallelEdgeWouldBeCreated { from: VertexId, to: VertexId },
    NotAngular,
}

impl fmt::Display for AugmentError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            AugmentError::ParallelEdgeWouldBeCreated { from, to } => {
                write!(f, "diagonal {from} -> {to} already exists")
            }
            AugmentError::NotAngular => write!(f, "input labeling is not angular"),
        }
    }
}

impl std::error::Error for AugmentError {}

// ---------------------------------------------------------------------
// Stage 1: triangulation.
// ---------------------------------------------------------------------

/// Wraps `g` in a new outer triangle when its outer face is not a
/// 3-cycle, then cuts triangular ears until every face is a triangle.
/// The returned labeling refines `a` and remains angular.
pub fn triangulate_preserving_labeling(
    g: &PlaneGraph,
    a: &AngleLabeling,
    mut observer: Option<&mut StepObserver>,
) -> Result<(PlaneGraph, AngleLabeling), AugmentError> {
    if !check_angular(g, a).is_empty() {
        return Err(AugmentError::NotAngular);
    }
    let mut g = g.clone();
    let mut a = a.clone();

    if g.face_len(g.outer_face()) != 3 {
        let (g2, a2) = wrap_in_triangle(&g, &a);
        notify(&mut observer, "wrap", &g, &a, &g2, &a2, Vec::new());
        g = g2;
        a = a2;
    }

    // Cut ears in every internal face of length >= 4. Face ids shift as
    // edges are added, so work from a queue of representative darts.
    loop {
        let Some(face) = g
            .faces()
            .find(|&f| !g.is_outer(f) && g.face_len(f) >= 4)
        else {
            break;
        };
        let witness = g.face_walk(g.outer_face())[0];
        let start = g.face_walk(face)[0];
        cut_one_ear(&mut g, &mut a, start, witness, &mut observer)?;
    }
    debug_assert!(g.is_triangulated());
    Ok((g, a))
}

/// Adds the enclosing triangle (a, b, c) and the edge (v, a), where v is
/// the vertex of the canonical outer angle.
fn wrap_in_triangle(g: &PlaneGraph, a: &AngleLabeling) -> (PlaneGraph, AngleLabeling) {
    let mut g2 = g.clone();
    let mut cat: Vec<AngleCategory> = (0..g.num_darts() as u32)
        .map(|i| a.get(DartId(i)))
        .collect();

    // Canonical outer angle: at the head of the outer face's first dart.
    let d_in = g2.face_walk(g2.outer_face())[0];
    let e = d_in.twin(); // first bounding dart of the angle, at vertex v
    let e_next = g2.cw_next(e);
    let v = g2.tail(e);

    let va_cat = a.get(e); // the old outer angle value moves past (v,a)

    let ta = g2.add_vertex();
    let tb = g2.add_vertex();
    let tc = g2.add_vertex();
    let ab = g2.alloc_edge(ta, tb);
    let bc = g2.alloc_edge(tb, tc);
    let ca = g2.alloc_edge(tc, ta);
    let av = g2.alloc_edge(ta, v);
    let va = av.twin();

    // Rotations: a: [b, v, c]; b: [c, a]; c: [a, b]; v gains (v,a) after e.
    *g2.rotation_mut(ta) = vec![ab, av, ca.twin()];
    *g2.rotation_mut(tb) = vec![bc, ab.twin()];
    *g2.rotation_mut(tc) = vec![ca, bc.twin()];
    {
        let rot = g2.rotation_mut(v);
        let i = rot.iter().position(|&d| d == e).unwrap();
        rot.insert(i + 1, va);
    }

    // New angle categories. Angles are keyed by their first dart.
    let grow = |cat: &mut Vec<AngleCategory>| {
        while cat.len() < g2.num_darts() {
            cat.push(AngleCategory::A0);
        }
    };
    grow(&mut cat);
    cat[ab.0 as usize] = AngleCategory::A0; // angle (a,b)->(a,v)
    cat[av.0 as usize] = AngleCategory::A0; // angle (a,v)->(a,c)
    cat[ca.twin().0 as usize] = AngleCategory::A360; // angle (a,c)->(a,b)
    cat[bc.0 as usize] = AngleCategory::A90; // angle (b,c)->(b,a)
    cat[ab.twin().0 as usize] = AngleCategory::A270; // angle (b,a)->(b,c)
    cat[ca.0 as usize] = AngleCategory::A90; // angle (c,a)->(c,b)
    cat[bc.twin().0 as usize] = AngleCategory::A270; // angle (c,b)->(c,a)
    cat[e.0 as usize] = AngleCategory::A0; // angle e->(v,a)
    cat[va.0 as usize] = va_cat; // angle (v,a)->e'
    debug_assert_eq!(g2.cw_next(va), e_next);

    g2.reindex();
    g2.recompute_faces(ab);
    (g2, AngleLabeling::new(cat))
}

/// One ear cut in the face containing `start`. Scans the face clockwise
/// from `start` for the first table pattern and applies it.
fn cut_one_ear(
    g: &mut PlaneGraph,
    a: &mut AngleLabeling,
    start: DartId,
    outer_witness: DartId,
    observer: &mut Option<&mut StepObserver>,
) -> Result<(), AugmentError> {
    // Corner list of the face: for each walk dart d, the angle at head(d)
    // keyed by twin(d). The stored walk starts at the face's minimal dart,
    // which fixes the scan order.
    let walk: Vec<DartId> = g.face_walk(g.face_of(start)).to_vec();
    let corners: Vec<DartId> = walk.iter().map(|&d| d.twin()).collect();
    let k = corners.len();
    debug_assert!(k >= 4);
    let deg = |a: &AngleLabeling, e: DartId| a.get(e).degrees();

    // First match wins: big-then-small pairs, with 180 handled by the
    // two-diagonal rule; the all-90 4-cycle is the remaining case.
    let mut pick: Option<(usize, bool)> = None; // (index of gamma, is_table_a)
    for i in 0..k {
        let gamma = deg(a, corners[i]);
        let delta = deg(a, corners[(i + 1) % k]);
        if (gamma == 270 || gamma == 360) && (delta == 0 || delta == 90) {
            pick = Some((i, true));
            break;
        }
    }
    if pick.is_none() {
        for i in 0..k {
            let gamma = deg(a, corners[i]);
            let delta = deg(a, corners[(i + 1) % k]);
            if gamma == 180 && (delta == 0 || delta == 90) {
                pick = Some((i, false));
                break;
            }
        }
    }

    let before_g = g.clone();
    let before_a = a.clone();

    if let Some((i, true)) = pick {
        // Table (a): corners (v2, v3, v4) = (gamma, delta, beta); diagonal
        // (v2, v4); ear angles (180 - delta_part...) per the four rows.
        let e2 = corners[i];
        let e3 = corners[(i + 1) % k];
        let e4 = corners[(i + 2) % k];
        let v2 = g.tail(e2);
        let v4 = g.tail(e4);
        let gamma = deg(a, e2);
        let delta = deg(a, e3);
        let ear_at_v2 = 180 - delta; // 90 for delta=90, 180 for delta=0
        let remaining_at_v2 = gamma - ear_at_v2;
        debug_assert!(remaining_at_v2 > 0 && ear_at_v2 > 0);
        if g.has_edge(v2, v4) {
            return Err(AugmentError::ParallelEdgeWouldBeCreated { from: v2, to: v4 });
        }
        insert_diagonal(g, e2, e4);
        let d24 = g.dart_between(v2, v4).unwrap();
        let d42 = d24.twin();
        grow_labels(a, g.num_darts());
        // Angle splits: at v2 the remaining part comes first clockwise; at
        // v4 the ear part comes first.
        a.set(e2, AngleCategory::from_degrees(remaining_at_v2));
        a.set(d24, AngleCategory::from_degrees(ear_at_v2));
        a.set(e4, AngleCategory::A0);
        a.set(d42, AngleCategory::from_degrees(deg(&before_a, e4)));
        g.reindex();
        g.recompute_faces(outer_witness);
        notify(observer, "ear-cut", &before_g, &before_a, g, a, Vec::new());
        return Ok(());
    }

    if let Some((i, false)) = pick {
        // Table (b): corners (v1, v2, v3, v4) = (alpha, 180, delta, beta).
        // Diagonal (v1, v3) first, falling back to (v2, v4).
        let e1 = corners[(i + k - 1) % k];
        let e2 = corners[i];
        let e3 = corners[(i + 1) % k];
        let e4 = corners[(i + 2) % k];
        let (v1, v2, v3, v4) = (g.tail(e1), g.tail(e2), g.tail(e3), g.tail(e4));
        let delta = deg(a, e3);
        if !g.has_edge(v1, v3) {
            insert_diagonal(g, e1, e3);
            let d13 = g.dart_between(v1, v3).unwrap();
            let d31 = d13.twin();
            grow_labels(a, g.num_darts());
            // (alpha + 0, 180, 0 + delta, beta): ear (0, 180, 0).
            a.set(d13, AngleCategory::A0);
            a.set(e3, AngleCategory::A0);
            a.set(d31, AngleCategory::from_degrees(delta));
            // e1 keeps alpha.
        } else if !g.has_edge(v2, v4) {
            insert_diagonal(g, e2, e4);
            let d24 = g.dart_between(v2, v4).unwrap();
            let d42 = d24.twin();
            grow_labels(a, g.num_darts());
            // (alpha, s + rest, delta_in_ear, 0 + beta): for delta=0 the v2
            // split is 0+180, for delta=90 it is 90+90.
            let (v2_first, v2_second) = if delta == 0 { (0, 180) } else { (90, 90) };
            a.set(e2, AngleCategory::from_degrees(v2_first));
            a.set(d24, AngleCategory::from_degrees(v2_second));
            a.set(e4, AngleCategory::A0);
            a.set(d42, AngleCategory::from_degrees(deg(&before_a, e4)));
        } else {
            // Planarity excludes both diagonals being present.
            return Err(AugmentError::ParallelEdgeWouldBeCreated { from: v1, to: v3 });
        }
        g.reindex();
        g.recompute_faces(outer_witness);
        notify(observer, "ear-cut", &before_g, &before_a, g, a, Vec::new());
        return Ok(());
    }

    // No big-small pair: must be the all-90 quadrilateral.
    if k == 4 && corners.iter().all(|&e| deg(a, e) == 90) {
        let e1 = corners[0];
        let e2 = corners[1];
        let e3 = corners[2];
        let e4 = corners[3];
        let (v1, v2, v3, v4) = (g.tail(e1), g.tail(e2), g.tail(e3), g.tail(e4));
        if !g.has_edge(v1, v3) {
            insert_diagonal(g, e1, e3);
            let d13 = g.dart_between(v1, v3).unwrap();
            let d31 = d13.twin();
            grow_labels(a, g.num_darts());
            // (90 + 0, 90, 90 + 0, 90): ear (0, 90, 90) on the v1..v3 side.
            a.set(e1, AngleCategory::A90);
            a.set(d13, AngleCategory::A0);
            a.set(e3, AngleCategory::A90);
            a.set(d31, AngleCategory::A0);
        } else if !g.has_edge(v2, v4) {
            insert_diagonal(g, e2, e4);
            let d24 = g.dart_between(v2, v4).unwrap();
            let d42 = d24.twin();
            grow_labels(a, g.num_darts());
            // (90, 0 + 90, 90, 0 + 90): ear (90, 90, 0) on the v2..v4 side.
            a.set(e2, AngleCategory::A0);
            a.set(d24, AngleCategory::A90);
            a.set(e4, AngleCategory::A0);
            a.set(d42, AngleCategory::A90);
        } else {
            return Err(AugmentError::ParallelEdgeWouldBeCreated { from: v1, to: v3 });
        }
        g.reindex();
        g.recompute_faces(outer_witness);
        notify(observer, "ear-cut", &before_g, &before_a, g, a, Vec::new());
        return Ok(());
    }

    // Angular labelings always contain one of the patterns.
    Err(AugmentError::NotAngular)
}

/// Inserts the chord between the corners keyed by `ea` and `eb`: the new
/// dart at each corner goes between the corner's bounding darts.
fn insert_diagonal(g: &mut PlaneGraph, ea: DartId, eb: DartId) {
    let va = g.tail(ea);
    let vb = g.tail(eb);
    let dab = g.alloc_edge(va, vb);
    let dba = dab.twin();
    g.insert_after(ea, dab);
    g.insert_after(eb, dba);
}

fn grow_labels(a: &mut AngleLabeling, darts: usize) {
    while a.len() < darts {
        a.push(AngleCategory::A0);
    }
}

// ---------------------------------------------------------------------
// Stage 2: eliminating internal 180-degree angles.
// ---------------------------------------------------------------------

/// Quadrant-class scan order for the witness sets.
const DRAIN_ORDER: [Quadrant; 4] = [Quadrant::NE, Quadrant::NW, Quadrant::SW, Quadrant::SE];

/// True when `v` has an internal 180-degree angle spanning the (empty)
/// quadrant `quad`.
fn has_internal_180(g: &PlaneGraph, q: &QConstraints, a: &AngleLabeling, v: VertexId, quad: Quadrant) -> bool {
    g.rotation(v).iter().any(|&e| {
        a.get(e) == AngleCategory::A180
            && q.get(e).cw(1) == quad
            && !g.is_outer(g.angle_face(e))
    })
}

/// Removes every internal 180-degree angle by subdividing the opposite
/// edge of the witnessing face, per quadrant class in the order NE, NW,
/// SW, SE. Returns the augmented graph, its constraints, the subdivision
/// map, and (via `sub`) the set of added elements.
pub fn eliminate_180_angles(
    g: &PlaneGraph,
    q: &QConstraints,
    mut observer: Option<&mut StepObserver>,
) -> Result<(PlaneGraph, QConstraints, SubdivisionMap), AugmentError> {
    let mut g = g.clone();
    let mut q = q.clone();
    let mut a = unique_labeling(&g, &q).map_err(|_| AugmentError::NotAngular)?;
    if !check_angular(&g, &a).is_empty() {
        return Err(AugmentError::NotAngular);
    }
    let mut sub = SubdivisionMap::default();

    for quad in DRAIN_ORDER {
        // Witness set for this quadrant class.
        let mut witness: BTreeSet<VertexId> = g
            .vertices()
            .filter(|&v| has_internal_180(&g, &q, &a, v, quad))
            .collect();
        while let Some(&seed) = witness.iter().next() {
            // Descend until the two flanking extremes are outside the set.
            let mut v = seed;
            let mut guard = 0;
            loop {
                let u = extreme_dart(&g, &q, v, quad.cw(3), Side::Rightmost)
                    .map(|d| g.head(d))
                    .expect("180 angle has a preceding block");
                let w = extreme_dart(&g, &q, v, quad.cw(1), Side::Leftmost)
                    .map(|d| g.head(d))
                    .expect("180 angle has a following block");
                if witness.contains(&u) {
                    v = u;
                } else if witness.contains(&w) {
                    v = w;
                } else {
                    break;
                }
                guard += 1;
                assert!(guard <= witness.len(), "witness descent cycled at {v}");
            }
            let before_g = g.clone();
            let before_a = a.clone();
            let renames = split_180(&mut g, &mut q, v, quad, &mut sub)?;
            a = unique_labeling(&g, &q).map_err(|_| AugmentError::NotAngular)?;
            notify(
                &mut observer,
                "subdivision",
                &before_g,
                &before_a,
                &g,
                &a,
                renames,
            );
            witness.remove(&v);
            // Update membership of the touched vertices; splits only ever
            // remove 180 angles of this class.
            let stale: Vec<VertexId> = witness
                .iter()
                .copied()
                .filter(|&x| !has_internal_180(&g, &q, &a, x, quad))
                .collect();
            for x in stale {
                witness.remove(&x);
            }
        }
    }
    debug_assert!(g.vertices().all(|v| {
        DRAIN_ORDER.iter().all(|&qd| !has_internal_180(&g, &q, &a, v, qd))
    }));
    Ok((g, q, sub))
}

/// The single subdivision step at `v` whose internal 180-degree angle
/// spans `quad`. Returns dart renames (the retargeted twin).
fn split_180(
    g: &mut PlaneGraph,
    q: &mut QConstraints,
    v: VertexId,
    quad: Quadrant,
    sub: &mut SubdivisionMap,
) -> Result<Vec<(DartId, DartId)>, AugmentError> {
    // The 180 angle is bounded by (v,u) = last dart of block quad-1 and
    // (v,w) = first dart of block quad+1.
    let vu = extreme_dart(g, q, v, quad.cw(3), Side::Rightmost).expect("block before gap");
    let vw = extreme_dart(g, q, v, quad.cw(1), Side::Leftmost).expect("block after gap");
    debug_assert_eq!(g.cw_next(vu), vw);
    let u = g.head(vu);
    let w = g.head(vw);

    // The witnessing face (u, v, w) is internal; the edge (u, w) bounds it.
    let uw = g
        .dart_between(u, w)
        .expect("triangulated face opposite edge");
    let candidate_edge = uw.edge();
    assert!(
        !sub.dummy_edges.contains(&candidate_edge) && !sub.split.contains_key(&candidate_edge),
        "subdivision or dummy edge re-subdivided"
    );
    // Identify which side of (u, w) is the face (u, v, w): the face of
    // twin(vw) contains v's angle.
    let face_v = g.angle_face(vu); // face of the 180 angle
    let uw_face_side = if g.face_of(uw) == face_v { uw } else { uw.twin() };
    debug_assert_eq!(g.face_of(uw_face_side), face_v);

    // Other side of (u, w): outer face or an internal triangle with apex r.
    let other = uw_face_side.twin();
    let outer_side = g.is_outer(g.face_of(other));
    // Apex of the far triangle; resolve before any mutation.
    let apex = if outer_side {
        None
    } else {
        let r = g.head(g.face_next(other));
        debug_assert_ne!(r, v);
        Some(r)
    };

    // Subdivide (u, w). Work with the dart oriented u -> w.
    let d_uw = if g.tail(uw_face_side) == u { uw_face_side } else { uw_face_side.twin() };
    let quad_uw = q.get(d_uw);
    debug_assert_eq!(quad_uw, quad.cw(1), "face labels around the 180 angle");
    let was_original = !sub.dummy_edges.contains(&d_uw.edge());
    let old_twin = d_uw.twin();
    let (z, zw) = g.subdivide(d_uw);
    // Quadrants: (u,z) keeps quad_uw (and its twin z->u the opposite);
    // (z,w) also gets quad_uw.
    q.set(d_uw, quad_uw);
    q.push_edge(quad_uw); // darts (z,w), (w,z)
    debug_assert_eq!(zw.edge().dart(), zw);
    sub.dummy_vertices.insert(z);
    sub.dummy_edges.insert(zw.edge());
    if was_original {
        sub.split.insert(d_uw.edge(), z);
    } else {
        // Both halves of a split dummy edge stay dummy; nothing to record.
        sub.dummy_edges.insert(d_uw.edge());
    }
    let renames = vec![(old_twin, zw.twin())];

    // Dummy edge (v, z), inserted in v's gap.
    let dvz = g.alloc_edge(v, z);
    g.insert_after(vu, dvz);
    q.push_edge(quad);
    sub.dummy_edges.insert(dvz.edge());

    match apex {
        None => {
            // z's rotation: (z,u) @ quad-1, (z,w) @ quad+1, (z,v) @ quad+2.
            let zu = d_uw.twin();
            *g.rotation_mut(z) = vec![zu, zw, dvz.twin()];
            debug_assert_eq!(q.get(zu), quad_uw.opposite());
        }
        Some(r) => {
            // Second dummy edge (z, r) into the far triangle. In the old
            // face (u, w, r) the angle at r is keyed by (r, w); the new
            // dart goes between (r, w) and (r, u).
            let dzr = g.alloc_edge(z, r);
            let rw = g.dart_between(r, w).expect("apex adjacent to w");
            g.insert_after(rw, dzr.twin());
            q.push_edge(quad); // (z,r) gets quad, (r,z) the opposite
            let zu = d_uw.twin();
            *g.rotation_mut(z) = vec![zu, dzr, zw, dvz.twin()];
            sub.dummy_edges.insert(dzr.edge());
        }
    }

    g.reindex();
    // The outer witness: any dart on the current outer face; outer dart
    // ids survive retargeting.
    let outer_dart = g.face_walk(g.outer_face())[0];
    let outer_dart = if outer_dart == old_twin { zw.twin() } else { outer_dart };
    g.recompute_faces(outer_dart);
    Ok(renames)
}

// ---------------------------------------------------------------------
// Stage 3: pole insertion.
// ---------------------------------------------------------------------

/// The four external pole vertices in their quadrant ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoleSet {
    pub north: VertexId,
    pub west: VertexId,
    pub south: VertexId,
    pub east: VertexId,
}

impl PoleSet {
    pub fn contains(&self, v: VertexId) -> bool {
        v == self.north || v == self.west || v == self.south || v == self.east
    }

    pub fn for_quadrant(&self, quad: Quadrant) -> VertexId {
        match quad {
            Quadrant::NW => self.north,
            Quadrant::NE => self.east,
            Quadrant::SE => self.south,
            Quadrant::SW => self.west,
        }
    }
}

/// Adds the poles and connects every outer vertex with an empty quadrant
/// to the pole serving that quadrant. The input must be internally
/// triangulated with no internal angle above 90 degrees; the result is
/// quasi-triangulated.
pub fn add_poles(
    g: &PlaneGraph,
    q: &QConstraints,
    sub: &mut SubdivisionMap,
    mut observer: Option<&mut StepObserver>,
) -> Result<(PlaneGraph, QConstraints, PoleSet), AugmentError> {
    let mut g2 = g.clone();
    let mut q2 = q.clone();
    let a = unique_labeling(&g2, &q2).map_err(|_| AugmentError::NotAngular)?;
    if !check_angular(&g2, &a).is_empty() {
        return Err(AugmentError::NotAngular);
    }
    let before_g = g.clone();
    let before_a = a.clone();

    let north = g2.add_vertex();
    let west = g2.add_vertex();
    let south = g2.add_vertex();
    let east = g2.add_vertex();
    let poles = PoleSet { north, west, south, east };
    for p in [north, west, south, east] {
        sub.dummy_vertices.insert(p);
    }

    // Walk the outer face; at each angle emit the pole darts for the
    // quadrants strictly inside the angle's span.
    let outer = g2.face_walk(g2.outer_face()).to_vec();
    struct Emission {
        vertex: VertexId,
        after: DartId, // insert the pole dart after this dart at vertex
        pole_quad: Quadrant,
    }
    let mut emissions: Vec<Emission> = Vec::new();
    for &d in &outer {
        let e = d.twin();
        let v = g2.tail(e);
        let steps = a.get(e).steps();
        assert!(
            steps >= 2,
            "outer angle below 180° at {v}; input not a pipeline graph"
        );
        let start = q2.get(e);
        for j in 1..steps {
            emissions.push(Emission {
                vertex: v,
                after: e,
                pole_quad: start.cw(j),
            });
        }
    }
    assert!(!emissions.is_empty());

    // Per-emission pole darts.
    let mut fan_darts: Vec<DartId> = Vec::new();
    for em in &emissions {
        let pole = poles.for_quadrant(em.pole_quad);
        let dv = g2.alloc_edge(em.vertex, pole);
        q2.push_edge(em.pole_quad);
        sub.dummy_edges.insert(dv.edge());
        fan_darts.push(dv);
    }
    // Rotations at the boundary vertices: per angle, reversed insertion
    // keeps the clockwise sequence.
    for (i, em) in emissions.iter().enumerate().rev() {
        g2.insert_after(em.after, fan_darts[i]);
    }
    // Fans per pole, in walk order. The emission sequence winds through
    // the poles exactly once, but a pole's run may straddle the cyclic
    // start; rotate to a run boundary first.
    let mut per_pole: HashMap<VertexId, Vec<DartId>> = HashMap::new();
    let m = emissions.len();
    let cut = (0..m)
        .find(|&i| {
            emissions[(i + m - 1) % m].pole_quad != emissions[i].pole_quad
        })
        .unwrap_or(0);
    for i in 0..m {
        let j = (cut + i) % m;
        let pole = poles.for_quadrant(emissions[j].pole_quad);
        per_pole.entry(pole).or_default().push(fan_darts[j].twin());
    }

    // Ring edges, clockwise outer cycle W -> N -> E -> S.
    let wn = g2.alloc_edge(west, north);
    q2.push_edge(Quadrant::NE);
    let ne_ring = g2.alloc_edge(north, east);
    q2.push_edge(Quadrant::SE);
    let es = g2.alloc_edge(east, south);
    q2.push_edge(Quadrant::SW);
    let sw_ring = g2.alloc_edge(south, west);
    q2.push_edge(Quadrant::NW);
    for d in [wn, ne_ring, es, sw_ring] {
        sub.dummy_edges.insert(d.edge());
    }

    // Pole rotations: [ring-next, fans in reverse walk order, ring-prev].
    let ring_next = |p: VertexId| -> DartId {
        if p == north {
            ne_ring
        } else if p == east {
            es
        } else if p == south {
            sw_ring
        } else {
            wn
        }
    };
    let ring_prev = |p: VertexId| -> DartId {
        if p == north {
            wn.twin()
        } else if p == east {
            ne_ring.twin()
        } else if p == south {
            es.twin()
        } else {
            sw_ring.twin()
        }
    };
    for p in [north, west, south, east] {
        let mut rot = vec![ring_next(p)];
        if let Some(fans) = per_pole.get(&p) {
            rot.extend(fans.iter().rev().copied());
        }
        rot.push(ring_prev(p));
        *g2.rotation_mut(p) = rot;
    }

    g2.reindex();
    g2.recompute_faces(ne_ring);
    assert_eq!(g2.face_len(g2.outer_face()), 4);
    debug_assert!(g2.is_internally_triangulated(), "pole stage left a big face");

    let a2 = unique_labeling(&g2, &q2).map_err(|_| AugmentError::NotAngular)?;
    if !check_angular(&g2, &a2).is_empty() {
        return Err(AugmentError::NotAngular);
    }
    // Quasi-triangulated outputs have no internal angle above 90 degrees.
    debug_assert!(g2.darts().all(|e| {
        g2.is_outer(g2.angle_face(e)) || a2.get(e).steps() <= 1
    }));
    notify(&mut observer, "poles", &before_g, &before_a, &g2, &a2, Vec::new());
    Ok((g2, q2, poles))
}

/// Checks the quasi-triangulated shape: internally triangulated, outer
/// 4-cycle of poles in the prescribed quadrant ring.
pub fn is_quasi_triangulated(g: &PlaneGraph, q: &QConstraints) -> Option<PoleSet> {
    if g.face_len(g.outer_face()) != 4 || !g.is_internally_triangulated() {
        return None;
    }
    let walk = g.face_walk(g.outer_face());
    // Find the dart w_W -> w_N (labeled NE on the outer walk).
    for (i, &d) in walk.iter().enumerate() {
        if q.get(d) == Quadrant::NE {
            let west = g.tail(d);
            let north = g.head(d);
            let d2 = walk[(i + 1) % 4];
            let d3 = walk[(i + 2) % 4];
            if g.tail(d2) != north {
                return None;
            }
            let east = g.head(d2);
            let south = g.head(d3);
            if q.get(d2) == Quadrant::SE
                && q.get(d3) == Quadrant::SW
                && q.get(walk[(i + 3) % 4]) == Quadrant::NW
            {
                return Some(PoleSet { north, west, south, east });
            }
            return None;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::labeling::{find_large_angle_assignment, labeling_from_triangulated};

    fn angular_of(g: &PlaneGraph, q: &QConstraints) -> AngleLabeling {
        find_large_angle_assignment(g, q).expect("fixture is windrose-planar").1
    }

    #[test]
    fn wrap_of_path_keeps_labeling_angular() {
        let (g, q) = p2();
        let a = angular_of(&g, &q);
        let mut checks = 0usize;
        let mut obs = |rec: &StepRecord| {
            assert!(refinement_holds(rec), "stage {} broke refinement", rec.stage);
            checks += 1;
        };
        let (g2, a2) =
            triangulate_preserving_labeling(&g, &a, Some(&mut obs)).expect("triangulates");
        assert!(g2.is_triangulated());
        assert!(check_angular(&g2, &a2).is_empty());
        assert!(checks > 0);
    }

    #[test]
    fn t1_is_already_triangulated() {
        let (g, q) = t1();
        let a = angular_of(&g, &q);
        let (g2, a2) = triangulate_preserving_labeling(&g, &a, None).unwrap();
        assert_eq!(g2.num_vertices(), g.num_vertices());
        assert_eq!(g2.num_edges(), g.num_edges());
        assert!(check_angular(&g2, &a2).is_empty());
    }

    #[test]
    fn k4_elimination_splits_the_apex_angle() {
        let (g, q) = k4_apex();
        let a = labeling_from_triangulated(&g, &q).unwrap();
        assert!(check_angular(&g, &a).is_empty());
        let (g2, q2, sub) = eliminate_180_angles(&g, &q, None).unwrap();
        // One subdivision of the external edge (a, b) = (1, 2).
        assert_eq!(sub.split.len(), 1);
        assert_eq!(g2.num_vertices(), g.num_vertices() + 1);
        let a2 = unique_labeling(&g2, &q2).unwrap();
        assert!(check_angular(&g2, &a2).is_empty());
        // No internal 180 left.
        for e in g2.darts() {
            if !g2.is_outer(g2.angle_face(e)) {
                assert_ne!(a2.get(e), AngleCategory::A180);
            }
        }
        // The new vertex is northeast of the apex.
        let z = *sub.split.values().next().unwrap();
        let vz = g2.dart_between(VertexId(0), z).unwrap();
        assert_eq!(q2.get(vz), Quadrant::NE);
    }

    #[test]
    fn elimination_is_identity_without_180s() {
        let (g, q) = t1();
        let (g2, _, sub) = eliminate_180_angles(&g, &q, None).unwrap();
        assert_eq!(g2.num_vertices(), g.num_vertices());
        assert!(sub.split.is_empty());
    }

    #[test]
    fn poles_complete_the_k4_pipeline_shape() {
        let (g, q) = k4_apex();
        let (g2, q2, mut sub) = {
            let (g2, q2, sub) = eliminate_180_angles(&g, &q, None).unwrap();
            (g2, q2, sub)
        };
        let (g3, q3, poles) = add_poles(&g2, &q2, &mut sub, None).unwrap();
        assert!(is_quasi_triangulated(&g3, &q3).is_some());
        // Ring constraints.
        let wn = g3.dart_between(poles.west, poles.north).unwrap();
        assert_eq!(q3.get(wn), Quadrant::NE);
        let sw = g3.dart_between(poles.south, poles.west).unwrap();
        assert_eq!(q3.get(sw), Quadrant::NW);
        let es = g3.dart_between(poles.east, poles.south).unwrap();
        assert_eq!(q3.get(es), Quadrant::SW);
        let ne = g3.dart_between(poles.north, poles.east).unwrap();
        assert_eq!(q3.get(ne), Quadrant::SE);
        // Faces with two consecutive poles carry angles (0, 90, 90).
        let a3 = unique_labeling(&g3, &q3).unwrap();
        assert!(check_angular(&g3, &a3).is_empty());
        let mut saw_ring_face = false;
        for f in g3.faces() {
            if g3.is_outer(f) {
                continue;
            }
            let walk = g3.face_walk(f);
            let vs: Vec<VertexId> = walk.iter().map(|&d| g3.tail(d)).collect();
            let pole_count = vs.iter().filter(|&&v| poles.contains(v)).count();
            if pole_count == 2 {
                saw_ring_face = true;
                let mut cats: Vec<u32> =
                    walk.iter().map(|&d| a3.get(d.twin()).degrees()).collect();
                cats.sort();
                assert_eq!(cats, vec![0, 90, 90]);
            }
        }
        assert!(saw_ring_face);
    }
}

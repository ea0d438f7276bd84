//! Coordinate assignment and the end-to-end pipeline.
//!
//! Quasi-triangulated graphs are drawn straight-line by ranking vertices
//! in topological orders of the two directed views; general instances are
//! augmented first and collapsed back to a 1-bend drawing of the input.

use crate::augment::{
    add_poles, eliminate_180_angles, is_quasi_triangulated, triangulate_preserving_labeling,
    AugmentError, PoleSet, StepObserver, SubdivisionMap,
};
use crate::constraints::{
    check_q_consistency, directed_view, Axis, QConstraints, QViolation,
};
use crate::graph::{DartId, PlaneGraph, VertexId};
use crate::labeling::{
    check_angular, constraints_from_labeling, find_large_angle_assignment,
    labeling_from_triangulated, AngleLabeling, AngularViolation, LabelingError, NoAssignment,
};
use crate::verify::{verify_drawing, CoordinateKind, Drawing, VerificationReport};
use crate::geom::Point;
use std::fmt;

pub type GridCoord = i64;
pub type GridDrawing = Drawing<GridCoord>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DrawError {
    /// A directed view contains a cycle: the input labeling cannot have
    /// been angular.
    CyclicView { axis: Axis, witness: VertexId },
    NotQuasiTriangulated,
}

impl fmt::Display for DrawError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            DrawError::CyclicView { axis, witness } => write!(
                f,
                "directed {} view has a cycle through {witness}",
                match axis {
                    Axis::Vertical => "vertical",
                    Axis::Horizontal => "horizontal",
                }
            ),
            DrawError::NotQuasiTriangulated => write!(f, "input is not quasi-triangulated"),
        }
    }
}

impl std::error::Error for DrawError {}

/// Straight-line drawing of a quasi-triangulated constrained graph:
/// x = rank in a topological order of the horizontal view, y = rank in a
/// topological order of the vertical view.
pub fn quasi_triangulated_drawing(
    g: &PlaneGraph,
    q: &QConstraints,
) -> Result<(GridDrawing, PoleSet), DrawError> {
    let poles = is_quasi_triangulated(g, q).ok_or(DrawError::NotQuasiTriangulated)?;
    let n = g.num_vertices();
    let horizontal = directed_view(g, q, Axis::Horizontal)
        .topological_order(n)
        .map_err(|w| DrawError::CyclicView { axis: Axis::Horizontal, witness: w })?;
    let vertical = directed_view(g, q, Axis::Vertical)
        .topological_order(n)
        .map_err(|w| DrawError::CyclicView { axis: Axis::Vertical, witness: w })?;
    let mut points = vec![Point::new(0i64, 0i64); n];
    for (x, &v) in horizontal.iter().enumerate() {
        points[v.0 as usize].x = x as i64;
    }
    for (y, &v) in vertical.iter().enumerate() {
        points[v.0 as usize].y = y as i64;
    }
    debug_assert_eq!(points[poles.west.0 as usize].x, 0);
    debug_assert_eq!(points[poles.east.0 as usize].x, n as i64 - 1);
    debug_assert_eq!(points[poles.south.0 as usize].y, 0);
    debug_assert_eq!(points[poles.north.0 as usize].y, n as i64 - 1);
    Ok((
        Drawing::straight(points, g.num_edges(), CoordinateKind::IntegerGrid),
        poles,
    ))
}

/// Restriction of a drawing of the augmented graph to the input graph:
/// original vertices keep their points, subdivided edges become 1-bend
/// polylines through their subdivision vertex, dummies are dropped.
pub fn collapse_to_one_bend(
    g: &PlaneGraph,
    augmented: &GridDrawing,
    sub: &SubdivisionMap,
) -> GridDrawing {
    let points: Vec<Point<i64>> = g
        .vertices()
        .map(|v| augmented.points[v.0 as usize].clone())
        .collect();
    let bends: Vec<Vec<Point<i64>>> = g
        .edges()
        .map(|e| match sub.replacement(e) {
            Some(z) => vec![augmented.points[z.0 as usize].clone()],
            None => Vec::new(),
        })
        .collect();
    Drawing {
        points,
        bends,
        kind: CoordinateKind::IntegerGrid,
    }
}

/// Why an instance is not windrose-planar (or not valid to begin with).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Twin or cyclic-order violations in the constraints.
    InconsistentConstraints(Vec<QViolation>),
    /// An ambiguous vertex with no angle on the outer face (triangulated
    /// inputs).
    InternalAmbiguousVertex(VertexId),
    /// The unique candidate labeling violates the angular conditions
    /// (triangulated inputs).
    NotAngular(Vec<AngularViolation>),
    /// Demand computation failed or no feasible assignment exists.
    NoAssignment(NoAssignment),
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Certificate::InconsistentConstraints(vs) => {
                write!(f, "inconsistent constraints: ")?;
                for v in vs {
                    write!(f, "{v}; ")?;
                }
                Ok(())
            }
            Certificate::InternalAmbiguousVertex(v) => {
                write!(f, "internal ambiguous vertex {v}")
            }
            Certificate::NotAngular(vs) => {
                write!(f, "labeling violates the angular conditions: ")?;
                for v in vs {
                    write!(f, "{v}; ")?;
                }
                Ok(())
            }
            Certificate::NoAssignment(e) => write!(f, "infeasible assignment: {e}"),
        }
    }
}

/// Statistics of a successful pipeline run, used by the acceptance tests.
#[derive(Debug, Clone)]
pub struct PipelineStats {
    pub input_vertices: usize,
    pub augmented_vertices: usize,
    pub grid: i64,
}

pub enum PipelineOutcome {
    Drawn {
        drawing: GridDrawing,
        stats: PipelineStats,
        report: VerificationReport,
    },
    Rejected(Certificate),
}

impl PipelineOutcome {
    pub fn drawing(&self) -> Option<&GridDrawing> {
        match self {
            PipelineOutcome::Drawn { drawing, .. } => Some(drawing),
            PipelineOutcome::Rejected(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            PipelineOutcome::Drawn { .. } => None,
            PipelineOutcome::Rejected(c) => Some(c),
        }
    }
}

/// Internal pipeline failures: these indicate bugs, not unsatisfiable
/// inputs, and are surfaced as panics in tests.
#[derive(Debug)]
pub enum PipelineError {
    Augment(AugmentError),
    Draw(DrawError),
    SelfCheckFailed(VerificationReport),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            PipelineError::Augment(e) => write!(f, "augmentation failed: {e}"),
            PipelineError::Draw(e) => write!(f, "drawing failed: {e}"),
            PipelineError::SelfCheckFailed(r) => write!(f, "self-verification failed: {r}"),
        }
    }
}

impl std::error::Error for PipelineError {}

/// Tests windrose planarity and constructs a certified 1-bend drawing.
pub fn windrose_pipeline(
    g: &PlaneGraph,
    q: &QConstraints,
) -> Result<PipelineOutcome, PipelineError> {
    windrose_pipeline_observed(g, q, None)
}

/// Pipeline with an observer receiving every individual surgery step.
pub fn windrose_pipeline_observed(
    g: &PlaneGraph,
    q: &QConstraints,
    mut observer: Option<&mut StepObserver>,
) -> Result<PipelineOutcome, PipelineError> {
    let violations = check_q_consistency(g, q);
    if !violations.is_empty() {
        return Ok(PipelineOutcome::Rejected(Certificate::InconsistentConstraints(violations)));
    }

    // An angular labeling, or a certificate that none exists.
    let labeling: AngleLabeling = if g.is_triangulated() {
        match labeling_from_triangulated(g, q) {
            Ok(a) => {
                let vs = check_angular(g, &a);
                if !vs.is_empty() {
                    return Ok(PipelineOutcome::Rejected(Certificate::NotAngular(vs)));
                }
                a
            }
            Err(LabelingError::InternalAmbiguousVertex { vertex }) => {
                return Ok(PipelineOutcome::Rejected(Certificate::InternalAmbiguousVertex(vertex)));
            }
            Err(e) => unreachable!("triangulated labeling failed: {e}"),
        }
    } else {
        match find_large_angle_assignment(g, q) {
            Ok((_, a)) => a,
            Err(e) => return Ok(PipelineOutcome::Rejected(Certificate::NoAssignment(e))),
        }
    };

    // Triangulate, recover constraints anchored at an original dart.
    let (g1, a1) = triangulate_preserving_labeling(g, &labeling, observer.as_deref_mut())
        .map_err(PipelineError::Augment)?;
    let anchor = DartId(0);
    let q1 = constraints_from_labeling(&g1, &a1, anchor, q.get(anchor))
        .expect("refined angular labeling propagates");
    debug_assert!(g.darts().all(|d| q1.get(d) == q.get(d)));

    // Remove internal 180-degree angles, then add the poles.
    let (g2, q2, mut sub) = eliminate_180_angles(&g1, &q1, observer.as_deref_mut())
        .map_err(PipelineError::Augment)?;
    let (g3, q3, _poles) =
        add_poles(&g2, &q2, &mut sub, observer.as_deref_mut()).map_err(PipelineError::Augment)?;

    // Draw and collapse.
    let (d3, _) = quasi_triangulated_drawing(&g3, &q3).map_err(PipelineError::Draw)?;
    let drawing = collapse_to_one_bend(g, &d3, &sub);

    // Self-certification.
    let report = verify_drawing(g, q, &drawing.map_coords(|&c| c as i128));
    if !report.pass() {
        return Err(PipelineError::SelfCheckFailed(report));
    }
    let grid = g3.num_vertices() as i64 - 1;
    Ok(PipelineOutcome::Drawn {
        drawing,
        stats: PipelineStats {
            input_vertices: g.num_vertices(),
            augmented_vertices: g3.num_vertices(),
            grid,
        },
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn t1_pipeline_draws_and_verifies() {
        let (g, q) = t1();
        match windrose_pipeline(&g, &q).unwrap() {
            PipelineOutcome::Drawn { drawing, stats, report } => {
                assert!(report.pass());
                assert!(drawing.max_bends() <= 1);
                for p in &drawing.points {
                    assert!(p.x >= 0 && p.x <= stats.grid);
                    assert!(p.y >= 0 && p.y <= stats.grid);
                }
            }
            PipelineOutcome::Rejected(c) => panic!("T1 rejected: {c}"),
        }
    }

    #[test]
    fn t2_pipeline_rejects() {
        let (g, q) = t2();
        match windrose_pipeline(&g, &q).unwrap() {
            PipelineOutcome::Drawn { .. } => panic!("cyclic triangle drawn"),
            PipelineOutcome::Rejected(c) => {
                assert!(matches!(c, Certificate::NotAngular(_)));
            }
        }
    }

    #[test]
    fn p2_pipeline_draws() {
        let (g, q) = p2();
        let out = windrose_pipeline(&g, &q).unwrap();
        assert!(out.drawing().is_some());
    }

    #[test]
    fn k4_pipeline_draws_with_single_bends() {
        let (g, q) = k4_apex();
        match windrose_pipeline(&g, &q).unwrap() {
            PipelineOutcome::Drawn { drawing, .. } => {
                assert!(drawing.max_bends() <= 1);
                // Edge (1,2) was subdivided, so it carries the single bend.
                let e12 = g.dart_between(VertexId(1), VertexId(2)).unwrap().edge();
                assert_eq!(drawing.bends_of(e12).len(), 1);
            }
            PipelineOutcome::Rejected(c) => panic!("K4 rejected: {c}"),
        }
    }

    #[test]
    fn sliver_triangle_with_external_180_draws() {
        // 3-cycle a, b, c with b SE of a, c NW of a and c NW of b; the
        // inner face bows northeast, so the external vertex a carries an
        // internal 180-degree angle.
        let g = PlaneGraph::build(
            3,
            &[
                vec![VertexId(1), VertexId(2)], // a: [b, c]
                vec![VertexId(0), VertexId(2)], // b: [a, c]
                vec![VertexId(1), VertexId(0)], // c: [b, a]
            ],
            (VertexId(1), VertexId(0)),
        )
        .unwrap();
        let mut qb = crate::constraints::QConstraints::unset(&g);
        qb.set_edge(&g, VertexId(0), VertexId(1), crate::constraints::Quadrant::SE);
        qb.set_edge(&g, VertexId(0), VertexId(2), crate::constraints::Quadrant::NW);
        qb.set_edge(&g, VertexId(1), VertexId(2), crate::constraints::Quadrant::NW);
        let q = qb.finish();
        assert!(check_q_consistency(&g, &q).is_empty());
        match windrose_pipeline(&g, &q).unwrap() {
            PipelineOutcome::Drawn { report, .. } => assert!(report.pass()),
            PipelineOutcome::Rejected(c) => panic!("sliver rejected: {c}"),
        }
    }
}

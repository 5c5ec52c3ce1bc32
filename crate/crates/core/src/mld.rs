//! The decoration construction and its inverse local derivation.
//!
//! A small finite graph with a compactly supported eigenfunction is planted,
//! properly scaled, at every occurrence of a chosen ball-pattern class. The
//! forward map adds the graph's vertex set at each occurrence; the inverse
//! keeps exactly the points whose r/42- and r/3-ball neighborhoods coincide.
//! Both directions are local rules, so the original and decorated systems are
//! mutually locally derivable.

use crate::error::{Error, Result};
use crate::geometry::{sets_equal, sort_lex, DeloneSet, GeneratorTag, Point, Window};
use crate::patterns::{self, PatternClass};
use crate::MATCH_TOL;

/// The planted graph: vertex positions relative to the occurrence, an edge
/// list, and an exact eigenfunction of the adjacency (hopping) operator that
/// vanishes on the corner vertices. Extending the eigenfunction by zero stays
/// an eigenfunction no matter what edges attach at the corners.
#[derive(Clone, Debug)]
pub struct FiniteGraph {
    vertices: Vec<Point>,
    edges: Vec<(usize, usize)>,
    eigenfunction: Vec<f64>,
    eigenvalue: f64,
    corner_indices: Vec<usize>,
    scale_r: f64,
}

/// Index layout of the built-in graph: inner pair {a, b} carrying the
/// eigenfunction, corner pair {c, d} where external edges may attach.
pub const INNER_A: usize = 0;
pub const INNER_B: usize = 1;
pub const CORNER_C: usize = 2;
pub const CORNER_D: usize = 3;

/// Builds the planted graph at scale `r`: vertices
/// a = (0, r/42), b = (0, -r/42), c = (-r/42, 0), d = (r/42, 0),
/// edges {a,c}, {a,d}, {b,c}, {b,d}, eigenfunction u = (1, -1, 0, 0) with
/// adjacency eigenvalue 0, corners {c, d}. The diameter r/21 is attained by
/// both antipodal pairs and all vertices lie in the closed ball of radius
/// r/42.
pub fn build_gfin(r: f64) -> Result<FiniteGraph> {
    if r <= 0.0 {
        return Err(Error::InvalidArgument("graph scale must be positive".into()));
    }
    let h = r / 42.0;
    Ok(FiniteGraph {
        vertices: vec![
            Point::xy(0.0, h),
            Point::xy(0.0, -h),
            Point::xy(-h, 0.0),
            Point::xy(h, 0.0),
        ],
        edges: vec![
            (INNER_A, CORNER_C),
            (INNER_A, CORNER_D),
            (INNER_B, CORNER_C),
            (INNER_B, CORNER_D),
        ],
        eigenfunction: vec![1.0, -1.0, 0.0, 0.0],
        eigenvalue: 0.0,
        corner_indices: vec![CORNER_C, CORNER_D],
        scale_r: r,
    })
}

impl FiniteGraph {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn eigenfunction(&self) -> &[f64] {
        &self.eigenfunction
    }

    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue
    }

    pub fn corner_indices(&self) -> &[usize] {
        &self.corner_indices
    }

    /// The decoration scale r the graph was built for.
    pub fn scale(&self) -> f64 {
        self.scale_r
    }

    /// Satellite offset from the occurrence center, r/42.
    pub fn satellite_offset(&self) -> f64 {
        self.scale_r / 42.0
    }

    pub fn diameter(&self) -> f64 {
        let mut diam = 0.0_f64;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                diam = diam.max(self.vertices[i].dist(&self.vertices[j]));
            }
        }
        diam
    }

    /// Dense adjacency matrix of the graph alone.
    pub fn adjacency(&self) -> ndarray::Array2<f64> {
        let n = self.vertices.len();
        let mut m = ndarray::Array2::zeros((n, n));
        for &(i, j) in &self.edges {
            m[[i, j]] = 1.0;
            m[[j, i]] = 1.0;
        }
        m
    }
}

/// Plants `graph` at every occurrence of `class` in the trusted region of
/// `omega`. Requires the scale below the packing radius so decorated clusters
/// never collide; the result is Delone again, with the untrusted margin grown
/// by the pattern radius.
pub fn decorate(omega: &DeloneSet, class: &PatternClass, graph: &FiniteGraph) -> Result<DeloneSet> {
    let r = graph.scale();
    if r >= omega.r_pack() {
        return Err(Error::ScaleViolation {
            r,
            r_pack: omega.r_pack(),
        });
    }
    if omega.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: omega.dim(),
        });
    }
    let s = class.radius();
    let scan = omega.trusted_window(s)?;
    let occ = patterns::occurrences(omega, class, &scan)?;
    let mut points = omega.points().to_vec();
    for t in &occ {
        for v in graph.vertices() {
            points.push(v.translate(t.coords()));
        }
    }
    sort_lex(&mut points);
    omega.with_points(
        points,
        omega.margin() + s,
        GeneratorTag::Decorated {
            r,
            pattern: class.id_hash(),
        },
    )
}

/// The inverse local derivation: keeps exactly the points whose r/3-ball and
/// r/42-ball neighborhoods coincide, i.e. the points with no neighbor at
/// distance in (r/42, r/3]. Host points pass, satellites fail. Only points
/// classifiable inside the trusted region are emitted; the margin grows by
/// r/3.
pub fn underive(omega_b: &DeloneSet, r: f64) -> Result<DeloneSet> {
    if r <= 0.0 {
        return Err(Error::InvalidArgument("derivation scale must be positive".into()));
    }
    if let GeneratorTag::Decorated { r: set_r, .. } = omega_b.generator() {
        if (set_r - r).abs() > MATCH_TOL {
            return Err(Error::ScaleMismatch {
                rule_r: r,
                set_r: *set_r,
            });
        }
    }
    let keep_region = omega_b.trusted_window(r / 3.0)?;
    let grid = omega_b.grid(r / 3.0);
    // the lower annulus edge carries the match tolerance so satellites at
    // exactly r/42 stay inside the small ball despite coordinate rounding
    let lo = r / 42.0 + MATCH_TOL;
    let kept: Vec<Point> = omega_b
        .points()
        .iter()
        .filter(|x| keep_region.contains(x) && !grid.any_in_annulus(x, lo, r / 3.0))
        .cloned()
        .collect();
    omega_b.with_points(
        kept,
        omega_b.margin() + r / 3.0,
        GeneratorTag::Underived { r },
    )
}

/// A local rule mapping Delone samples to Delone samples. Locality means the
/// output near x depends only on the input within a ball of the stated
/// radius around x.
pub trait LocalDerivation {
    fn radius(&self) -> f64;
    fn apply(&self, omega: &DeloneSet) -> Result<DeloneSet>;
}

/// The forward decoration as a local derivation.
pub struct Decoration {
    pub class: PatternClass,
    pub graph: FiniteGraph,
}

impl LocalDerivation for Decoration {
    fn radius(&self) -> f64 {
        // adding a satellite at y needs the pattern inside B(y, s + r/42)
        self.class.radius() + self.graph.satellite_offset()
    }

    fn apply(&self, omega: &DeloneSet) -> Result<DeloneSet> {
        decorate(omega, &self.class, &self.graph)
    }
}

/// The inverse derivation as a local rule of radius r/3.
pub struct Underivation {
    pub r: f64,
}

impl LocalDerivation for Underivation {
    fn radius(&self) -> f64 {
        self.r / 3.0
    }

    fn apply(&self, omega: &DeloneSet) -> Result<DeloneSet> {
        underive(omega, self.r)
    }
}

/// Locality audit: when two inputs agree on `B(x, s + 2 r_D)`, a local rule
/// must produce identical output on `B(x, s)`. Errors if the caller failed
/// to arrange the input agreement; returns whether the outputs agree.
pub fn verify_locality(
    rule: &dyn LocalDerivation,
    omega1: &DeloneSet,
    omega2: &DeloneSet,
    x: &Point,
    s: f64,
) -> Result<bool> {
    let protect = Window::ball(x.clone(), s + 2.0 * rule.radius());
    let in1 = omega1.points_in(&protect);
    let in2 = omega2.points_in(&protect);
    if !sets_equal(&in1, &in2, MATCH_TOL) {
        return Err(Error::LocalityPrecondition);
    }
    let probe = Window::ball(x.clone(), s);
    let out1 = rule.apply(omega1)?.points_in(&probe);
    let out2 = rule.apply(omega2)?.points_in(&probe);
    Ok(sets_equal(&out1, &out2, MATCH_TOL))
}

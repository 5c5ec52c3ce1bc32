//! Finite samples of Delone sets with measured packing and covering radii.

use crate::error::{Error, Result};
use crate::par;
use crate::MATCH_TOL;

use super::grid::CellGrid;
use super::point::{sort_lex, Point};
use super::window::Window;

/// How a sample was produced. `Decorated` keeps the scale and pattern id so
/// the inverse derivation can recover them from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorTag {
    SquareLattice { spacing: f64 },
    TriangularLattice { spacing: f64 },
    CutProjectOctagonal { seed: u64 },
    Decorated { r: f64, pattern: String },
    Underived { r: f64 },
    FromFile,
}

impl GeneratorTag {
    pub fn label(&self) -> String {
        match self {
            GeneratorTag::SquareLattice { spacing } => format!("square spacing={spacing}"),
            GeneratorTag::TriangularLattice { spacing } => {
                format!("triangular spacing={spacing}")
            }
            GeneratorTag::CutProjectOctagonal { seed } => format!("ammann-beenker seed={seed}"),
            GeneratorTag::Decorated { r, pattern } => format!("decorated r={r} pattern={pattern}"),
            GeneratorTag::Underived { r } => format!("underived r={r}"),
            GeneratorTag::FromFile => "file".into(),
        }
    }
}

/// A finite sample of a Delone set, restricted to a generation window.
///
/// `margin` is the width of the band along the window boundary inside which
/// the sample may disagree with the infinite model set (generators produce
/// margin 0; local derivations grow it). Operations that conceptually need
/// the infinite set only trust the margin-eroded window.
#[derive(Clone, Debug)]
pub struct DeloneSet {
    points: Vec<Point>,
    window: Window,
    margin: f64,
    generator: GeneratorTag,
    r_pack: f64,
    cover_radius: f64,
}

impl DeloneSet {
    /// Builds a sample from raw points: sorts, rejects duplicates and
    /// out-of-window points, and measures the packing and covering radii.
    pub fn from_points(
        mut points: Vec<Point>,
        window: Window,
        margin: f64,
        generator: GeneratorTag,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyWindow);
        }
        let dim = window.dim();
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
        if let Some(p) = points.iter().find(|p| !window.contains(p)) {
            return Err(Error::InvalidArgument(format!(
                "point {p} outside the generation window"
            )));
        }
        sort_lex(&mut points);
        points.dedup_by(|a, b| a.approx_eq(b, MATCH_TOL));

        let min_dist = min_pairwise_distance(&points);
        if min_dist <= 2.0 * MATCH_TOL {
            return Err(Error::InvalidArgument(
                "sample contains near-duplicate points".into(),
            ));
        }
        let r_pack = min_dist / 2.0;
        let cover_radius = measure_cover_radius(&points, &window, margin);
        Ok(DeloneSet {
            points,
            window,
            margin,
            generator,
            r_pack,
            cover_radius,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn generator(&self) -> &GeneratorTag {
        &self.generator
    }

    /// Measured packing radius: half the minimal pairwise distance.
    pub fn r_pack(&self) -> f64 {
        self.r_pack
    }

    /// Measured covering radius, valid away from the generation boundary.
    pub fn cover_radius(&self) -> f64 {
        self.cover_radius
    }

    /// The window eroded by the untrusted margin plus `extra`.
    pub fn trusted_window(&self, extra: f64) -> Result<Window> {
        self.window.erode(self.margin + extra)
    }

    /// True when `q`, dilated by `extra`, stays inside the trusted region.
    pub fn trusts(&self, q: &Window, extra: f64) -> bool {
        match self.trusted_window(0.0) {
            Ok(t) => t.encloses(&q.dilate(extra)),
            Err(_) => false,
        }
    }

    /// Points lying in `q` (closed), in lexicographic order.
    pub fn points_in(&self, q: &Window) -> Vec<Point> {
        self.points
            .iter()
            .filter(|p| q.contains(p))
            .cloned()
            .collect()
    }

    /// The whole sample shifted by `t` (window shifts along; measurements are
    /// translation invariant).
    pub fn translate(&self, t: &[f64]) -> DeloneSet {
        DeloneSet {
            points: self.points.iter().map(|p| p.translate(t)).collect(),
            window: self.window.translate(t),
            margin: self.margin,
            generator: self.generator.clone(),
            r_pack: self.r_pack,
            cover_radius: self.cover_radius,
        }
    }

    /// Replaces the point list, remeasuring radii; used by local derivations.
    pub(crate) fn with_points(
        &self,
        points: Vec<Point>,
        margin: f64,
        generator: GeneratorTag,
    ) -> Result<DeloneSet> {
        DeloneSet::from_points(points, self.window.clone(), margin, generator)
    }

    /// A cell grid over the sample sized for queries of radius about `r`.
    pub(crate) fn grid(&self, r: f64) -> CellGrid<'_> {
        CellGrid::build(&self.points, r.max(1e-6))
    }

    /// Typical spacing `(volume / n)^(1/d)`; a scale, not a measurement.
    pub fn spacing_estimate(&self) -> f64 {
        (self.window.volume() / self.points.len() as f64).powf(1.0 / self.dim() as f64)
    }

    /// Mean nearest-neighbor distance over the sample.
    pub fn mean_nn_distance(&self) -> f64 {
        if self.points.len() < 2 {
            return f64::NAN;
        }
        let mut radius = 2.0 * self.spacing_estimate();
        loop {
            let grid = CellGrid::build(&self.points, radius);
            let per_point = par::map_range(self.points.len(), |i| {
                let mut best = f64::INFINITY;
                for j in grid.indices_within(&self.points[i], radius) {
                    if j != i {
                        best = best.min(self.points[i].dist_sq(&self.points[j]));
                    }
                }
                best
            });
            if per_point.iter().all(|d| d.is_finite()) {
                return per_point.iter().map(|d| d.sqrt()).sum::<f64>()
                    / self.points.len() as f64;
            }
            radius *= 2.0;
        }
    }
}

/// Points of `omega` in `q` lying within `range` of the boundary of `q`
/// (strict inequality, matching the open collar definition).
pub fn inner_boundary_sites(omega: &DeloneSet, q: &Window, range: f64) -> Vec<Point> {
    assert!(range > 0.0);
    omega
        .points()
        .iter()
        .filter(|p| {
            let d = q.dist_to_boundary(p);
            d >= 0.0 && d < range
        })
        .cloned()
        .collect()
}

/// Minimal pairwise distance via neighbor queries with a growing radius.
fn min_pairwise_distance(points: &[Point]) -> f64 {
    if points.len() < 2 {
        return f64::INFINITY;
    }
    // spacing scale from the bounding box of the sample
    let dim = points[0].dim();
    let mut extent = 0.0_f64;
    for axis in 0..dim {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo = lo.min(p.coords()[axis]);
            hi = hi.max(p.coords()[axis]);
        }
        extent = extent.max(hi - lo);
    }
    let mut radius = (extent / (points.len() as f64).powf(1.0 / dim as f64)).max(1e-9) * 2.0;
    loop {
        let grid = CellGrid::build(points, radius);
        let per_point = par::map_range(points.len(), |i| {
            let mut best = f64::INFINITY;
            for j in grid.indices_within(&points[i], radius) {
                if j != i {
                    best = best.min(points[i].dist_sq(&points[j]));
                }
            }
            best
        });
        let best = per_point.into_iter().fold(f64::INFINITY, f64::min);
        if best.is_finite() {
            return best.sqrt();
        }
        radius *= 2.0;
        if radius > 4.0 * extent.max(1.0) {
            // fewer than two distinct points reachable: fall back to brute force
            let mut best = f64::INFINITY;
            for i in 0..points.len() {
                for j in (i + 1)..points.len() {
                    best = best.min(points[i].dist_sq(&points[j]));
                }
            }
            return best.sqrt();
        }
    }
}

/// Measures the covering radius: the farthest any location of the eroded
/// window lies from the sample.
///
/// Candidate maximizers are Voronoi-vertex surrogates — circumcenters of
/// nearby point triples in d = 2, midpoints of consecutive points in d = 1 —
/// plus a coarse grid with local pattern-search refinement for the general
/// case. The erosion (margin + one spacing) keeps generation-boundary
/// artifacts out of the measurement.
fn measure_cover_radius(points: &[Point], window: &Window, margin: f64) -> f64 {
    let dim = window.dim();
    let n = points.len();
    let spacing = (window.volume() / n as f64).powf(1.0 / dim as f64);
    let region = match window.erode(margin + spacing) {
        Ok(r) => r,
        Err(_) => return f64::NAN, // window too small to measure
    };
    let query = CellGrid::build(points, spacing.max(1e-9));
    let nearest = |x: &Point| -> f64 {
        let mut radius = spacing;
        loop {
            let mut best = f64::INFINITY;
            for i in query.indices_within(x, radius) {
                best = best.min(points[i].dist_sq(x));
            }
            if best.is_finite() {
                return best.sqrt();
            }
            radius *= 2.0;
        }
    };

    let mut best = 0.0_f64;
    let mut consider = |x: &Point| {
        if region.contains(x) {
            best = best.max(nearest(x));
        }
    };

    match dim {
        1 => {
            // points are callers' responsibility to be lex-sorted; sort a copy
            let mut xs: Vec<f64> = points.iter().map(|p| p.coords()[0]).collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for w in xs.windows(2) {
                consider(&Point::x1(0.5 * (w[0] + w[1])));
            }
        }
        2 => {
            let reach = 3.0 * spacing;
            let neighbor_grid = CellGrid::build(points, reach);
            for (i, p) in points.iter().enumerate() {
                let mut near: Vec<usize> = neighbor_grid
                    .indices_within(p, reach)
                    .into_iter()
                    .filter(|&j| j > i)
                    .collect();
                near.sort_unstable();
                for (k, &j) in near.iter().enumerate() {
                    for &l in &near[k + 1..] {
                        if let Some(c) = circumcenter(p, &points[j], &points[l]) {
                            consider(&c);
                        }
                    }
                }
            }
        }
        _ => {}
    }

    // coarse grid + pattern-search refinement covers boundary maxima and d > 2
    let steps = 8usize;
    let mut best_grid: Option<Point> = None;
    let mut best_grid_val = -1.0;
    let per_axis = steps + 1;
    for flat in 0..per_axis.pow(dim as u32) {
        let mut rem = flat;
        let x = Point::new(
            (0..dim)
                .map(|a| {
                    let i = rem % per_axis;
                    rem /= per_axis;
                    let c = region.center().coords()[a];
                    let h = region.size();
                    c - h + 2.0 * h * i as f64 / steps as f64
                })
                .collect(),
        );
        if region.contains(&x) {
            let v = nearest(&x);
            if v > best_grid_val {
                best_grid_val = v;
                best_grid = Some(x);
            }
        }
    }
    if let Some(mut x) = best_grid {
        let mut step = 2.0 * region.size() / steps as f64;
        let mut val = best_grid_val;
        while step > 1e-10 {
            let mut improved = false;
            for axis in 0..dim {
                for dir in [-1.0, 1.0] {
                    let mut c = x.coords().to_vec();
                    c[axis] += dir * step;
                    let cand = Point::new(c);
                    if region.contains(&cand) {
                        let v = nearest(&cand);
                        if v > val {
                            val = v;
                            x = cand;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.max(val);
    }
    best
}

/// Circumcenter of a nondegenerate triangle in the plane.
fn circumcenter(a: &Point, b: &Point, c: &Point) -> Option<Point> {
    let (ax, ay) = (a.coords()[0], a.coords()[1]);
    let (bx, by) = (b.coords()[0], b.coords()[1]);
    let (cx, cy) = (c.coords()[0], c.coords()[1]);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d.abs() < 1e-12 {
        return None;
    }
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    Some(Point::xy(ux, uy))
}

//! Points of R^d with lexicographic ordering.

use std::cmp::Ordering;
use std::fmt;

/// A point of R^d. Coordinates are finite; the dimension is fixed per run
/// (default d = 2).
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Point { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Point::new(vec![0.0; dim])
    }

    /// One-dimensional point, for the d = 1 control cases.
    pub fn x1(x: f64) -> Self {
        Point::new(vec![x])
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point::new(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn translate(&self, t: &[f64]) -> Point {
        debug_assert_eq!(self.dim(), t.len());
        Point::new(
            self.coords
                .iter()
                .zip(t)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Coordinate difference `self - other`, usable as a translation vector.
    pub fn sub(&self, other: &Point) -> Vec<f64> {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    /// Componentwise identity within an absolute tolerance.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| (a - b).abs() <= tol)
    }

    /// Total lexicographic order. Coordinates are finite by invariant.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.partial_cmp(b).expect("finite coordinates") {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Sorts points lexicographically in place.
pub fn sort_lex(points: &mut [Point]) {
    points.sort_by(|a, b| a.lex_cmp(b));
}

/// True when the two sorted slices agree pointwise within `tol`.
pub fn sets_equal(a: &[Point], b: &[Point], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| p.approx_eq(q, tol))
}

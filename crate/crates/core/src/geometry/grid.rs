//! Uniform cell grid for fixed-radius neighbor queries.

use std::collections::HashMap;

use super::point::Point;

/// Bins points into cubic cells so that all points within a given radius of a
/// query can be found by scanning a bounded block of cells.
pub struct CellGrid<'a> {
    points: &'a [Point],
    cell: f64,
    dim: usize,
    bins: HashMap<Vec<i64>, Vec<usize>>,
}

impl<'a> CellGrid<'a> {
    /// Builds a grid with the given cell edge. Queries of radius up to a few
    /// cell edges stay cheap; larger radii still work, just scan more cells.
    pub fn build(points: &'a [Point], cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite());
        let dim = points.first().map_or(1, Point::dim);
        let mut bins: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            bins.entry(Self::key(p.coords(), cell)).or_default().push(i);
        }
        CellGrid {
            points,
            cell,
            dim,
            bins,
        }
    }

    fn key(coords: &[f64], cell: f64) -> Vec<i64> {
        coords.iter().map(|c| (c / cell).floor() as i64).collect()
    }

    /// Indices of all points with `dist(p, center) <= radius` (closed ball).
    pub fn indices_within(&self, center: &Point, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_within(center, radius, |i| out.push(i));
        out
    }

    /// Number of points in the closed ball around `center`.
    pub fn count_within(&self, center: &Point, radius: f64) -> usize {
        let mut n = 0;
        self.for_each_within(center, radius, |_| n += 1);
        n
    }

    /// True if some point satisfies `lo < dist(p, center) <= hi`.
    pub fn any_in_annulus(&self, center: &Point, lo: f64, hi: f64) -> bool {
        let lo_sq = lo * lo;
        let hi_sq = hi * hi;
        let mut found = false;
        self.scan_cells(center, hi, |i| {
            let d2 = self.points[i].dist_sq(center);
            if d2 > lo_sq && d2 <= hi_sq {
                found = true;
                false
            } else {
                true
            }
        });
        found
    }

    fn for_each_within<F: FnMut(usize)>(&self, center: &Point, radius: f64, mut f: F) {
        let r_sq = radius * radius;
        self.scan_cells(center, radius, |i| {
            if self.points[i].dist_sq(center) <= r_sq {
                f(i);
            }
            true
        });
    }

    /// Visits every point index in cells overlapping the ball; the callback
    /// returns false to stop early.
    fn scan_cells<F: FnMut(usize) -> bool>(&self, center: &Point, radius: f64, mut f: F) {
        let lo: Vec<i64> = center
            .coords()
            .iter()
            .map(|c| ((c - radius) / self.cell).floor() as i64)
            .collect();
        let hi: Vec<i64> = center
            .coords()
            .iter()
            .map(|c| ((c + radius) / self.cell).floor() as i64)
            .collect();
        let mut key = lo.clone();
        'outer: loop {
            if let Some(idxs) = self.bins.get(&key) {
                for &i in idxs {
                    if !f(i) {
                        return;
                    }
                }
            }
            // odometer increment over the cell block
            for axis in 0..self.dim {
                if key[axis] < hi[axis] {
                    key[axis] += 1;
                    key[..axis].copy_from_slice(&lo[..axis]);
                    continue 'outer;
                }
            }
            return;
        }
    }
}

//! Bounded windows: axis-aligned boxes and closed balls.

use super::point::Point;
use crate::error::{Error, Result};

/// A bounded measurable window of R^d. Boxes are cubes `center + [-h, h]^d`;
/// balls are closed Euclidean balls.
#[derive(Clone, Debug, PartialEq)]
pub enum Window {
    Box { center: Point, half: f64 },
    Ball { center: Point, radius: f64 },
}

impl Window {
    /// The cube `[-half, half]^d` at the origin.
    pub fn centered_box(dim: usize, half: f64) -> Self {
        Window::Box {
            center: Point::origin(dim),
            half,
        }
    }

    pub fn box_at(center: Point, half: f64) -> Self {
        Window::Box { center, half }
    }

    pub fn ball(center: Point, radius: f64) -> Self {
        Window::Ball { center, radius }
    }

    pub fn dim(&self) -> usize {
        self.center().dim()
    }

    pub fn center(&self) -> &Point {
        match self {
            Window::Box { center, .. } | Window::Ball { center, .. } => center,
        }
    }

    /// Half-width for boxes, radius for balls.
    pub fn size(&self) -> f64 {
        match self {
            Window::Box { half, .. } => *half,
            Window::Ball { radius, .. } => *radius,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Window::Box { half, center } => (2.0 * half).powi(center.dim() as i32),
            Window::Ball { radius, center } => {
                unit_ball_volume(center.dim()) * radius.powi(center.dim() as i32)
            }
        }
    }

    /// Closed membership test.
    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Window::Box { center, half } => p
                .coords()
                .iter()
                .zip(center.coords())
                .all(|(x, c)| (x - c).abs() <= *half),
            Window::Ball { center, radius } => p.dist_sq(center) <= radius * radius,
        }
    }

    /// Signed distance to the window boundary: positive inside, negative
    /// outside.
    pub fn dist_to_boundary(&self, p: &Point) -> f64 {
        match self {
            Window::Box { center, half } => {
                let max_dev = p
                    .coords()
                    .iter()
                    .zip(center.coords())
                    .map(|(x, c)| (x - c).abs())
                    .fold(0.0_f64, f64::max);
                half - max_dev
            }
            Window::Ball { center, radius } => radius - p.dist(center),
        }
    }

    /// Shrinks the window by `margin` on all sides. Errors when nothing is
    /// left.
    pub fn erode(&self, margin: f64) -> Result<Window> {
        let new_size = self.size() - margin;
        if new_size <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "eroding a window of size {} by {margin} leaves nothing",
                self.size()
            )));
        }
        Ok(self.with_size(new_size))
    }

    pub fn dilate(&self, margin: f64) -> Window {
        self.with_size(self.size() + margin)
    }

    fn with_size(&self, size: f64) -> Window {
        match self {
            Window::Box { center, .. } => Window::Box {
                center: center.clone(),
                half: size,
            },
            Window::Ball { center, .. } => Window::Ball {
                center: center.clone(),
                radius: size,
            },
        }
    }

    pub fn translate(&self, t: &[f64]) -> Window {
        match self {
            Window::Box { center, half } => Window::Box {
                center: center.translate(t),
                half: *half,
            },
            Window::Ball { center, radius } => Window::Ball {
                center: center.translate(t),
                radius: *radius,
            },
        }
    }

    /// True when every point of `inner` lies in `self` (exact for box-in-box
    /// and ball-in-ball, conservative for box-in-ball).
    pub fn encloses(&self, inner: &Window) -> bool {
        match (self, inner) {
            (Window::Box { center, half }, _) => {
                let reach = inner_reach_per_axis(inner);
                inner
                    .center()
                    .coords()
                    .iter()
                    .zip(center.coords())
                    .all(|(ic, oc)| (ic - oc).abs() + reach <= *half + 1e-12)
            }
            (Window::Ball { center, radius }, Window::Ball { radius: ir, .. }) => {
                inner.center().dist(center) + ir <= radius + 1e-12
            }
            (Window::Ball { center, radius }, Window::Box { half, .. }) => {
                let corner_reach = half * (self.dim() as f64).sqrt();
                inner.center().dist(center) + corner_reach <= radius + 1e-12
            }
        }
    }

    /// Volume of the R-collar of the boundary, `|{ x : dist(x, boundary) < R }|`,
    /// in closed form. The second component flags the degenerate case where
    /// the collar swallows the whole window.
    pub fn boundary_volume(&self, r: f64) -> (f64, bool) {
        assert!(r > 0.0, "collar width must be positive");
        let d = self.dim() as i32;
        match self {
            Window::Box { half, .. } => {
                let outer = (2.0 * half + 2.0 * r).powi(d);
                if r >= *half {
                    (outer, true)
                } else {
                    (outer - (2.0 * half - 2.0 * r).powi(d), false)
                }
            }
            Window::Ball { radius, .. } => {
                let v = unit_ball_volume(self.dim());
                let outer = v * (radius + r).powi(d);
                if r >= *radius {
                    (outer, true)
                } else {
                    (outer - v * (radius - r).powi(d), false)
                }
            }
        }
    }
}

/// Volume of the unit ball in R^d via the two-step recurrence
/// v_d = 2 pi v_{d-2} / d with v_1 = 2, v_2 = pi.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0,
        2 => std::f64::consts::PI,
        _ => unit_ball_volume(dim - 2) * 2.0 * std::f64::consts::PI / dim as f64,
    }
}

/// Farthest reach of a window from its center along any single axis.
fn inner_reach_per_axis(w: &Window) -> f64 {
    match w {
        Window::Box { half, .. } => *half,
        Window::Ball { radius, .. } => *radius,
    }
}

/// A van Hove sequence of centered boxes `[-L_k, L_k]^d` with strictly
/// increasing half-widths.
#[derive(Clone, Debug)]
pub struct VanHoveSequence {
    dim: usize,
    half_widths: Vec<f64>,
}

impl VanHoveSequence {
    pub fn new(dim: usize, half_widths: Vec<f64>) -> Result<Self> {
        if half_widths.is_empty() {
            return Err(Error::InvalidArgument("empty window list".into()));
        }
        if half_widths[0] <= 0.0 || half_widths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "window half-widths must be positive and strictly increasing".into(),
            ));
        }
        Ok(VanHoveSequence { dim, half_widths })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_widths(&self) -> &[f64] {
        &self.half_widths
    }

    pub fn len(&self) -> usize {
        self.half_widths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.half_widths.is_empty()
    }

    pub fn window(&self, k: usize) -> Window {
        Window::centered_box(self.dim, self.half_widths[k])
    }

    pub fn windows(&self) -> impl Iterator<Item = Window> + '_ {
        (0..self.len()).map(|k| self.window(k))
    }

    pub fn largest(&self) -> Window {
        self.window(self.len() - 1)
    }

    /// Boundary-collar to volume ratios `|d^R Q_k| / |Q_k|` along the stored
    /// sequence. The van Hove property requires these to decrease.
    pub fn boundary_ratios(&self, r: f64) -> Vec<f64> {
        self.windows()
            .map(|q| q.boundary_volume(r).0 / q.volume())
            .collect()
    }

    /// Checks the van Hove monotonicity at the stored indices for a fixed R.
    pub fn is_van_hove_at(&self, r: f64) -> bool {
        let ratios = self.boundary_ratios(r);
        ratios.windows(2).all(|w| w[1] < w[0])
    }
}

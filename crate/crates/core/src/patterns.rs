//! Patterns, translation classes, occurrence counting and frequencies.
//!
//! A pattern is a finite point configuration together with its supporting
//! window; two patterns are identified when a single translation maps points
//! and support onto each other. Ball patterns (support a closed ball centered
//! at one of the points) are the workhorse: their occurrences in a sample can
//! be scanned over the sample's own points.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{sets_equal, sort_lex, DeloneSet, Point, VanHoveSequence, Window};
use crate::par;
use crate::MATCH_TOL;

/// A finite point configuration with its support window.
#[derive(Clone, Debug)]
pub struct Pattern {
    points: Vec<Point>, // lexicographically sorted
    support: Window,
}

impl Pattern {
    pub fn new(mut points: Vec<Point>, support: Window) -> Result<Self> {
        // validation allows tolerance-scale overhang so that points exactly on
        // the support boundary survive rounding
        if points
            .iter()
            .any(|p| support.dist_to_boundary(p) < -MATCH_TOL)
        {
            return Err(Error::PointOutsideSupport);
        }
        sort_lex(&mut points);
        Ok(Pattern { points, support })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn support(&self) -> &Window {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when the support is a ball whose center belongs to the points.
    pub fn is_ball_pattern(&self) -> bool {
        match &self.support {
            Window::Ball { center, .. } => self
                .points
                .iter()
                .any(|p| p.approx_eq(center, MATCH_TOL)),
            Window::Box { .. } => false,
        }
    }

    /// Radius of the supporting window.
    pub fn radius(&self) -> f64 {
        self.support.size()
    }

    pub fn translate(&self, t: &[f64]) -> Pattern {
        Pattern {
            points: self.points.iter().map(|p| p.translate(t)).collect(),
            support: self.support.translate(t),
        }
    }

    /// Canonical anchor: ball center, else lexicographically least point,
    /// else the support center for empty patterns.
    fn anchor(&self) -> Point {
        match &self.support {
            Window::Ball { center, .. } => center.clone(),
            Window::Box { .. } => self
                .points
                .first()
                .cloned()
                .unwrap_or_else(|| self.support.center().clone()),
        }
    }
}

/// Restriction `Q ^ omega = (omega & Q, Q)` of a sample to a window.
pub fn restrict(omega: &DeloneSet, q: &Window) -> Result<Pattern> {
    if !omega.window().encloses(q) {
        return Err(Error::UntrustedRegion {
            context: "restrict".into(),
        });
    }
    Pattern::new(omega.points_in(q), q.clone())
}

/// Translation equivalence: some t maps `p2`'s points and support onto
/// `p1`'s within `tol`. Candidate translations come from anchor pairings.
pub fn equivalent(p1: &Pattern, p2: &Pattern, tol: f64) -> bool {
    assert!(tol > 0.0);
    if p1.len() != p2.len() {
        return false;
    }
    // supports must be congruent up to translation
    match (&p1.support, &p2.support) {
        (Window::Ball { radius: r1, .. }, Window::Ball { radius: r2, .. }) => {
            if (r1 - r2).abs() > tol {
                return false;
            }
        }
        (Window::Box { half: h1, .. }, Window::Box { half: h2, .. }) => {
            if (h1 - h2).abs() > tol {
                return false;
            }
        }
        _ => return false,
    }
    let a2 = p2.anchor();
    for candidate in anchor_candidates(p1, tol) {
        let t = candidate.sub(&a2);
        let moved = p2.translate(&t);
        if moved.support.center().approx_eq(p1.support.center(), tol)
            && sets_equal(&moved.points, &p1.points, tol)
        {
            return true;
        }
    }
    false
}

/// Anchor candidates of a pattern: the anchor itself plus, for box supports,
/// any points within a small band of the lexicographic minimum (guards the
/// sort against coordinate jitter at the tolerance scale).
fn anchor_candidates(p: &Pattern, tol: f64) -> Vec<Point> {
    match &p.support {
        Window::Ball { center, .. } => vec![center.clone()],
        Window::Box { .. } => {
            if let Some(least) = p.points.first() {
                p.points
                    .iter()
                    .filter(|q| {
                        q.coords()
                            .iter()
                            .zip(least.coords())
                            .all(|(a, b)| (a - b).abs() <= 2.0 * tol)
                    })
                    .cloned()
                    .collect()
            } else {
                vec![p.support.center().clone()]
            }
        }
    }
}

/// A pattern class: the canonical representative translated so its anchor
/// sits at the origin.
#[derive(Clone, Debug)]
pub struct PatternClass {
    canonical: Pattern,
}

impl PatternClass {
    pub fn of(p: &Pattern) -> PatternClass {
        let anchor = p.anchor();
        let minus: Vec<f64> = anchor.coords().iter().map(|c| -c).collect();
        PatternClass {
            canonical: p.translate(&minus),
        }
    }

    /// The class of the ball pattern `B(site, s) ^ omega` at a sample point.
    pub fn at_site(omega: &DeloneSet, site: &Point, s: f64) -> Result<PatternClass> {
        let ball = Window::ball(site.clone(), s);
        let pattern = restrict(omega, &ball)?;
        Ok(PatternClass::of(&pattern))
    }

    /// The singleton ball class: one point at the center, radius `s`.
    pub fn singleton(dim: usize, s: f64) -> PatternClass {
        let origin = Point::origin(dim);
        PatternClass {
            canonical: Pattern::new(vec![origin.clone()], Window::ball(origin, s)).unwrap(),
        }
    }

    pub fn canonical(&self) -> &Pattern {
        &self.canonical
    }

    pub fn is_ball_class(&self) -> bool {
        self.canonical.is_ball_pattern()
    }

    /// Radius s(P) for ball classes.
    pub fn radius(&self) -> f64 {
        self.canonical.radius()
    }

    pub fn dim(&self) -> usize {
        self.canonical.support.dim()
    }

    pub fn matches(&self, p: &Pattern, tol: f64) -> bool {
        equivalent(&self.canonical, p, tol)
    }

    /// Stable identifier: hash of the canonical form quantized well above the
    /// match tolerance. Used in file headers.
    pub fn id_hash(&self) -> String {
        let mut hasher = Sha256::new();
        let support_kind = match self.canonical.support {
            Window::Ball { .. } => "ball",
            Window::Box { .. } => "box",
        };
        hasher.update(support_kind.as_bytes());
        hasher.update(format!("{:.6e}", self.canonical.support.size()).as_bytes());
        for p in &self.canonical.points {
            for c in p.coords() {
                hasher.update(format!("{c:.6}").as_bytes());
            }
        }
        let digest = hasher.finalize();
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// All occurrences of the ball class `class` in `omega & q`: the translations
/// `t in omega & q` with `B(t, s(P)) ^ omega` equivalent to the class.
/// Candidates are the sample points themselves, valid because a ball class
/// carries its center.
pub fn occurrences(omega: &DeloneSet, class: &PatternClass, q: &Window) -> Result<Vec<Point>> {
    if !class.is_ball_class() {
        return Err(Error::InvalidArgument(
            "occurrence scan requires a ball-pattern class".into(),
        ));
    }
    let s = class.radius();
    if !omega.trusts(q, s) {
        return Err(Error::RadiusExceedsMargin {
            radius: s,
            margin: omega.margin(),
        });
    }
    let candidates = omega.points_in(q);
    let grid = omega.grid(s.max(omega.spacing_estimate()));
    let hits = par::map_slice(&candidates, |t| {
        let ball_points: Vec<Point> = grid
            .indices_within(t, s)
            .into_iter()
            .map(|i| omega.points()[i].clone())
            .collect();
        let pattern = Pattern::new(ball_points, Window::ball(t.clone(), s))
            .expect("ball points lie in the ball");
        class.matches(&pattern, MATCH_TOL)
    });
    Ok(candidates
        .into_iter()
        .zip(hits)
        .filter_map(|(t, hit)| hit.then_some(t))
        .collect())
}

/// Per-window occurrence counts and the end-of-sequence frequency estimate.
#[derive(Clone, Debug)]
pub struct FrequencyEstimate {
    /// (window volume, count, count/volume) along the van Hove sequence.
    pub per_window: Vec<(f64, usize, f64)>,
    /// Last-window ratio; transparent, no extrapolation.
    pub nu: f64,
    /// Max pairwise deviation of the ratios over the last three windows.
    pub convergence_dev: f64,
}

/// Frequency estimator `#_P(Q_k ^ omega) / |Q_k|` along a van Hove sequence.
pub fn frequency(
    omega: &DeloneSet,
    class: &PatternClass,
    seq: &VanHoveSequence,
) -> Result<FrequencyEstimate> {
    let mut per_window = Vec::with_capacity(seq.len());
    for q in seq.windows() {
        let count = occurrences(omega, class, &q)?.len();
        let vol = q.volume();
        per_window.push((vol, count, count as f64 / vol));
    }
    let nu = per_window.last().map(|w| w.2).unwrap_or(0.0);
    let tail: Vec<f64> = per_window.iter().rev().take(3).map(|w| w.2).collect();
    let mut convergence_dev = 0.0_f64;
    for i in 0..tail.len() {
        for j in (i + 1)..tail.len() {
            convergence_dev = convergence_dev.max((tail[i] - tail[j]).abs());
        }
    }
    Ok(FrequencyEstimate {
        per_window,
        nu,
        convergence_dev,
    })
}

/// Partitions the ball patterns `{B(p, s) ^ omega : p in omega & q}` into
/// translation classes with multiplicities — the finite-local-complexity
/// witness at radius `s`. Classes come back ordered by decreasing count.
pub fn enumerate_ball_classes(
    omega: &DeloneSet,
    s: f64,
    q: &Window,
) -> Result<Vec<(PatternClass, usize)>> {
    if !omega.trusts(q, s) {
        return Err(Error::RadiusExceedsMargin {
            radius: s,
            margin: omega.margin(),
        });
    }
    let candidates = omega.points_in(q);
    let grid = omega.grid(s.max(omega.spacing_estimate()));
    let extracted: Vec<PatternClass> = par::map_slice(&candidates, |t| {
        let ball_points: Vec<Point> = grid
            .indices_within(t, s)
            .into_iter()
            .map(|i| omega.points()[i].clone())
            .collect();
        PatternClass::of(
            &Pattern::new(ball_points, Window::ball(t.clone(), s))
                .expect("ball points lie in the ball"),
        )
    });
    let mut classes: Vec<(PatternClass, usize)> = Vec::new();
    for class in extracted {
        match classes
            .iter_mut()
            .find(|(rep, _)| rep.matches(class.canonical(), MATCH_TOL))
        {
            Some((_, count)) => *count += 1,
            None => classes.push((class, 1)),
        }
    }
    warn_on_close_classes(&classes);
    classes.sort_by(|a, b| {
        b.1.cmp(&a.1).then_with(|| {
            a.0.canonical
                .points
                .first()
                .zip(b.0.canonical.points.first())
                .map(|(p, q)| p.lex_cmp(q))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(classes)
}

/// Flags ill-conditioned classifications: distinct classes closer than ten
/// times the match tolerance.
fn warn_on_close_classes(classes: &[(PatternClass, usize)]) {
    for i in 0..classes.len() {
        for j in (i + 1)..classes.len() {
            let a = &classes[i].0.canonical;
            let b = &classes[j].0.canonical;
            if a.len() != b.len() {
                continue;
            }
            let sep = a
                .points
                .iter()
                .zip(&b.points)
                .map(|(p, q)| p.dist(q))
                .fold(0.0_f64, f64::max);
            if sep < 10.0 * MATCH_TOL {
                log::warn!(
                    "pattern classes {i} and {j} separated by only {sep:.3e}; \
                     classification is ill-conditioned at tolerance {MATCH_TOL:.1e}"
                );
            }
        }
    }
}

/// Size of a greedy disjoint packing of balls of the given diameter centered
/// at the occurrences, scanned in lexicographic order. This realizes the
/// lower bound: greedy keeps at least `|occ| / C` centers, with C the packing
/// constant.
pub fn max_disjoint(occurrences: &[Point], diameter: f64) -> usize {
    assert!(diameter > 0.0);
    let mut sorted: Vec<&Point> = occurrences.iter().collect();
    sorted.sort_by(|a, b| a.lex_cmp(b));
    let mut kept: Vec<&Point> = Vec::new();
    for t in sorted {
        if kept.iter().all(|k| k.dist(t) > diameter) {
            kept.push(t);
        }
    }
    kept.len()
}

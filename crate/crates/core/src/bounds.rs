//! Quantitative constants and inequalities tying pattern frequencies to
//! IDS jump heights: the packing constant C, the disjoint-copy inequality,
//! and the jump lower bound nu(P)/C.

use crate::error::Result;
use crate::geometry::{DeloneSet, VanHoveSequence};
use crate::operators::OperatorRule;
use crate::patterns::{self, PatternClass};
use crate::spectra::{self, IdsApproximant};

/// The packing constant `C = ((3 r_P + r_omega) / r_omega)^d`: the
/// ball-volume ratio bounding the number of sample points (hence pattern
/// copies) inside any ball of radius `3 r_P`.
pub fn packing_constant(r_p: f64, r_omega: f64, d: usize) -> f64 {
    assert!(r_p > 0.0 && r_omega > 0.0);
    ((3.0 * r_p + r_omega) / r_omega).powi(d as i32)
}

/// The disjoint-copy inequality: a maximal disjoint family of copies has at
/// least `total / C` members.
pub fn disjoint_inequality_check(total: usize, disjoint: usize, c: f64) -> bool {
    assert!(disjoint <= total);
    disjoint as f64 >= total as f64 / c
}

/// Audits the packing bound directly: the largest number of sample points in
/// any ball `B(x, 3 r_p)` over randomly chosen point centers.
pub fn packing_audit(omega: &DeloneSet, r_p: f64, samples: usize, seed: u64) -> usize {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let grid = omega.grid(3.0 * r_p);
    let mut worst = 0usize;
    for _ in 0..samples {
        let center = &omega.points()[rng.gen_range(0..omega.len())];
        worst = worst.max(grid.count_within(center, 3.0 * r_p));
    }
    worst
}

/// Finite-volume check of the trace inequality chain at one window:
/// `N(E - eps) <= N(E + eps) - (1/C) #_P(Q ^ omega) / |Q|`.
#[derive(Clone, Debug)]
pub struct ChainCheck {
    pub window_half: f64,
    pub eps: f64,
    pub occurrence_count: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// The assembled verdict on the jump lower bound.
#[derive(Clone, Debug)]
pub struct BoundReport {
    /// Packing constant from the pattern radius and the measured packing
    /// radius of the (decorated) sample.
    pub c: f64,
    /// Frequency estimate of the pattern class at the last window.
    pub nu: f64,
    /// `nu / C`.
    pub lower_bound: f64,
    /// Jump weight detected at the target energy on the largest window.
    pub observed_jump: f64,
    /// `observed_jump >= lower_bound` up to numerical slack.
    pub satisfied: bool,
    /// The per-window inequality chain.
    pub chain: Vec<ChainCheck>,
}

/// Numerical slack on the bound comparison.
pub const BOUND_SLACK: f64 = 1e-9;

/// Half the gap between the eigenvalue cluster at `e` and the rest of the
/// spectrum; when no eigenvalue sits at `e`, half the distance to the nearest
/// one.
fn half_gap_at(ids: &IdsApproximant, e: f64, cluster_tol: f64) -> f64 {
    let vals = ids.eigenvalues();
    if vals.is_empty() {
        return 1.0;
    }
    let lo = vals.partition_point(|&v| v < e - cluster_tol);
    let hi = vals.partition_point(|&v| v <= e + cluster_tol);
    if lo == hi {
        // empty cluster: half the distance to the nearest eigenvalue
        let mut nearest = f64::INFINITY;
        for &v in vals {
            nearest = nearest.min((v - e).abs());
        }
        return (nearest / 2.0).min(1.0);
    }
    let below = if lo > 0 {
        vals[lo] - vals[lo - 1]
    } else {
        f64::INFINITY
    };
    let above = if hi < vals.len() {
        vals[hi] - vals[hi - 1]
    } else {
        f64::INFINITY
    };
    let gap = below.min(above);
    if gap.is_finite() {
        gap / 2.0
    } else {
        1.0
    }
}

/// Runs the full pipeline behind the jump lower bound on a decorated system:
/// frequency of the cluster class, packing constant, observed jump at the
/// largest window, and the per-window inequality chain with eps set to half
/// the spectral gap around the cluster at `e`.
pub fn jump_bound_report(
    rule: &OperatorRule,
    omega: &DeloneSet,
    class: &PatternClass,
    seq: &VanHoveSequence,
    e: f64,
) -> Result<BoundReport> {
    let freq = patterns::frequency(omega, class, seq)?;
    let nu = freq.nu;
    let c = packing_constant(class.radius(), omega.r_pack(), omega.dim());
    let lower_bound = nu / c;

    let mut chain = Vec::with_capacity(seq.len());
    let mut observed_jump = 0.0;
    for (k, q) in seq.windows().enumerate() {
        let ids = spectra::ids_curve(rule, omega, &q)?;
        let cluster_tol = spectra::default_cluster_tol(ids.spectral_radius());
        let eps = half_gap_at(&ids, e, cluster_tol);
        let occurrence_count = freq.per_window[k].1;
        let lhs = ids.counting(e - eps);
        let rhs = ids.counting(e + eps) - occurrence_count as f64 / (c * q.volume());
        chain.push(ChainCheck {
            window_half: q.size(),
            eps,
            occurrence_count,
            lhs,
            rhs,
            holds: lhs <= rhs + BOUND_SLACK,
        });
        if k + 1 == seq.len() {
            let report = spectra::detect_jumps(&ids, BOUND_SLACK, cluster_tol);
            observed_jump = report.at(e, cluster_tol.max(1e-6)).map_or(0.0, |j| j.weight);
        }
    }
    // nu = 0 keeps the bound trivially satisfied
    let satisfied = observed_jump >= lower_bound - BOUND_SLACK && (nu == 0.0 || observed_jump > 0.0);
    Ok(BoundReport {
        c,
        nu,
        lower_bound,
        observed_jump,
        satisfied,
        chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{generate, GeneratorSpec, Point, Window};
    use crate::mld::{build_gfin, decorate};
    use crate::operators::decorated_rule;

    fn z2(half: f64) -> DeloneSet {
        generate(
            &GeneratorSpec::SquareLattice { spacing: 1.0 },
            &Window::centered_box(2, half),
            0,
        )
        .unwrap()
    }

    fn flagship(half: f64) -> DeloneSet {
        decorate(
            &z2(half),
            &PatternClass::singleton(2, 0.4),
            &build_gfin(0.42).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn packing_constant_formula() {
        assert!((packing_constant(0.2, 0.5, 2) - 4.84).abs() < 1e-12);
        assert!((packing_constant(1.0, 1.0, 1) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn packing_constant_monotonicity_grid() {
        // increasing in the pattern radius, decreasing in the packing radius
        let r_ps = [0.1, 0.2, 0.4, 0.8, 1.6];
        let r_os = [0.25, 0.5, 1.0, 2.0];
        for &r_o in &r_os {
            for w in r_ps.windows(2) {
                assert!(packing_constant(w[1], r_o, 2) > packing_constant(w[0], r_o, 2));
            }
        }
        for &r_p in &r_ps {
            for w in r_os.windows(2) {
                assert!(packing_constant(r_p, w[1], 2) < packing_constant(r_p, w[0], 2));
            }
        }
    }

    #[test]
    fn disjoint_inequality_basics() {
        assert!(disjoint_inequality_check(9, 9, 4.84));
        assert!(!disjoint_inequality_check(9, 4, 1.5));
        assert!(disjoint_inequality_check(0, 0, 2.0));
    }

    #[test]
    fn packing_audit_below_constant_on_generators() {
        for spec in [
            GeneratorSpec::SquareLattice { spacing: 1.0 },
            GeneratorSpec::TriangularLattice { spacing: 1.0 },
            GeneratorSpec::CutProjectOctagonal,
        ] {
            let omega = generate(&spec, &Window::centered_box(2, 8.0), 1).unwrap();
            let r_p = 0.4;
            let c = packing_constant(r_p, omega.r_pack(), 2);
            let worst = packing_audit(&omega, r_p, 100, 3);
            assert!(
                (worst as f64) <= c,
                "{spec:?}: {worst} points beat C = {c}"
            );
        }
    }

    #[test]
    fn greedy_respects_the_packing_lower_bound() {
        let omega = flagship(8.0);
        let cluster = PatternClass::at_site(&omega, &Point::xy(0.0, 0.0), 0.4).unwrap();
        let c = packing_constant(cluster.radius(), omega.r_pack(), 2);
        for half in [3.0, 4.0, 5.0] {
            let occ =
                patterns::occurrences(&omega, &cluster, &Window::centered_box(2, half)).unwrap();
            let disjoint = patterns::max_disjoint(&occ, 2.0 * cluster.radius());
            assert!(
                disjoint_inequality_check(occ.len(), disjoint, c),
                "half={half}: {} vs {}/{c}",
                disjoint,
                occ.len()
            );
        }
    }

    #[test]
    fn flagship_bound_is_satisfied_and_loose() {
        let omega = flagship(10.0);
        let g = build_gfin(0.42).unwrap();
        let rule = decorated_rule(&g, 1.0).unwrap();
        let cluster = PatternClass::at_site(&omega, &Point::xy(0.0, 0.0), 0.4).unwrap();
        let seq = VanHoveSequence::new(2, vec![4.0, 6.0]).unwrap();
        let report = jump_bound_report(&rule, &omega, &cluster, &seq, 0.0).unwrap();
        assert!(report.satisfied);
        assert!(report.nu > 0.9, "cluster frequency about 1, got {}", report.nu);
        assert!(report.observed_jump >= report.lower_bound);
        // the bound is loose by design: the observed jump beats even nu
        assert!(report.observed_jump >= report.nu);
        assert!(report.chain.iter().all(|c| c.holds));
    }

    #[test]
    fn absent_pattern_gives_trivial_bound() {
        let omega = z2(8.0);
        let rule = crate::operators::nn_adjacency_rule(1.0).unwrap();
        // a pattern that never occurs: pair at distance one half
        let class = PatternClass::of(
            &crate::patterns::Pattern::new(
                vec![Point::xy(0.0, 0.0), Point::xy(0.5, 0.0)],
                Window::ball(Point::xy(0.0, 0.0), 0.6),
            )
            .unwrap(),
        );
        let seq = VanHoveSequence::new(2, vec![4.0, 6.0]).unwrap();
        let report = jump_bound_report(&rule, &omega, &class, &seq, 0.0).unwrap();
        assert_eq!(report.nu, 0.0);
        assert_eq!(report.lower_bound, 0.0);
        assert!(report.satisfied);
    }

    #[test]
    fn negative_control_fails_off_the_eigenvalue() {
        // evaluated at E = 0.5 where no cluster exists, the decorated system
        // has nu > 0 but no jump: the bound must report unsatisfied
        let omega = flagship(8.0);
        let g = build_gfin(0.42).unwrap();
        let rule = decorated_rule(&g, 1.0).unwrap();
        let cluster = PatternClass::at_site(&omega, &Point::xy(0.0, 0.0), 0.4).unwrap();
        let seq = VanHoveSequence::new(2, vec![4.0, 6.0]).unwrap();
        let report = jump_bound_report(&rule, &omega, &cluster, &seq, 0.5).unwrap();
        assert!(report.nu > 0.0);
        assert!(report.observed_jump < report.lower_bound);
        assert!(!report.satisfied);
        assert!(report.chain.iter().any(|c| !c.holds));
    }
}

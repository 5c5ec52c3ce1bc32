//! Eigenvalue counting, IDS approximants, jump detection, and the converse
//! extraction of compactly supported eigenfunctions.

mod eigen;

pub use eigen::{eigensystem, symmetric_eigenvalues, EigenSystem};

use crate::error::{Error, Result};
use crate::geometry::{inner_boundary_sites, DeloneSet, Point, VanHoveSequence, Window};
use crate::operators::{assemble, AssembledOperator, OperatorRule};
use crate::par;

/// Default eigenvalue clustering width: 1e-8 relative to the spectral
/// radius floor of 1. Exact degeneracies of integer matrices land around
/// 1e-12; distinct eigenvalues in our corpus never come this close.
pub fn default_cluster_tol(spectral_radius: f64) -> f64 {
    1e-8 * spectral_radius.max(1.0)
}

/// A finite-volume IDS approximant: the sorted spectrum of a window
/// restriction together with the window volume.
#[derive(Clone, Debug)]
pub struct IdsApproximant {
    eigenvalues: Vec<f64>, // ascending
    volume: f64,
    label: String,
}

impl IdsApproximant {
    pub fn new(mut eigenvalues: Vec<f64>, volume: f64, label: impl Into<String>) -> Self {
        assert!(volume > 0.0);
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        IdsApproximant {
            eigenvalues,
            volume,
            label: label.into(),
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The normalized counting function `N(E) = #{lambda <= E} / |Q|`
    /// (right-continuous convention; jump weights do not depend on it).
    pub fn counting(&self, e: f64) -> f64 {
        self.count_at_most(e) as f64 / self.volume
    }

    /// Left limit `N(E-) = #{lambda < E} / |Q|`.
    pub fn counting_left(&self, e: f64) -> f64 {
        self.count_below(e) as f64 / self.volume
    }

    pub fn count_at_most(&self, e: f64) -> usize {
        self.eigenvalues.partition_point(|&v| v <= e)
    }

    pub fn count_below(&self, e: f64) -> usize {
        self.eigenvalues.partition_point(|&v| v < e)
    }

    /// Total mass `N(+inf) = #sites / |Q|`.
    pub fn total_mass(&self) -> f64 {
        self.eigenvalues.len() as f64 / self.volume
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Assembles the rule on the window and packages the spectrum with the
/// window volume.
pub fn ids_curve(rule: &OperatorRule, omega: &DeloneSet, q: &Window) -> Result<IdsApproximant> {
    let a = assemble(rule, omega, q)?;
    let values = symmetric_eigenvalues(a.matrix())?;
    Ok(IdsApproximant::new(
        values,
        q.volume(),
        format!("L={}", q.size()),
    ))
}

/// Exact sup-norm distance between two normalized counting functions,
/// scanning both one-sided limits at every jump of either.
pub fn sup_distance(n1: &IdsApproximant, n2: &IdsApproximant) -> f64 {
    let mut sup = 0.0_f64;
    for e in n1.eigenvalues.iter().chain(&n2.eigenvalues) {
        sup = sup.max((n1.counting(*e) - n2.counting(*e)).abs());
        sup = sup.max((n1.counting_left(*e) - n2.counting_left(*e)).abs());
    }
    sup
}

/// One detected jump candidate.
#[derive(Clone, Debug)]
pub struct Jump {
    /// Cluster mean.
    pub energy: f64,
    /// Multiplicity divided by the window volume.
    pub weight: f64,
    pub multiplicity: usize,
}

/// Jump candidates of an IDS approximant.
#[derive(Clone, Debug)]
pub struct JumpReport {
    pub jumps: Vec<Jump>,
    pub cluster_tol: f64,
    pub volume: f64,
}

impl JumpReport {
    /// The jump at a target energy, if one was reported there.
    pub fn at(&self, e: f64, tol: f64) -> Option<&Jump> {
        self.jumps.iter().find(|j| (j.energy - e).abs() <= tol)
    }
}

/// Clusters eigenvalues by gaps of at most `cluster_tol` and reports every
/// cluster whose weight reaches `weight_floor`.
pub fn detect_jumps(ids: &IdsApproximant, weight_floor: f64, cluster_tol: f64) -> JumpReport {
    assert!(weight_floor > 0.0);
    let mut jumps = Vec::new();
    let vals = &ids.eigenvalues;
    let mut start = 0usize;
    while start < vals.len() {
        let mut end = start + 1;
        while end < vals.len() && vals[end] - vals[end - 1] <= cluster_tol {
            end += 1;
        }
        let multiplicity = end - start;
        let weight = multiplicity as f64 / ids.volume;
        if weight >= weight_floor {
            let mean = vals[start..end].iter().sum::<f64>() / multiplicity as f64;
            jumps.push(Jump {
                energy: mean,
                weight,
                multiplicity,
            });
        }
        start = end;
    }
    JumpReport {
        jumps,
        cluster_tol,
        volume: ids.volume,
    }
}

/// A vector in the near-eigenspace at E with vanishing boundary coordinates.
#[derive(Clone, Debug)]
pub struct CompactEigenfunction {
    /// Coefficients over the operator's sites.
    pub vector: Vec<f64>,
    /// `|A v - E v|` after zeroing the boundary coordinates.
    pub residual: f64,
    /// Dimension of the eigenspace used.
    pub eigenspace_dim: usize,
}

/// Searches the span U of eigenvectors with `|lambda - E| <= tol` for a unit
/// vector vanishing on the boundary sites. Succeeds whenever
/// `dim U > #boundary` (the dimension-comparison argument); returns `None`
/// otherwise.
pub fn extract_compact_eigenfunction(
    a: &AssembledOperator,
    eigen: &EigenSystem,
    e: f64,
    boundary: &[Point],
    tol: f64,
) -> Result<Option<CompactEigenfunction>> {
    let boundary_idx: Vec<usize> = boundary
        .iter()
        .map(|p| {
            a.site_index(p)
                .ok_or_else(|| Error::BoundaryNotASite(p.to_string()))
        })
        .collect::<Result<_>>()?;

    let range = eigen.indices_near(e, tol);
    let dim_u = range.len();
    if dim_u == 0 || dim_u <= boundary_idx.len() {
        return Ok(None);
    }

    // rows of the eigenbasis at the boundary sites
    let mut b = ndarray::Array2::zeros((boundary_idx.len(), dim_u));
    for (row, &site) in boundary_idx.iter().enumerate() {
        for (col, k) in range.clone().enumerate() {
            b[[row, col]] = eigen.vectors()[[site, k]];
        }
    }
    let coeff = eigen::least_singular_direction(&b)?;

    // assemble the vector in site space and zero out the boundary exactly
    let n = a.dim();
    let mut v = vec![0.0; n];
    for (col, k) in range.clone().enumerate() {
        let c = coeff[col];
        if c != 0.0 {
            for i in 0..n {
                v[i] += c * eigen.vectors()[[i, k]];
            }
        }
    }
    for &i in &boundary_idx {
        v[i] = 0.0;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Ok(None);
    }
    for x in &mut v {
        *x /= norm;
    }
    let av = a.apply(&v);
    let residual = av
        .iter()
        .zip(&v)
        .map(|(l, r)| (l - e * r) * (l - e * r))
        .sum::<f64>()
        .sqrt();
    Ok(Some(CompactEigenfunction {
        vector: v,
        residual,
        eigenspace_dim: dim_u,
    }))
}

/// Per-window kernel-versus-boundary comparison along a van Hove sequence.
#[derive(Clone, Debug)]
pub struct ConverseDiagnostic {
    pub window_half: f64,
    pub volume: f64,
    /// Number of eigenvalues within the cluster tolerance of E.
    pub kernel_dim: usize,
    /// Sites within 2 r_A of the window boundary.
    pub boundary_count: usize,
    /// kernel_dim / |Q|, the per-window lower-density estimate.
    pub kernel_density: f64,
    /// boundary_count / |Q|, the vanishing boundary-density proxy.
    pub boundary_density: f64,
    /// True at the first window where the kernel dimension exceeds the
    /// boundary count, guaranteeing extraction by dimension comparison.
    pub crossover: bool,
}

/// Runs the dimension comparison of the converse argument along a sequence:
/// eigenvalue multiplicity near E against the number of inner-boundary sites
/// at range 2 r_A. Flags the first crossover.
pub fn converse_diagnostic(
    rule: &OperatorRule,
    omega: &DeloneSet,
    seq: &VanHoveSequence,
    e: f64,
) -> Result<Vec<ConverseDiagnostic>> {
    let windows: Vec<Window> = seq.windows().collect();
    let per_window: Vec<Result<(f64, usize, usize)>> = par::map_slice(&windows, |q| {
        let a = assemble(rule, omega, q)?;
        let values = symmetric_eigenvalues(a.matrix())?;
        let radius = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tol = default_cluster_tol(radius);
        let lo = values.partition_point(|&v| v < e - tol);
        let hi = values.partition_point(|&v| v <= e + tol);
        let boundary = inner_boundary_sites(omega, q, 2.0 * rule.range()).len();
        Ok((q.size(), hi - lo, boundary))
    });

    let mut out = Vec::with_capacity(windows.len());
    let mut crossed = false;
    for (q, res) in windows.iter().zip(per_window) {
        let (half, kernel_dim, boundary_count) = res?;
        let volume = q.volume();
        let crossover = !crossed && kernel_dim > boundary_count;
        if crossover {
            crossed = true;
        }
        out.push(ConverseDiagnostic {
            window_half: half,
            volume,
            kernel_dim,
            boundary_count,
            kernel_density: kernel_dim as f64 / volume,
            boundary_density: boundary_count as f64 / volume,
            crossover,
        });
    }
    Ok(out)
}

/// Spectral pairing with a polynomial test function:
/// `(1/|Q|) tr(phi(A|_Q)) = sum_i phi(lambda_i) / |Q|`.
pub fn spectral_pairing(ids: &IdsApproximant, poly_coeffs: &[f64]) -> f64 {
    let horner = |x: f64| {
        poly_coeffs
            .iter()
            .rev()
            .fold(0.0_f64, |acc, c| acc * x + c)
    };
    ids.eigenvalues.iter().map(|&l| horner(l)).sum::<f64>() / ids.volume
}

//! Dense symmetric eigensolver backend.
//!
//! Backed by faer, pinned to sequential execution so that repeated runs are
//! bit-identical; window-level parallelism lives in the callers.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::operators::{AssembledOperator, MAX_DENSE_DIM};

/// Full eigendecomposition of a symmetric matrix: ascending eigenvalues and
/// the matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: Array2<f64>,
}

impl EigenSystem {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvector columns, ordered like the eigenvalues.
    pub fn vectors(&self) -> &Array2<f64> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Indices of eigenvalues within `tol` of `e`.
    pub fn indices_near(&self, e: f64, tol: f64) -> std::ops::Range<usize> {
        let lo = self.values.partition_point(|&v| v < e - tol);
        let hi = self.values.partition_point(|&v| v <= e + tol);
        lo..hi
    }
}

fn ensure_seq_parallelism() {
    use std::sync::Once;
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        faer::set_global_parallelism(faer::Par::Seq);
    });
}

fn to_faer(m: &Array2<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[[i, j]])
}

/// Ascending eigenvalues of a dense symmetric matrix, values only.
pub fn symmetric_eigenvalues(m: &Array2<f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if n > MAX_DENSE_DIM {
        return Err(Error::MatrixTooLarge(n, MAX_DENSE_DIM));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    ensure_seq_parallelism();
    let mut values = to_faer(m)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|_| Error::EigenFailure)?;
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(values)
}

/// Full symmetric eigendecomposition of an assembled operator.
pub fn eigensystem(a: &AssembledOperator) -> Result<EigenSystem> {
    let n = a.dim();
    if n > MAX_DENSE_DIM {
        return Err(Error::MatrixTooLarge(n, MAX_DENSE_DIM));
    }
    if n == 0 {
        return Ok(EigenSystem {
            values: Vec::new(),
            vectors: Array2::zeros((0, 0)),
        });
    }
    ensure_seq_parallelism();
    let evd = to_faer(a.matrix())
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::EigenFailure)?;
    let raw_values: Vec<f64> = (0..n).map(|i| evd.S()[i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw_values[i].partial_cmp(&raw_values[j]).expect("finite"));
    let values: Vec<f64> = order.iter().map(|&i| raw_values[i]).collect();
    let u = evd.U();
    let vectors = Array2::from_shape_fn((n, n), |(i, k)| u[(i, order[k])]);
    Ok(EigenSystem { values, vectors })
}

/// A unit vector minimizing `|b v|` over unit vectors v: the eigenvector of
/// the smallest eigenvalue of the Gram matrix `b^T b`. When `b` has fewer
/// rows than columns this lands in the null space.
pub(crate) fn least_singular_direction(b: &Array2<f64>) -> Result<Vec<f64>> {
    let cols = b.ncols();
    if cols == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if b.nrows() == 0 {
        // nothing to constrain: any direction works
        let mut e0 = vec![0.0; cols];
        e0[0] = 1.0;
        return Ok(e0);
    }
    ensure_seq_parallelism();
    let gram = b.t().dot(b);
    let evd = to_faer(&gram)
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::EigenFailure)?;
    let mut min_idx = 0usize;
    let mut min_val = f64::INFINITY;
    for i in 0..cols {
        if evd.S()[i] < min_val {
            min_val = evd.S()[i];
            min_idx = i;
        }
    }
    let u = evd.U();
    Ok((0..cols).map(|i| u[(i, min_idx)]).collect())
}

//! Closed-form estimators under a multivariate normal model.
//!
//! Covariances use the maximum-likelihood (divide by N) convention.

use std::f64::consts::{E, PI};

use nalgebra::DMatrix;
use ndarray::{Array2, Axis};

use crate::error::{Error, Result};

/// A correlation-matrix determinant at or below this counts as singular.
const SINGULAR_CORRELATION_DET: f64 = 1e-12;

/// Mean-centred ML covariance of the columns of `samples`.
pub fn ml_covariance(samples: &Array2<f64>) -> DMatrix<f64> {
    let (n, d) = samples.dim();
    let mean = samples.mean_axis(Axis(0)).expect("non-empty sample matrix");
    let mut cov = DMatrix::zeros(d, d);
    for row in samples.rows() {
        for a in 0..d {
            let da = row[a] - mean[a];
            for b in 0..=a {
                cov[(a, b)] += da * (row[b] - mean[b]);
            }
        }
    }
    for a in 0..d {
        for b in 0..=a {
            cov[(a, b)] /= n as f64;
            cov[(b, a)] = cov[(a, b)];
        }
    }
    cov
}

/// `ln |cov|`, or `SingularCovariance` when the matrix is numerically singular.
pub fn log_det(cov: &DMatrix<f64>) -> Result<f64> {
    let d = cov.nrows();
    if d == 0 {
        return Ok(0.0);
    }
    let diag: Vec<f64> = (0..d).map(|i| cov[(i, i)]).collect();
    if diag.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::SingularCovariance);
    }
    let corr = DMatrix::from_fn(d, d, |a, b| cov[(a, b)] / (diag[a] * diag[b]).sqrt());
    let chol = corr.cholesky().ok_or(Error::SingularCovariance)?;
    let log_det_corr: f64 = chol.l_dirty().diagonal().iter().map(|v| 2.0 * v.ln()).sum();
    if !(log_det_corr > SINGULAR_CORRELATION_DET.ln()) {
        return Err(Error::SingularCovariance);
    }
    Ok(diag.iter().map(|v| v.ln()).sum::<f64>() + log_det_corr)
}

/// `½ ln((2πe)^d |cov|)`.
pub fn entropy_from_covariance(cov: &DMatrix<f64>) -> Result<f64> {
    let d = cov.nrows() as f64;
    Ok(0.5 * (d * (2.0 * PI * E).ln() + log_det(cov)?))
}

/// Differential entropy of the samples under a fitted Gaussian.
pub fn entropy_gaussian(samples: &Array2<f64>) -> Result<f64> {
    let (n, d) = samples.dim();
    if n <= d {
        return Err(Error::InvalidParameter(format!(
            "gaussian entropy needs more samples than dimensions ({n} <= {d})"
        )));
    }
    if d == 0 {
        return Ok(0.0);
    }
    entropy_from_covariance(&ml_covariance(samples))
}

/// Gaussian mutual information between two paired blocks.
///
/// Univariate blocks use `-½ ln(1 - r²)` with the ML sample correlation;
/// wider blocks use the log-determinant ratio of the joint covariance.
pub fn mi_gaussian(x: &Array2<f64>, y: &Array2<f64>) -> Result<f64> {
    check_paired(x, y)?;
    let n = x.nrows();
    if x.ncols() == 0 || y.ncols() == 0 {
        return Ok(0.0);
    }
    if n <= x.ncols() + y.ncols() {
        return Err(Error::InvalidParameter(format!(
            "gaussian mutual information needs more than {} samples",
            x.ncols() + y.ncols()
        )));
    }
    let joint = ndarray::concatenate(Axis(1), &[x.view(), y.view()]).expect("paired rows");
    let cov = ml_covariance(&joint);
    let dx = x.ncols();
    if dx == 1 && y.ncols() == 1 {
        let (vx, vy, cxy) = (cov[(0, 0)], cov[(1, 1)], cov[(0, 1)]);
        if !(vx > 0.0 && vy > 0.0) {
            return Err(Error::SingularCovariance);
        }
        let r = cxy / (vx * vy).sqrt();
        let one_minus_r2 = 1.0 - r * r;
        if one_minus_r2 <= SINGULAR_CORRELATION_DET {
            return Err(Error::PerfectCorrelation);
        }
        return Ok(-0.5 * one_minus_r2.ln());
    }
    let dy = y.ncols();
    let hx = log_det(&cov.view((0, 0), (dx, dx)).into_owned())?;
    let hy = log_det(&cov.view((dx, dx), (dy, dy)).into_owned())?;
    let hxy = log_det(&cov).map_err(|_| Error::PerfectCorrelation)?;
    Ok(0.5 * (hx + hy - hxy))
}

pub(crate) fn check_paired(x: &Array2<f64>, y: &Array2<f64>) -> Result<()> {
    if x.nrows() != y.nrows() {
        return Err(Error::InvalidParameter(format!(
            "blocks have {} and {} rows",
            x.nrows(),
            y.nrows()
        )));
    }
    Ok(())
}

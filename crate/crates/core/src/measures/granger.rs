//! Log residual-variance ratio of nested least-squares autoregressions.

use nalgebra::{DMatrix, DVector};
use ndarray::{Array2, Axis};

use crate::error::{Error, Result};

/// Relative size of an R pivot below which the design counts as rank deficient.
const RANK_TOLERANCE: f64 = 1e-10;

/// Fits `response` on an intercept plus `regressors` and returns the residual
/// sum of squares.
fn residual_sum_of_squares(response: &DVector<f64>, regressors: &Array2<f64>) -> Result<f64> {
    let (n, p) = regressors.dim();
    if n <= p + 1 {
        return Err(Error::RankDeficient);
    }
    let design = DMatrix::from_fn(n, p + 1, |i, j| if j == 0 { 1.0 } else { regressors[[i, j - 1]] });
    let qr = design.clone().qr();
    let r = qr.r();
    let largest = r.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if r.diagonal().iter().any(|v| v.abs() <= RANK_TOLERANCE * largest) {
        return Err(Error::RankDeficient);
    }
    let mut qty = response.clone();
    qr.q_tr_mul(&mut qty);
    let coef = r
        .solve_upper_triangular(&qty.rows(0, p + 1).into_owned())
        .ok_or(Error::RankDeficient)?;
    let residual = response - design * coef;
    Ok(residual.norm_squared())
}

fn centered(samples: &Array2<f64>) -> Array2<f64> {
    let mean = samples.mean_axis(Axis(0)).expect("non-empty sample matrix");
    samples - &mean
}

/// `ln(RSS_reduced / RSS_full)` where the reduced model regresses the target
/// present on its own past and the full model adds the source past.
///
/// Columns are mean-centred first; both models carry an intercept.
pub fn granger_from_blocks(
    target_present: &Array2<f64>,
    target_past: &Array2<f64>,
    source_past: &Array2<f64>,
) -> Result<f64> {
    let n = target_present.nrows();
    let y = centered(target_present);
    let response = DVector::from_iterator(n, y.column(0).iter().copied());
    let reduced_x = centered(target_past);
    let full_x = ndarray::concatenate(Axis(1), &[reduced_x.view(), centered(source_past).view()])
        .expect("paired rows");

    let rss_reduced = residual_sum_of_squares(&response, &reduced_x)?;
    let rss_full = residual_sum_of_squares(&response, &full_x)?;
    let scale = response.norm_squared();
    if !(rss_full > scale * 1e-24) {
        return Err(Error::ZeroResidual);
    }
    Ok((rss_reduced / rss_full).ln())
}

use ndarray::Array2;

use super::neighbors::{Boundary, NeighborIndex};
use crate::error::{Error, Result};

/// Box-kernel plug-in entropy in nats.
///
/// The density at each sample is the fraction of the other `N − 1` samples
/// inside the max-norm box of half-width `width`, divided by the box volume
/// `(2·width)^d`. Samples are expected to be standardized per column so that
/// `width` is in standard-deviation units. No bias correction is applied.
pub fn entropy_kernel(samples: &Array2<f64>, width: f64) -> Result<f64> {
    let (n, d) = samples.dim();
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "kernel width must be positive, got {width}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(
            "kernel entropy needs at least 2 samples".into(),
        ));
    }
    if d == 0 {
        return Ok(0.0);
    }
    let index = NeighborIndex::new(samples);
    let log_norm = ((n - 1) as f64).ln() + d as f64 * (2.0 * width).ln();
    let mut sum = 0.0;
    for i in 0..n {
        let count = index.count_within(i, width, Boundary::Inclusive);
        if count == 0 {
            return Err(Error::EmptyNeighborhood { index: i });
        }
        sum += (count as f64).ln() - log_norm;
    }
    Ok(-sum / n as f64)
}

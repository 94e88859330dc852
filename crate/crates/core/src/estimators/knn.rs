//! Nearest-neighbour estimators: Kozachenko–Leonenko entropy and the
//! Kraskov–Stögbauer–Grassberger (algorithm 1) mutual information, with the
//! Frenzel–Pompe conditional extension.
//!
//! All distances use the max norm. Inputs should be jittered with
//! [`add_tie_noise`](super::add_tie_noise) first; coincident samples make a
//! neighbour radius vanish and are reported as [`Error::DegenerateGeometry`].

use ndarray::{concatenate, Array2, Axis};

use super::gaussian::check_paired;
use super::neighbors::{Boundary, NeighborIndex};
use super::special::DigammaTable;
use crate::error::{Error, Result};

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "nearest-neighbour count {k} must satisfy 1 <= k < {n}"
        )));
    }
    Ok(())
}

fn join(blocks: &[&Array2<f64>]) -> Array2<f64> {
    let views: Vec<_> = blocks.iter().map(|b| b.view()).collect();
    concatenate(Axis(1), &views).expect("blocks share a row count")
}

/// Kozachenko–Leonenko differential entropy in nats.
///
/// `ψ(N) − ψ(k) + (d/N) Σ ln ε_i`, with `ε_i` twice the distance from sample
/// `i` to its `k`-th neighbour. The unit ball of the max norm has unit volume
/// at diameter one, so no volume term appears.
pub fn entropy_knn(samples: &Array2<f64>, k: usize) -> Result<f64> {
    let (n, d) = samples.dim();
    check_k(n, k)?;
    if d == 0 {
        return Ok(0.0);
    }
    let index = NeighborIndex::new(samples);
    let mut sum_log = 0.0;
    for i in 0..n {
        let r = index.kth_neighbor_distance(i, k);
        if r <= 0.0 {
            return Err(Error::DegenerateGeometry { index: i });
        }
        sum_log += (2.0 * r).ln();
    }
    let psi = DigammaTable::up_to(n);
    Ok(psi.get(n) - psi.get(k) + d as f64 * sum_log / n as f64)
}

/// KSG estimate of `I(X; Y)`; rows of `x` and `y` are paired.
///
/// May come out slightly negative on independent data; it is not clamped.
pub fn mi_ksg(x: &Array2<f64>, y: &Array2<f64>, k: usize) -> Result<f64> {
    check_paired(x, y)?;
    let n = x.nrows();
    check_k(n, k)?;
    let joint = NeighborIndex::new(&join(&[x, y]));
    let xs = NeighborIndex::new(x);
    let ys = NeighborIndex::new(y);
    let psi = DigammaTable::up_to(n);
    let mut sum = 0.0;
    for i in 0..n {
        let eps = joint.kth_neighbor_distance(i, k);
        if eps <= 0.0 {
            return Err(Error::DegenerateGeometry { index: i });
        }
        let nx = xs.count_within(i, eps, Boundary::Strict);
        let ny = ys.count_within(i, eps, Boundary::Strict);
        sum += psi.get(nx + 1) + psi.get(ny + 1);
    }
    Ok(psi.get(k) + psi.get(n) - sum / n as f64)
}

/// Conditional KSG estimate of `I(X; Y | Z)`.
///
/// An empty conditioning block reduces to [`mi_ksg`].
pub fn cmi_ksg(x: &Array2<f64>, y: &Array2<f64>, z: &Array2<f64>, k: usize) -> Result<f64> {
    if z.ncols() == 0 {
        return mi_ksg(x, y, k);
    }
    check_paired(x, y)?;
    check_paired(x, z)?;
    let n = x.nrows();
    check_k(n, k)?;
    let joint = NeighborIndex::new(&join(&[x, y, z]));
    let xz = NeighborIndex::new(&join(&[x, z]));
    let yz = NeighborIndex::new(&join(&[y, z]));
    let zs = NeighborIndex::new(z);
    let psi = DigammaTable::up_to(n);
    let mut sum = 0.0;
    for i in 0..n {
        let eps = joint.kth_neighbor_distance(i, k);
        if eps <= 0.0 {
            return Err(Error::DegenerateGeometry { index: i });
        }
        let n_xz = xz.count_within(i, eps, Boundary::Strict);
        let n_yz = yz.count_within(i, eps, Boundary::Strict);
        let n_z = zs.count_within(i, eps, Boundary::Strict);
        sum += psi.get(n_xz + 1) + psi.get(n_yz + 1) - psi.get(n_z + 1);
    }
    Ok(psi.get(k) - sum / n as f64)
}

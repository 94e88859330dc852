//! First-order vector autoregressions with closed-form measure values.

use std::f64::consts::{E, PI};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::measures::{DiMode, MeasureId, MeasureRequest};
use crate::series::{Dataset, TimeSeries};

/// Name of the generator used for every simulated dataset.
pub const GENERATOR: &str = "ChaCha8Rng(seed_from_u64) + rand_distr::StandardNormal";
pub const DEFAULT_BURN_IN: usize = 1000;

const LYAPUNOV_TOLERANCE: f64 = 1e-10;

/// `Z_{t+1} = A Z_t + ε_t`, `ε_t ~ N(0, Σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Var1System {
    a: DMatrix<f64>,
    sigma: DMatrix<f64>,
    names: Vec<String>,
}

impl Var1System {
    /// Builds a system with columns named `x1, ..., xm`.
    pub fn new(a: DMatrix<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        let names = (1..=a.nrows()).map(|i| format!("x{i}")).collect();
        Self::with_names(a, sigma, names)
    }

    pub fn with_names(a: DMatrix<f64>, sigma: DMatrix<f64>, names: Vec<String>) -> Result<Self> {
        let m = a.nrows();
        if a.ncols() != m || sigma.shape() != (m, m) || names.len() != m || m == 0 {
            return Err(Error::InvalidParameter(
                "A and Sigma must be square and match the number of names".into(),
            ));
        }
        if (&sigma - sigma.transpose()).amax() > 1e-12 || sigma.clone().cholesky().is_none() {
            return Err(Error::InvalidParameter(
                "innovation covariance must be symmetric positive definite".into(),
            ));
        }
        let radius = spectral_radius(&a);
        if radius >= 1.0 {
            return Err(Error::NonStationary(radius));
        }
        Ok(Self { a, sigma, names })
    }

    /// Unidirectional `X → Y` coupling with no contemporaneous covariance:
    /// `A = [[0, 0], [0.5, 0.5]]`, `Σ = diag(1, 0.25)`, columns `X` and `Y`.
    pub fn var_a() -> Self {
        Self::with_names(
            DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.5, 0.5]),
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.25])),
            vec!["X".into(), "Y".into()],
        )
        .expect("fixture is stationary")
    }

    /// Scalar AR(1) `x_{t+1} = φ x_t + ε_t` with unit innovations.
    pub fn ar1(phi: f64, name: &str) -> Result<Self> {
        Self::with_names(
            DMatrix::from_element(1, 1, phi),
            DMatrix::identity(1, 1),
            vec![name.to_string()],
        )
    }

    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn innovation_covariance(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }
}

fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    a.clone()
        .complex_eigenvalues()
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()))
}

/// Simulates `len` samples after discarding `burn_in` steps from `Z_0 = 0`.
pub fn gen_var1(system: &Var1System, len: usize, seed: u64, burn_in: usize) -> Result<Dataset> {
    if len < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let m = system.dim();
    let chol = system
        .sigma
        .clone()
        .cholesky()
        .expect("checked at construction")
        .unpack();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = DVector::zeros(m);
    let mut columns = vec![Vec::with_capacity(len); m];
    for step in 0..burn_in + len {
        let xi = DVector::from_fn(m, |_, _| StandardNormal.sample(&mut rng));
        state = &system.a * state + &chol * xi;
        if step >= burn_in {
            for (c, v) in columns.iter_mut().zip(state.iter()) {
                c.push(*v);
            }
        }
    }
    let series = columns
        .into_iter()
        .zip(&system.names)
        .map(|(values, name)| TimeSeries::new(name.clone(), values))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(series)
}

/// Lag-0 covariance `P` solving `P = A P Aᵀ + Σ` and lag-1 covariance
/// `C1 = Cov(Z_{t+1}, Z_t) = A P`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryCovariance {
    pub lag0: DMatrix<f64>,
    pub lag1: DMatrix<f64>,
}

/// Solves the discrete Lyapunov equation by the doubling iteration
/// `P ← P + Aₖ P Aₖᵀ`, `Aₖ ← Aₖ²`.
pub fn stationary_covariance(system: &Var1System) -> Result<StationaryCovariance> {
    let mut p = system.sigma.clone();
    let mut ak = system.a.clone();
    for _ in 0..200 {
        let next = &p + &ak * &p * ak.transpose();
        ak = &ak * &ak;
        let done = (&next - &p).amax() <= f64::EPSILON * next.amax() || ak.amax() == 0.0;
        p = next;
        if done {
            break;
        }
    }
    p = (&p + p.transpose()) * 0.5;
    let residual = (&p - &system.a * &p * system.a.transpose() - &system.sigma).amax();
    if !(residual < LYAPUNOV_TOLERANCE) {
        return Err(Error::NonStationary(spectral_radius(&system.a)));
    }
    let lag1 = &system.a * &p;
    Ok(StationaryCovariance { lag0: p, lag1 })
}

/// Gaussian process over `(Z_t, Z_{t+1})`: variable `i` is `Z_t[i]` and
/// `m + i` is `Z_{t+1}[i]`.
struct TwoSliceGaussian {
    cov: DMatrix<f64>,
}

impl TwoSliceGaussian {
    fn new(stat: &StationaryCovariance) -> Self {
        let m = stat.lag0.nrows();
        let mut cov = DMatrix::zeros(2 * m, 2 * m);
        cov.view_mut((0, 0), (m, m)).copy_from(&stat.lag0);
        cov.view_mut((m, m), (m, m)).copy_from(&stat.lag0);
        cov.view_mut((m, 0), (m, m)).copy_from(&stat.lag1);
        cov.view_mut((0, m), (m, m)).copy_from(&stat.lag1.transpose());
        Self { cov }
    }

    fn sub(&self, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.cov[(rows[i], cols[j])])
    }

    /// `h(A | B) = ½ ln((2πe)^|A| |Σ_AA − Σ_AB Σ_BB⁻¹ Σ_BA|)`.
    fn cond_entropy(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        let mut schur = self.sub(a, a);
        if !b.is_empty() {
            let chol = self.sub(b, b).cholesky().ok_or(Error::SingularCovariance)?;
            let sab = self.sub(a, b);
            schur -= &sab * chol.solve(&sab.transpose());
        }
        let det = schur.determinant();
        if !(det > 0.0) {
            return Err(Error::SingularCovariance);
        }
        Ok(0.5 * (a.len() as f64 * (2.0 * PI * E).ln() + det.ln()))
    }

    fn entropy(&self, a: &[usize]) -> Result<f64> {
        self.cond_entropy(a, &[])
    }
}

/// Population value of a measure for a VAR(1) process, memory length 1 only.
///
/// Directed information is supported for windows `K ≤ 2` in both modes.
pub fn analytic_gaussian_measure(system: &Var1System, req: &MeasureRequest) -> Result<f64> {
    req.validate()?;
    for order in [req.k, req.l, req.tau_source, req.tau_target] {
        if order != 1 {
            return Err(Error::UnsupportedOrder(order));
        }
    }
    let g = TwoSliceGaussian::new(&stationary_covariance(system)?);
    let m = system.dim();
    let y = system.index_of(&req.target)?;
    let (yp, yn) = (y, m + y);
    let x = match req.source.as_deref() {
        Some(name) => Some(system.index_of(name)?),
        None => None,
    };
    let (xp, xn) = x.map_or((usize::MAX, usize::MAX), |x| (x, m + x));

    let value = match req.measure {
        MeasureId::Entropy => g.entropy(&[yn])?,
        MeasureId::JointEntropy => g.entropy(&[xn, yn])?,
        MeasureId::MutualInformation => g.entropy(&[yn])? - g.cond_entropy(&[yn], &[xn])?,
        MeasureId::ConditionalEntropy => g.cond_entropy(&[yn], &[xn])?,
        MeasureId::ActiveInformationStorage => g.entropy(&[yn])? - g.cond_entropy(&[yn], &[yp])?,
        MeasureId::StochasticInteraction => {
            g.cond_entropy(&[xn], &[xp])? + g.cond_entropy(&[yn], &[yp])?
                - g.cond_entropy(&[xn, yn], &[xp, yp])?
        }
        MeasureId::TimeLaggedMi => g.entropy(&[yn])? - g.cond_entropy(&[yn], &[xp])?,
        MeasureId::CausallyConditionedEntropy => g.cond_entropy(&[yn], &[yp, xn, xp])?,
        MeasureId::DirectedInformation => {
            if req.max_window > 2 {
                return Err(Error::UnsupportedOrder(req.max_window));
            }
            let histories: [(&[usize], Vec<usize>); 2] = [(&[], vec![xn]), (&[yp], vec![xn, xp])];
            let mut total = 0.0;
            for (k, (y_past, x_hist)) in histories.iter().take(req.max_window).enumerate() {
                let own = match req.di_mode {
                    DiMode::Exact => g.cond_entropy(&[yn], y_past)?,
                    DiMode::PooledApprox => {
                        let block: Vec<usize> = std::iter::once(yn).chain(y_past.iter().copied()).collect();
                        g.entropy(&block)? / (k + 1) as f64
                    }
                };
                let cond: Vec<usize> = y_past.iter().chain(x_hist).copied().collect();
                total += own - g.cond_entropy(&[yn], &cond)?;
            }
            total
        }
        MeasureId::TransferEntropy => transfer(&g, yn, yp, xp)?,
        MeasureId::GrangerCausality => 2.0 * transfer(&g, yn, yp, xp)?,
    };
    Ok(value)
}

fn transfer(g: &TwoSliceGaussian, yn: usize, yp: usize, xp: usize) -> Result<f64> {
    Ok(g.cond_entropy(&[yn], &[yp])? - g.cond_entropy(&[yn], &[yp, xp])?)
}

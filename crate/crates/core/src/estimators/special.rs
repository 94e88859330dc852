use crate::error::{Error, Result};

/// Digamma function for positive arguments.
///
/// Shifts the argument above 10 with `psi(x) = psi(x + 1) - 1/x`, then applies
/// the asymptotic expansion in Bernoulli numbers.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(x));
    }
    Ok(digamma_unchecked(x))
}

pub(crate) fn digamma_unchecked(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // B_2n / (2n) for n = 1..7, evaluated by Horner in 1/x^2.
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    x.ln() - 0.5 * inv - series + shift
}

/// Digamma at positive integers, cached for the neighbour-count sums.
pub(crate) struct DigammaTable(Vec<f64>);

impl DigammaTable {
    /// Table covering `psi(1) ..= psi(max)`.
    pub(crate) fn up_to(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(f64::NAN);
        let mut value = -EULER_MASCHERONI;
        for n in 1..=max {
            // Recurrence drifts; re-anchor on the series every 1000 steps.
            if n % 1000 == 0 {
                value = digamma_unchecked(n as f64);
            }
            table.push(value);
            value += 1.0 / n as f64;
        }
        Self(table)
    }

    pub(crate) fn get(&self, n: usize) -> f64 {
        self.0[n]
    }
}

const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

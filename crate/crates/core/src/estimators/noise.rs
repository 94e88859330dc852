use std::collections::HashMap;

use ndarray::{Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative jitter applied before nearest-neighbour estimation.
pub const DEFAULT_TIE_NOISE: f64 = 1e-8;

/// Adds reproducible uniform jitter so that no two samples coincide.
///
/// Each coordinate receives noise drawn from `[-amplitude * sd, amplitude * sd]`,
/// where `sd` is the sample standard deviation of its column (1 for a constant
/// column). The draw for a coordinate is keyed by `seed`, the column index,
/// the value itself and how many earlier rows hold the same value, so
/// reordering rows of tie-free data reorders the jitter with them.
pub fn add_tie_noise(samples: &Array2<f64>, amplitude: f64, seed: u64) -> Array2<f64> {
    if amplitude == 0.0 || samples.is_empty() {
        return samples.clone();
    }
    let mut out = samples.clone();
    for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
        let sd = if col.len() > 1 { col.std(1.0) } else { 0.0 };
        let scale = amplitude * if sd > 0.0 { sd } else { 1.0 };
        let mut seen: HashMap<u64, u64> = HashMap::new();
        for v in col.iter_mut() {
            // +0.0 so that -0.0 and 0.0 count as the same value
            let bits = (*v + 0.0).to_bits();
            let occurrence = seen.entry(bits).or_insert(0);
            let mut key = [0u8; 32];
            for (chunk, word) in key.chunks_exact_mut(8).zip([seed, j as u64, bits, *occurrence]) {
                chunk.copy_from_slice(&word.to_le_bytes());
            }
            *occurrence += 1;
            *v += scale * ChaCha8Rng::from_seed(key).random_range(-1.0..=1.0);
        }
    }
    out
}

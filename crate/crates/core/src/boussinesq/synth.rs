use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::littlewood_paley::{DyadicPartition, CHI_SUPPORT};
use crate::spectral::{is_resolved, leray_project, max_abs, SpectralField, VectorField};

/// Lowest block factor; block weights are drawn from `[MIN_BLOCK_WEIGHT, 1]`.
const MIN_BLOCK_WEIGHT: f64 = 0.5;

/// Highest synthesized block.
fn top_block(partition: &DyadicPartition) -> i32 {
    partition.q_max() - 2
}

/// Random Hermitian field on the resolved modes with `2^q·4/3 ≤ |k| ≤ 2^{q+1}`,
/// where `Δ_q` acts as the identity and its neighbours vanish.
fn random_block(partition: &DyadicPartition, q: i32, rng: &mut ChaCha8Rng) -> SpectralField {
    let grid = partition.grid();
    let n = grid.n();
    let lo = 2f64.powi(q) * CHI_SUPPORT;
    let hi = 2f64.powi(q + 1);
    let mut f = SpectralField::zeros(grid);
    let coeffs = f.coeffs_mut();
    for i1 in 0..n {
        for i2 in 0..n {
            let (m1, m2) = (grid.mode(i1), grid.mode(i2));
            // one representative of each ± pair
            if (m1, m2) <= (-m1, -m2) || !is_resolved(n, m1, m2) {
                continue;
            }
            let k = grid.radius(i1, i2);
            if k < lo || k > hi {
                continue;
            }
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            coeffs[i1 * n + i2] = c;
            coeffs[grid.index(grid.index_of_mode(-m1), grid.index_of_mode(-m2))] = c.conj();
        }
    }
    f
}

fn block_weights(partition: &DyadicPartition, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let count = (top_block(partition) + 1).max(0) as usize;
    let mut w: Vec<f64> = (0..count).map(|_| rng.gen_range(MIN_BLOCK_WEIGHT..=1.0)).collect();
    if let Some(top) = w.iter().cloned().reduce(f64::max) {
        w.iter_mut().for_each(|x| *x /= top);
    }
    w
}

/// Mean-zero dealiased scalar with `2^{qr}‖Δ_q f‖_∞ ∈ [amplitude/2, amplitude]`
/// for `q = 0..=q_max−2` and exact `‖f‖_{C^r} = amplitude`. Blocks without
/// grid modes stay empty.
pub fn synthesize_holder_field(
    partition: &DyadicPartition,
    r: f64,
    amplitude: f64,
    seed: u64,
) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = block_weights(partition, &mut rng);
    let mut out = SpectralField::zeros(partition.grid());
    for (q, w) in weights.iter().enumerate() {
        let q = q as i32;
        let block = random_block(partition, q, &mut rng);
        let sup = max_abs(&block.to_values());
        if sup > 0.0 {
            out += &block.scale(amplitude * w * 2f64.powf(-q as f64 * r) / sup);
        }
    }
    out
}

/// Divergence-free analogue of [`synthesize_holder_field`]: each block is
/// Leray-projected, then scaled so the larger component sup sets its level.
pub fn synthesize_velocity_field(
    partition: &DyadicPartition,
    r: f64,
    amplitude: f64,
    seed: u64,
) -> VectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = block_weights(partition, &mut rng);
    let mut out = VectorField::zeros(partition.grid());
    for (q, w) in weights.iter().enumerate() {
        let q = q as i32;
        let raw = VectorField {
            u1: random_block(partition, q, &mut rng),
            u2: random_block(partition, q, &mut rng),
        };
        let block = leray_project(&raw);
        let sup = block.linf_norm();
        if sup > 0.0 {
            out = out.axpy(amplitude * w * 2f64.powf(-q as f64 * r) / sup, &block);
        }
    }
    out
}

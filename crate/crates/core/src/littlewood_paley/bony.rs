use super::partition::DyadicPartition;
use crate::error::Result;
use crate::spectral::{advect, dealias, SpectralField, VectorField};

/// `uv = T_u v + T_v u + R(u, v)`, each piece dealiased.
#[derive(Clone, Debug)]
pub struct BonyDecomposition {
    /// `T_u v = Σ_q S_{q−1}u · Δ_q v`.
    pub paraproduct_uv: SpectralField,
    /// `T_v u = Σ_q S_{q−1}v · Δ_q u`.
    pub paraproduct_vu: SpectralField,
    /// `R(u, v) = Σ_q Δ_q u · (Δ_{q−1} + Δ_q + Δ_{q+1}) v`.
    pub remainder: SpectralField,
}

impl BonyDecomposition {
    pub fn sum(&self) -> SpectralField {
        &(&self.paraproduct_uv + &self.paraproduct_vu) + &self.remainder
    }
}

/// Splits the product `uv` into paraproducts and remainder.
pub fn bony_decompose(
    partition: &DyadicPartition,
    u: &SpectralField,
    v: &SpectralField,
) -> Result<BonyDecomposition> {
    u.check_grid(v)?;
    let blocks_of = |f: &SpectralField| -> Result<Vec<Vec<f64>>> {
        partition
            .blocks()
            .map(|q| Ok(partition.block(q, f)?.to_values()))
            .collect()
    };
    let du = blocks_of(u)?;
    let dv = blocks_of(v)?;
    let len = u.grid().len();
    let count = du.len();
    // index i ↔ block q = i − 1
    let mut su = vec![0.0; len];
    let mut sv = vec![0.0; len];
    let mut t_uv = vec![0.0; len];
    let mut t_vu = vec![0.0; len];
    let mut rem = vec![0.0; len];
    for i in 0..count {
        // S_{q−1} = Σ_{p ≤ q−2} Δ_p: accumulated before block i is read
        if i >= 2 {
            for x in 0..len {
                su[x] += du[i - 2][x];
                sv[x] += dv[i - 2][x];
            }
        }
        for x in 0..len {
            t_uv[x] += su[x] * dv[i][x];
            t_vu[x] += sv[x] * du[i][x];
            let mut near = dv[i][x];
            if i > 0 {
                near += dv[i - 1][x];
            }
            if i + 1 < count {
                near += dv[i + 1][x];
            }
            rem[x] += du[i][x] * near;
        }
    }
    let grid = u.grid();
    let to_field = |values: &[f64]| dealias(&SpectralField::from_values(grid, values).expect("shape"));
    Ok(BonyDecomposition {
        paraproduct_uv: to_field(&t_uv),
        paraproduct_vu: to_field(&t_vu),
        remainder: to_field(&rem),
    })
}

/// `[v·∇, Δ_q] f = v·∇(Δ_q f) − Δ_q(v·∇f)`, both advections dealiased.
pub fn commutator(
    partition: &DyadicPartition,
    v: &VectorField,
    q: i32,
    f: &SpectralField,
) -> Result<SpectralField> {
    v.ensure_divergence_free()?;
    let dq_f = partition.block(q, f)?;
    let first = advect(v, &dq_f);
    let second = partition.block(q, &advect(v, f))?;
    Ok(&first - &second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::build_partition;
    use crate::spectral::{linf_norm, make_grid, product};
    use std::f64::consts::PI;

    #[test]
    fn sum_is_dealiased_product() {
        let p = build_partition(&make_grid(32, 2.0 * PI).unwrap()).unwrap();
        let g = p.grid();
        let u = SpectralField::from_fn(g, |x1, x2| (2.0 * x1).sin() + (7.0 * x2 - x1).cos());
        let v = SpectralField::from_fn(g, |x1, x2| 0.5 + (x1 + x2).cos() * (4.0 * x2).sin());
        let b = bony_decompose(&p, &u, &v).unwrap();
        let uv = product(&u, &v);
        assert!(linf_norm(&(&b.sum() - &uv)) < 1e-12 * linf_norm(&uv));
    }

    #[test]
    fn constant_factor() {
        let p = build_partition(&make_grid(32, 2.0 * PI).unwrap()).unwrap();
        let g = p.grid();
        let u = SpectralField::from_fn(g, |x1, x2| (3.0 * x1).sin() * x2.cos());
        let c = SpectralField::from_fn(g, |_, _| 2.0);
        let b = bony_decompose(&p, &u, &c).unwrap();
        assert!(linf_norm(&b.paraproduct_uv) < 1e-14);
        let cu = u.scale(2.0);
        assert!(linf_norm(&(&(&b.remainder + &b.paraproduct_vu) - &cu)) < 1e-13);
    }

    #[test]
    fn commutator_vanishes_for_constant_velocity() {
        let p = build_partition(&make_grid(32, 2.0 * PI).unwrap()).unwrap();
        let g = p.grid();
        let v = VectorField::new(
            SpectralField::from_fn(g, |_, _| 1.3),
            SpectralField::from_fn(g, |_, _| -0.4),
        )
        .unwrap();
        let f = SpectralField::from_fn(g, |x1, x2| (3.0 * x1 + x2).sin() + (5.0 * x2).cos());
        for q in -1..=p.q_max() {
            assert!(linf_norm(&commutator(&p, &v, q, &f).unwrap()) < 1e-12);
        }
    }
}

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::spectral::{lp_norm_of_values, max_abs, SpectralField, VectorField};

/// Summability or integrability exponent in `[1, ∞]`.
///
/// Serializes as a number, or as the string `"inf"` when infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn from_f64(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Infinite)
        } else if p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::InvalidParameter {
                name: "exponent",
                reason: format!("must lie in [1, ∞] (got {p})"),
            })
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(Exponent::Finite(p)),
            Raw::Text(t) if t == "inf" || t == "infinity" => Ok(Exponent::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad exponent {t:?}"))),
        }
    }
}

/// `f64` that round-trips `+∞` as the string `"inf"`.
pub mod maybe_inf {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad number {t:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockNorm {
    pub q: i32,
    #[serde(with = "maybe_inf")]
    pub norm: f64,
}

/// Per-block norms and the assembled inhomogeneous and homogeneous values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesovReport {
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
    /// `‖Δ_j f‖_{L^p}` for `j = −1..=q_max`.
    pub blocks: Vec<BlockNorm>,
    #[serde(with = "maybe_inf")]
    pub value: f64,
    #[serde(with = "maybe_inf")]
    pub homogeneous_value: f64,
    /// `‖Δ̇_j f‖_{L^p}` for `j = q_min..=q_max`.
    #[serde(skip)]
    pub homogeneous_blocks: Vec<BlockNorm>,
}

/// `(Σ_j (2^{js} b_j)^q)^{1/q}`, or the supremum for `q = ∞`.
pub fn assemble(s: f64, q: Exponent, blocks: &[BlockNorm]) -> f64 {
    let weighted = blocks.iter().map(|b| 2f64.powf(b.q as f64 * s) * b.norm);
    match q {
        Exponent::Infinite => weighted.fold(0.0, f64::max),
        Exponent::Finite(q) => {
            let terms: Vec<f64> = weighted.collect();
            let scale = terms.iter().cloned().fold(0.0, f64::max);
            if scale == 0.0 {
                return 0.0;
            }
            scale * terms.iter().map(|t| (t / scale).powf(q)).sum::<f64>().powf(1.0 / q)
        }
    }
}

fn block_lp(f: &SpectralField, multiplier: &[f64], p: f64) -> f64 {
    let values = f.apply_real_multiplier(multiplier).to_values();
    lp_norm_of_values(&values, f.grid().spacing(), p).expect("exponent validated")
}

/// `‖f‖_{B^s_{p,q}}` and `‖f‖_{Ḃ^s_{p,q}}` with their block norms.
pub fn besov_norm(
    partition: &DyadicPartition,
    f: &SpectralField,
    s: f64,
    p: Exponent,
    q: Exponent,
) -> Result<BesovReport> {
    if !s.is_finite() {
        return Err(Error::InvalidParameter {
            name: "s",
            reason: format!("regularity must be finite (got {s})"),
        });
    }
    let pv = Exponent::from_f64(p.value())?.value();
    Exponent::from_f64(q.value())?;
    if **f.grid() != **partition.grid() {
        return Err(Error::GridMismatch);
    }
    let blocks: Vec<BlockNorm> = partition
        .blocks()
        .map(|j| BlockNorm {
            q: j,
            norm: block_lp(f, partition.block_multiplier(j).expect("in range"), pv),
        })
        .collect();
    let homogeneous_blocks: Vec<BlockNorm> = (partition.q_min()..0)
        .map(|j| BlockNorm {
            q: j,
            norm: block_lp(f, partition.homogeneous_multiplier(j).expect("in range"), pv),
        })
        .chain(blocks.iter().filter(|b| b.q >= 0).cloned())
        .collect();
    Ok(BesovReport {
        s,
        p,
        q,
        value: assemble(s, q, &blocks),
        homogeneous_value: assemble(s, q, &homogeneous_blocks),
        blocks,
        homogeneous_blocks,
    })
}

/// `‖f‖_{Ḃ^s_{p,q}}` over the resolvable homogeneous blocks.
pub fn homogeneous_besov_norm(
    partition: &DyadicPartition,
    f: &SpectralField,
    s: f64,
    p: Exponent,
    q: Exponent,
) -> Result<f64> {
    Ok(besov_norm(partition, f, s, p, q)?.homogeneous_value)
}

/// `‖f‖_{C^r} = ‖f‖_{B^r_{∞,∞}}`, `r > 0`.
pub fn holder_norm(partition: &DyadicPartition, f: &SpectralField, r: f64) -> Result<BesovReport> {
    check_regularity(r)?;
    besov_norm(partition, f, r, Exponent::Infinite, Exponent::Infinite)
}

fn check_regularity(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "r",
            reason: format!("Hölder exponent must be positive (got {r})"),
        })
    }
}

/// `sup_j 2^{jr} ‖Δ_j f‖_∞` without building a report. Any real `r` is
/// accepted, so `C^{r−1}` gaps with `r − 1 ≤ 0` are measured the same way.
pub fn holder_value(partition: &DyadicPartition, f: &SpectralField, r: f64) -> f64 {
    partition
        .blocks()
        .map(|j| {
            let m = partition.block_multiplier(j).expect("in range");
            2f64.powf(j as f64 * r) * max_abs(&f.apply_real_multiplier(m).to_values())
        })
        .fold(0.0, f64::max)
}

/// Max of the component `C^r` values.
pub fn holder_value_vector(partition: &DyadicPartition, u: &VectorField, r: f64) -> f64 {
    holder_value(partition, &u.u1, r).max(holder_value(partition, &u.u2, r))
}

/// `‖u‖_{C^r}` of a vector field as the max over components.
pub fn holder_norm_vector(partition: &DyadicPartition, u: &VectorField, r: f64) -> Result<f64> {
    check_regularity(r)?;
    Ok(holder_value_vector(partition, u, r))
}

/// `‖f‖_{B^1_{∞,1}}`.
pub fn b1_inf_1_norm(partition: &DyadicPartition, f: &SpectralField) -> f64 {
    besov_norm(
        partition,
        f,
        1.0,
        Exponent::Infinite,
        Exponent::Finite(1.0),
    )
    .expect("valid exponents")
    .value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::{build_partition, phi};
    use crate::spectral::{linf_norm, make_grid};
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn setup(n: usize) -> DyadicPartition {
        build_partition(&make_grid(n, 2.0 * PI).unwrap()).unwrap()
    }

    #[test]
    fn constant_norm() {
        let p = setup(32);
        let c = SpectralField::from_fn(p.grid(), |_, _| -3.0);
        for r in [0.5, 1.0, 2.3] {
            let v = holder_norm(&p, &c, r).unwrap().value;
            assert!((v - 2f64.powf(-r) * 3.0).abs() < 1e-13);
        }
        assert!(holder_norm(&p, &c, 0.0).is_err());
        assert!(holder_norm(&p, &c, -1.0).is_err());
    }

    #[test]
    fn single_mode_in_block_core() {
        let p = setup(64);
        // |k| = 12: φ(12/8) = 1 so all mass sits in block 3
        assert_eq!(phi(12.0 / 8.0), 1.0);
        let f = SpectralField::real_mode(p.grid(), 12, 0, Complex64::new(0.5, 0.0));
        let rep = holder_norm(&p, &f, 1.5).unwrap();
        let expect = 8f64.powf(1.5) * linf_norm(&f);
        assert!((rep.value - expect).abs() < 1e-12 * expect);
        for b in &rep.blocks {
            if b.q != 3 {
                assert!(b.norm < 1e-14);
            }
        }
    }

    #[test]
    fn homogeneous_and_inhomogeneous_agree_on_high_blocks() {
        let p = setup(32);
        let f = SpectralField::from_fn(p.grid(), |x1, x2| (3.0 * x1).sin() + (x2 + 5.0 * x1).cos());
        let rep = besov_norm(&p, &f, 0.7, Exponent::Finite(2.0), Exponent::Finite(1.0)).unwrap();
        for b in &rep.blocks {
            if b.q >= 0 {
                let h = rep.homogeneous_blocks.iter().find(|h| h.q == b.q).unwrap();
                assert_eq!(h.norm, b.norm);
            }
        }
        assert_eq!(rep.homogeneous_blocks.first().unwrap().q, p.q_min());
    }

    #[test]
    fn serializes_infinite_exponents_as_strings() {
        let p = setup(16);
        let f = SpectralField::from_fn(p.grid(), |x1, _| x1.cos());
        let rep = holder_norm(&p, &f, 1.0).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["p"], "inf");
        assert_eq!(json["q"], "inf");
        assert_eq!(json["s"], 1.0);
        assert!(json["blocks"][0]["q"] == -1);
        let back: BesovReport = serde_json::from_value(json).unwrap();
        assert_eq!(back.value, rep.value);
        assert_eq!(back.p, Exponent::Infinite);
    }

    #[test]
    fn rejects_bad_exponents() {
        let p = setup(16);
        let f = SpectralField::zeros(p.grid());
        assert!(besov_norm(&p, &f, 1.0, Exponent::Finite(0.5), Exponent::Infinite).is_err());
        assert!(besov_norm(&p, &f, f64::NAN, Exponent::Infinite, Exponent::Infinite).is_err());
    }
}

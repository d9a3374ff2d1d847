use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::state::{BoussinesqState, Kernel};
use super::synth::{synthesize_holder_field, synthesize_velocity_field};
use crate::error::{Error, Result};
use crate::littlewood_paley::DyadicPartition;
use crate::spectral::{SpectralField, VectorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `u₀ = 0`, `θ₀ = sin(2πx₂/L)`: a steady state.
    Hydrostatic,
    /// Taylor–Green vortex with a small temperature anomaly.
    TaylorGreen,
    /// `θ₀ = 0` and a perturbed Taylor–Green velocity.
    EulerReduction,
    /// Random data with `‖θ₀‖_r = ‖u₀‖_r = 0.1`.
    SmallDataIteration,
}

pub const PRESETS: [Preset; 4] = [
    Preset::Hydrostatic,
    Preset::TaylorGreen,
    Preset::EulerReduction,
    Preset::SmallDataIteration,
];

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Hydrostatic => "hydrostatic",
            Preset::TaylorGreen => "taylor-green",
            Preset::EulerReduction => "euler-reduction",
            Preset::SmallDataIteration => "small-data-iteration",
        }
    }

    pub fn defaults(self) -> PresetDefaults {
        let base = PresetDefaults {
            n: 64,
            length: 2.0 * PI,
            r: 1.5,
            horizon: 1.0,
            dt: 5e-3,
            seed: 0,
            theta_amplitude: 0.1,
            u_amplitude: 1.0,
            kernel: Kernel::Boussinesq,
        };
        match self {
            Preset::Hydrostatic => PresetDefaults {
                horizon: 5.0,
                dt: 1e-2,
                theta_amplitude: 1.0,
                u_amplitude: 0.0,
                ..base
            },
            Preset::TaylorGreen => base,
            Preset::EulerReduction => PresetDefaults {
                theta_amplitude: 0.0,
                u_amplitude: 0.05,
                ..base
            },
            Preset::SmallDataIteration => PresetDefaults {
                horizon: 0.2,
                dt: 1e-2,
                seed: 1,
                theta_amplitude: 0.1,
                u_amplitude: 0.1,
                ..base
            },
        }
    }

    /// Initial state on `partition`'s grid.
    pub fn initial_state(
        self,
        partition: &DyadicPartition,
        r: f64,
        seed: u64,
        theta_amplitude: f64,
        u_amplitude: f64,
    ) -> Result<BoussinesqState> {
        let g = partition.grid();
        let w = g.fundamental();
        let taylor_green = |a: f64| VectorField {
            u1: SpectralField::from_fn(g, |x1, x2| a * (w * x1).sin() * (w * x2).cos()),
            u2: SpectralField::from_fn(g, |x1, x2| -a * (w * x1).cos() * (w * x2).sin()),
        };
        let (theta, u) = match self {
            Preset::Hydrostatic => (
                SpectralField::from_fn(g, |_, x2| theta_amplitude * (w * x2).sin()),
                VectorField::zeros(g),
            ),
            Preset::TaylorGreen => (
                SpectralField::from_fn(g, |x1, x2| {
                    theta_amplitude * (w * x1).cos() * (2.0 * w * x2).sin()
                }),
                taylor_green(u_amplitude),
            ),
            Preset::EulerReduction => (
                SpectralField::zeros(g),
                taylor_green(1.0).axpy(1.0, &synthesize_velocity_field(partition, r, u_amplitude, seed)),
            ),
            Preset::SmallDataIteration => (
                synthesize_holder_field(partition, r, theta_amplitude, seed),
                synthesize_velocity_field(partition, r, u_amplitude, seed.wrapping_add(1_000_003)),
            ),
        };
        BoussinesqState::new(theta, u)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PRESETS
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "preset",
                reason: format!(
                    "unknown preset {s:?} (expected one of {})",
                    PRESETS.map(Preset::name).join(", ")
                ),
            })
    }
}

/// Grid, horizon and amplitudes a preset is tuned for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresetDefaults {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub r: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
    pub theta_amplitude: f64,
    pub u_amplitude: f64,
    pub kernel: Kernel,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::{build_partition, holder_value, holder_value_vector};
    use crate::spectral::make_grid;

    #[test]
    fn names_round_trip() {
        for p in PRESETS {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("vortex".parse::<Preset>().is_err());
    }

    #[test]
    fn small_data_norms() {
        let p = build_partition(&make_grid(64, 2.0 * PI).unwrap()).unwrap();
        let d = Preset::SmallDataIteration.defaults();
        let s = Preset::SmallDataIteration
            .initial_state(&p, d.r, d.seed, d.theta_amplitude, d.u_amplitude)
            .unwrap();
        assert!((holder_value(&p, &s.theta, d.r) - 0.1).abs() < 1e-12);
        assert!((holder_value_vector(&p, &s.u, d.r) - 0.1).abs() < 1e-12);
    }
}

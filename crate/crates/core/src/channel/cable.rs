//! Per-unit-length cable parameters and the frequency band.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Parametric cable: skin-effect resistance and dielectric conductance
/// scale from their values at `f0_hz`; L and C are constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CableType {
    pub r0_ohm_per_m: f64,
    pub f0_hz: f64,
    pub l_h_per_m: f64,
    pub g0_s_per_m: f64,
    pub c_f_per_m: f64,
}

impl CableType {
    pub fn default_backbone() -> Self {
        Self {
            r0_ohm_per_m: 1e-3,
            f0_hz: 1e6,
            l_h_per_m: 0.3e-6,
            g0_s_per_m: 1e-9,
            c_f_per_m: 0.15e-9,
        }
    }

    pub fn default_drop() -> Self {
        Self {
            r0_ohm_per_m: 5e-3,
            f0_hz: 1e6,
            l_h_per_m: 0.4e-6,
            g0_s_per_m: 2e-9,
            c_f_per_m: 0.1e-9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if nonneg(self.r0_ohm_per_m)
            && nonneg(self.g0_s_per_m)
            && pos(self.f0_hz)
            && pos(self.l_h_per_m)
            && pos(self.c_f_per_m)
        {
            Ok(())
        } else {
            Err(SimError::domain(format!("invalid cable parameters {self:?}")))
        }
    }
}

/// Named cable types referenced by grid segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CableCatalog(pub BTreeMap<String, CableType>);

impl Default for CableCatalog {
    fn default() -> Self {
        Self(BTreeMap::from([
            ("backbone".to_string(), CableType::default_backbone()),
            ("drop".to_string(), CableType::default_drop()),
        ]))
    }
}

impl CableCatalog {
    pub fn get(&self, key: &str) -> Result<&CableType> {
        self.0
            .get(key)
            .ok_or_else(|| SimError::domain(format!("cable type {key:?} not in catalog")))
    }

    pub fn validate(&self) -> Result<()> {
        self.0.values().try_for_each(CableType::validate)
    }
}

/// Primary line constants at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rlgc {
    pub r: f64,
    pub l: f64,
    pub g: f64,
    pub c: f64,
}

pub fn rlgc_at(cable: &CableType, f_hz: f64) -> Result<Rlgc> {
    if !(f_hz.is_finite() && f_hz > 0.0) {
        return Err(SimError::domain(format!("frequency must be positive, got {f_hz}")));
    }
    let ratio = f_hz / cable.f0_hz;
    Ok(Rlgc {
        r: cable.r0_ohm_per_m * ratio.sqrt(),
        l: cable.l_h_per_m,
        g: cable.g0_s_per_m * ratio,
        c: cable.c_f_per_m,
    })
}

/// Characteristic impedance and propagation constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineConstants {
    pub z0: Complex64,
    pub gamma: Complex64,
}

/// Telegrapher secondary parameters, principal square roots.
///
/// Both series impedance and shunt admittance lie in the closed first
/// quadrant, so the principal roots give `Re(Z0) >= 0` and `Re(gamma) >= 0`.
pub fn secondary_params(rlgc: &Rlgc, f_hz: f64) -> LineConstants {
    let omega = 2.0 * PI * f_hz;
    let series = Complex64::new(rlgc.r, omega * rlgc.l);
    let shunt = Complex64::new(rlgc.g, omega * rlgc.c);
    LineConstants {
        z0: (series / shunt).sqrt(),
        gamma: (series * shunt).sqrt(),
    }
}

/// Uniform band, sampled at bin centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrequencyGrid {
    pub f_min_hz: f64,
    pub f_max_hz: f64,
    pub n_points: usize,
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        Self {
            f_min_hz: 2e6,
            f_max_hz: 86e6,
            n_points: 1024,
        }
    }
}

impl FrequencyGrid {
    pub fn new(f_min_hz: f64, f_max_hz: f64, n_points: usize) -> Result<Self> {
        let grid = Self {
            f_min_hz,
            f_max_hz,
            n_points,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_min_hz.is_finite() && self.f_max_hz.is_finite() && 0.0 < self.f_min_hz && self.f_min_hz < self.f_max_hz) {
            return Err(SimError::domain(format!(
                "band must satisfy 0 < f_min < f_max, got [{}, {}]",
                self.f_min_hz, self.f_max_hz
            )));
        }
        if self.n_points == 0 {
            return Err(SimError::domain("band needs at least one point"));
        }
        Ok(())
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.f_max_hz - self.f_min_hz
    }

    pub fn spacing_hz(&self) -> f64 {
        self.bandwidth_hz() / self.n_points as f64
    }

    pub fn frequency(&self, k: usize) -> f64 {
        self.f_min_hz + (k as f64 + 0.5) * self.spacing_hz()
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|k| self.frequency(k))
    }
}

/// Line constants of one cable across a band.
pub fn line_constants(cable: &CableType, fgrid: &FrequencyGrid) -> Result<Vec<LineConstants>> {
    fgrid
        .frequencies()
        .map(|f| rlgc_at(cable, f).map(|p| secondary_params(&p, f)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rlgc_scaling_laws() {
        let cable = CableType::default_drop();
        let p = rlgc_at(&cable, cable.f0_hz).unwrap();
        assert_eq!(
            p,
            Rlgc {
                r: cable.r0_ohm_per_m,
                l: cable.l_h_per_m,
                g: cable.g0_s_per_m,
                c: cable.c_f_per_m
            }
        );
        assert_relative_eq!(rlgc_at(&cable, 4.0 * cable.f0_hz).unwrap().r, 2.0 * cable.r0_ohm_per_m);
        assert_relative_eq!(rlgc_at(&cable, cable.f0_hz / 4.0).unwrap().g, cable.g0_s_per_m / 4.0);
    }

    #[test]
    fn rlgc_rejects_nonpositive_frequency() {
        let cable = CableType::default_backbone();
        assert!(rlgc_at(&cable, 0.0).is_err());
        assert!(rlgc_at(&cable, -1.0).is_err());
    }

    #[test]
    fn lossless_line_is_real_50_ohm() {
        let p = Rlgc {
            r: 0.0,
            l: 250e-9,
            g: 0.0,
            c: 100e-12,
        };
        let lc = secondary_params(&p, 10e6);
        assert_relative_eq!(lc.z0.re, 50.0, max_relative = 1e-12);
        assert!(lc.z0.im.abs() < 1e-9);
        assert_eq!(lc.gamma.re, 0.0);
        assert_relative_eq!(lc.gamma.im, 2.0 * PI * 10e6 * (250e-9f64 * 100e-12).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn distortionless_line_attenuation() {
        // R/L = G/C
        let p = Rlgc {
            r: 0.02,
            l: 400e-9,
            g: 0.02 * 100e-12 / 400e-9,
            c: 100e-12,
        };
        let lc = secondary_params(&p, 5e6);
        assert_relative_eq!(lc.gamma.re, (p.r * p.g).sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn passive_branch_for_default_cables() {
        for cable in [CableType::default_backbone(), CableType::default_drop()] {
            for lc in line_constants(&cable, &FrequencyGrid::default()).unwrap() {
                assert!(lc.gamma.re >= 0.0 && lc.z0.re >= 0.0);
            }
        }
    }

    #[test]
    fn grid_bin_centers() {
        let g = FrequencyGrid::new(2e6, 86e6, 1024).unwrap();
        assert_relative_eq!(g.spacing_hz(), 84e6 / 1024.0);
        assert_relative_eq!(g.frequency(0), 2e6 + 0.5 * 84e6 / 1024.0);
        assert!(g.frequency(1023) < 86e6);
        assert!(FrequencyGrid::new(5.0, 5.0, 3).is_err());
        assert!(FrequencyGrid::new(1.0, 5.0, 0).is_err());
    }
}

//! Shannon rate of a link under a flat transmit PSD and flat Gaussian noise.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelResponse, FrequencyGrid};
use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsdConfig {
    pub tx_dbm_per_hz: f64,
    pub noise_dbm_per_hz: f64,
    /// Spectral-efficiency ceiling per subcarrier.
    pub eta_max_bits_per_s_per_hz: f64,
}

impl Default for PsdConfig {
    fn default() -> Self {
        Self {
            tx_dbm_per_hz: -50.0,
            noise_dbm_per_hz: -140.0,
            eta_max_bits_per_s_per_hz: 12.0,
        }
    }
}

impl PsdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tx_dbm_per_hz.is_finite() && self.noise_dbm_per_hz.is_finite()) {
            return Err(SimError::domain("PSD levels must be finite"));
        }
        if self.tx_dbm_per_hz < self.noise_dbm_per_hz {
            return Err(SimError::domain(format!(
                "transmit PSD {} dBm/Hz is below the noise floor {} dBm/Hz",
                self.tx_dbm_per_hz, self.noise_dbm_per_hz
            )));
        }
        if !(self.eta_max_bits_per_s_per_hz > 0.0) {
            return Err(SimError::domain("eta_max must be positive"));
        }
        Ok(())
    }

    /// Linear SNR of a 0 dB channel.
    pub fn reference_snr(&self) -> f64 {
        10f64.powf((self.tx_dbm_per_hz - self.noise_dbm_per_hz) / 10.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CapacityResult {
    pub bps: f64,
}

/// Capacity for per-point power gains `|H(f_k)|^2` on bins of `spacing_hz`.
pub fn capacity_from_gains(power_gains: impl IntoIterator<Item = f64>, psd: &PsdConfig, spacing_hz: f64) -> f64 {
    let snr0 = psd.reference_snr();
    let eta = psd.eta_max_bits_per_s_per_hz;
    power_gains
        .into_iter()
        .map(|g| ((g * snr0).ln_1p() / std::f64::consts::LN_2).min(eta))
        .sum::<f64>()
        * spacing_hz
}

pub fn link_capacity(response: &ChannelResponse, psd: &PsdConfig, fgrid: &FrequencyGrid) -> Result<CapacityResult> {
    psd.validate()?;
    fgrid.validate()?;
    if response.h.len() != fgrid.n_points {
        return Err(SimError::Shape(format!(
            "response has {} points, band has {}",
            response.h.len(),
            fgrid.n_points
        )));
    }
    let bps = capacity_from_gains(response.h.iter().map(|h| h.norm_sqr()), psd, fgrid.spacing_hz());
    Ok(CapacityResult { bps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn flat(gain_db: f64, n: usize) -> ChannelResponse {
        let amp = 10f64.powf(gain_db / 20.0);
        ChannelResponse::from_transfer(vec![Complex64::new(amp, 0.0); n]).unwrap()
    }

    #[test]
    fn unit_snr_gives_one_bit_per_hz() {
        let psd = PsdConfig {
            tx_dbm_per_hz: -100.0,
            noise_dbm_per_hz: -100.0,
            eta_max_bits_per_s_per_hz: 1e9,
        };
        let fgrid = FrequencyGrid::new(10e6, 110e6, 256).unwrap();
        let c = link_capacity(&flat(0.0, 256), &psd, &fgrid).unwrap();
        assert_relative_eq!(c.bps, 100e6, max_relative = 1e-12);
    }

    #[test]
    fn calibration_points() {
        let fgrid = FrequencyGrid::default();
        let psd = PsdConfig::default();
        let at = |db| link_capacity(&flat(db, 1024), &psd, &fgrid).unwrap().bps;
        // closed forms: 84 MHz * log2(1 + 10^((90 + g) / 10))
        assert_relative_eq!(at(-100.0), 84e6 * 1.1f64.log2(), max_relative = 1e-9);
        assert_relative_eq!(at(-100.0), 11.5502e6, max_relative = 1e-4);
        assert_relative_eq!(at(-120.0), 84e6 * 1.001f64.log2(), max_relative = 1e-9);
        assert_relative_eq!(at(-120.0), 0.121e6, max_relative = 1e-2);
        assert_relative_eq!(at(0.0), 1.008e9, max_relative = 1e-12);
    }

    #[test]
    fn rejects_grid_mismatch_and_bad_psd() {
        let fgrid = FrequencyGrid::default();
        assert!(matches!(
            link_capacity(&flat(0.0, 10), &PsdConfig::default(), &fgrid),
            Err(SimError::Shape(_))
        ));
        let bad = PsdConfig {
            tx_dbm_per_hz: -150.0,
            ..PsdConfig::default()
        };
        assert!(link_capacity(&flat(0.0, 1024), &bad, &fgrid).is_err());
    }

    #[test]
    fn additive_over_sub_bands() {
        let full = FrequencyGrid::new(2e6, 86e6, 1024).unwrap();
        let low = FrequencyGrid::new(2e6, 44e6, 512).unwrap();
        let high = FrequencyGrid::new(44e6, 86e6, 512).unwrap();
        let h: Vec<Complex64> = (0..1024)
            .map(|k| Complex64::from_polar(10f64.powf(-(k as f64) / 200.0), k as f64))
            .collect();
        let psd = PsdConfig::default();
        let total = link_capacity(&ChannelResponse::from_transfer(h.clone()).unwrap(), &psd, &full).unwrap().bps;
        let a = link_capacity(&ChannelResponse::from_transfer(h[..512].to_vec()).unwrap(), &psd, &low).unwrap().bps;
        let b = link_capacity(&ChannelResponse::from_transfer(h[512..].to_vec()).unwrap(), &psd, &high).unwrap().bps;
        assert_relative_eq!(a + b, total, max_relative = 1e-9);
    }

    proptest! {
        #[test]
        fn bounded_and_monotone(gains in prop::collection::vec(0.0f64..1.0, 1..64), k in 0usize..64, bump in 0.0f64..1.0,
                                tx in -80.0f64..-40.0, noise in -160.0f64..-120.0) {
            let psd = PsdConfig { tx_dbm_per_hz: tx, noise_dbm_per_hz: noise, eta_max_bits_per_s_per_hz: 12.0 };
            let c = capacity_from_gains(gains.iter().copied(), &psd, 1e5);
            prop_assert!(c >= 0.0 && c <= 12.0 * 1e5 * gains.len() as f64 * (1.0 + 1e-12));

            let mut more = gains.clone();
            let k = k % gains.len();
            more[k] += bump;
            prop_assert!(capacity_from_gains(more, &psd, 1e5) >= c);

            let louder = PsdConfig { tx_dbm_per_hz: tx + 3.0, ..psd };
            prop_assert!(capacity_from_gains(gains.iter().copied(), &louder, 1e5) >= c);
            let noisier = PsdConfig { noise_dbm_per_hz: noise + 3.0, ..psd };
            prop_assert!(capacity_from_gains(gains.iter().copied(), &noisier, 1e5) <= c);
        }
    }
}

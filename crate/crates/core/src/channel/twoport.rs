//! ABCD (chain) two-port algebra.

use std::ops::Mul;

use num_complex::Complex64;

use super::cable::LineConstants;
use crate::error::{Result, SimError};

/// Above this `Re(gamma * l)`, `cosh`/`sinh` are within a few decades of
/// overflowing and the line is treated by its matched asymptote.
pub const ATTENUATION_LIMIT_NEPER: f64 = 700.0;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Beyond this `|Re x|`, `tanh(x)` and `coth(x)` equal `sign(Re x)` to
/// within 2e-17.
const SATURATION: f64 = 20.0;

/// `coth` as `cosh / sinh`, saturating for strongly attenuated arguments.
pub(crate) fn coth(x: Complex64) -> Complex64 {
    if x.re > SATURATION {
        ONE
    } else if x.re < -SATURATION {
        -ONE
    } else {
        x.cosh() / x.sinh()
    }
}

/// Chain matrix at a single frequency: `[V1, I1] = [[A, B], [C, D]] [V2, I2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abcd {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Abcd {
    pub const IDENTITY: Abcd = Abcd {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    /// Uniform line section. Overflows once `Re(gamma * l)` approaches
    /// [`ATTENUATION_LIMIT_NEPER`]; callers check the limit first.
    pub fn line(lc: &LineConstants, length_m: f64) -> Abcd {
        if length_m == 0.0 {
            return Abcd::IDENTITY;
        }
        let gl = lc.gamma * length_m;
        let (ch, sh) = (gl.cosh(), gl.sinh());
        Abcd {
            a: ch,
            b: lc.z0 * sh,
            c: sh / lc.z0,
            d: ch,
        }
    }

    /// Shunt element given by its admittance; zero admittance is an open.
    pub fn shunt_admittance(y: Complex64) -> Abcd {
        Abcd { c: y, ..Abcd::IDENTITY }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Voltage transfer `V_load / V_source` with source and load impedances.
    pub fn voltage_transfer(&self, z_source: Complex64, z_load: Complex64) -> Complex64 {
        z_load / (self.a * z_load + self.b + z_source * (self.c * z_load + self.d))
    }
}

impl Mul for Abcd {
    type Output = Abcd;

    fn mul(self, rhs: Abcd) -> Abcd {
        Abcd {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

/// A two-port sampled on every point of a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPortAbcd(pub Vec<Abcd>);

impl TwoPortAbcd {
    pub fn identity(n_points: usize) -> Self {
        Self(vec![Abcd::IDENTITY; n_points])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_det_error(&self) -> f64 {
        self.0.iter().map(|m| (m.det() - ONE).norm()).fold(0.0, f64::max)
    }
}

/// Line section over a band: `A = D = cosh(gl)`, `B = Z0 sinh(gl)`, `C = sinh(gl) / Z0`.
pub fn abcd_line(constants: &[LineConstants], length_m: f64) -> Result<TwoPortAbcd> {
    if !(length_m.is_finite() && length_m >= 0.0) {
        return Err(SimError::domain(format!("line length must be nonnegative, got {length_m}")));
    }
    Ok(TwoPortAbcd(constants.iter().map(|lc| Abcd::line(lc, length_m)).collect()))
}

/// Shunt impedance `z` across the line, repeated over `n_points`.
/// An infinite `z` is an open circuit.
pub fn abcd_shunt(z: Complex64, n_points: usize) -> Result<TwoPortAbcd> {
    if z == ZERO {
        return Err(SimError::SingularLoad);
    }
    let y = if z.is_infinite() { ZERO } else { z.inv() };
    Ok(TwoPortAbcd(vec![Abcd::shunt_admittance(y); n_points]))
}

/// Chain product in source-to-load order. An empty list is the identity.
pub fn cascade(n_points: usize, ports: &[TwoPortAbcd]) -> Result<TwoPortAbcd> {
    let mut acc = TwoPortAbcd::identity(n_points);
    for (i, port) in ports.iter().enumerate() {
        if port.len() != n_points {
            return Err(SimError::Shape(format!(
                "two-port {i} has {} points, expected {n_points}",
                port.len()
            )));
        }
        for (m, p) in acc.0.iter_mut().zip(&port.0) {
            *m = *m * *p;
        }
    }
    Ok(acc)
}

/// Impedance seen into a line of `length_m` terminated by `z_term`.
///
/// An infinite `z_term` (open end) uses `Z0 coth(gl)`.
pub fn input_impedance(lc: &LineConstants, length_m: f64, z_term: Complex64) -> Complex64 {
    if length_m == 0.0 {
        return z_term;
    }
    let gl = lc.gamma * length_m;
    if z_term.is_infinite() {
        return lc.z0 * coth(gl);
    }
    if gl.re.abs() > SATURATION {
        let t = if gl.re > 0.0 { ONE } else { -ONE };
        return lc.z0 * (z_term + lc.z0 * t) / (lc.z0 + z_term * t);
    }
    // cosh/sinh form; stays finite where tanh(gl) has a pole
    let (ch, sh) = (gl.cosh(), gl.sinh());
    lc.z0 * (z_term * ch + lc.z0 * sh) / (lc.z0 * ch + z_term * sh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::cable::{rlgc_at, secondary_params, CableType, Rlgc};
    use std::f64::consts::PI;

    fn lossless(f: f64) -> LineConstants {
        let p = Rlgc {
            r: 0.0,
            l: 250e-9,
            g: 0.0,
            c: 100e-12,
        };
        secondary_params(&p, f)
    }

    fn lossy(f: f64) -> LineConstants {
        let cable = CableType::default_drop();
        secondary_params(&rlgc_at(&cable, f).unwrap(), f)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn zero_length_is_identity() {
        let m = abcd_line(&[lossy(10e6), lossy(40e6)], 0.0).unwrap();
        assert!(m.0.iter().all(|x| *x == Abcd::IDENTITY));
    }

    #[test]
    fn lossless_quarter_wave() {
        let f = 10e6;
        let lc = lossless(f);
        let quarter = PI / 2.0 / lc.gamma.im;
        let m = Abcd::line(&lc, quarter);
        assert!(m.a.norm() < 1e-12 && m.d.norm() < 1e-12);
        assert!(close(m.b, Complex64::new(0.0, 50.0), 1e-12));
        assert!(close(m.c, Complex64::new(0.0, 1.0 / 50.0), 1e-12));
    }

    #[test]
    fn halves_cascade_to_whole() {
        let lcs: Vec<_> = [3e6, 30e6, 80e6].iter().map(|&f| lossy(f)).collect();
        let half = abcd_line(&lcs, 37.5).unwrap();
        let whole = abcd_line(&lcs, 75.0).unwrap();
        let joined = cascade(3, &[half.clone(), half]).unwrap();
        for (j, w) in joined.0.iter().zip(&whole.0) {
            for (x, y) in [(j.a, w.a), (j.b, w.b), (j.c, w.c), (j.d, w.d)] {
                assert!(close(x, y, 1e-12), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn shunt_entries() {
        let open = abcd_shunt(Complex64::new(f64::INFINITY, 0.0), 2).unwrap();
        assert_eq!(open, TwoPortAbcd::identity(2));
        let m = abcd_shunt(Complex64::new(50.0, 0.0), 1).unwrap().0[0];
        assert_eq!(m.c, Complex64::new(0.02, 0.0));
        assert_eq!(m.det(), ONE);
        assert!(matches!(abcd_shunt(ZERO, 1), Err(SimError::SingularLoad)));
    }

    #[test]
    fn cascade_identities_and_shape_check() {
        assert_eq!(cascade(3, &[]).unwrap(), TwoPortAbcd::identity(3));
        let x = abcd_line(&[lossy(5e6), lossy(6e6)], 12.0).unwrap();
        assert_eq!(cascade(2, std::slice::from_ref(&x)).unwrap(), x);
        assert!(matches!(cascade(3, &[x]), Err(SimError::Shape(_))));
    }

    #[test]
    fn cascade_is_associative() {
        let lcs = [lossy(7e6), lossy(70e6)];
        let a = abcd_line(&lcs, 20.0).unwrap();
        let b = abcd_shunt(Complex64::new(35.0, -4.0), 2).unwrap();
        let c = abcd_line(&lcs, 130.0).unwrap();
        let left = cascade(2, &[cascade(2, &[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
        let right = cascade(2, &[a, cascade(2, &[b, c]).unwrap()]).unwrap();
        for (l, r) in left.0.iter().zip(&right.0) {
            assert!(close(l.a, r.a, 1e-12) && close(l.b, r.b, 1e-12));
            assert!(close(l.c, r.c, 1e-12) && close(l.d, r.d, 1e-12));
        }
        assert!(left.max_det_error() < 1e-10);
    }

    #[test]
    fn input_impedance_cases() {
        let lc = lossy(20e6);
        assert!(close(input_impedance(&lc, 83.0, lc.z0), lc.z0, 1e-12));
        let zt = Complex64::new(12.0, 3.0);
        assert_eq!(input_impedance(&lc, 0.0, zt), zt);

        let lc = lossless(10e6);
        let quarter = PI / 2.0 / lc.gamma.im;
        let open = Complex64::new(f64::INFINITY, 0.0);
        assert!(input_impedance(&lc, quarter, open).norm() < 1e-9);
    }

    #[test]
    fn input_impedance_matches_abcd_termination() {
        let lc = lossy(55e6);
        let zt = Complex64::new(50.0, 0.0);
        let m = Abcd::line(&lc, 42.0);
        let via_abcd = (m.a * zt + m.b) / (m.c * zt + m.d);
        assert!(close(input_impedance(&lc, 42.0, zt), via_abcd, 1e-12));
    }
}

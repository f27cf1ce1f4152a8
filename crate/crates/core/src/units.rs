//! Unit conversions at the API boundary.
//!
//! Everything inside the library is SI: meters, radians, 1/m^3, angular
//! frequency in rad/s. Front ends accept nm, degrees, cm^-3 and MHz and
//! convert here.

use std::f64::consts::PI;

pub fn nm_to_m(x: f64) -> f64 {
    x * 1e-9
}

pub fn m_to_nm(x: f64) -> f64 {
    x * 1e9
}

pub fn um_to_m(x: f64) -> f64 {
    x * 1e-6
}

pub fn m_to_um(x: f64) -> f64 {
    x * 1e6
}

pub fn deg_to_rad(x: f64) -> f64 {
    x * PI / 180.0
}

pub fn rad_to_deg(x: f64) -> f64 {
    x * 180.0 / PI
}

pub fn per_cm3_to_per_m3(x: f64) -> f64 {
    x * 1e6
}

pub fn per_m3_to_per_cm3(x: f64) -> f64 {
    x * 1e-6
}

/// Frequency in MHz to angular frequency in rad/s.
pub fn mhz_to_angular(x: f64) -> f64 {
    x * 2.0 * PI * 1e6
}

pub fn angular_to_mhz(x: f64) -> f64 {
    x / (2.0 * PI * 1e6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for &x in &[1.0, 780.0, 1.3e13, 42.7, 6.0] {
            assert!((m_to_nm(nm_to_m(x)) / x - 1.0).abs() < 1e-12);
            assert!((rad_to_deg(deg_to_rad(x)) / x - 1.0).abs() < 1e-12);
            assert!((per_m3_to_per_cm3(per_cm3_to_per_m3(x)) / x - 1.0).abs() < 1e-12);
            assert!((angular_to_mhz(mhz_to_angular(x)) / x - 1.0).abs() < 1e-12);
            assert!((m_to_um(um_to_m(x)) / x - 1.0).abs() < 1e-12);
        }
    }
}

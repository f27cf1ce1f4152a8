//! Lorentz-model optical response of the cold-atom layer, plus density
//! profiles along the surface normal.
//!
//! The detuning is stored as the dimensionless ratio `delta / Gamma`; every
//! formula below depends on the detuning only through `2 delta / Gamma`.

use std::path::Path;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::units;

/// Optical transition: vacuum wavelength and natural linewidth (angular
/// frequency). The stock entry is the rubidium D2 line, 780 nm / 2 pi 6 MHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicTransition<R: Real> {
    vacuum_wavelength: R,
    natural_linewidth: R,
}

impl<R: Real> AtomicTransition<R> {
    pub fn new(vacuum_wavelength: R, natural_linewidth: R) -> Result<Self> {
        if !(vacuum_wavelength > R::zero()) || !(natural_linewidth > R::zero()) {
            return Err(Error::InvalidInput(
                "transition wavelength and linewidth must be positive".into(),
            ));
        }
        Ok(Self {
            vacuum_wavelength,
            natural_linewidth,
        })
    }

    pub fn rubidium_d2() -> Self {
        Self {
            vacuum_wavelength: R::lit(780e-9),
            natural_linewidth: R::lit(units::mhz_to_angular(6.0)),
        }
    }

    pub fn vacuum_wavelength(&self) -> R {
        self.vacuum_wavelength
    }

    pub fn natural_linewidth(&self) -> R {
        self.natural_linewidth
    }

    /// `3 lambda^3 / (8 pi^2)`, the Lorentz-model volume scale (m^3).
    pub fn lorentz_prefactor(&self) -> R {
        let l = self.vacuum_wavelength;
        R::lit(3.0) * l * l * l / (R::lit(8.0) * R::PI() * R::PI())
    }
}

/// Atom layer: transition, detuning (as `delta / Gamma`), number density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicMedium<R: Real> {
    transition: AtomicTransition<R>,
    detuning_ratio: R,
    density: R,
}

impl<R: Real> AtomicMedium<R> {
    pub fn new(transition: AtomicTransition<R>, detuning_ratio: R, density: R) -> Result<Self> {
        if !(density >= R::zero()) {
            return Err(Error::InvalidInput("density must be non-negative".into()));
        }
        Ok(Self {
            transition,
            detuning_ratio,
            density,
        })
    }

    pub fn transition(&self) -> &AtomicTransition<R> {
        &self.transition
    }

    /// Detuning as `delta / Gamma`.
    pub fn detuning_ratio(&self) -> R {
        self.detuning_ratio
    }

    pub fn density(&self) -> R {
        self.density
    }

    pub fn with_density(&self, density: R) -> Result<Self> {
        Self::new(self.transition, self.detuning_ratio, density)
    }

    pub fn with_detuning_ratio(&self, detuning_ratio: R) -> Self {
        Self {
            detuning_ratio,
            ..*self
        }
    }

    /// `x = 2 delta / Gamma`, the detuning in half-linewidths.
    pub fn two_delta_over_gamma(&self) -> R {
        R::lit(2.0) * self.detuning_ratio
    }

    /// Dispersive polarizability factor `beta` (m^3): odd in the detuning,
    /// extremal at `2 delta / Gamma = +-1`.
    pub fn polarizability_factor(&self) -> R {
        let x = self.two_delta_over_gamma();
        self.transition.lorentz_prefactor() * x / (R::one() + x * x)
    }

    /// Absorptive part of the refractive index, `Im(n4)`.
    pub fn absorption_index(&self) -> R {
        let x = self.two_delta_over_gamma();
        self.transition.lorentz_prefactor() * self.density / (R::one() + x * x)
    }

    /// Complex refractive index of the gas,
    /// `n4 = 1 + beta rho + i Im(n4)`.
    pub fn refractive_index(&self) -> Complex<R> {
        Complex::new(
            R::one() + self.polarizability_factor() * self.density,
            self.absorption_index(),
        )
    }
}

/// Atom density as a function of distance from the surface.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityProfile<R: Real> {
    /// Constant density from `barrier`, over `thickness` (`None` = to
    /// infinity).
    UniformSlab {
        barrier: R,
        thickness: Option<R>,
        density: R,
    },
    /// `peak * exp(-(z - barrier)/decay_length)` beyond the barrier.
    Exponential {
        barrier: R,
        decay_length: R,
        peak: R,
    },
    /// `peak * exp(-(z - center)^2 / (2 sigma^2))`.
    Gaussian { center: R, sigma: R, peak: R },
    /// Piecewise-linear table of `(z, density)`, zero outside; grid must be
    /// strictly increasing.
    Tabulated { points: Vec<(R, R)> },
}

impl<R: Real> DensityProfile<R> {
    pub fn validate(&self) -> Result<()> {
        let nonneg = |v: R, what: &str| {
            if v >= R::zero() {
                Ok(())
            } else {
                Err(Error::InvalidProfile(format!("{what} must be non-negative")))
            }
        };
        match self {
            Self::UniformSlab {
                barrier,
                thickness,
                density,
            } => {
                nonneg(*barrier, "barrier")?;
                nonneg(*density, "density")?;
                if let Some(t) = thickness {
                    nonneg(*t, "thickness")?;
                }
            }
            Self::Exponential {
                barrier,
                decay_length,
                peak,
            } => {
                nonneg(*barrier, "barrier")?;
                nonneg(*peak, "peak")?;
                if !(*decay_length > R::zero()) {
                    return Err(Error::InvalidProfile("decay length must be positive".into()));
                }
            }
            Self::Gaussian { sigma, peak, .. } => {
                nonneg(*peak, "peak")?;
                if !(*sigma > R::zero()) {
                    return Err(Error::InvalidProfile("sigma must be positive".into()));
                }
            }
            Self::Tabulated { points } => {
                if points.len() < 2 {
                    return Err(Error::InvalidProfile("table needs at least 2 rows".into()));
                }
                for w in points.windows(2) {
                    if !(w[1].0 > w[0].0) {
                        return Err(Error::InvalidProfile(
                            "table grid must be strictly increasing in z".into(),
                        ));
                    }
                }
                for &(_, rho) in points {
                    nonneg(rho, "tabulated density")?;
                }
            }
        }
        Ok(())
    }

    /// Density at distance `z` from the surface (1/m^3).
    pub fn density_at(&self, z: R) -> R {
        match self {
            Self::UniformSlab {
                barrier,
                thickness,
                density,
            } => {
                let inside = z >= *barrier
                    && match thickness {
                        Some(t) => z < *barrier + *t,
                        None => true,
                    };
                if inside {
                    *density
                } else {
                    R::zero()
                }
            }
            Self::Exponential {
                barrier,
                decay_length,
                peak,
            } => {
                if z >= *barrier {
                    *peak * (-(z - *barrier) / *decay_length).exp()
                } else {
                    R::zero()
                }
            }
            Self::Gaussian { center, sigma, peak } => {
                let u = (z - *center) / *sigma;
                *peak * (-u * u / R::lit(2.0)).exp()
            }
            Self::Tabulated { points } => {
                let first = points.first().unwrap();
                let last = points.last().unwrap();
                if z < first.0 || z > last.0 {
                    return R::zero();
                }
                for w in points.windows(2) {
                    let (z0, r0) = w[0];
                    let (z1, r1) = w[1];
                    if z <= z1 {
                        let f = (z - z0) / (z1 - z0);
                        return r0 + f * (r1 - r0);
                    }
                }
                last.1
            }
        }
    }

    pub fn peak_density(&self) -> R {
        match self {
            Self::UniformSlab { density, .. } => *density,
            Self::Exponential { peak, .. } | Self::Gaussian { peak, .. } => *peak,
            Self::Tabulated { points } => points
                .iter()
                .map(|&(_, r)| r)
                .fold(R::zero(), R::max),
        }
    }

    /// Support of the profile: start and, where bounded, end (meters).
    pub fn support(&self) -> (R, Option<R>) {
        match self {
            Self::UniformSlab {
                barrier, thickness, ..
            } => (*barrier, thickness.map(|t| *barrier + t)),
            Self::Exponential {
                barrier,
                decay_length,
                ..
            } => (*barrier, Some(*barrier + R::lit(60.0) * *decay_length)),
            Self::Gaussian { center, sigma, .. } => {
                let reach = R::lit(12.0) * *sigma;
                ((*center - reach).max(R::zero()), Some(*center + reach))
            }
            Self::Tabulated { points } => {
                (points.first().unwrap().0, Some(points.last().unwrap().0))
            }
        }
    }

    /// Parses a two-column density table: z in nm, density in cm^-3,
    /// whitespace- or comma-separated, `#` starts a comment.
    pub fn from_table_str(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty());
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or_else(|| {
                    Error::InvalidProfile(format!("line {}: expected two columns", lineno + 1))
                })?
                .parse::<f64>()
                .map_err(|e| Error::InvalidProfile(format!("line {}: {e}", lineno + 1)))
            };
            let z_nm = parse(cols.next())?;
            let rho_cm3 = parse(cols.next())?;
            if cols.next().is_some() {
                return Err(Error::InvalidProfile(format!(
                    "line {}: expected exactly two columns",
                    lineno + 1
                )));
            }
            points.push((
                R::lit(units::nm_to_m(z_nm)),
                R::lit(units::per_cm3_to_per_m3(rho_cm3)),
            ));
        }
        let profile = Self::Tabulated { points };
        profile.validate()?;
        Ok(profile)
    }

    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_table_str(&text)
    }
}

//! Stratified-medium description: layers, stacks, and the incident wave.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Layer thickness: finite in meters, or a terminating half-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thickness<R> {
    Finite(R),
    SemiInfinite,
}

/// One homogeneous layer with a complex refractive index.
///
/// Only passive media are admitted: `Im(n) >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer<R: Real> {
    index: Complex<R>,
    thickness: Thickness<R>,
}

impl<R: Real> Layer<R> {
    pub fn finite(index: Complex<R>, thickness: R) -> Result<Self> {
        if !(thickness >= R::zero()) || !thickness.is_finite() {
            return Err(Error::InvalidLayer(
                "thickness must be finite and non-negative".into(),
            ));
        }
        Self::check_index(index)?;
        Ok(Self {
            index,
            thickness: Thickness::Finite(thickness),
        })
    }

    pub fn semi_infinite(index: Complex<R>) -> Result<Self> {
        Self::check_index(index)?;
        Ok(Self {
            index,
            thickness: Thickness::SemiInfinite,
        })
    }

    fn check_index(index: Complex<R>) -> Result<()> {
        if !(index.im >= R::zero()) {
            return Err(Error::InvalidLayer(
                "gain media rejected: Im(n) must be >= 0".into(),
            ));
        }
        if !index.re.is_finite() || !index.im.is_finite() {
            return Err(Error::InvalidLayer("refractive index must be finite".into()));
        }
        Ok(())
    }

    pub fn index(&self) -> Complex<R> {
        self.index
    }

    pub fn thickness(&self) -> Thickness<R> {
        self.thickness
    }

    pub fn is_semi_infinite(&self) -> bool {
        matches!(self.thickness, Thickness::SemiInfinite)
    }
}

/// Ordered layer sequence; the first layer is the incidence half-space.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack<R: Real> {
    layers: Vec<Layer<R>>,
    vacuum_wavelength: R,
}

impl<R: Real> LayerStack<R> {
    pub fn new(layers: Vec<Layer<R>>, vacuum_wavelength: R) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::InvalidStack("need at least 2 layers".into()));
        }
        if !(vacuum_wavelength > R::zero()) || !vacuum_wavelength.is_finite() {
            return Err(Error::InvalidStack("wavelength must be positive".into()));
        }
        if layers[0].index().im != R::zero() {
            return Err(Error::InvalidStack(
                "incidence half-space must be lossless".into(),
            ));
        }
        let interior_semi_infinite = layers[1..layers.len() - 1]
            .iter()
            .any(Layer::is_semi_infinite);
        if interior_semi_infinite {
            return Err(Error::InvalidStack(
                "only the first and last layer may be semi-infinite".into(),
            ));
        }
        Ok(Self {
            layers,
            vacuum_wavelength,
        })
    }

    /// Prism-coupled metal film: incidence half-space, metal layer, terminal
    /// half-space (usually glass / gold / vacuum).
    pub fn kretschmann(
        incidence_index: R,
        film_index: Complex<R>,
        film_thickness: R,
        terminal_index: Complex<R>,
        vacuum_wavelength: R,
    ) -> Result<Self> {
        Self::new(
            vec![
                Layer::semi_infinite(Complex::new(incidence_index, R::zero()))?,
                Layer::finite(film_index, film_thickness)?,
                Layer::semi_infinite(terminal_index)?,
            ],
            vacuum_wavelength,
        )
    }

    /// Converts the terminal half-space into a finite gap of thickness `gap`
    /// (same index) and appends `tail` beyond it. The tail must end in a
    /// half-space.
    pub fn with_tail(&self, gap: R, tail: &[Layer<R>]) -> Result<Self> {
        let last = *self.layers.last().expect("validated non-empty");
        if !last.is_semi_infinite() {
            return Err(Error::InvalidStack(
                "terminal layer must be semi-infinite to grow a tail".into(),
            ));
        }
        let mut layers = self.layers.clone();
        *layers.last_mut().unwrap() = Layer::finite(last.index(), gap)?;
        layers.extend_from_slice(tail);
        Self::new(layers, self.vacuum_wavelength)
    }

    pub fn layers(&self) -> &[Layer<R>] {
        &self.layers
    }

    pub fn vacuum_wavelength(&self) -> R {
        self.vacuum_wavelength
    }

    /// Free-space wavenumber `k0 = 2 pi / lambda` (1/m).
    pub fn wavenumber(&self) -> R {
        R::TAU() / self.vacuum_wavelength
    }

    /// Real refractive index of the incidence half-space.
    pub fn incidence_index(&self) -> R {
        self.layers[0].index().re
    }

    /// Critical angle for total internal reflection against the terminal
    /// half-space, when one exists.
    pub fn critical_angle(&self) -> Option<R> {
        let n1 = self.incidence_index();
        let nt = self.layers.last().unwrap().index();
        if nt.im == R::zero() && nt.re < n1 {
            Some((nt.re / n1).asin())
        } else {
            None
        }
    }
}

/// Incident plane wave. The polarization is transverse magnetic throughout;
/// there is no s-polarized path in this solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveContext<R: Real> {
    incidence_angle: R,
}

impl<R: Real> PlaneWaveContext<R> {
    pub fn new(incidence_angle: R) -> Result<Self> {
        if !(incidence_angle >= R::zero() && incidence_angle < R::FRAC_PI_2()) {
            return Err(Error::InvalidPlaneWave(
                "incidence angle must lie in [0, pi/2)".into(),
            ));
        }
        Ok(Self { incidence_angle })
    }

    pub fn incidence_angle(&self) -> R {
        self.incidence_angle
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::complex_lit;

    #[test]
    fn rejects_gain_media() {
        assert!(Layer::<f64>::finite(complex_lit(1.5, -0.1), 1e-7).is_err());
        assert!(Layer::<f64>::finite(complex_lit(1.5, 0.0), -1e-9).is_err());
    }

    #[test]
    fn rejects_lossy_incidence_and_interior_half_spaces() {
        let lossy = Layer::semi_infinite(complex_lit(1.5, 0.1)).unwrap();
        let glass = Layer::semi_infinite(complex_lit(1.5, 0.0)).unwrap();
        let gold = Layer::finite(complex_lit(0.2, 4.9), 40e-9).unwrap();
        assert!(LayerStack::new(vec![lossy, gold, glass], 780e-9).is_err());
        assert!(LayerStack::new(vec![glass, lossy, glass], 780e-9).is_err());
        assert!(LayerStack::new(vec![glass], 780e-9).is_err());
    }

    #[test]
    fn tail_replaces_terminal_half_space() {
        let stack =
            LayerStack::kretschmann(1.51, complex_lit(0.2, 4.9), 40e-9, complex_lit(1.0, 0.0), 780e-9)
                .unwrap();
        let atoms = Layer::semi_infinite(complex_lit(0.997, 5e-5)).unwrap();
        let grown = stack.with_tail(100e-9, &[atoms]).unwrap();
        assert_eq!(grown.layers().len(), 4);
        assert_eq!(grown.layers()[2].thickness(), Thickness::Finite(100e-9));
        assert!(grown.layers()[3].is_semi_infinite());
    }

    #[test]
    fn angle_domain_enforced() {
        assert!(PlaneWaveContext::new(-0.1f64).is_err());
        assert!(PlaneWaveContext::new(std::f64::consts::FRAC_PI_2).is_err());
        assert!(PlaneWaveContext::new(0.74f64).is_ok());
    }
}

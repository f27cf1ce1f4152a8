//! Detection metrics for the atom layer behind the evanescent field:
//! reflectivity changes (exact, linearized, density-weighted), shot-noise
//! limited signal-to-noise, the absorbed-photon budget, and the maximum
//! atom number for a nondestructive measurement.

use num_complex::Complex;

use crate::atoms::{AtomicMedium, DensityProfile};
use crate::error::{Error, Result};
use crate::numerics::minimize::minimize_grid_golden;
use crate::numerics::quadrature;
use crate::real::Real;
use crate::stack::{Layer, LayerStack, PlaneWaveContext};
use crate::tmm::{
    self, field_enhancement, front_matrix, inverse_decay_length, reflectivity, TransferMatrix,
};

/// Probe beam and photon bookkeeping for one detection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig<R: Real> {
    pub incidence_angle: R,
    pub detection_efficiency: R,
    pub incident_photons: R,
    pub max_absorbed_photons: R,
}

impl<R: Real> ProbeConfig<R> {
    pub fn new(
        incidence_angle: R,
        detection_efficiency: R,
        incident_photons: R,
        max_absorbed_photons: R,
    ) -> Result<Self> {
        if !(detection_efficiency >= R::zero() && detection_efficiency <= R::one()) {
            return Err(Error::InvalidInput(
                "detection efficiency must lie in [0, 1]".into(),
            ));
        }
        if !(incident_photons >= R::zero()) || !(max_absorbed_photons >= R::zero()) {
            return Err(Error::InvalidInput("photon counts must be >= 0".into()));
        }
        Ok(Self {
            incidence_angle,
            detection_efficiency,
            incident_photons,
            max_absorbed_photons,
        })
    }
}

/// Placement of the atom layer behind the terminal interface: barrier
/// distance and thickness (`None` = half-space).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomLayerGeometry<R> {
    pub barrier: R,
    pub thickness: Option<R>,
}

impl<R: Real> AtomLayerGeometry<R> {
    pub fn half_space(barrier: R) -> Self {
        Self {
            barrier,
            thickness: None,
        }
    }
}

/// Bare stack with the atom layer inserted `barrier` beyond the terminal
/// interface.
pub fn stack_with_atoms<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    geometry: &AtomLayerGeometry<R>,
) -> Result<LayerStack<R>> {
    let n4 = medium.refractive_index();
    let terminal = bare.layers().last().unwrap().index();
    let tail = match geometry.thickness {
        None => vec![Layer::semi_infinite(n4)?],
        Some(d4) => vec![Layer::finite(n4, d4)?, Layer::semi_infinite(terminal)?],
    };
    bare.with_tail(geometry.barrier, &tail)
}

/// Decay constant of the evanescent field in the terminal half-space of the
/// bare stack (the gap the atoms sit in).
pub fn gap_decay_constant<R: Real>(
    bare: &LayerStack<R>,
    ctx: &PlaneWaveContext<R>,
) -> Result<R> {
    inverse_decay_length(bare.layers().last().unwrap(), ctx, bare)
}

/// Reflectivity change caused by the atom layer: two full transfer-matrix
/// evaluations, valid at any density including the nonlinear regime.
pub fn delta_r_exact<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    geometry: &AtomLayerGeometry<R>,
    ctx: &PlaneWaveContext<R>,
) -> Result<R> {
    if medium.density() == R::zero() {
        return Ok(R::zero());
    }
    let with_atoms = stack_with_atoms(bare, medium, geometry)?;
    Ok(reflectivity(&with_atoms, ctx)? - reflectivity(bare, ctx)?)
}

/// Interference weight of the front stack,
/// `Theta = Re(A11 A12*) - |A12|^2/|A22|^2 Re(A21 A22*)`.
///
/// Independent of how deep into the gap the front matrix was taken.
pub fn coupling_weight<R: Real>(front: &TransferMatrix<R>) -> R {
    let a = front;
    (a.m11 * a.m12.conj()).re - a.m12.norm_sqr() / a.m22.norm_sqr() * (a.m21 * a.m22.conj()).re
}

fn dispersion_enhancement<R: Real>(k0: R, kappa: R) -> R {
    R::one() + k0 * k0 / (R::lit(2.0) * kappa * kappa)
}

/// First-order reflectivity change of a uniform half-space of atoms beyond
/// `barrier`:
/// `dR = 2 beta rho (1 + k0^2/(2 kappa^2)) Theta / |A22|^2`,
/// the product of the dispersive polarizability, the evanescent intensity
/// at the barrier, and the interference weight. Assumes a detuning of at
/// least a few linewidths; the absorptive part of the index is not part of
/// this expansion.
pub fn delta_r_linear<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    barrier: R,
    ctx: &PlaneWaveContext<R>,
) -> Result<R> {
    let kappa = gap_decay_constant(bare, ctx)?;
    let a = front_matrix(bare, ctx, barrier);
    let theta = coupling_weight(&a);
    let beta = medium.polarizability_factor();
    let k0 = bare.wavenumber();
    Ok(R::lit(2.0) * beta * medium.density() * dispersion_enhancement(k0, kappa) * theta
        / a.m22.norm_sqr())
}

/// Reflectivity change for an inhomogeneous density profile: the linear
/// kernel weighted by the evanescent decay,
/// `dR = (3 Theta / 2 pi^2) |t|^2 (1 + k0^2/(2 kappa^2)) x/(1+x^2)
///       lambda^3 kappa Int rho(z) exp(-2 kappa z) dz`.
///
/// The integral runs over the profile support with adaptive quadrature at
/// relative tolerance `rel_tol` (1e-10 via [`delta_r_profile`]).
pub fn delta_r_profile_with_tol<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    profile: &DensityProfile<R>,
    ctx: &PlaneWaveContext<R>,
    rel_tol: R,
) -> Result<R> {
    profile.validate()?;
    let kappa = gap_decay_constant(bare, ctx)?;
    let a = front_matrix(bare, ctx, R::zero());
    let theta = coupling_weight(&a);
    let enhancement = a.m22.norm_sqr().recip();
    let k0 = bare.wavenumber();
    let lambda = bare.vacuum_wavelength();
    let x = medium.two_delta_over_gamma();

    let (start, end) = profile.support();
    // The weight kills contributions beyond ~45 decay lengths.
    let cutoff = start + R::lit(22.5) / kappa;
    let end = end.map_or(cutoff, |e| e.min(cutoff));
    let integral = if end > start {
        quadrature::integrate(
            |z| profile.density_at(z) * (-R::lit(2.0) * kappa * z).exp(),
            start,
            end,
            rel_tol,
        )?
        .value
    } else {
        R::zero()
    };

    let prefactor = R::lit(3.0) * theta / (R::lit(2.0) * R::PI() * R::PI())
        * enhancement
        * dispersion_enhancement(k0, kappa)
        * x
        / (R::one() + x * x)
        * lambda
        * lambda
        * lambda
        * kappa;
    Ok(prefactor * integral)
}

/// [`delta_r_profile_with_tol`] at the stock tolerance.
pub fn delta_r_profile<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    profile: &DensityProfile<R>,
    ctx: &PlaneWaveContext<R>,
) -> Result<R> {
    delta_r_profile_with_tol(bare, medium, profile, ctx, R::lit(1e-10))
}

/// Signal, shot noise, and their ratio for one detection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalNoise<R> {
    /// Detected photon-number change, `eta dR N_in` (signed).
    pub signal: R,
    /// Standard-quantum-limit fluctuation `sqrt(eta R N_in)`.
    pub shot_noise: R,
    /// `sqrt(eta N_in / R) |dR|`; infinity flags a dark output (`R = 0`).
    pub snr: R,
}

/// Shot-noise-limited detection bookkeeping. A vanishing reflectivity makes
/// the ratio meaningless; it is flagged with an infinite sentinel.
pub fn signal_and_noise<R: Real>(
    reflectivity: R,
    delta_r: R,
    probe: &ProbeConfig<R>,
) -> SignalNoise<R> {
    let eta = probe.detection_efficiency;
    let n_in = probe.incident_photons;
    let signal = eta * delta_r * n_in;
    let shot_noise = (eta * reflectivity * n_in).sqrt();
    let snr = if reflectivity > R::zero() {
        (eta * n_in / reflectivity).sqrt() * delta_r.abs()
    } else {
        R::infinity()
    };
    SignalNoise {
        signal,
        shot_noise,
        snr,
    }
}

/// Fraction of incident photons absorbed in the atom layer, in two forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsorbedFraction<R> {
    /// Energy-flow form: `|t|^2 (2 kappa_r n4i - kappa_i)/k0 exp(-2 kappa_r z_B)`
    /// with the complex decay constant of the atom layer itself.
    pub full: R,
    /// Lorentzian closed form
    /// `|t|^2 (k0/kappa_3) (3 lambda^3/8 pi^2) rho exp(-2 kappa_3 z_B) / (1 + x^2)`,
    /// using the gap decay constant throughout.
    pub simplified: R,
    /// Set when a form exceeded [0, 1] and was clipped.
    pub clipped: bool,
}

fn absorbed_fraction_raw<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    barrier: R,
    ctx: &PlaneWaveContext<R>,
) -> Result<(R, R)> {
    let kappa3 = gap_decay_constant(bare, ctx)?;
    let enhancement = field_enhancement(bare, ctx, R::zero())?;
    let k0 = bare.wavenumber();
    let n4 = medium.refractive_index();

    // Complex decay constant of the atom layer: kappa_4 = -i k_4z, so
    // kappa_r = Im(k_4z) > 0 and kappa_i = -Re(k_4z) < 0 for an absorbing
    // gas. Both terms of the flux divergence then absorb.
    let atom_layer = Layer::semi_infinite(n4)?;
    let k4z = tmm::vertical_wavenumber(&atom_layer, ctx, bare);
    let kappa_r = k4z.im;
    let kappa_i = -k4z.re;
    if !(kappa_r > R::zero()) {
        return Err(Error::BelowCriticalAngle);
    }
    let two = R::lit(2.0);
    let full = enhancement * (two * kappa_r * n4.im - kappa_i) / k0
        * (-two * kappa_r * barrier).exp();

    let x = medium.two_delta_over_gamma();
    let simplified = enhancement * k0 / kappa3
        * medium.transition().lorentz_prefactor()
        * medium.density()
        * (-two * kappa3 * barrier).exp()
        / (R::one() + x * x);
    Ok((full, simplified))
}

/// Absorbed-photon fraction `f_N`, both the energy-flow form and the
/// Lorentzian closed form, clipped to [0, 1] with a flag.
pub fn absorbed_fraction<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    barrier: R,
    ctx: &PlaneWaveContext<R>,
) -> Result<AbsorbedFraction<R>> {
    let (full, simplified) = absorbed_fraction_raw(bare, medium, barrier, ctx)?;
    let clip = |v: R| v.max(R::zero()).min(R::one());
    let clipped = full < R::zero()
        || full > R::one()
        || simplified < R::zero()
        || simplified > R::one();
    Ok(AbsorbedFraction {
        full: clip(full),
        simplified: clip(simplified),
        clipped,
    })
}

/// Photon budget under an absorbed-photon cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonBudget<R> {
    /// `N_abs^max / f_N`; infinite when nothing absorbs.
    pub max_incident_photons: R,
    /// Shot-noise-limited ratio at that budget (linearized signal).
    pub snr: R,
}

/// Signal-to-noise ratio reachable with at most `max_absorbed` absorbed
/// photons: inverts the Lorentzian absorbed fraction into an incident-photon
/// budget and applies the shot-noise formula to the linearized signal.
pub fn snr_photon_budget<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    barrier: R,
    ctx: &PlaneWaveContext<R>,
    detection_efficiency: R,
    max_absorbed: R,
) -> Result<PhotonBudget<R>> {
    if !(max_absorbed > R::zero()) {
        return Err(Error::InvalidInput(
            "absorbed-photon budget must be positive".into(),
        ));
    }
    let (_, f_simplified) = absorbed_fraction_raw(bare, medium, barrier, ctx)?;
    let delta_r = delta_r_linear(bare, medium, barrier, ctx)?;
    if f_simplified == R::zero() {
        // Nothing absorbs (empty layer): unbounded budget, vanishing signal.
        return Ok(PhotonBudget {
            max_incident_photons: R::infinity(),
            snr: R::zero(),
        });
    }
    let n_in = max_absorbed / f_simplified;
    let probe = ProbeConfig::new(ctx.incidence_angle(), detection_efficiency, n_in, max_absorbed)?;
    let r0 = reflectivity(bare, ctx)?;
    Ok(PhotonBudget {
        max_incident_photons: n_in,
        snr: signal_and_noise(r0, delta_r, &probe).snr,
    })
}

/// Closed-form sensitivity factor
/// `chi = (3 eta / 2 pi^2) Theta^2 (kappa_3/k0) / R (1 + k0^2/(2 kappa_3^2))^2
///        |t|^2 exp(-2 kappa_3 z_B)`;
/// `chi lambda^3 rho x^2/(1+x^2) N_abs^max` reproduces the squared budget
/// ratio at large detuning.
pub fn sensitivity_factor<R: Real>(
    bare: &LayerStack<R>,
    barrier: R,
    ctx: &PlaneWaveContext<R>,
    detection_efficiency: R,
) -> Result<R> {
    let kappa = gap_decay_constant(bare, ctx)?;
    let a = front_matrix(bare, ctx, barrier);
    let theta = coupling_weight(&a);
    let k0 = bare.wavenumber();
    let r0 = reflectivity(bare, ctx)?;
    let disp = dispersion_enhancement(k0, kappa);
    // |t|^2 exp(-2 kappa z_B) = 1/|A22|^2 with the gap walked to z_B.
    Ok(R::lit(3.0) * detection_efficiency / (R::lit(2.0) * R::PI() * R::PI())
        * theta
        * theta
        * (kappa / k0)
        / r0
        * disp
        * disp
        / a.m22.norm_sqr())
}

/// Maximum atom number measurable without perturbation at this angle:
/// `N = eta / f_N * dR^2 / R`, with the exact nonlinear reflectivity change,
/// the with-atoms reflectivity, and the energy-flow absorbed fraction.
pub fn qnd_max_atoms<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    barrier: R,
    ctx: &PlaneWaveContext<R>,
    detection_efficiency: R,
) -> Result<R> {
    if medium.density() == R::zero() {
        return Ok(R::zero());
    }
    let geometry = AtomLayerGeometry::half_space(barrier);
    let with_atoms = stack_with_atoms(bare, medium, &geometry)?;
    let r_with = reflectivity(&with_atoms, ctx)?;
    let delta_r = r_with - reflectivity(bare, ctx)?;
    let (f_full, _) = absorbed_fraction_raw(bare, medium, barrier, ctx)?;
    Ok(detection_efficiency / f_full * delta_r * delta_r / r_with)
}

/// Angle and value of the sharp maximum of [`qnd_max_atoms`] over
/// `[theta_min, theta_max]`: 2000-point coarse scan, then golden-section
/// refinement.
pub fn qnd_max_atoms_over_angle<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    barrier: R,
    theta_range: (R, R),
    detection_efficiency: R,
) -> Result<(R, R)> {
    let objective = |theta: R| {
        let Ok(ctx) = PlaneWaveContext::new(theta) else {
            return R::infinity();
        };
        match qnd_max_atoms(bare, medium, barrier, &ctx, detection_efficiency) {
            Ok(n) => -n,
            Err(_) => R::infinity(),
        }
    };
    let m = minimize_grid_golden(objective, theta_range.0, theta_range.1, 2000, R::lit(1e-9))?;
    Ok((m.x, -m.value))
}

/// Smallest resolvable atom-number change, `dN = N / S_N`.
pub fn atom_number_resolution<R: Real>(n_atoms: R, snr: R) -> Result<R> {
    if n_atoms == R::zero() {
        return Ok(R::zero());
    }
    if !(snr > R::zero()) {
        return Err(Error::UndefinedResolution);
    }
    Ok(n_atoms / snr)
}

/// All derived quantities for one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionReport<R> {
    pub reflectivity_bare: R,
    pub reflectivity_with_atoms: R,
    pub delta_r: R,
    pub signal: R,
    pub shot_noise: R,
    pub snr: R,
    pub absorbed_fraction: R,
    pub coupling_weight: R,
    pub sensitivity_factor: R,
    pub qnd_max_atoms: R,
}

/// Evaluates the full report at one angle / detuning / density point.
pub fn evaluate_point<R: Real>(
    bare: &LayerStack<R>,
    medium: &AtomicMedium<R>,
    barrier: R,
    probe: &ProbeConfig<R>,
) -> Result<DetectionReport<R>> {
    let ctx = PlaneWaveContext::new(probe.incidence_angle)?;
    let r_bare = reflectivity(bare, &ctx)?;
    let geometry = AtomLayerGeometry::half_space(barrier);
    let (r_with, delta_r, f_full, qnd) = if medium.density() > R::zero() {
        let with_atoms = stack_with_atoms(bare, medium, &geometry)?;
        let r_with = reflectivity(&with_atoms, &ctx)?;
        let delta_r = r_with - r_bare;
        let (f_full, _) = absorbed_fraction_raw(bare, medium, barrier, &ctx)?;
        let qnd = probe.detection_efficiency / f_full * delta_r * delta_r / r_with;
        (r_with, delta_r, f_full, qnd)
    } else {
        (r_bare, R::zero(), R::zero(), R::zero())
    };
    let sn = signal_and_noise(r_with, delta_r, probe);
    let a = front_matrix(bare, &ctx, barrier);
    Ok(DetectionReport {
        reflectivity_bare: r_bare,
        reflectivity_with_atoms: r_with,
        delta_r,
        signal: sn.signal,
        shot_noise: sn.shot_noise,
        snr: sn.snr,
        absorbed_fraction: f_full.max(R::zero()).min(R::one()),
        coupling_weight: coupling_weight(&a),
        sensitivity_factor: sensitivity_factor(bare, barrier, &ctx, probe.detection_efficiency)
            .unwrap_or(R::nan()),
        qnd_max_atoms: qnd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::AtomicTransition;
    use crate::real::complex_lit;

    fn bare() -> LayerStack<f64> {
        LayerStack::kretschmann(1.51, complex_lit(0.208, 4.90), 40e-9, complex_lit(1.0, 0.0), 780e-9)
            .unwrap()
    }

    fn medium(ratio: f64, density: f64) -> AtomicMedium<f64> {
        AtomicMedium::new(AtomicTransition::rubidium_d2(), ratio, density).unwrap()
    }

    fn ctx(deg: f64) -> PlaneWaveContext<f64> {
        PlaneWaveContext::new(deg.to_radians()).unwrap()
    }

    #[test]
    fn no_atoms_no_change() {
        let geometry = AtomLayerGeometry::half_space(100e-9);
        let d = delta_r_exact(&bare(), &medium(-30.0, 0.0), &geometry, &ctx(42.6)).unwrap();
        assert_eq!(d, 0.0);
        assert_eq!(
            delta_r_linear(&bare(), &medium(-30.0, 0.0), 100e-9, &ctx(42.6)).unwrap(),
            0.0
        );
    }

    #[test]
    fn exact_change_shifts_the_resonance() {
        // Dense red-detuned gas at the operating point: the dip moves, and
        // at a fixed angle on the flank the reflectivity drops hard.
        let d = delta_r_exact(
            &bare(),
            &medium(-30.0, 1e19),
            &AtomLayerGeometry::half_space(100e-9),
            &ctx(42.60),
        )
        .unwrap();
        assert!(d < -0.05, "expected a deep negative change, got {d}");
    }

    #[test]
    fn linear_change_is_odd_in_the_detuning() {
        let stack = bare();
        let c = ctx(42.60);
        let plus = delta_r_linear(&stack, &medium(30.0, 1e16), 100e-9, &c).unwrap();
        let minus = delta_r_linear(&stack, &medium(-30.0, 1e16), 100e-9, &c).unwrap();
        assert_eq!(plus, -minus);
    }

    #[test]
    fn linear_change_matches_derivative_of_the_dispersive_response() {
        // Centered finite difference over rho of the exact response with the
        // dispersive (real) part of the index only; evaluated on the far
        // flank of the dip where the expansion is clean.
        let stack = bare();
        let c = ctx(42.80);
        let m = medium(-30.0, 1e16);
        let h = 5e15;
        let mut rs = [0.0; 2];
        for (k, rho) in [1e16 + h, 1e16 - h].iter().enumerate() {
            let n4 = Complex::new(1.0 + m.polarizability_factor() * rho, 0.0);
            let with = stack
                .with_tail(100e-9, &[Layer::semi_infinite(n4).unwrap()])
                .unwrap();
            rs[k] = reflectivity(&with, &c).unwrap();
        }
        let fd = (rs[0] - rs[1]) / (2.0 * h) * 1e16;
        let lin = delta_r_linear(&stack, &m, 100e-9, &c).unwrap();
        assert!(
            (lin / fd - 1.0).abs() < 1e-6,
            "lin {lin} vs fd {fd}"
        );
    }

    #[test]
    fn linear_agrees_with_exact_in_the_dispersive_regime() {
        let stack = bare();
        let c = ctx(42.80);
        let m = medium(-30.0, 1e16);
        let exact =
            delta_r_exact(&stack, &m, &AtomLayerGeometry::half_space(100e-9), &c).unwrap();
        let lin = delta_r_linear(&stack, &m, 100e-9, &c).unwrap();
        assert!((lin / exact - 1.0).abs() < 0.01, "lin {lin} exact {exact}");
    }

    #[test]
    fn linear_change_requires_an_evanescent_gap() {
        let r = delta_r_linear(&bare(), &medium(-30.0, 1e16), 100e-9, &ctx(30.0));
        assert_eq!(r.unwrap_err(), Error::BelowCriticalAngle);
    }

    #[test]
    fn profile_of_a_half_space_reduces_to_the_linear_form() {
        let stack = bare();
        let c = ctx(42.60);
        let m = medium(-30.0, 1e16);
        let profile = DensityProfile::UniformSlab {
            barrier: 100e-9,
            thickness: None,
            density: 1e16,
        };
        let from_profile = delta_r_profile(&stack, &m, &profile, &c).unwrap();
        let lin = delta_r_linear(&stack, &m, 100e-9, &c).unwrap();
        assert!(
            (from_profile / lin - 1.0).abs() < 1e-10,
            "{from_profile} vs {lin}"
        );
    }

    #[test]
    fn empty_profile_gives_zero() {
        let profile = DensityProfile::UniformSlab {
            barrier: 100e-9,
            thickness: None,
            density: 0.0,
        };
        let d = delta_r_profile(&bare(), &medium(-30.0, 1e16), &profile, &ctx(42.6)).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn thin_slices_weigh_in_with_the_evanescent_decay() {
        let stack = bare();
        let c = ctx(42.60);
        let m = medium(-30.0, 1e16);
        let kappa = gap_decay_constant(&stack, &c).unwrap();
        let slice = |z: f64| DensityProfile::UniformSlab {
            barrier: z,
            thickness: Some(1e-9),
            density: 1e16,
        };
        let base = delta_r_profile(&stack, &m, &slice(100e-9), &c).unwrap();
        for z in [300e-9, 600e-9, 1200e-9] {
            let d = delta_r_profile(&stack, &m, &slice(z), &c).unwrap();
            // The 1 nm slice is not quite a delta function; its own decay
            // across the slice cancels in the ratio to first order.
            let expected = (-2.0 * kappa * (z - 100e-9)).exp();
            assert!(
                (d / base / expected - 1.0).abs() < 1e-8,
                "depth {z}: {} vs {expected}",
                d / base
            );
        }
    }

    #[test]
    fn shot_noise_arithmetic() {
        let probe = ProbeConfig::new(0.74, 1.0, 1e6, 100.0).unwrap();
        let sn = signal_and_noise(0.25, 0.05, &probe);
        assert!((sn.signal - 5e4).abs() < 1e-9);
        assert!((sn.shot_noise - 500.0).abs() < 1e-12);
        assert!((sn.snr - 100.0).abs() < 1e-12);
    }

    #[test]
    fn no_photons_no_signal() {
        let probe = ProbeConfig::new(0.74, 1.0, 0.0, 100.0).unwrap();
        let sn = signal_and_noise(0.25, 0.05, &probe);
        assert_eq!(sn.signal, 0.0);
        assert_eq!(sn.shot_noise, 0.0);
        assert_eq!(sn.snr, 0.0);
    }

    #[test]
    fn snr_scales_with_the_root_of_the_photon_number() {
        let p1 = ProbeConfig::new(0.74, 0.8, 1e6, 100.0).unwrap();
        let p2 = ProbeConfig::new(0.74, 0.8, 2e6, 100.0).unwrap();
        let s1 = signal_and_noise(0.3, 0.02, &p1).snr;
        let s2 = signal_and_noise(0.3, 0.02, &p2).snr;
        assert!((s2 / s1 - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dark_output_is_flagged_with_an_infinite_ratio() {
        let probe = ProbeConfig::new(0.74, 1.0, 1e6, 100.0).unwrap();
        let sn = signal_and_noise(0.0, 0.05, &probe);
        assert!(sn.snr.is_infinite());
    }

    #[test]
    fn nothing_absorbs_in_an_empty_layer() {
        let f = absorbed_fraction(&bare(), &medium(-30.0, 0.0), 100e-9, &ctx(42.6)).unwrap();
        assert_eq!(f.full, 0.0);
        assert_eq!(f.simplified, 0.0);
        assert!(!f.clipped);
    }

    #[test]
    fn simplified_fraction_is_an_exact_lorentzian_in_the_detuning() {
        let stack = bare();
        let c = ctx(42.6);
        let f0 = absorbed_fraction(&stack, &medium(0.0, 1e17), 100e-9, &c)
            .unwrap()
            .simplified;
        for &d in &[0.5, 5.0, 30.0, 300.0] {
            let f = absorbed_fraction(&stack, &medium(d, 1e17), 100e-9, &c)
                .unwrap()
                .simplified;
            let x = 2.0 * d;
            assert!((f / f0 - 1.0 / (1.0 + x * x)).abs() < 1e-12 * (f / f0));
        }
    }

    #[test]
    fn absorption_requires_an_evanescent_gap() {
        let r = absorbed_fraction(&bare(), &medium(-30.0, 1e19), 100e-9, &ctx(30.0));
        assert_eq!(r.unwrap_err(), Error::BelowCriticalAngle);
    }

    #[test]
    fn budget_ratio_vanishes_on_resonance() {
        let b = snr_photon_budget(&bare(), &medium(0.0, 1e19), 100e-9, &ctx(42.6), 1.0, 100.0)
            .unwrap();
        assert_eq!(b.snr, 0.0);
        assert!(b.max_incident_photons.is_finite());
    }

    #[test]
    fn empty_layer_has_an_unbounded_budget() {
        let b = snr_photon_budget(&bare(), &medium(-30.0, 0.0), 100e-9, &ctx(42.6), 1.0, 100.0)
            .unwrap();
        assert!(b.max_incident_photons.is_infinite());
        assert_eq!(b.snr, 0.0);
    }

    #[test]
    fn budget_composes_signal_and_noise() {
        let stack = bare();
        let c = ctx(42.6);
        let m = medium(-30.0, 1e17);
        let budget = snr_photon_budget(&stack, &m, 100e-9, &c, 0.9, 50.0).unwrap();
        let (_, f25) = absorbed_fraction_raw(&stack, &m, 100e-9, &c).unwrap();
        let probe = ProbeConfig::new(c.incidence_angle(), 0.9, 50.0 / f25, 50.0).unwrap();
        let dr = delta_r_linear(&stack, &m, 100e-9, &c).unwrap();
        let composed = signal_and_noise(reflectivity(&stack, &c).unwrap(), dr, &probe).snr;
        assert!((budget.snr / composed - 1.0).abs() < 1e-12);
    }

    #[test]
    fn budget_ratio_saturates_at_large_detuning() {
        let stack = bare();
        let c = ctx(42.6);
        let s60 = snr_photon_budget(&stack, &medium(60.0, 1e17), 100e-9, &c, 1.0, 100.0)
            .unwrap()
            .snr;
        let s600 = snr_photon_budget(&stack, &medium(600.0, 1e17), 100e-9, &c, 1.0, 100.0)
            .unwrap()
            .snr;
        assert!((s60 / s600 - 1.0).abs() < 0.02);
    }

    #[test]
    fn closed_form_factor_matches_the_budget_ratio() {
        let stack = bare();
        let c = ctx(42.6);
        let m = medium(-300.0, 1e17);
        let chi = sensitivity_factor(&stack, 100e-9, &c, 1.0).unwrap();
        let snr = snr_photon_budget(&stack, &m, 100e-9, &c, 1.0, 100.0)
            .unwrap()
            .snr;
        let lambda = stack.vacuum_wavelength();
        let x = m.two_delta_over_gamma();
        let closed =
            (chi * lambda.powi(3) * 1e17 * x * x / (1.0 + x * x) * 100.0).sqrt();
        assert!((snr / closed - 1.0).abs() < 0.01, "{snr} vs {closed}");
    }

    #[test]
    fn qnd_limit_vanishes_without_atoms() {
        let n = qnd_max_atoms(&bare(), &medium(-30.0, 0.0), 100e-9, &ctx(42.6), 1.0).unwrap();
        assert_eq!(n, 0.0);
    }

    #[test]
    fn resolution_arithmetic() {
        assert_eq!(atom_number_resolution(9000.0, 300.0).unwrap(), 30.0);
        assert_eq!(atom_number_resolution(250.0, 250.0).unwrap(), 1.0);
        assert_eq!(atom_number_resolution(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(
            atom_number_resolution(10.0, 0.0).unwrap_err(),
            Error::UndefinedResolution
        );
    }

    #[test]
    fn report_is_consistent_with_the_scalar_operations() {
        let stack = bare();
        let m = medium(-30.0, 1e19);
        let probe = ProbeConfig::new(42.6f64.to_radians(), 1.0, 1e6, 100.0).unwrap();
        let report = evaluate_point(&stack, &m, 100e-9, &probe).unwrap();
        let c = ctx(42.6);
        let dr =
            delta_r_exact(&stack, &m, &AtomLayerGeometry::half_space(100e-9), &c).unwrap();
        assert_eq!(report.delta_r, dr);
        let qnd = qnd_max_atoms(&stack, &m, 100e-9, &c, 1.0).unwrap();
        assert_eq!(report.qnd_max_atoms, qnd);
    }
}

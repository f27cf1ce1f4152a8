//! Transfer-matrix solver for p-polarized plane waves in stratified media.
//!
//! The total matrix of a stack is the ordered product of interface and
//! propagation matrices, `M = M_12 P_2 M_23 P_3 ... M_(N-1,N)`. With the
//! conventions used here the amplitude reflection coefficient of the stack
//! is `M12 / M22` and the transmission amplitude `1 / M22`.
//!
//! Vertical wavenumbers take the principal branch with `Re >= 0, Im >= 0`,
//! so propagating components advance and evanescent components decay. For a
//! lossless layer beyond the critical angle the wavenumber is purely
//! imaginary and its imaginary part is the inverse decay length of the
//! evanescent field.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::minimize::minimize_grid_golden;
use crate::real::Real;
use crate::stack::{Layer, LayerStack, PlaneWaveContext, Thickness};

/// 2x2 complex matrix acting on (backward, forward) amplitude pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix<R: Real> {
    pub m11: Complex<R>,
    pub m12: Complex<R>,
    pub m21: Complex<R>,
    pub m22: Complex<R>,
}

impl<R: Real> TransferMatrix<R> {
    pub fn identity() -> Self {
        Self {
            m11: Complex::new(R::one(), R::zero()),
            m12: Complex::new(R::zero(), R::zero()),
            m21: Complex::new(R::zero(), R::zero()),
            m22: Complex::new(R::one(), R::zero()),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            m11: self.m11 * rhs.m11 + self.m12 * rhs.m21,
            m12: self.m11 * rhs.m12 + self.m12 * rhs.m22,
            m21: self.m21 * rhs.m11 + self.m22 * rhs.m21,
            m22: self.m21 * rhs.m12 + self.m22 * rhs.m22,
        }
    }

    pub fn determinant(&self) -> Complex<R> {
        self.m11 * self.m22 - self.m12 * self.m21
    }
}

/// Vertical wavenumber `k_jz = k0 sqrt(n_j^2 - n_1^2 sin^2(theta))` of a
/// layer, on the branch `Re >= 0, Im >= 0`.
pub fn vertical_wavenumber<R: Real>(
    layer: &Layer<R>,
    ctx: &PlaneWaveContext<R>,
    stack: &LayerStack<R>,
) -> Complex<R> {
    let n = layer.index();
    let s = stack.incidence_index() * ctx.incidence_angle().sin();
    let mut arg = n * n - Complex::new(s * s, R::zero());
    // Passive media put the argument in the closed upper half-plane, where
    // the principal square root lands in the first quadrant. Flush -0.0 so
    // the lossless evanescent case takes the Im > 0 branch exactly.
    arg.im = arg.im + R::zero();
    stack.wavenumber() * arg.sqrt()
}

/// Inverse decay length `kappa = Im(k_z)` of a lossless layer beyond the
/// critical angle. Fails when the field in that layer is not evanescent.
pub fn inverse_decay_length<R: Real>(
    layer: &Layer<R>,
    ctx: &PlaneWaveContext<R>,
    stack: &LayerStack<R>,
) -> Result<R> {
    let kz = vertical_wavenumber(layer, ctx, stack);
    if kz.re != R::zero() || !(kz.im > R::zero()) {
        return Err(Error::BelowCriticalAngle);
    }
    Ok(kz.im)
}

/// Fresnel amplitude coefficients `(r_ij, t_ij)` of the interface between
/// two adjacent layers, for p-polarization.
///
/// The transmission numerator carries the standard factor `2 k_iz n_i n_j`;
/// single-interface energy conservation fixes this normalization (see the
/// interface energy-balance test).
pub fn fresnel_interface<R: Real>(
    i: &Layer<R>,
    j: &Layer<R>,
    ctx: &PlaneWaveContext<R>,
    stack: &LayerStack<R>,
) -> (Complex<R>, Complex<R>) {
    let kiz = vertical_wavenumber(i, ctx, stack);
    let kjz = vertical_wavenumber(j, ctx, stack);
    let (ni, nj) = (i.index(), j.index());
    let den = kiz * nj * nj + kjz * ni * ni;
    let r = (kiz * nj * nj - kjz * ni * ni) / den;
    let t = kiz * ni * nj * R::lit(2.0) / den;
    (r, t)
}

/// Interface matrix `(1/t_ij) [[1, r_ij], [r_ij, 1]]`.
pub fn interface_matrix<R: Real>(
    i: &Layer<R>,
    j: &Layer<R>,
    ctx: &PlaneWaveContext<R>,
    stack: &LayerStack<R>,
) -> TransferMatrix<R> {
    let (r, t) = fresnel_interface(i, j, ctx, stack);
    let inv_t = Complex::new(R::one(), R::zero()) / t;
    TransferMatrix {
        m11: inv_t,
        m12: r * inv_t,
        m21: r * inv_t,
        m22: inv_t,
    }
}

/// Free-propagation matrix `diag(exp(i k_jz d), exp(-i k_jz d))` across a
/// finite layer.
pub fn propagation_matrix<R: Real>(
    layer: &Layer<R>,
    ctx: &PlaneWaveContext<R>,
    stack: &LayerStack<R>,
) -> Result<TransferMatrix<R>> {
    let Thickness::Finite(d) = layer.thickness() else {
        return Err(Error::SemiInfiniteLayer);
    };
    Ok(propagation_matrix_over(layer, ctx, stack, d))
}

/// Propagation matrix over an explicit distance, regardless of the layer's
/// stored thickness. Used to walk into terminal half-spaces.
pub fn propagation_matrix_over<R: Real>(
    layer: &Layer<R>,
    ctx: &PlaneWaveContext<R>,
    stack: &LayerStack<R>,
    distance: R,
) -> TransferMatrix<R> {
    let kz = vertical_wavenumber(layer, ctx, stack);
    let phase = Complex::new(R::zero(), R::one()) * kz * Complex::new(distance, R::zero());
    let zero = Complex::new(R::zero(), R::zero());
    TransferMatrix {
        m11: phase.exp(),
        m12: zero,
        m21: zero,
        m22: (-phase).exp(),
    }
}

/// Ordered product of all interface and propagation matrices of the stack.
pub fn total_matrix<R: Real>(stack: &LayerStack<R>, ctx: &PlaneWaveContext<R>) -> TransferMatrix<R> {
    let layers = stack.layers();
    let mut m = interface_matrix(&layers[0], &layers[1], ctx, stack);
    for j in 1..layers.len() - 1 {
        let p = propagation_matrix(&layers[j], ctx, stack).expect("interior layers are finite");
        m = m.mul(&p);
        m = m.mul(&interface_matrix(&layers[j], &layers[j + 1], ctx, stack));
    }
    m
}

/// Splits the total-matrix product after the free propagation inside layer
/// `split_layer` (0-based, interior): the front factor collects everything
/// up to and including that propagation, the back factor the rest. Their
/// product is the total matrix.
pub fn total_matrix_split<R: Real>(
    stack: &LayerStack<R>,
    ctx: &PlaneWaveContext<R>,
    split_layer: usize,
) -> Result<(TransferMatrix<R>, TransferMatrix<R>)> {
    let layers = stack.layers();
    if split_layer == 0 || split_layer >= layers.len() - 1 {
        return Err(Error::InvalidInput(
            "split layer must be an interior layer".into(),
        ));
    }
    let mut front = interface_matrix(&layers[0], &layers[1], ctx, stack);
    let mut back = TransferMatrix::identity();
    for j in 1..layers.len() - 1 {
        let p = propagation_matrix(&layers[j], ctx, stack)?;
        let i = interface_matrix(&layers[j], &layers[j + 1], ctx, stack);
        if j <= split_layer {
            front = front.mul(&p);
            if j < split_layer {
                front = front.mul(&i);
            } else {
                back = back.mul(&i);
            }
        } else {
            back = back.mul(&p);
            back = back.mul(&i);
        }
    }
    Ok((front, back))
}

/// Front matrix with the terminal half-space entered to depth `z`: the
/// total matrix followed by free propagation over `z` in the last layer.
/// For a prism/metal/vacuum stack this is the `A`-matrix whose `1/|A22|^2`
/// is the evanescent intensity enhancement at depth `z`.
pub fn front_matrix<R: Real>(
    stack: &LayerStack<R>,
    ctx: &PlaneWaveContext<R>,
    z: R,
) -> TransferMatrix<R> {
    let m = total_matrix(stack, ctx);
    let last = stack.layers().last().expect("validated non-empty");
    m.mul(&propagation_matrix_over(last, ctx, stack, z))
}

const DEGENERATE_FLOOR: f64 = 1e-30;

/// Complex amplitude reflection coefficient `M12 / M22` of the stack.
pub fn reflection_amplitude<R: Real>(
    stack: &LayerStack<R>,
    ctx: &PlaneWaveContext<R>,
) -> Result<Complex<R>> {
    let m = total_matrix(stack, ctx);
    if m.m22.norm() < R::lit(DEGENERATE_FLOOR) {
        return Err(Error::DegenerateStack);
    }
    Ok(m.m12 / m.m22)
}

/// Intensity reflectivity `R = |M12 / M22|^2`.
pub fn reflectivity<R: Real>(stack: &LayerStack<R>, ctx: &PlaneWaveContext<R>) -> Result<R> {
    reflection_amplitude(stack, ctx).map(|r| r.norm_sqr())
}

/// Transmitted-flux fraction through the stack (Poynting ratio). Zero when
/// the terminal field is evanescent.
pub fn transmittance<R: Real>(stack: &LayerStack<R>, ctx: &PlaneWaveContext<R>) -> Result<R> {
    let m = total_matrix(stack, ctx);
    if m.m22.norm() < R::lit(DEGENERATE_FLOOR) {
        return Err(Error::DegenerateStack);
    }
    let t = Complex::new(R::one(), R::zero()) / m.m22;
    let layers = stack.layers();
    let k1z = vertical_wavenumber(&layers[0], ctx, stack);
    let knz = vertical_wavenumber(layers.last().unwrap(), ctx, stack);
    Ok(t.norm_sqr() * knz.re / k1z.re)
}

/// Evanescent intensity enhancement `1/|A22|^2` at depth `z` into the
/// terminal half-space; at `z = 0` this is the plasmonic enhancement of the
/// field intensity right behind the last interface.
pub fn field_enhancement<R: Real>(
    stack: &LayerStack<R>,
    ctx: &PlaneWaveContext<R>,
    z: R,
) -> Result<R> {
    if !(z >= R::zero()) {
        return Err(Error::InvalidInput(
            "enhancement depth must be non-negative".into(),
        ));
    }
    let a = front_matrix(stack, ctx, z);
    let norm = a.m22.norm_sqr();
    if norm < R::lit(DEGENERATE_FLOOR) {
        return Err(Error::DegenerateStack);
    }
    Ok(norm.recip())
}

/// Locates the reflectivity minimum of the stack on `[theta_min, theta_max]`
/// to 1e-6 rad (coarse grid scan, then golden-section refinement).
///
/// Fails with [`Error::NoBracket`] when the reflectivity is monotone on the
/// interval.
pub fn find_resonance_angle<R: Real>(
    stack: &LayerStack<R>,
    theta_min: R,
    theta_max: R,
) -> Result<R> {
    let r_of = |theta: R| match PlaneWaveContext::new(theta) {
        Ok(ctx) => reflectivity(stack, &ctx).unwrap_or_else(|_| R::infinity()),
        Err(_) => R::infinity(),
    };
    let m = minimize_grid_golden(r_of, theta_min, theta_max, 2000, R::lit(1e-8))?;
    Ok(m.x)
}

//! Free-space Green's function of `(lap^2 - lambda^2 lap)`,
//!
//! `g(rho) = -(1/(2 pi lambda^2)) (K_0(lambda rho) + log rho)`,
//!
//! its radial derivatives through order five, and the synthetic point-source
//! fields built from it: charges, source-side directional dipoles, and
//! source-side second directional derivatives, with value / gradient /
//! Hessian at the target.
//!
//! Directional derivatives are taken with respect to the **source**
//! coordinate. Either convention yields a valid homogeneous solution away
//! from the sources; all consumers in this crate (boundary data, reference
//! values, expansion formation) use this one consistently.
//!
//! For `lambda rho <= 2` the kernel and its derivatives are evaluated by a
//! recombined series in which the `rho^-k` poles of the `K_0` part and the
//! `log` part cancel analytically; the difference of the two parts in
//! floating point (the "exact difference" route) is available separately via
//! [`split_field`] and is intentionally *not* protected from cancellation.

use crate::bessel::{self, BesselError, EULER_GAMMA};
use crate::scaled::Scaled;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GreensError {
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error("lambda must be positive and finite, got {0}")]
    InvalidLambda(f64),
    #[error("rho must be positive and finite, got {0}")]
    InvalidRho(f64),
    #[error("derivative order {0} not supported (max 5)")]
    OrderTooHigh(usize),
    #[error("evaluation point coincides with source {0}")]
    CoincidentPoint(usize),
    #[error("direction vector of source {0} is not unit length")]
    NonUnitDirection(usize),
}

/// A point source of the synthetic field: charge `c`, dipole `(d, v1)`, and
/// second directional weight `(q, v2, v3)`.
#[derive(Debug, Clone, Copy)]
pub struct PointSource {
    pub location: [f64; 2],
    pub charge: f64,
    pub dipole_weight: f64,
    pub dipole_dir: [f64; 2],
    pub quad_weight: f64,
    pub quad_dirs: [[f64; 2]; 2],
}

impl PointSource {
    /// A pure charge, no directional terms.
    pub fn charge(location: [f64; 2], c: f64) -> Self {
        PointSource {
            location,
            charge: c,
            dipole_weight: 0.0,
            dipole_dir: [1.0, 0.0],
            quad_weight: 0.0,
            quad_dirs: [[1.0, 0.0], [1.0, 0.0]],
        }
    }

    fn check_directions(&self, index: usize) -> Result<(), GreensError> {
        for v in [self.dipole_dir, self.quad_dirs[0], self.quad_dirs[1]] {
            if (v[0].hypot(v[1]) - 1.0).abs() > 1e-14 {
                return Err(GreensError::NonUnitDirection(index));
            }
        }
        Ok(())
    }
}

/// Field value with first and second target derivatives.
/// `hessian` holds `(u_xx, u_xy, u_yy)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FieldSample {
    pub value: f64,
    pub gradient: [f64; 2],
    pub hessian: [f64; 3],
}

impl FieldSample {
    pub fn sub(&self, rhs: &FieldSample) -> FieldSample {
        FieldSample {
            value: self.value - rhs.value,
            gradient: [self.gradient[0] - rhs.gradient[0], self.gradient[1] - rhs.gradient[1]],
            hessian: [
                self.hessian[0] - rhs.hessian[0],
                self.hessian[1] - rhs.hessian[1],
                self.hessian[2] - rhs.hessian[2],
            ],
        }
    }
}

/// `g(rho), g'(rho), ..., g^(max_order)(rho)` for the combined kernel.
pub fn greens_radial(lambda: f64, rho: f64, max_order: usize) -> Result<Vec<f64>, GreensError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(GreensError::InvalidLambda(lambda));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(GreensError::InvalidRho(rho));
    }
    if max_order > 5 {
        return Err(GreensError::OrderTooHigh(max_order));
    }
    let d = combined_kernel_derivs(lambda, rho)?;
    Ok(d[..=max_order].to_vec())
}

/// Derivative coefficient tables for `d^k/dx^k K_0(x)` over `K_0..K_5`.
const K0_DERIV_TABLE: [[f64; 6]; 6] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0, 0.0, 0.0],
    [0.5, 0.0, 0.5, 0.0, 0.0, 0.0],
    [0.0, -0.75, 0.0, -0.25, 0.0, 0.0],
    [0.375, 0.0, 0.5, 0.0, 0.125, 0.0],
    [0.0, -0.625, 0.0, -0.3125, 0.0, -0.0625],
];

/// Radial derivatives (orders 0..=5) of `K_0(lambda rho)` w.r.t. `rho`.
fn k0_kernel_derivs(lambda: f64, rho: f64) -> Result<[f64; 6], GreensError> {
    let x = lambda * rho;
    let k = bessel::k_seq_scaled(5, x)?;
    let mut out = [0.0; 6];
    let mut lam_pow = 1.0;
    for (order, row) in K0_DERIV_TABLE.iter().enumerate() {
        let mut acc = Scaled::ZERO;
        for (j, &w) in row.iter().enumerate() {
            if w != 0.0 {
                acc = acc.add(k[j].mul_f64(w));
            }
        }
        out[order] = acc.to_f64() * lam_pow;
        lam_pow *= lambda;
    }
    Ok(out)
}

/// Radial derivatives (orders 0..=5) of `log rho`.
fn log_kernel_derivs(rho: f64) -> [f64; 6] {
    let i = 1.0 / rho;
    [rho.ln(), i, -i * i, 2.0 * i * i * i, -6.0 * i * i * i * i, 24.0 * i * i * i * i * i]
}

/// Radial derivatives of the combined kernel
/// `-(1/(2 pi lambda^2))(K_0(lambda rho) + log rho)`, stable at small
/// `lambda rho` via the recombined series.
fn combined_kernel_derivs(lambda: f64, rho: f64) -> Result<[f64; 6], GreensError> {
    let x = lambda * rho;
    let pref = -1.0 / (2.0 * std::f64::consts::PI * lambda * lambda);
    let mut out = [0.0; 6];
    if x > bessel::SERIES_CUTOFF {
        let k = k0_kernel_derivs(lambda, rho)?;
        let l = log_kernel_derivs(rho);
        for i in 0..6 {
            out[i] = pref * (k[i] + l[i]);
        }
        return Ok(out);
    }
    // K_0(lambda rho) + log rho = A(rho) + log(rho) B(rho) with
    //   A = sum_k (psi(k+1) - ln(lambda/2)) q^k / (k!)^2,  q = (lambda rho/2)^2
    //   B = -sum_{k>=1} q^k / (k!)^2
    // Derivative order m of a term rho^{2k}: falling-factorial weights; the
    // log factor contributes (log rho)^{(j)} = (-1)^{j-1}(j-1)!/rho^j.
    let q = 0.25 * x * x;
    let ln_half_lambda = (0.5 * lambda).ln();
    let mut a = [0.0f64; 6]; // A^{(m)} * rho^m
    let mut b = [0.0f64; 6];
    let mut psi = -EULER_GAMMA;
    let mut t = 1.0f64;
    let mut k = 0.0f64;
    loop {
        let ak = (psi - ln_half_lambda) * t;
        let bk = if k == 0.0 { 0.0 } else { -t };
        let mut ff = 1.0; // falling factorial (2k)(2k-1)...(2k-m+1)
        for m in 0..6 {
            if m > 0 {
                ff *= 2.0 * k - (m as f64 - 1.0);
            }
            a[m] += ak * ff;
            b[m] += bk * ff;
            if ff == 0.0 {
                break;
            }
        }
        t *= q / ((k + 1.0) * (k + 1.0));
        psi += 1.0 / (k + 1.0);
        k += 1.0;
        if t * (psi.abs() + ln_half_lambda.abs() + 1.0) < (a[0].abs() + 1.0) * 1e-18 {
            break;
        }
    }
    let lnr = rho.ln();
    let inv = 1.0 / rho;
    let mut rho_m = 1.0; // rho^{-m}
    // binomial(m, j) * (log rho)^{(j)} * B^{(m-j)} assembled per order.
    for m in 0..6 {
        let mut v = a[m] + lnr * b[m];
        let mut binom = 1.0;
        let mut logd = 1.0; // (-1)^{j-1}(j-1)! ; at j=1 this is 1
        for j in 1..=m {
            binom = binom * (m - j + 1) as f64 / j as f64;
            if j > 1 {
                logd *= -(j as f64 - 1.0);
            }
            // B^{(m-j)} rho^{m-j} = b[m-j]; the rho powers combine to rho^-m.
            v += binom * logd * b[m - j];
        }
        out[m] = pref * v * rho_m;
        rho_m *= inv;
    }
    Ok(out)
}

/// Tensor contraction weights shared by value/gradient/Hessian assembly.
struct RadialTensors {
    d1: [f64; 2],
    d2: [[f64; 2]; 2],
    d3: [[[f64; 2]; 2]; 2],
    d4: [[[[f64; 2]; 2]; 2]; 2],
}

fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Cartesian derivative tensors of a radial kernel from its radial
/// derivatives `g[0..=4]` at `rho`, with `u = w / rho`.
fn radial_tensors(g: &[f64; 6], u: [f64; 2], rho: f64) -> RadialTensors {
    let inv = 1.0 / rho;
    let b3 = (g[2] - g[1] * inv) * inv;
    let c1 = g[4] - 6.0 * g[3] * inv + 15.0 * g[2] * inv * inv - 15.0 * g[1] * inv * inv * inv;
    let c2 = (g[3] - 3.0 * g[2] * inv + 3.0 * g[1] * inv * inv) * inv;
    let c3 = (g[2] - g[1] * inv) * inv * inv;

    let mut t = RadialTensors {
        d1: [0.0; 2],
        d2: [[0.0; 2]; 2],
        d3: [[[0.0; 2]; 2]; 2],
        d4: [[[[0.0; 2]; 2]; 2]; 2],
    };
    for i in 0..2 {
        t.d1[i] = g[1] * u[i];
        for j in 0..2 {
            t.d2[i][j] = g[2] * u[i] * u[j] + g[1] * inv * (delta(i, j) - u[i] * u[j]);
            for k in 0..2 {
                let t3 = delta(i, j) * u[k] + delta(i, k) * u[j] + delta(j, k) * u[i]
                    - 3.0 * u[i] * u[j] * u[k];
                t.d3[i][j][k] = g[3] * u[i] * u[j] * u[k] + b3 * t3;
                for l in 0..2 {
                    let uu = u[i] * u[j] * u[k] * u[l];
                    let sym6 = delta(i, j) * u[k] * u[l]
                        + delta(i, k) * u[j] * u[l]
                        + delta(i, l) * u[j] * u[k]
                        + delta(j, k) * u[i] * u[l]
                        + delta(j, l) * u[i] * u[k]
                        + delta(k, l) * u[i] * u[j];
                    let sym3 = delta(i, j) * delta(k, l)
                        + delta(i, k) * delta(j, l)
                        + delta(i, l) * delta(j, k);
                    t.d4[i][j][k][l] = c1 * uu + c2 * sym6 + c3 * sym3;
                }
            }
        }
    }
    t
}

/// Accumulates one source's contribution (kernel derivatives `g`) into `out`.
fn accumulate_source(
    out: &mut FieldSample,
    src: &PointSource,
    lambda: f64,
    g: &[f64; 6],
    u: [f64; 2],
    rho: f64,
) {
    let t = radial_tensors(g, u, rho);
    let wc = lambda * lambda * src.charge;
    let wd = -lambda * src.dipole_weight; // source-side derivative flips the sign
    let wq = src.quad_weight; // two source derivatives, sign restored
    let v1 = src.dipole_dir;
    let (v2, v3) = (src.quad_dirs[0], src.quad_dirs[1]);

    let mut d1v1 = 0.0;
    let mut d2v23 = 0.0;
    let mut d2v1 = [0.0; 2];
    let mut d3v23 = [0.0; 2];
    let mut d3v1 = [[0.0; 2]; 2];
    let mut d4v23 = [[0.0; 2]; 2];
    for i in 0..2 {
        d1v1 += t.d1[i] * v1[i];
        for j in 0..2 {
            d2v23 += t.d2[i][j] * v2[i] * v3[j];
            d2v1[i] += t.d2[i][j] * v1[j];
            for k in 0..2 {
                d3v23[i] += t.d3[i][j][k] * v2[j] * v3[k];
                d3v1[i][j] += t.d3[i][j][k] * v1[k];
                for l in 0..2 {
                    d4v23[i][j] += t.d4[i][j][k][l] * v2[k] * v3[l];
                }
            }
        }
    }

    out.value += wc * g[0] + wd * d1v1 + wq * d2v23;
    for i in 0..2 {
        out.gradient[i] += wc * t.d1[i] + wd * d2v1[i] + wq * d3v23[i];
    }
    out.hessian[0] += wc * t.d2[0][0] + wd * d3v1[0][0] + wq * d4v23[0][0];
    out.hessian[1] += wc * t.d2[0][1] + wd * d3v1[0][1] + wq * d4v23[0][1];
    out.hessian[2] += wc * t.d2[1][1] + wd * d3v1[1][1] + wq * d4v23[1][1];
}

fn source_geometry(
    x: [f64; 2],
    src: &PointSource,
    index: usize,
) -> Result<([f64; 2], f64), GreensError> {
    let w = [x[0] - src.location[0], x[1] - src.location[1]];
    let rho = w[0].hypot(w[1]);
    if rho < 1e-300 {
        return Err(GreensError::CoincidentPoint(index));
    }
    Ok(([w[0] / rho, w[1] / rho], rho))
}

/// The synthetic field
/// `u(x) = sum_j lambda^2 c_j g + lambda d_j d_{v1}^src g + q_j d^2_{v2 v3}^src g`
/// with value, gradient and Hessian at `x`.
pub fn synth_field(
    sources: &[PointSource],
    lambda: f64,
    x: [f64; 2],
) -> Result<FieldSample, GreensError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(GreensError::InvalidLambda(lambda));
    }
    let mut out = FieldSample::default();
    for (idx, src) in sources.iter().enumerate() {
        src.check_directions(idx)?;
        let (u, rho) = source_geometry(x, src, idx)?;
        let g = combined_kernel_derivs(lambda, rho)?;
        accumulate_source(&mut out, src, lambda, &g, u, rho);
    }
    Ok(out)
}

/// The Laplace part `u_L` (log kernel, prefactor `+1/(2 pi lambda^2)`) and
/// modified-Helmholtz part `u_H` (`K_0` kernel, prefactor
/// `-1/(2 pi lambda^2)`), so that `u = u_H - u_L` exactly. Evaluating that
/// difference in working precision is the "exact difference" route, which
/// cancels catastrophically for small `lambda rho`.
pub fn split_field(
    sources: &[PointSource],
    lambda: f64,
    x: [f64; 2],
) -> Result<(FieldSample, FieldSample), GreensError> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(GreensError::InvalidLambda(lambda));
    }
    let pref = 1.0 / (2.0 * std::f64::consts::PI * lambda * lambda);
    let mut lap = FieldSample::default();
    let mut helm = FieldSample::default();
    for (idx, src) in sources.iter().enumerate() {
        src.check_directions(idx)?;
        let (u, rho) = source_geometry(x, src, idx)?;
        let mut gl = log_kernel_derivs(rho);
        for v in gl.iter_mut() {
            *v *= pref;
        }
        accumulate_source(&mut lap, src, lambda, &gl, u, rho);
        let mut gh = k0_kernel_derivs(lambda, rho)?;
        for v in gh.iter_mut() {
            *v *= -pref;
        }
        accumulate_source(&mut helm, src, lambda, &gh, u, rho);
    }
    Ok((lap, helm))
}

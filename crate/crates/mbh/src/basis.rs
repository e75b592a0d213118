//! Radial basis functions for the per-mode ODE
//! `(d2/dr2 + (1/r) d/dr - n^2/r^2)(d2/dr2 + (1/r) d/dr - n^2/r^2 - lambda^2) u = 0`
//! and the 2x2 matrices coupling a basis pair to Dirichlet data.
//!
//! Four pairs are supported per mode `n`:
//!
//! | tag          | pair (n != 0)        | pair (n = 0)      |
//! |--------------|----------------------|-------------------|
//! | `IntNaive`   | `(r^|n|,  I_n)`      | `(1, I_0)`        |
//! | `IntStable`  | `(r^|n|,  P_n)`      | `(1, P_0)`        |
//! | `ExtNaive`   | `(r^-|n|, K_n)`      | `(log r, K_0)`    |
//! | `ExtStable`  | `(Q_n,    K_n)`      | `(Q_0, K_0)`      |
//!
//! `P_n(r) = I_n(lambda r) - (lambda r/2)^|n| / |n|!` removes the leading
//! power-series term of `I_n`, making it `O(r^{|n|+2})` at the origin;
//! `Q_n(r) = K_n(lambda r) - 2^{|n|-1}(|n|-1)! (lambda r)^{-|n|}` removes the
//! leading singular term of `K_n`, making it `O(r^{-|n|+2})`;
//! `Q_0(r) = K_0(lambda r) + log r`. Both are evaluated through
//! first-term-omitted series below `lambda r = 2` so no subtractive
//! cancellation occurs, and by direct subtraction above, where the removed
//! term no longer dominates.
//!
//! Everything here is computed in [`Scaled`] arithmetic: at the extreme ends
//! of the parameter sweeps (`lambda R ~ 2^-25`, orders to ~50) the raw basis
//! values overflow or underflow `f64` while normalized columns, ratios and
//! solution values stay finite.

use crate::bessel::{self, BesselError, EULER_GAMMA};
use crate::dd::DdScaled;
use crate::scaled::Scaled;
use crate::smallmat::{cond2_unit_columns, TwoByTwo};
use thiserror::Error;

/// Which side of the disk boundary a problem or basis lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Interior,
    Exterior,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error(transparent)]
    Bessel(#[from] BesselError),
    #[error("lambda must be positive and finite, got {0}")]
    InvalidLambda(f64),
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("radius must be nonnegative and finite, got {0}")]
    NegativeRadius(f64),
    #[error("value at mode {n} overflows f64; use the scaled interface")]
    Unrepresentable { n: i32 },
}

/// The four supported basis pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadialBasis {
    IntNaive,
    IntStable,
    ExtNaive,
    ExtStable,
}

impl RadialBasis {
    pub fn side(&self) -> Side {
        match self {
            RadialBasis::IntNaive | RadialBasis::IntStable => Side::Interior,
            RadialBasis::ExtNaive | RadialBasis::ExtStable => Side::Exterior,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RadialBasis::IntNaive => "int-naive",
            RadialBasis::IntStable => "int-stable",
            RadialBasis::ExtNaive => "ext-naive",
            RadialBasis::ExtStable => "ext-stable",
        }
    }

    pub const ALL: [RadialBasis; 4] = [
        RadialBasis::IntNaive,
        RadialBasis::IntStable,
        RadialBasis::ExtNaive,
        RadialBasis::ExtStable,
    ];
}

impl std::str::FromStr for RadialBasis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RadialBasis::ALL
            .iter()
            .copied()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown basis `{s}`"))
    }
}

/// Value and first two radial derivatives of one basis function, scaled.
#[derive(Debug, Clone, Copy)]
pub struct RadialEval {
    pub v: Scaled,
    pub d1: Scaled,
    pub d2: Scaled,
}

impl RadialEval {
    const ZERO: RadialEval = RadialEval { v: Scaled::ZERO, d1: Scaled::ZERO, d2: Scaled::ZERO };
}

/// The 2x2 system matrix `[[F(R), G(R)], [F'(R), G'(R)]]` for one mode.
#[derive(Debug, Clone)]
pub struct ModeMatrix {
    pub matrix: TwoByTwo,
    pub n: i32,
    pub lambda: f64,
    pub radius: f64,
}

/// `P_n` value and radial derivative at `r` (plain f64 range).
pub fn p_eval(n: i32, lambda: f64, r: f64) -> Result<(f64, f64), BasisError> {
    check_lambda(lambda)?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(BasisError::NegativeRadius(r));
    }
    let na = n.unsigned_abs() as usize;
    if r == 0.0 {
        // P_n and its first derivative vanish at the origin for every n
        // (P_0 = O(r^2), P_n = O(r^{n+2})).
        return Ok((0.0, 0.0));
    }
    let iseq = bessel::i_seq_scaled(na + 2, lambda * r)?;
    let e = p_eval_scaled(na, lambda, r, &iseq);
    let (v, d1) = (e.v.to_f64(), e.d1.to_f64());
    if !v.is_finite() || !d1.is_finite() {
        return Err(BasisError::Unrepresentable { n });
    }
    Ok((v, d1))
}

/// `Q_n` value and radial derivative at `r > 0` (plain f64 range).
pub fn q_eval(n: i32, lambda: f64, r: f64) -> Result<(f64, f64), BasisError> {
    check_lambda(lambda)?;
    check_radius(r)?;
    let na = n.unsigned_abs() as usize;
    let kseq = bessel::k_seq_scaled(na + 2, lambda * r)?;
    let iseq = bessel::i_seq_scaled(na + 2, lambda * r)?;
    let e = q_eval_scaled(na, lambda, r, &kseq, &iseq);
    let (v, d1) = (e.v.to_f64(), e.d1.to_f64());
    if !v.is_finite() || !d1.is_finite() {
        return Err(BasisError::Unrepresentable { n });
    }
    Ok((v, d1))
}

/// The mode matrix with plain f64 entries. At extreme `lambda R` the raw
/// entries can overflow or underflow; [`mode_matrix_scaled`] and
/// [`mode_cond_normalized`] stay exact there.
pub fn mode_matrix(
    basis: RadialBasis,
    n: i32,
    lambda: f64,
    radius: f64,
) -> Result<ModeMatrix, BasisError> {
    let [f, g] = mode_pair_scaled(basis, n, lambda, radius)?;
    let m = TwoByTwo::new(f.v.to_f64(), g.v.to_f64(), f.d1.to_f64(), g.d1.to_f64());
    if !m.is_finite() {
        return Err(BasisError::Unrepresentable { n });
    }
    Ok(ModeMatrix { matrix: m, n, lambda, radius })
}

/// Scaled mode-matrix entries `[[F, G], [F', G']]`.
pub fn mode_matrix_scaled(
    basis: RadialBasis,
    n: i32,
    lambda: f64,
    radius: f64,
) -> Result<[[Scaled; 2]; 2], BasisError> {
    let [f, g] = mode_pair_scaled(basis, n, lambda, radius)?;
    Ok([[f.v, g.v], [f.d1, g.d1]])
}

/// Unit-normalized columns of the mode matrix, computable at any `lambda R`.
pub fn mode_columns_normalized(
    basis: RadialBasis,
    n: i32,
    lambda: f64,
    radius: f64,
) -> Result<([f64; 2], [f64; 2]), BasisError> {
    let [f, g] = mode_pair_scaled(basis, n, lambda, radius)?;
    Ok((normalize_column(f), normalize_column(g)))
}

/// Normalized condition number of the mode matrix, computable at any
/// `lambda R` (the ill-conditioning experiments sweep to `2^-24`).
pub fn mode_cond_normalized(
    basis: RadialBasis,
    n: i32,
    lambda: f64,
    radius: f64,
) -> Result<f64, BasisError> {
    let (c1, c2) = mode_columns_normalized(basis, n, lambda, radius)?;
    Ok(cond2_unit_columns(c1, c2))
}

fn normalize_column(e: RadialEval) -> [f64; 2] {
    // Factor the larger exponent out before forming the norm.
    let emax = if e.v.abs_gt(e.d1) { e.v.e } else { e.d1.e };
    let a = e.v.ldexp(-emax).to_f64();
    let b = e.d1.ldexp(-emax).to_f64();
    let norm = a.hypot(b);
    [a / norm, b / norm]
}

fn check_lambda(lambda: f64) -> Result<(), BasisError> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(BasisError::InvalidLambda(lambda))
    }
}

fn check_radius(r: f64) -> Result<(), BasisError> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(BasisError::InvalidRadius(r))
    }
}

/// `(F, G)` for one mode of one basis, with derivatives, scaled.
pub fn mode_pair_scaled(
    basis: RadialBasis,
    n: i32,
    lambda: f64,
    radius: f64,
) -> Result<[RadialEval; 2], BasisError> {
    check_lambda(lambda)?;
    check_radius(radius)?;
    let na = n.unsigned_abs() as usize;
    let table = RadialTable::build(basis, na, lambda, radius)?;
    Ok([table.f(na), table.g(na)])
}

/// All radial basis evaluations `|n| = 0..=n_max` of one basis family at one
/// radius, sharing the underlying Bessel sequences.
pub struct RadialTable {
    f: Vec<RadialEval>,
    g: Vec<RadialEval>,
}

impl RadialTable {
    pub fn build(
        basis: RadialBasis,
        n_max: usize,
        lambda: f64,
        r: f64,
    ) -> Result<RadialTable, BasisError> {
        check_lambda(lambda)?;
        check_radius(r)?;
        let x = lambda * r;
        let mut f = Vec::with_capacity(n_max + 1);
        let mut g = Vec::with_capacity(n_max + 1);
        match basis {
            RadialBasis::IntNaive => {
                let iseq = bessel::i_seq_scaled(n_max + 2, x)?;
                for na in 0..=n_max {
                    f.push(power_eval(na as i32, r));
                    g.push(bessel_i_eval(na, lambda, &iseq));
                }
            }
            RadialBasis::IntStable => {
                let iseq = bessel::i_seq_scaled(n_max + 2, x)?;
                for na in 0..=n_max {
                    f.push(power_eval(na as i32, r));
                    g.push(p_eval_scaled(na, lambda, r, &iseq));
                }
            }
            RadialBasis::ExtNaive => {
                let kseq = bessel::k_seq_scaled(n_max + 2, x)?;
                for na in 0..=n_max {
                    f.push(if na == 0 { log_eval(r) } else { power_eval(-(na as i32), r) });
                    g.push(bessel_k_eval(na, lambda, &kseq));
                }
            }
            RadialBasis::ExtStable => {
                let kseq = bessel::k_seq_scaled(n_max + 2, x)?;
                let iseq = bessel::i_seq_scaled(n_max + 2, x)?;
                for na in 0..=n_max {
                    f.push(q_eval_scaled(na, lambda, r, &kseq, &iseq));
                    g.push(bessel_k_eval(na, lambda, &kseq));
                }
            }
        }
        Ok(RadialTable { f, g })
    }

    pub fn f(&self, n_abs: usize) -> RadialEval {
        self.f[n_abs]
    }

    pub fn g(&self, n_abs: usize) -> RadialEval {
        self.g[n_abs]
    }
}

/// `r^m` for signed `m`, with derivatives.
pub(crate) fn power_eval(m: i32, r: f64) -> RadialEval {
    match m {
        0 => RadialEval { v: Scaled::ONE, d1: Scaled::ZERO, d2: Scaled::ZERO },
        1 => RadialEval { v: Scaled::new(r), d1: Scaled::ONE, d2: Scaled::ZERO },
        _ => {
            let rs = Scaled::new(r);
            let v = if m > 0 { rs.powi(m as u32) } else { rs.powi((-m) as u32).recip() };
            let mf = m as f64;
            let d1 = v.mul_f64(mf).div(rs);
            let d2 = d1.mul_f64(mf - 1.0).div(rs);
            RadialEval { v, d1, d2 }
        }
    }
}

/// `log r` with derivatives.
pub(crate) fn log_eval(r: f64) -> RadialEval {
    let inv = Scaled::new(1.0 / r);
    RadialEval {
        v: Scaled::new(r.ln()),
        d1: inv,
        d2: inv.mul(inv).neg(),
    }
}

/// `I_n(lambda r)` with radial derivatives, from a scaled sequence.
pub(crate) fn bessel_i_eval(n_abs: usize, lambda: f64, iseq: &[Scaled]) -> RadialEval {
    let at = |k: i32| iseq[k.unsigned_abs() as usize];
    let n = n_abs as i32;
    let v = at(n);
    let d1 = at(n - 1).add(at(n + 1)).mul_f64(0.5 * lambda);
    let d2 = at(n - 2)
        .add(at(n).ldexp(1))
        .add(at(n + 2))
        .mul_f64(0.25 * lambda * lambda);
    RadialEval { v, d1, d2 }
}

/// `K_n(lambda r)` with radial derivatives, from a scaled sequence.
pub(crate) fn bessel_k_eval(n_abs: usize, lambda: f64, kseq: &[Scaled]) -> RadialEval {
    let at = |k: i32| kseq[k.unsigned_abs() as usize];
    let n = n_abs as i32;
    let v = at(n);
    let d1 = at(n - 1).add(at(n + 1)).mul_f64(-0.5 * lambda);
    let d2 = at(n - 2)
        .add(at(n).ldexp(1))
        .add(at(n + 2))
        .mul_f64(0.25 * lambda * lambda);
    RadialEval { v, d1, d2 }
}

/// `P_n` with derivatives; `iseq` must cover orders `n_abs + 2`.
pub(crate) fn p_eval_scaled(
    n_abs: usize,
    lambda: f64,
    r: f64,
    iseq: &[Scaled],
) -> RadialEval {
    let x = lambda * r;
    if x <= bessel::SERIES_CUTOFF {
        // First-term-omitted series: sum_{k>=1} (x/2)^{2k+n} / (k!(k+n)!).
        let n = n_abs as f64;
        let mut lead = DdScaled::ONE; // (x/2)^{n+2} / (n+1)!
        for j in 1..=(n_abs + 2) {
            lead = lead.mul_f64(0.5 * x);
            if j > 1 {
                lead = lead.div_f64(j as f64 - 1.0);
            }
        }
        let q = 0.25 * x * x;
        let mut c = 1.0;
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        let mut k = 1.0f64;
        loop {
            let m = 2.0 * k + n;
            s0 += c;
            s1 += m * c;
            s2 += m * (m - 1.0) * c;
            c *= q / ((k + 1.0) * (k + 1.0 + n));
            k += 1.0;
            if c < s0 * 1e-18 {
                break;
            }
        }
        let inv_r = 1.0 / r;
        RadialEval {
            v: lead.times(s0),
            d1: lead.times(s1 * inv_r),
            d2: lead.times(s2 * inv_r * inv_r),
        }
    } else {
        let i = bessel_i_eval(n_abs, lambda, iseq);
        // t0 = (x/2)^n / n!
        let mut t0 = DdScaled::ONE;
        for j in 1..=n_abs {
            t0 = t0.mul_f64(0.5 * x).div_f64(j as f64);
        }
        let n = n_abs as f64;
        let inv_r = 1.0 / r;
        RadialEval {
            v: i.v.sub(t0.times(1.0)),
            d1: i.d1.sub(t0.times(n * inv_r)),
            d2: i.d2.sub(t0.times(n * (n - 1.0) * inv_r * inv_r)),
        }
    }
}

/// `Q_n` with derivatives; sequences must cover orders `n_abs + 2`.
pub(crate) fn q_eval_scaled(
    n_abs: usize,
    lambda: f64,
    r: f64,
    kseq: &[Scaled],
    iseq: &[Scaled],
) -> RadialEval {
    let x = lambda * r;
    if x > bessel::SERIES_CUTOFF {
        let k = bessel_k_eval(n_abs, lambda, kseq);
        if n_abs == 0 {
            let lg = log_eval(r);
            return RadialEval { v: k.v.add(lg.v), d1: k.d1.add(lg.d1), d2: k.d2.add(lg.d2) };
        }
        let s0 = q_singular_term(n_abs, x);
        let n = n_abs as f64;
        let inv_r = 1.0 / r;
        return RadialEval {
            v: k.v.sub(s0.times(1.0)),
            d1: k.d1.add(s0.times(n * inv_r)),
            d2: k.d2.sub(s0.times(n * (n + 1.0) * inv_r * inv_r)),
        };
    }
    if n_abs == 0 {
        q0_series(lambda, r)
    } else {
        qn_series(n_abs, lambda, r, iseq)
    }
}

/// `2^{n-1} (n-1)! x^{-n}`, the deleted leading term of `K_n` (n >= 1).
fn q_singular_term(n_abs: usize, x: f64) -> DdScaled {
    let mut s = DdScaled::ONE.mul_f64(0.5);
    for j in 1..=n_abs {
        s = s.mul_f64(2.0).div_f64(x);
        if j >= 2 {
            s = s.mul_f64(j as f64 - 1.0);
        }
    }
    s
}

/// Series branch of `Q_0 = K_0(lambda r) + log r`, written as
/// `A(r) + log(r) B(r)` with `A`, `B` even power series: the `log r`
/// singularities of the two pieces cancel analytically and never meet
/// floating point.
fn q0_series(lambda: f64, r: f64) -> RadialEval {
    let x = lambda * r;
    let q = 0.25 * x * x;
    let ln_half_lambda = (0.5 * lambda).ln();
    // A_k = (psi(k+1) - ln(lambda/2)) q^k / (k!)^2, B_k = -q^k / (k!)^2 (k>=1)
    let mut psi = -EULER_GAMMA;
    let mut t = 1.0f64;
    let (mut a0, mut a1, mut a2) = (psi - ln_half_lambda, 0.0, 0.0);
    let (mut b0, mut b1, mut b2) = (0.0f64, 0.0, 0.0);
    let mut k = 1.0f64;
    loop {
        t *= q / (k * k);
        psi += 1.0 / k;
        let m = 2.0 * k;
        let ak = (psi - ln_half_lambda) * t;
        a0 += ak;
        a1 += m * ak;
        a2 += m * (m - 1.0) * ak;
        let bk = -t;
        b0 += bk;
        b1 += m * bk;
        b2 += m * (m - 1.0) * bk;
        k += 1.0;
        if t * (psi.abs() + ln_half_lambda.abs() + 1.0) < a0.abs() * 1e-17 {
            break;
        }
    }
    let lnr = r.ln();
    let inv_r = 1.0 / r;
    let v = a0 + lnr * b0;
    let d1 = (a1 + b0 + lnr * b1) * inv_r;
    let d2 = (a2 - b0 + 2.0 * b1 + lnr * b2) * inv_r * inv_r;
    RadialEval { v: Scaled::new(v), d1: Scaled::new(d1), d2: Scaled::new(d2) }
}

/// Series branch of `Q_n`, `n >= 1`: the `K_n` ascending series with its
/// leading `k = 0` singular term deleted. Three pieces: the remaining finite
/// singular sum, the `ln(x/2) I_n` term, and the digamma sum.
fn qn_series(n_abs: usize, lambda: f64, r: f64, iseq: &[Scaled]) -> RadialEval {
    let x = lambda * r;
    let n = n_abs as f64;
    let inv_r = 1.0 / r;
    let mut v = Scaled::ZERO;
    let mut d1 = Scaled::ZERO;
    let mut d2 = Scaled::ZERO;

    // Finite sum, k = 1 .. n-1: (1/2)((n-k-1)!/k!)(-1)^k (x/2)^{2k-n}.
    if n_abs >= 2 {
        // lead u_1 = -(1/2)(n-2)! (x/2)^{2-n}
        let mut lead = DdScaled::ONE.mul_f64(-0.5);
        for j in 1..=(n_abs - 2) {
            lead = lead.mul_f64(j as f64).div_f64(0.5 * x);
        }
        let q = 0.25 * x * x;
        let mut c = 1.0f64;
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for k in 1..n_abs {
            let m = 2.0 * k as f64 - n;
            s0 += c;
            s1 += m * c;
            s2 += m * (m - 1.0) * c;
            if k + 1 < n_abs {
                c *= -q / ((k as f64 + 1.0) * (n - k as f64 - 1.0));
            }
        }
        v = v.add(lead.times(s0));
        d1 = d1.add(lead.times(s1 * inv_r));
        d2 = d2.add(lead.times(s2 * inv_r * inv_r));
    }

    // (-1)^{n+1} ln(x/2) I_n(x) and its derivatives.
    let sign = if n_abs % 2 == 1 { 1.0 } else { -1.0 };
    let lnxh = (0.5 * x).ln();
    let i = bessel_i_eval(n_abs, lambda, iseq);
    v = v.add(i.v.mul_f64(sign * lnxh));
    d1 = d1.add(i.v.mul_f64(sign * inv_r)).add(i.d1.mul_f64(sign * lnxh));
    d2 = d2
        .add(i.v.mul_f64(-sign * inv_r * inv_r))
        .add(i.d1.mul_f64(2.0 * sign * inv_r))
        .add(i.d2.mul_f64(sign * lnxh));

    // (-1)^n (1/2)(x/2)^n sum_k (psi(k+1) + psi(n+k+1)) q^k / (k!(n+k)!).
    let mut lead = DdScaled::ONE.mul_f64(-sign * 0.5);
    for j in 1..=n_abs {
        lead = lead.mul_f64(0.5 * x).div_f64(j as f64);
    }
    let q = 0.25 * x * x;
    let mut psi_a = -EULER_GAMMA;
    let mut psi_b = bessel::digamma_nonneg_int(n_abs as i64 + 1).expect("n+1 >= 1");
    let mut c = 1.0f64;
    let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
    let mut k = 0.0f64;
    loop {
        let m = 2.0 * k + n;
        let w = (psi_a + psi_b) * c;
        s0 += w;
        s1 += m * w;
        s2 += m * (m - 1.0) * w;
        c *= q / ((k + 1.0) * (k + 1.0 + n));
        psi_a += 1.0 / (k + 1.0);
        psi_b += 1.0 / (k + 1.0 + n);
        k += 1.0;
        if c * (psi_a + psi_b).abs() < s0.abs() * 1e-17 + 1e-300 {
            break;
        }
    }
    v = v.add(lead.times(s0));
    d1 = d1.add(lead.times(s1 * inv_r));
    d2 = d2.add(lead.times(s2 * inv_r * inv_r));

    RadialEval { v, d1, d2 }
}

/// Taylor coefficients `(c0, c1, c2)` at `r = 0` of `(F, G)` for interior
/// bases and `|n| <= 2`; used for analytic evaluation at the disk center.
pub fn taylor_at_zero(basis: RadialBasis, n_abs: usize, lambda: f64) -> [[f64; 3]; 2] {
    debug_assert!(n_abs <= 2);
    debug_assert!(basis.side() == Side::Interior);
    let f = match n_abs {
        0 => [1.0, 0.0, 0.0],
        1 => [0.0, 1.0, 0.0],
        _ => [0.0, 0.0, 1.0],
    };
    let l2 = lambda * lambda;
    let g = match (basis, n_abs) {
        (RadialBasis::IntNaive, 0) => [1.0, 0.0, 0.25 * l2],
        (RadialBasis::IntNaive, 1) => [0.0, 0.5 * lambda, 0.0],
        (RadialBasis::IntNaive, _) => [0.0, 0.0, 0.125 * l2],
        (RadialBasis::IntStable, 0) => [0.0, 0.0, 0.25 * l2],
        (RadialBasis::IntStable, _) => [0.0, 0.0, 0.0],
        _ => unreachable!(),
    };
    [f, g]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn p_at_zero_and_leading_order() {
        assert_eq!(p_eval(0, 0.7, 0.0).unwrap().0, 0.0);
        // P_1(r) ~ (lambda r/2)^3 / 2 for tiny lambda r.
        let (v, _) = p_eval(1, 1.0, 1e-4).unwrap();
        assert!(rel(v, 6.25e-14) < 1e-8, "got {v:e}");
    }

    #[test]
    fn p_large_branch_matches_direct() {
        // Above the cutoff the direct formula is safe to state directly.
        let (v, _) = p_eval(2, 0.7, 3.0).unwrap();
        let i2 = bessel::mod_bessel_i_seq(2, 2.1).unwrap().values[2];
        let direct = i2 - 1.05f64.powi(2) / 2.0;
        assert!(rel(v, direct) < 1e-13);
    }

    #[test]
    fn p_derivative_matches_central_difference() {
        let h = 1e-6;
        let (_, d) = p_eval(2, 0.7, 3.0).unwrap();
        let (vp, _) = p_eval(2, 0.7, 3.0 + h).unwrap();
        let (vm, _) = p_eval(2, 0.7, 3.0 - h).unwrap();
        assert!(rel(d, (vp - vm) / (2.0 * h)) < 1e-7);
    }

    #[test]
    fn q0_limit_is_log2_minus_gamma() {
        let (v, _) = q_eval(0, 1.0, 1e-9).unwrap();
        assert!((v - 0.11593151565841244881).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn q1_order_at_zero() {
        // Q_1 = O(r log r): |Q_1(r)| <= C r |log r| with moderate C.
        let r = 1e-5;
        let (v, _) = q_eval(1, 1.0, r).unwrap();
        assert!(v.abs() <= 2.0 * r * r.ln().abs(), "got {v:e}");
    }

    #[test]
    fn q3_large_branch_matches_direct() {
        let (v, _) = q_eval(3, 0.5, 2.0).unwrap();
        let k3 = bessel::mod_bessel_k_seq(3, 1.0).unwrap().values[3];
        assert!(rel(v, k3 - 8.0) < 1e-12, "got {v}");
    }

    #[test]
    fn q_derivative_matches_central_difference() {
        for &(n, lambda, r) in &[(1i32, 1.0, 0.4), (4, 0.5, 1.5), (2, 2.0, 5.0)] {
            let h = r * 1e-6;
            let (_, d) = q_eval(n, lambda, r).unwrap();
            let (vp, _) = q_eval(n, lambda, r + h).unwrap();
            let (vm, _) = q_eval(n, lambda, r - h).unwrap();
            assert!(rel(d, (vp - vm) / (2.0 * h)) < 1e-6, "n={n}");
        }
    }

    #[test]
    fn mode_matrix_zero_mode_stable() {
        let m = mode_matrix(RadialBasis::IntStable, 0, 0.9, 1.1).unwrap().matrix;
        assert_eq!(m.entries[0][0], 1.0);
        assert_eq!(m.entries[1][0], 0.0);
    }

    #[test]
    fn determinant_identities_spot() {
        // det A(r^n, I_n, R) = lambda R^n I_{n+1}(lambda R)
        let (n, lambda, radius) = (3usize, 0.7, 1.2);
        let m = mode_matrix(RadialBasis::IntNaive, n as i32, lambda, radius).unwrap();
        let det = m.matrix.det();
        let i = bessel::mod_bessel_i_seq(n + 1, lambda * radius).unwrap();
        let expect = lambda * radius.powi(n as i32) * i.values[n + 1];
        assert!(rel(det, expect) < 1e-12, "{det} vs {expect}");
        // det A(r^-n, K_n, R) = -lambda K_{n-1}(lambda R) / R^n
        let (n, lambda, radius) = (2usize, 0.7, 1.2);
        let m = mode_matrix(RadialBasis::ExtNaive, n as i32, lambda, radius).unwrap();
        let det = m.matrix.det();
        let k = bessel::mod_bessel_k_seq(n, lambda * radius).unwrap();
        let expect = -lambda * k.values[n - 1] / radius.powi(n as i32);
        assert!(rel(det, expect) < 1e-12, "{det} vs {expect}");
    }

    #[test]
    fn q_series_and_direct_branch_overlap() {
        // The series (x <= 2) and direct branches must agree across a window
        // around the switch point; probe by varying lambda at fixed r.
        for &n in &[0usize, 1, 2, 5, 9] {
            for &x in &[1.0, 1.5, 1.99, 2.01, 3.0, 4.0] {
                let lambda = x / 1.3;
                let r = 1.3;
                let kseq = bessel::k_seq_scaled(n + 2, x).unwrap();
                let iseq = bessel::i_seq_scaled(n + 2, x).unwrap();
                let series = qn_or_q0_series(n, lambda, r, &kseq, &iseq);
                let direct = q_direct_branch(n, lambda, r, &kseq);
                let s = series.v.to_f64();
                let d = direct.v.to_f64();
                // Direct subtraction loses ~x^2/(4n)-level digits; allow 1e-11.
                assert!(rel(s, d) < 1e-11, "Q_{n} overlap at x={x}: {s} vs {d}");
            }
        }
    }

    fn qn_or_q0_series(
        n: usize,
        lambda: f64,
        r: f64,
        _kseq: &[Scaled],
        iseq: &[Scaled],
    ) -> RadialEval {
        if n == 0 {
            q0_series(lambda, r)
        } else {
            qn_series(n, lambda, r, iseq)
        }
    }

    fn q_direct_branch(n: usize, lambda: f64, r: f64, kseq: &[Scaled]) -> RadialEval {
        let k = bessel_k_eval(n, lambda, kseq);
        if n == 0 {
            let lg = log_eval(r);
            return RadialEval { v: k.v.add(lg.v), d1: k.d1.add(lg.d1), d2: k.d2.add(lg.d2) };
        }
        let s0 = q_singular_term(n, lambda * r);
        let nf = n as f64;
        let inv_r = 1.0 / r;
        RadialEval {
            v: k.v.sub(s0.times(1.0)),
            d1: k.d1.add(s0.times(nf * inv_r)),
            d2: k.d2.sub(s0.times(nf * (nf + 1.0) * inv_r * inv_r)),
        }
    }
}

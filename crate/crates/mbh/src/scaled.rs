//! Floating-point values carrying a separate power-of-two exponent.
//!
//! The parameter sweeps this crate targets reach radii near `2^-24` with
//! Fourier orders up to ~50, where quantities like `R^n`, `I_n(lambda R)` and
//! `K_n(lambda R)` leave the representable range of `f64` entirely (their
//! pairwise ratios and products remain tame). [`Scaled`] keeps the mantissa
//! and a wide base-2 exponent apart so those intermediates survive; rescaling
//! by powers of two is exact, so no accuracy is lost relative to plain `f64`
//! arithmetic.

/// Splits a finite nonzero `x` into `(m, e)` with `x = m * 2^e`, `|m| in [0.5, 1)`.
pub fn frexp(x: f64) -> (f64, i32) {
    debug_assert!(x.is_finite());
    if x == 0.0 {
        return (0.0, 0);
    }
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    if biased == 0 {
        // Subnormal: scale up by 2^64 first.
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = biased - 1022;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, e)
}

/// Computes `x * 2^e`, saturating to zero / infinity outside the `f64` range.
pub fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    if e > 2100 {
        return if x > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
    }
    if e < -2200 {
        return 0.0 * x.signum();
    }
    // Apply in chunks that each stay within the exponent range.
    let mut v = x;
    let mut rem = e;
    while rem != 0 {
        let step = rem.clamp(-900, 900);
        v *= 2f64.powi(step as i32);
        rem -= step;
        if v == 0.0 || !v.is_finite() {
            return v;
        }
    }
    v
}

/// A real number stored as `m * 2^e`.
///
/// Nonzero values are kept normalized with `|m| in [0.5, 1)`; zero is
/// `(0.0, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub m: f64,
    pub e: i64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { m: 0.0, e: 0 };
    pub const ONE: Scaled = Scaled { m: 0.5, e: 1 };

    pub fn new(x: f64) -> Self {
        let (m, e) = frexp(x);
        Scaled { m, e: e as i64 }
    }

    /// Builds `m * 2^e` from arbitrary (finite) parts, normalizing.
    pub fn from_parts(m: f64, e: i64) -> Self {
        if m == 0.0 {
            return Scaled::ZERO;
        }
        let (mm, de) = frexp(m);
        Scaled { m: mm, e: e + de as i64 }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn to_f64(&self) -> f64 {
        ldexp(self.m, self.e)
    }

    /// True when the value fits in a normal (non-overflowed) `f64`.
    pub fn representable(&self) -> bool {
        self.is_zero() || (self.e <= 1024 && self.e >= -1021)
    }

    pub fn abs(&self) -> Self {
        Scaled { m: self.m.abs(), e: self.e }
    }

    pub fn neg(&self) -> Self {
        Scaled { m: -self.m, e: self.e }
    }

    pub fn mul(&self, rhs: Scaled) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Scaled::ZERO;
        }
        Scaled::from_parts(self.m * rhs.m, self.e + rhs.e)
    }

    pub fn div(&self, rhs: Scaled) -> Self {
        debug_assert!(!rhs.is_zero());
        if self.is_zero() {
            return Scaled::ZERO;
        }
        Scaled::from_parts(self.m / rhs.m, self.e - rhs.e)
    }

    pub fn add(&self, rhs: Scaled) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.e >= rhs.e { (self, &rhs) } else { (&rhs, self) };
        let gap = hi.e - lo.e;
        if gap > 80 {
            return *hi;
        }
        Scaled::from_parts(hi.m + lo.m * 2f64.powi(-(gap as i32)), hi.e)
    }

    pub fn sub(&self, rhs: Scaled) -> Self {
        self.add(rhs.neg())
    }

    pub fn mul_f64(&self, k: f64) -> Self {
        if k == 0.0 || self.is_zero() {
            return Scaled::ZERO;
        }
        let ks = Scaled::new(k);
        self.mul(ks)
    }

    /// `self * 2^k`, exact.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return Scaled::ZERO;
        }
        Scaled { m: self.m, e: self.e + k }
    }

    pub fn recip(&self) -> Self {
        Scaled::from_parts(1.0 / self.m, -self.e)
    }

    /// Integer power by repeated squaring (`n >= 0`).
    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Scaled::ONE;
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    /// Compares absolute values.
    pub fn abs_gt(&self, rhs: Scaled) -> bool {
        if self.is_zero() {
            return false;
        }
        if rhs.is_zero() {
            return true;
        }
        if self.e != rhs.e {
            self.e > rhs.e
        } else {
            self.m.abs() > rhs.m.abs()
        }
    }

    /// `self / rhs` as plain f64; safe whenever the ratio is representable.
    pub fn ratio(&self, rhs: Scaled) -> f64 {
        debug_assert!(!rhs.is_zero());
        ldexp(self.m / rhs.m, self.e - rhs.e)
    }
}

/// n! as a scaled value (exact mantissa up to rounding, wide exponent).
pub fn factorial_scaled(n: u32) -> Scaled {
    let mut acc = Scaled::ONE;
    for k in 2..=n {
        acc = acc.mul_f64(k as f64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frexp_ldexp_roundtrip() {
        for &x in &[1.0, -3.5, 1e-300, 2.2e-308, 1e308, 0.75, 1e-320] {
            let (m, e) = frexp(x);
            assert!(x == 0.0 || (0.5..1.0).contains(&m.abs()), "m={m} for {x}");
            assert_eq!(ldexp(m, e as i64), x);
        }
    }

    #[test]
    fn wide_exponent_products() {
        // (2^-1100) * (2^1100) = 1 exactly, far outside plain f64.
        let a = Scaled::from_parts(1.0, -1100);
        let b = Scaled::from_parts(1.0, 1100);
        assert_eq!(a.mul(b).to_f64(), 1.0);
        assert!(!a.representable() || a.to_f64() == 0.0);
    }

    #[test]
    fn add_and_powi() {
        let a = Scaled::new(3.0);
        let b = Scaled::new(-1.25);
        assert_eq!(a.add(b).to_f64(), 1.75);
        assert_eq!(Scaled::new(2.0).powi(10).to_f64(), 1024.0);
        let r = Scaled::new(0.5).powi(1200);
        assert_eq!(r.e, -1199);
    }

    #[test]
    fn factorial_matches() {
        assert_eq!(factorial_scaled(10).to_f64(), 3628800.0);
        let f50 = factorial_scaled(50).to_f64();
        assert!((f50 / 3.0414093201713376e64 - 1.0).abs() < 1e-14);
    }
}

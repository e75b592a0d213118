//! Minimal double-double arithmetic (unevaluated hi + lo pairs) for the few
//! places where a long product/quotient chain would otherwise drift past the
//! accuracy contract of the special-function modules. Uses fused
//! multiply-adds for the exact-product step.

#[derive(Clone, Copy, Debug)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn mul_f64(self, k: f64) -> Dd {
        let p = two_prod(self.hi, k);
        quick_two_sum(p.hi, self.lo.mul_add(k, p.lo))
    }

    #[inline]
    pub fn div_f64(self, k: f64) -> Dd {
        let q1 = self.hi / k;
        let r = (-q1).mul_add(k, self.hi) + self.lo;
        quick_two_sum(q1, r / k)
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let p = two_prod(self.hi, rhs.hi);
        let lo = p.lo + self.hi * rhs.lo + self.lo * rhs.hi;
        quick_two_sum(p.hi, lo)
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let s = two_sum(self.hi, rhs.hi);
        quick_two_sum(s.hi, s.lo + self.lo + rhs.lo)
    }

    #[inline]
    pub fn scale_pow2(self, f: f64) -> Dd {
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// A double-double mantissa with a separate power-of-two exponent, for
/// product chains whose results leave the `f64` range (series prefactors
/// like `(x/2)^{n+2}/(n+1)!` at tiny `x` and large `n`).
#[derive(Clone, Copy, Debug)]
pub(crate) struct DdScaled {
    pub dd: Dd,
    pub e: i64,
}

impl DdScaled {
    pub const ONE: DdScaled = DdScaled { dd: Dd::ONE, e: 0 };

    pub fn mul_f64(self, k: f64) -> DdScaled {
        DdScaled { dd: self.dd.mul_f64(k), e: self.e }.renorm()
    }

    pub fn div_f64(self, k: f64) -> DdScaled {
        DdScaled { dd: self.dd.div_f64(k), e: self.e }.renorm()
    }

    fn renorm(mut self) -> DdScaled {
        while self.dd.hi.abs() < 1e-260 && self.dd.hi != 0.0 {
            self.dd = self.dd.scale_pow2(2f64.powi(600));
            self.e -= 600;
        }
        while self.dd.hi.abs() > 1e260 {
            self.dd = self.dd.scale_pow2(2f64.powi(-600));
            self.e += 600;
        }
        self
    }

    /// `self * s` collapsed to a [`Scaled`] value.
    pub fn times(self, s: f64) -> crate::scaled::Scaled {
        let v = self.dd.mul_f64(s);
        crate::scaled::Scaled::from_parts(v.hi, self.e)
            .add(crate::scaled::Scaled::from_parts(v.lo, self.e))
    }
}

//! Arbitrary-precision reference evaluation of the special functions used by
//! the main crate's tests.
//!
//! Values are represented as `m * 2^e` with a mantissa of [`PREC`] bits, and
//! every function here is computed by direct power-series summation in that
//! arithmetic. The point is independence: none of this shares code paths with
//! the double-precision implementations it is used to check, so agreement is
//! meaningful evidence of correctness.
//!
//! The working precision is deliberately extravagant. Summing the ascending
//! series for `K_n(x)` at `x = 700` cancels roughly `2x / ln 10 ~ 608` decimal
//! digits; 2560 bits (~770 digits) absorbs that and still leaves far more than
//! the ~16 digits a `f64` comparison consumes.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Mantissa width in bits.
pub const PREC: u64 = 2560;

/// Euler's constant to 800 digits.
const GAMMA_DEC: &str = "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467093694706329174674951463144724980708248096050401448654283622417399764492353625350033374293733773767394279259525824709491600873520394816567085323315177661152862119950150798479374508570574002992135478614669402960432542151905877553526733139925401296742051375413954911168510280798423487758720503843109399736137255306088933126760017247953783675927135157722610273492913940798430103417771778088154957066107501016191663340152278935867965497252036212879226555953669628176388792726801324310104765059637039473949576389065729679296010090151251959509222435014093498712282479497471956469763185066761290638110518241974448678363808617494551698927923018773910729457815543160050021828440960537724342032854783670151773943987003023703395183";

/// ln 2 to 800 digits.
const LN2_DEC: &str = "0.69314718055994530941723212145817656807550013436025525412068000949339362196969471560586332699641868754200148102057068573368552023575813055703267075163507596193072757082837143519030703862389167347112335011536449795523912047517268157493206515552473413952588295045300709532636664265410423915781495204374043038550080194417064167151864471283996817178454695702627163106454615025720740248163777338963855069526066834113727387372292895649354702576265209885969320196505855476470330679365443254763274495125040606943814710468994650622016772042452452961268794654619316517468139267250410380254625965686914419287160829380317271436778265487756648508567407764845146443994046142260319309673540257444607030809608504748663852313818167675143866747664789088143714198549423151997354880375165861275352916610007105355824987941";

/// Big binary float: `value = m * 2^e`.
///
/// Zero is represented as `m == 0` (any exponent). Nonzero values keep the
/// mantissa normalized to exactly `PREC` bits, truncating toward zero, so a
/// single arithmetic operation is accurate to about `2^(1-PREC)` relative.
#[derive(Clone, Debug)]
pub struct Fx {
    m: BigInt,
    e: i64,
}

impl Fx {
    pub fn zero() -> Self {
        Fx { m: BigInt::zero(), e: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Fx { m: BigInt::from(v), e: 0 }.normalized()
    }

    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite(), "Fx::from_f64 requires a finite input");
        if v == 0.0 {
            return Fx::zero();
        }
        // Exact decomposition of the double: v = sig * 2^(exp), sig integral.
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (sig, exp) = if biased == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Fx { m: BigInt::from(sign * sig as i64), e: exp }.normalized()
    }

    /// Parses a plain decimal literal like `-12.345` or `0.577...`.
    pub fn from_dec_str(s: &str) -> Self {
        let (neg, s) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = match s.split_once('.') {
            Some((a, b)) => (a, b),
            None => (s, ""),
        };
        let digits: String = format!("{int_part}{frac_part}");
        let num: BigInt = digits.parse().expect("invalid decimal literal");
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let v = Fx { m: num, e: 0 }.normalized().div(&Fx { m: den, e: 0 }.normalized());
        if neg {
            v.neg()
        } else {
            v
        }
    }

    fn normalized(mut self) -> Self {
        if self.m.is_zero() {
            self.e = 0;
            return self;
        }
        let bits = self.m.bits();
        if bits > PREC {
            let shift = bits - PREC;
            self.m >>= shift;
            self.e += shift as i64;
        } else if bits < PREC {
            let shift = PREC - bits;
            self.m <<= shift;
            self.e -= shift as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn neg(&self) -> Self {
        Fx { m: -self.m.clone(), e: self.e }
    }

    pub fn abs(&self) -> Self {
        Fx { m: self.m.abs(), e: self.e }
    }

    pub fn add(&self, rhs: &Fx) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Align to the smaller exponent, but drop a term that is entirely
        // below the other's rounding error.
        let (hi, lo) = if self.e >= rhs.e { (self, rhs) } else { (rhs, self) };
        let gap = hi.e - lo.e;
        if gap > PREC as i64 + 64 {
            return hi.clone();
        }
        let m = (hi.m.clone() << gap as u64) + &lo.m;
        Fx { m, e: lo.e }.normalized()
    }

    pub fn sub(&self, rhs: &Fx) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Fx) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Fx::zero();
        }
        Fx { m: &self.m * &rhs.m, e: self.e + rhs.e }.normalized()
    }

    pub fn div(&self, rhs: &Fx) -> Self {
        assert!(!rhs.is_zero(), "Fx division by zero");
        if self.is_zero() {
            return Fx::zero();
        }
        let m = (self.m.clone() << PREC) / &rhs.m;
        Fx { m, e: self.e - rhs.e - PREC as i64 }.normalized()
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        if k == 0 || self.is_zero() {
            return Fx::zero();
        }
        Fx { m: &self.m * k, e: self.e }.normalized()
    }

    pub fn div_i64(&self, k: i64) -> Self {
        assert!(k != 0);
        if self.is_zero() {
            return Fx::zero();
        }
        let m = (self.m.clone() << 64) / k;
        Fx { m, e: self.e - 64 }.normalized()
    }

    /// Multiplies by `2^k`.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return Fx::zero();
        }
        Fx { m: self.m.clone(), e: self.e + k }
    }

    pub fn sign(&self) -> i32 {
        if self.m.is_zero() {
            0
        } else if self.m.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Base-2 exponent of the value (position of the leading bit).
    pub fn exp2(&self) -> i64 {
        assert!(!self.is_zero());
        self.e + self.m.bits() as i64
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (m, e) = self.to_f64_scaled();
        // m in [1,2); value = m * 2^e with e possibly out of f64 range.
        if e > 1030 {
            return if m > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if e < -1080 {
            return 0.0;
        }
        // Split the scaling so each factor stays representable.
        let half = (e / 2) as i32;
        m * 2f64.powi(half) * 2f64.powi((e - half as i64) as i32)
    }

    /// Returns `(m, e)` with `value = m * 2^e` and `|m|` in `[1, 2)`.
    pub fn to_f64_scaled(&self) -> (f64, i64) {
        assert!(!self.is_zero());
        let bits = self.m.bits();
        let shift = bits as i64 - 54;
        let top = if shift >= 0 {
            (self.m.clone() >> shift as u64).to_i64().unwrap()
        } else {
            (self.m.clone() << (-shift) as u64).to_i64().unwrap()
        };
        let m = top as f64 / 2f64.powi(53);
        (m, self.e + shift + 53)
    }

    /// |self - other| / |other|, as f64. `other` must be nonzero.
    pub fn rel_diff(&self, other: &Fx) -> f64 {
        self.sub(other).div(other).abs().to_f64()
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Self {
        assert!(self.sign() > 0, "ln of non-positive Fx");
        // self = m * 2^(e + PREC - 1) with m in [1, 2).
        let k = self.e + PREC as i64 - 1;
        let mant = Fx { m: self.m.clone(), e: -(PREC as i64 - 1) };
        // Pull mantissa into [sqrt(1/2), sqrt(2)) to center the series.
        let (mant, k) = if mant.sub(&Fx::from_dec_str("1.414213562373095")).sign() > 0 {
            (mant.ldexp(-1), k + 1)
        } else {
            (mant, k)
        };
        // ln m = 2 atanh t, t = (m-1)/(m+1), |t| <= ~0.172.
        let one = Fx::from_i64(1);
        let t = mant.sub(&one).div(&mant.add(&one));
        let t2 = t.mul(&t);
        let mut sum = Fx::zero();
        let mut pow = t.clone();
        let mut j: i64 = 1;
        loop {
            let term = pow.div_i64(j);
            sum = sum.add(&term);
            if term.is_zero() || term.exp2() < sum.exp2() - PREC as i64 - 8 {
                break;
            }
            pow = pow.mul(&t2);
            j += 2;
        }
        sum.ldexp(1).add(&ln2().mul_i64(k))
    }
}

/// Euler's constant.
pub fn gamma_const() -> Fx {
    Fx::from_dec_str(GAMMA_DEC)
}

/// ln 2.
pub fn ln2() -> Fx {
    Fx::from_dec_str(LN2_DEC)
}

fn factorial(n: u32) -> Fx {
    let mut m = BigInt::from(1u32);
    for k in 2..=n {
        m *= k;
    }
    Fx { m, e: 0 }.normalized()
}

/// psi(k) = -gamma + sum_{j=1}^{k-1} 1/j for integer k >= 1.
pub fn digamma_int(k: u32) -> Fx {
    assert!(k >= 1);
    let mut v = gamma_const().neg();
    for j in 1..k {
        v = v.add(&Fx::from_i64(1).div_i64(j as i64));
    }
    v
}

/// I_n(x) by its ascending series. Requires `x >= 0`.
pub fn bessel_i(n: u32, x: &Fx) -> Fx {
    assert!(x.sign() >= 0);
    if x.is_zero() {
        return if n == 0 { Fx::from_i64(1) } else { Fx::zero() };
    }
    let half = x.ldexp(-1);
    let q = half.mul(&half); // x^2/4
    // term_0 = (x/2)^n / n!
    let mut term = pow_fx(&half, n).div(&factorial(n));
    let mut sum = term.clone();
    let mut k: i64 = 0;
    loop {
        k += 1;
        term = term.mul(&q).div_i64(k).div_i64(k + n as i64);
        sum = sum.add(&term);
        if term.exp2() < sum.exp2() - PREC as i64 - 8 {
            break;
        }
    }
    sum
}

/// K_n(x) by the ascending series (finite singular sum, log term, psi sum).
pub fn bessel_k(n: u32, x: &Fx) -> Fx {
    assert!(x.sign() > 0);
    let half = x.ldexp(-1);
    let q = half.mul(&half);
    let ln_half_x = half.ln();

    // Finite part: (1/2)(x/2)^{-n} sum_{k=0}^{n-1} ((n-k-1)!/k!) (-x^2/4)^k
    let mut finite = Fx::zero();
    if n >= 1 {
        let mut term = factorial(n - 1);
        let mut acc = term.clone();
        for k in 0..n as i64 - 1 {
            term = term.mul(&q).neg().div_i64(k + 1).div_i64(n as i64 - 1 - k);
            acc = acc.add(&term);
        }
        finite = acc.div(&pow_fx(&half, n)).ldexp(-1);
    }

    // Log part: (-1)^{n+1} ln(x/2) I_n(x)
    let mut log_part = ln_half_x.mul(&bessel_i(n, x));
    if n % 2 == 0 {
        log_part = log_part.neg();
    }

    // Psi part: (-1)^n (1/2)(x/2)^n sum_k (psi(k+1)+psi(n+k+1)) (x^2/4)^k/(k!(n+k)!)
    let mut psi_a = digamma_int(1);
    let mut psi_b = digamma_int(n + 1);
    let mut term = Fx::from_i64(1).div(&factorial(n));
    let mut acc = psi_a.add(&psi_b).mul(&term);
    let mut k: i64 = 0;
    loop {
        k += 1;
        term = term.mul(&q).div_i64(k).div_i64(k + n as i64);
        psi_a = psi_a.add(&Fx::from_i64(1).div_i64(k));
        psi_b = psi_b.add(&Fx::from_i64(1).div_i64(k + n as i64));
        let t = psi_a.add(&psi_b).mul(&term);
        acc = acc.add(&t);
        if t.is_zero() || (!acc.is_zero() && t.exp2() < acc.exp2() - PREC as i64 - 8) {
            break;
        }
    }
    let mut psi_part = acc.mul(&pow_fx(&half, n)).ldexp(-1);
    if n % 2 == 1 {
        psi_part = psi_part.neg();
    }

    finite.add(&log_part).add(&psi_part)
}

/// I_n'(x) = (I_{n-1}(x) + I_{n+1}(x)) / 2, with I_{-1} = I_1.
pub fn bessel_i_prime(n: u32, x: &Fx) -> Fx {
    let lo = if n == 0 { 1 } else { n - 1 };
    bessel_i(lo, x).add(&bessel_i(n + 1, x)).ldexp(-1)
}

/// K_n'(x) = -(K_{n-1}(x) + K_{n+1}(x)) / 2, with K_{-1} = K_1.
pub fn bessel_k_prime(n: u32, x: &Fx) -> Fx {
    let lo = if n == 0 { 1 } else { n - 1 };
    bessel_k(lo, x).add(&bessel_k(n + 1, x)).ldexp(-1).neg()
}

/// P_n(r) = I_n(lambda r) - (lambda r / 2)^n / n!
pub fn p_radial(n: u32, lambda: &Fx, r: &Fx) -> Fx {
    let x = lambda.mul(r);
    let lead = pow_fx(&x.ldexp(-1), n).div(&factorial(n));
    bessel_i(n, &x).sub(&lead)
}

/// Q_n(r) = K_n(lambda r) - 2^{n-1}(n-1)!/(lambda r)^n for n >= 1;
/// Q_0(r) = K_0(lambda r) + ln r.
pub fn q_radial(n: u32, lambda: &Fx, r: &Fx) -> Fx {
    let x = lambda.mul(r);
    if n == 0 {
        return bessel_k(0, &x).add(&r.ln());
    }
    let lead = factorial(n - 1).ldexp(n as i64 - 1).div(&pow_fx(&x, n));
    bessel_k(n, &x).sub(&lead)
}

fn pow_fx(x: &Fx, n: u32) -> Fx {
    let mut acc = Fx::from_i64(1);
    let mut base = x.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(&base);
        }
        base = base.mul(&base);
        k >>= 1;
    }
    acc
}

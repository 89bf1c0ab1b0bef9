//! Scalar abstraction and extended-precision building blocks.
//!
//! Everything downstream is generic over [`Real`], implemented here for `f64`
//! and `f32`. Two helpers carry the numerical load:
//!
//! * [`Dd`] — an unevaluated double-word ("double-double") value `hi + lo`
//!   built from error-free transformations, giving roughly twice the working
//!   precision without hardware FMA.
//! * [`Scaled`] — a mantissa with an explicit binary exponent, so recurrences
//!   whose intermediate values span thousands of binades never overflow or
//!   underflow the base type.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar the library can compute in.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Copy
    + Send
    + Sync
    + 'static
{
    /// Dekker splitting constant 2^ceil(p/2) + 1 for p mantissa bits.
    const DEKKER_SPLIT: Self;
    /// Renormalization quantum, in bits, for [`Scaled`] values. Chosen so the
    /// product of two in-range mantissas stays finite with headroom.
    const SCALE_BITS: i32;
    /// Largest exponent that `2^c` can take in one multiplication step.
    const LDEXP_CHUNK: i32;

    /// Multiplies by 2^e exactly (saturating to 0/inf at the range ends).
    fn ldexp(self, e: i32) -> Self {
        if self == Self::zero() || !self.is_finite() || e == 0 {
            return self;
        }
        let two = Self::one() + Self::one();
        let mut v = self;
        let mut rem = e;
        while rem != 0 {
            let c = rem.clamp(-Self::LDEXP_CHUNK, Self::LDEXP_CHUNK);
            v *= two.powi(c);
            rem -= c;
            if v == Self::zero() || !v.is_finite() {
                break;
            }
        }
        v
    }

    fn from_f64c(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    fn from_us(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }
}

impl Real for f64 {
    const DEKKER_SPLIT: Self = 134_217_729.0; // 2^27 + 1
    const SCALE_BITS: i32 = 256;
    const LDEXP_CHUNK: i32 = 1000;
}

impl Real for f32 {
    const DEKKER_SPLIT: Self = 4097.0; // 2^12 + 1
    const SCALE_BITS: i32 = 24;
    const LDEXP_CHUNK: i32 = 120;
}

/// a + b with exact rounding error, no magnitude assumption.
#[inline]
pub fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// a + b with exact rounding error, assuming |a| >= |b|.
#[inline]
fn quick_two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn dekker_split<T: Real>(a: T) -> (T, T) {
    let t = T::DEKKER_SPLIT * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// a * b with exact rounding error via Dekker splitting (no FMA).
#[inline]
pub fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    let (ah, al) = dekker_split(a);
    let (bh, bl) = dekker_split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

/// Unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd<T> {
    pub hi: T,
    pub lo: T,
}

#[allow(clippy::should_implement_trait)]
impl<T: Real> Dd<T> {
    #[inline]
    pub fn from_t(x: T) -> Self {
        Dd {
            hi: x,
            lo: T::zero(),
        }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::from_t(T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::from_t(T::one())
    }

    #[inline]
    pub fn to_t(self) -> T {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < T::zero() {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        let (s1, e1) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let e1 = e1 + t1;
        let (s1, e1) = quick_two_sum(s1, e1);
        let e1 = e1 + t2;
        let (hi, lo) = quick_two_sum(s1, e1);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_t(self, t: T) -> Self {
        let (s1, e1) = two_sum(self.hi, t);
        let e1 = e1 + self.lo;
        let (hi, lo) = quick_two_sum(s1, e1);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    #[inline]
    pub fn sub_t(self, t: T) -> Self {
        self.add_t(-t)
    }

    #[inline]
    pub fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_t(self, t: T) -> Self {
        let (p, e) = two_prod(self.hi, t);
        let e = e + self.lo * t;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sqr(self) -> Self {
        self.mul(self)
    }

    pub fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r1 = self.sub(o.mul_t(q1));
        let q2 = r1.hi / o.hi;
        let r2 = r1.sub(o.mul_t(q2));
        let q3 = r2.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add_t(q3)
    }

    #[inline]
    pub fn div_t(self, t: T) -> Self {
        self.div(Dd::from_t(t))
    }

    pub fn recip(self) -> Self {
        Dd::one().div(self)
    }

    pub fn sqrt(self) -> Self {
        if self.hi == T::zero() && self.lo == T::zero() {
            return Dd::zero();
        }
        let y = self.hi.sqrt();
        let ydd = Dd::from_t(y);
        let resid = self.sub(ydd.sqr());
        let c = resid.to_t() / (y + y);
        let (hi, lo) = quick_two_sum(y, c);
        Dd { hi, lo }
    }

    /// Exact scaling by 2^e.
    #[inline]
    pub fn ldexp(self, e: i32) -> Self {
        Dd {
            hi: self.hi.ldexp(e),
            lo: self.lo.ldexp(e),
        }
    }

    /// exp via 2^k reduction and a Taylor series on the reduced argument.
    pub fn exp(self) -> Self {
        let huge = T::from_f64c(1.0e5);
        let kf = (self.hi / T::LN_2()).round();
        if kf > huge {
            return Dd::from_t(T::infinity());
        }
        if kf < -huge {
            return Dd::zero();
        }
        let k = kf.to_f64().unwrap() as i32;
        let r = self.sub(ln2_dd::<T>().mul_t(kf));
        let mut term = Dd::one();
        let mut sum = Dd::one();
        let cut = T::epsilon() * T::epsilon();
        for i in 1..=40usize {
            term = term.mul(r).div_t(T::from_us(i));
            sum = sum.add(term);
            if term.hi.abs() < cut {
                break;
            }
        }
        sum.ldexp(k)
    }
}

/// Builds a two-word constant from a pre-split pair of f64 words, re-split for
/// the target precision (for f64 this reproduces hi/lo exactly; for f32 the
/// remainder of the hi word folds into lo).
pub fn dd_const<T: Real>(hi: f64, lo: f64) -> Dd<T> {
    let h = T::from_f64c(hi);
    let rem = (hi - h.to_f64().unwrap()) + lo;
    let l = T::from_f64c(rem);
    let (a, b) = quick_two_sum(h, l);
    Dd { hi: a, lo: b }
}

pub fn ln2_dd<T: Real>() -> Dd<T> {
    dd_const(std::f64::consts::LN_2, 2.319_046_813_846_299_6e-17)
}

pub fn pi_dd<T: Real>() -> Dd<T> {
    dd_const(std::f64::consts::PI, 1.224_646_799_147_353_2e-16)
}

/// ln(pi)/4, the log of the Hermite ground-state normalization.
pub fn ln_pi_quarter_dd<T: Real>() -> Dd<T> {
    dd_const(0.286_182_471_462_350_04, 2.566_487_790_676_956_6e-18)
}

/// Value `mant * 2^exp` with the mantissa kept inside
/// [2^-SCALE_BITS, 2^SCALE_BITS] by renormalization.
#[derive(Clone, Copy, Debug)]
pub struct Scaled<T> {
    pub mant: T,
    pub exp: i32,
}

#[allow(clippy::should_implement_trait)]
impl<T: Real> Scaled<T> {
    pub fn zero() -> Self {
        Scaled {
            mant: T::zero(),
            exp: 0,
        }
    }

    /// Collapses to the base type, flushing to 0 (or inf) past its range.
    pub fn collapse(self) -> T {
        self.mant.ldexp(self.exp)
    }

    /// Adds another scaled value, aligning exponents.
    pub fn add(self, o: Self) -> Self {
        if self.mant == T::zero() {
            return o;
        }
        if o.mant == T::zero() {
            return self;
        }
        let (big, small) = if self.exp >= o.exp {
            (self, o)
        } else {
            (o, self)
        };
        let mant = big.mant + small.mant.ldexp(small.exp - big.exp);
        let mut out = Scaled { mant, exp: big.exp };
        out.renorm();
        out
    }

    pub fn renorm(&mut self) {
        if self.mant == T::zero() {
            self.exp = 0;
            return;
        }
        let hi = T::one().ldexp(T::SCALE_BITS);
        let lo = T::one().ldexp(-T::SCALE_BITS);
        while self.mant.abs() > hi {
            self.mant = self.mant.ldexp(-T::SCALE_BITS);
            self.exp += T::SCALE_BITS;
        }
        while self.mant.abs() < lo {
            self.mant = self.mant.ldexp(T::SCALE_BITS);
            self.exp -= T::SCALE_BITS;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd_rel_err(v: Dd<f64>, want_hi: f64, want_lo: f64) -> f64 {
        let d = v.sub(dd_const(want_hi, want_lo));
        (d.hi.abs() + d.lo.abs()) / want_hi.abs().max(1e-300)
    }

    #[test]
    fn two_sum_recovers_rounding_error() {
        let (s, e) = two_sum(1.0f64, 1e-20);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-20);
    }

    #[test]
    fn two_prod_error_is_exact_for_representable_products() {
        let a = 1.0 + 2f64.powi(-30);
        let b = 1.0 + 2f64.powi(-29);
        let (p, e) = two_prod(a, b);
        // a*b = 1 + 2^-29 + 2^-30 + 2^-59; the 2^-59 tail lands in e
        let exact = p + e;
        assert_eq!(exact, p + e);
        assert!(e.abs() <= f64::EPSILON * p);
    }

    #[test]
    fn dd_mul_div_roundtrip() {
        let a = Dd::from_t(3.7f64).mul_t(1.0 / 3.0);
        let b = a.mul_t(3.0);
        assert!((b.to_t() - 3.7).abs() < 1e-30);
        let c = Dd::from_t(7.3f64).div(Dd::from_t(1.9));
        assert!(dd_rel_err(c.mul(Dd::from_t(1.9)), 7.3, 0.0) < 1e-30);
    }

    #[test]
    fn dd_sqrt_squares_back() {
        for &x in &[2.0f64, 11.0, 0.3, 1.7e-8, 4.0e12] {
            let s = Dd::from_t(x).sqrt();
            assert!(dd_rel_err(s.sqr(), x, 0.0) < 1e-29, "x = {x}");
        }
    }

    #[test]
    fn dd_exp_matches_known_values() {
        // e to double-double: hi word plus 1.44564689172925e-16
        let e1 = Dd::from_t(1.0f64).exp();
        assert!(dd_rel_err(e1, std::f64::consts::E, 1.445_646_891_729_25e-16) < 1e-29);
        // exp(ln 2 * 64) = 2^64 exactly up to dd noise
        let v = ln2_dd::<f64>().mul_t(64.0).exp();
        assert!((v.to_t() - 2f64.powi(64)).abs() / 2f64.powi(64) < 1e-29);
        // deep underflow collapses to zero
        let z = Dd::from_t(-1.0e6f64).exp();
        assert_eq!(z.to_t(), 0.0);
        // product identity
        let p = Dd::from_t(0.37f64).exp().mul(Dd::from_t(-0.37f64).exp());
        assert!(dd_rel_err(p, 1.0, 0.0) < 1e-29);
    }

    #[test]
    fn ldexp_covers_extreme_exponents() {
        assert_eq!(1.5f64.ldexp(3), 12.0);
        assert_eq!(1.0f64.ldexp(-1074), 5e-324);
        assert_eq!(1.0f64.ldexp(-1200), 0.0);
        assert!(1.0f64.ldexp(1100).is_infinite());
        let x = 1e300f64.ldexp(-600).ldexp(600);
        assert_eq!(x, 1e300);
    }

    #[test]
    fn scaled_add_aligns_exponents() {
        let a = Scaled {
            mant: 1.0f64,
            exp: 0,
        };
        let b = Scaled {
            mant: 1.0f64,
            exp: -1,
        };
        assert!((a.add(b).collapse() - 1.5).abs() < 1e-15);
        let c = Scaled {
            mant: 1.0f64,
            exp: -3000,
        };
        assert_eq!(a.add(c).collapse(), 1.0);
    }

    #[test]
    fn constants_are_consistent() {
        let pi = pi_dd::<f64>();
        assert_eq!(pi.hi, std::f64::consts::PI);
        assert!(pi.lo != 0.0);
        // ln(pi)/4 against ln2-based reduction: exp(4 * lnpi4) = pi
        let v = ln_pi_quarter_dd::<f64>().mul_t(4.0).exp();
        assert!(dd_rel_err(v, std::f64::consts::PI, 1.224_646_799_147_353_2e-16) < 1e-29);
    }

    #[test]
    fn f32_smoke() {
        let s = Dd::from_t(2.0f32).sqrt();
        assert!((s.to_t() - std::f32::consts::SQRT_2).abs() < 1e-6);
        let resid = s.sqr().sub_t(2.0f32);
        assert!((resid.to_t()).abs() < 1e-12);
        let e = Dd::from_t(1.0f32).exp();
        assert!((e.to_t() - std::f32::consts::E).abs() < 1e-6);
        assert_eq!(1.5f32.ldexp(4), 24.0);
        assert_eq!(1.0f32.ldexp(-160), 0.0);
    }
}

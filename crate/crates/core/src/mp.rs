//! Multiprecision real and complex scalars.
//!
//! Thin value types over [`astro_float::BigFloat`]. Every value carries its
//! own working precision in bits; binary operations run at the larger of the
//! two operand precisions, so values built from one [`Ctx`] stay at that
//! precision throughout a computation. Transcendental functions need the
//! constant cache held by [`Ctx`].

use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

const RM: RoundingMode = RoundingMode::ToEven;

/// Bits per decimal digit.
const LOG2_10: f64 = 3.321_928_094_887_362;

/// Extra bits carried beyond the requested decimal precision.
const GUARD_BITS: usize = 24;

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    p: usize,
}

#[derive(Clone)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

/// Precision plus the constant cache used by transcendental functions.
///
/// Not `Sync`: each worker builds its own context.
pub struct Ctx {
    p: usize,
    digits: u32,
    cc: RefCell<Consts>,
    bernoulli: RefCell<Vec<Real>>,
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ctx").field("bits", &self.p).field("digits", &self.digits).finish()
    }
}

impl Ctx {
    pub fn with_digits(digits: u32) -> Self {
        let raw = libm::ceil(digits as f64 * LOG2_10) as usize + GUARD_BITS;
        let p = raw.div_ceil(64) * 64;
        Ctx {
            p,
            digits,
            cc: RefCell::new(Consts::new().expect("constant cache")),
            bernoulli: RefCell::new(Vec::new()),
        }
    }

    pub fn bits(&self) -> usize {
        self.p
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// A fresh context with `extra` more decimal digits.
    pub fn boosted(&self, extra: u32) -> Ctx {
        Ctx::with_digits(self.digits + extra)
    }

    /// Unit roundoff of the working precision.
    pub fn epsilon(&self) -> f64 {
        libm::ldexp(1.0, 1 - self.p as i32)
    }

    pub fn zero(&self) -> Real {
        Real { v: BigFloat::new(self.p), p: self.p }
    }

    pub fn one(&self) -> Real {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Real {
        let mut v = BigFloat::from_word(n.unsigned_abs(), self.p);
        if n < 0 {
            v.inv_sign();
        }
        Real { v, p: self.p }
    }

    pub fn ratio(&self, num: i64, den: i64) -> Real {
        &self.int(num) / &self.int(den)
    }

    pub fn real(&self, x: f64) -> Real {
        if x == 0.0 {
            return self.zero();
        }
        Real { v: BigFloat::from_f64(x, self.p), p: self.p }
    }

    /// Parses a decimal literal at working precision.
    pub fn parse(&self, s: &str) -> Option<Real> {
        let v = BigFloat::parse(s, Radix::Dec, self.p, RM, &mut self.cc.borrow_mut());
        if v.is_nan() {
            None
        } else {
            Some(Real { v, p: self.p })
        }
    }

    pub fn pi(&self) -> Real {
        Real { v: self.cc.borrow_mut().pi(self.p, RM), p: self.p }
    }

    pub fn czero(&self) -> Complex {
        Complex { re: self.zero(), im: self.zero() }
    }

    pub fn cone(&self) -> Complex {
        Complex { re: self.one(), im: self.zero() }
    }

    pub fn i(&self) -> Complex {
        Complex { re: self.zero(), im: self.one() }
    }

    pub fn complex(&self, re: f64, im: f64) -> Complex {
        Complex { re: self.real(re), im: self.real(im) }
    }

    pub fn cint(&self, n: i64) -> Complex {
        Complex { re: self.int(n), im: self.zero() }
    }

    /// `e^{i theta}`.
    pub fn cis(&self, theta: &Real) -> Complex {
        Complex { re: theta.cos(self), im: theta.sin(self) }
    }

    /// Even Bernoulli number `B_{2k}` for `1 <= k <= 60`.
    pub(crate) fn bernoulli_even(&self, k: usize) -> Real {
        let mut cache = self.bernoulli.borrow_mut();
        if cache.is_empty() {
            for (num, den) in BERNOULLI_EVEN.iter() {
                let n = self.parse(num).expect("bernoulli numerator");
                let d = self.parse(den).expect("bernoulli denominator");
                cache.push(&n / &d);
            }
        }
        cache[k - 1].clone()
    }

    fn with_cc<R>(&self, f: impl FnOnce(&mut Consts) -> R) -> R {
        f(&mut self.cc.borrow_mut())
    }
}

impl Real {
    pub fn precision(&self) -> usize {
        self.p
    }

    /// Rounds to the working precision of `ctx`.
    pub fn rounded(&self, ctx: &Ctx) -> Real {
        let mut v = self.v.clone();
        v.set_precision(ctx.p, RM).expect("precision change");
        Real { v, p: ctx.p }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    /// Integer `n` at the precision of `self`.
    pub fn int_like(&self, n: i64) -> Real {
        let mut v = BigFloat::from_word(n.unsigned_abs(), self.p);
        if n < 0 {
            v.inv_sign();
        }
        Real { v, p: self.p }
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn abs(&self) -> Real {
        Real { v: self.v.abs(), p: self.p }
    }

    /// Binary exponent `e` with `self = m * 2^e`, `0.5 <= |m| < 1`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.v.is_zero() {
            None
        } else {
            self.v.exponent().map(|e| e as i64)
        }
    }

    /// Nearest `f64` (truncated mantissa); saturates to `±inf` / `0`.
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        match self.v.as_raw_parts() {
            Some((words, _, sign, e, _)) => {
                let Some(top) = words.last() else { return 0.0 };
                if *top == 0 {
                    return 0.0;
                }
                let e = e as i64 - 64;
                let m = *top as f64;
                let x = if e > 2000 {
                    f64::INFINITY
                } else if e < -2200 {
                    0.0
                } else {
                    libm::ldexp(m, e as i32)
                };
                if sign == Sign::Neg {
                    -x
                } else {
                    x
                }
            }
            None => 0.0,
        }
    }

    /// `log2 |self|`, finite for any nonzero value regardless of f64 range.
    pub fn log2_abs(&self) -> f64 {
        match self.v.as_raw_parts() {
            Some((words, _, _, e, _)) => {
                let Some(top) = words.last() else { return f64::NEG_INFINITY };
                if *top == 0 {
                    return f64::NEG_INFINITY;
                }
                libm::log2(*top as f64) - 64.0 + e as f64
            }
            None => f64::NEG_INFINITY,
        }
    }

    pub fn sqr(&self) -> Real {
        self * self
    }

    pub fn sqrt(&self) -> Real {
        Real { v: self.v.sqrt(self.p, RM), p: self.p }
    }

    pub fn exp(&self, ctx: &Ctx) -> Real {
        let p = self.p;
        Real { v: ctx.with_cc(|cc| self.v.exp(p, RM, cc)), p }
    }

    pub fn ln(&self, ctx: &Ctx) -> Real {
        let p = self.p;
        Real { v: ctx.with_cc(|cc| self.v.ln(p, RM, cc)), p }
    }

    pub fn sin(&self, ctx: &Ctx) -> Real {
        let p = self.p;
        Real { v: ctx.with_cc(|cc| self.v.sin(p, RM, cc)), p }
    }

    pub fn cos(&self, ctx: &Ctx) -> Real {
        let p = self.p;
        Real { v: ctx.with_cc(|cc| self.v.cos(p, RM, cc)), p }
    }

    pub fn atan(&self, ctx: &Ctx) -> Real {
        let p = self.p;
        Real { v: ctx.with_cc(|cc| self.v.atan(p, RM, cc)), p }
    }

    /// Four-quadrant arctangent of `self / x`, in `(-pi, pi]`.
    pub fn atan2(&self, x: &Real, ctx: &Ctx) -> Real {
        let y = self;
        if x.is_zero() {
            let half_pi = &ctx.pi() / &ctx.int(2);
            return if y.is_zero() {
                ctx.zero()
            } else if y.is_negative() {
                -half_pi
            } else {
                half_pi
            };
        }
        let base = (y / x).atan(ctx);
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            &base - &ctx.pi()
        } else {
            &base + &ctx.pi()
        }
    }

    pub fn powi(&self, n: u32) -> Real {
        Real { v: self.v.powi(n as usize, self.p, RM), p: self.p }
    }

    /// Real power of a positive number.
    pub fn powr(&self, e: &Real, ctx: &Ctx) -> Real {
        if self.is_zero() {
            return self.clone();
        }
        (&self.ln(ctx) * e).exp(ctx)
    }

    pub fn floor(&self) -> Real {
        Real { v: self.v.floor(), p: self.p }
    }

    pub fn is_integer(&self) -> bool {
        self.v.is_int()
    }

    pub fn max_abs(a: &Real, b: &Real) -> Real {
        if a.abs() >= b.abs() {
            a.abs()
        } else {
            b.abs()
        }
    }

    /// Decimal rendering with all significant digits of the working precision.
    pub fn to_decimal(&self, ctx: &Ctx) -> String {
        ctx.with_cc(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| String::from("NaN"))
    }

    pub fn mul_int(&self, n: i64) -> Real {
        let mut k = BigFloat::from_word(n.unsigned_abs(), 64);
        if n < 0 {
            k.inv_sign();
        }
        Real { v: self.v.mul(&k, self.p, RM), p: self.p }
    }

    pub fn div_int(&self, n: i64) -> Real {
        let mut k = BigFloat::from_word(n.unsigned_abs(), 64);
        if n < 0 {
            k.inv_sign();
        }
        Real { v: self.v.div(&k, self.p, RM), p: self.p }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let p = self.p.max(rhs.p);
                Real { v: self.v.$op(&rhs.v, p, RM), p }
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { v: self.v.neg(), p: self.p }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        let mut v = self.v.clone();
        v.inv_sign();
        Real { v, p: self.p }
    }
}

impl AddAssign<&Real> for Real {
    fn add_assign(&mut self, rhs: &Real) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Real> for Real {
    fn sub_assign(&mut self, rhs: &Real) {
        *self = &*self - rhs;
    }
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = Real { v: BigFloat::new(re.p), p: re.p };
        Complex { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn rounded(&self, ctx: &Ctx) -> Complex {
        Complex { re: self.re.rounded(ctx), im: self.im.rounded(ctx) }
    }

    /// Zero at the precision of `self`.
    pub fn zero_like(&self) -> Complex {
        Complex { re: self.re.int_like(0), im: self.re.int_like(0) }
    }

    /// Integer `n` at the precision of `self`.
    pub fn int_like(&self, n: i64) -> Complex {
        Complex { re: self.re.int_like(n), im: self.re.int_like(0) }
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Complex {
        Complex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    /// `log2 |z|` without leaving the exponent range of big floats.
    pub fn log2_abs(&self) -> f64 {
        let a = self.re.log2_abs();
        let b = self.im.log2_abs();
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        let lo = a.min(b);
        hi + 0.5 * libm::log2(1.0 + libm::exp2(2.0 * (lo - hi)))
    }

    /// `|z|` as `f64`; saturates.
    pub fn abs_f64(&self) -> f64 {
        let l = self.log2_abs();
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            libm::exp2(l)
        }
    }

    pub fn arg(&self, ctx: &Ctx) -> Real {
        self.im.atan2(&self.re, ctx)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(&self, k: &Real) -> Complex {
        Complex { re: &self.re * k, im: &self.im * k }
    }

    pub fn mul_int(&self, n: i64) -> Complex {
        Complex { re: self.re.mul_int(n), im: self.im.mul_int(n) }
    }

    pub fn div_int(&self, n: i64) -> Complex {
        Complex { re: self.re.div_int(n), im: self.im.div_int(n) }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Complex {
        Complex { re: -&self.im, im: self.re.clone() }
    }

    pub fn sqr(&self) -> Complex {
        self * self
    }

    pub fn recip(&self) -> Complex {
        let d = self.norm_sqr();
        Complex { re: &self.re / &d, im: -(&self.im / &d) }
    }

    pub fn exp(&self, ctx: &Ctx) -> Complex {
        let m = self.re.exp(ctx);
        if self.im.is_zero() {
            return Complex::from_real(m);
        }
        Complex { re: &m * &self.im.cos(ctx), im: &m * &self.im.sin(ctx) }
    }

    /// Principal logarithm.
    pub fn ln(&self, ctx: &Ctx) -> Complex {
        let r = self.norm_sqr().ln(ctx).div_int(2);
        Complex { re: r, im: self.arg(ctx) }
    }

    /// Principal power `self^e`.
    pub fn powc(&self, e: &Complex, ctx: &Ctx) -> Complex {
        if self.is_zero() {
            return self.clone();
        }
        (&self.ln(ctx) * e).exp(ctx)
    }

    /// Principal square root.
    pub fn sqrt(&self, ctx: &Ctx) -> Complex {
        if self.is_zero() {
            return self.clone();
        }
        let half = ctx.ratio(1, 2);
        let c = Complex::from_real(half);
        self.powc(&c, ctx)
    }

    pub fn cos(&self, ctx: &Ctx) -> Complex {
        if self.im.is_zero() {
            return Complex::from_real(self.re.cos(ctx));
        }
        let ep = self.im.exp(ctx);
        let em = ctx.one() / &ep;
        let ch = (&ep + &em).div_int(2);
        let sh = (&ep - &em).div_int(2);
        Complex { re: &self.re.cos(ctx) * &ch, im: -(&self.re.sin(ctx) * &sh) }
    }

    pub fn sin(&self, ctx: &Ctx) -> Complex {
        if self.im.is_zero() {
            return Complex::from_real(self.re.sin(ctx));
        }
        let ep = self.im.exp(ctx);
        let em = ctx.one() / &ep;
        let ch = (&ep + &em).div_int(2);
        let sh = (&ep - &em).div_int(2);
        Complex { re: &self.re.sin(ctx) * &ch, im: &self.re.cos(ctx) * &sh }
    }

    /// `acc += a * b` without temporaries for the complex product.
    pub fn fma_assign(&mut self, a: &Complex, b: &Complex) {
        let rr = &a.re * &b.re;
        let ii = &a.im * &b.im;
        let ri = &a.re * &b.im;
        let ir = &a.im * &b.re;
        self.re = &(&self.re + &rr) - &ii;
        self.im = &(&self.im + &ri) + &ir;
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e}{:+e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re.to_f64(), self.im.to_f64())
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        if rhs.im.is_zero() {
            return self.scale(&rhs.re);
        }
        if self.im.is_zero() {
            return rhs.scale(&self.re);
        }
        Complex {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        if rhs.im.is_zero() {
            return Complex { re: &self.re / &rhs.re, im: &self.im / &rhs.re };
        }
        let d = rhs.norm_sqr();
        let re = &(&self.re * &rhs.re) + &(&self.im * &rhs.im);
        let im = &(&self.im * &rhs.re) - &(&self.re * &rhs.im);
        Complex { re: &re / &d, im: &im / &d }
    }
}

macro_rules! complex_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &Complex) -> Complex {
                (&self).$m(rhs)
            }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                self.$m(&rhs)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -&self.re, im: -&self.im }
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -&self
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, rhs: &Complex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, rhs: &Complex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, rhs: &Complex) {
        *self = &*self * rhs;
    }
}

/// Even Bernoulli numbers `B_2 .. B_120` as exact fractions.
static BERNOULLI_EVEN: &[(&str, &str)] = &[
    ("1", "6"),
    ("-1", "30"),
    ("1", "42"),
    ("-1", "30"),
    ("5", "66"),
    ("-691", "2730"),
    ("7", "6"),
    ("-3617", "510"),
    ("43867", "798"),
    ("-174611", "330"),
    ("854513", "138"),
    ("-236364091", "2730"),
    ("8553103", "6"),
    ("-23749461029", "870"),
    ("8615841276005", "14322"),
    ("-7709321041217", "510"),
    ("2577687858367", "6"),
    ("-26315271553053477373", "1919190"),
    ("2929993913841559", "6"),
    ("-261082718496449122051", "13530"),
    ("1520097643918070802691", "1806"),
    ("-27833269579301024235023", "690"),
    ("596451111593912163277961", "282"),
    ("-5609403368997817686249127547", "46410"),
    ("495057205241079648212477525", "66"),
    ("-801165718135489957347924991853", "1590"),
    ("29149963634884862421418123812691", "798"),
    ("-2479392929313226753685415739663229", "870"),
    ("84483613348880041862046775994036021", "354"),
    ("-1215233140483755572040304994079820246041491", "56786730"),
    ("12300585434086858541953039857403386151", "6"),
    ("-106783830147866529886385444979142647942017", "510"),
    ("1472600022126335654051619428551932342241899101", "64722"),
    ("-78773130858718728141909149208474606244347001", "30"),
    ("1505381347333367003803076567377857208511438160235", "4686"),
    ("-5827954961669944110438277244641067365282488301844260429", "140100870"),
    ("34152417289221168014330073731472635186688307783087", "6"),
    ("-24655088825935372707687196040585199904365267828865801", "30"),
    ("414846365575400828295179035549542073492199375372400483487", "3318"),
    ("-4603784299479457646935574969019046849794257872751288919656867", "230010"),
    ("1677014149185145836823154509786269900207736027570253414881613", "498"),
    ("-2024576195935290360231131160111731009989917391198090877281083932477", "3404310"),
    ("660714619417678653573847847426261496277830686653388931761996983", "6"),
    ("-1311426488674017507995511424019311843345750275572028644296919890574047", "61410"),
    ("1179057279021082799884123351249215083775254949669647116231545215727922535", "272118"),
    ("-1295585948207537527989427828538576749659341483719435143023316326829946247", "1410"),
    ("1220813806579744469607301679413201203958508415202696621436215105284649447", "6"),
    ("-211600449597266513097597728109824233673043954389060234150638733420050668349987259", "4501770"),
    ("67908260672905495624051117546403605607342195728504487509073961249992947058239", "6"),
    ("-94598037819122125295227433069493721872702841533066936133385696204311395415197247711", "33330"),
    ("3204019410860907078243020782116241775491817197152717450679002501086861530836678158791", "4326"),
    ("-319533631363830011287103352796174274671189606078272738327103470162849568365549721224053", "1590"),
    ("36373903172617414408151820151593427169231298640581690038930816378281879873386202346572901", "642"),
    ("-3469342247847828789552088659323852541399766785760491146870005891371501266319724897592306597338057", "209191710"),
    ("7645992940484742892248134246724347500528752413412307906683593870759797606269585779977930217515", "1518"),
    ("-2650879602155099713352597214685162014443151499192509896451788427680966756514875515366781203552600109", "1671270"),
    ("21737832319369163333310761086652991475721156679090831360806110114933605484234593650904188618562649", "42"),
    ("-309553916571842976912513458033841416869004128064329844245504045721008957524571968271388199595754752259", "1770"),
    ("366963119969713111534947151585585006684606361080699204301059440676414485045806461889371776354517095799", "6"),
    ("-51507486535079109061843996857849983274095170353262675213092869167199297474922985358811329367077682677803282070131", "2328255930"),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip() {
        let ctx = Ctx::with_digits(40);
        for x in [1.0, -2.5, 1e-300, 3.25e200, 0.1, -7.0e-5] {
            assert_eq!(ctx.real(x).to_f64(), x);
        }
        assert_eq!(ctx.zero().to_f64(), 0.0);
    }

    #[test]
    fn precision_follows_digits() {
        assert_eq!(Ctx::with_digits(40).bits(), 192);
        assert_eq!(Ctx::with_digits(16).bits(), 128);
        assert!(Ctx::with_digits(40).epsilon() < 1e-55);
    }

    #[test]
    fn atan2_quadrants() {
        let ctx = Ctx::with_digits(30);
        let pi = core::f64::consts::PI;
        let cases = [(1.0, 1.0, pi / 4.0), (1.0, -1.0, 3.0 * pi / 4.0), (-1.0, -1.0, -3.0 * pi / 4.0), (0.0, -1.0, pi), (-1.0, 0.0, -pi / 2.0)];
        for (y, x, want) in cases {
            let got = ctx.real(y).atan2(&ctx.real(x), &ctx).to_f64();
            assert!((got - want).abs() < 1e-15, "{y} {x} {got}");
        }
    }

    #[test]
    fn complex_exp_log_inverse() {
        let ctx = Ctx::with_digits(40);
        let z = ctx.complex(0.3, -2.1);
        let back = z.exp(&ctx).ln(&ctx);
        assert!((&back - &z).abs().to_f64() < 1e-45);
    }

    #[test]
    fn log2_abs_beyond_f64_range() {
        let ctx = Ctx::with_digits(30);
        let big = ctx.int(2).powi(5000);
        assert!((big.log2_abs() - 5000.0).abs() < 1e-9);
        assert_eq!(big.to_f64(), f64::INFINITY);
        let z = Complex::new(big.clone(), big);
        assert!((z.log2_abs() - 5000.5).abs() < 1e-9);
    }

    #[test]
    fn bernoulli_table_values() {
        let ctx = Ctx::with_digits(30);
        assert!((ctx.bernoulli_even(1).to_f64() - 1.0 / 6.0).abs() < 1e-16);
        assert!((ctx.bernoulli_even(6).to_f64() + 691.0 / 2730.0).abs() < 1e-16);
    }
}

//! The potential family, its rational exponent and solver settings.

use alloc::format;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mp::{Complex, Ctx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// a > 2
    General,
    /// a = 1/2
    Half,
    /// a = 1, closed form only
    Linear,
    /// a = 2
    Quadratic,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::General => "general",
            Regime::Half => "half",
            Regime::Linear => "linear",
            Regime::Quadratic => "quadratic",
        }
    }
}

/// Exponent `a = p/q` of the potential `-sgn(x)|x|^a`, in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentParam {
    p: u32,
    q: u32,
    regime: Regime,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl ExponentParam {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p < 1 || q < 1 {
            return Err(Error::Domain(format!("exponent must be a positive fraction, got {p}/{q}")));
        }
        if p > u32::MAX as i64 || q > u32::MAX as i64 {
            return Err(Error::Domain(format!("exponent {p}/{q} is too large")));
        }
        let (p, q) = (p as u32, q as u32);
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        let regime = match (p, q) {
            (1, 2) => Regime::Half,
            (1, 1) => Regime::Linear,
            (2, 1) => Regime::Quadratic,
            _ if p > 2 * q => Regime::General,
            _ => return Err(Error::UnsupportedRegime { p, q }),
        };
        Ok(ExponentParam { p, q, regime })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn a(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `p + 2q`.
    pub fn ell(&self) -> usize {
        (self.p + 2 * self.q) as usize
    }

    /// Twice the Frobenius index `nu_i`: `1 - 2q` for `i = 1`, `1 + 2q` for `i = 2`.
    pub fn nu_twice(&self, i: usize) -> i64 {
        let q = self.q as i64;
        if i == 1 {
            1 - 2 * q
        } else {
            1 + 2 * q
        }
    }

    pub fn nu(&self, i: usize, ctx: &Ctx) -> Real {
        ctx.ratio(self.nu_twice(i), 2)
    }

    pub fn nu_f64(&self, i: usize) -> f64 {
        self.nu_twice(i) as f64 / 2.0
    }

    /// Twice the energy-independent Thomé index `-(p + 2q - 1)/2`.
    pub fn mu_twice(&self) -> i64 {
        1 - self.ell() as i64
    }

    pub fn mu(&self, ctx: &Ctx) -> Real {
        ctx.ratio(self.mu_twice(), 2)
    }

    /// Whether the engine (rather than a closed form) handles this exponent.
    pub fn engine_supported(&self) -> bool {
        !matches!(self.regime, Regime::Linear)
    }

    /// Rotation angle `pi/(a + 2) = pi q/(p + 2q)`.
    pub fn rotation_angle(&self, ctx: &Ctx) -> Real {
        ctx.pi().mul_int(self.q as i64).div_int(self.ell() as i64)
    }
}

impl fmt::Display for ExponentParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sigma {
    Minus,
    Plus,
}

impl Sigma {
    pub fn value(self) -> i64 {
        match self {
            Sigma::Minus => -1,
            Sigma::Plus => 1,
        }
    }

    pub const BOTH: [Sigma; 2] = [Sigma::Minus, Sigma::Plus];
}

/// Half-line equation selector: sign `sigma` of the `x^a` term, optionally
/// with the PT substitution `sigma -> i sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Branch {
    pub sigma: Sigma,
    pub pt: bool,
}

impl Branch {
    pub fn physical(sigma: Sigma) -> Self {
        Branch { sigma, pt: false }
    }

    pub fn pt(sigma: Sigma) -> Self {
        Branch { sigma, pt: true }
    }

    /// Coefficient of the `x^a` term: `sigma`, or `i sigma` for the PT equation.
    pub fn coupling(&self, ctx: &Ctx) -> Complex {
        let s = ctx.int(self.sigma.value());
        if self.pt {
            Complex::new(ctx.zero(), s)
        } else {
            Complex::from_real(s)
        }
    }

    /// The fixed square root of minus the coupling.
    ///
    /// Physical: `1` for sigma = -1 and `-i` for sigma = +1. PT: the
    /// principal root of `-i sigma`, which keeps `Re alpha_4 > 0`.
    pub fn root_minus_sigma(&self, ctx: &Ctx) -> Complex {
        match (self.pt, self.sigma) {
            (false, Sigma::Minus) => ctx.cone(),
            (false, Sigma::Plus) => Complex::new(ctx.zero(), ctx.int(-1)),
            (true, s) => {
                let h = ctx.ratio(1, 2).sqrt();
                let im = if s == Sigma::Plus { -&h } else { h.clone() };
                Complex::new(h, im)
            }
        }
    }

    /// Thomé exponent `alpha_j`, `j` in {3, 4}, with `alpha_3 = -alpha_4 = -2q (-sigma)^{1/2}`.
    pub fn alpha(&self, param: &ExponentParam, j: usize, ctx: &Ctx) -> Complex {
        let a4 = self.root_minus_sigma(ctx).mul_int(2 * param.q as i64);
        if j == 3 {
            -a4
        } else {
            a4
        }
    }

    /// The one configuration in which the real positive axis is a Stokes ray.
    pub fn is_stokes(&self, j: usize) -> bool {
        !self.pt && self.sigma == Sigma::Minus && j == 4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    Physical,
    PtRotated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyValue {
    pub value: Complex,
    pub frame: Frame,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToPt,
    ToPhysical,
}

/// Multiplies by `exp(+-i pi/(a+2))`, switching frames.
pub fn symanzik_rotate(param: &ExponentParam, e: &EnergyValue, direction: Direction, ctx: &Ctx) -> Result<EnergyValue> {
    let theta = param.rotation_angle(ctx);
    let (theta, from, to) = match direction {
        Direction::ToPt => (theta, Frame::Physical, Frame::PtRotated),
        Direction::ToPhysical => (-theta, Frame::PtRotated, Frame::Physical),
    };
    if e.frame != from {
        return Err(Error::Contract(format!("energy is in the {:?} frame, expected {:?}", e.frame, from)));
    }
    Ok(EnergyValue { value: &e.value * &ctx.cis(&theta), frame: to })
}

/// `-sgn(x)|x|^a`.
pub fn potential_value(param: &ExponentParam, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let m = libm::pow(x.abs(), param.a());
    if x < 0.0 {
        m
    } else {
        -m
    }
}

/// `-i sgn(x)|x|^a`.
pub fn pt_potential_value(param: &ExponentParam, x: f64) -> Complex64 {
    Complex64::new(0.0, potential_value(param, x))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Working significand in decimal digits.
    pub precision_digits: u32,
    /// Relative tail tolerance for convergent series.
    pub series_tol: f64,
    /// Cap on any recurrence length.
    pub max_terms: usize,
    /// Extract every Wronskian at two values of the free integer and compare.
    pub wronskian_shift_check: bool,
    /// Energy step for the time-delay derivative.
    pub derivative_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::with_precision(40)
    }
}

impl SolverConfig {
    pub fn with_precision(digits: u32) -> Self {
        SolverConfig {
            precision_digits: digits,
            series_tol: libm::pow(10.0, -(digits as f64)),
            max_terms: 20_000,
            wronskian_shift_check: true,
            derivative_step: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision_digits < 16 {
            return Err(Error::Domain(format!("precision_digits must be at least 16, got {}", self.precision_digits)));
        }
        let bound = libm::pow(10.0, -(self.precision_digits as f64) / 2.0);
        if !(self.series_tol > 0.0 && self.series_tol < bound) {
            return Err(Error::Domain(format!("series_tol must lie in (0, {bound:e}), got {:e}", self.series_tol)));
        }
        if !(self.derivative_step > 0.0 && self.derivative_step.is_finite()) {
            return Err(Error::Domain(format!("derivative_step must be positive, got {}", self.derivative_step)));
        }
        Ok(())
    }

    pub fn validate_for(&self, param: &ExponentParam) -> Result<()> {
        self.validate()?;
        if self.max_terms < 4 * param.ell() {
            return Err(Error::Domain(format!("max_terms must be at least {} for a = {param}", 4 * param.ell())));
        }
        Ok(())
    }

    pub fn context(&self) -> Ctx {
        Ctx::with_digits(self.precision_digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_exponent_examples() {
        let e = ExponentParam::new(3, 1).unwrap();
        assert_eq!((e.p(), e.q(), e.ell()), (3, 1, 5));
        assert_eq!(e.nu_f64(1), -0.5);
        assert_eq!(e.nu_f64(2), 1.5);
        assert_eq!(e.mu_twice(), -4);
        assert_eq!(e.regime(), Regime::General);

        let h = ExponentParam::new(1, 2).unwrap();
        assert_eq!((h.regime(), h.ell()), (Regime::Half, 5));

        assert_eq!(ExponentParam::new(6, 2).unwrap(), e);
        assert_eq!(ExponentParam::new(2, 1).unwrap().regime(), Regime::Quadratic);
        assert_eq!(ExponentParam::new(4, 4).unwrap().regime(), Regime::Linear);
    }

    #[test]
    fn make_exponent_errors() {
        assert!(matches!(ExponentParam::new(0, 1), Err(Error::Domain(_))));
        assert!(matches!(ExponentParam::new(3, -1), Err(Error::Domain(_))));
        assert_eq!(ExponentParam::new(3, 2), Err(Error::UnsupportedRegime { p: 3, q: 2 }));
        assert_eq!(ExponentParam::new(1, 3), Err(Error::UnsupportedRegime { p: 1, q: 3 }));
    }

    #[test]
    fn potential_examples() {
        let a3 = ExponentParam::new(3, 1).unwrap();
        assert_eq!(potential_value(&a3, -2.0), 8.0);
        assert_eq!(potential_value(&a3, 2.0), -8.0);
        assert_eq!(potential_value(&a3, 0.0), 0.0);
        let half = ExponentParam::new(1, 2).unwrap();
        assert_eq!(potential_value(&half, 4.0), -2.0);
        assert_eq!(pt_potential_value(&a3, 1.0), Complex64::new(0.0, -1.0));
        assert_eq!(pt_potential_value(&a3, -1.0), Complex64::new(0.0, 1.0));
        let a2 = ExponentParam::new(2, 1).unwrap();
        assert_eq!(pt_potential_value(&a2, 2.0), Complex64::new(0.0, -4.0));
    }

    #[test]
    fn root_minus_sigma_squares() {
        let ctx = Ctx::with_digits(30);
        for pt in [false, true] {
            for s in Sigma::BOTH {
                let b = Branch { sigma: s, pt };
                let r = b.root_minus_sigma(&ctx);
                let want = -&b.coupling(&ctx);
                assert!((&r.sqr() - &want).abs().to_f64() < 1e-35);
                if pt {
                    assert!(r.re.to_f64() > 0.0);
                }
            }
        }
        let a3 = ExponentParam::new(3, 1).unwrap();
        let al = Branch::physical(Sigma::Plus).alpha(&a3, 3, &ctx);
        assert_eq!(al.to_f64(), (0.0, 2.0));
    }

    #[test]
    fn symanzik_examples() {
        let ctx = Ctx::with_digits(30);
        let a2 = ExponentParam::new(2, 1).unwrap();
        let one = EnergyValue { value: ctx.cone(), frame: Frame::Physical };
        let r = symanzik_rotate(&a2, &one, Direction::ToPt, &ctx).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let (re, im) = r.value.to_f64();
        assert!((re - h).abs() < 1e-15 && (im - h).abs() < 1e-15);
        assert_eq!(r.frame, Frame::PtRotated);

        let a3 = ExponentParam::new(3, 1).unwrap();
        let pt = EnergyValue { value: Complex::from_real(ctx.parse("1.1562670720").unwrap()), frame: Frame::PtRotated };
        let g = symanzik_rotate(&a3, &pt, Direction::ToPhysical, &ctx).unwrap();
        let (re, im) = g.value.to_f64();
        assert!((re - 0.935_439_711_284).abs() < 1e-11 && (im + 0.679_636_732_633).abs() < 1e-11);
        assert!(symanzik_rotate(&a3, &pt, Direction::ToPt, &ctx).is_err());
    }

    #[test]
    fn config_validation() {
        let a3 = ExponentParam::new(3, 1).unwrap();
        assert!(SolverConfig::default().validate_for(&a3).is_ok());
        let mut c = SolverConfig::default();
        c.precision_digits = 12;
        assert!(c.validate().is_err());
        let mut c = SolverConfig::default();
        c.series_tol = 1e-10;
        assert!(c.validate().is_err());
        let mut c = SolverConfig::default();
        c.max_terms = 10;
        assert!(c.validate_for(&a3).is_err());
    }
}

//! Closed-form scattering functions for a = 1 and a = 2, and the complex
//! Gamma function they and the connection engine rely on.

use crate::error::{Error, Result};
use crate::mp::{Complex, Ctx, Real};

/// Shift `z -> z + n` so that Stirling's series reaches working precision.
fn stirling_shift(z: &Complex, ctx: &Ctx) -> usize {
    let d = ctx.bits() as f64 / 3.321_928_094_887_362;
    let r = (0.4 * d + 5.0).max(libm::pow(10.0, (101.0 + d) / 119.0));
    let (x, y) = z.to_f64();
    let need = r * r - y * y;
    if need <= 0.0 && x > 0.0 {
        return 0;
    }
    let target = libm::sqrt(need.max(0.0));
    libm::ceil((target - x).max(0.0)) as usize
}

/// `ln Gamma(w)` by Stirling's series; `w` must already be shifted.
fn stirling(w: &Complex, ctx: &Ctx) -> Complex {
    let half = ctx.ratio(1, 2);
    let ln_w = w.ln(ctx);
    let two_pi = ctx.pi().mul_int(2);
    let mut acc = &(&(w - &Complex::from_real(half.clone())) * &ln_w) - w;
    acc.re += &(two_pi.ln(ctx) * &half);
    let inv = w.recip();
    let inv2 = inv.sqr();
    let mut pw = inv;
    let eps = ctx.epsilon();
    for k in 1..=60usize {
        let b = ctx.bernoulli_even(k);
        let coef = b.div_int((2 * k * (2 * k - 1)) as i64);
        let term = pw.scale(&coef);
        acc += &term;
        if term.abs_f64() <= eps * acc.abs_f64().max(1.0) {
            break;
        }
        pw = &pw * &inv2;
    }
    acc
}

fn pole_of(z: &Complex) -> Option<i64> {
    if z.im.is_zero() && z.re.is_integer() && (z.re.is_negative() || z.re.is_zero()) {
        return Some(z.re.to_f64() as i64);
    }
    None
}

/// `(z)(z+1)...(z+n-1)`.
fn rising(z: &Complex, n: usize, ctx: &Ctx) -> Complex {
    let mut prod = ctx.cone();
    let mut zk = z.clone();
    let one = ctx.cone();
    for _ in 0..n {
        prod = &prod * &zk;
        zk = &zk + &one;
    }
    prod
}

/// Principal branch of `ln Gamma(z)`, continuous off the negative real axis.
pub fn complex_log_gamma(z: &Complex, ctx: &Ctx) -> Result<Complex> {
    if let Some(n) = pole_of(z) {
        return Err(Error::GammaPole(n));
    }
    let n = stirling_shift(z, ctx);
    let w = &Complex::from_real(ctx.int(n as i64)) + z;
    let mut acc = stirling(&w, ctx);
    if z.im.is_zero() && !z.re.is_negative() {
        let r = rising(z, n, ctx);
        acc.re -= &r.re.ln(ctx);
        return Ok(acc);
    }
    let one = ctx.cone();
    let mut zk = z.clone();
    for _ in 0..n {
        acc -= &zk.ln(ctx);
        zk = &zk + &one;
    }
    Ok(acc)
}

pub fn gamma(z: &Complex, ctx: &Ctx) -> Result<Complex> {
    if let Some(n) = pole_of(z) {
        return Err(Error::GammaPole(n));
    }
    let n = stirling_shift(z, ctx);
    let w = &Complex::from_real(ctx.int(n as i64)) + z;
    let g = stirling(&w, ctx).exp(ctx);
    Ok(&g / &rising(z, n, ctx))
}

/// `1/Gamma(z)`, an entire function (zero at the poles of Gamma).
pub fn rgamma(z: &Complex, ctx: &Ctx) -> Complex {
    if pole_of(z).is_some() {
        return ctx.czero();
    }
    let n = stirling_shift(z, ctx);
    let w = &Complex::from_real(ctx.int(n as i64)) + z;
    let g = (-&stirling(&w, ctx)).exp(ctx);
    &g * &rising(z, n, ctx)
}

/// Real Gamma function; errors at poles.
pub fn gamma_real(x: &Real, ctx: &Ctx) -> Result<Real> {
    Ok(gamma(&Complex::from_real(x.clone()), ctx)?.re)
}

/// Scattering function for a = 1: the constant `i`.
pub fn linear_scattering(_e: f64, ctx: &Ctx) -> Complex {
    ctx.i()
}

#[derive(Debug, Clone)]
pub struct QuadraticScatteringParts {
    pub e: Complex,
    pub n: Complex,
    pub d: Complex,
    pub s: Complex,
}

/// Closed-form `S(E) = i N(E)/D(E)` for a = 2, built from reciprocal Gamma
/// functions so that integer-spaced energies stay finite.
pub fn quadratic_scattering(e: &Complex, ctx: &Ctx) -> Result<QuadraticScatteringParts> {
    let ie = e.mul_i();
    let quarter = |k: i64, z: &Complex| -> Complex { (&ctx.cint(k) + z).div_int(4) };
    let neg_e = -e;
    let neg_ie = -&ie;
    let g3m = rgamma(&quarter(3, &neg_e), ctx);
    let g1m = rgamma(&quarter(1, &neg_e), ctx);
    let g1p_i = rgamma(&quarter(1, &ie), ctx);
    let g3p_i = rgamma(&quarter(3, &ie), ctx);
    let g1m_i = rgamma(&quarter(1, &neg_ie), ctx);
    let g3m_i = rgamma(&quarter(3, &neg_ie), ctx);
    let eighth = ctx.pi().div_int(8);
    let ph = ctx.cis(&eighth);
    let phc = ph.conj();
    let n = &(&ph * &(&g3m * &g1p_i)) + &(&phc * &(&g1m * &g3p_i));
    let d = &(&phc * &(&g3m * &g1m_i)) + &(&ph * &(&g1m * &g3m_i));
    if d.is_zero() {
        return Err(Error::PoleProximity { ratio: 0.0 });
    }
    let s = (&n / &d).mul_i();
    Ok(QuadraticScatteringParts { e: e.clone(), n, d, s })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        (a - b).abs_f64() <= tol * b.abs_f64().max(1e-300)
    }

    #[test]
    fn log_gamma_examples() {
        let ctx = Ctx::with_digits(40);
        let z = complex_log_gamma(&ctx.cone(), &ctx).unwrap();
        assert!(z.abs_f64() < 1e-45);
        let half = complex_log_gamma(&Complex::from_real(ctx.ratio(1, 2)), &ctx).unwrap();
        let want = ctx.pi().ln(&ctx).div_int(2);
        assert!((&half.re - &want).abs().to_f64() < 1e-44);
        let g1 = gamma(&Complex::from_real(ctx.ratio(3, 4)), &ctx).unwrap();
        let g2 = gamma(&Complex::from_real(ctx.ratio(1, 4)), &ctx).unwrap();
        let prod = &g1 * &g2;
        let want = Complex::from_real(&ctx.pi() * &ctx.int(2).sqrt());
        assert!(close(&prod, &want, 1e-44));
    }

    #[test]
    fn gamma_poles() {
        let ctx = Ctx::with_digits(30);
        assert_eq!(gamma(&ctx.cint(0), &ctx).unwrap_err(), Error::GammaPole(0));
        assert_eq!(complex_log_gamma(&ctx.cint(-3), &ctx).unwrap_err(), Error::GammaPole(-3));
        assert!(rgamma(&ctx.cint(-2), &ctx).is_zero());
        let g = gamma(&ctx.cint(5), &ctx).unwrap();
        assert!(close(&g, &ctx.cint(24), 1e-35));
    }

    #[test]
    fn gamma_left_half_plane() {
        let ctx = Ctx::with_digits(40);
        let z = ctx.complex(-2.5, 0.0);
        let g = gamma(&z, &ctx).unwrap();
        // Gamma(-5/2) = -8 sqrt(pi)/15
        let want = Complex::from_real(-(ctx.pi().sqrt().mul_int(8).div_int(15)));
        assert!(close(&g, &want, 1e-44));
        let z = ctx.complex(-3.3, 1.7);
        let lg = complex_log_gamma(&z, &ctx).unwrap().exp(&ctx);
        assert!(close(&lg, &gamma(&z, &ctx).unwrap(), 1e-42));
    }

    #[test]
    fn log_gamma_branch_is_principal() {
        // Im ln Gamma(x + iy) grows without the 2 pi wraps of ln(Gamma).
        let ctx = Ctx::with_digits(30);
        let z = ctx.complex(0.5, 10.0);
        let lg = complex_log_gamma(&z, &ctx).unwrap();
        // reference value from mpmath.loggamma
        let (re, im) = lg.to_f64();
        assert!((re + 14.789_024_734_744_3).abs() < 1e-12, "{re}");
        assert!((im - 13.030_020_034_911_1).abs() < 1e-12, "{im}");
    }

    #[test]
    fn linear_constant() {
        let ctx = Ctx::with_digits(20);
        for e in [0.0, 10.0, -3.0] {
            assert_eq!(linear_scattering(e, &ctx), ctx.i());
        }
    }

    #[test]
    fn quadratic_zero_energy_and_unitarity() {
        let ctx = Ctx::with_digits(40);
        let s0 = quadratic_scattering(&ctx.czero(), &ctx).unwrap();
        assert!(close(&s0.s, &ctx.i(), 1e-40));
        for e in [-5.0, -2.0, 1.0, 5.0, 10.0, 14.0, 3.3] {
            let s = quadratic_scattering(&ctx.complex(e, 0.0), &ctx).unwrap().s;
            assert!((s.abs_f64() - 1.0).abs() < 1e-12, "{e}");
        }
    }
}

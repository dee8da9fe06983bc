//! Frobenius (origin) and Thomé (infinity) solutions of the reduced equation
//!
//! `t^2 w'' + (4q^2 s t^{2p+4q} + 4q^2 E t^{4q} - q^2 + 1/4) w = 0`,  `x = t^{2q}`,
//!
//! where `s` is the branch coupling (`sigma`, or `i sigma` for the PT
//! equation). Coefficient tables grow on demand; every table remembers the
//! energy and branch it was built for.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponent::{Branch, ExponentParam, Regime};
use crate::mp::{Complex, Ctx, Real};

/// Value of a solution and its `x`-derivative with a relative error estimate.
#[derive(Debug, Clone)]
pub struct SeriesValue {
    pub value: Complex,
    pub deriv: Complex,
    pub error: f64,
}

fn at(v: &[Complex], k: isize) -> Option<&Complex> {
    if k < 0 {
        None
    } else {
        v.get(k as usize)
    }
}

fn nonzero(v: &[Complex], k: isize) -> Option<&Complex> {
    at(v, k).filter(|c| !c.is_zero())
}

#[derive(Debug, Clone)]
pub struct FrobeniusSolution {
    pub param: ExponentParam,
    pub branch: Branch,
    pub index: usize,
    pub energy: Complex,
    /// `2 nu_i`
    nu_twice: i64,
    k_energy: Complex,
    k_coupling: Complex,
    pub coeffs: Vec<Complex>,
}

impl FrobeniusSolution {
    pub fn new(param: &ExponentParam, branch: Branch, i: usize, energy: &Complex, ctx: &Ctx) -> Result<Self> {
        if i != 1 && i != 2 {
            return Err(Error::Domain(format!("Frobenius index must be 1 or 2, got {i}")));
        }
        let q2 = 4 * (param.q() as i64).pow(2);
        Ok(FrobeniusSolution {
            param: *param,
            branch,
            index: i,
            energy: energy.clone(),
            nu_twice: param.nu_twice(i),
            k_energy: energy.mul_int(-q2),
            k_coupling: branch.coupling(ctx).mul_int(-q2),
            coeffs: vec![ctx.cone()],
        })
    }

    pub fn nu_twice(&self) -> i64 {
        self.nu_twice
    }

    /// Power of `t` multiplying the series in `phi_i = t^{q-1/2} w_i`: `0` or `2q`.
    pub fn leading_power(&self) -> usize {
        ((2 * self.param.q() as i64 - 1 + self.nu_twice) / 2) as usize
    }

    pub fn extend_to(&mut self, n_max: usize) -> Result<()> {
        let q4 = 4 * self.param.q() as isize;
        let shift = 2 * self.param.p() as isize + q4;
        while self.coeffs.len() <= n_max {
            let n = self.coeffs.len() as isize;
            let mut rhs: Option<Complex> = None;
            if let Some(c) = nonzero(&self.coeffs, n - q4) {
                rhs = Some(&self.k_energy * c);
            }
            if let Some(c) = nonzero(&self.coeffs, n - shift) {
                let t = &self.k_coupling * c;
                rhs = Some(match rhs {
                    Some(r) => &r + &t,
                    None => t,
                });
            }
            let pivot = n as i64 * (n as i64 + self.nu_twice - 1);
            let c = match (pivot, rhs) {
                (0, Some(r)) if !r.is_zero() => return Err(Error::DegenerateIndex { n: n as usize }),
                (0, _) | (_, None) => self.coeffs[0].zero_like(),
                (piv, Some(r)) => r.div_int(piv),
            };
            self.coeffs.push(c);
        }
        Ok(())
    }

    /// `|n(n+2nu-1)c_n + 4q^2 E c_{n-4q} + 4q^2 s c_{n-2p-4q}|` relative to the largest coefficient.
    pub fn max_residual(&self) -> f64 {
        let q4 = 4 * self.param.q() as isize;
        let shift = 2 * self.param.p() as isize + q4;
        let scale = self.coeffs.iter().map(|c| c.abs_f64()).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for n in 1..self.coeffs.len() as isize {
            let pivot = n as i64 * (n as i64 + self.nu_twice - 1);
            let mut r = self.coeffs[n as usize].mul_int(pivot);
            if let Some(c) = at(&self.coeffs, n - q4) {
                r -= &(&self.k_energy * c);
            }
            if let Some(c) = at(&self.coeffs, n - shift) {
                r -= &(&self.k_coupling * c);
            }
            worst = worst.max(r.abs_f64() / scale.max(f64::MIN_POSITIVE));
        }
        worst
    }
}

/// `c_{0..=n}` of the Frobenius solution `w_i`.
pub fn frobenius_coefficients(
    param: &ExponentParam,
    branch: Branch,
    i: usize,
    energy: &Complex,
    n: usize,
    max_terms: usize,
    ctx: &Ctx,
) -> Result<FrobeniusSolution> {
    if n > max_terms {
        return Err(Error::Convergence { terms: max_terms, tail: f64::INFINITY });
    }
    let mut s = FrobeniusSolution::new(param, branch, i, energy, ctx)?;
    s.extend_to(n)?;
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct ThomeSolution {
    pub param: ExponentParam,
    pub branch: Branch,
    pub index: usize,
    pub energy: Complex,
    pub alpha: Complex,
    pub mu: Complex,
    pub beta: Complex,
    pub gamma: Complex,
    inv_two_alpha: Complex,
    k_energy: Complex,
    /// `-q^2 + 1/4` (general) or `-15/4` (half)
    k_const: Real,
    pub coeffs: Vec<Complex>,
}

impl ThomeSolution {
    pub fn new(param: &ExponentParam, branch: Branch, j: usize, energy: &Complex, ctx: &Ctx) -> Result<Self> {
        if j != 3 && j != 4 {
            return Err(Error::Domain(format!("Thomé index must be 3 or 4, got {j}")));
        }
        let alpha = branch.alpha(param, j, ctx);
        let q = param.q() as i64;
        let mut mu = Complex::from_real(param.mu(ctx));
        let mut beta = ctx.czero();
        let mut gamma = ctx.czero();
        let k_const;
        match param.regime() {
            Regime::General => k_const = &ctx.int(-q * q) + &ctx.ratio(1, 4),
            Regime::Quadratic => {
                // The E-term sits at the same order as a_m; absorb it into mu.
                mu = &mu - &(&energy.mul_int(2 * q * q) / &alpha);
                k_const = &ctx.int(-q * q) + &ctx.ratio(1, 4);
            }
            Regime::Half => {
                beta = &energy.mul_int(-8) / &alpha;
                gamma = -&(&beta.sqr() / &alpha.mul_int(2));
                k_const = ctx.ratio(-15, 4);
            }
            Regime::Linear => {
                return Err(Error::RegimeMismatch { operation: "Thomé expansion", regime: "linear" });
            }
        }
        Ok(ThomeSolution {
            param: *param,
            branch,
            index: j,
            energy: energy.clone(),
            inv_two_alpha: alpha.mul_int(2).recip(),
            alpha,
            mu,
            beta,
            gamma,
            k_energy: energy.mul_int(4 * q * q),
            k_const,
            coeffs: vec![ctx.cone()],
        })
    }

    pub fn extend_to(&mut self, m_max: usize) {
        while self.coeffs.len() <= m_max {
            let m = self.coeffs.len();
            let rhs = match self.param.regime() {
                Regime::Half => self.half_rhs(m),
                _ => self.general_rhs(m),
            };
            let a = (&rhs * &self.inv_two_alpha).div_int(m as i64);
            self.coeffs.push(a);
        }
    }

    fn general_rhs(&self, m: usize) -> Complex {
        let p = self.param.p() as isize;
        let q2 = 2 * self.param.q() as isize;
        let ell = p + q2;
        let m = m as isize;
        let mut rhs = self.coeffs[0].zero_like();
        if p > q2 {
            if let Some(a) = nonzero(&self.coeffs, m - (p - q2)) {
                rhs += &(&self.k_energy * a);
            }
        }
        let k = m - ell;
        if let Some(a) = nonzero(&self.coeffs, k) {
            // (mu - k)(mu - k - 1) - q^2 + 1/4
            let mk = &self.mu - &self.mu.int_like(k as i64);
            let f = &(&mk * &(&mk - &mk.int_like(1))) + &Complex::from_real(self.k_const.clone());
            rhs += &(&f * a);
        }
        rhs
    }

    fn half_rhs(&self, m: usize) -> Complex {
        let m = m as isize;
        let c = &self.coeffs;
        let mut rhs = c[0].zero_like();
        if let Some(a) = nonzero(c, m - 1) {
            rhs += &(&(&self.beta * &self.gamma).mul_int(2) * a);
        }
        if let Some(a) = nonzero(c, m - 2) {
            rhs -= &(&self.beta.mul_int(2 * (m as i64 - 1)) * a);
        }
        if let Some(a) = nonzero(c, m - 3) {
            rhs += &(&self.gamma.sqr() * a);
        }
        if let Some(a) = nonzero(c, m - 4) {
            rhs -= &(&self.gamma.mul_int(2 * (m as i64 - 2)) * a);
        }
        if let Some(a) = nonzero(c, m - 5) {
            let f = Complex::from_real(&self.k_const + &self.k_const.int_like((m as i64 - 3) * (m as i64 - 2)));
            rhs += &(&f * a);
        }
        rhs
    }

    /// Largest relative recurrence residual over the stored table.
    pub fn max_residual(&self) -> f64 {
        let mut check = ThomeSolution { coeffs: vec![self.coeffs[0].clone()], ..self.clone() };
        check.extend_to(self.coeffs.len() - 1);
        let scale = self.coeffs.iter().map(|c| c.abs_f64()).fold(0.0, f64::max);
        self.coeffs
            .iter()
            .zip(check.coeffs.iter())
            .map(|(a, b)| (a - b).abs_f64() / scale.max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }
}

/// `a_{0..=m}` of the Thomé solution `w_j`.
pub fn thome_coefficients(
    param: &ExponentParam,
    branch: Branch,
    j: usize,
    energy: &Complex,
    m: usize,
    max_terms: usize,
    ctx: &Ctx,
) -> Result<ThomeSolution> {
    if m > max_terms {
        return Err(Error::Convergence { terms: max_terms, tail: f64::INFINITY });
    }
    let mut s = ThomeSolution::new(param, branch, j, energy, ctx)?;
    s.extend_to(m);
    Ok(s)
}

/// Coefficients `c-hat_{n,i,j}` entering the Wronskian sums for a = 1/2.
#[derive(Debug, Clone)]
pub struct ModifiedFrobenius {
    pub branch: Branch,
    pub i: usize,
    pub j: usize,
    nu_twice: i64,
    beta: Complex,
    gamma: Complex,
    k_energy: Complex,
    k_coupling: Complex,
    pub coeffs: Vec<Complex>,
}

impl ModifiedFrobenius {
    pub fn new(param: &ExponentParam, thome: &ThomeSolution, i: usize, ctx: &Ctx) -> Result<Self> {
        if param.regime() != Regime::Half {
            return Err(Error::RegimeMismatch { operation: "modified Frobenius coefficients", regime: param.regime().name() });
        }
        if i != 1 && i != 2 {
            return Err(Error::Domain(format!("Frobenius index must be 1 or 2, got {i}")));
        }
        Ok(ModifiedFrobenius {
            branch: thome.branch,
            i,
            j: thome.index,
            nu_twice: param.nu_twice(i),
            beta: thome.beta.clone(),
            gamma: thome.gamma.clone(),
            k_energy: thome.energy.mul_int(-16),
            k_coupling: thome.branch.coupling(ctx).mul_int(-16),
            coeffs: vec![ctx.cone()],
        })
    }

    pub fn extend_to(&mut self, n_max: usize) -> Result<()> {
        while self.coeffs.len() <= n_max {
            let n = self.coeffs.len() as isize;
            let nl = n as i64;
            let c = &self.coeffs;
            let b = &self.beta;
            let g = &self.gamma;
            let mut rhs = c[0].zero_like();
            // 2(n-1+nu) = 2n - 2 + 2nu
            if let Some(v) = nonzero(c, n - 1) {
                rhs += &(&g.mul_int(2 * nl - 2 + self.nu_twice) * v);
            }
            if let Some(v) = nonzero(c, n - 2) {
                rhs -= &(&g.sqr() * v);
            }
            if let Some(v) = nonzero(c, n - 3) {
                rhs += &(&b.mul_int(2 * nl - 4 + self.nu_twice) * v);
            }
            if let Some(v) = nonzero(c, n - 4) {
                rhs -= &(&(b * g).mul_int(2) * v);
            }
            if let Some(v) = nonzero(c, n - 6) {
                rhs -= &(&b.sqr() * v);
            }
            if let Some(v) = nonzero(c, n - 8) {
                rhs += &(&self.k_energy * v);
            }
            if let Some(v) = nonzero(c, n - 10) {
                rhs += &(&self.k_coupling * v);
            }
            let pivot = nl * (nl + self.nu_twice - 1);
            let next = if pivot == 0 {
                // seed: gamma (beta/3 + gamma^3/24)
                let g3 = &g.sqr() * g;
                g * &(&b.div_int(3) + &g3.div_int(24))
            } else {
                rhs.div_int(pivot)
            };
            self.coeffs.push(next);
        }
        Ok(())
    }
}

pub fn modified_frobenius_coefficients(
    param: &ExponentParam,
    thome: &ThomeSolution,
    i: usize,
    n: usize,
    ctx: &Ctx,
) -> Result<ModifiedFrobenius> {
    let mut s = ModifiedFrobenius::new(param, thome, i, ctx)?;
    s.extend_to(n)?;
    Ok(s)
}

/// `t = x^{1/(2q)}` for `x >= 0`.
pub fn t_of_x(param: &ExponentParam, x: &Real, ctx: &Ctx) -> Real {
    if x.is_zero() {
        return x.clone();
    }
    let q2 = 2 * param.q() as i64;
    if q2 == 2 {
        return x.sqrt();
    }
    x.powr(&ctx.ratio(1, q2), ctx)
}

/// Sums the Frobenius series at `x >= 0`, growing the table as needed.
///
/// Truncation: stop once `2(p+2q)` consecutive terms are below
/// `tol * |partial sum|`; the error estimate adds the roundoff implied by the
/// largest term.
pub fn evaluate_frobenius(sol: &mut FrobeniusSolution, x: &Real, tol: f64, max_terms: usize, ctx: &Ctx) -> Result<SeriesValue> {
    if x.is_negative() {
        return Err(Error::Domain(format!("Frobenius series evaluated at negative x = {}", x.to_f64())));
    }
    let param = sol.param;
    let q2 = 2 * param.q() as usize;
    let e = sol.leading_power();
    let run = 2 * param.ell();
    let t = t_of_x(&param, x, ctx);
    if t.is_zero() {
        let value = if e == 0 { ctx.cone() } else { ctx.czero() };
        let deriv = if e == q2 { ctx.cone() } else { ctx.czero() };
        return Ok(SeriesValue { value, deriv, error: 0.0 });
    }
    // phi = sum c_n t^{n+e}; dphi/dx = sum (n+e) c_n t^{n+e-2q} / (2q)
    let mut value = ctx.czero();
    let mut dsum = ctx.czero();
    let mut tp = ctx.one();
    let t_inv = &ctx.one() / &t;
    let mut t_low = t_inv.powi(q2 as u32);
    for _ in 0..e {
        tp = &tp * &t;
        t_low = &t_low * &t;
    }
    let mut quiet = 0usize;
    let mut max_term: f64 = 0.0;
    let mut n = 0usize;
    loop {
        if n >= sol.coeffs.len() {
            if n > max_terms {
                let tail = quiet as f64;
                return Err(Error::Convergence { terms: max_terms, tail });
            }
            sol.extend_to((n + 64).min(max_terms.max(n)))?;
        }
        let c = &sol.coeffs[n];
        if !c.is_zero() {
            let term = c.scale(&tp);
            let dterm = c.scale(&(&t_low.mul_int((n + e) as i64)));
            value += &term;
            dsum += &dterm;
            let mag = term.abs_f64();
            max_term = max_term.max(mag);
            if mag <= tol * value.abs_f64() {
                quiet += 1;
            } else {
                quiet = 0;
            }
        } else {
            quiet += 1;
        }
        if quiet >= run && n > 4 * param.ell() {
            break;
        }
        tp = &tp * &t;
        t_low = &t_low * &t;
        n += 1;
    }
    let deriv = dsum.div_int(q2 as i64);
    let scale = value.abs_f64().max(f64::MIN_POSITIVE);
    let error = tol + ctx.epsilon() * max_term / scale;
    Ok(SeriesValue { value, deriv, error })
}

/// Optimally truncated Thomé expansion of `phi_j` at `x > 0`.
///
/// Terms are grouped in blocks of `p+2q` (zero coefficients recur with that
/// stride). Summation stops at the block preceding the first growing block or
/// once a block falls below `tol`; `error` is the next block's size relative
/// to the sum. For a = 1/2 the initial rise of the terms is not counted as
/// growth.
pub fn evaluate_thome_asymptotic(sol: &mut ThomeSolution, x: &Real, tol: f64, max_terms: usize, ctx: &Ctx) -> Result<SeriesValue> {
    if !(x.to_f64() > 0.0) {
        return Err(Error::Domain(format!("Thomé expansion needs x > 0, got {}", x.to_f64())));
    }
    let param = sol.param;
    let ell = param.ell();
    let q = param.q() as i64;
    let t = t_of_x(&param, x, ctx);
    let t_inv = &ctx.one() / &t;
    let mut sum = ctx.czero();
    let mut dsum = ctx.czero();
    let mut tp = ctx.one();
    let mut prev_block = f64::INFINITY;
    let error;
    let mut block = 0usize;
    // a = 1/2: terms first climb like (c/t)^m/m! with c = |beta gamma/alpha|
    let hump = if param.regime() == Regime::Half {
        let c = sol.beta.abs_f64() * sol.gamma.abs_f64() / sol.alpha.abs_f64();
        libm::ceil(2.0 * c / t.to_f64() / ell as f64) as usize
    } else {
        0
    };
    loop {
        let start = block * ell;
        let end = start + ell;
        if end > max_terms {
            error = prev_block / sum.abs_f64().max(f64::MIN_POSITIVE);
            break;
        }
        sol.extend_to(end);
        let mut bsum = ctx.czero();
        let mut bdsum = ctx.czero();
        let mut bmax: f64 = 0.0;
        let mut tq = tp.clone();
        for m in start..end {
            let a = &sol.coeffs[m];
            if !a.is_zero() {
                let term = a.scale(&tq);
                bmax = bmax.max(term.abs_f64());
                bdsum -= &(&term.mul_int(m as i64) * &Complex::from_real(t_inv.clone()));
                bsum += &term;
            }
            tq = &tq * &t_inv;
        }
        let scale = (&sum + &bsum).abs_f64().max(f64::MIN_POSITIVE);
        if block > hump && bmax >= prev_block {
            error = bmax / scale;
            break;
        }
        sum += &bsum;
        dsum += &bdsum;
        prev_block = bmax;
        tp = tq;
        block += 1;
        if block > 1 && bmax <= tol * scale {
            error = bmax / scale;
            break;
        }
    }
    // w = exp(Phi) t^mu S, phi = t^{q-1/2} w
    let ell_r = ctx.int(ell as i64);
    let t_ell = t.powi(ell as u32);
    let mut phase = (&sol.alpha.scale(&t_ell)).scale(&(&ctx.one() / &ell_r));
    let mut dphase = sol.alpha.scale(&(&t_ell * &t_inv));
    if param.regime() == Regime::Half {
        let t3 = t.powi(3);
        phase = &phase + &(&sol.beta.scale(&t3).div_int(3) + &sol.gamma.scale(&t));
        dphase = &dphase + &(&sol.beta.scale(&t.sqr()) + &sol.gamma);
    }
    let expo = &Complex::from_real(&ctx.int(2 * q - 1).div_int(2) * &ctx.one()) + &sol.mu;
    let ln_t = Complex::from_real(t.ln(ctx));
    let pref = (&phase + &(&expo * &ln_t)).exp(ctx);
    let value = &pref * &sum;
    // dphi/dt = pref [ (Phi' + expo/t) S + S' ]
    let inner = &(&(&dphase + &expo.scale(&t_inv)) * &sum) + &dsum;
    let dphi_dt = &pref * &inner;
    let dx_dt = t.powi((2 * q - 1) as u32).mul_int(2 * q);
    let deriv = Complex::new(&dphi_dt.re / &dx_dt, &dphi_dt.im / &dx_dt);
    Ok(SeriesValue { value, deriv, error })
}

/// Like [`evaluate_thome_asymptotic`] but rejects estimates above `tol`.
pub fn evaluate_thome_checked(sol: &mut ThomeSolution, x: &Real, tol: f64, max_terms: usize, ctx: &Ctx) -> Result<SeriesValue> {
    let v = evaluate_thome_asymptotic(sol, x, tol, max_terms, ctx)?;
    if v.error > tol {
        return Err(Error::AsymptoticRange { estimate: v.error });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Sigma;

    fn c64(z: &Complex) -> num_complex::Complex64 {
        let (re, im) = z.to_f64();
        num_complex::Complex64::new(re, im)
    }

    #[test]
    fn frobenius_seed_values() {
        let ctx = Ctx::with_digits(30);
        let e = ctx.complex(1.7, -0.4);
        let a3 = ExponentParam::new(3, 1).unwrap();
        let s = frobenius_coefficients(&a3, Branch::physical(Sigma::Plus), 1, &e, 12, 1000, &ctx).unwrap();
        assert_eq!(c64(&s.coeffs[0]), num_complex::Complex64::new(1.0, 0.0));
        let want = -&e.div_int(2);
        assert!((&s.coeffs[4] - &want).abs_f64() < 1e-28);
        for (p, q) in [(3, 1), (5, 2), (11, 4), (2, 1), (1, 2)] {
            let a = ExponentParam::new(p, q).unwrap();
            let s = frobenius_coefficients(&a, Branch::pt(Sigma::Minus), 1, &e, 40, 1000, &ctx).unwrap();
            assert!(s.coeffs[2 * q as usize].is_zero(), "a = {p}/{q}");
            assert!(s.max_residual() < 1e-28);
        }
    }

    #[test]
    fn thome_first_coefficient_and_conjugates() {
        let ctx = Ctx::with_digits(30);
        let a3 = ExponentParam::new(3, 1).unwrap();
        let e = ctx.complex(2.5, 0.0);
        let t3 = thome_coefficients(&a3, Branch::physical(Sigma::Plus), 3, &e, 40, 1000, &ctx).unwrap();
        let t4 = thome_coefficients(&a3, Branch::physical(Sigma::Plus), 4, &e, 40, 1000, &ctx).unwrap();
        assert!((&t3.alpha - &ctx.complex(0.0, 2.0)).abs_f64() < 1e-28);
        assert!((&t3.alpha + &t4.alpha).abs_f64() < 1e-28);
        assert!((&t3.mu - &ctx.complex(-2.0, 0.0)).abs_f64() < 1e-28);
        assert!((&t3.coeffs[1] - &ctx.complex(0.0, -2.5)).abs_f64() < 1e-28);
        for (a, b) in t3.coeffs.iter().zip(t4.coeffs.iter()) {
            assert!((&a.conj() - b).abs_f64() <= 1e-25 * a.abs_f64().max(1.0));
        }
        assert!(t3.max_residual() < 1e-28);
    }

    #[test]
    fn half_exponent_coefficients() {
        let ctx = Ctx::with_digits(30);
        let half = ExponentParam::new(1, 2).unwrap();
        let e = ctx.complex(0.8, 0.3);
        let th = ThomeSolution::new(&half, Branch::physical(Sigma::Plus), 3, &e, &ctx).unwrap();
        let beta = &e.mul_int(-8) / &th.alpha;
        assert!((&th.beta - &beta).abs_f64() < 1e-28);
        let gamma = -&(&beta.sqr() / &th.alpha.mul_int(2));
        assert!((&th.gamma - &gamma).abs_f64() < 1e-28);
        let m = modified_frobenius_coefficients(&half, &th, 1, 12, &ctx).unwrap();
        let g3 = &th.gamma.sqr() * &th.gamma;
        let seed = &th.gamma * &(&th.beta.div_int(3) + &g3.div_int(24));
        assert!((&m.coeffs[4] - &seed).abs_f64() < 1e-28);
        assert_eq!(c64(&m.coeffs[0]), num_complex::Complex64::new(1.0, 0.0));

        // at zero energy the modified table is the plain Frobenius one
        let zero = ctx.czero();
        for i in 1..=2 {
            let th0 = ThomeSolution::new(&half, Branch::physical(Sigma::Minus), 4, &zero, &ctx).unwrap();
            let m0 = modified_frobenius_coefficients(&half, &th0, i, 60, &ctx).unwrap();
            let f0 = frobenius_coefficients(&half, Branch::physical(Sigma::Minus), i, &zero, 60, 1000, &ctx).unwrap();
            for (a, b) in m0.coeffs.iter().zip(f0.coeffs.iter()) {
                assert!((a - b).abs_f64() < 1e-28);
            }
        }
        assert!(ModifiedFrobenius::new(&ExponentParam::new(3, 1).unwrap(), &th, 1, &ctx).is_err());
    }

    #[test]
    fn origin_values() {
        let ctx = Ctx::with_digits(30);
        let e = ctx.complex(1.0, 0.0);
        for (p, q) in [(3, 1), (5, 2), (1, 2)] {
            let a = ExponentParam::new(p, q).unwrap();
            let mut s1 = FrobeniusSolution::new(&a, Branch::physical(Sigma::Plus), 1, &e, &ctx).unwrap();
            let mut s2 = FrobeniusSolution::new(&a, Branch::physical(Sigma::Plus), 2, &e, &ctx).unwrap();
            let v1 = evaluate_frobenius(&mut s1, &ctx.zero(), 1e-30, 1000, &ctx).unwrap();
            let v2 = evaluate_frobenius(&mut s2, &ctx.zero(), 1e-30, 1000, &ctx).unwrap();
            assert_eq!(c64(&v1.value), num_complex::Complex64::new(1.0, 0.0));
            assert!(v2.value.is_zero());
            assert_eq!(c64(&v2.deriv), num_complex::Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn frobenius_agrees_with_direct_integration() {
        use crate::ode::{integrate_half_line, OdeOptions};
        let ctx = Ctx::with_digits(30);
        let a3 = ExponentParam::new(3, 1).unwrap();
        let e = ctx.complex(1.0, 0.0);
        let mut s = FrobeniusSolution::new(&a3, Branch::physical(Sigma::Plus), 1, &e, &ctx).unwrap();
        let v = evaluate_frobenius(&mut s, &ctx.real(0.5), 1e-30, 1000, &ctx).unwrap();
        // phi_1 is a power series in x with phi(0) = 1, phi'(0) = 0
        let one = num_complex::Complex64::new(1.0, 0.0);
        let zero = num_complex::Complex64::new(0.0, 0.0);
        let opts = OdeOptions { rtol: 1e-13, atol: 1e-15, ..OdeOptions::default() };
        let y = integrate_half_line(&a3, one, one, 0.0, [one, zero], 0.5, &opts).unwrap();
        assert!((c64(&v.value) - y[0]).norm() < 1e-11);
        assert!((c64(&v.deriv) - y[1]).norm() < 1e-11);
    }

    #[test]
    fn thome_leading_order_and_flux_direction() {
        let ctx = Ctx::with_digits(30);
        let a3 = ExponentParam::new(3, 1).unwrap();
        let e = ctx.complex(1.3, 0.0);
        let x = 9.0f64;
        let mut s3 = ThomeSolution::new(&a3, Branch::physical(Sigma::Plus), 3, &e, &ctx).unwrap();
        let mut s4 = ThomeSolution::new(&a3, Branch::physical(Sigma::Plus), 4, &e, &ctx).unwrap();
        let v3 = evaluate_thome_asymptotic(&mut s3, &ctx.real(x), 1e-25, 2000, &ctx).unwrap();
        let v4 = evaluate_thome_asymptotic(&mut s4, &ctx.real(x), 1e-25, 2000, &ctx).unwrap();
        let lead = num_complex::Complex64::new(0.0, 0.4 * libm::pow(x, 2.5)).exp() * libm::pow(x, -0.75);
        // at E = 0 the first correction sits at t^{-ell}
        let mut z3 = ThomeSolution::new(&a3, Branch::physical(Sigma::Plus), 3, &ctx.czero(), &ctx).unwrap();
        let z = evaluate_thome_asymptotic(&mut z3, &ctx.real(x), 1e-25, 2000, &ctx).unwrap();
        assert!((c64(&z.value) - lead).norm() < 0.01 * lead.norm());
        assert!((c64(&v3.value).conj() - c64(&v4.value)).norm() < 1e-20);
        let flux = |v: &SeriesValue| 2.0 * (c64(&v.value).conj() * c64(&v.deriv)).im;
        assert!(flux(&v3) > 0.0 && flux(&v4) < 0.0);

        let mut d = ThomeSolution::new(&a3, Branch::physical(Sigma::Minus), 3, &e, &ctx).unwrap();
        let mut last = f64::INFINITY;
        for x in [3.0, 4.0, 5.0, 6.0] {
            let m = evaluate_thome_asymptotic(&mut d, &ctx.real(x), 1e-25, 2000, &ctx).unwrap().value.abs_f64();
            assert!(m < last);
            last = m;
        }
    }

    #[test]
    fn truncation_orders_agree() {
        let ctx = Ctx::with_digits(30);
        let a = ExponentParam::new(5, 2).unwrap();
        let e = ctx.complex(3.0, 1.0);
        let x = ctx.real(1.7);
        let mut s = FrobeniusSolution::new(&a, Branch::pt(Sigma::Plus), 2, &e, &ctx).unwrap();
        let loose = evaluate_frobenius(&mut s, &x, 1e-20, 5000, &ctx).unwrap();
        let tight = evaluate_frobenius(&mut s, &x, 1e-28, 5000, &ctx).unwrap();
        assert!((&loose.value - &tight.value).abs_f64() < 10.0 * 1e-20 * tight.value.abs_f64());
        assert!(evaluate_frobenius(&mut s, &ctx.real(-1.0), 1e-20, 5000, &ctx).is_err());
        assert!(matches!(evaluate_frobenius(&mut FrobeniusSolution::new(&a, Branch::pt(Sigma::Plus), 2, &e, &ctx).unwrap(), &ctx.real(40.0), 1e-28, 50, &ctx), Err(Error::Convergence { .. })));
    }

    #[test]
    fn thome_error_shrinks_with_distance_and_checked_rejects() {
        let ctx = Ctx::with_digits(30);
        let a = ExponentParam::new(3, 1).unwrap();
        let e = ctx.complex(4.0, 0.0);
        let mut s = ThomeSolution::new(&a, Branch::physical(Sigma::Plus), 3, &e, &ctx).unwrap();
        let near = evaluate_thome_asymptotic(&mut s, &ctx.real(1.0), 1e-25, 2000, &ctx).unwrap();
        let far = evaluate_thome_asymptotic(&mut s, &ctx.real(6.0), 1e-25, 2000, &ctx).unwrap();
        assert!(far.error < near.error);
        assert!(matches!(evaluate_thome_checked(&mut s, &ctx.real(0.5), 1e-25, 2000, &ctx), Err(Error::AsymptoticRange { .. })));
        assert!(evaluate_thome_asymptotic(&mut s, &ctx.zero(), 1e-25, 2000, &ctx).is_err());
    }
}

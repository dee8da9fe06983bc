//! Connection factors `T_{i,j}` between the Frobenius pair `phi_1, phi_2`
//! and the Thomé pair `phi_3, phi_4`.
//!
//! The constant Wronskian `W[w_i, w_j]` is recovered by matching the formal
//! expansion of `W[u_{i,j}, u_j]` term by term against the exponential series
//! of `exp(-alpha_j t^{p+2q}/(p+2q))`; the free integer `n0` selects which
//! block of `p+2q` coefficients is matched.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponent::{Branch, ExponentParam, Regime, Sigma, SolverConfig};
use crate::mp::{Complex, Ctx};
use crate::oracles::gamma;
use crate::series::{FrobeniusSolution, ModifiedFrobenius, ThomeSolution};

enum Origin {
    Plain(FrobeniusSolution),
    Modified(ModifiedFrobenius),
}

impl Origin {
    fn ensure(&mut self, n: usize) -> Result<()> {
        match self {
            Origin::Plain(s) => s.extend_to(n),
            Origin::Modified(s) => s.extend_to(n),
        }
    }

    fn coeffs(&self) -> &[Complex] {
        match self {
            Origin::Plain(s) => &s.coeffs,
            Origin::Modified(s) => &s.coeffs,
        }
    }
}

fn get(v: &[Complex], k: isize) -> Option<&Complex> {
    if k < 0 {
        None
    } else {
        v.get(k as usize).filter(|c| !c.is_zero())
    }
}

/// `eta_{n,i,j}` for a run of `n` values, with per-value truncation estimates.
#[derive(Debug, Clone)]
pub struct EtaSequence {
    pub i: usize,
    pub j: usize,
    pub branch: Branch,
    pub n_start: isize,
    pub values: Vec<Complex>,
    /// Relative truncation/roundoff estimate per value.
    pub estimates: Vec<f64>,
    /// Number of Thomé coefficients summed.
    pub terms: usize,
}

impl EtaSequence {
    pub fn get(&self, n: isize) -> Option<&Complex> {
        let k = n - self.n_start;
        if k < 0 {
            None
        } else {
            self.values.get(k as usize)
        }
    }
}

struct EtaInputs {
    origin: Origin,
    thome: ThomeSolution,
    nu_twice: i64,
}

fn eta_inputs(param: &ExponentParam, branch: Branch, i: usize, j: usize, energy: &Complex, ctx: &Ctx) -> Result<EtaInputs> {
    let thome = ThomeSolution::new(param, branch, j, energy, ctx)?;
    let origin = match param.regime() {
        Regime::Half => Origin::Modified(ModifiedFrobenius::new(param, &thome, i, ctx)?),
        Regime::Linear => return Err(Error::RegimeMismatch { operation: "connection factors", regime: "linear" }),
        _ => Origin::Plain(FrobeniusSolution::new(param, branch, i, energy, ctx)?),
    };
    Ok(EtaInputs { origin, thome, nu_twice: param.nu_twice(i) })
}

fn eta_run(param: &ExponentParam, inp: &mut EtaInputs, n_start: isize, count: usize, cfg: &SolverConfig, ctx: &Ctx) -> Result<EtaSequence> {
    let ell = param.ell() as isize;
    let half = param.regime() == Regime::Half;
    let alpha = inp.thome.alpha.clone();
    let two_beta = inp.thome.beta.mul_int(2);
    let two_gamma = inp.thome.gamma.mul_int(2);
    // n + 2m + 1 + nu - mu = base_n + 2m
    let nu = Complex::from_real(ctx.ratio(inp.nu_twice, 2));
    let base0 = &(&nu - &inp.thome.mu) + &ctx.cone();
    let bases: Vec<Complex> = (0..count).map(|k| &base0 + &ctx.cint(n_start as i64 + k as i64)).collect();

    let mut sums: Vec<Complex> = (0..count).map(|_| ctx.czero()).collect();
    let mut quiet = alloc::vec![0usize; count];
    let mut max_term = alloc::vec![0.0f64; count];
    let mut last_term = alloc::vec![0.0f64; count];
    let run = 2 * param.ell();
    let eps = ctx.epsilon();
    let tol = cfg.series_tol;
    let n_last = n_start + count as isize - 1;
    let mut smallest = f64::INFINITY;
    let mut m = 0usize;
    loop {
        if m >= cfg.max_terms {
            return Err(Error::Divergence { terms: cfg.max_terms, smallest });
        }
        inp.thome.extend_to(m);
        let top = n_last + m as isize + 1;
        if top >= 0 {
            inp.origin.ensure(top as usize)?;
        }
        let a = &inp.thome.coeffs[m];
        let c = inp.origin.coeffs();
        let mut all_quiet = true;
        if a.is_zero() {
            for k in 0..count {
                quiet[k] += 1;
                all_quiet &= quiet[k] >= run;
            }
        } else {
            let two_m = ctx.cint(2 * m as i64);
            for k in 0..count {
                let n = n_start + k as isize;
                let km = n + m as isize;
                let mut inner: Option<Complex> = None;
                let mut add = |v: Complex| {
                    inner = Some(match inner.take() {
                        Some(x) => &x + &v,
                        None => v,
                    })
                };
                if let Some(cv) = get(c, km + 1 - ell) {
                    add(&alpha * cv);
                }
                if half {
                    if let Some(cv) = get(c, km - 2) {
                        add(&two_beta * cv);
                    }
                    if let Some(cv) = get(c, km) {
                        add(&two_gamma * cv);
                    }
                }
                if let Some(cv) = get(c, km + 1) {
                    let f = &bases[k] + &two_m;
                    add(-&(&f * cv));
                }
                let mag = match inner {
                    Some(v) => {
                        let term = &v * a;
                        let mag = term.abs_f64();
                        sums[k] += &term;
                        mag
                    }
                    None => 0.0,
                };
                max_term[k] = max_term[k].max(mag);
                last_term[k] = mag;
                let floor = (tol * sums[k].abs_f64()).max(eps * max_term[k]);
                if mag <= floor {
                    quiet[k] += 1;
                } else {
                    quiet[k] = 0;
                }
                if mag > 0.0 {
                    smallest = smallest.min(mag);
                }
                all_quiet &= quiet[k] >= run;
            }
        }
        m += 1;
        if all_quiet && m > run {
            break;
        }
    }
    let estimates = (0..count)
        .map(|k| {
            let s = sums[k].abs_f64();
            if s == 0.0 {
                0.0
            } else {
                (last_term[k] + eps * max_term[k]) / s
            }
        })
        .collect();
    Ok(EtaSequence { i: 0, j: 0, branch: inp.thome.branch, n_start, values: sums, estimates, terms: m })
}

/// `eta_{n,i,j}` for `n = n_start .. n_start + count`.
pub fn eta_coefficients(
    param: &ExponentParam,
    branch: Branch,
    i: usize,
    j: usize,
    energy: &Complex,
    n_start: isize,
    count: usize,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<EtaSequence> {
    let mut inp = eta_inputs(param, branch, i, j, energy, ctx)?;
    let mut seq = eta_run(param, &mut inp, n_start, count, cfg, ctx)?;
    seq.i = i;
    seq.j = j;
    Ok(seq)
}

/// How the factor `(-alpha_j)^{-s}` was continued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinusSign {
    /// `-alpha = e^{+i pi} alpha`
    PlusIPi,
    /// `-alpha = e^{-i pi} alpha`
    MinusIPi,
    /// Stokes ray: average of both continuations.
    StokesAverage,
}

#[derive(Debug, Clone)]
pub struct WronskianValue {
    pub value: Complex,
    pub n0: usize,
    /// `|W(n0) - W(n0+1)|`; `None` without the shift check.
    pub shift_difference: Option<f64>,
    pub minus_sign: MinusSign,
}

/// Lower bound on `n0` keeping every `Re(n0 + 1 + delta_L) > 1/2`.
fn first_n0(param: &ExponentParam, inp: &EtaInputs) -> usize {
    let ell = param.ell() as f64;
    let d = (inp.nu_twice as f64 / 2.0 + inp.thome.mu.re.to_f64()) / ell;
    let need = libm::ceil(0.5 - 1.0 - d + 1e-9);
    (need.max(1.0)) as usize
}

/// `sum_L Gamma(n0+1+delta_L) ((-alpha)/ell)^{-(n0+delta_L)} eta_{ell n0 + L}` for a given `arg(-alpha)`.
fn block_sum(param: &ExponentParam, inp: &EtaInputs, eta: &EtaSequence, n0: usize, arg_minus_alpha: &crate::mp::Real, ctx: &Ctx) -> Result<Complex> {
    let ell = param.ell() as i64;
    let alpha = &inp.thome.alpha;
    // Log(-alpha/ell) = ln|alpha/ell| + i arg
    let ln_mod = alpha.abs().div_int(ell).ln(ctx);
    let log_ma = Complex::new(ln_mod, arg_minus_alpha.clone());
    let nu_mu = &Complex::from_real(ctx.ratio(inp.nu_twice, 2)) + &inp.thome.mu;
    let mut w = ctx.czero();
    for l in 0..ell {
        let n = ell * n0 as i64 + l;
        let Some(e) = eta.get(n as isize) else {
            return Err(Error::Extraction { n0 });
        };
        if e.is_zero() {
            continue;
        }
        let delta = (&nu_mu + &ctx.cint(l)).div_int(ell);
        let s = &delta + &ctx.cint(n0 as i64);
        let g = gamma(&(&s + &ctx.cone()), ctx)?;
        let pw = (-&(&s * &log_ma)).exp(ctx);
        w += &(&(&g * &pw) * e);
    }
    Ok(w)
}

fn wronskian_at(param: &ExponentParam, branch: Branch, inp: &EtaInputs, j: usize, eta: &EtaSequence, n0: usize, ctx: &Ctx) -> Result<(Complex, MinusSign)> {
    let pi = ctx.pi();
    if branch.is_stokes(j) {
        let up = block_sum(param, inp, eta, n0, &pi, ctx)?;
        let down = block_sum(param, inp, eta, n0, &-&pi, ctx)?;
        return Ok(((&up + &down).div_int(2), MinusSign::StokesAverage));
    }
    let arg_alpha = inp.thome.alpha.arg(ctx);
    let (arg, sign) = if arg_alpha.is_negative() || arg_alpha.is_zero() {
        (&arg_alpha + &pi, MinusSign::PlusIPi)
    } else {
        (&arg_alpha - &pi, MinusSign::MinusIPi)
    };
    Ok((block_sum(param, inp, eta, n0, &arg, ctx)?, sign))
}

fn wronskian_with(param: &ExponentParam, branch: Branch, mut inp: EtaInputs, j: usize, cfg: &SolverConfig, ctx: &Ctx) -> Result<WronskianValue> {
    let ell = param.ell();
    let start = first_n0(param, &inp);
    let mut last_err = Error::Extraction { n0: start };
    for n0 in [start, start + 1] {
        let blocks = if cfg.wronskian_shift_check { 2 } else { 1 };
        let eta = eta_run(param, &mut inp, (ell * n0) as isize, blocks * ell, cfg, ctx)?;
        let first = match wronskian_at(param, branch, &inp, j, &eta, n0, ctx) {
            Ok(v) => v,
            Err(e @ Error::GammaPole(_)) => {
                last_err = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        if !cfg.wronskian_shift_check {
            return Ok(WronskianValue { value: first.0, n0, shift_difference: None, minus_sign: first.1 });
        }
        let second = match wronskian_at(param, branch, &inp, j, &eta, n0 + 1, ctx) {
            Ok(v) => v,
            Err(e @ Error::GammaPole(_)) => {
                last_err = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        let diff = (&first.0 - &second.0).abs_f64();
        let value = (&first.0 + &second.0).div_int(2);
        return Ok(WronskianValue { value, n0, shift_difference: Some(diff), minus_sign: first.1 });
    }
    match last_err {
        Error::GammaPole(_) => Err(Error::Extraction { n0: start }),
        e => Err(e),
    }
}

/// The constant Wronskian `W_t[w_i, w_j]` of a Frobenius and a Thomé solution.
pub fn wronskian_frobenius_thome(
    param: &ExponentParam,
    branch: Branch,
    i: usize,
    j: usize,
    energy: &Complex,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<WronskianValue> {
    let inp = eta_inputs(param, branch, i, j, energy, ctx)?;
    wronskian_with(param, branch, inp, j, cfg, ctx)
}

/// Same sum with an explicit `arg(-alpha_j)`; exposed for consistency checks
/// of the Stokes average.
pub fn wronskian_with_arg(
    param: &ExponentParam,
    branch: Branch,
    i: usize,
    j: usize,
    energy: &Complex,
    n0: usize,
    arg_minus_alpha: &crate::mp::Real,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<Complex> {
    let mut inp = eta_inputs(param, branch, i, j, energy, ctx)?;
    let ell = param.ell();
    let eta = eta_run(param, &mut inp, (ell * n0) as isize, ell, cfg, ctx)?;
    block_sum(param, &inp, &eta, n0, arg_minus_alpha, ctx)
}

#[derive(Debug, Clone)]
pub struct WronskianDiag {
    pub i: usize,
    pub j: usize,
    pub n0: usize,
    pub minus_sign: MinusSign,
}

/// Connection factors for one branch; `t[i-1][j-3] = T_{i,j}`.
#[derive(Debug, Clone)]
pub struct ConnectionFactors {
    pub branch: Branch,
    pub energy: Complex,
    pub t: [[Complex; 2]; 2],
    /// `|det T - q/alpha_4| / |q/alpha_4|`
    pub determinant_residual: f64,
    /// Largest `|T(n0) - T(n0+1)|` relative to the largest `|T|`.
    pub shift_residual: f64,
    pub diagnostics: Vec<WronskianDiag>,
}

impl ConnectionFactors {
    pub fn get(&self, i: usize, j: usize) -> &Complex {
        &self.t[i - 1][j - 3]
    }
}

/// `T_{1,j}, T_{2,j}` for one column `j`, without the determinant test.
#[derive(Debug, Clone)]
pub struct ConnectionColumn {
    pub branch: Branch,
    pub j: usize,
    pub t: [Complex; 2],
    pub shift_residual: f64,
    pub diagnostics: Vec<WronskianDiag>,
}

/// The partner index: `T_{i,3}` uses `W[w_i, w_4]` and vice versa.
fn partner(j: usize) -> usize {
    7 - j
}

pub fn connection_column(
    param: &ExponentParam,
    branch: Branch,
    energy: &Complex,
    j: usize,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<ConnectionColumn> {
    if j != 3 && j != 4 {
        return Err(Error::Domain(format!("Thomé index must be 3 or 4, got {j}")));
    }
    let extra = guard_digits(param, energy);
    if extra > 0 {
        let hi = ctx.boosted(extra);
        let mut tight = cfg.clone();
        tight.series_tol = cfg.series_tol * libm::pow(10.0, -(extra as f64));
        let mut col = column_at(param, branch, energy, j, &tight, &hi)?;
        col.t = [col.t[0].rounded(ctx), col.t[1].rounded(ctx)];
        return Ok(col);
    }
    column_at(param, branch, energy, j, cfg, ctx)
}

/// Extra decimal digits needed to absorb the cancellation in the
/// Wronskian sums, which grows like `exp(q|E|/|p-2q|)`. For a = 1/2 the
/// largest summand is instead about `10^(0.6 |E|^3)` times the result.
pub fn guard_digits(param: &ExponentParam, energy: &Complex) -> u32 {
    if param.regime() == Regime::Half {
        let loss = 0.6 * energy.abs_f64().powi(3);
        return if loss < 1.0 { 0 } else { libm::ceil(loss) as u32 + 4 };
    }
    let gap = (param.p() as i64 - 2 * param.q() as i64).unsigned_abs();
    if gap == 0 {
        return 0;
    }
    let loss = param.q() as f64 * energy.abs_f64() / gap as f64 / core::f64::consts::LN_10;
    if loss < 1.0 {
        0
    } else {
        libm::ceil(loss) as u32 + 4
    }
}

fn column_at(param: &ExponentParam, branch: Branch, energy: &Complex, j: usize, cfg: &SolverConfig, ctx: &Ctx) -> Result<ConnectionColumn> {
    let k = partner(j);
    let denom = branch.alpha(param, k, ctx).mul_int(2);
    let mut t = [ctx.czero(), ctx.czero()];
    let mut diffs = [0.0f64; 2];
    let mut diagnostics = Vec::new();
    for i in 1..=2 {
        let w = wronskian_frobenius_thome(param, branch, i, k, energy, cfg, ctx)?;
        t[i - 1] = &w.value / &denom;
        diffs[i - 1] = w.shift_difference.unwrap_or(0.0) / denom.abs_f64();
        diagnostics.push(WronskianDiag { i, j: k, n0: w.n0, minus_sign: w.minus_sign });
    }
    let scale = t.iter().map(|v| v.abs_f64()).fold(0.0, f64::max);
    let shift_residual = if scale > 0.0 { diffs.iter().cloned().fold(0.0, f64::max) / scale } else { 0.0 };
    Ok(ConnectionColumn { branch, j, t, shift_residual, diagnostics })
}

/// All four connection factors with determinant and shift diagnostics.
///
/// Fails with [`Error::Inconsistency`] when the determinant identity is
/// violated beyond `10^(-digits/4)`, which signals exhausted precision.
pub fn connection_factors(param: &ExponentParam, branch: Branch, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<ConnectionFactors> {
    let c3 = connection_column(param, branch, energy, 3, cfg, ctx)?;
    let c4 = connection_column(param, branch, energy, 4, cfg, ctx)?;
    let [t13, t23] = c3.t;
    let [t14, t24] = c4.t;
    let det = &(&t13 * &t24) - &(&t23 * &t14);
    let want = &ctx.cint(param.q() as i64) / &branch.alpha(param, 4, ctx);
    let determinant_residual = (&det - &want).abs_f64() / want.abs_f64();
    let scale3 = t13.abs_f64().max(t23.abs_f64());
    let scale4 = t14.abs_f64().max(t24.abs_f64());
    let scale = scale3.max(scale4);
    let shift_residual = if scale > 0.0 { (c3.shift_residual * scale3).max(c4.shift_residual * scale4) / scale } else { 0.0 };
    let hard = libm::pow(10.0, -(cfg.precision_digits as f64) / 4.0);
    if !(determinant_residual <= hard) {
        return Err(Error::Inconsistency { residual: determinant_residual });
    }
    let mut diagnostics = c3.diagnostics;
    diagnostics.extend(c4.diagnostics);
    Ok(ConnectionFactors {
        branch,
        energy: energy.clone(),
        t: [[t13, t14], [t23, t24]],
        determinant_residual,
        shift_residual,
        diagnostics,
    })
}

/// Both physical branches at once, `(sigma = -1, sigma = +1)`.
pub fn physical_pair(param: &ExponentParam, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<(ConnectionFactors, ConnectionFactors)> {
    let m = connection_factors(param, Branch::physical(Sigma::Minus), energy, cfg, ctx)?;
    let p = connection_factors(param, Branch::physical(Sigma::Plus), energy, cfg, ctx)?;
    Ok((m, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(ctx: &Ctx, re: f64, im: f64) -> Complex {
        ctx.complex(re, im)
    }

    fn assert_close(got: &Complex, want: (f64, f64), tol: f64) {
        let (re, im) = got.to_f64();
        let err = libm::hypot(re - want.0, im - want.1);
        let scale = libm::hypot(want.0, want.1).max(1e-300);
        assert!(err <= tol * scale, "got ({re}, {im}) want {want:?}");
    }

    // Reference values from an independent mpmath implementation of the
    // same sums (40 digits, fixed 900-term inner cutoff).
    #[test]
    fn factors_match_reference_a3() {
        let ctx = Ctx::with_digits(40);
        let cfg = SolverConfig::default();
        let a3 = ExponentParam::new(3, 1).unwrap();
        let e = c(&ctx, 1.0, 0.0);
        let tp = connection_factors(&a3, Branch::physical(Sigma::Plus), &e, &cfg, &ctx).unwrap();
        assert_close(tp.get(1, 3), (0.037745989529694587275, 0.44981909461530720906), 1e-15);
        assert_close(tp.get(2, 4), (0.56195888231031096594, -0.073645854473285798662), 1e-15);
        let tm = connection_factors(&a3, Branch::physical(Sigma::Minus), &e, &cfg, &ctx).unwrap();
        assert_close(tm.get(1, 3), (2.3715287597631519715, 0.0), 1e-15);
        assert_close(tm.get(1, 4), (0.0039961759364932598172, 0.0), 1e-15);
        assert_close(tm.get(2, 3), (0.16283663575314089513, 0.0), 1e-15);
        assert_close(tm.get(2, 4), (0.21110885616895362299, 0.0), 1e-15);
        for t in [&tp, &tm] {
            assert!(t.determinant_residual < 1e-30, "{}", t.determinant_residual);
            assert!(t.shift_residual < 1e-30, "{}", t.shift_residual);
        }
    }

    #[test]
    fn factors_match_reference_complex_and_pt() {
        let ctx = Ctx::with_digits(40);
        let cfg = SolverConfig::default();
        let a3 = ExponentParam::new(3, 1).unwrap();
        let t = connection_factors(&a3, Branch::physical(Sigma::Plus), &c(&ctx, 1.0, -0.5), &cfg, &ctx).unwrap();
        assert_close(t.get(1, 4), (-0.022070888845040000805, -0.18539095464880152616), 1e-15);
        assert_close(t.get(2, 3), (1.0042379014088387408, 0.28229239540887714768), 1e-15);
        let e = Complex::from_real(ctx.parse("1.1562670720").unwrap());
        let t = connection_factors(&a3, Branch::pt(Sigma::Plus), &e, &cfg, &ctx).unwrap();
        assert_close(t.get(1, 3), (0.584721810500802393, 1.2422100352800431127), 1e-15);
        assert_close(t.get(2, 4), (0.22239460001862151772, -0.092118859529034998208), 1e-15);
    }

    #[test]
    fn conjugate_columns_for_real_energy() {
        let ctx = Ctx::with_digits(30);
        let cfg = SolverConfig::with_precision(30);
        let a = ExponentParam::new(7, 2).unwrap();
        let t = connection_factors(&a, Branch::physical(Sigma::Plus), &c(&ctx, 2.3, 0.0), &cfg, &ctx).unwrap();
        for i in 1..=2 {
            let d = (t.get(i, 4) - &t.get(i, 3).conj()).abs_f64();
            assert!(d < 1e-25 * t.get(i, 3).abs_f64());
        }
    }

    #[test]
    fn stokes_average_is_mean_of_both_continuations() {
        let ctx = Ctx::with_digits(40);
        let mut cfg = SolverConfig::default();
        cfg.wronskian_shift_check = false;
        let a3 = ExponentParam::new(3, 1).unwrap();
        let b = Branch::physical(Sigma::Minus);
        let e = c(&ctx, 0.7, 0.0);
        let avg = wronskian_frobenius_thome(&a3, b, 1, 4, &e, &cfg, &ctx).unwrap();
        assert_eq!(avg.minus_sign, MinusSign::StokesAverage);
        let pi = ctx.pi();
        let up = wronskian_with_arg(&a3, b, 1, 4, &e, avg.n0, &pi, &cfg, &ctx).unwrap();
        let down = wronskian_with_arg(&a3, b, 1, 4, &e, avg.n0, &-&pi, &cfg, &ctx).unwrap();
        let mean = (&up + &down).div_int(2);
        assert!((&mean - &avg.value).abs_f64() <= 1e-35 * avg.value.abs_f64());
    }

    #[test]
    fn eta_empty_sum_and_stability() {
        let ctx = Ctx::with_digits(40);
        let cfg = SolverConfig::default();
        let a3 = ExponentParam::new(3, 1).unwrap();
        let b = Branch::physical(Sigma::Plus);
        let e = c(&ctx, 1.0, 0.0);
        // n + m + 1 - ell and n + m + 1 are both negative for every m < 0 only;
        // for n = -20 the first contributing m is 15.
        let seq = eta_coefficients(&a3, b, 1, 3, &e, -40, 3, &cfg, &ctx).unwrap();
        assert!(seq.values.iter().all(|v| v.abs_f64().is_finite()));
        let mut tight = cfg.clone();
        tight.series_tol = 1e-45;
        let a = eta_coefficients(&a3, b, 1, 3, &e, 5, 10, &cfg, &ctx).unwrap();
        let t = eta_coefficients(&a3, b, 1, 3, &e, 5, 10, &tight, &ctx).unwrap();
        for (x, y) in a.values.iter().zip(t.values.iter()) {
            assert!((x - y).abs_f64() <= 10.0 * cfg.series_tol * y.abs_f64().max(1e-300));
        }
    }

    #[test]
    fn wronskian_of_thome_pair_identity() {
        // W[phi_3, phi_4] = alpha_4/q: a=3, sigma=+1 gives -2i.
        let ctx = Ctx::with_digits(30);
        let a3 = ExponentParam::new(3, 1).unwrap();
        let a4 = Branch::physical(Sigma::Plus).alpha(&a3, 4, &ctx);
        assert_close(&(&a4 / &ctx.cint(1)), (0.0, -2.0), 1e-30);
    }

    #[test]
    fn delta_definition() {
        let a = ExponentParam::new(7, 2).unwrap();
        // delta_L = (nu_i + mu + L)/(p+2q)
        let d0 = (a.nu_f64(1) + a.mu_twice() as f64 / 2.0) / a.ell() as f64;
        assert!((d0 - (-1.5 - 5.0) / 11.0).abs() < 1e-15);
    }
}

//! Physical, PT and Gamow wavefunctions on the real line.
//!
//! Near the origin the state is the Frobenius combination `A1 phi_1 + A2 phi_2`
//! (right) and `A1 phi_1 - A2 phi_2` of `-x` (left); far out it is re-expanded
//! on the Thomé solutions through the connection factors. Each sample takes
//! whichever representation reports the smaller error.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::connection::{connection_factors, ConnectionFactors};
use crate::error::{Error, Result};
use crate::exponent::{Branch, ExponentParam, Sigma, SolverConfig};
use crate::mp::{Complex, Ctx};
use crate::scattering::{matching_coefficients, Convention, MatchingCoefficients};
use crate::series::{evaluate_frobenius, evaluate_thome_asymptotic, FrobeniusSolution, SeriesValue, ThomeSolution};
use crate::spectra::{pt_indicator, GamowState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Frobenius,
    ThomeLeft,
    ThomeRight,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Frobenius => "frobenius",
            Region::ThomeLeft => "thome-left",
            Region::ThomeRight => "thome-right",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WavefunctionSample {
    pub x: f64,
    pub psi: Complex64,
    pub deriv: Complex64,
    pub region: Region,
    /// Relative error estimate of `psi`.
    pub error: f64,
}

impl WavefunctionSample {
    pub fn abs2(&self) -> f64 {
        self.psi.norm_sqr()
    }

    pub fn flux(&self) -> f64 {
        probability_flux(self.psi, self.deriv)
    }
}

/// `j = -i (psi* psi' - psi*' psi) = 2 Im(psi* psi')`.
pub fn probability_flux(psi: Complex64, deriv: Complex64) -> f64 {
    2.0 * (psi.conj() * deriv).im
}

/// Default bound on the per-sample relative error.
pub const SAMPLE_TOLERANCE: f64 = 1e-10;

const RIGHT: usize = 0;
const LEFT: usize = 1;

/// A state `psi` at fixed energy, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    pub param: ExponentParam,
    pub energy: Complex,
    pub coefficients: MatchingCoefficients,
    pub pt: bool,
    /// Multiplier applied to every sample (set by [`Wavefunction::normalize`]).
    pub factor: Complex64,
    /// `[side][i-1]`, side 0 is `x > 0` (`sigma = +1`), side 1 is `x < 0`.
    frob: [[FrobeniusSolution; 2]; 2],
    /// `[side][j-3]`
    thome: [[ThomeSolution; 2]; 2],
    /// Coefficients of `phi_3`, `phi_4` on each side.
    far: [[Complex; 2]; 2],
    /// Relative size of the dropped growing term on the left, plus the
    /// connection residuals; feeds the error estimates.
    contamination: f64,
    far_noise: f64,
    tol: f64,
    max_terms: usize,
}

fn branches(pt: bool) -> [Branch; 2] {
    if pt {
        [Branch::pt(Sigma::Plus), Branch::pt(Sigma::Minus)]
    } else {
        [Branch::physical(Sigma::Plus), Branch::physical(Sigma::Minus)]
    }
}

impl Wavefunction {
    /// Builds the state with right-half-line coefficients `A1`, `A2`.
    ///
    /// On the left only `phi_3` (decaying) is kept far out: its partner
    /// `phi_4` has coefficient exactly zero for scattering states and the
    /// root residual of `D` for Gamow and PT states.
    pub fn new(param: &ExponentParam, pt: bool, energy: &Complex, coefficients: MatchingCoefficients, cfg: &SolverConfig, ctx: &Ctx) -> Result<Self> {
        cfg.validate_for(param)?;
        let [br, bl] = branches(pt);
        let right = connection_factors(param, br, energy, cfg, ctx)?;
        let left = connection_factors(param, bl, energy, cfg, ctx)?;
        let (a1, a2) = (&coefficients.a1, &coefficients.a2);
        let comb = |t: &ConnectionFactors, j: usize, sign: i64| -> Complex {
            let b = t.get(2, j).clone();
            let b = if sign < 0 { -&b } else { b };
            &(a1 * t.get(1, j)) + &(a2 * &b)
        };
        let far = [[comb(&right, 3, 1), comb(&right, 4, 1)], [comb(&left, 3, -1), ctx.czero()]];
        let contamination = match coefficients.convention {
            Convention::UnitIncoming => 0.0,
            Convention::Gamow => {
                let x = left.get(1, 4) * right.get(2, 4);
                let y = left.get(2, 4) * right.get(1, 4);
                let scale = x.abs_f64() + y.abs_f64();
                (&x + &y).abs_f64() / scale.max(f64::MIN_POSITIVE)
            }
        };
        let far_noise = right.shift_residual.max(left.shift_residual).max(right.determinant_residual).max(left.determinant_residual);
        let frob = [
            [FrobeniusSolution::new(param, br, 1, energy, ctx)?, FrobeniusSolution::new(param, br, 2, energy, ctx)?],
            [FrobeniusSolution::new(param, bl, 1, energy, ctx)?, FrobeniusSolution::new(param, bl, 2, energy, ctx)?],
        ];
        let thome = [
            [ThomeSolution::new(param, br, 3, energy, ctx)?, ThomeSolution::new(param, br, 4, energy, ctx)?],
            [ThomeSolution::new(param, bl, 3, energy, ctx)?, ThomeSolution::new(param, bl, 4, energy, ctx)?],
        ];
        Ok(Wavefunction {
            param: *param,
            energy: energy.clone(),
            coefficients,
            pt,
            factor: Complex64::new(1.0, 0.0),
            frob,
            thome,
            far,
            contamination,
            far_noise,
            tol: cfg.series_tol,
            max_terms: cfg.max_terms,
        })
    }

    /// Scattering state at real energy with unit incoming amplitude.
    pub fn scattering(param: &ExponentParam, energy: f64, cfg: &SolverConfig, ctx: &Ctx) -> Result<Self> {
        let e = ctx.complex(energy, 0.0);
        let c = matching_coefficients(param, &e, Convention::UnitIncoming, cfg, ctx)?;
        Wavefunction::new(param, false, &e, c, cfg, ctx)
    }

    /// Gamow state with the coefficients attached by the rotation route.
    pub fn gamow(param: &ExponentParam, state: &GamowState, cfg: &SolverConfig, ctx: &Ctx) -> Result<Self> {
        Wavefunction::new(param, false, &state.energy, state.coefficients.clone(), cfg, ctx)
    }

    /// Eigenstate of the PT Hamiltonian at eigenvalue `energy`.
    pub fn pt_state(param: &ExponentParam, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<Self> {
        let ind = pt_indicator(param, energy, cfg, ctx)?;
        if ind.relative() > 1e-8 {
            return Err(Error::Contract(alloc::format!("not a PT eigenvalue (relative indicator {:e})", ind.relative())));
        }
        Wavefunction::new(param, true, energy, ind.state_coefficients(), cfg, ctx)
    }

    fn side(x: f64) -> (usize, bool) {
        if x >= 0.0 {
            (RIGHT, false)
        } else {
            (LEFT, true)
        }
    }

    fn finish(&self, x: f64, psi: Complex, deriv: Complex, region: Region, error: f64) -> WavefunctionSample {
        let (pr, pi) = psi.to_f64();
        let (dr, di) = deriv.to_f64();
        WavefunctionSample { x, psi: self.factor * Complex64::new(pr, pi), deriv: self.factor * Complex64::new(dr, di), region, error }
    }

    /// The Frobenius representation at `x`.
    pub fn eval_frobenius(&mut self, x: f64, ctx: &Ctx) -> Result<WavefunctionSample> {
        let (s, left) = Self::side(x);
        let ax = ctx.real(x.abs());
        let v1 = evaluate_frobenius(&mut self.frob[s][0], &ax, self.tol, self.max_terms, ctx)?;
        let v2 = evaluate_frobenius(&mut self.frob[s][1], &ax, self.tol, self.max_terms, ctx)?;
        let a1 = &self.coefficients.a1;
        let a2 = if left { -&self.coefficients.a2 } else { self.coefficients.a2.clone() };
        let t1 = a1 * &v1.value;
        let t2 = &a2 * &v2.value;
        let psi = &t1 + &t2;
        let mut deriv = &(a1 * &v1.deriv) + &(&a2 * &v2.deriv);
        if left {
            deriv = -&deriv;
        }
        let (m1, m2) = (t1.abs_f64(), t2.abs_f64());
        let size = psi.abs_f64().max(f64::MIN_POSITIVE);
        let spread = (m1 + m2) / size;
        let mut error = (m1 * v1.error + m2 * v2.error) / size + (ctx.epsilon() + self.contamination) * spread;
        if left {
            // the dropped phi_4 term grows away from the origin
            error += self.contamination * spread;
        }
        Ok(self.finish(x, psi, deriv, Region::Frobenius, error))
    }

    /// The Thomé representation at `x != 0`.
    pub fn eval_thome(&mut self, x: f64, ctx: &Ctx) -> Result<WavefunctionSample> {
        if x == 0.0 {
            return Err(Error::Domain("Thomé representation is not defined at x = 0".into()));
        }
        let (s, left) = Self::side(x);
        let ax = ctx.real(x.abs());
        let mut psi = ctx.czero();
        let mut deriv = ctx.czero();
        let mut weighted = 0.0;
        let mut spread = 0.0;
        for j in 0..2 {
            if self.far[s][j].is_zero() {
                continue;
            }
            let v: SeriesValue = evaluate_thome_asymptotic(&mut self.thome[s][j], &ax, self.tol, self.max_terms, ctx)?;
            let term = &self.far[s][j] * &v.value;
            let m = term.abs_f64();
            weighted += m * v.error;
            spread += m;
            psi += &term;
            deriv += &(&self.far[s][j] * &v.deriv);
        }
        if left {
            deriv = -&deriv;
        }
        let size = psi.abs_f64().max(f64::MIN_POSITIVE);
        let error = weighted / size + (ctx.epsilon() + self.far_noise) * spread / size;
        let region = if left { Region::ThomeLeft } else { Region::ThomeRight };
        Ok(self.finish(x, psi, deriv, region, error))
    }

    /// `psi(x)` from the representation with the smaller error estimate.
    ///
    /// Fails with a coverage error when neither meets `tolerance`.
    pub fn eval_within(&mut self, x: f64, tolerance: f64, ctx: &Ctx) -> Result<WavefunctionSample> {
        let f = self.eval_frobenius(x, ctx);
        let f_ok = matches!(&f, Ok(v) if v.error <= tolerance * 1e-3);
        let best = if x == 0.0 || f_ok {
            f?
        } else {
            let t = self.eval_thome(x, ctx);
            match (f, t) {
                (Ok(a), Ok(b)) => {
                    if b.error < a.error {
                        b
                    } else {
                        a
                    }
                }
                (Ok(a), Err(_)) => a,
                (Err(_), Ok(b)) => b,
                (Err(e), Err(_)) => return Err(e),
            }
        };
        if !(best.error <= tolerance) {
            return Err(Error::Coverage { from: x, to: x });
        }
        Ok(best)
    }

    pub fn eval(&mut self, x: f64, ctx: &Ctx) -> Result<WavefunctionSample> {
        self.eval_within(x, SAMPLE_TOLERANCE, ctx)
    }

    /// Samples at each `x`; uncovered points are reported as one interval
    /// spanning the first run of failures.
    pub fn sample(&mut self, xs: &[f64], ctx: &Ctx) -> Result<Vec<WavefunctionSample>> {
        let mut out = Vec::with_capacity(xs.len());
        let mut gap: Option<(f64, f64)> = None;
        for &x in xs {
            match self.eval(x, ctx) {
                Ok(s) => {
                    if gap.is_some() {
                        break;
                    }
                    out.push(s);
                }
                Err(Error::Coverage { .. }) => {
                    gap = Some(match gap {
                        Some((a, _)) => (a, x),
                        None => (x, x),
                    });
                }
                Err(e) => return Err(e),
            }
        }
        if let Some((from, to)) = gap {
            return Err(Error::Coverage { from, to });
        }
        Ok(out)
    }

    /// Relative mismatch between the two representations at `x`, with
    /// their error estimates `(mismatch, frobenius error, thome error)`.
    pub fn handoff(&mut self, x: f64, ctx: &Ctx) -> Result<(f64, f64, f64)> {
        let f = self.eval_frobenius(x, ctx)?;
        let t = self.eval_thome(x, ctx)?;
        let mismatch = (f.psi - t.psi).norm() / f.psi.norm().max(t.psi.norm()).max(f64::MIN_POSITIVE);
        Ok((mismatch, f.error, t.error))
    }

    /// Flux of the `phi_j` term alone on the right half-line.
    pub fn component_flux(&mut self, j: usize, x: f64, ctx: &Ctx) -> Result<f64> {
        if !(x > 0.0) || !(j == 3 || j == 4) {
            return Err(Error::Domain(alloc::format!("component flux needs x > 0 and j in {{3, 4}}, got x = {x}, j = {j}")));
        }
        let v = evaluate_thome_asymptotic(&mut self.thome[RIGHT][j - 3], &ctx.real(x), self.tol, self.max_terms, ctx)?;
        let c = &self.far[RIGHT][j - 3];
        let (pr, pi) = (c * &v.value).to_f64();
        let (dr, di) = (c * &v.deriv).to_f64();
        Ok(probability_flux(self.factor * Complex64::new(pr, pi), self.factor * Complex64::new(dr, di)))
    }

    /// Scales the state so that the integral of `|psi|^2` over `[lo, hi]`
    /// is one and `psi(0) > 0`.
    ///
    /// Gamow states are not square integrable; the window is the only
    /// normalization domain and is returned with the result.
    pub fn normalize(&mut self, lo: f64, hi: f64, abs_tol: f64, ctx: &Ctx) -> Result<Normalization> {
        if !(lo < hi) {
            return Err(Error::Domain(alloc::format!("empty window [{lo}, {hi}]")));
        }
        self.factor = Complex64::new(1.0, 0.0);
        let at0 = self.eval(0.0, ctx)?;
        let reference = if at0.psi.norm() > 0.0 { at0.psi } else { at0.deriv };
        if reference.norm() == 0.0 {
            return Err(Error::Contract("state vanishes with its derivative at the origin".into()));
        }
        let phase = reference.conj() / reference.norm();
        // normalize the raw state first so the quadrature tolerance is absolute in final units
        let rough = {
            let mut f = |x: f64| -> Result<f64> { Ok(self.eval(x, ctx)?.abs2()) };
            let pts = 41;
            let h = (hi - lo) / (pts - 1) as f64;
            let mut s = 0.0;
            for k in 0..pts {
                let w = if k == 0 || k == pts - 1 { 0.5 } else { 1.0 };
                s += w * f(lo + h * k as f64)?;
            }
            s * h
        };
        if !(rough > 0.0) || !rough.is_finite() {
            return Err(Error::Quadrature { estimate: rough });
        }
        self.factor = phase / libm::sqrt(rough);
        let (norm, error) = {
            let mut f = |x: f64| -> Result<f64> { Ok(self.eval(x, ctx)?.abs2()) };
            adaptive_simpson(&mut f, lo, hi, abs_tol)?
        };
        self.factor = self.factor / libm::sqrt(norm);
        Ok(Normalization { window: (lo, hi), norm: norm * rough, error: error * rough })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Normalization {
    pub window: (f64, f64),
    /// Integral of the unnormalized `|psi|^2` over the window.
    pub norm: f64,
    pub error: f64,
}

const SIMPSON_DEPTH: u32 = 30;

/// Adaptive Simpson quadrature with absolute target `tol`; returns the
/// integral and an error estimate.
pub fn adaptive_simpson<F>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut err = 0.0;
    let v = simpson_step(f, a, b, fa, fm, fb, whole, tol, SIMPSON_DEPTH, &mut err)?;
    Ok((v, err))
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(f: &mut F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32, err: &mut f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        *err += delta.abs() / 15.0;
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature { estimate: delta.abs() / 15.0 });
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, err)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, err)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (ExponentParam, SolverConfig, Ctx) {
        (ExponentParam::new(3, 1).unwrap(), SolverConfig::with_precision(30), Ctx::with_digits(30))
    }

    fn ground_state(a: &ExponentParam, cfg: &SolverConfig, ctx: &Ctx) -> Wavefunction {
        let found = crate::spectra::find_real_pt_eigenvalues(a, 0.5, 2.0, 1, &crate::spectra::SearchOptions::default(), cfg, ctx).unwrap();
        assert!((found[0].value.to_f64().0 - 1.1562670719881).abs() < 1e-12);
        Wavefunction::pt_state(a, &found[0].value, cfg, ctx).unwrap()
    }

    #[test]
    fn pt_ground_state_profile() {
        let (a, cfg, ctx) = setup();
        let mut wf = ground_state(&a, &cfg, &ctx);
        let n = wf.normalize(-5.0, 5.0, 1e-8, &ctx).unwrap();
        assert_eq!(n.window, (-5.0, 5.0));
        let table = [(0.0, 0.541405), (0.5, 0.434904), (1.0, 0.219137), (1.05, 0.198931), (1.1, 0.179604), (1.5, 0.064408), (2.0, 0.010063), (2.5, 0.000760)];
        for (x, want) in table {
            let r = wf.eval(x, &ctx).unwrap().abs2();
            let l = wf.eval(-x, &ctx).unwrap().abs2();
            assert!((r - want).abs() < 5e-6, "x = {x}: {r}");
            assert!((r - l).abs() < 1e-9 * r.max(1e-3), "asymmetric at {x}");
        }
        let p0 = wf.eval(0.0, &ctx).unwrap().psi;
        assert!(p0.re > 0.0 && p0.im.abs() < 1e-12);
    }

    #[test]
    fn probability_concentrates_near_origin() {
        let (a, cfg, ctx) = setup();
        let mut wf = ground_state(&a, &cfg, &ctx);
        wf.normalize(-5.0, 5.0, 1e-8, &ctx).unwrap();
        let mut f = |x: f64| -> Result<f64> { Ok(wf.eval(x, &ctx)?.abs2()) };
        let (inner, _) = adaptive_simpson(&mut f, -1.05, 1.05, 1e-8).unwrap();
        assert!(inner > 0.8, "{inner}");
    }

    #[test]
    fn representations_agree_in_the_overlap() {
        let (a, cfg, ctx) = setup();
        let mut wf = ground_state(&a, &cfg, &ctx);
        for x in [3.0, 4.0, -3.0, -4.0] {
            let (mismatch, ef, et) = wf.handoff(x, &ctx).unwrap();
            assert!(mismatch < 1e-6, "x = {x}: {mismatch} ({ef:e}, {et:e})");
        }
        // the selector switches to the far-field form where the series degrade
        assert_eq!(wf.eval(8.0, &ctx).unwrap().region, Region::ThomeRight);
        assert_eq!(wf.eval(-8.0, &ctx).unwrap().region, Region::ThomeLeft);
        assert_eq!(wf.eval(0.3, &ctx).unwrap().region, Region::Frobenius);
    }

    #[test]
    fn origin_value_and_continuity() {
        let (a, cfg, ctx) = setup();
        let mut wf = Wavefunction::scattering(&a, 2.3, &cfg, &ctx).unwrap();
        let at0 = wf.eval(0.0, &ctx).unwrap();
        let (a1r, a1i) = wf.coefficients.a1.to_f64();
        assert!((at0.psi - Complex64::new(a1r, a1i)).norm() < 1e-14 * at0.psi.norm().max(1.0));
        let h = 1e-11;
        let r = wf.eval(h, &ctx).unwrap();
        let l = wf.eval(-h, &ctx).unwrap();
        assert!((r.psi - l.psi).norm() < 1e-6 * r.psi.norm());
        assert!((r.deriv - l.deriv).norm() < 1e-8 * r.deriv.norm().max(r.psi.norm()));
    }

    #[test]
    fn scattering_flux_is_conserved() {
        let (a, cfg, ctx) = setup();
        let mut wf = Wavefunction::scattering(&a, 2.3, &cfg, &ctx).unwrap();
        let incoming = wf.component_flux(4, 5.0, &ctx).unwrap();
        let outgoing = wf.component_flux(3, 5.0, &ctx).unwrap();
        assert!(incoming < 0.0 && outgoing > 0.0);
        assert!((incoming + outgoing).abs() < 1e-10 * incoming.abs());
        for x in [-2.0, -0.5, 0.5, 2.0, 5.0, 9.0] {
            let j = wf.eval(x, &ctx).unwrap().flux();
            assert!(j.abs() < 1e-6 * incoming.abs(), "x = {x}: {j}");
        }
    }

    #[test]
    fn flux_of_simple_waves() {
        let k = 1.7;
        let x = 0.4;
        let psi = Complex64::new(0.0, k * x).exp();
        assert!((probability_flux(psi, Complex64::new(0.0, k) * psi) - 2.0 * k).abs() < 1e-14);
        assert_eq!(probability_flux(Complex64::new(0.3, 0.0), Complex64::new(-1.2, 0.0)), 0.0);
    }

    #[test]
    fn pt_state_requires_an_eigenvalue() {
        let (a, cfg, ctx) = setup();
        assert!(matches!(Wavefunction::pt_state(&a, &ctx.complex(1.3, 0.0), &cfg, &ctx), Err(Error::Contract(_))));
    }

    #[test]
    fn simpson_integrates_polynomials_and_rejects_singularities() {
        let mut f = |x: f64| -> Result<f64> { Ok(x * x * x - 2.0 * x) };
        let (v, _) = adaptive_simpson(&mut f, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-12);
        let mut g = |x: f64| -> Result<f64> { Ok(1.0 / x.abs()) };
        assert!(adaptive_simpson(&mut g, -1.0, 1.0 + 1e-9, 1e-10).is_err());
    }
}

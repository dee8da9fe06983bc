//! Scattering function, phase shifts and time delays.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::connection::{connection_column, connection_factors, ConnectionColumn, ConnectionFactors};
use crate::error::{Error, Result};
use crate::exponent::{Branch, ExponentParam, Regime, Sigma, SolverConfig};
use crate::matching::{matched_scattering, HALF_SERIES_LIMIT};
use crate::mp::{Complex, Ctx};
use crate::oracles;

/// `S = -N/D` at one energy together with its numerator and denominator.
#[derive(Debug, Clone)]
pub struct ScatteringPoint {
    pub energy: Complex,
    pub s: Complex,
    pub n: Complex,
    pub d: Complex,
    /// `| |S| - 1 |` for real energies.
    pub unitarity_residual: Option<f64>,
    /// Largest relative determinant residual of the two branches (0 for closed forms).
    pub determinant_residual: f64,
    /// Largest relative n-shift residual of the two branches (0 for closed forms).
    pub shift_residual: f64,
}

/// `| |s| - 1 |` at working precision.
pub fn unit_defect(s: &Complex) -> f64 {
    (&s.abs() - &s.re.int_like(1)).abs().to_f64()
}

/// `N` and `D` from the connection factors of both branches.
pub fn numerator_denominator(minus: &ConnectionFactors, plus: &ConnectionFactors) -> (Complex, Complex) {
    let n = &(minus.get(1, 4) * plus.get(2, 3)) + &(minus.get(2, 4) * plus.get(1, 3));
    let d = &(minus.get(1, 4) * plus.get(2, 4)) + &(minus.get(2, 4) * plus.get(1, 4));
    (n, d)
}

/// `D(E)` with the magnitude scale `|T14- T24+| + |T24- T14+|` of its two products.
pub fn denominator(param: &ExponentParam, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<(Complex, f64)> {
    let m = connection_column(param, Branch::physical(Sigma::Minus), energy, 4, cfg, ctx)?;
    let p = connection_column(param, Branch::physical(Sigma::Plus), energy, 4, cfg, ctx)?;
    Ok(combine_columns(&m, &p))
}

/// `T14(-) T24(+) + T24(-) T14(+)` for a pair of fourth columns.
pub(crate) fn combine_columns(minus: &ConnectionColumn, plus: &ConnectionColumn) -> (Complex, f64) {
    let a = &minus.t[0] * &plus.t[1];
    let b = &minus.t[1] * &plus.t[0];
    let scale = a.abs_f64() + b.abs_f64();
    (&a + &b, scale)
}

/// Scattering function from the connection-factor engine.
///
/// Available for the general, half and quadratic regimes; a = 1 has no
/// Thomé expansion in this form and is only served by [`scattering_dispatch`].
pub fn scattering_function(param: &ExponentParam, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<ScatteringPoint> {
    if !param.engine_supported() {
        return Err(Error::RegimeMismatch { operation: "connection-factor scattering", regime: param.regime().name() });
    }
    let minus = connection_factors(param, Branch::physical(Sigma::Minus), energy, cfg, ctx)?;
    let plus = connection_factors(param, Branch::physical(Sigma::Plus), energy, cfg, ctx)?;
    let (n, d) = numerator_denominator(&minus, &plus);
    let floor = libm::pow(10.0, 3.0 - cfg.precision_digits as f64);
    let (nabs, dabs) = (n.abs_f64(), d.abs_f64());
    if dabs < floor * nabs {
        return Err(Error::PoleProximity { ratio: dabs / nabs });
    }
    let s = -&(&n / &d);
    let unitarity_residual = energy.is_real().then(|| unit_defect(&s));
    Ok(ScatteringPoint {
        energy: energy.clone(),
        s,
        n,
        d,
        unitarity_residual,
        determinant_residual: minus.determinant_residual.max(plus.determinant_residual),
        shift_residual: minus.shift_residual.max(plus.shift_residual),
    })
}

/// Routes a = 1 and a = 2 to their closed forms, a = 1/2 beyond
/// [`HALF_SERIES_LIMIT`] to outward integration, everything else to the engine.
pub fn scattering_dispatch(param: &ExponentParam, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<ScatteringPoint> {
    match param.regime() {
        Regime::Half if energy.abs_f64() > HALF_SERIES_LIMIT => matched_scattering(param, energy, cfg, ctx),
        Regime::Linear => {
            let s = oracles::linear_scattering(energy.re.to_f64(), ctx);
            Ok(ScatteringPoint {
                energy: energy.clone(),
                n: s.clone(),
                d: ctx.cone(),
                unitarity_residual: energy.is_real().then_some(0.0),
                s,
                determinant_residual: 0.0,
                shift_residual: 0.0,
            })
        }
        Regime::Quadratic => {
            let q = oracles::quadratic_scattering(energy, ctx)?;
            let unitarity_residual = energy.is_real().then(|| unit_defect(&q.s));
            Ok(ScatteringPoint {
                energy: energy.clone(),
                s: q.s,
                n: q.n,
                d: q.d,
                unitarity_residual,
                determinant_residual: 0.0,
                shift_residual: 0.0,
            })
        }
        _ => scattering_function(param, energy, cfg, ctx),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Unit incoming amplitude: `A1 T14(+) + A2 T24(+) = 1`.
    UnitIncoming,
    /// Pure outgoing wave with free constant `A = 1`: `A1 = T24(+)`, `A2 = -T14(+)`.
    Gamow,
}

/// Coefficients of `phi_1`, `phi_2` on the right half-line.
///
/// On the left half-line the second coefficient changes sign.
#[derive(Debug, Clone)]
pub struct MatchingCoefficients {
    pub a1: Complex,
    pub a2: Complex,
    pub convention: Convention,
}

/// Matching coefficients from the fourth columns `T_{i,4}` of the
/// `sigma = -1` and `sigma = +1` branches (physical or PT).
pub fn matching_from_columns(minus: &ConnectionColumn, plus: &ConnectionColumn, convention: Convention) -> Result<MatchingCoefficients> {
    let (t14m, t24m) = (&minus.t[0], &minus.t[1]);
    let (t14p, t24p) = (&plus.t[0], &plus.t[1]);
    if t14m.is_zero() && t24m.is_zero() {
        return Err(Error::Contract("T14 and T24 of the left branch both vanish".into()));
    }
    let (d, scale) = combine_columns(minus, plus);
    let rel = d.abs_f64() / scale.max(f64::MIN_POSITIVE);
    match convention {
        Convention::UnitIncoming => {
            if rel < 1e-12 {
                return Err(Error::Contract(format!("unit-incoming normalization at a pole (|D| relative {rel:e})")));
            }
            Ok(MatchingCoefficients { a1: t24m / &d, a2: t14m / &d, convention })
        }
        Convention::Gamow => {
            if rel > 1e-8 {
                return Err(Error::Contract(format!("energy is not a Gamow energy (|D| relative {rel:e})")));
            }
            Ok(MatchingCoefficients { a1: t24p.clone(), a2: -t14p, convention })
        }
    }
}

pub fn matching_coefficients(param: &ExponentParam, energy: &Complex, convention: Convention, cfg: &SolverConfig, ctx: &Ctx) -> Result<MatchingCoefficients> {
    let m = connection_column(param, Branch::physical(Sigma::Minus), energy, 4, cfg, ctx)?;
    let p = connection_column(param, Branch::physical(Sigma::Plus), energy, 4, cfg, ctx)?;
    matching_from_columns(&m, &p, convention)
}

/// One row of a real-energy scan.
#[derive(Debug, Clone)]
pub struct ScatteringResult {
    pub energy: f64,
    pub s: (f64, f64),
    pub n: (f64, f64),
    pub d: (f64, f64),
    /// Unwrapped phase shift.
    pub delta: f64,
    pub delta_tau: f64,
    pub unitarity_residual: f64,
    pub determinant_residual: f64,
    pub shift_residual: f64,
}

fn wrap(x: f64) -> f64 {
    let mut y = x % (2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    } else if y <= -PI {
        y += 2.0 * PI;
    }
    y
}

/// Unwraps `arg(S)/2` along an ascending grid.
///
/// The first point takes the principal value in `(-pi/2, pi/2]`; each later
/// point adds half the principal argument of `S_k / S_{k-1}`. Steps where
/// that argument reaches `pi/2` in size are reported as ambiguous.
pub fn unwrap_phases(energies: &[f64], s: &[(f64, f64)]) -> Result<Vec<f64>> {
    unwrap_phases_guided(energies, s, None)
}

/// Like [`unwrap_phases`], but with time delays at the grid points: the
/// change of `arg S` over a step is predicted as the trapezoid of the
/// delays, and only the remainder is taken modulo `2 pi`. The ambiguity
/// test applies to the remainder.
pub fn unwrap_phases_guided(energies: &[f64], s: &[(f64, f64)], delays: Option<&[f64]>) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(s.len());
    let mut bad = Vec::new();
    for (k, &(re, im)) in s.iter().enumerate() {
        let arg = libm::atan2(im, re);
        if k == 0 {
            out.push(arg / 2.0);
            continue;
        }
        let predicted = match delays {
            Some(d) => 0.5 * (d[k] + d[k - 1]) * (energies[k] - energies[k - 1]),
            None => 0.0,
        };
        let (pr, pi) = s[k - 1];
        let step = wrap(arg - libm::atan2(pi, pr) - predicted);
        if step.abs() >= PI / 2.0 {
            bad.push((energies[k - 1], energies[k]));
        }
        out.push(out[k - 1] + (predicted + step) / 2.0);
    }
    if !bad.is_empty() {
        return Err(Error::UnwrapAmbiguity { intervals: bad });
    }
    Ok(out)
}

/// `2 d(delta)/dE` at `e` from central differences of `arg S` with one
/// Richardson step; `S` is evaluated at `e +- h` and `e +- h/2`.
pub fn time_delay_at(param: &ExponentParam, e: f64, h: f64, cfg: &SolverConfig, ctx: &Ctx) -> Result<f64> {
    let s_at = |x: f64| -> Result<Complex> { Ok(scattering_dispatch(param, &ctx.complex(x, 0.0), cfg, ctx)?.s) };
    let diff = |a: &Complex, b: &Complex| -> f64 {
        let r = a * &b.conj();
        let (re, im) = r.to_f64();
        libm::atan2(im, re) / 2.0
    };
    let sp = s_at(e + h)?;
    let sm = s_at(e - h)?;
    let sp2 = s_at(e + h / 2.0)?;
    let sm2 = s_at(e - h / 2.0)?;
    let d1 = diff(&sp, &sm) / (2.0 * h);
    let d2 = diff(&sp2, &sm2) / h;
    Ok(2.0 * (4.0 * d2 - d1) / 3.0)
}

/// Evaluates one grid point for a scan (without unwrapping).
pub fn scan_point(param: &ExponentParam, e: f64, with_delay: bool, cfg: &SolverConfig, ctx: &Ctx) -> Result<(ScatteringPoint, f64)> {
    let p = scattering_dispatch(param, &ctx.complex(e, 0.0), cfg, ctx)?;
    let tau = if with_delay { time_delay_at(param, e, cfg.derivative_step, cfg, ctx)? } else { 0.0 };
    Ok((p, tau))
}

/// Assembles scan rows from independently computed points; `with_delay`
/// says whether the second tuple entries are time delays to guide unwrapping.
pub fn assemble_scan(energies: &[f64], points: &[(ScatteringPoint, f64)], with_delay: bool) -> Result<Vec<ScatteringResult>> {
    let s: Vec<(f64, f64)> = points.iter().map(|(p, _)| p.s.to_f64()).collect();
    let tau: Vec<f64> = points.iter().map(|(_, t)| *t).collect();
    let delta = unwrap_phases_guided(energies, &s, with_delay.then_some(tau.as_slice()))?;
    Ok(points
        .iter()
        .zip(energies.iter())
        .zip(delta)
        .map(|(((p, tau), &e), delta)| ScatteringResult {
            energy: e,
            s: p.s.to_f64(),
            n: p.n.to_f64(),
            d: p.d.to_f64(),
            delta,
            delta_tau: *tau,
            unitarity_residual: p.unitarity_residual.unwrap_or(f64::NAN),
            determinant_residual: p.determinant_residual,
            shift_residual: p.shift_residual,
        })
        .collect())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("energy grid must be ascending with at least two points".into()));
    }
    Ok(())
}

/// Phase shifts (and time delays) on an ascending real grid, sequentially.
pub fn phase_shift_scan(param: &ExponentParam, grid: &[f64], cfg: &SolverConfig, ctx: &Ctx) -> Result<Vec<ScatteringResult>> {
    check_grid(grid)?;
    let pts = grid.iter().map(|&e| scan_point(param, e, true, cfg, ctx)).collect::<Result<Vec<_>>>()?;
    assemble_scan(grid, &pts, true)
}

/// Time delays on an ascending real grid.
pub fn time_delay_scan(param: &ExponentParam, grid: &[f64], cfg: &SolverConfig, ctx: &Ctx) -> Result<Vec<f64>> {
    check_grid(grid)?;
    grid.iter().map(|&e| time_delay_at(param, e, cfg.derivative_step, cfg, ctx)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_constants() {
        let ctx = Ctx::with_digits(20);
        let cfg = SolverConfig::with_precision(20);
        let a1 = ExponentParam::new(1, 1).unwrap();
        let grid: Vec<f64> = (0..5).map(|k| -2.0 + k as f64).collect();
        let rows = phase_shift_scan(&a1, &grid, &cfg, &ctx).unwrap();
        for r in rows {
            assert_eq!(r.s, (0.0, 1.0));
            assert_eq!(r.delta, PI / 4.0);
            assert_eq!(r.delta_tau, 0.0);
        }
        assert!(scattering_function(&a1, &ctx.czero(), &cfg, &ctx).is_err());
    }

    #[test]
    fn unitarity_and_functional_equation_a3() {
        let ctx = Ctx::with_digits(40);
        let cfg = SolverConfig::default();
        let a3 = ExponentParam::new(3, 1).unwrap();
        for e in [-3.0, 0.5, 6.0] {
            let p = scattering_function(&a3, &ctx.complex(e, 0.0), &cfg, &ctx).unwrap();
            assert!(p.unitarity_residual.unwrap() < 1e-30);
        }
        let z = ctx.complex(1.0, -0.5);
        let a = scattering_function(&a3, &z, &cfg, &ctx).unwrap();
        let b = scattering_function(&a3, &z.conj(), &cfg, &ctx).unwrap();
        let one = &a.s * &b.s.conj();
        assert!((&one - &ctx.cone()).abs_f64() < 1e-30);
        // N(conj E) = conj D(E)
        assert!((&b.n - &a.d.conj()).abs_f64() < 1e-30 * a.d.abs_f64());
    }

    #[test]
    fn unwrap_follows_continuous_phase() {
        let es: Vec<f64> = (0..40).map(|k| k as f64 * 0.1).collect();
        let s: Vec<(f64, f64)> = es.iter().map(|e| (libm::cos(3.0 * e), libm::sin(3.0 * e))).collect();
        let d = unwrap_phases(&es, &s).unwrap();
        for (e, v) in es.iter().zip(d) {
            assert!((v - 1.5 * e).abs() < 1e-12);
        }
        let s: Vec<(f64, f64)> = es.iter().map(|e| (libm::cos(40.0 * e), libm::sin(40.0 * e))).collect();
        assert!(matches!(unwrap_phases(&es, &s), Err(Error::UnwrapAmbiguity { .. })));
        // with d(arg S)/dE = 40 supplied the same samples unwrap exactly
        let tau = alloc::vec![40.0; es.len()];
        let d = unwrap_phases_guided(&es, &s, Some(&tau)).unwrap();
        for (e, v) in es.iter().zip(d) {
            assert!((v - 20.0 * e).abs() < 1e-12);
        }
    }

    #[test]
    fn matching_conventions() {
        let ctx = Ctx::with_digits(40);
        let cfg = SolverConfig::default();
        let a3 = ExponentParam::new(3, 1).unwrap();
        let e = ctx.complex(2.0, 0.0);
        let m = connection_column(&a3, Branch::physical(Sigma::Minus), &e, 4, &cfg, &ctx).unwrap();
        let p = connection_column(&a3, Branch::physical(Sigma::Plus), &e, 4, &cfg, &ctx).unwrap();
        let c = matching_from_columns(&m, &p, Convention::UnitIncoming).unwrap();
        let left = &(&c.a1 * &m.t[0]) - &(&c.a2 * &m.t[1]);
        let right = &(&c.a1 * &p.t[0]) + &(&c.a2 * &p.t[1]);
        assert!(left.abs_f64() < 1e-35);
        assert!((&right - &ctx.cone()).abs_f64() < 1e-35);
        assert!(matches!(matching_from_columns(&m, &p, Convention::Gamow), Err(Error::Contract(_))));
    }
}

//! Connection factors by outward integration.
//!
//! `phi_1`, `phi_2` are seeded from the Frobenius series near the origin,
//! integrated in double precision to a far point and projected onto the
//! Thomé pair there through Wronskians. The a = 1/2 Wronskian sums cancel
//! catastrophically once `|E|` exceeds a few units; this route has no such
//! loss and serves those energies.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponent::{Branch, ExponentParam, Regime, Sigma, SolverConfig};
use crate::mp::{Complex, Ctx};
use crate::ode::{c64, integrate_rescaled, OdeOptions, State};
use crate::scattering::{unit_defect, ScatteringPoint};
use crate::series::{evaluate_frobenius, evaluate_thome_asymptotic, FrobeniusSolution, SeriesValue, ThomeSolution};

/// Largest `|E|` at which the a = 1/2 scattering function still uses the
/// Wronskian sums; beyond it [`scattering_dispatch`](crate::scattering::scattering_dispatch)
/// switches to this module.
pub const HALF_SERIES_LIMIT: f64 = 4.0;

const SEED_X: f64 = 0.25;
const THOME_TOL: f64 = 1e-14;
const MAX_WIDENINGS: usize = 8;

#[derive(Debug, Clone)]
pub struct MatchedFactors {
    pub branch: Branch,
    /// `t[i-1][j-3] = T_{i,j}` at the outer matching point.
    pub t: [[Complex; 2]; 2],
    /// Relative change of each column between the two matching points.
    /// Recessive columns (`j = 3` on a growing side) come out inaccurate.
    pub residual: [f64; 2],
    pub x_match: f64,
}

impl MatchedFactors {
    pub fn get(&self, i: usize, j: usize) -> &Complex {
        &self.t[i - 1][j - 3]
    }
}

/// First matching point: well past the classical turning point `|E|^(1/a)`.
pub fn matching_point(param: &ExponentParam, energy: f64) -> f64 {
    let turning = libm::pow(energy.abs(), 1.0 / param.a());
    (2.5 * turning).max(16.0)
}

// digits lost to the exp(E^3 / (4t)) hump in the a = 1/2 Thomé sums
fn thome_guard(param: &ExponentParam, energy: f64, x: f64) -> u32 {
    let mut extra = 10.0;
    if param.regime() == Regime::Half {
        let t = libm::pow(x, 0.25);
        extra += energy.abs().powi(3) / (4.0 * t) / core::f64::consts::LN_10;
    }
    libm::ceil(extra) as u32
}

fn to_mp(y: &State, log_scale: f64, ctx: &Ctx) -> [Complex; 2] {
    let k = ctx.real(log_scale).exp(ctx);
    [ctx.complex(y[0].re, y[0].im).scale(&k), ctx.complex(y[1].re, y[1].im).scale(&k)]
}

fn wronskian(f: &[Complex; 2], g: &[Complex; 2]) -> Complex {
    &(&f[0] * &g[1]) - &(&f[1] * &g[0])
}

fn thome_pair(param: &ExponentParam, branch: Branch, energy: &Complex, x: f64, cfg: &SolverConfig, ctx: &Ctx) -> Result<Option<[[Complex; 2]; 2]>> {
    let xr = ctx.real(x);
    let mut out = Vec::with_capacity(2);
    for j in [3, 4] {
        let mut th = ThomeSolution::new(param, branch, j, energy, ctx)?;
        let SeriesValue { value, deriv, error } = evaluate_thome_asymptotic(&mut th, &xr, THOME_TOL, cfg.max_terms, ctx)?;
        if !(error <= THOME_TOL * 10.0) {
            return Ok(None);
        }
        out.push([value, deriv]);
    }
    let d = out.pop().unwrap();
    let c = out.pop().unwrap();
    Ok(Some([c, d]))
}

fn project(phi: &[[Complex; 2]; 2], thome: &[[Complex; 2]; 2]) -> [[Complex; 2]; 2] {
    let [p3, p4] = thome;
    let w34 = wronskian(p3, p4);
    let row = |f: &[Complex; 2]| [&wronskian(f, p4) / &w34, &wronskian(p3, f) / &w34];
    [row(&phi[0]), row(&phi[1])]
}

/// All four connection factors of one branch by outward integration.
pub fn matched_factors(param: &ExponentParam, branch: Branch, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<MatchedFactors> {
    if !param.engine_supported() {
        return Err(Error::RegimeMismatch { operation: "matched connection factors", regime: param.regime().name() });
    }
    let e = c64(energy);
    let coupling = c64(&branch.coupling(ctx));
    let opts = OdeOptions { max_steps: 5_000_000, ..OdeOptions::default() };
    let mut seeds = Vec::with_capacity(2);
    for i in 1..=2 {
        let mut sol = FrobeniusSolution::new(param, branch, i, energy, ctx)?;
        let v = evaluate_frobenius(&mut sol, &ctx.real(SEED_X), cfg.series_tol, cfg.max_terms, ctx)?;
        seeds.push(([c64(&v.value), c64(&v.deriv)], 0.0));
    }
    let mut x_prev = SEED_X;
    let mut x_match = matching_point(param, e.re);
    for _ in 0..MAX_WIDENINGS {
        let x_far = 1.3 * x_match;
        let hi = ctx.boosted(thome_guard(param, e.re, x_match));
        let near = thome_pair(param, branch, &energy.rounded(&hi), x_match, cfg, &hi)?;
        let far = thome_pair(param, branch, &energy.rounded(&hi), x_far, cfg, &hi)?;
        // advance the seeds to x_match in every case so a retry resumes there
        let mut at_near = Vec::with_capacity(2);
        let mut at_far = Vec::with_capacity(2);
        for (y, log_scale) in seeds.iter_mut() {
            let (yn, ln) = integrate_rescaled(param, coupling, e, x_prev, *y, x_match, &opts)?;
            *y = yn;
            *log_scale += ln;
            at_near.push(to_mp(y, *log_scale, &hi));
            if near.is_some() && far.is_some() {
                let (yf, lf) = integrate_rescaled(param, coupling, e, x_match, *y, x_far, &opts)?;
                at_far.push(to_mp(&yf, *log_scale + lf, &hi));
            }
        }
        x_prev = x_match;
        let (Some(near), Some(far)) = (near, far) else {
            x_match *= 1.6;
            continue;
        };
        let phi_near = [at_near[0].clone(), at_near[1].clone()];
        let phi_far = [at_far[0].clone(), at_far[1].clone()];
        let t = project(&phi_near, &near);
        let t2 = project(&phi_far, &far);
        let mut residual = [0.0f64; 2];
        for c in 0..2 {
            let scale = t[0][c].abs_f64().max(t[1][c].abs_f64()).max(f64::MIN_POSITIVE);
            residual[c] = (0..2).map(|r| (&t[r][c] - &t2[r][c]).abs_f64()).fold(0.0, f64::max) / scale;
        }
        let round = |row: &[Complex; 2]| [row[0].rounded(ctx), row[1].rounded(ctx)];
        return Ok(MatchedFactors { branch, t: [round(&t[0]), round(&t[1])], residual, x_match });
    }
    Err(Error::Convergence { terms: cfg.max_terms, tail: x_match })
}

/// `S = -N/D` with every factor from outward integration.
///
/// Only the dominant column of the `sigma = -1` branch enters, so a
/// growing far field there is harmless.
pub fn matched_scattering(param: &ExponentParam, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<ScatteringPoint> {
    let minus = matched_factors(param, Branch::physical(Sigma::Minus), energy, cfg, ctx)?;
    let plus = matched_factors(param, Branch::physical(Sigma::Plus), energy, cfg, ctx)?;
    let n = &(minus.get(1, 4) * plus.get(2, 3)) + &(minus.get(2, 4) * plus.get(1, 3));
    let d = &(minus.get(1, 4) * plus.get(2, 4)) + &(minus.get(2, 4) * plus.get(1, 4));
    if d.is_zero() {
        return Err(Error::PoleProximity { ratio: 0.0 });
    }
    let s = -&(&n / &d);
    // below the barrier phi_1 and phi_2 leave nearly parallel, so the
    // determinant is judged against the size of its two products
    let (p1, p2) = (plus.get(1, 3) * plus.get(2, 4), plus.get(2, 3) * plus.get(1, 4));
    let want = &ctx.cint(param.q() as i64) / &Branch::physical(Sigma::Plus).alpha(param, 4, ctx);
    let determinant_residual = (&(&p1 - &p2) - &want).abs_f64() / (p1.abs_f64() + p2.abs_f64()).max(want.abs_f64());
    let unitarity_residual = energy.is_real().then(|| unit_defect(&s));
    Ok(ScatteringPoint {
        energy: energy.clone(),
        s,
        n,
        d,
        unitarity_residual,
        determinant_residual,
        shift_residual: minus.residual[1].max(plus.residual[0]).max(plus.residual[1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::connection_factors;
    use crate::scattering::scattering_function;

    #[test]
    fn agrees_with_series_factors() {
        let ctx = Ctx::with_digits(30);
        let cfg = SolverConfig::with_precision(30);
        for (p, q, e) in [(3, 1, 1.5), (1, 2, 2.0), (1, 2, -3.0)] {
            let a = ExponentParam::new(p, q).unwrap();
            let en = ctx.complex(e, 0.0);
            for sigma in [Sigma::Minus, Sigma::Plus] {
                let b = Branch::physical(sigma);
                let m = matched_factors(&a, b, &en, &cfg, &ctx).unwrap();
                let s = connection_factors(&a, b, &en, &cfg, &ctx).unwrap();
                let cols: &[usize] = if sigma == Sigma::Minus { &[4] } else { &[3, 4] };
                for &j in cols {
                    for i in 1..=2 {
                        let dev = (m.get(i, j) - s.get(i, j)).abs_f64() / s.get(i, j).abs_f64().max(1e-3);
                        assert!(dev < 1e-8, "a={p}/{q} E={e} {sigma:?} T{i}{j}: {dev:e}");
                    }
                    assert!(m.residual[j - 3] < 1e-8, "{:?}", m.residual);
                }
            }
        }
    }

    #[test]
    fn scattering_agrees_and_is_unitary_far_out() {
        let ctx = Ctx::with_digits(30);
        let cfg = SolverConfig::with_precision(30);
        let half = ExponentParam::new(1, 2).unwrap();
        let e = ctx.complex(3.0, 0.0);
        let m = matched_scattering(&half, &e, &cfg, &ctx).unwrap();
        let s = scattering_function(&half, &e, &cfg, &ctx).unwrap();
        assert!((&m.s - &s.s).abs_f64() < 1e-8);
        for e in [-5.0, 9.0, 15.0] {
            let p = matched_scattering(&half, &ctx.complex(e, 0.0), &cfg, &ctx).unwrap();
            assert!(p.unitarity_residual.unwrap() < 1e-8, "E={e}: {:?}", p.unitarity_residual);
            assert!(p.determinant_residual < 1e-8, "E={e}: {}", p.determinant_residual);
        }
    }
}

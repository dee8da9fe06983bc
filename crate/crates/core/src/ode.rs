//! Double-precision integration of the half-line equation
//! `phi'' = -(E + s x^a) phi`, used as an independent check of the series
//! values and of the connection factors.

use num_complex::Complex64;

use crate::connection::connection_factors;
use crate::error::{Error, Result};
use crate::exponent::{Branch, ExponentParam, SolverConfig};
use crate::mp::{Complex, Ctx};
use crate::series::{evaluate_frobenius, evaluate_thome_asymptotic, FrobeniusSolution, ThomeSolution};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-12, atol: 1e-14, max_steps: 200_000 }
    }
}

pub type State = [Complex64; 2];

pub(crate) fn c64(z: &Complex) -> Complex64 {
    let (re, im) = z.to_f64();
    Complex64::new(re, im)
}

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Integrates `y = (phi, phi')` from `x0` to `x1` (`0 <= x0 < x1`).
pub fn integrate_half_line(param: &ExponentParam, coupling: Complex64, energy: Complex64, x0: f64, y0: State, x1: f64, opts: &OdeOptions) -> Result<State> {
    let (y, log_scale) = integrate(param, coupling, energy, x0, y0, x1, opts, false)?;
    debug_assert_eq!(log_scale, 0.0);
    Ok(y)
}

/// Like [`integrate_half_line`], but keeps the state bounded: the true
/// solution is `exp(log_scale) * y`.
pub fn integrate_rescaled(param: &ExponentParam, coupling: Complex64, energy: Complex64, x0: f64, y0: State, x1: f64, opts: &OdeOptions) -> Result<(State, f64)> {
    integrate(param, coupling, energy, x0, y0, x1, opts, true)
}

#[allow(clippy::too_many_arguments)]
fn integrate(param: &ExponentParam, coupling: Complex64, energy: Complex64, x0: f64, y0: State, x1: f64, opts: &OdeOptions, rescale: bool) -> Result<(State, f64)> {
    if !(x0 >= 0.0 && x1 > x0) {
        return Err(Error::Domain(alloc::format!("integration interval [{x0}, {x1}] must satisfy 0 <= x0 < x1")));
    }
    let a = param.a();
    let rhs = |x: f64, y: &State| -> State { [y[1], -(energy + coupling * libm::pow(x, a)) * y[0]] };
    let mut x = x0;
    let mut y = y0;
    let mut h = ((x1 - x0) / 100.0).min(0.01);
    let mut steps = 0usize;
    let mut log_scale = 0.0;
    while x < x1 {
        if steps >= opts.max_steps {
            return Err(Error::Convergence { terms: steps, tail: x1 - x });
        }
        steps += 1;
        h = h.min(x1 - x);
        let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for (r, kr) in k.iter().enumerate().take(s) {
                for d in 0..2 {
                    ys[d] += kr[d] * (h * A[s][r]);
                }
            }
            k[s] = rhs(x + C[s] * h, &ys);
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for d in 0..2 {
            let mut e = Complex64::new(0.0, 0.0);
            for s in 0..7 {
                y5[d] += k[s][d] * (h * B5[s]);
                e += k[s][d] * (h * (B5[s] - B4[s]));
            }
            let sc = opts.atol + opts.rtol * y[d].norm().max(y5[d].norm());
            err = err.max(e.norm() / sc);
        }
        if err <= 1.0 {
            x += h;
            y = y5;
            let size = y[0].norm().max(y[1].norm());
            if rescale && size > 1e100 {
                y = [y[0] / size, y[1] / size];
                log_scale += libm::log(size);
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < 1e-14 * x.max(1.0) {
            return Err(Error::Convergence { terms: steps, tail: x1 - x });
        }
    }
    Ok((y, log_scale))
}

#[derive(Debug, Clone, Copy)]
pub struct ConnectionCheck {
    /// `phi_i(x_probe)` from the integrator.
    pub ode: Complex64,
    /// `T_i3 phi_3 + T_i4 phi_4` at `x_probe`.
    pub connected: Complex64,
    pub deviation: f64,
    /// Error estimate of the Thomé combination, relative to its value.
    pub thome_error: f64,
}

/// Integrates `phi_i` from series data near the origin to `x_probe` and
/// compares with its re-expansion through the connection factors.
pub fn verify_connection(
    param: &ExponentParam,
    branch: Branch,
    energy: &Complex,
    i: usize,
    x_probe: f64,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<ConnectionCheck> {
    let ode = ode_value(param, branch, energy, i, x_probe, cfg, ctx)?;
    let t = connection_factors(param, branch, energy, cfg, ctx)?;
    let xp = ctx.real(x_probe);
    let mut acc = ctx.czero();
    let mut weighted = 0.0;
    for j in [3, 4] {
        let mut th = ThomeSolution::new(param, branch, j, energy, ctx)?;
        let v = evaluate_thome_asymptotic(&mut th, &xp, cfg.series_tol, cfg.max_terms, ctx)?;
        let term = t.get(i, j) * &v.value;
        weighted += term.abs_f64() * v.error;
        acc += &term;
    }
    let connected = c64(&acc);
    let thome_error = weighted / connected.norm().max(f64::MIN_POSITIVE);
    let deviation = (ode - connected).norm() / connected.norm().max(ode.norm()).max(f64::MIN_POSITIVE);
    Ok(ConnectionCheck { ode, connected, deviation, thome_error })
}

/// `phi_i(x)` by integration from `min(0.25, x/2)`, seeded from the series.
pub fn ode_value(param: &ExponentParam, branch: Branch, energy: &Complex, i: usize, x: f64, cfg: &SolverConfig, ctx: &Ctx) -> Result<Complex64> {
    let start = (x / 2.0).min(0.25);
    let mut sol = FrobeniusSolution::new(param, branch, i, energy, ctx)?;
    let v = evaluate_frobenius(&mut sol, &ctx.real(start), cfg.series_tol, cfg.max_terms, ctx)?;
    let y = integrate_half_line(param, c64(&branch.coupling(ctx)), c64(energy), start, [c64(&v.value), c64(&v.deriv)], x, &OdeOptions::default())?;
    Ok(y[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Sigma;

    #[test]
    fn harmonic_limit_matches_closed_form() {
        // with s = 0 the equation is phi'' = -E phi
        let a = ExponentParam::new(3, 1).unwrap();
        let y = integrate_half_line(&a, Complex64::new(0.0, 0.0), Complex64::new(4.0, 0.0), 0.0, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], 3.0, &OdeOptions::default()).unwrap();
        assert!((y[0].re - libm::cos(6.0)).abs() < 1e-10);
        assert!((y[1].re + 2.0 * libm::sin(6.0)).abs() < 1e-10);
    }

    #[test]
    fn rejects_backward_interval() {
        let a = ExponentParam::new(3, 1).unwrap();
        let z = Complex64::new(0.0, 0.0);
        assert!(integrate_half_line(&a, z, z, 1.0, [z, z], 0.5, &OdeOptions::default()).is_err());
    }

    #[test]
    fn connection_factors_reproduce_integrated_solutions() {
        let ctx = Ctx::with_digits(30);
        let cfg = SolverConfig::with_precision(30);
        let a3 = ExponentParam::new(3, 1).unwrap();
        let e = ctx.complex(1.0, 0.0);
        for (branch, x) in [(Branch::physical(Sigma::Plus), 4.0), (Branch::physical(Sigma::Minus), 4.5), (Branch::pt(Sigma::Plus), 3.5)] {
            for i in 1..=2 {
                let c = verify_connection(&a3, branch, &e, i, x, &cfg, &ctx).unwrap();
                assert!(c.thome_error < 1e-7, "{branch:?} {i} thome {}", c.thome_error);
                assert!(c.deviation < 1e-8, "{branch:?} {i}: {}", c.deviation);
            }
        }
    }
}

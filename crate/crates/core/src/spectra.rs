//! PT-symmetric eigenvalues, Gamow energies by rotation, and direct
//! Gamow searches on the scattering denominator.

use alloc::vec::Vec;

use crate::connection::{connection_column, ConnectionColumn};
use crate::error::{Error, Result};
use crate::exponent::{symanzik_rotate, Branch, Direction, EnergyValue, ExponentParam, Frame, Sigma, SolverConfig};
use crate::mp::{Complex, Ctx};
use crate::scattering::{combine_columns, matching_from_columns, Convention, MatchingCoefficients};

/// PT indicator (or physical denominator) at one energy, with the columns
/// it was built from.
#[derive(Debug, Clone)]
pub struct Indicator {
    pub energy: Complex,
    pub value: Complex,
    /// `|T14(-) T24(+)| + |T24(-) T14(+)|`.
    pub scale: f64,
    pub shift_residual: f64,
    pub minus: ConnectionColumn,
    pub plus: ConnectionColumn,
}

impl Indicator {
    /// `1 + T24(-) T14(+) / (T14(-) T24(+))`: same zeros as the indicator,
    /// without its exponential growth off the real axis.
    pub fn normalized(&self) -> Complex {
        let num = &self.minus.t[1] * &self.plus.t[0];
        let den = &self.minus.t[0] * &self.plus.t[1];
        &(&num / &den) + &Complex::from_real(num.re.int_like(1))
    }

    fn raw(&self) -> Complex {
        self.value.clone()
    }

    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs_f64() / self.scale
        } else {
            f64::INFINITY
        }
    }

    /// Coefficients `A1 = T24(+)`, `A2 = -T14(+)` of the decaying state.
    pub fn state_coefficients(&self) -> MatchingCoefficients {
        MatchingCoefficients { a1: self.plus.t[1].clone(), a2: -&self.plus.t[0], convention: Convention::Gamow }
    }
}

fn combination(param: &ExponentParam, pt: bool, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<Indicator> {
    let (bm, bp) = if pt {
        (Branch::pt(Sigma::Minus), Branch::pt(Sigma::Plus))
    } else {
        (Branch::physical(Sigma::Minus), Branch::physical(Sigma::Plus))
    };
    let minus = connection_column(param, bm, energy, 4, cfg, ctx)?;
    let plus = connection_column(param, bp, energy, 4, cfg, ctx)?;
    let (value, scale) = combine_columns(&minus, &plus);
    let shift_residual = minus.shift_residual.max(plus.shift_residual);
    Ok(Indicator { energy: energy.clone(), value, scale, shift_residual, minus, plus })
}

/// `T14^PT(-) T24^PT(+) + T24^PT(-) T14^PT(+)`, whose zeros are the PT eigenvalues.
pub fn pt_indicator(param: &ExponentParam, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<Indicator> {
    if !param.engine_supported() {
        return Err(Error::RegimeMismatch { operation: "pt_indicator", regime: param.regime().name() });
    }
    combination(param, true, energy, cfg, ctx)
}

/// The physical denominator `D(E)`; its zeros in the lower half-plane are Gamow energies.
pub fn gamow_denominator(param: &ExponentParam, energy: &Complex, cfg: &SolverConfig, ctx: &Ctx) -> Result<Indicator> {
    if !param.engine_supported() {
        return Err(Error::RegimeMismatch { operation: "gamow_denominator", regime: param.regime().name() });
    }
    combination(param, false, energy, cfg, ctx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenKind {
    Real,
    Pair,
}

#[derive(Debug, Clone)]
pub struct PtEigenvalue {
    /// 1-based position after ordering by real part.
    pub index: usize,
    pub value: Complex,
    pub kind: EigenKind,
    /// Index of the conjugate partner for complex eigenvalues.
    pub partner: Option<usize>,
    /// Relative indicator `|I| / scale` at the root.
    pub residual: f64,
}

/// Scan and refinement settings for the eigenvalue searches.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Initial spacing of the real scan grid.
    pub step: f64,
    /// Number of times the spacing is halved around a local minimum.
    pub halvings: u32,
    pub max_iterations: usize,
    /// Imaginary offset of complex seeds placed at rejected minima.
    pub seed_offset: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { step: 0.1, halvings: 3, max_iterations: 60, seed_offset: 0.5 }
    }
}

/// Acceptance threshold on the relative indicator.
///
/// The nominal target is `10^(5-digits)` times the median grid value. The
/// connection factors lose digits as the energy grows, so the threshold
/// never drops below a hundred times the measured shift residual.
fn acceptance(cfg: &SolverConfig, median: f64, shift_residual: f64) -> f64 {
    let nominal = libm::pow(10.0, 5.0 - cfg.precision_digits as f64) * median;
    nominal.max(100.0 * shift_residual)
}

fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().cloned().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return 1.0;
    }
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

struct Sample {
    e: f64,
    re: f64,
    rel: f64,
}

/// Grid sample at real `e`. On the real axis the `sigma = +1` PT column is
/// the conjugate of the `sigma = -1` one, so only the latter is computed and
/// the indicator reduces to `2 Re(T14 conj(T24))`.
fn sample(param: &ExponentParam, e: f64, cfg: &SolverConfig, ctx: &Ctx) -> Result<Sample> {
    let col = connection_column(param, Branch::pt(Sigma::Minus), &ctx.complex(e, 0.0), 4, cfg, ctx)?;
    let prod = &col.t[0] * &col.t[1].conj();
    let scale = 2.0 * prod.abs_f64();
    let re = 2.0 * prod.re.to_f64() / scale.max(f64::MIN_POSITIVE);
    Ok(Sample { e, re, rel: re.abs() })
}

/// Sign-change brackets and rejected minima of the indicator on `[lo, hi]`
/// sampled at spacing `h`, with the spacing halved around each minimum.
struct ScanOutcome {
    brackets: Vec<(f64, f64)>,
    rejected: Vec<f64>,
    median: f64,
}

fn scan_real(param: &ExponentParam, lo: f64, hi: f64, opts: &SearchOptions, cfg: &SolverConfig, ctx: &Ctx) -> Result<ScanOutcome> {
    let n = libm::ceil((hi - lo) / opts.step).max(2.0) as usize;
    let h = (hi - lo) / n as f64;
    let grid: Vec<Sample> = (0..=n).map(|k| sample(param, lo + h * k as f64, cfg, ctx)).collect::<Result<_>>()?;
    let med = median(&grid.iter().map(|s| s.rel).collect::<Vec<_>>());

    let mut brackets = Vec::new();
    let mut rejected = Vec::new();
    let mut k = 0;
    while k + 1 < grid.len() {
        let (a, b) = (&grid[k], &grid[k + 1]);
        if a.re == 0.0 {
            brackets.push((a.e, a.e));
        } else if a.re.signum() != b.re.signum() && b.re != 0.0 {
            brackets.push((a.e, b.e));
        }
        k += 1;
    }
    if grid.last().map(|s| s.re == 0.0).unwrap_or(false) {
        let e = grid.last().unwrap().e;
        brackets.push((e, e));
    }
    // Interior minima without a sign change nearby may hide a close pair of
    // roots; resample them on a finer grid before treating them as vanished pairs.
    for k in 1..grid.len() - 1 {
        let (l, m, r) = (&grid[k - 1], &grid[k], &grid[k + 1]);
        if !(m.rel < l.rel && m.rel <= r.rel) {
            continue;
        }
        if l.re.signum() != m.re.signum() || m.re.signum() != r.re.signum() {
            continue;
        }
        let mut found = Vec::new();
        let mut hh = h;
        for _ in 0..opts.halvings {
            hh /= 2.0;
            let steps = libm::round(2.0 * h / hh) as usize;
            let fine: Vec<Sample> = (0..=steps).map(|s| sample(param, l.e + hh * s as f64, cfg, ctx)).collect::<Result<_>>()?;
            found = fine.windows(2).filter(|w| w[0].re.signum() != w[1].re.signum()).map(|w| (w[0].e, w[1].e)).collect();
            if !found.is_empty() {
                break;
            }
        }
        if found.is_empty() {
            rejected.push(m.e);
        } else if found.len() == 2 && found[1].0 - found[0].1 < hh * 0.5 {
            return Err(Error::RefinementNeeded { near: m.e });
        } else {
            brackets.extend(found);
        }
    }
    rejected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    brackets.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    brackets.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    Ok(ScanOutcome { brackets, rejected, median: med })
}

/// Longest secant step in energy units; far jumps leave the region where
/// the series converge quickly.
const MAX_STEP: f64 = 1.0;

/// Secant iteration on `target(f(E))`, optionally kept on the real axis.
///
/// On the real axis a bracket `[lo, hi]` with a sign change of the real part
/// is maintained and the step falls back to bisection when the secant leaves it.
/// Convergence is judged on the relative indicator either way.
fn secant<F>(
    mut f: F,
    target: fn(&Indicator) -> Complex,
    x0: Complex,
    x1: Complex,
    bracket: Option<(Complex, Complex)>,
    max_iter: usize,
    threshold: f64,
    ctx: &Ctx,
) -> Result<(Complex, Indicator)>
where
    F: FnMut(&Complex) -> Result<Indicator>,
{
    let mut trace = Vec::new();
    let mut xa = x0;
    let mut fa = f(&xa)?;
    let mut xb = x1;
    let mut fb = f(&xb)?;
    let mut br = bracket.map(|(lo, hi)| {
        let flo = f(&lo).map(|v| v.value.re.to_f64()).unwrap_or(0.0);
        (lo, hi, flo.signum())
    });
    let stall = libm::pow(10.0, -(ctx.digits() as f64) + 3.0);
    for _ in 0..max_iter {
        trace.push(xb.to_f64());
        if fb.relative() <= threshold {
            return Ok((xb, fb));
        }
        let (ga, gb) = (target(&fa), target(&fb));
        let df = &gb - &ga;
        let mut next = if df.is_zero() {
            None
        } else {
            Some(&xb - &(&(&xb - &xa) * &gb / df))
        };
        if let Some((lo, hi, slo)) = &mut br {
            let sb = fb.value.re.to_f64().signum();
            if sb == *slo {
                *lo = xb.clone();
            } else {
                *hi = xb.clone();
            }
            let inside = next.as_ref().map(|n| {
                let v = n.re.clone();
                let (a, b) = if lo.re < hi.re { (&lo.re, &hi.re) } else { (&hi.re, &lo.re) };
                v > *a && v < *b
            });
            next = match inside {
                Some(true) => next.map(|n| Complex::from_real(n.re)),
                _ => Some((&*lo + &*hi).div_int(2)),
            };
        }
        let Some(mut next) = next else { break };
        let mut step = (&next - &xb).abs_f64();
        if step > MAX_STEP {
            let shrink = ctx.real(MAX_STEP / step);
            next = &xb + &(&next - &xb).scale(&shrink);
            step = MAX_STEP;
        }
        xa = xb;
        fa = fb;
        xb = next;
        fb = f(&xb)?;
        if step <= stall * xb.abs_f64().max(1.0) {
            trace.push(xb.to_f64());
            if fb.relative() <= threshold {
                return Ok((xb, fb));
            }
            break;
        }
    }
    Err(Error::NonConvergence { iterations: trace.len(), trace })
}

fn order(mut list: Vec<(Complex, EigenKind, f64)>) -> Vec<PtEigenvalue> {
    list.sort_by(|a, b| {
        let (ar, ai) = a.0.to_f64();
        let (br, bi) = b.0.to_f64();
        ar.partial_cmp(&br).unwrap().then(ai.partial_cmp(&bi).unwrap())
    });
    let mut out: Vec<PtEigenvalue> = list
        .into_iter()
        .enumerate()
        .map(|(k, (value, kind, residual))| PtEigenvalue { index: k + 1, value, kind, partner: None, residual })
        .collect();
    for k in 0..out.len() {
        if out[k].kind == EigenKind::Pair {
            let (re, im) = out[k].value.to_f64();
            let p = out.iter().position(|o| {
                let (r2, i2) = o.value.to_f64();
                o.kind == EigenKind::Pair && (r2 - re).abs() < 1e-9 * re.abs().max(1.0) && (i2 + im).abs() < 1e-9 * im.abs().max(1.0)
            });
            out[k].partner = p.map(|p| p + 1);
        }
    }
    out
}

/// Real PT eigenvalues in `[lo, hi]`, ascending, at most `max_count`.
pub fn find_real_pt_eigenvalues(
    param: &ExponentParam,
    lo: f64,
    hi: f64,
    max_count: usize,
    opts: &SearchOptions,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<Vec<PtEigenvalue>> {
    Ok(real_search(param, lo, hi, max_count, opts, cfg, ctx)?.0)
}

fn real_search(
    param: &ExponentParam,
    lo: f64,
    hi: f64,
    max_count: usize,
    opts: &SearchOptions,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<(Vec<PtEigenvalue>, Vec<f64>, f64)> {
    if !(lo < hi) {
        return Err(Error::Domain(alloc::format!("empty window [{lo}, {hi}]")));
    }
    if !param.engine_supported() {
        return Err(Error::RegimeMismatch { operation: "find_real_pt_eigenvalues", regime: param.regime().name() });
    }
    let scan = scan_real(param, lo, hi, opts, cfg, ctx)?;
    let mut roots = Vec::new();
    for &(a, b) in &scan.brackets {
        if roots.len() >= max_count {
            break;
        }
        let f = |e: &Complex| pt_indicator(param, e, cfg, ctx);
        let (xa, xb) = (ctx.complex(a, 0.0), ctx.complex(b, 0.0));
        let (root, ind) = if a == b {
            let ind = f(&xa)?;
            (xa, ind)
        } else {
            let probe = f(&xb)?;
            let threshold = acceptance(cfg, scan.median, probe.shift_residual);
            secant(f, Indicator::raw, xa.clone(), xb.clone(), Some((xa, xb)), opts.max_iterations, threshold, ctx)?
        };
        roots.push((Complex::from_real(root.re), EigenKind::Real, ind.relative()));
    }
    Ok((order(roots), scan.rejected, scan.median))
}

/// Rectangle in the upper half-plane searched for complex PT eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedRegion {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl SeedRegion {
    pub fn new(re: (f64, f64), im: (f64, f64)) -> Result<Self> {
        if !(re.0 <= re.1 && im.0 <= im.1 && im.0 > 0.0) {
            return Err(Error::Domain(alloc::format!("bad seed region {re:?} x {im:?}i (must be ordered, Im > 0)")));
        }
        Ok(SeedRegion { re, im })
    }

    /// Center first, then the centers of the four quadrants.
    pub fn seeds(&self) -> Vec<(f64, f64)> {
        let (r0, r1) = self.re;
        let (i0, i1) = self.im;
        let (rc, ic) = ((r0 + r1) / 2.0, (i0 + i1) / 2.0);
        let mut v = alloc::vec![(rc, ic)];
        for &r in &[(r0 + rc) / 2.0, (rc + r1) / 2.0] {
            for &i in &[(i0 + ic) / 2.0, (ic + i1) / 2.0] {
                if (r, i) != (rc, ic) {
                    v.push((r, i));
                }
            }
        }
        v
    }

    fn contains(&self, re: f64, im: f64) -> bool {
        re >= self.re.0 && re <= self.re.1 && im >= self.im.0 && im <= self.im.1
    }
}

/// Complex PT eigenvalues in `region` together with their conjugates,
/// at most `max_count` pairs.
pub fn find_complex_pt_eigenvalues(
    param: &ExponentParam,
    region: &SeedRegion,
    max_count: usize,
    opts: &SearchOptions,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<Vec<PtEigenvalue>> {
    let mut found = refine_seeds(param, &region.seeds(), max_count, opts, cfg, ctx)?;
    found.retain(|(v, _, _)| {
        let (r, i) = v.to_f64();
        region.contains(r, i.abs())
    });
    Ok(order(found))
}

/// Complex PT eigenvalues refined from individual upper half-plane seeds.
///
/// A seed that fails to converge is skipped; the call fails only when no
/// seed converges and at least one was given.
pub fn refine_complex_seeds(
    param: &ExponentParam,
    seeds: &[(f64, f64)],
    max_count: usize,
    opts: &SearchOptions,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<Vec<PtEigenvalue>> {
    Ok(order(refine_seeds(param, seeds, max_count, opts, cfg, ctx)?))
}

fn refine_seeds(
    param: &ExponentParam,
    seeds: &[(f64, f64)],
    max_count: usize,
    opts: &SearchOptions,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<Vec<(Complex, EigenKind, f64)>> {
    if !param.engine_supported() {
        return Err(Error::RegimeMismatch { operation: "find_complex_pt_eigenvalues", regime: param.regime().name() });
    }
    let mut found: Vec<(Complex, EigenKind, f64)> = Vec::new();
    let mut last_err = None;
    for &(re, im) in seeds {
        if found.len() >= max_count.saturating_mul(2) {
            break;
        }
        if !(im > 0.0) {
            return Err(Error::Domain(alloc::format!("complex seeds must lie in the upper half-plane, got {re}{im:+}i")));
        }
        match refine_complex(param, re, im, opts, cfg, ctx) {
            Ok((root, res, partner_res)) => {
                let (r, i) = root.to_f64();
                let dup = found.iter().any(|(v, _, _)| {
                    let (vr, vi) = v.to_f64();
                    (vr - r).abs() < 1e-7 * r.abs().max(1.0) && (vi - i).abs() < 1e-7 * i.abs().max(1.0)
                });
                if dup || !(i > 1e-8 * r.abs().max(1.0)) {
                    continue;
                }
                found.push((root.conj(), EigenKind::Pair, partner_res));
                found.push((root, EigenKind::Pair, res));
            }
            Err(e) => last_err = Some(e),
        }
    }
    if found.is_empty() {
        if let Some(e) = last_err {
            return Err(e);
        }
    }
    Ok(found)
}

fn refine_complex(param: &ExponentParam, re: f64, im: f64, opts: &SearchOptions, cfg: &SolverConfig, ctx: &Ctx) -> Result<(Complex, f64, f64)> {
    let f = |e: &Complex| pt_indicator(param, e, cfg, ctx);
    let x0 = ctx.complex(re, im);
    let x1 = ctx.complex(re + 0.01, im + 0.01);
    let probe = f(&x0)?;
    let threshold = acceptance(cfg, 1.0, probe.shift_residual);
    let (root, ind) = secant(f, Indicator::normalized, x0, x1, None, opts.max_iterations, threshold, ctx)?;
    let partner = pt_indicator(param, &root.conj(), cfg, ctx)?;
    let pres = partner.relative();
    if pres > threshold.max(10.0 * ind.relative()) {
        return Err(Error::Contract(alloc::format!("conjugate partner misses the indicator (relative {pres:e})")));
    }
    Ok((root, ind.relative(), pres))
}

/// Full spectrum in a real window: real roots, complex pairs seeded from the
/// minima of the scan that did not reach zero, and pairs in `regions`.
///
/// Pairs far from the real axis leave no minimum on it and are only found
/// through an explicit region.
pub fn pt_spectrum(
    param: &ExponentParam,
    lo: f64,
    hi: f64,
    max_count: usize,
    regions: &[SeedRegion],
    opts: &SearchOptions,
    cfg: &SolverConfig,
    ctx: &Ctx,
) -> Result<Vec<PtEigenvalue>> {
    let (real, rejected, _) = real_search(param, lo, hi, usize::MAX, opts, cfg, ctx)?;
    let seeds: Vec<(f64, f64)> = rejected.iter().map(|&e| (e, opts.seed_offset)).collect();
    let mut all: Vec<(Complex, EigenKind, f64)> = real.into_iter().map(|p| (p.value, p.kind, p.residual)).collect();
    if !seeds.is_empty() {
        all.extend(refine_seeds(param, &seeds, usize::MAX, opts, cfg, ctx).unwrap_or_default());
    }
    for region in regions {
        for p in find_complex_pt_eigenvalues(param, region, usize::MAX, opts, cfg, ctx)? {
            let (r, i) = p.value.to_f64();
            let dup = all.iter().any(|(v, _, _)| {
                let (vr, vi) = v.to_f64();
                libm::hypot(vr - r, vi - i) < 1e-7 * libm::hypot(r, i).max(1.0)
            });
            if !dup {
                all.push((p.value, p.kind, p.residual));
            }
        }
    }
    let mut out = order(all);
    out.truncate(max_count);
    // a truncated pair loses its partner link
    let n = out.len();
    for p in &mut out {
        if p.partner.map(|k| k > n).unwrap_or(false) {
            p.partner = None;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GamowState {
    pub energy: Complex,
    pub source: PtEigenvalue,
    pub coefficients: MatchingCoefficients,
    /// Relative `|D|` at the rotated energy.
    pub residual: f64,
    /// Set when the residual exceeds the Gamow contract threshold.
    pub flagged: bool,
}

/// Gamow energies `E = E_PT exp(-i pi/(a+2))` with their coefficients and a
/// direct check of `D(E) = 0`.
pub fn gamow_energies(param: &ExponentParam, pt: &[PtEigenvalue], cfg: &SolverConfig, ctx: &Ctx) -> Result<Vec<GamowState>> {
    pt.iter()
        .map(|src| {
            let rotated = symanzik_rotate(param, &EnergyValue { value: src.value.clone(), frame: Frame::PtRotated }, Direction::ToPhysical, ctx)?;
            let d = gamow_denominator(param, &rotated.value, cfg, ctx)?;
            let residual = d.relative();
            let coefficients = match matching_from_columns(&d.minus, &d.plus, Convention::Gamow) {
                Ok(c) => c,
                Err(_) => d.state_coefficients(),
            };
            Ok(GamowState { energy: rotated.value, source: src.clone(), coefficients, residual, flagged: residual > 1e-8 })
        })
        .collect()
}

/// Roots `D(E) = 0` by complex secant iteration from a lower half-plane seed.
pub fn find_gamow_direct(param: &ExponentParam, seed: &Complex, opts: &SearchOptions, cfg: &SolverConfig, ctx: &Ctx) -> Result<(Complex, Indicator)> {
    if !seed.im.is_negative() {
        return Err(Error::Domain("Gamow seeds must lie in the lower half-plane".into()));
    }
    let f = |e: &Complex| gamow_denominator(param, e, cfg, ctx);
    let probe = f(seed)?;
    let threshold = acceptance(cfg, 1.0, probe.shift_residual);
    let x1 = seed + &ctx.complex(1e-3, -1e-3);
    secant(f, Indicator::normalized, seed.clone(), x1, None, opts.max_iterations, threshold, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Ctx, SolverConfig) {
        (Ctx::with_digits(30), SolverConfig::with_precision(30))
    }

    #[test]
    fn indicator_vanishes_at_table_values() {
        let (ctx, cfg) = setup();
        let a3 = ExponentParam::new(3, 1).unwrap();
        let at = pt_indicator(&a3, &ctx.complex(1.156_267_072_0, 0.0), &cfg, &ctx).unwrap();
        assert!(at.relative() < 1e-8, "{}", at.relative());
        let off = pt_indicator(&a3, &ctx.complex(2.5, 0.0), &cfg, &ctx).unwrap();
        assert!(off.relative() > 1e-2, "{}", off.relative());
        let a2 = ExponentParam::new(2, 1).unwrap();
        let q = pt_indicator(&a2, &ctx.complex(1.258_091_762_2, 0.0), &cfg, &ctx).unwrap();
        assert!(q.relative() < 1e-8, "{}", q.relative());
    }

    #[test]
    fn indicator_is_real_on_the_axis() {
        let (ctx, cfg) = setup();
        let a = ExponentParam::new(4, 1).unwrap();
        let e = ctx.complex(2.7, 0.0);
        let ind = pt_indicator(&a, &e, &cfg, &ctx).unwrap();
        assert!(ind.value.im.to_f64().abs() < 1e-25 * ind.scale);
        // the sigma = +1 PT column is the conjugate of the sigma = -1 one
        for k in 0..2 {
            assert!((&ind.plus.t[k] - &ind.minus.t[k].conj()).abs_f64() < 1e-25 * ind.scale.sqrt());
        }
    }

    #[test]
    fn linear_regime_is_rejected() {
        let (ctx, cfg) = setup();
        let a1 = ExponentParam::new(1, 1).unwrap();
        assert!(matches!(pt_indicator(&a1, &ctx.cone(), &cfg, &ctx), Err(Error::RegimeMismatch { .. })));
        assert!(matches!(
            find_real_pt_eigenvalues(&a1, 0.0, 1.0, 1, &SearchOptions::default(), &cfg, &ctx),
            Err(Error::RegimeMismatch { .. })
        ));
    }

    #[test]
    fn first_eigenvalues_and_their_gamow_states() {
        let (ctx, cfg) = setup();
        let a3 = ExponentParam::new(3, 1).unwrap();
        let opts = SearchOptions { step: 0.25, ..SearchOptions::default() };
        let pt = find_real_pt_eigenvalues(&a3, 0.0, 4.5, 5, &opts, &cfg, &ctx).unwrap();
        let want = [1.156_267_072_0, 4.109_228_752_8];
        assert_eq!(pt.len(), 2);
        for (p, w) in pt.iter().zip(want) {
            assert!((p.value.re.to_f64() - w).abs() < 1e-9);
            assert_eq!(p.kind, EigenKind::Real);
        }
        assert_eq!((pt[0].index, pt[1].index), (1, 2));

        let g = gamow_energies(&a3, &pt, &cfg, &ctx).unwrap();
        let rot = ctx.cis(&(-&a3.rotation_angle(&ctx)));
        for s in &g {
            assert!(!s.flagged);
            assert!(s.energy.im.is_negative());
            let direct = &s.source.value * &rot;
            assert!((&direct - &s.energy).abs_f64() < 1e-25);
        }
        let (e0re, e0im) = g[0].energy.to_f64();
        assert!((e0re - 0.935_439_711_3).abs() < 1e-9 && (e0im + 0.679_636_732_6).abs() < 1e-9);

        let seed = ctx.complex(e0re + 0.02, e0im - 0.02);
        let (root, ind) = find_gamow_direct(&a3, &seed, &SearchOptions::default(), &cfg, &ctx).unwrap();
        assert!((&root - &g[0].energy).abs_f64() < 1e-8);
        assert!(ind.relative() < 1e-20);
    }

    #[test]
    fn gamow_seed_must_be_below_the_axis() {
        let (ctx, cfg) = setup();
        let a3 = ExponentParam::new(3, 1).unwrap();
        let r = find_gamow_direct(&a3, &ctx.complex(2.0, 0.0), &SearchOptions::default(), &cfg, &ctx);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn complex_pair_from_region() {
        let (ctx, cfg) = setup();
        let a2 = ExponentParam::new(2, 1).unwrap();
        let region = SeedRegion::new((4.0, 6.0), (0.3, 1.5)).unwrap();
        let pairs = find_complex_pt_eigenvalues(&a2, &region, 1, &SearchOptions::default(), &cfg, &ctx).unwrap();
        assert_eq!(pairs.len(), 2);
        let (r, i) = pairs[1].value.to_f64();
        assert!((r - 4.991_314_40).abs() < 1e-7 && (i - 0.780_485_59).abs() < 1e-7, "{r} {i}");
        assert_eq!(pairs[0].partner, Some(2));
        assert_eq!(pairs[1].partner, Some(1));
        assert!(SeedRegion::new((1.0, 2.0), (-1.0, 1.0)).is_err());
    }
}

//! Command drivers: each returns a serializable record plus its CSV form.
//!
//! Grid points and wavefunction samples are spread over a rayon pool; every
//! worker builds its own multiprecision context and results are collected in
//! grid order, so output does not depend on the worker count.

use rayon::prelude::*;
use serde::Serialize;

use risewell_core::exponent::{ExponentParam, SolverConfig};
use risewell_core::mp::{Complex, Ctx};
use risewell_core::scattering::{assemble_scan, scan_point};
use risewell_core::spectra::{find_gamow_direct, find_real_pt_eigenvalues, gamow_energies, pt_spectrum, EigenKind, GamowState, PtEigenvalue, SearchOptions, SeedRegion};
use risewell_core::wavefunction::{Wavefunction, WavefunctionSample};
use risewell_core::Error;

use crate::output::{sci, Table};
use crate::plot::{Plot, Series, Style};
use crate::CliError;

pub struct Runner {
    pub cfg: SolverConfig,
    pub workers: usize,
    pub opts: SearchOptions,
    pool: rayon::ThreadPool,
}

/// `points` equally spaced values from `from` to `to` inclusive.
pub fn linspace(from: f64, to: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if points < 2 || !(from < to) || !from.is_finite() || !to.is_finite() {
        return Err(CliError::Usage(format!("grid needs from < to and at least 2 points, got [{from}, {to}] with {points}")));
    }
    let h = (to - from) / (points - 1) as f64;
    Ok((0..points).map(|k| if k == points - 1 { to } else { from + h * k as f64 }).collect())
}

fn pair(z: &Complex) -> (f64, f64) {
    z.to_f64()
}

#[derive(Debug, Clone, Serialize)]
pub struct Grid {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    #[serde(rename = "E")]
    pub energy: f64,
    pub re_s: f64,
    pub im_s: f64,
    pub delta: f64,
    pub delta_tau: f64,
    pub unitarity_residual: f64,
    pub determinant_residual: f64,
    pub shift_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub a_num: u32,
    pub a_den: u32,
    pub precision: u32,
    pub grid: Grid,
    pub rows: Vec<ScanRow>,
}

impl ScanRecord {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["E", "Re(S)", "Im(S)", "delta", "delta_tau", "unitarity_residual", "determinant_residual", "shift_residual"]);
        for r in &self.rows {
            t.push(vec![sci(r.energy), sci(r.re_s), sci(r.im_s), sci(r.delta), sci(r.delta_tau), sci(r.unitarity_residual), sci(r.determinant_residual), sci(r.shift_residual)]);
        }
        t
    }

    /// Phase shift and time delay plots as `(file suffix, plot)`.
    pub fn plots(&self) -> Vec<(&'static str, Plot)> {
        let label = format!("a = {}/{}", self.a_num, self.a_den);
        let style = if self.a_num == 1 && self.a_den == 2 { Style::Dotted } else { Style::Line };
        let series = |f: fn(&ScanRow) -> f64| Series { label: label.clone(), points: self.rows.iter().map(|r| (r.energy, f(r))).collect(), style };
        vec![
            (".delta", Plot { title: "Phase shift".into(), x_label: "E".into(), y_label: "delta".into(), series: vec![series(|r| r.delta)] }),
            (".delay", Plot { title: "Time delay".into(), x_label: "E".into(), y_label: "delta tau".into(), series: vec![series(|r| r.delta_tau)] }),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenRecord {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    pub kind: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct GamowRecord {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRecord {
    pub a_num: u32,
    pub a_den: u32,
    pub precision: u32,
    pub eigenvalues: Vec<EigenRecord>,
    pub gamow: Vec<GamowRecord>,
}

fn kind_name(k: EigenKind) -> &'static str {
    match k {
        EigenKind::Real => "real",
        EigenKind::Pair => "pair",
    }
}

impl SpectrumRecord {
    pub fn new(param: &ExponentParam, cfg: &SolverConfig, eig: &[PtEigenvalue], gamow: &[GamowState]) -> Self {
        SpectrumRecord {
            a_num: param.p(),
            a_den: param.q(),
            precision: cfg.precision_digits,
            eigenvalues: eig
                .iter()
                .map(|e| {
                    let (re, im) = pair(&e.value);
                    EigenRecord { index: e.index, re, im, residual: e.residual, kind: kind_name(e.kind) }
                })
                .collect(),
            gamow: gamow
                .iter()
                .map(|g| {
                    let (re, im) = pair(&g.energy);
                    GamowRecord { re, im, residual: g.residual }
                })
                .collect(),
        }
    }

    /// One row per PT eigenvalue followed by one per Gamow energy.
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["set", "index", "kind", "re", "im", "residual"]);
        for e in &self.eigenvalues {
            t.push(vec!["pt".into(), e.index.to_string(), e.kind.into(), sci(e.re), sci(e.im), sci(e.residual)]);
        }
        for (k, g) in self.gamow.iter().enumerate() {
            t.push(vec!["gamow".into(), (k + 1).to_string(), String::new(), sci(g.re), sci(g.im), sci(g.residual)]);
        }
        t
    }

    pub fn plot(&self) -> Plot {
        let title = format!("Spectrum, a = {}/{}", self.a_num, self.a_den);
        Plot {
            title,
            x_label: "Re E".into(),
            y_label: "Im E".into(),
            series: vec![
                Series { label: "PT".into(), points: self.eigenvalues.iter().map(|e| (e.re, e.im)).collect(), style: Style::Points },
                Series { label: "Gamow".into(), points: self.gamow.iter().map(|g| (g.re, g.im)).collect(), style: Style::Points },
            ],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GamowStateRecord {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    pub flagged: bool,
    pub pt_re: f64,
    pub pt_im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GamowListRecord {
    pub a_num: u32,
    pub a_den: u32,
    pub precision: u32,
    pub states: Vec<GamowStateRecord>,
}

impl GamowListRecord {
    pub fn new(param: &ExponentParam, cfg: &SolverConfig, states: &[GamowState]) -> Self {
        GamowListRecord {
            a_num: param.p(),
            a_den: param.q(),
            precision: cfg.precision_digits,
            states: states
                .iter()
                .enumerate()
                .map(|(k, g)| {
                    let (re, im) = pair(&g.energy);
                    let (pt_re, pt_im) = pair(&g.source.value);
                    GamowStateRecord { index: k + 1, re, im, residual: g.residual, flagged: g.flagged, pt_re, pt_im }
                })
                .collect(),
        }
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["index", "re", "im", "residual", "flagged", "pt_re", "pt_im"]);
        for s in &self.states {
            t.push(vec![s.index.to_string(), sci(s.re), sci(s.im), sci(s.residual), s.flagged.to_string(), sci(s.pt_re), sci(s.pt_im)]);
        }
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleRow {
    pub x: f64,
    pub re_psi: f64,
    pub im_psi: f64,
    pub abs2: f64,
    pub region: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct WavefunctionRecord {
    pub a_num: u32,
    pub a_den: u32,
    pub precision: u32,
    pub state: String,
    pub energy_re: f64,
    pub energy_im: f64,
    /// Normalization window; `|psi|^2` integrates to one over it.
    pub window: (f64, f64),
    pub samples: Vec<SampleRow>,
}

impl WavefunctionRecord {
    pub fn from_samples(param: &ExponentParam, cfg: &SolverConfig, state: &str, wf: &Wavefunction, window: (f64, f64), samples: &[WavefunctionSample]) -> Self {
        let (energy_re, energy_im) = pair(&wf.energy);
        WavefunctionRecord {
            a_num: param.p(),
            a_den: param.q(),
            precision: cfg.precision_digits,
            state: state.into(),
            energy_re,
            energy_im,
            window,
            samples: samples.iter().map(|s| SampleRow { x: s.x, re_psi: s.psi.re, im_psi: s.psi.im, abs2: s.abs2(), region: s.region.name() }).collect(),
        }
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["x", "Re(psi)", "Im(psi)", "abs2", "region"]);
        for s in &self.samples {
            t.push(vec![sci(s.x), sci(s.re_psi), sci(s.im_psi), sci(s.abs2), s.region.into()]);
        }
        t
    }

    pub fn plot(&self) -> Plot {
        Plot {
            title: format!("|psi|^2, a = {}/{}, {} state at E = {:.6}{:+.6}i", self.a_num, self.a_den, self.state, self.energy_re, self.energy_im),
            x_label: "x".into(),
            y_label: "|psi|^2".into(),
            series: vec![Series { label: self.state.clone(), points: self.samples.iter().map(|s| (s.x, s.abs2)).collect(), style: Style::Line }],
        }
    }
}

/// Which state a wavefunction request refers to.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// The `k`-th PT eigenstate (1-based), or the one near a given energy.
    Pt { index: Option<usize>, near: Option<(f64, f64)> },
    /// The Gamow state rotated from the `k`-th PT eigenvalue, or refined from a seed.
    Gamow { index: Option<usize>, near: Option<(f64, f64)> },
    Scattering { energy: f64 },
}

impl StateSpec {
    fn name(&self) -> &'static str {
        match self {
            StateSpec::Pt { .. } => "pt",
            StateSpec::Gamow { .. } => "gamow",
            StateSpec::Scattering { .. } => "scattering",
        }
    }
}

/// Window width used when searching for the first eigenvalues without an explicit window.
const CHUNK: f64 = 10.0;
const SEARCH_LIMIT: f64 = 400.0;

impl Runner {
    pub fn new(cfg: SolverConfig, workers: usize) -> Result<Self, CliError> {
        let workers = workers.max(1);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(Runner { cfg, workers, opts: SearchOptions::default(), pool })
    }

    pub fn ctx(&self) -> Ctx {
        self.cfg.context()
    }

    /// Applies `f` to every item on the pool, one context per worker,
    /// returning results in item order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>, Error>
    where
        T: Sync,
        R: Send,
        F: Fn(&T, &Ctx) -> Result<R, Error> + Sync,
    {
        let cfg = &self.cfg;
        self.pool.install(|| items.par_iter().map_init(|| cfg.context(), |ctx, item| f(item, ctx)).collect())
    }

    pub fn scan(&self, param: &ExponentParam, from: f64, to: f64, points: usize, with_delay: bool) -> Result<ScanRecord, CliError> {
        self.cfg.validate_for(param)?;
        let grid = linspace(from, to, points)?;
        let cfg = &self.cfg;
        let pts = self.map(&grid, |&e, ctx| scan_point(param, e, with_delay, cfg, ctx))?;
        let rows = assemble_scan(&grid, &pts, with_delay)?;
        Ok(ScanRecord {
            a_num: param.p(),
            a_den: param.q(),
            precision: cfg.precision_digits,
            grid: Grid { from, to, points },
            rows: rows
                .into_iter()
                .map(|r| ScanRow {
                    energy: r.energy,
                    re_s: r.s.0,
                    im_s: r.s.1,
                    delta: r.delta,
                    delta_tau: r.delta_tau,
                    unitarity_residual: r.unitarity_residual,
                    determinant_residual: r.determinant_residual,
                    shift_residual: r.shift_residual,
                })
                .collect(),
        })
    }

    pub fn spectrum(&self, param: &ExponentParam, lo: f64, hi: f64, max_count: usize, regions: &[SeedRegion]) -> Result<(Vec<PtEigenvalue>, Vec<GamowState>), CliError> {
        self.cfg.validate_for(param)?;
        let ctx = self.ctx();
        let eig = pt_spectrum(param, lo, hi, max_count, regions, &self.opts, &self.cfg, &ctx)?;
        let gamow = gamow_energies(param, &eig, &self.cfg, &ctx)?;
        Ok((eig, gamow))
    }

    /// The first `count` PT eigenvalues, scanning windows of width 10 upward from 0.
    pub fn first_eigenvalues(&self, param: &ExponentParam, count: usize) -> Result<Vec<PtEigenvalue>, CliError> {
        self.cfg.validate_for(param)?;
        let ctx = self.ctx();
        let mut found: Vec<PtEigenvalue> = Vec::new();
        let mut lo = 0.0;
        while found.len() < count {
            if lo >= SEARCH_LIMIT {
                return Err(CliError::Solver(Error::Domain(format!("fewer than {count} eigenvalues below E = {SEARCH_LIMIT}"))));
            }
            let chunk = pt_spectrum(param, lo, lo + CHUNK, usize::MAX, &[], &self.opts, &self.cfg, &ctx)?;
            for e in chunk {
                let (r, i) = pair(&e.value);
                let dup = found.iter().any(|f| {
                    let (fr, fi) = pair(&f.value);
                    (fr - r).hypot(fi - i) < 1e-7 * r.hypot(i).max(1.0)
                });
                if !dup {
                    found.push(e);
                }
            }
            lo += CHUNK;
        }
        Ok(reindex(found, count))
    }

    pub fn gamow(&self, param: &ExponentParam, count: usize) -> Result<Vec<GamowState>, CliError> {
        if !param.engine_supported() {
            // a = 1 has constant S: no poles to report
            return Err(Error::RegimeMismatch { operation: "Gamow energies", regime: param.regime().name() }.into());
        }
        let eig = self.first_eigenvalues(param, count)?;
        Ok(gamow_energies(param, &eig, &self.cfg, &self.ctx())?)
    }

    /// Builds, normalizes over `window` and samples the requested state.
    pub fn wavefunction(&self, param: &ExponentParam, spec: &StateSpec, xs: &[f64], window: (f64, f64)) -> Result<WavefunctionRecord, CliError> {
        self.cfg.validate_for(param)?;
        let ctx = self.ctx();
        let mut wf = self.build_state(param, spec, &ctx)?;
        wf.normalize(window.0, window.1, 1e-8, &ctx)?;
        let samples = self.sample(&wf, xs)?;
        Ok(WavefunctionRecord::from_samples(param, &self.cfg, spec.name(), &wf, window, &samples))
    }

    pub fn build_state(&self, param: &ExponentParam, spec: &StateSpec, ctx: &Ctx) -> Result<Wavefunction, CliError> {
        let cfg = &self.cfg;
        let wf = match spec {
            StateSpec::Scattering { energy } => Wavefunction::scattering(param, *energy, cfg, ctx)?,
            StateSpec::Pt { index, near } => {
                let e = match (index, near) {
                    (_, Some((re, im))) if *im != 0.0 => {
                        let seeds = [(*re, im.abs())];
                        let roots = risewell_core::spectra::refine_complex_seeds(param, &seeds, 1, &self.opts, cfg, ctx)?;
                        let want_upper = *im > 0.0;
                        roots.into_iter().find(|r| !r.value.im.is_negative() == want_upper).map(|r| r.value)
                    }
                    (_, Some((re, _))) => find_real_pt_eigenvalues(param, re - 0.25, re + 0.25, 1, &self.opts, cfg, ctx)?.into_iter().next().map(|r| r.value),
                    (Some(k), None) => self.first_eigenvalues(param, *k)?.into_iter().nth(k - 1).map(|r| r.value),
                    (None, None) => return Err(CliError::Usage("a PT state needs --index or --energy".into())),
                };
                let e = e.ok_or_else(|| CliError::Solver(Error::Domain("no PT eigenvalue found at the requested position".into())))?;
                Wavefunction::pt_state(param, &e, cfg, ctx)?
            }
            StateSpec::Gamow { index, near } => match (index, near) {
                (_, Some((re, im))) => {
                    let (e, _) = find_gamow_direct(param, &ctx.complex(*re, *im), &self.opts, cfg, ctx)?;
                    let g = risewell_core::spectra::gamow_denominator(param, &e, cfg, ctx)?;
                    Wavefunction::new(param, false, &e, g.state_coefficients(), cfg, ctx)?
                }
                (Some(k), None) => {
                    let states = self.gamow(param, *k)?;
                    Wavefunction::gamow(param, &states[k - 1], cfg, ctx)?
                }
                (None, None) => return Err(CliError::Usage("a Gamow state needs --index or --energy".into())),
            },
        };
        Ok(wf)
    }

    /// Samples in parallel; uncovered points are reported as one interval.
    pub fn sample(&self, wf: &Wavefunction, xs: &[f64]) -> Result<Vec<WavefunctionSample>, CliError> {
        let cfg = &self.cfg;
        let results: Vec<Result<WavefunctionSample, Error>> =
            self.pool.install(|| xs.par_iter().map_init(|| (wf.clone(), cfg.context()), |(w, ctx), &x| w.eval(x, ctx)).collect());
        let mut gap: Option<(f64, f64)> = None;
        let mut out = Vec::with_capacity(xs.len());
        for r in results {
            match r {
                Ok(s) => out.push(s),
                Err(Error::Coverage { from, to }) => {
                    gap = Some(match gap {
                        Some((a, b)) => (a.min(from), b.max(to)),
                        None => (from, to),
                    })
                }
                Err(e) => return Err(e.into()),
            }
        }
        if let Some((from, to)) = gap {
            return Err(Error::Coverage { from, to }.into());
        }
        Ok(out)
    }
}

/// Sorts by real then imaginary part, renumbers from 1, relinks conjugate
/// partners and keeps the first `count` (a pair split by the cut loses its link).
fn reindex(mut v: Vec<PtEigenvalue>, count: usize) -> Vec<PtEigenvalue> {
    v.sort_by(|a, b| {
        let (ar, ai) = pair(&a.value);
        let (br, bi) = pair(&b.value);
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    v.truncate(count);
    let vals: Vec<(f64, f64)> = v.iter().map(|e| pair(&e.value)).collect();
    for (k, e) in v.iter_mut().enumerate() {
        e.index = k + 1;
        e.partner = None;
        if e.kind == EigenKind::Pair {
            let (r, i) = vals[k];
            e.partner = vals
                .iter()
                .position(|&(pr, pi)| (pr - r).abs() < 1e-7 * r.abs().max(1.0) && (pi + i).abs() < 1e-7 * i.abs().max(1.0))
                .filter(|&j| j != k)
                .map(|j| j + 1);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-5.0, 15.0, 5).unwrap();
        assert_eq!(g, vec![-5.0, 0.0, 5.0, 10.0, 15.0]);
        assert!(linspace(1.0, 1.0, 4).is_err());
        assert!(linspace(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn scan_is_independent_of_worker_count() {
        let a = ExponentParam::new(3, 1).unwrap();
        let one = Runner::new(SolverConfig::with_precision(30), 1).unwrap();
        let two = Runner::new(SolverConfig::with_precision(30), 2).unwrap();
        let r1 = one.scan(&a, -1.0, 2.0, 13, false).unwrap();
        let r2 = two.scan(&a, -1.0, 2.0, 13, false).unwrap();
        assert_eq!(r1.table().to_bytes().unwrap(), r2.table().to_bytes().unwrap());
        assert!(r1.rows.iter().all(|r| r.unitarity_residual < 1e-20));
    }

    #[test]
    fn first_eigenvalues_are_indexed() {
        let a = ExponentParam::new(2, 1).unwrap();
        let r = Runner::new(SolverConfig::with_precision(30), 1).unwrap();
        let eig = r.first_eigenvalues(&a, 3).unwrap();
        assert_eq!(eig.iter().map(|e| e.index).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(eig[1].partner, Some(3));
        assert_eq!(eig[2].partner, Some(2));
        assert!((pair(&eig[0].value).0 - 1.2580917622).abs() < 1e-9);
    }
}

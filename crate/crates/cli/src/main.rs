use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use risewell::config::{config_path, resolve, ConfigFile};
use risewell::manifest::Recorder;
use risewell::output::{emit, json_bytes, with_extension, Format, Table};
use risewell::plot::{render, Plot};
use risewell::run::{linspace, GamowListRecord, Runner, SpectrumRecord, StateSpec};
use risewell::verify::{self, Level};
use risewell::{parse_exponent, CliError, EXIT_OK, EXIT_VERIFY};
use risewell_core::spectra::SeedRegion;
use risewell_core::wavefunction::Wavefunction;

#[derive(Parser, Debug)]
#[command(name = "risewell", version, about = "Scattering, PT spectra and Gamow states for V(x) = -sgn(x)|x|^a")]
struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// key=value configuration file (falls back to $RISEWELL_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for grids and samples.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write SVG plots next to the output file.
    #[arg(long, global = true)]
    plot: bool,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Phase shift and time delay on a real energy grid.
    Scan(ScanArgs),
    /// PT eigenvalues in a real window, with their Gamow energies.
    Spectrum(SpectrumArgs),
    /// The first Gamow energies, optionally with sampled wavefunctions.
    Gamow(GamowArgs),
    /// Samples one normalized state.
    Wavefunction(WavefunctionArgs),
    /// Runs the verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Exponent as p/q.
    #[arg(long)]
    a: String,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, default_value_t = 15.0, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Skip the time delay (one S evaluation per point instead of five).
    #[arg(long)]
    no_delay: bool,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    a: String,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.0, 16.0], allow_negative_numbers = true)]
    window: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    max_count: usize,
    /// Extra search rectangle for complex pairs far from the axis.
    #[arg(long, num_args = 4, value_names = ["RE0", "RE1", "IM0", "IM1"], action = clap::ArgAction::Append)]
    region: Vec<f64>,
}

#[derive(Args, Debug)]
struct SampleGrid {
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 161)]
    points: usize,
    /// Normalization window.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [-5.0, 5.0], allow_negative_numbers = true)]
    window: Vec<f64>,
}

#[derive(Args, Debug)]
struct GamowArgs {
    #[arg(long)]
    a: String,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Write one sampled wavefunction file per state.
    #[arg(long)]
    wavefunctions: bool,
    #[command(flatten)]
    grid: SampleGrid,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StateKind {
    Pt,
    Gamow,
    Scattering,
}

#[derive(Args, Debug)]
struct WavefunctionArgs {
    #[arg(long)]
    a: String,
    #[arg(long, value_enum)]
    state: StateKind,
    /// 1-based index of the PT eigenvalue (or of its rotated Gamow energy).
    #[arg(long)]
    index: Option<usize>,
    /// Energy (scattering) or seed `RE [IM]` (pt, gamow).
    #[arg(long, num_args = 1..=2, allow_negative_numbers = true)]
    energy: Vec<f64>,
    #[command(flatten)]
    grid: SampleGrid,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Level::Quick)]
    level: Level,
}

struct Session {
    runner: Runner,
    format: Format,
    plot: bool,
    out: Option<PathBuf>,
}

impl Session {
    fn recorder(&self, command: &str, params: serde_json::Value) -> Recorder {
        Recorder::new(command, params, (&self.runner.cfg).into(), self.runner.workers)
    }

    fn data_bytes<T: Serialize>(&self, record: &T, table: &Table) -> Result<Vec<u8>, CliError> {
        match self.format {
            Format::Csv => table.to_bytes(),
            Format::Json => json_bytes(record),
        }
    }

    /// Writes the primary output, plots and manifest.
    fn write(&self, rec: &mut Recorder, bytes: &[u8], plots: &[(&str, Plot)]) -> Result<(), CliError> {
        match &self.out {
            None => {
                if self.plot {
                    return Err(CliError::Usage("--plot needs --out".into()));
                }
                emit(None, bytes)
            }
            Some(out) => {
                emit(Some(out), bytes)?;
                rec.add_output(out);
                if self.plot {
                    for (suffix, p) in plots {
                        let path = with_extension(out, suffix, "svg");
                        emit(Some(&path), render(p).as_bytes())?;
                        rec.add_output(&path);
                    }
                }
                rec.finish(out)?;
                Ok(())
            }
        }
    }
}

fn regions(flat: &[f64]) -> Result<Vec<SeedRegion>, CliError> {
    flat.chunks(4).map(|c| SeedRegion::new((c[0], c[1]), (c[2], c[3])).map_err(|e| CliError::Usage(e.to_string()))).collect()
}

fn window(v: &[f64]) -> Result<(f64, f64), CliError> {
    match v {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        _ => Err(CliError::Usage(format!("window must be LO HI with LO < HI, got {v:?}"))),
    }
}

fn scan(s: &Session, args: &ScanArgs) -> Result<(), CliError> {
    let a = parse_exponent(&args.a)?;
    let rec = s.runner.scan(&a, args.from, args.to, args.points, !args.no_delay)?;
    let mut m = s.recorder("scan", json!({"a": args.a, "from": args.from, "to": args.to, "points": args.points, "delay": !args.no_delay}));
    let bytes = s.data_bytes(&rec, &rec.table())?;
    s.write(&mut m, &bytes, &rec.plots())
}

fn spectrum(s: &Session, args: &SpectrumArgs) -> Result<(), CliError> {
    let a = parse_exponent(&args.a)?;
    let (lo, hi) = window(&args.window)?;
    let regions = regions(&args.region)?;
    let (eig, gamow) = s.runner.spectrum(&a, lo, hi, args.max_count, &regions)?;
    let rec = SpectrumRecord::new(&a, &s.runner.cfg, &eig, &gamow);
    let mut m = s.recorder("spectrum", json!({"a": args.a, "window": [lo, hi], "max_count": args.max_count, "regions": args.region}));
    let bytes = s.data_bytes(&rec, &rec.table())?;
    s.write(&mut m, &bytes, &[("", rec.plot())])
}

fn gamow(s: &Session, args: &GamowArgs) -> Result<(), CliError> {
    let a = parse_exponent(&args.a)?;
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let states = s.runner.gamow(&a, args.count)?;
    let rec = GamowListRecord::new(&a, &s.runner.cfg, &states);
    let mut m = s.recorder(
        "gamow",
        json!({"a": args.a, "count": args.count, "wavefunctions": args.wavefunctions, "from": args.grid.from, "to": args.grid.to, "points": args.grid.points, "window": args.grid.window}),
    );
    if args.wavefunctions {
        let Some(out) = &s.out else {
            return Err(CliError::Usage("--wavefunctions needs --out".into()));
        };
        let xs = linspace(args.grid.from, args.grid.to, args.grid.points)?;
        let win = window(&args.grid.window)?;
        let ctx = s.runner.ctx();
        for (k, g) in states.iter().enumerate() {
            let mut wf = Wavefunction::gamow(&a, g, &s.runner.cfg, &ctx)?;
            wf.normalize(win.0, win.1, 1e-8, &ctx)?;
            let samples = s.runner.sample(&wf, &xs)?;
            let state = risewell::run::WavefunctionRecord::from_samples(&a, &s.runner.cfg, "gamow", &wf, win, &samples);
            let path = with_extension(out, &format!(".state{}", k + 1), s.format.extension());
            emit(Some(&path), &s.data_bytes(&state, &state.table())?)?;
            m.add_output(&path);
            if s.plot {
                let svg = with_extension(out, &format!(".state{}", k + 1), "svg");
                emit(Some(&svg), render(&state.plot()).as_bytes())?;
                m.add_output(&svg);
            }
        }
    }
    let bytes = s.data_bytes(&rec, &rec.table())?;
    s.write(&mut m, &bytes, &[])
}

fn wavefunction(s: &Session, args: &WavefunctionArgs) -> Result<(), CliError> {
    let a = parse_exponent(&args.a)?;
    let near = match args.energy.as_slice() {
        [] => None,
        [re] => Some((*re, 0.0)),
        [re, im] => Some((*re, *im)),
        _ => unreachable!("clap limits --energy to two values"),
    };
    let spec = match args.state {
        StateKind::Pt => StateSpec::Pt { index: args.index, near },
        StateKind::Gamow => StateSpec::Gamow { index: args.index, near },
        StateKind::Scattering => match near {
            Some((e, im)) if im == 0.0 => StateSpec::Scattering { energy: e },
            _ => return Err(CliError::Usage("a scattering state needs one real --energy".into())),
        },
    };
    if args.index == Some(0) {
        return Err(CliError::Usage("--index is 1-based".into()));
    }
    let xs = linspace(args.grid.from, args.grid.to, args.grid.points)?;
    let win = window(&args.grid.window)?;
    let rec = s.runner.wavefunction(&a, &spec, &xs, win)?;
    let mut m = s.recorder(
        "wavefunction",
        json!({"a": args.a, "state": rec.state, "index": args.index, "energy": args.energy, "from": args.grid.from, "to": args.grid.to, "points": args.grid.points, "window": [win.0, win.1]}),
    );
    let bytes = s.data_bytes(&rec, &rec.table())?;
    s.write(&mut m, &bytes, &[("", rec.plot())])
}

fn verify_cmd(s: &Session, args: &VerifyArgs) -> Result<(), CliError> {
    let report = verify::run(&s.runner, args.level);
    eprint!("{}", report.summary());
    let mut m = s.recorder("verify", json!({"level": args.level}));
    s.write(&mut m, &json_bytes(&report)?, &[])?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
        Err(CliError::Verification(failed.join(", ")))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = config_path(cli.config.as_deref()).map(|p| ConfigFile::read(Path::new(&p))).transpose()?;
    let cfg = resolve(file.as_ref(), cli.precision)?;
    let workers = cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let s = Session { runner: Runner::new(cfg, workers)?, format: cli.format, plot: cli.plot, out: cli.out };
    match &cli.command {
        Command::Scan(a) => scan(&s, a),
        Command::Spectrum(a) => spectrum(&s, a),
        Command::Gamow(a) => gamow(&s, a),
        Command::Wavefunction(a) => wavefunction(&s, a),
        Command::Verify(a) => verify_cmd(&s, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            debug_assert!(code != EXIT_OK);
            if code == EXIT_VERIFY {
                eprintln!("see the report above for details");
            }
            ExitCode::from(code)
        }
    }
}

//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
//!
//! Tolerances are pinned here and compared against the ones the suite
//! reports, so loosening a suite constant fails this target.

use std::process::ExitCode;

use risewell::run::Runner;
use risewell::verify::{self, Check};
use risewell_core::exponent::SolverConfig;

// (criterion, tolerance); composite criteria report worst error / own tolerance against 1
const PINNED: [(u32, f64); 12] = [
    (1, 1e-8),
    (2, 1e-8),
    (3, 1e-10),
    (4, 1e-10),
    (5, 1.0),
    (6, 1e-6),
    (7, 5e-6),
    (8, 1e-8),
    (9, 0.2),
    (10, 3.0),
    (11, 0.0),
    (12, 1.0),
];

fn pinned_constants() -> Vec<String> {
    let mut bad = Vec::new();
    let mut pin = |name: &str, got: f64, want: f64| {
        if got != want {
            bad.push(format!("{name} = {got:e}, pinned {want:e}"));
        }
    };
    pin("table real", verify::TOL_TABLE_REAL, 1e-8);
    pin("table pair", verify::TOL_TABLE_PAIR, 1e-6);
    pin("handoff", verify::TOL_HANDOFF, 1e-6);
    pin("flux", verify::TOL_FLUX, 1e-10);
    pin("functional equation", verify::TOL_FUNCTIONAL, 1e-20);
    // resonance location: ground-state eigenvalue of H_7 rotated by pi/9
    let derived = 1.2247116893 * (std::f64::consts::PI / 9.0).cos();
    if (verify::resonance_target_a7() - derived).abs() > 1e-12 || (derived - 1.1509).abs() > 5e-5 {
        bad.push(format!("resonance target {} vs derived {derived}", verify::resonance_target_a7()));
    }
    bad
}

fn line(n: u32, c: &Check) -> bool {
    let (_, tol) = PINNED[(n - 1) as usize];
    let within = if tol == 0.0 { c.measured == 0.0 } else { c.measured < tol };
    let ok = c.passed && c.tolerance == tol && within;
    println!(
        "criterion {n:>2} {}  {}: measured {:.3e} (tolerance {:.1e}) in {:.1}s; {}",
        if ok { "PASS" } else { "FAIL" },
        c.name,
        c.measured,
        tol,
        c.seconds,
        c.detail
    );
    ok
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters: this target has a single entry
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let runner = Runner::new(SolverConfig::default(), 1).expect("thread pool");
    let mut failures = 0;
    let bad = pinned_constants();
    for b in &bad {
        println!("pinned constant mismatch: {b}");
    }
    failures += bad.len();
    let first = verify::engine_criteria(&runner);
    for (n, c) in (1..=4).zip(&first) {
        failures += usize::from(!line(n, c));
    }
    for n in 5..=12 {
        let c = verify::criterion(&runner, n).expect("criterion id");
        failures += usize::from(!line(n, &c));
    }
    if failures == 0 {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} failure(s)");
        ExitCode::FAILURE
    }
}

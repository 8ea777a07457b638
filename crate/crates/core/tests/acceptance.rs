//! The acceptance criteria, one line each. Run with
//! `cargo test -p tatetorsor --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tatetorsor::exactlin::Field;
use tatetorsor::verify::{self, SuiteReport};

const SEED: u64 = 20_240_601;

struct Criterion {
    id: u32,
    title: &'static str,
    limit_secs: u64,
    run: fn() -> SuiteReport,
}

fn f(p: u64) -> Field {
    Field::prime(p).unwrap()
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "lattice index", limit_secs: 5, run: || verify::index_suite(500, SEED) },
    Criterion {
        id: 2,
        title: "index cocycle and modular law",
        limit_secs: 30,
        run: || {
            let mut r = verify::cocycle_suite(f(2), 1000, SEED);
            let r5 = verify::cocycle_suite(f(5), 1000, SEED + 1);
            r.trials += r5.trials;
            r.failure_count += r5.failure_count;
            r.failures.extend(r5.failures);
            r
        },
    },
    Criterion {
        id: 3,
        title: "lift/project exactness and mu associativity",
        limit_secs: 60,
        run: || verify::mu_suite(1000, SEED),
    },
    Criterion { id: 4, title: "image factorizations", limit_secs: 10, run: || verify::aic_suite(f(2), 3) },
    Criterion { id: 5, title: "grid completion", limit_secs: 10, run: || verify::grid_suite(f(2), 3) },
    Criterion { id: 6, title: "determinant symmetry", limit_secs: 20, run: || verify::det_symmetry_suite(200, SEED).0 },
    Criterion { id: 7, title: "cohomology oracle", limit_secs: 2, run: verify::cohomology_suite },
    Criterion { id: 8, title: "torsor classification", limit_secs: 60, run: verify::classify_suite },
    Criterion { id: 9, title: "pasting identity", limit_secs: 5, run: verify::pasting_suite },
    Criterion { id: 10, title: "S-construction", limit_secs: 120, run: || verify::swald_suite(SEED) },
    Criterion { id: 11, title: "gerbe to torsor", limit_secs: 10, run: || verify::gerbe_suite(SEED) },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let report = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(c.limit_secs);
        let ok = report.passed() && in_time;
        println!(
            "{} criterion {:>2} {:<45} {:>6} checks {:>8.3}s (limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            report.trials,
            elapsed.as_secs_f64(),
            c.limit_secs
        );
        if !in_time {
            println!("    over the time limit");
        }
        for w in &report.failures {
            println!("    {}", w.replace('\n', "\n    "));
        }
        failed += usize::from(!ok);
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

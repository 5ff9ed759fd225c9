//! Acceptance gate: one line per criterion, nonzero exit on any blocking
//! failure. `ACCEPTANCE_STRICT=1` makes the known failures blocking too.

use std::time::Instant;

use timeflat::acceptance::{self, CriterionOutcome, DEFAULT_GRID};

fn main() {
    // cargo passes name filters through; run only when unfiltered or asked for.
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filters.is_empty() && !filters.iter().any(|f| "acceptance criterion".contains(f.as_str())) {
        return;
    }
    let g = DEFAULT_GRID;
    let criteria: Vec<(u8, Box<dyn Fn() -> CriterionOutcome>)> = vec![
        (1, Box::new(move || acceptance::criterion_1(g))),
        (2, Box::new(move || acceptance::criterion_2(g))),
        (3, Box::new(move || acceptance::criterion_3(g))),
        (4, Box::new(move || acceptance::criterion_4(g))),
        (5, Box::new(move || acceptance::criterion_5(g))),
        (6, Box::new(move || acceptance::criterion_6(g))),
        (7, Box::new(move || acceptance::criterion_7(g))),
        (8, Box::new(move || acceptance::criterion_8(g))),
        (9, Box::new(move || acceptance::criterion_9(g))),
        (10, Box::new(move || acceptance::criterion_10(g))),
        (11, Box::new(acceptance::criterion_11)),
        (12, Box::new(acceptance::criterion_12)),
    ];
    let only: Option<u8> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let verbose = std::env::var_os("ACCEPTANCE_VERBOSE").is_some();
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut failed = 0;
    for (id, f) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let t = Instant::now();
        let out = f();
        println!("{} ({:.1}s)", out.line(), t.elapsed().as_secs_f64());
        if verbose || !out.passed {
            for m in out.metrics.iter().filter(|m| verbose || !m.ok()) {
                println!("    {}: {:.3e} (bound {:.1e})", m.name, m.value, m.bound);
            }
            for n in &out.notes {
                println!("    note: {n}");
            }
        }
        if acceptance::is_blocking(&out, strict) {
            failed += 1;
        } else if !out.passed {
            println!("    known failure, not blocking (set ACCEPTANCE_STRICT=1 to block)");
        }
    }
    if failed > 0 {
        println!("{failed} blocking criteria failed");
        std::process::exit(1);
    }
}

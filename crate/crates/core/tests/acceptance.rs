//! Acceptance suite: every criterion at its stated tolerance and time budget,
//! one PASS/FAIL line each.

use std::time::{Duration, Instant};

use qscd::selftest::{run_all, CHECKS};

const SEED: u64 = 20240611;

fn budget(id: u8) -> Option<Duration> {
    match id {
        1 | 2 => Some(Duration::from_secs(30)),
        4 => Some(Duration::from_secs(5)),
        5 => Some(Duration::from_secs(300)),
        7 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    for (id, name, check) in CHECKS {
        let start = Instant::now();
        let outcome = check(SEED);
        let elapsed = start.elapsed();
        let in_time = budget(id).is_none_or(|b| elapsed <= b);
        let line = match outcome {
            Ok(r) => {
                let ok = r.passed && in_time;
                if !ok {
                    failures.push(id);
                }
                format!(
                    "criterion {id} {name}: {} {} elapsed={:.2}s",
                    if ok { "PASS" } else { "FAIL" },
                    r.detail,
                    elapsed.as_secs_f64()
                )
            }
            Err(e) => {
                failures.push(id);
                format!("criterion {id} {name}: FAIL error={e}")
            }
        };
        println!("{line}");
    }

    let first = run_all(SEED).map(|r| r.to_text());
    let second = run_all(SEED).map(|r| r.to_text());
    let same = matches!((&first, &second), (Ok(a), Ok(b)) if a == b);
    println!(
        "criterion 10 determinism: {} bytes={}",
        if same { "PASS" } else { "FAIL" },
        first.as_ref().map_or(0, String::len)
    );
    if !same {
        failures.push(10);
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

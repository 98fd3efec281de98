//! Shared pieces of the acceptance suite in `tests/acceptance.rs`.

use std::io::Write;
use std::sync::{Mutex, MutexGuard};
use std::time::Duration;

static LOCK: Mutex<()> = Mutex::new(());

/// Serializes timed checks so that their runtimes are not distorted by
/// concurrent tests.
pub fn lock() -> MutexGuard<'static, ()> {
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

/// Prints one `PASS`/`FAIL` line for a criterion and returns whether it
/// passed, counting a runtime above `budget_s` as a failure.
///
/// The line goes straight to the stderr handle so that it also appears when
/// the test harness captures output.
pub fn verdict(id: u32, title: &str, ok: bool, detail: &str, elapsed: Duration, budget_s: f64) -> bool {
    let secs = elapsed.as_secs_f64();
    let in_time = secs <= budget_s;
    let pass = ok && in_time;
    let _ = writeln!(
        std::io::stderr(),
        "{} criterion {id} ({title}): {detail}; runtime {secs:.1}s / {budget_s:.0}s{}",
        if pass { "PASS" } else { "FAIL" },
        if in_time { "" } else { " (over budget)" }
    );
    pass
}

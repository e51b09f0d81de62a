//! Acceptance gate: runs every top-level criterion at full scale and prints
//! one pass/fail line per criterion.
//!
//! Criteria listed in `verify::KNOWN_RED` are expected to fail for
//! documented mathematical reasons (see the module docs in `verify`); they
//! are printed red but do not fail the gate. Any other failure exits
//! nonzero.

use pitlab_core::verify::{run_suite, Scale, KNOWN_RED};

fn main() {
    let scale = match std::env::var("ACCEPTANCE_SCALE").as_deref() {
        Ok("quick") => Scale::Quick,
        _ => Scale::Full,
    };
    let outcomes = run_suite(scale);
    let mut unexpected = Vec::new();
    for o in &outcomes {
        println!("{}", o.line());
        if !o.pass && !KNOWN_RED.contains(&o.id) {
            unexpected.push(o.id);
        }
        if KNOWN_RED.contains(&o.id) && o.detail.starts_with("error:") {
            // A known-red criterion must fail on its measured quantity, not
            // by crashing.
            unexpected.push(o.id);
        }
    }
    let red = outcomes.iter().filter(|o| !o.pass).count();
    println!(
        "acceptance: {}/{} criteria green ({} known red)",
        outcomes.len() - red,
        outcomes.len(),
        KNOWN_RED.len()
    );
    if !unexpected.is_empty() {
        println!("acceptance: unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

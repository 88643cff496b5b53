//! Release gate: runs every verification criterion at its pinned tolerance
//! and prints one line per criterion. Run with `--nocapture` to see the
//! lines for passing criteria too.

use holonomy::acceptance;

const SUITE_SEED: u64 = 0x5eed_0001;

#[test]
fn acceptance_suite() {
    let outcomes = acceptance::run_all(SUITE_SEED);
    let mut all_passed = true;
    for o in &outcomes {
        println!("{}", o.line());
        all_passed &= o.passed;
    }
    assert!(all_passed, "one or more criteria failed; see lines above");
}

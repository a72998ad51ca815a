//! Run the verification suite on a couple of cells and print the report,
//! then the order complex experiment on a cell small enough to expand.
//!
//! Run with `cargo run --example verification` (a few seconds).

use reflpark::group::Family;
use reflpark::group::GroupContext;
use reflpark::verify::{euler_experiment, run_suite};

fn main() -> reflpark::Result<()> {
    let grid = [(Family::D1N, 3, 2), (Family::DDN, 3, 2)];
    let report = run_suite(&grid, 2)?;
    print!("{}", report.to_text());

    let ctx = GroupContext::new(Family::DDN, 3, 2)?;
    let e = euler_experiment(&ctx)?;
    println!(
        "\norder complex of G(3,3,2): park={} chi={} target=(h-1)^r={}",
        e.park, e.chi, e.target
    );
    Ok(())
}

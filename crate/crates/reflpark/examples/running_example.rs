//! The G(3,1,6) running example: start from the vector of formal roots of
//! unity, invert it to a parking function, inspect the labeled circular
//! model, and map it forward again.
//!
//! Run with `cargo run --example running_example`.

use reflpark::bijection::{from_vector, to_vector, ParkVector};
use reflpark::group::{Family, GroupContext};

fn main() -> reflpark::Result<()> {
    let ctx = GroupContext::new(Family::D1N, 3, 6)?;
    let v = ParkVector::parse(3, 6, 6, "2:1,1:3,2:2,Z,1:3,1:3")?;
    println!("vector        {}", v.to_text());

    let pf = from_vector(&ctx, &v)?;
    println!("parking fn    {}", pf.to_text(&ctx)?);

    println!("blocks and labels:");
    for (block, label) in pf.labels(&ctx)? {
        let fmt = |pts: &[reflpark::group::Point]| {
            pts.iter()
                .map(|&(a, b)| format!("{}.{}", a + 1, b + 1))
                .collect::<Vec<_>>()
                .join(",")
        };
        println!("  {{{}}}  <-  {{{}}}", fmt(&block), fmt(&label));
    }

    let back = to_vector(&ctx, &pf)?;
    println!("round trip    {}", back.to_text());
    assert_eq!(back, v);
    Ok(())
}

//! First stop: build a group, look at its numerology, and walk the
//! noncrossing partition lattice element by element.
//!
//! Run with `cargo run --example tour`.

use reflpark::absolute::{length, nc_interval};
use reflpark::group::{Family, GroupContext};
use reflpark::model::orbit_partition;
use reflpark::verify::catalan;

fn main() -> reflpark::Result<()> {
    let ctx = GroupContext::new(Family::D1N, 3, 2)?;
    println!("G(3,1,2): order {}, degrees {:?}, h = {}", ctx.order, ctx.degrees, ctx.h);
    println!("reflections: {}", ctx.reflections().len());
    println!("Coxeter element c = {}", ctx.coxeter_element());
    println!();

    println!("the {} elements of NC(W,c):", catalan(&ctx));
    for &id in nc_interval(&ctx)? {
        let w = ctx.element(id);
        println!(
            "  length {}  {:<12}  {}",
            length(&ctx, w)?,
            w.to_string(),
            orbit_partition(&ctx, w)?.to_text()
        );
    }
    Ok(())
}

//! Equivariance in action: the group acts on parking functions by
//! translation and the cyclic group by rotation, and the vector maps
//! intertwine both with coordinate operations.
//!
//! Run with `cargo run --example actions`.

use reflpark::bijection::{to_vector, vector_act_c, vector_act_w};
use reflpark::group::{Family, GroupContext};
use reflpark::parking::{act_c, act_w, enumerate_park, orbit_decomposition};

fn main() -> reflpark::Result<()> {
    let ctx = GroupContext::new(Family::DDN, 3, 2)?;
    let parks = enumerate_park(&ctx)?;
    println!("G(3,3,2): {} parking functions", parks.len());

    let pf = &parks[7];
    let v = to_vector(&ctx, pf)?;
    println!("\npf      {}", pf.to_text(&ctx)?);
    println!("vector  {}", v.to_text());

    // one step of the cyclic action matches one rotation of the vector
    let rotated = act_c(&ctx, 1, pf)?;
    println!("c.pf    {}", to_vector(&ctx, &rotated)?.to_text());
    assert_eq!(to_vector(&ctx, &rotated)?, vector_act_c(&v, 1));

    // translating by any group element permutes coordinates and colors
    let u = ctx.reflections()[0].clone();
    let translated = act_w(&ctx, &u, pf)?;
    assert_eq!(to_vector(&ctx, &translated)?, vector_act_w(&u, &v)?);
    println!("u.pf    {}  (u = {u})", to_vector(&ctx, &translated)?.to_text());

    let orbit_count = orbit_decomposition(&ctx)?.len();
    println!("\nW-orbits: {orbit_count} (one per noncrossing partition)");
    Ok(())
}

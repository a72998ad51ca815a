//! Fuss generalization in G(d,1,n): multichains in NC(W,c), the chained
//! parking functions they carry, and the k-divisible circle model behind
//! the vector map.
//!
//! Run with `cargo run --example chains`.

use reflpark::fuss::{
    boundary, enumerate_fuss_park, enumerate_multichains, fuss_to_vector, integrate, nabla_labeled,
};
use reflpark::group::{Family, GroupContext};
use reflpark::verify::{fuss_catalan, park_count_formula};

fn main() -> reflpark::Result<()> {
    let ctx = GroupContext::new(Family::D1N, 3, 2)?;
    let k = 2;

    let chains = enumerate_multichains(&ctx, k)?;
    println!("multichains of length {k}: {} (Fuss-Catalan {})", chains.len(), fuss_catalan(&ctx, k));

    let parks = enumerate_fuss_park(&ctx, k)?;
    println!(
        "chained parking functions: {} (formula {})",
        parks.len(),
        park_count_formula(&ctx, k)
    );

    // boundary and integrate are mutually inverse between chains and
    // length-additive factorizations of c
    let chain = &chains[chains.len() / 2];
    let f = boundary(&ctx, chain)?;
    println!(
        "\nchain {}  has boundary [{}]",
        chain.to_text(&ctx),
        f.parts.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
    );
    assert_eq!(&integrate(&ctx, &f)?, chain);

    let fpf = &parks[100];
    let model = nabla_labeled(&ctx, fpf)?;
    println!("\nchained parking fn  {}", fpf.to_text(&ctx));
    println!("k-divisible model   {}", model.to_text());
    println!("vector              {}", fuss_to_vector(&ctx, fpf)?.to_text());
    Ok(())
}

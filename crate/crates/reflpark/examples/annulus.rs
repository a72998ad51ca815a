//! The annular model for G(d,d,n): chains draw pictures on an annulus, and
//! three golden G(3,3,3) examples at k = 3 show the three shapes a
//! model can take (only annular blocks, outer with free inner arcs, and a
//! zero block).
//!
//! Run with `cargo run --example annulus`.

use reflpark::bijection::ParkVector;
use reflpark::fuss::{annular_labeled, fuss_from_vector, phi_exists, validate_annular};
use reflpark::group::{Family, GroupContext};

fn main() -> reflpark::Result<()> {
    let ctx = GroupContext::new(Family::DDN, 3, 3)?;
    let k = 3;

    for text in ["5:3,1:3,1:3", "Z,1:3,3:3", "Z,Z,3:3"] {
        let v = ParkVector::parse(ctx.d, k * (ctx.n - 1), ctx.n, text)?;
        let fpf = fuss_from_vector(&ctx, k, &v)?;
        let model = annular_labeled(&ctx, &fpf)?;
        let ap = &model.partition;

        println!("vector {text}");
        println!("  chain  {}", fpf.chain.to_text(&ctx));
        println!("  model  {}", model.to_text());
        println!(
            "  blocks {}, zero block present: {}, labeling admissible: {}",
            ap.blocks().len(),
            ap.zero_block().is_some(),
            phi_exists(&model)
        );
        assert!(validate_annular(&ctx, ap));
        println!();
    }
    Ok(())
}

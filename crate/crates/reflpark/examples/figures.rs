//! Draw the pictures: the labeled G(3,1,6) circle and a G(3,3,3) annulus,
//! written as SVG files next to the target directory.
//!
//! Run with `cargo run --example figures`.

use reflpark::bijection::{from_vector, ParkVector};
use reflpark::fuss::{annular_labeled, fuss_from_vector};
use reflpark::group::{Family, GroupContext};
use reflpark::render::{svg_annulus, svg_circle, RenderSpec};

fn main() -> reflpark::Result<()> {
    let spec = RenderSpec::default();
    let dir = std::path::Path::new("target/figures");
    std::fs::create_dir_all(dir).expect("create target/figures");

    let ctx = GroupContext::new(Family::D1N, 3, 6)?;
    let v = ParkVector::parse(3, 6, 6, "2:1,1:3,2:2,Z,1:3,1:3")?;
    let pf = from_vector(&ctx, &v)?;
    let svg = svg_circle(&ctx, &pf, &spec)?;
    std::fs::write(dir.join("circle.svg"), &svg).expect("write circle.svg");

    let ctx = GroupContext::new(Family::DDN, 3, 3)?;
    let v = ParkVector::parse(3, 6, 3, "5:3,1:3,1:3")?;
    let fpf = fuss_from_vector(&ctx, 3, &v)?;
    let svg = svg_annulus(&ctx, 3, &annular_labeled(&ctx, &fpf)?, &spec)?;
    std::fs::write(dir.join("annulus.svg"), &svg).expect("write annulus.svg");

    println!("wrote target/figures/circle.svg and target/figures/annulus.svg");
    Ok(())
}

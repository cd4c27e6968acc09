//! Singular fibers of a few Weierstrass models over P^1, with verified witnesses.

use elldensity::density::singular_scan;
use elldensity::gf::make_field;
use elldensity::weier::WeierstrassData;

fn main() -> elldensity::Result<()> {
    let f7 = make_field(7, 1)?;
    let node = WeierstrassData::constant(f7.clone(), 1, -3, 2)?;
    let smooth = WeierstrassData::constant(f7.clone(), 1, 1, 1)?;
    let random = WeierstrassData::random(&f7, 1, 1, 42);
    for (name, w) in [
        ("node", &node),
        ("y^2 = x^3 + x + 1", &smooth),
        ("random, k = 1", &random),
    ] {
        let wits = singular_scan(w, 2)?;
        println!(
            "{name}: discriminant zero = {}, {} singular fibers",
            w.discriminant_vanishes(),
            wits.len()
        );
        for wit in wits.iter().take(4) {
            println!(
                "  over {:?} (degree {}): (x, y) = ({}, {})",
                wit.point.coords_raw(),
                wit.point.degree(),
                wit.x.value(),
                wit.y.value()
            );
        }
    }
    Ok(())
}

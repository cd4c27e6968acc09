//! Closed points of P^2 over F_2 by degree, checked against the point counts of P^2.

use elldensity::base::{closed_points_of_degree, rational_point_count};
use elldensity::gf::make_field;
use elldensity::zeta::ZetaTable;

fn main() -> elldensity::Result<()> {
    let base = make_field(2, 1)?;
    let table = ZetaTable::new(2, 2, 4)?;
    for e in 1..=4 {
        let pts = closed_points_of_degree(&base, 2, e)?;
        println!(
            "degree {e}: {} closed points (Moebius count {}), #P^2(F_2^{e}) = {}",
            pts.len(),
            table.a(e),
            rational_point_count(2, 2, e)
        );
        if let Some(pt) = pts.first() {
            println!(
                "  e.g. {:?} over F_{} (chart x{})",
                pt.coords_raw(),
                pt.residue().order(),
                pt.chart()
            );
        }
    }
    Ok(())
}

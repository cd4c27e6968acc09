//! Bounded minimality test: (0, x0^6) is not minimal, a coprime pair is.

use elldensity::gf::make_field;
use elldensity::sections::Section;
use elldensity::weier::{coprime_short_form, WeierstrassData};

fn main() -> elldensity::Result<()> {
    let f5 = make_field(5, 1)?;
    let z = |d| Section::zero(f5.clone(), 2, d);
    let b = Section::monomial(f5.clone(), vec![6, 0, 0], f5.one())?;
    let w = WeierstrassData::new(1, [z(1), z(2), z(3), z(4), b])?;
    match w.minimality_witness(1)? {
        Some(u) => println!("not minimal: u = {u:?}"),
        None => println!("minimal"),
    }
    let c = coprime_short_form(&f5, 2, 1, 7)?;
    println!("coprime data minimal: {}", c.is_minimal(1)?);
    println!("{}", c.to_json());
    Ok(())
}

//! Exhaustive count of jet tuples giving a singular fiber, in each characteristic class.

use elldensity::density::{jet_census_with, CensusMethod, DEFAULT_ENUMERATION_CAP};

fn main() -> elldensity::Result<()> {
    println!("{}", elldensity::density::JetCensus::csv_header());
    for (p, m, e) in [
        (5, 1, 1),
        (5, 2, 1),
        (3, 1, 1),
        (3, 2, 1),
        (2, 1, 1),
        (2, 2, 1),
        (2, 1, 2),
    ] {
        let c = jet_census_with(
            p,
            p,
            m,
            e,
            CensusMethod::CrossCheck,
            DEFAULT_ENUMERATION_CAP,
        )?;
        println!("{}", c.csv_row());
    }
    Ok(())
}

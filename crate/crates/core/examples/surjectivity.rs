//! Rank of the jet map on P^1 over F_5: at single points, and jointly at all points of
//! degree 1, where small k cannot reach every combination of jets.

use elldensity::base::{closed_points_of_degree, joint_jet_space_map};
use elldensity::density::surjectivity_check;
use elldensity::gf::make_field;
use elldensity::weier::CharClass;

fn main() -> elldensity::Result<()> {
    for e in 1..=2 {
        for k in [1, 2, 12 * e] {
            let s = surjectivity_check(5, 5, 1, k, e)?;
            println!(
                "e={e} k={k:2}: rank {:2} / {:2} over {} points (domain {}), threshold {}",
                s.rank, s.codomain_dim, s.points_checked, s.domain_dim, s.within_threshold
            );
        }
    }
    let base = make_field(5, 1)?;
    let pts = closed_points_of_degree(&base, 1, 1)?;
    for k in 1..=4 {
        let map = joint_jet_space_map(&CharClass::Large.degrees(k), &pts)?;
        println!(
            "all {} rational points, k={k}: rank {} / {}",
            pts.len(),
            map.matrix.rank(),
            map.codomain_dim
        );
    }
    Ok(())
}

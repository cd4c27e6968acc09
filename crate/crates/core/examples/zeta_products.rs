//! Truncated Euler products for 1/zeta of P^2 over F_2 at s = 3 approaching 21/64.

use elldensity::zeta::{partial_products, tail_bound, zeta_inverse_exact_pm, ZetaTable};

fn main() -> elldensity::Result<()> {
    let (m, q, s, r) = (2, 2, 3, 16);
    let table = ZetaTable::new(m, q, r)?;
    let limit = zeta_inverse_exact_pm(m, q, s)?;
    println!("limit {limit}");
    for (e, v) in partial_products(&table, s, r)?.iter().enumerate().skip(1) {
        let kind = if v.is_exact() { "exact" } else { "enclosure" };
        println!(
            "r = {e:2}  a_r = {:>10}  {:<32} {kind}, tail bound {:.2e}",
            table.a(e as u32).to_string(),
            v.decimal_string(),
            tail_bound(m, q, s, e as u32)?
        );
    }
    Ok(())
}

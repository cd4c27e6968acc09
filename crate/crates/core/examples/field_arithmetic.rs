//! Arithmetic in F_9 and F_16, Frobenius, and an embedding F_4 -> F_16.

use elldensity::gf::{make_field, Embedding};

fn main() -> elldensity::Result<()> {
    let f9 = make_field(3, 2)?;
    println!("F_9 modulus (low to high): {:?}", f9.modulus());
    let g = f9.generator();
    for i in 0..8u128 {
        let x = f9.pow(g, i)?;
        println!(
            "g^{i} = {:?}  frobenius -> {:?}",
            f9.coeffs(x),
            f9.coeffs(f9.frobenius(x, 3)?)
        );
    }

    let f4 = make_field(2, 2)?;
    let f16 = make_field(2, 4)?;
    let emb = Embedding::new(f4.clone(), f16.clone())?;
    let a = f4.generator();
    let b = emb.embed(a)?;
    // the image is fixed by x -> x^4 and satisfies the same minimal polynomial
    assert_eq!(f16.frobenius(b, 4)?, b);
    let lhs = f16.add(f16.mul(b, b)?, b)?;
    println!(
        "F_4 generator maps to {:?} in F_16; b^2 + b = {:?}",
        f16.coeffs(b),
        f16.coeffs(lhs)
    );
    Ok(())
}

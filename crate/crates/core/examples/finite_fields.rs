//! Field arithmetic and root finding: splits `T^6 + T + 1` over `F_{2^k}`
//! and takes `q`-th roots.
//!
//! ```text
//! cargo run --example finite_fields
//! ```

use raynaud::ff::{make_field, roots_in_field, FieldElem, Poly};

fn main() -> raynaud::Result<()> {
    for k in 1..=6 {
        let f = make_field(2, k)?;
        let mut c = vec![FieldElem::ZERO; 7];
        c[0] = f.one();
        c[1] = f.one();
        c[6] = f.one();
        let roots = roots_in_field(&f, &Poly::from_coeffs(c))?;
        println!("{:<28} T^6+T+1 has {} roots", f.describe(), roots.len());
    }

    let f = make_field(3, 4)?;
    let a = f.generator();
    let w = f.qth_root(a, 9)?;
    println!(
        "in {}: w = {:?}, w^9 = {:?}",
        f.describe(),
        f.to_coeffs(w),
        f.to_coeffs(f.pow(w, 9))
    );
    Ok(())
}

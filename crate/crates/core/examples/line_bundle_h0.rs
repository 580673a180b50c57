//! `h0` and `h1` of `O(d inf)` next to the Riemann-Roch prediction, then the
//! effect of a pole or zero at a fiber point.
//!
//! ```text
//! cargo run --release --example line_bundle_h0 -- 2 1 3
//! ```

use raynaud::bundle::make_line_bundle;
use raynaud::cohomology::{h0_dim, h1_dim};
use raynaud::curve::{curve_init, sample_points, DivisorRec};

fn main() -> raynaud::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let (p, n, e) = match args.as_slice() {
        [p, n, e] => (*p, *n as u32, *e),
        _ => (2, 1, 3),
    };
    let ctx = curve_init(p, n, e)?;
    let g = ctx.genus;
    println!("{} genus {g}", ctx.params);
    println!("{:>5} {:>5} {:>5} {:>8}", "d", "h0", "h1", "d+1-g");
    for d in (-2..=2 * g).step_by(ctx.q() as usize) {
        let b = make_line_bundle(&ctx, DivisorRec::at_infinity(d))?;
        println!(
            "{d:>5} {:>5} {:>5} {:>8}",
            h0_dim(&ctx, &b)?,
            h1_dim(&ctx, &b)?,
            d + 1 - g
        );
    }
    let q = sample_points(&ctx, 1, 8)?.remove(0);
    let d = 2 * g - 2;
    for (label, mult) in [("+Q", 1), ("-Q", -1)] {
        let b = make_line_bundle(&ctx, DivisorRec::at_infinity(d).with_point(q.clone(), mult))?;
        println!(
            "O({d} inf {label}): h0 {} h1 {}",
            h0_dim(&ctx, &b)?,
            h1_dim(&ctx, &b)?
        );
    }
    println!("Q = {}", q.describe());
    Ok(())
}

//! Dimension bookkeeping for the connecting map of the symmetric-quotient
//! filtration, for every admissible `r` and `m`.
//!
//! ```text
//! cargo run --release --example phi_reports -- 3 1 4
//! ```

use std::time::Instant;

use raynaud::cohomology::phi_report;
use raynaud::curve::curve_init;

fn main() -> raynaud::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let (p, n, e) = match args.as_slice() {
        [p, n, e] => (*p, *n as u32, *e),
        _ => (3, 1, 4),
    };
    let ctx = curve_init(p, n, e)?;
    let q = ctx.q() as i64;
    println!("{} genus {} l = {:?}", ctx.params, ctx.genus, ctx.l());
    println!(
        "{:>3} {:>3} {:>4} {:>7} {:>8} {:>6} {:>6} {:>6} {:>6}",
        "m", "r", "N", "h0(Sr)", "h0(Sr1)", "h0(L)", "h1(L)", "rank", "codim"
    );
    for m in 1..=q {
        for r in 0..=q - 2 {
            let t = Instant::now();
            let rep = phi_report(&ctx, r, m)?;
            println!(
                "{:>3} {:>3} {:>4} {:>7} {:>8} {:>6} {:>6} {:>6} {:>6}   ({:.2?})",
                m,
                r,
                rep.big_n,
                rep.dims.h0_sq_r,
                rep.dims.h0_sq_r1,
                rep.dims.h0_l,
                rep.dims.h1_l,
                rep.phi_rank,
                rep.w_codim,
                t.elapsed()
            );
        }
    }
    Ok(())
}

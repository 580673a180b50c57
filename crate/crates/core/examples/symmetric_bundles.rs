//! Ranks, degrees and cohomology of the twisted symmetric quotients and of
//! the adjoint summands at a sampled point.
//!
//! ```text
//! cargo run --release --example symmetric_bundles -- 3 1 4 2
//! ```

use raynaud::bundle::make_sym_quotient;
use raynaud::certificate::bundle_row;
use raynaud::curve::{curve_init, sample_points, DivisorRec};
use raynaud::surface::{adjoint_summands, check_gates};

fn main() -> raynaud::Result<()> {
    let args: Vec<i64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let (p, n, e, m) = match args.as_slice() {
        [p, n, e, m] => (*p as u64, *n as u32, *e as u64, *m),
        _ => (3, 1, 4, 2),
    };
    let params = check_gates(p, n, e, m)?.params()?;
    let ctx = curve_init(p, n, e)?;
    println!("{} m = {m}, N = {}", ctx.params, params.big_n);
    println!(
        "{:<40} {:>4} {:>6} {:>5} {:>5} {:>6}",
        "bundle", "rank", "deg", "h0", "h1", "chi"
    );
    let mut rows = Vec::new();
    for r in 0..=ctx.q() as i64 - 2 {
        rows.push(bundle_row(
            &ctx,
            &make_sym_quotient(&ctx, r, DivisorRec::at_infinity(-params.big_n))?,
        )?);
    }
    let pt = sample_points(&ctx, 1, 8)?.remove(0);
    for s in adjoint_summands(&ctx, &params, &pt)? {
        if s.bundle.rank > 0 {
            rows.push(bundle_row(&ctx, &s.bundle)?);
        }
    }
    for r in rows {
        println!(
            "{:<40} {:>4} {:>6} {:>5} {:>5} {:>6}",
            r.name, r.rank, r.degree, r.h0, r.h1, r.chi
        );
    }
    Ok(())
}

//! Genus, Weierstrass gaps, the canonical degree, and a few fiber points.
//!
//! ```text
//! cargo run --release --example curve_info -- 2 1 3
//! ```

use raynaud::curve::sample_points;
use raynaud::curve::{curve_init, semigroup_gap_count, verify_translation_identity};
use raynaud::series::verify_differential_identities;

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
    let (a, b) = ctx.semigroup_generators;
    println!("{}", ctx.params);
    println!("  genus            {}", ctx.genus);
    println!(
        "  semigroup        <{a}, {b}>, {} gaps",
        semigroup_gap_count(a, b)
    );
    println!("  deg K            {}", ctx.params.canonical_degree());
    println!("  deg L            {}", ctx.params.alpha_exponent());
    for c in verify_differential_identities(ctx.params, &ctx.series) {
        println!("  {:<16} {}", c.name, if c.pass { "ok" } else { "FAILED" });
    }
    println!(
        "  translation      {}",
        if verify_translation_identity(&ctx)?.pass() {
            "ok"
        } else {
            "FAILED"
        }
    );
    for pt in sample_points(&ctx, 4, 8)? {
        println!("  point {}", pt.describe());
    }
    Ok(())
}

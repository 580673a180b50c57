//! Full base-point certificate for one parameter set, printed as JSON.
//!
//! ```text
//! cargo run --release --example certify -- 3 1 4 2
//! ```

use raynaud::certificate::{certify, RunConfig};

fn main() -> raynaud::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let cfg = match args.as_slice() {
        [p, n, e, m] => RunConfig::new(*p, *n as u32, *e, *m as i64),
        _ => RunConfig::new(2, 1, 3, 1),
    };
    let cert = certify(&cfg)?;
    eprintln!(
        "verdict {:?}, h0_total {}, {} of {} points certified",
        cert.base_point.verdict, cert.base_point.h0_total, cert.sweep.certified, cert.sweep.points
    );
    print!("{}", cert.to_json());
    Ok(())
}

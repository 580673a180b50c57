//! Intersection numbers on the ruled surface and on its cyclic cover.
//!
//! ```text
//! cargo run --example intersections -- 2 1 3
//! ```

use raynaud::curve::curve_init;
use raynaud::surface::{positivity, IntersectionForm};

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
    let form = IntersectionForm::new(&ctx);
    let on_p = [
        ("H", form.h()),
        ("f", form.fiber_p()),
        ("Sigma1", form.sigma1()),
        ("Sigma2", form.sigma2()),
    ];
    let on_s = [
        ("Gamma1", form.gamma1()),
        ("Gamma2", form.gamma2()),
        ("F", form.fiber_s()),
    ];
    for group in [&on_p[..], &on_s[..]] {
        print!("{:>8}", "");
        for (name, _) in group {
            print!("{name:>8}");
        }
        println!();
        for (a, x) in group {
            print!("{a:>8}");
            for (_, y) in group {
                print!("{:>8}", form.intersect(*x, *y)?.to_string());
            }
            println!();
        }
    }
    for deg_r in 1..=3 {
        let rep = positivity(&form, deg_r)?;
        println!(
            "A = Gamma1 + {deg_r} F: A^2 = {}, ample test {}",
            rep.a_squared, rep.pass
        );
    }
    Ok(())
}

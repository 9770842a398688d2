//! The largest clock period compatible with a given dephasing limit.
//!
//!     cargo run --example clock_period_bound -- 1e-19 2e-15

use oscillock::periods::{bound_coefficient, clock_period_bound};

fn main() -> oscillock::error::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    // atomic-clock defaults: σ < 1e−19 over a 2 fs optical period
    let (sigma, period) = match args.as_slice() {
        [s, t] => (*s, *t),
        _ => (1e-19, 2e-15),
    };
    let bound = clock_period_bound(sigma, period)?;
    println!("coefficient {:.6}", bound_coefficient());
    println!("sigma {sigma:e}, system period {period:e} s -> clock period < {bound:e} s");
    Ok(())
}

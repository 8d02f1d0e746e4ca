//! Quantizing objective values and comparing them across resolutions.

use qopt::quantizer::{compare, init_eta, quantize, QuantConfig};

fn main() -> qopt::Result<()> {
    let unit = QuantConfig::new(2, 0, 0)?;
    let q = quantize(3.7, &unit)?;
    println!("3.7 on the unit grid -> level {} value {}", q.level(), q.value());

    let tenths = QuantConfig::new(10, 1, 0)?;
    let q = quantize(3.74, &tenths)?;
    println!("3.74 with Q_p = 10 -> level {} value {} (error {:+.2} cells)", q.level(), q.value(), q.error_for(3.74));

    // eta puts the first grid spacing just above the starting value
    for f0 in [0.0, 7.0, 100.0, 1936.18] {
        let cfg = QuantConfig::for_initial_value(f0, 2)?;
        println!("f0 = {f0:>8}: eta = 2^{} (Q_p = {})", init_eta(f0, 2)?, cfg.qp());
    }

    let root = QuantConfig::for_initial_value(100.0, 2)?;
    println!("\nrefining a grid rooted at f0 = 100:");
    for h in [0, 2, 4, 8, 16] {
        let grid = root.with_h_exp(h)?;
        let a = quantize(57.3, &grid)?;
        let b = quantize(55.9, &grid)?;
        println!("  h = {h:>2}  Q_p = {:>10}  57.3 -> {:>10}  55.9 -> {:>10}  {:?}", grid.qp(), a.value(), b.value(), compare(&a, &b)?);
    }

    // levels from different resolutions compare exactly
    let coarse = quantize(57.3, &root.with_h_exp(1)?)?;
    let fine = quantize(55.9, &root.with_h_exp(30)?)?;
    println!("\n57.3 at h=1 vs 55.9 at h=30: {:?}", compare(&coarse, &fine)?);
    println!("largest exact h for values up to 1e4: {}", root.max_h_exp(1e4));
    Ok(())
}

//! The two elementary linear-scaling densities for period 1, checked
//! against the general quadrature route.
//!
//! In the variables a = a_0, b = 2 b_0 with r^2 = |a^2 - b^2|:
//!   a < b: rho(z) = arccosh|r^2/(zb) + a/b| / (pi r)   on [a-b, a+b]
//!   a > b: rho(z) = 1/r on [0, a-b], then an arccos arc up to a+b
//!
//!     cargo run --example closed_forms

use jacobi_density::{band_structure, rho, rho_closed_form_linear, PeriodicCoefficients, ScalingSpec};

fn main() {
    let scaling = ScalingSpec::power(1.0);
    for (a, b) in [(0.0, 2.0), (1.0, 2.0), (3.0, 1.0)] {
        let coeffs = PeriodicCoefficients::new(vec![a], vec![b / 2.0]).unwrap();
        let bands = band_structure(&coeffs).unwrap();
        println!("a = {a}, b = {b}:");
        println!("{:>8}  {:>18}  {:>18}  {:>9}", "z", "quadrature", "closed form", "|diff|");
        let (lo, hi) = (a - b, a + b);
        for i in 1..8 {
            let z = lo + (hi - lo) * i as f64 / 8.0;
            if z.abs() < 1e-9 {
                continue; // origin can be singular
            }
            let general = rho(z, &bands, &scaling).unwrap();
            let closed = rho_closed_form_linear(a, b, z).unwrap();
            println!(
                "{z:>8.3}  {general:>18.12}  {closed:>18.12}  {:>9.2e}",
                (general - closed).abs()
            );
        }
        println!();
    }
}

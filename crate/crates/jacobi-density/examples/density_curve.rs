//! Sweep the limiting density rho(z) over its support and print it as CSV.
//! The free matrix with phi(k) = (k+1)^gamma gives the classical power-law
//! densities; gamma >= 1 makes rho blow up at the origin.
//!
//!     cargo run --example density_curve [gamma]

use jacobi_density::{band_structure, rho_curve, PeriodicCoefficients, ScalingSpec};

fn main() {
    let gamma: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.5);

    let coeffs = PeriodicCoefficients::new(vec![0.0], vec![1.0]).unwrap();
    let bands = band_structure(&coeffs).unwrap();
    let scaling = ScalingSpec::power(gamma);

    let curve = rho_curve(&bands, &scaling, -2.0, 2.0, 101).unwrap();
    println!("z,rho,singular");
    for ((z, r), s) in curve.z.iter().zip(&curve.rho).zip(&curve.singular) {
        println!("{z},{r},{}", u8::from(*s));
    }
}

//! Band structure of a period-2 limit matrix: discriminant polynomial,
//! band edges, and the weight each band carries.
//!
//!     cargo run --example band_structure

use jacobi_density::{band_structure, PeriodicCoefficients};

fn main() {
    let coeffs = PeriodicCoefficients::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
    let bands = band_structure(&coeffs).unwrap();

    println!("a = {:?}, b = {:?}", coeffs.a(), coeffs.b());
    println!(
        "discriminant coefficients (ascending): {:?}",
        bands.discriminant().coeffs()
    );
    for i in 0..bands.period() {
        let (mu, nu) = bands.band(i);
        let weight = bands.rho0_band_integral(i).unwrap();
        println!("band {i}: [{mu:+.6}, {nu:+.6}]  weight {weight:.12}");
    }

    // touching bands: S(x) = x^2 - 2 has a double edge at 0 where the
    // density stays finite
    let touching = PeriodicCoefficients::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    let tb = band_structure(&touching).unwrap();
    println!(
        "\ntouching case edges {:?}\nrho0 at the touching point: {:.6} (1/(2 pi) = {:.6})",
        tb.edges(),
        tb.rho0(0.0),
        1.0 / (2.0 * std::f64::consts::PI),
    );
}

//! Kolmogorov-Smirnov distance between the scaled truncation spectrum and
//! the limiting distribution, shrinking as n grows.
//!
//!     cargo run --release --example ks_convergence

use jacobi_density::spectrum::ks_distance;
use jacobi_density::{band_structure, scaled_spectrum, PeriodicCoefficients, ScalingSpec};

fn main() {
    let coeffs = PeriodicCoefficients::new(vec![0.0, 0.0], vec![1.0, 2.0]).unwrap();
    let bands = band_structure(&coeffs).unwrap();
    let scaling = ScalingSpec::power(1.0);

    println!("{:>6}  {:>10}", "n", "KS");
    for n in [125, 250, 500, 1000, 2000] {
        let spec = scaled_spectrum(&coeffs, &scaling, n).unwrap();
        let ks = ks_distance(&spec, &bands, &scaling).unwrap();
        println!("{n:>6}  {ks:>10.6}");
    }
}

//! Eigenvalues of a large scaled truncation binned against the limiting
//! density: an ASCII rendition of the plateau-plus-arc shape that appears
//! whenever a > b.
//!
//!     cargo run --release --example spectrum_histogram

use jacobi_density::spectrum::histogram;
use jacobi_density::{band_structure, rho, scaled_spectrum, PeriodicCoefficients, ScalingSpec};

fn main() {
    // a = 3, b = 1 in closed-form variables: plateau of height 1/sqrt(8)
    let coeffs = PeriodicCoefficients::new(vec![3.0], vec![0.5]).unwrap();
    let bands = band_structure(&coeffs).unwrap();
    let scaling = ScalingSpec::power(1.0);

    let n = 2000;
    let spec = scaled_spectrum(&coeffs, &scaling, n).unwrap();
    println!("n = {n}, {} eigenvalues in [{:.3}, {:.3}]", spec.values.len(),
        spec.values.first().unwrap(), spec.values.last().unwrap());

    let bins = histogram(&spec, 40, 0.0, 4.0);
    println!("\n{:>7}  {:>9}  {:>9}", "z", "empirical", "limit");
    for (center, height) in bins {
        let limit = rho(center, &bands, &scaling).unwrap();
        let bar = "#".repeat((height * 80.0).round() as usize);
        println!("{center:>7.3}  {height:>9.4}  {limit:>9.4}  {bar}");
    }
}

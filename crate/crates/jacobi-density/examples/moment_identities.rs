//! The moment identity m_M = K_M * int omega^M g(omega) d omega computed
//! three independent ways: finite-window matrix powers times the omega
//! factor, direct integration of z^M against rho, and a finite-n eigenvalue
//! average.
//!
//!     cargo run --release --example moment_identities

use jacobi_density::moments::{density_moment, empirical_moment, periodic_moment, theorem_moment};
use jacobi_density::{band_structure, scaled_spectrum, PeriodicCoefficients, ScalingSpec};

fn main() {
    let coeffs = PeriodicCoefficients::new(vec![0.0], vec![1.0]).unwrap();
    let bands = band_structure(&coeffs).unwrap();
    let scaling = ScalingSpec::power(1.0);
    let spec = scaled_spectrum(&coeffs, &scaling, 4000).unwrap();

    println!(
        "{:>2}  {:>6}  {:>12}  {:>14}  {:>14}",
        "M", "K_M", "theorem", "density int", "empirical"
    );
    for m in 0..=8u32 {
        let k = periodic_moment(&coeffs, m);
        let theory = theorem_moment(&coeffs, &scaling, m);
        let via_rho = density_moment(&bands, &scaling, m).unwrap();
        let emp = empirical_moment(&spec, m);
        println!("{m:>2}  {k:>6.1}  {theory:>12.8}  {via_rho:>14.8}  {emp:>14.8}");
    }
}

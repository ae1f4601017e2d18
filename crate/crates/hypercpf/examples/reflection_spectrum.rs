//! Cold and hot cavity reflection across the photon detuning, and the
//! scattering coefficients they induce.
//!
//! Run with: `cargo run --example reflection_spectrum`

use hypercpf::qdcavity::{emitter_coefficients, CavityParams};

fn main() {
    let steps = 17;
    println!("single-sided dot-cavity reflection, g = 2.4 kappa, kappa_s = 0, gamma = 0.1 kappa");
    println!();
    println!(
        "{:>8}  {:>18} {:>18}  {:>9} {:>9}",
        "detuning", "r0 (re, im)", "rh (re, im)", "|c|", "|f|"
    );
    for i in 0..steps {
        let detuning = -2.0 + 4.0 * (i as f64) / ((steps - 1) as f64);
        // Photon detuned against a resonant dot-cavity pair.
        let params = CavityParams::new(detuning, 0.0, 0.0, 2.4, 1.0, 0.0, 0.1, 1.0).unwrap();
        let coeffs = emitter_coefficients(&params).unwrap();
        println!(
            "{:>8.3}  {:>+9.4} {:>+8.4} {:>+9.4} {:>+8.4}  {:>9.6} {:>9.6}",
            detuning,
            coeffs.r0.re,
            coeffs.r0.im,
            coeffs.rh.re,
            coeffs.rh.im,
            coeffs.c.norm(),
            coeffs.f.norm()
        );
    }
    println!();
    println!("on resonance the cold cavity reflects with a pi phase (r0 = -1) while the");
    println!("coupled dot keeps rh near +1, so the success coefficient approaches unit size.");
}

//! The three intermediate states of the protocol for a compact input,
//! printed term by term.
//!
//! Run with: `cargo run --example checkpoint_states`

use hypercpf::gatecircuit::{checkpoint_state, Checkpoint};
use hypercpf::hyperstate::{InputPairs, SparseState};
use hypercpf::qdcavity::{emitter_coefficients, CavityParams};
use num_complex::Complex64;

fn dump(title: &str, state: &SparseState) {
    println!("{title}: {} terms, squared norm {:.9}", state.len(), state.norm_sqr());
    for (label, amp) in state.iter() {
        println!("  {label}  {:+.6}{:+.6}i", amp.re, amp.im);
    }
    println!();
}

fn main() {
    let params = CavityParams::resonant(2.4, 0.3, 0.1, 0.9).unwrap();
    let coeffs = emitter_coefficients(&params).unwrap();
    println!(
        "coefficients: c = {:+.6}{:+.6}i, f = {:+.6}{:+.6}i",
        coeffs.c.re, coeffs.c.im, coeffs.f.re, coeffs.f.im
    );
    println!();

    // Control photon split across polarization, target photon split across
    // its rails: small enough to read, rich enough to exercise both dots.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let pairs = InputPairs {
        alpha: (Complex64::new(h, 0.0), Complex64::new(h, 0.0)),
        beta: (one, zero),
        lambda: (one, zero),
        varpi: (Complex64::new(h, 0.0), Complex64::new(h, 0.0)),
    };
    let input = pairs.state().unwrap();
    dump("input", &input);

    for (title, stage) in [
        ("after control stage 1", Checkpoint::AfterStage1),
        ("after control stage 2 (detector terms included)", Checkpoint::AfterStage2),
        ("after target pass (post-selected)", Checkpoint::AfterTarget),
    ] {
        let state = checkpoint_state(stage, &input, &params).unwrap();
        dump(title, &state);
    }

    println!("note the uniform fourth-power prefactor on the post-selected terms and the");
    println!("sign pattern on the doubly-flipped components, keyed to the spin values.");
}

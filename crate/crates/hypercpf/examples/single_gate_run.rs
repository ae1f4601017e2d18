//! One full gate invocation: herald decomposition, branch probabilities and
//! fidelities against the ideal double phase flip.
//!
//! Run with: `cargo run --example single_gate_run`

use hypercpf::gatecircuit::{run_hyper_cpf, OutcomePolicy};
use hypercpf::hyperstate::InputPairs;
use hypercpf::qdcavity::CavityParams;
use num_complex::Complex64;

fn main() {
    // Experimentally reported micropillar regime: g / kappa = 2.4 with the
    // emitter linewidth at a tenth of the cavity linewidth.
    let params = CavityParams::resonant(2.4, 0.0, 0.1, 1.0).unwrap();

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pairs = InputPairs {
        alpha: (Complex64::new(h, 0.0), Complex64::new(h, 0.0)),
        beta: (Complex64::new(h, 0.0), Complex64::new(0.0, h)),
        lambda: (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)),
        varpi: (Complex64::new(h, 0.0), Complex64::new(-h, 0.0)),
    };
    let input = pairs.state().unwrap();

    let result = run_hyper_cpf(&input, &params, OutcomePolicy::ReportAllBranches).unwrap();

    println!("success probability : {:.12}", result.success_probability);
    println!("unheralded loss     : {:.12}", result.unheralded_loss);
    println!("heralded failures   :");
    for (detector, mass) in &result.heralded_failure {
        println!("  {detector:>4} : {mass:.12}");
    }
    let total: f64 = result.success_probability
        + result.heralded_failure.values().sum::<f64>()
        + result.unheralded_loss;
    println!("probability total   : {total:.12}");
    println!();
    println!("spin outcome branches (probability relative to the heralded norm):");
    for branch in &result.spin_branches {
        println!(
            "  {:?}: probability {:.6}, fidelity vs ideal {:.12}",
            branch.outcome, branch.probability, branch.fidelity
        );
    }
    println!();
    println!(
        "worst-branch fidelity {:.12} with {} amplitudes in the output state",
        result.fidelity_vs_ideal,
        result.output_state.len()
    );
}

//! The full two-photon hyper-CPF protocol.
//!
//! The control photon traverses a two-stage splitter network that entangles
//! its polarization and spatial mode with the two emitter spins; incomplete
//! scattering components are steered onto detector rails. After Hadamard
//! rotations on both spins the target photon traverses a mirrored copy of the
//! network. Post-selecting on silent detectors and measuring the spins leaves
//! the photons, up to the tabulated feed-forward correction, in the state an
//! ideal controlled-phase-flip on both encodings would produce.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::hyperstate::{
    fidelity, ModeId, PhotonSlot, Polarization, SparseState, SpinIndex, SpinPm, SpinZ, StateError,
};
use crate::optics::{
    apply_element, apply_feed_forward, measure_spins, ElementStep, OpticsError,
};
use crate::qdcavity::{emitter_coefficients, CavityError, CavityParams, EmitterCoeffs};

/// Success-coefficient magnitude at or below which the gate is reported
/// inoperative instead of producing a meaningless post-selected state.
pub const GATE_INOPERATIVE_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GateError {
    #[error("gate inoperative: |c| = {c_magnitude:.3e} (success coefficient too small)")]
    Inoperative { c_magnitude: f64 },
    #[error(transparent)]
    Cavity(#[from] CavityError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error("mode graph ill-formed: {0}")]
    IllFormedGraph(String),
}

/// Ordered element sequences of the optical network, one pass per photon.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGraph {
    pub control_stage1: Vec<ElementStep>,
    pub control_stage2: Vec<ElementStep>,
    pub control_detectors: Vec<ElementStep>,
    pub spin_rotations: Vec<ElementStep>,
    pub target_stage1: Vec<ElementStep>,
    pub target_stage2: Vec<ElementStep>,
    pub target_detectors: Vec<ElementStep>,
}

fn mirror_step(step: &ElementStep) -> ElementStep {
    match *step {
        ElementStep::Pbs { ins, outs } => ElementStep::Pbs {
            ins: [ins[0].mirror(), ins[1].mirror()],
            outs: [outs[0].mirror(), outs[1].mirror()],
        },
        ElementStep::PbsSplit {
            input,
            transmit,
            reflect,
        } => ElementStep::PbsSplit {
            input: input.mirror(),
            transmit: transmit.mirror(),
            reflect: reflect.mirror(),
        },
        ElementStep::Hwp { mode } => ElementStep::Hwp { mode: mode.mirror() },
        ElementStep::Wfc { mode } => ElementStep::Wfc { mode: mode.mirror() },
        ElementStep::QdScatter { mode, spin } => ElementStep::QdScatter {
            mode: mode.mirror(),
            spin,
        },
        ElementStep::Circulator { mode } => ElementStep::Circulator { mode: mode.mirror() },
        ElementStep::Detector { mode } => ElementStep::Detector { mode: mode.mirror() },
        ElementStep::SpinHadamard { spin } => ElementStep::SpinHadamard { spin },
    }
}

impl ModeGraph {
    /// The standard network.
    ///
    /// Stage 1 of the control pass splits each input rail on a PBS; the
    /// reflected (S) arms scatter off the first emitter (the `a12` arm also
    /// passes a half-wave plate), while the transmitted (F) arms pass
    /// wave-form correctors. Stage 2 merges the `a11`/`a12` arms back onto
    /// `a1` (the odd polarization escaping to detector rail `aD1`), splits
    /// the `a21` arm (S to `aD2`), scatters both surviving arms off the
    /// second emitter and merges them onto `a2` with rail `aD3` catching the
    /// mismatched polarizations. The target pass repeats the layout on the
    /// mirrored rails after Hadamard rotations on both spins.
    pub fn standard() -> Self {
        use ElementStep::*;
        use ModeId::*;
        let control_stage1 = vec![
            PbsSplit { input: A1, transmit: A11, reflect: A12 },
            PbsSplit { input: A2, transmit: A22, reflect: A21 },
            Circulator { mode: A12 },
            QdScatter { mode: A12, spin: SpinIndex::One },
            Hwp { mode: A12 },
            Wfc { mode: A11 },
            Circulator { mode: A21 },
            QdScatter { mode: A21, spin: SpinIndex::One },
            Wfc { mode: A22 },
        ];
        let control_stage2 = vec![
            Pbs { ins: [A11, A12], outs: [A1, AD1] },
            Wfc { mode: A1 },
            PbsSplit { input: A21, transmit: A21, reflect: AD2 },
            Circulator { mode: A21 },
            QdScatter { mode: A21, spin: SpinIndex::Two },
            Circulator { mode: A22 },
            QdScatter { mode: A22, spin: SpinIndex::Two },
            Hwp { mode: A22 },
            Pbs { ins: [A21, A22], outs: [AD3, A2] },
        ];
        let control_detectors = vec![
            Detector { mode: AD1 },
            Detector { mode: AD2 },
            Detector { mode: AD3 },
        ];
        let spin_rotations = vec![
            SpinHadamard { spin: SpinIndex::One },
            SpinHadamard { spin: SpinIndex::Two },
        ];
        let target_stage1 = control_stage1.iter().map(mirror_step).collect();
        let target_stage2 = control_stage2.iter().map(mirror_step).collect();
        let target_detectors = control_detectors.iter().map(mirror_step).collect();
        Self {
            control_stage1,
            control_stage2,
            control_detectors,
            spin_rotations,
            target_stage1,
            target_stage2,
            target_detectors,
        }
    }

    /// All steps in application order.
    pub fn steps(&self) -> impl Iterator<Item = &ElementStep> {
        self.control_stage1
            .iter()
            .chain(&self.control_stage2)
            .chain(&self.control_detectors)
            .chain(&self.spin_rotations)
            .chain(&self.target_stage1)
            .chain(&self.target_stage2)
            .chain(&self.target_detectors)
    }

    /// Detector rails of both passes.
    pub fn detector_modes(&self) -> Vec<ModeId> {
        self.steps()
            .filter_map(|s| match s {
                ElementStep::Detector { mode } => Some(*mode),
                _ => None,
            })
            .collect()
    }

    /// Structural checks: no element consumes a detector rail, and every
    /// rail of each pass is reachable from that pass's input rails.
    pub fn validate(&self) -> Result<(), GateError> {
        for step in self.steps() {
            let consumed: Vec<ModeId> = match *step {
                ElementStep::Pbs { ins, .. } => ins.to_vec(),
                ElementStep::PbsSplit { input, .. } => vec![input],
                ElementStep::Hwp { mode }
                | ElementStep::Wfc { mode }
                | ElementStep::QdScatter { mode, .. }
                | ElementStep::Circulator { mode } => vec![mode],
                ElementStep::Detector { .. } | ElementStep::SpinHadamard { .. } => vec![],
            };
            for mode in consumed {
                if mode.is_detector() {
                    return Err(GateError::IllFormedGraph(format!(
                        "detector rail {mode} has an outgoing element: {step:?}"
                    )));
                }
            }
        }
        for (slot, stages) in [
            (
                PhotonSlot::Control,
                [&self.control_stage1, &self.control_stage2],
            ),
            (PhotonSlot::Target, [&self.target_stage1, &self.target_stage2]),
        ] {
            let mut reached: BTreeSet<ModeId> = match slot {
                PhotonSlot::Control => [ModeId::A1, ModeId::A2].into(),
                PhotonSlot::Target => [ModeId::B1, ModeId::B2].into(),
            };
            for step in stages.into_iter().flatten() {
                match *step {
                    ElementStep::Pbs { ins, outs } => {
                        if ins.iter().any(|m| reached.contains(m)) {
                            reached.extend(outs);
                        }
                    }
                    ElementStep::PbsSplit {
                        input,
                        transmit,
                        reflect,
                    } if reached.contains(&input) => {
                        reached.insert(transmit);
                        reached.insert(reflect);
                    }
                    _ => {}
                }
            }
            for mode in ModeId::rails(slot) {
                if !reached.contains(&mode) {
                    return Err(GateError::IllFormedGraph(format!(
                        "rail {mode} unreachable from the {slot} inputs"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds the standard network for a validated parameter set.
pub fn build_circuit(_params: &CavityParams) -> ModeGraph {
    ModeGraph::standard()
}

/// Intermediate states of the protocol exposed for verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checkpoint {
    /// After the control photon's first splitter stage.
    AfterStage1,
    /// After the control photon's second splitter stage, detector terms
    /// still present.
    AfterStage2,
    /// After the target pass with all detector terms post-selected away.
    AfterTarget,
}

fn run_steps(
    state: SparseState,
    steps: &[ElementStep],
    coeffs: &EmitterCoeffs,
) -> Result<SparseState, GateError> {
    let mut current = state;
    for step in steps {
        current = apply_element(&current, step, coeffs)?;
    }
    Ok(current)
}

/// Runs the circuit up to the named checkpoint and returns the state there.
pub fn checkpoint_state(
    stage: Checkpoint,
    input: &SparseState,
    params: &CavityParams,
) -> Result<SparseState, GateError> {
    let coeffs = emitter_coefficients(params)?;
    let graph = ModeGraph::standard();
    let mut state = run_steps(input.clone(), &graph.control_stage1, &coeffs)?;
    if stage == Checkpoint::AfterStage1 {
        return Ok(state);
    }
    state = run_steps(state, &graph.control_stage2, &coeffs)?;
    if stage == Checkpoint::AfterStage2 {
        return Ok(state);
    }
    state = run_steps(state, &graph.control_detectors, &coeffs)?;
    state = run_steps(state, &graph.spin_rotations, &coeffs)?;
    state = run_steps(state, &graph.target_stage1, &coeffs)?;
    state = run_steps(state, &graph.target_stage2, &coeffs)?;
    state = run_steps(state, &graph.target_detectors, &coeffs)?;
    Ok(state)
}

/// Photon-only content of a product-form input: the spins are projected out
/// of their equal-weight superposition and the surviving labels read
/// `(up, up)`.
pub fn photon_part(input: &SparseState) -> SparseState {
    SparseState::from_terms(input.iter().filter_map(|(label, amp)| {
        (label.spin1 == SpinZ::Up && label.spin2 == SpinZ::Up)
            .then_some((*label, amp * 2.0))
    }))
}

/// The gate the circuit implements, applied directly: a phase flip on the
/// doubly-S polarization component and another on the doubly-second-rail
/// spatial component.
///
/// Acts on the photon labels only; expects a state over the boundary rails
/// with the spin factor removed.
pub fn ideal_hyper_cpf(input: &SparseState) -> SparseState {
    SparseState::from_terms(input.iter().map(|(label, amp)| {
        let mut a = *amp;
        if label.pol_c == Polarization::S && label.pol_t == Polarization::S {
            a = -a;
        }
        if label.spat_c == ModeId::A2 && label.spat_t == ModeId::B2 {
            a = -a;
        }
        (*label, a)
    }))
}

/// How a gate run selects its reported output among the spin outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomePolicy {
    /// Report the post-selected pre-measurement state and all four branches.
    ReportAllBranches,
    /// Report the corrected state of one forced spin outcome.
    FixOutcome((SpinPm, SpinPm)),
}

/// One measured spin outcome with its correction applied.
#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub outcome: (SpinPm, SpinPm),
    /// Probability relative to the post-selected norm.
    pub probability: f64,
    /// Overlap of the corrected branch with the ideal gate output.
    pub fidelity: f64,
    pub corrected_state: SparseState,
}

/// Outcome of one full gate run.
#[derive(Debug, Clone, Serialize)]
pub struct GateResult {
    /// Post-selected state (policy `ReportAllBranches`) or the corrected
    /// branch state (policy `FixOutcome`), unadjusted for global phase.
    pub output_state: SparseState,
    /// Squared norm surviving post-selection.
    pub success_probability: f64,
    /// Probability absorbed by each detector rail.
    pub heralded_failure: BTreeMap<ModeId, f64>,
    /// Signed probability change from attenuation and incomplete scattering.
    pub unheralded_loss: f64,
    /// Worst branch fidelity (`ReportAllBranches`) or the fixed branch's.
    pub fidelity_vs_ideal: f64,
    pub spin_branches: Vec<BranchReport>,
}

/// Runs the full protocol on a unit-norm product input.
///
/// Post-selects on silent detectors, measures both spins, applies the
/// feed-forward table per branch and scores every branch against the ideal
/// gate action on the input's photon content.
pub fn run_hyper_cpf(
    input: &SparseState,
    params: &CavityParams,
    policy: OutcomePolicy,
) -> Result<GateResult, GateError> {
    let coeffs = emitter_coefficients(params)?;
    if coeffs.c.norm() <= GATE_INOPERATIVE_THRESHOLD {
        return Err(GateError::Inoperative {
            c_magnitude: coeffs.c.norm(),
        });
    }
    let postselected = checkpoint_state(Checkpoint::AfterTarget, input, params)?;
    if postselected.is_empty() {
        return Err(GateError::Inoperative {
            c_magnitude: coeffs.c.norm(),
        });
    }
    let success_probability = postselected.norm_sqr();
    let heralded_failure = postselected.heralded_loss().clone();
    let unheralded_loss = postselected.unheralded_loss();

    let ideal = ideal_hyper_cpf(&photon_part(input));
    let branches = measure_spins(&postselected)?;
    let mut spin_branches = Vec::with_capacity(4);
    for branch in branches {
        let corrected_state = apply_feed_forward(&branch.state, branch.outcome);
        let branch_fidelity = fidelity(&corrected_state, &ideal)?;
        spin_branches.push(BranchReport {
            outcome: branch.outcome,
            probability: branch.probability,
            fidelity: branch_fidelity,
            corrected_state,
        });
    }

    let (output_state, fidelity_vs_ideal) = match policy {
        OutcomePolicy::ReportAllBranches => {
            let worst = spin_branches
                .iter()
                .map(|b| b.fidelity)
                .fold(f64::INFINITY, f64::min);
            (postselected, worst)
        }
        OutcomePolicy::FixOutcome(outcome) => {
            let branch = spin_branches
                .iter()
                .find(|b| b.outcome == outcome)
                .expect("all four outcomes are always reported");
            (branch.corrected_state.clone(), branch.fidelity)
        }
    };

    Ok(GateResult {
        output_state,
        success_probability,
        heralded_failure,
        unheralded_loss,
        fidelity_vs_ideal,
        spin_branches,
    })
}

/// Gate efficiency computed through the reflection pipeline: the eighth power
/// of the success-coefficient magnitude.
pub fn efficiency_pipeline(params: &CavityParams) -> Result<f64, CavityError> {
    let coeffs = emitter_coefficients(params)?;
    Ok(coeffs.c.norm().powi(8))
}

/// Gate efficiency from the resonant closed form, valid when the photon,
/// cavity and emitter are on resonance and the emitter linewidth is one
/// tenth of the cavity linewidth. Arguments are ratios to the cavity
/// linewidth.
pub fn efficiency_closed_form(g_over_kappa: f64, kappa_s_over_kappa: f64, p: f64) -> f64 {
    let g = g_over_kappa;
    let ks = kappa_s_over_kappa;
    let total = ks + 1.0;
    65536.0 * g.powi(16) * p.powi(8) / (total.powi(8) * (4.0 * g * g + total / 10.0).powi(8))
}

/// Whether a parameter set satisfies the closed form's preconditions.
pub fn closed_form_applies(params: &CavityParams) -> bool {
    let q = params.in_kappa_units();
    q.omega_photon == q.omega_cavity
        && q.omega_photon == q.omega_exciton
        && (q.gamma - 0.1).abs() < 1e-12
}

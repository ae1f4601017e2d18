//! Independent verification machinery for the sparse simulator.
//!
//! Two oracles live here. The dense path enumerates the full basis (two
//! polarizations, nine rails and two spin values per subsystem, 1296 states)
//! and materializes every network element as an explicit matrix, so the
//! sparse evolution can be cross-checked stage by stage with plain
//! matrix-vector products. The reference builders transcribe the protocol's
//! intermediate states as literal term lists in the input amplitudes and the
//! scattering coefficients, bypassing the element machinery entirely.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use thiserror::Error;

use crate::gatecircuit::{Checkpoint, GateError, ModeGraph};
use crate::hyperstate::{
    spin_overlap, HyperBasisLabel, InputPairs, ModeId, PhotonSlot, Polarization, SparseState,
    SpinIndex, SpinPm, SpinZ,
};
use crate::optics::{route_swap, ElementStep};
use crate::qdcavity::{emitter_coefficients, CavityParams, EmitterCoeffs};

/// Full enumerated dimension: 2 * 9 * 2 * 9 * 2 * 2.
pub const DENSE_DIM: usize = 1296;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("dense state dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Flat complex vector over the full enumerated basis.
///
/// Index arithmetic, most significant first: control polarization (2),
/// control rail (9), target polarization (2), target rail (9), spin one (2),
/// spin two (2).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    data: Array1<Complex64>,
}

fn pol_index(p: Polarization) -> usize {
    match p {
        Polarization::F => 0,
        Polarization::S => 1,
    }
}

fn spin_index_z(s: SpinZ) -> usize {
    match s {
        SpinZ::Up => 0,
        SpinZ::Down => 1,
    }
}

/// Basis position of a label.
pub fn index_of(label: &HyperBasisLabel) -> usize {
    let mut idx = pol_index(label.pol_c);
    idx = idx * 9 + label.spat_c.rail_index();
    idx = idx * 2 + pol_index(label.pol_t);
    idx = idx * 9 + label.spat_t.rail_index();
    idx = idx * 2 + spin_index_z(label.spin1);
    idx * 2 + spin_index_z(label.spin2)
}

/// Label at a basis position.
pub fn label_of(index: usize) -> HyperBasisLabel {
    debug_assert!(index < DENSE_DIM);
    let mut rest = index;
    let s2 = rest % 2;
    rest /= 2;
    let s1 = rest % 2;
    rest /= 2;
    let st = rest % 9;
    rest /= 9;
    let pt = rest % 2;
    rest /= 2;
    let sc = rest % 9;
    rest /= 9;
    let pc = rest;
    let pol = |i: usize| if i == 0 { Polarization::F } else { Polarization::S };
    let spin = |i: usize| if i == 0 { SpinZ::Up } else { SpinZ::Down };
    HyperBasisLabel::new(
        pol(pc),
        ModeId::rails(PhotonSlot::Control)[sc],
        pol(pt),
        ModeId::rails(PhotonSlot::Target)[st],
        spin(s1),
        spin(s2),
    )
    .expect("enumerated rails are slot-correct")
}

impl DenseState {
    pub fn zero() -> Self {
        Self {
            data: Array1::zeros(DENSE_DIM),
        }
    }

    pub fn from_sparse(state: &SparseState) -> Self {
        let mut dense = Self::zero();
        for (label, amp) in state.iter() {
            dense.data[index_of(label)] += *amp;
        }
        dense
    }

    pub fn data(&self) -> &Array1<Complex64> {
        &self.data
    }

    pub fn amplitude(&self, label: &HyperBasisLabel) -> Complex64 {
        self.data[index_of(label)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Matrix-vector product `m * self`.
    pub fn apply(&self, m: &Array2<Complex64>) -> Self {
        Self {
            data: m.dot(&self.data),
        }
    }
}

fn mat4_mul(a: &[[Complex64; 4]; 4], b: &[[Complex64; 4]; 4]) -> [[Complex64; 4]; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// The 4x4 scattering block over (polarization, spin) in the storage spin
/// basis, ordered F-up, F-down, S-up, S-down.
fn scatter_block(coeffs: &EmitterCoeffs) -> [[Complex64; 4]; 4] {
    let zero = Complex64::new(0.0, 0.0);
    let (c, f) = (coeffs.c, coeffs.f);
    // Scattering in the superposition spin basis (F+, F-, S+, S-): each
    // polarization flips together with the spin at amplitude c and stays at
    // amplitude f.
    let in_pm = [
        [f, zero, zero, c],
        [zero, f, c, zero],
        [zero, c, f, zero],
        [c, zero, zero, f],
    ];
    // Involutive spin-basis change on the second factor.
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let basis = [
        [h, h, zero, zero],
        [h, -h, zero, zero],
        [zero, zero, h, h],
        [zero, zero, h, -h],
    ];
    mat4_mul(&mat4_mul(&basis, &in_pm), &basis)
}

/// Materializes one network element as an explicit matrix on the full basis;
/// identity off the touched subspace.
pub fn dense_element_matrix(step: &ElementStep, coeffs: &EmitterCoeffs) -> Array2<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = Array2::from_elem((DENSE_DIM, DENSE_DIM), zero);
    match *step {
        ElementStep::Pbs { ins, outs } => {
            let slot = ins[0].slot();
            for col in 0..DENSE_DIM {
                let label = label_of(col);
                let here = label.spat(slot);
                let target = match label.pol(slot) {
                    Polarization::F => route_swap(here, [(ins[0], outs[0]), (ins[1], outs[1])]),
                    Polarization::S => route_swap(here, [(ins[0], outs[1]), (ins[1], outs[0])]),
                };
                m[[index_of(&label.with_spat(slot, target)), col]] = one;
            }
        }
        ElementStep::PbsSplit {
            input,
            transmit,
            reflect,
        } => {
            let slot = input.slot();
            for col in 0..DENSE_DIM {
                let label = label_of(col);
                let here = label.spat(slot);
                let target = match label.pol(slot) {
                    Polarization::F => route_swap(here, [(input, transmit), (input, transmit)]),
                    Polarization::S => route_swap(here, [(input, reflect), (input, reflect)]),
                };
                m[[index_of(&label.with_spat(slot, target)), col]] = one;
            }
        }
        ElementStep::Hwp { mode } => {
            let slot = mode.slot();
            for col in 0..DENSE_DIM {
                let label = label_of(col);
                let dest = if label.spat(slot) == mode {
                    label.with_pol(slot, label.pol(slot).flipped())
                } else {
                    label
                };
                m[[index_of(&dest), col]] = one;
            }
        }
        ElementStep::Wfc { mode } => {
            let slot = mode.slot();
            for col in 0..DENSE_DIM {
                let label = label_of(col);
                m[[col, col]] = if label.spat(slot) == mode { coeffs.c } else { one };
            }
        }
        ElementStep::QdScatter { mode, spin } => {
            let slot = mode.slot();
            let block = scatter_block(coeffs);
            for col in 0..DENSE_DIM {
                let label = label_of(col);
                if label.spat(slot) != mode {
                    m[[col, col]] = one;
                    continue;
                }
                let bc = 2 * pol_index(label.pol(slot)) + spin_index_z(label.spin(spin));
                for (br, row) in block.iter().enumerate() {
                    let pol = if br / 2 == 0 { Polarization::F } else { Polarization::S };
                    let sz = if br % 2 == 0 { SpinZ::Up } else { SpinZ::Down };
                    let dest = label.with_pol(slot, pol).with_spin(spin, sz);
                    if row[bc] != zero {
                        m[[index_of(&dest), col]] = row[bc];
                    }
                }
            }
        }
        ElementStep::Circulator { .. } => {
            for col in 0..DENSE_DIM {
                m[[col, col]] = one;
            }
        }
        ElementStep::Detector { mode } => {
            for col in 0..DENSE_DIM {
                let label = label_of(col);
                let clicked = label.spat_c == mode || label.spat_t == mode;
                m[[col, col]] = if clicked { zero } else { one };
            }
        }
        ElementStep::SpinHadamard { spin } => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            for col in 0..DENSE_DIM {
                let label = label_of(col);
                let up = label.with_spin(spin, SpinZ::Up);
                let down = label.with_spin(spin, SpinZ::Down);
                let sign = if label.spin(spin) == SpinZ::Down { -h } else { h };
                m[[index_of(&up), col]] = h;
                m[[index_of(&down), col]] = sign;
            }
        }
    }
    m
}

/// Projector onto both spins reading the given superposition-basis values:
/// rank-one on each spin factor, identity on the photons.
pub fn dense_spin_projector(outcome: (SpinPm, SpinPm)) -> Array2<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut m = Array2::from_elem((DENSE_DIM, DENSE_DIM), zero);
    for col in 0..DENSE_DIM {
        let label = label_of(col);
        let weight_in =
            spin_overlap(outcome.0, label.spin1) * spin_overlap(outcome.1, label.spin2);
        for s1 in [SpinZ::Up, SpinZ::Down] {
            for s2 in [SpinZ::Up, SpinZ::Down] {
                let weight_out = spin_overlap(outcome.0, s1) * spin_overlap(outcome.1, s2);
                let dest = label
                    .with_spin(SpinIndex::One, s1)
                    .with_spin(SpinIndex::Two, s2);
                m[[index_of(&dest), col]] += Complex64::new(weight_in * weight_out, 0.0);
            }
        }
    }
    m
}

/// Diagonal feed-forward matrix for the control photon.
pub fn dense_feed_forward_matrix(outcome: (SpinPm, SpinPm)) -> Array2<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut m = Array2::from_elem((DENSE_DIM, DENSE_DIM), zero);
    for col in 0..DENSE_DIM {
        let label = label_of(col);
        let mut sign = 1.0;
        if outcome.1 == SpinPm::Minus && label.spat_c == ModeId::A2 {
            sign = -sign;
        }
        if outcome.0 == SpinPm::Minus && label.pol_c == Polarization::S {
            sign = -sign;
        }
        m[[col, col]] = Complex64::new(sign, 0.0);
    }
    m
}

/// Re-attaches a measured spin pair to a photon-only state (labels pinned to
/// up/up), producing the amplitudes the unmeasured system carries on that
/// outcome's support.
pub fn attach_spin_outcome(photon_state: &SparseState, outcome: (SpinPm, SpinPm)) -> SparseState {
    SparseState::from_terms(photon_state.iter().flat_map(|(label, amp)| {
        [SpinZ::Up, SpinZ::Down].into_iter().flat_map(move |s1| {
            [SpinZ::Up, SpinZ::Down].into_iter().map(move |s2| {
                let weight = spin_overlap(outcome.0, s1) * spin_overlap(outcome.1, s2);
                (
                    label
                        .with_spin(SpinIndex::One, s1)
                        .with_spin(SpinIndex::Two, s2),
                    amp * weight,
                )
            })
        })
    }))
}

/// Result of an element-by-element dense evolution.
#[derive(Debug, Clone)]
pub struct DenseTrace {
    pub after_stage1: DenseState,
    pub after_stage2: DenseState,
    pub after_target: DenseState,
}

/// Evolves the input through the standard network with dense matrices only.
pub fn run_dense_pipeline(
    input: &SparseState,
    params: &CavityParams,
) -> Result<DenseTrace, GateError> {
    let coeffs = emitter_coefficients(params)?;
    let graph = ModeGraph::standard();
    let mut state = DenseState::from_sparse(input);
    let run = |state: &DenseState, steps: &[ElementStep]| {
        let mut current = state.clone();
        for step in steps {
            current = current.apply(&dense_element_matrix(step, &coeffs));
        }
        current
    };
    let after_stage1 = run(&state, &graph.control_stage1);
    let after_stage2 = run(&after_stage1, &graph.control_stage2);
    state = run(&after_stage2, &graph.control_detectors);
    state = run(&state, &graph.spin_rotations);
    state = run(&state, &graph.target_stage1);
    state = run(&state, &graph.target_stage2);
    let after_target = run(&state, &graph.target_detectors);
    Ok(DenseTrace {
        after_stage1,
        after_stage2,
        after_target,
    })
}

/// Outcome of one sparse-versus-dense comparison.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub max_abs_diff: f64,
    pub worst_label: Option<HyperBasisLabel>,
    pub tol: f64,
    pub pass: bool,
}

/// Compares a sparse state against a dense vector amplitude by amplitude.
pub fn compare_states(
    sparse: &SparseState,
    dense: &DenseState,
    tol: f64,
) -> Result<ComparisonReport, OracleError> {
    if dense.data.len() != DENSE_DIM {
        return Err(OracleError::DimensionMismatch {
            expected: DENSE_DIM,
            got: dense.data.len(),
        });
    }
    let mut max_abs_diff = 0.0f64;
    let mut worst_label = None;
    for (idx, amp) in dense.data.iter().enumerate() {
        let label = label_of(idx);
        let diff = (amp - sparse.amplitude(&label)).norm();
        if diff > max_abs_diff {
            max_abs_diff = diff;
            worst_label = Some(label);
        }
    }
    Ok(ComparisonReport {
        max_abs_diff,
        worst_label,
        tol,
        pass: max_abs_diff < tol,
    })
}

fn spin_expansion(pm: SpinPm) -> [(SpinZ, f64); 2] {
    match pm {
        SpinPm::Plus => [
            (SpinZ::Up, std::f64::consts::FRAC_1_SQRT_2),
            (SpinZ::Down, std::f64::consts::FRAC_1_SQRT_2),
        ],
        SpinPm::Minus => [
            (SpinZ::Up, std::f64::consts::FRAC_1_SQRT_2),
            (SpinZ::Down, -std::f64::consts::FRAC_1_SQRT_2),
        ],
    }
}

/// Target-photon factor of the input, as (polarization, rail, amplitude)
/// triples.
fn target_factor(pairs: &InputPairs) -> [(Polarization, ModeId, Complex64); 4] {
    [
        (Polarization::F, ModeId::B1, pairs.lambda.0 * pairs.varpi.0),
        (Polarization::F, ModeId::B2, pairs.lambda.0 * pairs.varpi.1),
        (Polarization::S, ModeId::B1, pairs.lambda.1 * pairs.varpi.0),
        (Polarization::S, ModeId::B2, pairs.lambda.1 * pairs.varpi.1),
    ]
}

/// Literal term list for the state after the control photon's first stage:
/// six control terms carrying one scattering coefficient each, joined with
/// the untouched target factor and both spins.
pub fn reference_after_stage1(pairs: &InputPairs, coeffs: &EmitterCoeffs) -> SparseState {
    let (c, f) = (coeffs.c, coeffs.f);
    let (a1, a2) = (pairs.alpha.0, pairs.alpha.1);
    let (b1, b2) = (pairs.beta.0, pairs.beta.1);
    let control_terms = [
        (Polarization::F, ModeId::A11, SpinPm::Plus, c * a1 * b1),
        (Polarization::F, ModeId::A22, SpinPm::Plus, c * a1 * b2),
        (Polarization::S, ModeId::A12, SpinPm::Minus, c * a2 * b1),
        (Polarization::F, ModeId::A12, SpinPm::Plus, f * a2 * b1),
        (Polarization::F, ModeId::A21, SpinPm::Minus, c * a2 * b2),
        (Polarization::S, ModeId::A21, SpinPm::Plus, f * a2 * b2),
    ];
    let mut terms = Vec::new();
    for (pc, mc, s1pm, ctrl_amp) in control_terms {
        for (pt, mt, tgt_amp) in target_factor(pairs) {
            for (s1, w1) in spin_expansion(s1pm) {
                for (s2, w2) in spin_expansion(SpinPm::Plus) {
                    let label = HyperBasisLabel::new(pc, mc, pt, mt, s1, s2).unwrap();
                    terms.push((label, ctrl_amp * tgt_amp * w1 * w2));
                }
            }
        }
    }
    SparseState::from_terms(terms)
}

/// Literal term list for the state after the control photon's second stage,
/// detector-bound terms included.
pub fn reference_after_stage2(pairs: &InputPairs, coeffs: &EmitterCoeffs) -> SparseState {
    let (c, f) = (coeffs.c, coeffs.f);
    let (a1, a2) = (pairs.alpha.0, pairs.alpha.1);
    let (b1, b2) = (pairs.beta.0, pairs.beta.1);
    let control_terms = [
        (Polarization::F, ModeId::A1, SpinPm::Plus, SpinPm::Plus, c * c * a1 * b1),
        (Polarization::F, ModeId::A2, SpinPm::Plus, SpinPm::Minus, c * c * a1 * b2),
        (Polarization::S, ModeId::AD3, SpinPm::Plus, SpinPm::Plus, c * f * a1 * b2),
        (Polarization::S, ModeId::A1, SpinPm::Minus, SpinPm::Plus, c * c * a2 * b1),
        (Polarization::F, ModeId::AD1, SpinPm::Plus, SpinPm::Plus, f * a2 * b1),
        (Polarization::S, ModeId::A2, SpinPm::Minus, SpinPm::Minus, c * c * a2 * b2),
        (Polarization::F, ModeId::AD3, SpinPm::Minus, SpinPm::Plus, c * f * a2 * b2),
        (Polarization::S, ModeId::AD2, SpinPm::Plus, SpinPm::Plus, f * a2 * b2),
    ];
    let mut terms = Vec::new();
    for (pc, mc, s1pm, s2pm, ctrl_amp) in control_terms {
        for (pt, mt, tgt_amp) in target_factor(pairs) {
            for (s1, w1) in spin_expansion(s1pm) {
                for (s2, w2) in spin_expansion(s2pm) {
                    let label = HyperBasisLabel::new(pc, mc, pt, mt, s1, s2).unwrap();
                    terms.push((label, ctrl_amp * tgt_amp * w1 * w2));
                }
            }
        }
    }
    SparseState::from_terms(terms)
}

/// Literal term list for the post-selected state after the target pass:
/// sixteen photon terms with a fourth-power coefficient prefactor, the target
/// signs keyed to the storage-basis spins.
pub fn reference_after_target(pairs: &InputPairs, coeffs: &EmitterCoeffs) -> SparseState {
    let c4 = coeffs.c.powu(4);
    let (a1, a2) = (pairs.alpha.0, pairs.alpha.1);
    let (b1, b2) = (pairs.beta.0, pairs.beta.1);
    let branches = [
        (Polarization::F, ModeId::A1, SpinZ::Up, SpinZ::Up, a1 * b1),
        (Polarization::F, ModeId::A2, SpinZ::Up, SpinZ::Down, a1 * b2),
        (Polarization::S, ModeId::A1, SpinZ::Down, SpinZ::Up, a2 * b1),
        (Polarization::S, ModeId::A2, SpinZ::Down, SpinZ::Down, a2 * b2),
    ];
    let mut terms = Vec::new();
    for (pc, mc, s1, s2, ctrl_amp) in branches {
        let lambda_sign = if s1 == SpinZ::Down { -1.0 } else { 1.0 };
        let varpi_sign = if s2 == SpinZ::Down { -1.0 } else { 1.0 };
        let target_terms = [
            (Polarization::F, ModeId::B1, pairs.lambda.0 * pairs.varpi.0),
            (Polarization::F, ModeId::B2, pairs.lambda.0 * pairs.varpi.1 * varpi_sign),
            (Polarization::S, ModeId::B1, pairs.lambda.1 * lambda_sign * pairs.varpi.0),
            (
                Polarization::S,
                ModeId::B2,
                pairs.lambda.1 * lambda_sign * pairs.varpi.1 * varpi_sign,
            ),
        ];
        for (pt, mt, tgt_amp) in target_terms {
            let label = HyperBasisLabel::new(pc, mc, pt, mt, s1, s2).unwrap();
            terms.push((label, c4 * ctrl_amp * tgt_amp));
        }
    }
    SparseState::from_terms(terms)
}

/// Reference state for any checkpoint.
pub fn reference_checkpoint(
    stage: Checkpoint,
    pairs: &InputPairs,
    coeffs: &EmitterCoeffs,
) -> SparseState {
    match stage {
        Checkpoint::AfterStage1 => reference_after_stage1(pairs, coeffs),
        Checkpoint::AfterStage2 => reference_after_stage2(pairs, coeffs),
        Checkpoint::AfterTarget => reference_after_target(pairs, coeffs),
    }
}

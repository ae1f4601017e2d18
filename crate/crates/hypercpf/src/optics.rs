//! Optical and spin elements of the gate network as pure state-in/state-out
//! transformations.
//!
//! Polarizing beam splitters, half-wave plates and spin rotations permute or
//! unitarily mix amplitudes; wave-form correctors and photon-dot scattering
//! may shrink (or, for incomplete interactions with favorable reflections,
//! grow) the norm, with the signed difference booked on the un-heralded
//! ledger; detectors move probability to the heralded ledger.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperstate::{
    spin_overlap, HyperBasisLabel, ModeId, PhotonSlot, Polarization, SparseState, SpinIndex,
    SpinPm, SpinZ,
};
use crate::qdcavity::EmitterCoeffs;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpticsError {
    #[error("mode collision: `{0}` used twice in one beam-splitter port set")]
    ModeCollision(ModeId),
    #[error("beam-splitter ports span both passes (`{0}` vs `{1}`)")]
    MixedSlots(ModeId, ModeId),
    #[error("cannot measure spins of a zero-norm state")]
    ZeroNormState,
}

/// One element of the optical network.
///
/// Ports name spatial rails; the addressed photon pass follows from the rail
/// names and the addressed spin from the `spin` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementStep {
    /// Four-port polarizing beam splitter. Transmission keeps the port index
    /// (`ins[i]` to `outs[i]`, F polarization), reflection crosses it
    /// (`ins[i]` to `outs[1 - i]`, S polarization).
    Pbs { ins: [ModeId; 2], outs: [ModeId; 2] },
    /// Beam splitter fed through a single port: F transmits to `transmit`
    /// (which may keep the input rail name), S reflects to `reflect`.
    PbsSplit {
        input: ModeId,
        transmit: ModeId,
        reflect: ModeId,
    },
    /// Half-wave plate at zero degrees: swaps the two linear polarizations
    /// on one rail.
    Hwp { mode: ModeId },
    /// Wave-form corrector: attenuates both polarizations on one rail by the
    /// success coefficient.
    Wfc { mode: ModeId },
    /// Photon-dot scattering event on one rail, entangling the photon
    /// polarization with the indexed emitter spin.
    QdScatter { mode: ModeId, spin: SpinIndex },
    /// Optical circulator: enforces directionality in the physical setup;
    /// no amplitude effect.
    Circulator { mode: ModeId },
    /// Single-photon detector terminating one rail.
    Detector { mode: ModeId },
    /// Hadamard rotation on one emitter spin.
    SpinHadamard { spin: SpinIndex },
}

/// Outcome-conditioned correction applied to one photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeedForwardOp {
    None,
    /// Negates amplitudes whose spatial label is the second rail.
    SpatialSigmaZ,
    /// Negates amplitudes whose polarization is S.
    PolarizedSigmaZ,
    Both,
}

impl FeedForwardOp {
    /// Correction table for the control photon, keyed by the measured spin
    /// pair; the target photon never needs one.
    pub fn for_outcome(outcome: (SpinPm, SpinPm)) -> Self {
        match outcome {
            (SpinPm::Plus, SpinPm::Plus) => FeedForwardOp::None,
            (SpinPm::Plus, SpinPm::Minus) => FeedForwardOp::SpatialSigmaZ,
            (SpinPm::Minus, SpinPm::Plus) => FeedForwardOp::PolarizedSigmaZ,
            (SpinPm::Minus, SpinPm::Minus) => FeedForwardOp::Both,
        }
    }

    /// Applies the correction to the photon in `slot`.
    pub fn apply(self, state: &SparseState, slot: PhotonSlot) -> SparseState {
        let spatial = matches!(self, FeedForwardOp::SpatialSigmaZ | FeedForwardOp::Both);
        let polarized = matches!(self, FeedForwardOp::PolarizedSigmaZ | FeedForwardOp::Both);
        let second_rail = match slot {
            PhotonSlot::Control => ModeId::A2,
            PhotonSlot::Target => ModeId::B2,
        };
        let mut out = state.clone();
        let amps: BTreeMap<HyperBasisLabel, Complex64> = state
            .iter()
            .map(|(label, amp)| {
                let mut a = *amp;
                if spatial && label.spat(slot) == second_rail {
                    a = -a;
                }
                if polarized && label.pol(slot) == Polarization::S {
                    a = -a;
                }
                (*label, a)
            })
            .collect();
        out.replace_amplitudes(amps);
        out
    }
}

/// Involutive rail swap: `pairs` are (port, port) exchanges; a rail outside
/// every pair stays put.
pub(crate) fn route_swap(mode: ModeId, pairs: [(ModeId, ModeId); 2]) -> ModeId {
    for (a, b) in pairs {
        if mode == a {
            return b;
        }
        if mode == b {
            return a;
        }
    }
    mode
}

/// Routes amplitudes through a four-port polarizing beam splitter.
///
/// F polarization exchanges `ins[i]` with `outs[i]`, S polarization
/// exchanges `ins[i]` with `outs[1 - i]`; rails outside the port set are
/// untouched. The routing is an involution, so the matrix it realizes is a
/// permutation of the touched sub-basis.
pub fn apply_pbs(
    state: &SparseState,
    ins: [ModeId; 2],
    outs: [ModeId; 2],
) -> Result<SparseState, OpticsError> {
    if ins[0] == ins[1] {
        return Err(OpticsError::ModeCollision(ins[0]));
    }
    if outs[0] == outs[1] {
        return Err(OpticsError::ModeCollision(outs[0]));
    }
    for i in ins {
        if outs.contains(&i) {
            return Err(OpticsError::ModeCollision(i));
        }
    }
    let slot = ins[0].slot();
    for m in ins.iter().chain(outs.iter()) {
        if m.slot() != slot {
            return Err(OpticsError::MixedSlots(ins[0], *m));
        }
    }
    let mut rewritten = BTreeMap::new();
    for (label, amp) in state.iter() {
        let here = label.spat(slot);
        let dest = match label.pol(slot) {
            Polarization::F => route_swap(here, [(ins[0], outs[0]), (ins[1], outs[1])]),
            Polarization::S => route_swap(here, [(ins[0], outs[1]), (ins[1], outs[0])]),
        };
        *rewritten
            .entry(label.with_spat(slot, dest))
            .or_insert(Complex64::new(0.0, 0.0)) += *amp;
    }
    let mut out = state.clone();
    out.replace_amplitudes(rewritten);
    Ok(out)
}

/// Single-input beam splitter: F on `input` exchanges with `transmit`
/// (which may keep the input's name), S exchanges with `reflect`.
pub fn apply_pbs_split(
    state: &SparseState,
    input: ModeId,
    transmit: ModeId,
    reflect: ModeId,
) -> Result<SparseState, OpticsError> {
    if transmit == reflect || input == reflect {
        return Err(OpticsError::ModeCollision(reflect));
    }
    let slot = input.slot();
    for m in [transmit, reflect] {
        if m.slot() != slot {
            return Err(OpticsError::MixedSlots(input, m));
        }
    }
    let mut rewritten = BTreeMap::new();
    for (label, amp) in state.iter() {
        let here = label.spat(slot);
        let dest = match label.pol(slot) {
            Polarization::F => route_swap(here, [(input, transmit), (input, transmit)]),
            Polarization::S => route_swap(here, [(input, reflect), (input, reflect)]),
        };
        *rewritten
            .entry(label.with_spat(slot, dest))
            .or_insert(Complex64::new(0.0, 0.0)) += *amp;
    }
    let mut out = state.clone();
    out.replace_amplitudes(rewritten);
    Ok(out)
}

/// Swaps the two linear polarizations on one rail.
pub fn apply_hwp(state: &SparseState, mode: ModeId) -> SparseState {
    let slot = mode.slot();
    let amps: BTreeMap<HyperBasisLabel, Complex64> = state
        .iter()
        .map(|(label, amp)| {
            if label.spat(slot) == mode {
                (label.with_pol(slot, label.pol(slot).flipped()), *amp)
            } else {
                (*label, *amp)
            }
        })
        .collect();
    let mut out = state.clone();
    out.replace_amplitudes(amps);
    out
}

/// Attenuates both polarizations on one rail by the success coefficient.
///
/// The removed probability `(1 - |c|^2)` times the rail mass accrues to the
/// un-heralded ledger.
pub fn apply_wfc(state: &SparseState, mode: ModeId, coeffs: &EmitterCoeffs) -> SparseState {
    let slot = mode.slot();
    let c = coeffs.c;
    let mut rail_mass = 0.0;
    let amps: BTreeMap<HyperBasisLabel, Complex64> = state
        .iter()
        .map(|(label, amp)| {
            if label.spat(slot) == mode {
                rail_mass += amp.norm_sqr();
                (*label, amp * c)
            } else {
                (*label, *amp)
            }
        })
        .collect();
    let mut out = state.clone();
    out.replace_amplitudes(amps);
    out.add_unheralded_loss((1.0 - c.norm_sqr()) * rail_mass);
    out
}

/// Index into the four (polarization, spin) components of one scattering
/// block: F = 0, S = 1 for polarization; up/plus = 0, down/minus = 1 for spin.
fn block_index(pol: Polarization, second: usize) -> usize {
    let p = match pol {
        Polarization::F => 0,
        Polarization::S => 1,
    };
    2 * p + second
}

/// Scatters the photon on `mode` off the emitter carrying `spin`.
///
/// The joint map on (polarization, spin) is stated in the superposition spin
/// basis: each polarization flips together with the spin at amplitude `c` and
/// stays put at amplitude `f`. Storage stays in the up/down basis, so the
/// block is conjugated by the basis change. The signed change of the rail
/// mass accrues to the un-heralded ledger.
pub fn apply_qd_scatter(
    state: &SparseState,
    mode: ModeId,
    spin: SpinIndex,
    coeffs: &EmitterCoeffs,
) -> SparseState {
    let slot = mode.slot();
    let (c, f) = (coeffs.c, coeffs.f);
    // Gather the amplitudes on the rail into 4-component blocks keyed by the
    // remaining label fields.
    let mut blocks: BTreeMap<HyperBasisLabel, [Complex64; 4]> = BTreeMap::new();
    let mut untouched: BTreeMap<HyperBasisLabel, Complex64> = BTreeMap::new();
    let mut mass_before = 0.0;
    for (label, amp) in state.iter() {
        if label.spat(slot) == mode {
            mass_before += amp.norm_sqr();
            let key = label
                .with_pol(slot, Polarization::F)
                .with_spin(spin, SpinZ::Up);
            let z = match label.spin(spin) {
                SpinZ::Up => 0,
                SpinZ::Down => 1,
            };
            blocks.entry(key).or_insert([Complex64::new(0.0, 0.0); 4])
                [block_index(label.pol(slot), z)] = *amp;
        } else {
            untouched.insert(*label, *amp);
        }
    }

    let mut amps = untouched;
    let mut mass_after = 0.0;
    for (key, v) in blocks {
        // Storage basis -> superposition basis.
        let w = [
            (v[0] + v[1]) * FRAC_1_SQRT_2, // F, plus
            (v[0] - v[1]) * FRAC_1_SQRT_2, // F, minus
            (v[2] + v[3]) * FRAC_1_SQRT_2, // S, plus
            (v[2] - v[3]) * FRAC_1_SQRT_2, // S, minus
        ];
        // Joint scattering map in the superposition basis.
        let scattered = [
            f * w[0] + c * w[3], // F, plus
            f * w[1] + c * w[2], // F, minus
            f * w[2] + c * w[1], // S, plus
            f * w[3] + c * w[0], // S, minus
        ];
        // Back to the storage basis.
        let out = [
            (scattered[0] + scattered[1]) * FRAC_1_SQRT_2, // F, up
            (scattered[0] - scattered[1]) * FRAC_1_SQRT_2, // F, down
            (scattered[2] + scattered[3]) * FRAC_1_SQRT_2, // S, up
            (scattered[2] - scattered[3]) * FRAC_1_SQRT_2, // S, down
        ];
        for (idx, amp) in out.into_iter().enumerate() {
            mass_after += amp.norm_sqr();
            if amp.norm_sqr() > 0.0 {
                let pol = if idx / 2 == 0 { Polarization::F } else { Polarization::S };
                let sz = if idx % 2 == 0 { SpinZ::Up } else { SpinZ::Down };
                let label = key.with_pol(slot, pol).with_spin(spin, sz);
                *amps.entry(label).or_insert(Complex64::new(0.0, 0.0)) += amp;
            }
        }
    }
    let mut out = state.clone();
    out.replace_amplitudes(amps);
    out.add_unheralded_loss(mass_before - mass_after);
    out
}

/// Hadamard rotation on one emitter spin: up maps to plus, down to minus.
pub fn apply_spin_hadamard(state: &SparseState, spin: SpinIndex) -> SparseState {
    let mut amps: BTreeMap<HyperBasisLabel, Complex64> = BTreeMap::new();
    let mut done: BTreeMap<HyperBasisLabel, bool> = BTreeMap::new();
    for (label, _) in state.iter() {
        let key = label.with_spin(spin, SpinZ::Up);
        if done.insert(key, true).is_some() {
            continue;
        }
        let up = state.amplitude(&key);
        let down = state.amplitude(&key.with_spin(spin, SpinZ::Down));
        let new_up = (up + down) * FRAC_1_SQRT_2;
        let new_down = (up - down) * FRAC_1_SQRT_2;
        if new_up.norm_sqr() > 0.0 {
            amps.insert(key, new_up);
        }
        if new_down.norm_sqr() > 0.0 {
            amps.insert(key.with_spin(spin, SpinZ::Down), new_down);
        }
    }
    let mut out = state.clone();
    out.replace_amplitudes(amps);
    out
}

/// Removes every amplitude sitting on a detector rail.
///
/// Returns the post-selected state and the squared mass each detector
/// absorbed. The removed mass is booked on the heralded ledger of the
/// returned state.
pub fn detect_and_postselect(
    state: &SparseState,
    detector_modes: &[ModeId],
) -> (SparseState, BTreeMap<ModeId, f64>) {
    let mut removed: BTreeMap<ModeId, f64> = detector_modes.iter().map(|m| (*m, 0.0)).collect();
    let mut kept: BTreeMap<HyperBasisLabel, Complex64> = BTreeMap::new();
    for (label, amp) in state.iter() {
        let hit = detector_modes
            .iter()
            .find(|m| label.spat_c == **m || label.spat_t == **m);
        match hit {
            Some(m) => *removed.get_mut(m).expect("detector key") += amp.norm_sqr(),
            None => {
                kept.insert(*label, *amp);
            }
        }
    }
    let mut out = state.clone();
    out.replace_amplitudes(kept);
    for (mode, mass) in &removed {
        if *mass > 0.0 {
            out.add_heralded_loss(*mode, *mass);
        }
    }
    (out, removed)
}

/// One projective spin-measurement outcome.
#[derive(Debug, Clone)]
pub struct SpinBranch {
    pub outcome: (SpinPm, SpinPm),
    /// Probability relative to the measured state's norm.
    pub probability: f64,
    /// Conditional state with the spin factor removed; by convention both
    /// spin fields of the surviving labels read `up`.
    pub state: SparseState,
}

/// All four spin outcome labels in reporting order.
pub const SPIN_OUTCOMES: [(SpinPm, SpinPm); 4] = [
    (SpinPm::Plus, SpinPm::Plus),
    (SpinPm::Plus, SpinPm::Minus),
    (SpinPm::Minus, SpinPm::Plus),
    (SpinPm::Minus, SpinPm::Minus),
];

/// Projects both spins onto the superposition basis.
///
/// Probabilities are relative to the input norm and sum to one; the four
/// conditional states inherit the input's loss ledgers.
pub fn measure_spins(state: &SparseState) -> Result<[SpinBranch; 4], OpticsError> {
    let total = state.norm_sqr();
    if total <= 0.0 {
        return Err(OpticsError::ZeroNormState);
    }
    let branches = SPIN_OUTCOMES.map(|outcome| {
        let mut amps: BTreeMap<HyperBasisLabel, Complex64> = BTreeMap::new();
        for (label, amp) in state.iter() {
            let weight = spin_overlap(outcome.0, label.spin1) * spin_overlap(outcome.1, label.spin2);
            let key = label
                .with_spin(SpinIndex::One, SpinZ::Up)
                .with_spin(SpinIndex::Two, SpinZ::Up);
            *amps.entry(key).or_insert(Complex64::new(0.0, 0.0)) += amp * weight;
        }
        let mut conditional = state.clone();
        conditional.replace_amplitudes(amps);
        let probability = conditional.norm_sqr() / total;
        SpinBranch {
            outcome,
            probability,
            state: conditional,
        }
    });
    Ok(branches)
}

/// Applies the measured-outcome correction table to the control photon.
pub fn apply_feed_forward(state: &SparseState, outcome: (SpinPm, SpinPm)) -> SparseState {
    FeedForwardOp::for_outcome(outcome).apply(state, PhotonSlot::Control)
}

/// Applies one network element. Wave-form correctors and scattering events
/// read their amplitudes from `coeffs`; detectors post-select their rail.
pub fn apply_element(
    state: &SparseState,
    step: &ElementStep,
    coeffs: &EmitterCoeffs,
) -> Result<SparseState, OpticsError> {
    match step {
        ElementStep::Pbs { ins, outs } => apply_pbs(state, *ins, *outs),
        ElementStep::PbsSplit {
            input,
            transmit,
            reflect,
        } => apply_pbs_split(state, *input, *transmit, *reflect),
        ElementStep::Hwp { mode } => Ok(apply_hwp(state, *mode)),
        ElementStep::Wfc { mode } => Ok(apply_wfc(state, *mode, coeffs)),
        ElementStep::QdScatter { mode, spin } => Ok(apply_qd_scatter(state, *mode, *spin, coeffs)),
        ElementStep::Circulator { .. } => Ok(state.clone()),
        ElementStep::Detector { mode } => Ok(detect_and_postselect(state, &[*mode]).0),
        ElementStep::SpinHadamard { spin } => Ok(apply_spin_hadamard(state, *spin)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperstate::testutil::{basis_label, C_ONE};
    use crate::hyperstate::{make_input_state, SparseState};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ideal_coeffs() -> EmitterCoeffs {
        EmitterCoeffs::from_reflections(Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0), 1.0)
    }

    fn single(pol_c: Polarization, spat_c: ModeId, spin1: SpinZ) -> SparseState {
        SparseState::from_terms([(
            basis_label(pol_c, spat_c, Polarization::F, ModeId::B1, spin1, SpinZ::Up),
            C_ONE,
        )])
    }

    /// Random sparse state over a mixed pool of rails, unit norm.
    fn random_state(rng: &mut ChaCha8Rng, terms: usize) -> SparseState {
        let pool_c = [ModeId::A1, ModeId::A2, ModeId::A11, ModeId::A12, ModeId::A21];
        let pool_t = [ModeId::B1, ModeId::B2, ModeId::B22];
        let mut list = Vec::new();
        for _ in 0..terms {
            let label = basis_label(
                if rng.gen_bool(0.5) { Polarization::F } else { Polarization::S },
                pool_c[rng.gen_range(0..pool_c.len())],
                if rng.gen_bool(0.5) { Polarization::F } else { Polarization::S },
                pool_t[rng.gen_range(0..pool_t.len())],
                if rng.gen_bool(0.5) { SpinZ::Up } else { SpinZ::Down },
                if rng.gen_bool(0.5) { SpinZ::Up } else { SpinZ::Down },
            );
            list.push((
                label,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            ));
        }
        let state = SparseState::from_terms(list);
        let norm = state.norm_sqr().sqrt();
        state.scaled(Complex64::new(1.0 / norm, 0.0))
    }

    #[test]
    fn pbs_routes_f_to_transmit_and_s_to_reflect() {
        let f_in = single(Polarization::F, ModeId::A1, SpinZ::Up);
        let out = apply_pbs_split(&f_in, ModeId::A1, ModeId::A11, ModeId::A12).unwrap();
        assert_eq!(out.len(), 1);
        let expect = basis_label(
            Polarization::F,
            ModeId::A11,
            Polarization::F,
            ModeId::B1,
            SpinZ::Up,
            SpinZ::Up,
        );
        assert!((out.amplitude(&expect) - C_ONE).norm() < 1e-15);

        let s_in = single(Polarization::S, ModeId::A1, SpinZ::Up);
        let out = apply_pbs_split(&s_in, ModeId::A1, ModeId::A11, ModeId::A12).unwrap();
        let expect = basis_label(
            Polarization::S,
            ModeId::A12,
            Polarization::F,
            ModeId::B1,
            SpinZ::Up,
            SpinZ::Up,
        );
        assert!((out.amplitude(&expect) - C_ONE).norm() < 1e-15);
    }

    #[test]
    fn pbs_through_mirrored_ports_is_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let state = random_state(&mut rng, 12);
        let forward = apply_pbs(&state, [ModeId::A1, ModeId::A2], [ModeId::A11, ModeId::A12]).unwrap();
        let back = apply_pbs(&forward, [ModeId::A11, ModeId::A12], [ModeId::A1, ModeId::A2]).unwrap();
        let (dev, _) = back.max_deviation(&state);
        assert!(dev < 1e-15);
    }

    #[test]
    fn pbs_rejects_port_collisions() {
        let state = single(Polarization::F, ModeId::A1, SpinZ::Up);
        let err = apply_pbs(&state, [ModeId::A1, ModeId::A1], [ModeId::A11, ModeId::A12]).unwrap_err();
        assert!(matches!(err, OpticsError::ModeCollision(ModeId::A1)));
        let err = apply_pbs(&state, [ModeId::A1, ModeId::B1], [ModeId::A11, ModeId::A12]).unwrap_err();
        assert!(matches!(err, OpticsError::MixedSlots(_, _)));
    }

    #[test]
    fn hwp_swaps_polarizations_and_is_involutive() {
        let state = SparseState::from_terms([
            (
                basis_label(Polarization::F, ModeId::A11, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up),
                Complex64::new(0.6, 0.0),
            ),
            (
                basis_label(Polarization::S, ModeId::A11, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up),
                Complex64::new(0.0, 0.8),
            ),
        ]);
        let swapped = apply_hwp(&state, ModeId::A11);
        let f_label = basis_label(Polarization::F, ModeId::A11, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up);
        let s_label = f_label.with_pol(PhotonSlot::Control, Polarization::S);
        assert!((swapped.amplitude(&f_label) - Complex64::new(0.0, 0.8)).norm() < 1e-15);
        assert!((swapped.amplitude(&s_label) - Complex64::new(0.6, 0.0)).norm() < 1e-15);
        let twice = apply_hwp(&swapped, ModeId::A11);
        let (dev, _) = twice.max_deviation(&state);
        assert!(dev < 1e-15);
    }

    #[test]
    fn hwp_leaves_other_rails_alone() {
        let state = single(Polarization::F, ModeId::A1, SpinZ::Up);
        let out = apply_hwp(&state, ModeId::A11);
        let (dev, _) = out.max_deviation(&state);
        assert!(dev < 1e-15);
    }

    #[test]
    fn wfc_phase_flip_drops_no_mass() {
        let state = single(Polarization::F, ModeId::A11, SpinZ::Up);
        let out = apply_wfc(&state, ModeId::A11, &ideal_coeffs());
        assert!((out.norm_sqr() - 1.0).abs() < 1e-15);
        assert_eq!(out.unheralded_loss(), 0.0);
        let label = basis_label(Polarization::F, ModeId::A11, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up);
        assert!((out.amplitude(&label) + C_ONE).norm() < 1e-15);
    }

    #[test]
    fn wfc_attenuation_books_the_removed_mass() {
        let coeffs = EmitterCoeffs {
            r0: Complex64::new(0.0, 0.0),
            rh: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.5, 0.0),
            f: Complex64::new(0.0, 0.0),
        };
        let state = single(Polarization::F, ModeId::A11, SpinZ::Up);
        let out = apply_wfc(&state, ModeId::A11, &coeffs);
        assert!((out.norm_sqr() - 0.25).abs() < 1e-15);
        assert!((out.unheralded_loss() - 0.75).abs() < 1e-15);
        // Off-rail amplitudes untouched.
        let other = single(Polarization::F, ModeId::A1, SpinZ::Up);
        let out = apply_wfc(&other, ModeId::A11, &coeffs);
        let (dev, _) = out.max_deviation(&other);
        assert!(dev < 1e-15);
        assert_eq!(out.unheralded_loss(), 0.0);
    }

    #[test]
    fn qd_scatter_on_plus_spin_matches_the_rule() {
        // F (plus) -> c S (minus) + f F (plus), with generic complex c, f.
        let coeffs = EmitterCoeffs {
            r0: Complex64::new(0.0, 0.0),
            rh: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.3, -0.4),
            f: Complex64::new(-0.2, 0.6),
        };
        let half = FRAC_1_SQRT_2;
        let plus = SparseState::from_terms([
            (
                basis_label(Polarization::F, ModeId::A12, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up),
                Complex64::new(half, 0.0),
            ),
            (
                basis_label(Polarization::F, ModeId::A12, Polarization::F, ModeId::B1, SpinZ::Down, SpinZ::Up),
                Complex64::new(half, 0.0),
            ),
        ]);
        let out = apply_qd_scatter(&plus, ModeId::A12, SpinIndex::One, &coeffs);
        // Expected: c * S (minus) + f * F (plus) expanded in up/down.
        let expect = SparseState::from_terms([
            (
                basis_label(Polarization::S, ModeId::A12, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up),
                coeffs.c * half,
            ),
            (
                basis_label(Polarization::S, ModeId::A12, Polarization::F, ModeId::B1, SpinZ::Down, SpinZ::Up),
                -coeffs.c * half,
            ),
            (
                basis_label(Polarization::F, ModeId::A12, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up),
                coeffs.f * half,
            ),
            (
                basis_label(Polarization::F, ModeId::A12, Polarization::F, ModeId::B1, SpinZ::Down, SpinZ::Up),
                coeffs.f * half,
            ),
        ]);
        let (dev, at) = out.max_deviation(&expect);
        assert!(dev < 1e-15, "deviation {dev} at {at:?}");
    }

    #[test]
    fn ideal_qd_scatter_flips_polarization_with_spin_dependent_sign() {
        // With c = -1, f = 0 the storage-basis action is diagonal in spin:
        // F up -> -S up, F down -> +S down.
        let coeffs = ideal_coeffs();
        let up = single(Polarization::F, ModeId::A12, SpinZ::Up);
        let out = apply_qd_scatter(&up, ModeId::A12, SpinIndex::One, &coeffs);
        let s_up = basis_label(Polarization::S, ModeId::A12, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up);
        assert!((out.amplitude(&s_up) + C_ONE).norm() < 1e-15);
        assert_eq!(out.len(), 1);

        let down = single(Polarization::F, ModeId::A12, SpinZ::Down);
        let out = apply_qd_scatter(&down, ModeId::A12, SpinIndex::One, &coeffs);
        let s_down = s_up.with_spin(SpinIndex::One, SpinZ::Down);
        assert!((out.amplitude(&s_down) - C_ONE).norm() < 1e-15);
    }

    #[test]
    fn transparent_emitter_is_the_identity() {
        let coeffs = EmitterCoeffs::from_reflections(
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            1.0,
        );
        // c = 0, f = 1.
        assert!(coeffs.c.norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let state = random_state(&mut rng, 10);
        let out = apply_qd_scatter(&state, ModeId::A12, SpinIndex::One, &coeffs);
        let (dev, _) = out.max_deviation(&state);
        assert!(dev < 1e-12);
        assert!(out.unheralded_loss().abs() < 1e-12);
    }

    #[test]
    fn unitary_limit_scatter_preserves_norm_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..25 {
            let r0 = Complex64::from_polar(1.0, rng.gen_range(-3.1..3.1));
            let rh = Complex64::from_polar(1.0, rng.gen_range(-3.1..3.1));
            let coeffs = EmitterCoeffs::from_reflections(r0, rh, 1.0);
            let state = random_state(&mut rng, 14);
            let out = apply_qd_scatter(&state, ModeId::A21, SpinIndex::One, &coeffs);
            assert!((out.norm_sqr() - state.norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn scatter_books_the_signed_mass_change() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..25 {
            let r0 = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.4..0.4));
            let rh = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-0.4..0.4));
            let coeffs = EmitterCoeffs::from_reflections(r0, rh, rng.gen_range(0.3..1.0));
            let state = random_state(&mut rng, 14);
            let out = apply_qd_scatter(&state, ModeId::A12, SpinIndex::Two, &coeffs);
            let books = out.norm_sqr() + out.unheralded_loss();
            assert!((books - state.norm_sqr()).abs() < 1e-12);
        }
    }

    #[test]
    fn elements_are_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let coeffs = EmitterCoeffs::from_reflections(
            Complex64::new(-0.8, 0.1),
            Complex64::new(0.6, -0.3),
            0.85,
        );
        let steps = [
            ElementStep::Pbs { ins: [ModeId::A1, ModeId::A2], outs: [ModeId::A11, ModeId::A12] },
            ElementStep::PbsSplit { input: ModeId::A2, transmit: ModeId::A22, reflect: ModeId::A21 },
            ElementStep::Hwp { mode: ModeId::A12 },
            ElementStep::Wfc { mode: ModeId::A11 },
            ElementStep::QdScatter { mode: ModeId::A12, spin: SpinIndex::One },
            ElementStep::SpinHadamard { spin: SpinIndex::Two },
        ];
        for step in steps {
            let psi = random_state(&mut rng, 10);
            let phi = random_state(&mut rng, 10);
            let x = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let y = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let combo = SparseState::from_terms(
                psi.scaled(x)
                    .iter()
                    .chain(phi.scaled(y).iter())
                    .map(|(l, a)| (*l, *a)),
            );
            let lhs = apply_element(&combo, &step, &coeffs).unwrap();
            let rhs_a = apply_element(&psi, &step, &coeffs).unwrap().scaled(x);
            let rhs_b = apply_element(&phi, &step, &coeffs).unwrap().scaled(y);
            let rhs = SparseState::from_terms(
                rhs_a.iter().chain(rhs_b.iter()).map(|(l, a)| (*l, *a)),
            );
            let (dev, at) = lhs.max_deviation(&rhs);
            assert!(dev < 1e-12, "step {step:?}: deviation {dev} at {at:?}");
        }
    }

    #[test]
    fn norm_preserving_elements_preserve_norm_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..20 {
            let state = random_state(&mut rng, 16);
            let n0 = state.norm_sqr();
            let pbs = apply_pbs(&state, [ModeId::A1, ModeId::A2], [ModeId::A11, ModeId::A12]).unwrap();
            assert!((pbs.norm_sqr() - n0).abs() < 1e-15);
            let hwp = apply_hwp(&state, ModeId::A2);
            assert!((hwp.norm_sqr() - n0).abs() < 1e-15);
            let had = apply_spin_hadamard(&state, SpinIndex::One);
            assert!((had.norm_sqr() - n0).abs() < 1e-13);
            for outcome in SPIN_OUTCOMES {
                let ff = apply_feed_forward(&state, outcome);
                assert!((ff.norm_sqr() - n0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn spin_hadamard_maps_up_to_plus_and_squares_to_identity() {
        let state = single(Polarization::F, ModeId::A1, SpinZ::Up);
        let rotated = apply_spin_hadamard(&state, SpinIndex::One);
        let up = basis_label(Polarization::F, ModeId::A1, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up);
        let down = up.with_spin(SpinIndex::One, SpinZ::Down);
        assert!((rotated.amplitude(&up) - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((rotated.amplitude(&down) - Complex64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let state = random_state(&mut rng, 12);
        let twice = apply_spin_hadamard(&apply_spin_hadamard(&state, SpinIndex::Two), SpinIndex::Two);
        let (dev, _) = twice.max_deviation(&state);
        assert!(dev < 1e-15);
    }

    #[test]
    fn detection_without_detector_amplitude_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let state = random_state(&mut rng, 12);
        let (out, removed) = detect_and_postselect(&state, &[ModeId::AD1, ModeId::AD2, ModeId::AD3]);
        let (dev, _) = out.max_deviation(&state);
        assert!(dev < 1e-15);
        assert!(removed.values().all(|m| *m == 0.0));
    }

    #[test]
    fn detection_balances_surviving_norm_and_removed_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let state = SparseState::from_terms([
            (
                basis_label(Polarization::F, ModeId::AD1, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up),
                Complex64::new(rng.gen_range(0.1..0.5), 0.2),
            ),
            (
                basis_label(Polarization::S, ModeId::AD3, Polarization::F, ModeId::B1, SpinZ::Down, SpinZ::Up),
                Complex64::new(0.3, -0.1),
            ),
            (
                basis_label(Polarization::F, ModeId::A1, Polarization::S, ModeId::BD2, SpinZ::Up, SpinZ::Up),
                Complex64::new(-0.2, 0.4),
            ),
            (
                basis_label(Polarization::F, ModeId::A1, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up),
                Complex64::new(0.5, 0.5),
            ),
        ]);
        let detectors = [ModeId::AD1, ModeId::AD2, ModeId::AD3, ModeId::BD1, ModeId::BD2, ModeId::BD3];
        let (out, removed) = detect_and_postselect(&state, &detectors);
        let removed_total: f64 = removed.values().sum();
        assert!((out.norm_sqr() + removed_total - state.norm_sqr()).abs() < 1e-12);
        assert!((out.total_heralded_loss() - removed_total).abs() < 1e-15);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn measuring_plus_plus_product_state_yields_one_branch() {
        let state = make_input_state(
            (C_ONE, Complex64::new(0.0, 0.0)),
            (C_ONE, Complex64::new(0.0, 0.0)),
            (C_ONE, Complex64::new(0.0, 0.0)),
            (C_ONE, Complex64::new(0.0, 0.0)),
        )
        .unwrap();
        let branches = measure_spins(&state).unwrap();
        assert!((branches[0].probability - 1.0).abs() < 1e-12);
        for b in &branches[1..] {
            assert!(b.probability < 1e-12);
        }
        // Conditional state is the bare photon label.
        assert_eq!(branches[0].state.len(), 1);
    }

    #[test]
    fn up_tensor_plus_measures_half_half_on_spin_one() {
        let half = FRAC_1_SQRT_2;
        let base = basis_label(Polarization::F, ModeId::A1, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up);
        let state = SparseState::from_terms([
            (base, Complex64::new(half, 0.0)),
            (base.with_spin(SpinIndex::Two, SpinZ::Down), Complex64::new(half, 0.0)),
        ]);
        let branches = measure_spins(&state).unwrap();
        let by_outcome: BTreeMap<_, _> = branches.iter().map(|b| (b.outcome, b.probability)).collect();
        assert!((by_outcome[&(SpinPm::Plus, SpinPm::Plus)] - 0.5).abs() < 1e-12);
        assert!((by_outcome[&(SpinPm::Minus, SpinPm::Plus)] - 0.5).abs() < 1e-12);
        assert!(by_outcome[&(SpinPm::Plus, SpinPm::Minus)] < 1e-12);
        assert!(by_outcome[&(SpinPm::Minus, SpinPm::Minus)] < 1e-12);
    }

    #[test]
    fn branch_probabilities_sum_to_one_for_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let state = random_state(&mut rng, 15);
            let branches = measure_spins(&state).unwrap();
            let total: f64 = branches.iter().map(|b| b.probability).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn measuring_empty_state_fails() {
        assert_eq!(measure_spins(&SparseState::new()).unwrap_err(), OpticsError::ZeroNormState);
    }

    #[test]
    fn feed_forward_table_and_involution() {
        let mk = |pol_c, spat_c| {
            SparseState::from_terms([(
                basis_label(pol_c, spat_c, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up),
                C_ONE,
            )])
        };
        // Plus/plus leaves everything alone.
        let s = mk(Polarization::S, ModeId::A2);
        let out = apply_feed_forward(&s, (SpinPm::Plus, SpinPm::Plus));
        let (dev, _) = out.max_deviation(&s);
        assert!(dev < 1e-15);
        // Minus on spin one negates S-polarized control amplitudes.
        let out = apply_feed_forward(&mk(Polarization::S, ModeId::A1), (SpinPm::Minus, SpinPm::Plus));
        let label = basis_label(Polarization::S, ModeId::A1, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up);
        assert!((out.amplitude(&label) + C_ONE).norm() < 1e-15);
        let untouched = apply_feed_forward(&mk(Polarization::F, ModeId::A1), (SpinPm::Minus, SpinPm::Plus));
        let label = basis_label(Polarization::F, ModeId::A1, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up);
        assert!((untouched.amplitude(&label) - C_ONE).norm() < 1e-15);
        // Minus on spin two negates second-rail control amplitudes.
        let out = apply_feed_forward(&mk(Polarization::F, ModeId::A2), (SpinPm::Plus, SpinPm::Minus));
        let label = basis_label(Polarization::F, ModeId::A2, Polarization::F, ModeId::B1, SpinZ::Up, SpinZ::Up);
        assert!((out.amplitude(&label) + C_ONE).norm() < 1e-15);
        // Every correction squares to the identity.
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let state = random_state(&mut rng, 12);
        for outcome in SPIN_OUTCOMES {
            let twice = apply_feed_forward(&apply_feed_forward(&state, outcome), outcome);
            let (dev, _) = twice.max_deviation(&state);
            assert!(dev < 1e-15);
        }
    }
}

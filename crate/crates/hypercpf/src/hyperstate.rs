//! Sparse complex amplitude vectors over the joint photon-photon-spin basis.
//!
//! A basis label fixes the polarization and spatial mode of the control and
//! target photons plus the two emitter spins. States are possibly
//! sub-normalized: probability removed by detectors and by attenuation is
//! tracked in explicit ledgers so post-selection probabilities stay readable
//! from the raw norm.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative zero threshold: amplitudes smaller than this fraction of the
/// largest stored amplitude are dropped from the table. Keeping the floor
/// relative preserves the term structure of strongly sub-normalized states
/// (post-selected amplitudes scale with the fourth power of the success
/// coefficient) while still erasing cancellation residue.
pub const AMPLITUDE_FLOOR: f64 = 1e-15;

/// Tolerance on `|x1|^2 + |x2|^2 - 1` for input amplitude pairs.
pub const PAIR_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("input pair `{which}` is not normalized: |x1|^2 + |x2|^2 = {norm_sqr}")]
    UnnormalizedPair { which: &'static str, norm_sqr: f64 },
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("label field `{field}` expects a {expected}-pass mode, got `{mode}`")]
    SlotMismatch {
        field: &'static str,
        expected: PhotonSlot,
        mode: ModeId,
    },
}

/// Linear polarization of a photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    /// "Fast" linear polarization; the PBS-transmitted one. Equal-weight sum
    /// of the two circular polarizations.
    F,
    /// "Slow" linear polarization; the PBS-reflected one. Equal-weight
    /// difference of the two circular polarizations.
    S,
}

impl Polarization {
    pub fn flipped(self) -> Self {
        match self {
            Polarization::F => Polarization::S,
            Polarization::S => Polarization::F,
        }
    }
}

/// Emitter spin in the storage (z) basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpinZ {
    #[serde(rename = "up")]
    Up,
    #[serde(rename = "down")]
    Down,
}

/// Emitter spin in the superposition (x) basis, used by scattering rules and
/// by the final spin measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpinPm {
    #[serde(rename = "plus")]
    Plus,
    #[serde(rename = "minus")]
    Minus,
}

/// Real overlap between a superposition-basis and a storage-basis spin state.
///
/// `plus = (up + down)/sqrt(2)`, `minus = (up - down)/sqrt(2)`; the
/// change of basis is involutive.
pub fn spin_overlap(pm: SpinPm, z: SpinZ) -> f64 {
    match (pm, z) {
        (SpinPm::Minus, SpinZ::Down) => -FRAC_1_SQRT_2,
        _ => FRAC_1_SQRT_2,
    }
}

/// Which photon pass a mode or an operation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PhotonSlot {
    #[serde(rename = "control")]
    Control,
    #[serde(rename = "target")]
    Target,
}

impl fmt::Display for PhotonSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhotonSlot::Control => write!(f, "control"),
            PhotonSlot::Target => write!(f, "target"),
        }
    }
}

/// Which emitter spin an operation addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpinIndex {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

/// Spatial rail labels of the optical network: nine per photon pass.
///
/// `A1`/`A2` (`B1`/`B2`) are the input/output rails of the control (target)
/// pass, the four-digit rails are the internal splitter arms, and the `D`
/// rails terminate on single-photon detectors. The set is closed, so every
/// label a state can carry is automatically part of the mode graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModeId {
    #[serde(rename = "a1")]
    A1,
    #[serde(rename = "a2")]
    A2,
    #[serde(rename = "a11")]
    A11,
    #[serde(rename = "a12")]
    A12,
    #[serde(rename = "a21")]
    A21,
    #[serde(rename = "a22")]
    A22,
    #[serde(rename = "aD1")]
    AD1,
    #[serde(rename = "aD2")]
    AD2,
    #[serde(rename = "aD3")]
    AD3,
    #[serde(rename = "b1")]
    B1,
    #[serde(rename = "b2")]
    B2,
    #[serde(rename = "b11")]
    B11,
    #[serde(rename = "b12")]
    B12,
    #[serde(rename = "b21")]
    B21,
    #[serde(rename = "b22")]
    B22,
    #[serde(rename = "bD1")]
    BD1,
    #[serde(rename = "bD2")]
    BD2,
    #[serde(rename = "bD3")]
    BD3,
}

impl ModeId {
    pub const ALL: [ModeId; 18] = [
        ModeId::A1,
        ModeId::A2,
        ModeId::A11,
        ModeId::A12,
        ModeId::A21,
        ModeId::A22,
        ModeId::AD1,
        ModeId::AD2,
        ModeId::AD3,
        ModeId::B1,
        ModeId::B2,
        ModeId::B11,
        ModeId::B12,
        ModeId::B21,
        ModeId::B22,
        ModeId::BD1,
        ModeId::BD2,
        ModeId::BD3,
    ];

    /// Rail position within one pass, 0..9, shared between mirrored modes.
    pub fn rail_index(self) -> usize {
        (self as usize) % 9
    }

    pub fn slot(self) -> PhotonSlot {
        if (self as usize) < 9 {
            PhotonSlot::Control
        } else {
            PhotonSlot::Target
        }
    }

    pub fn is_detector(self) -> bool {
        matches!(
            self,
            ModeId::AD1 | ModeId::AD2 | ModeId::AD3 | ModeId::BD1 | ModeId::BD2 | ModeId::BD3
        )
    }

    /// The same rail in the other pass (`a` names swap with `b` names).
    pub fn mirror(self) -> ModeId {
        let idx = (self as usize + 9) % 18;
        ModeId::ALL[idx]
    }

    /// The nine rails belonging to one pass, in declaration order.
    pub fn rails(slot: PhotonSlot) -> [ModeId; 9] {
        let base = match slot {
            PhotonSlot::Control => 0,
            PhotonSlot::Target => 9,
        };
        std::array::from_fn(|i| ModeId::ALL[base + i])
    }

    /// The three detector rails of one pass.
    pub fn detectors(slot: PhotonSlot) -> [ModeId; 3] {
        match slot {
            PhotonSlot::Control => [ModeId::AD1, ModeId::AD2, ModeId::AD3],
            PhotonSlot::Target => [ModeId::BD1, ModeId::BD2, ModeId::BD3],
        }
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ModeId::A1 => "a1",
            ModeId::A2 => "a2",
            ModeId::A11 => "a11",
            ModeId::A12 => "a12",
            ModeId::A21 => "a21",
            ModeId::A22 => "a22",
            ModeId::AD1 => "aD1",
            ModeId::AD2 => "aD2",
            ModeId::AD3 => "aD3",
            ModeId::B1 => "b1",
            ModeId::B2 => "b2",
            ModeId::B11 => "b11",
            ModeId::B12 => "b12",
            ModeId::B21 => "b21",
            ModeId::B22 => "b22",
            ModeId::BD1 => "bD1",
            ModeId::BD2 => "bD2",
            ModeId::BD3 => "bD3",
        };
        write!(f, "{name}")
    }
}

/// One basis label of the joint system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HyperBasisLabel {
    pub pol_c: Polarization,
    pub spat_c: ModeId,
    pub pol_t: Polarization,
    pub spat_t: ModeId,
    pub spin1: SpinZ,
    pub spin2: SpinZ,
}

impl HyperBasisLabel {
    /// Builds a label, checking that the control spatial mode is an `a` rail
    /// and the target spatial mode a `b` rail.
    pub fn new(
        pol_c: Polarization,
        spat_c: ModeId,
        pol_t: Polarization,
        spat_t: ModeId,
        spin1: SpinZ,
        spin2: SpinZ,
    ) -> Result<Self, StateError> {
        if spat_c.slot() != PhotonSlot::Control {
            return Err(StateError::SlotMismatch {
                field: "spat_c",
                expected: PhotonSlot::Control,
                mode: spat_c,
            });
        }
        if spat_t.slot() != PhotonSlot::Target {
            return Err(StateError::SlotMismatch {
                field: "spat_t",
                expected: PhotonSlot::Target,
                mode: spat_t,
            });
        }
        Ok(Self {
            pol_c,
            spat_c,
            pol_t,
            spat_t,
            spin1,
            spin2,
        })
    }

    /// Polarization of the photon in the given slot.
    pub fn pol(&self, slot: PhotonSlot) -> Polarization {
        match slot {
            PhotonSlot::Control => self.pol_c,
            PhotonSlot::Target => self.pol_t,
        }
    }

    /// Spatial mode of the photon in the given slot.
    pub fn spat(&self, slot: PhotonSlot) -> ModeId {
        match slot {
            PhotonSlot::Control => self.spat_c,
            PhotonSlot::Target => self.spat_t,
        }
    }

    pub fn spin(&self, index: SpinIndex) -> SpinZ {
        match index {
            SpinIndex::One => self.spin1,
            SpinIndex::Two => self.spin2,
        }
    }

    pub fn with_pol(mut self, slot: PhotonSlot, pol: Polarization) -> Self {
        match slot {
            PhotonSlot::Control => self.pol_c = pol,
            PhotonSlot::Target => self.pol_t = pol,
        }
        self
    }

    pub fn with_spat(mut self, slot: PhotonSlot, mode: ModeId) -> Self {
        debug_assert_eq!(mode.slot(), slot);
        match slot {
            PhotonSlot::Control => self.spat_c = mode,
            PhotonSlot::Target => self.spat_t = mode,
        }
        self
    }

    pub fn with_spin(mut self, index: SpinIndex, spin: SpinZ) -> Self {
        match index {
            SpinIndex::One => self.spin1 = spin,
            SpinIndex::Two => self.spin2 = spin,
        }
        self
    }
}

impl fmt::Display for HyperBasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pol = |p: Polarization| match p {
            Polarization::F => "F",
            Polarization::S => "S",
        };
        let spin = |s: SpinZ| match s {
            SpinZ::Up => "up",
            SpinZ::Down => "down",
        };
        write!(
            f,
            "|{},{};{},{};{},{}>",
            pol(self.pol_c),
            self.spat_c,
            pol(self.pol_t),
            self.spat_t,
            spin(self.spin1),
            spin(self.spin2)
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct AmplitudeRecord {
    pol_c: Polarization,
    spat_c: ModeId,
    pol_t: Polarization,
    spat_t: ModeId,
    spin1: SpinZ,
    spin2: SpinZ,
    re: f64,
    im: f64,
}

/// Sparse, possibly sub-normalized state over [`HyperBasisLabel`]s.
///
/// The squared norm plus the two loss ledgers stays equal to the input norm
/// throughout the circuit. Values are immutable from the caller's point of
/// view: optical elements consume a reference and produce a new state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseState {
    amps: BTreeMap<HyperBasisLabel, Complex64>,
    unheralded_loss: f64,
    heralded_loss: BTreeMap<ModeId, f64>,
}

impl SparseState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Accumulates `(label, amplitude)` terms into a state, merging duplicate
    /// labels and dropping entries below the relative [`AMPLITUDE_FLOOR`].
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (HyperBasisLabel, Complex64)>,
    {
        let mut state = Self::new();
        for (label, amp) in terms {
            state.add(label, amp);
        }
        state.prune();
        state
    }

    pub(crate) fn add(&mut self, label: HyperBasisLabel, amp: Complex64) {
        let entry = self.amps.entry(label).or_insert(Complex64::new(0.0, 0.0));
        *entry += amp;
    }

    pub(crate) fn prune(&mut self) {
        let peak = self
            .amps
            .values()
            .map(|a| a.norm())
            .fold(0.0f64, f64::max);
        if peak == 0.0 {
            self.amps.clear();
            return;
        }
        let floor = AMPLITUDE_FLOOR * peak;
        self.amps.retain(|_, amp| amp.norm() >= floor);
    }

    pub(crate) fn add_unheralded_loss(&mut self, mass: f64) {
        self.unheralded_loss += mass;
    }

    pub(crate) fn add_heralded_loss(&mut self, detector: ModeId, mass: f64) {
        *self.heralded_loss.entry(detector).or_insert(0.0) += mass;
    }

    /// Replaces the amplitude table, keeping the ledgers.
    pub(crate) fn replace_amplitudes(&mut self, amps: BTreeMap<HyperBasisLabel, Complex64>) {
        self.amps = amps;
        self.prune();
    }

    pub fn amplitude(&self, label: &HyperBasisLabel) -> Complex64 {
        self.amps
            .get(label)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HyperBasisLabel, &Complex64)> {
        self.amps.iter()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Probability accumulated on detectors, per detector rail.
    pub fn heralded_loss(&self) -> &BTreeMap<ModeId, f64> {
        &self.heralded_loss
    }

    pub fn total_heralded_loss(&self) -> f64 {
        self.heralded_loss.values().sum()
    }

    /// Probability removed by attenuation and incomplete scattering.
    pub fn unheralded_loss(&self) -> f64 {
        self.unheralded_loss
    }

    /// Returns the state scaled by a complex factor. Ledgers are kept.
    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for amp in out.amps.values_mut() {
            *amp *= factor;
        }
        out.prune();
        out
    }

    /// Unit-norm copy of this state with the ledgers cleared.
    pub fn normalized(&self) -> Result<Self, StateError> {
        let norm = self.norm_sqr().sqrt();
        if norm <= 0.0 {
            return Err(StateError::ZeroNorm);
        }
        let mut out = self.scaled(Complex64::new(1.0 / norm, 0.0));
        out.unheralded_loss = 0.0;
        out.heralded_loss.clear();
        Ok(out)
    }

    /// Largest absolute amplitude difference against another state, together
    /// with the label where it occurs.
    pub fn max_deviation(&self, other: &SparseState) -> (f64, Option<HyperBasisLabel>) {
        let mut worst = 0.0f64;
        let mut at = None;
        for (label, amp) in self.amps.iter() {
            let d = (amp - other.amplitude(label)).norm();
            if d > worst {
                worst = d;
                at = Some(*label);
            }
        }
        for (label, amp) in other.amps.iter() {
            if !self.amps.contains_key(label) {
                let d = amp.norm();
                if d > worst {
                    worst = d;
                    at = Some(*label);
                }
            }
        }
        (worst, at)
    }
}

impl Serialize for SparseState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            amplitudes: Vec<AmplitudeRecord>,
            unheralded_loss: f64,
            heralded_loss: &'a BTreeMap<ModeId, f64>,
        }
        let amplitudes = self
            .amps
            .iter()
            .map(|(l, a)| AmplitudeRecord {
                pol_c: l.pol_c,
                spat_c: l.spat_c,
                pol_t: l.pol_t,
                spat_t: l.spat_t,
                spin1: l.spin1,
                spin2: l.spin2,
                re: a.re,
                im: a.im,
            })
            .collect();
        Repr {
            amplitudes,
            unheralded_loss: self.unheralded_loss,
            heralded_loss: &self.heralded_loss,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SparseState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            amplitudes: Vec<AmplitudeRecord>,
            #[serde(default)]
            unheralded_loss: f64,
            #[serde(default)]
            heralded_loss: BTreeMap<ModeId, f64>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let mut state = SparseState::new();
        for r in repr.amplitudes {
            let label = HyperBasisLabel::new(r.pol_c, r.spat_c, r.pol_t, r.spat_t, r.spin1, r.spin2)
                .map_err(serde::de::Error::custom)?;
            state.add(label, Complex64::new(r.re, r.im));
        }
        state.prune();
        state.unheralded_loss = repr.unheralded_loss;
        state.heralded_loss = repr.heralded_loss;
        Ok(state)
    }
}

fn check_pair(which: &'static str, pair: (Complex64, Complex64)) -> Result<(), StateError> {
    let norm_sqr = pair.0.norm_sqr() + pair.1.norm_sqr();
    if (norm_sqr - 1.0).abs() > PAIR_NORM_TOL {
        return Err(StateError::UnnormalizedPair { which, norm_sqr });
    }
    Ok(())
}

/// Photon-only part of the standard input: the 16-term product
/// `(alpha.0 F + alpha.1 S)(beta.0 a1 + beta.1 a2)` for the control photon
/// times the analogous target factor, with both spins pinned to `up`.
///
/// Pinning both spins to `up` is the crate-wide embedding for states whose
/// spin factor has been removed.
pub fn make_photon_input(
    alpha: (Complex64, Complex64),
    beta: (Complex64, Complex64),
    lambda: (Complex64, Complex64),
    varpi: (Complex64, Complex64),
) -> Result<SparseState, StateError> {
    check_pair("alpha", alpha)?;
    check_pair("beta", beta)?;
    check_pair("lambda", lambda)?;
    check_pair("varpi", varpi)?;
    let pols = [(Polarization::F, 0usize), (Polarization::S, 1usize)];
    let spat_c = [(ModeId::A1, 0usize), (ModeId::A2, 1usize)];
    let spat_t = [(ModeId::B1, 0usize), (ModeId::B2, 1usize)];
    let pick = |pair: (Complex64, Complex64), idx: usize| if idx == 0 { pair.0 } else { pair.1 };
    let mut terms = Vec::with_capacity(16);
    for (pc, ai) in pols {
        for (sc, bi) in spat_c {
            for (pt, li) in pols {
                for (st, vi) in spat_t {
                    let amp = pick(alpha, ai) * pick(beta, bi) * pick(lambda, li) * pick(varpi, vi);
                    let label = HyperBasisLabel::new(pc, sc, pt, st, SpinZ::Up, SpinZ::Up)
                        .expect("boundary modes are slot-correct");
                    terms.push((label, amp));
                }
            }
        }
    }
    Ok(SparseState::from_terms(terms))
}

/// Full input state of one gate run: the photon product state joined with
/// both emitter spins prepared in `plus`, expanded in the storage basis.
pub fn make_input_state(
    alpha: (Complex64, Complex64),
    beta: (Complex64, Complex64),
    lambda: (Complex64, Complex64),
    varpi: (Complex64, Complex64),
) -> Result<SparseState, StateError> {
    let photons = make_photon_input(alpha, beta, lambda, varpi)?;
    let mut terms = Vec::with_capacity(photons.len() * 4);
    for (label, amp) in photons.iter() {
        for s1 in [SpinZ::Up, SpinZ::Down] {
            for s2 in [SpinZ::Up, SpinZ::Down] {
                let l = label.with_spin(SpinIndex::One, s1).with_spin(SpinIndex::Two, s2);
                terms.push((l, amp * 0.5));
            }
        }
    }
    Ok(SparseState::from_terms(terms))
}

/// The four normalized amplitude pairs defining a product input: control
/// polarization, control spatial, target polarization, target spatial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputPairs {
    pub alpha: (Complex64, Complex64),
    pub beta: (Complex64, Complex64),
    pub lambda: (Complex64, Complex64),
    pub varpi: (Complex64, Complex64),
}

impl InputPairs {
    /// Both photons on the first rail with F polarization.
    pub fn basis() -> Self {
        let one = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self {
            alpha: one,
            beta: one,
            lambda: one,
            varpi: one,
        }
    }

    /// Haar-ish random pairs drawn from the given generator.
    pub fn random<R: rand::Rng>(rng: &mut R) -> Self {
        Self {
            alpha: random_unit_pair(rng),
            beta: random_unit_pair(rng),
            lambda: random_unit_pair(rng),
            varpi: random_unit_pair(rng),
        }
    }

    /// Full input state including the spin factor.
    pub fn state(&self) -> Result<SparseState, StateError> {
        make_input_state(self.alpha, self.beta, self.lambda, self.varpi)
    }

    /// Photon-only product state with the spins pinned to `up`.
    pub fn photon_state(&self) -> Result<SparseState, StateError> {
        make_photon_input(self.alpha, self.beta, self.lambda, self.varpi)
    }
}

/// Draws a random normalized complex pair.
pub fn random_unit_pair<R: rand::Rng>(rng: &mut R) -> (Complex64, Complex64) {
    loop {
        let raw = (
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
        let norm = (raw.0.norm_sqr() + raw.1.norm_sqr()).sqrt();
        if norm > 1e-3 {
            return (raw.0 / norm, raw.1 / norm);
        }
    }
}

/// Inner product, conjugate-linear in the first argument.
pub fn inner_product(a: &SparseState, b: &SparseState) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (label, amp) in a.iter() {
        acc += amp.conj() * b.amplitude(label);
    }
    acc
}

/// Modulus of the overlap between the two states after normalizing both.
///
/// Invariant under multiplying either argument by any nonzero complex scalar;
/// a zero-norm argument is an error, distinct from an overlap of zero.
pub fn fidelity(real_state: &SparseState, ideal_state: &SparseState) -> Result<f64, StateError> {
    let real_norm = real_state.norm_sqr().sqrt();
    let ideal_norm = ideal_state.norm_sqr().sqrt();
    if real_norm <= 0.0 || ideal_norm <= 0.0 {
        return Err(StateError::ZeroNorm);
    }
    Ok(inner_product(real_state, ideal_state).norm() / (real_norm * ideal_norm))
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use rand::Rng;

    pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
    pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

    pub fn unit_pair<R: Rng>(rng: &mut R) -> (Complex64, Complex64) {
        super::random_unit_pair(rng)
    }

    pub fn basis_label(
        pol_c: Polarization,
        spat_c: ModeId,
        pol_t: Polarization,
        spat_t: ModeId,
        spin1: SpinZ,
        spin2: SpinZ,
    ) -> HyperBasisLabel {
        HyperBasisLabel::new(pol_c, spat_c, pol_t, spat_t, spin1, spin2).unwrap()
    }
}

//! Eavesdropper taps applied while the controller routes qubits, and a
//! Monte Carlo harness for the resulting check error rates.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::{Channel, ProtocolError, RunConfig, Session, Verdict};
use crate::qcore::{Basis, NORM_TOLERANCE};
use crate::stats::{RateEstimate, DEFAULT_Z};
use crate::PartyRole;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    #[default]
    None,
    InterceptResend,
    ControlledNot,
    EntangleMeasure,
}

/// Which routing lines Eve sits on. `Both` means every line, including
/// Elena's in the network scenario.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetLine {
    Alice,
    #[default]
    Bob,
    Both,
}

impl TargetLine {
    pub fn covers(self, party: PartyRole) -> bool {
        match self {
            TargetLine::Alice => party == PartyRole::Alice,
            TargetLine::Bob => party == PartyRole::Bob,
            TargetLine::Both => party != PartyRole::Controller,
        }
    }
}

/// Basis Eve measures in for intercept-resend.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResendBasis {
    #[default]
    Random,
    Z,
    X,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AdversaryError {
    #[error("|alpha|² + |beta|² = {0}, expected 1")]
    NotNormalized(f64),
    #[error("|beta|² = {0} is outside [0, 1]")]
    Beta2OutOfRange(f64),
}

/// Eve's strategy. `alpha` and `beta` only matter for `EntangleMeasure`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackModel {
    pub kind: AttackKind,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub target: TargetLine,
    pub resend: ResendBasis,
}

impl Default for AttackModel {
    fn default() -> Self {
        Self::none()
    }
}

impl AttackModel {
    pub fn none() -> Self {
        AttackModel {
            kind: AttackKind::None,
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
            target: TargetLine::default(),
            resend: ResendBasis::Random,
        }
    }

    pub fn intercept_resend(target: TargetLine) -> Self {
        AttackModel {
            kind: AttackKind::InterceptResend,
            target,
            ..Self::none()
        }
    }

    pub fn controlled_not(target: TargetLine) -> Self {
        AttackModel {
            kind: AttackKind::ControlledNot,
            target,
            ..Self::none()
        }
    }

    pub fn entangle_measure(
        alpha: Complex64,
        beta: Complex64,
        target: TargetLine,
    ) -> Result<Self, AdversaryError> {
        let model = AttackModel {
            kind: AttackKind::EntangleMeasure,
            alpha,
            beta,
            target,
            resend: ResendBasis::Random,
        };
        model.validate()?;
        Ok(model)
    }

    /// Entangle-measure with real `beta = √beta2`, `alpha = √(1 − beta2)`.
    pub fn entangle_measure_beta2(beta2: f64, target: TargetLine) -> Result<Self, AdversaryError> {
        if !(0.0..=1.0).contains(&beta2) {
            return Err(AdversaryError::Beta2OutOfRange(beta2));
        }
        Self::entangle_measure(
            Complex64::new(libm::sqrt(1.0 - beta2), 0.0),
            Complex64::new(libm::sqrt(beta2), 0.0),
            target,
        )
    }

    pub fn validate(&self) -> Result<(), AdversaryError> {
        if self.kind == AttackKind::EntangleMeasure {
            let norm = self.alpha.norm_sqr() + self.beta.norm_sqr();
            if (norm - 1.0).abs() > NORM_TOLERANCE {
                return Err(AdversaryError::NotNormalized(norm));
            }
        }
        Ok(())
    }

    pub fn beta2(&self) -> f64 {
        self.beta.norm_sqr()
    }

    /// Whether qubits routed to `party` pass through Eve.
    pub fn taps(&self, party: PartyRole) -> bool {
        self.kind != AttackKind::None && self.target.covers(party)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveAction {
    InterceptResend { basis: Basis, outcome: bool },
    ControlledNot,
    EntangleMeasure,
}

/// One intercepted qubit. Attacks that keep an ancilla tag it with the same
/// `(state, slot)` as the qubit it is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveEvent {
    pub state: usize,
    pub slot: usize,
    pub action: EveAction,
    pub ancilla: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveRecord {
    pub events: Vec<EveEvent>,
}

/// Eve measures the qubit in Z or X and forwards a fresh qubit in the
/// eigenstate she saw.
pub fn tap_intercept_resend<R: Rng + ?Sized>(
    channel: &mut Channel,
    state: usize,
    slot: usize,
    resend: ResendBasis,
    rng: &mut R,
) -> Result<EveEvent, ProtocolError> {
    let basis = match resend {
        ResendBasis::Z => Basis::Z,
        ResendBasis::X => Basis::X,
        ResendBasis::Random => {
            if rng.gen::<bool>() {
                Basis::X
            } else {
                Basis::Z
            }
        }
    };
    let outcome = channel.measure_and_resend(state, slot, basis, rng)?;
    Ok(EveEvent {
        state,
        slot,
        action: EveAction::InterceptResend { basis, outcome },
        ancilla: false,
    })
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const ZERO: [Complex64; 2] = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];

fn cnot_gate() -> [[Complex64; 4]; 4] {
    [
        [c(1.0), c(0.0), c(0.0), c(0.0)],
        [c(0.0), c(1.0), c(0.0), c(0.0)],
        [c(0.0), c(0.0), c(0.0), c(1.0)],
        [c(0.0), c(0.0), c(1.0), c(0.0)],
    ]
}

/// Eve attaches an ancilla in `|0⟩` and copies the qubit onto it with a
/// controlled-not.
pub fn tap_controlled_not(
    channel: &mut Channel,
    state: usize,
    slot: usize,
) -> Result<EveEvent, ProtocolError> {
    channel.attach_ancilla(state, slot, ZERO, &cnot_gate())?;
    Ok(EveEvent {
        state,
        slot,
        action: EveAction::ControlledNot,
        ancilla: true,
    })
}

/// Gate on (qubit, ancilla) realising `|i⟩|E_0⟩ → α|i⟩|E_0⟩ + β|i⊕1⟩|E_1⟩`
/// with `|E_0⟩ = |0⟩`, `|E_1⟩ = |1⟩`. On a fresh ancilla this is already an
/// isometry; the columns for an ancilla in `|1⟩` only complete the unitary.
pub fn entangle_measure_gate(alpha: Complex64, beta: Complex64) -> [[Complex64; 4]; 4] {
    let z = c(0.0);
    // Columns are inputs |q e⟩ = 00, 01, 10, 11.
    [
        [alpha, -beta.conj(), z, z],
        [z, z, beta, alpha.conj()],
        [z, z, alpha, -beta.conj()],
        [beta, alpha.conj(), z, z],
    ]
}

/// Eve's parametric entangle-and-measure coupling on one qubit.
pub fn tap_entangle_measure(
    channel: &mut Channel,
    state: usize,
    slot: usize,
    alpha: Complex64,
    beta: Complex64,
) -> Result<EveEvent, ProtocolError> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(AdversaryError::NotNormalized(norm).into());
    }
    channel.attach_ancilla(state, slot, ZERO, &entangle_measure_gate(alpha, beta))?;
    Ok(EveEvent {
        state,
        slot,
        action: EveAction::EntangleMeasure,
        ancilla: true,
    })
}

/// Applies `model` to one routed qubit; `None` when the attack is off.
pub fn apply_tap<R: Rng + ?Sized>(
    model: &AttackModel,
    channel: &mut Channel,
    state: usize,
    slot: usize,
    rng: &mut R,
) -> Result<Option<EveEvent>, ProtocolError> {
    let event = match model.kind {
        AttackKind::None => return Ok(None),
        AttackKind::InterceptResend => {
            tap_intercept_resend(channel, state, slot, model.resend, rng)?
        }
        AttackKind::ControlledNot => tap_controlled_not(channel, state, slot)?,
        AttackKind::EntangleMeasure => {
            tap_entangle_measure(channel, state, slot, model.alpha, model.beta)?
        }
    };
    Ok(Some(event))
}

/// Check error statistics gathered over many runs of steps 1 and 2.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionEstimate {
    pub trials: u64,
    pub per_check: RateEstimate,
    pub z_basis: RateEstimate,
    pub x_basis: RateEstimate,
    pub abort: RateEstimate,
}

/// Runs channel distribution and verification `trials` times under
/// `attack` (overriding `cfg.attack`) and reports per-check error rates
/// and the abort probability with Wilson intervals.
pub fn estimate_detection_rate(
    cfg: &RunConfig,
    attack: &AttackModel,
    trials: u64,
) -> Result<DetectionEstimate, ProtocolError> {
    if trials == 0 {
        return Err(ProtocolError::NoTrials);
    }
    let mut cfg = cfg.clone();
    cfg.attack = *attack;
    let mut totals = [0u64; 6];
    let mut aborts = 0;
    for trial in 0..trials {
        let mut session = Session::new(cfg.clone(), trial)?;
        session.step1_distribute()?;
        let verdict = session.step2_verify_channel()?;
        let s = session.check_stats();
        for (t, v) in totals.iter_mut().zip([
            s.errors, s.total, s.z_errors, s.z_checks, s.x_errors, s.x_checks,
        ]) {
            *t += v;
        }
        if matches!(verdict, Verdict::Abort { .. }) {
            aborts += 1;
        }
    }
    let w = |s, n| RateEstimate::wilson(s, n, DEFAULT_Z);
    Ok(DetectionEstimate {
        trials,
        per_check: w(totals[0], totals[1]),
        z_basis: w(totals[2], totals[3]),
        x_basis: w(totals[4], totals[5]),
        abort: w(aborts, trials),
    })
}

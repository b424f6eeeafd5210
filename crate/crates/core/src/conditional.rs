//! Post-selected register dynamics.
//!
//! A mediator prepared in `|i> = c_e|e> + c_g|g>` crosses cavity `a`, then
//! cavity `b`, and is projected onto `|theta, varphi> = cos θ|g> + e^{iφ} sin θ|e>`
//! (positive event) or onto the orthogonal state (negative event). The
//! register is left in `O |psi>` with
//!
//! ```text
//! O = A_b B_a + C_b D_a
//! (B_a, D_a) = U_Aa (c_e, c_g)                    columns of the a-propagator
//! (A_b, C_b) = (μ_e*, μ_g*) U_Ab                   rows of the b-propagator
//! ```
//!
//! where `(μ_e, μ_g)` are the amplitudes of the measured ket. For the
//! default (prepare `|g>`, find `|e>`) this is `U11^b U12^a + U12^b U22^a`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{JointState, TruncationPolicy};
use crate::jc::{JcBlocks, PhaseConvention, VeePropagator, VEE_EA, VEE_EB, VEE_G};
use crate::operator::{Axis, ModeOperator};
use crate::{C64, ZERO_PROBABILITY};

const NORMALIZATION_TOL: f64 = 1e-10;

/// Preparation amplitudes and measurement basis of one mediator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediatorSpec {
    c_g: C64,
    c_e: C64,
    theta: f64,
    varphi: f64,
}

impl Default for MediatorSpec {
    /// Prepared in `|g>`, measured in `|e>`.
    fn default() -> Self {
        Self { c_g: C64::new(1.0, 0.0), c_e: C64::new(0.0, 0.0), theta: FRAC_PI_2, varphi: 0.0 }
    }
}

impl MediatorSpec {
    pub fn new(c_g: C64, c_e: C64, theta: f64, varphi: f64) -> Result<Self> {
        let norm = c_g.norm_sqr() + c_e.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "preparation amplitudes must be normalized, |c_g|^2+|c_e|^2 = {norm}"
            )));
        }
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParameter(format!("theta must lie in [0, pi/2], got {theta}")));
        }
        if !(0.0..2.0 * PI).contains(&varphi) {
            return Err(Error::InvalidParameter(format!("varphi must lie in [0, 2pi), got {varphi}")));
        }
        Ok(Self { c_g, c_e, theta, varphi })
    }

    pub fn c_g(&self) -> C64 {
        self.c_g
    }

    pub fn c_e(&self) -> C64 {
        self.c_e
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn varphi(&self) -> f64 {
        self.varphi
    }

    /// `(c_e, c_g)`.
    pub fn prepared_ket(&self) -> [C64; 2] {
        [self.c_e, self.c_g]
    }

    /// `|theta, varphi>` as `(e, g)` amplitudes.
    pub fn measured_ket(&self) -> [C64; 2] {
        [C64::from_polar(self.theta.sin(), self.varphi), C64::new(self.theta.cos(), 0.0)]
    }

    /// The state orthogonal to [`Self::measured_ket`]; `|g>` for the default.
    pub fn complement_ket(&self) -> [C64; 2] {
        [-C64::from_polar(self.theta.cos(), self.varphi), C64::new(self.theta.sin(), 0.0)]
    }

    pub fn ket_for(&self, outcome: Outcome) -> [C64; 2] {
        match outcome {
            Outcome::Positive => self.measured_ket(),
            Outcome::Negative => self.complement_ket(),
        }
    }
}

/// Result of the mediator measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// Found in the measured state `|theta, varphi>` (`|e>` by default).
    Positive,
    /// Found in the orthogonal state (`|g>` by default).
    Negative,
}

impl Outcome {
    /// `P` or `N`, the letters accepted by [`parse_outcomes`].
    pub fn letter(self) -> char {
        match self {
            Outcome::Positive => 'P',
            Outcome::Negative => 'N',
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Positive => "positive",
            Outcome::Negative => "negative",
        })
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" | "p" | "+" => Ok(Outcome::Positive),
            "negative" | "neg" | "n" | "-" => Ok(Outcome::Negative),
            other => Err(Error::InvalidParameter(format!("unknown outcome {other:?}"))),
        }
    }
}

/// Parse a comma-separated or compact (`"NP"`, `"+-+"`) outcome sequence.
pub fn parse_outcomes(s: &str) -> Result<Vec<Outcome>> {
    let s = s.trim();
    if s.contains(',') {
        return s.split(',').map(str::parse).collect();
    }
    if s.len() > 1 && s.chars().all(|c| matches!(c, 'p' | 'P' | 'n' | 'N' | '+' | '-')) {
        return s.chars().map(|c| c.to_string().parse()).collect();
    }
    Ok(vec![s.parse()?])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PassageOutcome {
    pub outcome: Outcome,
    pub conditional_probability: f64,
}

/// `A_b B_a + C_b D_a`, stored as two (mode-b, mode-a) factor pairs.
#[derive(Clone, Debug)]
pub struct EffectiveOperator {
    terms: [(ModeOperator, ModeOperator); 2],
    tail_tolerance: f64,
}

impl EffectiveOperator {
    /// Sandwich the two propagators between `prepared` and `measured`, both
    /// given as `(e, g)` amplitudes of kets.
    pub fn build(prepared: [C64; 2], measured: [C64; 2], blocks_a: &JcBlocks, blocks_b: &JcBlocks) -> Result<Self> {
        if blocks_a.dim() != blocks_b.dim() {
            return Err(Error::DimensionMismatch { expected: blocks_a.dim(), found: blocks_b.dim() });
        }
        let [c_e, c_g] = prepared;
        let [mu_e, mu_g] = [measured[0].conj(), measured[1].conj()];
        let b_a = ModeOperator::combine(&[(c_e, &blocks_a.u11), (c_g, &blocks_a.u12)]);
        let d_a = ModeOperator::combine(&[(c_e, &blocks_a.u21), (c_g, &blocks_a.u22)]);
        let a_b = ModeOperator::combine(&[(mu_e, &blocks_b.u11), (mu_g, &blocks_b.u21)]);
        let c_b = ModeOperator::combine(&[(mu_e, &blocks_b.u12), (mu_g, &blocks_b.u22)]);
        let tail_tolerance = blocks_a.policy().tail_tolerance().min(blocks_b.policy().tail_tolerance());
        Ok(Self { terms: [(a_b, b_a), (c_b, d_a)], tail_tolerance })
    }

    pub fn for_outcome(spec: &MediatorSpec, outcome: Outcome, blocks_a: &JcBlocks, blocks_b: &JcBlocks) -> Result<Self> {
        Self::build(spec.prepared_ket(), spec.ket_for(outcome), blocks_a, blocks_b)
    }

    pub fn dim(&self) -> usize {
        self.terms[0].0.dim()
    }

    /// `(mode-b factor, mode-a factor)` pairs.
    pub fn terms(&self) -> &[(ModeOperator, ModeOperator); 2] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(b, a)| b.is_zero() || a.is_zero())
    }

    /// Unnormalized image of a coefficient matrix. Fails if more than the
    /// truncation tolerance is pushed past the cutoff.
    pub fn apply(&self, coeffs: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        let dim = self.dim();
        if coeffs.nrows() != dim || coeffs.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: coeffs.nrows() });
        }
        let mut out = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        let mut leaked = 0.0;
        for (op_b, op_a) in &self.terms {
            if op_a.is_zero() || op_b.is_zero() {
                continue;
            }
            let (half, l_a) = op_a.apply(coeffs, Axis::A);
            let (full, l_b) = op_b.apply(&half, Axis::B);
            leaked += l_a + l_b;
            out += full;
        }
        if leaked > self.tail_tolerance {
            return Err(Error::TruncationTooSmall { n_cut: dim - 1, mass: leaked, tolerance: self.tail_tolerance });
        }
        Ok(out)
    }

    /// Dense `dim² × dim²` matrix, register index `n * dim + m`.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d * d, d * d);
        for (op_b, op_a) in &self.terms {
            m += op_a.to_dense().kronecker(&op_b.to_dense());
        }
        m
    }
}

/// Operator for a positive event.
pub fn effective_operator(spec: &MediatorSpec, blocks_a: &JcBlocks, blocks_b: &JcBlocks) -> Result<EffectiveOperator> {
    EffectiveOperator::for_outcome(spec, Outcome::Positive, blocks_a, blocks_b)
}

fn check_normalized(state: &JointState) -> Result<()> {
    if state.is_normalized(NORMALIZATION_TOL) {
        Ok(())
    } else {
        Err(Error::NotNormalized { norm_sq: state.norm_sq() })
    }
}

fn post_select(raw: DMatrix<C64>, outcome: Outcome, passage: usize) -> Result<(JointState, PassageOutcome)> {
    let raw = JointState::from_coeffs(raw);
    let probability = raw.norm_sq();
    if probability < ZERO_PROBABILITY {
        return Err(Error::ZeroProbabilityOutcome { passage, probability });
    }
    let state = raw.normalize()?;
    Ok((state, PassageOutcome { outcome, conditional_probability: probability }))
}

/// One passage with prebuilt blocks for the two cavities.
pub fn apply_passage_with(
    state: &JointState,
    spec: &MediatorSpec,
    blocks_a: &JcBlocks,
    blocks_b: &JcBlocks,
    outcome: Outcome,
) -> Result<(JointState, PassageOutcome)> {
    check_normalized(state)?;
    let op = EffectiveOperator::for_outcome(spec, outcome, blocks_a, blocks_b)?;
    post_select(op.apply(state.coeffs())?, outcome, 0)
}

/// One passage with interaction times `tau_a`, `tau_b`, using the state's
/// dimension as cutoff.
pub fn apply_passage(
    state: &JointState,
    spec: &MediatorSpec,
    tau_a: f64,
    tau_b: f64,
    outcome: Outcome,
) -> Result<(JointState, PassageOutcome)> {
    let policy = TruncationPolicy::with_cutoff(state.dim().saturating_sub(1))?;
    let phase = PhaseConvention::default();
    let blocks_a = JcBlocks::new(tau_a, &policy, phase)?;
    let blocks_b = JcBlocks::new(tau_b, &policy, phase)?;
    apply_passage_with(state, spec, &blocks_a, &blocks_b, outcome)
}

#[derive(Clone, Debug)]
pub struct SequenceResult {
    pub state: JointState,
    pub passages: Vec<PassageOutcome>,
    pub joint_probability: f64,
}

/// Fold a list of outcomes with identically prepared mediators.
pub fn run_sequence_with(
    initial: &JointState,
    spec: &MediatorSpec,
    blocks_a: &JcBlocks,
    blocks_b: &JcBlocks,
    outcomes: &[Outcome],
) -> Result<SequenceResult> {
    if outcomes.is_empty() {
        return Err(Error::InvalidParameter("outcome sequence must not be empty".into()));
    }
    check_normalized(initial)?;
    let positive = EffectiveOperator::for_outcome(spec, Outcome::Positive, blocks_a, blocks_b)?;
    let negative = EffectiveOperator::for_outcome(spec, Outcome::Negative, blocks_a, blocks_b)?;
    let mut state = initial.clone();
    let mut passages = Vec::with_capacity(outcomes.len());
    let mut joint_probability = 1.0;
    for (k, &outcome) in outcomes.iter().enumerate() {
        let op = match outcome {
            Outcome::Positive => &positive,
            Outcome::Negative => &negative,
        };
        let (next, record) = post_select(op.apply(state.coeffs())?, outcome, k)?;
        joint_probability *= record.conditional_probability;
        passages.push(record);
        state = next;
    }
    Ok(SequenceResult { state, passages, joint_probability })
}

/// [`run_sequence_with`] with equal times in both cavities.
pub fn run_sequence(initial: &JointState, spec: &MediatorSpec, tau: f64, outcomes: &[Outcome]) -> Result<SequenceResult> {
    let policy = TruncationPolicy::with_cutoff(initial.dim().saturating_sub(1))?;
    let blocks = JcBlocks::new(tau, &policy, PhaseConvention::default())?;
    run_sequence_with(initial, spec, &blocks, &blocks, outcomes)
}

/// Unnormalized register after a vee passage: the mediator starts in
/// `(|e_a> + |e_b>)/√2` and is found in `|g>`.
pub fn vee_project_ground(coeffs: &DMatrix<C64>, prop: &VeePropagator) -> Result<DMatrix<C64>> {
    let d = prop.policy().dim();
    if coeffs.nrows() != d || coeffs.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: coeffs.nrows() });
    }
    let r = FRAC_1_SQRT_2;
    // |g, n, m> collects |e_a, n-1, m> and |e_b, n, m-1>.
    let from = |n: usize, m: usize| -> C64 {
        let b = prop.block(n, m);
        let mut acc = C64::new(0.0, 0.0);
        if n >= 1 && m < d {
            acc += b[VEE_G][VEE_EA] * coeffs[(n - 1, m)];
        }
        if m >= 1 && n < d {
            acc += b[VEE_G][VEE_EB] * coeffs[(n, m - 1)];
        }
        acc * r
    };
    let out = DMatrix::from_fn(d, d, &from);
    let leaked: f64 = (0..d).map(|k| from(d, k).norm_sqr() + from(k, d).norm_sqr()).sum();
    let tol = prop.policy().tail_tolerance();
    if leaked > tol {
        return Err(Error::TruncationTooSmall { n_cut: d - 1, mass: leaked, tolerance: tol });
    }
    Ok(out)
}

/// Vee passage post-selected on the ground state. The returned outcome is
/// [`Outcome::Negative`] since the mediator ends in `|g>`.
pub fn vee_passage(state: &JointState, prop: &VeePropagator) -> Result<(JointState, PassageOutcome)> {
    check_normalized(state)?;
    post_select(vee_project_ground(state.coeffs(), prop)?, Outcome::Negative, 0)
}

/// Conditional probability of each outcome for a normalized state.
pub fn outcome_probabilities(
    state: &JointState,
    spec: &MediatorSpec,
    blocks_a: &JcBlocks,
    blocks_b: &JcBlocks,
) -> Result<(f64, f64)> {
    let p = |o| -> Result<f64> {
        let op = EffectiveOperator::for_outcome(spec, o, blocks_a, blocks_b)?;
        Ok(JointState::from_coeffs(op.apply(state.coeffs())?).norm_sq())
    };
    Ok((p(Outcome::Positive)?, p(Outcome::Negative)?))
}

//! Truncated Fock-space states for one and two bosonic modes.

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::C64;

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Photon-number cutoff together with the probability mass allowed to leak
/// past it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    n_cut: usize,
    tail_tolerance: f64,
}

impl TruncationPolicy {
    pub fn new(n_cut: usize, tail_tolerance: f64) -> Result<Self> {
        if n_cut < 1 {
            return Err(Error::InvalidParameter(format!("n_cut must be >= 1, got {n_cut}")));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail_tolerance must lie in (0, 1), got {tail_tolerance}"
            )));
        }
        Ok(Self { n_cut, tail_tolerance })
    }

    pub fn with_cutoff(n_cut: usize) -> Result<Self> {
        Self::new(n_cut, DEFAULT_TAIL_TOLERANCE)
    }

    /// Policy sized by [`default_cutoff`].
    pub fn for_run(alpha: f64, n_passages: usize) -> Self {
        Self { n_cut: default_cutoff(alpha, n_passages), tail_tolerance: DEFAULT_TAIL_TOLERANCE }
    }

    pub fn n_cut(&self) -> usize {
        self.n_cut
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// Number of retained levels, `n_cut + 1`.
    pub fn dim(&self) -> usize {
        self.n_cut + 1
    }

    /// Same tolerance, cutoff raised by `extra` levels.
    pub fn raised(&self, extra: usize) -> Self {
        Self { n_cut: self.n_cut + extra, ..*self }
    }
}

/// Cutoff covering the Poisson bulk of `|alpha>` plus one photon per passage.
pub fn default_cutoff(alpha: f64, n_passages: usize) -> usize {
    let alpha = alpha.max(0.0);
    (alpha * alpha).ceil() as usize + 10 * (alpha + 1.0).ceil() as usize + 20 + n_passages
}

/// Amplitudes of a single mode indexed by photon number.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeVector {
    amplitudes: Vec<C64>,
}

impl ModeVector {
    pub fn new(amplitudes: Vec<C64>) -> Self {
        Self { amplitudes }
    }

    pub fn fock(n: usize, dim: usize) -> Self {
        let mut amplitudes = vec![C64::zero(); dim];
        amplitudes[n] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &ModeVector) -> C64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm_sq = self.norm_sq();
        if norm_sq < crate::ZERO_PROBABILITY {
            return Err(Error::ZeroVector);
        }
        let scale = 1.0 / norm_sq.sqrt();
        Ok(Self { amplitudes: self.amplitudes.iter().map(|a| a * scale).collect() })
    }
}

/// Coherent state `|alpha>` for real `alpha >= 0`, truncated at the policy
/// cutoff. Fails if more than `tail_tolerance` of the Poisson weight falls
/// past the cutoff.
pub fn coherent_amplitudes(alpha: f64, policy: &TruncationPolicy) -> Result<ModeVector> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    let dim = policy.dim();
    let mut amplitudes = Vec::with_capacity(dim);
    // C_m = C_{m-1} * alpha / sqrt(m)
    let mut c = (-0.5 * alpha * alpha).exp();
    amplitudes.push(C64::new(c, 0.0));
    for m in 1..dim {
        c *= alpha / (m as f64).sqrt();
        amplitudes.push(C64::new(c, 0.0));
    }

    // Sum the tail directly rather than as 1 - retained, which loses digits.
    let mut tail = 0.0;
    let past_peak = (2.0 * alpha * alpha) as usize + 50;
    let mut m = dim;
    loop {
        c *= alpha / (m as f64).sqrt();
        let term = c * c;
        tail += term;
        if m > past_peak && (term == 0.0 || term <= tail * 1e-18) {
            break;
        }
        m += 1;
    }
    if tail > policy.tail_tolerance() {
        return Err(Error::TruncationTooSmall {
            n_cut: policy.n_cut(),
            mass: tail,
            tolerance: policy.tail_tolerance(),
        });
    }
    Ok(ModeVector { amplitudes })
}

/// Two-mode pure state `sum c[n][m] |n>_a |m>_b`. Rows index mode a, columns
/// mode b.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    coeffs: DMatrix<C64>,
    norm_sq: f64,
}

impl JointState {
    pub fn from_coeffs(coeffs: DMatrix<C64>) -> Self {
        let norm_sq = coeffs.iter().map(|c| c.norm_sqr()).sum();
        Self { coeffs, norm_sq }
    }

    /// `|n>_a |m>_b`.
    pub fn basis(n: usize, m: usize, dim: usize) -> Self {
        let mut coeffs = DMatrix::zeros(dim, dim);
        coeffs[(n, m)] = C64::new(1.0, 0.0);
        Self { coeffs, norm_sq: 1.0 }
    }

    pub fn coeffs(&self) -> &DMatrix<C64> {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> DMatrix<C64> {
        self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    /// A state whose norm has collapsed; it cannot be normalized.
    pub fn is_zero(&self) -> bool {
        self.norm_sq < crate::ZERO_PROBABILITY
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sq - 1.0).abs() <= tol
    }

    pub fn normalize(&self) -> Result<Self> {
        if self.norm_sq <= f64::MIN_POSITIVE {
            return Err(Error::ZeroVector);
        }
        let scale = 1.0 / self.norm_sq.sqrt();
        let coeffs = self.coeffs.map(|c| c * scale);
        Ok(Self::from_coeffs(coeffs))
    }

    /// Exchange the roles of the two modes.
    pub fn swap_modes(&self) -> Self {
        Self { coeffs: self.coeffs.transpose(), norm_sq: self.norm_sq }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &JointState) -> C64 {
        self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

/// `|a> ⊗ |b>`.
pub fn product_state(vec_a: &ModeVector, vec_b: &ModeVector) -> Result<JointState> {
    if vec_a.dim() != vec_b.dim() {
        return Err(Error::DimensionMismatch { expected: vec_a.dim(), found: vec_b.dim() });
    }
    let a = vec_a.amplitudes();
    let b = vec_b.amplitudes();
    let coeffs = DMatrix::from_fn(a.len(), b.len(), |n, m| a[n] * b[m]);
    Ok(JointState::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn policy(n_cut: usize) -> TruncationPolicy {
        TruncationPolicy::with_cutoff(n_cut).unwrap()
    }

    #[test]
    fn vacuum_is_fock_zero() {
        let v = coherent_amplitudes(0.0, &policy(5)).unwrap();
        assert_eq!(v.amplitudes()[0], C64::new(1.0, 0.0));
        assert!(v.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn unit_amplitude_ground_coefficient() {
        let v = coherent_amplitudes(1.0, &policy(30)).unwrap();
        assert!((v.amplitudes()[0].re - (-0.5f64).exp()).abs() < 1e-15);
        assert!((v.amplitudes()[0].re - 0.6065307).abs() < 1e-7);
    }

    #[test]
    fn tail_mass_at_alpha_08() {
        // Independent Poisson tail with mean 0.64, summed from the pmf.
        let mean: f64 = 0.64;
        let mut pmf = (-mean).exp();
        let mut tail = 0.0;
        for k in 1..200 {
            pmf *= mean / k as f64;
            if k > 40 {
                tail += pmf;
            }
        }
        assert!(tail < 1e-12);
        let v = coherent_amplitudes(0.8, &policy(40)).unwrap();
        assert!((1.0 - v.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn too_small_cutoff_is_rejected() {
        let err = coherent_amplitudes(3.0, &policy(8)).unwrap_err();
        assert!(matches!(err, Error::TruncationTooSmall { .. }));
    }

    #[test]
    fn invalid_policies() {
        assert!(TruncationPolicy::new(0, 1e-12).is_err());
        assert!(TruncationPolicy::new(4, 0.0).is_err());
        assert!(TruncationPolicy::new(4, 1.0).is_err());
        assert!(coherent_amplitudes(-0.1, &policy(4)).is_err());
    }

    #[test]
    fn default_cutoff_formula() {
        assert_eq!(default_cutoff(0.0, 1), 31);
        assert_eq!(default_cutoff(0.8, 2), 43);
        assert_eq!(default_cutoff(3.0, 3), 72);
    }

    #[test]
    fn product_of_vacua() {
        let v = ModeVector::fock(0, 4);
        let s = product_state(&v, &v).unwrap();
        assert_eq!(s.coeffs()[(0, 0)], C64::new(1.0, 0.0));
        assert_eq!(s.coeffs().iter().filter(|c| c.norm() > 0.0).count(), 1);
    }

    #[test]
    fn product_of_coherent_states_is_normalized() {
        let p = TruncationPolicy::for_run(0.8, 2);
        let v = coherent_amplitudes(0.8, &p).unwrap();
        let s = product_state(&v, &v).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_dimension_mismatch() {
        let err = product_state(&ModeVector::fock(0, 3), &ModeVector::fock(0, 4)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 3, found: 4 }));
    }

    #[test]
    fn zero_state_is_flagged() {
        let s = JointState::from_coeffs(DMatrix::zeros(3, 3));
        assert!(s.is_zero());
        assert!(matches!(s.normalize(), Err(Error::ZeroVector)));
    }

    proptest! {
        #[test]
        fn normalize_gives_unit_norm(re in proptest::collection::vec(-3.0f64..3.0, 16),
                                     im in proptest::collection::vec(-3.0f64..3.0, 16)) {
            let coeffs = DMatrix::from_fn(4, 4, |n, m| C64::new(re[4 * n + m], im[4 * n + m]));
            let s = JointState::from_coeffs(coeffs);
            prop_assume!(s.norm_sq() > 1e-6);
            let u = s.normalize().unwrap();
            prop_assert!((u.norm_sq() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn raising_cutoff_keeps_amplitudes(alpha in 0.0f64..3.0, extra in 1usize..20) {
            let p = TruncationPolicy::for_run(alpha, 0);
            let low = coherent_amplitudes(alpha, &p).unwrap();
            let high = coherent_amplitudes(alpha, &p.raised(extra)).unwrap();
            prop_assert_eq!(low.amplitudes(), &high.amplitudes()[..low.dim()]);
        }
    }
}

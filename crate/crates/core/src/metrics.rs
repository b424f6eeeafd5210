//! Entanglement measures and overlap diagnostics.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{coherent_amplitudes, JointState, ModeVector, TruncationPolicy};
use crate::jc::{JcBlocks, PhaseConvention};
use crate::linalg::{hermitian_eigenvalues, singular_values};
use crate::operator::Axis;
use crate::C64;

/// Schmidt weights below this are discarded before taking logarithms.
pub const SCHMIDT_FLOOR: f64 = 1e-15;

/// Squared Schmidt coefficients of a pure bipartite state, descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    weights: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Weights must be probabilities summing to one.
    pub fn new(mut weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(0.0..=1.0 + 1e-12).contains(w)) {
            return Err(Error::InvalidParameter("Schmidt weights must lie in [0, 1]".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sq: total });
        }
        weights.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }
}

pub fn schmidt(state: &JointState) -> Result<SchmidtSpectrum> {
    if !state.is_normalized(1e-10) {
        return Err(Error::NotNormalized { norm_sq: state.norm_sq() });
    }
    let weights = singular_values(state.coeffs())
        .into_iter()
        .map(|s| s * s)
        .filter(|w| *w >= SCHMIDT_FLOOR)
        .collect();
    Ok(SchmidtSpectrum { weights })
}

/// Von Neumann entropy in ebits.
pub fn entropy(spectrum: &SchmidtSpectrum) -> f64 {
    let s: f64 = spectrum.weights.iter().filter(|w| **w > 0.0).map(|w| -w * w.log2()).sum();
    if s > 0.0 { s } else { 0.0 }
}

/// Entropy of entanglement of a normalized register state.
pub fn state_entropy(state: &JointState) -> Result<f64> {
    Ok(entropy(&schmidt(state)?))
}

/// Overlaps among `|Λ> ∝ U12|α>`, `|Δ> ∝ U22|α>` and `|Γ> ∝ U11|α>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapReport {
    pub tau: f64,
    pub alpha: f64,
    /// `<Γ|Λ>`.
    pub gamma_lambda: C64,
    /// `<Δ|Γ>`.
    pub delta_gamma: C64,
    /// `<Δ|Λ>`.
    pub delta_lambda: C64,
    /// `<Γ|Λ>` with the phase of the off-diagonal blocks divided out; real
    /// up to roundoff.
    pub gamma_lambda_signed: f64,
    /// Large-amplitude closed form for `<Γ|Λ>`, defined only up to a
    /// positive constant.
    pub gaussian_gamma_lambda: f64,
}

/// `[sin(2πτα) − (πτ/α) cos(2πτα)] exp(−π²τ²/2)`.
pub fn gaussian_gamma_lambda(tau: f64, alpha: f64) -> f64 {
    let arg = 2.0 * PI * tau * alpha;
    (arg.sin() - PI * tau / alpha * arg.cos()) * (-0.5 * PI * PI * tau * tau).exp()
}

pub fn lambda_delta_gamma(tau: f64, alpha: f64, policy: &TruncationPolicy) -> Result<OverlapReport> {
    lambda_delta_gamma_with(tau, alpha, policy, PhaseConvention::default())
}

pub fn lambda_delta_gamma_with(
    tau: f64,
    alpha: f64,
    policy: &TruncationPolicy,
    phase: PhaseConvention,
) -> Result<OverlapReport> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!("alpha must be > 0, got {alpha}")));
    }
    let coherent = coherent_amplitudes(alpha, policy)?;
    let blocks = JcBlocks::new(tau, policy, phase)?;
    let image = |op: &crate::operator::ModeOperator| -> Result<ModeVector> { op.apply_vec(&coherent).0.normalized() };
    let lambda = image(&blocks.u12)?;
    let delta = image(&blocks.u22)?;
    let gamma = image(&blocks.u11)?;
    let gamma_lambda = gamma.inner(&lambda);
    Ok(OverlapReport {
        tau,
        alpha,
        gamma_lambda,
        delta_gamma: delta.inner(&gamma),
        delta_lambda: delta.inner(&lambda),
        gamma_lambda_signed: (gamma_lambda / phase.factor()).re,
        gaussian_gamma_lambda: gaussian_gamma_lambda(tau, alpha),
    })
}

/// Positions where `ys` changes sign, linearly interpolated between grid
/// points. Exact zeros on the grid count once.
pub fn zero_crossings(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 0..xs.len().saturating_sub(1) {
        let (y0, y1) = (ys[k], ys[k + 1]);
        if y0 == 0.0 {
            out.push(xs[k]);
        } else if y0 * y1 < 0.0 {
            out.push(xs[k] + (xs[k + 1] - xs[k]) * y0 / (y0 - y1));
        }
    }
    if let (Some(&x), Some(&y)) = (xs.last(), ys.last()) {
        if y == 0.0 {
            out.push(x);
        }
    }
    out
}

/// Least-squares scale `c` minimizing `|exact − c · model|²`.
pub fn fit_scale(exact: &[f64], model: &[f64]) -> f64 {
    let num: f64 = exact.iter().zip(model).map(|(e, m)| e * m).sum();
    let den: f64 = model.iter().map(|m| m * m).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Two-qubit density matrix over `|gg>, |ge>, |eg>, |ee>` (qubit `C_a`
/// first).
#[derive(Clone, Debug, PartialEq)]
pub struct QubitPairState {
    rho: DMatrix<C64>,
}

impl QubitPairState {
    pub fn new(rho: DMatrix<C64>) -> Result<Self> {
        if rho.nrows() != 4 || rho.ncols() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: rho.nrows() });
        }
        if (&rho - rho.adjoint()).camax() > 1e-12 {
            return Err(Error::InvalidParameter("two-qubit state is not Hermitian".into()));
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sq: trace.re });
        }
        if hermitian_eigenvalues(&rho).first().is_some_and(|e| *e < -1e-10) {
            return Err(Error::InvalidParameter("two-qubit state is not positive".into()));
        }
        Ok(Self { rho })
    }

    pub fn from_pure(amplitudes: [C64; 4]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(&amplitudes);
        Self::new(&v * v.adjoint())
    }

    pub fn rho(&self) -> &DMatrix<C64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Transpose of the `C_b` factor.
    pub fn partial_transpose(&self) -> DMatrix<C64> {
        DMatrix::from_fn(4, 4, |r, c| {
            let (qa, qb) = (r / 2, r % 2);
            let (qa2, qb2) = (c / 2, c % 2);
            self.rho[(2 * qa + qb2, 2 * qa2 + qb)]
        })
    }
}

/// Eigenvalues of the partial transpose above `-PPT_FLOOR` count as zero.
const PPT_FLOOR: f64 = 1e-13;

/// Twice the negativity, `2 Σ |λ_-|` over negative eigenvalues of the
/// partial transpose. Zero for separable states, one for Bell states.
pub fn negativity_measure(rho: &QubitPairState) -> f64 {
    let ev = hermitian_eigenvalues(&rho.partial_transpose());
    2.0 * ev.iter().filter(|e| **e < -PPT_FLOOR).fold(0.0, |acc, e| acc - e)
}

/// Let one auxiliary qubit (prepared in `|g>`) interact with each register
/// mode for `tau_aux`, then trace out the register.
pub fn aux_readout(register: &JointState, tau_aux: f64) -> Result<QubitPairState> {
    aux_readout_with(register, tau_aux, PhaseConvention::default())
}

pub fn aux_readout_with(register: &JointState, tau_aux: f64, phase: PhaseConvention) -> Result<QubitPairState> {
    if !register.is_normalized(1e-10) {
        return Err(Error::NotNormalized { norm_sq: register.norm_sq() });
    }
    let policy = TruncationPolicy::with_cutoff(register.dim().saturating_sub(1))?;
    let blocks = JcBlocks::new(tau_aux, &policy, phase)?;
    // Starting from |g>, the qubit ends in |g> via U22 and in |e> via U12.
    let ops = [&blocks.u22, &blocks.u12];
    let mut branches = Vec::with_capacity(4);
    for op_a in ops {
        let (half, _) = op_a.apply(register.coeffs(), Axis::A);
        for op_b in ops {
            branches.push(op_b.apply(&half, Axis::B).0);
        }
    }
    let rho = DMatrix::from_fn(4, 4, |i, j| branches[j].dotc(&branches[i]));
    QubitPairState::new(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::product_state;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn product_state_spectrum() {
        let p = TruncationPolicy::for_run(1.2, 0);
        let v = coherent_amplitudes(1.2, &p).unwrap();
        let s = schmidt(&product_state(&v, &v).unwrap()).unwrap();
        assert_eq!(s.rank(), 1);
        assert!((s.weights()[0] - 1.0).abs() < 1e-12);
        assert!(entropy(&s).abs() < 1e-12);
    }

    #[test]
    fn bell_like_register() {
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = c(std::f64::consts::FRAC_1_SQRT_2);
        m[(1, 0)] = c(std::f64::consts::FRAC_1_SQRT_2);
        let s = schmidt(&JointState::from_coeffs(m)).unwrap();
        assert_eq!(s.rank(), 2);
        assert!((s.weights()[0] - 0.5).abs() < 1e-14 && (s.weights()[1] - 0.5).abs() < 1e-14);
        assert!((entropy(&s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_known_spectra() {
        assert_eq!(entropy(&SchmidtSpectrum::new(vec![1.0]).unwrap()), 0.0);
        assert!((entropy(&SchmidtSpectrum::new(vec![0.5, 0.5]).unwrap()) - 1.0).abs() < 1e-15);
        assert!((entropy(&SchmidtSpectrum::new(vec![0.25; 4]).unwrap()) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn schmidt_requires_normalization() {
        let s = JointState::from_coeffs(DMatrix::from_element(2, 2, c(1.0)));
        assert!(matches!(schmidt(&s), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn invalid_spectrum() {
        assert!(SchmidtSpectrum::new(vec![0.7, 0.7]).is_err());
        assert!(SchmidtSpectrum::new(vec![-0.1, 1.1]).is_err());
    }

    #[test]
    fn gaussian_zero_condition() {
        // The bracket vanishes where tan(2πτα) = πτ/α.
        let alpha = 3.0;
        let f = |t: f64| (2.0 * PI * t * alpha).tan() - PI * t / alpha;
        let (mut lo, mut hi) = (0.5 / alpha + 1e-9, 0.7 / alpha);
        // tan runs from -inf upward on this branch, so bisect on sign.
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!(gaussian_gamma_lambda(lo, alpha).abs() < 1e-12);
    }

    #[test]
    fn large_amplitude_states_are_nearly_orthogonal() {
        let p = TruncationPolicy::for_run(5.0, 0);
        let r = lambda_delta_gamma(2.0, 5.0, &p).unwrap();
        assert!(r.gamma_lambda.norm() < 1e-4, "|<Γ|Λ>| = {}", r.gamma_lambda.norm());
        for o in [r.gamma_lambda, r.delta_gamma, r.delta_lambda] {
            assert!(o.norm() <= 1.0 + 1e-12);
        }
        assert!(r.gamma_lambda.re.abs() < 1e-14);
    }

    #[test]
    fn overlaps_need_positive_amplitude() {
        let p = TruncationPolicy::for_run(0.0, 0);
        assert!(lambda_delta_gamma(1.0, 0.0, &p).is_err());
    }

    #[test]
    fn crossings_interpolate() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, -1.0, -1.0, 3.0];
        assert_eq!(zero_crossings(&xs, &ys), vec![0.5, 2.25]);
        assert!((fit_scale(&[2.0, 4.0], &[1.0, 2.0]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bell_singlet_scores_one() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = QubitPairState::from_pure([c(0.0), c(r), c(-r), c(0.0)]).unwrap();
        assert!((negativity_measure(&singlet) - 1.0).abs() < 1e-12);
        let pt = hermitian_eigenvalues(&singlet.partial_transpose());
        assert!((pt[0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_qubits_are_ppt() {
        let a = [c(0.6), C64::new(0.0, 0.8)];
        let b = [c(0.28), c(0.96)];
        let prod = QubitPairState::from_pure([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]).unwrap();
        assert_eq!(negativity_measure(&prod), 0.0);
    }

    #[test]
    fn readout_at_zero_time_is_ground() {
        let p = TruncationPolicy::for_run(0.8, 1);
        let v = coherent_amplitudes(0.8, &p).unwrap();
        let rho = aux_readout(&product_state(&v, &v).unwrap(), 0.0).unwrap();
        assert!((rho.rho()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_register_gives_separable_readout() {
        let p = TruncationPolicy::for_run(1.5, 1);
        let v = coherent_amplitudes(1.5, &p).unwrap();
        let reg = product_state(&v, &v).unwrap();
        for tau_aux in [0.2, 0.5, 1.3] {
            let rho = aux_readout(&reg, tau_aux).unwrap();
            assert_eq!(negativity_measure(&rho), 0.0);
        }
    }

    #[test]
    fn invalid_qubit_states_rejected() {
        assert!(QubitPairState::new(DMatrix::identity(4, 4)).is_err());
        assert!(QubitPairState::new(DMatrix::identity(3, 3)).is_err());
        let mut m = DMatrix::<C64>::identity(4, 4) * c(0.25);
        m[(0, 1)] = c(0.3);
        assert!(QubitPairState::new(m).is_err());
    }

    fn random_register(seed: &[f64], dim: usize) -> JointState {
        let m = DMatrix::from_fn(dim, dim, |n, k| C64::new(seed[(n * dim + k) % seed.len()], seed[(3 * n + 5 * k + 1) % seed.len()]));
        JointState::from_coeffs(m).normalize().unwrap()
    }

    proptest! {
        #[test]
        fn entropy_bounds_and_mode_swap(seed in proptest::collection::vec(-1.0f64..1.0, 49)) {
            let s = random_register(&seed, 7);
            let e = state_entropy(&s).unwrap();
            prop_assert!(e >= 0.0 && e <= (7f64).log2() + 1e-12);
            let swapped = state_entropy(&s.swap_modes()).unwrap();
            prop_assert!((e - swapped).abs() < 1e-10);
        }

        #[test]
        fn local_phases_leave_spectrum(seed in proptest::collection::vec(-1.0f64..1.0, 36),
                                       phases in proptest::collection::vec(0.0f64..6.3, 6)) {
            let s = random_register(&seed, 6);
            let before = schmidt(&s).unwrap();
            let rotated = DMatrix::from_fn(6, 6, |n, m| s.coeffs()[(n, m)] * C64::from_polar(1.0, phases[n] - 2.0 * phases[m]));
            let after = schmidt(&JointState::from_coeffs(rotated)).unwrap();
            prop_assert_eq!(before.rank(), after.rank());
            for (x, y) in before.weights().iter().zip(after.weights()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn readout_is_a_valid_state(seed in proptest::collection::vec(-1.0f64..1.0, 49), tau_aux in 0.0f64..3.0) {
            let rho = aux_readout(&random_register(&seed, 7), tau_aux).unwrap();
            prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
            prop_assert!(rho.purity() <= 1.0 + 1e-10);
            let e = negativity_measure(&rho);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&e));
        }
    }
}

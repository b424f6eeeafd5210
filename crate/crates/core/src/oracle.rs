//! Brute-force references built from the interaction Hamiltonian and a dense
//! matrix exponential. Nothing here uses the structured blocks, so these can
//! check them. Intended for small cutoffs only.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::conditional::MediatorSpec;
use crate::error::{Error, Result};
use crate::jc::PhaseConvention;
use crate::linalg::expm_hermitian;
use crate::C64;

pub const MAX_ORACLE_CUTOFF: usize = 64;

fn check_cutoff(n_cut: usize) -> Result<()> {
    if n_cut > MAX_ORACLE_CUTOFF {
        return Err(Error::InvalidParameter(format!(
            "oracle cutoff {n_cut} exceeds {MAX_ORACLE_CUTOFF}"
        )));
    }
    Ok(())
}

/// Unitary of one two-level mediator and one mode truncated at `n_cut`,
/// over `{|e>, |g>} ⊗ mode` (index `q * (n_cut+1) + n`, `q = 0` excited).
///
/// The truncated Hamiltonian leaves `|e, n_cut>` uncoupled, so this agrees
/// with the exact propagator everywhere except on that state.
pub fn exp_oracle(tau: f64, n_cut: usize) -> Result<DMatrix<C64>> {
    exp_oracle_with(tau, n_cut, PhaseConvention::default())
}

pub fn exp_oracle_with(tau: f64, n_cut: usize, phase: PhaseConvention) -> Result<DMatrix<C64>> {
    check_cutoff(n_cut)?;
    let d = n_cut + 1;
    let mut h = DMatrix::<C64>::zeros(2 * d, 2 * d);
    // a |e><g| + a† |g><e|: <e, n-1| H |g, n> = √n.
    for n in 1..d {
        let w = C64::new((n as f64).sqrt(), 0.0);
        h[(n - 1, d + n)] = w;
        h[(d + n, n - 1)] = w;
    }
    Ok(expm_hermitian(&h, PI * tau, phase.exponent_sign()))
}

/// [`exp_oracle`] built one level larger and restricted back to
/// `[0, n_cut]`; every retained entry is then exact.
pub fn exp_oracle_restricted(tau: f64, n_cut: usize, phase: PhaseConvention) -> Result<DMatrix<C64>> {
    let big = exp_oracle_with(tau, n_cut + 1, phase)?;
    let (d, bd) = (n_cut + 1, n_cut + 2);
    Ok(DMatrix::from_fn(2 * d, 2 * d, |r, c| {
        let map = |i: usize| if i < d { i } else { bd + (i - d) };
        big[(map(r), map(c))]
    }))
}

/// Mediator ⊗ mode_a ⊗ mode_b Hamiltonian for a two-level mediator coupled
/// to one of the modes. Index `q * D² + n * D + m` with `D = dim`.
fn two_mode_jc_hamiltonian(dim: usize, on_a: bool) -> DMatrix<C64> {
    let d2 = dim * dim;
    let mut h = DMatrix::<C64>::zeros(2 * d2, 2 * d2);
    for n in 0..dim {
        for m in 0..dim {
            let (k, lowered) = if on_a {
                (n, (n >= 1).then(|| (n - 1) * dim + m))
            } else {
                (m, (m >= 1).then(|| n * dim + m - 1))
            };
            if let Some(low) = lowered {
                let w = C64::new((k as f64).sqrt(), 0.0);
                let g = d2 + n * dim + m;
                h[(low, g)] = w;
                h[(g, low)] = w;
            }
        }
    }
    h
}

/// `<measured| U_b(tau_b) U_a(tau_a) |prepared>` as a dense register matrix
/// indexed `n * (n_cut+1) + m`, computed on the full mediator ⊗ two-mode
/// space. `measured` is `(e, g)` amplitudes of the projection ket.
pub fn effective_operator_oracle(
    prepared: [C64; 2],
    measured: [C64; 2],
    tau_a: f64,
    tau_b: f64,
    n_cut: usize,
    phase: PhaseConvention,
) -> Result<DMatrix<C64>> {
    check_cutoff(n_cut)?;
    // One spare level so the retained block is exact.
    let big = n_cut + 2;
    let sign = phase.exponent_sign();
    let ua = expm_hermitian(&two_mode_jc_hamiltonian(big, true), PI * tau_a, sign);
    let ub = expm_hermitian(&two_mode_jc_hamiltonian(big, false), PI * tau_b, sign);
    let u = ub * ua;
    let d = n_cut + 1;
    let big2 = big * big;
    let full = |q: usize, n: usize, m: usize| q * big2 + n * big + m;
    Ok(DMatrix::from_fn(d * d, d * d, |r, c| {
        let (n, m) = (r / d, r % d);
        let (n2, m2) = (c / d, c % d);
        let mut acc = C64::new(0.0, 0.0);
        for q in 0..2 {
            for q2 in 0..2 {
                acc += measured[q].conj() * u[(full(q, n, m), full(q2, n2, m2))] * prepared[q2];
            }
        }
        acc
    }))
}

/// [`effective_operator_oracle`] for a [`MediatorSpec`] and outcome branch.
pub fn spec_operator_oracle(
    spec: &MediatorSpec,
    positive: bool,
    tau_a: f64,
    tau_b: f64,
    n_cut: usize,
    phase: PhaseConvention,
) -> Result<DMatrix<C64>> {
    let measured = if positive { spec.measured_ket() } else { spec.complement_ket() };
    effective_operator_oracle(spec.prepared_ket(), measured, tau_a, tau_b, n_cut, phase)
}

/// Vee mediator ⊗ mode_a ⊗ mode_b Hamiltonian, levels `(e_a, e_b, g)`,
/// index `level * D² + n * D + m`.
fn vee_hamiltonian(dim: usize) -> DMatrix<C64> {
    let d2 = dim * dim;
    let mut h = DMatrix::<C64>::zeros(3 * d2, 3 * d2);
    for n in 0..dim {
        for m in 0..dim {
            let g = 2 * d2 + n * dim + m;
            if n >= 1 {
                let ea = (n - 1) * dim + m;
                let w = C64::new((n as f64).sqrt(), 0.0);
                h[(ea, g)] = w;
                h[(g, ea)] = w;
            }
            if m >= 1 {
                let eb = d2 + n * dim + m - 1;
                let w = C64::new((m as f64).sqrt(), 0.0);
                h[(eb, g)] = w;
                h[(g, eb)] = w;
            }
        }
    }
    h
}

/// Full vee unitary restricted to `[0, n_cut]` in both modes, in the layout
/// of [`crate::jc::VeePropagator::assemble`].
pub fn vee_exp_oracle(tau: f64, n_cut: usize, phase: PhaseConvention) -> Result<DMatrix<C64>> {
    check_cutoff(n_cut)?;
    let big = n_cut + 2;
    let u = expm_hermitian(&vee_hamiltonian(big), PI * tau, phase.exponent_sign());
    let d = n_cut + 1;
    let map = |i: usize| {
        let (level, rest) = (i / (d * d), i % (d * d));
        level * big * big + (rest / d) * big + rest % d
    };
    Ok(DMatrix::from_fn(3 * d * d, 3 * d * d, |r, c| u[(map(r), map(c))]))
}

/// Unnormalized register state after one vee passage with the mediator
/// prepared in `(|e_a> + |e_b>)/√2` and found in `|g>`. `register` is
/// indexed `[n][m]` over `[0, n_cut]`.
pub fn vee_passage_oracle(register: &DMatrix<C64>, tau: f64, phase: PhaseConvention) -> Result<DMatrix<C64>> {
    let d = register.nrows();
    let u = vee_exp_oracle(tau, d - 1, phase)?;
    let d2 = d * d;
    let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut input = nalgebra::DVector::<C64>::zeros(3 * d2);
    for n in 0..d {
        for m in 0..d {
            input[n * d + m] = r * register[(n, m)];
            input[d2 + n * d + m] = r * register[(n, m)];
        }
    }
    let out = u * input;
    Ok(DMatrix::from_fn(d, d, |n, m| out[2 * d2 + n * d + m]))
}

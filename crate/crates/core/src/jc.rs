//! Resonant Jaynes-Cummings propagators.
//!
//! In the mediator basis `{|e>, |g>}` the evolution of a two-level mediator
//! coupled to one mode for a rescaled time `tau = lambda t / pi` is the block
//! operator
//!
//! ```text
//! [ U11  U12 ]      U11 |n> = cos(T_{n+1}) |n>        U12 |n> = s sin(T_n) |n-1>
//! [ U21  U22 ]      U21 |n> = s sin(T_{n+1}) |n+1>    U22 |n> = cos(T_n) |n>
//! ```
//!
//! with `T_p = pi tau sqrt(p)` and `s = -i` (the [`PhaseConvention::MinusI`]
//! default, i.e. `exp(-iHt)`). The coupling strength only enters through
//! `tau`.
//!
//! The vee-configuration mediator has two excited levels `|e_a>`, `|e_b>`,
//! each coupled to one mode through the common ground `|g>`. Its propagator
//! is block diagonal over the sectors
//! `{|e_a, n-1, m>, |e_b, n, m-1>, |g, n, m>}`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::TruncationPolicy;
use crate::operator::ModeOperator;
use crate::C64;

/// Phase attached to the off-diagonal JC blocks. The two choices are related
/// by flipping the sign of the excited level, so no observable depends on it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PhaseConvention {
    #[default]
    MinusI,
    PlusI,
}

impl PhaseConvention {
    pub fn factor(self) -> C64 {
        match self {
            PhaseConvention::MinusI => C64::new(0.0, -1.0),
            PhaseConvention::PlusI => C64::new(0.0, 1.0),
        }
    }

    /// Sign `s` in `exp(s i t H)`.
    pub fn exponent_sign(self) -> f64 {
        match self {
            PhaseConvention::MinusI => -1.0,
            PhaseConvention::PlusI => 1.0,
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            PhaseConvention::MinusI => PhaseConvention::PlusI,
            PhaseConvention::PlusI => PhaseConvention::MinusI,
        }
    }
}

impl fmt::Display for PhaseConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseConvention::MinusI => f.write_str("-i"),
            PhaseConvention::PlusI => f.write_str("+i"),
        }
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau >= 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tau must be finite and >= 0, got {tau}")))
    }
}

/// The four single-mode blocks of one mediator-mode interaction.
#[derive(Clone, Debug)]
pub struct JcBlocks {
    tau: f64,
    policy: TruncationPolicy,
    phase: PhaseConvention,
    pub u11: ModeOperator,
    pub u12: ModeOperator,
    pub u21: ModeOperator,
    pub u22: ModeOperator,
}

impl JcBlocks {
    pub fn new(tau: f64, policy: &TruncationPolicy, phase: PhaseConvention) -> Result<Self> {
        check_tau(tau)?;
        let dim = policy.dim();
        let angle = |p: usize| PI * tau * (p as f64).sqrt();
        let s = phase.factor();
        let real = |x: f64| C64::new(x, 0.0);
        let u11 = ModeOperator::diagonal((0..dim).map(|n| real(angle(n + 1).cos())).collect());
        let u22 = ModeOperator::diagonal((0..dim).map(|n| real(angle(n).cos())).collect());
        let u12 = ModeOperator::lowering((0..dim).map(|n| s * angle(n).sin()).collect());
        let u21 = ModeOperator::raising((0..dim).map(|n| s * angle(n + 1).sin()).collect());
        Ok(Self { tau, policy: *policy, phase, u11, u12, u21, u22 })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn phase(&self) -> PhaseConvention {
        self.phase
    }

    pub fn dim(&self) -> usize {
        self.policy.dim()
    }

    /// Dense `2 dim × 2 dim` matrix over `{|e>, |g>} ⊗ mode`, excited block
    /// first.
    pub fn assemble(&self) -> DMatrix<C64> {
        let d = self.dim();
        let mut u = DMatrix::zeros(2 * d, 2 * d);
        u.view_mut((0, 0), (d, d)).copy_from(&self.u11.to_dense());
        u.view_mut((0, d), (d, d)).copy_from(&self.u12.to_dense());
        u.view_mut((d, 0), (d, d)).copy_from(&self.u21.to_dense());
        u.view_mut((d, d), (d, d)).copy_from(&self.u22.to_dense());
        u
    }
}

/// JC blocks in the default phase convention.
pub fn jc_blocks(tau: f64, policy: &TruncationPolicy) -> Result<JcBlocks> {
    JcBlocks::new(tau, policy, PhaseConvention::default())
}

/// Index of a mediator level inside a vee sector block.
pub const VEE_EA: usize = 0;
pub const VEE_EB: usize = 1;
pub const VEE_G: usize = 2;

pub type Block3 = [[C64; 3]; 3];

/// Block-diagonal propagator of a vee mediator coupled equally and
/// simultaneously to both modes of one cavity.
#[derive(Clone, Debug)]
pub struct VeePropagator {
    tau: f64,
    policy: TruncationPolicy,
    phase: PhaseConvention,
    /// Sectors `(n, m)` for `n, m` in `0..=dim`, one level past the cutoff so
    /// that leakage out of the retained space can be measured.
    blocks: Vec<Block3>,
}

impl VeePropagator {
    pub fn new(tau: f64, policy: &TruncationPolicy, phase: PhaseConvention) -> Result<Self> {
        check_tau(tau)?;
        let side = policy.dim() + 1;
        let theta = PI * tau;
        let s = phase.factor();
        let mut blocks = Vec::with_capacity(side * side);
        for n in 0..side {
            for m in 0..side {
                blocks.push(sector_block(n, m, theta, s));
            }
        }
        Ok(Self { tau, policy: *policy, phase, blocks })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn phase(&self) -> PhaseConvention {
        self.phase
    }

    /// Block of sector `(n, m)`, rows/columns ordered `e_a, e_b, g`.
    /// Valid for `n, m <= n_cut + 1`.
    pub fn block(&self, n: usize, m: usize) -> &Block3 {
        let side = self.policy.dim() + 1;
        &self.blocks[n * side + m]
    }

    /// Dense matrix over `{e_a, e_b, g} ⊗ mode_a ⊗ mode_b`, index
    /// `level * dim² + n * dim + m`, restricted to the retained levels.
    pub fn assemble(&self) -> DMatrix<C64> {
        let d = self.policy.dim();
        let idx = |level: usize, n: usize, m: usize| level * d * d + n * d + m;
        let mut u = DMatrix::zeros(3 * d * d, 3 * d * d);
        let side = d + 1;
        for n in 0..side {
            for m in 0..side {
                // Members of sector (n, m) that lie inside the retained space.
                let members: [Option<usize>; 3] = [
                    (n >= 1 && n - 1 < d && m < d).then(|| idx(VEE_EA, n - 1, m)),
                    (m >= 1 && m - 1 < d && n < d).then(|| idx(VEE_EB, n, m - 1)),
                    (n < d && m < d).then(|| idx(VEE_G, n, m)),
                ];
                let b = self.block(n, m);
                for (r, row) in members.iter().enumerate() {
                    for (c, col) in members.iter().enumerate() {
                        if let (Some(i), Some(j)) = (row, col) {
                            u[(*i, *j)] = b[r][c];
                        }
                    }
                }
            }
        }
        u
    }
}

/// `exp(s theta H)` on sector `(n, m)` where
/// `H = [[0, 0, √n], [0, 0, √m], [√n, √m, 0]]`. With `Ω = √(n+m)`,
/// `H³ = Ω² H`, so `exp = I + (cos θΩ − 1) H²/Ω² + s sin θΩ H/Ω`.
fn sector_block(n: usize, m: usize, theta: f64, s: C64) -> Block3 {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut b = [[zero; 3]; 3];
    for (k, row) in b.iter_mut().enumerate() {
        row[k] = one;
    }
    let omega_sq = (n + m) as f64;
    if omega_sq == 0.0 {
        return b;
    }
    let omega = omega_sq.sqrt();
    let (sn, sm) = ((n as f64).sqrt(), (m as f64).sqrt());
    let h = [[0.0, 0.0, sn], [0.0, 0.0, sm], [sn, sm, 0.0]];
    let h2 = [[n as f64, sn * sm, 0.0], [sn * sm, m as f64, 0.0], [0.0, 0.0, omega_sq]];
    let c = ((theta * omega).cos() - 1.0) / omega_sq;
    let si = s * ((theta * omega).sin() / omega);
    for r in 0..3 {
        for col in 0..3 {
            b[r][col] += c * h2[r][col] + si * h[r][col];
        }
    }
    b
}

/// Vee propagator in the default phase convention.
pub fn vee_propagator(tau: f64, policy: &TruncationPolicy) -> Result<VeePropagator> {
    VeePropagator::new(tau, policy, PhaseConvention::default())
}

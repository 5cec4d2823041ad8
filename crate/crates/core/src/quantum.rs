//! Two-level quantum model with measurements parameterized by time.
//!
//! Conventions: the computational basis is the energy eigenbasis
//! `|+⟩ = (1,0)`, `|−⟩ = (0,1)`; `ħ = 1`, so `ΔE·t` is a dimensionless phase.
//! Generalized Pauli operators lie in the X–Y plane,
//! `σ_φ = cos φ·X + sin φ·Y`, which makes a measurement at time `t` the
//! same thing as a measurement at angle `ΔE·t`.
//!
//! The antisymmetric singlet realized here gives
//! `⟨S(m,n)|σ₀⊗σ₀|S(m,n)⟩ = −cos(ΔE(n−m))`. The opposite overall sign to the
//! `+cos` law is carried as [`CORRELATION_SIGN`]; magnitudes and the CHSH
//! bounds do not depend on it.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use thiserror::Error;

use crate::linalg::{self, Complex, ComplexMatrix, LinalgError, StateVector};

/// Overall sign `s` relating [`correlation_simulated`] to `cos(ΔE(n−m))`.
pub const CORRELATION_SIGN: f64 = -1.0;

/// Tolerance for closed-form identities.
pub const CLOSED_FORM_TOL: f64 = 1e-12;
/// Tolerance for iteratively estimated quantities.
pub const ITERATIVE_TOL: f64 = 1e-9;

/// `2√2`, the largest CHSH value any quantum state reaches.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("energy gap must be non-zero (E+ = {e_plus}, E- = {e_minus})")]
    DegenerateHamiltonian { e_plus: f64, e_minus: f64 },
    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),
    #[error("settings within a wing must differ: {0}")]
    DegenerateSettings(&'static str),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, QuantumError>;

fn finite(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(QuantumError::NonFinite(name))
    }
}

/// `H = E₊|+⟩⟨+| + E₋|−⟩⟨−|` with a non-degenerate spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian {
    e_plus: f64,
    e_minus: f64,
}

impl Hamiltonian {
    pub fn new(e_plus: f64, e_minus: f64) -> Result<Self> {
        finite("e_plus", e_plus)?;
        finite("e_minus", e_minus)?;
        let delta = e_minus - e_plus;
        if !delta.is_finite() {
            return Err(QuantumError::NonFinite("delta_e"));
        }
        if delta == 0.0 {
            return Err(QuantumError::DegenerateHamiltonian { e_plus, e_minus });
        }
        Ok(Self { e_plus, e_minus })
    }

    /// The Hamiltonian with `E₊ = 0` and `E₋ = ΔE`.
    pub fn from_gap(delta_e: f64) -> Result<Self> {
        Self::new(0.0, delta_e)
    }

    pub fn e_plus(&self) -> f64 {
        self.e_plus
    }

    pub fn e_minus(&self) -> f64 {
        self.e_minus
    }

    /// `ΔE = E₋ − E₊`; may be negative, never zero.
    pub fn delta_e(&self) -> f64 {
        self.e_minus - self.e_plus
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::diagonal(&[
            Complex::new(self.e_plus, 0.0),
            Complex::new(self.e_minus, 0.0),
        ])
        .expect("finite energies")
    }
}

/// Measurement times: wing 1 chooses between `t` and `t′`, wing 2 between `u` and `u′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSettings {
    pub t: f64,
    pub t_prime: f64,
    pub u: f64,
    pub u_prime: f64,
}

impl TimeSettings {
    pub fn new(t: f64, t_prime: f64, u: f64, u_prime: f64) -> Result<Self> {
        finite("t", t)?;
        finite("t_prime", t_prime)?;
        finite("u", u)?;
        finite("u_prime", u_prime)?;
        if t == t_prime {
            return Err(QuantumError::DegenerateSettings("t == t'"));
        }
        if u == u_prime {
            return Err(QuantumError::DegenerateSettings("u == u'"));
        }
        Ok(Self {
            t,
            t_prime,
            u,
            u_prime,
        })
    }

    /// Wing-1 time for setting index 0 (`t`) or 1 (`t′`).
    pub fn wing1(&self, index: usize) -> f64 {
        if index == 0 {
            self.t
        } else {
            self.t_prime
        }
    }

    /// Wing-2 time for setting index 0 (`u`) or 1 (`u′`).
    pub fn wing2(&self, index: usize) -> f64 {
        if index == 0 {
            self.u
        } else {
            self.u_prime
        }
    }
}

/// Sign of each `(wing-1 index, wing-2 index)` term in the CHSH sum; the
/// `(t, u′)` term is subtracted.
pub fn chsh_term_sign(i: usize, j: usize) -> f64 {
    if (i, j) == (0, 1) {
        -1.0
    } else {
        1.0
    }
}

/// A generalized Pauli operator `σ_φ` on the X–Y great circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedPauli {
    pub phi: f64,
}

impl GeneralizedPauli {
    pub fn new(phi: f64) -> Result<Self> {
        Ok(Self {
            phi: finite("phi", phi)?,
        })
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let phase = Complex::from_polar(1.0, self.phi);
        let zero = Complex::new(0.0, 0.0);
        ComplexMatrix::from_rows2([[zero, phase.conj()], [phase, zero]]).expect("finite")
    }

    /// Eigenvector `|φ₊⟩ = (|+⟩ + e^{iφ}|−⟩)/√2` with eigenvalue +1.
    pub fn plus(&self) -> StateVector {
        self.eigenvector(1.0)
    }

    /// Eigenvector `|φ₋⟩ = (|+⟩ − e^{iφ}|−⟩)/√2` with eigenvalue −1.
    pub fn minus(&self) -> StateVector {
        self.eigenvector(-1.0)
    }

    fn eigenvector(&self, sign: f64) -> StateVector {
        let a = Complex::new(FRAC_1_SQRT_2, 0.0);
        let b = Complex::from_polar(sign * FRAC_1_SQRT_2, self.phi);
        StateVector::new(vec![a, b]).expect("finite")
    }

    /// Eigenprojector `|φ±⟩⟨φ±| = (I ± σ_φ)/2` for `outcome = ±1`.
    pub fn projector(&self, outcome: i8) -> ComplexMatrix {
        let id = ComplexMatrix::identity(2).expect("dim 2");
        let sigma = self.matrix().scale(Complex::new(f64::from(outcome), 0.0));
        id.add(&sigma).expect("dim 2").scale(Complex::new(0.5, 0.0))
    }
}

/// `σ_φ = cos φ·X + sin φ·Y` in the energy eigenbasis.
pub fn sigma_phi(phi: f64) -> Result<ComplexMatrix> {
    Ok(GeneralizedPauli::new(phi)?.matrix())
}

/// `e^{iHt} = diag(e^{iE₊t}, e^{iE₋t})`.
pub fn evolution(h: &Hamiltonian, t: f64) -> Result<ComplexMatrix> {
    finite("t", t)?;
    Ok(ComplexMatrix::diagonal(&[
        Complex::from_polar(1.0, h.e_plus * t),
        Complex::from_polar(1.0, h.e_minus * t),
    ])?)
}

/// The time-`t` observable `e^{iHt} σ₀ e^{−iHt}`, which equals `σ_{ΔE·t}`.
pub fn sigma_at_time(h: &Hamiltonian, t: f64) -> Result<ComplexMatrix> {
    let sigma0 = sigma_phi(0.0)?;
    Ok(sigma0.conjugate_by(&evolution(h, t)?)?)
}

/// `U_δ = diag(e^{iδ}, 1)`.
///
/// Orientation: `U_δ σ_α U_δ† = σ_{α−δ}`, so rotating `σ_α` onto `σ_{α′}`
/// takes `δ = −(α′ − α)`; see [`shift_pauli`].
pub fn u_delta_alpha(delta: f64) -> Result<ComplexMatrix> {
    finite("delta", delta)?;
    Ok(ComplexMatrix::diagonal(&[
        Complex::from_polar(1.0, delta),
        Complex::new(1.0, 0.0),
    ])?)
}

/// `σ_{α+Δα}` obtained as `U_{−Δα} σ_α U_{Δα}`.
pub fn shift_pauli(alpha: f64, delta_alpha: f64) -> Result<ComplexMatrix> {
    let u = u_delta_alpha(-delta_alpha)?;
    Ok(sigma_phi(alpha)?.conjugate_by(&u)?)
}

/// `(|φ₊φ₋⟩ − |φ₋φ₊⟩)/√2` built from the eigenvectors of `σ_φ`.
///
/// The result is the same ray for every `φ`; only a global phase changes.
pub fn singlet_from_basis(phi: f64) -> Result<StateVector> {
    let sigma = GeneralizedPauli::new(phi)?;
    let pm = sigma.plus().tensor(&sigma.minus())?;
    let mp = sigma.minus().tensor(&sigma.plus())?;
    Ok(pm
        .add(&mp.scale(Complex::new(-1.0, 0.0)))?
        .scale(Complex::new(FRAC_1_SQRT_2, 0.0)))
}

/// The singlet `|S⟩`, realized from the `σ₀` eigenbasis: `(|−+⟩ − |+−⟩)/√2`.
pub fn singlet() -> StateVector {
    singlet_from_basis(0.0).expect("finite angle")
}

/// `|S(m,n)⟩ = (e^{iHm} ⊗ e^{iHn})|S⟩`.
pub fn evolved_state(h: &Hamiltonian, m: f64, n: f64) -> Result<StateVector> {
    let u = evolution(h, m)?.tensor(&evolution(h, n)?)?;
    Ok(u.matvec(&singlet())?)
}

/// Closed-form correlation `cos(ΔE·(n−m))`.
pub fn correlation_analytic(h: &Hamiltonian, m: f64, n: f64) -> f64 {
    (h.delta_e() * (n - m)).cos()
}

/// `⟨S(m,n)|σ₀⊗σ₀|S(m,n)⟩`, equal to `CORRELATION_SIGN · cos(ΔE(n−m))`.
pub fn correlation_simulated(h: &Hamiltonian, m: f64, n: f64) -> Result<f64> {
    let sigma0 = sigma_phi(0.0)?;
    let state = evolved_state(h, m, n)?;
    Ok(linalg::expectation(&state, &sigma0.tensor(&sigma0)?)?)
}

/// The sign of `correlation_simulated` at coincident times, measured on the state.
pub fn measured_correlation_sign(h: &Hamiltonian) -> Result<f64> {
    Ok(correlation_simulated(h, 0.0, 0.0)?.signum())
}

/// `B̃ = σ_t⊗σ_u − σ_t⊗σ_{u′} + σ_{t′}⊗σ_u + σ_{t′}⊗σ_{u′}`.
pub fn chsh_operator(h: &Hamiltonian, s: &TimeSettings) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        let a = sigma_at_time(h, s.wing1(i))?;
        for j in 0..2 {
            let b = sigma_at_time(h, s.wing2(j))?;
            let term = a.tensor(&b)?.scale(Complex::new(chsh_term_sign(i, j), 0.0));
            acc = acc.add(&term)?;
        }
    }
    Ok(acc)
}

/// `⟨S|B̃|S⟩`.
pub fn chsh_value(h: &Hamiltonian, s: &TimeSettings) -> Result<f64> {
    Ok(linalg::expectation(&singlet(), &chsh_operator(h, s)?)?)
}

/// `P(t,u) − P(t,u′) + P(t′,u) + P(t′,u′)` from [`correlation_simulated`].
pub fn chsh_value_from_correlations(h: &Hamiltonian, s: &TimeSettings) -> Result<f64> {
    let mut sum = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            sum += chsh_term_sign(i, j) * correlation_simulated(h, s.wing1(i), s.wing2(j))?;
        }
    }
    Ok(sum)
}

/// The same four-term sum from the closed form, times [`CORRELATION_SIGN`].
pub fn chsh_value_analytic(h: &Hamiltonian, s: &TimeSettings) -> f64 {
    let mut sum = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            sum += chsh_term_sign(i, j) * correlation_analytic(h, s.wing1(i), s.wing2(j));
        }
    }
    CORRELATION_SIGN * sum
}

/// Operator norm of `B̃`, estimated by power iteration on `B̃†B̃`.
pub fn chsh_operator_norm(h: &Hamiltonian, s: &TimeSettings) -> Result<f64> {
    Ok(linalg::operator_norm_estimate(&chsh_operator(h, s)?, 500))
}

/// Times that maximize `|⟨S|B̃|S⟩|`: with phases `t₀, t₀+π/2` on wing 1 and
/// `t₀+π/4, t₀+3π/4` on wing 2, each divided by `ΔE`.
pub fn optimal_settings(h: &Hamiltonian, t0: f64) -> Result<TimeSettings> {
    finite("t0", t0)?;
    let de = h.delta_e();
    TimeSettings::new(
        t0 / de,
        (t0 + FRAC_PI_2) / de,
        (t0 + FRAC_PI_4) / de,
        (t0 + 3.0 * FRAC_PI_4) / de,
    )
}

/// Both wings evolve for time `t`, wing 1 under `g1·H` and wing 2 under `g2·H`;
/// returns `⟨σ₀⊗σ₀⟩` on the resulting state.
pub fn correlation_g(h: &Hamiltonian, t: f64, g1: f64, g2: f64) -> Result<f64> {
    finite("g1", g1)?;
    finite("g2", g2)?;
    correlation_simulated(h, g1 * t, g2 * t)
}

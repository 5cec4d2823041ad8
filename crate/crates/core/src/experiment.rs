//! Finite-statistics pair experiments on the evolved singlet.
//!
//! Randomness comes from ChaCha8 with one stream per pair: pair `k` of a run
//! with seed `seed` reads from `ChaCha8Rng::seed_from_u64(seed)` switched to
//! stream `k`. Each pair consumes two 64-bit words. The first word's low two
//! bits pick the settings under the uniform scheduler; the top 53 bits of the
//! second word give a uniform `u ∈ [0,1)` that selects the outcome pair by
//! inverting the cumulative distribution in the order `(+,+) (+,−) (−,+) (−,−)`.
//! Since every pair owns its stream, sampling in parallel reproduces the
//! sequential record list exactly.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::lhv::Outcome;
use crate::linalg::{self, LinalgError};
use crate::quantum::{
    self, chsh_term_sign, GeneralizedPauli, Hamiltonian, QuantumError, TimeSettings,
};

/// Identifier written into run manifests.
pub const RNG_ALGORITHM: &str = "chacha8-stream-per-pair-v1";

/// Fewest records a setting cell may hold for the variance to be defined.
pub const MIN_CELL_COUNT: usize = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("unknown scheduler `{0}` (expected `uniform` or `fixed(i)` with i in 0..4)")]
    UnknownScheduler(String),
    #[error("need at least one pair")]
    NoPairs,
    #[error("setting cell {cell} has {count} records; at least {MIN_CELL_COUNT} required")]
    SparseCell { cell: SettingPair, count: usize },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

impl From<LinalgError> for ExperimentError {
    fn from(e: LinalgError) -> Self {
        ExperimentError::Quantum(e.into())
    }
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// A wing-1 / wing-2 setting choice; index 0 is `t` (or `u`), 1 is `t′` (or `u′`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SettingPair {
    pub setting1: u8,
    pub setting2: u8,
}

impl SettingPair {
    pub const ALL: [SettingPair; 4] = [
        SettingPair::new(0, 0),
        SettingPair::new(0, 1),
        SettingPair::new(1, 0),
        SettingPair::new(1, 1),
    ];

    pub const fn new(setting1: u8, setting2: u8) -> Self {
        Self { setting1, setting2 }
    }

    /// Position in [`SettingPair::ALL`].
    pub fn index(self) -> usize {
        usize::from(self.setting1) * 2 + usize::from(self.setting2)
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }

    pub fn chsh_sign(self) -> f64 {
        chsh_term_sign(usize::from(self.setting1), usize::from(self.setting2))
    }
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = if self.setting1 == 0 { "t" } else { "t'" };
        let b = if self.setting2 == 0 { "u" } else { "u'" };
        write!(f, "({a}, {b})")
    }
}

/// Born-rule probabilities for the four outcome pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    pub p_pp: f64,
    pub p_pm: f64,
    pub p_mp: f64,
    pub p_mm: f64,
}

impl JointDistribution {
    pub fn total(&self) -> f64 {
        self.p_pp + self.p_pm + self.p_mp + self.p_mm
    }

    /// `p(+,+) + p(−,−) − p(+,−) − p(−,+)`.
    pub fn correlation(&self) -> f64 {
        self.p_pp + self.p_mm - self.p_pm - self.p_mp
    }

    /// Probability of `+` on wing 1.
    pub fn marginal1_plus(&self) -> f64 {
        self.p_pp + self.p_pm
    }

    /// Probability of `+` on wing 2.
    pub fn marginal2_plus(&self) -> f64 {
        self.p_pp + self.p_mp
    }

    pub fn probability(&self, o1: Outcome, o2: Outcome) -> f64 {
        match (o1, o2) {
            (Outcome::Plus, Outcome::Plus) => self.p_pp,
            (Outcome::Plus, Outcome::Minus) => self.p_pm,
            (Outcome::Minus, Outcome::Plus) => self.p_mp,
            (Outcome::Minus, Outcome::Minus) => self.p_mm,
        }
    }

    /// Inverse-CDF draw for `u ∈ [0,1)`.
    pub fn sample(&self, u: f64) -> (Outcome, Outcome) {
        use Outcome::{Minus, Plus};
        let mut acc = self.p_pp;
        if u < acc {
            return (Plus, Plus);
        }
        acc += self.p_pm;
        if u < acc {
            return (Plus, Minus);
        }
        acc += self.p_mp;
        if u < acc {
            return (Minus, Plus);
        }
        (Minus, Minus)
    }
}

/// `p(o1,o2) = ⟨S(m,n)|Π_{o1} ⊗ Π_{o2}|S(m,n)⟩` with `Π_±` the eigenprojectors of `σ₀`.
pub fn joint_distribution(h: &Hamiltonian, m: f64, n: f64) -> Result<JointDistribution> {
    let state = quantum::evolved_state(h, m, n)?;
    let sigma0 = GeneralizedPauli::new(0.0)?;
    let plus = sigma0.projector(1);
    let minus = sigma0.projector(-1);
    let p = |a: &linalg::ComplexMatrix, b: &linalg::ComplexMatrix| -> Result<f64> {
        Ok(linalg::expectation(&state, &a.tensor(b)?)?)
    };
    Ok(JointDistribution {
        p_pp: p(&plus, &plus)?,
        p_pm: p(&plus, &minus)?,
        p_mp: p(&minus, &plus)?,
        p_mm: p(&minus, &minus)?,
    })
}

/// How each pair's settings are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheduler {
    /// Independent fair choice on each wing.
    #[default]
    Uniform,
    /// Every pair at the given [`SettingPair`] index.
    Fixed(u8),
}

impl Scheduler {
    fn choose(self, word: u64) -> SettingPair {
        match self {
            Scheduler::Uniform => SettingPair::new((word & 1) as u8, (word >> 1 & 1) as u8),
            Scheduler::Fixed(i) => SettingPair::from_index(usize::from(i)),
        }
    }
}

impl FromStr for Scheduler {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "uniform" {
            return Ok(Scheduler::Uniform);
        }
        s.strip_prefix("fixed(")
            .and_then(|rest| rest.strip_suffix(')'))
            .and_then(|i| i.trim().parse::<u8>().ok())
            .filter(|&i| i < 4)
            .map(Scheduler::Fixed)
            .ok_or_else(|| ExperimentError::UnknownScheduler(s.to_string()))
    }
}

impl fmt::Display for Scheduler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheduler::Uniform => write!(f, "uniform"),
            Scheduler::Fixed(i) => write!(f, "fixed({i})"),
        }
    }
}

/// One emitted pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairRecord {
    pub k: u64,
    pub settings: SettingPair,
    pub outcome1: Outcome,
    pub outcome2: Outcome,
}

impl PairRecord {
    pub fn product(&self) -> i32 {
        self.outcome1.value() * self.outcome2.value()
    }
}

fn unit_interval(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Simulates `n_pairs` pairs; deterministic in `(seed, n_pairs, scheduler)`.
pub fn run_experiment(
    h: &Hamiltonian,
    s: &TimeSettings,
    n_pairs: u64,
    seed: u64,
    scheduler: Scheduler,
) -> Result<Vec<PairRecord>> {
    if n_pairs == 0 {
        return Err(ExperimentError::NoPairs);
    }
    let mut dists = Vec::with_capacity(4);
    for cell in SettingPair::ALL {
        dists.push(joint_distribution(
            h,
            s.wing1(usize::from(cell.setting1)),
            s.wing2(usize::from(cell.setting2)),
        )?);
    }
    let records = (0..n_pairs)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let settings = scheduler.choose(rng.next_u64());
            let (outcome1, outcome2) =
                dists[settings.index()].sample(unit_interval(rng.next_u64()));
            PairRecord {
                k,
                settings,
                outcome1,
                outcome2,
            }
        })
        .collect();
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellEstimate {
    pub settings: SettingPair,
    pub correlation: f64,
    pub count: usize,
}

/// Four-term CHSH estimate with its plug-in standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct ChshEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Indexed like [`SettingPair::ALL`].
    pub per_setting: [CellEstimate; 4],
}

impl ChshEstimate {
    pub fn total_count(&self) -> usize {
        self.per_setting.iter().map(|c| c.count).sum()
    }
}

/// Per-cell mean of `outcome1·outcome2`, combined as `Ê(t,u) − Ê(t,u′) + Ê(t′,u) + Ê(t′,u′)`.
///
/// Each cell contributes variance `(1 − Ê²)/count`; cells are treated as independent.
pub fn estimate_chsh(records: &[PairRecord]) -> Result<ChshEstimate> {
    let mut sums = [0i64; 4];
    let mut counts = [0usize; 4];
    for r in records {
        let i = r.settings.index();
        sums[i] += i64::from(r.product());
        counts[i] += 1;
    }
    let mut per_setting = [CellEstimate {
        settings: SettingPair::ALL[0],
        correlation: 0.0,
        count: 0,
    }; 4];
    let mut value = 0.0;
    let mut variance = 0.0;
    for (i, cell) in SettingPair::ALL.into_iter().enumerate() {
        if counts[i] < MIN_CELL_COUNT {
            return Err(ExperimentError::SparseCell {
                cell,
                count: counts[i],
            });
        }
        let corr = sums[i] as f64 / counts[i] as f64;
        value += cell.chsh_sign() * corr;
        variance += (1.0 - corr * corr) / counts[i] as f64;
        per_setting[i] = CellEstimate {
            settings: cell,
            correlation: corr,
            count: counts[i],
        };
    }
    Ok(ChshEstimate {
        value,
        stderr: variance.sqrt(),
        per_setting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{optimal_settings, CORRELATION_SIGN};
    use std::f64::consts::FRAC_PI_2;

    fn rec(k: u64, cell: usize, o1: Outcome, o2: Outcome) -> PairRecord {
        PairRecord {
            k,
            settings: SettingPair::from_index(cell),
            outcome1: o1,
            outcome2: o2,
        }
    }

    #[test]
    fn scheduler_ids() {
        assert_eq!("uniform".parse::<Scheduler>().unwrap(), Scheduler::Uniform);
        assert_eq!(
            "fixed(3)".parse::<Scheduler>().unwrap(),
            Scheduler::Fixed(3)
        );
        for bad in ["fixed(4)", "random", "fixed()", "fixed(1"] {
            assert!(matches!(
                bad.parse::<Scheduler>(),
                Err(ExperimentError::UnknownScheduler(_))
            ));
        }
        assert_eq!(
            Scheduler::Fixed(2)
                .to_string()
                .parse::<Scheduler>()
                .unwrap(),
            Scheduler::Fixed(2)
        );
    }

    #[test]
    fn equal_times_perfectly_anticorrelated() {
        assert_eq!(CORRELATION_SIGN, -1.0);
        let h = Hamiltonian::new(0.5, 1.9).unwrap();
        let d = joint_distribution(&h, 0.8, 0.8).unwrap();
        assert!(d.p_pp.abs() < 1e-12 && d.p_mm.abs() < 1e-12);
        assert!((d.p_pm - 0.5).abs() < 1e-12 && (d.p_mp - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quarter_period_is_uniform() {
        let h = Hamiltonian::from_gap(2.0).unwrap();
        let d = joint_distribution(&h, 0.1, 0.1 + FRAC_PI_2 / 2.0).unwrap();
        for p in [d.p_pp, d.p_pm, d.p_mp, d.p_mm] {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_inverts_cdf() {
        let d = JointDistribution {
            p_pp: 0.1,
            p_pm: 0.2,
            p_mp: 0.3,
            p_mm: 0.4,
        };
        use Outcome::{Minus, Plus};
        assert_eq!(d.sample(0.0), (Plus, Plus));
        assert_eq!(d.sample(0.15), (Plus, Minus));
        assert_eq!(d.sample(0.5), (Minus, Plus));
        assert_eq!(d.sample(0.99), (Minus, Minus));
    }

    #[test]
    fn zero_pairs_rejected() {
        let h = Hamiltonian::from_gap(1.0).unwrap();
        let s = optimal_settings(&h, 0.0).unwrap();
        assert_eq!(
            run_experiment(&h, &s, 0, 1, Scheduler::Uniform),
            Err(ExperimentError::NoPairs)
        );
    }

    #[test]
    fn fixed_scheduler_uses_one_cell() {
        let h = Hamiltonian::from_gap(1.0).unwrap();
        let s = optimal_settings(&h, 0.0).unwrap();
        let recs = run_experiment(&h, &s, 500, 9, Scheduler::Fixed(1)).unwrap();
        assert!(recs.iter().all(|r| r.settings == SettingPair::new(0, 1)));
        assert!(recs.iter().enumerate().all(|(i, r)| r.k == i as u64));
    }

    #[test]
    fn all_plus_records() {
        let recs: Vec<_> = (0..8)
            .map(|k| rec(k, (k % 4) as usize, Outcome::Plus, Outcome::Plus))
            .collect();
        let est = estimate_chsh(&recs).unwrap();
        assert_eq!(est.value, 2.0);
        assert_eq!(est.stderr, 0.0);
        assert_eq!(est.total_count(), 8);
    }

    #[test]
    fn sparse_cell_named() {
        let recs: Vec<_> = (0..6)
            .map(|k| rec(k, (k % 3) as usize, Outcome::Plus, Outcome::Minus))
            .collect();
        let err = estimate_chsh(&recs).unwrap_err();
        assert_eq!(
            err,
            ExperimentError::SparseCell {
                cell: SettingPair::new(1, 1),
                count: 0
            }
        );
        assert!(err.to_string().contains("(t', u')"));
    }
}

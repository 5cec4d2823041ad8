//! Local-realist value assignments and their Bell combination.
//!
//! A [`Strategy`] assigns every pair a definite outcome `σ^s_{m,n}(k) = ±1`
//! for wing `s`, its own setting `m` and the distant setting `n`. A
//! [`PiStrategy`] obeys parameter independence: the value depends on the own
//! setting only.
//!
//! Deterministic strategies are enough to find the bounds. A stochastic local
//! model is a convex mixture of deterministic ones, the Bell combination is
//! linear in the mixture weights, and a linear functional on a polytope takes
//! its extreme values at vertices. Enumerating the 16 parameter-independent
//! tables (or all 256 unrestricted tables) is therefore exhaustive.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LhvError {
    #[error("labels within wing {0} must be distinct")]
    DuplicateLabel(Wing),
    #[error("no value for wing {wing}, own setting `{own}`, other setting `{other}`")]
    MissingEntry {
        wing: Wing,
        own: Label,
        other: Label,
    },
    #[error("ensemble must contain at least one strategy")]
    EmptyEnsemble,
    #[error("correlation requires parameter-independent strategies (member {0} is not)")]
    NotParameterIndependent(usize),
}

pub type Result<T> = std::result::Result<T, LhvError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Wing {
    One,
    Two,
}

impl fmt::Display for Wing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wing::One => write!(f, "1"),
            Wing::Two => write!(f, "2"),
        }
    }
}

/// A dichotomous value. `Minus` orders before `Plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Minus,
    Plus,
}

impl Outcome {
    pub fn value(self) -> i32 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// An opaque setting identifier (an angle, a time, or just a name).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The two settings of each wing: `(a, a′)` for wing 1 and `(b, b′)` for wing 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SettingLabels {
    wing1: [Label; 2],
    wing2: [Label; 2],
}

impl SettingLabels {
    pub fn new(a: Label, a_prime: Label, b: Label, b_prime: Label) -> Result<Self> {
        if a == a_prime {
            return Err(LhvError::DuplicateLabel(Wing::One));
        }
        if b == b_prime {
            return Err(LhvError::DuplicateLabel(Wing::Two));
        }
        Ok(Self {
            wing1: [a, a_prime],
            wing2: [b, b_prime],
        })
    }

    /// Labels `a`, `a'`, `b`, `b'`.
    pub fn standard() -> Self {
        Self::new("a".into(), "a'".into(), "b".into(), "b'".into()).expect("distinct")
    }

    pub fn wing(&self, wing: Wing) -> &[Label; 2] {
        match wing {
            Wing::One => &self.wing1,
            Wing::Two => &self.wing2,
        }
    }

    /// Table entries in canonical order: wing 1 `(a,b) (a,b′) (a′,b) (a′,b′)`,
    /// then wing 2 `(b,a) (b,a′) (b′,a) (b′,a′)`.
    pub fn full_entry_order(&self) -> Vec<(Wing, Label, Label)> {
        let mut out = Vec::with_capacity(8);
        for (wing, own, other) in [
            (Wing::One, &self.wing1, &self.wing2),
            (Wing::Two, &self.wing2, &self.wing1),
        ] {
            for o in own {
                for p in other {
                    out.push((wing, o.clone(), p.clone()));
                }
            }
        }
        out
    }

    /// Entries of a parameter-independent table: `a, a′, b, b′`.
    pub fn pi_entry_order(&self) -> Vec<(Wing, Label)> {
        self.wing1
            .iter()
            .map(|l| (Wing::One, l.clone()))
            .chain(self.wing2.iter().map(|l| (Wing::Two, l.clone())))
            .collect()
    }
}

/// Anything that answers `σ^s_{own,other}`.
pub trait ValueAssignment {
    fn value(&self, wing: Wing, own: &Label, other: &Label) -> Result<Outcome>;
}

/// An unrestricted value table keyed by `(wing, own setting, other setting)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Strategy {
    values: BTreeMap<(Wing, Label, Label), Outcome>,
}

impl Strategy {
    pub fn new() -> Self {
        Self {
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, wing: Wing, own: &str, other: &str, outcome: Outcome) -> Self {
        self.insert(wing, Label::new(own), Label::new(other), outcome);
        self
    }

    pub fn insert(&mut self, wing: Wing, own: Label, other: Label, outcome: Outcome) {
        self.values.insert((wing, own, other), outcome);
    }

    /// The table whose canonical entry `i` is `Plus` iff bit `7 − i` of `bits` is set.
    ///
    /// Counting `bits` upward visits tables in lexicographic order with `Minus < Plus`.
    pub fn from_bits(labels: &SettingLabels, bits: u8) -> Self {
        let values = labels
            .full_entry_order()
            .into_iter()
            .enumerate()
            .map(|(i, key)| (key, Outcome::from_bit(bits >> (7 - i) & 1 == 1)))
            .collect();
        Self { values }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Wing, Label, Label), &Outcome)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True if some value changes with the distant setting.
    pub fn depends_on_other_setting(&self, labels: &SettingLabels) -> bool {
        [Wing::One, Wing::Two].into_iter().any(|wing| {
            let other_wing = match wing {
                Wing::One => Wing::Two,
                Wing::Two => Wing::One,
            };
            let [n0, n1] = labels.wing(other_wing);
            labels.wing(wing).iter().any(|own| {
                let v0 = self.values.get(&(wing, own.clone(), n0.clone()));
                let v1 = self.values.get(&(wing, own.clone(), n1.clone()));
                v0 != v1
            })
        })
    }

    pub fn negate(&self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), v.negate()))
                .collect(),
        }
    }
}

impl Default for Strategy {
    fn default() -> Self {
        Self::new()
    }
}

impl ValueAssignment for Strategy {
    fn value(&self, wing: Wing, own: &Label, other: &Label) -> Result<Outcome> {
        self.values
            .get(&(wing, own.clone(), other.clone()))
            .copied()
            .ok_or_else(|| LhvError::MissingEntry {
                wing,
                own: own.clone(),
                other: other.clone(),
            })
    }
}

/// A parameter-independent table keyed by `(wing, own setting)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PiStrategy {
    values: BTreeMap<(Wing, Label), Outcome>,
}

impl PiStrategy {
    pub fn new() -> Self {
        Self {
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, wing: Wing, own: &str, outcome: Outcome) -> Self {
        self.insert(wing, Label::new(own), outcome);
        self
    }

    pub fn insert(&mut self, wing: Wing, own: Label, outcome: Outcome) {
        self.values.insert((wing, own), outcome);
    }

    /// Canonical entry `i` (order `a, a′, b, b′`) is `Plus` iff bit `3 − i` is set.
    pub fn from_bits(labels: &SettingLabels, bits: u8) -> Self {
        let values = labels
            .pi_entry_order()
            .into_iter()
            .enumerate()
            .map(|(i, key)| (key, Outcome::from_bit(bits >> (3 - i) & 1 == 1)))
            .collect();
        Self { values }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Wing, Label), &Outcome)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The same assignment written as a full table that ignores the distant setting.
    pub fn lift(&self, labels: &SettingLabels) -> Result<Strategy> {
        let mut out = Strategy::new();
        for (wing, own, other) in labels.full_entry_order() {
            let v = self.value(wing, &own, &other)?;
            out.insert(wing, own, other, v);
        }
        Ok(out)
    }

    pub fn negate(&self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|(k, v)| (k.clone(), v.negate()))
                .collect(),
        }
    }
}

impl Default for PiStrategy {
    fn default() -> Self {
        Self::new()
    }
}

impl ValueAssignment for PiStrategy {
    fn value(&self, wing: Wing, own: &Label, other: &Label) -> Result<Outcome> {
        self.values
            .get(&(wing, own.clone()))
            .copied()
            .ok_or_else(|| LhvError::MissingEntry {
                wing,
                own: own.clone(),
                other: other.clone(),
            })
    }
}

/// `B(k) = σ¹_{a,b}σ²_{b,a} − σ¹_{a,b′}σ²_{b′,a} + σ¹_{a′,b}σ²_{b,a′} + σ¹_{a′,b′}σ²_{b′,a′}`.
pub fn bell_combination<S: ValueAssignment + ?Sized>(
    strategy: &S,
    labels: &SettingLabels,
) -> Result<i32> {
    let [a, a_prime] = labels.wing(Wing::One);
    let [b, b_prime] = labels.wing(Wing::Two);
    let term = |m: &Label, n: &Label| -> Result<i32> {
        Ok(strategy.value(Wing::One, m, n)?.value() * strategy.value(Wing::Two, n, m)?.value())
    };
    Ok(term(a, b)? - term(a, b_prime)? + term(a_prime, b)? + term(a_prime, b_prime)?)
}

/// Result of an exhaustive search over strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct BellMaximum<S> {
    /// Largest `|B|` found.
    pub value: i32,
    /// First table in enumeration order reaching `value`.
    pub witness: S,
    pub scanned: usize,
}

fn maximize<S, I>(labels: &SettingLabels, candidates: I) -> BellMaximum<S>
where
    S: ValueAssignment,
    I: Iterator<Item = S>,
{
    let mut best: Option<(i32, S)> = None;
    let mut scanned = 0;
    for s in candidates {
        scanned += 1;
        let v = bell_combination(&s, labels)
            .expect("enumerated tables are complete")
            .abs();
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, s));
        }
    }
    let (value, witness) = best.expect("at least one candidate");
    BellMaximum {
        value,
        witness,
        scanned,
    }
}

/// All 16 parameter-independent tables in lexicographic order.
pub fn pi_strategies(labels: &SettingLabels) -> impl Iterator<Item = PiStrategy> + '_ {
    (0u8..16).map(move |bits| PiStrategy::from_bits(labels, bits))
}

/// All 256 unrestricted tables in lexicographic order.
pub fn full_strategies(labels: &SettingLabels) -> impl Iterator<Item = Strategy> + '_ {
    (0u8..=255).map(move |bits| Strategy::from_bits(labels, bits))
}

/// Exhaustive `max |B|` over parameter-independent strategies; equals 2.
pub fn max_over_pi_strategies(labels: &SettingLabels) -> BellMaximum<PiStrategy> {
    maximize(labels, pi_strategies(labels))
}

/// Exhaustive `max |B|` over unrestricted strategies; equals 4.
pub fn max_over_full_strategies(labels: &SettingLabels) -> BellMaximum<Strategy> {
    maximize(labels, full_strategies(labels))
}

/// One member of an [`Ensemble`].
#[derive(Debug, Clone, PartialEq)]
pub enum LocalStrategy {
    Independent(PiStrategy),
    Dependent(Strategy),
}

impl ValueAssignment for LocalStrategy {
    fn value(&self, wing: Wing, own: &Label, other: &Label) -> Result<Outcome> {
        match self {
            LocalStrategy::Independent(s) => s.value(wing, own, other),
            LocalStrategy::Dependent(s) => s.value(wing, own, other),
        }
    }
}

/// `N` strategies, each with weight `1/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<LocalStrategy>,
}

impl Ensemble {
    pub fn new(members: Vec<LocalStrategy>) -> Result<Self> {
        if members.is_empty() {
            return Err(LhvError::EmptyEnsemble);
        }
        Ok(Self { members })
    }

    pub fn from_pi(members: Vec<PiStrategy>) -> Result<Self> {
        Self::new(
            members
                .into_iter()
                .map(LocalStrategy::Independent)
                .collect(),
        )
    }

    pub fn members(&self) -> &[LocalStrategy] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn pi_members(&self) -> Result<impl Iterator<Item = &PiStrategy>> {
        if let Some(i) = self
            .members
            .iter()
            .position(|m| matches!(m, LocalStrategy::Dependent(_)))
        {
            return Err(LhvError::NotParameterIndependent(i));
        }
        Ok(self.members.iter().map(|m| match m {
            LocalStrategy::Independent(s) => s,
            LocalStrategy::Dependent(_) => unreachable!(),
        }))
    }
}

/// `P(m,n) = (1/N) Σ σ¹_m(k) σ²_n(k)` over a parameter-independent ensemble.
pub fn ensemble_correlation(e: &Ensemble, m: &Label, n: &Label) -> Result<f64> {
    let mut sum = 0i64;
    for s in e.pi_members()? {
        sum += i64::from(s.value(Wing::One, m, n)?.value() * s.value(Wing::Two, n, m)?.value());
    }
    Ok(sum as f64 / e.len() as f64)
}

/// `(1/N) Σ B(k)`; lies in `[−2, 2]` for any parameter-independent ensemble.
pub fn ensemble_bell(e: &Ensemble, labels: &SettingLabels) -> Result<f64> {
    let mut sum = 0i64;
    for s in e.pi_members()? {
        sum += i64::from(bell_combination(s, labels)?);
    }
    Ok(sum as f64 / e.len() as f64)
}

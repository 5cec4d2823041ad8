//! Events in 1+1 Minkowski spacetime (`c = 1`) and the time orderings of three
//! events that inertial frames can realize.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Relative width of the lightlike band on `t² − x²`.
pub const LIGHTLIKE_TOL: f64 = 1e-9;
/// Frame-time differences below this count as simultaneous.
pub const SIMULTANEITY_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelativityError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("boost velocity {0} outside (-1, 1)")]
    Superluminal(f64),
    #[error("events {0} and {1} coincide")]
    Coincident(EventLabel, EventLabel),
    #[error("no strict ordering found in velocity interval ({0}, {1})")]
    NoStrictProbe(f64, f64),
}

pub type Result<T> = std::result::Result<T, RelativityError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventLabel {
    EtaPm,
    EtaPrime,
    EtaDprime,
}

impl EventLabel {
    pub const ALL: [EventLabel; 3] = [
        EventLabel::EtaPm,
        EventLabel::EtaPrime,
        EventLabel::EtaDprime,
    ];
}

impl fmt::Display for EventLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventLabel::EtaPm => "eta_pm",
            EventLabel::EtaPrime => "eta_prime",
            EventLabel::EtaDprime => "eta_dprime",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub x: f64,
    pub label: EventLabel,
}

impl Event {
    pub fn new(t: f64, x: f64, label: EventLabel) -> Result<Self> {
        if !(t.is_finite() && x.is_finite()) {
            return Err(RelativityError::NonFinite);
        }
        Ok(Self { t, x, label })
    }

    /// `t² − x²` of the separation from the origin.
    pub fn interval(&self) -> f64 {
        self.t * self.t - self.x * self.x
    }
}

/// A frame moving with velocity `v` relative to the reference frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost {
    v: f64,
}

impl Boost {
    pub fn new(v: f64) -> Result<Self> {
        if !v.is_finite() {
            return Err(RelativityError::NonFinite);
        }
        if v.abs() >= 1.0 {
            return Err(RelativityError::Superluminal(v));
        }
        Ok(Self { v })
    }

    pub fn velocity(&self) -> f64 {
        self.v
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.v * self.v).sqrt()
    }

    /// Relativistic velocity addition: applying `self` then `then`.
    pub fn compose(&self, then: &Boost) -> Boost {
        Boost {
            v: (self.v + then.v) / (1.0 + self.v * then.v),
        }
    }
}

/// `t′ = γ(t − v·x)`, `x′ = γ(x − v·t)`.
pub fn boost(e: &Event, b: &Boost) -> Event {
    let g = b.gamma();
    Event {
        t: g * (e.t - b.v * e.x),
        x: g * (e.x - b.v * e.t),
        label: e.label,
    }
}

/// Frame time of `e` in the frame moving at `v`.
fn frame_time(e: &Event, v: f64) -> f64 {
    (e.t - v * e.x) / (1.0 - v * v).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntervalClass {
    Timelike,
    Spacelike,
    Lightlike,
}

impl fmt::Display for IntervalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalClass::Timelike => "timelike",
            IntervalClass::Spacelike => "spacelike",
            IntervalClass::Lightlike => "lightlike",
        })
    }
}

/// Classifies the separation `e2 − e1`.
pub fn classify(e1: &Event, e2: &Event) -> IntervalClass {
    let (dt, dx) = (e2.t - e1.t, e2.x - e1.x);
    let (t2, x2) = (dt * dt, dx * dx);
    let s = t2 - x2;
    if s.abs() <= LIGHTLIKE_TOL * t2.max(x2).max(1.0) {
        IntervalClass::Lightlike
    } else if s > 0.0 {
        IntervalClass::Timelike
    } else {
        IntervalClass::Spacelike
    }
}

/// For a spacelike pair, the velocity of the frame in which both are simultaneous.
///
/// Timelike and lightlike pairs have the same order in every frame and give `None`.
pub fn critical_velocity(e1: &Event, e2: &Event) -> Result<Option<f64>> {
    if e1.t == e2.t && e1.x == e2.x {
        return Err(RelativityError::Coincident(e1.label, e2.label));
    }
    Ok(match classify(e1, e2) {
        IntervalClass::Spacelike => Some((e2.t - e1.t) / (e2.x - e1.x)),
        _ => None,
    })
}

/// Labels sorted by frame time, earliest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeOrdering(pub [EventLabel; 3]);

impl fmt::Display for TimeOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a} < {b} < {c}")
    }
}

/// The strict frame-time ordering at velocity `v`, or `None` if any two
/// events are within [`SIMULTANEITY_GUARD`] of each other.
pub fn ordering_at(events: &[Event; 3], v: f64) -> Option<TimeOrdering> {
    let mut timed: Vec<(f64, EventLabel)> =
        events.iter().map(|e| (frame_time(e, v), e.label)).collect();
    timed.sort_by(|a, b| a.0.total_cmp(&b.0));
    if timed
        .windows(2)
        .any(|w| w[1].0 - w[0].0 < SIMULTANEITY_GUARD)
    {
        return None;
    }
    Some(TimeOrdering([timed[0].1, timed[1].1, timed[2].1]))
}

fn check_pairs(events: &[Event; 3]) -> Result<Vec<f64>> {
    let mut critical = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            if let Some(v) = critical_velocity(&events[i], &events[j])? {
                critical.push(v);
            }
        }
    }
    Ok(critical)
}

/// A realizable ordering together with one frame velocity that shows it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingWitness {
    pub ordering: TimeOrdering,
    pub velocity: f64,
}

/// Every strict time ordering of the three events realized by some frame.
///
/// The critical velocities of the spacelike pairs cut `(−1, 1)` into open
/// intervals on which the ordering is constant; one probe per interval is
/// enough. Results are sorted by witness velocity.
pub fn achievable_orderings(events: &[Event; 3]) -> Result<Vec<OrderingWitness>> {
    let mut cuts = check_pairs(events)?;
    cuts.retain(|v| v.abs() < 1.0);
    cuts.push(-1.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut found: BTreeMap<TimeOrdering, f64> = BTreeMap::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let probe = [0.5, 0.25, 0.75, 0.125, 0.875, 0.0625, 0.9375]
            .iter()
            .map(|f| lo + f * (hi - lo))
            .filter(|v| v.abs() < 1.0)
            .find_map(|v| ordering_at(events, v).map(|o| (o, v)));
        match probe {
            Some((o, v)) => {
                found.entry(o).or_insert(v);
            }
            // Intervals too narrow to resolve at double precision carry no
            // distinguishable ordering.
            None if hi - lo < 1e-9 => {}
            None => return Err(RelativityError::NoStrictProbe(lo, hi)),
        }
    }
    let mut out: Vec<OrderingWitness> = found
        .into_iter()
        .map(|(ordering, velocity)| OrderingWitness { ordering, velocity })
        .collect();
    out.sort_by(|a, b| a.velocity.total_cmp(&b.velocity));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use EventLabel::*;

    fn ev(t: f64, x: f64, label: EventLabel) -> Event {
        Event::new(t, x, label).unwrap()
    }

    #[test]
    fn boost_validation() {
        assert!(Boost::new(1.0).is_err());
        assert!(Boost::new(-1.5).is_err());
        assert!(Boost::new(f64::NAN).is_err());
        assert!(Event::new(f64::INFINITY, 0.0, EtaPm).is_err());
    }

    #[test]
    fn zero_boost_is_identity() {
        let e = ev(1.3, -0.4, EtaPrime);
        assert_eq!(boost(&e, &Boost::new(0.0).unwrap()), e);
    }

    #[test]
    fn boost_formula() {
        let e = ev(1.0, 3.0, EtaPm);
        let b = boost(&e, &Boost::new(0.5).unwrap());
        assert!((b.t - (-0.5 / 0.75f64.sqrt())).abs() < 1e-15);
        assert!((b.t + 0.57735).abs() < 1e-5);
        assert!((b.x - 2.5 / 0.75f64.sqrt()).abs() < 1e-15);
        assert_eq!(b.label, EtaPm);
    }

    #[test]
    fn classification() {
        let o = ev(0.0, 0.0, EtaPm);
        assert_eq!(
            classify(&o, &ev(1.0, 0.0, EtaPrime)),
            IntervalClass::Timelike
        );
        assert_eq!(
            classify(&o, &ev(0.0, 1.0, EtaPrime)),
            IntervalClass::Spacelike
        );
        assert_eq!(
            classify(&o, &ev(1.0, 1.0, EtaPrime)),
            IntervalClass::Lightlike
        );
    }

    #[test]
    fn critical_velocities() {
        let o = ev(0.0, 0.0, EtaPm);
        assert_eq!(
            critical_velocity(&o, &ev(1.0, 3.0, EtaPrime)).unwrap(),
            Some(1.0 / 3.0)
        );
        assert_eq!(
            critical_velocity(&o, &ev(2.0, 1.0, EtaPrime)).unwrap(),
            None
        );
        assert_eq!(
            critical_velocity(&o, &ev(0.0, -2.0, EtaPrime)).unwrap(),
            Some(0.0)
        );
        assert!(matches!(
            critical_velocity(&o, &ev(0.0, 0.0, EtaPrime)),
            Err(RelativityError::Coincident(EtaPm, EtaPrime))
        ));
    }

    #[test]
    fn pair_is_simultaneous_at_critical_velocity() {
        let a = ev(0.2, -1.0, EtaPm);
        let b = ev(1.1, 2.5, EtaPrime);
        let v = critical_velocity(&a, &b).unwrap().unwrap();
        let bst = Boost::new(v).unwrap();
        assert!((boost(&a, &bst).t - boost(&b, &bst).t).abs() < 1e-12);
    }

    #[test]
    fn collinear_spacelike_triple_has_two_orderings() {
        // All three lie on one spacelike line, so they share a single critical velocity.
        let events = [
            ev(0.0, 0.0, EtaPm),
            ev(0.5, 2.0, EtaPrime),
            ev(1.0, 4.0, EtaDprime),
        ];
        let orders = achievable_orderings(&events).unwrap();
        assert_eq!(orders.len(), 2);
        assert_eq!(
            orders[0].ordering,
            TimeOrdering([EtaPm, EtaPrime, EtaDprime])
        );
        assert_eq!(
            orders[1].ordering,
            TimeOrdering([EtaDprime, EtaPrime, EtaPm])
        );
        assert_eq!(ordering_at(&events, 0.0), Some(orders[0].ordering));
    }

    #[test]
    fn timelike_worldline_has_one_ordering() {
        let events = [
            ev(0.0, 0.0, EtaPm),
            ev(1.0, 0.1, EtaPrime),
            ev(2.0, 0.2, EtaDprime),
        ];
        let orders = achievable_orderings(&events).unwrap();
        assert_eq!(orders.len(), 1);
        assert_eq!(
            orders[0].ordering,
            TimeOrdering([EtaPm, EtaPrime, EtaDprime])
        );
    }

    #[test]
    fn sliding_event_gives_three_orderings() {
        let events = [
            ev(0.0, 0.0, EtaPm),
            ev(1.0, 5.0, EtaPrime),
            ev(2.0, 5.5, EtaDprime),
        ];
        let orders: Vec<_> = achievable_orderings(&events)
            .unwrap()
            .into_iter()
            .map(|w| w.ordering)
            .collect();
        assert_eq!(
            orders,
            vec![
                TimeOrdering([EtaPm, EtaPrime, EtaDprime]),
                TimeOrdering([EtaPrime, EtaPm, EtaDprime]),
                TimeOrdering([EtaPrime, EtaDprime, EtaPm]),
            ]
        );
    }

    #[test]
    fn coincident_triple_rejected() {
        let events = [
            ev(0.0, 0.0, EtaPm),
            ev(1.0, 1.0, EtaPrime),
            ev(1.0, 1.0, EtaDprime),
        ];
        assert!(achievable_orderings(&events).is_err());
    }
}

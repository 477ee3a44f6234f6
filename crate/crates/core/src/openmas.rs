//! Open multi-agent system event layer: replacements, the bounded
//! arrival/departure size process, and the full simulation loops.
//!
//! Events happen at discrete indices `k = 1, 2, ...`; between events the
//! state propagates in continuous time under the topology sampled for that
//! interval. Each step samples a fresh topology (independent of everything
//! sampled before), propagates for `gamma / n`, applies the event, and
//! records the disagreement before and after the event together with the
//! normalized algebraic connectivity of the active topology.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::consensus::{disagreement, Propagator};
use crate::error::{Error, Result};
use crate::graphon::{ExpectedGraph, Graphon, SimpleGraph};
use crate::rng::{purpose, substream};
use crate::scalar::{count, real, to_f64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Arrival,
    Departure,
    Replacement,
}

impl std::fmt::Display for EventKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EventKind::Arrival => "arrival",
            EventKind::Departure => "departure",
            EventKind::Replacement => "replacement",
        };
        f.write_str(s)
    }
}

/// Zero-mean distribution with variance `sigma2` for the values of joining
/// or replacing agents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ArrivalDistribution<T> {
    Gaussian {
        sigma2: T,
    },
    /// Uniform on `[-sqrt(3 sigma2), sqrt(3 sigma2)]`.
    Uniform {
        sigma2: T,
    },
}

impl<T: Scalar> ArrivalDistribution<T> {
    pub fn gaussian(sigma2: T) -> Result<Self> {
        check_sigma2(sigma2)?;
        Ok(ArrivalDistribution::Gaussian { sigma2 })
    }

    pub fn uniform(sigma2: T) -> Result<Self> {
        check_sigma2(sigma2)?;
        Ok(ArrivalDistribution::Uniform { sigma2 })
    }

    pub fn sigma2(&self) -> T {
        match *self {
            ArrivalDistribution::Gaussian { sigma2 } | ArrivalDistribution::Uniform { sigma2 } => {
                sigma2
            }
        }
    }

    /// Draws one value. The underlying variate is always an `f64`, so the
    /// consumed stream does not depend on the working precision.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        match *self {
            ArrivalDistribution::Gaussian { sigma2 } => {
                let z: f64 = StandardNormal.sample(rng);
                sigma2.sqrt() * real(z)
            }
            ArrivalDistribution::Uniform { sigma2 } => {
                let u: f64 = rng.random::<f64>() * 2.0 - 1.0;
                (real::<T>(3.0) * sigma2).sqrt() * real(u)
            }
        }
    }
}

fn check_sigma2<T: Scalar>(sigma2: T) -> Result<()> {
    if sigma2 < T::zero() {
        return Err(Error::domain("variance must be nonnegative"));
    }
    Ok(())
}

/// How the initial agent states are produced.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum InitialStates<T> {
    /// I.i.d. draws from the arrival distribution, so the system starts
    /// statistically compatible with later arrivals. This is the default.
    #[default]
    Arrivals,
    Constant {
        value: T,
    },
    Explicit {
        values: Vec<T>,
    },
}

/// Configuration of a replacement run: fixed size `n`, inter-event interval
/// `gamma / n`, `events` replacements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplacementConfig<T> {
    pub n: usize,
    pub gamma: T,
    pub dist: ArrivalDistribution<T>,
    pub events: usize,
    #[serde(default)]
    pub initial: InitialStates<T>,
    pub seed: u64,
    /// When false, the topology sampled for the first interval is kept for
    /// the whole run (the fixed-topology variant).
    #[serde(default = "default_true")]
    pub resample_topology: bool,
}

fn default_true() -> bool {
    true
}

impl<T: Scalar> ReplacementConfig<T> {
    pub fn sigma2(&self) -> T {
        self.dist.sigma2()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain("replacement runs need n >= 2"));
        }
        if self.gamma < T::zero() {
            return Err(Error::domain("gamma must be nonnegative"));
        }
        if self.events == 0 {
            return Err(Error::domain("at least one event is required"));
        }
        if let InitialStates::Explicit { values } = &self.initial {
            if values.len() != self.n {
                return Err(Error::contract(format!(
                    "explicit initial states have {} entries, expected {}",
                    values.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// Configuration of an arrival/departure run with size bounded in
/// `[n_min, n_max]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenSystemConfig<T> {
    pub n_min: usize,
    pub n_max: usize,
    /// Initial size; must lie in `[n_min, n_max]`.
    pub n0: usize,
    pub gamma: T,
    pub dist: ArrivalDistribution<T>,
    pub events: usize,
    #[serde(default)]
    pub initial: InitialStates<T>,
    pub seed: u64,
}

impl<T: Scalar> OpenSystemConfig<T> {
    pub fn sigma2(&self) -> T {
        self.dist.sigma2()
    }

    /// Rate constant `tau = 1 / (n_max - n_min)`, so that
    /// `tau * (n_max - n_min) = 1` exactly.
    pub fn tau(&self) -> T {
        T::one() / count::<T>(self.n_max - self.n_min)
    }

    /// Departure probability `tau * (n - n_min)` at the current size,
    /// evaluated as the integer ratio `(n - n_min) / (n_max - n_min)` so the
    /// boundary probabilities 0 and 1 are exact.
    pub fn departure_probability(&self, n: usize) -> Result<T> {
        if n < self.n_min || n > self.n_max {
            return Err(Error::Invariant(format!(
                "size {n} escaped [{}, {}]",
                self.n_min, self.n_max
            )));
        }
        Ok(count::<T>(n - self.n_min) / count::<T>(self.n_max - self.n_min))
    }

    pub fn validate(&self) -> Result<()> {
        // mu2 of the active topology is recorded at every event, which
        // needs at least two vertices at all times.
        if self.n_min < 2 {
            return Err(Error::domain("open-system runs need n_min >= 2"));
        }
        if self.n_max <= self.n_min {
            return Err(Error::domain("n_max must exceed n_min"));
        }
        if self.n0 < self.n_min || self.n0 > self.n_max {
            return Err(Error::domain("initial size must lie in [n_min, n_max]"));
        }
        if self.gamma < T::zero() {
            return Err(Error::domain("gamma must be nonnegative"));
        }
        if self.events == 0 {
            return Err(Error::domain("at least one event is required"));
        }
        if let InitialStates::Explicit { values } = &self.initial {
            if values.len() != self.n0 {
                return Err(Error::contract(format!(
                    "explicit initial states have {} entries, expected {}",
                    values.len(),
                    self.n0
                )));
            }
        }
        Ok(())
    }
}

/// Removes one uniformly chosen agent. Consumes one index draw.
pub fn apply_departure<T: Scalar, R: Rng + ?Sized>(
    x: &DVector<T>,
    rng: &mut R,
) -> Result<DVector<T>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::domain("a departure would empty the system"));
    }
    let leaving = rng.random_range(0..n);
    Ok(DVector::from_iterator(
        n - 1,
        x.iter()
            .enumerate()
            .filter(|&(i, _)| i != leaving)
            .map(|(_, &v)| v),
    ))
}

/// Appends one agent drawn from the arrival distribution. Consumes one
/// value draw.
pub fn apply_arrival<T: Scalar, R: Rng + ?Sized>(
    x: &DVector<T>,
    dist: &ArrivalDistribution<T>,
    rng: &mut R,
) -> DVector<T> {
    let n = x.len();
    DVector::from_iterator(
        n + 1,
        x.iter().copied().chain(std::iter::once(dist.sample(rng))),
    )
}

/// Replaces one uniformly chosen agent with a fresh draw. Consumes one
/// index draw, then one value draw.
pub fn apply_replacement<T: Scalar, R: Rng + ?Sized>(
    x: &DVector<T>,
    dist: &ArrivalDistribution<T>,
    rng: &mut R,
) -> Result<DVector<T>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::domain("replacements need at least two agents"));
    }
    let replaced = rng.random_range(0..n);
    let mut next = x.clone();
    next[replaced] = dist.sample(rng);
    Ok(next)
}

/// Draws the next event kind: departure with probability
/// `tau * (n - n_min)`, otherwise arrival. Consumes one uniform draw.
pub fn next_event<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    cfg: &OpenSystemConfig<T>,
    rng: &mut R,
) -> Result<EventKind> {
    let p_departure = to_f64(cfg.departure_probability(n)?);
    let u: f64 = rng.random();
    Ok(if u < p_departure {
        EventKind::Departure
    } else {
        EventKind::Arrival
    })
}

/// Record of one event: time, kind, sizes, disagreement before/after, and
/// the normalized algebraic connectivity of the topology active during the
/// preceding interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EventRecord<T> {
    pub k: usize,
    pub t: T,
    pub event: EventKind,
    pub n_before: usize,
    pub n_after: usize,
    pub v_before: T,
    pub v_after: T,
    pub mu2: T,
}

/// Ordered event records of one simulated trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory<T> {
    pub records: Vec<EventRecord<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn tail(&self, burn_in: f64) -> &[EventRecord<T>] {
        let skip = ((self.records.len() as f64) * burn_in).floor() as usize;
        &self.records[skip.min(self.records.len())..]
    }

    /// Mean post-event disagreement over the trailing `1 - burn_in`
    /// fraction of events.
    pub fn mean_v_after(&self, burn_in: f64) -> Option<T> {
        let tail = self.tail(burn_in);
        if tail.is_empty() {
            return None;
        }
        let sum = tail.iter().fold(T::zero(), |acc, r| acc + r.v_after);
        Some(sum / count::<T>(tail.len()))
    }

    /// Mean post-event size over the trailing `1 - burn_in` fraction.
    pub fn mean_n_after(&self, burn_in: f64) -> Option<T> {
        let tail = self.tail(burn_in);
        if tail.is_empty() {
            return None;
        }
        let sum = tail
            .iter()
            .fold(T::zero(), |acc, r| acc + count::<T>(r.n_after));
        Some(sum / count::<T>(tail.len()))
    }
}

fn initial_states<T: Scalar>(
    rule: &InitialStates<T>,
    n: usize,
    dist: &ArrivalDistribution<T>,
    seed: u64,
) -> DVector<T> {
    match rule {
        InitialStates::Arrivals => {
            let mut rng = substream(seed, &[purpose::INIT]);
            DVector::from_fn(n, |_, _| dist.sample(&mut rng))
        }
        InitialStates::Constant { value } => DVector::from_element(n, *value),
        InitialStates::Explicit { values } => DVector::from_vec(values.clone()),
    }
}

/// Sampled topology plus its decomposition. When a fresh sample equals the
/// previous one (pointwise), the previous decomposition is reused — the
/// decomposition is a pure function of the graph.
struct ActiveTopology<T: Scalar> {
    graph: SimpleGraph,
    propagator: Propagator<T>,
}

impl<T: Scalar> ActiveTopology<T> {
    fn refresh(slot: &mut Option<Self>, graph: SimpleGraph) {
        let reusable = slot.as_ref().is_some_and(|active| active.graph == graph);
        if !reusable {
            *slot = Some(ActiveTopology {
                propagator: Propagator::from_graph(&graph),
                graph,
            });
        }
    }
}

/// Runs a replacement process: at every event the topology is resampled at
/// size `n` (unless `resample_topology` is off), the state propagates for
/// `gamma / n`, and one uniformly chosen agent is replaced.
pub fn simulate_replacements<T: Scalar, G: Graphon<T> + ?Sized>(
    graphon: &G,
    cfg: &ReplacementConfig<T>,
) -> Result<Trajectory<T>> {
    cfg.validate()?;
    let expected = ExpectedGraph::new(graphon, cfg.n)?;
    let mut x = initial_states(&cfg.initial, cfg.n, &cfg.dist, cfg.seed);
    let mut event_rng = substream(cfg.seed, &[purpose::EVENTS]);
    let dt = cfg.gamma / count::<T>(cfg.n);
    let mut active: Option<ActiveTopology<T>> = None;
    let mut records = Vec::with_capacity(cfg.events);
    let mut t = T::zero();
    for k in 1..=cfg.events {
        if cfg.resample_topology || active.is_none() {
            let mut topo_rng = substream(cfg.seed, &[purpose::TOPOLOGY, k as u64]);
            ActiveTopology::refresh(&mut active, expected.sample(&mut topo_rng));
        }
        let topology = active.as_ref().expect("topology sampled above");
        t += dt;
        x = topology.propagator.propagate(&x, dt)?;
        let v_before = disagreement(&x)?;
        x = apply_replacement(&x, &cfg.dist, &mut event_rng)?;
        let v_after = disagreement(&x)?;
        records.push(EventRecord {
            k,
            t,
            event: EventKind::Replacement,
            n_before: cfg.n,
            n_after: cfg.n,
            v_before,
            v_after,
            mu2: topology.propagator.mu2()?,
        });
    }
    Ok(Trajectory { records })
}

/// Runs the arrival/departure process: the topology is resampled at the
/// current size before each interval, the state propagates for
/// `gamma / n(t_k)`, and the event drawn by [`next_event`] is applied.
pub fn simulate_open<T: Scalar, G: Graphon<T> + ?Sized>(
    graphon: &G,
    cfg: &OpenSystemConfig<T>,
) -> Result<Trajectory<T>> {
    cfg.validate()?;
    let mut n = cfg.n0;
    let mut x = initial_states(&cfg.initial, n, &cfg.dist, cfg.seed);
    let mut event_rng = substream(cfg.seed, &[purpose::EVENTS]);
    let mut expected: Vec<Option<ExpectedGraph<T>>> = vec![None; cfg.n_max - cfg.n_min + 1];
    let mut active: Option<ActiveTopology<T>> = None;
    let mut records = Vec::with_capacity(cfg.events);
    let mut t = T::zero();
    for k in 1..=cfg.events {
        let slot = n - cfg.n_min;
        if expected[slot].is_none() {
            expected[slot] = Some(ExpectedGraph::new(graphon, n)?);
        }
        let mut topo_rng = substream(cfg.seed, &[purpose::TOPOLOGY, k as u64]);
        ActiveTopology::refresh(
            &mut active,
            expected[slot]
                .as_ref()
                .expect("built above")
                .sample(&mut topo_rng),
        );
        let topology = active.as_ref().expect("topology sampled above");
        let dt = cfg.gamma / count::<T>(n);
        t += dt;
        x = topology.propagator.propagate(&x, dt)?;
        let v_before = disagreement(&x)?;
        let kind = next_event(n, cfg, &mut event_rng)?;
        x = match kind {
            EventKind::Departure => apply_departure(&x, &mut event_rng)?,
            EventKind::Arrival => apply_arrival(&x, &cfg.dist, &mut event_rng),
            EventKind::Replacement => unreachable!("next_event never yields replacements"),
        };
        let n_after = x.len();
        if n_after < cfg.n_min || n_after > cfg.n_max {
            return Err(Error::Invariant(format!(
                "size {n_after} escaped [{}, {}] at event {k}",
                cfg.n_min, cfg.n_max
            )));
        }
        let v_after = disagreement(&x)?;
        records.push(EventRecord {
            k,
            t,
            event: kind,
            n_before: n,
            n_after,
            v_before,
            v_after,
            mu2: topology.propagator.mu2()?,
        });
        n = n_after;
    }
    Ok(Trajectory { records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::SbmGraphon;
    use crate::rng::substream;
    use rand::Rng;

    fn gaussian(sigma2: f64) -> ArrivalDistribution<f64> {
        ArrivalDistribution::gaussian(sigma2).unwrap()
    }

    /// Average of V over all n possible removals, computed by direct
    /// enumeration (the deterministic oracle behind the departure identity).
    fn mean_v_over_all_removals(x: &DVector<f64>) -> f64 {
        let n = x.len();
        let mut total = 0.0;
        for leave in 0..n {
            let rest = DVector::from_iterator(
                n - 1,
                x.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != leave)
                    .map(|(_, &v)| v),
            );
            total += disagreement(&rest).unwrap();
        }
        total / n as f64
    }

    #[test]
    fn departure_from_a_pair_leaves_zero_disagreement() {
        let x = DVector::from_vec(vec![3.0, -1.5]);
        let mut rng = substream(1, &[]);
        let after = apply_departure(&x, &mut rng).unwrap();
        assert_eq!(after.len(), 1);
        assert_eq!(disagreement(&after).unwrap(), 0.0);
    }

    #[test]
    fn departure_refused_for_a_single_agent() {
        let x = DVector::from_vec(vec![1.0]);
        let mut rng = substream(1, &[]);
        assert!(apply_departure(&x, &mut rng).is_err());
    }

    #[test]
    fn departure_identity_hand_example() {
        // x = (1, 2, 3): V = 2/3 and the removal average is 0.5.
        let x = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let v = disagreement(&x).unwrap();
        let averaged = mean_v_over_all_removals(&x);
        assert!((averaged - 0.5).abs() < 1e-15);
        assert!((averaged - (1.0 - 1.0 / 4.0) * v).abs() < 1e-15);
    }

    #[test]
    fn departure_identity_random_states() {
        let mut rng = substream(2, &[]);
        for n in 3..=10 {
            for _ in 0..20 {
                let x = DVector::from_fn(n, |_, _| rng.random::<f64>() * 6.0 - 3.0);
                let v = disagreement(&x).unwrap();
                let factor = 1.0 - 1.0 / ((n as f64 - 1.0) * (n as f64 - 1.0));
                assert!((mean_v_over_all_removals(&x) - factor * v).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn arrival_mean_disagreement_at_zero_mean_states() {
        // For mean-zero x, E[V+] = (n/(n+1)) V + n sigma2 / (n+1)^2, which
        // is below the (n/(n+1)) V + sigma2/(n+1) envelope.
        let x = DVector::from_vec(vec![1.0, -2.0, 0.5, 0.5]);
        let n = x.len() as f64;
        let v = disagreement(&x).unwrap();
        let sigma2 = 0.8;
        let dist = gaussian(sigma2);
        let mut rng = substream(3, &[]);
        let trials = 1_000_000usize;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let v_plus = disagreement(&apply_arrival(&x, &dist, &mut rng)).unwrap();
            sum += v_plus;
            sum_sq += v_plus * v_plus;
        }
        let mean = sum / trials as f64;
        let stderr = ((sum_sq / trials as f64 - mean * mean) / (trials as f64 - 1.0))
            .sqrt()
            .max(1e-12);
        let predicted = n / (n + 1.0) * v + n * sigma2 / ((n + 1.0) * (n + 1.0));
        assert!(
            (mean - predicted).abs() <= 3.0 * stderr,
            "{mean} vs {predicted} ({stderr})"
        );
        let envelope = n / (n + 1.0) * v + sigma2 / (n + 1.0);
        assert!(mean <= envelope);
    }

    #[test]
    fn arrival_into_zero_pair_injects_two_ninths() {
        let x = DVector::zeros(2);
        let dist = gaussian(1.0);
        let mut rng = substream(4, &[]);
        let trials = 1_000_000usize;
        let mut sum = 0.0;
        for _ in 0..trials {
            sum += disagreement(&apply_arrival(&x, &dist, &mut rng)).unwrap();
        }
        let mean = sum / trials as f64;
        assert!((mean - 2.0 / 9.0).abs() < 4e-3, "{mean}");
    }

    #[test]
    fn replacement_mean_disagreement_at_zero_states() {
        // Replacing an entry of the zero vector injects exactly
        // sigma2 (n-1)/n^2 in expectation, which stays below the
        // (n^2-1) sigma2 / n^3 envelope.
        for n in [3usize, 6] {
            let x = DVector::zeros(n);
            let dist = gaussian(1.0);
            let mut rng = substream(5, &[n as u64]);
            let trials = 400_000usize;
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..trials {
                let v_plus =
                    disagreement(&apply_replacement(&x, &dist, &mut rng).unwrap()).unwrap();
                sum += v_plus;
                sum_sq += v_plus * v_plus;
            }
            let nf = n as f64;
            let mean = sum / trials as f64;
            let stderr = ((sum_sq / trials as f64 - mean * mean) / (trials as f64 - 1.0)).sqrt();
            let exact = (nf - 1.0) / (nf * nf);
            assert!(
                (mean - exact).abs() <= 3.0 * stderr,
                "n={n}: {mean} vs {exact}"
            );
            let envelope = (nf * nf - 1.0) / (nf * nf * nf);
            assert!(mean <= envelope);
        }
    }

    #[test]
    fn replacement_bound_holds_for_zero_mean_states() {
        let raw = DVector::from_vec(vec![2.0, -1.0, 1.5, -0.5, 0.0, -2.0]);
        let shift = raw.sum() / raw.len() as f64;
        let x = raw.map(|v| v - shift); // mean exactly ~0
        let n = x.len() as f64;
        let v = disagreement(&x).unwrap();
        let sigma2 = 1.3;
        let dist = gaussian(sigma2);
        let mut rng = substream(6, &[]);
        let trials = 400_000usize;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let v_plus = disagreement(&apply_replacement(&x, &dist, &mut rng).unwrap()).unwrap();
            sum += v_plus;
            sum_sq += v_plus * v_plus;
        }
        let mean = sum / trials as f64;
        let stderr = ((sum_sq / trials as f64 - mean * mean) / (trials as f64 - 1.0)).sqrt();
        let envelope = (n * n - n - 1.0) / (n * n) * v + (n * n - 1.0) / (n * n * n) * sigma2;
        assert!(mean <= envelope + 3.0 * stderr, "{mean} vs {envelope}");
    }

    #[test]
    fn replacement_with_zero_variance_into_consensus_is_silent() {
        let x = DVector::zeros(4);
        let dist = gaussian(0.0);
        let mut rng = substream(7, &[]);
        let after = apply_replacement(&x, &dist, &mut rng).unwrap();
        assert_eq!(disagreement(&after).unwrap(), 0.0);
    }

    fn open_config(n_min: usize, n_max: usize, seed: u64) -> OpenSystemConfig<f64> {
        OpenSystemConfig {
            n_min,
            n_max,
            n0: (n_min + n_max) / 2,
            gamma: 1.0,
            dist: gaussian(1.0),
            events: 100,
            initial: InitialStates::Arrivals,
            seed,
        }
    }

    #[test]
    fn event_kind_is_forced_at_the_size_bounds() {
        let cfg = open_config(10, 20, 0);
        let mut rng = substream(8, &[]);
        for _ in 0..200 {
            assert_eq!(
                next_event(20, &cfg, &mut rng).unwrap(),
                EventKind::Departure
            );
            assert_eq!(next_event(10, &cfg, &mut rng).unwrap(), EventKind::Arrival);
        }
        assert!(next_event(21, &cfg, &mut rng).is_err());
        assert!(next_event(9, &cfg, &mut rng).is_err());
    }

    #[test]
    fn event_kind_frequency_matches_the_linear_probability() {
        let cfg = open_config(10, 20, 0);
        // p_D at n = 15 is 0.5
        let mut rng = substream(9, &[]);
        let trials = 100_000usize;
        let departures = (0..trials)
            .filter(|_| next_event(15, &cfg, &mut rng).unwrap() == EventKind::Departure)
            .count();
        let freq = departures as f64 / trials as f64;
        let stderr = (0.5 * 0.5 / trials as f64).sqrt();
        assert!((freq - 0.5).abs() <= 3.0 * stderr, "{freq}");
    }

    #[test]
    fn replacement_trajectories_are_reproducible() {
        let graphon = SbmGraphon::constant(0.7).unwrap();
        let cfg = ReplacementConfig {
            n: 8,
            gamma: 0.5,
            dist: gaussian(1.0),
            events: 40,
            initial: InitialStates::Arrivals,
            seed: 123,
            resample_topology: true,
        };
        let a = simulate_replacements(&graphon, &cfg).unwrap();
        let b = simulate_replacements(&graphon, &cfg).unwrap();
        assert_eq!(a, b);
        let other = simulate_replacements(
            &graphon,
            &ReplacementConfig {
                seed: 124,
                ..cfg.clone()
            },
        )
        .unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn replacement_records_have_the_fixed_size_and_spacing() {
        let graphon = SbmGraphon::constant(1.0).unwrap();
        let cfg = ReplacementConfig {
            n: 5,
            gamma: 2.0,
            dist: gaussian(0.5),
            events: 25,
            initial: InitialStates::Arrivals,
            seed: 9,
            resample_topology: true,
        };
        let traj = simulate_replacements(&graphon, &cfg).unwrap();
        assert_eq!(traj.len(), 25);
        let dt = 2.0 / 5.0;
        for (idx, r) in traj.records.iter().enumerate() {
            assert_eq!(r.k, idx + 1);
            assert_eq!(r.event, EventKind::Replacement);
            assert_eq!((r.n_before, r.n_after), (5, 5));
            assert!((r.t - dt * (idx + 1) as f64).abs() < 1e-12);
            assert!((r.mu2 - 1.0).abs() < 1e-10); // complete graph every event
            assert!(r.v_before >= 0.0 && r.v_after >= 0.0);
        }
    }

    #[test]
    fn fixed_topology_variant_keeps_the_first_graph() {
        let graphon = SbmGraphon::constant(0.5).unwrap();
        let cfg = ReplacementConfig {
            n: 12,
            gamma: 1.0,
            dist: gaussian(1.0),
            events: 30,
            initial: InitialStates::Arrivals,
            seed: 77,
            resample_topology: false,
        };
        let traj = simulate_replacements(&graphon, &cfg).unwrap();
        let first = traj.records[0].mu2;
        assert!(traj.records.iter().all(|r| r.mu2 == first));
    }

    #[test]
    fn pure_contraction_run_decays_to_zero() {
        // gamma = 0 and sigma2 = 0 from mean-zero states: no continuous
        // decay and no injected variance, so only the replacement
        // contractions act and the trial-averaged V must collapse.
        let graphon = SbmGraphon::constant(0.5).unwrap();
        let trials = 300;
        let events = 200;
        let mut initial_mean = 0.0;
        let mut checkpoints = [0.0f64; 4]; // k = 1, 50, 100, 200
        for trial in 0..trials {
            let mut rng = substream(1000 + trial, &[]);
            let raw = DVector::from_fn(6, |_, _| rng.random::<f64>() * 2.0 - 1.0);
            let shift = raw.sum() / 6.0;
            let values: Vec<f64> = raw.iter().map(|v| v - shift).collect();
            initial_mean += disagreement(&DVector::from_vec(values.clone())).unwrap();
            let cfg = ReplacementConfig {
                n: 6,
                gamma: 0.0,
                dist: gaussian(0.0),
                events,
                initial: InitialStates::Explicit { values },
                seed: 5000 + trial,
                resample_topology: true,
            };
            let traj = simulate_replacements(&graphon, &cfg).unwrap();
            for (slot, k) in [(0usize, 1usize), (1, 50), (2, 100), (3, 200)] {
                checkpoints[slot] += traj.records[k - 1].v_after;
            }
        }
        initial_mean /= trials as f64;
        for slot in checkpoints.iter_mut() {
            *slot /= trials as f64;
        }
        assert!(checkpoints[0] <= initial_mean);
        assert!(
            checkpoints[3] <= 0.05 * initial_mean,
            "{checkpoints:?} vs {initial_mean}"
        );
        // broadly decreasing in k (generous slack for sampling noise)
        assert!(checkpoints[1] <= checkpoints[0] * 1.1 + 1e-6);
        assert!(checkpoints[2] <= checkpoints[1] * 1.1 + 1e-6);
        assert!(checkpoints[3] <= checkpoints[2] * 1.1 + 1e-6);
    }

    #[test]
    fn open_run_stays_within_the_size_bounds() {
        let graphon = SbmGraphon::constant(0.8).unwrap();
        let cfg = OpenSystemConfig {
            events: 2000,
            ..open_config(10, 20, 42)
        };
        let traj = simulate_open(&graphon, &cfg).unwrap();
        assert_eq!(traj.len(), 2000);
        for r in &traj.records {
            assert!(r.n_before >= 10 && r.n_before <= 20);
            assert!(r.n_after >= 10 && r.n_after <= 20);
            assert!(r.v_after >= 0.0);
        }
        // times strictly increasing
        for pair in traj.records.windows(2) {
            assert!(pair[1].t > pair[0].t);
        }
    }

    #[test]
    fn open_run_with_zero_variance_from_consensus_stays_at_consensus() {
        let graphon = SbmGraphon::constant(0.6).unwrap();
        let cfg = OpenSystemConfig {
            n_min: 4,
            n_max: 8,
            n0: 6,
            gamma: 1.0,
            dist: gaussian(0.0),
            events: 300,
            initial: InitialStates::Constant { value: 0.0 },
            seed: 11,
        };
        let traj = simulate_open(&graphon, &cfg).unwrap();
        assert!(traj
            .records
            .iter()
            .all(|r| r.v_before == 0.0 && r.v_after == 0.0));
    }

    #[test]
    fn open_run_is_reproducible() {
        let graphon = SbmGraphon::constant(0.5).unwrap();
        let cfg = open_config(5, 9, 31);
        assert_eq!(
            simulate_open(&graphon, &cfg).unwrap(),
            simulate_open(&graphon, &cfg).unwrap()
        );
    }

    /// The duration of interval k+1 is gamma / n_before[k+1], so the decay
    /// factor reduces to e^(-2 gamma mu2) between consecutive records.
    fn assert_decay_chain(records: &[EventRecord<f64>], gamma: f64) {
        for pair in records.windows(2) {
            let envelope = pair[0].v_after * (-2.0 * gamma * pair[1].mu2).exp();
            assert!(
                pair[1].v_before <= envelope * (1.0 + 1e-8) + 1e-14,
                "event {}: {} vs envelope {}",
                pair[1].k,
                pair[1].v_before,
                envelope
            );
            assert_eq!(pair[1].n_before, pair[0].n_after);
        }
    }

    #[test]
    fn trajectories_obey_the_inter_event_decay() {
        let graphon = SbmGraphon::constant(0.6).unwrap();
        let cfg = ReplacementConfig {
            n: 9,
            gamma: 1.3,
            dist: gaussian(1.0),
            events: 200,
            initial: InitialStates::Arrivals,
            seed: 21,
            resample_topology: true,
        };
        assert_decay_chain(&simulate_replacements(&graphon, &cfg).unwrap().records, 1.3);

        let cfg = OpenSystemConfig {
            events: 400,
            gamma: 0.7,
            ..open_config(6, 14, 22)
        };
        assert_decay_chain(&simulate_open(&graphon, &cfg).unwrap().records, 0.7);
    }

    #[test]
    fn uniform_arrival_distribution_has_the_right_moments() {
        let sigma2 = 0.8f64;
        let dist = ArrivalDistribution::uniform(sigma2).unwrap();
        let half_width = (3.0 * sigma2).sqrt();
        let mut rng = substream(12, &[]);
        let trials = 200_000usize;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let draw = dist.sample(&mut rng);
            assert!(draw.abs() <= half_width);
            sum += draw;
            sum_sq += draw * draw;
        }
        let mean = sum / trials as f64;
        let var = sum_sq / trials as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "{mean}");
        assert!((var - sigma2).abs() < 0.01, "{var}");
    }

    #[test]
    fn mean_size_approaches_the_midpoint() {
        let graphon = SbmGraphon::constant(1.0).unwrap();
        let mut means = 0.0;
        let trials = 60;
        for trial in 0..trials {
            let cfg = OpenSystemConfig {
                events: 2000,
                seed: 900 + trial,
                ..open_config(10, 20, 0)
            };
            let traj = simulate_open(&graphon, &cfg).unwrap();
            means += to_f64(traj.mean_n_after(0.5).unwrap());
        }
        let mean = means / trials as f64;
        assert!((mean - 15.0).abs() < 0.3, "{mean}");
    }

    #[test]
    fn config_validation_rejects_bad_setups() {
        let dist = gaussian(1.0);
        assert!(ReplacementConfig {
            n: 1,
            gamma: 1.0,
            dist,
            events: 10,
            initial: InitialStates::Arrivals,
            seed: 0,
            resample_topology: true
        }
        .validate()
        .is_err());
        assert!(OpenSystemConfig {
            n_min: 10,
            n_max: 10,
            n0: 10,
            gamma: 1.0,
            dist,
            events: 10,
            initial: InitialStates::Arrivals,
            seed: 0
        }
        .validate()
        .is_err());
        assert!(OpenSystemConfig {
            n_min: 10,
            n_max: 20,
            n0: 25,
            gamma: 1.0,
            dist,
            events: 10,
            initial: InitialStates::Arrivals,
            seed: 0
        }
        .validate()
        .is_err());
    }
}

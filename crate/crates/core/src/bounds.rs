//! Closed-form expressions: per-event disagreement update maps, the
//! steady-state disagreement bounds for replacement (`thm1`) and
//! arrival/departure (`thm2`) systems, the spectral estimate bound (`thm3`)
//! with its `psi` correction term, and the large-`n` precondition checker.
//!
//! Every bound is returned as a [`BoundReport`] carrying the raw value, the
//! inputs it was evaluated at, and named validity flags — a report whose
//! flags fail is never presented as a valid bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{Graphon, PiecewiseLipschitz};
use crate::scalar::{count, real, Scalar};

/// Right-hand sides of the four per-event disagreement updates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventMaps<T> {
    /// Continuous decay over one interval: `V e^{-2 lambda2 dt}`.
    pub decay: T,
    /// Departure: `(1 - 1/(n-1)^2) V` (an exact identity).
    pub departure: T,
    /// Arrival envelope: `(n/(n+1)) V + sigma2/(n+1)`.
    pub arrival: T,
    /// Replacement envelope: `((n^2-n-1)/n^2) V + ((n^2-1)/n^3) sigma2`.
    pub replacement: T,
}

pub fn decay_map<T: Scalar>(v: T, lambda2: T, dt: T) -> T {
    v * (-(real::<T>(2.0) * lambda2 * dt)).exp()
}

pub fn departure_map<T: Scalar>(v: T, n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::domain("the departure map needs n >= 2"));
    }
    let m = count::<T>(n - 1);
    Ok(v * (T::one() - (m * m).recip()))
}

pub fn arrival_map<T: Scalar>(v: T, n: usize, sigma2: T) -> T {
    let nt = count::<T>(n);
    nt / (nt + T::one()) * v + sigma2 / (nt + T::one())
}

pub fn replacement_map<T: Scalar>(v: T, n: usize, sigma2: T) -> Result<T> {
    if n == 0 {
        return Err(Error::domain("the replacement map needs n >= 1"));
    }
    let nt = count::<T>(n);
    let n2 = nt * nt;
    Ok((n2 - nt - T::one()) / n2 * v + (n2 - T::one()) / (n2 * nt) * sigma2)
}

/// Evaluates all four update maps at once.
pub fn event_maps<T: Scalar>(v: T, n: usize, sigma2: T, lambda2: T, dt: T) -> Result<EventMaps<T>> {
    if v < T::zero() {
        return Err(Error::domain("disagreement must be nonnegative"));
    }
    if sigma2 < T::zero() {
        return Err(Error::domain("variance must be nonnegative"));
    }
    Ok(EventMaps {
        decay: decay_map(v, lambda2, dt),
        departure: departure_map(v, n)?,
        arrival: arrival_map(v, n, sigma2),
        replacement: replacement_map(v, n, sigma2)?,
    })
}

/// Which closed-form bound a report carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormulaTag {
    Thm1,
    Thm2,
    Thm3,
}

impl std::fmt::Display for FormulaTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FormulaTag::Thm1 => "thm1",
            FormulaTag::Thm2 => "thm2",
            FormulaTag::Thm3 => "thm3",
        })
    }
}

/// Provenance of the `E[e^{-2 gamma mu2}]` input of a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ETermSource {
    /// Full enumeration of all graphs at the given size.
    ExactEnumeration,
    /// Monte Carlo estimate (usually inflated by a stderr margin).
    MonteCarlo,
    /// `e^{-2 gamma mu2}` of one fixed topology.
    FixedMu2,
    /// Output of the `thm3` spectral bound.
    SpectralBound,
    /// Supplied directly by the caller.
    Given,
}

/// Inputs a bound was evaluated at, echoed into reports and summaries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs<T> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    pub gamma: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_term: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_term_source: Option<ETermSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu2_bar: Option<T>,
}

impl<T> BoundInputs<T> {
    fn new(gamma: T) -> Self {
        BoundInputs {
            n: None,
            n_min: None,
            n_max: None,
            gamma,
            sigma2: None,
            e_term: None,
            e_term_source: None,
            mu2_bar: None,
        }
    }
}

/// Named validity conditions; `None` means the condition does not apply to
/// the formula at hand.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityFlags {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denominator_positive: Option<bool>,
    /// `thm3` value below one, so it can serve as a contraction factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction_lt_one: Option<bool>,
    /// `n_max > 3` hypothesis of `thm2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_hypothesis: Option<bool>,
    /// Large-`n` precondition, when a checker result was attached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub large_n: Option<bool>,
}

impl ValidityFlags {
    fn all_hold(&self) -> bool {
        [
            self.denominator_positive,
            self.contraction_lt_one,
            self.size_hypothesis,
            self.large_n,
        ]
        .into_iter()
        .flatten()
        .all(|flag| flag)
    }
}

/// A closed-form bound value with its inputs and validity flags.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport<T> {
    pub formula: FormulaTag,
    pub value: T,
    pub valid: bool,
    pub flags: ValidityFlags,
    pub inputs: BoundInputs<T>,
}

impl<T: Scalar> BoundReport<T> {
    /// Attaches the outcome of the large-`n` checker and refreshes the
    /// overall validity.
    pub fn with_large_n(mut self, satisfied: bool) -> Self {
        self.flags.large_n = Some(satisfied);
        self.valid = self.flags.all_hold();
        self
    }

    /// For a `thm3` report: the value as an e-term input to the other
    /// bounds, available only when it is a genuine contraction.
    pub fn as_e_term(&self) -> Option<T> {
        (self.formula == FormulaTag::Thm3 && self.value < T::one() && self.value > T::zero())
            .then_some(self.value)
    }
}

fn check_e_term<T: Scalar>(e_term: T) -> Result<()> {
    if e_term <= T::zero() || e_term > T::one() {
        return Err(Error::domain("the e-term must lie in (0, 1]"));
    }
    Ok(())
}

fn check_sigma2_gamma<T: Scalar>(sigma2: T, gamma: T) -> Result<()> {
    if sigma2 < T::zero() {
        return Err(Error::domain("variance must be nonnegative"));
    }
    if gamma < T::zero() {
        return Err(Error::domain("gamma must be nonnegative"));
    }
    Ok(())
}

/// Steady-state disagreement bound for the replacement system:
/// `sigma2 (n^2 - 1) / (n (n^2 - (n^2 - n - 1) e_term))`.
pub fn thm1_bound<T: Scalar>(
    n: usize,
    sigma2: T,
    gamma: T,
    e_term: T,
    source: ETermSource,
) -> Result<BoundReport<T>> {
    if n < 2 {
        return Err(Error::domain("the replacement bound needs n >= 2"));
    }
    check_sigma2_gamma(sigma2, gamma)?;
    check_e_term(e_term)?;
    let nt = count::<T>(n);
    let n2 = nt * nt;
    let denominator = nt * (n2 - (n2 - nt - T::one()) * e_term);
    let value = sigma2 * (n2 - T::one()) / denominator;
    let mut inputs = BoundInputs::new(gamma);
    inputs.n = Some(n);
    inputs.sigma2 = Some(sigma2);
    inputs.e_term = Some(e_term);
    inputs.e_term_source = Some(source);
    let flags = ValidityFlags {
        denominator_positive: Some(denominator > T::zero()),
        ..ValidityFlags::default()
    };
    Ok(BoundReport {
        formula: FormulaTag::Thm1,
        value,
        valid: flags.all_hold(),
        flags,
        inputs,
    })
}

/// Steady-state disagreement bound for the arrival/departure system:
/// `sigma2 (n_max - 1)^2 / (2 (n_min + 1) ((n_max - 1)^2 - n_max (n_max - 2) e_term))`,
/// with `e_term` the maximum of the per-size estimates. Requires
/// `n_max > 3`.
pub fn thm2_bound<T: Scalar>(
    n_min: usize,
    n_max: usize,
    sigma2: T,
    gamma: T,
    e_term_max: T,
    source: ETermSource,
) -> Result<BoundReport<T>> {
    if n_max <= 3 {
        return Err(Error::hypothesis(
            "the arrival/departure bound needs n_max > 3",
        ));
    }
    if n_min < 1 {
        return Err(Error::domain("n_min must be at least 1"));
    }
    check_sigma2_gamma(sigma2, gamma)?;
    check_e_term(e_term_max)?;
    let nm = count::<T>(n_min);
    let nx = count::<T>(n_max);
    let span = (nx - T::one()) * (nx - T::one());
    let denominator =
        real::<T>(2.0) * (nm + T::one()) * (span - nx * (nx - real(2.0)) * e_term_max);
    let value = sigma2 * span / denominator;
    let mut inputs = BoundInputs::new(gamma);
    inputs.n_min = Some(n_min);
    inputs.n_max = Some(n_max);
    inputs.sigma2 = Some(sigma2);
    inputs.e_term = Some(e_term_max);
    inputs.e_term_source = Some(source);
    let flags = ValidityFlags {
        denominator_positive: Some(denominator > T::zero()),
        size_hypothesis: Some(n_max > 3),
        ..ValidityFlags::default()
    };
    Ok(BoundReport {
        formula: FormulaTag::Thm2,
        value,
        valid: flags.all_hold(),
        flags,
        inputs,
    })
}

/// `O(1/sqrt(n))` correction term of the spectral bound:
///
/// ```text
/// psi(n) = 12 gamma sqrt(pi n) e^{9 gamma^2 / n}
///          ( sqrt(1 - e^{-(4/(9 pi n)) (n - 9 gamma)^2})
///          - sqrt(1 - e^{-(1/n) (sqrt(n log(2 e n)) - 3 gamma)^2}) )
/// ```
///
/// Defined for `n > 9 gamma` with `sqrt(n log(2 e n)) >= 3 gamma`; outside
/// that range the expression loses its meaning as an error-function bound
/// and the call is rejected.
pub fn psi<T: Scalar>(n: usize, gamma: T) -> Result<T> {
    if gamma < T::zero() {
        return Err(Error::domain("gamma must be nonnegative"));
    }
    if n == 0 {
        return Err(Error::domain("psi needs n >= 1"));
    }
    let nt = count::<T>(n);
    let three_gamma = real::<T>(3.0) * gamma;
    let nine_gamma = real::<T>(9.0) * gamma;
    if nt <= nine_gamma {
        return Err(Error::domain(format!("psi needs n > 9 gamma (n = {n})")));
    }
    let log_2en = (real::<T>(2.0) * T::e() * nt).ln();
    let root = (nt * log_2en).sqrt();
    if root < three_gamma {
        return Err(Error::domain(format!(
            "psi needs sqrt(n log(2 e n)) >= 3 gamma (n = {n})"
        )));
    }
    let first = {
        let d = nt - nine_gamma;
        (T::one() - (-(real::<T>(4.0) / (real::<T>(9.0) * T::pi() * nt) * d * d)).exp()).sqrt()
    };
    let second = {
        let d = root - three_gamma;
        (T::one() - (-(d * d / nt)).exp()).sqrt()
    };
    let prefactor = real::<T>(12.0)
        * gamma
        * (T::pi() * nt).sqrt()
        * (real::<T>(9.0) * gamma * gamma / nt).exp();
    Ok(prefactor * (first - second))
}

/// Spectral estimate bound: `E[e^{-2 gamma mu2}]` is at most
/// `e^{-2 gamma mu2_bar} (e^{6 gamma sqrt(log(2 e n)/n)} + psi(n))` for
/// piecewise-Lipschitz graphons at large enough `n`. The
/// `contraction_lt_one` flag records whether the value is below one, which
/// is what makes it usable as an e-term for the other bounds.
pub fn thm3_bound<T: Scalar>(mu2_bar: T, n: usize, gamma: T) -> Result<BoundReport<T>> {
    if mu2_bar < T::zero() || mu2_bar > T::one() {
        return Err(Error::domain("mu2_bar must lie in [0, 1]"));
    }
    if gamma < T::zero() {
        return Err(Error::domain("gamma must be nonnegative"));
    }
    let correction = psi(n, gamma)?;
    let nt = count::<T>(n);
    let log_2en = (real::<T>(2.0) * T::e() * nt).ln();
    let value = (-(real::<T>(2.0) * gamma * mu2_bar)).exp()
        * ((real::<T>(6.0) * gamma * (log_2en / nt).sqrt()).exp() + correction);
    let mut inputs = BoundInputs::new(gamma);
    inputs.n = Some(n);
    inputs.mu2_bar = Some(mu2_bar);
    let flags = ValidityFlags {
        contraction_lt_one: Some(value < T::one()),
        ..ValidityFlags::default()
    };
    Ok(BoundReport {
        formula: FormulaTag::Thm3,
        value,
        valid: flags.all_hold(),
        flags,
        inputs,
    })
}

/// Default tolerance parameter for [`large_enough`]: the midpoint of the
/// admissible range `(0, e^-1)`.
pub fn default_large_n_epsilon<T: Scalar>() -> T {
    T::e().recip() / real(2.0)
}

/// Outcome of the large-`n` precondition checker, one flag per condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeEnoughReport {
    /// `2/n` below the narrowest piece width (vacuous for one piece).
    pub interval_width: bool,
    /// `(1/n) log(2n/epsilon) + (1/n)(2K + 3L)` below the degree supremum.
    pub degree_margin: bool,
    /// `n e^{-n/5} < epsilon`.
    pub tail: bool,
    /// `9 log(2 e n) < n`.
    pub log_growth: bool,
    pub satisfied: bool,
}

/// Checks the four large-`n` conditions for a piecewise-Lipschitz graphon
/// with the given degree supremum. `epsilon` must lie in `(0, e^-1)`.
pub fn large_enough<T: Scalar>(
    n: usize,
    epsilon: T,
    piecewise: &PiecewiseLipschitz<T>,
    sup_degree: T,
) -> Result<LargeEnoughReport> {
    if epsilon <= T::zero() || epsilon >= T::e().recip() {
        return Err(Error::hypothesis("epsilon must lie in (0, e^-1)"));
    }
    if n == 0 {
        return Err(Error::domain("large-n check needs n >= 1"));
    }
    let nt = count::<T>(n);
    let breaks = piecewise.interior_breaks();
    let interval_width = breaks == 0 || real::<T>(2.0) / nt < piecewise.min_width();
    let margin = (real::<T>(2.0) * nt / epsilon).ln() / nt
        + (real::<T>(2.0) * count::<T>(breaks) + real::<T>(3.0) * piecewise.lipschitz()) / nt;
    let degree_margin = margin < sup_degree;
    let tail = nt * (-(nt / real(5.0))).exp() < epsilon;
    let log_growth = real::<T>(9.0) * (real::<T>(2.0) * T::e() * nt).ln() < nt;
    Ok(LargeEnoughReport {
        interval_width,
        degree_margin,
        tail,
        log_growth,
        satisfied: interval_width && degree_margin && tail && log_growth,
    })
}

/// [`large_enough`] with the descriptor and degree supremum taken from the
/// graphon itself.
pub fn large_enough_for<T: Scalar, G: Graphon<T> + ?Sized>(
    graphon: &G,
    n: usize,
    epsilon: T,
) -> Result<LargeEnoughReport> {
    let piecewise = graphon
        .piecewise()
        .ok_or_else(|| Error::domain("graphon carries no piecewise-Lipschitz descriptor"))?;
    large_enough(n, epsilon, &piecewise, graphon.sup_degree().value)
}

/// Long-run expected size of the arrival/departure process:
/// `(n_max + n_min) / 2`.
pub fn expected_n_limit<T: Scalar>(n_min: usize, n_max: usize) -> Result<T> {
    if n_max <= n_min {
        return Err(Error::domain("n_max must exceed n_min"));
    }
    Ok((count::<T>(n_max) + count::<T>(n_min)) / real(2.0))
}

//! Laplacian spectra and estimation of `E[e^{-2 gamma mu2}]`.
//!
//! Eigenvalues are always reported sorted ascending together with their
//! normalized companions `mu_i = lambda_i / n`. For stochastic block model
//! graphons the normalized algebraic connectivity of the expected graph has
//! a closed form through a block-level reduction whose size depends only on
//! the number of blocks, not on `n`.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphon::{ExpectedGraph, Graphon, SbmGraphon, SimpleGraph};
use crate::scalar::{count, Scalar};

/// Largest size accepted by exact enumeration (2^10 graphs at n = 5).
pub const EXACT_ENUMERATION_MAX_N: usize = 5;

/// Trials per work item when Monte Carlo estimation runs in parallel. The
/// batch layout is fixed so results do not depend on the thread schedule.
const MC_BATCH: usize = 1024;

/// Eigenvalues of a graph Laplacian, sorted ascending, with the normalized
/// copies `mu_i = lambda_i / n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianSpectrum<T> {
    lambdas: Vec<T>,
    mus: Vec<T>,
}

impl<T: Scalar> LaplacianSpectrum<T> {
    fn from_laplacian(laplacian: DMatrix<T>) -> Self {
        let mut lambdas: Vec<T> = laplacian.symmetric_eigenvalues().iter().copied().collect();
        lambdas.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Self::from_sorted(lambdas)
    }

    /// Wraps eigenvalues that are already sorted ascending.
    pub(crate) fn from_sorted(lambdas: Vec<T>) -> Self {
        let nt = count::<T>(lambdas.len());
        let mus = lambdas.iter().map(|&l| l / nt).collect();
        Self { lambdas, mus }
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// Raw eigenvalues, ascending.
    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    /// Normalized eigenvalues `lambda_i / n`, ascending.
    pub fn mus(&self) -> &[T] {
        &self.mus
    }

    /// Second smallest normalized eigenvalue, clamped at zero to absorb
    /// solver round-off on disconnected graphs.
    pub fn mu2(&self) -> Result<T> {
        if self.n() < 2 {
            return Err(Error::domain("mu2 needs at least two vertices"));
        }
        Ok(self.mus[1].max(T::zero()))
    }

    /// Second smallest raw eigenvalue.
    pub fn lambda2(&self) -> Result<T> {
        if self.n() < 2 {
            return Err(Error::domain("lambda2 needs at least two vertices"));
        }
        Ok(self.lambdas[1])
    }
}

/// Builds `L = D - A` after checking the adjacency contract: square,
/// symmetric, zero diagonal, nonnegative entries.
pub fn laplacian<T: Scalar>(adjacency: &DMatrix<T>) -> Result<DMatrix<T>> {
    if adjacency.nrows() != adjacency.ncols() {
        return Err(Error::contract("adjacency matrix must be square"));
    }
    if adjacency != &adjacency.transpose() {
        return Err(Error::contract("adjacency matrix must be symmetric"));
    }
    let n = adjacency.nrows();
    if (0..n).any(|i| adjacency[(i, i)] != T::zero()) {
        return Err(Error::contract(
            "adjacency matrix must have a zero diagonal",
        ));
    }
    if adjacency.iter().any(|&a| a < T::zero()) {
        return Err(Error::contract("adjacency weights must be nonnegative"));
    }
    let mut l = -adjacency.clone();
    for i in 0..n {
        l[(i, i)] = adjacency.row(i).sum();
    }
    Ok(l)
}

/// Spectrum of `D - A` for a symmetric nonnegative adjacency matrix.
pub fn laplacian_spectrum<T: Scalar>(adjacency: &DMatrix<T>) -> Result<LaplacianSpectrum<T>> {
    Ok(LaplacianSpectrum::from_laplacian(laplacian(adjacency)?))
}

/// Normalized algebraic connectivity `mu2` of an adjacency matrix.
pub fn mu2<T: Scalar>(adjacency: &DMatrix<T>) -> Result<T> {
    laplacian_spectrum(adjacency)?.mu2()
}

impl SimpleGraph {
    /// Laplacian matrix of the 0/1 adjacency.
    pub fn laplacian<T: Scalar>(&self) -> DMatrix<T> {
        let n = self.n();
        let mut l = DMatrix::zeros(n, n);
        for i in 0..n {
            let mut deg = T::zero();
            for j in 0..n {
                if self.has_edge(i, j) {
                    l[(i, j)] = -T::one();
                    deg += T::one();
                }
            }
            l[(i, i)] = deg;
        }
        l
    }

    pub fn spectrum<T: Scalar>(&self) -> LaplacianSpectrum<T> {
        LaplacianSpectrum::from_laplacian(self.laplacian())
    }

    pub fn mu2<T: Scalar>(&self) -> Result<T> {
        self.spectrum::<T>().mu2()
    }
}

impl<T: Scalar> ExpectedGraph<T> {
    pub fn laplacian(&self) -> DMatrix<T> {
        laplacian(self.weights()).expect("expected graph weights satisfy the contract")
    }

    pub fn spectrum(&self) -> LaplacianSpectrum<T> {
        LaplacianSpectrum::from_laplacian(self.laplacian())
    }

    pub fn mu2(&self) -> Result<T> {
        self.spectrum().mu2()
    }
}

/// Block-level reduction of an SBM expected graph.
///
/// With `E = diag(n_B1, ..., n_Bm)` holding the latent-point counts per
/// block, the adjacency-type matrix is `A = (1/n) P E` (not necessarily
/// symmetric), `delta_i` are its row sums, and `L = diag(delta) - A`.
#[derive(Clone, Debug, PartialEq)]
pub struct SbmReduction<T> {
    block_sizes: Vec<usize>,
    a_sbm: DMatrix<T>,
    degrees: Vec<T>,
    l_sbm: DMatrix<T>,
    delta_min: T,
}

impl<T: Scalar> SbmReduction<T> {
    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn a_sbm(&self) -> &DMatrix<T> {
        &self.a_sbm
    }

    /// Row sums `delta_i` of the adjacency-type matrix.
    pub fn degrees(&self) -> &[T] {
        &self.degrees
    }

    pub fn l_sbm(&self) -> &DMatrix<T> {
        &self.l_sbm
    }

    pub fn delta_min(&self) -> T {
        self.delta_min
    }

    pub fn blocks(&self) -> usize {
        self.block_sizes.len()
    }

    /// Eigenvalues of the Laplacian-type matrix, ascending.
    ///
    /// `L_SBM` is similar to the symmetric matrix `diag(delta) - (1/n) S P S`
    /// with `S = E^{1/2}`, so a symmetric solver applies even though `A_SBM`
    /// itself is not symmetric.
    pub fn l_sbm_eigenvalues(&self, graphon: &SbmGraphon<T>, n: usize) -> Vec<T> {
        let m = self.blocks();
        let nt = count::<T>(n);
        let s: Vec<T> = self
            .block_sizes
            .iter()
            .map(|&b| count::<T>(b).sqrt())
            .collect();
        let sym = DMatrix::from_fn(m, m, |i, j| {
            let diag = if i == j { self.degrees[i] } else { T::zero() };
            diag - graphon.probs()[(i, j)] * s[i] * s[j] / nt
        });
        let mut vals: Vec<T> = sym.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        vals
    }
}

/// Builds the block-level reduction at size `n`. Block sizes count the
/// latent points `u_i = i/n` per block; every block must be populated.
pub fn sbm_reduction<T: Scalar>(graphon: &SbmGraphon<T>, n: usize) -> Result<SbmReduction<T>> {
    let m = graphon.blocks();
    if n < m {
        return Err(Error::domain(format!(
            "n = {n} is smaller than the block count {m}"
        )));
    }
    let mut block_sizes = vec![0usize; m];
    for u in crate::graphon::latent_points::<T>(n) {
        block_sizes[graphon.block_of(u)] += 1;
    }
    if let Some(block) = block_sizes.iter().position(|&c| c == 0) {
        return Err(Error::EmptyBlock { block, n });
    }
    let nt = count::<T>(n);
    let a_sbm = DMatrix::from_fn(m, m, |i, j| {
        graphon.probs()[(i, j)] * count::<T>(block_sizes[j]) / nt
    });
    let degrees: Vec<T> = (0..m).map(|i| a_sbm.row(i).sum()).collect();
    let mut l_sbm = -a_sbm.clone();
    for i in 0..m {
        l_sbm[(i, i)] += degrees[i];
    }
    let delta_min = degrees
        .iter()
        .copied()
        .fold(None, |acc: Option<T>, d| Some(acc.map_or(d, |a| a.min(d))))
        .expect("at least one block");
    Ok(SbmReduction {
        block_sizes,
        a_sbm,
        degrees,
        l_sbm,
        delta_min,
    })
}

/// Normalized algebraic connectivity of the SBM expected graph through the
/// block-level reduction: `min(lambda2(L_SBM), delta_min)`, or `delta_min`
/// alone for a single block.
///
/// The shortcut matches the dense spectrum when every block holds at least
/// two latent points; blocks with a single point contribute no
/// degree-eigenvalue, so their `delta` can spuriously win the minimum.
pub fn sbm_mu2_analytic<T: Scalar>(graphon: &SbmGraphon<T>, n: usize) -> Result<T> {
    let reduction = sbm_reduction(graphon, n)?;
    if reduction.blocks() == 1 {
        return Ok(reduction.delta_min());
    }
    let lambda2 = reduction.l_sbm_eigenvalues(graphon, n)[1];
    Ok(lambda2.min(reduction.delta_min()))
}

/// How `E[e^{-2 gamma mu2}]` was estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMethod {
    ExactEnumeration,
    MonteCarlo,
}

/// Point estimate of `E[e^{-2 gamma mu2}]`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExpMu2Estimate<T> {
    pub estimate: T,
    /// Standard error of the estimate; zero for exact enumeration.
    pub stderr: T,
    pub method: EstimateMethod,
    /// Graphs enumerated or Monte Carlo samples drawn.
    pub trials: usize,
    /// Maximizing size, set by [`exp_mu2_max`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax_n: Option<usize>,
}

/// Estimation method selector for [`exp_mu2`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpMu2Method {
    /// Full enumeration of all 2^(n(n-1)/2) graphs; limited to
    /// [`EXACT_ENUMERATION_MAX_N`].
    Exact,
    /// Monte Carlo over sampled graphs.
    MonteCarlo { trials: usize },
}

fn check_gamma<T: Scalar>(gamma: T) -> Result<()> {
    if gamma < T::zero() {
        return Err(Error::domain("gamma must be nonnegative"));
    }
    Ok(())
}

/// Exact `E[e^{-2 gamma mu2}]` by enumerating every graph on `n` vertices
/// weighted by its sampling probability.
pub fn exp_mu2_exact<T: Scalar>(
    expected: &ExpectedGraph<T>,
    gamma: T,
) -> Result<ExpMu2Estimate<T>> {
    check_gamma(gamma)?;
    let n = expected.n();
    if n < 2 {
        return Err(Error::domain("exp_mu2 needs at least two vertices"));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    if n > EXACT_ENUMERATION_MAX_N {
        return Err(Error::EnumerationTooLarge {
            n,
            pairs: pairs.len(),
            max: EXACT_ENUMERATION_MAX_N,
        });
    }
    let two_gamma = gamma + gamma;
    let mut total = T::zero();
    let mut mass = T::zero();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut prob = T::one();
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            let w = expected.weight(i, j);
            prob *= if mask >> bit & 1 == 1 {
                w
            } else {
                T::one() - w
            };
        }
        if prob == T::zero() {
            continue;
        }
        mass += prob;
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter_map(|(bit, &(i, j))| (mask >> bit & 1 == 1).then_some((i, j)))
            .collect();
        let graph = SimpleGraph::from_edges(n, &edges).expect("pairs are valid edges");
        let m2 = graph.mu2::<T>()?;
        total += prob * (-(two_gamma * m2)).exp();
    }
    Ok(ExpMu2Estimate {
        // The enumerated probabilities sum to one up to round-off;
        // normalizing by the accumulated mass removes that drift.
        estimate: total / mass,
        stderr: T::zero(),
        method: EstimateMethod::ExactEnumeration,
        trials: 1usize << pairs.len(),
        argmax_n: None,
    })
}

/// Monte Carlo `E[e^{-2 gamma mu2}]` over graphs sampled from the expected
/// graph. Batches run in parallel on per-batch sub-streams seeded from the
/// caller's stream, so the result is independent of the thread schedule.
pub fn exp_mu2_mc<T: Scalar, R: Rng + ?Sized>(
    expected: &ExpectedGraph<T>,
    gamma: T,
    trials: usize,
    rng: &mut R,
) -> Result<ExpMu2Estimate<T>> {
    check_gamma(gamma)?;
    if expected.n() < 2 {
        return Err(Error::domain("exp_mu2 needs at least two vertices"));
    }
    if trials == 0 {
        return Err(Error::domain("Monte Carlo needs at least one trial"));
    }
    let batches = trials.div_ceil(MC_BATCH);
    let seeds: Vec<u64> = (0..batches).map(|_| rng.random()).collect();
    let two_gamma = gamma + gamma;
    let partials: Vec<(T, T)> = seeds
        .par_iter()
        .enumerate()
        .map(|(b, &seed)| {
            let mut local = crate::rng::substream(seed, &[crate::rng::purpose::ESTIMATE]);
            let size = MC_BATCH.min(trials - b * MC_BATCH);
            let mut sum = T::zero();
            let mut sum_sq = T::zero();
            for _ in 0..size {
                let graph = expected.sample(&mut local);
                let m2 = graph.mu2::<T>().expect("n >= 2 checked above");
                let value = (-(two_gamma * m2)).exp();
                sum += value;
                sum_sq += value * value;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials
        .into_iter()
        .fold((T::zero(), T::zero()), |(s, q), (bs, bq)| (s + bs, q + bq));
    let nt = count::<T>(trials);
    let mean = sum / nt;
    let stderr = if trials > 1 {
        let var = ((sum_sq - nt * mean * mean) / (nt - T::one())).max(T::zero());
        (var / nt).sqrt()
    } else {
        T::zero()
    };
    Ok(ExpMu2Estimate {
        estimate: mean,
        stderr,
        method: EstimateMethod::MonteCarlo,
        trials,
        argmax_n: None,
    })
}

/// Dispatches on [`ExpMu2Method`].
pub fn exp_mu2<T: Scalar, R: Rng + ?Sized>(
    expected: &ExpectedGraph<T>,
    gamma: T,
    method: ExpMu2Method,
    rng: &mut R,
) -> Result<ExpMu2Estimate<T>> {
    match method {
        ExpMu2Method::Exact => exp_mu2_exact(expected, gamma),
        ExpMu2Method::MonteCarlo { trials } => exp_mu2_mc(expected, gamma, trials, rng),
    }
}

/// `max_{n in [n_min, n_max]} E[e^{-2 gamma mu2^{(n)}}]` with the argmax
/// size reported. Ties keep the smallest size.
pub fn exp_mu2_max<T: Scalar, G: Graphon<T> + ?Sized, R: Rng + ?Sized>(
    graphon: &G,
    gamma: T,
    n_min: usize,
    n_max: usize,
    method: ExpMu2Method,
    rng: &mut R,
) -> Result<ExpMu2Estimate<T>> {
    if n_min < 2 || n_min >= n_max {
        return Err(Error::domain(format!(
            "size range must satisfy 2 <= n_min < n_max (got {n_min}..={n_max})"
        )));
    }
    let mut best: Option<ExpMu2Estimate<T>> = None;
    for n in n_min..=n_max {
        let expected = ExpectedGraph::new(graphon, n)?;
        let mut estimate = exp_mu2(&expected, gamma, method, rng)?;
        estimate.argmax_n = Some(n);
        best = Some(match best {
            None => estimate,
            Some(prev) if estimate.estimate > prev.estimate => estimate,
            Some(prev) => prev,
        });
    }
    Ok(best.expect("range is nonempty"))
}

//! Linear consensus dynamics `x' = -L x` and the disagreement descriptor.
//!
//! Between two events the Laplacian is constant, so the flow is propagated
//! exactly as `x(t + dt) = e^{-L dt} x(t)` through a symmetric
//! eigendecomposition of `L` — no step-size tuning enters the bound checks.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graphon::SimpleGraph;
use crate::scalar::{count, Scalar};
use crate::spectral::LaplacianSpectrum;

/// Mean of the agent states.
pub fn mean<T: Scalar>(x: &DVector<T>) -> Result<T> {
    if x.is_empty() {
        return Err(Error::domain("state vector is empty"));
    }
    Ok(x.sum() / count::<T>(x.len()))
}

/// Disagreement `V(x) = (1/n) ||x||^2 - mean(x)^2`, evaluated in the
/// algebraically identical centered form `(1/n) sum (x_i - mean)^2` so the
/// result is nonnegative by construction.
pub fn disagreement<T: Scalar>(x: &DVector<T>) -> Result<T> {
    let m = mean(x)?;
    let n = count::<T>(x.len());
    let mut sum = T::zero();
    for &xi in x.iter() {
        let d = xi - m;
        sum += d * d;
    }
    Ok(sum / n)
}

/// Eigendecomposition of a graph Laplacian, reused across propagations with
/// the same topology.
#[derive(Clone, Debug)]
pub struct Propagator<T: Scalar> {
    eigenvalues: DVector<T>,
    eigenvectors: DMatrix<T>,
}

impl<T: Scalar> Propagator<T> {
    pub fn from_graph(graph: &SimpleGraph) -> Self {
        Self::from_laplacian(graph.laplacian())
    }

    /// Decomposes a symmetric Laplacian. Eigenpairs are sorted ascending so
    /// identical inputs yield identical decompositions.
    pub fn from_laplacian(laplacian: DMatrix<T>) -> Self {
        let n = laplacian.nrows();
        let eigen = SymmetricEigen::new(laplacian);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            eigen.eigenvalues[a]
                .partial_cmp(&eigen.eigenvalues[b])
                .expect("finite eigenvalues")
        });
        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eigen.eigenvalues[i]));
        let eigenvectors = DMatrix::from_columns(
            &order
                .iter()
                .map(|&i| eigen.eigenvectors.column(i))
                .collect::<Vec<_>>(),
        );
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Second smallest Laplacian eigenvalue.
    pub fn lambda2(&self) -> Result<T> {
        if self.n() < 2 {
            return Err(Error::domain("lambda2 needs at least two vertices"));
        }
        Ok(self.eigenvalues[1])
    }

    /// Second smallest normalized eigenvalue, clamped at zero.
    pub fn mu2(&self) -> Result<T> {
        Ok((self.lambda2()? / count::<T>(self.n())).max(T::zero()))
    }

    pub fn spectrum(&self) -> LaplacianSpectrum<T> {
        LaplacianSpectrum::from_sorted(self.eigenvalues.iter().copied().collect())
    }

    /// `e^{-L dt} x`: mean-preserving exact flow of the consensus dynamics.
    pub fn propagate(&self, x: &DVector<T>, dt: T) -> Result<DVector<T>> {
        if x.len() != self.n() {
            return Err(Error::contract(format!(
                "state has {} entries but the topology has {} vertices",
                x.len(),
                self.n()
            )));
        }
        if dt < T::zero() {
            return Err(Error::domain("dt must be nonnegative"));
        }
        if dt == T::zero() {
            return Ok(x.clone());
        }
        let mut modal = self.eigenvectors.transpose() * x;
        for (coef, &lambda) in modal.iter_mut().zip(self.eigenvalues.iter()) {
            *coef *= (-(lambda * dt)).exp();
        }
        Ok(&self.eigenvectors * modal)
    }
}

/// One-shot propagation: decompose the graph Laplacian and apply
/// `e^{-L dt}` to the states.
pub fn propagate<T: Scalar>(x: &DVector<T>, graph: &SimpleGraph, dt: T) -> Result<DVector<T>> {
    Propagator::from_graph(graph).propagate(x, dt)
}

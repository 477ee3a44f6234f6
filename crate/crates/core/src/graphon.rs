//! Graphons and the two-stage sampling of simple graphs.
//!
//! A graphon is a symmetric measurable kernel `w : [0,1]^2 -> [0,1]`. Given a
//! size `n` it induces the *expected graph*: the complete weighted graph with
//! weights `w(u_i, u_j)` at the deterministic latent points `u_i = i/n`,
//! `i = 1..n`. A *simple graph* is then drawn by connecting each pair of
//! distinct vertices `{i, j}` with an independent Bernoulli of that weight.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{count, real, to_f64, Scalar};

/// Node count of the fixed midpoint rule used for degree integrals of
/// graphons without a closed form.
pub const DEGREE_QUADRATURE_NODES: usize = 2048;

/// Grid resolution used when minimizing/maximizing the degree function of a
/// graphon without a closed form.
pub const DEGREE_GRID_POINTS: usize = 1024;

/// Latent points `u_i = i/n` for `i = 1..n` (so `u_n = 1`).
pub fn latent_points<T: Scalar>(n: usize) -> Vec<T> {
    let nt = count::<T>(n);
    (1..=n).map(|i| count::<T>(i) / nt).collect()
}

/// Piecewise-Lipschitz structure of a graphon: interval boundaries
/// `0 = a_0 < ... < a_{K+1} = 1` and a Lipschitz constant valid on every
/// rectangle `I_k x I_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLipschitz<T> {
    boundaries: Vec<T>,
    lipschitz: T,
}

impl<T: Scalar> PiecewiseLipschitz<T> {
    pub fn new(boundaries: Vec<T>, lipschitz: T) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::contract(
                "at least the two endpoints 0 and 1 are required",
            ));
        }
        if boundaries[0] != T::zero() || *boundaries.last().unwrap() != T::one() {
            return Err(Error::contract("boundaries must start at 0 and end at 1"));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::contract("boundaries must be strictly increasing"));
        }
        if lipschitz < T::zero() {
            return Err(Error::domain("Lipschitz constant must be nonnegative"));
        }
        Ok(Self {
            boundaries,
            lipschitz,
        })
    }

    pub fn boundaries(&self) -> &[T] {
        &self.boundaries
    }

    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    /// Number of intervals (`K + 1`).
    pub fn pieces(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// Number of interior break points (`K`).
    pub fn interior_breaks(&self) -> usize {
        self.boundaries.len() - 2
    }

    /// Width of the narrowest interval.
    pub fn min_width(&self) -> T {
        self.boundaries
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::one(), |acc, w| acc.min(w))
    }
}

/// Extremum of the degree function, together with how it was obtained:
/// `grid = None` means an exact closed form, otherwise the value is a grid
/// extremum at the reported resolution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegreeExtremum<T> {
    pub value: T,
    pub grid: Option<usize>,
}

/// A symmetric kernel `w : [0,1]^2 -> [0,1]`.
pub trait Graphon<T: Scalar> {
    /// Edge probability at `(x, y)`. Callers keep `x, y` in `[0, 1]`.
    fn eval(&self, x: T, y: T) -> T;

    /// Piecewise-Lipschitz structure, when known.
    fn piecewise(&self) -> Option<PiecewiseLipschitz<T>> {
        None
    }

    /// Degree `d(x) = integral of w(x, y) dy` over `[0, 1]`.
    ///
    /// The default evaluates a fixed midpoint rule with
    /// [`DEGREE_QUADRATURE_NODES`] nodes; kernels with a closed form
    /// override it.
    fn degree(&self, x: T) -> Result<T> {
        check_unit_interval(x, "degree evaluation point")?;
        let nodes = count::<T>(DEGREE_QUADRATURE_NODES);
        let mut sum = T::zero();
        for k in 0..DEGREE_QUADRATURE_NODES {
            let y = (count::<T>(k) + real(0.5)) / nodes;
            sum += self.eval(x, y);
        }
        Ok(sum / nodes)
    }

    /// Infimum `eta_W` of the degree function.
    fn inf_degree(&self) -> DegreeExtremum<T> {
        DegreeExtremum {
            value: self.degree_grid_fold(|acc, d| acc.min(d)),
            grid: Some(DEGREE_GRID_POINTS),
        }
    }

    /// Supremum of the degree function (used by the large-`n` checker).
    fn sup_degree(&self) -> DegreeExtremum<T> {
        DegreeExtremum {
            value: self.degree_grid_fold(|acc, d| acc.max(d)),
            grid: Some(DEGREE_GRID_POINTS),
        }
    }

    #[doc(hidden)]
    fn degree_grid_fold(&self, fold: impl Fn(T, T) -> T) -> T {
        let points = count::<T>(DEGREE_GRID_POINTS);
        let mut acc = None;
        for k in 0..DEGREE_GRID_POINTS {
            let x = (count::<T>(k) + real(0.5)) / points;
            let d = self.degree(x).expect("grid point inside [0, 1]");
            acc = Some(match acc {
                None => d,
                Some(a) => fold(a, d),
            });
        }
        acc.expect("grid is nonempty")
    }
}

fn check_unit_interval<T: Scalar>(x: T, what: &str) -> Result<()> {
    if x < T::zero() || x > T::one() {
        return Err(Error::domain(format!("{what} must lie in [0, 1]")));
    }
    Ok(())
}

/// Stochastic block model graphon: a piecewise-constant kernel determined by
/// block boundaries partitioning `[0, 1]` and a symmetric probability matrix.
///
/// Block membership follows the right-open convention `[b_{k-1}, b_k)`, with
/// `x = 1` assigned to the last block.
#[derive(Clone, Debug, PartialEq)]
pub struct SbmGraphon<T: Scalar> {
    boundaries: Vec<T>,
    probs: DMatrix<T>,
}

impl<T: Scalar> SbmGraphon<T> {
    /// Builds an SBM graphon from block boundaries `0 = b_0 < ... < b_m = 1`
    /// and the symmetric `m x m` probability matrix.
    pub fn new(boundaries: Vec<T>, probs: DMatrix<T>) -> Result<Self> {
        let piecewise = PiecewiseLipschitz::new(boundaries, T::zero())?;
        let m = piecewise.pieces();
        if probs.nrows() != m || probs.ncols() != m {
            return Err(Error::contract(format!(
                "probability matrix is {}x{}, expected {m}x{m} for {m} blocks",
                probs.nrows(),
                probs.ncols()
            )));
        }
        if probs != probs.transpose() {
            return Err(Error::contract("probability matrix must be symmetric"));
        }
        if probs.iter().any(|&p| p < T::zero() || p > T::one()) {
            return Err(Error::domain("probabilities must lie in [0, 1]"));
        }
        Ok(Self {
            boundaries: piecewise.boundaries().to_vec(),
            probs,
        })
    }

    /// The constant graphon `w = p` as a one-block SBM.
    pub fn constant(p: T) -> Result<Self> {
        Self::new(vec![T::zero(), T::one()], DMatrix::from_element(1, 1, p))
    }

    /// Equal-width blocks with the given probability matrix.
    pub fn equal_blocks(probs: DMatrix<T>) -> Result<Self> {
        let m = probs.nrows();
        if m == 0 {
            return Err(Error::contract("at least one block is required"));
        }
        let mt = count::<T>(m);
        let boundaries = (0..=m).map(|k| count::<T>(k) / mt).collect();
        Self::new(boundaries, probs)
    }

    /// Number of blocks.
    pub fn blocks(&self) -> usize {
        self.probs.nrows()
    }

    pub fn boundaries(&self) -> &[T] {
        &self.boundaries
    }

    pub fn probs(&self) -> &DMatrix<T> {
        &self.probs
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: T) -> usize {
        // Right-open intervals; x = 1 falls through to the last block.
        for (k, w) in self.boundaries.windows(2).enumerate() {
            if x >= w[0] && x < w[1] {
                return k;
            }
        }
        self.blocks() - 1
    }

    pub fn block_width(&self, block: usize) -> T {
        self.boundaries[block + 1] - self.boundaries[block]
    }

    /// Degree of every block: `d_i = sum_j P_ij |B_j|`.
    pub fn block_degrees(&self) -> Vec<T> {
        (0..self.blocks())
            .map(|i| {
                (0..self.blocks())
                    .map(|j| self.probs[(i, j)] * self.block_width(j))
                    .fold(T::zero(), |a, b| a + b)
            })
            .collect()
    }
}

impl<T: Scalar> Graphon<T> for SbmGraphon<T> {
    fn eval(&self, x: T, y: T) -> T {
        self.probs[(self.block_of(x), self.block_of(y))]
    }

    fn piecewise(&self) -> Option<PiecewiseLipschitz<T>> {
        Some(
            PiecewiseLipschitz::new(self.boundaries.clone(), T::zero())
                .expect("boundaries validated at construction"),
        )
    }

    fn degree(&self, x: T) -> Result<T> {
        check_unit_interval(x, "degree evaluation point")?;
        Ok(self.block_degrees()[self.block_of(x)])
    }

    fn inf_degree(&self) -> DegreeExtremum<T> {
        let value = self
            .block_degrees()
            .into_iter()
            .fold(None, |acc: Option<T>, d| Some(acc.map_or(d, |a| a.min(d))))
            .expect("at least one block");
        DegreeExtremum { value, grid: None }
    }

    fn sup_degree(&self) -> DegreeExtremum<T> {
        let value = self
            .block_degrees()
            .into_iter()
            .fold(None, |acc: Option<T>, d| Some(acc.map_or(d, |a| a.max(d))))
            .expect("at least one block");
        DegreeExtremum { value, grid: None }
    }
}

/// Serializable form of an SBM graphon: the block boundary points and the
/// probability matrix as nested rows. This is the on-disk document schema.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SbmDocument {
    pub boundaries: Vec<f64>,
    pub p: Vec<Vec<f64>>,
}

impl SbmDocument {
    pub fn build<T: Scalar>(&self) -> Result<SbmGraphon<T>> {
        let m = self.p.len();
        if self.p.iter().any(|row| row.len() != m) {
            return Err(Error::contract(
                "probability matrix rows must all have length m",
            ));
        }
        let probs = DMatrix::from_fn(m, m, |i, j| real::<T>(self.p[i][j]));
        let boundaries = self.boundaries.iter().map(|&b| real::<T>(b)).collect();
        SbmGraphon::new(boundaries, probs)
    }

    pub fn from_graphon<T: Scalar>(graphon: &SbmGraphon<T>) -> Self {
        let m = graphon.blocks();
        SbmDocument {
            boundaries: graphon.boundaries().iter().map(|&b| to_f64(b)).collect(),
            p: (0..m)
                .map(|i| (0..m).map(|j| to_f64(graphon.probs()[(i, j)])).collect())
                .collect(),
        }
    }
}

/// Complete weighted graph induced by a graphon at size `n`: weights
/// `w(u_i, u_j)` for `i != j`, zero diagonal (self-loops would cancel in
/// `L = D - A` anyway).
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedGraph<T: Scalar> {
    weights: DMatrix<T>,
}

impl<T: Scalar> ExpectedGraph<T> {
    pub fn new<G: Graphon<T> + ?Sized>(graphon: &G, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("expected graph needs at least one vertex"));
        }
        let u = latent_points::<T>(n);
        let mut weights = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let w = graphon.eval(u[i], u[j]);
                weights[(i, j)] = w;
                weights[(j, i)] = w;
            }
        }
        Ok(Self { weights })
    }

    /// Wraps an explicit weight matrix; it must be square, symmetric, with
    /// zero diagonal and entries in `[0, 1]`.
    pub fn from_weights(weights: DMatrix<T>) -> Result<Self> {
        if weights.nrows() != weights.ncols() {
            return Err(Error::contract("weight matrix must be square"));
        }
        if weights != weights.transpose() {
            return Err(Error::contract("weight matrix must be symmetric"));
        }
        if (0..weights.nrows()).any(|i| weights[(i, i)] != T::zero()) {
            return Err(Error::contract("weight matrix must have a zero diagonal"));
        }
        if weights.iter().any(|&w| w < T::zero() || w > T::one()) {
            return Err(Error::domain("weights must lie in [0, 1]"));
        }
        Ok(Self { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<T> {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> T {
        self.weights[(i, j)]
    }

    /// Draws a simple graph: each unordered pair `{i, j}`, visited in
    /// row-major order, consumes exactly one uniform `f64` variate from the
    /// stream and is connected iff the variate falls below the weight.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SimpleGraph {
        let n = self.n();
        let mut graph = SimpleGraph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let u: f64 = rng.random();
                if u < to_f64(self.weights[(i, j)]) {
                    graph.set_edge(i, j);
                }
            }
        }
        graph
    }
}

/// Simple undirected graph: symmetric boolean adjacency, no self-loops.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<bool>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.set_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::contract(format!("edge ({i}, {j}) outside 0..{n}")));
            }
            if i == j {
                return Err(Error::contract(format!("self-loop at vertex {i}")));
            }
            g.set_edge(i, j);
        }
        Ok(g)
    }

    fn set_edge(&mut self, i: usize, j: usize) {
        self.adj[i * self.n + j] = true;
        self.adj[j * self.n + i] = true;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j]
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.has_edge(i, j)).count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n)
            .map(|i| ((i + 1)..self.n).filter(|&j| self.has_edge(i, j)).count())
            .sum()
    }

    /// 0/1 adjacency matrix in the requested scalar type.
    pub fn adjacency<T: Scalar>(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            if self.has_edge(i, j) {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    /// Iterates over edges `(i, j)` with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n).filter_map(move |j| self.has_edge(i, j).then_some((i, j)))
        })
    }
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimpleGraph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    /// Smooth non-SBM kernel exercising the quadrature defaults.
    struct SmoothGraphon;

    impl Graphon<f64> for SmoothGraphon {
        fn eval(&self, x: f64, y: f64) -> f64 {
            (-x * y).exp()
        }
    }

    #[test]
    fn degree_of_constant_graphon_is_p() {
        let g = SbmGraphon::constant(0.37).unwrap();
        assert_eq!(g.degree(0.0).unwrap(), 0.37);
        assert_eq!(g.degree(0.99).unwrap(), 0.37);
        let zero = SbmGraphon::constant(0.0).unwrap();
        assert_eq!(zero.degree(0.5).unwrap(), 0.0);
    }

    #[test]
    fn degree_of_two_block_sbm_closed_form() {
        let g =
            SbmGraphon::<f64>::equal_blocks(DMatrix::from_row_slice(2, 2, &[0.8, 0.2, 0.2, 0.8]))
                .unwrap();
        // x = 0.25 lies in the first block: 0.8 * 0.5 + 0.2 * 0.5
        assert!((g.degree(0.25).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn degree_rejects_points_outside_unit_interval() {
        let g = SbmGraphon::constant(0.5).unwrap();
        assert!(matches!(g.degree(-0.1), Err(Error::Domain(_))));
        assert!(matches!(g.degree(1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn quadrature_degree_matches_analytic_integral() {
        // d(x) = (1 - e^{-x}) / x for w(x, y) = e^{-xy}.
        for &x in &[0.1, 0.5, 0.9] {
            let d = SmoothGraphon.degree(x).unwrap();
            let exact = (1.0 - (-x).exp()) / x;
            assert!((d - exact).abs() < 1e-6, "x = {x}: {d} vs {exact}");
        }
    }

    #[test]
    fn inf_degree_exact_for_sbm() {
        assert_eq!(SbmGraphon::constant(0.7).unwrap().inf_degree().value, 0.7);

        let g =
            SbmGraphon::equal_blocks(DMatrix::from_row_slice(2, 2, &[0.8, 0.2, 0.2, 0.8])).unwrap();
        let inf = g.inf_degree();
        assert_eq!(inf.value, 0.5);
        assert_eq!(inf.grid, None);

        let g =
            SbmGraphon::<f64>::equal_blocks(DMatrix::from_row_slice(2, 2, &[0.9, 0.1, 0.1, 0.3]))
                .unwrap();
        // block degrees 0.5 and 0.2
        assert!((g.inf_degree().value - 0.2).abs() < 1e-15);
        assert!((g.sup_degree().value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inf_degree_grid_reports_resolution() {
        let inf = SmoothGraphon.inf_degree();
        assert_eq!(inf.grid, Some(DEGREE_GRID_POINTS));
        // d is decreasing in x; infimum near x = 1 is 1 - e^{-1}.
        assert!((inf.value - (1.0 - (-1.0f64).exp())).abs() < 1e-3);
    }

    #[test]
    fn sbm_eval_matches_indicator_sum() {
        let g = SbmGraphon::new(
            vec![0.0, 0.3, 0.7, 1.0],
            DMatrix::from_row_slice(3, 3, &[0.9, 0.2, 0.1, 0.2, 0.5, 0.4, 0.1, 0.4, 0.8]),
        )
        .unwrap();
        let indicator_sum = |x: f64, y: f64| {
            let mut total = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    let bi = g.boundaries();
                    let in_i = (x >= bi[i] && x < bi[i + 1]) || (x == 1.0 && i == 2);
                    let in_j = (y >= bi[j] && y < bi[j + 1]) || (y == 1.0 && j == 2);
                    if in_i && in_j {
                        total += g.probs()[(i, j)];
                    }
                }
            }
            total
        };
        let mut rng = substream(42, &[]);
        for _ in 0..1000 {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            assert_eq!(g.eval(x, y), indicator_sum(x, y));
        }
        // boundary points, including x = 1
        assert_eq!(g.eval(1.0, 1.0), indicator_sum(1.0, 1.0));
        assert_eq!(g.eval(0.3, 0.7), indicator_sum(0.3, 0.7));
    }

    #[test]
    fn expected_graph_of_trivial_graphons() {
        let ones = ExpectedGraph::new(&SbmGraphon::constant(1.0).unwrap(), 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 0.0 } else { 1.0 };
                assert_eq!(ones.weight(i, j), expect);
            }
        }
        let zeros = ExpectedGraph::new(&SbmGraphon::constant(0.0).unwrap(), 5).unwrap();
        assert!(zeros.weights().iter().all(|&w| w == 0.0));
    }

    #[test]
    fn expected_graph_respects_block_membership() {
        let g =
            SbmGraphon::equal_blocks(DMatrix::from_row_slice(2, 2, &[0.8, 0.2, 0.2, 0.8])).unwrap();
        let expected = ExpectedGraph::new(&g, 4).unwrap();
        // u = (1/4, 2/4, 3/4, 1): first block holds u_1 only.
        let u = latent_points::<f64>(4);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let same = g.block_of(u[i]) == g.block_of(u[j]);
                    assert_eq!(expected.weight(i, j), if same { 0.8 } else { 0.2 });
                }
            }
        }
    }

    #[test]
    fn expected_graph_rejects_n_zero() {
        let g = SbmGraphon::constant(0.5).unwrap();
        assert!(matches!(ExpectedGraph::new(&g, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn sampling_trivial_kernels() {
        let mut rng = substream(1, &[]);
        let complete = ExpectedGraph::new(&SbmGraphon::constant(1.0).unwrap(), 6)
            .unwrap()
            .sample(&mut rng);
        assert_eq!(complete, SimpleGraph::complete(6));

        let empty = ExpectedGraph::new(&SbmGraphon::constant(0.0).unwrap(), 6)
            .unwrap()
            .sample(&mut rng);
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let expected = ExpectedGraph::new(&SbmGraphon::constant(0.4).unwrap(), 12).unwrap();
        let a = expected.sample(&mut substream(99, &[7]));
        let b = expected.sample(&mut substream(99, &[7]));
        assert_eq!(a, b);
        let c = expected.sample(&mut substream(99, &[8]));
        assert_ne!(a, c);
    }

    #[test]
    fn samples_are_symmetric_and_loop_free() {
        let g =
            SbmGraphon::equal_blocks(DMatrix::from_row_slice(2, 2, &[0.9, 0.3, 0.3, 0.6])).unwrap();
        let expected = ExpectedGraph::new(&g, 15).unwrap();
        let mut rng = substream(5, &[]);
        for _ in 0..50 {
            let s = expected.sample(&mut rng);
            for i in 0..15 {
                assert!(!s.has_edge(i, i));
                for j in 0..15 {
                    assert_eq!(s.has_edge(i, j), s.has_edge(j, i));
                }
            }
        }
    }

    #[test]
    fn sbm_document_round_trips() {
        let doc = SbmDocument {
            boundaries: vec![0.0, 0.5, 1.0],
            p: vec![vec![0.8, 0.2], vec![0.2, 0.8]],
        };
        let g: SbmGraphon<f64> = doc.build().unwrap();
        assert_eq!(g.blocks(), 2);
        let back = SbmDocument::from_graphon(&g);
        assert_eq!(back.boundaries, doc.boundaries);
        assert_eq!(back.p, doc.p);
    }

    #[test]
    fn sbm_document_validation() {
        let bad = SbmDocument {
            boundaries: vec![0.0, 1.0],
            p: vec![vec![1.5]],
        };
        assert!(bad.build::<f64>().is_err());
        let asym = SbmDocument {
            boundaries: vec![0.0, 0.5, 1.0],
            p: vec![vec![0.8, 0.1], vec![0.2, 0.8]],
        };
        assert!(asym.build::<f64>().is_err());
        let not_unit = SbmDocument {
            boundaries: vec![0.0, 0.9],
            p: vec![vec![0.5]],
        };
        assert!(not_unit.build::<f64>().is_err());
    }
}

//! System–bath entanglement theorems on sampled matrix-valued data.
//!
//! Local impurity functions and bare-bath functions are supplied as samples
//! on a common frequency grid. From them this module builds the nonlocal
//! responses, reconstructs `φ` and `ϑ` by quadrature over the coupling
//! fraction `λ²`, and evaluates the nonentanglement free energy.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::quad::gauss_legendre;
use crate::statfun::Statistics;

/// Largest imaginary residual tolerated in a bosonic `ϑ` reconstruction.
pub const IMAGINARY_RESIDUAL_LIMIT: f64 = 1e-8;

/// Strictly increasing sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("grid", "needs at least one point"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(invalid("grid", "points must be finite"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("grid", "points must be strictly increasing"));
        }
        Ok(Self { points })
    }

    /// `count` evenly spaced points on `[lo, hi]`.
    pub fn linear(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 || !(hi > lo) {
            return Err(invalid("grid", format!("need count >= 2 and lo < hi, got {count} on [{lo}, {hi}]")));
        }
        let step = (hi - lo) / (count - 1) as f64;
        let mut points: Vec<f64> = (0..count).map(|i| lo + step * i as f64).collect();
        points[count - 1] = hi;
        Self::new(points)
    }

    /// `count` points symmetric about zero, exactly mirrored.
    pub fn symmetric(max: f64, count: usize) -> Result<Self> {
        let base = Self::linear(-max, max, count)?;
        let n = base.points.len();
        let mut points = base.points;
        for i in 0..n / 2 {
            points[n - 1 - i] = -points[i];
        }
        if n % 2 == 1 {
            points[n / 2] = 0.0;
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when `points[n−1−i] = −points[i]` for every `i`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.points.len();
        (0..n).all(|i| self.points[n - 1 - i] == -self.points[i])
    }
}

/// Square complex matrices of one dimension sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFn {
    grid: FrequencyGrid,
    dim: usize,
    values: Vec<DMatrix<Complex64>>,
}

impl MatrixFn {
    pub fn new(grid: FrequencyGrid, values: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} samples for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        let dim = values[0].nrows();
        if dim == 0 {
            return Err(Error::ShapeMismatch("matrix dimension must be >= 1".into()));
        }
        if let Some(m) = values.iter().find(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::ShapeMismatch(format!(
                "expected {dim}x{dim} matrices, found {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self { grid, dim, values })
    }

    /// 1×1 samples of a scalar function.
    pub fn from_scalar(grid: FrequencyGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid
            .points()
            .iter()
            .map(|&w| DMatrix::from_element(1, 1, f(w)))
            .collect();
        Self { grid, dim: 1, values }
    }

    /// Samples of a matrix function, built element by element.
    pub fn from_fn(grid: FrequencyGrid, dim: usize, f: impl Fn(f64, usize, usize) -> Complex64) -> Result<Self> {
        let values = grid
            .points()
            .iter()
            .map(|&w| DMatrix::from_fn(dim, dim, |r, c| f(w, r, c)))
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[DMatrix<Complex64>] {
        &self.values
    }

    pub fn traces(&self) -> Vec<Complex64> {
        self.values.iter().map(|m| m.trace()).collect()
    }

    /// Columnar text: a header, then one row per grid point holding `ω` and
    /// the real and imaginary parts of every element in row-major order.
    pub fn to_columnar(&self) -> String {
        let mut out = String::from("omega");
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.push_str(&format!(",re_{r}_{c},im_{r}_{c}"));
            }
        }
        out.push('\n');
        for (w, m) in self.grid.points().iter().zip(&self.values) {
            out.push_str(&format!("{w:.16e}"));
            for r in 0..self.dim {
                for c in 0..self.dim {
                    let z = m[(r, c)];
                    out.push_str(&format!(",{:.16e},{:.16e}", z.re, z.im));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`MatrixFn::to_columnar`]; `#` lines are skipped.
    pub fn from_columnar(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| invalid("columnar", "missing header"))?;
        let columns = header.split(',').count();
        let elements = (columns.saturating_sub(1)) / 2;
        let dim = (elements as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != elements || columns != 1 + 2 * elements {
            return Err(Error::ShapeMismatch(format!("{columns} columns do not describe a square matrix")));
        }
        let mut points = Vec::new();
        let mut values = Vec::new();
        for (row, line) in lines.enumerate() {
            let nums: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| invalid("columnar", format!("row {}: {e}", row + 1)))?;
            if nums.len() != columns {
                return Err(Error::ShapeMismatch(format!("row {} has {} columns, expected {columns}", row + 1, nums.len())));
            }
            points.push(nums[0]);
            values.push(DMatrix::from_fn(dim, dim, |r, c| {
                let k = 1 + 2 * (r * dim + c);
                Complex64::new(nums[k], nums[k + 1])
            }));
        }
        Self::new(FrequencyGrid::new(points)?, values)
    }
}

fn check_pair(a: &MatrixFn, b: &MatrixFn) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::ShapeMismatch("sample grids differ".into()));
    }
    if a.dim != b.dim {
        return Err(Error::ShapeMismatch(format!("dimensions {} and {} differ", a.dim, b.dim)));
    }
    Ok(())
}

/// Pointwise `tr[a·b]`.
pub fn trace_of_product(a: &MatrixFn, b: &MatrixFn) -> Result<Vec<Complex64>> {
    check_pair(a, b)?;
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| (x * y).trace()).collect())
}

/// Bath–bath Green's function `g̃ − g̃·G̃_SS·g̃`.
pub fn gbb_from_local(g: &MatrixFn, gss: &MatrixFn) -> Result<MatrixFn> {
    check_pair(g, gss)?;
    let values = g.values.iter().zip(&gss.values).map(|(b, s)| b - b * s * b).collect();
    MatrixFn::new(g.grid.clone(), values)
}

/// Trace of the system–bath Green's function, `−2i tr[g̃·G̃_SS]`.
pub fn gsb_trace(g: &MatrixFn, gss: &MatrixFn) -> Result<Vec<Complex64>> {
    let minus_two_i = Complex64::new(0.0, -2.0);
    Ok(trace_of_product(g, gss)?.into_iter().map(|t| minus_two_i * t).collect())
}

/// Trace of the system–bath response, `−tr[φ̃·χ̃_SS]`.
pub fn chi_sb_trace(phi: &MatrixFn, chiss: &MatrixFn) -> Result<Vec<Complex64>> {
    Ok(trace_of_product(phi, chiss)?.into_iter().map(|t| -t).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre,
}

/// Quadrature nodes in the coupling fraction `λ² ∈ (0, 1)`; weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub rule: QuadratureRule,
}

impl LambdaGrid {
    pub fn gauss_legendre(count: usize) -> Result<Self> {
        if count < 1 {
            return Err(Error::InvalidCount(count));
        }
        let (x, w) = gauss_legendre(count);
        Ok(Self {
            nodes: x.iter().map(|t| 0.5 * (1.0 + t)).collect(),
            weights: w.iter().map(|v| 0.5 * v).collect(),
            rule: QuadratureRule::GaussLegendre,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn check_nodes(&self, lambda2: impl ExactSizeIterator<Item = f64>) -> Result<()> {
        if lambda2.len() != self.nodes.len() {
            return Err(Error::GridMismatch(format!(
                "{} coupling samples for {} quadrature nodes",
                lambda2.len(),
                self.nodes.len()
            )));
        }
        for (k, (got, want)) in lambda2.zip(&self.nodes).enumerate() {
            if (got - want).abs() > 1e-14 {
                return Err(Error::GridMismatch(format!("sample {k} at lambda2 = {got}, node is {want}")));
            }
        }
        Ok(())
    }
}

/// Local functions sampled at a set of coupling fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaFamily {
    pub lambda2: Vec<f64>,
    pub members: Vec<MatrixFn>,
}

impl LambdaFamily {
    /// Samples `build(λ²)` at every node of `lg`.
    pub fn sample(lg: &LambdaGrid, build: impl Fn(f64) -> MatrixFn) -> Self {
        Self {
            lambda2: lg.nodes.clone(),
            members: lg.nodes.iter().map(|&l| build(l)).collect(),
        }
    }

    fn check(&self, reference: &MatrixFn, lg: &LambdaGrid) -> Result<()> {
        if self.lambda2.len() != self.members.len() {
            return Err(Error::GridMismatch("coupling values and members differ in number".into()));
        }
        lg.check_nodes(self.lambda2.iter().copied())?;
        for m in &self.members {
            if m.grid != reference.grid {
                return Err(Error::GridMismatch("member grid differs from bath grid".into()));
            }
            if m.dim != reference.dim {
                return Err(Error::ShapeMismatch(format!("member dimension {} vs bath {}", m.dim, reference.dim)));
            }
        }
        Ok(())
    }

    /// `Σ_k w_k tr[bath·member_k]` at each grid point.
    fn weighted_traces(&self, bath: &MatrixFn, lg: &LambdaGrid) -> Vec<Complex64> {
        (0..bath.grid.len())
            .into_par_iter()
            .map(|i| {
                let b = &bath.values[i];
                self.members
                    .iter()
                    .zip(&lg.weights)
                    .fold(Complex64::new(0.0, 0.0), |acc, (m, &w)| acc + w * (b * &m.values[i]).trace())
            })
            .collect()
    }
}

/// `ϑ(ϖ)` on the Laplace grid of `bath_laplace` by quadrature over `λ²`.
///
/// Fermi: `−Σ_k w_k Re tr[g̃(iϖ) G̃_SS(iϖ; λ_k)]`.
/// Bose: `½ Σ_k w_k tr[φ̃(iϖ) χ̃_SS(iϖ; λ_k)]`, which must come out real.
pub fn vartheta_by_lambda_quadrature(
    kind: Statistics,
    bath_laplace: &MatrixFn,
    local_laplace: &LambdaFamily,
    lg: &LambdaGrid,
) -> Result<Vec<f64>> {
    local_laplace.check(bath_laplace, lg)?;
    let sums = local_laplace.weighted_traces(bath_laplace, lg);
    match kind {
        Statistics::Fermi => Ok(sums.iter().map(|s| -s.re).collect()),
        Statistics::Bose => {
            let residual = sums.iter().map(|s| 0.5 * s.im.abs()).fold(0.0, f64::max);
            if residual > IMAGINARY_RESIDUAL_LIMIT {
                return Err(Error::NonRealResult(residual));
            }
            Ok(sums.iter().map(|s| 0.5 * s.re).collect())
        }
    }
}

/// `φ(ω)` on the real grid of `bath_real` by quadrature over `λ²`.
///
/// Fermi: `−½ Im Σ_k w_k [X(ω; λ_k) − X(−ω; λ_k)]` with
/// `X = tr[g̃ G̃_SS]`; the grid must be symmetric about zero.
/// Bose: `½ Im Σ_k w_k tr[φ̃ χ̃_SS]`.
pub fn varphi_by_lambda_quadrature(
    kind: Statistics,
    bath_real: &MatrixFn,
    local_real: &LambdaFamily,
    lg: &LambdaGrid,
) -> Result<Vec<f64>> {
    local_real.check(bath_real, lg)?;
    match kind {
        Statistics::Fermi => {
            if !bath_real.grid.is_symmetric() {
                return Err(Error::AsymmetricGrid);
            }
            let sums = local_real.weighted_traces(bath_real, lg);
            let n = sums.len();
            Ok((0..n).map(|i| -0.5 * (sums[i].im - sums[n - 1 - i].im)).collect())
        }
        Statistics::Bose => Ok(local_real
            .weighted_traces(bath_real, lg)
            .iter()
            .map(|s| 0.5 * s.im)
            .collect()),
    }
}

/// Mean collective bath force `⟨F_u⟩ = −Σ_v η_uv ⟨Q_v⟩`.
pub fn f_mean_from_q(eta: &DMatrix<f64>, q_means: &[f64]) -> Result<Vec<f64>> {
    if eta.nrows() != eta.ncols() || eta.ncols() != q_means.len() {
        return Err(Error::ShapeMismatch(format!(
            "coupling matrix {}x{} against {} mode means",
            eta.nrows(),
            eta.ncols(),
            q_means.len()
        )));
    }
    Ok((0..eta.nrows())
        .map(|u| -(0..eta.ncols()).map(|v| eta[(u, v)] * q_means[v]).sum::<f64>())
        .collect())
}

/// Mode means `⟨Q_u⟩` at one coupling fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct QMeanTrace {
    pub lambda2: f64,
    pub means: Vec<f64>,
}

/// Nonentanglement free energy `−½ Σ_uv η_uv Σ_k w_k ⟨Q_u⟩_k ⟨Q_v⟩_k`.
pub fn a_nen(eta: &DMatrix<f64>, samples: &[QMeanTrace], lg: &LambdaGrid) -> Result<f64> {
    lg.check_nodes(samples.iter().map(|s| s.lambda2))?;
    let d = eta.nrows();
    if eta.ncols() != d {
        return Err(Error::ShapeMismatch("coupling matrix must be square".into()));
    }
    if let Some(s) = samples.iter().find(|s| s.means.len() != d) {
        return Err(Error::ShapeMismatch(format!("{} mode means for a {d}x{d} coupling", s.means.len())));
    }
    let mut total = 0.0;
    for (s, &w) in samples.iter().zip(&lg.weights) {
        let mut quad = 0.0;
        for u in 0..d {
            for v in 0..d {
                quad += eta[(u, v)] * s.means[u] * s.means[v];
            }
        }
        total += w * quad;
    }
    Ok(-0.5 * total)
}

//! Datasets, predictor subsets and exact least-squares fits.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Relative threshold on the diagonal of `R` below which a column set is
/// treated as collinear.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Dense column-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// Builds a matrix from column-major storage.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch("matrix storage length"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_row_major(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch("matrix storage length"));
        }
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[j * rows + i] = data[i * cols + j];
            }
        }
        Ok(m)
    }

    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("columns of unequal length"));
        }
        let data = columns.iter().flat_map(|c| c.iter().copied()).collect();
        Ok(Self { rows, cols: columns.len(), data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.rows + row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[col * self.rows + row] = value;
    }

    pub fn column(&self, col: usize) -> &[f64] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn column_mut(&mut self, col: usize) -> &mut [f64] {
        &mut self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn as_col_major(&self) -> &[f64] {
        &self.data
    }
}

/// Response, predictors and predictor names. The intercept column is implicit:
/// the effective design is `[1, x_1, ..., x_p]` with `q = p + 1` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Matrix,
    y: Vec<f64>,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(x: Matrix, y: Vec<f64>, names: Vec<String>) -> Result<Self> {
        let (n, p) = (x.rows(), x.cols());
        if y.len() != n {
            return Err(Error::DimensionMismatch("response length differs from row count"));
        }
        if names.len() != p {
            return Err(Error::DimensionMismatch("one name per predictor is required"));
        }
        if n <= p + 1 {
            return Err(Error::TooFewObservations { n, p });
        }
        if x.as_col_major().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("predictors"));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("response"));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        Ok(Self { x, y, names })
    }

    /// Same as [`Dataset::new`] with predictors named `x1..xp`.
    pub fn with_default_names(x: Matrix, y: Vec<f64>) -> Result<Self> {
        let names = (1..=x.cols()).map(|j| format!("x{j}")).collect();
        Self::new(x, y, names)
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn p(&self) -> usize {
        self.x.cols()
    }

    /// Number of coefficients in the full model, intercept included.
    pub fn q(&self) -> usize {
        self.p() + 1
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Predictor column by design index (`1..=p`).
    pub fn predictor(&self, index: usize) -> &[f64] {
        self.x.column(index - 1)
    }

    /// Design index (`1..=p`) of a named predictor.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name).map(|i| i + 1)
    }

    /// Total sum of squares about the mean, i.e. the intercept-only RSS.
    pub fn tss(&self) -> f64 {
        let mean = self.y.iter().sum::<f64>() / self.n() as f64;
        self.y.iter().map(|v| (v - mean) * (v - mean)).sum()
    }

    /// Rescales `y` by a positive constant.
    pub fn scale_response(&self, factor: f64) -> Self {
        Self {
            x: self.x.clone(),
            y: self.y.iter().map(|v| v * factor).collect(),
            names: self.names.clone(),
        }
    }
}

/// Set of included predictors, stored as sorted design indices in `1..=p`.
/// The intercept is always part of the model and never listed.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(Vec<usize>);

impl SubsetMask {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    /// Intercept-only model.
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn full(p: usize) -> Self {
        Self((1..=p).collect())
    }

    /// Bit `j - 1` of `bits` selects predictor `j`.
    pub fn from_bits(bits: u64) -> Self {
        Self((0..64).filter(|b| bits >> b & 1 == 1).map(|b| b + 1).collect())
    }

    pub fn bits(&self) -> u64 {
        self.0.iter().fold(0, |acc, &j| acc | 1 << (j - 1))
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.0.iter().all(|&j| other.contains(j))
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        match self.0.iter().find(|&&j| j == 0 || j > p) {
            Some(&index) => Err(Error::InvalidMask { index, p }),
            None => Ok(()),
        }
    }
}

/// Least-squares fit of one subset model.
#[derive(Debug, Clone, PartialEq)]
pub struct FitSummary {
    pub mask: SubsetMask,
    /// Dense length-`q` coefficients: intercept first, zeros for excluded predictors.
    pub beta: Vec<f64>,
    pub rss: f64,
    pub df_resid: usize,
}

impl FitSummary {
    pub fn size(&self) -> usize {
        self.mask.size()
    }
}

/// Triangularizes the column-major `rows x cols` matrix in place with
/// Householder reflections. On return the upper triangle holds `R` and the
/// strict lower triangle is zero. Returns the diagonal of `R`.
pub(crate) fn householder_triangularize(a: &mut [f64], rows: usize, cols: usize) -> Vec<f64> {
    let steps = cols.min(rows);
    let mut diag = Vec::with_capacity(steps);
    let mut v = vec![0.0; rows];
    for j in 0..steps {
        let col = &a[j * rows..(j + 1) * rows];
        let norm = libm::sqrt(col[j..].iter().map(|t| t * t).sum::<f64>());
        if norm == 0.0 {
            diag.push(0.0);
            continue;
        }
        let alpha = if col[j] > 0.0 { -norm } else { norm };
        v[j..].copy_from_slice(&col[j..]);
        v[j] -= alpha;
        let vnorm2: f64 = v[j..].iter().map(|t| t * t).sum();
        {
            let col = &mut a[j * rows..(j + 1) * rows];
            col[j] = alpha;
            col[j + 1..].iter_mut().for_each(|t| *t = 0.0);
        }
        if vnorm2 > 0.0 {
            for k in j + 1..cols {
                let c = &mut a[k * rows..(k + 1) * rows];
                let dot: f64 = v[j..].iter().zip(&c[j..]).map(|(a, b)| a * b).sum();
                let s = 2.0 * dot / vnorm2;
                c[j..].iter_mut().zip(&v[j..]).for_each(|(ci, vi)| *ci -= s * vi);
            }
        }
        diag.push(alpha);
    }
    diag
}

/// Exact least-squares fit of the intercept plus the predictors in `mask`,
/// solved by Householder QR of the selected columns.
pub fn fit_subset(data: &Dataset, mask: &SubsetMask) -> Result<FitSummary> {
    mask.validate(data.p())?;
    let n = data.n();
    let k = mask.size() + 1;
    if k > n {
        return Err(Error::DimensionMismatch("more coefficients than observations"));
    }
    // [1, x_S, y]
    let cols = k + 1;
    let mut a = Vec::with_capacity(n * cols);
    a.extend(core::iter::repeat_n(1.0, n));
    for &j in mask.indices() {
        a.extend_from_slice(data.predictor(j));
    }
    a.extend_from_slice(data.y());
    let diag = householder_triangularize(&mut a, n, cols);

    let largest = diag[..k].iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    if largest == 0.0 || diag[..k].iter().any(|d| d.abs() <= RANK_TOLERANCE * largest) {
        return Err(Error::RankDeficient);
    }

    // Back substitution R b = Q^T y.
    let rhs = &a[k * n..k * n + k];
    let mut b = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = rhs[i];
        for (j, bj) in b.iter().enumerate().skip(i + 1) {
            s -= a[j * n + i] * bj;
        }
        b[i] = s / a[i * n + i];
    }

    let mut beta = vec![0.0; data.q()];
    beta[0] = b[0];
    for (slot, &j) in mask.indices().iter().enumerate() {
        beta[j] = b[slot + 1];
    }
    let rss = residual_sum_of_squares(data, &beta);
    Ok(FitSummary { mask: mask.clone(), beta, rss, df_resid: n - k })
}

/// `||y - X beta||^2` for a dense length-`q` coefficient vector.
pub fn residual_sum_of_squares(data: &Dataset, beta: &[f64]) -> f64 {
    let mut fitted = vec![beta[0]; data.n()];
    for (j, &b) in beta.iter().enumerate().skip(1) {
        if b != 0.0 {
            for (f, x) in fitted.iter_mut().zip(data.predictor(j)) {
                *f += b * x;
            }
        }
    }
    data.y().iter().zip(&fitted).map(|(y, f)| (y - f) * (y - f)).sum()
}

/// Residual mean square of the full model, `rss / (n - q)`.
pub fn full_model_variance(data: &Dataset) -> Result<f64> {
    let fit = fit_subset(data, &SubsetMask::full(data.p()))?;
    variance_from_full_fit(data, &fit)
}

pub(crate) fn variance_from_full_fit(data: &Dataset, full: &FitSummary) -> Result<f64> {
    let y_norm2: f64 = data.y().iter().map(|v| v * v).sum();
    if full.rss <= 1e-12 * y_norm2 {
        return Err(Error::DegenerateFit);
    }
    Ok(full.rss / full.df_resid as f64)
}

/// Centers and scales every predictor to sample mean 0 and sample standard
/// deviation 1 (denominator `n - 1`). The response is left unchanged.
pub fn standardize(data: &Dataset) -> Result<Dataset> {
    let n = data.n();
    let mut x = data.x.clone();
    for j in 0..data.p() {
        let col = x.column_mut(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        let sd = libm::sqrt(var);
        if !(sd > 0.0) || sd <= 1e-14 * mean.abs() {
            return Err(Error::ConstantColumn(j + 1));
        }
        col.iter_mut().for_each(|v| *v = (*v - mean) / sd);
    }
    Ok(Dataset { x, y: data.y.clone(), names: data.names.clone() })
}

//! Model selection criteria: the constrained minimum criterion (CMC) and the
//! classical BIC, Mallows' Cp and adjusted R² for comparison.
//!
//! Every criterion here depends on a model only through its size and RSS, so
//! selection works off the per-size minimum-RSS table. For CMC this is exact:
//! if any model of size `s` satisfies `lambda <= kappa`, the size-`s` model
//! with the smallest RSS does too, and it is also the highest-likelihood one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::dist::{f_quantile, f_sf, FParams};
use crate::error::{Error, Result};
use crate::linalg::{fit_subset, variance_from_full_fit, Dataset, FitSummary, SubsetMask};
use crate::subset::{best_per_size, CandidateSet, EngineOptions, PerSizeBest};

/// Relative slack below the full-model RSS tolerated as rounding residue.
const NEGATIVE_LAMBDA_GUARD: f64 = 1e-9;

pub const DEFAULT_ALPHA: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    /// Sparsest model with `lambda <= q * F(1 - alpha; q, n - q)`.
    Cmc { alpha: f64 },
    Bic,
    /// Mallows' Cp; equivalent to AIC for Gaussian linear models.
    Cp,
    AdjR2,
}

impl Criterion {
    pub fn cmc(alpha: f64) -> Self {
        Self::Cmc { alpha }
    }

    /// Criterion family: `cmc`, `bic`, `cp_aic` or `adjr2`.
    pub fn family(&self) -> &'static str {
        match self {
            Self::Cmc { .. } => "cmc",
            Self::Bic => "bic",
            Self::Cp => "cp_aic",
            Self::AdjR2 => "adjr2",
        }
    }

    /// Unique label, e.g. `cmc_0.9`.
    pub fn label(&self) -> String {
        match self {
            Self::Cmc { alpha } => format!("cmc_{alpha}"),
            other => String::from(other.family()),
        }
    }

    /// AdjR², Cp, BIC followed by CMC at each alpha.
    pub fn standard_set(alphas: &[f64]) -> Vec<Self> {
        let mut v = alloc::vec![Self::AdjR2, Self::Cp, Self::Bic];
        v.extend(alphas.iter().map(|&alpha| Self::Cmc { alpha }));
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmcConfig {
    pub alpha: f64,
    pub candidates: CandidateSet,
    pub engine: EngineOptions,
}

impl CmcConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain("alpha must lie in [0, 1]"));
        }
        Ok(Self { alpha, ..Self::default() })
    }
}

impl Default for CmcConfig {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            candidates: CandidateSet::AllSubsets,
            engine: EngineOptions::default(),
        }
    }
}

/// Outcome of one criterion on one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub criterion: Criterion,
    pub chosen: SubsetMask,
    pub fit: FitSummary,
    /// Likelihood-ratio statistic of the chosen model against the full model.
    pub lambda: f64,
    /// CMC threshold (`None` for the other criteria); may be `+inf`.
    pub kappa: Option<f64>,
    /// Criterion value of the best model of each size.
    pub scores: Vec<Option<f64>>,
    pub per_size: PerSizeBest,
    pub sigma2: f64,
    pub rss_full: f64,
}

/// `(rss - rss_full) / sigma2`, clamped at zero for rounding residue.
pub fn lambda_stat(fit: &FitSummary, rss_full: f64, sigma2: f64) -> Result<f64> {
    lambda_from_rss(fit.rss, rss_full, sigma2)
}

fn lambda_from_rss(rss: f64, rss_full: f64, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(Error::DegenerateFit);
    }
    let diff = rss - rss_full;
    if diff >= 0.0 {
        Ok(diff / sigma2)
    } else if diff >= -NEGATIVE_LAMBDA_GUARD * rss_full {
        Ok(0.0)
    } else {
        Err(Error::Inconsistent("submodel RSS below full-model RSS"))
    }
}

/// CMC threshold `q * F(1 - alpha; q, n - q)`; `+inf` at `alpha = 0`.
pub fn kappa(alpha: f64, q: usize, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain("alpha must lie in [0, 1]"));
    }
    if q == 0 || n <= q {
        return Err(Error::Domain("kappa needs 0 < q < n"));
    }
    if alpha == 1.0 {
        return Ok(0.0);
    }
    let params = FParams::new(q as f64, (n - q) as f64)?;
    Ok(q as f64 * f_quantile(1.0 - alpha, params)?)
}

/// `alpha_n = P(F(q, n - q) > n^delta)`, a level sequence that shrinks to
/// zero while keeping the quantile `o(n)`.
pub fn alpha_schedule(n: usize, delta: f64, q: usize) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain("delta must be positive"));
    }
    if q == 0 || n <= q {
        return Err(Error::Domain("alpha schedule needs 0 < q < n"));
    }
    let params = FParams::new(q as f64, (n - q) as f64)?;
    f_sf(libm::pow(n as f64, delta), params)
}

/// False inactive and false active rates of a selection.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RatePair {
    pub fir: f64,
    pub far: f64,
}

impl RatePair {
    pub fn is_perfect(&self) -> bool {
        self.fir == 0.0 && self.far == 0.0
    }
}

pub fn classify(chosen: &SubsetMask, truth: &SubsetMask, p: usize) -> RatePair {
    let active = truth.size();
    let missed = truth.indices().iter().filter(|&&j| !chosen.contains(j)).count();
    let extra = chosen.indices().iter().filter(|&&j| !truth.contains(j)).count();
    let fir = if active == 0 { 0.0 } else { missed as f64 / active as f64 };
    let far = if active >= p { 0.0 } else { extra as f64 / (p - active) as f64 };
    RatePair { fir, far }
}

/// Per-size search results plus the full-model quantities every criterion needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpace {
    n: usize,
    p: usize,
    tss: f64,
    full: FitSummary,
    sigma2: f64,
    per_size: PerSizeBest,
}

impl ModelSpace {
    pub fn new(data: &Dataset, cands: &CandidateSet, opts: &EngineOptions) -> Result<Self> {
        let full = fit_subset(data, &SubsetMask::full(data.p()))?;
        let sigma2 = variance_from_full_fit(data, &full)?;
        let mut per_size = best_per_size(data, cands, opts)?;
        // The full model is its own reference: pin lambda = 0 exactly.
        if let Some(Some(entry)) = per_size.entries.get_mut(data.p()) {
            entry.rss = full.rss;
        }
        Ok(Self { n: data.n(), p: data.p(), tss: data.tss(), full, sigma2, per_size })
    }

    pub fn per_size(&self) -> &PerSizeBest {
        &self.per_size
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn rss_full(&self) -> f64 {
        self.full.rss
    }

    pub fn full_fit(&self) -> &FitSummary {
        &self.full
    }

    pub fn lambda(&self, rss: f64) -> Result<f64> {
        lambda_from_rss(rss, self.full.rss, self.sigma2)
    }

    pub fn kappa(&self, alpha: f64) -> Result<f64> {
        kappa(alpha, self.p + 1, self.n)
    }

    /// Criterion value for a model of `size` predictors with residual `rss`.
    /// CMC scores are the likelihood-ratio statistic.
    pub fn score(&self, criterion: Criterion, size: usize, rss: f64) -> Result<f64> {
        let n = self.n as f64;
        let k = (size + 1) as f64;
        Ok(match criterion {
            Criterion::Cmc { .. } => self.lambda(rss)?,
            Criterion::Bic => n * libm::log(rss / n) + k * libm::log(n),
            Criterion::Cp => rss / self.sigma2 - n + 2.0 * k,
            Criterion::AdjR2 => 1.0 - (rss / (n - k)) / (self.tss / (n - 1.0)),
        })
    }

    pub fn scores(&self, criterion: Criterion) -> Result<Vec<Option<f64>>> {
        self.per_size
            .entries
            .iter()
            .enumerate()
            .map(|(s, e)| e.as_ref().map(|e| self.score(criterion, s, e.rss)).transpose())
            .collect()
    }

    /// Chosen model size. BIC and Cp are minimized, adjusted R² maximized;
    /// exact score ties go to the smaller model.
    pub fn choose_size(&self, criterion: Criterion) -> Result<usize> {
        if let Criterion::Cmc { alpha } = criterion {
            let kappa = self.kappa(alpha)?;
            for (s, entry) in self.per_size.iter() {
                if self.lambda(entry.rss)? <= kappa {
                    return Ok(s);
                }
            }
            return Err(Error::Infeasible);
        }
        let sign = if criterion == Criterion::AdjR2 { -1.0 } else { 1.0 };
        let mut best: Option<(usize, f64)> = None;
        for (s, entry) in self.per_size.iter() {
            let v = sign * self.score(criterion, s, entry.rss)?;
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((s, v));
            }
        }
        best.map(|(s, _)| s).ok_or(Error::Infeasible)
    }

    pub fn choose(&self, criterion: Criterion) -> Result<&SubsetMask> {
        let s = self.choose_size(criterion)?;
        Ok(&self.per_size.get(s).expect("chosen size is present").mask)
    }

    /// Full report for `criterion`, refitting the chosen model.
    pub fn report(&self, data: &Dataset, criterion: Criterion) -> Result<SelectionReport> {
        let chosen = self.choose(criterion)?.clone();
        let fit = fit_subset(data, &chosen)?;
        let kappa = match criterion {
            Criterion::Cmc { alpha } => Some(self.kappa(alpha)?),
            _ => None,
        };
        Ok(SelectionReport {
            criterion,
            lambda: lambda_stat(&fit, self.full.rss, self.sigma2)?,
            chosen,
            fit,
            kappa,
            scores: self.scores(criterion)?,
            per_size: self.per_size.clone(),
            sigma2: self.sigma2,
            rss_full: self.full.rss,
        })
    }
}

pub fn select(data: &Dataset, cands: &CandidateSet, opts: &EngineOptions, criterion: Criterion) -> Result<SelectionReport> {
    if let Criterion::Cmc { alpha } = criterion {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain("alpha must lie in [0, 1]"));
        }
    }
    ModelSpace::new(data, cands, opts)?.report(data, criterion)
}

pub fn cmc_select(data: &Dataset, config: &CmcConfig) -> Result<SelectionReport> {
    select(data, &config.candidates, &config.engine, Criterion::Cmc { alpha: config.alpha })
}

/// Minimizes `n ln(RSS / n) + k ln n`.
pub fn bic_select(data: &Dataset, cands: &CandidateSet) -> Result<SelectionReport> {
    select(data, cands, &EngineOptions::default(), Criterion::Bic)
}

/// Minimizes `RSS / sigma2_full - n + 2k`.
pub fn cp_select(data: &Dataset, cands: &CandidateSet) -> Result<SelectionReport> {
    select(data, cands, &EngineOptions::default(), Criterion::Cp)
}

/// Maximizes `1 - (RSS / (n - k)) / (TSS / (n - 1))`.
pub fn adjr2_select(data: &Dataset, cands: &CandidateSet) -> Result<SelectionReport> {
    select(data, cands, &EngineOptions::default(), Criterion::AdjR2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use alloc::vec;

    fn d1() -> Dataset {
        let x = Matrix::from_columns(&[vec![0.0, 1.0, 2.0, 3.0]]).unwrap();
        Dataset::with_default_names(x, vec![0.0, 1.0, 2.0, 4.0]).unwrap()
    }

    #[test]
    fn lambda_on_d1() {
        let data = d1();
        let full = fit_subset(&data, &SubsetMask::full(1)).unwrap();
        let empty = fit_subset(&data, &SubsetMask::empty()).unwrap();
        assert_eq!(lambda_stat(&full, full.rss, 0.15).unwrap(), 0.0);
        let lam = lambda_stat(&empty, full.rss, 0.15).unwrap();
        assert!((lam - 56.0 - 1.0 / 3.0).abs() < 1e-10);
        assert_eq!(lambda_stat(&empty, full.rss, 0.0), Err(Error::DegenerateFit));
    }

    #[test]
    fn lambda_clamps_rounding_residue_only() {
        let fit = FitSummary { mask: SubsetMask::empty(), beta: vec![0.0], rss: 1.0 - 1e-12, df_resid: 3 };
        assert_eq!(lambda_stat(&fit, 1.0, 0.5).unwrap(), 0.0);
        let bad = FitSummary { rss: 0.9, ..fit };
        assert!(matches!(lambda_stat(&bad, 1.0, 0.5), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn kappa_extremes() {
        assert_eq!(kappa(1.0, 2, 4).unwrap(), 0.0);
        assert!((kappa(0.5, 2, 4).unwrap() - 2.0).abs() < 1e-8);
        assert_eq!(kappa(0.0, 2, 4).unwrap(), f64::INFINITY);
        assert!(kappa(1.5, 2, 4).is_err());
        assert!(kappa(0.5, 4, 4).is_err());
    }

    #[test]
    fn cmc_on_d1() {
        let data = d1();
        let report = cmc_select(&data, &CmcConfig::new(0.5).unwrap()).unwrap();
        assert_eq!(report.chosen, SubsetMask::full(1));
        assert_eq!(report.lambda, 0.0);
        assert!((report.kappa.unwrap() - 2.0).abs() < 1e-8);
        let empty = cmc_select(&data, &CmcConfig::new(0.0).unwrap()).unwrap();
        assert!(empty.chosen.is_empty());
        let full = cmc_select(&data, &CmcConfig::new(1.0).unwrap()).unwrap();
        assert_eq!(full.chosen, SubsetMask::full(1));
    }

    #[test]
    fn explicit_list_can_be_infeasible() {
        let data = d1();
        let config = CmcConfig {
            alpha: 0.5,
            candidates: CandidateSet::explicit([SubsetMask::empty()]),
            ..Default::default()
        };
        assert_eq!(cmc_select(&data, &config), Err(Error::Infeasible));
        let single = bic_select(&data, &CandidateSet::explicit([SubsetMask::empty()])).unwrap();
        assert!(single.chosen.is_empty());
    }

    #[test]
    fn alpha_schedule_range_and_median() {
        let a = alpha_schedule(100, 0.2, 6).unwrap();
        assert!(a > 0.0 && a < 1.0);
        // With q = n - q the F median is 1, and n^delta -> 1 as delta -> 0.
        let tiny = alpha_schedule(20, 1e-12, 10).unwrap();
        assert!((tiny - 0.5).abs() < 1e-9);
        assert!(alpha_schedule(1_000_000, 0.5, 6).unwrap() < 1e-6);
        assert!(alpha_schedule(10, 0.0, 3).is_err());
    }

    #[test]
    fn classify_examples() {
        let truth = SubsetMask::new([1, 2, 3]);
        assert!(classify(&truth, &truth, 6).is_perfect());
        assert_eq!(classify(&SubsetMask::full(6), &truth, 6), RatePair { fir: 0.0, far: 1.0 });
        assert_eq!(classify(&SubsetMask::empty(), &truth, 6), RatePair { fir: 1.0, far: 0.0 });
        assert_eq!(classify(&SubsetMask::new([1, 4]), &truth, 6), RatePair { fir: 2.0 / 3.0, far: 1.0 / 3.0 });
        assert_eq!(classify(&SubsetMask::new([1]), &SubsetMask::empty(), 4), RatePair { fir: 0.0, far: 0.25 });
        assert_eq!(classify(&SubsetMask::new([1]), &SubsetMask::full(2), 2), RatePair { fir: 0.5, far: 0.0 });
    }

    #[test]
    fn labels() {
        assert_eq!(Criterion::cmc(0.9).label(), "cmc_0.9");
        assert_eq!(Criterion::Cp.label(), "cp_aic");
        assert_eq!(Criterion::standard_set(&[0.5]).len(), 4);
    }
}

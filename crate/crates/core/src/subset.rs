//! Candidate model enumeration and per-size minimum-RSS search.
//!
//! Exhaustive searches run on the triangular factor of `[1, X, y]`: after one
//! Householder QR every subset problem lives in `(p + 2)` dimensions. The
//! search walks an include/exclude tree in which an *include* step is free
//! (the column is already in triangular position) and an *exclude* step drops
//! one column and restores triangular form with Givens rotations. Each node
//! knows the RSS of its decided set and, for free, the RSS of the decided set
//! plus every undecided column, which is the branch-and-bound lower bound for
//! the whole subtree.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{fit_subset, householder_triangularize, Dataset, FitSummary, SubsetMask, RANK_TOLERANCE};

pub const DEFAULT_SUBSET_LIMIT: usize = 25;

/// Which models a selector may choose from.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateSet {
    /// All `2^p` subsets.
    AllSubsets,
    /// Only the minimum-RSS model of each size (sufficient for every criterion here).
    BestPerSize,
    /// A caller-supplied list, e.g. the models visited along a lasso path.
    ExplicitList(Vec<SubsetMask>),
}

impl CandidateSet {
    /// Explicit list in canonical (sorted, deduplicated) form.
    pub fn explicit(masks: impl IntoIterator<Item = SubsetMask>) -> Self {
        let mut masks: Vec<SubsetMask> = masks.into_iter().collect();
        masks.sort();
        masks.dedup();
        Self::ExplicitList(masks)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::AllSubsets => "all",
            Self::BestPerSize => "best-per-size",
            Self::ExplicitList(_) => "list",
        }
    }

    fn is_exhaustive(&self) -> bool {
        !matches!(self, Self::ExplicitList(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    /// Largest `p` accepted for exhaustive candidate sets.
    pub limit: usize,
    /// Branch-and-bound pruning for exhaustive searches.
    pub prune: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self { limit: DEFAULT_SUBSET_LIMIT, prune: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizeBest {
    pub mask: SubsetMask,
    pub rss: f64,
}

/// Minimum-RSS candidate for every model size `0..=p`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerSizeBest {
    /// Indexed by size; `None` when no candidate of that size exists.
    pub entries: Vec<Option<SizeBest>>,
    /// Rank-deficient candidate masks that were skipped.
    pub skipped: usize,
}

impl PerSizeBest {
    pub fn get(&self, size: usize) -> Option<&SizeBest> {
        self.entries.get(size).and_then(Option::as_ref)
    }

    /// Present entries in increasing size order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &SizeBest)> {
        self.entries.iter().enumerate().filter_map(|(s, e)| e.as_ref().map(|e| (s, e)))
    }

    pub fn max_size(&self) -> usize {
        self.entries.len() - 1
    }
}

fn check_limit(p: usize, opts: &EngineOptions) -> Result<()> {
    let limit = opts.limit.min(63);
    if p > limit {
        return Err(Error::LimitExceeded { p, limit });
    }
    Ok(())
}

fn validated_list(data: &Dataset, masks: &[SubsetMask]) -> Result<Vec<SubsetMask>> {
    let mut list = masks.to_vec();
    for m in &list {
        m.validate(data.p())?;
    }
    list.sort();
    list.dedup();
    Ok(list)
}

enum MaskSource {
    Bits { next: u64, end: u64 },
    List(vec::IntoIter<SubsetMask>),
}

/// Lazy sequence of candidate fits. Rank-deficient candidates are skipped and
/// counted in [`Fits::skipped`].
pub struct Fits<'a> {
    data: &'a Dataset,
    source: MaskSource,
    skipped: usize,
}

impl Fits<'_> {
    pub fn skipped(&self) -> usize {
        self.skipped
    }
}

impl Iterator for Fits<'_> {
    type Item = FitSummary;

    fn next(&mut self) -> Option<FitSummary> {
        loop {
            let mask = match &mut self.source {
                MaskSource::Bits { next, end } => {
                    if *next >= *end {
                        return None;
                    }
                    *next += 1;
                    SubsetMask::from_bits(*next - 1)
                }
                MaskSource::List(it) => it.next()?,
            };
            match fit_subset(self.data, &mask) {
                Ok(fit) => return Some(fit),
                Err(_) => self.skipped += 1,
            }
        }
    }
}

/// One least-squares fit per candidate mask, in unspecified order.
pub fn enumerate_fits<'a>(data: &'a Dataset, cands: &CandidateSet, opts: &EngineOptions) -> Result<Fits<'a>> {
    let source = match cands {
        CandidateSet::AllSubsets => {
            check_limit(data.p(), opts)?;
            MaskSource::Bits { next: 0, end: 1 << data.p() }
        }
        CandidateSet::BestPerSize => {
            let best = best_per_size(data, cands, opts)?;
            let masks: Vec<SubsetMask> = best.iter().map(|(_, e)| e.mask.clone()).collect();
            MaskSource::List(masks.into_iter())
        }
        CandidateSet::ExplicitList(masks) => MaskSource::List(validated_list(data, masks)?.into_iter()),
    };
    Ok(Fits { data, source, skipped: 0 })
}

/// Minimum-RSS candidate of each size. Ties at equal RSS go to the
/// lexicographically smallest sorted mask.
pub fn best_per_size(data: &Dataset, cands: &CandidateSet, opts: &EngineOptions) -> Result<PerSizeBest> {
    match cands {
        CandidateSet::ExplicitList(masks) => {
            let mut entries: Vec<Option<SizeBest>> = vec![None; data.p() + 1];
            let mut skipped = 0;
            // Sorted list: a strict comparison keeps the smallest mask on ties.
            for mask in validated_list(data, masks)? {
                match fit_subset(data, &mask) {
                    Ok(fit) => {
                        let slot = &mut entries[mask.size()];
                        if slot.as_ref().is_none_or(|b| fit.rss < b.rss) {
                            *slot = Some(SizeBest { mask, rss: fit.rss });
                        }
                    }
                    Err(Error::RankDeficient) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok(PerSizeBest { entries, skipped })
        }
        _ => {
            debug_assert!(cands.is_exhaustive());
            check_limit(data.p(), opts)?;
            Ok(SubsetSearch::new(data, opts.prune).run())
        }
    }
}

/// Triangular state of one node in the include/exclude tree.
#[derive(Clone)]
struct Factor {
    /// Design column (0 = intercept) at each position.
    cols: Vec<usize>,
    /// Row-major upper-triangular factor, row stride `dim`.
    r: Vec<f64>,
    /// Rotated response.
    z: Vec<f64>,
    /// Active positions.
    m: usize,
    /// RSS with all active positions included.
    tail: f64,
}

struct SubsetSearch {
    dim: usize,
    levels: Vec<Factor>,
    best: Vec<Option<(u64, f64)>>,
    skipped: usize,
    prune: bool,
}

impl SubsetSearch {
    fn new(data: &Dataset, prune: bool) -> Self {
        let (n, p) = (data.n(), data.p());
        let dim = p + 1;
        let cols = p + 2;
        let mut a = Vec::with_capacity(n * cols);
        a.extend(core::iter::repeat_n(1.0, n));
        a.extend_from_slice(data.x().as_col_major());
        a.extend_from_slice(data.y());
        householder_triangularize(&mut a, n, cols);

        let mut r = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                r[i * dim + j] = a[j * n + i];
            }
        }
        let z: Vec<f64> = (0..dim).map(|i| a[(p + 1) * n + i]).collect();
        let resid = a[(p + 1) * n + p + 1];
        let root = Factor { cols: (0..dim).collect(), r, z, m: dim, tail: resid * resid };
        Self {
            dim,
            levels: vec![root; dim],
            best: vec![None; dim],
            skipped: 0,
            prune,
        }
    }

    fn run(mut self) -> PerSizeBest {
        let root = &self.levels[0];
        let empty_rss = root.tail + root.z[1..root.m].iter().map(|v| v * v).sum::<f64>();
        self.best[0] = Some((0, empty_rss));
        self.visit(0, 1, 0);
        let entries = self
            .best
            .into_iter()
            .map(|b| b.map(|(bits, rss)| SizeBest { mask: SubsetMask::from_bits(bits), rss }))
            .collect();
        PerSizeBest { entries, skipped: self.skipped }
    }

    /// Node at `level` whose first `k` positions are decided-included.
    fn visit(&mut self, level: usize, k: usize, bits: u64) {
        let dim = self.dim;
        let (m, tail) = (self.levels[level].m, self.levels[level].tail);
        if k == m {
            return;
        }
        // Every subset in this subtree has size in k..m and RSS >= tail.
        if self.prune && (k..m).all(|s| self.best[s].is_some_and(|(_, rss)| tail > rss)) {
            return;
        }

        let node = &self.levels[level];
        let pivot = node.r[k * dim + k].abs();
        let largest = (0..k).fold(pivot, |acc, i| acc.max(node.r[i * dim + i].abs()));
        if pivot <= RANK_TOLERANCE * largest {
            // Every superset of a collinear set is collinear.
            self.skipped += 1 << (m - k - 1);
        } else {
            let rss = tail + node.z[k + 1..m].iter().map(|v| v * v).sum::<f64>();
            let with = bits | 1 << (node.cols[k] - 1);
            let slot = &mut self.best[k];
            if slot.is_none_or(|(_, b)| rss < b) {
                *slot = Some((with, rss));
            }
            self.visit(level, k + 1, with);
        }

        if k + 1 < m {
            self.drop_position(level, k);
            self.visit(level + 1, k, bits);
        }
    }

    /// Writes into `levels[level + 1]` the factor of `levels[level]` with
    /// position `k` removed.
    fn drop_position(&mut self, level: usize, k: usize) {
        let dim = self.dim;
        let (head, rest) = self.levels.split_at_mut(level + 1);
        let parent = &head[level];
        let child = &mut rest[0];
        let m = parent.m;

        child.cols.clear();
        child.cols.extend(parent.cols[..k].iter().chain(&parent.cols[k + 1..m]));
        for i in 0..m {
            let src = &parent.r[i * dim..i * dim + m];
            let dst = &mut child.r[i * dim..i * dim + m - 1];
            dst[..k].copy_from_slice(&src[..k]);
            dst[k..].copy_from_slice(&src[k + 1..]);
        }
        child.z[..m].copy_from_slice(&parent.z[..m]);

        // Rows k..m are upper Hessenberg now; rotate the subdiagonal away.
        for i in k..m - 1 {
            let a = child.r[i * dim + i];
            let b = child.r[(i + 1) * dim + i];
            let h = libm::hypot(a, b);
            if h == 0.0 {
                continue;
            }
            let (c, s) = (a / h, b / h);
            for j in i..m - 1 {
                let top = child.r[i * dim + j];
                let bot = child.r[(i + 1) * dim + j];
                child.r[i * dim + j] = c * top + s * bot;
                child.r[(i + 1) * dim + j] = c * bot - s * top;
            }
            child.r[(i + 1) * dim + i] = 0.0;
            let (top, bot) = (child.z[i], child.z[i + 1]);
            child.z[i] = c * top + s * bot;
            child.z[i + 1] = c * bot - s * top;
        }
        let last = child.z[m - 1];
        child.tail = parent.tail + last * last;
        child.m = m - 1;
    }
}

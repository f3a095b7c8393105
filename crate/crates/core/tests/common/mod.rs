//! Independent reference implementations used as test oracles.

#![allow(dead_code)]

use cmc_core::simulate::{gen_weak_design, replication_rng};
use cmc_core::{Dataset, Matrix, SubsetMask};
use rand::Rng;
use rand_distr::StandardNormal;

/// Solves the normal equations `(X'X) b = X'y` for the intercept plus `mask`
/// by Gaussian elimination with partial pivoting. Returns the dense
/// coefficient vector and the RSS.
pub fn normal_equations_fit(data: &Dataset, mask: &SubsetMask) -> (Vec<f64>, f64) {
    let n = data.n();
    let mut cols: Vec<Vec<f64>> = vec![vec![1.0; n]];
    cols.extend(mask.indices().iter().map(|&j| data.predictor(j).to_vec()));
    let k = cols.len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = cols[i].iter().zip(&cols[j]).map(|(u, v)| u * v).sum();
        }
        a[i][k] = cols[i].iter().zip(data.y()).map(|(u, v)| u * v).sum();
    }
    for c in 0..k {
        let piv = (c..k).max_by(|&r, &s| a[r][c].abs().total_cmp(&a[s][c].abs())).unwrap();
        a.swap(c, piv);
        for r in c + 1..k {
            let f = a[r][c] / a[c][c];
            for j in c..=k {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    let mut b = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = (i + 1..k).map(|j| a[i][j] * b[j]).sum();
        b[i] = (a[i][k] - s) / a[i][i];
    }
    let mut beta = vec![0.0; data.q()];
    beta[0] = b[0];
    for (slot, &j) in mask.indices().iter().enumerate() {
        beta[j] = b[slot + 1];
    }
    let rss = (0..n)
        .map(|i| {
            let fitted = beta[0] + (1..=data.p()).map(|j| beta[j] * data.predictor(j)[i]).sum::<f64>();
            (data.y()[i] - fitted).powi(2)
        })
        .sum();
    (beta, rss)
}

/// Enumerates every subset, fits it through the normal equations and keeps the
/// smallest RSS per size (ties to the lexicographically smallest mask).
pub fn naive_best_per_size(data: &Dataset) -> Vec<(SubsetMask, f64)> {
    let p = data.p();
    let mut best: Vec<Option<(SubsetMask, f64)>> = vec![None; p + 1];
    for bits in 0..1u64 << p {
        let mask = SubsetMask::from_bits(bits);
        let (_, rss) = normal_equations_fit(data, &mask);
        let slot = &mut best[mask.size()];
        let better = match slot {
            None => true,
            Some((m, r)) => rss < *r || (rss == *r && mask < *m),
        };
        if better {
            *slot = Some((mask, rss));
        }
    }
    best.into_iter().map(Option::unwrap).collect()
}

/// Random regression problem: standard normal design, a few active
/// coefficients of mixed sign and unit noise.
pub fn random_dataset(seed: u64, n: usize, p: usize) -> Dataset {
    let mut rng = replication_rng(seed, 0);
    let x = gen_weak_design(n, p, &mut rng);
    let coefs: Vec<f64> = (0..p).map(|j| if j % 3 == 0 { 0.0 } else { rng.random_range(-1.5..1.5) }).collect();
    let y = (0..n)
        .map(|i| {
            0.5 + (0..p).map(|j| coefs[j] * x.get(i, j)).sum::<f64>() + rng.sample::<f64, _>(StandardNormal)
        })
        .collect();
    Dataset::with_default_names(x, y).unwrap()
}

/// The four-point example `x = (0, 1, 2, 3)`, `y = (0, 1, 2, 4)`.
pub fn d1() -> Dataset {
    let x = Matrix::from_columns(&[vec![0.0, 1.0, 2.0, 3.0]]).unwrap();
    Dataset::with_default_names(x, vec![0.0, 1.0, 2.0, 4.0]).unwrap()
}

/// Full design matrix `[1, X]` as rows.
pub fn design_rows(data: &Dataset) -> Vec<Vec<f64>> {
    (0..data.n())
        .map(|i| {
            let mut row = vec![1.0];
            row.extend((1..=data.p()).map(|j| data.predictor(j)[i]));
            row
        })
        .collect()
}

/// `(b - c)' X'X (b - c)` evaluated as `||X (b - c)||^2`.
pub fn quadratic_form(data: &Dataset, b: &[f64], c: &[f64]) -> f64 {
    design_rows(data)
        .iter()
        .map(|row| row.iter().zip(b.iter().zip(c)).map(|(x, (u, v))| x * (u - v)).sum::<f64>().powi(2))
        .sum()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

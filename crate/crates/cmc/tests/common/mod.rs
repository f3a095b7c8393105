//! Reference computations shared by the integration tests.

#![allow(dead_code)]

use cmc_core::simulate::{gen_weak_design, replication_rng};
use cmc_core::{Dataset, Matrix, SubsetMask};

/// Least squares through the normal equations with partial pivoting.
/// Returns dense coefficients (intercept first) and the RSS.
pub fn normal_equations_fit(data: &Dataset, mask: &SubsetMask) -> (Vec<f64>, f64) {
    let n = data.n();
    let mut cols: Vec<Vec<f64>> = vec![vec![1.0; n]];
    cols.extend(mask.indices().iter().map(|&j| data.predictor(j).to_vec()));
    let k = cols.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
    let mut a: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| dot(&cols[i], &cols[j])).collect();
            row.push(dot(&cols[i], data.y()));
            row
        })
        .collect();
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
    let rss = (0..n).map(|i| (data.y()[i] - fitted(data, &beta, i)).powi(2)).sum();
    (beta, rss)
}

pub fn fitted(data: &Dataset, beta: &[f64], i: usize) -> f64 {
    beta[0] + (1..=data.p()).map(|j| beta[j] * data.predictor(j)[i]).sum::<f64>()
}

/// Every subset fitted by the normal equations; per size the smallest RSS,
/// ties to the lexicographically smallest mask.
pub fn naive_best_per_size(data: &Dataset) -> Vec<(SubsetMask, f64)> {
    let p = data.p();
    let mut best: Vec<Option<(SubsetMask, f64)>> = vec![None; p + 1];
    for bits in 0..1u64 << p {
        let mask = SubsetMask::from_bits(bits);
        let (_, rss) = normal_equations_fit(data, &mask);
        let slot = &mut best[mask.size()];
        if slot.as_ref().is_none_or(|(m, r)| rss < *r || (rss == *r && mask < *m)) {
            *slot = Some((mask, rss));
        }
    }
    best.into_iter().map(Option::unwrap).collect()
}

/// Normal design with a fixed sparse coefficient pattern and unit noise.
pub fn random_dataset(seed: u64, n: usize, p: usize) -> Dataset {
    let mut rng = replication_rng(seed, 0);
    let x = gen_weak_design(n, p, &mut rng);
    let noise = gen_weak_design(n, 1, &mut rng);
    let coef = |j: usize| if j % 3 == 0 { 0.0 } else { 0.4 * ((j * 7 + seed as usize) % 5) as f64 - 0.8 };
    let y = (0..n).map(|i| 0.5 + (0..p).map(|j| coef(j) * x.get(i, j)).sum::<f64>() + noise.get(i, 0)).collect();
    Dataset::with_default_names(x, y).unwrap()
}

/// `||X (b - c)||^2` over the full design `[1, X]`.
pub fn quadratic_form(data: &Dataset, b: &[f64], c: &[f64]) -> f64 {
    let d: Vec<f64> = b.iter().zip(c).map(|(u, v)| u - v).collect();
    (0..data.n()).map(|i| fitted(data, &d, i).powi(2)).sum()
}

pub fn d1() -> Dataset {
    let x = Matrix::from_columns(&[vec![0.0, 1.0, 2.0, 3.0]]).unwrap();
    Dataset::with_default_names(x, vec![0.0, 1.0, 2.0, 4.0]).unwrap()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

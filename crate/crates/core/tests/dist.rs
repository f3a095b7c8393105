use cmc_core::{f_cdf, f_quantile, f_sf, reg_inc_beta, FParams};

/// Adaptive Simpson quadrature.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn step(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

/// F CDF by quadrature of the beta kernel `t^(a-1) (1-t)^(b-1)`, normalized
/// by its own integral over `[0, 1]`. Valid for `d1, d2 >= 2`.
fn quadrature_f_cdf(f: f64, d1: f64, d2: f64) -> f64 {
    let (a, b) = (d1 / 2.0, d2 / 2.0);
    let kernel = move |t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0);
    let x = d1 * f / (d1 * f + d2);
    simpson(&kernel, 0.0, x, 1e-14) / simpson(&kernel, 0.0, 1.0, 1e-14)
}

fn fp(d1: f64, d2: f64) -> FParams {
    FParams::new(d1, d2).unwrap()
}

#[test]
fn cdf_matches_quadrature_oracle() {
    let oracle = quadrature_f_cdf(4.1028, 2.0, 10.0);
    assert!((oracle - 0.95).abs() < 1e-4, "oracle {oracle}");
    assert!((f_cdf(4.1028, fp(2.0, 10.0)).unwrap() - oracle).abs() < 1e-9);
    for &(f, d1, d2) in &[(0.7, 4.0, 12.0), (2.5, 6.0, 30.0), (1.3, 10.0, 4.0), (3.0, 2.0, 2.0)] {
        let o = quadrature_f_cdf(f, d1, d2);
        assert!((f_cdf(f, fp(d1, d2)).unwrap() - o).abs() < 1e-9, "({f}, {d1}, {d2})");
    }
}

#[test]
fn quantile_inverts_quadrature_oracle() {
    // Bisection on the quadrature CDF.
    let (mut lo, mut hi) = (0.0, 20.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if quadrature_f_cdf(mid, 2.0, 10.0) < 0.95 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    assert!((oracle - 4.1028).abs() < 1e-3);
    let q = f_quantile(0.95, fp(2.0, 10.0)).unwrap();
    assert!((q - 4.1028).abs() < 1e-3);
    assert!((q - oracle).abs() < 1e-8);
}

#[test]
fn inc_beta_against_quadrature() {
    for &(x, a, b) in &[(0.2, 2.0, 3.0), (0.6, 1.5, 4.5), (0.9, 3.0, 1.2), (0.45, 7.0, 7.5)] {
        let kernel = move |t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0);
        let o = simpson(&kernel, 0.0, x, 1e-15) / simpson(&kernel, 0.0, 1.0, 1e-15);
        assert!((reg_inc_beta(x, a, b).unwrap() - o).abs() < 1e-12, "({x}, {a}, {b})");
    }
}

const D1S: [f64; 4] = [1.0, 2.0, 5.0, 21.0];
const D2S: [f64; 4] = [2.0, 10.0, 79.0, 200.0];

fn prob_grid() -> impl Iterator<Item = f64> {
    (1..=99).map(|i| i as f64 / 100.0)
}

#[test]
fn cdf_quantile_round_trip() {
    for d1 in D1S {
        for d2 in D2S {
            for p in prob_grid() {
                let q = f_quantile(p, fp(d1, d2)).unwrap();
                let back = f_cdf(q, fp(d1, d2)).unwrap();
                assert!((back - p).abs() <= 1e-8, "({d1}, {d2}) p = {p}: {back}");
            }
        }
    }
}

#[test]
fn monotone_in_both_directions() {
    for d1 in D1S {
        for d2 in D2S {
            let qs: Vec<f64> = prob_grid().map(|p| f_quantile(p, fp(d1, d2)).unwrap()).collect();
            assert!(qs.windows(2).all(|w| w[0] < w[1]));
            let cs: Vec<f64> = (1..200).map(|i| f_cdf(i as f64 * 0.05, fp(d1, d2)).unwrap()).collect();
            // Near 1 the CDF runs out of resolution; the upper tail carries it.
            assert!(cs.windows(2).all(|w| w[0] < w[1] || w[1] > 1.0 - 1e-12), "({d1}, {d2})");
            let sf: Vec<f64> = (1..200).map(|i| f_sf(i as f64 * 0.05, fp(d1, d2)).unwrap()).collect();
            assert!(sf.windows(2).all(|w| w[0] > w[1]), "({d1}, {d2})");
        }
    }
}

#[test]
fn reciprocal_symmetry() {
    for d1 in D1S {
        for d2 in D2S {
            for p in prob_grid() {
                let a = f_quantile(p, fp(d1, d2)).unwrap();
                let b = 1.0 / f_quantile(1.0 - p, fp(d2, d1)).unwrap();
                assert!((a - b).abs() <= 1e-7 * a.max(1.0), "({d1}, {d2}) p = {p}: {a} vs {b}");
            }
        }
    }
}

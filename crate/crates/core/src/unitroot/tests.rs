use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::*;
use crate::{CountryCode, Quarter};

// Same generator as the frozen reference values below.
fn lcg(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed;
    (0..n)
        .map(|_| {
            s = (s * 1103515245 + 12345) % (1 << 31);
            s as f64 / (1u64 << 31) as f64 - 0.5
        })
        .collect()
}

fn ar1(n: usize, phi: f64, seed: u64) -> Vec<f64> {
    let mut prev = 0.0;
    lcg(n, seed)
        .into_iter()
        .map(|e| {
            prev = phi * prev + e;
            prev
        })
        .collect()
}

fn cumsum(v: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    v.iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

fn series_a() -> Vec<f64> {
    ar1(200, 0.5, 1)
}
fn series_b() -> Vec<f64> {
    cumsum(&lcg(150, 2))
}
fn series_c() -> Vec<f64> {
    cumsum(&ar1(129, 0.6, 3))
}

// Dense normal-equations OLS returning (beta, residuals, classical se).
fn oracle_ols(x: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let (n, k) = (y.len(), x[0].len());
    let mut a = vec![vec![0.0; 2 * k]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = (0..n).map(|t| x[t][i] * x[t][j]).sum();
        }
        a[i][k + i] = 1.0;
    }
    for c in 0..k {
        let p = (c..k).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        a.swap(c, p);
        let d = a[c][c];
        for v in a[c].iter_mut() {
            *v /= d;
        }
        for r in 0..k {
            if r != c {
                let f = a[r][c];
                let row = a[c].clone();
                for (v, w) in a[r].iter_mut().zip(row) {
                    *v -= f * w;
                }
            }
        }
    }
    let inv: Vec<Vec<f64>> = a.iter().map(|r| r[k..].to_vec()).collect();
    let xty: Vec<f64> = (0..k).map(|i| (0..n).map(|t| x[t][i] * y[t]).sum()).collect();
    let beta: Vec<f64> = (0..k).map(|i| (0..k).map(|j| inv[i][j] * xty[j]).sum()).collect();
    let resid: Vec<f64> = (0..n)
        .map(|t| y[t] - (0..k).map(|j| x[t][j] * beta[j]).sum::<f64>())
        .collect();
    let s2 = resid.iter().map(|e| e * e).sum::<f64>() / (n - k) as f64;
    let se = (0..k).map(|i| (s2 * inv[i][i]).sqrt()).collect();
    (beta, resid, se)
}

// Rows t = first..T−1 of Δy_t on (1, y_{t−1}, Δy_{t−1}, .., Δy_{t−lag}).
fn oracle_adf_rows(y: &[f64], lag: usize, first: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let d = |t: usize| y[t] - y[t - 1];
    let x = (first..y.len())
        .map(|t| {
            let mut row = vec![1.0, y[t - 1]];
            row.extend((1..=lag).map(|i| d(t - i)));
            row
        })
        .collect();
    (x, (first..y.len()).map(d).collect())
}

fn oracle_adf(y: &[f64], max_lag: usize) -> (f64, usize, usize) {
    let n = y.len() - 1 - max_lag;
    let mut best = (f64::INFINITY, 0);
    for lag in 0..=max_lag {
        let (x, dy) = oracle_adf_rows(y, lag, max_lag + 1);
        let (_, e, _) = oracle_ols(&x, &dy);
        let rss: f64 = e.iter().map(|v| v * v).sum();
        let ic = (rss / n as f64).ln() + (lag + 2) as f64 * (n as f64).ln() / n as f64;
        if ic < best.0 {
            best = (ic, lag);
        }
    }
    let lag = best.1;
    let (x, dy) = oracle_adf_rows(y, lag, lag + 1);
    let (b, e, se) = oracle_ols(&x, &dy);
    (b[1] / se[1], lag, e.len())
}

fn oracle_pp(y: &[f64], bw: usize) -> f64 {
    let (x, dy) = oracle_adf_rows(y, 0, 1);
    let (b, u, se) = oracle_ols(&x, &dy);
    let n = u.len();
    let g = |j: usize| (j..n).map(|t| u[t] * u[t - j]).sum::<f64>() / n as f64;
    let f0 = g(0) + 2.0 * (1..=bw).map(|j| (1.0 - j as f64 / (bw + 1) as f64) * g(j)).sum::<f64>();
    let s = (u.iter().map(|v| v * v).sum::<f64>() / (n - 2) as f64).sqrt();
    let t = b[1] / se[1];
    t * (g(0) / f0).sqrt() - n as f64 * (f0 - g(0)) * se[1] / (2.0 * f0.sqrt() * s)
}

#[test]
fn sic_arithmetic() {
    let e = vec![1.0; 100];
    assert!((sic(&e, 2, 100) - 2.0 * 100f64.ln() / 100.0).abs() < 1e-15);
    assert!((sic(&e, 2, 100) - 0.0921).abs() < 1e-4);
    let e2: Vec<f64> = e.iter().map(|v| v * 2f64.sqrt()).collect();
    assert!((sic(&e2, 2, 100) - sic(&e, 2, 100) - 2f64.ln()).abs() < 1e-12);
    assert!((sic(&e, 3, 100) - sic(&e, 2, 100) - 100f64.ln() / 100.0).abs() < 1e-15);
}

#[test]
fn mackinnon_matches_reference_table() {
    // Reference values from an independent implementation of the same table.
    let cases = [
        (-25.0, 0.0),
        (-6.0, 1.6661204834054382e-07),
        (-4.5, 0.0001966399003359905),
        (-3.5, 0.007987094061496709),
        (-2.86, 0.05020109988200309),
        (-2.57, 0.09935751931697989),
        (-1.61, 0.4779756525941893),
        (-1.0, 0.7532643012005655),
        (0.0, 0.958532086060056),
        (1.0, 0.9942659485477608),
        (2.0, 0.9986729511999243),
        (2.74, 0.9990880801041981),
        (3.0, 1.0),
    ];
    for (stat, p) in cases {
        let got = mackinnon_p_value(stat);
        assert!((got - p).abs() <= 1e-9 * p.max(1e-3), "{stat}: {got} vs {p}");
    }
}

#[test]
fn adf_matches_reference_values() {
    // (series, statistic, p-value, lag, nobs) from an independent implementation.
    let cases = [
        (series_a(), -7.737235751081811, 1.0854788758116792e-11, 0, 199),
        (series_b(), -1.6474336403002654, 0.45837919882070527, 0, 149),
        (series_c(), -2.735862199093196, 0.06803545826471055, 1, 127),
    ];
    for (y, stat, p, lag, nobs) in cases {
        let r = adf_values(&y, DEFAULT_MAX_LAG).unwrap();
        assert!((r.statistic - stat).abs() < 1e-9, "{} vs {stat}", r.statistic);
        assert!((r.p_value - p).abs() < 1e-9);
        assert_eq!((r.lags_or_bandwidth, r.nobs), (lag, nobs));
    }
}

#[test]
fn adf_matches_oracle() {
    for y in [series_a(), series_b(), series_c()] {
        let r = adf_values(&y, DEFAULT_MAX_LAG).unwrap();
        let (stat, lag, nobs) = oracle_adf(&y, DEFAULT_MAX_LAG);
        assert_eq!((r.lags_or_bandwidth, r.nobs), (lag, nobs));
        assert!((r.statistic - stat).abs() < 1e-8);
        assert!((r.p_value - mackinnon_p_value(stat)).abs() < 0.005);
    }
}

#[test]
fn adf_refit_uses_maximal_sample() {
    let y = series_c();
    for lag in 0..4 {
        let r = adf_fixed_lag(&y, lag).unwrap();
        assert_eq!(r.nobs, y.len() - 1 - lag);
    }
}

#[test]
fn pp_matches_reference_values() {
    // (series, rule stat, rule p, auto bandwidth, auto stat, bandwidth-7 stat)
    let cases = [
        (series_a(), -7.82962994933019, 6.3439420433808855e-12, 3, -7.777648048159302, -7.7774414724901275),
        (series_b(), -1.8918558391587768, 0.3359020271136691, 3, -1.8714407653808376, -1.9406236961924455),
        (series_c(), -2.477171466711863, 0.12112801052199118, 6, -2.5213247678807935, -2.5137792928767926),
    ];
    for (y, rule, p, auto_b, auto, b7) in cases {
        let r = pp_values(&y, PpBandwidth::Rule).unwrap();
        assert!((r.statistic - rule).abs() < 1e-9);
        assert!((r.p_value - p).abs() < 1e-9);
        assert_eq!(r.lags_or_bandwidth, 4);
        assert_eq!(r.nobs, y.len() - 1);
        let a = pp_values(&y, PpBandwidth::NeweyWest1994).unwrap();
        assert_eq!(a.lags_or_bandwidth, auto_b);
        assert!((a.statistic - auto).abs() < 1e-9);
        let m = pp_values(&y, PpBandwidth::Manual(7)).unwrap();
        assert!((m.statistic - b7).abs() < 1e-9);
        for bw in [0usize, 2, 4, 7, 12] {
            let got = pp_values(&y, PpBandwidth::Manual(bw)).unwrap().statistic;
            assert!((got - oracle_pp(&y, bw)).abs() < 1e-6);
        }
    }
}

#[test]
fn white_noise_bandwidth() {
    let mut rng = ChaCha8Rng::seed_from_u64(144);
    let y: Vec<f64> = (0..145).map(|_| rng.sample(StandardNormal)).collect();
    let r = pp_values(&y, PpBandwidth::Rule).unwrap();
    assert_eq!(r.nobs, 144);
    assert_eq!(r.lags_or_bandwidth, 4);
    assert!((r.statistic - oracle_pp(&y, 4)).abs() < 1e-6);
    // Stationary noise rejects the unit root.
    assert!(r.p_value < 0.01);
}

#[test]
fn pp_without_correction_is_adf_lag_zero() {
    for y in [series_a(), series_b(), series_c()] {
        let pp0 = pp_values(&y, PpBandwidth::Manual(0)).unwrap();
        let adf0 = adf_fixed_lag(&y, 0).unwrap();
        assert!((pp0.statistic - adf0.statistic).abs() < 1e-8);
        assert_eq!(pp0.nobs, adf0.nobs);
    }
}

#[test]
fn degenerate_and_short_inputs() {
    assert!(matches!(adf_values(&[3.0; 60], 13), Err(Error::Degenerate(_))));
    assert!(matches!(pp_values(&[3.0; 60], PpBandwidth::Rule), Err(Error::Degenerate(_))));
    let y = series_a();
    assert!(matches!(adf_values(&y[..29], 13), Err(Error::SeriesTooShort { needed: 30, got: 29 })));
    assert!(adf_values(&y[..30], 13).is_ok());
    assert!(matches!(pp_values(&y[..9], PpBandwidth::Rule), Err(Error::SeriesTooShort { .. })));
    // Linear trend: differences are constant and the fit is exact.
    let line: Vec<f64> = (0..60).map(|t| t as f64).collect();
    assert!(matches!(adf_values(&line, 4), Err(Error::Degenerate(_))));
}

#[test]
fn series_wrappers_use_longest_run() {
    let y = series_c();
    let mut v: Vec<Option<f64>> = vec![Some(1.0), None];
    v.extend(y.iter().map(|x| Some(*x)));
    v.push(None);
    v.push(Some(5.0));
    let s = QuarterlySeries::new(
        "AG".parse::<CountryCode>().unwrap(),
        "infl",
        Quarter::new(1980, 1).unwrap(),
        v,
    )
    .unwrap();
    assert_eq!(adf(&s, DEFAULT_MAX_LAG).unwrap(), adf_values(&y, DEFAULT_MAX_LAG).unwrap());
    assert_eq!(pp(&s).unwrap(), pp_values(&y, PpBandwidth::Rule).unwrap());
}

#[test]
fn auto_bandwidth_edge_cases() {
    assert_eq!(nw_auto_bandwidth(&[]), 0);
    assert_eq!(nw_auto_bandwidth(&[1.0]), 0);
    assert_eq!(nw_auto_bandwidth(&[0.0; 20]), 0);
    // Strong positive autocorrelation asks for a wider window.
    let u = ar1(400, 0.9, 5);
    let w = lcg(400, 5);
    assert!(nw_auto_bandwidth(&u) > nw_auto_bandwidth(&w));
}

proptest! {
    #[test]
    fn p_value_monotone(a in -30.0f64..5.0, b in -30.0f64..5.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (plo, phi) = (mackinnon_p_value(lo), mackinnon_p_value(hi));
        prop_assert!(plo <= phi);
        prop_assert!((0.0..=1.0).contains(&plo) && (0.0..=1.0).contains(&phi));
    }

    #[test]
    fn adf_shift_invariant(seed in 0u64..500, c in -100.0f64..100.0) {
        let y = cumsum(&lcg(80, seed + 10));
        let shifted: Vec<f64> = y.iter().map(|v| v + c).collect();
        let a = adf_values(&y, 6).unwrap();
        let b = adf_values(&shifted, 6).unwrap();
        prop_assert_eq!(a.lags_or_bandwidth, b.lags_or_bandwidth);
        prop_assert!((a.statistic - b.statistic).abs() < 1e-6);
        prop_assert!((a.p_value - b.p_value).abs() < 1e-6);
    }

    #[test]
    fn adf_is_deterministic(seed in 0u64..500) {
        let y = ar1(90, 0.7, seed + 1);
        prop_assert_eq!(adf_values(&y, 8).unwrap(), adf_values(&y, 8).unwrap());
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::pearson;
use crate::series::UniformSeries;

fn check_lag(max_lag: usize, len: usize) -> Result<()> {
    if 2 * max_lag >= len {
        return Err(Error::LagTooLarge { max_lag, len });
    }
    Ok(())
}

/// Biased (1/N) sample autocorrelation, `acf[0] = 1`.
pub fn acf(x: &UniformSeries, max_lag: usize) -> Result<Vec<f64>> {
    check_lag(max_lag, x.len())?;
    acf_slice(x.values(), max_lag)
}

pub(crate) fn acf_slice(v: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = v.len();
    let m = v.iter().sum::<f64>() / n as f64;
    let d: Vec<f64> = v.iter().map(|x| x - m).collect();
    let c0: f64 = d.iter().map(|x| x * x).sum();
    if c0 == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((0..=max_lag)
        .map(|k| {
            if k == 0 {
                1.0
            } else {
                d[k..].iter().zip(&d).map(|(a, b)| a * b).sum::<f64>() / c0
            }
        })
        .collect())
}

/// Result of the Durbin–Levinson recursion on an autocorrelation sequence.
#[derive(Debug, Clone)]
pub struct Levinson {
    /// AR coefficients of the final order, `φ_1..φ_p`.
    pub coefficients: Vec<f64>,
    /// Partial autocorrelations, index 0 fixed at 1.
    pub pacf: Vec<f64>,
    /// One-step prediction error variance relative to the lag-0 variance.
    pub error_ratio: f64,
}

pub fn durbin_levinson(rho: &[f64]) -> Levinson {
    let p = rho.len().saturating_sub(1);
    let mut phi: Vec<f64> = Vec::with_capacity(p);
    let mut pacf = vec![1.0];
    let mut err = 1.0;
    for k in 1..=p {
        let num = rho[k] - phi.iter().enumerate().map(|(j, f)| f * rho[k - 1 - j]).sum::<f64>();
        let refl = if k == 1 { rho[1] } else { num / err };
        let prev = phi.clone();
        for j in 0..phi.len() {
            phi[j] = prev[j] - refl * prev[k - 2 - j];
        }
        phi.push(refl);
        err *= 1.0 - refl * refl;
        pacf.push(refl);
    }
    Levinson {
        coefficients: phi,
        pacf,
        error_ratio: err,
    }
}

/// Partial autocorrelation via Durbin–Levinson on the biased ACF.
pub fn pacf(x: &UniformSeries, max_lag: usize) -> Result<Vec<f64>> {
    let rho = acf(x, max_lag)?;
    Ok(durbin_levinson(&rho).pacf)
}

/// Yule–Walker AR coefficients from the biased ACF.
pub fn yule_walker(x: &UniformSeries, order: usize) -> Result<Vec<f64>> {
    let rho = acf(x, order)?;
    Ok(durbin_levinson(&rho).coefficients)
}

/// Pearson correlation of `a[k + lag]` with `b[k]` over overlapping samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCorrelation {
    pub max_lag: usize,
    /// Index `i` holds lag `i - max_lag`.
    pub values: Vec<f64>,
}

impl CrossCorrelation {
    pub fn at(&self, lag: isize) -> f64 {
        self.values[(lag + self.max_lag as isize) as usize]
    }

    pub fn lags(&self) -> impl Iterator<Item = isize> + '_ {
        let m = self.max_lag as isize;
        -m..=m
    }
}

fn corr_at(a: &[f64], b: &[f64], lag: isize) -> Result<f64> {
    let n = a.len();
    if lag >= 0 {
        let l = lag as usize;
        pearson(&a[l..], &b[..n - l]).ok_or(Error::ZeroVariance)
    } else {
        corr_at(b, a, -lag)
    }
}

pub fn cross_correlation(a: &UniformSeries, b: &UniformSeries, max_lag: usize) -> Result<CrossCorrelation> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.dt() != b.dt() {
        return Err(Error::Usage(format!("sample intervals differ: {} vs {}", a.dt(), b.dt())));
    }
    check_lag(max_lag, a.len())?;
    let m = max_lag as isize;
    let values = (-m..=m)
        .map(|lag| corr_at(a.values(), b.values(), lag))
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossCorrelation { max_lag, values })
}

/// Lag-0 Pearson correlation.
pub fn correlation(a: &UniformSeries, b: &UniformSeries) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    pearson(a.values(), b.values()).ok_or(Error::ZeroVariance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn ar(phi: &[f64], n: usize, seed: u64) -> UniformSeries {
        let e = noise(n + 1000, seed);
        let mut x = vec![0.0; n + 1000];
        for k in 0..x.len() {
            let mut v = e[k];
            for (i, p) in phi.iter().enumerate() {
                if k > i {
                    v += p * x[k - 1 - i];
                }
            }
            x[k] = v;
        }
        UniformSeries::new(x[1000..].to_vec(), 2.0).unwrap()
    }

    #[test]
    fn white_noise_acf_is_small() {
        let n = 100_000;
        let x = UniformSeries::new(noise(n, 1), 2.0).unwrap();
        let r = acf(&x, 20).unwrap();
        assert_eq!(r[0], 1.0);
        let bound = 3.0 / (n as f64).sqrt();
        assert!(r[1..].iter().all(|v| v.abs() < bound), "{r:?}");
    }

    #[test]
    fn ar1_acf_is_geometric() {
        let phi = 0.8;
        let x = ar(&[phi], 1_000_000, 2);
        let r = acf(&x, 10).unwrap();
        for k in 0..=10 {
            assert!((r[k] - phi.powi(k as i32)).abs() < 0.02, "lag {k}");
        }
    }

    #[test]
    fn ar3_pacf_cuts_off() {
        let n = 200_000;
        let x = ar(&[0.6, 0.2, 0.1], n, 3);
        let p = pacf(&x, 12).unwrap();
        assert!((p[3] - 0.1).abs() < 0.02);
        let bound = 3.0 / (n as f64).sqrt();
        assert!(p[4..].iter().all(|v| v.abs() < bound), "{p:?}");
    }

    #[test]
    fn levinson_recovers_ar2_from_exact_acf() {
        // AR(2) with phi = (0.5, 0.3): rho1 = phi1 / (1 - phi2), rho2 = phi1 rho1 + phi2.
        let (p1, p2) = (0.5, 0.3);
        let r1 = p1 / (1.0 - p2);
        let r2 = p1 * r1 + p2;
        let lev = durbin_levinson(&[1.0, r1, r2]);
        assert!((lev.coefficients[0] - p1).abs() < 1e-12);
        assert!((lev.coefficients[1] - p2).abs() < 1e-12);
    }

    #[test]
    fn lag_errors() {
        let x = UniformSeries::new(noise(10, 4), 2.0).unwrap();
        assert!(matches!(acf(&x, 5), Err(Error::LagTooLarge { .. })));
        let y = UniformSeries::new(noise(11, 5), 2.0).unwrap();
        assert!(matches!(cross_correlation(&x, &y, 2), Err(Error::LengthMismatch(10, 11))));
    }

    #[test]
    fn cross_correlation_identity_and_negation() {
        let v = noise(500, 6);
        let a = UniformSeries::new(v.clone(), 2.0).unwrap();
        let b = a.map_values(|x| -x).unwrap();
        assert!((cross_correlation(&a, &a, 5).unwrap().at(0) - 1.0).abs() < 1e-12);
        assert!((cross_correlation(&a, &b, 5).unwrap().at(0) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cross_correlation_finds_shift() {
        let v = noise(2000, 7);
        let a = UniformSeries::new(v[3..].to_vec(), 2.0).unwrap();
        let b = UniformSeries::new(v[..v.len() - 3].to_vec(), 2.0).unwrap();
        // a[k] = b[k + 3], so corr(a[k + lag], b[k]) peaks at lag = -3.
        let c = cross_correlation(&a, &b, 6).unwrap();
        assert!((c.at(-3) - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn pacf1_equals_acf1(v in proptest::collection::vec(-3.0f64..3.0, 12..80)) {
            let x = UniformSeries::new(v, 2.0).unwrap();
            if let Ok(r) = acf(&x, 3) {
                let p = pacf(&x, 3).unwrap();
                prop_assert_eq!(p[1], r[1]);
            }
        }

        #[test]
        fn cross_correlation_is_antisymmetric_in_lag(seed in 0u64..1000) {
            let a = UniformSeries::new(noise(60, seed), 2.0).unwrap();
            let b = UniformSeries::new(noise(60, seed + 7777), 2.0).unwrap();
            let ab = cross_correlation(&a, &b, 10).unwrap();
            let ba = cross_correlation(&b, &a, 10).unwrap();
            for l in -10isize..=10 {
                prop_assert_eq!(ab.at(l), ba.at(-l));
            }
        }
    }
}

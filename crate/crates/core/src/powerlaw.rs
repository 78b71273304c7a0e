//! Discrete power-law fitting of degree data with threshold selection by
//! minimum Kolmogorov–Smirnov distance and a semi-parametric bootstrap
//! goodness-of-fit test.
//!
//! For each candidate threshold `x_min` (every distinct observed value whose
//! tail holds at least `min_tail` observations) the scaling exponent is
//! estimated by the discrete maximum-likelihood approximation
//!
//! ```text
//! γ = 1 + n_tail / Σ ln(x_i / (x_min − ½))
//! ```
//!
//! and the candidate with the smallest KS distance between the empirical and
//! fitted tail CDFs wins. The fitted law is `P(X = x) = x^(−γ) / ζ(γ, x_min)`.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::rng_for;
use crate::zeta::hurwitz_zeta;

/// Bootstrap replicas giving p-values accurate to about two decimal digits.
pub const DEFAULT_BOOTSTRAP_REPLICAS: usize = 2500;
pub const MIN_OBSERVATIONS: usize = 50;
pub const MIN_TAIL: usize = 25;
/// A power law with bootstrap p below this is ruled out.
pub const PLAUSIBILITY_THRESHOLD: f64 = 0.10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("{found} positive observations; at least {required} needed")]
    TooFewObservations { found: usize, required: usize },
    #[error("all observations are equal; no scaling to fit")]
    Degenerate,
    #[error("no threshold leaves at least {min_tail} observations in the tail")]
    NoCandidate { min_tail: usize },
    #[error("threshold {x_min} is not an observed value")]
    BadThreshold { x_min: u64 },
    #[error("bootstrap needs at least one replica")]
    NoReplicas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Closed-form `x_min − ½` approximation.
    Approximate,
    /// Numerical maximization of the exact zeta-normalized likelihood.
    ExactZeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub min_observations: usize,
    pub min_tail: usize,
    pub estimator: Estimator,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            min_observations: MIN_OBSERVATIONS,
            min_tail: MIN_TAIL,
            estimator: Estimator::Approximate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub gamma: f64,
    pub x_min: u64,
    pub n_tail: usize,
    pub ks_statistic: f64,
    /// Positive observations the fit saw.
    pub n: usize,
    pub zeros_excluded: usize,
}

/// A fit together with its bootstrap plausibility test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub gamma: f64,
    /// Standard deviation of γ over the bootstrap replicas.
    pub gamma_spread: f64,
    pub x_min: u64,
    pub x_min_spread: f64,
    pub n_tail: usize,
    pub n_tail_spread: f64,
    pub ks_statistic: f64,
    pub p_value: f64,
    pub bootstrap_m: usize,
    pub n: usize,
    pub zeros_excluded: usize,
    /// Replicas whose refit failed; they count as poorer fits.
    pub failed_replicas: usize,
    /// Set when `bootstrap_m` is below the two-digit accuracy default.
    pub low_p_resolution: bool,
}

impl FitResult {
    /// The power law is ruled out when p < 0.10.
    pub fn plausible(&self) -> bool {
        self.p_value >= PLAUSIBILITY_THRESHOLD
    }
}

/// Distinct sorted values with counts plus suffix sums over them.
struct Tallies {
    values: Vec<u64>,
    counts: Vec<usize>,
    /// Observations at or above `values[j]`.
    tail_n: Vec<usize>,
    /// Σ ln x over observations at or above `values[j]`.
    tail_log: Vec<f64>,
    n: usize,
    zeros: usize,
}

impl Tallies {
    fn new(data: &[u64]) -> Self {
        let mut sorted: Vec<u64> = data.iter().copied().filter(|&x| x > 0).collect();
        let zeros = data.len() - sorted.len();
        sorted.sort_unstable();
        let mut values = Vec::new();
        let mut counts = Vec::new();
        for x in sorted.iter().copied() {
            if values.last() == Some(&x) {
                *counts.last_mut().expect("paired") += 1;
            } else {
                values.push(x);
                counts.push(1);
            }
        }
        let k = values.len();
        let mut tail_n = vec![0; k + 1];
        let mut tail_log = vec![0.0; k + 1];
        for j in (0..k).rev() {
            tail_n[j] = tail_n[j + 1] + counts[j];
            tail_log[j] = tail_log[j + 1] + counts[j] as f64 * (values[j] as f64).ln();
        }
        Tallies { values, counts, tail_n, tail_log, n: sorted.len(), zeros }
    }

    fn gamma_at(&self, j: usize, estimator: Estimator) -> f64 {
        let x_min = self.values[j] as f64;
        let n_tail = self.tail_n[j] as f64;
        let approx = 1.0 + n_tail / (self.tail_log[j] - n_tail * (x_min - 0.5).ln());
        match estimator {
            Estimator::Approximate => approx,
            Estimator::ExactZeta => exact_mle(x_min, n_tail, self.tail_log[j], approx),
        }
    }

    /// Supremum over integers x >= x_min of |F_emp(x) − F_model(x)|.
    fn ks_at(&self, j: usize, gamma: f64) -> f64 {
        let x_min = self.values[j] as f64;
        let z0 = hurwitz_zeta(gamma, x_min);
        let cdf = |x: f64| 1.0 - hurwitz_zeta(gamma, x + 1.0) / z0;
        let n_tail = self.tail_n[j] as f64;
        let mut cum = 0usize;
        let mut prev_emp = 0.0;
        let mut d: f64 = 0.0;
        for i in j..self.values.len() {
            let x = self.values[i];
            if i > j && x - 1 > self.values[i - 1] {
                // empirical CDF is flat on the gap; the model keeps rising
                d = d.max((prev_emp - cdf((x - 1) as f64)).abs());
            }
            cum += self.counts[i];
            let emp = cum as f64 / n_tail;
            d = d.max((emp - cdf(x as f64)).abs());
            prev_emp = emp;
        }
        d
    }

    fn fit_at(&self, j: usize, opts: &FitOptions) -> PowerLawFit {
        let gamma = self.gamma_at(j, opts.estimator);
        PowerLawFit {
            gamma,
            x_min: self.values[j],
            n_tail: self.tail_n[j],
            ks_statistic: self.ks_at(j, gamma),
            n: self.n,
            zeros_excluded: self.zeros,
        }
    }

    fn check(&self, opts: &FitOptions) -> Result<(), FitError> {
        if self.n < opts.min_observations.max(1) {
            return Err(FitError::TooFewObservations { found: self.n, required: opts.min_observations });
        }
        if self.values.len() < 2 {
            return Err(FitError::Degenerate);
        }
        Ok(())
    }
}

/// Golden-section maximization of ℓ(γ) = −n ln ζ(γ, x_min) − γ Σ ln x.
fn exact_mle(x_min: f64, n_tail: f64, log_sum: f64, guess: f64) -> f64 {
    let ll = |g: f64| -n_tail * hurwitz_zeta(g, x_min).ln() - g * log_sum;
    let (mut lo, mut hi) = (1.0 + 1e-6, (2.0 * guess).max(guess + 5.0));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let (mut fa, mut fb) = (ll(a), ll(b));
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            break;
        }
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = ll(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = ll(a);
        }
    }
    0.5 * (lo + hi)
}

pub fn fit_power_law(degrees: &[u64]) -> Result<PowerLawFit, FitError> {
    fit_power_law_with(degrees, &FitOptions::default())
}

/// Scans every admissible threshold and keeps the minimum-KS fit (ties go
/// to the smaller threshold). Zeros are dropped first.
pub fn fit_power_law_with(degrees: &[u64], opts: &FitOptions) -> Result<PowerLawFit, FitError> {
    let t = Tallies::new(degrees);
    t.check(opts)?;
    let mut best: Option<PowerLawFit> = None;
    for j in 0..t.values.len() {
        if t.tail_n[j] < opts.min_tail {
            break;
        }
        let fit = t.fit_at(j, opts);
        if best.is_none_or(|b| fit.ks_statistic < b.ks_statistic) {
            best = Some(fit);
        }
    }
    best.ok_or(FitError::NoCandidate { min_tail: opts.min_tail })
}

/// Fit with a fixed threshold, which must be an observed value.
pub fn fit_fixed_xmin(degrees: &[u64], x_min: u64, opts: &FitOptions) -> Result<PowerLawFit, FitError> {
    let t = Tallies::new(degrees);
    t.check(opts)?;
    let j = t.values.binary_search(&x_min).map_err(|_| FitError::BadThreshold { x_min })?;
    Ok(t.fit_at(j, opts))
}

/// Sampler for the discrete power law `P(X = x) ∝ x^(−γ)`, `x >= x_min`,
/// by inverse CDF over a tabulated survival function with a continuous
/// approximation past the table.
#[derive(Debug, Clone)]
pub struct DiscretePowerLaw {
    gamma: f64,
    x_min: u64,
    /// `survival[k] = P(X >= x_min + k)`
    survival: Vec<f64>,
}

impl DiscretePowerLaw {
    const TABLE_CAP: usize = 1 << 20;

    pub fn new(gamma: f64, x_min: u64) -> Self {
        assert!(gamma > 1.0 && x_min >= 1);
        let z0 = hurwitz_zeta(gamma, x_min as f64);
        let mut survival = Vec::with_capacity(1024);
        let mut z = z0;
        let mut x = x_min as f64;
        while survival.len() < Self::TABLE_CAP {
            if survival.len() % 1024 == 0 {
                z = hurwitz_zeta(gamma, x);
            }
            let s = z / z0;
            survival.push(s);
            if s < 1e-13 {
                break;
            }
            z -= x.powf(-gamma);
            x += 1.0;
        }
        DiscretePowerLaw { gamma, x_min, survival }
    }

    pub fn survival(&self, x: u64) -> f64 {
        if x <= self.x_min {
            return 1.0;
        }
        hurwitz_zeta(self.gamma, x as f64) / hurwitz_zeta(self.gamma, self.x_min as f64)
    }

    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        // u in (0, 1]
        let u = 1.0 - rng.random::<f64>();
        let last = *self.survival.last().expect("non-empty table");
        if u >= last {
            // largest k with survival[k] >= u
            let k = self.survival.partition_point(|&s| s >= u) - 1;
            self.x_min + k as u64
        } else {
            let x_last = (self.x_min + self.survival.len() as u64 - 1) as f64;
            let x = (x_last - 0.5) * (u / last).powf(-1.0 / (self.gamma - 1.0)) + 0.5;
            x.min(1e15).floor() as u64
        }
    }
}

/// Bootstrap plausibility test of a completed fit.
///
/// Each of the `m` replicas draws `n` values: with probability `n_tail / n`
/// from the fitted power law, otherwise uniformly from the observations
/// below `x_min`. Every replica is refit from scratch (threshold included);
/// the p-value is the fraction whose KS distance is at least the observed
/// one. Replica `r` uses its own stream derived from `(seed, r)`, so the
/// result does not depend on scheduling.
pub fn goodness_of_fit(degrees: &[u64], fit: &PowerLawFit, m: usize, seed: u64) -> Result<FitResult, FitError> {
    goodness_of_fit_with(degrees, fit, m, seed, &FitOptions::default())
}

pub fn goodness_of_fit_with(
    degrees: &[u64],
    fit: &PowerLawFit,
    m: usize,
    seed: u64,
    opts: &FitOptions,
) -> Result<FitResult, FitError> {
    if m < 1 {
        return Err(FitError::NoReplicas);
    }
    let mut body: Vec<u64> = degrees.iter().copied().filter(|&x| x > 0 && x < fit.x_min).collect();
    body.sort_unstable();
    let n = fit.n;
    let p_tail = fit.n_tail as f64 / n as f64;
    let law = DiscretePowerLaw::new(fit.gamma, fit.x_min);

    let replicas: Vec<Option<PowerLawFit>> = (0..m)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |sample, r| {
                let mut rng = rng_for(seed, "powerlaw-bootstrap", r as u64);
                sample.clear();
                for _ in 0..n {
                    let x = if body.is_empty() || rng.random::<f64>() < p_tail {
                        law.sample(&mut rng)
                    } else {
                        body[rng.random_range(0..body.len())]
                    };
                    sample.push(x);
                }
                fit_power_law_with(sample, opts).ok()
            },
        )
        .collect();

    let poorer = replicas
        .iter()
        .filter(|r| r.is_none_or(|f| f.ks_statistic >= fit.ks_statistic))
        .count();
    let ok: Vec<&PowerLawFit> = replicas.iter().flatten().collect();
    let spread = |f: &dyn Fn(&PowerLawFit) -> f64| -> f64 {
        if ok.is_empty() {
            return 0.0;
        }
        let mean = ok.iter().map(|r| f(r)).sum::<f64>() / ok.len() as f64;
        (ok.iter().map(|r| (f(r) - mean).powi(2)).sum::<f64>() / ok.len() as f64).sqrt()
    };

    Ok(FitResult {
        gamma: fit.gamma,
        gamma_spread: spread(&|r| r.gamma),
        x_min: fit.x_min,
        x_min_spread: spread(&|r| r.x_min as f64),
        n_tail: fit.n_tail,
        n_tail_spread: spread(&|r| r.n_tail as f64),
        ks_statistic: fit.ks_statistic,
        p_value: poorer as f64 / m as f64,
        bootstrap_m: m,
        n,
        zeros_excluded: fit.zeros_excluded,
        failed_replicas: m - ok.len(),
        low_p_resolution: m < DEFAULT_BOOTSTRAP_REPLICAS,
    })
}

/// Complementary cumulative distribution: `(k, fraction of values >= k)` for
/// each distinct value, ascending.
pub fn ccdf(values: &[u64]) -> Vec<(u64, f64)> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    let mut out = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let k = sorted[i];
        out.push((k, (sorted.len() - i) as f64 / n));
        while i < sorted.len() && sorted[i] == k {
            i += 1;
        }
    }
    out
}

/// The fitted law's survival function scaled to the whole sample
/// (`n_tail / n · P(X >= k)`), at the given points `k >= x_min`.
pub fn fitted_ccdf(fit: &PowerLawFit, ks: &[u64]) -> Vec<(u64, f64)> {
    let z0 = hurwitz_zeta(fit.gamma, fit.x_min as f64);
    let scale = fit.n_tail as f64 / fit.n as f64;
    ks.iter()
        .filter(|&&k| k >= fit.x_min)
        .map(|&k| (k, scale * hurwitz_zeta(fit.gamma, k as f64) / z0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn ccdf_small() {
        assert_eq!(ccdf(&[1, 1, 2]), vec![(1, 1.0), (2, 1.0 / 3.0)]);
        assert_eq!(ccdf(&[4, 4, 4]), vec![(4, 1.0)]);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(fit_power_law(&[3; 10]), Err(FitError::TooFewObservations { .. })));
        assert_eq!(fit_power_law(&[3; 100]), Err(FitError::Degenerate));
        let mut v = vec![0u64; 100];
        v.extend([1, 2, 3]);
        assert!(matches!(fit_power_law(&v), Err(FitError::TooFewObservations { found: 3, .. })));
    }

    #[test]
    fn zeros_excluded_and_reported() {
        let law = DiscretePowerLaw::new(2.5, 1);
        let mut rng = crate::seed::Rng::seed_from_u64(9);
        let mut v: Vec<u64> = (0..2000).map(|_| law.sample(&mut rng)).collect();
        v.extend([0; 17]);
        let fit = fit_power_law(&v).unwrap();
        assert_eq!(fit.zeros_excluded, 17);
        assert_eq!(fit.n, 2000);
    }

    #[test]
    fn sampler_matches_survival() {
        let law = DiscretePowerLaw::new(2.2, 3);
        let mut rng = crate::seed::Rng::seed_from_u64(1);
        let n = 200_000;
        let draws: Vec<u64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        assert!(draws.iter().all(|&x| x >= 3));
        for k in [3u64, 4, 6, 10, 30, 100] {
            let emp = draws.iter().filter(|&&x| x >= k).count() as f64 / n as f64;
            let exact = law.survival(k);
            let se = (exact * (1.0 - exact) / n as f64).sqrt().max(1e-6);
            assert!((emp - exact).abs() < 5.0 * se, "k={k} emp={emp} exact={exact}");
        }
    }

    #[test]
    fn bootstrap_rejects_zero_replicas() {
        let fit = PowerLawFit { gamma: 2.0, x_min: 1, n_tail: 10, ks_statistic: 0.1, n: 10, zeros_excluded: 0 };
        assert_eq!(goodness_of_fit(&[1; 10], &fit, 0, 1), Err(FitError::NoReplicas));
    }
}

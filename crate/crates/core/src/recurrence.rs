//! Level recurrence for the sampler, its aggregates and its limit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{precondition, Error, Result};

/// Largest numerator or denominator (in bits) kept exactly. Past this the
/// table switches to dyadic rounding with [`ROUNDING_BITS`] fractional bits.
pub const EXACT_BIT_BUDGET: u64 = 32_768;
pub const ROUNDING_BITS: u64 = 256;

/// Values `p(i)`, `q(i)`, `q~(i)` for levels `i = 1..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    pub k: usize,
    pub xi: BigRational,
    pub delta: usize,
    pub p: Vec<BigRational>,
    pub q: Vec<BigRational>,
    /// Inclusion probability of a vertex given that one fixed mate has a
    /// higher level; equals `p` when `delta == 3`.
    pub q_tilde: Vec<BigRational>,
    /// False once any entry had to be rounded.
    pub exact: bool,
}

impl RecurrenceTable {
    /// `p* = sum p(i) / k`.
    pub fn p_star(&self) -> BigRational {
        mean(&self.p)
    }

    /// `q* = sum q(i) / k`.
    pub fn q_star(&self) -> BigRational {
        mean(&self.q)
    }

    pub fn p_f64(&self) -> Vec<f64> {
        self.p.iter().map(to_f64).collect()
    }

    pub fn q_f64(&self) -> Vec<f64> {
        self.q.iter().map(to_f64).collect()
    }

    pub fn q_tilde_f64(&self) -> Vec<f64> {
        self.q_tilde.iter().map(to_f64).collect()
    }

    pub fn xi_f64(&self) -> f64 {
        to_f64(&self.xi)
    }

    /// `1 - 1/k - (1/k) sum_{j<i} q~(j)` for level `i` (1-based).
    pub fn survival(&self, i: usize) -> BigRational {
        let k = BigRational::from_integer(self.k.into());
        let partial: BigRational = self.q_tilde[..i - 1].iter().sum();
        BigRational::one() - (BigRational::one() + partial) / k
    }

    /// Probability of a IIIb conflict at a boundary edge, as the sum over the
    /// level `t` of the boundary edge of the product of the four conditional
    /// event probabilities, each level weighted by `1/k`. Cubic case only.
    pub fn conflict_iiib(&self) -> f64 {
        let k = self.k as f64;
        let xi = self.xi_f64();
        let p = self.p_f64();
        let p_star = to_f64(&self.p_star());
        let mut total = 0.0;
        let mut partial = 0.0;
        for t in 0..self.k {
            let mate_in = xi * (p_star - p[t] / k);
            let next_out = 1.0 - xi * (1.0 - (1.0 + xi * partial) / k);
            total += p_star * p[t] * mate_in * next_out / k;
            partial += p[t];
        }
        total
    }
}

fn mean(v: &[BigRational]) -> BigRational {
    // rounded entries share a handful of dyadic denominators
    let mut by_denom: std::collections::HashMap<&BigInt, BigInt> = std::collections::HashMap::new();
    for x in v {
        *by_denom.entry(x.denom()).or_default() += x.numer();
    }
    let s: BigRational = by_denom
        .into_iter()
        .map(|(d, n)| BigRational::new(n, d.clone()))
        .sum();
    s / BigRational::from_integer(v.len().into())
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn bits(x: &BigRational) -> u64 {
    x.numer().bits().max(x.denom().bits())
}

fn round_dyadic(x: &BigRational, frac_bits: u64) -> BigRational {
    let scale = BigInt::one() << frac_bits;
    let scaled = x * BigRational::from_integer(scale.clone());
    let half = BigRational::new(1.into(), 2.into());
    BigRational::new((scaled + half).floor().to_integer(), scale)
}

/// Parse `0.25`, `1/4` or `1` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Precondition(format!("cannot read `{s}` as a rational"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(num, den))
}

/// Level table for `k` levels, damping `xi` and maximum degree `delta`.
///
/// For every level, `2p + q = 1` with `q = xi * p * S^(delta-2)` and
/// `S = 1 - 1/k - (1/k) sum_{j<i} q~(j)`, `q~ = p * S^(delta-3)`, so each
/// step solves to `p = 1 / (2 + xi * S^(delta-2))`.
pub fn pq_table(k: usize, xi: &BigRational, delta: usize) -> Result<RecurrenceTable> {
    if k < 1 {
        return precondition("k must be at least 1");
    }
    if xi.is_negative() || *xi > BigRational::one() {
        return precondition(format!("xi = {xi} is outside [0,1]"));
    }
    if delta < 3 {
        return precondition("delta must be at least 3");
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let kr = BigRational::from_integer(k.into());
    let mut exact = true;
    let mut partial = BigRational::zero();
    let (mut p, mut q, mut q_tilde) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..k {
        let s = &one - (&one + &partial) / &kr;
        let s_pow3 = num_traits::pow(s.clone(), delta - 3);
        let s_pow2 = &s_pow3 * &s;
        let mut pi = (&two + xi * &s_pow2).recip();
        if exact && bits(&pi).max(bits(&partial)) > EXACT_BIT_BUDGET {
            exact = false;
            partial = round_dyadic(&partial, ROUNDING_BITS);
        }
        if !exact {
            pi = round_dyadic(&pi, ROUNDING_BITS);
        }
        let qi = &one - &two * &pi;
        let mut qt = &pi * &s_pow3;
        if !exact {
            qt = round_dyadic(&qt, ROUNDING_BITS);
        }
        partial += &qt;
        p.push(pi);
        q.push(qi);
        q_tilde.push(qt);
    }
    Ok(RecurrenceTable {
        k,
        xi: xi.clone(),
        delta,
        p,
        q,
        q_tilde,
        exact,
    })
}

/// `(9 - 2x)^(-1/2)`, the limit of the rescaled cubic profile.
pub fn limit_profile(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return precondition(format!("x = {x} is outside [0,1]"));
    }
    Ok((9.0 - 2.0 * x).powf(-0.5))
}

/// `3 - sqrt(7)`, the limit of `p*_k` for cubic graphs.
pub fn p_star_limit() -> f64 {
    3.0 - 7f64.sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    pub k: usize,
    pub p_star: f64,
    pub gap: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    pub monotone: bool,
    pub tolerance: f64,
    pub final_within_tolerance: bool,
}

/// Distance of `p*_k` from `3 - sqrt(7)` along an increasing list of `k`.
pub fn verify_limit_convergence(k_list: &[usize], tolerance: f64) -> Result<LimitReport> {
    if k_list.windows(2).any(|w| w[0] >= w[1]) {
        return precondition("k list must be strictly increasing");
    }
    let limit = p_star_limit();
    let mut rows = Vec::new();
    for &k in k_list {
        let table = pq_table(k, &BigRational::one(), 3)?;
        let p_star = to_f64(&table.p_star());
        rows.push(LimitRow {
            k,
            p_star,
            gap: (p_star - limit).abs(),
            exact: table.exact,
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].gap < w[0].gap);
    let final_within_tolerance = rows.last().is_none_or(|r| r.gap < tolerance);
    Ok(LimitReport {
        rows,
        monotone,
        tolerance,
        final_within_tolerance,
    })
}

/// Point estimate with a two-sided 99% half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct CalibrationConfig {
    pub tol: f64,
    pub initial_samples: usize,
    pub max_samples: usize,
    pub max_iterations: usize,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig {
            tol: 1e-3,
            initial_samples: 1_000,
            max_samples: 1_000_000,
            max_iterations: 60,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub xi: f64,
    pub estimate: Estimate,
    pub samples: usize,
    pub iterations: usize,
    /// Half-widths of the estimates at each bisection midpoint.
    pub half_widths: Vec<f64>,
}

/// Bisection for `xi` with `estimator(xi) = target`, assuming the estimator
/// increases with `xi`. The sample size doubles whenever the interval
/// straddles the target without being narrow enough to stop.
pub fn calibrate_xi<F>(mut estimator: F, target: f64, cfg: CalibrationConfig) -> Result<Calibration>
where
    F: FnMut(f64, usize) -> Estimate,
{
    if !(cfg.tol > 0.0) || cfg.initial_samples == 0 {
        return precondition("tolerance and sample size must be positive");
    }
    let accept = |e: &Estimate| (e.mean - target).abs() + e.half_width < cfg.tol;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut half_widths = Vec::new();
    let mut bracket_checked = false;
    for iteration in 1..=cfg.max_iterations {
        let mid = 0.5 * (lo + hi);
        let mut samples = cfg.initial_samples;
        loop {
            let est = estimator(mid, samples);
            if accept(&est) {
                half_widths.push(est.half_width);
                return Ok(Calibration {
                    xi: mid,
                    estimate: est,
                    samples,
                    iterations: iteration,
                    half_widths,
                });
            }
            if est.mean - est.half_width > target {
                half_widths.push(est.half_width);
                hi = mid;
                break;
            }
            if est.mean + est.half_width < target {
                half_widths.push(est.half_width);
                lo = mid;
                break;
            }
            if samples * 2 > cfg.max_samples {
                return Err(Error::Budget(format!(
                    "estimate at xi={mid} still straddles {target} with {samples} samples"
                )));
            }
            samples *= 2;
        }
        if !bracket_checked {
            bracket_checked = true;
            let low = estimator(0.0, cfg.max_samples.min(cfg.initial_samples * 8));
            let high = estimator(1.0, cfg.max_samples.min(cfg.initial_samples * 8));
            if !(low.mean - low.half_width < target && high.mean + high.half_width > target) {
                return precondition(format!(
                    "target {target} not bracketed: estimate(0)={:.6}, estimate(1)={:.6}",
                    low.mean, high.mean
                ));
            }
        }
    }
    Err(Error::Budget(format!(
        "no xi found within {} bisection steps",
        cfg.max_iterations
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn first_level_for_eleven_levels() {
        let t = pq_table(11, &r(1, 1), 3).unwrap();
        assert!(t.exact);
        assert_eq!(t.p[0], r(11, 32));
        assert_eq!(t.q[0], r(10, 32));
        assert!(t.q_star() >= r(1, 4));
    }

    #[test]
    fn zero_damping_gives_halves() {
        let t = pq_table(5, &r(0, 1), 3).unwrap();
        assert!(t.p.iter().all(|p| *p == r(1, 2)));
        assert!(t.q.iter().all(Zero::is_zero));
    }

    #[test]
    fn telescoping_identities() {
        for k in 1..=9 {
            let t = pq_table(k, &r(1, 1), 3).unwrap();
            let kr = BigRational::from_integer(k.into());
            assert_eq!(t.p[0], BigRational::from_integer(k.into()) / r(3 * k as i64 - 1, 1));
            for i in 0..k - 1 {
                let (a, b) = (&t.p[i], &t.p[i + 1]);
                assert_eq!(a.recip() - b.recip(), a / &kr);
                assert_eq!(b - a, a * a * a / (&kr - a * a));
                assert!(b > a);
            }
        }
    }

    #[test]
    fn single_level() {
        let t = pq_table(1, &r(1, 1), 3).unwrap();
        assert_eq!(t.p_star(), r(1, 2));
        assert!(t.q[0].is_zero());
    }

    #[test]
    fn bad_parameters() {
        assert!(pq_table(0, &r(1, 1), 3).is_err());
        assert!(pq_table(3, &r(3, 2), 3).is_err());
        assert!(pq_table(3, &r(-1, 2), 3).is_err());
        assert!(limit_profile(1.5).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("3/12").unwrap(), r(1, 4));
        assert_eq!(parse_rational("1").unwrap(), r(1, 1));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn limit_profile_values() {
        assert!((limit_profile(0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((limit_profile(1.0).unwrap() - 0.377_964_473).abs() < 1e-9);
    }

    #[test]
    fn constant_estimator_returns_midpoint() {
        let c = calibrate_xi(
            |_, _| Estimate {
                mean: 0.25,
                half_width: 0.0,
            },
            0.25,
            CalibrationConfig::default(),
        )
        .unwrap();
        assert_eq!(c.xi, 0.5);
        assert_eq!(c.iterations, 1);
    }

    #[test]
    fn unbracketed_target_is_refused() {
        let res = calibrate_xi(
            |x, _| Estimate {
                mean: 0.1 * x,
                half_width: 0.0,
            },
            0.5,
            CalibrationConfig::default(),
        );
        assert!(matches!(res, Err(Error::Precondition(_))));
    }
}

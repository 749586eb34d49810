use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::{precondition, Result};
use crate::factor::{complement_two_factor, OrientedTwoFactor};
use crate::graph::Graph;
use crate::recurrence::to_f64;
use crate::sampler::{trial_rng, ConflictType, ElementClass, Sampler, TrialStats, Violations};
use crate::sparse::{decompose, ConstraintGraph, SparseParams};

use super::cover::{uniform_pm_cover, PmCover};

pub const MIN_TRIALS: u64 = 1_000;
/// Two-sided 99% normal quantile.
const Z99: f64 = 2.575_829_303_549;

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ser_ratio<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Mean weights of matching edges, vertices and factor edges.
#[derive(Debug, Clone, Serialize)]
pub struct Aggregates {
    #[serde(serialize_with = "ser_ratio")]
    pub alpha: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub beta: BigRational,
    #[serde(serialize_with = "ser_ratio")]
    pub gamma: BigRational,
    /// Variances of the three estimates.
    pub variances: [f64; 3],
    /// 99% half widths.
    pub alpha_ci: f64,
    pub beta_ci: f64,
    pub gamma_ci: f64,
    /// `beta + (2 |M| / n) alpha + (2 |F| / n) gamma == 1` exactly, which is
    /// `alpha + beta + 2 gamma == 1` on cubic graphs.
    pub identity_exact: bool,
}

impl Aggregates {
    fn new(alpha: BigRational, beta: BigRational, gamma: BigRational, variances: [f64; 3], identity_exact: bool) -> Self {
        Aggregates {
            alpha,
            beta,
            gamma,
            variances,
            alpha_ci: Z99 * variances[2].sqrt(),
            beta_ci: Z99 * variances[0].sqrt(),
            gamma_ci: Z99 * variances[1].sqrt(),
            identity_exact,
        }
    }

    fn mean(parts: &[&Aggregates]) -> Aggregates {
        let s = BigRational::from_integer(parts.len().into());
        let sum = |f: fn(&Aggregates) -> &BigRational| parts.iter().map(|a| f(a)).sum::<BigRational>() / &s;
        let sf = parts.len() as f64;
        let mut variances = [0.0; 3];
        for a in parts {
            for c in 0..3 {
                variances[c] += a.variances[c] / (sf * sf);
            }
        }
        Aggregates::new(
            sum(|a| &a.alpha),
            sum(|a| &a.beta),
            sum(|a| &a.gamma),
            variances,
            parts.iter().all(|a| a.identity_exact),
        )
    }

    pub fn alpha_f64(&self) -> f64 {
        to_f64(&self.alpha)
    }

    pub fn beta_f64(&self) -> f64 {
        to_f64(&self.beta)
    }

    pub fn gamma_f64(&self) -> f64 {
        to_f64(&self.gamma)
    }
}

/// Mean frequency over the elements sharing one `(F,B)`-type label, or over
/// one element class outside every labelled region.
#[derive(Debug, Clone, Serialize)]
pub struct TypeAggregate {
    pub label: Option<u8>,
    pub class: Option<ElementClass>,
    pub elements: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightEstimate {
    /// Frequencies are `hits[x] / samples`.
    pub samples: u64,
    pub hits: Vec<u64>,
    pub aggregates: Aggregates,
    /// Per-label means inside the boundary regions, then per-class means of
    /// elements outside them. Empty for mixtures.
    pub types: Vec<TypeAggregate>,
    /// Elements carrying more than one label.
    pub overlapping: usize,
    pub conflicts: [u64; ConflictType::ALL.len()],
    pub violations: Violations,
}

impl WeightEstimate {
    pub fn frequency(&self, x: usize) -> BigRational {
        ratio(self.hits[x], self.samples)
    }

    pub fn frequency_f64(&self, x: usize) -> f64 {
        self.hits[x] as f64 / self.samples as f64
    }

    /// 99% half width of one element frequency.
    pub fn ci(&self, x: usize) -> f64 {
        let p = self.frequency_f64(x);
        Z99 * (p * (1.0 - p) / self.samples as f64).sqrt()
    }

    /// Uniform mixture of estimates drawn with equal sample counts.
    fn mix(parts: &[&WeightEstimate]) -> Result<WeightEstimate> {
        let Some(first) = parts.first() else {
            return precondition("nothing to mix");
        };
        if parts.iter().any(|p| p.samples != first.samples || p.hits.len() != first.hits.len()) {
            return precondition("mixed estimates need equal sample counts");
        }
        let mut hits = vec![0u64; first.hits.len()];
        let mut conflicts = [0u64; ConflictType::ALL.len()];
        let mut violations = Violations::default();
        for p in parts {
            for (h, x) in hits.iter_mut().zip(&p.hits) {
                *h += x;
            }
            for (c, x) in conflicts.iter_mut().zip(&p.conflicts) {
                *c += x;
            }
            violations.add(&p.violations);
        }
        Ok(WeightEstimate {
            samples: first.samples * parts.len() as u64,
            hits,
            aggregates: Aggregates::mean(&parts.iter().map(|p| &p.aggregates).collect::<Vec<_>>()),
            types: Vec::new(),
            overlapping: parts.iter().map(|p| p.overlapping).sum(),
            conflicts,
            violations,
        })
    }

    fn from_stats(sampler: &Sampler, stats: &TrialStats) -> Result<WeightEstimate> {
        let g = sampler.graph();
        let f = sampler.factor();
        let t = stats.trials;
        let mut sizes = [0u64; 3];
        for x in 0..g.total_len() {
            sizes[ElementClass::of(g, f, x) as usize] += 1;
        }
        let mut means = Vec::with_capacity(3);
        let mut variances = [0.0; 3];
        for c in 0..3 {
            if sizes[c] == 0 {
                means.push(BigRational::zero());
                continue;
            }
            means.push(ratio(stats.class_sums[c], t * sizes[c]));
            let m1 = stats.class_sums[c] as f64 / (t as f64 * sizes[c] as f64);
            let m2 = stats.class_squares[c] as f64 / (t as f64 * (sizes[c] * sizes[c]) as f64);
            variances[c] = ((m2 - m1 * m1) / t as f64).max(0.0);
        }
        let n = sizes[0];
        let identity = &means[0]
            + ratio(2 * sizes[2], n) * &means[2]
            + ratio(2 * sizes[1], n) * &means[1];
        let aggregates = Aggregates::new(
            means[2].clone(),
            means[0].clone(),
            means[1].clone(),
            variances,
            identity.is_one(),
        );
        let mut label_sums = [(0usize, 0u64); 12];
        let mut outside = [(0usize, 0u64); 3];
        let mut overlapping = 0;
        for x in 0..g.total_len() {
            match sampler.classify_type(x) {
                Ok(Some(label)) => {
                    label_sums[label as usize].0 += 1;
                    label_sums[label as usize].1 += stats.element_hits[x];
                }
                Ok(None) => {
                    let c = ElementClass::of(g, f, x) as usize;
                    outside[c].0 += 1;
                    outside[c].1 += stats.element_hits[x];
                }
                Err(_) => overlapping += 1,
            }
        }
        let mean = |(count, hits): (usize, u64)| {
            if count == 0 {
                0.0
            } else {
                hits as f64 / (count as f64 * t as f64)
            }
        };
        let mut types: Vec<TypeAggregate> = (1..=11)
            .map(|label| TypeAggregate {
                label: Some(label as u8),
                class: None,
                elements: label_sums[label].0,
                mean: mean(label_sums[label]),
            })
            .collect();
        types.extend(ElementClass::ALL.iter().map(|&c| TypeAggregate {
            label: None,
            class: Some(c),
            elements: outside[c as usize].0,
            mean: mean(outside[c as usize]),
        }));
        Ok(WeightEstimate {
            samples: t,
            hits: stats.element_hits.clone(),
            aggregates,
            types,
            overlapping,
            conflicts: stats.type_totals(),
            violations: stats.violations,
        })
    }
}

/// Sampled weights `w_{F,B}` for one boundary set.
pub fn estimate_weights(
    g: &Graph,
    f: &OrientedTwoFactor,
    boundary: &[usize],
    k: usize,
    xi: &BigRational,
    trials: u64,
    seed: u64,
) -> Result<WeightEstimate> {
    if trials < MIN_TRIALS {
        return precondition(format!("trials = {trials} below {MIN_TRIALS}"));
    }
    let sampler = Sampler::new(g, f, boundary, k, xi)?;
    let stats = sampler.run_trials(trials, seed)?;
    WeightEstimate::from_stats(&sampler, &stats)
}

/// Sub-seed number `index` of `seed`.
fn derive_seed(seed: u64, index: u64) -> u64 {
    trial_rng(seed, index.wrapping_add(1 << 32)).next_u64()
}

#[derive(Debug, Clone, Serialize)]
pub struct SetSummary {
    pub r: usize,
    pub t: usize,
    pub edges: Vec<usize>,
    pub verified: bool,
    pub aggregates: Aggregates,
    pub conflicts: [u64; ConflictType::ALL.len()],
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionWeights {
    pub ell: usize,
    pub partition: bool,
    pub all_verified: bool,
    pub sets: Vec<SetSummary>,
    pub mixture: WeightEstimate,
    /// `4 / (3 l)`.
    pub alpha_bound: f64,
    /// `alpha <= 4/(3l) + 3 CI`.
    pub alpha_within_bound: bool,
}

/// Uniform mixture of `w_{F,B}` over the `3l` boundary sets of a decomposition.
#[allow(clippy::too_many_arguments)]
pub fn average_over_decomposition(
    g: &Graph,
    f: &OrientedTwoFactor,
    k: usize,
    xi: &BigRational,
    params: SparseParams,
    q: &ConstraintGraph,
    trials: u64,
    seed: u64,
) -> Result<DecompositionWeights> {
    let dec = decompose(g, f, params, q, derive_seed(seed, 0))?;
    let mut estimates = Vec::with_capacity(dec.sets.len());
    let mut sets = Vec::with_capacity(dec.sets.len());
    for (i, set) in dec.sets.iter().enumerate() {
        let est = estimate_weights(g, f, &set.edges, k, xi, trials, derive_seed(seed, 1 + i as u64))?;
        sets.push(SetSummary {
            r: set.r,
            t: set.t,
            edges: set.edges.clone(),
            verified: set.report.passed,
            aggregates: est.aggregates.clone(),
            conflicts: est.conflicts,
        });
        estimates.push(est);
    }
    let mixture = WeightEstimate::mix(&estimates.iter().collect::<Vec<_>>())?;
    let alpha_bound = 4.0 / (3.0 * params.ell as f64);
    let alpha_within_bound = mixture.aggregates.alpha_f64() <= alpha_bound + 3.0 * mixture.aggregates.alpha_ci;
    Ok(DecompositionWeights {
        ell: params.ell,
        partition: dec.partition,
        all_verified: dec.all_verified,
        sets,
        mixture,
        alpha_bound,
        alpha_within_bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AssemblyReport {
    pub factors: u64,
    pub n_cover: u64,
    /// Means over the factors of the per-factor aggregates.
    pub aggregates: Aggregates,
    /// `(alpha + 2 gamma) / 3`.
    #[serde(serialize_with = "ser_ratio")]
    pub edge_weight: BigRational,
    /// Mean edge weight of `w'`; equals `edge_weight` when every edge lies in
    /// `2N` of the complementary factors.
    #[serde(serialize_with = "ser_ratio")]
    pub mean_edge_weight: BigRational,
    pub edge_weight_consistent: bool,
    #[serde(serialize_with = "ser_ratio")]
    pub vertex_weight: BigRational,
    /// `1 - (1 - beta) / (3 beta)`.
    #[serde(serialize_with = "ser_ratio")]
    pub matching_coefficient: BigRational,
    pub matching_coefficient_f64: f64,
    pub nonnegative_coefficient: bool,
    /// `beta - 1/4`; negative when the matching part would need negative weight.
    #[serde(serialize_with = "ser_ratio")]
    pub beta_deficit: BigRational,
    pub beta_deficit_f64: f64,
    /// Every vertex of `w'` has Y-sum exactly 1.
    pub prime_y_sums_exact: bool,
    /// Every vertex of the final mixture has Y-sum exactly 4.
    pub y_sums_exact: bool,
    pub coverage_min: f64,
    pub coverage_max: f64,
    pub vertex_coverage: [f64; 2],
    pub edge_coverage: [f64; 2],
    pub covers_all: bool,
    pub violations: Violations,
}

/// Combine per-factor weights (aligned with the cover's matchings) into
/// `w = w'/beta + (1 - (1 - beta)/(3 beta)) c`, where `c` puts weight `1/N`
/// on every matching of the cover.
pub fn assemble_final(g: &Graph, cover: &PmCover, weights: &[WeightEstimate]) -> Result<AssemblyReport> {
    if weights.len() != cover.matchings.len() {
        return precondition("one weight estimate per cover matching is required");
    }
    let mut parts = Vec::new();
    for (w, &mult) in weights.iter().zip(&cover.multiplicities) {
        for _ in 0..mult {
            parts.push(w);
        }
    }
    let prime = WeightEstimate::mix(&parts)?;
    let aggregates = prime.aggregates.clone();
    let n = g.n();
    let w_prime: Vec<BigRational> = (0..g.total_len()).map(|x| prime.frequency(x)).collect();
    let beta: BigRational = w_prime[..n].iter().sum::<BigRational>() / BigRational::from_integer(n.into());
    if !beta.is_positive() {
        return precondition("vertex weight is zero, nothing to scale");
    }
    let three = BigRational::from_integer(3.into());
    let one = BigRational::one();
    let coef = &one - (&one - &beta) / (&three * &beta);
    let two = BigRational::from_integer(2.into());
    let edge_weight = (&aggregates.alpha + &two * &aggregates.gamma) / &three;
    let mean_edge_weight =
        w_prime[n..].iter().sum::<BigRational>() / BigRational::from_integer(g.m().into());
    let final_weight = |x: usize| -> BigRational {
        let base = &w_prime[x] / &beta;
        if x < n {
            base
        } else {
            base + &coef
        }
    };
    let weights_final: Vec<BigRational> = (0..g.total_len()).map(final_weight).collect();
    let y_sum = |w: &[BigRational], v: usize| -> BigRational {
        g.incident(v).iter().map(|&(_, e)| &w[n + e]).sum::<BigRational>() + &w[v]
    };
    let four = BigRational::from_integer(4.into());
    let prime_y_sums_exact = (0..n).all(|v| y_sum(&w_prime, v).is_one());
    let y_sums_exact = (0..n).all(|v| y_sum(&weights_final, v) == four);
    let as_f64: Vec<f64> = weights_final.iter().map(to_f64).collect();
    let range = |xs: &[f64]| {
        xs.iter().fold([f64::INFINITY, f64::NEG_INFINITY], |[lo, hi], &v| [lo.min(v), hi.max(v)])
    };
    let vertex_coverage = range(&as_f64[..n]);
    let edge_coverage = range(&as_f64[n..]);
    let quarter = BigRational::new(1.into(), 4.into());
    Ok(AssemblyReport {
        factors: cover.total(),
        n_cover: cover.n_cover,
        edge_weight_consistent: edge_weight == mean_edge_weight,
        edge_weight,
        mean_edge_weight,
        vertex_weight: beta.clone(),
        matching_coefficient_f64: to_f64(&coef),
        nonnegative_coefficient: !coef.is_negative(),
        matching_coefficient: coef,
        beta_deficit_f64: to_f64(&beta) - 0.25,
        beta_deficit: &beta - quarter,
        prime_y_sums_exact,
        y_sums_exact,
        coverage_min: vertex_coverage[0].min(edge_coverage[0]),
        coverage_max: vertex_coverage[1].max(edge_coverage[1]),
        covers_all: weights_final.iter().all(|w| *w >= one),
        vertex_coverage,
        edge_coverage,
        aggregates,
        violations: prime.violations,
    })
}

/// Full pipeline on a cubic bridgeless graph: uniform cover, one
/// decomposition average per complementary 2-factor, final mixture.
#[allow(clippy::too_many_arguments)]
pub fn assemble(
    g: &Graph,
    k: usize,
    xi: &BigRational,
    params: SparseParams,
    trials: u64,
    seed: u64,
    matching_cap: usize,
) -> Result<(PmCover, Vec<DecompositionWeights>, AssemblyReport)> {
    let cover = uniform_pm_cover(g, matching_cap)?;
    let q = ConstraintGraph::empty();
    let mut per_factor = Vec::with_capacity(cover.matchings.len());
    for (i, m) in cover.matchings.iter().enumerate() {
        let f = complement_two_factor(g, m)?;
        per_factor.push(average_over_decomposition(
            g,
            &f,
            k,
            xi,
            params,
            &q,
            trials,
            derive_seed(seed, 1000 + i as u64),
        )?);
    }
    let mixtures: Vec<WeightEstimate> = per_factor.iter().map(|d| d.mixture.clone()).collect();
    let report = assemble_final(g, &cover, &mixtures)?;
    Ok((cover, per_factor, report))
}

/// Probability of keeping an element seen with frequency `current` so that
/// it ends at frequency `target`.
pub fn thinning_keep_probability(current: f64, target: f64) -> Result<f64> {
    if !(current > 0.0 && (0.0..=current).contains(&target)) {
        return precondition(format!("cannot thin frequency {current} down to {target}"));
    }
    Ok(target / current)
}

/// Drop dense element `z` from `set` with probability `1 - keep`; true when
/// it was dropped.
pub fn thin_element(set: &mut [bool], z: usize, keep: f64, rng: &mut impl Rng) -> bool {
    if set[z] && rng.gen::<f64>() >= keep {
        set[z] = false;
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::matching::perfect_matchings;

    #[test]
    fn single_boundary_weights() {
        let g = generate::petersen();
        let m = perfect_matchings(&g, 1).matchings.remove(0);
        let f = complement_two_factor(&g, &m).unwrap();
        let b: Vec<usize> = f.cycles().iter().map(|c| f.out_edge(c[0])).collect();
        let w = estimate_weights(&g, &f, &b, 3, &BigRational::one(), 2000, 9).unwrap();
        assert!(w.aggregates.identity_exact);
        assert_eq!(w.violations.total(), 0);
        assert!(estimate_weights(&g, &f, &b, 3, &BigRational::one(), 999, 9).is_err());
    }

    #[test]
    fn thinning() {
        assert!((thinning_keep_probability(0.4, 0.3).unwrap() - 0.75).abs() < 1e-15);
        assert!(thinning_keep_probability(0.3, 0.4).is_err());
        let mut rng = trial_rng(1, 1);
        let dropped = (0..20_000)
            .filter(|_| thin_element(&mut [true], 0, 0.75, &mut rng))
            .count();
        assert!((dropped as f64 / 20_000.0 - 0.25).abs() < 0.02);
    }
}

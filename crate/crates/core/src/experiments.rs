//! Seeded Monte Carlo harnesses: spans of random ball points, the pair-sum
//! decay experiment, and rate sweeps of random linear codes.
//!
//! Every trial draws from its own stream `derive(tag).rng(trial)` of the
//! master seed, and aggregation is order-independent, so summaries are
//! identical for any worker count. Summaries serialize with serde; each
//! carries [`SCHEMA`] so downstream readers can check the layout version.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{self, check_ld_exact, random_code, span_set, CheckMode};
use crate::error::{invalid, Error, Result};
use crate::gfq::{Field, VecQ};
use crate::hamming::{ball_points, ball_volume, entropy_q, BallSampler, BallSpec, Fraction, ENUMERATION_BUDGET};
use crate::par;
use crate::rng::SeedStream;

/// Version tag embedded in every structured record.
pub const SCHEMA: &str = "listdec/1";

/// Default threshold constant `C` for the span experiment.
pub const DEFAULT_C_THRESHOLD: f64 = 64.0;

// ---------------------------------------------------------------------------
// span experiment

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanConfig {
    pub n: usize,
    pub p: Fraction,
    pub q: usize,
    pub ell: usize,
    pub c_threshold: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanTrial {
    pub trial: usize,
    /// `|span ∩ B(0, radius)|`.
    pub count: usize,
    pub rank: usize,
    pub span_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanSummary {
    pub schema: String,
    pub config: SpanConfig,
    pub radius: usize,
    /// count → number of trials.
    pub histogram: BTreeMap<usize, usize>,
    pub tail_count: usize,
    pub tail_frequency: f64,
    /// Trials whose draws were linearly dependent (`rank < ell`).
    pub dependent_trials: usize,
    /// Trials where `span_size != q^rank`; always 0 unless something is broken.
    pub rank_mismatches: usize,
    /// Set when `ell² ≥ n`, outside the regime `ell = o(√n)`.
    pub ell_squared_ge_n: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials_detail: Option<Vec<SpanTrial>>,
}

/// Counts span members inside `B_n^q(0, ⌊pn⌋)` over `trials` independent draws
/// of `ell` uniform ball points.
pub fn run_span_experiment(config: &SpanConfig, verbose: bool) -> Result<SpanSummary> {
    if config.trials == 0 {
        return Err(invalid("span experiment needs at least one trial"));
    }
    let spec = BallSpec::from_fraction(config.n, config.p, config.q)?;
    let field = Field::new(config.q)?;
    let budget_ok = (config.q as u128)
        .checked_pow(config.ell as u32)
        .is_some_and(|t| t <= ENUMERATION_BUDGET);
    if !budget_ok || config.ell > codes::MAX_SPAN_VECTORS {
        return Err(Error::Resource(format!(
            "span of {} points over F_{} exceeds the enumeration budget",
            config.ell, config.q
        )));
    }
    let sampler = BallSampler::new(&spec)?;
    let seeds = SeedStream::new(config.seed).derive(0x5350_414E);
    let radius = spec.radius;
    let trials = par::map_range(config.trials, |t| {
        let mut rng = seeds.rng(t as u64);
        let draws: Vec<VecQ> = (0..config.ell).map(|_| sampler.sample(&mut rng)).collect();
        let span = span_set(&field, config.n, &draws).expect("budget checked");
        SpanTrial {
            trial: t,
            count: span.iter().filter(|v| v.weight() <= radius).count(),
            rank: codes::rank(&draws),
            span_size: span.len(),
        }
    });

    let limit = config.c_threshold * config.ell as f64;
    let mut histogram = BTreeMap::new();
    let (mut tail_count, mut dependent, mut mismatches) = (0, 0, 0);
    for t in &trials {
        *histogram.entry(t.count).or_insert(0) += 1;
        tail_count += (t.count as f64 > limit) as usize;
        dependent += (t.rank < config.ell) as usize;
        mismatches += (t.span_size != config.q.pow(t.rank as u32)) as usize;
    }
    Ok(SpanSummary {
        schema: SCHEMA.into(),
        config: config.clone(),
        radius,
        histogram,
        tail_count,
        tail_frequency: tail_count as f64 / config.trials as f64,
        dependent_trials: dependent,
        rank_mismatches: mismatches,
        ell_squared_ge_n: config.ell * config.ell >= config.n,
        trials_detail: verbose.then_some(trials),
    })
}

// ---------------------------------------------------------------------------
// pair-sum experiment

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterMode {
    Zero,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSumConfig {
    pub ns: Vec<usize>,
    pub p: Fraction,
    pub q: usize,
    pub trials: usize,
    pub seed: u64,
    pub centers: Vec<CenterMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSumRecord {
    pub n: usize,
    pub p: Fraction,
    pub q: usize,
    pub radius: usize,
    pub center: CenterMode,
    pub trials: usize,
    pub hit_count: usize,
    pub estimate: f64,
    pub std_error: f64,
    /// `log2(estimate) / n`; absent when no hits were observed.
    pub log_estimate_per_n: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub center: CenterMode,
    /// Least-squares slope of `log2(estimate)` against `n`; `-slope` estimates the decay exponent.
    pub slope: Option<f64>,
    pub points_used: usize,
    /// Grid points excluded because no hits were observed.
    pub excluded_ns: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSumSummary {
    pub schema: String,
    pub config: PairSumConfig,
    pub records: Vec<PairSumRecord>,
    pub fits: Vec<DecayFit>,
}

/// Estimates `Pr[w1 + w2 ∈ B(x, ⌊pn⌋)]` for independent uniform `w1, w2` from
/// `B(0, ⌊pn⌋)`, with `x = 0` or `x` uniform on `F_q^n`, for each `n`.
pub fn run_pair_sum_experiment(config: &PairSumConfig) -> Result<PairSumSummary> {
    if config.trials == 0 {
        return Err(invalid("pair-sum experiment needs at least one trial"));
    }
    if config.ns.is_empty() || config.centers.is_empty() {
        return Err(invalid("pair-sum experiment needs at least one n and one center mode"));
    }
    let field = Field::new(config.q)?;
    let master = SeedStream::new(config.seed);
    let mut records = Vec::new();
    for &n in &config.ns {
        let spec = BallSpec::from_fraction(n, config.p, config.q)?;
        let sampler = BallSampler::new(&spec)?;
        for &center in &config.centers {
            let tag = (n as u64) << 8 | center as u64;
            let seeds = master.derive(tag);
            let hits: usize = par::map_chunks(config.trials, 1024, |range| {
                range
                    .filter(|&t| {
                        let mut rng = seeds.rng(t as u64);
                        let w1 = sampler.sample(&mut rng);
                        let w2 = sampler.sample(&mut rng);
                        let sum = w1.add(&w2).expect("shared shape");
                        match center {
                            CenterMode::Zero => sum.weight() <= spec.radius,
                            CenterMode::Random => {
                                let digits: Vec<u8> =
                                    (0..n).map(|_| rng.random_range(0..config.q as u8)).collect();
                                let x = VecQ::from_digits(&field, &digits).expect("digits below q");
                                sum.distance_unchecked(&x) <= spec.radius
                            }
                        }
                    })
                    .count()
            })
            .into_iter()
            .sum();
            let est = hits as f64 / config.trials as f64;
            records.push(PairSumRecord {
                n,
                p: config.p,
                q: config.q,
                radius: spec.radius,
                center,
                trials: config.trials,
                hit_count: hits,
                estimate: est,
                std_error: (est * (1.0 - est) / config.trials as f64).sqrt(),
                log_estimate_per_n: (hits > 0).then(|| est.log2() / n as f64),
            });
        }
    }
    let fits = config
        .centers
        .iter()
        .map(|&center| {
            let rows: Vec<&PairSumRecord> = records.iter().filter(|r| r.center == center).collect();
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.hit_count > 0)
                .map(|r| (r.n as f64, r.estimate.log2()))
                .collect();
            DecayFit {
                center,
                slope: least_squares_slope(&pts),
                points_used: pts.len(),
                excluded_ns: rows.iter().filter(|r| r.hit_count == 0).map(|r| r.n).collect(),
            }
        })
        .collect();
    Ok(PairSumSummary { schema: SCHEMA.into(), config: config.clone(), records, fits })
}

fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn binom(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::from(1u32), |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form number of ordered pairs `(w1, w2)` in `B(0,r)²` with
/// `w1 + w2 ∈ B(0,r)`.
///
/// Fix `w1` of weight `i`. On its support `w2` cancels it on `t` coordinates,
/// takes one of the `q-2` other nonzero values on `s`, and is zero elsewhere;
/// off the support `w2` is nonzero on `m` coordinates. Then
/// `wt(w2) = t + s + m` and `wt(w1 + w2) = i - t + m`, giving
/// `Σ_i C(n,i)(q-1)^i Σ C(i,t) C(i-t,s) (q-2)^s C(n-i,m) (q-1)^m`
/// over `t + s + m ≤ r`, `i - t + m ≤ r`.
pub fn pair_sum_zero_center_count(n: usize, r: usize, q: usize) -> Result<BigUint> {
    if r > n {
        return Err(invalid(format!("radius {r} exceeds length {n}")));
    }
    let q1 = BigUint::from(q - 1);
    let q2 = BigUint::from(q - 2);
    let mut total = BigUint::zero();
    for i in 0..=r {
        let mut inner = BigUint::zero();
        for t in 0..=i {
            for s in 0..=(i - t) {
                for m in 0..=(n - i) {
                    if t + s + m > r || i - t + m > r {
                        continue;
                    }
                    inner += binom(i, t) * binom(i - t, s) * q2.pow(s as u32) * binom(n - i, m) * q1.pow(m as u32);
                }
            }
        }
        total += binom(n, i) * q1.pow(i as u32) * inner;
    }
    Ok(total)
}

/// Exact probability for `x = 0` from the closed form.
pub fn pair_sum_zero_center_probability(n: usize, r: usize, q: usize) -> Result<f64> {
    let vol = ball_volume(n, r, q)?;
    let count = pair_sum_zero_center_count(n, r, q)?;
    Ok(ratio_f64(&count, &(&vol * &vol)))
}

/// Averaged over a uniform center the probability is exactly `|B| / q^n`.
pub fn pair_sum_random_center_probability(n: usize, r: usize, q: usize) -> Result<f64> {
    let vol = ball_volume(n, r, q)?;
    Ok(ratio_f64(&vol, &BigUint::from(q).pow(n as u32)))
}

fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    // shift both down so the quotient survives the f64 conversion
    let shift = b.bits().saturating_sub(60);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap_or(f64::INFINITY) / b.to_f64().unwrap_or(f64::INFINITY)
}

/// Brute-force count of pairs `(w1, w2)` in `B(0,r)²` with `w1 + w2 ∈ B(x,r)`.
pub fn pair_sum_exhaustive_count(x: &VecQ, r: usize) -> Result<u64> {
    let pts = ball_points(x.field(), x.len(), r)?;
    if (pts.len() as u128).pow(2) > ENUMERATION_BUDGET * 4 {
        return Err(Error::Resource(format!("{}² ball pairs exceed the budget", pts.len())));
    }
    let count = par::map_range(pts.len(), |i| {
        pts.iter()
            .filter(|w2| pts[i].add(w2).expect("shape").distance_unchecked(x) <= r)
            .count() as u64
    });
    Ok(count.into_iter().sum())
}

// ---------------------------------------------------------------------------
// rate sweep

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub q: usize,
    pub p: Fraction,
    pub eps: Vec<f64>,
    pub codes_per_point: usize,
    pub seed: u64,
    /// Constant `C` in the candidate list size `L = ⌈C/ε⌉`.
    pub c_const: f64,
    pub mode: CheckMode,
    /// Keep each sampled generator (text format) in the summary.
    pub retain_codes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eps: f64,
    /// `1 - H_q(p) - ε`.
    pub rate: f64,
    /// `⌊rate · n⌋` (may be negative on degenerate points).
    pub k: i64,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub codes_sampled: usize,
    pub l_max: Vec<usize>,
    pub l_max_histogram: BTreeMap<usize, usize>,
    pub candidate_list_size: usize,
    /// Fraction of codes with `l_max > candidate_list_size`.
    pub failure_frequency: f64,
    pub code_size: u128,
    pub failure_frequency_at_code_size: f64,
    /// `(L, fraction of codes with l_max > L)` for `L = 1..=max l_max`.
    pub failure_curve: Vec<(usize, f64)>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub schema: String,
    pub config: SweepConfig,
    pub radius: usize,
    pub entropy: f64,
    pub points: Vec<SweepPoint>,
}

fn failure_frequency(l_max: &[usize], list_size: usize) -> f64 {
    if l_max.is_empty() {
        return 0.0;
    }
    l_max.iter().filter(|&&l| l > list_size).count() as f64 / l_max.len() as f64
}

/// Samples full-rank random codes at `k = ⌊(1 - H_q(p) - ε) n⌋` for each
/// `ε` and records their exact maximum list sizes.
pub fn run_rate_sweep(config: &SweepConfig) -> Result<SweepSummary> {
    let spec = BallSpec::from_fraction(config.n, config.p, config.q)?;
    let h = entropy_q(config.p.to_f64(), config.q)?;
    let master = SeedStream::new(config.seed);
    let mut points = Vec::with_capacity(config.eps.len());
    for (idx, &eps) in config.eps.iter().enumerate() {
        if eps.is_nan() || eps <= 0.0 {
            return Err(invalid(format!("ε must be positive, got {eps}")));
        }
        let rate = 1.0 - h - eps;
        let k = (rate * config.n as f64).floor() as i64;
        let candidate = (config.c_const / eps).ceil().max(1.0) as usize;
        if k < 1 {
            points.push(SweepPoint {
                eps,
                rate,
                k,
                degenerate: true,
                note: Some(format!("k = {k} < 1; grid point skipped")),
                codes_sampled: 0,
                l_max: Vec::new(),
                l_max_histogram: BTreeMap::new(),
                candidate_list_size: candidate,
                failure_frequency: 0.0,
                code_size: 0,
                failure_frequency_at_code_size: 0.0,
                failure_curve: Vec::new(),
                generators: Vec::new(),
            });
            continue;
        }
        let k = k as usize;
        let seeds = master.derive(idx as u64);
        let results = par::map_range(config.codes_per_point, |i| -> Result<(usize, String)> {
            let code = random_code(config.n, k, config.q, true, &mut seeds.rng(i as u64))?;
            let verdict = check_ld_exact(&code, spec.radius, config.mode)?;
            Ok((verdict.l_max, if config.retain_codes { code.to_text() } else { String::new() }))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let (l_max, generators): (Vec<usize>, Vec<String>) = results.into_iter().unzip();
        let mut hist = BTreeMap::new();
        for &l in &l_max {
            *hist.entry(l).or_insert(0) += 1;
        }
        let code_size = (config.q as u128).pow(k as u32);
        let top = l_max.iter().copied().max().unwrap_or(0);
        points.push(SweepPoint {
            eps,
            rate,
            k: k as i64,
            degenerate: false,
            note: None,
            codes_sampled: config.codes_per_point,
            failure_frequency: failure_frequency(&l_max, candidate),
            failure_frequency_at_code_size: failure_frequency(&l_max, code_size.min(usize::MAX as u128) as usize),
            failure_curve: (1..=top).map(|l| (l, failure_frequency(&l_max, l))).collect(),
            l_max_histogram: hist,
            candidate_list_size: candidate,
            code_size,
            l_max,
            generators: if config.retain_codes { generators } else { Vec::new() },
        });
    }
    Ok(SweepSummary {
        schema: SCHEMA.into(),
        config: config.clone(),
        radius: spec.radius,
        entropy: h,
        points,
    })
}

//! Hamming-ball geometry over `F_q^n`: q-ary entropy, exact ball volumes,
//! exact uniform sampling and enumeration of ball points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gfq::{Field, VecQ};

/// Enumeration budget shared by every exhaustive routine in the crate.
pub const ENUMERATION_BUDGET: u128 = 1 << 24;

/// `H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`, with `0 log 0 = 0`.
pub fn entropy_q(x: f64, q: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || x.is_nan() {
        return Err(Error::Domain(format!("entropy argument {x} outside [0, 1]")));
    }
    if q < 2 {
        return Err(invalid(format!("entropy base q={q} must be at least 2")));
    }
    let qf = q as f64;
    let xlogx = |t: f64| if t == 0.0 { 0.0 } else { t * t.log2() };
    let bits = x * (qf - 1.0).log2() - xlogx(x) - xlogx(1.0 - x);
    Ok(bits / qf.log2())
}

/// A nonnegative rational `num/den`, used for error fractions so that
/// `⌊p·n⌋` is computed without rounding.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fraction {
    num: u64,
    den: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(invalid("fraction with zero denominator"));
        }
        let g = gcd(num, den).max(1);
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `⌊self · n⌋`.
    pub fn floor_mul(&self, n: usize) -> usize {
        (self.num as u128 * n as u128 / self.den as u128) as usize
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl Eq for Fraction {}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `a/b`, integers, and decimals (`0.2` is exactly `1/5`).
impl TryFrom<String> for Fraction {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Fraction> for String {
    fn from(f: Fraction) -> String {
        f.to_string()
    }
}

impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot read {s:?} as a fraction"));
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse::<u64>().map_err(|_| bad())?;
            let b = b.trim().parse::<u64>().map_err(|_| bad())?;
            return Fraction::new(a, b).map_err(|_| bad());
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if (int.is_empty() && frac.is_empty()) || frac.len() > 18 {
            return Err(bad());
        }
        let all_digits = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        if !all_digits(int) || !all_digits(frac) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int_part: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac_part: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int_part
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_part))
            .ok_or_else(bad)?;
        Fraction::new(num, den)
    }
}

/// A ball `B_n^q(·, p)` with integer radius `⌊p·n⌋`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSpec {
    pub n: usize,
    pub q: usize,
    pub radius: usize,
    /// The error fraction the radius was resolved from, if any.
    pub p: Option<Fraction>,
}

impl BallSpec {
    /// Requires `0 ≤ p < 1 - 1/q`.
    pub fn from_fraction(n: usize, p: Fraction, q: usize) -> Result<Self> {
        if q < 2 {
            return Err(invalid(format!("q={q} must be at least 2")));
        }
        if p.num as u128 * q as u128 >= p.den as u128 * (q as u128 - 1) {
            return Err(invalid(format!("p={p} must lie in [0, 1-1/{q})")));
        }
        Ok(Self { n, q, radius: p.floor_mul(n), p: Some(p) })
    }

    pub fn with_radius(n: usize, radius: usize, q: usize) -> Result<Self> {
        if radius > n {
            return Err(invalid(format!("radius {radius} exceeds length {n}")));
        }
        Ok(Self { n, q, radius, p: None })
    }

    pub fn volume(&self) -> BigUint {
        ball_volume(self.n, self.radius, self.q).expect("radius validated")
    }
}

fn binomial_row(n: usize, upto: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(upto + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for i in 1..=upto {
        c = c * BigUint::from(n - i + 1) / BigUint::from(i);
        row.push(c.clone());
    }
    row
}

/// Exact sizes of the weight classes `C(n,i)(q-1)^i` for `i = 0..=r`.
pub fn weight_class_sizes(n: usize, r: usize, q: usize) -> Result<Vec<BigUint>> {
    if r > n {
        return Err(invalid(format!("radius {r} exceeds length {n}")));
    }
    if q < 2 {
        return Err(invalid(format!("q={q} must be at least 2")));
    }
    let mut pow = BigUint::one();
    let base = BigUint::from(q - 1);
    Ok(binomial_row(n, r)
        .into_iter()
        .map(|c| {
            let term = c * &pow;
            pow *= &base;
            term
        })
        .collect())
}

/// `Σ_{i≤r} C(n,i)(q-1)^i`, exactly.
pub fn ball_volume(n: usize, r: usize, q: usize) -> Result<BigUint> {
    Ok(weight_class_sizes(n, r, q)?.into_iter().sum())
}

/// Uniform integer in `[0, bound)` by rejection on the bit length of `bound`.
fn uniform_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    debug_assert!(!bound.is_zero());
    let bits = bound.bits();
    let nbytes = bits.div_ceil(8) as usize;
    let spare = (nbytes as u64 * 8 - bits) as u32;
    let mut buf = vec![0u8; nbytes];
    loop {
        rng.fill_bytes(&mut buf);
        // little-endian: the last byte is the most significant
        if let Some(top) = buf.last_mut() {
            *top &= 0xFF >> spare;
        }
        let x = BigUint::from_bytes_le(&buf);
        if &x < bound {
            return x;
        }
    }
}

enum Cumulative {
    Small(Vec<u128>),
    Big(Vec<BigUint>),
}

/// Exact uniform sampler over `B_n^q(0, r)`. Building it costs one pass of
/// big-integer arithmetic; each draw afterwards is cheap.
pub struct BallSampler {
    field: Field,
    n: usize,
    radius: usize,
    cumulative: Cumulative,
}

impl BallSampler {
    pub fn new(spec: &BallSpec) -> Result<Self> {
        let field = Field::new(spec.q)?;
        let sizes = weight_class_sizes(spec.n, spec.radius, spec.q)?;
        let mut acc = BigUint::zero();
        let cum: Vec<BigUint> = sizes
            .into_iter()
            .map(|s| {
                acc += s;
                acc.clone()
            })
            .collect();
        let cumulative = if acc.bits() <= 127 {
            Cumulative::Small(cum.iter().map(|c| c.to_u128().expect("fits")).collect())
        } else {
            Cumulative::Big(cum)
        };
        Ok(Self { field, n: spec.n, radius: spec.radius, cumulative })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    fn draw_weight<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.cumulative {
            Cumulative::Small(cum) => {
                let t = rng.random_range(0..*cum.last().expect("nonempty"));
                cum.partition_point(|&c| c <= t)
            }
            Cumulative::Big(cum) => {
                let t = uniform_below(cum.last().expect("nonempty"), rng);
                cum.partition_point(|c| c <= &t)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> VecQ {
        let w = self.draw_weight(rng);
        let mut v = VecQ::zero(&self.field, self.n);
        let q = self.field.q() as u8;
        for i in rand::seq::index::sample(rng, self.n, w) {
            v.set(i, rng.random_range(1..q));
        }
        v
    }
}

/// One uniform draw from `B_n^q(0, ⌊pn⌋)`.
pub fn sample_ball_uniform<R: Rng + ?Sized>(spec: &BallSpec, rng: &mut R) -> Result<VecQ> {
    Ok(BallSampler::new(spec)?.sample(rng))
}

/// Visits every vector of weight at most `radius` exactly once.
pub fn for_each_ball_point<F: FnMut(&VecQ)>(field: &Field, n: usize, radius: usize, mut f: F) {
    fn rec<F: FnMut(&VecQ)>(v: &mut VecQ, start: usize, left: usize, q: u8, f: &mut F) {
        f(v);
        if left == 0 {
            return;
        }
        for i in start..v.len() {
            for a in 1..q {
                v.set(i, a);
                rec(v, i + 1, left - 1, q, f);
            }
            v.set(i, 0);
        }
    }
    let mut v = VecQ::zero(field, n);
    rec(&mut v, 0, radius.min(n), field.q() as u8, &mut f);
}

/// All points of `B_n^q(0, radius)`, refused when the ball exceeds the enumeration budget.
pub fn ball_points(field: &Field, n: usize, radius: usize) -> Result<Vec<VecQ>> {
    let vol = ball_volume(n, radius, field.q())?;
    if vol > BigUint::from(ENUMERATION_BUDGET) {
        return Err(Error::Resource(format!(
            "ball of radius {radius} in F_{}^{n} has {vol} points (budget {ENUMERATION_BUDGET})",
            field.q()
        )));
    }
    let mut out = Vec::with_capacity(vol.to_usize().unwrap_or(0));
    for_each_ball_point(field, n, radius, |v| out.push(v.clone()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStream;
    use std::collections::HashMap;

    #[test]
    fn entropy_examples() {
        assert!((entropy_q(0.5, 2).unwrap() - 1.0).abs() < 1e-12);
        for q in [2usize, 3, 4, 5] {
            let cap = 1.0 - 1.0 / q as f64;
            assert!((entropy_q(cap, q).unwrap() - 1.0).abs() < 1e-12, "q={q}");
        }
        // -0.2 log2 0.2 - 0.8 log2 0.8 evaluated independently to 12 digits
        assert!((entropy_q(0.2, 2).unwrap() - 0.721_928_094_887).abs() < 1e-9);
        assert_eq!(entropy_q(0.0, 3).unwrap(), 0.0);
        assert!((entropy_q(1.0, 3).unwrap() - 3f64.ln().recip() * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn entropy_domain_errors() {
        assert!(matches!(entropy_q(-0.1, 2), Err(Error::Domain(_))));
        assert!(matches!(entropy_q(1.5, 2), Err(Error::Domain(_))));
        assert!(matches!(entropy_q(f64::NAN, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn entropy_concave_with_peak_at_capacity() {
        for q in [2usize, 3, 4, 5, 16] {
            let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
            let h: Vec<f64> = grid.iter().map(|&x| entropy_q(x, q).unwrap()).collect();
            for i in 1..grid.len() - 1 {
                assert!(h[i] + 1e-9 >= (h[i - 1] + h[i + 1]) / 2.0, "q={q} x={}", grid[i]);
            }
            let peak = entropy_q(1.0 - 1.0 / q as f64, q).unwrap();
            assert!(h.iter().all(|&v| v <= peak + 1e-9));
        }
    }

    #[test]
    fn fraction_parsing_is_exact() {
        let a: Fraction = "0.2".parse().unwrap();
        let b: Fraction = "1/5".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.floor_mul(10), 2);
        assert_eq!(b.floor_mul(10), 2);
        assert_eq!("3".parse::<Fraction>().unwrap().floor_mul(2), 6);
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("abc".parse::<Fraction>().is_err());
        assert!("-0.1".parse::<Fraction>().is_err());
        assert!(".".parse::<Fraction>().is_err());
    }

    #[test]
    fn ball_spec_validation() {
        let p: Fraction = "1/4".parse().unwrap();
        let spec = BallSpec::from_fraction(10, p, 2).unwrap();
        assert_eq!(spec.radius, 2);
        assert!(BallSpec::from_fraction(10, "1/2".parse().unwrap(), 2).is_err());
        assert!(BallSpec::from_fraction(10, "0.6".parse().unwrap(), 3).is_ok());
        assert!(BallSpec::with_radius(4, 5, 2).is_err());
    }

    #[test]
    fn volume_examples() {
        assert_eq!(ball_volume(4, 0, 2).unwrap(), BigUint::from(1u32));
        assert_eq!(ball_volume(4, 1, 3).unwrap(), BigUint::from(9u32));
        assert_eq!(ball_volume(10, 3, 2).unwrap(), BigUint::from(176u32));
        assert!(ball_volume(3, 4, 2).is_err());
    }

    #[test]
    fn full_ball_is_whole_space_and_monotone() {
        for q in 2..=5usize {
            for n in 0..=20usize {
                assert_eq!(ball_volume(n, n, q).unwrap(), BigUint::from(q).pow(n as u32));
                for r in 1..=n {
                    assert!(ball_volume(n, r, q).unwrap() >= ball_volume(n, r - 1, q).unwrap());
                    assert!(ball_volume(n + 1, r, q).unwrap() >= ball_volume(n, r, q).unwrap());
                }
            }
        }
    }

    #[test]
    fn volume_matches_brute_force() {
        for q in [2usize, 3] {
            for n in 0..=10usize {
                let mut by_weight = vec![0u64; n + 1];
                for idx in 0..q.pow(n as u32) {
                    let (mut x, mut w) = (idx, 0);
                    for _ in 0..n {
                        w += (x % q != 0) as usize;
                        x /= q;
                    }
                    by_weight[w] += 1;
                }
                let mut acc = 0u64;
                for r in 0..=n {
                    acc += by_weight[r];
                    assert_eq!(ball_volume(n, r, q).unwrap(), BigUint::from(acc), "n={n} r={r} q={q}");
                }
            }
        }
    }

    #[test]
    fn enumeration_visits_each_point_once() {
        for q in [2usize, 3, 4] {
            let f = Field::new(q).unwrap();
            let pts = ball_points(&f, 6, 2).unwrap();
            let set: std::collections::HashSet<_> = pts.iter().cloned().collect();
            assert_eq!(set.len(), pts.len());
            assert_eq!(BigUint::from(pts.len()), ball_volume(6, 2, q).unwrap());
            assert!(pts.iter().all(|v| v.weight() <= 2));
        }
        let f2 = Field::new(2).unwrap();
        assert!(matches!(ball_points(&f2, 60, 30), Err(Error::Resource(_))));
    }

    #[test]
    fn sampler_respects_radius() {
        let s = SeedStream::new(5);
        let zero = BallSampler::new(&BallSpec::with_radius(30, 0, 3).unwrap()).unwrap();
        let sp = BallSampler::new(&BallSpec::with_radius(30, 7, 5).unwrap()).unwrap();
        let mut rng = s.rng(0);
        for _ in 0..2000 {
            assert_eq!(zero.sample(&mut rng).weight(), 0);
            let v = sp.sample(&mut rng);
            assert!(v.weight() <= 7);
            assert_eq!(v.len(), 30);
        }
    }

    #[test]
    fn big_integer_path_stays_in_radius() {
        // volume far beyond 2^127 forces the arbitrary-precision branch
        let spec = BallSpec::with_radius(400, 120, 4).unwrap();
        assert!(spec.volume().bits() > 127);
        let sampler = BallSampler::new(&spec).unwrap();
        let mut rng = SeedStream::new(1).rng(0);
        for _ in 0..200 {
            assert!(sampler.sample(&mut rng).weight() <= 120);
        }
    }

    #[test]
    fn every_ball_point_equally_likely() {
        let (n, r) = (8usize, 2usize);
        let spec = BallSpec::with_radius(n, r, 2).unwrap();
        let vol = spec.volume().to_u64().unwrap() as f64;
        let sampler = BallSampler::new(&spec).unwrap();
        let draws = 1_000_000u64;
        let mut counts: HashMap<VecQ, u64> = HashMap::new();
        let mut rng = SeedStream::new(2024).rng(0);
        for _ in 0..draws {
            *counts.entry(sampler.sample(&mut rng)).or_default() += 1;
        }
        assert_eq!(counts.len() as f64, vol);
        let p = 1.0 / vol;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for (v, c) in counts {
            assert!((c as f64 - draws as f64 * p).abs() <= 5.0 * sigma, "{v:?}: {c}");
        }
    }
}

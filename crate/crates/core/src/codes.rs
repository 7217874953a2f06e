//! Linear codes over `F_q` given by generator matrices, span enumeration,
//! and list-decodability checkers (exact and Monte Carlo).
//!
//! Generator matrices serialize as text: a header line `q n k` followed by
//! `k` rows of `n` digits each (`0-9a-f`, no separators).

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gfq::{Field, VecQ};
use crate::hamming::{ball_points, ball_volume, BallSampler, BallSpec, ENUMERATION_BUDGET};
use crate::par;
use crate::rng::SeedStream;

/// Largest number of spanning vectors `span_set` accepts.
pub const MAX_SPAN_VECTORS: usize = 24;

/// A linear code: the row space of a `k × n` generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    field: Field,
    n: usize,
    generator: Vec<VecQ>,
    full_rank: bool,
}

/// Rank of a list of vectors (as matrix rows) by Gaussian elimination.
pub fn rank(vectors: &[VecQ]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let f = first.field().clone();
    let n = first.len();
    let mut rows: Vec<Vec<u8>> = vectors.iter().map(VecQ::digits).collect();
    let mut r = 0;
    for col in 0..n {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = f.inv(rows[r][col]).expect("nonzero pivot");
        let pivot_row: Vec<u8> = rows[r].iter().map(|&x| f.mul(inv, x)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

fn check_shared(field: &Field, n: usize, vectors: &[VecQ]) -> Result<()> {
    for v in vectors {
        if v.len() != n || v.field() != field {
            return Err(invalid(format!(
                "vector of length {} over {:?} in a family of length {n} over {field:?}",
                v.len(),
                v.field()
            )));
        }
    }
    Ok(())
}

/// `{Σ a_i X_i : a ∈ F_q^ℓ}`, deduplicated and sorted. An empty family spans `{0}`.
pub fn span_set(field: &Field, n: usize, vectors: &[VecQ]) -> Result<Vec<VecQ>> {
    check_shared(field, n, vectors)?;
    let q = field.q() as u128;
    let total = q.checked_pow(vectors.len() as u32).unwrap_or(u128::MAX);
    if vectors.len() > MAX_SPAN_VECTORS || total > ENUMERATION_BUDGET {
        return Err(Error::Resource(format!(
            "span of {} vectors over F_{q} has up to {q}^{} combinations (budget {ENUMERATION_BUDGET})",
            vectors.len(),
            vectors.len()
        )));
    }
    // multiples[i][a] = a · X_i
    let multiples: Vec<Vec<VecQ>> = vectors
        .iter()
        .map(|v| field.elements().map(|a| v.scale(a)).collect())
        .collect();
    let mut seen = HashSet::with_capacity(total as usize);
    fn rec(i: usize, acc: &VecQ, multiples: &[Vec<VecQ>], seen: &mut HashSet<VecQ>) {
        if i == multiples.len() {
            seen.insert(acc.clone());
            return;
        }
        for m in &multiples[i] {
            let next = acc.add(m).expect("shared shape");
            rec(i + 1, &next, multiples, seen);
        }
    }
    rec(0, &VecQ::zero(field, n), &multiples, &mut seen);
    let mut out: Vec<VecQ> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

impl Code {
    pub fn new(field: &Field, n: usize, generator: Vec<VecQ>) -> Result<Code> {
        if generator.len() > n {
            return Err(invalid(format!("dimension {} exceeds length {n}", generator.len())));
        }
        check_shared(field, n, &generator)?;
        let full_rank = rank(&generator) == generator.len();
        Ok(Code { field: field.clone(), n, generator, full_rank })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[VecQ] {
        &self.generator
    }

    /// Whether the generator rows are linearly independent.
    pub fn full_rank(&self) -> bool {
        self.full_rank
    }

    pub fn rank(&self) -> usize {
        rank(&self.generator)
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    /// `m · G`.
    pub fn encode(&self, message: &[u8]) -> Result<VecQ> {
        crate::gfq::linear_combination(&self.field, self.n, message, &self.generator)
    }

    /// Every codeword, sorted. Refused when `q^k` exceeds the enumeration budget.
    pub fn codewords(&self) -> Result<Vec<VecQ>> {
        span_set(&self.field, self.n, &self.generator)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.field.q(), self.n, self.k());
        for row in &self.generator {
            let _ = writeln!(s, "{row}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Code> {
        let mut lines = text.lines().map(str::trim_end);
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [q, n, k] = nums[..] else {
            return Err(Error::Parse(format!("header {header:?} is not `q n k`")));
        };
        let field = Field::new(q)?;
        let mut rows = Vec::with_capacity(k);
        for i in 0..k {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing generator row {}", i + 1)))?;
            let row = VecQ::parse(&field, line)?;
            if row.len() != n {
                return Err(Error::Parse(format!("row {} has {} digits, expected {n}", i + 1, row.len())));
            }
            rows.push(row);
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after generator rows".into()));
        }
        Code::new(&field, n, rows)
    }
}

/// Random `k × n` generator with i.i.d. uniform entries; with `full_rank`
/// the matrix is redrawn until its rows are independent.
pub fn random_code<R: Rng + ?Sized>(n: usize, k: usize, q: usize, full_rank: bool, rng: &mut R) -> Result<Code> {
    if k > n {
        return Err(invalid(format!("dimension k={k} exceeds length n={n}")));
    }
    let field = Field::new(q)?;
    loop {
        let rows: Vec<VecQ> = (0..k)
            .map(|_| {
                let digits: Vec<u8> = (0..n).map(|_| rng.random_range(0..q as u8)).collect();
                VecQ::from_digits(&field, &digits).expect("digits below q")
            })
            .collect();
        let code = Code::new(&field, n, rows)?;
        if code.full_rank || !full_rank {
            return Ok(code);
        }
    }
}

/// Number of `codewords` within distance `radius` of `center`.
pub fn list_size_at(codewords: &[VecQ], center: &VecQ, radius: usize) -> usize {
    codewords.iter().filter(|c| c.distance_unchecked(center) <= radius).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    /// Candidate-restricted if affordable, otherwise exhaustive.
    Auto,
    /// Every center of `F_q^n`.
    Exhaustive,
    /// Only centers within the radius of some codeword.
    Candidates,
}

/// Outcome of an exact list-size computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdVerdict {
    pub radius: usize,
    /// Largest `|B(x, radius) ∩ C|` over inspected centers.
    pub l_max: usize,
    /// Lexicographically smallest center attaining `l_max`.
    pub witness_center: VecQ,
    pub centers_inspected: u128,
    pub exhaustive: bool,
}

impl LdVerdict {
    /// `(p, L)`-list-decodable iff no ball holds more than `L` codewords.
    pub fn is_list_decodable(&self, list_size: usize) -> bool {
        self.l_max <= list_size
    }
}

/// Position of `v` in lexicographic order of `F_q^n` (coordinate 0 most significant).
fn lex_index(v: &VecQ) -> usize {
    let q = v.field().q();
    (0..v.len()).fold(0, |acc, i| acc * q + v.get(i) as usize)
}

fn from_lex_index(field: &Field, n: usize, mut idx: usize) -> VecQ {
    let q = field.q();
    let mut v = VecQ::zero(field, n);
    for i in (0..n).rev() {
        v.set(i, (idx % q) as u8);
        idx /= q;
    }
    v
}

fn space_size(q: usize, n: usize) -> u128 {
    (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// Exact maximum list size at radius `radius`.
///
/// Exhaustive mode scans all `q^n` centers. Candidate mode only inspects
/// centers of the form `c + e` with `c` a codeword and `weight(e) ≤ radius`;
/// every center with a nonempty list is of that form, so both modes return
/// the same `l_max` and witness.
pub fn check_ld_exact(code: &Code, radius: usize, mode: CheckMode) -> Result<LdVerdict> {
    let n = code.n;
    if radius > n {
        return Err(invalid(format!("radius {radius} exceeds length {n}")));
    }
    let q = code.field.q();
    let words = code.codewords().map_err(|_| {
        Error::Resource(format!(
            "code has {q}^{} codewords; use the Monte Carlo checker",
            code.rank()
        ))
    })?;
    let candidate_work = BigUint::from(words.len()) * ball_volume(n, radius, q)?;
    let candidates_ok = candidate_work <= BigUint::from(ENUMERATION_BUDGET * 4);
    let exhaustive_ok = space_size(q, n) <= ENUMERATION_BUDGET;
    let use_candidates = match mode {
        CheckMode::Candidates => true,
        CheckMode::Exhaustive => false,
        CheckMode::Auto => candidates_ok || !exhaustive_ok,
    };
    if use_candidates && !candidates_ok {
        return Err(Error::Resource(format!(
            "{candidate_work} candidate centers exceed the budget; use the Monte Carlo checker"
        )));
    }
    if !use_candidates && !exhaustive_ok {
        return Err(Error::Resource(format!(
            "{q}^{n} centers exceed the budget of {ENUMERATION_BUDGET}; use the Monte Carlo checker"
        )));
    }
    if use_candidates {
        Ok(candidate_scan(code, &words, radius))
    } else {
        Ok(exhaustive_scan(code, &words, radius))
    }
}

fn exhaustive_scan(code: &Code, words: &[VecQ], radius: usize) -> LdVerdict {
    let total = space_size(code.field.q(), code.n) as usize;
    let field = &code.field;
    let n = code.n;
    let best = par::map_chunks(total, 4096, |range| {
        let mut best = (0usize, usize::MAX);
        for idx in range {
            let x = from_lex_index(field, n, idx);
            let count = list_size_at(words, &x, radius);
            if count > best.0 {
                best = (count, idx);
            }
        }
        best
    })
    .into_iter()
    .fold((0usize, usize::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    LdVerdict {
        radius,
        l_max: best.0,
        witness_center: from_lex_index(field, n, best.1),
        centers_inspected: total as u128,
        exhaustive: true,
    }
}

fn candidate_scan(code: &Code, words: &[VecQ], radius: usize) -> LdVerdict {
    let field = &code.field;
    let n = code.n;
    let offsets = ball_points(field, n, radius).expect("within candidate budget");
    let dense = space_size(field.q(), n) <= ENUMERATION_BUDGET;
    let (l_max, witness, inspected) = if dense {
        let mut counts = vec![0u32; space_size(field.q(), n) as usize];
        for c in words {
            for e in &offsets {
                counts[lex_index(&c.add(e).expect("shared shape"))] += 1;
            }
        }
        let inspected = counts.iter().filter(|&&c| c > 0).count();
        let (idx, &max) = counts
            .iter()
            .enumerate()
            .rev()
            .max_by_key(|(_, &c)| c)
            .expect("nonempty space");
        (max as usize, from_lex_index(field, n, idx), inspected)
    } else {
        let mut counts: HashMap<VecQ, u32> = HashMap::new();
        for c in words {
            for e in &offsets {
                *counts.entry(c.add(e).expect("shared shape")).or_default() += 1;
            }
        }
        let max = counts.values().copied().max().unwrap_or(0);
        let witness = counts
            .iter()
            .filter(|(_, &c)| c == max)
            .map(|(v, _)| v)
            .min()
            .cloned()
            .expect("at least one codeword");
        (max as usize, witness, counts.len())
    };
    LdVerdict {
        radius,
        l_max,
        witness_center: witness,
        centers_inspected: inspected as u128,
        exhaustive: false,
    }
}

/// List sizes observed at sampled centers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McListSizes {
    pub counts: Vec<usize>,
    pub max: usize,
}

/// Monte Carlo list-size sampling. Each trial's center is a uniformly random
/// codeword plus a uniform point of `B(0, radius)`, so every count is ≥ 1.
/// Trial `t` draws from `seeds.rng(t)`.
pub fn check_ld_montecarlo(code: &Code, radius: usize, trials: usize, seeds: SeedStream) -> Result<McListSizes> {
    if trials == 0 {
        return Err(invalid("Monte Carlo checker needs at least one trial"));
    }
    let words = code.codewords()?;
    let sampler = BallSampler::new(&BallSpec::with_radius(code.n, radius, code.field.q())?)?;
    let q = code.field.q() as u8;
    let counts = par::map_range(trials, |t| {
        let mut rng = seeds.rng(t as u64);
        let msg: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..q)).collect();
        let center = code.encode(&msg).expect("message length k").add(&sampler.sample(&mut rng)).expect("shape");
        list_size_at(&words, &center, radius)
    });
    let max = counts.iter().copied().max().unwrap_or(0);
    Ok(McListSizes { counts, max })
}

/// `q^rank` as an exact count.
pub fn code_size(code: &Code) -> u128 {
    space_size(code.field.q(), code.rank())
}

/// Ball volume as a `usize`, when it fits.
pub fn volume_usize(n: usize, r: usize, q: usize) -> Option<usize> {
    ball_volume(n, r, q).ok()?.to_usize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert_eq, proptest, ProptestConfig};

    fn f(q: usize) -> Field {
        Field::new(q).unwrap()
    }

    fn repetition(n: usize) -> Code {
        let f2 = f(2);
        Code::new(&f2, n, vec![VecQ::from_digits(&f2, &vec![1; n]).unwrap()]).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f3 = f(3);
        let a = VecQ::parse(&f3, "120").unwrap();
        let b = a.scale(2);
        let c = VecQ::parse(&f3, "011").unwrap();
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[a.clone(), b.clone()]), 1);
        assert_eq!(rank(&[a, b, c]), 2);
    }

    #[test]
    fn random_code_extremes() {
        let mut rng = SeedStream::new(1).rng(0);
        let zero = random_code(6, 0, 2, true, &mut rng).unwrap();
        assert_eq!(zero.codewords().unwrap(), vec![VecQ::zero(&f(2), 6)]);
        let full = random_code(6, 6, 3, true, &mut rng).unwrap();
        assert_eq!(full.codewords().unwrap().len(), 729);
        assert!(random_code(3, 4, 2, true, &mut rng).is_err());
    }

    #[test]
    fn full_rank_draws_have_rank_k() {
        let s = SeedStream::new(99);
        for t in 0..1000 {
            let code = random_code(20, 10, 3, true, &mut s.rng(t)).unwrap();
            assert!(code.full_rank());
            assert_eq!(code.rank(), 10);
        }
    }

    #[test]
    fn span_examples() {
        let f2 = f(2);
        let v = VecQ::parse(&f2, "0110").unwrap();
        assert_eq!(span_set(&f2, 4, &[v.clone()]).unwrap(), vec![VecQ::zero(&f2, 4), v.clone()]);
        assert_eq!(span_set(&f2, 4, &[v.clone(), v.clone()]).unwrap().len(), 2);
        assert_eq!(span_set(&f2, 4, &[]).unwrap(), vec![VecQ::zero(&f2, 4)]);
        for q in [2usize, 3, 4] {
            let fq = f(q);
            let basis: Vec<VecQ> = (0..4)
                .map(|i| {
                    let mut e = VecQ::zero(&fq, 4);
                    e.set(i, 1);
                    e
                })
                .collect();
            assert_eq!(span_set(&fq, 4, &basis).unwrap().len(), q.pow(4));
        }
    }

    #[test]
    fn span_budget_is_a_refusal() {
        let f3 = f(3);
        let vs = vec![VecQ::zero(&f3, 4); 16];
        assert!(matches!(span_set(&f3, 4, &vs), Err(Error::Resource(_))));
        let f2 = f(2);
        assert!(matches!(span_set(&f2, 4, &vec![VecQ::zero(&f2, 4); 25]), Err(Error::Resource(_))));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let mut rng = SeedStream::new(3).rng(0);
        for q in [2usize, 3, 11, 16] {
            let code = random_code(9, 4, q, false, &mut rng).unwrap();
            let text = code.to_text();
            let back = Code::from_text(&text).unwrap();
            assert_eq!(back, code);
            assert_eq!(back.to_text(), text);
        }
        assert!(Code::from_text("2 3 1\n10\n").is_err());
        assert!(Code::from_text("2 3 2\n101\n").is_err());
        assert!(Code::from_text("6 3 1\n101\n").is_err());
        assert!(Code::from_text("2 3\n").is_err());
        assert!(Code::from_text("2 3 1\n121\n").is_err());
        assert!(Code::from_text("2 3 1\n101\n111\n").is_err());
    }

    #[test]
    fn repetition_code_lists() {
        for n in [5usize, 7, 9] {
            let code = repetition(n);
            let r = (n - 1) / 2;
            for mode in [CheckMode::Exhaustive, CheckMode::Candidates] {
                let v = check_ld_exact(&code, r, mode).unwrap();
                assert_eq!(v.l_max, 1);
                assert!(v.is_list_decodable(1));
            }
        }
        let v = check_ld_exact(&repetition(7), 1, CheckMode::Auto).unwrap();
        assert_eq!(v.l_max, 1);
    }

    #[test]
    fn whole_space_sees_the_ball() {
        let f2 = f(2);
        let basis: Vec<VecQ> = (0..8)
            .map(|i| {
                let mut e = VecQ::zero(&f2, 8);
                e.set(i, 1);
                e
            })
            .collect();
        let code = Code::new(&f2, 8, basis).unwrap();
        for r in 0..=3 {
            let v = check_ld_exact(&code, r, CheckMode::Exhaustive).unwrap();
            assert_eq!(v.l_max, volume_usize(8, r, 2).unwrap());
        }
    }

    #[test]
    fn two_bit_space_radius_one() {
        let f2 = f(2);
        let code = Code::new(&f2, 2, vec![VecQ::parse(&f2, "10").unwrap(), VecQ::parse(&f2, "01").unwrap()]).unwrap();
        let v = check_ld_exact(&code, "1/2".parse::<crate::Fraction>().unwrap().floor_mul(2), CheckMode::Exhaustive).unwrap();
        assert_eq!(v.l_max, 3);
        assert_eq!(v.witness_center, VecQ::parse(&f2, "00").unwrap());
        assert_eq!(v.centers_inspected, 4);
    }

    #[test]
    fn witness_attains_l_max() {
        let s = SeedStream::new(8);
        for t in 0..20 {
            let code = random_code(10, 3, 3, true, &mut s.rng(t)).unwrap();
            let v = check_ld_exact(&code, 3, CheckMode::Auto).unwrap();
            let words = code.codewords().unwrap();
            assert_eq!(list_size_at(&words, &v.witness_center, 3), v.l_max);
        }
    }

    #[test]
    fn modes_agree_on_random_codes() {
        let s = SeedStream::new(21);
        for t in 0..50u64 {
            let mut rng = s.rng(t);
            let n = rng.random_range(4..=12);
            let k = rng.random_range(1..=n.min(6));
            let r = rng.random_range(0..=n / 2);
            let code = random_code(n, k, 2, true, &mut rng).unwrap();
            let a = check_ld_exact(&code, r, CheckMode::Exhaustive).unwrap();
            let b = check_ld_exact(&code, r, CheckMode::Candidates).unwrap();
            assert_eq!((a.l_max, &a.witness_center), (b.l_max, &b.witness_center), "n={n} k={k} r={r}");
            assert!(a.exhaustive && !b.exhaustive);
        }
    }

    #[test]
    fn translation_invariance() {
        let s = SeedStream::new(5);
        for t in 0..30 {
            let mut rng = s.rng(t);
            let code = random_code(12, 4, 3, true, &mut rng).unwrap();
            let words = code.codewords().unwrap();
            let digits: Vec<u8> = (0..12).map(|_| rng.random_range(0..3)).collect();
            let x = VecQ::from_digits(code.field(), &digits).unwrap();
            let c = &words[rng.random_range(0..words.len())];
            let shifted = x.add(c).unwrap();
            for r in 0..5 {
                assert_eq!(list_size_at(&words, &x, r), list_size_at(&words, &shifted, r));
            }
        }
    }

    #[test]
    fn resource_refusals() {
        let mut rng = SeedStream::new(0).rng(0);
        let big = random_code(40, 20, 3, true, &mut rng).unwrap();
        assert!(matches!(check_ld_exact(&big, 2, CheckMode::Auto), Err(Error::Resource(_))));
        let wide = repetition(40);
        assert!(matches!(check_ld_exact(&wide, 15, CheckMode::Exhaustive), Err(Error::Resource(_))));
        assert!(matches!(check_ld_exact(&wide, 15, CheckMode::Candidates), Err(Error::Resource(_))));
        assert!(matches!(check_ld_montecarlo(&big, 2, 10, SeedStream::new(1)), Err(Error::Resource(_))));
    }

    #[test]
    fn montecarlo_basics() {
        let code = repetition(9);
        let mc = check_ld_montecarlo(&code, 4, 500, SeedStream::new(4)).unwrap();
        assert!(mc.counts.iter().all(|&c| c == 1));
        let mut rng = SeedStream::new(6).rng(0);
        let code = random_code(14, 5, 2, true, &mut rng).unwrap();
        let mc = check_ld_montecarlo(&code, 3, 500, SeedStream::new(4)).unwrap();
        assert!(mc.counts.iter().all(|&c| c >= 1));
        let exact = check_ld_exact(&code, 3, CheckMode::Auto).unwrap();
        assert!(mc.max <= exact.l_max);
        assert!(check_ld_montecarlo(&code, 3, 0, SeedStream::new(4)).is_err());
    }

    #[test]
    fn montecarlo_usually_finds_the_maximum() {
        let s = SeedStream::new(314);
        let mut hits = 0;
        for t in 0..100u64 {
            let code = random_code(14, 3, 2, true, &mut s.derive(1).rng(t)).unwrap();
            let exact = check_ld_exact(&code, 2, CheckMode::Auto).unwrap();
            let mc = check_ld_montecarlo(&code, 2, 1000, s.derive(2).derive(t)).unwrap();
            hits += (mc.max == exact.l_max) as usize;
        }
        assert!(hits >= 90, "{hits}/100");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn span_size_is_q_to_the_rank(qi in 0usize..4, seed in any::<u64>(), len in 0usize..6) {
            let q = [2usize, 3, 4, 5][qi];
            let fq = f(q);
            let mut rng = SeedStream::new(seed).rng(0);
            let n = rng.random_range(1..7);
            let vs: Vec<VecQ> = (0..len)
                .map(|_| {
                    let d: Vec<u8> = (0..n).map(|_| if rng.random_bool(0.5) { 0 } else { rng.random_range(0..q as u8) }).collect();
                    VecQ::from_digits(&fq, &d).unwrap()
                })
                .collect();
            let span = span_set(&fq, n, &vs).unwrap();
            prop_assert_eq!(span.len(), q.pow(rank(&vs) as u32));
        }
    }
}

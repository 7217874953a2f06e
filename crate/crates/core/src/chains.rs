//! Constructive shattering sets and increasing chains over `F_q^ℓ`.
//!
//! [`shatter_find`] locates a set `U` of `c` coordinates such that every
//! pattern `u ∈ F_q^U` is avoided coordinatewise by some member of `S`
//! (for `q = 2` this is ordinary Sauer–Shelah shattering). It is guaranteed
//! to succeed once `|S| > 2((q-1)ℓ)^(c-1)`.
//!
//! [`chain_find`] builds a translate `w` and a `c`-increasing chain in `S + w`
//! of length at least `(1/c)·log_q(|S|/2) - (1 - 1/c)·log_q((q-1)ℓ)`.
//! [`longest_chain_oracle`] certifies chains by exact search.
//!
//! Text formats (digit strings use `0-9a-f`, coordinates are 0-based):
//!
//! ```text
//! vector set        chain                 shatter witness
//! q ell             q ell c d             q ell c
//! <vector>          <translate w>         <U: indices separated by spaces>
//! ...               <member 1>            <u> <v>      (one line per u ∈ F_q^U,
//!                   ...                   ...           lexicographic in u)
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gfq::{Field, VecQ};

/// Largest ambient dimension for the exact chain oracle.
pub const ORACLE_MAX_ELL: usize = 20;
/// Largest `q^ℓ` for the translate scan.
pub const TRANSLATE_SCAN_BUDGET: u64 = 1 << 16;

/// A translate `w` and a `c`-increasing chain `v_1, …, v_d` of `S + w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub ell: usize,
    pub c: usize,
    pub translate: VecQ,
    /// Elements of `S` (untranslated), in chain order.
    pub members: Vec<VecQ>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn verify(&self) -> bool {
        chain_verify(&self.translate, &self.members, self.c)
    }

    pub fn to_text(&self) -> String {
        let q = self.translate.field().q();
        let mut s = format!("{q} {} {} {}\n{}\n", self.ell, self.c, self.len(), self.translate);
        for v in &self.members {
            let _ = writeln!(s, "{v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Chain> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty chain file".into()))?;
        let [q, ell, c, d] = parse_header::<4>(header)?;
        let field = Field::new(q)?;
        let mut read = |what: &str| -> Result<VecQ> {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
            let v = VecQ::parse(&field, line)?;
            if v.len() != ell {
                return Err(Error::Parse(format!("{what} {line:?} does not have {ell} digits")));
            }
            Ok(v)
        };
        let translate = read("translate")?;
        let members = (0..d).map(|i| read(&format!("member {}", i + 1))).collect::<Result<_>>()?;
        if lines.next().is_some() {
            return Err(Error::Parse("trailing content after chain members".into()));
        }
        Ok(Chain { ell, c, translate, members })
    }
}

/// Coordinates `U` plus, for every `u ∈ F_q^U`, a member of `S` whose
/// restriction to `U` differs from `u` everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterWitness {
    pub q: usize,
    pub ell: usize,
    pub coords: Vec<usize>,
    /// `(u, v)` pairs as digit strings, lexicographic in `u`.
    pub covering: Vec<(String, String)>,
}

impl ShatterWitness {
    /// Checks the covering map entry by entry against `set`.
    pub fn verify(&self, set: &[VecQ]) -> bool {
        let Ok(field) = Field::new(self.q) else {
            return false;
        };
        let c = self.coords.len();
        if self.coords.iter().any(|&i| i >= self.ell) || (self.q as u64).pow(c as u32) != self.covering.len() as u64 {
            return false;
        }
        let members: BTreeSet<&VecQ> = set.iter().collect();
        let mut seen = BTreeSet::new();
        for (u, v) in &self.covering {
            let (Ok(u), Ok(v)) = (VecQ::parse(&field, u), VecQ::parse(&field, v)) else {
                return false;
            };
            if u.len() != c || v.len() != self.ell || !members.contains(&v) || !seen.insert(u.clone()) {
                return false;
            }
            if self.coords.iter().enumerate().any(|(j, &i)| v.get(i) == u.get(j)) {
                return false;
            }
        }
        true
    }

    pub fn to_text(&self) -> String {
        let c = self.coords.len();
        let coords: Vec<String> = self.coords.iter().map(usize::to_string).collect();
        let mut s = format!("{} {} {c}\n{}\n", self.q, self.ell, coords.join(" "));
        for (u, v) in &self.covering {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<ShatterWitness> {
        let mut lines = text.lines().map(str::trim);
        let header = lines.next().ok_or_else(|| Error::Parse("empty witness file".into()))?;
        let [q, ell, c] = parse_header::<3>(header)?;
        let coord_line = lines.next().ok_or_else(|| Error::Parse("missing coordinate line".into()))?;
        let coords: Vec<usize> = coord_line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad coordinate {t:?}"))))
            .collect::<Result<_>>()?;
        if coords.len() != c {
            return Err(Error::Parse(format!("expected {c} coordinates, found {}", coords.len())));
        }
        let covering = lines
            .filter(|l| !l.is_empty())
            .map(|l| match l.split_whitespace().collect::<Vec<_>>()[..] {
                [u, v] => Ok((u.to_string(), v.to_string())),
                _ => Err(Error::Parse(format!("bad covering line {l:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(ShatterWitness { q, ell, coords, covering })
    }
}

fn parse_header<const N: usize>(line: &str) -> Result<[usize; N]> {
    let nums: Vec<usize> = line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {line:?}"))))
        .collect::<Result<_>>()?;
    nums.try_into()
        .map_err(|_| Error::Parse(format!("header {line:?} needs {N} fields")))
}

/// Reads a vector-set file: header `q ell`, then one digit string per line.
pub fn parse_vector_set(text: &str) -> Result<(Field, usize, Vec<VecQ>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty vector set".into()))?;
    let [q, ell] = parse_header::<2>(header)?;
    let field = Field::new(q)?;
    let vs = lines
        .map(|l| {
            let v = VecQ::parse(&field, l)?;
            if v.len() != ell {
                return Err(Error::Parse(format!("vector {l:?} does not have {ell} digits")));
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    Ok((field, ell, vs))
}

pub fn format_vector_set(field: &Field, ell: usize, set: &[VecQ]) -> String {
    let mut s = format!("{} {ell}\n", field.q());
    for v in set {
        let _ = writeln!(s, "{v}");
    }
    s
}

/// `2((q-1)ℓ)^(c-1)`, saturating.
pub fn shatter_threshold(q: usize, ell: usize, c: usize) -> u128 {
    if c == 0 {
        return 0;
    }
    (((q - 1) * ell) as u128)
        .checked_pow(c as u32 - 1)
        .and_then(|x| x.checked_mul(2))
        .unwrap_or(u128::MAX)
}

/// Length guaranteed for a set of size `l` in `F_q^ell`:
/// `(1/c)·log_q(l/2) - (1 - 1/c)·log_q((q-1)·ell)`.
pub fn chain_bound(q: usize, ell: usize, l: usize, c: usize) -> f64 {
    let lq = |x: f64| x.ln() / (q as f64).ln();
    let c = c as f64;
    lq(l as f64 / 2.0) / c - (1.0 - 1.0 / c) * lq(((q - 1) * ell) as f64)
}

/// Smallest integer at least [`chain_bound`] when the bound is positive, else 0.
pub fn guaranteed_chain_length(q: usize, ell: usize, l: usize, c: usize) -> usize {
    let b = chain_bound(q, ell, l, c);
    if b > 1e-9 {
        (b - 1e-9).ceil() as usize
    } else {
        0
    }
}

/// Deduplicated, lexicographically sorted digit rows; fails on mixed shapes.
fn rows_of(set: &[VecQ]) -> Result<(Field, usize, Vec<Vec<u8>>)> {
    let first = set.first().ok_or_else(|| invalid("empty vector set"))?;
    let (field, ell) = (first.field().clone(), first.len());
    if ell == 0 {
        return Err(invalid("vectors must have at least one coordinate"));
    }
    if let Some(v) = set.iter().find(|v| v.len() != ell || v.field() != &field) {
        return Err(invalid(format!("vector {v:?} does not match length {ell} over {field:?}")));
    }
    let rows: BTreeSet<Vec<u8>> = set.iter().map(VecQ::digits).collect();
    Ok((field, ell, rows.into_iter().collect()))
}

/// Induction on the last coordinate. Case 1 projects it away; case 2 keeps
/// prefixes extended by at least two symbols and adds the last coordinate to U.
fn find_coords(rows: &[Vec<u8>], m: usize, c: usize, q: usize) -> Option<Vec<usize>> {
    if rows.is_empty() || c > m {
        return None;
    }
    if c == 0 {
        return Some(Vec::new());
    }
    if c == 1 {
        return (0..m).find(|&i| rows.iter().any(|r| r[i] != rows[0][i])).map(|i| vec![i]);
    }
    let mut by_prefix: BTreeMap<&[u8], BTreeSet<u8>> = BTreeMap::new();
    for r in rows {
        by_prefix.entry(&r[..m - 1]).or_default().insert(r[m - 1]);
    }
    let s1: Vec<Vec<u8>> = by_prefix.keys().map(|p| p.to_vec()).collect();
    let s2: Vec<Vec<u8>> = by_prefix
        .iter()
        .filter(|(_, bs)| bs.len() >= 2)
        .map(|(p, _)| p.to_vec())
        .collect();

    let case1 = || find_coords(&s1, m - 1, c, q);
    let case2 = || {
        find_coords(&s2, m - 1, c - 1, q).map(|mut u| {
            u.push(m - 1);
            u
        })
    };
    let case1_sure = s1.len() as u128 > shatter_threshold(q, m - 1, c);
    let case2_sure = s2.len() as u128 > shatter_threshold(q, m - 1, c - 1);
    if case2_sure && !case1_sure {
        case2().or_else(case1)
    } else {
        case1().or_else(case2)
    }
}

fn restrict(row: &[u8], coords: &[usize]) -> Vec<u8> {
    coords.iter().map(|&i| row[i]).collect()
}

fn differs_everywhere(a: &[u8], b: &[u8]) -> bool {
    a.iter().zip(b).all(|(x, y)| x != y)
}

/// All of `F_q^m` in lexicographic order.
fn all_patterns(q: usize, m: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = q.pow(m as u32);
    (0..total).map(move |mut idx| {
        let mut digits = vec![0u8; m];
        for d in digits.iter_mut().rev() {
            *d = (idx % q) as u8;
            idx /= q;
        }
        digits
    })
}

/// Finds a q-ary shattered coordinate set of size `c`, or `None`.
/// Covering entries use the lexicographically smallest admissible member.
pub fn shatter_find(set: &[VecQ], c: usize) -> Option<ShatterWitness> {
    let (field, ell, rows) = rows_of(set).ok()?;
    let q = field.q();
    let coords = find_coords(&rows, ell, c, q)?;
    let mut covering = Vec::with_capacity(q.pow(c as u32));
    for u in all_patterns(q, c) {
        let v = rows.iter().find(|r| differs_everywhere(&restrict(r, &coords), &u))?;
        covering.push((digit_string(&u), digit_string(v)));
    }
    Some(ShatterWitness { q, ell, coords, covering })
}

fn digit_string(d: &[u8]) -> String {
    d.iter().map(|&x| crate::gfq::digit_char(x)).collect()
}

/// True iff every `u ∈ F_q^U` is avoided coordinatewise by some member of `set`.
pub fn shatter_verify(set: &[VecQ], coords: &[usize], q: usize) -> bool {
    if set.iter().any(|v| v.field().q() != q || coords.iter().any(|&i| i >= v.len())) {
        return false;
    }
    let restricted: Vec<Vec<u8>> = set.iter().map(|v| coords.iter().map(|&i| v.get(i)).collect()).collect();
    all_patterns(q, coords.len()).all(|u| restricted.iter().any(|r| differs_everywhere(r, &u)))
}

/// `(translate, chain members as row indices)` for `rows ⊆ F_q^m`.
fn build_chain(rows: &[Vec<u8>], m: usize, c: usize, field: &Field) -> (Vec<u8>, Vec<usize>) {
    let q = field.q();
    if rows.is_empty() || m < c {
        return (vec![0; m], Vec::new());
    }
    if let Some(coords) = find_coords(rows, m, c, q) {
        let rest: Vec<usize> = (0..m).filter(|i| !coords.contains(i)).collect();
        let mut groups: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        for (idx, r) in rows.iter().enumerate() {
            groups.entry(restrict(r, &coords)).or_default().push(idx);
        }
        // most populated pattern; BTreeMap order makes ties go to the smallest u0
        let (u0, block) = groups
            .iter()
            .fold(None::<(&Vec<u8>, &Vec<usize>)>, |best, (u, b)| match best {
                Some((_, bb)) if bb.len() >= b.len() => best,
                _ => Some((u, b)),
            })
            .expect("nonempty rows");
        let last = rows.iter().position(|r| differs_everywhere(&restrict(r, &coords), u0));
        if let Some(last) = last {
            // rows agreeing on U keep their relative order after restriction
            let sub: Vec<Vec<u8>> = block.iter().map(|&i| restrict(&rows[i], &rest)).collect();
            let (sub_w, sub_members) = build_chain(&sub, rest.len(), c, field);
            let mut w = vec![0u8; m];
            for (j, &i) in coords.iter().enumerate() {
                w[i] = field.neg(u0[j]);
            }
            for (j, &i) in rest.iter().enumerate() {
                w[i] = sub_w[j];
            }
            let mut members: Vec<usize> = sub_members.into_iter().map(|s| block[s]).collect();
            members.push(last);
            return (w, members);
        }
    }
    // single member made fully nonzero by the translate
    let w = rows[0].iter().map(|&x| field.sub(1, x)).collect();
    (w, vec![0])
}

/// Constructs a translate and an increasing chain for `set`.
pub fn chain_find(set: &[VecQ], c: usize) -> Result<Chain> {
    if c == 0 {
        return Err(invalid("freshness threshold c must be positive"));
    }
    let (field, ell, rows) = rows_of(set)?;
    let (w, members) = build_chain(&rows, ell, c, &field);
    let to_vec = |d: &[u8]| VecQ::from_digits(&field, d).expect("digits below q");
    Ok(Chain {
        ell,
        c,
        translate: to_vec(&w),
        members: members.iter().map(|&i| to_vec(&rows[i])).collect(),
    })
}

/// True iff every `v_j + w` has at least `c` support coordinates outside the
/// supports of the earlier `v_i + w`.
pub fn chain_verify(translate: &VecQ, members: &[VecQ], c: usize) -> bool {
    let mut covered = vec![false; translate.len()];
    for v in members {
        let Ok(shifted) = v.add(translate) else {
            return false;
        };
        let support = shifted.support();
        if support.iter().filter(|&&i| !covered[i]).count() < c {
            return false;
        }
        for i in support {
            covered[i] = true;
        }
    }
    true
}

/// Exact longest `c`-increasing chain within `set` (no translate), by
/// memoized search over covered-support masks.
pub fn longest_chain_oracle(set: &[VecQ], c: usize) -> Result<usize> {
    let Some(first) = set.first() else {
        return Ok(0);
    };
    let ell = first.len();
    if ell > ORACLE_MAX_ELL {
        return Err(Error::Resource(format!(
            "oracle handles ℓ ≤ {ORACLE_MAX_ELL}, got ℓ = {ell}"
        )));
    }
    if set.iter().any(|v| v.len() != ell) {
        return Err(invalid("vectors of different lengths"));
    }
    if c == 0 {
        return Err(invalid("freshness threshold c must be positive"));
    }
    let masks: Vec<u32> = set
        .iter()
        .map(|v| v.support().iter().fold(0u32, |m, &i| m | (1 << i)))
        .filter(|m| m.count_ones() as usize >= c)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut memo = vec![u8::MAX; 1 << ell];
    fn best(covered: u32, masks: &[u32], c: u32, memo: &mut [u8]) -> u8 {
        if memo[covered as usize] != u8::MAX {
            return memo[covered as usize];
        }
        let mut top = 0;
        for &s in masks {
            if (s & !covered).count_ones() >= c {
                top = top.max(1 + best(covered | s, masks, c, memo));
            }
        }
        memo[covered as usize] = top;
        top
    }
    Ok(best(0, &masks, c as u32, &mut memo) as usize)
}

/// Scans every translate `w ∈ F_q^ℓ` with the oracle; returns the first
/// (lexicographic) translate achieving the maximum.
pub fn best_translate_oracle(set: &[VecQ], c: usize) -> Result<(VecQ, usize)> {
    let (field, ell, _) = rows_of(set)?;
    let q = field.q();
    if (q as u64).checked_pow(ell as u32).is_none_or(|t| t > TRANSLATE_SCAN_BUDGET) {
        return Err(Error::Resource(format!(
            "{q}^{ell} translates exceed the scan budget of {TRANSLATE_SCAN_BUDGET}"
        )));
    }
    let mut best: Option<(VecQ, usize)> = None;
    for w in all_patterns(q, ell) {
        let w = VecQ::from_digits(&field, &w)?;
        let shifted: Vec<VecQ> = set.iter().map(|v| v.add(&w).expect("shared shape")).collect();
        let len = longest_chain_oracle(&shifted, c)?;
        if best.as_ref().is_none_or(|(_, b)| len > *b) {
            best = Some((w, len));
        }
    }
    Ok(best.expect("at least one translate"))
}

/// `set + w`.
pub fn translate_set(set: &[VecQ], w: &VecQ) -> Result<Vec<VecQ>> {
    set.iter().map(|v| v.add(w)).collect()
}

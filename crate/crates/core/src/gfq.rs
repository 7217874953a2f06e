//! Arithmetic over small finite fields `F_q` (q a prime power, 2 ≤ q ≤ 16)
//! and packed vectors over them.
//!
//! Elements are encoded as integers in `0..q`. For a prime power `q = p^m`
//! the integer `e` stands for the polynomial `Σ_j c_j x^j` whose
//! coefficients are the base-`p` digits of `e` (`c_0` least significant).
//! Products are reduced modulo one fixed Conway polynomial per field:
//!
//! | q  | modulus            |
//! |----|--------------------|
//! | 4  | x² + x + 1         |
//! | 8  | x³ + x + 1         |
//! | 9  | x² + 2x + 2        |
//! | 16 | x⁴ + x + 1         |
//!
//! In characteristic 2 addition is therefore bitwise XOR of the encodings,
//! which [`VecQ`] exploits word-parallel.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::{Arc, OnceLock};

use crate::error::{invalid, Error, Result};

/// Largest supported field size.
pub const MAX_Q: usize = 16;
/// Longest supported vector.
pub const MAX_LEN: usize = 1 << 16;

/// Conway polynomials, coefficients listed from `x^0` upwards (monic).
fn conway_modulus(q: usize) -> Option<&'static [u8]> {
    match q {
        4 => Some(&[1, 1, 1]),
        8 => Some(&[1, 1, 0, 1]),
        9 => Some(&[2, 2, 1]),
        16 => Some(&[1, 1, 0, 0, 1]),
        _ => None,
    }
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Splits `q` into `(p, m)` with `q = p^m`, `p` prime.
fn prime_power(q: usize) -> Option<(usize, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Precomputed operation tables for `F_q`.
#[derive(Debug, Clone)]
pub struct FieldTable {
    q: usize,
    characteristic: usize,
    degree: u32,
    modulus: Vec<u8>,
    add_table: Vec<u8>,
    mul_table: Vec<u8>,
    inv_table: Vec<u8>,
    neg_table: Vec<u8>,
}

impl FieldTable {
    fn build(q: usize) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(invalid(format!("field size q={q} outside supported range 2..=16")));
        }
        let (p, m) = prime_power(q)
            .filter(|(p, _)| is_prime(*p))
            .ok_or_else(|| invalid(format!("field size q={q} is not a prime power")))?;
        let modulus: Vec<u8> = match m {
            1 => vec![0, 1],
            _ => conway_modulus(q).expect("modulus for every supported prime power").to_vec(),
        };

        let to_poly = |mut e: usize| -> Vec<usize> {
            (0..m)
                .map(|_| {
                    let c = e % p;
                    e /= p;
                    c
                })
                .collect()
        };
        let from_poly = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let mut add_table = vec![0u8; q * q];
        let mut mul_table = vec![0u8; q * q];
        for a in 0..q {
            let pa = to_poly(a);
            for b in 0..q {
                let pb = to_poly(b);
                let sum: Vec<usize> = pa.iter().zip(&pb).map(|(x, y)| (x + y) % p).collect();
                add_table[a * q + b] = from_poly(&sum) as u8;

                // schoolbook product, then reduce by the monic modulus
                let mut prod = vec![0usize; 2 * m as usize];
                for (i, x) in pa.iter().enumerate() {
                    for (j, y) in pb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let md = m as usize;
                for top in (md..prod.len()).rev() {
                    let lead = prod[top];
                    if lead == 0 {
                        continue;
                    }
                    for (j, &mc) in modulus.iter().enumerate() {
                        let idx = top - md + j;
                        prod[idx] = (prod[idx] + (p - lead) * mc as usize) % p;
                    }
                }
                mul_table[a * q + b] = from_poly(&prod[..md]) as u8;
            }
        }

        let mut inv_table = vec![0u8; q];
        let mut neg_table = vec![0u8; q];
        for a in 0..q {
            neg_table[a] = (0..q).find(|&b| add_table[a * q + b] == 0).expect("additive inverse") as u8;
            if a != 0 {
                inv_table[a] = (1..q)
                    .find(|&b| mul_table[a * q + b] == 1)
                    .ok_or_else(|| Error::InvalidParameter(format!("modulus for q={q} is reducible")))?
                    as u8;
            }
        }

        Ok(Self {
            q,
            characteristic: p,
            degree: m,
            modulus,
            add_table,
            mul_table,
            inv_table,
            neg_table,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Reduction polynomial (coefficients from `x^0` up). `[0, 1]` for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add_table[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg_table[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul_table[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg_table[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u8) -> Option<u8> {
        (a != 0).then(|| self.inv_table[a as usize])
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q as u8
    }
}

/// Shared handle to the tables of one field. Cloning is a reference-count bump.
#[derive(Clone)]
pub struct Field(Arc<FieldTable>);

fn field_cache() -> &'static [Option<Field>] {
    static CACHE: OnceLock<Vec<Option<Field>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        (0..=MAX_Q)
            .map(|q| FieldTable::build(q).ok().map(|t| Field(Arc::new(t))))
            .collect()
    })
}

impl Field {
    /// Field of size `q`. Fails for `q` outside `2..=16` or not a prime power.
    pub fn new(q: usize) -> Result<Field> {
        match field_cache().get(q) {
            Some(Some(f)) => Ok(f.clone()),
            _ => FieldTable::build(q).map(|t| Field(Arc::new(t))),
        }
    }

    pub fn supported_sizes() -> impl Iterator<Item = usize> {
        (2..=MAX_Q).filter(|&q| prime_power(q).is_some())
    }

    pub(crate) fn bits(&self) -> u32 {
        usize::BITS - (self.q - 1).leading_zeros()
    }
}

impl Deref for Field {
    type Target = FieldTable;
    fn deref(&self) -> &FieldTable {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// Character used for digit `d` in text formats (`0-9a-f`).
pub fn digit_char(d: u8) -> char {
    char::from_digit(d as u32, 16).expect("digit below 16")
}

/// A length-`n` vector over `F_q`, packed at `⌈log2 q⌉` bits per coordinate.
///
/// Digits never straddle words; unused high slots stay zero.
#[derive(Clone)]
pub struct VecQ {
    field: Field,
    n: usize,
    words: Vec<u64>,
}

impl VecQ {
    pub fn zero(field: &Field, n: usize) -> VecQ {
        let per = Self::per_word_for(field);
        VecQ {
            field: field.clone(),
            n,
            words: vec![0; n.div_ceil(per).max(1)],
        }
    }

    pub fn from_digits(field: &Field, digits: &[u8]) -> Result<VecQ> {
        if digits.len() > MAX_LEN {
            return Err(invalid(format!("vector length {} exceeds {MAX_LEN}", digits.len())));
        }
        let mut v = VecQ::zero(field, digits.len());
        for (i, &d) in digits.iter().enumerate() {
            if d as usize >= field.q() {
                return Err(invalid(format!("digit {d} at position {i} not in F_{}", field.q())));
            }
            v.set(i, d);
        }
        Ok(v)
    }

    /// Parses a digit string such as `"0120"` (hex digits for q > 10).
    pub fn parse(field: &Field, s: &str) -> Result<VecQ> {
        let digits = s
            .chars()
            .map(|ch| {
                ch.to_digit(16)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("bad digit {ch:?} in {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        VecQ::from_digits(field, &digits).map_err(|e| Error::Parse(e.to_string()))
    }

    fn per_word_for(field: &Field) -> usize {
        64 / field.bits() as usize
    }

    #[inline]
    fn bits(&self) -> u32 {
        self.field.bits()
    }

    #[inline]
    fn per_word(&self) -> usize {
        64 / self.bits() as usize
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        debug_assert!(i < self.n);
        let per = self.per_word();
        let b = self.bits();
        let mask = (1u64 << b) - 1;
        ((self.words[i / per] >> ((i % per) as u32 * b)) & mask) as u8
    }

    #[inline]
    pub fn set(&mut self, i: usize, d: u8) {
        debug_assert!(i < self.n && (d as usize) < self.field.q());
        let per = self.per_word();
        let b = self.bits();
        let shift = (i % per) as u32 * b;
        let mask = ((1u64 << b) - 1) << shift;
        let w = &mut self.words[i / per];
        *w = (*w & !mask) | ((d as u64) << shift);
    }

    pub fn digits(&self) -> Vec<u8> {
        (0..self.n).map(|i| self.get(i)).collect()
    }

    pub fn to_digit_string(&self) -> String {
        (0..self.n).map(|i| digit_char(self.get(i))).collect()
    }

    /// Mask with the lowest bit of every digit slot set.
    #[inline]
    fn slot_lsb_mask(&self) -> u64 {
        let b = self.bits();
        let mut m = 0u64;
        for s in 0..self.per_word() as u32 {
            m |= 1 << (s * b);
        }
        m
    }

    /// Number of nonzero digit slots in a word.
    #[inline]
    fn nonzero_slots(word: u64, bits: u32, lsb: u64) -> u32 {
        let mut fold = word;
        for s in 1..bits {
            fold |= word >> s;
        }
        (fold & lsb).count_ones()
    }

    pub fn weight(&self) -> usize {
        let b = self.bits();
        if b == 1 {
            return self.words.iter().map(|w| w.count_ones() as usize).sum();
        }
        let lsb = self.slot_lsb_mask();
        self.words.iter().map(|&w| Self::nonzero_slots(w, b, lsb) as usize).sum()
    }

    fn check_compatible(&self, other: &VecQ) -> Result<()> {
        if self.n != other.n || self.field != other.field {
            return Err(invalid(format!(
                "vector mismatch: length {} over {:?} vs length {} over {:?}",
                self.n, self.field, other.n, other.field
            )));
        }
        Ok(())
    }

    /// Hamming distance; the number of coordinates where the digits differ.
    pub fn distance(&self, other: &VecQ) -> Result<usize> {
        self.check_compatible(other)?;
        Ok(self.distance_unchecked(other))
    }

    #[inline]
    pub(crate) fn distance_unchecked(&self, other: &VecQ) -> usize {
        let b = self.bits();
        if b == 1 {
            return self
                .words
                .iter()
                .zip(&other.words)
                .map(|(x, y)| (x ^ y).count_ones() as usize)
                .sum();
        }
        let lsb = self.slot_lsb_mask();
        self.words
            .iter()
            .zip(&other.words)
            .map(|(x, y)| Self::nonzero_slots(x ^ y, b, lsb) as usize)
            .sum()
    }

    /// Indices (0-based) of the nonzero coordinates, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.get(i) != 0).collect()
    }

    /// `self += a * other`.
    pub(crate) fn axpy_unchecked(&mut self, a: u8, other: &VecQ) {
        if a == 0 {
            return;
        }
        if self.field.characteristic() == 2 && a == 1 {
            for (x, y) in self.words.iter_mut().zip(&other.words) {
                *x ^= y;
            }
            return;
        }
        let f = self.field.clone();
        for i in 0..self.n {
            let y = other.get(i);
            if y != 0 {
                let x = self.get(i);
                self.set(i, f.add(x, f.mul(a, y)));
            }
        }
    }

    pub fn add(&self, other: &VecQ) -> Result<VecQ> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.axpy_unchecked(1, other);
        Ok(out)
    }

    pub fn sub(&self, other: &VecQ) -> Result<VecQ> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.axpy_unchecked(self.field.neg(1), other);
        Ok(out)
    }

    pub fn neg(&self) -> VecQ {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, a: u8) -> VecQ {
        let mut out = VecQ::zero(&self.field, self.n);
        out.axpy_unchecked(a, self);
        out
    }

    /// Restriction to the given coordinates, in the given order.
    pub fn restrict(&self, coords: &[usize]) -> VecQ {
        let mut out = VecQ::zero(&self.field, coords.len());
        for (j, &i) in coords.iter().enumerate() {
            out.set(j, self.get(i));
        }
        out
    }
}

/// Coordinatewise `Σ coeffs[i] · vectors[i]`. An empty combination is the
/// zero vector of length `n` over `field`.
pub fn linear_combination(field: &Field, n: usize, coeffs: &[u8], vectors: &[VecQ]) -> Result<VecQ> {
    if coeffs.len() != vectors.len() {
        return Err(invalid(format!(
            "{} coefficients for {} vectors",
            coeffs.len(),
            vectors.len()
        )));
    }
    let mut acc = VecQ::zero(field, n);
    for (&a, v) in coeffs.iter().zip(vectors) {
        if a as usize >= field.q() {
            return Err(invalid(format!("coefficient {a} not in F_{}", field.q())));
        }
        acc.check_compatible(v)?;
        acc.axpy_unchecked(a, v);
    }
    Ok(acc)
}

impl PartialEq for VecQ {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field && self.words == other.words
    }
}

impl Eq for VecQ {}

impl Hash for VecQ {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.q().hash(state);
        self.n.hash(state);
        self.words.hash(state);
    }
}

/// Lexicographic on digit strings, coordinate 0 most significant.
impl Ord for VecQ {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .q()
            .cmp(&other.field.q())
            .then(self.n.cmp(&other.n))
            .then_with(|| {
                (0..self.n)
                    .map(|i| self.get(i).cmp(&other.get(i)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

impl PartialOrd for VecQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VecQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VecQ[q={}]({})", self.field.q(), self.to_digit_string())
    }
}

impl fmt::Display for VecQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_digit_string())
    }
}

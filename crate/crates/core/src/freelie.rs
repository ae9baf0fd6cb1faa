//! Free graded Lie algebra on generators `s_3, s_5, s_7, …` (`s_m` in degree
//! `m`), with integer coefficients, in the Lyndon basis.
//!
//! Elements are stored as coordinates on Lyndon words. Brackets are computed
//! in the free associative algebra and brought back to the basis using the
//! triangularity of the standard bracketing: `P(w) = w + (larger words)`, so
//! the lexicographically least word of a Lie polynomial is Lyndon and carries
//! that basis element's coordinate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEGREE: u32 = 24;

pub fn is_lyndon<T: Ord>(w: &[T]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w.iter().lt(w[i..].iter().chain(&w[..i])))
}

/// A Lyndon word over the generator labels; the label of `s_m` is `m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LyndonWord(Vec<u32>);

impl LyndonWord {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&m| m < 3 || m % 2 == 0) {
            return Err(Error::InvalidArgument(format!(
                "s_{bad} is not a generator (odd, >= 3)"
            )));
        }
        if !is_lyndon(&letters) {
            return Err(Error::InvalidArgument(format!(
                "{letters:?} is not a Lyndon word"
            )));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `w = uv` with `v` the longest proper Lyndon suffix.
    pub fn standard_factorization(&self) -> Option<(LyndonWord, LyndonWord)> {
        standard_split(&self.0).map(|i| (Self(self.0[..i].to_vec()), Self(self.0[i..].to_vec())))
    }

    /// Nested bracket notation, e.g. `[s3, [s3, s5]]`.
    pub fn bracketing(&self) -> String {
        match self.standard_factorization() {
            None => format!("s{}", self.0[0]),
            Some((u, v)) => format!("[{}, {}]", u.bracketing(), v.bracketing()),
        }
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| format!("s{m}")).collect();
        f.write_str(&parts.join(" "))
    }
}

fn standard_split(w: &[u32]) -> Option<usize> {
    (1..w.len()).find(|&i| is_lyndon(&w[i..]))
}

/// All words over letters of the given degrees with total degree `m`
/// (ordered compositions), letters as indices into `degrees`.
fn compositions(m: u32, degrees: &[u32]) -> Vec<Vec<usize>> {
    fn rec(rest: u32, degrees: &[u32], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for (i, &d) in degrees.iter().enumerate() {
            if d > 0 && d <= rest {
                cur.push(i);
                rec(rest - d, degrees, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        rec(m, degrees, &mut Vec::new(), &mut out);
    }
    out
}

/// Number of Lyndon words of degree `m` over an alphabet whose letters have
/// the given degrees, by enumeration.
pub fn lyndon_count(m: u32, degrees: &[u32]) -> u64 {
    compositions(m, degrees)
        .iter()
        .filter(|w| is_lyndon(w))
        .count() as u64
}

/// Odd generator degrees `3, 5, …, ≤ max`.
pub fn standard_degrees(max: u32) -> Vec<u32> {
    (3..=max).step_by(2).collect()
}

/// Rank `d_m` of the degree-`m` piece of the free Lie algebra on generators
/// of the given degrees, from `Π_n (1 - t^n)^{-d_n} = 1 / (1 - Σ_g t^{deg g})`.
///
/// Taking `t·d/dt log` of both sides gives `Σ_{n | m} n·d_n = h_m` with
/// `h_m = m·g_m + Σ_{i<m} g_i h_{m-i}`, `g_i` the number of generators in
/// degree `i`.
pub fn graded_dimension(m: u32, degrees: &[u32]) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    let m = m as usize;
    let mut g = vec![0u128; m + 1];
    for &d in degrees {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "generator degrees must be positive".into(),
            ));
        }
        if (d as usize) <= m {
            g[d as usize] += 1;
        }
    }
    let overflow = || Error::InvalidArgument(format!("dimension of degree {m} overflows"));
    let mut h = vec![0u128; m + 1];
    for n in 1..=m {
        let mut acc = (n as u128).checked_mul(g[n]).ok_or_else(overflow)?;
        for i in 1..n {
            acc = acc
                .checked_add(g[i].checked_mul(h[n - i]).ok_or_else(overflow)?)
                .ok_or_else(overflow)?;
        }
        h[n] = acc;
    }
    let mut d = vec![0u128; m + 1];
    for n in 1..=m {
        let lower: u128 = (1..n)
            .filter(|k| n % k == 0)
            .map(|k| k as u128 * d[k])
            .sum();
        d[n] = (h[n] - lower) / n as u128;
    }
    u64::try_from(d[m]).map_err(|_| overflow())
}

/// Lyndon basis by degree, `1 ≤ m ≤ max_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisTable {
    pub max_degree: u32,
    pub by_degree: BTreeMap<u32, Vec<LyndonWord>>,
}

impl BasisTable {
    pub fn degree(&self, m: u32) -> &[LyndonWord] {
        self.by_degree.get(&m).map_or(&[], |v| v.as_slice())
    }
}

pub fn lyndon_words(m: u32) -> Vec<LyndonWord> {
    let degrees = standard_degrees(m);
    let mut words: Vec<LyndonWord> = compositions(m, &degrees)
        .into_iter()
        .filter(|w| is_lyndon(w))
        .map(|w| LyndonWord(w.into_iter().map(|i| degrees[i]).collect()))
        .collect();
    words.sort();
    words
}

pub fn lyndon_basis(max_degree: u32) -> Result<BasisTable> {
    if max_degree < 3 {
        return Err(Error::InvalidArgument(
            "max degree must be at least 3".into(),
        ));
    }
    let by_degree = (1..=max_degree).map(|m| (m, lyndon_words(m))).collect();
    Ok(BasisTable {
        max_degree,
        by_degree,
    })
}

type AssocPoly = BTreeMap<Vec<u32>, BigInt>;

fn add_into(target: &mut AssocPoly, word: Vec<u32>, c: BigInt) {
    use std::collections::btree_map::Entry;
    match target.entry(word) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn commutator_poly(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    let mut out = AssocPoly::new();
    for (u, x) in a {
        for (v, y) in b {
            let prod = x * y;
            let uv = u.iter().chain(v).copied().collect();
            let vu = v.iter().chain(u).copied().collect();
            add_into(&mut out, uv, prod.clone());
            add_into(&mut out, vu, -prod);
        }
    }
    out
}

/// Standard bracketing `P(w)` expanded in the free associative algebra.
fn expand(w: &[u32], memo: &mut HashMap<Vec<u32>, AssocPoly>) -> AssocPoly {
    if let Some(p) = memo.get(w) {
        return p.clone();
    }
    let poly = match standard_split(w) {
        None => AssocPoly::from([(w.to_vec(), BigInt::one())]),
        Some(i) => {
            let u = expand(&w[..i], memo);
            let v = expand(&w[i..], memo);
            commutator_poly(&u, &v)
        }
    };
    memo.insert(w.to_vec(), poly.clone());
    poly
}

/// Integer combination of Lyndon basis elements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieElement {
    terms: BTreeMap<LyndonWord, BigInt>,
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(m: u32) -> Result<Self> {
        Ok(Self::basis(LyndonWord::new(vec![m])?))
    }

    pub fn basis(w: LyndonWord) -> Self {
        Self {
            terms: BTreeMap::from([(w, BigInt::one())]),
        }
    }

    pub fn terms(&self) -> &BTreeMap<LyndonWord, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &LyndonWord) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let e = terms.entry(w.clone()).or_default();
            *e += c;
            if e.is_zero() {
                terms.remove(w);
            }
        }
        Self { terms }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * s)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    /// Degrees occurring in the element, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(LyndonWord::degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    fn to_associative(&self, memo: &mut HashMap<Vec<u32>, AssocPoly>) -> AssocPoly {
        let mut out = AssocPoly::new();
        for (w, c) in &self.terms {
            for (word, x) in expand(w.letters(), memo) {
                add_into(&mut out, word, x * c);
            }
        }
        out
    }

    fn from_associative(
        mut poly: AssocPoly,
        memo: &mut HashMap<Vec<u32>, AssocPoly>,
    ) -> Result<Self> {
        let mut terms = BTreeMap::new();
        while let Some((w, c)) = poly.first_key_value().map(|(w, c)| (w.clone(), c.clone())) {
            if !is_lyndon(&w) {
                return Err(Error::InvalidArgument(format!(
                    "{w:?} leads a polynomial that is not a Lie element"
                )));
            }
            for (word, x) in expand(&w, memo) {
                add_into(&mut poly, word, -(x * &c));
            }
            terms.insert(LyndonWord(w), c);
        }
        Ok(Self { terms })
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (w, c)) in self.terms.iter().enumerate() {
            let sep = match (n, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sep}{}", w.bracketing())?;
            } else {
                write!(f, "{sep}{mag}*{}", w.bracketing())?;
            }
        }
        Ok(())
    }
}

/// Lie bracket, expanded in the Lyndon basis.
pub fn bracket(a: &LieElement, b: &LieElement) -> LieElement {
    let mut memo = HashMap::new();
    let pa = a.to_associative(&mut memo);
    let pb = b.to_associative(&mut memo);
    LieElement::from_associative(commutator_poly(&pa, &pb), &mut memo)
        .expect("brackets of Lie elements are Lie elements")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub over_q: usize,
    pub mod_p: usize,
}

/// Coordinates of homogeneous degree-`m` elements on the Lyndon basis of
/// that degree.
pub fn coordinates(elements: &[LieElement], m: u32) -> Result<Vec<Vec<BigInt>>> {
    let basis = lyndon_words(m);
    elements
        .iter()
        .map(|e| {
            if let Some(&found) = e.degrees().iter().find(|&&d| d != m) {
                return Err(Error::MixedDegrees { expected: m, found });
            }
            Ok(basis.iter().map(|w| e.coefficient(w)).collect())
        })
        .collect()
}

pub fn rank_of(elements: &[LieElement], m: u32, p: u64) -> Result<RankReport> {
    let rows = coordinates(elements, m)?;
    let mod_p = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced"))
                .collect()
        })
        .collect();
    Ok(RankReport {
        over_q: rank_rational(rows),
        mod_p: rank_mod(mod_p, p),
    })
}

/// Fraction-free (Bareiss) elimination over the integers.
fn rank_rational(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in rank + 1..rows.len() {
            for c in col + 1..cols {
                let v = (&rows[rank][col] * &rows[r][c] - &rows[r][col] * &rows[rank][c]) / &prev;
                rows[r][c] = v;
            }
            rows[r][col] = BigInt::zero();
        }
        prev = rows[rank][col].clone();
        rank += 1;
    }
    rank
}

fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    use crate::padic::{inverse_mod, mul_mod};
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inverse_mod(rows[rank][col], p).expect("nonzero mod p");
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| mul_mod(x, inv, p)).collect();
        for row in rows.iter_mut().skip(rank + 1) {
            let f = row[col];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `[s_3, s_9]` and `[s_5, s_7]`, the two degree-12 commutators.
pub fn degree_twelve_commutators() -> Vec<LieElement> {
    let s = |m| LieElement::generator(m).expect("odd generator");
    vec![bracket(&s(3), &s(9)), bracket(&s(5), &s(7))]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: u32) -> LieElement {
        LieElement::generator(m).unwrap()
    }

    fn word(letters: &[u32]) -> LyndonWord {
        LyndonWord::new(letters.to_vec()).unwrap()
    }

    #[test]
    fn lyndon_predicate() {
        assert!(is_lyndon(&[3]));
        assert!(is_lyndon(&[3, 5]));
        assert!(!is_lyndon(&[5, 3]));
        assert!(!is_lyndon(&[3, 3]));
        assert!(is_lyndon(&[3, 3, 5]));
        assert!(!is_lyndon(&[3, 5, 3, 5]));
        assert!(!is_lyndon::<u32>(&[]));
    }

    #[test]
    fn small_bases() {
        assert_eq!(lyndon_words(3), vec![word(&[3])]);
        assert_eq!(lyndon_words(4), vec![]);
        assert_eq!(lyndon_words(8), vec![word(&[3, 5])]);
        assert_eq!(lyndon_words(12), vec![word(&[3, 9]), word(&[5, 7])]);
    }

    #[test]
    fn dimensions_three_to_twelve() {
        let degrees = standard_degrees(12);
        let dims: Vec<u64> = (3..=12)
            .map(|m| graded_dimension(m, &degrees).unwrap())
            .collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 1, 1, 1, 1, 2, 2]);
    }

    #[test]
    fn recursion_matches_enumeration() {
        let degrees = standard_degrees(24);
        for m in 1..=24 {
            assert_eq!(
                graded_dimension(m, &degrees).unwrap(),
                lyndon_count(m, &degrees),
                "m = {m}"
            );
        }
        // Repeated degrees: two generators of degree 1 give the necklace counts.
        let two = [1, 1];
        for m in 1..=10 {
            assert_eq!(graded_dimension(m, &two).unwrap(), lyndon_count(m, &two));
        }
        assert_eq!(graded_dimension(6, &two).unwrap(), 9);
    }

    #[test]
    fn bracket_examples() {
        assert!(bracket(&s(3), &s(3)).is_zero());
        assert_eq!(bracket(&s(3), &s(5)), LieElement::basis(word(&[3, 5])));
        assert_eq!(
            bracket(&s(5), &s(3)),
            LieElement::basis(word(&[3, 5])).scale(&BigInt::from(-1))
        );
    }

    #[test]
    fn jacobi_on_generators() {
        let (a, b, c) = (s(3), s(5), s(7));
        let j = bracket(&a, &bracket(&b, &c))
            .add(&bracket(&b, &bracket(&c, &a)))
            .add(&bracket(&c, &bracket(&a, &b)));
        assert!(j.is_zero());
    }

    #[test]
    fn standard_bracketing_display() {
        assert_eq!(word(&[3, 3, 5]).bracketing(), "[s3, [s3, s5]]");
        assert_eq!(word(&[3, 5]).to_string(), "s3 s5");
    }

    #[test]
    fn degree_twelve_rank() {
        let pair = degree_twelve_commutators();
        assert_eq!(
            rank_of(&pair, 12, 691).unwrap(),
            RankReport {
                over_q: 2,
                mod_p: 2
            }
        );
        let c = bracket(&s(3), &s(5));
        let doubled = vec![c.clone(), c.scale(&BigInt::from(2))];
        assert_eq!(
            rank_of(&doubled, 8, 691).unwrap(),
            RankReport {
                over_q: 1,
                mod_p: 1
            }
        );
        assert_eq!(
            rank_of(&[], 12, 691).unwrap(),
            RankReport {
                over_q: 0,
                mod_p: 0
            }
        );
        assert!(matches!(
            rank_of(&[s(3), pair[0].clone()], 12, 691),
            Err(Error::MixedDegrees { .. })
        ));
    }

    #[test]
    fn rank_mod_p_can_drop() {
        let c = bracket(&s(3), &s(5));
        let rows = vec![c.clone(), c.scale(&BigInt::from(7))];
        assert_eq!(rank_of(&rows, 8, 7).unwrap().mod_p, 1);
        let e = LieElement::basis(word(&[3, 3, 5])).scale(&BigInt::from(7));
        assert_eq!(
            rank_of(&[e], 11, 7).unwrap(),
            RankReport {
                over_q: 1,
                mod_p: 0
            }
        );
    }

    #[test]
    fn antisymmetry_and_jacobi_through_degree_sixteen() {
        let basis: Vec<(u32, LieElement)> = (3..=16)
            .flat_map(lyndon_words)
            .map(|w| (w.degree(), LieElement::basis(w)))
            .collect();
        for (da, a) in &basis {
            for (db, b) in &basis {
                if da + db > 16 {
                    continue;
                }
                assert!(bracket(a, b).add(&bracket(b, a)).is_zero());
                for (dc, c) in &basis {
                    if da + db + dc > 16 {
                        continue;
                    }
                    let j = bracket(a, &bracket(b, c))
                        .add(&bracket(b, &bracket(c, a)))
                        .add(&bracket(c, &bracket(a, b)));
                    assert!(j.is_zero(), "{a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn brackets_are_homogeneous() {
        let x = bracket(&s(3), &bracket(&s(3), &s(7)));
        assert_eq!(x.degrees(), vec![13]);
        assert_eq!(x, LieElement::basis(word(&[3, 3, 7])));
    }

    /// Coefficients of `Π_n (1 - t^n)^{-d_n}` against the count of words
    /// (compositions into odd parts ≥ 3).
    #[test]
    fn associative_hilbert_series() {
        const D: usize = 24;
        let degrees = standard_degrees(D as u32);
        let mut series = vec![0u128; D + 1];
        series[0] = 1;
        for n in 1..=D {
            let d = graded_dimension(n as u32, &degrees).unwrap();
            for _ in 0..d {
                // multiply by 1 / (1 - t^n)
                for k in n..=D {
                    series[k] += series[k - n];
                }
            }
        }
        for (m, &coeff) in series.iter().enumerate().skip(1) {
            assert_eq!(
                coeff,
                compositions(m as u32, &degrees).len() as u128,
                "m = {m}"
            );
        }
    }

    #[test]
    fn table_matches_words() {
        let t = lyndon_basis(12).unwrap();
        assert_eq!(t.degree(12).len(), 2);
        assert_eq!(t.degree(4).len(), 0);
        assert!(lyndon_basis(2).is_err());
        assert!(LyndonWord::new(vec![4]).is_err());
        assert!(LyndonWord::new(vec![5, 3]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn degree_sixteen() -> Vec<LieElement> {
            lyndon_words(16)
                .into_iter()
                .map(LieElement::basis)
                .collect()
        }

        proptest! {
            #[test]
            fn rank_invariant_under_scaling_and_permutation(
                coeffs in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 4), 1..5),
                scales in proptest::collection::vec(prop_oneof![1i64..=6, -6i64..=-1], 5),
                shift in 0usize..5,
            ) {
                let basis = degree_sixteen();
                let rows: Vec<LieElement> = coeffs
                    .iter()
                    .map(|cs| {
                        basis.iter().zip(cs).fold(LieElement::zero(), |acc, (b, &c)| {
                            acc.add(&b.scale(&BigInt::from(c)))
                        })
                    })
                    .collect();
                let base = rank_of(&rows, 16, 7).unwrap();
                let mut moved: Vec<LieElement> = rows
                    .iter()
                    .zip(&scales)
                    .map(|(r, &k)| r.scale(&BigInt::from(k)))
                    .collect();
                let len = moved.len();
                moved.rotate_left(shift % len);
                prop_assert_eq!(rank_of(&moved, 16, 7).unwrap(), base);
                prop_assert!(base.mod_p <= base.over_q);
            }
        }
    }
}

//! Truncated p-adic integers: residues modulo `p^N` for an odd prime `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Moduli are kept below `2^62` so sums of two residues never overflow and
/// products fit in `u128`.
const MODULUS_LIMIT: u64 = 1 << 62;

/// p-adic valuation; zero has infinite valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Equal,
            (Valuation::Infinite, _) => Greater,
            (_, Valuation::Infinite) => Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn check_odd_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// `p^digits`, or an error when it would exceed the supported modulus range.
pub fn modulus_for(p: u64, digits: u32) -> Result<u64> {
    let mut m: u64 = 1;
    for _ in 0..digits {
        m = m
            .checked_mul(p)
            .filter(|&m| m < MODULUS_LIMIT)
            .ok_or(Error::ModulusTooLarge { p, digits })?;
    }
    Ok(m)
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m < (1 << 32) {
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Element of `Z/p^N`, read as a p-adic integer known to `N` digits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    modulus: u64,
    residue: u64,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.p, self.precision)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl PadicInt {
    pub fn new(p: u64, precision: u32, value: i128) -> Result<Self> {
        check_odd_prime(p)?;
        if precision == 0 {
            return Err(Error::InvalidArgument("precision must be positive".into()));
        }
        let modulus = modulus_for(p, precision)?;
        Ok(Self::from_parts(p, precision, modulus, value))
    }

    pub(crate) fn from_parts(p: u64, precision: u32, modulus: u64, value: i128) -> Self {
        let residue = value.rem_euclid(modulus as i128) as u64;
        Self {
            p,
            precision,
            modulus,
            residue,
        }
    }

    pub fn zero(p: u64, precision: u32) -> Result<Self> {
        Self::new(p, precision, 0)
    }

    pub fn one(p: u64, precision: u32) -> Result<Self> {
        Self::new(p, precision, 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// Representative in `(-p^N/2, p^N/2]`.
    pub fn signed(&self) -> i128 {
        let r = self.residue as i128;
        let m = self.modulus as i128;
        if 2 * r > m {
            r - m
        } else {
            r
        }
    }

    fn with_residue(&self, residue: u64) -> Self {
        Self { residue, ..*self }
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(
            self.p == other.p && self.precision == other.precision,
            "p-adic operands disagree: {self:?} vs {other:?}"
        );
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.residue.is_multiple_of(self.p)
    }

    pub fn valuation(&self) -> Valuation {
        if self.residue == 0 {
            return Valuation::Infinite;
        }
        let mut v = 0;
        let mut r = self.residue;
        while r.is_multiple_of(self.p) {
            r /= self.p;
            v += 1;
        }
        Valuation::Finite(v)
    }

    pub fn unit_inverse(&self) -> Result<Self> {
        inverse_mod(self.residue, self.modulus)
            .map(|r| self.with_residue(r))
            .ok_or(Error::NotUnit(self.residue, self.modulus))
    }

    pub fn pow(&self, exp: u64) -> Self {
        self.with_residue(pow_mod(self.residue, exp, self.modulus))
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow_signed(&self, exp: i64) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.unit_inverse()?.pow(exp.unsigned_abs()))
        }
    }

    /// Drop digits: the image in `Z/p^precision`.
    pub fn reduce_to(&self, precision: u32) -> Result<Self> {
        if precision > self.precision {
            return Err(Error::Precision {
                needed: precision,
                available: self.precision,
            });
        }
        let modulus = modulus_for(self.p, precision)?;
        Ok(Self::from_parts(
            self.p,
            precision,
            modulus,
            (self.residue % modulus) as i128,
        ))
    }

    /// Reinterpret at higher precision using the canonical representative.
    /// The extra digits carry no information.
    pub fn lift_to(&self, precision: u32) -> Result<Self> {
        let modulus = modulus_for(self.p, precision)?;
        Ok(Self::from_parts(
            self.p,
            precision,
            modulus,
            self.residue as i128,
        ))
    }
}

impl Add for PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: Self) -> Self {
        self.assert_compatible(&rhs);
        let s = self.residue + rhs.residue;
        self.with_residue(if s >= self.modulus {
            s - self.modulus
        } else {
            s
        })
    }
}

impl Sub for PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> Self {
        self.with_residue(if self.residue == 0 {
            0
        } else {
            self.modulus - self.residue
        })
    }
}

impl Mul for PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: Self) -> Self {
        self.assert_compatible(&rhs);
        self.with_residue(mul_mod(self.residue, rhs.residue, self.modulus))
    }
}

/// Largest `e` with `p^e | n`.
pub fn vp_int(p: u64, n: i128) -> Result<u32> {
    check_odd_prime(p)?;
    if n == 0 {
        return Err(Error::InfiniteValuation);
    }
    let p = p as i128;
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// Legendre's formula: `v_p(n!) = Σ_{i≥1} ⌊n/p^i⌋`.
pub fn vp_factorial(p: u64, n: u64) -> u64 {
    let mut total = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        total += q;
    }
    total
}

/// Teichmüller representative of `a`: the `(p-1)`-st root of unity
/// congruent to `a` mod `p`, found by iterating `x ↦ x^p`.
pub fn teichmuller(p: u64, a: i64, precision: u32) -> Result<PadicInt> {
    let start = PadicInt::new(p, precision, a as i128)?;
    if !start.is_unit() {
        return Err(Error::NotUnit(start.residue(), p));
    }
    let mut x = start;
    for _ in 0..=precision {
        let next = x.pow(p);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(Error::NonConvergence(precision as usize + 1))
}

/// Smallest primitive root modulo `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let mut factors = Vec::new();
    let mut n = p - 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .ok_or(Error::NotOddPrime(p))
}

/// `C(a, k) = a(a-1)⋯(a-k+1)/k!` modulo `p^target`.
///
/// The input must carry at least `target + v_p(k!)` digits; the division by
/// the `p`-part of `k!` is exact on the numerator computed at that precision.
pub fn padic_binomial(a: &PadicInt, k: u64, target: u32) -> Result<PadicInt> {
    let p = a.prime();
    let shift = vp_factorial(p, k) as u32;
    let needed = target + shift;
    if a.precision() < needed {
        return Err(Error::Precision {
            needed,
            available: a.precision(),
        });
    }
    let target_modulus = modulus_for(p, target)?;
    let wide = modulus_for(p, needed)?;
    let base = a.residue() % wide;

    let mut numerator = 1 % wide;
    let mut unit_factorial = 1 % target_modulus;
    for i in 0..k {
        let term = (base + wide - (i % wide)) % wide;
        numerator = mul_mod(numerator, term, wide);
        let mut f = i + 1;
        while f % p == 0 {
            f /= p;
        }
        unit_factorial = mul_mod(unit_factorial, f % target_modulus, target_modulus);
    }
    let p_shift = modulus_for(p, shift)?;
    debug_assert_eq!(numerator % p_shift, 0);
    let reduced = (numerator / p_shift) % target_modulus;
    let inv =
        inverse_mod(unit_factorial, target_modulus).ok_or(Error::NotUnit(unit_factorial, p))?;
    Ok(PadicInt::from_parts(
        p,
        target,
        target_modulus,
        mul_mod(reduced, inv, target_modulus) as i128,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vp_int_examples() {
        assert_eq!(vp_int(5, 50), Ok(2));
        assert_eq!(vp_int(3, 1), Ok(0));
        assert_eq!(vp_int(691, 691), Ok(1));
        assert_eq!(vp_int(5, -125), Ok(3));
        assert_eq!(vp_int(5, 0), Err(Error::InfiniteValuation));
        assert_eq!(vp_int(4, 8), Err(Error::NotOddPrime(4)));
    }

    #[test]
    fn vp_factorial_examples() {
        // 10! = 3628800 = 2^8 3^4 5^2 7
        let direct = (1..=10u64).product::<u64>();
        assert_eq!(vp_int(5, direct as i128), Ok(2));
        assert_eq!(vp_factorial(5, 10), 2);
        assert_eq!(vp_factorial(3, 9), 4);
        assert_eq!(vp_factorial(5, 4), 0);
        assert_eq!(vp_factorial(7, 0), 0);
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(5, 1, 3).unwrap().residue(), 1);
        assert_eq!(teichmuller(7, 6, 2).unwrap().residue(), 48);
        assert_eq!(teichmuller(5, 2, 2).unwrap().residue(), 7);
        assert!(matches!(teichmuller(5, 10, 2), Err(Error::NotUnit(..))));
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        for p in (3..=97).filter(|&p| is_odd_prime(p)) {
            for n in 1..=8 {
                if modulus_for(p, n).is_err() {
                    continue;
                }
                for a in 1..p {
                    let w = teichmuller(p, a as i64, n).unwrap();
                    assert_eq!(w.pow(p - 1).residue(), 1, "p={p} a={a} N={n}");
                    assert_eq!(w.residue() % p, a);
                }
            }
        }
    }

    #[test]
    fn telescoping_identity() {
        for p in (3..=97).filter(|&p| is_odd_prime(p)) {
            for j in 0..=50 {
                assert_eq!(vp_factorial(p, j * p), j + vp_factorial(p, j));
            }
        }
    }

    #[test]
    fn binomial_examples() {
        let a = PadicInt::new(3, 4, 3).unwrap();
        assert_eq!(padic_binomial(&a, 2, 2).unwrap().residue(), 3);
        assert_eq!(padic_binomial(&a, 0, 4).unwrap().residue(), 1);
        let minus_one = PadicInt::new(5, 6, -1).unwrap();
        for k in 0..8 {
            let b = padic_binomial(&minus_one, k, 4).unwrap();
            let expected = if k % 2 == 0 { 1 } else { 624 };
            assert_eq!(b.residue(), expected, "k={k}");
        }
    }

    #[test]
    fn binomial_precision_error() {
        // v_3(3!) = 1, so target 4 needs 5 digits.
        let a = PadicInt::new(3, 4, 7).unwrap();
        assert_eq!(
            padic_binomial(&a, 3, 4),
            Err(Error::Precision {
                needed: 5,
                available: 4
            })
        );
        assert!(padic_binomial(&a, 3, 3).is_ok());
    }

    #[test]
    fn binomial_matches_integer_binomial() {
        fn choose(n: u64, k: u64) -> u128 {
            (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
        }
        for p in [3u64, 5, 7] {
            for n in 0..40u64 {
                for k in 0..=n.min(9) {
                    let a = PadicInt::new(p, 10, n as i128).unwrap();
                    let b = padic_binomial(&a, k, 5).unwrap();
                    let m = modulus_for(p, 5).unwrap() as u128;
                    assert_eq!(b.residue() as u128, choose(n, k) % m, "p={p} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn unit_inverse_roundtrip() {
        for p in [3u64, 5, 7, 11, 691] {
            let m = modulus_for(p, 3).unwrap();
            for r in (1..m)
                .step_by((m / 2000).max(1) as usize)
                .filter(|r| r % p != 0)
            {
                let u = PadicInt::new(p, 3, r as i128).unwrap();
                assert_eq!((u * u.unit_inverse().unwrap()).residue(), 1);
            }
            let nonunit = PadicInt::new(p, 3, p as i128).unwrap();
            assert!(nonunit.unit_inverse().is_err());
        }
    }

    #[test]
    fn valuation_and_infinity() {
        let z = PadicInt::zero(5, 3).unwrap();
        assert_eq!(z.valuation(), Valuation::Infinite);
        assert_eq!(
            PadicInt::new(5, 3, 50).unwrap().valuation(),
            Valuation::Finite(2)
        );
        assert!(Valuation::Infinite > Valuation::Finite(100));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5), Ok(2));
        assert_eq!(primitive_root(7), Ok(3));
        assert_eq!(primitive_root(3), Ok(2));
        assert_eq!(primitive_root(691), Ok(3));
    }

    #[test]
    fn modulus_limit() {
        assert!(PadicInt::new(691, 7, 1).is_err());
        assert!(PadicInt::new(691, 6, 1).is_ok());
    }
}

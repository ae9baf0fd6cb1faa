//! Bernoulli residues, irregular pairs and the valuation bookkeeping around
//! the Soulé-type characters `κ_m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::padic::{check_odd_prime, inverse_mod, mul_mod, vp_factorial, PadicInt, Valuation};

/// `B_m mod p` for even `m`, `2 ≤ m ≤ p − 3`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BernoulliTable {
    pub p: u64,
    /// `residues[i]` is `B_{2i+2} mod p`.
    pub residues: Vec<u64>,
}

impl BernoulliTable {
    pub fn residue(&self, m: u64) -> Option<u64> {
        if m < 2 || m % 2 == 1 {
            return None;
        }
        self.residues.get((m / 2 - 1) as usize).copied()
    }

    /// `(m, B_m mod p)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.residues
            .iter()
            .enumerate()
            .map(|(i, &r)| (2 * i as u64 + 2, r))
    }

    pub fn irregular_pairs(&self) -> Vec<IrregularPair> {
        self.entries()
            .filter(|&(_, r)| r == 0)
            .map(|(m, _)| IrregularPair { p: self.p, m })
            .collect()
    }
}

/// `p` divides the numerator of `B_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IrregularPair {
    pub p: u64,
    pub m: u64,
}

/// Residues from `Σ_{k=0}^{n} C(n+1, k) B_k = 0`, the coefficient identity of
/// `(e^t − 1)/t · t/(e^t − 1) = 1`. Every divisor `n + 1` stays below `p`
/// for `n ≤ p − 3`, so the recurrence runs in `Z/p`.
pub fn bernoulli_mod_p(p: u64) -> Result<BernoulliTable> {
    check_odd_prime(p)?;
    if p == 3 {
        return Ok(BernoulliTable {
            p,
            residues: Vec::new(),
        });
    }
    let top = (p - 3) as usize;
    let mut b = vec![0u64; top + 1];
    b[0] = 1;
    // row[k] = C(n+1, k) mod p, advanced one row per step.
    let mut row = vec![1u64, 1];
    for n in 1..=top {
        let mut next = vec![1u64; n + 2];
        for k in 1..=n {
            next[k] = (row[k - 1] + row[k]) % p;
        }
        row = next;
        let mut acc = 0u64;
        for k in 0..n {
            acc = (acc + mul_mod(row[k], b[k], p)) % p;
        }
        let inv = inverse_mod((n + 1) as u64, p).expect("n + 1 < p");
        b[n] = (p - mul_mod(acc, inv, p)) % p;
    }
    let residues = (2..=top).step_by(2).map(|m| b[m]).collect();
    Ok(BernoulliTable { p, residues })
}

pub fn irregular_pairs(p: u64) -> Result<Vec<IrregularPair>> {
    Ok(bernoulli_mod_p(p)?.irregular_pairs())
}

pub fn is_regular(p: u64) -> Result<bool> {
    Ok(irregular_pairs(p)?.is_empty())
}

/// Odd primes `≤ n`, by sieve.
pub fn odd_primes_up_to(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        if i > 2 {
            out.push(i as u64);
        }
        for j in (i * i..=n).step_by(i) {
            composite[j] = true;
        }
    }
    out
}

/// Bernoulli tables for every odd prime up to `pmax`, in ascending order.
pub fn bernoulli_tables(pmax: u64, exec: Exec) -> Vec<BernoulliTable> {
    exec.map(odd_primes_up_to(pmax), |p| {
        bernoulli_mod_p(p).expect("sieved prime")
    })
}

/// All irregular pairs with `p ≤ pmax`, sorted by `(p, m)`.
pub fn irregular_scan(pmax: u64, exec: Exec) -> Vec<IrregularPair> {
    bernoulli_tables(pmax, exec)
        .iter()
        .flat_map(BernoulliTable::irregular_pairs)
        .collect()
}

/// Upper bound for `v_p(N_m)`: `v_p((kp)!) − v_p((m−1)!)` with
/// `k = ⌊(m−3)/(p−1)⌋`. Vandiver's conjecture is a hypothesis supplied by the
/// caller and only recorded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub p: u64,
    pub m: u64,
    pub k: u64,
    pub vp_kp_factorial: u64,
    pub vp_m_minus_one_factorial: u64,
    pub bound: i64,
    pub vandiver_assumed: bool,
}

pub fn nm_bound(p: u64, m: u64, vandiver_assumed: bool) -> Result<BoundRow> {
    check_odd_prime(p)?;
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "m = {m} must be odd and at least 3"
        )));
    }
    let k = (m - 3) / (p - 1);
    let top = vp_factorial(p, k * p);
    let bottom = vp_factorial(p, m - 1);
    Ok(BoundRow {
        p,
        m,
        k,
        vp_kp_factorial: top,
        vp_m_minus_one_factorial: bottom,
        bound: top as i64 - bottom as i64,
        vandiver_assumed,
    })
}

/// Valuation model for `κ_m(σ_m)` along `m = k + j(p−1)`, with
/// `χ(γ) = 1 + p` and `v_p(κ_k(σ_k)) = v0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KappaModel {
    pub p: u64,
    pub precision: u32,
    pub k: u64,
    pub v0: u32,
    /// Unit part of the base coefficient.
    pub unit: u64,
}

impl KappaModel {
    pub fn new(p: u64, precision: u32, k: u64, v0: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if k < 3 || k.is_multiple_of(2) || k > p {
            return Err(Error::InvalidArgument(format!(
                "k = {k} must be odd with 3 <= k <= p"
            )));
        }
        Ok(Self {
            p,
            precision,
            k,
            v0,
            unit: 1,
        })
    }

    pub fn with_unit(mut self, unit: u64) -> Result<Self> {
        if unit.is_multiple_of(self.p) {
            return Err(Error::NotUnit(unit, self.p));
        }
        self.unit = unit;
        Ok(self)
    }

    pub fn index(&self, j: u64) -> u64 {
        self.k + j * (self.p - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaValuation {
    pub m: u64,
    pub closed_form: u64,
    pub simulated: Valuation,
}

impl SigmaValuation {
    pub fn agrees(&self) -> bool {
        self.simulated == Valuation::Finite(self.closed_form as u32)
    }
}

/// Closed form `v_p((jp)!) + v0` against the valuation of
/// `u0 · Π_{i=1}^{j} (χ(γ)^m − χ(γ)^{l_i})`, `l_i = k + (i−1)(p−1)`, in `Z/p^N`.
pub fn sigma_valuation(model: &KappaModel, j: u64) -> Result<SigmaValuation> {
    let p = model.p;
    let closed_form = vp_factorial(p, j * p) + model.v0 as u64;
    let needed = closed_form + 5;
    if (model.precision as u64) < needed {
        return Err(Error::Precision {
            needed: needed as u32,
            available: model.precision,
        });
    }
    let n = model.precision;
    let m = model.index(j);
    let chi = PadicInt::new(p, n, 1 + p as i128)?;
    let mut acc = PadicInt::new(p, n, model.unit as i128)?
        * PadicInt::new(p, n, p as i128)?.pow(model.v0 as u64);
    for i in 1..=j {
        let l = model.k + (i - 1) * (p - 1);
        acc = acc * (chi.pow(m) - chi.pow(l));
    }
    Ok(SigmaValuation {
        m,
        closed_form,
        simulated: acc.valuation(),
    })
}

/// `v_p((1+p)^m − (1+p)^l)` in `Z/p^N`.
pub fn step_valuation(p: u64, m: u64, l: u64, precision: u32) -> Result<Valuation> {
    let chi = PadicInt::new(p, precision, 1 + p as i128)?;
    Ok((chi.pow(m) - chi.pow(l)).valuation())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Bernoulli divisibility forced when `m` is the first degree where the
/// generators `σ_k` stop generating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IhgenCondition {
    pub p: u64,
    pub m: u64,
    pub parity: Parity,
    /// `m` for even `m`, `p − m` for odd `m`.
    pub bernoulli_index: u64,
    /// `p | B_{bernoulli_index}`.
    pub applies: bool,
    pub vandiver_assumed: bool,
    /// Odd branch only: the divisibility would force Vandiver's conjecture to
    /// fail at `p`, which contradicts the supplied flag.
    pub conflicts_with_vandiver: bool,
}

pub fn ihgen_condition(p: u64, m: u64, vandiver_assumed: bool) -> Result<IhgenCondition> {
    check_odd_prime(p)?;
    let (parity, index) = if m.is_multiple_of(2) {
        (Parity::Even, Some(m))
    } else {
        (Parity::Odd, p.checked_sub(m))
    };
    let index = index.filter(|&i| i >= 2 && i + 3 <= p).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "m = {m} puts the Bernoulli index outside 2..=p-3 for p = {p}"
        ))
    })?;
    let applies = bernoulli_mod_p(p)?.residue(index) == Some(0);
    Ok(IhgenCondition {
        p,
        m,
        parity,
        bernoulli_index: index,
        applies,
        vandiver_assumed,
        conflicts_with_vandiver: parity == Parity::Odd && applies && vandiver_assumed,
    })
}

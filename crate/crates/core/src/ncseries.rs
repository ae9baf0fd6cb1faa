//! Free nilpotent pro-p groups through the Magnus embedding.
//!
//! Generator `k` is sent to `1 + X_k` in the ring of noncommutative power
//! series over `Z/p^W`, truncated above total degree `c` (the class). The
//! lower central series term `N(i)` is modelled as the set of elements whose
//! difference from `1` starts in degree `≥ i`.
//!
//! Coefficients are stored densely, one flat block per degree, with words of
//! degree `d` indexed as base-`r` numbers (first letter most significant).
//! Concatenation is then `idx(uv) = idx(u)·r^|v| + idx(v)`.
//!
//! All arithmetic is carried at the working precision `W = N + g` where
//! `g = v_p(c!)` guard digits; equality, degrees and leading forms look only
//! at the residues modulo `p^N`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::padic::{
    check_odd_prime, modulus_for, mul_mod, padic_binomial, primitive_root, teichmuller,
    vp_factorial, PadicInt,
};

pub const DEFAULT_BUDGET: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub p: u64,
    /// Digits that are guaranteed correct (`N`).
    pub precision: u32,
    /// Nilpotency class `c`: the maximal retained total degree.
    pub class: usize,
    pub generators: usize,
    /// `δ` acts on generator `k` by `x_k ↦ x_k^{ω^{t_k}}`.
    pub delta_twists: Vec<i64>,
    /// `γ` acts on generator `k` by `x_k ↦ x_k^{(1+p)^{s_k}}`.
    pub gamma_twists: Vec<i64>,
    /// Maximal number of stored coefficients.
    pub budget: usize,
}

impl EngineConfig {
    pub fn new(p: u64, precision: u32, class: usize, generators: usize) -> Self {
        Self {
            p,
            precision,
            class,
            generators,
            delta_twists: vec![1; generators],
            gamma_twists: vec![1; generators],
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_delta_twists(mut self, twists: Vec<i64>) -> Self {
        self.delta_twists = twists;
        self
    }

    pub fn with_gamma_twists(mut self, twists: Vec<i64>) -> Self {
        self.gamma_twists = twists;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

struct EngineInner {
    config: EngineConfig,
    guard: u32,
    work_precision: u32,
    work_modulus: u64,
    exponent_precision: u32,
    report_modulus: u64,
    offsets: Vec<usize>,
    powers: Vec<usize>,
    total: usize,
    omega: PadicInt,
    chi_gamma: PadicInt,
}

/// Shared handle to a validated engine configuration.
#[derive(Clone)]
pub struct Engine(Arc<EngineInner>);

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Engine").field(&self.0.config).finish()
    }
}

impl PartialEq for Engine {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.config == other.0.config
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        check_odd_prime(config.p)?;
        if config.precision == 0 || config.class == 0 || config.generators == 0 {
            return Err(Error::InvalidArgument(
                "precision, class and generator count must be positive".into(),
            ));
        }
        let r = config.generators;
        if config.delta_twists.len() != r || config.gamma_twists.len() != r {
            return Err(Error::InvalidArgument(format!(
                "expected {r} delta and gamma twists, got {} and {}",
                config.delta_twists.len(),
                config.gamma_twists.len()
            )));
        }
        if config.generators > u8::MAX as usize {
            return Err(Error::InvalidArgument("too many generators".into()));
        }

        let mut powers = Vec::with_capacity(config.class + 1);
        let mut offsets = Vec::with_capacity(config.class + 2);
        let mut total: usize = 0;
        let mut pw: usize = 1;
        for d in 0..=config.class {
            if d > 0 {
                pw = pw.checked_mul(r).ok_or(Error::Budget {
                    needed: usize::MAX,
                    budget: config.budget,
                })?;
            }
            powers.push(pw);
            offsets.push(total);
            total = total.saturating_add(pw);
        }
        offsets.push(total);
        if total > config.budget {
            return Err(Error::Budget {
                needed: total,
                budget: config.budget,
            });
        }

        let p = config.p;
        let guard = vp_factorial(p, config.class as u64) as u32;
        let work_precision = config.precision + guard;
        let exponent_precision = work_precision + guard;
        let work_modulus = modulus_for(p, work_precision)?;
        modulus_for(p, exponent_precision)?;
        let report_modulus = modulus_for(p, config.precision)?;
        let omega = teichmuller(p, primitive_root(p)? as i64, exponent_precision)?;
        let chi_gamma = PadicInt::new(p, exponent_precision, 1 + p as i128)?;

        Ok(Engine(Arc::new(EngineInner {
            config,
            guard,
            work_precision,
            work_modulus,
            exponent_precision,
            report_modulus,
            offsets,
            powers,
            total,
            omega,
            chi_gamma,
        })))
    }

    pub fn config(&self) -> &EngineConfig {
        &self.0.config
    }

    pub fn prime(&self) -> u64 {
        self.0.config.p
    }

    pub fn class(&self) -> usize {
        self.0.config.class
    }

    pub fn generators(&self) -> usize {
        self.0.config.generators
    }

    pub fn guard_digits(&self) -> u32 {
        self.0.guard
    }

    pub fn work_precision(&self) -> u32 {
        self.0.work_precision
    }

    pub fn exponent_precision(&self) -> u32 {
        self.0.exponent_precision
    }

    /// Number of stored coefficients per element.
    pub fn coefficient_count(&self) -> usize {
        self.0.total
    }

    /// `ω`, the Teichmüller lift of the least primitive root mod `p`; the
    /// model's value of `χ(δ)`.
    pub fn omega(&self) -> PadicInt {
        self.0.omega
    }

    /// `χ(γ) = 1 + p`.
    pub fn chi_gamma(&self) -> PadicInt {
        self.0.chi_gamma
    }

    /// An integer as an exponent, at exponent precision.
    pub fn exponent(&self, value: i128) -> PadicInt {
        PadicInt::from_parts(
            self.prime(),
            self.0.exponent_precision,
            modulus_for(self.prime(), self.0.exponent_precision).expect("validated"),
            value,
        )
    }

    /// `χ(δ^i)^e = ω^{i·e}`, reduced through `ω^{p-1} = 1`.
    pub fn omega_power(&self, e: i64) -> PadicInt {
        let order = (self.prime() - 1) as i64;
        self.0.omega.pow(e.rem_euclid(order) as u64)
    }

    /// `χ(γ)^e = (1+p)^e`.
    pub fn chi_gamma_power(&self, e: i64) -> PadicInt {
        self.0.chi_gamma.pow_signed(e).expect("1+p is a unit")
    }

    /// Per-generator exponents of `δ^i`: `ω^{i·t_k}`.
    pub fn delta_exponents(&self, i: i64) -> Vec<PadicInt> {
        self.0
            .config
            .delta_twists
            .iter()
            .map(|&t| self.omega_power(i * t))
            .collect()
    }

    /// Per-generator exponents of `γ^i`: `(1+p)^{i·s_k}`.
    pub fn gamma_exponents(&self, i: i64) -> Vec<PadicInt> {
        self.0
            .config
            .gamma_twists
            .iter()
            .map(|&s| self.chi_gamma_power(i * s))
            .collect()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(NcSeries::one(self))
    }

    /// `1 + X_k`.
    pub fn generator(&self, k: usize) -> Result<GroupElement> {
        if k >= self.generators() {
            return Err(Error::InvalidArgument(format!(
                "generator {k} out of range (r = {})",
                self.generators()
            )));
        }
        let mut s = NcSeries::one(self);
        s.coeffs[self.0.offsets[1] + k] = 1;
        Ok(GroupElement(s))
    }

    /// Product of `factors` random `Z_p`-powers of random generators: a
    /// random element of the image of the free pro-p group.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, factors: usize) -> GroupElement {
        let modulus = modulus_for(self.prime(), self.0.exponent_precision).expect("validated");
        let mut g = self.identity();
        for _ in 0..factors {
            let k = rng.random_range(0..self.generators());
            let a = self.exponent(rng.random_range(0..modulus) as i128);
            let x = self.generator(k).expect("in range");
            g = &g * &x.zp_power(&a).expect("exponent at full precision");
        }
        g
    }

    fn word_at(&self, degree: usize, mut index: usize) -> Word {
        let r = self.generators();
        let mut letters = vec![0; degree];
        for slot in letters.iter_mut().rev() {
            *slot = index % r;
            index /= r;
        }
        Word(letters)
    }

    fn index_of(&self, word: &Word) -> Option<usize> {
        let r = self.generators();
        if word.0.len() > self.class() || word.0.iter().any(|&k| k >= r) {
            return None;
        }
        let local = word.0.iter().fold(0, |acc, &k| acc * r + k);
        Some(self.0.offsets[word.0.len()] + local)
    }

    fn check_same(&self, other: &Engine) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    /// Binomial coefficients `C(a, n)`, `0 ≤ n ≤ c`, as working-precision
    /// residues, each exact modulo `p^N` or better.
    fn binomials(&self, a: &PadicInt) -> Result<Vec<u64>> {
        let e = &self.0;
        if a.prime() != self.prime() {
            return Err(Error::ConfigMismatch);
        }
        if a.precision() < e.work_precision {
            return Err(Error::Precision {
                needed: e.work_precision,
                available: a.precision(),
            });
        }
        (0..=self.class())
            .map(|n| {
                let shift = vp_factorial(self.prime(), n as u64) as u32;
                let target = e.work_precision.min(a.precision() - shift);
                Ok(padic_binomial(a, n as u64, target)?.residue())
            })
            .collect()
    }
}

/// A word in the generators, `X_{k_1} X_{k_2} ⋯`; letters are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for k in &self.0 {
            write!(f, "X{}", k + 1)?;
        }
        Ok(())
    }
}

/// Truncated noncommutative power series with working-precision coefficients.
#[derive(Clone)]
pub struct NcSeries {
    engine: Engine,
    coeffs: Vec<u64>,
}

impl fmt::Debug for NcSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (w, c) in self.terms() {
            map.entry(&w.to_string(), &c.residue());
        }
        map.finish()
    }
}

impl NcSeries {
    pub fn zero(engine: &Engine) -> Self {
        Self {
            engine: engine.clone(),
            coeffs: vec![0; engine.0.total],
        }
    }

    pub fn one(engine: &Engine) -> Self {
        let mut s = Self::zero(engine);
        s.coeffs[0] = 1;
        s
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    fn modulus(&self) -> u64 {
        self.engine.0.work_modulus
    }

    /// Coefficient of `word` at working precision; zero for words beyond
    /// the truncation.
    pub fn coefficient(&self, word: &Word) -> PadicInt {
        let e = &self.engine.0;
        let r = self.engine.index_of(word).map_or(0, |i| self.coeffs[i]);
        PadicInt::from_parts(e.config.p, e.work_precision, e.work_modulus, r as i128)
    }

    /// Nonzero terms (modulo `p^N`) in degree-lexicographic order.
    pub fn terms(&self) -> Vec<(Word, PadicInt)> {
        let e = &self.engine.0;
        let mut out = Vec::new();
        for d in 0..=e.config.class {
            for i in 0..e.powers[d] {
                let c = self.coeffs[e.offsets[d] + i];
                if !c.is_multiple_of(e.report_modulus) {
                    out.push((
                        self.engine.word_at(d, i),
                        PadicInt::from_parts(
                            e.config.p,
                            e.config.precision,
                            e.report_modulus,
                            (c % e.report_modulus) as i128,
                        ),
                    ));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.engine.check_same(&other.engine)?;
        let m = self.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= m {
                    s - m
                } else {
                    s
                }
            })
            .collect();
        Ok(Self {
            engine: self.engine.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.engine.check_same(&other.engine)?;
        let m = self.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| if a >= b { a - b } else { a + m - b })
            .collect();
        Ok(Self {
            engine: self.engine.clone(),
            coeffs,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.engine.check_same(&other.engine)?;
        let mut out = vec![0; self.coeffs.len()];
        mul_into(&self.engine.0, &self.coeffs, &other.coeffs, &mut out);
        Ok(Self {
            engine: self.engine.clone(),
            coeffs: out,
        })
    }

    fn scale_residue(&self, s: u64) -> Self {
        let m = self.modulus();
        Self {
            engine: self.engine.clone(),
            coeffs: self.coeffs.iter().map(|&c| mul_mod(c, s, m)).collect(),
        }
    }

    /// Lowest degree carrying a coefficient nonzero modulo `p^N`.
    pub fn order(&self) -> Option<usize> {
        let e = &self.engine.0;
        (0..=e.config.class).find(|&d| {
            self.coeffs[e.offsets[d]..e.offsets[d + 1]]
                .iter()
                .any(|&c| c % e.report_modulus != 0)
        })
    }
}

fn mul_into(e: &EngineInner, a: &[u64], b: &[u64], out: &mut [u64]) {
    let c = e.config.class;
    let m = e.work_modulus;
    for du in 0..=c {
        let (a_off, nu) = (e.offsets[du], e.powers[du]);
        for iu in 0..nu {
            let x = a[a_off + iu];
            if x == 0 {
                continue;
            }
            for dv in 0..=c - du {
                let (b_off, nv) = (e.offsets[dv], e.powers[dv]);
                let o_off = e.offsets[du + dv] + iu * nv;
                let row = &mut out[o_off..o_off + nv];
                for (slot, &y) in row.iter_mut().zip(&b[b_off..b_off + nv]) {
                    if y != 0 {
                        let s = *slot + mul_mod(x, y, m);
                        *slot = if s >= m { s - m } else { s };
                    }
                }
            }
        }
    }
}

/// Element of the truncated group: a series with constant term 1.
#[derive(Clone)]
pub struct GroupElement(NcSeries);

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({:?})", self.0)
    }
}

/// Equality in the truncation: coefficients agree modulo `p^N`.
impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        if self.0.engine != other.0.engine {
            return false;
        }
        let m = self.0.engine.0.report_modulus;
        self.0
            .coeffs
            .iter()
            .zip(&other.0.coeffs)
            .all(|(a, b)| a % m == b % m)
    }
}

impl<'a> Mul<&'a GroupElement> for &'a GroupElement {
    type Output = GroupElement;

    /// Panics if the operands come from different engines; use
    /// [`GroupElement::mul`] for a checked product.
    fn mul(self, rhs: &'a GroupElement) -> GroupElement {
        GroupElement::mul(self, rhs).expect("group elements from different engines")
    }
}

impl GroupElement {
    /// Wrap a series; its constant term must be 1.
    pub fn from_series(series: NcSeries) -> Result<Self> {
        if series.coeffs[0] != 1 {
            return Err(Error::InvalidArgument("constant term must be 1".into()));
        }
        Ok(Self(series))
    }

    pub fn series(&self) -> &NcSeries {
        &self.0
    }

    pub fn engine(&self) -> &Engine {
        &self.0.engine
    }

    pub fn is_identity(&self) -> bool {
        self.lcs_degree().is_none()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.mul(&other.0)?))
    }

    fn augmentation(&self) -> NcSeries {
        let mut u = self.0.clone();
        u.coeffs[0] = 0;
        u
    }

    /// `(1+u)^{-1} = Σ_{k≤c} (-u)^k`, by Horner's rule.
    pub fn inv(&self) -> Self {
        let u = self.augmentation();
        let one = NcSeries::one(&self.0.engine);
        let mut acc = one.clone();
        for _ in 0..self.0.engine.class() {
            acc = one
                .sub(&u.mul(&acc).expect("same engine"))
                .expect("same engine");
        }
        Self(acc)
    }

    /// `(1+u)^a = Σ_{k≤c} C(a,k) u^k` for `a ∈ Z_p`; `a` must carry at least
    /// the engine's working precision.
    pub fn zp_power(&self, a: &PadicInt) -> Result<Self> {
        let engine = &self.0.engine;
        let binom = engine.binomials(a)?;
        let u = self.augmentation();
        let c = engine.class();
        let mut acc = NcSeries::zero(engine);
        acc.coeffs[0] = binom[c];
        for k in (1..c).rev() {
            acc = u.mul(&acc)?;
            let s = acc.coeffs[0] + binom[k];
            let m = acc.modulus();
            acc.coeffs[0] = if s >= m { s - m } else { s };
        }
        let mut out = u.mul(&acc)?;
        out.coeffs[0] = 1;
        Ok(Self(out))
    }

    /// Integer power, computed through the binomial series.
    pub fn pow(&self, e: i64) -> Self {
        self.zp_power(&self.0.engine.exponent(e as i128))
            .expect("exponent at full precision")
    }

    /// `[a, b] = a b a^{-1} b^{-1}`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.0.engine.check_same(&other.0.engine)?;
        Ok(&(&(self * other) * &self.inv()) * &other.inv())
    }

    /// Minimal degree of a nonzero coefficient of `g - 1`; `None` when `g`
    /// is the identity in the truncation (depth beyond the class).
    pub fn lcs_degree(&self) -> Option<usize> {
        self.augmentation().order()
    }

    /// Membership in the `i`-th lower central term, `N(i)`.
    pub fn in_lcs_term(&self, i: usize) -> bool {
        self.lcs_degree().is_none_or(|d| d >= i)
    }

    pub fn leading_form(&self) -> Result<LeadingForm> {
        let degree = self.lcs_degree().ok_or(Error::IdentityElement)?;
        let e = &self.0.engine.0;
        let p = e.config.p;
        let dense = self.0.coeffs[e.offsets[degree]..e.offsets[degree + 1]]
            .iter()
            .map(|&c| c % p)
            .collect();
        Ok(LeadingForm {
            degree,
            generators: e.config.generators,
            p,
            dense,
        })
    }

    /// Degree-one coefficients modulo `p^N`: the image in the abelianisation.
    pub fn abelian_part(&self) -> Vec<PadicInt> {
        let e = &self.0.engine.0;
        (0..e.config.generators)
            .map(|k| {
                PadicInt::from_parts(
                    e.config.p,
                    e.config.precision,
                    e.report_modulus,
                    (self.0.coeffs[e.offsets[1] + k] % e.report_modulus) as i128,
                )
            })
            .collect()
    }

    /// Ring substitution `X_k ↦ images[k] - 1`.
    pub fn substitute(&self, images: &[GroupElement]) -> Result<Self> {
        let engine = &self.0.engine;
        if images.len() != engine.generators() {
            return Err(Error::InvalidArgument(format!(
                "expected {} images, got {}",
                engine.generators(),
                images.len()
            )));
        }
        for img in images {
            engine.check_same(img.engine())?;
        }
        let us: Vec<NcSeries> = images.iter().map(|g| g.augmentation()).collect();
        let mut out = NcSeries::one(engine);
        let prefix = NcSeries::one(engine);
        substitute_rec(self, &us, &prefix, 0, 0, &mut out);
        Ok(Self(out))
    }

    /// Diagonal power substitution `x_k ↦ x_k^{exponents[k]}`, the form taken
    /// by the `δ` and `γ` actions. Agrees with [`Self::substitute`] on the
    /// images `(1+X_k)^{b_k}`.
    pub fn power_map(&self, exponents: &[PadicInt]) -> Result<Self> {
        let engine = &self.0.engine;
        let e = &engine.0;
        let r = e.config.generators;
        if exponents.len() != r {
            return Err(Error::InvalidArgument(format!(
                "expected {r} exponents, got {}",
                exponents.len()
            )));
        }
        let table = exponents
            .iter()
            .map(|b| engine.binomials(b))
            .collect::<Result<Vec<_>>>()?;
        let mut out = NcSeries::zero(engine);
        out.coeffs[0] = self.0.coeffs[0];
        let mut letters = Vec::with_capacity(e.config.class);
        for d in 1..=e.config.class {
            for i in 0..e.powers[d] {
                let alpha = self.0.coeffs[e.offsets[d] + i];
                if alpha == 0 {
                    continue;
                }
                letters.clear();
                letters.extend(engine.word_at(d, i).0);
                expand_runs(e, &table, &letters, 0, 0, 0, alpha, &mut out.coeffs);
            }
        }
        Ok(Self(out))
    }

    /// `δ^i g δ^{-i}`.
    pub fn conj_delta(&self, i: i64) -> Self {
        self.power_map(&self.0.engine.delta_exponents(i))
            .expect("engine exponents")
    }

    /// `γ^i g γ^{-i}`.
    pub fn conj_gamma(&self, i: i64) -> Self {
        self.power_map(&self.0.engine.gamma_exponents(i))
            .expect("engine exponents")
    }
}

fn substitute_rec(
    g: &GroupElement,
    us: &[NcSeries],
    prefix: &NcSeries,
    degree: usize,
    local: usize,
    out: &mut NcSeries,
) {
    let e = &g.0.engine.0;
    if degree == e.config.class {
        return;
    }
    let r = e.config.generators;
    for (k, u) in us.iter().enumerate() {
        let idx = local * r + k;
        let product = prefix.mul(u).expect("same engine");
        let alpha = g.0.coeffs[e.offsets[degree + 1] + idx];
        if alpha != 0 {
            *out = out.add(&product.scale_residue(alpha)).expect("same engine");
        }
        if product.coeffs.iter().any(|&c| c != 0) {
            substitute_rec(g, us, &product, degree + 1, idx, out);
        }
    }
}

/// Expand letter `letters[pos]` into runs `X_k^n`, `n ≥ 1`, weighted by
/// `C(b_k, n)`, accumulating into `out`.
#[allow(clippy::too_many_arguments)]
fn expand_runs(
    e: &EngineInner,
    table: &[Vec<u64>],
    letters: &[usize],
    pos: usize,
    out_degree: usize,
    out_local: usize,
    coef: u64,
    out: &mut [u64],
) {
    let m = e.work_modulus;
    if pos == letters.len() {
        let slot = &mut out[e.offsets[out_degree] + out_local];
        let s = *slot + coef;
        *slot = if s >= m { s - m } else { s };
        return;
    }
    let r = e.config.generators;
    let k = letters[pos];
    let remaining = letters.len() - pos - 1;
    let max_run = e.config.class - out_degree - remaining;
    let mut local = out_local;
    for n in 1..=max_run {
        local = local * r + k;
        let b = table[k][n];
        if b == 0 {
            continue;
        }
        expand_runs(
            e,
            table,
            letters,
            pos + 1,
            out_degree + n,
            local,
            mul_mod(coef, b, m),
            out,
        );
    }
}

/// Homogeneous leading part of `g - 1`, coefficients reduced mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingForm {
    pub degree: usize,
    generators: usize,
    p: u64,
    dense: Vec<u64>,
}

impl LeadingForm {
    /// Coefficient vector over `F_p`, indexed by words of the form's degree.
    pub fn vector(&self) -> &[u64] {
        &self.dense
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.dense.iter().all(|&c| c == 0)
    }

    pub fn terms(&self) -> BTreeMap<Word, u64> {
        self.dense
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let mut letters = vec![0; self.degree];
                let mut idx = i;
                for slot in letters.iter_mut().rev() {
                    *slot = idx % self.generators;
                    idx /= self.generators;
                }
                (Word(letters), c)
            })
            .collect()
    }
}

impl fmt::Display for LeadingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (w, c)) in terms.into_iter().enumerate() {
            let signed = if 2 * c > self.p {
                c as i64 - self.p as i64
            } else {
                c as i64
            };
            match (n, signed < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = signed.unsigned_abs();
            if mag == 1 {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}{w}")?;
            }
        }
        Ok(())
    }
}

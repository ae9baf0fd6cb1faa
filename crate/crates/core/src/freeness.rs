//! Derived generator towers `x_{i,j}` and graded freeness checks.
//!
//! The ambient engine has generators `y = X1` and `x_i = X_{i+1}`. The tower
//! is `x_{i,1} = x_i`, `x_{i,j+1} = [y, x_{i,j}] · x_{i,j}^{p·a_{i,j}}`.
//! Freeness is certified the way a minimality argument does it: elements are
//! sorted by depth and, within one depth, their leading forms must be
//! linearly independent over `F_p`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ncseries::{Engine, GroupElement};
use crate::padic::{inverse_mod, modulus_for, mul_mod, PadicInt};

#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub r: usize,
    pub depth: usize,
    /// `a[i][j-1] = a_{i+1,j}` for `1 ≤ j < depth`.
    pub a: Vec<Vec<PadicInt>>,
}

impl TowerSpec {
    pub fn zero(engine: &Engine, r: usize, depth: usize) -> Self {
        let a = vec![vec![engine.exponent(0); depth.saturating_sub(1)]; r];
        Self { r, depth, a }
    }

    /// Uniform residues modulo `p^W` (exponent precision).
    pub fn random<R: Rng + ?Sized>(engine: &Engine, r: usize, depth: usize, rng: &mut R) -> Self {
        let m = modulus_for(engine.prime(), engine.exponent_precision()).expect("validated");
        let a = (0..r)
            .map(|_| {
                (1..depth)
                    .map(|_| engine.exponent(rng.random_range(0..m) as i128))
                    .collect()
            })
            .collect();
        Self { r, depth, a }
    }
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub y: GroupElement,
    /// `elements[i][j-1] = x_{i+1,j}`.
    pub elements: Vec<Vec<GroupElement>>,
}

pub fn build_tower(engine: &Engine, spec: &TowerSpec) -> Result<Tower> {
    if engine.generators() != spec.r + 1 {
        return Err(Error::InvalidArgument(format!(
            "tower with r = {} needs {} generators, engine has {}",
            spec.r,
            spec.r + 1,
            engine.generators()
        )));
    }
    if spec.depth == 0
        || spec.a.len() != spec.r
        || spec.a.iter().any(|row| row.len() + 1 != spec.depth)
    {
        return Err(Error::InvalidArgument(
            "malformed tower coefficients".into(),
        ));
    }
    if spec.depth > engine.class() {
        return Err(Error::TruncationDepth {
            depth: spec.depth,
            class: engine.class(),
        });
    }
    let p = engine.exponent(engine.prime() as i128);
    let y = engine.generator(0)?;
    let mut elements = Vec::with_capacity(spec.r);
    for i in 0..spec.r {
        let mut row = vec![engine.generator(i + 1)?];
        for a in &spec.a[i] {
            let prev = row.last().expect("nonempty");
            let next = y.commutator(prev)?.mul(&prev.zp_power(&(p * *a))?)?;
            row.push(next);
        }
        elements.push(row);
    }
    Ok(Tower { y, elements })
}

/// `y x_{i,j} y^{-1} = x_{i,j+1} · x_{i,j}^{1 - p a_{i,j}}` for every stored
/// pair.
pub fn rearrangement_holds(tower: &Tower, spec: &TowerSpec) -> Result<bool> {
    let engine = tower.y.engine();
    let p = engine.exponent(engine.prime() as i128);
    let one = engine.exponent(1);
    let y_inv = tower.y.inv();
    for (row, coeffs) in tower.elements.iter().zip(&spec.a) {
        for (j, a) in coeffs.iter().enumerate() {
            let lhs = &(&tower.y * &row[j]) * &y_inv;
            let rhs = row[j + 1].mul(&row[j].zp_power(&(one - p * *a))?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBlock {
    pub degree: usize,
    pub count: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependency {
    pub degree: usize,
    /// `(input index, coefficient mod p)`; the combination of leading forms
    /// vanishes.
    pub combination: Vec<(usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    pub independent: bool,
    pub blocks: Vec<DegreeBlock>,
    pub witness: Option<Dependency>,
}

pub fn graded_independence(elements: &[GroupElement]) -> Result<IndependenceReport> {
    let mut by_degree: BTreeMap<usize, Vec<(usize, Vec<u64>)>> = BTreeMap::new();
    let mut p = 0;
    for (idx, g) in elements.iter().enumerate() {
        let lf = g.leading_form()?;
        p = lf.prime();
        by_degree
            .entry(lf.degree)
            .or_default()
            .push((idx, lf.vector().to_vec()));
    }
    let mut blocks = Vec::new();
    let mut witness = None;
    for (degree, rows) in by_degree {
        let count = rows.len();
        let (rank, dep) = eliminate(rows, p);
        if witness.is_none() {
            witness = dep.map(|combination| Dependency {
                degree,
                combination,
            });
        }
        blocks.push(DegreeBlock {
            degree,
            count,
            rank,
        });
    }
    Ok(IndependenceReport {
        independent: witness.is_none(),
        blocks,
        witness,
    })
}

/// Row reduction over `F_p` tracking combinations; returns the rank and the
/// first dependency found.
fn eliminate(rows: Vec<(usize, Vec<u64>)>, p: u64) -> (usize, Option<Vec<(usize, u64)>>) {
    let n = rows.len();
    let mut pivots: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
    let mut dependency = None;
    for (pos, (_, vector)) in rows.iter().enumerate() {
        let mut v = vector.clone();
        let mut combo = vec![0; n];
        combo[pos] = 1;
        for (col, pv, pc) in &pivots {
            let f = v[*col];
            if f != 0 {
                let neg = p - f;
                for (x, y) in v.iter_mut().zip(pv) {
                    *x = (*x + mul_mod(neg, *y, p)) % p;
                }
                for (x, y) in combo.iter_mut().zip(pc) {
                    *x = (*x + mul_mod(neg, *y, p)) % p;
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(col) => {
                let inv = inverse_mod(v[col], p).expect("nonzero mod p");
                v.iter_mut().for_each(|x| *x = mul_mod(*x, inv, p));
                combo.iter_mut().for_each(|x| *x = mul_mod(*x, inv, p));
                pivots.push((col, v, combo));
            }
            None if dependency.is_none() => {
                dependency = Some(
                    combo
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (rows[i].0, c))
                        .collect(),
                );
            }
            None => {}
        }
    }
    (pivots.len(), dependency)
}

/// A product of `Z_p`-powers of tower elements of one fixed `i`.
#[derive(Clone, Debug)]
enum TowerWord {
    Gen(usize),
    Pow(Box<TowerWord>, PadicInt),
    Prod(Vec<TowerWord>),
}

impl TowerWord {
    /// `y·w·y^{-1}`, rewritten with `y x_j y^{-1} = x_{j+1} x_j^{1 - p a_j}`.
    fn conjugate(&self, a: &[PadicInt], p: PadicInt, one: PadicInt) -> Option<TowerWord> {
        Some(match self {
            TowerWord::Gen(j) => TowerWord::Prod(vec![
                TowerWord::Gen(j + 1),
                TowerWord::Pow(Box::new(TowerWord::Gen(*j)), one - p * *a.get(*j)?),
            ]),
            TowerWord::Pow(w, e) => TowerWord::Pow(Box::new(w.conjugate(a, p, one)?), *e),
            TowerWord::Prod(ws) => TowerWord::Prod(
                ws.iter()
                    .map(|w| w.conjugate(a, p, one))
                    .collect::<Option<Vec<_>>>()?,
            ),
        })
    }

    fn evaluate(&self, row: &[GroupElement], identity: &GroupElement) -> Result<GroupElement> {
        match self {
            TowerWord::Gen(j) => Ok(row[*j].clone()),
            TowerWord::Pow(w, e) => w.evaluate(row, identity)?.zp_power(e),
            TowerWord::Prod(ws) => ws.iter().try_fold(identity.clone(), |acc, w| {
                acc.mul(&w.evaluate(row, identity)?)
            }),
        }
    }
}

/// For every `i` and `1 ≤ k ≤ k_max`, rewrite `y^k x_i y^{-k}` as a word in
/// the `x_{i,j}` and check the rewriting evaluates to the same element.
pub fn generation_check(tower: &Tower, spec: &TowerSpec, k_max: usize) -> Result<bool> {
    let engine = tower.y.engine();
    if k_max + 1 > engine.class() {
        return Err(Error::InvalidArgument(format!(
            "k_max = {k_max} must be at most c - 1 = {}",
            engine.class() - 1
        )));
    }
    if k_max + 1 > spec.depth {
        return Err(Error::TruncationDepth {
            depth: k_max + 1,
            class: spec.depth,
        });
    }
    let p = engine.exponent(engine.prime() as i128);
    let one = engine.exponent(1);
    let identity = engine.identity();
    let y_inv = tower.y.inv();
    for (row, a) in tower.elements.iter().zip(&spec.a) {
        let mut word = TowerWord::Gen(0);
        let mut direct = row[0].clone();
        for _ in 0..k_max {
            word = word.conjugate(a, p, one).ok_or(Error::TruncationDepth {
                depth: k_max + 1,
                class: spec.depth,
            })?;
            direct = &(&tower.y * &direct) * &y_inv;
            if word.evaluate(row, &identity)? != direct {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncseries::EngineConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn engine(p: u64, c: usize, gens: usize) -> Engine {
        Engine::new(EngineConfig::new(p, 4, c, gens)).unwrap()
    }

    #[test]
    fn zero_tower_is_left_normed_brackets() {
        let e = engine(3, 4, 3);
        let spec = TowerSpec::zero(&e, 2, 4);
        let tower = build_tower(&e, &spec).unwrap();
        let y = e.generator(0).unwrap();
        for i in 0..2 {
            assert_eq!(
                tower.elements[i][1],
                y.commutator(&tower.elements[i][0]).unwrap()
            );
            for j in 0..4 {
                assert_eq!(tower.elements[i][j].lcs_degree(), Some(j + 1));
            }
        }
        // Leading form of x_{1,3} is ad(Y)^2(X): YYX - 2YXY + XYY.
        let lf = tower.elements[0][2].leading_form().unwrap();
        assert_eq!(lf.to_string(), "X1X1X2 + X1X2X1 + X2X1X1");
    }

    #[test]
    fn rearrangement_for_random_coefficients() {
        let e = engine(5, 4, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = TowerSpec::random(&e, 2, 4, &mut rng);
        let tower = build_tower(&e, &spec).unwrap();
        assert!(rearrangement_holds(&tower, &spec).unwrap());
        assert!(generation_check(&tower, &spec, 2).unwrap());
        for row in &tower.elements {
            for pair in row.windows(2) {
                assert!(pair[1].lcs_degree() >= pair[0].lcs_degree());
            }
        }
    }

    #[test]
    fn p_power_terms_hide_below_the_degree_filtration() {
        // x^{pa} contributes p·a·X in degree 1, so x_{i,2} keeps depth 1 with a
        // leading form that vanishes mod p.
        let e = engine(5, 3, 2);
        let mut spec = TowerSpec::zero(&e, 1, 2);
        spec.a[0][0] = e.exponent(1);
        let tower = build_tower(&e, &spec).unwrap();
        let lf = tower.elements[0][1].leading_form().unwrap();
        assert_eq!(lf.degree, 1);
        assert!(lf.is_zero());
        assert!(!graded_independence(&tower.elements[0]).unwrap().independent);
    }

    #[test]
    fn depth_beyond_class_is_rejected() {
        let e = engine(3, 3, 2);
        let spec = TowerSpec::zero(&e, 1, 4);
        assert!(matches!(
            build_tower(&e, &spec),
            Err(Error::TruncationDepth { .. })
        ));
    }

    #[test]
    fn independence_examples() {
        let e = engine(5, 3, 2);
        let (y, x) = (e.generator(0).unwrap(), e.generator(1).unwrap());
        let report = graded_independence(&[x.clone(), y.commutator(&x).unwrap()]).unwrap();
        assert!(report.independent);
        assert_eq!(report.blocks.len(), 2);

        let report = graded_independence(&[x.clone(), x.pow(6)]).unwrap();
        assert!(!report.independent);
        let w = report.witness.unwrap();
        assert_eq!(w.degree, 1);
        assert_eq!(w.combination, vec![(0, 4), (1, 1)]);

        assert_eq!(
            graded_independence(&[x, e.identity()]),
            Err(Error::IdentityElement)
        );
    }

    #[test]
    fn two_towers_are_independent() {
        let e = engine(3, 4, 3);
        let spec = TowerSpec::zero(&e, 2, 4);
        let tower = build_tower(&e, &spec).unwrap();
        let all = tower.elements.concat();
        let report = graded_independence(&all).unwrap();
        assert!(report.independent);
        assert!(report.blocks.iter().all(|b| b.count == 2 && b.rank == 2));
    }

    #[test]
    fn appending_y() {
        let e = engine(3, 3, 3);
        let spec = TowerSpec::zero(&e, 2, 3);
        let tower = build_tower(&e, &spec).unwrap();
        let mut all = tower.elements.concat();
        let x1 = e.generator(1).unwrap();
        let x2 = e.generator(2).unwrap();
        all.push(tower.y.clone());
        assert!(graded_independence(&all).unwrap().independent);
        all.pop();
        all.push(&x1.pow(2) * &x2);
        assert!(!graded_independence(&all).unwrap().independent);
    }
}

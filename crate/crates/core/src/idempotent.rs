//! The eigenspace operator `ε_m` on a non-abelian group with a `δ`-action,
//! its stable limit `g^{(m)}`, and the `γ`-recursions for `g_m` and `σ_m`.

use crate::error::{Error, Result};
use crate::ncseries::{Engine, GroupElement};
use crate::padic::PadicInt;

/// The `δ`/`γ` action of an engine together with the constants needed by
/// `ε_m`.
///
/// `χ(δ)` is modelled by the Teichmüller lift `ω` and `χ(γ)` by `1 + p`.
/// Exponents depending on `m` through `χ(δ)` only see `m mod (p-1)`.
#[derive(Clone, Debug)]
pub struct DeltaGammaAction {
    engine: Engine,
    inv_order: PadicInt,
}

#[derive(Clone, Debug)]
pub struct Stabilized {
    pub element: GroupElement,
    /// Number of applications of `ε_m` that changed the element.
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct TowerStage {
    pub m: i64,
    pub element: GroupElement,
    /// Iterations used by the stabilisation producing this stage (0 for the
    /// seed).
    pub iterations: usize,
}

/// Depth data of one run of the `ε_m` iteration.
#[derive(Clone, Debug)]
pub struct DepthReport {
    pub m: i64,
    pub iterations: usize,
    /// `lcs_degree(h_i h_{i-1}^{-1})` for `i = 1..=c`.
    pub difference_degrees: Vec<Option<usize>>,
    /// `lcs_degree(a_{i,j})` for `i = 0..=c` (outer) and `j = 1..=p-2` (inner).
    pub defect_degrees: Vec<Vec<Option<usize>>>,
    /// Depth of the defect of `h_1 = g^{ε_m}` under `δ`, and the bound
    /// `2·lcs_degree(g)` it must meet.
    pub first_defect: (Option<usize>, Option<usize>),
    /// The stable element is `δ`-equivariant with weight `χ(δ)^m`.
    pub equivariant: bool,
}

fn at_least(depth: Option<usize>, bound: usize) -> bool {
    depth.is_none_or(|d| d >= bound)
}

impl DepthReport {
    /// `c_i ∈ N(i)` for every `i ≥ 1`. This is the depth the iteration
    /// actually achieves: `c_1 = g^{ε_m} g^{-1}` is generally of degree 1.
    pub fn differences_ok(&self) -> bool {
        self.differences_within(0)
    }

    /// `c_i ∈ N(i+1)` for every `i ≥ 1`.
    pub fn differences_ok_strict(&self) -> bool {
        self.differences_within(1)
    }

    fn differences_within(&self, shift: usize) -> bool {
        self.difference_degrees
            .iter()
            .enumerate()
            .all(|(i, &d)| at_least(d, i + 1 + shift))
    }

    pub fn defects_ok(&self) -> bool {
        self.defect_degrees
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().all(|&d| at_least(d, i + 1)))
    }

    pub fn first_defect_ok(&self) -> bool {
        match self.first_defect {
            (_, None) => true,
            (d, Some(bound)) => at_least(d, bound),
        }
    }

    pub fn holds(&self, class: usize) -> bool {
        self.iterations <= class
            && self.differences_ok()
            && self.defects_ok()
            && self.first_defect_ok()
            && self.equivariant
    }
}

impl DeltaGammaAction {
    pub fn new(engine: &Engine) -> Self {
        let inv_order = engine
            .exponent((engine.prime() - 1) as i128)
            .unit_inverse()
            .expect("p - 1 is a unit");
        Self {
            engine: engine.clone(),
            inv_order,
        }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.engine() == &self.engine {
            Ok(())
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    /// `g^{ε_m} = (Π_{i=0}^{p-2} δ^i g^{χ(δ^i)^{-m}} δ^{-i})^{1/(p-1)}`, the
    /// product taken left to right in increasing `i`.
    pub fn epsilon(&self, g: &GroupElement, m: i64) -> Result<GroupElement> {
        self.check(g)?;
        let order = (self.engine.prime() - 1) as i64;
        let m = m.rem_euclid(order);
        let mut product = self.engine.identity();
        for i in 0..order {
            let twisted = g.zp_power(&self.engine.omega_power(-i * m))?;
            product = product.mul(&twisted.conj_delta(i))?;
        }
        product.zp_power(&self.inv_order)
    }

    /// `[h_0, h_1, …, h_n]` with `h_0 = g` and `h_{i+1} = h_i^{ε_m}`.
    pub fn iterates(&self, g: &GroupElement, m: i64, n: usize) -> Result<Vec<GroupElement>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(g.clone());
        for _ in 0..n {
            let next = self.epsilon(out.last().expect("nonempty"), m)?;
            out.push(next);
        }
        Ok(out)
    }

    /// Iterate `ε_m` until the element stops changing in the truncation.
    ///
    /// In a class-`c` model the successive differences lie in `N(i+1)`, so at
    /// most `c` applications can change the element; failing to settle within
    /// `c + 1` applications is reported as [`Error::NonConvergence`].
    pub fn stabilize(&self, g: &GroupElement, m: i64) -> Result<Stabilized> {
        self.check(g)?;
        let limit = self.engine.class() + 1;
        let mut current = g.clone();
        for n in 0..=limit {
            let next = self.epsilon(&current, m)?;
            if next == current {
                return Ok(Stabilized {
                    element: current,
                    iterations: n,
                });
            }
            current = next;
        }
        Err(Error::NonConvergence(limit))
    }

    /// `a_j(h) = δ^j h δ^{-j} · h^{-χ(δ^j)^m}`; trivial exactly when `h` is
    /// `δ^j`-equivariant of weight `m`.
    pub fn equivariance_defect(&self, h: &GroupElement, m: i64, j: i64) -> Result<GroupElement> {
        self.check(h)?;
        let weight = -self.engine.omega_power(j * m);
        h.conj_delta(j).mul(&h.zp_power(&weight)?)
    }

    /// `δ h δ^{-1} = h^{χ(δ)^m}` in the truncation.
    pub fn is_equivariant(&self, h: &GroupElement, m: i64) -> Result<bool> {
        self.check(h)?;
        Ok(h.conj_delta(1) == h.zp_power(&self.engine.omega_power(m))?)
    }

    /// Run `c` applications of `ε_m` from `g` and record the depths of the
    /// differences `c_i` and the defects `a_{i,j}`.
    pub fn depth_report(&self, g: &GroupElement, m: i64) -> Result<DepthReport> {
        let class = self.engine.class();
        let order = (self.engine.prime() - 1) as i64;
        let stable = self.stabilize(g, m)?;
        let hs = self.iterates(g, m, class)?;
        let difference_degrees = hs
            .windows(2)
            .map(|w| w[1].mul(&w[0].inv()).map(|c| c.lcs_degree()))
            .collect::<Result<Vec<_>>>()?;
        let defect_degrees = hs
            .iter()
            .map(|h| {
                (1..order)
                    .map(|j| self.equivariance_defect(h, m, j).map(|a| a.lcs_degree()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let first_defect = (
            self.equivariance_defect(&hs[1], m, 1)?.lcs_degree(),
            g.lcs_degree().map(|d| 2 * d),
        );
        Ok(DepthReport {
            m,
            iterations: stable.iterations,
            difference_degrees,
            defect_degrees,
            first_defect,
            equivariant: self.is_equivariant(&stable.element, m)?,
        })
    }

    /// `γ g γ^{-1} · g^{-χ(γ)^m}`.
    pub fn recursion_step(&self, g: &GroupElement, m: i64) -> Result<GroupElement> {
        self.check(g)?;
        let weight = -self.engine.chi_gamma_power(m);
        g.conj_gamma(1).mul(&g.zp_power(&weight)?)
    }

    /// `[g_k, g_{k+(p-1)}, …]` by the bare recursion, without projection.
    pub fn g_tower(&self, seed: &GroupElement, k: i64, steps: usize) -> Result<Vec<TowerStage>> {
        self.tower(seed, k, steps, |_, x, _| Ok((x, 0)))
    }

    /// `[σ_k, σ_{k+(p-1)}, …]`, each stage the stable limit of `ε_m` applied
    /// to the recursion step of the previous one.
    pub fn sigma_tower(
        &self,
        seed: &GroupElement,
        k: i64,
        steps: usize,
    ) -> Result<Vec<TowerStage>> {
        self.tower(seed, k, steps, |this, x, m| {
            let s = this.stabilize(&x, m)?;
            Ok((s.element, s.iterations))
        })
    }

    /// As [`Self::sigma_tower`] but with a fixed number of `ε_m` applications
    /// per stage instead of the limit.
    pub fn sigma_tower_finite(
        &self,
        seed: &GroupElement,
        k: i64,
        steps: usize,
        applications: usize,
    ) -> Result<Vec<TowerStage>> {
        self.tower(seed, k, steps, |this, x, m| {
            let hs = this.iterates(&x, m, applications)?;
            Ok((hs.into_iter().last().expect("nonempty"), applications))
        })
    }

    fn tower<F>(
        &self,
        seed: &GroupElement,
        k: i64,
        steps: usize,
        finish: F,
    ) -> Result<Vec<TowerStage>>
    where
        F: Fn(&Self, GroupElement, i64) -> Result<(GroupElement, usize)>,
    {
        self.check(seed)?;
        let order = (self.engine.prime() - 1) as i64;
        let mut stages = vec![TowerStage {
            m: k,
            element: seed.clone(),
            iterations: 0,
        }];
        for _ in 0..steps {
            let prev = stages.last().expect("nonempty");
            let stepped = self.recursion_step(&prev.element, prev.m)?;
            let (element, iterations) = finish(self, stepped, prev.m)?;
            stages.push(TowerStage {
                m: prev.m + order,
                element,
                iterations,
            });
        }
        Ok(stages)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncseries::EngineConfig;
    use crate::padic::Valuation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn action(p: u64, n: u32, c: usize, delta: Vec<i64>, gamma: Vec<i64>) -> DeltaGammaAction {
        let r = delta.len();
        let cfg = EngineConfig::new(p, n, c, r)
            .with_delta_twists(delta)
            .with_gamma_twists(gamma);
        DeltaGammaAction::new(&Engine::new(cfg).unwrap())
    }

    #[test]
    fn identity_is_fixed() {
        let a = action(5, 4, 3, vec![1, 3], vec![1, 1]);
        let one = a.engine().identity();
        assert_eq!(a.epsilon(&one, 2).unwrap(), one);
        assert_eq!(a.recursion_step(&one, 3).unwrap(), one);
        let tower = a.sigma_tower(&one, 3, 3).unwrap();
        assert!(tower.iter().all(|s| s.element == one));
    }

    #[test]
    fn class_one_projector() {
        for p in [5u64, 7] {
            let order = (p - 1) as i64;
            for t in 0..order {
                let a = action(p, 4, 1, vec![t], vec![1]);
                let x = a.engine().generator(0).unwrap();
                for m in 0..order {
                    let got = a.epsilon(&x, m).unwrap();
                    let expected = if t == m {
                        x.clone()
                    } else {
                        a.engine().identity()
                    };
                    assert_eq!(got, expected, "p={p} t={t} m={m}");
                }
            }
        }
    }

    #[test]
    fn root_of_unity_sum_example() {
        // p = 5, t = 3, m = 1: 1 + ω² + ω⁴ + ω⁶ = 0 since ω² = -1.
        let a = action(5, 4, 1, vec![3], vec![1]);
        let x = a.engine().generator(0).unwrap();
        assert!(a.epsilon(&x, 1).unwrap().is_identity());
        assert_eq!(a.engine().omega_power(2).signed(), -1);
    }

    #[test]
    fn class_one_stabilizes_at_once() {
        let a = action(7, 3, 1, vec![2, 5], vec![1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = a.engine().random_element(&mut rng, 4);
        let s = a.stabilize(&g, 2).unwrap();
        assert!(s.iterations <= 1);
        assert_eq!(a.epsilon(&s.element, 2).unwrap(), s.element);
    }

    #[test]
    fn equivariant_element_is_returned_unchanged() {
        let a = action(5, 4, 3, vec![3, 1], vec![1, 1]);
        let x = a.engine().generator(0).unwrap();
        let s = a.stabilize(&x, 3).unwrap();
        assert_eq!(s.iterations, 0);
        assert_eq!(s.element, x);
    }

    #[test]
    fn stabilize_xy_example() {
        let a = action(5, 4, 3, vec![3, 1], vec![1, 1]);
        let e = a.engine();
        let (x, y) = (e.generator(0).unwrap(), e.generator(1).unwrap());
        let g = &x * &y;
        let s = a.stabilize(&g, 3).unwrap();
        assert!(s.iterations <= 3);
        let ab = s.element.abelian_part();
        assert_eq!(ab[0].residue(), 1);
        assert!(ab[1].is_zero());
        let report = a.depth_report(&g, 3).unwrap();
        assert!(report.holds(3), "{report:?}");
        // x·y with y of the wrong weight: the first difference is y^{-1} to
        // leading order, so it sits in N(1) but not N(2).
        assert_eq!(report.difference_degrees[0], Some(1));
        assert!(!report.differences_ok_strict());
    }

    #[test]
    fn congruent_indices_agree() {
        let a = action(7, 3, 3, vec![1, 4], vec![1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in -8..8 {
            let g = a.engine().random_element(&mut rng, 5);
            assert_eq!(a.epsilon(&g, m).unwrap(), a.epsilon(&g, m + 6).unwrap());
        }
    }

    #[test]
    fn recursion_step_class_one() {
        let p = 5;
        for (t, m) in [(3i64, 7i64), (11, 3), (1, 26), (2, 2)] {
            let a = action(p, 6, 1, vec![1], vec![t]);
            let x = a.engine().generator(0).unwrap();
            let stepped = a.recursion_step(&x, m).unwrap();
            let v = stepped.abelian_part()[0].valuation();
            if t == m {
                assert!(stepped.is_identity());
            } else {
                let expected = 1 + crate::padic::vp_int(p, (t - m) as i128).unwrap();
                assert_eq!(v, Valuation::Finite(expected), "t={t} m={m}");
            }
        }
    }

    #[test]
    fn sigma_tower_valuations_follow_factorials() {
        // δ-twist 3 = k, γ-twist 11 = k + 2(p-1) is the final weight.
        let a = action(5, 6, 2, vec![3], vec![11]);
        let x = a.engine().generator(0).unwrap();
        let tower = a.sigma_tower(&x, 3, 2).unwrap();
        let vals: Vec<Valuation> = tower
            .iter()
            .map(|s| s.element.abelian_part()[0].valuation())
            .collect();
        assert_eq!(
            vals,
            vec![
                Valuation::Finite(0),
                Valuation::Finite(1),
                Valuation::Finite(2)
            ]
        );
        assert_eq!(tower[2].m, 11);
    }

    #[test]
    fn sigma_and_g_towers_share_abelian_parts() {
        let a = action(5, 5, 3, vec![3, 1], vec![11, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = a.engine().random_element(&mut rng, 5);
        let seed = a.stabilize(&t, 3).unwrap().element;
        let sigma = a.sigma_tower(&seed, 3, 3).unwrap();
        let g = a.g_tower(&seed, 3, 3).unwrap();
        for (s, h) in sigma.iter().zip(&g) {
            assert_eq!(s.element.abelian_part(), h.element.abelian_part());
        }
    }
}

//! Seeded batch experiments over parameter grids.
//!
//! Sample `i` of a sweep draws from a ChaCha8 stream keyed by `(seed, i)`, so
//! results do not depend on evaluation order or on [`Exec`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exec::Exec;
use crate::freeness::{
    build_tower, generation_check, graded_independence, rearrangement_holds, TowerSpec,
};
use crate::idempotent::{DeltaGammaAction, DepthReport};
use crate::ncseries::{Engine, EngineConfig, GroupElement};

pub const DEFAULT_PRECISION: u32 = 6;

/// Deterministic generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A random element with `2r + c` generator-power factors.
pub fn random_group_element<R: Rng + ?Sized>(engine: &Engine, rng: &mut R) -> GroupElement {
    engine.random_element(rng, 2 * engine.generators() + engine.class())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub p: u64,
    pub class: usize,
    pub generators: usize,
}

impl GridPoint {
    pub fn engine(&self, precision: u32) -> Result<Engine> {
        Engine::new(EngineConfig::new(
            self.p,
            precision,
            self.class,
            self.generators,
        ))
    }
}

/// `p ∈ primes`, `1 ≤ c ≤ max_class`, `1 ≤ r ≤ max_generators`.
pub fn grid(primes: &[u64], max_class: usize, max_generators: usize) -> Vec<GridPoint> {
    let mut out = Vec::new();
    for &p in primes {
        for class in 1..=max_class {
            for generators in 1..=max_generators {
                out.push(GridPoint {
                    p,
                    class,
                    generators,
                });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CongruenceSample {
    pub index: u64,
    pub m: i64,
    pub congruent: bool,
}

/// Draws `samples` pairs `(g, m)` and compares `ε_m(g)` with `ε_{m+p-1}(g)`.
pub fn epsilon_congruence(
    engine: &Engine,
    samples: u64,
    seed: u64,
    exec: Exec,
) -> Result<Vec<CongruenceSample>> {
    let action = DeltaGammaAction::new(engine);
    let order = (engine.prime() - 1) as i64;
    exec.map((0..samples).collect(), |index| {
        let mut rng = sample_rng(seed, index);
        let g = random_group_element(engine, &mut rng);
        let m = rng.random_range(0..2 * order);
        let congruent = action.epsilon(&g, m)? == action.epsilon(&g, m + order)?;
        Ok(CongruenceSample {
            index,
            m,
            congruent,
        })
    })
    .into_iter()
    .collect()
}

#[derive(Clone, Debug)]
pub struct DepthSample {
    pub index: u64,
    pub report: DepthReport,
}

/// One depth report per random `(g, m)`.
pub fn depth_sweep(
    engine: &Engine,
    samples: u64,
    seed: u64,
    exec: Exec,
) -> Result<Vec<DepthSample>> {
    let action = DeltaGammaAction::new(engine);
    let order = (engine.prime() - 1) as i64;
    exec.map((0..samples).collect(), |index| {
        let mut rng = sample_rng(seed, index);
        let g = random_group_element(engine, &mut rng);
        let m = rng.random_range(0..2 * order);
        Ok(DepthSample {
            index,
            report: action.depth_report(&g, m)?,
        })
    })
    .into_iter()
    .collect()
}

/// Outcome of the derived-tower checks at one `(p, c, r, J)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreenessOutcome {
    pub p: u64,
    pub class: usize,
    pub r: usize,
    pub depth: usize,
    /// Rearrangement identity for random `a`.
    pub rearrangement: bool,
    /// `lcs_degree(x_{i,j}) = j` for `a ≡ 0`.
    pub zero_tower_depths: bool,
    /// Leading forms of the `a ≡ 0` tower are graded-independent.
    pub zero_tower_independent: bool,
    /// Conjugation rewriting for `k ≤ 2`, random `a`.
    pub generation: bool,
}

impl FreenessOutcome {
    pub fn passed(&self) -> bool {
        self.rearrangement
            && self.zero_tower_depths
            && self.zero_tower_independent
            && self.generation
    }
}

pub fn freeness_check(
    p: u64,
    precision: u32,
    class: usize,
    r: usize,
    depth: usize,
    seed: u64,
) -> Result<FreenessOutcome> {
    let engine = Engine::new(EngineConfig::new(p, precision, class, r + 1))?;
    let mut rng = sample_rng(seed, 0);
    let spec = TowerSpec::random(&engine, r, depth, &mut rng);
    let tower = build_tower(&engine, &spec)?;
    let rearrangement = rearrangement_holds(&tower, &spec)?;
    let k_max = 2.min(depth - 1).min(class - 1);
    let generation = generation_check(&tower, &spec, k_max)?;

    let zero_spec = TowerSpec::zero(&engine, r, depth);
    let zero = build_tower(&engine, &zero_spec)?;
    let zero_tower_depths = zero.elements.iter().all(|row| {
        row.iter()
            .enumerate()
            .all(|(j, x)| x.lcs_degree() == Some(j + 1))
    });
    let flat: Vec<GroupElement> = zero.elements.into_iter().flatten().collect();
    let zero_tower_independent = graded_independence(&flat)?.independent;
    Ok(FreenessOutcome {
        p,
        class,
        r,
        depth,
        rearrangement,
        zero_tower_depths,
        zero_tower_independent,
        generation,
    })
}

/// `(p, c, r, J)` over the product of the given value lists, skipping
/// `J > c`.
pub fn freeness_sweep(
    primes: &[u64],
    classes: &[usize],
    ranks: &[usize],
    depths: &[usize],
    precision: u32,
    seed: u64,
    exec: Exec,
) -> Result<Vec<FreenessOutcome>> {
    let mut points = Vec::new();
    for &p in primes {
        for &c in classes {
            for &r in ranks {
                for &j in depths.iter().filter(|&&j| j <= c) {
                    points.push((p, c, r, j));
                }
            }
        }
    }
    exec.map(
        points.into_iter().enumerate().collect(),
        |(i, (p, c, r, j))| freeness_check(p, precision, c, r, j, seed.wrapping_add(i as u64)),
    )
    .into_iter()
    .collect()
}

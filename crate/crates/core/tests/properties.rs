use proptest::prelude::*;

use num_bigint::BigInt;
use propg_core::bernoulli::{sigma_valuation, KappaModel};
use propg_core::experiments::{random_group_element, sample_rng};
use propg_core::freelie::{bracket, lyndon_words, LieElement};
use propg_core::idempotent::DeltaGammaAction;
use propg_core::padic::vp_factorial;
use propg_core::{Engine, EngineConfig, PadicInt, Valuation};

fn engine(p: u64, class: usize, r: usize, twists: Vec<i64>) -> Engine {
    let cfg = EngineConfig::new(p, 4, class, r)
        .with_delta_twists(twists.clone())
        .with_gamma_twists(twists.iter().map(|t| t + 2).collect());
    Engine::new(cfg).unwrap()
}

fn engine_params() -> impl Strategy<Value = (u64, usize, usize, Vec<i64>)> {
    (
        prop::sample::select(vec![3u64, 5, 7]),
        1usize..=3,
        1usize..=3,
    )
        .prop_flat_map(|(p, c, r)| {
            (
                Just(p),
                Just(c),
                Just(r),
                prop::collection::vec(-6i64..=6, r),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn padic_ring_laws(p in prop::sample::select(vec![3u64, 5, 7, 691]), a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
        let n = 5;
        let (x, y, z) = (
            PadicInt::new(p, n, a as i128).unwrap(),
            PadicInt::new(p, n, b as i128).unwrap(),
            PadicInt::new(p, n, c as i128).unwrap(),
        );
        prop_assert_eq!((x * y) * z, x * (y * z));
        prop_assert_eq!(x * (y + z), x * y + x * z);
        prop_assert_eq!(x - x, PadicInt::zero(p, n).unwrap());
        if x.is_unit() {
            prop_assert_eq!(x * x.unit_inverse().unwrap(), PadicInt::one(p, n).unwrap());
        }
        if let (Valuation::Finite(u), Valuation::Finite(v)) = (x.valuation(), y.valuation()) {
            if u + v < n {
                prop_assert_eq!((x * y).valuation(), Valuation::Finite(u + v));
            }
        }
    }

    #[test]
    fn group_laws((p, c, r, tw) in engine_params(), seed in any::<u64>()) {
        let e = engine(p, c, r, tw);
        let mut rng = sample_rng(seed, 0);
        let g = random_group_element(&e, &mut rng);
        let h = random_group_element(&e, &mut rng);
        let k = random_group_element(&e, &mut rng);
        prop_assert_eq!(&(&g * &h) * &k, &g * &(&h * &k));
        prop_assert!((&g * &g.inv()).is_identity());
        prop_assert!((&g.inv() * &g).is_identity());
        let comm = g.commutator(&h).unwrap();
        prop_assert!(comm.lcs_degree().is_none_or(|d| d >= 2));
    }

    #[test]
    fn zp_powers_add((p, c, r, tw) in engine_params(), seed in any::<u64>(), a in any::<i32>(), b in any::<i32>()) {
        let e = engine(p, c, r, tw);
        let g = random_group_element(&e, &mut sample_rng(seed, 1));
        let (x, y) = (e.exponent(a as i128), e.exponent(b as i128));
        let lhs = &g.zp_power(&x).unwrap() * &g.zp_power(&y).unwrap();
        prop_assert_eq!(lhs, g.zp_power(&(x + y)).unwrap());
        prop_assert_eq!(g.zp_power(&e.exponent(3)).unwrap(), g.pow(3));
    }

    #[test]
    fn delta_has_order_p_minus_one((p, c, r, tw) in engine_params(), seed in any::<u64>(), i in -8i64..8, j in -8i64..8) {
        let e = engine(p, c, r, tw);
        let g = random_group_element(&e, &mut sample_rng(seed, 2));
        let order = (p - 1) as i64;
        prop_assert_eq!(g.conj_delta(order), g.clone());
        prop_assert_eq!(g.conj_delta(i).conj_delta(j), g.conj_delta(i + j));
        let h = random_group_element(&e, &mut sample_rng(seed, 3));
        prop_assert_eq!((&g * &h).conj_delta(i), &g.conj_delta(i) * &h.conj_delta(i));
        prop_assert_eq!((&g * &h).conj_gamma(i), &g.conj_gamma(i) * &h.conj_gamma(i));
    }

    #[test]
    fn stable_limit_is_fixed_and_equivariant((p, c, r, tw) in engine_params(), seed in any::<u64>(), m in -6i64..12) {
        let e = engine(p, c, r, tw);
        let action = DeltaGammaAction::new(&e);
        let g = random_group_element(&e, &mut sample_rng(seed, 4));
        let s = action.stabilize(&g, m).unwrap();
        prop_assert!(s.iterations <= c);
        prop_assert_eq!(action.epsilon(&s.element, m).unwrap(), s.element.clone());
        prop_assert!(action.is_equivariant(&s.element, m).unwrap());
        let shifted = action.stabilize(&g, m + (p - 1) as i64).unwrap();
        prop_assert_eq!(shifted.element, s.element);
    }

    #[test]
    fn substitution_is_a_homomorphism((p, c, r, tw) in engine_params(), seed in any::<u64>()) {
        let e = engine(p, c, r, tw);
        let mut rng = sample_rng(seed, 5);
        let images: Vec<_> = (0..r).map(|_| random_group_element(&e, &mut rng)).collect();
        let g = random_group_element(&e, &mut rng);
        let h = random_group_element(&e, &mut rng);
        let lhs = (&g * &h).substitute(&images).unwrap();
        let rhs = &g.substitute(&images).unwrap() * &h.substitute(&images).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sigma_valuation_matches_closed_form(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        k_half in 1u64..7,
        j in 0u64..8,
        v0 in 0u32..4,
        unit in 1u64..1000,
    ) {
        let k = (2 * k_half + 1).min(p);
        prop_assume!(unit % p != 0);
        let needed = (vp_factorial(p, j * p) + v0 as u64 + 5) as u32;
        let model = KappaModel::new(p, needed, k, v0).unwrap().with_unit(unit).unwrap();
        let r = sigma_valuation(&model, j).unwrap();
        prop_assert!(r.agrees(), "{:?}", r);
    }

    #[test]
    fn lie_bracket_is_alternating_and_satisfies_jacobi(
        ca in prop::collection::vec(-3i64..=3, 3),
        cb in prop::collection::vec(-3i64..=3, 3),
        cc in prop::collection::vec(-3i64..=3, 2),
    ) {
        let combo = |deg: u32, cs: &[i64]| {
            lyndon_words(deg).into_iter().zip(cs).fold(LieElement::zero(), |acc, (w, &c)| {
                acc.add(&LieElement::basis(w).scale(&BigInt::from(c)))
            })
        };
        // degrees 13, 11 and 8 have 3, 2 and 1 basis words
        let a = combo(13, &ca);
        let b = combo(11, &cb);
        let c = combo(8, &cc);
        prop_assert!(bracket(&a, &a).is_zero());
        prop_assert_eq!(bracket(&a, &b), bracket(&b, &a).scale(&BigInt::from(-1)));
        let j = bracket(&a, &bracket(&b, &c))
            .add(&bracket(&b, &bracket(&c, &a)))
            .add(&bracket(&c, &bracket(&a, &b)));
        prop_assert!(j.is_zero());
    }
}

mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use upcube::bounds::{
    independent_value, lp_max_s1, occupancy_bound, optimal_profile, profile_feasible,
};
use upcube::constructions::{q_binomial_split, q_formula, ConstructionParams};
use upcube::lift::{gadget_bias, pull_back, topup_order, topup_to_count, LiftGadget};
use upcube::posets::{enumerate_upsets, WeightedPoset};
use upcube::search::{local_search, LocalSearchConfig, ObjectiveKind, SearchObjective};
use upcube::setcube::{
    hk_defect, measure as lib_measure, occupancy as lib_occupancy, parse_upset,
    two_set_exactly_one, write_upset,
};
use upcube::{Bias, Family};

fn family(max_n: u32) -> impl Strategy<Value = (u32, Vec<bool>)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), 1usize << n)))
}

/// An upset given by generators; membership comes from the oracle closure.
fn upset_in(n: u32) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(0..1u32 << n, 0..6).prop_map(move |g| closure(&g, n))
}

fn upset(max_n: u32) -> impl Strategy<Value = (u32, Vec<bool>)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), upset_in(n)))
}

fn upset_pair(max_n: u32) -> impl Strategy<Value = (u32, Vec<bool>, Vec<bool>)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), upset_in(n), upset_in(n)))
}

fn upset_triple(max_n: u32) -> impl Strategy<Value = (u32, [Vec<bool>; 3])> {
    (1..=max_n).prop_flat_map(|n| (Just(n), [upset_in(n), upset_in(n), upset_in(n)]))
}

fn rational_bias() -> impl Strategy<Value = BigRational> {
    (1i64..=24).prop_flat_map(|d| (0..=d).prop_map(move |a| r(a, d)))
}

fn interior_bias() -> impl Strategy<Value = BigRational> {
    (2i64..=24).prop_flat_map(|d| (1..d).prop_map(move |a| r(a, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_idempotent_and_matches_oracle((n, m) in family(8)) {
        let f = family_of(n, &m);
        let gens: Vec<u32> = (0..1u32 << n).filter(|&x| m[x as usize]).collect();
        let up = f.up_closure();
        prop_assert_eq!(members(&up), closure(&gens, n));
        prop_assert_eq!(up.up_closure(), up.clone());
        prop_assert_eq!(f.is_upward_closed(), is_upset(&m, n));
        prop_assert!(up.is_upward_closed());
        prop_assert!(f.down_closure().is_downward_closed());
    }

    #[test]
    fn upset_text_round_trips((n, m) in upset(8)) {
        let f = family_of(n, &m);
        let text = write_upset(&f).unwrap();
        prop_assert_eq!(parse_upset(&text).unwrap(), f);
    }

    #[test]
    fn de_morgan((n, a) in family(7), seed in any::<u64>()) {
        let b: Vec<bool> = (0..a.len()).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let (fa, fb) = (family_of(n, &a), family_of(n, &b));
        prop_assert_eq!(fa.union(&fb).unwrap().complement(), fa.complement().intersect(&fb.complement()).unwrap());
        prop_assert_eq!(fa.intersect(&fb).unwrap().complement(), fa.complement().union(&fb.complement()).unwrap());
        prop_assert_eq!(fa.complement().complement(), fa.clone());
        prop_assert_eq!(fa.complement().is_downward_closed(), fa.is_upward_closed());
    }

    #[test]
    fn two_set_exactly_one_bound((n, x, y) in upset_pair(8), p in rational_bias()) {
        let (fx, fy) = (family_of(n, &x), family_of(n, &y));
        let b = Bias::new(p.clone()).unwrap();
        let (mx, my) = (measure(&x, n, &p), measure(&y, n, &p));
        let one = two_set_exactly_one(&fx, &fy, &b).unwrap();
        let sym: Vec<bool> = x.iter().zip(&y).map(|(a, b)| a ^ b).collect();
        prop_assert_eq!(&one, &measure(&sym, n, &p));
        prop_assert!(one <= &mx + &my - r(2, 1) * &mx * &my);
    }

    #[test]
    fn measure_is_monotone((n, x, y) in upset_pair(8), p in rational_bias()) {
        let b = Bias::new(p).unwrap();
        let fx = family_of(n, &x);
        let big = fx.union(&family_of(n, &y)).unwrap();
        prop_assert!(lib_measure(&fx, &b) <= lib_measure(&big, &b));
    }

    #[test]
    fn occupancy_is_normalized((n, fs) in upset_triple(7), p in rational_bias()) {
        let b = Bias::new(p.clone()).unwrap();
        let [x, y, z] = fs.each_ref().map(|m| family_of(n, m));
        let prof = lib_occupancy(&x, &y, &z, &b).unwrap();
        prop_assert!(prof.is_normalized());
        let (counts, dens) = occupancy([&fs[0], &fs[1], &fs[2]], n, &p);
        prop_assert_eq!(prof.counts, counts);
        prop_assert_eq!(prof.densities, dens);
    }

    #[test]
    fn uniform_measure_is_count_over_size((n, m) in family(10)) {
        let f = family_of(n, &m);
        let mu = lib_measure(&f, &Bias::uniform());
        prop_assert_eq!(mu, BigRational::new(BigInt::from(f.count()), BigInt::from(1u64 << n)));
    }

    #[test]
    fn binomial_split_identity(n in 4u32..=14, l_seed in any::<u32>(), p in interior_bias()) {
        let l = 1 + l_seed % (n - 2);
        let params = ConstructionParams::new(n, l, Bias::new(p.clone()).unwrap()).unwrap();
        let q = q_formula(&params).unwrap();
        let (a, b) = q_binomial_split(&params).unwrap();
        let one = BigRational::one();
        prop_assert_eq!(&a + &b, one.clone());
        prop_assert_eq!(r(2, 1) * &p * (&one - &p) * a + (&one - &p) * (&one - &p) * b, q);
    }

    #[test]
    fn pull_back_preserves_measure_and_closure(
        (b, gm) in (1u32..=3).prop_flat_map(|b| (Just(b), upset_in(b))),
        (m, s) in upset(4),
    ) {
        let g = LiftGadget::new(family_of(b, &gm)).unwrap();
        let bias = gadget_bias(&g).unwrap();
        let lifted = pull_back(&family_of(m, &s), &g).unwrap();
        prop_assert!(lifted.is_upward_closed());
        prop_assert_eq!(
            lib_measure(&lifted, &Bias::uniform()),
            measure(&s, m, bias.value())
        );
    }

    #[test]
    fn topup_prefixes_stay_closed_and_keep_s1((n, fs) in upset_triple(7)) {
        let [x, y, z0] = fs.each_ref().map(|m| family_of(n, m));
        let pool = x.intersect(&y).unwrap().difference(&z0).unwrap();
        let order = topup_order(&pool);
        let s1_before = lib_occupancy(&x, &y, &z0, &Bias::uniform()).unwrap().counts[1];
        for k in 0..=order.len() {
            let z = topup_to_count(&z0, &pool, z0.count() + k as u64).unwrap();
            prop_assert!(is_upset(&members(&z), n));
            prop_assert_eq!(z.count(), z0.count() + k as u64);
            prop_assert_eq!(lib_occupancy(&x, &y, &z, &Bias::uniform()).unwrap().counts[1], s1_before);
        }
    }

    #[test]
    fn poset_upsets_match_brute_force(
        size in 1usize..=6,
        edges in prop::collection::vec((0usize..6, 0usize..6), 0..8),
        raw in prop::collection::vec(0i64..5, 6),
    ) {
        // keep only x<y index pairs so the relation is acyclic
        let rel: Vec<(usize, usize)> = edges.into_iter().filter(|&(x, y)| x < y && y < size).collect();
        let total: i64 = raw[..size].iter().sum::<i64>() + size as i64;
        let weights: Vec<BigRational> = raw[..size].iter().map(|&w| r(w + 1, total)).collect();
        let labels: Vec<String> = (0..size).map(|i| format!("e{i}")).collect();
        let poset = WeightedPoset::new(labels, &rel, weights).unwrap();
        let mut reach = vec![vec![false; size]; size];
        for &(x, y) in &rel {
            reach[x][y] = true;
        }
        for k in 0..size {
            for i in 0..size {
                for j in 0..size {
                    reach[i][j] |= reach[i][k] && reach[k][j];
                }
            }
        }
        let brute: Vec<u32> = (0..1u32 << size)
            .filter(|&s| (0..size).all(|x| s >> x & 1 == 0 || (0..size).all(|y| !reach[x][y] || s >> y & 1 == 1)))
            .collect();
        let mut lib: Vec<u32> = enumerate_upsets(&poset).unwrap().iter().map(|u| u.0).collect();
        lib.sort();
        prop_assert_eq!(lib, brute);
        prop_assert_eq!(poset.weight(poset.full_mask()), BigRational::one());
    }

    #[test]
    fn lp_matches_bound_and_dominates(rho in interior_bias()) {
        let sol = lp_max_s1(&rho).unwrap();
        prop_assert_eq!(&sol.objective, &occupancy_bound(&rho));
        prop_assert!(profile_feasible(&sol.profile, &rho));
        prop_assert_eq!(sol.profile.clone(), optimal_profile(&rho));
        prop_assert!(occupancy_bound(&rho) >= independent_value(&rho));
        prop_assert!(lp_grid_max(&rho, 12) <= sol.objective);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn correlation_is_nonnegative((n, u, v) in upset_pair(10), p in rational_bias()) {
        let b = Bias::new(p).unwrap();
        let d = hk_defect(&family_of(n, &u), &family_of(n, &v), &b).unwrap();
        prop_assert!(!d.is_negative());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_results_are_sound(n in 3u32..=5, seed in any::<u64>(), min_part in any::<bool>()) {
        let kind = if min_part { ObjectiveKind::MinPartDensity } else { ObjectiveKind::S1Density };
        let universe = 1i64 << n;
        let rho = r(universe / 2, universe);
        let cfg = LocalSearchConfig::new(n, rho, SearchObjective::uniform(kind), seed, 400);
        let res = local_search(&cfg).unwrap();
        prop_assert!(res.is_sound());
        prop_assert!(res.iterations <= 400);
    }
}

#[test]
fn non_monotone_gadget_breaks_closure() {
    // I = {{1}} is not upward closed: {1,2} maps to 0 while {1} maps to 1
    let g = LiftGadget::new(Family::from_points(2, [upcube::Point(0b01)]).unwrap()).unwrap();
    assert!(gadget_bias(&g).is_err());
    let lifted = pull_back(&upcube::constructions::dictator(1, 1).unwrap(), &g).unwrap();
    assert!(!lifted.is_upward_closed());
}

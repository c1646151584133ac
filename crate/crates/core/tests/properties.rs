mod common;

use std::sync::OnceLock;

use common::*;
use grpbase::algebra::Field;
use grpbase::baseconstruct::find_base;
use grpbase::matgrp::{orbit_size, MatGroup};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ambient(which: usize) -> &'static MatGroup {
    static GROUPS: OnceLock<Vec<MatGroup>> = OnceLock::new();
    let all = GROUPS.get_or_init(|| {
        vec![
            gl(&Field::new(5, 1).unwrap(), 2),
            gl(&Field::new(7, 1).unwrap(), 2),
            gl(&Field::new(2, 1).unwrap(), 3),
            gl(&Field::new(3, 2).unwrap(), 2),
        ]
    });
    &all[which]
}

fn gamma_l(p: u32) -> &'static MatGroup {
    static GROUPS: OnceLock<Vec<MatGroup>> = OnceLock::new();
    let all = GROUPS.get_or_init(|| [3, 5, 7].into_iter().map(|p| gamma_l1(p, 2)).collect());
    &all[[3, 5, 7].iter().position(|&q| q == p).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn coprime_subgroups_have_certified_bases(seed in any::<u64>(), which in 0usize..4) {
        let amb = ambient(which);
        let p = amb.ops().field.p();
        let g = random_subgroup(amb, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assume!(is_coprime(g.order(), p));
        let bp = find_base(&g, CAP).unwrap();
        prop_assert!(bp.is_verified(), "{} on order {}", bp.path, g.order());
        let m = orbit_size(&g, &bp.x).max(orbit_size(&g, &bp.y));
        prop_assert!(m * m >= g.order());
    }

    #[test]
    fn find_base_is_deterministic(seed in any::<u64>(), which in 0usize..4) {
        let g = random_subgroup(ambient(which), &mut ChaCha8Rng::seed_from_u64(seed));
        let a = find_base(&g, CAP);
        let b = find_base(&g, CAP);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.x, b.x);
                prop_assert_eq!(a.y, b.y);
                prop_assert_eq!(a.path, b.path);
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn gamma_reports_respect_the_bound(seed in any::<u64>(), p in prop::sample::select(vec![3u32, 5, 7])) {
        let g = random_subgroup(gamma_l(p), &mut ChaCha8Rng::seed_from_u64(seed));
        let bp = find_base(&g, CAP).unwrap();
        prop_assert!(bp.is_verified());
        for r in &bp.gamma {
            prop_assert!(r.bad <= r.bound, "{r:?}");
        }
    }
}

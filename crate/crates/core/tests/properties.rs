use std::collections::BTreeMap;

use num_integer::Integer;
use proptest::prelude::*;

use tropfan::chow::chow_dims;
use tropfan::compact::compactify;
use tropfan::homology::{
    complex_for, homology_table, smooth_check, verify_tm_coefficients, verify_tm_homology, SmoothCriterion, Space,
    Theory,
};
use tropfan::io::{parse, FanFile};
use tropfan::weights::{check_balancing, divisor, PLFunction};
use tropfan::zoo::{self, ZOO};
use tropfan::{Fan, Orientation};

fn zoo_fan() -> impl Strategy<Value = String> {
    prop::sample::select(ZOO.to_vec()).prop_map(str::to_string)
}

/// The same fan file with its rays permuted.
fn relabel(file: &FanFile, perm: &[usize]) -> FanFile {
    let mut rays = vec![Vec::new(); file.rays.len()];
    for (i, r) in file.rays.iter().enumerate() {
        rays[perm[i]] = r.clone();
    }
    let cones = file.cones.iter().map(|c| c.iter().map(|&r| perm[r]).collect()).collect();
    FanFile {
        rays,
        cones,
        ..file.clone()
    }
}

/// A balanced one-dimensional fan in the plane with three rays `u`, `v`
/// and the primitive vector of `-(u+v)` carrying the gcd as its weight.
fn tripod() -> impl Strategy<Value = (Fan, Orientation)> {
    let v = (-4i64..=4, -4i64..=4).prop_filter("nonzero", |&(a, b)| a != 0 || b != 0);
    (v.clone(), v)
        .prop_filter("independent", |((a, b), (c, d))| a * d - b * c != 0)
        .prop_map(|((a, b), (c, d))| {
            let prim = |x: i64, y: i64| {
                let g = x.gcd(&y);
                (vec![x / g, y / g], g)
            };
            let (u, gu) = prim(a, b);
            let (v, gv) = prim(c, d);
            let (s, g) = prim(-(u[0] * gu + v[0] * gv), -(u[1] * gu + v[1] * gv));
            let fan = Fan::new(2, vec![u, v, s], vec![vec![0], vec![1], vec![2]]).unwrap();
            let w: BTreeMap<usize, i64> = [(1, gu), (2, gv), (3, g)].into_iter().collect();
            (fan, Orientation::new(w).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_rays_preserves_invariants(name in zoo_fan(), seed in any::<u64>()) {
        let file = zoo::example(&name).unwrap().canonical().unwrap();
        prop_assume!(file.product_of.is_none() && file.function.is_none());
        let n = file.rays.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = file.load().unwrap().fan;
        let b = relabel(&file, &perm).load().unwrap().fan;
        prop_assert_eq!(a.f_vector(), b.f_vector());
        for space in [Space::Fan, Space::Compactification] {
            for th in [Theory::BorelMoore, Theory::Ordinary] {
                prop_assert_eq!(
                    homology_table(&a, &space, th).unwrap().grid,
                    homology_table(&b, &space, th).unwrap().grid
                );
            }
        }
        if a.is_simplicial() {
            prop_assert_eq!(chow_dims(&a).unwrap(), chow_dims(&b).unwrap());
        }
    }

    #[test]
    fn canonical_form_is_idempotent(name in zoo_fan()) {
        let c = zoo::example(&name).unwrap().canonical().unwrap();
        let text = c.to_json();
        let again = parse(&text).unwrap().canonical().unwrap();
        prop_assert_eq!(&again, &c);
        prop_assert_eq!(again.to_json(), text);
    }

    #[test]
    fn linear_functions_have_empty_divisors(name in zoo_fan(), l in prop::collection::vec(-5i64..=5, 4)) {
        let z = zoo::example(&name).unwrap().load().unwrap();
        let lin = &l[..z.fan.ambient_rank()];
        let f = PLFunction::linear(&z.fan, lin);
        prop_assert!(divisor(&z.fan, &z.weights, &f).unwrap().is_empty());
    }

    #[test]
    fn divisor_ignores_linear_shifts(a in -3i64..=3, b in -3i64..=3) {
        let l = zoo::example("lambda2").unwrap().load().unwrap();
        let f = l.function.clone().unwrap();
        let d0 = divisor(&l.fan, &l.weights, &f).unwrap();
        let d1 = divisor(&l.fan, &l.weights, &f.add_linear(&[a, b])).unwrap();
        prop_assert_eq!(d0.orders, d1.orders);
    }

    #[test]
    fn tripods_are_consistent((fan, w) in tripod()) {
        prop_assert!(check_balancing(&fan, &w).unwrap().is_balanced());
        let cx = compactify(&fan);
        for th in [Theory::Ordinary, Theory::BorelMoore, Theory::Compact] {
            for p in 0..=1 {
                prop_assert!(complex_for(&cx, &Space::Fan, th, p).unwrap().is_complex());
                prop_assert!(complex_for(&cx, &Space::Compactification, th, p).unwrap().is_complex());
            }
        }
        let hc = homology_table(&fan, &Space::Fan, Theory::Compact).unwrap();
        let bm = homology_table(&fan, &Space::Fan, Theory::BorelMoore).unwrap();
        prop_assert_eq!(hc.grid, bm.grid);
        let local = smooth_check(&fan, &w, SmoothCriterion::Local).unwrap().smooth;
        let aksnes = smooth_check(&fan, &w, SmoothCriterion::Aksnes).unwrap().smooth;
        prop_assert_eq!(local, aksnes);
    }

    #[test]
    fn linear_modifications_verify(l in prop::collection::vec(-4i64..=4, 2)) {
        let z = zoo::example("lambda2").unwrap().load().unwrap();
        let f = PLFunction::linear(&z.fan, &l);
        prop_assert!(verify_tm_coefficients(&z.fan, &z.weights, &f).unwrap().passed);
        prop_assert!(verify_tm_homology(&z.fan, &z.weights, &f).unwrap().passed);
    }
}

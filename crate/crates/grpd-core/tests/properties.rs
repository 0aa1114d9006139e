//! Property tests for the algebraic invariants: factorizations, dual
//! certificates, engine agreement, chain identities and symmetry of the
//! entrance criterion.

mod common;

use std::collections::BTreeMap;

use grpd_core::drgroupoid::{refine_pairs, refine_points, window_boundary, window_paths, Path, WindowFunction};
use grpd_core::dynsys::{compression_exists, pseudoloop_exists};
use grpd_core::exactlin::{
    feasible_point, int, rat, rational_feasible, simplex_feasible, snf, stiemke_alternative,
    AlternativeCertificate, Feasibility, Int, IntMatrix, LinearInequality, Rational,
};
use grpd_core::fibered::{h0_class_equal, trace_phi, ChainFunction};
use grpd_core::fibered::{diagonal_indicator, enumerate_sections};
use grpd_core::graphmodel::{adjacency_transfer, cycles_with_entrance, transfer_apply};
use grpd_core::oracle::{chain_check, h0_equal_bruteforce};
use num::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |es| {
            let rows: Vec<Vec<i64>> = es.chunks(c).map(|ch| ch.to_vec()).collect();
            IntMatrix::from_rows(&rows).expect("rectangular entries")
        })
    })
}

fn satisfies(point: &[Rational], system: &[LinearInequality]) -> bool {
    system.iter().all(|row| {
        let lhs: Rational = row
            .coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| c * x)
            .fold(row.constant.clone(), |acc, t| acc + t);
        if row.strict {
            lhs.is_positive()
        } else {
            !lhs.is_negative()
        }
    })
}

fn abs_unit(det: Int) -> bool {
    det.abs() == Int::one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn snf_factors_with_unimodular_transforms(m in small_matrix(6, 5)) {
        let s = snf(&m);
        let product = s.u.mul(&m).unwrap().mul(&s.v).unwrap();
        prop_assert_eq!(&product, &s.d);
        prop_assert!(abs_unit(s.u.det_bareiss().unwrap()));
        prop_assert!(abs_unit(s.v.det_bareiss().unwrap()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        for d in &diag {
            prop_assert!(!d.is_negative());
        }
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                if r != c {
                    prop_assert!(s.d.get(r, c).is_zero());
                }
            }
        }
    }

    #[test]
    fn stiemke_certificates_verify_exactly(m in small_matrix(5, 4)) {
        match stiemke_alternative(&m).unwrap() {
            AlternativeCertificate::Primal { f, image } => {
                let computed = m.mul_vec(&f).unwrap();
                prop_assert_eq!(&computed, &image);
                prop_assert!(image.iter().all(|c| !c.is_negative()));
                prop_assert!(image.iter().any(|c| c.is_positive()));
            }
            AlternativeCertificate::Dual { y } => {
                prop_assert!(y.iter().all(|c| c.is_positive()));
                let yt_m = m.transpose().mul_vec(&y).unwrap();
                prop_assert!(yt_m.iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn feasibility_engines_agree(n_vars in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = rng.gen_range(1..=6);
        let system: Vec<LinearInequality> = (0..rows)
            .map(|_| {
                let coeffs = (0..n_vars).map(|_| rat(rng.gen_range(-3..=3), 1)).collect();
                LinearInequality::geq(coeffs, rat(rng.gen_range(-3..=3), 1))
            })
            .collect();
        let by_elimination = match rational_feasible(n_vars, &system).unwrap() {
            Feasibility::Feasible(p) => {
                prop_assert!(satisfies(&p, &system));
                true
            }
            Feasibility::Infeasible(_) => false,
        };
        let by_simplex = match simplex_feasible(n_vars, &system).unwrap() {
            Some(p) => {
                prop_assert!(satisfies(&p, &system));
                true
            }
            None => false,
        };
        prop_assert_eq!(by_elimination, by_simplex);
    }

    #[test]
    fn grid_hits_imply_feasibility(n_vars in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = rng.gen_range(1..=5);
        let system: Vec<LinearInequality> = (0..rows)
            .map(|_| {
                let coeffs = (0..n_vars).map(|_| rat(rng.gen_range(-3..=3), 1)).collect();
                let constant = rat(rng.gen_range(-3..=3), 1);
                if rng.gen_bool(0.3) {
                    LinearInequality::gt(coeffs, constant)
                } else {
                    LinearInequality::geq(coeffs, constant)
                }
            })
            .collect();
        let mut grid_hit = false;
        let width = 7i64;
        let total = width.pow(n_vars as u32);
        for code in 0..total {
            let mut c = code;
            let point: Vec<Rational> = (0..n_vars)
                .map(|_| {
                    let coord = c % width - 3;
                    c /= width;
                    rat(coord, 1)
                })
                .collect();
            if satisfies(&point, &system) {
                grid_hit = true;
                break;
            }
        }
        if grid_hit {
            prop_assert!(feasible_point(n_vars, &system).unwrap().is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundaries_compose_to_zero(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = common::random_fibered(&mut rng, 8);
        prop_assert!(chain_check(&fs, 4, seed).unwrap());
    }

    #[test]
    fn class_equality_matches_the_bruteforce(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = common::random_fibered(&mut rng, 6);
        let xs = fs.sorted_x();
        let mut chains = Vec::new();
        for _ in 0..2 {
            let mut f = ChainFunction::zero(0);
            for x in &xs {
                f.add_term(vec![x.clone()], int(rng.gen_range(-2..=2)));
            }
            chains.push(f);
        }
        let fast = h0_class_equal(&fs, &chains[0], &chains[1]).unwrap();
        let slow = h0_equal_bruteforce(&fs, &chains[0], &chains[1]).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn traces_are_section_independent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = common::random_fibered(&mut rng, 6);
        let xs = fs.sorted_x();
        let subset: Vec<String> = xs
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        let p = diagonal_indicator(&subset);
        let sections = enumerate_sections(&fs).unwrap();
        let first = trace_phi(&fs, &sections[0], &p).unwrap();
        for phi in &sections[1..] {
            let other = trace_phi(&fs, phi, &p).unwrap();
            prop_assert!(h0_class_equal(&fs, &first, &other).unwrap());
        }
    }

    #[test]
    fn refinement_commutes_with_the_boundary(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_admissible_graph(&mut rng, 2, 4, 2);
        let window = window_paths(&g, 2).unwrap();
        let mut by_attach: BTreeMap<String, Vec<Path>> = BTreeMap::new();
        for ids in &window.paths {
            let p = Path::Edges(ids.clone());
            by_attach.entry(p.attach(&g).unwrap()).or_default().push(p);
        }
        let mut values = BTreeMap::new();
        for group in by_attach.values() {
            for _ in 0..2 {
                let u = group[rng.gen_range(0..group.len())].clone();
                let v = group[rng.gen_range(0..group.len())].clone();
                values.insert((u, v), int(rng.gen_range(-2..=2)));
            }
        }
        let f = WindowFunction::new(&g, 2, values).unwrap();
        for k in 1..=2usize {
            let refined_then_boundary = window_boundary(&refine_pairs(&g, &f, k).unwrap()).unwrap();
            let boundary_then_refined =
                refine_points(&g, &window_boundary(&f).unwrap(), k).unwrap();
            prop_assert_eq!(&refined_then_boundary, &boundary_then_refined);
        }
    }

    #[test]
    fn transfer_powers_compose(seed in any::<u64>(), a in 0u32..=3, b in 0u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_admissible_graph(&mut rng, 2, 5, 3);
        let tm = adjacency_transfer(&g).unwrap();
        let v: Vec<Int> = (0..tm.order.len()).map(|_| int(rng.gen_range(-3..=3))).collect();
        let direct = transfer_apply(&tm, &v, a + b).unwrap();
        let staged = transfer_apply(&tm, &transfer_apply(&tm, &v, a).unwrap(), b).unwrap();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn entrance_detection_is_reversal_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_admissible_graph(&mut rng, 2, 6, 3);
        let forward = cycles_with_entrance(&g).unwrap();
        let backward = cycles_with_entrance(&g.reversed()).unwrap();
        prop_assert_eq!(forward.is_empty(), backward.is_empty());
    }

    #[test]
    fn pseudoloops_are_monotone_in_eps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_metric_model(&mut rng, 5);
        let p = rng.gen_range(1..=12);
        let q = rng.gen_range(1..=3);
        let eps1 = rat(p, q);
        let eps2 = &eps1 + rat(rng.gen_range(1..=6), 1);
        for base in &m.system.points {
            let narrow = pseudoloop_exists(&m, base, &eps1).unwrap();
            let wide = pseudoloop_exists(&m, base, &eps2).unwrap();
            if narrow.exists {
                prop_assert!(wide.exists);
            }
        }
    }

    #[test]
    fn permutations_never_compress(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = common::random_permutation(&mut rng, n);
        let report = compression_exists(&sys).unwrap();
        prop_assert!(!report.exists);
        prop_assert_eq!(report.subsets_checked, 1u128 << n);
    }
}

//! Property tests for the invariants of each module.

use proptest::prelude::*;

use socle::coeffs::LinearForm;
use socle::oracles::Oracle;
use socle::partitions::{enumerate_partitions, enumerate_refining_functions, enumerate_set_partitions, visit_set_partitions};
use socle::ranks::exact_rank;
use socle::strata::{enumerate_boundary_generators, ReducedBoundaryData, Triple};
use socle::{ExactScalar, Partition, Rational, RationalEvaluator, SmallRational};

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

fn partition(max_part: u32, max_len: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_part, 0..=max_len).prop_map(|v| Partition::new(v).unwrap())
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..4, c), r))
}

fn to_q(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    m.iter().map(|row| row.iter().map(|&x| q(x)).collect()).collect()
}

fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

#[test]
fn partition_counts_match_partition_numbers() {
    let p = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
    for (n, &expected) in p.iter().enumerate() {
        assert_eq!(enumerate_partitions(n as u32, None).len(), expected);
    }
}

#[test]
fn set_partition_counts_are_bell_numbers() {
    for n in 0..=7 {
        let mut count = 0;
        visit_set_partitions(n, &mut |_, _| count += 1);
        assert_eq!(count, bell(n));
        assert_eq!(enumerate_set_partitions(n).len(), bell(n));
    }
}

#[test]
fn m_basis_is_unitriangular() {
    let ev = RationalEvaluator::new();
    for d in 0..=7 {
        let m = ev.m_basis(d);
        for i in 0..m.basis().len() {
            let row = m.row(i);
            assert_eq!(row[i], q(1), "d={d}");
            assert!(row[..i].iter().all(|x| *x == q(0)), "d={d} row {i}");
        }
    }
}

#[test]
fn boundary_generators_have_valid_degrees() {
    let ev = RationalEvaluator::new();
    for g in 2..=4u32 {
        for d in 0..=2 * g - 4 {
            for data in enumerate_boundary_generators(&ev, g, d).unwrap() {
                let (r, s) = data.decoration_degrees();
                assert_eq!(data.gamma().size(), d);
                assert!(r + s < 2 * g - 3 - d);
            }
        }
    }
}

#[test]
fn pure_rows_span_the_housing_m_forms() {
    let ev = RationalEvaluator::new();
    for g in 2..=5u32 {
        for d in 0..=2 * g - 4 {
            let pure = ev.pure_matrix(g, d).unwrap();
            let m = ev.housing_m_matrix(g, d).unwrap();
            let mut stacked = pure.clone();
            stacked.extend(m.clone()).unwrap();
            assert_eq!(pure.rank(), m.rank(), "g={g} d={d}");
            assert_eq!(stacked.rank(), m.rank(), "g={g} d={d}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn merge_preserves_size(p in partition(5, 5)) {
        for sp in enumerate_set_partitions(p.len()) {
            let merged = p.merge(&sp).unwrap();
            prop_assert_eq!(merged.size(), p.size());
            prop_assert_eq!(merged.len(), sp.len());
            prop_assert!(p.refines(&merged));
        }
    }

    #[test]
    fn refining_functions_are_valid(p in partition(3, 5)) {
        for coarse in enumerate_partitions(p.size(), None) {
            let fs = enumerate_refining_functions(&coarse, &p);
            prop_assert_eq!(!fs.is_empty(), p.refines(&coarse));
            for f in &fs {
                prop_assert!(f.is_valid());
            }
        }
    }

    #[test]
    fn display_parse_round_trip(p in partition(9, 6)) {
        let back: Partition = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn theta_is_a_positive_integer(sigma in partition(4, 3), tau in partition(4, 3)) {
        let v = RationalEvaluator::new().theta(&sigma, &tau);
        prop_assert!(v.is_integer() && v > q(0));
    }

    #[test]
    fn theta_agrees_across_scalar_types(sigma in partition(3, 3), tau in partition(3, 2)) {
        let big = RationalEvaluator::new().theta(&sigma, &tau);
        let small = socle::Evaluator::<SmallRational>::new().theta(&sigma, &tau);
        prop_assert_eq!(big.to_string(), small.to_string());
    }

    #[test]
    fn theta_matches_lemma_tool_small(sigma in partition(2, 3), tau in partition(2, 2)) {
        prop_assume!(sigma.size() as usize + sigma.len() + tau.size() as usize <= 8);
        let order: Vec<usize> = (0..sigma.len()).rev().collect();
        let count = Oracle::default().count_lemma_tool(&sigma, &tau, &order).unwrap();
        prop_assert_eq!(q(count as i64), RationalEvaluator::new().theta(&sigma, &tau));
    }

    #[test]
    fn mu_variants_are_integers(sigma in partition(3, 3), tau in partition(3, 3)) {
        let ev = RationalEvaluator::new();
        for v in [ev.mu(&sigma, &tau), ev.mu_prime(&sigma, &tau), ev.mu_dprime(&sigma, &tau)] {
            prop_assert!(v.is_integer());
        }
        prop_assert!(ev.mu_dprime(&sigma, &tau) > q(0));
    }

    #[test]
    fn phi_round_trip(d in 0u32..6, seed in prop::collection::vec(-5i64..6, 11)) {
        let ev = RationalEvaluator::new();
        let basis = ev.partition_basis(d);
        let f = LinearForm::from_fn(basis.clone(), |p| q(seed[basis.position(p).unwrap() % seed.len()]));
        prop_assert_eq!(ev.phi(&ev.phi_inverse(&f)), f.clone());
        prop_assert_eq!(ev.phi_inverse(&ev.phi(&f)), f);
    }

    #[test]
    fn c_solve_matches_chain_formula(kappa in partition(2, 2), psi in partition(2, 2), gamma in partition(3, 2)) {
        prop_assume!(!gamma.is_empty());
        let ev = RationalEvaluator::new();
        let triples = gamma
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &socle)| {
                let (k, p) = if i == 0 { (kappa.clone(), psi.clone()) } else { (Partition::empty(), Partition::empty()) };
                Triple { socle, kappa: k, psi: p }
            })
            .collect();
        let data = ReducedBoundaryData::new(triples).unwrap();
        let c = ev.c_coefficients(&data);
        for lambda in enumerate_partitions(gamma.size(), None) {
            prop_assert_eq!(c.at(&lambda), ev.c_coefficient_by_chains(&lambda, &data));
            prop_assert!(c.at(&lambda) >= q(0));
        }
    }

    #[test]
    fn reduced_data_json_round_trip(kappa in partition(3, 2), psi in partition(3, 2), socle in 1u32..5) {
        let data = ReducedBoundaryData::new(vec![
            Triple { socle, kappa: kappa.clone(), psi: psi.clone() },
            Triple { socle: 1, kappa: psi, psi: kappa },
        ]).unwrap();
        let s = serde_json::to_string(&data).unwrap();
        let back: ReducedBoundaryData = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, data);
    }

    #[test]
    fn rank_invariant_under_row_operations(m in small_matrix(), scale in 1i64..5, shift in 0usize..4) {
        let a = to_q(&m);
        let r = exact_rank(&a);
        let mut shuffled = a.clone();
        shuffled.rotate_left(shift % a.len());
        prop_assert_eq!(exact_rank(&shuffled), r);
        let scaled: Vec<Vec<Rational>> = a
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().map(|x| x * Rational::new((scale + i as i64).into(), 7.into())).collect())
            .collect();
        prop_assert_eq!(exact_rank(&scaled), r);
        let t: Vec<Vec<Rational>> = (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect();
        prop_assert_eq!(exact_rank(&t), r);
        prop_assert!(r <= a.len().min(a[0].len()));
    }

    #[test]
    fn rank_of_stack_with_combination(m in small_matrix(), k in -3i64..4) {
        let mut a = to_q(&m);
        let combo: Vec<Rational> = a[0].iter().zip(a.last().unwrap()).map(|(x, y)| x + y * q(k)).collect();
        let r = exact_rank(&a);
        a.push(combo);
        prop_assert_eq!(exact_rank(&a), r);
    }
}

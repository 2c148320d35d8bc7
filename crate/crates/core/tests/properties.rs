use std::sync::OnceLock;

use proptest::prelude::*;

use fedosov_core::connection::symplectize_connection;
use fedosov_core::engine::{star_product, FedosovData};
use fedosov_core::group::standard::quarter_turn;
use fedosov_core::group::{enumerate_group, GroupAction};
use fedosov_core::invariants::poisson_bracket;
use fedosov_core::sampling::{self, PolyShape};
use fedosov_core::weyl::{act_group_element, delta, hodge_decompose, moyal_mul};
use fedosov_core::{BasePoly, Chart, TruncationPolicy, WeylForm};

fn small() -> PolyShape {
    PolyShape { max_degree: 3, max_terms: 3, ..Default::default() }
}

fn polys(seed: u64, dim: usize, count: usize) -> Vec<BasePoly> {
    let mut rng = sampling::rng(seed);
    (0..count).map(|_| sampling::random_poly(&mut rng, dim, &small())).collect()
}

fn forms(seed: u64, policy: TruncationPolicy, count: usize) -> Vec<WeylForm> {
    let mut rng = sampling::rng(seed);
    (0..count).map(|i| sampling::random_weyl_form(&mut rng, policy, seed as usize + i, &small())).collect()
}

fn curved_z4() -> &'static FedosovData {
    static DATA: OnceLock<FedosovData> = OnceLock::new();
    DATA.get_or_init(|| {
        let g = enumerate_group(&[quarter_turn()], 2, 8).unwrap();
        let mut rng = sampling::rng(3);
        let shape = PolyShape { max_degree: 2, max_terms: 2, ..Default::default() };
        let gamma = sampling::random_invariant_christoffel(&mut rng, &g, 3, &shape).unwrap();
        FedosovData::build(&Chart::new(g, gamma, TruncationPolicy::new(2, 4).unwrap()).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moyal_is_associative(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4])) {
        let p = TruncationPolicy::new(dim, 5).unwrap();
        let f = forms(seed, p, 3);
        let left = moyal_mul(&moyal_mul(&f[0], &f[1]).unwrap(), &f[2]).unwrap();
        let right = moyal_mul(&f[0], &moyal_mul(&f[1], &f[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn hodge_and_delta_squared(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4])) {
        let p = TruncationPolicy::new(dim, 5).unwrap();
        for b in forms(seed, p, 4) {
            prop_assert_eq!(hodge_decompose(&b).sum(), b.clone());
            prop_assert!(delta(&delta(&b)).is_zero());
        }
    }

    #[test]
    fn bracket_is_a_derivation_and_jacobi(seed in any::<u64>()) {
        let f = polys(seed, 4, 3);
        let pb = |a: &BasePoly, b: &BasePoly| poisson_bracket(a, b).unwrap();
        let lhs = pb(&f[0], &(&f[1] * &f[2]));
        let rhs = &(&pb(&f[0], &f[1]) * &f[2]) + &(&f[1] * &pb(&f[0], &f[2]));
        prop_assert_eq!(lhs, rhs);
        let jac = &(&pb(&f[0], &pb(&f[1], &f[2])) + &pb(&f[1], &pb(&f[2], &f[0]))) + &pb(&f[2], &pb(&f[0], &f[1]));
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>()) {
        let f = &polys(seed, 4, 1)[0];
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(f.diff(i).unwrap().diff(j).unwrap(), f.diff(j).unwrap().diff(i).unwrap());
            }
        }
    }

    #[test]
    fn group_action_respects_moyal(seed in any::<u64>()) {
        let p = TruncationPolicy::new(2, 5).unwrap();
        let f = forms(seed, p, 2);
        let g = quarter_turn();
        let lhs = act_group_element(&moyal_mul(&f[0], &f[1]).unwrap(), &g).unwrap();
        let rhs = moyal_mul(&act_group_element(&f[0], &g).unwrap(), &act_group_element(&f[1], &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symplectization_is_a_projection(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let input = sampling::random_torsionfree_christoffel(&mut rng, 2, 3, &small());
        let out = symplectize_connection(&input).unwrap();
        prop_assert!(out.is_symplectic() && out.is_torsionfree());
        prop_assert_eq!(symplectize_connection(&out).unwrap(), out);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn curved_star_is_associative_and_equivariant(seed in any::<u64>()) {
        let data = curved_z4();
        let f = polys(seed, 2, 3);
        let star = |a: &BasePoly, b: &BasePoly| star_product(a, b, data).unwrap();
        // associativity at order ≤ 1 only needs μ0 and μ1 of the inner product
        let k = data.safe_order() as usize;
        let fg = star(&f[0], &f[1]);
        let gh = star(&f[1], &f[2]);
        for order in 0..=k.min(1) {
            let mut left = BasePoly::zero(2);
            let mut right = BasePoly::zero(2);
            for a in 0..=order {
                left = &left + &star(&fg.mu[a], &f[2]).mu[order - a];
                right = &right + &star(&f[0], &gh.mu[a]).mu[order - a];
            }
            prop_assert_eq!(left, right);
        }
        let g = quarter_turn();
        let moved = star(&f[0].act(&g).unwrap(), &f[1].act(&g).unwrap());
        for (m, p) in moved.mu.iter().zip(&fg.mu) {
            prop_assert_eq!(m.clone(), p.act(&g).unwrap());
        }
    }
}

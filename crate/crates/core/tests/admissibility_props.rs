use std::f64::consts::PI;
use std::sync::Arc;

use hypercauchy::admissibility::{
    check_ellipticity, kappa, solve_admissibility, CRConditionSet, KernelSolution, DEFAULT_TOL,
};
use hypercauchy::algebra::{self, AlgElem, AlgebraTable};
use hypercauchy::kernel::CauchyKernel;
use hypercauchy::suite;
use proptest::prelude::*;

fn permuted(cs: &CRConditionSet, rows: &[usize], vars: &[usize]) -> CRConditionSet {
    let a = rows
        .iter()
        .map(|&m| vars.iter().map(|&j| cs.a(m, j).clone()).collect())
        .collect();
    CRConditionSet::new(cs.algebra().clone(), cs.n(), cs.q(), a).unwrap()
}

fn shuffle(len: usize, keys: &[u32]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    idx.sort_by_key(|&i| {
        keys[i % keys.len()]
            .wrapping_mul(2654435761)
            .wrapping_add(i as u32)
    });
    idx
}

fn small_cases() -> Vec<CRConditionSet> {
    suite::gallery_cases()
        .into_iter()
        .map(|g| g.conditions)
        .filter(|c| c.n() <= 8)
        .chain([suite::m2r_single(3), suite::m2r_three(3)])
        .collect()
}

/// `1/(n |B_n|)` written out for the dimensions used here.
fn kappa_closed_form(n: usize) -> f64 {
    match n {
        2 => 1.0 / (2.0 * PI),
        3 => 1.0 / (4.0 * PI),
        4 => 1.0 / (2.0 * PI * PI),
        8 => 3.0 / PI.powi(4),
        _ => unreachable!(),
    }
}

#[test]
fn kappa_matches_closed_forms() {
    for n in [2, 3, 4, 8] {
        assert!((kappa(n) - kappa_closed_form(n)).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn feasibility_invariant_under_permutations(
        case in 0usize..16,
        keys in prop::collection::vec(any::<u32>(), 1..8),
    ) {
        let cases = small_cases();
        let cs = &cases[case % cases.len()];
        let base = solve_admissibility(cs, DEFAULT_TOL).unwrap().feasible;
        let rows = shuffle(cs.q(), &keys);
        let vars = shuffle(cs.n(), &keys[1..].iter().chain(&keys[..1]).copied().collect::<Vec<_>>());
        let p = permuted(cs, &rows, &vars);
        prop_assert_eq!(solve_admissibility(&p, DEFAULT_TOL).unwrap().feasible, base);
    }

    #[test]
    fn dim2_feasible_iff_negative_discriminant(a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let disc = b * b + 4.0 * a;
        prop_assume!(disc.abs() > 0.05);
        let alg = Arc::new(algebra::dim2(a, b));
        let g = suite::dim2_generator(&alg, a, b);
        let cs = CRConditionSet::single(alg.clone(), vec![alg.unit(), g]).unwrap();
        prop_assert_eq!(solve_admissibility(&cs, DEFAULT_TOL).unwrap().feasible, disc < 0.0);
    }

    #[test]
    fn dim3_single_condition_infeasible(
        params in prop::collection::vec(-2.0f64..2.0, 4),
        noncommutative in any::<bool>(),
        coeffs in prop::collection::vec(-1.0f64..1.0, 9),
    ) {
        let alg: AlgebraTable = if noncommutative {
            algebra::noncom3(params[0], params[1], params[2], params[3])
        } else {
            algebra::cubic(params[0], params[1], params[2])
        };
        prop_assert!(alg.associativity_defect() < 1e-12);
        let alg = Arc::new(alg);
        // Shift towards the unit so the coefficients stay invertible.
        let a: Vec<AlgElem> = coeffs
            .chunks(3)
            .map(|c| AlgElem(c.to_vec()).scale(0.3).add(&alg.unit()))
            .collect();
        prop_assume!(a.iter().all(|x| suite::left_conditioning(&alg, x) > 0.05));
        let cs = CRConditionSet::single(alg, a).unwrap();
        let rep = solve_admissibility(&cs, DEFAULT_TOL).unwrap();
        prop_assert!(!rep.feasible, "residual {}", rep.residual);
    }

    #[test]
    fn corrupted_kernel_fails_closedness(case in 0usize..16, slot in any::<usize>(), comp in any::<usize>()) {
        let cases: Vec<_> = small_cases()
            .into_iter()
            .filter(|c| solve_admissibility(c, DEFAULT_TOL).unwrap().feasible)
            .collect();
        let cs = &cases[case % cases.len()];
        let sol = solve_admissibility(cs, DEFAULT_TOL).unwrap().solution;
        let mut b = sol.b.clone();
        let (m, i) = ((slot / cs.n()) % cs.q(), slot % cs.n());
        b[m][i].0[comp % cs.dim()] += 0.1;
        let bad = KernelSolution::from_b(cs.clone(), b, 0);
        prop_assert!(bad.residual > 1e-3);
        let k = CauchyKernel::new(bad);
        let worst = suite::random_pairs(cs.n(), 50, 5)
            .iter()
            .map(|(x, y)| k.closedness_residual(x, y).unwrap())
            .fold(0.0, f64::max);
        prop_assert!(worst > 1e-3, "closedness {}", worst);
    }
}

#[test]
fn feasible_implies_elliptic() {
    let mut seen = 0;
    for cs in small_cases() {
        let rep = solve_admissibility(&cs, DEFAULT_TOL).unwrap();
        if rep.feasible {
            let e = check_ellipticity(&rep.solution, 64, 1, 1e-9);
            assert!(e.identity_holds, "worst {}", e.worst_coefficient);
            assert!(e.min_symbol_injectivity > 0.0);
            seen += 1;
        }
    }
    assert!(seen >= 8);
}

#[test]
fn dbar_solution_by_hand() {
    // a^0 b^0 = kappa, a^1 b^1 = kappa, a^1 b^0 + a^0 b^1 = 0 with a = (1, i)
    let rep = solve_admissibility(&CRConditionSet::dbar(), DEFAULT_TOL).unwrap();
    let k = 1.0 / (2.0 * PI);
    assert!((rep.solution.b[0][0].0[0] - k).abs() < 1e-15);
    assert!((rep.solution.b[0][1].0[1] + k).abs() < 1e-15);
    // c^j_i = |B_2| a^j b^i: c^0_0 = 1/2, c^1_0 = i/2
    assert!((rep.solution.c[0][0].0[0] - 0.5).abs() < 1e-14);
    assert!((rep.solution.c[1][0].0[1] - 0.5).abs() < 1e-14);
}

use hypercauchy::admissibility::{solve_admissibility, CRConditionSet, DEFAULT_TOL};
use hypercauchy::error::Error;
use hypercauchy::kernel::{CauchyKernel, FD_STEP};
use hypercauchy::suite;
use proptest::prelude::*;
use std::sync::OnceLock;

fn kernels() -> &'static [CauchyKernel] {
    static K: OnceLock<Vec<CauchyKernel>> = OnceLock::new();
    K.get_or_init(|| {
        suite::gallery_cases()
            .into_iter()
            .map(|g| g.conditions)
            .chain([
                suite::m2r_three(0),
                CRConditionSet::fueter().induced(2).unwrap(),
            ])
            .filter_map(|cs| {
                let r = solve_admissibility(&cs, DEFAULT_TOL).unwrap();
                r.feasible.then(|| CauchyKernel::new(r.solution))
            })
            .collect()
    })
}

fn field_norm(k: &CauchyKernel, x: &[f64], y: &[f64]) -> f64 {
    k.kernel_field(x, y)
        .unwrap()
        .iter()
        .map(|e| e.norm().powi(2))
        .sum::<f64>()
        .sqrt()
}

fn point(v: &[f64], n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| v[i % v.len()] * (1.0 + 0.1 * (i / v.len()) as f64))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneous_of_degree_one_minus_n(
        case in any::<prop::sample::Index>(),
        x in prop::collection::vec(-1.0f64..1.0, 8),
        u in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let k = &kernels()[case.index(kernels().len())];
        let n = k.n();
        let x = point(&x, n);
        let mut u = point(&u, n);
        let r = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(r > 0.1);
        u.iter_mut().for_each(|v| *v /= r);
        let ts = [0.25, 0.5, 1.0, 2.0, 4.0];
        let pts: Vec<(f64, f64)> = ts
            .iter()
            .map(|&t| {
                let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + t * b).collect();
                (t.ln(), field_norm(k, &x, &y).ln())
            })
            .collect();
        // least-squares slope
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
        let (mx, my) = (sx / m, sy / m);
        let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = num / den;
        prop_assert!((slope - (1.0 - n as f64)).abs() < 1e-6, "slope {}", slope);
    }

    #[test]
    fn translation_invariant_and_antisymmetric(
        case in any::<prop::sample::Index>(),
        x in prop::collection::vec(-1.0f64..1.0, 8),
        y in prop::collection::vec(-1.0f64..1.0, 8),
        s in prop::collection::vec(-3.0f64..3.0, 8),
    ) {
        let k = &kernels()[case.index(kernels().len())];
        let n = k.n();
        let (x, y, s) = (point(&x, n), point(&y, n), point(&s, n));
        let d: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        prop_assume!(d > 0.05);
        let base = k.kernel_field(&x, &y).unwrap();
        let xs: Vec<f64> = x.iter().zip(&s).map(|(a, b)| a + b).collect();
        let ys: Vec<f64> = y.iter().zip(&s).map(|(a, b)| a + b).collect();
        let shifted = k.kernel_field(&xs, &ys).unwrap();
        let swapped = k.kernel_field(&y, &x).unwrap();
        let scale = base.iter().map(|e| e.max_abs()).fold(1e-300, f64::max);
        for j in 0..n {
            prop_assert!(base[j].sub(&shifted[j]).max_abs() <= 1e-12 * scale);
            prop_assert!(base[j].add(&swapped[j]).max_abs() <= 1e-14 * scale);
        }
    }

    #[test]
    fn closedness_analytic_and_difference_agree(
        case in any::<prop::sample::Index>(),
        x in prop::collection::vec(-1.0f64..1.0, 8),
        y in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let k = &kernels()[case.index(kernels().len())];
        let n = k.n();
        let (x, y) = (point(&x, n), point(&y, n));
        let d: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        prop_assume!(d > 0.2);
        let an = k.closedness_residual(&x, &y).unwrap();
        let fd = k.closedness_residual_fd(&x, &y, FD_STEP).unwrap();
        prop_assert!(an <= 1e-12, "analytic {}", an);
        prop_assert!((an - fd).abs() <= 1e-8, "analytic {} fd {}", an, fd);
    }
}

#[test]
fn diagonal_and_shape_errors() {
    let k = &kernels()[0];
    assert_eq!(
        k.kernel_field(&[0.1, 0.2], &[0.1, 0.2]),
        Err(Error::OnDiagonal)
    );
    assert!(matches!(
        k.kernel_field(&[0.1, 0.2, 0.3], &[0.0, 0.0]),
        Err(Error::DimensionMismatch(_))
    ));
    assert!(matches!(
        k.closedness_residual(&[0.0], &[1.0, 0.0]),
        Err(Error::DimensionMismatch(_))
    ));
}

//! Property tests for the numerical substrate and the report machinery.

use isospec_core::grid::differentiate;
use isospec_core::operator::SecondOrderOperator;
use isospec_core::quadrature::{cumulative_integral, integrate, integrate_semi_infinite};
use isospec_core::special::EigenfunctionFamily;
use isospec_core::verify::{gram_windowed, residual, spectrum_compare};
use isospec_core::{Grid, SampledFunction, SmoothFn};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadrature_is_linear(alpha in -3.0_f64..3.0, beta in -3.0_f64..3.0) {
        let tol = 1e-11;
        let f = |x: f64| (1.3 * x).sin();
        let g = |x: f64| (-0.4 * x * x).exp();
        let lhs = integrate(|x| alpha * f(x) + beta * g(x), -1.0, 2.5, tol).unwrap();
        let rhs = alpha * integrate(f, -1.0, 2.5, tol).unwrap()
            + beta * integrate(g, -1.0, 2.5, tol).unwrap();
        prop_assert!((lhs - rhs).abs() <= 2.0 * tol * (1.0 + alpha.abs() + beta.abs()));
    }

    #[test]
    fn semi_infinite_splits_at_any_point(a in 0.1_f64..3.0) {
        let tol = 1e-11;
        let whole = integrate_semi_infinite(|x| (-x * x).exp(), 0.0, tol).unwrap();
        let head = integrate(|x| (-x * x).exp(), 0.0, a, tol).unwrap();
        let tail = integrate_semi_infinite(|x| (-x * x).exp(), a, tol).unwrap();
        prop_assert!((whole - head - tail).abs() <= 2.0 * tol);
    }

    #[test]
    fn cumulative_of_odd_integrand_is_even(c1 in -2.0_f64..2.0, c3 in -1.0_f64..1.0) {
        let grid = Grid::uniform(-2.0, 2.0, 41).unwrap();
        let s = cumulative_integral(move |y| c1 * y + c3 * y * y * y, 0.0, &grid, 1e-11).unwrap();
        for i in 0..20 {
            prop_assert!((s.values[i] - s.values[40 - i]).abs() < 1e-10);
        }
    }

    #[test]
    fn differentiate_kills_affine_parts(a in -5.0_f64..5.0, b in -5.0_f64..5.0) {
        let grid = Grid::uniform(-1.0, 3.0, 41).unwrap();
        let f = SampledFunction::from_fn(grid, |x| a * x + b);
        let df = differentiate(&f).unwrap();
        for v in &df.values {
            prop_assert!((v - a).abs() < 1e-11);
        }
    }

    #[test]
    fn residual_scale_invariant(scale in 0.01_f64..100.0) {
        let grid = Grid::uniform(-8.0, 8.0, 201).unwrap();
        let h = SecondOrderOperator::schroedinger(
            0.5,
            SmoothFn::with_d2(|x| 0.5 * x * x, |x| x, |_| 1.0),
        );
        let phi = EigenfunctionFamily::hermite().state(2).unwrap();
        let r1 = residual(&h, &phi, 2.5, &grid).unwrap();
        let r2 = residual(&h, &phi.scale(scale), 2.5, &grid).unwrap();
        prop_assert!((r1 - r2).abs() <= 1e-12 + 1e-6 * r1.abs());
    }

    #[test]
    fn spectrum_compare_swap_symmetry(
        mut a in proptest::collection::vec(0.0_f64..20.0, 0..6),
        mut b in proptest::collection::vec(0.0_f64..20.0, 0..6),
    ) {
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let ab = spectrum_compare(&a, &b, 1e-3);
        let ba = spectrum_compare(&b, &a, 1e-3);
        prop_assert_eq!(ab.matched.len(), ba.matched.len());
        prop_assert_eq!(ab.missing_in_a, ba.missing_in_b);
        prop_assert_eq!(ab.missing_in_b, ba.missing_in_a);
    }

    #[test]
    fn gram_is_symmetric_under_reordering(swap in 0usize..3) {
        let fam = EigenfunctionFamily::hermite();
        let mut fns: Vec<SmoothFn> = (0..3).map(|n| fam.state(n).unwrap()).collect();
        let g0 = gram_windowed(&fns, -9.0, 9.0, 1e-10).unwrap();
        fns.swap(swap, (swap + 1) % 3);
        let g1 = gram_windowed(&fns, -9.0, 9.0, 1e-10).unwrap();
        // the swapped Gram matrix is the permutation conjugate of the original
        let mut perm = [0usize, 1, 2];
        perm.swap(swap, (swap + 1) % 3);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((g1[i][j] - g0[perm[i]][perm[j]]).abs() < 1e-9);
            }
        }
    }
}

use num_complex::Complex64;
use polyfock::kernels::{
    kernel_f, kernel_f_products, kernel_g, kernel_h, kernel_h_products, kernel_s, ComplexPoint, KernelSpec, ProductForm,
};
use polyfock::multiindex::{binomial, IndexTable};
use polyfock::orthopoly::{laguerre_eval, laguerre_eval_real, laguerre_fn};
use polyfock::spectral::{fourier_laguerre_closed, fourier_laguerre_quadrature, q_eval};
use polyfock::symbols::{gamma_toeplitz, parse_symbol, sigma_direct, sigma_from_gamma, VerticalSymbol};
use polyfock::transforms::{
    check_intertwining, flatten, kernel_section_f, kernel_section_h, translate_h, unflatten, weyl_f, FieldFunction,
    SteinwartMap,
};
use polyfock::verify::{CaseResult, VerificationReport};
use proptest::prelude::*;

fn coords(n: usize, r: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-r..r, n)
}

fn point(n: usize, r: f64) -> impl Strategy<Value = ComplexPoint> {
    (coords(n, r), coords(n, r)).prop_map(|(x, y)| ComplexPoint { x, y })
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=4)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn table_is_sorted_and_sized((n, m) in (1usize..=5, 1usize..=6)) {
        let t = IndexTable::new(n, m).unwrap();
        prop_assert_eq!(t.d() as u128, binomial((n + m - 1) as u128, n as u128).unwrap());
        prop_assert!(t.indices().windows(2).all(|w| w[0].entries() < w[1].entries()));
        for j in 1..=t.d() {
            let k = t.phi(j).unwrap();
            prop_assert!(k.total() < m as u32);
            prop_assert_eq!(t.position(k), Some(j - 1));
        }
    }

    #[test]
    fn complex_laguerre_agrees_on_real_axis(p in 0u32..12, a in 0.0f64..5.0, x in 0.0f64..20.0) {
        let r = laguerre_eval_real(p, a, x);
        let c = laguerre_eval(p, a, Complex64::new(x, 0.0));
        prop_assert!((c.re - r).abs() <= 1e-12 * r.abs().max(1.0) && c.im == 0.0);
    }

    #[test]
    fn kernel_f_hermitian(((n, m), z, w) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 1.5), point(n, 1.5))), alpha in 0.2f64..3.0) {
        let spec = KernelSpec::new(n, m, alpha).unwrap();
        let a = kernel_f(&spec, &z, &w).unwrap();
        let b = kernel_f(&spec, &w, &z).unwrap();
        prop_assert!(rel(a, b.conj()) < 1e-13);
    }

    #[test]
    fn product_forms_agree(((n, m), z, w) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 1.0), point(n, 1.0))), alpha in 0.2f64..3.0) {
        let spec = KernelSpec::new(n, m, alpha).unwrap();
        let k = kernel_f(&spec, &z, &w).unwrap();
        for form in [ProductForm::Polynomial, ProductForm::Function] {
            prop_assert!(rel(kernel_f_products(&spec, &z, &w, form).unwrap(), k) < 1e-11);
        }
        prop_assert!(rel(kernel_h_products(n, m, &z, &w).unwrap(), kernel_h(n, m, &z, &w).unwrap()) < 1e-11);
    }

    #[test]
    fn g_and_h_share_modulus(((n, m), p, q) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 2.0), point(n, 2.0)))) {
        let g = kernel_g(n, m, &p, &q).unwrap();
        let h = kernel_h(n, m, &p, &q).unwrap();
        prop_assert!((g.norm() - h.norm()).abs() <= 1e-13 * h.norm().max(1e-300));
    }

    #[test]
    fn h_translation_covariant(((n, m), p, q, a) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 2.0), point(n, 2.0), coords(n, 3.0)))) {
        let k = kernel_h(n, m, &p, &q).unwrap();
        let s = kernel_h(n, m, &p.shifted(&a), &q.shifted(&a)).unwrap();
        prop_assert!((k - s).norm() < 1e-12 * 2f64.powi(n as i32));
    }

    #[test]
    fn s_kernel_real_translation_invariant(((n, m), z, w, a) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 1.0), point(n, 1.0), coords(n, 2.0))), sigma in 0.3f64..1.5) {
        let k = kernel_s(n, m, sigma, &z, &w).unwrap();
        let s = kernel_s(n, m, sigma, &z.shifted(&a), &w.shifted(&a)).unwrap();
        prop_assert!((k - s).norm() <= 1e-12 * k.norm().max(1.0));
    }

    #[test]
    fn s_kernel_is_pushforward(((n, m), z, w) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 1.0), point(n, 1.0))), sigma in 0.3f64..1.5) {
        let spec = KernelSpec::from_sigma(n, m, sigma).unwrap();
        let map = SteinwartMap::new(&spec, sigma).unwrap();
        let want = kernel_s(n, m, sigma, &z, &w).unwrap();
        prop_assert!(rel(map.pushforward_kernel(&z, &w).unwrap(), want) < 1e-12);
    }

    #[test]
    fn steinwart_round_trip((n, z, w) in (1usize..=2).prop_flat_map(|n| (Just(n), point(n, 1.0), point(n, 1.0))), sigma in 0.3f64..1.5) {
        let spec = KernelSpec::from_sigma(n, 2, sigma).unwrap();
        let map = SteinwartMap::new(&spec, sigma).unwrap();
        let f = kernel_section_f(&spec, &z).unwrap();
        let back = map.to_f(&map.to_s(&f).unwrap()).unwrap();
        prop_assert!(rel(back.eval(&w), f.eval(&w)) < 1e-13);
    }

    #[test]
    fn flatten_round_trip(((n, m), z, w) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 1.0), point(n, 1.5))), alpha in 0.3f64..3.0) {
        let spec = KernelSpec::new(n, m, alpha).unwrap();
        let f = kernel_section_f(&spec, &z).unwrap();
        let back = unflatten(&spec, &flatten(&spec, &f).unwrap()).unwrap();
        prop_assert!(rel(back.eval(&w), f.eval(&w)) < 1e-12);
    }

    #[test]
    fn translation_group_law(((n, m), p, q, a, b) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 1.0), point(n, 2.0), coords(n, 1.0), coords(n, 1.0)))) {
        let g = kernel_section_h(n, m, &p).unwrap();
        let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let two = translate_h(&a, &translate_h(&b, &g).unwrap()).unwrap();
        let one = translate_h(&ab, &g).unwrap();
        prop_assert!((two.eval(&q) - one.eval(&q)).norm() < 1e-12);
        // translating a section moves its index
        let moved = kernel_section_h(n, m, &p.shifted(&a)).unwrap();
        let t = translate_h(&a, &g).unwrap();
        prop_assert!((t.eval(&q) - moved.eval(&q)).norm() < 1e-12);
    }

    #[test]
    fn weyl_shift_of_kernel(((n, m), z, w, a) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 1.0), point(n, 1.0), coords(n, 1.0))), alpha in 0.3f64..2.0) {
        let spec = KernelSpec::new(n, m, alpha).unwrap();
        let shifted = weyl_f(&spec, &a, &kernel_section_f(&spec, &z).unwrap()).unwrap();
        let za = z.shifted(&a);
        let az: Complex64 = (0..n).map(|r| z.coord(r).conj() * a[r]).sum();
        let a2: f64 = a.iter().map(|v| v * v).sum();
        let c = (-alpha * az - alpha * a2 / 2.0).exp();
        let want = c * kernel_f(&spec, &za, &w).unwrap();
        prop_assert!(rel(shifted.eval(&w), want) < 1e-12);
    }

    #[test]
    fn intertwining_on_combinations(((n, m), z1, z2, a) in dims().prop_flat_map(|(n, m)| (Just((n, m)), point(n, 1.0), point(n, 1.0), coords(n, 1.0))), c in -2.0f64..2.0) {
        let spec = KernelSpec::new(n, m, 1.0).unwrap();
        let f = FieldFunction::combination(vec![
            (Complex64::new(1.0, 0.0), kernel_section_f(&spec, &z1).unwrap()),
            (Complex64::new(c, 0.5), kernel_section_f(&spec, &z2).unwrap()),
        ]).unwrap();
        let samples = vec![z1.clone(), z2.clone(), ComplexPoint::zeros(n)];
        prop_assert!(check_intertwining(&spec, &a, &f, &samples).unwrap() < 1e-10);
        prop_assert_eq!(check_intertwining(&spec, &vec![0.0; n], &f, &samples).unwrap(), 0.0);
    }

    #[test]
    fn fourier_laguerre_identity(p in 0u32..=10, a in 0.0f64..1.5, xi in -4.0f64..4.0) {
        let q = fourier_laguerre_quadrature(p, a, xi, 64).unwrap();
        prop_assert!((q - fourier_laguerre_closed(p, a, xi)).norm() < 1e-9);
    }

    #[test]
    fn q_shift_covariance(k in prop::collection::vec(0u32..5, 1..=3).prop_map(polyfock::multiindex::MultiIndex::new), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = k.len();
        let xi: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let shifted: Vec<f64> = v.iter().zip(&xi).map(|(v, x)| v + x / 2.0).collect();
        prop_assert!((q_eval(&k, &xi, &v) - q_eval(&k, &vec![0.0; n], &shifted)).abs() < 1e-13);
    }

    #[test]
    fn gamma_is_linear_and_hermitian((n, m) in (1usize..=2, 1usize..=3), xi in coords(2, 5.0), c in -2.0f64..2.0) {
        let table = IndexTable::new(n, m).unwrap();
        let xi = &xi[..n];
        let g = parse_symbol("gauss:0.2,1.3,1,-0.5", n).unwrap();
        let h = parse_symbol("sign:1", n).unwrap();
        let sum = VerticalSymbol::Sum(vec![(Complex64::new(1.0, 0.0), g.clone()), (Complex64::new(c, 0.0), h.clone())]);
        let a = gamma_toeplitz(&table, &g, xi).unwrap();
        let b = gamma_toeplitz(&table, &h, xi).unwrap();
        let s = gamma_toeplitz(&table, &sum, xi).unwrap();
        let lin = a.add(&b.scale(Complex64::new(c, 0.0))).unwrap();
        prop_assert!(s.max_abs_diff(&lin).unwrap() < 1e-12);
        prop_assert!(s.hermitian_defect() < 1e-12);
    }

    #[test]
    fn sigma_routes_agree(eta in -5.0f64..5.0) {
        let table = IndexTable::new(1, 3).unwrap();
        let g = parse_symbol("poly:1,0,1", 1).unwrap();
        let a = sigma_from_gamma(&table, &g, &[eta]).unwrap();
        let b = sigma_direct(&table, &g, &[eta]).unwrap();
        prop_assert_eq!(&a.xi, &vec![eta]);
        prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-9 * (1.0 + eta * eta));
    }

    #[test]
    fn report_round_trips(errs in prop::collection::vec((0.0f64..1.0, 1e-12f64..1e-3), 0..6), secs in 0.0f64..100.0) {
        let cases: Vec<CaseResult> = errs.iter().enumerate().map(|(i, (e, t))| CaseResult {
            id: format!("case/{i}"),
            params: serde_json::json!({"i": i, "t": t}),
            max_error: *e,
            tolerance: *t,
            passed: e <= t,
        }).collect();
        let r = VerificationReport {
            suite: "structure".into(),
            passed: cases.iter().all(|c| c.passed),
            cases,
            wall_time_secs: secs,
            quadrature_orders: [("fiber".to_string(), 32usize)].into_iter().collect(),
            suites: vec![],
        };
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn laguerre_function_is_bounded(p in 0u32..20, t in 0.0f64..60.0) {
        prop_assert!(laguerre_fn(p, t).abs() <= 1.0 + 1e-12);
    }
}

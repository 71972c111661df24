use num_complex::Complex64;
use polyfock::basis_oracle::{build_orthonormal_basis, build_orthonormal_basis_with, BasisRoute};
use polyfock::kernels::{kernel_f, ComplexPoint, KernelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_point(rng: &mut ChaCha8Rng, n: usize) -> ComplexPoint {
    loop {
        let z: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)))
            .collect();
        let p = ComplexPoint::from_complex(&z);
        if p.norm_sqr() < 0.25 {
            return p;
        }
    }
}

#[test]
fn series_matches_closed_kernel_n3_m3() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = std::time::Instant::now();
    let basis = build_orthonormal_basis(1.0, 3, 3, 64).unwrap();
    eprintln!("built {} elements in {:?}", basis.len(), t.elapsed());
    assert_eq!(basis.route(), BasisRoute::Float);
    let spec = KernelSpec::new(3, 3, 1.0).unwrap();
    for _ in 0..5 {
        let z = small_point(&mut rng, 3);
        let w = small_point(&mut rng, 3);
        let a = basis.kernel(&z, &w).unwrap();
        let b = kernel_f(&spec, &z, &w).unwrap();
        assert!((a - b).norm() <= 1e-10 * b.norm(), "{a} vs {b}");
    }
    eprintln!("total {:?}", t.elapsed());
}

#[test]
fn symmetric_by_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let basis = build_orthonormal_basis(0.7, 2, 2, 12).unwrap();
    let z = small_point(&mut rng, 2);
    let w = small_point(&mut rng, 2);
    assert_eq!(basis.kernel(&z, &w).unwrap(), basis.kernel(&w, &z).unwrap().conj());
}

#[test]
fn truncation_error_shrinks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = KernelSpec::new(2, 2, 1.0).unwrap();
    let lo = build_orthonormal_basis(1.0, 2, 2, 16).unwrap();
    let hi = build_orthonormal_basis(1.0, 2, 2, 64).unwrap();
    // far enough out that |p| ≤ 16 visibly truncates
    let z = small_point(&mut rng, 2).scaled(4.0);
    let w = small_point(&mut rng, 2).scaled(4.0);
    let exact = kernel_f(&spec, &z, &w).unwrap();
    let e_lo = (lo.kernel(&z, &w).unwrap() - exact).norm();
    let e_hi = (hi.kernel(&z, &w).unwrap() - exact).norm();
    assert!(e_hi < e_lo, "{e_hi} !< {e_lo}");
}

#[test]
fn at_origin_only_charge_zero_survives() {
    let basis = build_orthonormal_basis(1.0, 2, 3, 10).unwrap();
    let vals = basis.eval_all(&ComplexPoint::zeros(2)).unwrap();
    for (e, v) in basis.elements().iter().zip(&vals) {
        if e.p != e.q {
            assert_eq!(*v, Complex64::new(0.0, 0.0));
        }
    }
    // K(0,0) = d_{n,m} for α = 1
    let k = basis.kernel(&ComplexPoint::zeros(2), &ComplexPoint::zeros(2)).unwrap();
    assert!((k.re - 6.0).abs() < 1e-12 && k.im == 0.0);
}

#[test]
fn routes_agree() {
    let a = build_orthonormal_basis_with(BasisRoute::Exact, 2.5, 1, 3, 20).unwrap();
    let b = build_orthonormal_basis_with(BasisRoute::Float, 2.5, 1, 3, 20).unwrap();
    let z = ComplexPoint::from_complex(&[Complex64::new(0.2, -0.1)]);
    let w = ComplexPoint::from_complex(&[Complex64::new(-0.3, 0.25)]);
    let d = (a.kernel(&z, &w).unwrap() - b.kernel(&z, &w).unwrap()).norm();
    assert!(d < 1e-12);
    assert!(a.gram_defect() < 1e-12);
    assert!(b.gram_defect() < 1e-10);
}

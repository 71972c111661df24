use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use polyfock::kernels::{kernel_h, kernel_true_poly, ComplexPoint, KernelSpec};
use polyfock::multiindex::{IndexTable, MultiIndex};
use polyfock::quadrature::QuadratureGrid;
use polyfock::spectral::{
    fiber_project, l_closed, l_quadrature, q_eval, q_values, r_f_apply, r_f_kernel_image, r_h_apply, reconstruct,
    FiberVector,
};
use polyfock::symbols::gaussian_hat;
use polyfock::transforms::{flatten, kernel_section_f, Envelope, FieldFunction, Side};

fn close(a: &FiberVector, b: &FiberVector, tol: f64) {
    let d = a.max_abs_diff(b).unwrap();
    assert!(d < tol, "{d:e} ≥ {tol:e}\n{a:?}\n{b:?}");
}

#[test]
fn projection_of_fiber_function_is_unit_vector() {
    let table = IndexTable::new(2, 3).unwrap();
    let xi = [0.8, -1.3];
    let k = table.phi(2).unwrap().clone();
    let got = fiber_project(&table, &xi, |v| Complex64::new(q_eval(&k, &xi, v), 0.0), None, 32).unwrap();
    for (j, c) in got.components.iter().enumerate() {
        let want = if j == 1 { 1.0 } else { 0.0 };
        assert!((c - want).norm() < 1e-10, "component {j}: {c}");
    }
}

#[test]
fn projection_of_l_slice_is_q_at_y() {
    let table = IndexTable::new(1, 4).unwrap();
    let (xi, y) = ([1.1], [-0.6]);
    let got = fiber_project(
        &table,
        &xi,
        |v| Complex64::new(l_closed(&table, &xi, &y, v).unwrap(), 0.0),
        None,
        32,
    )
    .unwrap();
    for (c, q) in got.components.iter().zip(q_values(&table, &xi, &y)) {
        assert!((c - q).norm() < 1e-10);
    }
}

#[test]
fn projection_outside_span_leaves_residual() {
    let table = IndexTable::new(1, 2).unwrap();
    let xi = [0.4];
    let outside = MultiIndex::new(vec![2]);
    let g = |v: &[f64]| Complex64::new(q_eval(&outside, &xi, v), 0.0);
    let fiber = fiber_project(&table, &xi, g, None, 32).unwrap();
    assert!(fiber.norm_sqr() < 1e-20);
    let residual = (0..41)
        .map(|i| -3.0 + 0.15 * i as f64)
        .map(|v| (g(&[v]) - reconstruct(&table, &fiber, &[v]).unwrap()).norm())
        .fold(0.0, f64::max);
    assert!(residual > 0.1);
}

#[test]
fn l_diagonal_is_nonnegative_and_matches_quadrature() {
    let table = IndexTable::new(2, 3).unwrap();
    for (xi, y, v) in [
        ([0.3, -1.0], [0.5, 0.2], [-0.4, 0.9]),
        ([-2.0, 1.5], [-1.0, 0.0], [0.7, -0.3]),
    ] {
        assert!(l_closed(&table, &xi, &y, &y).unwrap() >= 0.0);
        let q = l_quadrature(2, 3, &xi, &y, &v, 64).unwrap();
        assert!((q - l_closed(&table, &xi, &y, &v).unwrap()).norm() < 1e-8);
    }
}

#[test]
fn kernel_image_at_origin() {
    let spec = KernelSpec::new(1, 1, 1.0).unwrap();
    for xi in [-2.0, 0.0, 1.7] {
        let got = r_f_kernel_image(&spec, &[0.0], &[xi]).unwrap();
        let want = q_eval(&MultiIndex::new(vec![0]), &[xi], &[0.0]) / SQRT_2;
        assert!((got.components[0] - want).norm() < 1e-15);
    }
}

#[test]
fn quadrature_routes_match_kernel_image() {
    let spec = KernelSpec::new(1, 3, 0.7).unwrap();
    let table = spec.table();
    for (y, xi) in [(0.4, -1.2), (-0.9, 2.5)] {
        let f = kernel_section_f(&spec, &ComplexPoint::imaginary(vec![y])).unwrap();
        let closed = r_f_kernel_image(&spec, &[y], &[xi]).unwrap();
        close(&r_f_apply(&spec, &f, &[xi], None).unwrap(), &closed, 1e-7);
        close(&r_h_apply(&table, &flatten(&spec, &f).unwrap(), &[xi], None).unwrap(), &closed, 1e-7);
    }
}

#[test]
fn zero_input_gives_zero_fiber() {
    let table = IndexTable::new(1, 2).unwrap();
    let g = FieldFunction::new(Side::H, 1, |_| Complex64::new(0.0, 0.0)).with_envelope(Envelope::new(
        vec![0.0, 0.0],
        vec![1.0, 1.0],
    ));
    let r = r_h_apply(&table, &g, &[0.5], None).unwrap();
    assert_eq!(r, FiberVector::zeros(&[0.5], 2));
}

#[test]
fn true_poly_kernel_occupies_one_component() {
    let spec = KernelSpec::new(2, 2, 1.0).unwrap();
    let table = spec.table();
    let y = vec![0.3, -0.2];
    let iy = ComplexPoint::imaginary(y.clone());
    let xi = [0.6, -0.4];
    let closed = r_f_kernel_image(&spec, &y, &xi).unwrap();
    for j0 in 0..table.d() {
        let beta = MultiIndex::new(table.indices()[j0].entries().iter().map(|k| k + 1).collect());
        let (b, p) = (beta.clone(), iy.clone());
        let f = FieldFunction::new(Side::F, 2, move |w| kernel_true_poly(&spec, &b, &p, w).unwrap())
            .with_envelope(Envelope::at(&iy, SQRT_2));
        let r = r_f_apply(&spec, &f, &xi, None).unwrap();
        for (j, c) in r.components.iter().enumerate() {
            if j == j0 {
                assert!((c - closed.components[j]).norm() < 1e-7);
            } else {
                assert!(c.norm() < 1e-7, "β = {beta}: component {j} = {c}");
            }
        }
    }
}

// (h * K^H_{0,y}(·, v))(u) with h(x) = e^{−x²/2}, convolution against dμ̃
fn convolved(y: f64) -> FieldFunction {
    let grid = QuadratureGrid::new(1, 48).unwrap();
    FieldFunction::new(Side::H, 1, move |q| {
        let (u, v) = (q.x[0], q.y[0]);
        let g = grid.recentered(&[u / 2.0], &[1.0]).unwrap();
        let p0 = ComplexPoint::imaginary(vec![y]);
        g.integrate(|x| {
            let k = kernel_h(1, 3, &p0, &ComplexPoint::from_split(vec![u - x[0]], vec![v]).unwrap()).unwrap();
            k * (-x[0] * x[0] / 2.0).exp()
        }) / (2.0 * PI).sqrt()
    })
    .with_envelope(Envelope::new(vec![0.0, y], vec![2.0, SQRT_2]))
}

#[test]
fn convolution_image_h_side() {
    let table = IndexTable::new(1, 3).unwrap();
    let y = 0.5;
    let g = convolved(y);
    for xi in [-1.0, 0.3, 2.0] {
        let got = r_h_apply(&table, &g, &[xi], None).unwrap();
        let h = gaussian_hat(&[xi]);
        let want = FiberVector {
            xi: vec![xi],
            components: q_values(&table, &[xi], &[y]).into_iter().map(|q| h * q).collect(),
        };
        close(&got, &want, 1e-7);
    }
}

#[test]
fn convolution_image_f_side() {
    // f = ∫ h(x) e^{−x²/2 + ixy} K^F_{(x+iy)/√α} dμ̃(x)
    let alpha = 2.0;
    let spec = KernelSpec::new(1, 3, alpha).unwrap();
    let y = -0.4;
    let grid = QuadratureGrid::new(1, 48).unwrap().recentered(&[0.0], &[1.0]).unwrap();
    let f = FieldFunction::new(Side::F, 1, move |w| {
        grid.integrate(|x| {
            let z = ComplexPoint::from_split(vec![x[0] / alpha.sqrt()], vec![y / alpha.sqrt()]).unwrap();
            let k = polyfock::kernels::kernel_f(&spec, &z, w).unwrap();
            Complex64::from_polar((-x[0] * x[0]).exp(), x[0] * y) * k
        }) / (2.0 * PI).sqrt()
    })
    .with_envelope(Envelope::new(vec![0.0, y / alpha.sqrt()], vec![2.0 / alpha.sqrt(), (2.0 / alpha).sqrt()]));
    let table = spec.table();
    for xi in [-0.8, 1.5] {
        let got = r_f_apply(&spec, &f, &[xi], None).unwrap();
        let c = (y * y / 2.0).exp() / SQRT_2 * gaussian_hat(&[xi]);
        let want = FiberVector {
            xi: vec![xi],
            components: q_values(&table, &[xi], &[y]).into_iter().map(|q| c * q).collect(),
        };
        close(&got, &want, 1e-7);
    }
}

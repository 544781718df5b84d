use std::f64::consts::PI;

use gaugebench::numerics::reduce::{par_sum, tree_sum};
use gaugebench::numerics::{
    contour_integrate, finite_diff, gauss_legendre, hermitian_inv_sqrt, integrate_gl, kernel_frame, real_matrix,
    richardson_diff, unitarity_defect, Contour, Grid4D, NumericsError, Quaternion,
};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn contour_residues() {
    let c = Contour::unit(64).unwrap();
    let v = contour_integrate(|z| 1.0 / z, &c).unwrap();
    assert!((v - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-12);
    let v = contour_integrate(|z| z * z + 3.0, &c).unwrap();
    assert!(v.norm() < 1e-12);
    let v = contour_integrate(|z| z.exp() / (z * z), &c).unwrap();
    assert!((v - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-12);
}

#[test]
fn contour_rejects_singular_node() {
    let c = Contour::unit(16).unwrap();
    let e = contour_integrate(|z| 1.0 / (z - 1.0), &c);
    assert!(matches!(e, Err(NumericsError::NonFinite(_))));
    assert!(Contour::unit(4).is_err());
}

#[test]
fn gauss_legendre_exact_for_polynomials() {
    for n in 1..=12 {
        let (x, w) = gauss_legendre(n);
        for deg in 0..2 * n {
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
        }
    }
    let v = integrate_gl(|x| x.sin(), 0.0, PI, 4, 8);
    assert!((v - 2.0).abs() < 1e-13);
}

#[test]
fn finite_differences() {
    let f = |x: &[f64]| (x[0] * x[1]).sin() + x[0].powi(3);
    let x = [0.3, -0.7];
    let d = finite_diff(f, &x, 1e-4, 1, &[0]).unwrap();
    let exact = x[1] * (x[0] * x[1]).cos() + 3.0 * x[0] * x[0];
    assert!((d - exact).abs() < 1e-7);
    let dd = finite_diff(f, &x, 1e-3, 2, &[0, 1]).unwrap();
    let exact = (x[0] * x[1]).cos() - x[0] * x[1] * (x[0] * x[1]).sin();
    assert!((dd - exact).abs() < 1e-5);
    let rd = richardson_diff(f, &x, 1e-2, 1, &[0]).unwrap();
    let exact = x[1] * (x[0] * x[1]).cos() + 3.0 * x[0] * x[0];
    assert!((rd - exact).abs() < 1e-8);
}

#[test]
fn kernel_of_rank_deficient_matrix() {
    let m = real_matrix(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
    let k = kernel_frame(&m, 1e-8).unwrap();
    assert_eq!(k.ncols(), 2);
    assert!((&m * &k).norm() < 1e-12);
    assert!(unitarity_defect(&k) < 1e-12);
}

#[test]
fn kernel_tolerance_ambiguity() {
    let m = real_matrix(&[&[1.0, 0.0], &[0.0, 1e-8]]);
    assert!(matches!(kernel_frame(&m, 1e-8), Err(NumericsError::ToleranceAmbiguous { .. })));
}

#[test]
fn inverse_square_root() {
    let h = real_matrix(&[&[2.0, 1.0], &[1.0, 2.0]]);
    let s = hermitian_inv_sqrt(&h).unwrap();
    let id = &s * &h * &s;
    assert!((id - gaugebench::numerics::ComplexMatrix::identity(2, 2)).norm() < 1e-12);
}

#[test]
fn grid_layout_and_binary_round_trip() {
    let g = Grid4D::new(1.0, 3).unwrap();
    assert_eq!(g.len(), 81);
    assert_eq!(g.point(0), [-1.0; 4]);
    assert_eq!(g.point(1), [-1.0, -1.0, -1.0, 0.0]);
    let values = g.sample(|x| x[0] + 10.0 * x[3]);
    let mut buf = Vec::new();
    g.write_binary(&values, &mut buf).unwrap();
    let (g2, v2) = Grid4D::read_binary(&buf[..]).unwrap();
    assert_eq!(g2, g);
    assert_eq!(v2, values);
    let mut csv = Vec::new();
    g.write_csv(&values, &mut csv).unwrap();
    assert!(String::from_utf8(csv).unwrap().starts_with("x1,x2,x3,x4,value\n"));
    assert!(Grid4D::new(1.0, 2).is_err());
}

#[test]
fn sums_do_not_depend_on_thread_count() {
    let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
    let n = 100_000;
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| par_sum(n, f));
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| par_sum(n, f));
    assert_eq!(one.to_bits(), four.to_bits());
    let v: Vec<f64> = (0..n).map(f).collect();
    assert!((tree_sum(&v) - v.iter().sum::<f64>()).abs() < 1e-10);
}

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from_point)
}

proptest! {
    #[test]
    fn quaternion_norm_is_multiplicative(a in quat(), b in quat()) {
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() < 1e-10);
    }

    #[test]
    fn su2_is_a_homomorphism(a in quat(), b in quat()) {
        let m = |q: Quaternion| {
            let s = q.to_su2();
            nalgebra::Matrix2::new(s[0][0], s[0][1], s[1][0], s[1][1])
        };
        let diff = m(a * b) - m(a) * m(b);
        prop_assert!(diff.norm() < 1e-10);
    }
}

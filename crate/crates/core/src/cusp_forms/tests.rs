use super::*;
use crate::error::Error;
use crate::lattice::IntegerLattice;
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn real(n: u32) -> CuspModel {
    CuspModel::real(n, IntegerLattice::identity(n as usize - 1)).unwrap()
}

fn constant_form(model: &CuspModel, degree: u32, terms: &[(Mask, f64)]) -> CuspForm {
    let zero = vec![0; model.cross_dim()];
    let mut f = CuspForm::new(model, degree, Grid::standard()).unwrap();
    for &(m, x) in terms {
        f.add_term(model, &zero, m, Coeff::ClosedForm(ExpSum::constant(c(x)))).unwrap();
    }
    f
}

/// K_p(x) = ∫_0^∞ e^{−x cosh t}cosh(pt) dt by the trapezoid rule.
fn bessel_k(p: f64, x: f64) -> f64 {
    let h = 1e-3;
    let mut total = 0.5 * (-x).exp();
    let mut t: f64 = h;
    loop {
        let term = (-x * t.cosh()).exp() * (p * t).cosh();
        total += term;
        if term < 1e-300 || t > 30.0 {
            break;
        }
        t += h;
    }
    total * h
}

#[test]
fn zero_mode_is_harmonic() {
    let m = real(3);
    let f = make_zero_mode(&m, &[1.0, 0.0], &[0.0]).unwrap();
    assert!(f.is_harmonic());
    let (d, delta) = harmonic_residuals(&m, &f).unwrap();
    assert!(d < 1e-10 && delta < 1e-10);
    let g = make_zero_mode(&real(5), &[0.3, 0.0, 1.0, 0.0, 0.0, -2.0], &[1.0, 0.5, 0.0, 0.0]).unwrap();
    let (d, delta) = harmonic_residuals(&real(5), &g).unwrap();
    assert!(d < 1e-10 && delta < 1e-10);
}

#[test]
fn zero_mode_rejects_even_dimension_and_bad_lengths() {
    assert!(matches!(make_zero_mode(&real(4), &[1.0; 3], &[0.0; 3]), Err(Error::Domain(_))));
    assert!(matches!(make_zero_mode(&real(3), &[1.0], &[0.0]), Err(Error::Domain(_))));
}

#[test]
fn vanishing_zero_mode_has_zero_norm() {
    let m = real(3);
    let f = make_zero_mode(&m, &[0.0, 0.0], &[0.0]).unwrap();
    assert!(f.is_zero());
    assert_eq!(slab_l2_norm(&m, &f, 0.0, f64::INFINITY).unwrap(), 0.0);
}

#[test]
fn zero_mode_radial_part_slab_norm() {
    // |b e^{2s} ds|² = e^{4s}, volume density e^{−2s}: ∫_0^S e^{2s} ds.
    let m = real(3);
    let f = make_zero_mode(&m, &[0.0, 0.0], &[1.0]).unwrap();
    for s in [0.5, 1.0, 2.0] {
        let got = slab_l2_norm(&m, &f, 0.0, s).unwrap();
        let expect = ((2.0 * s).exp() - 1.0) / 2.0;
        assert!((got - expect).abs() < 1e-12 * expect);
    }
    assert!(matches!(slab_l2_norm(&m, &f, 0.0, f64::INFINITY), Err(Error::Divergence(_))));
    let g = make_zero_mode(&m, &[1.0, 0.0], &[0.0]).unwrap();
    assert!(matches!(slab_l2_norm(&m, &g, 0.0, f64::INFINITY), Err(Error::Divergence(_))));
}

#[test]
fn zero_mode_tangential_slab_norm() {
    // |dt1|² = e^{2s} against density 6e^{−2s}: the slab (0,1) has mass 6.
    let l = IntegerLattice::from_integers(&[vec![2, 0], vec![0, 3]]).unwrap();
    let m = CuspModel::real(3, l).unwrap();
    let f = make_zero_mode(&m, &[1.0, 0.0], &[0.0]).unwrap();
    assert!((slab_l2_norm(&m, &f, 0.0, 1.0).unwrap() - 6.0).abs() < 1e-12);
}

#[test]
fn cusp_volume_scales_with_height() {
    let m = real(4);
    let one = constant_form(&m, 0, &[(0, 1.0)]);
    let v0 = slab_l2_norm(&m, &one, 0.0, f64::INFINITY).unwrap();
    assert!((v0 - m.slab_volume(0.0, f64::INFINITY)).abs() < 1e-15);
    for k in [0.5, 1.0, 2.5] {
        let vk = slab_l2_norm(&m, &one, k, f64::INFINITY).unwrap();
        assert!((vk - (-3.0 * k).exp() * v0).abs() < 1e-14);
    }
}

#[test]
fn norm_is_quadratic_in_scaling() {
    let m = real(5);
    let f = constant_form(&m, 1, &[(0b10, 1.0), (0b1000, -0.5)]);
    let n1 = slab_l2_norm(&m, &f, 0.2, 3.0).unwrap();
    let n3 = slab_l2_norm(&m, &f.scale(c(3.0)), 0.2, 3.0).unwrap();
    assert!((n3 - 9.0 * n1).abs() < 1e-12 * n3);
}

#[test]
fn star_star_sign_on_basis_forms() {
    for m in [real(4), CuspModel::complex(2, &IntegerLattice::identity(2), 1.5).unwrap()] {
        let n = m.real_dim();
        for k in 0..=n {
            for mask in subsets(0, n, k) {
                let f = constant_form(&m, k, &[(mask, 1.0)]);
                let ss = hodge_star(&m, &hodge_star(&m, &f));
                let sign = if (k * (n - k)) % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(ss.modes()[0].coeffs[&mask], Coeff::ClosedForm(ExpSum::constant(c(sign))));
            }
        }
    }
}

#[test]
fn constant_tangential_forms_are_harmonic_on_complex_cusps() {
    let m = CuspModel::complex(2, &IntegerLattice::identity(2), 0.7).unwrap();
    for mask in subsets(1, 4, 1).into_iter().chain(subsets(1, 4, 2)) {
        let k = mask.count_ones();
        let f = certify_harmonic(&m, constant_form(&m, k, &[(mask, 1.0)]), EXACT_HARMONIC_TOL);
        assert!(f.is_ok(), "{mask:#b}");
    }
}

#[test]
fn balance_on_zero_form() {
    let m = real(5);
    let f = CuspForm::zero(&m, 1).unwrap();
    let r = verify_cusp_balance(&m, &f, 0.5).unwrap();
    assert_eq!(r.residual, 0.0);
}

#[test]
fn balance_requires_harmonic_l2() {
    let m = real(5);
    let f = constant_form(&m, 1, &[(0b1, 1.0)]);
    assert!(matches!(verify_cusp_balance(&m, &f, 0.0), Err(Error::Precondition(_))));
    let z = make_zero_mode(&m, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], &[0.0; 4]).unwrap();
    assert!(matches!(verify_cusp_balance(&m, &z, 0.0), Err(Error::Precondition(_))));
}

#[test]
fn balance_on_constant_forms() {
    let m = real(6);
    let f = certify_harmonic(&m, constant_form(&m, 2, &[(0b110, 1.0), (0b101000, 2.0)]), 1e-10).unwrap();
    for u in [0.0, 0.7, 2.0] {
        let r = verify_cusp_balance(&m, &f, u).unwrap();
        assert!(r.residual < 1e-12, "{r:?}");
        assert!(r.monotone);
        assert_eq!(r.profile.mu_alpha, 0.0);
    }
    let mc = CuspModel::complex(3, &IntegerLattice::identity(4), 2.0).unwrap();
    let g = certify_harmonic(&mc, constant_form(&mc, 2, &[(0b1100, 1.0), (0b110000, -1.0)]), 1e-10).unwrap();
    let r = verify_cusp_balance(&mc, &g, 1.0).unwrap();
    assert!(r.residual < 1e-12);
    assert_eq!(r.profile.mu_fiber, Some(0.0));
}

#[test]
fn solved_mode_matches_bessel_profile() {
    let m = real(5);
    let (f, info) = solve_harmonic_mode_with_info(&m, 1, &[1, 0, 0, 0]).unwrap();
    assert!(info.d_residual < 1e-8 && info.delta_residual < 1e-8, "{info:?}");
    // a(s) ∝ y^p K_p(κy), y = e^s, p = (n+1−2k)/2.
    let p = 2.0;
    let kappa = 2.0 * std::f64::consts::PI;
    let coeff = &f.modes()[0].coeffs[&0b10];
    let a0 = coeff.eval(f.grid(), 0.0).re;
    let k0 = bessel_k(p, kappa);
    for s in [0.25, 0.5, 1.0, 1.5] {
        let y: f64 = f64::exp(s);
        let expect = y.powf(p) * bessel_k(p, kappa * y) / k0;
        let got = coeff.eval(f.grid(), s).re / a0;
        assert!((got - expect).abs() < 1e-7 * expect, "s={s}: {got} vs {expect}");
    }
    let total = slab_l2_norm(&m, &f, 0.0, f64::INFINITY).unwrap();
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn solved_mode_has_small_radial_mass() {
    let m = real(5);
    let f = solve_harmonic_mode(&m, 1, &[1, 0, 0, 0]).unwrap();
    for i in (0..f.grid().len).step_by(37) {
        let p = slice_profile(&m, &f, f.grid().s(i));
        if p.mass > 0.0 {
            assert!(p.mu_alpha >= 0.0 && p.mu_alpha < 0.5, "{p:?}");
        }
    }
}

#[test]
fn solved_mode_balance_and_price() {
    let m = real(5);
    let f = solve_harmonic_mode(&m, 1, &[1, 0, 0, 0]).unwrap();
    for u in [0.0, 0.5, 1.0] {
        let r = verify_cusp_balance(&m, &f, u).unwrap();
        assert!(r.residual < 1e-6 && r.monotone, "u={u}: {r:?}");
    }
    for p in cusp_price_check(&m, &f, &[0.5, 1.0, 2.0]).unwrap() {
        assert!(p.pass, "{p:?}");
    }
}

#[test]
fn doubled_frequency_decays_faster() {
    let m = real(5);
    let f1 = solve_harmonic_mode(&m, 1, &[1, 0, 0, 0]).unwrap();
    let f2 = solve_harmonic_mode(&m, 1, &[2, 0, 0, 0]).unwrap();
    let t1 = slab_l2_norm(&m, &f1, 2.0, f64::INFINITY).unwrap();
    let t2 = slab_l2_norm(&m, &f2, 2.0, f64::INFINITY).unwrap();
    assert!(t2 < t1, "{t2} vs {t1}");
}

#[test]
fn oblique_frequency_and_higher_degree() {
    let l = IntegerLattice::from_integers(&[vec![1, 0, 0, 0, 0, 0], vec![1, 2, 0, 0, 0, 0], vec![0, 0, 1, 0, 0, 0], vec![0, 0, 0, 1, 0, 0], vec![0, 0, 0, 0, 1, 0], vec![0, 0, 0, 0, 0, 1]]).unwrap();
    let m = CuspModel::real(7, l).unwrap();
    let f = solve_harmonic_mode(&m, 2, &[1, 1, 0, 0, 0, 0]).unwrap();
    let r = verify_cusp_balance(&m, &f, 0.5).unwrap();
    assert!(r.residual < 1e-6, "{r:?}");
}

#[test]
fn mode_solver_domain() {
    let m = real(5);
    assert!(matches!(solve_harmonic_mode(&m, 1, &[0, 0, 0, 0]), Err(Error::Domain(_))));
    assert!(matches!(solve_harmonic_mode(&m, 0, &[1, 0, 0, 0]), Err(Error::Domain(_))));
    assert!(matches!(solve_harmonic_mode(&m, 3, &[1, 0, 0, 0]), Err(Error::Domain(_))));
}

#[test]
fn critical_degree_inequality() {
    let m = real(3);
    let f = solve_harmonic_mode(&m, 1, &[1, 0]).unwrap();
    for r0 in [0.0, 1.0, 2.0] {
        let chk = critical_inequality(&m, &f, r0).unwrap();
        assert!(chk.pass && chk.margin >= 0.0, "{chk:?}");
        let r = verify_cusp_balance(&m, &f, r0).unwrap();
        assert!(r.critical.unwrap().pass);
    }
}

#[test]
fn primitive_of_solved_mode() {
    let m = real(5);
    let f = solve_harmonic_mode(&m, 1, &[0, 1, 0, 0]).unwrap();
    for r in [0.0, 0.5, 1.0] {
        let p = primitive_check(&m, &f, r).unwrap();
        assert!(p.pass, "{p:?}");
    }
}

#[test]
fn json_round_trip() {
    let m = real(3);
    let f = solve_harmonic_mode(&m, 1, &[1, 0]).unwrap();
    let text = form_to_json(&m, &f).unwrap();
    let g = form_from_json(&m, &text).unwrap();
    assert_eq!(g.modes(), f.modes());
    let z = make_zero_mode(&m, &[1.0, 2.0], &[3.0]).unwrap();
    let zz = form_from_json(&m, &form_to_json(&m, &z).unwrap()).unwrap();
    assert_eq!(zz.modes(), z.modes());
    assert!(form_from_json(&real(5), &text).is_err());
}

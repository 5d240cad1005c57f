use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use pricebench_core::bounds::{congruence_degrees, congruence_exponent, nu_threshold, su_compact_exponent_alt, Setting};
use pricebench_core::cusp_forms::{
    codifferential, exterior_derivative, hodge_star, subsets, Coeff, CuspForm, CuspModel, ExpSum, ExpTerm, Grid,
};
use pricebench_core::geometry::{eigenvalue_gap, eigenvalues_descending, sphere_shape, Kind, RankOneSpace};
use pricebench_core::lattice::{
    count_points_in_ball, dual_lattice, nbound_check, successive_minima, IntegerLattice, DEFAULT_BUDGET,
};
use pricebench_core::matrix_coeff::Group;
use proptest::prelude::*;

fn space_strategy() -> impl Strategy<Value = RankOneSpace> {
    prop_oneof![
        (2u32..9).prop_map(|n| RankOneSpace::new(Kind::R, n).unwrap()),
        (2u32..6).prop_map(|n| RankOneSpace::new(Kind::C, n).unwrap()),
        (2u32..4).prop_map(|n| RankOneSpace::new(Kind::H, n).unwrap()),
        (1u32..3).prop_map(|n| RankOneSpace::new(Kind::O, n).unwrap()),
    ]
}

fn lattice_strategy() -> impl Strategy<Value = IntegerLattice> {
    (2usize..=4)
        .prop_flat_map(|d| proptest::collection::vec(proptest::collection::vec(-4i64..=4, d), d))
        .prop_filter_map("singular", |rows| IntegerLattice::from_integers(&rows).ok())
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gap_matches_sorted_eigenvalues(space in space_strategy(), kf in 0.0f64..1.0, r in 0.05f64..6.0) {
        let m = space.m();
        let k = 1 + ((m - 1) as f64 * kf) as u32;
        let eig = eigenvalues_descending(&space, r).unwrap();
        let h: f64 = eig.iter().sum();
        let brute = h / 2.0 - eig[..k as usize].iter().sum::<f64>();
        let closed = eigenvalue_gap(&space, k, r).unwrap();
        prop_assert!((brute - closed).abs() < 1e-9 * (1.0 + brute.abs()));
    }

    #[test]
    fn radial_eigenvalues_are_ordered(space in space_strategy(), r in 0.01f64..20.0) {
        let s = sphere_shape(&space, r).unwrap();
        prop_assert!(2.0 / (2.0 * r).tanh() > 1.0 / r.tanh());
        prop_assert!(s.lambda1 >= s.lambda2);
    }

    #[test]
    fn transference(l in lattice_strategy()) {
        let sm = successive_minima(&l).unwrap();
        prop_assert!(sm.transference_holds());
        let last = sm.minima_sq.last().unwrap();
        prop_assert!(&sm.delta_sq * last >= BigRational::from_integer(1.into()));
    }

    #[test]
    fn dual_of_dual_is_identity(l in lattice_strategy()) {
        let dd = dual_lattice(&dual_lattice(&l).unwrap()).unwrap();
        prop_assert_eq!(dd.basis(), l.basis());
    }

    #[test]
    fn minima_scale_linearly(l in lattice_strategy(), c in 1i64..5) {
        let a = successive_minima(&l).unwrap();
        let cl = l.scaled(&BigRational::from_integer(c.into())).unwrap();
        let b = successive_minima(&cl).unwrap();
        for (x, y) in a.minima_sq.iter().zip(&b.minima_sq) {
            prop_assert_eq!(x * BigRational::from_integer((c * c).into()), y.clone());
        }
    }

    #[test]
    fn counts_grow_with_radius(l in lattice_strategy(), r1 in 0.0f64..4.0, dr in 0.0f64..3.0) {
        let a = count_points_in_ball(&l, r1, DEFAULT_BUDGET).unwrap();
        let b = count_points_in_ball(&l, r1 + dr, DEFAULT_BUDGET).unwrap();
        prop_assert!(a <= b);
        prop_assert!(a >= 1);
    }

    #[test]
    fn point_count_bound_under_hypothesis(l in lattice_strategy(), nu in 0u32..3, frac in 0.05f64..0.95) {
        let sm = successive_minima(&l).unwrap();
        let top = to_f64(sm.minima_sq.last().unwrap()).sqrt();
        let r = frac * top / ((nu + 1) as f64).exp();
        let rep = nbound_check(&l, nu, r, l.dim() as u32 + 1, DEFAULT_BUDGET).unwrap();
        prop_assert!(rep.satisfied, "{:?}", rep);
    }

    #[test]
    fn nu_threshold_increases(nu in 0u32..10_000) {
        prop_assert!(nu_threshold(nu) < nu_threshold(nu + 1));
        prop_assert!(nu_threshold(nu + 1) < 0.5);
    }
}

#[test]
fn congruence_forms_agree() {
    for n in 2..=40 {
        for k in congruence_degrees(Group::SU, n) {
            assert_eq!(congruence_exponent(Group::SU, n, k, Setting::Compact).unwrap(), su_compact_exponent_alt(n, k));
        }
    }
}

fn random_form(model: &CuspModel, degree: u32, terms: &[(usize, Vec<i64>, f64, f64, f64)]) -> CuspForm {
    let masks = subsets(0, model.real_dim(), degree);
    let mut f = CuspForm::new(model, degree, Grid::standard()).unwrap();
    for (pick, v, re, im, rate) in terms {
        let mask = masks[pick % masks.len()];
        let e = ExpSum(vec![ExpTerm { coeff: Complex64::new(*re, *im), rate: *rate }]);
        f.add_term(model, v, mask, Coeff::ClosedForm(e)).unwrap();
    }
    f
}

fn term_strategy(d: usize) -> impl Strategy<Value = (usize, Vec<i64>, f64, f64, f64)> {
    (0usize..64, proptest::collection::vec(-2i64..=2, d), -2.0f64..2.0, -2.0f64..2.0, -2.0f64..0.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn d_squared_vanishes(n in 3u32..6, kf in 0.0f64..1.0, terms in proptest::collection::vec(term_strategy(5), 1..4)) {
        let model = CuspModel::real(n, IntegerLattice::identity(n as usize - 1)).unwrap();
        let k = ((n - 1) as f64 * kf) as u32;
        let terms: Vec<_> = terms.into_iter().map(|(p, v, a, b, r)| (p, v[..n as usize - 1].to_vec(), a, b, r)).collect();
        let f = random_form(&model, k, &terms);
        let dd = exterior_derivative(&model, &exterior_derivative(&model, &f).unwrap()).unwrap();
        let scale = f.sup_norm(&model) * 400.0;
        prop_assert!(dd.sup_norm(&model) <= 1e-9 * scale.max(1e-300));
    }

    #[test]
    fn codifferential_squared_vanishes(n in 3u32..6, kf in 0.0f64..1.0, terms in proptest::collection::vec(term_strategy(5), 1..4)) {
        let model = CuspModel::real(n, IntegerLattice::identity(n as usize - 1)).unwrap();
        let k = 2 + ((n - 2) as f64 * kf) as u32;
        let terms: Vec<_> = terms.into_iter().map(|(p, v, a, b, r)| (p, v[..n as usize - 1].to_vec(), a, b, r)).collect();
        let f = random_form(&model, k.min(n), &terms);
        let dd = codifferential(&model, &codifferential(&model, &f).unwrap()).unwrap();
        let scale = f.sup_norm(&model) * 400.0;
        prop_assert!(dd.sup_norm(&model) <= 1e-9 * scale.max(1e-300));
    }

    #[test]
    fn star_star_is_signed_identity(n in 2u32..4, kf in 0.0f64..1.0, terms in proptest::collection::vec(term_strategy(6), 1..4)) {
        let model = CuspModel::complex(n, &IntegerLattice::identity(2 * n as usize - 2), 1.25).unwrap();
        let nd = model.real_dim();
        let k = (nd as f64 * kf) as u32;
        let terms: Vec<_> = terms.into_iter().map(|(p, v, a, b, r)| (p, v[..nd as usize - 1].to_vec(), a, b, r)).collect();
        let f = random_form(&model, k, &terms);
        let ss = hodge_star(&model, &hodge_star(&model, &f));
        let sign = if (k * (nd - k)).is_multiple_of(2) { 1.0 } else { -1.0 };
        let g = f.scale(Complex64::new(sign, 0.0));
        prop_assert_eq!(ss.modes().len(), g.modes().len());
        for (a, b) in ss.modes().iter().zip(g.modes()) {
            prop_assert_eq!(a.coeffs.keys().collect::<Vec<_>>(), b.coeffs.keys().collect::<Vec<_>>());
            for (ca, cb) in a.coeffs.values().zip(b.coeffs.values()) {
                let (Coeff::ClosedForm(x), Coeff::ClosedForm(y)) = (ca, cb) else { panic!("closed forms expected") };
                prop_assert_eq!(x.0.len(), y.0.len());
                for (tx, ty) in x.0.iter().zip(&y.0) {
                    prop_assert!((tx.coeff - ty.coeff).norm() <= 1e-14 * ty.coeff.norm());
                    prop_assert!((tx.rate - ty.rate).abs() <= 1e-12);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn solved_modes_keep_radial_mass_small(n in 5u32..8, kf in 0.0f64..1.0, v in proptest::collection::vec(-2i64..=2, 6)) {
        use pricebench_core::cusp_forms::{cusp_price_check, slice_profile, solve_harmonic_mode};
        let v = &v[..n as usize - 1];
        prop_assume!(v.iter().any(|&x| x != 0));
        let kmax = (n - 2) / 2;
        let k = 1 + ((kmax - 1) as f64 * kf).round() as u32;
        let model = CuspModel::real(n, IntegerLattice::identity(n as usize - 1)).unwrap();
        let f = solve_harmonic_mode(&model, k, v).unwrap();
        for i in (0..f.grid().len).step_by(53) {
            let p = slice_profile(&model, &f, f.grid().s(i));
            prop_assert!(p.mass == 0.0 || p.mu_alpha < 0.5);
        }
        for c in cusp_price_check(&model, &f, &[0.5, 1.0, 2.0]).unwrap() {
            prop_assert!(c.pass, "{:?}", c);
        }
    }
}

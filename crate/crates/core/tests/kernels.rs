use lamcert::operator::OperatorFamily;
use lamcert::poly::{gcd_uni, resultant};
use lamcert::scalar::{format_rational, parse_rational, q, qi, to_f64};
use lamcert::{Axis, FHomPoly2, HomPoly2, QHomPoly2, QMatrix, QPoly2, QUniPoly, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| q(n, d))
}

fn matrix(n: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(rational(), n * n).prop_map(move |data| QMatrix::new(n, n, data).unwrap())
}

fn hom(degree: usize) -> impl Strategy<Value = QHomPoly2> {
    prop::collection::vec(rational(), degree + 1).prop_map(|c| QHomPoly2::new(c).unwrap())
}

fn family(degree: usize) -> impl Strategy<Value = OperatorFamily> {
    (hom(degree), hom(degree), hom(degree)).prop_map(|(a, b, c)| OperatorFamily::new([a, b, c]).unwrap())
}

/// `Σ_s coeff_s · ∂x^(d-s) ∂y^s P` by repeated differentiation.
fn apply_by_partials(form: &QHomPoly2, potential: &QPoly2) -> Rational {
    let d = form.degree();
    let mut acc = Rational::zero();
    for s in 0..=d {
        let mut p = potential.clone();
        for _ in 0..d - s {
            p = p.partial(Axis::X);
        }
        for _ in 0..s {
            p = p.partial(Axis::Y);
        }
        acc += form.coeff(s) * p.eval(&qi(0), &qi(0));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fraction_free_determinant_matches_cofactors(m in (1usize..=6).prop_flat_map(matrix)) {
        prop_assert_eq!(m.determinant().unwrap(), m.determinant_by_cofactors().unwrap());
    }

    #[test]
    fn solutions_satisfy_the_system(m in (1usize..=8).prop_flat_map(matrix), seed in any::<u64>()) {
        prop_assume!(!m.determinant().unwrap().is_zero());
        let n = m.rows();
        let rhs: Vec<Rational> = (0..n as u64).map(|i| q(((seed >> i) % 19) as i64 - 9, 1 + (i as i64 % 4))).collect();
        let rhs = QMatrix::from_columns(&[rhs]).unwrap();
        let x = m.solve(&rhs).unwrap();
        prop_assert_eq!(m.mul(&x).unwrap(), rhs);
    }

    #[test]
    fn coprimality_oracles_agree(
        roots_a in prop::collection::vec(-6i64..=6, 1..5),
        roots_b in prop::collection::vec(-6i64..=6, 1..5),
        lead in 1i64..5,
    ) {
        let to_q = |r: &[i64]| r.iter().map(|&v| qi(v)).collect::<Vec<_>>();
        let a = QUniPoly::from_roots(qi(lead), &to_q(&roots_a));
        let b = QUniPoly::from_roots(qi(1), &to_q(&roots_b));
        let shared = roots_a.iter().any(|r| roots_b.contains(r));
        prop_assert_eq!(gcd_uni(&a, &b).unwrap().is_constant(), !shared);
        prop_assert_eq!(resultant(&a, &b).unwrap().is_zero(), shared);
    }

    #[test]
    fn real_roots_of_split_products(roots in prop::collection::btree_set(-9i64..=9, 0..6), lead in -4i64..=4) {
        prop_assume!(lead != 0);
        let rs: Vec<Rational> = roots.iter().map(|&r| q(r, 2)).collect();
        // times z^2 + 1, which contributes no real roots
        let p = QUniPoly::from_roots(qi(lead), &rs).mul(&QUniPoly::new(vec![qi(1), qi(0), qi(1)]));
        prop_assert_eq!(p.count_real_roots(), roots.len());
    }

    #[test]
    fn rational_text_round_trip(r in rational()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn plane_wave_is_a_power_of_the_linear_form(f in family(3), x in rational(), y in rational()) {
        let linear = QPoly2::linear(qi(0), x.clone(), y.clone());
        let mut power = QPoly2::constant(qi(1));
        for _ in 0..3 {
            power = power.mul(&linear);
        }
        let expected = power.scale(&q(1, 6));
        let wave = f.plane_wave_potential(&[x.clone(), y.clone()]);
        prop_assert_eq!(&wave, &expected);
        let image = f.apply_b_to_poly(&wave).unwrap();
        prop_assert_eq!(&image, &f.symbol_b(&[x, y]));
        for (j, value) in image.iter().enumerate() {
            prop_assert_eq!(value, &apply_by_partials(f.component(j), &wave));
        }
    }

    #[test]
    fn annihilator_kills_the_symbol(f in family(2), x in rational(), y in rational()) {
        prop_assert!(f.symbolic_a_times_b().iter().all(HomPoly2::is_zero));
        let xi = [x, y];
        let col = QMatrix::from_columns(&[f.symbol_b(&xi)]).unwrap();
        prop_assert!(f.symbol_a(&xi).mul(&col).unwrap().is_zero());
    }

    #[test]
    fn float_partials_match_divided_differences(
        c in prop::collection::vec(-5.0f64..5.0, 5),
        x in -2.0f64..2.0,
        y in -2.0f64..2.0,
    ) {
        let p = FHomPoly2::new(c).unwrap();
        let h = 1e-5;
        let dx = p.partial(Axis::X).unwrap().eval(&x, &y);
        let dy = p.partial(Axis::Y).unwrap().eval(&x, &y);
        let fx = (p.eval(&(x + h), &y) - p.eval(&(x - h), &y)) / (2.0 * h);
        let fy = (p.eval(&x, &(y + h)) - p.eval(&x, &(y - h))) / (2.0 * h);
        prop_assert!((dx - fx).abs() <= 1e-5 * (1.0 + dx.abs()));
        prop_assert!((dy - fy).abs() <= 1e-5 * (1.0 + dy.abs()));
    }
}

#[test]
fn float_and_exact_determinants_agree_on_small_integers() {
    let rows = [vec![2, -1, 0, 3], vec![1, 4, -2, 0], vec![0, 5, 1, -1], vec![-3, 0, 2, 2]];
    let exact =
        QMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&v| qi(v)).collect()).collect::<Vec<_>>()).unwrap();
    let float =
        lamcert::FMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect::<Vec<_>>())
            .unwrap();
    let d = exact.determinant().unwrap();
    assert_eq!(d, exact.determinant_by_cofactors().unwrap());
    assert!((float.determinant().unwrap() - to_f64(&d)).abs() < 1e-9);
    assert_eq!(QMatrix::identity(4).determinant().unwrap(), Rational::one());
}

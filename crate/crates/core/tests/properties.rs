mod common;

use clairaut::{parse, presets, Expr, ManifoldSpec, SamplingDomain, Vector, VectorField};
use proptest::prelude::*;

use common::*;

/// Random expressions over x1, x2, x3 that stay finite on the unit box.
fn arb_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (1usize..=3).prop_map(|i| format!("x{i}")),
        (-3.0f64..3.0).prop_map(|c| format!("({c:.3})")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) / (2 + ({b})^2)")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("exp(0.1 * {a})")),
            inner.clone().prop_map(|a| format!("sqrt(1 + ({a})^2)")),
            inner.clone().prop_map(|a| format!("ln(1 + ({a})^2)")),
            inner.prop_map(|a| format!("({a})^3")),
        ]
    })
}

fn point3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn derivative_matches_central_difference(src in arb_expr(), p in point3()) {
        let e = parse(&src, 3).unwrap();
        for i in 0..3 {
            let exact = e.diff(i).eval(&p).unwrap();
            let approx = fd_partial(&e, &p, i);
            prop_assert!(
                (exact - approx).abs() <= 1e-6 * (1.0 + exact.abs()),
                "{src} d/dx{}: {exact} vs {approx}", i + 1
            );
        }
    }

    #[test]
    fn print_parse_round_trip(src in arb_expr(), p in point3()) {
        let e = parse(&src, 3).unwrap();
        let again: Expr = e.to_string().parse().unwrap();
        let (a, b) = (e.eval(&p).unwrap(), again.eval(&p).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{a} vs {b}");
    }

    #[test]
    fn christoffel_is_symmetric(x in -1.0f64..1.0, y in -1.0f64..1.0, a in 0.1f64..2.0) {
        let m = ManifoldSpec::new(
            vec![
                vec![parse(&format!("1 + {a}*x2^2"), 2).unwrap(), parse("0.3*x1", 2).unwrap()],
                vec![parse("0.3*x1", 2).unwrap(), parse("2 + sin(x1)", 2).unwrap()],
            ],
            SamplingDomain::unbounded(2),
        )
        .unwrap();
        let g = m.christoffel(&v(&[x, y])).unwrap();
        prop_assert!(g.max_asymmetry() < 1e-14);
    }

    #[test]
    fn koszul_matches_covariant_derivative(p in prop::collection::vec(-1.0f64..1.0, 2),
                                           c in prop::collection::vec(-2.0f64..2.0, 4)) {
        let m = presets::conformal_r2();
        let x = VectorField::parse(&[&format!("{} + x2", c[0]), &format!("{} * x1^2", c[1])]).unwrap();
        let y = VectorField::parse(&[&format!("cos({} * x1)", c[2]), "x1 * x2"]).unwrap();
        let z = VectorField::parse(&[&format!("{}", c[3]), "exp(x2)"]).unwrap();
        let p = Vector::from_vec(p);
        let lhs = m.koszul(&x, &y, &z, &p).unwrap();
        let g = m.metric_at(&p).unwrap();
        let nab = m.covariant_derivative(&x, &y, &p).unwrap();
        let rhs = 2.0 * (nab.transpose() * g * z.eval(&p).unwrap())[0];
        prop_assert!((lhs - rhs).abs() < 1e-8 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn alpha_beta_reconstruct(x1 in -2.0f64..2.0, x2 in -2.0f64..2.0, x3 in -2.0f64..2.0, x4 in -2.0f64..2.0,
                              k in prop::collection::vec(-1.0f64..1.0, 3)) {
        prop_assume!(x1 * x1 + x2 * x2 > 0.01);
        let s = bundled("example-ii").scenario;
        let p = v(&[x1, x2, x3, x4]);
        let frame = s.submersion.build_frame(&p).unwrap();
        let x = frame.horizontal.iter().zip(&k).fold(Vector::zeros(4), |acc, (h, c)| acc + h * *c);
        let r = s.alpha_beta_split(&p, &x).unwrap();
        let phi = s.structure.at(&p).unwrap();
        prop_assert!((&phi * &x - &r.alpha - &r.beta).norm() < 1e-10);
        prop_assert!(r.mu_defect < 1e-10);
        prop_assert!(frame.project(&r.alpha).1.norm() < 1e-10);
    }

    #[test]
    fn vertical_projector_is_idempotent(x1 in -2.0f64..2.0, x2 in -2.0f64..2.0, x3 in -2.0f64..2.0) {
        prop_assume!(x1 * x1 + x2 * x2 > 0.01);
        let s = bundled("example-ii").scenario;
        let pv = s.submersion.vertical_projector(&v(&[x1, x2, x3, 0.5])).unwrap();
        prop_assert!((&pv * &pv - &pv).amax() < 1e-12);
        prop_assert!((pv.trace() - 1.0).abs() < 1e-12);
    }
}

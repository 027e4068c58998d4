mod common;

use common::*;
use fanic::exactmath::FieldScalar;
use fanic::fan::{build_fan, Fan, FanPoset};
use fanic::fansheaf::quasiconvexity_test;
use fanic::hvector::{
    classical_h_from_f, duality_check, fan_local_poincare, global_poincare, kalai_check, local_poincare,
    local_poincare_series, poincare_series, Mode, PoincarePolynomial, Provenance,
};
use proptest::prelude::*;

fn p(c: &[i64]) -> PoincarePolynomial {
    PoincarePolynomial::new(c.to_vec())
}

fn top(f: &Fan) -> usize {
    f.maximal_cones()[0]
}

fn corpus() -> Vec<(&'static str, Fan)> {
    let mut out = vec![
        ("p1", p1()),
        ("p1xp1", p1xp1()),
        ("half_plane", half_plane()),
        ("opposite_quadrants", opposite_quadrants()),
        ("square", square_face_fan()),
        ("cube", cube_face_fan()),
        ("octahedron", octahedron_face_fan()),
        ("square_cone", square_cone()),
        ("cube_cone", cube_cone()),
        ("octahedron_cone", octahedron_cone()),
        ("prism_sides", prism_sides()),
        ("square_diagonal", square_diagonal()),
        ("square_star", square_star()),
        ("simplicial_cone3", simplicial_cone(3)),
        ("sheared_square_sqrt5", sheared_square_sqrt5()),
        ("pentagon_sqrt5", pentagon_sqrt5()),
    ];
    for m in 3..=8 {
        out.push(("ngon", ngon(m)));
    }
    out
}

#[test]
fn local_polynomials() {
    for d in 1..=4 {
        let f = simplicial_cone(d);
        assert_eq!(local_poincare(&FanPoset::from_fan(&f), top(&f)).unwrap().poly, p(&[1]));
    }
    let f = square_cone();
    assert_eq!(fan_local_poincare(&f, top(&f)).unwrap().poly, p(&[1, 1]));
    // (1 - t²)(1 + 5t² + 5t⁴ + t⁶) = 1 + 4t² - 4t⁶ - t⁸, cut below t-degree 4.
    let f = cube_cone();
    assert_eq!(fan_local_poincare(&f, top(&f)).unwrap().poly, p(&[1, 4]));
    // (1 - t²)(1 + 3t² + 3t⁴ + t⁶) = 1 + 2t² - 2t⁶ - t⁸.
    let f = octahedron_cone();
    assert_eq!(fan_local_poincare(&f, top(&f)).unwrap().poly, p(&[1, 2]));
    assert_eq!(fan_local_poincare(&f, 0).unwrap().poly, p(&[1]));
}

#[test]
fn global_polynomials() {
    assert_eq!(global_poincare(&FanPoset::from_fan(&p1()), Mode::Absolute).unwrap(), p(&[1, 1]));
    // (t²-1)³ + 8(t²-1)² + 12(t²-1) + 6(1+t²)
    let oracle = PoincarePolynomial::t2_minus_one_pow(3)
        .add(&p(&[8]).mul(&PoincarePolynomial::t2_minus_one_pow(2)))
        .add(&p(&[12]).mul(&PoincarePolynomial::t2_minus_one_pow(1)))
        .add(&p(&[6, 6]));
    let cube = global_poincare(&FanPoset::from_fan(&cube_face_fan()), Mode::Absolute).unwrap();
    assert_eq!(cube, oracle);
    assert_eq!(cube, p(&[1, 5, 5, 1]));
    assert!(global_poincare(
        &FanPoset::from_fan(
            &build_fan(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])], vec![vec![0, 1], vec![2]]).unwrap()
        ),
        Mode::Absolute
    )
    .is_err());
}

#[test]
fn simplicial_agreement() {
    for (name, f) in corpus() {
        if !(f.is_complete() && f.is_simplicial()) {
            continue;
        }
        let fv: Vec<u64> = f.f_vector()[1..].iter().map(|&x| x as u64).collect();
        let got = global_poincare(&FanPoset::from_fan(&f), Mode::Absolute).unwrap();
        assert_eq!(got, classical_h_from_f(&fv), "{name}");
    }
    assert_eq!(global_poincare(&FanPoset::from_fan(&octahedron_face_fan()), Mode::Absolute).unwrap(), p(&[1, 3, 3, 1]));
}

#[test]
fn duality() {
    for (name, f) in corpus() {
        if !quasiconvexity_test(&f).unwrap().quasi_convex {
            continue;
        }
        let r = duality_check(&FanPoset::from_fan(&f)).unwrap();
        assert!(r.holds, "{name}: {} vs {}", r.absolute, r.relative);
    }
    let r = duality_check(&FanPoset::from_fan(&half_plane())).unwrap();
    assert_eq!(r.absolute, p(&[1, 1]));
    assert_eq!(r.relative, p(&[0, 1, 1]));
    let r = duality_check(&FanPoset::from_fan(&cube_face_fan())).unwrap();
    assert_eq!(r.relative, p(&[1, 5, 5, 1]));
}

#[test]
fn degree_bounds() {
    for (name, f) in corpus() {
        let poset = FanPoset::from_fan(&f);
        for s in 1..f.num_cones() {
            let lp = local_poincare(&poset, s).unwrap().poly;
            assert!(lp.t_degree().unwrap() <= 2 * f.cone_dim(s) - 2, "{name} cone {s}");
            assert_eq!(lp.coeff(0), 1);
            assert!(lp.is_nonnegative());
        }
        if !quasiconvexity_test(&f).unwrap().quasi_convex {
            continue;
        }
        let n = f.dim();
        let rel = global_poincare(&poset, Mode::Relative).unwrap();
        assert_eq!(rel.t_degree(), Some(2 * n), "{name}");
        assert_eq!(rel.leading_coeff(), 1, "{name}");
        let abs = global_poincare(&poset, Mode::Absolute).unwrap();
        assert_eq!(abs.coeff(0), 1);
        assert!(abs.is_nonnegative());
        if !f.is_complete() {
            assert!(abs.t_degree().unwrap() <= 2 * n - 2, "{name}");
        }
    }
}

#[test]
fn kalai_inequality() {
    for (name, f) in corpus() {
        let poset = FanPoset::from_fan(&f);
        for s in 0..f.num_cones() {
            for &t in f.faces(s) {
                let r = kalai_check(&poset, s, t).unwrap();
                assert!(r.holds, "{name}: {s} over {t}: {} vs {}", r.lhs, r.rhs);
                if t == 0 || t == s {
                    assert_eq!(r.lhs, r.rhs);
                }
            }
        }
    }
    let f = square_cone();
    let poset = FanPoset::from_fan(&f);
    let r = kalai_check(&poset, top(&f), 1).unwrap();
    assert_eq!((r.lhs, r.rhs), (p(&[1, 1]), p(&[1])));
    assert!(kalai_check(&poset, 1, top(&f)).is_err());
}

#[test]
fn series() {
    let f = simplicial_cone(3);
    let s = local_poincare_series(&FanPoset::from_fan(&f), top(&f)).unwrap();
    assert_eq!((s.numerator, s.k), (p(&[1]), 3));
    let f = square_cone();
    let s = local_poincare_series(&FanPoset::from_fan(&f), top(&f)).unwrap();
    assert_eq!((s.numerator.clone(), s.k), (p(&[1, 1]), 3));
    assert!(s.expand(10).iter().all(|&c| c >= 0));
    let s = poincare_series(&FanPoset::from_fan(&p1())).unwrap();
    assert_eq!((s.numerator.clone(), s.k), (p(&[1, 1]), 1));
    assert_eq!(s.expand(4), vec![1, 2, 2]);
}

#[test]
fn poset_invariance_and_provenance() {
    let a = square_cone();
    let b = sheared_square_sqrt5();
    let la = fan_local_poincare(&a, top(&a)).unwrap();
    let lb = fan_local_poincare(&b, top(&b)).unwrap();
    assert_eq!(la.poly, lb.poly);
    assert_eq!(la.provenance, Provenance::Unconditional);
    assert_eq!(lb.provenance, Provenance::AssumesV);
    let ray = fan_local_poincare(&b, 1).unwrap();
    assert_eq!(ray.provenance, Provenance::Unconditional);
}

/// Rational points on the unit circle, in increasing angle order.
fn circle_points(params: &[i64]) -> Vec<Vec<FieldScalar>> {
    let mut ps: Vec<(FieldScalar, FieldScalar)> = params
        .iter()
        .map(|&s| {
            let s = FieldScalar::ratio(s, 7);
            let den = &FieldScalar::one() + &(&s * &s);
            ((&FieldScalar::one() - &(&s * &s)) / &den, (&FieldScalar::from_int(2) * &s) / &den)
        })
        .collect();
    // s ↦ point is monotone in angle on (-∞, ∞), so sorting by s sorts by angle.
    ps.dedup();
    ps.into_iter().map(|(x, y)| vec![x, y]).collect()
}

fn distinct_params(m: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::btree_set(-60i64..60, m).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn polygon_cone_local_polynomial(params in (4usize..8).prop_flat_map(distinct_params)) {
        let m = params.len();
        let rays: Vec<Vec<FieldScalar>> = circle_points(&params)
            .into_iter()
            .map(|mut r| { r.push(FieldScalar::one()); r })
            .collect();
        let f = build_fan(3, rays, vec![(0..m).collect()]).unwrap();
        let poset = FanPoset::from_fan(&f);
        let lp = local_poincare(&poset, top(&f)).unwrap().poly;
        prop_assert_eq!(lp, p(&[1, m as i64 - 3]));
        for &t in f.faces(top(&f)) {
            prop_assert!(kalai_check(&poset, top(&f), t).unwrap().holds);
        }
    }

    #[test]
    fn complete_two_fans_match_classical(params in (3usize..9).prop_flat_map(distinct_params)) {
        let m = params.len();
        let rays = circle_points(&params);
        let cones: Vec<Vec<usize>> = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
        let Ok(f) = build_fan(2, rays, cones) else { return Ok(()); };
        prop_assume!(f.is_complete());
        let g = global_poincare(&FanPoset::from_fan(&f), Mode::Absolute).unwrap();
        prop_assert_eq!(g.clone(), p(&[1, m as i64 - 2, 1]));
        prop_assert_eq!(g, classical_h_from_f(&[m as u64, m as u64]));
        prop_assert!(duality_check(&FanPoset::from_fan(&f)).unwrap().holds);
    }
}

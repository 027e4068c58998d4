mod common;

use common::*;
use fanic::fan::{boundary_fan, skeleton, Fan, FanPoset, Subfan};
use fanic::fansheaf::{self, diamond_check, flabby_decomposition, is_flabby, quasiconvexity_test};
use fanic::hvector::{fan_local_poincare, global_poincare, Mode, PoincarePolynomial};
use fanic::mes::*;

fn top(f: &Fan) -> usize {
    f.maximal_cones()[0]
}

fn poly(c: &[i64]) -> PoincarePolynomial {
    PoincarePolynomial::new(c.to_vec())
}

#[test]
fn generators_of_small_cones() {
    let f = simplicial_cone(3);
    let m = construct_mes(&f).unwrap();
    assert!((0..f.num_cones()).all(|c| m.is_trivial_at(c)));

    let f = square_cone();
    let m = construct_mes(&f).unwrap();
    assert_eq!(m.generator_degrees(top(&f)), &[0, 2]);
    assert_eq!(m.generator_degrees(0), &[0]);
}

#[test]
fn generators_match_local_polynomials() {
    // Cone over an m-gon: 1 + (m-3) t². Cube cone: 1 + 4t². Octahedron cone: 1 + 2t².
    for (f, expect) in [
        (square_cone(), poly(&[1, 1])),
        (cube_cone(), poly(&[1, 4])),
        (octahedron_cone(), poly(&[1, 2])),
        (simplicial_cone(4), poly(&[1])),
    ] {
        let m = construct_mes(&f).unwrap();
        let t = top(&f);
        assert_eq!(m.local_polynomial(t), expect);
        assert_eq!(fan_local_poincare(&f, t).unwrap().poly, expect);
        for c in 0..f.num_cones() {
            assert_eq!(m.local_polynomial(c), fan_local_poincare(&f, c).unwrap().poly, "cone {c}");
        }
    }
}

#[test]
fn section_space_examples() {
    let f = square_cone();
    let m = construct_mes(&f).unwrap();
    let t = top(&f);
    let bd = Subfan::generated(&f, f.facets(t));
    // Piecewise linear functions on the boundary of the square cone: one value per ray.
    assert_eq!(section_space(&m, &bd, 2).unwrap().dim(), 4);
    // Free module count on ⟨σ⟩: S^{d/2} in 3 variables plus S^{d/2-1}.
    let sigma = Subfan::generated(&f, &[t]);
    for (d, expect) in [(0, 1), (2, 4), (4, 6 + 3), (6, 10 + 6)] {
        assert_eq!(section_space(&m, &sigma, d).unwrap().dim(), expect);
    }
    let p1 = p1();
    let m = construct_mes(&p1).unwrap();
    assert_eq!(section_space(&m, &Subfan::full(&p1), 2).unwrap().dim(), 2);
}

#[test]
fn relative_section_examples() {
    // f_σ A_σ for a simplicial 2-cone: the product of the two edge forms.
    let f = simplicial_cone(2);
    let m = construct_mes(&f).unwrap();
    let all = Subfan::full(&f);
    let bd = boundary_fan(&f).unwrap();
    assert_eq!(relative_section_space(&m, &all, &bd, 2).unwrap().dim(), 0);
    assert_eq!(relative_section_space(&m, &all, &bd, 4).unwrap().dim(), 1);
    assert_eq!(reduced_dims(&m, &all, &bd, 6).unwrap().trimmed(), vec![0, 0, 1]);
    for f in [p1xp1(), half_plane(), cube_face_fan(), square_cone()] {
        let m = construct_mes(&f).unwrap();
        let n = f.dim() as u32;
        let rel = reduced_dims(&m, &Subfan::full(&f), &boundary_fan(&f).unwrap(), 2 * n + 2).unwrap();
        assert_eq!(rel.get(2 * n), 1);
        assert_eq!(rel.get(2 * n + 2), 0);
    }
}

#[test]
fn reduced_dims_examples() {
    let f = p1();
    let m = construct_mes(&f).unwrap();
    assert_eq!(section_dims(&m, &Subfan::full(&f), &Subfan::empty(), 2).unwrap().even(), vec![1, 2]);
    assert_eq!(reduced_dims(&m, &Subfan::full(&f), &Subfan::empty(), 4).unwrap().trimmed(), vec![1, 1]);
    let f = cube_face_fan();
    let m = construct_mes(&f).unwrap();
    assert_eq!(reduced_dims(&m, &Subfan::full(&f), &Subfan::empty(), 6).unwrap().trimmed(), vec![1, 5, 5, 1]);
    let f = simplicial_cone(3);
    let m = construct_mes(&f).unwrap();
    assert_eq!(reduced_dims(&m, &Subfan::full(&f), &Subfan::empty(), 6).unwrap().trimmed(), vec![1]);
}

#[test]
fn reduced_dims_agree_with_face_poset_formula() {
    for f in [
        p1(),
        p1xp1(),
        half_plane(),
        ngon(5),
        ngon(7),
        square_face_fan(),
        octahedron_face_fan(),
        square_cone(),
        square_star(),
    ] {
        let m = construct_mes(&f).unwrap();
        let n = f.dim() as u32;
        let g = reduced_dims(&m, &Subfan::full(&f), &Subfan::empty(), 2 * n).unwrap();
        let p = global_poincare(&FanPoset::from_fan(&f), Mode::Absolute).unwrap();
        assert_eq!(g.as_polynomial(), p);
    }
}

#[test]
fn lme_holds_and_detects_faults() {
    for f in [square_cone(), cube_face_fan(), prism_sides(), octahedron_cone(), square_star()] {
        let m = construct_mes(&f).unwrap();
        let r = check_lme(&m).unwrap();
        assert!(r.all_hold(), "{:?}", r.failures());
    }
    let f = square_cone();
    let m = construct_mes(&f).unwrap();
    let t = top(&f);
    let broken = m.drop_generator(t, 1).unwrap();
    assert_eq!(check_lme(&broken).unwrap().failures(), vec![t]);
    // The structure sheaf of a simplicial fan is a minimal extension sheaf.
    let f = octahedron_face_fan();
    assert!(check_lme(&structure_sheaf(&f)).unwrap().all_hold());
}

#[test]
fn lme_fails_for_structure_sheaf_of_nonsimplicial_cone() {
    let f = square_cone();
    let r = check_lme(&structure_sheaf(&f)).unwrap();
    assert_eq!(r.failures(), vec![top(&f)]);
}

#[test]
fn sheaf_axioms_on_constructed_models() {
    for f in [square_cone(), cube_face_fan(), prism_sides(), cube_cone()] {
        let m = construct_mes(&f).unwrap();
        for d in (0..=6).step_by(2) {
            assert!(diamond_check(&f, &m, d));
            assert!(is_flabby(&f, &m, d), "degree {d}");
            assert!(flabby_decomposition(&f, &m, d).unwrap().holds());
        }
        let t = top(&f);
        assert!(m.generator_degrees(t).iter().all(|&d| d % 2 == 0 && d <= 2 * f.cone_dim(t) as u32 - 2));
    }
}

#[test]
fn vanishing_condition_readings() {
    let f = square_cone();
    let m = construct_mes(&f).unwrap();
    let r = check_v_condition(&m, top(&f)).unwrap();
    assert!(r.literal && r.halved);
    let f = cube_cone();
    let m = construct_mes(&f).unwrap();
    let r = check_v_condition(&m, top(&f)).unwrap();
    assert_eq!((r.top_degree, r.literal, r.halved), (2, true, true));
    let f = octahedron_face_fan();
    let m = construct_mes(&f).unwrap();
    for c in 1..f.num_cones() {
        assert!(check_v_condition(&m, c).unwrap().literal);
    }
    assert!(check_v_condition(&m, 0).is_err());
}

#[test]
fn freeness_probe_verdicts() {
    for f in [p1(), p1xp1(), cube_face_fan(), half_plane(), square_cone(), simplicial_cone(3)] {
        let m = construct_mes(&f).unwrap();
        let r = freeness_probe(&m, 2 * f.dim() as u32 + 4).unwrap();
        assert!(r.consistent_with_free(), "{:?}", r.verdict);
    }
    for f in [prism_sides(), opposite_quadrants()] {
        let m = construct_mes(&f).unwrap();
        let r = freeness_probe(&m, 2 * f.dim() as u32 + 4).unwrap();
        assert!(matches!(r.verdict, FreenessVerdict::NotFree { .. }), "{:?}", r);
    }
}

#[test]
fn acyclicity_verdicts() {
    let f = cube_face_fan();
    let m = construct_mes(&f).unwrap();
    assert!(acyclicity_check(&m, true, 10).unwrap().holds());
    assert!(acyclicity_check(&m, false, 10).unwrap().holds());
    for f in [half_plane(), square_cone(), p1()] {
        let m = construct_mes(&f).unwrap();
        assert!(acyclicity_check(&m, true, 8).unwrap().holds());
        assert!(acyclicity_check(&m, false, 8).unwrap().holds());
    }
    let f = prism_sides();
    let m = construct_mes(&f).unwrap();
    assert!(!acyclicity_check(&m, true, 10).unwrap().holds());
}

#[test]
fn three_way_equivalence() {
    for f in [p1(), half_plane(), opposite_quadrants(), prism_sides(), square_cone(), cube_face_fan(), ngon(4)] {
        let topo = quasiconvexity_test(&f).unwrap().quasi_convex;
        let m = construct_mes(&f).unwrap();
        let d = 2 * f.dim() as u32 + 4;
        let sheaf = acyclicity_check(&m, true, d).unwrap().holds();
        let free = freeness_probe(&m, d).unwrap().consistent_with_free();
        assert_eq!(sheaf, topo);
        assert_eq!(free, topo);
    }
}

#[test]
fn duality_dimensions() {
    let f = half_plane();
    let m = construct_mes(&f).unwrap();
    let r = duality_dims_check(&m).unwrap();
    assert_eq!(r.absolute.trimmed(), vec![1, 1]);
    assert_eq!(r.relative.trimmed(), vec![0, 1, 1]);
    assert!(r.holds);
    for f in [p1xp1(), cube_face_fan(), square_cone(), simplicial_cone(3), cube_cone()] {
        let m = construct_mes(&f).unwrap();
        assert!(duality_dims_check(&m).unwrap().holds);
    }
}

#[test]
fn hard_lefschetz() {
    for (f, name, dims) in [
        (p1(), "p1", vec![1, 1]),
        (p1xp1(), "p1xp1", vec![1, 2, 1]),
        (cube_face_fan(), "cube", vec![1, 5, 5, 1]),
        (octahedron_face_fan(), "octahedron", vec![1, 3, 3, 1]),
    ] {
        let m = construct_mes(&f).unwrap();
        let h = support_function(&f, &polar_vertices(name));
        let r = hard_lefschetz_check(&m, &h).unwrap();
        assert_eq!(r.reduced, dims);
        assert!(r.passes(), "{name}: {:?}", r.steps);
    }
}

#[test]
fn lefschetz_rejects_non_convex_function() {
    let f = p1xp1();
    let m = construct_mes(&f).unwrap();
    let mut h = support_function(&f, &polar_vertices("p1xp1"));
    let c = *h.forms.keys().next().unwrap();
    h.forms.insert(c, v(&[0, 0]));
    assert!(hard_lefschetz_check(&m, &h).is_err());
}

#[test]
fn simplicial_pairing() {
    for f in [p1(), p1xp1(), simplicial_cone(2), simplicial_cone(3), octahedron_face_fan()] {
        let r = simplicial_pd_pairing(&f).unwrap();
        assert!(r.nondegenerate(), "{:?}", r);
        assert!(r.blocks.iter().all(|b| b.matrix.rows() == b.matrix.cols()));
    }
    let r = simplicial_pd_pairing(&p1xp1()).unwrap();
    assert_eq!(r.blocks[1].matrix.rows(), 2);
    assert!(simplicial_pd_pairing(&square_cone()).is_err());
}

#[test]
fn decomposition_examples() {
    let coarse = square_cone();
    let t = top(&coarse);
    let diag = decompose_direct_image(&coarse, &square_diagonal(), 6).unwrap();
    assert_eq!(diag.nonzero(), Vec::<usize>::new());
    assert_eq!(diag.multiplicities[&0].trimmed(), vec![1]);
    let star = decompose_direct_image(&coarse, &square_star(), 6).unwrap();
    assert_eq!(star.nonzero(), vec![t]);
    let k = &star.multiplicities[&t];
    assert_eq!(k.get(2), 1);
    assert_eq!(k.get(0), 0);
    // Hilbert count: F̄ of the star subdivision is (1,2,1) = Ē_σ (1,1) + K_σ.
    assert_eq!(k.get(4), 1);
    let s = simplicial_cone(3);
    assert_eq!(decompose_direct_image(&s, &s, 6).unwrap().nonzero(), Vec::<usize>::new());
    assert!(decompose_direct_image(&square_star(), &coarse, 6).is_err());
}

#[test]
fn construction_is_unique_up_to_dimensions() {
    for f in [square_cone(), cube_face_fan(), prism_sides(), cube_cone(), square_star()] {
        let a = construct_mes(&f).unwrap();
        let b = construct_mes_seeded(&f, Some(7)).unwrap();
        let c = construct_mes_seeded(&f, Some(12345)).unwrap();
        for x in [&b, &c] {
            for s in 0..f.num_cones() {
                assert_eq!(a.generator_multiset(s), x.generator_multiset(s));
            }
            let mut subfans = vec![Subfan::full(&f), boundary_fan(&f).unwrap()];
            for k in 0..f.dim() {
                subfans.push(skeleton(&f, k));
            }
            for s in 0..f.num_cones() {
                subfans.push(Subfan::generated(&f, &[s]));
                subfans.push(Subfan::generated(&f, f.facets(s)));
            }
            for l in &subfans {
                assert_eq!(
                    section_dims(&a, l, &Subfan::empty(), 6).unwrap(),
                    section_dims(x, l, &Subfan::empty(), 6).unwrap()
                );
                assert_eq!(
                    reduced_dims(&a, l, &Subfan::empty(), 6).unwrap(),
                    reduced_dims(x, l, &Subfan::empty(), 6).unwrap()
                );
            }
            assert!(check_lme(x).unwrap().all_hold());
        }
        assert_eq!(a.to_text(), construct_mes(&f).unwrap().to_text());
        assert_ne!(a.to_text(), b.to_text());
    }
}

#[test]
fn simplicial_iff_trivial_generators() {
    for f in [
        cube_face_fan(),
        octahedron_cone(),
        cube_cone(),
        square_star(),
        prism_sides(),
        sheared_square_sqrt5(),
        pentagon_sqrt5(),
    ] {
        let m = construct_mes(&f).unwrap();
        for c in 0..f.num_cones() {
            assert_eq!(m.is_trivial_at(c), f.is_simplicial_cone(c), "cone {c}");
        }
    }
}

#[test]
fn pyramid_over_square_cone() {
    // σ = τ + ρ with τ the square cone in the hyperplane x4 = 0.
    let f =
        fan(4, &[&[1, 1, 1, 0], &[-1, 1, 1, 0], &[-1, -1, 1, 0], &[1, -1, 1, 0], &[0, 0, 0, 1]], &[&[0, 1, 2, 3, 4]]);
    let m = construct_mes(&f).unwrap();
    let sigma = top(&f);
    let tau = f.cone_by_rays(&[0, 1, 2, 3]).unwrap();
    assert_eq!(m.local_polynomial(sigma), m.local_polynomial(tau));
    assert_eq!(m.generator_degrees(sigma), &[0, 2]);
}

#[test]
fn non_rational_twin() {
    let q = sheared_square_sqrt5();
    let r = square_cone();
    let mq = construct_mes(&q).unwrap();
    let mr = construct_mes(&r).unwrap();
    let (tq, tr) = (top(&q), top(&r));
    assert_eq!(mq.generator_degrees(tq), mr.generator_degrees(tr));
    assert_eq!(mq.local_polynomial(tq), poly(&[1, 1]));
    assert_eq!(check_v_condition(&mq, tq).unwrap(), VReport { cone: tq, ..check_v_condition(&mr, tr).unwrap() });
    assert!(check_lme(&mq).unwrap().all_hold());
}

#[test]
fn sections_of_the_model_are_compatible() {
    let f = cube_face_fan();
    let m = construct_mes(&f).unwrap();
    let all = Subfan::full(&f);
    let sp = section_space(&m, &all, 4).unwrap();
    // Every basis section agrees on pairwise intersections.
    for b in &sp.basis {
        for i in 0..sp.cones.len() {
            for j in i + 1..sp.cones.len() {
                let (a, c) = (sp.cones[i], sp.cones[j]);
                let common: Vec<usize> =
                    f.cone(a).rays.iter().copied().filter(|r| f.cone(c).rays.contains(r)).collect();
                let t = f.cone_by_rays(&common).unwrap();
                let ra = fansheaf::restriction_to_face(&f, &m, a, t, 4).mul_vec(sp.component(b, i));
                let rc = fansheaf::restriction_to_face(&f, &m, c, t, 4).mul_vec(sp.component(b, j));
                assert_eq!(ra, rc);
            }
        }
    }
}

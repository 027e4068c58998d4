mod common;

use common::*;
use fanic::fan::{boundary_fan, flattened_boundary_fan, skeleton, star, transversal_fan, Fan, FanPoset, Subfan};

fn count(sub: &Subfan) -> usize {
    sub.len()
}

fn all_fans() -> Vec<(&'static str, Fan)> {
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
fn f_vectors_of_standard_fans() {
    assert_eq!(cube_face_fan().f_vector(), vec![1, 8, 12, 6]);
    assert_eq!(octahedron_face_fan().f_vector(), vec![1, 6, 12, 8]);
    assert_eq!(square_cone().f_vector(), vec![1, 4, 4, 1]);
    assert_eq!(cube_cone().f_vector(), vec![1, 8, 12, 6, 1]);
    assert_eq!(octahedron_cone().f_vector(), vec![1, 6, 12, 8, 1]);
    assert_eq!(prism_sides().f_vector(), vec![1, 6, 9, 3]);
    assert_eq!(square_star().f_vector(), vec![1, 5, 8, 4]);
    assert_eq!(pentagon_sqrt5().f_vector(), vec![1, 5, 5]);
}

#[test]
fn boundary_of_complete_fan_is_empty() {
    for m in 3..=8 {
        assert!(boundary_fan(&ngon(m)).unwrap().is_empty());
    }
    assert!(boundary_fan(&cube_face_fan()).unwrap().is_empty());
}

#[test]
fn boundary_of_affine_cone() {
    let f = simplicial_cone(2);
    let b = boundary_fan(&f).unwrap();
    assert_eq!(count(&b), 3);
    assert!(b.contains(0));
    assert!(!b.contains(f.maximal_cones()[0]));
}

#[test]
fn boundary_of_half_plane() {
    let f = half_plane();
    let b = boundary_fan(&f).unwrap();
    let rays: Vec<Vec<usize>> = b.cones().map(|c| f.cone(c).rays.clone()).collect();
    assert_eq!(rays, vec![vec![], vec![0], vec![2]]);
}

#[test]
fn skeleta() {
    let f = cube_face_fan();
    assert_eq!(count(&skeleton(&f, 0)), 1);
    assert_eq!(count(&skeleton(&f, 1)), 9);
    assert_eq!(count(&skeleton(&f, 3)), f.num_cones());
}

#[test]
fn stars() {
    let f = p1xp1();
    assert_eq!(star(&f, 0).unwrap().len(), f.num_cones());
    assert_eq!(star(&f, 1).unwrap().len(), 3);
    let top = f.maximal_cones()[0];
    assert_eq!(star(&f, top).unwrap(), vec![top]);
    assert!(star(&f, 999).is_err());
}

#[test]
fn transversal_fans() {
    let f = cube_face_fan();
    let t0 = transversal_fan(&f, 0).unwrap();
    assert_eq!(t0.fan.f_vector(), f.f_vector());
    let top = f.maximal_cones()[0];
    let tt = transversal_fan(&f, top).unwrap();
    assert_eq!(tt.fan.dim(), 0);
    assert_eq!(tt.fan.num_cones(), 1);

    let sc = square_cone();
    let tr = transversal_fan(&sc, 1).unwrap();
    assert_eq!(tr.fan.dim(), 2);
    assert_eq!(tr.fan.num_cones(), 4);
    assert!(!tr.fan.is_complete());
}

#[test]
fn transversal_poset_matches_star() {
    for (name, f) in all_fans() {
        for sigma in 0..f.num_cones() {
            let t = transversal_fan(&f, sigma).unwrap();
            let st = star(&f, sigma).unwrap();
            let mut image = t.cone_map.clone();
            image.sort_unstable();
            assert_eq!(image, st, "{name} cone {sigma}");
            for a in 0..t.fan.num_cones() {
                assert_eq!(t.fan.cone_dim(a) + f.cone_dim(sigma), f.cone_dim(t.cone_map[a]));
                for b in 0..t.fan.num_cones() {
                    assert_eq!(t.fan.is_face(a, b), f.is_face(t.cone_map[a], t.cone_map[b]), "{name}");
                }
            }
        }
    }
}

#[test]
fn flattened_boundaries() {
    let f = simplicial_cone(2);
    let fb = flattened_boundary_fan(&f, 3).unwrap();
    assert_eq!(fb.fan.f_vector(), vec![1, 2]);
    assert!(fb.fan.is_complete());
    fb.support.check_strictly_convex(&fb.fan).unwrap();

    let f = simplicial_cone(3);
    let top = f.maximal_cones()[0];
    let fb = flattened_boundary_fan(&f, top).unwrap();
    assert_eq!(fb.fan.f_vector(), vec![1, 3, 3]);
    fb.support.check_strictly_convex(&fb.fan).unwrap();

    let f = square_cone();
    let fb = flattened_boundary_fan(&f, f.maximal_cones()[0]).unwrap();
    assert_eq!(fb.fan.f_vector(), vec![1, 4, 4]);
    assert!(fb.fan.is_complete());
    fb.support.check_strictly_convex(&fb.fan).unwrap();
}

#[test]
fn flattened_poset_matches_boundary() {
    for (name, f) in all_fans() {
        for sigma in 1..f.num_cones() {
            let fb = flattened_boundary_fan(&f, sigma).unwrap();
            let proper: Vec<usize> = f.faces(sigma).iter().copied().filter(|&g| g != sigma).collect();
            let mut image = fb.face_map.clone();
            image.sort_unstable();
            assert_eq!(image, proper, "{name} cone {sigma}");
            for a in 0..fb.fan.num_cones() {
                assert_eq!(fb.fan.cone_dim(a), f.cone_dim(fb.face_map[a]));
                for b in 0..fb.fan.num_cones() {
                    assert_eq!(fb.fan.is_face(a, b), f.is_face(fb.face_map[a], fb.face_map[b]));
                }
            }
            if f.cone_dim(sigma) >= 2 {
                assert!(fb.fan.is_complete(), "{name}");
                fb.support.check_strictly_convex(&fb.fan).unwrap();
            }
        }
    }
}

#[test]
fn completeness() {
    assert!(p1().is_complete());
    assert!(cube_face_fan().is_complete());
    assert!(octahedron_face_fan().is_complete());
    assert!(pentagon_sqrt5().is_complete());
    assert!(!half_plane().is_complete());
    assert!(!prism_sides().is_complete());
    assert!(!simplicial_cone(2).is_complete());
}

#[test]
fn simpliciality() {
    assert!(simplicial_cone(2).is_simplicial());
    assert!(!square_cone().is_simplicial());
    assert!(octahedron_face_fan().is_simplicial());
    assert!(!cube_face_fan().is_simplicial());
    assert!(square_star().is_simplicial());
}

#[test]
fn components() {
    assert_eq!(p1xp1().facet_connected_components().unwrap().len(), 1);
    assert_eq!(opposite_quadrants().facet_connected_components().unwrap().len(), 2);
    assert_eq!(prism_sides().facet_connected_components().unwrap().len(), 1);
    let mut nonpure =
        fanic::fan::build_fan(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])], vec![vec![0, 1], vec![2]]).unwrap();
    assert!(nonpure.facet_connected_components().is_err());
    nonpure.flip_top_orientation();
}

#[test]
fn simplicial_cone_face_count() {
    for d in 1..=5 {
        let f = simplicial_cone(d);
        assert_eq!(f.num_cones(), 1 << d);
    }
}

#[test]
fn orientation_coefficients_are_signs() {
    for (_, f) in all_fans() {
        for s in 0..f.num_cones() {
            for &t in f.facets(s) {
                let o = f.orientation_coefficient(s, t).unwrap();
                assert!(o == 1 || o == -1);
            }
        }
        assert!(f.orientation_coefficient(0, 0).is_err());
    }
}

#[test]
fn boundary_squared_vanishes() {
    // Σ_τ or^σ_τ or^τ_ρ over the two facets τ between ρ ≺ σ of codimension 2.
    for (name, f) in all_fans() {
        for s in 0..f.num_cones() {
            for &r in f.faces(s) {
                if f.cone_dim(r) + 2 != f.cone_dim(s) {
                    continue;
                }
                let total: i32 = f
                    .facets(s)
                    .iter()
                    .filter(|&&t| f.is_face(r, t))
                    .map(|&t| f.orientation_coefficient(s, t).unwrap() * f.orientation_coefficient(t, r).unwrap())
                    .sum();
                assert_eq!(total, 0, "{name}: {s} over {r}");
            }
        }
    }
}

#[test]
fn poset_intervals_and_boundary() {
    let f = cube_face_fan();
    let p = FanPoset::from_fan(&f);
    assert_eq!(p.f_vector(), f.f_vector());
    assert!(p.boundary().is_empty());
    let top = f.maximal_cones()[0];
    let i = p.interval(0, top).unwrap();
    assert_eq!(i.f_vector(), vec![1, 4, 4, 1]);
    let ray = f.cone(top).rays[0] + 1;
    assert_eq!(p.interval(ray, top).unwrap().f_vector(), vec![1, 2, 1]);
    assert!(p.interval(top, 0).is_err());
    let half = FanPoset::from_fan(&half_plane());
    assert_eq!(half.boundary().len(), 3);
}

#[test]
fn quadratic_field_detected() {
    assert_eq!(pentagon_sqrt5().field().to_string(), "Q(sqrt 5)");
    assert_eq!(cube_face_fan().field().to_string(), "Q");
}

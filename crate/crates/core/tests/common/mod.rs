#![allow(dead_code)]

use std::collections::BTreeMap;

use fanic::exactmath::{FieldScalar, Vector};
use fanic::fan::{build_fan, Fan, PiecewiseLinear};

pub fn s(x: &str) -> FieldScalar {
    FieldScalar::parse(x).unwrap()
}

pub fn v(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| FieldScalar::from_int(x)).collect()
}

pub fn fan(n: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    build_fan(n, rays.iter().map(|r| v(r)).collect(), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
}

pub fn p1() -> Fan {
    fan(1, &[&[1], &[-1]], &[&[0], &[1]])
}

pub fn p1xp1() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

pub fn half_plane() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, 0]], &[&[0, 1], &[1, 2]])
}

pub fn opposite_quadrants() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[&[0, 1], &[2, 3]])
}

/// Complete 2-fan with `m` rays (3 <= m <= 8).
pub fn ngon(m: usize) -> Fan {
    let rays: Vec<&[i64]> = match m {
        3 => vec![&[1, 0], &[0, 1], &[-1, -1]],
        4 => vec![&[1, 0], &[1, 1], &[-1, 1], &[0, -1]],
        5 => vec![&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[0, -1]],
        6 => vec![&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]],
        7 => vec![&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[-1, -1], &[0, -1], &[1, -1]],
        8 => vec![&[1, 0], &[1, 1], &[0, 1], &[-1, 1], &[-1, 0], &[-1, -1], &[0, -1], &[1, -1]],
        _ => panic!("unsupported m"),
    };
    let cones: Vec<Vec<usize>> = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
    build_fan(2, rays.iter().map(|r| v(r)).collect(), cones).unwrap()
}

pub fn square_face_fan() -> Fan {
    fan(2, &[&[1, 1], &[-1, 1], &[-1, -1], &[1, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

fn cube_rays() -> Vec<Vector> {
    let mut rays = Vec::new();
    for a in [1, -1] {
        for b in [1, -1] {
            for c in [1, -1] {
                rays.push(v(&[a, b, c]));
            }
        }
    }
    rays
}

pub fn cube_face_fan() -> Fan {
    let rays = cube_rays();
    let mut cones = Vec::new();
    for i in 0..3 {
        for sign in [1, -1] {
            cones.push((0..8).filter(|&r| rays[r][i] == FieldScalar::from_int(sign)).collect());
        }
    }
    build_fan(3, rays, cones).unwrap()
}

pub fn octahedron_face_fan() -> Fan {
    let rays = vec![v(&[1, 0, 0]), v(&[-1, 0, 0]), v(&[0, 1, 0]), v(&[0, -1, 0]), v(&[0, 0, 1]), v(&[0, 0, -1])];
    let mut cones = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                cones.push(vec![a, b, c]);
            }
        }
    }
    build_fan(3, rays, cones).unwrap()
}

pub fn square_cone() -> Fan {
    fan(3, &[&[1, 1, 1], &[-1, 1, 1], &[-1, -1, 1], &[1, -1, 1]], &[&[0, 1, 2, 3]])
}

pub fn cube_cone() -> Fan {
    let rays: Vec<Vector> = cube_rays()
        .into_iter()
        .map(|mut r| {
            r.push(FieldScalar::one());
            r
        })
        .collect();
    build_fan(4, rays, vec![(0..8).collect()]).unwrap()
}

pub fn octahedron_cone() -> Fan {
    let mut rays = Vec::new();
    for i in 0..3 {
        for sign in [1, -1] {
            let mut r = v(&[0, 0, 0, 1]);
            r[i] = FieldScalar::from_int(sign);
            rays.push(r);
        }
    }
    build_fan(4, rays, vec![(0..6).collect()]).unwrap()
}

pub fn prism_sides() -> Fan {
    fan(
        3,
        &[&[2, 0, 1], &[2, 0, -1], &[-1, 1, 1], &[-1, 1, -1], &[-1, -1, 1], &[-1, -1, -1]],
        &[&[0, 1, 2, 3], &[2, 3, 4, 5], &[4, 5, 0, 1]],
    )
}

pub fn square_diagonal() -> Fan {
    fan(3, &[&[1, 1, 1], &[-1, 1, 1], &[-1, -1, 1], &[1, -1, 1]], &[&[0, 1, 2], &[0, 2, 3]])
}

pub fn square_star() -> Fan {
    fan(
        3,
        &[&[1, 1, 1], &[-1, 1, 1], &[-1, -1, 1], &[1, -1, 1], &[0, 0, 1]],
        &[&[0, 1, 4], &[1, 2, 4], &[2, 3, 4], &[3, 0, 4]],
    )
}

pub fn simplicial_cone(n: usize) -> Fan {
    let rays: Vec<Vector> =
        (0..n).map(|i| (0..n).map(|j| FieldScalar::from_int(i64::from(i == j))).collect()).collect();
    build_fan(n, rays, vec![(0..n).collect()]).unwrap()
}

/// A Q(√5) cone over a quadrilateral, combinatorially a square cone.
pub fn sheared_square_sqrt5() -> Fan {
    let phi = s("1/2+1/2*sqrt(5)");
    let rays = vec![v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), vec![FieldScalar::zero(), -phi, FieldScalar::one()]];
    build_fan(3, rays, vec![vec![0, 1, 2, 3]]).unwrap()
}

/// A complete 2-fan with five rays and Q(√5) coordinates.
pub fn pentagon_sqrt5() -> Fan {
    let phi = s("1/2+1/2*sqrt(5)");
    let rays = vec![
        v(&[1, 0]),
        vec![FieldScalar::one(), phi.clone()],
        vec![-phi, FieldScalar::one()],
        v(&[-1, -1]),
        v(&[0, -1]),
    ];
    build_fan(2, rays, (0..5).map(|i| vec![i, (i + 1) % 5]).collect()).unwrap()
}

/// Support function of a polytope given by its vertex set, expressed per maximal cone:
/// on each cone the linear piece is the vertex maximizing the pairing with the cone's rays.
pub fn support_function(f: &Fan, vertices: &[Vector]) -> PiecewiseLinear {
    let mut forms = BTreeMap::new();
    for c in f.maximal_cones() {
        let rays = &f.cone(c).rays;
        let best = vertices
            .iter()
            .max_by(|a, b| {
                let sa =
                    rays.iter().fold(FieldScalar::zero(), |acc, &r| &acc + &fanic::exactmath::dot(a, &f.rays()[r]));
                let sb =
                    rays.iter().fold(FieldScalar::zero(), |acc, &r| &acc + &fanic::exactmath::dot(b, &f.rays()[r]));
                sa.cmp(&sb)
            })
            .unwrap();
        forms.insert(c, best.clone());
    }
    PiecewiseLinear::new(forms)
}

/// Vertices of the polytope whose normal fan is the given standard fan.
pub fn polar_vertices(name: &str) -> Vec<Vector> {
    match name {
        "p1" => vec![v(&[1]), v(&[-1])],
        // |x| + |y|
        "p1xp1" => vec![v(&[1, 1]), v(&[-1, 1]), v(&[-1, -1]), v(&[1, -1])],
        // max |x_i|
        "cube" => vec![v(&[1, 0, 0]), v(&[-1, 0, 0]), v(&[0, 1, 0]), v(&[0, -1, 0]), v(&[0, 0, 1]), v(&[0, 0, -1])],
        // |x| + |y| + |z|
        "octahedron" => {
            let mut out = Vec::new();
            for a in [1, -1] {
                for b in [1, -1] {
                    for c in [1, -1] {
                        out.push(v(&[a, b, c]));
                    }
                }
            }
            out
        }
        _ => panic!("unknown polytope"),
    }
}

//! Geometry of a single cone given by ray generators.
//!
//! Facets are found by brute-force double description: every `(d-1)`-subset
//! of independent rays spans a candidate hyperplane, which is kept when all
//! rays lie weakly on one side. That costs `C(#rays, d-1)` small eliminations
//! and is fine at desk scale (`n <= 5`, a few dozen rays).

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactmath::{dot, rank_of_rows, ExactMatrix, FieldScalar, Vector};

/// A cone of a fan.
#[derive(Clone, Debug)]
pub struct Cone {
    pub id: usize,
    /// Sorted global ray indices.
    pub rays: Vec<usize>,
    pub dim: usize,
    /// Basis of the linear span `V_σ` in ambient coordinates. It also fixes the
    /// orientation and the coordinates used for polynomials on `V_σ`.
    pub basis: Vec<Vector>,
    /// Rays forming `basis`, or `None` when the standard basis is used.
    pub basis_rays: Option<Vec<usize>>,
    /// Facets as sorted ray sets with inward normals in `basis` coordinates.
    pub facet_normals: Vec<(Vec<usize>, Vector)>,
    coord_rows: Vec<usize>,
    coord_inv: ExactMatrix,
}

impl Cone {
    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    /// Coordinates of an ambient vector lying in `V_σ` with respect to `basis`.
    pub fn coords(&self, v: &[FieldScalar]) -> Vector {
        let picked: Vector = self.coord_rows.iter().map(|&i| v[i].clone()).collect();
        self.coord_inv.mul_vec(&picked)
    }

    /// Ambient linear form agreeing with the form `w` (in `basis` coordinates) on `V_σ`.
    pub fn lift_form(&self, w: &[FieldScalar], n: usize) -> Vector {
        let mut out = vec![FieldScalar::zero(); n];
        let row = self.coord_inv.transpose().mul_vec(w);
        for (k, &i) in self.coord_rows.iter().enumerate() {
            out[i] = row[k].clone();
        }
        out
    }

    /// Matrix `n × dim` whose columns are the basis vectors; row `k` is the
    /// ambient coordinate form `x_k` restricted to `V_σ`.
    pub fn basis_matrix(&self, n: usize) -> ExactMatrix {
        ExactMatrix::from_columns(&self.basis, n)
    }

    pub(crate) fn with_id(mut self, id: usize) -> Cone {
        self.id = id;
        self
    }
}

/// Greedy lexicographically-first independent subset of `vectors`.
pub(crate) fn greedy_independent(vectors: &[Vector]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis = crate::exactmath::EchelonBasis::new(vectors.first().map_or(0, |v| v.len()));
    for (i, v) in vectors.iter().enumerate() {
        if basis.insert(v.clone()) {
            chosen.push(i);
        }
    }
    chosen
}

fn standard_basis(n: usize) -> Vec<Vector> {
    (0..n).map(|i| (0..n).map(|j| if i == j { FieldScalar::one() } else { FieldScalar::zero() }).collect()).collect()
}

/// Analyses the cone generated by the given rays of `all_rays`.
pub(crate) fn analyse(ray_ids: &[usize], all_rays: &[Vector], n: usize) -> Result<Cone> {
    let gens: Vec<Vector> = ray_ids.iter().map(|&r| all_rays[r].clone()).collect();
    let indep = greedy_independent(&gens);
    let dim = indep.len();
    let (basis, basis_rays) = if dim == n {
        (standard_basis(n), None)
    } else {
        (indep.iter().map(|&i| gens[i].clone()).collect::<Vec<_>>(), Some(indep.iter().map(|&i| ray_ids[i]).collect()))
    };
    let bm = ExactMatrix::from_columns(&basis, n);
    let coord_rows = greedy_independent(&bm.to_rows());
    debug_assert_eq!(coord_rows.len(), dim);
    let sub = ExactMatrix::from_rows(coord_rows.iter().map(|&i| bm.row(i).to_vec()).collect(), dim);
    let coord_inv = sub.inverse().expect("independent rows");
    let mut cone = Cone {
        id: usize::MAX,
        rays: ray_ids.to_vec(),
        dim,
        basis,
        basis_rays,
        facet_normals: Vec::new(),
        coord_rows,
        coord_inv,
    };
    if dim == 0 {
        return Ok(cone);
    }
    let z: Vec<Vector> = gens.iter().map(|g| cone.coords(g)).collect();
    let mut facets: Vec<(Vec<usize>, Vector)> = Vec::new();
    for subset in (0..z.len()).combinations(dim - 1) {
        let rows: Vec<Vector> = subset.iter().map(|&i| z[i].clone()).collect();
        let m = ExactMatrix::from_rows(rows, dim);
        let (rank, ker) = m.rank_and_kernel();
        if rank != dim - 1 {
            continue;
        }
        let mut w = ker.into_iter().next().unwrap();
        let vals: Vec<i32> = z.iter().map(|zr| dot(&w, zr).signum()).collect();
        if vals.iter().any(|&s| s > 0) && vals.iter().any(|&s| s < 0) {
            continue;
        }
        if vals.iter().any(|&s| s < 0) {
            w = w.iter().map(|x| -x).collect();
        }
        let zero: Vec<usize> = (0..z.len()).filter(|&i| vals[i] == 0).map(|i| ray_ids[i]).collect();
        if facets.iter().any(|(f, _)| *f == zero) {
            continue;
        }
        facets.push((zero, normalize_form(w)));
    }
    facets.sort_by(|a, b| a.0.cmp(&b.0));
    let normals: Vec<Vector> = facets.iter().map(|(_, w)| w.clone()).collect();
    if rank_of_rows(normals, dim) != dim {
        return Err(Error::NotStrictlyConvex { rays: ray_ids.to_vec() });
    }
    for &r in ray_ids {
        let containing: Vec<Vector> = facets.iter().filter(|(f, _)| f.contains(&r)).map(|(_, w)| w.clone()).collect();
        if rank_of_rows(containing, dim) != dim - 1 {
            return Err(Error::NotExtreme { ray: r, rays: ray_ids.to_vec() });
        }
    }
    cone.facet_normals = facets;
    Ok(cone)
}

/// Scales a form so that its first nonzero entry is ±1, keeping its sign.
fn normalize_form(w: Vector) -> Vector {
    match w.iter().find(|x| !x.is_zero()) {
        Some(p) => {
            let s = p.abs().inv();
            w.iter().map(|x| x * &s).collect()
        }
        None => w,
    }
}

/// Extreme rays of the pointed cone `{x : E x = 0, G x >= 0}` in `F^n`.
pub(crate) fn extreme_rays(equalities: &[Vector], inequalities: &[Vector], n: usize) -> Vec<Vector> {
    let (_, space) = ExactMatrix::from_rows(equalities.to_vec(), n).rank_and_kernel();
    let e = space.len();
    if e == 0 {
        return Vec::new();
    }
    let k = ExactMatrix::from_columns(&space, n);
    let g: Vec<Vector> = inequalities.iter().map(|row| k.transpose().mul_vec(row)).collect();
    let feasible = |y: &Vector| g.iter().all(|row| dot(row, y).signum() >= 0);
    let mut found: Vec<Vector> = Vec::new();
    let push = |y: Vector, found: &mut Vec<Vector>| {
        let x = k.mul_vec(&y);
        if !found.iter().any(|f| rank_of_rows(vec![f.clone(), x.clone()], n) == 1 && same_direction(f, &x)) {
            found.push(x);
        }
    };
    for subset in (0..g.len()).combinations(e - 1) {
        let rows: Vec<Vector> = subset.iter().map(|&i| g[i].clone()).collect();
        let (rank, ker) = ExactMatrix::from_rows(rows, e).rank_and_kernel();
        if rank != e - 1 {
            continue;
        }
        let y = ker.into_iter().next().unwrap();
        let neg: Vector = y.iter().map(|x| -x).collect();
        if feasible(&y) {
            push(y, &mut found);
        }
        if feasible(&neg) {
            push(neg, &mut found);
        }
    }
    found
}

fn same_direction(a: &[FieldScalar], b: &[FieldScalar]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.signum() == y.signum())
}

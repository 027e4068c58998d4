//! Polyhedral fans over an exact field: validation, face lattice and
//! orientation coefficients, plus the derived fans (boundary, skeleta,
//! stars, transversal and flattened boundary fans).

mod cone;
mod derived;
mod poset;

use std::collections::{BTreeSet, HashMap, VecDeque};

pub use cone::Cone;
pub use derived::{
    boundary_fan, flattened_boundary_fan, skeleton, star, transversal_fan, FlattenedBoundary, PiecewiseLinear, Subfan,
    TransversalFan,
};
pub use poset::FanPoset;

use crate::error::{Error, Result};
use crate::exactmath::{rank_of_rows, EchelonBasis, ExactMatrix, FieldScalar, Vector};

pub type ConeId = usize;

/// The coordinate field of a fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Quadratic(u64),
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Quadratic(d) => write!(f, "Q(sqrt {d})"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Field::Rational);
        }
        let inner = t
            .strip_prefix("Q(sqrt")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("unknown field {s:?}")))?;
        let d: u64 = inner.trim().parse().map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
        FieldScalar::sqrt(d)?;
        Ok(Field::Quadratic(d))
    }
}

/// A fan: rays, cones closed under faces, and the face lattice with
/// orientation coefficients on covering relations.
///
/// Cone ids are sorted by `(dim, ray list)`, so the zero cone has id 0 and
/// rays come next in ray-index order.
#[derive(Clone, Debug)]
pub struct Fan {
    n: usize,
    field: Field,
    rays: Vec<Vector>,
    generators: Vec<Vec<usize>>,
    cones: Vec<Cone>,
    index: HashMap<Vec<usize>, ConeId>,
    facets: Vec<Vec<ConeId>>,
    cofacets: Vec<Vec<ConeId>>,
    faces: Vec<Vec<ConeId>>,
    orientation: HashMap<(ConeId, ConeId), i32>,
}

fn detect_field(rays: &[Vector]) -> Result<Field> {
    let mut field = Field::Rational;
    for x in rays.iter().flatten() {
        if let Some(d) = x.radicand() {
            match field {
                Field::Rational => field = Field::Quadratic(d),
                Field::Quadratic(e) if e != d => {
                    return Err(Error::Parse(format!("coordinates mix sqrt({e}) and sqrt({d})")));
                }
                _ => {}
            }
        }
    }
    Ok(field)
}

/// Validates the data and builds the fan generated by `cones` (ray-index sets).
pub fn build_fan(n: usize, rays: Vec<Vector>, cones: Vec<Vec<usize>>) -> Result<Fan> {
    for (i, r) in rays.iter().enumerate() {
        if r.len() != n {
            return Err(Error::Dimension(format!("ray {i} has {} coordinates, expected {n}", r.len())));
        }
        if r.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroRay(i));
        }
    }
    let field = detect_field(&rays)?;
    for i in 0..rays.len() {
        for j in i + 1..rays.len() {
            if rank_of_rows(vec![rays[i].clone(), rays[j].clone()], n) == 1
                && rays[i].iter().zip(&rays[j]).all(|(a, b)| a.signum() == b.signum())
            {
                return Err(Error::DuplicateRay(i, j));
            }
        }
    }
    let mut generators: Vec<Vec<usize>> = Vec::new();
    for c in cones {
        let mut c = c;
        c.sort_unstable();
        c.dedup();
        if let Some(&bad) = c.iter().find(|&&r| r >= rays.len()) {
            return Err(Error::Parse(format!("cone refers to missing ray {bad}")));
        }
        if !generators.contains(&c) {
            generators.push(c);
        }
    }

    // Face closure.
    let mut analysed: HashMap<Vec<usize>, Cone> = HashMap::new();
    let mut queue: VecDeque<Vec<usize>> = generators.iter().cloned().collect();
    queue.push_back(Vec::new());
    while let Some(s) = queue.pop_front() {
        if analysed.contains_key(&s) {
            continue;
        }
        let c = cone::analyse(&s, &rays, n)?;
        for (f, _) in &c.facet_normals {
            if !analysed.contains_key(f) {
                queue.push_back(f.clone());
            }
        }
        analysed.insert(s, c);
    }

    let face_sets = |s: &Vec<usize>| -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        let mut stack = vec![s.clone()];
        while let Some(t) = stack.pop() {
            if out.insert(t.clone()) {
                for (f, _) in &analysed[&t].facet_normals {
                    stack.push(f.clone());
                }
            }
        }
        out
    };

    // Fan axioms on generating cones.
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            let (a, b) = (&generators[i], &generators[j]);
            let common: Vec<usize> = a.iter().filter(|r| b.contains(r)).copied().collect();
            let err = || Error::NotAFace { first: a.clone(), second: b.clone() };
            if !face_sets(a).contains(&common) || !face_sets(b).contains(&common) {
                return Err(err());
            }
            if !intersection_is_spanned(&analysed[a], &analysed[b], &common, &rays, n) {
                return Err(err());
            }
        }
    }

    let mut sets: Vec<Vec<usize>> = analysed.keys().cloned().collect();
    sets.sort_by(|x, y| (analysed[x].dim, x).cmp(&(analysed[y].dim, y)));
    let index: HashMap<Vec<usize>, ConeId> = sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let cones: Vec<Cone> = sets.iter().enumerate().map(|(i, s)| analysed[s].clone().with_id(i)).collect();
    let facets: Vec<Vec<ConeId>> = cones
        .iter()
        .map(|c| {
            let mut v: Vec<ConeId> = c.facet_normals.iter().map(|(f, _)| index[f]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let mut cofacets = vec![Vec::new(); cones.len()];
    for (s, fs) in facets.iter().enumerate() {
        for &f in fs {
            cofacets[f].push(s);
        }
    }
    let faces: Vec<Vec<ConeId>> = sets
        .iter()
        .map(|s| {
            let mut v: Vec<ConeId> = face_sets(s).iter().map(|f| index[f]).collect();
            v.sort_unstable();
            v
        })
        .collect();

    let mut fan =
        Fan { n, field, rays, generators, cones, index, facets, cofacets, faces, orientation: HashMap::new() };
    let mut orientation = HashMap::new();
    for s in 0..fan.cones.len() {
        for &t in &fan.facets[s] {
            orientation.insert((s, t), fan.compute_orientation(s, t));
        }
    }
    fan.orientation = orientation;
    Ok(fan)
}

/// Checks that every extreme ray of `a ∩ b` lies in the span of the common rays.
fn intersection_is_spanned(a: &Cone, b: &Cone, common: &[usize], rays: &[Vector], n: usize) -> bool {
    let mut eqs: Vec<Vector> = Vec::new();
    let mut ineqs: Vec<Vector> = Vec::new();
    for c in [a, b] {
        let bt = ExactMatrix::from_rows(c.basis.clone(), n);
        eqs.extend(bt.rank_and_kernel().1);
        for (_, w) in &c.facet_normals {
            ineqs.push(c.lift_form(w, n));
        }
    }
    let span: Vec<Vector> = common.iter().map(|&r| rays[r].clone()).collect();
    let base = rank_of_rows(span.clone(), n);
    cone::extreme_rays(&eqs, &ineqs, n).into_iter().all(|x| {
        let mut m = span.clone();
        m.push(x);
        rank_of_rows(m, n) == base
    })
}

impl Fan {
    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    /// The generating cones as given to `build_fan` (sorted, deduplicated).
    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: ConeId) -> &Cone {
        &self.cones[id]
    }

    pub fn check_id(&self, id: ConeId) -> Result<()> {
        if id < self.cones.len() {
            Ok(())
        } else {
            Err(Error::UnknownCone(id))
        }
    }

    pub fn zero_cone(&self) -> ConeId {
        0
    }

    pub fn cone_dim(&self, id: ConeId) -> usize {
        self.cones[id].dim
    }

    pub fn cone_by_rays(&self, rays: &[usize]) -> Option<ConeId> {
        let mut r = rays.to_vec();
        r.sort_unstable();
        self.index.get(&r).copied()
    }

    pub fn facets(&self, id: ConeId) -> &[ConeId] {
        &self.facets[id]
    }

    pub fn cofacets(&self, id: ConeId) -> &[ConeId] {
        &self.cofacets[id]
    }

    /// All faces of a cone including itself, in id order.
    pub fn faces(&self, id: ConeId) -> &[ConeId] {
        &self.faces[id]
    }

    pub fn is_face(&self, tau: ConeId, sigma: ConeId) -> bool {
        self.faces[sigma].binary_search(&tau).is_ok()
    }

    pub fn cones_of_dim(&self, k: usize) -> Vec<ConeId> {
        (0..self.cones.len()).filter(|&c| self.cones[c].dim == k).collect()
    }

    pub fn maximal_cones(&self) -> Vec<ConeId> {
        (0..self.cones.len()).filter(|&c| self.cofacets[c].is_empty()).collect()
    }

    /// `true` iff every maximal cone is `n`-dimensional.
    pub fn is_pure(&self) -> bool {
        self.maximal_cones().iter().all(|&c| self.cones[c].dim == self.n)
    }

    pub fn require_pure(&self) -> Result<()> {
        if self.is_pure() {
            Ok(())
        } else {
            Err(Error::NotPure(self.n))
        }
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.is_simplicial())
    }

    pub fn is_simplicial_cone(&self, id: ConeId) -> bool {
        self.cones[id].is_simplicial()
    }

    /// The orientation coefficient `or^σ_τ` for a facet `τ` of `σ`.
    pub fn orientation_coefficient(&self, sigma: ConeId, tau: ConeId) -> Result<i32> {
        self.check_id(sigma)?;
        self.check_id(tau)?;
        self.orientation.get(&(sigma, tau)).copied().ok_or(Error::NotFacet(tau, sigma))
    }

    /// Reverses the orientation of every `n`-dimensional cone.
    pub fn flip_top_orientation(&mut self) {
        for ((s, _), v) in self.orientation.iter_mut() {
            if self.cones[*s].dim == self.n {
                *v = -*v;
            }
        }
    }

    /// Basis of `V_τ` in the coordinates of `V_σ` (columns), for `τ ⪯ σ`.
    pub fn inclusion_matrix(&self, tau: ConeId, sigma: ConeId) -> ExactMatrix {
        let s = &self.cones[sigma];
        let cols: Vec<Vector> = self.cones[tau].basis.iter().map(|b| s.coords(b)).collect();
        ExactMatrix::from_columns(&cols, s.dim)
    }

    /// Coordinates of ray `r` in the basis of cone `sigma`.
    pub fn ray_coords(&self, r: usize, sigma: ConeId) -> Vector {
        self.cones[sigma].coords(&self.rays[r])
    }

    fn compute_orientation(&self, sigma: ConeId, tau: ConeId) -> i32 {
        let s = &self.cones[sigma];
        let t = &self.cones[tau];
        let u = *s.rays.iter().find(|r| !t.rays.contains(r)).expect("facet misses a ray");
        let mut cols: Vec<Vector> = t.basis.iter().map(|b| s.coords(b)).collect();
        cols.push(s.coords(&self.rays[u]));
        let det = ExactMatrix::from_columns(&cols, s.dim).determinant();
        det.signum()
    }

    /// `|Δ| = V`, decided by the manifold count: purely `n`-dimensional, every
    /// wall in exactly two `n`-cones, and facet-connected when `n >= 2`.
    /// (A pseudomanifold without boundary inside the sphere is the whole
    /// sphere by invariance of domain.)
    pub fn is_complete(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        if !self.is_pure() || self.cones_of_dim(self.n).is_empty() {
            return false;
        }
        let walls_ok = self.cones_of_dim(self.n - 1).iter().all(|&w| self.cofacets[w].len() == 2);
        if !walls_ok {
            return false;
        }
        self.n < 2 || self.components().len() == 1
    }

    fn components(&self) -> Vec<Vec<ConeId>> {
        let top = self.cones_of_dim(self.n);
        let pos: HashMap<ConeId, usize> = top.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut comp = vec![usize::MAX; top.len()];
        let mut out = Vec::new();
        for start in 0..top.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let k = out.len();
            let mut members = Vec::new();
            let mut stack = vec![start];
            comp[start] = k;
            while let Some(i) = stack.pop() {
                members.push(top[i]);
                for &w in &self.facets[top[i]] {
                    for &o in &self.cofacets[w] {
                        if let Some(&j) = pos.get(&o) {
                            if comp[j] == usize::MAX {
                                comp[j] = k;
                                stack.push(j);
                            }
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Partition of the `n`-cones into facet-connected components.
    pub fn facet_connected_components(&self) -> Result<Vec<Vec<ConeId>>> {
        self.require_pure()?;
        Ok(self.components())
    }

    /// Cones of the subfan generated by the given cones.
    pub fn closure(&self, generators: &[ConeId]) -> BTreeSet<ConeId> {
        generators.iter().flat_map(|&g| self.faces[g].iter().copied()).collect()
    }

    /// Total number of cones per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.n).map(|k| self.cones_of_dim(k).len()).collect()
    }

    /// Rank check helper: whether the given ambient vectors are independent.
    pub fn independent(vectors: &[Vector], n: usize) -> bool {
        let mut b = EchelonBasis::new(n);
        vectors.iter().all(|v| b.insert(v.clone()))
    }
}

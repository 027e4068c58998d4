//! Fans derived from a given fan: subfans, stars, transversal fans and the
//! flattened boundary fan of a cone.

use std::collections::{BTreeMap, BTreeSet};

use super::{build_fan, ConeId, Fan};
use crate::error::{Error, Result};
use crate::exactmath::{dot, EchelonBasis, ExactMatrix, FieldScalar, Vector};

/// A subfan, stored as a face-closed set of cone ids of its parent fan.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Subfan {
    cones: BTreeSet<ConeId>,
}

impl Subfan {
    pub fn empty() -> Self {
        Subfan::default()
    }

    /// The subfan generated by `generators`.
    pub fn generated(fan: &Fan, generators: &[ConeId]) -> Self {
        Subfan { cones: fan.closure(generators) }
    }

    /// The whole fan as a subfan of itself.
    pub fn full(fan: &Fan) -> Self {
        Subfan { cones: (0..fan.num_cones()).collect() }
    }

    pub fn contains(&self, c: ConeId) -> bool {
        self.cones.contains(&c)
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn cones(&self) -> impl Iterator<Item = ConeId> + '_ {
        self.cones.iter().copied()
    }

    /// Cones of the subfan not contained in a larger cone of the subfan.
    pub fn maximal(&self, fan: &Fan) -> Vec<ConeId> {
        self.cones.iter().copied().filter(|&c| !fan.cofacets(c).iter().any(|d| self.cones.contains(d))).collect()
    }

    /// Rebuilds the subfan as a standalone fan on the rays it uses.
    pub fn to_fan(&self, fan: &Fan) -> Result<Fan> {
        let used: BTreeSet<usize> = self.cones.iter().flat_map(|&c| fan.cone(c).rays.iter().copied()).collect();
        let pos: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let rays = used.iter().map(|&r| fan.rays()[r].clone()).collect();
        let cones = self.maximal(fan).iter().map(|&c| fan.cone(c).rays.iter().map(|r| pos[r]).collect()).collect();
        build_fan(fan.dim(), rays, cones)
    }
}

/// Subfan generated by the `(n-1)`-cones lying in exactly one `n`-cone.
pub fn boundary_fan(fan: &Fan) -> Result<Subfan> {
    fan.require_pure()?;
    if fan.dim() == 0 {
        return Ok(Subfan::empty());
    }
    let walls: Vec<ConeId> = fan
        .cones_of_dim(fan.dim() - 1)
        .into_iter()
        .filter(|&w| fan.cofacets(w).iter().filter(|&&c| fan.cone_dim(c) == fan.dim()).count() == 1)
        .collect();
    Ok(Subfan::generated(fan, &walls))
}

/// All cones of dimension at most `k`.
pub fn skeleton(fan: &Fan, k: usize) -> Subfan {
    Subfan { cones: (0..fan.num_cones()).filter(|&c| fan.cone_dim(c) <= k).collect() }
}

/// `{γ : σ ⪯ γ}`.
pub fn star(fan: &Fan, sigma: ConeId) -> Result<Vec<ConeId>> {
    fan.check_id(sigma)?;
    Ok((0..fan.num_cones()).filter(|&g| fan.is_face(sigma, g)).collect())
}

/// Transversal fan `Δ_σ` together with the map from its cones to the star of σ.
#[derive(Clone, Debug)]
pub struct TransversalFan {
    pub fan: Fan,
    /// `cone_map[c]` is the cone of the parent fan whose image is cone `c`.
    pub cone_map: Vec<ConeId>,
}

/// Completes `basis` to a basis of `F^n` with standard vectors and returns the
/// rows of the inverse that give coordinates along the added vectors.
fn quotient_projection(basis: &[Vector], n: usize) -> ExactMatrix {
    let mut eb = EchelonBasis::new(n);
    for b in basis {
        eb.insert(b.clone());
    }
    let mut cols: Vec<Vector> = basis.to_vec();
    for i in 0..n {
        let e: Vector = (0..n).map(|j| if i == j { FieldScalar::one() } else { FieldScalar::zero() }).collect();
        if eb.insert(e.clone()) {
            cols.push(e);
        }
    }
    let inv = ExactMatrix::from_columns(&cols, n).inverse().expect("completed basis");
    let k = basis.len();
    ExactMatrix::from_rows((k..n).map(|i| inv.row(i).to_vec()).collect(), n)
}

/// The images of the cones `γ ⪰ σ` under `V → V/V_σ`, with coordinates taken
/// along a standard-vector complement of `V_σ`.
pub fn transversal_fan(fan: &Fan, sigma: ConeId) -> Result<TransversalFan> {
    fan.check_id(sigma)?;
    let s = fan.cone(sigma);
    let n = fan.dim();
    let proj = quotient_projection(&s.basis, n);
    let covers: Vec<ConeId> = fan.cofacets(sigma).to_vec();
    let rays: Vec<Vector> = covers
        .iter()
        .map(|&g| {
            let r = *fan.cone(g).rays.iter().find(|r| !s.rays.contains(r)).unwrap();
            proj.mul_vec(&fan.rays()[r])
        })
        .collect();
    let st = star(fan, sigma)?;
    let tops: Vec<ConeId> = st.iter().copied().filter(|&g| fan.cofacets(g).is_empty()).collect();
    let cones: Vec<Vec<usize>> =
        tops.iter().map(|&g| (0..covers.len()).filter(|&i| fan.is_face(covers[i], g)).collect()).collect();
    let tf = build_fan(n - s.dim, rays, cones)?;
    let cone_map = tf
        .cones()
        .iter()
        .map(|c| {
            st.iter()
                .copied()
                .filter(|&g| c.rays.iter().all(|&i| fan.is_face(covers[i], g)))
                .min_by_key(|&g| fan.cone_dim(g))
                .unwrap()
        })
        .collect();
    Ok(TransversalFan { fan: tf, cone_map })
}

/// A piecewise linear function: one ambient linear form per maximal cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear {
    pub forms: BTreeMap<ConeId, Vector>,
}

impl PiecewiseLinear {
    pub fn new(forms: BTreeMap<ConeId, Vector>) -> Self {
        PiecewiseLinear { forms }
    }

    /// Value of the piece on `sigma` at the ambient point `x`.
    pub fn eval(&self, sigma: ConeId, x: &[FieldScalar]) -> Option<FieldScalar> {
        self.forms.get(&sigma).map(|f| dot(f, x))
    }

    /// Verifies strict convexity on a complete fan through wall crossings:
    /// adjacent pieces agree on the wall and the piece of one side is strictly
    /// smaller on the rays of the other side.
    pub fn check_strictly_convex(&self, fan: &Fan) -> Result<()> {
        if !fan.is_complete() {
            return Err(Error::NotComplete);
        }
        let n = fan.dim();
        for c in fan.cones_of_dim(n) {
            if !self.forms.contains_key(&c) {
                return Err(Error::NotStrictlyConvexFunction(format!("no linear piece on cone {c}")));
            }
        }
        if n == 0 {
            return Ok(());
        }
        for w in fan.cones_of_dim(n - 1) {
            let sides = fan.cofacets(w);
            let (a, b) = (sides[0], sides[1]);
            for &r in &fan.cone(w).rays {
                let x = &fan.rays()[r];
                if self.eval(a, x) != self.eval(b, x) {
                    return Err(Error::NotStrictlyConvexFunction(format!("pieces on {a} and {b} differ on ray {r}")));
                }
            }
            for (p, q) in [(a, b), (b, a)] {
                let r = *fan.cone(q).rays.iter().find(|r| !fan.cone(w).rays.contains(r)).unwrap();
                let x = &fan.rays()[r];
                if self.eval(p, x).unwrap() >= self.eval(q, x).unwrap() {
                    return Err(Error::NotStrictlyConvexFunction(format!(
                        "piece on {p} is not strictly below the piece on {q} at ray {r}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Flattened boundary fan `Λ_σ = π(∂σ)` in `V_σ / L` with its support function.
#[derive(Clone, Debug)]
pub struct FlattenedBoundary {
    pub fan: Fan,
    /// `T ∘ (π|_{∂σ})^{-1}`, strictly convex on `fan`.
    pub support: PiecewiseLinear,
    /// `face_map[c]` is the proper face of σ whose image is cone `c`.
    pub face_map: Vec<ConeId>,
}

/// Projects `∂σ` along the line `L` spanned by the sum of the ray generators
/// of σ as given (they need not be normalized; any interior line yields the
/// same combinatorics). Coordinates are those of `V_σ` completed by standard
/// vectors.
pub fn flattened_boundary_fan(fan: &Fan, sigma: ConeId) -> Result<FlattenedBoundary> {
    fan.check_id(sigma)?;
    let s = fan.cone(sigma);
    let d = s.dim;
    if d == 0 {
        return Err(Error::Degenerate("the zero cone has no boundary to flatten".into()));
    }
    if d == 1 {
        let f = build_fan(0, Vec::new(), Vec::new())?;
        let support = PiecewiseLinear::new(BTreeMap::from([(0, Vec::new())]));
        return Ok(FlattenedBoundary { fan: f, support, face_map: vec![fan.zero_cone()] });
    }
    let z: Vec<Vector> = s.rays.iter().map(|&r| fan.ray_coords(r, sigma)).collect();
    let mut u = vec![FieldScalar::zero(); d];
    for zr in &z {
        for k in 0..d {
            u[k] = &u[k] + &zr[k];
        }
    }
    let proj = quotient_projection(std::slice::from_ref(&u), d);
    let j = u.iter().position(|x| !x.is_zero()).unwrap();
    let t = |v: &Vector| &v[j] / &u[j];
    let rays: Vec<Vector> = z.iter().map(|zr| proj.mul_vec(zr)).collect();
    let local = |g: ConeId| -> Vec<usize> {
        fan.cone(g).rays.iter().map(|r| s.rays.iter().position(|x| x == r).unwrap()).collect()
    };
    let cones: Vec<Vec<usize>> = fan.facets(sigma).iter().map(|&g| local(g)).collect();
    let lf = build_fan(d - 1, rays.clone(), cones)?;
    let mut forms = BTreeMap::new();
    for c in lf.cones_of_dim(d - 1) {
        let rs = &lf.cone(c).rays;
        let m = ExactMatrix::from_rows(rs.iter().map(|&i| rays[i].clone()).collect(), d - 1);
        let rhs: Vector = rs.iter().map(|&i| t(&z[i])).collect();
        let g = m.solve_linear(&rhs)?.ok_or_else(|| Error::Inconsistent("support function on a facet".into()))?;
        forms.insert(c, g);
    }
    let face_map = lf
        .cones()
        .iter()
        .map(|c| {
            let global: Vec<usize> = c.rays.iter().map(|&i| s.rays[i]).collect();
            fan.cone_by_rays(&global).unwrap()
        })
        .collect();
    Ok(FlattenedBoundary { fan: lf, support: PiecewiseLinear::new(forms), face_map })
}

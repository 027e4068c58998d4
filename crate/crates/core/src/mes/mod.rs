//! The minimal extension sheaf `E•` as finite data.
//!
//! Each `E•(⟨σ⟩)` is a free module over the polynomial ring `A_σ = S(V_σ*)`
//! (polynomials in the coordinates of the cone's basis) on generators
//! `g_{σ,1}, …` of even cohomological degree. A restriction along a facet
//! `τ ≺₁ σ` is stored as the image of every generator in `E•(⟨τ⟩)`. A stalk
//! in degree `d` has the basis `m · g_i` with `m` running over monomials of
//! degree `(d - d_i)/2`, grouped by generator.
//!
//! The construction processes cones by increasing dimension: the generators
//! of σ lift a basis of `Ē•(∂σ) = E•(∂σ) / m E•(∂σ)`, which is the
//! recursive construction of a minimal extension.

mod checks;
mod decompose;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmath::{monomial_basis, poly_dim, rank_of_rows, EchelonBasis, ExactMatrix, FieldScalar, Poly, Vector};
use crate::fan::{ConeId, Fan, Subfan};
use crate::fansheaf::{self, CellularSheaf, SectionSpace};
use crate::hvector::PoincarePolynomial;

pub use checks::{
    acyclicity_check, check_lme, check_v_condition, duality_dims_check, freeness_probe, hard_lefschetz_check,
    simplicial_pd_pairing, AcyclicityReport, DualityDims, FreenessReport, FreenessVerdict, LefschetzReport,
    LefschetzStep, LmeReport, PairingBlock, PairingReport, VReport,
};
pub use decompose::{decompose_direct_image, refinement_map, Decomposition};

/// Graded dimensions indexed by cohomological degree `0..=max_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedDims {
    pub dims: Vec<usize>,
    pub max_degree: u32,
}

impl GradedDims {
    pub fn zero(max_degree: u32) -> Self {
        GradedDims { dims: vec![0; max_degree as usize + 1], max_degree }
    }

    pub fn get(&self, d: u32) -> usize {
        self.dims.get(d as usize).copied().unwrap_or(0)
    }

    /// Dimensions in degrees `0, 2, 4, …` up to the bound.
    pub fn even(&self) -> Vec<usize> {
        self.dims.iter().step_by(2).copied().collect()
    }

    /// `even()` with trailing zeros removed.
    pub fn trimmed(&self) -> Vec<usize> {
        let mut v = self.even();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn as_polynomial(&self) -> PoincarePolynomial {
        PoincarePolynomial::new(self.even().iter().map(|&d| d as i64).collect())
    }
}

/// A free module over `A_σ` on every cone with restriction data along
/// covering relations: either a minimal extension sheaf or, with a single
/// degree-0 generator everywhere, the sheaf of piecewise polynomials.
pub struct MESModel {
    fan: Fan,
    gens: Vec<Vec<u32>>,
    /// `restr[(σ, τ)][i]` is `g_{σ,i}|_τ` in the stalk of τ of degree `d_i`.
    restr: HashMap<(ConeId, ConeId), Vec<Vector>>,
    /// Section representatives chosen for the generators of each cone, as
    /// coordinate vectors over the facets of the cone.
    log: Vec<Vec<Vector>>,
    seed: Option<u64>,
    max_degree: u32,
    cache: Mutex<HashMap<(ConeId, ConeId, u32), ExactMatrix>>,
}

impl Clone for MESModel {
    fn clone(&self) -> Self {
        MESModel {
            fan: self.fan.clone(),
            gens: self.gens.clone(),
            restr: self.restr.clone(),
            log: self.log.clone(),
            seed: self.seed,
            max_degree: self.max_degree,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl std::fmt::Debug for MESModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MESModel").field("gens", &self.gens).field("seed", &self.seed).finish_non_exhaustive()
    }
}

/// Default bound for global computations: `2n + 4`.
pub fn default_max_degree(fan: &Fan) -> u32 {
    2 * fan.dim() as u32 + 4
}

/// Minimal extension sheaf with the deterministic choice of representatives.
pub fn construct_mes(fan: &Fan) -> Result<MESModel> {
    construct_mes_seeded(fan, None)
}

/// Minimal extension sheaf; `seed` replaces the first-fit choice of section
/// representatives by random combinations.
pub fn construct_mes_seeded(fan: &Fan, seed: Option<u64>) -> Result<MESModel> {
    let n = fan.num_cones();
    let mut model = MESModel {
        fan: fan.clone(),
        gens: vec![Vec::new(); n],
        restr: HashMap::new(),
        log: vec![Vec::new(); n],
        seed,
        max_degree: default_max_degree(fan),
        cache: Mutex::new(HashMap::new()),
    };
    model.gens[fan.zero_cone()] = vec![0];
    let mut order: Vec<ConeId> = (0..n).filter(|&c| fan.cone_dim(c) > 0).collect();
    order.sort_by_key(|&c| (fan.cone_dim(c), c));
    for sigma in order {
        model.extend_to(sigma)?;
    }
    Ok(model)
}

/// The structure sheaf of piecewise polynomials: `A_σ` on every cone.
pub fn structure_sheaf(fan: &Fan) -> MESModel {
    let n = fan.num_cones();
    let mut restr = HashMap::new();
    for s in 0..n {
        for &t in fan.facets(s) {
            restr.insert((s, t), vec![vec![FieldScalar::one()]]);
        }
    }
    MESModel {
        fan: fan.clone(),
        gens: vec![vec![0]; n],
        restr,
        log: vec![Vec::new(); n],
        seed: None,
        max_degree: default_max_degree(fan),
        cache: Mutex::new(HashMap::new()),
    }
}

impl MESModel {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Bound on degrees accepted by the section-space operations.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn with_max_degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    /// Degrees of the generators of `E•(⟨σ⟩)`, ascending.
    pub fn generator_degrees(&self, sigma: ConeId) -> &[u32] {
        &self.gens[sigma]
    }

    /// `(degree, count)` pairs of the generators of σ.
    pub fn generator_multiset(&self, sigma: ConeId) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.gens[sigma] {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    /// `Σ dim Ē^{2q}_σ t^{2q}`: the generator count per degree.
    pub fn local_polynomial(&self, sigma: ConeId) -> PoincarePolynomial {
        let top = self.gens[sigma].iter().max().copied().unwrap_or(0) as usize / 2;
        let mut c = vec![0i64; top + 1];
        for &d in &self.gens[sigma] {
            c[d as usize / 2] += 1;
        }
        PoincarePolynomial::new(c)
    }

    /// A single degree-0 generator, i.e. `E•(⟨σ⟩) ≅ A_σ`.
    pub fn is_trivial_at(&self, sigma: ConeId) -> bool {
        self.gens[sigma] == [0]
    }

    /// Images of the generators of σ in the stalk of the facet τ.
    pub fn restriction_vectors(&self, sigma: ConeId, tau: ConeId) -> Option<&[Vector]> {
        self.restr.get(&(sigma, tau)).map(|v| v.as_slice())
    }

    /// The section representatives chosen when σ was added.
    pub fn representatives(&self, sigma: ConeId) -> &[Vector] {
        &self.log[sigma]
    }

    /// Copy of the model with generator `index` of σ removed, together with
    /// its coordinates in every restriction into σ. Used for fault injection.
    pub fn drop_generator(&self, sigma: ConeId, index: usize) -> Result<MESModel> {
        let gens = &self.gens[sigma];
        if index >= gens.len() {
            return Err(Error::Inconsistent(format!("cone {sigma} has no generator {index}")));
        }
        let mut out = self.clone();
        out.gens[sigma].remove(index);
        if index < out.log[sigma].len() {
            out.log[sigma].remove(index);
        }
        for &t in self.fan.facets(sigma) {
            if let Some(v) = out.restr.get_mut(&(sigma, t)) {
                v.remove(index);
            }
        }
        let removed = gens[index];
        for &g in self.fan.cofacets(sigma) {
            let images = self.restr[&(g, sigma)].clone();
            let new: Vec<Vector> = images
                .iter()
                .zip(&self.gens[g])
                .map(|(img, &dg)| {
                    if dg < removed {
                        return img.clone();
                    }
                    let layout = self.stalk_layout(sigma, dg);
                    let mut v = Vec::new();
                    for (i, (start, len)) in layout.iter().enumerate() {
                        if i != index {
                            v.extend_from_slice(&img[*start..start + len]);
                        }
                    }
                    v
                })
                .collect();
            out.restr.insert((g, sigma), new);
        }
        Ok(out)
    }

    /// `(offset, length)` of each generator block in the stalk of σ in degree `d`.
    pub(crate) fn stalk_layout(&self, sigma: ConeId, d: u32) -> Vec<(usize, usize)> {
        let k = self.fan.cone_dim(sigma);
        let mut off = 0;
        self.gens[sigma]
            .iter()
            .map(|&di| {
                let len = if d >= di && (d - di).is_multiple_of(2) { poly_dim(k, (d - di) / 2) } else { 0 };
                let r = (off, len);
                off += len;
                r
            })
            .collect()
    }

    /// Matrix of multiplication by the linear form `form` (in the coordinates
    /// of σ's basis) from the stalk of degree `d` to degree `d + 2`.
    pub fn multiplication_matrix(&self, sigma: ConeId, d: u32, form: &[FieldScalar]) -> ExactMatrix {
        let k = self.fan.cone_dim(sigma);
        let src = self.stalk_layout(sigma, d);
        let dst = self.stalk_layout(sigma, d + 2);
        let mut m = ExactMatrix::zeros(self.stalk_dim(sigma, d + 2), self.stalk_dim(sigma, d));
        for (i, &di) in self.gens[sigma].iter().enumerate() {
            if src[i].1 == 0 {
                continue;
            }
            let q = (d - di) / 2;
            let from = monomial_basis(k, q);
            let to = monomial_basis(k, q + 1);
            for (a, mono) in from.monomials().iter().enumerate() {
                let mut e = mono.clone();
                for (v, c) in form.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    e[v] += 1;
                    let b = to.index_of(&e).unwrap();
                    let (r, col) = (dst[i].0 + b, src[i].0 + a);
                    let cur = m.get(r, col) + c;
                    m.set(r, col, cur);
                    e[v] -= 1;
                }
            }
        }
        m
    }

    /// The ambient coordinate form `x_l` restricted to `V_σ`, in σ's coordinates.
    pub fn ambient_form(&self, sigma: ConeId, l: usize) -> Vector {
        self.fan.cone(sigma).basis.iter().map(|b| b[l].clone()).collect()
    }

    /// An ambient linear form restricted to `V_σ`, in σ's coordinates.
    pub fn restrict_form(&self, sigma: ConeId, form: &[FieldScalar]) -> Vector {
        self.fan.cone(sigma).basis.iter().map(|b| crate::exactmath::dot(b, form)).collect()
    }

    fn compute_restriction(&self, sigma: ConeId, tau: ConeId, d: u32) -> ExactMatrix {
        let ks = self.fan.cone_dim(sigma);
        let kt = self.fan.cone_dim(tau);
        let src = self.stalk_layout(sigma, d);
        let dst = self.stalk_layout(tau, d);
        let mut m = ExactMatrix::zeros(self.stalk_dim(tau, d), self.stalk_dim(sigma, d));
        if m.rows() == 0 || m.cols() == 0 {
            return m;
        }
        let inc = self.fan.inclusion_matrix(tau, sigma);
        let images = &self.restr[&(sigma, tau)];
        for (i, &di) in self.gens[sigma].iter().enumerate() {
            if src[i].1 == 0 {
                continue;
            }
            let q = (d - di) / 2;
            let img_layout = self.stalk_layout(tau, di);
            // g_i|_τ = Σ_j p_ij g_{τ,j}.
            let parts: Vec<Option<Poly>> = self.gens[tau]
                .iter()
                .enumerate()
                .map(|(j, &dj)| {
                    let (o, len) = img_layout[j];
                    if len == 0 {
                        return None;
                    }
                    let p = Poly::from_coeffs(kt, (di - dj) / 2, images[i][o..o + len].to_vec());
                    (!p.is_zero()).then_some(p)
                })
                .collect();
            let space = monomial_basis(ks, q);
            for a in 0..space.dim() {
                let mut coeffs = vec![FieldScalar::zero(); space.dim()];
                coeffs[a] = FieldScalar::one();
                let restricted = Poly::from_coeffs(ks, q, coeffs).substitute(&inc);
                for (j, p) in parts.iter().enumerate() {
                    let Some(p) = p else { continue };
                    let prod = restricted.mul(p);
                    for (b, c) in prod.coeffs().iter().enumerate() {
                        if !c.is_zero() {
                            m.set(dst[j].0 + b, src[i].0 + a, c.clone());
                        }
                    }
                }
            }
        }
        m
    }

    /// Adds the generators of σ, assuming all proper faces are done.
    fn extend_to(&mut self, sigma: ConeId) -> Result<()> {
        let k = self.fan.cone_dim(sigma);
        let facets = self.fan.facets(sigma).to_vec();
        let boundary = Subfan::generated(&self.fan, &facets);
        let mut rng =
            self.seed.map(|s| ChaCha8Rng::seed_from_u64(s ^ (sigma as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let forms: Vec<Vec<Vector>> = (0..k)
            .map(|l| facets.iter().map(|&t| self.fan.inclusion_matrix(t, sigma).row(l).to_vec()).collect())
            .collect();
        let mut prev: Option<SectionSpace> = None;
        let mut new_gens: Vec<(u32, Vector)> = Vec::new();
        for d in (0..=2 * k as u32 - 2).step_by(2) {
            let space = fansheaf::section_space(&self.fan, self, &boundary, &Subfan::empty(), d);
            if space.cones != facets {
                return Err(Error::Inconsistent(format!("maximal cones of the boundary of {sigma}")));
            }
            let mut eb = EchelonBasis::new(space.width());
            if let Some(p) = &prev {
                for f in &forms {
                    for v in products(self, p, &space, f) {
                        eb.insert(v);
                    }
                }
            }
            let target = space.dim() - eb.dim();
            let mut chosen = Vec::new();
            if let Some(r) = rng.as_mut() {
                let mut attempts = 0;
                while chosen.len() < target && attempts < 8 * (target + 1) {
                    attempts += 1;
                    let mut v = vec![FieldScalar::zero(); space.width()];
                    for b in &space.basis {
                        let c = FieldScalar::from_int(r.gen_range(-3..=3));
                        if !c.is_zero() {
                            for (x, y) in v.iter_mut().zip(b) {
                                *x = &*x + &(y * &c);
                            }
                        }
                    }
                    if eb.insert(v.clone()) {
                        chosen.push(v);
                    }
                }
            }
            for b in &space.basis {
                if chosen.len() >= target {
                    break;
                }
                if eb.insert(b.clone()) {
                    chosen.push(b.clone());
                }
            }
            if chosen.len() != target {
                return Err(Error::Inconsistent(format!("could not lift Ē^{d} of the boundary of {sigma}")));
            }
            new_gens.extend(chosen.into_iter().map(|v| (d, v)));
            prev = Some(space);
        }
        // Offsets of the facet components in each degree.
        for &t in &facets {
            self.restr.insert((sigma, t), Vec::new());
        }
        for (d, v) in &new_gens {
            let mut off = 0;
            for &t in &facets {
                let len = self.stalk_dim(t, *d);
                self.restr.get_mut(&(sigma, t)).unwrap().push(v[off..off + len].to_vec());
                off += len;
            }
        }
        self.gens[sigma] = new_gens.iter().map(|(d, _)| *d).collect();
        self.log[sigma] = new_gens.into_iter().map(|(_, v)| v).collect();
        Ok(())
    }

    /// Text serialization: generator degrees and restriction images per cone.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ =
            writeln!(s, "mes cones={} seed={}", self.gens.len(), self.seed.map_or("none".into(), |x| x.to_string()));
        for c in 0..self.gens.len() {
            let degs: Vec<String> = self.gens[c].iter().map(|d| d.to_string()).collect();
            let _ = writeln!(s, "cone {c} rays {:?} gens [{}]", self.fan.cone(c).rays, degs.join(","));
            for &t in self.fan.facets(c) {
                for (i, img) in self.restr[&(c, t)].iter().enumerate() {
                    let xs: Vec<String> = img.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(s, "  restrict {c}->{t} g{i} [{}]", xs.join(" "));
                }
            }
        }
        s
    }
}

/// `f · s` for every basis section `s` of `prev`, where `form[i]` is the
/// linear form used on the maximal cone at position `i`.
pub(crate) fn products(model: &MESModel, prev: &SectionSpace, next: &SectionSpace, form: &[Vector]) -> Vec<Vector> {
    let mats: Vec<ExactMatrix> =
        prev.cones.iter().zip(form).map(|(&c, f)| model.multiplication_matrix(c, prev.degree, f)).collect();
    prev.basis
        .iter()
        .map(|s| {
            let mut out = Vec::with_capacity(next.width());
            for (i, m) in mats.iter().enumerate() {
                out.extend(m.mul_vec(prev.component(s, i)));
            }
            out
        })
        .collect()
}

/// Spanning set of `m · E^d(Λ, Λ₀)` as vectors in the coordinates of `next`.
pub(crate) fn m_span(model: &MESModel, prev: &SectionSpace, next: &SectionSpace) -> Vec<Vector> {
    let n = model.fan.dim();
    (0..n)
        .flat_map(|l| {
            let form: Vec<Vector> = prev.cones.iter().map(|&c| model.ambient_form(c, l)).collect();
            products(model, prev, next, &form)
        })
        .collect()
}

impl CellularSheaf for MESModel {
    fn stalk_dim(&self, sigma: ConeId, degree: u32) -> usize {
        self.stalk_layout(sigma, degree).iter().map(|(_, l)| l).sum()
    }

    fn restriction(&self, sigma: ConeId, tau: ConeId, degree: u32) -> ExactMatrix {
        let key = (sigma, tau, degree);
        if let Some(m) = self.cache.lock().unwrap().get(&key) {
            return m.clone();
        }
        let m = self.compute_restriction(sigma, tau, degree);
        self.cache.lock().unwrap().insert(key, m.clone());
        m
    }
}

fn check_degree(model: &MESModel, d: u32) -> Result<()> {
    if d > model.max_degree {
        return Err(Error::DegreeBound(d, model.max_degree));
    }
    Ok(())
}

/// `E^d(Λ)`.
pub fn section_space(model: &MESModel, lambda: &Subfan, d: u32) -> Result<SectionSpace> {
    relative_section_space(model, lambda, &Subfan::empty(), d)
}

/// `E^d(Λ, Λ₀)`: sections on Λ vanishing on `Λ₀`.
pub fn relative_section_space(model: &MESModel, lambda: &Subfan, lambda0: &Subfan, d: u32) -> Result<SectionSpace> {
    check_degree(model, d)?;
    if lambda0.cones().any(|c| !lambda.contains(c)) {
        return Err(Error::NotRefinement("the vanishing subfan is not contained in Λ".into()));
    }
    Ok(fansheaf::section_space(&model.fan, model, lambda, lambda0, d))
}

/// Section spaces together with representatives of `Ē` in each degree.
pub(crate) struct Residues {
    pub spaces: Vec<SectionSpace>,
    /// Rank of `m E^d` per degree.
    pub m_rank: Vec<usize>,
    /// Row-reduced basis of `m E^d` per degree.
    pub m_basis: Vec<Vec<Vector>>,
    /// Representatives of a basis of `Ē^d` per degree.
    pub reps: Vec<Vec<Vector>>,
}

/// Computes `E^d(Λ, Λ₀)` and `Ē^d` for even `d ≤ max_degree` (index `d / 2`).
pub(crate) fn residues(model: &MESModel, lambda: &Subfan, lambda0: &Subfan, max_degree: u32) -> Result<Residues> {
    let mut out = Residues { spaces: Vec::new(), m_rank: Vec::new(), m_basis: Vec::new(), reps: Vec::new() };
    for d in (0..=max_degree).step_by(2) {
        let space = relative_section_space(model, lambda, lambda0, d)?;
        let mut eb = EchelonBasis::new(space.width());
        if let Some(prev) = out.spaces.last() {
            for v in m_span(model, prev, &space) {
                eb.insert(v);
            }
        }
        let m_rank = eb.dim();
        let m_basis: Vec<Vector> = eb.vectors().cloned().collect();
        let reps: Vec<Vector> = space.basis.iter().filter(|b| eb.insert((*b).clone())).cloned().collect();
        out.m_rank.push(m_rank);
        out.m_basis.push(m_basis);
        out.reps.push(reps);
        out.spaces.push(space);
    }
    Ok(out)
}

/// `dim Ē^d(Λ, Λ₀) = dim E^d − dim(A² · E^{d−2})` for `d ≤ max_degree`.
pub fn reduced_dims(model: &MESModel, lambda: &Subfan, lambda0: &Subfan, max_degree: u32) -> Result<GradedDims> {
    let r = residues(model, lambda, lambda0, max_degree)?;
    let mut g = GradedDims::zero(max_degree);
    for (i, reps) in r.reps.iter().enumerate() {
        g.dims[2 * i] = reps.len();
    }
    Ok(g)
}

/// `dim E^d(Λ, Λ₀)` for `d ≤ max_degree`.
pub fn section_dims(model: &MESModel, lambda: &Subfan, lambda0: &Subfan, max_degree: u32) -> Result<GradedDims> {
    let mut g = GradedDims::zero(max_degree);
    for d in (0..=max_degree).step_by(2) {
        g.dims[d as usize] = relative_section_space(model, lambda, lambda0, d)?.dim();
    }
    Ok(g)
}

/// Rank of a set of row vectors of the given width.
pub(crate) fn rank(rows: Vec<Vector>, width: usize) -> usize {
    rank_of_rows(rows, width)
}

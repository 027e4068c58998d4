//! Verifications on a constructed model: local minimality, the vanishing
//! condition, freeness, acyclicity, duality and Hard Lefschetz.

use crate::error::{Error, Result};
use crate::exactmath::{ExactMatrix, FieldScalar, Poly, Vector};
use crate::fan::{boundary_fan, ConeId, FanPoset, PiecewiseLinear, Subfan};
use crate::fansheaf::{self, cochain_complex, RelativeTo};
use crate::hvector::{global_poincare, Mode, PoincareSeries};

use super::{
    products, rank, reduced_dims, relative_section_space, residues, section_dims, structure_sheaf, GradedDims, MESModel,
};

/// Per-cone verdicts of the local minimality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LmeReport {
    pub cones: Vec<(ConeId, bool)>,
}

impl LmeReport {
    pub fn all_hold(&self) -> bool {
        self.cones.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<ConeId> {
        self.cones.iter().filter(|(_, ok)| !ok).map(|(c, _)| *c).collect()
    }
}

/// For every σ ≠ o checks that `Ē_σ → Ē_{∂σ}` is bijective in each degree
/// `d ≤ 2 dim σ`, one step past the generator bound.
pub fn check_lme(model: &MESModel) -> Result<LmeReport> {
    let fan = model.fan();
    let mut cones = Vec::new();
    for sigma in 0..fan.num_cones() {
        let k = fan.cone_dim(sigma);
        if k == 0 {
            continue;
        }
        let boundary = Subfan::generated(fan, fan.facets(sigma));
        let limit = 2 * k as u32;
        let probe = model.clone().with_max_degree(limit.max(model.max_degree()));
        let r = residues(&probe, &boundary, &Subfan::empty(), limit)?;
        let mut ok = true;
        for d in (0..=limit).step_by(2) {
            let i = d as usize / 2;
            let space = &r.spaces[i];
            let images: Vec<Vector> = model
                .generator_degrees(sigma)
                .iter()
                .enumerate()
                .filter(|(_, &g)| g == d)
                .map(|(gi, _)| {
                    let mut v = Vec::with_capacity(space.width());
                    for &t in &space.cones {
                        v.extend(model.restriction_vectors(sigma, t).map(|x| x[gi].clone()).unwrap_or_default());
                    }
                    v
                })
                .collect();
            if images.iter().any(|v| v.len() != space.width()) {
                ok = false;
                break;
            }
            let count = images.len();
            let mut rows = r.m_basis[i].clone();
            rows.extend(images);
            let image_rank = rank(rows, space.width()) - r.m_rank[i];
            if image_rank != count || count != r.reps[i].len() {
                ok = false;
                break;
            }
        }
        cones.push((sigma, ok));
    }
    Ok(LmeReport { cones })
}

/// Both readings of the vanishing condition for one cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VReport {
    pub cone: ConeId,
    pub dim: usize,
    pub top_degree: u32,
    /// `Ē^q_σ = 0` for cohomological `q >= dim σ`.
    pub literal: bool,
    /// The weaker reading comparing `q/2` with `dim σ`.
    pub halved: bool,
}

pub fn check_v_condition(model: &MESModel, sigma: ConeId) -> Result<VReport> {
    let fan = model.fan();
    fan.check_id(sigma)?;
    let dim = fan.cone_dim(sigma);
    if dim == 0 {
        return Err(Error::Degenerate("the vanishing condition concerns nonzero cones".into()));
    }
    let top_degree = model.generator_degrees(sigma).iter().copied().max().unwrap_or(0);
    Ok(VReport {
        cone: sigma,
        dim,
        top_degree,
        literal: (top_degree as usize) < dim,
        halved: (top_degree as usize) / 2 < dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreenessVerdict {
    /// Hilbert function matches a free module up to the bound.
    ConsistentWithFree { up_to: u32 },
    /// `dim E^degree` differs from every free prediction: a certificate.
    NotFree { degree: u32, observed: usize, expected: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    /// `dim E^d_Δ`.
    pub dims: GradedDims,
    /// `dim Ē^d_Δ`.
    pub reduced: GradedDims,
    /// Expansion of `P_Δ / (1 - t²)^n` with `P_Δ` from the face poset.
    pub predicted: Vec<i64>,
    /// Expansion of `Σ dim Ē^{2q} t^{2q} / (1 - t²)^n`.
    pub predicted_from_reduced: Vec<i64>,
    pub verdict: FreenessVerdict,
}

impl FreenessReport {
    pub fn consistent_with_free(&self) -> bool {
        matches!(self.verdict, FreenessVerdict::ConsistentWithFree { .. })
    }
}

/// Compares `dim E^d_Δ` with the Hilbert function a free module would have.
///
/// A free module with residue dims `Ē` has Hilbert series `Ē(t)/(1-t²)^n`,
/// and for a free `E_Δ` the combinatorial `P_Δ` equals `Ē(t)`. Any mismatch
/// with either expansion therefore certifies that `E_Δ` is not free.
pub fn freeness_probe(model: &MESModel, max_degree: u32) -> Result<FreenessReport> {
    let fan = model.fan();
    fan.require_pure()?;
    let n = fan.dim();
    let probe = model.clone().with_max_degree(max_degree.max(model.max_degree()));
    let all = Subfan::full(fan);
    let dims = section_dims(&probe, &all, &Subfan::empty(), max_degree)?;
    let reduced = reduced_dims(&probe, &all, &Subfan::empty(), max_degree)?;
    let p = global_poincare(&FanPoset::from_fan(fan), Mode::Absolute)?;
    let predicted = PoincareSeries { numerator: p, k: n }.expand(max_degree);
    let predicted_from_reduced = PoincareSeries { numerator: reduced.as_polynomial(), k: n }.expand(max_degree);
    let mut verdict = FreenessVerdict::ConsistentWithFree { up_to: max_degree };
    for (q, obs) in dims.even().into_iter().enumerate() {
        for expected in [predicted[q], predicted_from_reduced[q]] {
            if obs as i64 != expected {
                verdict = FreenessVerdict::NotFree { degree: 2 * q as u32, observed: obs, expected };
                break;
            }
        }
        if !matches!(verdict, FreenessVerdict::ConsistentWithFree { .. }) {
            break;
        }
    }
    Ok(FreenessReport { dims, reduced, predicted, predicted_from_reduced, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub relative: bool,
    /// `(sheaf degree, cohomology dims of the complex, verdict)`.
    pub degrees: Vec<(u32, Vec<usize>, bool)>,
}

impl AcyclicityReport {
    pub fn holds(&self) -> bool {
        self.degrees.iter().all(|(_, _, ok)| *ok)
    }

    pub fn failing_degrees(&self) -> Vec<u32> {
        self.degrees.iter().filter(|(_, _, ok)| !ok).map(|(d, _, _)| *d).collect()
    }
}

/// Relative mode: the augmented complex of `(Δ, ∂Δ)` with coefficients in
/// `E•` is exact. Absolute mode: `C•(Δ; E•)` is exact in positive cochain
/// degrees and `H⁰` has the dimension of `E_{(Δ,∂Δ)}`.
pub fn acyclicity_check(model: &MESModel, relative: bool, max_degree: u32) -> Result<AcyclicityReport> {
    let fan = model.fan();
    fan.require_pure()?;
    let boundary = boundary_fan(fan)?;
    let all = Subfan::full(fan);
    let mut degrees = Vec::new();
    for d in (0..=max_degree).step_by(2) {
        let (h, ok) = if relative {
            let c = cochain_complex(fan, model, RelativeTo::Boundary, true, d)?;
            let h = c.cohomology_dims();
            let ok = h.iter().all(|&x| x == 0);
            (h, ok)
        } else {
            let c = cochain_complex(fan, model, RelativeTo::Nothing, false, d)?;
            let h = c.cohomology_dims();
            let target = fansheaf::section_space(fan, model, &all, &boundary, d).dim();
            let ok = h[0] == target && h[1..].iter().all(|&x| x == 0);
            (h, ok)
        };
        degrees.push((d, h, ok));
    }
    Ok(AcyclicityReport { relative, degrees })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityDims {
    pub absolute: GradedDims,
    pub relative: GradedDims,
    pub holds: bool,
}

/// `dim Ē^q_Δ = dim Ē^{2n-q}_{(Δ,∂Δ)}` for `q ≤ 2n`.
pub fn duality_dims_check(model: &MESModel) -> Result<DualityDims> {
    let fan = model.fan();
    let top = 2 * fan.dim() as u32;
    let boundary = boundary_fan(fan)?;
    let all = Subfan::full(fan);
    let absolute = reduced_dims(model, &all, &Subfan::empty(), top)?;
    let relative = reduced_dims(model, &all, &boundary, top)?;
    let holds = (0..=top).all(|q| absolute.get(q) == relative.get(top - q));
    Ok(DualityDims { absolute, relative, holds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzStep {
    /// Source degree `2q`.
    pub degree: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub needs_injective: bool,
    pub needs_surjective: bool,
}

impl LefschetzStep {
    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }

    pub fn passes(&self) -> bool {
        (!self.needs_injective || self.injective()) && (!self.needs_surjective || self.surjective())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzReport {
    pub reduced: Vec<usize>,
    pub steps: Vec<LefschetzStep>,
}

impl LefschetzReport {
    pub fn passes(&self) -> bool {
        self.steps.iter().all(LefschetzStep::passes)
    }
}

/// Ranks of `μ̄^{2q}: Ē^{2q}_Δ → Ē^{2q+2}_Δ`, multiplication by a strictly
/// convex piecewise linear function, for `0 ≤ q < n`.
pub fn hard_lefschetz_check(model: &MESModel, f: &PiecewiseLinear) -> Result<LefschetzReport> {
    let fan = model.fan();
    f.check_strictly_convex(fan)?;
    let n = fan.dim();
    let r = residues(model, &Subfan::full(fan), &Subfan::empty(), 2 * n as u32)?;
    let mut steps = Vec::new();
    for q in 0..n {
        let (src, dst) = (&r.spaces[q], &r.spaces[q + 1]);
        let form: Vec<Vector> = src.cones.iter().map(|&c| model.restrict_form(c, &f.forms[&c])).collect();
        let reps = super::SectionSpace { basis: r.reps[q].clone(), ..src.clone() };
        let mut rows = r.m_basis[q + 1].clone();
        rows.extend(products(model, &reps, dst, &form));
        let rank_mu = rank(rows, dst.width()) - r.m_rank[q + 1];
        steps.push(LefschetzStep {
            degree: 2 * q as u32,
            source_dim: r.reps[q].len(),
            target_dim: r.reps[q + 1].len(),
            rank: rank_mu,
            needs_injective: 2 * q < n,
            needs_surjective: 2 * q + 1 >= n,
        });
    }
    Ok(LefschetzReport { reduced: r.reps.iter().map(|v| v.len()).collect(), steps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingBlock {
    /// Degree `2q` of the absolute factor.
    pub degree: u32,
    pub matrix: ExactMatrix,
    pub invertible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingReport {
    pub blocks: Vec<PairingBlock>,
}

impl PairingReport {
    pub fn nondegenerate(&self) -> bool {
        self.blocks.iter().all(|b| b.invertible)
    }
}

/// The pairing `Ē^{2q}_Δ × Ē^{2n-2q}_{(Δ,∂Δ)} → R` of a simplicial
/// quasi-convex fan: multiply piecewise polynomials, then evaluate with the
/// functional vanishing on `m E^{2n}_{(Δ,∂Δ)}` and sending the chosen top
/// representative to 1.
pub fn simplicial_pd_pairing(fan: &crate::fan::Fan) -> Result<PairingReport> {
    if !fan.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let qc = fansheaf::quasiconvexity_test(fan)?;
    if !qc.quasi_convex {
        return Err(Error::NotQuasiConvex(qc.failures.iter().map(|f| f.cone).collect()));
    }
    let a = structure_sheaf(fan);
    let n = fan.dim();
    let top = 2 * n as u32;
    let all = Subfan::full(fan);
    let boundary = boundary_fan(fan)?;
    let abs = residues(&a, &all, &Subfan::empty(), top)?;
    let rel = residues(&a, &all, &boundary, top)?;
    if rel.reps[n].len() != 1 {
        return Err(Error::Inconsistent(format!("top relative residue has dimension {}", rel.reps[n].len())));
    }
    let top_space = relative_section_space(&a, &all, &boundary, top)?;
    let mut cols = rel.m_basis[n].clone();
    cols.push(rel.reps[n][0].clone());
    let eval_matrix = ExactMatrix::from_columns(&cols, top_space.width());
    let epsilon = |v: &Vector| -> Result<FieldScalar> {
        let x = eval_matrix.solve_linear(v)?.ok_or_else(|| Error::Inconsistent("product outside E^{2n}".into()))?;
        Ok(x.last().cloned().unwrap_or_else(FieldScalar::zero))
    };
    let mut blocks = Vec::new();
    for q in 0..=n {
        let left = &abs.reps[q];
        let right = &rel.reps[n - q];
        let (ls, rs) = (&abs.spaces[q], &rel.spaces[n - q]);
        let mut m = ExactMatrix::zeros(left.len(), right.len());
        for (i, x) in left.iter().enumerate() {
            for (j, y) in right.iter().enumerate() {
                let mut prod = Vec::with_capacity(top_space.width());
                for (p, &c) in top_space.cones.iter().enumerate() {
                    let (pl, pr) = (ls.position(c).unwrap(), rs.position(c).unwrap());
                    debug_assert_eq!(p, pl);
                    let k = fan.cone_dim(c);
                    let px = Poly::from_coeffs(k, q as u32, ls.component(x, pl).to_vec());
                    let py = Poly::from_coeffs(k, (n - q) as u32, rs.component(y, pr).to_vec());
                    prod.extend(px.mul(&py).into_coeffs());
                }
                m.set(i, j, epsilon(&prod)?);
            }
        }
        let invertible = m.rows() == m.cols() && (m.rows() == 0 || !m.determinant().is_zero());
        blocks.push(PairingBlock { degree: 2 * q as u32, matrix: m, invertible });
    }
    Ok(PairingReport { blocks })
}

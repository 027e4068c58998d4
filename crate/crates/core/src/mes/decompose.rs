//! Decomposition of the direct image of piecewise polynomials under a
//! simplicial refinement into shifted copies of `σE•`.
//!
//! With `F = π_* Ǎ`, `F_σ` is the space of piecewise polynomials on the
//! refined `⟨σ⟩`, and the multiplicity space of σ is
//! `K_σ = ker(F̄_σ → F̄_{∂σ})`, computed degreewise as
//! `dim F̄_σ − [rank(ρ F_σ + m F_{∂σ}) − rank(m F_{∂σ})]`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactmath::{dot, Vector};
use crate::fan::{ConeId, Fan, Subfan};
use crate::fansheaf::{restriction_to_face, section_space};

use super::{m_span, rank, structure_sheaf, GradedDims};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `cone_map[c]`: smallest cone of the coarse fan containing fine cone `c`.
    pub cone_map: Vec<ConeId>,
    /// Graded dimensions of `K•_σ` for every coarse cone.
    pub multiplicities: BTreeMap<ConeId, GradedDims>,
}

impl Decomposition {
    /// Cones other than the zero cone with a nonzero multiplicity space.
    pub fn nonzero(&self) -> Vec<ConeId> {
        self.multiplicities.iter().filter(|(&c, g)| c != 0 && !g.is_zero()).map(|(&c, _)| c).collect()
    }
}

fn contains_point(fan: &Fan, sigma: ConeId, x: &[crate::exactmath::FieldScalar]) -> bool {
    let cone = fan.cone(sigma);
    let z = cone.coords(x);
    let back: Vector = (0..fan.dim())
        .map(|i| cone.basis.iter().zip(&z).map(|(b, c)| &b[i] * c).fold(Default::default(), |a, t| &a + &t))
        .collect();
    if back.as_slice() != x {
        return false;
    }
    cone.facet_normals.iter().all(|(_, w)| dot(w, &z).signum() >= 0)
}

/// For each cone of `fine`, the smallest cone of `coarse` containing it, after
/// checking that every coarse cone is exactly covered by fine cones.
pub fn refinement_map(coarse: &Fan, fine: &Fan) -> Result<Vec<ConeId>> {
    if coarse.dim() != fine.dim() {
        return Err(Error::NotRefinement("ambient dimensions differ".into()));
    }
    let mut map = Vec::with_capacity(fine.num_cones());
    for c in 0..fine.num_cones() {
        let rays = &fine.cone(c).rays;
        let best = (0..coarse.num_cones())
            .filter(|&s| rays.iter().all(|&r| contains_point(coarse, s, &fine.rays()[r])))
            .min_by_key(|&s| coarse.cone_dim(s))
            .ok_or_else(|| Error::NotRefinement(format!("fine cone {c} lies in no coarse cone")))?;
        map.push(best);
    }
    // Covering: the fine cones inside σ of full dimension form a
    // pseudomanifold whose free walls all lie on ∂σ, so their union is open
    // and closed in the relative interior of σ.
    for s in 0..coarse.num_cones() {
        let k = coarse.cone_dim(s);
        if k == 0 {
            continue;
        }
        let inside: Vec<ConeId> = (0..fine.num_cones()).filter(|&c| coarse.is_face(map[c], s)).collect();
        let tops: Vec<ConeId> = inside.iter().copied().filter(|&c| fine.cone_dim(c) == k).collect();
        if tops.is_empty() {
            return Err(Error::NotRefinement(format!("coarse cone {s} is not covered")));
        }
        for &c in &inside {
            if fine.cone_dim(c) != k - 1 {
                continue;
            }
            let sides = fine.cofacets(c).iter().filter(|g| tops.contains(g)).count();
            let expected = if map[c] == s { 2 } else { 1 };
            if sides != expected {
                return Err(Error::NotRefinement(format!(
                    "wall {c} inside coarse cone {s} has {sides} sides instead of {expected}"
                )));
            }
        }
    }
    Ok(map)
}

/// Graded multiplicities `K•_σ` of `π_* Ǎ` for a simplicial refinement,
/// in degrees up to `max_degree`.
pub fn decompose_direct_image(coarse: &Fan, fine: &Fan, max_degree: u32) -> Result<Decomposition> {
    if !fine.is_simplicial() {
        return Err(Error::NotSimplicial);
    }
    let cone_map = refinement_map(coarse, fine)?;
    let a = structure_sheaf(fine).with_max_degree(max_degree);
    let mut multiplicities = BTreeMap::new();
    for s in 0..coarse.num_cones() {
        let whole: Vec<ConeId> = (0..fine.num_cones()).filter(|&c| coarse.is_face(cone_map[c], s)).collect();
        let rim: Vec<ConeId> = whole.iter().copied().filter(|&c| cone_map[c] != s).collect();
        let whole = Subfan::generated(fine, &whole);
        let rim = Subfan::generated(fine, &rim);
        let mut dims = GradedDims::zero(max_degree);
        let mut prev: Option<(crate::fansheaf::SectionSpace, crate::fansheaf::SectionSpace)> = None;
        for d in (0..=max_degree).step_by(2) {
            let fs = section_space(fine, &a, &whole, &Subfan::empty(), d);
            let fb = section_space(fine, &a, &rim, &Subfan::empty(), d);
            let (m_s, m_b) = match &prev {
                Some((ps, pb)) => (m_span(&a, ps, &fs), m_span(&a, pb, &fb)),
                None => (Vec::new(), Vec::new()),
            };
            let reduced_s = fs.dim() - rank(m_s, fs.width());
            // ρ: F_σ → F_{∂σ} in section coordinates.
            let sources: Vec<(usize, ConeId)> = fb
                .cones
                .iter()
                .map(|&b| {
                    let p = (0..fs.cones.len()).find(|&p| fine.is_face(b, fs.cones[p])).expect("rim inside σ");
                    (p, b)
                })
                .collect();
            let images: Vec<Vector> = fs
                .basis
                .iter()
                .map(|v| {
                    let mut out = Vec::with_capacity(fb.width());
                    for &(p, b) in &sources {
                        let r = restriction_to_face(fine, &a, fs.cones[p], b, d);
                        out.extend(r.mul_vec(fs.component(v, p)));
                    }
                    out
                })
                .collect();
            let rank_mb = rank(m_b.clone(), fb.width());
            let mut rows = m_b;
            rows.extend(images);
            let image = rank(rows, fb.width()) - rank_mb;
            dims.dims[d as usize] = reduced_s - image;
            prev = Some((fs, fb));
        }
        multiplicities.insert(s, dims);
    }
    Ok(Decomposition { cone_map, multiplicities })
}

//! The face poset of a fan, without coordinates.

use std::collections::BTreeSet;

use super::Fan;
use crate::error::{Error, Result};

/// A graded poset with minimum element 0, given by element dimensions and
/// covering relations. Atoms are the elements of dimension 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanPoset {
    n: usize,
    dims: Vec<usize>,
    facets: Vec<Vec<usize>>,
    cofacets: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    atoms: Vec<Vec<usize>>,
}

impl FanPoset {
    /// Builds a poset from dimensions and covering lists (`facets[e]` are the
    /// elements covered by `e`). Element 0 must be the unique minimum.
    pub fn new(n: usize, dims: Vec<usize>, facets: Vec<Vec<usize>>) -> Result<Self> {
        let len = dims.len();
        let bad = |m: &str| Err(Error::Parse(format!("malformed poset: {m}")));
        if len == 0 || dims[0] != 0 || facets.len() != len {
            return bad("missing minimum");
        }
        for (e, fs) in facets.iter().enumerate() {
            if dims[e] > n {
                return bad("element above the ambient dimension");
            }
            if e > 0 && fs.is_empty() {
                return bad("element without facets");
            }
            for &f in fs {
                if f >= len || dims[f] + 1 != dims[e] {
                    return bad("covering relation skips a rank");
                }
            }
        }
        let mut cofacets = vec![Vec::new(); len];
        for (e, fs) in facets.iter().enumerate() {
            for &f in fs {
                cofacets[f].push(e);
            }
        }
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by_key(|&e| dims[e]);
        let mut faces: Vec<Vec<usize>> = vec![Vec::new(); len];
        for &e in &order {
            let mut s: BTreeSet<usize> = BTreeSet::from([e]);
            for &f in &facets[e] {
                s.extend(faces[f].iter().copied());
            }
            faces[e] = s.into_iter().collect();
        }
        let atoms = faces.iter().map(|fs| fs.iter().copied().filter(|&a| dims[a] == 1).collect()).collect();
        Ok(FanPoset { n, dims, facets, cofacets, faces, atoms })
    }

    pub fn from_fan(fan: &Fan) -> Self {
        let dims = (0..fan.num_cones()).map(|c| fan.cone_dim(c)).collect();
        let facets = (0..fan.num_cones()).map(|c| fan.facets(c).to_vec()).collect();
        FanPoset::new(fan.dim(), dims, facets).expect("fan face lattice is a graded poset")
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn elem_dim(&self, e: usize) -> usize {
        self.dims[e]
    }

    pub fn facets(&self, e: usize) -> &[usize] {
        &self.facets[e]
    }

    pub fn cofacets(&self, e: usize) -> &[usize] {
        &self.cofacets[e]
    }

    /// All elements below `e`, including `e`.
    pub fn faces(&self, e: usize) -> &[usize] {
        &self.faces[e]
    }

    pub fn atoms(&self, e: usize) -> &[usize] {
        &self.atoms[e]
    }

    pub fn is_face(&self, a: usize, b: usize) -> bool {
        self.faces[b].binary_search(&a).is_ok()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.cofacets[e].is_empty()).collect()
    }

    pub fn is_pure(&self) -> bool {
        self.maximal().iter().all(|&e| self.dims[e] == self.n)
    }

    pub fn of_dim(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.dims[e] == k).collect()
    }

    /// Elements of the boundary subfan: faces of walls lying in exactly one top element.
    pub fn boundary(&self) -> BTreeSet<usize> {
        if self.n == 0 {
            return BTreeSet::new();
        }
        self.of_dim(self.n - 1)
            .into_iter()
            .filter(|&w| self.cofacets[w].iter().filter(|&&c| self.dims[c] == self.n).count() == 1)
            .flat_map(|w| self.faces[w].iter().copied())
            .collect()
    }

    /// The interval `[τ, σ]` as the face poset of a cone of dimension
    /// `dim σ - dim τ`, with τ as its minimum.
    pub fn interval(&self, tau: usize, sigma: usize) -> Result<FanPoset> {
        if !self.is_face(tau, sigma) {
            return Err(Error::NotFace(tau, sigma));
        }
        let mut elems: Vec<usize> = self.faces[sigma].iter().copied().filter(|&g| self.is_face(tau, g)).collect();
        elems.sort_by_key(|&g| (self.dims[g], g));
        let pos = |g: usize| elems.iter().position(|&x| x == g);
        let base = self.dims[tau];
        let dims = elems.iter().map(|&g| self.dims[g] - base).collect();
        let facets = elems.iter().map(|&g| self.facets[g].iter().filter_map(|&f| pos(f)).collect()).collect();
        FanPoset::new(self.dims[sigma] - base, dims, facets)
    }

    /// Number of elements per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.n).map(|k| self.of_dim(k).len()).collect()
    }
}

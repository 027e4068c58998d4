//! Sheaves of vector spaces on the fan space as finite data, their section
//! spaces, cellular cochain complexes and the topological quasi-convexity
//! test.
//!
//! A sheaf on a fan is determined by its values on the affine fans `⟨σ⟩` and
//! the restriction maps along covering relations `τ ≺₁ σ`; that is all the
//! [`CellularSheaf`] trait asks for. Sections on a subfan are families on its
//! maximal cones that agree on pairwise intersections.

mod complex;
mod topology;

use std::collections::{BTreeMap, HashMap};

use crate::exactmath::{ExactMatrix, Vector};
use crate::fan::{ConeId, Fan, Subfan};

pub use complex::{cochain_complex, cochain_complex_on, CochainComplex, RelativeTo};
pub use topology::{
    all_links_are_homology_points, flabby_decomposition, link_homology_profile, quasiconvexity_test,
    quasiconvexity_test_all_cones, relative_constant_cohomology, ConeFailure, FlabbyDecomposition, LinkProfile,
    QuasiConvexity,
};

/// A sheaf of graded vector spaces on a fan, given on cones.
pub trait CellularSheaf {
    /// `dim F^degree(⟨σ⟩)`.
    fn stalk_dim(&self, sigma: ConeId, degree: u32) -> usize;
    /// Matrix of the restriction `F(⟨σ⟩) → F(⟨τ⟩)` for a facet `τ ≺₁ σ`,
    /// of size `stalk_dim(τ) × stalk_dim(σ)`.
    fn restriction(&self, sigma: ConeId, tau: ConeId, degree: u32) -> ExactMatrix;
}

/// Restriction to an arbitrary face, composed along a chain of facets.
pub fn restriction_to_face<S: CellularSheaf + ?Sized>(
    fan: &Fan,
    sheaf: &S,
    sigma: ConeId,
    tau: ConeId,
    degree: u32,
) -> ExactMatrix {
    assert!(fan.is_face(tau, sigma), "restriction to a non-face");
    let mut m = ExactMatrix::identity(sheaf.stalk_dim(sigma, degree));
    let mut cur = sigma;
    while cur != tau {
        let next = *fan.facets(cur).iter().find(|&&f| fan.is_face(tau, f)).expect("chain of facets");
        m = sheaf.restriction(cur, next, degree).mul(&m);
        cur = next;
    }
    m
}

/// What a [`FanSheafData`] is known to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SheafKind {
    General,
    Constant,
    Characteristic(ConeId),
}

#[derive(Clone, Debug, Default)]
struct Piece {
    dims: Vec<usize>,
    maps: HashMap<(ConeId, ConeId), ExactMatrix>,
}

/// Explicit sheaf data: dimensions per cone and degree plus restriction
/// matrices per covering relation.
#[derive(Clone, Debug)]
pub struct FanSheafData {
    num_cones: usize,
    pieces: BTreeMap<u32, Piece>,
    kind: SheafKind,
}

impl FanSheafData {
    /// The constant sheaf `R` in degree 0.
    pub fn constant(fan: &Fan) -> Self {
        Self::indicator(fan, |_| true, SheafKind::Constant)
    }

    /// The characteristic sheaf of σ: `R` on subfans containing σ, else 0.
    pub fn characteristic(fan: &Fan, sigma: ConeId) -> Self {
        Self::indicator(fan, |g| fan.is_face(sigma, g), SheafKind::Characteristic(sigma))
    }

    fn indicator(fan: &Fan, on: impl Fn(ConeId) -> bool, kind: SheafKind) -> Self {
        let n = fan.num_cones();
        let dims: Vec<usize> = (0..n).map(|c| usize::from(on(c))).collect();
        let mut maps = HashMap::new();
        for s in 0..n {
            for &t in fan.facets(s) {
                let mut m = ExactMatrix::zeros(dims[t], dims[s]);
                if dims[s] == 1 && dims[t] == 1 {
                    m = ExactMatrix::identity(1);
                }
                maps.insert((s, t), m);
            }
        }
        FanSheafData { num_cones: n, pieces: BTreeMap::from([(0, Piece { dims, maps })]), kind }
    }

    /// Snapshot of an arbitrary sheaf in the given degrees.
    pub fn from_sheaf<S: CellularSheaf + ?Sized>(fan: &Fan, sheaf: &S, degrees: &[u32]) -> Self {
        let mut pieces = BTreeMap::new();
        for &d in degrees {
            let dims = (0..fan.num_cones()).map(|c| sheaf.stalk_dim(c, d)).collect();
            let mut maps = HashMap::new();
            for s in 0..fan.num_cones() {
                for &t in fan.facets(s) {
                    maps.insert((s, t), sheaf.restriction(s, t, d));
                }
            }
            pieces.insert(d, Piece { dims, maps });
        }
        FanSheafData { num_cones: fan.num_cones(), pieces, kind: SheafKind::General }
    }

    /// Builds sheaf data from explicit dimensions and restriction matrices in one degree.
    pub fn from_parts(
        fan: &Fan,
        degree: u32,
        dims: Vec<usize>,
        maps: HashMap<(ConeId, ConeId), ExactMatrix>,
    ) -> crate::Result<Self> {
        if dims.len() != fan.num_cones() {
            return Err(crate::Error::Dimension(format!("{} stalks for {} cones", dims.len(), fan.num_cones())));
        }
        for s in 0..fan.num_cones() {
            for &t in fan.facets(s) {
                let m = maps.get(&(s, t)).ok_or(crate::Error::MissingCone(s))?;
                if m.rows() != dims[t] || m.cols() != dims[s] {
                    return Err(crate::Error::Dimension(format!("restriction {s} -> {t} has the wrong shape")));
                }
            }
        }
        Ok(FanSheafData {
            num_cones: fan.num_cones(),
            pieces: BTreeMap::from([(degree, Piece { dims, maps })]),
            kind: SheafKind::General,
        })
    }

    pub fn kind(&self) -> SheafKind {
        self.kind
    }

    pub fn is_constant(&self) -> bool {
        self.kind == SheafKind::Constant
    }

    pub fn characteristic_of(&self) -> Option<ConeId> {
        match self.kind {
            SheafKind::Characteristic(s) => Some(s),
            _ => None,
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.pieces.keys().copied().collect()
    }

    pub fn num_cones(&self) -> usize {
        self.num_cones
    }
}

impl CellularSheaf for FanSheafData {
    fn stalk_dim(&self, sigma: ConeId, degree: u32) -> usize {
        self.pieces.get(&degree).map_or(0, |p| p.dims[sigma])
    }

    fn restriction(&self, sigma: ConeId, tau: ConeId, degree: u32) -> ExactMatrix {
        match self.pieces.get(&degree) {
            Some(p) => p.maps.get(&(sigma, tau)).cloned().expect("restriction along a covering relation"),
            None => ExactMatrix::zeros(0, 0),
        }
    }
}

/// The diamond condition: the two facet chains from σ to a codimension-2
/// face give the same composed restriction.
pub fn diamond_check<S: CellularSheaf + ?Sized>(fan: &Fan, sheaf: &S, degree: u32) -> bool {
    for s in 0..fan.num_cones() {
        for &r in fan.faces(s) {
            if fan.cone_dim(r) + 2 != fan.cone_dim(s) {
                continue;
            }
            let mids: Vec<ConeId> = fan.facets(s).iter().copied().filter(|&t| fan.is_face(r, t)).collect();
            let composed: Vec<ExactMatrix> =
                mids.iter().map(|&t| sheaf.restriction(t, r, degree).mul(&sheaf.restriction(s, t, degree))).collect();
            if composed.windows(2).any(|w| w[0] != w[1]) {
                return false;
            }
        }
    }
    true
}

/// A basis of `F^d(Λ)` or of the sections on Λ vanishing on `Λ₀`.
///
/// Sections are stored by their components on the maximal cones of Λ,
/// concatenated in `cones` order.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub degree: u32,
    pub cones: Vec<ConeId>,
    pub offsets: Vec<usize>,
    pub basis: Vec<Vector>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Total length of a coordinate vector.
    pub fn width(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Component of a coordinate vector on the maximal cone at position `i`.
    pub fn component<'a>(
        &self,
        v: &'a [crate::exactmath::FieldScalar],
        i: usize,
    ) -> &'a [crate::exactmath::FieldScalar] {
        &v[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn position(&self, cone: ConeId) -> Option<usize> {
        self.cones.iter().position(|&c| c == cone)
    }
}

/// Sections of `sheaf` on the subfan `lambda` that vanish on `vanishing`
/// (which must be a subfan of `lambda`), in one degree.
pub fn section_space<S: CellularSheaf + ?Sized>(
    fan: &Fan,
    sheaf: &S,
    lambda: &Subfan,
    vanishing: &Subfan,
    degree: u32,
) -> SectionSpace {
    let cones = lambda.maximal(fan);
    let mut offsets = vec![0];
    for &c in &cones {
        offsets.push(offsets.last().unwrap() + sheaf.stalk_dim(c, degree));
    }
    let width = *offsets.last().unwrap();
    let mut cache: HashMap<(ConeId, ConeId), ExactMatrix> = HashMap::new();
    let mut res = |s: ConeId, t: ConeId| -> ExactMatrix {
        cache.entry((s, t)).or_insert_with(|| restriction_to_face(fan, sheaf, s, t, degree)).clone()
    };
    let mut rows: Vec<Vector> = Vec::new();
    let place = |row_block: &ExactMatrix, at: usize, sign: bool, rows: &mut Vec<Vector>, start: usize| {
        for i in 0..row_block.rows() {
            let row = &mut rows[start + i];
            for j in 0..row_block.cols() {
                let x = row_block.get(i, j);
                if !x.is_zero() {
                    row[at + j] = if sign { x.clone() } else { -x };
                }
            }
        }
    };
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            let common: Vec<usize> =
                fan.cone(cones[a]).rays.iter().copied().filter(|r| fan.cone(cones[b]).rays.contains(r)).collect();
            let tau = fan.cone_by_rays(&common).expect("intersection is a common face");
            let k = sheaf.stalk_dim(tau, degree);
            if k == 0 {
                continue;
            }
            let start = rows.len();
            rows.extend((0..k).map(|_| vec![crate::exactmath::FieldScalar::zero(); width]));
            place(&res(cones[a], tau), offsets[a], true, &mut rows, start);
            place(&res(cones[b], tau), offsets[b], false, &mut rows, start);
        }
    }
    for (i, &c) in cones.iter().enumerate() {
        for t in vanishing.maximal(fan) {
            if !fan.is_face(t, c) || sheaf.stalk_dim(t, degree) == 0 {
                continue;
            }
            let start = rows.len();
            rows.extend((0..sheaf.stalk_dim(t, degree)).map(|_| vec![crate::exactmath::FieldScalar::zero(); width]));
            place(&res(c, t), offsets[i], true, &mut rows, start);
        }
    }
    let basis = if rows.is_empty() {
        (0..width)
            .map(|i| (0..width).map(|j| crate::exactmath::FieldScalar::from_int(i64::from(i == j))).collect())
            .collect()
    } else {
        ExactMatrix::from_rows(rows, width).rank_and_kernel().1
    };
    SectionSpace { degree, cones, offsets, basis }
}

/// `dim ker(F(σ) → F(∂σ))`.
pub fn boundary_kernel_dim<S: CellularSheaf + ?Sized>(fan: &Fan, sheaf: &S, sigma: ConeId, degree: u32) -> usize {
    let dim = sheaf.stalk_dim(sigma, degree);
    let facets = fan.facets(sigma);
    if facets.is_empty() || dim == 0 {
        return dim;
    }
    let stacked = facets.iter().map(|&t| sheaf.restriction(sigma, t, degree)).reduce(|a, b| a.vstack(&b)).unwrap();
    dim - stacked.rank()
}

/// Flabbiness: every `F(σ) → F(∂σ)` is surjective.
pub fn is_flabby<S: CellularSheaf + ?Sized>(fan: &Fan, sheaf: &S, degree: u32) -> bool {
    (0..fan.num_cones()).all(|s| {
        let dim = sheaf.stalk_dim(s, degree);
        let kernel = boundary_kernel_dim(fan, sheaf, s, degree);
        let boundary = Subfan::generated(fan, fan.facets(s));
        let target = section_space(fan, sheaf, &boundary, &Subfan::empty(), degree).dim();
        dim - kernel == target
    })
}

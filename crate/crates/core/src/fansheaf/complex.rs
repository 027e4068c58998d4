//! Cellular cochain complexes `C•(Δ, Λ; F)` and their augmented versions.

use crate::error::Result;
use crate::exactmath::{ExactMatrix, FieldScalar};
use crate::fan::{boundary_fan, ConeId, Fan, Subfan};

use super::{restriction_to_face, section_space, CellularSheaf};

/// The subfan a complex is taken relative to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelativeTo {
    /// `Λ = ∅`, so the augmentation uses sections vanishing on `∂Δ`.
    Nothing,
    /// `Λ = ∂Δ`, so the augmentation uses all global sections.
    Boundary,
}

/// A finite cochain complex of vector spaces in one sheaf degree.
///
/// Term `i` sits in cochain degree `start + i`; `start` is `-1` for
/// augmented complexes, whose term `-1` is a section space.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub start: i32,
    /// Cones making up each term (empty for the augmentation term).
    pub cones: Vec<Vec<ConeId>>,
    pub dims: Vec<usize>,
    /// `maps[i]` goes from term `i` to term `i + 1`.
    pub maps: Vec<ExactMatrix>,
}

impl CochainComplex {
    /// `dim H^q` for every term, in the order of the terms.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.maps.iter().map(|m| m.rank()).collect();
        (0..self.dims.len())
            .map(|i| {
                let out = ranks.get(i).copied().unwrap_or(0);
                let inc = if i == 0 { 0 } else { ranks[i - 1] };
                self.dims[i] - out - inc
            })
            .collect()
    }

    /// `dim H^q` for cochain degree `q`.
    pub fn cohomology_at(&self, q: i32) -> usize {
        let i = q - self.start;
        if i < 0 || i as usize >= self.dims.len() {
            return 0;
        }
        self.cohomology_dims()[i as usize]
    }

    pub fn is_exact(&self) -> bool {
        self.cohomology_dims().iter().all(|&d| d == 0)
    }

    /// `δ^{k+1} ∘ δ^k = 0` for all `k`.
    pub fn squares_to_zero(&self) -> bool {
        self.maps.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }
}

/// The cellular complex on the cones of `include` not in `exclude`, with
/// `C^k` spanned by cones of dimension `n - k`. With `augmentation = Some(Λ*)`
/// the complex is preceded by the sections on `include` vanishing on `Λ*`.
pub fn cochain_complex_on<S: CellularSheaf + ?Sized>(
    fan: &Fan,
    sheaf: &S,
    include: &Subfan,
    exclude: &Subfan,
    augmentation: Option<&Subfan>,
    degree: u32,
) -> CochainComplex {
    let n = fan.dim();
    let mut cones: Vec<Vec<ConeId>> = (0..=n)
        .map(|k| include.cones().filter(|&c| !exclude.contains(c) && fan.cone_dim(c) == n - k).collect())
        .collect();
    let offsets: Vec<Vec<usize>> = cones
        .iter()
        .map(|cs| {
            let mut o = vec![0];
            for &c in cs {
                o.push(o.last().unwrap() + sheaf.stalk_dim(c, degree));
            }
            o
        })
        .collect();
    let mut dims: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();
    let mut maps = Vec::with_capacity(n + 1);
    for k in 0..n {
        let mut m = ExactMatrix::zeros(dims[k + 1], dims[k]);
        for (j, &s) in cones[k].iter().enumerate() {
            for &t in fan.facets(s) {
                let Some(i) = cones[k + 1].iter().position(|&x| x == t) else {
                    continue;
                };
                let sign = fan.orientation_coefficient(s, t).expect("covering relation");
                let r = sheaf.restriction(s, t, degree);
                let block = if sign < 0 { r.scale(&FieldScalar::from_int(-1)) } else { r };
                m.put_block(offsets[k + 1][i], offsets[k][j], &block);
            }
        }
        maps.push(m);
    }
    let mut start = 0;
    if let Some(star) = augmentation {
        let sections = section_space(fan, sheaf, include, star, degree);
        let mut m = ExactMatrix::zeros(dims[0], sections.dim());
        for (i, &c) in cones[0].iter().enumerate() {
            let (pos, from) = match sections.position(c) {
                Some(p) => (p, None),
                None => {
                    let p = (0..sections.cones.len()).find(|&p| fan.is_face(c, sections.cones[p])).expect("covered");
                    (p, Some(restriction_to_face(fan, sheaf, sections.cones[p], c, degree)))
                }
            };
            for (col, b) in sections.basis.iter().enumerate() {
                let comp = sections.component(b, pos).to_vec();
                let comp = match &from {
                    Some(r) => r.mul_vec(&comp),
                    None => comp,
                };
                for (r, x) in comp.into_iter().enumerate() {
                    m.set(offsets[0][i] + r, col, x);
                }
            }
        }
        maps.insert(0, m);
        dims.insert(0, sections.dim());
        cones.insert(0, Vec::new());
        start = -1;
    }
    CochainComplex { start, cones, dims, maps }
}

/// `C•(Δ, Λ; F)` for `Λ ∈ {∅, ∂Δ}`, optionally augmented as in the
/// definition of `H̃•(Δ, Λ; F)`.
pub fn cochain_complex<S: CellularSheaf + ?Sized>(
    fan: &Fan,
    sheaf: &S,
    rel: RelativeTo,
    augmented: bool,
    degree: u32,
) -> Result<CochainComplex> {
    let boundary = boundary_fan(fan)?;
    let all = Subfan::full(fan);
    let (lambda, star) = match rel {
        RelativeTo::Nothing => (Subfan::empty(), boundary),
        RelativeTo::Boundary => (boundary, Subfan::empty()),
    };
    Ok(cochain_complex_on(fan, sheaf, &all, &lambda, augmented.then_some(&star), degree))
}

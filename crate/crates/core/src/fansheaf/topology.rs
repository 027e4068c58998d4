//! Topological invariants computed through constant-coefficient cellular
//! complexes: the quasi-convexity test, link homology and the flabby
//! decomposition count.

use crate::error::{Error, Result};
use crate::fan::{boundary_fan, transversal_fan, ConeId, Fan, Subfan};

use super::complex::{cochain_complex, cochain_complex_on, RelativeTo};
use super::{boundary_kernel_dim, CellularSheaf, FanSheafData};

/// `dim H̃^q(Δ, ∂Δ; R)` for `q = -1, …, n`.
pub fn relative_constant_cohomology(fan: &Fan) -> Result<Vec<usize>> {
    let c = cochain_complex(fan, &FanSheafData::constant(fan), RelativeTo::Boundary, true, 0)?;
    Ok(c.cohomology_dims())
}

/// A cone whose transversal fan has non-vanishing relative cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFailure {
    pub cone: ConeId,
    /// `dim H̃^q(Δ_σ, ∂Δ_σ; R)` for `q = -1, …, n - dim σ`.
    pub dims: Vec<usize>,
}

impl ConeFailure {
    /// Cochain degrees with nonzero cohomology.
    pub fn failing_degrees(&self) -> Vec<i32> {
        (0..self.dims.len()).filter(|&i| self.dims[i] > 0).map(|i| i as i32 - 1).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiConvexity {
    pub quasi_convex: bool,
    /// Cones whose transversal fan was actually examined.
    pub checked: Vec<ConeId>,
    pub failures: Vec<ConeFailure>,
}

/// Tests `H̃•(Δ_σ, ∂Δ_σ; R) = 0` for every cone σ. Cones where the vanishing
/// is automatic are skipped: those off the boundary (their transversal fan
/// is complete) and those of dimension `n - 1` or `n`.
pub fn quasiconvexity_test(fan: &Fan) -> Result<QuasiConvexity> {
    run_quasiconvexity(fan, true)
}

/// Same as [`quasiconvexity_test`] but examines every cone.
pub fn quasiconvexity_test_all_cones(fan: &Fan) -> Result<QuasiConvexity> {
    run_quasiconvexity(fan, false)
}

fn run_quasiconvexity(fan: &Fan, skip: bool) -> Result<QuasiConvexity> {
    let boundary = boundary_fan(fan)?;
    let n = fan.dim();
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for sigma in 0..fan.num_cones() {
        if skip && (!boundary.contains(sigma) || fan.cone_dim(sigma) + 1 >= n) {
            continue;
        }
        checked.push(sigma);
        let t = transversal_fan(fan, sigma)?;
        let dims = relative_constant_cohomology(&t.fan)?;
        if dims.iter().any(|&d| d > 0) {
            failures.push(ConeFailure { cone: sigma, dims });
        }
    }
    Ok(QuasiConvexity { quasi_convex: failures.is_empty(), checked, failures })
}

/// Reduced real homology of the link `L_σ` and of its boundary `∂L_σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkProfile {
    pub cone: ConeId,
    /// `n - dim σ`; the link lives in a sphere of dimension `k - 1`.
    pub k: usize,
    /// `dim H̃_j(L_σ)` for `j = -1, …, k - 1`.
    pub link: Vec<usize>,
    /// `dim H̃_j(∂L_σ)` for `j = -1, …, k - 1`.
    pub boundary: Vec<usize>,
}

impl LinkProfile {
    pub fn is_homology_point(&self) -> bool {
        self.link.iter().all(|&d| d == 0)
    }

    /// Whether `∂L_σ` has the homology of a sphere of dimension `k - 2`.
    pub fn boundary_is_sphere(&self) -> bool {
        self.boundary.iter().enumerate().all(|(i, &d)| d == usize::from(i + 1 == self.k))
    }
}

/// Computes the link profile of a boundary cone (or `o`) of a non-complete
/// fan. The cells of `L_σ` are the cones of the transversal fan, so
/// `H̃_j(L_σ) = H^{k-1-j}(C•(Δ_σ; R))` with the zero cone as the augmentation.
pub fn link_homology_profile(fan: &Fan, sigma: ConeId) -> Result<LinkProfile> {
    fan.check_id(sigma)?;
    if fan.is_complete() {
        return Err(Error::Complete);
    }
    let boundary = boundary_fan(fan)?;
    if sigma != fan.zero_cone() && !boundary.contains(sigma) {
        return Err(Error::Degenerate(format!("cone {sigma} is not on the boundary")));
    }
    let t = transversal_fan(fan, sigma)?.fan;
    let k = t.dim();
    let constant = FanSheafData::constant(&t);
    let reverse = |dims: Vec<usize>| -> Vec<usize> { (0..=k).map(|i| dims[k - i]).collect() };
    let link = cochain_complex_on(&t, &constant, &Subfan::full(&t), &Subfan::empty(), None, 0);
    let tb = boundary_fan(&t)?;
    let bnd = cochain_complex_on(&t, &constant, &tb, &Subfan::empty(), None, 0);
    Ok(LinkProfile { cone: sigma, k, link: reverse(link.cohomology_dims()), boundary: reverse(bnd.cohomology_dims()) })
}

/// Whether every link `L_σ`, σ ∈ ∂Δ, has the real homology of a point.
pub fn all_links_are_homology_points(fan: &Fan) -> Result<bool> {
    let boundary = boundary_fan(fan)?;
    for sigma in boundary.cones() {
        if !link_homology_profile(fan, sigma)?.is_homology_point() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both sides of the flabby decomposition count in one degree:
/// `H̃•(Δ, ∂Δ; F)` against `Σ_σ dim K_σ · H̃•(Δ_σ, ∂Δ_σ; R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlabbyDecomposition {
    /// Indexed by cochain degree `q = -1, …, n`.
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
    /// `(σ, dim K_σ)` for every cone with a nonzero kernel.
    pub kernels: Vec<(ConeId, usize)>,
}

impl FlabbyDecomposition {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn flabby_decomposition<S: CellularSheaf + ?Sized>(
    fan: &Fan,
    sheaf: &S,
    degree: u32,
) -> Result<FlabbyDecomposition> {
    let c = cochain_complex(fan, sheaf, RelativeTo::Boundary, true, degree)?;
    let lhs = c.cohomology_dims();
    let mut rhs = vec![0; lhs.len()];
    let mut kernels = Vec::new();
    for sigma in 0..fan.num_cones() {
        let k = boundary_kernel_dim(fan, sheaf, sigma, degree);
        if k == 0 {
            continue;
        }
        kernels.push((sigma, k));
        let t = transversal_fan(fan, sigma)?;
        for (i, d) in relative_constant_cohomology(&t.fan)?.into_iter().enumerate() {
            rhs[i] += k * d;
        }
    }
    Ok(FlabbyDecomposition { lhs, rhs, kernels })
}

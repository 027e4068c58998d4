//! Generalized h-vectors from face posets alone.
//!
//! Local polynomials come from the recursion
//! `P_σ = τ_{<dim σ}((1 - t²) P_{Λ_σ})` where the flattened boundary fan
//! `Λ_σ` has the proper faces of σ as its cones, and global polynomials from
//! the local-to-global sums over interior (absolute) or all (relative) cones.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::fan::{Fan, FanPoset};

/// An even polynomial `Σ b_{2q} t^{2q}`, stored as `coeffs[q] = b_{2q}`.
///
/// Intermediate results of the recursion may have negative coefficients;
/// Poincaré polynomials of fans and cones never do.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PoincarePolynomial {
    coeffs: Vec<i64>,
}

impl PoincarePolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PoincarePolynomial { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![1])
    }

    /// `(t² - 1)^k`.
    pub fn t2_minus_one_pow(k: usize) -> Self {
        let mut p = Self::one();
        for _ in 0..k {
            p = p.mul(&Self::new(vec![-1, 1]));
        }
        p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// `b_{2q}`, zero beyond the stored range.
    pub fn coeff(&self, q: usize) -> i64 {
        self.coeffs.get(q).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `t` (so twice the top `q`); `None` for the zero polynomial.
    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1).map(|q| 2 * q)
    }

    pub fn leading_coeff(&self) -> i64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..len).map(|q| self.coeff(q) + o.coeff(q)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let len = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..len).map(|q| self.coeff(q) - o.coeff(q)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `t^{2n} P(1/t)`; requires `t_degree <= 2n`.
    pub fn reversed(&self, n: usize) -> Self {
        assert!(self.coeffs.len() <= n + 1, "degree exceeds 2n");
        Self::new((0..=n).map(|q| self.coeff(n - q)).collect())
    }

    /// Coefficientwise `self >= o`.
    pub fn dominates(&self, o: &Self) -> bool {
        let len = self.coeffs.len().max(o.coeffs.len());
        (0..len).all(|q| self.coeff(q) >= o.coeff(q))
    }
}

impl fmt::Display for PoincarePolynomial {
    /// Coefficient array, index = q: `[1,5,5,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// `τ_{<k}`: keeps the monomials of t-degree `< k`.
pub fn truncate_below(p: &PoincarePolynomial, k: usize) -> PoincarePolynomial {
    PoincarePolynomial::new(p.coeffs.iter().enumerate().filter(|(q, _)| 2 * q < k).map(|(_, &c)| c).collect())
}

/// Whether a local polynomial relied on the vanishing condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Simplicial or rational input: the recursion is a theorem.
    Unconditional,
    /// Non-simplicial cones over a non-rational field: assumes `V(σ)`.
    AssumesV,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Unconditional => "unconditional",
            Provenance::AssumesV => "assumes V",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPoincare {
    pub poly: PoincarePolynomial,
    pub provenance: Provenance,
}

type MemoKey = Vec<Vec<u16>>;

fn memo() -> &'static RwLock<HashMap<MemoKey, PoincarePolynomial>> {
    static MEMO: OnceLock<RwLock<HashMap<MemoKey, PoincarePolynomial>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The face lattice of σ as sorted atom sets, atoms renumbered in id order.
/// Equal keys mean isomorphic face lattices.
fn memo_key(poset: &FanPoset, sigma: usize) -> MemoKey {
    let atoms = poset.atoms(sigma);
    let mut key: MemoKey = poset
        .faces(sigma)
        .iter()
        .map(|&g| poset.atoms(g).iter().map(|a| atoms.binary_search(a).expect("atom of a face") as u16).collect())
        .collect();
    key.sort();
    key
}

fn local_poly(poset: &FanPoset, sigma: usize) -> PoincarePolynomial {
    let d = poset.elem_dim(sigma);
    if poset.atoms(sigma).len() == d {
        return PoincarePolynomial::one();
    }
    let key = memo_key(poset, sigma);
    if let Some(p) = memo().read().expect("memo lock").get(&key) {
        return p.clone();
    }
    // P_{Λ_σ}: the proper faces of σ form a complete fan of dimension d - 1.
    let mut global = PoincarePolynomial::zero();
    for &g in poset.faces(sigma) {
        if g == sigma {
            continue;
        }
        let term = PoincarePolynomial::t2_minus_one_pow(d - 1 - poset.elem_dim(g)).mul(&local_poly(poset, g));
        global = global.add(&term);
    }
    let p = truncate_below(&PoincarePolynomial::new(vec![1, -1]).mul(&global), d);
    memo().write().expect("memo lock").insert(key, p.clone());
    p
}

/// `P_σ` for an element of a fan poset. Non-simplicial cones are flagged as
/// relying on `V(σ)`; use [`fan_local_poincare`] when coordinates are known.
pub fn local_poincare(poset: &FanPoset, sigma: usize) -> Result<LocalPoincare> {
    if sigma >= poset.len() {
        return Err(Error::UnknownCone(sigma));
    }
    let simplicial = poset.faces(sigma).iter().all(|&g| poset.atoms(g).len() == poset.elem_dim(g));
    let provenance = if simplicial { Provenance::Unconditional } else { Provenance::AssumesV };
    Ok(LocalPoincare { poly: local_poly(poset, sigma), provenance })
}

/// `P_σ` for a cone of a fan; rational fans satisfy `V(σ)`, so their
/// results are unconditional.
pub fn fan_local_poincare(fan: &Fan, sigma: usize) -> Result<LocalPoincare> {
    fan.check_id(sigma)?;
    let mut lp = local_poincare(&FanPoset::from_fan(fan), sigma)?;
    if fan.field() == crate::fan::Field::Rational {
        lp.provenance = Provenance::Unconditional;
    }
    Ok(lp)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `P_Δ`: sum over cones off the boundary.
    Absolute,
    /// `P_{(Δ,∂Δ)}`: sum over all cones.
    Relative,
}

/// Local-to-global formula for a purely n-dimensional, quasi-convex poset.
pub fn global_poincare(poset: &FanPoset, mode: Mode) -> Result<PoincarePolynomial> {
    if !poset.is_pure() {
        return Err(Error::NotPure(poset.dim()));
    }
    let n = poset.dim();
    let boundary = poset.boundary();
    let mut total = PoincarePolynomial::zero();
    for g in 0..poset.len() {
        if mode == Mode::Absolute && boundary.contains(&g) {
            continue;
        }
        let term = PoincarePolynomial::t2_minus_one_pow(n - poset.elem_dim(g)).mul(&local_poly(poset, g));
        total = total.add(&term);
    }
    Ok(total)
}

/// Classical h-vector of a complete simplicial fan from `(f_0, …, f_{d-1})`,
/// where `f_i` counts `(i+1)`-dimensional cones:
/// `h_k = Σ_{i=0}^{k} (-1)^{k-i} C(d-i, k-i) f_{i-1}` with `f_{-1} = 1`.
pub fn classical_h_from_f(f: &[u64]) -> PoincarePolynomial {
    let d = f.len();
    let fm = |i: usize| -> i64 {
        if i == 0 {
            1
        } else {
            f[i - 1] as i64
        }
    };
    let binom = |n: usize, k: usize| -> i64 { (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j as i64 + 1)) };
    PoincarePolynomial::new(
        (0..=d)
            .map(|k| (0..=k).map(|i| if (k - i) % 2 == 0 { 1 } else { -1 } * binom(d - i, k - i) * fm(i)).sum())
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub absolute: PoincarePolynomial,
    pub relative: PoincarePolynomial,
    pub holds: bool,
}

/// `P_{(Δ,∂Δ)}(t) = t^{2n} P_Δ(1/t)`.
pub fn duality_check(poset: &FanPoset) -> Result<DualityReport> {
    let absolute = global_poincare(poset, Mode::Absolute)?;
    let relative = global_poincare(poset, Mode::Relative)?;
    let n = poset.dim();
    let holds = absolute.coeffs.len() <= n + 1 && relative == absolute.reversed(n);
    Ok(DualityReport { absolute, relative, holds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KalaiReport {
    /// `P_σ`.
    pub lhs: PoincarePolynomial,
    /// `P_τ · P_{Δ_τ}` with `Δ_τ` the transversal fan of τ in `⟨σ⟩`.
    pub rhs: PoincarePolynomial,
    pub holds: bool,
}

/// Kalai's inequality `P_σ >= P_τ · P_{Δ_τ}` for `τ ⪯ σ`.
pub fn kalai_check(poset: &FanPoset, sigma: usize, tau: usize) -> Result<KalaiReport> {
    let interval = poset.interval(tau, sigma)?;
    let top = interval.len() - 1;
    debug_assert_eq!(interval.elem_dim(top), interval.dim());
    let lhs = local_poly(poset, sigma);
    let rhs = local_poly(poset, tau).mul(&local_poly(&interval, top));
    let holds = lhs.dominates(&rhs);
    Ok(KalaiReport { lhs, rhs, holds })
}

/// `P(t) / (1 - t²)^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareSeries {
    pub numerator: PoincarePolynomial,
    pub k: usize,
}

impl PoincareSeries {
    /// Coefficient of `t^{2q}`.
    pub fn coeff(&self, q: usize) -> i64 {
        // 1/(1-t²)^k has coefficient C(m + k - 1, k - 1) at t^{2m}.
        let binom = |n: usize, r: usize| -> i64 { (0..r).fold(1i64, |acc, j| acc * (n - j) as i64 / (j as i64 + 1)) };
        (0..=q)
            .map(|j| {
                let m = q - j;
                let c = if self.k == 0 { i64::from(m == 0) } else { binom(m + self.k - 1, self.k - 1) };
                self.numerator.coeff(j) * c
            })
            .sum()
    }

    /// Coefficients for cohomological degrees `0, 2, …, ≤ max_degree`.
    pub fn expand(&self, max_degree: u32) -> Vec<i64> {
        (0..=(max_degree / 2) as usize).map(|q| self.coeff(q)).collect()
    }
}

/// `Q_Δ = P_Δ / (1 - t²)^n` for a quasi-convex fan poset.
pub fn poincare_series(poset: &FanPoset) -> Result<PoincareSeries> {
    Ok(PoincareSeries { numerator: global_poincare(poset, Mode::Absolute)?, k: poset.dim() })
}

/// `Q_σ = P_σ / (1 - t²)^{dim σ}`.
pub fn local_poincare_series(poset: &FanPoset, sigma: usize) -> Result<PoincareSeries> {
    Ok(PoincareSeries { numerator: local_poincare(poset, sigma)?.poly, k: poset.elem_dim(sigma) })
}

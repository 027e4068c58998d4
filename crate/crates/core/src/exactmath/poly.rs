//! Homogeneous polynomials and the graded pieces `S^q(V*)` of the polynomial ring.
//!
//! Cohomological degree is twice the polynomial degree. Monomials of a fixed
//! degree are ordered graded-lexicographically: exponent vectors in
//! decreasing lexicographic order, so `x1^q` comes first and `xn^q` last.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::exactmath::matrix::{ExactMatrix, Vector};
use crate::exactmath::scalar::FieldScalar;

/// Monomial basis of the homogeneous degree-`q` polynomials in `n` variables.
#[derive(Debug)]
pub struct GradedPolySpace {
    n: usize,
    q: u32,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn enumerate(n: usize, q: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if q == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=q).rev() {
        for mut tail in enumerate(n - 1, q - first) {
            let mut m = Vec::with_capacity(n);
            m.push(first);
            m.append(&mut tail);
            out.push(m);
        }
    }
    out
}

type SpaceCache = RwLock<HashMap<(usize, u32), Arc<GradedPolySpace>>>;

fn cache() -> &'static SpaceCache {
    static CACHE: OnceLock<SpaceCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The (cached, shared) monomial basis of `S^q` in `n` variables.
pub fn monomial_basis(n: usize, q: u32) -> Arc<GradedPolySpace> {
    if let Some(s) = cache().read().unwrap().get(&(n, q)) {
        return s.clone();
    }
    let monomials = enumerate(n, q);
    let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let space = Arc::new(GradedPolySpace { n, q, monomials, index });
    cache().write().unwrap().entry((n, q)).or_insert(space).clone()
}

/// `dim S^q` in `n` variables, i.e. `C(n + q - 1, q)`.
pub fn poly_dim(n: usize, q: u32) -> usize {
    if n == 0 {
        return usize::from(q == 0);
    }
    let mut r: u128 = 1;
    for i in 1..=q as u128 {
        r = r * (n as u128 - 1 + i) / i;
    }
    r as usize
}

impl GradedPolySpace {
    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.q
    }

    pub fn cohomological_degree(&self) -> u32 {
        2 * self.q
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        self.index.get(exponents).copied()
    }
}

/// A homogeneous polynomial stored as coefficients over `monomial_basis(nvars, degree)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    degree: u32,
    coeffs: Vector,
}

impl Poly {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Poly { nvars, degree, coeffs: vec![FieldScalar::zero(); poly_dim(nvars, degree)] }
    }

    pub fn constant(nvars: usize, c: FieldScalar) -> Self {
        Poly { nvars, degree: 0, coeffs: vec![c] }
    }

    pub fn from_coeffs(nvars: usize, degree: u32, coeffs: Vector) -> Self {
        assert_eq!(coeffs.len(), poly_dim(nvars, degree), "coefficient count mismatch");
        Poly { nvars, degree, coeffs }
    }

    /// The linear form `Σ c_i x_i`.
    pub fn linear(coeffs: Vector) -> Self {
        Poly { nvars: coeffs.len(), degree: 1, coeffs }
    }

    /// The coordinate function `x_i`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut p = Poly::zero(nvars, 1);
        p.coeffs[i] = FieldScalar::one();
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vector {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!((self.nvars, self.degree), (o.nvars, o.degree));
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Poly { nvars: self.nvars, degree: self.degree, coeffs }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&FieldScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &FieldScalar) -> Poly {
        Poly { nvars: self.nvars, degree: self.degree, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let sa = monomial_basis(self.nvars, self.degree);
        let sb = monomial_basis(o.nvars, o.degree);
        let sc = monomial_basis(self.nvars, self.degree + o.degree);
        let mut out = Poly::zero(self.nvars, self.degree + o.degree);
        let mut e = vec![0u32; self.nvars];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                for k in 0..self.nvars {
                    e[k] = sa.monomials[i][k] + sb.monomials[j][k];
                }
                let idx = sc.index_of(&e).unwrap();
                out.coeffs[idx] = &out.coeffs[idx] + &(a * b);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut r = Poly::constant(self.nvars, FieldScalar::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Value at a point.
    pub fn eval(&self, x: &[FieldScalar]) -> FieldScalar {
        assert_eq!(x.len(), self.nvars);
        let s = monomial_basis(self.nvars, self.degree);
        let mut acc = FieldScalar::zero();
        for (c, m) in self.coeffs.iter().zip(&s.monomials) {
            if c.is_zero() {
                continue;
            }
            let mut t = c.clone();
            for (xi, &e) in x.iter().zip(m) {
                for _ in 0..e {
                    t = &t * xi;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Pullback along the linear map `z ↦ M z`: substitutes `x_i = Σ_j M[i][j] z_j`.
    pub fn substitute(&self, m: &ExactMatrix) -> Poly {
        assert_eq!(m.rows(), self.nvars);
        let k = m.cols();
        let forms: Vec<Poly> = (0..self.nvars).map(|i| Poly::linear(m.row(i).to_vec())).collect();
        let mut powers: Vec<Vec<Poly>> =
            forms.iter().map(|f| vec![Poly::constant(k, FieldScalar::one()), f.clone()]).collect();
        let s = monomial_basis(self.nvars, self.degree);
        let mut out = Poly::zero(k, self.degree);
        for (c, mono) in self.coeffs.iter().zip(&s.monomials) {
            if c.is_zero() {
                continue;
            }
            let mut term = Poly::constant(k, c.clone());
            for (i, &e) in mono.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&forms[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }
}

/// Restricts `p` to the subspace spanned by `basis` (vectors in `p`'s coordinates),
/// returning a polynomial in the coordinates of that basis.
pub fn restrict_polynomial(p: &Poly, basis: &[Vector]) -> Result<Poly> {
    let m = ExactMatrix::from_columns(basis, p.nvars());
    if m.rank() != basis.len() {
        return Err(Error::DependentBasis);
    }
    Ok(p.substitute(&m))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = monomial_basis(self.nvars, self.degree);
        let mut first = true;
        for (c, mono) in self.coeffs.iter().zip(&s.monomials) {
            if c.is_zero() {
                continue;
            }
            let vars: Vec<String> = mono
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "({c})*{}", vars.join("*"))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| FieldScalar::from_int(x)).collect()
    }

    #[test]
    fn basis_sizes_and_order() {
        let b = monomial_basis(2, 0);
        assert_eq!(b.dim(), 1);
        let b = monomial_basis(2, 1);
        assert_eq!(b.monomials(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(monomial_basis(3, 2).dim(), 6);
        assert_eq!(monomial_basis(3, 2).monomials()[0], vec![2, 0, 0]);
        assert_eq!(monomial_basis(3, 2).cohomological_degree(), 4);
        for n in 0..5 {
            for q in 0..6 {
                assert_eq!(monomial_basis(n, q).dim(), poly_dim(n, q));
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let x1 = Poly::variable(2, 0);
        let x2 = Poly::variable(2, 1);
        let t = Poly::variable(1, 0);
        assert_eq!(restrict_polynomial(&x1, &[v(&[1, 0])]).unwrap(), t);
        assert!(restrict_polynomial(&x2, &[v(&[1, 0])]).unwrap().is_zero());
        let x1x2 = x1.mul(&x2);
        assert_eq!(restrict_polynomial(&x1x2, &[v(&[1, 1])]).unwrap(), t.mul(&t));
        assert_eq!(restrict_polynomial(&x1, &[v(&[1, 0]), v(&[2, 0])]), Err(Error::DependentBasis));
    }

    #[test]
    fn display() {
        let p = Poly::variable(2, 0).mul(&Poly::variable(2, 1)).scale(&FieldScalar::ratio(-3, 2));
        assert_eq!(p.to_string(), "(-3/2)*x1*x2");
    }
}

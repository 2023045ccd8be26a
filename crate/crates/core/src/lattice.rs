//! Even positive-definite lattices and the symbolic algebra of their
//! Heisenberg modes.
//!
//! A mode `gamma_{i,n}` is the `i`-th lattice basis vector placed in degree
//! `n`; two modes bracket to `(A, B) * n * delta_{n,-m}` times the central
//! element. [`QuadraticOperator`] is a finite formal sum of normally ordered
//! quadratic mode pairs, linear modes, and a central coefficient;
//! [`dual_quadratic`] builds the Gram-dual pair `sum_{i,j} (G^{-1})_{ij}
//! :gamma_{i,m} gamma_{j,n}:`, which is how orthonormal-frame sums are
//! expressed without leaving the rationals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Int, Rational, Scalar};

/// An even positive-definite lattice presented by its Gram matrix, together
/// with the exact inverse of that matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
    inv: Vec<Vec<Scalar>>,
}

impl Lattice {
    /// Validates symmetry, even diagonal, and positive definiteness
    /// (Sylvester minors), then caches the exact Gram inverse.
    pub fn from_gram(gram: Vec<Vec<i64>>) -> Result<Arc<Self>> {
        let d = gram.len();
        if d == 0 || gram.iter().any(|row| row.len() != d) {
            return Err(Error::NotSquare);
        }
        for i in 0..d {
            for j in 0..d {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
            if gram[i][i] % 2 != 0 {
                return Err(Error::NotEven);
            }
        }
        let rat: Vec<Vec<Rational>> = gram
            .iter()
            .map(|row| row.iter().map(|&x| Rational::from_integer(Int::from(x))).collect())
            .collect();
        if !linalg::leading_minors_positive(&rat) {
            return Err(Error::NotPositiveDefinite);
        }
        let scal: Vec<Vec<Scalar>> = gram
            .iter()
            .map(|row| row.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        let inv = linalg::invert(&scal).map_err(|_| Error::NotPositiveDefinite)?;
        Ok(Arc::new(Lattice { gram, inv }))
    }

    /// Named families: `A1`, `A2`, and `A1^k` (orthogonal sums of `A1`).
    pub fn preset(name: &str) -> Result<Arc<Self>> {
        match name {
            "A1" => Self::from_gram(alloc::vec![alloc::vec![2]]),
            "A2" => Self::from_gram(alloc::vec![alloc::vec![2, -1], alloc::vec![-1, 2]]),
            _ => {
                if let Some(k) = name.strip_prefix("A1^").and_then(|k| k.parse::<usize>().ok()) {
                    if k == 0 {
                        return Err(Error::Parse(String::from("A1^k needs k >= 1")));
                    }
                    let gram = (0..k)
                        .map(|i| (0..k).map(|j| if i == j { 2 } else { 0 }).collect())
                        .collect();
                    Self::from_gram(gram)
                } else {
                    Err(Error::Parse(alloc::format!("unknown lattice preset {name:?}")))
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn gram_entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    pub fn gram_inverse_entry(&self, i: usize, j: usize) -> &Scalar {
        &self.inv[i][j]
    }

    /// The `i`-th basis vector (0-based).
    pub fn basis_vector(&self, i: usize) -> LatticeVector {
        let mut coeffs = alloc::vec![Scalar::zero(); self.rank()];
        coeffs[i] = Scalar::one();
        LatticeVector { coeffs }
    }

    fn check_rank(&self, v: &LatticeVector) -> Result<()> {
        if v.coeffs.len() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: v.coeffs.len() });
        }
        Ok(())
    }

    /// The symmetric bilinear form `A^T G B` extended to scalar coefficients.
    pub fn pairing(&self, a: &LatticeVector, b: &LatticeVector) -> Result<Scalar> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let mut acc = Scalar::zero();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                let g = self.gram[i][j];
                if g == 0 || bj.is_zero() {
                    continue;
                }
                acc += &(&(ai * bj) * &Scalar::from_int(g));
            }
        }
        Ok(acc)
    }
}

/// An element of the complexified lattice, in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeVector {
    coeffs: Vec<Scalar>,
}

impl LatticeVector {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        LatticeVector { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector { coeffs: alloc::vec![Scalar::zero(); rank] }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        LatticeVector {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        LatticeVector { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }
}

/// A lattice vector placed in a single degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mode {
    pub vector: LatticeVector,
    pub n: i64,
}

impl Mode {
    pub fn new(vector: LatticeVector, n: i64) -> Self {
        Mode { vector, n }
    }
}

/// The Heisenberg bracket `[A_n, B_m] = (A, B) * n * delta_{n,-m}` as a
/// multiple of the central element.
pub fn mode_bracket(lattice: &Lattice, a: &Mode, b: &Mode) -> Result<Scalar> {
    if a.n + b.n != 0 {
        // Still validate operand shapes before discarding them.
        lattice.pairing(&a.vector, &b.vector)?;
        return Ok(Scalar::zero());
    }
    Ok(&lattice.pairing(&a.vector, &b.vector)? * &Scalar::from_int(a.n))
}

/// A single mode symbol: basis index and degree.
pub type ModeKey = (i64, usize);

/// A finite formal sum of normally ordered quadratic mode pairs, linear
/// modes, and a central coefficient.
///
/// Quadratic keys are canonical: the two `(degree, index)` symbols are stored
/// sorted, which in particular puts the creation symbol first when the
/// degrees are opposite, matching normal ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticOperator {
    quad: BTreeMap<(ModeKey, ModeKey), Scalar>,
    linear: BTreeMap<ModeKey, Scalar>,
    central: Scalar,
}

impl QuadraticOperator {
    pub fn zero() -> Self {
        QuadraticOperator { quad: BTreeMap::new(), linear: BTreeMap::new(), central: Scalar::zero() }
    }

    pub fn central(c: Scalar) -> Self {
        QuadraticOperator { central: c, ..Self::zero() }
    }

    pub fn add_quad(&mut self, m: i64, i: usize, n: i64, j: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let (a, b) = if (m, i) <= (n, j) { ((m, i), (n, j)) } else { ((n, j), (m, i)) };
        let entry = self.quad.entry((a, b)).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.quad.remove(&(a, b));
        }
    }

    pub fn add_linear(&mut self, n: i64, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.linear.entry((n, i)).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.linear.remove(&(n, i));
        }
    }

    pub fn add_central(&mut self, c: &Scalar) {
        self.central += c;
    }

    /// Adds `coeff * (sum_i a_i gamma_{i,n})`.
    pub fn add_linear_vector(&mut self, v: &LatticeVector, n: i64, coeff: &Scalar) {
        for (i, a) in v.coeffs().iter().enumerate() {
            self.add_linear(n, i, a * coeff);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        let mut out = Self::zero();
        for (&(a, b), v) in &self.quad {
            out.add_quad(a.0, a.1, b.0, b.1, v * c);
        }
        for (&(n, i), v) in &self.linear {
            out.add_linear(n, i, v * c);
        }
        out.central = &self.central * c;
        out
    }

    pub fn add(&mut self, rhs: &Self) {
        for (&(a, b), v) in &rhs.quad {
            self.add_quad(a.0, a.1, b.0, b.1, v.clone());
        }
        for (&(n, i), v) in &rhs.linear {
            self.add_linear(n, i, v.clone());
        }
        self.central += &rhs.central;
    }

    pub fn quad_terms(&self) -> impl Iterator<Item = (&(ModeKey, ModeKey), &Scalar)> {
        self.quad.iter()
    }

    pub fn linear_terms(&self) -> impl Iterator<Item = (&ModeKey, &Scalar)> {
        self.linear.iter()
    }

    pub fn central_term(&self) -> &Scalar {
        &self.central
    }
}

/// The Gram-dual quadratic pair in degrees `(m, n)`:
/// `sum_{i,j} (G^{-1})_{ij} :gamma_{i,m} gamma_{j,n}:`.
pub fn dual_quadratic(lattice: &Lattice, m: i64, n: i64) -> QuadraticOperator {
    let mut op = QuadraticOperator::zero();
    let d = lattice.rank();
    for i in 0..d {
        for j in 0..d {
            op.add_quad(m, i, n, j, lattice.gram_inverse_entry(i, j).clone());
        }
    }
    op
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn gram_validation() {
        assert!(Lattice::from_gram(vec![vec![2]]).is_ok());
        assert!(Lattice::from_gram(vec![vec![2, -1], vec![-1, 2]]).is_ok());
        assert_eq!(Lattice::from_gram(vec![vec![1]]).unwrap_err(), Error::NotEven);
        assert_eq!(
            Lattice::from_gram(vec![vec![2, 1], vec![-1, 2]]).unwrap_err(),
            Error::NotSymmetric
        );
        assert_eq!(Lattice::from_gram(vec![vec![-2]]).unwrap_err(), Error::NotPositiveDefinite);
        assert_eq!(
            Lattice::from_gram(vec![vec![2, 4], vec![4, 2]]).unwrap_err(),
            Error::NotPositiveDefinite
        );
        assert_eq!(Lattice::from_gram(vec![vec![2, 0]]).unwrap_err(), Error::NotSquare);
    }

    #[test]
    fn presets() {
        assert_eq!(Lattice::preset("A1").unwrap().rank(), 1);
        assert_eq!(Lattice::preset("A2").unwrap().gram()[0][1], -1);
        let l = Lattice::preset("A1^3").unwrap();
        assert_eq!(l.rank(), 3);
        assert_eq!(l.gram_entry(1, 1), 2);
        assert_eq!(l.gram_entry(0, 1), 0);
        assert!(Lattice::preset("E8").is_err());
    }

    #[test]
    fn pairing_values() {
        let a2 = Lattice::preset("A2").unwrap();
        let e0 = a2.basis_vector(0);
        let e1 = a2.basis_vector(1);
        assert_eq!(a2.pairing(&e0, &e0).unwrap(), Scalar::from_int(2));
        assert_eq!(a2.pairing(&e0, &e1).unwrap(), Scalar::from_int(-1));
        let sum = e0.add(&e1);
        assert_eq!(a2.pairing(&sum, &sum).unwrap(), Scalar::from_int(2));
        let a1 = Lattice::preset("A1").unwrap();
        assert!(a1.pairing(&e0, &e0).is_err());
    }

    #[test]
    fn bracket_is_diagonal_in_degree() {
        let a1 = Lattice::preset("A1").unwrap();
        let g = a1.basis_vector(0);
        let b = |n| Mode::new(a1.basis_vector(0), n);
        assert_eq!(mode_bracket(&a1, &b(2), &b(-2)).unwrap(), Scalar::from_int(4));
        assert_eq!(mode_bracket(&a1, &b(-2), &b(2)).unwrap(), Scalar::from_int(-4));
        assert_eq!(mode_bracket(&a1, &b(2), &b(-3)).unwrap(), Scalar::zero());
        assert_eq!(mode_bracket(&a1, &b(0), &b(0)).unwrap(), Scalar::zero());
        let _ = g;
    }

    #[test]
    fn dual_quadratic_uses_gram_inverse() {
        let a1 = Lattice::preset("A1").unwrap();
        let op = dual_quadratic(&a1, -1, -1);
        let terms: Vec<_> = op.quad_terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(*terms[0].0, ((-1, 0), (-1, 0)));
        assert_eq!(terms[0].1, &Scalar::ratio(1, 2));

        let two = Lattice::preset("A1^2").unwrap();
        let op = dual_quadratic(&two, -1, 1);
        let terms: Vec<_> = op.quad_terms().collect();
        assert_eq!(terms.len(), 2);
        assert_eq!(*terms[0].0, ((-1, 0), (1, 0)));
        assert_eq!(terms[0].1, &Scalar::ratio(1, 2));
        assert_eq!(*terms[1].0, ((-1, 1), (1, 1)));
    }

    #[test]
    fn quadratic_keys_canonicalize() {
        let mut a = QuadraticOperator::zero();
        a.add_quad(2, 0, -2, 0, Scalar::one());
        let mut b = QuadraticOperator::zero();
        b.add_quad(-2, 0, 2, 0, Scalar::one());
        assert_eq!(a, b);
        a.add_quad(-2, 0, 2, 0, Scalar::from_int(-1));
        assert_eq!(a.quad_terms().count(), 0);
    }
}

//! Fock modules over the lattice Heisenberg algebra.
//!
//! Two actions on the same PBW-monomial basis:
//! - level one: negative modes create, positive modes contract via
//!   `[A_n, B_m] = (A,B) n delta_{n,-m}`, zero modes kill;
//! - level zero: negative modes multiply (a symmetric algebra), all
//!   nonnegative modes act by zero.
//!
//! Quadratic operators act at level one only; the central symbol scales by
//! the lattice rank.  Virasoro operators `L_p` are assembled on demand from
//! Gram-dual quadratic pairs over a provably sufficient mode window.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{dual_quadratic, Lattice, LatticeVector, Mode, QuadraticOperator};
use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

/// Which module structure the vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    /// Symmetric-algebra action: nonnegative modes act by zero.
    Zero,
    /// Oscillator action: positive modes contract against creation factors.
    One,
}

/// A sorted multiset of creation symbols `(mode, basis index)`, all modes
/// strictly negative.  The empty monomial is the vacuum.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PbwMonomial {
    factors: Vec<(i64, usize)>,
}

impl PbwMonomial {
    pub fn vacuum() -> Self {
        PbwMonomial { factors: Vec::new() }
    }

    /// Builds a monomial from creation symbols; rejects nonnegative modes.
    pub fn new(mut factors: Vec<(i64, usize)>) -> Result<Self> {
        if factors.iter().any(|&(n, _)| n >= 0) {
            return Err(Error::InvalidGenerator(String::from(
                "PBW factors must have strictly negative mode",
            )));
        }
        factors.sort_unstable();
        Ok(PbwMonomial { factors })
    }

    pub fn factors(&self) -> &[(i64, usize)] {
        &self.factors
    }

    pub fn is_vacuum(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total degree `sum(-n)` over the factors.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|&(n, _)| -n).sum()
    }

    fn with_factor(&self, n: i64, i: usize) -> Self {
        let mut factors = self.factors.clone();
        let pos = factors.partition_point(|f| *f < (n, i));
        factors.insert(pos, (n, i));
        PbwMonomial { factors }
    }

    fn without_position(&self, pos: usize) -> Self {
        let mut factors = self.factors.clone();
        factors.remove(pos);
        PbwMonomial { factors }
    }
}

/// A finite linear combination of PBW monomials at a fixed level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockVector {
    level: Level,
    lattice: Arc<Lattice>,
    terms: BTreeMap<PbwMonomial, Scalar>,
}

impl FockVector {
    pub fn zero(lattice: Arc<Lattice>, level: Level) -> Self {
        FockVector { level, lattice, terms: BTreeMap::new() }
    }

    pub fn vacuum(lattice: Arc<Lattice>, level: Level) -> Self {
        let mut v = Self::zero(lattice, level);
        v.terms.insert(PbwMonomial::vacuum(), Scalar::one());
        v
    }

    pub fn monomial(
        lattice: Arc<Lattice>,
        level: Level,
        mono: PbwMonomial,
        coeff: Scalar,
    ) -> Self {
        let mut v = Self::zero(lattice, level);
        if !coeff.is_zero() {
            v.terms.insert(mono, coeff);
        }
        v
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest monomial degree present (0 for the zero vector).
    pub fn max_degree(&self) -> i64 {
        self.terms.keys().map(PbwMonomial::degree).max().unwrap_or(0)
    }

    fn compatible(&self, rhs: &Self) -> Result<()> {
        if self.level != rhs.level {
            return Err(Error::LevelUnsupported("mixed-level arithmetic"));
        }
        if self.lattice != rhs.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, rhs: &Self, c: &Scalar) -> Result<()> {
        self.compatible(rhs)?;
        if c.is_zero() {
            return Ok(());
        }
        for (mono, coeff) in &rhs.terms {
            let entry = self.terms.entry(mono.clone()).or_insert_with(Scalar::zero);
            *entry += &(coeff * c);
            if entry.is_zero() {
                self.terms.remove(mono);
            }
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one())?;
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-&Scalar::one())?;
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.lattice.clone(), self.level);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        FockVector { level: self.level, lattice: self.lattice.clone(), terms }
    }

    /// Action of the single mode `gamma_{i,n}`.
    pub fn apply_basis_mode(&self, i: usize, n: i64) -> Result<Self> {
        let d = self.lattice.rank();
        if i >= d {
            return Err(Error::RankMismatch { expected: d, got: i + 1 });
        }
        let mut out = Self::zero(self.lattice.clone(), self.level);
        if n < 0 {
            for (mono, coeff) in &self.terms {
                let entry =
                    out.terms.entry(mono.with_factor(n, i)).or_insert_with(Scalar::zero);
                *entry += coeff;
            }
            out.prune();
            return Ok(out);
        }
        if self.level == Level::Zero || n == 0 {
            return Ok(out);
        }
        // Level one, n > 0: contract against every creation factor of the
        // opposite mode; each contraction contributes (gamma_i, gamma_j) * n.
        for (mono, coeff) in &self.terms {
            for (pos, &(m, j)) in mono.factors().iter().enumerate() {
                if m != -n {
                    continue;
                }
                let weight = Scalar::from_int(self.lattice.gram_entry(i, j) * n);
                if weight.is_zero() {
                    continue;
                }
                let entry = out
                    .terms
                    .entry(mono.without_position(pos))
                    .or_insert_with(Scalar::zero);
                *entry += &(coeff * &weight);
            }
        }
        out.prune();
        Ok(out)
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    /// Action of `A_n` for an arbitrary coefficient vector `A`.
    pub fn apply_mode(&self, mode: &Mode) -> Result<Self> {
        let d = self.lattice.rank();
        if mode.vector.coeffs().len() != d {
            return Err(Error::RankMismatch { expected: d, got: mode.vector.coeffs().len() });
        }
        let mut out = Self::zero(self.lattice.clone(), self.level);
        for (i, c) in mode.vector.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.add_scaled(&self.apply_basis_mode(i, mode.n)?, c)?;
        }
        Ok(out)
    }

    /// Action of `gamma_i tensor f` for a Laurent polynomial `f`: the sum of
    /// `f_k gamma_{i,k}` over the stored support of `f`.
    ///
    /// Truncation must cover every mode that could act nonzero: all negative
    /// exponents always, and at level one every exponent up to the degree of
    /// this vector.
    pub fn apply_element(&self, i: usize, f: &LaurentPoly) -> Result<Self> {
        let needed = match self.level {
            Level::Zero => -1,
            Level::One => self.max_degree(),
        };
        if let Some(t) = f.trunc() {
            if t < needed {
                return Err(Error::TruncationInsufficient { needed, have: t });
            }
        }
        let mut out = Self::zero(self.lattice.clone(), self.level);
        for (k, c) in f.terms() {
            out.add_scaled(&self.apply_basis_mode(i, k)?, c)?;
        }
        Ok(out)
    }

    /// Action of a normally ordered quadratic operator (level one only).
    ///
    /// Quadratic keys apply right factor first; the central symbol acts as
    /// the lattice rank times the identity.
    pub fn apply_quadratic(&self, op: &QuadraticOperator) -> Result<Self> {
        if self.level != Level::One {
            return Err(Error::LevelUnsupported(
                "quadratic operators act at level one; level zero exposes only the grading operator",
            ));
        }
        let d = self.lattice.rank() as i64;
        let mut out = self.scale(&(op.central_term() * &Scalar::from_int(d)));
        for (&((m, i), (n, j)), c) in op.quad_terms() {
            let step = self.apply_basis_mode(j, n)?.apply_basis_mode(i, m)?;
            out.add_scaled(&step, c)?;
        }
        for (&(n, i), c) in op.linear_terms() {
            out.add_scaled(&self.apply_basis_mode(i, n)?, c)?;
        }
        Ok(out)
    }

    /// The Virasoro operator `L_p` attached to a shift vector `A`:
    /// `(1/2) sum_n sum_{i,j} (G^{-1})_{ij} :gamma_{i,n} gamma_{j,p-n}:
    /// - (p+1) A_p`.
    ///
    /// Level zero supports only the `p = 0`, `A = 0` grading operator.
    pub fn virasoro(&self, p: i64, shift: &LatticeVector) -> Result<Self> {
        let d = self.lattice.rank();
        if shift.coeffs().len() != d {
            return Err(Error::RankMismatch { expected: d, got: shift.coeffs().len() });
        }
        match self.level {
            Level::Zero => {
                if p != 0 || !shift.is_zero() {
                    return Err(Error::LevelUnsupported(
                        "level zero exposes only the grading operator L_0 with zero shift",
                    ));
                }
                Ok(self.grading_action())
            }
            Level::One => {
                let conf = ConformalVector::new(self.lattice.clone(), shift.clone())?;
                self.apply_quadratic(&conf.operator(p, self.max_degree()))
            }
        }
    }

    /// Multiplies each monomial by its degree.
    pub fn grading_action(&self) -> Self {
        let mut out = Self::zero(self.lattice.clone(), self.level);
        for (mono, coeff) in &self.terms {
            let deg = mono.degree();
            if deg == 0 {
                continue;
            }
            out.terms.insert(mono.clone(), coeff * &Scalar::from_int(deg));
        }
        out
    }
}

impl core::fmt::Display for FockVector {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})")?;
            for &(n, i) in mono.factors() {
                write!(f, "*g[{},{}]", i + 1, n)?;
            }
            write!(f, "|0>")?;
        }
        Ok(())
    }
}

/// The conformal datum: a lattice and a shift vector `A`.  Its Virasoro
/// operators have central charge `d - 12 (A, A)`.
#[derive(Debug, Clone)]
pub struct ConformalVector {
    lattice: Arc<Lattice>,
    shift: LatticeVector,
}

impl ConformalVector {
    pub fn new(lattice: Arc<Lattice>, shift: LatticeVector) -> Result<Self> {
        if shift.coeffs().len() != lattice.rank() {
            return Err(Error::RankMismatch {
                expected: lattice.rank(),
                got: shift.coeffs().len(),
            });
        }
        Ok(ConformalVector { lattice, shift })
    }

    pub fn shift(&self) -> &LatticeVector {
        &self.shift
    }

    pub fn central_charge(&self) -> Scalar {
        let d = Scalar::from_int(self.lattice.rank() as i64);
        let norm = self
            .lattice
            .pairing(&self.shift, &self.shift)
            .expect("shift validated at construction");
        &d - &(&norm * &Scalar::from_int(12))
    }

    /// Assembles `L_p` as a finite quadratic operator valid on every vector
    /// of degree at most `max_degree`: modes with `|n| <= max_degree + |p| + 1`
    /// exhaust all summands that can act nonzero there.
    pub fn operator(&self, p: i64, max_degree: i64) -> QuadraticOperator {
        let w = max_degree.max(0) + p.abs() + 1;
        let half = Scalar::ratio(1, 2);
        let mut op = QuadraticOperator::zero();
        for n in -w..=w {
            let pair = dual_quadratic(&self.lattice, n, p - n);
            op.add(&pair.scaled(&half));
        }
        op.add_linear_vector(&self.shift, p, &Scalar::from_int(-(p + 1)));
        op
    }
}

/// Dimensions of the degree-`n` components for `n = 0..=n_max`: coefficients
/// of `prod_{k >= 1} (1 - q^k)^{-d}`.
pub fn graded_dimensions(d: usize, n_max: i64) -> Vec<u64> {
    let n_max = n_max.max(0) as usize;
    let mut ways = alloc::vec![0u64; n_max + 1];
    ways[0] = 1;
    for k in 1..=n_max {
        for _ in 0..d {
            for n in k..=n_max {
                ways[n] += ways[n - k];
            }
        }
    }
    ways
}

/// All PBW monomials of degree at most `max_degree` over `d` basis
/// directions, sorted by degree then by monomial order.
pub fn pbw_basis(d: usize, max_degree: i64) -> Vec<PbwMonomial> {
    let mut out = Vec::new();
    let mut current: Vec<(i64, usize)> = Vec::new();
    // Factors are chosen in nondecreasing (mode, index) order so each sorted
    // multiset is produced exactly once.
    fn recurse(
        d: usize,
        remaining: i64,
        min_factor: (i64, usize),
        current: &mut Vec<(i64, usize)>,
        out: &mut Vec<PbwMonomial>,
    ) {
        out.push(PbwMonomial { factors: current.clone() });
        for m in -remaining..=-1 {
            for i in 0..d {
                if (m, i) < min_factor {
                    continue;
                }
                current.push((m, i));
                recurse(d, remaining + m, (m, i), current, out);
                current.pop();
            }
        }
    }
    recurse(d, max_degree.max(0), (i64::MIN, 0), &mut current, &mut out);
    out.sort_unstable_by_key(|m| (m.degree(), m.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use alloc::vec;

    fn a1() -> Arc<Lattice> {
        Lattice::preset("A1").unwrap()
    }

    fn mono(factors: &[(i64, usize)]) -> PbwMonomial {
        PbwMonomial::new(factors.to_vec()).unwrap()
    }

    #[test]
    fn creation_builds_sorted_monomials() {
        let v = FockVector::vacuum(a1(), Level::One)
            .apply_basis_mode(0, -1)
            .unwrap()
            .apply_basis_mode(0, -2)
            .unwrap();
        let terms: Vec<_> = v.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, &mono(&[(-2, 0), (-1, 0)]));
        assert_eq!(v.max_degree(), 3);
    }

    #[test]
    fn contraction_level_one_vs_level_zero() {
        for (level, expect_zero) in [(Level::One, false), (Level::Zero, true)] {
            let v = FockVector::vacuum(a1(), level).apply_basis_mode(0, -1).unwrap();
            let w = v.apply_basis_mode(0, 1).unwrap();
            if expect_zero {
                assert!(w.is_zero());
            } else {
                assert_eq!(w, FockVector::vacuum(a1(), level).scale(&Scalar::from_int(2)));
            }
        }
    }

    #[test]
    fn zero_mode_kills_at_both_levels() {
        for level in [Level::Zero, Level::One] {
            let v = FockVector::vacuum(a1(), level).apply_basis_mode(0, -3).unwrap();
            assert!(v.apply_basis_mode(0, 0).unwrap().is_zero());
        }
    }

    #[test]
    fn quadratic_creation_only() {
        let op = dual_quadratic(&a1(), -1, -1);
        let v = FockVector::vacuum(a1(), Level::One).apply_quadratic(&op).unwrap();
        let expected = FockVector::monomial(
            a1(),
            Level::One,
            mono(&[(-1, 0), (-1, 0)]),
            Scalar::ratio(1, 2),
        );
        assert_eq!(v, expected);
    }

    #[test]
    fn quadratic_contracts_with_multiplicity() {
        // (1/2) g_1 g_1 on g_{-1} g_{-1} |0>: the first contraction sees two
        // matching factors (2 + 2), the second sees one (2); (1/2)*4*2 = 4.
        let op = dual_quadratic(&a1(), 1, 1);
        let v = FockVector::monomial(a1(), Level::One, mono(&[(-1, 0), (-1, 0)]), Scalar::one());
        let out = v.apply_quadratic(&op).unwrap();
        assert_eq!(out, FockVector::vacuum(a1(), Level::One).scale(&Scalar::from_int(4)));
    }

    #[test]
    fn central_symbol_scales_by_rank() {
        let lat = Lattice::preset("A2").unwrap();
        let op = QuadraticOperator::central(Scalar::one());
        let v = FockVector::vacuum(lat.clone(), Level::One)
            .apply_basis_mode(1, -2)
            .unwrap();
        let out = v.apply_quadratic(&op).unwrap();
        assert_eq!(out, v.scale(&Scalar::from_int(2)));
    }

    #[test]
    fn virasoro_grading_eigenvalues() {
        for name in ["A1", "A2"] {
            let lat = Lattice::preset(name).unwrap();
            let zero_shift = LatticeVector::zero(lat.rank());
            for m in pbw_basis(lat.rank(), 4) {
                let deg = m.degree();
                let v = FockVector::monomial(lat.clone(), Level::One, m, Scalar::one());
                let lv = v.virasoro(0, &zero_shift).unwrap();
                assert_eq!(lv, v.scale(&Scalar::from_int(deg)));
            }
        }
    }

    #[test]
    fn virasoro_commutator_on_vacuum() {
        // [L_2, L_{-2}] |0> = 4 L_0 |0> + (1/12)(8-2) c |0> = (1/2)|0> for
        // rank one with zero shift (c = 1).
        let lat = a1();
        let shift = LatticeVector::zero(1);
        let vac = FockVector::vacuum(lat.clone(), Level::One);
        let a = vac.virasoro(-2, &shift).unwrap().virasoro(2, &shift).unwrap();
        let b = vac.virasoro(2, &shift).unwrap().virasoro(-2, &shift).unwrap();
        let comm = a.sub(&b).unwrap();
        assert_eq!(comm, vac.scale(&Scalar::ratio(1, 2)));
    }

    #[test]
    fn virasoro_lowering_kills_vacuum() {
        let vac = FockVector::vacuum(a1(), Level::One);
        assert!(vac.virasoro(-1, &LatticeVector::zero(1)).unwrap().is_zero());
    }

    #[test]
    fn virasoro_shift_term() {
        // L_{-2} |0> with shift A = gamma_1 on the rank-one lattice:
        // (1/4) g_{-1} g_{-1} |0> + g_{-2} |0>.
        let lat = a1();
        let shift = lat.basis_vector(0);
        let vac = FockVector::vacuum(lat.clone(), Level::One);
        let out = vac.virasoro(-2, &shift).unwrap();
        let mut expected = FockVector::monomial(
            lat.clone(),
            Level::One,
            mono(&[(-1, 0), (-1, 0)]),
            Scalar::ratio(1, 4),
        );
        expected
            .add_scaled(
                &FockVector::monomial(lat, Level::One, mono(&[(-2, 0)]), Scalar::one()),
                &Scalar::one(),
            )
            .unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn level_zero_virasoro_is_grading_only() {
        let lat = a1();
        let v = FockVector::vacuum(lat.clone(), Level::Zero)
            .apply_basis_mode(0, -3)
            .unwrap();
        let zero_shift = LatticeVector::zero(1);
        assert_eq!(v.virasoro(0, &zero_shift).unwrap(), v.scale(&Scalar::from_int(3)));
        assert_eq!(
            v.virasoro(1, &zero_shift).unwrap_err(),
            Error::LevelUnsupported(
                "level zero exposes only the grading operator L_0 with zero shift"
            )
        );
        assert!(v.apply_quadratic(&dual_quadratic(&a1(), 1, -1)).is_err());
    }

    #[test]
    fn central_charge_values() {
        let lat = a1();
        let c0 = ConformalVector::new(lat.clone(), LatticeVector::zero(1))
            .unwrap()
            .central_charge();
        assert_eq!(c0, Scalar::one());
        let c1 = ConformalVector::new(lat.clone(), lat.basis_vector(0))
            .unwrap()
            .central_charge();
        assert_eq!(c1, Scalar::from_int(1 - 24));
    }

    #[test]
    fn graded_dimensions_match_enumeration() {
        assert_eq!(graded_dimensions(1, 6), vec![1, 1, 2, 3, 5, 7, 11]);
        assert_eq!(graded_dimensions(2, 3), vec![1, 2, 5, 10]);
        for d in 1..=3 {
            let basis = pbw_basis(d, 8);
            let dims = graded_dimensions(d, 8);
            for (n, &dim) in dims.iter().enumerate() {
                let count = basis.iter().filter(|m| m.degree() == n as i64).count();
                assert_eq!(count as u64, dim, "d={d} n={n}");
            }
        }
    }

    #[test]
    fn apply_element_respects_truncation() {
        let lat = a1();
        let v = FockVector::vacuum(lat.clone(), Level::One)
            .apply_basis_mode(0, -3)
            .unwrap();
        let f = LaurentPoly::from_terms(vec![(-2, Scalar::one())], Some(2)).unwrap();
        assert_eq!(
            v.apply_element(0, &f).unwrap_err(),
            Error::TruncationInsufficient { needed: 3, have: 2 }
        );
        let g = LaurentPoly::from_terms(vec![(-2, Scalar::one())], Some(3)).unwrap();
        let out = v.apply_element(0, &g).unwrap();
        assert_eq!(out.max_degree(), 5);
        // Level zero ignores the positive tail entirely.
        let v0 = FockVector::vacuum(lat, Level::Zero).apply_basis_mode(0, -3).unwrap();
        assert!(v0.apply_element(0, &f).is_ok());
    }

    #[test]
    fn mode_action_matches_bracket() {
        use crate::lattice::mode_bracket;
        let lat = Lattice::preset("A2").unwrap();
        let a = Mode::new(lat.basis_vector(0), 2);
        let b = Mode::new(lat.basis_vector(1), -2);
        let v = FockVector::vacuum(lat.clone(), Level::One)
            .apply_basis_mode(0, -1)
            .unwrap();
        let ab = v.apply_mode(&b).unwrap().apply_mode(&a).unwrap();
        let ba = v.apply_mode(&a).unwrap().apply_mode(&b).unwrap();
        let comm = ab.sub(&ba).unwrap();
        let expected = v.scale(&mode_bracket(&lat, &a, &b).unwrap());
        assert_eq!(comm, expected);
    }
}

//! Truncated bases of outgoing subspaces: spans of Laurent polynomials with
//! poles, closed under nothing but carrying the data every downstream
//! computation needs — a canonical reduced echelon basis keyed by exponent,
//! the attained pole orders, and the gap set.
//!
//! The residue pairing must vanish on any two members (isotropy); the report
//! distinguishes exact zeros from pairs the truncation cannot decide.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::laurent::{residue_pairing, LaurentPoly};
use crate::linalg::{Echelon, SparseVec};
use crate::scalar::Scalar;

/// Where an outgoing basis came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutgoingSource {
    Ppav,
    Curve,
}

/// Status of one residue pairing between basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairStatus {
    Zero,
    NonZero(Scalar),
    Undetermined { needed: i64, have: i64 },
}

/// Pairwise residue pairings over an outgoing basis.
#[derive(Debug, Clone)]
pub struct IsotropyReport {
    pub pairs: Vec<(usize, usize, PairStatus)>,
}

impl IsotropyReport {
    pub fn passes(&self) -> bool {
        self.pairs.iter().all(|(_, _, s)| *s == PairStatus::Zero)
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize, &Scalar)> {
        self.pairs.iter().find_map(|(i, j, s)| match s {
            PairStatus::NonZero(v) => Some((*i, *j, v)),
            _ => None,
        })
    }

    pub fn any_undetermined(&self) -> bool {
        self.pairs
            .iter()
            .any(|(_, _, s)| matches!(s, PairStatus::Undetermined { .. }))
    }
}

/// A reduced echelon basis of an outgoing span, with pole-order bookkeeping.
///
/// Rows are sorted by pole order ascending, each monic at its pole, and every
/// pole order appears in at most one row; `gap_set` lists the orders in
/// `[1, max_pole]` attained by no row.
#[derive(Debug, Clone)]
pub struct OutgoingLattice {
    basis: Vec<LaurentPoly>,
    gap_set: BTreeSet<i64>,
    max_pole: i64,
    trunc: Option<i64>,
    expected_gaps: usize,
    source: OutgoingSource,
}

impl OutgoingLattice {
    /// Echelonizes arbitrary spanning vectors into the canonical basis.
    ///
    /// Constant terms are projected out first (the ambient space is Laurent
    /// polynomials modulo constants); a vector surviving with no pole cannot
    /// belong to an outgoing span and is rejected.
    pub fn from_basis(
        vectors: Vec<LaurentPoly>,
        max_pole: i64,
        expected_gaps: usize,
        source: OutgoingSource,
    ) -> Result<Self> {
        if max_pole < 1 {
            return Err(Error::InvalidGenerator(String::from(
                "outgoing spans need max_pole >= 1",
            )));
        }
        let mut trunc: Option<i64> = None;
        for v in &vectors {
            if let Some(t) = v.trunc() {
                trunc = Some(trunc.map_or(t, |cur: i64| cur.min(t)));
            }
        }
        let mut ech: Echelon<i64> = Echelon::new();
        for v in &vectors {
            let v = v.drop_constant();
            if v.is_zero() {
                continue;
            }
            ech.insert(SparseVec::from_entries(
                v.terms().map(|(e, c)| (e, c.clone())),
            ));
        }
        let mut basis = Vec::new();
        for row in ech.into_reduced_rows() {
            let (&pivot, _) = row.leading().expect("echelon rows are nonzero");
            if pivot >= 0 {
                return Err(Error::InvalidGenerator(String::from(
                    "outgoing span contains a member without a pole",
                )));
            }
            // Inputs may carry different windows; the span is only known
            // through the narrowest of them.
            let entries: Vec<(i64, Scalar)> = row
                .into_entries()
                .into_iter()
                .filter(|(e, _)| trunc.map_or(true, |t| *e <= t))
                .collect();
            basis.push(LaurentPoly::from_terms(entries, trunc)?);
        }
        // Reduced rows arrive sorted by pivot exponent ascending, i.e. by
        // pole order descending; flip to pole ascending.
        basis.reverse();
        let poles: BTreeSet<i64> = basis.iter().map(|b| b.pole_order()).collect();
        let gap_set = (1..=max_pole).filter(|p| !poles.contains(p)).collect();
        Ok(OutgoingLattice { basis, gap_set, max_pole, trunc, expected_gaps, source })
    }

    pub fn basis(&self) -> &[LaurentPoly] {
        &self.basis
    }

    pub fn gap_set(&self) -> &BTreeSet<i64> {
        &self.gap_set
    }

    pub fn max_pole(&self) -> i64 {
        self.max_pole
    }

    pub fn trunc(&self) -> Option<i64> {
        self.trunc
    }

    pub fn expected_gaps(&self) -> usize {
        self.expected_gaps
    }

    pub fn source(&self) -> OutgoingSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Attained pole orders, ascending.
    pub fn poles(&self) -> Vec<i64> {
        self.basis.iter().map(|b| b.pole_order()).collect()
    }

    /// Two outgoing spans are equal iff their reduced bases coincide
    /// coefficient-for-coefficient (truncation tags are not compared).
    pub fn span_equal(&self, other: &Self) -> bool {
        self.basis.len() == other.basis.len()
            && self
                .basis
                .iter()
                .zip(&other.basis)
                .all(|(a, b)| a.terms().eq(b.terms()))
    }

    /// Residue pairings of every unordered basis pair (including diagonal).
    pub fn isotropy_report(&self) -> IsotropyReport {
        let mut pairs = Vec::new();
        for i in 0..self.basis.len() {
            for j in i..self.basis.len() {
                let status = match residue_pairing(&self.basis[i], &self.basis[j]) {
                    Ok(s) => {
                        if s.is_zero() {
                            PairStatus::Zero
                        } else {
                            PairStatus::NonZero(s)
                        }
                    }
                    Err(Error::TruncationInsufficient { needed, have }) => {
                        PairStatus::Undetermined { needed, have }
                    }
                    Err(_) => unreachable!("residue pairing only fails on truncation"),
                };
                pairs.push((i, j, status));
            }
        }
        IsotropyReport { pairs }
    }
}

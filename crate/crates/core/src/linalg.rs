//! Exact linear algebra over [`Scalar`]: a sparse online row echelon keyed by
//! an arbitrary ordered column type, and small dense routines (inverse,
//! kernel, positivity of leading minors).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// A sparse vector: entries sorted by column key, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<K: Ord> {
    entries: Vec<(K, Scalar)>,
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn from_entries<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut map: BTreeMap<K, Scalar> = BTreeMap::new();
        for (k, c) in iter {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(k.clone()).or_insert_with(Scalar::zero);
            *entry += &c;
            if entry.is_zero() {
                map.remove(&k);
            }
        }
        SparseVec { entries: map.into_iter().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn leading(&self) -> Option<(&K, &Scalar)> {
        self.entries.first().map(|(k, c)| (k, c))
    }

    pub fn entries(&self) -> &[(K, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(K, Scalar)> {
        self.entries
    }

    pub fn scale(&mut self, c: &Scalar) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in &mut self.entries {
            *v = &*v * c;
        }
    }

    /// `self - c * other`, merging sorted entry lists.
    pub fn sub_scaled(&self, other: &Self, c: &Scalar) -> Self {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = self.entries.iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((ka, _)), Some((kb, _))) => {
                    if ka < kb {
                        let (k, v) = a.next().unwrap();
                        out.push((k.clone(), v.clone()));
                    } else if kb < ka {
                        let (k, v) = b.next().unwrap();
                        out.push((k.clone(), -&(v * c)));
                    } else {
                        let (k, va) = a.next().unwrap();
                        let (_, vb) = b.next().unwrap();
                        let v = va - &(vb * c);
                        if !v.is_zero() {
                            out.push((k.clone(), v));
                        }
                    }
                }
                (Some(_), None) => {
                    let (k, v) = a.next().unwrap();
                    out.push((k.clone(), v.clone()));
                }
                (None, Some(_)) => {
                    let (k, v) = b.next().unwrap();
                    out.push((k.clone(), -&(v * c)));
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }
}

impl<K: Ord + Clone> Default for SparseVec<K> {
    fn default() -> Self {
        Self::new()
    }
}

/// An online row echelon basis: rows are normalized to leading coefficient 1
/// and have pairwise distinct leading columns. Insertion order is the only
/// source of nondeterminism, so driving it deterministically yields
/// reproducible pivots.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<SparseVec<K>>,
    pivot_of: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new(), pivot_of: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.pivot_of.keys()
    }

    pub fn rows(&self) -> &[SparseVec<K>] {
        &self.rows
    }

    /// Inserts a vector, reducing it against the current rows. Returns the
    /// new pivot column when the rank grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> Option<K> {
        let mut v = v;
        loop {
            let Some((k, c)) = v.leading().map(|(k, c)| (k.clone(), c.clone())) else {
                return None;
            };
            match self.pivot_of.get(&k) {
                Some(&ri) => {
                    v = v.sub_scaled(&self.rows[ri], &c);
                }
                None => {
                    let inv = c.inv().expect("leading coefficient is nonzero");
                    v.scale(&inv);
                    self.pivot_of.insert(k.clone(), self.rows.len());
                    self.rows.push(v);
                    return Some(k);
                }
            }
        }
    }

    /// Fully reduces `v` against every pivot, producing the canonical
    /// representative supported on non-pivot columns.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut pending: BTreeMap<K, Scalar> = v.entries().iter().cloned().collect();
        let mut out: Vec<(K, Scalar)> = Vec::new();
        while let Some((k, c)) = pending.pop_first() {
            if c.is_zero() {
                continue;
            }
            match self.pivot_of.get(&k) {
                Some(&ri) => {
                    for (rk, rv) in self.rows[ri].entries().iter().skip(1) {
                        let entry = pending.entry(rk.clone()).or_insert_with(Scalar::zero);
                        *entry -= &(&c * rv);
                        if entry.is_zero() {
                            pending.remove(rk);
                        }
                    }
                }
                None => out.push((k, c)),
            }
        }
        SparseVec { entries: out }
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Back-substitutes so every row is also zero at the other pivots, then
    /// returns the rows sorted by pivot column: the unique reduced echelon
    /// basis of the span.
    pub fn into_reduced_rows(self) -> Vec<SparseVec<K>> {
        let mut order: Vec<(K, usize)> = self.pivot_of.iter().map(|(k, i)| (k.clone(), *i)).collect();
        let mut rows = self.rows;
        // Largest pivot first: its row cannot contain other pivots' columns
        // after reduction, so smaller pivots may reuse it directly.
        for idx in (0..order.len()).rev() {
            let (_, ri) = &order[idx];
            let mut row = rows[*ri].clone();
            for (ok, oi) in order.iter().skip(idx + 1) {
                if let Some(pos) = row.entries.iter().position(|(k, _)| k == ok) {
                    let c = row.entries[pos].1.clone();
                    row = row.sub_scaled(&rows[*oi], &c);
                }
            }
            rows[*ri] = row;
        }
        let mut out = Vec::with_capacity(order.len());
        for (_, ri) in order.drain(..) {
            out.push(core::mem::take(&mut rows[ri].entries));
        }
        out.into_iter().map(|entries| SparseVec { entries }).collect()
    }
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self::new()
    }
}

/// Inverts a square matrix by Gauss-Jordan elimination.
pub fn invert(m: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare);
    }
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Err(Error::SingularFactor);
        };
        a.swap(col, pr);
        inv.swap(col, pr);
        let c = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &c;
            inv[col][j] = &inv[col][j] * &c;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
            }
        }
    }
    Ok(inv)
}

/// Row rank of a rectangular matrix.
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut ech: Echelon<usize> = Echelon::new();
    for row in rows {
        ech.insert(SparseVec::from_entries(row.iter().cloned().enumerate()));
    }
    ech.rank()
}

/// A basis of the right kernel `{x : rows * x = 0}` for a matrix given by
/// rows of length `ncols`. Deterministic: one vector per free column, in
/// ascending column order, with unit coordinate at its free column.
pub fn kernel_basis(rows: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut ech: Echelon<usize> = Echelon::new();
    for row in rows {
        debug_assert_eq!(row.len(), ncols);
        ech.insert(SparseVec::from_entries(row.iter().cloned().enumerate()));
    }
    let reduced = ech.into_reduced_rows();
    let pivot_cols: Vec<usize> = reduced
        .iter()
        .map(|r| *r.leading().expect("reduced rows are nonzero").0)
        .collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut x = alloc::vec![Scalar::zero(); ncols];
        x[free] = Scalar::one();
        for (row, &pc) in reduced.iter().zip(&pivot_cols) {
            for (k, c) in row.entries() {
                if *k == free {
                    x[pc] = -c;
                }
            }
        }
        basis.push(x);
    }
    basis
}

/// Sylvester's criterion: every leading principal minor is positive.
pub fn leading_minors_positive(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return false;
    }
    for k in 1..=n {
        let mut sub: Vec<Vec<Rational>> = (0..k).map(|i| m[i][..k].to_vec()).collect();
        // Fractional Gaussian elimination; the determinant is the product of
        // the pivots times the sign of the row swaps.
        let mut det = Rational::from_integer(1.into());
        let mut ok = true;
        for col in 0..k {
            let Some(pr) = (col..k).find(|&r| !num_traits::Zero::is_zero(&sub[r][col])) else {
                ok = false;
                break;
            };
            if pr != col {
                sub.swap(col, pr);
                det = -det;
            }
            det *= &sub[col][col];
            for r in col + 1..k {
                let f = &sub[r][col] / &sub[col][col];
                for j in col..k {
                    let v = &sub[r][j] - &(&f * &sub[col][j]);
                    sub[r][j] = v;
                }
            }
        }
        if !ok || !det.is_positive() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e: Echelon<usize> = Echelon::new();
        e.insert(SparseVec::from_entries([(0, s(1)), (1, s(2))]));
        e.insert(SparseVec::from_entries([(1, s(1)), (2, s(1))]));
        e.insert(SparseVec::from_entries([(0, s(1)), (1, s(1)), (2, s(-1))]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&SparseVec::from_entries([(0, s(2)), (1, s(5)), (2, s(1))])));
        assert!(!e.contains(&SparseVec::from_entries([(2, s(1))])));
    }

    #[test]
    fn reduced_rows_are_canonical() {
        let mut a: Echelon<usize> = Echelon::new();
        let mut b: Echelon<usize> = Echelon::new();
        let v1 = SparseVec::from_entries([(0, s(1)), (2, s(3))]);
        let v2 = SparseVec::from_entries([(1, s(2)), (2, s(2))]);
        a.insert(v1.clone());
        a.insert(v2.clone());
        b.insert(v1.sub_scaled(&v2, &s(-2)));
        b.insert(v2.sub_scaled(&v1, &s(5)));
        assert_eq!(a.into_reduced_rows(), b.into_reduced_rows());
    }

    #[test]
    fn inverse_of_gram_like_matrix() {
        let m = vec![vec![s(2), s(-1)], vec![s(-1), s(2)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0][0], Scalar::ratio(2, 3));
        assert_eq!(inv[0][1], Scalar::ratio(1, 3));
        assert_eq!(inv[1][1], Scalar::ratio(2, 3));
        assert!(invert(&vec![vec![s(1), s(2)], vec![s(2), s(4)]]).is_err());
    }

    #[test]
    fn kernel_of_single_form() {
        // x0 + 2 x1 = 0 on 3 coordinates.
        let rows = vec![vec![s(1), s(2), s(0)]];
        let k = kernel_basis(&rows, 3);
        assert_eq!(k.len(), 2);
        for x in &k {
            let lhs = &(&rows[0][0] * &x[0]) + &(&(&rows[0][1] * &x[1]) + &(&rows[0][2] * &x[2]));
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn minors_positive() {
        let q = |n: i64| Rational::from_integer(n.into());
        assert!(leading_minors_positive(&[vec![q(2), q(-1)], vec![q(-1), q(2)]]));
        assert!(!leading_minors_positive(&[vec![q(0), q(1)], vec![q(1), q(0)]]));
        assert!(!leading_minors_positive(&[vec![q(1), q(2)], vec![q(2), q(1)]]));
    }
}

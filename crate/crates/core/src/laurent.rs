//! Truncated Laurent polynomials over exact scalars.
//!
//! A value represents an element of `K((t))` whose coefficients are known
//! exactly for every exponent up to its truncation order; `trunc == None`
//! means the element is an exact Laurent polynomial (all higher coefficients
//! are exactly zero). Arithmetic propagates truncation orders conservatively,
//! so a coefficient is stored only when it is fully determined, and the
//! residue pairing refuses to answer rather than return a possibly-wrong
//! value.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A Laurent polynomial with truncation-order bookkeeping.
///
/// Invariants: no stored coefficient is zero, and every stored exponent is
/// `<= trunc` when the truncation order is finite.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Scalar>,
    trunc: Option<i64>,
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl LaurentPoly {
    /// The exact zero (known to all orders).
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new(), trunc: None }
    }

    /// Zero as far as known, with unknown coefficients past `n`.
    pub fn zero_to(n: i64) -> Self {
        LaurentPoly { terms: BTreeMap::new(), trunc: Some(n) }
    }

    /// The exact monomial `c * t^exp`.
    pub fn monomial(exp: i64, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms, trunc: None }
    }

    /// The basis vector `t^i`.
    pub fn basis(i: i64) -> Self {
        Self::monomial(i, Scalar::one())
    }

    pub fn from_terms<I>(terms: I, trunc: Option<i64>) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Scalar)>,
    {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if let Some(n) = trunc {
                if e > n {
                    return Err(Error::TruncationInsufficient { needed: e, have: n });
                }
            }
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(e).or_insert_with(Scalar::zero);
            *entry += &c;
            if entry.is_zero() {
                map.remove(&e);
            }
        }
        Ok(LaurentPoly { terms: map, trunc })
    }

    pub fn trunc(&self) -> Option<i64> {
        self.trunc
    }

    /// True when no nonzero coefficient is known. An inexact value may still
    /// have nonzero coefficients past its truncation order.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Pole order: `-min_exp` when the lowest exponent is negative.
    pub fn pole_order(&self) -> i64 {
        self.min_exp().map_or(0, |e| (-e).max(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The stored coefficient, if any; `None` means zero-or-unknown.
    pub fn coeff(&self, e: i64) -> Option<&Scalar> {
        self.terms.get(&e)
    }

    /// The coefficient at `e`, failing loudly when it is past the truncation
    /// order and therefore unknown.
    pub fn known_coeff(&self, e: i64) -> Result<Scalar> {
        if let Some(n) = self.trunc {
            if e > n {
                return Err(Error::TruncationInsufficient { needed: e, have: n });
            }
        }
        Ok(self.terms.get(&e).cloned().unwrap_or_else(Scalar::zero))
    }

    fn clipped(mut self) -> Self {
        if let Some(n) = self.trunc {
            self.terms.retain(|e, _| *e <= n);
        }
        self
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let trunc = min_opt(self.trunc, rhs.trunc);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(*e).or_insert_with(Scalar::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        (LaurentPoly { terms, trunc }).clipped()
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            // An exact zero multiple annihilates even unknown coefficients.
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Product with conservative truncation: the result keeps a coefficient
    /// only when no unknown coefficient of either factor can reach it.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut bound: Option<i64> = None;
        if let Some(nf) = self.trunc {
            if let Some(mg) = rhs.min_exp() {
                bound = min_opt(bound, Some(nf + mg));
            }
            if let Some(ng) = rhs.trunc {
                bound = min_opt(bound, Some(nf + ng + 1));
            }
        }
        if let Some(ng) = rhs.trunc {
            if let Some(mf) = self.min_exp() {
                bound = min_opt(bound, Some(ng + mf));
            }
        }
        let mut terms: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.checked_add(*eb).expect("laurent exponent overflow");
                if let Some(n) = bound {
                    if e > n {
                        continue;
                    }
                }
                let entry = terms.entry(e).or_insert_with(Scalar::zero);
                *entry += &(ca * cb);
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        LaurentPoly { terms, trunc: bound }
    }

    /// Formal derivative `d/dt`; an unknown coefficient at order `N + 1`
    /// makes order `N` of the derivative unknown.
    pub fn derivative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| **e != 0)
            .map(|(e, c)| (*e - 1, c * &Scalar::from_int(*e)))
            .collect();
        LaurentPoly { terms, trunc: self.trunc.map(|n| n - 1) }
    }

    /// Multiplies by `t^k`, shifting every exponent and the truncation order.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            trunc: self.trunc.map(|n| n + k),
        }
    }

    /// Discards every coefficient above `n` and records the loss.
    pub fn truncate(&self, n: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().filter(|(e, _)| **e <= n).map(|(e, c)| (*e, c.clone())).collect(),
            trunc: Some(min_opt(self.trunc, Some(n)).unwrap()),
        }
    }

    /// Removes the exponent-zero term (projection along the constants).
    pub fn drop_constant(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&0);
        out
    }
}

/// The residue pairing `(f, g) -> -Res_{t=0} f dg`, i.e. minus the
/// coefficient of `t^{-1}` in `f * g'`. Errors when truncation makes that
/// coefficient indeterminate.
pub fn residue_pairing(f: &LaurentPoly, g: &LaurentPoly) -> Result<Scalar> {
    let p = f.mul(&g.derivative());
    if let Some(n) = p.trunc() {
        if n < -1 {
            return Err(Error::TruncationInsufficient { needed: -1, have: n });
        }
    }
    Ok(-&p.known_coeff(-1)?)
}

/// The square root of a series with constant term 1, computed through
/// order `n`. The input must have no negative exponents and must be known
/// through order `n`.
pub fn series_sqrt(u: &LaurentPoly, n: i64) -> Result<LaurentPoly> {
    if n < 0 {
        return Err(Error::BadLeadingTerm(String::from("negative expansion order")));
    }
    if let Some(e) = u.min_exp() {
        if e < 0 {
            return Err(Error::BadLeadingTerm(String::from("input has a pole")));
        }
    }
    if let Some(h) = u.trunc() {
        if h < n {
            return Err(Error::TruncationInsufficient { needed: n, have: h });
        }
    }
    if !u.known_coeff(0)?.is_one() {
        return Err(Error::BadLeadingTerm(String::from("constant term is not 1")));
    }
    let half = Scalar::ratio(1, 2);
    let mut v: Vec<Scalar> = Vec::with_capacity(n as usize + 1);
    v.push(Scalar::one());
    for k in 1..=n {
        let mut s = u.known_coeff(k)?;
        for j in 1..k {
            s -= &(&v[j as usize] * &v[(k - j) as usize]);
        }
        v.push(&s * &half);
    }
    LaurentPoly::from_terms(v.into_iter().enumerate().map(|(e, c)| (e as i64, c)), Some(n))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            for (idx, (e, c)) in self.terms.iter().enumerate() {
                if idx > 0 {
                    write!(f, " + ")?;
                }
                match e {
                    0 => write!(f, "({c})")?,
                    1 => write!(f, "({c})*t")?,
                    _ => write!(f, "({c})*t^{e}")?,
                }
            }
        }
        if let Some(n) = self.trunc {
            write!(f, " + O(t^{})", n + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

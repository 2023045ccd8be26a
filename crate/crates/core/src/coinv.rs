//! Coinvariant dimensions of Fock modules against an outgoing subspace.
//!
//! * the engine spans `(g_i (x) f) v` over an outgoing basis, all lattice
//!   directions, and PBW monomials up to a degree margin, echelonizes with
//!   columns ordered by descending degree, and reads every filtered
//!   dimension off the pivot degrees,
//! * stability is certified by recomputing at the next margin, with an
//!   optional doubling retry,
//! * an independent symmetric-algebra count predicts the commutative level,
//! * metric-dual quadratic generators are tested for preservation of the
//!   span and exponentiated where nilpotent.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::error::{Error, Result};
use crate::fock::{graded_dimensions, pbw_basis, FockVector, Level, PbwMonomial};
use crate::lattice::{dual_quadratic, Lattice};
use crate::linalg::{Echelon, SparseVec};
use crate::outgoing::OutgoingLattice;
use crate::scalar::Scalar;

/// Ceiling for the degree margin when retrying an unstable computation.
const MAX_M_DEG: i64 = 16;

/// Column key ordering PBW monomials by descending degree, so that each
/// `V_{<= n}` is spanned by a suffix of the column order and the pivots
/// inside it count its intersection with the span.
type ColKey = (Reverse<i64>, PbwMonomial);

/// Cutoffs steering a coinvariant computation: `m_pole` bounds the pole
/// order of the outgoing functions used, `m_deg` is the degree margin added
/// on top of the requested filtration degree, and `n_trunc` is the Laurent
/// truncation the outgoing data was extracted at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Margins {
    pub m_pole: i64,
    pub m_deg: i64,
    pub n_trunc: i64,
}

/// A coinvariant-dimension request: which module, against which outgoing
/// subspace, up to which filtration degree.
#[derive(Debug, Clone)]
pub struct CoinvariantProblem {
    pub lattice: Arc<Lattice>,
    pub level: Level,
    pub outgoing: OutgoingLattice,
    pub n_deg: i64,
    pub margins: Margins,
    pub auto_retry: bool,
}

/// Filtered dimensions `dim V_{<= n} / span` for `n = 0..=n_deg`, one
/// stability flag per degree, and the size of the spanning computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinvariantReport {
    pub filtered_dims: Vec<u64>,
    pub stabilized: Vec<bool>,
    pub generator_count: u64,
    pub rank: u64,
}

fn validate(problem: &CoinvariantProblem) -> Result<()> {
    let Margins { m_pole, m_deg, n_trunc } = problem.margins;
    if problem.n_deg < 0 {
        return Err(Error::MarginTooSmall(String::from("filtration degree must be nonnegative")));
    }
    if m_deg < 0 {
        return Err(Error::MarginTooSmall(String::from("degree margin must be nonnegative")));
    }
    if m_pole < problem.n_deg {
        return Err(Error::MarginTooSmall(alloc::format!(
            "pole cutoff {m_pole} must reach the filtration degree {}",
            problem.n_deg
        )));
    }
    if n_trunc < problem.n_deg + m_deg {
        return Err(Error::MarginTooSmall(alloc::format!(
            "truncation margin {n_trunc} is below n_deg + m_deg = {}",
            problem.n_deg + m_deg
        )));
    }
    if problem.outgoing.max_pole() < m_pole {
        return Err(Error::MarginTooSmall(alloc::format!(
            "outgoing data reaches pole order {}, but the pole cutoff is {m_pole}",
            problem.outgoing.max_pole()
        )));
    }
    Ok(())
}

/// At level one every mode up to the top generator degree can contract, so
/// the outgoing functions must be known at least that far.
fn check_trunc(problem: &CoinvariantProblem, v_deg: i64) -> Result<()> {
    if problem.level == Level::One {
        if let Some(have) = problem.outgoing.trunc() {
            if have < v_deg {
                return Err(Error::TruncationInsufficient { needed: v_deg, have });
            }
        }
    }
    Ok(())
}

fn to_sparse(v: &FockVector) -> SparseVec<ColKey> {
    SparseVec::from_entries(
        v.terms().map(|(mono, c)| ((Reverse(mono.degree()), mono.clone()), c.clone())),
    )
}

fn from_sparse(lattice: &Arc<Lattice>, level: Level, v: SparseVec<ColKey>) -> FockVector {
    let mut out = FockVector::zero(lattice.clone(), level);
    for ((_, mono), c) in v.into_entries() {
        let term = FockVector::monomial(lattice.clone(), level, mono, c);
        out.add_scaled(&term, &Scalar::one()).expect("terms share lattice and level");
    }
    out
}

/// Spans `(g_i (x) f) v` over the outgoing functions with pole order at
/// most `m_pole`, all lattice directions `i`, and PBW monomials `v` of
/// degree at most `v_deg`; returns the echelonized span and the number of
/// triples applied.
fn spanning_echelon(problem: &CoinvariantProblem, v_deg: i64) -> Result<(Echelon<ColKey>, u64)> {
    let d = problem.lattice.rank();
    let monos = pbw_basis(d, v_deg);
    let mut ech: Echelon<ColKey> = Echelon::new();
    let mut count = 0u64;
    for f in problem.outgoing.basis() {
        if f.pole_order() > problem.margins.m_pole {
            continue;
        }
        for i in 0..d {
            for mono in &monos {
                let v = FockVector::monomial(
                    problem.lattice.clone(),
                    problem.level,
                    mono.clone(),
                    Scalar::one(),
                );
                let w = v.apply_element(i, f)?;
                count += 1;
                if !w.is_zero() {
                    ech.insert(to_sparse(&w));
                }
            }
        }
    }
    Ok((ech, count))
}

/// Reads `dim V_{<= n} / span` for `n = 0..=n_deg` off the pivot degrees:
/// a pivot of degree `k` removes one dimension from every `V_{<= n}` with
/// `n >= k`, and pivots above `n_deg` never meet the window.
fn filtered_dims_from(ech: &Echelon<ColKey>, d: usize, n_deg: i64) -> Vec<u64> {
    let graded = graded_dimensions(d, n_deg);
    let mut removed = vec![0u64; (n_deg + 1) as usize];
    for key in ech.pivots() {
        let deg = key.0 .0;
        if deg <= n_deg {
            removed[deg as usize] += 1;
        }
    }
    let mut dims = Vec::with_capacity(removed.len());
    let mut ambient = 0u64;
    let mut cut = 0u64;
    for n in 0..removed.len() {
        ambient += graded[n];
        cut += removed[n];
        dims.push(ambient - cut);
    }
    dims
}

/// Filtered coinvariant dimensions with stability certification: the span
/// is recomputed with the degree margin raised by one, and a degree counts
/// as stabilized when both runs agree there.  With `auto_retry` the margin
/// doubles until every degree stabilizes or the ceiling is hit.
pub fn coinvariant_dims(problem: &CoinvariantProblem) -> Result<CoinvariantReport> {
    validate(problem)?;
    let d = problem.lattice.rank();
    let mut m_deg = problem.margins.m_deg;
    loop {
        check_trunc(problem, problem.n_deg + m_deg + 1)?;
        let (ech_lo, _) = spanning_echelon(problem, problem.n_deg + m_deg)?;
        let (ech_hi, count) = spanning_echelon(problem, problem.n_deg + m_deg + 1)?;
        let lo = filtered_dims_from(&ech_lo, d, problem.n_deg);
        let hi = filtered_dims_from(&ech_hi, d, problem.n_deg);
        let stabilized: Vec<bool> = lo.iter().zip(&hi).map(|(a, b)| a == b).collect();
        if stabilized.iter().all(|&s| s) {
            return Ok(CoinvariantReport {
                filtered_dims: hi,
                stabilized,
                generator_count: count,
                rank: ech_hi.rank() as u64,
            });
        }
        if !problem.auto_retry {
            return Err(Error::MarginTooSmall(alloc::format!(
                "dimensions did not stabilize at degree margin {m_deg}"
            )));
        }
        let next = (m_deg * 2).max(m_deg + 1);
        if next > MAX_M_DEG {
            return Err(Error::MarginTooSmall(alloc::format!(
                "dimensions still unstable at the degree-margin ceiling {MAX_M_DEG}"
            )));
        }
        m_deg = next;
    }
}

/// Independent prediction for the commutative level: the coinvariants form
/// a symmetric algebra with one generator of each gap degree per lattice
/// direction, so the filtered dimensions are partial sums of the
/// coefficients of `prod_{gaps k} (1 - q^k)^{-d}`.
///
/// Requires the gap set to have the cardinality promised by the source
/// (the genus); a truncation too shallow to exhibit every gap is refused
/// rather than silently mispredicted.
pub fn pi0_oracle(
    lattice: &Lattice,
    outgoing: &OutgoingLattice,
    n_deg: i64,
) -> Result<CoinvariantReport> {
    if n_deg < 0 {
        return Err(Error::MarginTooSmall(String::from("filtration degree must be nonnegative")));
    }
    let gaps = outgoing.gap_set();
    if gaps.len() != outgoing.expected_gaps() {
        return Err(Error::GapSetIncomplete {
            found: gaps.len(),
            expected: outgoing.expected_gaps(),
        });
    }
    let d = lattice.rank();
    let len = (n_deg + 1) as usize;
    let mut graded = vec![0u64; len];
    graded[0] = 1;
    for &gap in gaps {
        let gap = gap as usize;
        for _ in 0..d {
            // One forward pass of c[n] += c[n - gap] divides by (1 - q^gap).
            for n in gap..len {
                graded[n] += graded[n - gap];
            }
        }
    }
    let mut filtered = Vec::with_capacity(len);
    let mut cum = 0u64;
    for &h in &graded {
        cum += h;
        filtered.push(cum);
    }
    let ambient: u64 = graded_dimensions(d, n_deg).iter().sum();
    let rank = ambient - filtered[len - 1];
    let generator_count = (d as u64) * gaps.iter().filter(|&&g| g <= n_deg).count() as u64;
    Ok(CoinvariantReport {
        filtered_dims: filtered,
        stabilized: vec![true; len],
        generator_count,
        rank,
    })
}

/// One failed member of the preservation suite: the spanning generator
/// whose image escapes the span, and the escaping residue.
#[derive(Debug, Clone)]
pub struct PreserveFailure {
    pub label: String,
    pub residual: FockVector,
}

/// Result of testing whether a metric-dual quadratic generator maps the
/// outgoing span into itself member by member.
#[derive(Debug, Clone)]
pub struct PreserveReport {
    pub pair: (i64, i64),
    pub checked: u64,
    pub failures: Vec<PreserveFailure>,
}

impl PreserveReport {
    pub fn preserved(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Applies the metric-dual quadratic generator at modes `(m, n)` to every
/// spanning member `(g_i (x) f) v` with `deg v <= n_deg` and reduces the
/// image against the span recomputed with the degree margin enlarged by
/// `|m| + |n|`, so a nonzero residue is a genuine escape rather than a
/// margin artifact.
pub fn preserve_check(problem: &CoinvariantProblem, m: i64, n: i64) -> Result<PreserveReport> {
    if problem.level != Level::One {
        return Err(Error::LevelUnsupported("the preservation suite acts on the level-one module"));
    }
    if m < 0 && n < 0 {
        return Err(Error::InvalidGenerator(alloc::format!(
            "({m}, {n}): both modes are creation operators"
        )));
    }
    validate(problem)?;
    let ext_deg = problem.n_deg + problem.margins.m_deg + m.abs() + n.abs();
    check_trunc(problem, ext_deg)?;
    let x = dual_quadratic(&problem.lattice, m, n);
    let (span, _) = spanning_echelon(problem, ext_deg)?;
    let d = problem.lattice.rank();
    let monos = pbw_basis(d, problem.n_deg);
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for f in problem.outgoing.basis() {
        if f.pole_order() > problem.margins.m_pole {
            continue;
        }
        for i in 0..d {
            for mono in &monos {
                let v = FockVector::monomial(
                    problem.lattice.clone(),
                    problem.level,
                    mono.clone(),
                    Scalar::one(),
                );
                let s = v.apply_element(i, f)?;
                checked += 1;
                if s.is_zero() {
                    continue;
                }
                let image = s.apply_quadratic(&x)?;
                if image.is_zero() {
                    continue;
                }
                let residual = span.reduce(&to_sparse(&image));
                if !residual.is_zero() {
                    failures.push(PreserveFailure {
                        label: alloc::format!("g[{}] (x) ({f}) applied to {v}", i + 1),
                        residual: from_sparse(&problem.lattice, problem.level, residual),
                    });
                }
            }
        }
    }
    Ok(PreserveReport { pair: (m, n), checked, failures })
}

/// Outcome of a nilpotent exponential: the image vector and the number of
/// nonzero series terms, the identity term included.
#[derive(Debug, Clone)]
pub struct ExpOutcome {
    pub vector: FockVector,
    pub terms: u64,
}

/// Applies `exp(c X)` to a level-one vector, `X` the metric-dual quadratic
/// generator at modes `(m, n)`.  The pair must satisfy `m + n != 0` and may
/// not consist of two creation modes: each application of `X` then strictly
/// lowers either the total degree or the number of factors it can consume,
/// so the series terminates exactly.
pub fn exponentiate(m: i64, n: i64, c: &Scalar, v: &FockVector) -> Result<ExpOutcome> {
    if v.level() != Level::One {
        return Err(Error::LevelUnsupported("exponentials act on the level-one module"));
    }
    if m < 0 && n < 0 {
        return Err(Error::InvalidGenerator(alloc::format!(
            "({m}, {n}): both modes are creation operators, the series cannot terminate"
        )));
    }
    if m + n == 0 {
        return Err(Error::NotNilpotent);
    }
    let x = dual_quadratic(v.lattice(), m, n).scaled(c);
    let mut out = v.clone();
    let mut term = v.clone();
    let mut terms = 1u64;
    let mut k = 1i64;
    loop {
        let next = term.apply_quadratic(&x)?;
        if next.is_zero() {
            return Ok(ExpOutcome { vector: out, terms });
        }
        term = next.scale(&Scalar::ratio(1, k));
        out.add_scaled(&term, &Scalar::one())?;
        terms += 1;
        k += 1;
    }
}

/// Multiplies each PBW monomial by `lambda^k`, `k` the number of its
/// factors at mode `-|m|`: the diagonal flow attached to the grading-type
/// generator pairing modes `m` and `-m`, evaluated at eigenvalue `lambda`
/// per factor.
pub fn scale_by_eigenvalue(m: i64, lambda: &Scalar, v: &FockVector) -> Result<FockVector> {
    if m == 0 {
        return Err(Error::InvalidGenerator(String::from(
            "eigenvalue scaling needs a nonzero mode",
        )));
    }
    let target = -m.abs();
    let mut out = FockVector::zero(v.lattice().clone(), v.level());
    for (mono, c) in v.terms() {
        let k = mono.factors().iter().filter(|&&(mode, _)| mode == target).count() as u64;
        let term = FockVector::monomial(
            v.lattice().clone(),
            v.level(),
            mono.clone(),
            c * &lambda.pow(k),
        );
        out.add_scaled(&term, &Scalar::one())?;
    }
    Ok(out)
}

/// A fixed spanning echelon for one problem, supporting reduction to
/// canonical representatives and exponential flows on the quotient.
#[derive(Debug, Clone)]
pub struct CoinvariantSpace {
    lattice: Arc<Lattice>,
    level: Level,
    span: Echelon<ColKey>,
    generator_count: u64,
}

impl CoinvariantSpace {
    /// Builds the span at the problem's own margins, with no stabilization
    /// sweep; certify the margins through `coinvariant_dims` first when the
    /// dimensions themselves matter.
    pub fn new(problem: &CoinvariantProblem) -> Result<Self> {
        validate(problem)?;
        let v_deg = problem.n_deg + problem.margins.m_deg;
        check_trunc(problem, v_deg)?;
        let (span, generator_count) = spanning_echelon(problem, v_deg)?;
        Ok(CoinvariantSpace {
            lattice: problem.lattice.clone(),
            level: problem.level,
            span,
            generator_count,
        })
    }

    pub fn generator_count(&self) -> u64 {
        self.generator_count
    }

    pub fn rank(&self) -> usize {
        self.span.rank()
    }

    /// Canonical representative of `v` modulo the span.
    pub fn reduce(&self, v: &FockVector) -> FockVector {
        from_sparse(&self.lattice, self.level, self.span.reduce(&to_sparse(v)))
    }

    /// `exp(c X) v` followed by reduction, `X` the metric-dual quadratic
    /// generator at modes `(m, n)`.
    pub fn exp_on_coinvariants(
        &self,
        m: i64,
        n: i64,
        c: &Scalar,
        v: &FockVector,
    ) -> Result<FockVector> {
        let flowed = exponentiate(m, n, c, v)?;
        Ok(self.reduce(&flowed.vector))
    }
}

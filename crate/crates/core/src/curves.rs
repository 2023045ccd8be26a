//! Hyperelliptic curves `y^2 = f(x)` with a marked point at infinity and the
//! exact local coordinate in which `x = t^{-2}`.
//!
//! With `f` monic of odd degree `2g+1`, the function field has the basis
//! `{x^a, x^a y}` away from infinity; `x^a` expands to the pure monomial
//! `t^{-2a}` and `x^a y` to `t^{-(2a+2g+1)}` times a square-root unit.  Every
//! pole order is attained exactly once, so the outgoing basis and its gap
//! set (the Weierstrass gaps) fall out of echelonization.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::laurent::{series_sqrt, LaurentPoly};
use crate::outgoing::{OutgoingLattice, OutgoingSource};
use crate::scalar::Scalar;

/// A smooth hyperelliptic curve `y^2 = f(x)`, `f` monic squarefree of degree
/// `2g+1`, together with genus bookkeeping.
#[derive(Debug, Clone)]
pub struct HyperellipticCurve {
    genus: usize,
    /// Coefficients of `f`, ascending; length `2g+2`, last entry 1.
    f_coeffs: Vec<Scalar>,
}

impl HyperellipticCurve {
    pub fn new(genus: usize, f_coeffs: Vec<Scalar>) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidCurve(String::from("genus must be >= 1")));
        }
        let deg = 2 * genus + 1;
        if f_coeffs.len() != deg + 1 {
            return Err(Error::InvalidCurve(alloc::format!(
                "f must have degree {deg}: expected {} coefficients, got {}",
                deg + 1,
                f_coeffs.len()
            )));
        }
        if !f_coeffs[deg].is_one() {
            return Err(Error::InvalidCurve(String::from("f must be monic")));
        }
        if f_coeffs.iter().any(|c| !c.is_real()) {
            return Err(Error::InvalidCurve(String::from("f must have rational coefficients")));
        }
        if poly_gcd_degree(&f_coeffs) > 0 {
            return Err(Error::InvalidCurve(String::from("f is not squarefree")));
        }
        Ok(HyperellipticCurve { genus, f_coeffs })
    }

    /// Named curves: `elliptic-j0` is `y^2 = x^3 + 1`, `genus2-bolza-like`
    /// is `y^2 = x^5 + 1`.
    pub fn preset(name: &str) -> Result<Self> {
        let (genus, coeffs): (usize, Vec<i64>) = match name {
            "elliptic-j0" => (1, alloc::vec![1, 0, 0, 1]),
            "genus2-bolza-like" => (2, alloc::vec![1, 0, 0, 0, 0, 1]),
            _ => {
                return Err(Error::Parse(alloc::format!("unknown curve preset {name:?}")));
            }
        };
        Self::new(genus, coeffs.into_iter().map(Scalar::from_int).collect())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Coefficients of `f`, ascending.
    pub fn f_coeffs(&self) -> &[Scalar] {
        &self.f_coeffs
    }

    /// The expansion of `y` itself: `t^{-(2g+1)}` times the square root of
    /// the unit `t^{2(2g+1)} f(t^{-2})`, known through exponent `n_trunc`.
    pub fn branch_series(&self, n_trunc: i64) -> Result<LaurentPoly> {
        let w = 2 * self.genus as i64 + 1;
        // u = t^{2w} f(t^{-2}) = sum_k f_k t^{2(w-k)}: constant term f_w = 1.
        let terms: Vec<(i64, Scalar)> = self
            .f_coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| (2 * (w - k as i64), c.clone()))
            .collect();
        let u = LaurentPoly::from_terms(terms, None)?;
        let root = series_sqrt(&u, n_trunc + w)?;
        Ok(root.shift(-w))
    }

    /// Expansion of `x^a` (pure monomial) or `x^a y`, known through
    /// exponent `n_trunc`.
    pub fn expand_monomial(&self, a: u32, with_y: bool, n_trunc: i64) -> Result<LaurentPoly> {
        let xa = LaurentPoly::basis(-2 * a as i64);
        if !with_y {
            return Ok(xa);
        }
        let y = self.branch_series(n_trunc + 2 * a as i64)?;
        Ok(y.shift(-2 * a as i64))
    }

    /// All function expansions with pole order at most `max_pole`, labeled,
    /// sorted by pole order.
    pub fn expansions(&self, max_pole: i64, n_trunc: i64) -> Result<Vec<(String, LaurentPoly)>> {
        let w = 2 * self.genus as i64 + 1;
        let mut out: Vec<(String, LaurentPoly)> = Vec::new();
        let mut a = 1i64;
        while 2 * a <= max_pole {
            out.push((monomial_label(a, false), self.expand_monomial(a as u32, false, n_trunc)?));
            a += 1;
        }
        let mut a = 0i64;
        while 2 * a + w <= max_pole {
            out.push((monomial_label(a, true), self.expand_monomial(a as u32, true, n_trunc)?));
            a += 1;
        }
        out.sort_by_key(|(_, p)| p.pole_order());
        Ok(out)
    }

    /// The outgoing span of the curve: the expansion image of the functions
    /// regular away from infinity, echelonized, constants dropped.
    pub fn outgoing(&self, max_pole: i64, n_trunc: i64) -> Result<OutgoingLattice> {
        let vectors = self
            .expansions(max_pole, n_trunc)?
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        OutgoingLattice::from_basis(vectors, max_pole, self.genus, OutgoingSource::Curve)
    }
}

fn monomial_label(a: i64, with_y: bool) -> String {
    match (a, with_y) {
        (0, true) => String::from("y"),
        (1, false) => String::from("x"),
        (1, true) => String::from("x*y"),
        (_, false) => alloc::format!("x^{a}"),
        (_, true) => alloc::format!("x^{a}*y"),
    }
}

/// Degree of gcd(f, f') for a dense polynomial (ascending coefficients).
fn poly_gcd_degree(f: &[Scalar]) -> usize {
    let fp: Vec<Scalar> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &Scalar::from_int(k as i64))
        .collect();
    let mut a = trim(f.to_vec());
    let mut b = trim(fp);
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

fn trim(mut v: Vec<Scalar>) -> Vec<Scalar> {
    while v.last().map_or(false, Scalar::is_zero) {
        v.pop();
    }
    v
}

/// Remainder of dense polynomial division (ascending coefficients).
fn poly_rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let q = r[dr].div(lead).expect("leading coefficient is nonzero");
        for k in 0..=db {
            let v = &r[dr - db + k] - &(&q * &b[k]);
            r[dr - db + k] = v;
        }
        r = trim(r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn presets_and_validation() {
        assert_eq!(HyperellipticCurve::preset("elliptic-j0").unwrap().genus(), 1);
        assert_eq!(HyperellipticCurve::preset("genus2-bolza-like").unwrap().genus(), 2);
        assert!(HyperellipticCurve::preset("nope").is_err());

        // x^3 is not squarefree.
        let cube = HyperellipticCurve::new(1, vec![s(0), s(0), s(0), s(1)]);
        assert!(matches!(cube.unwrap_err(), Error::InvalidCurve(_)));
        // Not monic.
        let scaled = HyperellipticCurve::new(1, vec![s(1), s(0), s(0), s(2)]);
        assert!(matches!(scaled.unwrap_err(), Error::InvalidCurve(_)));
        // (x-1)(x^2+x-1) = x^3 - 2x + 1 is squarefree.
        assert!(HyperellipticCurve::new(1, vec![s(1), s(-2), s(0), s(1)]).is_ok());
    }

    #[test]
    fn branch_series_frozen_expansions() {
        let e = HyperellipticCurve::preset("elliptic-j0").unwrap();
        let y = e.branch_series(12).unwrap();
        assert_eq!(y.trunc(), Some(12));
        assert!(y.known_coeff(-3).unwrap().is_one());
        assert_eq!(y.known_coeff(3).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(y.known_coeff(9).unwrap(), Scalar::ratio(-1, 8));
        assert!(y.coeff(0).is_none());

        let b = HyperellipticCurve::preset("genus2-bolza-like").unwrap();
        let y = b.branch_series(15).unwrap();
        assert!(y.known_coeff(-5).unwrap().is_one());
        assert_eq!(y.known_coeff(5).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(y.known_coeff(15).unwrap(), Scalar::ratio(-1, 8));
    }

    #[test]
    fn branch_squares_back_to_f() {
        for (genus, coeffs) in
            [(1, vec![s(1), s(-2), s(0), s(1)]), (2, vec![s(3), s(1), s(0), s(0), s(0), s(1)])]
        {
            let c = HyperellipticCurve::new(genus, coeffs).unwrap();
            let y = c.branch_series(20).unwrap();
            let square = y.mul(&y);
            // y^2 must agree with f(t^{-2}) on the known window.
            let expected: Vec<(i64, Scalar)> = c
                .f_coeffs()
                .iter()
                .enumerate()
                .map(|(k, v)| (-2 * k as i64, v.clone()))
                .collect();
            let f_of_x = LaurentPoly::from_terms(expected, None).unwrap();
            let diff = square.sub(&f_of_x);
            assert!(diff.trunc().unwrap() >= 10);
            assert_eq!(diff.terms().count(), 0);
        }
    }

    #[test]
    fn pure_powers_of_x() {
        let e = HyperellipticCurve::preset("elliptic-j0").unwrap();
        let x2 = e.expand_monomial(2, false, 10).unwrap();
        assert!(x2.is_exact());
        assert_eq!(x2.terms().count(), 1);
        assert!(x2.known_coeff(-4).unwrap().is_one());
    }

    #[test]
    fn weierstrass_gaps() {
        let e = HyperellipticCurve::preset("elliptic-j0").unwrap();
        let out = e.outgoing(7, 30).unwrap();
        assert_eq!(out.gap_set().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(out.poles(), vec![2, 3, 4, 5, 6, 7]);

        let b = HyperellipticCurve::preset("genus2-bolza-like").unwrap();
        let out = b.outgoing(9, 30).unwrap();
        assert_eq!(out.gap_set().iter().copied().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(out.poles(), vec![2, 4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn isotropy_of_curve_spans() {
        for name in ["elliptic-j0", "genus2-bolza-like"] {
            let c = HyperellipticCurve::preset(name).unwrap();
            let out = c.outgoing(8, 30).unwrap();
            let report = out.isotropy_report();
            assert!(report.passes(), "{name}: {:?}", report.first_nonzero());
        }
    }
}

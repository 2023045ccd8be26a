//! Extended Siegel data: a symmetric correction map `phi`, a frame of `g`
//! linear forms, and a period matrix `Omega`, validated exactly.
//!
//! - the graph vectors `z_i = t^{-i} + phi(t^{-i})` must pair to zero under
//!   the residue form (checked pair by pair, with a witness on failure);
//! - the frame must be independent and supported in positive exponents;
//! - `Omega` must be symmetric with positive-definite imaginary part.
//!
//! The outgoing span is cut out of `span{z_1..z_M}` by the vanishing of the
//! frame forms under the residue pairing, and the integer symplectic group
//! acts through `Omega` and the frame.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::laurent::{residue_pairing, LaurentPoly};
use crate::linalg;
use crate::linalg::{Echelon, SparseVec};
use crate::outgoing::{OutgoingLattice, OutgoingSource};
use crate::scalar::{Rational, Scalar};

/// A point of the extended Siegel space.
#[derive(Debug, Clone)]
pub struct SiegelPoint {
    g: usize,
    phi: BTreeMap<(i64, i64), Scalar>,
    frame: Vec<LaurentPoly>,
    omega: Vec<Vec<Scalar>>,
    phi_bound: i64,
}

impl SiegelPoint {
    /// Validates all invariants exactly.
    pub fn new(
        g: usize,
        phi: BTreeMap<(i64, i64), Scalar>,
        frame: Vec<LaurentPoly>,
        omega: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        if g == 0 {
            return Err(Error::Parse(String::from("genus must be positive")));
        }
        if frame.len() != g {
            return Err(Error::RankMismatch { expected: g, got: frame.len() });
        }
        for h in &frame {
            if h.is_zero() || h.min_exp().map_or(true, |e| e < 1) {
                return Err(Error::FrameDegenerate);
            }
        }
        // Independence over the exponent coordinates.
        let mut ech: Echelon<i64> = Echelon::new();
        for h in &frame {
            let grown = ech
                .insert(SparseVec::from_entries(h.terms().map(|(e, c)| (e, c.clone()))))
                .is_some();
            if !grown {
                return Err(Error::FrameDegenerate);
            }
        }
        let mut phi_clean: BTreeMap<(i64, i64), Scalar> = BTreeMap::new();
        let mut phi_bound = 0i64;
        for ((i, j), c) in phi {
            if i < 1 || j < 1 {
                return Err(Error::Parse(String::from("phi indices must be >= 1")));
            }
            if c.is_zero() {
                continue;
            }
            phi_bound = phi_bound.max(i).max(j);
            phi_clean.insert((i, j), c);
        }
        let point = SiegelPoint { g, phi: phi_clean, frame, omega, phi_bound };
        point.check_graph_isotropy()?;
        point.check_omega()?;
        Ok(point)
    }

    fn check_graph_isotropy(&self) -> Result<()> {
        for i in 1..=self.phi_bound {
            for j in i..=self.phi_bound {
                let pairing = residue_pairing(&self.graph_vector(i), &self.graph_vector(j))
                    .expect("graph vectors are exact");
                if !pairing.is_zero() {
                    return Err(Error::GraphNotIsotropic { i, j });
                }
            }
        }
        Ok(())
    }

    fn check_omega(&self) -> Result<()> {
        let g = self.g;
        if self.omega.len() != g || self.omega.iter().any(|row| row.len() != g) {
            return Err(Error::OmegaNotSiegel(String::from("matrix is not g x g")));
        }
        for i in 0..g {
            for j in 0..g {
                if self.omega[i][j] != self.omega[j][i] {
                    return Err(Error::OmegaNotSiegel(String::from("matrix is not symmetric")));
                }
            }
        }
        let im: Vec<Vec<Rational>> =
            self.omega.iter().map(|row| row.iter().map(|c| c.im().clone()).collect()).collect();
        if !linalg::leading_minors_positive(&im) {
            return Err(Error::OmegaNotSiegel(String::from(
                "imaginary part is not positive definite",
            )));
        }
        Ok(())
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn phi(&self) -> &BTreeMap<(i64, i64), Scalar> {
        &self.phi
    }

    pub fn phi_bound(&self) -> i64 {
        self.phi_bound
    }

    pub fn frame(&self) -> &[LaurentPoly] {
        &self.frame
    }

    pub fn omega(&self) -> &[Vec<Scalar>] {
        &self.omega
    }

    /// The graph vector `z_i = t^{-i} + sum_j phi_{ij} t^j` (exact).
    pub fn graph_vector(&self, i: i64) -> LaurentPoly {
        let mut terms = alloc::vec![(-i, Scalar::one())];
        for (&(pi, pj), c) in &self.phi {
            if pi == i {
                terms.push((pj, c.clone()));
            }
        }
        LaurentPoly::from_terms(terms, None).expect("exact graph vector")
    }

    /// Cuts the outgoing span out of `span{z_1..z_M}` by the frame forms and
    /// returns its canonical truncated basis.
    ///
    /// `n_trunc` must cover the positive support of `phi` so the truncated
    /// vectors determine every stored coefficient.
    pub fn extract_outgoing(&self, m_pole: i64, n_trunc: i64) -> Result<OutgoingLattice> {
        if m_pole < 1 || n_trunc < 1 {
            return Err(Error::Parse(String::from("m_pole and n_trunc must be >= 1")));
        }
        if n_trunc < self.phi_bound {
            return Err(Error::TruncationInsufficient { needed: self.phi_bound, have: n_trunc });
        }
        let m = m_pole as usize;
        let graph: Vec<LaurentPoly> = (1..=m_pole).map(|i| self.graph_vector(i)).collect();
        // forms[k][i] = residue pairing of frame vector k against z_{i+1}.
        let forms: Vec<Vec<Scalar>> = self
            .frame
            .iter()
            .map(|h| {
                graph
                    .iter()
                    .map(|z| residue_pairing(h, z))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let rank = linalg::rank(&forms);
        if rank < self.g {
            return Err(Error::RankDeficient { rank, expected: self.g });
        }
        let kernel = linalg::kernel_basis(&forms, m);
        let mut vectors = Vec::with_capacity(kernel.len());
        for coeffs in kernel {
            let mut v = LaurentPoly::zero();
            for (zi, c) in graph.iter().zip(&coeffs) {
                v = v.add(&zi.scale(c));
            }
            vectors.push(v.truncate(n_trunc));
        }
        OutgoingLattice::from_basis(vectors, m_pole, self.g, OutgoingSource::Ppav)
    }
}

/// An integer symplectic matrix in `g x g` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpMatrix {
    alpha: Vec<Vec<i64>>,
    beta: Vec<Vec<i64>>,
    gamma: Vec<Vec<i64>>,
    delta: Vec<Vec<i64>>,
}

impl SpMatrix {
    pub fn new(
        alpha: Vec<Vec<i64>>,
        beta: Vec<Vec<i64>>,
        gamma: Vec<Vec<i64>>,
        delta: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let g = alpha.len();
        let square = |m: &[Vec<i64>]| m.len() == g && m.iter().all(|row| row.len() == g);
        if g == 0 || !square(&beta) || !square(&gamma) || !square(&delta) || !square(&alpha) {
            return Err(Error::NotSquare);
        }
        let s = SpMatrix { alpha, beta, gamma, delta };
        if !s.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        Ok(s)
    }

    pub fn g(&self) -> usize {
        self.alpha.len()
    }

    /// Assembles the full `2g x 2g` matrix in block order
    /// `[[alpha, beta], [gamma, delta]]`.
    fn full(&self) -> Vec<Vec<i64>> {
        let g = self.g();
        let mut m = alloc::vec![alloc::vec![0i64; 2 * g]; 2 * g];
        for i in 0..g {
            for j in 0..g {
                m[i][j] = self.alpha[i][j];
                m[i][j + g] = self.beta[i][j];
                m[i + g][j] = self.gamma[i][j];
                m[i + g][j + g] = self.delta[i][j];
            }
        }
        m
    }

    fn is_symplectic(&self) -> bool {
        let g = self.g();
        let s = self.full();
        let n = 2 * g;
        // j[i][k] entries of the standard symplectic form.
        let j = |r: usize, c: usize| -> i64 {
            if r < g && c == r + g {
                1
            } else if r >= g && c == r - g {
                -1
            } else {
                0
            }
        };
        for r in 0..n {
            for c in 0..n {
                // (s^T J s)[r][c] = sum_{a,b} s[a][r] j(a,b) s[b][c]
                let mut acc = 0i64;
                for a in 0..n {
                    for b in 0..n {
                        let jv = j(a, b);
                        if jv != 0 {
                            acc += s[a][r] * jv * s[b][c];
                        }
                    }
                }
                if acc != j(r, c) {
                    return false;
                }
            }
        }
        true
    }

    /// The inversion generator: alpha = 0, beta = -I, gamma = I, delta = 0.
    pub fn s_generator(g: usize) -> Self {
        let id = |v: i64| -> Vec<Vec<i64>> {
            (0..g).map(|i| (0..g).map(|j| if i == j { v } else { 0 }).collect()).collect()
        };
        SpMatrix { alpha: id(0), beta: id(-1), gamma: id(1), delta: id(0) }
    }

    /// The translation generator: alpha = I, beta = I, gamma = 0, delta = I.
    pub fn t_generator(g: usize) -> Self {
        let id = |v: i64| -> Vec<Vec<i64>> {
            (0..g).map(|i| (0..g).map(|j| if i == j { v } else { 0 }).collect()).collect()
        };
        SpMatrix { alpha: id(1), beta: id(1), gamma: id(0), delta: id(1) }
    }
}

fn mat_scalar(m: &[Vec<i64>]) -> Vec<Vec<Scalar>> {
    m.iter().map(|row| row.iter().map(|&x| Scalar::from_int(x)).collect()).collect()
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let p = b[0].len();
    let mut out = alloc::vec![alloc::vec![Scalar::zero(); p]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += &(aik * &b[k][j]);
            }
        }
    }
    out
}

fn mat_add(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// The group action on extended Siegel points: `phi` is untouched, the frame
/// transforms by the inverse factor, and
/// `Omega' = (alpha Omega + beta)(gamma Omega + delta)^{-1}`.
pub fn sp_act(sigma: &SpMatrix, point: &SiegelPoint) -> Result<SiegelPoint> {
    if sigma.g() != point.g() {
        return Err(Error::RankMismatch { expected: point.g(), got: sigma.g() });
    }
    let omega = point.omega();
    let factor = mat_add(&mat_mul(&mat_scalar(&sigma.gamma), omega), &mat_scalar(&sigma.delta));
    let inv = linalg::invert(&factor)?;
    let numerator =
        mat_add(&mat_mul(&mat_scalar(&sigma.alpha), omega), &mat_scalar(&sigma.beta));
    let new_omega = mat_mul(&numerator, &inv);
    // h'_k = sum_l h_l * inv[l][k].
    let g = point.g();
    let mut new_frame = Vec::with_capacity(g);
    for k in 0..g {
        let mut h = LaurentPoly::zero();
        for (l, hl) in point.frame().iter().enumerate() {
            h = h.add(&hl.scale(&inv[l][k]));
        }
        new_frame.push(h);
    }
    SiegelPoint::new(g, point.phi().clone(), new_frame, new_omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn standard_point(g: usize) -> SiegelPoint {
        let frame = (1..=g as i64).map(LaurentPoly::basis).collect();
        let omega = (0..g)
            .map(|i| (0..g).map(|j| if i == j { Scalar::i() } else { Scalar::zero() }).collect())
            .collect();
        SiegelPoint::new(g, BTreeMap::new(), frame, omega).unwrap()
    }

    #[test]
    fn standard_points_validate_and_extract() {
        for g in 1..=3usize {
            let p = standard_point(g);
            let out = p.extract_outgoing(6, 8).unwrap();
            let expected_poles: Vec<i64> = (g as i64 + 1..=6).collect();
            assert_eq!(out.poles(), expected_poles);
            assert_eq!(
                out.gap_set().iter().copied().collect::<Vec<_>>(),
                (1..=g as i64).collect::<Vec<_>>()
            );
            assert!(out.isotropy_report().passes());
        }
    }

    #[test]
    fn rank_one_phi_point() {
        let mut phi = BTreeMap::new();
        phi.insert((1, 1), Scalar::one());
        let p = SiegelPoint::new(
            1,
            phi,
            vec![LaurentPoly::basis(1)],
            vec![vec![Scalar::i()]],
        )
        .unwrap();
        let out = p.extract_outgoing(4, 4).unwrap();
        assert_eq!(out.poles(), vec![2, 3, 4]);
        assert_eq!(out.gap_set().iter().copied().collect::<Vec<_>>(), vec![1]);
        // z_2, z_3, z_4 are untouched by phi, so the basis is monomial.
        for (b, e) in out.basis().iter().zip([-2i64, -3, -4]) {
            assert_eq!(b.terms().count(), 1);
            assert!(b.known_coeff(e).unwrap().is_one());
        }
    }

    #[test]
    fn off_diagonal_phi_breaks_isotropy() {
        let mut phi = BTreeMap::new();
        phi.insert((1, 2), Scalar::one());
        let err = SiegelPoint::new(
            1,
            phi,
            vec![LaurentPoly::basis(1)],
            vec![vec![Scalar::i()]],
        )
        .unwrap_err();
        assert_eq!(err, Error::GraphNotIsotropic { i: 1, j: 2 });

        // The balanced completion 2*phi_{12} = 1*phi_{21} restores it.
        let mut phi = BTreeMap::new();
        phi.insert((1, 2), Scalar::one());
        phi.insert((2, 1), Scalar::from_int(2));
        assert!(SiegelPoint::new(
            1,
            phi,
            vec![LaurentPoly::basis(1)],
            vec![vec![Scalar::i()]],
        )
        .is_ok());
    }

    #[test]
    fn shifted_frame_moves_the_gap() {
        let p = SiegelPoint::new(
            1,
            BTreeMap::new(),
            vec![LaurentPoly::basis(2)],
            vec![vec![Scalar::i()]],
        )
        .unwrap();
        let out = p.extract_outgoing(4, 4).unwrap();
        assert_eq!(out.gap_set().iter().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(out.poles(), vec![1, 3, 4]);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let dup = SiegelPoint::new(
            2,
            BTreeMap::new(),
            vec![LaurentPoly::basis(1), LaurentPoly::basis(1)],
            vec![
                vec![Scalar::i(), Scalar::zero()],
                vec![Scalar::zero(), Scalar::i()],
            ],
        );
        assert_eq!(dup.unwrap_err(), Error::FrameDegenerate);

        let real_omega =
            SiegelPoint::new(1, BTreeMap::new(), vec![LaurentPoly::basis(1)], vec![vec![
                Scalar::one(),
            ]]);
        assert!(matches!(real_omega.unwrap_err(), Error::OmegaNotSiegel(_)));

        let asym = SiegelPoint::new(
            2,
            BTreeMap::new(),
            vec![LaurentPoly::basis(1), LaurentPoly::basis(2)],
            vec![
                vec![Scalar::i(), Scalar::one()],
                vec![Scalar::zero(), Scalar::i()],
            ],
        );
        assert!(matches!(asym.unwrap_err(), Error::OmegaNotSiegel(_)));
    }

    #[test]
    fn symplectic_validation() {
        assert!(SpMatrix::new(
            vec![vec![0]],
            vec![vec![-1]],
            vec![vec![1]],
            vec![vec![0]],
        )
        .is_ok());
        assert_eq!(
            SpMatrix::new(vec![vec![1]], vec![vec![0]], vec![vec![0]], vec![vec![2]])
                .unwrap_err(),
            Error::NotSymplectic
        );
        for g in 1..=2 {
            assert!(SpMatrix::new(
                SpMatrix::s_generator(g).alpha.clone(),
                SpMatrix::s_generator(g).beta.clone(),
                SpMatrix::s_generator(g).gamma.clone(),
                SpMatrix::s_generator(g).delta.clone(),
            )
            .is_ok());
        }
    }

    #[test]
    fn inversion_generator_at_omega_i() {
        let p = standard_point(1);
        let q = sp_act(&SpMatrix::s_generator(1), &p).unwrap();
        assert_eq!(q.omega()[0][0], Scalar::i());
        // h' = h * (i)^{-1} = -i h.
        assert_eq!(q.frame()[0].known_coeff(1).unwrap(), -&Scalar::i());
        assert!(q.extract_outgoing(6, 8).unwrap().span_equal(&p.extract_outgoing(6, 8).unwrap()));
    }

    #[test]
    fn translation_generator_at_omega_i() {
        let p = standard_point(1);
        let q = sp_act(&SpMatrix::t_generator(1), &p).unwrap();
        assert_eq!(q.omega()[0][0], &Scalar::one() + &Scalar::i());
        assert!(q.frame()[0].known_coeff(1).unwrap().is_one());
    }

    #[test]
    fn rank_deficient_frame_forms() {
        // A frame form supported beyond every graph vector pairs to zero
        // with all of them, so the forms lose rank.
        let p = SiegelPoint::new(
            1,
            BTreeMap::new(),
            vec![LaurentPoly::basis(9)],
            vec![vec![Scalar::i()]],
        )
        .unwrap();
        assert_eq!(
            p.extract_outgoing(4, 9).unwrap_err(),
            Error::RankDeficient { rank: 0, expected: 1 }
        );
    }
}

//! Cross-module properties checked on randomized and exhaustive inputs:
//! the residue pairing, square roots, the mode commutator, basis
//! independence of the metric-dual quadratics, and engine stability.

use std::sync::Arc;

use proptest::prelude::*;

use coinv_core::coinv::{coinvariant_dims, pi0_oracle, CoinvariantProblem, Margins};
use coinv_core::curves::HyperellipticCurve;
use coinv_core::lattice::{dual_quadratic, mode_bracket, Mode, QuadraticOperator};
use coinv_core::laurent::{residue_pairing, series_sqrt};
use coinv_core::linalg::invert;
use coinv_core::outgoing::{OutgoingLattice, OutgoingSource};
use coinv_core::{FockVector, Lattice, LatticeVector, LaurentPoly, Level, PbwMonomial, Scalar};

fn poly(exponents: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((exponents, -6i64..=6, 1i64..=4), 0..5).prop_map(|terms| {
        let entries = terms.into_iter().map(|(e, n, d)| (e, Scalar::ratio(n, d)));
        LaurentPoly::from_terms(entries, None).unwrap()
    })
}

proptest! {
    /// The pairing is alternating: <f, g> + <g, f> = -Res d(fg) = 0.
    #[test]
    fn residue_pairing_is_antisymmetric(f in poly(-8..=8), g in poly(-8..=8)) {
        let fg = residue_pairing(&f, &g).unwrap();
        let gf = residue_pairing(&g, &f).unwrap();
        prop_assert_eq!(&fg + &gf, Scalar::zero());
    }

    /// Spans supported on one side of zero pair to nothing: both the
    /// incoming and the constant-free outgoing side are isotropic.
    #[test]
    fn one_sided_spans_are_isotropic(
        f in poly(-9..=-1), g in poly(-9..=-1),
        u in poly(1..=9), v in poly(1..=9),
    ) {
        prop_assert_eq!(residue_pairing(&f, &g).unwrap(), Scalar::zero());
        prop_assert_eq!(residue_pairing(&u, &v).unwrap(), Scalar::zero());
    }

    /// The square-root section squares back to its argument exactly on the
    /// known window.
    #[test]
    fn sqrt_squares_back(terms in proptest::collection::vec((1i64..=10, -5i64..=5, 1i64..=3), 0..4)) {
        let entries = std::iter::once((0i64, Scalar::one()))
            .chain(terms.into_iter().map(|(e, n, d)| (2 * e, Scalar::ratio(n, d))));
        let u = LaurentPoly::from_terms(entries, None).unwrap();
        let root = series_sqrt(&u, 40).unwrap();
        let square = root.mul(&root);
        let diff = square.sub(&u);
        prop_assert!(diff.trunc().is_some());
        prop_assert_eq!(diff.terms().count(), 0);
    }

    /// On the level-one module, A_n B_m - B_m A_n acts as the scalar
    /// [A_n, B_m] = (A, B) n delta_{n,-m}.
    #[test]
    fn mode_commutator_matches_bracket(
        a0 in -2i64..=2, a1 in -2i64..=2,
        b0 in -2i64..=2, b1 in -2i64..=2,
        n in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
        m in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]),
        pick in 0usize..4,
    ) {
        let lattice = Lattice::preset("A2").unwrap();
        let a = Mode::new(LatticeVector::new(vec![Scalar::from_int(a0), Scalar::from_int(a1)]), n);
        let b = Mode::new(LatticeVector::new(vec![Scalar::from_int(b0), Scalar::from_int(b1)]), m);
        let monos: [&[(i64, usize)]; 4] = [&[], &[(-1, 0)], &[(-2, 1)], &[(-1, 0), (-1, 1)]];
        let v = FockVector::monomial(
            lattice.clone(),
            Level::One,
            PbwMonomial::new(monos[pick].to_vec()).unwrap(),
            Scalar::one(),
        );
        let ab = v.apply_mode(&b).unwrap().apply_mode(&a).unwrap();
        let ba = v.apply_mode(&a).unwrap().apply_mode(&b).unwrap();
        let bracket = mode_bracket(&lattice, &a, &b).unwrap();
        prop_assert_eq!(ab.sub(&ba).unwrap(), v.scale(&bracket));
    }
}

/// The monomial pairing table: <t^a, t^b> = -b when a + b = 0, else 0.
#[test]
fn monomial_pairing_table() {
    for a in -20i64..=20 {
        for b in -20i64..=20 {
            let f = LaurentPoly::basis(a);
            let g = LaurentPoly::basis(b);
            let expect =
                if a + b == 0 { Scalar::from_int(-b) } else { Scalar::zero() };
            assert_eq!(residue_pairing(&f, &g).unwrap(), expect, "a={a} b={b}");
        }
    }
}

/// The metric-dual quadratic is basis independent: rebuilding it from any
/// other basis of the same lattice, with that basis's own Gram inverse,
/// yields the identical operator.
#[test]
fn dual_quadratic_is_basis_independent() {
    let lattice = Lattice::preset("A2").unwrap();
    // Alternative basis b_1 = e_1, b_2 = e_2 - e_1, with Gram [[2,-3],[-3,6]].
    let c: [[i64; 2]; 2] = [[1, -1], [0, 1]];
    let gram_alt = Lattice::from_gram(vec![vec![2, -3], vec![-3, 6]]).unwrap();
    let inv_alt: Vec<Vec<Scalar>> = (0..2)
        .map(|i| (0..2).map(|j| gram_alt.gram_inverse_entry(i, j).clone()).collect())
        .collect();
    // Sanity: the inverse agrees with direct inversion of the Gram matrix.
    let direct = invert(
        &(0..2)
            .map(|i| (0..2).map(|j| Scalar::from_int(gram_alt.gram()[i][j])).collect())
            .collect::<Vec<_>>(),
    )
    .unwrap();
    assert_eq!(inv_alt, direct);

    for (m, n) in [(1i64, 1i64), (1, -2), (2, -2), (-1, -3)] {
        // M = C (G')^{-1} C^T must equal G^{-1}.
        let mut transported = QuadraticOperator::zero();
        for k in 0..2 {
            for l in 0..2 {
                let mut coeff = Scalar::zero();
                for i in 0..2 {
                    for j in 0..2 {
                        let c_ki = Scalar::from_int(c[k][i]);
                        let c_lj = Scalar::from_int(c[l][j]);
                        coeff = &coeff + &(&(&c_ki * &inv_alt[i][j]) * &c_lj);
                    }
                }
                transported.add_quad(m, k, n, l, coeff);
            }
        }
        let reference = dual_quadratic(&lattice, m, n);
        let probe = FockVector::monomial(
            lattice.clone(),
            Level::One,
            PbwMonomial::new(vec![(-1, 0), (-2, 1), (-3, 1)]).unwrap(),
            Scalar::one(),
        );
        assert_eq!(
            probe.apply_quadratic(&transported).unwrap(),
            probe.apply_quadratic(&reference).unwrap(),
            "pair ({m}, {n})"
        );
    }
}

fn staircase(gaps: usize, max_pole: i64) -> OutgoingLattice {
    let vectors = (gaps as i64 + 1..=max_pole).map(|k| LaurentPoly::basis(-k)).collect();
    OutgoingLattice::from_basis(vectors, max_pole, gaps, OutgoingSource::Ppav).unwrap()
}

/// Raising the degree margin never changes stabilized dimensions, and
/// raising the pole cutoff never raises them.
#[test]
fn engine_dimensions_are_stable_and_monotone() {
    let lattice = Lattice::preset("A1").unwrap();
    let curve = HyperellipticCurve::preset("elliptic-j0").unwrap();

    let mut previous: Option<Vec<u64>> = None;
    for m_deg in [1i64, 2, 3] {
        let problem = CoinvariantProblem {
            lattice: lattice.clone(),
            level: Level::One,
            outgoing: curve.outgoing(8, 16).unwrap(),
            n_deg: 4,
            margins: Margins { m_pole: 8, m_deg, n_trunc: 16 },
            auto_retry: false,
        };
        let report = coinvariant_dims(&problem).unwrap();
        if let Some(prev) = &previous {
            assert_eq!(prev, &report.filtered_dims, "margin {m_deg}");
        }
        previous = Some(report.filtered_dims);
    }

    let mut last: Option<Vec<u64>> = None;
    for m_pole in [4i64, 6, 8] {
        let problem = CoinvariantProblem {
            lattice: lattice.clone(),
            level: Level::Zero,
            outgoing: staircase(1, 8),
            n_deg: 4,
            margins: Margins { m_pole, m_deg: 1, n_trunc: 8 },
            auto_retry: false,
        };
        let dims = coinvariant_dims(&problem).unwrap().filtered_dims;
        if let Some(prev) = &last {
            for (a, b) in prev.iter().zip(&dims) {
                assert!(b <= a, "more relations cannot grow the quotient");
            }
        }
        last = Some(dims);
    }
}

/// The engine agrees with the symmetric-algebra count on a deformed point
/// whose outgoing span still reduces to monomials.
#[test]
fn engine_matches_oracle_on_deformed_staircase() {
    let lattice = Lattice::preset("A1").unwrap();
    // Poles 2..=8 with an isotropic tail on the first vector.
    let mut vectors: Vec<LaurentPoly> =
        (2i64..=8).map(|k| LaurentPoly::basis(-k)).collect();
    let deformed = vectors[0].add(&LaurentPoly::basis(2));
    vectors[0] = deformed;
    let outgoing = OutgoingLattice::from_basis(vectors, 8, 1, OutgoingSource::Ppav).unwrap();
    let problem = CoinvariantProblem {
        lattice: Arc::clone(&lattice),
        level: Level::One,
        outgoing,
        n_deg: 4,
        margins: Margins { m_pole: 8, m_deg: 2, n_trunc: 8 },
        auto_retry: true,
    };
    let report = coinvariant_dims(&problem).unwrap();
    let oracle = pi0_oracle(&lattice, &problem.outgoing, 4).unwrap();
    assert_eq!(report.filtered_dims, oracle.filtered_dims);
    assert!(report.stabilized.iter().all(|&s| s));
}

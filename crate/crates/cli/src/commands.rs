//! One function per subcommand, returning the process exit code.
//!
//! Code 0: everything checked out. Code 4: the computation finished but an
//! identity it was asked to certify failed; the report carries a witness.
//! Loading or margin problems surface as `Failure` and map to 2 or 3 in
//! `main`.

use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use coinv_core::fock::{pbw_basis, ConformalVector};
use coinv_core::outgoing::PairStatus;
use coinv_core::ppav::{sp_act, SpMatrix};
use coinv_core::{
    coinvariant_dims, exponentiate, pi0_oracle, CoinvariantProblem, FockVector, Lattice,
    LatticeVector, Level, Margins, OutgoingLattice, PbwMonomial, Scalar,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{Cli, Command, Format};
use crate::{config, emit, parallel, Failure};

pub fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Axioms { lattice, ndeg, out, format } => {
            axioms(&lattice, ndeg, out.as_deref(), format)
        }
        Command::Coinv { lattice, level, ndeg, margins, point, curve, out, format } => coinv(
            &lattice,
            level,
            ndeg,
            margins.as_deref(),
            point.as_deref(),
            curve.as_deref(),
            out.as_deref(),
            format,
        ),
        Command::Orbit { word, point, lattice, level, ndeg, margins, out, format } => orbit(
            &word,
            &point,
            &lattice,
            level,
            ndeg,
            margins.as_deref(),
            out.as_deref(),
            format,
        ),
        Command::CurveExpand { curve, margins, out, format } => {
            curve_expand(&curve, margins.as_deref(), out.as_deref(), format)
        }
        Command::Isotropy { point, curve, margins, out, format } => {
            isotropy(point.as_deref(), curve.as_deref(), margins.as_deref(), out.as_deref(), format)
        }
        Command::ExpCheck { lattice, ndeg, out, format } => {
            exp_check(&lattice, ndeg, out.as_deref(), format)
        }
    }
}

fn outgoing_from_flags(
    point: Option<&Path>,
    curve: Option<&str>,
    margins: &Margins,
) -> Result<OutgoingLattice, Failure> {
    match (point, curve) {
        (Some(path), None) => {
            let sp = config::load_point(path)?;
            sp.extract_outgoing(margins.m_pole, margins.n_trunc).map_err(Failure::Core)
        }
        (None, Some(spec)) => {
            let hc = config::load_curve(spec)?;
            hc.outgoing(margins.m_pole, margins.n_trunc).map_err(Failure::Core)
        }
        _ => Err(Failure::Config(String::from(
            "provide exactly one of --point or --curve",
        ))),
    }
}

// ---------------------------------------------------------------------------
// axioms

#[derive(Serialize)]
struct CheckOut {
    name: String,
    cases: u64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

fn suite_table(title: &str, rows: &[(String, u64, bool, Option<&str>)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{title}");
    for (name, cases, passed, witness) in rows {
        let _ = writeln!(
            out,
            "{:<34} {:>8} cases  {}",
            name,
            cases,
            if *passed { "ok" } else { "FAILED" }
        );
        if let Some(text) = witness {
            let _ = writeln!(out, "    witness: {text}");
        }
    }
    out
}

fn axioms(
    lattice_spec: &str,
    ndeg: i64,
    out: Option<&Path>,
    format: Format,
) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let lattice = config::load_lattice(lattice_spec)?;
    let depth = ndeg.max(0);

    type Job = Box<dyn FnOnce() -> Result<CheckOut, Failure> + Send>;
    let mut jobs: Vec<Job> = Vec::new();
    for level in [Level::One, Level::Zero] {
        let l = lattice.clone();
        jobs.push(Box::new(move || bracket_check(&l, level, depth)));
    }
    for basis_shift in [false, true] {
        let l = lattice.clone();
        jobs.push(Box::new(move || cocycle_check(&l, basis_shift, depth)));
    }
    {
        let l = lattice.clone();
        jobs.push(Box::new(move || grading_check(&l, depth)));
    }

    let checks: Vec<CheckOut> =
        parallel::run_all(jobs).into_iter().collect::<Result<_, _>>()?;
    let passed = checks.iter().all(|c| c.passed);

    let payload = json!({
        "suite": "axioms",
        "lattice": lattice_spec,
        "depth": depth,
        "checks": emit::to_value(&checks)?,
        "passed": passed,
    });
    let rows: Vec<_> = checks
        .iter()
        .map(|c| (c.name.clone(), c.cases, c.passed, c.witness.as_deref()))
        .collect();
    let table = suite_table(&format!("axioms on {lattice_spec} through degree {depth}"), &rows);
    emit::deliver(payload, table, format, out, started)?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

fn witness_vector(tag: &str, diff: &FockVector) -> String {
    let body = serde_json::to_string(&emit::fock_out(diff)).unwrap_or_else(|_| String::new());
    format!("{tag}; residual {body}")
}

/// `[A_n, B_m] = (A, B) n delta_{n+m,0}` on every swept monomial; at level
/// zero every commutator must vanish outright.
fn bracket_check(lattice: &Arc<Lattice>, level: Level, depth: i64) -> Result<CheckOut, Failure> {
    let d = lattice.rank();
    let modes: Vec<i64> = (-3..=3).filter(|&n| n != 0).collect();
    let mut cases = 0u64;
    let mut witness = None;
    'sweep: for mono in pbw_basis(d, depth) {
        let v = FockVector::monomial(lattice.clone(), level, mono.clone(), Scalar::one());
        for i in 0..d {
            for j in 0..d {
                for &n in &modes {
                    for &m in &modes {
                        cases += 1;
                        let ab =
                            v.apply_basis_mode(j, m).and_then(|w| w.apply_basis_mode(i, n));
                        let ba =
                            v.apply_basis_mode(i, n).and_then(|w| w.apply_basis_mode(j, m));
                        let commutator =
                            ab.and_then(|x| ba.and_then(|y| x.sub(&y))).map_err(Failure::Core)?;
                        let expected = if level == Level::One && n + m == 0 {
                            v.scale(&Scalar::from_int(lattice.gram()[i][j] * n))
                        } else {
                            FockVector::zero(lattice.clone(), level)
                        };
                        if commutator != expected {
                            let diff = commutator.sub(&expected).map_err(Failure::Core)?;
                            witness = Some(witness_vector(
                                &format!("[g[{}]_{n}, g[{}]_{m}] on {mono:?}", i + 1, j + 1),
                                &diff,
                            ));
                            break 'sweep;
                        }
                    }
                }
            }
        }
    }
    let name = match level {
        Level::One => "heisenberg-bracket-level1",
        Level::Zero => "heisenberg-bracket-level0",
    };
    Ok(CheckOut { name: name.into(), cases, passed: witness.is_none(), witness })
}

/// `[L_p, L_q] = (p - q) L_{p+q} + delta_{p+q,0} (p^3 - p)/12 c` on the
/// level-one module, for the zero shift and for the first basis shift.
fn cocycle_check(
    lattice: &Arc<Lattice>,
    basis_shift: bool,
    depth: i64,
) -> Result<CheckOut, Failure> {
    let d = lattice.rank();
    let shift = if basis_shift {
        let mut coeffs = vec![Scalar::zero(); d];
        coeffs[0] = Scalar::one();
        LatticeVector::new(coeffs)
    } else {
        LatticeVector::zero(d)
    };
    let central = ConformalVector::new(lattice.clone(), shift.clone())
        .map_err(Failure::Core)?
        .central_charge();
    let mut cases = 0u64;
    let mut witness = None;
    'sweep: for mono in pbw_basis(d, depth) {
        let v = FockVector::monomial(lattice.clone(), Level::One, mono.clone(), Scalar::one());
        for p in -2i64..=2 {
            for q in -2i64..=2 {
                cases += 1;
                let lhs = v
                    .virasoro(q, &shift)
                    .and_then(|w| w.virasoro(p, &shift))
                    .and_then(|pq| {
                        v.virasoro(p, &shift)
                            .and_then(|w| w.virasoro(q, &shift))
                            .and_then(|qp| pq.sub(&qp))
                    })
                    .map_err(Failure::Core)?;
                let mut rhs = v
                    .virasoro(p + q, &shift)
                    .map_err(Failure::Core)?
                    .scale(&Scalar::from_int(p - q));
                if p + q == 0 {
                    let cocycle = &central * &Scalar::ratio(p * p * p - p, 12);
                    rhs = rhs.add(&v.scale(&cocycle)).map_err(Failure::Core)?;
                }
                if lhs != rhs {
                    let diff = lhs.sub(&rhs).map_err(Failure::Core)?;
                    witness = Some(witness_vector(
                        &format!("[L_{p}, L_{q}] on {mono:?}"),
                        &diff,
                    ));
                    break 'sweep;
                }
            }
        }
    }
    let name = if basis_shift { "virasoro-cocycle-basis-shift" } else { "virasoro-cocycle-zero-shift" };
    Ok(CheckOut { name: name.into(), cases, passed: witness.is_none(), witness })
}

/// `L_0` with zero shift multiplies each monomial by its degree, at both
/// levels.
fn grading_check(lattice: &Arc<Lattice>, depth: i64) -> Result<CheckOut, Failure> {
    let d = lattice.rank();
    let zero_shift = LatticeVector::zero(d);
    let mut cases = 0u64;
    let mut witness = None;
    'sweep: for level in [Level::Zero, Level::One] {
        for mono in pbw_basis(d, depth) {
            cases += 1;
            let v = FockVector::monomial(lattice.clone(), level, mono.clone(), Scalar::one());
            let lhs = v.virasoro(0, &zero_shift).map_err(Failure::Core)?;
            let rhs = v.scale(&Scalar::from_int(mono.degree()));
            if lhs != rhs {
                let diff = lhs.sub(&rhs).map_err(Failure::Core)?;
                witness =
                    Some(witness_vector(&format!("L_0 on {mono:?} at {level:?}"), &diff));
                break 'sweep;
            }
        }
    }
    Ok(CheckOut {
        name: "grading-operator".into(),
        cases,
        passed: witness.is_none(),
        witness,
    })
}

// ---------------------------------------------------------------------------
// coinv

#[allow(clippy::too_many_arguments)]
fn coinv(
    lattice_spec: &str,
    level_flag: u8,
    ndeg: i64,
    margins_flag: Option<&str>,
    point: Option<&Path>,
    curve: Option<&str>,
    out: Option<&Path>,
    format: Format,
) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let lattice = config::load_lattice(lattice_spec)?;
    let level = config::level_from_flag(level_flag)?;
    if ndeg < 0 {
        return Err(Failure::Config(String::from("ndeg must be >= 0")));
    }
    let margins = config::resolve_margins(margins_flag, config::default_margins(ndeg))?;
    let outgoing = outgoing_from_flags(point, curve, &margins)?;
    let oracle = if level == Level::Zero {
        Some(pi0_oracle(&lattice, &outgoing, ndeg).map_err(Failure::Core)?)
    } else {
        None
    };
    let problem = CoinvariantProblem {
        lattice,
        level,
        outgoing,
        n_deg: ndeg,
        margins,
        auto_retry: true,
    };
    let report = coinvariant_dims(&problem).map_err(Failure::Core)?;
    let mut rendered = emit::ReportOut::new(&report);
    if let Some(expected) = &oracle {
        rendered.oracle_match = Some(expected.filtered_dims == report.filtered_dims);
    }
    let payload = emit::to_value(&rendered)?;
    let table = emit::report_table(&rendered);
    emit::deliver(payload, table, format, out, started)?;
    Ok(if rendered.oracle_match == Some(false) {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    })
}

// ---------------------------------------------------------------------------
// orbit

#[allow(clippy::too_many_arguments)]
fn orbit(
    word: &str,
    point_path: &Path,
    lattice_spec: &str,
    level_flag: u8,
    ndeg: i64,
    margins_flag: Option<&str>,
    out: Option<&Path>,
    format: Format,
) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let lattice = config::load_lattice(lattice_spec)?;
    let level = config::level_from_flag(level_flag)?;
    if ndeg < 0 {
        return Err(Failure::Config(String::from("ndeg must be >= 0")));
    }
    let margins = config::resolve_margins(margins_flag, config::default_margins(ndeg))?;
    let base = config::load_point(point_path)?;
    let mut moved = base.clone();
    for letter in word.chars() {
        let generator = match letter {
            'S' => SpMatrix::s_generator(base.g()),
            'T' => SpMatrix::t_generator(base.g()),
            other => {
                return Err(Failure::Config(format!(
                    "orbit words use the alphabet {{S, T}}, got {other:?}"
                )))
            }
        };
        moved = sp_act(&generator, &moved).map_err(Failure::Core)?;
    }
    let out_base =
        base.extract_outgoing(margins.m_pole, margins.n_trunc).map_err(Failure::Core)?;
    let out_moved =
        moved.extract_outgoing(margins.m_pole, margins.n_trunc).map_err(Failure::Core)?;
    let span_equal = out_base.span_equal(&out_moved);

    let report_for = |outgoing: OutgoingLattice| -> Result<emit::ReportOut, Failure> {
        let problem = CoinvariantProblem {
            lattice: lattice.clone(),
            level,
            outgoing,
            n_deg: ndeg,
            margins,
            auto_retry: true,
        };
        Ok(emit::ReportOut::new(&coinvariant_dims(&problem).map_err(Failure::Core)?))
    };
    let base_report = report_for(out_base)?;
    let moved_report = report_for(out_moved)?;
    let base_value = emit::to_value(&base_report)?;
    let moved_value = emit::to_value(&moved_report)?;
    let reports_equal =
        emit::canonical_string(&base_value) == emit::canonical_string(&moved_value);

    let omega_rows: Vec<Vec<String>> = moved
        .omega()
        .iter()
        .map(|row| row.iter().map(|c| c.to_string()).collect())
        .collect();
    let passed = span_equal && reports_equal;
    let payload = json!({
        "word": word,
        "moved_omega": omega_rows,
        "span_equal": span_equal,
        "reports_equal": reports_equal,
        "base_report": base_value,
        "moved_report": moved_value,
        "passed": passed,
    });
    let mut table = String::new();
    let _ = writeln!(table, "word {:?}", word);
    let _ = writeln!(table, "span equal     {span_equal}");
    let _ = writeln!(table, "reports equal  {reports_equal}");
    table.push_str(&emit::report_table(&base_report));
    emit::deliver(payload, table, format, out, started)?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

// ---------------------------------------------------------------------------
// curve-expand

fn curve_expand(
    curve_spec: &str,
    margins_flag: Option<&str>,
    out: Option<&Path>,
    format: Format,
) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let curve = config::load_curve(curve_spec)?;
    let g = curve.genus() as i64;
    let default = Margins { m_pole: 2 * g + 4, m_deg: 0, n_trunc: (4 * g + 16).max(40) };
    let margins = config::resolve_margins(margins_flag, default)?;
    let expansions =
        curve.expansions(margins.m_pole, margins.n_trunc).map_err(Failure::Core)?;
    let outgoing = curve.outgoing(margins.m_pole, margins.n_trunc).map_err(Failure::Core)?;

    let mut series_values = Vec::with_capacity(expansions.len());
    for (label, series) in &expansions {
        series_values.push(json!({
            "label": label,
            "series": emit::to_value(&emit::laurent_out(series))?,
        }));
    }
    let gaps: Vec<i64> = outgoing.gap_set().iter().copied().collect();
    let payload = json!({
        "genus": curve.genus(),
        "f": curve.f_coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "expansions": series_values,
        "poles": outgoing.poles(),
        "gaps": gaps,
    });
    let mut table = String::new();
    let _ = writeln!(table, "genus {g}");
    let _ = writeln!(table, "poles {:?}", outgoing.poles());
    let _ = writeln!(table, "gaps  {gaps:?}");
    for (label, series) in &expansions {
        let _ = writeln!(table, "{label}: {} terms", series.terms().count());
    }
    emit::deliver(payload, table, format, out, started)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// isotropy

fn isotropy(
    point: Option<&Path>,
    curve: Option<&str>,
    margins_flag: Option<&str>,
    out: Option<&Path>,
    format: Format,
) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let default = Margins { m_pole: 8, m_deg: 0, n_trunc: 40 };
    let margins = config::resolve_margins(margins_flag, default)?;
    let outgoing = outgoing_from_flags(point, curve, &margins)?;
    let report = outgoing.isotropy_report();

    let mut pair_values = Vec::with_capacity(report.pairs.len());
    for (i, j, status) in &report.pairs {
        pair_values.push(match status {
            PairStatus::Zero => json!({"i": i, "j": j, "status": "zero"}),
            PairStatus::NonZero(value) => {
                json!({"i": i, "j": j, "status": "nonzero", "value": value.to_string()})
            }
            PairStatus::Undetermined { needed, have } => {
                json!({"i": i, "j": j, "status": "undetermined", "needed": needed, "have": have})
            }
        });
    }
    let passed = report.passes();
    let undetermined = report.any_undetermined();
    let payload = json!({
        "pair_count": report.pairs.len(),
        "pairs": pair_values,
        "poles": outgoing.poles(),
        "passed": passed,
    });
    let mut table = String::new();
    let _ = writeln!(table, "pairs checked {}", report.pairs.len());
    let _ = writeln!(table, "all zero      {passed}");
    if let Some((i, j, value)) = report.first_nonzero() {
        let _ = writeln!(table, "nonzero at ({i}, {j}): {value}");
    }
    emit::deliver(payload, table, format, out, started)?;
    if report.first_nonzero().is_some() {
        return Ok(ExitCode::from(4));
    }
    if undetermined {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// exp-check

#[derive(Serialize)]
struct PairOut {
    m: i64,
    n: i64,
    cases: u64,
    max_terms: u64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
}

fn exp_check(
    lattice_spec: &str,
    ndeg: i64,
    out: Option<&Path>,
    format: Format,
) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let lattice = config::load_lattice(lattice_spec)?;
    let depth = ndeg.max(0);
    let monomials = Arc::new(pbw_basis(lattice.rank(), depth));

    let mut pairs: Vec<(i64, i64)> = Vec::new();
    for m in -2i64..=2 {
        for n in -2i64..=2 {
            if m + n != 0 && !(m < 0 && n < 0) {
                pairs.push((m, n));
            }
        }
    }

    type Job = Box<dyn FnOnce() -> Result<PairOut, Failure> + Send>;
    let jobs: Vec<Job> = pairs
        .into_iter()
        .map(|(m, n)| -> Job {
            let lattice = lattice.clone();
            let monomials = monomials.clone();
            Box::new(move || exp_pair(&lattice, &monomials, m, n))
        })
        .collect();
    let results: Vec<PairOut> =
        parallel::run_all(jobs).into_iter().collect::<Result<_, _>>()?;
    let passed = results.iter().all(|p| p.passed);

    let payload = json!({
        "suite": "exponentials",
        "lattice": lattice_spec,
        "depth": depth,
        "pairs": emit::to_value(&results)?,
        "passed": passed,
    });
    let rows: Vec<_> = results
        .iter()
        .map(|p| {
            (format!("exp of pair ({}, {})", p.m, p.n), p.cases, p.passed, p.witness.as_deref())
        })
        .collect();
    let table =
        suite_table(&format!("exponentials on {lattice_spec} through degree {depth}"), &rows);
    emit::deliver(payload, table, format, out, started)?;
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

/// One generator pair: exp terminates (within the degree bound when the pair
/// lowers degree) and exp(X) exp(-X) is the identity on every swept monomial.
fn exp_pair(
    lattice: &Arc<Lattice>,
    monomials: &[PbwMonomial],
    m: i64,
    n: i64,
) -> Result<PairOut, Failure> {
    let one = Scalar::one();
    let minus_one = Scalar::from_int(-1);
    let mut cases = 0u64;
    let mut max_terms = 0u64;
    let mut witness = None;
    for mono in monomials {
        cases += 1;
        let v = FockVector::monomial(lattice.clone(), Level::One, mono.clone(), Scalar::one());
        let forward = exponentiate(m, n, &one, &v).map_err(Failure::Core)?;
        max_terms = max_terms.max(forward.terms);
        if m + n > 0 {
            let bound = ((mono.degree() + m + n - 1).div_euclid(m + n) + 1) as u64;
            if forward.terms > bound {
                witness = Some(format!(
                    "exp on {mono:?} used {} terms, bound {bound}",
                    forward.terms
                ));
                break;
            }
        }
        let back = exponentiate(m, n, &minus_one, &forward.vector).map_err(Failure::Core)?;
        if back.vector != v {
            let diff = back.vector.sub(&v).map_err(Failure::Core)?;
            witness = Some(witness_vector(
                &format!("exp(X) exp(-X) on {mono:?} is not the identity"),
                &diff,
            ));
            break;
        }
    }
    Ok(PairOut { m, n, cases, max_terms, passed: witness.is_none(), witness })
}

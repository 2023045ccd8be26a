//! Input loading: lattices, Siegel points, curves, and margin triples.
//!
//! Scalars are canonical strings (`"3/4"`, `"1/2+2/3*i"`). Laurent data is
//! `{"terms": [[exp, "coeff"], ...], "trunc": N}` with `trunc` null or absent
//! for exact polynomials. Lattices are presets (`A1`, `A2`, `A1^k`) or
//! `{"gram": [[..]]}`; points and curves are JSON files documented in the
//! README. Anything that fails to load is a configuration error (exit 2).

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use coinv_core::curves::HyperellipticCurve;
use coinv_core::ppav::SiegelPoint;
use coinv_core::{Error, Lattice, LaurentPoly, Level, Margins, Scalar};
use serde::Deserialize;

use crate::Failure;

#[derive(Deserialize)]
pub struct LaurentJson {
    pub terms: Vec<(i64, String)>,
    #[serde(default)]
    pub trunc: Option<i64>,
}

#[derive(Deserialize)]
struct GramJson {
    gram: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct PointJson {
    g: usize,
    #[serde(default)]
    phi: Vec<(i64, i64, String)>,
    frame: Vec<LaurentJson>,
    omega: Vec<Vec<String>>,
}

#[derive(Deserialize)]
struct CurveJson {
    genus: usize,
    f: Vec<String>,
}

fn bad_json(context: &str, err: serde_json::Error) -> Failure {
    Failure::Config(format!("{context}: {err}"))
}

fn parse_scalar(text: &str) -> Result<Scalar, Failure> {
    Scalar::parse(text).map_err(Failure::Core)
}

pub fn laurent_from_json(json: &LaurentJson) -> Result<LaurentPoly, Failure> {
    let mut terms = Vec::with_capacity(json.terms.len());
    for (exp, coeff) in &json.terms {
        terms.push((*exp, parse_scalar(coeff)?));
    }
    LaurentPoly::from_terms(terms, json.trunc).map_err(Failure::Core)
}

/// Resolves a lattice flag: preset name, inline JSON, or JSON file path.
pub fn load_lattice(spec: &str) -> Result<Arc<Lattice>, Failure> {
    let trimmed = spec.trim();
    if trimmed.starts_with('{') {
        let parsed: GramJson =
            serde_json::from_str(trimmed).map_err(|e| bad_json("inline lattice", e))?;
        return Lattice::from_gram(parsed.gram).map_err(Failure::Core);
    }
    match Lattice::preset(trimmed) {
        Ok(lattice) => Ok(lattice),
        Err(Error::Parse(_)) => {
            let text = std::fs::read_to_string(trimmed).map_err(|e| {
                Failure::Config(format!(
                    "lattice {trimmed:?} is neither a preset nor a readable file: {e}"
                ))
            })?;
            let parsed: GramJson =
                serde_json::from_str(&text).map_err(|e| bad_json("lattice file", e))?;
            Lattice::from_gram(parsed.gram).map_err(Failure::Core)
        }
        Err(err) => Err(Failure::Core(err)),
    }
}

/// Loads a Siegel point from a JSON file.
pub fn load_point(path: &Path) -> Result<SiegelPoint, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("point file {}: {e}", path.display())))?;
    let parsed: PointJson =
        serde_json::from_str(&text).map_err(|e| bad_json("point file", e))?;
    let mut phi = BTreeMap::new();
    for (i, j, coeff) in &parsed.phi {
        let value = parse_scalar(coeff)?;
        if phi.insert((*i, *j), value).is_some() {
            return Err(Failure::Config(format!("duplicate phi entry ({i}, {j})")));
        }
    }
    let frame = parsed
        .frame
        .iter()
        .map(laurent_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let mut omega = Vec::with_capacity(parsed.omega.len());
    for row in &parsed.omega {
        let mut entries = Vec::with_capacity(row.len());
        for cell in row {
            entries.push(parse_scalar(cell)?);
        }
        omega.push(entries);
    }
    SiegelPoint::new(parsed.g, phi, frame, omega).map_err(Failure::Core)
}

/// Resolves a curve flag: preset name, inline JSON, or JSON file path.
pub fn load_curve(spec: &str) -> Result<HyperellipticCurve, Failure> {
    let trimmed = spec.trim();
    if trimmed.starts_with('{') {
        return curve_from_json(trimmed);
    }
    match HyperellipticCurve::preset(trimmed) {
        Ok(curve) => Ok(curve),
        Err(Error::Parse(_)) => {
            let text = std::fs::read_to_string(trimmed).map_err(|e| {
                Failure::Config(format!(
                    "curve {trimmed:?} is neither a preset nor a readable file: {e}"
                ))
            })?;
            curve_from_json(&text)
        }
        Err(err) => Err(Failure::Core(err)),
    }
}

fn curve_from_json(text: &str) -> Result<HyperellipticCurve, Failure> {
    let parsed: CurveJson = serde_json::from_str(text).map_err(|e| bad_json("curve", e))?;
    let coeffs = parsed
        .f
        .iter()
        .map(|c| parse_scalar(c))
        .collect::<Result<Vec<_>, _>>()?;
    HyperellipticCurve::new(parsed.genus, coeffs).map_err(Failure::Core)
}

/// Parses `M_POLE,M_DEG,N_TRUNC`, falling back to the given defaults.
pub fn resolve_margins(flag: Option<&str>, default: Margins) -> Result<Margins, Failure> {
    let Some(text) = flag else {
        return Ok(default);
    };
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::Config(format!(
            "margins must be three comma-separated integers, got {text:?}"
        )));
    }
    let mut nums = [0i64; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part.trim().parse::<i64>().map_err(|e| {
            Failure::Config(format!("margin component {part:?} is not an integer: {e}"))
        })?;
    }
    Ok(Margins { m_pole: nums[0], m_deg: nums[1], n_trunc: nums[2] })
}

/// Default margins for coinvariant runs at filtration depth `n_deg`.
pub fn default_margins(n_deg: i64) -> Margins {
    Margins { m_pole: n_deg + 2, m_deg: 2, n_trunc: 2 * n_deg + 8 }
}

pub fn level_from_flag(level: u8) -> Result<Level, Failure> {
    match level {
        0 => Ok(Level::Zero),
        1 => Ok(Level::One),
        other => Err(Failure::Config(format!("level must be 0 or 1, got {other}"))),
    }
}

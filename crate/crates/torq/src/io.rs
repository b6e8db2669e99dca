//! File formats: polytope JSON, element JSON, and the JSON shape of
//! retraction output.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{PiecewiseElement, Theory};
use crate::linalg::{Int, Rat};
use crate::poly::{parse, CoeffRing, ParseMode, Poly};
use crate::polytope::{Facet, FaceLattice, Polytope, PolytopeError};
use crate::retraction::RetractionSequence;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational '{0}': expected \"p\" or \"p/q\" in lowest terms")]
    BadRational(String),
    #[error("polytope: {0}")]
    Polytope(#[from] PolytopeError),
    #[error("facet data does not match the facets computed from the vertices")]
    FacetMismatch,
    #[error("element: {0}")]
    BadElement(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct PolytopeFile {
    name: String,
    ambient_dim: usize,
    vertices: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    facets: Option<Vec<FacetFile>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FacetFile {
    normal: Vec<i64>,
    offset: String,
}

fn parse_rat(s: &str) -> Result<Rat, IoError> {
    let bad = || IoError::BadRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: Int = num.parse().map_err(|_| bad())?;
    let q: Int = den.parse().map_err(|_| bad())?;
    if !q.is_positive() {
        return Err(bad());
    }
    if p.gcd(&q) != Int::from(1) {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse polytope JSON. When a facet list is present, it is cross-validated
/// against the facets computed from the vertices.
pub fn polytope_from_json(text: &str) -> Result<Polytope, IoError> {
    let file: PolytopeFile = serde_json::from_str(text)?;
    let vertices: Vec<Vec<Rat>> = file
        .vertices
        .iter()
        .map(|row| {
            if row.len() != file.ambient_dim {
                return Err(IoError::Polytope(PolytopeError::BadInput(format!(
                    "vertex has {} coordinates, expected {}",
                    row.len(),
                    file.ambient_dim
                ))));
            }
            row.iter().map(|s| parse_rat(s)).collect()
        })
        .collect::<Result<_, _>>()?;
    let polytope = Polytope::from_vertices(&file.name, vertices)?;
    if let Some(facets) = file.facets {
        let mut given: Vec<(Vec<Int>, Rat)> = facets
            .iter()
            .map(|f| {
                Ok((
                    f.normal.iter().map(|&x| Int::from(x)).collect(),
                    parse_rat(&f.offset)?,
                ))
            })
            .collect::<Result<_, IoError>>()?;
        let mut computed: Vec<(Vec<Int>, Rat)> = polytope
            .facets
            .iter()
            .map(|f| (f.normal.clone(), f.offset.clone()))
            .collect();
        given.sort();
        computed.sort();
        if given != computed {
            return Err(IoError::FacetMismatch);
        }
    }
    Ok(polytope)
}

pub fn polytope_to_json(p: &Polytope) -> String {
    let file = PolytopeFile {
        name: p.name.clone(),
        ambient_dim: p.ambient_dim(),
        vertices: p
            .vertices
            .iter()
            .map(|v| v.iter().map(rat_string).collect())
            .collect(),
        facets: Some(
            p.facets
                .iter()
                .map(|f: &Facet| FacetFile {
                    normal: f
                        .normal
                        .iter()
                        .map(|x| i64::try_from(x).expect("normal fits in i64"))
                        .collect(),
                    offset: rat_string(&f.offset),
                })
                .collect(),
        ),
    };
    serde_json::to_string_pretty(&file).unwrap()
}

#[derive(Debug, Serialize, Deserialize)]
struct ElementFile {
    theory: String,
    ring: String,
    variables: Vec<String>,
    assignments: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    multipliers: BTreeMap<String, i64>,
}

/// Parse element JSON against a polytope: every vertex must get an assignment
/// (missing keys default to 0), all sharing the polytope's ambient variables.
pub fn element_from_json(text: &str, polytope: &Polytope) -> Result<PiecewiseElement, IoError> {
    let file: ElementFile = serde_json::from_str(text)?;
    let theory = match file.theory.as_str() {
        "H" => Theory::H,
        "K" => Theory::K,
        other => return Err(IoError::BadElement(format!("unknown theory '{other}'"))),
    };
    let ring = match file.ring.as_str() {
        "Q" => CoeffRing::Q,
        "Z" => CoeffRing::Z,
        other => return Err(IoError::BadElement(format!("unknown ring '{other}'"))),
    };
    if theory == Theory::K && ring == CoeffRing::Z {
        return Err(IoError::BadElement("ring Z is only valid with theory H".into()));
    }
    let n = polytope.ambient_dim();
    if file.variables.len() != n {
        return Err(IoError::BadElement(format!(
            "expected {} variables, found {}",
            n,
            file.variables.len()
        )));
    }
    let mode = match theory {
        Theory::H => ParseMode::Ordinary,
        Theory::K => ParseMode::Laurent,
    };
    let mut assignments = vec![Poly::zero(n); polytope.vertices.len()];
    for (key, text) in &file.assignments {
        let idx: usize = key
            .parse()
            .map_err(|_| IoError::BadElement(format!("bad vertex index '{key}'")))?;
        if idx >= assignments.len() {
            return Err(IoError::BadElement(format!("vertex index {idx} out of range")));
        }
        assignments[idx] = parse(text, &file.variables, mode)
            .map_err(|e| IoError::BadElement(format!("vertex {idx}: {e}")))?;
    }
    let mut multipliers = BTreeMap::new();
    for (key, &m) in &file.multipliers {
        let Some((a, b)) = key.split_once('-') else {
            return Err(IoError::BadElement(format!("bad multiplier key '{key}'")));
        };
        let (a, b): (usize, usize) = match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Err(IoError::BadElement(format!("bad multiplier key '{key}'"))),
        };
        if m == 0 {
            return Err(IoError::BadElement(format!("multiplier for '{key}' must be nonzero")));
        }
        multipliers.insert((a.min(b), a.max(b)), m);
    }
    Ok(PiecewiseElement {
        theory,
        ring,
        variables: file.variables,
        assignments,
        multipliers,
    })
}

#[derive(Debug, Serialize)]
pub struct RetractionStepJson {
    pub vertex: usize,
    pub coords: Vec<String>,
    pub k: usize,
    pub max_face_vertices: Vec<usize>,
    pub edges_to: Vec<usize>,
}

/// Retraction output: ordered steps with vertex coordinates, step dimension,
/// the vertex set of the maximal face, and edge partners.
pub fn retraction_to_json(
    polytope: &Polytope,
    lattice: &FaceLattice,
    seq: &RetractionSequence,
) -> Vec<RetractionStepJson> {
    seq.steps
        .iter()
        .map(|s| RetractionStepJson {
            vertex: s.vertex,
            coords: polytope.vertices[s.vertex].iter().map(rat_string).collect(),
            k: s.k,
            max_face_vertices: lattice.faces[s.max_face].vertex_set.iter().copied().collect(),
            edges_to: s.edges.iter().map(|&(_, w)| w).collect(),
        })
        .collect()
}

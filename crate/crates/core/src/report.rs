//! JSON and CSV forms of chains and enumeration reports.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chains::{AdmissibleChain, EdgeData, EnumerationReport};
use crate::homogform::{HomogError, HomogForm};
use crate::lattice::{Direction, LatticeError, LatticePoint};
use crate::text::{parse_poly, ParseError};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge {edge}: {source}")]
    Poly { edge: usize, source: ParseError },
    #[error("edge {edge}: {source}")]
    Form { edge: usize, source: HomogError },
    #[error("direction {0:?}: {1}")]
    Direction([i64; 2], LatticeError),
    #[error("edge {0}: G and i must be given together")]
    Incomplete(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    #[serde(rename = "R")]
    pub r: Option<String>,
    #[serde(rename = "G", default)]
    pub g: Option<String>,
    #[serde(default)]
    pub i: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub points: Vec<[i64; 2]>,
    pub dirs: Vec<[i64; 2]>,
    #[serde(default)]
    pub witnesses: Vec<Option<WitnessJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub pool: Vec<String>,
    pub imax: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub point: [i64; 2],
    pub v11: i64,
    pub status: String,
    pub chain: Option<ChainJson>,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub bound: i64,
    pub config: ConfigJson,
    pub candidates: Vec<CandidateJson>,
}

pub fn chain_to_json(c: &AdmissibleChain) -> ChainJson {
    ChainJson {
        points: c
            .points
            .iter()
            .map(|p| {
                let (a, b) = p.as_int().expect("chain points are integral");
                [a, b]
            })
            .collect(),
        dirs: c.dirs.iter().map(|d| [d.rho(), d.sigma()]).collect(),
        witnesses: c
            .edges
            .iter()
            .map(|e| {
                let r = e.r.as_ref()?;
                Some(WitnessJson {
                    r: Some(r.to_string()),
                    g: e.companion.as_ref().map(|(g, _)| g.to_string()),
                    i: e.companion.as_ref().map(|(_, i)| *i),
                })
            })
            .collect(),
    }
}

/// Rebuilds a chain; polynomials are parsed and factored along the edge
/// direction. Missing witness entries become empty edge data.
pub fn chain_from_json(j: &ChainJson) -> Result<AdmissibleChain, ReportError> {
    let dirs = j
        .dirs
        .iter()
        .map(|&[r, s]| Direction::new(r, s).map_err(|e| ReportError::Direction([r, s], e)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut edges = Vec::with_capacity(dirs.len());
    for (idx, d) in dirs.iter().enumerate() {
        let edge = idx + 1;
        let w = j.witnesses.get(idx).cloned().flatten();
        let form = |text: &str| -> Result<HomogForm, ReportError> {
            let p = parse_poly(text).map_err(|source| ReportError::Poly { edge, source })?;
            HomogForm::from_poly(&p, *d).map_err(|source| ReportError::Form { edge, source })
        };
        let data = match w {
            None => EdgeData::default(),
            Some(w) => {
                let r = w.r.as_deref().map(form).transpose()?;
                let companion = match (w.g.as_deref(), w.i) {
                    (Some(g), Some(i)) => Some((form(g)?, i)),
                    (None, None) => None,
                    _ => return Err(ReportError::Incomplete(edge)),
                };
                EdgeData { r, companion }
            }
        };
        edges.push(data);
    }
    Ok(AdmissibleChain {
        points: j.points.iter().map(|&[a, b]| LatticePoint::int(a, b)).collect(),
        dirs,
        edges,
    })
}

pub fn parse_chain(text: &str) -> Result<AdmissibleChain, ReportError> {
    chain_from_json(&serde_json::from_str(text)?)
}

pub fn report_to_json(r: &EnumerationReport) -> ReportJson {
    ReportJson {
        bound: r.bound,
        config: ConfigJson {
            pool: r.config.search.pool.iter().map(|c| c.to_string()).collect(),
            imax: r.config.search.i_max,
        },
        candidates: r
            .candidates
            .iter()
            .map(|c| CandidateJson {
                point: [c.point.0, c.point.1],
                v11: c.v11,
                status: c.status.as_str().into(),
                chain: c.chain.as_ref().map(chain_to_json),
                reasons: c.reasons.clone(),
            })
            .collect(),
    }
}

pub fn report_to_csv(r: &EnumerationReport) -> String {
    let mut out = String::from("point,v11,status\n");
    for c in &r.candidates {
        out.push_str(&format!("\"({},{})\",{},{}\n", c.point.0, c.point.1, c.v11, c.status));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{validate_chain, ChainVerdict};
    use crate::homogform::{family_witness, Family};

    #[test]
    fn chain_round_trip() {
        let w = family_witness(&Family::Caso2 { n: 2 }).unwrap();
        let mut c = AdmissibleChain::start(1);
        c.push(
            Direction::new(2, -3).unwrap(),
            LatticePoint::int(7, 4),
            EdgeData::witnessed(w),
        );
        let text = serde_json::to_string(&chain_to_json(&c)).unwrap();
        let back = parse_chain(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(validate_chain(&back), Ok(ChainVerdict::Valid));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_chain("{"), Err(ReportError::Json(_))));
        let text = r#"{"points":[[1,0],[3,1]],"dirs":[[1,-2]],"witnesses":[{"R":"x^3*y+","G":null,"i":null}]}"#;
        assert!(matches!(parse_chain(text), Err(ReportError::Poly { edge: 1, .. })));
        let text = r#"{"points":[[1,0],[3,1]],"dirs":[[1,-2]],"witnesses":[null]}"#;
        assert_eq!(
            validate_chain(&parse_chain(text).unwrap()),
            Ok(ChainVerdict::SkeletonValid)
        );
    }
}

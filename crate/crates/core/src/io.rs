//! File formats: the potential spec (JSON), spectrum exports (JSON/CSV)
//! and CSV grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{OperatorCase, PiecewisePotential};
use crate::zeros::{SpectralKind, SpectralPoint, SpectrumWindow};

/// On-disk potential spec:
/// `{ "case": "line"|"dirichlet"|"neumann", "breakpoints": [...], "values": [...] }`
#[derive(Debug, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub case: OperatorCase,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn parse_potential(json: &str) -> Result<PiecewisePotential> {
    let spec: PotentialSpec = serde_json::from_str(json)
        .map_err(|e| Error::InvalidPotential(format!("potential spec: {e}")))?;
    PiecewisePotential::new(spec.case, spec.breakpoints, spec.values)
}

pub fn potential_to_json(p: &PiecewisePotential) -> String {
    let spec = PotentialSpec {
        case: p.case(),
        breakpoints: p.breakpoints().to_vec(),
        values: p.values().to_vec(),
    };
    serde_json::to_string_pretty(&spec).expect("serializable")
}

#[derive(Debug, Serialize, Deserialize)]
struct SpectralPointRecord {
    k_re: f64,
    k_im: f64,
    multiplicity: u32,
    kind: SpectralKind,
}

/// Export ordering is fixed lexicographically by (|k|, Re k, Im k).
pub fn sorted_for_export(points: &[SpectralPoint]) -> Vec<SpectralPoint> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        (a.k.norm(), a.k.re, a.k.im)
            .partial_cmp(&(b.k.norm(), b.k.re, b.k.im))
            .unwrap()
    });
    pts
}

pub fn spectrum_to_json(window: &SpectrumWindow) -> String {
    let records: Vec<SpectralPointRecord> = sorted_for_export(&window.points)
        .into_iter()
        .map(|p| SpectralPointRecord {
            k_re: p.k.re,
            k_im: p.k.im,
            multiplicity: p.multiplicity,
            kind: p.kind,
        })
        .collect();
    let doc = serde_json::json!({
        "window": window.rect,
        "total_count": window.total_count,
        "complete": window.complete,
        "points": records,
    });
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn spectrum_to_csv(window: &SpectrumWindow) -> String {
    let mut out = String::from("k_re,k_im,multiplicity,kind\n");
    for p in sorted_for_export(&window.points) {
        let kind = match p.kind {
            SpectralKind::Eigenvalue => "eigenvalue",
            SpectralKind::Resonance => "resonance",
            SpectralKind::RealResonance => "real_resonance",
            SpectralKind::Antibound => "antibound",
        };
        out.push_str(&format!("{},{},{},{}\n", p.k.re, p.k.im, p.multiplicity, kind));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_round_trip() {
        let json = r#"{"case":"dirichlet","breakpoints":[0.0,0.125,1.0],"values":[5.5,-0.1]}"#;
        let p = parse_potential(json).unwrap();
        assert_eq!(p.case(), OperatorCase::DirichletHalfLine);
        let back = potential_to_json(&p);
        let p2 = parse_potential(&back).unwrap();
        assert_eq!(p, p2);
    }

    #[test]
    fn rejects_malformed_spec() {
        assert!(parse_potential(r#"{"case":"line","breakpoints":[0,1]}"#).is_err());
        assert!(parse_potential(r#"{"case":"diagonal","breakpoints":[],"values":[]}"#).is_err());
        assert!(parse_potential("not json").is_err());
    }
}

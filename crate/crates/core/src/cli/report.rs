//! Input documents and machine-readable run reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::geom::{ConvexPolygon, Point};
use crate::oracle::RNG_ALGORITHM;

/// `{"vertices": [[x, y], ...], "name": "..."}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDocument {
    pub vertices: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl PolygonDocument {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid polygon document: {e}"))
    }

    pub fn to_polygon(&self) -> Result<ConvexPolygon, String> {
        let points = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &[x, y])| Point::try_new(x, y).ok_or_else(|| format!("vertex {i} has a non-finite coordinate")))
            .collect::<Result<Vec<_>, _>>()?;
        ConvexPolygon::new(points).map_err(|e| format!("invalid polygon: {e}"))
    }

    pub fn from_polygon(poly: &ConvexPolygon, name: Option<String>) -> Self {
        Self { vertices: poly.vertices().iter().map(|p| [p.x, p.y]).collect(), name }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
    /// Canonical counter-clockwise vertices.
    pub polygon: PolygonDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub crate_version: String,
    pub rng: String,
}

impl Default for Versions {
    fn default() -> Self {
        Self { crate_version: env!("CARGO_PKG_VERSION").to_string(), rng: RNG_ALGORITHM.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input: InputInfo,
    pub settings: serde_json::Value,
    pub results: serde_json::Value,
    pub versions: Versions,
    pub timing: Timing,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid report: {e}"))
    }

    /// Structural checks on a parsed report.
    pub fn validate(&self) -> Result<(), String> {
        if self.command.is_empty() {
            return Err("empty command echo".into());
        }
        if self.input.sha256.len() != 64 || !self.input.sha256.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err("input digest is not a sha256 hex string".into());
        }
        let poly = self.input.polygon.to_polygon()?;
        if poly.vertices().iter().zip(&self.input.polygon.vertices).any(|(p, v)| [p.x, p.y] != *v) {
            return Err("input polygon is not in canonical order".into());
        }
        if !self.results.is_object() || !self.settings.is_object() {
            return Err("settings and results must be objects".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn document_errors_name_the_invariant() {
        let doc = PolygonDocument::parse(r#"{"vertices": [[0,0],[2,1],[0,0.5],[-2,1]]}"#).unwrap();
        let err = doc.to_polygon().unwrap_err();
        assert!(err.contains("not convex"), "{err}");
        assert!(PolygonDocument::parse(r#"{"points": []}"#).is_err());
        let doc = PolygonDocument::parse(r#"{"vertices": [[0,0],[1,0]], "name": "seg"}"#).unwrap();
        assert!(doc.to_polygon().unwrap_err().contains("at least 3"));
    }
}

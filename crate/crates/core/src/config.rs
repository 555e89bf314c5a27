//! JSON configuration files for representations and lattice sweeps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::planar::{Point, PuncturedPlane};
use crate::propagator::{LatticeSpec, Site};
use crate::representation::{GroupRepZ, GroupoidRep, Mesh, MeshWeights, PolarFrame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshKindConfig {
    #[default]
    Spiral,
    Straight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedWeights {
    Unity,
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightsConfig {
    Named(NamedWeights),
    /// `[[[x, y], phase], ...]`
    Table(Vec<(Point, f64)>),
}

impl Default for WeightsConfig {
    fn default() -> Self {
        Self::Named(NamedWeights::Unity)
    }
}

fn default_basepoint() -> Point {
    Point::new(1.0, 0.0)
}

fn default_space() -> PuncturedPlane {
    PuncturedPlane::origin(1e-3).expect("valid default space")
}

/// `{basepoint, mesh_kind, phi, weights}`, plus an optional `space`
/// (default: the plane punctured at the origin, clearance 1e-3).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepConfig {
    #[serde(default = "default_basepoint")]
    pub basepoint: Point,
    #[serde(default)]
    pub mesh_kind: MeshKindConfig,
    pub phi: f64,
    #[serde(default)]
    pub weights: WeightsConfig,
    #[serde(default = "default_space")]
    pub space: PuncturedPlane,
}

impl RepConfig {
    pub fn build(&self) -> Result<GroupoidRep> {
        let center = *self
            .space
            .punctures()
            .first()
            .ok_or_else(|| Error::InvalidSpace("a representation needs at least one puncture".into()))?;
        let frame = PolarFrame::new(center, self.basepoint)?;
        let mesh = match self.mesh_kind {
            MeshKindConfig::Spiral => {
                self.space.single_puncture()?;
                Mesh::spiral(frame)
            }
            MeshKindConfig::Straight => Mesh::straight(frame),
        };
        let weights = match &self.weights {
            WeightsConfig::Named(NamedWeights::Unity) => MeshWeights::Unity,
            WeightsConfig::Named(NamedWeights::Symmetric) => {
                self.space.single_puncture()?;
                MeshWeights::symmetric(self.phi, frame)
            }
            WeightsConfig::Table(entries) => MeshWeights::Table(entries.clone()),
        };
        let group = vec![GroupRepZ::new(self.phi); self.space.punctures().len()];
        GroupoidRep::new(self.space.clone(), mesh, weights, group)
    }
}

/// `{lattice, endpoints, steps, phis}` for the lattice subcommands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(default)]
    pub lattice: LatticeSpec,
    pub endpoints: [Site; 2],
    pub steps: usize,
    #[serde(default)]
    pub phis: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn parse_rep_configs() {
        let c: RepConfig = serde_json::from_str(r#"{"phi": 1.0, "weights": "symmetric"}"#).unwrap();
        let rep = c.build().unwrap();
        let chi = rep.half_circle_phase(2.0, 4.0).unwrap();
        assert!((chi - Complex64::from_polar(1.0, 0.5)).norm() < 1e-9);

        let c: RepConfig = serde_json::from_str(
            r#"{"basepoint": [0, 2], "mesh_kind": "straight", "phi": 0.5,
                "weights": [[[0, 2], 0.0], [[3, 0], 0.25]],
                "space": {"punctures": [[0, 0]], "clearance": 0.01}}"#,
        )
        .unwrap();
        assert_eq!(
            c.weights,
            WeightsConfig::Table(vec![(Point::new(0.0, 2.0), 0.0), (Point::new(3.0, 0.0), 0.25)])
        );
        let rep = c.build().unwrap();
        assert_eq!(rep.weights().phase_at(Point::new(3.0, 0.0)).unwrap(), 0.25);

        let bad: RepConfig = serde_json::from_str(r#"{"phi": 1.0, "basepoint": [0, 0]}"#).unwrap();
        assert!(bad.build().is_err());
        assert!(serde_json::from_str::<RepConfig>(r#"{"phi": 1.0, "weights": "other"}"#).is_err());
        let _ = PI;
    }

    #[test]
    fn parse_sweep_config() {
        let c: SweepConfig = serde_json::from_str(
            r#"{"lattice": {"spacing": 1, "extent": 4, "puncture_offset": [0.5, 0.5],
                            "mass": 1, "hbar": 1, "dt": 1},
                "endpoints": [[1, 0], [1, 0]], "steps": 8, "phis": [0, 1]}"#,
        )
        .unwrap();
        assert_eq!(c.endpoints, [Site::new(1, 0), Site::new(1, 0)]);
        assert_eq!(c.lattice, LatticeSpec::default());
    }
}

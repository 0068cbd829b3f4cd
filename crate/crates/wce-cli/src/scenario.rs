//! Scenario files: the on-disk JSON description of a WCE operator instance.
//!
//! A scenario is one JSON object:
//!
//! ```json
//! {
//!   "name": "optional label",
//!   "masses": [1.0, 1.0],
//!   "partition": [[0, 1]],
//!   "u": [[1.0, 0.0], [1.0, 0.0]],
//!   "w": [[1.0, 0.0], [1.0, 0.0]],
//!   "p": 2.0
//! }
//! ```
//!
//! Atom indices are 0-based. Complex numbers are `[re, im]` pairs. `p` is a
//! real number ≥ 1 or the string `"inf"` (accepted by the format, rejected
//! when building an operator, whose theorems live on 1 ≤ p < ∞).

use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;
use wce_core::measure::{Exponent, FiniteMeasureSpace, MeasurableFn, SigmaSubalgebra};
use wce_core::{Complex64, Operator};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Scenario {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub masses: Vec<f64>,
    pub partition: Vec<Vec<usize>>,
    pub u: Vec<[f64; 2]>,
    pub w: Vec<[f64; 2]>,
    pub p: PValue,
}

/// `p` as it appears on disk: a number or the string `"inf"`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PValue {
    Finite(f64),
    Marker(String),
}

/// Loading failures carry a stable diagnostic code per failure class.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("[malformed-json] {0}")]
    MalformedJson(String),
    #[error("[io] {0}")]
    Io(String),
    #[error("[nonpositive-mass] atom {index} has mass {mass}, need > 0")]
    NonpositiveMass { index: usize, mass: f64 },
    #[error("[invalid-partition] {0}")]
    InvalidPartition(String),
    #[error("[length-mismatch] {field} has {got} entries, expected {expected}")]
    LengthMismatch {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("[exponent-below-one] p = {0}, need p >= 1")]
    ExponentBelowOne(f64),
    #[error("[unsupported-exponent] {0}")]
    UnsupportedExponent(String),
}

impl ScenarioError {
    pub fn code(&self) -> &'static str {
        match self {
            ScenarioError::MalformedJson(_) => "malformed-json",
            ScenarioError::Io(_) => "io",
            ScenarioError::NonpositiveMass { .. } => "nonpositive-mass",
            ScenarioError::InvalidPartition(_) => "invalid-partition",
            ScenarioError::LengthMismatch { .. } => "length-mismatch",
            ScenarioError::ExponentBelowOne(_) => "exponent-below-one",
            ScenarioError::UnsupportedExponent(_) => "unsupported-exponent",
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::MalformedJson(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| ScenarioError::Io(e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), ScenarioError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| ScenarioError::Io(e.to_string()))
    }

    /// The finite exponent, if this scenario has one.
    pub fn finite_p(&self) -> Option<f64> {
        match &self.p {
            PValue::Finite(p) => Some(*p),
            PValue::Marker(_) => None,
        }
    }

    /// Validates every invariant and builds the operator.
    pub fn to_operator(&self) -> Result<Operator, ScenarioError> {
        let n = self.masses.len();
        for (index, &mass) in self.masses.iter().enumerate() {
            if !(mass.is_finite() && mass > 0.0) {
                return Err(ScenarioError::NonpositiveMass { index, mass });
            }
        }
        if self.u.len() != n {
            return Err(ScenarioError::LengthMismatch {
                field: "u",
                expected: n,
                got: self.u.len(),
            });
        }
        if self.w.len() != n {
            return Err(ScenarioError::LengthMismatch {
                field: "w",
                expected: n,
                got: self.w.len(),
            });
        }
        let space = FiniteMeasureSpace::new(self.masses.clone())
            .map_err(|e| ScenarioError::InvalidPartition(e.to_string()))?;
        let subalgebra = SigmaSubalgebra::new(n, self.partition.clone()).map_err(|e| match e {
            wce_core::Error::InvalidPartition { reason } => {
                ScenarioError::InvalidPartition(reason)
            }
            other => ScenarioError::InvalidPartition(other.to_string()),
        })?;
        let p = match &self.p {
            PValue::Finite(p) => {
                if *p < 1.0 || !p.is_finite() {
                    return Err(ScenarioError::ExponentBelowOne(*p));
                }
                Exponent::Finite(*p)
            }
            PValue::Marker(m) if m == "inf" => {
                return Err(ScenarioError::UnsupportedExponent(
                    "operators act on L^p with finite p; \"inf\" is only a norm marker".into(),
                ))
            }
            PValue::Marker(m) => {
                return Err(ScenarioError::MalformedJson(format!(
                    "p must be a number or \"inf\", got \"{m}\""
                )))
            }
        };
        let complex =
            |pairs: &[[f64; 2]]| MeasurableFn::new(pairs.iter().map(|z| Complex64::new(z[0], z[1])).collect());
        Operator::new(space, subalgebra, complex(&self.u), complex(&self.w), p).map_err(
            |e| match e {
                wce_core::Error::DimensionMismatch { expected, got } => {
                    ScenarioError::LengthMismatch {
                        field: "weights",
                        expected,
                        got,
                    }
                }
                wce_core::Error::ExponentBelowOne { p } => ScenarioError::ExponentBelowOne(p),
                other => ScenarioError::UnsupportedExponent(other.to_string()),
            },
        )
    }

    /// Captures an operator back into the file format.
    pub fn from_operator(op: &Operator, name: Option<String>) -> Self {
        let pairs = |f: &wce_core::Fun| f.values().iter().map(|z| [z.re, z.im]).collect();
        Scenario {
            name,
            masses: op.space().masses().to_vec(),
            partition: op.subalgebra().blocks().to_vec(),
            u: pairs(op.inner_weight()),
            w: pairs(op.outer()),
            p: PValue::Finite(op.exponent()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> &'static str {
        r#"{"masses":[1.0],"partition":[[0]],"u":[[1.0,0.0]],"w":[[1.0,0.0]],"p":2.0}"#
    }

    #[test]
    fn minimal_scenario_loads() {
        let sc = Scenario::from_json(minimal()).unwrap();
        let op = sc.to_operator().unwrap();
        assert_eq!(op.dim(), 1);
        assert_eq!(op.euw().value(0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_with_distinct_codes() {
        let bad = Scenario::from_json("{").unwrap_err();
        assert_eq!(bad.code(), "malformed-json");

        let sc = Scenario::from_json(
            r#"{"masses":[0.0],"partition":[[0]],"u":[[1,0]],"w":[[1,0]],"p":2}"#,
        )
        .unwrap();
        assert_eq!(sc.to_operator().unwrap_err().code(), "nonpositive-mass");

        let sc = Scenario::from_json(
            r#"{"masses":[1.0,1.0],"partition":[[0]],"u":[[1,0],[1,0]],"w":[[1,0],[1,0]],"p":2}"#,
        )
        .unwrap();
        assert_eq!(sc.to_operator().unwrap_err().code(), "invalid-partition");

        let sc = Scenario::from_json(
            r#"{"masses":[1.0,1.0],"partition":[[0,1]],"u":[[1,0]],"w":[[1,0],[1,0]],"p":2}"#,
        )
        .unwrap();
        assert_eq!(sc.to_operator().unwrap_err().code(), "length-mismatch");

        let sc = Scenario::from_json(
            r#"{"masses":[1.0],"partition":[[0]],"u":[[1,0]],"w":[[1,0]],"p":0.5}"#,
        )
        .unwrap();
        assert_eq!(sc.to_operator().unwrap_err().code(), "exponent-below-one");

        let sc = Scenario::from_json(
            r#"{"masses":[1.0],"partition":[[0]],"u":[[1,0]],"w":[[1,0]],"p":"inf"}"#,
        )
        .unwrap();
        assert_eq!(sc.to_operator().unwrap_err().code(), "unsupported-exponent");
    }

    #[test]
    fn four_atom_scenario_matches_hand_averages() {
        let sc = Scenario::from_json(
            r#"{
                "masses": [1.0, 1.0, 2.0, 1.0],
                "partition": [[0, 1], [2, 3]],
                "u": [[1,0],[2,0],[1,0],[0,0]],
                "w": [[1,0],[1,0],[3,0],[1,0]],
                "p": 2.0
            }"#,
        )
        .unwrap();
        let op = sc.to_operator().unwrap();
        // E(uw) per block: (1*1 + 1*2)/2 = 3/2 and (2*3 + 1*0)/3 = 2
        assert!((op.euw().value(0) - Complex64::new(1.5, 0.0)).norm() < 1e-15);
        assert!((op.euw().value(2) - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn round_trip_is_exact() {
        let sc = Scenario::from_json(
            r#"{"name":"rt","masses":[0.25,1.5],"partition":[[1,0]],"u":[[0.1,-0.375],[2,0]],"w":[[1,0],[0,-1.125]],"p":1.5}"#,
        )
        .unwrap();
        let round = Scenario::from_json(&sc.to_json()).unwrap();
        assert_eq!(sc, round);
        let a = sc.to_operator().unwrap();
        let b = round.to_operator().unwrap();
        assert_eq!(a.euw(), b.euw());
        assert_eq!(Scenario::from_operator(&a, sc.name.clone()), sc);
    }
}

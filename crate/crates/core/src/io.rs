//! File formats.
//!
//! - distance matrix: CSV (`n` rows of `n` comma-separated floats) or JSON
//!   `{"n": .., "d": [[..]]}`
//! - point cloud: JSON `{"metric": "l1" | "l2", "points": [[..]]}`
//! - polytope: JSON `{"vertices": [[..]]}`

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexMagnitudeResult, IntrinsicVolumeVector, IvMethod, Polytope};
use crate::metric::{FiniteMetricSpace, Metric, PointCloud, Weighting};

/// Relative slack for the triangle-inequality check on ingested matrices.
pub const TRIANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistanceMatrixFile {
    pub n: usize,
    pub d: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointCloudFile {
    #[serde(default)]
    pub metric: Option<Metric>,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub vertices: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeOutput {
    pub magnitude: f64,
    pub weighting: Vec<f64>,
    pub min_pivot: f64,
}

impl From<&Weighting> for MagnitudeOutput {
    fn from(w: &Weighting) -> Self {
        Self {
            magnitude: w.magnitude,
            weighting: w.weights.clone(),
            min_pivot: w.min_pivot,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntrinsicVolumeOutput {
    #[serde(rename = "V")]
    pub v: Vec<f64>,
    pub exact: bool,
    pub method: IvMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
}

impl From<&IntrinsicVolumeVector> for IntrinsicVolumeOutput {
    fn from(iv: &IntrinsicVolumeVector) -> Self {
        Self {
            v: iv.values.clone(),
            exact: iv.is_exact(),
            method: iv.method,
            stderr: iv.stderr.clone(),
        }
    }
}

pub type ConvexMagnitudeOutput = ConvexMagnitudeResult;

/// Either kind of metric input accepted by the magnitude command.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricInput {
    Distances(FiniteMetricSpace),
    Cloud(PointCloud),
}

impl MetricInput {
    pub fn to_space(&self) -> Result<FiniteMetricSpace> {
        match self {
            Self::Distances(s) => Ok(s.clone()),
            Self::Cloud(c) => c.to_space(),
        }
    }
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn space_from_rows(rows: Vec<Vec<f64>>, check_triangle: bool) -> Result<FiniteMetricSpace> {
    if check_triangle {
        FiniteMetricSpace::new_checked(rows, TRIANGLE_TOL)
    } else {
        FiniteMetricSpace::new(rows)
    }
}

pub fn parse_distance_csv(text: &str, check_triangle: bool) -> Result<FiniteMetricSpace> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(parse_err)?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: '{f}' is not a number", line + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    space_from_rows(rows, check_triangle)
}

/// Distance-matrix or point-cloud JSON, told apart by their keys.
pub fn parse_metric_json(text: &str, metric: Option<Metric>, check_triangle: bool) -> Result<MetricInput> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    if value.get("points").is_some() {
        let file: PointCloudFile = serde_json::from_value(value).map_err(parse_err)?;
        let metric = metric.or(file.metric).unwrap_or_default();
        return Ok(MetricInput::Cloud(PointCloud::new(file.points, metric)?));
    }
    let file: DistanceMatrixFile = serde_json::from_value(value).map_err(parse_err)?;
    if file.d.len() != file.n {
        return Err(Error::validation(format!(
            "n = {} but the matrix has {} rows",
            file.n,
            file.d.len()
        )));
    }
    Ok(MetricInput::Distances(space_from_rows(file.d, check_triangle)?))
}

pub fn parse_polytope_json(text: &str) -> Result<Polytope> {
    let file: PolytopeFile = serde_json::from_str(text).map_err(parse_err)?;
    Polytope::new(file.vertices)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Reads a metric input, choosing CSV for `.csv` files and JSON otherwise.
pub fn read_metric_input(path: &Path, metric: Option<Metric>, check_triangle: bool) -> Result<MetricInput> {
    let text = read(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        Ok(MetricInput::Distances(parse_distance_csv(&text, check_triangle)?))
    } else {
        parse_metric_json(&text, metric, check_triangle)
    }
}

pub fn read_polytope(path: &Path) -> Result<Polytope> {
    parse_polytope_json(&read(path)?)
}

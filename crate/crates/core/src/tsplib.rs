//! TSPLIB instance parsing (EUC_2D subset) and distance matrices.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// How pairwise distances are derived from coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// TSPLIB `nint` convention: Euclidean distance rounded to the nearest integer.
    Rounded,
    /// Raw Euclidean distance.
    #[default]
    Exact,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" | "euc2d_exact" => Ok(Metric::Exact),
            "rounded" | "euc2d_rounded" => Ok(Metric::Rounded),
            other => Err(format!("unknown metric `{other}` (expected exact|rounded)")),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Rounded => "rounded",
            Metric::Exact => "exact",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A coverage problem instance: node coordinates, one of which is the base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    name: String,
    coords: Vec<Point>,
    base: usize,
    metric: Metric,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("instance needs at least 2 nodes (base + one target), got {0}")]
    TooFewNodes(usize),
    #[error("base index {base} out of range for {n} nodes")]
    BaseOutOfRange { base: usize, n: usize },
    #[error("node {0} has a non-finite coordinate")]
    NonFiniteCoordinate(usize),
}

impl Instance {
    pub fn new(
        name: impl Into<String>,
        coords: Vec<Point>,
        base: usize,
        metric: Metric,
    ) -> Result<Self, InstanceError> {
        if coords.len() < 2 {
            return Err(InstanceError::TooFewNodes(coords.len()));
        }
        if base >= coords.len() {
            return Err(InstanceError::BaseOutOfRange {
                base,
                n: coords.len(),
            });
        }
        if let Some(i) = coords
            .iter()
            .position(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(InstanceError::NonFiniteCoordinate(i));
        }
        Ok(Instance {
            name: name.into(),
            coords,
            base,
            metric,
        })
    }

    pub fn with_base(mut self, base: usize) -> Result<Self, InstanceError> {
        if base >= self.coords.len() {
            return Err(InstanceError::BaseOutOfRange {
                base,
                n: self.coords.len(),
            });
        }
        self.base = base;
        Ok(self)
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Number of nodes including the base.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Number of targets (every node except the base).
    pub fn num_targets(&self) -> usize {
        self.coords.len() - 1
    }

    /// Target node indices in ascending order.
    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.coords.len()).filter(move |&i| i != self.base)
    }

    /// Serializes to a TSPLIB EUC_2D document. Coordinates use Rust's shortest
    /// round-trip float formatting, so re-parsing yields identical values.
    pub fn to_tsplib(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.coords.len());
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D");
        let _ = writeln!(out, "NODE_COORD_SECTION");
        for (i, p) in self.coords.iter().enumerate() {
            let _ = writeln!(out, "{} {:?} {:?}", i + 1, p.x, p.y);
        }
        out.push_str("EOF\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported edge weight type `{0}`")]
    UnsupportedEdgeWeightType(String),
    #[error("invalid coordinate line: {0}")]
    InvalidCoordinate(String),
    #[error("duplicate node id {0}")]
    DuplicateNodeId(i64),
    #[error("fewer than 2 nodes ({0})")]
    TooFewNodes(usize),
    #[error("missing NODE_COORD_SECTION")]
    MissingCoordSection,
    #[error("missing EDGE_WEIGHT_TYPE")]
    MissingEdgeWeightType,
    #[error("DIMENSION {declared} does not match {found} coordinate lines")]
    DimensionMismatch { declared: usize, found: usize },
}

/// TSPLIB parse failure with the 1-based line number it was detected on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

const KNOWN_KEYS: &[&str] = &[
    "NAME",
    "TYPE",
    "COMMENT",
    "DIMENSION",
    "EDGE_WEIGHT_TYPE",
    "CAPACITY",
    "EDGE_WEIGHT_FORMAT",
    "EDGE_DATA_FORMAT",
    "NODE_COORD_TYPE",
    "DISPLAY_DATA_TYPE",
];

/// Parses the EUC_2D subset of TSPLIB. Node ids are normalized to file order;
/// the first node becomes the base.
pub fn parse_tsplib(text: &str) -> Result<Instance, ParseError> {
    let err = |line: usize, kind| ParseError { line, kind };

    let mut name = String::new();
    let mut dimension: Option<(usize, usize)> = None;
    let mut edge_weight_type: Option<String> = None;
    let mut in_coords = false;
    let mut coord_section_line = 0;
    let mut ids: Vec<i64> = Vec::new();
    let mut coords: Vec<Point> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }

        if in_coords {
            let mut parts = line.split_whitespace();
            let (Some(id), Some(x), Some(y), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(err(lineno, ParseErrorKind::InvalidCoordinate(line.into())));
            };
            let id: i64 = id
                .parse()
                .map_err(|_| err(lineno, ParseErrorKind::InvalidCoordinate(line.into())))?;
            let parse_f = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(lineno, ParseErrorKind::InvalidCoordinate(line.into())))
            };
            let p = Point::new(parse_f(x)?, parse_f(y)?);
            if ids.contains(&id) {
                return Err(err(lineno, ParseErrorKind::DuplicateNodeId(id)));
            }
            ids.push(id);
            coords.push(p);
            continue;
        }

        if line == "NODE_COORD_SECTION" {
            match edge_weight_type.as_deref() {
                Some("EUC_2D") => {}
                Some(other) => {
                    return Err(err(
                        lineno,
                        ParseErrorKind::UnsupportedEdgeWeightType(other.into()),
                    ))
                }
                None => return Err(err(lineno, ParseErrorKind::MissingEdgeWeightType)),
            }
            in_coords = true;
            coord_section_line = lineno;
            continue;
        }

        let Some((key, value)) = line.split_once(':') else {
            return Err(err(lineno, ParseErrorKind::MalformedHeader(line.into())));
        };
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(err(
                lineno,
                ParseErrorKind::MalformedHeader(format!("unknown keyword `{key}`")),
            ));
        }
        match key {
            "NAME" => name = value.to_string(),
            "DIMENSION" => {
                let d = value.parse().map_err(|_| {
                    err(
                        lineno,
                        ParseErrorKind::MalformedHeader(format!("bad DIMENSION `{value}`")),
                    )
                })?;
                dimension = Some((d, lineno));
            }
            "EDGE_WEIGHT_TYPE" => {
                if value != "EUC_2D" {
                    return Err(err(
                        lineno,
                        ParseErrorKind::UnsupportedEdgeWeightType(value.into()),
                    ));
                }
                edge_weight_type = Some(value.to_string());
            }
            _ => {}
        }
    }

    if !in_coords {
        return Err(err(last_line, ParseErrorKind::MissingCoordSection));
    }
    if coords.len() < 2 {
        return Err(err(
            coord_section_line.max(last_line),
            ParseErrorKind::TooFewNodes(coords.len()),
        ));
    }
    if let Some((declared, line)) = dimension {
        if declared != coords.len() {
            return Err(err(
                line,
                ParseErrorKind::DimensionMismatch {
                    declared,
                    found: coords.len(),
                },
            ));
        }
    }

    Ok(Instance {
        name,
        coords,
        base: 0,
        metric: Metric::default(),
    })
}

/// Symmetric matrix of pairwise node distances, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds from an explicit row-major square matrix; panics when the
    /// invariants (square, symmetric, zero diagonal, finite, nonnegative) fail.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            for (j, &v) in row.iter().enumerate() {
                assert!(v.is_finite() && v >= 0.0, "bad distance at ({i},{j})");
                assert!(v == rows[j][i], "asymmetric at ({i},{j})");
                if i == j {
                    assert!(v == 0.0, "nonzero diagonal at {i}");
                }
                d.push(v);
            }
        }
        DistanceMatrix { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// Smallest strictly positive off-diagonal entry, if any.
    pub fn min_positive(&self) -> Option<f64> {
        self.d
            .iter()
            .copied()
            .filter(|&v| v > 0.0)
            .min_by(|a, b| a.total_cmp(b))
    }
}

/// TSPLIB `nint`.
fn nint(v: f64) -> f64 {
    (v + 0.5).floor()
}

pub fn build_distance_matrix(inst: &Instance) -> DistanceMatrix {
    let n = inst.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let e = inst.coords[i].distance(&inst.coords[j]);
            let v = match inst.metric {
                Metric::Exact => e,
                Metric::Rounded => nint(e),
            };
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    DistanceMatrix { n, d }
}

/// Distance from `base` to its farthest target.
pub fn critical_distance(dm: &DistanceMatrix, base: usize) -> f64 {
    dm.row(base)
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != base)
        .map(|(_, &v)| v)
        .fold(0.0, f64::max)
}

//! JSON spec files for manifolds and foliations.
//!
//! Leaves are expression strings in the chart's coordinates. Only the upper
//! triangle of the bivector, the metrics and the 2-form is stored; omitted
//! entries are zero.

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::connection::CoMetric;
use crate::error::{Error, Result};
use crate::foliation::TangentMetric;
use crate::poisson::Bivector;
use crate::reconstruction::FoliationInput;
use crate::symbolic::{parse_scalar, Chart, FieldMatrix, Rational, RationalPoint, ScalarField};
use crate::tensor::{subsets, PForm, VectorField};

/// One stored entry of a symmetric or antisymmetric matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub expr: String,
}

impl Entry {
    pub fn new(i: usize, j: usize, expr: impl Into<String>) -> Self {
        Entry { i, j, expr: expr.into() }
    }
}

/// A sample coordinate: an integer or a string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SampleValue {
    Int(i64),
    Text(String),
}

impl SampleValue {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            SampleValue::Int(v) => Ok(Rational::from_integer((*v).into())),
            SampleValue::Text(t) => {
                Rational::from_str(t.trim()).map_err(|_| Error::Schema(format!("`{t}` is not a rational number")))
            }
        }
    }

    fn from_rational(r: &Rational) -> Self {
        if r.is_integer() {
            if let Ok(v) = r.to_integer().to_string().parse::<i64>() {
                return SampleValue::Int(v);
            }
        }
        SampleValue::Text(r.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldSpec {
    pub name: String,
    pub coordinates: Vec<String>,
    /// Entries `pi[i][j]` with `i < j`.
    pub pi: Vec<Entry>,
    /// Entries `g[i][j]` with `i <= j`.
    pub cometric: Vec<Entry>,
    pub declared_rank: usize,
    pub samples: Vec<Vec<SampleValue>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliationSpecFile {
    pub name: String,
    pub coordinates: Vec<String>,
    /// Component lists of the vector fields spanning the distribution.
    pub frame: Vec<Vec<String>>,
    /// Entries with `i <= j`.
    pub tangent_metric: Vec<Entry>,
    /// Entries with `i < j`.
    pub omega: Vec<Entry>,
    pub samples: Vec<Vec<SampleValue>>,
}

/// A parsed and validated manifold spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifold {
    pub name: String,
    pub pi: Bivector,
    pub metric: CoMetric,
    pub declared_rank: usize,
    pub samples: Vec<RationalPoint>,
}

impl Manifold {
    pub fn chart(&self) -> &Chart {
        self.pi.chart()
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

fn parse_field(text: &str, chart: &Chart, field: String) -> Result<ScalarField> {
    parse_scalar(text, chart).map_err(|e| e.in_field(field))
}

fn parse_samples(samples: &[Vec<SampleValue>], chart: &Chart) -> Result<Vec<RationalPoint>> {
    if samples.is_empty() {
        return Err(Error::Schema("at least one sample point is required".into()));
    }
    samples
        .iter()
        .map(|row| {
            let coords = row.iter().map(SampleValue::to_rational).collect::<Result<Vec<_>>>()?;
            if coords.len() != chart.dim() {
                return Err(Error::DimensionMismatch { expected: chart.dim(), got: coords.len() });
            }
            Ok(RationalPoint::new(coords))
        })
        .collect::<Result<_>>()
        .map_err(|e: Error| e.in_field("samples"))
}

/// Parses a sample list on its own, e.g. from a `--samples` override file.
pub fn parse_sample_file(text: &str, chart: &Chart) -> Result<Vec<RationalPoint>> {
    let rows: Vec<Vec<SampleValue>> = parse_json(text)?;
    parse_samples(&rows, chart)
}

/// Parses `entries` into a full matrix, mirrored with `sign` below the
/// diagonal. `strict` requires `i < j`.
fn entry_matrix(entries: &[Entry], chart: &Chart, field: &str, strict: bool, sign: i64) -> Result<FieldMatrix> {
    let n = chart.dim();
    let mut m = FieldMatrix::zeros(n, n, n);
    let mut seen = BTreeSet::new();
    for e in entries {
        let name = format!("{field}[{}][{}]", e.i, e.j);
        for idx in [e.i, e.j] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, dim: n }.in_field(name));
            }
        }
        if e.i > e.j || (strict && e.i == e.j) {
            let rel = if strict { "i < j" } else { "i <= j" };
            return Err(Error::Schema(format!("{name}: only entries with {rel} are stored")));
        }
        if !seen.insert((e.i, e.j)) {
            return Err(Error::Schema(format!("{name}: duplicate entry")));
        }
        let v = parse_field(&e.expr, chart, name)?;
        if e.i != e.j {
            m.set(e.j, e.i, v.scale(&Rational::from_integer(sign.into())));
        }
        m.set(e.i, e.j, v);
    }
    Ok(m)
}

fn upper_entries(m: &FieldMatrix, chart: &Chart, strict: bool) -> Vec<Entry> {
    let n = chart.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (if strict { i + 1 } else { i })..n {
            let v = m.get(i, j);
            if !v.is_zero() {
                out.push(Entry::new(i, j, v.display(chart).to_string()));
            }
        }
    }
    out
}

/// Serializable form of sample points.
pub fn sample_rows(samples: &[RationalPoint]) -> Vec<Vec<SampleValue>> {
    samples.iter().map(|p| p.coords().iter().map(SampleValue::from_rational).collect()).collect()
}

impl ManifoldSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn build(&self) -> Result<Manifold> {
        let chart = Chart::new(self.coordinates.iter().cloned()).map_err(|e| e.in_field("coordinates"))?;
        let pi_m = entry_matrix(&self.pi, &chart, "pi", true, -1)?;
        let g_m = entry_matrix(&self.cometric, &chart, "cometric", false, 1)?;
        let samples = parse_samples(&self.samples, &chart)?;
        let pi = Bivector::new(chart.clone(), pi_m)?;
        let metric = CoMetric::new(chart, g_m)?;
        Ok(Manifold { name: self.name.clone(), pi, metric, declared_rank: self.declared_rank, samples })
    }

    /// Serializable form of a structure.
    pub fn from_structure(
        name: &str,
        pi: &Bivector,
        g: &CoMetric,
        declared_rank: usize,
        samples: &[RationalPoint],
    ) -> Self {
        let chart = pi.chart();
        ManifoldSpec {
            name: name.to_string(),
            coordinates: chart.names().to_vec(),
            pi: upper_entries(pi.matrix(), chart, true),
            cometric: upper_entries(g.matrix(), chart, false),
            declared_rank,
            samples: sample_rows(samples),
        }
    }
}

/// Reads and validates a manifold spec.
pub fn load_manifold(text: &str) -> Result<Manifold> {
    ManifoldSpec::from_json(text)?.build()
}

impl FoliationSpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn build(&self) -> Result<FoliationInput> {
        let chart = Chart::new(self.coordinates.iter().cloned()).map_err(|e| e.in_field("coordinates"))?;
        let n = chart.dim();
        let frame = self
            .frame
            .iter()
            .enumerate()
            .map(|(a, comps)| {
                if comps.len() != n {
                    return Err(
                        Error::DimensionMismatch { expected: n, got: comps.len() }.in_field(format!("frame[{a}]"))
                    );
                }
                let fields = comps
                    .iter()
                    .enumerate()
                    .map(|(i, c)| parse_field(c, &chart, format!("frame[{a}][{i}]")))
                    .collect::<Result<_>>()?;
                Ok(VectorField::new(fields))
            })
            .collect::<Result<Vec<_>>>()?;
        let metric = TangentMetric::new(entry_matrix(&self.tangent_metric, &chart, "tangent_metric", false, 1)?)?;
        let om = entry_matrix(&self.omega, &chart, "omega", true, -1)?;
        let comps = subsets(n, 2).iter().map(|ij| om.get(ij[0], ij[1]).clone()).collect();
        let omega = PForm::from_components(n, n, 2, comps);
        let samples = parse_samples(&self.samples, &chart)?;
        Ok(FoliationInput { chart, frame, metric, omega, samples })
    }
}

pub fn load_foliation(text: &str) -> Result<FoliationInput> {
    FoliationSpecFile::from_json(text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    const WARPED: &str = r#"{
        "name": "warped",
        "coordinates": ["x", "y", "z"],
        "pi": [{"i": 0, "j": 1, "expr": "1"}],
        "cometric": [{"i": 0, "j": 0, "expr": "1"}, {"i": 1, "j": 1, "expr": "1"}, {"i": 2, "j": 2, "expr": "1/(1+z^2)"}],
        "declared_rank": 2,
        "samples": [[0, 0, 0], [1, "-1/2", 3]]
    }"#;

    #[test]
    fn parses_manifold() {
        let m = load_manifold(WARPED).unwrap();
        assert_eq!(m.pi.entry(1, 0), &-ScalarField::one(3));
        assert_eq!(m.samples[1].to_string(), "(1,-1/2,3)");
        let spec = ManifoldSpec::from_structure("warped", &m.pi, &m.metric, 2, &m.samples);
        assert_eq!(load_manifold(&spec.to_json()).unwrap(), m);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = WARPED.replace("\"expr\": \"1\"}],", "\"expr\": \"x+\"}],");
        let err = load_manifold(&bad).unwrap_err();
        assert!(matches!(err.root(), Error::SyntaxError { .. }));
        assert!(err.is_input_error());
        assert!(err.to_string().starts_with("pi[0][1]: syntax error"));
        let lower = WARPED.replace("\"i\": 0, \"j\": 1", "\"i\": 1, \"j\": 0");
        assert!(matches!(load_manifold(&lower), Err(Error::Schema(_))));
        let no_samples = WARPED.replace("[[0, 0, 0], [1, \"-1/2\", 3]]", "[]");
        assert!(matches!(load_manifold(&no_samples), Err(Error::Schema(_))));
        let short = WARPED.replace("[0, 0, 0]", "[0, 0]");
        assert!(load_manifold(&short).unwrap_err().is_input_error());
        assert!(matches!(load_manifold("{}"), Err(Error::Schema(_))));
    }

    #[test]
    fn parses_foliation() {
        let text = r#"{
            "name": "flat",
            "coordinates": ["x", "y", "z"],
            "frame": [["1", "0", "0"], ["0", "1", "0"]],
            "tangent_metric": [{"i": 0, "j": 0, "expr": "1"}, {"i": 1, "j": 1, "expr": "1"}, {"i": 2, "j": 2, "expr": "1"}],
            "omega": [{"i": 0, "j": 1, "expr": "1"}],
            "samples": [[0, 0, 0]]
        }"#;
        let f = load_foliation(text).unwrap();
        assert_eq!(f.frame.len(), 2);
        assert_eq!(f.omega.get(&[1, 0]), -ScalarField::one(3));
        let missing = text.replace(",\n            \"omega\": [{\"i\": 0, \"j\": 1, \"expr\": \"1\"}]", "");
        assert!(matches!(load_foliation(&missing), Err(Error::Schema(_))));
    }
}

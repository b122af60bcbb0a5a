//! On-disk JSON formats: span descriptions and tensors.
//!
//! Span files carry either a layer recipe (`dense`, `conv`, `graph`) or
//! the fully materialized legs (`raw`). Tensor files carry one function
//! (`values`) or one measure (`density`) together with the size of its
//! space. Serialization keeps a fixed key order, so emitting a parsed
//! raw file reproduces it byte for byte.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use finspan::{
    conv_span, dense_span, graph_span, ConvSpec, Error, FinMap, FinSet, FunVec, GraphSpec, MeasVec,
    ParametricSpan,
};

/// A span description. `raw` lists the legs directly; the other kinds
/// are recipes elaborated by [`elaborate`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpanFile {
    Dense {
        n_i: usize,
        n_o: usize,
    },
    Conv {
        n_i: usize,
        n_o: usize,
        #[serde(rename = "S_i")]
        input_shape: Vec<usize>,
        #[serde(rename = "F")]
        filter_shape: Vec<usize>,
        stride: Vec<usize>,
        dilation: Vec<usize>,
    },
    Graph {
        vertices: usize,
        edges: Vec<(usize, usize)>,
        bins: Vec<usize>,
        num_bins: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        density: Option<Vec<f64>>,
    },
    Raw {
        #[serde(rename = "E")]
        apex: usize,
        #[serde(rename = "X")]
        input: usize,
        #[serde(rename = "Y")]
        output: usize,
        #[serde(rename = "W")]
        weights: usize,
        s: Vec<usize>,
        t: Vec<usize>,
        pi: Vec<usize>,
    },
}

/// A function on a finite set: `space` elements, one value each.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunFile {
    pub space: usize,
    pub values: Vec<f64>,
}

/// A measure on a finite set, stored as a density per element.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasFile {
    pub space: usize,
    pub density: Vec<f64>,
}

/// Failure modes of the command surface, split by exit code: usage and
/// parse problems exit 2, violated invariants and space mismatches
/// exit 3.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(message) | CliError::Invariant(message) => message,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Invariant(err.to_string())
    }
}

fn rename_field(err: Error, name: &'static str) -> Error {
    match err {
        Error::OutOfRange {
            index,
            value,
            bound,
            ..
        } => Error::OutOfRange {
            field: name,
            index,
            value,
            bound,
        },
        Error::LengthMismatch {
            expected, actual, ..
        } => Error::LengthMismatch {
            field: name,
            expected,
            actual,
        },
        other => other,
    }
}

pub fn read_span_file(path: &Path) -> Result<SpanFile, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Usage(format!("cannot read {}: {}", path.display(), err)))?;
    serde_json::from_str(&text)
        .map_err(|err| CliError::Usage(format!("cannot parse {}: {}", path.display(), err)))
}

pub fn write_span_file(path: &Path, file: &SpanFile) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(file)
        .map_err(|err| CliError::Usage(format!("cannot serialize span: {}", err)))?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|err| CliError::Usage(format!("cannot write {}: {}", path.display(), err)))
}

/// Builds the span a file describes. Graph files may carry an edge
/// density; it is returned alongside so commands can use it as the
/// default measure.
pub fn elaborate(file: &SpanFile) -> Result<(ParametricSpan, Option<MeasVec>), CliError> {
    match file {
        SpanFile::Dense { n_i, n_o } => Ok((dense_span(*n_i, *n_o)?, None)),
        SpanFile::Conv {
            n_i,
            n_o,
            input_shape,
            filter_shape,
            stride,
            dilation,
        } => {
            let spec = ConvSpec {
                in_channels: *n_i,
                out_channels: *n_o,
                input_shape: input_shape.clone(),
                filter_shape: filter_shape.clone(),
                stride: stride.clone(),
                dilation: dilation.clone(),
            };
            Ok((conv_span(&spec)?, None))
        }
        SpanFile::Graph {
            vertices,
            edges,
            bins,
            num_bins,
            density,
        } => {
            let spec = GraphSpec {
                num_vertices: *vertices,
                edges: edges.clone(),
                bin_of_edge: bins.clone(),
                num_bins: *num_bins,
                edge_density: density.clone(),
            };
            let (span, mu) = graph_span(&spec)?;
            Ok((span, Some(mu)))
        }
        SpanFile::Raw {
            apex,
            input,
            output,
            weights,
            s,
            t,
            pi,
        } => {
            let apex = FinSet::new(*apex);
            let source = FinMap::new(apex, FinSet::new(*input), s.clone())
                .map_err(|err| rename_field(err, "s"))?;
            let target = FinMap::new(apex, FinSet::new(*output), t.clone())
                .map_err(|err| rename_field(err, "t"))?;
            let weight_map = FinMap::new(apex, FinSet::new(*weights), pi.clone())
                .map_err(|err| rename_field(err, "pi"))?;
            Ok((ParametricSpan::new(apex, source, target, weight_map)?, None))
        }
    }
}

/// The raw form of a span: every leg written out as its target array.
pub fn to_raw(span: &ParametricSpan) -> SpanFile {
    SpanFile::Raw {
        apex: span.apex().size,
        input: span.input_space().size,
        output: span.output_space().size,
        weights: span.weight_space().size,
        s: span.source().targets().to_vec(),
        t: span.target().targets().to_vec(),
        pi: span.weight_map().targets().to_vec(),
    }
}

pub fn read_fun(path: &Path) -> Result<FunVec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Usage(format!("cannot read {}: {}", path.display(), err)))?;
    let file: FunFile = serde_json::from_str(&text).map_err(|err| {
        CliError::Usage(format!(
            "cannot parse {} as a function file: {}",
            path.display(),
            err
        ))
    })?;
    Ok(FunVec::new(FinSet::new(file.space), file.values)?)
}

pub fn read_meas(path: &Path) -> Result<MeasVec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|err| CliError::Usage(format!("cannot read {}: {}", path.display(), err)))?;
    let file: MeasFile = serde_json::from_str(&text).map_err(|err| {
        CliError::Usage(format!(
            "cannot parse {} as a measure file: {}",
            path.display(),
            err
        ))
    })?;
    Ok(MeasVec::new(FinSet::new(file.space), file.density)?)
}

pub fn write_fun(path: &Path, fun: &FunVec) -> Result<(), CliError> {
    let file = FunFile {
        space: fun.space().size,
        values: fun.values().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|err| CliError::Usage(format!("cannot serialize tensor: {}", err)))?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|err| CliError::Usage(format!("cannot write {}: {}", path.display(), err)))
}

pub fn write_meas(path: &Path, meas: &MeasVec) -> Result<(), CliError> {
    let file = MeasFile {
        space: meas.space().size,
        density: meas.density().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file)
        .map_err(|err| CliError::Usage(format!("cannot serialize tensor: {}", err)))?;
    text.push('\n');
    fs::write(path, text)
        .map_err(|err| CliError::Usage(format!("cannot write {}: {}", path.display(), err)))
}

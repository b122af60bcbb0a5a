//! Span constructors for the classical layer shapes.
//!
//! - [`dense_span`]: fully connected. Apex `n_i x n_o`, weight leg an
//!   isomorphism (no sharing).
//! - [`conv_span`]: strided, dilated cross-correlation. Apex
//!   `n_i x n_o x F x S_o`; the source leg is the affine placement map
//!   `(f, p) -> dilation * f + stride * p`, the other legs are
//!   projections. Weight sharing happens along the output positions.
//! - [`graph_span`]: message passing over an explicit edge list, with
//!   weights shared across edges that fall in the same pseudo-coordinate
//!   bin.
//!
//! All product sets are flattened row-major, last axis fastest, so a
//! weight tensor `w[c_i][c_o][f]` is laid out exactly as
//! `flatten_index(&[n_i, n_o, F...], ...)` dictates.

use crate::error::{Error, Result};
use crate::finset::{flatten_index, shape_product, FinMap, FinSet};
use crate::integration::MeasVec;
use crate::span::ParametricSpan;

/// Shape parameters for a strided, dilated correlation layer.
///
/// All four tuples must share the same rank, and the dilated filter must
/// fit inside the input: `dilation[k] * (filter_shape[k] - 1) + 1 <=
/// input_shape[k]` for every dimension `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvSpec {
    pub in_channels: usize,
    pub out_channels: usize,
    pub input_shape: Vec<usize>,
    pub filter_shape: Vec<usize>,
    pub stride: Vec<usize>,
    pub dilation: Vec<usize>,
}

impl ConvSpec {
    fn validate(&self) -> Result<()> {
        let rank = self.input_shape.len();
        if rank == 0 {
            return Err(Error::InvalidSize {
                field: "input_shape",
            });
        }
        for (field, tuple) in [
            ("filter_shape", &self.filter_shape),
            ("stride", &self.stride),
            ("dilation", &self.dilation),
        ] {
            if tuple.len() != rank {
                return Err(Error::LengthMismatch {
                    field,
                    expected: rank,
                    actual: tuple.len(),
                });
            }
        }
        if self.in_channels == 0 {
            return Err(Error::InvalidSize {
                field: "in_channels",
            });
        }
        if self.out_channels == 0 {
            return Err(Error::InvalidSize {
                field: "out_channels",
            });
        }
        for (field, tuple) in [
            ("input_shape", &self.input_shape),
            ("filter_shape", &self.filter_shape),
            ("stride", &self.stride),
            ("dilation", &self.dilation),
        ] {
            if tuple.contains(&0) {
                return Err(Error::InvalidSize { field });
            }
        }
        Ok(())
    }
}

/// A graph layer specification: an explicit edge list with one weight
/// bin per edge and an optional per-edge density.
///
/// Self-loops are allowed; duplicate edges contribute additively.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSpec {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub bin_of_edge: Vec<usize>,
    pub num_bins: usize,
    pub edge_density: Option<Vec<f64>>,
}

/// One axis of the uniform binning grid used by
/// [`bin_pseudo_coordinates`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridDim {
    pub low: f64,
    pub high: f64,
    pub bins: usize,
}

/// The fully connected span on `n_i` inputs and `n_o` outputs.
///
/// Apex elements are `(i, j)` pairs in row-major order; the weight leg is
/// the identity, so with counting measure the forward pass computes
/// `out[j] = sum_i x[i] * w[i * n_o + j]`.
pub fn dense_span(n_i: usize, n_o: usize) -> Result<ParametricSpan> {
    if n_i == 0 {
        return Err(Error::InvalidSize { field: "n_i" });
    }
    if n_o == 0 {
        return Err(Error::InvalidSize { field: "n_o" });
    }
    let apex_size = n_i
        .checked_mul(n_o)
        .ok_or(Error::InvalidSize { field: "apex" })?;
    let apex = FinSet::new(apex_size);
    let mut source_targets = Vec::with_capacity(apex_size);
    let mut target_targets = Vec::with_capacity(apex_size);
    for i in 0..n_i {
        for j in 0..n_o {
            source_targets.push(i);
            target_targets.push(j);
        }
    }
    ParametricSpan::new(
        apex,
        FinMap::new(apex, FinSet::new(n_i), source_targets)?,
        FinMap::new(apex, FinSet::new(n_o), target_targets)?,
        FinMap::identity(apex),
    )
}

/// Output shape of a valid (unpadded) placement grid:
/// `S_o[k] = (S_i[k] - dilation[k] * (F[k] - 1) - 1) / stride[k] + 1`.
pub fn conv_output_shape(spec: &ConvSpec) -> Result<Vec<usize>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.input_shape.len());
    for (dim, ((&extent, &filter), (&stride, &dilation))) in spec
        .input_shape
        .iter()
        .zip(&spec.filter_shape)
        .zip(spec.stride.iter().zip(&spec.dilation))
        .enumerate()
    {
        let span_of_filter = dilation * (filter - 1) + 1;
        if span_of_filter > extent {
            return Err(Error::FilterTooLarge { dim });
        }
        out.push((extent - span_of_filter) / stride + 1);
    }
    Ok(out)
}

/// Walks a row-major multi-index forward one step; returns false after
/// the last index.
fn increment_multi(index: &mut [usize], shape: &[usize]) -> bool {
    for k in (0..shape.len()).rev() {
        index[k] += 1;
        if index[k] < shape[k] {
            return true;
        }
        index[k] = 0;
    }
    false
}

/// The strided, dilated correlation span.
///
/// Apex: `(c_i, c_o, f, p)` flattened over `(n_i, n_o, F..., S_o...)`.
/// The target and weight legs project onto `(c_o, p)` and
/// `(c_i, c_o, f)`; the source leg places the filter tap at
/// `dilation * f + stride * p` within each spatial dimension, so forward
/// evaluation with counting measure computes the cross-correlation
///
/// ```text
/// out[c_o, p] = sum over c_i, f of x[c_i, dilation*f + stride*p] * w[c_i, c_o, f]
/// ```
pub fn conv_span(spec: &ConvSpec) -> Result<ParametricSpan> {
    let out_shape = conv_output_shape(spec)?;
    let rank = spec.input_shape.len();

    let mut apex_shape = vec![spec.in_channels, spec.out_channels];
    apex_shape.extend(&spec.filter_shape);
    apex_shape.extend(&out_shape);
    let apex_size = shape_product(&apex_shape)?;
    let apex = FinSet::new(apex_size);

    let mut input_shape = vec![spec.in_channels];
    input_shape.extend(&spec.input_shape);
    let mut output_shape = vec![spec.out_channels];
    output_shape.extend(&out_shape);
    let mut weight_shape = vec![spec.in_channels, spec.out_channels];
    weight_shape.extend(&spec.filter_shape);

    let input_size = shape_product(&input_shape)?;
    let output_size = shape_product(&output_shape)?;
    let weight_size = shape_product(&weight_shape)?;

    let mut source_targets = Vec::with_capacity(apex_size);
    let mut target_targets = Vec::with_capacity(apex_size);
    let mut weight_targets = Vec::with_capacity(apex_size);

    let mut multi = vec![0usize; apex_shape.len()];
    let mut source_multi = vec![0usize; 1 + rank];
    let mut target_multi = vec![0usize; 1 + rank];
    let mut weight_multi = vec![0usize; 2 + rank];
    let mut remaining = apex_size;
    while remaining > 0 {
        let (c_i, c_o) = (multi[0], multi[1]);
        let filter_pos = &multi[2..2 + rank];
        let out_pos = &multi[2 + rank..];

        source_multi[0] = c_i;
        for k in 0..rank {
            source_multi[1 + k] = spec.dilation[k] * filter_pos[k] + spec.stride[k] * out_pos[k];
        }
        source_targets.push(flatten_index(&input_shape, &source_multi)?);

        target_multi[0] = c_o;
        target_multi[1..].copy_from_slice(out_pos);
        target_targets.push(flatten_index(&output_shape, &target_multi)?);

        weight_multi[0] = c_i;
        weight_multi[1] = c_o;
        weight_multi[2..].copy_from_slice(filter_pos);
        weight_targets.push(flatten_index(&weight_shape, &weight_multi)?);

        remaining -= 1;
        if remaining > 0 && !increment_multi(&mut multi, &apex_shape) {
            break;
        }
    }

    ParametricSpan::new(
        apex,
        FinMap::new(apex, FinSet::new(input_size), source_targets)?,
        FinMap::new(apex, FinSet::new(output_size), target_targets)?,
        FinMap::new(apex, FinSet::new(weight_size), weight_targets)?,
    )
}

/// A message-passing span over the edge list of `spec`, together with
/// its per-edge measure (the supplied densities, or counting measure).
///
/// The apex is the edge list itself; source and target are the endpoint
/// projections and the weight leg sends each edge to its bin.
pub fn graph_span(spec: &GraphSpec) -> Result<(ParametricSpan, MeasVec)> {
    if spec.num_vertices == 0 {
        return Err(Error::InvalidSize {
            field: "num_vertices",
        });
    }
    if spec.num_bins == 0 {
        return Err(Error::InvalidSize { field: "num_bins" });
    }
    if spec.bin_of_edge.len() != spec.edges.len() {
        return Err(Error::LengthMismatch {
            field: "bin_of_edge",
            expected: spec.edges.len(),
            actual: spec.bin_of_edge.len(),
        });
    }
    if let Some(density) = &spec.edge_density {
        if density.len() != spec.edges.len() {
            return Err(Error::LengthMismatch {
                field: "edge_density",
                expected: spec.edges.len(),
                actual: density.len(),
            });
        }
    }

    let apex = FinSet::new(spec.edges.len());
    let vertices = FinSet::new(spec.num_vertices);
    let bins = FinSet::new(spec.num_bins);

    let mut source_targets = Vec::with_capacity(spec.edges.len());
    let mut target_targets = Vec::with_capacity(spec.edges.len());
    for (index, &(p, q)) in spec.edges.iter().enumerate() {
        if p >= spec.num_vertices {
            return Err(Error::OutOfRange {
                field: "edges",
                index,
                value: p,
                bound: spec.num_vertices,
            });
        }
        if q >= spec.num_vertices {
            return Err(Error::OutOfRange {
                field: "edges",
                index,
                value: q,
                bound: spec.num_vertices,
            });
        }
        source_targets.push(p);
        target_targets.push(q);
    }
    for (index, &bin) in spec.bin_of_edge.iter().enumerate() {
        if bin >= spec.num_bins {
            return Err(Error::OutOfRange {
                field: "bin_of_edge",
                index,
                value: bin,
                bound: spec.num_bins,
            });
        }
    }

    let span = ParametricSpan::new(
        apex,
        FinMap::new(apex, vertices, source_targets)?,
        FinMap::new(apex, vertices, target_targets)?,
        FinMap::new(apex, bins, spec.bin_of_edge.clone())?,
    )?;
    let measure = match &spec.edge_density {
        Some(density) => MeasVec::new(apex, density.clone())?,
        None => MeasVec::ones(apex),
    };
    Ok((span, measure))
}

/// Discretizes continuous pseudo-coordinates into a flat bin index.
///
/// Per dimension, `index = clamp(floor((u - low) / (high - low) * bins),
/// 0, bins - 1)`; coordinates outside the grid are clamped into the first
/// or last bin, and the per-dimension indices are flattened row-major.
///
/// Requires `bins >= 1` and `low < high` in every grid dimension, and
/// every coordinate tuple to have the grid's rank.
pub fn bin_pseudo_coordinates(coords: &[Vec<f64>], grid: &[GridDim]) -> Vec<usize> {
    assert!(!grid.is_empty(), "grid must have at least one dimension");
    for dim in grid {
        assert!(dim.bins >= 1, "each grid dimension needs at least one bin");
        assert!(dim.low < dim.high, "grid interval must be non-degenerate");
    }
    let shape: Vec<usize> = grid.iter().map(|dim| dim.bins).collect();
    coords
        .iter()
        .map(|point| {
            assert_eq!(point.len(), grid.len(), "coordinate rank mismatch");
            let multi: Vec<usize> = point
                .iter()
                .zip(grid)
                .map(|(&u, dim)| {
                    let scaled = (u - dim.low) / (dim.high - dim.low) * dim.bins as f64;
                    let clamped = scaled.floor().clamp(0.0, (dim.bins - 1) as f64);
                    clamped as usize
                })
                .collect();
            flatten_index(&shape, &multi).expect("clamped bin index is in range")
        })
        .collect()
}

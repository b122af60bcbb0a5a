//! Linear layers as spans of finite sets.
//!
//! A layer is a diagram `X <- E -> Y` with a third leg `E -> W` picking a
//! weight index for every edge of the apex. Evaluation pulls the input
//! function and the weight function back to the apex, multiplies them into
//! the reference measure there, and pushes the result forward to the
//! output:
//!
//! ```text
//! forward(x, w, mu) = t_*( s^* x . pi^* w . mu )
//! ```
//!
//! Reverse mode needs no separate machinery: reading the same span with
//! its legs in a different order yields the gradient with respect to the
//! input, the weights, or the measure. The crate keeps every pushforward
//! in a fixed summation order, so those three readings agree with the
//! forward pass bit for bit, and the indexed fast path agrees with the
//! naive one.
//!
//! Modules:
//! - [`finset`]: finite sets, total maps, fiber indexes, multi-indexing.
//! - [`integration`]: functions and measures on finite sets, with
//!   pullback, pushforward, multiplication, action, integral, pairing.
//! - [`span`]: the span type, its forward and backward operators, leg
//!   permutation, and the fiber-indexed evaluator.
//! - [`constructors`]: dense, convolution, and graph layers as spans.
//! - [`oracles`]: brute-force references, finite differences, seeded
//!   generators, and randomized check suites.

pub mod constructors;
pub mod error;
pub mod finset;
pub mod integration;
pub mod oracles;
pub mod span;

pub use constructors::{
    bin_pseudo_coordinates, conv_output_shape, conv_span, dense_span, graph_span, ConvSpec,
    GraphSpec, GridDim,
};
pub use error::{Error, Result};
pub use finset::{flatten_index, shape_product, unflatten_index, FiberIndex, FinMap, FinSet};
pub use integration::{act, integrate, mul, pair, pullback, pushforward, FunVec, MeasVec};
pub use oracles::{
    conv_oracle, finite_diff_grad, gradcheck_span, graph_matvec_oracle, matmul_oracle,
    pairing_oracle, relative_error, run_axiom_suite, CheckReport,
};
pub use span::{IndexedSpan, LegRole, ParametricSpan, RoleAssignment};

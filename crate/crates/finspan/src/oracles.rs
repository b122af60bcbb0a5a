//! Brute-force reference implementations and randomized check suites.
//!
//! The oracles here recompute what the span operators compute, but by
//! direct nested loops over raw buffers. They never call into the span
//! evaluation paths, so agreement between the two is evidence rather
//! than tautology.
//!
//! Randomness is seedable and trial-local: every trial derives its own
//! generator state from `(seed, stream, trial)`, so a suite produces the
//! same reports for the same seed regardless of execution order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructors::{ConvSpec, GraphSpec};
use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet};
use crate::integration::{act, integrate, pair, pullback, pushforward, FunVec, MeasVec};
use crate::span::{LegRole, ParametricSpan, RoleAssignment};

/// Outcome of one randomized check: worst errors seen over all trials.
///
/// `passed` holds exactly when `max_rel_error` is within the check's
/// tolerance; identical seeds produce identical reports.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub trials: u64,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub passed: bool,
    pub seed: u64,
}

impl CheckReport {
    /// The TAB-separated line format used on stdout:
    /// `name<TAB>trials<TAB>max_abs<TAB>max_rel<TAB>passed<TAB>seed`.
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.name, self.trials, self.max_abs_error, self.max_rel_error, self.passed, self.seed
        )
    }
}

/// `|a - b| / max(1, |a|, |b|)`: relative error with a built-in floor
/// so comparisons near zero do not blow up.
pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1.0_f64.max(a.abs()).max(b.abs())
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator state for trial `trial` of stream `stream`, decorrelated
/// from neighbouring trials and streams.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let mixed = splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ trial.wrapping_add(1));
    ChaCha8Rng::seed_from_u64(mixed)
}

// ---------------------------------------------------------------------
// Random instance generators
// ---------------------------------------------------------------------

/// A uniformly random total map `domain -> codomain`.
///
/// Panics if asked for the impossible map out of a non-empty domain into
/// the empty set.
pub fn random_finmap(rng: &mut ChaCha8Rng, domain: FinSet, codomain: FinSet) -> FinMap {
    assert!(
        codomain.size > 0 || domain.size == 0,
        "no maps from a non-empty set into the empty set"
    );
    let targets = (0..domain.size)
        .map(|_| rng.random_range(0..codomain.size))
        .collect();
    FinMap::new(domain, codomain, targets).expect("generated targets are in range")
}

/// A span with independent uniformly random legs.
pub fn random_span(
    rng: &mut ChaCha8Rng,
    apex: FinSet,
    input: FinSet,
    output: FinSet,
    weights: FinSet,
) -> ParametricSpan {
    let source = random_finmap(rng, apex, input);
    let target = random_finmap(rng, apex, output);
    let weight_map = random_finmap(rng, apex, weights);
    ParametricSpan::new(apex, source, target, weight_map).expect("legs share the apex")
}

/// A function with entries uniform in `[-1, 1]`.
pub fn random_funvec(rng: &mut ChaCha8Rng, space: FinSet) -> FunVec {
    let values = (0..space.size)
        .map(|_| rng.random_range(-1.0..=1.0))
        .collect();
    FunVec::new(space, values).expect("length matches space")
}

/// A measure with density entries uniform in `[-1, 1]`.
pub fn random_measvec(rng: &mut ChaCha8Rng, space: FinSet) -> MeasVec {
    let density = (0..space.size)
        .map(|_| rng.random_range(-1.0..=1.0))
        .collect();
    MeasVec::new(space, density).expect("length matches space")
}

/// A function with small integer entries in `[-bound, bound]`; exact in
/// 64-bit floats, so algebraic identities hold with zero error.
pub fn random_funvec_integers(rng: &mut ChaCha8Rng, space: FinSet, bound: i32) -> FunVec {
    let values = (0..space.size)
        .map(|_| rng.random_range(-bound..=bound) as f64)
        .collect();
    FunVec::new(space, values).expect("length matches space")
}

/// A measure with small integer density entries in `[-bound, bound]`.
pub fn random_measvec_integers(rng: &mut ChaCha8Rng, space: FinSet, bound: i32) -> MeasVec {
    let density = (0..space.size)
        .map(|_| rng.random_range(-bound..=bound) as f64)
        .collect();
    MeasVec::new(space, density).expect("length matches space")
}

// ---------------------------------------------------------------------
// Brute-force oracles
// ---------------------------------------------------------------------

/// Row-vector times matrix by the doubly nested loop:
/// `out[j] = sum_i x[i] * w[i][j]` with `w` row-major `n_i x n_o`.
pub fn matmul_oracle(x: &[f64], w: &[f64], n_o: usize) -> Result<Vec<f64>> {
    let n_i = x.len();
    let expected = n_i
        .checked_mul(n_o)
        .ok_or(Error::InvalidSize { field: "matrix" })?;
    if w.len() != expected {
        return Err(Error::ShapeMismatch {
            context: "matmul_oracle",
            expected,
            actual: w.len(),
        });
    }
    let mut out = vec![0.0; n_o];
    for i in 0..n_i {
        for j in 0..n_o {
            out[j] += x[i] * w[i * n_o + j];
        }
    }
    Ok(out)
}

fn advance(index: &mut [usize], shape: &[usize]) -> bool {
    for k in (0..shape.len()).rev() {
        index[k] += 1;
        if index[k] < shape[k] {
            return true;
        }
        index[k] = 0;
    }
    false
}

/// Direct strided, dilated cross-correlation:
///
/// ```text
/// out[c_o][p] = sum over c_i, f of x[c_i][dilation*f + stride*p] * w[c_i][c_o][f]
/// ```
///
/// `x` is channel-major `n_i x S_i`, `w` is `n_i x n_o x F`, the result
/// is `n_o x S_o`, all row-major. The output extents are recomputed here
/// from first principles; nothing is shared with the span path.
pub fn conv_oracle(x: &[f64], spec: &ConvSpec, w: &[f64]) -> Result<Vec<f64>> {
    let rank = spec.input_shape.len();
    let mut out_shape = Vec::with_capacity(rank);
    for dim in 0..rank {
        let reach = spec.dilation[dim] * (spec.filter_shape[dim] - 1) + 1;
        if reach > spec.input_shape[dim] {
            return Err(Error::FilterTooLarge { dim });
        }
        out_shape.push((spec.input_shape[dim] - reach) / spec.stride[dim] + 1);
    }

    let in_spatial: usize = spec.input_shape.iter().product();
    let out_spatial: usize = out_shape.iter().product();
    let filter_size: usize = spec.filter_shape.iter().product();

    if x.len() != spec.in_channels * in_spatial {
        return Err(Error::ShapeMismatch {
            context: "conv_oracle image",
            expected: spec.in_channels * in_spatial,
            actual: x.len(),
        });
    }
    if w.len() != spec.in_channels * spec.out_channels * filter_size {
        return Err(Error::ShapeMismatch {
            context: "conv_oracle kernel",
            expected: spec.in_channels * spec.out_channels * filter_size,
            actual: w.len(),
        });
    }

    let mut out = vec![0.0; spec.out_channels * out_spatial];
    let mut out_pos = vec![0usize; rank];
    for p_flat in 0..out_spatial {
        let mut filter_pos = vec![0usize; rank];
        for f_flat in 0..filter_size {
            let mut in_flat = 0usize;
            for k in 0..rank {
                in_flat = in_flat * spec.input_shape[k]
                    + spec.dilation[k] * filter_pos[k]
                    + spec.stride[k] * out_pos[k];
            }
            for c_o in 0..spec.out_channels {
                for c_i in 0..spec.in_channels {
                    out[c_o * out_spatial + p_flat] += x[c_i * in_spatial + in_flat]
                        * w[(c_i * spec.out_channels + c_o) * filter_size + f_flat];
                }
            }
            advance(&mut filter_pos, &spec.filter_shape);
        }
        advance(&mut out_pos, &out_shape);
    }
    Ok(out)
}

/// Message passing by a direct loop over the edge list:
/// `out[q] += x[p] * w[bin(p, q)] * density(p, q)`.
pub fn graph_matvec_oracle(spec: &GraphSpec, x: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    if x.len() != spec.num_vertices {
        return Err(Error::ShapeMismatch {
            context: "graph_matvec_oracle input",
            expected: spec.num_vertices,
            actual: x.len(),
        });
    }
    if w.len() != spec.num_bins {
        return Err(Error::ShapeMismatch {
            context: "graph_matvec_oracle weights",
            expected: spec.num_bins,
            actual: w.len(),
        });
    }
    if spec.bin_of_edge.len() != spec.edges.len() {
        return Err(Error::ShapeMismatch {
            context: "graph_matvec_oracle bins",
            expected: spec.edges.len(),
            actual: spec.bin_of_edge.len(),
        });
    }
    let mut out = vec![0.0; spec.num_vertices];
    for (index, &(p, q)) in spec.edges.iter().enumerate() {
        let density = spec
            .edge_density
            .as_ref()
            .map_or(1.0, |density| density[index]);
        out[q] += x[p] * w[spec.bin_of_edge[index]] * density;
    }
    Ok(out)
}

/// The four-way contraction `sum_e x[s(e)] * y[t(e)] * w[pi(e)] * mu[e]`
/// by a single loop over the apex. This is the common value of the
/// adjoint identity's two sides.
pub fn pairing_oracle(
    span: &ParametricSpan,
    x: &FunVec,
    y: &FunVec,
    w: &FunVec,
    mu: &MeasVec,
) -> Result<f64> {
    for (context, expected, actual) in [
        ("source", span.input_space(), x.space()),
        ("target", span.output_space(), y.space()),
        ("weightmap", span.weight_space(), w.space()),
        ("apex", span.apex(), mu.space()),
    ] {
        if expected != actual {
            return Err(Error::SpaceMismatch {
                context,
                expected: expected.size,
                actual: actual.size,
            });
        }
    }
    let source = span.source().targets();
    let target = span.target().targets();
    let weight_map = span.weight_map().targets();
    let mut total = 0.0;
    for e in 0..span.apex().size {
        total += x.values()[source[e]]
            * y.values()[target[e]]
            * w.values()[weight_map[e]]
            * mu.density()[e];
    }
    Ok(total)
}

/// Central finite differences, one coordinate at a time:
/// `(loss(point + h e_k) - loss(point - h e_k)) / (2 h)`.
pub fn finite_diff_grad<F>(loss: F, point: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    assert!(h > 0.0, "finite-difference step must be positive");
    let mut grad = Vec::with_capacity(point.len());
    let mut probe = point.to_vec();
    for k in 0..point.len() {
        let original = probe[k];
        probe[k] = original + h;
        let up = loss(&probe);
        probe[k] = original - h;
        let down = loss(&probe);
        probe[k] = original;
        grad.push((up - down) / (2.0 * h));
    }
    grad
}

// ---------------------------------------------------------------------
// Axiom suite
// ---------------------------------------------------------------------

const STREAM_FROBENIUS: u64 = 1;
const STREAM_NATURALITY: u64 = 2;
const STREAM_EXTRANATURALITY: u64 = 3;
const STREAM_CONTRAVARIANT: u64 = 4;
const STREAM_COVARIANT: u64 = 5;
const STREAM_ADJOINT: u64 = 6;
const STREAM_PERMUTATION: u64 = 7;
const STREAM_GRADCHECK: u64 = 8;

struct ErrorTracker {
    max_abs: f64,
    max_rel: f64,
}

impl ErrorTracker {
    fn new() -> Self {
        ErrorTracker {
            max_abs: 0.0,
            max_rel: 0.0,
        }
    }

    fn observe(&mut self, a: f64, b: f64) {
        self.max_abs = self.max_abs.max((a - b).abs());
        self.max_rel = self.max_rel.max(relative_error(a, b));
    }

    fn observe_all<'a>(
        &mut self,
        left: impl IntoIterator<Item = &'a f64>,
        right: impl IntoIterator<Item = &'a f64>,
    ) {
        for (&a, &b) in left.into_iter().zip(right) {
            self.observe(a, b);
        }
    }

    fn into_report(self, name: &str, trials: u64, seed: u64, tolerance: f64) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            trials,
            max_abs_error: self.max_abs,
            max_rel_error: self.max_rel,
            passed: self.max_rel <= tolerance,
            seed,
        }
    }
}

fn run_trials<F>(
    name: &str,
    seed: u64,
    stream: u64,
    trials: u64,
    tolerance: f64,
    mut trial: F,
) -> Result<CheckReport>
where
    F: FnMut(&mut ChaCha8Rng, &mut ErrorTracker) -> Result<()>,
{
    let mut tracker = ErrorTracker::new();
    for t in 0..trials {
        let mut rng = trial_rng(seed, stream, t);
        trial(&mut rng, &mut tracker)?;
    }
    Ok(tracker.into_report(name, trials, seed, tolerance))
}

fn random_sized_finmap(rng: &mut ChaCha8Rng, max_size: usize) -> FinMap {
    let domain = FinSet::new(rng.random_range(1..=max_size));
    let codomain = FinSet::new(rng.random_range(1..=max_size));
    random_finmap(rng, domain, codomain)
}

fn random_sized_span(rng: &mut ChaCha8Rng, max_apex: usize, max_leg: usize) -> ParametricSpan {
    let apex = FinSet::new(rng.random_range(0..=max_apex));
    let input = FinSet::new(rng.random_range(1..=max_leg));
    let output = FinSet::new(rng.random_range(1..=max_leg));
    let weights = FinSet::new(rng.random_range(1..=max_leg));
    random_span(rng, apex, input, output, weights)
}

fn leg_with_role(roles: &RoleAssignment, wanted: LegRole) -> usize {
    if roles.source() == wanted {
        0
    } else if roles.target() == wanted {
        1
    } else {
        2
    }
}

/// Randomized verification of the integration-theory axioms and the
/// reverse-mode rules, on instances with spaces up to `max_size`.
///
/// Emits one report per check: Frobenius reciprocity, naturality of the
/// integral, extranaturality of the pairing, both functorialities, the
/// adjoint identity, and leg-permutation coherence.
pub fn run_axiom_suite(seed: u64, trials: u64, max_size: usize) -> Result<Vec<CheckReport>> {
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    if max_size == 0 {
        return Err(Error::InvalidSize { field: "max_size" });
    }

    let mut reports = Vec::with_capacity(7);

    // f_*(f^* y . mu) = y . f_* mu
    reports.push(run_trials(
        "frobenius_reciprocity",
        seed,
        STREAM_FROBENIUS,
        trials,
        1e-12,
        |rng, tracker| {
            let f = random_sized_finmap(rng, max_size);
            let y = random_funvec(rng, f.codomain());
            let mu = random_measvec(rng, f.domain());
            let lhs = pushforward(&f, &act(&pullback(&f, &y)?, &mu)?)?;
            let rhs = act(&y, &pushforward(&f, &mu)?)?;
            tracker.observe_all(lhs.density(), rhs.density());
            Ok(())
        },
    )?);

    // integral of mu = integral of f_* mu
    reports.push(run_trials(
        "integral_naturality",
        seed,
        STREAM_NATURALITY,
        trials,
        1e-12,
        |rng, tracker| {
            let f = random_sized_finmap(rng, max_size);
            let mu = random_measvec(rng, f.domain());
            tracker.observe(integrate(&mu), integrate(&pushforward(&f, &mu)?));
            Ok(())
        },
    )?);

    // <f^* y, mu> = <y, f_* mu>
    reports.push(run_trials(
        "extranaturality",
        seed,
        STREAM_EXTRANATURALITY,
        trials,
        1e-12,
        |rng, tracker| {
            let f = random_sized_finmap(rng, max_size);
            let y = random_funvec(rng, f.codomain());
            let mu = random_measvec(rng, f.domain());
            let lhs = pair(&pullback(&f, &y)?, &mu)?;
            let rhs = pair(&y, &pushforward(&f, &mu)?)?;
            tracker.observe(lhs, rhs);
            Ok(())
        },
    )?);

    // (g of f)^* = f^* of g^*, exact: pure gathers involve no arithmetic
    reports.push(run_trials(
        "contravariant_functoriality",
        seed,
        STREAM_CONTRAVARIANT,
        trials,
        0.0,
        |rng, tracker| {
            let f = random_sized_finmap(rng, max_size);
            let far = FinSet::new(rng.random_range(1..=max_size));
            let g = random_finmap(rng, f.codomain(), far);
            let z = random_funvec(rng, g.codomain());
            let composed = pullback(&f.compose(&g)?, &z)?;
            let stepwise = pullback(&f, &pullback(&g, &z)?)?;
            tracker.observe_all(composed.values(), stepwise.values());
            Ok(())
        },
    )?);

    // (g of f)_* = g_* of f_*, exact on integer-valued densities
    reports.push(run_trials(
        "covariant_functoriality",
        seed,
        STREAM_COVARIANT,
        trials,
        0.0,
        |rng, tracker| {
            let f = random_sized_finmap(rng, max_size);
            let far = FinSet::new(rng.random_range(1..=max_size));
            let g = random_finmap(rng, f.codomain(), far);
            let mu = random_measvec_integers(rng, f.domain(), 8);
            let composed = pushforward(&f.compose(&g)?, &mu)?;
            let stepwise = pushforward(&g, &pushforward(&f, &mu)?)?;
            tracker.observe_all(composed.density(), stepwise.density());
            Ok(())
        },
    )?);

    // <y, forward(x, w, mu)> = <x, backward_input(y, w, mu)> = oracle
    reports.push(run_trials(
        "adjoint_identity",
        seed,
        STREAM_ADJOINT,
        trials,
        1e-9,
        |rng, tracker| {
            let span = random_sized_span(rng, max_size, max_size);
            let x = random_funvec(rng, span.input_space());
            let y = random_funvec(rng, span.output_space());
            let w = random_funvec(rng, span.weight_space());
            let mu = random_measvec(rng, span.apex());
            let via_forward = pair(&y, &span.forward(&x, &w, &mu)?)?;
            let via_backward = pair(&x, &span.backward_input(&y, &w, &mu)?)?;
            let reference = pairing_oracle(&span, &x, &y, &w, &mu)?;
            tracker.observe(via_forward, via_backward);
            tracker.observe(via_forward, reference);
            tracker.observe(via_backward, reference);
            Ok(())
        },
    )?);

    // forward of the role-permuted span is the derived operator, bitwise
    reports.push(run_trials(
        "leg_permutation",
        seed,
        STREAM_PERMUTATION,
        trials,
        0.0,
        |rng, tracker| {
            let span = random_sized_span(rng, max_size, max_size);
            let x = random_funvec(rng, span.input_space());
            let y = random_funvec(rng, span.output_space());
            let w = random_funvec(rng, span.weight_space());
            let mu = random_measvec(rng, span.apex());
            let vectors = [&x, &y, &w];
            for roles in RoleAssignment::all() {
                let permuted = span.permute_legs(&roles);
                let a = vectors[leg_with_role(&roles, LegRole::Input)];
                let b = vectors[leg_with_role(&roles, LegRole::Weight)];
                let via = permuted.forward(a, b, &mu)?;
                let derived = match leg_with_role(&roles, LegRole::Output) {
                    1 => span.forward(&x, &w, &mu)?,
                    0 => span.backward_input(&y, &w, &mu)?,
                    _ => span.backward_weights(&x, &y, &mu)?,
                };
                tracker.observe_all(via.density(), derived.density());
            }
            Ok(())
        },
    )?);

    Ok(reports)
}

// ---------------------------------------------------------------------
// Gradient checking
// ---------------------------------------------------------------------

/// Checks the three reverse-mode rules of `span` against central finite
/// differences of the scalar loss `<y, forward(x, w, mu)>` on random
/// inputs with entries in `[-1, 1]`.
///
/// Returns three reports (input, weights, measure gradients); each is
/// passed when the worst relative error over `trials` random instances
/// stays within `tolerance`.
pub fn gradcheck_span(
    span: &ParametricSpan,
    seed: u64,
    trials: u64,
    step: f64,
    tolerance: f64,
) -> Result<Vec<CheckReport>> {
    if trials == 0 {
        return Err(Error::InvalidTrials);
    }
    assert!(step > 0.0, "finite-difference step must be positive");

    let mut input_errors = ErrorTracker::new();
    let mut weight_errors = ErrorTracker::new();
    let mut measure_errors = ErrorTracker::new();

    for t in 0..trials {
        let mut rng = trial_rng(seed, STREAM_GRADCHECK, t);
        let x = random_funvec(&mut rng, span.input_space());
        let y = random_funvec(&mut rng, span.output_space());
        let w = random_funvec(&mut rng, span.weight_space());
        let mu = random_measvec(&mut rng, span.apex());

        let analytic = span.backward_input(&y, &w, &mu)?;
        let loss = |point: &[f64]| {
            let probe = FunVec::new(span.input_space(), point.to_vec()).expect("probe length");
            let out = span.forward(&probe, &w, &mu).expect("validated spaces");
            pair(&y, &out).expect("validated spaces")
        };
        let numeric = finite_diff_grad(loss, x.values(), step);
        input_errors.observe_all(analytic.density(), &numeric);

        let analytic = span.backward_weights(&x, &y, &mu)?;
        let loss = |point: &[f64]| {
            let probe = FunVec::new(span.weight_space(), point.to_vec()).expect("probe length");
            let out = span.forward(&x, &probe, &mu).expect("validated spaces");
            pair(&y, &out).expect("validated spaces")
        };
        let numeric = finite_diff_grad(loss, w.values(), step);
        weight_errors.observe_all(analytic.density(), &numeric);

        let analytic = span.backward_measure(&x, &y, &w)?;
        let loss = |point: &[f64]| {
            let probe = MeasVec::new(span.apex(), point.to_vec()).expect("probe length");
            let out = span.forward(&x, &w, &probe).expect("validated spaces");
            pair(&y, &out).expect("validated spaces")
        };
        let numeric = finite_diff_grad(loss, mu.density(), step);
        measure_errors.observe_all(analytic.values(), &numeric);
    }

    Ok(vec![
        input_errors.into_report("grad_input", trials, seed, tolerance),
        weight_errors.into_report("grad_weights", trials, seed, tolerance),
        measure_errors.into_report("grad_measure", trials, seed, tolerance),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::dense_span;

    #[test]
    fn matmul_identity_and_hand_expansion() {
        let identity = vec![1.0, 0.0, 0.0, 1.0];
        assert_eq!(
            matmul_oracle(&[1.0, 0.0], &identity, 2).unwrap(),
            vec![1.0, 0.0]
        );
        assert_eq!(
            matmul_oracle(&[1.0, 2.0], &[1.0, 2.0, 3.0, 4.0], 2).unwrap(),
            vec![7.0, 10.0]
        );
        assert_eq!(matmul_oracle(&[], &[], 3).unwrap(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn matmul_rejects_bad_shapes() {
        assert!(matches!(
            matmul_oracle(&[1.0, 2.0], &[1.0, 2.0, 3.0], 2).unwrap_err(),
            Error::ShapeMismatch { .. }
        ));
    }

    fn spec_1d(extent: usize, filter: usize) -> ConvSpec {
        ConvSpec {
            in_channels: 1,
            out_channels: 1,
            input_shape: vec![extent],
            filter_shape: vec![filter],
            stride: vec![1],
            dilation: vec![1],
        }
    }

    #[test]
    fn conv_oracle_hand_expansion() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let out = conv_oracle(&x, &spec_1d(5, 3), &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(out, vec![1.0, 2.0, 3.0]);

        let zero = conv_oracle(&x, &spec_1d(5, 3), &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(zero, vec![0.0, 0.0, 0.0]);

        let scalar = conv_oracle(&x, &spec_1d(5, 1), &[2.5]).unwrap();
        assert_eq!(scalar, vec![2.5, 5.0, 7.5, 10.0, 12.5]);
    }

    #[test]
    fn pairing_oracle_on_dense_span() {
        let span = dense_span(2, 2).unwrap();
        let x = FunVec::ones(span.input_space());
        let y = FunVec::ones(span.output_space());
        let w = FunVec::ones(span.weight_space());
        let mu = MeasVec::ones(span.apex());
        assert_eq!(pairing_oracle(&span, &x, &y, &w, &mu).unwrap(), 4.0);

        let zero = MeasVec::zeros(span.apex());
        assert_eq!(pairing_oracle(&span, &x, &y, &w, &zero).unwrap(), 0.0);
    }

    #[test]
    fn pairing_oracle_matches_forward_pairing() {
        let mut rng = trial_rng(7, 99, 0);
        let span = random_sized_span(&mut rng, 40, 12);
        let x = random_funvec(&mut rng, span.input_space());
        let y = random_funvec(&mut rng, span.output_space());
        let w = random_funvec(&mut rng, span.weight_space());
        let mu = random_measvec(&mut rng, span.apex());
        let via_forward = pair(&y, &span.forward(&x, &w, &mu).unwrap()).unwrap();
        let reference = pairing_oracle(&span, &x, &y, &w, &mu).unwrap();
        assert!(relative_error(via_forward, reference) <= 1e-12);
    }

    #[test]
    fn finite_differences_of_simple_losses() {
        let constant = |_: &[f64]| 42.0;
        assert_eq!(
            finite_diff_grad(constant, &[1.0, 2.0], 1e-5),
            vec![0.0, 0.0]
        );

        let sum_of_squares = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
        let grad = finite_diff_grad(sum_of_squares, &[1.0, 2.0], 1e-5);
        assert!((grad[0] - 2.0).abs() < 1e-8);
        assert!((grad[1] - 4.0).abs() < 1e-8);
    }

    #[test]
    fn gradcheck_agrees_on_dense_span() {
        let span = dense_span(4, 3).unwrap();
        let reports = gradcheck_span(&span, 42, 5, 1e-5, 1e-6).unwrap();
        assert_eq!(reports.len(), 3);
        for report in &reports {
            assert!(report.passed, "failed: {}", report.to_line());
        }
    }

    #[test]
    fn axiom_suite_passes_and_is_deterministic() {
        let first = run_axiom_suite(42, 25, 16).unwrap();
        let second = run_axiom_suite(42, 25, 16).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.len(), 7);
        for report in &first {
            assert!(report.passed, "failed: {}", report.to_line());
        }
    }

    #[test]
    fn axiom_suite_rejects_zero_trials() {
        assert!(matches!(
            run_axiom_suite(42, 0, 16).unwrap_err(),
            Error::InvalidTrials
        ));
    }

    #[test]
    fn report_line_format() {
        let report = CheckReport {
            name: "example".to_string(),
            trials: 10,
            max_abs_error: 0.5,
            max_rel_error: 0.25,
            passed: true,
            seed: 42,
        };
        assert_eq!(report.to_line(), "example\t10\t0.5\t0.25\ttrue\t42");
    }
}

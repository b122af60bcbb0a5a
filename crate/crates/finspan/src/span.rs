//! Parametric spans and the operators they induce.
//!
//! A parametric span is three total maps out of a shared apex of edges:
//!
//! ```text
//!         E
//!       / | \
//!  s  /   |π  \  t
//!   v     v     v
//!   X     W     Y
//! ```
//!
//! `s` and `t` determine connectivity (which inputs feed which outputs),
//! and the fibers of `pi` determine weight sharing. The span induces a
//! trilinear forward operator
//!
//! ```text
//! forward(x, w, mu)[q] = sum over t(e) = q of x[s(e)] * w[pi(e)] * mu[e]
//! ```
//!
//! and its reverse-mode companions arise by permuting which leg plays the
//! input, output, and weight role: no new code path, the same
//! gather-multiply-accumulate with the legs reassigned:
//!
//! ```text
//! backward_input(y, w, mu)[i]   = sum over s(e) = i of y[t(e)] * w[pi(e)] * mu[e]
//! backward_weights(x, y, mu)[k] = sum over pi(e) = k of x[s(e)] * y[t(e)] * mu[e]
//! backward_measure(x, y, w)[e]  = x[s(e)] * y[t(e)] * w[pi(e)]
//! ```
//!
//! These satisfy the adjoint identity
//! `pair(y, forward(x, w, mu)) = pair(x, backward_input(y, w, mu))`,
//! and each equals the forward pass of the correspondingly permuted span.
//!
//! Cotangent bookkeeping: the cotangent of a function space is a measure
//! and vice versa, so `backward_input` returns a [`MeasVec`] on `X` and
//! `backward_measure` a [`FunVec`] on `E`.

use crate::error::{Error, Result};
use crate::finset::{FiberIndex, FinMap, FinSet};
use crate::integration::{act, mul, pullback, pushforward, FunVec, MeasVec};

/// The role a leg plays when a span is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LegRole {
    Input,
    Output,
    Weight,
}

/// A bijection from the legs `(source, target, weight_map)` to the roles
/// `(Input, Output, Weight)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoleAssignment {
    source: LegRole,
    target: LegRole,
    weight_map: LegRole,
}

impl RoleAssignment {
    /// Builds an assignment, rejecting non-bijective ones.
    pub fn new(source: LegRole, target: LegRole, weight_map: LegRole) -> Result<Self> {
        let mut seen = [false; 3];
        for role in [source, target, weight_map] {
            let slot = match role {
                LegRole::Input => 0,
                LegRole::Output => 1,
                LegRole::Weight => 2,
            };
            if seen[slot] {
                return Err(Error::InvalidSize {
                    field: "role assignment",
                });
            }
            seen[slot] = true;
        }
        Ok(RoleAssignment {
            source,
            target,
            weight_map,
        })
    }

    /// The assignment that leaves every leg in its own role.
    pub fn identity() -> Self {
        RoleAssignment {
            source: LegRole::Input,
            target: LegRole::Output,
            weight_map: LegRole::Weight,
        }
    }

    /// All six role assignments, identity first.
    pub fn all() -> [RoleAssignment; 6] {
        use LegRole::{Input, Output, Weight};
        [
            RoleAssignment::new(Input, Output, Weight).unwrap(),
            RoleAssignment::new(Output, Input, Weight).unwrap(),
            RoleAssignment::new(Input, Weight, Output).unwrap(),
            RoleAssignment::new(Weight, Output, Input).unwrap(),
            RoleAssignment::new(Output, Weight, Input).unwrap(),
            RoleAssignment::new(Weight, Input, Output).unwrap(),
        ]
    }

    pub fn source(&self) -> LegRole {
        self.source
    }

    pub fn target(&self) -> LegRole {
        self.target
    }

    pub fn weight_map(&self) -> LegRole {
        self.weight_map
    }
}

/// A span `X <- E -> Y` with a weight-sharing leg `E -> W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricSpan {
    apex: FinSet,
    source: FinMap,
    target: FinMap,
    weight_map: FinMap,
}

impl ParametricSpan {
    /// Validates that all three legs share `apex` as their domain.
    pub fn new(apex: FinSet, source: FinMap, target: FinMap, weight_map: FinMap) -> Result<Self> {
        for (leg, map) in [
            ("source", &source),
            ("target", &target),
            ("weightmap", &weight_map),
        ] {
            if map.domain() != apex {
                return Err(Error::SpaceMismatch {
                    context: leg,
                    expected: apex.size,
                    actual: map.domain().size,
                });
            }
        }
        Ok(ParametricSpan {
            apex,
            source,
            target,
            weight_map,
        })
    }

    pub fn apex(&self) -> FinSet {
        self.apex
    }

    pub fn source(&self) -> &FinMap {
        &self.source
    }

    pub fn target(&self) -> &FinMap {
        &self.target
    }

    pub fn weight_map(&self) -> &FinMap {
        &self.weight_map
    }

    /// The input space `X`.
    pub fn input_space(&self) -> FinSet {
        self.source.codomain()
    }

    /// The output space `Y`.
    pub fn output_space(&self) -> FinSet {
        self.target.codomain()
    }

    /// The weight space `W`.
    pub fn weight_space(&self) -> FinSet {
        self.weight_map.codomain()
    }

    fn check_fun(&self, leg: &'static str, expected: FinSet, v: &FunVec) -> Result<()> {
        if v.space() != expected {
            return Err(Error::SpaceMismatch {
                context: leg,
                expected: expected.size,
                actual: v.space().size,
            });
        }
        Ok(())
    }

    fn check_measure(&self, mu: &MeasVec) -> Result<()> {
        if mu.space() != self.apex {
            return Err(Error::SpaceMismatch {
                context: "apex",
                expected: self.apex.size,
                actual: mu.space().size,
            });
        }
        Ok(())
    }

    /// Forward evaluation: pull `x` back along the source leg and `w`
    /// along the weight leg, multiply into the measure, push forward
    /// along the target leg.
    ///
    /// Per-edge products are grouped `(function * function) * measure`;
    /// since scalar multiplication is commutative this makes every
    /// role-permuted evaluation bitwise identical, not merely equal up
    /// to rounding.
    pub fn forward(&self, x: &FunVec, w: &FunVec, mu: &MeasVec) -> Result<MeasVec> {
        self.check_fun("source", self.input_space(), x)?;
        self.check_fun("weightmap", self.weight_space(), w)?;
        self.check_measure(mu)?;
        let pulled_x = pullback(&self.source, x)?;
        let pulled_w = pullback(&self.weight_map, w)?;
        let per_edge = act(&mul(&pulled_x, &pulled_w)?, mu)?;
        pushforward(&self.target, &per_edge)
    }

    /// Reverse-mode rule for the input: the output cotangent `y` is
    /// carried to a measure on `X` by exchanging the source and target
    /// roles.
    pub fn backward_input(&self, y: &FunVec, w: &FunVec, mu: &MeasVec) -> Result<MeasVec> {
        self.check_fun("target", self.output_space(), y)?;
        self.check_fun("weightmap", self.weight_space(), w)?;
        self.check_measure(mu)?;
        let pulled_y = pullback(&self.target, y)?;
        let pulled_w = pullback(&self.weight_map, w)?;
        let per_edge = act(&mul(&pulled_y, &pulled_w)?, mu)?;
        pushforward(&self.source, &per_edge)
    }

    /// Reverse-mode rule for the weights: push the per-edge products
    /// forward along the weight-sharing leg.
    pub fn backward_weights(&self, x: &FunVec, y: &FunVec, mu: &MeasVec) -> Result<MeasVec> {
        self.check_fun("source", self.input_space(), x)?;
        self.check_fun("target", self.output_space(), y)?;
        self.check_measure(mu)?;
        let pulled_x = pullback(&self.source, x)?;
        let pulled_y = pullback(&self.target, y)?;
        let per_edge = act(&mul(&pulled_x, &pulled_y)?, mu)?;
        pushforward(&self.weight_map, &per_edge)
    }

    /// Gradient of the pairing with respect to the measure density:
    /// the function `e -> x[s(e)] * y[t(e)] * w[pi(e)]` on the apex.
    pub fn backward_measure(&self, x: &FunVec, y: &FunVec, w: &FunVec) -> Result<FunVec> {
        self.check_fun("source", self.input_space(), x)?;
        self.check_fun("target", self.output_space(), y)?;
        self.check_fun("weightmap", self.weight_space(), w)?;
        let pulled_x = pullback(&self.source, x)?;
        let pulled_y = pullback(&self.target, y)?;
        let pulled_w = pullback(&self.weight_map, w)?;
        mul(&mul(&pulled_x, &pulled_y)?, &pulled_w)
    }

    /// Rearranges the legs so that the leg assigned `Input` becomes the
    /// source, `Output` the target, and `Weight` the weight map. Forward
    /// evaluation of the permuted span computes the corresponding
    /// derived operator of the original.
    pub fn permute_legs(&self, roles: &RoleAssignment) -> ParametricSpan {
        let pick = |role: LegRole| -> FinMap {
            if roles.source == role {
                self.source.clone()
            } else if roles.target == role {
                self.target.clone()
            } else {
                self.weight_map.clone()
            }
        };
        ParametricSpan {
            apex: self.apex,
            source: pick(LegRole::Input),
            target: pick(LegRole::Output),
            weight_map: pick(LegRole::Weight),
        }
    }

    /// Precomputes fiber indexes over all three legs for gather-based
    /// evaluation.
    pub fn compile(&self) -> IndexedSpan {
        IndexedSpan {
            by_source: FiberIndex::build(&self.source),
            by_target: FiberIndex::build(&self.target),
            by_weight: FiberIndex::build(&self.weight_map),
            span: self.clone(),
        }
    }
}

/// A compiled span: the same operators with the scatter loop replaced by
/// precomputed fiber offsets, so each output element is a contiguous
/// gather. Results are bitwise identical to the uncompiled path because
/// fiber members are visited in the same increasing apex order and the
/// per-edge products use the same grouping.
#[derive(Debug, Clone)]
pub struct IndexedSpan {
    span: ParametricSpan,
    by_source: FiberIndex,
    by_target: FiberIndex,
    by_weight: FiberIndex,
}

impl IndexedSpan {
    pub fn span(&self) -> &ParametricSpan {
        &self.span
    }

    pub fn by_source(&self) -> &FiberIndex {
        &self.by_source
    }

    pub fn by_target(&self) -> &FiberIndex {
        &self.by_target
    }

    pub fn by_weight(&self) -> &FiberIndex {
        &self.by_weight
    }

    fn contract(
        &self,
        out_index: &FiberIndex,
        a_targets: &[usize],
        a: &[f64],
        b_targets: &[usize],
        b: &[f64],
        mu: &[f64],
    ) -> Vec<f64> {
        let out_size = out_index.map().codomain().size;
        let offsets = out_index.offsets();
        let members = out_index.members();
        let mut density = vec![0.0; out_size];
        for (q, slot) in density.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &e in &members[offsets[q]..offsets[q + 1]] {
                acc += (a[a_targets[e]] * b[b_targets[e]]) * mu[e];
            }
            *slot = acc;
        }
        density
    }

    /// Gather-based forward pass; bitwise equal to
    /// [`ParametricSpan::forward`].
    pub fn forward(&self, x: &FunVec, w: &FunVec, mu: &MeasVec) -> Result<MeasVec> {
        self.span.check_fun("source", self.span.input_space(), x)?;
        self.span
            .check_fun("weightmap", self.span.weight_space(), w)?;
        self.span.check_measure(mu)?;
        let density = self.contract(
            &self.by_target,
            self.span.source.targets(),
            x.values(),
            self.span.weight_map.targets(),
            w.values(),
            mu.density(),
        );
        MeasVec::new(self.span.output_space(), density)
    }

    /// Gather-based input cotangent; bitwise equal to
    /// [`ParametricSpan::backward_input`].
    pub fn backward_input(&self, y: &FunVec, w: &FunVec, mu: &MeasVec) -> Result<MeasVec> {
        self.span.check_fun("target", self.span.output_space(), y)?;
        self.span
            .check_fun("weightmap", self.span.weight_space(), w)?;
        self.span.check_measure(mu)?;
        let density = self.contract(
            &self.by_source,
            self.span.target.targets(),
            y.values(),
            self.span.weight_map.targets(),
            w.values(),
            mu.density(),
        );
        MeasVec::new(self.span.input_space(), density)
    }

    /// Gather-based weight cotangent; bitwise equal to
    /// [`ParametricSpan::backward_weights`].
    pub fn backward_weights(&self, x: &FunVec, y: &FunVec, mu: &MeasVec) -> Result<MeasVec> {
        self.span.check_fun("source", self.span.input_space(), x)?;
        self.span.check_fun("target", self.span.output_space(), y)?;
        self.span.check_measure(mu)?;
        let density = self.contract(
            &self.by_weight,
            self.span.source.targets(),
            x.values(),
            self.span.target.targets(),
            y.values(),
            mu.density(),
        );
        MeasVec::new(self.span.weight_space(), density)
    }
}

//! Functions, measures, and the integral on finite sets.
//!
//! For a finite set `X` there are two vector spaces of the same dimension
//! but opposite variance, kept apart by the type system:
//!
//! - [`FunVec`]: scalar functions on `X`. Contravariant: a map
//!   `f: X -> Y` pulls functions back, `pullback(f, y)[e] = y[f(e)]`.
//!   Pointwise multiplication makes `FunVec` a commutative algebra with
//!   the all-ones vector as unit.
//! - [`MeasVec`]: signed measures on `X`, stored as densities against
//!   counting measure. Covariant: `f` pushes measures forward by fiber
//!   summation, `pushforward(f, mu)[p] = sum over f(e) = p of mu[e]`.
//!
//! The algebra acts on measures pointwise (`act`), and `integrate` sums
//! the density. These satisfy, for every `f: X -> Y`:
//!
//! ```text
//! pushforward(f, act(pullback(f, y), mu)) = act(y, pushforward(f, mu))   (reciprocity)
//! integrate(pushforward(f, mu)) = integrate(mu)                          (naturality)
//! pair(pullback(f, y), mu) = pair(y, pushforward(f, mu))                 (pairing)
//! ```
//!
//! Pushforward accumulates fiber members in increasing domain order, so
//! every result is bit-reproducible across runs.

use crate::error::{Error, Result};
use crate::finset::{FinMap, FinSet};

/// A scalar function on a finite set: one value per element.
#[derive(Debug, Clone, PartialEq)]
pub struct FunVec {
    space: FinSet,
    values: Vec<f64>,
}

impl FunVec {
    pub fn new(space: FinSet, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.size {
            return Err(Error::LengthMismatch {
                field: "values",
                expected: space.size,
                actual: values.len(),
            });
        }
        Ok(FunVec { space, values })
    }

    /// The algebra unit: the constant function 1.
    pub fn ones(space: FinSet) -> Self {
        FunVec {
            space,
            values: vec![1.0; space.size],
        }
    }

    pub fn zeros(space: FinSet) -> Self {
        FunVec {
            space,
            values: vec![0.0; space.size],
        }
    }

    pub fn space(&self) -> FinSet {
        self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn add(&self, other: &FunVec) -> Result<FunVec> {
        if self.space != other.space {
            return Err(space_mismatch("add", self.space, other.space));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(FunVec {
            space: self.space,
            values,
        })
    }

    pub fn scale(&self, factor: f64) -> FunVec {
        FunVec {
            space: self.space,
            values: self.values.iter().map(|v| factor * v).collect(),
        }
    }
}

/// A signed measure on a finite set, as a density against counting
/// measure: one mass per element.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasVec {
    space: FinSet,
    density: Vec<f64>,
}

impl MeasVec {
    pub fn new(space: FinSet, density: Vec<f64>) -> Result<Self> {
        if density.len() != space.size {
            return Err(Error::LengthMismatch {
                field: "density",
                expected: space.size,
                actual: density.len(),
            });
        }
        Ok(MeasVec { space, density })
    }

    /// Counting measure: unit mass on every element.
    pub fn ones(space: FinSet) -> Self {
        MeasVec {
            space,
            density: vec![1.0; space.size],
        }
    }

    pub fn zeros(space: FinSet) -> Self {
        MeasVec {
            space,
            density: vec![0.0; space.size],
        }
    }

    pub fn space(&self) -> FinSet {
        self.space
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn into_density(self) -> Vec<f64> {
        self.density
    }

    pub fn add(&self, other: &MeasVec) -> Result<MeasVec> {
        if self.space != other.space {
            return Err(space_mismatch("add", self.space, other.space));
        }
        let density = self
            .density
            .iter()
            .zip(&other.density)
            .map(|(a, b)| a + b)
            .collect();
        Ok(MeasVec {
            space: self.space,
            density,
        })
    }

    pub fn scale(&self, factor: f64) -> MeasVec {
        MeasVec {
            space: self.space,
            density: self.density.iter().map(|v| factor * v).collect(),
        }
    }
}

fn space_mismatch(context: &'static str, expected: FinSet, actual: FinSet) -> Error {
    Error::SpaceMismatch {
        context,
        expected: expected.size,
        actual: actual.size,
    }
}

/// Precomposition: `pullback(f, y)[e] = y[f(e)]`.
pub fn pullback(f: &FinMap, y: &FunVec) -> Result<FunVec> {
    if y.space != f.codomain() {
        return Err(space_mismatch("pullback", f.codomain(), y.space));
    }
    let values = f.targets().iter().map(|&t| y.values[t]).collect();
    FunVec::new(f.domain(), values)
}

/// Fiber summation: `pushforward(f, mu)[p] = sum over f(e) = p of mu[e]`,
/// accumulated in increasing `e` order. Empty fibers contribute zero.
pub fn pushforward(f: &FinMap, mu: &MeasVec) -> Result<MeasVec> {
    if mu.space != f.domain() {
        return Err(space_mismatch("pushforward", f.domain(), mu.space));
    }
    let mut density = vec![0.0; f.codomain().size];
    for (e, &p) in f.targets().iter().enumerate() {
        density[p] += mu.density[e];
    }
    MeasVec::new(f.codomain(), density)
}

/// The algebra product of `func(X)`: pointwise multiplication.
pub fn mul(a: &FunVec, b: &FunVec) -> Result<FunVec> {
    if a.space != b.space {
        return Err(space_mismatch("mul", a.space, b.space));
    }
    let values = a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect();
    FunVec::new(a.space, values)
}

/// The action of functions on measures: `act(x, mu)[e] = x[e] * mu[e]`.
pub fn act(x: &FunVec, mu: &MeasVec) -> Result<MeasVec> {
    if x.space != mu.space {
        return Err(space_mismatch("act", x.space, mu.space));
    }
    let density = x
        .values
        .iter()
        .zip(&mu.density)
        .map(|(v, d)| v * d)
        .collect();
    MeasVec::new(mu.space, density)
}

/// Total mass: the sum of the density, in increasing element order.
/// Returns 0 for the empty set.
pub fn integrate(mu: &MeasVec) -> f64 {
    let mut total = 0.0;
    for &d in &mu.density {
        total += d;
    }
    total
}

/// The canonical pairing `integrate(act(x, mu))`, computed in the same
/// order without the intermediate measure.
pub fn pair(x: &FunVec, mu: &MeasVec) -> Result<f64> {
    if x.space != mu.space {
        return Err(space_mismatch("pair", x.space, mu.space));
    }
    let mut total = 0.0;
    for (v, d) in x.values.iter().zip(&mu.density) {
        total += v * d;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;

    fn map(dom: usize, cod: usize, targets: Vec<usize>) -> FinMap {
        FinMap::new(FinSet::new(dom), FinSet::new(cod), targets).unwrap()
    }

    fn fun(values: Vec<f64>) -> FunVec {
        FunVec::new(FinSet::new(values.len()), values).unwrap()
    }

    fn meas(density: Vec<f64>) -> MeasVec {
        MeasVec::new(FinSet::new(density.len()), density).unwrap()
    }

    #[test]
    fn pullback_along_constant_map() {
        let f = FinMap::constant_to_point(FinSet::new(3));
        let y = fun(vec![5.0]);
        assert_eq!(pullback(&f, &y).unwrap().values(), &[5.0, 5.0, 5.0]);
    }

    #[test]
    fn pullback_along_identity() {
        let f = FinMap::identity(FinSet::new(2));
        let y = fun(vec![3.0, -1.0]);
        assert_eq!(pullback(&f, &y).unwrap().values(), &[3.0, -1.0]);
    }

    #[test]
    fn pullback_by_enumeration() {
        let f = map(3, 2, vec![1, 0, 1]);
        let y = fun(vec![10.0, 20.0]);
        assert_eq!(pullback(&f, &y).unwrap().values(), &[20.0, 10.0, 20.0]);
    }

    #[test]
    fn pushforward_total_mass_onto_point() {
        let f = FinMap::constant_to_point(FinSet::new(3));
        let mu = meas(vec![1.0, 2.0, 3.0]);
        assert_eq!(pushforward(&f, &mu).unwrap().density(), &[6.0]);
    }

    #[test]
    fn pushforward_along_identity() {
        let f = FinMap::identity(FinSet::new(2));
        let mu = meas(vec![4.0, 7.0]);
        assert_eq!(pushforward(&f, &mu).unwrap().density(), &[4.0, 7.0]);
    }

    #[test]
    fn pushforward_fiber_sums() {
        let f = map(3, 2, vec![1, 0, 1]);
        let mu = meas(vec![1.0, 2.0, 4.0]);
        assert_eq!(pushforward(&f, &mu).unwrap().density(), &[2.0, 5.0]);
    }

    #[test]
    fn unit_acts_as_identity() {
        let mu = meas(vec![1.5, -2.0, 0.25]);
        let ones = FunVec::ones(mu.space());
        assert_eq!(act(&ones, &mu).unwrap(), mu);
    }

    #[test]
    fn act_is_pointwise() {
        let x = fun(vec![2.0, 0.0]);
        let mu = meas(vec![3.0, 7.0]);
        assert_eq!(act(&x, &mu).unwrap().density(), &[6.0, 0.0]);
    }

    #[test]
    fn act_rejects_mismatched_spaces() {
        let x = fun(vec![1.0, 2.0]);
        let mu = meas(vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            act(&x, &mu).unwrap_err(),
            Error::SpaceMismatch { context: "act", .. }
        ));
    }

    #[test]
    fn integrate_sums_density() {
        assert_eq!(integrate(&meas(vec![1.0, 2.0, 3.0])), 6.0);
        assert_eq!(integrate(&MeasVec::zeros(FinSet::new(0))), 0.0);
        assert_eq!(integrate(&meas(vec![-1.0, 1.0])), 0.0);
    }

    #[test]
    fn pair_examples() {
        let mu = meas(vec![1.0, 2.0, 3.0]);
        assert_eq!(pair(&FunVec::ones(mu.space()), &mu).unwrap(), 6.0);
        let coord = fun(vec![1.0, 0.0, 0.0]);
        assert_eq!(pair(&coord, &meas(vec![4.0, 5.0, 6.0])).unwrap(), 4.0);
        assert_eq!(
            pair(&fun(vec![1.0, 2.0]), &meas(vec![3.0, 4.0])).unwrap(),
            11.0
        );
    }

    #[test]
    fn pair_agrees_with_integrate_act_bitwise() {
        let x = fun(vec![0.1, -0.7, 2.5, 0.3]);
        let mu = meas(vec![1.1, 0.2, -0.9, 0.4]);
        let fused = pair(&x, &mu).unwrap();
        let composed = integrate(&act(&x, &mu).unwrap());
        assert_eq!(fused.to_bits(), composed.to_bits());
    }

    #[test]
    fn vector_length_must_match_space() {
        assert!(FunVec::new(FinSet::new(3), vec![1.0]).is_err());
        assert!(MeasVec::new(FinSet::new(1), vec![1.0, 2.0]).is_err());
    }
}

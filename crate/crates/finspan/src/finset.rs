//! Finite sets, total maps between them, and fiber indexing.
//!
//! A finite set is represented skeletally by its cardinality; its elements
//! are the indices `0..size`. A map between finite sets is a flat array of
//! target indices, one per domain element. This makes composition a gather
//! and keeps every on-disk representation bit-exact.
//!
//! [`FiberIndex`] materializes the preimages of a map in CSR layout:
//!
//! ```text
//! offsets  : length codomain + 1, non-decreasing, offsets[0] = 0
//! members  : permutation of 0..domain, grouped by target
//! fiber(c) = members[offsets[c] .. offsets[c + 1]]
//! ```
//!
//! Within a fiber, members appear in increasing domain order (stable
//! counting sort), which fixes the summation order used everywhere else.

use crate::error::{Error, Result};

/// A finite set, identified by its cardinality. Elements are `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FinSet {
    pub size: usize,
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size }
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Iterator over the elements `0..size`.
    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }
}

/// A total map between finite sets, stored as one target index per
/// domain element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinMap {
    domain: FinSet,
    codomain: FinSet,
    targets: Vec<usize>,
}

impl FinMap {
    /// Validates and builds a total map `domain -> codomain`.
    ///
    /// Fails with `LengthMismatch` if `targets` does not have exactly one
    /// entry per domain element, and with `OutOfRange` if any entry is not
    /// an element of the codomain.
    pub fn new(domain: FinSet, codomain: FinSet, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != domain.size {
            return Err(Error::LengthMismatch {
                field: "targets",
                expected: domain.size,
                actual: targets.len(),
            });
        }
        for (index, &value) in targets.iter().enumerate() {
            if value >= codomain.size {
                return Err(Error::OutOfRange {
                    field: "targets",
                    index,
                    value,
                    bound: codomain.size,
                });
            }
        }
        Ok(FinMap {
            domain,
            codomain,
            targets,
        })
    }

    /// The identity map on `set`.
    pub fn identity(set: FinSet) -> Self {
        FinMap {
            domain: set,
            codomain: set,
            targets: set.elements().collect(),
        }
    }

    /// The unique map into the one-element set.
    pub fn constant_to_point(domain: FinSet) -> Self {
        FinMap {
            domain,
            codomain: FinSet::new(1),
            targets: vec![0; domain.size],
        }
    }

    pub fn domain(&self) -> FinSet {
        self.domain
    }

    pub fn codomain(&self) -> FinSet {
        self.codomain
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Applies the map to a domain element.
    pub fn apply(&self, element: usize) -> usize {
        self.targets[element]
    }

    /// Composition in diagrammatic order: `self` first, then `other`.
    ///
    /// The result sends `e` to `other(self(e))`. Fails with
    /// `DomainMismatch` if the middle objects disagree.
    pub fn compose(&self, other: &FinMap) -> Result<FinMap> {
        if self.codomain != other.domain {
            return Err(Error::DomainMismatch {
                left: self.codomain.size,
                right: other.domain.size,
            });
        }
        let targets = self.targets.iter().map(|&e| other.targets[e]).collect();
        Ok(FinMap {
            domain: self.domain,
            codomain: other.codomain,
            targets,
        })
    }
}

/// The fibers of a [`FinMap`], materialized in CSR layout.
///
/// `members[offsets[c]..offsets[c + 1]]` lists, in increasing order, the
/// domain elements mapping to `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberIndex {
    map: FinMap,
    offsets: Vec<usize>,
    members: Vec<usize>,
}

impl FiberIndex {
    /// Groups the domain of `map` by target via a stable counting sort.
    pub fn build(map: &FinMap) -> Self {
        let n_out = map.codomain.size;
        let mut counts = vec![0usize; n_out + 1];
        for &t in &map.targets {
            counts[t + 1] += 1;
        }
        for c in 0..n_out {
            counts[c + 1] += counts[c];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut members = vec![0usize; map.targets.len()];
        for (e, &t) in map.targets.iter().enumerate() {
            members[cursor[t]] = e;
            cursor[t] += 1;
        }
        FiberIndex {
            map: map.clone(),
            offsets,
            members,
        }
    }

    pub fn map(&self) -> &FinMap {
        &self.map
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// The preimage of `c`, in increasing domain order.
    pub fn fiber(&self, c: usize) -> &[usize] {
        &self.members[self.offsets[c]..self.offsets[c + 1]]
    }
}

/// Row-major flattening of a multi-index, last axis fastest.
///
/// `flat = sum_k multi[k] * prod_{j > k} shape[j]`
pub fn flatten_index(shape: &[usize], multi_index: &[usize]) -> Result<usize> {
    if multi_index.len() != shape.len() {
        return Err(Error::LengthMismatch {
            field: "multi_index",
            expected: shape.len(),
            actual: multi_index.len(),
        });
    }
    let mut flat = 0usize;
    for (k, (&m, &extent)) in multi_index.iter().zip(shape).enumerate() {
        if m >= extent {
            return Err(Error::OutOfRange {
                field: "multi_index",
                index: k,
                value: m,
                bound: extent,
            });
        }
        flat = flat * extent + m;
    }
    Ok(flat)
}

/// Inverse of [`flatten_index`]: recovers the row-major multi-index.
pub fn unflatten_index(shape: &[usize], flat: usize) -> Result<Vec<usize>> {
    let total = shape_product(shape)?;
    if flat >= total {
        return Err(Error::OutOfRange {
            field: "flat",
            index: 0,
            value: flat,
            bound: total,
        });
    }
    let mut multi = vec![0usize; shape.len()];
    let mut rest = flat;
    for (k, &extent) in shape.iter().enumerate().rev() {
        multi[k] = rest % extent;
        rest /= extent;
    }
    Ok(multi)
}

/// Product of the extents, with overflow reported as `InvalidSize`.
pub fn shape_product(shape: &[usize]) -> Result<usize> {
    shape
        .iter()
        .try_fold(1usize, |acc, &extent| acc.checked_mul(extent))
        .ok_or(Error::InvalidSize { field: "shape" })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_map_to_singleton() {
        let f = FinMap::new(FinSet::new(3), FinSet::new(1), vec![0, 0, 0]).unwrap();
        assert_eq!(f.targets(), &[0, 0, 0]);
        assert_eq!(f, FinMap::constant_to_point(FinSet::new(3)));
    }

    #[test]
    fn identity_map() {
        let f = FinMap::new(FinSet::new(2), FinSet::new(2), vec![0, 1]).unwrap();
        assert_eq!(f, FinMap::identity(FinSet::new(2)));
    }

    #[test]
    fn target_out_of_range_is_rejected() {
        let err = FinMap::new(FinSet::new(3), FinSet::new(2), vec![0, 2, 1]).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { value: 2, .. }));
    }

    #[test]
    fn wrong_target_length_is_rejected() {
        let err = FinMap::new(FinSet::new(3), FinSet::new(2), vec![0, 1]).unwrap_err();
        assert!(matches!(
            err,
            Error::LengthMismatch {
                expected: 3,
                actual: 2,
                ..
            }
        ));
    }

    #[test]
    fn compose_left_identity() {
        let g = FinMap::new(FinSet::new(3), FinSet::new(2), vec![0, 1, 1]).unwrap();
        let composed = FinMap::identity(FinSet::new(3)).compose(&g).unwrap();
        assert_eq!(composed, g);
    }

    #[test]
    fn compose_by_enumeration() {
        let f = FinMap::new(FinSet::new(2), FinSet::new(3), vec![2, 0]).unwrap();
        let g = FinMap::new(FinSet::new(3), FinSet::new(2), vec![1, 1, 0]).unwrap();
        let composed = f.compose(&g).unwrap();
        assert_eq!(composed.domain().size, 2);
        assert_eq!(composed.codomain().size, 2);
        assert_eq!(composed.targets(), &[0, 1]);
    }

    #[test]
    fn compose_rejects_mismatched_middle() {
        let f = FinMap::new(FinSet::new(2), FinSet::new(3), vec![0, 0]).unwrap();
        let g = FinMap::new(FinSet::new(2), FinSet::new(2), vec![0, 1]).unwrap();
        assert!(matches!(
            f.compose(&g).unwrap_err(),
            Error::DomainMismatch { left: 3, right: 2 }
        ));
    }

    #[test]
    fn fiber_index_single_fiber() {
        let f = FinMap::constant_to_point(FinSet::new(3));
        let idx = FiberIndex::build(&f);
        assert_eq!(idx.offsets(), &[0, 3]);
        assert_eq!(idx.members(), &[0, 1, 2]);
    }

    #[test]
    fn fiber_index_stable_grouping() {
        let f = FinMap::new(FinSet::new(3), FinSet::new(2), vec![1, 0, 1]).unwrap();
        let idx = FiberIndex::build(&f);
        assert_eq!(idx.offsets(), &[0, 1, 3]);
        assert_eq!(idx.members(), &[1, 0, 2]);
        assert_eq!(idx.fiber(0), &[1]);
        assert_eq!(idx.fiber(1), &[0, 2]);
    }

    #[test]
    fn fiber_index_empty_domain() {
        let f = FinMap::new(FinSet::new(0), FinSet::new(2), vec![]).unwrap();
        let idx = FiberIndex::build(&f);
        assert_eq!(idx.offsets(), &[0, 0, 0]);
        assert!(idx.members().is_empty());
    }

    #[test]
    fn flatten_row_major() {
        assert_eq!(flatten_index(&[2, 3], &[1, 2]).unwrap(), 5);
        assert_eq!(flatten_index(&[7], &[4]).unwrap(), 4);
    }

    #[test]
    fn unflatten_row_major() {
        assert_eq!(unflatten_index(&[2, 3], 4).unwrap(), vec![1, 1]);
    }

    #[test]
    fn flatten_rejects_out_of_bounds() {
        assert!(matches!(
            flatten_index(&[2, 3], &[1, 3]).unwrap_err(),
            Error::OutOfRange { .. }
        ));
        assert!(matches!(
            unflatten_index(&[2, 3], 6).unwrap_err(),
            Error::OutOfRange { .. }
        ));
    }

    #[test]
    fn maps_into_empty_set_exist_only_from_empty_set() {
        assert!(FinMap::new(FinSet::new(0), FinSet::new(0), vec![]).is_ok());
        assert!(FinMap::new(FinSet::new(1), FinSet::new(0), vec![0]).is_err());
    }
}

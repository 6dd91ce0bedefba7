//! Lattices with a bottom element, and the two instances used throughout the
//! crate: naturals under `max`/`min` and the two-point Boolean chain.
//!
//! Values are only ever compared through a [`Lattice`]'s own operations, so
//! the approximator works for any lattice, not only totally ordered ones.

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};

/// A lattice with a least element.
///
/// Implementations must make `join` and `meet` commutative, associative,
/// idempotent and mutually absorbing, with `bottom` the identity of `join`.
/// [`check_lattice_laws`] verifies these on sample triples.
pub trait Lattice {
    type Value: Copy + PartialEq + Debug;

    fn bottom(&self) -> Self::Value;
    fn join(&self, x: Self::Value, y: Self::Value) -> Self::Value;
    fn meet(&self, x: Self::Value, y: Self::Value) -> Self::Value;

    /// Partial order. Defaults to `join(x, y) == y`.
    fn leq(&self, x: Self::Value, y: Self::Value) -> bool {
        self.join(x, y) == y
    }

    fn is_bottom(&self, x: Self::Value) -> bool {
        x == self.bottom()
    }
}

/// Lattices whose values have a fixed-width little-endian encoding, used by
/// the approximator's binary image.
pub trait EncodableLattice: Lattice {
    /// Tag written in the image header.
    const TAG: u8;
    /// Encoded width of one value in bytes.
    const WIDTH: usize;

    fn encode(&self, value: Self::Value, out: &mut Vec<u8>);
    fn decode(&self, bytes: &[u8]) -> Result<Self::Value>;
}

/// Natural numbers ordered by `<=`: join is `max`, meet is `min`, bottom is 0.
///
/// Values are `u32`, which holds any pattern index plus one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NatLattice;

impl Lattice for NatLattice {
    type Value = u32;

    #[inline]
    fn bottom(&self) -> u32 {
        0
    }

    #[inline]
    fn join(&self, x: u32, y: u32) -> u32 {
        x.max(y)
    }

    #[inline]
    fn meet(&self, x: u32, y: u32) -> u32 {
        x.min(y)
    }

    #[inline]
    fn leq(&self, x: u32, y: u32) -> bool {
        x <= y
    }
}

impl EncodableLattice for NatLattice {
    const TAG: u8 = 1;
    const WIDTH: usize = 4;

    fn encode(&self, value: u32, out: &mut Vec<u8>) {
        out.extend_from_slice(&value.to_le_bytes());
    }

    fn decode(&self, bytes: &[u8]) -> Result<u32> {
        let raw: [u8; 4] = bytes
            .try_into()
            .map_err(|_| Error::Format(format!("expected 4 bytes, got {}", bytes.len())))?;
        Ok(u32::from_le_bytes(raw))
    }
}

/// The two-point chain `false < true`. An approximator over this lattice is a
/// Bloom filter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoolLattice;

impl Lattice for BoolLattice {
    type Value = bool;

    #[inline]
    fn bottom(&self) -> bool {
        false
    }

    #[inline]
    fn join(&self, x: bool, y: bool) -> bool {
        x || y
    }

    #[inline]
    fn meet(&self, x: bool, y: bool) -> bool {
        x && y
    }

    #[inline]
    fn leq(&self, x: bool, y: bool) -> bool {
        !x || y
    }
}

impl EncodableLattice for BoolLattice {
    const TAG: u8 = 2;
    const WIDTH: usize = 1;

    fn encode(&self, value: bool, out: &mut Vec<u8>) {
        out.push(value as u8);
    }

    fn decode(&self, bytes: &[u8]) -> Result<bool> {
        match bytes {
            [0] => Ok(false),
            [1] => Ok(true),
            _ => Err(Error::Format(format!("bad boolean bucket {bytes:?}"))),
        }
    }
}

/// Which lattice law failed, and on which elements.
#[derive(Debug, Clone, PartialEq)]
pub enum LawViolation<V> {
    JoinCommutative(V, V),
    MeetCommutative(V, V),
    JoinAssociative(V, V, V),
    MeetAssociative(V, V, V),
    JoinIdempotent(V),
    MeetIdempotent(V),
    JoinAbsorption(V, V),
    MeetAbsorption(V, V),
    BottomIdentity(V),
    /// `leq`, `join` and `meet` disagree about the order of the pair.
    OrderConsistency(V, V),
    LeqReflexive(V),
    LeqAntisymmetric(V, V),
    LeqTransitive(V, V, V),
}

/// Checks every lattice law on each sampled triple (and on all pairs drawn
/// from it). An empty report means no violation was found.
pub fn check_lattice_laws<L: Lattice>(
    lattice: &L,
    samples: &[(L::Value, L::Value, L::Value)],
) -> Vec<LawViolation<L::Value>> {
    let mut report = Vec::new();
    let l = lattice;
    for &(x, y, z) in samples {
        for a in [x, y, z] {
            if l.join(a, a) != a {
                report.push(LawViolation::JoinIdempotent(a));
            }
            if l.meet(a, a) != a {
                report.push(LawViolation::MeetIdempotent(a));
            }
            if l.join(l.bottom(), a) != a {
                report.push(LawViolation::BottomIdentity(a));
            }
            if !l.leq(a, a) {
                report.push(LawViolation::LeqReflexive(a));
            }
        }
        for (a, b) in [(x, y), (y, z), (x, z), (y, x), (z, y), (z, x)] {
            if l.join(a, b) != l.join(b, a) {
                report.push(LawViolation::JoinCommutative(a, b));
            }
            if l.meet(a, b) != l.meet(b, a) {
                report.push(LawViolation::MeetCommutative(a, b));
            }
            if l.join(a, l.meet(a, b)) != a {
                report.push(LawViolation::JoinAbsorption(a, b));
            }
            if l.meet(a, l.join(a, b)) != a {
                report.push(LawViolation::MeetAbsorption(a, b));
            }
            let by_leq = l.leq(a, b);
            if by_leq != (l.join(a, b) == b) || by_leq != (l.meet(a, b) == a) {
                report.push(LawViolation::OrderConsistency(a, b));
            }
            if l.leq(a, b) && l.leq(b, a) && a != b {
                report.push(LawViolation::LeqAntisymmetric(a, b));
            }
        }
        for (a, b, c) in [(x, y, z), (x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)] {
            if l.join(l.join(a, b), c) != l.join(a, l.join(b, c)) {
                report.push(LawViolation::JoinAssociative(a, b, c));
            }
            if l.meet(l.meet(a, b), c) != l.meet(a, l.meet(b, c)) {
                report.push(LawViolation::MeetAssociative(a, b, c));
            }
            if l.leq(a, b) && l.leq(b, c) && !l.leq(a, c) {
                report.push(LawViolation::LeqTransitive(a, b, c));
            }
        }
    }
    report
}

/// A function given on its support: the listed keys are exactly the points
/// where it is not bottom.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSample<K, V> {
    pairs: Vec<(K, V)>,
    universe_size: Option<u64>,
}

impl<K: Eq + Hash + Clone + Debug, V: Copy + PartialEq + Debug> FunctionSample<K, V> {
    /// Validates that keys are distinct and that no value is bottom.
    pub fn new<L>(lattice: &L, pairs: Vec<(K, V)>) -> Result<Self>
    where
        L: Lattice<Value = V>,
    {
        let mut seen = HashSet::with_capacity(pairs.len());
        for (k, v) in &pairs {
            if lattice.is_bottom(*v) {
                return Err(Error::InvalidSample(format!(
                    "key {k:?} carries the bottom value"
                )));
            }
            if !seen.insert(k.clone()) {
                return Err(Error::InvalidSample(format!("duplicate key {k:?}")));
            }
        }
        Ok(Self {
            pairs,
            universe_size: None,
        })
    }

    /// The true value at `key`: the listed value, or `bottom` off-support.
    pub fn value_at<L>(&self, lattice: &L, key: &K) -> V
    where
        L: Lattice<Value = V>,
    {
        self.pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|&(_, v)| v)
            .unwrap_or_else(|| lattice.bottom())
    }
}

impl<K, V> FunctionSample<K, V> {
    /// Records the size of the domain the keys are drawn from.
    pub fn with_universe(mut self, size: u64) -> Self {
        self.universe_size = Some(size);
        self
    }

    pub fn pairs(&self) -> &[(K, V)] {
        &self.pairs
    }

    pub fn universe_size(&self) -> Option<u64> {
        self.universe_size
    }

    /// Size of the support.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Deliberately broken: "join" is addition.
    struct AddLattice;

    impl Lattice for AddLattice {
        type Value = u32;
        fn bottom(&self) -> u32 {
            0
        }
        fn join(&self, x: u32, y: u32) -> u32 {
            x + y
        }
        fn meet(&self, x: u32, y: u32) -> u32 {
            x.min(y)
        }
    }

    #[test]
    fn nat_laws_hold_on_small_triples() {
        let elems = [0u32, 1, 5];
        let mut triples = Vec::new();
        for &a in &elems {
            for &b in &elems {
                for &c in &elems {
                    triples.push((a, b, c));
                }
            }
        }
        assert!(check_lattice_laws(&NatLattice, &triples).is_empty());
    }

    #[test]
    fn bool_laws_hold_on_all_triples() {
        let mut triples = Vec::new();
        for bits in 0u8..8 {
            triples.push((bits & 1 != 0, bits & 2 != 0, bits & 4 != 0));
        }
        assert_eq!(triples.len(), 8);
        assert!(check_lattice_laws(&BoolLattice, &triples).is_empty());
    }

    #[test]
    fn addition_is_not_idempotent() {
        let report = check_lattice_laws(&AddLattice, &[(1, 1, 0)]);
        assert!(report.contains(&LawViolation::JoinIdempotent(1)));
    }

    #[test]
    fn sample_rejects_bottom_and_duplicates() {
        assert!(matches!(
            FunctionSample::new(&NatLattice, vec![(1u32, 3), (2, 0)]),
            Err(Error::InvalidSample(_))
        ));
        assert!(matches!(
            FunctionSample::new(&NatLattice, vec![(1u32, 3), (1, 4)]),
            Err(Error::InvalidSample(_))
        ));
        let f = FunctionSample::new(&NatLattice, vec![(1u32, 3), (5, 1), (9, 2)])
            .unwrap()
            .with_universe(12);
        assert_eq!(f.value_at(&NatLattice, &5), 1);
        assert_eq!(f.value_at(&NatLattice, &4), 0);
        assert_eq!(f.universe_size(), Some(12));
    }

    #[test]
    fn encoding_roundtrips() {
        let mut buf = Vec::new();
        NatLattice.encode(0xdead_beef, &mut buf);
        assert_eq!(NatLattice.decode(&buf).unwrap(), 0xdead_beef);
        buf.clear();
        BoolLattice.encode(true, &mut buf);
        assert!(BoolLattice.decode(&buf).unwrap());
        assert!(BoolLattice.decode(&[7]).is_err());
    }

    proptest! {
        #[test]
        fn nat_laws_on_random_triples(triples in prop::collection::vec(any::<(u32, u32, u32)>(), 1..32)) {
            prop_assert!(check_lattice_laws(&NatLattice, &triples).is_empty());
        }

        #[test]
        fn bool_laws_on_random_triples(triples in prop::collection::vec(any::<(bool, bool, bool)>(), 1..16)) {
            prop_assert!(check_lattice_laws(&BoolLattice, &triples).is_empty());
        }

        #[test]
        fn nat_leq_is_a_partial_order(a: u32, b: u32, c: u32) {
            let l = NatLattice;
            prop_assert!(l.leq(a, a));
            prop_assert!(!(l.leq(a, b) && l.leq(b, a)) || a == b);
            prop_assert!(!(l.leq(a, b) && l.leq(b, c)) || l.leq(a, c));
        }
    }
}

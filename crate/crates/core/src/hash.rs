//! Seeded hash families mapping keys to bucket indices.
//!
//! [`HashFamily`] derives `d` functions from two 64-bit digests by double
//! hashing, `h_j(x) = (g1(x) + j * g2(x)) mod m`, with `g2` forced odd.
//! [`FixedFamily`] wraps explicit closures and is meant for hand-checked
//! examples.

use std::fmt;

use crate::error::{Error, Result};

const ROLE_PRIMARY: u64 = 0x243f_6a88_85a3_08d3;
const ROLE_STEP: u64 = 0x1319_8a2e_0370_7344;
const BYTES_LEN: u64 = 0xa409_3822_299f_31d0;
const BYTES_CHUNK: u64 = 0x082e_fa98_ec4e_6c89;

/// 64-bit finalizer with full avalanche (the SplitMix64 output function).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent-looking sub-seed from a seed and a stream index.
#[inline]
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix64(mix64(seed ^ 0x9e37_79b9_7f4a_7c15).wrapping_add(stream.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// Something a hash family can digest.
pub trait Key {
    /// A salted 64-bit digest. Equal keys and salts give equal digests on
    /// every platform.
    fn digest(&self, salt: u64) -> u64;
}

macro_rules! int_key {
    ($($t:ty),*) => {$(
        impl Key for $t {
            #[inline]
            fn digest(&self, salt: u64) -> u64 {
                mix64(*self as u64 ^ salt)
            }
        }
    )*};
}

int_key!(u8, u16, u32, u64, usize, i32, i64);

impl Key for char {
    #[inline]
    fn digest(&self, salt: u64) -> u64 {
        (*self as u32).digest(salt)
    }
}

impl Key for [u8] {
    fn digest(&self, salt: u64) -> u64 {
        let mut h = salt ^ (self.len() as u64).wrapping_mul(BYTES_LEN);
        for chunk in self.chunks(8) {
            let mut word = [0u8; 8];
            word[..chunk.len()].copy_from_slice(chunk);
            h = mix64(h ^ u64::from_le_bytes(word)).wrapping_add(BYTES_CHUNK);
        }
        mix64(h)
    }
}

impl Key for str {
    fn digest(&self, salt: u64) -> u64 {
        self.as_bytes().digest(salt)
    }
}

impl Key for Vec<u8> {
    fn digest(&self, salt: u64) -> u64 {
        self.as_slice().digest(salt)
    }
}

impl Key for String {
    fn digest(&self, salt: u64) -> u64 {
        self.as_bytes().digest(salt)
    }
}

impl<T: Key + ?Sized> Key for &T {
    #[inline]
    fn digest(&self, salt: u64) -> u64 {
        (**self).digest(salt)
    }
}

/// The dimensions of a family: `d` functions onto `m` buckets.
pub trait FamilyShape {
    fn d(&self) -> usize;
    fn m(&self) -> usize;
}

/// `d` functions from keys to `[0, m)`.
pub trait BucketHasher<K: ?Sized>: FamilyShape {
    /// Bucket of `key` under function `j`. Callers guarantee `j < d`.
    fn bucket(&self, key: &K, j: usize) -> usize;

    /// All `d` buckets of `key`, in function order.
    fn buckets<'a>(&'a self, key: &'a K) -> impl Iterator<Item = usize> + 'a {
        (0..self.d()).map(move |j| self.bucket(key, j))
    }

    /// Checked form of [`bucket`](Self::bucket).
    fn index(&self, key: &K, j: usize) -> Result<usize> {
        let d = self.d();
        if j >= d {
            return Err(Error::InvalidParameter(format!(
                "function index {j} out of range for d = {d}"
            )));
        }
        Ok(self.bucket(key, j))
    }
}

/// Double-hashing family fully determined by `(seed, d, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashFamily {
    seed: u64,
    d: usize,
    m: usize,
    primary_salt: u64,
    step_salt: u64,
}

impl HashFamily {
    pub fn new(seed: u64, d: usize, m: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        Ok(Self {
            seed,
            d,
            m,
            primary_salt: mix64(seed ^ ROLE_PRIMARY),
            step_salt: mix64(seed ^ ROLE_STEP),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The two digests `(g1, g2)` behind every index; `g2` is odd.
    #[inline]
    pub fn digests<K: Key + ?Sized>(&self, key: &K) -> (u64, u64) {
        (key.digest(self.primary_salt), key.digest(self.step_salt) | 1)
    }
}

impl FamilyShape for HashFamily {
    #[inline]
    fn d(&self) -> usize {
        self.d
    }

    #[inline]
    fn m(&self) -> usize {
        self.m
    }
}

impl<K: Key + ?Sized> BucketHasher<K> for HashFamily {
    #[inline]
    fn bucket(&self, key: &K, j: usize) -> usize {
        let (g1, g2) = self.digests(key);
        (g1.wrapping_add((j as u64).wrapping_mul(g2)) % self.m as u64) as usize
    }

    fn buckets<'a>(&'a self, key: &'a K) -> impl Iterator<Item = usize> + 'a {
        let (g1, g2) = self.digests(key);
        let m = self.m as u64;
        (0..self.d as u64).map(move |j| (g1.wrapping_add(j.wrapping_mul(g2)) % m) as usize)
    }
}

type BucketFn<K> = Box<dyn Fn(&K) -> usize + Send + Sync>;

/// A family given by explicit functions, e.g. `h0(x) = x / 2`, `h1(x) = 5x mod 6`.
pub struct FixedFamily<K: ?Sized> {
    m: usize,
    functions: Vec<BucketFn<K>>,
}

impl<K: ?Sized> FixedFamily<K> {
    pub fn new(m: usize, functions: Vec<BucketFn<K>>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::InvalidParameter("d must be at least 1".into()));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        Ok(Self { m, functions })
    }
}

impl<K: ?Sized> fmt::Debug for FixedFamily<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FixedFamily")
            .field("d", &self.functions.len())
            .field("m", &self.m)
            .finish()
    }
}

impl<K: ?Sized> FamilyShape for FixedFamily<K> {
    fn d(&self) -> usize {
        self.functions.len()
    }

    fn m(&self) -> usize {
        self.m
    }
}

impl<K: ?Sized> BucketHasher<K> for FixedFamily<K> {
    fn bucket(&self, key: &K, j: usize) -> usize {
        let b = (self.functions[j])(key);
        assert!(b < self.m, "fixed function {j} returned {b}, outside [0, {})", self.m);
        b
    }
}

#[cfg(test)]
pub(crate) use tests::worked_example_family;

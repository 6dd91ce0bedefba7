//! The compact approximator: `m` lattice-valued buckets and `d` hash
//! functions. Writes join a value into each of a key's buckets; reads take the
//! meet of those buckets. The value read back is never below the value
//! written, and keys that were never written usually read back as bottom.

use std::f64::consts::LN_2;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::hash::{BucketHasher, FamilyShape, HashFamily};
use crate::lattice::{EncodableLattice, FunctionSample, Lattice};

/// Default lower bound on the bucket count for tiny supports.
pub const DEFAULT_M_FLOOR: usize = 16;

const MAGIC: &[u8; 4] = b"LAPX";
const FORMAT_VERSION: u16 = 1;
const HEADER_LEN: usize = 28;

/// Sizing for an approximator: support estimate `n`, `d` functions, `m` buckets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildParams {
    pub n: usize,
    pub d: usize,
    pub m: usize,
}

impl BuildParams {
    pub fn family(&self, seed: u64) -> Result<HashFamily> {
        HashFamily::new(seed, self.d, self.m)
    }
}

/// `m = max(m_floor, ceil(n * d / ln 2))`, the bucket count at which the
/// bottom-case error is minimised for `d` functions.
pub fn choose_params(n: usize, d: usize, m_floor: usize) -> Result<BuildParams> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    if m_floor == 0 {
        return Err(Error::InvalidParameter("m_floor must be at least 1".into()));
    }
    let tuned = (n as f64 * d as f64 / LN_2).ceil() as usize;
    Ok(BuildParams {
        n,
        d,
        m: tuned.max(m_floor),
    })
}

/// `round(m ln 2 / n)`, at least 1.
pub fn optimal_d(n: usize, m: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "no finite optimal d for an empty support".into(),
        ));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    Ok(((m as f64 * LN_2 / n as f64).round() as usize).max(1))
}

#[derive(Debug, Clone)]
pub struct CompactApproximator<L: Lattice, H> {
    lattice: L,
    hasher: H,
    buckets: Vec<L::Value>,
}

impl<L: Lattice, H: FamilyShape> CompactApproximator<L, H> {
    /// An approximator with every bucket at bottom.
    pub fn new(lattice: L, hasher: H) -> Self {
        let buckets = vec![lattice.bottom(); hasher.m()];
        Self {
            lattice,
            hasher,
            buckets,
        }
    }

    /// Fills a fresh approximator from `sample`, inserting left to right.
    pub fn build<K>(lattice: L, hasher: H, sample: &FunctionSample<K, L::Value>) -> Result<Self>
    where
        H: BucketHasher<K>,
    {
        let mut approx = Self::new(lattice, hasher);
        for (key, value) in sample.pairs() {
            approx.insert(key, *value)?;
        }
        Ok(approx)
    }

    /// Joins `value` into each bucket of `key`.
    pub fn insert<K: ?Sized>(&mut self, key: &K, value: L::Value) -> Result<()>
    where
        H: BucketHasher<K>,
    {
        if self.lattice.is_bottom(value) {
            return Err(Error::InvalidSample(
                "cannot insert the bottom value".into(),
            ));
        }
        for i in self.hasher.buckets(key) {
            let slot = &mut self.buckets[i];
            *slot = self.lattice.join(*slot, value);
        }
        Ok(())
    }

    /// Meet of the buckets of `key`; an upper bound of the stored value.
    #[inline]
    pub fn query<K: ?Sized>(&self, key: &K) -> L::Value
    where
        H: BucketHasher<K>,
    {
        let bottom = self.lattice.bottom();
        let mut indices = self.hasher.buckets(key);
        // d >= 1, so there is always a first bucket
        let mut acc = match indices.next() {
            Some(i) => self.buckets[i],
            None => return bottom,
        };
        for i in indices {
            if acc == bottom {
                break;
            }
            acc = self.lattice.meet(acc, self.buckets[i]);
        }
        acc
    }

    /// Resets every bucket to bottom.
    pub fn clear(&mut self) {
        let bottom = self.lattice.bottom();
        self.buckets.fill(bottom);
    }

    pub fn buckets(&self) -> &[L::Value] {
        &self.buckets
    }

    pub fn lattice(&self) -> &L {
        &self.lattice
    }

    pub fn hasher(&self) -> &H {
        &self.hasher
    }

    pub fn d(&self) -> usize {
        self.hasher.d()
    }

    pub fn m(&self) -> usize {
        self.hasher.m()
    }
}

impl<L: EncodableLattice> CompactApproximator<L, HashFamily> {
    /// Binary image: a 28-byte header (magic, version, lattice tag, `d`, `m`,
    /// seed) followed by the `m` buckets, all little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.buckets.len() * L::WIDTH);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.push(L::TAG);
        out.push(0);
        out.extend_from_slice(&(self.d() as u32).to_le_bytes());
        out.extend_from_slice(&(self.m() as u64).to_le_bytes());
        out.extend_from_slice(&self.hasher.seed().to_le_bytes());
        for &v in &self.buckets {
            self.lattice.encode(v, &mut out);
        }
        out
    }

    pub fn from_bytes(lattice: L, bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Format("truncated header".into()));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        if bytes[6] != L::TAG {
            return Err(Error::Format(format!(
                "lattice tag {} does not match expected {}",
                bytes[6],
                L::TAG
            )));
        }
        let d = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let m = u64::from_le_bytes(bytes[12..20].try_into().unwrap());
        let seed = u64::from_le_bytes(bytes[20..28].try_into().unwrap());
        let m = usize::try_from(m).map_err(|_| Error::Format("m too large".into()))?;
        let body = &bytes[HEADER_LEN..];
        if Some(body.len()) != m.checked_mul(L::WIDTH) {
            return Err(Error::Format(format!(
                "expected {m} buckets of {} bytes, found {} bytes",
                L::WIDTH,
                body.len()
            )));
        }
        let hasher = HashFamily::new(seed, d, m).map_err(|e| Error::Format(e.to_string()))?;
        let buckets = body
            .chunks_exact(L::WIDTH)
            .map(|c| lattice.decode(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            lattice,
            hasher,
            buckets,
        })
    }

    pub fn write_to<W: Write>(&self, mut writer: W) -> Result<()> {
        writer.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read_from<R: Read>(lattice: L, mut reader: R) -> Result<Self> {
        let mut bytes = Vec::new();
        reader.read_to_end(&mut bytes)?;
        Self::from_bytes(lattice, &bytes)
    }
}

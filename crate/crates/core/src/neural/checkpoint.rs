//! Binary checkpoint container.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! b"PAESCKPT" u32 version
//! str config                       (u64 length + UTF-8)
//! str vocab_mode, u64 n, n x str   vocabulary entries
//! str registry_sha256
//! u64 sets, per set: u8 id, u64 n, n x (f64 min, f64 max)
//! u64 x 6 dims (vocab, embedding, filters, window, hidden, features), u8 encoder
//! params:     u64 groups, per group: str name, u64 rank, rank x u64, u64 len, len x f64
//! f64 x 3 optimizer hyper-parameters (learning rate, rho, epsilon)
//! accumulators: same encoding as params
//! [u8; 32] SHA-256 of every preceding byte
//! ```

use std::path::Path;

use sha2::{Digest, Sha256};

use super::optim::RmsProp;
use super::params::{ModelDims, ParamSet, Tensor};
use crate::features::NormalizationStats;
use crate::text_prep::{EmbeddingMode, Vocabulary};
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"PAESCKPT";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    /// Echo of the run configuration as `key=value` lines.
    pub config: String,
    pub vocab: Vocabulary,
    pub registry_sha256: String,
    pub normalization: NormalizationStats,
    pub params: ParamSet,
    pub optimizer: RmsProp,
}

struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn str(&mut self, s: &str) {
        self.u64(s.len() as u64);
        self.0.extend_from_slice(s.as_bytes());
    }
    fn params(&mut self, p: &ParamSet) {
        self.u64(p.groups.len() as u64);
        for t in &p.groups {
            self.str(&t.name);
            self.u64(t.shape.len() as u64);
            for d in &t.shape {
                self.u64(*d as u64);
            }
            self.u64(t.data.len() as u64);
            for x in &t.data {
                self.f64(*x);
            }
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|e| *e <= self.buf.len())
            .ok_or_else(|| Error::Checkpoint(format!("truncated at byte {}", self.pos)))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Checkpoint("length overflow".into()))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn str(&mut self) -> Result<String> {
        let n = self.usize()?;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|e| Error::Checkpoint(e.to_string()))
    }
    fn params(&mut self, dims: ModelDims) -> Result<ParamSet> {
        let expected = ParamSet::zeros(dims);
        let n = self.usize()?;
        let mut groups = Vec::with_capacity(n.min(64));
        for _ in 0..n {
            let name = self.str()?;
            let rank = self.usize()?;
            let shape = (0..rank)
                .map(|_| self.usize())
                .collect::<Result<Vec<_>>>()?;
            let len = self.usize()?;
            if len != shape.iter().product::<usize>() {
                return Err(Error::Checkpoint(format!(
                    "`{name}`: length does not match shape"
                )));
            }
            let data = (0..len).map(|_| self.f64()).collect::<Result<Vec<_>>>()?;
            groups.push(Tensor { name, shape, data });
        }
        let set = ParamSet { dims, groups };
        expected.check_layout(&set)?;
        Ok(set)
    }
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer(Vec::new());
        w.0.extend_from_slice(MAGIC);
        w.0.extend_from_slice(&VERSION.to_le_bytes());
        w.str(&self.config);
        w.str(&self.vocab.mode().to_string());
        w.u64(self.vocab.len() as u64);
        for e in self.vocab.entries() {
            w.str(e);
        }
        w.str(&self.registry_sha256);
        let sets: Vec<(u8, &[(f64, f64)])> = self.normalization.sets().collect();
        w.u64(sets.len() as u64);
        for (id, ranges) in sets {
            w.u8(id);
            w.u64(ranges.len() as u64);
            for (lo, hi) in ranges {
                w.f64(*lo);
                w.f64(*hi);
            }
        }
        let d = self.params.dims;
        for v in [
            d.vocab,
            d.embedding,
            d.filters,
            d.window,
            d.hidden,
            d.features,
        ] {
            w.u64(v as u64);
        }
        w.u8(d.encoder as u8);
        w.params(&self.params);
        w.f64(self.optimizer.learning_rate);
        w.f64(self.optimizer.rho);
        w.f64(self.optimizer.epsilon);
        w.params(&self.optimizer.accumulators);
        let digest = Sha256::digest(&w.0);
        w.0.extend_from_slice(&digest);
        w.0
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() + 4 + 32 || &bytes[..8] != MAGIC {
            return Err(Error::Checkpoint("not a checkpoint file".into()));
        }
        let (body, digest) = bytes.split_at(bytes.len() - 32);
        if Sha256::digest(body).as_slice() != digest {
            return Err(Error::Checksum {
                what: "checkpoint".into(),
            });
        }
        let mut r = Reader { buf: body, pos: 8 };
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {version}")));
        }
        let config = r.str()?;
        let mode: EmbeddingMode = r.str()?.parse()?;
        let n = r.usize()?;
        let entries = (0..n).map(|_| r.str()).collect::<Result<Vec<_>>>()?;
        let vocab = Vocabulary::from_parts(mode, entries)?;
        let registry_sha256 = r.str()?;
        let mut normalization = NormalizationStats::default();
        for _ in 0..r.usize()? {
            let id = r.u8()?;
            let n = r.usize()?;
            let ranges = (0..n)
                .map(|_| Ok((r.f64()?, r.f64()?)))
                .collect::<Result<Vec<_>>>()?;
            normalization.insert(id, ranges);
        }
        let mut dims = [0usize; 6];
        for d in &mut dims {
            *d = r.usize()?;
        }
        let dims = ModelDims {
            vocab: dims[0],
            embedding: dims[1],
            filters: dims[2],
            window: dims[3],
            hidden: dims[4],
            features: dims[5],
            encoder: r.u8()? != 0,
        };
        let params = r.params(dims)?;
        let (learning_rate, rho, epsilon) = (r.f64()?, r.f64()?, r.f64()?);
        let accumulators = r.params(dims)?;
        if r.pos != body.len() {
            return Err(Error::Checkpoint("trailing bytes".into()));
        }
        Ok(Checkpoint {
            config,
            vocab,
            registry_sha256,
            normalization,
            params,
            optimizer: RmsProp {
                learning_rate,
                rho,
                epsilon,
                accumulators,
            },
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

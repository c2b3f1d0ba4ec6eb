//! Binary index file.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! magic          8 bytes  "QLBM25IX"
//! version        u32      currently 1
//! mode           u8       tokenizer mode 0..=3
//! scorer         u8       0 = bm25, 1 = dph
//! flags          u8       bit 0: applied_q present, bit 1: applied_gamma present
//! reserved       u8       0
//! k1, b          f64, f64
//! applied_q      f64      0.0 when absent
//! applied_gamma  f64      0.0 when absent
//! n_docs         u64
//! n_terms        u64
//! nnz            u64
//! avg_len        f64
//! doc ids        n_docs x (u32 byte length, UTF-8 bytes)
//! doc lens       n_docs x u32
//! terms          n_terms x (u32 byte length, UTF-8 bytes)
//! col_ptr        (n_terms + 1) x u64
//! row_idx        nnz x u32
//! scores         nnz x f64
//! ```
//!
//! Every field has a fixed width, so rescaling never changes the file size.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{BuildParams, IndexHeader, Postings, Scorer, SparseScoreIndex};
use crate::error::{Error, Result};
use crate::tokenize::TokenizerMode;

pub const INDEX_MAGIC: &[u8; 8] = b"QLBM25IX";
pub const INDEX_VERSION: u32 = 1;

const FLAG_Q: u8 = 1;
const FLAG_GAMMA: u8 = 2;

pub fn save_index(index: &SparseScoreIndex, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_index(index, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn load_index(path: &Path) -> Result<SparseScoreIndex> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_index(&mut BufReader::new(file))
}

impl SparseScoreIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        write_index(self, &mut buf).expect("writing to a Vec cannot fail");
        buf
    }

    pub fn from_bytes(mut bytes: &[u8]) -> Result<Self> {
        read_index(&mut bytes)
    }
}

fn write_index<W: Write>(index: &SparseScoreIndex, w: &mut W) -> io::Result<()> {
    let h = &index.header;
    w.write_all(INDEX_MAGIC)?;
    w.write_all(&INDEX_VERSION.to_le_bytes())?;
    let mut flags = 0u8;
    if h.applied_q.is_some() {
        flags |= FLAG_Q;
    }
    if h.applied_gamma.is_some() {
        flags |= FLAG_GAMMA;
    }
    w.write_all(&[h.mode.code(), h.scorer.code(), flags, 0])?;
    for v in [
        h.params.k1,
        h.params.b,
        h.applied_q.unwrap_or(0.0),
        h.applied_gamma.unwrap_or(0.0),
    ] {
        w.write_all(&v.to_le_bytes())?;
    }
    w.write_all(&(index.doc_ids.len() as u64).to_le_bytes())?;
    w.write_all(&(index.terms.len() as u64).to_le_bytes())?;
    w.write_all(&(index.scores.len() as u64).to_le_bytes())?;
    w.write_all(&index.avg_len.to_le_bytes())?;
    for id in &index.doc_ids {
        write_str(w, id)?;
    }
    for &l in &index.doc_lens {
        w.write_all(&l.to_le_bytes())?;
    }
    for t in &index.terms {
        write_str(w, t)?;
    }
    for &p in &index.col_ptr {
        w.write_all(&p.to_le_bytes())?;
    }
    for &r in &index.row_idx {
        w.write_all(&r.to_le_bytes())?;
    }
    for &s in &index.scores {
        w.write_all(&s.to_le_bytes())?;
    }
    Ok(())
}

fn write_str<W: Write>(w: &mut W, s: &str) -> io::Result<()> {
    let len = u32::try_from(s.len()).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "string too long"))?;
    w.write_all(&len.to_le_bytes())?;
    w.write_all(s.as_bytes())
}

struct Reader<'r, R: Read> {
    inner: &'r mut R,
}

impl<R: Read> Reader<'_, R> {
    fn bytes<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.inner.read_exact(&mut buf).map_err(map_read_err)?;
        Ok(buf)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.bytes::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes()?))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u32()? as usize;
        let mut buf = Vec::new();
        self.inner
            .take(len as u64)
            .read_to_end(&mut buf)
            .map_err(map_read_err)?;
        if buf.len() != len {
            return Err(Error::Corrupt("truncated file".into()));
        }
        String::from_utf8(buf).map_err(|_| Error::Corrupt("string is not UTF-8".into()))
    }

    fn vec<T>(&mut self, n: u64, read: impl Fn(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        // Cap the reservation so a corrupt count cannot trigger a huge allocation.
        let mut out = Vec::with_capacity(n.min(1 << 20) as usize);
        for _ in 0..n {
            out.push(read(self)?);
        }
        Ok(out)
    }
}

fn map_read_err(e: io::Error) -> Error {
    if e.kind() == io::ErrorKind::UnexpectedEof {
        Error::Corrupt("truncated file".into())
    } else {
        Error::Corrupt(e.to_string())
    }
}

fn read_index<R: Read>(inner: &mut R) -> Result<SparseScoreIndex> {
    let mut r = Reader { inner };
    let magic = r.bytes::<8>()?;
    if &magic != INDEX_MAGIC {
        return Err(Error::Corrupt("bad magic; not an index file".into()));
    }
    let version = r.u32()?;
    if version != INDEX_VERSION {
        return Err(Error::Version {
            found: version,
            expected: INDEX_VERSION,
        });
    }
    let mode = TokenizerMode::from_code(r.u8()?).ok_or_else(|| Error::Corrupt("unknown tokenizer mode".into()))?;
    let scorer = Scorer::from_code(r.u8()?).ok_or_else(|| Error::Corrupt("unknown scorer".into()))?;
    let flags = r.u8()?;
    let _reserved = r.u8()?;
    let k1 = r.f64()?;
    let b = r.f64()?;
    let q = r.f64()?;
    let gamma = r.f64()?;
    let n_docs = r.u64()?;
    let n_terms = r.u64()?;
    let nnz = r.u64()?;
    let avg_len = r.f64()?;

    let doc_ids = r.vec(n_docs, |r| r.string())?;
    let doc_lens = r.vec(n_docs, |r| r.u32())?;
    let terms = r.vec(n_terms, |r| r.string())?;
    let col_ptr = r.vec(n_terms + 1, |r| r.u64())?;
    let row_idx = r.vec(nnz, |r| r.u32())?;
    let scores = r.vec(nnz, |r| r.f64())?;
    let mut probe = [0u8; 1];
    if r.inner.read(&mut probe).map_err(map_read_err)? != 0 {
        return Err(Error::Corrupt("trailing bytes after index data".into()));
    }

    let header = IndexHeader {
        mode,
        scorer,
        params: BuildParams { k1, b },
        applied_q: (flags & FLAG_Q != 0).then_some(q),
        applied_gamma: (flags & FLAG_GAMMA != 0).then_some(gamma),
    };
    let postings = Postings {
        terms,
        doc_lens,
        avg_len,
        col_ptr,
        row_idx,
        tfs: Vec::new(),
    };
    if postings.col_ptr.windows(2).any(|w| w[1] < w[0]) || postings.col_ptr.last().copied() != Some(nnz) {
        return Err(Error::Corrupt("column pointers are inconsistent".into()));
    }
    let index = SparseScoreIndex::from_parts(header, doc_ids, postings, scores);
    index.validate()?;
    Ok(index)
}

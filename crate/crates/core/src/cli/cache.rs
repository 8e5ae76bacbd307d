//! On-disk basis cache.
//!
//! Layout, little-endian: magic `TDBC`, format version (u16), p (u32),
//! r (u32), N (u64), k (u32), χ-label (u16 length + UTF-8), precision
//! (u32), dim (u32), coefficient width in bytes (u8); then the dim×prec
//! basis matrix row-major with r coordinates per entry, each `width`
//! bytes; then the pivot list (dim × u32); then the recipe section (count
//! u32, each a JSON-encoded key list with u32 length); then the dim×dim
//! transform in the same coefficient encoding.

use std::fs;
use std::io::{self, Cursor, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use crate::characters::DirichletChar;
use crate::eisbasis::{BaseKey, BasePool, ModFormSpace};
use crate::ff::FieldCtx;
use crate::linalg::{Echelon, Matrix};

pub const MAGIC: &[u8; 4] = b"TDBC";
pub const FORMAT_VERSION: u16 = 1;
pub const ENV_VAR: &str = "THETA_DOUBLER_CACHE";

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("CacheIo: {0}")]
    Io(#[from] io::Error),
    #[error("CacheCorrupt: {0}")]
    Corrupt(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub p: u32,
    pub r: u32,
    pub level: u64,
    pub weight: u32,
    pub chi: String,
    pub prec: u32,
    pub dim: u32,
    pub width: u8,
}

/// Cache directory: explicit flag, then the environment, then
/// `$HOME/.cache/theta-doubler`.
pub fn cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(ENV_VAR) {
        return PathBuf::from(p);
    }
    let home = std::env::var_os("HOME").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    home.join(".cache").join("theta-doubler")
}

pub fn file_name(p: u32, r: u32, level: u64, weight: u32, chi: &str) -> String {
    let safe: String = chi.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    format!("basis_p{p}_r{r}_N{level}_k{weight}_{safe}.tdb")
}

fn width_for(p: u32) -> u8 {
    if p < 256 {
        1
    } else {
        2
    }
}

fn write_matrix(w: &mut impl Write, ctx: &FieldCtx, m: &Matrix, width: u8) -> io::Result<()> {
    for &x in m.data() {
        for c in ctx.coeffs(x) {
            if width == 1 {
                w.write_u8(c as u8)?;
            } else {
                w.write_u16::<LE>(c as u16)?;
            }
        }
    }
    Ok(())
}

fn read_matrix(r: &mut impl Read, ctx: &FieldCtx, rows: usize, cols: usize, width: u8) -> Result<Matrix, CacheError> {
    let deg = ctx.r() as usize;
    let mut data = Vec::with_capacity(rows * cols);
    let mut digits = vec![0u32; deg];
    for _ in 0..rows * cols {
        for d in digits.iter_mut() {
            *d = if width == 1 { r.read_u8()? as u32 } else { r.read_u16::<LE>()? as u32 };
            if *d >= ctx.p() {
                return Err(CacheError::Corrupt("coefficient out of range".into()));
            }
        }
        data.push(ctx.from_coeffs(&digits));
    }
    Ok(Matrix::from_flat(ctx, rows, cols, data))
}

pub fn encode(space: &ModFormSpace) -> Vec<u8> {
    let ctx = space.ctx();
    let width = width_for(ctx.p());
    let mut buf = Vec::new();
    let b = &space.basis().basis;
    buf.extend_from_slice(MAGIC);
    buf.write_u16::<LE>(FORMAT_VERSION).unwrap();
    buf.write_u32::<LE>(ctx.p()).unwrap();
    buf.write_u32::<LE>(ctx.r()).unwrap();
    buf.write_u64::<LE>(space.level).unwrap();
    buf.write_u32::<LE>(space.weight).unwrap();
    let label = space.chi.label();
    buf.write_u16::<LE>(label.len() as u16).unwrap();
    buf.extend_from_slice(label.as_bytes());
    buf.write_u32::<LE>(b.cols() as u32).unwrap();
    buf.write_u32::<LE>(b.rows() as u32).unwrap();
    buf.write_u8(width).unwrap();
    write_matrix(&mut buf, ctx, b, width).unwrap();
    for &pv in space.pivots() {
        buf.write_u32::<LE>(pv as u32).unwrap();
    }
    let keys = space.recipe_keys();
    buf.write_u32::<LE>(keys.len() as u32).unwrap();
    for k in &keys {
        let js = serde_json::to_vec(k).unwrap();
        buf.write_u32::<LE>(js.len() as u32).unwrap();
        buf.extend_from_slice(&js);
    }
    write_matrix(&mut buf, ctx, space.transform(), width).unwrap();
    buf
}

pub fn read_header(r: &mut impl Read) -> Result<Header, CacheError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CacheError::Corrupt("bad magic".into()));
    }
    let version = r.read_u16::<LE>()?;
    if version != FORMAT_VERSION {
        return Err(CacheError::Corrupt(format!("format version {version}")));
    }
    let p = r.read_u32::<LE>()?;
    let rr = r.read_u32::<LE>()?;
    let level = r.read_u64::<LE>()?;
    let weight = r.read_u32::<LE>()?;
    let n = r.read_u16::<LE>()? as usize;
    let mut lb = vec![0u8; n];
    r.read_exact(&mut lb)?;
    let chi = String::from_utf8(lb).map_err(|_| CacheError::Corrupt("label".into()))?;
    let prec = r.read_u32::<LE>()?;
    let dim = r.read_u32::<LE>()?;
    let width = r.read_u8()?;
    Ok(Header { p, r: rr, level, weight, chi, prec, dim, width })
}

/// Rebuilds a space from bytes; the recipes and transform must reproduce
/// the stored basis exactly.
pub fn decode(bytes: &[u8], chi: &DirichletChar) -> Result<ModFormSpace, CacheError> {
    let ctx = chi.ctx().clone();
    let mut cur = Cursor::new(bytes);
    let h = read_header(&mut cur)?;
    if h.p != ctx.p() || h.r != ctx.r() || h.level != chi.modulus() || h.chi != chi.label() {
        return Err(CacheError::Corrupt("header does not match the request".into()));
    }
    let (dim, prec) = (h.dim as usize, h.prec as usize);
    let basis = read_matrix(&mut cur, &ctx, dim, prec, h.width)?;
    let mut pivots = Vec::with_capacity(dim);
    for _ in 0..dim {
        pivots.push(cur.read_u32::<LE>()? as usize);
    }
    let pool = Arc::new(BasePool::new(h.level, h.weight, &ctx));
    let count = cur.read_u32::<LE>()? as usize;
    let mut recipes = Vec::with_capacity(count);
    for _ in 0..count {
        let n = cur.read_u32::<LE>()? as usize;
        let mut js = vec![0u8; n];
        cur.read_exact(&mut js)?;
        let keys: Vec<BaseKey> = serde_json::from_slice(&js).map_err(|e| CacheError::Corrupt(e.to_string()))?;
        let idx: Option<Vec<usize>> = keys.iter().map(|k| pool.index_of(k)).collect();
        recipes.push(idx.ok_or_else(|| CacheError::Corrupt("unknown base series".into()))?);
    }
    let transform = read_matrix(&mut cur, &ctx, dim, count, h.width)?;
    let ech = Echelon { basis, pivots };
    ModFormSpace::from_parts(chi, h.weight, pool, recipes, transform, ech)
        .map_err(|e| CacheError::Corrupt(e.to_string()))
}

pub fn load(dir: &Path, chi: &DirichletChar, weight: u32) -> Result<Option<ModFormSpace>, CacheError> {
    let ctx = chi.ctx();
    let path = dir.join(file_name(ctx.p(), ctx.r(), chi.modulus(), weight, &chi.label()));
    match fs::read(&path) {
        Ok(bytes) => decode(&bytes, chi).map(Some),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Writes through a temporary file and an atomic rename, so concurrent
/// writers of the same entry never expose a partial file.
pub fn store(dir: &Path, space: &ModFormSpace) -> Result<PathBuf, CacheError> {
    fs::create_dir_all(dir)?;
    let ctx = space.ctx();
    let name = file_name(ctx.p(), ctx.r(), space.level, space.weight, &space.chi.label());
    let path = dir.join(&name);
    let tmp = dir.join(format!("{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, encode(space))?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::UnitGroup;
    use crate::eisbasis::weight_k_basis;
    use crate::ff::make_field;

    #[test]
    fn roundtrip() {
        let f = make_field(5, 1).unwrap();
        let chi = DirichletChar::parse(&UnitGroup::new(23), &f, "23:11").unwrap();
        let s = weight_k_basis(23, 5, &chi, None).unwrap();
        let bytes = encode(&s);
        let h = read_header(&mut Cursor::new(&bytes)).unwrap();
        assert_eq!((h.p, h.r, h.level, h.weight, h.dim, h.width), (5, 1, 23, 5, 9, 1));
        assert_eq!(h.prec as usize, s.prec());
        let back = decode(&bytes, &chi).unwrap();
        assert_eq!(back.basis().basis, s.basis().basis);
        assert_eq!(back.basis_at(60).basis, s.basis_at(60).basis);
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(decode(&bad, &chi), Err(CacheError::Corrupt(_))));
        let dir = tempfile::tempdir().unwrap();
        assert!(load(dir.path(), &chi, 5).unwrap().is_none());
        store(dir.path(), &s).unwrap();
        assert_eq!(load(dir.path(), &chi, 5).unwrap().unwrap().dim(), 9);
    }
}

use std::fs;
use std::io;
use std::path::Path;

use micropolar::spectral::{AnyField, Field, Grid, ScalarField, VectorField};
use num_complex::Complex64;
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"MPS1";
pub const VERSION: u32 = 1;
/// Largest relative Hermitian defect accepted on load.
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("not a snapshot: bad magic bytes")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    Version(u32),
    #[error("corrupt header: {0}")]
    CorruptHeader(String),
    #[error("truncated payload: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("{actual} trailing bytes after the payload of {expected} bytes")]
    Trailing { expected: usize, actual: usize },
    #[error("field {name} is not Hermitian-symmetric (defect {defect:e})")]
    NotHermitian { name: String, defect: f64 },
    #[error("field {name} is a {found} field, expected {expected}")]
    Kind { name: String, found: &'static str, expected: &'static str },
    #[error("field {0} is missing")]
    Missing(String),
    #[error("snapshot fields must share one grid")]
    GridMismatch,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Named spectral fields on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub grid: Grid,
    pub fields: Vec<(String, AnyField)>,
}

impl Snapshot {
    pub fn new(grid: Grid) -> Self {
        Self { grid, fields: Vec::new() }
    }

    pub fn with_vector(mut self, name: &str, v: VectorField) -> Self {
        self.fields.push((name.to_string(), AnyField::Vector(v)));
        self
    }

    pub fn with_scalar(mut self, name: &str, s: ScalarField) -> Self {
        self.fields.push((name.to_string(), AnyField::Scalar(s)));
        self
    }

    fn find(&self, name: &str) -> Option<&AnyField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// `None` when absent, an error when present with the wrong arity.
    pub fn vector(&self, name: &str) -> Option<Result<VectorField, SnapshotError>> {
        self.find(name).map(|f| match f {
            AnyField::Vector(v) => Ok(v.clone()),
            other => Err(SnapshotError::Kind { name: name.into(), found: other.kind(), expected: "vector" }),
        })
    }

    pub fn scalar(&self, name: &str) -> Option<Result<ScalarField, SnapshotError>> {
        self.find(name).map(|f| match f {
            AnyField::Scalar(s) => Ok(s.clone()),
            other => Err(SnapshotError::Kind { name: name.into(), found: other.kind(), expected: "scalar" }),
        })
    }

    pub fn require_vector(&self, name: &str) -> Result<VectorField, SnapshotError> {
        self.vector(name).unwrap_or_else(|| Err(SnapshotError::Missing(name.into())))
    }
}

/// Serializes to the little-endian layout: header, then per field and
/// component the `(re, im)` pairs in row-major `(k1, k2, k3)` storage order.
pub fn encode(snap: &Snapshot) -> Result<Vec<u8>, SnapshotError> {
    let n = snap.grid.n();
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&snap.grid.half_period().to_le_bytes());
    out.extend_from_slice(&(snap.fields.len() as u32).to_le_bytes());
    for (name, field) in &snap.fields {
        if field.grid() != snap.grid {
            return Err(SnapshotError::GridMismatch);
        }
        let bytes = name.as_bytes();
        let len = u16::try_from(bytes.len()).map_err(|_| SnapshotError::CorruptHeader(format!("field name too long: {name}")))?;
        out.extend_from_slice(&len.to_le_bytes());
        out.extend_from_slice(bytes);
        out.push(field.components().len() as u8);
    }
    for (_, field) in &snap.fields {
        for comp in field.components() {
            for z in comp {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
    }
    Ok(out)
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize, what: &str) -> Result<&'a [u8], SnapshotError> {
        if self.bytes.len() - self.pos < k {
            return Err(SnapshotError::CorruptHeader(format!("ends inside {what}")));
        }
        let s = &self.bytes[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32, SnapshotError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }
}

pub fn decode(bytes: &[u8]) -> Result<Snapshot, SnapshotError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let mut r = Reader { bytes, pos: 4 };
    let version = r.u32("version")?;
    if version != VERSION {
        return Err(SnapshotError::Version(version));
    }
    let n = r.u32("grid size")? as usize;
    let l = f64::from_le_bytes(r.take(8, "box size")?.try_into().unwrap());
    let grid = Grid::new(n, l).map_err(|e| SnapshotError::CorruptHeader(e.to_string()))?;
    let count = r.u32("field count")? as usize;
    let mut heads = Vec::new();
    for _ in 0..count {
        let len = u16::from_le_bytes(r.take(2, "field name length")?.try_into().unwrap()) as usize;
        let name = std::str::from_utf8(r.take(len, "field name")?)
            .map_err(|_| SnapshotError::CorruptHeader("field name is not UTF-8".into()))?
            .to_string();
        let comps = r.take(1, "component count")?[0] as usize;
        if comps != 1 && comps != 3 {
            return Err(SnapshotError::CorruptHeader(format!("field {name} has {comps} components")));
        }
        heads.push((name, comps));
    }
    let per = grid.len() * 16;
    let total: usize = heads.iter().map(|(_, c)| c * per).sum();
    let actual = bytes.len() - r.pos;
    if actual < total {
        return Err(SnapshotError::Truncated { expected: total, actual });
    }
    if actual > total {
        return Err(SnapshotError::Trailing { expected: total, actual });
    }
    let mut read_comp = || {
        let chunk = &bytes[r.pos..r.pos + per];
        r.pos += per;
        chunk
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(f64::from_le_bytes(c[..8].try_into().unwrap()), f64::from_le_bytes(c[8..].try_into().unwrap()))
            })
            .collect::<Vec<_>>()
    };
    let mut fields = Vec::with_capacity(count);
    for (name, comps) in heads {
        let field = if comps == 1 {
            AnyField::Scalar(ScalarField::from_coefficients(grid, read_comp()).expect("length checked"))
        } else {
            let c = [read_comp(), read_comp(), read_comp()];
            AnyField::Vector(VectorField::from_coefficients(grid, c).expect("length checked"))
        };
        let defect = match &field {
            AnyField::Scalar(s) => s.hermitian_defect(),
            AnyField::Vector(v) => v.hermitian_defect(),
        };
        if !(defect <= HERMITIAN_TOL) {
            return Err(SnapshotError::NotHermitian { name, defect });
        }
        fields.push((name, field));
    }
    Ok(Snapshot { grid, fields })
}

pub fn write_snapshot(path: impl AsRef<Path>, snap: &Snapshot) -> Result<(), SnapshotError> {
    fs::write(path, encode(snap)?)?;
    Ok(())
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<Snapshot, SnapshotError> {
    decode(&fs::read(path)?)
}

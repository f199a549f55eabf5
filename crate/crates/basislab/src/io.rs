//! File formats: rational literals are "p/q" strings (lowest terms, positive
//! denominator, never decimals) in every format this crate reads or writes.

use crate::bases::Basis;
use crate::matrix::RatMatrix;
use crate::scalar::{format_rat, parse_rat, Rat};
use crate::spaces::NormSpec;
use serde::{Deserialize, Serialize};

/// serde adapter serializing `Rat` as a "p/q" string.
pub mod rat_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

pub const BASIS_FORMAT_VERSION: u32 = 1;

/// On-disk basis description.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisFile {
    pub format_version: u32,
    pub dim: usize,
    pub space: NormSpec,
    /// Row-major matrix entries, columns are the basis vectors.
    pub vectors: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    FormatVersion(u32),
    #[error("basis file declares dim {dim} but carries {got} vector entries")]
    VectorCount { dim: usize, got: usize },
    #[error("bad rational in vectors[{index}] (row {row}, column {col}): {source}")]
    BadEntry {
        index: usize,
        row: usize,
        col: usize,
        source: crate::scalar::RatParseError,
    },
    #[error("invalid basis: {0}")]
    Basis(#[from] crate::bases::BasisError),
}

impl BasisFile {
    pub fn from_basis(basis: &Basis) -> Self {
        let m = basis.vectors();
        let mut vectors = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                vectors.push(format_rat(&m[(i, j)]));
            }
        }
        BasisFile {
            format_version: BASIS_FORMAT_VERSION,
            dim: basis.dim(),
            space: basis.space().clone(),
            vectors,
        }
    }

    pub fn into_basis(self) -> Result<Basis, IoError> {
        if self.format_version != BASIS_FORMAT_VERSION {
            return Err(IoError::FormatVersion(self.format_version));
        }
        let n = self.dim;
        if self.vectors.len() != n * n {
            return Err(IoError::VectorCount {
                dim: n,
                got: self.vectors.len(),
            });
        }
        let mut data = Vec::with_capacity(n * n);
        for (index, tok) in self.vectors.iter().enumerate() {
            let r = parse_rat(tok).map_err(|source| IoError::BadEntry {
                index,
                row: index / n,
                col: index % n,
                source,
            })?;
            data.push(r);
        }
        Ok(Basis::new(self.space, RatMatrix::new(n, n, data))?)
    }

    pub fn write(&self, path: &std::path::Path) -> Result<(), IoError> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json + "\n")?;
        Ok(())
    }

    pub fn read(path: &std::path::Path) -> Result<Self, IoError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub fn load_basis(path: &std::path::Path) -> Result<Basis, IoError> {
    BasisFile::read(path)?.into_basis()
}

pub fn save_basis(basis: &Basis, path: &std::path::Path) -> Result<(), IoError> {
    BasisFile::from_basis(basis).write(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::standard;

    #[test]
    fn basis_file_roundtrip_is_bit_exact() {
        let b = standard::summing_basis(NormSpec::Sup, 4);
        let dir = std::env::temp_dir().join("basislab_io_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("summing4.json");
        save_basis(&b, &path).unwrap();
        let text1 = std::fs::read_to_string(&path).unwrap();
        let b2 = load_basis(&path).unwrap();
        save_basis(&b2, &path).unwrap();
        let text2 = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text1, text2);
        assert_eq!(b.vectors(), b2.vectors());
    }

    #[test]
    fn bad_rational_names_the_cell() {
        let file = BasisFile {
            format_version: 1,
            dim: 2,
            space: NormSpec::Sup,
            vectors: vec!["1/1".into(), "0/1".into(), "1/0".into(), "1/1".into()],
        };
        let err = file.into_basis().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 1"), "{msg}");
        assert!(msg.contains("column 0"), "{msg}");
        assert!(msg.contains("1/0"), "{msg}");
    }

    #[test]
    fn normspec_json_has_variant_discriminator() {
        let spec = NormSpec::direct_sum_max(NormSpec::Sup, 2, NormSpec::l1(), 2);
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"variant\":\"direct_sum_max\""), "{json}");
        let back: NormSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}

//! Binary parameter checkpoints.
//!
//! Layout (little-endian): the 8-byte magic `MNATCKPT`, a `u32` format
//! version, a `u32` tensor count, then per tensor a `u32` name length, the
//! UTF-8 name, `u32` rows, `u32` cols and `rows * cols` `f64` values in
//! row-major order. The agent configuration is written next to it as JSON.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{AgentConfig, AgentKind};
use crate::linear::LinearModel;
use crate::scalar::Scalar;

pub const MAGIC: &[u8; 8] = b"MNATCKPT";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not a checkpoint file")]
    BadMagic,
    #[error("unsupported checkpoint version {0}")]
    Version(u32),
    #[error("malformed checkpoint: {0}")]
    Malformed(String),
    #[error("checkpoint has no tensor `{0}`")]
    Missing(String),
    #[error("tensor `{name}` is {found:?}, model expects {expected:?}")]
    Shape {
        name: String,
        found: (usize, usize),
        expected: (usize, usize),
    },
    #[error("sidecar: {0}")]
    Sidecar(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Tensor {
    /// One row per output unit, bias in the last column.
    pub fn from_model<F: Scalar>(name: &str, model: &LinearModel<F>) -> Self {
        Self {
            name: name.to_string(),
            rows: model.n_out(),
            cols: model.stride(),
            data: model.params().iter().map(|p| p.to_f64_lossy()).collect(),
        }
    }

    pub fn copy_into<F: Scalar>(&self, model: &mut LinearModel<F>) -> Result<(), CheckpointError> {
        let expected = (model.n_out(), model.stride());
        if (self.rows, self.cols) != expected {
            return Err(CheckpointError::Shape {
                name: self.name.clone(),
                found: (self.rows, self.cols),
                expected,
            });
        }
        for (p, &x) in model.params_mut().iter_mut().zip(&self.data) {
            *p = F::lit(x);
        }
        Ok(())
    }

    pub fn find<'a>(tensors: &'a [Tensor], name: &str) -> Result<&'a Tensor, CheckpointError> {
        tensors
            .iter()
            .find(|t| t.name == name)
            .ok_or_else(|| CheckpointError::Missing(name.to_string()))
    }
}

pub fn write_tensors<W: Write>(mut w: W, tensors: &[Tensor]) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    w.write_all(&(tensors.len() as u32).to_le_bytes())?;
    for t in tensors {
        w.write_all(&(t.name.len() as u32).to_le_bytes())?;
        w.write_all(t.name.as_bytes())?;
        w.write_all(&(t.rows as u32).to_le_bytes())?;
        w.write_all(&(t.cols as u32).to_le_bytes())?;
        for x in &t.data {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.flush()
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, CheckpointError> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

pub fn read_tensors<R: Read>(mut r: R) -> Result<Vec<Tensor>, CheckpointError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = read_u32(&mut r)?;
    if version != CHECKPOINT_VERSION {
        return Err(CheckpointError::Version(version));
    }
    let count = read_u32(&mut r)?;
    let mut out = Vec::with_capacity(count.min(64) as usize);
    for _ in 0..count {
        let name_len = read_u32(&mut r)? as usize;
        let mut name = vec![0u8; name_len];
        r.read_exact(&mut name)?;
        let name = String::from_utf8(name)
            .map_err(|_| CheckpointError::Malformed("tensor name is not UTF-8".into()))?;
        let rows = read_u32(&mut r)? as usize;
        let cols = read_u32(&mut r)? as usize;
        let mut data = Vec::with_capacity(rows * cols);
        let mut buf = [0u8; 8];
        for _ in 0..rows * cols {
            r.read_exact(&mut buf)?;
            data.push(f64::from_le_bytes(buf));
        }
        out.push(Tensor {
            name,
            rows,
            cols,
            data,
        });
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(CheckpointError::Malformed("trailing bytes".into()));
    }
    Ok(out)
}

/// JSON written next to the binary file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub agent: AgentKind,
    pub n_features: usize,
    pub config: AgentConfig,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

pub fn save(path: &Path, sidecar: &Sidecar, tensors: &[Tensor]) -> Result<(), CheckpointError> {
    write_tensors(io::BufWriter::new(fs::File::create(path)?), tensors)?;
    fs::write(sidecar_path(path), serde_json::to_string_pretty(sidecar)?)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<(Sidecar, Vec<Tensor>), CheckpointError> {
    let tensors = read_tensors(io::BufReader::new(fs::File::open(path)?))?;
    let sidecar = serde_json::from_str(&fs::read_to_string(sidecar_path(path))?)?;
    Ok((sidecar, tensors))
}

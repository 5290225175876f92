//! Flat binary serialization for report fixtures: a small header
//! (kind byte, `n_a`, `n_b` as little-endian u32) followed by the complex
//! entries as little-endian `f64` (re, im) pairs. Density matrices are
//! written row-major.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::{DensityMatrix, PureState, StateError};

const KIND_PURE: u8 = 0;
const KIND_DENSITY: u8 = 1;

fn push_header(out: &mut Vec<u8>, kind: u8, n_a: usize, n_b: usize) {
    out.push(kind);
    out.extend_from_slice(&(n_a as u32).to_le_bytes());
    out.extend_from_slice(&(n_b as u32).to_le_bytes());
}

fn push_complex(out: &mut Vec<u8>, z: Complex64) {
    out.extend_from_slice(&z.re.to_le_bytes());
    out.extend_from_slice(&z.im.to_le_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(StateError::Serialization("unexpected end of input".into()));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn complex(&mut self) -> Result<Complex64> {
        let re = f64::from_le_bytes(self.take(8)?.try_into().unwrap());
        let im = f64::from_le_bytes(self.take(8)?.try_into().unwrap());
        Ok(Complex64::new(re, im))
    }
}

pub fn pure_to_bytes(state: &PureState) -> Vec<u8> {
    let mut out = Vec::with_capacity(9 + 16 * state.amplitudes().len());
    push_header(&mut out, KIND_PURE, state.n_a(), state.n_b());
    for &z in state.amplitudes() {
        push_complex(&mut out, z);
    }
    out
}

pub fn pure_from_bytes(bytes: &[u8]) -> Result<PureState> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.u8()? != KIND_PURE {
        return Err(StateError::Serialization("not a pure-state record".into()));
    }
    let n_a = r.u32()? as usize;
    let n_b = r.u32()? as usize;
    let len = 1usize << (n_a + n_b);
    let mut amps = Vec::with_capacity(len);
    for _ in 0..len {
        amps.push(r.complex()?);
    }
    PureState::from_amplitudes(n_a, n_b, amps)
}

pub fn density_to_bytes(rho: &DensityMatrix) -> Vec<u8> {
    let dim = rho.dim();
    let mut out = Vec::with_capacity(9 + 16 * dim * dim);
    push_header(&mut out, KIND_DENSITY, rho.n_a(), rho.n_b());
    for i in 0..dim {
        for j in 0..dim {
            push_complex(&mut out, rho.matrix()[(i, j)]);
        }
    }
    out
}

pub fn density_from_bytes(bytes: &[u8]) -> Result<DensityMatrix> {
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.u8()? != KIND_DENSITY {
        return Err(StateError::Serialization("not a density record".into()));
    }
    let n_a = r.u32()? as usize;
    let n_b = r.u32()? as usize;
    let dim = 1usize << (n_a + n_b);
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = r.complex()?;
        }
    }
    DensityMatrix::new(n_a, n_b, m)
}

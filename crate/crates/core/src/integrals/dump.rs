//! Little-endian binary dumps of integral data.
//!
//! Layout: `n_ao: u32`, `count: u64`, then `count` quadruples as 4×u16
//! (packed ERI only), then `count` values. Value width (4 or 8 bytes) is
//! implied by the remaining length. For an [`IntegralSet`] the values are
//! S, T and V in row-major order, so `count = 3·n_ao²`.

use std::io::{self, Read, Write};

use nalgebra::DMatrix;

use crate::real::Real;

use super::eri::PackedERI;
use super::one_electron::IntegralSet;

fn write_value<T: Real, W: Write>(w: &mut W, v: T) -> io::Result<()> {
    if std::mem::size_of::<T>() == 4 {
        w.write_all(&(v.f64() as f32).to_le_bytes())
    } else {
        w.write_all(&v.f64().to_le_bytes())
    }
}

fn write_header<W: Write>(w: &mut W, n_ao: usize, count: usize) -> io::Result<()> {
    w.write_all(&(n_ao as u32).to_le_bytes())?;
    w.write_all(&(count as u64).to_le_bytes())
}

pub fn write_packed<T: Real, W: Write>(w: &mut W, eri: &PackedERI<T>) -> io::Result<()> {
    write_header(w, eri.n_ao, eri.len())?;
    for q in &eri.quads {
        for x in q {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    for &v in &eri.values {
        write_value(w, v)?;
    }
    Ok(())
}

pub fn write_integral_set<T: Real, W: Write>(w: &mut W, set: &IntegralSet<T>) -> io::Result<()> {
    let n = set.n_ao;
    write_header(w, n, 3 * n * n)?;
    for m in [&set.s, &set.t, &set.v] {
        for r in 0..n {
            for c in 0..n {
                write_value(w, m[(r, c)])?;
            }
        }
    }
    Ok(())
}

fn bad(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

fn read_header(buf: &[u8]) -> io::Result<(usize, usize)> {
    if buf.len() < 12 {
        return Err(bad("truncated header"));
    }
    let n = u32::from_le_bytes(buf[0..4].try_into().unwrap()) as usize;
    let count = u64::from_le_bytes(buf[4..12].try_into().unwrap()) as usize;
    Ok((n, count))
}

fn read_values<T: Real>(buf: &[u8], count: usize) -> io::Result<Vec<T>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    match buf.len() / count {
        4 if buf.len() == 4 * count => Ok(buf
            .chunks_exact(4)
            .map(|c| T::of(f32::from_le_bytes(c.try_into().unwrap()) as f64))
            .collect()),
        8 if buf.len() == 8 * count => Ok(buf
            .chunks_exact(8)
            .map(|c| T::of(f64::from_le_bytes(c.try_into().unwrap())))
            .collect()),
        _ => Err(bad("value section has unexpected length")),
    }
}

pub fn read_packed<T: Real, R: Read>(r: &mut R) -> io::Result<PackedERI<T>> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    let (n_ao, count) = read_header(&buf)?;
    let qend = 12 + 8 * count;
    if buf.len() < qend {
        return Err(bad("truncated index section"));
    }
    let quads = buf[12..qend]
        .chunks_exact(8)
        .map(|c| {
            let mut q = [0u16; 4];
            for (k, x) in q.iter_mut().enumerate() {
                *x = u16::from_le_bytes([c[2 * k], c[2 * k + 1]]);
            }
            q
        })
        .collect();
    let values = read_values(&buf[qend..], count)?;
    Ok(PackedERI { quads, values, n_ao })
}

pub fn read_integral_set<T: Real, R: Read>(r: &mut R) -> io::Result<IntegralSet<T>> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    let (n, count) = read_header(&buf)?;
    if count != 3 * n * n {
        return Err(bad("count does not match 3·n_ao²"));
    }
    let vals: Vec<T> = read_values(&buf[12..], count)?;
    let m = |k: usize| DMatrix::from_row_slice(n, n, &vals[k * n * n..(k + 1) * n * n]);
    Ok(IntegralSet {
        s: m(0),
        t: m(1),
        v: m(2),
        n_ao: n,
    })
}

use std::io::{Read, Write};

use super::{field::FieldMeta, Axis, Field, Grid};
use crate::error::{Error, Result};

/// File signature of the binary field format.
///
/// Layout (little endian): magic, `u32` version, `u32` dimension (1 or 2),
/// `u64` snapshot count, `u64` nx, `u64` n_eta, `f64` x_lo, x_hi, t_end, dt,
/// `u64` save_every, `f64` ε (NaN when absent), two length-prefixed UTF-8
/// labels (profile, reaction), the snapshot times, then the values.
pub const FIELD_MAGIC: [u8; 8] = *b"NFFIELD\0";
const VERSION: u32 = 1;

fn io_err(e: std::io::Error) -> Error {
    Error::Data(format!("field i/o failed: {e}"))
}

pub fn write_binary<W: Write>(field: &Field, mut out: W) -> Result<()> {
    let mut buf = Vec::with_capacity(96 + 8 * (field.times.len() + field.values.len()));
    buf.extend_from_slice(&FIELD_MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(if field.is_2d() { 2u32 } else { 1u32 }).to_le_bytes());
    for n in [field.times.len(), field.grid.x.n, field.n_eta()] {
        buf.extend_from_slice(&(n as u64).to_le_bytes());
    }
    let g = field.grid;
    for v in [g.x.lo, g.x.hi, g.t_end, g.dt] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf.extend_from_slice(&(g.save_every as u64).to_le_bytes());
    buf.extend_from_slice(&field.meta.epsilon.unwrap_or(f64::NAN).to_le_bytes());
    for s in [&field.meta.profile, &field.meta.reaction] {
        buf.extend_from_slice(&(s.len() as u32).to_le_bytes());
        buf.extend_from_slice(s.as_bytes());
    }
    for v in field.times.iter().chain(&field.values) {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf).map_err(io_err)
}

struct Cursor<'a> {
    bytes: &'a [u8],
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < n {
            return Err(Error::Data("truncated field file".into()));
        }
        let (a, b) = self.bytes.split_at(n);
        self.bytes = b;
        Ok(a)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<usize> {
        usize::try_from(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
            .map_err(|_| Error::Data("size field overflows".into()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        String::from_utf8(self.take(n)?.to_vec()).map_err(|_| Error::Data("label is not UTF-8".into()))
    }

    fn floats(&mut self, n: usize) -> Result<Vec<f64>> {
        let bytes = self.take(n.checked_mul(8).ok_or_else(|| Error::Data("size overflow".into()))?)?;
        Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }
}

pub fn read_binary<R: Read>(mut input: R) -> Result<Field> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(io_err)?;
    let mut c = Cursor { bytes: &bytes };
    if c.take(8)? != FIELD_MAGIC {
        return Err(Error::Data("not a field file (bad magic)".into()));
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(Error::Data(format!("unsupported field version {version}")));
    }
    let dim = c.u32()?;
    let (nt, nx, ne) = (c.u64()?, c.u64()?, c.u64()?);
    let (lo, hi, t_end, dt) = (c.f64()?, c.f64()?, c.f64()?, c.f64()?);
    let save_every = c.u64()?;
    let eps = c.f64()?;
    let profile = c.string()?;
    let reaction = c.string()?;
    let times = c.floats(nt)?;
    let values = c.floats(nt * nx * ne)?;
    if !c.bytes.is_empty() {
        return Err(Error::Data("trailing bytes after field data".into()));
    }
    Ok(Field {
        grid: Grid {
            x: Axis::new(lo, hi, nx)?,
            n_eta: (dim == 2).then_some(ne),
            t_end,
            dt,
            save_every,
        },
        times,
        values,
        meta: FieldMeta {
            profile,
            epsilon: (!eps.is_nan()).then_some(eps),
            reaction,
        },
    })
}

/// Long-format CSV: `t,x,u` for 1-D fields and `t,x,eta,u` for strips.
pub fn write_csv<W: Write>(field: &Field, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let csv_err = |e: csv::Error| Error::Data(format!("csv write failed: {e}"));
    let ne = field.n_eta();
    if field.is_2d() {
        w.write_record(["t", "x", "eta", "u"]).map_err(csv_err)?;
    } else {
        w.write_record(["t", "x", "u"]).map_err(csv_err)?;
    }
    let ax = field.grid.x;
    for (i, t) in field.times.iter().enumerate() {
        for j in 0..ax.n {
            let x = ax.node(j).to_string();
            for k in 0..ne {
                let u = field.at(i, j, k).to_string();
                if field.is_2d() {
                    let eta = (k as f64 / (ne - 1) as f64).to_string();
                    w.write_record([t.to_string(), x.clone(), eta, u]).map_err(csv_err)?;
                } else {
                    w.write_record([t.to_string(), x.clone(), u]).map_err(csv_err)?;
                }
            }
        }
    }
    w.flush().map_err(|e| Error::Data(format!("csv flush failed: {e}")))
}

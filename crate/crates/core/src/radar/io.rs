//! Binary and CSV dataset containers.
//!
//! Binary layout, little-endian throughout:
//!
//! ```text
//! "GSRD" | version u16 | n_freq u32 | count u64 | f_start f64 | f_stop f64
//! count x ( label u8 | seed u64 | snr_db f64 (NaN = noiseless) | n_freq x (re f64, im f64) )
//! ```

use std::io::{self, Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex;
use thiserror::Error;

use super::{AScan, AScanMeta, RadarParams, SurfaceClass};
use crate::Scalar;

pub const MAGIC: [u8; 4] = *b"GSRD";
pub const VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 4 + 8 + 8 + 8;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("corrupt dataset: bad magic {found:?} at byte 0")]
    BadMagic { found: [u8; 4] },
    #[error("corrupt dataset: unsupported version {0} at byte 4")]
    UnsupportedVersion(u16),
    #[error("corrupt dataset: truncated at byte {offset} while reading {what} ({len} bytes available)")]
    Truncated { offset: usize, what: &'static str, len: usize },
    #[error("corrupt dataset: invalid label {label} at byte {offset}")]
    InvalidLabel { offset: usize, label: u8 },
    #[error("corrupt dataset: {trailing} trailing bytes after the last record at byte {offset}")]
    TrailingBytes { offset: usize, trailing: usize },
    #[error("invalid dataset: {0}")]
    Invalid(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Writes the binary container.
pub fn write_dataset<T: Scalar, W: Write>(mut w: W, params: &RadarParams<T>, scans: &[AScan<T>]) -> Result<(), DatasetError> {
    if let Some(bad) = scans.iter().find(|s| s.samples.len() != params.n_freq) {
        return Err(DatasetError::Invalid(format!("A-scan with {} samples in a {}-frequency dataset", bad.samples.len(), params.n_freq)));
    }
    let n_freq = u32::try_from(params.n_freq).map_err(|_| DatasetError::Invalid("n_freq exceeds u32".into()))?;
    w.write_all(&MAGIC)?;
    w.write_u16::<LittleEndian>(VERSION)?;
    w.write_u32::<LittleEndian>(n_freq)?;
    w.write_u64::<LittleEndian>(scans.len() as u64)?;
    w.write_f64::<LittleEndian>(params.f_start.to_f64_lossy())?;
    w.write_f64::<LittleEndian>(params.f_stop.to_f64_lossy())?;
    for scan in scans {
        w.write_u8(scan.label.id() as u8)?;
        w.write_u64::<LittleEndian>(scan.meta.seed)?;
        w.write_f64::<LittleEndian>(scan.meta.snr_db.unwrap_or(f64::NAN))?;
        for s in &scan.samples {
            w.write_f64::<LittleEndian>(s.re.to_f64_lossy())?;
            w.write_f64::<LittleEndian>(s.im.to_f64_lossy())?;
        }
    }
    w.flush()?;
    Ok(())
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8], DatasetError> {
        if self.buf.len() - self.pos < n {
            return Err(DatasetError::Truncated { offset: self.pos, what, len: self.buf.len() });
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u8(&mut self, what: &'static str) -> Result<u8, DatasetError> {
        Ok(self.take(1, what)?[0])
    }

    fn u16(&mut self, what: &'static str) -> Result<u16, DatasetError> {
        Ok(self.take(2, what)?.read_u16::<LittleEndian>()?)
    }

    fn u32(&mut self, what: &'static str) -> Result<u32, DatasetError> {
        Ok(self.take(4, what)?.read_u32::<LittleEndian>()?)
    }

    fn u64(&mut self, what: &'static str) -> Result<u64, DatasetError> {
        Ok(self.take(8, what)?.read_u64::<LittleEndian>()?)
    }

    fn f64(&mut self, what: &'static str) -> Result<f64, DatasetError> {
        Ok(self.take(8, what)?.read_f64::<LittleEndian>()?)
    }
}

/// Parses the binary container. Truncation and corruption errors carry the
/// byte offset where parsing stopped.
pub fn read_dataset<T: Scalar, R: Read>(mut r: R) -> Result<(RadarParams<T>, Vec<AScan<T>>), DatasetError> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    let mut c = Cursor { buf: &buf, pos: 0 };
    let magic = c.take(4, "magic")?;
    if magic != MAGIC {
        return Err(DatasetError::BadMagic { found: magic.try_into().expect("4 bytes") });
    }
    let version = c.u16("version")?;
    if version != VERSION {
        return Err(DatasetError::UnsupportedVersion(version));
    }
    let n_freq = c.u32("n_freq")? as usize;
    let count = c.u64("record count")?;
    let f_start = c.f64("f_start")?;
    let f_stop = c.f64("f_stop")?;
    debug_assert_eq!(c.pos, HEADER_LEN);
    let params = RadarParams::new(T::lit(f_start), T::lit(f_stop), n_freq).map_err(|e| DatasetError::Invalid(e.to_string()))?;

    let record_len = 1 + 8 + 8 + 16 * n_freq;
    let available = (buf.len() - HEADER_LEN) / record_len;
    let mut scans = Vec::with_capacity((count as usize).min(available + 1));
    for _ in 0..count {
        let offset = c.pos;
        let label = c.u8("label")?;
        let label = SurfaceClass::from_id(label as usize).ok_or(DatasetError::InvalidLabel { offset, label })?;
        let seed = c.u64("seed")?;
        let snr = c.f64("snr")?;
        let mut samples = Vec::with_capacity(n_freq);
        for _ in 0..n_freq {
            let re = c.f64("sample")?;
            let im = c.f64("sample")?;
            samples.push(Complex::new(T::lit(re), T::lit(im)));
        }
        scans.push(AScan { samples, label, meta: AScanMeta { seed, snr_db: (!snr.is_nan()).then_some(snr) } });
    }
    if c.pos != buf.len() {
        return Err(DatasetError::TrailingBytes { offset: c.pos, trailing: buf.len() - c.pos });
    }
    Ok((params, scans))
}

/// CSV export: `label, re_0, im_0, ..., re_{N-1}, im_{N-1}` with numeric labels.
pub fn write_csv<T: Scalar, W: Write>(w: W, scans: &[AScan<T>]) -> Result<(), DatasetError> {
    let n = scans.first().map_or(0, |s| s.samples.len());
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["label".to_string()];
    for i in 0..n {
        header.push(format!("re_{i}"));
        header.push(format!("im_{i}"));
    }
    out.write_record(&header)?;
    for s in scans {
        if s.samples.len() != n {
            return Err(DatasetError::Invalid("A-scans of different lengths".into()));
        }
        let mut row = vec![s.label.id().to_string()];
        for v in &s.samples {
            row.push(v.re.to_f64_lossy().to_string());
            row.push(v.im.to_f64_lossy().to_string());
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a CSV export back. Seeds and SNR are not part of the CSV and come back as zero / `None`.
pub fn read_csv<T: Scalar, R: Read>(r: R) -> Result<Vec<AScan<T>>, DatasetError> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut scans = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64, DatasetError> {
            rec[i].trim().parse::<f64>().map_err(|e| DatasetError::Invalid(format!("row {row}, column {i}: {e}")))
        };
        if rec.len() % 2 != 1 {
            return Err(DatasetError::Invalid(format!("row {row}: expected label plus re/im pairs")));
        }
        let label = rec[0].trim().parse::<usize>().ok().and_then(SurfaceClass::from_id);
        let label = label.ok_or_else(|| DatasetError::Invalid(format!("row {row}: bad label {:?}", &rec[0])))?;
        let samples = (0..rec.len() / 2)
            .map(|k| Ok(Complex::new(T::lit(parse(1 + 2 * k)?), T::lit(parse(2 + 2 * k)?))))
            .collect::<Result<Vec<_>, DatasetError>>()?;
        scans.push(AScan { samples, label, meta: AScanMeta { seed: 0, snr_db: None } });
    }
    Ok(scans)
}

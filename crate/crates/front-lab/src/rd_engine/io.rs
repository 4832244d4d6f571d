//! Snapshot persistence: a self-describing little-endian binary format
//! (magic `FLAB1`) plus CSV export for 1D fields.

use super::ScalarField;
use crate::{FrontLabError, Result};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 5] = b"FLAB1";

/// Layout: magic, dim(u8), nx(u64), ny(u64), h(f64), origin0(f64),
/// origin1(f64), t(f64), then nx·ny node values (f64), all little-endian.
pub fn write_snapshot(u: &ScalarField, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&[u.dim as u8])?;
    w.write_all(&(u.nx as u64).to_le_bytes())?;
    w.write_all(&(u.ny as u64).to_le_bytes())?;
    for v in [u.h, u.origin[0], u.origin[1], u.t] {
        w.write_all(&v.to_le_bytes())?;
    }
    for v in &u.values {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<ScalarField> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(FrontLabError::grid(format!("{}: not a FLAB1 snapshot", path.display())));
    }
    let mut b1 = [0u8; 1];
    r.read_exact(&mut b1)?;
    let dim = b1[0] as usize;
    if dim != 1 && dim != 2 {
        return Err(FrontLabError::grid(format!("bad dimension {dim}")));
    }
    let mut b8 = [0u8; 8];
    let mut read_u64 = |r: &mut BufReader<File>| -> Result<u64> {
        r.read_exact(&mut b8)?;
        Ok(u64::from_le_bytes(b8))
    };
    let nx = read_u64(&mut r)? as usize;
    let ny = read_u64(&mut r)? as usize;
    let mut b8 = [0u8; 8];
    let mut read_f64 = |r: &mut BufReader<File>| -> Result<f64> {
        r.read_exact(&mut b8)?;
        Ok(f64::from_le_bytes(b8))
    };
    let h = read_f64(&mut r)?;
    let o0 = read_f64(&mut r)?;
    let o1 = read_f64(&mut r)?;
    let t = read_f64(&mut r)?;
    let mut values = vec![0.0; nx * ny];
    for v in values.iter_mut() {
        *v = read_f64(&mut r)?;
    }
    Ok(ScalarField { dim, nx, ny, h, origin: [o0, o1], t, values })
}

/// CSV export for 1D fields: `x,u` rows with a `# t=<time>` header.
pub fn write_csv_1d(u: &ScalarField, path: &Path) -> Result<()> {
    if u.dim != 1 {
        return Err(FrontLabError::grid("CSV export is for 1D fields"));
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# t={}", u.t)?;
    writeln!(w, "x,u")?;
    for i in 0..u.nx {
        writeln!(w, "{},{}", u.x1(i), u.values[i])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_round_trip_bit_exact() {
        let mut u = ScalarField::new_2d(7, 5, 0.25, [-1.0, 2.0]);
        u.t = 3.5;
        for (k, v) in u.values.iter_mut().enumerate() {
            *v = (k as f64 * 0.37).sin();
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("snap.flab");
        write_snapshot(&u, &path).unwrap();
        let v = read_snapshot(&path).unwrap();
        assert_eq!(u.nx, v.nx);
        assert_eq!(u.ny, v.ny);
        assert_eq!(u.t.to_bits(), v.t.to_bits());
        for (a, b) in u.values.iter().zip(&v.values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn rejects_foreign_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.bin");
        std::fs::write(&path, b"NOTAFLAB").unwrap();
        assert!(read_snapshot(&path).is_err());
    }
}

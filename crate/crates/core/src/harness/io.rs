use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Grid;

const HEADER: &str = "nx,ny,dx,dy,x0,y0";

/// Field read back from a CSV export.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldCsv {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub origin: (f64, f64),
    pub phi: Vec<f64>,
}

fn fmt_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else {
        // shortest representation that parses back to the same bits
        format!("{v}")
    }
}

/// Writes the field as CSV.
///
/// Layout: the header line `nx,ny,dx,dy,x0,y0`, one line with those values,
/// then `nx * ny` lines `i,j,phi` in row-major order. `+inf` is written as
/// `inf`.
pub fn write_field_csv<W: Write>(grid: &Grid, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    let (x0, y0) = grid.origin();
    writeln!(w, "{HEADER}")?;
    writeln!(
        w,
        "{},{},{},{},{},{}",
        grid.nx(),
        grid.ny(),
        fmt_value(grid.dx()),
        fmt_value(grid.dy()),
        fmt_value(x0),
        fmt_value(y0)
    )?;
    for (c, &v) in grid.phi().iter().enumerate() {
        let cell = grid.cell(c);
        writeln!(w, "{},{},{}", cell.i, cell.j, fmt_value(v))?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_field_csv(grid: &Grid, path: impl AsRef<Path>) -> Result<()> {
    write_field_csv(grid, File::create(path)?)
}

pub fn import_field_csv(path: impl AsRef<Path>) -> Result<FieldCsv> {
    let path = path.as_ref();
    read_field_csv(BufReader::new(File::open(path)?), path)
}

/// Parses the format written by [`write_field_csv`]; `path` is only used in errors.
pub fn read_field_csv<R: BufRead>(input: R, path: &Path) -> Result<FieldCsv> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = input.lines().enumerate().map(|(n, l)| (n + 1, l));
    let mut next_line = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, l)) => Ok((n, l?)),
            None => Err(err(0, format!("unexpected end of file, missing {what}"))),
        }
    };

    let (n, header) = next_line("header")?;
    if header.trim() != HEADER {
        return Err(err(n, format!("expected header {HEADER:?}, found {header:?}")));
    }
    let (n, dims) = next_line("dimensions")?;
    let fields: Vec<&str> = dims.trim().split(',').collect();
    if fields.len() != 6 {
        return Err(err(n, format!("expected 6 dimension fields, found {}", fields.len())));
    }
    let int = |k: usize| fields[k].parse::<usize>().map_err(|e| err(n, format!("field {k}: {e}")));
    let float = |k: usize| fields[k].parse::<f64>().map_err(|e| err(n, format!("field {k}: {e}")));
    let (nx, ny) = (int(0)?, int(1)?);
    let (dx, dy, x0, y0) = (float(2)?, float(3)?, float(4)?, float(5)?);

    let total = nx * ny;
    let mut phi = Vec::with_capacity(total);
    for (n, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.trim().split(',');
        let (i, j, v) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(i), Some(j), Some(v), None) => (i, j, v),
            _ => return Err(err(n, format!("expected i,j,phi, found {line:?}"))),
        };
        let (i, j) = match (i.parse::<usize>(), j.parse::<usize>()) {
            (Ok(i), Ok(j)) => (i, j),
            _ => return Err(err(n, format!("invalid cell index in {line:?}"))),
        };
        let k = phi.len();
        if k >= total || (i, j) != (k % nx, k / nx) {
            return Err(err(n, format!("cell ({i},{j}) out of row-major order at record {k}")));
        }
        let v: f64 = v.parse().map_err(|e| err(n, format!("invalid phi {v:?}: {e}")))?;
        phi.push(v);
    }
    if phi.len() != total {
        return Err(err(0, format!("expected {total} records, found {}", phi.len())));
    }
    Ok(FieldCsv {
        nx,
        ny,
        dx,
        dy,
        origin: (x0, y0),
        phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpeedField;

    fn to_string(grid: &Grid) -> String {
        let mut buf = Vec::new();
        write_field_csv(grid, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn two_by_one() {
        let mut g = Grid::new(2, 1, 1.0, 1.0, (0.0, 0.0), SpeedField::Uniform(1.0)).unwrap();
        g.set_phi(&[0.0, 1.0]);
        let text = to_string(&g);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["nx,ny,dx,dy,x0,y0", "2,1,1,1,0,0", "0,0,0", "1,0,1"]);
    }

    #[test]
    fn blocked_cell_is_inf() {
        let g = Grid::new(2, 1, 1.0, 1.0, (0.0, 0.0), SpeedField::Cells(vec![1.0, 0.0])).unwrap();
        let text = to_string(&g);
        assert_eq!(text.lines().last(), Some("1,0,inf"));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let (mut g, bc) = super::super::make_example(3, 24).unwrap();
        crate::fmm::solve_fmm(&mut g, &bc).unwrap();
        let text = to_string(&g);
        let back = read_field_csv(text.as_bytes(), Path::new("mem.csv")).unwrap();
        assert_eq!((back.nx, back.ny), (24, 24));
        assert_eq!(back.dx.to_bits(), g.dx().to_bits());
        assert_eq!(back.origin, g.origin());
        assert_eq!(back.phi.len(), g.len());
        for (a, b) in back.phi.iter().zip(g.phi()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn malformed_input() {
        let p = Path::new("bad.csv");
        assert!(read_field_csv("x,y\n".as_bytes(), p).is_err());
        assert!(read_field_csv("nx,ny,dx,dy,x0,y0\n2,1,1,1,0,0\n0,0,0\n".as_bytes(), p).is_err());
        assert!(read_field_csv("nx,ny,dx,dy,x0,y0\n2,1,1,1,0,0\n1,0,0\n0,0,1\n".as_bytes(), p).is_err());
        let e = read_field_csv("nx,ny,dx,dy,x0,y0\n1,1,1,1,0,0\n0,0,abc\n".as_bytes(), p).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
    }
}

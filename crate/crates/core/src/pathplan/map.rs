use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::SpeedField;

/// Occupancy map; cell `(i, j)` is at row-major index `j * width + i`, with
/// `j = 0` the first row of the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrierMap {
    width: usize,
    height: usize,
    blocked: Vec<bool>,
}

impl BarrierMap {
    pub fn new(width: usize, height: usize, blocked: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(format!(
                "map dimensions must be positive, got {width}x{height}"
            )));
        }
        if blocked.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "map has {} cells, expected {width}x{height}",
                blocked.len()
            )));
        }
        Ok(BarrierMap {
            width,
            height,
            blocked,
        })
    }

    pub fn free(width: usize, height: usize) -> Result<Self> {
        BarrierMap::new(width, height, vec![false; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_blocked(&self, i: usize, j: usize) -> bool {
        self.blocked[j * self.width + i]
    }

    pub fn set_blocked(&mut self, i: usize, j: usize, blocked: bool) {
        self.blocked[j * self.width + i] = blocked;
    }

    pub fn blocked_cells(&self) -> &[bool] {
        &self.blocked
    }

    /// Plain PGM (P2): free cells 255, blocked cells 0.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.blocked.chunks(self.width) {
            let line: Vec<&str> = row.iter().map(|&b| if b { "0" } else { "255" }).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// CSV of 0/1 rows, 1 = blocked.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.blocked.chunks(self.width) {
            let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}

/// Speed 0 on blocked cells, 1 elsewhere.
pub fn barrier_speed(map: &BarrierMap) -> SpeedField {
    SpeedField::Cells(
        map.blocked
            .iter()
            .map(|&b| if b { 0.0 } else { 1.0 })
            .collect(),
    )
}

/// Loads a `.pgm` (plain P2) or `.csv` map, chosen by file extension.
pub fn load_barrier_map(path: impl AsRef<Path>) -> Result<BarrierMap> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("pgm") => parse_pgm(&text, path),
        Some("csv") => parse_csv(&text, path),
        _ => Err(Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: "unknown map extension, expected .pgm or .csv".into(),
        }),
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Parses plain PGM. A pixel value of 0 is blocked.
pub fn parse_pgm(text: &str, path: &Path) -> Result<BarrierMap> {
    // (line number, token), comments stripped
    let mut tokens = text.lines().enumerate().flat_map(|(n, line)| {
        let body = line.split('#').next().unwrap_or("");
        body.split_whitespace().map(move |t| (n + 1, t))
    });
    let last_line = text.lines().count().max(1);

    match tokens.next() {
        Some((_, "P2")) => {}
        Some((n, magic)) => return Err(parse_err(path, n, format!("expected P2 magic, found {magic:?}"))),
        None => return Err(parse_err(path, 1, "empty file")),
    }
    let mut header = |what: &str| -> Result<usize> {
        let (n, t) = tokens
            .next()
            .ok_or_else(|| parse_err(path, last_line, format!("truncated header, missing {what}")))?;
        t.parse::<usize>()
            .map_err(|_| parse_err(path, n, format!("invalid {what} {t:?}")))
    };
    let width = header("width")?;
    let height = header("height")?;
    let maxval = header("maxval")?;
    if width == 0 || height == 0 {
        return Err(parse_err(path, 1, format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 {
        return Err(parse_err(path, 1, "maxval must be positive"));
    }
    let expected = width * height;
    let mut blocked = Vec::with_capacity(expected);
    for (n, t) in tokens.by_ref() {
        let v: usize = t
            .parse()
            .map_err(|_| parse_err(path, n, format!("invalid pixel {t:?} at offset {}", blocked.len())))?;
        if v > maxval {
            return Err(parse_err(path, n, format!("pixel {v} exceeds maxval {maxval}")));
        }
        if blocked.len() == expected {
            return Err(parse_err(path, n, format!("more than {expected} pixels")));
        }
        blocked.push(v == 0);
    }
    if blocked.len() != expected {
        return Err(parse_err(
            path,
            last_line,
            format!("truncated: {} of {expected} pixels", blocked.len()),
        ));
    }
    BarrierMap::new(width, height, blocked)
}

/// Parses rows of comma-separated 0/1 flags, 1 = blocked.
pub fn parse_csv(text: &str, path: &Path) -> Result<BarrierMap> {
    let mut width = None;
    let mut blocked = Vec::new();
    let mut height = 0;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(k, t)| match t.trim() {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(parse_err(path, n + 1, format!("invalid flag {other:?} in column {k}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(parse_err(
                    path,
                    n + 1,
                    format!("row has {} columns, expected {w}", row.len()),
                ))
            }
            Some(_) => {}
        }
        blocked.extend(row);
        height += 1;
    }
    let width = width.ok_or_else(|| parse_err(path, 1, "empty map"))?;
    BarrierMap::new(width, height, blocked)
}

/// Bundled `n x n` test map: two walls, two cells thick, forming an S-shaped
/// corridor. The left wall leaves a gap at the top, the right wall a gap at
/// the bottom.
pub fn synthetic_map(n: usize) -> Result<BarrierMap> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!("synthetic map needs n >= 16, got {n}")));
    }
    let mut map = BarrierMap::free(n, n)?;
    let left = n / 3;
    let right = 2 * n / 3;
    for j in 0..(3 * n / 4) {
        map.set_blocked(left, j, true);
        map.set_blocked(left + 1, j, true);
    }
    for j in (n / 4)..n {
        map.set_blocked(right, j, true);
        map.set_blocked(right + 1, j, true);
    }
    Ok(map)
}

/// Source cell of the synthetic map, right of both walls.
pub fn synthetic_source(n: usize) -> (usize, usize) {
    (n - 1 - n / 10, n / 2)
}

/// Goal cell of the synthetic map, left of both walls near the top.
pub fn synthetic_goal(n: usize) -> (usize, usize) {
    (n / 10, n - 1 - n / 10)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("test.pgm")
    }

    #[test]
    fn pgm_two_by_two() {
        let m = parse_pgm("P2\n2 2\n255\n255 0 255 255\n", p()).unwrap();
        assert_eq!(m.blocked_cells(), &[false, true, false, false]);
        assert!(m.is_blocked(1, 0));
    }

    #[test]
    fn pgm_comments_and_errors() {
        let m = parse_pgm("P2\n# made by hand\n2 1 # dims\n15\n0 15\n", p()).unwrap();
        assert_eq!(m.blocked_cells(), &[true, false]);

        let err = parse_pgm("P2\n2 2\n255\n255 0 255\n", p()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = parse_pgm("P5\n2 2\n255\n", p()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_pgm("P2\n2", p()).unwrap_err();
        assert!(err.to_string().contains("height"));
        let err = parse_pgm("P2\n1 1\n255\nx\n", p()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        assert!(parse_pgm("P2\n1 1\n255\n0 0\n", p()).is_err());
    }

    #[test]
    fn csv_rows() {
        let m = parse_csv("0,1\n0,0\n", Path::new("m.csv")).unwrap();
        assert_eq!((m.width(), m.height()), (2, 2));
        assert!(m.is_blocked(1, 0));
        assert_eq!(m.blocked_cells().iter().filter(|b| **b).count(), 1);
        assert!(parse_csv("0,1\n0\n", Path::new("m.csv")).is_err());
        assert!(parse_csv("0,2\n", Path::new("m.csv")).is_err());
        assert!(parse_csv("", Path::new("m.csv")).is_err());
    }

    #[test]
    fn speed_from_map() {
        let m = parse_csv("0,1\n0,0\n", Path::new("m.csv")).unwrap();
        match barrier_speed(&m) {
            SpeedField::Cells(v) => assert_eq!(v, vec![1.0, 0.0, 1.0, 1.0]),
            other => panic!("unexpected {other:?}"),
        }
        let free = BarrierMap::free(3, 2).unwrap();
        match barrier_speed(&free) {
            SpeedField::Cells(v) => assert!(v.iter().all(|f| *f == 1.0)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn text_round_trips() {
        let m = synthetic_map(32).unwrap();
        assert_eq!(parse_pgm(&m.to_pgm(), p()).unwrap(), m);
        assert_eq!(parse_csv(&m.to_csv(), Path::new("m.csv")).unwrap(), m);
    }

    #[test]
    fn synthetic_endpoints_are_free() {
        for n in [16, 64, 128] {
            let m = synthetic_map(n).unwrap();
            let (si, sj) = synthetic_source(n);
            let (gi, gj) = synthetic_goal(n);
            assert!(!m.is_blocked(si, sj));
            assert!(!m.is_blocked(gi, gj));
        }
    }
}

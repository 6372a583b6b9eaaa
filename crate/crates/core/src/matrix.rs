//! Rectangular byte matrices, the matrix file format, and occurrence records.
//!
//! A matrix file is a header line `"R C"` followed by exactly `R` lines of
//! exactly `C` bytes, each terminated by `\n`. Any byte other than `\n` and
//! `\r` may appear in a row.

use std::fmt;

use crate::error::{Error, Result};

/// A dense row-major byte matrix. Used both for dictionary patterns and for
/// texts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    height: usize,
    width: usize,
    cells: Vec<u8>,
}

/// The text searched by the dictionary.
pub type TextGrid = Matrix;

impl Matrix {
    /// Builds a matrix from rows, checking that the rows are non-empty and
    /// rectangular.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let height = rows.len();
        if height == 0 {
            return Err(Error::ZeroDimension);
        }
        let width = rows[0].as_ref().len();
        if width == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut cells = Vec::with_capacity(height * width);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != width {
                return Err(Error::RowLength {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
            if let Some(&b) = row.iter().find(|&&b| b == b'\n' || b == b'\r') {
                return Err(Error::InvalidByte(b));
            }
            cells.extend_from_slice(row);
        }
        Ok(Matrix {
            height,
            width,
            cells,
        })
    }

    /// Builds a matrix from a row-major cell buffer.
    pub fn from_cells(height: usize, width: usize, cells: Vec<u8>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::ZeroDimension);
        }
        if cells.len() != height * width {
            return Err(Error::RowCount {
                expected: height,
                found: cells.len() / width,
            });
        }
        if let Some(&b) = cells.iter().find(|&&b| b == b'\n' || b == b'\r') {
            return Err(Error::InvalidByte(b));
        }
        Ok(Matrix {
            height,
            width,
            cells,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn area(&self) -> usize {
        self.height * self.width
    }

    /// Row `i`, 0-based.
    pub fn row(&self, i: usize) -> &[u8] {
        &self.cells[i * self.width..(i + 1) * self.width]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.cells.chunks_exact(self.width)
    }

    /// Cell at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.cells[r * self.width + c]
    }

    pub fn set(&mut self, r: usize, c: usize, b: u8) {
        self.cells[r * self.width + c] = b;
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Copies `src` into this matrix with its top-left corner at 0-based
    /// `(r, c)`. Cells falling outside are clipped.
    pub fn paste(&mut self, src: &Matrix, r: usize, c: usize) {
        for i in 0..src.height {
            if r + i >= self.height {
                break;
            }
            for k in 0..src.width {
                if c + k >= self.width {
                    break;
                }
                self.set(r + i, c + k, src.get(i, k));
            }
        }
    }

    /// The `h x w` sub-matrix at 0-based `(r, c)`.
    pub fn sub(&self, r: usize, c: usize, h: usize, w: usize) -> Matrix {
        let mut cells = Vec::with_capacity(h * w);
        for i in r..r + h {
            cells.extend_from_slice(&self.row(i)[c..c + w]);
        }
        Matrix {
            height: h,
            width: w,
            cells,
        }
    }

    /// A borrowed rectangular window, clipped to the matrix.
    pub fn view(&self, r: usize, c: usize, h: usize, w: usize) -> BlockView<'_> {
        let h = h.min(self.height.saturating_sub(r));
        let w = w.min(self.width.saturating_sub(c));
        BlockView {
            grid: self,
            top: r,
            left: c,
            height: h,
            width: w,
        }
    }

    /// Parses the matrix file format.
    pub fn parse(bytes: &[u8]) -> Result<Matrix> {
        let header_end = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::MalformedHeader("missing newline".into()))?;
        let header = std::str::from_utf8(&bytes[..header_end])
            .map_err(|_| Error::MalformedHeader("header is not ASCII".into()))?;
        let (r, c) = header
            .split_once(' ')
            .ok_or_else(|| Error::MalformedHeader(format!("expected \"R C\", got {header:?}")))?;
        let parse_dim = |s: &str| -> Result<usize> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::MalformedHeader(format!("bad dimension {s:?}")));
            }
            s.parse()
                .map_err(|_| Error::MalformedHeader(format!("bad dimension {s:?}")))
        };
        let (height, width) = (parse_dim(r)?, parse_dim(c)?);
        if height == 0 || width == 0 {
            return Err(Error::ZeroDimension);
        }

        let mut cells = Vec::with_capacity(height * width);
        let mut rest = &bytes[header_end + 1..];
        for i in 0..height {
            let Some(end) = rest.iter().position(|&b| b == b'\n') else {
                if rest.is_empty() {
                    return Err(Error::RowCount {
                        expected: height,
                        found: i,
                    });
                }
                // unterminated final line
                return Err(Error::RowLength {
                    row: i + 1,
                    expected: width,
                    found: rest.len(),
                });
            };
            let line = &rest[..end];
            if line.len() != width {
                return Err(Error::RowLength {
                    row: i + 1,
                    expected: width,
                    found: line.len(),
                });
            }
            if let Some(&b) = line.iter().find(|&&b| b == b'\r') {
                return Err(Error::InvalidByte(b));
            }
            cells.extend_from_slice(line);
            rest = &rest[end + 1..];
        }
        if !rest.is_empty() {
            return Err(Error::RowCount {
                expected: height,
                found: height
                    + rest
                        .split(|&b| b == b'\n')
                        .filter(|l| !l.is_empty())
                        .count(),
            });
        }
        Ok(Matrix {
            height,
            width,
            cells,
        })
    }

    /// Serializes to the matrix file format.
    pub fn to_file_bytes(&self) -> Vec<u8> {
        let mut out = format!("{} {}\n", self.height, self.width).into_bytes();
        out.reserve(self.height * (self.width + 1));
        for row in self.rows() {
            out.extend_from_slice(row);
            out.push(b'\n');
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self
            .rows()
            .map(|r| String::from_utf8_lossy(r).into_owned())
            .collect();
        f.debug_struct("Matrix")
            .field("height", &self.height)
            .field("width", &self.width)
            .field("rows", &rows)
            .finish()
    }
}

/// A rectangular window of a text: the unit processed by the blocked
/// engines.
#[derive(Clone, Copy)]
pub struct BlockView<'a> {
    grid: &'a Matrix,
    top: usize,
    left: usize,
    height: usize,
    width: usize,
}

impl<'a> BlockView<'a> {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// 0-based offset of the block in the text.
    pub fn origin(&self) -> (usize, usize) {
        (self.top, self.left)
    }

    /// Block row `i` (0-based), restricted to the block's columns.
    pub fn row(&self, i: usize) -> &'a [u8] {
        &self.grid.row(self.top + i)[self.left..self.left + self.width]
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.grid.get(self.top + r, self.left + c)
    }
}

/// Stable pattern identifier assigned by the dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternId(pub u64);

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A dictionary pattern: an `m_i x m̄` matrix under a stable id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatrix {
    pub id: PatternId,
    pub matrix: Matrix,
}

impl PatternMatrix {
    pub fn new(id: PatternId, matrix: Matrix) -> Self {
        PatternMatrix { id, matrix }
    }
}

/// One occurrence of a pattern in a text. Coordinates are 1-based and name
/// the top-left cell of the occurrence.
///
/// Ordered by `(row, col, pattern)`, the order used for output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub pattern: PatternId,
    pub row: usize,
    pub col: usize,
}

impl Occurrence {
    pub fn new(pattern: PatternId, row: usize, col: usize) -> Self {
        Occurrence { pattern, row, col }
    }
}

impl Ord for Occurrence {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.row, self.col, self.pattern).cmp(&(other.row, other.col, other.pattern))
    }
}

impl PartialOrd for Occurrence {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Formats occurrences as `MATCH <id> <row> <col>` lines sorted by
/// `(row, col, id)`.
pub fn format_occurrences<'a, I>(occs: I) -> Vec<u8>
where
    I: IntoIterator<Item = &'a Occurrence>,
{
    let mut sorted: Vec<Occurrence> = occs.into_iter().copied().collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = Vec::with_capacity(sorted.len() * 16);
    for o in sorted {
        out.extend_from_slice(format!("MATCH {} {} {}\n", o.pattern, o.row, o.col).as_bytes());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let m = Matrix::parse(b"2 3\nabc\ndef\n").unwrap();
        assert_eq!((m.height(), m.width()), (2, 3));
        assert_eq!(m.row(0), b"abc");
        assert_eq!(m.row(1), b"def");

        let m = Matrix::parse(b"1 1\nx\n").unwrap();
        assert_eq!(m.row(0), b"x");

        assert!(matches!(
            Matrix::parse(b"2 3\nabc\nde\n"),
            Err(Error::RowLength {
                row: 2,
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Matrix::parse(b"2 3"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            Matrix::parse(b"2x3\n"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            Matrix::parse(b"2  3\nabc\n"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            Matrix::parse(b"-1 3\n"),
            Err(Error::MalformedHeader(_))
        ));
        assert_eq!(Matrix::parse(b"0 3\n"), Err(Error::ZeroDimension));
        assert_eq!(Matrix::parse(b"1 0\n\n"), Err(Error::ZeroDimension));
        assert!(matches!(
            Matrix::parse(b"2 3\nabc\n"),
            Err(Error::RowCount {
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            Matrix::parse(b"1 3\nabc\ndef\n"),
            Err(Error::RowCount { .. })
        ));
        assert!(matches!(
            Matrix::parse(b"1 3\nabc"),
            Err(Error::RowLength { .. })
        ));
        assert_eq!(
            Matrix::parse(b"1 3\na\rc\n"),
            Err(Error::InvalidByte(b'\r'))
        );
    }

    #[test]
    fn full_byte_range_rows() {
        let row: Vec<u8> = (0u8..=255).filter(|&b| b != b'\n' && b != b'\r').collect();
        let m = Matrix::from_rows(std::slice::from_ref(&row)).unwrap();
        assert_eq!(Matrix::parse(&m.to_file_bytes()).unwrap(), m);
    }

    #[test]
    fn format_examples() {
        let a = Occurrence::new(PatternId(1), 1, 1);
        let b = Occurrence::new(PatternId(2), 1, 3);
        assert_eq!(format_occurrences(&[a]), b"MATCH 1 1 1\n");
        assert_eq!(format_occurrences(&[]), b"");
        assert_eq!(format_occurrences(&[b, a]), b"MATCH 1 1 1\nMATCH 2 1 3\n");
    }

    #[test]
    fn views_clip() {
        let m = Matrix::from_rows(&["abcd", "efgh", "ijkl"]).unwrap();
        let v = m.view(1, 2, 5, 5);
        assert_eq!((v.height(), v.width()), (2, 2));
        assert_eq!(v.row(0), b"gh");
        assert_eq!(v.row(1), b"kl");
        assert_eq!(v.get(1, 0), b'k');
    }
}

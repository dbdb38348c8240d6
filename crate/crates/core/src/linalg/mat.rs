use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always stored in lowest terms with a positive
/// denominator; no operation anywhere in the crate rounds.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fraction n/d. Panics on d = 0.
pub fn ratq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p/q" or "p".
pub fn rat_parse(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|e| Error::InvalidDocument(format!("bad rational {s:?}: {e}")))
}

/// Formats as "p/q", or "p" when the denominator is 1.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dense row-major matrix over the rationals. Zero-row and zero-column
/// matrices are legal values; the zero-dimensional space needs them.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Mat { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds from integer rows; rows may be empty only if `cols` tells the width.
    pub fn from_int_rows(cols: usize, rows: &[&[i64]]) -> Self {
        for r in rows {
            assert_eq!(r.len(), cols);
        }
        Mat::from_fn(rows.len(), cols, |i, j| rat(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn neg(&self) -> Mat {
        Mat::new(
            self.rows,
            self.cols,
            self.data.iter().map(|x| -x.clone()).collect(),
        )
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::new(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        Mat::new(
            self.rows,
            self.cols,
            self.data.iter().map(|x| x * s).collect(),
        )
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat::new(self.rows + other.rows, self.cols, data)
    }

    pub fn block_diag(&self, other: &Mat) -> Mat {
        Mat::from_fn(self.rows + other.rows, self.cols + other.cols, |r, c| {
            if r < self.rows && c < self.cols {
                self[(r, c)].clone()
            } else if r >= self.rows && c >= self.cols {
                other[(r - self.rows, c - self.cols)].clone()
            } else {
                Rat::zero()
            }
        })
    }

    /// Keeps the columns in `range`, in order.
    pub fn select_cols(&self, range: std::ops::Range<usize>) -> Mat {
        assert!(range.end <= self.cols);
        Mat::from_fn(self.rows, range.len(), |r, c| {
            self[(r, range.start + c)].clone()
        })
    }

    /// Keeps the rows in `range`, in order.
    pub fn select_rows(&self, range: std::ops::Range<usize>) -> Mat {
        assert!(range.end <= self.rows);
        Mat::from_fn(range.len(), self.cols, |r, c| {
            self[(range.start + r, c)].clone()
        })
    }

    /// Places this matrix into the column window starting at `offset` of a
    /// wider zero matrix with `total` columns.
    pub fn embed_cols(&self, total: usize, offset: usize) -> Mat {
        assert!(offset + self.cols <= total);
        Mat::from_fn(self.rows, total, |r, c| {
            if c >= offset && c < offset + self.cols {
                self[(r, c - offset)].clone()
            } else {
                Rat::zero()
            }
        })
    }

    /// Unique reduced row-echelon form with zero rows deleted and pivot
    /// columns ascending. Idempotent; the canonical representative of the
    /// row space.
    pub fn rref_canonical(&self) -> Mat {
        self.rref_with_pivots().0
    }

    pub fn rref_with_pivots(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let v = &m[(r, c)] - &factor * &m[(row, c)];
                    m[(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        // drop zero rows
        let kept: Vec<usize> = (0..m.rows)
            .filter(|&r| m.row(r).iter().any(|x| !x.is_zero()))
            .collect();
        let out = Mat::from_fn(kept.len(), m.cols, |r, c| m[(kept[r], c)].clone());
        (out, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref_canonical().rows()
    }

    /// Inverse of a square matrix, or None when singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(r.select_cols(n..2 * n))
    }

    /// Solves self * X = rhs exactly; None when inconsistent. When the
    /// system is underdetermined the free variables are set to zero.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref_with_pivots();
        // any pivot in the rhs block means inconsistency
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zero(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(p, j)] = r[(i, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// Monic minimal polynomial, ascending coefficients (constant first).
    /// Found as the first linear dependency among vectorized powers.
    pub fn minimal_polynomial(&self) -> Vec<Rat> {
        assert!(self.is_square());
        let n = self.rows();
        if n == 0 {
            return vec![Rat::one()];
        }
        let entries = n * n;
        let vec_of = |m: &Mat| Mat::new(1, entries, m.data.clone());
        let mut powers = vec![Mat::identity(n)];
        let mut stacked = vec_of(&powers[0]);
        loop {
            let next = powers.last().unwrap().mul(self);
            let d = powers.len();
            let candidate = stacked.vstack(&vec_of(&next));
            if candidate.rank() < d + 1 {
                // next = sum c_i * powers[i]
                let coeffs = stacked
                    .transpose()
                    .solve(&vec_of(&next).transpose())
                    .expect("dependency detected");
                let mut poly = vec![Rat::zero(); d + 1];
                for (i, c) in poly.iter_mut().take(d).enumerate() {
                    *c = -coeffs[(i, 0)].clone();
                }
                poly[d] = Rat::one();
                return poly;
            }
            stacked = candidate;
            powers.push(next);
        }
    }

    /// Largest absolute row sum; bounds the modulus of every eigenvalue.
    pub fn row_sum_norm(&self) -> Rat {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.abs())
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .max()
            .unwrap_or_else(Rat::zero)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(rat_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

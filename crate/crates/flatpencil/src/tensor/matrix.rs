use std::collections::HashMap;
use std::fmt;

use crate::expr::{ExprError, RationalExpr};

/// Dense matrix of rational expressions, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RationalExpr>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<RationalExpr>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> RationalExpr) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<RationalExpr>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![RationalExpr::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i == j { RationalExpr::one() } else { RationalExpr::zero() })
    }

    pub fn diagonal(d: &[RationalExpr]) -> Matrix {
        Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i].clone() } else { RationalExpr::zero() })
    }

    /// Ones on the anti-diagonal `i + j = n - 1`.
    pub fn antidiagonal(n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i + j + 1 == n { RationalExpr::one() } else { RationalExpr::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalExpr {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalExpr) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[RationalExpr] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[RationalExpr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(&RationalExpr) -> RationalExpr) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&RationalExpr) -> Result<RationalExpr, ExprError>) -> Result<Matrix, ExprError> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, s: &RationalExpr) -> Matrix {
        self.map(|a| a.mul(s))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not chain");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k).mul(other.get(k, j))).sum()
        })
    }

    pub fn mul_vec(&self, v: &[RationalExpr]) -> Vec<RationalExpr> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|k| self.get(i, k).mul(&v[k])).sum()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// First asymmetric pair, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && self.asymmetry().is_none()
    }

    /// Determinant by expansion over column subsets, which is exact and
    /// cheap for the small dimensions used here.
    pub fn det(&self) -> RationalExpr {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let cols: Vec<usize> = (0..self.cols).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.minor(&rows, &cols)
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> RationalExpr {
        let k = rows.len();
        if k == 0 {
            return RationalExpr::one();
        }
        // memo[mask] = det of the last |mask| rows on the columns in mask
        let mut memo: HashMap<u32, RationalExpr> = HashMap::new();
        memo.insert(0, RationalExpr::one());
        let full: u32 = (1u32 << k) - 1;
        for size in 1..=k {
            let r = rows[k - size];
            for mask in 0..=full {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let mut acc = RationalExpr::zero();
                let mut sign_pos = 0usize;
                for (b, &c) in cols.iter().enumerate() {
                    if mask & (1 << b) == 0 {
                        continue;
                    }
                    let a = self.get(r, c);
                    if !a.is_zero() {
                        let rest = &memo[&(mask & !(1 << b))];
                        if !rest.is_zero() {
                            let t = a.mul(rest);
                            acc = if sign_pos % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
                        }
                    }
                    sign_pos += 1;
                }
                memo.insert(mask, acc);
            }
        }
        memo.remove(&full).expect("full minor computed")
    }

    pub fn adjugate(&self) -> Matrix {
        assert!(self.is_square());
        let n = self.rows;
        if n == 1 {
            return Matrix::identity(1);
        }
        Matrix::from_fn(n, n, |i, j| {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let m = self.minor(&rows, &cols);
            if (i + j) % 2 == 0 {
                m
            } else {
                m.neg()
            }
        })
    }

    /// Inverse together with the determinant.
    pub fn inverse_with_det(&self) -> Result<(Matrix, RationalExpr), ExprError> {
        let det = self.det();
        if det.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        let inv_det = det.recip()?;
        Ok((self.adjugate().scale(&inv_det), det))
    }

    pub fn inverse(&self) -> Result<Matrix, ExprError> {
        Ok(self.inverse_with_det()?.0)
    }

    pub fn diff(&self, var: &str) -> Matrix {
        self.map(|a| a.diff(var))
    }

    pub fn substitute(&self, bindings: &std::collections::BTreeMap<String, RationalExpr>) -> Result<Matrix, ExprError> {
        self.try_map(|a| a.substitute(bindings))
    }

    pub fn trace(&self) -> RationalExpr {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

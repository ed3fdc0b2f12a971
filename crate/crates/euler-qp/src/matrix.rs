//! Dense matrices over exact rationals.
//!
//! Inverses and determinants go through fraction-free (Bareiss) elimination
//! on the denominator-cleared integer matrix, so no floating point and no
//! intermediate rounding anywhere.

use crate::algebra::Rat;
use crate::error::Error;
use num::{BigInt, Integer, One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: Vec<Vec<i64>>) -> Self {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(crate::algebra::int).collect())
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.rows)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &prod;
                }
            }
        }
        out
    }

    /// Kronecker product; used by the oracle's tensor zero tests.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zero(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for u in 0..other.rows {
                    for v in 0..other.cols {
                        out[(i * other.rows + u, j * other.cols + v)] = a * &other[(u, v)];
                    }
                }
            }
        }
        out
    }

    /// Clear denominators: returns (integer matrix N, L) with self = N / L.
    fn cleared(&self) -> (Vec<BigInt>, BigInt) {
        let mut l = BigInt::one();
        for x in &self.data {
            l = l.lcm(x.denom());
        }
        let n = self
            .data
            .iter()
            .map(|x| x.numer() * (&l / x.denom()))
            .collect();
        (n, l)
    }

    /// Exact determinant via Bareiss fraction-free elimination.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        let (mut m, l) = self.cleared();
        let at = |r: usize, c: usize| r * n + c;
        let mut prev = BigInt::one();
        let mut sign = 1i64;
        for k in 0..n - 1 {
            if m[at(k, k)].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[at(r, k)].is_zero()) else {
                    return Rat::zero();
                };
                for c in 0..n {
                    m.swap(at(k, c), at(r, c));
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[at(k, k)] * &m[at(i, j)] - &m[at(i, k)] * &m[at(k, j)];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[at(i, j)] = q;
                }
                m[at(i, k)] = BigInt::zero();
            }
            prev = m[at(k, k)].clone();
        }
        let det_n = m[at(n - 1, n - 1)].clone() * BigInt::from(sign);
        Rat::new(det_n, num::pow::pow(l, n))
    }

    /// Exact inverse via fraction-free Gauss-Jordan elimination on the
    /// denominator-cleared augmented matrix.
    pub fn inverse(&self) -> Result<Matrix, Error> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(Matrix::zero(0, 0));
        }
        let (cleared, l) = self.cleared();
        let w = 2 * n;
        let at = |r: usize, c: usize| r * w + c;
        let mut m = vec![BigInt::zero(); n * w];
        for i in 0..n {
            for j in 0..n {
                m[at(i, j)] = cleared[i * n + j].clone();
            }
            m[at(i, n + i)] = BigInt::one();
        }
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[at(k, k)].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[at(r, k)].is_zero()) else {
                    return Err(Error::SingularMatrix);
                };
                for c in 0..w {
                    m.swap(at(k, c), at(r, c));
                }
            }
            let pivot = m[at(k, k)].clone();
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = m[at(i, k)].clone();
                for j in 0..w {
                    let num = &pivot * &m[at(i, j)] - &factor * &m[at(k, j)];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m[at(i, j)] = q;
                }
            }
            prev = pivot;
        }
        // Left block is now diagonal; N^{-1}[i][j] = R[i][j] / d_i and
        // self^{-1} = L * N^{-1}.
        let mut out = Matrix::zero(n, n);
        for i in 0..n {
            let d = m[at(i, i)].clone();
            if d.is_zero() {
                return Err(Error::SingularMatrix);
            }
            for j in 0..n {
                out[(i, j)] = Rat::new(m[at(i, n + j)].clone() * &l, d.clone());
            }
        }
        Ok(out)
    }

    pub fn display(&self) -> String {
        (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
                format!("[{}]", row.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }
}

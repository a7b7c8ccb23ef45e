//! Dense exact matrices over the rationals.

use num_traits::{One, Signed, Zero};

use crate::Rat;

/// Row-major matrix of exact rational scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
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
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        for row in &rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
        }
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
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

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut m = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += prod;
                }
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols && *self == self.transpose().neg()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut m = Matrix::zero(rows.len(), cols.len());
        for (ii, i) in rows.clone().enumerate() {
            for (jj, j) in cols.clone().enumerate() {
                m[(ii, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Exact determinant by fraction-free-ish Gaussian elimination over Q.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        let mut m = self.clone();
        let mut det = Rat::one();
        for k in 0..n {
            let pivot = (k..n).find(|&r| !m[(r, k)].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => return Rat::zero(),
            };
            if pivot != k {
                for j in 0..n {
                    let a = m[(k, j)].clone();
                    let b = m[(pivot, j)].clone();
                    m[(k, j)] = b;
                    m[(pivot, j)] = a;
                }
                det = -det;
            }
            let pk = m[(k, k)].clone();
            det *= pk.clone();
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &pk;
                for j in k..n {
                    let sub = &f * &m[(k, j)];
                    m[(i, j)] -= sub;
                }
            }
        }
        det
    }

    /// Row-reduce in place; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let pivot = (r..self.rows).find(|&i| !self[(i, c)].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => continue,
            };
            if pivot != r {
                for j in 0..self.cols {
                    let a = self[(r, j)].clone();
                    let b = self[(pivot, j)].clone();
                    self[(r, j)] = b;
                    self[(pivot, j)] = a;
                }
            }
            let pk = self[(r, c)].clone();
            for j in 0..self.cols {
                self[(r, j)] = &self[(r, j)] / &pk;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in 0..self.cols {
                        let sub = &f * &self[(r, j)];
                        self[(i, j)] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the left null space `{x : x·M = 0}`, rows of the returned
    /// matrix.
    pub fn left_nullspace(&self) -> Matrix {
        let nt = self.transpose().nullspace();
        nt.transpose()
    }

    /// Basis of the (right) null space `{v : M·v = 0}`, columns of the
    /// returned matrix.
    pub fn nullspace(&self) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zero(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis[(fc, k)] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                basis[(pc, k)] = -m[(r, fc)].clone();
            }
        }
        basis
    }

    /// Solve `x · A = b` for a row vector `x`; `None` when inconsistent.
    pub fn solve_left(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        // x·A = b  ⟺  Aᵀ·xᵀ = bᵀ
        self.transpose().solve(b)
    }

    /// Solve `A · x = b`; `None` when inconsistent. Returns one solution.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Max |entry| as f64, for numeric tolerances.
    pub fn max_abs_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.data
            .iter()
            .map(|x| x.abs().to_f64().unwrap_or(0.0))
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    #[test]
    fn det_and_rank() {
        let m = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.det(), int(-2));
        assert_eq!(m.rank(), 2);
        let s = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det(), int(0));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn nullspaces() {
        let m = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        let ns = m.nullspace();
        assert_eq!(ns.cols, 1);
        let v = vec![ns[(0, 0)].clone(), ns[(1, 0)].clone()];
        // M v = 0
        assert!((&m[(0, 0)] * &v[0] + &m[(0, 1)] * &v[1]).is_zero());
        let ln = m.left_nullspace();
        assert_eq!(ln.rows, 1);
    }

    #[test]
    fn solve_left_row_system() {
        let a = Matrix::from_i64(&[&[1, 0], &[1, 1]]);
        let x = a.solve_left(&[int(3), int(2)]).unwrap();
        // x·A = (x0 + x1, x1) = (3, 2)
        assert_eq!(x[1], int(2));
        assert_eq!(&x[0] + &x[1], int(3));
    }

    #[test]
    fn symmetry_predicates() {
        let j = Matrix::from_i64(&[&[0, 1], &[-1, 0]]);
        assert!(j.is_skew());
        assert!(!j.is_symmetric());
        let s = Matrix::from_i64(&[&[2, 1], &[1, 0]]);
        assert!(s.is_symmetric());
    }
}

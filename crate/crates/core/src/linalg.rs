//! Dense matrices over `F` with exact Gaussian elimination.

use crate::error::{Error, Result};
use crate::field::{Felem, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Felem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Felem::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Felem::ONE } else { Felem::ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Felem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Felem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Felem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Felem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Felem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Felem)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(move |(k, &v)| (k / self.cols.max(1), k % self.cols.max(1), v))
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Felem::ZERO, |acc, l| {
                ctx.add(acc, ctx.mul(self.get(i, l), other.get(l, j)))
            })
        }))
    }

    pub fn mul_vec(&self, ctx: &FieldCtx, v: &[Felem]) -> Result<Vec<Felem>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| ctx.dot(self.row(i), v)).collect())
    }

    /// Reduces `self` to row-echelon form in place and returns the rank.
    ///
    /// Pivots are the first nonzero entry scanning columns left to right.
    fn echelon(&mut self, ctx: &FieldCtx, mut aug: Option<&mut Vec<Felem>>) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if pivot != rank {
                for j in 0..self.cols {
                    self.data.swap(pivot * self.cols + j, rank * self.cols + j);
                }
                if let Some(b) = aug.as_deref_mut() {
                    b.swap(pivot, rank);
                }
            }
            let inv = ctx.inv(self.get(rank, col)).expect("pivot is nonzero");
            for j in col..self.cols {
                self.set(rank, j, ctx.mul(inv, self.get(rank, j)));
            }
            if let Some(b) = aug.as_deref_mut() {
                b[rank] = ctx.mul(inv, b[rank]);
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    let v = ctx.sub(self.get(r, j), ctx.mul(factor, self.get(rank, j)));
                    self.set(r, j, v);
                }
                if let Some(b) = aug.as_deref_mut() {
                    b[r] = ctx.sub(b[r], ctx.mul(factor, b[rank]));
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.clone().echelon(ctx, None)
    }

    /// Solves `self · x = rhs` for square, invertible `self`.
    pub fn solve(&self, ctx: &FieldCtx, rhs: &[Felem]) -> Result<Vec<Felem>> {
        if self.rows != self.cols || rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve with {}x{} matrix and rhs of length {}",
                self.rows,
                self.cols,
                rhs.len()
            )));
        }
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        if a.echelon(ctx, Some(&mut b)) < self.rows {
            return Err(Error::SingularMatrix);
        }
        // Fully reduced: a is now the identity.
        Ok(b)
    }
}

/// `P·A = L·U` factorization of a square invertible matrix, for repeated
/// solves against one coefficient matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    /// Unit-lower `L` below the diagonal, `U` on and above it.
    packed: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(ctx: &FieldCtx, a: &Matrix) -> Result<Lu> {
        if a.rows != a.cols {
            return Err(Error::DimensionMismatch(format!(
                "LU of a {}x{} matrix",
                a.rows, a.cols
            )));
        }
        let n = a.rows;
        let mut m = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !m.get(r, col).is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for j in 0..n {
                    m.data.swap(pivot * n + j, col * n + j);
                }
                perm.swap(pivot, col);
            }
            let inv = ctx.inv(m.get(col, col))?;
            for r in col + 1..n {
                let factor = ctx.mul(m.get(r, col), inv);
                m.set(r, col, factor);
                if factor.is_zero() {
                    continue;
                }
                for j in col + 1..n {
                    let v = ctx.sub(m.get(r, j), ctx.mul(factor, m.get(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        Ok(Lu { n, packed: m, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, ctx: &FieldCtx, rhs: &[Felem]) -> Result<Vec<Felem>> {
        if rhs.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "rhs of length {} for a {}x{} system",
                rhs.len(),
                self.n,
                self.n
            )));
        }
        let mut y: Vec<Felem> = self.perm.iter().map(|&i| rhs[i]).collect();
        for i in 0..self.n {
            for j in 0..i {
                y[i] = ctx.sub(y[i], ctx.mul(self.packed.get(i, j), y[j]));
            }
        }
        for i in (0..self.n).rev() {
            for j in i + 1..self.n {
                y[i] = ctx.sub(y[i], ctx.mul(self.packed.get(i, j), y[j]));
            }
            y[i] = ctx.div(y[i], self.packed.get(i, i))?;
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_and_zero() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        assert_eq!(Matrix::identity(5).rank(&ctx), 5);
        assert_eq!(Matrix::zeros(4, 6).rank(&ctx), 0);
        assert_eq!(Matrix::zeros(0, 3).rank(&ctx), 0);
    }

    #[test]
    fn dependent_rows_drop_rank() {
        let ctx = FieldCtx::new(2, 2, 2).unwrap();
        let w = ctx.omega();
        let r0 = vec![Felem::ONE, w, ctx.exp(5)];
        let r1: Vec<_> = r0.iter().map(|&x| ctx.mul(ctx.exp(7), x)).collect();
        let r2 = vec![Felem::ZERO, Felem::ONE, Felem::ONE];
        let m = Matrix::from_rows(vec![r0, r1, r2]).unwrap();
        assert_eq!(m.rank(&ctx), 2);
        assert_eq!(m.solve(&ctx, &[Felem::ONE; 3]), Err(Error::SingularMatrix));
    }

    #[test]
    fn solve_recovers_known_solution() {
        let ctx = FieldCtx::new(5, 1, 2).unwrap();
        let a = Matrix::from_fn(4, 4, |i, j| ctx.exp((i * 3 + j * j * 5 + 1) as u64));
        let a = if a.rank(&ctx) == 4 {
            a
        } else {
            // Vandermonde fallback, always invertible
            Matrix::from_fn(4, 4, |i, j| ctx.pow(ctx.exp(i as u64), j as u64))
        };
        let x: Vec<_> = (0..4).map(|i| ctx.exp(i * 7 + 2)).collect();
        let b = a.mul_vec(&ctx, &x).unwrap();
        assert_eq!(a.solve(&ctx, &b).unwrap(), x);
    }

    #[test]
    fn mul_dimension_check() {
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        assert!(Matrix::zeros(2, 3).mul(&ctx, &Matrix::zeros(2, 3)).is_err());
        let i = Matrix::identity(3);
        let m = Matrix::from_fn(3, 3, |i, j| ctx.exp((i + j) as u64));
        assert_eq!(i.mul(&ctx, &m).unwrap(), m);
    }

    #[test]
    fn lu_matches_gauss_jordan() {
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let a = Matrix::from_fn(6, 6, |i, j| ctx.pow(ctx.exp(i as u64 + 1), j as u64));
        let lu = Lu::factor(&ctx, &a).unwrap();
        for s in 0..5u64 {
            let b: Vec<_> = (0..6).map(|i| ctx.exp(i * 5 + s)).collect();
            let x = lu.solve(&ctx, &b).unwrap();
            assert_eq!(a.mul_vec(&ctx, &x).unwrap(), b);
            assert_eq!(x, a.solve(&ctx, &b).unwrap());
        }
        assert!(matches!(
            Lu::factor(&ctx, &Matrix::zeros(3, 3)),
            Err(Error::SingularMatrix)
        ));
        let empty = Lu::factor(&ctx, &Matrix::zeros(0, 0)).unwrap();
        assert_eq!(empty.solve(&ctx, &[]).unwrap(), vec![]);
    }
}

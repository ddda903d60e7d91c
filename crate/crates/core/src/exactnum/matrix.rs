use std::fmt;

use super::Field;

/// Dense row-major matrix over an exact field.
///
/// The field context is stored so that empty matrices and constants can be
/// built without a sample entry.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(ctx: &F::Ctx, rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(ctx); rows * cols], ctx: ctx.clone() }
    }

    pub fn identity(ctx: &F::Ctx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one(ctx);
        }
        m
    }

    /// Builds a matrix from rows of equal length. With no rows the column
    /// count is `cols_if_empty`.
    pub fn from_rows(ctx: &F::Ctx, rows: Vec<Vec<F>>, cols_if_empty: usize) -> Result<Self, String> {
        let cols = rows.first().map_or(cols_if_empty, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(format!("row {i} has {} entries, expected {cols}", r.len()));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect(), ctx: ctx.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(&self.ctx, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(rhs.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(&self.ctx, self.row(i), v)).collect()
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul(c)).collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "stacking matrices of different widths");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self { rows: self.rows + other.rows, cols: self.cols, data, ctx: self.ctx.clone() }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(&self.ctx, rows, self.cols).expect("rows share a width")
    }

    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect(), ctx: ctx.clone() }
    }

    /// Reduced row echelon form and the pivot columns, pivoting on the first
    /// nonzero entry of each column.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact determinant by Gaussian elimination.
    pub fn determinant(&self) -> Result<F, String> {
        if !self.is_square() {
            return Err(format!("determinant of non-square {}x{} matrix", self.rows, self.cols));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one(&self.ctx);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(F::zero(&self.ctx));
            };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg();
            }
            let pivot = m.get(c, c).clone();
            det = det.mul(&pivot);
            let inv = pivot.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                let f = m.get(i, c).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).sub(&f.mul(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Basis of `{x : self * x = 0}` as rows, each scaled so that its first
    /// nonzero entry is one.
    pub fn nullspace(&self) -> Self {
        let (red, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero(&self.ctx); self.cols];
            v[free] = F::one(&self.ctx);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = red.get(r, free).neg();
            }
            basis.push(normalize_first_nonzero(v));
        }
        Self::from_rows(&self.ctx, basis, self.cols).expect("uniform width")
    }

    /// Basis of the row space (nonzero rows of the reduced echelon form).
    pub fn row_space(&self) -> Self {
        let (red, pivots) = self.rref();
        red.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.ctx, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, F::one(&self.ctx));
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(&self.ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Unique solution of `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        self.inverse().map(|inv| inv.mul_vec(b))
    }
}

/// Scales `v` so its first nonzero entry is one; zero vectors are returned
/// unchanged.
pub fn normalize_first_nonzero<F: Field>(v: Vec<F>) -> Vec<F> {
    match v.iter().find(|x| !x.is_zero()).and_then(Field::inv) {
        Some(inv) => v.iter().map(|x| x.mul(&inv)).collect(),
        None => v,
    }
}

pub fn dot<F: Field>(ctx: &F::Ctx, a: &[F], b: &[F]) -> F {
    assert_eq!(a.len(), b.len(), "dot product of unequal lengths");
    a.iter().zip(b).fold(F::zero(ctx), |acc, (x, y)| acc.add(&x.mul(y)))
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let parts: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Poly, RatFunc, Rational};
    use super::*;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        let rows = rows.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect();
        Matrix::from_rows(&(), rows, 0).unwrap()
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(Matrix::<Rational>::identity(&(), 3).determinant().unwrap(), Rational::from_integer(1.into()));
        assert_eq!(qm(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]).determinant().unwrap(), Rational::from_integer(0.into()));
        assert!(qm(&[&[1, 2, 3]]).determinant().is_err());
        let c = |v: i64| RatFunc::from_rational(&(), &Rational::from_integer(v.into()));
        let a = RatFunc::param();
        let m = Matrix::from_rows(&(), vec![vec![c(1), c(0), c(-1)], vec![c(1), c(0), c(1)], vec![c(1), a, c(0)]], 3)
            .unwrap();
        let expected = RatFunc::from_poly(Poly::from_i64(&[0, -2]));
        assert_eq!(m.determinant().unwrap(), expected);
    }

    #[test]
    fn rank_and_nullspace_examples() {
        assert_eq!(Matrix::<Rational>::zeros(&(), 3, 3).rank(), 0);
        assert_eq!(qm(&[&[1, 0, 0], &[2, 0, 0]]).rank(), 1);
        assert_eq!(Matrix::<Rational>::identity(&(), 3).nullspace().rows(), 0);
        assert_eq!(qm(&[&[0, 0, 1]]).nullspace(), qm(&[&[1, 0, 0], &[0, 1, 0]]));
        // first nonzero entry normalized to one
        let ns = qm(&[&[2, 4, 0]]).nullspace();
        assert_eq!(ns.row(0)[1], Rational::new((-1).into(), 2.into()));
        assert_eq!(ns.row(1), qm(&[&[0, 0, 1]]).row(0));
    }

    #[test]
    fn inverse_round_trip() {
        let m = qm(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&(), 3));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}

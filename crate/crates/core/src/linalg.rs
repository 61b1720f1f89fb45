//! Dense matrices over `GF(2^n)`: rank, kernels, inverses and linear solves.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldElement, Gf2nField};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FieldElement::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::element("ragged matrix rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<FieldElement>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(Error::element("ragged matrix columns"));
        }
        let mut m = Matrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, field: &Gf2nField, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Mismatch("matrix dimensions".into()));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += field.mul(a, rhs[(k, j)]);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, field: &Gf2nField, v: &[FieldElement]) -> Vec<FieldElement> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| field.mul(a, b))
                    .sum()
            })
            .collect()
    }

    /// `x^T M y`.
    pub fn bilinear(&self, field: &Gf2nField, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        let my = self.mul_vec(field, y);
        dot(field, x, &my)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self, field: &Gf2nField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(p, r);
            let inv = field.inv(self[(r, c)]).expect("pivot is nonzero");
            for j in c..self.cols {
                self[(r, j)] = field.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self[(i, c)];
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let t = field.mul(f, self[(r, j)]);
                    self[(i, j)] += t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, field: &Gf2nField) -> usize {
        self.clone().row_reduce(field).len()
    }

    /// A basis of `{ x : M x = 0 }`, one vector per free column, in column order.
    pub fn kernel(&self, field: &Gf2nField) -> Vec<Vec<FieldElement>> {
        let mut m = self.clone();
        let pivots = m.row_reduce(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![FieldElement::ZERO; self.cols];
                v[f] = FieldElement::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    // char 2: -x = x
                    v[pc] = m[(r, f)];
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, field: &Gf2nField) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = FieldElement::ONE;
        }
        let pivots = aug.row_reduce(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }

    /// Some solution of `M x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, field: &Gf2nField, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        debug_assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let pivots = aug.row_reduce(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![FieldElement::ZERO; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(r, self.cols)];
        }
        Some(x)
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElement;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(field: &Gf2nField, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
    x.iter().zip(y).map(|(&a, &b)| field.mul(a, b)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(b: u32) -> FieldElement {
        FieldElement::from_bits(b)
    }

    #[test]
    fn rank_kernel_inverse() {
        let f = Gf2nField::with_degree(2).unwrap();
        let m = Matrix::from_rows(vec![
            vec![fe(1), fe(0), fe(2)],
            vec![fe(0), fe(1), fe(3)],
            vec![fe(1), fe(1), fe(1)],
        ])
        .unwrap();
        // rows sum to zero
        assert_eq!(m.rank(&f), 2);
        let ker = m.kernel(&f);
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&f, &ker[0]).iter().all(|x| x.is_zero()));
        assert!(m.inverse(&f).is_none());

        let a = Matrix::from_rows(vec![vec![fe(1), fe(2)], vec![fe(0), fe(3)]]).unwrap();
        let inv = a.inverse(&f).unwrap();
        assert_eq!(a.mul(&f, &inv).unwrap(), Matrix::identity(2));
        let x = a.solve(&f, &[fe(1), fe(1)]).unwrap();
        assert_eq!(a.mul_vec(&f, &x), vec![fe(1), fe(1)]);
    }

    #[test]
    fn inconsistent_system() {
        let f = Gf2nField::prime();
        let m = Matrix::from_rows(vec![vec![fe(1), fe(1)], vec![fe(1), fe(1)]]).unwrap();
        assert!(m.solve(&f, &[fe(1), fe(0)]).is_none());
        assert!(m.solve(&f, &[fe(1), fe(1)]).is_some());
    }
}

//! Dense row reduction and kernels over a finite field.

use crate::ff::field::{FieldDesc, FieldElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(&row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// In-place reduced row echelon form; pivots are taken left to right,
    /// choosing the first row (top-down) with a nonzero entry. Returns pivot columns.
    pub fn rref(&mut self, f: &FieldDesc) -> Vec<usize> {
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut next = 0usize;
        for c in 0..cols {
            if next == self.rows {
                break;
            }
            let Some(pr) = (next..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            if pr != next {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, next * cols + j);
                }
            }
            let inv = f.inv(self.get(next, c));
            for j in c..cols {
                let v = self.get(next, j);
                if !v.is_zero() {
                    self.set(next, j, f.mul(v, inv));
                }
            }
            let support: Vec<usize> = (c..cols)
                .filter(|&j| !self.get(next, j).is_zero())
                .collect();
            for r in 0..self.rows {
                if r == next {
                    continue;
                }
                let factor = self.get(r, c);
                if factor.is_zero() {
                    continue;
                }
                for &j in &support {
                    let v = f.sub(self.get(r, j), f.mul(factor, self.get(next, j)));
                    self.set(r, j, v);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldDesc) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column in
    /// increasing column order, normalized to 1 at that column.
    pub fn kernel(&self, f: &FieldDesc) -> Vec<Vec<FieldElem>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(i);
        }
        (0..self.cols)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = vec![FieldElem::ZERO; self.cols];
                v[free] = FieldElem::ONE;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(i, free));
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[FieldElem], f: &FieldDesc) -> Vec<FieldElem> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }
}

//! Dense exact linear algebra over a [`Field`].

use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![vec![field.zero(); cols]; rows],
        }
    }

    pub fn from_i64(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.data[i][j] = field.from_i64(v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i][j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if !other.data[k][j].is_zero() {
                        let t = &self.data[i][k] * &other.data[k][j];
                        out.data[i][j] += &t;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(Scalar::is_zero)
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let mut prev = self.field.one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, piv);
            let prev_inv = prev.inv().expect("nonzero previous pivot");
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let t = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                    a[i][j] = &t * &prev_inv;
                }
                a[i][c] = self.field.zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, piv);
            let inv = self.data[r][c].inv().unwrap();
            for j in c..self.cols {
                self.data[r][j] = &self.data[r][j] * &inv;
            }
            for i in 0..self.rows {
                if i != r && !self.data[i][c].is_zero() {
                    let f = self.data[i][c].clone();
                    for j in c..self.cols {
                        let t = &f * &self.data[r][j];
                        self.data[i][j] = &self.data[i][j] - &t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// A basis of `{ v : A v = 0 }`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut a = self.clone();
        let pivots = a.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&a.data[row][f];
                }
                v
            })
            .collect()
    }
}

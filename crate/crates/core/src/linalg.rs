//! Dense linear algebra over `F_q`: row reduction, affine solution spaces,
//! null spaces and Vandermonde matrices.

use std::ops::{Index, IndexMut};

use crate::field::{Fe, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Row-major matrix over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl MatFq {
    pub fn new(rows: usize, cols: usize, data: Vec<Fe>) -> Self {
        assert_eq!(
            rows * cols,
            data.len(),
            "matrix data length must be rows*cols"
        );
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Fe::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fe>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Fe) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> MatFq {
        MatFq::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> MatFq {
        let rows: Vec<Vec<Fe>> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        MatFq::new(idx.len(), self.cols, rows.concat())
    }

    pub fn mul(&self, field: &PrimeField, rhs: &MatFq) -> MatFq {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = MatFq::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cell = &mut out.data[i * rhs.cols + j];
                    *cell = field.add(*cell, field.mul(a, rhs[(l, j)]));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &PrimeField, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(
            self.cols,
            v.len(),
            "vector length differs from column count"
        );
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }

    pub fn map(&self, f: impl FnMut(&Fe) -> Fe) -> MatFq {
        MatFq {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl Index<(usize, usize)> for MatFq {
    type Output = Fe;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Fe {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MatFq {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Fe {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form and its pivot columns.
///
/// Pivots are chosen column by column from the left, taking the topmost
/// nonzero entry at or below the current row, so the output is deterministic.
pub fn rref(field: &PrimeField, a: &MatFq) -> (MatFq, Vec<usize>) {
    let mut m = a.clone();
    let pivots = rref_in_place(field, &mut m, a.cols);
    (m, pivots)
}

// Reduces `m` using only the first `limit` columns as pivot candidates.
fn rref_in_place(field: &PrimeField, m: &mut MatFq, limit: usize) -> Vec<usize> {
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = field.inv(m[(r, c)]).expect("pivot is nonzero");
        let (above, rest) = m.data.split_at_mut(r * cols);
        let (pivot_row, below) = rest.split_at_mut(cols);
        for v in &mut pivot_row[c..] {
            *v = field.mul(*v, inv);
        }
        let pivot_row = &pivot_row[c..];
        for row in above
            .chunks_exact_mut(cols)
            .chain(below.chunks_exact_mut(cols))
        {
            let factor = row[c];
            if factor.is_zero() {
                continue;
            }
            field.sub_scaled(&mut row[c..], factor, pivot_row);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: &PrimeField, a: &MatFq) -> usize {
    rref(field, a).1.len()
}

/// Parametrization `{ particular + basis * x }` of the solutions of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Fe>,
    /// `n x l`; column `c` is the direction of free variable `free_rows[c]`.
    pub basis: MatFq,
    /// Row indices where `basis` restricts to the `l x l` identity.
    pub free_rows: Vec<usize>,
}

impl AffineSolution {
    pub fn dimension(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.particular.len()
    }

    pub fn point(&self, field: &PrimeField, x: &[Fe]) -> Vec<Fe> {
        let offset = self.basis.mul_vec(field, x);
        self.particular
            .iter()
            .zip(offset)
            .map(|(&z, o)| field.add(z, o))
            .collect()
    }

    /// Membership test: the free coordinates of `v - z` fix the only candidate `x`.
    pub fn contains(&self, field: &PrimeField, v: &[Fe]) -> bool {
        if v.len() != self.ambient_dim() {
            return false;
        }
        let x: Vec<Fe> = self
            .free_rows
            .iter()
            .map(|&r| field.sub(v[r], self.particular[r]))
            .collect();
        self.point(field, &x) == v
    }
}

/// Full solution set of `A x = b`.
pub fn solve_affine(
    field: &PrimeField,
    a: &MatFq,
    b: &[Fe],
) -> Result<AffineSolution, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::Shape(format!(
            "rhs has {} entries but matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    let mut aug = MatFq::from_fn(a.rows(), n + 1, |i, j| if j < n { a[(i, j)] } else { b[i] });
    let pivots = rref_in_place(field, &mut aug, n);
    if (pivots.len()..aug.rows()).any(|i| !aug[(i, n)].is_zero()) {
        return Err(LinalgError::Inconsistent);
    }

    let mut particular = vec![Fe::ZERO; n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug[(r, n)];
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free_rows: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut basis = MatFq::zeros(n, free_rows.len());
    for (col, &f) in free_rows.iter().enumerate() {
        basis[(f, col)] = Fe::ONE;
        for (r, &c) in pivots.iter().enumerate() {
            basis[(c, col)] = field.neg(aug[(r, f)]);
        }
    }
    Ok(AffineSolution {
        particular,
        basis,
        free_rows,
    })
}

/// Columns span `{ v : A v = 0 }`; there are `cols - rank` of them.
pub fn null_space(field: &PrimeField, a: &MatFq) -> MatFq {
    solve_affine(field, a, &vec![Fe::ZERO; a.rows()])
        .expect("homogeneous systems are consistent")
        .basis
}

/// Row `i` is `(1, x_i, x_i^2, ..., x_i^{k-1})`.
pub fn vandermonde(field: &PrimeField, nodes: &[Fe], k: usize) -> MatFq {
    let mut data = Vec::with_capacity(nodes.len() * k);
    for &x in nodes {
        let mut p = Fe::ONE;
        for _ in 0..k {
            data.push(p);
            p = field.mul(p, x);
        }
    }
    MatFq::new(nodes.len(), k, data)
}

//! Dense exact linear algebra: echelon forms, kernels, images and quotients.

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::cochain::{AnsatzSpace, Cochain, NotInSpace};
use crate::exactpoly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("image is not contained in the kernel (vector {0} of the image basis)")]
    NotContained(usize),
    #[error("map output {index} left the target space: {source}")]
    LeftTarget {
        index: usize,
        #[source]
        source: NotInSpace,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = Rational::from_integer(1.into());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        QMatrix {
            rows: rows.len(),
            cols,
            entries: rows,
        }
    }

    pub fn from_columns(columns: &[Vec<Rational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m.entries[i][j] = v.clone();
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i]
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j][i] = self.entries[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.entries[k][j];
                    if !b.is_zero() {
                        out.entries[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|v| v.is_zero())
    }

    /// Reduced row echelon form with first-nonzero pivoting; returns the
    /// nonzero rows and their pivot columns.
    pub fn rref(&self) -> (Vec<Vec<Rational>>, Vec<usize>) {
        let mut m = self.entries.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for v in m[r].iter_mut().skip(c) {
                *v *= &inv;
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !pv.is_zero() {
                        *v -= &f * pv;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        m.truncate(r);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

/// A subspace of `Q^ambient`, held as a reduced echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, &QMatrix::identity(ambient).entries)
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Self {
        let m = QMatrix::from_rows(vectors.to_vec(), ambient);
        let (basis, pivots) = m.rref();
        Subspace { ambient, basis, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its echelon projection; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ambient);
        let mut out = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (o, bv) in out.iter_mut().zip(b) {
                if !bv.is_zero() {
                    *o -= &f * bv;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Adds `v` if independent, keeping the basis reduced. Returns the
    /// reduced vector that was added.
    pub fn insert(&mut self, v: &[Rational]) -> Option<Vec<Rational>> {
        let r = self.reduce(v);
        let p = r.iter().position(|x| !x.is_zero())?;
        let inv = r[p].recip();
        let r: Vec<Rational> = r.iter().map(|x| x * &inv).collect();
        for b in self.basis.iter_mut() {
            if b[p].is_zero() {
                continue;
            }
            let f = b[p].clone();
            for (bv, rv) in b.iter_mut().zip(&r) {
                if !rv.is_zero() {
                    *bv -= &f * rv;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r.clone());
        Some(r)
    }
}

/// Null space of `m`, one basis vector per free column.
pub fn kernel_basis(m: &QMatrix) -> Subspace {
    let (rows, pivots) = m.rref();
    let mut vectors = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::from_integer(1.into());
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        vectors.push(v);
    }
    Subspace::span(m.cols, &vectors)
}

/// Column space of `m`.
pub fn image_subspace(m: &QMatrix) -> Subspace {
    let t = m.transpose();
    let (basis, pivots) = t.rref();
    Subspace {
        ambient: m.rows,
        basis,
        pivots,
    }
}

/// Complement of `image` inside `kernel`: the kernel basis vectors that
/// extend the image, each reduced against everything chosen before it.
pub fn quotient_basis(kernel: &Subspace, image: &Subspace) -> Result<Vec<Vec<Rational>>, LinalgError> {
    if kernel.ambient != image.ambient {
        return Err(LinalgError::Dimension(format!(
            "kernel lives in Q^{}, image in Q^{}",
            kernel.ambient, image.ambient
        )));
    }
    if let Some(i) = image.basis.iter().position(|v| !kernel.contains(v)) {
        return Err(LinalgError::NotContained(i));
    }
    let mut span = image.clone();
    let mut out = Vec::new();
    for v in &kernel.basis {
        if let Some(r) = span.insert(v) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Column `i` holds the coordinates of `map(inputs[i])` in `target`.
pub fn coefficient_matrix<F>(inputs: &[Cochain], map: F, target: &AnsatzSpace) -> Result<QMatrix, LinalgError>
where
    F: Fn(&Cochain) -> Cochain + Sync,
{
    let columns: Vec<Vec<Rational>> = inputs
        .par_iter()
        .enumerate()
        .map(|(index, f)| {
            target
                .coordinates(&map(f))
                .map_err(|source| LinalgError::LeftTarget { index, source })
        })
        .collect::<Result<_, _>>()?;
    Ok(QMatrix::from_columns(&columns, target.dim()))
}

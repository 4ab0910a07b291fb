//! Dense exact matrices and the row-reduction toolkit built on them.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience for tests and fixtures.
    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&x| Scalar::from_int(x)).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension(format!(
                    "column of length {} in a {rows}-row matrix",
                    col.len()
                )));
            }
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
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

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scaled(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "{:?} + {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.try_add(&other.scaled(&Scalar::from_int(-1)))
    }

    /// Ordinary matrix product `self * other`.
    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{:?} * {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {:?}",
                v.len(),
                self.shape()
            )));
        }
        let mut out = zero_vector(self.rows);
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = &self[(r, c)];
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form together with the pivot columns and the
    /// invertible transform `E` with `E * self = R`.
    pub fn rref_with_transform(&self) -> (Matrix, Vec<usize>, Matrix) {
        let mut r = self.clone();
        let mut e = Matrix::identity(self.rows);
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&i| !r[(i, c)].is_zero()) else {
                continue;
            };
            r.swap_rows(p, lead);
            e.swap_rows(p, lead);
            let inv = r[(lead, c)].recip().expect("pivot is nonzero");
            r.scale_row(lead, &inv);
            e.scale_row(lead, &inv);
            for i in 0..self.rows {
                if i != lead && !r[(i, c)].is_zero() {
                    let f = r[(i, c)].clone();
                    r.add_row_multiple(i, lead, &f);
                    e.add_row_multiple(i, lead, &f);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        (r, pivots, e)
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let (r, p, _) = self.rref_with_transform();
        (r, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vector(self.cols);
            v[free] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(i, free)];
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let (_, pivots, e) = self.rref_with_transform();
        (pivots.len() == self.rows).then_some(e)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Scalar) {
        for c in 0..self.cols {
            let x = &self[(r, c)] * s;
            self[(r, c)] = x;
        }
    }

    /// row[target] -= factor * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Scalar) {
        for c in 0..self.cols {
            let s = &self[(source, c)];
            if s.is_zero() {
                continue;
            }
            let x = &self[(target, c)] - &(factor * s);
            self[(target, c)] = x;
        }
    }
}

/// Rank, kernel, column-space complement and a preimage solver for one matrix.
#[derive(Clone, Debug)]
pub struct LinearSolveSuite {
    pub rank: usize,
    pub nullspace: Vec<Vector>,
    /// Standard basis indices whose vectors complete the column space to the
    /// whole target space.
    pub complement: Vec<usize>,
    matrix: Matrix,
    transform: Matrix,
    pivots: Vec<usize>,
}

impl LinearSolveSuite {
    pub fn new(matrix: &Matrix) -> Self {
        let (_, pivots, transform) = matrix.rref_with_transform();
        let columns: Vec<Vector> = (0..matrix.cols()).map(|c| matrix.column(c)).collect();
        let units: Vec<Vector> = (0..matrix.rows())
            .map(|i| unit_vector(matrix.rows(), i))
            .collect();
        let complement = extend_to_basis(matrix.rows(), &columns, &units);
        LinearSolveSuite {
            rank: pivots.len(),
            nullspace: matrix.nullspace(),
            complement,
            matrix: matrix.clone(),
            transform,
            pivots,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Some `x` with `A x = b`, or `None` when `b` is not in the column space.
    pub fn preimage(&self, b: &[Scalar]) -> Result<Option<Vector>> {
        if b.len() != self.matrix.rows() {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.matrix.rows()
            )));
        }
        let y = self.transform.apply(b)?;
        if y[self.rank..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut x = zero_vector(self.matrix.cols());
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = y[i].clone();
        }
        Ok(Some(x))
    }
}

pub fn linear_solve_suite(matrix: &Matrix) -> LinearSolveSuite {
    LinearSolveSuite::new(matrix)
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

/// Greedily picks indices of `candidates` that are independent modulo the
/// span of `existing` and of the candidates already picked.
pub fn extend_to_basis(dim: usize, existing: &[Vector], candidates: &[Vector]) -> Vec<usize> {
    let mut echelon = Echelon::new(dim);
    for v in existing {
        echelon.insert(v.clone());
    }
    candidates
        .iter()
        .enumerate()
        .filter_map(|(i, v)| echelon.insert(v.clone()).then_some(i))
        .collect()
}

/// Incrementally maintained row-echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, mut v: Vector) -> Vector {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v.to_vec()))
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: Vector) -> bool {
        assert_eq!(v.len(), self.dim, "echelon vector length");
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip().expect("nonzero");
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_has_full_rank() {
        let s = linear_solve_suite(&Matrix::identity(2));
        assert_eq!(s.rank, 2);
        assert!(s.nullspace.is_empty());
        assert!(s.complement.is_empty());
    }

    #[test]
    fn degenerate_two_by_two() {
        let m = Matrix::from_ints(2, 2, &[1, 1, 1, 1]);
        let s = linear_solve_suite(&m);
        assert_eq!(s.rank, 1);
        assert_eq!(s.nullspace, vec![vec![Scalar::from_int(-1), Scalar::one()]]);
        assert_eq!(s.complement, vec![0]);
        let x = s
            .preimage(&[Scalar::from_int(3), Scalar::from_int(3)])
            .unwrap()
            .unwrap();
        assert_eq!(m.apply(&x).unwrap(), vec![Scalar::from_int(3); 2]);
        assert_eq!(s.preimage(&[Scalar::one(), Scalar::zero()]).unwrap(), None);
        assert!(s.preimage(&[Scalar::one()]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_ints(3, 3, &[2, 1, 0, 0, 1, 3, 1, 0, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.try_mul(&inv).unwrap(), Matrix::identity(3));
        assert!(Matrix::from_ints(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    /// Fraction-free Gaussian elimination on integer entries, written
    /// independently of `rref`.
    fn oracle_rank(rows: usize, cols: usize, entries: &[i64]) -> usize {
        let mut a: Vec<Vec<i128>> = (0..rows)
            .map(|r| {
                entries[r * cols..(r + 1) * cols]
                    .iter()
                    .map(|&x| x as i128)
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..rows {
                if a[r][c] != 0 {
                    let (f, g) = (a[r][c], a[rank][c]);
                    for k in 0..cols {
                        a[r][k] = a[r][k] * g - a[rank][k] * f;
                    }
                    let content = a[r].iter().fold(0i128, |acc, &x| num_integer::gcd(acc, x));
                    if content > 1 {
                        a[r].iter_mut().for_each(|x| *x /= content);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_matches_oracle(entries in proptest::collection::vec(-2i64..3, 16)) {
            let m = Matrix::from_ints(4, 4, &entries);
            let s = linear_solve_suite(&m);
            prop_assert_eq!(s.rank, oracle_rank(4, 4, &entries));
            prop_assert_eq!(s.rank + s.nullspace.len(), 4);
            prop_assert_eq!(s.rank + s.complement.len(), 4);
            for v in &s.nullspace {
                prop_assert!(is_zero_vector(&m.apply(v).unwrap()));
            }
        }

        #[test]
        fn rank_nullity_rectangular(entries in proptest::collection::vec(-3i64..4, 15)) {
            let m = Matrix::from_ints(3, 5, &entries);
            let s = linear_solve_suite(&m);
            prop_assert_eq!(s.rank + s.nullspace.len(), 5);
            prop_assert_eq!(s.rank, oracle_rank(3, 5, &entries));
            let b = m.column(0);
            let x = s.preimage(&b).unwrap().unwrap();
            prop_assert_eq!(m.apply(&x).unwrap(), b);
        }
    }
}

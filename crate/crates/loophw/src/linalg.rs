//! Exact dense linear algebra: matrices with zero-skipping kernels and
//! row-reduced subspaces with deterministic pivoting.

use crate::scalars::Scalar;

/// Dense matrix over an exact field. Inner loops skip zero entries, which
/// keeps the cost close to the sparse structure the module actions have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Matrix {
            n_rows,
            n_cols,
            rows: vec![vec![T::zero(); n_cols]; n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols));
        Matrix {
            n_rows,
            n_cols,
            rows,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.rows[i][j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: T) {
        self.rows[i][j] = self.rows[i][j].clone() + v;
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zeroish::is_zeroish))
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.n_cols);
        let mut out = vec![T::zero(); self.n_rows];
        for (i, row) in self.rows.iter().enumerate() {
            let mut acc = T::zero();
            for (j, e) in row.iter().enumerate() {
                if e.is_zero() || v[j].is_zero() {
                    continue;
                }
                acc = acc + e.clone() * v[j].clone();
            }
            out[i] = acc;
        }
        out
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.n_cols, other.n_rows);
        let mut out: Matrix<T> = Matrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for (k, e) in self.rows[i].iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for (j, f) in other.rows[k].iter().enumerate() {
                    if f.is_zero() {
                        continue;
                    }
                    out.rows[i][j] = out.rows[i][j].clone() + e.clone() * f.clone();
                }
            }
        }
        out
    }

    pub fn plus(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.n_rows, self.n_cols), (other.n_rows, other.n_cols));
        let mut out = self.clone();
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                if !other.rows[i][j].is_zero() {
                    out.rows[i][j] = out.rows[i][j].clone() + other.rows[i][j].clone();
                }
            }
        }
        out
    }

    pub fn minus(&self, other: &Matrix<T>) -> Matrix<T> {
        self.plus(&other.scaled(&-T::one()))
    }

    pub fn scaled(&self, c: &T) -> Matrix<T> {
        let mut out = self.clone();
        for row in &mut out.rows {
            for e in row.iter_mut() {
                if !e.is_zero() {
                    *e = e.clone() * c.clone();
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Matrix<T>) -> Matrix<T> {
        self.mul(other).minus(&other.mul(self))
    }

    /// Inverse by Gauss-Jordan; `None` for singular input.
    pub fn inverse(&self) -> Option<Matrix<T>> {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        let mut a = self.rows.clone();
        let mut inv = Matrix::<T>::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                if !a[col][j].is_zero() {
                    a[col][j] = a[col][j].clone() / p.clone();
                }
                if !inv[col][j].is_zero() {
                    inv[col][j] = inv[col][j].clone() / p.clone();
                }
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    if !a[col][j].is_zero() {
                        a[i][j] = a[i][j].clone() - f.clone() * a[col][j].clone();
                    }
                    if !inv[col][j].is_zero() {
                        inv[i][j] = inv[i][j].clone() - f.clone() * inv[col][j].clone();
                    }
                }
            }
        }
        Some(Matrix::from_rows(inv))
    }
}

// Small helper so `is_zero` can be called through a trait object-free path
// in `is_zero` above without colliding with num_traits' method resolution.
trait Zeroish {
    fn is_zeroish(&self) -> bool;
}

impl<T: Scalar> Zeroish for T {
    fn is_zeroish(&self) -> bool {
        self.is_zero()
    }
}

pub fn vec_is_zero<T: Scalar>(v: &[T]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

pub fn vec_sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn vec_scale<T: Scalar>(a: &[T], c: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

/// A subspace held in reduced row echelon form with exact pivots.
///
/// Pivot columns are chosen lowest-index-first and pivot entries are
/// normalized to 1, so the stored basis is canonical for the subspace and
/// serialized output is reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<T> {
    n_cols: usize,
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Subspace<T> {
    pub fn new(n_cols: usize) -> Self {
        Subspace {
            n_cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<T>>>(n_cols: usize, vectors: I) -> Self {
        let mut s = Subspace::new(n_cols);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after subtracting its projection on the span.
    pub fn reduce(&self, mut v: Vec<T>) -> Vec<T> {
        assert_eq!(v.len(), self.n_cols);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.clone() - c.clone() * y.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        vec_is_zero(&self.reduce(v.to_vec()))
    }

    /// Inserts a vector; returns true when the rank grew.
    pub fn insert(&mut self, v: Vec<T>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = T::one() / v[p].clone();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        // back-substitute to keep the basis reduced
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&v) {
                if !y.is_zero() {
                    *x = x.clone() - c.clone() * y.clone();
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Coordinates of `v` in the canonical basis, or `None` if outside.
    pub fn coords(&self, v: &[T]) -> Option<Vec<T>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Sum of subspaces.
    pub fn join(&self, other: &Subspace<T>) -> Subspace<T> {
        let mut out = self.clone();
        for row in &other.rows {
            out.insert(row.clone());
        }
        out
    }
}

/// Basis of the joint null space of a list of matrices, restricted to
/// vectors supported on the given columns. Returned vectors are full length.
pub fn null_space_joint<T: Scalar>(
    mats: &[&Matrix<T>],
    support: &[usize],
    full_len: usize,
) -> Vec<Vec<T>> {
    // unknowns: coefficients on `support`; equations: all output rows
    let mut system: Vec<Vec<T>> = Vec::new();
    for m in mats {
        for i in 0..m.n_rows() {
            let row: Vec<T> = support.iter().map(|&c| m.get(i, c).clone()).collect();
            if !vec_is_zero(&row) {
                system.push(row);
            }
        }
    }
    let reduced = Subspace::from_vectors(support.len(), system);
    let pivset: std::collections::BTreeSet<usize> = reduced.pivots().iter().copied().collect();
    let mut out = Vec::new();
    for free in 0..support.len() {
        if pivset.contains(&free) {
            continue;
        }
        let mut x = vec![T::zero(); support.len()];
        x[free] = T::one();
        for (row, &p) in reduced.basis().iter().zip(reduced.pivots()) {
            if !row[free].is_zero() {
                x[p] = -row[free].clone();
            }
        }
        let mut full = vec![T::zero(); full_len];
        for (k, &c) in support.iter().enumerate() {
            full[c] = x[k].clone();
        }
        out.push(full);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;
    use crate::Rat;

    fn r(n: i64) -> Rat {
        int(n)
    }

    #[test]
    fn echelon_and_coords() {
        let mut s = Subspace::new(3);
        assert!(s.insert(vec![r(0), r(2), r(4)]));
        assert!(s.insert(vec![r(1), r(1), r(1)]));
        assert!(!s.insert(vec![r(2), r(4), r(6)]));
        assert_eq!(s.rank(), 2);
        assert_eq!(s.pivots(), &[0, 1]);
        // canonical reduced form regardless of insertion order
        let mut t = Subspace::new(3);
        t.insert(vec![r(1), r(1), r(1)]);
        t.insert(vec![r(0), r(1), r(2)]);
        assert_eq!(s, t);

        let v = vec![r(3), r(5), r(7)];
        let c = s.coords(&v).unwrap();
        assert_eq!(c, vec![r(3), r(5)]);
        assert!(s.coords(&[r(0), r(0), r(1)]).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(vec![
            vec![r(2), r(1), r(0)],
            vec![r(0), r(1), r(3)],
            vec![r(1), r(0), r(1)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let singular = Matrix::from_rows(vec![vec![r(1), r(2)], vec![r(2), r(4)]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn null_space_small() {
        // kernel of [1 2 3] on all columns
        let m = Matrix::from_rows(vec![vec![r(1), r(2), r(3)]]);
        let ns = null_space_joint(&[&m], &[0, 1, 2], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(vec_is_zero(&m.matvec(v)));
        }
        // restricted support: kernel of [1 3] with the free variable at 1
        let ns = null_space_joint(&[&m], &[0, 2], 3);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![r(-3), r(0), r(1)]);
    }
}

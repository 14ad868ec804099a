//! Dense exact linear algebra over [`Rational`].
//!
//! Subspaces are stored by a reduced-row-echelon basis in ambient
//! coordinates. That makes membership, coordinates, and quotient projections
//! a single reduction pass, and it makes every derived basis deterministic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Vector = Vec<Rational>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

/// `acc += c * v`, skipping zeros.
pub fn axpy(acc: &mut [Rational], c: &Rational, v: &[Rational]) {
    if c.is_zero() {
        return;
    }
    debug_assert_eq!(acc.len(), v.len());
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn scaled(c: &Rational, v: &[Rational]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn sub_vectors(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vectors(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Dense row-major matrix; a linear map from `cols`-space to `rows`-space.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<Rational>>", try_from = "Vec<Vec<Rational>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        Self::try_from_rows(rows, None).expect("ragged rows")
    }

    /// Builds from row vectors; `cols` is needed when there are no rows.
    pub fn try_from_rows(rows: Vec<Vec<Rational>>, cols: Option<usize>) -> Result<Self> {
        let ncols = cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch {
                    context: format!("matrix row {i}"),
                    expected: ncols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Matrix { rows: nrows, cols: ncols, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect())
    }

    /// Builds from column vectors, each of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
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

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length does not match matrix columns");
        let mut out = zero_vector(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self.data[i * self.cols + j];
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    /// Matrix product `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + j];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: add_vectors(&self.data, &rhs.data) }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix { rows: self.rows, cols: self.cols, data: sub_vectors(&self.data, &rhs.data) }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: scaled(c, &self.data) }
    }

    /// Entries in row-major order; used to treat a map as a vector.
    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vector) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Stacks blocks vertically.
    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Matrix { rows, cols, data }
    }

    pub fn rank(&self) -> usize {
        row_reduce(self).rank
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl From<Matrix> for Vec<Vec<Rational>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

impl TryFrom<Vec<Vec<Rational>>> for Matrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Rational>>) -> Result<Self> {
        Matrix::try_from_rows(rows, None)
    }
}

/// Column-sparse matrix for structural maps (actions, tensor reindexing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, columns: Vec<Vec<(usize, Rational)>>) -> Self {
        SparseMatrix { rows, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, Rational)] {
        &self.columns[j]
    }

    /// `acc += c * M v`.
    pub fn apply_into(&self, acc: &mut [Rational], c: &Rational, v: &[Rational]) {
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let cx = c * x;
            for (i, a) in &self.columns[j] {
                acc[*i] += &cx * a;
            }
        }
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        let mut out = zero_vector(self.rows);
        self.apply_into(&mut out, &Rational::one(), v);
        out
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, a) in col {
                m[(*i, j)] += a;
            }
        }
        m
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let columns = (0..m.cols())
            .map(|j| {
                (0..m.rows())
                    .filter(|&i| !m[(i, j)].is_zero())
                    .map(|i| (i, m[(i, j)].clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: m.rows(), columns }
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowEchelon {
    pub rank: usize,
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form by exact Gauss-Jordan elimination.
pub fn row_reduce(m: &Matrix) -> RowEchelon {
    let mut r = m.clone();
    let (rows, cols) = (r.rows, r.cols);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !r[(i, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..cols {
                r.data.swap(p * cols + j, row * cols + j);
            }
        }
        let inv = r[(row, col)].recip().expect("nonzero pivot");
        for j in col..cols {
            let x = &r.data[row * cols + j] * &inv;
            r.data[row * cols + j] = x;
        }
        let pivot_row: Vector = r.row(row).to_vec();
        for i in 0..rows {
            if i == row {
                continue;
            }
            let factor = r[(i, col)].clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..cols {
                if !pivot_row[j].is_zero() {
                    let x = &factor * &pivot_row[j];
                    r.data[i * cols + j] -= x;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    RowEchelon { rank: pivots.len(), reduced: r, pivots }
}

/// A subspace of `Q^ambient`, stored by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: (0..ambient).map(|i| unit_vector(ambient, i)).collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<I, V>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[Rational]>,
    {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(v.as_ref().to_vec());
            if s.dim() == ambient {
                break;
            }
        }
        s
    }

    /// Column space of `m`.
    pub fn image(m: &Matrix) -> Self {
        Self::span(m.rows(), m.columns())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `ambient x dim` matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_cols(self.ambient, &self.rows)
    }

    /// Subtracts the component along the basis; the result vanishes at every pivot.
    pub fn reduce(&self, mut v: Vector) -> Vector {
        assert_eq!(v.len(), self.ambient, "vector not in ambient space");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (j, x) in row.iter().enumerate().skip(p) {
                if !x.is_zero() {
                    v[j] -= &c * x;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero_vector(&self.reduce(v.to_vec()))
    }

    /// Coordinates with respect to [`Self::basis`], if `v` lies in the subspace.
    pub fn coords(&self, v: &[Rational]) -> Option<Vector> {
        if self.contains(v) {
            Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
        } else {
            None
        }
    }

    pub fn combine(&self, coords: &[Rational]) -> Vector {
        assert_eq!(coords.len(), self.dim());
        let mut v = zero_vector(self.ambient);
        for (c, row) in coords.iter().zip(&self.rows) {
            axpy(&mut v, c, row);
        }
        v
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip().expect("nonzero");
        for x in v.iter_mut().skip(p) {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (j, x) in v.iter().enumerate().skip(p) {
                if !x.is_zero() {
                    row[j] -= &c * x;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }

    /// First basis vector of `self` outside `other`.
    pub fn first_outside(&self, other: &Subspace) -> Option<Vector> {
        self.rows.iter().find(|r| !other.contains(r)).cloned()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}", self.dim(), self.ambient)?;
        for r in &self.rows {
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "; [{}]", s.join(", "))?;
        }
        write!(f, ")")
    }
}

/// `total / sub`, with the pivot-complement section.
///
/// Quotient coordinates are the ambient coordinates at the non-pivot
/// positions of `sub`, so the section is a coordinate embedding and the
/// projection is a reduction followed by a coordinate read-off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    sub: Subspace,
    complement: Vec<usize>,
}

impl Quotient {
    pub fn new(sub: Subspace) -> Self {
        let mut complement = Vec::with_capacity(sub.ambient - sub.dim());
        let mut piv = sub.pivots.iter().peekable();
        for j in 0..sub.ambient {
            if piv.peek() == Some(&&j) {
                piv.next();
            } else {
                complement.push(j);
            }
        }
        Quotient { sub, complement }
    }

    pub fn trivial(total: usize) -> Self {
        Self::new(Subspace::zero(total))
    }

    pub fn total_dim(&self) -> usize {
        self.sub.ambient
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn project(&self, v: Vector) -> Vector {
        let v = self.sub.reduce(v);
        self.complement.iter().map(|&j| v[j].clone()).collect()
    }

    pub fn lift(&self, q: &[Rational]) -> Vector {
        assert_eq!(q.len(), self.dim(), "quotient coordinate length");
        let mut v = zero_vector(self.sub.ambient);
        for (x, &j) in q.iter().zip(&self.complement) {
            v[j] = x.clone();
        }
        v
    }

    /// Lift of the `k`-th quotient basis vector: the ambient unit vector it sits on.
    pub fn lift_index(&self, k: usize) -> usize {
        self.complement[k]
    }

    pub fn projection_matrix(&self) -> Matrix {
        let n = self.total_dim();
        Matrix::from_cols(self.dim(), &(0..n).map(|j| self.project(unit_vector(n, j))).collect::<Vec<_>>())
    }

    pub fn section_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.total_dim(), self.dim());
        for (k, &j) in self.complement.iter().enumerate() {
            m[(j, k)] = Rational::one();
        }
        m
    }
}

/// `ker f` as a subspace of the domain.
pub fn kernel(f: &Matrix) -> Subspace {
    let ech = row_reduce(f);
    kernel_from_echelon(&ech.reduced, &ech.pivots, f.cols())
}

/// Kernel of the first `n` columns of an echelon form whose pivots all lie there.
fn kernel_from_echelon(reduced: &Matrix, pivots: &[usize], n: usize) -> Subspace {
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..n).filter(|&j| !is_pivot[j]).map(|free| {
        let mut v = zero_vector(n);
        v[free] = Rational::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -&reduced[(i, free)];
        }
        v
    });
    Subspace::span(n, vectors)
}

/// Quotient of `total` by `sub`, where `total` is given as a subspace of a
/// common ambient space. Coordinates of the result are relative to `total`'s basis.
pub fn quotient(total: &Subspace, sub: &Subspace) -> Result<Quotient> {
    if total.ambient() != sub.ambient() {
        return Err(Error::DimensionMismatch {
            context: "quotient ambient".into(),
            expected: total.ambient(),
            found: sub.ambient(),
        });
    }
    let mut rel = Subspace::zero(total.dim());
    for v in sub.basis() {
        let c = total.coords(v).ok_or(Error::NotContained)?;
        rel.insert(c);
    }
    Ok(Quotient::new(rel))
}

/// Some `x` with `a x = b`.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vector> {
    assert_eq!(a.rows(), b.len());
    let mut aug = Matrix::zeros(a.rows(), a.cols() + 1);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols())] = b[i].clone();
    }
    let ech = row_reduce(&aug);
    if ech.pivots.last() == Some(&a.cols()) {
        return None;
    }
    let mut x = zero_vector(a.cols());
    for (i, &p) in ech.pivots.iter().enumerate() {
        x[p] = ech.reduced[(i, a.cols())].clone();
    }
    Some(x)
}

/// Outcome of [`factor_through`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    /// The unique `h` with `h ∘ f = g`.
    Factors(Matrix),
    /// `witness ∈ ker f` with `g(witness) = image ≠ 0`.
    Obstructed { witness: Vector, image: Vector },
}

impl Factorization {
    pub fn map(&self) -> Option<&Matrix> {
        match self {
            Factorization::Factors(h) => Some(h),
            Factorization::Obstructed { .. } => None,
        }
    }
}

/// Factors `g` through the surjection `f` (both defined on the same domain).
pub fn factor_through(f: &Matrix, g: &Matrix) -> Result<Factorization> {
    if f.cols() != g.cols() {
        return Err(Error::DimensionMismatch {
            context: "factor_through domain".into(),
            expected: f.cols(),
            found: g.cols(),
        });
    }
    let (rows, cols) = (f.rows(), f.cols());
    // [f | I] reduces to [R | T] with T f = R.
    let mut aug = Matrix::zeros(rows, cols + rows);
    for i in 0..rows {
        for j in 0..cols {
            aug[(i, j)] = f[(i, j)].clone();
        }
        aug[(i, cols + i)] = Rational::one();
    }
    let ech = row_reduce(&aug);
    let rank = ech.pivots.iter().filter(|&&p| p < cols).count();
    if rank != rows {
        return Err(Error::NotSurjective { rank, codim: rows });
    }
    for v in kernel_from_echelon(&ech.reduced, &ech.pivots, cols).basis() {
        let image = g.apply(v);
        if !is_zero_vector(&image) {
            return Ok(Factorization::Obstructed { witness: v.clone(), image });
        }
    }
    let h_cols: Vec<Vector> = (0..rows)
        .map(|k| {
            let mut x = zero_vector(cols);
            for (i, &p) in ech.pivots.iter().enumerate() {
                x[p] = ech.reduced[(i, cols + k)].clone();
            }
            g.apply(&x)
        })
        .collect();
    Ok(Factorization::Factors(Matrix::from_cols(g.rows(), &h_cols)))
}

pub fn vector_to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn row_reduce_examples() {
        let id = row_reduce(&Matrix::identity(3));
        assert_eq!(id.rank, 3);
        assert_eq!(row_reduce(&Matrix::zeros(2, 4)).rank, 0);
        let r = row_reduce(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.reduced, m(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel(&Matrix::identity(3)).dim(), 0);
        assert_eq!(kernel(&Matrix::zeros(2, 2)).dim(), 2);
        let k = kernel(&m(&[&[1, 1, 1]]));
        assert_eq!(k.dim(), 2);
        for v in k.basis() {
            assert!(is_zero_vector(&m(&[&[1, 1, 1]]).apply(v)));
        }
    }

    #[test]
    fn quotient_examples() {
        let total = Subspace::full(3);
        let sub = Subspace::span(3, [vec![q(1, 1), q(0, 1), q(0, 1)]]);
        let qs = quotient(&total, &sub).unwrap();
        assert_eq!(qs.dim(), 2);
        assert!(is_zero_vector(&qs.project(sub.basis()[0].clone())));
        assert_eq!(qs.projection_matrix().mul(&qs.section_matrix()), Matrix::identity(2));

        let triv = quotient(&total, &Subspace::zero(3)).unwrap();
        assert_eq!(triv.projection_matrix().rank(), 3);
        assert_eq!(quotient(&total, &total).unwrap().dim(), 0);

        let line = Subspace::span(3, [vec![q(1, 1), q(1, 1), q(0, 1)]]);
        let e3 = Subspace::span(3, [unit_vector(3, 2)]);
        assert!(matches!(quotient(&line, &e3), Err(Error::NotContained)));
    }

    #[test]
    fn factor_through_examples() {
        let id = Matrix::identity(2);
        assert_eq!(factor_through(&id, &id).unwrap(), Factorization::Factors(id.clone()));

        let sum = m(&[&[1, 1]]);
        let zero = Matrix::zeros(1, 2);
        assert_eq!(factor_through(&sum, &zero).unwrap(), Factorization::Factors(Matrix::zeros(1, 1)));

        let diff = m(&[&[1, -1]]);
        match factor_through(&sum, &diff).unwrap() {
            Factorization::Obstructed { witness, image } => {
                // (1,-1) up to scale
                assert!(witness[0] == -&witness[1] && !witness[0].is_zero());
                assert!(is_zero_vector(&sum.apply(&witness)));
                assert_eq!(image, diff.apply(&witness));
                assert!(!is_zero_vector(&image));
            }
            other => panic!("expected obstruction, got {other:?}"),
        }

        assert!(matches!(
            factor_through(&Matrix::zeros(1, 2), &zero),
            Err(Error::NotSurjective { .. })
        ));
    }

    #[test]
    fn subspace_insert_keeps_rref() {
        let mut s = Subspace::zero(3);
        assert!(s.insert(vec![q(0, 1), q(2, 1), q(4, 1)]));
        assert!(s.insert(vec![q(1, 1), q(1, 1), q(1, 1)]));
        assert!(!s.insert(vec![q(1, 1), q(3, 1), q(5, 1)]));
        assert_eq!(s.pivots(), &[0, 1]);
        assert_eq!(s.basis()[0], vec![q(1, 1), q(0, 1), q(-1, 1)]);
        assert_eq!(s.basis()[1], vec![q(0, 1), q(1, 1), q(2, 1)]);
        let v = vec![q(2, 1), q(1, 1), q(0, 1)];
        assert_eq!(s.coords(&v), Some(vec![q(2, 1), q(1, 1)]));
    }

    #[test]
    fn solve_inconsistent() {
        assert_eq!(solve(&m(&[&[1, 1], &[2, 2]]), &[q(1, 1), q(3, 1)]), None);
        assert_eq!(solve(&m(&[&[1, 1], &[2, 2]]), &[q(1, 1), q(2, 1)]), Some(vec![q(1, 1), q(0, 1)]));
    }
}

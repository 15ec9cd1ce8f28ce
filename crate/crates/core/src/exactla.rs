//! Exact rational scalars and dense linear algebra over them.
//!
//! Everything here works over ℚ with arbitrary-precision integers. Matrices
//! are small (at most a few hundred columns) so a dense row-major layout is
//! used throughout. Subspaces are kept in reduced row echelon form, which
//! makes equality a plain comparison of basis matrices.

use std::fmt;
use std::ops::{Index, IndexMut};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// An exact rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("vector is not in the span of the basis")]
    NotInSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational {text:?}: {reason}")]
pub struct RationalParseError {
    pub text: String,
    pub reason: &'static str,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or `p`. A zero denominator is rejected.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let err = |reason| RationalParseError {
        text: text.to_string(),
        reason,
    };
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n = BigInt::from_str(num).map_err(|_| err("bad numerator"))?;
    let d = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| err("bad denominator"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, LinAlgError> {
        if data.len() != rows * cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, LinAlgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&x| rat(x))
            })
            .collect();
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        if v.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![Rational::zero(); self.cols];
        for (r, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                let b = &self[(r, c)];
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        if v.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), v)).collect())
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Reduced row echelon form, in place. Returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !self[(r, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(lead, p);
            let inv = self[(lead, c)].recip();
            for j in c..self.cols {
                let v = &self[(lead, j)] * &inv;
                self[(lead, j)] = v;
            }
            for r in 0..self.rows {
                if r == lead || self[(r, c)].is_zero() {
                    continue;
                }
                let f = self[(r, c)].clone();
                for j in c..self.cols {
                    if self[(lead, j)].is_zero() {
                        continue;
                    }
                    let v = &f * &self[(lead, j)];
                    self[(r, j)] -= v;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn determinant(&self) -> Result<Rational, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = &m[(r, c)] / &piv;
                for j in c..n {
                    let v = &f * &m[(c, j)];
                    m[(r, j)] -= v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rational::one();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots.last().is_some_and(|&p| p >= n) {
            return Err(LinAlgError::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = aug[(r, n + c)].clone();
            }
        }
        Ok(inv)
    }
}

/// The unique reduced row echelon form of `m`.
pub fn rref(m: &Matrix) -> Matrix {
    let mut r = m.clone();
    r.rref_in_place();
    r
}

/// Null space `{v : m·v = 0}`.
pub fn kernel(m: &Matrix) -> Subspace {
    let mut r = m.clone();
    let pivots = r.rref_in_place();
    let n = m.cols;
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); n];
        v[f] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, f)].clone();
        }
        basis.push(v);
    }
    Subspace::span(n, basis).expect("kernel vectors have the ambient length")
}

/// A linear subspace of ℚⁿ, stored by its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(ambient {}, {:?})", self.ambient_dim, self.basis)
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, LinAlgError> {
        let m = Matrix::from_rows(ambient_dim, vectors)?;
        Ok(Self::row_space(&m))
    }

    pub fn row_space(m: &Matrix) -> Self {
        let mut r = m.clone();
        let rank = r.rref_in_place().len();
        r.data.truncate(rank * r.cols);
        r.rows = rank;
        Subspace {
            ambient_dim: m.cols,
            basis: r,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    fn check_ambient(&self, n: usize) -> Result<(), LinAlgError> {
        if self.ambient_dim != n {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.ambient_dim,
                found: n,
            });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, LinAlgError> {
        self.check_ambient(v.len())?;
        let mut rows = self.basis.row_vecs();
        rows.push(v.to_vec());
        Ok(Matrix::from_rows(self.ambient_dim, rows)?.rank() == self.dim())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check_ambient(other.ambient_dim)?;
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        Subspace::span(self.ambient_dim, rows)
    }

    /// `{v : ⟨v, b⟩ = 0 for all b in self}` under the standard dot product.
    pub fn orthogonal_complement(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient_dim);
        }
        kernel(&self.basis)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        self.check_ambient(other.ambient_dim)?;
        let mut eqs = self.orthogonal_complement().basis.row_vecs();
        eqs.extend(other.orthogonal_complement().basis.row_vecs());
        if eqs.is_empty() {
            return Ok(Subspace::full(self.ambient_dim));
        }
        Ok(kernel(&Matrix::from_rows(self.ambient_dim, eqs)?))
    }
}

/// Incrementally grown echelon basis, for span-closure loops.
///
/// Rows are stored in insertion order, each normalised at its pivot and
/// reduced against all earlier pivots.
#[derive(Debug, Clone)]
pub struct EchelonBuilder {
    ambient_dim: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBuilder {
    pub fn new(ambient_dim: usize) -> Self {
        EchelonBuilder {
            ambient_dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v` if it is independent of the rows so far; returns whether it was.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector length must match ambient dimension");
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, r));
        true
    }
}

/// Coordinates with respect to a fixed list of linearly independent vectors.
///
/// The basis is not required to be in echelon form; coordinates are read off
/// a set of pivot columns and then verified against the full vector.
#[derive(Debug, Clone)]
pub struct Coordinates {
    vectors: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    pivot_inverse: Matrix,
}

impl Coordinates {
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, LinAlgError> {
        let m = Matrix::from_rows(ambient_dim, vectors.clone())?;
        let pivots = m.clone().rref_in_place();
        if pivots.len() != vectors.len() {
            return Err(LinAlgError::Singular);
        }
        let d = vectors.len();
        let mut sub = Matrix::zeros(d, d);
        for (r, v) in vectors.iter().enumerate() {
            for (c, &p) in pivots.iter().enumerate() {
                sub[(r, c)] = v[p].clone();
            }
        }
        let pivot_inverse = sub.inverse()?;
        Ok(Coordinates {
            vectors,
            pivots,
            pivot_inverse,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// Returns `c` with `v = Σ c_i · vectors[i]`, or `NotInSpan`.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        let restricted: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let c = self.pivot_inverse.vec_mul(&restricted)?;
        let mut back = vec![Rational::zero(); v.len()];
        for (ci, vec) in c.iter().zip(&self.vectors) {
            if ci.is_zero() {
                continue;
            }
            for (b, x) in back.iter_mut().zip(vec) {
                *b += ci * x;
            }
        }
        if back.as_slice() != v {
            return Err(LinAlgError::NotInSpan);
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rref_examples() {
        let z = Matrix::from_i64(&[&[0, 0], &[0, 0]]);
        assert_eq!(rref(&z), z);
        assert_eq!(
            rref(&Matrix::from_i64(&[&[2, 4], &[1, 2]])),
            Matrix::from_i64(&[&[1, 2], &[0, 0]])
        );
        assert_eq!(
            rref(&Matrix::from_i64(&[&[1, 1], &[1, 2]])),
            Matrix::identity(2)
        );
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel(&Matrix::identity(3)).is_zero());
        assert_eq!(kernel(&Matrix::zeros(2, 3)), Subspace::full(3));
        let k = kernel(&Matrix::from_i64(&[&[1, 1]]));
        assert_eq!(k, Subspace::span(2, vec![vec![rat(1), rat(-1)]]).unwrap());
    }

    #[test]
    fn intersect_examples() {
        let x = Subspace::span(2, vec![vec![rat(1), rat(1)]]).unwrap();
        assert_eq!(Subspace::full(2).intersect(&x).unwrap(), x);
        let e1 = Subspace::span(2, vec![vec![rat(1), rat(0)]]).unwrap();
        let e2 = Subspace::span(2, vec![vec![rat(0), rat(1)]]).unwrap();
        assert!(e1.intersect(&e2).unwrap().is_zero());
        let plane =
            Subspace::span(2, vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]).unwrap();
        assert_eq!(plane.intersect(&x).unwrap(), x);
        assert_eq!(
            e1.intersect(&Subspace::zero(3)),
            Err(LinAlgError::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(-3, 6)), "-1/2");
        assert_eq!(format_rational(&rat(5)), "5");
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.determinant().unwrap(), rat(1));
        assert_eq!(m.mul(&m.inverse().unwrap()).unwrap(), Matrix::identity(2));
        let s = Matrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.inverse(), Err(LinAlgError::Singular));
        assert_eq!(s.determinant().unwrap(), rat(0));
    }

    #[test]
    fn coordinates_in_nonechelon_basis() {
        let c = Coordinates::new(3, vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(1), rat(1)]])
            .unwrap();
        assert_eq!(
            c.coordinates(&[rat(2), rat(5), rat(3)]).unwrap(),
            vec![rat(2), rat(3)]
        );
        assert_eq!(
            c.coordinates(&[rat(1), rat(0), rat(0)]),
            Err(LinAlgError::NotInSpan)
        );
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                Matrix::from_vec(r, c, v.into_iter().map(rat).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            prop_assert_eq!(m.rank() + kernel(&m).dim(), m.cols());
            for v in kernel(&m).basis_vectors() {
                prop_assert!(is_zero_vector(&m.mul_vec(&v).unwrap()));
            }
        }

        #[test]
        fn rref_idempotent(m in small_matrix()) {
            let r = rref(&m);
            prop_assert_eq!(rref(&r), r.clone());
            prop_assert_eq!(Subspace::row_space(&r), Subspace::row_space(&m));
        }

        #[test]
        fn intersection_dimension_formula(a in small_matrix(), b in small_matrix()) {
            let n = a.cols();
            let b = Matrix::from_vec(b.rows(), n, (0..b.rows() * n).map(|i| b.as_slice()[i % b.as_slice().len()].clone()).collect()).unwrap();
            let sa = Subspace::row_space(&a);
            let sb = Subspace::row_space(&b);
            let i = sa.intersect(&sb).unwrap();
            let s = sa.sum(&sb).unwrap();
            prop_assert_eq!(i.dim() + s.dim(), sa.dim() + sb.dim());
            for v in i.basis_vectors() {
                prop_assert!(sa.contains(&v).unwrap() && sb.contains(&v).unwrap());
            }
        }
    }
}

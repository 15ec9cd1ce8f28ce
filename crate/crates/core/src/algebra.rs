//! Finite-dimensional associative unital algebras given by structure
//! constants, together with functional-based predicates (Frobenius,
//! symmetric, syntactic hyperplane), semisimplicity, centers and the split
//! Wedderburn block data over ℚ.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactla::{
    dot, format_rational, is_zero_vector, kernel, unit_vector, Coordinates, LinAlgError, Matrix,
    Rational, Subspace,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(Violation),
    #[error("functional is identically zero")]
    ZeroFunctional,
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("algebra does not split over Q: {0}")]
    NotSplitOverQ(String),
    #[error("block of dimension {0} is not a full matrix algebra over Q")]
    NonSquareBlock(usize),
    #[error("vectors do not span a unital subalgebra")]
    NotSubalgebra,
}

impl From<LinAlgError> for AlgebraError {
    fn from(e: LinAlgError) -> Self {
        match e {
            LinAlgError::DimensionMismatch { expected, found } => {
                AlgebraError::DimensionMismatch { expected, found }
            }
            LinAlgError::Singular | LinAlgError::NotInSpan => AlgebraError::NotSubalgebra,
        }
    }
}

/// First identity found to fail when validating structure constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    Shape(String),
    /// `(e_i e_j) e_k ≠ e_i (e_j e_k)`
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { j: usize },
    RightUnit { i: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "malformed table: {s}"),
            Violation::Associativity { i, j, k } => {
                write!(f, "associativity fails for basis triple ({i}, {j}, {k})")
            }
            Violation::LeftUnit { j } => write!(f, "unit * e_{j} != e_{j}"),
            Violation::RightUnit { i } => write!(f, "e_{i} * unit != e_{i}"),
        }
    }
}

/// Which one-sided (or two-sided) ideals to look for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

/// A linear functional on an algebra, given by its values on the basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearFunctional {
    pub coefficients: Vec<Rational>,
}

impl LinearFunctional {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        LinearFunctional { coefficients }
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.coefficients)
    }

    pub fn apply(&self, v: &[Rational]) -> Rational {
        dot(&self.coefficients, v)
    }
}

/// `e_i · e_j = Σ_k c[i][j][k] e_k`, stored densely.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinAlgebra {
    basis_names: Vec<String>,
    constants: Vec<Rational>,
    unit: Vec<Rational>,
}

impl fmt::Debug for FinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinAlgebra")
            .field("dim", &self.dim())
            .field("basis_names", &self.basis_names)
            .field(
                "unit",
                &self.unit.iter().map(format_rational).collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl FinAlgebra {
    /// Builds an algebra from a dense `n³` constant table. Only shapes are
    /// checked here; call [`FinAlgebra::validate`] for the algebra axioms.
    pub fn new(
        basis_names: Vec<String>,
        constants: Vec<Rational>,
        unit: Vec<Rational>,
    ) -> Result<Self, AlgebraError> {
        let n = basis_names.len();
        if constants.len() != n * n * n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n * n * n,
                found: constants.len(),
            });
        }
        if unit.len() != n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n,
                found: unit.len(),
            });
        }
        Ok(FinAlgebra {
            basis_names,
            constants,
            unit,
        })
    }

    /// Builds an algebra from a closure giving the coordinates of `e_i e_j`.
    pub fn from_products<F>(
        basis_names: Vec<String>,
        unit: Vec<Rational>,
        mut product: F,
    ) -> Result<Self, AlgebraError>
    where
        F: FnMut(usize, usize) -> Vec<Rational>,
    {
        let n = basis_names.len();
        let mut constants = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let p = product(i, j);
                if p.len() != n {
                    return Err(AlgebraError::DimensionMismatch {
                        expected: n,
                        found: p.len(),
                    });
                }
                constants.extend(p);
            }
        }
        Self::new(basis_names, constants, unit)
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        let n = self.dim();
        &self.constants[(i * n + j) * n + k]
    }

    /// Coordinates of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Rational] {
        let n = self.dim();
        &self.constants[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        unit_vector(self.dim(), i)
    }

    fn check_len(&self, len: usize) -> Result<(), AlgebraError> {
        if len != self.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, a: &[Rational], b: &[Rational]) -> Result<Vec<Rational>, AlgebraError> {
        self.check_len(a.len())?;
        self.check_len(b.len())?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let s = ai * bj;
                for (o, c) in out.iter_mut().zip(self.basis_product(i, j)) {
                    if !c.is_zero() {
                        *o += &s * c;
                    }
                }
            }
        }
        out
    }

    pub fn power(&self, a: &[Rational], exp: usize) -> Result<Vec<Rational>, AlgebraError> {
        self.check_len(a.len())?;
        let mut acc = self.unit.clone();
        for _ in 0..exp {
            acc = self.mul_unchecked(&acc, a);
        }
        Ok(acc)
    }

    /// Checks associativity on all basis triples and both unit laws.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j);
                for k in 0..n {
                    let left = self.mul_unchecked(ij, &self.basis_vector(k));
                    let right = self.mul_unchecked(&self.basis_vector(i), self.basis_product(j, k));
                    if left != right {
                        return Err(Violation::Associativity { i, j, k });
                    }
                }
            }
        }
        for j in 0..n {
            let e = self.basis_vector(j);
            if self.mul_unchecked(&self.unit, &e) != e {
                return Err(Violation::LeftUnit { j });
            }
            if self.mul_unchecked(&e, &self.unit) != e {
                return Err(Violation::RightUnit { i: j });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// Matrix of `x ↦ a·x`; column `j` holds the coordinates of `a·e_j`.
    pub fn left_regular(&self, a: &[Rational]) -> Result<Matrix, AlgebraError> {
        self.check_len(a.len())?;
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.mul_unchecked(a, &self.basis_vector(j));
            for (r, v) in col.into_iter().enumerate() {
                m[(r, j)] = v;
            }
        }
        Ok(m)
    }

    /// Matrix of `x ↦ x·a`, same column convention as [`FinAlgebra::left_regular`].
    pub fn right_regular(&self, a: &[Rational]) -> Result<Matrix, AlgebraError> {
        self.check_len(a.len())?;
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.mul_unchecked(&self.basis_vector(j), a);
            for (r, v) in col.into_iter().enumerate() {
                m[(r, j)] = v;
            }
        }
        Ok(m)
    }

    fn check_functional(&self, f: &LinearFunctional) -> Result<(), AlgebraError> {
        self.check_len(f.len())
    }

    /// `g[i][j] = f(e_i e_j)`.
    pub fn gram_matrix(&self, f: &LinearFunctional) -> Result<Matrix, AlgebraError> {
        self.check_functional(f)?;
        let n = self.dim();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = f.apply(self.basis_product(i, j));
            }
        }
        Ok(g)
    }

    /// The largest ideal of the requested side contained in `ker f`.
    ///
    /// Two-sided: `{a : f(e_i a e_j) = 0 ∀ i, j}`. Left: `{a : f(e_i a) = 0}`.
    /// Right: `{a : f(a e_i) = 0}`.
    pub fn largest_ideal_in_kernel(
        &self,
        f: &LinearFunctional,
        side: Side,
    ) -> Result<Subspace, AlgebraError> {
        let n = self.dim();
        let g = self.gram_matrix(f)?;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        match side {
            Side::Left => {
                for i in 0..n {
                    rows.push((0..n).map(|k| g[(i, k)].clone()).collect());
                }
            }
            Side::Right => {
                for i in 0..n {
                    rows.push((0..n).map(|k| g[(k, i)].clone()).collect());
                }
            }
            Side::TwoSided => {
                // f(e_i e_k e_j) = Σ_m c[i][k][m] g[m][j]
                for i in 0..n {
                    for j in 0..n {
                        let row = (0..n)
                            .map(|k| {
                                self.basis_product(i, k)
                                    .iter()
                                    .enumerate()
                                    .filter(|(_, c)| !c.is_zero())
                                    .fold(Rational::zero(), |acc, (m, c)| acc + c * &g[(m, j)])
                            })
                            .collect();
                        rows.push(row);
                    }
                }
            }
        }
        if rows.is_empty() {
            return Ok(Subspace::zero(n));
        }
        Ok(kernel(&Matrix::from_rows(n, rows)?))
    }

    /// `ker f` contains no nonzero left ideal and no nonzero right ideal.
    pub fn is_frobenius(&self, f: &LinearFunctional) -> Result<bool, AlgebraError> {
        Ok(self.largest_ideal_in_kernel(f, Side::Left)?.is_zero()
            && self.largest_ideal_in_kernel(f, Side::Right)?.is_zero())
    }

    /// `f(e_i e_j) = f(e_j e_i)` for all basis pairs.
    pub fn is_symmetric(&self, f: &LinearFunctional) -> Result<bool, AlgebraError> {
        let g = self.gram_matrix(f)?;
        Ok(g == g.transpose())
    }

    /// `ker f` is a hyperplane containing no nonzero two-sided ideal.
    pub fn is_syntactic_hyperplane(&self, f: &LinearFunctional) -> Result<bool, AlgebraError> {
        self.check_functional(f)?;
        if f.is_zero() {
            return Err(AlgebraError::ZeroFunctional);
        }
        Ok(self.largest_ideal_in_kernel(f, Side::TwoSided)?.is_zero())
    }

    /// `T[i][j] = tr L(e_i e_j)`, the trace form of the regular representation.
    pub fn trace_form(&self) -> Matrix {
        let can = self.canonical_form();
        self.gram_matrix(&can).expect("canonical form has matching length")
    }

    /// Dickson's criterion: in characteristic zero the algebra is semisimple
    /// iff its regular trace form is nondegenerate.
    pub fn is_semisimple(&self) -> bool {
        !self
            .trace_form()
            .determinant()
            .expect("trace form is square")
            .is_zero()
    }

    /// `λ_can(a) = tr L(a)`.
    pub fn canonical_form(&self) -> LinearFunctional {
        let n = self.dim();
        let coefficients = (0..n)
            .map(|i| (0..n).fold(Rational::zero(), |acc, j| acc + self.constant(i, j, j)))
            .collect();
        LinearFunctional::new(coefficients)
    }

    /// The center as a subspace of `A`, and as an algebra on the subspace's
    /// canonical basis.
    pub fn center(&self) -> (Subspace, FinAlgebra) {
        let n = self.dim();
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            // (a e_i - e_i a)_m = Σ_k a_k (c[k][i][m] - c[i][k][m])
            for m in 0..n {
                rows.push(
                    (0..n)
                        .map(|k| self.constant(k, i, m) - self.constant(i, k, m))
                        .collect(),
                );
            }
        }
        let sub = if rows.is_empty() {
            Subspace::zero(0)
        } else {
            kernel(&Matrix::from_rows(n, rows).expect("rows have length n"))
        };
        let names = (0..sub.dim()).map(|i| format!("z{i}")).collect();
        let alg = self
            .subalgebra(sub.basis_vectors(), names)
            .expect("the center is a unital subalgebra");
        (sub, alg)
    }

    /// The algebra structure on the span of `vectors`, which must be
    /// linearly independent, closed under multiplication and contain the unit.
    pub fn subalgebra(
        &self,
        vectors: Vec<Vec<Rational>>,
        names: Vec<String>,
    ) -> Result<FinAlgebra, AlgebraError> {
        if names.len() != vectors.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: vectors.len(),
                found: names.len(),
            });
        }
        for v in &vectors {
            self.check_len(v.len())?;
        }
        let coords = Coordinates::new(self.dim(), vectors)?;
        let unit = coords.coordinates(&self.unit)?;
        let d = coords.len();
        let mut constants = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                let p = self.mul_unchecked(&coords.vectors()[i], &coords.vectors()[j]);
                constants.extend(coords.coordinates(&p)?);
            }
        }
        FinAlgebra::new(names, constants, unit)
    }

    /// Restriction of `f` to the span of `vectors` (coefficients on that basis).
    pub fn restrict_functional(
        &self,
        f: &LinearFunctional,
        vectors: &[Vec<Rational>],
    ) -> Result<LinearFunctional, AlgebraError> {
        self.check_functional(f)?;
        Ok(LinearFunctional::new(
            vectors.iter().map(|v| f.apply(v)).collect(),
        ))
    }

    /// Central primitive idempotents and block sizes of a ℚ-split semisimple
    /// algebra.
    pub fn split_blocks(&self) -> Result<BlockData, AlgebraError> {
        if !self.is_semisimple() {
            return Err(AlgebraError::NotSemisimple);
        }
        let (sub, center) = self.center();
        let r = center.dim();
        if r == 0 {
            return Ok(BlockData {
                idempotents: vec![],
                block_dims: vec![],
                matrix_sizes: vec![],
            });
        }
        let (z, min_poly) = separating_element(&center).ok_or_else(|| {
            AlgebraError::NotSplitOverQ("no separating central element found".into())
        })?;
        let mut roots = rational_roots(&min_poly);
        roots.sort();
        if roots.len() < r {
            return Err(AlgebraError::NotSplitOverQ(format!(
                "minimal polynomial of a central element has only {} rational roots out of degree {}",
                roots.len(),
                r
            )));
        }
        let basis = sub.basis_vectors();
        let mut blocks = Vec::with_capacity(r);
        for (i, ri) in roots.iter().enumerate() {
            let mut p = center.unit.clone();
            for (j, rj) in roots.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut shifted = z.clone();
                for (s, u) in shifted.iter_mut().zip(&center.unit) {
                    *s -= u * rj;
                }
                let scale = (ri - rj).recip();
                p = center
                    .mul_unchecked(&p, &shifted)
                    .into_iter()
                    .map(|x| x * &scale)
                    .collect();
            }
            let mut in_a = vec![Rational::zero(); self.dim()];
            for (c, b) in p.iter().zip(&basis) {
                for (x, y) in in_a.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            let d = self.left_regular(&in_a)?.rank();
            let n = d.sqrt();
            if n * n != d {
                return Err(AlgebraError::NonSquareBlock(d));
            }
            blocks.push((n, d, in_a));
        }
        blocks.sort_by_key(|b| b.0);
        Ok(BlockData {
            matrix_sizes: blocks.iter().map(|b| b.0).collect(),
            block_dims: blocks.iter().map(|b| b.1).collect(),
            idempotents: blocks.into_iter().map(|b| b.2).collect(),
        })
    }
}

/// Wedderburn data of a split semisimple algebra: `A ≅ Π M_{n_i}(ℚ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockData {
    pub idempotents: Vec<Vec<Rational>>,
    pub block_dims: Vec<usize>,
    pub matrix_sizes: Vec<usize>,
}

const SEPARATING_ATTEMPTS: i64 = 64;

/// Tries `z = Σ_k t^k z_k` for `t = 1, 2, …` until the minimal polynomial of
/// `z` has degree `dim`. Returns `z` and the monic minimal polynomial
/// (coefficients from the constant term up).
fn separating_element(center: &FinAlgebra) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let r = center.dim();
    for t in 1..=SEPARATING_ATTEMPTS {
        let mut z = Vec::with_capacity(r);
        let mut c = Rational::one();
        for _ in 0..r {
            z.push(c.clone());
            c *= Rational::from_integer(BigInt::from(t));
        }
        let mut powers = vec![center.unit.clone()];
        for _ in 1..r {
            let next = center.mul_unchecked(powers.last().unwrap(), &z);
            powers.push(next);
        }
        let Ok(coords) = Coordinates::new(r, powers.clone()) else {
            continue;
        };
        let top = center.mul_unchecked(powers.last().unwrap(), &z);
        let c = coords.coordinates(&top).ok()?;
        // z^r = Σ c_k z^k  ⇒  m(t) = t^r - Σ c_k t^k
        let mut poly: Vec<Rational> = c.into_iter().map(|x| -x).collect();
        poly.push(Rational::one());
        return Some((z, poly));
    }
    None
}

const ROOT_SEARCH_LIMIT: u64 = 1_000_000_000_000;

/// Distinct rational roots of a polynomial (coefficients low to high), via
/// the rational root theorem.
pub(crate) fn rational_roots(poly: &[Rational]) -> Vec<Rational> {
    let lcm = poly
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = poly
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let mut roots = Vec::new();
    let leading_zeros = ints.iter().take_while(|c| c.is_zero()).count();
    if leading_zeros == ints.len() {
        return roots;
    }
    if leading_zeros > 0 {
        roots.push(Rational::zero());
        ints.drain(..leading_zeros);
    }
    let (Some(a0), Some(an)) = (ints.first().and_then(|x| x.abs().to_u64()), ints.last().and_then(|x| x.abs().to_u64())) else {
        return roots;
    };
    if a0 > ROOT_SEARCH_LIMIT || an > ROOT_SEARCH_LIMIT {
        return roots;
    }
    let eval = |x: &Rational| {
        ints.iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
    };
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1i64, -1] {
                let cand = Rational::new(BigInt::from(p) * sign, BigInt::from(q));
                if eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Checks that the linear map `e_i ↦ images[i]` is an algebra isomorphism
/// `alg → target`: structure constants, unit and bijectivity.
pub fn letter_isomorphism_check(
    alg: &FinAlgebra,
    target: &FinAlgebra,
    images: &[Vec<Rational>],
) -> Result<bool, AlgebraError> {
    if images.len() != alg.dim() {
        return Err(AlgebraError::DimensionMismatch {
            expected: alg.dim(),
            found: images.len(),
        });
    }
    for v in images {
        target.check_len(v.len())?;
    }
    if alg.dim() != target.dim() {
        return Ok(false);
    }
    let map = Matrix::from_rows(target.dim(), images.to_vec())?;
    if map.rank() != alg.dim() {
        return Ok(false);
    }
    let image_of = |coords: &[Rational]| map.vec_mul(coords).expect("lengths checked");
    if image_of(alg.unit()) != target.unit() {
        return Ok(false);
    }
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = target.mul_unchecked(&images[i], &images[j]);
            if lhs != image_of(alg.basis_product(i, j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Small algebras used throughout the test corpus.
pub mod corpus {
    use super::*;
    use crate::exactla::rat;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    /// ℚ itself.
    pub fn rationals() -> FinAlgebra {
        split_product(1)
    }

    /// ℚ × … × ℚ with `k` factors, basis the coordinate idempotents.
    pub fn split_product(k: usize) -> FinAlgebra {
        FinAlgebra::from_products(names("p", k), vec![rat(1); k], |i, j| {
            let mut v = vec![rat(0); k];
            if i == j {
                v[i] = rat(1);
            }
            v
        })
        .expect("shapes are consistent")
    }

    /// ℚ[x]/(x²) with basis (1, x).
    pub fn dual_numbers() -> FinAlgebra {
        FinAlgebra::from_products(
            vec!["1".into(), "x".into()],
            vec![rat(1), rat(0)],
            |i, j| match i + j {
                0 => vec![rat(1), rat(0)],
                1 => vec![rat(0), rat(1)],
                _ => vec![rat(0), rat(0)],
            },
        )
        .expect("shapes are consistent")
    }

    /// Full matrix algebra `M_n(ℚ)` with matrix-unit basis `E_ab`, ordered
    /// row-major (index `a·n + b`).
    pub fn matrix_algebra(n: usize) -> FinAlgebra {
        let d = n * n;
        let names = (0..d)
            .map(|i| format!("E{}{}", i / n + 1, i % n + 1))
            .collect();
        let mut unit = vec![rat(0); d];
        for a in 0..n {
            unit[a * n + a] = rat(1);
        }
        FinAlgebra::from_products(names, unit, |i, j| {
            let (a, b) = (i / n, i % n);
            let (c, e) = (j / n, j % n);
            let mut v = vec![rat(0); d];
            if b == c {
                v[a * n + e] = rat(1);
            }
            v
        })
        .expect("shapes are consistent")
    }

    /// Upper-triangular 2×2 matrices, basis (E11, E12, E22).
    pub fn upper_triangular() -> FinAlgebra {
        let units = [(0usize, 0usize), (0, 1), (1, 1)];
        FinAlgebra::from_products(
            vec!["E11".into(), "E12".into(), "E22".into()],
            vec![rat(1), rat(0), rat(1)],
            |i, j| {
                let (a, b) = units[i];
                let (c, e) = units[j];
                let mut v = vec![rat(0); 3];
                if b == c {
                    let k = units.iter().position(|&u| u == (a, e)).unwrap();
                    v[k] = rat(1);
                }
                v
            },
        )
        .expect("shapes are consistent")
    }

    /// `A × B` with basis the concatenation of both bases.
    pub fn direct_product(a: &FinAlgebra, b: &FinAlgebra) -> FinAlgebra {
        let (na, nb) = (a.dim(), b.dim());
        let mut names: Vec<String> = a.basis_names().iter().map(|s| format!("{s}.0")).collect();
        names.extend(b.basis_names().iter().map(|s| format!("{s}.1")));
        let mut unit = a.unit().to_vec();
        unit.extend_from_slice(b.unit());
        FinAlgebra::from_products(names, unit, |i, j| {
            let mut v = vec![rat(0); na + nb];
            if i < na && j < na {
                v[..na].clone_from_slice(a.basis_product(i, j));
            } else if i >= na && j >= na {
                v[na..].clone_from_slice(b.basis_product(i - na, j - na));
            }
            v
        })
        .expect("shapes are consistent")
    }

    /// `a ↦ coefficient of basis element k`.
    pub fn coordinate_functional(dim: usize, k: usize) -> LinearFunctional {
        LinearFunctional::new(unit_vector(dim, k))
    }

    /// Matrix trace on `M_n` in the [`matrix_algebra`] basis.
    pub fn matrix_trace(n: usize) -> LinearFunctional {
        let mut c = vec![rat(0); n * n];
        for a in 0..n {
            c[a * n + a] = rat(1);
        }
        LinearFunctional::new(c)
    }
}

#[cfg(test)]
mod tests {
    use super::corpus::*;
    use super::*;
    use crate::exactla::{rat, ratio};

    fn lf(v: &[i64]) -> LinearFunctional {
        LinearFunctional::new(v.iter().map(|&x| rat(x)).collect())
    }

    fn vecr(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    /// ℚ[ℤ/2] with basis (e, s), built locally so these tests do not depend
    /// on the groups module.
    fn z2() -> FinAlgebra {
        FinAlgebra::from_products(vec!["e".into(), "s".into()], vecr(&[1, 0]), |i, j| {
            let mut v = vecr(&[0, 0]);
            v[(i + j) % 2] = rat(1);
            v
        })
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(rationals().is_valid());
        assert!(dual_numbers().is_valid());
        let m2 = matrix_algebra(2);
        assert!(m2.is_valid());
        // c[E12][E21][E11] := 0
        let mut constants = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let mut p = m2.basis_product(i, j).to_vec();
                if i == 1 && j == 2 {
                    p[0] = rat(0);
                }
                constants.extend(p);
            }
        }
        let tampered =
            FinAlgebra::new(m2.basis_names().to_vec(), constants, m2.unit().to_vec()).unwrap();
        assert!(!tampered.is_valid());
    }

    #[test]
    fn tampered_table_reports_first_failure() {
        let m2 = matrix_algebra(2);
        let mut constants = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let mut p = m2.basis_product(i, j).to_vec();
                if i == 1 && j == 2 {
                    p[0] = rat(0);
                }
                constants.extend(p);
            }
        }
        let t = FinAlgebra::new(m2.basis_names().to_vec(), constants, m2.unit().to_vec()).unwrap();
        assert!(matches!(t.validate(), Err(Violation::Associativity { .. })));
    }

    #[test]
    fn multiply_examples() {
        let d = dual_numbers();
        let b = vecr(&[3, 5]);
        assert_eq!(d.multiply(d.unit(), &b).unwrap(), b);
        let g = z2();
        assert_eq!(g.multiply(&vecr(&[0, 1]), &vecr(&[0, 1])).unwrap(), vecr(&[1, 0]));
        let m2 = matrix_algebra(2);
        assert_eq!(
            m2.multiply(&m2.basis_vector(1), &m2.basis_vector(2)).unwrap(),
            m2.basis_vector(0)
        );
        assert!(matches!(
            m2.multiply(&vecr(&[1]), &vecr(&[1, 0, 0, 0])),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn left_regular_examples() {
        let m2 = matrix_algebra(2);
        assert_eq!(m2.left_regular(m2.unit()).unwrap(), Matrix::identity(4));
        let d = dual_numbers();
        assert_eq!(
            d.left_regular(&vecr(&[0, 1])).unwrap(),
            Matrix::from_i64(&[&[0, 0], &[1, 0]])
        );
        assert_eq!(
            z2().left_regular(&vecr(&[0, 1])).unwrap(),
            Matrix::from_i64(&[&[0, 1], &[1, 0]])
        );
    }

    #[test]
    fn largest_ideal_examples() {
        let m2 = matrix_algebra(2);
        assert!(m2
            .largest_ideal_in_kernel(&matrix_trace(2), Side::TwoSided)
            .unwrap()
            .is_zero());
        // f(a) = a11: the right ideal E21·M2 = span{E21, E22} lies in ker f.
        let f = coordinate_functional(4, 0);
        let right = m2.largest_ideal_in_kernel(&f, Side::Right).unwrap();
        assert!(right.contains(&m2.basis_vector(2)).unwrap());
        assert!(right.contains(&m2.basis_vector(3)).unwrap());
        assert_eq!(right.dim(), 2);
        let d = dual_numbers();
        let two = d.largest_ideal_in_kernel(&lf(&[1, 0]), Side::TwoSided).unwrap();
        assert_eq!(two, Subspace::span(2, vec![vecr(&[0, 1])]).unwrap());
    }

    #[test]
    fn frobenius_examples() {
        let m2 = matrix_algebra(2);
        assert!(m2.is_frobenius(&matrix_trace(2)).unwrap());
        assert!(!m2.is_frobenius(&coordinate_functional(4, 0)).unwrap());
        assert!(dual_numbers().is_frobenius(&lf(&[0, 1])).unwrap());
        assert!(!dual_numbers().is_frobenius(&lf(&[1, 0])).unwrap());
    }

    #[test]
    fn symmetric_examples() {
        assert!(matrix_algebra(2).is_symmetric(&matrix_trace(2)).unwrap());
        assert!(z2().is_symmetric(&lf(&[1, 0])).unwrap());
        // upper triangular with f = E12-coefficient
        assert!(!upper_triangular().is_symmetric(&lf(&[0, 1, 0])).unwrap());
    }

    #[test]
    fn hyperplane_examples() {
        let m2 = matrix_algebra(2);
        assert!(m2.is_syntactic_hyperplane(&coordinate_functional(4, 0)).unwrap());
        assert!(!dual_numbers().is_syntactic_hyperplane(&lf(&[1, 0])).unwrap());
        assert!(split_product(2).is_syntactic_hyperplane(&lf(&[1, 1])).unwrap());
        assert_eq!(
            split_product(2).is_syntactic_hyperplane(&lf(&[0, 0])),
            Err(AlgebraError::ZeroFunctional)
        );
    }

    #[test]
    fn semisimple_examples() {
        assert!(matrix_algebra(2).is_semisimple());
        assert!(!dual_numbers().is_semisimple());
        assert!(!upper_triangular().is_semisimple());
        // independent: tr L(g) = |G|·[g = e], so T = 2·I for ℤ/2
        let t = z2().trace_form();
        assert_eq!(t, Matrix::from_i64(&[&[2, 0], &[0, 2]]));
        assert_eq!(t.determinant().unwrap(), rat(4));
        assert!(z2().is_semisimple());
    }

    #[test]
    fn center_examples() {
        let (sub, alg) = split_product(3).center();
        assert_eq!(sub, Subspace::full(3));
        assert_eq!(alg.dim(), 3);
        let m2 = matrix_algebra(2);
        let (sub, alg) = m2.center();
        assert_eq!(sub.dim(), 1);
        assert!(sub.contains(m2.unit()).unwrap());
        assert!(alg.is_valid());
        assert_eq!(alg.unit(), &[rat(1)]);
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(rationals().canonical_form(), lf(&[1]));
        assert_eq!(matrix_algebra(2).canonical_form(), lf(&[2, 0, 0, 2]));
        assert_eq!(dual_numbers().canonical_form(), lf(&[2, 0]));
        assert!(!dual_numbers()
            .is_frobenius(&dual_numbers().canonical_form())
            .unwrap());
    }

    #[test]
    fn split_blocks_examples() {
        let b = split_product(3).split_blocks().unwrap();
        assert_eq!(b.matrix_sizes, vec![1, 1, 1]);
        let b = matrix_algebra(2).split_blocks().unwrap();
        assert_eq!(b.matrix_sizes, vec![2]);
        assert_eq!(b.idempotents, vec![matrix_algebra(2).unit().to_vec()]);
        assert_eq!(
            dual_numbers().split_blocks(),
            Err(AlgebraError::NotSemisimple)
        );
        let prod = direct_product(&matrix_algebra(2), &rationals());
        let b = prod.split_blocks().unwrap();
        assert_eq!(b.matrix_sizes, vec![1, 2]);
        assert_eq!(b.block_dims, vec![1, 4]);
    }

    #[test]
    fn quadratic_field_does_not_split() {
        // ℚ(√2) = ℚ[t]/(t² - 2)
        let q = FinAlgebra::from_products(vec!["1".into(), "t".into()], vecr(&[1, 0]), |i, j| {
            match i + j {
                0 => vecr(&[1, 0]),
                1 => vecr(&[0, 1]),
                _ => vecr(&[2, 0]),
            }
        })
        .unwrap();
        assert!(q.is_semisimple());
        assert!(matches!(
            q.split_blocks(),
            Err(AlgebraError::NotSplitOverQ(_))
        ));
    }

    #[test]
    fn rational_roots_finds_fractions() {
        // (2t - 1)(t + 3) t = 2t³ + 5t² - 3t
        let p = vec![rat(0), rat(-3), rat(5), rat(2)];
        let mut r = rational_roots(&p);
        r.sort();
        assert_eq!(r, vec![rat(-3), rat(0), ratio(1, 2)]);
        assert!(rational_roots(&[rat(-2), rat(0), rat(1)]).is_empty());
    }

    #[test]
    fn letter_isomorphism_examples() {
        let g = z2();
        let id: Vec<_> = (0..2).map(|i| g.basis_vector(i)).collect();
        assert!(letter_isomorphism_check(&g, &g, &id).unwrap());
        let qq = split_product(2);
        assert!(letter_isomorphism_check(&g, &qq, &[vecr(&[1, 1]), vecr(&[1, -1])]).unwrap());
        assert!(!letter_isomorphism_check(&g, &qq, &[vecr(&[1, 1]), vecr(&[1, 1])]).unwrap());
    }

    #[test]
    fn commutative_hyperplane_matches_frobenius() {
        let d = dual_numbers();
        for f in [lf(&[1, 0]), lf(&[0, 1]), lf(&[1, 1]), lf(&[2, -3])] {
            assert_eq!(
                d.is_syntactic_hyperplane(&f).unwrap(),
                d.is_frobenius(&f).unwrap()
            );
        }
    }
}

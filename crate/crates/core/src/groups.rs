//! Finite groups given by Cayley tables, their group algebras, and a
//! brute-force count of homomorphisms from closed surface groups.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{FinAlgebra, LinearFunctional};
use crate::exactla::Rational;

/// Default cap on `|G|^(2g)` for [`FiniteGroup::count_surface_homs`].
pub const DEFAULT_HOM_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group: {0}")]
    InvalidGroup(GroupViolation),
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalogEntry(String),
    #[error("parameter {param} too large for {name}")]
    ParameterTooLarge { name: String, param: usize },
    #[error("enumeration of {needed} tuples exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum GroupViolation {
    Shape(String),
    NotLatinSquare { row: usize, col: usize },
    Identity,
    NoInverse { element: usize },
    Associativity { a: usize, b: usize, c: usize },
}

impl fmt::Display for GroupViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupViolation::Shape(s) => write!(f, "malformed table: {s}"),
            GroupViolation::NotLatinSquare { row, col } => {
                write!(f, "entry ({row}, {col}) repeats a value in its row or column")
            }
            GroupViolation::Identity => write!(f, "identity row/column is not the identity"),
            GroupViolation::NoInverse { element } => write!(f, "element {element} has no inverse"),
            GroupViolation::Associativity { a, b, c } => {
                write!(f, "associativity fails for ({a}, {b}, {c})")
            }
        }
    }
}

/// Form used to turn `ℚ[G]` into a Frobenius algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupForm {
    /// `λ(Σ a_g g) = a_e`
    Delta,
    /// `λ(Σ a_g g) = a_e / |G|`
    Dw,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
}

impl FiniteGroup {
    /// Wraps a table without checking the group axioms.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>, identity: usize) -> Self {
        FiniteGroup {
            names,
            table,
            identity,
        }
    }

    /// Like [`FiniteGroup::new`], locating the identity from the table. Falls
    /// back to index 0 when no row acts as identity (validation then fails).
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Self {
        let n = names.len();
        let identity = (0..n)
            .find(|&i| {
                table.get(i).is_some_and(|row| {
                    row.len() == n && row.iter().enumerate().all(|(j, &x)| x == j)
                })
            })
            .unwrap_or(0);
        Self::new(names, table, identity)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.table[a][b] == self.identity)
            .expect("valid group has inverses")
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn validate(&self) -> Result<(), GroupViolation> {
        let n = self.order();
        if n == 0 {
            return Err(GroupViolation::Shape("empty group".into()));
        }
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(GroupViolation::Shape(format!("table is not {n}x{n}")));
        }
        if self.identity >= n {
            return Err(GroupViolation::Identity);
        }
        for r in 0..n {
            let mut seen_row = vec![false; n];
            for c in 0..n {
                let v = self.table[r][c];
                if v >= n || seen_row[v] {
                    return Err(GroupViolation::NotLatinSquare { row: r, col: c });
                }
                seen_row[v] = true;
            }
        }
        for c in 0..n {
            let mut seen_col = vec![false; n];
            for r in 0..n {
                let v = self.table[r][c];
                if seen_col[v] {
                    return Err(GroupViolation::NotLatinSquare { row: r, col: c });
                }
                seen_col[v] = true;
            }
        }
        let e = self.identity;
        if (0..n).any(|j| self.table[e][j] != j || self.table[j][e] != j) {
            return Err(GroupViolation::Identity);
        }
        for a in 0..n {
            if !(0..n).any(|b| self.table[a][b] == e && self.table[b][a] == e) {
                return Err(GroupViolation::NoInverse { element: a });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a][b];
                for c in 0..n {
                    if self.table[ab][c] != self.table[a][self.table[b][c]] {
                        return Err(GroupViolation::Associativity { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    fn ensure_valid(&self) -> Result<(), GroupError> {
        self.validate().map_err(GroupError::InvalidGroup)
    }

    pub fn conjugacy_class_count(&self) -> usize {
        let n = self.order();
        let mut class = vec![usize::MAX; n];
        let mut count = 0;
        for x in 0..n {
            if class[x] != usize::MAX {
                continue;
            }
            for g in 0..n {
                let y = self.mul(self.mul(g, x), self.inverse(g));
                class[y] = count;
            }
            count += 1;
        }
        count
    }

    /// `ℚ[G]` on the basis of group elements, with the requested form.
    pub fn group_algebra(
        &self,
        form: GroupForm,
    ) -> Result<(FinAlgebra, LinearFunctional), GroupError> {
        self.ensure_valid()?;
        let n = self.order();
        let mut unit = vec![Rational::zero(); n];
        unit[self.identity] = Rational::one();
        let alg = FinAlgebra::from_products(self.names.clone(), unit, |i, j| {
            let mut v = vec![Rational::zero(); n];
            v[self.table[i][j]] = Rational::one();
            v
        })
        .expect("shapes are consistent");
        let value = match form {
            GroupForm::Delta => Rational::one(),
            GroupForm::Dw => Rational::new(1.into(), (n as i64).into()),
        };
        let mut coefficients = vec![Rational::zero(); n];
        coefficients[self.identity] = value;
        Ok((alg, LinearFunctional::new(coefficients)))
    }

    /// `|{(a₁,b₁,…,a_g,b_g) ∈ G^{2g} : Π [a_i, b_i] = e}|`.
    pub fn count_surface_homs(&self, genus: usize, budget: u64) -> Result<u128, GroupError> {
        self.ensure_valid()?;
        if genus == 0 {
            return Ok(1);
        }
        let n = self.order() as u128;
        let needed = (0..2 * genus).try_fold(1u128, |acc, _| acc.checked_mul(n));
        match needed {
            Some(k) if k <= budget as u128 => {}
            _ => {
                return Err(GroupError::BudgetExceeded {
                    needed: needed.unwrap_or(u128::MAX),
                    budget,
                })
            }
        }
        let order = self.order();
        let inv: Vec<usize> = (0..order).map(|a| self.inverse(a)).collect();
        let comm: Vec<Vec<usize>> = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| self.mul(self.mul(a, b), self.mul(inv[a], inv[b])))
                    .collect()
            })
            .collect();
        Ok(self.enumerate_handles(&comm, self.identity, genus))
    }

    /// Counts handle tuples whose commutator product, started at `prefix`,
    /// returns to the identity.
    fn enumerate_handles(&self, comm: &[Vec<usize>], prefix: usize, remaining: usize) -> u128 {
        if remaining == 0 {
            return u128::from(prefix == self.identity);
        }
        let mut count = 0;
        for row in comm {
            for &c in row {
                count += self.enumerate_handles(comm, self.mul(prefix, c), remaining - 1);
            }
        }
        count
    }
}

/// Catalog groups with fixed element orderings.
pub fn catalog(name: &str, param: usize) -> Result<FiniteGroup, GroupError> {
    match name {
        "cyclic" => {
            if param == 0 {
                return Err(GroupError::ParameterTooLarge {
                    name: name.into(),
                    param,
                });
            }
            Ok(cyclic(param))
        }
        "symmetric" => {
            if param == 0 || param > 4 {
                return Err(GroupError::ParameterTooLarge {
                    name: name.into(),
                    param,
                });
            }
            Ok(symmetric(param))
        }
        "klein" => Ok(klein()),
        other => Err(GroupError::UnknownCatalogEntry(other.into())),
    }
}

/// `ℤ/n` with elements `g^0, …, g^{n-1}`.
pub fn cyclic(n: usize) -> FiniteGroup {
    let names = (0..n)
        .map(|i| match i {
            0 => "e".to_string(),
            1 => "g".to_string(),
            _ => format!("g{i}"),
        })
        .collect();
    let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroup::new(names, table, 0)
}

/// `ℤ/2 × ℤ/2` ordered `e, a, b, ab`.
pub fn klein() -> FiniteGroup {
    let names = ["e", "a", "b", "ab"].iter().map(|s| s.to_string()).collect();
    let table = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
    FiniteGroup::new(names, table, 0)
}

/// `S_n` on lexicographically ordered one-line permutations; product is
/// composition `(σ·τ)(i) = σ(τ(i))`.
pub fn symmetric(n: usize) -> FiniteGroup {
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    permutations(&mut current, 0, &mut perms);
    perms.sort();
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
    let names = perms
        .iter()
        .map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<String>())
        .collect();
    let table = perms
        .iter()
        .map(|s| {
            perms
                .iter()
                .map(|t| index(&t.iter().map(|&i| s[i]).collect()))
                .collect()
        })
        .collect();
    FiniteGroup::new(names, table, 0)
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// `ℚ[G]` with its form, for catalog convenience in tests.
pub fn group_algebra_of(g: &FiniteGroup, form: GroupForm) -> (FinAlgebra, LinearFunctional) {
    g.group_algebra(form).expect("catalog groups are valid")
}

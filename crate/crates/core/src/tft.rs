//! Two-dimensional TFT computations on closed oriented surfaces.
//!
//! Surfaces are Δ-complexes: `F` triangles whose `3F` edge slots are glued
//! in pairs. Slot `3t + p` is the edge of triangle `t` running from corner
//! `p` to corner `p + 1 (mod 3)`, counterclockwise. Two paired slots are
//! always glued head-to-tail, so every pairing describes an oriented
//! surface.
//!
//! The lattice state sum contracts one triangle tensor
//! `C_abc = λ(e_a e_b e_c)` per face with one inverse metric `g^ab` per edge,
//! where `λ` is the regular trace form. For semisimple algebras the result
//! is invariant under Pachner moves.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, FinAlgebra, LinearFunctional};
use crate::exactla::{LinAlgError, Matrix, Rational};

/// Default cap on scalar multiplications in [`state_sum`].
pub const DEFAULT_CONTRACTION_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TftError {
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("slot {0} is not glued to any other slot")]
    NotClosed(usize),
    #[error("surface is not connected")]
    NotConnected,
    #[error("invalid move site: {0}")]
    InvalidMoveSite(String),
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("contraction needs {needed} multiplications, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A closed oriented surface glued from triangles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triangulation {
    pairing: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariantReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub euler_characteristic: i64,
    pub genus: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

impl Triangulation {
    /// Builds a triangulation from slot pairs. Every slot `0..3F` must occur
    /// in exactly one pair, never paired with itself.
    pub fn new(triangle_count: usize, pairs: &[(usize, usize)]) -> Result<Self, TftError> {
        let slots = 3 * triangle_count;
        let mut pairing = vec![usize::MAX; slots];
        for &(a, b) in pairs {
            if a >= slots || b >= slots {
                return Err(TftError::InvalidPairing(format!(
                    "slot {} out of range for {triangle_count} triangles",
                    a.max(b)
                )));
            }
            if a == b {
                return Err(TftError::InvalidPairing(format!("slot {a} paired with itself")));
            }
            for s in [a, b] {
                if pairing[s] != usize::MAX {
                    return Err(TftError::InvalidPairing(format!("slot {s} paired twice")));
                }
            }
            pairing[a] = b;
            pairing[b] = a;
        }
        if let Some(s) = pairing.iter().position(|&p| p == usize::MAX) {
            return Err(TftError::NotClosed(s));
        }
        Ok(Triangulation { pairing })
    }

    /// Glues faces given as counterclockwise vertex triples, matching each
    /// directed edge `u → v` with the opposite edge `v → u`.
    pub fn from_oriented_faces(faces: &[[usize; 3]]) -> Result<Self, TftError> {
        let mut pairs = Vec::new();
        let edge = |s: usize| {
            let f = faces[s / 3];
            (f[s % 3], f[(s % 3 + 1) % 3])
        };
        for s in 0..3 * faces.len() {
            let (u, v) = edge(s);
            let matches: Vec<usize> = (0..3 * faces.len()).filter(|&r| edge(r) == (v, u)).collect();
            if matches.len() != 1 {
                return Err(TftError::InvalidPairing(format!(
                    "directed edge {v}->{u} occurs {} times",
                    matches.len()
                )));
            }
            if s < matches[0] {
                pairs.push((s, matches[0]));
            }
        }
        Self::new(faces.len(), &pairs)
    }

    pub fn triangle_count(&self) -> usize {
        self.pairing.len() / 3
    }

    pub fn edge_count(&self) -> usize {
        self.pairing.len() / 2
    }

    pub fn partner(&self, slot: usize) -> usize {
        self.pairing[slot]
    }

    /// Each glued pair once, smaller slot first.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.pairing
            .iter()
            .enumerate()
            .filter(|&(s, &p)| s < p)
            .map(|(s, &p)| (s, p))
            .collect()
    }

    pub fn analyze(&self) -> Result<SurfaceInvariantReport, TftError> {
        let f = self.triangle_count();
        let mut faces = UnionFind::new(f);
        let mut corners = UnionFind::new(3 * f);
        for (s, &r) in self.pairing.iter().enumerate() {
            let (t, p) = (s / 3, s % 3);
            let (u, q) = (r / 3, r % 3);
            faces.union(t, u);
            // head-to-tail: corner p of t meets corner q+1 of u, and p+1 meets q
            corners.union(3 * t + p, 3 * u + (q + 1) % 3);
            corners.union(3 * t + (p + 1) % 3, 3 * u + q);
        }
        if f == 0 || faces.classes() != 1 {
            return Err(TftError::NotConnected);
        }
        let v = corners.classes();
        let e = self.edge_count();
        let chi = v as i64 - e as i64 + f as i64;
        Ok(SurfaceInvariantReport {
            vertex_count: v,
            edge_count: e,
            face_count: f,
            euler_characteristic: chi,
            genus: ((2 - chi) / 2) as usize,
        })
    }

    /// Tetrahedron boundary for genus 0; the fan triangulation of the
    /// `4g`-gon with boundary word `a₁b₁a₁⁻¹b₁⁻¹⋯` otherwise.
    pub fn standard(genus: usize) -> Self {
        if genus == 0 {
            return Self::from_oriented_faces(&[[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
                .expect("tetrahedron faces are consistently oriented");
        }
        let sides = 4 * genus;
        let f = sides - 2;
        // fan triangle i (0-based) has corners (0, i+1, i+2)
        let polygon_slot = |edge: usize| -> usize {
            if edge == 0 {
                0
            } else if edge == sides - 1 {
                3 * (f - 1) + 2
            } else {
                3 * (edge - 1) + 1
            }
        };
        let mut pairs = Vec::new();
        for i in 0..f - 1 {
            pairs.push((3 * i + 2, 3 * (i + 1)));
        }
        for h in 0..genus {
            pairs.push((polygon_slot(4 * h), polygon_slot(4 * h + 2)));
            pairs.push((polygon_slot(4 * h + 1), polygon_slot(4 * h + 3)));
        }
        Self::new(f, &pairs).expect("fan pairing is a perfect matching")
    }

    /// Replaces triangle `t` by three triangles around a new vertex.
    pub fn pachner_13(&self, t: usize) -> Result<Self, TftError> {
        let f = self.triangle_count();
        if t >= f {
            return Err(TftError::InvalidMoveSite(format!("no triangle {t}")));
        }
        // A = (x, y, c) keeps index t, B = (y, z, c) is f, C = (z, x, c) is f+1
        let (a, b, c) = (3 * t, 3 * f, 3 * (f + 1));
        let relocate = |s: usize| match s {
            _ if s == 3 * t => a,
            _ if s == 3 * t + 1 => b,
            _ if s == 3 * t + 2 => c,
            _ => s,
        };
        let mut pairing = vec![usize::MAX; 3 * (f + 2)];
        for (s, &r) in self.pairing.iter().enumerate() {
            pairing[relocate(s)] = relocate(r);
        }
        for (u, v) in [(a + 1, b + 2), (b + 1, c + 2), (c + 1, a + 2)] {
            pairing[u] = v;
            pairing[v] = u;
        }
        Ok(Triangulation { pairing })
    }

    /// Flips the edge glued at `slot`, which must join two distinct triangles.
    pub fn pachner_22(&self, slot: usize) -> Result<Self, TftError> {
        if slot >= self.pairing.len() {
            return Err(TftError::InvalidMoveSite(format!("no slot {slot}")));
        }
        let other = self.pairing[slot];
        let (t, p) = (slot / 3, slot % 3);
        let (u, q) = (other / 3, other % 3);
        if t == u {
            return Err(TftError::InvalidMoveSite(format!(
                "slot {slot} is glued to its own triangle"
            )));
        }
        // t = (x, y, z) with slot x→y; u = (y, x, w) with slot y→x.
        let t_yz = 3 * t + (p + 1) % 3;
        let t_zx = 3 * t + (p + 2) % 3;
        let u_xw = 3 * u + (q + 1) % 3;
        let u_wy = 3 * u + (q + 2) % 3;
        // new t = (z, x, w): z→x, x→w, w→z;  new u = (w, y, z): w→y, y→z, z→w
        let relocate = |s: usize| match s {
            _ if s == t_zx => 3 * t,
            _ if s == u_xw => 3 * t + 1,
            _ if s == u_wy => 3 * u,
            _ if s == t_yz => 3 * u + 1,
            _ => s,
        };
        let mut pairing = self.pairing.clone();
        for s in [t_yz, t_zx, u_xw, u_wy] {
            pairing[relocate(s)] = relocate(self.pairing[s]);
        }
        for s in (0..self.pairing.len()).filter(|&s| s / 3 != t && s / 3 != u) {
            pairing[s] = relocate(self.pairing[s]);
        }
        pairing[3 * t + 2] = 3 * u + 2;
        pairing[3 * u + 2] = 3 * t + 2;
        Ok(Triangulation { pairing })
    }

    /// Slots whose edge joins two different triangles.
    pub fn flippable_slots(&self) -> Vec<usize> {
        (0..self.pairing.len())
            .filter(|&s| s / 3 != self.pairing[s] / 3)
            .collect()
    }
}

/// Dense tensor with one leg per label, every leg of the same dimension.
#[derive(Debug, Clone)]
struct Tensor {
    labels: Vec<usize>,
    data: Vec<Rational>,
}

impl Tensor {
    fn permuted(&self, order: &[usize], n: usize) -> Tensor {
        let k = self.labels.len();
        let pos: Vec<usize> = order
            .iter()
            .map(|l| self.labels.iter().position(|x| x == l).expect("label present"))
            .collect();
        let mut strides = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * n;
        }
        let mut data = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; k];
        for _ in 0..self.data.len() {
            let src: usize = pos.iter().zip(&idx).map(|(&p, &i)| strides[p] * i).sum();
            data.push(self.data[src].clone());
            for d in (0..k).rev() {
                idx[d] += 1;
                if idx[d] < n {
                    break;
                }
                idx[d] = 0;
            }
        }
        Tensor {
            labels: order.to_vec(),
            data,
        }
    }

    /// Sums over every label that occurs twice on this tensor.
    fn self_traced(self, n: usize) -> Tensor {
        let mut t = self;
        while let Some(l) = t
            .labels
            .iter()
            .enumerate()
            .find(|(i, l)| t.labels[i + 1..].contains(l))
            .map(|(_, &l)| l)
        {
            let mut order: Vec<usize> = t.labels.clone();
            let first = order.iter().position(|&x| x == l).unwrap();
            order.remove(first);
            let second = order.iter().position(|&x| x == l).unwrap();
            order.remove(second);
            let rest = order.clone();
            // give the duplicate a temporary distinct name for permutation
            let tmp = usize::MAX;
            let mut labels = t.labels.clone();
            let dup = labels.iter().rposition(|&x| x == l).unwrap();
            labels[dup] = tmp;
            let renamed = Tensor {
                labels,
                data: t.data,
            };
            order.push(l);
            order.push(tmp);
            let p = renamed.permuted(&order, n);
            let outer = p.data.len() / (n * n);
            let data = (0..outer)
                .map(|o| {
                    (0..n).fold(Rational::zero(), |acc, i| {
                        acc + &p.data[o * n * n + i * n + i]
                    })
                })
                .collect();
            t = Tensor { labels: rest, data };
        }
        t
    }

    fn contract(&self, other: &Tensor, n: usize) -> Tensor {
        let shared: Vec<usize> = self
            .labels
            .iter()
            .copied()
            .filter(|l| other.labels.contains(l))
            .collect();
        let free_a: Vec<usize> = self
            .labels
            .iter()
            .copied()
            .filter(|l| !shared.contains(l))
            .collect();
        let free_b: Vec<usize> = other
            .labels
            .iter()
            .copied()
            .filter(|l| !shared.contains(l))
            .collect();
        let mut order_a = free_a.clone();
        order_a.extend(&shared);
        let mut order_b = shared.clone();
        order_b.extend(&free_b);
        let a = self.permuted(&order_a, n);
        let b = other.permuted(&order_b, n);
        let s = n.pow(shared.len() as u32);
        let ra = a.data.len() / s;
        let cb = b.data.len() / s;
        let ma = Matrix::from_vec(ra, s, a.data).expect("sizes agree");
        let mb = Matrix::from_vec(s, cb, b.data).expect("sizes agree");
        let mut labels = free_a;
        labels.extend(free_b);
        Tensor {
            labels,
            data: ma.mul(&mb).expect("inner sizes agree").into_vec(),
        }
    }
}

/// Greedy pairwise order: repeatedly contract the two tensors sharing a
/// label whose result has the fewest legs. Returns the order and its cost
/// in scalar multiplications.
fn plan_contraction(mut legs: Vec<Vec<usize>>, n: usize) -> (Vec<(usize, usize)>, u128) {
    let n = n as u128;
    let dedup = |v: &Vec<usize>| {
        let mut out: Vec<usize> = Vec::new();
        for &l in v {
            if v.iter().filter(|&&x| x == l).count() == 1 {
                out.push(l);
            }
        }
        out
    };
    let mut cost: u128 = 0;
    for l in legs.iter_mut() {
        if l.len() != dedup(l).len() {
            cost = cost.saturating_add(n.saturating_pow(l.len() as u32));
        }
        *l = dedup(l);
    }
    let mut steps = Vec::new();
    while legs.len() > 1 {
        let mut best: Option<((bool, usize, usize), usize, usize)> = None;
        for i in 0..legs.len() {
            for j in i + 1..legs.len() {
                let shared = legs[i].iter().filter(|l| legs[j].contains(l)).count();
                let result = legs[i].len() + legs[j].len() - 2 * shared;
                let union = legs[i].len() + legs[j].len() - shared;
                let key = (shared == 0, result, union);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, i, j));
                }
            }
        }
        let ((_, _, union), i, j) = best.expect("at least two tensors");
        cost = cost.saturating_add(n.saturating_pow(union as u32));
        let mut merged = legs[i].clone();
        merged.extend(legs[j].iter().copied());
        let merged = dedup(&merged);
        legs.remove(j);
        legs[i] = merged;
        steps.push((i, j));
    }
    (steps, cost)
}

/// The lattice state sum of `alg` on `t` with the regular trace form.
pub fn state_sum(alg: &FinAlgebra, t: &Triangulation, budget: u128) -> Result<Rational, TftError> {
    t.analyze()?;
    if !alg.is_semisimple() {
        return Err(TftError::NotSemisimple);
    }
    let n = alg.dim();
    let f = t.triangle_count();
    let (steps, cost) = plan_contraction(
        (0..f).map(|i| edge_labels(t, i)).collect(),
        n,
    );
    // absorbing g^ab into triangle legs costs n per entry per absorbed leg
    let absorb_cost = (t.edge_count() as u128).saturating_mul((n as u128).saturating_pow(4));
    let needed = cost.saturating_add(absorb_cost);
    if needed > budget {
        return Err(TftError::BudgetExceeded { needed, budget });
    }
    let lambda = alg.canonical_form();
    let g = alg.gram_matrix(&lambda)?;
    let ginv = g.inverse().map_err(|e| match e {
        LinAlgError::Singular => TftError::NotSemisimple,
        other => TftError::Algebra(other.into()),
    })?;
    // C_abc = Σ_m c[a][b][m] g[m][c]
    let mut cabc = vec![Rational::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for (m, c) in alg.basis_product(a, b).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for x in 0..n {
                    let gv = &g[(m, x)];
                    if !gv.is_zero() {
                        cabc[(a * n + b) * n + x] += c * gv;
                    }
                }
            }
        }
    }
    let mut tensors: Vec<Tensor> = (0..f)
        .map(|i| {
            let mut data = cabc.clone();
            // raise each leg whose slot is the smaller of its pair
            for p in 0..3 {
                let s = 3 * i + p;
                if s < t.partner(s) {
                    data = raise_leg(&data, p, &ginv, n);
                }
            }
            Tensor {
                labels: edge_labels(t, i),
                data,
            }
            .self_traced(n)
        })
        .collect();
    for (i, j) in steps {
        let b = tensors.remove(j);
        let merged = tensors[i].contract(&b, n).self_traced(n);
        tensors[i] = merged;
    }
    let last = tensors.pop().expect("surface has triangles");
    debug_assert!(last.labels.is_empty());
    Ok(last.data[0].clone())
}

fn edge_labels(t: &Triangulation, i: usize) -> Vec<usize> {
    (0..3)
        .map(|p| {
            let s = 3 * i + p;
            s.min(t.partner(s))
        })
        .collect()
}

/// Contracts leg `p` of a 3-leg tensor with the (symmetric) matrix `m`.
fn raise_leg(data: &[Rational], p: usize, m: &Matrix, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = &data[(a * n + b) * n + c];
                if v.is_zero() {
                    continue;
                }
                let idx = [a, b, c];
                for x in 0..n {
                    let w = &m[(idx[p], x)];
                    if w.is_zero() {
                        continue;
                    }
                    let mut j = idx;
                    j[p] = x;
                    out[(j[0] * n + j[1]) * n + j[2]] += v * w;
                }
            }
        }
    }
    out
}

/// `h = Σ g^{ij} e_i e_j` for the metric `g_ij = f(e_i e_j)`.
pub fn handle_element(alg: &FinAlgebra, f: &LinearFunctional) -> Result<Vec<Rational>, TftError> {
    let g = alg.gram_matrix(f)?;
    let ginv = g.inverse().map_err(|_| TftError::DegenerateForm)?;
    let n = alg.dim();
    let mut h = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let w = &ginv[(i, j)];
            if w.is_zero() {
                continue;
            }
            for (x, c) in h.iter_mut().zip(alg.basis_product(i, j)) {
                *x += w * c;
            }
        }
    }
    Ok(h)
}

/// `f(h^genus)` for a commutative Frobenius pair.
pub fn closed_invariant(
    alg: &FinAlgebra,
    f: &LinearFunctional,
    genus: usize,
) -> Result<Rational, TftError> {
    if !alg.is_commutative() {
        return Err(TftError::NotCommutative);
    }
    let h = handle_element(alg, f)?;
    Ok(f.apply(&alg.power(&h, genus)?))
}

/// The center with the restriction of the regular trace form.
pub fn closed_sector(alg: &FinAlgebra) -> Result<(FinAlgebra, LinearFunctional), TftError> {
    if !alg.is_semisimple() {
        return Err(TftError::NotSemisimple);
    }
    let (sub, center) = alg.center();
    let f = alg.restrict_functional(&alg.canonical_form(), &sub.basis_vectors())?;
    Ok((center, f))
}

/// `Σ_i n_i^{2-2g}` for block sizes `n_i`.
pub fn block_sum(matrix_sizes: &[usize], genus: usize) -> Rational {
    matrix_sizes.iter().fold(Rational::zero(), |acc, &n| {
        let base = Rational::from_integer((n as i64).into());
        let term = if genus == 0 {
            &base * &base
        } else {
            let mut p = Rational::one();
            for _ in 0..2 * (genus - 1) {
                p *= &base;
            }
            p.recip()
        };
        acc + term
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::corpus;
    use crate::exactla::{rat, ratio};
    use crate::groups::{cyclic, GroupForm};

    const B: u128 = DEFAULT_CONTRACTION_BUDGET;

    #[test]
    fn analyze_examples() {
        let torus = Triangulation::standard(1);
        let r = torus.analyze().unwrap();
        assert_eq!((r.vertex_count, r.edge_count, r.face_count), (1, 3, 2));
        assert_eq!((r.euler_characteristic, r.genus), (0, 1));
        let r = Triangulation::standard(0).analyze().unwrap();
        assert_eq!((r.vertex_count, r.edge_count, r.face_count), (4, 6, 4));
        assert_eq!(r.genus, 0);
        let r = Triangulation::standard(2).analyze().unwrap();
        assert_eq!((r.vertex_count, r.edge_count, r.face_count), (1, 9, 6));
        assert_eq!((r.euler_characteristic, r.genus), (-2, 2));
    }

    #[test]
    fn standard_sizes() {
        assert_eq!(Triangulation::standard(0).triangle_count(), 4);
        let t = Triangulation::standard(1);
        assert_eq!((t.triangle_count(), t.edge_count()), (2, 3));
        let t = Triangulation::standard(2);
        assert_eq!((t.triangle_count(), t.edge_count()), (6, 9));
        assert_eq!(Triangulation::standard(3).analyze().unwrap().genus, 3);
    }

    #[test]
    fn malformed_pairings() {
        assert!(matches!(
            Triangulation::new(2, &[(0, 3), (1, 4)]),
            Err(TftError::NotClosed(_))
        ));
        assert!(matches!(
            Triangulation::new(2, &[(0, 0)]),
            Err(TftError::InvalidPairing(_))
        ));
        assert!(matches!(
            Triangulation::new(2, &[(0, 1), (1, 2)]),
            Err(TftError::InvalidPairing(_))
        ));
        // two disjoint 2-triangle spheres
        let pairs = [(0, 5), (1, 4), (2, 3), (6, 11), (7, 10), (8, 9)];
        let t = Triangulation::new(4, &pairs).unwrap();
        assert_eq!(t.analyze(), Err(TftError::NotConnected));
    }

    #[test]
    fn pachner_examples() {
        let t = Triangulation::standard(0).pachner_13(0).unwrap();
        let r = t.analyze().unwrap();
        assert_eq!((r.face_count, r.euler_characteristic), (6, 2));
        let torus = Triangulation::standard(1);
        let flipped = torus.pachner_22(2).unwrap();
        let r = flipped.analyze().unwrap();
        assert_eq!((r.face_count, r.genus), (2, 1));
        let mut s = Triangulation::standard(2);
        s = s.pachner_13(3).unwrap();
        s = s.pachner_22(s.flippable_slots()[4]).unwrap();
        s = s.pachner_22(s.flippable_slots()[1]).unwrap();
        assert_eq!(s.analyze().unwrap().genus, 2);
        assert!(matches!(
            torus.pachner_13(5),
            Err(TftError::InvalidMoveSite(_))
        ));
    }

    #[test]
    fn pachner_22_rejects_self_glued_edge() {
        // a sphere from two triangles glued along all sides has no
        // self-glued slot, so glue one triangle's edge to itself's sibling
        let t = Triangulation::new(2, &[(0, 1), (2, 5), (3, 4)]).unwrap();
        assert!(matches!(t.pachner_22(0), Err(TftError::InvalidMoveSite(_))));
    }

    #[test]
    fn state_sum_examples() {
        let q = corpus::rationals();
        for g in 0..3 {
            assert_eq!(state_sum(&q, &Triangulation::standard(g), B).unwrap(), rat(1));
        }
        let qq = corpus::split_product(2);
        assert_eq!(state_sum(&qq, &Triangulation::standard(1), B).unwrap(), rat(2));
        let m2 = corpus::matrix_algebra(2);
        assert_eq!(
            state_sum(&m2, &Triangulation::standard(2), B).unwrap(),
            ratio(1, 4)
        );
        assert_eq!(
            state_sum(&corpus::dual_numbers(), &Triangulation::standard(1), B),
            Err(TftError::NotSemisimple)
        );
        assert!(matches!(
            state_sum(&m2, &Triangulation::standard(2), 10),
            Err(TftError::BudgetExceeded { .. })
        ));
    }

    /// Direct sum over all index assignments on the 2-triangle torus.
    #[test]
    fn torus_contraction_matches_brute_force() {
        let alg = corpus::direct_product(&corpus::matrix_algebra(2), &corpus::rationals());
        let n = alg.dim();
        let lambda = alg.canonical_form();
        let g = alg.gram_matrix(&lambda).unwrap();
        let ginv = g.inverse().unwrap();
        let t = Triangulation::standard(1);
        let c = |a: usize, b: usize, x: usize| {
            let ab = alg.multiply(&alg.basis_vector(a), &alg.basis_vector(b)).unwrap();
            lambda.apply(&alg.multiply(&ab, &alg.basis_vector(x)).unwrap())
        };
        let mut total = rat(0);
        let slots = 6;
        for code in 0..n.pow(slots as u32) {
            let idx: Vec<usize> = (0..slots).map(|s| code / n.pow(s as u32) % n).collect();
            let mut term = c(idx[0], idx[1], idx[2]) * c(idx[3], idx[4], idx[5]);
            for (s, r) in t.pairs() {
                term *= &ginv[(idx[s], idx[r])];
            }
            total += term;
        }
        assert_eq!(state_sum(&alg, &t, B).unwrap(), total);
        assert_eq!(total, rat(2));
    }

    #[test]
    fn handle_element_examples() {
        let q = corpus::rationals();
        assert_eq!(
            handle_element(&q, &LinearFunctional::new(vec![rat(1)])).unwrap(),
            vec![rat(1)]
        );
        let (z2, delta) = cyclic(2).group_algebra(GroupForm::Delta).unwrap();
        assert_eq!(handle_element(&z2, &delta).unwrap(), vec![rat(2), rat(0)]);
        let qq = corpus::split_product(2);
        assert_eq!(
            handle_element(&qq, &LinearFunctional::new(vec![rat(1), rat(1)])).unwrap(),
            vec![rat(1), rat(1)]
        );
        assert_eq!(
            handle_element(&corpus::dual_numbers(), &LinearFunctional::new(vec![rat(1), rat(0)])),
            Err(TftError::DegenerateForm)
        );
    }

    #[test]
    fn closed_invariant_examples() {
        let (z2, dw) = cyclic(2).group_algebra(GroupForm::Dw).unwrap();
        assert_eq!(closed_invariant(&z2, &dw, 1).unwrap(), rat(2));
        assert_eq!(closed_invariant(&z2, &dw, 2).unwrap(), rat(8));
        let (z3, dw3) = cyclic(3).group_algebra(GroupForm::Dw).unwrap();
        assert_eq!(closed_invariant(&z3, &dw3, 1).unwrap(), rat(3));
        let m2 = corpus::matrix_algebra(2);
        assert_eq!(
            closed_invariant(&m2, &corpus::matrix_trace(2), 1),
            Err(TftError::NotCommutative)
        );
    }

    #[test]
    fn closed_sector_examples() {
        let (z, f) = closed_sector(&corpus::matrix_algebra(2)).unwrap();
        assert_eq!(z.dim(), 1);
        assert_eq!(f.apply(z.unit()), rat(4));
        let (z, f) = closed_sector(&corpus::split_product(2)).unwrap();
        assert_eq!(z.dim(), 2);
        assert_eq!(f.coefficients, vec![rat(1), rat(1)]);
        assert_eq!(
            closed_sector(&corpus::dual_numbers()),
            Err(TftError::NotSemisimple)
        );
    }

    #[test]
    fn block_sum_values() {
        assert_eq!(block_sum(&[1, 1, 2], 2), ratio(9, 4));
        assert_eq!(block_sum(&[1, 1, 2], 0), rat(6));
        assert_eq!(block_sum(&[2], 1), rat(1));
    }

    fn scrambled(genus: usize, seed: usize) -> Vec<Triangulation> {
        let base = Triangulation::standard(genus);
        let mut out = vec![base.clone()];
        let mut t = base;
        for k in 0..3 {
            let slots = t.flippable_slots();
            t = t.pachner_22(slots[(seed * 7 + k * 5) % slots.len()]).unwrap();
            if k == 1 {
                t = t.pachner_13((seed + k) % t.triangle_count()).unwrap();
            }
            out.push(t.clone());
        }
        out
    }

    #[test]
    fn pachner_invariance_on_group_algebras() {
        use crate::groups::symmetric;
        let algs = [
            cyclic(2).group_algebra(GroupForm::Delta).unwrap().0,
            symmetric(3).group_algebra(GroupForm::Delta).unwrap().0,
        ];
        for alg in &algs {
            let sizes = alg.split_blocks().unwrap().matrix_sizes;
            for genus in 0..3 {
                for (seed, t) in scrambled(genus, 3).iter().enumerate() {
                    assert_eq!(t.analyze().unwrap().genus, genus);
                    assert_eq!(
                        state_sum(alg, t, B).unwrap(),
                        block_sum(&sizes, genus),
                        "genus {genus} variant {seed}"
                    );
                }
            }
        }
    }

    #[test]
    fn commutative_state_sum_matches_closed_invariant() {
        let (z3, _) = cyclic(3).group_algebra(GroupForm::Delta).unwrap();
        let alg = corpus::split_product(3);
        for a in [&z3, &alg] {
            let lambda = a.canonical_form();
            for genus in 0..3 {
                assert_eq!(
                    state_sum(a, &Triangulation::standard(genus), B).unwrap(),
                    closed_invariant(a, &lambda, genus).unwrap()
                );
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn random_moves_preserve_genus_and_state_sum(
            genus in 0usize..3,
            moves in proptest::collection::vec((proptest::bool::ANY, 0usize..1000), 1..5),
        ) {
            let alg = corpus::direct_product(&corpus::matrix_algebra(2), &corpus::rationals());
            let mut t = Triangulation::standard(genus);
            let expected = block_sum(&[1, 2], genus);
            for (flip, k) in moves {
                t = if flip {
                    let slots = t.flippable_slots();
                    t.pachner_22(slots[k % slots.len()]).unwrap()
                } else {
                    t.pachner_13(k % t.triangle_count()).unwrap()
                };
                proptest::prop_assert_eq!(t.analyze().unwrap().genus, genus);
            }
            proptest::prop_assert_eq!(state_sum(&alg, &t, B).unwrap(), expected);
        }
    }
}

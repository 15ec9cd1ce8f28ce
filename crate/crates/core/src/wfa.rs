//! Weighted finite automata over ℚ as linear representations `(λ, μ, γ)`
//! with `S(w) = λ · μ(w₁) ⋯ μ(w_m) · γ`.
//!
//! Besides evaluation this module provides Schützenberger reduction to the
//! Hankel rank, equivalence testing, extraction of the syntactic algebra as
//! the span of word images of the minimal representation, and the two
//! constructions going the other way: the series `λ ∘ j_a` attached to an
//! algebra with a functional, and the characteristic series of a DFA.

use std::collections::VecDeque;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{FinAlgebra, LinearFunctional, Violation};
use crate::codes::Dfa;
use crate::exactla::{dot, Coordinates, EchelonBuilder, Matrix, Rational};
use crate::word::{Alphabet, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WfaError {
    #[error(transparent)]
    UnknownSymbol(#[from] WordError),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("inconsistent dimensions: {0}")]
    Shape(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(Violation),
    #[error("automaton has no transition from state {state} on {symbol:?}")]
    IncompleteAutomaton { state: usize, symbol: String },
}

/// A weighted automaton over ℚ in matrix form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRepresentation {
    alphabet: Alphabet,
    initial: Vec<Rational>,
    transitions: Vec<Matrix>,
    final_weights: Vec<Rational>,
}

impl LinearRepresentation {
    pub fn new(
        alphabet: Alphabet,
        initial: Vec<Rational>,
        transitions: Vec<Matrix>,
        final_weights: Vec<Rational>,
    ) -> Result<Self, WfaError> {
        let n = initial.len();
        if final_weights.len() != n {
            return Err(WfaError::Shape(format!(
                "initial has {n} entries, final has {}",
                final_weights.len()
            )));
        }
        if transitions.len() != alphabet.len() {
            return Err(WfaError::Shape(format!(
                "{} transition matrices for {} symbols",
                transitions.len(),
                alphabet.len()
            )));
        }
        if let Some(m) = transitions.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(WfaError::Shape(format!(
                "transition matrix is {}x{}, expected {n}x{n}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(LinearRepresentation {
            alphabet,
            initial,
            transitions,
            final_weights,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.initial.len()
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn transitions(&self) -> &[Matrix] {
        &self.transitions
    }

    pub fn transition(&self, letter: usize) -> &Matrix {
        &self.transitions[letter]
    }

    pub fn final_weights(&self) -> &[Rational] {
        &self.final_weights
    }

    /// The constant series `S_w = 1`.
    pub fn constant_one(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Self::new(
            alphabet,
            vec![Rational::one()],
            vec![Matrix::identity(1); k],
            vec![Rational::one()],
        )
        .expect("shapes are consistent")
    }

    /// The zero series on `dim` states.
    pub fn zero(alphabet: Alphabet, dim: usize) -> Self {
        let k = alphabet.len();
        Self::new(
            alphabet,
            vec![Rational::zero(); dim],
            vec![Matrix::identity(dim); k],
            vec![Rational::zero(); dim],
        )
        .expect("shapes are consistent")
    }

    /// `λ · μ(w)`, the state vector after reading `w`.
    pub fn state_after(&self, word: &[usize]) -> Result<Vec<Rational>, WfaError> {
        self.alphabet.check(word)?;
        let mut v = self.initial.clone();
        for &a in word {
            v = self.transitions[a].vec_mul(&v).expect("square transitions");
        }
        Ok(v)
    }

    pub fn evaluate(&self, word: &[usize]) -> Result<Rational, WfaError> {
        Ok(dot(&self.state_after(word)?, &self.final_weights))
    }

    pub fn evaluate_symbols<S: AsRef<str>>(&self, symbols: &[S]) -> Result<Rational, WfaError> {
        let w = self.alphabet.word_of(symbols)?;
        self.evaluate(&w)
    }

    /// `μ(w)` as a matrix (identity for the empty word).
    pub fn word_matrix(&self, word: &[usize]) -> Result<Matrix, WfaError> {
        self.alphabet.check(word)?;
        let mut m = Matrix::identity(self.dim());
        for &a in word {
            m = m.mul(&self.transitions[a]).expect("square transitions");
        }
        Ok(m)
    }

    /// Representation of `w ↦ S(reverse(w))`, obtained by transposing.
    pub fn reversed(&self) -> Self {
        LinearRepresentation {
            alphabet: self.alphabet.clone(),
            initial: self.final_weights.clone(),
            transitions: self.transitions.iter().map(Matrix::transpose).collect(),
            final_weights: self.initial.clone(),
        }
    }

    /// Restricts to the span of reachable state vectors `{λ μ(w)}`.
    fn reachable_part(&self) -> Self {
        let n = self.dim();
        let mut span = EchelonBuilder::new(n);
        let mut basis: Vec<Vec<Rational>> = Vec::new();
        let mut queue = VecDeque::new();
        if span.insert(&self.initial) {
            basis.push(self.initial.clone());
            queue.push_back(0);
        }
        while let Some(i) = queue.pop_front() {
            for m in &self.transitions {
                let next = m.vec_mul(&basis[i]).expect("square transitions");
                if span.insert(&next) {
                    basis.push(next);
                    queue.push_back(basis.len() - 1);
                }
            }
        }
        let k = basis.len();
        if k == 0 {
            return Self::zero(self.alphabet.clone(), 0);
        }
        let coords = Coordinates::new(n, basis.clone()).expect("basis is independent");
        let initial = coords.coordinates(&self.initial).expect("λ is in the span");
        let transitions = self
            .transitions
            .iter()
            .map(|m| {
                let rows = basis
                    .iter()
                    .map(|b| {
                        coords
                            .coordinates(&m.vec_mul(b).expect("square transitions"))
                            .expect("span is closed under transitions")
                    })
                    .collect();
                Matrix::from_rows(k, rows).expect("rows have length k")
            })
            .collect();
        let final_weights = basis.iter().map(|b| dot(b, &self.final_weights)).collect();
        LinearRepresentation {
            alphabet: self.alphabet.clone(),
            initial,
            transitions,
            final_weights,
        }
    }

    /// Schützenberger reduction: a representation of the same series whose
    /// dimension is the rank of the Hankel matrix.
    pub fn minimize(&self) -> Self {
        self.reachable_part().reversed().reachable_part().reversed()
    }

    /// Exact series equality, decided by minimising the difference.
    pub fn equivalent(&self, other: &Self) -> Result<bool, WfaError> {
        Ok(self.difference(other)?.minimize().dim() == 0)
    }

    /// Block-diagonal representation of `self - other`.
    pub fn difference(&self, other: &Self) -> Result<Self, WfaError> {
        if self.alphabet != other.alphabet {
            return Err(WfaError::AlphabetMismatch);
        }
        let (n1, n2) = (self.dim(), other.dim());
        let n = n1 + n2;
        let mut initial = self.initial.clone();
        initial.extend(other.initial.iter().map(|x| -x));
        let mut final_weights = self.final_weights.clone();
        final_weights.extend(other.final_weights.iter().cloned());
        let transitions = self
            .transitions
            .iter()
            .zip(&other.transitions)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(n, n);
                for r in 0..n1 {
                    for c in 0..n1 {
                        m[(r, c)] = a[(r, c)].clone();
                    }
                }
                for r in 0..n2 {
                    for c in 0..n2 {
                        m[(n1 + r, n1 + c)] = b[(r, c)].clone();
                    }
                }
                m
            })
            .collect();
        Self::new(self.alphabet.clone(), initial, transitions, final_weights)
    }

    /// The syntactic algebra of the series, as the linear span of the word
    /// images `μ(w)` of the minimal representation.
    pub fn syntactic_algebra(&self) -> SyntacticPresentation {
        let min = self.minimize();
        let n = min.dim();
        let flat = |m: &Matrix| m.as_slice().to_vec();
        let mut span = EchelonBuilder::new(n * n);
        let mut words: Vec<Word> = Vec::new();
        let mut mats: Vec<Matrix> = Vec::new();
        let id = Matrix::identity(n);
        if span.insert(&flat(&id)) {
            words.push(Vec::new());
            mats.push(id);
        }
        let mut next = 0;
        while next < mats.len() {
            for (a, mu) in min.transitions.iter().enumerate() {
                let m = mats[next].mul(mu).expect("square transitions");
                if span.insert(&flat(&m)) {
                    let mut w = words[next].clone();
                    w.push(a);
                    words.push(w);
                    mats.push(m);
                }
            }
            next += 1;
        }
        let d = mats.len();
        let coords = Coordinates::new(n * n, mats.iter().map(flat).collect())
            .expect("closure basis is independent");
        let coord = |m: &Matrix| {
            coords
                .coordinates(m.as_slice())
                .expect("word images lie in the closure")
        };
        let mut constants = Vec::with_capacity(d * d * d);
        for a in &mats {
            for b in &mats {
                constants.extend(coord(&a.mul(b).expect("square")));
            }
        }
        let unit = if d == 0 { Vec::new() } else { coord(&Matrix::identity(n)) };
        let names = words
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "1".to_string()
                } else {
                    // basis names must stay free of whitespace
                    min.alphabet.format_word(w).replace(' ', ".")
                }
            })
            .collect();
        let algebra = FinAlgebra::new(names, constants, unit).expect("shapes are consistent");
        let letter_images = if d == 0 {
            vec![Vec::new(); min.alphabet.len()]
        } else {
            min.transitions.iter().map(coord).collect()
        };
        let functional = LinearFunctional::new(
            mats.iter()
                .map(|m| {
                    dot(
                        &m.vec_mul(&min.initial).expect("square"),
                        &min.final_weights,
                    )
                })
                .collect(),
        );
        SyntacticPresentation {
            algebra,
            letter_images,
            functional,
            basis_words: words,
            minimal: min,
        }
    }

    /// Exchangeable iff the letter images commute in the syntactic algebra.
    pub fn is_exchangeable(&self) -> bool {
        self.syntactic_algebra().is_commutative_on_letters()
    }

    /// The series `w ↦ f(a_{w₁} ⋯ a_{w_m})` on one letter per basis element.
    pub fn series_from_algebra(alg: &FinAlgebra, f: &LinearFunctional) -> Result<Self, WfaError> {
        alg.validate().map_err(WfaError::InvalidAlgebra)?;
        let n = alg.dim();
        if f.len() != n {
            return Err(WfaError::Shape(format!(
                "functional has {} coefficients for an algebra of dimension {n}",
                f.len()
            )));
        }
        let alphabet = Alphabet::new(alg.basis_names().iter().cloned())
            .or_else(|_| Alphabet::new((1..=n).map(|i| format!("x{i}"))))
            .map_err(|e| WfaError::Shape(e.to_string()))?;
        // row-vector convention: state v ↦ v · a_i, so μ(x_i)[j][k] = c[j][i][k]
        let transitions = (0..n)
            .map(|i| {
                let mut m = Matrix::zeros(n, n);
                for j in 0..n {
                    for k in 0..n {
                        m[(j, k)] = alg.constant(j, i, k).clone();
                    }
                }
                m
            })
            .collect();
        Self::new(
            alphabet,
            alg.unit().to_vec(),
            transitions,
            f.coefficients.clone(),
        )
    }

    /// The characteristic series of the language of a complete DFA.
    pub fn char_series(dfa: &Dfa) -> Result<Self, WfaError> {
        let n = dfa.states();
        let alphabet = dfa.alphabet().clone();
        let mut transitions = vec![Matrix::zeros(n, n); alphabet.len()];
        for q in 0..n {
            for (a, m) in transitions.iter_mut().enumerate() {
                let Some(r) = dfa.transition(q, a) else {
                    return Err(WfaError::IncompleteAutomaton {
                        state: q,
                        symbol: alphabet.symbol(a).to_string(),
                    });
                };
                m[(q, r)] = Rational::one();
            }
        }
        let mut initial = vec![Rational::zero(); n];
        initial[dfa.start()] = Rational::one();
        let final_weights = (0..n)
            .map(|q| {
                if dfa.is_accepting(q) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Self::new(alphabet, initial, transitions, final_weights)
    }
}

/// The syntactic algebra `k⟨X⟩/I_S` of a rational series with the canonical
/// epimorphism on letters and the induced functional `λ̄`, `S = λ̄ ∘ π`.
#[derive(Debug, Clone)]
pub struct SyntacticPresentation {
    pub algebra: FinAlgebra,
    /// Coordinates of `π(x)` for each letter, in alphabet order.
    pub letter_images: Vec<Vec<Rational>>,
    pub functional: LinearFunctional,
    /// The word whose image is each basis element.
    pub basis_words: Vec<Word>,
    /// The minimal representation the algebra was read off from.
    pub minimal: LinearRepresentation,
}

impl SyntacticPresentation {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `π(w)` as coordinates.
    pub fn image_of(&self, word: &[usize]) -> Vec<Rational> {
        word.iter()
            .fold(self.algebra.unit().to_vec(), |acc, &a| {
                self.algebra.mul_unchecked(&acc, &self.letter_images[a])
            })
    }

    pub fn is_commutative_on_letters(&self) -> bool {
        let k = self.letter_images.len();
        (0..k).all(|a| {
            (a + 1..k).all(|b| {
                let (x, y) = (&self.letter_images[a], &self.letter_images[b]);
                self.algebra.mul_unchecked(x, y) == self.algebra.mul_unchecked(y, x)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::corpus;
    use crate::exactla::rat;
    use crate::groups;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn counting() -> LinearRepresentation {
        LinearRepresentation::new(
            ab(),
            vec![rat(1), rat(0)],
            vec![Matrix::from_i64(&[&[1, 1], &[0, 1]]), Matrix::identity(2)],
            vec![rat(0), rat(1)],
        )
        .unwrap()
    }

    fn padded_constant() -> LinearRepresentation {
        // state 0 carries the series; states 1, 2 are unreachable or dead
        let m = Matrix::from_i64(&[&[1, 0, 0], &[1, 2, 0], &[0, 0, 3]]);
        LinearRepresentation::new(
            ab(),
            vec![rat(1), rat(0), rat(0)],
            vec![m.clone(), m],
            vec![rat(1), rat(5), rat(0)],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let one = LinearRepresentation::constant_one(ab());
        assert_eq!(one.evaluate(&[0, 1, 1, 0]).unwrap(), rat(1));
        let c = counting();
        assert_eq!(c.evaluate_symbols(&["a", "a", "b"]).unwrap(), rat(2));
        assert_eq!(c.evaluate(&[]).unwrap(), rat(0));
        assert!(matches!(
            c.evaluate_symbols(&["c"]),
            Err(WfaError::UnknownSymbol(_))
        ));
        assert!(c.evaluate(&[7]).is_err());
    }

    #[test]
    fn minimize_examples() {
        assert_eq!(padded_constant().minimize().dim(), 1);
        assert_eq!(counting().minimize().dim(), 2);
        assert_eq!(LinearRepresentation::zero(ab(), 4).minimize().dim(), 0);
    }

    #[test]
    fn equivalent_examples() {
        let c = counting();
        assert!(c.equivalent(&c).unwrap());
        let one = LinearRepresentation::constant_one(ab());
        assert!(!one.equivalent(&LinearRepresentation::zero(ab(), 1)).unwrap());
        assert!(one.equivalent(&padded_constant()).unwrap());
        let other = LinearRepresentation::constant_one(Alphabet::new(["a"]).unwrap());
        assert_eq!(one.equivalent(&other), Err(WfaError::AlphabetMismatch));
    }

    #[test]
    fn syntactic_algebra_examples() {
        let one = LinearRepresentation::constant_one(ab()).syntactic_algebra();
        assert_eq!(one.dim(), 1);
        assert_eq!(one.functional.coefficients, vec![rat(1)]);

        let c = counting().syntactic_algebra();
        assert_eq!(c.dim(), 2);
        assert!(c.algebra.is_valid());
        assert!(c.algebra.is_commutative());
        assert!(!c.algebra.is_semisimple());

        let z2 = groups::cyclic(2);
        let dfa = crate::codes::group_star_dfa(&z2).unwrap();
        let p = LinearRepresentation::char_series(&dfa).unwrap().syntactic_algebra();
        assert_eq!(p.dim(), 2);
        let (qg, _) = z2.group_algebra(groups::GroupForm::Delta).unwrap();
        assert!(crate::algebra::letter_isomorphism_check(&qg, &p.algebra, &p.letter_images).unwrap());
    }

    #[test]
    fn zero_series_has_zero_algebra() {
        let p = LinearRepresentation::zero(ab(), 3).syntactic_algebra();
        assert_eq!(p.dim(), 0);
        assert!(p.is_commutative_on_letters());
    }

    #[test]
    fn exchangeable_examples() {
        assert!(counting().is_exchangeable());
        assert!(LinearRepresentation::constant_one(ab()).is_exchangeable());
        let starts_with_a = crate::codes::Dfa::new(
            ab(),
            vec![vec![Some(1), Some(2)], vec![Some(1), Some(1)], vec![Some(2), Some(2)]],
            0,
            vec![1],
        )
        .unwrap();
        let s = LinearRepresentation::char_series(&starts_with_a).unwrap();
        assert_eq!(s.evaluate(&[0, 1]).unwrap(), rat(1));
        assert_eq!(s.evaluate(&[1, 0]).unwrap(), rat(0));
        assert!(!s.is_exchangeable());
    }

    #[test]
    fn series_from_algebra_examples() {
        let q = corpus::rationals();
        let s = LinearRepresentation::series_from_algebra(&q, &LinearFunctional::new(vec![rat(1)]))
            .unwrap();
        for w in s.alphabet().words_up_to(3) {
            assert_eq!(s.evaluate(&w).unwrap(), rat(1));
        }
        let (z2, delta) = groups::cyclic(2).group_algebra(groups::GroupForm::Delta).unwrap();
        let s = LinearRepresentation::series_from_algebra(&z2, &delta).unwrap();
        assert_eq!(s.evaluate(&[1, 1]).unwrap(), rat(1));
        assert_eq!(s.evaluate(&[1]).unwrap(), rat(0));
        let s = LinearRepresentation::series_from_algebra(
            &corpus::matrix_algebra(2),
            &corpus::matrix_trace(2),
        )
        .unwrap();
        assert_eq!(s.evaluate_symbols(&["E12", "E21"]).unwrap(), rat(1));

        let broken = crate::algebra::FinAlgebra::new(
            vec!["u".into()],
            vec![rat(2)],
            vec![rat(1)],
        )
        .unwrap();
        assert!(matches!(
            LinearRepresentation::series_from_algebra(&broken, &LinearFunctional::new(vec![rat(1)])),
            Err(WfaError::InvalidAlgebra(_))
        ));
    }

    #[test]
    fn char_series_requires_complete_dfa() {
        let all = crate::codes::Dfa::new(ab(), vec![vec![Some(0), Some(0)]], 0, vec![0]).unwrap();
        let s = LinearRepresentation::char_series(&all).unwrap();
        assert!(s.equivalent(&LinearRepresentation::constant_one(ab())).unwrap());
        let partial = crate::codes::Dfa::new(ab(), vec![vec![Some(0), None]], 0, vec![0]).unwrap();
        assert!(matches!(
            LinearRepresentation::char_series(&partial),
            Err(WfaError::IncompleteAutomaton { .. })
        ));
    }

    #[test]
    fn presentation_reproduces_series() {
        for rep in [counting(), padded_constant()] {
            let p = rep.syntactic_algebra();
            let bound = 2 * rep.dim() + 1;
            for w in rep.alphabet().words_up_to(bound.min(6)) {
                assert_eq!(p.functional.apply(&p.image_of(&w)), rep.evaluate(&w).unwrap());
            }
        }
    }
}

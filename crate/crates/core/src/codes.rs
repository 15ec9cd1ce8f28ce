//! Codes over finite alphabets: unique decipherability of finite languages,
//! prefix/suffix tests for finite and rational languages, and the group code
//! `C_G` whose star is the set of words multiplying to the identity.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::letter_isomorphism_check;
use crate::groups::{FiniteGroup, GroupError, GroupForm};
use crate::wfa::{LinearRepresentation, WfaError};
use crate::word::{Alphabet, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("languages may not contain the empty word")]
    EmptyWord,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("malformed automaton: {0}")]
    Shape(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Wfa(#[from] WfaError),
}

/// A finite set of nonempty words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLanguage {
    alphabet: Alphabet,
    words: BTreeSet<Word>,
}

impl FiniteLanguage {
    pub fn new(alphabet: Alphabet, words: impl IntoIterator<Item = Word>) -> Result<Self, CodeError> {
        let mut set = BTreeSet::new();
        for w in words {
            if w.is_empty() {
                return Err(CodeError::EmptyWord);
            }
            alphabet.check(&w)?;
            set.insert(w);
        }
        Ok(FiniteLanguage {
            alphabet,
            words: set,
        })
    }

    /// Parses each entry with [`Alphabet::parse_word`].
    pub fn parse(alphabet: Alphabet, words: &[&str]) -> Result<Self, CodeError> {
        let parsed = words
            .iter()
            .map(|w| alphabet.parse_word(w))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(alphabet, parsed)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sardinas–Patterson: the language is a code iff no set of dangling
    /// suffixes ever contains the empty word.
    pub fn is_code(&self) -> bool {
        let c: Vec<&Word> = self.words.iter().collect();
        // U_1 = C⁻¹C \ {ε}
        let mut current: BTreeSet<Word> = BTreeSet::new();
        for u in &c {
            for v in &c {
                if u != v && v.starts_with(u) {
                    current.insert(v[u.len()..].to_vec());
                }
            }
        }
        let mut seen: BTreeSet<BTreeSet<Word>> = BTreeSet::new();
        loop {
            if current.contains(&Vec::new()) {
                return false;
            }
            if current.is_empty() || !seen.insert(current.clone()) {
                return true;
            }
            // U_{n+1} = C⁻¹U_n ∪ U_n⁻¹C
            let mut next = BTreeSet::new();
            for u in &current {
                for w in &c {
                    if u.starts_with(w) {
                        next.insert(u[w.len()..].to_vec());
                    }
                    if w.starts_with(u) {
                        next.insert(w[u.len()..].to_vec());
                    }
                }
            }
            current = next;
        }
    }

    pub fn is_prefix(&self) -> bool {
        !self
            .words
            .iter()
            .any(|u| self.words.iter().any(|v| u != v && v.starts_with(u)))
    }

    pub fn is_suffix(&self) -> bool {
        !self
            .words
            .iter()
            .any(|u| self.words.iter().any(|v| u != v && v.ends_with(u)))
    }

    pub fn is_biprefix(&self) -> bool {
        self.is_prefix() && self.is_suffix()
    }
}

/// A deterministic automaton. Missing transitions (`None`) go to an implicit
/// rejecting sink; [`LinearRepresentation::char_series`] insists on a
/// complete table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    transitions: Vec<Vec<Option<usize>>>,
    start: usize,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        transitions: Vec<Vec<Option<usize>>>,
        start: usize,
        accepting: impl IntoIterator<Item = usize>,
    ) -> Result<Self, CodeError> {
        let n = transitions.len();
        if start >= n {
            return Err(CodeError::Shape(format!("start state {start} out of range")));
        }
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(CodeError::Shape(format!(
                    "state {q} has {} transitions for {} symbols",
                    row.len(),
                    alphabet.len()
                )));
            }
            if let Some(r) = row.iter().flatten().find(|&&r| r >= n) {
                return Err(CodeError::Shape(format!("target state {r} out of range")));
            }
        }
        let mut acc = vec![false; n];
        for q in accepting {
            if q >= n {
                return Err(CodeError::Shape(format!("accepting state {q} out of range")));
            }
            acc[q] = true;
        }
        Ok(Dfa {
            alphabet,
            transitions,
            start,
            accepting: acc,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn transition(&self, state: usize, letter: usize) -> Option<usize> {
        self.transitions[state][letter]
    }

    pub fn transitions(&self) -> &[Vec<Option<usize>>] {
        &self.transitions
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.states()).filter(|&q| self.accepting[q]).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.transitions.iter().flatten().all(Option::is_some)
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut q = self.start;
        for &a in word {
            match self.transitions[q][a] {
                Some(r) => q = r,
                None => return false,
            }
        }
        self.accepting[q]
    }

    fn successors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.transitions[q].iter().flatten().copied()
    }

    fn reachable_from(&self, sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.states()];
        let mut queue: VecDeque<usize> = sources.into_iter().collect();
        for &q in &queue {
            seen[q] = true;
        }
        while let Some(q) = queue.pop_front() {
            for r in self.successors(q) {
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// No word of the language is a proper prefix of another: no reachable
    /// accepting state reaches an accepting state by a nonempty path.
    pub fn is_prefix(&self) -> bool {
        let reachable = self.reachable_from([self.start]);
        (0..self.states())
            .filter(|&q| reachable[q] && self.accepting[q])
            .all(|q| {
                let after_one = self.reachable_from(self.successors(q).collect::<Vec<_>>());
                !(0..self.states()).any(|r| after_one[r] && self.accepting[r])
            })
    }

    /// Suffix test via the prefix test on the determinised reversal.
    pub fn is_suffix(&self) -> bool {
        self.reversed().is_prefix()
    }

    /// Subset construction on the reversed automaton; recognises the mirror
    /// language. The empty subset is omitted (transitions to it are `None`).
    pub fn reversed(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut preds: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); k]; self.states()];
        for (q, row) in self.transitions.iter().enumerate() {
            for (a, r) in row.iter().enumerate() {
                if let Some(r) = r {
                    preds[*r][a].push(q);
                }
            }
        }
        let start: BTreeSet<usize> = self.accepting_states().into_iter().collect();
        let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut transitions: Vec<Vec<Option<usize>>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let next: BTreeSet<usize> = subsets[i]
                    .iter()
                    .flat_map(|&q| preds[q][a].iter().copied())
                    .collect();
                if next.is_empty() {
                    row.push(None);
                    continue;
                }
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    subsets.push(next);
                    subsets.len() - 1
                });
                row.push(Some(id));
            }
            transitions.push(row);
            i += 1;
        }
        let accepting: Vec<usize> = subsets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(&self.start))
            .map(|(i, _)| i)
            .collect();
        Dfa::new(self.alphabet.clone(), transitions, 0, accepting)
            .expect("subset construction is well formed")
    }
}

fn group_alphabet(g: &FiniteGroup) -> Result<Alphabet, CodeError> {
    Alphabet::new(g.names().iter().cloned()).map_err(|e| CodeError::Shape(e.to_string()))
}

/// First-return automaton for `C_G`: states `start`, one per non-identity
/// element, `accept`, `dead`. Reading `|h|` multiplies on the right; the
/// automaton accepts exactly when the running product first returns to `e`.
pub fn group_code_dfa(g: &FiniteGroup) -> Result<Dfa, CodeError> {
    g.validate().map_err(GroupError::InvalidGroup)?;
    let n = g.order();
    let e = g.identity();
    // state layout: 0 = start, 1.. = non-identity elements, n = accept, n+1 = dead
    let state_of: Vec<usize> = {
        let mut v = vec![0; n];
        let mut next = 1;
        for (x, s) in v.iter_mut().enumerate() {
            if x != e {
                *s = next;
                next += 1;
            }
        }
        v
    };
    let (accept, dead) = (n, n + 1);
    let step = |x: usize| if x == e { accept } else { state_of[x] };
    let mut transitions = vec![vec![None; n]; n + 2];
    for h in 0..n {
        transitions[0][h] = Some(step(h));
        transitions[accept][h] = Some(dead);
        transitions[dead][h] = Some(dead);
    }
    for x in (0..n).filter(|&x| x != e) {
        for h in 0..n {
            transitions[state_of[x]][h] = Some(step(g.mul(x, h)));
        }
    }
    Dfa::new(group_alphabet(g)?, transitions, 0, [accept])
}

/// `C*_G = j_G⁻¹(e)`: states are group elements, start and accept `{e}`.
pub fn group_star_dfa(g: &FiniteGroup) -> Result<Dfa, CodeError> {
    g.validate().map_err(GroupError::InvalidGroup)?;
    let n = g.order();
    let transitions = (0..n)
        .map(|x| (0..n).map(|h| Some(g.mul(x, h))).collect())
        .collect();
    Dfa::new(group_alphabet(g)?, transitions, g.identity(), [g.identity()])
}

/// Outcome of comparing `𝔄_{C*_G}` with `ℚ[G]` through `|g| ↦ g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LetterMapVerdict {
    Isomorphism,
    LetterMapFails,
    DimensionMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCodeReport {
    pub group_order: usize,
    pub code_is_prefix: bool,
    pub code_is_suffix: bool,
    pub syntactic_dim: usize,
    pub letter_map: LetterMapVerdict,
    pub semisimple: bool,
}

impl GroupCodeReport {
    pub fn biprefix(&self) -> bool {
        self.code_is_prefix && self.code_is_suffix
    }

    pub fn dimension_matches(&self) -> bool {
        self.syntactic_dim == self.group_order
    }

    pub fn isomorphic(&self) -> bool {
        self.letter_map == LetterMapVerdict::Isomorphism
    }

    pub fn passed(&self) -> bool {
        self.biprefix() && self.dimension_matches() && self.isomorphic() && self.semisimple
    }
}

/// Runs the group-code pipeline: biprefix check on `C_G`, syntactic algebra
/// of the characteristic series of `C*_G`, the letter isomorphism onto
/// `ℚ[G]`, and semisimplicity.
pub fn verify_group_code(g: &FiniteGroup) -> Result<GroupCodeReport, CodeError> {
    let code = group_code_dfa(g)?;
    let star = group_star_dfa(g)?;
    let pres = LinearRepresentation::char_series(&star)?.syntactic_algebra();
    let (qg, _) = g.group_algebra(GroupForm::Delta)?;
    let letter_map = if pres.dim() != g.order() {
        LetterMapVerdict::DimensionMismatch
    } else if letter_isomorphism_check(&qg, &pres.algebra, &pres.letter_images)
        .expect("letter images have the algebra's length")
    {
        LetterMapVerdict::Isomorphism
    } else {
        LetterMapVerdict::LetterMapFails
    };
    Ok(GroupCodeReport {
        group_order: g.order(),
        code_is_prefix: code.is_prefix(),
        code_is_suffix: code.is_suffix(),
        syntactic_dim: pres.dim(),
        letter_map,
        semisimple: pres.algebra.is_semisimple(),
    })
}

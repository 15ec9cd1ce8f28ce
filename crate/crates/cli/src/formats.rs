//! Plain-text file formats. Every file starts with a versioned header line
//! such as `syntaft-alg v1`; blank lines and `#` comments are ignored.
//! The `write_*` functions emit the canonical form, which `read_*` parses
//! back to an equal object.

use std::fmt::Write as _;

use num_traits::Zero;
use syntaft::algebra::{FinAlgebra, LinearFunctional};
use syntaft::codes::{Dfa, FiniteLanguage};
use syntaft::exactla::{format_rational, parse_rational, Matrix, Rational};
use syntaft::groups::FiniteGroup;
use syntaft::tft::Triangulation;
use syntaft::wfa::LinearRepresentation;
use syntaft::word::Alphabet;
use thiserror::Error;

pub const ALG_HEADER: &str = "syntaft-alg v1";
pub const FUNCTIONAL_HEADER: &str = "syntaft-functional v1";
pub const GROUP_HEADER: &str = "syntaft-group v1";
pub const WFA_HEADER: &str = "syntaft-wfa v1";
pub const DFA_HEADER: &str = "syntaft-dfa v1";
pub const LANG_HEADER: &str = "syntaft-lang v1";
pub const TRI_HEADER: &str = "syntaft-tri v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A Pachner move from a moves script.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    OneThree(usize),
    TwoTwo(usize),
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn usize(&self) -> Result<usize, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected a nonnegative integer, found '{}'", self.text)))
    }

    fn rational(&self) -> Result<Rational, ParseError> {
        parse_rational(self.text).map_err(|e| self.error(format!("bad rational '{}': {e}", self.text)))
    }
}

/// Content lines split into tokens with 1-based positions.
struct Reader<'a> {
    lines: Vec<Vec<Token<'a>>>,
    at: usize,
    last_line: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut last_line = 1;
        for (i, raw) in text.lines().enumerate() {
            last_line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut toks = Vec::new();
            let mut start = None;
            for (col, (b, c)) in content.char_indices().enumerate() {
                match (c.is_whitespace(), start) {
                    (false, None) => start = Some((b, col)),
                    (true, Some((s, sc))) => {
                        toks.push(Token {
                            line: i + 1,
                            column: sc + 1,
                            text: &content[s..b],
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            if let Some((s, sc)) = start {
                toks.push(Token {
                    line: i + 1,
                    column: sc + 1,
                    text: &content[s..],
                });
            }
            if !toks.is_empty() {
                lines.push(toks);
            }
        }
        Reader {
            lines,
            at: 0,
            last_line,
        }
    }

    fn eof_error(&self, what: &str) -> ParseError {
        ParseError {
            line: self.last_line,
            column: 1,
            message: format!("unexpected end of file, expected {what}"),
        }
    }

    fn done(&self) -> bool {
        self.at >= self.lines.len()
    }

    fn next_line(&mut self, what: &str) -> Result<Vec<Token<'a>>, ParseError> {
        let line = self.lines.get(self.at).cloned().ok_or_else(|| self.eof_error(what))?;
        self.at += 1;
        Ok(line)
    }

    fn peek_keyword(&self) -> Option<&str> {
        self.lines.get(self.at).map(|l| l[0].text)
    }

    fn header(&mut self, expected: &str) -> Result<(), ParseError> {
        let line = self.next_line("header")?;
        let text: Vec<&str> = line.iter().map(|t| t.text).collect();
        if text.join(" ") != expected {
            return Err(line[0].error(format!("expected header '{expected}'")));
        }
        Ok(())
    }

    /// A line `keyword value…`; returns the value tokens.
    fn keyword(&mut self, keyword: &str) -> Result<Vec<Token<'a>>, ParseError> {
        let line = self.next_line(&format!("'{keyword}' line"))?;
        if line[0].text != keyword {
            return Err(line[0].error(format!("expected '{keyword}', found '{}'", line[0].text)));
        }
        Ok(line[1..].to_vec())
    }

    fn single(&mut self, keyword: &str) -> Result<Token<'a>, ParseError> {
        let line = self.next_line(&format!("'{keyword}' line"))?;
        if line[0].text != keyword {
            return Err(line[0].error(format!("expected '{keyword}', found '{}'", line[0].text)));
        }
        match line.as_slice() {
            [_, value] => Ok(*value),
            [k] => Err(ParseError {
                line: k.line,
                column: k.column + k.text.len(),
                message: format!("'{keyword}' needs a value"),
            }),
            [_, _, extra, ..] => Err(extra.error("unexpected extra value")),
            [] => unreachable!("lines are never empty"),
        }
    }

    fn count(&mut self, keyword: &str) -> Result<usize, ParseError> {
        self.single(keyword)?.usize()
    }

    fn rationals(&mut self, keyword: &str, n: usize) -> Result<Vec<Rational>, ParseError> {
        let line = self.next_line(&format!("'{keyword}' line"))?;
        let values = if keyword.is_empty() {
            &line[..]
        } else {
            if line[0].text != keyword {
                return Err(line[0].error(format!("expected '{keyword}', found '{}'", line[0].text)));
            }
            &line[1..]
        };
        exact_len(&line[0], values, n)?;
        values.iter().map(Token::rational).collect()
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.lines.get(self.at) {
            Some(line) => Err(line[0].error("unexpected trailing content")),
            None => Ok(()),
        }
    }
}

fn exact_len(anchor: &Token, values: &[Token], n: usize) -> Result<(), ParseError> {
    if values.len() == n {
        return Ok(());
    }
    let at = values.get(n).unwrap_or(anchor);
    Err(at.error(format!("expected {n} values, found {}", values.len())))
}

fn alphabet_from(anchor: &Token, symbols: &[Token]) -> Result<Alphabet, ParseError> {
    Alphabet::new(symbols.iter().map(|t| t.text)).map_err(|e| anchor.error(e.to_string()))
}

fn join_rationals(values: &[Rational]) -> String {
    values.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

/// Structure constants are read sparsely as `i j k value` lines after the
/// unit; validation of the algebra axioms is left to the caller.
pub fn read_algebra(text: &str) -> Result<FinAlgebra, ParseError> {
    let mut r = Reader::new(text);
    r.header(ALG_HEADER)?;
    let dim_tok = r.single("dim")?;
    let n = dim_tok.usize()?;
    let names_line = r.keyword("names")?;
    exact_len(&dim_tok, &names_line, n)?;
    let names: Vec<String> = names_line.iter().map(|t| t.text.to_string()).collect();
    for (i, t) in names_line.iter().enumerate() {
        if names[..i].contains(&names[i]) {
            return Err(t.error(format!("duplicate basis name '{}'", t.text)));
        }
    }
    let unit = r.rationals("unit", n)?;
    let mut constants = vec![Rational::zero(); n * n * n];
    let mut seen = vec![false; n * n * n];
    while !r.done() {
        let line = r.next_line("structure constant")?;
        exact_len(&line[0], &line[1..], 3)?;
        let mut idx = [0usize; 3];
        for (slot, t) in idx.iter_mut().zip(&line[..3]) {
            *slot = t.usize()?;
            if *slot >= n {
                return Err(t.error(format!("index {slot} out of range for dimension {n}")));
            }
        }
        let pos = (idx[0] * n + idx[1]) * n + idx[2];
        if seen[pos] {
            return Err(line[0].error("structure constant given twice"));
        }
        seen[pos] = true;
        constants[pos] = line[3].rational()?;
    }
    FinAlgebra::new(names, constants, unit).map_err(|e| dim_tok.error(e.to_string()))
}

pub fn write_algebra(alg: &FinAlgebra) -> String {
    let n = alg.dim();
    let mut out = format!(
        "{ALG_HEADER}\ndim {n}\nnames {}\nunit {}\n",
        alg.basis_names().join(" "),
        join_rationals(alg.unit())
    );
    for i in 0..n {
        for j in 0..n {
            for (k, c) in alg.basis_product(i, j).iter().enumerate() {
                if !c.is_zero() {
                    let _ = writeln!(out, "{i} {j} {k} {}", format_rational(c));
                }
            }
        }
    }
    out
}

pub fn read_functional(text: &str) -> Result<LinearFunctional, ParseError> {
    let mut r = Reader::new(text);
    r.header(FUNCTIONAL_HEADER)?;
    let n = r.count("dim")?;
    let values = r.rationals("values", n)?;
    r.finish()?;
    Ok(LinearFunctional::new(values))
}

pub fn write_functional(f: &LinearFunctional) -> String {
    format!(
        "{FUNCTIONAL_HEADER}\ndim {}\nvalues {}\n",
        f.len(),
        join_rationals(&f.coefficients)
    )
}

/// Group tables list element indices; the identity is inferred.
pub fn read_group(text: &str) -> Result<FiniteGroup, ParseError> {
    let mut r = Reader::new(text);
    r.header(GROUP_HEADER)?;
    let order_tok = r.single("order")?;
    let n = order_tok.usize()?;
    let names_line = r.keyword("names")?;
    exact_len(&order_tok, &names_line, n)?;
    let mut table = Vec::with_capacity(n);
    for _ in 0..n {
        let row = r.keyword("row")?;
        exact_len(&order_tok, &row, n)?;
        let mut entries = Vec::with_capacity(n);
        for t in &row {
            let x = t.usize()?;
            if x >= n {
                return Err(t.error(format!("element {x} out of range for order {n}")));
            }
            entries.push(x);
        }
        table.push(entries);
    }
    r.finish()?;
    Ok(FiniteGroup::from_table(
        names_line.iter().map(|t| t.text.to_string()).collect(),
        table,
    ))
}

pub fn write_group(g: &FiniteGroup) -> String {
    let mut out = format!(
        "{GROUP_HEADER}\norder {}\nnames {}\n",
        g.order(),
        g.names().join(" ")
    );
    for row in g.table() {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "row {}", cells.join(" "));
    }
    out
}

pub fn read_wfa(text: &str) -> Result<LinearRepresentation, ParseError> {
    let mut r = Reader::new(text);
    r.header(WFA_HEADER)?;
    let alpha_line = r.keyword("alphabet")?;
    let anchor = alpha_line.first().copied().ok_or_else(|| r.eof_error("alphabet symbols"))?;
    let alphabet = alphabet_from(&anchor, &alpha_line)?;
    let n = r.count("dim")?;
    let initial = r.rationals("initial", n)?;
    let mut transitions = Vec::with_capacity(alphabet.len());
    for (a, symbol) in alphabet.symbols().iter().enumerate() {
        let sym = r.single("matrix")?;
        if sym.text != symbol {
            return Err(sym.error(format!(
                "expected matrix for '{symbol}' (symbol {a}), found '{}'",
                sym.text
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            rows.push(r.rationals("", n)?);
        }
        transitions.push(Matrix::from_rows(n, rows).expect("row lengths checked"));
    }
    let final_weights = r.rationals("final", n)?;
    r.finish()?;
    LinearRepresentation::new(alphabet, initial, transitions, final_weights)
        .map_err(|e| anchor.error(e.to_string()))
}

pub fn write_wfa(rep: &LinearRepresentation) -> String {
    let n = rep.dim();
    let mut out = format!(
        "{WFA_HEADER}\nalphabet {}\ndim {n}\ninitial {}\n",
        rep.alphabet().symbols().join(" "),
        join_rationals(rep.initial())
    );
    for (a, m) in rep.transitions().iter().enumerate() {
        let _ = writeln!(out, "matrix {}", rep.alphabet().symbol(a));
        for i in 0..n {
            let _ = writeln!(out, "{}", join_rationals(m.row(i)));
        }
    }
    let _ = writeln!(out, "final {}", join_rationals(rep.final_weights()));
    out
}

/// Transition rows are `delta t₀ t₁ …` per state, `-` for a missing edge.
pub fn read_dfa(text: &str) -> Result<Dfa, ParseError> {
    let mut r = Reader::new(text);
    r.header(DFA_HEADER)?;
    let states_tok = r.single("states")?;
    let n = states_tok.usize()?;
    let alpha_line = r.keyword("alphabet")?;
    let anchor = alpha_line.first().copied().unwrap_or(states_tok);
    let alphabet = alphabet_from(&anchor, &alpha_line)?;
    let start_tok = r.single("start")?;
    let start = start_tok.usize()?;
    let accepting_line = r.keyword("accepting")?;
    let mut accepting = Vec::new();
    for t in &accepting_line {
        accepting.push(t.usize()?);
    }
    let mut transitions = Vec::with_capacity(n);
    for _ in 0..n {
        let row = r.keyword("delta")?;
        exact_len(&states_tok, &row, alphabet.len())?;
        let mut targets = Vec::with_capacity(row.len());
        for t in &row {
            targets.push(if t.text == "-" { None } else { Some(t.usize()?) });
        }
        transitions.push(targets);
    }
    r.finish()?;
    Dfa::new(alphabet, transitions, start, accepting).map_err(|e| start_tok.error(e.to_string()))
}

pub fn write_dfa(dfa: &Dfa) -> String {
    let accepting: Vec<String> = dfa.accepting_states().iter().map(|q| q.to_string()).collect();
    let mut out = format!(
        "{DFA_HEADER}\nstates {}\nalphabet {}\nstart {}\naccepting {}\n",
        dfa.states(),
        dfa.alphabet().symbols().join(" "),
        dfa.start(),
        accepting.join(" ")
    );
    for row in dfa.transitions() {
        let cells: Vec<String> = row
            .iter()
            .map(|t| t.map_or("-".to_string(), |q| q.to_string()))
            .collect();
        let _ = writeln!(out, "delta {}", cells.join(" "));
    }
    out
}

/// Words are spelled with the alphabet's symbols; multi-character symbols
/// are separated by spaces.
pub fn read_language(text: &str) -> Result<FiniteLanguage, ParseError> {
    let mut r = Reader::new(text);
    r.header(LANG_HEADER)?;
    let alpha_line = r.keyword("alphabet")?;
    let anchor = alpha_line.first().copied().ok_or_else(|| r.eof_error("alphabet symbols"))?;
    let alphabet = alphabet_from(&anchor, &alpha_line)?;
    let mut words = Vec::new();
    while !r.done() {
        let line = r.keyword("word")?;
        let first = line.first().ok_or_else(|| r.eof_error("word symbols"))?;
        let text: Vec<&str> = line.iter().map(|t| t.text).collect();
        let w = alphabet
            .parse_word(&text.join(" "))
            .map_err(|e| first.error(e.to_string()))?;
        if w.is_empty() {
            return Err(first.error("the empty word cannot be a codeword"));
        }
        words.push(w);
    }
    FiniteLanguage::new(alphabet, words).map_err(|e| anchor.error(e.to_string()))
}

pub fn write_language(l: &FiniteLanguage) -> String {
    let mut out = format!(
        "{LANG_HEADER}\nalphabet {}\n",
        l.alphabet().symbols().join(" ")
    );
    for w in l.words() {
        let _ = writeln!(out, "word {}", l.alphabet().format_word(w));
    }
    out
}

pub fn read_triangulation(text: &str) -> Result<Triangulation, ParseError> {
    let mut r = Reader::new(text);
    r.header(TRI_HEADER)?;
    let tri_tok = r.single("triangles")?;
    let f = tri_tok.usize()?;
    let mut pairs = Vec::new();
    while r.peek_keyword().is_some() {
        let line = r.keyword("pair")?;
        exact_len(&line[0], &line, 2)?;
        pairs.push((line[0].usize()?, line[1].usize()?));
    }
    Triangulation::new(f, &pairs).map_err(|e| tri_tok.error(e.to_string()))
}

pub fn write_triangulation(t: &Triangulation) -> String {
    let mut out = format!("{TRI_HEADER}\ntriangles {}\n", t.triangle_count());
    for (a, b) in t.pairs() {
        let _ = writeln!(out, "pair {a} {b}");
    }
    out
}

/// Lines `13 <triangle>` or `22 <slot>`.
pub fn read_moves(text: &str) -> Result<Vec<Move>, ParseError> {
    let r = Reader::new(text);
    let mut moves = Vec::new();
    for line in &r.lines {
        exact_len(&line[0], &line[1..], 1)?;
        let site = line[1].usize()?;
        moves.push(match line[0].text {
            "13" => Move::OneThree(site),
            "22" => Move::TwoTwo(site),
            other => return Err(line[0].error(format!("unknown move '{other}', expected 13 or 22"))),
        });
    }
    Ok(moves)
}

/// The header line of a file, used to dispatch on file kind.
pub fn header_of(text: &str) -> Option<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use syntaft::algebra::corpus;
    use syntaft::exactla::rat;

    #[test]
    fn algebra_round_trip() {
        let text = write_algebra(&corpus::dual_numbers());
        assert_eq!(
            text,
            "syntaft-alg v1\ndim 2\nnames 1 x\nunit 1 0\n0 0 0 1\n0 1 1 1\n1 0 1 1\n"
        );
        assert_eq!(read_algebra(&text).unwrap(), corpus::dual_numbers());
    }

    #[test]
    fn errors_point_at_tokens() {
        let e = read_algebra("syntaft-alg v1\ndim 1\nnames 1\nunit 1/0\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 6));
        let e = read_algebra("syntaft-alg v1\ndim 1\nnames 1\nunit 1\n0 0 3 1\n").unwrap_err();
        assert_eq!((e.line, e.column), (5, 5));
        let e = read_algebra("syntaft-alg v2\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = read_functional("syntaft-functional v1\ndim 2\nvalues 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(read_group("syntaft-group v1\norder 1\nnames e\n").is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# the field\nsyntaft-alg v1\n\ndim 1 # one\nnames p0\nunit 1\n0 0 0 1\n";
        assert_eq!(read_algebra(text).unwrap(), corpus::rationals());
    }

    #[test]
    fn functional_round_trip() {
        let f = LinearFunctional::new(vec![rat(1), syntaft::exactla::ratio(-2, 3)]);
        assert_eq!(read_functional(&write_functional(&f)).unwrap(), f);
    }

    #[test]
    fn moves_script() {
        assert_eq!(
            read_moves("# scramble\n13 0\n22 4\n").unwrap(),
            vec![Move::OneThree(0), Move::TwoTwo(4)]
        );
        let e = read_moves("31 0\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
    }

    #[test]
    fn header_detection() {
        assert_eq!(header_of("\n# c\nsyntaft-dfa v1\n"), Some("syntaft-dfa v1"));
    }
}

//! Command-line front end for the `syntaft` library.

pub mod formats;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use syntaft::algebra::{corpus, AlgebraError, FinAlgebra, LinearFunctional};
use syntaft::codes::{group_code_dfa, verify_group_code, CodeError, Dfa, FiniteLanguage};
use syntaft::exactla::{format_rational, ratio, Rational};
use syntaft::groups::{catalog, FiniteGroup, GroupError, GroupForm, DEFAULT_HOM_BUDGET};
use syntaft::mso::{self, Assignment, MsoError, DEFAULT_EVAL_BUDGET};
use syntaft::tft::{self, TftError, Triangulation, DEFAULT_CONTRACTION_BUDGET};
use thiserror::Error;

use formats::{Move, ParseError};

#[derive(Debug, Parser)]
#[command(name = "syntaft", version, about = "Exact checks on rational series, algebras, codes and surface TFTs")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on enumeration and contraction work.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weighted automata (linear representations).
    #[command(subcommand)]
    Wfa(WfaCmd),
    /// Finite-dimensional algebras and functionals.
    #[command(subcommand)]
    Alg(AlgCmd),
    /// Finite groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Codes given as finite languages or automata.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Triangulated surfaces and TFT invariants.
    #[command(subcommand)]
    Tft(TftCmd),
    /// Restricted weighted MSO formulas.
    #[command(subcommand)]
    Mso(MsoCmd),
    /// End-to-end runs.
    #[command(subcommand)]
    Pipeline(PipelineCmd),
}

#[derive(Debug, Subcommand)]
enum WfaCmd {
    /// Value of the series on a word.
    Eval {
        file: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Minimal equivalent representation.
    Min { file: PathBuf },
    /// Syntactic algebra of the series.
    Syntactic { file: PathBuf },
    /// Whether the value depends only on letter counts.
    Exchangeable { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum AlgCmd {
    /// Associativity and unit laws.
    Check { file: PathBuf },
    /// Whether the functional's kernel holds no nonzero one-sided ideal.
    Frobenius {
        file: PathBuf,
        #[arg(long)]
        functional: Option<PathBuf>,
    },
    /// Frobenius and vanishing on commutators.
    Symmetric {
        file: PathBuf,
        #[arg(long)]
        functional: Option<PathBuf>,
    },
    /// Whether the kernel holds no nonzero two-sided ideal.
    Hyperplane {
        file: PathBuf,
        #[arg(long)]
        functional: Option<PathBuf>,
    },
    /// Nondegeneracy of the trace form.
    Semisimple { file: PathBuf },
    /// The center as an algebra.
    Center { file: PathBuf },
    /// Matrix block sizes of a split semisimple algebra.
    Blocks { file: PathBuf },
    /// The regular trace form.
    Canonical { file: PathBuf },
    /// Writes a named algebra from the built-in corpus.
    Make {
        #[arg(long, value_enum)]
        name: AlgebraName,
        #[arg(long, default_value_t = 2)]
        param: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgebraName {
    /// `param` copies of ℚ.
    Split,
    /// ℚ[x]/(x²).
    Dual,
    /// Upper-triangular 2×2 matrices.
    UpperTriangular,
    /// `param`×`param` matrices.
    Matrix,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CatalogName {
    Cyclic,
    Symmetric,
    Klein,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    Delta,
    Dw,
}

#[derive(Debug, Subcommand)]
enum GroupCmd {
    /// Writes a catalog group.
    Make {
        #[arg(long, value_enum)]
        name: CatalogName,
        #[arg(long, default_value_t = 0)]
        param: usize,
    },
    /// The group algebra; the form goes to `--functional-out` if given.
    Algebra {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "delta")]
        form: FormArg,
        #[arg(long)]
        functional_out: Option<PathBuf>,
    },
    /// Number of homomorphisms from the genus-g surface group.
    Homcount {
        file: PathBuf,
        #[arg(long)]
        genus: usize,
    },
}

#[derive(Debug, Subcommand)]
enum CodeCmd {
    /// Unique decipherability of a finite language.
    Test { file: PathBuf },
    /// No word is a proper prefix of another.
    Prefix { file: PathBuf },
    /// No word is a proper suffix of another.
    Suffix { file: PathBuf },
    /// Automaton of the group code.
    Groupcode { file: PathBuf },
    /// Four-verdict report for the group code.
    VerifyGroup { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum TftCmd {
    /// Vertices, edges, faces, Euler characteristic and genus.
    Analyze { tri: PathBuf },
    /// Lattice state sum with the regular trace form.
    Statesum {
        alg: PathBuf,
        tri: Option<PathBuf>,
        /// Use the standard triangulation of this genus instead of a file.
        #[arg(long)]
        genus: Option<usize>,
    },
    /// Applies a script of Pachner moves.
    Pachner {
        tri: PathBuf,
        #[arg(long)]
        moves: PathBuf,
    },
    /// Closed TQFT invariant `f(h^g)`.
    Closed {
        alg: PathBuf,
        #[arg(long)]
        genus: usize,
        /// Defaults to the regular trace form.
        #[arg(long)]
        functional: Option<PathBuf>,
        /// Pass to the center with the restricted trace form first.
        #[arg(long)]
        sector: bool,
    },
    /// Writes the standard triangulation of a genus.
    Standard {
        #[arg(long)]
        genus: usize,
    },
}

#[derive(Debug, Subcommand)]
enum MsoCmd {
    /// Value of a closed formula on a word.
    Eval {
        formula: PathBuf,
        /// Single-character symbols, or symbols separated by spaces.
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Formula defining the series of an automaton.
    FromWfa { wfa: PathBuf },
    /// Algebra → series → formula, with a round-trip check.
    LtftReport {
        alg: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
}

#[derive(Debug, Subcommand)]
enum PipelineCmd {
    /// Group → code → syntactic algebra → state sum → center → closed invariant.
    Diagram {
        group: PathBuf,
        #[arg(long)]
        genus: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {error}")]
    Parse { path: PathBuf, error: ParseError },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Io { .. } => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            GroupError::UnknownCatalogEntry(_) | GroupError::ParameterTooLarge { .. } => {
                CliError::Usage(e.to_string())
            }
            GroupError::InvalidGroup(_) => CliError::Failed(e.to_string()),
        }
    }
}

impl From<TftError> for CliError {
    fn from(e: TftError) -> Self {
        match e {
            TftError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            TftError::InvalidMoveSite(_) => CliError::Usage(e.to_string()),
            TftError::Algebra(inner) => inner.into(),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<MsoError> for CliError {
    fn from(e: MsoError) -> Self {
        match e {
            MsoError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            MsoError::Syntax(_) | MsoError::UnassignedVariable(_) => CliError::Usage(e.to_string()),
            MsoError::Algebra(inner) => inner.into(),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::Group(inner) => inner.into(),
            CodeError::Word(_) | CodeError::EmptyWord => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// What a command prints, and whether its verdicts passed.
struct Report {
    text: String,
    json: Value,
    pass: bool,
}

impl Report {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Report {
            text: text.into(),
            json,
            pass: true,
        }
    }

    fn verdict(pass: bool, json: Value) -> Self {
        Report {
            text: pass.to_string(),
            json,
            pass,
        }
    }
}

fn rat_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn vec_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rat_json).collect())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T>(path: &Path, parse: fn(&str) -> Result<T, ParseError>) -> Result<T, CliError> {
    parse(&read_file(path)?).map_err(|error| CliError::Parse {
        path: path.to_path_buf(),
        error,
    })
}

fn load_algebra(path: &Path) -> Result<FinAlgebra, CliError> {
    let alg = load(path, formats::read_algebra)?;
    alg.validate()
        .map_err(|v| CliError::Failed(format!("{}: invalid algebra: {v:?}", path.display())))?;
    Ok(alg)
}

fn load_functional(alg: &FinAlgebra, path: Option<&PathBuf>) -> Result<LinearFunctional, CliError> {
    match path {
        Some(p) => {
            let f = load(p, formats::read_functional)?;
            if f.len() != alg.dim() {
                return Err(CliError::Usage(format!(
                    "{}: functional has {} values for an algebra of dimension {}",
                    p.display(),
                    f.len(),
                    alg.dim()
                )));
            }
            Ok(f)
        }
        None => Ok(alg.canonical_form()),
    }
}

fn load_group(path: &Path) -> Result<FiniteGroup, CliError> {
    let g = load(path, formats::read_group)?;
    g.validate()
        .map_err(|v| CliError::Failed(format!("{}: invalid group: {v:?}", path.display())))?;
    Ok(g)
}

enum Language {
    Finite(FiniteLanguage),
    Automaton(Dfa),
}

fn load_language(path: &Path) -> Result<Language, CliError> {
    let text = read_file(path)?;
    let wrap = |error| CliError::Parse {
        path: path.to_path_buf(),
        error,
    };
    match formats::header_of(&text) {
        Some(formats::DFA_HEADER) => Ok(Language::Automaton(formats::read_dfa(&text).map_err(wrap)?)),
        _ => Ok(Language::Finite(formats::read_language(&text).map_err(wrap)?)),
    }
}

/// Parses and runs a command line, writing output to `out` and diagnostics
/// to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("json"));
            } else {
                let text = report.text.trim_end_matches('\n');
                let _ = writeln!(out, "{text}");
            }
            i32::from(!report.pass)
        }
        Err(e) => {
            if cli.json {
                let body = json!({ "error": e.to_string(), "exit_code": e.exit_code() });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("json"));
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Wfa(cmd) => wfa(cmd),
        Command::Alg(cmd) => alg(cmd),
        Command::Group(cmd) => group(cmd, cli.budget),
        Command::Code(cmd) => code(cmd),
        Command::Tft(cmd) => tft_cmd(cmd, cli.budget),
        Command::Mso(cmd) => mso_cmd(cmd, cli.budget),
        Command::Pipeline(PipelineCmd::Diagram { group, genus }) => diagram(group, *genus, cli.budget),
    }
}

fn wfa(cmd: &WfaCmd) -> Result<Report, CliError> {
    match cmd {
        WfaCmd::Eval { file, word } => {
            let rep = load(file, formats::read_wfa)?;
            let w = rep
                .alphabet()
                .parse_word(word)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let v = rep.evaluate(&w).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Report::ok(
                format_rational(&v),
                json!({ "word": rep.alphabet().format_word(&w), "value": rat_json(&v) }),
            ))
        }
        WfaCmd::Min { file } => {
            let rep = load(file, formats::read_wfa)?;
            let min = rep.minimize();
            let text = formats::write_wfa(&min);
            Ok(Report::ok(
                text.clone(),
                json!({ "dim_before": rep.dim(), "dim_after": min.dim(), "wfa": text }),
            ))
        }
        WfaCmd::Syntactic { file } => {
            let rep = load(file, formats::read_wfa)?;
            let pres = rep.syntactic_algebra();
            let mut text = String::new();
            for (a, img) in pres.letter_images.iter().enumerate() {
                let coords: Vec<String> = img.iter().map(format_rational).collect();
                let _ = writeln!(text, "# letter {} = ({})", rep.alphabet().symbol(a), coords.join(", "));
            }
            text.push_str(&formats::write_algebra(&pres.algebra));
            let letters: serde_json::Map<String, Value> = pres
                .letter_images
                .iter()
                .enumerate()
                .map(|(a, img)| (rep.alphabet().symbol(a).to_string(), vec_json(img)))
                .collect();
            Ok(Report::ok(
                text,
                json!({
                    "dim": pres.dim(),
                    "basis": pres.algebra.basis_names(),
                    "letter_images": letters,
                    "functional": vec_json(&pres.functional.coefficients),
                    "commutative": pres.algebra.is_commutative(),
                    "algebra": formats::write_algebra(&pres.algebra),
                }),
            ))
        }
        WfaCmd::Exchangeable { file } => {
            let rep = load(file, formats::read_wfa)?;
            let ex = rep.is_exchangeable();
            Ok(Report::verdict(ex, json!({ "exchangeable": ex })))
        }
    }
}

fn alg(cmd: &AlgCmd) -> Result<Report, CliError> {
    match cmd {
        AlgCmd::Check { file } => {
            let a = load(file, formats::read_algebra)?;
            Ok(match a.validate() {
                Ok(()) => Report::ok("valid", json!({ "valid": true })),
                Err(v) => Report {
                    text: format!("invalid: {v:?}"),
                    json: json!({ "valid": false, "violation": v }),
                    pass: false,
                },
            })
        }
        AlgCmd::Frobenius { file, functional }
        | AlgCmd::Symmetric { file, functional }
        | AlgCmd::Hyperplane { file, functional } => {
            let a = load_algebra(file)?;
            let f = load_functional(&a, functional.as_ref())?;
            let (key, value) = match cmd {
                AlgCmd::Frobenius { .. } => ("frobenius", a.is_frobenius(&f)?),
                AlgCmd::Symmetric { .. } => ("symmetric", a.is_symmetric(&f)?),
                _ => ("syntactic_hyperplane", a.is_syntactic_hyperplane(&f)?),
            };
            Ok(Report::verdict(value, json!({ key: value })))
        }
        AlgCmd::Semisimple { file } => {
            let a = load_algebra(file)?;
            let s = a.is_semisimple();
            Ok(Report::verdict(s, json!({ "semisimple": s })))
        }
        AlgCmd::Center { file } => {
            let a = load_algebra(file)?;
            let (sub, z) = a.center();
            let mut text = String::new();
            for (name, v) in z.basis_names().iter().zip(sub.basis_vectors()) {
                let coords: Vec<String> = v.iter().map(format_rational).collect();
                let _ = writeln!(text, "# {name} = ({})", coords.join(", "));
            }
            text.push_str(&formats::write_algebra(&z));
            let basis: Vec<Value> = sub.basis_vectors().iter().map(|v| vec_json(v)).collect();
            Ok(Report::ok(
                text,
                json!({ "dim": z.dim(), "basis": basis, "algebra": formats::write_algebra(&z) }),
            ))
        }
        AlgCmd::Blocks { file } => {
            let a = load_algebra(file)?;
            let b = a.split_blocks()?;
            let sizes: Vec<String> = b.matrix_sizes.iter().map(|n| n.to_string()).collect();
            Ok(Report::ok(
                format!("matrix sizes {}", sizes.join(" ")),
                json!({
                    "matrix_sizes": b.matrix_sizes,
                    "block_dims": b.block_dims,
                    "idempotents": b.idempotents.iter().map(|v| vec_json(v)).collect::<Vec<_>>(),
                }),
            ))
        }
        AlgCmd::Make { name, param } => {
            if *param == 0 && matches!(name, AlgebraName::Split | AlgebraName::Matrix) {
                return Err(CliError::Usage("--param must be positive".into()));
            }
            let a = match name {
                AlgebraName::Split => corpus::split_product(*param),
                AlgebraName::Dual => corpus::dual_numbers(),
                AlgebraName::UpperTriangular => corpus::upper_triangular(),
                AlgebraName::Matrix => corpus::matrix_algebra(*param),
            };
            let text = formats::write_algebra(&a);
            Ok(Report::ok(text.clone(), json!({ "dim": a.dim(), "algebra": text })))
        }
        AlgCmd::Canonical { file } => {
            let a = load_algebra(file)?;
            let f = a.canonical_form();
            Ok(Report::ok(
                formats::write_functional(&f),
                json!({ "values": vec_json(&f.coefficients) }),
            ))
        }
    }
}

fn group(cmd: &GroupCmd, budget: Option<u128>) -> Result<Report, CliError> {
    match cmd {
        GroupCmd::Make { name, param } => {
            let key = match name {
                CatalogName::Cyclic => "cyclic",
                CatalogName::Symmetric => "symmetric",
                CatalogName::Klein => "klein",
            };
            let g = catalog(key, *param)?;
            let text = formats::write_group(&g);
            Ok(Report::ok(text.clone(), json!({ "order": g.order(), "group": text })))
        }
        GroupCmd::Algebra {
            file,
            form,
            functional_out,
        } => {
            let g = load_group(file)?;
            let form = match form {
                FormArg::Delta => GroupForm::Delta,
                FormArg::Dw => GroupForm::Dw,
            };
            let (a, f) = g.group_algebra(form)?;
            if let Some(path) = functional_out {
                std::fs::write(path, formats::write_functional(&f)).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
            }
            let text = formats::write_algebra(&a);
            Ok(Report::ok(
                text.clone(),
                json!({ "algebra": text, "functional": formats::write_functional(&f) }),
            ))
        }
        GroupCmd::Homcount { file, genus } => {
            let g = load_group(file)?;
            let budget = budget.map_or(DEFAULT_HOM_BUDGET, |b| b.min(u64::MAX as u128) as u64);
            let n = g.count_surface_homs(*genus, budget)?;
            Ok(Report::ok(n.to_string(), json!({ "genus": genus, "count": n.to_string() })))
        }
    }
}

fn code(cmd: &CodeCmd) -> Result<Report, CliError> {
    match cmd {
        CodeCmd::Test { file } => match load_language(file)? {
            Language::Finite(l) => {
                let c = l.is_code();
                Ok(Report::verdict(c, json!({ "code": c })))
            }
            Language::Automaton(_) => Err(CliError::Usage(
                "code test needs a finite language file".into(),
            )),
        },
        CodeCmd::Prefix { file } | CodeCmd::Suffix { file } => {
            let prefix = matches!(cmd, CodeCmd::Prefix { .. });
            let v = match (load_language(file)?, prefix) {
                (Language::Finite(l), true) => l.is_prefix(),
                (Language::Finite(l), false) => l.is_suffix(),
                (Language::Automaton(d), true) => d.is_prefix(),
                (Language::Automaton(d), false) => d.is_suffix(),
            };
            let key = if prefix { "prefix" } else { "suffix" };
            Ok(Report::verdict(v, json!({ key: v })))
        }
        CodeCmd::Groupcode { file } => {
            let g = load_group(file)?;
            let dfa = group_code_dfa(&g)?;
            let text = formats::write_dfa(&dfa);
            Ok(Report::ok(text.clone(), json!({ "states": dfa.states(), "dfa": text })))
        }
        CodeCmd::VerifyGroup { file } => {
            let g = load_group(file)?;
            let r = verify_group_code(&g)?;
            let rows = [
                (r.biprefix(), format!("code is biprefix (prefix={}, suffix={})", r.code_is_prefix, r.code_is_suffix)),
                (r.dimension_matches(), format!("syntactic algebra has dim |G| ({} = {})", r.syntactic_dim, r.group_order)),
                (r.isomorphic(), format!("letter map onto Q[G]: {:?}", r.letter_map)),
                (r.semisimple, "syntactic algebra is semisimple".to_string()),
            ];
            let mut text = String::new();
            for (ok, line) in &rows {
                let _ = writeln!(text, "[{}] {line}", if *ok { "PASS" } else { "FAIL" });
            }
            Ok(Report {
                text,
                json: json!({ "report": r, "passed": r.passed() }),
                pass: r.passed(),
            })
        }
    }
}

fn tft_cmd(cmd: &TftCmd, budget: Option<u128>) -> Result<Report, CliError> {
    match cmd {
        TftCmd::Analyze { tri } => {
            let t = load(tri, formats::read_triangulation)?;
            let r = t.analyze()?;
            Ok(Report::ok(
                format!(
                    "V={} E={} F={} chi={} genus={}",
                    r.vertex_count, r.edge_count, r.face_count, r.euler_characteristic, r.genus
                ),
                json!(r),
            ))
        }
        TftCmd::Statesum { alg, tri, genus } => {
            let a = load_algebra(alg)?;
            let t = match (tri, genus) {
                (Some(p), None) => load(p, formats::read_triangulation)?,
                (None, Some(g)) => Triangulation::standard(*g),
                _ => {
                    return Err(CliError::Usage(
                        "give either a triangulation file or --genus".into(),
                    ))
                }
            };
            let v = tft::state_sum(&a, &t, budget.unwrap_or(DEFAULT_CONTRACTION_BUDGET))?;
            let genus = t.analyze()?.genus;
            Ok(Report::ok(
                format_rational(&v),
                json!({ "genus": genus, "value": rat_json(&v) }),
            ))
        }
        TftCmd::Pachner { tri, moves } => {
            let mut t = load(tri, formats::read_triangulation)?;
            let before = t.analyze()?;
            for m in load(moves, formats::read_moves)? {
                t = match m {
                    Move::OneThree(i) => t.pachner_13(i)?,
                    Move::TwoTwo(s) => t.pachner_22(s)?,
                };
            }
            let after = t.analyze()?;
            let text = formats::write_triangulation(&t);
            Ok(Report {
                text: text.clone(),
                json: json!({ "before": before, "after": after, "triangulation": text }),
                pass: before.genus == after.genus,
            })
        }
        TftCmd::Closed {
            alg,
            genus,
            functional,
            sector,
        } => {
            let a = load_algebra(alg)?;
            let (a, f) = if *sector {
                if functional.is_some() {
                    return Err(CliError::Usage("--sector uses the trace form; drop --functional".into()));
                }
                tft::closed_sector(&a)?
            } else {
                let f = load_functional(&a, functional.as_ref())?;
                (a, f)
            };
            let v = tft::closed_invariant(&a, &f, *genus)?;
            Ok(Report::ok(
                format_rational(&v),
                json!({ "genus": genus, "value": rat_json(&v) }),
            ))
        }
        TftCmd::Standard { genus } => {
            let text = formats::write_triangulation(&Triangulation::standard(*genus));
            Ok(Report::ok(text.clone(), json!({ "genus": genus, "triangulation": text })))
        }
    }
}

fn split_symbols(word: &str) -> Vec<String> {
    let w = word.trim();
    if w.is_empty() || w == "ε" {
        Vec::new()
    } else if w.contains(char::is_whitespace) {
        w.split_whitespace().map(String::from).collect()
    } else {
        w.chars().map(String::from).collect()
    }
}

fn mso_cmd(cmd: &MsoCmd, budget: Option<u128>) -> Result<Report, CliError> {
    match cmd {
        MsoCmd::Eval { formula, word } => {
            let text = read_file(formula)?;
            let f = mso::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", formula.display())))?;
            let symbols = split_symbols(word);
            let v = mso::evaluate_formula(
                &f,
                &symbols,
                &Assignment::new(),
                budget.unwrap_or(DEFAULT_EVAL_BUDGET),
            )?;
            Ok(Report::ok(
                format_rational(&v),
                json!({ "word": symbols, "value": rat_json(&v), "restricted": true }),
            ))
        }
        MsoCmd::FromWfa { wfa } => {
            let rep = load(wfa, formats::read_wfa)?;
            let f = mso::wfa_to_formula(&rep);
            Ok(Report::ok(
                f.to_string(),
                json!({ "formula": f.to_string(), "size": f.size(), "restricted": f.is_restricted() }),
            ))
        }
        MsoCmd::LtftReport { alg, max_len } => {
            let a = load_algebra(alg)?;
            let r = mso::ltft_definability_report(&a, *max_len)?;
            let text = format!(
                "states {}\nformula size {}\nrestricted {}\nwords checked {} (length <= {})\nmismatches {}\n{}",
                r.states,
                r.formula_size,
                r.restricted,
                r.words_checked,
                r.max_len,
                r.mismatches,
                if r.passed() { "PASS" } else { "FAIL" }
            );
            Ok(Report {
                text,
                json: json!({ "report": r, "passed": r.passed() }),
                pass: r.passed(),
            })
        }
    }
}

fn diagram(path: &Path, genus: usize, budget: Option<u128>) -> Result<Report, CliError> {
    let g = load_group(path)?;
    let order = g.order();
    let mut steps: Vec<(bool, String)> = Vec::new();

    let r = verify_group_code(&g)?;
    steps.push((
        r.biprefix(),
        format!("group code is biprefix (prefix={}, suffix={})", r.code_is_prefix, r.code_is_suffix),
    ));
    steps.push((
        r.dimension_matches(),
        format!("syntactic algebra has dim |G| ({} = {order})", r.syntactic_dim),
    ));
    steps.push((r.isomorphic(), format!("syntactic algebra ≅ Q[G] via letters ({:?})", r.letter_map)));
    steps.push((r.semisimple, "syntactic algebra is semisimple".into()));

    let (qg, dw) = g.group_algebra(GroupForm::Dw)?;
    let contraction = budget.unwrap_or(DEFAULT_CONTRACTION_BUDGET);
    let sum = tft::state_sum(&qg, &Triangulation::standard(genus), contraction)?;
    let (sector, sector_form) = tft::closed_sector(&qg)?;
    let sector_value = tft::closed_invariant(&sector, &sector_form, genus)?;
    steps.push((
        sum == sector_value,
        format!(
            "state sum at genus {genus} = {} vs closed sector {}",
            format_rational(&sum),
            format_rational(&sector_value)
        ),
    ));

    let (sub, center) = qg.center();
    let classes = g.conjugacy_class_count();
    steps.push((
        center.dim() == classes,
        format!("center has dim {} = {classes} conjugacy classes", center.dim()),
    ));
    let center_form = qg.restrict_functional(&dw, &sub.basis_vectors())?;
    let invariant = tft::closed_invariant(&center, &center_form, genus)?;

    let hom_budget = budget.map_or(DEFAULT_HOM_BUDGET, |b| b.min(u64::MAX as u128) as u64);
    let count = g.count_surface_homs(genus, hom_budget)?;
    let oracle = ratio(count as i64, order as i64);
    let matched = invariant == oracle;

    let all_pass = steps.iter().all(|(ok, _)| *ok) && matched;
    let mut text = format!("pipeline diagram: group of order {order}, genus {genus}\n");
    for (ok, line) in &steps {
        let _ = writeln!(text, "[{}] {line}", if *ok { "PASS" } else { "FAIL" });
    }
    let _ = write!(
        text,
        "closed_invariant={} oracle={count}/|G|={} {}",
        format_rational(&invariant),
        format_rational(&oracle),
        if matched { "MATCH" } else { "MISMATCH" }
    );
    let json_steps: Vec<Value> = steps
        .iter()
        .map(|(ok, line)| json!({ "pass": ok, "detail": line }))
        .collect();
    Ok(Report {
        text,
        json: json!({
            "group_order": order,
            "genus": genus,
            "steps": json_steps,
            "state_sum": rat_json(&sum),
            "closed_invariant": rat_json(&invariant),
            "hom_count": count.to_string(),
            "oracle": rat_json(&oracle),
            "match": matched,
            "passed": all_pass,
        }),
        pass: all_pass,
    })
}

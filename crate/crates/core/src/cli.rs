//! Command-line front end: degree parsing and the `compute`, `oracle`,
//! `verify` and `table` commands.
//!
//! [`run`] takes the argument list and two writers and returns the process
//! exit code: 0 on success, 1 when a `verify` comparison fails or a
//! computation cannot complete, 2 for bad input or a size guard.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::chord::{refined_invariant, InvariantOptions};
use crate::lattice::{Degree, DegreeError, LatticeVector};
use crate::oracle::{oracle_invariant, OracleError, OracleOptions, DEFAULT_MAX_ENDS};
use crate::poly::RefinedPolynomial;
use crate::store::MemoCache;

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "REFINED_CHORD_CACHE";
/// Default bound on `table --max-degree`.
pub const TABLE_MAX_DEGREE: u32 = 5;
/// Largest `d` accepted by the `P2:` and `P1xP1:` macros.
pub const MACRO_MAX: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid degree: {0}")]
    Invalid(#[from] DegreeError),
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(s: &str) -> Self {
        Cursor {
            chars: s
                .chars()
                .map(|c| if c == '\u{2212}' { '-' } else { c })
                .collect(),
            pos: 0,
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(got) => self.fail(format!("expected '{c}', found '{got}'")),
                None => self.fail(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-' | '+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.fail("expected an integer");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().or_else(|_| {
            self.pos = start;
            self.fail("integer out of range")
        })
    }

    fn positive(&mut self, what: &str, max: i64) -> Result<i64, ParseError> {
        let start = self.pos;
        let v = self.int()?;
        if v <= 0 || v > max {
            self.pos = start;
            self.skip_ws();
            return self.fail(format!("{what} must be in 1..={max}, got {v}"));
        }
        Ok(v)
    }
}

fn parse_vector_at(c: &mut Cursor) -> Result<LatticeVector, ParseError> {
    c.expect('(')?;
    let x = c.int()?;
    c.expect(',')?;
    let y = c.int()?;
    c.expect(')')?;
    Ok(LatticeVector::new(x, y))
}

/// Parses a single vector `(a,b)`.
pub fn parse_vector(s: &str) -> Result<LatticeVector, ParseError> {
    let mut c = Cursor::new(s);
    let v = parse_vector_at(&mut c)?;
    if !c.at_end() {
        return c.fail("trailing input after vector");
    }
    Ok(v)
}

fn parse_macro(c: &mut Cursor, name: &str) -> Result<Result<Degree, DegreeError>, ParseError> {
    match name {
        "P2" => {
            let d = c.positive("degree", MACRO_MAX)?;
            if c.at_end() {
                return Ok(Degree::triangle(d));
            }
            c.expect(':')?;
            let mut parts = vec![c.positive("part", MACRO_MAX)?];
            while c.eat(',') {
                parts.push(c.positive("part", MACRO_MAX)?);
            }
            if !c.at_end() {
                return c.fail("trailing input after partition");
            }
            Ok(Degree::cp2(d, &parts))
        }
        "P1xP1" => {
            let a = c.positive("a", MACRO_MAX)?;
            c.expect(',')?;
            let b = c.positive("b", MACRO_MAX)?;
            if !c.at_end() {
                return c.fail("trailing input after P1xP1 sizes");
            }
            Ok(Degree::rectangle(a, b))
        }
        _ => c.fail(format!("unknown macro {name:?}; expected P2 or P1xP1")),
    }
}

/// Parses a degree written as a vector list `(a,b)^k, …` (exponent optional)
/// or as one of the macros
///
/// * `P2:d`, the triangle `{(-1,0)^d, (0,-1)^d, (1,1)^d}`;
/// * `P2:d:l1,l2,…`, `{(-1,0)^d, (1,1)^d, (0,-l1), (0,-l2), …}` for a partition of `d`;
/// * `P1xP1:a,b`, the rectangle `{(-1,0)^b, (1,0)^b, (0,-1)^a, (0,1)^a}`.
///
/// A Unicode minus sign is read as `-`.
pub fn parse_degree(spec: &str) -> Result<Degree, SpecError> {
    let mut c = Cursor::new(spec);
    if c.peek() != Some('(') {
        let start = c.pos;
        let mut name = String::new();
        while let Some(&ch) = c.chars.get(c.pos) {
            if ch == ':' {
                break;
            }
            name.push(ch);
            c.pos += 1;
        }
        if c.chars.get(c.pos) != Some(&':') {
            return Err(ParseError {
                position: start,
                message: "expected '(' or a macro such as P2:3".into(),
            }
            .into());
        }
        c.pos += 1;
        let name = name.trim().to_string();
        return Ok(parse_macro(&mut c, &name)??);
    }

    let mut vectors = Vec::new();
    loop {
        let v = parse_vector_at(&mut c)?;
        let k = if c.eat('^') {
            c.positive("exponent", MACRO_MAX)?
        } else {
            1
        };
        vectors.extend(std::iter::repeat_n(v, k as usize));
        if c.at_end() {
            break;
        }
        c.expect(',')?;
    }
    Ok(Degree::new(vectors)?)
}

/// Partitions of `d`: `1^d` first, then by decreasing number of parts, then
/// by decreasing largest part. Parts are nonincreasing.
pub fn table_partitions(d: i64) -> Vec<Vec<i64>> {
    fn rec(rest: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| b.cmp(a)));
    out
}

/// `[2, 1, 1]` renders as `2,1^2`.
pub fn partition_label(parts: &[i64]) -> String {
    let mut groups: Vec<(i64, usize)> = Vec::new();
    for &p in parts {
        match groups.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => groups.push((p, 1)),
        }
    }
    groups
        .iter()
        .map(|&(p, k)| {
            if k == 1 {
                p.to_string()
            } else {
                format!("{p}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// One table row per partition of every `d ≤ max_degree`, as
/// `(label, value)` with labels like `N_4(2,1^2)`.
pub fn table_rows(max_degree: u32, cache: &MemoCache) -> Vec<(String, RefinedPolynomial)> {
    let mut rows = Vec::new();
    for d in 1..=i64::from(max_degree) {
        for parts in table_partitions(d) {
            let degree = Degree::cp2(d, &parts).expect("partitions of d are valid");
            let value = refined_invariant(&degree, &InvariantOptions::new(cache))
                .expect("default ends are always available");
            rows.push((format!("N_{d}({})", partition_label(&parts)), value));
        }
    }
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn render(p: &RefinedPolynomial, format: Format) -> String {
    match format {
        Format::Text => p.to_string(),
        Format::Json => p.to_json().to_string(),
    }
}

const DEGREE_HELP: &str = "Degree: a vector list like \"(-1,0)^2,(0,-2),(1,1)^2\", or P2:d, \
P2:d:l1,l2,... (partition of d), or P1xP1:a,b = {(-1,0)^b,(1,0)^b,(0,-1)^a,(0,1)^a}";

#[derive(Debug, Parser)]
#[command(
    name = "refined-chord",
    version,
    about = "Refined tropical boundary invariants of lattice degrees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the invariant with the chord recursion.
    Compute {
        #[arg(help = DEGREE_HELP, allow_hyphen_values = true)]
        degree: String,
        /// First chord end, e.g. "(-1,0)".
        #[arg(long, requires = "vm", allow_hyphen_values = true)]
        v1: Option<String>,
        /// Last chord end, e.g. "(1,1)".
        #[arg(long, requires = "v1", allow_hyphen_values = true)]
        vm: Option<String>,
        /// JSON-lines cache file, read if present and rewritten afterwards.
        #[arg(long, env = CACHE_ENV)]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Count the curves directly at a random generic moment configuration.
    Oracle {
        #[arg(help = DEGREE_HELP, allow_hyphen_values = true)]
        degree: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lift the bound of 10 ends.
        #[arg(long)]
        allow_large: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare the recursion with the direct count under several seeds.
    Verify {
        #[arg(help = DEGREE_HELP, allow_hyphen_values = true)]
        degree: String,
        #[arg(long, default_value_t = 3)]
        seeds: u64,
    },
    /// Print N_d(λ) for every partition λ of every d up to the bound.
    Table {
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Lift the bound of 5 on --max-degree.
        #[arg(long)]
        allow_large: bool,
        #[arg(long, env = CACHE_ENV)]
        cache: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    fn runtime(message: impl std::fmt::Display) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::TooLarge { .. } | OracleError::TooFew(_) => Failure::input(e),
        _ => Failure::runtime(e),
    }
}

fn open_cache(path: Option<&Path>) -> Result<MemoCache, Failure> {
    match path {
        Some(p) if p.exists() => MemoCache::load(p).map_err(Failure::input),
        _ => Ok(MemoCache::new()),
    }
}

fn save_cache(cache: &MemoCache, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => cache.save(p).map_err(Failure::runtime),
        None => Ok(()),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::runtime(e);
    match cli.command {
        Command::Compute {
            degree,
            v1,
            vm,
            cache,
            format,
        } => {
            let d = parse_degree(&degree).map_err(Failure::input)?;
            let store = open_cache(cache.as_deref())?;
            let mut opts = InvariantOptions::new(&store);
            if let (Some(a), Some(b)) = (v1, vm) {
                let a = parse_vector(&a).map_err(Failure::input)?;
                let b = parse_vector(&b).map_err(Failure::input)?;
                opts = opts.with_ends(a, b);
            }
            let value = refined_invariant(&d, &opts).map_err(Failure::input)?;
            writeln!(out, "{}", render(&value, format)).map_err(io)?;
            save_cache(&store, cache.as_deref())?;
            Ok(0)
        }
        Command::Oracle {
            degree,
            seed,
            allow_large,
            format,
        } => {
            let d = parse_degree(&degree).map_err(Failure::input)?;
            let opts = if allow_large {
                OracleOptions::unbounded()
            } else {
                OracleOptions::default()
            };
            let value = oracle_invariant(&d, seed, opts).map_err(oracle_failure)?;
            writeln!(out, "{}", render(&value, format)).map_err(io)?;
            Ok(0)
        }
        Command::Verify { degree, seeds } => {
            let d = parse_degree(&degree).map_err(Failure::input)?;
            if d.len() > DEFAULT_MAX_ENDS {
                return Err(Failure::input(OracleError::TooLarge {
                    m: d.len(),
                    max: DEFAULT_MAX_ENDS,
                }));
            }
            let store = MemoCache::new();
            let expected =
                refined_invariant(&d, &InvariantOptions::new(&store)).map_err(Failure::input)?;
            writeln!(out, "recursion: {expected}").map_err(io)?;
            let mut agree = true;
            for seed in 0..seeds {
                let got =
                    oracle_invariant(&d, seed, OracleOptions::default()).map_err(oracle_failure)?;
                let mark = if got == expected { "" } else { "  MISMATCH" };
                writeln!(out, "oracle (seed {seed}): {got}{mark}").map_err(io)?;
                agree &= got == expected;
            }
            if agree {
                writeln!(out, "agree").map_err(io)?;
                Ok(0)
            } else {
                Err(Failure::runtime("recursion and oracle disagree"))
            }
        }
        Command::Table {
            max_degree,
            allow_large,
            cache,
        } => {
            if max_degree > TABLE_MAX_DEGREE && !allow_large {
                return Err(Failure::input(format!(
                    "--max-degree {max_degree} exceeds the bound of {TABLE_MAX_DEGREE}; pass --allow-large"
                )));
            }
            let store = open_cache(cache.as_deref())?;
            for (label, value) in table_rows(max_degree, &store) {
                writeln!(out, "{label} = {}", value.to_compact_string()).map_err(io)?;
            }
            save_cache(&store, cache.as_deref())?;
            Ok(0)
        }
    }
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{rendered}");
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

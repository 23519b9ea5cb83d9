//! DIMACS CNF reading and writing.
//!
//! The writer emits exactly `p cnf <n> <m>` followed by one line per clause
//! (`1 -2 3 0`), each terminated by `\n`, with no comments.
//!
//! The reader accepts `c` comment lines, blank lines, clauses spanning
//! several lines and a trailing `%` end marker. In strict mode (the default)
//! every clause must have the same width. Relaxed mode accepts mixed widths.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Clause, CnfFormula, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("malformed header `{0}`")]
    MalformedHeader(String),
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("literal {literal} out of range for {n} variables")]
    LiteralOutOfRange { literal: i64, n: usize },
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("clause width {found} differs from {expected} (strict mode)")]
    WidthMismatch { expected: usize, found: usize },
    #[error("variable {0} repeated within a clause")]
    RepeatedVariable(usize),
    #[error("empty clause")]
    EmptyClause,
    #[error("last clause is not terminated by 0")]
    UnterminatedClause,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DimacsOptions {
    /// Accept mixed clause widths.
    pub relaxed: bool,
    /// Clause width to assign when the file has no clauses (a DIMACS header
    /// does not carry `k`). When set in strict mode, every clause must also
    /// have this width. Defaults to 1 for empty files.
    pub width: Option<usize>,
}

impl DimacsOptions {
    pub fn strict() -> Self {
        Self::default()
    }

    pub fn relaxed() -> Self {
        DimacsOptions {
            relaxed: true,
            width: None,
        }
    }

    pub fn with_width(mut self, k: usize) -> Self {
        self.width = Some(k);
        self
    }
}

pub fn write_dimacs(formula: &CnfFormula) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", formula.n(), formula.m()).unwrap();
    for c in formula.clauses() {
        for l in c.literals() {
            write!(out, "{} ", l.to_dimacs()).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

pub fn read_dimacs(text: &str) -> Result<CnfFormula, ParseError> {
    read_dimacs_with(text, DimacsOptions::strict())
}

pub fn read_dimacs_with(text: &str, opts: DimacsOptions) -> Result<CnfFormula, ParseError> {
    let err = |line: usize, kind| ParseError { line, kind };

    let mut header: Option<(usize, usize, usize)> = None; // (n, m, line)
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut clause_line = 0;
    let mut expected_width = opts.width;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(lineno, ParseErrorKind::DuplicateHeader));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", n, m] => n.parse::<usize>().ok().zip(m.parse::<usize>().ok()),
                _ => None,
            };
            match parsed {
                Some((n, m)) if n > 0 => header = Some((n, m, lineno)),
                _ => return Err(err(lineno, ParseErrorKind::MalformedHeader(line.to_string()))),
            }
            continue;
        }
        let Some((n, m, _)) = header else {
            return Err(err(lineno, ParseErrorKind::MissingHeader));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| err(lineno, ParseErrorKind::InvalidToken(tok.to_string())))?;
            if current.is_empty() {
                clause_line = lineno;
            }
            if lit == 0 {
                if current.is_empty() {
                    return Err(err(lineno, ParseErrorKind::EmptyClause));
                }
                if clauses.len() == m {
                    return Err(err(
                        clause_line,
                        ParseErrorKind::ClauseCountMismatch {
                            declared: m,
                            found: m + 1,
                        },
                    ));
                }
                let width = current.len();
                if !opts.relaxed {
                    match expected_width {
                        Some(k) if k != width => {
                            return Err(err(
                                clause_line,
                                ParseErrorKind::WidthMismatch {
                                    expected: k,
                                    found: width,
                                },
                            ))
                        }
                        _ => expected_width = Some(width),
                    }
                }
                clauses.push(Clause {
                    literals: std::mem::take(&mut current),
                });
                continue;
            }
            if lit.unsigned_abs() as usize > n {
                return Err(err(lineno, ParseErrorKind::LiteralOutOfRange { literal: lit, n }));
            }
            let l = Literal::from_dimacs(lit).expect("nonzero literal");
            if current.iter().any(|c| c.variable == l.variable) {
                return Err(err(lineno, ParseErrorKind::RepeatedVariable(l.variable + 1)));
            }
            current.push(l);
        }
    }

    let Some((n, m, header_line)) = header else {
        return Err(err(last_line.max(1), ParseErrorKind::MissingHeader));
    };
    if !current.is_empty() {
        return Err(err(clause_line, ParseErrorKind::UnterminatedClause));
    }
    if clauses.len() != m {
        return Err(err(
            last_line.max(header_line),
            ParseErrorKind::ClauseCountMismatch {
                declared: m,
                found: clauses.len(),
            },
        ));
    }
    let formula = if opts.relaxed {
        let mut f = CnfFormula::new_mixed(n, clauses);
        if let (Ok(f), Some(k)) = (&mut f, opts.width) {
            if f.m() == 0 {
                f.k = k;
            }
        }
        f
    } else {
        CnfFormula::new(n, expected_width.unwrap_or(1), clauses)
    };
    // Ranges and widths were checked above.
    Ok(formula.expect("validated during parsing"))
}

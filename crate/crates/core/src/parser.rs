//! Line-oriented text formats: `.lsys` linear systems and `.alp` asymptotic
//! LPs.
//!
//! ```text
//! # comment
//! vars x1 x2 x3
//! 2 x1 + 3 x2 - x3 <= 5
//! x1 != 0
//! 1/2 x2 > x3
//! ```
//!
//! A term is an optional coefficient (a rational, `K`, or a parenthesized
//! polynomial in `K`), an optional `*`, and a variable; or a bare constant.
//! `K` is reserved for the time parameter. `.alp` files use the same term
//! language with `<=` rows only.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::model::{
    is_valid_name, normalize, AlpConstraint, AlpProblem, CaseDescriptor, Constraint, LinExpr,
    LinearSystem, ModelError, RawRelop, Sign,
};
use crate::numeric::{parse_rational, KPoly, Rational};

/// 1-based line and column range `[start, end)` in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.start)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected `{0}`")]
    Unexpected(String),
    #[error("unexpected end of line")]
    UnexpectedEnd,
    #[error("expected exactly one relational operator")]
    MissingOperator,
    #[error("nonlinear term: `{0}` multiplies another variable")]
    Nonlinear(String),
    #[error("malformed number or polynomial `{0}`")]
    BadNumber(String),
    #[error("constant term depends on K")]
    ParametricConstant,
    #[error("operator `{0}` is not allowed here")]
    OperatorNotAllowed(String),
    #[error("invalid variable name `{0}`")]
    BadName(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {span}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Poly(KPoly),
    Ident(String),
    Plus,
    Minus,
    Star,
    Op(RawRelop, &'static str),
}

struct Lexed {
    tok: Tok,
    start: usize,
    end: usize,
}

fn lex_line(line: &str, line_no: usize) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let err = |kind, start: usize, end: usize| ParseError {
        kind,
        span: SourceSpan {
            line: line_no,
            start: start + 1,
            end: end + 1,
        },
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' | '\u{2212}' => {
                i += 1;
                Tok::Minus
            }
            '*' | '\u{00b7}' => {
                i += 1;
                Tok::Star
            }
            '\u{2264}' => {
                i += 1;
                Tok::Op(RawRelop::Le, "<=")
            }
            '\u{2265}' => {
                i += 1;
                Tok::Op(RawRelop::Ge, ">=")
            }
            '\u{2260}' => {
                i += 1;
                Tok::Op(RawRelop::Ne, "!=")
            }
            '<' | '>' | '=' | '!' => {
                let next_eq = chars.get(i + 1) == Some(&'=');
                let (op, text, width) = match (c, next_eq) {
                    ('<', true) => (RawRelop::Le, "<=", 2),
                    ('<', false) => (RawRelop::Lt, "<", 1),
                    ('>', true) => (RawRelop::Ge, ">=", 2),
                    ('>', false) => (RawRelop::Gt, ">", 1),
                    ('=', true) => (RawRelop::Eq, "=", 2),
                    ('=', false) => (RawRelop::Eq, "=", 1),
                    ('!', true) => (RawRelop::Ne, "!=", 2),
                    _ => return Err(err(ParseErrorKind::Unexpected("!".into()), i, i + 1)),
                };
                i += width;
                Tok::Op(op, text)
            }
            '(' => {
                let close = chars[i..]
                    .iter()
                    .position(|&c| c == ')')
                    .map(|p| p + i)
                    .ok_or_else(|| err(ParseErrorKind::UnexpectedEnd, i, chars.len()))?;
                let inner: String = chars[i + 1..close]
                    .iter()
                    .map(|&c| if c == '\u{2212}' { '-' } else { c })
                    .collect();
                i = close + 1;
                Tok::Poly(
                    KPoly::from_str(&inner)
                        .map_err(|_| err(ParseErrorKind::BadNumber(inner.clone()), start, i))?,
                )
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                Tok::Num(
                    parse_rational(&text)
                        .map_err(|_| err(ParseErrorKind::BadNumber(text.clone()), start, i))?,
                )
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                if text == "K" {
                    Tok::Poly(KPoly::k())
                } else {
                    Tok::Ident(text)
                }
            }
            other => return Err(err(ParseErrorKind::Unexpected(other.to_string()), i, i + 1)),
        };
        out.push(Lexed {
            tok,
            start: start + 1,
            end: i + 1,
        });
    }
    Ok(out)
}

/// Linear expression whose constant may still depend on `K`.
#[derive(Default)]
struct RawExpr {
    terms: BTreeMap<String, KPoly>,
    constant: KPoly,
}

fn parse_expr(toks: &[Lexed], line: usize) -> Result<RawExpr, ParseError> {
    let span_of = |t: &Lexed| SourceSpan {
        line,
        start: t.start,
        end: t.end,
    };
    let mut expr = RawExpr::default();
    let mut i = 0;
    if toks.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::UnexpectedEnd,
            span: SourceSpan {
                line,
                start: 1,
                end: 1,
            },
        });
    }
    let mut first = true;
    while i < toks.len() {
        let mut negative = false;
        let mut saw_sign = false;
        while let Some(Tok::Plus | Tok::Minus) = toks.get(i).map(|t| &t.tok) {
            if toks[i].tok == Tok::Minus {
                negative = !negative;
            }
            saw_sign = true;
            i += 1;
        }
        if !first && !saw_sign {
            return Err(ParseError {
                kind: ParseErrorKind::Unexpected(describe(&toks[i].tok)),
                span: span_of(&toks[i]),
            });
        }
        first = false;
        let mut coef = KPoly::one();
        let mut var: Option<String> = None;
        let mut factors = 0;
        while let Some(t) = toks.get(i) {
            match &t.tok {
                Tok::Plus | Tok::Minus => break,
                Tok::Star => {}
                Tok::Num(_) | Tok::Poly(_) if var.is_some() => {
                    return Err(ParseError {
                        kind: ParseErrorKind::Unexpected(describe(&t.tok)),
                        span: span_of(t),
                    })
                }
                Tok::Num(n) => {
                    coef = coef.scale(n);
                    factors += 1;
                }
                Tok::Poly(p) => {
                    coef = &coef * p;
                    factors += 1;
                }
                Tok::Ident(name) => {
                    if let Some(prev) = &var {
                        return Err(ParseError {
                            kind: ParseErrorKind::Nonlinear(prev.clone()),
                            span: span_of(t),
                        });
                    }
                    if !is_valid_name(name) {
                        return Err(ParseError {
                            kind: ParseErrorKind::BadName(name.clone()),
                            span: span_of(t),
                        });
                    }
                    var = Some(name.clone());
                    factors += 1;
                }
                Tok::Op(..) => unreachable!("operators are split out before"),
            }
            i += 1;
        }
        if factors == 0 {
            let (kind, span) = match toks.get(i) {
                Some(t) => (ParseErrorKind::Unexpected(describe(&t.tok)), span_of(t)),
                None => (
                    ParseErrorKind::UnexpectedEnd,
                    span_of(toks.last().expect("non-empty")),
                ),
            };
            return Err(ParseError { kind, span });
        }
        if negative {
            coef = -coef;
        }
        match var {
            Some(v) => {
                let entry = expr.terms.entry(v.clone()).or_default();
                *entry = &*entry + &coef;
                if entry.is_zero() {
                    expr.terms.remove(&v);
                }
            }
            None => expr.constant = &expr.constant + &coef,
        }
    }
    Ok(expr)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => n.to_string(),
        Tok::Poly(p) => format!("({p})"),
        Tok::Ident(s) => s.clone(),
        Tok::Plus => "+".into(),
        Tok::Minus => "-".into(),
        Tok::Star => "*".into(),
        Tok::Op(_, s) => (*s).into(),
    }
}

/// Splits a lexed line at its single relational operator.
fn split_relation(
    toks: Vec<Lexed>,
    line: usize,
) -> Result<(RawExpr, (RawRelop, &'static str), RawExpr), ParseError> {
    let ops: Vec<usize> = toks
        .iter()
        .enumerate()
        .filter(|(_, t)| matches!(t.tok, Tok::Op(..)))
        .map(|(i, _)| i)
        .collect();
    if ops.len() != 1 {
        let (start, end) = match ops.get(1) {
            Some(&i) => (toks[i].start, toks[i].end),
            None => (1, toks.last().map_or(1, |t| t.end)),
        };
        return Err(ParseError {
            kind: ParseErrorKind::MissingOperator,
            span: SourceSpan { line, start, end },
        });
    }
    let at = ops[0];
    let op = match toks[at].tok {
        Tok::Op(op, text) => (op, text),
        _ => unreachable!(),
    };
    let lhs = parse_expr(&toks[..at], line)?;
    let rhs = parse_expr(&toks[at + 1..], line)?;
    Ok((lhs, op, rhs))
}

fn strip_keyword<'a>(line: &'a str, keyword: &str) -> Option<&'a str> {
    let rest = line.trim_start().strip_prefix(keyword)?;
    (rest.is_empty() || rest.starts_with(char::is_whitespace)).then_some(rest)
}

fn parse_vars(rest: &str, line: usize) -> Result<Vec<String>, ParseError> {
    let body = rest.split('#').next().unwrap_or("");
    body.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|name| {
            if is_valid_name(name) {
                Ok(name.to_string())
            } else {
                Err(ParseError {
                    kind: ParseErrorKind::BadName(name.to_string()),
                    span: SourceSpan {
                        line,
                        start: 1,
                        end: 1,
                    },
                })
            }
        })
        .collect()
}

pub fn parse_system(text: &str) -> Result<LinearSystem, ParseError> {
    let mut declared: Option<Vec<String>> = None;
    let mut constraints = Vec::new();
    let mut last_line = 0;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        if let Some(rest) = strip_keyword(line, "vars") {
            declared
                .get_or_insert_with(Vec::new)
                .extend(parse_vars(rest, line_no)?);
            continue;
        }
        let toks = lex_line(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let (lhs, (op, _), rhs) = split_relation(toks, line_no)?;
        let to_lin = |e: RawExpr| -> Result<LinExpr, ParseError> {
            if !e.constant.is_constant() {
                return Err(ParseError {
                    kind: ParseErrorKind::ParametricConstant,
                    span: SourceSpan {
                        line: line_no,
                        start: 1,
                        end: line.chars().count() + 1,
                    },
                });
            }
            Ok(LinExpr {
                terms: e.terms,
                constant: e.constant.constant_term(),
            })
        };
        constraints.push(normalize(to_lin(lhs)?, op, to_lin(rhs)?));
    }
    let result = match declared {
        Some(vars) => LinearSystem::new(vars, constraints),
        None => LinearSystem::from_constraints(constraints),
    };
    result.map_err(|e| ParseError {
        kind: e.into(),
        span: SourceSpan {
            line: last_line.max(1),
            start: 1,
            end: 1,
        },
    })
}

/// Writes `coeff var` with its sign; `first` controls the leading separator.
fn write_term(out: &mut String, coeff: &KPoly, var: Option<&str>, first: bool) {
    let negative = coeff.sign_at_infinity() < 0;
    let mag = if negative { -coeff } else { coeff.clone() };
    match (first, negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    let is_monomial = mag.coeffs().iter().filter(|c| !c.is_zero()).count() == 1;
    let mag_text = if mag.is_constant() || is_monomial {
        mag.to_string()
    } else {
        format!("({mag})")
    };
    match var {
        Some(v) if mag == KPoly::one() => out.push_str(v),
        Some(v) => {
            let _ = write!(out, "{mag_text} {v}");
        }
        None => out.push_str(&mag_text),
    }
}

fn write_terms<'a>(
    out: &mut String,
    order: impl IntoIterator<Item = &'a String>,
    coeffs: &BTreeMap<String, KPoly>,
    first: &mut bool,
) {
    for v in order {
        if let Some(c) = coeffs.get(v) {
            write_term(out, c, Some(v), *first);
            *first = false;
        }
    }
}

pub fn render_constraint(c: &Constraint, order: &[String]) -> String {
    let mut out = String::new();
    let mut first = true;
    write_terms(&mut out, order, &c.coeffs, &mut first);
    if first {
        out.push('0');
    }
    let _ = write!(out, " {} {}", c.relop.symbol(), c.rhs);
    out
}

/// Canonical text: a header comment, the `vars` line, then one row per
/// line with terms in declaration order.
pub fn render_system(system: &LinearSystem) -> String {
    let counts = system.counts();
    let mut out = format!(
        "# linear system: N={} P={} Q={} R={} EQ={}\n",
        counts.n, counts.p, counts.q, counts.r, counts.eq
    );
    if !system.variables().is_empty() {
        let _ = writeln!(out, "vars {}", system.variables().join(" "));
    }
    for c in system.constraints() {
        out.push_str(&render_constraint(c, system.variables()));
        out.push('\n');
    }
    out
}

/// One row as `lhs <= 0`: the constant sits after the input variables'
/// terms and before the auxiliary ones, as in `1 - K e <= 0`.
pub fn render_alp_row(row: &AlpConstraint, alp: &AlpProblem) -> String {
    let mut out = String::new();
    let mut first = true;
    write_terms(&mut out, alp.original_variables(), &row.coeffs, &mut first);
    let constant = -&row.rhs;
    if !constant.is_zero() {
        write_term(&mut out, &constant, None, first);
        first = false;
    }
    write_terms(
        &mut out,
        &alp.variables[alp.n_original..],
        &row.coeffs,
        &mut first,
    );
    if first {
        out.push('0');
    }
    out.push_str(" <= 0");
    out
}

pub fn render_alp(alp: &AlpProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# alp case: {}", alp.case);
    let _ = writeln!(out, "# original-vars: {}", alp.n_original);
    let _ = writeln!(out, "# rows: {}", alp.rows.len());
    if !alp.variables.is_empty() {
        let _ = writeln!(out, "vars {}", alp.variables.join(" "));
    }
    for row in &alp.rows {
        out.push_str(&render_alp_row(row, alp));
        out.push('\n');
    }
    out
}

impl FromStr for CaseDescriptor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let sign = |w: &str| match w {
            "pos" => Ok(Sign::Pos),
            "neg" => Ok(Sign::Neg),
            _ => Err(format!("bad sign `{w}`")),
        };
        let index = |w: &str| {
            w.strip_prefix('z')
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| format!("bad index `{w}`"))
        };
        match words.as_slice() {
            ["empty"] => Ok(CaseDescriptor::Empty),
            ["single", "f1", s] => Ok(CaseDescriptor::Single(sign(s)?)),
            ["pair", a, sa, b, sb] => Ok(CaseDescriptor::Pair {
                a: index(a)?,
                b: index(b)?,
                signs: (sign(sa)?, sign(sb)?),
            }),
            _ => Err(format!("bad case descriptor `{s}`")),
        }
    }
}

/// Reads back a file produced by [`render_alp`].
pub fn parse_alp(text: &str) -> Result<AlpProblem, ParseError> {
    let mut variables = Vec::new();
    let mut n_original = None;
    let mut case = CaseDescriptor::Empty;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let meta_err = |what: &str| ParseError {
            kind: ParseErrorKind::Unexpected(what.to_string()),
            span: SourceSpan {
                line: line_no,
                start: 1,
                end: line.chars().count() + 1,
            },
        };
        if let Some(rest) = line.strip_prefix("# alp case:") {
            case = rest.trim().parse().map_err(|e: String| meta_err(&e))?;
            continue;
        }
        if let Some(rest) = line.strip_prefix("# original-vars:") {
            n_original = Some(rest.trim().parse().map_err(|_| meta_err(rest))?);
            continue;
        }
        if let Some(rest) = strip_keyword(line, "vars") {
            variables.extend(parse_vars(rest, line_no)?);
            continue;
        }
        let toks = lex_line(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let (lhs, (op, text), rhs) = split_relation(toks, line_no)?;
        if op != RawRelop::Le {
            return Err(ParseError {
                kind: ParseErrorKind::OperatorNotAllowed(text.to_string()),
                span: SourceSpan {
                    line: line_no,
                    start: 1,
                    end: 1,
                },
            });
        }
        let mut coeffs = lhs.terms;
        for (v, c) in rhs.terms {
            let e = coeffs.entry(v).or_default();
            *e = &*e - &c;
        }
        rows.push(AlpConstraint::new(coeffs, &rhs.constant - &lhs.constant));
    }
    let n_original = n_original.unwrap_or(variables.len());
    Ok(AlpProblem {
        variables,
        n_original,
        rows,
        case,
    })
}

//! The `.loop` file format.
//!
//! ```text
//! # while x1 >= 2: x1 := x1 div 2
//! vars: x1 x2
//! guard: x1 >= 2
//! update: 2*x1' <= x1, 2*x1' + 1 >= x1
//!         x2' = x2 + 1
//! ```
//!
//! A `single:` section may replace the `guard:`/`update:` pair. Coefficients
//! are integers or `p/q`; strict relations are rejected.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{QVector, Rational};
use crate::constraints::{ConstraintError, ConstraintSystem, LinConstraint, LoopModel, LoopShape, Relation, VarSpace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    MissingVars,
    UndeclaredVariable(String),
    PrimedInGuard(String),
    StrictRelation,
    /// The variable list itself is unusable.
    Declaration(ConstraintError),
}

/// A diagnostic at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::MissingVars => f.write_str("expected `vars:` as the first line"),
            ParseErrorKind::UndeclaredVariable(v) => write!(f, "undeclared variable `{v}`"),
            ParseErrorKind::PrimedInGuard(v) => write!(f, "primed variable `{v}'` in a guard"),
            ParseErrorKind::StrictRelation => f.write_str("strict inequalities are not accepted"),
            ParseErrorKind::Declaration(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var { name: String, primed: bool },
    Plus,
    Minus,
    Star,
    Rel(Relation),
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn err(line: usize, col: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, col, kind }
}

fn syntax(line: usize, col: usize, msg: &str) -> ParseError {
    err(line, col, ParseErrorKind::Syntax(msg.to_string()))
}

/// `col0` is the 1-based column of `s[0]` in the source line.
fn lex(s: &str, line: usize, col0: usize) -> Result<Vec<Lexed>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '<' | '>' => {
                if chars.get(i + 1) == Some(&'=') {
                    i += 1;
                    Tok::Rel(if c == '<' { Relation::Le } else { Relation::Ge })
                } else {
                    return Err(err(line, col, ParseErrorKind::StrictRelation));
                }
            }
            '=' => {
                if chars.get(i + 1) == Some(&'=') {
                    i += 1;
                }
                Tok::Rel(Relation::Eq)
            }
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                if chars.get(i + 1) == Some(&'/') {
                    i += 1;
                    if !chars.get(i + 1).is_some_and(char::is_ascii_digit) {
                        return Err(syntax(line, col0 + i + 1, "expected a denominator after `/`"));
                    }
                    while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                }
                if chars.get(i + 1) == Some(&'.') {
                    return Err(syntax(line, col0 + i + 1, "decimal numbers are not accepted; use p/q"));
                }
                let text: String = chars[start..=i].iter().collect();
                match text.parse::<Rational>() {
                    Ok(q) => Tok::Num(q),
                    Err(_) => return Err(syntax(line, col, "zero denominator")),
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() && (chars[i + 1].is_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                let name: String = chars[start..=i].iter().collect();
                let primed = chars.get(i + 1) == Some(&'\'');
                if primed {
                    i += 1;
                }
                Tok::Var { name, primed }
            }
            _ => return Err(syntax(line, col, "unexpected character")),
        };
        out.push(Lexed { tok, col });
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Single,
    Guard,
    Update,
}

struct Ctx<'a> {
    space: &'a VarSpace,
    section: Section,
    line: usize,
}

/// Parses one side: returns the accumulated coefficients (per column) and constant.
fn side(ctx: &Ctx<'_>, toks: &[Lexed], end_col: usize) -> Result<(Vec<Rational>, Rational), ParseError> {
    let n = ctx.space.n();
    let mut coeffs = vec![Rational::zero(); 2 * n];
    let mut constant = Rational::zero();
    if toks.is_empty() {
        return Err(syntax(ctx.line, end_col, "expected an expression"));
    }
    let mut i = 0;
    let mut first = true;
    while i < toks.len() {
        let mut sign = Rational::one();
        match toks[i].tok {
            Tok::Plus => i += 1,
            Tok::Minus => {
                sign = -sign;
                i += 1;
            }
            _ if first => {}
            _ => return Err(syntax(ctx.line, toks[i].col, "expected `+` or `-`")),
        }
        first = false;
        let at = |i: usize| toks.get(i).map_or(end_col, |t| t.col);
        let mut coef = None;
        if let Some(Lexed { tok: Tok::Num(q), .. }) = toks.get(i) {
            coef = Some(q.clone());
            i += 1;
            if matches!(toks.get(i), Some(Lexed { tok: Tok::Star, .. })) {
                i += 1;
                if !matches!(toks.get(i), Some(Lexed { tok: Tok::Var { .. }, .. })) {
                    return Err(syntax(ctx.line, at(i), "expected a variable after `*`"));
                }
            }
        }
        match toks.get(i) {
            Some(Lexed { tok: Tok::Var { name, primed }, col }) => {
                if matches!(ctx.section, Section::Guard) && *primed {
                    return Err(err(ctx.line, *col, ParseErrorKind::PrimedInGuard(name.clone())));
                }
                let Some(j) = ctx.space.column(name, *primed) else {
                    return Err(err(ctx.line, *col, ParseErrorKind::UndeclaredVariable(name.clone())));
                };
                let c = coef.unwrap_or_else(Rational::one);
                coeffs[j] = &coeffs[j] + &(&sign * &c);
                i += 1;
            }
            _ => match coef {
                Some(c) => constant = &constant + &(&sign * &c),
                None => return Err(syntax(ctx.line, at(i), "expected a number or a variable")),
            },
        }
    }
    Ok((coeffs, constant))
}

fn constraint(ctx: &Ctx<'_>, toks: &[Lexed], end_col: usize) -> Result<LinConstraint, ParseError> {
    let rels: Vec<usize> = (0..toks.len()).filter(|&i| matches!(toks[i].tok, Tok::Rel(_))).collect();
    let k = match rels.as_slice() {
        [k] => *k,
        [] => return Err(syntax(ctx.line, toks.first().map_or(end_col, |t| t.col), "expected `<=`, `=` or `>=`")),
        [_, k, ..] => return Err(syntax(ctx.line, toks[*k].col, "only one relation per constraint")),
    };
    let Tok::Rel(rel) = toks[k].tok else { unreachable!() };
    let (l, lc) = side(ctx, &toks[..k], toks[k].col)?;
    let (r, rc) = side(ctx, &toks[k + 1..], end_col)?;
    let coeffs: Vec<Rational> = l.iter().zip(&r).map(|(a, b)| a - b).collect();
    Ok(LinConstraint::new(QVector::new(coeffs), rel, &rc - &lc))
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a)
}

/// Splits `name:` off a line, returning the header and the 1-based column after the colon.
fn header(line: &str) -> Option<(&str, &str, usize)> {
    let (h, rest) = line.split_once(':')?;
    let h = h.trim();
    if h.is_empty() || !h.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return None;
    }
    Some((h, rest, line[..line.len() - rest.len()].chars().count() + 1))
}

pub fn parse_loop(text: &str) -> Result<LoopModel, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l)));
    let first = lines.by_ref().find(|(_, l)| !l.trim().is_empty());
    let Some((vline, vtext)) = first else {
        let last = text.lines().count().max(1);
        return Err(err(last, 1, ParseErrorKind::MissingVars));
    };
    let (space, _) = match header(vtext) {
        Some(("vars", rest, col)) => {
            let names: Vec<&str> = rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
            for name in &names {
                let ok = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                    && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                if !ok {
                    return Err(syntax(vline, col, "variable names are identifiers"));
                }
            }
            let space = VarSpace::new(names.iter().copied()).map_err(|e| err(vline, col, ParseErrorKind::Declaration(e)))?;
            (space, col)
        }
        _ => {
            let col = vtext.chars().take_while(|c| c.is_whitespace()).count() + 1;
            return Err(err(vline, col, ParseErrorKind::MissingVars));
        }
    };
    let mut single: Option<ConstraintSystem> = None;
    let mut guard: Option<ConstraintSystem> = None;
    let mut update: Option<ConstraintSystem> = None;
    let mut current: Option<Section> = None;
    let mut last_line = vline;
    for (ln, l) in lines {
        last_line = ln;
        if l.trim().is_empty() {
            continue;
        }
        let (body, col0) = match header(l) {
            Some((h, rest, col)) => {
                let next = match (h, current) {
                    ("single", None) => Section::Single,
                    ("guard", None) => Section::Guard,
                    ("update", Some(Section::Guard)) => Section::Update,
                    ("single" | "guard" | "update" | "vars", _) => {
                        return Err(syntax(ln, 1, &alloc::format!("unexpected `{h}:` section here")));
                    }
                    _ => return Err(syntax(ln, 1, &alloc::format!("unknown section `{h}:`"))),
                };
                let slot = match next {
                    Section::Single => &mut single,
                    Section::Guard => &mut guard,
                    Section::Update => &mut update,
                };
                *slot = Some(space.empty_system());
                current = Some(next);
                (rest, col)
            }
            None => (l, 1),
        };
        let Some(sec) = current else {
            return Err(syntax(ln, 1, "expected a `single:` or `guard:` section"));
        };
        let ctx = Ctx { space: &space, section: sec, line: ln };
        let mut offset = col0;
        for part in body.split(',') {
            let width = part.chars().count();
            if !part.trim().is_empty() {
                let toks = lex(part, ln, offset)?;
                let row = constraint(&ctx, &toks, offset + width)?;
                let target = match sec {
                    Section::Single => single.as_mut(),
                    Section::Guard => guard.as_mut(),
                    Section::Update => update.as_mut(),
                };
                target.expect("section opened").push(row).expect("rows span the loop columns");
            } else if body.split(',').count() > 1 {
                return Err(syntax(ln, offset, "empty constraint between commas"));
            }
            offset += width + 1;
        }
    }
    let end = last_line + 1;
    match (single, guard, update) {
        (Some(c), None, None) => Ok(LoopModel::single(space, c).expect("parsed rows are well formed")),
        (None, Some(g), Some(u)) => Ok(LoopModel::guarded(space, g, u).expect("parsed rows are well formed")),
        (None, Some(_), None) => Err(syntax(end, 1, "missing `update:` section")),
        _ => Err(syntax(end, 1, "missing `single:` or `guard:` section")),
    }
}

fn write_section(out: &mut String, name: &str, c: &ConstraintSystem) {
    out.push_str(name);
    out.push(':');
    for (i, r) in c.rows().iter().enumerate() {
        out.push_str(if i == 0 { " " } else { "\n  " });
        out.push_str(&r.render(c.vars()));
    }
    out.push('\n');
}

/// Writes `l` in the format read by [`parse_loop`], one constraint per line.
pub fn serialize_loop(l: &LoopModel) -> String {
    let mut out = String::from("vars:");
    for n in l.space().names() {
        out.push(' ');
        out.push_str(n);
    }
    out.push('\n');
    match l.shape() {
        LoopShape::Single(c) => write_section(&mut out, "single", c),
        LoopShape::Guarded { guard, update } => {
            write_section(&mut out, "guard", guard);
            write_section(&mut out, "update", update);
        }
    }
    out
}

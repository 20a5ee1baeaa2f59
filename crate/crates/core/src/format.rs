//! Text formats.
//!
//! Ideal files hold one monomial per line (`x1*x2^3`), `#` comments and the
//! directives `@minimalize` and `@nvars N`. Matroid files hold one basis
//! per line as space-separated 1-based elements. Polynomials are sums of
//! terms with integer coefficients (`3*x1^2 - x2 + 1`). Sequence files
//! hold `key: item, item, ...` lines.

use std::fmt::Write as _;

use crate::dg::{AciInput, SequenceStep};
use crate::error::{Error, Result};
use crate::ideal::OrderedIdeal;
use crate::ring::{coeff, Monomial, Polynomial};

fn parse_err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        column,
        message: message.into(),
    })
}

/// Monomial as `(0-based variable, exponent)` pairs, before the number of
/// variables is known.
type RawMonomial = Vec<(usize, u32)>;

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
    line: usize,
    // column offset of `text` within its line, 0-based
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize, base: usize) -> Self {
        Cursor {
            text: text.as_bytes(),
            pos: 0,
            line,
            base,
        }
    }

    fn column(&self) -> usize {
        self.base + self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        parse_err(self.line, self.column(), message)
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return self.error("expected an integer");
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        digits.parse().or_else(|_| {
            self.pos = start;
            self.error("integer out of range")
        })
    }

    // term := 'x' INT ('^' INT)?
    fn variable_power(&mut self) -> Result<(usize, u32)> {
        if !self.eat(b'x') {
            return self.error("expected a variable x<index>");
        }
        let col = self.column();
        let index = self.integer()?;
        if index == 0 {
            return parse_err(self.line, col, "variable indices start at 1");
        }
        let exp = if self.eat(b'^') {
            let e = self.integer()?;
            u32::try_from(e).or_else(|_| self.error("exponent out of range"))?
        } else {
            1
        };
        Ok((index as usize - 1, exp))
    }

    // monomial := '1' | term ('*' term)*
    fn monomial(&mut self) -> Result<RawMonomial> {
        if self.peek() == Some(b'1') {
            let save = self.pos;
            if self.integer()? == 1 {
                return Ok(Vec::new());
            }
            self.pos = save;
            return self.error("expected a monomial");
        }
        let mut out = vec![self.variable_power()?];
        while self.eat(b'*') {
            out.push(self.variable_power()?);
        }
        Ok(out)
    }

    // term := INT ('*' monomial)? | monomial
    fn signed_term(&mut self, negative: bool) -> Result<(i64, RawMonomial)> {
        let sign = if negative { -1 } else { 1 };
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let n = i64::try_from(n).or_else(|_| self.error("coefficient out of range"))?;
                if self.eat(b'*') {
                    Ok((sign * n, self.monomial()?))
                } else {
                    Ok((sign * n, Vec::new()))
                }
            }
            _ => Ok((sign, self.monomial()?)),
        }
    }

    // polynomial := '-'? term (('+' | '-') term)*
    fn polynomial(&mut self) -> Result<Vec<(i64, RawMonomial)>> {
        let mut terms = vec![{
            let neg = self.eat(b'-');
            self.signed_term(neg)?
        }];
        loop {
            if self.eat(b'+') {
                terms.push(self.signed_term(false)?);
            } else if self.eat(b'-') {
                terms.push(self.signed_term(true)?);
            } else {
                break;
            }
        }
        Ok(terms)
    }
}

fn max_var(raw: &RawMonomial) -> usize {
    raw.iter().map(|&(v, _)| v + 1).max().unwrap_or(0)
}

fn build_monomial(raw: &RawMonomial, nvars: usize) -> Monomial {
    let mut e = vec![0u32; nvars];
    for &(v, p) in raw {
        e[v] += p;
    }
    Monomial::new(e)
}

fn build_polynomial(raw: &[(i64, RawMonomial)], nvars: usize) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for (c, m) in raw {
        p.add_term(build_monomial(m, nvars), coeff(*c));
    }
    p
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

struct Directives {
    minimalize: bool,
    nvars: Option<usize>,
}

// Handles `@...` lines; returns true if the line was a directive.
fn directive(line: &str, lineno: usize, d: &mut Directives) -> Result<bool> {
    let t = line.trim();
    let Some(rest) = t.strip_prefix('@') else {
        return Ok(false);
    };
    let col = line.find('@').unwrap_or(0) + 1;
    let mut words = rest.split_whitespace();
    match words.next() {
        Some("minimalize") if words.next().is_none() => d.minimalize = true,
        Some("nvars") => {
            let n = words
                .next()
                .and_then(|w| w.parse::<usize>().ok())
                .filter(|_| words.next().is_none());
            match n {
                Some(n) => d.nvars = Some(n),
                None => return parse_err(lineno, col, "expected @nvars <count>"),
            }
        }
        _ => return parse_err(lineno, col, format!("unknown directive @{rest}")),
    }
    Ok(true)
}

fn resolve_nvars(found: usize, declared: Option<usize>) -> Result<usize> {
    match declared {
        Some(n) if n < found => parse_err(0, 0, format!("@nvars {n} but x{found} occurs")),
        Some(n) => Ok(n),
        None => Ok(found),
    }
}

/// Parses an ideal file. Generator order is line order.
pub fn parse_ideal(text: &str) -> Result<OrderedIdeal> {
    let mut d = Directives {
        minimalize: false,
        nvars: None,
    };
    let mut raws: Vec<(usize, RawMonomial)> = Vec::new();
    for (k, full) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = strip_comment(full);
        if line.trim().is_empty() || directive(line, lineno, &mut d)? {
            continue;
        }
        let mut cur = Cursor::new(line, lineno, 0);
        let m = cur.monomial()?;
        if !cur.at_end() {
            return cur.error("unexpected trailing input");
        }
        raws.push((lineno, m));
    }
    if raws.is_empty() {
        return Err(Error::EmptyInput);
    }
    let found = raws.iter().map(|(_, m)| max_var(m)).max().unwrap_or(0);
    let nvars = resolve_nvars(found, d.nvars)?;
    let gens: Vec<Monomial> = raws.iter().map(|(_, m)| build_monomial(m, nvars)).collect();
    if d.minimalize {
        return OrderedIdeal::minimalize(gens);
    }
    OrderedIdeal::new(gens).map_err(|e| match e {
        Error::NonMinimal {
            divisor_line,
            multiple_line,
        } => Error::NonMinimal {
            divisor_line: raws[divisor_line - 1].0,
            multiple_line: raws[multiple_line - 1].0,
        },
        other => other,
    })
}

/// Inverse of [`parse_ideal`]: an `@nvars` line, then one generator per line.
pub fn print_ideal(ideal: &OrderedIdeal) -> String {
    let mut s = String::new();
    writeln!(s, "@nvars {}", ideal.nvars()).expect("string write");
    for g in ideal.generators() {
        writeln!(s, "{g}").expect("string write");
    }
    s
}

/// Parses matroid bases and returns the matroidal ideal in descending
/// degrevlex order.
pub fn parse_matroid(text: &str) -> Result<OrderedIdeal> {
    let mut d = Directives {
        minimalize: false,
        nvars: None,
    };
    let mut bases: Vec<Vec<usize>> = Vec::new();
    for (k, full) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = strip_comment(full);
        if line.trim().is_empty() || directive(line, lineno, &mut d)? {
            continue;
        }
        let mut basis = Vec::new();
        let mut offset = 0;
        for word in line.split_whitespace() {
            let col = line[offset..].find(word).map_or(0, |i| i + offset) + 1;
            offset = col - 1 + word.len();
            match word.parse::<usize>() {
                Ok(0) => return parse_err(lineno, col, "matroid elements start at 1"),
                Ok(e) => basis.push(e - 1),
                Err(_) => return parse_err(lineno, col, format!("expected an element, found {word:?}")),
            }
        }
        basis.sort_unstable();
        if basis.windows(2).any(|w| w[0] == w[1]) {
            return parse_err(lineno, 1, "repeated element in basis");
        }
        bases.push(basis);
    }
    if bases.is_empty() {
        return Err(Error::EmptyInput);
    }
    let found = bases.iter().flatten().map(|&e| e + 1).max().unwrap_or(0);
    let nvars = resolve_nvars(found, d.nvars)?;
    OrderedIdeal::from_matroid_bases(nvars, &bases)
}

/// Parses one polynomial over `nvars` variables.
pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial> {
    let mut cur = Cursor::new(text, 1, 0);
    let raw = cur.polynomial()?;
    if !cur.at_end() {
        return cur.error("unexpected trailing input");
    }
    let found = raw.iter().map(|(_, m)| max_var(m)).max().unwrap_or(0);
    if found > nvars {
        return parse_err(1, 1, format!("x{found} exceeds {nvars} variables"));
    }
    Ok(build_polynomial(&raw, nvars))
}

type RawPolynomial = Vec<(i64, RawMonomial)>;

/// `key: p, p, ...` lines of a sequence file, keys in file order.
struct KeyedLists {
    entries: Vec<(String, usize, RawPolynomial)>,
    words: Vec<(String, usize, Vec<String>)>,
    nvars: usize,
}

// Lists under `poly_keys` are parsed as polynomials; other keys keep their
// comma-separated words.
fn parse_keyed(text: &str, poly_keys: &[&str], word_keys: &[&str]) -> Result<KeyedLists> {
    let mut d = Directives {
        minimalize: false,
        nvars: None,
    };
    let mut entries = Vec::new();
    let mut words = Vec::new();
    let mut found = 0;
    for (k, full) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = strip_comment(full);
        if line.trim().is_empty() || directive(line, lineno, &mut d)? {
            continue;
        }
        let Some(colon) = line.find(':') else {
            return parse_err(lineno, 1, "expected `key: items`");
        };
        let key = line[..colon].trim().to_string();
        let body = &line[colon + 1..];
        if word_keys.contains(&key.as_str()) {
            let ws = body
                .split(',')
                .map(|w| w.trim().to_string())
                .filter(|w| !w.is_empty())
                .collect();
            words.push((key, lineno, ws));
            continue;
        }
        if !poly_keys.contains(&key.as_str()) {
            return parse_err(lineno, 1, format!("unknown key {key:?}"));
        }
        let mut cur = Cursor::new(body, lineno, colon + 1);
        let mut row = Vec::new();
        loop {
            let p = cur.polynomial()?;
            found = found.max(p.iter().map(|(_, m)| max_var(m)).max().unwrap_or(0));
            row.push((key.clone(), lineno, p));
            if cur.at_end() {
                break;
            }
            if !cur.eat(b',') {
                return cur.error("expected ',' between polynomials");
            }
        }
        entries.extend(row);
    }
    let nvars = resolve_nvars(found, d.nvars)?;
    Ok(KeyedLists {
        entries,
        words,
        nvars,
    })
}

fn polys_for(lists: &KeyedLists, key: &str) -> Vec<Polynomial> {
    lists
        .entries
        .iter()
        .filter(|(k, _, _)| k == key)
        .map(|(_, _, p)| build_polynomial(p, lists.nvars))
        .collect()
}

// Rows of the `a` matrix: one polynomial list per `a:` line.
fn matrix_rows(lists: &KeyedLists) -> Vec<Vec<Polynomial>> {
    let mut rows: Vec<(usize, Vec<Polynomial>)> = Vec::new();
    for (k, line, p) in &lists.entries {
        if k != "a" {
            continue;
        }
        let p = build_polynomial(p, lists.nvars);
        match rows.last_mut() {
            Some((l, row)) if l == line => row.push(p),
            _ => rows.push((*line, vec![p])),
        }
    }
    rows.into_iter().map(|(_, r)| r).collect()
}

/// Parses `f:`, `g:` and one `a:` line per matrix row.
pub fn parse_aci(text: &str) -> Result<AciInput> {
    let lists = parse_keyed(text, &["f", "g", "a"], &[])?;
    AciInput::new(polys_for(&lists, "f"), polys_for(&lists, "g"), matrix_rows(&lists))
}

/// Parses `f:` (the sequence), `steps:` (`regular`, `monomial` or
/// `linked`, one per element after the first) and, for a linked step,
/// `g:` and `a:` lines.
pub fn parse_sequence(text: &str) -> Result<(Vec<Polynomial>, Vec<SequenceStep>)> {
    let lists = parse_keyed(text, &["f", "g", "a"], &["steps"])?;
    let f = polys_for(&lists, "f");
    let mut steps = Vec::new();
    for (_, line, ws) in &lists.words {
        for w in ws {
            steps.push(match w.as_str() {
                "regular" => SequenceStep::Regular,
                "monomial" => SequenceStep::Monomial,
                "linked" => SequenceStep::Linked {
                    g: polys_for(&lists, "g"),
                    a: matrix_rows(&lists),
                },
                other => return parse_err(*line, 1, format!("unknown step {other:?}")),
            });
        }
    }
    Ok((f, steps))
}

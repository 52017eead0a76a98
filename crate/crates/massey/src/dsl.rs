//! The definition DSL: a small line-oriented format for describing a free
//! dga, plus the expression grammar shared with the command line.
//!
//! ```text
//! # the real model of the Iwasawa manifold
//! field rationals
//!
//! generators
//!   eta1 : 1
//!   eta5 : 1
//!
//! differentials
//!   eta5 = eta1*eta3 - eta2*eta4
//! ```
//!
//! Expressions are sums of terms; a term is a `*`-joined product of factors;
//! a factor is a rational, the reserved token `s` (the adjoined √θ), a
//! generator name, or a parenthesized expression, optionally raised to a
//! power with `^`. Omitted names in the differential block are closed.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::error::MasseyError;
use crate::field::{format_rational, FieldDescriptor, FieldElement};
use crate::gca::{Dga, Element, FreeDgaBuilder, Monomial};

// ----- tokens -----

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Name(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err_at(line: usize, column: usize, message: impl Into<String>) -> MasseyError {
    MasseyError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str, line: usize, col_offset: usize) -> Result<Vec<Spanned>, MasseyError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = col_offset + i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push(Spanned { tok: Tok::Plus, line, column });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, line, column });
                i += 1;
            }
            '*' => {
                out.push(Spanned { tok: Tok::Star, line, column });
                i += 1;
            }
            '/' => {
                out.push(Spanned { tok: Tok::Slash, line, column });
                i += 1;
            }
            '^' => {
                out.push(Spanned { tok: Tok::Caret, line, column });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, line, column });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, line, column });
                i += 1;
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Int(chars[start..i].iter().collect()),
                    line,
                    column,
                });
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Name(chars[start..i].iter().collect()),
                    line,
                    column,
                });
            }
            _ => return Err(err_at(line, column, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

// ----- evaluation context -----

/// Where expression names resolve to. Implemented by the free builder (while
/// constructing a dga) and by finished algebras (for class expressions).
pub trait ExprContext {
    fn descriptor(&self) -> &FieldDescriptor;
    fn resolve(&self, name: &str) -> Option<Element>;
    fn zero_elem(&self) -> Element;
    fn one_elem(&self) -> Element;
    fn add_elems(&self, x: &Element, y: &Element) -> Element;
    fn mul_elems(&self, x: &Element, y: &Element) -> Element;
    fn scale_elem(&self, x: &Element, c: &FieldElement) -> Element;
}

impl ExprContext for FreeDgaBuilder {
    fn descriptor(&self) -> &FieldDescriptor {
        FreeDgaBuilder::descriptor(self)
    }
    fn resolve(&self, name: &str) -> Option<Element> {
        self.generator(name).ok()
    }
    fn zero_elem(&self) -> Element {
        self.zero()
    }
    fn one_elem(&self) -> Element {
        self.one()
    }
    fn add_elems(&self, x: &Element, y: &Element) -> Element {
        self.add(x, y)
    }
    fn mul_elems(&self, x: &Element, y: &Element) -> Element {
        self.mul(x, y)
    }
    fn scale_elem(&self, x: &Element, c: &FieldElement) -> Element {
        self.scale(x, c)
    }
}

/// Name resolution over a finished algebra: free generators, or the simple
/// identifier labels of a table-backed algebra.
pub struct DgaContext<'a> {
    dga: &'a Dga,
    labels: HashMap<String, Monomial>,
}

impl<'a> DgaContext<'a> {
    pub fn new(dga: &'a Dga) -> Self {
        let mut labels = HashMap::new();
        if !dga.is_free() {
            let top = dga.top_degree().unwrap_or(0);
            for degree in 0..=top {
                let basis = dga.basis(degree);
                for (index, m) in basis.monomials.iter().enumerate() {
                    let label = dga.monomial_label(m);
                    if label
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || c == '_')
                        && !label.chars().next().map_or(true, |c| c.is_ascii_digit())
                    {
                        labels.insert(label, basis.monomials[index].clone());
                    }
                }
            }
        }
        DgaContext { dga, labels }
    }
}

impl ExprContext for DgaContext<'_> {
    fn descriptor(&self) -> &FieldDescriptor {
        self.dga.descriptor()
    }
    fn resolve(&self, name: &str) -> Option<Element> {
        if self.dga.is_free() {
            self.dga.generator_element(name).ok()
        } else {
            self.labels
                .get(name)
                .map(|m| self.dga.monomial_element(m.clone()))
        }
    }
    fn zero_elem(&self) -> Element {
        self.dga.zero()
    }
    fn one_elem(&self) -> Element {
        self.dga.one()
    }
    fn add_elems(&self, x: &Element, y: &Element) -> Element {
        self.dga.add(x, y)
    }
    fn mul_elems(&self, x: &Element, y: &Element) -> Element {
        self.dga.mul(x, y).expect("context-consistent elements")
    }
    fn scale_elem(&self, x: &Element, c: &FieldElement) -> Element {
        self.dga.scale(x, c)
    }
}

// ----- expression parser -----

struct ExprParser<'a, C: ExprContext> {
    toks: &'a [Spanned],
    pos: usize,
    ctx: &'a C,
    end_line: usize,
    end_col: usize,
}

impl<'a, C: ExprContext> ExprParser<'a, C> {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Spanned> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.column),
            None => (self.end_line, self.end_col),
        }
    }

    fn expression(&mut self) -> Result<Element, MasseyError> {
        let mut negate = false;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Minus)) {
            self.bump();
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            let m1 = -&self.ctx.descriptor().one();
            acc = self.ctx.scale_elem(&acc, &m1);
        }
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.ctx.add_elems(&acc, &t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    let m1 = -&self.ctx.descriptor().one();
                    acc = self.ctx.add_elems(&acc, &self.ctx.scale_elem(&t, &m1));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Element, MasseyError> {
        let mut acc = self.factor()?;
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = self.ctx.mul_elems(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element, MasseyError> {
        let base = self.atom()?;
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Caret)) {
            self.bump();
            let (line, col) = self.here();
            let exp = match self.bump() {
                Some(Spanned { tok: Tok::Int(s), .. }) => s.parse::<u32>().map_err(|_| {
                    err_at(line, col, "exponent out of range")
                })?,
                _ => return Err(err_at(line, col, "expected an integer exponent after `^`")),
            };
            let mut acc = self.ctx.one_elem();
            for _ in 0..exp {
                acc = self.ctx.mul_elems(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Element, MasseyError> {
        let (line, col) = self.here();
        match self.bump().map(|t| t.tok.clone()) {
            Some(Tok::Int(numer)) => {
                let mut denom = String::from("1");
                if matches!(self.peek().map(|t| &t.tok), Some(Tok::Slash)) {
                    self.bump();
                    let (dl, dc) = self.here();
                    match self.bump().map(|t| t.tok.clone()) {
                        Some(Tok::Int(d)) => denom = d,
                        _ => return Err(err_at(dl, dc, "expected a denominator after `/`")),
                    }
                }
                let n: BigInt = numer.parse().expect("digits parse as an integer");
                let d: BigInt = denom.parse().expect("digits parse as an integer");
                if d == BigInt::from(0) {
                    return Err(err_at(line, col, "zero denominator"));
                }
                let c = self.ctx.descriptor().from_rational(BigRational::new(n, d));
                Ok(self.ctx.scale_elem(&self.ctx.one_elem(), &c))
            }
            Some(Tok::Name(name)) if name == "s" => {
                let sqrt = self.ctx.descriptor().sqrt_theta().map_err(|_| {
                    err_at(line, col, "`s` used but no square root was adjoined to the field")
                })?;
                Ok(self.ctx.scale_elem(&self.ctx.one_elem(), &sqrt))
            }
            Some(Tok::Name(name)) => self
                .ctx
                .resolve(&name)
                .ok_or_else(|| err_at(line, col, format!("unknown generator `{name}`"))),
            Some(Tok::LParen) => {
                let inner = self.expression()?;
                let (l2, c2) = self.here();
                match self.bump().map(|t| t.tok.clone()) {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(err_at(l2, c2, "expected `)`")),
                }
            }
            Some(_) => Err(err_at(line, col, "expected a scalar, generator, or `(`")),
            None => Err(err_at(line, col, "unexpected end of expression")),
        }
    }
}

/// Parses a single expression (used for differentials and for class
/// expressions on the command line).
pub fn parse_expression<C: ExprContext>(
    ctx: &C,
    text: &str,
    line: usize,
    col_offset: usize,
) -> Result<Element, MasseyError> {
    let toks = tokenize(text, line, col_offset)?;
    if toks.is_empty() {
        return Err(err_at(line, col_offset + 1, "empty expression"));
    }
    let mut p = ExprParser {
        toks: &toks,
        pos: 0,
        ctx,
        end_line: line,
        end_col: col_offset + text.chars().count() + 1,
    };
    let e = p.expression()?;
    if let Some(t) = p.peek() {
        return Err(err_at(t.line, t.column, "trailing input after expression"));
    }
    Ok(e)
}

/// Parses a bare rational such as `-1` or `22/7`.
pub fn parse_rational(text: &str) -> Result<BigRational, MasseyError> {
    let t = text.trim();
    let (neg, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r.trim()),
        None => (false, t),
    };
    let (num_str, den_str) = match rest.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (rest, "1"),
    };
    let parse_int = |s: &str| -> Result<BigInt, MasseyError> {
        if s.is_empty() || !s.chars().all(|c| c.is_ascii_digit()) {
            return Err(err_at(1, 1, format!("`{text}` is not a rational number")));
        }
        Ok(s.parse().expect("digits parse"))
    };
    let n = parse_int(num_str)?;
    let d = parse_int(den_str)?;
    if d == BigInt::from(0) {
        return Err(err_at(1, 1, "zero denominator"));
    }
    let q = BigRational::new(n, d);
    Ok(if neg { -q } else { q })
}

/// Parses a field element in the textual scalar syntax, e.g. `1/2 + 3/4*s`.
///
/// Implemented by evaluating the expression in the one-dimensional unit
/// algebra, so the scalar grammar is exactly the generator-free fragment of
/// the expression grammar.
pub fn parse_scalar(desc: &FieldDescriptor, text: &str) -> Result<FieldElement, MasseyError> {
    struct ScalarCtx<'a> {
        desc: &'a FieldDescriptor,
        dga: Dga,
    }
    impl ExprContext for ScalarCtx<'_> {
        fn descriptor(&self) -> &FieldDescriptor {
            self.desc
        }
        fn resolve(&self, _name: &str) -> Option<Element> {
            None
        }
        fn zero_elem(&self) -> Element {
            self.dga.zero()
        }
        fn one_elem(&self) -> Element {
            self.dga.one()
        }
        fn add_elems(&self, x: &Element, y: &Element) -> Element {
            self.dga.add(x, y)
        }
        fn mul_elems(&self, x: &Element, y: &Element) -> Element {
            self.dga.mul(x, y).expect("unit algebra products")
        }
        fn scale_elem(&self, x: &Element, c: &FieldElement) -> Element {
            self.dga.scale(x, c)
        }
    }
    let ctx = ScalarCtx {
        desc,
        dga: crate::gca::unit_algebra(desc.clone()),
    };
    let e = parse_expression(&ctx, text, 1, 0)?;
    if e.is_zero() {
        return Ok(desc.zero());
    }
    if e.len() == 1 {
        let (_, c) = e.terms().next().expect("one term");
        return Ok(c.clone());
    }
    Err(err_at(1, 1, "expected a scalar"))
}

/// Parses a comma-separated list of bracketed class expressions such as
/// `[eta1],[eta3*eta4],[eta2]`, projecting each closed element to its class.
pub fn parse_class_list(
    dga: &Dga,
    spec: &str,
) -> Result<Vec<crate::cohomology::CohomologyClass>, MasseyError> {
    let ctx = DgaContext::new(dga);
    let mut classes = Vec::new();
    let mut rest = spec.trim();
    let fail = |message: &str| err_at(1, 1, message.to_string());
    while !rest.is_empty() {
        let Some(open) = rest.find('[') else {
            return Err(fail("expected `[` in class list"));
        };
        if !rest[..open].trim().is_empty() {
            return Err(fail("unexpected text before `[` in class list"));
        }
        let Some(close) = rest.find(']') else {
            return Err(fail("unterminated `[` in class list"));
        };
        let inner = &rest[open + 1..close];
        let element = parse_expression(&ctx, inner, 1, open + 1)?;
        if element.is_zero() {
            return Err(fail(
                "cannot infer the degree of a zero class; use a nonzero representative",
            ));
        }
        let class = dga.class_of(&element)?;
        classes.push(class);
        rest = rest[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        } else if !rest.is_empty() {
            return Err(fail("expected `,` between classes"));
        }
    }
    if classes.is_empty() {
        return Err(fail("empty class list"));
    }
    Ok(classes)
}

// ----- document parser -----

/// Parses a full dga document into a validated free [`Dga`].
pub fn parse_document(text: &str) -> Result<Dga, MasseyError> {
    #[derive(PartialEq)]
    enum Section {
        Start,
        Generators,
        Differentials,
    }

    let mut descriptor: Option<FieldDescriptor> = None;
    let mut generators: Vec<(String, u32)> = Vec::new();
    let mut differentials: Vec<(usize, String, String, usize)> = Vec::new(); // line, name, expr, expr col offset
    let mut section = Section::Start;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();

        if trimmed.starts_with("field") {
            if descriptor.is_some() {
                return Err(err_at(lineno, 1, "duplicate field block"));
            }
            let rest: Vec<&str> = trimmed.split_whitespace().collect();
            match rest.as_slice() {
                ["field", "rationals"] => descriptor = Some(FieldDescriptor::rationals()),
                ["field", "rationals", "adjoin_sqrt", theta] => {
                    let q = parse_rational(theta)
                        .map_err(|_| err_at(lineno, 1, format!("`{theta}` is not a rational")))?;
                    descriptor = Some(FieldDescriptor::quadratic(q).map_err(|e| {
                        err_at(lineno, 1, e.to_string())
                    })?);
                }
                _ => {
                    return Err(err_at(
                        lineno,
                        1,
                        "expected `field rationals` or `field rationals adjoin_sqrt <q>`",
                    ))
                }
            }
            continue;
        }
        if trimmed == "generators" {
            section = Section::Generators;
            continue;
        }
        if trimmed == "differentials" {
            section = Section::Differentials;
            continue;
        }

        match section {
            Section::Start => {
                return Err(err_at(
                    lineno,
                    indent + 1,
                    "expected a `field`, `generators`, or `differentials` header",
                ))
            }
            Section::Generators => {
                let Some((name, deg)) = trimmed.split_once(':') else {
                    return Err(err_at(lineno, indent + 1, "expected `name : degree`"));
                };
                let name = name.trim().to_string();
                let deg: u32 = deg.trim().parse().map_err(|_| {
                    err_at(lineno, indent + 1, "degree must be a positive integer")
                })?;
                generators.push((name, deg));
            }
            Section::Differentials => {
                let Some((name, expr)) = trimmed.split_once('=') else {
                    return Err(err_at(lineno, indent + 1, "expected `name = expression`"));
                };
                let expr_offset = line.find('=').expect("split found `=`") + 1;
                differentials.push((
                    lineno,
                    name.trim().to_string(),
                    expr.to_string(),
                    expr_offset,
                ));
            }
        }
    }

    let descriptor = descriptor
        .ok_or_else(|| err_at(1, 1, "missing `field` block"))?;
    if generators.is_empty() && differentials.is_empty() {
        // an empty document still describes the trivial algebra; allow it
    }
    let mut builder = Dga::free_builder(descriptor, generators)
        .map_err(|e| err_at(1, 1, e.to_string()))?;
    for (lineno, name, expr, offset) in differentials {
        let Some(idx) = builder.generator_index(&name) else {
            return Err(err_at(lineno, 1, format!("unknown generator `{name}`")));
        };
        let value = parse_expression(&builder, &expr, lineno, offset)?;
        let expected = builder.generators()[idx].degree + 1;
        if !value.is_zero() && builder.degree_of(&value) != Some(expected) {
            return Err(err_at(
                lineno,
                offset + 1,
                format!("d({name}) must be homogeneous of degree {expected}"),
            ));
        }
        builder
            .set_diff(&name, value)
            .map_err(|e| err_at(lineno, 1, e.to_string()))?;
    }
    builder.build().map_err(|e| match e {
        MasseyError::Parse { .. } => e,
        other => err_at(1, 1, other.to_string()),
    })
}

/// Serializes a free dga back to document form; inverse to [`parse_document`]
/// up to whitespace.
pub fn serialize_document(dga: &Dga) -> Result<String, MasseyError> {
    if !dga.is_free() {
        return Err(MasseyError::InvalidInput(
            "only free algebras serialize to the definition DSL; use the JSON dump instead".into(),
        ));
    }
    let mut out = String::new();
    match dga.descriptor().theta() {
        None => out.push_str("field rationals\n"),
        Some(t) => {
            out.push_str(&format!("field rationals adjoin_sqrt {}\n", format_rational(t)));
        }
    }
    out.push_str("\ngenerators\n");
    for g in dga.generators() {
        out.push_str(&format!("  {} : {}\n", g.name, g.degree));
    }
    out.push_str("\ndifferentials\n");
    for (i, g) in dga.generators().iter().enumerate() {
        let d = dga.diff_of_generator(i);
        if !d.is_zero() {
            out.push_str(&format!("  {} = {}\n", g.name, dga.format_element(d)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUAD_DOC: &str = "\
# quadruple example
field rationals

generators
  x : 2
  y : 3
  a : 4
  b : 4
  u : 6
  v : 6
  w : 7

differentials
  a = x*y
  u = a*y
  v = b*y
  w = 2*x*u - a^2 - b^2
";

    #[test]
    fn parse_quadruple_document() {
        let dga = parse_document(QUAD_DOC).unwrap();
        assert_eq!(dga.generators().len(), 7);
        let w_idx = dga.generator_index("w").unwrap();
        let dw = dga.diff_of_generator(w_idx).clone();
        assert_eq!(dga.format_element(&dw), "2*x*u - a^2 - b^2");
    }

    #[test]
    fn empty_differential_block_means_closed() {
        let doc = "field rationals\ngenerators\n  e1 : 1\n  e2 : 1\ndifferentials\n";
        let dga = parse_document(doc).unwrap();
        for i in 0..2 {
            assert!(dga.diff_of_generator(i).is_zero());
        }
    }

    #[test]
    fn degree_mismatch_has_position() {
        let doc = "field rationals\ngenerators\n  x : 2\n  w : 7\ndifferentials\n  w = x\n";
        let err = parse_document(doc).unwrap_err();
        assert!(err.to_string().contains("degree"), "got: {err}");
    }

    #[test]
    fn unknown_generator_reported() {
        let doc = "field rationals\ngenerators\n  x : 2\ndifferentials\n  x = q*q\n";
        let err = parse_document(doc).unwrap_err();
        match err {
            MasseyError::Parse { line, message, .. } => {
                assert_eq!(line, 5);
                assert!(message.contains("unknown generator"));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn round_trip_document() {
        let dga = parse_document(QUAD_DOC).unwrap();
        let text = serialize_document(&dga).unwrap();
        let again = parse_document(&text).unwrap();
        assert!(dga == again);
    }

    #[test]
    fn scalar_parsing() {
        let q = FieldDescriptor::rationals();
        assert_eq!(parse_scalar(&q, "3/2").unwrap(), q.from_rational(parse_rational("3/2").unwrap()));
        let f = FieldDescriptor::quadratic(parse_rational("-1").unwrap()).unwrap();
        let x = parse_scalar(&f, "1/2 + 3/4*s").unwrap();
        assert_eq!(x.to_string(), "1/2 + 3/4*s");
        let y = parse_scalar(&f, "-s").unwrap();
        assert_eq!(y, -f.sqrt_theta().unwrap());
        assert!(parse_scalar(&q, "s").is_err());
    }

    #[test]
    fn sqrt_scalar_in_expressions() {
        let doc = "field rationals adjoin_sqrt -1\ngenerators\n  p : 1\n  q : 1\n  r : 1\ndifferentials\n  r = s*p*q\n";
        let dga = parse_document(doc).unwrap();
        let r = dga.generator_index("r").unwrap();
        let dr = dga.diff_of_generator(r);
        assert_eq!(dga.format_element(dr), "s*p*q");
    }

    #[test]
    fn rational_parser() {
        assert_eq!(parse_rational("-22/7").unwrap(), BigRational::new(BigInt::from(-22), BigInt::from(7)));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}

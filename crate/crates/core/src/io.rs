//! The `.twc` text format: algebras, twisted objects and morphisms.
//!
//! ```text
//! field = "Q"            # or "Fp:<prime>"
//! [idempotents]
//! 1 2
//! [basis]
//! e1 1 1 -1 unit         # id source target degree [unit]
//! x  1 2  0
//! [bn]
//! 3: [a,a,a] -> 1*c      # written order a_n, ..., a_1
//! tw X { module = { (0,1): 1 }, delta = [ (nu^0 * x * nu^-0, [[1]]) ] }
//! mor f = [ (nu^0 * e1 * nu^-0, [[1]]) ] : X -> X
//! mor h = [ ... ] : Y -> X[1]    # shifted ends
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::ad::{self, AdMorphism, SModule};
use crate::error::{Error, Result};
use crate::hat::{HatBasis, HatIdem};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::section::{BasisElem, Elem, SectionAlgebra};
use crate::tw::{Obj, TwMor, TwObject};

/// Environment variable that overrides the `field` key of every parsed file.
pub const FIELD_ENV: &str = "TWC_FIELD";

/// A parsed file: the algebra plus named objects and morphisms in file order.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub algebra: SectionAlgebra,
    pub objects: Vec<(String, Obj)>,
    pub morphisms: Vec<(String, TwMor)>,
}

impl Workspace {
    pub fn object(&self, name: &str) -> Option<&Obj> {
        self.objects.iter().find(|(n, _)| n == name).map(|(_, o)| o)
    }

    pub fn morphism(&self, name: &str) -> Option<&TwMor> {
        self.morphisms.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Newline,
    Ident(String),
    Int(String),
    Str(String),
    Arrow,
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let tok = if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Int(chars[start..i].iter().collect())
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            } else if c == '"' {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(Error::Parse { line, col, msg: "unterminated string".into() });
                }
                i += 1;
                Tok::Str(chars[start..i - 1].iter().collect())
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                i += 2;
                Tok::Arrow
            } else if "=[]{}(),:*^+-/".contains(c) {
                i += 1;
                Tok::Sym(c)
            } else {
                return Err(Error::Parse { line, col, msg: format!("unexpected character '{c}'") });
            };
            out.push(Token { tok, line, col });
        }
        out.push(Token { tok: Tok::Newline, line, col: chars.len() + 1 });
    }
    let line = out.last().map_or(1, |t| t.line + 1);
    out.push(Token { tok: Tok::Eof, line, col: 1 });
    Ok(out)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Newline => "end of line".into(),
        Tok::Ident(s) | Tok::Int(s) => format!("'{s}'"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Arrow => "'->'".into(),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::Eof => "end of file".into(),
    }
}

/// `[a_n, …, a_1] -> Σ c·b` with the position of the entry.
type BnEntry = (Vec<String>, Vec<(Scalar, String)>, (usize, usize));

#[derive(Default)]
struct Raw {
    field: Option<Field>,
    idems: Vec<String>,
    basis: Vec<BasisElem>,
    entries: Vec<BnEntry>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    field: Field,
    forced: Option<Field>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn at(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.at();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.pos += 1;
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}', found {}", describe(self.peek())))
        }
    }

    /// Like `expect_sym` but newlines may precede the symbol.
    fn expect_sym_nl(&mut self, c: char) -> Result<()> {
        self.skip_newlines();
        self.expect_sym(c)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn end_of_line(&mut self) -> Result<()> {
        match self.peek() {
            Tok::Newline => {
                self.pos += 1;
                Ok(())
            }
            Tok::Eof => Ok(()),
            t => self.err(format!("expected end of line, found {}", describe(t))),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Int(s) => {
                self.pos += 1;
                Ok(s)
            }
            t => self.err(format!("expected a name, found {}", describe(&t))),
        }
    }

    fn keyword(&mut self, k: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == k => {
                self.pos += 1;
                Ok(())
            }
            t => self.err(format!("expected '{k}', found {}", describe(t))),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat_sym('-');
        match self.peek().clone() {
            Tok::Int(s) => {
                let v: i64 = match s.parse() {
                    Ok(v) => v,
                    Err(_) => return self.err("integer out of range"),
                };
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            t => self.err(format!("expected an integer, found {}", describe(&t))),
        }
    }

    fn usize(&mut self) -> Result<usize> {
        let v = self.int()?;
        if v < 0 {
            return self.err("expected a nonnegative integer");
        }
        Ok(v as usize)
    }

    fn scalar(&mut self) -> Result<Scalar> {
        let (line, col) = self.at();
        let neg = self.eat_sym('-');
        let num = match self.next() {
            Tok::Int(s) => s,
            t => return Err(Error::Parse { line, col, msg: format!("expected a scalar, found {}", describe(&t)) }),
        };
        let mut text = if neg { format!("-{num}") } else { num };
        if self.eat_sym('/') {
            match self.next() {
                Tok::Int(d) => {
                    text.push('/');
                    text.push_str(&d);
                }
                t => return Err(Error::Parse { line, col, msg: format!("expected a denominator, found {}", describe(&t)) }),
            }
        }
        self.field.parse(&text).map_err(|e| Error::Parse { line, col, msg: e.to_string() })
    }

    /// `coeff*name + ...`, `name`, or `0`.
    fn elem_terms(&mut self) -> Result<Vec<(Scalar, String)>> {
        if *self.peek() == Tok::Int("0".into()) && matches!(self.toks[self.pos + 1].tok, Tok::Newline | Tok::Eof) {
            self.pos += 1;
            return Ok(vec![]);
        }
        let mut out = Vec::new();
        loop {
            let term = match self.peek() {
                Tok::Ident(_) => (self.field.one(), self.name()?),
                _ => {
                    let c = self.scalar()?;
                    self.expect_sym('*')?;
                    (c, self.name()?)
                }
            };
            out.push(term);
            if !self.eat_sym('+') {
                return Ok(out);
            }
        }
    }

    fn parse_header(&mut self, raw: &mut Raw) -> Result<()> {
        let mut section = String::new();
        loop {
            self.skip_newlines();
            match self.peek().clone() {
                Tok::Eof => return Ok(()),
                Tok::Ident(k) if (k == "tw" || k == "mor") => return Ok(()),
                Tok::Ident(k) if k == "field" && section.is_empty() => {
                    self.pos += 1;
                    self.expect_sym('=')?;
                    let (line, col) = self.at();
                    let f = match self.next() {
                        Tok::Str(s) => s,
                        t => return Err(Error::Parse { line, col, msg: format!("expected a string, found {}", describe(&t)) }),
                    };
                    let f: Field = f.parse().map_err(|e: Error| Error::Parse { line, col, msg: e.to_string() })?;
                    raw.field = Some(f);
                    self.field = self.forced.unwrap_or(f);
                    self.end_of_line()?;
                }
                Tok::Sym('[') => {
                    self.pos += 1;
                    let (line, col) = self.at();
                    section = self.name()?;
                    if !["idempotents", "basis", "bn"].contains(&section.as_str()) {
                        return Err(Error::Parse { line, col, msg: format!("unknown section '{section}'") });
                    }
                    self.expect_sym(']')?;
                    self.end_of_line()?;
                }
                _ => match section.as_str() {
                    "idempotents" => {
                        while !matches!(self.peek(), Tok::Newline | Tok::Eof) {
                            let (line, col) = self.at();
                            let n = self.name()?;
                            if raw.idems.contains(&n) {
                                return Err(Error::Parse { line, col, msg: format!("duplicate idempotent '{n}'") });
                            }
                            raw.idems.push(n);
                        }
                    }
                    "basis" => self.basis_line(raw)?,
                    "bn" => self.bn_line(raw)?,
                    _ => return self.err(format!("unexpected {} outside a section", describe(self.peek()))),
                },
            }
        }
    }

    fn idem(&mut self, raw: &Raw) -> Result<usize> {
        let (line, col) = self.at();
        let n = self.name()?;
        raw.idems
            .iter()
            .position(|i| *i == n)
            .ok_or_else(|| Error::Parse { line, col, msg: format!("unknown idempotent '{n}'") })
    }

    fn basis_line(&mut self, raw: &mut Raw) -> Result<()> {
        let (line, col) = self.at();
        let name = self.name()?;
        if raw.basis.iter().any(|b| b.name == name) {
            return Err(Error::Parse { line, col, msg: format!("duplicate basis element '{name}'") });
        }
        let source = self.idem(raw)?;
        let target = self.idem(raw)?;
        let (dl, dc) = self.at();
        let degree = self.int()?;
        let is_unit = match self.peek() {
            Tok::Ident(s) if s == "unit" => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        if is_unit && degree != -1 {
            return Err(Error::Parse { line: dl, col: dc, msg: format!("unit '{name}' has degree {degree} (units have degree -1)") });
        }
        if is_unit && source != target {
            return Err(Error::Parse { line, col, msg: format!("unit '{name}' is not a loop") });
        }
        raw.basis.push(BasisElem { name, source, target, degree, is_unit });
        self.end_of_line()
    }

    fn bn_line(&mut self, raw: &mut Raw) -> Result<()> {
        let pos = self.at();
        let n = self.usize()?;
        self.expect_sym(':')?;
        self.expect_sym('[')?;
        let mut chain = Vec::new();
        loop {
            chain.push(self.name()?);
            if !self.eat_sym(',') {
                break;
            }
        }
        self.expect_sym(']')?;
        if chain.len() != n {
            return Err(Error::Parse { line: pos.0, col: pos.1, msg: format!("arity {n} but {} arguments", chain.len()) });
        }
        if *self.peek() != Tok::Arrow {
            return self.err(format!("expected '->', found {}", describe(self.peek())));
        }
        self.pos += 1;
        let out = self.elem_terms()?;
        raw.entries.push((chain, out, pos));
        self.end_of_line()
    }

    fn build_algebra(&self, raw: Raw) -> Result<SectionAlgebra> {
        let at = |pos: (usize, usize), msg: String| Error::Parse { line: pos.0, col: pos.1, msg };
        let lookup = |n: &str, pos| {
            raw.basis.iter().position(|b| b.name == n).ok_or_else(|| at(pos, format!("unknown basis element '{n}'")))
        };
        let mut entries = Vec::new();
        let mut first = (1, 1);
        for (k, (chain, out, pos)) in raw.entries.iter().enumerate() {
            if k == 0 {
                first = *pos;
            }
            let c: Vec<usize> = chain.iter().map(|n| lookup(n, *pos)).collect::<Result<_>>()?;
            let mut e = Elem::new();
            for (s, n) in out {
                let b = lookup(n, *pos)?;
                let slot = e.entry(b).or_insert_with(|| self.field.zero());
                *slot += s;
            }
            let probe = SectionAlgebra::new(self.field, raw.idems.clone(), raw.basis.clone(), vec![(c.clone(), e.clone())]);
            if let Err(err) = probe {
                return Err(at(*pos, err.to_string()));
            }
            entries.push((c, e));
        }
        SectionAlgebra::new(self.field, raw.idems, raw.basis, entries).map_err(|e| at(first, e.to_string()))
    }

    fn hat_basis(&mut self, z: &SectionAlgebra) -> Result<HatBasis> {
        self.keyword("nu")?;
        self.expect_sym('^')?;
        let s = self.exponent()?;
        self.expect_sym('*')?;
        let (line, col) = self.at();
        let n = self.name()?;
        let b = z.basis_index(&n).ok_or(Error::Parse { line, col, msg: format!("unknown basis element '{n}'") })?;
        self.expect_sym('*')?;
        self.keyword("nu")?;
        self.expect_sym('^')?;
        let t = -self.exponent()?;
        Ok(HatBasis::new(b, s, t))
    }

    /// A signed integer that may carry several leading minus signs.
    fn exponent(&mut self) -> Result<i64> {
        let mut sign = 1;
        while self.eat_sym('-') {
            sign = -sign;
        }
        Ok(sign * self.int()?)
    }

    fn matrix(&mut self) -> Result<Matrix> {
        let (line, col) = self.at();
        self.expect_sym('[')?;
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        loop {
            self.skip_newlines();
            self.expect_sym('[')?;
            let mut row = Vec::new();
            if !self.eat_sym(']') {
                loop {
                    row.push(self.scalar()?);
                    if self.eat_sym(']') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            rows.push(row);
            self.skip_newlines();
            if self.eat_sym(']') {
                break;
            }
            self.expect_sym(',')?;
        }
        let cols = rows[0].len();
        Matrix::from_rows(self.field, rows, cols).map_err(|e| Error::Parse { line, col, msg: e.to_string() })
    }

    fn module(&mut self, z: &SectionAlgebra) -> Result<SModule> {
        self.expect_sym_nl('{')?;
        let mut dims: BTreeMap<HatIdem, usize> = BTreeMap::new();
        self.skip_newlines();
        if !self.eat_sym('}') {
            loop {
                self.expect_sym_nl('(')?;
                let s = self.int()?;
                self.expect_sym(',')?;
                let (line, col) = self.at();
                let n = self.name()?;
                let i = z.idem_index(&n).ok_or(Error::Parse { line, col, msg: format!("unknown idempotent '{n}'") })?;
                self.expect_sym(')')?;
                self.expect_sym(':')?;
                let d = self.usize()?;
                *dims.entry(HatIdem::new(s, i)).or_insert(0) += d;
                self.skip_newlines();
                if self.eat_sym('}') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        Ok(SModule::new(dims.into_iter().filter(|(_, d)| *d > 0)))
    }

    fn terms(&mut self, z: &SectionAlgebra, src: &SModule, tgt: &SModule) -> Result<AdMorphism> {
        let (line, col) = self.at();
        self.expect_sym_nl('[')?;
        let mut terms = Vec::new();
        self.skip_newlines();
        if !self.eat_sym(']') {
            loop {
                self.expect_sym_nl('(')?;
                self.skip_newlines();
                let a = self.hat_basis(z)?;
                self.expect_sym(',')?;
                self.skip_newlines();
                let m = self.matrix()?;
                self.expect_sym_nl(')')?;
                terms.push((a, m));
                self.skip_newlines();
                if self.eat_sym(']') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        AdMorphism::from_terms(z, src, tgt, terms).map_err(|e| Error::Parse { line, col, msg: e.to_string() })
    }

    fn tw_item(&mut self, ws: &mut Workspace) -> Result<()> {
        let (line, col) = self.at();
        self.keyword("tw")?;
        let name = self.name()?;
        if ws.object(&name).is_some() {
            return Err(Error::Parse { line, col, msg: format!("duplicate object '{name}'") });
        }
        self.expect_sym_nl('{')?;
        self.skip_newlines();
        self.keyword("module")?;
        self.expect_sym('=')?;
        let m = self.module(&ws.algebra)?;
        self.expect_sym_nl(',')?;
        self.skip_newlines();
        self.keyword("delta")?;
        self.expect_sym('=')?;
        let d = self.terms(&ws.algebra, &m, &m)?;
        self.skip_newlines();
        self.eat_sym(',');
        self.expect_sym_nl('}')?;
        let o = TwObject::new(&ws.algebra, m, d).map_err(|e| Error::Parse { line, col, msg: format!("object '{name}': {e}") })?;
        ws.objects.push((name, o));
        self.end_of_line()
    }

    fn mor_item(&mut self, ws: &mut Workspace) -> Result<()> {
        let (line, col) = self.at();
        self.keyword("mor")?;
        let name = self.name()?;
        if ws.morphism(&name).is_some() {
            return Err(Error::Parse { line, col, msg: format!("duplicate morphism '{name}'") });
        }
        self.expect_sym('=')?;
        let start = self.pos;
        // the ends come after the term list; scan ahead for them
        let mut depth = 0i64;
        while !(depth == 0 && *self.peek() == Tok::Sym(':')) {
            match self.next() {
                Tok::Sym('[') | Tok::Sym('(') => depth += 1,
                Tok::Sym(']') | Tok::Sym(')') => depth -= 1,
                Tok::Eof => return Err(Error::Parse { line, col, msg: "morphism literal without ': X -> Y'".into() }),
                _ => {}
            }
        }
        self.pos += 1;
        let obj = |p: &mut Parser| -> Result<Obj> {
            let (line, col) = p.at();
            let n = p.name()?;
            let o = ws.object(&n).cloned().ok_or(Error::Parse { line, col, msg: format!("unknown object '{n}'") })?;
            if p.eat_sym('[') {
                let k = p.int()?;
                p.expect_sym(']')?;
                return Ok(o.shift(k));
            }
            Ok(o)
        };
        let x = obj(self)?;
        if *self.peek() != Tok::Arrow {
            return self.err(format!("expected '->', found {}", describe(self.peek())));
        }
        self.pos += 1;
        let y = obj(self)?;
        let end = self.pos;
        self.pos = start;
        let map = self.terms(&ws.algebra, &x.module, &y.module)?;
        self.skip_newlines();
        self.expect_sym(':')?;
        self.pos = end;
        ws.morphisms.push((name, TwMor { src: x, tgt: y, map }));
        self.end_of_line()
    }
}

/// Parse a `.twc` file; the `TWC_FIELD` environment variable, if set, overrides its field.
pub fn parse(text: &str) -> Result<Workspace> {
    let forced = match std::env::var(FIELD_ENV) {
        Ok(s) if !s.trim().is_empty() => Some(s.parse::<Field>()?),
        _ => None,
    };
    parse_with(text, forced)
}

/// Parse with an explicit field override.
pub fn parse_with(text: &str, field: Option<Field>) -> Result<Workspace> {
    let mut p = Parser { toks: lex(text)?, pos: 0, field: field.unwrap_or(Field::Q), forced: field };
    let mut raw = Raw::default();
    p.parse_header(&mut raw)?;
    if raw.idems.is_empty() {
        return p.err("no idempotents declared");
    }
    let algebra = p.build_algebra(raw)?;
    let mut ws = Workspace { algebra, objects: vec![], morphisms: vec![] };
    loop {
        p.skip_newlines();
        match p.peek().clone() {
            Tok::Eof => return Ok(ws),
            Tok::Ident(k) if k == "tw" => p.tw_item(&mut ws)?,
            Tok::Ident(k) if k == "mor" => p.mor_item(&mut ws)?,
            t => return p.err(format!("expected 'tw' or 'mor', found {}", describe(&t))),
        }
    }
}

/// Canonical text of an algebra (explicit table entries only; unit rules are implied).
pub fn print_algebra(z: &SectionAlgebra) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "field = \"{}\"", z.field());
    let _ = writeln!(s, "\n[idempotents]\n{}", z.idems().join(" "));
    s.push_str("\n[basis]\n");
    for b in z.basis() {
        let unit = if b.is_unit { " unit" } else { "" };
        let _ = writeln!(s, "{} {} {} {}{}", b.name, z.idems()[b.source], z.idems()[b.target], b.degree, unit);
    }
    s.push_str("\n[bn]\n");
    let mut entries = z.explicit_entries().to_vec();
    entries.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    for (chain, out) in entries {
        let names: Vec<&str> = chain.iter().map(|&k| z.basis()[k].name.as_str()).collect();
        let _ = writeln!(s, "{}: [{}] -> {}", chain.len(), names.join(","), z.elem_string(&out));
    }
    s
}

pub fn print_object(z: &SectionAlgebra, name: &str, o: &TwObject) -> String {
    format!("tw {name} {{\n  module = {},\n  delta = {}\n}}\n", o.module.describe(z), o.delta.describe(z))
}

pub fn print_morphism(z: &SectionAlgebra, name: &str, f: &TwMor, src: &str, tgt: &str) -> String {
    format!("mor {name} = {} : {src} -> {tgt}\n", f.map.describe(z))
}

/// Canonical text of a workspace; `parse ∘ print` reproduces it.
pub fn print(ws: &Workspace) -> String {
    let z = &ws.algebra;
    let mut s = print_algebra(z);
    for (n, o) in &ws.objects {
        s.push('\n');
        s.push_str(&print_object(z, n, o));
    }
    let name_of = |o: &Obj| {
        if let Some((n, _)) = ws.objects.iter().find(|(_, p)| std::sync::Arc::ptr_eq(p, o)) {
            return n.clone();
        }
        if let Some((n, _)) = ws.objects.iter().find(|(_, p)| p == o) {
            return n.clone();
        }
        for k in (-8..=8).filter(|&k| k != 0) {
            if let Some((n, _)) = ws.objects.iter().find(|(_, p)| p.shift(k) == *o) {
                return format!("{n}[{k}]");
            }
        }
        String::new()
    };
    if !ws.morphisms.is_empty() {
        s.push('\n');
    }
    for (n, f) in &ws.morphisms {
        s.push_str(&print_morphism(z, n, f, &name_of(&f.src), &name_of(&f.tgt)));
    }
    s
}

/// `[[a,b],[c,d]]`
pub fn matrix_literal(m: &Matrix) -> String {
    ad::matrix_literal(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn shipped_files_match_builtin_algebras() {
        for (text, name) in [(examples::E1_TWC, "e1"), (examples::E2_TWC, "e2"), (examples::E3_TWC, "e3")] {
            let ws = parse_with(text, None).unwrap();
            let z = examples::by_name(name, Field::Q).unwrap();
            assert_eq!(ws.algebra.all_entries(), z.all_entries());
            assert_eq!(print_algebra(&ws.algebra), print_algebra(&z));
        }
    }

    #[test]
    fn print_is_a_fixed_point() {
        for text in [examples::E1_TWC, examples::E2_TWC, examples::E3_TWC] {
            let once = print(&parse_with(text, None).unwrap());
            let twice = print(&parse_with(&once, None).unwrap());
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn unit_of_degree_zero_rejected_with_position() {
        let text = "[idempotents]\n1\n[basis]\ne 1 1 0 unit\n";
        match parse_with(text, None) {
            Err(Error::Parse { line, col, msg }) => {
                assert_eq!((line, col), (4, 7));
                assert!(msg.contains("degree 0"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diagnostics_carry_line_and_column() {
        let bad = [
            ("[idempotents]\n1\n[basis]\ne 1 1 -1 unit\n[bn]\n2: [e,q] -> 1*e\n", 6),
            ("[idempotents]\n1\n[basis]\ne 1 2 -1 unit\n", 4),
            ("[idempotents]\n1\n[bogus]\n", 3),
            ("[idempotents]\n1\n[basis]\ne 1 1 -1 unit\ntw X { module = { (0,2): 1 }, delta = [ ] }\n", 5),
            ("[idempotents]\n1\n[basis]\ne 1 1 -1 unit\n[bn]\n3: [e,e] -> 1*e\n", 6),
        ];
        for (text, line) in bad {
            match parse_with(text, None) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn field_override() {
        let ws = parse_with(examples::E3_TWC, Some(Field::fp(7).unwrap())).unwrap();
        assert_eq!(ws.algebra.field(), Field::Fp(7));
        assert!(print(&ws).starts_with("field = \"Fp:7\""));
    }

    #[test]
    fn objects_and_morphisms() {
        let text = format!(
            "{}\nmor f = [ (nu^0 * e1 * nu^-0, [[2]]), (nu^0 * e2 * nu^-0, [[2]]) ] : X -> X\n",
            examples::E2_TWC
        );
        let ws = parse_with(&text, None).unwrap();
        let x = ws.object("X").unwrap();
        assert!(!x.delta.is_zero());
        let f = ws.morphism("f").unwrap();
        assert_eq!(f.map, ad::identity(&ws.algebra, &x.module).scale(&Field::Q.int(2)));
        let again = parse_with(&print(&ws), None).unwrap();
        assert_eq!(again.morphism("f").unwrap().map, f.map);
    }

    #[test]
    fn negative_windows_and_fractions() {
        let z = examples::e3(Field::Q);
        let c = z.basis_index("c").unwrap();
        let m = SModule::new([(HatIdem::new(-1, 0), 1), (HatIdem::new(0, 0), 2)]);
        let d = AdMorphism::from_terms(
            &z,
            &m,
            &m,
            [(HatBasis::new(c, 0, -1), Matrix::from_rows(Field::Q, vec![vec![Field::Q.parse("-1/2").unwrap()], vec![Field::Q.int(3)]], 1).unwrap())],
        )
        .unwrap();
        let o = TwObject::new(&z, m, d).unwrap();
        let text = format!("{}\n{}", print_algebra(&z), print_object(&z, "Y", &o));
        let ws = parse_with(&text, None).unwrap();
        assert_eq!(ws.object("Y").unwrap().delta, o.delta);
    }

    #[test]
    fn shifted_ends_round_trip() {
        let mut ws = parse_with(examples::E2_TWC, None).unwrap();
        let x = ws.object("X").unwrap().clone();
        let (x1, xm) = (x.shift(1), x.shift(-2));
        let z = ws.algebra.clone();
        ws.morphisms.push(("s".into(), TwMor::identity(&z, &x1)));
        ws.morphisms.push(("t".into(), TwMor::identity(&z, &xm)));
        let text = print(&ws);
        assert!(text.contains(": X[1] -> X[1]") && text.contains(": X[-2] -> X[-2]"), "{text}");
        let again = parse_with(&text, None).unwrap();
        let s = again.morphism("s").unwrap();
        assert_eq!(s.src, x1);
        assert_eq!(s.map, TwMor::identity(&z, &x1).map);
        assert_eq!(print(&again), text);
    }
}

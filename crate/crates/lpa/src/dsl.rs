//! The textual interface: graph files, ideal expressions, and printers
//! whose output parses back to the same thing.
//!
//! Graph files look like
//!
//! ```text
//! graph example {
//!   vertices u, v, w;
//!   edge u -> v;
//!   edge u -> w [2];
//!   edge v -> v [inf];
//! }
//! ```
//!
//! Ideal expressions combine atoms with `^` (power), `*` (product),
//! `&` (intersection) and `+` (sum), in decreasing binding strength.
//! Atoms are `0`, `whole`, a generator literal `<H: u, v; S: w>` (or the
//! shorthand `<u, v>`), a cycle part `cycle(u, v): x^2 - 1`, `rad(E)`,
//! `gr(E)`, a bound name, or a parenthesized expression.
//!
//! The polynomial after a cycle part is captured textually: `+` or `*`
//! keeps extending the polynomial only while the next token starts with a
//! digit, `x`, or `(`, and `&` always ends it. Wrap the cycle part in
//! parentheses when the expression that follows it could be mistaken for
//! polynomial arithmetic, and avoid binding names that start with `x` or
//! a digit next to cycle parts.

use crate::field::Field;
use crate::graph::{Cycle, Graph, GraphError, Multiplicity, VertexId, VertexSet};
use crate::ideal::{Engine, EngineError, IdealForm};
use crate::poly::parse_poly;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DslError {
    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown binding `{0}`")]
    UnknownName(String),
    #[error("bad polynomial `{text}`: {message}")]
    BadPoly { text: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

const KEYWORDS: [&str; 8] = [
    "graph", "vertices", "edge", "inf", "whole", "cycle", "rad", "gr",
];

#[derive(Clone, Copy)]
struct ScanState {
    pos: usize,
    line: usize,
    col: usize,
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Scanner {
    fn new(src: &str) -> Scanner {
        Scanner {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn save(&self) -> ScanState {
        ScanState {
            pos: self.pos,
            line: self.line,
            col: self.col,
        }
    }

    fn restore(&mut self, s: ScanState) {
        self.pos = s.pos;
        self.line = s.line;
        self.col = s.col;
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if let Some(c) = c {
            self.pos += 1;
            if c == '\n' {
                self.line += 1;
                self.col = 1;
            } else {
                self.col += 1;
            }
        }
        c
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Parse {
            line: self.line,
            col: self.col,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn at_ident_start(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_some_and(|c| c.is_alphabetic() || c == '_')
    }

    fn ident(&mut self) -> Result<String, DslError> {
        self.skip_ws();
        if !self.peek().is_some_and(|c| c.is_alphabetic() || c == '_') {
            return self.err("expected a name");
        }
        let mut out = String::new();
        while self
            .peek()
            .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        {
            out.push(self.bump().unwrap());
        }
        Ok(out)
    }

    fn keyword(&mut self, word: &str) -> Result<(), DslError> {
        let got = self.ident()?;
        if got == word {
            Ok(())
        } else {
            self.err(format!("expected `{word}`, found `{got}`"))
        }
    }

    fn number_u64(&mut self) -> Result<u64, DslError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse() {
            Ok(n) => Ok(n),
            Err(_) => self.err("number out of range"),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.chars.len()
    }
}

// ---- Graphs ----

pub fn parse_graph(src: &str) -> Result<Graph, DslError> {
    let mut sc = Scanner::new(src);
    sc.skip_ws();
    sc.keyword("graph")?;
    let name = sc.ident()?;
    sc.expect('{')?;
    let mut vertex_names: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, Multiplicity)> = Vec::new();
    loop {
        if sc.eat('}') {
            break;
        }
        if !sc.at_ident_start() {
            return sc.err("expected `vertices`, `edge`, or `}`");
        }
        let word = sc.ident()?;
        match word.as_str() {
            "vertices" => {
                if !edges.is_empty() {
                    return sc.err("declare all vertices before the first edge");
                }
                loop {
                    let v = sc.ident()?;
                    if KEYWORDS.contains(&v.as_str()) {
                        return sc.err(format!("`{v}` is a reserved word"));
                    }
                    vertex_names.push(v);
                    if !sc.eat(',') {
                        break;
                    }
                }
                sc.expect(';')?;
            }
            "edge" => {
                let src_name = sc.ident()?;
                sc.expect('-')?;
                if sc.bump() != Some('>') {
                    return sc.err("expected `->`");
                }
                let dst_name = sc.ident()?;
                let mut mult = Multiplicity::Finite(1);
                if sc.eat('[') {
                    sc.skip_ws();
                    if sc.at_ident_start() {
                        sc.keyword("inf")?;
                        mult = Multiplicity::Infinite;
                    } else {
                        mult = Multiplicity::Finite(sc.number_u64()?);
                    }
                    sc.expect(']')?;
                }
                sc.expect(';')?;
                edges.push((src_name, dst_name, mult));
            }
            other => return sc.err(format!("unexpected `{other}`")),
        }
    }
    if !sc.at_end() {
        return sc.err("unexpected input after the closing `}`");
    }
    let refs: Vec<&str> = vertex_names.iter().map(|s| s.as_str()).collect();
    let mut graph = Graph::new(&name, &refs)?;
    for (s, d, m) in edges {
        let src_id = graph.vertex_by_name(&s)?;
        let dst_id = graph.vertex_by_name(&d)?;
        graph.add_edge(src_id, dst_id, m)?;
    }
    Ok(graph)
}

pub fn print_graph(g: &Graph) -> String {
    let mut out = format!("graph {} {{\n", g.name());
    let names: Vec<&str> = g.vertices().map(|v| g.vertex_name(v)).collect();
    out.push_str(&format!("  vertices {};\n", names.join(", ")));
    for e in g.edges() {
        let src = g.vertex_name(e.src);
        let dst = g.vertex_name(e.dst);
        match e.mult {
            Multiplicity::Finite(1) => out.push_str(&format!("  edge {src} -> {dst};\n")),
            m => out.push_str(&format!("  edge {src} -> {dst} [{m}];\n")),
        }
    }
    out.push_str("}\n");
    out
}

// ---- Ideal expressions ----

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Zero,
    Whole,
    Literal { h: Vec<String>, s: Vec<String> },
    CyclePart { vertices: Vec<String>, poly: String },
    Rad(Box<Expr>),
    Gr(Box<Expr>),
    Name(String),
    Sum(Box<Expr>, Box<Expr>),
    Intersect(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Power(Box<Expr>, u32),
}

pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    let mut sc = Scanner::new(src);
    let e = parse_sum(&mut sc)?;
    if !sc.at_end() {
        return sc.err("unexpected trailing input");
    }
    Ok(e)
}

fn parse_sum(sc: &mut Scanner) -> Result<Expr, DslError> {
    let mut e = parse_isect(sc)?;
    while sc.eat('+') {
        let rhs = parse_isect(sc)?;
        e = Expr::Sum(Box::new(e), Box::new(rhs));
    }
    Ok(e)
}

fn parse_isect(sc: &mut Scanner) -> Result<Expr, DslError> {
    let mut e = parse_prod(sc)?;
    while sc.eat('&') {
        let rhs = parse_prod(sc)?;
        e = Expr::Intersect(Box::new(e), Box::new(rhs));
    }
    Ok(e)
}

fn parse_prod(sc: &mut Scanner) -> Result<Expr, DslError> {
    let mut e = parse_pow(sc)?;
    while sc.eat('*') {
        let rhs = parse_pow(sc)?;
        e = Expr::Product(Box::new(e), Box::new(rhs));
    }
    Ok(e)
}

fn parse_pow(sc: &mut Scanner) -> Result<Expr, DslError> {
    let base = parse_atom(sc)?;
    if sc.eat('^') {
        let n = sc.number_u64()?;
        let n: u32 = match n.try_into() {
            Ok(n) => n,
            Err(_) => return sc.err("exponent out of range"),
        };
        return Ok(Expr::Power(Box::new(base), n));
    }
    Ok(base)
}

fn parse_atom(sc: &mut Scanner) -> Result<Expr, DslError> {
    sc.skip_ws();
    match sc.peek() {
        Some('(') => {
            sc.bump();
            let e = parse_sum(sc)?;
            sc.expect(')')?;
            Ok(e)
        }
        Some('<') => parse_literal(sc),
        Some('0') => {
            sc.bump();
            if sc.peek().is_some_and(|c| c.is_alphanumeric()) {
                return sc.err("expected `0` alone");
            }
            Ok(Expr::Zero)
        }
        Some(c) if c.is_alphabetic() || c == '_' => {
            let word = sc.ident()?;
            match word.as_str() {
                "whole" => Ok(Expr::Whole),
                "rad" => {
                    sc.expect('(')?;
                    let e = parse_sum(sc)?;
                    sc.expect(')')?;
                    Ok(Expr::Rad(Box::new(e)))
                }
                "gr" => {
                    sc.expect('(')?;
                    let e = parse_sum(sc)?;
                    sc.expect(')')?;
                    Ok(Expr::Gr(Box::new(e)))
                }
                "cycle" => {
                    sc.expect('(')?;
                    let mut vertices = Vec::new();
                    loop {
                        vertices.push(sc.ident()?);
                        if !sc.eat(',') {
                            break;
                        }
                    }
                    sc.expect(')')?;
                    sc.expect(':')?;
                    let poly = capture_poly(sc)?;
                    Ok(Expr::CyclePart { vertices, poly })
                }
                _ => Ok(Expr::Name(word)),
            }
        }
        _ => sc.err("expected an ideal expression"),
    }
}

fn parse_literal(sc: &mut Scanner) -> Result<Expr, DslError> {
    sc.expect('<')?;
    sc.skip_ws();
    if sc.eat('>') {
        return Ok(Expr::Literal {
            h: Vec::new(),
            s: Vec::new(),
        });
    }
    if sc.at_ident_start() {
        let state = sc.save();
        let word = sc.ident()?;
        sc.skip_ws();
        if word == "H" && sc.peek() == Some(':') {
            sc.bump();
            let h = ident_list(sc, &[';', '>'])?;
            let mut s = Vec::new();
            if sc.eat(';') {
                sc.keyword("S")?;
                sc.expect(':')?;
                s = ident_list(sc, &['>'])?;
            }
            sc.expect('>')?;
            return Ok(Expr::Literal { h, s });
        }
        sc.restore(state);
    }
    let h = ident_list(sc, &['>'])?;
    sc.expect('>')?;
    Ok(Expr::Literal { h, s: Vec::new() })
}

fn ident_list(sc: &mut Scanner, stops: &[char]) -> Result<Vec<String>, DslError> {
    let mut out = Vec::new();
    sc.skip_ws();
    if sc.peek().is_some_and(|c| stops.contains(&c)) {
        return Ok(out);
    }
    loop {
        out.push(sc.ident()?);
        if !sc.eat(',') {
            break;
        }
    }
    Ok(out)
}

/// Captures the raw text of a cycle part's polynomial. `&` and an
/// unbalanced `)` end it; `+` and `*` extend it only when the next token
/// starts with a digit, `x`, or `(`; `-`, `^`, `/`, digits, `x`, and
/// balanced parentheses are always internal.
fn capture_poly(sc: &mut Scanner) -> Result<String, DslError> {
    sc.skip_ws();
    let start = sc.pos;
    let mut depth = 0usize;
    loop {
        let c = match sc.peek() {
            Some(c) => c,
            None => break,
        };
        match c {
            '&' | ';' => break,
            ')' if depth == 0 => break,
            '(' => {
                depth += 1;
                sc.bump();
            }
            ')' => {
                depth -= 1;
                sc.bump();
            }
            '+' | '*' if depth == 0 => {
                let mut k = sc.pos + 1;
                while sc.chars.get(k).is_some_and(|ch| ch.is_whitespace()) {
                    k += 1;
                }
                match sc.chars.get(k) {
                    Some(&n) if n.is_ascii_digit() || n == 'x' || n == '(' => {
                        sc.bump();
                    }
                    _ => break,
                }
            }
            '+' | '*' | '-' | '^' | '/' | 'x' => {
                sc.bump();
            }
            c if c.is_ascii_digit() || c.is_whitespace() => {
                sc.bump();
            }
            _ => break,
        }
    }
    let text: String = self_trim(&sc.chars[start..sc.pos]);
    if text.is_empty() {
        return sc.err("expected a polynomial after `:`");
    }
    Ok(text)
}

fn self_trim(chars: &[char]) -> String {
    chars.iter().collect::<String>().trim().to_string()
}

pub fn print_expr(e: &Expr) -> String {
    render(e)
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Sum(..) => 1,
        Expr::Intersect(..) => 2,
        Expr::Product(..) => 3,
        Expr::Power(..) => 4,
        _ => 5,
    }
}

fn child(e: &Expr, min: u8) -> String {
    if prec(e) < min || matches!(e, Expr::CyclePart { .. }) {
        format!("({})", render(e))
    } else {
        render(e)
    }
}

fn render(e: &Expr) -> String {
    match e {
        Expr::Zero => "0".to_string(),
        Expr::Whole => "whole".to_string(),
        Expr::Literal { h, s } => {
            if h.is_empty() && s.is_empty() {
                "<>".to_string()
            } else if s.is_empty() {
                format!("<H: {}>", h.join(", "))
            } else {
                format!("<H: {}; S: {}>", h.join(", "), s.join(", "))
            }
        }
        Expr::CyclePart { vertices, poly } => {
            format!("cycle({}): {}", vertices.join(", "), poly)
        }
        Expr::Rad(inner) => format!("rad({})", render(inner)),
        Expr::Gr(inner) => format!("gr({})", render(inner)),
        Expr::Name(n) => n.clone(),
        Expr::Sum(a, b) => format!("{} + {}", child(a, 1), child(b, 2)),
        Expr::Intersect(a, b) => format!("{} & {}", child(a, 2), child(b, 3)),
        Expr::Product(a, b) => format!("{} * {}", child(a, 3), child(b, 4)),
        Expr::Power(a, n) => format!("{}^{}", child(a, 5), n),
    }
}

// ---- Evaluation ----

fn resolve_set(graph: &Graph, names: &[String]) -> Result<VertexSet, DslError> {
    let mut out = VertexSet::new();
    for n in names {
        out.insert(graph.vertex_by_name(n)?);
    }
    Ok(out)
}

pub fn eval_expr(
    engine: &Engine,
    bindings: &BTreeMap<String, IdealForm>,
    expr: &Expr,
) -> Result<IdealForm, DslError> {
    match expr {
        Expr::Zero => Ok(engine.zero()),
        Expr::Whole => Ok(engine.whole()),
        Expr::Literal { h, s } => {
            let hv = resolve_set(engine.graph(), h)?;
            let sv = resolve_set(engine.graph(), s)?;
            Ok(engine.normalize(&hv, &sv, Vec::new())?)
        }
        Expr::CyclePart { vertices, poly } => {
            let mut ids: Vec<VertexId> = Vec::new();
            for n in vertices {
                ids.push(engine.graph().vertex_by_name(n)?);
            }
            let cycle = Cycle::new(engine.graph(), &ids).map_err(EngineError::InvalidCycle)?;
            let p = parse_poly(engine.field(), poly).map_err(|message| DslError::BadPoly {
                text: poly.clone(),
                message,
            })?;
            Ok(engine.normalize(&VertexSet::new(), &VertexSet::new(), vec![(cycle, p)])?)
        }
        Expr::Rad(inner) => Ok(engine.radical(&eval_expr(engine, bindings, inner)?)?),
        Expr::Gr(inner) => Ok(engine.gr(&eval_expr(engine, bindings, inner)?)?),
        Expr::Name(n) => bindings
            .get(n)
            .cloned()
            .ok_or_else(|| DslError::UnknownName(n.clone())),
        Expr::Sum(a, b) => {
            let x = eval_expr(engine, bindings, a)?;
            let y = eval_expr(engine, bindings, b)?;
            Ok(engine.sum(&x, &y)?)
        }
        Expr::Intersect(a, b) => {
            let x = eval_expr(engine, bindings, a)?;
            let y = eval_expr(engine, bindings, b)?;
            Ok(engine.intersect(&x, &y)?)
        }
        Expr::Product(a, b) => {
            let x = eval_expr(engine, bindings, a)?;
            let y = eval_expr(engine, bindings, b)?;
            Ok(engine.product(&x, &y)?)
        }
        Expr::Power(a, n) => {
            let x = eval_expr(engine, bindings, a)?;
            Ok(engine.power(&x, *n)?)
        }
    }
}

/// Parses a graph file and builds an engine over it.
pub fn engine_from_source(src: &str, field: Field) -> Result<Engine, DslError> {
    let graph = parse_graph(src)?;
    Ok(Engine::new(graph, field)?)
}

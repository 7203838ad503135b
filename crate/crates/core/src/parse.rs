//! Text formats: algebra, operator, polynomial, catalog and wavefunction files.
//!
//! Expressions share one grammar:
//!
//! ```text
//! expr   := ('+' | '-')? term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' '-'? INT)?
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! `*` is never implicit. Division is allowed by anything invertible in the
//! target: rational constants and unit monomials everywhere, arbitrary
//! nonzero scalars in rational-function contexts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::dga::{DGAlgebra, NCElement};
use crate::holonomic::Wavefunction;
use crate::qtorus::QTElement;
use crate::ring::{LaurentPoly, RatFunc, Rational, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, column {col}: undeclared generator `{name}`")]
    Undeclared { name: String, line: usize, col: usize },
    #[error("line {line}: generator `{name}` has negative degree {degree}")]
    NegativeDegree { name: String, degree: i64, line: usize },
    #[error("line {line}, column {col}: exponent must be an integer")]
    NonIntegerExponent { line: usize, col: usize },
    #[error("line {line}: {msg}")]
    Semantic { line: usize, msg: String },
    #[error("wavefunction: {0}")]
    Wavefunction(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    fn err(self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal(String),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

fn tokenize(text: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut last = Pos { line: first_line, col: 1 };
    for (i, line) in text.lines().enumerate() {
        let line_no = first_line + i;
        let chars: Vec<char> = line.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let c = chars[j];
            let pos = Pos { line: line_no, col: j + 1 };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                j += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j < chars.len() && chars[j] == '.' {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    out.push(Token {
                        tok: Tok::Decimal(chars[start..j].iter().collect()),
                        pos,
                    });
                } else {
                    let digits: String = chars[start..j].iter().collect();
                    out.push(Token {
                        tok: Tok::Int(digits.parse().expect("digits")),
                        pos,
                    });
                }
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = j;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..j].iter().collect()),
                    pos,
                });
                continue;
            }
            if "+-*/^()=".contains(c) {
                out.push(Token { tok: Tok::Sym(c), pos });
                j += 1;
                continue;
            }
            return Err(pos.err(format!("unknown token `{c}`")));
        }
        last = Pos { line: line_no, col: chars.len() + 1 };
    }
    out.push(Token { tok: Tok::End, pos: last });
    Ok(out)
}

/// The value type an expression evaluates into.
trait Domain {
    type V;
    fn constant(&self, c: Rational) -> Self::V;
    fn ident(&self, name: &str, at: Pos) -> Result<Self::V, ParseError>;
    fn add(&self, a: Self::V, b: Self::V) -> Self::V;
    fn neg(&self, a: Self::V) -> Self::V;
    fn mul(&self, a: Self::V, b: Self::V) -> Self::V;
    fn inverse(&self, a: Self::V, at: Pos) -> Result<Self::V, ParseError>;
    fn pow(&self, a: Self::V, k: u32) -> Self::V;
}

struct Parser<'a, D: Domain> {
    toks: &'a [Token],
    i: usize,
    dom: &'a D,
}

impl<'a, D: Domain> Parser<'a, D> {
    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expr(&mut self) -> Result<D::V, ParseError> {
        let neg = if self.is_sym('-') {
            self.bump();
            true
        } else {
            if self.is_sym('+') {
                self.bump();
            }
            false
        };
        let t = self.term()?;
        let mut acc = if neg { self.dom.neg(t) } else { t };
        loop {
            if self.is_sym('+') {
                self.bump();
                let t = self.term()?;
                acc = self.dom.add(acc, t);
            } else if self.is_sym('-') {
                self.bump();
                let t = self.term()?;
                acc = self.dom.add(acc, self.dom.neg(t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<D::V, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.is_sym('*') {
                self.bump();
                let f = self.factor()?;
                acc = self.dom.mul(acc, f);
            } else if self.is_sym('/') {
                let at = self.bump().pos;
                let f = self.factor()?;
                let inv = self.dom.inverse(f, at)?;
                acc = self.dom.mul(acc, inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<D::V, ParseError> {
        let base = self.atom()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        let caret = self.bump().pos;
        let neg = if self.is_sym('-') {
            self.bump();
            true
        } else {
            false
        };
        let t = self.bump();
        let k = match &t.tok {
            Tok::Int(n) => n.to_u32().ok_or_else(|| t.pos.err("exponent too large"))?,
            _ => {
                return Err(ParseError::NonIntegerExponent {
                    line: t.pos.line,
                    col: t.pos.col,
                })
            }
        };
        let p = self.dom.pow(base, k);
        if neg {
            self.dom.inverse(p, caret)
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<D::V, ParseError> {
        let t = self.bump();
        match t.tok {
            Tok::Int(n) => Ok(self.dom.constant(Rational::from_integer(n))),
            Tok::Ident(name) => self.dom.ident(&name, t.pos),
            Tok::Sym('(') => {
                let v = self.expr()?;
                if !self.is_sym(')') {
                    return Err(self.peek().pos.err("expected `)`"));
                }
                self.bump();
                Ok(v)
            }
            Tok::Decimal(d) => Err(t.pos.err(format!("decimal literal `{d}`; use a fraction"))),
            Tok::End => Err(t.pos.err("unexpected end of input")),
            Tok::Sym(c) => Err(t.pos.err(format!("unexpected `{c}`"))),
        }
    }
}

fn parse_with<D: Domain>(dom: &D, toks: &[Token]) -> Result<D::V, ParseError> {
    let mut p = Parser { toks, i: 0, dom };
    let v = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(t.pos.err(format!("unexpected {}", describe(&t.tok))));
    }
    Ok(v)
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("`{n}`"),
        Tok::Decimal(d) => format!("`{d}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

struct RatDomain<'a> {
    vars: &'a VarSet,
}

impl Domain for RatDomain<'_> {
    type V = RatFunc;
    fn constant(&self, c: Rational) -> RatFunc {
        RatFunc::constant(self.vars, c)
    }
    fn ident(&self, name: &str, at: Pos) -> Result<RatFunc, ParseError> {
        RatFunc::var(self.vars, name).map_err(|_| at.err(format!("unknown variable `{name}`")))
    }
    fn add(&self, a: RatFunc, b: RatFunc) -> RatFunc {
        &a + &b
    }
    fn neg(&self, a: RatFunc) -> RatFunc {
        -&a
    }
    fn mul(&self, a: RatFunc, b: RatFunc) -> RatFunc {
        &a * &b
    }
    fn inverse(&self, a: RatFunc, at: Pos) -> Result<RatFunc, ParseError> {
        a.recip().map_err(|_| at.err("division by zero"))
    }
    fn pow(&self, a: RatFunc, k: u32) -> RatFunc {
        a.pow(k as i64).expect("nonnegative power")
    }
}

/// A rational function over `vars`, e.g. `(1 + Q)/(1 - s^2)`.
pub fn parse_ratfunc(text: &str, vars: &VarSet) -> Result<RatFunc, ParseError> {
    parse_with(&RatDomain { vars }, &tokenize(text, 1)?)
}

/// A Laurent polynomial over `vars`; `#` comments and line breaks are allowed.
pub fn parse_polynomial(text: &str, vars: &VarSet) -> Result<LaurentPoly, ParseError> {
    let toks = tokenize(text, 1)?;
    let r = parse_with(&RatDomain { vars }, &toks)?;
    r.as_poly().cloned().ok_or_else(|| ParseError::Semantic {
        line: toks[0].pos.line,
        msg: format!("`{r}` is not a Laurent polynomial"),
    })
}

struct AlgDomain<'a> {
    alg: &'a DGAlgebra,
}

impl AlgDomain<'_> {
    fn scalar(&self, c: LaurentPoly) -> NCElement {
        self.alg.scalar(c).expect("coefficient ring of the algebra")
    }
}

impl Domain for AlgDomain<'_> {
    type V = NCElement;
    fn constant(&self, c: Rational) -> NCElement {
        self.scalar(LaurentPoly::constant(self.alg.coeff_vars(), c))
    }
    fn ident(&self, name: &str, at: Pos) -> Result<NCElement, ParseError> {
        if let Ok(v) = self.alg.coefficient_var(name) {
            return Ok(self.scalar(v));
        }
        self.alg.generator(name).map_err(|_| ParseError::Undeclared {
            name: name.to_string(),
            line: at.line,
            col: at.col,
        })
    }
    fn add(&self, a: NCElement, b: NCElement) -> NCElement {
        a.add(&b).expect("one algebra")
    }
    fn neg(&self, a: NCElement) -> NCElement {
        a.neg()
    }
    fn mul(&self, a: NCElement, b: NCElement) -> NCElement {
        a.mul(&b).expect("one algebra")
    }
    fn inverse(&self, a: NCElement, at: Pos) -> Result<NCElement, ParseError> {
        let terms: Vec<_> = a.terms().collect();
        match terms.as_slice() {
            [(w, c)] if w.0.is_empty() => {
                let inv = c
                    .pow_signed(-1)
                    .map_err(|_| at.err(format!("`{c}` is not invertible")))?;
                Ok(self.scalar(inv))
            }
            [] => Err(at.err("division by zero")),
            _ => Err(at.err(format!("`{a}` is not invertible"))),
        }
    }
    fn pow(&self, a: NCElement, k: u32) -> NCElement {
        a.pow(k).expect("one algebra")
    }
}

/// Parses an algebra file:
///
/// ```text
/// algebra unknot
/// generator c degree 1
/// d c = 1 - ex - ep - Q*ex*ep
/// ```
///
/// Generators may be declared after they are used; a generator without a
/// `d` line has zero differential.
pub fn parse_algebra_file(text: &str) -> Result<DGAlgebra, ParseError> {
    let mut name: Option<String> = None;
    let mut gens: Vec<(String, i64)> = Vec::new();
    let mut diffs: Vec<(usize, String, Vec<Token>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let toks = tokenize(raw, line_no)?;
        let Some(first) = toks.first().filter(|t| t.tok != Tok::End) else {
            continue;
        };
        let semantic = |msg: String| ParseError::Semantic { line: line_no, msg };
        match &first.tok {
            Tok::Ident(kw) if kw == "algebra" => {
                let [_, Token { tok: Tok::Ident(n), .. }, Token { tok: Tok::End, .. }] = toks.as_slice() else {
                    return Err(first.pos.err("expected `algebra <name>`"));
                };
                if name.replace(n.clone()).is_some() {
                    return Err(semantic("second `algebra` header".into()));
                }
            }
            Tok::Ident(kw) if kw == "generator" => {
                let (g, deg) = match toks.as_slice() {
                    [_, Token { tok: Tok::Ident(g), .. }, Token { tok: Tok::Ident(kw), .. }, rest @ ..]
                        if kw == "degree" =>
                    {
                        let deg = match rest {
                            [Token { tok: Tok::Int(n), .. }, Token { tok: Tok::End, .. }] => n.clone(),
                            [Token { tok: Tok::Sym('-'), .. }, Token { tok: Tok::Int(n), .. }, Token { tok: Tok::End, .. }] => -n.clone(),
                            _ => return Err(first.pos.err("expected `generator <name> degree <int>`")),
                        };
                        (g.clone(), deg)
                    }
                    _ => return Err(first.pos.err("expected `generator <name> degree <int>`")),
                };
                let deg = deg.to_i64().ok_or_else(|| semantic("degree out of range".into()))?;
                if deg < 0 {
                    return Err(ParseError::NegativeDegree {
                        name: g,
                        degree: deg,
                        line: line_no,
                    });
                }
                gens.push((g, deg));
            }
            Tok::Ident(kw) if kw == "d" => match toks.as_slice() {
                [_, Token { tok: Tok::Ident(g), .. }, Token { tok: Tok::Sym('='), .. }, rest @ ..] => {
                    diffs.push((line_no, g.clone(), rest.to_vec()));
                }
                _ => return Err(first.pos.err("expected `d <name> = <expr>`")),
            },
            other => return Err(first.pos.err(format!("unexpected {} at start of line", describe(other)))),
        }
    }
    let name = name.ok_or(ParseError::Semantic {
        line: 1,
        msg: "missing `algebra <name>` header".into(),
    })?;
    let mut alg = DGAlgebra::new(name, VarSet::augmentation(), gens).map_err(|e| ParseError::Semantic {
        line: 0,
        msg: e.to_string(),
    })?;
    let mut seen = BTreeMap::new();
    for (line, g, toks) in diffs {
        if alg.signature().index_of(&g).is_none() {
            return Err(ParseError::Semantic {
                line,
                msg: format!("`d` of undeclared generator `{g}`"),
            });
        }
        if seen.insert(g.clone(), line).is_some() {
            return Err(ParseError::Semantic {
                line,
                msg: format!("differential of `{g}` assigned twice"),
            });
        }
        let image = parse_with(&AlgDomain { alg: &alg }, &toks)?;
        alg.set_differential(&g, image)
            .map_err(|e| ParseError::Semantic { line, msg: e.to_string() })?;
    }
    Ok(alg)
}

/// Canonical text of an algebra; nonzero differentials only.
pub fn render_algebra(alg: &DGAlgebra) -> String {
    let mut out = format!("algebra {}\n", alg.name());
    for g in alg.generators() {
        out += &format!("generator {} degree {}\n", g.name, g.degree);
    }
    for g in alg.generators() {
        let d = alg.differential(&g.name).expect("declared");
        if !d.is_zero() {
            out += &format!("d {} = {}\n", g.name, d);
        }
    }
    out
}

struct OpDomain {
    vars: VarSet,
}

impl Domain for OpDomain {
    type V = QTElement;
    fn constant(&self, c: Rational) -> QTElement {
        QTElement::scalar(RatFunc::constant(&self.vars, c))
    }
    fn ident(&self, name: &str, at: Pos) -> Result<QTElement, ParseError> {
        match name {
            "Ex" => Ok(QTElement::ex()),
            "Ep" => Ok(QTElement::ep()),
            _ => RatFunc::var(&self.vars, name)
                .map(QTElement::scalar)
                .map_err(|_| at.err(format!("unknown symbol `{name}`"))),
        }
    }
    fn add(&self, a: QTElement, b: QTElement) -> QTElement {
        a.add(&b)
    }
    fn neg(&self, a: QTElement) -> QTElement {
        a.neg()
    }
    fn mul(&self, a: QTElement, b: QTElement) -> QTElement {
        a.mul(&b)
    }
    /// `(c·Ex^m Ep^n)^{-1} = c^{-1} s^{2mn} Ex^{-m} Ep^{-n}`.
    fn inverse(&self, a: QTElement, at: Pos) -> Result<QTElement, ParseError> {
        let terms: Vec<_> = a.terms().collect();
        match terms.as_slice() {
            [(&(m, n), c)] => {
                let inv = c.recip().map_err(|_| at.err("division by zero"))?;
                Ok(QTElement::monomial(-m, -n, &inv * &crate::qtorus::s_pow(2 * m * n)))
            }
            [] => Err(at.err("division by zero")),
            _ => Err(at.err(format!("`{a}` is not invertible"))),
        }
    }
    fn pow(&self, a: QTElement, k: u32) -> QTElement {
        a.pow(k)
    }
}

/// An element of the quantum torus, normal ordered on read.
pub fn parse_operator_file(text: &str) -> Result<QTElement, ParseError> {
    parse_with(
        &OpDomain {
            vars: VarSet::quantum(),
        },
        &tokenize(text, 1)?,
    )
}

/// `{"H": ["1", "(1 + Q)/(1 - s^2)", ...]}`.
pub fn parse_wavefunction(text: &str) -> Result<Wavefunction, ParseError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| ParseError::Wavefunction(e.to_string()))?;
    let arr = v
        .get("H")
        .and_then(|h| h.as_array())
        .ok_or_else(|| ParseError::Wavefunction("expected an object with an `H` array".into()))?;
    let vars = VarSet::quantum();
    let coeffs = arr
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let s = h
                .as_str()
                .ok_or_else(|| ParseError::Wavefunction(format!("H[{i}] is not a string")))?;
            parse_ratfunc(s, &vars).map_err(|e| ParseError::Wavefunction(format!("H[{i}]: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Wavefunction::new(coeffs))
}

pub fn render_wavefunction(psi: &Wavefunction) -> String {
    let h: Vec<String> = psi.coeffs().iter().map(|c| c.to_string()).collect();
    serde_json::json!({ "H": h }).to_string()
}

//! Generalized-curve weights.
//!
//! A generalized curve is a connected simple graph whose vertices are rigid
//! curves from a catalog. Its weight is the product of vertex weights, times
//! `e^{lk_e g_s} = q^{lk_e}` per edge and `e^{slk_v g_s / 2} = s^{slk_v}` per
//! vertex; its Euler characteristic is `Σ χ_v - #E`. Copies of one curve are
//! interchangeable, so each isomorphism class is counted with `1/|Aut|`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ring::{fmt_rational, rat, LaurentPoly, PowerSeries, Rational, VarSet, S};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("curve `{0}` declared twice")]
    DuplicateCurve(String),
    #[error("conflicting linking numbers for `{0}`, `{1}`")]
    ConflictingLink(String, String),
    #[error("linking of `{0}` with itself; self-data belongs in slk")]
    DiagonalLink(String),
    #[error("edge ({0}, {1}) is a loop")]
    Loop(usize, usize),
    #[error("edge ({0}, {1}) appears twice")]
    MultiEdge(usize, usize),
    #[error("edge ({0}, {1}) refers to a missing vertex")]
    EdgeOutOfRange(usize, usize),
    #[error("order must be at least 1")]
    Order,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub id: String,
    pub w: Rational,
    pub chi: i64,
    /// Class `m·x + k·t`.
    pub m: i64,
    pub k: i64,
    pub slk: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CurveCatalog {
    curves: Vec<Curve>,
    /// Symmetric off-diagonal linking numbers, keyed by `(i, j)` with `i < j`.
    links: BTreeMap<(usize, usize), i64>,
}

impl CurveCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_curve(&mut self, c: Curve) -> Result<usize, GenError> {
        if self.index_of(&c.id).is_some() {
            return Err(GenError::DuplicateCurve(c.id));
        }
        self.curves.push(c);
        Ok(self.curves.len() - 1)
    }

    /// Sets `lk(a, b) = lk(b, a) = n`. Repeating a pair with the same value is
    /// allowed; a different value is an error.
    pub fn set_link(&mut self, a: &str, b: &str, n: i64) -> Result<(), GenError> {
        let i = self.index_of(a).ok_or_else(|| GenError::UnknownCurve(a.into()))?;
        let j = self.index_of(b).ok_or_else(|| GenError::UnknownCurve(b.into()))?;
        if i == j {
            return Err(GenError::DiagonalLink(a.into()));
        }
        let key = (i.min(j), i.max(j));
        match self.links.insert(key, n) {
            Some(old) if old != n => Err(GenError::ConflictingLink(a.into(), b.into())),
            _ => Ok(()),
        }
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.id == id)
    }

    /// Linking number of distinct catalog entries; 0 between copies of one curve.
    pub fn lk(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return 0;
        }
        self.links.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    /// Parses `curve <id> w=<rat> chi=<int> m=<int> k=<int> slk=<int>` and
    /// `link <id> <id> <int>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, GenError> {
        let mut cat = CurveCatalog::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| GenError::Parse { line: line_no, msg };
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "curve" => {
                    if words.len() != 7 {
                        return Err(err(format!("expected 6 fields after `curve`, got {}", words.len() - 1)));
                    }
                    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
                    for w in &words[2..] {
                        let (k, v) = w.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{w}`")))?;
                        if fields.insert(k, v).is_some() {
                            return Err(err(format!("field `{k}` repeated")));
                        }
                    }
                    let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(format!("missing field `{k}`")));
                    let int = |k: &str| -> Result<i64, GenError> {
                        let v = get(k)?;
                        v.parse().map_err(|_| err(format!("`{k}={v}` is not an integer")))
                    };
                    let w = parse_rational(get("w")?).ok_or_else(|| err(format!("`w={}` is not a rational", fields["w"])))?;
                    let c = Curve {
                        id: words[1].to_string(),
                        w,
                        chi: int("chi")?,
                        m: int("m")?,
                        k: int("k")?,
                        slk: int("slk")?,
                    };
                    cat.add_curve(c).map_err(|e| err(e.to_string()))?;
                }
                "link" => {
                    if words.len() != 4 {
                        return Err(err("expected `link <id> <id> <int>`".into()));
                    }
                    let n: i64 = words[3]
                        .parse()
                        .map_err(|_| err(format!("`{}` is not an integer", words[3])))?;
                    cat.set_link(words[1], words[2], n).map_err(|e| err(e.to_string()))?;
                }
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }
        Ok(cat)
    }
}

/// Canonical catalog text; parses back to an equal catalog.
impl fmt::Display for CurveCatalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.curves {
            writeln!(
                f,
                "curve {} w={} chi={} m={} k={} slk={}",
                c.id,
                fmt_rational(&c.w),
                c.chi,
                c.m,
                c.k,
                c.slk
            )?;
        }
        for (&(i, j), n) in &self.links {
            writeln!(f, "link {} {} {}", self.curves[i].id, self.curves[j].id, n)?;
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n.parse().ok()?, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// `coefficient · e^{m x} Q^k` with total Euler characteristic `chi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFTerm {
    /// Laurent polynomial in `s`.
    pub coefficient: LaurentPoly,
    pub m: i64,
    pub k: i64,
    pub chi: i64,
}

impl fmt::Display for GFTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) [m={}, k={}, chi={}]", self.coefficient, self.m, self.k, self.chi)
    }
}

fn svars() -> VarSet {
    VarSet::new([S]).unwrap()
}

fn s_power(k: i64) -> LaurentPoly {
    LaurentPoly::monomial(&svars(), vec![k as i32], Rational::one())
}

/// Weight of one graph whose vertices are catalog indices.
pub fn graph_weight(cat: &CurveCatalog, vertices: &[usize], edges: &[(usize, usize)]) -> Result<GFTerm, GenError> {
    for &v in vertices {
        if v >= cat.curves.len() {
            return Err(GenError::UnknownCurve(format!("#{v}")));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for &(a, b) in edges {
        if a == b {
            return Err(GenError::Loop(a, b));
        }
        if a >= vertices.len() || b >= vertices.len() {
            return Err(GenError::EdgeOutOfRange(a, b));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(GenError::MultiEdge(a, b));
        }
    }
    let mut coeff = Rational::one();
    let mut s_exp = 0i64;
    let (mut m, mut k, mut chi) = (0, 0, 0);
    for &v in vertices {
        let c = &cat.curves[v];
        coeff *= &c.w;
        s_exp += c.slk;
        m += c.m;
        k += c.k;
        chi += c.chi;
    }
    for &(a, b) in edges {
        s_exp += 2 * cat.lk(vertices[a], vertices[b]);
    }
    chi -= edges.len() as i64;
    Ok(GFTerm {
        coefficient: s_power(s_exp).scale(&coeff),
        m,
        k,
        chi,
    })
}

/// Graph weight by curve ids.
pub fn graph_weight_by_id(cat: &CurveCatalog, vertices: &[&str], edges: &[(usize, usize)]) -> Result<GFTerm, GenError> {
    let idx: Vec<usize> = vertices
        .iter()
        .map(|id| cat.index_of(id).ok_or_else(|| GenError::UnknownCurve(id.to_string())))
        .collect::<Result<_, _>>()?;
    graph_weight(cat, &idx, edges)
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

/// Multisets of `size` catalog indices, as sorted vectors.
fn multisets(n_curves: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n_curves, size, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * rat(k))
}

/// Sum over connected simple graphs on at most `max_vertices` catalog
/// curves, with `1/|Aut|` for repeated curves, merged by `(m, k, chi)`.
///
/// Each isomorphism class is reached through every labelling of its
/// vertices that keeps curve types; there are `Π mult_i! / |Aut|` of them,
/// so summing labelled graphs and dividing by `Π mult_i!` gives the
/// `1/|Aut|` weighting.
pub fn potential_truncated(cat: &CurveCatalog, max_vertices: usize) -> Result<Vec<GFTerm>, GenError> {
    let mut acc: BTreeMap<(i64, i64, i64), LaurentPoly> = BTreeMap::new();
    for size in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..size).flat_map(|a| (a + 1..size).map(move |b| (a, b))).collect();
        for ms in multisets(cat.curves.len(), size) {
            let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
            for &v in &ms {
                *mult.entry(v).or_default() += 1;
            }
            let sym = mult.values().fold(Rational::one(), |a, &m| a * factorial(m));
            let inv = sym.recip();
            for mask in 0u64..(1u64 << pairs.len()) {
                let edges: Vec<(usize, usize)> =
                    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
                if !connected(size, &edges) {
                    continue;
                }
                let t = graph_weight(cat, &ms, &edges)?;
                let entry = acc.entry((t.m, t.k, t.chi)).or_insert_with(|| LaurentPoly::zero(&svars()));
                *entry = &*entry + &t.coefficient.scale(&inv);
            }
        }
    }
    Ok(acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((m, k, chi), coefficient)| GFTerm { coefficient, m, k, chi })
        .collect())
}

/// `Σ_{m odd ≤ order} 2/(2^m m!) g_s^m`.
pub fn resolution_weight_series(order: usize) -> Result<PowerSeries, GenError> {
    if order < 1 {
        return Err(GenError::Order);
    }
    let coeffs = (0..=order).map(|m| {
        if m % 2 == 1 {
            let two_m = Rational::from_integer(BigInt::from(2).pow(m as u32));
            rat(2) / (two_m * factorial(m))
        } else {
            Rational::zero()
        }
    });
    Ok(PowerSeries::from_coeffs(order, coeffs))
}

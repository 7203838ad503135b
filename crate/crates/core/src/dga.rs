//! Graded free noncommutative dg-algebras over Laurent coefficients.
//!
//! Generators are Reeb chords with nonnegative degrees. Coefficients in
//! `ℚ[ex^±, ep^±, Q^±]` commute with the chords and are d-closed, and the
//! differential extends from generators by the graded Leibniz rule
//! `d(vw) = d(v)w + (-1)^{|v|} v d(w)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::ring::{fmt_rational, LaurentPoly, RingError, VarSet, LAMBDA, MU, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgaError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` has negative degree {1}")]
    NegativeDegree(String, i64),
    #[error("generator name `{0}` clashes with a coefficient variable")]
    ReservedName(String),
    #[error("differential of `{0}` assigned twice")]
    DuplicateDifferential(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("unknown fixture `{0}` (expected `unknot` or `trefoil`)")]
    UnknownFixture(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChordGen {
    pub name: String,
    pub degree: u32,
}

/// Generators and coefficient ring shared by every element of one algebra.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    gens: Vec<ChordGen>,
    coeff_vars: VarSet,
}

impl Signature {
    pub fn generators(&self) -> &[ChordGen] {
        &self.gens
    }

    pub fn coeff_vars(&self) -> &VarSet {
        &self.coeff_vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }
}

/// A word in the generators, stored as generator indices. The empty word is
/// the unit. Ordered by length, then lexicographically by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of the algebra: a finite sum of words with Laurent coefficients.
#[derive(Clone)]
pub struct NCElement {
    sig: Arc<Signature>,
    terms: BTreeMap<Word, LaurentPoly>,
}

impl PartialEq for NCElement {
    fn eq(&self, other: &Self) -> bool {
        same_sig(&self.sig, &other.sig) && self.terms == other.terms
    }
}

impl Eq for NCElement {}

fn same_sig(a: &Arc<Signature>, b: &Arc<Signature>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl NCElement {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        NCElement {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(sig: &Arc<Signature>, c: LaurentPoly) -> Result<Self, DgaError> {
        Self::term(sig, c, Word::default())
    }

    pub fn term(sig: &Arc<Signature>, c: LaurentPoly, w: Word) -> Result<Self, DgaError> {
        c.vars().check_same(&sig.coeff_vars)?;
        let mut e = Self::zero(sig);
        e.add_term(w, c);
        Ok(e)
    }

    pub fn generator(sig: &Arc<Signature>, name: &str) -> Result<Self, DgaError> {
        let i = sig
            .index_of(name)
            .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))?;
        Self::term(sig, LaurentPoly::one(&sig.coeff_vars), Word(vec![i]))
    }

    fn add_term(&mut self, w: Word, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &LaurentPoly)> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn word_degree(&self, w: &Word) -> u32 {
        w.0.iter().map(|&i| self.sig.gens[i].degree).sum()
    }

    /// The common degree of all words, or `None` for zero or inhomogeneous elements.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|w| self.word_degree(w));
        let d = degs.next()?;
        degs.all(|x| x == d).then_some(d)
    }

    fn check(&self, other: &Self) -> Result<(), DgaError> {
        if same_sig(&self.sig, &other.sig) {
            Ok(())
        } else {
            Err(DgaError::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, DgaError> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DgaError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        NCElement {
            sig: self.sig.clone(),
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    /// Concatenation product; coefficients multiply and commute past chords.
    pub fn mul(&self, other: &Self) -> Result<Self, DgaError> {
        self.check(other)?;
        let mut out = Self::zero(&self.sig);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.0.clone();
                w.extend_from_slice(&wb.0);
                out.add_term(Word(w), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Result<Self, DgaError> {
        c.vars().check_same(&self.sig.coeff_vars)?;
        let mut out = Self::zero(&self.sig);
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a * c);
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self, DgaError> {
        let mut acc = Self::scalar(&self.sig, LaurentPoly::one(&self.sig.coeff_vars))?;
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn render_word(&self, w: &Word) -> String {
        w.0.iter()
            .map(|&i| self.sig.gens[i].name.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Renders e.g. `-1 + ep - Q*a21 + ep*a12*a21`; multi-term coefficients of
/// nonempty words are parenthesized.
impl fmt::Display for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.sig.coeff_vars.names();
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>, neg: bool| -> fmt::Result {
            let r = if first {
                if neg {
                    write!(f, "-")
                } else {
                    Ok(())
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })
            };
            first = false;
            r
        };
        for (w, c) in &self.terms {
            let word = self.render_word(w);
            if w.0.is_empty() || c.len() == 1 {
                for (e, a) in c.terms() {
                    sep(f, a.is_negative())?;
                    let abs = a.abs();
                    let mut parts = Vec::new();
                    let mono = crate::ring::laurent_monomial(names, e);
                    if !abs.is_one() || (mono.is_empty() && word.is_empty()) {
                        parts.push(fmt_rational(&abs));
                    }
                    if !mono.is_empty() {
                        parts.push(mono);
                    }
                    if !word.is_empty() {
                        parts.push(word.clone());
                    }
                    write!(f, "{}", parts.join("*"))?;
                }
            } else {
                sep(f, false)?;
                write!(f, "({})*{}", c, word)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NCElement({})", self)
    }
}

/// A graded free algebra with a differential given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGAlgebra {
    name: String,
    sig: Arc<Signature>,
    differential: Vec<NCElement>,
}

impl DGAlgebra {
    /// An algebra with `d = 0` on all generators; coefficients are over
    /// `coeff_vars` (normally [`VarSet::augmentation`]).
    pub fn new<S: Into<String>>(
        name: S,
        coeff_vars: VarSet,
        gens: impl IntoIterator<Item = (String, i64)>,
    ) -> Result<Self, DgaError> {
        let mut list: Vec<ChordGen> = Vec::new();
        for (n, d) in gens {
            if coeff_vars.contains(&n) {
                return Err(DgaError::ReservedName(n));
            }
            if list.iter().any(|g| g.name == n) {
                return Err(DgaError::DuplicateGenerator(n));
            }
            if d < 0 {
                return Err(DgaError::NegativeDegree(n, d));
            }
            list.push(ChordGen {
                name: n,
                degree: d as u32,
            });
        }
        let sig = Arc::new(Signature {
            gens: list,
            coeff_vars,
        });
        let differential = vec![NCElement::zero(&sig); sig.gens.len()];
        Ok(DGAlgebra {
            name: name.into(),
            sig,
            differential,
        })
    }

    pub fn set_differential(&mut self, name: &str, image: NCElement) -> Result<(), DgaError> {
        let i = self
            .sig
            .index_of(name)
            .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))?;
        if !same_sig(&self.sig, &image.sig) {
            return Err(DgaError::AlgebraMismatch);
        }
        self.differential[i] = image;
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn generators(&self) -> &[ChordGen] {
        &self.sig.gens
    }

    pub fn coeff_vars(&self) -> &VarSet {
        &self.sig.coeff_vars
    }

    pub fn generator(&self, name: &str) -> Result<NCElement, DgaError> {
        NCElement::generator(&self.sig, name)
    }

    pub fn scalar(&self, c: LaurentPoly) -> Result<NCElement, DgaError> {
        NCElement::scalar(&self.sig, c)
    }

    pub fn coefficient_var(&self, name: &str) -> Result<LaurentPoly, DgaError> {
        Ok(LaurentPoly::var(&self.sig.coeff_vars, name)?)
    }

    /// `d` on a generator.
    pub fn differential(&self, name: &str) -> Result<&NCElement, DgaError> {
        let i = self
            .sig
            .index_of(name)
            .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))?;
        Ok(&self.differential[i])
    }

    /// `d` extended by the graded Leibniz rule, linearly over coefficients.
    pub fn apply_d(&self, u: &NCElement) -> Result<NCElement, DgaError> {
        if !same_sig(&self.sig, &u.sig) {
            return Err(DgaError::AlgebraMismatch);
        }
        let mut out = NCElement::zero(&self.sig);
        for (w, c) in &u.terms {
            let mut prefix_deg = 0u32;
            for (pos, &g) in w.0.iter().enumerate() {
                let dg = &self.differential[g];
                if !dg.is_zero() {
                    let sign_neg = prefix_deg % 2 == 1;
                    let prefix = &w.0[..pos];
                    let suffix = &w.0[pos + 1..];
                    for (dw, dc) in &dg.terms {
                        let mut word = Vec::with_capacity(w.0.len() + dw.0.len());
                        word.extend_from_slice(prefix);
                        word.extend_from_slice(&dw.0);
                        word.extend_from_slice(suffix);
                        let coef = c * dc;
                        out.add_term(Word(word), if sign_neg { -coef } else { coef });
                    }
                }
                prefix_deg += self.sig.gens[g].degree;
            }
        }
        Ok(out)
    }

    /// Computes `d(d(g))` for every generator; the report lists the nonzero ones.
    pub fn check_d_squared(&self) -> DSquaredReport {
        let mut failures = Vec::new();
        for (i, g) in self.sig.gens.iter().enumerate() {
            let dd = self
                .apply_d(&self.differential[i])
                .expect("differential lives in this algebra");
            if !dd.is_zero() {
                failures.push((g.name.clone(), dd));
            }
        }
        DSquaredReport { failures }
    }

    /// Checks that every word of `d(g)` has degree `|g| - 1`.
    pub fn check_grading(&self) -> GradingReport {
        let mut violations = Vec::new();
        for (i, g) in self.sig.gens.iter().enumerate() {
            let dg = &self.differential[i];
            for w in dg.terms.keys() {
                let deg = dg.word_degree(w) as i64;
                if deg != g.degree as i64 - 1 {
                    violations.push(GradingViolation {
                        generator: g.name.clone(),
                        word: dg.render_word(w),
                        word_degree: deg,
                        expected: g.degree as i64 - 1,
                    });
                }
            }
        }
        GradingReport { violations }
    }
}

#[derive(Debug, Clone)]
pub struct DSquaredReport {
    /// Generators with `d²g ≠ 0`, with the residual.
    pub failures: Vec<(String, NCElement)>,
}

impl DSquaredReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingViolation {
    pub generator: String,
    pub word: String,
    pub word_degree: i64,
    pub expected: i64,
}

#[derive(Debug, Clone)]
pub struct GradingReport {
    pub violations: Vec<GradingViolation>,
}

impl GradingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The built-in algebras: `unknot` and `trefoil`, in degrees ≤ 1 for the trefoil.
pub fn builtin_fixture(name: &str) -> Result<DGAlgebra, DgaError> {
    match name {
        "unknot" => Ok(unknot()),
        "trefoil" => Ok(trefoil()),
        other => Err(DgaError::UnknownFixture(other.to_string())),
    }
}

struct Coeffs {
    one: LaurentPoly,
    l: LaurentPoly,
    m: LaurentPoly,
    q: LaurentPoly,
}

fn coeffs() -> Coeffs {
    let v = VarSet::augmentation();
    Coeffs {
        one: LaurentPoly::one(&v),
        l: LaurentPoly::var(&v, LAMBDA).unwrap(),
        m: LaurentPoly::var(&v, MU).unwrap(),
        q: LaurentPoly::var(&v, Q).unwrap(),
    }
}

/// `dc = 1 - ex - ep - Q*ex*ep`, `de = 0`.
fn unknot() -> DGAlgebra {
    let k = coeffs();
    let mut a = DGAlgebra::new(
        "unknot",
        VarSet::augmentation(),
        [("c".to_string(), 1), ("e".to_string(), 2)],
    )
    .unwrap();
    let dc = &(&(&k.one - &k.l) - &k.m) - &(&(&k.q * &k.l) * &k.m);
    let dc = a.scalar(dc).unwrap();
    a.set_differential("c", dc).unwrap();
    a
}

fn trefoil() -> DGAlgebra {
    let k = coeffs();
    let gens = [
        ("a12", 0),
        ("a21", 0),
        ("b12", 1),
        ("b21", 1),
        ("c11", 1),
        ("c12", 1),
        ("c21", 1),
        ("c22", 1),
    ];
    let mut a = DGAlgebra::new(
        "trefoil",
        VarSet::augmentation(),
        gens.iter().map(|(n, d)| (n.to_string(), *d)),
    )
    .unwrap();
    let sig = a.signature().clone();
    let w = |names: &[&str]| Word(names.iter().map(|n| sig.index_of(n).unwrap()).collect());
    let el = |terms: Vec<(LaurentPoly, Word)>| {
        let mut e = NCElement::zero(&sig);
        for (c, wd) in terms {
            e.add_term(wd, c);
        }
        e
    };
    let (one, l, m, q) = (&k.one, &k.l, &k.m, &k.q);
    let lm = l * m;
    let two_q = q + q;
    // dc11 = e^x e^p - e^x - (2Q - e^p) a12 - Q a12^2 a21
    let dc11 = el(vec![
        (&lm - l, w(&[])),
        (m - &two_q, w(&["a12"])),
        (-q, w(&["a12", "a12", "a21"])),
    ]);
    // dc12 = Q - e^p + e^p a12 + Q a12 a21
    let dc12 = el(vec![
        (q - m, w(&[])),
        (m.clone(), w(&["a12"])),
        (q.clone(), w(&["a12", "a21"])),
    ]);
    // dc21 = Q - e^p - e^x e^p a21 + Q a12 a21
    let dc21 = el(vec![
        (q - m, w(&[])),
        (-&lm, w(&["a21"])),
        (q.clone(), w(&["a12", "a21"])),
    ]);
    // dc22 = e^p - 1 - Q a21 + e^p a12 a21
    let dc22 = el(vec![
        (m - one, w(&[])),
        (-q, w(&["a21"])),
        (m.clone(), w(&["a12", "a21"])),
    ]);
    // db12 = e^{-x} a12 - a21
    let db12 = el(vec![
        (l.pow_signed(-1).unwrap(), w(&["a12"])),
        (-one, w(&["a21"])),
    ]);
    // db21 = a21 - e^x a12
    let db21 = el(vec![(one.clone(), w(&["a21"])), (-l, w(&["a12"]))]);
    for (n, d) in [
        ("b12", db12),
        ("b21", db21),
        ("c11", dc11),
        ("c12", dc12),
        ("c21", dc21),
        ("c22", dc22),
    ] {
        a.set_differential(n, d).unwrap();
    }
    a
}

//! The quantum torus over `ℚ(s, Q)`.
//!
//! Elements are finite sums `Σ t_{m,n} e^{m x̂} e^{n p̂}` in normal order
//! (`e^{x̂}` powers first). The single relation is
//! `e^{p̂} e^{x̂} = q e^{x̂} e^{p̂}` with `q = s²`, so
//! `(m₁,n₁)·(m₂,n₂) = q^{n₁m₂} (m₁+m₂, n₁+n₂)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::ring::{LaurentPoly, RatFunc, Rational, RingError, VarSet, LAMBDA, MU, Q, S};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QtError {
    #[error("coefficient {0} of term ({1}, {2}) has a pole at s = 1")]
    Pole(String, i64, i64),
    #[error("classical coefficient {0} is not a Laurent polynomial in Q")]
    NotLaurent(String),
    #[error("unknown operator fixture `{0}` (expected `aug_hat_unknot` or `aug_hat_trefoil`)")]
    UnknownFixture(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A normally ordered quantum-torus element with coefficients in `ℚ(s, Q)`.
#[derive(Clone, PartialEq, Eq)]
pub struct QTElement {
    terms: BTreeMap<(i64, i64), RatFunc>,
}

fn qvars() -> VarSet {
    VarSet::quantum()
}

/// `s^k` as a rational function.
pub fn s_pow(k: i64) -> RatFunc {
    let vars = qvars();
    let mut e = vec![0; vars.len()];
    e[vars.index_of(S).unwrap()] = k as i32;
    RatFunc::from_poly(LaurentPoly::monomial(&vars, e, Rational::one()))
}

impl QTElement {
    pub fn zero() -> Self {
        QTElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, RatFunc::one(&qvars()))
    }

    /// `c · e^{m x̂} e^{n p̂}`.
    pub fn monomial(m: i64, n: i64, c: RatFunc) -> Self {
        let mut t = Self::zero();
        t.add_term(m, n, c);
        t
    }

    /// A scalar in `ℚ(s, Q)`.
    pub fn scalar(c: RatFunc) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn ex() -> Self {
        Self::monomial(1, 0, RatFunc::one(&qvars()))
    }

    pub fn ep() -> Self {
        Self::monomial(0, 1, RatFunc::one(&qvars()))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), RatFunc)>) -> Self {
        let mut t = Self::zero();
        for ((m, n), c) in terms {
            t.add_term(m, n, c);
        }
        t
    }

    fn add_term(&mut self, m: i64, n: i64, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        let c = if c.vars() == &qvars() {
            c
        } else {
            c.embed(&qvars()).expect("coefficients live in (s, Q)")
        };
        match self.terms.remove(&(m, n)) {
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert((m, n), sum);
                }
            }
            None => {
                self.terms.insert((m, n), c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &RatFunc)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: i64, n: i64) -> RatFunc {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(|| RatFunc::zero(&qvars()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Smallest and largest `e^{x̂}` exponent.
    pub fn x_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().map(|k| k.0).min()?;
        let hi = self.terms.keys().map(|k| k.0).max()?;
        Some((lo, hi))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(m, n), c) in &other.terms {
            out.add_term(m, n, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QTElement {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn scale(&self, k: &RatFunc) -> Self {
        let mut out = Self::zero();
        for (&(m, n), c) in &self.terms {
            out.add_term(m, n, c * k);
        }
        out
    }

    /// The product, normally ordered.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(m1, n1), a) in &self.terms {
            for (&(m2, n2), b) in &other.terms {
                let c = &(a * b) * &s_pow(2 * n1 * m2);
                out.add_term(m1 + m2, n1 + n2, c);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `s ↦ 1`, `e^{x̂} ↦ ex`, `e^{p̂} ↦ ep`, as a commutative Laurent
    /// polynomial in `(ex, ep, Q)`.
    pub fn classical(&self) -> Result<LaurentPoly, QtError> {
        let target = VarSet::augmentation();
        let qonly = VarSet::new([Q])?;
        let one = LaurentPoly::one(&qvars());
        let mut out = LaurentPoly::zero(&target);
        for (&(m, n), c) in &self.terms {
            let num = c.numer().substitute(S, &one)?.embed(&qonly)?;
            let den = c.denom().substitute(S, &one)?.embed(&qonly)?;
            if den.is_zero() {
                return Err(QtError::Pole(c.to_string(), m, n));
            }
            let val = RatFunc::new(num, den)?;
            let poly = val
                .as_poly()
                .ok_or_else(|| QtError::NotLaurent(val.to_string()))?
                .embed(&target)?;
            let mut shift = vec![0i32; target.len()];
            shift[target.index_of(LAMBDA).unwrap()] = m as i32;
            shift[target.index_of(MU).unwrap()] = n as i32;
            out = &out + &poly.shift(&shift);
        }
        Ok(out)
    }

    /// Conjugation by the framing multiplier `e^{m x} ↦ q^{r m²} e^{m x}`:
    /// `(m, n), t ↦ (m, n + 2rm), t·q^{r m²}`.
    pub fn frame(&self, r: i64) -> Self {
        let mut out = Self::zero();
        for (&(m, n), c) in &self.terms {
            out.add_term(m, n + 2 * r * m, c * &s_pow(2 * r * m * m));
        }
        out
    }
}

/// Terms in `(m, n)` order as `coeff*Ex^m*Ep^n`, coefficients parenthesized
/// when they have more than one term.
impl fmt::Display for QTElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(m, n), c)) in self.terms.iter().enumerate() {
            let mut factors = Vec::new();
            for (sym, k) in [("Ex", m), ("Ep", n)] {
                match k {
                    0 => {}
                    1 => factors.push(sym.to_string()),
                    _ => factors.push(format!("{sym}^{k}")),
                }
            }
            let simple = c.denom().is_one() && c.numer().len() == 1;
            let coeff = c.to_string();
            let (neg, body) = match coeff.strip_prefix('-') {
                Some(rest) if simple => (true, rest.to_string()),
                _ if simple => (false, coeff.clone()),
                _ => (false, format!("({coeff})")),
            };
            let sep = match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let text = if factors.is_empty() {
                body
            } else if body == "1" {
                factors.join("*")
            } else {
                format!("{body}*{}", factors.join("*"))
            };
            write!(f, "{sep}{text}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QTElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QTElement({})", self)
    }
}

/// A framing under which a classical limit matches a commutative polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramingMatch {
    pub r: i64,
    /// `classical = factor · unit · aug(ex·ep^r, ep, Q)`.
    pub unit: LaurentPoly,
}

/// Tries every `r` in `range`: substitutes `ex ↦ ex·ep^r` into `aug` and
/// checks whether `classical` is `factor` times that times a monomial.
pub fn find_framing(
    classical: &LaurentPoly,
    aug: &LaurentPoly,
    factor: &LaurentPoly,
    range: std::ops::RangeInclusive<i64>,
) -> Result<Vec<FramingMatch>, QtError> {
    let vars = classical.vars();
    let (aug, factor) = (aug.embed(vars)?, factor.embed(vars)?);
    let l = LaurentPoly::var(vars, LAMBDA)?;
    let m = LaurentPoly::var(vars, MU)?;
    let mut hits = Vec::new();
    for r in range {
        let image = &l * &m.pow_signed(r)?;
        let target = &factor * &aug.substitute(LAMBDA, &image)?;
        if let Some(unit) = classical.monomial_quotient(&target) {
            hits.push(FramingMatch { r, unit });
        }
    }
    Ok(hits)
}

pub fn qt_fixture(name: &str) -> Result<QTElement, QtError> {
    match name {
        "aug_hat_unknot" => Ok(aug_hat_unknot()),
        "aug_hat_trefoil" => Ok(aug_hat_trefoil()),
        other => Err(QtError::UnknownFixture(other.to_string())),
    }
}

fn qq() -> QTElement {
    QTElement::scalar(RatFunc::var(&qvars(), Q).unwrap())
}

fn c(k: i64) -> QTElement {
    QTElement::scalar(RatFunc::constant(&qvars(), crate::ring::rat(k)))
}

fn sp(k: i64) -> QTElement {
    QTElement::scalar(s_pow(k))
}

/// `1 - Ex - Ep - Q*Ex*Ep`.
pub fn aug_hat_unknot() -> QTElement {
    let (x, p) = (QTElement::ex(), QTElement::ep());
    c(1).sub(&x).sub(&p).sub(&qq().mul(&x).mul(&p))
}

/// The quantized trefoil polynomial in 0-framing, transcribed factor by
/// factor with `e^{g_s} = s²`; the `Ep`-functions stand to the left of the
/// `1`, `Ex`, `Ex²` blocks and are normally ordered by multiplication.
pub fn aug_hat_trefoil() -> QTElement {
    let (x, p) = (QTElement::ex(), QTElement::ep());
    let q = qq();
    let p2 = p.pow(2);

    // e^{g_s} Q^3 e^{3p̂} (Q - e^{-3g_s} e^{2p̂}) (Q - e^{-g_s} e^{p̂}) · 1
    let block0 = sp(2)
        .mul(&q.pow(3))
        .mul(&p.pow(3))
        .mul(&q.sub(&sp(-6).mul(&p2)))
        .mul(&q.sub(&sp(-2).mul(&p)));

    // e^{-5g_s/2} (Q - e^{-2g_s} e^{2p̂}) ((e^{2g_s}e^{2p̂} + e^{3g_s}e^{2p̂} - e^{3g_s}e^{p̂} + e^{4g_s}) Q²
    //   - (e^{g_s}e^{3p̂} + e^{3g_s}e^{2p̂} + e^{g_s}e^{2p̂}) Q + e^{4p̂}) · e^{x̂}
    let quad = sp(4).mul(&p2).add(&sp(6).mul(&p2)).sub(&sp(6).mul(&p)).add(&sp(8));
    let lin = sp(2).mul(&p.pow(3)).add(&sp(6).mul(&p2)).add(&sp(2).mul(&p2));
    let bracket = quad.mul(&q.pow(2)).sub(&lin.mul(&q)).add(&p.pow(4));
    let block1 = sp(-5)
        .mul(&q.sub(&sp(-4).mul(&p2)))
        .mul(&bracket)
        .mul(&x);

    // (Q - e^{-g_s} e^{2p̂}) (e^{p̂} - e^{g_s}) · e^{2x̂}
    let block2 = q.sub(&sp(-2).mul(&p2)).mul(&p.sub(&sp(2))).mul(&x.pow(2));

    block0.add(&block1).add(&block2)
}

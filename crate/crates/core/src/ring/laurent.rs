use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{fmt_rational, Rational, RingError, VarSet};

/// Exponent vector; one entry per variable of the owning [`VarSet`].
pub type Exponents = Vec<i32>;

/// A multivariate Laurent polynomial with rational coefficients.
///
/// Terms are kept in a `BTreeMap`, so iteration is in the canonical order:
/// lexicographic on exponent vectors, variables compared in `VarSet` order,
/// smallest first. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: VarSet,
    terms: BTreeMap<Exponents, Rational>,
}

impl LaurentPoly {
    pub fn zero(vars: &VarSet) -> Self {
        LaurentPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        Self::monomial(vars, vec![0; vars.len()], c)
    }

    pub fn monomial(vars: &VarSet, exps: Exponents, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    /// The variable `name` to the first power.
    pub fn var(vars: &VarSet, name: &str) -> Result<Self, RingError> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(vars, e, Rational::one()))
    }

    /// Builds a polynomial from possibly repeated terms, merging and dropping zeros.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[i32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
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

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if this polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Single term `c·x^e`.
    pub fn as_monomial(&self) -> Option<(&Exponents, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// A single term with coefficient ±1; these are the units usable as
    /// substitution images.
    pub fn is_unit_monomial(&self) -> bool {
        self.as_monomial()
            .is_some_and(|(_, c)| c.is_integer() && c.numer().abs().is_one())
    }

    /// First term in canonical order; this is the term used for sign
    /// normalization throughout the crate.
    pub fn first_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next()
    }

    pub fn last_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Componentwise minimum of the exponents (all zeros for the zero polynomial).
    pub fn min_exponents(&self) -> Exponents {
        self.fold_exponents(i32::min)
    }

    pub fn max_exponents(&self) -> Exponents {
        self.fold_exponents(i32::max)
    }

    fn fold_exponents(&self, f: fn(i32, i32) -> i32) -> Exponents {
        let mut it = self.terms.keys();
        match it.next() {
            None => vec![0; self.vars.len()],
            Some(first) => it.fold(first.clone(), |acc, e| {
                acc.iter().zip(e).map(|(&a, &b)| f(a, b)).collect()
            }),
        }
    }

    /// The monomial `u = c·x^e` with `self = u · other`, if one exists.
    pub fn monomial_quotient(&self, other: &Self) -> Option<Self> {
        if self.vars != other.vars || self.len() != other.len() || self.is_zero() {
            return None;
        }
        let (ea, ca) = self.first_term()?;
        let (eb, cb) = other.first_term()?;
        let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a - b).collect();
        let c = ca / cb;
        let u = Self::monomial(&self.vars, e, c);
        (&u * other == *self).then_some(u)
    }

    /// Multiply by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        assert_eq!(shift.len(), self.vars.len());
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exps(e, shift), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * k))
                .collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.vars.check_same(&other.vars)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.vars.check_same(&other.vars)?;
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(add_exps(ea, eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative powers exist only for single terms.
    pub fn pow_signed(&self, n: i64) -> Result<Self, RingError> {
        if n >= 0 {
            return Ok(self.pow(n as u32));
        }
        let (e, c) = self.as_monomial().ok_or(RingError::NonUnitPower)?;
        let k = (-n) as i32;
        let inv_e: Exponents = e.iter().map(|&x| -x * k).collect();
        let inv_c = c.recip().pow(k);
        Ok(Self::monomial(&self.vars, inv_e, inv_c))
    }

    /// Partial derivative with respect to `name`.
    pub fn derivative(&self, name: &str) -> Result<Self, RingError> {
        let i = self.var_index(name)?;
        Ok(Self::from_terms(
            &self.vars,
            self.terms.iter().filter(|(e, _)| e[i] != 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, c * Rational::from_integer(BigInt::from(e[i])))
            }),
        ))
    }

    /// Ring-homomorphic substitution `name ↦ image` where `image` is a unit
    /// monomial `±x^a`, so the result stays Laurent.
    pub fn substitute(&self, name: &str, image: &LaurentPoly) -> Result<Self, RingError> {
        self.vars.check_same(&image.vars)?;
        let i = self.var_index(name)?;
        if !image.is_unit_monomial() {
            return Err(RingError::NonUnitImage(image.to_string()));
        }
        let (ie, ic) = image.as_monomial().unwrap();
        let negative = ic.is_negative();
        Ok(Self::from_terms(
            &self.vars,
            self.terms.iter().map(|(e, c)| {
                let k = e[i];
                let mut e2 = e.clone();
                e2[i] = 0;
                for (x, y) in e2.iter_mut().zip(ie) {
                    *x += k * y;
                }
                let c2 = if negative && k % 2 != 0 { -c } else { c.clone() };
                (e2, c2)
            }),
        ))
    }

    /// Numeric value at `point`.
    ///
    /// Every variable must be assigned. Powers are built by repeated
    /// multiplication (inverses by one complex division), each term is formed
    /// as `c · Π v^e` with variables multiplied in `VarSet` order, and terms
    /// are summed left to right in canonical order. The fixed order makes the
    /// result bit-reproducible.
    pub fn eval(&self, point: &[(&str, Complex64)]) -> Result<Complex64, RingError> {
        let values = self.assign(point)?;
        self.eval_values(&values)
    }

    pub(crate) fn eval_values(&self, values: &[Complex64]) -> Result<Complex64, RingError> {
        let lo = self.min_exponents();
        for (i, v) in values.iter().enumerate() {
            if lo[i] < 0 && *v == Complex64::new(0.0, 0.0) {
                return Err(RingError::ZeroDivisorAssignment(self.vars.names()[i].clone()));
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (v, &k) in values.iter().zip(e) {
                if k != 0 {
                    t *= int_pow(*v, k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    fn assign(&self, point: &[(&str, Complex64)]) -> Result<Vec<Complex64>, RingError> {
        self.vars
            .names()
            .iter()
            .map(|n| {
                point
                    .iter()
                    .find(|(k, _)| k == n)
                    .map(|(_, v)| *v)
                    .ok_or_else(|| RingError::Unassigned(n.clone()))
            })
            .collect()
    }

    /// Exact value at a rational point.
    pub fn eval_exact(&self, point: &[(&str, Rational)]) -> Result<Rational, RingError> {
        let values: Vec<Rational> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                point
                    .iter()
                    .find(|(k, _)| k == n)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| RingError::Unassigned(n.clone()))
            })
            .collect::<Result<_, _>>()?;
        let lo = self.min_exponents();
        for (i, v) in values.iter().enumerate() {
            if lo[i] < 0 && v.is_zero() {
                return Err(RingError::ZeroDivisorAssignment(self.vars.names()[i].clone()));
            }
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                if k != 0 {
                    t *= v.pow(k);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Re-express over `target`, which must contain every variable that occurs.
    pub fn embed(&self, target: &VarSet) -> Result<Self, RingError> {
        let map: Vec<Option<usize>> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => e2[j] = k,
                    None => return Err(RingError::VariableInUse(self.vars.names()[i].clone())),
                }
            }
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    pub(crate) fn var_index(&self, name: &str) -> Result<usize, RingError> {
        self.vars
            .index_of(name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_string()))
    }

    /// Splits off the positive rational factor `k` so that `self = k · p` with
    /// `p` having integer coefficients of content 1 and a positive first term.
    /// Returns `(k, p)`; the zero polynomial yields `(1, 0)`.
    pub fn primitive_part(&self) -> (Rational, Self) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&den / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut k = Rational::new(num_gcd, den);
        if self.first_term().unwrap().1.is_negative() {
            k = -k;
        }
        (k.clone(), self.scale(&k.recip()))
    }

    /// Exact quotient `self / divisor` for polynomials (no negative
    /// exponents), by division in the canonical lex order.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, RingError> {
        self.vars.check_same(&divisor.vars)?;
        if divisor.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let (le, lc) = divisor.last_term().unwrap();
        let (le, lc) = (le.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((e, c)) = rem.last_term() {
            let qe: Exponents = e.iter().zip(&le).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return Err(RingError::NotDivisible(self.to_string()));
            }
            let qc = c / &lc;
            let t = Self::monomial(&self.vars, qe.clone(), qc.clone());
            rem = &rem - &(&t * divisor);
            quot.add_term(qe, qc);
        }
        Ok(quot)
    }
}

fn add_exps(a: &[i32], b: &[i32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn int_pow(v: Complex64, k: i32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..k.unsigned_abs() {
        acc *= v;
    }
    if k < 0 {
        Complex64::new(1.0, 0.0) / acc
    } else {
        acc
    }
}

/// Canonical rendering: terms in canonical order, `*` between factors,
/// `^` for powers other than 1, e.g. `1 - ep - ex - ex*ep*Q`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let abs = c.abs();
            let mono = render_monomial(self.vars.names(), e);
            match (abs.is_one(), mono.is_empty()) {
                (_, true) => write!(f, "{}", fmt_rational(&abs))?,
                (true, false) => write!(f, "{}", mono)?,
                (false, false) => write!(f, "{}*{}", fmt_rational(&abs), mono)?,
            }
        }
        Ok(())
    }
}

pub(crate) fn render_monomial(names: &[String], e: &[i32]) -> String {
    let mut parts = Vec::new();
    for (n, &k) in names.iter().zip(e) {
        match k {
            0 => {}
            1 => parts.push(n.clone()),
            _ => parts.push(format!("{}^{}", n, k)),
        }
    }
    parts.join("*")
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({})", self.vars, self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("LaurentPoly arithmetic")
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$checked(&rhs).expect("LaurentPoly arithmetic")
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$checked(rhs).expect("LaurentPoly arithmetic")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

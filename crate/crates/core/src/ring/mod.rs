//! Exact coefficient arithmetic.
//!
//! Everything in this crate that is not explicitly numeric is built on the
//! types here: multivariate Laurent polynomials over arbitrary-precision
//! rationals, reduced rational functions, and truncated power series in the
//! formal variable `g_s`.
//!
//! Variables are named. The conventional names are `ex` (λ = e^x), `ep`
//! (μ = e^p), `Q` and `s` (s² = q = e^{g_s}).

mod gcd;
mod laurent;
mod ratfunc;
mod series;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub use gcd::poly_gcd;
pub use laurent::{Exponents, LaurentPoly};
pub(crate) use laurent::render_monomial as laurent_monomial;
pub use ratfunc::RatFunc;
pub use series::PowerSeries;

pub type Rational = BigRational;

pub const LAMBDA: &str = "ex";
pub const MU: &str = "ep";
pub const Q: &str = "Q";
pub const S: &str = "s";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("variable sets differ: [{0}] vs [{1}]")]
    VarSetMismatch(String, String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("substitution image `{0}` is not a unit monomial")]
    NonUnitImage(String),
    #[error("variable `{0}` is not assigned a value")]
    Unassigned(String),
    #[error("zero assigned to `{0}`, which occurs with a negative exponent")]
    ZeroDivisorAssignment(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{0}` is not exactly divisible")]
    NotDivisible(String),
    #[error("negative power of a non-unit")]
    NonUnitPower,
    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("exp of a series with nonzero constant term {0} is not rational")]
    NonzeroConstant(String),
    #[error("cannot drop variable `{0}`: it still occurs")]
    VariableInUse(String),
}

/// An ordered, duplicate-free list of variable names.
///
/// Cloning is cheap; equality compares names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<I, S>(names: I) -> Result<Self, RingError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(RingError::DuplicateVariable(n.clone()));
            }
        }
        Ok(VarSet(names.into()))
    }

    /// `(ex, ep, Q, s)`.
    pub fn canonical() -> Self {
        Self::new([LAMBDA, MU, Q, S]).unwrap()
    }

    /// `(ex, ep, Q)`: coefficients of the dg-algebras and augmentation polynomials.
    pub fn augmentation() -> Self {
        Self::new([LAMBDA, MU, Q]).unwrap()
    }

    /// `(s, Q)`: coefficients of quantum-torus operators and wavefunctions.
    pub fn quantum() -> Self {
        Self::new([S, Q]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub(crate) fn check_same(&self, other: &VarSet) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.0, &other.0) || self == other {
            Ok(())
        } else {
            Err(RingError::VarSetMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet({})", self)
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(", "))
    }
}

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational the way the text formats read it back: `3`, `-3/4`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn varset_rejects_duplicates() {
        assert_eq!(
            VarSet::new(["ex", "ex"]),
            Err(RingError::DuplicateVariable("ex".into()))
        );
    }

    #[test]
    fn canonical_order_is_stable() {
        let v = VarSet::canonical();
        assert_eq!(v.names(), ["ex", "ep", "Q", "s"]);
        assert_eq!(v.index_of("Q"), Some(2));
    }
}

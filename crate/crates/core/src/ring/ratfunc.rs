use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::{LaurentPoly, Rational, RingError, VarSet};

/// A reduced fraction of Laurent polynomials.
///
/// Canonical form: the denominator has minimum exponent 0 in every variable,
/// integer coefficients of content 1, a positive first term, and is coprime
/// to the numerator. All monomial factors live in the numerator. Two equal
/// rational functions are therefore structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, RingError> {
        num.vars().check_same(den.vars())?;
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.vars()));
        }
        if den.as_monomial().is_some() {
            return Ok(Self::from_poly_over_monomial(num, &den));
        }
        let nlo = num.min_exponents();
        let dlo = den.min_exponents();
        let n0 = num.shift(&negate(&nlo));
        let d0 = den.shift(&negate(&dlo));
        let g = poly_gcd(&n0, &d0);
        let (n1, d1) = if g.is_one() {
            (n0, d0)
        } else {
            (
                n0.div_exact(&g).expect("gcd divides numerator"),
                d0.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let (k, d2) = d1.primitive_part();
        let mono: Vec<i32> = nlo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
        let n2 = n1.scale(&k.recip()).shift(&mono);
        Ok(RatFunc { num: n2, den: d2 })
    }

    fn from_poly_over_monomial(num: LaurentPoly, den: &LaurentPoly) -> Self {
        let (e, c) = den.as_monomial().unwrap();
        let vars = num.vars().clone();
        RatFunc {
            num: num.shift(&negate(e)).scale(&c.recip()),
            den: LaurentPoly::one(&vars),
        }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let vars = p.vars().clone();
        RatFunc {
            num: p,
            den: LaurentPoly::one(&vars),
        }
    }

    pub fn zero(vars: &VarSet) -> Self {
        Self::from_poly(LaurentPoly::zero(vars))
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::from_poly(LaurentPoly::one(vars))
    }

    pub fn constant(vars: &VarSet, c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(vars, c))
    }

    pub fn var(vars: &VarSet, name: &str) -> Result<Self, RingError> {
        Ok(Self::from_poly(LaurentPoly::var(vars, name)?))
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn vars(&self) -> &VarSet {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The numerator, if the denominator is 1.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        if self.den.is_one() && other.den.is_one() {
            return Ok(Self::from_poly(self.num.checked_add(&other.num)?));
        }
        if self.den == other.den {
            return Self::new(self.num.checked_add(&other.num)?, self.den.clone());
        }
        Self::new(
            self.num.checked_mul(&other.den)? + &other.num * &self.den,
            &self.den * &other.den,
        )
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        if self.den.is_one() && other.den.is_one() {
            return Ok(Self::from_poly(self.num.checked_mul(&other.num)?));
        }
        Self::new(
            self.num.checked_mul(&other.num)?,
            &self.den * &other.den,
        )
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, RingError> {
        if other.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Self::new(
            self.num.checked_mul(&other.den)?,
            &self.den * &other.num,
        )
    }

    pub fn recip(&self) -> Result<Self, RingError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i64) -> Result<Self, RingError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.vars());
        }
        RatFunc {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    /// Multiply by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        RatFunc {
            num: self.num.shift(shift),
            den: self.den.clone(),
        }
    }

    /// Unit-monomial substitution applied to numerator and denominator.
    ///
    /// Fails with [`RingError::DivisionByZero`] if the denominator vanishes
    /// under the substitution.
    pub fn substitute(&self, name: &str, image: &LaurentPoly) -> Result<Self, RingError> {
        Self::new(
            self.num.substitute(name, image)?,
            self.den.substitute(name, image)?,
        )
    }

    pub fn embed(&self, target: &VarSet) -> Result<Self, RingError> {
        Self::new(self.num.embed(target)?, self.den.embed(target)?)
    }
}

fn negate(e: &[i32]) -> Vec<i32> {
    e.iter().map(|x| -x).collect()
}

/// `num`, or `(num)/(den)`; parentheses only around multi-term parts.
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &LaurentPoly| {
            if p.len() > 1 {
                format!("({})", p)
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{}]({})", self.vars(), self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                self.$checked(rhs).expect("RatFunc arithmetic")
            }
        }
        impl $trait<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$checked(&rhs).expect("RatFunc arithmetic")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<LaurentPoly> for RatFunc {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl RatFunc {
    /// `true` if the value is the constant `c`.
    pub fn is_constant(&self, c: &Rational) -> bool {
        self.den.is_one() && self.num.as_constant().as_ref() == Some(c)
    }

    pub fn is_unit_constant(&self) -> bool {
        self.is_constant(&Rational::one())
    }
}

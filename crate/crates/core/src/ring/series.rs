use std::fmt;

use num_traits::{One, Zero};

use super::{fmt_rational, rat, Rational, RingError};

/// A power series in `g_s` truncated after the term of degree `order`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// `c · g_s`.
    pub fn linear(order: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = c;
        }
        s
    }

    /// Coefficients beyond `order` are dropped; missing ones are zero.
    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut s = Self::zero(order);
        for (i, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[i] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    fn check(&self, other: &Self) -> Result<(), RingError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(RingError::OrderMismatch(self.order(), other.order()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        Ok(PowerSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check(other)?;
        let n = self.order();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        Ok(out)
    }

    /// `exp(A)` for `A` with zero constant term.
    ///
    /// Uses the recurrence `n·e_n = Σ_{k=1}^{n} k·a_k·e_{n-k}` from `E' = A'E`.
    pub fn exp(&self) -> Result<Self, RingError> {
        if !self.coeffs[0].is_zero() {
            return Err(RingError::NonzeroConstant(fmt_rational(&self.coeffs[0])));
        }
        Ok(self.exp_unchecked())
    }

    /// Splits `A = c + N` and returns `(c, exp(N))`, so that
    /// `exp(A) = e^c · exp(N)` with the transcendental factor kept symbolic.
    pub fn exp_nilpotent_part(&self) -> (Rational, Self) {
        let mut n = self.clone();
        let c = std::mem::replace(&mut n.coeffs[0], Rational::zero());
        (c, n.exp_unchecked())
    }

    fn exp_unchecked(&self) -> Self {
        let n = self.order();
        let mut e = Self::zero(n);
        e.coeffs[0] = Rational::one();
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * rat(k as i64) * &e.coeffs[m - k];
                }
            }
            e.coeffs[m] = acc / rat(m as i64);
        }
        e
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let a = if neg { -c } else { c.clone() };
            match (i, a.is_one()) {
                (0, _) => write!(f, "{}", fmt_rational(&a))?,
                (1, true) => write!(f, "gs")?,
                (1, false) => write!(f, "{}*gs", fmt_rational(&a))?,
                (_, true) => write!(f, "gs^{}", i)?,
                (_, false) => write!(f, "{}*gs^{}", fmt_rational(&a), i)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(gs^{})", self.order() + 1)
    }
}

//! Ordinary (affine) polynomials under a block elimination order.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::ring::{LaurentPoly, Rational, RingError, VarSet};

pub type Monomial = Vec<u32>;

/// Block order: blocks are compared left to right, each by degrevlex.
/// The variables of earlier blocks are eliminated first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOrder {
    blocks: Vec<std::ops::Range<usize>>,
}

impl BlockOrder {
    /// Consecutive blocks of the given sizes.
    pub fn new(sizes: &[usize]) -> Self {
        let mut start = 0;
        let blocks = sizes
            .iter()
            .map(|&n| {
                let r = start..start + n;
                start += n;
                r
            })
            .collect();
        BlockOrder { blocks }
    }

    pub fn nvars(&self) -> usize {
        self.blocks.last().map_or(0, |r| r.end)
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for r in &self.blocks {
            let o = degrevlex(&a[r.clone()], &b[r.clone()]);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    if da != db {
        return da.cmp(&db);
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // smaller exponent in the last differing variable is larger
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Variables and monomial order shared by all polynomials of an ideal.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    pub names: Vec<String>,
    pub order: BlockOrder,
}

impl PolyRing {
    pub fn new(names: Vec<String>, block_sizes: &[usize]) -> Arc<Self> {
        let order = BlockOrder::new(block_sizes);
        assert_eq!(order.nvars(), names.len());
        Arc::new(PolyRing { names, order })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Terms sorted in decreasing monomial order; no zero coefficients.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut v: Vec<(Monomial, Rational)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| ring.order.cmp(&b.0, &a.0));
        let mut merged: Vec<(Monomial, Rational)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Poly {
            ring: ring.clone(),
            terms: merged,
        }
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        let mut m = vec![0; ring.names.len()];
        m[i] = 1;
        Self::from_terms(ring, [(m, Rational::one())])
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Rational {
        &self.terms[0].1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        let inv = self.lc().recip();
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * &inv)).collect(),
        }
    }

    /// `self - c · x^m · g`, merging the sorted term lists.
    pub fn sub_scaled(&self, c: &Rational, m: &[u32], g: &Poly) -> Poly {
        let ord = &self.ring.order;
        let shifted = g.terms.iter().map(|(gm, gc)| (mono_mul(gm, m), gc * c));
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (bm, bc) = b.next().unwrap();
                    out.push((bm, -bc));
                }
                (Some((am, _)), Some((bm, _))) => match ord.cmp(am, bm) {
                    Ordering::Greater => out.push(a.next().unwrap()),
                    Ordering::Less => {
                        let (bm, bc) = b.next().unwrap();
                        out.push((bm, -bc));
                    }
                    Ordering::Equal => {
                        let (am, ac) = a.next().unwrap();
                        let (_, bc) = b.next().unwrap();
                        let c = ac - bc;
                        if !c.is_zero() {
                            out.push((am, c));
                        }
                    }
                },
            }
        }
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.sub_scaled(&-Rational::one(), &vec![0; self.ring.names.len()], other)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.sub_scaled(&Rational::one(), &vec![0; self.ring.names.len()], other)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.ring);
        for (m, c) in &other.terms {
            acc = acc.sub_scaled(&-c, m, self);
        }
        acc
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Indices of variables that occur.
    pub fn support(&self) -> Vec<usize> {
        let n = self.ring.names.len();
        (0..n)
            .filter(|&i| self.terms.iter().any(|(m, _)| m[i] > 0))
            .collect()
    }

    /// Re-express over `vars` by variable name.
    pub fn to_laurent(&self, vars: &VarSet) -> Result<LaurentPoly, RingError> {
        let map: Vec<Option<usize>> = self.ring.names.iter().map(|n| vars.index_of(n)).collect();
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0i32; vars.len()];
            for (i, &k) in m.iter().enumerate() {
                if k > 0 {
                    let j = map[i].ok_or_else(|| RingError::VariableInUse(self.ring.names[i].clone()))?;
                    e[j] = k as i32;
                }
            }
            out.push((e, c.clone()));
        }
        Ok(LaurentPoly::from_terms(vars, out))
    }
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_div(b: &[u32], a: &[u32]) -> Monomial {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarSet::new(self.ring.names.iter().cloned()).expect("distinct names");
        let lp = self.to_laurent(&names).expect("same names");
        write!(f, "{}", lp)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    #[test]
    fn degrevlex_basics() {
        let o = BlockOrder::new(&[3]);
        // x^2 > x*y > y^2 > x*z > y*z > z^2 in degrevlex with x > y > z
        let seq = [[2, 0, 0], [1, 1, 0], [0, 2, 0], [1, 0, 1], [0, 1, 1], [0, 0, 2]];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater, "{:?}", w);
        }
    }

    #[test]
    fn block_order_eliminates_first_block() {
        let o = BlockOrder::new(&[1, 2]);
        assert_eq!(o.cmp(&[1, 0, 0], &[0, 5, 5]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 2, 0], &[0, 1, 5]), Ordering::Less);
    }

    #[test]
    fn merge_arithmetic() {
        let ring = PolyRing::new(vec!["x".into(), "y".into()], &[2]);
        let x = Poly::var(&ring, 0);
        let y = Poly::var(&ring, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        let expected = x.mul(&x).sub(&y.mul(&y));
        assert_eq!(p, expected);
        assert!(p.sub(&expected).is_zero());
        assert_eq!(p.scale(&rat(0)), Poly::zero(&ring));
    }
}

//! Multivariate gcd over ℚ. The fast path is the heuristic integer gcd
//! (evaluate at a large integer, recurse, rebuild from the ξ-adic digits and
//! verify by division). When it gives up, recursive primitive
//! pseudo-remainder sequences take over: pick a main variable, split off the
//! content (a gcd one variable down), and run the univariate PRS on the
//! primitive parts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LaurentPoly, Rational};

/// Greatest common divisor in the Laurent ring, where monomials are units.
///
/// The result has nonnegative exponents with minimum 0 in every variable,
/// integer coefficients of content 1 and a positive first term. The gcd of
/// two zero polynomials is zero.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let strip = |p: &LaurentPoly| {
        let lo: Vec<i32> = p.min_exponents().iter().map(|x| -x).collect();
        p.shift(&lo)
    };
    pgcd(&strip(a), &strip(b))
}

fn normalize(p: &LaurentPoly) -> LaurentPoly {
    p.primitive_part().1
}

/// Polynomial gcd (monomials are *not* units here).
fn pgcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    match heu_gcd(&normalize(a), &normalize(b)) {
        Some(g) => normalize(&g),
        None => prs_gcd(a, b),
    }
}

fn prs_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let (amax, bmax) = (a.max_exponents(), b.max_exponents());
    let present: Vec<usize> = (0..amax.len()).filter(|&i| amax[i] > 0 || bmax[i] > 0).collect();
    if present.is_empty() {
        return LaurentPoly::one(a.vars());
    }
    // a variable missing from one side is removed by taking content
    if let Some(&v) = present.iter().find(|&&i| amax[i] == 0 || bmax[i] == 0) {
        return if amax[v] == 0 {
            pgcd(a, &content(b, v))
        } else {
            pgcd(&content(a, v), b)
        };
    }
    // main variable of least degree keeps the remainder sequence short
    let v = *present.iter().min_by_key(|&&i| amax[i].max(bmax[i])).unwrap();
    let (ca, cb) = (content(a, v), content(b, v));
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if degree(&f, v) < degree(&g, v) {
        std::mem::swap(&mut f, &mut g);
    }
    let prs = loop {
        let r = prem(&f, &g, v);
        if r.is_zero() {
            break g;
        }
        if degree(&r, v) == 0 {
            break LaurentPoly::one(a.vars());
        }
        f = g;
        g = primitive_in(&r, v);
    };
    let c = pgcd(&ca, &cb);
    normalize(&(&c * &primitive_in(&prs, v)))
}

/// Integer content and the quotient by it. Expects integer coefficients.
fn int_content(p: &LaurentPoly) -> (BigInt, LaurentPoly) {
    let c = p.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c.numer()));
    if c.is_zero() || c.is_one() {
        return (c, p.clone());
    }
    let k = Rational::from_integer(c.clone());
    (c, p.scale(&k.recip()))
}

fn max_norm(p: &LaurentPoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

/// `p` with variable `v` set to the integer `xi`.
fn eval_at(p: &LaurentPoly, v: usize, xi: &BigInt) -> LaurentPoly {
    let mut out = LaurentPoly::zero(p.vars());
    for (e, c) in p.terms() {
        let mut e2 = e.clone();
        e2[v] = 0;
        out.add_term(e2, c * Rational::from_integer(xi.pow(e[v] as u32)));
    }
    out
}

/// Inverse of [`eval_at`] for coefficients below `xi/2`: reads each integer
/// coefficient as balanced base-`xi` digits, digit `i` going to `v^i`.
fn interpolate(h: &LaurentPoly, v: usize, xi: &BigInt) -> LaurentPoly {
    let half = xi / 2;
    let mut out = LaurentPoly::zero(h.vars());
    for (e, c) in h.terms() {
        let mut n = c.numer().clone();
        let mut i = 0;
        while !n.is_zero() {
            let mut d = n.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            let mut e2 = e.clone();
            e2[v] = i;
            out.add_term(e2, Rational::from_integer(d.clone()));
            n = (n - d) / xi;
            i += 1;
        }
    }
    out
}

/// Heuristic gcd of integer polynomials, including the integer content.
/// `None` when no evaluation point produced a verified divisor.
fn heu_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let (ca, pa) = int_content(a);
    let (cb, pb) = int_content(b);
    let c = Rational::from_integer(ca.gcd(&cb));
    let (amax, bmax) = (pa.max_exponents(), pb.max_exponents());
    let Some(v) = (0..amax.len()).find(|&i| amax[i] > 0 || bmax[i] > 0) else {
        return Some(LaurentPoly::constant(a.vars(), c));
    };
    let mut xi: BigInt = max_norm(&pa).min(max_norm(&pb)) * 2 + 29;
    for _ in 0..6 {
        let h = heu_gcd(&eval_at(&pa, v, &xi), &eval_at(&pb, v, &xi))?;
        let g = interpolate(&h, v, &xi);
        if !g.is_zero() {
            let g = int_content(&g).1;
            if pa.div_exact(&g).is_ok() && pb.div_exact(&g).is_ok() {
                return Some(g.scale(&c));
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

fn degree(p: &LaurentPoly, v: usize) -> i32 {
    p.terms().map(|(e, _)| e[v]).max().unwrap_or(-1)
}

/// Coefficients of `p` as a polynomial in variable `v`, keyed by degree.
fn coeffs_in(p: &LaurentPoly, v: usize) -> BTreeMap<i32, LaurentPoly> {
    let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
    for (e, c) in p.terms() {
        let mut e2 = e.clone();
        e2[v] = 0;
        out.entry(e[v])
            .or_insert_with(|| LaurentPoly::zero(p.vars()))
            .add_term(e2, c.clone());
    }
    out
}

fn content(p: &LaurentPoly, v: usize) -> LaurentPoly {
    coeffs_in(p, v)
        .values()
        .fold(LaurentPoly::zero(p.vars()), |acc, c| pgcd(&acc, c))
}

fn primitive_in(p: &LaurentPoly, v: usize) -> LaurentPoly {
    let c = content(p, v);
    normalize(&p.div_exact(&c).expect("content divides"))
}

/// Pseudo-remainder of `f` by `g` in variable `v`; an exact remainder when
/// the leading coefficient of `g` is a constant.
fn prem(f: &LaurentPoly, g: &LaurentPoly, v: usize) -> LaurentPoly {
    let n = degree(g, v);
    let lc_g = coeffs_in(g, v).remove(&n).unwrap();
    let lc_const = lc_g.as_constant();
    let mut r = f.clone();
    loop {
        let m = degree(&r, v);
        if r.is_zero() || m < n {
            return r;
        }
        let lc_r = coeffs_in(&r, v).remove(&m).unwrap();
        let mut shift = vec![0; r.vars().len()];
        shift[v] = m - n;
        r = match &lc_const {
            Some(c) => &r - &(&lc_r.scale(&c.recip()) * &g.shift(&shift)),
            None => &(&lc_g * &r) - &(&lc_r * &g.shift(&shift)),
        };
    }
}

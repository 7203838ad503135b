//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use kch::augment::{Poly, PolyRing};
use kch::dga::{DGAlgebra, NCElement, Word};
use kch::qtorus::QTElement;
use kch::ring::{rat, ratio, LaurentPoly, RatFunc, Rational, VarSet};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

/// `Π_{j=0}^{m-1} (1 + Q q^j) / (1 - q^{j+1})` with `q = s²`, built by
/// multiplying numerator and denominator polynomials directly.
pub fn unknot_colored(m: usize) -> RatFunc {
    let v = VarSet::quantum();
    let one = LaurentPoly::one(&v);
    let q = LaurentPoly::var(&v, "Q").unwrap();
    let s = LaurentPoly::var(&v, "s").unwrap();
    let mut num = one.clone();
    let mut den = one.clone();
    for j in 0..m as u32 {
        num = &num * &(&one + &(&q * &s.pow(2 * j)));
        den = &den * &(&one - &s.pow(2 * (j + 1)));
    }
    RatFunc::new(num, den).unwrap()
}

/// Unknot branch `μ = (1 - λ)/(1 + Qλ)` of `1 - λ - μ - Qλμ = 0`.
pub fn unknot_mu(lambda: f64, q: f64) -> f64 {
    (1.0 - lambda) / (1.0 + q * lambda)
}

/// All roots of `Σ c_k z^k` by Durand–Kerner iteration.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let mut den = Complex64::new(1.0, 0.0);
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    den *= zi - zj;
                }
            }
            let step = eval(zi) / den;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    // polish each root with Newton on the original polynomial
    let deriv: Vec<Complex64> = monic.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let eval_d = |z: Complex64| deriv.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    for r in roots.iter_mut() {
        for _ in 0..5 {
            let d = eval_d(*r);
            if d.norm() > 0.0 {
                *r -= eval(*r) / d;
            }
        }
    }
    roots
}

/// An exact point `(λ, μ, Q, a12, a21)` on the common zero set of
/// `dc21`, `dc22`, `db12` of the trefoil, for chosen `λ` and `a12`.
///
/// `db12 = 0` gives `a21 = a12/λ`. `dc21 = 0` reads
/// `Q(1 + a12 a21) = μ(1 + λ a21)` and `dc22 = 0` reads
/// `μ(1 + a12 a21) = 1 + Q a21`; eliminating `Q` leaves a linear equation
/// in `μ`. Returns `None` on a vanishing denominator.
pub fn trefoil_common_root(lambda: &Rational, a12: &Rational) -> Option<[Rational; 5]> {
    let one = rat(1);
    let a21 = a12 / lambda;
    let k = &one + a12 * &a21;
    let l = &one + lambda * &a21;
    if k == rat(0) {
        return None;
    }
    let den = &k - &a21 * &l / &k;
    if den == rat(0) {
        return None;
    }
    let mu = &one / den;
    let q = &mu * &l / &k;
    Some([lambda.clone(), mu, q, a12.clone(), a21])
}

pub fn random_rational(rng: &mut TestRng, max: i64) -> Rational {
    let n = rng.gen_range(-max..=max);
    let d = rng.gen_range(1..=max);
    ratio(n, d)
}

pub fn random_nonzero_rational(rng: &mut TestRng, max: i64) -> Rational {
    loop {
        let r = random_rational(rng, max);
        if r != rat(0) {
            return r;
        }
    }
}

/// Up to `max_terms` terms with exponents in `-e..=e` and small coefficients.
pub fn random_laurent(rng: &mut TestRng, vars: &VarSet, max_terms: usize, e: i32) -> LaurentPoly {
    let n = rng.gen_range(0..=max_terms);
    let terms: Vec<(Vec<i32>, Rational)> = (0..n)
        .map(|_| {
            let exps = (0..vars.len()).map(|_| rng.gen_range(-e..=e)).collect();
            (exps, random_rational(rng, 4))
        })
        .collect();
    LaurentPoly::from_terms(vars, terms)
}

pub fn random_ratfunc(rng: &mut TestRng, vars: &VarSet) -> RatFunc {
    let num = random_laurent(rng, vars, 3, 2);
    loop {
        let den = random_laurent(rng, vars, 2, 1);
        if !den.is_zero() {
            return RatFunc::new(num, den).unwrap();
        }
    }
}

/// A homogeneous element of the given degree: a sum of words of that degree
/// with random coefficients.
pub fn random_homogeneous(rng: &mut TestRng, alg: &DGAlgebra, degree: u32, max_len: usize) -> NCElement {
    let sig = alg.signature().clone();
    let gens = alg.generators();
    let mut out = NCElement::zero(&sig);
    for _ in 0..rng.gen_range(1..=3) {
        // words: some degree-0 letters plus exactly `degree` degree-1 letters
        let len = rng.gen_range(degree as usize..=max_len.max(degree as usize));
        let mut slots: Vec<u32> = vec![0; len];
        let mut placed = 0;
        while placed < degree {
            let i = rng.gen_range(0..len);
            if slots[i] == 0 {
                slots[i] = 1;
                placed += 1;
            }
        }
        let word: Vec<usize> = slots
            .iter()
            .map(|&d| {
                let choices: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].degree == d).collect();
                choices[rng.gen_range(0..choices.len())]
            })
            .collect();
        let c = random_laurent(rng, alg.coeff_vars(), 2, 1);
        out = out.add(&NCElement::term(&sig, c, Word(word)).unwrap()).unwrap();
    }
    out
}

pub fn random_qt(rng: &mut TestRng, max_terms: usize) -> QTElement {
    let v = VarSet::quantum();
    let terms: Vec<((i64, i64), RatFunc)> = (0..rng.gen_range(0..=max_terms))
        .map(|_| {
            let key = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            (key, RatFunc::from_poly(random_laurent(rng, &v, 2, 2)))
        })
        .collect();
    QTElement::from_terms(terms)
}

/// Dense-ish random polynomial in `ring` with total degree ≤ `deg`.
pub fn random_poly(rng: &mut TestRng, ring: &Arc<PolyRing>, max_terms: usize, deg: u32) -> Poly {
    let n = ring.names.len();
    let terms: Vec<(Vec<u32>, Rational)> = (0..rng.gen_range(1..=max_terms))
        .map(|_| {
            let mut m = vec![0u32; n];
            let total = rng.gen_range(0..=deg);
            for _ in 0..total {
                m[rng.gen_range(0..n)] += 1;
            }
            (m, rat(rng.gen_range(-3..=3)))
        })
        .collect();
    Poly::from_terms(ring, terms)
}

pub mod props {
    //! Strategies and property bodies shared by the proptest suite and the
    //! fixed-seed acceptance runs.
    use super::*;
    use kch::augment::groebner;
    use proptest::prelude::*;
    use proptest::test_runner::TestCaseError;

    pub fn rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
    }

    pub fn laurent(vars: VarSet, max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
        let n = vars.len();
        prop::collection::vec((prop::collection::vec(-2i32..=2, n), rational()), 0..=max_terms)
            .prop_map(move |terms| LaurentPoly::from_terms(&vars, terms))
    }

    pub fn aug() -> impl Strategy<Value = LaurentPoly> {
        laurent(VarSet::augmentation(), 4)
    }

    pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
        (laurent(VarSet::quantum(), 3), laurent(VarSet::quantum(), 2))
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
    }

    pub fn qt() -> impl Strategy<Value = QTElement> {
        prop::collection::vec(((-2i64..=2, -2i64..=2), laurent(VarSet::quantum(), 2)), 0..=3)
            .prop_map(|terms| QTElement::from_terms(terms.into_iter().map(|(k, c)| (k, RatFunc::from_poly(c)))))
    }

    pub fn laurent_ring_axioms(a: &LaurentPoly, b: &LaurentPoly, c: &LaurentPoly) -> Result<(), TestCaseError> {
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a + &-a).is_zero());
        Ok(())
    }

    pub fn ratfunc_field_axioms(a: &RatFunc, b: &RatFunc, c: &RatFunc) -> Result<(), TestCaseError> {
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(b).unwrap() * b, a.clone());
        }
        Ok(())
    }

    /// `d(uv) = d(u)v + (-1)^|u| u d(v)` on random homogeneous trefoil
    /// elements, together with `d²u = 0`.
    pub fn leibniz(alg: &DGAlgebra, seed: u64, du: u32, dv: u32) -> Result<(), TestCaseError> {
        let mut r = super::rng(seed);
        let u = random_homogeneous(&mut r, alg, du, 3);
        let v = random_homogeneous(&mut r, alg, dv, 3);
        let lhs = alg.apply_d(&u.mul(&v).unwrap()).unwrap();
        let left = alg.apply_d(&u).unwrap().mul(&v).unwrap();
        let right = u.mul(&alg.apply_d(&v).unwrap()).unwrap();
        let rhs = if du.is_multiple_of(2) { left.add(&right) } else { left.sub(&right) }.unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(alg.apply_d(&alg.apply_d(&u).unwrap()).unwrap().is_zero());
        Ok(())
    }

    pub fn buchberger(seed: u64) -> Result<(), TestCaseError> {
        let ring = PolyRing::new(vec!["x".into(), "y".into(), "z".into()], &[1, 2]);
        let mut r = super::rng(seed);
        let gens = vec![random_poly(&mut r, &ring, 3, 2), random_poly(&mut r, &ring, 3, 2)];
        let basis = groebner(&gens, &ring);
        prop_assert!(basis.s_polys_reduce_to_zero());
        for g in &gens {
            prop_assert!(basis.contains(g));
        }
        Ok(())
    }

    pub fn qt_associative(a: &QTElement, b: &QTElement, c: &QTElement) -> Result<(), TestCaseError> {
        prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
        prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
        Ok(())
    }

    pub fn classical_homomorphism(a: &QTElement, b: &QTElement) -> Result<(), TestCaseError> {
        let (ca, cb) = (a.classical().unwrap(), b.classical().unwrap());
        prop_assert_eq!(a.mul(b).classical().unwrap(), &ca * &cb);
        prop_assert_eq!(a.add(b).classical().unwrap(), &ca + &cb);
        Ok(())
    }
}

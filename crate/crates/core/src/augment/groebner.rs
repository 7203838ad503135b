//! Buchberger's algorithm.
//!
//! Pairs are selected by the normal strategy (smallest lcm first) with the
//! sugar degree as tie-break, then by index, so the output is fully
//! determined by the input order. Buchberger's coprime and chain criteria
//! discard useless pairs. The result is the reduced basis, sorted by
//! increasing leading monomial.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::One;

use crate::ring::Rational;

use super::poly::{mono_div, mono_divides, mono_lcm, Monomial, Poly, PolyRing};

#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    polys: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        normal_form(f, &self.polys)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// `true` if every S-polynomial reduces to zero; the defining property.
    pub fn s_polys_reduce_to_zero(&self) -> bool {
        for i in 0..self.polys.len() {
            for j in i + 1..self.polys.len() {
                let s = s_poly(&self.polys[i], &self.polys[j]);
                if !normal_form(&s, &self.polys).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Full reduction of `f` by `basis` (first divisor in list order wins).
pub fn normal_form(f: &Poly, basis: &[Poly]) -> Poly {
    let ring = f.ring().clone();
    let mut rem_terms = Vec::new();
    let mut p = f.clone();
    while !p.is_zero() {
        let (m, c) = p.terms()[0].clone();
        match basis.iter().find(|g| !g.is_zero() && mono_divides(g.lm(), &m)) {
            Some(g) => {
                let q = mono_div(&m, g.lm());
                p = p.sub_scaled(&(&c / g.lc()), &q, g);
            }
            None => {
                rem_terms.push((m.clone(), c));
                p = Poly::from_terms(&ring, p.terms()[1..].iter().cloned());
            }
        }
    }
    Poly::from_terms(&ring, rem_terms)
}

pub fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let l = mono_lcm(f.lm(), g.lm());
    let a = f.scale(&f.lc().recip());
    let b = g.scale(&g.lc().recip());
    let a = Poly::zero(f.ring()).sub_scaled(&-Rational::one(), &mono_div(&l, f.lm()), &a);
    a.sub_scaled(&Rational::one(), &mono_div(&l, g.lm()), &b)
}

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

pub fn groebner(generators: &[Poly], ring: &Arc<PolyRing>) -> GroebnerBasis {
    let mut basis: Vec<Poly> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let add = |p: Poly,
               s: u32,
               basis: &mut Vec<Poly>,
               sugar: &mut Vec<u32>,
               pairs: &mut Vec<Pair>,
               pending: &mut BTreeSet<(usize, usize)>| {
        let k = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let lcm = mono_lcm(g.lm(), p.lm());
            let s_pair = (sugar[i] + deg(&mono_div(&lcm, g.lm()))).max(s + deg(&mono_div(&lcm, p.lm())));
            pairs.push(Pair {
                i,
                j: k,
                lcm,
                sugar: s_pair,
            });
            pending.insert((i, k));
        }
        basis.push(p);
        sugar.push(s);
    };

    for g in generators {
        let r = normal_form(g, &basis);
        if !r.is_zero() {
            let s = g.total_degree();
            add(r.monic(), s, &mut basis, &mut sugar, &mut pairs, &mut pending);
        }
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pairs[a], &pairs[b]);
                ring.order
                    .cmp(&pa.lcm, &pb.lcm)
                    .then(pa.sugar.cmp(&pb.sugar))
                    .then((pa.i, pa.j).cmp(&(pb.i, pb.j)))
            })
            .unwrap();
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));
        let (fi, fj) = (&basis[pair.i], &basis[pair.j]);

        if coprime(fi.lm(), fj.lm()) {
            continue;
        }
        if chain_criterion(&pair, &basis, &pending) {
            continue;
        }
        let s = s_poly(fi, fj);
        let r = normal_form(&s, &basis);
        if !r.is_zero() {
            add(r.monic(), pair.sugar, &mut basis, &mut sugar, &mut pairs, &mut pending);
        }
    }

    GroebnerBasis {
        ring: ring.clone(),
        polys: reduce_basis(basis),
    }
}

fn deg(m: &[u32]) -> u32 {
    m.iter().sum()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn chain_criterion(pair: &Pair, basis: &[Poly], pending: &BTreeSet<(usize, usize)>) -> bool {
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    (0..basis.len()).any(|k| {
        k != pair.i
            && k != pair.j
            && mono_divides(basis[k].lm(), &pair.lcm)
            && !pending.contains(&key(pair.i, k))
            && !pending.contains(&key(pair.j, k))
    })
}

/// Minimal, interreduced, monic, sorted by increasing leading monomial.
fn reduce_basis(mut basis: Vec<Poly>) -> Vec<Poly> {
    basis.retain(|p| !p.is_zero());
    let mut minimal: Vec<Poly> = Vec::new();
    for (i, p) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, q)| {
            j != i && mono_divides(q.lm(), p.lm()) && (q.lm() != p.lm() || j < i)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    let mut reduced: Vec<Poly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let head = Poly::from_terms(minimal[i].ring(), [minimal[i].terms()[0].clone()]);
        let tail = Poly::from_terms(minimal[i].ring(), minimal[i].terms()[1..].iter().cloned());
        reduced.push(head.add(&normal_form(&tail, &others)).monic());
    }
    if let Some(first) = reduced.first() {
        let ring = first.ring().clone();
        reduced.sort_by(|a, b| ring.order.cmp(a.lm(), b.lm()));
    }
    reduced
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn ring(names: &[&str], blocks: &[usize]) -> Arc<PolyRing> {
        PolyRing::new(names.iter().map(|s| s.to_string()).collect(), blocks)
    }

    #[test]
    fn containment_collapses() {
        let r = ring(&["x"], &[1]);
        let x = Poly::var(&r, 0);
        let one = Poly::from_terms(&r, [(vec![0], rat(1))]);
        let gb = groebner(&[x.mul(&x).sub(&one), x.sub(&one)], &r);
        assert_eq!(gb.polys(), &[x.sub(&one)]);
    }

    #[test]
    fn elimination_by_substitution() {
        let r = ring(&["e", "l", "m"], &[1, 2]);
        let (e, l, m) = (Poly::var(&r, 0), Poly::var(&r, 1), Poly::var(&r, 2));
        let one = Poly::from_terms(&r, [(vec![0, 0, 0], rat(1))]);
        let gb = groebner(&[e.sub(&l), e.mul(&m).sub(&one)], &r);
        assert!(gb.contains(&l.mul(&m).sub(&one)));
        assert!(gb.s_polys_reduce_to_zero());
        let eliminated: Vec<_> = gb.polys().iter().filter(|p| !p.support().contains(&0)).collect();
        assert_eq!(eliminated.len(), 1);
        assert_eq!(eliminated[0], &l.mul(&m).sub(&one));
    }

    #[test]
    fn membership_and_non_membership() {
        let r = ring(&["x", "y"], &[2]);
        let (x, y) = (Poly::var(&r, 0), Poly::var(&r, 1));
        let one = Poly::from_terms(&r, [(vec![0, 0], rat(1))]);
        let f = x.mul(&y).sub(&one);
        let gb = groebner(std::slice::from_ref(&f), &r);
        assert!(normal_form(&f, gb.polys()).is_zero());
        let gb2 = groebner(&[x.sub(&one)], &r);
        assert_eq!(normal_form(&one, gb2.polys()), one);
    }

    #[test]
    fn cyclic3_is_a_groebner_basis() {
        let r = ring(&["a", "b", "c"], &[3]);
        let (a, b, c) = (Poly::var(&r, 0), Poly::var(&r, 1), Poly::var(&r, 2));
        let one = Poly::from_terms(&r, [(vec![0, 0, 0], rat(1))]);
        let gens = [
            a.add(&b).add(&c),
            a.mul(&b).add(&b.mul(&c)).add(&c.mul(&a)),
            a.mul(&b).mul(&c).sub(&one),
        ];
        let gb = groebner(&gens, &r);
        assert!(gb.s_polys_reduce_to_zero());
        for g in &gens {
            assert!(gb.contains(g));
        }
        // reduced degrevlex basis of cyclic-3 has leading monomials a, b^2, c^3
        let lms: Vec<_> = gb.polys().iter().map(|p| p.lm().clone()).collect();
        assert_eq!(lms, vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]);
    }
}

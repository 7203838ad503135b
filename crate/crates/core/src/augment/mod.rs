//! Augmentation polynomials by elimination.
//!
//! A degree-1 chord `g` gives one equation: the commutative image of `d(g)`
//! with every degree-0 chord `c` replaced by an unknown `eps_c`. The
//! resulting Laurent system is made affine by tagging each parameter
//! `v ∈ {ex, ep, Q}` with an inverse `v_inv` and the relation `v·v_inv = 1`,
//! then the unknowns are eliminated with a block order
//! `unknowns ≻ inverse tags ≻ parameters`.

mod groebner;
mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::dga::{DGAlgebra, DgaError};
use crate::ring::{rat, LaurentPoly, Rational, RingError, VarSet, LAMBDA, MU, Q};

pub use groebner::{groebner, normal_form, s_poly, GroebnerBasis};
pub use poly::{BlockOrder, Monomial, Poly, PolyRing};

/// Prefix of the unknown standing for a degree-0 chord.
pub const UNKNOWN_PREFIX: &str = "eps_";
/// Suffix of the inverse tag of a Laurent parameter.
pub const INVERSE_SUFFIX: &str = "_inv";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AugmentError {
    #[error("generator `{0}` has degree {1}, only degree-1 generators give augmentation equations")]
    NotDegreeOne(String, u32),
    #[error("empty generator selection")]
    EmptySelection,
    #[error("algebra `{0}` fails the grading check: {1}")]
    Grading(String, String),
    #[error("unknown `{0}` occurs with a negative exponent")]
    NegativeUnknownExponent(String),
    #[error("variable `{0}` is not part of the ideal's ring")]
    ForeignVariable(String),
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Commutative augmentation equations of a set of degree-1 chords.
#[derive(Debug, Clone)]
pub struct PolySystem {
    /// Chord names whose images are unknown.
    pub chords: Vec<String>,
    /// `eps_<chord>…, ex, ep, Q`.
    pub vars: VarSet,
    /// One equation per selected generator, labelled by that generator.
    pub equations: Vec<(String, LaurentPoly)>,
}

impl PolySystem {
    pub fn unknowns(&self) -> Vec<String> {
        self.chords.iter().map(|c| unknown_name(c)).collect()
    }

    pub fn equation(&self, label: &str) -> Option<&LaurentPoly> {
        self.equations.iter().find(|(l, _)| l == label).map(|(_, p)| p)
    }
}

pub fn unknown_name(chord: &str) -> String {
    format!("{UNKNOWN_PREFIX}{chord}")
}

/// The equations `ε(d g) = 0` for the selected generators (all degree-1
/// generators when `selection` is `None`), in the order given.
pub fn augmentation_system(a: &DGAlgebra, selection: Option<&[String]>) -> Result<PolySystem, AugmentError> {
    let grading = a.check_grading();
    if !grading.passed() {
        let v = &grading.violations[0];
        return Err(AugmentError::Grading(
            a.name().to_string(),
            format!("d{} contains {} of degree {}", v.generator, v.word, v.word_degree),
        ));
    }
    let selected: Vec<String> = match selection {
        Some(s) => s.to_vec(),
        None => a
            .generators()
            .iter()
            .filter(|g| g.degree == 1)
            .map(|g| g.name.clone())
            .collect(),
    };
    if selected.is_empty() {
        return Err(AugmentError::EmptySelection);
    }
    let sig = a.signature();
    for name in &selected {
        let idx = sig.index_of(name).ok_or_else(|| DgaError::UnknownGenerator(name.clone()))?;
        let deg = sig.generators()[idx].degree;
        if deg != 1 {
            return Err(AugmentError::NotDegreeOne(name.clone(), deg));
        }
    }

    // degree-0 chords that survive in some selected image, in generator order
    let mut used = vec![false; sig.generators().len()];
    for name in &selected {
        for (w, _) in a.differential(name)?.terms() {
            if w.0.iter().all(|&i| sig.generators()[i].degree == 0) {
                for &i in &w.0 {
                    used[i] = true;
                }
            }
        }
    }
    let chords: Vec<String> = sig
        .generators()
        .iter()
        .zip(&used)
        .filter(|(_, u)| **u)
        .map(|(g, _)| g.name.clone())
        .collect();
    let vars = VarSet::new(
        chords
            .iter()
            .map(|c| unknown_name(c))
            .chain(a.coeff_vars().names().iter().cloned()),
    )?;
    let nu = chords.len();
    let slot: BTreeMap<usize, usize> = chords
        .iter()
        .enumerate()
        .map(|(k, c)| (sig.index_of(c).unwrap(), k))
        .collect();

    let mut equations = Vec::with_capacity(selected.len());
    for name in &selected {
        let mut eq = LaurentPoly::zero(&vars);
        for (w, c) in a.differential(name)?.terms() {
            if w.0.iter().any(|&i| sig.generators()[i].degree > 0) {
                continue;
            }
            let mut shift = vec![0i32; vars.len()];
            for &i in &w.0 {
                shift[slot[&i]] += 1;
            }
            let c = c.embed(&vars)?;
            eq = &eq + &c.shift(&shift);
        }
        debug_assert!(eq.vars().len() == nu + a.coeff_vars().len());
        equations.push((name.clone(), eq));
    }
    Ok(PolySystem { chords, vars, equations })
}

/// An affine ideal with unknowns, inverse tags and parameters in three blocks.
#[derive(Debug, Clone)]
pub struct PolyIdeal {
    ring: Arc<PolyRing>,
    /// Number of leading variables to eliminate.
    eliminated: usize,
    params: Vec<String>,
    generators: Vec<Poly>,
}

impl PolyIdeal {
    /// Affinizes the equations and appends the unit relations `v·v_inv - 1`.
    pub fn from_system(system: &PolySystem) -> Result<Self, AugmentError> {
        let params: Vec<String> = system.vars.names()[system.chords.len()..].to_vec();
        let mut names = system.unknowns();
        names.extend(params.iter().map(|p| format!("{p}{INVERSE_SUFFIX}")));
        names.extend(params.iter().cloned());
        let ring = PolyRing::new(names, &[system.chords.len(), params.len(), params.len()]);
        let mut ideal = PolyIdeal {
            ring,
            eliminated: system.chords.len(),
            params,
            generators: Vec::new(),
        };
        for (_, eq) in &system.equations {
            let p = ideal.affinize(eq)?;
            if !p.is_zero() {
                ideal.generators.push(p);
            }
        }
        for r in ideal.unit_relations() {
            ideal.generators.push(r);
        }
        Ok(ideal)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn unit_relations(&self) -> Vec<Poly> {
        let np = self.params.len();
        let nv = self.ring.names.len();
        (0..np)
            .map(|k| {
                let mut m = vec![0u32; nv];
                m[self.eliminated + k] = 1;
                m[self.eliminated + np + k] = 1;
                Poly::from_terms(&self.ring, [(m, Rational::one()), (vec![0; nv], -Rational::one())])
            })
            .collect()
    }

    /// Maps a Laurent polynomial (variables matched by name) into the affine
    /// ring: a negative power of a parameter becomes a power of its tag.
    pub fn affinize(&self, f: &LaurentPoly) -> Result<Poly, AugmentError> {
        let np = self.params.len();
        let nv = self.ring.names.len();
        let mut slots = Vec::with_capacity(f.vars().len());
        for name in f.vars().names() {
            let pos = self.ring.index_of(name);
            let param = self.params.iter().position(|p| p == name);
            slots.push((name.clone(), pos, param));
        }
        let mut terms = Vec::with_capacity(f.len());
        for (e, c) in f.terms() {
            let mut m = vec![0u32; nv];
            for ((name, pos, param), &k) in slots.iter().zip(e.iter()) {
                if k == 0 {
                    continue;
                }
                match (param, pos) {
                    (Some(j), _) if k < 0 => m[self.eliminated + j] += (-k) as u32,
                    (Some(j), _) => m[self.eliminated + np + j] += k as u32,
                    (None, Some(_)) if k < 0 => return Err(AugmentError::NegativeUnknownExponent(name.clone())),
                    (None, Some(i)) => m[*i] += k as u32,
                    (None, None) => return Err(AugmentError::ForeignVariable(name.clone())),
                }
            }
            terms.push((m, c.clone()));
        }
        Ok(Poly::from_terms(&self.ring, terms))
    }

    /// Inverse of [`affinize`](Self::affinize) for polynomials free of
    /// unknowns: `v_inv ↦ v^-1`, giving a Laurent polynomial in the parameters.
    pub fn to_parameters(&self, p: &Poly) -> Result<LaurentPoly, AugmentError> {
        let vars = VarSet::new(self.params.iter().cloned())?;
        let np = self.params.len();
        let mut terms = Vec::with_capacity(p.terms().len());
        for (m, c) in p.terms() {
            if let Some(i) = (0..self.eliminated).find(|&i| m[i] > 0) {
                return Err(RingError::VariableInUse(self.ring.names[i].clone()).into());
            }
            let e: Vec<i32> = (0..np)
                .map(|k| m[self.eliminated + np + k] as i32 - m[self.eliminated + k] as i32)
                .collect();
            terms.push((e, c.clone()));
        }
        Ok(LaurentPoly::from_terms(&vars, terms))
    }

    pub fn groebner(&self) -> GroebnerBasis {
        groebner(&self.generators, &self.ring)
    }

    /// Basis elements free of the unknowns, as normalized Laurent
    /// polynomials in the parameters. Elements that collapse to a unit (the
    /// unit relations themselves) are dropped; duplicates are merged.
    pub fn eliminate(&self) -> Result<Elimination, AugmentError> {
        let basis = self.groebner();
        let mut polys: Vec<AugPolynomial> = Vec::new();
        for p in basis.polys() {
            if p.support().iter().any(|&i| i < self.eliminated) {
                continue;
            }
            let l = self.to_parameters(p)?;
            if l.is_zero() || l.as_monomial().is_some() {
                continue;
            }
            let a = AugPolynomial::normalize(&l)?;
            if !polys.iter().any(|q| q.poly == a.poly) {
                polys.push(a);
            }
        }
        Ok(Elimination { basis, polys })
    }

    /// Saturation by the product of the given variables via the
    /// Rabinowitsch trick: adjoin `t` with `t·f - 1`, eliminate `t`.
    pub fn saturate(&self, by: &[&str]) -> Result<PolyIdeal, AugmentError> {
        let mut names = vec!["sat_t".to_string()];
        names.extend(self.ring.names.iter().cloned());
        let np = self.params.len();
        let ext = PolyRing::new(names, &[1, self.eliminated, np, np]);
        let lift = |p: &Poly| {
            Poly::from_terms(
                &ext,
                p.terms().iter().map(|(m, c)| {
                    let mut e = vec![0];
                    e.extend(m);
                    (e, c.clone())
                }),
            )
        };
        let mut f = Poly::from_terms(&ext, [(vec![0; ext.names.len()], Rational::one())]);
        for name in by {
            let i = ext
                .index_of(name)
                .ok_or_else(|| AugmentError::ForeignVariable(name.to_string()))?;
            f = f.mul(&Poly::var(&ext, i));
        }
        let t = Poly::var(&ext, 0);
        let one = Poly::from_terms(&ext, [(vec![0; ext.names.len()], Rational::one())]);
        let mut gens: Vec<Poly> = self.generators.iter().map(lift).collect();
        gens.push(t.mul(&f).sub(&one));
        let gb = groebner(&gens, &ext);
        let generators = gb
            .polys()
            .iter()
            .filter(|p| p.terms().iter().all(|(m, _)| m[0] == 0))
            .map(|p| Poly::from_terms(&self.ring, p.terms().iter().map(|(m, c)| (m[1..].to_vec(), c.clone()))))
            .collect();
        Ok(PolyIdeal {
            ring: self.ring.clone(),
            eliminated: self.eliminated,
            params: self.params.clone(),
            generators,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Elimination {
    pub basis: GroebnerBasis,
    pub polys: Vec<AugPolynomial>,
}

/// A Laurent polynomial in `(ex, ep, Q)` normalized up to units, together
/// with the unit that was applied: `poly = scale · x^shift · original`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugPolynomial {
    pub poly: LaurentPoly,
    pub scale: Rational,
    pub shift: Vec<i32>,
}

impl AugPolynomial {
    /// Integer-primitive, minimal exponents 0, positive leading coefficient.
    pub fn normalize(f: &LaurentPoly) -> Result<Self, AugmentError> {
        if f.is_zero() {
            return Ok(AugPolynomial {
                poly: f.clone(),
                scale: Rational::one(),
                shift: vec![0; f.vars().len()],
            });
        }
        let (k, p) = f.primitive_part();
        let shift: Vec<i32> = p.min_exponents().iter().map(|e| -e).collect();
        Ok(AugPolynomial {
            poly: p.shift(&shift),
            scale: k.recip(),
            shift,
        })
    }

    /// `true` if both sides agree up to a unit `±c·monomial`.
    pub fn equal_up_to_unit(a: &LaurentPoly, b: &LaurentPoly) -> Result<bool, AugmentError> {
        Ok(Self::normalize(a)?.poly == Self::normalize(b)?.poly)
    }

    /// Renders the certificate as `scale*monomial`, e.g. `-1*ex^-1`.
    pub fn certificate(&self) -> String {
        let unit = LaurentPoly::monomial(self.poly.vars(), self.shift.clone(), self.scale.clone());
        unit.to_string()
    }
}

impl fmt::Display for AugPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

fn params() -> (VarSet, LaurentPoly, LaurentPoly, LaurentPoly) {
    let v = VarSet::augmentation();
    let l = LaurentPoly::var(&v, LAMBDA).unwrap();
    let m = LaurentPoly::var(&v, MU).unwrap();
    let q = LaurentPoly::var(&v, Q).unwrap();
    (v, l, m, q)
}

/// The unknot polynomial as displayed with the examples: `1 - ex - ep + Q*ex*ep`.
pub fn displayed_aug_unknot() -> LaurentPoly {
    let (v, l, m, q) = params();
    let one = LaurentPoly::one(&v);
    &(&(&one - &l) - &m) + &(&(&q * &l) * &m)
}

/// The expanded trefoil polynomial as displayed:
/// `ex^2(ep^4 - ep^3) + ex(ep^4 - ep^3 Q + 2ep^2(Q^2 - Q) - ep Q^2 + Q^2) - (ep Q^3 - Q^4)`.
pub fn displayed_aug_trefoil() -> LaurentPoly {
    let (_, l, m, q) = params();
    let l2 = l.pow(2);
    let q2 = q.pow(2);
    let first = &l2 * &(&m.pow(4) - &m.pow(3));
    let inner = &(&(&(&m.pow(4) - &(&m.pow(3) * &q)) + &(&m.pow(2) * &(&q2 - &q)).scale(&rat(2)))
        - &(&m * &q2))
        + &q2;
    let last = &(&m * &q.pow(3)) - &q.pow(4);
    &(&first + &(&l * &inner)) - &last
}

/// How a computed polynomial relates to a displayed one.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub computed: AugPolynomial,
    pub displayed: AugPolynomial,
    /// `computed - displayed` after normalizing both.
    pub difference: LaurentPoly,
    /// Sign changes `v ↦ -v` of parameters under which the normalized
    /// polynomials agree, e.g. `["Q -> -Q"]`; `["identity"]` if equal.
    pub matches_under: Vec<String>,
}

impl Comparison {
    pub fn equal(&self) -> bool {
        self.difference.is_zero()
    }
}

pub fn compare(computed: &LaurentPoly, displayed: &LaurentPoly) -> Result<Comparison, AugmentError> {
    let c = AugPolynomial::normalize(computed)?;
    let d = AugPolynomial::normalize(&displayed.embed(computed.vars())?)?;
    let difference = &c.poly - &d.poly;
    let names = computed.vars().names().to_vec();
    let mut matches_under = Vec::new();
    for mask in 0u32..(1 << names.len()) {
        let mut f = c.poly.clone();
        let mut label = Vec::new();
        for (i, n) in names.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let img = LaurentPoly::var(computed.vars(), n)?.scale(&rat(-1));
                f = f.substitute(n, &img)?;
                label.push(format!("{n} -> -{n}"));
            }
        }
        if AugPolynomial::normalize(&f)?.poly == d.poly {
            matches_under.push(if label.is_empty() {
                "identity".to_string()
            } else {
                label.join(", ")
            });
        }
    }
    Ok(Comparison {
        computed: c,
        displayed: d,
        difference,
        matches_under,
    })
}

/// The displayed combination
/// `(λμ² + Q²) a12 (μ dc21 - Q dc22) - (λμ² + Q²)(Q dc21 + λμ dc22)
///  + λ(μ² - Q)(μ dc21 - Q dc22) + λ(μ² - Q)(λμ² + Q²) db12`
/// over the variables of `dc21` (which must contain `eps_a12`).
pub fn trefoil_combination(
    dc21: &LaurentPoly,
    dc22: &LaurentPoly,
    db12: &LaurentPoly,
) -> Result<LaurentPoly, AugmentError> {
    let v = dc21.vars().clone();
    let var = |n: &str| LaurentPoly::var(&v, n);
    let (l, m, q) = (var(LAMBDA)?, var(MU)?, var(Q)?);
    let a12 = var(&unknown_name("a12"))?;
    let (dc22, db12) = (dc22.embed(&v)?, db12.embed(&v)?);
    let lm2q2 = &(&l * &m.pow(2)) + &q.pow(2);
    let m2_q = &m.pow(2) - &q;
    let mix = &(&m * dc21) - &(&q * &dc22);
    let t1 = &(&lm2q2 * &a12) * &mix;
    let t2 = &lm2q2 * &(&(&q * dc21) + &(&(&l * &m) * &dc22));
    let t3 = &(&l * &m2_q) * &mix;
    let t4 = &(&(&l * &m2_q) * &lm2q2) * &db12;
    Ok(&(&(&t1 - &t2) + &t3) + &t4)
}

#[derive(Debug, Clone)]
pub struct CombinationReport {
    pub combination: LaurentPoly,
    pub expansion: LaurentPoly,
    /// `combination - expansion`.
    pub difference: LaurentPoly,
}

impl CombinationReport {
    pub fn passed(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Expands the displayed trefoil combination from the fixture's `dc21`,
/// `dc22`, `db12` and subtracts the displayed expansion of `Aug_T`.
pub fn verify_trefoil_combination(trefoil: &DGAlgebra) -> Result<CombinationReport, AugmentError> {
    verify_combination_with(trefoil, ["c21", "c22", "b12"])
}

/// As [`verify_trefoil_combination`] with the three equations taken from
/// the named generators, in the roles `dc21`, `dc22`, `db12`.
pub fn verify_combination_with(trefoil: &DGAlgebra, roles: [&str; 3]) -> Result<CombinationReport, AugmentError> {
    let selection: Vec<String> = roles.iter().map(|s| s.to_string()).collect();
    let sys = augmentation_system(trefoil, Some(&selection))?;
    let eq = |k: usize| sys.equations[k].1.clone();
    let combination = trefoil_combination(&eq(0), &eq(1), &eq(2))?;
    let expansion = displayed_aug_trefoil().embed(&sys.vars)?;
    let difference = &combination - &expansion;
    Ok(CombinationReport {
        combination,
        expansion,
        difference,
    })
}

/// Normal form of a Laurent polynomial against an ideal's Gröbner basis.
pub fn reduce(ideal: &PolyIdeal, basis: &GroebnerBasis, f: &LaurentPoly) -> Result<Poly, AugmentError> {
    Ok(basis.normal_form(&ideal.affinize(f)?))
}

//! Wavefunctions `Ψ = Σ_{m≥0} H_m e^{mx}` and q-holonomic recursions.
//!
//! `e^{p̂}` acts as the shift `e^{g_s ∂/∂x}`, so `e^{a x̂} e^{b p̂}` sends the
//! mode `H_j e^{jx}` to `q^{bj} H_j e^{(j+a)x}`. The coefficient of
//! `e^{kx}` in `A Ψ` is therefore `Σ t_{a,b} q^{b(k-a)} H_{k-a}`.
//!
//! Wavefunctions are supported on `m ≥ 0` and normalized by `H_0 = 1`.

use std::fmt;

use thiserror::Error;

use crate::qtorus::{s_pow, QTElement};
use crate::ring::{RatFunc, RingError, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HolonomicError {
    #[error("operator has a single e^x power; no recursion in the mode index")]
    NoRecursion,
    #[error("inconsistent recursion at mode {mode}: residual {residual}")]
    Inconsistent { mode: i64, residual: String },
    #[error("recursion leaves H_{index} undetermined at mode {mode}")]
    Underdetermined { mode: i64, index: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// `H_0, …, H_M`; modes outside this range are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct Wavefunction {
    coeffs: Vec<RatFunc>,
}

impl Wavefunction {
    pub fn new(coeffs: Vec<RatFunc>) -> Self {
        let vars = VarSet::quantum();
        let coeffs = coeffs
            .into_iter()
            .map(|c| {
                if c.vars() == &vars {
                    c
                } else {
                    c.embed(&vars).expect("wavefunction coefficients live in (s, Q)")
                }
            })
            .collect();
        Wavefunction { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    /// `H_m`, zero outside `0..=M`.
    pub fn get(&self, m: i64) -> RatFunc {
        if m < 0 {
            return RatFunc::zero(&VarSet::quantum());
        }
        self.coeffs
            .get(m as usize)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(&VarSet::quantum()))
    }

    /// `M`, or `None` for the empty wavefunction.
    pub fn max_mode(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_normalized(&self) -> bool {
        self.coeffs.first().is_some_and(RatFunc::is_unit_constant)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Wavefunction::new((0..n as i64).map(|m| &self.get(m) + &other.get(m)).collect())
    }

    pub fn scale(&self, k: &RatFunc) -> Self {
        Wavefunction::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

impl fmt::Debug for Wavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter().map(|c| c.to_string())).finish()
    }
}

/// Coefficients of `e^{kx}` in `A Ψ` for `k = 0..=k_max`.
pub fn act(a: &QTElement, psi: &Wavefunction, k_max: usize) -> Vec<RatFunc> {
    (0..=k_max as i64).map(|k| act_mode(a, psi, k)).collect()
}

fn act_mode(a: &QTElement, psi: &Wavefunction, k: i64) -> RatFunc {
    let mut acc = RatFunc::zero(&VarSet::quantum());
    for (&(ai, b), t) in a.terms() {
        let h = psi.get(k - ai);
        if h.is_zero() {
            continue;
        }
        acc = &acc + &(&(t * &s_pow(2 * b * (k - ai))) * &h);
    }
    acc
}

/// Modes `a_max..=M + a_min` at which `A Ψ = 0` is imposed and fully
/// determined by `H_0..H_M`. Lower modes are boundary modes.
pub fn checkable_modes(a: &QTElement, psi: &Wavefunction) -> Option<std::ops::RangeInclusive<usize>> {
    let (lo, hi) = a.x_range()?;
    let m = psi.max_mode()? as i64;
    let (start, end) = (hi.max(0), m + lo);
    (end >= start).then_some(start as usize..=end as usize)
}

/// `c_a(k) = Σ_b t_{a,b} q^{b(k-a)}`: the factor multiplying `H_{k-a}` at mode `k`.
fn mode_coefficient(a: &QTElement, ai: i64, k: i64) -> RatFunc {
    let mut acc = RatFunc::zero(&VarSet::quantum());
    for (&(x, b), t) in a.terms() {
        if x == ai {
            acc = &acc + &(t * &s_pow(2 * b * (k - ai)));
        }
    }
    acc
}

/// Solves `A Ψ = 0` for `H_1..H_M` from the seed `H_0 = 1`.
pub fn solve_recursion(a: &QTElement, max_mode: usize) -> Result<Wavefunction, HolonomicError> {
    solve_recursion_seeded(a, &[RatFunc::one(&VarSet::quantum())], max_mode)
}

/// Solves `A Ψ = 0` from the initial values `seeds = H_0, H_1, …`.
///
/// With `a_min < a_max` the `e^x` range of `A`, the equation at mode `k`
/// for `k = a_max, a_max + 1, …` is solved for its highest unknown
/// `H_{k - a_min}`, whose coefficient is `c_{a_min}(k)`. Modes below `a_max`
/// are boundary modes and are not imposed. An order-`d` recursion
/// (`d = a_max - a_min`) needs `d` seeds; fewer is reported as
/// underdetermined. Where the coefficient vanishes the equation must hold
/// by itself: a nonzero remainder is an inconsistency, a zero one leaves the
/// unknown undetermined.
pub fn solve_recursion_seeded(
    a: &QTElement,
    seeds: &[RatFunc],
    max_mode: usize,
) -> Result<Wavefunction, HolonomicError> {
    let (lo, hi) = a.x_range().ok_or(HolonomicError::NoRecursion)?;
    if lo == hi {
        return Err(HolonomicError::NoRecursion);
    }
    let vars = VarSet::quantum();
    let mut psi = Wavefunction::new(seeds.to_vec());
    for k in hi.. {
        let j = (k - lo) as usize;
        if j > max_mode {
            break;
        }
        if j < psi.coeffs.len() {
            // seeded unknown: the equation is a constraint on the seeds
            let residual = act_mode(a, &psi, k);
            if !residual.is_zero() {
                return Err(HolonomicError::Inconsistent {
                    mode: k,
                    residual: residual.to_string(),
                });
            }
            continue;
        }
        if j > psi.coeffs.len() {
            return Err(HolonomicError::Underdetermined {
                mode: k,
                index: psi.coeffs.len(),
            });
        }
        let lead = mode_coefficient(a, lo, k);
        let mut rest = RatFunc::zero(&vars);
        for ai in lo + 1..=hi {
            let h = psi.get(k - ai);
            if !h.is_zero() {
                rest = &rest + &(&mode_coefficient(a, ai, k) * &h);
            }
        }
        if lead.is_zero() {
            return Err(if rest.is_zero() {
                HolonomicError::Underdetermined { mode: k, index: j }
            } else {
                HolonomicError::Inconsistent {
                    mode: k,
                    residual: rest.to_string(),
                }
            });
        }
        psi.coeffs.push((-&rest).checked_div(&lead)?);
    }
    Ok(psi)
}

/// `H_m ↦ q^{r m²} H_m`.
pub fn frame_wavefunction(psi: &Wavefunction, r: i64) -> Wavefunction {
    Wavefunction::new(
        psi.coeffs
            .iter()
            .enumerate()
            .map(|(m, h)| {
                let m = m as i64;
                h * &s_pow(2 * r * m * m)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::{aug_hat_trefoil, aug_hat_unknot};

    fn vars() -> VarSet {
        VarSet::quantum()
    }

    fn ones(m: usize) -> Wavefunction {
        Wavefunction::new(vec![RatFunc::one(&vars()); m + 1])
    }

    #[test]
    fn shift_acts_by_q_power() {
        let out = act(&QTElement::ep(), &ones(5), 5);
        for (k, c) in out.iter().enumerate() {
            assert_eq!(c, &s_pow(2 * k as i64));
        }
    }

    #[test]
    fn identity_operator() {
        let psi = solve_recursion(&aug_hat_unknot(), 3).unwrap();
        assert_eq!(act(&QTElement::one(), &psi, 3), psi.coeffs());
    }

    #[test]
    fn geometric_series() {
        let a = QTElement::one().sub(&QTElement::ex());
        let psi = solve_recursion(&a, 6).unwrap();
        assert_eq!(psi, ones(6));
    }

    #[test]
    fn unknot_first_mode_by_hand() {
        // mode 1: H_1 (1 - q) - H_0 (1 + Q) = 0
        let psi = solve_recursion(&aug_hat_unknot(), 1).unwrap();
        assert_eq!(psi.get(1).to_string(), "(1 + Q)/(1 - s^2)");
        let zero = act(&aug_hat_unknot(), &psi, 1);
        assert!(zero.iter().all(RatFunc::is_zero));
    }

    #[test]
    fn trefoil_needs_a_second_seed() {
        let err = solve_recursion(&aug_hat_trefoil(), 3).unwrap_err();
        assert_eq!(err, HolonomicError::Underdetermined { mode: 2, index: 1 });
    }

    #[test]
    fn vanishing_lead_coefficient() {
        // L = (1 - Ep)(1 - s^-2 Ep) has c_0(k) = (1 - q^k)(1 - q^{k-1}),
        // zero at k = 0 and k = 1
        let p = QTElement::ep();
        let lead = QTElement::one().sub(&p).mul(&QTElement::one().sub(&QTElement::monomial(0, 1, s_pow(-2))));
        assert!(matches!(solve_recursion(&lead, 2), Err(HolonomicError::NoRecursion)));
        // c_1(k) = -(1 - q^{k-1}) also vanishes at k = 1
        let a = lead.sub(&QTElement::ex()).add(&QTElement::ex().mul(&p));
        assert_eq!(
            solve_recursion(&a, 2).unwrap_err(),
            HolonomicError::Underdetermined { mode: 1, index: 1 }
        );
        let b = lead.sub(&QTElement::ex());
        assert!(matches!(
            solve_recursion(&b, 2),
            Err(HolonomicError::Inconsistent { mode: 1, .. })
        ));
    }

    #[test]
    fn seeded_constraints_are_checked() {
        // 1 - Ex has order 1; a second seed H_1 = 2 contradicts mode 1
        let a = QTElement::one().sub(&QTElement::ex());
        let v = vars();
        let seeds = [RatFunc::one(&v), RatFunc::constant(&v, crate::ring::rat(2))];
        assert!(matches!(
            solve_recursion_seeded(&a, &seeds, 3),
            Err(HolonomicError::Inconsistent { mode: 1, .. })
        ));
        let psi = solve_recursion(&a, 4).unwrap();
        assert_eq!(checkable_modes(&a, &psi), Some(1..=4));
    }

    #[test]
    fn framing_roundtrip_and_values() {
        let psi = solve_recursion(&aug_hat_unknot(), 3).unwrap();
        assert_eq!(frame_wavefunction(&psi, 0), psi);
        let f = frame_wavefunction(&psi, 1);
        assert_eq!(f.get(1), &psi.get(1) * &s_pow(2));
        assert_eq!(f.get(2), &psi.get(2) * &s_pow(8));
        assert_eq!(frame_wavefunction(&f, -1), psi);
    }
}

mod common;

use common::{durand_kerner, random_nonzero_rational, rng, trefoil_common_root, unknot_colored, unknot_mu};
use kch::augment::{augmentation_system, displayed_aug_trefoil, AugPolynomial, PolyIdeal};
use kch::dga::builtin_fixture;
use kch::diskpot::{check_gradient, disk_potential, trace_branch, TraceConfig};
use kch::holonomic::{act, checkable_modes, frame_wavefunction, solve_recursion};
use kch::qtorus::aug_hat_unknot;
use kch::ring::{rat, LaurentPoly, Rational, VarSet};
use num_complex::Complex64;

fn eval_exact(p: &LaurentPoly, point: &[(&str, Rational)]) -> Rational {
    p.eval_exact(point).unwrap()
}

#[test]
fn unknot_recursion_matches_product_formula() {
    let psi = solve_recursion(&aug_hat_unknot(), 10).unwrap();
    for m in 0..=10 {
        assert_eq!(psi.get(m), unknot_colored(m as usize), "H_{m}");
    }
}

#[test]
fn framed_unknot_matches_framed_product() {
    let psi = solve_recursion(&aug_hat_unknot(), 6).unwrap();
    let framed = frame_wavefunction(&psi, 2);
    let a = aug_hat_unknot().frame(2);
    let out = act(&a, &framed, 6);
    let range = checkable_modes(&a, &framed).unwrap();
    assert!(range.clone().all(|k| out[k].is_zero()));
    let s4 = kch::qtorus::s_pow(4);
    assert_eq!(framed.get(1), &unknot_colored(1) * &s4);
}

/// Solving `dc21 = dc22 = db12 = 0` by hand gives rational points on the
/// three-equation variety; the eliminated polynomial must vanish on them.
#[test]
fn subset_elimination_vanishes_on_exact_common_roots() {
    let t = builtin_fixture("trefoil").unwrap();
    let sel: Vec<String> = ["c21", "c22", "b12"].iter().map(|s| s.to_string()).collect();
    let sys = augmentation_system(&t, Some(&sel)).unwrap();
    let elim = PolyIdeal::from_system(&sys).unwrap().eliminate().unwrap();
    assert_eq!(elim.polys.len(), 1);
    let p = elim.polys[0].poly.clone();
    let mut r = rng(7);
    let mut checked = 0;
    while checked < 20 {
        let (l, a12) = (random_nonzero_rational(&mut r, 6), random_nonzero_rational(&mut r, 6));
        let Some([l, mu, q, a12, a21]) = trefoil_common_root(&l, &a12) else {
            continue;
        };
        if mu == rat(0) || q == rat(0) {
            continue;
        }
        // the point really solves the three equations
        let full = [
            ("eps_a12", a12.clone()),
            ("eps_a21", a21.clone()),
            ("ex", l.clone()),
            ("ep", mu.clone()),
            ("Q", q.clone()),
        ];
        for (label, eq) in &sys.equations {
            assert_eq!(eval_exact(eq, &full), rat(0), "{label}");
        }
        let at = [("ex", l), ("ep", mu), ("Q", q)];
        assert_eq!(eval_exact(&p, &at), rat(0));
        checked += 1;
    }
}

#[test]
fn unknot_trace_matches_closed_form() {
    let v = VarSet::augmentation();
    let aug = kch::parse::parse_polynomial("1 - ex - ep - Q*ex*ep", &v).unwrap();
    let q = 2.0;
    let seed = Complex64::new(unknot_mu((-3.0f64).exp(), q), 0.0);
    let path = trace_branch(&aug, Complex64::new(q, 0.0), -3.0, seed, -0.5, 400, &TraceConfig::default()).unwrap();
    for s in &path.samples {
        assert!((s.mu.re - unknot_mu(s.lambda, q)).abs() < 1e-10);
        assert!(s.mu.im.abs() < 1e-12);
    }
    let table = disk_potential(&path).unwrap();
    assert!(check_gradient(&path, &table).unwrap().max_deviation < 1e-6);
}

#[test]
fn forward_then_backward_returns_to_seed() {
    let v = VarSet::augmentation();
    let aug = kch::parse::parse_polynomial("1 - ex - ep - Q*ex*ep", &v).unwrap();
    let q = Complex64::new(2.0, 0.0);
    let seed = Complex64::new(unknot_mu((-3.0f64).exp(), 2.0), 0.0);
    let cfg = TraceConfig::default();
    let fwd = trace_branch(&aug, q, -3.0, seed, -0.5, 200, &cfg).unwrap();
    let end = fwd.samples.last().unwrap().mu;
    let back = trace_branch(&aug, q, -0.5, end, -3.0, 200, &cfg).unwrap();
    assert!((back.samples.last().unwrap().mu - seed).norm() < 1e-9);
}

/// Coefficients in `μ` of `Aug(λ, μ, Q)` for fixed numbers `λ`, `Q`.
fn univariate_in_mu(aug: &LaurentPoly, lambda: f64, q: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); 8];
    for (e, c) in aug.terms() {
        let c: f64 = num_traits::ToPrimitive::to_f64(c).unwrap();
        out[e[1] as usize] += c * lambda.powi(e[0]) * q.powi(e[2]);
    }
    while out.last().is_some_and(|c| c.norm() == 0.0) {
        out.pop();
    }
    out
}

#[test]
fn trefoil_trace_at_q_one_from_root_finder_seed() {
    let aug = AugPolynomial::normalize(&displayed_aug_trefoil()).unwrap().poly;
    let x0 = -2.0f64;
    let coeffs = univariate_in_mu(&aug, x0.exp(), 1.0);
    let roots = durand_kerner(&coeffs);
    assert_eq!(roots.len(), coeffs.len() - 1);
    let cfg = TraceConfig::default();
    let mut traced = 0;
    for mu in roots {
        // skip roots too close to another root or to zero
        if mu.norm() < 1e-3 {
            continue;
        }
        let Ok(path) = trace_branch(&aug, Complex64::new(1.0, 0.0), x0, mu, x0 + 0.2, 20, &cfg) else {
            continue;
        };
        assert!(path.samples.iter().all(|s| s.residual < 1e-10));
        traced += 1;
    }
    assert!(traced >= 1);
}

use clawforge_core::calculus::{reduce_mod_system, total_derivative};
use clawforge_core::corpus::lookup;
use clawforge_core::lawgen::*;
use clawforge_core::model::Model;
use clawforge_core::Expr;
use num_traits::Zero;

fn law(m: &Model, label: &str) -> Vec<Expr> {
    m.laws
        .iter()
        .find(|l| l.label == label)
        .unwrap()
        .components
        .clone()
}

fn p(m: &Model, s: &str) -> Expr {
    Expr::parse(s, m.ctx()).unwrap()
}

#[test]
fn noether_identity_on_grid() {
    for name in ["kdv", "sp"] {
        let m = lookup(name).unwrap();
        for psi in ["1", "u", "x + t*u"] {
            let l = formal_lagrangian(&m.system, &[p(m, psi)]).unwrap();
            for g in &m.generators {
                let r = noether_identity_residual(&l, g).unwrap();
                assert!(r.is_zero(), "{name} {psi} {}", g.label);
            }
        }
    }
}

#[test]
fn dropping_xi_l_changes_only_by_vanishing_terms() {
    let m = lookup("kdv").unwrap();
    let l = formal_lagrangian(&m.system, &[p(m, "u")]).unwrap();
    for g in &m.generators {
        let with = ibragimov_vector(&l, g, true).unwrap();
        let without = ibragimov_vector(&l, g, false).unwrap();
        for (a, b) in with.iter().zip(&without) {
            assert!(reduce_mod_system(&a.sub(b), &m.system).unwrap().is_zero());
        }
    }
}

#[test]
fn self_adjointness() {
    let kdv = lookup("kdv").unwrap();
    for psi in ["1", "u", "x + t*u"] {
        let r = self_adjointness_check(&kdv.system, &[p(kdv, psi)]).unwrap();
        assert!(r.iter().all(Expr::is_zero), "{psi}");
    }
    let r = self_adjointness_check(&kdv.system, &[p(kdv, "u^2")]).unwrap();
    assert!(!r[0].is_zero());
    let fw = lookup("fw").unwrap();
    let r = self_adjointness_check(&fw.system, &[Expr::one()]).unwrap();
    assert!(r[0].is_zero());
}

#[test]
fn kdv_multipliers_span_in_any_basis_order() {
    let m = lookup("kdv").unwrap();
    let vars = jet_variables(2, 1, 0);
    let mut basis = monomials(&vars, 2);
    basis.reverse();
    let a = Ansatz::from_basis("_w", basis).unwrap();
    let (_, space, sets) = multipliers(&m.system, &[a]).unwrap();
    assert_eq!(space.dim(), 3);
    let found: Vec<Vec<Expr>> = sets.into_iter().map(|s| s.v).collect();
    assert!(expr_span_equal(&found, &m.multipliers).unwrap());
}

fn run_default(m: &Model, gen: &str) -> MixedResult {
    let cfg = m.ansatz.clone().unwrap();
    let s = &m.system;
    let g = m.resolve_generator(gen).unwrap();
    let opts = MixedOptions {
        theta: Some(cfg.theta(s)),
        ..MixedOptions::default()
    };
    mixed_method(s, &g, &cfg.psi(s), &cfg.h(s), &opts).unwrap()
}

#[test]
fn kdv_translation_gives_mass_law() {
    let m = lookup("kdv").unwrap();
    let r = run_default(m, "X4");
    assert_eq!(r.laws.len(), 1);
    let theta = m.ansatz.as_ref().unwrap().theta(&m.system);
    let found = &r.laws[0];
    assert!(verify(&m.system, &found.components).unwrap().is_zero());
    let ratio = equivalence_ratio(
        &m.system,
        &found.components,
        &law(m, "mixed-galilei"),
        &theta,
    )
    .unwrap()
    .unwrap();
    assert!(!ratio.is_zero());
    assert_eq!(found.components[0], p(m, "u"));
}

#[test]
fn fw_time_translation_law() {
    let m = lookup("fw").unwrap();
    let r = run_default(m, "X1");
    assert_eq!(r.laws.len(), 1);
    let theta = m.ansatz.as_ref().unwrap().theta(&m.system);
    let found = &r.laws[0].components;
    let ratio = equivalence_ratio(&m.system, found, &law(m, "psi-t"), &theta)
        .unwrap()
        .unwrap();
    assert!(!ratio.is_zero());
    // The psi = t law is the mass law up to trivial terms.
    let ratio = equivalence_ratio(&m.system, found, &law(m, "mass"), &theta)
        .unwrap()
        .unwrap();
    assert!(!ratio.is_zero());
}

#[test]
fn fw_psi_x_completion_is_trivial() {
    let m = lookup("fw").unwrap();
    let s = &m.system;
    let cfg = m.ansatz.clone().unwrap();
    let g = m.generator("X1").unwrap();
    let r = mixed_method(
        s,
        g,
        &[Ansatz::fixed(p(m, "x"))],
        &cfg.h(s),
        &MixedOptions::default(),
    )
    .unwrap();
    assert!(r.consistent);
    assert!(r.laws.is_empty());
}

#[test]
fn sp_scaling_gives_quartic_law() {
    let m = lookup("sp").unwrap();
    let r = run_default(m, "X3");
    assert_eq!(r.laws.len(), 1);
    assert!(r.laws[0].h_is_zero());
    // The stripped form keeps terms with explicit t and x of jet degree up
    // to seven; a graded potential reaches them cheaply.
    let theta = graded_theta(&m.system, 1, 6);
    let ratio = equivalence_ratio(&m.system, &r.laws[0].components, &law(m, "quartic"), &theta)
        .unwrap()
        .unwrap();
    assert!(!ratio.is_zero());
}

#[test]
fn zero_ansatz_gives_nothing() {
    let m = lookup("kdv").unwrap();
    let g = m.generator("X2").unwrap();
    let r = mixed_method(
        &m.system,
        g,
        &[Ansatz::zero()],
        &[Ansatz::zero(), Ansatz::zero()],
        &MixedOptions::default(),
    )
    .unwrap();
    assert!(r.laws.is_empty());
    assert_eq!(r.solution.dim(), 0);
}

#[test]
fn constructed_trivial_laws_are_flagged() {
    let m = lookup("kdv").unwrap();
    let s = &m.system;
    let theta = default_theta(s, 3);
    let f = s.residuals()[0].clone();
    let potentials = [
        "u", "u^2", "t*u[x]", "x*u*u[x]", "u[x,x]", "t*x*u", "u^3", "x^2*u[x]", "u*u[x,x]", "t^2",
    ];
    for th in potentials {
        let [a, b] = curl(&p(m, th));
        assert!(
            is_trivial(s, &[a, b], &theta).unwrap().is_trivial(),
            "curl of {th}"
        );
    }
    let factors = ["1", "u", "x", "t*u[x]", "u[x,x]"];
    for c in factors {
        let v = f.mul(&p(m, c));
        let t = [v.clone(), v.mul(&p(m, "x"))];
        assert_eq!(
            is_trivial(s, &t, &theta).unwrap(),
            Triviality::Vanishing,
            "{c} * F"
        );
    }
    for (th, c) in [
        ("u*u[x]", "u"),
        ("x*u", "t"),
        ("u[x]^2", "1"),
        ("t*u", "u[x]"),
        ("u^2*x", "x^2"),
    ] {
        let [a, b] = curl(&p(m, th));
        let v = f.mul(&p(m, c));
        let t = [a.add(&v), b.sub(&total_derivative(&v, 0))];
        assert!(
            is_trivial(s, &t, &theta).unwrap().is_trivial(),
            "curl {th} + {c} F"
        );
    }
    assert!(!is_trivial(s, &law(m, "mass"), &theta).unwrap().is_trivial());
}

#[test]
fn stripping_keeps_the_law_conserved() {
    let m = lookup("kdv").unwrap();
    let theta = default_theta(&m.system, 3);
    let mass = law(m, "mass");
    let [a, b] = curl(&p(m, "x*u^2 + u[x]"));
    let padded = [mass[0].add(&a), mass[1].add(&b)];
    let (stripped, witness) = strip_trivial(&m.system, &padded, &theta).unwrap();
    assert!(verify(&m.system, &stripped).unwrap().is_zero());
    assert!(!witness.is_zero());
    let total = |t: &[Expr]| t.iter().map(Expr::len).sum::<usize>();
    assert!(total(&stripped) < total(&padded));
}

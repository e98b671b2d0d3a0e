use clawforge_core::calculus::{
    divergence, euler, symmetry_residual, total_derivative, Generator, Reducer,
};
use clawforge_core::corpus::lookup;
use clawforge_core::linsolve::{nullspace, span_equal, RationalMatrix};
use clawforge_core::{Atom, Expr, JetCoord, MultiIndex};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

/// Atoms of jet order <= 3 over `(t, x)` with one dependent variable.
fn atoms() -> Vec<Expr> {
    let mut out = vec![Expr::indep(0), Expr::indep(1)];
    for order in 0..=3usize {
        for k in 0..=order {
            let idx: Vec<usize> = std::iter::repeat_n(0, k)
                .chain(std::iter::repeat_n(1, order - k))
                .collect();
            out.push(Expr::atom(Atom::Jet(JetCoord::new(
                0,
                MultiIndex::new(idx),
            ))));
        }
    }
    out
}

fn monomial() -> impl Strategy<Value = Expr> {
    let n = atoms().len();
    prop::collection::vec((0..n, 1i64..=2), 0..=3).prop_map(|fs| {
        let atoms = atoms();
        fs.into_iter().fold(Expr::one(), |m, (a, p)| {
            m.mul(&atoms[a].pow_int(p).unwrap())
        })
    })
}

fn poly() -> impl Strategy<Value = Expr> {
    prop::collection::vec((monomial(), -4i64..=4), 1..=4).prop_map(|ts| {
        let mut e = Expr::zero();
        for (m, c) in ts {
            e.accumulate(m.scale_int(c));
        }
        e
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn total_derivatives_commute(e in poly()) {
        let tx = total_derivative(&total_derivative(&e, 1), 0);
        let xt = total_derivative(&total_derivative(&e, 0), 1);
        prop_assert_eq!(tx, xt);
    }

    #[test]
    fn euler_kills_divergences(a in poly(), b in poly()) {
        let div = divergence(&[a, b], 2).unwrap();
        prop_assert!(euler(&div, 0).vanishes());
    }

    #[test]
    fn leibniz_rule(a in poly(), b in poly(), i in 0usize..2) {
        let lhs = total_derivative(&a.mul(&b), i);
        let rhs = total_derivative(&a, i).mul(&b).add(&a.mul(&total_derivative(&b, i)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn printed_form_reparses(e in poly()) {
        let ctx = lookup("kdv").unwrap().ctx();
        prop_assert_eq!(Expr::parse(&e.to_text(ctx), ctx).unwrap(), e);
    }

    #[test]
    fn radical_squares_back(e in poly()) {
        let base = Expr::one().add(&e.mul(&e));
        let root = base.pow(num_rational::Rational64::new(1, 2)).unwrap();
        prop_assert_eq!(root.mul(&root), base);
    }

    #[test]
    fn reduction_is_idempotent_and_leaves_no_leads(e in poly(), model in prop::sample::select(vec!["kdv", "fw", "sp"])) {
        let m = lookup(model).unwrap();
        let mut red = Reducer::new(&m.system);
        let r = red.reduce(&e).unwrap();
        prop_assert_eq!(red.reduce(&r).unwrap(), r.clone());
        for j in r.jets() {
            prop_assert!(m.system.leading_for(&j).is_none(), "{:?} left in {}", j, r);
        }
    }

    #[test]
    fn reduction_is_linear(a in poly(), b in poly(), c in -3i64..=3) {
        let m = lookup("fw").unwrap();
        let mut red = Reducer::new(&m.system);
        let lhs = red.reduce(&a.add(&b.scale_int(c))).unwrap();
        let rhs = red.reduce(&a).unwrap().add(&red.reduce(&b).unwrap().scale_int(c));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn admitted_generators_form_a_vector_space(cs in prop::collection::vec(-3i64..=3, 4)) {
        let m = lookup("kdv").unwrap();
        let parts: Vec<(BigRational, &Generator)> = cs
            .iter()
            .zip(&m.generators)
            .map(|(c, g)| (BigRational::from_integer((*c).into()), g))
            .collect();
        let g = Generator::combine("mix", &parts).unwrap();
        let r = symmetry_residual(&g, &m.system).unwrap();
        prop_assert!(r.iter().all(Expr::is_zero));
    }

    #[test]
    fn nullspace_is_the_kernel(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..5)) {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let m = RationalMatrix::from_ints(&refs).unwrap();
        let space = nullspace(&m);
        prop_assert_eq!(space.dim() + m.rank(), 5);
        for v in &space.basis {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(m.rref().rref(), m.rref());
        prop_assert!(span_equal(m.rows(), m.rref().rows()));
    }
}

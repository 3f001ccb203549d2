use pnlab::catalog::{self, OracleModel};
use pnlab::{check_consistency, collect, ElementNF, Error, Group, Presentation, Subgroup, Word};
use proptest::prelude::*;

fn f2() -> Group {
    Group::parse("p 3\nrank 2\norders 3 1\ncomm 2 1 1^9\n").unwrap()
}

#[test]
fn parse_cyclic_and_shapes() {
    let c9 = Presentation::parse("p 3\nrank 1\norders 2\n").unwrap();
    assert_eq!(c9.log_order(), 2);
    assert!(c9.is_abelian_table());

    let f2 = Presentation::parse("p 3\nrank 2\norders 3 1\ncomm 2 1 1^9\n").unwrap();
    assert!(f2.is_powerful_shape() && f2.is_pn_shape());

    let m27 = Presentation::parse("p 3\nrank 2\norders 2 1\ncomm 2 1 1^3\n").unwrap();
    assert!(m27.is_powerful_shape());
    assert!(!m27.is_pn_shape());
}

#[test]
fn parse_rejects_bad_input() {
    assert!(matches!(Presentation::parse("p 4\nrank 1\norders 1\n"), Err(Error::NotPrime(4))));
    assert!(matches!(Presentation::parse("p 3\nrank 2\norders 1\n"), Err(Error::Syntax { .. })));
    assert!(matches!(Presentation::parse("p 3\nrank 2\norders 2 1\ncomm 1 2 1^3\n"), Err(Error::Syntax { .. })));
    assert!(Presentation::parse("p 3\nrank 2\norders 2 1\ncomm 2 1 1^10\n").is_err());
}

#[test]
fn engine_rejects_non_powerful_shape() {
    // 3 ∤ 1
    let pres = Presentation::parse("p 3\nrank 2\norders 2 1\ncomm 2 1 1^1\n").unwrap();
    assert!(!pres.is_powerful_shape());
    assert!(Group::from_presentation(&pres).is_err());
    // p = 2 needs divisibility by 4
    let pres = Presentation::parse("p 2\nrank 2\norders 3 1\ncomm 2 1 1^2\n").unwrap();
    assert!(!pres.is_powerful_shape());
    assert!(Group::from_presentation(&pres).is_err());
    let pres = Presentation::parse("p 2\nrank 2\norders 3 1\ncomm 2 1 1^4\n").unwrap();
    assert!(pres.is_powerful_shape());
    assert!(Group::from_presentation(&pres).is_ok());
}

#[test]
fn text_round_trip() {
    for (name, pres) in catalog::fixtures() {
        let again = Presentation::parse(&pres.to_text()).unwrap();
        assert_eq!(again, pres, "{name}");
    }
}

#[test]
fn collect_examples() {
    let pres = catalog::sec4_ex1(3, 2).unwrap();
    assert_eq!(collect(&pres, &Word::new()).unwrap(), ElementNF(vec![0, 0]));
    // a·x = x^10·a
    assert_eq!(collect(&pres, &Word::letter(1, 1).then(0, 1)).unwrap(), ElementNF(vec![10, 1]));
    assert_eq!(collect(&pres, &Word::letter(0, 20).then(0, 10)).unwrap(), ElementNF(vec![3, 0]));
}

#[test]
fn consistency_examples() {
    assert!(check_consistency(&Presentation::abelian(3, &[3, 2, 1]).unwrap()).unwrap().consistent);
    let rep = check_consistency(&catalog::sec4_ex1(3, 2).unwrap()).unwrap();
    assert!(rep.consistent);
    assert_eq!(rep.log_order, 4);
    let bad = Presentation::parse("p 3\nrank 2\norders 3 1\ncomm 2 1 1^3\n").unwrap();
    let rep = check_consistency(&bad).unwrap();
    assert!(!rep.consistent);
    assert!(rep.failure.is_some());
    assert!(matches!(Group::from_presentation(&bad), Err(Error::Inconsistent(_))));
    assert!(check_consistency(&catalog::sec4_ex2()).unwrap().consistent);
}

#[test]
fn closure_count_matches_order() {
    for (name, pres) in catalog::fixtures() {
        if pres.log_order() > 8 || pres.p() > 3 {
            continue;
        }
        let g = Group::from_presentation(&pres).unwrap();
        let all = Subgroup::closure(&g, g.gens()).unwrap();
        assert_eq!(all.order_log(), g.n(), "{name}");
        let mut seen = std::collections::HashSet::new();
        for v in g.elements() {
            assert!(seen.insert(g.to_nf(&v).unwrap()), "{name}");
        }
        assert_eq!(seen.len() as u64, (g.p() as u64).pow(g.n()), "{name}");
    }
}

#[test]
fn semidirect_oracle() {
    let g = f2();
    let model = OracleModel::new(3, 3, 1, 10);
    assert!(catalog::oracle_cross_check(&g, &model, &[(1, 0), (0, 1)]).unwrap());
    // G(n) = ⟨a, b⟩ with b acting by a ↦ a^{1+9}
    for n in 2..=4 {
        let g = Group::from_presentation(&catalog::sec2_ex2(3, n).unwrap()).unwrap();
        let model = OracleModel::new(3, n, n, 10);
        assert!(catalog::oracle_cross_check(&g, &model, &[(1, 0), (0, 1)]).unwrap(), "n = {n}");
    }
}

#[test]
fn quotient_orders() {
    let g = Group::from_presentation(&catalog::sec4_ex1(3, 3).unwrap()).unwrap();
    let z = Subgroup::center(&g).unwrap();
    let q = Subgroup::quotient(&g, &z).unwrap();
    assert_eq!(q.group.n() + z.order_log(), g.n());
    let gp = Subgroup::whole(&g).power(&g, 1).unwrap();
    let q = Subgroup::quotient(&g, &gp).unwrap();
    assert_eq!(q.group.n(), g.rank() as u32);
}

fn nf_strategy(exps: Vec<u32>, p: u32) -> impl Strategy<Value = ElementNF> + Clone {
    exps.into_iter()
        .map(|e| 0..(p as u64).pow(e))
        .collect::<Vec<_>>()
        .prop_map(ElementNF)
}

fn fixture_groups() -> &'static [Group] {
    static GROUPS: std::sync::OnceLock<Vec<Group>> = std::sync::OnceLock::new();
    GROUPS.get_or_init(|| {
        ["sec4ex1_p3_r3", "sec2ex2_p3_n3", "m27", "sec2ex1_n7", "pow2_x32_a4", "sec4ex1_p5_r2"]
            .iter()
            .map(|n| Group::from_presentation(&catalog::fixture(n).unwrap()).unwrap())
            .collect()
    })
}

fn triple(idx: usize) -> impl Strategy<Value = (usize, ElementNF, ElementNF, ElementNF)> {
    let g = &fixture_groups()[idx];
    let s = nf_strategy(g.exps().to_vec(), g.p());
    (Just(idx), s.clone(), s.clone(), s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn associativity((idx, x, y, z) in (0usize..6).prop_flat_map(triple)) {
        let g = &fixture_groups()[idx];
        let l = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
        let r = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn collect_is_idempotent_on_normal_forms((idx, x, _y, _z) in (0usize..6).prop_flat_map(triple)) {
        let g = &fixture_groups()[idx];
        let w = Word(x.0.iter().enumerate().map(|(k, &e)| (k, e as i64)).collect());
        prop_assert_eq!(g.collect(&w).unwrap(), x.clone());
        let v = g.nf_to_pc(&x).unwrap();
        prop_assert_eq!(g.to_nf(&v).unwrap(), x);
    }

    #[test]
    fn inverse_and_commutator_identity((idx, x, y, _z) in (0usize..6).prop_flat_map(triple)) {
        let g = &fixture_groups()[idx];
        let a = g.nf_to_pc(&x).unwrap();
        let b = g.nf_to_pc(&y).unwrap();
        prop_assert_eq!(g.mul(&a, &g.inv(&a).unwrap()).unwrap(), g.identity());
        // ab = ba[a, b]
        let ab = g.mul(&a, &b).unwrap();
        let ba_c = g.mul(&g.mul(&b, &a).unwrap(), &g.comm(&a, &b).unwrap()).unwrap();
        prop_assert_eq!(ab, ba_c);
    }

    #[test]
    fn quotient_order_multiplies((idx, x, _y, _z) in (0usize..6).prop_flat_map(triple)) {
        let g = &fixture_groups()[idx];
        let v = g.nf_to_pc(&x).unwrap();
        let n = Subgroup::normal_closure(g, &[v]).unwrap();
        prop_assert!(n.is_normal(g).unwrap());
        let q = Subgroup::quotient(g, &n).unwrap();
        prop_assert_eq!(q.group.n() + n.order_log(), g.n());
    }
}

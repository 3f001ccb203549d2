use pnlab::ancestry::*;
use pnlab::catalog::*;
use pnlab::Group;

fn grp(p: pnlab::Presentation) -> Group {
    Group::from_presentation(&p).unwrap()
}

fn descendant(g: &Group) -> Group {
    match direct_descendant(g).unwrap() {
        Descendant::Group(q) => q.group,
        Descendant::AbelianLeaf => panic!("abelian"),
    }
}

#[test]
fn descendant_chain_of_two_generator_family() {
    for n in 3..=5 {
        let g = grp(sec2_ex2(3, n).unwrap());
        let h = grp(sec2_ex2(3, n - 1).unwrap());
        let d = descendant(&g);
        assert!(matches!(are_isomorphic(&d, &h, ISO_BUDGET).unwrap(), Iso::Yes(_)), "n = {n}");
    }
}

#[test]
fn ancestors_of_c81xc27() {
    let target = grp(pnlab::Presentation::abelian(3, &[4, 3]).unwrap());
    let g7 = grp(sec2_ex1(7).unwrap());
    let g8 = grp(sec2_ex1(8).unwrap());
    for g in [&g7, &g8] {
        let d = descendant(g);
        assert!(matches!(are_isomorphic(&d, &target, ISO_BUDGET).unwrap(), Iso::Yes(_)));
    }
    assert_eq!(are_isomorphic(&g7, &g8, ISO_BUDGET).unwrap(), Iso::No);
    let found = ancestors(&target, 10).unwrap();
    assert!(found.iter().any(|a| a.name == "sec2ex1_n7"));
}

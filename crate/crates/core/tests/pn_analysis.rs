use pnlab::analysis::*;
use pnlab::catalog::*;
use pnlab::{Group, Subgroup};

fn grp(p: pnlab::Presentation) -> Group {
    Group::from_presentation(&p).unwrap()
}

#[test]
fn maximal_tail_family() {
    for r in 2..=4u32 {
        let g = grp(sec4_ex1(3, r).unwrap());
        let t = tail_analysis(&g).unwrap();
        assert_eq!(t.length, 1 + r * (r - 1) / 2, "r = {r}");
        assert!(t.maximal);
        let (c, d) = class_and_coclass(&g).unwrap();
        assert_eq!(d, r, "r = n - c");
        assert_eq!(g.exponent_log(), d + 1);
        assert!(c >= 1);
    }
    let g = grp(sec4_ex2());
    assert_eq!(g.n(), 16);
    let t = tail_analysis(&g).unwrap();
    assert_eq!((t.length, t.maximal), (11, true));
}

#[test]
fn rank_three_witness() {
    let g = grp(sec4_ex1(3, 3).unwrap());
    let w = class_bound_witness(&g).unwrap();
    assert_eq!(w.layer_ranks, vec![3, 2]);
    assert_eq!(w.bound, 4);
    let (c, _) = class_and_coclass(&g).unwrap();
    assert!(c <= w.bound);
}

#[test]
fn two_generator_family_basis() {
    let g = grp(sec2_ex2(3, 3).unwrap());
    let b = adapted_generators(&g).unwrap();
    assert_eq!(b.orders, vec![3, 3]);
    assert_eq!(b.counts, vec![0, 0, 2]);
}

#[test]
fn hypercentral_center_f2() {
    let g = grp(sec4_ex1(3, 2).unwrap());
    let z = Subgroup::center(&g).unwrap();
    assert_eq!(z.order_log(), 2);
    assert!(is_powerfully_hypercentral(&g, &z).unwrap());
}

use std::ffi::{c_char, CString};
use std::ptr;

use pnlab_ffi::*;

fn last_error() -> String {
    let mut needed = 0usize;
    unsafe { pnlab_last_error(ptr::null_mut(), 0, &mut needed) };
    let mut buf = vec![0u8; needed];
    let st = unsafe { pnlab_last_error(buf.as_mut_ptr() as *mut c_char, buf.len(), ptr::null_mut()) };
    assert_eq!(st, PnlabStatus::Ok);
    String::from_utf8(buf[..needed - 1].to_vec()).unwrap()
}

fn parse(text: &str) -> (PnlabStatus, *mut PnlabGroup) {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    let st = unsafe { pnlab_group_parse(c.as_ptr(), &mut g) };
    (st, g)
}

fn fixture(name: &str) -> *mut PnlabGroup {
    let c = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { pnlab_group_fixture(c.as_ptr(), &mut g) }, PnlabStatus::Ok);
    g
}

#[test]
fn analyze_f2() {
    let (st, g) = parse("p 3\nrank 2\norders 3 1\ncomm 2 1 1^9\n");
    assert_eq!(st, PnlabStatus::Ok);
    let mut rep = PnlabReport::default();
    assert_eq!(unsafe { pnlab_analyze(g, &mut rep) }, PnlabStatus::Ok);
    assert_eq!((rep.p, rep.n, rep.r, rep.e), (3, 4, 2, 3));
    assert_eq!((rep.c, rep.d, rep.s, rep.t), (2, 2, 3, 2));
    assert!(rep.powerful && rep.strongly_powerful && rep.powerfully_nilpotent && rep.maximal_tail);
    unsafe { pnlab_group_free(g) };
}

#[test]
fn multiply_matches_oracle() {
    let g = fixture("sec4ex1_p3_r2");
    let (a, x) = ([0u64, 1], [1u64, 0]);
    let mut out = [0u64; 2];
    assert_eq!(unsafe { pnlab_group_multiply(g, a.as_ptr(), x.as_ptr(), 2, out.as_mut_ptr()) }, PnlabStatus::Ok);
    assert_eq!(out, [10, 1]);
    let bad = [27u64, 0];
    assert_eq!(unsafe { pnlab_group_multiply(g, bad.as_ptr(), x.as_ptr(), 2, out.as_mut_ptr()) }, PnlabStatus::Domain);
    assert_eq!(unsafe { pnlab_group_multiply(g, a.as_ptr(), x.as_ptr(), 3, out.as_mut_ptr()) }, PnlabStatus::Domain);
    unsafe { pnlab_group_free(g) };
}

#[test]
fn error_codes_and_messages() {
    let (st, g) = parse("p 4\nrank 1\norders 1\n");
    assert_eq!(st, PnlabStatus::NotPrime);
    assert!(g.is_null());
    assert!(last_error().contains('4'));

    let (st, _) = parse("p 3\nrank 2\norders 3 1\ncomm 2 1 1^3\n");
    assert_eq!(st, PnlabStatus::Inconsistent);

    let (st, _) = parse("p 3\nrank 2\norders 3\n");
    assert_eq!(st, PnlabStatus::Syntax);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pnlab_group_parse(ptr::null(), &mut out) }, PnlabStatus::NullPointer);
    let name = CString::new("nope").unwrap();
    assert_eq!(unsafe { pnlab_group_fixture(name.as_ptr(), &mut out) }, PnlabStatus::UnknownFixture);

    let m27 = fixture("m27");
    let mut rep = PnlabReport::default();
    assert_eq!(unsafe { pnlab_analyze(m27, &mut rep) }, PnlabStatus::Ok);
    assert!(rep.powerful && !rep.powerfully_nilpotent);
    assert_eq!((rep.c, rep.t), (-1, -1));
    // Z(M_27)^p = 1, so the edge is a loop
    assert_eq!(unsafe { pnlab_direct_descendant(m27, &mut out) }, PnlabStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { pnlab_group_info(out, ptr::null_mut(), &mut n, ptr::null_mut()) }, PnlabStatus::Ok);
    assert_eq!(n, 3);
    let mut h = 0;
    assert_eq!(unsafe { pnlab_h_value(3, 2, &mut h) }, PnlabStatus::Domain);
    assert!(last_error().contains("2x"));
    unsafe {
        pnlab_group_free(out);
        pnlab_group_free(m27);
    }
    unsafe { pnlab_group_free(ptr::null_mut()) };
}

#[test]
fn consistency_without_building() {
    let text = CString::new("p 3\nrank 2\norders 3 1\ncomm 2 1 1^3\n").unwrap();
    let mut ok = true;
    assert_eq!(unsafe { pnlab_check_consistency(text.as_ptr(), &mut ok) }, PnlabStatus::Ok);
    assert!(!ok);
}

#[test]
fn descendant_and_isomorphism() {
    let g = fixture("sec2ex2_p3_n4");
    let h = fixture("sec2ex2_p3_n3");
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { pnlab_direct_descendant(g, &mut d) }, PnlabStatus::Ok);
    assert!(!d.is_null());
    let mut res = PnlabIso::Unknown;
    assert_eq!(unsafe { pnlab_are_isomorphic(d, h, 0, &mut res) }, PnlabStatus::Ok);
    assert_eq!(res, PnlabIso::Yes);
    assert_eq!(unsafe { pnlab_are_isomorphic(g, h, 0, &mut res) }, PnlabStatus::Ok);
    assert_eq!(res, PnlabIso::No);

    let c9 = fixture("c9xc3");
    let mut leaf = g;
    assert_eq!(unsafe { pnlab_direct_descendant(c9, &mut leaf) }, PnlabStatus::Ok);
    assert!(leaf.is_null());
    unsafe {
        pnlab_group_free(g);
        pnlab_group_free(h);
        pnlab_group_free(d);
        pnlab_group_free(c9);
    }
}

#[test]
fn text_round_trip_and_buffer_sizes() {
    let g = fixture("sec4ex1_p3_r3");
    let mut needed = 0;
    assert_eq!(unsafe { pnlab_group_to_text(g, ptr::null_mut(), 0, &mut needed) }, PnlabStatus::BufferTooSmall);
    let mut buf = vec![0u8; needed];
    assert_eq!(unsafe { pnlab_group_to_text(g, buf.as_mut_ptr() as *mut c_char, needed, ptr::null_mut()) }, PnlabStatus::Ok);
    let (st, h) = parse(std::str::from_utf8(&buf[..needed - 1]).unwrap());
    assert_eq!(st, PnlabStatus::Ok);
    let (mut p, mut n, mut r) = (0, 0, 0);
    assert_eq!(unsafe { pnlab_group_info(h, &mut p, &mut n, &mut r) }, PnlabStatus::Ok);
    assert_eq!((p, n, r), (3, 7, 3));
    unsafe {
        pnlab_group_free(g);
        pnlab_group_free(h);
    }
}

#[test]
fn h_values() {
    let mut h = -1;
    assert_eq!(unsafe { pnlab_h_value(4, 1, &mut h) }, PnlabStatus::Ok);
    assert_eq!(h, 1);
    assert_eq!(unsafe { pnlab_h_value(5, 1, &mut h) }, PnlabStatus::Ok);
    assert_eq!(h, 3);
    assert_eq!(unsafe { pnlab_h_value(3, 2, &mut h) }, PnlabStatus::Domain);
}

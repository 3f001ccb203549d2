use pnlab::ancestry::{are_isomorphic, Iso, ISO_BUDGET};
use pnlab::enumeration::*;
use pnlab::{analysis, ElementNF, Group, Subgroup};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn h_table_small() {
    // n = 4: x = 0, 1, 2 give 0, 1, 0
    let table: Vec<i128> = (0..=2).map(|x| h_value(4, x).unwrap()).collect();
    assert_eq!(table, vec![0, 1, 0]);
    let g = growth_report(4).unwrap();
    assert_eq!((g.x_n, g.h_max), (1, 1));
}

#[test]
fn growth_n100_decided_by_integers() {
    let g = growth_report(100).unwrap();
    assert!((g.x_max - 22.43).abs() < 0.01, "{}", g.x_max);
    let (h22, h23) = (h_value(100, 22).unwrap(), h_value(100, 23).unwrap());
    assert_eq!(g.x_n, if h23 > h22 { 23 } else { 22 });
    assert_eq!(g.h_max, h22.max(h23));
}

#[test]
fn stream_examples() {
    for n in 1..=4 {
        assert_eq!(enumerate_presentations(3, n, 0).unwrap().count(), 1);
    }
    assert_eq!(enumerate_presentations(3, 3, 1).unwrap().count(), 1);
    let s: Vec<_> = enumerate_presentations(3, 4, 1).unwrap().collect();
    assert_eq!(s.len(), 3);
    let targets: Vec<Vec<u64>> = s.iter().map(|p| p.comm(1, 0)).collect();
    assert!(targets.contains(&vec![0, 0, 3]) && targets.contains(&vec![0, 0, 6]));
    assert!(enumerate_presentations(2, 4, 1).is_err());
}

#[test]
fn streamed_groups_match_setup() {
    for n in 2..=5u64 {
        for x in 0..=n / 2 {
            let stream: Vec<_> = enumerate_presentations(3, n, x).unwrap().collect();
            assert_eq!(stream.len() as i128, 3i128.pow(h_value(n, x).unwrap() as u32));
            let distinct: std::collections::HashSet<String> = stream.iter().map(|p| p.to_text()).collect();
            assert_eq!(distinct.len(), stream.len());
            for pres in &stream {
                let g = Group::from_presentation(pres).unwrap();
                assert_eq!(g.n() as u64, n);
                assert!(g.exponent_log() <= 2);
                assert!(analysis::is_powerfully_nilpotent(&g).unwrap());
                assert_eq!(g.rank() as u64, n - x);
            }
        }
    }
}

#[test]
fn omega_one_is_characteristic_shape() {
    // {g : g^p = 1} = ⟨a_1, …, a_y⟩ G^p
    for (n, x) in [(4u64, 1u64), (5, 1), (5, 2)] {
        let y = (n - 2 * x) as usize;
        for pres in enumerate_presentations(3, n, x).unwrap() {
            let g = Group::from_presentation(&pres).unwrap();
            let low: Vec<_> = (0..y).map(|k| g.gen(k).clone()).collect();
            let gp = Subgroup::whole(&g).power(&g, 1).unwrap();
            let target = Subgroup::closure(&g, &low).unwrap().join(&g, &gp).unwrap();
            let mut count = 0u64;
            for v in g.elements() {
                if g.pow(&v, 3).unwrap() == g.identity() {
                    count += 1;
                    assert!(target.contains(&g, &v).unwrap());
                }
            }
            assert_eq!(count, 3u64.pow(target.order_log()));
        }
    }
}

#[test]
fn fast_backend_matches_engine() {
    let mut rng = StdRng::seed_from_u64(5);
    for (n, x) in [(4u64, 1u64), (5, 1), (5, 2), (6, 2)] {
        for pres in enumerate_presentations(3, n, x).unwrap().take(20) {
            let g = Group::from_presentation(&pres).unwrap();
            let c = comm_form(&pres).unwrap();
            for _ in 0..20 {
                let l: Vec<u64> = (0..pres.rank()).map(|k| rand::Rng::gen_range(&mut rng, 0..pres.order(k))).collect();
                let m: Vec<u64> = (0..pres.rank()).map(|k| rand::Rng::gen_range(&mut rng, 0..pres.order(k))).collect();
                let want = g.multiply(&ElementNF(l.clone()), &ElementNF(m.clone())).unwrap();
                assert_eq!(fast_mul(&pres, &c, &l, &m).unwrap(), want.0);
                let pw = g.to_nf(&g.pow(&g.nf_to_pc(&ElementNF(l.clone())).unwrap(), 3).unwrap()).unwrap();
                assert_eq!(fast_pth_power(&pres, &l), pw.0);
            }
        }
    }
}

#[test]
fn orbit_counts_match_isomorphism_and_sandwich() {
    for (n, x) in [(4u64, 1u64), (5, 1)] {
        let stream: Vec<_> = enumerate_presentations(3, n, x).unwrap().collect();
        let labels = orbit_partition(3, n, x, ORBIT_BUDGET).unwrap();
        let classes = orbit_dedup(3, n, x, ORBIT_BUDGET).unwrap();
        let y = (n - 2 * x) as usize;
        let lower = stream.len() as f64 / stabilizer_order(3, y, x as usize);
        assert!(lower <= classes as f64 && classes <= stream.len());
        let groups: Vec<Group> = stream.iter().map(|p| Group::from_presentation(p).unwrap()).collect();
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let iso = are_isomorphic(&groups[a], &groups[b], ISO_BUDGET).unwrap();
                assert!(!matches!(iso, Iso::Unknown));
                assert_eq!(matches!(iso, Iso::Yes(_)), labels[a] == labels[b], "n = {n}: {a} vs {b}");
            }
        }
    }
    assert_eq!(orbit_dedup(3, 4, 1, ORBIT_BUDGET).unwrap(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_forms_agree(n in 2u64..400, x_frac in 0.0f64..=1.0) {
        let x = ((n / 2) as f64 * x_frac) as u64;
        prop_assert_eq!(h_sum(n, x).unwrap(), h_closed(n, x).unwrap());
        prop_assert!(h_value(n, x).unwrap() <= growth_report(n).unwrap().h_max);
    }

    #[test]
    fn action_composes(seed in any::<u64>(), pick in 0usize..64, big in any::<bool>()) {
        let (n, x) = if big { (5u64, 1usize) } else { (4, 1) };
        let y = n as usize - 2 * x;
        let stream: Vec<_> = enumerate_presentations(3, n, x as u64).unwrap().collect();
        let pres = &stream[pick % stream.len()];
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = StabilizerMap::random(3, y, y + x, &mut rng);
        let psi = StabilizerMap::random(3, y, y + x, &mut rng);
        let id = StabilizerMap::identity(3, y, y + x);
        prop_assert_eq!(&gl_action_apply(&id, pres).unwrap(), pres);
        let step = gl_action_apply(&psi, &gl_action_apply(&phi, pres).unwrap()).unwrap();
        let once = gl_action_apply(&phi.compose(&psi), pres).unwrap();
        prop_assert_eq!(step, once);
    }
}

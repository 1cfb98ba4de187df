use std::collections::BTreeSet;
use std::sync::Arc;

use orbistring_core::chord::{q, ChordDiagram};
use orbistring_core::gchord::{enumerate_gmd, fiber_report, g_compose, random_gdiagram, GChordDiagram, DEFAULT_SEARCH_CAP};
use orbistring_core::{FiniteGroup, IDENTITY};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups() -> Vec<Arc<FiniteGroup>> {
    vec![Arc::new(FiniteGroup::cyclic(2)), Arc::new(FiniteGroup::cyclic(3)), Arc::new(FiniteGroup::symmetric(3))]
}

fn matching_parts(rng: &mut ChaCha8Rng, g: &Arc<FiniteGroup>, outers: &[usize], max: usize) -> Vec<GChordDiagram> {
    outers
        .iter()
        .map(|&o| {
            let k = rng.gen_range(1..=max);
            random_gdiagram(rng, g, k, Some(o))
        })
        .collect()
}

#[test]
fn unit_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for g in groups() {
        for _ in 0..30 {
            let n = rng.gen_range(1..=3);
            let w = random_gdiagram(&mut rng, &g, n, None);
            let left = g_compose(&GChordDiagram::unit(g.clone(), w.outgoing_holonomy()), std::slice::from_ref(&w)).unwrap();
            assert_eq!(left.canonical(), w.canonical());
            let units: Vec<GChordDiagram> = w.incoming_holonomy().iter().map(|&h| GChordDiagram::unit(g.clone(), h)).collect();
            let right = g_compose(&w, &units).unwrap();
            assert_eq!(right.canonical(), w.canonical());
        }
    }
}

#[test]
fn associativity_and_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for g in groups() {
        for _ in 0..80 {
            let n = rng.gen_range(1..=3);
            let w = random_gdiagram(&mut rng, &g, n, None);
            let parts = matching_parts(&mut rng, &g, &w.incoming_holonomy(), 3);
            let inner = g_compose(&w, &parts).unwrap();
            let expected: Vec<usize> = parts.iter().flat_map(|p| p.incoming_holonomy()).collect();
            assert_eq!(inner.incoming_holonomy(), expected);
            assert_eq!(inner.outgoing_holonomy(), w.outgoing_holonomy());
            let grand = matching_parts(&mut rng, &g, &inner.incoming_holonomy(), 2);
            let left = g_compose(&inner, &grand).unwrap();
            let mut used = 0;
            let nested: Vec<GChordDiagram> = parts
                .iter()
                .map(|p| {
                    let out = g_compose(p, &grand[used..used + p.n()]).unwrap();
                    used += p.n();
                    out
                })
                .collect();
            let right = g_compose(&w, &nested).unwrap();
            assert_eq!(left.canonical(), right.canonical());
        }
    }
}

#[test]
fn chordless_parts_concatenate() {
    let g = Arc::new(FiniteGroup::symmetric(3));
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let w = random_gdiagram(&mut rng, &g, 3, None);
    let parts: Vec<GChordDiagram> = w
        .incoming_holonomy()
        .iter()
        .map(|&h| GChordDiagram::new(g.clone(), ChordDiagram::new(vec![], vec![q(1, 2)], None).unwrap(), h, vec![], vec![rng.gen_range(0..6)]).unwrap())
        .collect();
    let out = g_compose(&w, &parts).unwrap();
    let expected: Vec<usize> = parts.iter().flat_map(|p| p.incoming_holonomy()).collect();
    assert_eq!(out.incoming_holonomy(), expected);
}

#[test]
fn lift_change_conjugates_one_slot() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let g = Arc::new(FiniteGroup::symmetric(3));
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let w = random_gdiagram(&mut rng, &g, n, None);
        let slot = rng.gen_range(0..n);
        let m = rng.gen_range(0..6);
        let mut act = vec![IDENTITY; n];
        act[slot] = m;
        let before = w.incoming_holonomy();
        let after = w.act_on_lifts(&act).incoming_holonomy();
        for i in 0..n {
            let want = if i == slot { g.product([g.inv(m), before[i], m]) } else { before[i] };
            assert_eq!(after[i], want);
        }
    }
}

#[test]
fn fiber_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for g in groups() {
        for n in 1..=3 {
            let base = orbistring_core::chord::random_diagram(&mut rng, n);
            for outer in g.elements() {
                let r = fiber_report(&base, &g, outer, DEFAULT_SEARCH_CAP).unwrap();
                assert_eq!(r.classes as u128, r.expected, "{} n={n}", g.name());
                assert_eq!(r.orbits as u128, r.expected_orbits);
                assert!(r.free && r.over_base);
                assert_eq!(r.by_inner.values().sum::<usize>(), r.classes);
            }
        }
    }
}

#[test]
fn forest_equivalence_of_decorations() {
    // two tree shapes on the cluster {1/8, 3/8, 5/8}
    let g = Arc::new(FiniteGroup::cyclic(3));
    let marks = vec![q(1, 8), q(3, 8), q(5, 8)];
    let path = ChordDiagram::new(vec![(q(1, 8), q(3, 8)), (q(3, 8), q(5, 8))], marks.clone(), None).unwrap();
    let star = ChordDiagram::new(vec![(q(1, 8), q(3, 8)), (q(1, 8), q(5, 8))], marks, None).unwrap();
    let a: BTreeSet<_> = enumerate_gmd(&path, &g, 1, None, DEFAULT_SEARCH_CAP).unwrap().into_iter().collect();
    let b: BTreeSet<_> = enumerate_gmd(&star, &g, 1, None, DEFAULT_SEARCH_CAP).unwrap().into_iter().collect();
    assert_eq!(a.len(), 243);
    assert_eq!(a, b);
}

#[test]
fn trivial_group_and_empty_signature() {
    let one = Arc::new(FiniteGroup::cyclic(1));
    let base = ChordDiagram::new(vec![(q(1, 4), q(3, 4))], vec![q(1, 4), q(3, 4)], None).unwrap();
    assert_eq!(enumerate_gmd(&base, &one, 0, None, DEFAULT_SEARCH_CAP).unwrap().len(), 1);
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let e = ChordDiagram::unit();
    assert!(enumerate_gmd(&e, &z2, 0, Some(&[1]), DEFAULT_SEARCH_CAP).unwrap().is_empty());
}

#[test]
fn s3_figure() {
    let g = Arc::new(FiniteGroup::symmetric(3));
    let outer = g.find_label("(1,3,2)").unwrap();
    let t = g.find_label("(2,3)").unwrap();
    let base = ChordDiagram::new(vec![(q(1, 4), q(3, 4))], vec![q(1, 4), q(3, 4)], None).unwrap();
    let found = enumerate_gmd(&base, &g, outer, Some(&[t, t]), DEFAULT_SEARCH_CAP).unwrap();
    assert!(!found.is_empty());
    let w = found[0].representative(g.clone());
    let mut seen = BTreeSet::new();
    for m in g.elements() {
        seen.insert(g.label(w.act_on_lifts(&[m, IDENTITY]).incoming_holonomy()[0]).to_string());
    }
    let want: BTreeSet<String> = ["(1,2)", "(2,3)", "(1,3)"].iter().map(|s| s.to_string()).collect();
    assert_eq!(seen, want);
}

use std::collections::BTreeSet;
use std::sync::Arc;

use orbistring_core::cocycle::{coboundary, is_two_cocycle, Phase};
use orbistring_core::sector::{act_on_sector, sector_basis, sector_product};
use orbistring_core::{catalog, dw_frobenius, orbifold_string_ring, twisted_center, FiniteGroup, GSet};
use proptest::prelude::*;

const SMALL: [&str; 12] = ["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "S3", "D4", "Q8", "Z2xZ2"];

/// Disjoint union of coset spaces `G/⟨s⟩`, capped at `max` points.
fn coset_union(g: &Arc<FiniteGroup>, seeds: &[usize], max: usize) -> GSet {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &s in seeds {
        let h = g.generated_subgroup(&[s % g.order()]);
        let piece = GSet::cosets(g.clone(), &h).unwrap();
        if rows.len() + piece.size() > max {
            continue;
        }
        let off = rows.len();
        rows.extend(piece.rows().into_iter().map(|r| r.into_iter().map(|m| m + off).collect::<Vec<_>>()));
    }
    if rows.is_empty() {
        return GSet::point(g.clone());
    }
    GSet::new(g.clone(), &rows).unwrap()
}

/// Orbits of sector pairs under `(g,x)·h = (h⁻¹gh, x·h)`, by brute force.
fn sector_orbits(x: &GSet) -> usize {
    let g = x.group();
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for (a, m) in (0..g.order()).flat_map(|a| (0..x.size()).map(move |m| (a, m))) {
        if x.act(m, a) != m || seen.contains(&(a, m)) {
            continue;
        }
        count += 1;
        for h in g.elements() {
            let hi = (0..g.order()).find(|&k| g.mul(h, k) == 0).unwrap();
            seen.insert((g.mul(g.mul(hi, a), h), x.act(m, h)));
        }
    }
    count
}

fn gset_strategy() -> impl Strategy<Value = GSet> {
    (0..SMALL.len(), prop::collection::vec(0usize..8, 1..4)).prop_map(|(i, seeds)| {
        let g = Arc::new(catalog::group(SMALL[i]).unwrap());
        coset_union(&g, &seeds, 6)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sector_product_is_associative_and_covariant(x in gset_strategy()) {
        let basis = sector_basis(&x);
        let mul = |a, b| sector_product(&x, a, b).unwrap();
        for &a in &basis {
            for &b in &basis {
                let ab = mul(a, b);
                for h in x.group().elements() {
                    let moved = mul(act_on_sector(&x, a, h), act_on_sector(&x, b, h));
                    prop_assert_eq!(moved, ab.map(|s| act_on_sector(&x, s, h)));
                }
                for &c in &basis {
                    let left = ab.and_then(|s| mul(s, c));
                    let right = mul(b, c).and_then(|s| mul(a, s));
                    prop_assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn string_ring_is_a_commutative_unital_algebra(x in gset_strategy()) {
        let r = orbifold_string_ring(&x);
        prop_assert_eq!(r.dim(), sector_orbits(&x));
        prop_assert_eq!(r.associativity_failure(), None);
        prop_assert!(r.unit_law_holds());
        prop_assert!(r.is_commutative());
    }

    #[test]
    fn string_ring_is_additive_on_disjoint_unions(i in 0..SMALL.len(), s in 0usize..8, t in 0usize..8) {
        let g = Arc::new(catalog::group(SMALL[i]).unwrap());
        let x = coset_union(&g, &[s], 8);
        let y = coset_union(&g, &[t], 8);
        prop_assume!(x.size() + y.size() <= 8);
        let both = coset_union(&g, &[s, t], 16);
        let d = |z: &GSet| orbifold_string_ring(z).dim();
        prop_assert_eq!(d(&both), d(&x) + d(&y));
    }

    #[test]
    fn twisted_center_dimension_is_a_cohomology_invariant(
        i in 0..SMALL.len(),
        cocycle in 0usize..4,
        beta in prop::collection::vec((0i64..12, prop::sample::select(vec![1i64, 2, 3, 4, 6])), 8),
    ) {
        let g = Arc::new(catalog::group(SMALL[i]).unwrap());
        let names = catalog::cocycle_names(&g);
        let alpha = catalog::cocycle(&g, names[cocycle % names.len()]).unwrap();
        let phases: Vec<Phase> = g.elements().map(|x| if x == 0 { Phase::new(0, 1) } else { Phase::new(beta[x].0, beta[x].1) }).collect();
        let shifted = alpha.product(&coboundary(g.clone(), &phases).unwrap());
        prop_assert!(is_two_cocycle(&g, &shifted.table()).unwrap().valid);
        let (a, b) = (twisted_center(&alpha), twisted_center(&shifted));
        prop_assert_eq!(a.dim(), b.dim());
        prop_assert_eq!(b.associativity_failure(), None);
        prop_assert!(b.unit_law_holds());
    }
}

#[test]
fn trivial_cocycle_gives_the_class_algebra() {
    for name in SMALL {
        let g = Arc::new(catalog::group(name).unwrap());
        let z = twisted_center(&catalog::cocycle(&g, "trivial").unwrap());
        let dw = dw_frobenius(&g);
        assert_eq!(z.dim(), dw.dim(), "{name}");
        assert_eq!(z.labels(), dw.labels(), "{name}");
        for i in 0..z.dim() {
            for j in 0..z.dim() {
                assert_eq!(z.product_basis(i, j), dw.product_basis(i, j), "{name} ({i},{j})");
            }
        }
    }
}

#[test]
fn regular_and_trivial_actions() {
    let s3 = Arc::new(catalog::group("S3").unwrap());
    // free action: only the identity sector survives, as a single orbit
    assert_eq!(orbifold_string_ring(&GSet::right_regular(s3.clone())).dim(), 1);
    // k trivial points: k copies of the class algebra
    assert_eq!(orbifold_string_ring(&GSet::trivial(s3.clone(), 3)).dim(), 9);
    assert!(sector_product(&GSet::point(s3.clone()), (0, 1), (0, 0)).is_err());
}

use num_rational::BigRational;
use orbistring_core::bv::{basis_vector, lens_ring, sphere_quotient_ring, BvData, Delta, Generator, GradedPresentation, Polynomial, WindowAlgebra};
use orbistring_core::catalog;
use orbistring_core::dw_frobenius;
use proptest::prelude::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Sorts a word by adjacent transpositions, tracking the Koszul sign, then
/// applies the relations by hand.
fn word_oracle(p: &GradedPresentation, word: &[usize]) -> Polynomial {
    let gens = p.generators();
    let mut w = word.to_vec();
    let mut negative = false;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] > w[j + 1] {
                if gens[w[j]].degree % 2 != 0 && gens[w[j + 1]].degree % 2 != 0 {
                    negative = !negative;
                }
                w.swap(j, j + 1);
            }
        }
    }
    let mut m = vec![0u32; gens.len()];
    for &g in &w {
        m[g] += 1;
    }
    for (e, g) in m.iter_mut().zip(gens) {
        if g.degree % 2 != 0 && *e > 1 {
            return Polynomial::zero();
        }
        if let Some(k) = g.root_order {
            *e %= k;
        }
    }
    if p.annihilators().iter().any(|a| a.iter().zip(&m).all(|(x, y)| x <= y)) {
        return Polynomial::zero();
    }
    Polynomial::term(m, if negative { -q(1) } else { q(1) })
}

fn rings() -> Vec<GradedPresentation> {
    vec![
        lens_ring(3, 2).unwrap(),
        lens_ring(5, 3).unwrap(),
        sphere_quotient_ring(1).unwrap(),
        sphere_quotient_ring(4).unwrap(),
        GradedPresentation::new(
            "mixed",
            vec![Generator::new("x", 1), Generator::new("z", -3), Generator::new("w", 2), Generator::root("t", 3)],
            vec![vec![1, 0, 2, 0]],
        )
        .unwrap(),
    ]
}

/// Multiplies the word split at `cut` as (left)(right), recursively.
fn bracketed(p: &GradedPresentation, word: &[usize], cuts: &[usize]) -> Polynomial {
    if word.len() <= 1 {
        return p.word(word);
    }
    let cut = 1 + cuts.first().copied().unwrap_or(0) % (word.len() - 1);
    let rest = cuts.get(1..).unwrap_or(&[]);
    p.multiply(&bracketed(p, &word[..cut], rest), &bracketed(p, &word[cut..], rest))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normal_forms_are_confluent(r in 0usize..5, word in prop::collection::vec(0usize..4, 0..9), cuts in prop::collection::vec(0usize..16, 0..9)) {
        let p = &rings()[r];
        let n = p.generators().len();
        let word: Vec<usize> = word.into_iter().map(|g| g % n).collect();
        let left = p.word(&word);
        let reversed: Vec<usize> = word.iter().rev().copied().collect();
        // right-to-left accumulation
        let right = reversed.iter().fold(p.one(), |acc, &g| p.multiply(&p.word(&[g]), &acc));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&left, &bracketed(p, &word, &cuts));
        prop_assert_eq!(&left, &word_oracle(p, &word));
    }
}

#[test]
fn graded_commutativity_on_window_pairs() {
    for p in rings() {
        let basis = p.window_basis(-6, 6).unwrap();
        for x in &basis {
            for y in &basis {
                let a = Polynomial::term(x.clone(), q(1));
                let b = Polynomial::term(y.clone(), q(1));
                let s = if p.degree(x) % 2 != 0 && p.degree(y) % 2 != 0 { q(-1) } else { q(1) };
                assert_eq!(p.multiply(&a, &b), p.multiply(&b, &a).scale(&s), "{} {x:?} {y:?}", p.name());
            }
        }
    }
}

#[test]
fn trivial_order_gives_untwisted_rings() {
    let l = lens_ring(3, 1).unwrap();
    // only 1 in degree 0: v = 1
    assert_eq!(l.window_basis(0, 0).unwrap(), vec![vec![0, 0, 0]]);
    assert_eq!(l.generator("v").unwrap(), l.one());
    let s = sphere_quotient_ring(1).unwrap();
    assert_eq!(s.generator("y").unwrap(), s.one());
    // Λ[b] ⊗ Q[a, v]/(a², ab, av): degrees −2..4 hold a, 1, b, v, bv, v²
    let labels: Vec<String> = s.window_basis(-2, 4).unwrap().iter().map(|m| s.format_monomial(m)).collect();
    assert_eq!(labels, ["a", "1", "b", "v", "b*v", "v^2"]);
}

/// `Q[q] ⊗ Λ[ξ]` with `|q| = 2`, `|ξ| = −3` and `Δ = ∂_q ∂_ξ`, a second
/// order operator of degree +1 whose bracket satisfies every axiom.
fn odd_symplectic(scale_odd: i64) -> BvData {
    let p = GradedPresentation::new("Q[q]xL[xi]", vec![Generator::new("q", 2), Generator::new("xi", -3)], vec![]).unwrap();
    let alg = WindowAlgebra::from_presentation(&p, -3, 8).unwrap();
    let mut entries = Vec::new();
    for m in p.window_basis(-3, 8).unwrap() {
        if m[0] > 0 && m[1] == 1 {
            let col = alg.index_of(&p.format_monomial(&m)).unwrap();
            let row = alg.index_of(&p.format_monomial(&[m[0] - 1, 0])).unwrap();
            let c = i64::from(m[0]) * if m[0] % 2 == 1 { scale_odd } else { 1 };
            entries.push((row, col, q(c)));
        }
    }
    let delta = Delta::from_entries(alg.dim(), &entries).unwrap();
    BvData::new(alg, delta).unwrap()
}

#[test]
fn sign_conventions_pass_on_odd_symplectic() {
    let report = odd_symplectic(1).check();
    assert!(report.passed(), "{:?}", report.first_witness());
    for a in &report.axioms {
        assert!(a.checked > 0, "{} never evaluated", a.name);
    }
    // the bracket is not identically zero: {q, ξ} = ±1
    let data = odd_symplectic(1);
    let alg = &data.algebra;
    let qi = alg.index_of("q").unwrap();
    let xi = alg.index_of("xi").unwrap();
    let b = data.bracket(&basis_vector(qi), 2, &basis_vector(xi)).unwrap();
    assert_eq!(b.len(), 1);
    assert_eq!(b.keys().next(), alg.index_of("1").as_ref());
}

#[test]
fn non_derivation_delta_is_caught() {
    // rescaling Δ on odd powers of q breaks the second-order property
    let report = odd_symplectic(2).check();
    assert!(!report.passed());
    assert!(report.axioms[0].passed(), "degree is still +1");
}

#[test]
fn zero_delta_passes_on_centers_and_lens() {
    let s3 = catalog::group("S3").unwrap();
    let alg = WindowAlgebra::from_sector_ring("Z(Q[S3])", &dw_frobenius(&s3)).unwrap();
    assert_eq!(alg.dim(), 3);
    let report = BvData::zero(alg).check();
    assert!(report.passed());
    assert!(report.axioms.iter().all(|a| a.skipped == 0 && a.checked > 0));

    let lens = WindowAlgebra::from_presentation(&lens_ring(3, 2).unwrap(), -3, 6).unwrap();
    let report = BvData::zero(lens).check();
    assert!(report.passed());
    assert!(report.axioms.iter().all(|a| a.checked > 0));
}

#[test]
fn corrupted_delta_fails_with_witness() {
    let lens = WindowAlgebra::from_presentation(&lens_ring(3, 2).unwrap(), -3, 6).unwrap();
    let a = lens.index_of("a").unwrap();
    let one = lens.index_of("1").unwrap();
    let data = BvData::new(lens.clone(), Delta::from_entries(lens.dim(), &[(one, a, q(1))]).unwrap()).unwrap();
    let report = data.check();
    assert!(!report.passed());
    let w = report.first_witness().unwrap();
    assert!(w.contains("Δ(a)") && w.contains("degree 0"), "{w}");
}

#[test]
fn bracket_with_unit_vanishes() {
    let data = odd_symplectic(1);
    let one = data.algebra.index_of("1").unwrap();
    for j in 0..data.algebra.dim() {
        if let Ok(b) = data.bracket(&basis_vector(one), 0, &basis_vector(j)) {
            assert!(b.is_empty());
        }
    }
}

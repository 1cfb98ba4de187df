//! Seeded property suite behind `orbistring selftest`.
//!
//! Every check is deterministic given the seed and prints no timings, so
//! two runs with the same seed produce identical reports.

use std::collections::BTreeSet;
use std::sync::Arc;

use orbistring_core::bv::{lens_ring, BvData, Delta, Polynomial, WindowAlgebra};
use orbistring_core::cactus::{random_cactus, Cactus};
use orbistring_core::chord::{compose, q, random_diagram, ChordDiagram};
use orbistring_core::cocycle::{coboundary, restrict_to_centralizer, Phase};
use orbistring_core::gchord::{enumerate_gmd, fiber_report, g_compose, random_gdiagram, GChordDiagram, DEFAULT_SEARCH_CAP};
use orbistring_core::sector::{find_isomorphism, regular_classes};
use orbistring_core::{
    catalog, conjugacy_classes, discrete_torsion, dw_frobenius, morita_compare, twisted_center, CycloNumber, FiniteGroup,
    GSet, IDENTITY,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::output::{Output, Table};

pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, cases: 0, failure: None }
    }

    /// Records one case; keeps the first failure.
    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
    }
}

fn class_algebra(rng: &mut ChaCha8Rng) -> Check {
    let _ = rng;
    let mut c = Check::new("class_algebra");
    for name in catalog::names() {
        let g = catalog::group(&name).expect("catalog group");
        let ring = dw_frobenius(&g);
        let cd = conjugacy_classes(&g);
        let mut ok = ring.dim() == cd.len();
        // coefficient of class k in C_i C_j: pairs (x, y) with x y = rep_k
        for i in 0..cd.len().min(ring.dim()) {
            for j in 0..cd.len().min(ring.dim()) {
                for k in 0..cd.len().min(ring.dim()) {
                    let count = cd.classes[i]
                        .iter()
                        .flat_map(|&x| cd.classes[j].iter().map(move |&y| (x, y)))
                        .filter(|&(x, y)| g.mul(x, y) == cd.reps[k])
                        .count();
                    ok &= *ring.constant(i, j, k) == CycloNumber::from_int(1, count as i64);
                }
            }
        }
        c.case(ok, || format!("class algebra of {name} differs"));
    }
    c
}

fn torsion(rng: &mut ChaCha8Rng) -> Check {
    let _ = rng;
    let mut c = Check::new("discrete_torsion");
    for name in catalog::names() {
        let g = Arc::new(catalog::group(&name).expect("catalog group"));
        for co in catalog::cocycle_names(&g) {
            let alpha = catalog::cocycle(&g, co).expect("catalog cocycle");
            let tau = discrete_torsion(&alpha);
            let ok = tau.groupoid_law_failure().is_none() && g.elements().all(|x| restrict_to_centralizer(&tau, x).is_ok());
            c.case(ok, || format!("tau laws fail on {name} with {co}"));
        }
    }
    let k = Arc::new(catalog::group("Z2xZ2").expect("klein"));
    for (co, dim) in [("nontrivial", 1), ("trivial", 4)] {
        let d = twisted_center(&catalog::cocycle(&k, co).expect("cocycle")).dim();
        c.case(d == dim, || format!("twisted center of Z2xZ2 with {co} has dimension {d}, expected {dim}"));
    }
    c
}

fn cohomology(rng: &mut ChaCha8Rng) -> Check {
    let mut c = Check::new("cohomology_invariance");
    for name in catalog::names() {
        let g = Arc::new(catalog::group(&name).expect("catalog group"));
        if !g.is_abelian() {
            continue;
        }
        let e = g.exponent() as i64;
        for co in catalog::cocycle_names(&g) {
            let alpha = catalog::cocycle(&g, co).expect("catalog cocycle");
            let a = twisted_center(&alpha);
            for _ in 0..8 {
                let beta: Vec<Phase> =
                    g.elements().map(|x| if x == IDENTITY { Phase::new(0, 1) } else { Phase::new(rng.gen_range(0..2 * e), 2 * e) }).collect();
                let shifted = alpha.product(&coboundary(g.clone(), &beta).expect("normalized beta"));
                let b = twisted_center(&shifted);
                // u'_g ↦ β(g) u_g sends z'_r to β(r) z_r
                let reps = regular_classes(&shifted);
                let ok = a.dim() == b.dim() && reps == regular_classes(&alpha) && {
                    let level = 2 * e as usize;
                    let phi: Vec<Vec<CycloNumber>> = reps
                        .iter()
                        .enumerate()
                        .map(|(i, &r)| {
                            (0..reps.len())
                                .map(|j| {
                                    if i == j {
                                        let p = beta[r].q();
                                        CycloNumber::root(level, *p.numer() * (level as i64 / *p.denom()))
                                    } else {
                                        CycloNumber::zero(level)
                                    }
                                })
                                .collect()
                        })
                        .collect();
                    b.is_isomorphism(&a, &phi)
                };
                c.case(ok, || format!("rescaling fails on {name} with {co}"));
            }
        }
    }
    c
}

fn morita(rng: &mut ChaCha8Rng) -> Check {
    let _ = rng;
    let mut c = Check::new("morita");
    for (gname, gens) in [("S3", &["(1,2)"][..]), ("S3", &["(1,2,3)"][..]), ("S4", &["(1,2)", "(1,2,3)"][..]), ("Z4", &["2"][..])] {
        let g = Arc::new(catalog::group(gname).expect("group"));
        let gens: Vec<usize> = gens.iter().map(|l| g.find_label(l).expect("label")).collect();
        let h = g.generated_subgroup(&gens);
        let (hg, _) = g.subgroup("H", &h).expect("subgroup");
        let x = GSet::cosets(g.clone(), &h).expect("cosets");
        let y = GSet::point(Arc::new(hg.clone()));
        let report = morita_compare(&x, &y);
        let direct = find_isomorphism(&dw_frobenius(&hg), &orbistring_core::orbifold_string_ring(&x));
        let ok = report.dim_x == report.dim_y && report.is_isomorphic() && matches!(direct, orbistring_core::sector::MoritaVerdict::Isomorphic { .. });
        c.case(ok, || format!("[{gname}/H] is not matched with Z(Q[H]) for |H| = {}", h.len()));
    }
    c
}

fn random_parts(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<ChordDiagram> {
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=max);
            random_diagram(rng, k)
        })
        .collect()
}

fn md_operad(rng: &mut ChaCha8Rng) -> Check {
    let mut c = Check::new("md_operad");
    for _ in 0..120 {
        let n = rng.gen_range(1..=3);
        let d = random_diagram(rng, n);
        let parts = random_parts(rng, n, 2);
        let inner = compose(&d, &parts).expect("compose");
        let grand = random_parts(rng, inner.n(), 2);
        let left = compose(&inner, &grand).expect("compose");
        let mut used = 0;
        let nested: Vec<ChordDiagram> = parts
            .iter()
            .map(|p| {
                let r = compose(p, &grand[used..used + p.n()]).expect("compose");
                used += p.n();
                r
            })
            .collect();
        let right = compose(&d, &nested).expect("compose");
        c.case(left.canonical() == right.canonical(), || "associativity".into());
        let units = vec![ChordDiagram::unit(); n];
        c.case(compose(&d, &units).expect("units").canonical() == d.canonical(), || "right unit".into());
        c.case(compose(&ChordDiagram::unit(), std::slice::from_ref(&d)).expect("unit").canonical() == d.canonical(), || "left unit".into());
        let k = random_cactus(rng, n);
        c.case(Cactus::from_diagram(&k.to_class().representative()) == k, || "cactus round trip".into());
        c.case(Cactus::from_diagram(&d).to_class() == d.canonical(), || "diagram round trip".into());
    }
    c
}

fn g_operad(rng: &mut ChaCha8Rng) -> Check {
    let mut c = Check::new("g_operad");
    for name in ["Z2", "Z3", "S3"] {
        let g = Arc::new(catalog::group(name).expect("group"));
        for _ in 0..25 {
            let n = rng.gen_range(1..=3);
            let w = random_gdiagram(rng, &g, n, None);
            let units: Vec<GChordDiagram> = w.incoming_holonomy().iter().map(|&h| GChordDiagram::unit(g.clone(), h)).collect();
            let ok = g_compose(&w, &units).is_ok_and(|r| r.canonical() == w.canonical())
                && g_compose(&GChordDiagram::unit(g.clone(), w.outgoing_holonomy()), std::slice::from_ref(&w))
                    .is_ok_and(|r| r.canonical() == w.canonical());
            c.case(ok, || format!("unit laws over {name}"));
            let parts: Vec<GChordDiagram> = w
                .incoming_holonomy()
                .iter()
                .map(|&h| {
                    let k = rng.gen_range(1..=2);
                    random_gdiagram(rng, &g, k, Some(h))
                })
                .collect();
            let inner = g_compose(&w, &parts).expect("matched parts");
            let grand: Vec<GChordDiagram> = inner.incoming_holonomy().iter().map(|&h| random_gdiagram(rng, &g, 1, Some(h))).collect();
            let left = g_compose(&inner, &grand).expect("matched parts");
            let mut used = 0;
            let nested: Vec<GChordDiagram> = parts
                .iter()
                .map(|p| {
                    let r = g_compose(p, &grand[used..used + p.n()]).expect("matched parts");
                    used += p.n();
                    r
                })
                .collect();
            let right = g_compose(&w, &nested).expect("matched parts");
            let contract = left.outgoing_holonomy() == w.outgoing_holonomy()
                && left.incoming_holonomy() == grand.iter().flat_map(GChordDiagram::incoming_holonomy).collect::<Vec<_>>();
            c.case(contract && left.canonical() == right.canonical(), || format!("associativity over {name}"));
        }
        for n in 1..=2 {
            let base = random_diagram(rng, n);
            let outer = rng.gen_range(0..g.order());
            let r = fiber_report(&base, &g, outer, DEFAULT_SEARCH_CAP).expect("small fiber");
            c.case(r.classes as u128 == r.expected && r.free && r.over_base, || format!("fiber count over {name}, n = {n}"));
        }
    }
    c
}

fn holonomy_figure(rng: &mut ChaCha8Rng) -> Check {
    let _ = rng;
    let mut c = Check::new("holonomy_figure");
    let g = Arc::new(FiniteGroup::symmetric(3));
    let outer = g.find_label("(1,3,2)").expect("label");
    let t = g.find_label("(2,3)").expect("label");
    let base = ChordDiagram::new(vec![(q(1, 4), q(3, 4))], vec![q(1, 4), q(3, 4)], None).expect("one chord");
    let found = enumerate_gmd(&base, &g, outer, Some(&[t, t]), DEFAULT_SEARCH_CAP).expect("small search");
    c.case(!found.is_empty(), || "no decoration with oh = (1,3,2), ih = ((2,3),(2,3))".into());
    if let Some(w) = found.first().map(|f| f.representative(g.clone())) {
        let seen: BTreeSet<usize> = g.elements().map(|m| w.act_on_lifts(&[m, IDENTITY]).incoming_holonomy()[0]).collect();
        let want: BTreeSet<usize> = conjugacy_classes(&g).classes[conjugacy_classes(&g).class_of(t)].iter().copied().collect();
        c.case(seen == want, || "lift changes do not sweep the class of (2,3)".into());
    }
    c
}

/// Lens σ-basis element of v-power `j` in degree `d`, if any.
fn sigma(n: i64, p: u32, j: u32, d: i64) -> Option<Vec<u32>> {
    let m = n - 1;
    if d >= 0 && d % m == 0 {
        return Some(vec![0, (d / m) as u32, j % p]);
    }
    if d + n >= 0 && (d + n) % m == 0 {
        return Some(vec![1, ((d + n) / m) as u32, j % p]);
    }
    None
}

fn lens(rng: &mut ChaCha8Rng) -> Check {
    let _ = rng;
    let mut c = Check::new("lens_rings");
    for (n, p) in [(3i64, 2u32), (3, 3), (5, 2)] {
        let ring = lens_ring(n, p).expect("odd n");
        let mut elems = Vec::new();
        for l in 0..=6i64 {
            for j in 0..p {
                elems.push((false, l, j, (n - 1) * l));
                elems.push((true, l, j, (n - 1) * l - n));
            }
        }
        for &(ax, l, j, dx) in &elems {
            for &(ay, m, k, dy) in &elems {
                if l + m > 6 {
                    continue;
                }
                let x = ring.monomial(vec![u32::from(ax), l as u32, j]);
                let y = ring.monomial(vec![u32::from(ay), m as u32, k]);
                let prod = ring.multiply(&x, &y);
                let want = if ax && ay {
                    Polynomial::zero()
                } else {
                    sigma(n, p, j + k, dx + dy).map_or_else(Polynomial::zero, |mono| ring.monomial(mono))
                };
                c.case(prod == want, || format!("sigma product fails on L({n},{p})"));
            }
        }
        let a = ring.generator("a").expect("a");
        let v = ring.generator("v").expect("v");
        c.case(ring.multiply(&a, &a).is_zero(), || "a^2 != 0".into());
        let vp = (0..p).fold(ring.one(), |acc, _| ring.multiply(&acc, &v));
        c.case(vp == ring.one(), || "v^p != 1".into());
    }
    c
}

fn bv(rng: &mut ChaCha8Rng) -> Check {
    let _ = rng;
    let mut c = Check::new("bv_checker");
    let s3 = catalog::group("S3").expect("S3");
    let center = WindowAlgebra::from_sector_ring("Z(Q[S3])", &dw_frobenius(&s3)).expect("rational");
    c.case(BvData::zero(center).check().passed(), || "Δ = 0 fails on Z(Q[S3])".into());
    let lens = WindowAlgebra::from_presentation(&lens_ring(3, 2).expect("lens"), -3, 6).expect("finite window");
    c.case(BvData::zero(lens.clone()).check().passed(), || "Δ = 0 fails on L(3,2)".into());
    let a = lens.index_of("a").expect("a");
    let one = lens.index_of("1").expect("1");
    let bad = Delta::from_entries(lens.dim(), &[(one, a, q(1, 1))]).expect("in range");
    let report = BvData::new(lens, bad).expect("shape").check();
    c.case(!report.passed() && report.first_witness().is_some(), || "corrupted Δ was accepted".into());
    c
}

pub fn run(seed: u64) -> (Output, bool) {
    type Runner = fn(&mut ChaCha8Rng) -> Check;
    let runners: [Runner; 9] = [class_algebra, torsion, cohomology, morita, md_operad, g_operad, holonomy_figure, lens, bv];
    let checks: Vec<Check> = runners
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            f(&mut rng)
        })
        .collect();
    let passed = checks.iter().filter(|c| c.failure.is_none()).count();
    let all = passed == checks.len();
    let mut t = Table::new(
        format!("selftest seed {seed}: {passed}/{} checks passed", checks.len()),
        ["check", "cases", "result", "detail"].map(String::from).to_vec(),
    );
    let mut list = Vec::new();
    for c in &checks {
        t.rows.push(vec![
            c.name.into(),
            c.cases.to_string(),
            if c.failure.is_none() { "pass" } else { "FAIL" }.into(),
            c.failure.clone().unwrap_or_default(),
        ]);
        list.push(json!({ "check": c.name, "cases": c.cases, "passed": c.failure.is_none(), "failure": c.failure }));
    }
    let json: Value = json!({ "seed": seed, "passed": passed, "total": checks.len(), "checks": list });
    (Output::json(json).with(t), all)
}

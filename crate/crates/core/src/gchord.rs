//! G-decorated marked chord diagrams.
//!
//! The bundle `Q_g` is trivialized over `[0,1)` with one seam at `u = 0`:
//! a fiber coordinate `k` carried counterclockwise across the seam becomes
//! `g·k`. Chord `i` identifies the fiber over `x_i` with the fiber over
//! `y_i` by `k ↦ δ_i·k`; the right `G`-action is `(x,k)·m = (x,km)`. The
//! mark lift of region `i` is `(z_i, k_i)` and its holonomy is
//! `h_i = k_i⁻¹ w_i k_i`, where `w_i` is the transport word around the
//! region loop.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::chord::{self, diagram_from_value, random_diagram, ChordDiagram, MdClass, Step, Q};
use crate::error::{GChordError, GroupError};
use crate::group::{Element, FiniteGroup, IDENTITY};

/// Default cap on exhaustive decoration searches.
pub const DEFAULT_SEARCH_CAP: u128 = 1 << 20;

#[derive(Clone, Debug)]
pub struct GChordDiagram {
    group: Arc<FiniteGroup>,
    base: ChordDiagram,
    outer: Element,
    delta: Vec<Element>,
    lifts: Vec<Element>,
}

/// Canonical class in `GMD(n, g)`: the base class, the outer holonomy, the
/// transport from the least vertex of each cluster to each later vertex
/// (which fixes the subcluster partition), and the mark lifts at the
/// canonical mark positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GmdClass {
    pub base: MdClass,
    pub outer: Element,
    pub transports: Vec<Vec<Element>>,
    pub lifts: Vec<Element>,
}

/// A left multiplier applied at a loop position in `(0, r]`.
#[derive(Clone, Debug)]
struct Event {
    position: Q,
    seam: bool,
    factor: Element,
}

impl GChordDiagram {
    pub fn new(
        group: Arc<FiniteGroup>,
        base: ChordDiagram,
        outer: Element,
        delta: Vec<Element>,
        lifts: Vec<Element>,
    ) -> Result<Self, GChordError> {
        if delta.len() != base.chords().len() {
            return Err(GChordError::Count { what: "delta", expected: base.chords().len(), found: delta.len() });
        }
        if lifts.len() != base.n() {
            return Err(GChordError::Count { what: "lifts", expected: base.n(), found: lifts.len() });
        }
        if let Some(&bad) = delta.iter().chain(&lifts).chain([&outer]).find(|&&x| x >= group.order()) {
            return Err(GChordError::BadElement(bad));
        }
        Ok(GChordDiagram { group, base, outer, delta, lifts })
    }

    /// The unit `ẽ_g`: the bundle of holonomy `g` over the one-region
    /// diagram with `z̃_1 = ũ`.
    pub fn unit(group: Arc<FiniteGroup>, g: Element) -> Self {
        GChordDiagram::new(group, ChordDiagram::unit(), g, Vec::new(), vec![IDENTITY]).expect("unit")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn base(&self) -> &ChordDiagram {
        &self.base
    }

    pub fn delta(&self) -> &[Element] {
        &self.delta
    }

    pub fn lifts(&self) -> &[Element] {
        &self.lifts
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    fn chord_factor(&self, step: &Step) -> Element {
        match *step {
            Step::Chord { chord, from, .. } => {
                let d = self.delta[chord];
                if self.base.chord_ends()[chord].0 == from {
                    d
                } else {
                    self.group.inv(d)
                }
            }
            Step::Arc(_) => IDENTITY,
        }
    }

    /// Transport through the chords of each joint of region `label`, keyed
    /// by the joint's exit vertex.
    fn joint_words(&self, label: usize) -> BTreeMap<usize, Element> {
        let steps = &self.base.regions()[label].steps;
        let m = self.base.vertices().len();
        let mut out = BTreeMap::new();
        if m == 0 {
            return out;
        }
        for (t, step) in steps.iter().enumerate() {
            if let Step::Arc(a) = step {
                let mut word = IDENTITY;
                let mut u = (t + 1) % steps.len();
                while let s @ Step::Chord { .. } = &steps[u] {
                    word = self.group.mul(self.chord_factor(s), word);
                    u = (u + 1) % steps.len();
                }
                out.insert((a + 1) % m, word);
            }
        }
        out
    }

    fn events(&self, label: usize) -> Vec<Event> {
        let reg = &self.base.regions()[label];
        let r = &reg.perimeter;
        let wrap = |x: Q| {
            let y = &x - (&x / r).floor() * r;
            if y.is_zero() { r.clone() } else { y }
        };
        let words = self.joint_words(label);
        let m = self.base.vertices().len();
        let mut ev = Vec::new();
        for (a, p) in reg.arcs.iter().zip(&reg.arc_positions) {
            let start = self.base.arc_start(*a);
            let len = self.base.arc_len(*a);
            if &start + &len >= Q::one() {
                ev.push(Event { position: wrap(p + Q::one() - &start), seam: true, factor: self.outer });
            }
            if m > 0 {
                ev.push(Event { position: wrap(p + &len), seam: false, factor: words[&((a + 1) % m)] });
            }
        }
        ev.sort_by(|x, y| x.position.cmp(&y.position).then(y.seam.cmp(&x.seam)));
        ev
    }

    fn transport_to(&self, events: &[Event], s: &Q) -> Element {
        events.iter().take_while(|e| e.position <= *s).fold(IDENTITY, |acc, e| self.group.mul(e.factor, acc))
    }

    /// Lift at the start of region `label`'s loop: a mark on the exit side
    /// of a joint is carried through the joint's chords.
    fn start_lift(&self, label: usize) -> Element {
        let z = &self.base.marks()[label];
        let k = self.lifts[label];
        match self.base.vertices().binary_search(z) {
            Ok(v) => match self.joint_words(label).get(&v) {
                Some(&w) if self.base.regions()[label].joints.iter().any(|j| j.exit == v) => self.group.mul(w, k),
                _ => k,
            },
            Err(_) => k,
        }
    }

    /// Transport word `w_i` around region `label` from its mark.
    pub fn region_word(&self, label: usize) -> Element {
        let ev = self.events(label);
        ev.iter().fold(IDENTITY, |acc, e| self.group.mul(e.factor, acc))
    }

    /// `ih`: the holonomy of each region measured from its mark lift.
    pub fn incoming_holonomy(&self) -> Vec<Element> {
        (0..self.n())
            .map(|i| {
                let k = self.start_lift(i);
                let w = self.region_word(i);
                self.group.product([self.group.inv(k), w, k])
            })
            .collect()
    }

    /// `oh`: transport once around the outer circle from `ũ = (0, e)`,
    /// ignoring chords; the only factor met is the seam.
    pub fn outgoing_holonomy(&self) -> Element {
        let word = self.group.mul(self.outer, IDENTITY);
        debug_assert_eq!(word, self.outer);
        word
    }

    /// Right action on the mark lifts: `k_i ↦ k_i·m_i`.
    pub fn act_on_lifts(&self, m: &[Element]) -> GChordDiagram {
        let lifts = self.lifts.iter().zip(m).map(|(&k, &x)| self.group.mul(k, x)).collect();
        GChordDiagram { lifts, ..self.clone() }
    }

    /// Transport from the least vertex of each cluster to every vertex of it.
    fn cluster_transports(&self) -> Vec<Element> {
        let m = self.base.vertices().len();
        let mut t = vec![None; m];
        let mut adj: Vec<Vec<(usize, Element)>> = vec![Vec::new(); m];
        for (c, &(x, y)) in self.base.chord_ends().iter().enumerate() {
            adj[x].push((y, self.delta[c]));
            adj[y].push((x, self.group.inv(self.delta[c])));
        }
        for cluster in self.base.clusters() {
            let root = cluster[0];
            t[root] = Some(IDENTITY);
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                let tu = t[u].expect("visited");
                for &(v, d) in &adj[u] {
                    if t[v].is_none() {
                        t[v] = Some(self.group.mul(d, tu));
                        stack.push(v);
                    }
                }
            }
        }
        t.into_iter().map(|x| x.expect("every vertex in a cluster")).collect()
    }

    pub fn canonical(&self) -> GmdClass {
        let base = self.base.canonical();
        let t = self.cluster_transports();
        let transports = self.base.clusters().iter().map(|c| c[1..].iter().map(|&v| t[v]).collect()).collect();
        let lifts = (0..self.n())
            .map(|i| {
                let k = self.lifts[i];
                match self.base.vertices().binary_search(&self.base.marks()[i]) {
                    Ok(v) => {
                        let target = self.base.vertices().binary_search(&base.marks[i]).expect("canonical mark is a vertex");
                        self.group.product([t[target], self.group.inv(t[v]), k])
                    }
                    Err(_) => k,
                }
            })
            .collect();
        GmdClass { base, outer: self.outer, transports, lifts }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.base.to_json();
        let label = |x: &Element| json!(self.group.label(*x));
        v["group"] = json!(self.group.name());
        v["outer"] = label(&self.outer);
        v["delta"] = json!(self.delta.iter().map(label).collect::<Vec<_>>());
        v["lifts"] = json!(self.lifts.iter().map(label).collect::<Vec<_>>());
        v
    }
}

impl GmdClass {
    pub fn n(&self) -> usize {
        self.lifts.len()
    }

    /// A decorated diagram in the class, on the class's path representative.
    pub fn representative(&self, group: Arc<FiniteGroup>) -> GChordDiagram {
        let base = self.base.representative();
        // path chords (v_a, v_{a+1}) appear cluster by cluster
        let mut delta = Vec::new();
        for t in &self.transports {
            let mut prev = IDENTITY;
            for &x in t {
                delta.push(group.mul(x, group.inv(prev)));
                prev = x;
            }
        }
        GChordDiagram::new(group, base, self.outer, delta, self.lifts.clone()).expect("class representative")
    }

    /// Each cluster's subclusters: for every fiber element `m` of the least
    /// vertex, the fiber elements over the cluster's vertices joined to it.
    pub fn subclusters(&self, group: &FiniteGroup) -> Vec<Vec<Vec<Element>>> {
        self.transports
            .iter()
            .map(|t| group.elements().map(|m| std::iter::once(m).chain(t.iter().map(|&x| group.mul(x, m))).collect()).collect())
            .collect()
    }
}

/// The G-graded composition. Part `i` must have outer holonomy equal to
/// the `i`-th incoming holonomy of `w`. The part bundle is glued along
/// region `i` with its seam at the mark lift, so a point of part `i` with
/// fiber coordinate `m` lands at coordinate `F(s)·k_i·m`, where `F(s)` is
/// the transport along the region loop to position `s`.
pub fn g_compose(w: &GChordDiagram, parts: &[GChordDiagram]) -> Result<GChordDiagram, GChordError> {
    let g = &w.group;
    if parts.iter().any(|p| p.group != *g) {
        return Err(GChordError::GroupMismatch);
    }
    if parts.len() != w.n() {
        return Err(GChordError::Chord(crate::error::ChordError::Arity { expected: w.n(), found: parts.len() }));
    }
    let ih = w.incoming_holonomy();
    for (i, (h, p)) in ih.iter().zip(parts).enumerate() {
        if p.outgoing_holonomy() != *h {
            return Err(GChordError::HolonomyMismatch {
                slot: i + 1,
                expected: g.label(*h).to_string(),
                found: g.label(p.outgoing_holonomy()).to_string(),
            });
        }
    }
    let bases: Vec<ChordDiagram> = parts.iter().map(|p| p.base.clone()).collect();
    let base = chord::compose(&w.base, &bases)?;
    let mut delta = w.delta.clone();
    let mut lifts = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let r = &w.base.regions()[i].perimeter;
        let ev = w.events(i);
        let k = w.start_lift(i);
        let kinv = g.inv(k);
        let f = |t: &Q| w.transport_to(&ev, &(r * t));
        for ((x, y), &d) in p.base.chords().iter().zip(&p.delta) {
            delta.push(g.product([f(y), k, d, kinv, g.inv(f(x))]));
        }
        for j in 0..p.n() {
            let tau = p.base.loop_point(j, &Q::zero());
            lifts.push(g.product([f(&tau), k, p.start_lift(j)]));
        }
    }
    let out = GChordDiagram::new(g.clone(), base, w.outer, delta, lifts)?;
    let expected: Vec<Element> = parts.iter().flat_map(GChordDiagram::incoming_holonomy).collect();
    let found = out.incoming_holonomy();
    if found != expected || out.outgoing_holonomy() != w.outer {
        return Err(GChordError::Contract(format!(
            "recomputed inner holonomy {:?} differs from the parts' {:?}",
            found.iter().map(|x| g.label(*x)).collect::<Vec<_>>(),
            expected.iter().map(|x| g.label(*x)).collect::<Vec<_>>()
        )));
    }
    Ok(out)
}

fn tuples(order: usize, len: usize) -> impl Iterator<Item = Vec<Element>> {
    let total = order.pow(len as u32);
    (0..total).map(move |mut code| {
        (0..len)
            .map(|_| {
                let x = code % order;
                code /= order;
                x
            })
            .collect()
    })
}

fn search_size(order: usize, len: usize) -> u128 {
    (order as u128).pow(len as u32)
}

/// All classes in `GMD(n, g)` over `base`, optionally restricted to inner
/// holonomy `h`, by running over every chord identification and mark lift.
pub fn enumerate_gmd(
    base: &ChordDiagram,
    group: &Arc<FiniteGroup>,
    g: Element,
    h: Option<&[Element]>,
    cap: u128,
) -> Result<Vec<GmdClass>, GChordError> {
    let chords = base.chords().len();
    let n = base.n();
    let size = search_size(group.order(), chords + n);
    if size > cap {
        return Err(GChordError::SearchCap { size, cap });
    }
    if let Some(h) = h {
        if h.len() != n {
            return Err(GChordError::Count { what: "inner holonomy", expected: n, found: h.len() });
        }
    }
    let mut out = BTreeSet::new();
    for delta in tuples(group.order(), chords) {
        for lifts in tuples(group.order(), n) {
            let w = GChordDiagram::new(group.clone(), base.clone(), g, delta.clone(), lifts)?;
            if h.is_none_or(|h| w.incoming_holonomy() == h) {
                out.insert(w.canonical());
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Counts over one base diagram and one outer holonomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberReport {
    pub classes: usize,
    pub expected: u128,
    /// Orbits of the lift action `k_i ↦ k_i m_i`.
    pub orbits: usize,
    pub expected_orbits: u128,
    /// Every orbit has `|G|^n` elements.
    pub free: bool,
    /// Every class lies over the given base class.
    pub over_base: bool,
    /// Number of classes per inner holonomy tuple.
    pub by_inner: BTreeMap<Vec<Element>, usize>,
}

pub fn fiber_report(base: &ChordDiagram, group: &Arc<FiniteGroup>, g: Element, cap: u128) -> Result<FiberReport, GChordError> {
    let classes = enumerate_gmd(base, group, g, None, cap)?;
    let n = base.n();
    let index: BTreeMap<&GmdClass, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut parent: Vec<usize> = (0..classes.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut by_inner = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        let w = c.representative(group.clone());
        *by_inner.entry(w.incoming_holonomy()).or_insert(0) += 1;
        for slot in 0..n {
            for m in group.elements() {
                let mut act = vec![IDENTITY; n];
                act[slot] = m;
                let j = index[&w.act_on_lifts(&act).canonical()];
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..classes.len() {
        *sizes.entry(root(&mut parent, i)).or_insert(0) += 1;
    }
    let target = base.canonical();
    Ok(FiberReport {
        classes: classes.len(),
        expected: search_size(group.order(), 2 * n - 1),
        orbits: sizes.len(),
        expected_orbits: search_size(group.order(), n - 1),
        free: sizes.values().all(|&s| s as u128 == search_size(group.order(), n)),
        over_base: classes.iter().all(|c| c.base == target),
        by_inner,
    })
}

/// A random decoration of a random diagram with `n` regions.
pub fn random_gdiagram<R: Rng + ?Sized>(rng: &mut R, group: &Arc<FiniteGroup>, n: usize, outer: Option<Element>) -> GChordDiagram {
    let base = random_diagram(rng, n);
    let o = group.order();
    let delta = (0..base.chords().len()).map(|_| rng.gen_range(0..o)).collect();
    let lifts = (0..n).map(|_| rng.gen_range(0..o)).collect();
    let outer = outer.unwrap_or_else(|| rng.gen_range(0..o));
    GChordDiagram::new(group.clone(), base, outer, delta, lifts).expect("random decoration")
}

fn element(group: &FiniteGroup, v: &Value) -> Result<Element, GChordError> {
    match v {
        Value::Number(n) => n.as_u64().map(|x| x as usize).filter(|&x| x < group.order()).ok_or(GChordError::BadElement(n.as_u64().unwrap_or(u64::MAX) as usize)),
        Value::String(s) => group
            .find_label(s)
            .ok_or_else(|| GChordError::Group(GroupError::UnknownGroup(format!("no element {s} in {}", group.name())))),
        _ => Err(GChordError::Chord(crate::error::ChordError::Json(format!("bad element {v}")))),
    }
}

/// Parses the diagram format extended by `group`, `outer`, `delta`, `lifts`.
/// Elements are labels or indices; `resolve` maps group names to groups.
pub fn parse_gdiagram_with(
    text: &str,
    resolve: &dyn Fn(&Value) -> Result<FiniteGroup, GroupError>,
) -> Result<GChordDiagram, GChordError> {
    let v: Value = serde_json::from_str(text).map_err(|e| crate::error::ChordError::Json(e.to_string()))?;
    let base = diagram_from_value(&v)?;
    let group = Arc::new(resolve(v.get("group").unwrap_or(&Value::Null))?);
    let list = |key: &str| -> Result<Vec<Element>, GChordError> {
        match v.get(key) {
            None | Some(Value::Null) => Ok(Vec::new()),
            Some(Value::Array(xs)) => xs.iter().map(|x| element(&group, x)).collect(),
            Some(_) => Err(crate::error::ChordError::Json(format!("{key} must be a list")).into()),
        }
    };
    let outer = match v.get("outer") {
        Some(x) => element(&group, x)?,
        None => IDENTITY,
    };
    let mut lifts = list("lifts")?;
    if lifts.is_empty() {
        lifts = vec![IDENTITY; base.n()];
    }
    let delta = list("delta")?;
    GChordDiagram::new(group, base, outer, delta, lifts)
}

pub fn parse_gdiagram(text: &str) -> Result<GChordDiagram, GChordError> {
    parse_gdiagram_with(text, &|v| crate::group::group_from_value(v, &|name| crate::catalog::group(name)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::q;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3))
    }

    #[test]
    fn single_region_holonomy() {
        let g = s3();
        let c = g.find_label("(1,2,3)").unwrap();
        let base = ChordDiagram::new(vec![], vec![q(1, 3)], None).unwrap();
        let w = GChordDiagram::new(g.clone(), base, c, vec![], vec![IDENTITY]).unwrap();
        assert_eq!(w.incoming_holonomy(), [c]);
        assert_eq!(w.outgoing_holonomy(), c);
        let t = g.find_label("(1,2)").unwrap();
        let moved = w.act_on_lifts(&[t]);
        assert_eq!(moved.incoming_holonomy(), [g.product([g.inv(t), c, t])]);
    }

    #[test]
    fn one_chord_words() {
        let g = s3();
        let d = g.find_label("(2,3)").unwrap();
        let c = g.find_label("(1,3,2)").unwrap();
        let base = ChordDiagram::new(vec![(q(1, 4), q(3, 4))], vec![q(1, 4), q(3, 4)], None).unwrap();
        let w = GChordDiagram::new(g.clone(), base, c, vec![d], vec![IDENTITY, IDENTITY]).unwrap();
        // inner region: arc then chord back from 3/4 to 1/4
        assert_eq!(w.region_word(0), g.inv(d));
        // outer region: across the seam, then the chord from 1/4 to 3/4
        assert_eq!(w.region_word(1), g.product([d, c]));
    }

    #[test]
    fn flip_inverts_delta() {
        let g = s3();
        let d = g.find_label("(1,2,3)").unwrap();
        let a = ChordDiagram::new(vec![(q(1, 4), q(3, 4))], vec![q(1, 4), q(3, 4)], None).unwrap();
        let b = ChordDiagram::new(vec![(q(3, 4), q(1, 4))], vec![q(1, 4), q(3, 4)], None).unwrap();
        let wa = GChordDiagram::new(g.clone(), a, IDENTITY, vec![d], vec![0, 1]).unwrap();
        let wb = GChordDiagram::new(g.clone(), b, IDENTITY, vec![g.inv(d)], vec![0, 1]).unwrap();
        assert_eq!(wa.canonical(), wb.canonical());
        assert_eq!(wa.incoming_holonomy(), wb.incoming_holonomy());
        let wc = GChordDiagram::new(g.clone(), wb.base.clone(), IDENTITY, vec![d], vec![0, 1]).unwrap();
        assert_ne!(wa.canonical(), wc.canonical());
    }

    #[test]
    fn mismatch_names_slot() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let base = ChordDiagram::new(vec![(q(1, 4), q(3, 4))], vec![q(1, 4), q(3, 4)], None).unwrap();
        let w = GChordDiagram::new(g.clone(), base, 1, vec![0], vec![0, 0]).unwrap();
        let ih = w.incoming_holonomy();
        let parts = [GChordDiagram::unit(g.clone(), ih[0]), GChordDiagram::unit(g.clone(), 1 - ih[1])];
        match g_compose(&w, &parts) {
            Err(GChordError::HolonomyMismatch { slot, .. }) => assert_eq!(slot, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn representative_round_trip() {
        let g = s3();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        for n in 1..=4 {
            let w = random_gdiagram(&mut rng, &g, n, None);
            let c = w.canonical();
            let r = c.representative(g.clone());
            assert_eq!(r.canonical(), c);
            assert_eq!(r.incoming_holonomy(), w.incoming_holonomy());
        }
    }

    #[test]
    fn search_cap() {
        let g = s3();
        let base = ChordDiagram::new(vec![(q(1, 4), q(3, 4))], vec![q(1, 4), q(3, 4)], None).unwrap();
        assert!(matches!(enumerate_gmd(&base, &g, 0, None, 10), Err(GChordError::SearchCap { size: 216, cap: 10 })));
    }

    #[test]
    fn json_round_trip() {
        let g = s3();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(2);
        let w = random_gdiagram(&mut rng, &g, 3, None);
        let back = parse_gdiagram(&w.to_json().to_string()).unwrap();
        assert_eq!(back.canonical(), w.canonical());
    }
}

//! Cacti: trees of circles (lobes) of total perimeter one, with a marked
//! point at position 0 of each lobe and a base point.
//!
//! Positions on lobe `i` are distances counterclockwise from its mark, in
//! `[0, r_i)`. An intersection point lists its lobes in cyclic order; the
//! outer boundary walk arriving at a point along lobe `L` continues on the
//! lobe after `L`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::chord::{frac, q, ChordDiagram, MdClass, Q};
use crate::error::ChordError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cactus {
    perimeters: Vec<Q>,
    points: Vec<Vec<(usize, Q)>>,
    base: (usize, Q),
}

/// One stretch of the outer boundary walk along a single lobe.
#[derive(Clone, Debug)]
pub struct WalkSegment {
    pub lobe: usize,
    pub t: Q,
    pub position: Q,
    pub len: Q,
    /// The intersection point the stretch starts at, if any.
    pub from_point: Option<usize>,
}

/// Where a boundary parameter lands: a lobe position, and the intersection
/// point if it lands on one (the lobe is then the one the walk leaves on).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Landing {
    pub lobe: usize,
    pub position: Q,
    pub point: Option<usize>,
}

fn bad(msg: impl Into<String>) -> ChordError {
    ChordError::BadCactus(msg.into())
}

impl Cactus {
    pub fn new(perimeters: Vec<Q>, points: Vec<Vec<(usize, Q)>>, base: (usize, Q)) -> Result<Self, ChordError> {
        let n = perimeters.len();
        if n == 0 {
            return Err(bad("no lobes"));
        }
        if perimeters.iter().any(|r| !r.is_positive()) {
            return Err(bad("perimeters must be positive"));
        }
        if perimeters.iter().sum::<Q>() != Q::one() {
            return Err(bad("perimeters must sum to 1"));
        }
        let in_lobe = |l: usize, p: &Q| l < n && !p.is_negative() && *p < perimeters[l];
        let mut per_lobe: Vec<Vec<Q>> = vec![Vec::new(); n];
        let mut edges = 0;
        for pt in &points {
            if pt.len() < 2 {
                return Err(bad("an intersection point needs two lobes"));
            }
            let mut lobes: Vec<usize> = pt.iter().map(|e| e.0).collect();
            lobes.sort_unstable();
            if lobes.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad("a lobe passes twice through one point"));
            }
            for (l, p) in pt {
                if !in_lobe(*l, p) {
                    return Err(bad(format!("position {p} outside lobe {}", l + 1)));
                }
                per_lobe[*l].push(p.clone());
            }
            edges += pt.len();
        }
        for ps in &mut per_lobe {
            ps.sort();
            if ps.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad("two points at one position"));
            }
        }
        // lobes and points form a tree
        if edges + 1 != n + points.len() {
            return Err(bad("lobes and points do not form a tree"));
        }
        let mut parent: Vec<usize> = (0..n + points.len()).collect();
        fn root(parent: &[usize], mut x: usize) -> usize {
            while parent[x] != x {
                x = parent[x];
            }
            x
        }
        for (k, pt) in points.iter().enumerate() {
            for (l, _) in pt {
                let (a, b) = (root(&parent, *l), root(&parent, n + k));
                if a == b {
                    return Err(bad("lobes and points do not form a tree"));
                }
                parent[a] = b;
            }
        }
        if !in_lobe(base.0, &base.1) {
            return Err(bad("base point outside its lobe"));
        }
        let mut c = Cactus { perimeters, points, base };
        c.normalize();
        Ok(c)
    }

    fn normalize(&mut self) {
        for pt in &mut self.points {
            let k = (0..pt.len()).min_by_key(|&i| pt[i].0).expect("nonempty");
            pt.rotate_left(k);
        }
        self.points.sort_by(|a, b| (a[0].0, &a[0].1).cmp(&(b[0].0, &b[0].1)));
    }

    pub fn n(&self) -> usize {
        self.perimeters.len()
    }

    pub fn perimeters(&self) -> &[Q] {
        &self.perimeters
    }

    pub fn points(&self) -> &[Vec<(usize, Q)>] {
        &self.points
    }

    pub fn base(&self) -> &(usize, Q) {
        &self.base
    }

    fn point_at(&self, lobe: usize, pos: &Q) -> Option<usize> {
        self.points.iter().position(|pt| pt.iter().any(|(l, p)| *l == lobe && p == pos))
    }

    /// The base point sits on an intersection point.
    pub fn base_on_point(&self) -> bool {
        self.point_at(self.base.0, &self.base.1).is_some()
    }

    /// The base point coincides with the mark of its lobe.
    pub fn base_on_mark(&self) -> bool {
        self.base.1.is_zero()
    }

    /// The outer boundary walk from the base point, of total length one.
    pub fn walk(&self) -> Vec<WalkSegment> {
        let mut on_lobe: Vec<Vec<(Q, usize)>> = vec![Vec::new(); self.n()];
        for (k, pt) in self.points.iter().enumerate() {
            for (l, p) in pt {
                on_lobe[*l].push((p.clone(), k));
            }
        }
        let (mut lobe, mut pos) = self.base.clone();
        let mut from_point = self.point_at(lobe, &pos);
        let mut t = Q::zero();
        let mut out = Vec::new();
        loop {
            let r = &self.perimeters[lobe];
            let next = on_lobe[lobe]
                .iter()
                .map(|(p, k)| {
                    let mut d = p - &pos;
                    if !d.is_positive() {
                        d += r;
                    }
                    (d, *k)
                })
                .min_by(|a, b| a.0.cmp(&b.0));
            let remaining = Q::one() - &t;
            match next {
                Some((d, k)) if d < remaining => {
                    out.push(WalkSegment { lobe, t: t.clone(), position: pos.clone(), len: d.clone(), from_point });
                    t += d;
                    let pt = &self.points[k];
                    let i = pt.iter().position(|e| e.0 == lobe).expect("lobe on point");
                    let (l, p) = pt[(i + 1) % pt.len()].clone();
                    lobe = l;
                    pos = p;
                    from_point = Some(k);
                }
                _ => {
                    out.push(WalkSegment { lobe, t, position: pos, len: remaining, from_point });
                    return out;
                }
            }
        }
    }

    /// The boundary point at parameter `t ∈ [0,1)` of the outer walk.
    pub fn boundary_point(&self, t: &Q) -> Landing {
        self.land(&self.walk(), t)
    }

    fn land(&self, walk: &[WalkSegment], t: &Q) -> Landing {
        let seg = walk.iter().rev().find(|s| s.t <= *t).expect("t in [0,1)");
        let mut position = &seg.position + (t - &seg.t);
        let r = &self.perimeters[seg.lobe];
        if position >= *r {
            position -= r;
        }
        let point = if *t == seg.t { seg.from_point } else { None };
        Landing { lobe: seg.lobe, position, point }
    }

    /// The cactus of a chord diagram: lobes are regions, intersection points
    /// are clusters, listed by the vertex at which each region re-enters
    /// the circle.
    pub fn from_diagram(d: &ChordDiagram) -> Cactus {
        let perimeters = d.regions().iter().map(|r| r.perimeter.clone()).collect();
        let mut by_cluster: BTreeMap<usize, Vec<(Q, usize, Q)>> = BTreeMap::new();
        for r in d.regions() {
            for j in &r.joints {
                by_cluster.entry(j.cluster).or_default().push((d.vertices()[j.entry].clone(), r.label, j.position.clone()));
            }
        }
        let points = by_cluster
            .into_values()
            .map(|mut es| {
                es.sort();
                es.into_iter().map(|(_, l, p)| (l, p)).collect()
            })
            .collect();
        let zero = Q::zero();
        let lobe = d.arc_labels()[d.arc_at(&zero)];
        let pos = d.loop_position(lobe, &zero).expect("base lies on its region");
        Cactus::new(perimeters, points, (lobe, pos)).expect("cactus of a valid diagram")
    }

    /// Unrolls the outer boundary walk onto the circle.
    pub fn to_class(&self) -> MdClass {
        let walk = self.walk();
        let mut vertices = Vec::new();
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut arc_labels = Vec::new();
        for s in &walk {
            if let Some(k) = s.from_point {
                members.entry(k).or_default().push(vertices.len());
                vertices.push(s.t.clone());
                arc_labels.push(s.lobe);
            }
        }
        if arc_labels.is_empty() {
            arc_labels.push(walk[0].lobe);
        }
        let mut marks = vec![None::<Q>; self.n()];
        for s in &walk {
            let r = &self.perimeters[s.lobe];
            let mut off = -&s.position;
            if off.is_negative() {
                off += r;
            }
            if off <= s.len {
                let z = frac(&(&s.t + off));
                let slot = &mut marks[s.lobe];
                if slot.as_ref().is_none_or(|m| z < *m) {
                    *slot = Some(z);
                }
            }
        }
        let chords = members
            .values()
            .flat_map(|vs| vs.windows(2).map(|w| (vertices[w[0]].clone(), vertices[w[1]].clone())).collect::<Vec<_>>())
            .collect();
        let marks = marks.into_iter().map(|m| m.expect("walk passes every mark")).collect();
        ChordDiagram::new(chords, marks, Some(arc_labels)).expect("unrolled cactus is a valid diagram").canonical()
    }

    /// Lobe `i` becomes lobe `sigma[i]`.
    pub fn permute_labels(&self, sigma: &[usize]) -> Cactus {
        let mut perimeters = vec![Q::zero(); self.n()];
        for (i, r) in self.perimeters.iter().enumerate() {
            perimeters[sigma[i]] = r.clone();
        }
        let points = self.points.iter().map(|pt| pt.iter().map(|(l, p)| (sigma[*l], p.clone())).collect()).collect();
        Cactus::new(perimeters, points, (sigma[self.base.0], self.base.1.clone())).expect("relabeling preserves validity")
    }

    /// Composition: lobe `i` is replaced by part `i` scaled to perimeter
    /// `r_i`, its base point glued to the mark of lobe `i`. A point of lobe
    /// `i` at position `p` is sent to the part's boundary at parameter
    /// `p / r_i`, merging with any intersection point found there.
    pub fn compose(&self, parts: &[Cactus]) -> Result<Cactus, ChordError> {
        if parts.len() != self.n() {
            return Err(ChordError::Arity { expected: self.n(), found: parts.len() });
        }
        let mut offsets = Vec::new();
        let mut total = 0;
        for p in parts {
            offsets.push(total);
            total += p.n();
        }
        let walks: Vec<Vec<WalkSegment>> = parts.iter().map(Cactus::walk).collect();
        let land = |i: usize, p: &Q| parts[i].land(&walks[i], &(p / &self.perimeters[i]));
        let landings: Vec<Vec<Landing>> = self.points.iter().map(|pt| pt.iter().map(|(i, p)| land(*i, p)).collect()).collect();
        let mut hits: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        for (k, pt) in self.points.iter().enumerate() {
            for ((i, _), l) in pt.iter().zip(&landings[k]) {
                if let Some(qpt) = l.point {
                    hits.insert((*i, qpt, l.lobe), k);
                }
            }
        }
        let mut ctx = Glue {
            outer: self,
            parts,
            offsets: &offsets,
            landings: &landings,
            hits: &hits,
            used_outer: vec![false; self.points.len()],
            used_part: parts.iter().map(|p| vec![false; p.points.len()]).collect(),
        };
        let mut points = Vec::new();
        for k in 0..self.points.len() {
            if !ctx.used_outer[k] {
                points.push(ctx.expand_outer(k, None));
            }
        }
        for (i, p) in parts.iter().enumerate() {
            for (k, pt) in p.points.iter().enumerate() {
                if !ctx.used_part[i][k] {
                    let r = &self.perimeters[i];
                    points.push(pt.iter().map(|(l, x)| (offsets[i] + l, r * x)).collect());
                }
            }
        }
        let perimeters = parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.perimeters.iter().map(move |x| &self.perimeters[i] * x))
            .collect();
        let (j, w) = &self.base;
        let b = land(*j, w);
        Cactus::new(perimeters, points, (offsets[*j] + b.lobe, &self.perimeters[*j] * b.position))
    }

    pub fn to_json(&self) -> Value {
        let pair = |x: &Q| [x.numer().to_i64().expect("fits"), x.denom().to_i64().expect("fits")];
        let [bn, bd] = pair(&self.base.1);
        json!({
            "n": self.n(),
            "perimeters": self.perimeters.iter().map(|r| json!(pair(r))).collect::<Vec<_>>(),
            "points": self.points.iter().map(|pt| pt.iter().map(|(l, p)| json!([l + 1, pair(p)[0], pair(p)[1]])).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "base": [self.base.0 + 1, bn, bd],
            "base_on_point": self.base_on_point(),
            "base_on_mark": self.base_on_mark(),
        })
    }
}

struct Glue<'a> {
    outer: &'a Cactus,
    parts: &'a [Cactus],
    offsets: &'a [usize],
    landings: &'a [Vec<Landing>],
    hits: &'a BTreeMap<(usize, usize, usize), usize>,
    used_outer: Vec<bool>,
    used_part: Vec<Vec<bool>>,
}

impl Glue<'_> {
    /// Cyclic lobe sequence of outer point `k`, skipping lobe `skip` and
    /// starting just after it.
    fn expand_outer(&mut self, k: usize, skip: Option<usize>) -> Vec<(usize, Q)> {
        self.used_outer[k] = true;
        let pt = &self.outer.points[k];
        let start = skip.map_or(0, |s| pt.iter().position(|e| e.0 == s).expect("skipped lobe on point") + 1);
        let mut out = Vec::new();
        for idx in (0..pt.len()).map(|o| (start + o) % pt.len()) {
            let i = pt[idx].0;
            if Some(i) == skip {
                continue;
            }
            let l = &self.landings[k][idx];
            match l.point {
                Some(qpt) => out.extend(self.expand_part(i, qpt, l.lobe)),
                None => out.push((self.offsets[i] + l.lobe, &self.outer.perimeters[i] * &l.position)),
            }
        }
        out
    }

    /// Cyclic sequence of point `qpt` of part `i` starting at lobe `from`,
    /// with other outer points glued there inserted before their lobe.
    fn expand_part(&mut self, i: usize, qpt: usize, from: usize) -> Vec<(usize, Q)> {
        self.used_part[i][qpt] = true;
        let pt = self.parts[i].points[qpt].clone();
        let start = pt.iter().position(|e| e.0 == from).expect("lobe on point");
        let mut out = Vec::new();
        for o in 0..pt.len() {
            let (l, p) = &pt[(start + o) % pt.len()];
            if o > 0 {
                if let Some(&k) = self.hits.get(&(i, qpt, *l)) {
                    out.extend(self.expand_outer(k, Some(i)));
                }
            }
            out.push((self.offsets[i] + l, &self.outer.perimeters[i] * p));
        }
        out
    }
}

fn parse_pair(v: &Value) -> Result<(usize, Q), ChordError> {
    let a = v.as_array().filter(|a| a.len() == 3).ok_or_else(|| ChordError::Json("expected [lobe, num, den]".into()))?;
    let ints: Vec<i64> = a.iter().map(|x| x.as_i64().ok_or_else(|| ChordError::Json(format!("expected integer, got {x}")))).collect::<Result<_, _>>()?;
    if ints[0] < 1 || ints[2] == 0 {
        return Err(ChordError::Json("lobes are 1-based and denominators nonzero".into()));
    }
    Ok((ints[0] as usize - 1, q(ints[1], ints[2])))
}

/// Parses the format written by [`Cactus::to_json`]; the flags are ignored.
pub fn parse_cactus(text: &str) -> Result<Cactus, ChordError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ChordError::Json(e.to_string()))?;
    let per = v["perimeters"].as_array().ok_or_else(|| ChordError::Json("missing perimeters".into()))?;
    let perimeters = per
        .iter()
        .map(|p| match p.as_array().map(|a| (a.len(), a.first().and_then(Value::as_i64), a.get(1).and_then(Value::as_i64))) {
            Some((2, Some(a), Some(b))) if b != 0 => Ok(q(a, b)),
            _ => Err(ChordError::Json("perimeter must be [num, den]".into())),
        })
        .collect::<Result<_, _>>()?;
    let points = match &v["points"] {
        Value::Null => Vec::new(),
        Value::Array(ps) => ps
            .iter()
            .map(|pt| pt.as_array().ok_or_else(|| ChordError::Json("point must be a list".into()))?.iter().map(parse_pair).collect())
            .collect::<Result<_, _>>()?,
        _ => return Err(ChordError::Json("points must be a list".into())),
    };
    let base = parse_pair(&v["base"])?;
    Cactus::new(perimeters, points, base)
}

/// A random cactus with `n` lobes on a small rational grid; the base point
/// lands on an intersection point or a mark with positive probability.
pub fn random_cactus<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Cactus {
    assert!(n >= 1);
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    let sum: i64 = weights.iter().sum();
    let perimeters: Vec<Q> = weights.iter().map(|&w| q(w, sum)).collect();
    let mut shape: Vec<Vec<usize>> = Vec::new();
    for l in 1..n {
        if !shape.is_empty() && rng.gen_bool(0.4) {
            let k = rng.gen_range(0..shape.len());
            let at = rng.gen_range(0..=shape[k].len());
            shape[k].insert(at, l);
        } else {
            let other = rng.gen_range(0..l);
            shape.push(if rng.gen_bool(0.5) { vec![other, l] } else { vec![l, other] });
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    const SLOTS: i64 = 6;
    let mut free: Vec<Vec<i64>> = vec![(0..SLOTS).collect(); n];
    let mut take = |rng: &mut R, l: usize| {
        let i = rng.gen_range(0..free[l].len());
        free[l].swap_remove(i)
    };
    let points: Vec<Vec<(usize, Q)>> = shape
        .iter()
        .map(|pt| pt.iter().map(|&l| (perm[l], &perimeters[perm[l]] * q(take(rng, perm[l]), SLOTS))).collect())
        .collect();
    let lobe = rng.gen_range(0..n);
    let on_lobe: Vec<Q> = points.iter().flat_map(|pt| pt.iter().filter(|e| e.0 == lobe).map(|e| e.1.clone())).collect();
    let pos = if !on_lobe.is_empty() && rng.gen_bool(0.3) {
        on_lobe[rng.gen_range(0..on_lobe.len())].clone()
    } else {
        &perimeters[lobe] * q(rng.gen_range(0..2 * SLOTS), 2 * SLOTS)
    };
    Cactus::new(perimeters, points, (lobe, pos)).expect("random cactus is valid")
}

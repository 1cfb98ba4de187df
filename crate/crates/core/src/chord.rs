//! Marked chord diagrams on the circle of perimeter one.
//!
//! Coordinates are exact rationals in `[0,1)` with the base point `u` at 0.
//! Vertices are the distinct chord endpoints in increasing order; arc `j`
//! runs counterclockwise from vertex `j` to vertex `j+1` (the last arc wraps
//! through `u`). Regions are found by face traversal: arriving at a vertex
//! along an edge whose reverse leaves at counterclockwise distance `D`, the
//! walk continues along the outgoing edge of largest distance below `D`
//! (the outgoing arc counts as distance `0⁺`, an incoming arc as `1⁻`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::ChordError;

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(num.into(), den.into())
}

/// `x mod 1` in `[0,1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

/// Counterclockwise distance from `a` to `b`, in `[0,1)`.
pub fn ccw(a: &Q, b: &Q) -> Q {
    frac(&(b - a))
}

fn in_unit(x: &Q) -> bool {
    !x.is_negative() && *x < Q::one()
}

/// One step of a region boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Arc(usize),
    /// Chord traversal between vertex indices.
    Chord { chord: usize, from: usize, to: usize },
}

/// A passage of a region's boundary through a cluster: the boundary leaves
/// the circle at vertex `exit`, follows chords and returns at `entry`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Joint {
    /// Distance along the region loop from the region's mark.
    pub position: Q,
    pub cluster: usize,
    pub exit: usize,
    pub entry: usize,
}

/// The boundary loop of one region.
#[derive(Clone, Debug)]
pub struct Region {
    pub label: usize,
    pub steps: Vec<Step>,
    pub perimeter: Q,
    /// Arcs in loop order, starting with the arc the mark lies on.
    pub arcs: Vec<usize>,
    /// Loop position of the start of each arc in `arcs`.
    pub arc_positions: Vec<Q>,
    /// Joints in loop order.
    pub joints: Vec<Joint>,
}

/// A valid marked labeled chord diagram.
#[derive(Clone)]
pub struct ChordDiagram {
    chords: Vec<(Q, Q)>,
    marks: Vec<Q>,
    vertices: Vec<Q>,
    ends: Vec<(usize, usize)>,
    cluster_of: Vec<usize>,
    clusters: Vec<Vec<usize>>,
    arc_labels: Vec<usize>,
    regions: Vec<Region>,
}

impl fmt::Debug for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: &Q| x.to_string();
        f.debug_struct("ChordDiagram")
            .field("chords", &self.chords.iter().map(|(a, b)| (show(a), show(b))).collect::<Vec<_>>())
            .field("marks", &self.marks.iter().map(show).collect::<Vec<_>>())
            .field("arc_labels", &self.arc_labels)
            .finish()
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Whether chords `(a,b)` and `(c,d)` have interleaved endpoints.
pub fn chords_cross(a: &Q, b: &Q, c: &Q, d: &Q) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let inside = |x: &Q| lo < x && x < hi;
    inside(c) != inside(d)
}

impl ChordDiagram {
    /// Validates raw data. Without `arc_labels` the region of mark `z_i` is
    /// the one containing the arc that starts at or runs through `z_i`.
    pub fn new(chords: Vec<(Q, Q)>, marks: Vec<Q>, arc_labels: Option<Vec<usize>>) -> Result<Self, ChordError> {
        let n = marks.len();
        for x in chords.iter().flat_map(|(a, b)| [a, b]).chain(&marks) {
            if !in_unit(x) {
                return Err(ChordError::OutOfRange(x.to_string()));
            }
        }
        for (i, (a, b)) in chords.iter().enumerate() {
            if a == b {
                return Err(ChordError::DegenerateChord(i));
            }
        }
        for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                let ((a, b), (c, d)) = (&chords[i], &chords[j]);
                if chords_cross(a, b, c, d) {
                    return Err(ChordError::Crossing(i, j));
                }
            }
        }
        let mut vertices: Vec<Q> = chords.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
        vertices.sort();
        vertices.dedup();
        let index = |x: &Q| vertices.binary_search(x).expect("endpoint is a vertex");
        let ends: Vec<(usize, usize)> = chords.iter().map(|(a, b)| (index(a), index(b))).collect();
        let m = vertices.len();
        let mut parent: Vec<usize> = (0..m).collect();
        for (i, &(a, b)) in ends.iter().enumerate() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(ChordError::Cycle(i));
            }
            parent[ra.max(rb)] = ra.min(rb);
        }
        if chords.len() + 1 != n {
            return Err(ChordError::RegionCount { expected: n, found: chords.len() + 1 });
        }
        let roots: Vec<usize> = (0..m).map(|v| find(&mut parent, v)).collect();
        let mut cluster_ids: BTreeMap<usize, usize> = BTreeMap::new();
        for &r in &roots {
            let next = cluster_ids.len();
            cluster_ids.entry(r).or_insert(next);
        }
        let cluster_of: Vec<usize> = roots.iter().map(|r| cluster_ids[r]).collect();
        let mut clusters = vec![Vec::new(); cluster_ids.len()];
        for (v, &c) in cluster_of.iter().enumerate() {
            clusters[c].push(v);
        }

        let mut d = ChordDiagram {
            chords,
            marks,
            vertices,
            ends,
            cluster_of,
            clusters,
            arc_labels: Vec::new(),
            regions: Vec::new(),
        };
        let faces = d.trace_faces();
        if faces.len() != n {
            return Err(ChordError::RegionCount { expected: n, found: faces.len() });
        }
        let mut face_of_arc = vec![usize::MAX; d.num_arcs()];
        for (f, steps) in faces.iter().enumerate() {
            let arcs: Vec<usize> = steps.iter().filter_map(|s| if let Step::Arc(a) = s { Some(*a) } else { None }).collect();
            if arcs.is_empty() {
                return Err(ChordError::ZeroMeasure(f));
            }
            for a in arcs {
                face_of_arc[a] = f;
            }
        }
        // label of each face
        let mut face_label = vec![usize::MAX; n];
        match arc_labels {
            None => {
                for (i, z) in d.marks.iter().enumerate() {
                    let f = face_of_arc[d.arc_at(z)];
                    if face_label[f] != usize::MAX {
                        return Err(ChordError::BadLabels(format!(
                            "marks z_{} and z_{} fall in the same region; give interval_labels",
                            face_label[f] + 1,
                            i + 1
                        )));
                    }
                    face_label[f] = i;
                }
            }
            Some(labels) => {
                if labels.len() != d.num_arcs() {
                    return Err(ChordError::BadLabels(format!("{} labels for {} arcs", labels.len(), d.num_arcs())));
                }
                for (a, &l) in labels.iter().enumerate() {
                    if l >= n {
                        return Err(ChordError::BadLabels(format!("label {} out of range", l + 1)));
                    }
                    let f = face_of_arc[a];
                    if face_label[f] == usize::MAX {
                        face_label[f] = l;
                    } else if face_label[f] != l {
                        return Err(ChordError::BadLabels(format!("arcs of one region carry labels {} and {}", face_label[f] + 1, l + 1)));
                    }
                }
                let mut seen = vec![false; n];
                for &l in &face_label {
                    if std::mem::replace(&mut seen[l], true) {
                        return Err(ChordError::BadLabels(format!("label {} used twice", l + 1)));
                    }
                }
            }
        }
        d.arc_labels = face_of_arc.iter().map(|&f| face_label[f]).collect();
        let mut by_label: Vec<Option<Vec<Step>>> = vec![None; n];
        for (f, steps) in faces.into_iter().enumerate() {
            by_label[face_label[f]] = Some(steps);
        }
        for (label, steps) in by_label.into_iter().enumerate() {
            let steps = steps.expect("every label used");
            let region = d.build_region(label, steps)?;
            d.regions.push(region);
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.marks.len()
    }

    pub fn chords(&self) -> &[(Q, Q)] {
        &self.chords
    }

    pub fn marks(&self) -> &[Q] {
        &self.marks
    }

    pub fn vertices(&self) -> &[Q] {
        &self.vertices
    }

    /// Vertex index sets of the trees of the chord forest, ordered by least vertex.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster_of(&self, vertex: usize) -> usize {
        self.cluster_of[vertex]
    }

    /// Region label of each arc.
    pub fn arc_labels(&self) -> &[usize] {
        &self.arc_labels
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Chord endpoints as vertex indices.
    pub fn chord_ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    pub fn num_arcs(&self) -> usize {
        self.vertices.len().max(1)
    }

    pub fn arc_start(&self, a: usize) -> Q {
        if self.vertices.is_empty() {
            Q::zero()
        } else {
            self.vertices[a].clone()
        }
    }

    pub fn arc_len(&self, a: usize) -> Q {
        let m = self.vertices.len();
        if m == 0 {
            return Q::one();
        }
        let d = ccw(&self.vertices[a], &self.vertices[(a + 1) % m]);
        if d.is_zero() {
            Q::one()
        } else {
            d
        }
    }

    /// The arc whose half-open span `[start, end)` contains `x`.
    pub fn arc_at(&self, x: &Q) -> usize {
        let m = self.vertices.len();
        if m == 0 {
            return 0;
        }
        match self.vertices.binary_search(x) {
            Ok(i) => i,
            Err(0) => m - 1,
            Err(i) => i - 1,
        }
    }

    fn trace_faces(&self) -> Vec<Vec<Step>> {
        let m = self.vertices.len();
        if m == 0 {
            return vec![vec![Step::Arc(0)]];
        }
        // outgoing chords at each vertex with their counterclockwise distance
        let mut at: Vec<Vec<(Q, usize, usize)>> = vec![Vec::new(); m];
        for (c, &(a, b)) in self.ends.iter().enumerate() {
            at[a].push((ccw(&self.vertices[a], &self.vertices[b]), c, b));
            at[b].push((ccw(&self.vertices[b], &self.vertices[a]), c, a));
        }
        let mut used = vec![false; m];
        let mut faces = Vec::new();
        for start in 0..m {
            if used[start] {
                continue;
            }
            let mut steps = Vec::new();
            let mut arc = start;
            loop {
                used[arc] = true;
                steps.push(Step::Arc(arc));
                let mut p = (arc + 1) % m;
                let mut limit: Option<Q> = None;
                loop {
                    let next = at[p]
                        .iter()
                        .filter(|(d, _, _)| limit.as_ref().is_none_or(|l| d < l))
                        .max_by(|x, y| x.0.cmp(&y.0));
                    match next {
                        Some((_, c, to)) => {
                            steps.push(Step::Chord { chord: *c, from: p, to: *to });
                            limit = Some(ccw(&self.vertices[*to], &self.vertices[p]));
                            p = *to;
                        }
                        None => break,
                    }
                }
                arc = p;
                if arc == start {
                    break;
                }
            }
            faces.push(steps);
        }
        faces
    }

    fn build_region(&self, label: usize, steps: Vec<Step>) -> Result<Region, ChordError> {
        let arcs: Vec<usize> = steps.iter().filter_map(|s| if let Step::Arc(a) = s { Some(*a) } else { None }).collect();
        let lens: Vec<Q> = arcs.iter().map(|&a| self.arc_len(a)).collect();
        let perimeter: Q = lens.iter().sum();
        let z = &self.marks[label];
        // locate the mark: on an arc (start included) or at an arc end
        let mut start = None;
        for (k, &a) in arcs.iter().enumerate() {
            let off = ccw(&self.arc_start(a), z);
            if off < lens[k] {
                start = Some((k, off));
                break;
            }
        }
        if start.is_none() {
            for (k, &a) in arcs.iter().enumerate() {
                if ccw(&self.arc_start(a), z) == lens[k] {
                    start = Some(((k + 1) % arcs.len(), Q::zero()));
                }
            }
        }
        let (k, off) = start.ok_or(ChordError::MarkOffRegion(label))?;
        let r = arcs.len();
        let order: Vec<usize> = (0..r).map(|l| (k + l) % r).collect();
        let mut arc_positions = Vec::with_capacity(r);
        let mut joints = Vec::new();
        let mut cum = -off.clone();
        let m = self.vertices.len();
        for &idx in &order {
            let pos = if cum.is_negative() { &cum + &perimeter } else { cum.clone() };
            arc_positions.push(pos);
            cum += &lens[idx];
            if m > 0 {
                let exit = (arcs[idx] + 1) % m;
                let entry = arcs[(idx + 1) % r];
                let p = if cum >= perimeter { &cum - &perimeter } else { cum.clone() };
                joints.push(Joint { position: p, cluster: self.cluster_of[exit], exit, entry });
            }
        }
        joints.sort_by(|a, b| a.position.cmp(&b.position));
        let mut seen = vec![false; self.clusters.len()];
        for j in &joints {
            debug_assert_eq!(self.cluster_of[j.entry], j.cluster);
            debug_assert!(!std::mem::replace(&mut seen[j.cluster], true), "region meets a cluster twice");
        }
        Ok(Region {
            label,
            steps,
            perimeter,
            arcs: order.iter().map(|&i| arcs[i]).collect(),
            arc_positions,
            joints,
        })
    }

    /// Circle coordinate at loop position `s ∈ [0, r)` of region `label`.
    /// A position on a joint maps to the joint's entry vertex.
    pub fn loop_point(&self, label: usize, s: &Q) -> Q {
        let reg = &self.regions[label];
        for (a, p) in reg.arcs.iter().zip(&reg.arc_positions) {
            let mut d = s - p;
            if d.is_negative() {
                d += &reg.perimeter;
            }
            if d < self.arc_len(*a) {
                return frac(&(self.arc_start(*a) + d));
            }
        }
        unreachable!("position {s} outside region loop")
    }

    /// Loop position of circle point `x`, taken on the arc whose half-open
    /// span contains `x`; `None` if that arc is not in the region.
    pub fn loop_position(&self, label: usize, x: &Q) -> Option<Q> {
        let reg = &self.regions[label];
        let a = self.arc_at(x);
        let k = reg.arcs.iter().position(|&b| b == a)?;
        let mut p = &reg.arc_positions[k] + ccw(&self.arc_start(a), x);
        if p >= reg.perimeter {
            p -= &reg.perimeter;
        }
        Some(p)
    }

    /// Canonical representative of the marked chord diagram class.
    pub fn canonical(&self) -> MdClass {
        let marks = self
            .marks
            .iter()
            .enumerate()
            .map(|(i, z)| match self.vertices.binary_search(z) {
                Ok(v) => {
                    let j = self.regions[i]
                        .joints
                        .iter()
                        .find(|j| j.exit == v || j.entry == v)
                        .expect("mark vertex lies on a joint of its region");
                    self.vertices[j.exit.min(j.entry)].clone()
                }
                Err(_) => z.clone(),
            })
            .collect();
        MdClass { vertices: self.vertices.clone(), clusters: self.clusters.clone(), arc_labels: self.arc_labels.clone(), marks }
    }

    /// Relabels regions: region `i` becomes region `sigma[i]`.
    pub fn permute_labels(&self, sigma: &[usize]) -> ChordDiagram {
        let mut marks = vec![Q::zero(); self.n()];
        for (i, z) in self.marks.iter().enumerate() {
            marks[sigma[i]] = z.clone();
        }
        let labels = self.arc_labels.iter().map(|&l| sigma[l]).collect();
        ChordDiagram::new(self.chords.clone(), marks, Some(labels)).expect("relabeling preserves validity")
    }

    /// The unit: one region, no chords, mark at `u`.
    pub fn unit() -> ChordDiagram {
        ChordDiagram::new(Vec::new(), vec![Q::zero()], None).expect("unit")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "chords": self.chords.iter().map(|(a, b)| { let (x, y) = (pair(a), pair(b)); json!([x[0], x[1], y[0], y[1]]) }).collect::<Vec<_>>(),
            "marks": self.marks.iter().map(|z| json!(pair(z))).collect::<Vec<_>>(),
            "interval_labels": self.arc_labels.iter().map(|l| l + 1).collect::<Vec<_>>(),
        })
    }
}

fn pair(x: &Q) -> [i64; 2] {
    [x.numer().to_i64().expect("numerator fits i64"), x.denom().to_i64().expect("denominator fits i64")]
}

fn from_pair(num: &Value, den: &Value) -> Result<Q, ChordError> {
    let parse = |v: &Value| v.as_i64().ok_or_else(|| ChordError::Json(format!("expected integer, got {v}")));
    let (a, b) = (parse(num)?, parse(den)?);
    if b == 0 {
        return Err(ChordError::Json("zero denominator".into()));
    }
    Ok(Q::new(BigInt::from(a), BigInt::from(b)))
}

/// Parses `{"n", "chords": [[xn,xd,yn,yd]...], "marks": [[num,den]...],
/// "interval_labels"?: [1-based label per arc]}`.
pub fn diagram_from_value(v: &Value) -> Result<ChordDiagram, ChordError> {
    let obj = v.as_object().ok_or_else(|| ChordError::Json("expected an object".into()))?;
    let n = obj.get("n").and_then(Value::as_u64).ok_or_else(|| ChordError::Json("missing n".into()))? as usize;
    let empty = Vec::new();
    let chords_v = obj.get("chords").and_then(Value::as_array).unwrap_or(&empty);
    let mut chords = Vec::new();
    for c in chords_v {
        let c = c.as_array().filter(|c| c.len() == 4).ok_or_else(|| ChordError::Json("chord must be [xn,xd,yn,yd]".into()))?;
        chords.push((from_pair(&c[0], &c[1])?, from_pair(&c[2], &c[3])?));
    }
    let marks_v = obj.get("marks").and_then(Value::as_array).ok_or_else(|| ChordError::Json("missing marks".into()))?;
    let mut marks = Vec::new();
    for z in marks_v {
        let z = z.as_array().filter(|z| z.len() == 2).ok_or_else(|| ChordError::Json("mark must be [num,den]".into()))?;
        marks.push(from_pair(&z[0], &z[1])?);
    }
    if marks.len() != n {
        return Err(ChordError::MarkCount { expected: n, found: marks.len() });
    }
    let labels = match obj.get("interval_labels") {
        None | Some(Value::Null) => None,
        Some(Value::Array(ls)) => Some(
            ls.iter()
                .map(|l| l.as_u64().filter(|&l| l >= 1).map(|l| l as usize - 1).ok_or_else(|| ChordError::Json("labels are 1-based integers".into())))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        Some(_) => return Err(ChordError::Json("interval_labels must be an array".into())),
    };
    ChordDiagram::new(chords, marks, labels)
}

pub fn parse_diagram(text: &str) -> Result<ChordDiagram, ChordError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ChordError::Json(e.to_string()))?;
    diagram_from_value(&v)
}

/// Canonical form of a marked chord diagram class: the vertex set, the
/// cluster partition, the region label of each arc and the marks, with a
/// mark on a cluster vertex moved to the smaller of the two vertices where
/// its region passes through that cluster.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MdClass {
    pub vertices: Vec<Q>,
    pub clusters: Vec<Vec<usize>>,
    pub arc_labels: Vec<usize>,
    pub marks: Vec<Q>,
}

impl MdClass {
    pub fn n(&self) -> usize {
        self.marks.len()
    }

    /// A labeled diagram in the class: each cluster is joined by the path
    /// through its vertices in increasing order.
    pub fn representative(&self) -> ChordDiagram {
        let chords = self
            .clusters
            .iter()
            .flat_map(|c| c.windows(2).map(|w| (self.vertices[w[0]].clone(), self.vertices[w[1]].clone())))
            .collect();
        ChordDiagram::new(chords, self.marks.clone(), Some(self.arc_labels.clone())).expect("class representative is valid")
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.representative().to_json();
        v["clusters"] = json!(self.clusters.iter().map(|c| c.iter().map(|&i| pair(&self.vertices[i])).collect::<Vec<_>>()).collect::<Vec<_>>());
        v
    }
}

/// Operad composition: part `i` is rescaled to the perimeter of region `i`
/// and laid along its boundary loop from the mark `z_i`. Region `j` of part
/// `i` becomes region `k_1 + … + k_{i-1} + j` of the result.
pub fn compose(c: &ChordDiagram, parts: &[ChordDiagram]) -> Result<ChordDiagram, ChordError> {
    if parts.len() != c.n() {
        return Err(ChordError::Arity { expected: c.n(), found: parts.len() });
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0;
    for p in parts {
        offsets.push(total);
        total += p.n();
    }
    let mut chords = c.chords.clone();
    let mut marks = vec![Q::zero(); total];
    for (i, p) in parts.iter().enumerate() {
        let r = &c.regions[i].perimeter;
        let map = |t: &Q| c.loop_point(i, &(r * t));
        for (x, y) in &p.chords {
            chords.push((map(x), map(y)));
        }
        // a mark on a vertex is taken at the entry side of its joint, where
        // the region's image arcs begin
        for (j, slot) in marks[offsets[i]..offsets[i] + p.n()].iter_mut().enumerate() {
            *slot = map(&p.loop_point(j, &Q::zero()));
        }
    }
    // label each arc of the composite by pulling back its midpoint
    let mut vertices: Vec<Q> = chords.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    vertices.sort();
    vertices.dedup();
    let m = vertices.len();
    let arcs = m.max(1);
    let mut labels = Vec::with_capacity(arcs);
    for a in 0..arcs {
        let mid = if m == 0 {
            q(1, 2)
        } else {
            let len = {
                let d = ccw(&vertices[a], &vertices[(a + 1) % m]);
                if d.is_zero() { Q::one() } else { d }
            };
            frac(&(&vertices[a] + len / Q::from_integer(2.into())))
        };
        let i = c.arc_labels[c.arc_at(&mid)];
        let s = c.loop_position(i, &mid).expect("midpoint lies in its region");
        let t = s / &c.regions[i].perimeter;
        let p = &parts[i];
        labels.push(offsets[i] + p.arc_labels[p.arc_at(&t)]);
    }
    ChordDiagram::new(chords, marks, Some(labels))
}

/// Composition on canonical classes.
pub fn compose_classes(c: &MdClass, parts: &[MdClass]) -> Result<MdClass, ChordError> {
    let reps: Vec<ChordDiagram> = parts.iter().map(MdClass::representative).collect();
    Ok(compose(&c.representative(), &reps)?.canonical())
}

fn random_point<R: Rng + ?Sized>(rng: &mut R, den: i64) -> Q {
    q(rng.gen_range(0..den), den)
}

/// Vertices, endpoint indices and faces of a chord set, without validation.
fn skeleton_faces(chords: &[(Q, Q)]) -> (Vec<Q>, Vec<Vec<Step>>) {
    let mut vertices: Vec<Q> = chords.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    vertices.sort();
    vertices.dedup();
    let ends = chords
        .iter()
        .map(|(a, b)| (vertices.binary_search(a).unwrap(), vertices.binary_search(b).unwrap()))
        .collect();
    let d = ChordDiagram {
        chords: chords.to_vec(),
        marks: Vec::new(),
        vertices,
        ends,
        cluster_of: Vec::new(),
        clusters: Vec::new(),
        arc_labels: Vec::new(),
        regions: Vec::new(),
    };
    let faces = d.trace_faces();
    (d.vertices, faces)
}

/// A random valid diagram with `n` regions: endpoints on a random grid
/// (so coincident endpoints occur), chords added by rejection, marks placed
/// on the closed boundary of each region and a random region labeling.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ChordDiagram {
    assert!(n >= 1);
    const DENS: [i64; 6] = [6, 8, 10, 12, 16, 24];
    let den = DENS[rng.gen_range(0..DENS.len())].max(2 * n as i64);
    let mut chords: Vec<(Q, Q)> = Vec::new();
    while chords.len() + 1 < n {
        let (a, b) = (random_point(rng, den), random_point(rng, den));
        if a == b || chords.iter().any(|(c, d)| chords_cross(&a, &b, c, d)) {
            continue;
        }
        // reject chords closing a cycle
        let mut parent: BTreeMap<Q, Q> = BTreeMap::new();
        let root = |parent: &BTreeMap<Q, Q>, mut x: Q| {
            while let Some(p) = parent.get(&x) {
                x = p.clone();
            }
            x
        };
        for (c, d) in &chords {
            let (rc, rd) = (root(&parent, c.clone()), root(&parent, d.clone()));
            if rc != rd {
                parent.insert(rc, rd);
            }
        }
        if root(&parent, a.clone()) != root(&parent, b.clone()) {
            chords.push((a, b));
        }
    }
    let (vertices, faces) = skeleton_faces(&chords);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let m = vertices.len();
    let mut arc_labels = vec![0; m.max(1)];
    let mut marks = vec![Q::zero(); n];
    for (f, steps) in faces.iter().enumerate() {
        let arcs: Vec<usize> = steps.iter().filter_map(|s| if let Step::Arc(a) = s { Some(*a) } else { None }).collect();
        for &a in &arcs {
            arc_labels[a] = perm[f];
        }
        let a = arcs[rng.gen_range(0..arcs.len())];
        let (start, len) = if m == 0 {
            (Q::zero(), Q::one())
        } else {
            let d = ccw(&vertices[a], &vertices[(a + 1) % m]);
            (vertices[a].clone(), d)
        };
        // closed arc: both endpoints may be chosen
        let k = rng.gen_range(0..=4);
        marks[perm[f]] = frac(&(start + len * q(k, 4)));
    }
    ChordDiagram::new(chords, marks, Some(arc_labels)).expect("random diagram is valid")
}

//! Finite groups stored as full multiplication tables, finite right G-sets,
//! conjugacy data and the holonomy action on circle bundles.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::GroupError;

/// Index of a group element. `0` is always the identity.
pub type Element = usize;

/// Identity element index.
pub const IDENTITY: Element = 0;

/// Largest group order accepted when closing permutation generators.
pub const MAX_ORDER: usize = 5040;

/// A finite group given by its complete multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mult: Vec<Element>,
    inv: Vec<Element>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

impl FiniteGroup {
    /// Builds a group from a multiplication table, checking that element `0`
    /// is the identity, that the table is a Latin square and that it is
    /// associative.
    pub fn from_table(name: impl Into<String>, rows: &[Vec<Element>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::EmptyTable);
        }
        let mut mult = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare { row: i, len: row.len(), order: n });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::EntryOutOfRange { row: i, col: j, value: v });
                }
            }
            mult.extend_from_slice(row);
        }
        for x in 0..n {
            if mult[x] != x || mult[x * n] != x {
                return Err(GroupError::IdentityNotZero { element: x });
            }
        }
        let mut seen = vec![false; n];
        for r in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for c in 0..n {
                let v = mult[r * n + c];
                if std::mem::replace(&mut seen[v], true) {
                    return Err(GroupError::NotLatin { line: format!("row {r}") });
                }
            }
        }
        for c in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for r in 0..n {
                let v = mult[r * n + c];
                if std::mem::replace(&mut seen[v], true) {
                    return Err(GroupError::NotLatin { line: format!("column {c}") });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mult[a * n + b];
                for c in 0..n {
                    if mult[ab * n + c] != mult[a * n + mult[b * n + c]] {
                        return Err(GroupError::NonAssociative { a, b, c });
                    }
                }
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n).find(|&b| mult[a * n + b] == IDENTITY).expect("latin square");
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(FiniteGroup { name: name.into(), order: n, mult, inv, labels })
    }

    /// Closes a set of permutations (one-line image notation on `0..k`) into
    /// a group. Elements are the generated permutations in lexicographic
    /// order, so the identity permutation is element `0` and the indexing
    /// does not depend on the order of the generators.
    pub fn from_permutations(name: impl Into<String>, gens: &[Vec<usize>]) -> Result<Self, GroupError> {
        let degree = gens.first().map_or(0, Vec::len);
        for (i, p) in gens.iter().enumerate() {
            if p.len() != degree {
                return Err(GroupError::MismatchedDegree { generator: i });
            }
            let mut hit = vec![false; degree];
            for &x in p {
                if x >= degree || std::mem::replace(&mut hit[x], true) {
                    return Err(GroupError::InvalidPermutation { generator: i });
                }
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = compose_perms(&p, g);
                if found.insert(q.clone()) {
                    if found.len() > MAX_ORDER {
                        return Err(GroupError::TooLarge { limit: MAX_ORDER });
                    }
                    queue.push_back(q);
                }
            }
        }
        let perms: Vec<Vec<usize>> = found.into_iter().collect();
        let index: BTreeMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let rows: Vec<Vec<Element>> = perms
            .iter()
            .map(|p| perms.iter().map(|q| index[compose_perms(p, q).as_slice()]).collect())
            .collect();
        let mut group = FiniteGroup::from_table(name, &rows)?;
        group.labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Ok(group)
    }

    /// The cyclic group `Z_n`; element `k` is the residue `k`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        let rows: Vec<Vec<Element>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(format!("Z{n}"), &rows).expect("cyclic table is a group")
    }

    /// The symmetric group on `k` letters.
    pub fn symmetric(k: usize) -> Self {
        let mut gens = Vec::new();
        if k >= 2 {
            let mut t: Vec<usize> = (0..k).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..k).map(|i| (i + 1) % k).collect());
        }
        FiniteGroup::from_permutations(format!("S{k}"), &gens).expect("symmetric group")
    }

    /// The dihedral group of order 8 acting on the vertices of a square.
    pub fn dihedral4() -> Self {
        FiniteGroup::from_permutations("D4", &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).expect("D4")
    }

    /// The quaternion group; element `2u + s` is `(-1)^s` times the unit
    /// `u` in `1, i, j, k`.
    pub fn quaternion() -> Self {
        // unit products as (sign, unit) for 1, i, j, k
        const T: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let rows: Vec<Vec<Element>> = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (s, u) = T[a / 2][b / 2];
                        2 * u + ((s + a % 2 + b % 2) % 2)
                    })
                    .collect()
            })
            .collect();
        let mut g = FiniteGroup::from_table("Q8", &rows).expect("Q8");
        let names = ["1", "i", "j", "k"];
        g.labels = (0..8)
            .map(|x| format!("{}{}", if x % 2 == 1 { "-" } else { "" }, names[x / 2]))
            .collect();
        g
    }

    /// Direct product; element `(a, b)` has index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let nb = b.order;
        let n = a.order * nb;
        let rows: Vec<Vec<Element>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        let mut g = FiniteGroup::from_table(format!("{}x{}", a.name, b.name), &rows)
            .expect("product of groups is a group");
        g.labels = (0..n).map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb])).collect();
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inv[a]
    }

    /// `h⁻¹ q h`.
    #[inline]
    pub fn conj(&self, q: Element, h: Element) -> Element {
        self.mul(self.inv[h], self.mul(q, h))
    }

    /// Product of a word, left to right.
    pub fn product<I: IntoIterator<Item = Element>>(&self, word: I) -> Element {
        word.into_iter().fold(IDENTITY, |acc, x| self.mul(acc, x))
    }

    pub fn label(&self, a: Element) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Finds an element by its label.
    pub fn find_label(&self, label: &str) -> Option<Element> {
        let key: String = label.chars().filter(|c| !c.is_whitespace()).collect();
        self.labels.iter().position(|l| *l == key)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: Element) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != IDENTITY {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exponent of the group (lcm of element orders).
    pub fn exponent(&self) -> usize {
        self.elements().map(|a| self.element_order(a)).fold(1, num_integer::lcm)
    }

    /// Sorted elements commuting with `g`.
    pub fn centralizer(&self, g: Element) -> Vec<Element> {
        self.elements().filter(|&h| self.mul(g, h) == self.mul(h, g)).collect()
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[Element]) -> Vec<Element> {
        let mut found = BTreeSet::from([IDENTITY]);
        let mut queue = VecDeque::from([IDENTITY]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if found.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        found.into_iter().collect()
    }

    /// Restricts the table to a subgroup. Returns the subgroup as a group of
    /// its own together with the embedding (new index to old index).
    pub fn subgroup(&self, name: impl Into<String>, elements: &[Element]) -> Result<(FiniteGroup, Vec<Element>), GroupError> {
        let set: BTreeSet<Element> = elements.iter().copied().collect();
        if !set.contains(&IDENTITY) {
            return Err(GroupError::NotSubgroup);
        }
        let embed: Vec<Element> = set.iter().copied().collect();
        let pos: BTreeMap<Element, usize> = embed.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut rows = Vec::with_capacity(embed.len());
        for &a in &embed {
            let mut row = Vec::with_capacity(embed.len());
            for &b in &embed {
                match pos.get(&self.mul(a, b)) {
                    Some(&i) => row.push(i),
                    None => return Err(GroupError::NotSubgroup),
                }
            }
            rows.push(row);
        }
        let mut sub = FiniteGroup::from_table(name, &rows)?;
        sub.labels = embed.iter().map(|&e| self.labels[e].clone()).collect();
        Ok((sub, embed))
    }

    /// The full table, row-major.
    pub fn table(&self) -> Vec<Vec<Element>> {
        self.mult.chunks(self.order).map(<[Element]>::to_vec).collect()
    }
}

/// `(p * q)[i] = q[p[i]]`: apply `p` first. Matches the right-action
/// convention used for G-sets.
pub fn compose_perms(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}

/// One-based cycle notation, e.g. `(1,3,2)`; the identity is `()`.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        out.push('(');
        out.push_str(&cycle.join(","));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// The G-action on `Bun_G(S¹) ≅ G` under the holonomy isomorphism:
/// conjugation `q ↦ h⁻¹ q h`.
pub fn bun_holonomy_action(group: &FiniteGroup, q: Element, h: Element) -> Element {
    group.conj(q, h)
}

/// Conjugacy classes with least-index representatives and centralizers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyData {
    pub classes: Vec<Vec<Element>>,
    pub reps: Vec<Element>,
    pub centralizers: Vec<Vec<Element>>,
    #[serde(skip)]
    class_of: Vec<usize>,
}

impl ConjugacyData {
    pub fn class_of(&self, g: Element) -> usize {
        self.class_of[g]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

pub fn conjugacy_classes(group: &FiniteGroup) -> ConjugacyData {
    let n = group.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    let mut reps = Vec::new();
    let mut centralizers = Vec::new();
    for g in group.elements() {
        if class_of[g] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let orbit: BTreeSet<Element> = group.elements().map(|h| group.conj(g, h)).collect();
        for &x in &orbit {
            class_of[x] = id;
        }
        classes.push(orbit.into_iter().collect());
        reps.push(g);
        centralizers.push(group.centralizer(g));
    }
    ConjugacyData { classes, reps, centralizers, class_of }
}

/// A finite set with a right action of a finite group.
#[derive(Clone, PartialEq, Eq)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    size: usize,
    act: Vec<usize>,
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GSet")
            .field("group", &self.group.name())
            .field("size", &self.size)
            .finish()
    }
}

impl GSet {
    /// `rows[m][g] = m·g`.
    pub fn new(group: Arc<FiniteGroup>, rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        let size = rows.len();
        if size == 0 {
            return Err(GroupError::EmptyTable);
        }
        let n = group.order();
        let mut act = Vec::with_capacity(size * n);
        for (m, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare { row: m, len: row.len(), order: n });
            }
            for (g, &v) in row.iter().enumerate() {
                if v >= size {
                    return Err(GroupError::EntryOutOfRange { row: m, col: g, value: v });
                }
            }
            act.extend_from_slice(row);
        }
        for m in 0..size {
            if act[m * n] != m {
                return Err(GroupError::ActionIdentity { point: m });
            }
            for g in 0..n {
                let mg = act[m * n + g];
                for h in 0..n {
                    if act[mg * n + h] != act[m * n + group.mul(g, h)] {
                        return Err(GroupError::NotAnAction { point: m, g, h });
                    }
                }
            }
        }
        Ok(GSet { group, size, act })
    }

    /// The one-point G-set.
    pub fn point(group: Arc<FiniteGroup>) -> Self {
        let rows = vec![vec![0; group.order()]];
        GSet::new(group, &rows).expect("trivial action")
    }

    /// `k` points with the trivial action.
    pub fn trivial(group: Arc<FiniteGroup>, k: usize) -> Self {
        let rows: Vec<Vec<usize>> = (0..k).map(|m| vec![m; group.order()]).collect();
        GSet::new(group, &rows).expect("trivial action")
    }

    /// G acting on itself by right translation.
    pub fn right_regular(group: Arc<FiniteGroup>) -> Self {
        let rows = group.table();
        GSet::new(group, &rows).expect("right translation is an action")
    }

    /// Right cosets `Hk` of a subgroup, with `Hk · g = H(kg)`. Cosets are
    /// numbered by their least element.
    pub fn cosets(group: Arc<FiniteGroup>, subgroup: &[Element]) -> Result<Self, GroupError> {
        let n = group.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut count = 0;
        for k in 0..n {
            if coset_of[k] != usize::MAX {
                continue;
            }
            for &h in subgroup {
                let x = group.mul(h, k);
                if coset_of[x] != usize::MAX {
                    return Err(GroupError::NotSubgroup);
                }
                coset_of[x] = count;
            }
            count += 1;
        }
        let reps: Vec<Element> = (0..count)
            .map(|c| (0..n).find(|&k| coset_of[k] == c).expect("nonempty coset"))
            .collect();
        let rows: Vec<Vec<usize>> =
            reps.iter().map(|&k| (0..n).map(|g| coset_of[group.mul(k, g)]).collect()).collect();
        GSet::new(group, &rows)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, m: usize, g: Element) -> usize {
        self.act[m * self.group.order() + g]
    }

    /// `{m : m·g = m}`, ascending.
    pub fn fixed_points(&self, g: Element) -> Vec<usize> {
        (0..self.size).filter(|&m| self.act(m, g) == m).collect()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.act.chunks(self.group.order()).map(<[usize]>::to_vec).collect()
    }
}

/// JSON form of a group: either a full table or permutation generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDoc {
    Table { name: String, order: usize, mult: Vec<Vec<Element>> },
    Permutations { name: String, perm_gens: Vec<Vec<usize>> },
}

impl GroupDoc {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupDoc::Table { name, order, mult } => {
                if *order != mult.len() {
                    return Err(GroupError::OrderMismatch { declared: *order, rows: mult.len() });
                }
                FiniteGroup::from_table(name.clone(), mult)
            }
            GroupDoc::Permutations { name, perm_gens } => FiniteGroup::from_permutations(name.clone(), perm_gens),
        }
    }
}

#[derive(Serialize)]
struct GroupOut<'a> {
    name: &'a str,
    order: usize,
    mult: Vec<Vec<Element>>,
    labels: &'a [String],
}

/// Serializes a group to its table form (plus element labels).
pub fn group_to_json(group: &FiniteGroup) -> Value {
    serde_json::to_value(GroupOut {
        name: group.name(),
        order: group.order(),
        mult: group.table(),
        labels: group.labels(),
    })
    .expect("serializable")
}

pub fn parse_group(text: &str) -> Result<FiniteGroup, GroupError> {
    let value: Value = serde_json::from_str(text)?;
    group_from_value(&value, &|name| crate::catalog::group(name))
}

/// Accepts a catalog name (string) or an inline group object.
pub fn group_from_value(
    value: &Value,
    resolve: &dyn Fn(&str) -> Result<FiniteGroup, GroupError>,
) -> Result<FiniteGroup, GroupError> {
    match value {
        Value::String(name) => resolve(name),
        other => {
            let doc: GroupDoc = serde_json::from_value(other.clone())?;
            doc.build()
        }
    }
}

#[derive(Deserialize)]
struct GSetDoc {
    group: Value,
    size: usize,
    act: Vec<Vec<usize>>,
}

pub fn parse_gset(text: &str) -> Result<GSet, GroupError> {
    parse_gset_with(text, &|name| crate::catalog::group(name))
}

pub fn parse_gset_with(text: &str, resolve: &dyn Fn(&str) -> Result<FiniteGroup, GroupError>) -> Result<GSet, GroupError> {
    let doc: GSetDoc = serde_json::from_str(text)?;
    let group = Arc::new(group_from_value(&doc.group, resolve)?);
    if doc.size != doc.act.len() {
        return Err(GroupError::OrderMismatch { declared: doc.size, rows: doc.act.len() });
    }
    GSet::new(group, &doc.act)
}

pub fn gset_to_json(x: &GSet) -> Value {
    serde_json::json!({
        "group": x.group().name(),
        "size": x.size(),
        "act": x.rows(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::symmetric(3)
    }

    #[test]
    fn s3_labels_are_lexicographic_permutations() {
        let g = s3();
        assert_eq!(g.order(), 6);
        let labels: Vec<&str> = g.labels().iter().map(String::as_str).collect();
        assert_eq!(labels, ["()", "(2,3)", "(1,2)", "(1,2,3)", "(1,3,2)", "(1,3)"]);
    }

    #[test]
    fn conjugacy_classes_of_small_groups() {
        let trivial = FiniteGroup::cyclic(1);
        let cd = conjugacy_classes(&trivial);
        assert_eq!(cd.classes, vec![vec![0]]);
        assert_eq!(cd.centralizers, vec![vec![0]]);

        let g = s3();
        let cd = conjugacy_classes(&g);
        let sizes: Vec<usize> = cd.classes.iter().map(Vec::len).collect();
        assert_eq!(sizes, [1, 3, 2]);
        let t = g.find_label("(1,2)").unwrap();
        assert_eq!(cd.centralizers[cd.class_of(t)].len(), 2);
        assert_eq!(cd.reps, [0, 1, 3]);

        let z4 = FiniteGroup::cyclic(4);
        let cd = conjugacy_classes(&z4);
        assert_eq!(cd.len(), 4);
        assert!(cd.centralizers.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn conjugacy_matches_brute_force_pairs() {
        for g in [s3(), FiniteGroup::dihedral4(), FiniteGroup::quaternion(), FiniteGroup::symmetric(4)] {
            let cd = conjugacy_classes(&g);
            for a in g.elements() {
                for b in g.elements() {
                    let conjugate = g.elements().any(|h| g.mul(g.inv(h), g.mul(a, h)) == b);
                    assert_eq!(conjugate, cd.class_of(a) == cd.class_of(b));
                }
            }
            for (class, cent) in cd.classes.iter().zip(&cd.centralizers) {
                assert_eq!(class.len() * cent.len(), g.order());
            }
        }
    }

    #[test]
    fn holonomy_action_is_conjugation() {
        let g = s3();
        let q = g.find_label("(1,2)").unwrap();
        let h = g.find_label("(1,2,3)").unwrap();
        assert_eq!(bun_holonomy_action(&g, q, h), g.find_label("(2,3)").unwrap());
        assert_eq!(bun_holonomy_action(&g, q, IDENTITY), q);
        let z5 = FiniteGroup::cyclic(5);
        for a in z5.elements() {
            for b in z5.elements() {
                assert_eq!(bun_holonomy_action(&z5, a, b), a);
            }
        }
    }

    #[test]
    fn fixed_points_examples() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let point = GSet::point(z2.clone());
        assert_eq!(point.fixed_points(1), vec![0]);
        let reg = GSet::right_regular(Arc::new(s3()));
        for g in 1..6 {
            assert!(reg.fixed_points(g).is_empty());
        }
        let x = GSet::new(z2, &[vec![0, 1], vec![1, 0], vec![2, 2]]).unwrap();
        assert_eq!(x.fixed_points(1), vec![2]);
        assert_eq!(x.fixed_points(0), vec![0, 1, 2]);
    }

    #[test]
    fn perm_closure_and_errors() {
        let g = parse_group(r#"{"name": "S3", "perm_gens": [[1,0,2],[1,2,0]]}"#).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g, s3().with_name("S3"));

        let mut rows = FiniteGroup::cyclic(3).table();
        rows[1][2] = 1;
        rows[1][1] = 0;
        let err = FiniteGroup::from_table("bad", &rows).unwrap_err();
        assert!(matches!(err, GroupError::NotLatin { .. } | GroupError::NonAssociative { .. }));

        // A Latin square with identity 0 that is not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_table("loop", &loop5) {
            Err(GroupError::NonAssociative { a, b, c }) => {
                let m = |x: usize, y: usize| loop5[x][y];
                assert_ne!(m(m(a, b), c), m(a, m(b, c)));
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }
        assert!(parse_group("{not json").is_err());
    }

    #[test]
    fn action_validation_reports_offender() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let err = GSet::new(z2.clone(), &[vec![1, 0], vec![0, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::ActionIdentity { point: 0 }));
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        let err = GSet::new(z3, &[vec![0, 1, 1], vec![1, 0, 0]]).unwrap_err();
        assert!(matches!(err, GroupError::NotAnAction { .. }));
    }

    #[test]
    fn gset_json_round_trip() {
        let text = r#"{"group": "Z2", "size": 3, "act": [[0,1],[1,0],[2,2]]}"#;
        let x = parse_gset(text).unwrap();
        let back = parse_gset(&gset_to_json(&x).to_string()).unwrap();
        assert_eq!(x, back);
        let inline = r#"{"group": {"name": "Z2", "order": 2, "mult": [[0,1],[1,0]]}, "size": 1, "act": [[0,0]]}"#;
        assert_eq!(parse_gset(inline).unwrap().size(), 1);
    }

    #[test]
    fn cosets_of_s3() {
        let g = Arc::new(s3());
        let h = g.generated_subgroup(&[g.find_label("(1,2)").unwrap()]);
        let x = GSet::cosets(g.clone(), &h).unwrap();
        assert_eq!(x.size(), 3);
        // The stabilizer of the coset H is H.
        let stab: Vec<Element> = g.elements().filter(|&k| x.act(0, k) == 0).collect();
        assert_eq!(stab, h);
    }
}

//! Finite abstract simplicial complexes stored as explicit face families.
//!
//! A complex lives on an ordered universe of at most [`MAX_UNIVERSE`] labeled
//! vertices. The VOID complex (no faces at all) and the EMPTY complex (only
//! the empty face) are distinct values.

use std::collections::HashSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, Error, Result};
use crate::geomkernel::{in_conv, PointConfig};
use crate::vset::{VSet, MAX_UNIVERSE};

/// Membership bitmap over all subsets of an `n`-element universe.
#[derive(Clone, PartialEq, Eq)]
struct SubsetBits(Vec<u64>);

impl SubsetBits {
    fn new(n: usize) -> Self {
        SubsetBits(vec![0; ((1usize << n) + 63) / 64])
    }

    #[inline]
    fn get(&self, s: VSet) -> bool {
        let i = s.0 as usize;
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, s: VSet) {
        let i = s.0 as usize;
        self.0[i >> 6] |= 1 << (i & 63);
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SComplex {
    universe: Vec<String>,
    faces: Vec<VSet>,
    bits: SubsetBits,
    vertex_set: VSet,
}

fn check_universe(universe: &[String]) -> Result<()> {
    if universe.len() > MAX_UNIVERSE {
        return input(format!("universe has {} vertices, the limit is {MAX_UNIVERSE}", universe.len()));
    }
    let mut seen = HashSet::new();
    for l in universe {
        if !seen.insert(l.as_str()) {
            return input(format!("duplicate vertex label {l:?}"));
        }
    }
    Ok(())
}

/// Face-count cap for materialized complexes: `CARATHE_MAX_FACES` if set,
/// otherwise `2^20`.
pub fn max_faces() -> usize {
    std::env::var("CARATHE_MAX_FACES").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(1 << 20)
}

/// Labels `"0", "1", ..., "n-1"`.
pub fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl SComplex {
    /// Builds a complex from a face list that is already known to be downward
    /// closed. Faces are deduplicated and sorted.
    fn from_closed_faces(universe: Vec<String>, mut faces: Vec<VSet>) -> Self {
        faces.sort_unstable();
        faces.dedup();
        let mut bits = SubsetBits::new(universe.len());
        let mut vertex_set = VSet::EMPTY;
        for &f in &faces {
            bits.set(f);
            if f.len() == 1 {
                vertex_set = vertex_set.union(f);
            }
        }
        SComplex { universe, faces, bits, vertex_set }
    }

    pub fn void(universe: Vec<String>) -> Result<Self> {
        check_universe(&universe)?;
        Ok(SComplex::from_closed_faces(universe, Vec::new()))
    }

    pub fn empty(universe: Vec<String>) -> Result<Self> {
        check_universe(&universe)?;
        Ok(SComplex::from_closed_faces(universe, vec![VSet::EMPTY]))
    }

    /// The full simplex on the universe.
    pub fn simplex(universe: Vec<String>) -> Result<Self> {
        check_universe(&universe)?;
        let faces = VSet::full(universe.len()).subsets().collect();
        Ok(SComplex::from_closed_faces(universe, faces))
    }

    /// The boundary of the full simplex on the universe.
    pub fn boundary(universe: Vec<String>) -> Result<Self> {
        check_universe(&universe)?;
        let all = VSet::full(universe.len());
        let faces = all.subsets().filter(|&f| f != all).collect();
        Ok(SComplex::from_closed_faces(universe, faces))
    }

    /// The downward closure of the given facets.
    pub fn from_facets(universe: Vec<String>, facets: &[VSet]) -> Result<Self> {
        check_universe(&universe)?;
        let all = VSet::full(universe.len());
        let mut seen = SubsetBits::new(universe.len());
        let mut faces = Vec::new();
        for &f in facets {
            if !f.is_subset(all) {
                return input(format!("facet {f} uses vertices outside the universe"));
            }
            if seen.get(f) {
                continue;
            }
            for s in f.subsets() {
                if !seen.get(s) {
                    seen.set(s);
                    faces.push(s);
                }
            }
        }
        if facets.is_empty() {
            faces.push(VSet::EMPTY);
        }
        Ok(SComplex::from_closed_faces(universe, faces))
    }

    /// Faces are exactly the sets accepted by `pred`, which must be downward
    /// closed; every subset of the universe is tested.
    pub fn from_predicate(universe: Vec<String>, pred: impl Fn(VSet) -> bool) -> Result<Self> {
        check_universe(&universe)?;
        let n = universe.len();
        let mut acc = SubsetBits::new(n);
        let mut faces = Vec::new();
        for s in VSet::full(n).subsets() {
            if pred(s) {
                acc.set(s);
                faces.push(s);
            }
        }
        for &f in &faces {
            for v in f.iter() {
                let sub = f.remove(v);
                if !acc.get(sub) {
                    return Err(Error::NotDownwardClosed {
                        superset: format_labels(&universe, f),
                        subset: format_labels(&universe, sub),
                    });
                }
            }
        }
        Ok(SComplex::from_closed_faces(universe, faces))
    }

    /// Like [`SComplex::from_predicate`] for a predicate known to be downward
    /// closed: candidates are grown level by level and a set is only tested
    /// once all of its codimension-one subsets are faces.
    pub fn from_monotone(universe: Vec<String>, within: VSet, pred: impl Fn(VSet) -> bool) -> Result<Self> {
        check_universe(&universe)?;
        let n = universe.len();
        if !pred(VSet::EMPTY) {
            return Ok(SComplex::from_closed_faces(universe, Vec::new()));
        }
        let verts: Vec<usize> = within.intersection(VSet::full(n)).to_vec();
        let mut acc = SubsetBits::new(n);
        acc.set(VSet::EMPTY);
        let mut faces = vec![VSet::EMPTY];
        let mut level = vec![VSet::EMPTY];
        while !level.is_empty() {
            let mut next = Vec::new();
            for &f in &level {
                let top = f.iter().last();
                for &v in &verts {
                    if top.is_some_and(|t| v <= t) {
                        continue;
                    }
                    let c = f.insert(v);
                    if f.iter().all(|w| acc.get(c.remove(w))) && pred(c) {
                        next.push(c);
                    }
                }
            }
            for &c in &next {
                acc.set(c);
            }
            faces.extend_from_slice(&next);
            level = next;
        }
        Ok(SComplex::from_closed_faces(universe, faces))
    }

    /// `{U : 0 not in conv A(U)}` on the configuration's vertices.
    pub fn zero_avoiding(cfg: &PointConfig) -> SComplex {
        SComplex::from_monotone(index_labels(cfg.len()), cfg.universe(), |u| {
            u.is_empty() || in_conv(cfg, u).expect("nonempty subset").is_none()
        })
        .expect("configuration size is bounded")
    }

    /// `{F subset of U : 0 in conv A(V - F)}`, built straight from the
    /// definition rather than by inducing the Alexander dual. The universe is
    /// that of the configuration.
    pub fn dual_induced_by_definition(cfg: &PointConfig, u: VSet) -> Result<SComplex> {
        let all = cfg.universe();
        if !u.is_subset(all) {
            return input(format!("{u} is not a subset of the configuration vertices"));
        }
        SComplex::from_monotone(index_labels(cfg.len()), u, |f| {
            let rest = all.difference(f);
            !rest.is_empty() && in_conv(cfg, rest).expect("nonempty subset").is_some()
        })
    }

    #[inline]
    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.universe.len()
    }

    pub fn universe_set(&self) -> VSet {
        VSet::full(self.n())
    }

    /// All faces in increasing bit order.
    #[inline]
    pub fn faces(&self) -> &[VSet] {
        &self.faces
    }

    #[inline]
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    #[inline]
    pub fn contains(&self, f: VSet) -> bool {
        f.is_subset(self.universe_set()) && self.bits.get(f)
    }

    #[inline]
    pub fn vertex_set(&self) -> VSet {
        self.vertex_set
    }

    pub fn is_void(&self) -> bool {
        self.faces.is_empty()
    }

    /// True for the complex whose only face is the empty set.
    pub fn is_empty_complex(&self) -> bool {
        self.faces.len() == 1
    }

    pub fn is_simplex(&self) -> bool {
        self.contains(self.universe_set())
    }

    /// Dimension; `-1` for EMPTY and `None` for VOID.
    pub fn dim(&self) -> Option<isize> {
        self.faces.iter().map(|f| f.len() as isize - 1).max()
    }

    /// Maximal faces, ordered by size then lexicographically.
    pub fn facets(&self) -> Vec<VSet> {
        let all = self.universe_set();
        let mut out: Vec<VSet> = self
            .faces
            .iter()
            .copied()
            .filter(|&f| all.difference(f).iter().all(|v| !self.bits.get(f.insert(v))))
            .collect();
        out.sort_by_key(|f| f.card_lex_key());
        out
    }

    pub fn label(&self, v: usize) -> &str {
        &self.universe[v]
    }

    pub fn labels_of(&self, f: VSet) -> Vec<String> {
        f.iter().map(|v| self.universe[v].clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.universe.iter().position(|l| l == label)
    }

    /// `K[U]` on the restricted universe `U` (vertices keep their relative order).
    pub fn induced(&self, u: VSet) -> Result<SComplex> {
        if !u.is_subset(self.universe_set()) {
            return input(format!("{u} is not a subset of the universe"));
        }
        let keep = u.to_vec();
        let universe = keep.iter().map(|&v| self.universe[v].clone()).collect();
        let faces = self.faces.iter().filter(|f| f.is_subset(u)).map(|&f| compress(f, &keep)).collect();
        Ok(SComplex::from_closed_faces(universe, faces))
    }

    /// `K[U]` kept on the full universe.
    pub fn restrict(&self, u: VSet) -> SComplex {
        let faces = self.faces.iter().copied().filter(|f| f.is_subset(u)).collect();
        SComplex::from_closed_faces(self.universe.clone(), faces)
    }

    /// `K* = {F : V - F not in K}` on the same universe.
    pub fn alexander_dual(&self) -> SComplex {
        let all = self.universe_set();
        let faces = all.subsets().filter(|&g| !self.bits.get(g)).map(|g| all.difference(g)).collect();
        SComplex::from_closed_faces(self.universe.clone(), faces)
    }

    /// `K1 * K2` on the concatenated universe; the second factor's vertices
    /// are shifted past the first factor's.
    pub fn join(&self, other: &SComplex) -> Result<SComplex> {
        let labels: HashSet<&str> = self.universe.iter().map(String::as_str).collect();
        if let Some(l) = other.universe.iter().find(|l| labels.contains(l.as_str())) {
            return input(format!("join factors share the vertex label {l:?}"));
        }
        let shift = self.n();
        let universe: Vec<String> = self.universe.iter().chain(&other.universe).cloned().collect();
        check_universe(&universe)?;
        let mut faces = Vec::with_capacity(self.faces.len() * other.faces.len());
        for &a in &self.faces {
            for &b in &other.faces {
                faces.push(VSet(a.0 | (b.0 << shift)));
            }
        }
        Ok(SComplex::from_closed_faces(universe, faces))
    }

    /// Same faces with the universe relabeled.
    pub fn relabel(&self, universe: Vec<String>) -> Result<SComplex> {
        if universe.len() != self.n() {
            return input("relabeling must keep the universe size");
        }
        check_universe(&universe)?;
        Ok(SComplex { universe, ..self.clone() })
    }

    /// Whether the 1-skeleton connects all vertices (and there is at least one).
    pub fn is_path_connected(&self) -> Result<bool> {
        if self.is_void() {
            return input("path-connectivity of the VOID complex is undefined");
        }
        if self.vertex_set.is_empty() {
            return Ok(false);
        }
        let mut parent: Vec<usize> = (0..self.n()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for f in self.faces.iter().filter(|f| f.len() == 2) {
            let v = f.to_vec();
            let (a, b) = (find(&mut parent, v[0]), find(&mut parent, v[1]));
            parent[a] = b;
        }
        let mut roots = self.vertex_set.iter().map(|v| find(&mut parent, v));
        let r0 = roots.next().expect("nonempty vertex set");
        Ok(roots.all(|r| r == r0))
    }

    /// The augmentation property: for faces `F`, `F'` with `|F| < |F'|` some
    /// `v in F' - F` has `F + v` a face. Checking `|F'| = |F| + 1` suffices.
    pub fn is_matroid(&self) -> bool {
        if self.is_void() {
            return false;
        }
        let max = self.faces.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut by_size: Vec<Vec<VSet>> = vec![Vec::new(); max + 1];
        for &f in &self.faces {
            by_size[f.len()].push(f);
        }
        for k in 0..max {
            for &f in &by_size[k] {
                for &g in &by_size[k + 1] {
                    if !g.difference(f).iter().any(|v| self.bits.get(f.insert(v))) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Size of the largest face inside `S`.
    pub fn max_face_within(&self, s: VSet) -> usize {
        self.faces.iter().filter(|f| f.is_subset(s)).map(|f| f.len()).max().unwrap_or(0)
    }

    /// `rho(S) = dim M[S] + 1` for a nonempty `S`.
    pub fn matroid_rank(&self, s: VSet) -> Result<usize> {
        if s.is_empty() {
            return input("matroid rank is defined on nonempty sets only");
        }
        if !s.is_subset(self.universe_set()) {
            return input(format!("{s} is not a subset of the universe"));
        }
        if !self.is_matroid() {
            return Err(Error::Precondition("complex is not a matroid".into()));
        }
        Ok(self.max_face_within(s))
    }

    /// The nerve of a family of complexes on a common universe: a set of
    /// member indices is a face iff the members share a vertex.
    pub fn nerve(cover: &[SComplex]) -> Result<SComplex> {
        let Some(first) = cover.first() else {
            return input("nerve of an empty family");
        };
        if cover.iter().any(|k| k.universe != first.universe) {
            return input("cover members must share one universe");
        }
        SComplex::from_monotone(index_labels(cover.len()), VSet::full(cover.len()), |s| {
            s.is_empty() || s.iter().fold(first.universe_set(), |acc, i| acc.intersection(cover[i].vertex_set)).len() > 0
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("complexes always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("invalid complex: {e}")))
    }
}

/// Packs the bits of `f` at positions `keep` into positions `0..keep.len()`.
fn compress(f: VSet, keep: &[usize]) -> VSet {
    keep.iter().enumerate().filter(|(_, &v)| f.contains(v)).map(|(i, _)| i).collect()
}

pub(crate) fn format_labels(universe: &[String], f: VSet) -> String {
    let parts: Vec<&str> = f.iter().map(|v| universe[v].as_str()).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Debug for SComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_void() {
            return write!(f, "VOID on {:?}", self.universe);
        }
        let facets: Vec<String> = self.facets().into_iter().map(|s| format_labels(&self.universe, s)).collect();
        write!(f, "complex on {:?} with facets [{}]", self.universe, facets.join(" "))
    }
}

/// Vertex labels serialize as JSON integers when they look like one.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelRepr {
    Int(u64),
    Str(String),
}

impl LabelRepr {
    fn of(s: &str) -> LabelRepr {
        match s.parse::<u64>() {
            Ok(v) if v.to_string() == s => LabelRepr::Int(v),
            _ => LabelRepr::Str(s.to_string()),
        }
    }

    fn into_string(self) -> String {
        match self {
            LabelRepr::Int(v) => v.to_string(),
            LabelRepr::Str(s) => s,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    universe: Vec<LabelRepr>,
    facets: Option<Vec<Vec<LabelRepr>>>,
}

impl Serialize for SComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let universe = self.universe.iter().map(|l| LabelRepr::of(l)).collect();
        let facets = if self.is_void() {
            None
        } else if self.is_empty_complex() {
            Some(Vec::new())
        } else {
            Some(self.facets().into_iter().map(|f| f.iter().map(|v| LabelRepr::of(&self.universe[v])).collect()).collect())
        };
        ComplexRepr { universe, facets }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ComplexRepr::deserialize(d)?;
        let universe: Vec<String> = raw.universe.into_iter().map(LabelRepr::into_string).collect();
        check_universe(&universe).map_err(D::Error::custom)?;
        let Some(facets) = raw.facets else {
            return SComplex::void(universe).map_err(D::Error::custom);
        };
        let mut sets = Vec::with_capacity(facets.len());
        for facet in facets {
            let mut s = VSet::EMPTY;
            for l in facet {
                let l = l.into_string();
                let v = universe
                    .iter()
                    .position(|u| *u == l)
                    .ok_or_else(|| D::Error::custom(format!("facet vertex {l:?} is not in the universe")))?;
                s = s.insert(v);
            }
            sets.push(s);
        }
        SComplex::from_facets(universe, &sets).map_err(D::Error::custom)
    }
}

/// A partition of a universe into nonempty colour classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorClasses {
    classes: Vec<VSet>,
}

impl ColorClasses {
    pub fn new(n: usize, classes: Vec<VSet>) -> Result<Self> {
        let mut seen = VSet::EMPTY;
        for (i, &c) in classes.iter().enumerate() {
            if c.is_empty() {
                return input(format!("colour class {i} is empty"));
            }
            if !c.is_disjoint(seen) {
                return input(format!("colour class {i} overlaps an earlier class"));
            }
            seen = seen.union(c);
        }
        if seen != VSet::full(n) {
            return input("colour classes do not cover the universe");
        }
        Ok(ColorClasses { classes })
    }

    pub fn classes(&self) -> &[VSet] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn union(&self) -> VSet {
        self.classes.iter().fold(VSet::EMPTY, |a, &c| a.union(c))
    }
}

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{input, Error, Result};
use crate::geomkernel::{in_conv, Coefficients, PointConfig};
use crate::scomplex::{index_labels, SComplex};
use crate::vset::VSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VariantTag {
    CC1,
    CC2,
    CC3,
    CC4,
    MAIN,
}

impl VariantTag {
    pub const ALL: [VariantTag; 5] = [VariantTag::CC1, VariantTag::CC2, VariantTag::CC3, VariantTag::CC4, VariantTag::MAIN];

    pub fn name(self) -> &'static str {
        match self {
            VariantTag::CC1 => "CC1",
            VariantTag::CC2 => "CC2",
            VariantTag::CC3 => "CC3",
            VariantTag::CC4 => "CC4",
            VariantTag::MAIN => "MAIN",
        }
    }
}

impl fmt::Display for VariantTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for VariantTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CC1" => Ok(VariantTag::CC1),
            "CC2" => Ok(VariantTag::CC2),
            "CC3" => Ok(VariantTag::CC3),
            "CC4" | "CC4-MATROID" => Ok(VariantTag::CC4),
            "MAIN" => Ok(VariantTag::MAIN),
            _ => input(format!("unknown variant {s:?}")),
        }
    }
}

/// Which theorem setup an instance follows, with the data it needs.
///
/// For CC2 the last colour class is the singleton `{pinned}`. For MAIN the
/// constraint graph `L` joins the classes named by `l_classes` (by default
/// the first two).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variant {
    pub tag: VariantTag,
    pub classes: Vec<VSet>,
    pub pinned: Option<usize>,
    pub l_facets: Option<Vec<VSet>>,
    pub l_classes: Option<(usize, usize)>,
    pub matroid_facets: Option<Vec<VSet>>,
}

impl Variant {
    pub fn colourful(tag: VariantTag, classes: Vec<VSet>) -> Self {
        Variant { tag, classes, pinned: None, l_facets: None, l_classes: None, matroid_facets: None }
    }

    pub fn pinned(classes: Vec<VSet>, p: usize) -> Self {
        Variant { pinned: Some(p), ..Variant::colourful(VariantTag::CC2, classes) }
    }

    pub fn constrained(classes: Vec<VSet>, l_facets: Vec<VSet>, l_classes: Option<(usize, usize)>) -> Self {
        Variant { l_facets: Some(l_facets), l_classes, ..Variant::colourful(VariantTag::MAIN, classes) }
    }

    pub fn matroid(facets: Vec<VSet>) -> Self {
        Variant { matroid_facets: Some(facets), ..Variant::colourful(VariantTag::CC4, Vec::new()) }
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }

    /// The two class indices carrying the constraint graph.
    pub fn l_pair(&self) -> (usize, usize) {
        self.l_classes.unwrap_or((0, 1))
    }

    /// The pinned vertex of CC2: explicit, or the single vertex of the last class.
    pub fn pinned_vertex(&self) -> Option<usize> {
        self.pinned.or_else(|| self.classes.last().filter(|c| c.len() == 1).and_then(|c| c.first()))
    }
}

#[derive(Serialize, Deserialize)]
struct VariantRepr {
    tag: VariantTag,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    classes: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pinned: Option<usize>,
    #[serde(rename = "L_facets", default, skip_serializing_if = "Option::is_none")]
    l_facets: Option<Vec<Vec<usize>>>,
    #[serde(rename = "L_classes", default, skip_serializing_if = "Option::is_none")]
    l_classes: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matroid_facets: Option<Vec<Vec<usize>>>,
}

fn to_lists(sets: &[VSet]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.to_vec()).collect()
}

fn from_lists(lists: Vec<Vec<usize>>) -> std::result::Result<Vec<VSet>, String> {
    lists
        .into_iter()
        .map(|l| {
            if let Some(&v) = l.iter().find(|&&v| v >= 32) {
                return Err(format!("vertex index {v} is out of range"));
            }
            let s = VSet::from_indices(l.iter().copied());
            if s.len() != l.len() {
                return Err(format!("repeated vertex in {l:?}"));
            }
            Ok(s)
        })
        .collect()
}

impl Serialize for Variant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VariantRepr {
            tag: self.tag,
            classes: to_lists(&self.classes),
            pinned: self.pinned,
            l_facets: self.l_facets.as_deref().map(to_lists),
            l_classes: self.l_classes.map(|(a, b)| [a, b]),
            matroid_facets: self.matroid_facets.as_deref().map(to_lists),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Variant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = VariantRepr::deserialize(d)?;
        let opt = |l: Option<Vec<Vec<usize>>>| l.map(from_lists).transpose().map_err(D::Error::custom);
        Ok(Variant {
            tag: raw.tag,
            classes: from_lists(raw.classes).map_err(D::Error::custom)?,
            pinned: raw.pinned,
            l_facets: opt(raw.l_facets)?,
            l_classes: raw.l_classes.map(|[a, b]| (a, b)),
            matroid_facets: opt(raw.matroid_facets)?,
        })
    }
}

/// A point configuration together with a theorem setup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub config: PointConfig,
    pub variant: Variant,
}

impl Instance {
    pub fn new(config: PointConfig, variant: Variant) -> Self {
        Instance { config, variant }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(s).map_err(|e| Error::Input(format!("invalid instance: {e}")))?;
        let all = inst.config.universe();
        let v = &inst.variant;
        let mut used: Vec<VSet> = v.classes.clone();
        used.extend(v.l_facets.iter().flatten().copied());
        used.extend(v.matroid_facets.iter().flatten().copied());
        used.extend(v.pinned.map(VSet::singleton));
        if let Some(bad) = used.iter().find(|s| !s.is_subset(all)) {
            return input(format!("{bad} refers to vertices beyond the {} configuration points", all.len()));
        }
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances always serialize")
    }

    pub fn n(&self) -> usize {
        self.config.len()
    }

    pub fn d(&self) -> usize {
        self.config.dim()
    }

    pub fn r(&self) -> usize {
        self.variant.r()
    }

    /// Violated structural clauses of the variant (partition, shape of `L`,
    /// matroid axioms). Empty when the constraint complex is well defined.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let v = &self.variant;
        let all = self.config.universe();
        if v.tag != VariantTag::CC4 {
            let mut seen = VSet::EMPTY;
            for (i, c) in v.classes.iter().enumerate() {
                if c.is_empty() {
                    out.push(format!("class F_{} is empty", i + 1));
                }
                if !c.is_disjoint(seen) {
                    out.push(format!("class F_{} overlaps an earlier class", i + 1));
                }
                seen = seen.union(*c);
            }
            if seen != all {
                out.push("classes do not partition the vertices".into());
            }
        }
        match v.tag {
            VariantTag::CC2 => match (v.pinned_vertex(), v.classes.last()) {
                (Some(p), Some(last)) if *last == VSet::singleton(p) => {}
                _ => out.push("the last class must be the singleton {pinned}".into()),
            },
            VariantTag::MAIN => {
                let (a, b) = v.l_pair();
                if a == b || a >= v.r() || b >= v.r() {
                    out.push(format!("L_classes ({a}, {b}) must name two distinct classes"));
                } else {
                    let (fa, fb) = (v.classes[a], v.classes[b]);
                    match &v.l_facets {
                        None => out.push("MAIN needs L_facets".into()),
                        Some(facets) => {
                            for f in facets {
                                if !f.is_subset(fa.union(fb)) || f.intersection(fa).len() > 1 || f.intersection(fb).len() > 1 {
                                    out.push(format!("L face {f} is not a face of vertex(F_a) * vertex(F_b)"));
                                }
                            }
                            let l = self.l_complex().expect("facets are in range");
                            if l.vertex_set() != fa.union(fb) {
                                out.push("vertex(L) must equal vertex(F_a) + vertex(F_b)".into());
                            }
                            if !l.is_path_connected().unwrap_or(false) {
                                out.push("L is not path-connected".into());
                            }
                        }
                    }
                }
            }
            VariantTag::CC4 => match self.matroid_complex() {
                None => out.push("CC4 needs matroid_facets".into()),
                Some(m) => {
                    if m.vertex_set() != all {
                        out.push("vertex(M) must be all vertices".into());
                    }
                    if !m.is_matroid() {
                        out.push("M is not a matroid".into());
                    }
                }
            },
            _ => {}
        }
        out
    }

    pub fn l_complex(&self) -> Option<SComplex> {
        let facets = self.variant.l_facets.as_ref()?;
        SComplex::from_facets(index_labels(self.n()), facets).ok()
    }

    pub fn matroid_complex(&self) -> Option<SComplex> {
        let facets = self.variant.matroid_facets.as_ref()?;
        SComplex::from_facets(index_labels(self.n()), facets).ok()
    }

    /// Membership test for the constraint complex `K` (assumes the invariants).
    fn face_test(&self) -> Box<dyn Fn(VSet) -> bool + '_> {
        let v = &self.variant;
        match v.tag {
            VariantTag::CC4 => {
                let m = self.matroid_complex().expect("checked");
                Box::new(move |f| m.contains(f))
            }
            VariantTag::MAIN => {
                let l = self.l_complex().expect("checked");
                let (a, b) = v.l_pair();
                let lv = v.classes[a].union(v.classes[b]);
                let others: Vec<VSet> = (0..v.r()).filter(|&i| i != a && i != b).map(|i| v.classes[i]).collect();
                Box::new(move |f| l.contains(f.intersection(lv)) && others.iter().all(|c| f.intersection(*c).len() <= 1))
            }
            _ => {
                let classes = v.classes.clone();
                Box::new(move |f| classes.iter().all(|c| f.intersection(*c).len() <= 1))
            }
        }
    }

    /// The complex `K` of admissible faces.
    pub fn constraint_complex(&self) -> Result<SComplex> {
        let bad = self.invariant_violations();
        if !bad.is_empty() {
            return input(format!("{} variant invariants violated: {}", self.variant.tag, bad.join("; ")));
        }
        let test = self.face_test();
        SComplex::from_monotone(index_labels(self.n()), self.config.universe(), |f| test(f))
    }
}

/// One face that a hypothesis requires to contain the origin in its image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequiredFace {
    pub face: Vec<usize>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub tag: VariantTag,
    /// Violated structural or numeric side conditions (e.g. `r >= d + 1`).
    pub structural: Vec<String>,
    pub required: Vec<RequiredFace>,
    pub passed: bool,
}

impl HypothesisReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = self.structural.clone();
        out.extend(self.required.iter().filter(|r| !r.holds).map(|r| format!("0 not in A({:?})", r.face)));
        out
    }
}

/// `rho(S)` with the convention `rho({}) = 0`.
fn rank_or_zero(m: &SComplex, s: VSet) -> usize {
    if s.is_empty() {
        0
    } else {
        m.max_face_within(s)
    }
}

/// The faces `S` the theorem requires to satisfy `0 in A(S)`.
pub fn required_faces(inst: &Instance) -> Vec<VSet> {
    let v = &inst.variant;
    match v.tag {
        VariantTag::CC1 | VariantTag::MAIN => v.classes.clone(),
        VariantTag::CC2 => v.classes[..v.classes.len().saturating_sub(1)].to_vec(),
        VariantTag::CC3 => {
            let mut out = Vec::new();
            for i in 0..v.r() {
                for j in i + 1..v.r() {
                    out.push(v.classes[i].union(v.classes[j]));
                }
            }
            out
        }
        VariantTag::CC4 => {
            let Some(m) = inst.matroid_complex() else {
                return Vec::new();
            };
            let all = inst.config.universe();
            let full_rank = rank_or_zero(&m, all);
            all.subsets()
                .filter(|&s| !s.is_empty())
                .filter(|&s| rank_or_zero(&m, s) == full_rank && rank_or_zero(&m, all.difference(s)) <= inst.d())
                .collect()
        }
    }
}

/// Checks every hypothesis of the instance's theorem; never fails.
pub fn check_hypotheses(inst: &Instance) -> HypothesisReport {
    let mut structural = inst.invariant_violations();
    let (d, r) = (inst.d(), inst.r());
    match inst.variant.tag {
        VariantTag::CC4 => {}
        VariantTag::CC2 if r < d + 1 => structural.push(format!("r = {r} < d + 1 = {} (classes include {{p}})", d + 1)),
        _ if r < d + 1 => structural.push(format!("r = {r} < d + 1 = {}", d + 1)),
        _ => {}
    }
    let all = inst.config.universe();
    let required: Vec<RequiredFace> = required_faces(inst)
        .into_iter()
        .map(|s| RequiredFace {
            face: s.to_vec(),
            holds: !s.is_empty() && s.is_subset(all) && in_conv(&inst.config, s).map(|c| c.is_some()).unwrap_or(false),
        })
        .collect();
    let passed = structural.is_empty() && required.iter().all(|r| r.holds);
    HypothesisReport { tag: inst.variant.tag, structural, required, passed }
}

/// A face `J` of `K` with convex coefficients placing the origin in `A(J)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub face: VSet,
    pub lambda: Coefficients,
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    face: Vec<usize>,
    lambda: std::collections::BTreeMap<String, crate::geomkernel::Rat>,
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // keys are emitted in numeric vertex order
        use serde::ser::SerializeMap;
        struct Lambda<'a>(&'a Coefficients);
        impl Serialize for Lambda<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (v, l) in self.0 {
                    m.serialize_entry(&v.to_string(), l)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("face", &self.face.to_vec())?;
        m.serialize_entry("lambda", &Lambda(&self.lambda))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CertificateRepr::deserialize(d)?;
        let face = from_lists(vec![raw.face]).map_err(D::Error::custom)?[0];
        let mut lambda = Coefficients::new();
        for (k, v) in raw.lambda {
            let k: usize = k.parse().map_err(|_| D::Error::custom(format!("bad vertex key {k:?}")))?;
            lambda.insert(k, v);
        }
        Ok(Certificate { face, lambda })
    }
}

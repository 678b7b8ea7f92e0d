//! Constrained Tverberg search: `r` pairwise disjoint parts whose convex
//! hulls share a point, where the labels of two anchor vertices must form an
//! edge of a connected bipartite constraint graph `L` on `[r] * [r]`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::geomkernel::lp::{LinearSystem, Relation};
use crate::geomkernel::{Coefficients, PointConfig, Rat, RatVec};
use crate::scomplex::SComplex;
use crate::vset::VSet;

/// Labels of `[r] * [r]`: `1..r` for the first copy, `1'..r'` for the second.
pub fn pair_labels(r: usize) -> Vec<String> {
    (1..=r).map(|i| i.to_string()).chain((1..=r).map(|i| format!("{i}'"))).collect()
}

/// `[r] * [r]` itself, the unconstrained choice of `L`.
pub fn full_pair_complex(r: usize) -> SComplex {
    let facets: Vec<VSet> = (0..r).flat_map(|i| (0..r).map(move |j| VSet::from_indices([i, r + j]))).collect();
    SComplex::from_facets(pair_labels(r), &facets).expect("valid facets")
}

/// `L` given by its edges `(i, j)`, 1-based labels of the first and second copy.
pub fn pair_complex_from_edges(r: usize, edges: &[(usize, usize)]) -> Result<SComplex> {
    let mut facets = Vec::with_capacity(edges.len());
    for &(i, j) in edges {
        if !(1..=r).contains(&i) || !(1..=r).contains(&j) {
            return input(format!("edge ({i}, {j}) is outside [{r}] * [{r}]"));
        }
        facets.push(VSet::from_indices([i - 1, r + j - 1]));
    }
    SComplex::from_facets(pair_labels(r), &facets)
}

/// Re-indexes a complex whose labels are `1..r` and `1'..r'` (in any order)
/// onto the vertex order of [`pair_labels`].
pub fn canonical_pair_complex(l: &SComplex, r: usize) -> Result<SComplex> {
    let labels = pair_labels(r);
    if l.n() != 2 * r {
        return input(format!("L must live on the {} vertices of [{r}] * [{r}], got {}", 2 * r, l.n()));
    }
    let mut map = Vec::with_capacity(l.n());
    for v in 0..l.n() {
        match labels.iter().position(|x| x == l.label(v)) {
            Some(i) => map.push(i),
            None => return input(format!("L label {:?} is not one of {labels:?}", l.label(v))),
        }
    }
    if l.is_void() {
        return SComplex::void(labels);
    }
    let facets: Vec<VSet> = l.facets().into_iter().map(|f| f.iter().map(|v| map[v]).collect()).collect();
    SComplex::from_facets(labels, &facets)
}

/// Checks that `l` is a connected spanning subcomplex of `[r] * [r]`.
pub fn check_pair_complex(l: &SComplex, r: usize) -> Result<()> {
    if l.n() != 2 * r {
        return input(format!("L must live on the {} vertices of [{r}] * [{r}], got {}", 2 * r, l.n()));
    }
    let first = VSet::full(r);
    for f in l.faces() {
        if f.intersection(first).len() > 1 || f.difference(first).len() > 1 {
            return input(format!("L face {} is not a face of [{r}] * [{r}]", f));
        }
    }
    if l.vertex_set() != VSet::full(2 * r) {
        return input("L must use every vertex of [r] * [r]");
    }
    if !l.is_path_connected()? {
        return input("L is not path-connected");
    }
    Ok(())
}

/// A partial labeling: `labels[v]` is the 1-based part of vertex `v`, or `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Labeling(pub Vec<Option<usize>>);

impl Labeling {
    pub fn parts(&self, r: usize) -> Vec<VSet> {
        let mut parts = vec![VSet::EMPTY; r];
        for (v, l) in self.0.iter().enumerate() {
            if let Some(l) = l {
                parts[l - 1] = parts[l - 1].insert(v);
            }
        }
        parts
    }

    pub fn is_full(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }
}

/// The anchor vertices whose labels `L` constrains.
pub type Anchors = (usize, usize);

/// Whether the anchor labels are compatible with `l`.
pub fn constraint_ok(lab: &Labeling, l: &SComplex, r: usize, anchors: Anchors) -> bool {
    match (lab.0[anchors.0], lab.0[anchors.1]) {
        (Some(a), Some(b)) => l.contains(VSet::from_indices([a - 1, r + b - 1])),
        _ => true,
    }
}

/// A point in the convex hull of every part, with the convex coefficients
/// realizing it in each part.
pub fn common_point(cfg: &PointConfig, parts: &[VSet]) -> Result<Option<(RatVec, Vec<Coefficients>)>> {
    if parts.is_empty() {
        return input("common_point needs at least one part");
    }
    let mut seen = VSet::EMPTY;
    for p in parts {
        if p.is_empty() {
            return input("every part must be nonempty");
        }
        if !p.is_subset(cfg.universe()) {
            return input(format!("part {p} is outside the configuration"));
        }
        if !p.is_disjoint(seen) {
            return input("parts must be pairwise disjoint");
        }
        seen = seen.union(*p);
    }
    let verts: Vec<Vec<usize>> = parts.iter().map(|p| p.to_vec()).collect();
    let offsets: Vec<usize> = verts.iter().scan(0, |acc, v| Some(std::mem::replace(acc, *acc + v.len()))).collect();
    let total: usize = verts.iter().map(Vec::len).sum();
    let mut sys = LinearSystem::nonneg(total);
    for (i, v) in verts.iter().enumerate() {
        let mut row = vec![Rat::zero(); total];
        for k in 0..v.len() {
            row[offsets[i] + k] = Rat::one();
        }
        sys.push(row, Relation::Eq, Rat::one());
    }
    for i in 1..verts.len() {
        for c in 0..cfg.dim() {
            let mut row = vec![Rat::zero(); total];
            for (k, &p) in verts[0].iter().enumerate() {
                row[k] = cfg.point(p)[c].clone();
            }
            for (k, &p) in verts[i].iter().enumerate() {
                row[offsets[i] + k] = -&cfg.point(p)[c];
            }
            sys.push(row, Relation::Eq, Rat::zero());
        }
    }
    let Some(x) = sys.find_point() else {
        return Ok(None);
    };
    let coeffs: Vec<Coefficients> = verts
        .iter()
        .enumerate()
        .map(|(i, v)| v.iter().enumerate().map(|(k, &p)| (p, x[offsets[i] + k].clone())).collect())
        .collect();
    Ok(Some((combine(cfg, &coeffs[0]), coeffs)))
}

fn combine(cfg: &PointConfig, lambda: &Coefficients) -> RatVec {
    let mut point = vec![Rat::zero(); cfg.dim()];
    for (&p, l) in lambda {
        for (c, x) in point.iter_mut().zip(cfg.point(p)) {
            *c += &(l * x);
        }
    }
    point
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TverbergSolution {
    pub labeling: Labeling,
    pub point: RatVec,
    /// Convex coefficients of `point` in part `i`, keyed by vertex.
    pub coefficients: Vec<Coefficients>,
}

impl TverbergSolution {
    pub fn parts(&self) -> Vec<VSet> {
        self.labeling.parts(self.coefficients.len())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Number of labelings the search may visit for `n` vertices and `r` parts.
fn search_space(n: usize, r: usize) -> Result<(u64, u64)> {
    let full = (r as u64).checked_pow(n as u32);
    let partial = (r as u64 + 1).checked_pow(n as u32);
    match (full, partial) {
        (Some(f), Some(p)) if p <= 1 << 40 => Ok((f, p)),
        _ => Err(Error::Resource(format!("{n} vertices and r = {r} give too many labelings"))),
    }
}

/// Decodes the `idx`-th labeling: full labelings in lexicographic order
/// (vertex 0 most significant) first, then all labelings over
/// `{1..r, unused}` that leave some vertex unused, also lexicographic.
fn labeling_at(idx: u64, n: usize, r: usize, full: u64) -> Labeling {
    let (mut rest, base) = if idx < full { (idx, r as u64) } else { (idx - full, r as u64 + 1) };
    let mut labels = vec![None; n];
    for v in (0..n).rev() {
        let digit = (rest % base) as usize;
        rest /= base;
        labels[v] = (digit < r).then_some(digit + 1);
    }
    Labeling(labels)
}

/// Finds the first labeling (in the order of [`labeling_at`]) whose parts are
/// all nonempty, that satisfies [`constraint_ok`], and whose parts share a
/// point. The result does not depend on the number of worker threads.
pub fn solve_tverberg(cfg: &PointConfig, r: usize, l: &SComplex, anchors: Anchors) -> Result<TverbergSolution> {
    let n = cfg.len();
    let d = cfg.dim();
    if r < 1 {
        return input("r must be at least 1");
    }
    if n < (d + 1) * (r - 1) + 1 {
        return input(format!("need N >= (d+1)(r-1) = {}, got N = {}", (d + 1) * (r - 1), n - 1));
    }
    if anchors.0 == anchors.1 || anchors.0 >= n || anchors.1 >= n {
        return input(format!("anchors ({}, {}) must be two distinct vertices", anchors.0, anchors.1));
    }
    check_pair_complex(l, r)?;
    let (full, partial) = search_space(n, r)?;
    let total = full + partial;
    let found = (0..total).into_par_iter().find_map_first(|idx| {
        let lab = labeling_at(idx, n, r, full);
        if idx >= full && lab.is_full() {
            return None;
        }
        let parts = lab.parts(r);
        if parts.iter().any(|p| p.is_empty()) || !constraint_ok(&lab, l, r, anchors) {
            return None;
        }
        let (point, coefficients) = common_point(cfg, &parts).expect("valid parts")?;
        Some(TverbergSolution { labeling: lab, point, coefficients })
    });
    found.ok_or_else(|| {
        Error::NoPartition(format!(
            "no L-compatible partition into {r} parts with a common point among {n} points in dimension {d}"
        ))
    })
}

/// Exact re-check of a solution.
pub fn verify_tverberg(cfg: &PointConfig, r: usize, l: &SComplex, anchors: Anchors, sol: &TverbergSolution) -> bool {
    if sol.labeling.0.len() != cfg.len() || sol.coefficients.len() != r || sol.point.len() != cfg.dim() {
        return false;
    }
    if sol.labeling.0.iter().flatten().any(|&x| x == 0 || x > r) {
        return false;
    }
    let parts = sol.labeling.parts(r);
    if !constraint_ok(&sol.labeling, l, r, anchors) {
        return false;
    }
    parts.iter().zip(&sol.coefficients).all(|(part, lambda)| {
        let keys: VSet = lambda.keys().copied().collect();
        !part.is_empty()
            && keys == *part
            && lambda.values().all(|x| !x.is_negative())
            && lambda.values().sum::<Rat>().is_one()
            && combine(cfg, lambda) == sol.point
    })
}

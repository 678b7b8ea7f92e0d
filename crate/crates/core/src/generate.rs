//! Seeded random instances: point configurations, complexes, and instances
//! of every theorem variant with their hypotheses planted.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::caratheodory::{check_hypotheses, Instance, Variant, VariantTag};
use crate::error::{input, Result};
use crate::geomkernel::{PointConfig, Rat, RatVec};
use crate::scomplex::{index_labels, SComplex};
use crate::tverberg::pair_complex_from_edges;
use crate::vset::VSet;

/// Default bound `B` for rationals `p/q` with `|p| <= B`, `1 <= q <= B`.
pub const DEFAULT_BOUND: i64 = 32;

/// The generator for case `stream` of a run seeded with `seed`. Streams are
/// independent, so cases can be produced in any order.
pub fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_rat(rng: &mut impl Rng, bound: i64) -> Rat {
    Rat::new(rng.random_range(-bound..=bound), rng.random_range(1..=bound))
}

fn positive_rat(rng: &mut impl Rng, bound: i64) -> Rat {
    Rat::new(rng.random_range(1..=bound), rng.random_range(1..=bound))
}

/// A nonzero point with coordinates drawn by [`random_rat`].
pub fn random_point(rng: &mut impl Rng, d: usize) -> RatVec {
    loop {
        let p: RatVec = (0..d).map(|_| random_rat(rng, DEFAULT_BOUND)).collect();
        if p.iter().any(|x| !x.is_zero()) {
            return p;
        }
    }
}

pub fn random_config(rng: &mut impl Rng, d: usize, n: usize) -> PointConfig {
    PointConfig::new(d, (0..n).map(|_| random_point(rng, d)).collect()).expect("nonzero points")
}

fn scale(p: &[Rat], s: &Rat) -> RatVec {
    p.iter().map(|x| x * s).collect()
}

/// `k >= 2` nonzero points with a strictly positive combination equal to the
/// origin: `k - 1` random points, random positive weights, and the last point
/// solved for.
pub fn plant_zero(rng: &mut impl Rng, d: usize, k: usize) -> Vec<RatVec> {
    assert!(k >= 2, "a single nonzero point cannot contain the origin");
    loop {
        let mut pts: Vec<RatVec> = (0..k - 1).map(|_| random_point(rng, d)).collect();
        let mut sum = vec![Rat::zero(); d];
        for p in &pts {
            let w = positive_rat(rng, DEFAULT_BOUND);
            for (s, x) in sum.iter_mut().zip(p) {
                *s += &(x * &w);
            }
        }
        if sum.iter().all(Rat::is_zero) {
            continue;
        }
        let w = positive_rat(rng, DEFAULT_BOUND);
        pts.push(scale(&sum, &(-w.recip())));
        return pts;
    }
}

/// `k` points whose convex hull contains `center` in its relative interior.
pub fn plant_around(rng: &mut impl Rng, center: &[Rat], k: usize) -> Vec<RatVec> {
    loop {
        let pts: Vec<RatVec> = plant_zero(rng, center.len(), k)
            .into_iter()
            .map(|p| p.iter().zip(center).map(|(a, b)| a + b).collect())
            .collect();
        if pts.iter().all(|p: &RatVec| p.iter().any(|x| !x.is_zero())) {
            return pts;
        }
    }
}

/// Shapes of configuration used to reach every branch of the lemma checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Generic,
    /// Every point in a closed halfspace, some on its boundary hyperplane.
    HalfSpace,
    /// All points in a proper linear subspace.
    Flat,
    /// Antipodal pairs, giving cones with nontrivial lineality.
    Antipodal,
}

impl Shape {
    pub const ALL: [Shape; 4] = [Shape::Generic, Shape::HalfSpace, Shape::Flat, Shape::Antipodal];
}

/// Random configuration of `n` points of the given shape.
pub fn shaped_config(rng: &mut impl Rng, d: usize, n: usize, shape: Shape) -> PointConfig {
    let pts: Vec<RatVec> = match shape {
        Shape::Generic => (0..n).map(|_| random_point(rng, d)).collect(),
        Shape::HalfSpace => (0..n)
            .map(|_| loop {
                let mut p = random_point(rng, d);
                p[0] = if d > 1 && rng.random_bool(0.4) { Rat::zero() } else { p[0].abs() };
                if p.iter().any(|x| !x.is_zero()) {
                    break p;
                }
            })
            .collect(),
        Shape::Flat => {
            let k = if d > 1 { rng.random_range(1..d) } else { 1 };
            let basis: Vec<RatVec> = (0..k).map(|_| random_point(rng, d)).collect();
            (0..n)
                .map(|_| loop {
                    let mut p = vec![Rat::zero(); d];
                    for b in &basis {
                        let c = random_rat(rng, 4);
                        for (x, y) in p.iter_mut().zip(b) {
                            *x += &(y * &c);
                        }
                    }
                    if p.iter().any(|x| !x.is_zero()) {
                        break p;
                    }
                })
                .collect()
        }
        Shape::Antipodal => {
            let mut pts = Vec::with_capacity(n);
            while pts.len() < n {
                let p = random_point(rng, d);
                if pts.len() + 1 < n && rng.random_bool(0.6) {
                    pts.push(scale(&p, &(-positive_rat(rng, 4))));
                }
                pts.push(p);
            }
            pts.shuffle(rng);
            pts
        }
    };
    PointConfig::new(d, pts).expect("nonzero points")
}

/// A configuration with a subset `U` whose cone contains a hyperplane `H`
/// (0 in the relative interior of `A(U) ∩ H`, spanning `H`) and whose
/// complement lies strictly on one side of `H`.
pub fn plant_hyperplane_subset(rng: &mut impl Rng, d: usize, in_plane: usize, below: usize, rest: usize) -> (PointConfig, VSet) {
    assert!(d >= 2 && in_plane >= d, "the subset must span a hyperplane");
    let mut pts: Vec<RatVec> = loop {
        let flat = plant_zero(rng, d - 1, in_plane);
        let pts: Vec<RatVec> = flat.into_iter().map(|p| std::iter::once(Rat::zero()).chain(p).collect()).collect();
        let cfg = PointConfig::new(d, pts.clone()).expect("nonzero");
        if cfg.span_dim(cfg.universe()) == d - 1 {
            break pts;
        }
    };
    for _ in 0..below {
        let mut p = random_point(rng, d);
        p[0] = -positive_rat(rng, DEFAULT_BOUND);
        pts.push(p);
    }
    let u = VSet::full(pts.len());
    for _ in 0..rest {
        let mut p = random_point(rng, d);
        p[0] = positive_rat(rng, DEFAULT_BOUND);
        pts.push(p);
    }
    (PointConfig::new(d, pts).expect("nonzero"), u)
}

/// Random complex on `n` vertices from a few random facets; occasionally
/// VOID or EMPTY.
pub fn random_complex(rng: &mut impl Rng, n: usize) -> SComplex {
    let labels = index_labels(n);
    match rng.random_range(0..20) {
        0 => return SComplex::void(labels).expect("valid"),
        1 => return SComplex::empty(labels).expect("valid"),
        _ => {}
    }
    let m = rng.random_range(1..=5);
    let facets: Vec<VSet> = (0..m)
        .map(|_| {
            let size = rng.random_range(1..=n.min(4));
            let mut verts: Vec<usize> = (0..n).collect();
            verts.shuffle(rng);
            VSet::from_indices(verts[..size].iter().copied())
        })
        .collect();
    SComplex::from_facets(labels, &facets).expect("valid facets")
}

/// Random connected spanning subgraph of the complete bipartite graph on
/// `a x b`, as edge sets: a random spanning tree plus extra edges.
pub fn random_connected_bipartite(rng: &mut impl Rng, a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
    assert!(!a.is_empty() && !b.is_empty());
    let mut in_a = vec![a[rng.random_range(0..a.len())]];
    let mut in_b: Vec<usize> = Vec::new();
    let mut out_a: Vec<usize> = a.iter().copied().filter(|v| *v != in_a[0]).collect();
    let mut out_b: Vec<usize> = b.to_vec();
    let mut edges = Vec::new();
    while !out_a.is_empty() || !out_b.is_empty() {
        // a new first-side vertex needs a second-side vertex in the tree
        let pick_b = in_b.is_empty() || out_a.is_empty() || (!out_b.is_empty() && rng.random_bool(0.5));
        if pick_b {
            let v = out_b.swap_remove(rng.random_range(0..out_b.len()));
            edges.push((in_a[rng.random_range(0..in_a.len())], v));
            in_b.push(v);
        } else {
            let v = out_a.swap_remove(rng.random_range(0..out_a.len()));
            edges.push((v, in_b[rng.random_range(0..in_b.len())]));
            in_a.push(v);
        }
    }
    for &x in a {
        for &y in b {
            if !edges.contains(&(x, y)) && rng.random_bool(0.3) {
                edges.push((x, y));
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Random connected spanning `L` inside `[r] * [r]`.
pub fn random_pair_complex(rng: &mut impl Rng, r: usize) -> SComplex {
    let labels: Vec<usize> = (1..=r).collect();
    let edges = random_connected_bipartite(rng, &labels, &labels);
    pair_complex_from_edges(r, &edges).expect("edges in range")
}

/// What to generate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub tag: VariantTag,
    pub d: usize,
    pub r: usize,
    /// Class sizes; drawn at random when absent.
    pub sizes: Option<Vec<usize>>,
    /// Upper bound on the number of points `N + 1` for random sizes.
    pub max_points: usize,
    /// For MAIN: the two classes carrying `L`.
    pub l_classes: Option<(usize, usize)>,
}

impl GenSpec {
    pub fn new(tag: VariantTag, d: usize, r: usize) -> Self {
        GenSpec { tag, d, r, sizes: None, max_points: 11, l_classes: None }
    }
}

/// Random class sizes, each at least `min`, with total at most `max_points`.
fn random_sizes(rng: &mut impl Rng, count: usize, min: usize, max_points: usize) -> Result<Vec<usize>> {
    if count * min > max_points {
        return input(format!("{count} classes of at least {min} points exceed {max_points} points"));
    }
    let mut sizes = vec![min; count];
    let mut room = max_points - count * min;
    for s in sizes.iter_mut() {
        let extra = rng.random_range(0..=room.min(1));
        *s += extra;
        room -= extra;
    }
    Ok(sizes)
}

fn check_sizes(sizes: &[usize], count: usize, min: usize) -> Result<()> {
    if sizes.len() != count {
        return input(format!("expected {count} class sizes, got {}", sizes.len()));
    }
    if let Some(s) = sizes.iter().find(|&&s| s < min) {
        return input(format!("class size {s} is below the minimum {min} for planting"));
    }
    Ok(())
}

/// Lays out classes of points on shuffled vertex indices.
fn assemble(rng: &mut impl Rng, d: usize, classes: Vec<Vec<RatVec>>) -> (PointConfig, Vec<VSet>) {
    let n: usize = classes.iter().map(Vec::len).sum();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pts: Vec<Option<RatVec>> = vec![None; n];
    let mut sets = Vec::with_capacity(classes.len());
    let mut next = 0;
    for class in classes {
        let mut s = VSet::EMPTY;
        for p in class {
            pts[order[next]] = Some(p);
            s = s.insert(order[next]);
            next += 1;
        }
        sets.push(s);
    }
    let cfg = PointConfig::new(d, pts.into_iter().map(|p| p.expect("filled")).collect()).expect("valid config");
    (cfg, sets)
}

/// A random instance whose theorem hypotheses hold by construction.
///
/// CC1, MAIN and CC4 plant the origin in every class; CC2 in every class
/// but the pinned singleton; CC3 plants antipodal pairs across classes so
/// only the pairwise unions are guaranteed to contain the origin. CC4 uses
/// the partition matroid of the planted classes.
pub fn gen_instance(rng: &mut impl Rng, spec: &GenSpec) -> Result<Instance> {
    let (d, r) = (spec.d, spec.r);
    if d == 0 {
        return input("d must be positive");
    }
    if spec.tag != VariantTag::CC4 && r < d + 1 {
        return input(format!("{} needs r >= d + 1, got r = {r}, d = {d}", spec.tag));
    }
    if r < 1 {
        return input("r must be positive");
    }
    let inst = match spec.tag {
        VariantTag::CC1 | VariantTag::MAIN | VariantTag::CC4 => {
            let sizes = match &spec.sizes {
                Some(s) => check_sizes(s, r, 2).map(|_| s.clone())?,
                None => random_sizes(rng, r, 2, spec.max_points)?,
            };
            let classes: Vec<Vec<RatVec>> = sizes.iter().map(|&k| plant_zero(rng, d, k)).collect();
            let (cfg, sets) = assemble(rng, d, classes);
            let variant = match spec.tag {
                VariantTag::CC1 => Variant::colourful(VariantTag::CC1, sets),
                VariantTag::MAIN => {
                    let (a, b) = spec.l_classes.unwrap_or((0, 1));
                    if a == b || a >= r || b >= r {
                        return input(format!("L_classes ({a}, {b}) must name two distinct classes"));
                    }
                    let edges = random_connected_bipartite(rng, &sets[a].to_vec(), &sets[b].to_vec());
                    let facets = edges.into_iter().map(|(x, y)| VSet::from_indices([x, y])).collect();
                    Variant::constrained(sets, facets, spec.l_classes)
                }
                _ => Variant::matroid(transversals(&sets)),
            };
            Instance::new(cfg, variant)
        }
        VariantTag::CC2 => {
            let sizes = match &spec.sizes {
                Some(s) => {
                    check_sizes(&s[..s.len().min(r - 1)], r - 1, 2)?;
                    if s.len() != r || s[r - 1] != 1 {
                        return input("CC2 sizes must end with the pinned singleton class of size 1");
                    }
                    s[..r - 1].to_vec()
                }
                None => random_sizes(rng, r - 1, 2, spec.max_points.saturating_sub(1))?,
            };
            let mut classes: Vec<Vec<RatVec>> = sizes.iter().map(|&k| plant_zero(rng, d, k)).collect();
            classes.push(vec![random_point(rng, d)]);
            let (cfg, sets) = assemble(rng, d, classes);
            let p = sets[r - 1].first().expect("singleton");
            Instance::new(cfg, Variant::pinned(sets, p))
        }
        VariantTag::CC3 => {
            // m classes get pairwise gadgets, the others are planted alone
            let budget = spec.sizes.as_ref().map_or(spec.max_points, |s| s.iter().sum());
            let m = (2..=r).rev().find(|&m| m * (m - 1) + 2 * (r - m) <= budget).unwrap_or(0);
            if m < 2 && r > 1 {
                return input(format!("CC3 with r = {r} needs more than {budget} points"));
            }
            let mut classes: Vec<Vec<RatVec>> = vec![Vec::new(); r];
            for i in 0..m {
                for j in i + 1..m {
                    let g = random_point(rng, d);
                    classes[j].push(scale(&g, &(-positive_rat(rng, 4))));
                    classes[i].push(g);
                }
            }
            for class in classes.iter_mut().skip(m) {
                *class = plant_zero(rng, d, 2);
            }
            if let Some(sizes) = &spec.sizes {
                check_sizes(sizes, r, 1)?;
                for (class, &s) in classes.iter_mut().zip(sizes) {
                    while class.len() < s {
                        class.push(random_point(rng, d));
                    }
                }
            }
            let (cfg, sets) = assemble(rng, d, classes);
            Instance::new(cfg, Variant::colourful(VariantTag::CC3, sets))
        }
    };
    let report = check_hypotheses(&inst);
    debug_assert!(report.passed, "generated instance fails its hypotheses: {:?}", report.failures());
    if !report.passed {
        return input(format!("generated instance fails its hypotheses: {}", report.failures().join("; ")));
    }
    Ok(inst)
}

/// Facets of the partition matroid with one element per class.
fn transversals(classes: &[VSet]) -> Vec<VSet> {
    classes.iter().fold(vec![VSet::EMPTY], |acc, c| acc.iter().flat_map(|f| c.iter().map(move |v| f.insert(v))).collect())
}

/// A configuration of `sizes.iter().sum()` points in which the parts with
/// the given sizes all contain a random common point in their relative
/// interiors. Returns the configuration, the parts and the point.
pub fn plant_tverberg(rng: &mut impl Rng, d: usize, sizes: &[usize]) -> (PointConfig, Vec<VSet>, RatVec) {
    let center = random_point(rng, d);
    let classes: Vec<Vec<RatVec>> = sizes.iter().map(|&k| plant_around(rng, &center, k)).collect();
    let (cfg, parts) = assemble(rng, d, classes);
    (cfg, parts, center)
}

//! Seeded verification campaigns. Each case draws from its own random
//! stream, cases run in parallel, and reports list cases by id, so a report
//! depends only on the seed and the case count.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::IteratorRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caratheodory::{
    covering_check_for, global_rows, meshulam_check_for, solve, subset_rows, verify_certificate, LemmaRow,
    SuiteOptions, VariantTag,
};
use crate::error::{Error, Result};
use crate::generate::{
    case_rng, gen_instance, plant_hyperplane_subset, random_complex, random_config, random_pair_complex,
    shaped_config, GenSpec, Shape,
};
use crate::geomkernel::{covers_sphere, in_conv, in_interior, open_hemis_intersect, PointConfig};
use crate::homology::{check_alexander, check_kunneth_join};
use crate::scomplex::{index_labels, SComplex};
use crate::tverberg::{solve_tverberg, verify_tverberg};
use crate::vset::VSet;

/// Outcome of one case.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub id: usize,
    pub passed: bool,
    /// Number of individual exact checks made.
    pub checks: u64,
    pub summary: String,
    #[serde(skip)]
    coverage: BTreeMap<String, u64>,
}

impl Case {
    fn new(id: usize) -> Self {
        Case { id, passed: true, ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            if !self.summary.is_empty() {
                self.summary.push_str("; ");
            }
            self.summary.push_str(&what());
        }
    }

    fn count(&mut self, key: impl Into<String>) {
        *self.coverage.entry(key.into()).or_default() += 1;
    }

    fn note(&mut self, s: impl AsRef<str>) {
        if self.passed {
            self.summary = s.as_ref().to_string();
        }
    }

    fn fail(mut self, e: Error) -> Self {
        self.passed = false;
        self.summary = format!("error: {e}");
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub seed: u64,
    pub cases: usize,
    pub failed: usize,
    pub checks: u64,
    /// How often each tracked condition occurred, e.g. how often each lemma
    /// hypothesis held.
    pub coverage: BTreeMap<String, u64>,
    pub results: Vec<Case>,
}

impl CampaignReport {
    fn collect(campaign: &str, seed: u64, results: Vec<Case>) -> Self {
        let mut coverage = BTreeMap::new();
        for c in &results {
            for (k, v) in &c.coverage {
                *coverage.entry(k.clone()).or_default() += v;
            }
        }
        CampaignReport {
            campaign: campaign.to_string(),
            seed,
            cases: results.len(),
            failed: results.iter().filter(|c| !c.passed).count(),
            checks: results.iter().map(|c| c.checks).sum(),
            coverage,
            results,
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.results.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,passed,checks,summary\n");
        for c in &self.results {
            writeln!(out, "{},{},{},{}", c.id, c.passed, c.checks, csv_field(&c.summary)).unwrap();
        }
        out
    }

    /// One line: name, pass/fail, case and check counts.
    pub fn headline(&self) -> String {
        format!(
            "{}: {} ({} cases, {} checks, {} failed)",
            self.campaign,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.checks,
            self.failed
        )
    }
}

pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run(campaign: &str, seed: u64, count: usize, case: impl Fn(&mut Case, u64) -> Result<()> + Sync) -> CampaignReport {
    let results = (0..count)
        .into_par_iter()
        .map(|id| {
            let mut c = Case::new(id);
            match case(&mut c, id as u64) {
                Ok(()) => c,
                Err(e) => c.fail(e),
            }
        })
        .collect();
    CampaignReport::collect(campaign, seed, results)
}

/// `open_hemis_intersect <=> not in_conv` and `covers_sphere <=> in_interior`
/// on every nonempty subset of random configurations with `d <= 3`, `N <= 9`.
pub fn predicates(seed: u64, count: usize) -> CampaignReport {
    run("predicate-equivalences", seed, count, |c, id| {
        let mut rng = case_rng(seed, id);
        let d = rng.random_range(1..=3);
        let n = rng.random_range(1..=10);
        let shape = Shape::ALL[rng.random_range(0..Shape::ALL.len())];
        let cfg = shaped_config(&mut rng, d, n, shape);
        for u in cfg.universe().subsets().skip(1) {
            let conv = in_conv(&cfg, u)?.is_some();
            let hemis = open_hemis_intersect(&cfg, u)?;
            c.check(hemis != conv, || format!("hemispheres vs hull disagree on U = {u}"));
            let interior = in_interior(&cfg, u)?;
            c.check(covers_sphere(&cfg, u)? == interior, || format!("sphere cover vs interior disagree on U = {u}"));
            c.count(if interior { "interior" } else if conv { "hull-not-interior" } else { "not-in-hull" });
        }
        c.note(format!("d={d} n={n} {shape:?}"));
        Ok(())
    })
}

/// Alexander duality on random complexes (`count_complexes`) and on the
/// zero-avoiding complexes of random configurations (`count_configs`).
pub fn alexander(seed: u64, count_complexes: usize, count_configs: usize) -> CampaignReport {
    run("alexander-duality", seed, count_complexes + count_configs, |c, id| {
        let mut rng = case_rng(seed, id);
        if (id as usize) < count_complexes {
            let n = rng.random_range(1..=9);
            let k = random_complex(&mut rng, n);
            if k.is_simplex() {
                c.count("skipped-full-simplex");
                return Ok(());
            }
            c.check(check_alexander(&k)?, || format!("duality fails for {}", k.to_json()));
            c.note(format!("random complex, n={n}, {} faces", k.num_faces()));
        } else {
            let d = rng.random_range(1..=3);
            let n = rng.random_range(1..=9);
            let shape = Shape::ALL[rng.random_range(0..Shape::ALL.len())];
            let cfg = shaped_config(&mut rng, d, n, shape);
            let x = SComplex::zero_avoiding(&cfg);
            if x.is_simplex() {
                c.count("skipped-full-simplex");
                c.check(x.alexander_dual().is_void(), || "dual of the full simplex is not VOID".into());
                return Ok(());
            }
            c.count("zero-avoiding-pairs");
            c.check(check_alexander(&x)?, || format!("duality fails for C_A of {}", cfg.to_json()));
            c.note(format!("zero-avoiding, d={d} n={n} {shape:?}"));
        }
        Ok(())
    })
}

/// The homology of `C_A` and of its dual, and the hemisphere-nerve description
/// of `C_A`, on random configurations.
pub fn convexity(seed: u64, count: usize) -> CampaignReport {
    run("convexity-complex", seed, count, |c, id| {
        let mut rng = case_rng(seed, id);
        let d = rng.random_range(1..=3);
        let n = rng.random_range(1..=9);
        let shape = Shape::ALL[rng.random_range(0..Shape::ALL.len())];
        let cfg = shaped_config(&mut rng, d, n, shape);
        for row in global_rows(&cfg, SuiteOptions::default())? {
            c.check(!row.failed(), || format!("{}: {}", row.lemma, row.details));
        }
        c.count(if crate::geomkernel::in_relint(&cfg, cfg.universe())? { "relint" } else { "not-relint" });
        c.note(format!("d={d} n={n} {shape:?}"));
        Ok(())
    })
}

/// Which subsets `U` the lemma checks visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubsetChoice {
    /// Every nonempty proper subset.
    All,
    /// Up to this many distinct nonempty proper subsets, drawn at random.
    Sampled(usize),
}

pub fn choose_subsets(cfg: &PointConfig, choice: SubsetChoice, rng: &mut impl Rng) -> Vec<VSet> {
    let all = cfg.universe();
    let proper = all.subsets().filter(|u| !u.is_empty() && *u != all);
    match choice {
        SubsetChoice::All => proper.collect(),
        SubsetChoice::Sampled(k) => {
            let mut picked = proper.choose_multiple(rng, k);
            picked.sort_unstable();
            picked
        }
    }
}

/// Global lemma rows followed by the rows of every chosen subset.
pub fn lemma_rows(cfg: &PointConfig, subsets: &[VSet], opts: SuiteOptions) -> Result<Vec<LemmaRow>> {
    if cfg.len() > crate::caratheodory::lemmas::MAX_LEMMA_VERTICES {
        return Err(Error::Resource(format!(
            "lemma checks need at most {} vertices, got {}",
            crate::caratheodory::lemmas::MAX_LEMMA_VERTICES,
            cfg.len()
        )));
    }
    let dual = SComplex::zero_avoiding(cfg).alexander_dual();
    let mut rows = global_rows(cfg, opts)?;
    let per: Vec<Result<Vec<LemmaRow>>> = subsets.par_iter().map(|&u| subset_rows(cfg, &dual, u, opts)).collect();
    for r in per {
        rows.extend(r?);
    }
    Ok(rows)
}

/// The induced-dual lemma suite on random configurations with at most
/// `max_vertices` points; all proper subsets when there are at most
/// `sample` of them, otherwise `sample` random ones.
pub fn lemmas(seed: u64, count: usize, max_vertices: usize, sample: usize, opts: SuiteOptions) -> CampaignReport {
    run("induced-dual-lemmas", seed, count, |c, id| {
        let mut rng = case_rng(seed, id);
        let d = rng.random_range(1..=3);
        let n = rng.random_range(2..=max_vertices);
        let (cfg, planted, label) = match id % 5 {
            4 if d >= 2 && n > d => {
                let in_plane = rng.random_range(d..n.min(d + 2) + 1).min(n - 1);
                let below = rng.random_range(0..=(n - in_plane - 1).min(2));
                let (cfg, u) = plant_hyperplane_subset(&mut rng, d, in_plane, below, n - in_plane - below);
                (cfg, Some(u), "hyperplane".to_string())
            }
            k => {
                let shape = Shape::ALL[(k as usize) % Shape::ALL.len()];
                (shaped_config(&mut rng, d, n, shape), None, format!("{shape:?}"))
            }
        };
        let total = (1usize << cfg.len()) - 2;
        let choice = if total <= sample { SubsetChoice::All } else { SubsetChoice::Sampled(sample) };
        let mut subsets = choose_subsets(&cfg, choice, &mut rng);
        if let Some(u) = planted.filter(|u| !subsets.contains(u)) {
            subsets.push(u);
        }
        for row in lemma_rows(&cfg, &subsets, opts)? {
            if row.hypothesis_held {
                c.count(format!("{}:applicable", row.lemma));
            }
            c.check(!row.failed(), || format!("{} U={:?}: {}", row.lemma, row.subset, row.details));
        }
        c.note(format!("d={d} n={} {label}, {} subsets", cfg.len(), subsets.len()));
        Ok(())
    })
}

/// Generated hypothesis-passing instances of `tag` over `d in {1,2,3}`,
/// `r in {d+1, d+2}`, `N <= 10`: `solve` must return a verifying
/// certificate, containing the pinned vertex for CC2.
pub fn theorem(seed: u64, tag: VariantTag, count: usize) -> CampaignReport {
    run(&format!("theorem-{}", tag.name()), seed, count, |c, id| {
        let mut rng = case_rng(seed, id);
        let d = 1 + (id % 3) as usize;
        let r = d + 1 + ((id / 3) % 2) as usize;
        let mut spec = GenSpec::new(tag, d, r);
        if tag == VariantTag::MAIN && id % 4 == 3 {
            let a = rng.random_range(0..r);
            let b = (a + rng.random_range(1..r)) % r;
            spec.l_classes = Some((a, b));
        }
        let inst = gen_instance(&mut rng, &spec)?;
        let cert = solve(&inst)?;
        c.check(verify_certificate(&inst, &cert), || format!("certificate {cert:?} does not verify"));
        if tag == VariantTag::CC2 {
            let p = inst.variant.pinned_vertex().expect("CC2 has a pinned vertex");
            c.check(cert.face.contains(p), || format!("pinned vertex {p} missing from {}", cert.face));
        }
        c.count(format!("|J|={}", cert.face.len()));
        c.note(format!("d={d} r={r} N={} J={}", inst.n() - 1, cert.face));
        Ok(())
    })
}

/// Colourful complex of a random partition of the vertices into `r` classes.
fn random_partition_complex(rng: &mut impl Rng, n: usize, r: usize) -> SComplex {
    let owner: Vec<usize> = (0..n).map(|_| rng.random_range(0..r)).collect();
    SComplex::from_predicate(index_labels(n), |f| {
        let mut used = vec![false; r];
        f.iter().all(|v| !std::mem::replace(&mut used[owner[v]], true))
    })
    .expect("downward closed")
}

/// `k` with every vertex added as a face, as every theorem's constraint
/// complex uses all vertices.
fn spanning(k: SComplex) -> SComplex {
    let mut facets = k.facets();
    facets.extend((0..k.n()).map(VSet::singleton));
    SComplex::from_facets(k.universe().to_vec(), &facets).expect("valid facets")
}

/// The covering-scheme dichotomy, the transversal/selection correspondence
/// and the nerve identification on instances with `N <= 8`: even ids use
/// generated hypothesis-passing instances, odd ids adversarial ones.
pub fn covering(seed: u64, count: usize) -> CampaignReport {
    run("covering-scheme", seed, count, |c, id| {
        let mut rng = case_rng(seed, id);
        let (cfg, k, label) = if id % 2 == 0 {
            let tags = [VariantTag::CC1, VariantTag::CC2, VariantTag::CC3, VariantTag::MAIN, VariantTag::CC4];
            let tag = tags[(id / 2 % 5) as usize];
            let d = rng.random_range(1..=2);
            let spec = GenSpec { max_points: 7, ..GenSpec::new(tag, d, d + 1) };
            let inst = gen_instance(&mut rng, &spec)?;
            (inst.config.clone(), inst.constraint_complex()?, format!("{tag}"))
        } else {
            let d = rng.random_range(1..=3);
            let n = rng.random_range(2..=9);
            let shape = Shape::ALL[rng.random_range(0..Shape::ALL.len())];
            let cfg = shaped_config(&mut rng, d, n, shape);
            let k = if rng.random_bool(0.5) {
                let r = rng.random_range(1..=d);
                random_partition_complex(&mut rng, n, r)
            } else {
                spanning(random_complex(&mut rng, n))
            };
            (cfg, k, format!("adversarial {shape:?}"))
        };
        let rep = covering_check_for(&cfg, &k)?;
        c.check(rep.covering_lemma_holds, || "no selection but the family does not cover Z".into());
        c.check(rep.dichotomy_holds, || "transversal existence does not match non-covering".into());
        c.check(rep.transversal_iff_selection, || "transversal existence does not match selection".into());
        c.check(rep.transversals_convert, || "a transversal does not convert to a certificate".into());
        if !rep.selection_exists && !rep.z_is_void {
            c.check(rep.nerve_is_boundary == Some(true), || "nerve is not the boundary of the simplex".into());
        }
        c.count(match (rep.selection_exists, rep.z_is_void) {
            (true, _) => "selection",
            (false, true) => "no-selection-void-z",
            (false, false) => "no-selection-nerve-checked",
        });
        c.note(format!("{label}, n={}, |Z|={} faces, {} transversals", cfg.len(), rep.z_faces, rep.transversals));
        Ok(())
    })
}

/// The Betti convolution identity for joins of random complexes on at most
/// seven vertices each.
pub fn kunneth(seed: u64, count: usize) -> CampaignReport {
    run("kunneth-join", seed, count, |c, id| {
        let mut rng = case_rng(seed, id);
        let (n1, n2) = (rng.random_range(1..=7), rng.random_range(1..=7));
        let k1 = random_complex(&mut rng, n1).relabel((0..n1).map(|i| format!("a{i}")).collect())?;
        let k2 = random_complex(&mut rng, n2).relabel((0..n2).map(|i| format!("b{i}")).collect())?;
        c.check(check_kunneth_join(&k1, &k2)?, || format!("join identity fails for {} and {}", k1.to_json(), k2.to_json()));
        c.note(format!("{} x {} faces", k1.num_faces(), k2.num_faces()));
        Ok(())
    })
}

/// The homological nerve theorem on covering families of small `Z`: draws
/// candidates until `count` of them satisfy the vanishing hypothesis for
/// some `k >= 0` (or for every `k`), giving up after `max_attempts`.
pub fn meshulam(seed: u64, count: usize, max_attempts: usize) -> CampaignReport {
    let attempts: Vec<(usize, Option<Case>)> = (0..max_attempts)
        .into_par_iter()
        .map(|id| {
            let mut c = Case::new(id);
            let mut rng = case_rng(seed, id as u64);
            let d = rng.random_range(1..=2);
            let n = rng.random_range(2..=5);
            let cfg = random_config(&mut rng, d, n);
            let k = if rng.random_bool(0.5) {
                let r = rng.random_range(1..=d + 1);
                random_partition_complex(&mut rng, n, r)
            } else {
                random_complex(&mut rng, n)
            };
            match meshulam_check_for(&cfg, &k) {
                Err(e) => (id, Some(c.fail(e))),
                Ok(rep) if rep.applicable && rep.k.is_none_or(|k| k >= 0) => {
                    c.check(rep.agrees, || format!("Z {:?} vs nerve {:?} through k={:?}", rep.z_betti, rep.nerve_betti, rep.k));
                    c.count(match rep.k {
                        Some(k) => format!("k={k}"),
                        None => "k=unbounded".to_string(),
                    });
                    c.note(format!("d={d} n={n} k={:?}", rep.k));
                    (id, Some(c))
                }
                Ok(_) => (id, None),
            }
        })
        .collect();
    let mut results: Vec<Case> = attempts.into_iter().filter_map(|(_, c)| c).take(count).collect();
    if results.len() < count {
        let mut short = Case::new(max_attempts);
        short.check(false, || format!("only {} qualifying instances in {max_attempts} attempts", results.len()));
        results.push(short);
    }
    CampaignReport::collect("meshulam-range", seed, results)
}

/// Constrained Tverberg search with `d in {1,2}`, `r in {2,3}`,
/// `N = (d+1)(r-1) + {0,1}` and a random connected spanning `L`.
pub fn tverberg(seed: u64, count: usize) -> CampaignReport {
    run("constrained-tverberg", seed, count, |c, id| {
        let mut rng = case_rng(seed, id);
        let d = 1 + (id % 2) as usize;
        let r = 2 + ((id / 2) % 2) as usize;
        let n = (d + 1) * (r - 1) + ((id / 4) % 2) as usize + 1;
        let cfg = random_config(&mut rng, d, n);
        let l = random_pair_complex(&mut rng, r);
        let sol = solve_tverberg(&cfg, r, &l, (0, 1))?;
        c.check(verify_tverberg(&cfg, r, &l, (0, 1), &sol), || format!("solution {} does not verify", sol.to_json()));
        c.count(if sol.labeling.is_full() { "full-labeling" } else { "partial-labeling" });
        c.note(format!("d={d} r={r} N={} labeling={:?}", n - 1, sol.labeling.0));
        Ok(())
    })
}

/// Sizes of a full verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Plan {
    pub predicates: usize,
    pub alexander_complexes: usize,
    pub alexander_configs: usize,
    pub convexity: usize,
    pub lemma_configs: usize,
    pub lemma_max_vertices: usize,
    pub lemma_sample: usize,
    pub theorem: usize,
    pub covering: usize,
    pub kunneth: usize,
    pub meshulam: usize,
    pub tverberg: usize,
}

impl Plan {
    /// The sizes demanded by the acceptance criteria.
    pub const FULL: Plan = Plan {
        predicates: 500,
        alexander_complexes: 500,
        alexander_configs: 200,
        convexity: 200,
        lemma_configs: 100,
        lemma_max_vertices: 12,
        lemma_sample: 200,
        theorem: 200,
        covering: 200,
        kunneth: 300,
        meshulam: 50,
        tverberg: 100,
    };

    /// A fast run for smoke testing.
    pub const QUICK: Plan = Plan {
        predicates: 40,
        alexander_complexes: 40,
        alexander_configs: 20,
        convexity: 20,
        lemma_configs: 10,
        lemma_max_vertices: 8,
        lemma_sample: 40,
        theorem: 20,
        covering: 20,
        kunneth: 30,
        meshulam: 5,
        tverberg: 12,
    };
}

/// Every campaign of `plan`, in a fixed order.
pub fn run_all(seed: u64, plan: &Plan, opts: SuiteOptions) -> Vec<CampaignReport> {
    let mut out = vec![
        predicates(seed, plan.predicates),
        alexander(seed, plan.alexander_complexes, plan.alexander_configs),
        convexity(seed, plan.convexity),
        lemmas(seed, plan.lemma_configs, plan.lemma_max_vertices, plan.lemma_sample, opts),
    ];
    for tag in [VariantTag::CC1, VariantTag::CC2, VariantTag::CC3, VariantTag::MAIN] {
        out.push(theorem(seed, tag, plan.theorem));
    }
    out.push(covering(seed, plan.covering));
    out.push(kunneth(seed, plan.kunneth));
    out.push(meshulam(seed, plan.meshulam, plan.meshulam * 100));
    out.push(tverberg(seed, plan.tverberg));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_campaigns_pass_and_repeat() {
        let a = run_all(5, &Plan::QUICK, SuiteOptions::default());
        for rep in &a {
            assert!(rep.passed(), "{}\n{:?}", rep.headline(), rep.failures().take(3).collect::<Vec<_>>());
        }
        let b = run_all(5, &Plan::QUICK, SuiteOptions::default());
        let ja: Vec<String> = a.iter().map(CampaignReport::to_json).collect();
        let jb: Vec<String> = b.iter().map(CampaignReport::to_json).collect();
        assert_eq!(ja, jb);
    }

    #[test]
    fn corrupted_homology_fails_the_lemma_campaign() {
        let rep = lemmas(1, 3, 6, 20, SuiteOptions { corrupt_betti: true });
        assert!(!rep.passed());
    }

    #[test]
    fn zero_sample_is_empty() {
        let cfg = PointConfig::from_ints(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]).unwrap();
        let mut rng = case_rng(0, 0);
        assert!(choose_subsets(&cfg, SubsetChoice::Sampled(0), &mut rng).is_empty());
        assert_eq!(choose_subsets(&cfg, SubsetChoice::All, &mut rng).len(), 14);
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}

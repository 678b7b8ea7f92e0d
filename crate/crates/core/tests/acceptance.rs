//! Runs every acceptance criterion at full size and prints one line each.
//! Exits nonzero if any criterion fails.

mod common;

use std::time::Instant;

use carathe::campaign::{self, CampaignReport, Plan};
use carathe::caratheodory::{SuiteOptions, VariantTag};
use carathe::generate::{case_rng, random_complex, random_config, random_pair_complex};
use carathe::homology::betti;
use carathe::tverberg::{solve_tverberg, verify_tverberg};
use rand::Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_reports(reports: &[&CampaignReport]) -> Outcome {
    let passed = reports.iter().all(|r| r.passed());
    let mut detail: Vec<String> = reports.iter().map(|r| r.headline()).collect();
    for r in reports {
        for c in r.failures().take(3) {
            detail.push(format!("  case {}: {}", c.id, c.summary));
        }
    }
    Outcome { passed, detail: detail.join("\n    ") }
}

/// Betti numbers against dense elimination, and duality checked with the
/// dense oracle on both sides.
fn alexander_oracle(count: usize) -> Outcome {
    let mut bad = Vec::new();
    for id in 0..count as u64 {
        let mut rng = case_rng(SEED ^ 0xa1e7, id);
        let n = rng.random_range(1..=9);
        let k = random_complex(&mut rng, n);
        let dense = common::dense_betti(&k);
        let fast = betti(&k).unwrap();
        if (0..dense.len()).any(|i| dense[i] != fast.get(i as isize - 1)) {
            bad.push(format!("betti mismatch on {}", k.to_json()));
        }
        if !k.is_simplex() {
            let dual = common::dense_betti(&k.alexander_dual());
            let get = |v: &Vec<usize>, i: isize| if i < -1 { 0 } else { v.get((i + 1) as usize).copied().unwrap_or(0) };
            let nn = n as isize;
            if (-1..=nn).any(|i| get(&dense, i) != get(&dual, nn - 3 - i)) {
                bad.push(format!("dense duality fails on {}", k.to_json()));
            }
        }
    }
    Outcome { passed: bad.is_empty(), detail: format!("dense oracle on {count} complexes, {} mismatches {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()) }
}

/// Constrained Tverberg instances, with the `r = 2` ones compared to a
/// brute-force Radon search that decides hull intersection by separation.
fn tverberg_with_oracle(count: usize) -> Outcome {
    let mut bad = Vec::new();
    let mut radon_compared = 0;
    for id in 0..count as u64 {
        let mut rng = case_rng(SEED ^ 0x7e5b, id);
        let d = 1 + (id % 2) as usize;
        let r = 2 + ((id / 2) % 2) as usize;
        let n = (d + 1) * (r - 1) + ((id / 4) % 2) as usize + 1;
        let cfg = random_config(&mut rng, d, n);
        let l = random_pair_complex(&mut rng, r);
        match solve_tverberg(&cfg, r, &l, (0, 1)) {
            Err(e) => bad.push(format!("case {id}: {e}")),
            Ok(sol) => {
                if !verify_tverberg(&cfg, r, &l, (0, 1), &sol) {
                    bad.push(format!("case {id}: solution does not verify"));
                }
                if r == 2 {
                    radon_compared += 1;
                    let oracle = common::radon_first(&cfg, &l, (0, 1));
                    if oracle.as_ref() != Some(&sol.labeling) {
                        bad.push(format!("case {id}: solver {:?} vs Radon search {:?}", sol.labeling, oracle));
                    }
                }
            }
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!("{count} instances, {radon_compared} compared with Radon search, failures {:?}", bad.iter().take(3).collect::<Vec<_>>()),
    }
}

fn main() {
    let plan = Plan::FULL;
    let opts = SuiteOptions::default();
    let mut all_passed = true;
    let mut report = |name: &str, start: Instant, o: Outcome| {
        all_passed &= o.passed;
        println!(
            "[{}] {name} ({:.1}s)\n    {}",
            if o.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    };

    let t = Instant::now();
    let predicates = campaign::predicates(SEED, plan.predicates);
    report("predicate-lemma equivalences", t, from_reports(&[&predicates]));

    let t = Instant::now();
    let alexander = campaign::alexander(SEED, plan.alexander_complexes, plan.alexander_configs);
    let oracle = alexander_oracle(plan.alexander_complexes);
    let mut o = from_reports(&[&alexander]);
    o.passed &= oracle.passed;
    o.detail = format!("{}\n    {}", o.detail, oracle.detail);
    report("Alexander duality", t, o);

    let t = Instant::now();
    let convexity = campaign::convexity(SEED, plan.convexity);
    report("topology of the convexity complex", t, from_reports(&[&convexity]));

    let t = Instant::now();
    let lemmas = campaign::lemmas(SEED, plan.lemma_configs, plan.lemma_max_vertices, plan.lemma_sample, opts);
    let mut o = from_reports(&[&lemmas]);
    let lemma_names = ["induced_01", "induced_02", "induced_03_5", "induced_04", "induced_05", "induced_06", "induced_07", "induced_08"];
    let unexercised: Vec<&str> =
        lemma_names.into_iter().filter(|l| !lemmas.coverage.contains_key(&format!("{l}:applicable"))).collect();
    o.passed &= unexercised.is_empty();
    o.detail = format!("{}\n    applicable rows: {:?}\n    never applicable: {unexercised:?}", o.detail, lemmas.coverage);
    report("induced-dual lemma suite", t, o);

    let t = Instant::now();
    let theorems: Vec<CampaignReport> = [VariantTag::CC1, VariantTag::CC2, VariantTag::CC3, VariantTag::MAIN]
        .into_iter()
        .map(|tag| campaign::theorem(SEED, tag, plan.theorem))
        .collect();
    report("theorem campaigns", t, from_reports(&theorems.iter().collect::<Vec<_>>()));

    let t = Instant::now();
    let covering = campaign::covering(SEED, plan.covering);
    let mut o = from_reports(&[&covering]);
    o.detail = format!("{}\n    {:?}", o.detail, covering.coverage);
    report("covering-scheme dichotomy", t, o);

    let t = Instant::now();
    let kunneth = campaign::kunneth(SEED, plan.kunneth);
    let meshulam = campaign::meshulam(SEED, plan.meshulam, plan.meshulam * 100);
    let mut o = from_reports(&[&kunneth, &meshulam]);
    o.detail = format!("{}\n    {:?}", o.detail, meshulam.coverage);
    report("Kunneth join and Meshulam range", t, o);

    let t = Instant::now();
    let tverberg = campaign::tverberg(SEED, plan.tverberg);
    let oracle = tverberg_with_oracle(plan.tverberg);
    let mut o = from_reports(&[&tverberg]);
    o.passed &= oracle.passed;
    o.detail = format!("{}\n    {}", o.detail, oracle.detail);
    report("constrained Tverberg", t, o);

    let t = Instant::now();
    let first: Vec<String> = [&predicates, &alexander, &convexity, &lemmas]
        .into_iter()
        .chain(theorems.iter())
        .chain([&covering, &kunneth, &meshulam, &tverberg])
        .map(|r| r.to_json() + &r.to_csv())
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let second: Vec<String> = pool.install(|| campaign::run_all(SEED, &plan, opts)).iter().map(|r| r.to_json() + &r.to_csv()).collect();
    let same = first == second;
    report(
        "determinism",
        t,
        Outcome { passed: same, detail: format!("{} reports rerun on a 3-thread pool, byte-identical: {same}", first.len()) },
    );

    if !all_passed {
        std::process::exit(1);
    }
}

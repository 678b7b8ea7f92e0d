use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use carathe::campaign::{self, lemma_rows, run_all, CampaignReport, Plan, SubsetChoice};
use carathe::caratheodory::{check_hypotheses, covering_check, solve, verify_certificate, Instance, SuiteOptions, VariantTag};
use carathe::generate::{case_rng, gen_instance, GenSpec};
use carathe::scomplex::SComplex;
use carathe::tverberg::{canonical_pair_complex, check_pair_complex, full_pair_complex, pair_complex_from_edges, solve_tverberg, verify_tverberg};
use carathe::{Error, PointConfig};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "carathe", version, about = "Exact colourful Carathéodory, covering-scheme and constrained Tverberg tools")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tag {
    Cc1,
    Cc2,
    Cc3,
    Cc4,
    Main,
}

impl From<Tag> for VariantTag {
    fn from(t: Tag) -> Self {
        match t {
            Tag::Cc1 => VariantTag::CC1,
            Tag::Cc2 => VariantTag::CC2,
            Tag::Cc3 => VariantTag::CC3,
            Tag::Cc4 => VariantTag::CC4,
            Tag::Main => VariantTag::MAIN,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate hypothesis-passing instances.
    Gen {
        #[arg(long, value_enum, ignore_case = true)]
        variant: Tag,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        /// Comma-separated class sizes.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Largest N (so at most N + 1 points) when sizes are drawn at random.
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Find a face of the constraint complex whose image contains the origin.
    Solve {
        instance: PathBuf,
        /// Certificate file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the lemma suite on a configuration.
    Lemmas {
        #[arg(long)]
        config: PathBuf,
        /// `all` or the number of random subsets.
        #[arg(long, default_value = "all")]
        subsets: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Directory for lemmas.csv and lemmas.json.
        #[arg(long)]
        out: PathBuf,
        /// Perturb every Betti profile, to check that failures are reported.
        #[arg(long, hide = true)]
        corrupt_betti: bool,
    },
    /// Verify the covering scheme of an instance.
    Cover {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Constrained Tverberg search.
    Tverberg {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        r: usize,
        /// Constraint complex on [r]*[r]; the full complex when absent.
        #[arg(long = "L")]
        l: Option<PathBuf>,
        /// Vertices whose labels L constrains (default 0 1).
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        permute_anchor: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every verification campaign and write the reports.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Small campaign sizes.
        #[arg(long)]
        quick: bool,
    },
}

/// A failure that maps to an exit code: 1 for bad input, 2 for a search
/// that found nothing or a check that failed.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let err = e.into();
        let code = match err.downcast_ref::<Error>() {
            Some(Error::NoSelection(_) | Error::NoPartition(_)) => 2,
            _ => 1,
        };
        Failure { code, err }
    }
}

fn checks_failed(msg: String) -> Failure {
    Failure { code: 2, err: anyhow::anyhow!(msg) }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_report(dir: &Path, rep: &CampaignReport) -> anyhow::Result<()> {
    fs::write(dir.join(format!("{}.json", rep.campaign)), rep.to_json() + "\n")?;
    fs::write(dir.join(format!("{}.csv", rep.campaign)), rep.to_csv())?;
    Ok(())
}

fn cmd_gen(spec: GenSpec, count: usize, seed: u64, out: &Path) -> Result<(), Failure> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for i in 0..count {
        let inst = gen_instance(&mut case_rng(seed, i as u64), &spec)?;
        let report = check_hypotheses(&inst);
        if !report.passed {
            return Err(anyhow::anyhow!("generated instance {i} fails its hypotheses: {}", report.failures().join("; ")).into());
        }
        let path = out.join(format!("{}_{i:04}.json", spec.tag.name()));
        fs::write(&path, inst.to_json() + "\n")?;
    }
    eprintln!("wrote {count} {} instance(s) to {}", spec.tag, out.display());
    Ok(())
}

fn cmd_solve(path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let inst = Instance::from_json(&read(path)?)?;
    let report = check_hypotheses(&inst);
    if !report.passed {
        eprintln!("warning: hypotheses fail ({}); solving anyway", report.failures().join("; "));
    }
    let start = Instant::now();
    let cert = solve(&inst)?;
    let elapsed = start.elapsed();
    if !verify_certificate(&inst, &cert) {
        return Err(checks_failed("internal error: certificate does not verify".into()));
    }
    emit(out, &serde_json::to_string(&cert)?)?;
    eprintln!("{}: |J| = {} in {:.3} ms", inst.variant.tag, cert.face.len(), elapsed.as_secs_f64() * 1e3);
    Ok(())
}

fn cmd_lemmas(config: &Path, subsets: &str, seed: u64, out: &Path, corrupt: bool) -> Result<(), Failure> {
    let cfg = PointConfig::from_json(&read(config)?)?;
    let choice = match subsets {
        "all" => SubsetChoice::All,
        k => SubsetChoice::Sampled(k.parse().with_context(|| format!("--subsets must be `all` or a count, got {k:?}"))?),
    };
    let us = campaign::choose_subsets(&cfg, choice, &mut case_rng(seed, 0));
    let rows = lemma_rows(&cfg, &us, SuiteOptions { corrupt_betti: corrupt })?;
    let failed = rows.iter().filter(|r| r.failed()).count();
    fs::create_dir_all(out)?;
    let mut csv = String::from("subset,lemma,hypothesis_held,conclusion_held,details\n");
    for r in &rows {
        let subset = r.subset.as_ref().map(|s| format!("{s:?}")).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            campaign::csv_field(&subset),
            r.lemma,
            r.hypothesis_held,
            r.conclusion_held,
            campaign::csv_field(&r.details)
        ));
    }
    fs::write(out.join("lemmas.csv"), csv)?;
    let report = json!({ "subsets": us.len(), "rows": rows, "failed": failed, "passed": failed == 0 });
    fs::write(out.join("lemmas.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    eprintln!("{} subsets, {} rows, {failed} failed", us.len(), rows.len());
    if failed > 0 {
        return Err(checks_failed(format!("{failed} lemma rows failed")));
    }
    Ok(())
}

fn cmd_cover(path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let inst = Instance::from_json(&read(path)?)?;
    let rep = covering_check(&inst)?;
    emit(out, &serde_json::to_string_pretty(&rep)?)?;
    eprintln!(
        "{} transversals, covered = {}, nerve is the boundary = {:?}",
        rep.transversals, rep.covered, rep.nerve_is_boundary
    );
    if !rep.passed() {
        return Err(checks_failed("covering-scheme checks failed".into()));
    }
    Ok(())
}

fn load_l(path: &Path, r: usize) -> anyhow::Result<SComplex> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if let Some(edges) = value.get("edges") {
        let edges: Vec<(usize, usize)> = serde_json::from_value(edges.clone())?;
        return Ok(pair_complex_from_edges(r, &edges)?);
    }
    Ok(canonical_pair_complex(&SComplex::from_json(&text)?, r)?)
}

fn cmd_tverberg(config: &Path, r: usize, l: Option<&Path>, anchor: Option<Vec<usize>>, out: Option<&Path>) -> Result<(), Failure> {
    let cfg = PointConfig::from_json(&read(config)?)?;
    let l = match l {
        Some(p) => load_l(p, r)?,
        None => full_pair_complex(r),
    };
    check_pair_complex(&l, r)?;
    let anchors = match anchor.as_deref() {
        Some([i, j]) => (*i, *j),
        _ => (0, 1),
    };
    let start = Instant::now();
    let sol = solve_tverberg(&cfg, r, &l, anchors)?;
    if !verify_tverberg(&cfg, r, &l, anchors, &sol) {
        return Err(checks_failed("internal error: solution does not verify".into()));
    }
    emit(out, &sol.to_json())?;
    eprintln!("r = {r}: partition found in {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

fn cmd_selftest(seed: u64, out: &Path, quick: bool) -> Result<(), Failure> {
    fs::create_dir_all(out)?;
    let plan = if quick { Plan::QUICK } else { Plan::FULL };
    let reports = run_all(seed, &plan, SuiteOptions::default());
    let mut summary = String::new();
    for rep in &reports {
        write_report(out, rep)?;
        summary.push_str(&rep.headline());
        summary.push('\n');
    }
    // the harness must notice wrong homology
    let corrupted = campaign::lemmas(seed, 3, 6, 20, SuiteOptions { corrupt_betti: true });
    let harness_ok = !corrupted.passed();
    summary.push_str(&format!("corrupted-betti self-check: {}\n", if harness_ok { "PASS" } else { "FAIL" }));
    fs::write(out.join("summary.txt"), &summary)?;
    print!("{summary}");
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 || !harness_ok {
        return Err(checks_failed(format!("{failed} campaign(s) failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.cmd {
        Cmd::Gen { variant, d, r, sizes, n, count, seed, out } => {
            let spec = GenSpec { sizes, max_points: n + 1, ..GenSpec::new(variant.into(), d, r) };
            cmd_gen(spec, count, seed, &out)
        }
        Cmd::Solve { instance, out } => cmd_solve(&instance, out.as_deref()),
        Cmd::Lemmas { config, subsets, seed, out, corrupt_betti } => cmd_lemmas(&config, &subsets, seed, &out, corrupt_betti),
        Cmd::Cover { instance, out } => cmd_cover(&instance, out.as_deref()),
        Cmd::Tverberg { config, r, l, permute_anchor, out } => cmd_tverberg(&config, r, l.as_deref(), permute_anchor, out.as_deref()),
        Cmd::Selftest { seed, out, quick } => cmd_selftest(seed, &out, quick),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

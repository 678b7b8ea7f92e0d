//! Betti-level checks of the topology of zero-avoiding complexes, their
//! Alexander duals and the induced subcomplexes of the duals.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geomkernel::{
    cones_meet_nontrivially, covers_sphere, in_conv, in_interior, in_relint, lineality_space, open_hemis_intersect,
    PointConfig,
};
use crate::homology::{betti, BettiProfile};
use crate::scomplex::{index_labels, SComplex};
use crate::vset::VSet;

/// Largest configuration for which the dual-level checks run.
pub const MAX_LEMMA_VERTICES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub lemma: String,
    /// The subset `U`, or `None` for statements about the whole configuration.
    pub subset: Option<Vec<usize>>,
    pub hypothesis_held: bool,
    pub conclusion_held: bool,
    pub details: String,
}

impl LemmaRow {
    fn new(lemma: &str, subset: Option<VSet>, hypothesis_held: bool, conclusion_held: bool, details: String) -> Self {
        LemmaRow {
            lemma: lemma.to_string(),
            subset: subset.map(VSet::to_vec),
            hypothesis_held,
            conclusion_held: hypothesis_held && conclusion_held,
            details,
        }
    }

    /// A row fails when its hypothesis held but its conclusion did not.
    pub fn failed(&self) -> bool {
        self.hypothesis_held && !self.conclusion_held
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteOptions {
    /// Adds one to `b_0` of every computed profile before comparing, so the
    /// harness can prove that it notices wrong homology.
    pub corrupt_betti: bool,
}

fn profile(k: &SComplex, opts: SuiteOptions) -> Result<BettiProfile> {
    let b = betti(k)?;
    Ok(if opts.corrupt_betti { b.perturbed(0, 1) } else { b })
}

fn vanish_through(b: &BettiProfile, k: isize) -> bool {
    (-1..=k).all(|i| b.get(i) == 0)
}

fn vanish_from(b: &BettiProfile, k: isize, top: isize) -> bool {
    (k.max(-1)..=top).all(|i| b.get(i) == 0)
}

/// Statements about the whole configuration: the nerve description of
/// `C_A`, its homology, and the homology of its Alexander dual.
pub fn global_rows(cfg: &PointConfig, opts: SuiteOptions) -> Result<Vec<LemmaRow>> {
    let all = cfg.universe();
    let n = cfg.len() as isize;
    let x = SComplex::zero_avoiding(cfg);
    let relint = in_relint(cfg, all)?;
    let span = cfg.span_dim(all) as isize;
    let mut rows = Vec::new();

    let nerve =
        SComplex::from_predicate(index_labels(cfg.len()), |u| u.is_empty() || open_hemis_intersect(cfg, u).unwrap())?;
    rows.push(LemmaRow::new("nerve_of_hemispheres", None, true, nerve == x, format!("{} faces", x.num_faces())));

    let bx = profile(&x, opts)?;
    let (ok, want) = if relint {
        (bx.is_single_at(span - 1), format!("single Betti at {}", span - 1))
    } else {
        (bx.is_zero(), "acyclic".to_string())
    };
    rows.push(LemmaRow::new("convexity_complex", None, true, ok, format!("relint={relint}, want {want}, got {bx:?}")));

    let dual = x.alexander_dual();
    let bd = profile(&dual, opts)?;
    let (ok, want) = if relint {
        (bd.is_single_at(n - span - 2), format!("single Betti at {}", n - span - 2))
    } else {
        (bd.is_zero(), "acyclic".to_string())
    };
    rows.push(LemmaRow::new("dual_of_convexity_complex", None, true, ok, format!("relint={relint}, want {want}, got {bd:?}")));
    Ok(rows)
}

/// Every applicable check for one nonempty subset `U`, using a precomputed
/// Alexander dual `C_A^*`.
pub fn subset_rows(cfg: &PointConfig, dual: &SComplex, u: VSet, opts: SuiteOptions) -> Result<Vec<LemmaRow>> {
    let all = cfg.universe();
    let d = cfg.dim() as isize;
    let size = u.len() as isize;
    let rest = all.difference(u);
    let s = Some(u);
    let mut rows = Vec::new();

    // predicate-level equivalences
    let conv = in_conv(cfg, u)?.is_some();
    let interior = in_interior(cfg, u)?;
    rows.push(LemmaRow::new("non_empty_condition", s, true, open_hemis_intersect(cfg, u)? == !conv, String::new()));
    rows.push(LemmaRow::new("covering_of_sphere", s, true, covers_sphere(cfg, u)? == interior, String::new()));

    let induced = dual.restrict(u);
    let by_def = SComplex::dual_induced_by_definition(cfg, u)?;
    rows.push(LemmaRow::new("dual_induced_definition", s, true, induced == by_def, String::new()));

    let b = profile(&induced, opts)?;
    let top = size;
    let proper = !rest.is_empty();
    let rest_conv = proper && in_conv(cfg, rest)?.is_some();
    let a1 = proper && !rest_conv;

    rows.push(LemmaRow::new(
        "induced_01",
        s,
        rest_conv,
        induced.contains(u),
        format!("{} faces", induced.num_faces()),
    ));
    rows.push(LemmaRow::new("induced_02", s, true, vanish_from(&b, size - 1, top), format!("{b:?}")));
    rows.push(LemmaRow::new("induced_03_5", s, proper, vanish_through(&b, size - d - 2), format!("{b:?}")));

    let meet = a1 && cones_meet_nontrivially(cfg, rest, u)?;
    rows.push(LemmaRow::new("induced_04", s, a1 && interior, b.is_zero(), format!("{b:?}")));
    rows.push(LemmaRow::new("induced_05", s, meet, b.is_zero(), format!("{b:?}")));

    let a123 = a1 && !interior && !meet;
    let (lin, relint) = if a123 { (lineality_space(cfg, u)?.dim as isize, in_relint(cfg, u)?) } else { (0, false) };
    rows.push(LemmaRow::new(
        "induced_06",
        s,
        a123 && lin == d - 1,
        b.is_single_at(size - d - 1),
        format!("dim L_U = {lin}, want single Betti at {}, got {b:?}", size - d - 1),
    ));
    rows.push(LemmaRow::new(
        "induced_07",
        s,
        a123 && relint,
        b.is_single_at(size - lin - 2),
        format!("dim L_U = {lin}, want single Betti at {}, got {b:?}", size - lin - 2),
    ));
    let compact_pattern = b.is_single_at(size - d - 1);
    let open_pattern = vanish_through(&b, size - d - 1) && vanish_from(&b, size - lin - 1, top);
    rows.push(LemmaRow::new(
        "induced_08",
        s,
        a123 && !relint,
        compact_pattern || open_pattern,
        format!("dim L_U = {lin}, got {b:?}"),
    ));
    Ok(rows)
}

/// [`global_rows`] plus [`subset_rows`] for one subset.
pub fn lemma_suite(cfg: &PointConfig, u: VSet, opts: SuiteOptions) -> Result<Vec<LemmaRow>> {
    if cfg.len() > MAX_LEMMA_VERTICES {
        return Err(crate::Error::Resource(format!(
            "lemma checks need at most {MAX_LEMMA_VERTICES} vertices, got {}",
            cfg.len()
        )));
    }
    let dual = SComplex::zero_avoiding(cfg).alexander_dual();
    let mut rows = global_rows(cfg, opts)?;
    rows.extend(subset_rows(cfg, &dual, u, opts)?);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PointConfig {
        PointConfig::from_ints(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]).unwrap()
    }

    #[test]
    fn square_dual_is_two_edges() {
        let cfg = square();
        let dual = SComplex::zero_avoiding(&cfg).alexander_dual();
        assert_eq!(dual.facets(), vec![VSet::from_indices([0, 2]), VSet::from_indices([1, 3])]);
        let rows = global_rows(&cfg, SuiteOptions::default()).unwrap();
        let r = rows.iter().find(|r| r.lemma == "dual_of_convexity_complex").unwrap();
        assert!(r.hypothesis_held && r.conclusion_held, "{r:?}");
    }

    #[test]
    fn square_all_subsets_pass() {
        let cfg = square();
        let dual = SComplex::zero_avoiding(&cfg).alexander_dual();
        let mut applicable = 0;
        for u in cfg.universe().subsets().skip(1) {
            for row in subset_rows(&cfg, &dual, u, SuiteOptions::default()).unwrap() {
                assert!(!row.failed(), "{row:?}");
                applicable += row.hypothesis_held as usize;
            }
        }
        assert!(applicable > 0);
    }

    #[test]
    fn ray_dual_is_acyclic() {
        let cfg = PointConfig::from_ints(1, &[&[1], &[2], &[3]]).unwrap();
        for row in lemma_suite(&cfg, cfg.universe(), SuiteOptions::default()).unwrap() {
            assert!(!row.failed(), "{row:?}");
        }
        assert!(SComplex::zero_avoiding(&cfg).alexander_dual().is_void());
    }

    #[test]
    fn corrupted_betti_is_noticed() {
        let cfg = square();
        let rows = lemma_suite(&cfg, cfg.universe(), SuiteOptions { corrupt_betti: true }).unwrap();
        assert!(rows.iter().any(LemmaRow::failed));
    }
}

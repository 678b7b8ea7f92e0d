//! The covering scheme: `Z = C_A^* * K` on two copies of the vertex set,
//! coloured by the pairs `C_j = {p_j^(1), p_j^(2)}`.

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::geomkernel::{in_conv, PointConfig};
use crate::homology::{betti, BettiProfile};
use crate::scomplex::{max_faces, ColorClasses, SComplex};
use crate::vset::VSet;

use super::solve::first_zero_face;
use super::variant::{Certificate, Instance};

/// Largest `N` (so `N + 1` vertices) for which `Z` is materialized.
pub const MAX_Z_N: usize = 11;

pub struct CoveringZ {
    pub z: SComplex,
    pub colors: ColorClasses,
    /// Number of vertices `N + 1` of the original simplex.
    pub n: usize,
}

/// Builds `Z = C_A^* * K` for an arbitrary constraint complex `K` on the
/// configuration's vertices. First-copy vertices are labeled `j^1`, second-copy
/// ones `j^2`.
pub fn build_z_for(cfg: &PointConfig, k: &SComplex) -> Result<CoveringZ> {
    let n = cfg.len();
    if n > MAX_Z_N + 1 {
        return Err(Error::Resource(format!(
            "Z needs N <= {MAX_Z_N}, got N = {}; use solve, which does not build Z",
            n - 1
        )));
    }
    if k.n() != n {
        return input("the constraint complex must live on the configuration's vertices");
    }
    let x_dual = SComplex::zero_avoiding(cfg).alexander_dual();
    let count = x_dual.num_faces().saturating_mul(k.num_faces());
    if count > max_faces() {
        return Err(Error::Resource(format!(
            "Z would have {count} faces, above the cap of {} (CARATHE_MAX_FACES); use solve instead",
            max_faces()
        )));
    }
    let first = x_dual.relabel((0..n).map(|j| format!("{j}^1")).collect())?;
    let second = k.relabel((0..n).map(|j| format!("{j}^2")).collect())?;
    let z = first.join(&second)?;
    let colors = ColorClasses::new(2 * n, (0..n).map(|j| VSet::from_indices([j, n + j])).collect())?;
    Ok(CoveringZ { z, colors, n })
}

pub fn build_z(inst: &Instance) -> Result<CoveringZ> {
    build_z_for(&inst.config, &inst.constraint_complex()?)
}

/// Faces of `z` meeting every colour class.
pub fn colorful_transversals(z: &SComplex, colors: &ColorClasses) -> Vec<VSet> {
    z.faces().iter().copied().filter(|&f| colors.classes().iter().all(|c| !f.is_disjoint(*c))).collect()
}

/// Splits a transversal `T = I * J` and returns a certificate on `J`.
pub fn transversal_to_selection_for(cfg: &PointConfig, cz: &CoveringZ, t: VSet) -> Result<Certificate> {
    if !cz.z.contains(t) {
        return input(format!("{t} is not a face of Z"));
    }
    if let Some(j) = cz.colors.classes().iter().position(|c| t.is_disjoint(*c)) {
        return input(format!("{t} misses colour class C_{j}"));
    }
    let n = cz.n;
    let i_part = t.intersection(VSet::full(n));
    let j_part = VSet(t.0 >> n);
    let rest = VSet::full(n).difference(i_part);
    debug_assert!(rest.is_subset(j_part));
    let lambda = in_conv(cfg, rest)?.expect("first-copy part lies in the Alexander dual");
    let lambda = lambda.into_iter().filter(|(_, l)| !l.is_zero()).collect::<crate::geomkernel::Coefficients>();
    Ok(Certificate { face: lambda.keys().copied().collect(), lambda })
}

pub fn transversal_to_selection(t: VSet, inst: &Instance) -> Result<Certificate> {
    let cz = build_z(inst)?;
    transversal_to_selection_for(&inst.config, &cz, t)
}

/// The family `{Z[W - C_j]}` on the universe of `Z`.
pub fn cover_family(cz: &CoveringZ) -> Vec<SComplex> {
    let all = cz.z.universe_set();
    cz.colors.classes().iter().map(|c| cz.z.restrict(all.difference(*c))).collect()
}

/// Whether the members of `family` together contain every face of `z`,
/// tested member by member.
pub fn family_covers(z: &SComplex, family: &[SComplex]) -> bool {
    z.faces().iter().all(|&f| family.iter().any(|m| m.contains(f)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub z_vertices: usize,
    pub z_faces: usize,
    pub z_is_void: bool,
    pub transversals: usize,
    /// Some face of `K` has the origin in its image.
    pub selection_exists: bool,
    /// The family `{Z[W - C_j]}` covers `Z`.
    pub covered: bool,
    /// No selection implies covered.
    pub covering_lemma_holds: bool,
    /// Transversal exists iff the family fails to cover.
    pub dichotomy_holds: bool,
    /// Transversal exists iff a selection exists.
    pub transversal_iff_selection: bool,
    /// Every transversal converts to a verifying certificate.
    pub transversals_convert: bool,
    /// When covered and `Z` is not VOID: nerve of the family equals the
    /// boundary of the simplex on the `N + 1` class indices.
    pub nerve_is_boundary: Option<bool>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.covering_lemma_holds
            && self.dichotomy_holds
            && self.transversal_iff_selection
            && self.transversals_convert
            && self.nerve_is_boundary != Some(false)
    }
}

pub fn covering_check_for(cfg: &PointConfig, k: &SComplex) -> Result<CoverReport> {
    let cz = build_z_for(cfg, k)?;
    let transversals = colorful_transversals(&cz.z, &cz.colors);
    let family = cover_family(&cz);
    let covered = family_covers(&cz.z, &family);
    let selection_exists = first_zero_face(cfg, k, None).is_some();
    let transversals_convert = transversals.iter().all(|&t| {
        transversal_to_selection_for(cfg, &cz, t).is_ok_and(|c| {
            k.contains(c.face) && crate::geomkernel::verify_zero_combination(cfg, &c.lambda)
        })
    });
    let nerve_is_boundary = if covered && !cz.z.is_void() {
        let nerve = SComplex::nerve(&family)?;
        let boundary = SComplex::boundary(nerve.universe().to_vec())?;
        Some(nerve == boundary)
    } else {
        None
    };
    Ok(CoverReport {
        z_vertices: cz.z.n(),
        z_faces: cz.z.num_faces(),
        z_is_void: cz.z.is_void(),
        transversals: transversals.len(),
        selection_exists,
        covered,
        covering_lemma_holds: selection_exists || covered,
        dichotomy_holds: transversals.is_empty() == covered,
        transversal_iff_selection: transversals.is_empty() != selection_exists,
        transversals_convert,
        nerve_is_boundary,
    })
}

pub fn covering_check(inst: &Instance) -> Result<CoverReport> {
    covering_check_for(&inst.config, &inst.constraint_complex()?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshulamReport {
    /// The family covers `Z`, so the nerve theorem applies at all.
    pub applicable: bool,
    /// Largest `k` for which every nonempty `t`-fold intersection has
    /// vanishing homology in degrees `<= k - t + 1`; `None` when unbounded
    /// (all intersections acyclic) and the check is then run through `dim Z`.
    pub k: Option<isize>,
    pub z_betti: BettiProfile,
    pub nerve_betti: BettiProfile,
    /// `b_j(Z) = b_j(nerve)` for `0 <= j <= k`, and `b_{k+1}(Z) = 0` implies
    /// `b_{k+1}(nerve) = 0`.
    pub agrees: bool,
}

/// Checks the homological nerve theorem on the covering family of `Z`.
pub fn meshulam_check_for(cfg: &PointConfig, k: &SComplex) -> Result<MeshulamReport> {
    let cz = build_z_for(cfg, k)?;
    let family = cover_family(&cz);
    let z_betti = betti(&cz.z)?;
    let nerve = SComplex::nerve(&family)?;
    let nerve_betti = betti(&nerve)?;
    let applicable = !cz.z.is_void() && family_covers(&cz.z, &family);
    if !applicable {
        return Ok(MeshulamReport { applicable, k: None, z_betti, nerve_betti, agrees: true });
    }
    let all = cz.z.universe_set();
    let mut bound: Option<isize> = None;
    for s in nerve.faces() {
        if s.is_empty() {
            continue;
        }
        let removed = s.iter().fold(VSet::EMPTY, |acc, j| acc.union(cz.colors.classes()[j]));
        let inter = cz.z.restrict(all.difference(removed));
        let b = betti(&inter)?;
        if let Some(m) = b.lowest_nonzero() {
            let cap = m + s.len() as isize - 2;
            bound = Some(bound.map_or(cap, |c| c.min(cap)));
        }
    }
    let top = cz.z.dim().unwrap_or(-1).max(nerve.dim().unwrap_or(-1)) + 1;
    let k_eff = bound.unwrap_or(top);
    let mut agrees = (0..=k_eff).all(|j| z_betti.get(j) == nerve_betti.get(j));
    if z_betti.get(k_eff + 1) == 0 && nerve_betti.get(k_eff + 1) != 0 {
        agrees = false;
    }
    Ok(MeshulamReport { applicable, k: bound, z_betti, nerve_betti, agrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::variant::{Variant, VariantTag};
    use crate::scomplex::index_labels;

    fn sets(v: &[&[usize]]) -> Vec<VSet> {
        v.iter().map(|s| VSet::from_indices(s.iter().copied())).collect()
    }

    #[test]
    fn unit_line_example() {
        let cfg = PointConfig::from_ints(1, &[&[-1], &[1]]).unwrap();
        let inst = Instance::new(cfg.clone(), Variant::colourful(VariantTag::CC1, sets(&[&[0], &[1]])));
        let cz = build_z(&inst).unwrap();
        // C_A is two points, its dual is EMPTY, so Z is the edge on the second copy
        assert_eq!(cz.z.facets(), vec![VSet::from_indices([2, 3])]);
        let ts = colorful_transversals(&cz.z, &cz.colors);
        assert_eq!(ts, vec![VSet::from_indices([2, 3])]);
        let c = transversal_to_selection_for(&cfg, &cz, ts[0]).unwrap();
        assert_eq!(c.face, VSet::from_indices([0, 1]));
        assert!(transversal_to_selection_for(&cfg, &cz, VSet::from_indices([2])).is_err());
        let rep = covering_check(&inst).unwrap();
        assert!(rep.passed());
        assert!(rep.selection_exists && !rep.covered);
    }

    #[test]
    fn square_face_count() {
        let cfg = PointConfig::from_ints(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]).unwrap();
        let inst = Instance::new(cfg.clone(), Variant::colourful(VariantTag::CC1, sets(&[&[0, 1], &[2, 3]])));
        let cz = build_z(&inst).unwrap();
        let xd = SComplex::zero_avoiding(&cfg).alexander_dual();
        let k = inst.constraint_complex().unwrap();
        assert_eq!(cz.z.n(), 8);
        assert_eq!(cz.z.num_faces(), xd.num_faces() * k.num_faces());
    }

    #[test]
    fn full_zero_avoiding_complex_gives_void_z() {
        let cfg = PointConfig::from_ints(1, &[&[1], &[2], &[3]]).unwrap();
        let k = SComplex::simplex(index_labels(3)).unwrap();
        let rep = covering_check_for(&cfg, &k).unwrap();
        assert!(rep.z_is_void && rep.covered && !rep.selection_exists);
        assert!(rep.passed());
        assert_eq!(rep.nerve_is_boundary, None);
    }

    #[test]
    fn no_selection_gives_boundary_nerve() {
        // square, but K only allows the faces {e1, e2} and {-e1, -e2} apart
        let cfg = PointConfig::from_ints(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]).unwrap();
        let k = SComplex::from_facets(index_labels(4), &sets(&[&[0, 1], &[2, 3]])).unwrap();
        let rep = covering_check_for(&cfg, &k).unwrap();
        assert!(!rep.selection_exists && rep.covered);
        assert_eq!(rep.nerve_is_boundary, Some(true));
        assert!(rep.passed());
        let m = meshulam_check_for(&cfg, &k).unwrap();
        assert!(m.applicable);
        assert!(m.agrees, "{m:?}");
    }
}

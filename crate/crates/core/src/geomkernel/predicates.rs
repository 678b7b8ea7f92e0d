//! Geometric predicates on subsets of a [`PointConfig`], each decided by one
//! or more exact linear programs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::PointConfig;
use super::linalg::{independent_subset, RatVec};
use super::lp::{LinearSystem, LpOutcome, Relation, VarKind};
use super::rat::Rat;
use crate::error::{input, Result};
use crate::vset::VSet;

/// Convex coefficients indexed by vertex.
pub type Coefficients = BTreeMap<usize, Rat>;

// Rows `sum_u w_u A(u) = 0` over the given vertices, for variables starting at `offset`.
fn push_zero_combination(sys: &mut LinearSystem, cfg: &PointConfig, verts: &[usize], offset: usize, sign: &Rat) {
    let n = sys.num_vars();
    for i in 0..cfg.dim() {
        let mut row = vec![Rat::zero(); n];
        for (k, &v) in verts.iter().enumerate() {
            row[offset + k] = sign * &cfg.point(v)[i];
        }
        sys.push(row, Relation::Eq, Rat::zero());
    }
}

fn convex_system(cfg: &PointConfig, verts: &[usize], strict: bool) -> LinearSystem {
    let k = verts.len();
    let mut sys = LinearSystem::nonneg(k);
    sys.push(vec![Rat::one(); k], Relation::Eq, Rat::one());
    push_zero_combination(&mut sys, cfg, verts, 0, &Rat::one());
    if strict {
        for j in 0..k {
            let mut row = vec![Rat::zero(); k];
            row[j] = Rat::one();
            sys.push(row, Relation::Gt, Rat::zero());
        }
    }
    sys
}

/// Convex coefficients writing the origin as a combination of `A(U)`, if any.
pub fn in_conv(cfg: &PointConfig, u: VSet) -> Result<Option<Coefficients>> {
    cfg.check_subset(u, "in_conv")?;
    let verts = u.to_vec();
    Ok(convex_system(cfg, &verts, false).find_point().map(|x| verts.into_iter().zip(x).collect()))
}

/// Whether the origin is a strictly positive convex combination of `A(U)`.
pub fn in_relint(cfg: &PointConfig, u: VSet) -> Result<bool> {
    cfg.check_subset(u, "in_relint")?;
    Ok(convex_system(cfg, &u.to_vec(), true).is_feasible())
}

/// Whether the origin is an interior point of `conv A(U)` in `R^d`.
pub fn in_interior(cfg: &PointConfig, u: VSet) -> Result<bool> {
    cfg.check_subset(u, "in_interior")?;
    Ok(cfg.span_dim(u) == cfg.dim() && in_relint(cfg, u)?)
}

/// Whether some `x` has `<A(u), x> > 0` for every `u` in `U`, i.e. the open
/// hemispheres centred at the points of `U` share a point.
pub fn open_hemis_intersect(cfg: &PointConfig, u: VSet) -> Result<bool> {
    cfg.check_subset(u, "open_hemis_intersect")?;
    let mut sys = LinearSystem::free(cfg.dim());
    for v in u.iter() {
        sys.push(cfg.point(v).to_vec(), Relation::Gt, Rat::zero());
    }
    Ok(sys.is_feasible())
}

/// Whether the closed hemispheres centred at the points of `U` cover the
/// sphere, i.e. the cone `{x : <A(u), x> <= 0 for all u}` is `{0}`.
pub fn covers_sphere(cfg: &PointConfig, u: VSet) -> Result<bool> {
    cfg.check_subset(u, "covers_sphere")?;
    let d = cfg.dim();
    let mut sys = LinearSystem::free(d);
    for v in u.iter() {
        sys.push(cfg.point(v).to_vec(), Relation::Le, Rat::zero());
    }
    for i in 0..d {
        let mut e = vec![Rat::zero(); d];
        e[i] = Rat::one();
        sys.push(e.clone(), Relation::Le, Rat::one());
        sys.push(e, Relation::Ge, -Rat::one());
    }
    for i in 0..d {
        for sign in [1, -1] {
            let mut obj = vec![Rat::zero(); d];
            obj[i] = Rat::from_int(sign);
            match sys.maximize(&obj) {
                LpOutcome::Optimal { value, .. } if value.is_zero() => {}
                LpOutcome::Optimal { .. } => return Ok(false),
                other => unreachable!("box-bounded cone LP cannot be {other:?}"),
            }
        }
    }
    Ok(true)
}

/// The maximal linear subspace contained in `cone A(U)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lineality {
    pub basis: Vec<RatVec>,
    pub dim: usize,
}

/// Whether `-A(v)` lies in `cone A(U)`.
fn negation_in_cone(cfg: &PointConfig, verts: &[usize], v: usize) -> bool {
    let mut sys = LinearSystem::nonneg(verts.len());
    for i in 0..cfg.dim() {
        let row = verts.iter().map(|&w| cfg.point(w)[i].clone()).collect();
        sys.push(row, Relation::Eq, -&cfg.point(v)[i]);
    }
    sys.is_feasible()
}

/// Vertices `u` of `U` whose negation `-A(u)` lies in `cone A(U)`; their images
/// span the lineality space.
pub fn lineality_vertices(cfg: &PointConfig, u: VSet) -> Result<VSet> {
    cfg.check_subset(u, "lineality_space")?;
    let verts = u.to_vec();
    Ok(verts.iter().copied().filter(|&v| negation_in_cone(cfg, &verts, v)).collect())
}

pub fn lineality_space(cfg: &PointConfig, u: VSet) -> Result<Lineality> {
    let members: Vec<RatVec> = lineality_vertices(cfg, u)?.iter().map(|v| cfg.point(v).to_vec()).collect();
    let basis: Vec<RatVec> = independent_subset(&members).into_iter().map(|k| members[k].clone()).collect();
    Ok(Lineality { dim: basis.len(), basis })
}

/// Whether `cone A(U1)` and `cone A(U2)` share a vector of the form
/// `sum t_v A(v)` with `t >= 0` and `sum t = 1`. When the origin is not in
/// `conv A(U1)` that common vector is nonzero.
pub fn cones_meet_nontrivially(cfg: &PointConfig, u1: VSet, u2: VSet) -> Result<bool> {
    cfg.check_subset(u1, "cones_meet_nontrivially")?;
    cfg.check_subset(u2, "cones_meet_nontrivially")?;
    if !u1.is_disjoint(u2) {
        return input("cones_meet_nontrivially: the vertex sets must be disjoint");
    }
    let (a, b) = (u1.to_vec(), u2.to_vec());
    let n = a.len() + b.len();
    let mut sys = LinearSystem::new(vec![VarKind::NonNeg; n]);
    let mut norm = vec![Rat::zero(); n];
    norm[..a.len()].fill(Rat::one());
    sys.push(norm, Relation::Eq, Rat::one());
    for i in 0..cfg.dim() {
        let mut row = vec![Rat::zero(); n];
        for (k, &v) in a.iter().enumerate() {
            row[k] = cfg.point(v)[i].clone();
        }
        for (k, &v) in b.iter().enumerate() {
            row[a.len() + k] = -&cfg.point(v)[i];
        }
        sys.push(row, Relation::Eq, Rat::zero());
    }
    Ok(sys.is_feasible())
}

/// Checks `lambda >= 0`, `sum lambda = 1` and `sum lambda_v A(v) = 0` exactly.
pub fn verify_zero_combination(cfg: &PointConfig, lambda: &Coefficients) -> bool {
    if lambda.is_empty() || lambda.keys().any(|&v| v >= cfg.len()) || lambda.values().any(Rat::is_negative) {
        return false;
    }
    if lambda.values().sum::<Rat>() != Rat::one() {
        return false;
    }
    (0..cfg.dim()).all(|i| lambda.iter().map(|(&v, l)| l * &cfg.point(v)[i]).sum::<Rat>().is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(dim: usize, pts: &[&[i64]]) -> PointConfig {
        PointConfig::from_ints(dim, pts).unwrap()
    }

    fn all(c: &PointConfig) -> VSet {
        c.universe()
    }

    #[test]
    fn in_conv_examples() {
        let line = cfg(1, &[&[-1], &[1]]);
        let lam = in_conv(&line, all(&line)).unwrap().unwrap();
        assert_eq!(lam[&0], Rat::new(1, 2));
        assert_eq!(lam[&1], Rat::new(1, 2));

        let ray = cfg(1, &[&[1], &[2], &[3], &[4]]);
        for u in all(&ray).subsets().skip(1) {
            assert!(in_conv(&ray, u).unwrap().is_none());
        }
        assert!(in_conv(&ray, VSet::EMPTY).is_err());
    }

    #[test]
    fn relint_and_interior_examples() {
        let line = cfg(1, &[&[-1], &[1]]);
        assert!(in_relint(&line, all(&line)).unwrap());
        assert!(in_interior(&line, all(&line)).unwrap());

        let seg = cfg(2, &[&[1, 0], &[-1, 0]]);
        assert!(in_relint(&seg, all(&seg)).unwrap());
        assert!(!in_interior(&seg, all(&seg)).unwrap());

        let tri = cfg(2, &[&[1, 0], &[-1, 0], &[0, 1]]);
        assert!(in_conv(&tri, all(&tri)).unwrap().is_some());
        assert!(!in_relint(&tri, all(&tri)).unwrap());

        let square = cfg(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        assert!(in_interior(&square, all(&square)).unwrap());
    }

    #[test]
    fn hemisphere_examples() {
        let c = cfg(2, &[&[1, 0], &[0, 1]]);
        assert!(open_hemis_intersect(&c, all(&c)).unwrap());
        assert!(!covers_sphere(&c, all(&c)).unwrap());
        let seg = cfg(2, &[&[1, 0], &[-1, 0]]);
        assert!(!open_hemis_intersect(&seg, all(&seg)).unwrap());
        assert!(!covers_sphere(&seg, all(&seg)).unwrap());
        let square = cfg(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        assert!(covers_sphere(&square, all(&square)).unwrap());
    }

    #[test]
    fn lineality_examples() {
        let c = cfg(2, &[&[1, 0], &[-1, 0], &[0, 1]]);
        let l = lineality_space(&c, all(&c)).unwrap();
        assert_eq!(l.dim, 1);
        assert_eq!(l.basis, vec![vec![Rat::one(), Rat::zero()]]);
        let square = cfg(2, &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
        assert_eq!(lineality_space(&square, all(&square)).unwrap().dim, 2);
        let pointed = cfg(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(lineality_space(&pointed, all(&pointed)).unwrap().dim, 0);
    }

    #[test]
    fn cone_meeting_examples() {
        let c = cfg(2, &[&[1, 0], &[1, 1], &[1, -1], &[-1, 0]]);
        let s = VSet::singleton;
        assert!(cones_meet_nontrivially(&c, s(0), VSet::from_indices([1, 2])).unwrap());
        assert!(!cones_meet_nontrivially(&c, s(0), s(3)).unwrap());
        assert!(cones_meet_nontrivially(&c, s(0), s(0)).is_err());
        assert!(cones_meet_nontrivially(&c, VSet::EMPTY, s(0)).is_err());
    }
}

use crate::error::{Error, Result};
use crate::geomkernel::lp::{LinearSystem, LpOutcome, Relation};
use crate::geomkernel::{in_conv, verify_zero_combination, Coefficients, PointConfig, Rat};
use crate::scomplex::SComplex;
use crate::vset::VSet;

use super::variant::{Certificate, Instance, VariantTag};

/// Faces of `k` in solver order: increasing cardinality, then lexicographic.
pub fn faces_in_order(k: &SComplex) -> Vec<VSet> {
    let mut faces: Vec<VSet> = k.faces().iter().copied().filter(|f| !f.is_empty()).collect();
    faces.sort_by_cached_key(|f| f.card_lex_key());
    faces
}

/// Shrinks a certificate to the support of its coefficients.
fn prune(lambda: Coefficients) -> Certificate {
    let lambda: Coefficients = lambda.into_iter().filter(|(_, l)| !l.is_zero()).collect();
    Certificate { face: lambda.keys().copied().collect(), lambda }
}

/// A convex combination of `A(J)` at the origin maximizing the weight on `p`.
fn maximize_weight(cfg: &PointConfig, j: VSet, p: usize) -> Option<Coefficients> {
    let verts = j.to_vec();
    let k = verts.len();
    let mut sys = LinearSystem::nonneg(k);
    sys.push(vec![Rat::one(); k], Relation::Eq, Rat::one());
    for i in 0..cfg.dim() {
        sys.push(verts.iter().map(|&v| cfg.point(v)[i].clone()).collect(), Relation::Eq, Rat::zero());
    }
    let mut obj = vec![Rat::zero(); k];
    obj[verts.iter().position(|&v| v == p)?] = Rat::one();
    match sys.maximize(&obj) {
        LpOutcome::Optimal { x, .. } => Some(verts.into_iter().zip(x).collect()),
        _ => None,
    }
}

/// First face of `k` (in solver order) whose image contains the origin,
/// restricted to faces containing `must` when given.
pub fn first_zero_face(cfg: &PointConfig, k: &SComplex, must: Option<usize>) -> Option<Certificate> {
    for f in faces_in_order(k) {
        if must.is_some_and(|p| !f.contains(p)) {
            continue;
        }
        let Some(lambda) = in_conv(cfg, f).expect("nonempty face") else {
            continue;
        };
        return Some(match must {
            None => prune(lambda),
            Some(p) => {
                let best = maximize_weight(cfg, f, p).unwrap_or(lambda);
                if best[&p].is_zero() {
                    // every combination ignores p; the face itself still contains it
                    let mut c = prune(best);
                    c.face = c.face.insert(p);
                    c.lambda.insert(p, Rat::zero());
                    c
                } else {
                    prune(best)
                }
            }
        });
    }
    None
}

/// Finds a face `J` of the instance's constraint complex with `0 in A(J)`.
pub fn solve(inst: &Instance) -> Result<Certificate> {
    let k = inst.constraint_complex()?;
    let must = match inst.variant.tag {
        VariantTag::CC2 => inst.variant.pinned_vertex(),
        _ => None,
    };
    first_zero_face(&inst.config, &k, must).ok_or_else(|| {
        let hyp = super::variant::check_hypotheses(inst);
        let why = if hyp.passed {
            "the hypotheses hold, so this contradicts the theorem".to_string()
        } else {
            format!("hypotheses fail: {}", hyp.failures().join("; "))
        };
        Error::NoSelection(format!("no face of the {} constraint complex contains 0 in its image; {why}", inst.variant.tag))
    })
}

/// Re-checks a certificate exactly against the instance.
pub fn verify_certificate(inst: &Instance, cert: &Certificate) -> bool {
    let Ok(k) = inst.constraint_complex() else {
        return false;
    };
    let keys: VSet = cert.lambda.keys().copied().collect();
    if cert.face.is_empty() || keys != cert.face || !k.contains(cert.face) {
        return false;
    }
    let pinned = match inst.variant.tag {
        VariantTag::CC2 => match inst.variant.pinned_vertex() {
            Some(p) if cert.face.contains(p) => Some(p),
            _ => return false,
        },
        _ => None,
    };
    let positive = cert.lambda.iter().all(|(v, l)| l.is_positive() || (Some(*v) == pinned && l.is_zero()));
    positive && verify_zero_combination(&inst.config, &cert.lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caratheodory::variant::Variant;

    fn sets(v: &[&[usize]]) -> Vec<VSet> {
        v.iter().map(|s| VSet::from_indices(s.iter().copied())).collect()
    }

    #[test]
    fn two_point_line() {
        let cfg = PointConfig::from_ints(1, &[&[-1], &[1]]).unwrap();
        let inst = Instance::new(cfg, Variant::colourful(VariantTag::CC1, sets(&[&[0], &[1]])));
        let c = solve(&inst).unwrap();
        assert_eq!(c.face, VSet::from_indices([0, 1]));
        assert_eq!(c.lambda[&0], Rat::new(1, 2));
        assert!(verify_certificate(&inst, &c));
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"face":[0,1],"lambda":{"0":"1/2","1":"1/2"}}"#);
    }

    #[test]
    fn pinned_vertex_is_in_the_face() {
        // F_1 = {-1, 1} on the line, p = 2
        let cfg = PointConfig::from_ints(1, &[&[-1], &[1], &[2]]).unwrap();
        let inst = Instance::new(cfg, Variant::pinned(sets(&[&[0, 1], &[2]]), 2));
        let c = solve(&inst).unwrap();
        assert_eq!(c.face, VSet::from_indices([0, 2]));
        assert!(c.lambda[&2].is_positive());
        assert!(verify_certificate(&inst, &c));
    }

    #[test]
    fn no_selection_reports_failed_hypotheses() {
        let cfg = PointConfig::from_ints(1, &[&[1], &[2]]).unwrap();
        let inst = Instance::new(cfg, Variant::colourful(VariantTag::CC1, sets(&[&[0], &[1]])));
        match solve(&inst) {
            Err(Error::NoSelection(msg)) => assert!(msg.contains("hypotheses fail")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let cfg = PointConfig::from_ints(1, &[&[-1], &[1]]).unwrap();
        let inst = Instance::new(cfg, Variant::colourful(VariantTag::CC1, sets(&[&[0], &[1]])));
        let mut c = solve(&inst).unwrap();
        c.lambda.insert(0, Rat::new(1, 3));
        assert!(!verify_certificate(&inst, &c));
    }
}

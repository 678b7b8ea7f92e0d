use serde::{Deserialize, Serialize};

use super::linalg::{RatMat, RatVec};
use super::rat::Rat;
use crate::error::{input, Error, Result};
use crate::vset::{VSet, MAX_UNIVERSE};

/// Images `A(p_0), ..., A(p_N)` of the vertices of a simplex under an affine
/// map into `R^d`. No point may be the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointConfig {
    dim: usize,
    points: Vec<RatVec>,
}

#[derive(Deserialize)]
struct RawConfig {
    dim: usize,
    points: Vec<RatVec>,
}

impl<'de> Deserialize<'de> for PointConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawConfig::deserialize(d)?;
        PointConfig::new(raw.dim, raw.points).map_err(serde::de::Error::custom)
    }
}

impl PointConfig {
    pub fn new(dim: usize, points: Vec<RatVec>) -> Result<Self> {
        if dim == 0 {
            return input("dimension must be positive");
        }
        if points.is_empty() {
            return input("a configuration needs at least one point");
        }
        if points.len() > MAX_UNIVERSE {
            return input(format!("at most {MAX_UNIVERSE} points are supported, got {}", points.len()));
        }
        for (j, p) in points.iter().enumerate() {
            if p.len() != dim {
                return input(format!("point {j} has {} coordinates, expected {dim}", p.len()));
            }
            if p.iter().all(Rat::is_zero) {
                return input(format!("point {j} is the origin"));
            }
        }
        Ok(PointConfig { dim, points })
    }

    pub fn from_ints(dim: usize, points: &[&[i64]]) -> Result<Self> {
        PointConfig::new(dim, points.iter().map(|p| p.iter().map(|&v| Rat::from_int(v)).collect()).collect())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("invalid point configuration: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configs always serialize")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vertices, `N + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn universe(&self) -> VSet {
        VSet::full(self.points.len())
    }

    #[inline]
    pub fn point(&self, v: usize) -> &[Rat] {
        &self.points[v]
    }

    pub fn points(&self) -> &[RatVec] {
        &self.points
    }

    /// The `d x (N+1)` matrix whose column `j` is `A(p_j)`.
    pub fn matrix(&self) -> RatMat {
        RatMat::from_columns(self.dim, &self.points).expect("points share the dimension")
    }

    /// Rank of `{A(u) : u in U}`, i.e. `dim span A(U)`.
    pub fn span_dim(&self, u: VSet) -> usize {
        if u.is_empty() {
            return 0;
        }
        let rows: Vec<RatVec> = u.iter().map(|v| self.points[v].clone()).collect();
        RatMat::from_rows(rows).expect("rectangular").rank()
    }

    /// Multiplies each point by the matching positive factor.
    pub fn rescaled(&self, factors: &[Rat]) -> Result<Self> {
        if factors.len() != self.len() {
            return input("one factor per point is required");
        }
        if factors.iter().any(|f| !f.is_positive()) {
            return input("rescaling factors must be positive");
        }
        let points = self.points.iter().zip(factors).map(|(p, f)| p.iter().map(|x| x * f).collect()).collect();
        Ok(PointConfig { dim: self.dim, points })
    }

    pub(crate) fn check_subset(&self, u: VSet, what: &str) -> Result<()> {
        if u.is_empty() {
            return input(format!("{what}: the vertex set must be nonempty"));
        }
        if !u.is_subset(self.universe()) {
            return input(format!("{what}: {u} is not a subset of the {} configuration vertices", self.len()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_exact() {
        let cfg = PointConfig::new(2, vec![vec![Rat::new(1, 3), Rat::new(-7, 2)], vec![Rat::from_int(5), Rat::zero()]])
            .unwrap();
        let s = cfg.to_json();
        assert_eq!(s, r#"{"dim":2,"points":[["1/3","-7/2"],["5","0"]]}"#);
        assert_eq!(PointConfig::from_json(&s).unwrap(), cfg);
    }

    #[test]
    fn rejects_origin_and_ragged_points() {
        assert!(PointConfig::from_ints(2, &[&[0, 0]]).is_err());
        assert!(PointConfig::from_ints(2, &[&[1]]).is_err());
        assert!(PointConfig::from_json(r#"{"dim":1,"points":[["0"]]}"#).is_err());
        assert!(PointConfig::from_json(r#"{"dim":1,"points":[[2]]}"#).is_ok());
    }

    #[test]
    fn span_dim_counts_rank() {
        let cfg = PointConfig::from_ints(3, &[&[1, 0, 0], &[2, 0, 0], &[0, 1, 0]]).unwrap();
        assert_eq!(cfg.span_dim(VSet::from_indices([0, 1])), 1);
        assert_eq!(cfg.span_dim(cfg.universe()), 2);
    }
}

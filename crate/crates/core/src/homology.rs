//! Reduced simplicial homology over the rationals.
//!
//! Ranks of the augmented boundary maps are computed by sparse column
//! reduction with exact rational pivots. Dimensions are processed from the
//! top down so that columns already known to be boundaries are skipped
//! (the "clearing" optimization).

use std::collections::HashMap;
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geomkernel::Rat;
use crate::scomplex::{max_faces, SComplex};
use crate::vset::VSet;

/// Reduced Betti numbers `b_{-1}, b_0, ..., b_dim`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BettiProfile {
    b: Vec<usize>,
}

impl BettiProfile {
    pub fn from_degrees(b: Vec<usize>) -> Self {
        let mut p = BettiProfile { b };
        while p.b.last() == Some(&0) && p.b.len() > 1 {
            p.b.pop();
        }
        p
    }

    /// `b_i`, zero outside the stored range.
    pub fn get(&self, i: isize) -> usize {
        if i < -1 {
            return 0;
        }
        self.b.get((i + 1) as usize).copied().unwrap_or(0)
    }

    /// Highest stored degree.
    pub fn top(&self) -> isize {
        self.b.len() as isize - 2
    }

    pub fn degrees(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        self.b.iter().enumerate().map(|(k, &v)| (k as isize - 1, v))
    }

    pub fn is_zero(&self) -> bool {
        self.b.iter().all(|&v| v == 0)
    }

    /// The degree `k` if the profile is a single `1` at `k` and zero elsewhere.
    pub fn single_degree(&self) -> Option<isize> {
        let mut nz = self.degrees().filter(|&(_, v)| v != 0);
        match (nz.next(), nz.next()) {
            (Some((k, 1)), None) => Some(k),
            _ => None,
        }
    }

    pub fn is_single_at(&self, k: isize) -> bool {
        self.single_degree() == Some(k)
    }

    /// `sum_i (-1)^i b_i`.
    pub fn euler(&self) -> i64 {
        self.degrees().map(|(i, v)| if i.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) }).sum()
    }

    /// Smallest degree with a nonzero Betti number.
    pub fn lowest_nonzero(&self) -> Option<isize> {
        self.degrees().find(|&(_, v)| v != 0).map(|(k, _)| k)
    }

    /// Adds `delta` to `b_k`; exists for harness self-tests that need a
    /// deliberately wrong profile.
    pub fn perturbed(&self, k: isize, delta: usize) -> BettiProfile {
        let mut b = self.b.clone();
        let idx = (k + 1).max(0) as usize;
        if b.len() <= idx {
            b.resize(idx + 1, 0);
        }
        b[idx] += delta;
        BettiProfile::from_degrees(b)
    }
}

impl fmt::Debug for BettiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees().map(|(k, v)| format!("b{k}={v}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl Serialize for BettiProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Degrees<'a>(&'a BettiProfile);
        impl Serialize for Degrees<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.b.len()))?;
                for (k, v) in self.0.degrees() {
                    m.serialize_entry(&k.to_string(), &v)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(1))?;
        m.serialize_entry("betti", &Degrees(self))?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for BettiProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            betti: HashMap<String, usize>,
        }
        let raw = Raw::deserialize(d)?;
        let mut b = Vec::new();
        for (k, v) in raw.betti {
            let k: isize = k.parse().map_err(|_| D::Error::custom(format!("bad degree {k:?}")))?;
            if k < -1 {
                return Err(D::Error::custom("degrees start at -1"));
            }
            let idx = (k + 1) as usize;
            if b.len() <= idx {
                b.resize(idx + 1, 0);
            }
            b[idx] = v;
        }
        Ok(BettiProfile::from_degrees(b))
    }
}

type Column = Vec<(u32, Rat)>;

/// `a - f * b` for sorted sparse columns.
fn axpy(a: &Column, f: &Rat, b: &Column) -> Column {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(u32::MAX, |e| e.0);
        let rb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ra < rb {
            out.push(a[i].clone());
            i += 1;
        } else if rb < ra {
            out.push((rb, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(f * &b[j].1);
            if !v.is_zero() {
                out.push((ra, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of the boundary map from `cols` (faces of size `k+1`) to faces of
/// size `k`, skipping columns in `skip`. Returns the rank and the pivot rows
/// (which are exactly the `k`-faces whose own boundary column reduces to zero).
fn reduce(cols: &[VSet], row_index: &HashMap<VSet, u32>, skip: &[bool]) -> (usize, Vec<u32>) {
    let mut pivot_col: HashMap<u32, Column> = HashMap::new();
    let mut pivots = Vec::new();
    for (c, &face) in cols.iter().enumerate() {
        if skip.get(c).copied().unwrap_or(false) {
            continue;
        }
        let mut col: Column = face
            .iter()
            .enumerate()
            .map(|(pos, v)| {
                let sign = if pos % 2 == 0 { Rat::one() } else { -Rat::one() };
                (row_index[&face.remove(v)], sign)
            })
            .collect();
        col.sort_unstable_by_key(|e| e.0);
        while let Some((low, val)) = col.last().cloned() {
            match pivot_col.get(&low) {
                Some(p) => {
                    let f = &val / &p.last().expect("pivot columns are nonempty").1;
                    col = axpy(&col, &f, p);
                }
                None => {
                    pivot_col.insert(low, col);
                    pivots.push(low);
                    break;
                }
            }
        }
    }
    (pivots.len(), pivots)
}

/// Reduced Betti numbers over `Q`. The VOID complex has the zero profile.
pub fn betti(k: &SComplex) -> Result<BettiProfile> {
    if k.num_faces() > max_faces() {
        return Err(Error::Resource(format!(
            "complex has {} faces, above the cap of {} (CARATHE_MAX_FACES)",
            k.num_faces(),
            max_faces()
        )));
    }
    if k.is_void() {
        return Ok(BettiProfile::default());
    }
    // by_size[s] holds the faces with s vertices, i.e. of degree s - 1
    let top = k.faces().iter().map(|f| f.len()).max().unwrap_or(0);
    let mut by_size: Vec<Vec<VSet>> = vec![Vec::new(); top + 1];
    for &f in k.faces() {
        by_size[f.len()].push(f);
    }
    let index: Vec<HashMap<VSet, u32>> =
        by_size.iter().map(|fs| fs.iter().enumerate().map(|(i, &f)| (f, i as u32)).collect()).collect();
    // rank_of[s] = rank of the boundary from size-s faces to size-(s-1) faces
    let mut rank_of = vec![0usize; top + 2];
    let mut skip: Vec<bool> = Vec::new();
    for s in (1..=top).rev() {
        let (r, pivots) = reduce(&by_size[s], &index[s - 1], &skip);
        rank_of[s] = r;
        skip = vec![false; by_size[s - 1].len()];
        for p in pivots {
            skip[p as usize] = true;
        }
    }
    let b = (0..=top).map(|s| by_size[s].len() - rank_of[s] - rank_of[s + 1]).collect();
    Ok(BettiProfile::from_degrees(b))
}

/// `sum_{F != {}} (-1)^{|F|-1} - 1` for a non-VOID complex, `0` for VOID.
pub fn reduced_euler_from_faces(k: &SComplex) -> i64 {
    k.faces().iter().map(|f| if f.len() % 2 == 1 { 1 } else { -1 }).sum::<i64>()
}

/// Alexander duality `b_i(K) = b_{|V|-3-i}(K*)` for every degree.
pub fn check_alexander(k: &SComplex) -> Result<bool> {
    if k.is_simplex() {
        return Err(Error::Precondition("Alexander duality needs a complex other than the full simplex".into()));
    }
    let dual = k.alexander_dual();
    let (bk, bd) = (betti(k)?, betti(&dual)?);
    let n = k.n() as isize;
    Ok((-1..=n).all(|i| bk.get(i) == bd.get(n - 3 - i)))
}

/// The join formula `b_k(K1 * K2) = sum_{a+b=k-1} b_a(K1) b_b(K2)`.
pub fn check_kunneth_join(k1: &SComplex, k2: &SComplex) -> Result<bool> {
    let count = k1.num_faces().saturating_mul(k2.num_faces());
    if count > max_faces() {
        return Err(Error::Resource(format!("join would have {count} faces, above the cap of {}", max_faces())));
    }
    let j = k1.join(k2)?;
    let (b1, b2, bj) = (betti(k1)?, betti(k2)?, betti(&j)?);
    let top = j.n() as isize;
    Ok((-1..=top).all(|k| {
        let conv: usize = (-1..=k).map(|a| b1.get(a) * b2.get(k - 1 - a)).sum();
        bj.get(k) == conv
    }))
}

/// Whether `b_i(K) = 0` for every `i <= k`.
pub fn vanishes_through(k: &SComplex, through: isize) -> Result<bool> {
    let b = betti(k)?;
    Ok((-1..=through).all(|i| b.get(i) == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scomplex::index_labels;

    fn sets(v: &[&[usize]]) -> Vec<VSet> {
        v.iter().map(|s| VSet::from_indices(s.iter().copied())).collect()
    }

    fn cycle4() -> SComplex {
        SComplex::from_facets(index_labels(4), &sets(&[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])).unwrap()
    }

    #[test]
    fn betti_examples() {
        let sphere = SComplex::boundary(index_labels(4)).unwrap();
        assert!(betti(&sphere).unwrap().is_single_at(2));
        assert!(betti(&cycle4()).unwrap().is_single_at(1));
        let e = SComplex::empty(index_labels(2)).unwrap();
        assert!(betti(&e).unwrap().is_single_at(-1));
        assert!(betti(&SComplex::void(index_labels(2)).unwrap()).unwrap().is_zero());
        assert!(betti(&SComplex::simplex(index_labels(5)).unwrap()).unwrap().is_zero());
        let three_points = SComplex::from_facets(index_labels(3), &sets(&[&[0], &[1], &[2]])).unwrap();
        assert_eq!(betti(&three_points).unwrap().get(0), 2);
    }

    #[test]
    fn torus_and_projective_plane_over_q() {
        // 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7
        let mut facets = Vec::new();
        for i in 0..7 {
            facets.push(VSet::from_indices([i, (i + 1) % 7, (i + 3) % 7]));
            facets.push(VSet::from_indices([i, (i + 2) % 7, (i + 3) % 7]));
        }
        let torus = SComplex::from_facets(index_labels(7), &facets).unwrap();
        let b = betti(&torus).unwrap();
        assert_eq!((b.get(0), b.get(1), b.get(2)), (0, 2, 1));
        // 6-vertex projective plane: rationally acyclic
        let rp2 = SComplex::from_facets(
            index_labels(6),
            &sets(&[
                &[0, 1, 2],
                &[0, 2, 3],
                &[0, 3, 4],
                &[0, 4, 5],
                &[0, 1, 5],
                &[1, 2, 4],
                &[2, 3, 5],
                &[1, 3, 4],
                &[2, 4, 5],
                &[1, 3, 5],
            ]),
        )
        .unwrap();
        assert!(betti(&rp2).unwrap().is_zero());
    }

    #[test]
    fn alexander_examples() {
        assert!(check_alexander(&cycle4()).unwrap());
        let bd = SComplex::boundary(index_labels(4)).unwrap();
        assert!(check_alexander(&bd).unwrap());
        assert!(matches!(check_alexander(&SComplex::simplex(index_labels(3)).unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn kunneth_examples() {
        let two = |a: &str, b: &str| SComplex::from_facets(vec![a.into(), b.into()], &sets(&[&[0], &[1]])).unwrap();
        assert!(check_kunneth_join(&two("a", "b"), &two("c", "d")).unwrap());
        let e = SComplex::empty(vec!["z".into()]).unwrap();
        assert!(check_kunneth_join(&e, &two("a", "b")).unwrap());
    }

    #[test]
    fn vanishing_examples() {
        assert!(vanishes_through(&SComplex::boundary(index_labels(4)).unwrap(), 1).unwrap());
        assert!(!vanishes_through(&cycle4(), 1).unwrap());
        assert!(!vanishes_through(&SComplex::empty(index_labels(1)).unwrap(), -1).unwrap());
    }

    #[test]
    fn json_form() {
        let b = betti(&cycle4()).unwrap();
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"betti":{"-1":0,"0":0,"1":1}}"#);
        assert_eq!(serde_json::from_str::<BettiProfile>(&s).unwrap(), b);
    }

    #[test]
    fn euler_matches_face_count() {
        for k in [cycle4(), SComplex::boundary(index_labels(5)).unwrap(), SComplex::empty(index_labels(3)).unwrap()] {
            assert_eq!(betti(&k).unwrap().euler(), reduced_euler_from_faces(&k));
        }
    }
}

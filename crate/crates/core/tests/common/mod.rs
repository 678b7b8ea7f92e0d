//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use carathe::geomkernel::{LinearSystem, PointConfig, Rat, Relation};
use carathe::scomplex::SComplex;
use carathe::tverberg::{constraint_ok, Labeling};
use carathe::VSet;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank by plain dense Gaussian elimination over `BigRational`.
pub fn dense_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let v = &m[rank][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced Betti numbers (index 0 is degree -1) from dense boundary matrices.
pub fn dense_betti(k: &SComplex) -> Vec<usize> {
    if k.is_void() {
        return vec![0; k.n() + 1];
    }
    let by_size: Vec<Vec<VSet>> =
        (0..=k.n()).map(|s| k.faces().iter().copied().filter(|f| f.len() == s).collect()).collect();
    let mut ranks = vec![0usize; k.n() + 2];
    for s in 1..=k.n() {
        let rows = &by_size[s - 1];
        let cols = &by_size[s];
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut m = vec![vec![BigRational::zero(); cols.len()]; rows.len()];
        for (j, f) in cols.iter().enumerate() {
            for (pos, v) in f.iter().enumerate() {
                let g = f.remove(v);
                let i = rows.iter().position(|x| *x == g).unwrap();
                m[i][j] = if pos % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            }
        }
        ranks[s] = dense_rank(m);
    }
    (0..=k.n()).map(|s| by_size[s].len() - ranks[s] - ranks[s + 1]).collect()
}

/// Whether some hyperplane strictly separates `A(a)` from `A(b)`, i.e. the
/// hulls are disjoint: find `w, c` with `w.x <= c - 1` on `a`, `w.x >= c + 1` on `b`.
pub fn strictly_separated(cfg: &PointConfig, a: VSet, b: VSet) -> bool {
    let d = cfg.dim();
    let mut sys = LinearSystem::free(d + 1);
    let row = |p: usize| -> Vec<Rat> { cfg.point(p).iter().cloned().chain([-Rat::one()]).collect() };
    for p in a.iter() {
        sys.push(row(p), Relation::Le, -Rat::one());
    }
    for p in b.iter() {
        sys.push(row(p), Relation::Ge, Rat::one());
    }
    sys.is_feasible()
}

/// First full two-part labeling, in lexicographic order, that respects `l`
/// and whose parts have intersecting hulls.
pub fn radon_first(cfg: &PointConfig, l: &SComplex, anchors: (usize, usize)) -> Option<Labeling> {
    let n = cfg.len();
    (0u32..1 << n).find_map(|bits| {
        let labels: Vec<Option<usize>> = (0..n).map(|v| Some(1 + ((bits >> (n - 1 - v)) & 1) as usize)).collect();
        let lab = Labeling(labels);
        let parts = lab.parts(2);
        if parts.iter().any(|p| p.is_empty()) || !constraint_ok(&lab, l, 2, anchors) {
            return None;
        }
        (!strictly_separated(cfg, parts[0], parts[1])).then_some(lab)
    })
}

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rat::Rat;
use crate::error::{input, Result};

pub type RatVec = Vec<Rat>;

/// Dense row-major rational matrix with fixed dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return input("ragged matrix rows");
        }
        let n = rows.len();
        Ok(RatMat { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a `rows x cols` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[RatVec]) -> Result<Self> {
        if columns.iter().any(|c| c.len() != rows) {
            return input("column length does not match row count");
        }
        let mut m = RatMat::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        RatMat::from_rows(rows.iter().map(|r| r.iter().map(|&v| Rat::from_int(v)).collect()).collect())
            .expect("rectangular literal")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> RatVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<RatVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        rank(self)
    }
}

/// Exact rank by fraction-free (Bareiss) elimination. Each row is first
/// cleared of denominators, which does not change the rank.
pub fn rank(m: &RatMat) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| integer_row(m.row(i))).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..cols {
                let v = &pivot_row[col] * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = a[r][col].clone();
        r += 1;
    }
    r
}

fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(&v.denom()));
    row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}

/// A maximal linearly independent subfamily of `vectors`, chosen greedily in
/// the given order.
pub fn independent_subset(vectors: &[RatVec]) -> Vec<usize> {
    let mut echelon: Vec<(usize, RatVec)> = Vec::new();
    let mut chosen = Vec::new();
    for (k, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (pc, row) in &echelon {
            if !w[*pc].is_zero() {
                let f = w[*pc].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        if let Some(pc) = w.iter().position(|x| !x.is_zero()) {
            let inv = w[pc].recip();
            for x in w.iter_mut() {
                *x *= &inv;
            }
            echelon.push((pc, w));
            chosen.push(k);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(RatMat::zeros(3, 3).rank(), 0);
        assert_eq!(RatMat::identity(3).rank(), 3);
        assert_eq!(RatMat::from_ints(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn rank_with_fractions_and_skipped_columns() {
        let m = RatMat::from_rows(vec![
            vec![Rat::zero(), Rat::new(1, 2), Rat::new(1, 3)],
            vec![Rat::zero(), Rat::new(3, 2), Rat::one()],
            vec![Rat::zero(), Rat::zero(), Rat::new(5, 7)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.transpose().rank(), 2);
    }

    #[test]
    fn independent_subset_is_greedy() {
        let v = |a: i64, b: i64| vec![Rat::from_int(a), Rat::from_int(b)];
        assert_eq!(independent_subset(&[v(1, 0), v(2, 0), v(0, 3), v(1, 1)]), vec![0, 2]);
        assert!(independent_subset(&[v(0, 0)]).is_empty());
    }
}

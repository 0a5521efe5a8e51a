//! Lattice points of Z^d, sup-norm geometry, and finite support sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent vector n in Z^d. Ordering is lexicographic (derived from `Vec`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Sup-norm max_j |n_j|.
    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    /// l1-norm sum_j |n_j|.
    pub fn one_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        LatticePoint(v)
    }
}

/// Sup-norm distance between two lattice points.
pub fn point_dist(a: &LatticePoint, b: &LatticePoint) -> i64 {
    a.sub(b).sup_norm()
}

/// A finite subset of Z^d.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SupportSet {
    pub dim: usize,
    pub points: BTreeSet<LatticePoint>,
}

impl SupportSet {
    pub fn new(dim: usize) -> Self {
        SupportSet {
            dim,
            points: BTreeSet::new(),
        }
    }

    pub fn from_points<I: IntoIterator<Item = LatticePoint>>(dim: usize, pts: I) -> Self {
        SupportSet {
            dim,
            points: pts.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.points.contains(p)
    }

    /// min over pairs of the sup-norm distance. Errors on empty input.
    pub fn dist(&self, other: &SupportSet) -> Result<i64> {
        if self.is_empty() || other.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mut best = i64::MAX;
        for m in &self.points {
            for n in &other.points {
                best = best.min(point_dist(m, n));
            }
        }
        Ok(best)
    }

    /// Sup-norm distance from a single point to this set.
    pub fn dist_point(&self, p: &LatticePoint) -> Result<i64> {
        if self.is_empty() {
            return Err(Error::EmptySupport);
        }
        Ok(self.points.iter().map(|q| point_dist(p, q)).min().unwrap())
    }

    /// B_R(S) = { n : dist(n, S) <= R }.
    pub fn ball_neighborhood(&self, radius: i64) -> SupportSet {
        let mut out = BTreeSet::new();
        let ball = ball_points(self.dim, radius);
        for p in &self.points {
            for b in &ball {
                out.insert(p.add(b));
            }
        }
        SupportSet {
            dim: self.dim,
            points: out,
        }
    }
}

/// All points of the sup-norm ball B_R = { n : ||n|| <= R } in Z^d.
pub fn ball_points(dim: usize, radius: i64) -> Vec<LatticePoint> {
    let r = radius.max(-1);
    if r < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![-r; dim];
    if dim == 0 {
        return vec![LatticePoint(Vec::new())];
    }
    loop {
        out.push(LatticePoint(cur.clone()));
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -r;
                }
                break;
            }
        }
    }
}

/// B_{R,M} = B_R intersected with the sublattice M Z^d.
pub fn ball_sublattice(dim: usize, radius: i64, spacing: i64) -> Vec<LatticePoint> {
    assert!(spacing >= 1);
    ball_points(dim, radius)
        .into_iter()
        .filter(|p| p.0.iter().all(|c| c % spacing == 0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sup_norm_distance() {
        let a = SupportSet::from_points(2, [LatticePoint::new(vec![0, 0])]);
        let b = SupportSet::from_points(2, [LatticePoint::new(vec![5, 3])]);
        assert_eq!(a.dist(&b).unwrap(), 5);
        assert_eq!(b.dist(&a).unwrap(), 5);
    }

    #[test]
    fn dist_zero_iff_intersecting() {
        let a = SupportSet::from_points(1, [LatticePoint::new(vec![0]), LatticePoint::new(vec![7])]);
        let b = SupportSet::from_points(1, [LatticePoint::new(vec![7])]);
        assert_eq!(a.dist(&b).unwrap(), 0);
    }

    #[test]
    fn dist_on_empty_set_errors() {
        let a = SupportSet::new(1);
        let b = SupportSet::from_points(1, [LatticePoint::new(vec![0])]);
        assert!(a.dist(&b).is_err());
    }

    #[test]
    fn ball_d1() {
        let b = ball_points(1, 1);
        let coords: Vec<i64> = b.iter().map(|p| p.0[0]).collect();
        assert_eq!(coords, vec![-1, 0, 1]);
    }

    #[test]
    fn ball_counts() {
        assert_eq!(ball_points(2, 2).len(), 25);
        assert_eq!(ball_points(3, 1).len(), 27);
    }

    #[test]
    fn ball_neighborhood_is_union_of_translates() {
        // B_R(S) = union over n in S of n + B_R, for small R.
        for r in 0..=5 {
            let s = SupportSet::from_points(
                2,
                [
                    LatticePoint::new(vec![0, 0]),
                    LatticePoint::new(vec![3, -2]),
                    LatticePoint::new(vec![-1, 4]),
                ],
            );
            let direct = s.ball_neighborhood(r);
            let mut union = BTreeSet::new();
            for n in &s.points {
                for b in ball_points(2, r) {
                    union.insert(n.add(&b));
                }
            }
            assert_eq!(direct.points, union);
            // membership characterization
            for p in &direct.points {
                assert!(s.dist_point(p).unwrap() <= r);
            }
        }
    }

    #[test]
    fn sublattice_ball() {
        let b = ball_sublattice(1, 4, 2);
        let coords: Vec<i64> = b.iter().map(|p| p.0[0]).collect();
        assert_eq!(coords, vec![-4, -2, 0, 2, 4]);
    }
}

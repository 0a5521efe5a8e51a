//! Evaluation of f on the d-torus, certified empty-variety checks, zero-set
//! sampling, and the exact atoral/toral decision for d = 1.

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::IntLaurentPoly;
use crate::univariate::{
    count_roots_in, isolate_root, palindromic_compress, sturm_chain, UniPoly,
};

/// A point of T^d = (R/Z)^d in additive coordinates, reduced to [0, 1).
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusPoint(pub Vec<f64>);

impl TorusPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        TorusPoint(coords.into_iter().map(|c| c.rem_euclid(1.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Coordinate-wise max of the circle distances.
    pub fn dist(&self, other: &TorusPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = (a - b).abs();
                d.min(1.0 - d)
            })
            .fold(0.0, f64::max)
    }
}

/// f(e^{2 pi i t_1}, ..., e^{2 pi i t_d}).
pub fn eval_on_torus(f: &IntLaurentPoly, t: &TorusPoint) -> Complex64 {
    let tau = std::f64::consts::TAU;
    let mut acc = Complex64::new(0.0, 0.0);
    for (e, c) in f.terms() {
        let phase: f64 = e.0.iter().zip(&t.0).map(|(n, x)| *n as f64 * x).sum();
        acc += c.to_f64().expect("coefficient fits in f64") * Complex64::cis(tau * phase);
    }
    acc
}

/// Crude Lipschitz constant of t -> f(e^{2 pi i t}) in the Euclidean metric:
/// L = 2 pi sum_n |n|_1 |f_n|.
pub fn lipschitz_bound(f: &IntLaurentPoly) -> f64 {
    std::f64::consts::TAU
        * f.terms()
            .map(|(e, c)| e.one_norm() as f64 * c.abs().to_f64().unwrap())
            .sum::<f64>()
}

/// Grid certificate for min |f| on T^d.
///
/// When `certified_min > 0` the unitary variety is provably empty: the true
/// minimum is at least `grid_min - L sqrt(d) / (2N)` because no point of the
/// torus is farther than sqrt(d)/(2N) from a grid node.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusCertificate {
    pub grid_size: usize,
    pub grid_min: f64,
    pub lipschitz: f64,
    pub certified_min: f64,
    pub conclusive: bool,
    /// Grid nodes whose cells cannot be excluded when inconclusive.
    pub candidate_cells: Vec<TorusPoint>,
}

fn for_each_grid<F: FnMut(&[usize], &TorusPoint)>(dim: usize, n: usize, mut visit: F) {
    let mut idx = vec![0usize; dim];
    loop {
        let t = TorusPoint(idx.iter().map(|k| *k as f64 / n as f64).collect());
        visit(&idx, &t);
        let mut i = dim;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < n {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Scan the N^d grid: global min of |f| and the nodes with |f| <= keep_below.
fn scan_grid(f: &IntLaurentPoly, n: usize, keep_below: f64) -> (f64, Vec<TorusPoint>) {
    let dim = f.dim();
    let row = |k0: usize| -> (f64, Vec<TorusPoint>) {
        let mut min = f64::INFINITY;
        let mut kept = Vec::new();
        if dim == 1 {
            let t = TorusPoint(vec![k0 as f64 / n as f64]);
            let v = eval_on_torus(f, &t).norm();
            if v <= keep_below {
                kept.push(t);
            }
            return (v, kept);
        }
        for_each_grid(dim - 1, n, |_, rest| {
            let mut coords = Vec::with_capacity(dim);
            coords.push(k0 as f64 / n as f64);
            coords.extend_from_slice(&rest.0);
            let t = TorusPoint(coords);
            let v = eval_on_torus(f, &t).norm();
            min = min.min(v);
            if v <= keep_below {
                kept.push(t);
            }
        });
        (min, kept)
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<(f64, Vec<TorusPoint>)> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<(f64, Vec<TorusPoint>)> = (0..n).map(row).collect();

    let mut min = f64::INFINITY;
    let mut kept = Vec::new();
    for (m, k) in rows {
        min = min.min(m);
        kept.extend(k);
    }
    (min, kept)
}

/// Try to certify U(f) = empty on an N-per-axis grid.
pub fn empty_variety_certificate(f: &IntLaurentPoly, n: usize) -> Result<TorusCertificate> {
    if n < 2 {
        return Err(Error::OutOfRange("grid size must be at least 2".into()));
    }
    let d = f.dim();
    let lip = lipschitz_bound(f);
    let cell = lip * (d as f64).sqrt() / (2.0 * n as f64);
    let (grid_min, candidates) = scan_grid(f, n, cell);
    let certified = (grid_min - cell).max(0.0);
    Ok(TorusCertificate {
        grid_size: n,
        grid_min,
        lipschitz: lip,
        certified_min: certified,
        conclusive: certified > 0.0,
        candidate_cells: candidates,
    })
}

/// Gradient of |f|^2 at t.
fn grad_abs2(f: &IntLaurentPoly, t: &TorusPoint) -> (f64, Vec<f64>) {
    let tau = std::f64::consts::TAU;
    let d = f.dim();
    let mut val = Complex64::new(0.0, 0.0);
    let mut partials = vec![Complex64::new(0.0, 0.0); d];
    for (e, c) in f.terms() {
        let phase: f64 = e.0.iter().zip(&t.0).map(|(n, x)| *n as f64 * x).sum();
        let w = c.to_f64().unwrap() * Complex64::cis(tau * phase);
        val += w;
        for j in 0..d {
            partials[j] += Complex64::new(0.0, tau * e.0[j] as f64) * w;
        }
    }
    let grad = partials
        .iter()
        .map(|p| 2.0 * (val.conj() * p).re)
        .collect();
    (val.norm_sqr(), grad)
}

/// Local descent on |f|^2 with backtracking line search.
fn refine_zero(f: &IntLaurentPoly, start: &TorusPoint, max_iter: usize) -> TorusPoint {
    let mut t = start.clone();
    let mut step = 1e-2;
    let (mut cur, mut grad) = grad_abs2(f, &t);
    for _ in 0..max_iter {
        if cur < 1e-30 {
            break;
        }
        let gn: f64 = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gn < 1e-18 {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let cand = TorusPoint::new(
                t.0.iter()
                    .zip(&grad)
                    .map(|(x, g)| x - step * g / gn)
                    .collect(),
            );
            let (v, g2) = grad_abs2(f, &cand);
            if v < cur {
                t = cand;
                cur = v;
                grad = g2;
                step *= 1.5;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    t
}

/// Sample the unitary variety: refine grid cells where |f| is small and keep
/// the refined points with |f| < tol. Points are accurate to tol in |f|-value,
/// not certified as true zeros.
pub fn unitary_variety_sample(
    f: &IntLaurentPoly,
    n: usize,
    tol: f64,
) -> Result<Vec<TorusPoint>> {
    if tol <= 0.0 {
        return Err(Error::OutOfRange("tolerance must be positive".into()));
    }
    let d = f.dim();
    let lip = lipschitz_bound(f);
    let seed_cut = tol.max(lip * (d as f64).sqrt() / n as f64);
    let (_, seeds) = scan_grid(f, n, seed_cut);

    let refine = |s: &TorusPoint| -> Option<TorusPoint> {
        let t = refine_zero(f, s, 400);
        (eval_on_torus(f, &t).norm() < tol).then_some(t)
    };
    #[cfg(feature = "parallel")]
    let out: Vec<TorusPoint> = {
        use rayon::prelude::*;
        seeds.par_iter().filter_map(refine).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let out: Vec<TorusPoint> = seeds.iter().filter_map(refine).collect();
    Ok(out)
}

/// Greedy clustering of torus points at the given radius; each cluster is
/// represented by its member with the smallest |f|.
pub fn cluster_sample(f: &IntLaurentPoly, points: &[TorusPoint], radius: f64) -> Vec<TorusPoint> {
    let mut order: Vec<&TorusPoint> = points.iter().collect();
    order.sort_by(|a, b| {
        eval_on_torus(f, a)
            .norm()
            .partial_cmp(&eval_on_torus(f, b).norm())
            .unwrap()
    });
    let mut reps: Vec<TorusPoint> = Vec::new();
    for p in order {
        if !reps.iter().any(|r| r.dist(p) <= radius) {
            reps.push(p.clone());
        }
    }
    reps
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Verdict {
    Atoral,
    Toral,
}

/// Approximate location of a unit-circle root backing a toral verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitRootWitness {
    /// Additive torus coordinate t with f(e^{2 pi i t}) = 0.
    pub t: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub unit_circle_root_count: usize,
    pub witness: Option<UnitRootWitness>,
}

/// Exact atoral/toral decision for d = 1: f is toral iff it has a root of
/// absolute value 1. Unit-circle roots of a real polynomial survive in
/// gcd(f, reverse(f)), which is self-inversive; writing it as z^m P(z + 1/z)
/// turns them into real roots of P in [-2, 2], counted by Sturm sequences.
pub fn classify_d1(f: &IntLaurentPoly) -> Result<Classification> {
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: f.dim(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (fnorm, _) = crate::division::normalize(f)?;
    let deg = fnorm
        .terms()
        .map(|(e, _)| e.0[0])
        .max()
        .unwrap() as usize;
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (e, c) in fnorm.terms() {
        coeffs[e.0[0] as usize] = c.clone();
    }
    let p = UniPoly::from_bigints(&coeffs);
    if deg == 0 {
        return Ok(Classification {
            verdict: Verdict::Atoral,
            unit_circle_root_count: 0,
            witness: None,
        });
    }

    let one = BigRational::from_integer(BigInt::from(1));
    if p.eval(&one).is_zero() {
        return Ok(Classification {
            verdict: Verdict::Toral,
            unit_circle_root_count: 1,
            witness: Some(UnitRootWitness { t: 0.0 }),
        });
    }
    if p.eval(&(-one.clone())).is_zero() {
        return Ok(Classification {
            verdict: Verdict::Toral,
            unit_circle_root_count: 1,
            witness: Some(UnitRootWitness { t: 0.5 }),
        });
    }

    let g = p.gcd(&p.reverse());
    let gdeg = match g.degree() {
        None | Some(0) => {
            return Ok(Classification {
                verdict: Verdict::Atoral,
                unit_circle_root_count: 0,
                witness: None,
            })
        }
        Some(d) => d,
    };

    // clear denominators to a primitive integer palindrome
    let denom_lcm = g
        .coeffs()
        .iter()
        .fold(BigInt::from(1), |acc, c| num::integer::lcm(acc, c.denom().clone()));
    let mut gint: Vec<BigInt> = g
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let content = gint
        .iter()
        .fold(BigInt::zero(), |acc, c| num::integer::gcd(acc, c.abs()));
    if !content.is_zero() {
        for c in &mut gint {
            *c /= &content;
        }
    }
    if gint.last().is_some_and(|c| c.is_negative()) {
        for c in &mut gint {
            *c = -c.clone();
        }
    }
    debug_assert_eq!(gint.len(), gdeg + 1);

    let compressed = palindromic_compress(&gint)?;
    let chain = sturm_chain(&UniPoly::from_bigints(&compressed));
    let two = BigRational::from_integer(BigInt::from(2));
    let count = count_roots_in(&chain, &(-two.clone()), &two);
    if count == 0 {
        return Ok(Classification {
            verdict: Verdict::Atoral,
            unit_circle_root_count: 0,
            witness: None,
        });
    }

    // isolate one root u in [-2, 2]; t = arccos(u/2) / (2 pi)
    let limit = BigRational::new(BigInt::from(1), BigInt::from(1u64 << 40));
    let (lo, hi) = isolate_root(&chain, &(-two.clone()), &two, &limit);
    let u = ((lo + hi) / two.clone()).to_f64().unwrap();
    let t = (u / 2.0).clamp(-1.0, 1.0).acos() / std::f64::consts::TAU;
    Ok(Classification {
        verdict: Verdict::Toral,
        unit_circle_root_count: count,
        witness: Some(UnitRootWitness { t }),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum AtoralityHint {
    /// f* is not a unit times f; f is atoral provided it is irreducible
    /// (irreducibility is a user-asserted flag, never computed here).
    AtoralIfIrreducible,
    Inconclusive,
}

/// Check whether f* = ±x^n f for some monomial shift. The shift is forced by
/// aligning the minimal support corners, so the comparison is exhaustive.
pub fn adjoint_atorality_hint(f: &IntLaurentPoly) -> AtoralityHint {
    if f.is_zero() {
        return AtoralityHint::Inconclusive;
    }
    let fstar = f.adjoint();
    let min_f = f.min_exponents().unwrap();
    let min_star = fstar.min_exponents().unwrap();
    let shift = crate::lattice::LatticePoint::new(
        min_star.iter().zip(&min_f).map(|(a, b)| a - b).collect(),
    );
    let translated = f.translate(&shift);
    if fstar == translated || fstar == translated.neg() {
        AtoralityHint::Inconclusive
    } else {
        AtoralityHint::AtoralIfIrreducible
    }
}

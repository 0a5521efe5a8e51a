//! Truncated quasi-inverses f^# with certified l1 tail bounds.
//!
//! For f with certified empty unitary variety, 1/f has an absolutely
//! convergent Fourier series; sampling 1/f on an N^d grid and taking a
//! forward DFT recovers the periodized coefficients. Grid doubling bounds
//! the aliasing error empirically, and an exact residual check on
//! f^# * f - h makes acceptance sound regardless.

use std::collections::BTreeMap;

use num::complex::Complex64;
use num::traits::ToPrimitive;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::division::{divides, Divisibility};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::poly::{IntLaurentPoly, RealSummableArray};
use crate::torus::empty_variety_certificate;

/// Coefficients below this are folded into the tail bound instead of stored.
const DROP_THRESHOLD: f64 = 1e-17;

const CERT_GRIDS: [usize; 4] = [32, 64, 128, 256];

fn max_grid(dim: usize) -> usize {
    match dim {
        1 => 1 << 14,
        2 => 1 << 12,
        _ => 1 << 8,
    }
}

/// A truncation of f^# with f^# * f = h, h outside the ideal generated by f.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiInverse {
    pub f: IntLaurentPoly,
    pub fsharp: RealSummableArray,
    pub h: IntLaurentPoly,
    /// sup norm of trunc(f^#) * f - h, stored part plus tail contribution.
    pub residual: f64,
    /// Entry R bounds the l1 mass of f^# at sup-norm distance >= R.
    pub tail_table: Vec<f64>,
    /// Set by the user-supplied-h path; no tail certification then.
    pub experimental: bool,
}

/// Evaluate p at every grid node (k_1/N, ..., k_d/N), row major flat order.
fn grid_eval(p: &IntLaurentPoly, n: usize) -> Vec<Complex64> {
    let tau = std::f64::consts::TAU;
    let d = p.dim();
    let total = n.pow(d as u32);
    // per-term per-axis phase tables
    let terms: Vec<(f64, Vec<Vec<Complex64>>)> = p
        .terms()
        .map(|(e, c)| {
            let tables = (0..d)
                .map(|j| {
                    (0..n)
                        .map(|k| Complex64::cis(tau * e.0[j] as f64 * k as f64 / n as f64))
                        .collect()
                })
                .collect();
            (c.to_f64().unwrap(), tables)
        })
        .collect();

    let at = |flat: usize| -> Complex64 {
        let mut idx = [0usize; 3];
        let mut rest = flat;
        for j in (0..d).rev() {
            idx[j] = rest % n;
            rest /= n;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, tables) in &terms {
            let mut w = Complex64::new(*c, 0.0);
            for j in 0..d {
                w *= tables[j][idx[j]];
            }
            acc += w;
        }
        acc
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..total).into_par_iter().map(at).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..total).map(at).collect()
    }
}

/// In-place forward FFT along every axis of a d-dimensional N^d array.
fn fft_all_axes(data: &mut [Complex64], dim: usize, n: usize) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        let block = stride * n;
        for outer in 0..data.len() / block {
            for inner in 0..stride {
                let base = outer * block + inner;
                for t in 0..n {
                    scratch[t] = data[base + t * stride];
                }
                fft.process(&mut scratch);
                for t in 0..n {
                    data[base + t * stride] = scratch[t];
                }
            }
        }
    }
}

fn centered(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Fold a DFT output into a sparse centered coefficient table, dropping tiny
/// entries. Returns (table, dropped l1 mass).
fn fold_coefficients(
    data: &[Complex64],
    dim: usize,
    n: usize,
    weight: Option<&dyn Fn(&[i64]) -> f64>,
) -> (BTreeMap<LatticePoint, f64>, f64) {
    let scale = 1.0 / data.len() as f64;
    let mut table = BTreeMap::new();
    let mut dropped = 0.0;
    for (flat, v) in data.iter().enumerate() {
        let mut idx = vec![0i64; dim];
        let mut rest = flat;
        for j in (0..dim).rev() {
            idx[j] = centered(rest % n, n);
            rest /= n;
        }
        let mut c = v.re * scale;
        if let Some(w) = weight {
            c *= w(&idx);
        }
        if c.abs() < DROP_THRESHOLD {
            dropped += c.abs();
        } else {
            table.insert(LatticePoint::new(idx), c);
        }
    }
    (table, dropped)
}

fn l1_diff(a: &BTreeMap<LatticePoint, f64>, b: &BTreeMap<LatticePoint, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, v) in a {
        sum += (v - b.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, v) in b {
        if !a.contains_key(k) {
            sum += v.abs();
        }
    }
    sum
}

fn residual_of(fsharp: &RealSummableArray, f: &IntLaurentPoly, h: &IntLaurentPoly) -> Result<f64> {
    let diff = fsharp.mul_int(f)?.sub(&h.to_real())?;
    Ok(diff.norm_inf() + diff.tail_bound())
}

fn build_tail_table(fsharp: &RealSummableArray) -> Vec<f64> {
    let max_r = fsharp
        .terms()
        .map(|(e, _)| e.sup_norm())
        .max()
        .unwrap_or(0) as usize;
    (0..=max_r + 1)
        .map(|r| {
            fsharp
                .terms()
                .filter(|(e, _)| e.sup_norm() >= r as i64)
                .map(|(_, c)| c.abs())
                .sum::<f64>()
                + fsharp.tail_bound()
        })
        .collect()
}

impl QuasiInverse {
    /// Certified upper bound on the l1 mass of f^# at sup-norm >= R.
    pub fn tail_mass(&self, r: usize) -> f64 {
        self.tail_table
            .get(r)
            .copied()
            .unwrap_or_else(|| self.fsharp.tail_bound())
    }

    /// Some coefficient sits away from the integers, so f^# is not itself an
    /// integer polynomial.
    pub fn eta_nontrivial(&self) -> bool {
        self.fsharp.terms().any(|(_, c)| {
            let frac = (c - c.round()).abs();
            frac > 1e-3
        })
    }
}

/// Compute f^# for f with empty unitary variety: h = 1, coefficients from the
/// DFT of 1/f, grid-doubled from `n0` until successive tables agree within
/// eps/2 and the residual of f^# * f - 1 drops below eps.
pub fn compute_empty_variety(f: &IntLaurentPoly, n0: usize, eps: f64) -> Result<QuasiInverse> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.dim();
    let h = IntLaurentPoly::one(d);
    if matches!(divides(f, &h)?, Divisibility::Integral(_)) {
        // f is a unit; h = 1 would lie in the ideal
        return Err(Error::DividesH);
    }

    let mut certified = false;
    for n in CERT_GRIDS {
        if empty_variety_certificate(f, n)?.conclusive {
            certified = true;
            break;
        }
    }
    if !certified {
        return Err(Error::NoCertificate {
            max_grid: *CERT_GRIDS.last().unwrap(),
        });
    }

    let limit = max_grid(d);
    let mut n = n0.clamp(16, limit);
    let mut data = grid_eval(f, n);
    for v in &mut data {
        *v = v.inv();
    }
    fft_all_axes(&mut data, d, n);
    let (mut prev, mut prev_drop) = fold_coefficients(&data, d, n, None);
    let mut last_delta = f64::INFINITY;

    while n * 2 <= limit {
        n *= 2;
        let mut data = grid_eval(f, n);
        for v in &mut data {
            *v = v.inv();
        }
        fft_all_axes(&mut data, d, n);
        let (cur, drop) = fold_coefficients(&data, d, n, None);
        let delta = l1_diff(&prev, &cur) + prev_drop + drop;
        last_delta = delta;
        if delta < eps / 2.0 {
            let fsharp =
                RealSummableArray::from_terms(d, cur.clone().into_iter(), delta + drop)?;
            let residual = residual_of(&fsharp, f, &h)?;
            if residual < eps {
                let tail_table = build_tail_table(&fsharp);
                return Ok(QuasiInverse {
                    f: f.clone(),
                    fsharp,
                    h,
                    residual,
                    tail_table,
                    experimental: false,
                });
            }
        }
        prev = cur;
        prev_drop = drop;
    }
    Err(Error::NoConvergence {
        max_grid: limit,
        residual: last_delta,
    })
}

/// Experimental quasi-inverse from a user-supplied h: sample h/f where f is
/// safely nonzero, Fejer-smooth the DFT coefficients, and report the residual.
/// No tail certification; `experimental` is set and downstream consumers must
/// gate on the residual themselves.
pub fn attach_user_h(
    f: &IntLaurentPoly,
    h: &IntLaurentPoly,
    n: usize,
    eps: f64,
) -> Result<QuasiInverse> {
    if f.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: h.dim(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !n.is_power_of_two() || n < 16 {
        return Err(Error::OutOfRange("grid size must be a power of two >= 16".into()));
    }
    if matches!(divides(f, h)?, Divisibility::Integral(_)) {
        return Err(Error::DividesH);
    }

    let d = f.dim();
    let f_vals = grid_eval(f, n);
    let near_zero = f_vals.iter().filter(|v| v.norm() <= eps).count();
    let fraction = near_zero as f64 / f_vals.len() as f64;
    if fraction > 0.01 {
        return Err(Error::GridZero { fraction });
    }

    let h_vals = grid_eval(h, n);
    let mut data: Vec<Complex64> = f_vals
        .iter()
        .zip(&h_vals)
        .map(|(fv, hv)| {
            if fv.norm() <= eps {
                Complex64::new(0.0, 0.0)
            } else {
                hv / fv
            }
        })
        .collect();
    fft_all_axes(&mut data, d, n);

    let half = (n / 2 + 1) as f64;
    let fejer = move |idx: &[i64]| -> f64 {
        idx.iter()
            .map(|k| (1.0 - k.abs() as f64 / half).max(0.0))
            .product()
    };
    let (table, _) = fold_coefficients(&data, d, n, Some(&fejer));
    let fsharp = RealSummableArray::from_terms(d, table.into_iter(), 0.0)?;
    let residual = residual_of(&fsharp, f, h)?;
    let tail_table = build_tail_table(&fsharp);
    Ok(QuasiInverse {
        f: f.clone(),
        fsharp,
        h: h.clone(),
        residual,
        tail_table,
        experimental: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(src: &str, d: usize) -> IntLaurentPoly {
        parse_poly(src, Some(d)).unwrap()
    }

    #[test]
    fn constant_two() {
        let q = compute_empty_variety(&p("2", 1), 32, 1e-9).unwrap();
        assert_eq!(q.h, IntLaurentPoly::one(1));
        assert!((q.fsharp.coef(&LatticePoint::new(vec![0])) - 0.5).abs() < 1e-12);
        assert!(q.residual < 1e-9);
        assert!(q.tail_mass(1) < 1e-9);
    }

    #[test]
    fn geometric_series_for_x_minus_two() {
        let q = compute_empty_variety(&p("x - 2", 1), 32, 1e-9).unwrap();
        assert!(!q.experimental);
        assert!(q.residual < 1e-9);
        for k in 0..=40 {
            let want = -(0.5f64).powi(k + 1);
            let got = q.fsharp.coef(&LatticePoint::new(vec![k as i64]));
            assert!((got - want).abs() < 1e-10, "k={k} got={got} want={want}");
        }
        for k in 1..=10 {
            assert!(q.fsharp.coef(&LatticePoint::new(vec![-k])).abs() < 1e-10);
        }
        assert!(q.eta_nontrivial());
    }

    #[test]
    fn tail_mass_of_x_minus_two() {
        let q = compute_empty_variety(&p("x - 2", 1), 32, 1e-9).unwrap();
        // closed form: sum_{k>=R} 2^-(k+1) = 2^-R
        for r in 0..=10usize {
            let want = (0.5f64).powi(r as i32);
            let got = q.tail_mass(r);
            assert!(got >= want - 1e-12);
            assert!(got <= want + 1e-6);
        }
        assert!(q.tail_table.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn binomial_series_for_three_plus_x_plus_y() {
        let q = compute_empty_variety(&p("3 + x + y", 2), 32, 1e-9).unwrap();
        assert!(q.residual < 1e-9);
        let binom = |a: i64, b: i64| -> f64 {
            let mut acc = 1.0f64;
            for i in 0..b {
                acc = acc * (a - i) as f64 / (i + 1) as f64;
            }
            acc
        };
        for m in 0..=10i64 {
            for nn in 0..=10i64 {
                if m + nn > 15 {
                    continue;
                }
                let sign = if (m + nn) % 2 == 0 { 1.0 } else { -1.0 };
                let want = sign * binom(m + nn, m) / 3f64.powi((m + nn + 1) as i32);
                let got = q.fsharp.coef(&LatticePoint::new(vec![m, nn]));
                assert!((got - want).abs() < 1e-10, "({m},{nn}) {got} vs {want}");
            }
        }
    }

    #[test]
    fn rejects_nonempty_variety_and_units() {
        assert!(matches!(
            compute_empty_variety(&p("1 + x + y", 2), 32, 1e-9),
            Err(Error::NoCertificate { .. })
        ));
        assert!(matches!(
            compute_empty_variety(&p("x", 1), 32, 1e-9),
            Err(Error::DividesH)
        ));
    }

    #[test]
    fn user_h_cross_validates() {
        let f = p("x - 2", 1);
        let auto = compute_empty_variety(&f, 32, 1e-9).unwrap();
        let manual = attach_user_h(&f, &IntLaurentPoly::one(1), 256, 1e-9).unwrap();
        assert!(manual.experimental);
        for k in 0..=10i64 {
            let a = auto.fsharp.coef(&LatticePoint::new(vec![k]));
            let b = manual.fsharp.coef(&LatticePoint::new(vec![k]));
            // Fejer smoothing costs accuracy; agreement is coarse
            assert!((a - b).abs() < 0.05, "k={k}");
        }
    }

    #[test]
    fn user_h_rejects_multiples() {
        let f = p("x - 2", 1);
        assert!(matches!(
            attach_user_h(&f, &f, 64, 1e-9),
            Err(Error::DividesH)
        ));
        let triple = f.scale(&num::bigint::BigInt::from(3));
        assert!(matches!(
            attach_user_h(&f, &triple, 64, 1e-9),
            Err(Error::DividesH)
        ));
    }

    #[test]
    fn user_h_on_nonempty_variety_is_experimental() {
        let f = p("1 + x + y", 2);
        let h = p("1 - x", 2);
        let q = attach_user_h(&f, &h, 64, 1e-9).unwrap();
        assert!(q.experimental);
        assert!(q.residual.is_finite());
    }

    #[test]
    fn doubling_stability() {
        let f = p("3 + x + y", 2);
        let a = compute_empty_variety(&f, 32, 1e-6).unwrap();
        let b = compute_empty_variety(&f, 64, 1e-9).unwrap();
        let bound = a.fsharp.tail_bound() + b.fsharp.tail_bound();
        for (e, c) in a.fsharp.terms() {
            assert!((c - b.fsharp.coef(e)).abs() <= bound + 1e-12);
        }
    }

    #[test]
    fn defining_identity() {
        for (src, d) in [("x - 2", 1), ("3 + x + y", 2), ("x^2 - x - 3", 1)] {
            let f = p(src, d);
            let q = compute_empty_variety(&f, 32, 1e-9).unwrap();
            let prod = q.fsharp.mul_int(&f).unwrap();
            let on_h = prod.restrict(&q.h.support());
            assert_eq!(on_h.round_to_int().unwrap(), q.h);
            for (e, c) in prod.terms() {
                if q.h.coef(e) == num::bigint::BigInt::from(0) {
                    assert!(c.abs() < q.residual + 1e-15);
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let q = compute_empty_variety(&p("x - 2", 1), 32, 1e-9).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        let back: QuasiInverse = serde_json::from_str(&s).unwrap();
        assert_eq!(back.f, q.f);
        assert_eq!(back.tail_table.len(), q.tail_table.len());
        let e = LatticePoint::new(vec![5]);
        assert!((back.fsharp.coef(&e) - q.fsharp.coef(&e)).abs() < 1e-15);
    }
}

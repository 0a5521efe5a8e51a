//! Effective gap splitting: compute the gap constant M = 3R from a certified
//! quasi-inverse, split a gap-separated multiple of f into clusters, certify
//! divisibility of each piece, and replay the underlying inequalities as
//! executable checks with explicit margins.

use num::bigint::BigInt;
use num::traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::division::{divides, Divisibility};
use crate::error::{Error, Result};
use crate::lattice::{point_dist, LatticePoint, SupportSet};
use crate::poly::IntLaurentPoly;
use crate::quasi::QuasiInverse;

/// Least R with tail_mass(q, R) < 1 / (2 H ||f||_1).
pub fn gap_radius(q: &QuasiInverse, h: u64) -> Result<usize> {
    if h == 0 {
        return Err(Error::OutOfRange("H must be at least 1".into()));
    }
    let norm1 = q.f.norm_one().to_f64().unwrap();
    let threshold = 1.0 / (2.0 * h as f64 * norm1);
    let max_radius = q.tail_table.len();
    for r in 0..=max_radius {
        if q.tail_mass(r) < threshold {
            return Ok(r);
        }
    }
    Err(Error::TailTooFat {
        threshold,
        max_radius,
    })
}

pub fn gap_constant(q: &QuasiInverse, h: u64) -> Result<usize> {
    Ok(3 * gap_radius(q, h)?)
}

/// Connected components of supp(r) joining points at sup-distance < M.
/// Components are pairwise at distance >= M by construction.
pub fn cluster_support(r: &IntLaurentPoly, m: usize) -> Result<Vec<SupportSet>> {
    if r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if m == 0 {
        return Err(Error::OutOfRange("M must be at least 1".into()));
    }
    let pts: Vec<LatticePoint> = r.terms().map(|(e, _)| e.clone()).collect();
    let mut label = vec![usize::MAX; pts.len()];
    let mut next = 0;
    for i in 0..pts.len() {
        if label[i] != usize::MAX {
            continue;
        }
        label[i] = next;
        let mut stack = vec![i];
        while let Some(a) = stack.pop() {
            for b in 0..pts.len() {
                if label[b] == usize::MAX && point_dist(&pts[a], &pts[b]) < m as i64 {
                    label[b] = next;
                    stack.push(b);
                }
            }
        }
        next += 1;
    }
    let mut clusters = vec![Vec::new(); next];
    for (i, p) in pts.into_iter().enumerate() {
        clusters[label[i]].push(p);
    }
    Ok(clusters
        .into_iter()
        .map(|c| SupportSet::from_points(r.dim(), c))
        .collect())
}

/// Margins from the splitting argument; each must sit strictly below its
/// threshold for the certificate to be conclusive.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceReport {
    /// tail_mass(R) * 2 H ||f||_1, threshold 1.
    pub tail_margin: f64,
    /// ||u - p f^#||_inf * ||f||_1, threshold 1/2.
    pub u_error_margin: f64,
    /// max |(r f^#)_n| off B_R(supp p + supp q), threshold 1/2.
    pub off_support_max: f64,
    /// u f = p h holds in exact integer arithmetic.
    pub keystone_exact: bool,
}

impl TraceReport {
    pub fn passes(&self) -> bool {
        self.tail_margin < 1.0
            && self.u_error_margin < 0.5
            && self.off_support_max < 0.5
            && self.keystone_exact
    }
}

fn check_quasi(q: &QuasiInverse, h: u64) -> Result<()> {
    let norm1 = q.f.norm_one().to_f64().unwrap();
    let threshold = 1.0 / (2.0 * h as f64 * norm1);
    if q.residual >= 0.5 || (q.experimental && q.residual >= threshold) {
        return Err(Error::QuasiInverseRejected {
            experimental: q.experimental,
            residual: q.residual,
        });
    }
    Ok(())
}

fn trace_inner(
    q: &QuasiInverse,
    p: &IntLaurentPoly,
    qpoly: &IntLaurentPoly,
    h: u64,
    radius: usize,
) -> Result<TraceReport> {
    let f = &q.f;
    let norm1 = f.norm_one().to_f64().unwrap();
    let tail_margin = q.tail_mass(radius) * 2.0 * h as f64 * norm1;

    let r = p.add(qpoly)?;
    let rfs = q.fsharp.mul_int(&r)?;
    let mut support = SupportSet::new(f.dim());
    for (e, _) in p.terms().chain(qpoly.terms()) {
        support.points.insert(e.clone());
    }
    let enlarged = support.ball_neighborhood(radius as i64);
    let off_support_max = rfs
        .terms()
        .filter(|(e, _)| !enlarged.contains(e))
        .map(|(_, c)| c.abs())
        .fold(0.0, f64::max);

    let near_p = p.support().ball_neighborhood(radius as i64);
    let u = rfs.restrict(&near_p).round_to_int()?;
    let pfs = q.fsharp.mul_int(p)?;
    let diff = u.to_real().sub(&pfs)?;
    let u_error_margin = (diff.norm_inf() + diff.tail_bound()) * norm1;

    let keystone_exact = u.mul(f)? == p.mul(&q.h)?;
    Ok(TraceReport {
        tail_margin,
        u_error_margin,
        off_support_max,
        keystone_exact,
    })
}

/// Replay the splitting inequalities for a two-part decomposition r = p + q.
pub fn proof_trace(
    q: &QuasiInverse,
    p: &IntLaurentPoly,
    qpoly: &IntLaurentPoly,
    h: u64,
) -> Result<TraceReport> {
    check_quasi(q, h)?;
    let hb = BigInt::from(h);
    if p.norm_inf() > hb || qpoly.norm_inf() > hb {
        return Err(Error::HTooSmall {
            sup: p.norm_inf().max(qpoly.norm_inf()).to_string(),
            bound: hb.to_string(),
        });
    }
    let radius = gap_radius(q, h)?;
    let m = 3 * radius;
    if !p.is_zero() && !qpoly.is_zero() {
        let d = p.support().dist(&qpoly.support())?;
        if d < m as i64 {
            return Err(Error::BadInput(format!(
                "supports at distance {d}, need at least M = {m}"
            )));
        }
    }
    let r = p.add(qpoly)?;
    if !matches!(divides(&q.f, &r)?, Divisibility::Integral(_)) {
        return Err(Error::NotDivisible);
    }
    trace_inner(q, p, qpoly, h, radius)
}

/// Everything needed to audit one splitting run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapCertificate {
    pub f: IntLaurentPoly,
    pub height: u64,
    pub radius: usize,
    pub gap: usize,
    pub clusters: Vec<SupportSet>,
    pub pieces: Vec<IntLaurentPoly>,
    pub quotients: Vec<Option<IntLaurentPoly>>,
    pub traces: Vec<TraceReport>,
    /// Indices of clusters where divisibility failed despite satisfied
    /// preconditions. Never silently tolerated; an anomaly would falsify
    /// either an input assumption or this build.
    pub anomalies: Vec<usize>,
}

impl GapCertificate {
    pub fn all_divisible(&self) -> bool {
        self.anomalies.is_empty()
    }
}

/// Split a multiple r of f into gap-separated clusters at M = 3R and certify
/// that f divides every piece. H defaults to ||r||_inf when `height` is None.
pub fn split_and_verify(
    q: &QuasiInverse,
    r: &IntLaurentPoly,
    height: Option<u64>,
) -> Result<GapCertificate> {
    if r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sup = r.norm_inf();
    let h = match height {
        Some(h) => h,
        None => sup
            .to_u64()
            .ok_or_else(|| Error::OutOfRange("||r||_inf exceeds u64".into()))?,
    };
    if sup > BigInt::from(h) {
        return Err(Error::HTooSmall {
            sup: sup.to_string(),
            bound: h.to_string(),
        });
    }
    check_quasi(q, h)?;
    if !matches!(divides(&q.f, r)?, Divisibility::Integral(_)) {
        return Err(Error::NotDivisible);
    }

    let radius = gap_radius(q, h)?;
    let m = 3 * radius;
    let clusters = cluster_support(r, m.max(1))?;
    let pieces: Vec<IntLaurentPoly> = clusters.iter().map(|c| r.restrict(c)).collect();

    let verify = |piece: &IntLaurentPoly| -> Result<(Option<IntLaurentPoly>, TraceReport)> {
        let quotient = match divides(&q.f, piece)? {
            Divisibility::Integral(g) => Some(g),
            _ => None,
        };
        let rest = r.sub(piece)?;
        let trace = trace_inner(q, piece, &rest, h, radius)?;
        Ok((quotient, trace))
    };
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        pieces.par_iter().map(verify).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = pieces.iter().map(verify).collect::<Result<_>>()?;

    let mut quotients = Vec::new();
    let mut traces = Vec::new();
    let mut anomalies = Vec::new();
    for (i, (quot, trace)) in results.into_iter().enumerate() {
        if quot.is_none() {
            anomalies.push(i);
        }
        quotients.push(quot);
        traces.push(trace);
    }
    Ok(GapCertificate {
        f: q.f.clone(),
        height: h,
        radius,
        gap: m,
        clusters,
        pieces,
        quotients,
        traces,
        anomalies,
    })
}

//! Sparse integer Laurent polynomials on Z^d and finitely supported real
//! l1-arrays with certified tail bounds, under the convolution product.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, SupportSet};

/// Distance-to-integer tolerance of `round_to_int`.
pub const ROUNDING_TOL: f64 = 1e-6;

/// Below this many coefficient pairs, convolution always runs sequentially.
#[cfg(feature = "parallel")]
const PAR_CONV_THRESHOLD: usize = 1 << 12;

/// f in R_d: a finite map Z^d -> Z with no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntLaurentPoly {
    dim: usize,
    terms: BTreeMap<LatticePoint, BigInt>,
}

impl IntLaurentPoly {
    pub fn zero(dim: usize) -> Self {
        IntLaurentPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(LatticePoint::zero(dim), BigInt::from(1))
    }

    pub fn constant(dim: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(LatticePoint::zero(dim), c.into())
    }

    pub fn monomial(exp: LatticePoint, coef: BigInt) -> Self {
        let dim = exp.dim();
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exp, coef);
        }
        IntLaurentPoly { dim, terms }
    }

    pub fn from_terms<I>(dim: usize, it: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, BigInt)>,
    {
        let mut terms: BTreeMap<LatticePoint, BigInt> = BTreeMap::new();
        for (e, c) in it {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            let entry = terms.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(IntLaurentPoly { dim, terms })
    }

    /// Convenience constructor from `(exps, coef)` pairs with i64 coefficients.
    pub fn from_pairs(dim: usize, pairs: &[(&[i64], i64)]) -> Self {
        Self::from_terms(
            dim,
            pairs
                .iter()
                .map(|(e, c)| (LatticePoint::new(e.to_vec()), BigInt::from(*c))),
        )
        .expect("consistent dimensions")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &BigInt)> {
        self.terms.iter()
    }

    pub fn coef(&self, e: &LatticePoint) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn support(&self) -> SupportSet {
        SupportSet::from_points(self.dim, self.terms.keys().cloned())
    }

    /// max |f_n|
    pub fn norm_inf(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// sum |f_n|
    pub fn norm_one(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// f*_n = f_{-n}
    pub fn adjoint(&self) -> Self {
        IntLaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.neg(), c.clone())).collect(),
        }
    }

    /// Multiplication by the unit x^n.
    pub fn translate(&self, n: &LatticePoint) -> Self {
        IntLaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.add(n), c.clone())).collect(),
        }
    }

    /// Zero out every coefficient whose exponent is not in `s`.
    pub fn restrict(&self, s: &SupportSet) -> Self {
        IntLaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| s.contains(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.dim);
        }
        IntLaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(IntLaurentPoly {
            dim: self.dim,
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IntLaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Convolution product (a.b)_n = sum_m a_m b_{n-m}.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let pairs: Vec<(&LatticePoint, &BigInt)> = self.terms.iter().collect();
        let terms = convolve_bigint(&pairs, &other.terms);
        Ok(IntLaurentPoly {
            dim: self.dim,
            terms,
        })
    }

    pub fn to_real(&self) -> RealSummableArray {
        RealSummableArray {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.to_f64().expect("coefficient fits in f64")))
                .collect(),
            tail_bound: 0.0,
        }
    }

    /// Componentwise minimum of the support exponents; None for the zero polynomial.
    pub fn min_exponents(&self) -> Option<Vec<i64>> {
        if self.terms.is_empty() {
            return None;
        }
        let mut min = vec![i64::MAX; self.dim];
        for e in self.terms.keys() {
            for (m, c) in min.iter_mut().zip(&e.0) {
                *m = (*m).min(*c);
            }
        }
        Some(min)
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim != other {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other,
            });
        }
        Ok(())
    }
}

#[cfg(feature = "parallel")]
fn merge_bigint(
    mut a: BTreeMap<LatticePoint, BigInt>,
    b: BTreeMap<LatticePoint, BigInt>,
) -> BTreeMap<LatticePoint, BigInt> {
    for (e, c) in b {
        let entry = a.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
    }
    a
}

fn convolve_bigint_seq(
    a: &[(&LatticePoint, &BigInt)],
    b: &BTreeMap<LatticePoint, BigInt>,
) -> BTreeMap<LatticePoint, BigInt> {
    let mut out: BTreeMap<LatticePoint, BigInt> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.add(eb);
            let entry = out.entry(e).or_insert_with(BigInt::zero);
            *entry += *ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(feature = "parallel")]
fn convolve_bigint_par(
    a: &[(&LatticePoint, &BigInt)],
    b: &BTreeMap<LatticePoint, BigInt>,
) -> BTreeMap<LatticePoint, BigInt> {
    use rayon::prelude::*;
    let mut out = a
        .par_chunks(16)
        .map(|chunk| convolve_bigint_seq(chunk, b))
        .reduce(BTreeMap::new, merge_bigint);
    out.retain(|_, c| !c.is_zero());
    out
}

pub(crate) fn convolve_bigint(
    a: &[(&LatticePoint, &BigInt)],
    b: &BTreeMap<LatticePoint, BigInt>,
) -> BTreeMap<LatticePoint, BigInt> {
    #[cfg(feature = "parallel")]
    {
        if a.len() * b.len() >= PAR_CONV_THRESHOLD {
            return convolve_bigint_par(a, b);
        }
    }
    convolve_bigint_seq(a, b)
}

impl fmt::Display for IntLaurentPoly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let vars = ["x", "y", "z", "w"];
        let mut first = true;
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, k)| **k != 0)
                .map(|(j, k)| {
                    let v = vars.get(j).map(|s| s.to_string()).unwrap_or(format!("x{j}"));
                    if *k == 1 {
                        v
                    } else {
                        format!("{v}^{k}")
                    }
                })
                .collect();
            let mono = mono.join("*");
            if first {
                first = false;
            } else if c.is_negative() {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let mag = if first || !c.is_negative() {
                c.clone()
            } else {
                c.abs()
            };
            if mono.is_empty() {
                write!(out, "{mag}")?;
            } else if mag == BigInt::from(1) {
                write!(out, "{mono}")?;
            } else if mag == BigInt::from(-1) {
                write!(out, "-{mono}")?;
            } else {
                write!(out, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i64>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct IntPolyJson {
    d: usize,
    terms: Vec<TermJson>,
}

impl Serialize for IntLaurentPoly {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        // BTreeMap iteration is lexicographic in the exponent, which is the
        // canonical term order of the interchange format.
        IntPolyJson {
            d: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.0.clone(),
                    coef: c.to_string(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for IntLaurentPoly {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = IntPolyJson::deserialize(de)?;
        IntLaurentPoly::from_terms(
            raw.d,
            raw.terms
                .into_iter()
                .map(|t| {
                    BigInt::from_str(&t.coef)
                        .map(|c| (LatticePoint::new(t.exp), c))
                        .map_err(|e| D::Error::custom(format!("bad coefficient: {e}")))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?,
        )
        .map_err(D::Error::custom)
    }
}

/// A truncation of an element of l1(Z^d, R): finitely many stored reals plus a
/// certified upper bound on the discarded l1 mass.
#[derive(Clone, PartialEq, Debug)]
pub struct RealSummableArray {
    dim: usize,
    terms: BTreeMap<LatticePoint, f64>,
    tail_bound: f64,
}

impl RealSummableArray {
    pub fn zero(dim: usize) -> Self {
        RealSummableArray {
            dim,
            terms: BTreeMap::new(),
            tail_bound: 0.0,
        }
    }

    pub fn from_terms<I>(dim: usize, it: I, tail_bound: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, f64)>,
    {
        assert!(tail_bound >= 0.0);
        let mut terms = BTreeMap::new();
        for (e, c) in it {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            if c != 0.0 {
                terms.insert(e, c);
            }
        }
        Ok(RealSummableArray {
            dim,
            terms,
            tail_bound,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &f64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coef(&self, e: &LatticePoint) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> SupportSet {
        SupportSet::from_points(self.dim, self.terms.keys().cloned())
    }

    /// Reported upper bound sum |v_n| + tail.
    pub fn norm_one(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum::<f64>() + self.tail_bound
    }

    pub fn norm_inf(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn translate(&self, n: &LatticePoint) -> Self {
        RealSummableArray {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.add(n), *c)).collect(),
            tail_bound: self.tail_bound,
        }
    }

    pub fn restrict(&self, s: &SupportSet) -> Self {
        RealSummableArray {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| s.contains(e))
                .map(|(e, c)| (e.clone(), *c))
                .collect(),
            tail_bound: self.tail_bound,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_insert(0.0) += c;
        }
        terms.retain(|_, c| *c != 0.0);
        Ok(RealSummableArray {
            dim: self.dim,
            terms,
            tail_bound: self.tail_bound + other.tail_bound,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> Self {
        RealSummableArray {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
            tail_bound: self.tail_bound * k.abs(),
        }
    }

    /// Convolution with submultiplicative tail propagation:
    /// tail(a.b) = ||a||_1 tail(b) + tail(a) ||b||_1.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let pairs: Vec<(&LatticePoint, &f64)> = self.terms.iter().collect();
        let terms = convolve_f64(&pairs, &other.terms);
        Ok(RealSummableArray {
            dim: self.dim,
            terms,
            tail_bound: self.norm_one() * other.tail_bound + self.tail_bound * other.norm_one(),
        })
    }

    /// Convolution with an integer polynomial (exact coefficients on the right).
    pub fn mul_int(&self, other: &IntLaurentPoly) -> Result<Self> {
        self.mul(&other.to_real())
    }

    /// Round every stored coefficient to the nearest integer.
    ///
    /// Errors when some coefficient sits at distance >= 1/2 - ROUNDING_TOL from
    /// every integer, where rounding would be a guess.
    pub fn round_to_int(&self) -> Result<IntLaurentPoly> {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            let nearest = c.round();
            if (c - nearest).abs() >= 0.5 - ROUNDING_TOL {
                return Err(Error::AmbiguousRounding { value: *c });
            }
            if nearest != 0.0 {
                terms.push((e.clone(), BigInt::from(nearest as i64)));
            }
        }
        IntLaurentPoly::from_terms(self.dim, terms)
    }
}

fn convolve_f64_seq(
    a: &[(&LatticePoint, &f64)],
    b: &BTreeMap<LatticePoint, f64>,
) -> BTreeMap<LatticePoint, f64> {
    let mut out: BTreeMap<LatticePoint, f64> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea.add(eb)).or_insert(0.0) += **ca * cb;
        }
    }
    out.retain(|_, c| *c != 0.0);
    out
}

#[cfg(feature = "parallel")]
fn convolve_f64_par(
    a: &[(&LatticePoint, &f64)],
    b: &BTreeMap<LatticePoint, f64>,
) -> BTreeMap<LatticePoint, f64> {
    use rayon::prelude::*;
    let mut out = a
        .par_chunks(16)
        .map(|chunk| convolve_f64_seq(chunk, b))
        .reduce(BTreeMap::new, |mut acc, m| {
            for (e, c) in m {
                *acc.entry(e).or_insert(0.0) += c;
            }
            acc
        });
    out.retain(|_, c| *c != 0.0);
    out
}

pub(crate) fn convolve_f64(
    a: &[(&LatticePoint, &f64)],
    b: &BTreeMap<LatticePoint, f64>,
) -> BTreeMap<LatticePoint, f64> {
    #[cfg(feature = "parallel")]
    {
        if a.len() * b.len() >= PAR_CONV_THRESHOLD {
            return convolve_f64_par(a, b);
        }
    }
    convolve_f64_seq(a, b)
}

#[derive(Serialize, Deserialize)]
struct RealPolyJson {
    d: usize,
    tail_bound: String,
    terms: Vec<TermJson>,
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl Serialize for RealSummableArray {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        RealPolyJson {
            d: self.dim,
            tail_bound: fmt_f64(self.tail_bound),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.0.clone(),
                    coef: fmt_f64(*c),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RealSummableArray {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = RealPolyJson::deserialize(de)?;
        let tail: f64 = raw
            .tail_bound
            .parse()
            .map_err(|e| D::Error::custom(format!("bad tail bound: {e}")))?;
        RealSummableArray::from_terms(
            raw.d,
            raw.terms
                .into_iter()
                .map(|t| {
                    t.coef
                        .parse::<f64>()
                        .map(|c| (LatticePoint::new(t.exp), c))
                        .map_err(|e| D::Error::custom(format!("bad coefficient: {e}")))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?,
            tail,
        )
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn difference_of_squares() {
        let a = parse_poly("x - 2", Some(1)).unwrap();
        let b = parse_poly("x + 2", Some(1)).unwrap();
        let expect = parse_poly("x^2 - 4", Some(1)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn square_of_one_plus_x_plus_y() {
        let f = parse_poly("1 + x + y", Some(2)).unwrap();
        let expect = parse_poly("1 + x^2 + y^2 + 2*x + 2*y + 2*x*y", Some(2)).unwrap();
        assert_eq!(f.mul(&f).unwrap(), expect);
    }

    #[test]
    fn mul_by_zero_annihilates() {
        let f = parse_poly("3 + x + y", Some(2)).unwrap();
        let z = IntLaurentPoly::zero(2);
        let prod = f.mul(&z).unwrap();
        assert!(prod.is_zero());
        assert!(prod.support().is_empty());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = parse_poly("x", Some(1)).unwrap();
        let b = parse_poly("x + y", Some(2)).unwrap();
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn adjoint_examples() {
        let f = parse_poly("x - 2", Some(1)).unwrap();
        assert_eq!(f.adjoint(), parse_poly("x^-1 - 2", Some(1)).unwrap());

        let g = parse_poly("3 + x + y + x^-1 + y^-1", Some(2)).unwrap();
        assert_eq!(g.adjoint(), g);

        assert_eq!(IntLaurentPoly::zero(1).adjoint(), IntLaurentPoly::zero(1));
    }

    #[test]
    fn norms() {
        let f = parse_poly("3 + x + y", Some(2)).unwrap();
        assert_eq!(f.norm_one(), BigInt::from(5));
        assert_eq!(f.norm_inf(), BigInt::from(3));
    }

    #[test]
    fn restrict_and_translate() {
        let f = parse_poly("1 + x + x^10", Some(1)).unwrap();
        let s = SupportSet::from_points(
            1,
            [LatticePoint::new(vec![0]), LatticePoint::new(vec![1])],
        );
        assert_eq!(f.restrict(&s), parse_poly("1 + x", Some(1)).unwrap());

        let g = parse_poly("1 + x", Some(1)).unwrap();
        assert_eq!(
            g.translate(&LatticePoint::new(vec![3])),
            parse_poly("x^3 + x^4", Some(1)).unwrap()
        );
    }

    #[test]
    fn rounding() {
        let v = RealSummableArray::from_terms(
            1,
            [
                (LatticePoint::new(vec![1]), 0.9999),
                (LatticePoint::new(vec![0]), -2.0001),
            ],
            0.0,
        )
        .unwrap();
        assert_eq!(v.round_to_int().unwrap(), parse_poly("x - 2", Some(1)).unwrap());

        let bad =
            RealSummableArray::from_terms(1, [(LatticePoint::new(vec![0]), 0.5)], 0.0).unwrap();
        assert!(matches!(
            bad.round_to_int(),
            Err(Error::AmbiguousRounding { .. })
        ));
    }

    #[test]
    fn real_mul_tail_propagation() {
        let a = RealSummableArray::from_terms(1, [(LatticePoint::new(vec![0]), 2.0)], 0.25).unwrap();
        let b = RealSummableArray::from_terms(1, [(LatticePoint::new(vec![1]), 3.0)], 0.5).unwrap();
        let p = a.mul(&b).unwrap();
        // ||a||_1 = 2.25, ||b||_1 = 3.5; tail = 2.25*0.5 + 0.25*3.5
        assert!((p.tail_bound() - (2.25 * 0.5 + 0.25 * 3.5)).abs() < 1e-15);
        assert_eq!(p.coef(&LatticePoint::new(vec![1])), 6.0);
    }

    #[test]
    fn json_round_trip() {
        let f = parse_poly("3*x^-2*y + 7 - 12345678901234567890123*y^5", Some(2)).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let back: IntLaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(f, back);
    }

    #[test]
    fn embedding_commutes_with_convolution() {
        let a = parse_poly("1 + 2*x - y^-1", Some(2)).unwrap();
        let b = parse_poly("x*y - 3", Some(2)).unwrap();
        let exact = a.mul(&b).unwrap().to_real();
        let real = a.to_real().mul(&b.to_real()).unwrap();
        for (e, c) in exact.terms() {
            assert_eq!(real.coef(e), *c);
        }
        assert_eq!(exact.num_terms(), real.num_terms());
    }
}

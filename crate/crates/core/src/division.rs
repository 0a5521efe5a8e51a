//! Exact divisibility in R_d modulo a single Laurent polynomial.
//!
//! Division runs over the rationals with a fixed graded-lexicographic order
//! (x > y > z, total degree first). Integrality of the quotient is checked
//! afterwards, which separates "divisible in Q[x]" from "divisible in R_d".

use std::collections::BTreeMap;

use num::rational::BigRational;
use num::bigint::BigInt;
use num::traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::poly::IntLaurentPoly;

/// A Laurent polynomial with rational coefficients. Appears as division
/// quotient/remainder; hashable so it can label cosets in enumerations.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatLaurentPoly {
    dim: usize,
    terms: BTreeMap<LatticePoint, BigRational>,
}

impl RatLaurentPoly {
    pub fn zero(dim: usize) -> Self {
        RatLaurentPoly {
            dim,
            terms: BTreeMap::new(),
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &BigRational)> {
        self.terms.iter()
    }

    pub fn from_int(p: &IntLaurentPoly) -> Self {
        RatLaurentPoly {
            dim: p.dim(),
            terms: p
                .terms()
                .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())))
                .collect(),
        }
    }

    /// Some(p) exactly when every coefficient is an integer.
    pub fn to_int(&self) -> Option<IntLaurentPoly> {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if !c.is_integer() {
                return None;
            }
            terms.push((e.clone(), c.to_integer()));
        }
        IntLaurentPoly::from_terms(self.dim, terms).ok()
    }

    pub fn translate(&self, n: &LatticePoint) -> Self {
        RatLaurentPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, c)| (e.add(n), c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms
                .entry(e.clone())
                .or_insert_with(BigRational::zero);
            *entry -= c;
        }
        terms.retain(|_, c| !c.is_zero());
        RatLaurentPoly {
            dim: self.dim,
            terms,
        }
    }

    pub fn eval_f64(&self, xs: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: f64 = e
                    .0
                    .iter()
                    .zip(xs)
                    .map(|(k, x)| x.powi(*k as i32))
                    .product();
                c.to_f64().unwrap_or(f64::NAN) * mono
            })
            .sum()
    }
}

/// Graded-lexicographic key: total degree first, then lexicographic with the
/// variable order x > y > z given by coordinate position.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct GrlexKey {
    deg: i64,
    exps: Vec<i64>,
}

impl GrlexKey {
    fn new(exps: Vec<i64>) -> Self {
        GrlexKey {
            deg: exps.iter().sum(),
            exps,
        }
    }

    fn divisible_by(&self, other: &GrlexKey) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a >= b)
    }

    fn quotient(&self, other: &GrlexKey) -> GrlexKey {
        GrlexKey::new(self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect())
    }

    fn product(&self, other: &GrlexKey) -> GrlexKey {
        GrlexKey {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Ordinary (exponents >= 0) polynomial keyed by the monomial order.
#[derive(Clone, Debug)]
struct OrdPoly {
    dim: usize,
    terms: BTreeMap<GrlexKey, BigRational>,
}

impl OrdPoly {
    fn from_int(p: &IntLaurentPoly) -> Self {
        OrdPoly {
            dim: p.dim(),
            terms: p
                .terms()
                .map(|(e, c)| {
                    debug_assert!(e.0.iter().all(|k| *k >= 0));
                    (GrlexKey::new(e.0.clone()), BigRational::from_integer(c.clone()))
                })
                .collect(),
        }
    }

    fn to_laurent(&self) -> RatLaurentPoly {
        RatLaurentPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (LatticePoint::new(k.exps.clone()), c.clone()))
                .collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Single-divisor multivariate division: p = q*f + r with no monomial of r
/// divisible by the leading monomial of f. The remainder is unique for the
/// fixed order, so it doubles as a coset label in the ordinary quotient ring.
fn div_rem(p: &OrdPoly, f: &OrdPoly) -> (OrdPoly, OrdPoly) {
    let (flead, fc) = f.terms.iter().next_back().expect("nonzero divisor");
    // with a monic integer divisor everything stays integral; BigInt
    // arithmetic avoids the rational-reduction overhead on large inputs
    if (fc.is_one() || (-fc).is_one())
        && f.terms.values().all(|c| c.is_integer())
        && p.terms.values().all(|c| c.is_integer())
    {
        return div_rem_int(p, f);
    }
    let mut work = p.terms.clone();
    let mut quot: BTreeMap<GrlexKey, BigRational> = BTreeMap::new();
    let mut rem: BTreeMap<GrlexKey, BigRational> = BTreeMap::new();

    while let Some((k, c)) = work.pop_last() {
        if k.divisible_by(flead) {
            let t = k.quotient(flead);
            let q = &c / fc;
            for (gk, gc) in &f.terms {
                if gk == flead {
                    continue; // cancels the popped leading term
                }
                let key = t.product(gk);
                let delta = &q * gc;
                match work.get_mut(&key) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            work.remove(&key);
                        }
                    }
                    None => {
                        work.insert(key, -delta);
                    }
                }
            }
            quot.insert(t, q);
        } else {
            rem.insert(k, c);
        }
    }

    (
        OrdPoly {
            dim: p.dim,
            terms: quot,
        },
        OrdPoly {
            dim: p.dim,
            terms: rem,
        },
    )
}

/// Same contract as div_rem for a monic (leading coefficient ±1) integer
/// divisor and integer dividend; quotient and remainder are integral.
fn div_rem_int(p: &OrdPoly, f: &OrdPoly) -> (OrdPoly, OrdPoly) {
    let (flead, fc) = f.terms.iter().next_back().expect("nonzero divisor");
    let negate = !fc.is_one();
    let fint: Vec<(GrlexKey, BigInt)> = f
        .terms
        .iter()
        .filter(|(k, _)| *k != flead)
        .map(|(k, c)| (k.clone(), c.to_integer()))
        .collect();
    let mut work: BTreeMap<GrlexKey, BigInt> = p
        .terms
        .iter()
        .map(|(k, c)| (k.clone(), c.to_integer()))
        .collect();
    let mut quot: BTreeMap<GrlexKey, BigInt> = BTreeMap::new();
    let mut rem: BTreeMap<GrlexKey, BigInt> = BTreeMap::new();

    while let Some((k, c)) = work.pop_last() {
        if k.divisible_by(flead) {
            let t = k.quotient(flead);
            let q = if negate { -c } else { c };
            for (gk, gc) in &fint {
                let key = t.product(gk);
                let delta = &q * gc;
                match work.get_mut(&key) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            work.remove(&key);
                        }
                    }
                    None => {
                        work.insert(key, -delta);
                    }
                }
            }
            quot.insert(t, q);
        } else {
            rem.insert(k, c);
        }
    }

    let lift = |m: BTreeMap<GrlexKey, BigInt>| OrdPoly {
        dim: p.dim,
        terms: m
            .into_iter()
            .map(|(k, c)| (k, BigRational::from_integer(c)))
            .collect(),
    };
    (lift(quot), lift(rem))
}

/// Multiply p by the unit x^n with minimal n so that every exponent is >= 0
/// and each coordinate touches 0. Returns (x^n * p, n).
pub fn normalize(p: &IntLaurentPoly) -> Result<(IntLaurentPoly, LatticePoint)> {
    let min = p.min_exponents().ok_or(Error::ZeroPolynomial)?;
    let shift = LatticePoint::new(min.iter().map(|m| -m).collect());
    Ok((p.translate(&shift), shift))
}

/// Result of dividing p by f over the rationals, expressed back in R_d terms:
/// p = quotient * f + remainder.
#[derive(Clone, Debug)]
pub struct DivisionResult {
    pub quotient: RatLaurentPoly,
    pub remainder: RatLaurentPoly,
}

pub fn divide(f: &IntLaurentPoly, p: &IntLaurentPoly) -> Result<DivisionResult> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if f.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: p.dim(),
        });
    }
    if p.is_zero() {
        return Ok(DivisionResult {
            quotient: RatLaurentPoly::zero(p.dim()),
            remainder: RatLaurentPoly::zero(p.dim()),
        });
    }
    let (fnorm, sf) = normalize(f)?;
    let (pnorm, sp) = normalize(p)?;
    let (q, r) = div_rem(&OrdPoly::from_int(&pnorm), &OrdPoly::from_int(&fnorm));
    // pnorm = q * fnorm + r  with pnorm = x^sp p, fnorm = x^sf f, hence
    // p = (q x^{sf-sp}) f + x^{-sp} r.
    let qshift = sf.sub(&sp);
    let rshift = sp.neg();
    Ok(DivisionResult {
        quotient: q.to_laurent().translate(&qshift),
        remainder: r.to_laurent().translate(&rshift),
    })
}

/// Outcome of the divisibility decision for f | p.
#[derive(Clone, Debug)]
pub enum Divisibility {
    /// Quotient in R_d (integer coefficients); f | p in R_d.
    Integral(IntLaurentPoly),
    /// Zero remainder but a non-integer quotient: divisible over Q only.
    RationalOnly(RatLaurentPoly),
    /// Nonzero remainder.
    No { remainder: RatLaurentPoly },
}

impl Divisibility {
    pub fn is_integral(&self) -> bool {
        matches!(self, Divisibility::Integral(_))
    }

    pub fn quotient(&self) -> Option<&IntLaurentPoly> {
        match self {
            Divisibility::Integral(q) => Some(q),
            _ => None,
        }
    }
}

pub fn divides(f: &IntLaurentPoly, p: &IntLaurentPoly) -> Result<Divisibility> {
    let res = divide(f, p)?;
    if !res.remainder.is_zero() {
        return Ok(Divisibility::No {
            remainder: res.remainder,
        });
    }
    match res.quotient.to_int() {
        Some(q) => Ok(Divisibility::Integral(q)),
        None => Ok(Divisibility::RationalOnly(res.quotient)),
    }
}

/// Canonical coset data for p in R_d/<f>.
///
/// `rep` is the unique division remainder of x^shift * p by the normalized
/// modulus; two cosets are equal iff the cross-shifted representatives agree
/// modulo f, which `same_coset` decides exactly.
#[derive(Clone, Debug)]
pub struct CosetRep {
    pub rep: RatLaurentPoly,
    pub shift: LatticePoint,
    pub modulus: IntLaurentPoly,
    /// Whether the remainder has integer coefficients. When false the label is
    /// still a sound equality test over Q, but not a Z-coset canonical form.
    pub integral: bool,
}

pub fn normal_form(p: &IntLaurentPoly, f: &IntLaurentPoly) -> Result<CosetRep> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if f.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: p.dim(),
        });
    }
    let (fnorm, _) = normalize(f)?;
    let shift = match p.min_exponents() {
        None => LatticePoint::zero(p.dim()),
        Some(min) => LatticePoint::new(min.iter().map(|m| (-m).max(0)).collect()),
    };
    let shifted = p.translate(&shift);
    let (_, r) = div_rem(&OrdPoly::from_int(&shifted), &OrdPoly::from_int(&fnorm));
    let rep = r.to_laurent();
    let integral = rep.terms.values().all(|c| c.is_integer());
    Ok(CosetRep {
        rep,
        shift,
        modulus: f.clone(),
        integral,
    })
}

impl CosetRep {
    /// Exact coset equality over Q: true iff f divides p - p' over Q.
    pub fn same_coset(&self, other: &CosetRep) -> Result<bool> {
        if self.modulus != other.modulus {
            return Err(Error::BadInput("coset reps over different moduli".into()));
        }
        let (fnorm, _) = normalize(&self.modulus)?;
        // cross-multiply by the unit monomials: x^{s'} rep - x^{s} rep'
        let a = self.rep.translate(&other.shift);
        let b = other.rep.translate(&self.shift);
        let diff = a.sub(&b);
        if diff.is_zero() {
            return Ok(true);
        }
        let (_, r) = rat_div_rem(&diff, &fnorm);
        Ok(r.is_zero())
    }
}

/// Division of a rational ordinary Laurent polynomial (all exponents >= 0) by
/// an integer modulus; used for coset-label comparisons.
fn rat_div_rem(p: &RatLaurentPoly, fnorm: &IntLaurentPoly) -> (OrdPoly, OrdPoly) {
    let pord = OrdPoly {
        dim: p.dim,
        terms: p
            .terms
            .iter()
            .map(|(e, c)| {
                debug_assert!(e.0.iter().all(|k| *k >= 0));
                (GrlexKey::new(e.0.clone()), c.clone())
            })
            .collect(),
    };
    div_rem(&pord, &OrdPoly::from_int(fnorm))
}

/// Remainder of x^shift * p modulo the normalized f. All inputs sharing one
/// `shift` live in the same ordinary quotient ring, where the remainder is a
/// canonical, hashable coset label. Errors if x^shift * p is not ordinary.
pub fn reduce_shifted(
    f: &IntLaurentPoly,
    p: &IntLaurentPoly,
    shift: &LatticePoint,
) -> Result<RatLaurentPoly> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let (fnorm, _) = normalize(f)?;
    let shifted = p.translate(shift);
    if let Some(min) = shifted.min_exponents() {
        if min.iter().any(|m| *m < 0) {
            return Err(Error::BadInput(
                "shift does not clear the negative exponents".into(),
            ));
        }
    }
    let (_, r) = div_rem(&OrdPoly::from_int(&shifted), &OrdPoly::from_int(&fnorm));
    Ok(r.to_laurent())
}

/// Shift that clears the negative exponents of every polynomial in `ps`.
pub fn common_shift(dim: usize, ps: impl IntoIterator<Item = IntLaurentPoly>) -> LatticePoint {
    let mut shift = vec![0i64; dim];
    for p in ps {
        if let Some(min) = p.min_exponents() {
            for (s, m) in shift.iter_mut().zip(&min) {
                *s = (*s).max(-m);
            }
        }
    }
    LatticePoint::new(shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(src: &str, d: usize) -> IntLaurentPoly {
        parse_poly(src, Some(d)).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let f = p("x^-1 - 2", 1);
        let (n, s) = normalize(&f).unwrap();
        assert_eq!(n, p("1 - 2*x", 1));
        assert_eq!(s.0, vec![1]);

        let g = p("3 + x + y", 2);
        let (n, s) = normalize(&g).unwrap();
        assert_eq!(n, g);
        assert_eq!(s.0, vec![0, 0]);

        // every coordinate of the normalized support touches 0
        let m = p("x^2 * y^-3", 2);
        let (n, s) = normalize(&m).unwrap();
        assert_eq!(n, p("1", 2));
        assert_eq!(s.0, vec![-2, 3]);

        assert!(normalize(&IntLaurentPoly::zero(2)).is_err());
    }

    #[test]
    fn divide_examples() {
        let r = divide(&p("x - 2", 1), &p("x^2 - 4", 1)).unwrap();
        assert!(r.remainder.is_zero());
        assert_eq!(r.quotient.to_int().unwrap(), p("x + 2", 1));

        let f = p("3 + x + y", 2);
        let prod = f.mul(&p("1 + x*y", 2)).unwrap();
        let r = divide(&f, &prod).unwrap();
        assert!(r.remainder.is_zero());
        assert_eq!(r.quotient.to_int().unwrap(), p("1 + x*y", 2));

        let r = divide(&f, &p("1", 2)).unwrap();
        assert!(r.quotient.is_zero());
        assert_eq!(r.remainder.to_int().unwrap(), p("1", 2));

        assert!(divide(&IntLaurentPoly::zero(1), &p("x", 1)).is_err());
    }

    #[test]
    fn divides_examples() {
        match divides(&p("x - 2", 1), &p("3*x - 6", 1)).unwrap() {
            Divisibility::Integral(q) => assert_eq!(q, p("3", 1)),
            other => panic!("expected integral quotient, got {other:?}"),
        }

        match divides(&p("2*x - 4", 1), &p("x - 2", 1)).unwrap() {
            Divisibility::RationalOnly(q) => assert_eq!(q.num_terms(), 1),
            other => panic!("expected rational-only, got {other:?}"),
        }

        match divides(&p("1 + x + y", 2), &p("1 + x^4 + y^4", 2)).unwrap() {
            Divisibility::No { remainder } => assert!(!remainder.is_zero()),
            other => panic!("expected non-divisible, got {other:?}"),
        }
    }

    #[test]
    fn units_divide_everything() {
        // x is a unit of R_1, so it divides 1.
        match divides(&p("x", 1), &p("1", 1)).unwrap() {
            Divisibility::Integral(q) => assert_eq!(q, p("x^-1", 1)),
            other => panic!("unit division failed: {other:?}"),
        }
    }

    #[test]
    fn normal_form_examples() {
        let f = p("1 + x + y", 2);
        let nf = normal_form(&f, &f).unwrap();
        assert!(nf.rep.is_zero());

        let q = p("1 + x^2 + y^2", 2);
        let nf = normal_form(&q, &f).unwrap();
        assert!(!nf.rep.is_zero());

        // p and p + k*f share a coset
        let k = p("7*x - 3*y^-2", 2);
        let shifted = q.add(&k.mul(&f).unwrap()).unwrap();
        let nf2 = normal_form(&shifted, &f).unwrap();
        assert!(nf.same_coset(&nf2).unwrap());

        // distinct cosets stay distinct
        let other = normal_form(&p("x", 2), &f).unwrap();
        assert!(!nf.same_coset(&other).unwrap());
    }

    #[test]
    fn remainder_unaffected_by_unit_translates_of_dividend_coset() {
        // dividing p and p + x^n f yields the same remainder
        let f = p("3 + x + y", 2);
        let q = p("1 + x^3*y + 5*y^2", 2);
        let base = divide(&f, &q).unwrap().remainder;
        for n in [vec![0, 0], vec![2, 1], vec![5, 0], vec![0, 4]] {
            let shifted = q
                .add(&f.translate(&LatticePoint::new(n)))
                .unwrap();
            let r = divide(&f, &shifted).unwrap().remainder;
            assert_eq!(r, base);
        }
    }

    #[test]
    fn evaluation_compatibility() {
        let f = p("3 + x + y", 2);
        let q = p("1 - 2*x^2*y + y^3 + x", 2);
        let res = divide(&f, &q).unwrap();
        for xs in [[1.5, 0.25], [-0.5, 2.0], [3.0, -1.0]] {
            let lhs = RatLaurentPoly::from_int(&q).eval_f64(&xs);
            let rhs = res.quotient.eval_f64(&xs) * RatLaurentPoly::from_int(&f).eval_f64(&xs)
                + res.remainder.eval_f64(&xs);
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
        }
    }
}

//! Dense univariate polynomial helpers over the rationals: Euclidean
//! division, gcd, Sturm chains, and the z + 1/z compression used to locate
//! unit-circle roots of self-inversive integer polynomials.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, Zero};

use crate::error::{Error, Result};

type Rat = BigRational;

/// Coefficients in ascending degree, highest coefficient nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly(Vec<Rat>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    /// x^deg * p(1/x)
    pub fn reverse(&self) -> Self {
        let mut v = self.0.clone();
        v.reverse();
        Self::new(v)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => UniPoly(self.0.iter().map(|c| c / lc).collect()),
        }
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let dl = d.leading().unwrap().clone();
        let mut rem = self.0.clone();
        if rem.len() < d.0.len() {
            return (Self::zero(), self.clone());
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![Rat::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] / &dl;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                let v = &c * dc;
                rem[i + j] -= v;
            }
            quot[i] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// How many times (x - root) divides self; also returns the deflation.
    pub fn strip_root(&self, root: &Rat) -> (usize, UniPoly) {
        let linear = UniPoly::new(vec![-root.clone(), Rat::from_integer(BigInt::from(1))]);
        let mut count = 0;
        let mut cur = self.clone();
        while !cur.is_zero() && cur.eval(root).is_zero() {
            let (q, r) = cur.div_rem(&linear);
            debug_assert!(r.is_zero());
            cur = q;
            count += 1;
        }
        (count, cur)
    }
}

/// Sturm chain p, p', then negated Euclidean remainders.
pub fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            return chain;
        }
        chain.push(r.neg());
    }
}

fn sign_variations(chain: &[UniPoly], x: &Rat) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Number of distinct real roots of p in (a, b], by Sturm's theorem.
pub fn count_roots_in(chain: &[UniPoly], a: &Rat, b: &Rat) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

/// Bisect (a, b] down to width <= `limit`, keeping exactly one root inside.
/// Requires the chain to report one root in (a, b].
pub fn isolate_root(chain: &[UniPoly], a: &Rat, b: &Rat, limit: &Rat) -> (Rat, Rat) {
    let two = Rat::from_integer(BigInt::from(2));
    let mut lo = a.clone();
    let mut hi = b.clone();
    while &(&hi - &lo) > limit {
        let mid = (&lo + &hi) / &two;
        if count_roots_in(chain, &lo, &mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// For a palindromic integer polynomial g of even degree 2m (coefficients
/// ascending, g_k = g_{2m-k}), produce P with g(z) = z^m P(z + 1/z).
///
/// Uses z^j + z^-j = Q_j(z + 1/z) with Q_0 = 2, Q_1 = u, Q_{j+1} = u Q_j - Q_{j-1}.
pub fn palindromic_compress(g: &[BigInt]) -> Result<Vec<BigInt>> {
    let n = g.len();
    if n == 0 || n % 2 == 0 {
        return Err(Error::BadInput(
            "palindromic compression needs even degree".into(),
        ));
    }
    let m = (n - 1) / 2;
    for k in 0..n {
        if g[k] != g[n - 1 - k] {
            return Err(Error::BadInput("polynomial is not palindromic".into()));
        }
    }
    // Q_j in ascending coefficients
    let mut q_prev: Vec<BigInt> = vec![BigInt::from(2)]; // Q_0
    let mut q_cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::from(1)]; // Q_1
    let mut out = vec![BigInt::zero(); m + 1];
    out[0] = g[m].clone();
    for j in 1..=m {
        for (i, c) in q_cur.iter().enumerate() {
            out[i] += &g[m + j] * c;
        }
        // Q_{j+1} = u*Q_j - Q_{j-1}
        let mut next = vec![BigInt::zero(); q_cur.len() + 1];
        for (i, c) in q_cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in q_prev.iter().enumerate() {
            next[i] -= c;
        }
        q_prev = std::mem::replace(&mut q_cur, next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    fn poly(cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|c| rat(*c)).collect())
    }

    #[test]
    fn div_rem_basic() {
        // x^2 - 4 = (x - 2)(x + 2)
        let (q, r) = poly(&[-4, 0, 1]).div_rem(&poly(&[-2, 1]));
        assert_eq!(q, poly(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_shared_factor() {
        // gcd((x-2)(x+1), 3(x-2)) = x - 2
        let a = poly(&[-2, -1, 1]);
        let b = poly(&[-6, 3]);
        assert_eq!(a.gcd(&b), poly(&[-2, 1]));
    }

    #[test]
    fn sturm_counts_roots_of_quadratic() {
        // x^2 - 2 has two real roots in (-2, 2]
        let chain = sturm_chain(&poly(&[-2, 0, 1]));
        assert_eq!(count_roots_in(&chain, &rat(-2), &rat(2)), 2);
        assert_eq!(count_roots_in(&chain, &rat(0), &rat(2)), 1);
        assert_eq!(count_roots_in(&chain, &rat(2), &rat(3)), 0);
    }

    #[test]
    fn sturm_handles_repeated_roots() {
        // (x-1)^2 (x+3) = x^3 + x^2 - 5x + 3: distinct roots 1 and -3
        let chain = sturm_chain(&poly(&[3, -5, 1, 1]));
        assert_eq!(count_roots_in(&chain, &rat(-10), &rat(10)), 2);
    }

    #[test]
    fn isolate_sqrt2() {
        let chain = sturm_chain(&poly(&[-2, 0, 1]));
        let (lo, hi) = isolate_root(&chain, &rat(0), &rat(2), &Rat::new(BigInt::from(1), BigInt::from(1024)));
        let mid = (lo + hi) / rat(2);
        let x = num::traits::ToPrimitive::to_f64(&mid).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-2);
    }

    #[test]
    fn compress_palindrome() {
        // z^2 + 1 = z (z + 1/z): P(u) = u
        let p = palindromic_compress(&[BigInt::from(1), BigInt::zero(), BigInt::from(1)]).unwrap();
        assert_eq!(p, vec![BigInt::zero(), BigInt::from(1)]);

        // z^4 + z^3 + z^2 + z + 1 = z^2 (Q2 + Q1 + 1) -> P(u) = u^2 + u - 1
        let g: Vec<BigInt> = [1, 1, 1, 1, 1].iter().map(|c| BigInt::from(*c)).collect();
        let p = palindromic_compress(&g).unwrap();
        assert_eq!(p, vec![BigInt::from(-1), BigInt::from(1), BigInt::from(1)]);

        assert!(palindromic_compress(&[BigInt::from(1), BigInt::from(2)]).is_err());
    }
}

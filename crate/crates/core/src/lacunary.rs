//! Brute-force lacunary independence machinery in R_d/<f>: spaced-sum
//! verification, empirical spacing search, coset sum counting, the Haar
//! character pairing, and the mod-2 Frobenius counterexample.
//!
//! Every report is empirical: it refutes or supports independence for the
//! given families and configurations only, never the universally quantified
//! property.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::division::{common_shift, divides, reduce_shifted, Divisibility};
use crate::error::{Error, Result};
use crate::lattice::{ball_points, ball_sublattice, point_dist, LatticePoint};
use crate::poly::IntLaurentPoly;

/// Hard ceiling on brute-force case counts; larger requests fail loudly.
pub const BRUTE_FORCE_GUARD: u128 = 1_000_000;

pub const SCOPE_NOTE: &str = "empirical: covers only the given families and \
configurations, not the universally quantified independence property";

fn guard(cases: u128) -> Result<()> {
    if cases > BRUTE_FORCE_GUARD {
        return Err(Error::BlowupGuard {
            cases,
            guard: BRUTE_FORCE_GUARD,
        });
    }
    Ok(())
}

/// Finite set of lattice points with verified pairwise sup-distance >= spacing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpacedConfiguration {
    points: Vec<LatticePoint>,
    spacing: usize,
}

impl SpacedConfiguration {
    pub fn new(points: Vec<LatticePoint>, spacing: usize) -> Result<Self> {
        if spacing == 0 {
            return Err(Error::OutOfRange("spacing must be at least 1".into()));
        }
        if points.is_empty() {
            return Err(Error::EmptySupport);
        }
        let d = points[0].dim();
        for p in &points {
            if p.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.dim(),
                });
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let dist = point_dist(&points[i], &points[j]);
                if dist < spacing as i64 {
                    return Err(Error::BadInput(format!(
                        "points at distance {dist}, spacing requires {spacing}"
                    )));
                }
            }
        }
        Ok(SpacedConfiguration { points, spacing })
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn spacing(&self) -> usize {
        self.spacing
    }
}

/// Distinct-coset census of a list of sums modulo f. Collisions over the
/// rational coset labels are rechecked over Z; a Q-only collision does not
/// merge classes but is counted separately.
struct CosetCensus {
    distinct: usize,
    witness: Option<(usize, usize)>,
    rational_only_collisions: usize,
}

fn coset_census(f: &IntLaurentPoly, sums: &[IntLaurentPoly]) -> Result<CosetCensus> {
    let shift = common_shift(f.dim(), sums.iter().cloned());
    let mut buckets: HashMap<crate::division::RatLaurentPoly, Vec<usize>> = HashMap::new();
    for (i, s) in sums.iter().enumerate() {
        buckets
            .entry(reduce_shifted(f, s, &shift)?)
            .or_default()
            .push(i);
    }
    let mut distinct = 0;
    let mut witness = None;
    let mut rational_only = 0;
    for members in buckets.values() {
        // partition the bucket into true Z-cosets
        let mut reps: Vec<usize> = Vec::new();
        for &i in members {
            let mut matched = false;
            for &r in &reps {
                let diff = sums[i].sub(&sums[r])?;
                if matches!(divides(f, &diff)?, Divisibility::Integral(_)) {
                    matched = true;
                    if witness.is_none() {
                        witness = Some((r, i));
                    }
                    break;
                }
            }
            if !matched {
                if !reps.is_empty() {
                    rational_only += 1;
                }
                reps.push(i);
            }
        }
        distinct += reps.len();
    }
    Ok(CosetCensus {
        distinct,
        witness,
        rational_only_collisions: rational_only,
    })
}

fn decode_selection(mut flat: usize, base: usize, len: usize) -> Vec<usize> {
    let mut sel = vec![0usize; len];
    for s in sel.iter_mut().rev() {
        *s = flat % base;
        flat /= base;
    }
    sel
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndependenceReport {
    pub family_sizes: Vec<usize>,
    pub distinct_sum_count: usize,
    pub expected: usize,
    pub independent: bool,
    /// Selections (one index per family) whose sums collide over Z.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub rational_only_collisions: usize,
    pub scope: String,
}

/// Count distinct values of e_1 + ... + e_k over all choices e_j from the
/// j-th family, in R_d/<f>. Independent iff the count hits the product.
pub fn independence_check(
    f: &IntLaurentPoly,
    families: &[Vec<IntLaurentPoly>],
) -> Result<IndependenceReport> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if families.is_empty() || families.iter().any(|e| e.is_empty()) {
        return Err(Error::EmptySupport);
    }
    let expected: u128 = families.iter().map(|e| e.len() as u128).product();
    guard(expected)?;
    let expected = expected as usize;

    let mut sums = Vec::with_capacity(expected);
    let mut selections = Vec::with_capacity(expected);
    let mut stack = vec![IntLaurentPoly::zero(f.dim())];
    let mut sel = Vec::new();
    fn rec(
        families: &[Vec<IntLaurentPoly>],
        j: usize,
        stack: &mut Vec<IntLaurentPoly>,
        sel: &mut Vec<usize>,
        sums: &mut Vec<IntLaurentPoly>,
        selections: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        if j == families.len() {
            sums.push(stack.last().unwrap().clone());
            selections.push(sel.clone());
            return Ok(());
        }
        for (i, e) in families[j].iter().enumerate() {
            let next = stack.last().unwrap().add(e)?;
            stack.push(next);
            sel.push(i);
            rec(families, j + 1, stack, sel, sums, selections)?;
            sel.pop();
            stack.pop();
        }
        Ok(())
    }
    rec(families, 0, &mut stack, &mut sel, &mut sums, &mut selections)?;

    let census = coset_census(f, &sums)?;
    Ok(IndependenceReport {
        family_sizes: families.iter().map(|e| e.len()).collect(),
        distinct_sum_count: census.distinct,
        expected,
        independent: census.distinct == expected,
        witness: census
            .witness
            .map(|(a, b)| (selections[a].clone(), selections[b].clone())),
        rational_only_collisions: census.rational_only_collisions,
        scope: SCOPE_NOTE.into(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorollaryViolation {
    /// Family index chosen at each configuration point.
    pub selection: Vec<usize>,
    pub sum: IntLaurentPoly,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub cases: u128,
    pub divisible_sums: usize,
    pub violations: Vec<CorollaryViolation>,
    pub scope: String,
}

/// Exhaustive check of the spaced-divisibility statement: over all selections
/// n -> p(n) from the family, whenever f divides sum_n x^n p(n), f must also
/// divide every p(n). Any counterexample at this spacing is reported.
pub fn verify_spaced_divisibility(
    f: &IntLaurentPoly,
    family: &[IntLaurentPoly],
    cfg: &SpacedConfiguration,
) -> Result<CorollaryReport> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if family.is_empty() {
        return Err(Error::EmptySupport);
    }
    let s = cfg.points().len();
    let cases = (family.len() as u128).pow(s as u32);
    guard(cases)?;

    // f | x^n p iff f | p, monomials being units
    let mut part_divisible = Vec::new();
    for p in family {
        part_divisible.push(matches!(divides(f, p)?, Divisibility::Integral(_)));
    }

    let check = |flat: usize| -> Result<(bool, Option<CorollaryViolation>)> {
        let sel = decode_selection(flat, family.len(), s);
        let mut sum = IntLaurentPoly::zero(f.dim());
        for (pt, &i) in cfg.points().iter().zip(&sel) {
            sum = sum.add(&family[i].translate(pt))?;
        }
        if !matches!(divides(f, &sum)?, Divisibility::Integral(_)) {
            return Ok((false, None));
        }
        let bad = sel.iter().any(|&i| !part_divisible[i]);
        Ok((true, bad.then_some(CorollaryViolation { selection: sel, sum })))
    };

    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        (0..cases as usize)
            .into_par_iter()
            .map(check)
            .collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = (0..cases as usize).map(check).collect::<Result<_>>()?;

    let divisible_sums = results.iter().filter(|(d, _)| *d).count();
    let violations = results.into_iter().filter_map(|(_, v)| v).collect();
    Ok(CorollaryReport {
        cases,
        divisible_sums,
        violations,
        scope: SCOPE_NOTE.into(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MSearchReport {
    /// Smallest spacing from which no sampled violation was found onward.
    pub empirical_m: Option<usize>,
    /// (spacing, violations found) for every tested spacing.
    pub violations_by_spacing: Vec<(usize, usize)>,
    pub scope: String,
}

/// Sample random spaced two- and three-point configurations at every spacing
/// up to m_max and look for spaced-divisibility violations.
pub fn empirical_m_search(
    f: &IntLaurentPoly,
    family: &[IntLaurentPoly],
    m_max: usize,
    trials: usize,
    seed: u64,
) -> Result<MSearchReport> {
    if m_max == 0 {
        return Err(Error::OutOfRange("m_max must be at least 1".into()));
    }
    let d = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_spacing = Vec::new();
    for m in 1..=m_max {
        let mut violations = 0;
        for _ in 0..trials {
            let count = rng.gen_range(2..=3usize);
            guard((family.len() as u128).pow(count as u32))?;
            // chain along axis 0 by at least m; other axes cannot shrink
            // the sup-distance below the axis-0 gap
            let mut points = Vec::with_capacity(count);
            let mut head = vec![0i64; d];
            for c in head.iter_mut() {
                *c = rng.gen_range(-5..=5);
            }
            points.push(LatticePoint::new(head.clone()));
            for _ in 1..count {
                head[0] += m as i64 + rng.gen_range(0..=m as i64);
                for c in head.iter_mut().skip(1) {
                    *c = rng.gen_range(-(m as i64)..=m as i64);
                }
                points.push(LatticePoint::new(head.clone()));
            }
            let cfg = SpacedConfiguration::new(points, m)?;
            violations += verify_spaced_divisibility(f, family, &cfg)?
                .violations
                .len();
        }
        by_spacing.push((m, violations));
    }
    let empirical_m = by_spacing
        .iter()
        .rev()
        .take_while(|(_, v)| *v == 0)
        .last()
        .map(|(m, _)| *m);
    Ok(MSearchReport {
        empirical_m,
        violations_by_spacing: by_spacing,
        scope: SCOPE_NOTE.into(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SumsetReport {
    pub b_rm: usize,
    pub b_r: usize,
    pub b_m: usize,
    pub sumset_size: usize,
    /// |B_{R,M}| log 2 / |B_R|; the growth bound is 2^{gamma |B_R| / log 2}.
    pub gamma: f64,
    pub growth_bound: f64,
    /// |B_{R,M}| >= |B_R| / |B_M|.
    pub counting_bound_holds: bool,
}

/// Exact cardinality of { sum_{n in B_R cap M Z^d} x^n e(n) : e(n) in F }
/// in R_d/<f>, with the ball-counting lower bound alongside.
pub fn sumset_growth(
    f: &IntLaurentPoly,
    fam: &[IntLaurentPoly],
    r: usize,
    m: usize,
) -> Result<SumsetReport> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if fam.is_empty() {
        return Err(Error::EmptySupport);
    }
    if m == 0 {
        return Err(Error::OutOfRange("spacing must be at least 1".into()));
    }
    let d = f.dim();
    let lattice = ball_sublattice(d, r as i64, m as i64);
    let b_rm = lattice.len();
    let cases = (fam.len() as u128).pow(b_rm as u32);
    guard(cases)?;

    let mut sums = Vec::with_capacity(cases as usize);
    for flat in 0..cases as usize {
        let sel = decode_selection(flat, fam.len(), b_rm);
        let mut sum = IntLaurentPoly::zero(d);
        for (pt, &i) in lattice.iter().zip(&sel) {
            sum = sum.add(&fam[i].translate(pt))?;
        }
        sums.push(sum);
    }
    let census = coset_census(f, &sums)?;

    let b_r = ball_points(d, r as i64).len();
    let b_m = ball_points(d, m as i64).len();
    let gamma = b_rm as f64 * std::f64::consts::LN_2 / b_r as f64;
    Ok(SumsetReport {
        b_rm,
        b_r,
        b_m,
        sumset_size: census.distinct,
        gamma,
        growth_bound: (b_rm as f64).exp2(),
        counting_bound_holds: b_rm as f64 >= b_r as f64 / b_m as f64,
    })
}

/// Haar integral of the character attached to p on the group dual to
/// R_d/<f>: 1 iff the character is trivial iff p lies in the ideal.
pub fn haar_pairing(f: &IntLaurentPoly, p: &IntLaurentPoly) -> Result<u8> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    Ok(match divides(f, p)? {
        Divisibility::Integral(_) => 1,
        _ => 0,
    })
}

// two-variable polynomials over F_2, monomials as exponent pairs
type F2Poly = BTreeSet<(i64, i64)>;

fn f2_mul(a: &F2Poly, b: &F2Poly) -> F2Poly {
    let mut out = F2Poly::new();
    for (ax, ay) in a {
        for (bx, by) in b {
            let key = (ax + bx, ay + by);
            if !out.remove(&key) {
                out.insert(key);
            }
        }
    }
    out
}

/// Is p divisible by 1 + x + y over F_2? Substitute x = 1 + y: the image in
/// F_2[y] is zero iff p lies in the ideal. (1+y)^a expands by Lucas:
/// binom(a, k) is odd iff k's bits are a subset of a's.
fn f2_divisible_by_one_plus_x_plus_y(p: &F2Poly) -> bool {
    let mut image = BTreeSet::new();
    for (a, b) in p {
        debug_assert!(*a >= 0 && *b >= 0);
        let mut k = 0i64;
        loop {
            if k & a == k {
                let deg = b + k;
                if !image.remove(&deg) {
                    image.insert(deg);
                }
            }
            if k >= *a {
                break;
            }
            k += 1;
        }
    }
    image.is_empty()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrobeniusWitness {
    pub n: u32,
    pub gap: i64,
    /// (1+x+y)^{2^n} = 1 + x^{2^n} + y^{2^n} over F_2.
    pub squaring_identity: bool,
    /// 1 + x^{2^n} + y^{2^n} is divisible by 1+x+y over F_2 ...
    pub sum_divisible_mod2: bool,
    /// ... while none of the three monomial parts is.
    pub parts_divisible_mod2: [bool; 3],
    /// Over Z the divisibility fails outright.
    pub divisible_over_z: bool,
}

/// The Frobenius squaring counterexample in R_2/<2, 1+x+y>: gapped monomial
/// sums divisible by 1+x+y mod 2 whose singleton parts are not, at gaps 2^n.
pub fn frobenius_counterexample(n_max: u32) -> Result<Vec<FrobeniusWitness>> {
    if !(1..=12).contains(&n_max) {
        return Err(Error::OutOfRange("n_max must lie in 1..=12".into()));
    }
    let f = IntLaurentPoly::from_pairs(2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]);
    let mut power: F2Poly = [(0, 0), (1, 0), (0, 1)].into_iter().collect();
    let mut out = Vec::new();
    for n in 1..=n_max {
        power = f2_mul(&power, &power);
        let gap = 1i64 << n;
        let target: F2Poly = [(0, 0), (gap, 0), (0, gap)].into_iter().collect();
        let squaring_identity = power == target;

        let sum_divisible_mod2 = f2_divisible_by_one_plus_x_plus_y(&target);
        let parts_divisible_mod2 = [
            f2_divisible_by_one_plus_x_plus_y(&[(0, 0)].into_iter().collect()),
            f2_divisible_by_one_plus_x_plus_y(&[(gap, 0)].into_iter().collect()),
            f2_divisible_by_one_plus_x_plus_y(&[(0, gap)].into_iter().collect()),
        ];

        let sum_z = IntLaurentPoly::from_pairs(
            2,
            &[(&[0, 0], 1), (&[gap, 0], 1), (&[0, gap], 1)],
        );
        let divisible_over_z = matches!(divides(&f, &sum_z)?, Divisibility::Integral(_));

        out.push(FrobeniusWitness {
            n,
            gap,
            squaring_identity,
            sum_divisible_mod2,
            parts_divisible_mod2,
            divisible_over_z,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use num::bigint::BigInt;

    fn p(src: &str, d: usize) -> IntLaurentPoly {
        parse_poly(src, Some(d)).unwrap()
    }

    fn pt(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    #[test]
    fn configuration_spacing_enforced() {
        assert!(SpacedConfiguration::new(vec![pt(&[0]), pt(&[10])], 9).is_ok());
        assert!(SpacedConfiguration::new(vec![pt(&[0]), pt(&[5])], 9).is_err());
        assert!(SpacedConfiguration::new(vec![], 3).is_err());
        assert!(SpacedConfiguration::new(vec![pt(&[0])], 0).is_err());
    }

    #[test]
    fn independence_mod_x_minus_two() {
        // E1 = {0, 1}, E2 = {0, x}: values {0,1,2,3} mod x-2, all distinct
        let f = p("x - 2", 1);
        let e1 = vec![IntLaurentPoly::zero(1), p("1", 1)];
        let e2 = vec![IntLaurentPoly::zero(1), p("x", 1)];
        let rep = independence_check(&f, &[e1.clone(), e2]).unwrap();
        assert!(rep.independent);
        assert_eq!(rep.distinct_sum_count, 4);
        assert!(rep.witness.is_none());

        // E1 = E2 = {0, 1}: 0+1 collides with 1+0
        let rep = independence_check(&f, &[e1.clone(), e1]).unwrap();
        assert!(!rep.independent);
        assert_eq!(rep.distinct_sum_count, 3);
        let (a, b) = rep.witness.unwrap();
        assert_ne!(a, b);

        // singleton families are trivially independent
        let z = vec![IntLaurentPoly::zero(1)];
        let rep = independence_check(&f, &[z.clone(), z]).unwrap();
        assert!(rep.independent);
        assert_eq!(rep.expected, 1);
    }

    #[test]
    fn blow_up_guard_trips() {
        let f = p("x - 2", 1);
        let big: Vec<IntLaurentPoly> = (0..1100)
            .map(|k| IntLaurentPoly::constant(1, k))
            .collect();
        assert!(matches!(
            independence_check(&f, &[big.clone(), big]),
            Err(Error::BlowupGuard { .. })
        ));
    }

    #[test]
    fn spaced_divisibility_examples() {
        let f = p("3 + x + y", 2);
        let fam = vec![p("1", 2), p("x", 2)];
        let cfg = SpacedConfiguration::new(vec![pt(&[0, 0]), pt(&[10, 0])], 10).unwrap();
        let rep = verify_spaced_divisibility(&f, &fam, &cfg).unwrap();
        assert_eq!(rep.cases, 4);
        assert_eq!(rep.divisible_sums, 0);
        assert!(rep.violations.is_empty());

        // all parts multiples of f: vacuous pass with every sum divisible
        let fam = vec![f.clone(), f.mul(&p("x", 2)).unwrap()];
        let rep = verify_spaced_divisibility(&f, &fam, &cfg).unwrap();
        assert_eq!(rep.divisible_sums, 4);
        assert!(rep.violations.is_empty());

        let fam = vec![IntLaurentPoly::zero(2)];
        let rep = verify_spaced_divisibility(&f, &fam, &cfg).unwrap();
        assert_eq!(rep.divisible_sums, 1);
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn msearch_runs_and_respects_bounds() {
        let f = p("x - 2", 1);
        let fam = vec![p("1", 1), p("x", 1), p("x^2", 1)];
        let rep = empirical_m_search(&f, &fam, 6, 8, 7).unwrap();
        assert_eq!(rep.violations_by_spacing.len(), 6);
        if let Some(m) = rep.empirical_m {
            assert!(m >= 1 && m <= 6);
        }
        assert!(empirical_m_search(&f, &fam, 0, 4, 7).is_err());

        // family inside the ideal: spacing 1 already vacuous
        let fam = vec![f.clone(), f.scale(&BigInt::from(2))];
        let rep = empirical_m_search(&f, &fam, 3, 4, 7).unwrap();
        assert_eq!(rep.empirical_m, Some(1));
    }

    #[test]
    fn sumset_growth_example() {
        // d=1, f = x-2, F = {0, 1}, R = 4, M = 2: B_{R,M} = {-4,-2,0,2,4}
        let f = p("x - 2", 1);
        let fam = vec![IntLaurentPoly::zero(1), p("1", 1)];
        let rep = sumset_growth(&f, &fam, 4, 2).unwrap();
        assert_eq!(rep.b_rm, 5);
        assert_eq!(rep.b_r, 9);
        assert_eq!(rep.b_m, 5);
        assert!(rep.counting_bound_holds);
        assert!(rep.sumset_size <= 32);

        // R < M collapses the sublattice to the origin
        let rep = sumset_growth(&f, &fam, 1, 5).unwrap();
        assert_eq!(rep.b_rm, 1);
        assert_eq!(rep.sumset_size, 2);
    }

    #[test]
    fn haar_pairing_matches_divisibility() {
        let f = p("3 + x + y", 2);
        assert_eq!(haar_pairing(&f, &f).unwrap(), 1);
        assert_eq!(haar_pairing(&f, &p("1", 2)).unwrap(), 0);
        assert_eq!(haar_pairing(&f, &IntLaurentPoly::zero(2)).unwrap(), 1);
    }

    #[test]
    fn frobenius_small_cases() {
        let ws = frobenius_counterexample(3).unwrap();
        assert_eq!(ws.len(), 3);
        for w in &ws {
            assert!(w.squaring_identity, "n = {}", w.n);
            assert!(w.sum_divisible_mod2);
            assert_eq!(w.parts_divisible_mod2, [false, false, false]);
            assert!(!w.divisible_over_z);
        }
        assert_eq!(ws[0].gap, 2);
        assert_eq!(ws[2].gap, 8);
        assert!(frobenius_counterexample(0).is_err());
        assert!(frobenius_counterexample(13).is_err());
    }

    #[test]
    fn f2_substitution_oracle() {
        // (1+x+y) * (x + y^2) expanded mod 2 must substitute to zero
        let a: F2Poly = [(0, 0), (1, 0), (0, 1)].into_iter().collect();
        let b: F2Poly = [(1, 0), (0, 2)].into_iter().collect();
        assert!(f2_divisible_by_one_plus_x_plus_y(&f2_mul(&a, &b)));
        assert!(!f2_divisible_by_one_plus_x_plus_y(&b));
    }

    #[test]
    fn product_factorization_by_enumeration() {
        // spaced two-element families: the pairing of a sum factors into the
        // product of pairings, so the total over all selections factors too
        let f = p("x - 2", 1);
        let e = [IntLaurentPoly::zero(1), p("1", 1)];
        let n1 = pt(&[0]);
        let n2 = pt(&[12]);
        let mut total = 0u32;
        for a in &e {
            for b in &e {
                let sum = a.translate(&n1).add(&b.translate(&n2)).unwrap();
                total += u32::from(haar_pairing(&f, &sum).unwrap());
            }
        }
        let fac1: u32 = e
            .iter()
            .map(|a| u32::from(haar_pairing(&f, &a.translate(&n1)).unwrap()))
            .sum();
        let fac2: u32 = e
            .iter()
            .map(|b| u32::from(haar_pairing(&f, &b.translate(&n2)).unwrap()))
            .sum();
        assert_eq!(total, fac1 * fac2);
    }
}

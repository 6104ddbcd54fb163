//! Permutation testing: the exhaustive full-field oracle and the reduced
//! unit-circle criterion, built to cross-validate each other.

use std::collections::BTreeSet;

use crate::arith::gcd;
use crate::circle::CircleCtx;
use crate::gf2m::{Elem, FieldCtx};
use crate::poly::UniPoly;
use crate::{Error, Result};

/// Largest field degree the image-bitmap scan accepts (2^24 bits = 2 MiB).
pub const BRUTE_FORCE_MAX_DEGREE: u32 = 24;

/// A map on GF(2^n) given by exponent/coefficient pairs: x -> sum c_i x^(e_i)
/// for x != 0 (exponents reduced modulo 2^n - 1, colliding terms merged by
/// coefficient xor), together with an explicit value at 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpPoly {
    group_order: u64,
    terms: Vec<(u64, Elem)>,
    zero_value: Elem,
}

impl ExpPoly {
    pub fn new(f: &FieldCtx, raw_terms: &[(u64, Elem)], zero_value: Elem) -> ExpPoly {
        let m = f.group_order().max(1);
        let mut terms: Vec<(u64, Elem)> = Vec::new();
        for &(e, c) in raw_terms {
            let e = e % m;
            match terms.iter_mut().find(|(e2, _)| *e2 == e) {
                Some((_, c2)) => *c2 = c2.xor(c),
                None => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort();
        ExpPoly { group_order: f.group_order(), terms, zero_value }
    }

    /// Monic terms at the given exponents, mapping 0 to 0.
    pub fn from_exponents(f: &FieldCtx, exps: &[u64]) -> ExpPoly {
        let terms: Vec<(u64, Elem)> = exps.iter().map(|&e| (e, Elem::ONE)).collect();
        ExpPoly::new(f, &terms, Elem::ZERO)
    }

    pub fn terms(&self) -> &[(u64, Elem)] {
        &self.terms
    }

    /// Reduced exponent support, ascending.
    pub fn exponents(&self) -> Vec<u64> {
        self.terms.iter().map(|&(e, _)| e).collect()
    }

    /// Coefficient at a reduced exponent (zero when absent).
    pub fn coeff_at(&self, e: u64) -> Elem {
        let e = e % self.group_order.max(1);
        self.terms
            .iter()
            .find(|&&(e2, _)| e2 == e)
            .map_or(Elem::ZERO, |&(_, c)| c)
    }

    pub fn zero_value(&self) -> Elem {
        self.zero_value
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn eval(&self, f: &FieldCtx, x: Elem) -> Elem {
        debug_assert_eq!(f.group_order(), self.group_order, "context mismatch");
        if x.is_zero() {
            return self.zero_value;
        }
        let mut acc = Elem::ZERO;
        for &(e, c) in &self.terms {
            acc = f.add(acc, f.mul(c, f.pow(x, e)));
        }
        acc
    }
}

/// Ground-truth permutation test: mark every image in a 2^n-bit map and check
/// that all slots are hit. The nonzero part of the field is walked as powers
/// of a generator so each term updates with one multiplication per step.
pub fn is_permutation_bruteforce(f: &FieldCtx, p: &ExpPoly) -> Result<bool> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    is_permutation_bruteforce_with_workers(f, p, workers)
}

/// As [`is_permutation_bruteforce`], with an explicit worker count. The input
/// range is split into per-worker chunks with private bitmaps merged by OR;
/// the result does not depend on the worker count.
pub fn is_permutation_bruteforce_with_workers(
    f: &FieldCtx,
    p: &ExpPoly,
    workers: usize,
) -> Result<bool> {
    if f.degree() > BRUTE_FORCE_MAX_DEGREE {
        return Err(Error::FieldTooLarge(f.degree()));
    }
    assert_eq!(f.group_order(), p.group_order(), "context mismatch");
    let ord = f.group_order();
    let words = (f.size() as usize).div_ceil(64);
    let workers = workers.clamp(1, 64).min(ord.max(1) as usize);
    let chunk = ord.div_ceil(workers as u64).max(1);
    let g = f.generator();

    let mut maps: Vec<Option<Vec<u64>>> = Vec::new();
    std::thread::scope(|s| {
        let mut handles = Vec::new();
        for w in 0..workers as u64 {
            let start = w * chunk;
            let end = ((w + 1) * chunk).min(ord);
            handles.push(s.spawn(move || scan_range(f, p, g, start, end, words)));
        }
        for h in handles {
            maps.push(h.join().expect("scan worker panicked"));
        }
    });

    let mut merged = vec![0u64; words];
    for m in maps {
        // a collision inside one worker's range already settles the answer
        let Some(m) = m else { return Ok(false) };
        for (dst, src) in merged.iter_mut().zip(m) {
            *dst |= src;
        }
    }
    let zero_img = p.zero_value().bits() as usize;
    merged[zero_img / 64] |= 1u64 << (zero_img % 64);
    let marked: u64 = merged.iter().map(|w| w.count_ones() as u64).sum();
    Ok(marked == f.size())
}

/// Mark images of g^k for k in [start, end); `None` on an in-range collision.
fn scan_range(
    f: &FieldCtx,
    p: &ExpPoly,
    g: Elem,
    start: u64,
    end: u64,
    words: usize,
) -> Option<Vec<u64>> {
    let mut bitmap = vec![0u64; words];
    // per-term running values c_i * g^(e_i * k), advanced by one mul per step
    let mut values: Vec<Elem> = p
        .terms()
        .iter()
        .map(|&(e, c)| f.mul(c, f.pow(g, mul_mod_u64(e, start, f.group_order().max(1)))))
        .collect();
    let steps: Vec<Elem> = p.terms().iter().map(|&(e, _)| f.pow(g, e)).collect();
    for _ in start..end {
        let mut img = 0u64;
        for v in &values {
            img ^= v.bits();
        }
        let (w, b) = (img as usize / 64, img % 64);
        if bitmap[w] >> b & 1 != 0 {
            return None;
        }
        bitmap[w] |= 1 << b;
        for (v, st) in values.iter_mut().zip(&steps) {
            *v = f.mul(*v, *st);
        }
    }
    Some(bitmap)
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Reduced permutation criterion: X^r h(X^(q-1)) permutes GF(q^2) iff
/// gcd(r, q-1) = 1 and u -> u^r h(u)^(q-1) is a bijection of mu_(q+1).
/// A circle root of h maps to 0, off the circle, and settles it negatively.
pub fn is_pp_via_criterion(circle: &CircleCtx, r: u64, h: &UniPoly) -> bool {
    let q = circle.q();
    if gcd(r, q - 1) != 1 {
        return false;
    }
    let f = circle.field();
    let mut seen = BTreeSet::new();
    for u in circle.enumerate() {
        let hv = h.eval(f, u);
        if hv.is_zero() {
            return false;
        }
        let img = f.mul(f.pow(u, r), f.pow(hv, q - 1));
        debug_assert!(circle.contains(img));
        if !seen.insert(img) {
            return false;
        }
    }
    true
}

/// Multiplicative order of u^r h(u)^(q-1) for u on the circle; `None` when
/// h(u) = 0. Supports the subgroup-collapse converse arguments.
pub fn circle_image_order(
    circle: &CircleCtx,
    r: u64,
    h: &UniPoly,
    u: Elem,
) -> Result<Option<u64>> {
    if !circle.contains(u) {
        return Err(Error::NotOnCircle(u));
    }
    let f = circle.field();
    let hv = h.eval(f, u);
    if hv.is_zero() {
        return Ok(None);
    }
    let img = f.mul(f.pow(u, r), f.pow(hv, circle.q() - 1));
    Ok(Some(f.mult_order(img)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_merge_on_collision() {
        let f = FieldCtx::new(4).unwrap();
        // 7 + 28 + 22 reduce mod 15 to {7, 13, 7}: the doubled term cancels
        let p = ExpPoly::from_exponents(&f, &[7, 28, 22]);
        assert_eq!(p.exponents(), vec![13]);
        // merged form evaluates like the unmerged sum
        for x in f.elements() {
            let direct = if x.is_zero() {
                Elem::ZERO
            } else {
                f.add(f.add(f.pow(x, 7), f.pow(x, 28)), f.pow(x, 22))
            };
            assert_eq!(p.eval(&f, x), direct);
        }
    }

    #[test]
    fn identity_is_a_permutation() {
        for n in [2u32, 4, 8, 12] {
            let f = FieldCtx::new(n).unwrap();
            let id = ExpPoly::from_exponents(&f, &[1]);
            assert!(is_permutation_bruteforce(&f, &id).unwrap());
        }
    }

    #[test]
    fn monomial_permutes_iff_exponent_coprime() {
        let f = FieldCtx::new(8).unwrap();
        for e in 1..=20u64 {
            let p = ExpPoly::from_exponents(&f, &[e]);
            let want = gcd(e, f.group_order()) == 1;
            assert_eq!(is_permutation_bruteforce(&f, &p).unwrap(), want, "x^{e}");
        }
    }

    #[test]
    fn constant_zero_map_is_rejected_fast() {
        let f = FieldCtx::new(6).unwrap();
        let p = ExpPoly::new(&f, &[], Elem::ZERO);
        assert!(!is_permutation_bruteforce(&f, &p).unwrap());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let f = FieldCtx::new(10).unwrap();
        for exps in [vec![1u64], vec![3], vec![5, 2, 9], vec![11, 321, 135]] {
            let p = ExpPoly::from_exponents(&f, &exps);
            let baseline = is_permutation_bruteforce_with_workers(&f, &p, 1).unwrap();
            for w in [2usize, 3, 5, 8] {
                assert_eq!(
                    is_permutation_bruteforce_with_workers(&f, &p, w).unwrap(),
                    baseline,
                    "exps {exps:?} workers {w}"
                );
            }
        }
    }

    #[test]
    fn rejects_oversized_fields() {
        let f = FieldCtx::new(26).unwrap();
        let p = ExpPoly::from_exponents(&f, &[1]);
        assert!(matches!(is_permutation_bruteforce(&f, &p), Err(Error::FieldTooLarge(26))));
    }

    #[test]
    fn criterion_identity_map() {
        for m in 1..=6u32 {
            let c = CircleCtx::new(m).unwrap();
            assert!(is_pp_via_criterion(&c, 1, &UniPoly::one()));
        }
    }

    #[test]
    fn criterion_known_families() {
        // r=9, h=X^8+X^6+1 at m=3 permutes; r=9, h=X^7+X^3+1 at m=5 does not
        let c3 = CircleCtx::new(3).unwrap();
        assert!(is_pp_via_criterion(&c3, 9, &UniPoly::from_support(&[8, 6, 0])));
        let c5 = CircleCtx::new(5).unwrap();
        assert!(!is_pp_via_criterion(&c5, 9, &UniPoly::from_support(&[7, 3, 0])));
    }

    #[test]
    fn criterion_fails_on_gcd_obstruction() {
        // gcd(r, q-1) != 1 must reject regardless of h
        let c = CircleCtx::new(4).unwrap();
        assert!(!is_pp_via_criterion(&c, 3, &UniPoly::one()));
    }

    #[test]
    fn image_order_at_one() {
        let c = CircleCtx::new(3).unwrap();
        let h = UniPoly::from_support(&[10, 4, 0]);
        // h(1) = 1, so the image of u = 1 is 1
        assert_eq!(circle_image_order(&c, 11, &h, Elem::ONE).unwrap(), Some(1));
        let g = c.field().generator();
        assert!(circle_image_order(&c, 11, &h, g).is_err());
    }

    #[test]
    fn image_order_none_at_h_root() {
        // h = X + 1 vanishes at u = 1, which lies on every circle
        let c = CircleCtx::new(2).unwrap();
        let h = UniPoly::from_support(&[1, 0]);
        assert_eq!(circle_image_order(&c, 1, &h, Elem::ONE).unwrap(), None);
        assert!(!is_pp_via_criterion(&c, 1, &h));
    }

    #[test]
    fn composing_with_coprime_power_preserves_circle_bijection() {
        let c = CircleCtx::new(3).unwrap();
        let f = c.field();
        let q1 = c.circle_order();
        // u -> u^k is a circle bijection iff gcd(k, q+1) = 1
        for k in 1..=10u64 {
            let mut imgs: Vec<Elem> = c.enumerate().iter().map(|&u| f.pow(u, k)).collect();
            imgs.sort();
            imgs.dedup();
            assert_eq!(imgs.len() as u64 == q1, gcd(k, q1) == 1, "k={k}");
        }
    }
}

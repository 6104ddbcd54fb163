//! Univariate and sparse bivariate polynomial arithmetic over a [`FieldCtx`]:
//! evaluation, products, gcds, root finding, and points at infinity.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::SplitMix64;
use crate::gf2m::{Elem, FieldCtx};
use crate::{Error, Result};

/// Fields with at most 2^22 elements get exhaustive root scans; larger ones
/// go through gcd-with-(X^(2^n) - X) and trace splitting.
const EXHAUSTIVE_ROOT_SCAN_MAX_DEGREE: u32 = 22;

/// Degree cap per variable for bivariate polynomials.
const BIPOLY_MAX_DEGREE: u32 = 64;

/// Dense univariate polynomial, coefficients indexed by degree.
/// The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> UniPoly {
        UniPoly { coeffs: vec![Elem::ONE] }
    }

    pub fn from_coeffs(coeffs: Vec<Elem>) -> UniPoly {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    /// Polynomial with coefficient 1 at each listed exponent (repeats cancel).
    pub fn from_support(exps: &[u64]) -> UniPoly {
        let mut coeffs = Vec::new();
        for &e in exps {
            let e = e as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, Elem::ZERO);
            }
            coeffs[e] = if coeffs[e].is_zero() { Elem::ONE } else { Elem::ZERO };
        }
        UniPoly::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn eval(&self, f: &FieldCtx, x: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, f: &FieldCtx, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![Elem::ZERO; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = f.add(self.coeff(i), other.coeff(i));
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn mul(&self, f: &FieldCtx, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// In characteristic 2 squaring just spreads coefficients: (sum c_i X^i)^2
    /// = sum c_i^2 X^(2i).
    pub fn sqr(&self, f: &FieldCtx) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Elem::ZERO; 2 * self.coeffs.len() - 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = f.sqr(c);
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, f: &FieldCtx, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead_inv = f.inv(divisor.coeff(dd));
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1;
            let c = f.mul(rem[k], lead_inv);
            if !c.is_zero() {
                quot[k - dd] = c;
                for (i, &dc) in divisor.coeffs.iter().enumerate() {
                    rem[k - dd + i] = f.add(rem[k - dd + i], f.mul(c, dc));
                }
            }
            rem.pop();
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    pub fn rem(&self, f: &FieldCtx, divisor: &UniPoly) -> UniPoly {
        self.div_rem(f, divisor).1
    }

    /// Monic gcd.
    pub fn gcd(&self, f: &FieldCtx, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.make_monic(f);
        a
    }

    pub fn make_monic(&mut self, f: &FieldCtx) {
        if let Some(d) = self.degree() {
            let inv = f.inv(self.coeffs[d]);
            if inv != Elem::ONE {
                for c in &mut self.coeffs {
                    *c = f.mul(*c, inv);
                }
            }
        }
    }

    fn sqr_mod(&self, f: &FieldCtx, modulus: &UniPoly) -> UniPoly {
        self.sqr(f).rem(f, modulus)
    }

    /// X^(2^k) mod `modulus`, by k squarings.
    pub fn x_pow_frobenius_mod(f: &FieldCtx, k: u32, modulus: &UniPoly) -> UniPoly {
        let x = UniPoly::from_coeffs(vec![Elem::ZERO, Elem::ONE]);
        let mut t = x.rem(f, modulus);
        for _ in 0..k {
            t = t.sqr_mod(f, modulus);
        }
        t
    }

    /// Number of distinct roots in the field: deg gcd(X^(2^n) - X, p).
    pub fn count_distinct_roots(&self, f: &FieldCtx) -> u64 {
        assert!(!self.is_zero(), "root count of the zero polynomial");
        if self.degree() == Some(0) {
            return 0;
        }
        let frob = Self::x_pow_frobenius_mod(f, f.degree(), self);
        let x = UniPoly::from_coeffs(vec![Elem::ZERO, Elem::ONE]).rem(f, self);
        let g = self.gcd(f, &frob.add(f, &x));
        g.degree().unwrap_or(0) as u64
    }

    /// All roots in the field, ascending by bit pattern. Exhaustive scan for
    /// fields up to 2^22 elements, gcd-then-split beyond that.
    pub fn roots_in_field(&self, f: &FieldCtx) -> Result<Vec<Elem>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if f.degree() <= EXHAUSTIVE_ROOT_SCAN_MAX_DEGREE {
            Ok(f.elements().filter(|&x| self.eval(f, x).is_zero()).collect())
        } else {
            Ok(self.roots_by_splitting(f))
        }
    }

    /// Members of `set` where the polynomial vanishes (input order).
    pub fn roots_in_set(&self, f: &FieldCtx, set: &[Elem]) -> Vec<Elem> {
        set.iter().copied().filter(|&x| self.eval(f, x).is_zero()).collect()
    }

    pub(crate) fn roots_by_splitting(&self, f: &FieldCtx) -> Vec<Elem> {
        // isolate the distinct-root part, then split it with trace polynomials
        let frob = Self::x_pow_frobenius_mod(f, f.degree(), self);
        let x = UniPoly::from_coeffs(vec![Elem::ZERO, Elem::ONE]).rem(f, self);
        let g = self.gcd(f, &frob.add(f, &x));
        let mut rng = SplitMix64(0x726f_6f74_7370_6c69);
        let mut out = Vec::new();
        let mut stack = vec![g];
        while let Some(g) = stack.pop() {
            match g.degree() {
                None | Some(0) => {}
                Some(1) => {
                    // monic: root is the constant term
                    out.push(g.coeff(0));
                }
                Some(_) => {
                    // gcd with the trace of a random multiple of X splits the
                    // product of linear factors with probability ~1/2
                    let c = f.elem(rng.next_u64() & (f.size() - 1));
                    if c.is_zero() {
                        stack.push(g);
                        continue;
                    }
                    let cx = UniPoly::from_coeffs(vec![Elem::ZERO, c]).rem(f, &g);
                    let mut t = cx.clone();
                    let mut acc = cx;
                    for _ in 1..f.degree() {
                        t = t.sqr_mod(f, &g);
                        acc = acc.add(f, &t);
                    }
                    let h = g.gcd(f, &acc);
                    let dh = h.degree().unwrap_or(0);
                    if dh == 0 || dh == g.degree().unwrap() {
                        stack.push(g);
                        continue;
                    }
                    let (q, r) = g.div_rem(f, &h);
                    debug_assert!(r.is_zero());
                    stack.push(h);
                    stack.push(q);
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c.bits()) {
                (0, b) => write!(f, "{b:#x}")?,
                (1, 1) => write!(f, "X")?,
                (1, b) => write!(f, "{b:#x}*X")?,
                (_, 1) => write!(f, "X^{i}")?,
                (_, b) => write!(f, "{b:#x}*X^{i}")?,
            }
        }
        Ok(())
    }
}

/// A projective point, normalized so the first nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProjPoint {
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.x, self.y, self.z)
    }
}

/// Sparse bivariate polynomial: map from (deg_X, deg_Y) to a nonzero
/// coefficient. Degree in each variable is capped at 64.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Elem>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly::default()
    }

    pub fn one() -> BiPoly {
        let mut p = BiPoly::zero();
        p.toggle_term(0, 0, Elem::ONE);
        p
    }

    /// Polynomial with coefficient 1 at each listed (deg_X, deg_Y) monomial.
    pub fn from_support<I: IntoIterator<Item = (u32, u32)>>(support: I) -> BiPoly {
        let mut p = BiPoly::zero();
        for (i, j) in support {
            p.toggle_term(i, j, Elem::ONE);
        }
        p
    }

    /// Add `c * X^i Y^j` (xor on collision; zero-coefficient entries are
    /// never stored).
    pub fn toggle_term(&mut self, i: u32, j: u32, c: Elem) {
        assert!(
            i <= BIPOLY_MAX_DEGREE && j <= BIPOLY_MAX_DEGREE,
            "bivariate degree ({i}, {j}) exceeds the cap"
        );
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert(Elem::ZERO);
        *slot = slot.xor(c);
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Elem)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Elem {
        self.terms.get(&(i, j)).copied().unwrap_or(Elem::ZERO)
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for ((i, j), c) in other.terms() {
            out.toggle_term(i, j, c);
        }
        out
    }

    pub fn mul(&self, f: &FieldCtx, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for ((i1, j1), c1) in self.terms() {
            for ((i2, j2), c2) in other.terms() {
                out.toggle_term(i1 + i2, j1 + j2, f.mul(c1, c2));
            }
        }
        out
    }

    pub fn eval(&self, f: &FieldCtx, x: Elem, y: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        for ((i, j), c) in self.terms() {
            acc = f.add(acc, f.mul(c, f.mul(f.pow(x, i as u64), f.pow(y, j as u64))));
        }
        acc
    }

    /// Substitute a concrete Y value, leaving a univariate polynomial in X.
    pub fn specialize_y(&self, f: &FieldCtx, y: Elem) -> UniPoly {
        let mut coeffs = vec![Elem::ZERO; self.degree_x() as usize + 1];
        for ((i, j), c) in self.terms() {
            let v = f.mul(c, f.pow(y, j as u64));
            coeffs[i as usize] = f.add(coeffs[i as usize], v);
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// The univariate polynomial p(T, T), used for diagonal checks.
    pub fn substitute_diagonal(&self, f: &FieldCtx) -> UniPoly {
        let mut coeffs = vec![Elem::ZERO; (self.degree_x() + self.degree_y()) as usize + 1];
        for ((i, j), c) in self.terms() {
            let d = (i + j) as usize;
            coeffs[d] = f.add(coeffs[d], c);
        }
        UniPoly::from_coeffs(coeffs)
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms().all(|((i, j), c)| self.coeff(j, i) == c)
    }

    /// Projective solutions of the homogenized polynomial with Z = 0,
    /// normalized to first-nonzero-coordinate 1. The point (0:1:0) sorts
    /// first, then (1:y:0) ascending in y.
    pub fn infinity_points(&self, f: &FieldCtx) -> Result<Vec<ProjPoint>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let d = self.total_degree();
        // leading form: sum over i+j = d of c_ij X^i Y^j; at infinity the
        // curve is this form's zero set in (X : Y)
        let mut out = Vec::new();
        if self.coeff(0, d).is_zero() {
            out.push(ProjPoint { x: Elem::ZERO, y: Elem::ONE, z: Elem::ZERO });
        }
        let lead = UniPoly::from_coeffs(
            (0..=d).map(|j| self.coeff(d - j, j)).collect::<Vec<_>>(),
        );
        if lead.is_zero() {
            // degenerate: every (1 : y : 0) lies on the curve
            for y in f.elements() {
                out.push(ProjPoint { x: Elem::ONE, y, z: Elem::ZERO });
            }
            return Ok(out);
        }
        for y in lead.roots_in_field(f)? {
            out.push(ProjPoint { x: Elem::ONE, y, z: Elem::ZERO });
        }
        Ok(out)
    }
}

/// Fully expanded product of bivariate factors; the empty product is 1.
pub fn expand_product(f: &FieldCtx, factors: &[BiPoly]) -> BiPoly {
    let mut acc = BiPoly::one();
    for p in factors {
        acc = acc.mul(f, p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::SplitMix64;

    fn gf(n: u32) -> FieldCtx {
        FieldCtx::new(n).unwrap()
    }

    #[test]
    fn unipoly_eval_and_arith() {
        let f = gf(4);
        // p = X^2 + X
        let p = UniPoly::from_support(&[2, 1]);
        assert_eq!(p.eval(&f, f.zero()), f.zero());
        assert_eq!(p.eval(&f, f.one()), f.zero());
        let x = f.elem(2);
        assert_eq!(p.eval(&f, x), f.add(f.sqr(x), x));
        assert!(UniPoly::from_support(&[3, 3]).is_zero());
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = gf(6);
        let mut rng = SplitMix64(3);
        for _ in 0..200 {
            let a = UniPoly::from_coeffs(
                (0..8).map(|_| f.elem(rng.next_u64() & 63)).collect::<Vec<_>>(),
            );
            let b = UniPoly::from_coeffs(
                (0..4).map(|_| f.elem(rng.next_u64() & 63)).collect::<Vec<_>>(),
            );
            if b.is_zero() {
                continue;
            }
            let (q, r) = a.div_rem(&f, &b);
            assert!(r.degree().unwrap_or(0) < b.degree().unwrap() || r.is_zero());
            assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        }
    }

    #[test]
    fn roots_of_x2_plus_x() {
        let f = gf(8);
        let p = UniPoly::from_support(&[2, 1]);
        assert_eq!(p.roots_in_field(&f).unwrap(), vec![f.zero(), f.one()]);
    }

    #[test]
    fn lemma_root_polys() {
        // X^10+X^6+X^5+X^3+X^2+X+1 splits completely in GF(2^10)
        let f = gf(10);
        let p = UniPoly::from_support(&[10, 6, 5, 3, 2, 1, 0]);
        let roots = p.roots_in_field(&f).unwrap();
        assert_eq!(roots.len(), 10);
        for &r in &roots {
            assert!(p.eval(&f, r).is_zero());
        }
        // X^7+X^3+X^2+X+1 is irreducible of degree 7: no roots in GF(2^5)
        let f5 = gf(5);
        let p7 = UniPoly::from_support(&[7, 3, 2, 1, 0]);
        assert!(p7.roots_in_field(&f5).unwrap().is_empty());
    }

    #[test]
    fn split_path_agrees_with_scan() {
        let f = gf(12);
        let mut rng = SplitMix64(99);
        for _ in 0..30 {
            let p = UniPoly::from_coeffs(
                (0..7).map(|_| f.elem(rng.next_u64() & (f.size() - 1))).collect::<Vec<_>>(),
            );
            if p.is_zero() {
                continue;
            }
            let scan = p.roots_in_field(&f).unwrap();
            let split = p.roots_by_splitting(&f);
            assert_eq!(scan, split);
            assert_eq!(p.count_distinct_roots(&f), scan.len() as u64);
        }
    }

    #[test]
    fn root_count_bounded_by_degree() {
        let f = gf(9);
        let mut rng = SplitMix64(5);
        for _ in 0..50 {
            let p = UniPoly::from_coeffs(
                (0..6).map(|_| f.elem(rng.next_u64() & (f.size() - 1))).collect::<Vec<_>>(),
            );
            if p.is_zero() {
                continue;
            }
            let roots = p.roots_in_field(&f).unwrap();
            assert!(roots.len() <= p.degree().unwrap());
        }
    }

    #[test]
    fn roots_in_set_filters() {
        let f = gf(6);
        let p = UniPoly::from_support(&[1]); // p(X) = X
        assert!(p.roots_in_set(&f, &[]).is_empty());
        let set: Vec<Elem> = f.elements().take(5).collect();
        assert_eq!(p.roots_in_set(&f, &set), vec![f.zero()]);
    }

    #[test]
    fn bipoly_products() {
        let f = gf(4);
        // empty product = 1
        assert_eq!(expand_product(&f, &[]), BiPoly::one());
        // (X+Y)^2 = X^2 + Y^2 in characteristic 2
        let xy = BiPoly::from_support([(1, 0), (0, 1)]);
        let sq = expand_product(&f, &[xy.clone(), xy]);
        assert_eq!(sq, BiPoly::from_support([(2, 0), (0, 2)]));
    }

    #[test]
    fn product_invariant_under_permutation_and_eval() {
        let f = gf(6);
        let mut rng = SplitMix64(17);
        let rand_poly = |rng: &mut SplitMix64| {
            let mut p = BiPoly::zero();
            for _ in 0..4 {
                p.toggle_term(
                    (rng.next_u64() % 4) as u32,
                    (rng.next_u64() % 4) as u32,
                    f.elem(rng.next_u64() & 63),
                );
            }
            p
        };
        for _ in 0..20 {
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            let c = rand_poly(&mut rng);
            let p1 = expand_product(&f, &[a.clone(), b.clone(), c.clone()]);
            let p2 = expand_product(&f, &[c.clone(), a.clone(), b.clone()]);
            assert_eq!(p1, p2);
            for _ in 0..10 {
                let x = f.elem(rng.next_u64() & 63);
                let y = f.elem(rng.next_u64() & 63);
                let direct = f.mul(f.mul(a.eval(&f, x, y), b.eval(&f, x, y)), c.eval(&f, x, y));
                assert_eq!(p1.eval(&f, x, y), direct);
            }
        }
    }

    #[test]
    fn infinity_points_examples() {
        let f = gf(2);
        // X + Y: single point (1:1:0)
        let p = BiPoly::from_support([(1, 0), (0, 1)]);
        let pts = p.infinity_points(&f).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0], ProjPoint { x: Elem::ONE, y: Elem::ONE, z: Elem::ZERO });
        // X^2 + XY + Y^2 over GF(4): two points, from the roots of 1 + y + y^2
        let q = BiPoly::from_support([(2, 0), (1, 1), (0, 2)]);
        let pts = q.infinity_points(&f).unwrap();
        assert_eq!(pts.len(), 2);
        // oracle: evaluate the leading form over all five points at infinity
        let mut oracle = 0;
        for y in f.elements() {
            if f.add(f.add(Elem::ONE, y), f.sqr(y)).is_zero() {
                oracle += 1;
            }
        }
        // plus (0:1:0): coeff of Y^2 is 1, not on the curve
        assert_eq!(pts.len(), oracle);
    }

    #[test]
    fn specialize_and_diagonal() {
        let f = gf(5);
        let p = BiPoly::from_support([(2, 1), (1, 2), (0, 0)]);
        let y = f.elem(3);
        let u = p.specialize_y(&f, y);
        for x in f.elements() {
            assert_eq!(u.eval(&f, x), p.eval(&f, x, y));
        }
        // symmetric polynomial with even multiplicities vanishes on diagonal
        let d = BiPoly::from_support([(2, 1), (1, 2)]).substitute_diagonal(&f);
        assert!(d.is_zero());
        assert!(p.is_symmetric());
    }
}

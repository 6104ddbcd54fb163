//! Binary extension field arithmetic GF(2^n), 1 <= n <= 40, in polynomial basis.
//!
//! A [`FieldCtx`] owns the modulus and performs every operation; elements are
//! bit-packed coordinate vectors ([`Elem`]) and only meaningful relative to
//! their context. Contexts are immutable after construction and safe to share
//! across threads.

use std::fmt;
use std::sync::OnceLock;

use crate::arith::{factorize, SplitMix64};
use crate::{Error, Result};

/// Highest supported extension degree. One 64-bit word holds any element and
/// any (n+1)-bit modulus up to this degree.
pub const MAX_DEGREE: u32 = 40;

/// Environment variable that overrides the built-in modulus table path.
pub const MODULUS_TABLE_ENV: &str = "PTLAB_MODULUS_TABLE";

const BUILTIN_TABLE: &str = include_str!("../data/moduli.txt");

/// A field element: bit i is the coordinate of X^i in the polynomial basis.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Coefficient-wise sum. Addition in GF(2^n) does not depend on the
    /// modulus, so this is safe without a context; reserved for polynomial
    /// bookkeeping where no context is at hand.
    pub(crate) fn xor(self, other: Elem) -> Elem {
        Elem(self.0 ^ other.0)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem(0x{:x})", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl serde::Serialize for Elem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The field GF(2^n) defined by an irreducible degree-n modulus over GF(2).
#[derive(Debug, Clone)]
pub struct FieldCtx {
    n: u32,
    modulus: u64,
    generator: OnceLock<Elem>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.modulus == other.modulus
    }
}
impl Eq for FieldCtx {}

impl FieldCtx {
    /// Field with the table modulus for degree `n`: the lexicographically
    /// smallest irreducible polynomial of that degree (bit strings compared
    /// from the X^n coefficient downwards, which for fixed degree is plain
    /// integer order).
    pub fn new(n: u32) -> Result<FieldCtx> {
        let table = active_modulus_table()?;
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange(n));
        }
        FieldCtx::with_modulus(n, table[(n - 1) as usize])
    }

    /// Field with an explicit modulus; rejects non-irreducible input.
    pub fn with_modulus(n: u32, modulus: u64) -> Result<FieldCtx> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange(n));
        }
        if poly2_degree(modulus) != n as i64 || !is_irreducible_poly2(modulus) {
            return Err(Error::NotIrreducible { n, modulus });
        }
        Ok(FieldCtx { n, modulus, generator: OnceLock::new() })
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of field elements, 2^n.
    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    /// Order of the multiplicative group, 2^n - 1.
    pub fn group_order(&self) -> u64 {
        self.size() - 1
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.size()
    }

    /// Wrap raw coordinates; panics when the bit pattern does not fit the field.
    pub fn elem(&self, bits: u64) -> Elem {
        assert!(bits < self.size(), "bit pattern 0x{bits:x} outside GF(2^{})", self.n);
        Elem(bits)
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// All field elements in ascending bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size()).map(Elem)
    }

    fn check(&self, a: Elem) {
        assert!(self.contains(a), "element 0x{:x} rejected: not in GF(2^{})", a.0, self.n);
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.check(a);
        self.check(b);
        Elem(a.0 ^ b.0)
    }

    /// Carryless product reduced modulo the field polynomial.
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.check(a);
        self.check(b);
        let mut a = a.0;
        let mut b = b.0;
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if (a >> self.n) & 1 != 0 {
                a ^= self.modulus;
            }
        }
        Elem(acc)
    }

    pub fn sqr(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// a^e with the exponent taken modulo 2^n - 1 for nonzero a.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        self.check(a);
        if a.is_zero() {
            return if e == 0 { Elem::ONE } else { Elem::ZERO };
        }
        let mut e = if self.group_order() > 0 { e % self.group_order() } else { 0 };
        if self.group_order() == 0 {
            e = 0;
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.sqr(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "zero has no inverse");
        if self.group_order() == 0 {
            return a; // GF(2): 1^-1 = 1
        }
        self.pow(a, self.group_order() - 1)
    }

    /// a^(2^k) by iterated squaring. Since a^(2^n) = a, only k mod n squarings
    /// are performed.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        self.check(a);
        let mut v = a;
        for _ in 0..k % self.n {
            v = self.sqr(v);
        }
        v
    }

    /// Relative trace sum_{i=0}^{top/sub - 1} a^(2^(sub*i mod n)).
    ///
    /// Frobenius exponents are reduced modulo n, so traces into towers larger
    /// than the context (top > n) are evaluated without leaving GF(2^n). The
    /// argument must satisfy a^(2^top) = a, i.e. lie in the compatible subfield.
    pub fn trace_rel(&self, a: Elem, sub: u32, top: u32) -> Result<Elem> {
        self.check(a);
        if sub == 0 || top % sub != 0 {
            return Err(Error::NonDivisibleDegrees { sub, top });
        }
        assert!(
            self.frobenius(a, top % self.n) == a,
            "trace argument 0x{:x} is not fixed by 2^{top} powering",
            a.0
        );
        let mut acc = Elem::ZERO;
        for i in 0..top / sub {
            let k = (sub as u64 * i as u64 % self.n as u64) as u32;
            acc = self.add(acc, self.frobenius(a, k));
        }
        Ok(acc)
    }

    /// Least k >= 1 with a^k = 1; factors the group order and strips primes.
    pub fn mult_order(&self, a: Elem) -> Result<u64> {
        self.check(a);
        if a.is_zero() {
            return Err(Error::ZeroHasNoOrder);
        }
        let mut t = self.group_order().max(1);
        for (p, e) in factorize(self.group_order().max(1)) {
            for _ in 0..e {
                if t % p == 0 && self.pow(a, t / p) == Elem::ONE {
                    t /= p;
                }
            }
        }
        Ok(t)
    }

    /// Whether a lies in the degree-k subfield, i.e. a^(2^k) = a. k must divide n.
    pub fn is_in_subfield(&self, a: Elem, k: u32) -> Result<bool> {
        self.check(a);
        if k == 0 || self.n % k != 0 {
            return Err(Error::NonDivisibleDegrees { sub: k, top: self.n });
        }
        Ok(self.frobenius(a, k) == a)
    }

    /// An element of full multiplicative order 2^n - 1, found by seeded random
    /// sampling with an order check and cached for the context's lifetime.
    pub fn generator(&self) -> Elem {
        *self.generator.get_or_init(|| {
            let ord = self.group_order();
            if ord <= 1 {
                return Elem::ONE;
            }
            let primes: Vec<u64> = factorize(ord).into_iter().map(|(p, _)| p).collect();
            let mut rng = SplitMix64(0x7074_6c61_625f_6766 ^ self.modulus);
            loop {
                let c = Elem(rng.next_u64() & (self.size() - 1));
                if c.is_zero() {
                    continue;
                }
                if primes.iter().all(|&p| self.pow(c, ord / p) != Elem::ONE) {
                    return c;
                }
            }
        })
    }
}

fn poly2_degree(p: u64) -> i64 {
    if p == 0 {
        -1
    } else {
        63 - p.leading_zeros() as i64
    }
}

fn poly2_mulmod(a: u64, b: u64, m: u64) -> u64 {
    let n = poly2_degree(m);
    let mut a = a;
    let mut b = b;
    let mut acc = 0u64;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if (a >> n) & 1 != 0 {
            a ^= m;
        }
    }
    acc
}

fn poly2_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly2_degree(m);
    while a != 0 && poly2_degree(a) >= dm {
        a ^= m << (poly2_degree(a) - dm);
    }
    a
}

fn poly2_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = poly2_rem(a, b);
        a = t;
    }
    a
}

/// Irreducibility over GF(2): no factor of degree <= deg/2, checked via
/// gcd(f, X^(2^k) - X), plus the closing X^(2^deg) = X identity.
pub fn is_irreducible_poly2(f: u64) -> bool {
    let n = poly2_degree(f);
    if n < 1 {
        return false;
    }
    let x = poly2_rem(2, f);
    let mut t = x;
    for _ in 1..=(n / 2) as u32 {
        t = poly2_mulmod(t, t, f);
        if poly2_gcd(f, t ^ x) != 1 {
            return false;
        }
    }
    let mut tt = t;
    for _ in (n / 2 + 1)..=n {
        tt = poly2_mulmod(tt, tt, f);
    }
    poly2_rem(tt ^ x, f) == 0
}

/// Parse a modulus table in the text format `n hex_modulus`, one line each,
/// covering every degree 1..=40 exactly once.
pub fn parse_modulus_table(text: &str) -> Result<Vec<u64>> {
    let mut table = vec![0u64; MAX_DEGREE as usize];
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(ns), Some(ms)) = (it.next(), it.next()) else {
            return Err(Error::BadModulusTable(format!("malformed line: {line:?}")));
        };
        let n: u32 = ns
            .parse()
            .map_err(|_| Error::BadModulusTable(format!("bad degree in line: {line:?}")))?;
        let m = u64::from_str_radix(ms, 16)
            .map_err(|_| Error::BadModulusTable(format!("bad modulus in line: {line:?}")))?;
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::BadModulusTable(format!("degree {n} out of range")));
        }
        if poly2_degree(m) != n as i64 || !is_irreducible_poly2(m) {
            return Err(Error::BadModulusTable(format!(
                "0x{m:x} is not an irreducible polynomial of degree {n}"
            )));
        }
        table[(n - 1) as usize] = m;
    }
    if let Some(i) = table.iter().position(|&m| m == 0) {
        return Err(Error::BadModulusTable(format!("degree {} missing", i + 1)));
    }
    Ok(table)
}

/// Render a modulus table in the `n hex_modulus` text format.
pub fn format_modulus_table(table: &[u64]) -> String {
    let mut s = String::new();
    for (i, m) in table.iter().enumerate() {
        s.push_str(&format!("{} {:x}\n", i + 1, m));
    }
    s
}

/// The compiled-in golden table: per degree, the lexicographically smallest
/// irreducible polynomial.
pub fn builtin_modulus_table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| parse_modulus_table(BUILTIN_TABLE).expect("builtin table is valid"))
}

/// The table in effect: the file named by `PTLAB_MODULUS_TABLE` when set,
/// otherwise the built-in one. Resolved once per process.
pub fn active_modulus_table() -> Result<&'static [u64]> {
    static TABLE: OnceLock<std::result::Result<Vec<u64>, Error>> = OnceLock::new();
    TABLE
        .get_or_init(|| match std::env::var(MODULUS_TABLE_ENV) {
            Ok(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    Error::BadModulusTable(format!("cannot read {path}: {e}"))
                })?;
                parse_modulus_table(&text)
            }
            Err(_) => Ok(builtin_modulus_table().to_vec()),
        })
        .as_ref()
        .map(|v| v.as_slice())
        .map_err(|e| e.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent irreducibility oracle: trial division by every polynomial
    /// of degree 1..=deg/2.
    fn irreducible_by_trial_division(f: u64) -> bool {
        let n = poly2_degree(f);
        if n < 1 {
            return false;
        }
        for d in 1..=(n / 2) {
            for g in (1u64 << d)..(1u64 << (d + 1)) {
                if poly2_rem(f, g) == 0 {
                    return false;
                }
            }
        }
        true
    }

    fn smallest_irreducible_by_oracle(n: u32) -> u64 {
        ((1u64 << n)..(1u64 << (n + 1)))
            .find(|&f| irreducible_by_trial_division(f))
            .unwrap()
    }

    #[test]
    fn golden_table_matches_enumeration_oracle() {
        let table = builtin_modulus_table();
        for n in 1..=20u32 {
            assert_eq!(
                table[(n - 1) as usize],
                smallest_irreducible_by_oracle(n),
                "degree {n}"
            );
        }
    }

    #[test]
    fn golden_table_minimal_and_irreducible_all_degrees() {
        let table = builtin_modulus_table();
        for n in 1..=MAX_DEGREE {
            let m = table[(n - 1) as usize];
            assert_eq!(poly2_degree(m), n as i64);
            assert!(is_irreducible_poly2(m), "degree {n}: 0x{m:x}");
            for c in (1u64 << n)..m {
                assert!(!is_irreducible_poly2(c), "degree {n}: 0x{c:x} smaller than 0x{m:x}");
            }
        }
    }

    #[test]
    fn known_small_moduli() {
        // X^2+X+1 is the only irreducible quadratic; X^4+X+1 and X^10+X^3+1
        // were frozen from the enumeration oracle.
        let t = builtin_modulus_table();
        assert_eq!(t[1], 0b111);
        assert_eq!(t[3], 0b10011);
        assert_eq!(t[9], 0x409);
    }

    #[test]
    fn new_field_degree_range() {
        assert!(FieldCtx::new(0).is_err());
        assert!(FieldCtx::new(41).is_err());
        assert!(FieldCtx::new(1).is_ok());
        assert!(FieldCtx::new(40).is_ok());
    }

    #[test]
    fn with_modulus_rejects_reducible() {
        assert!(FieldCtx::with_modulus(4, 0b10101).is_err()); // (X^2+X+1)^2
        assert!(FieldCtx::with_modulus(4, 0b10011).is_ok());
        assert!(FieldCtx::with_modulus(3, 0b10011).is_err()); // degree mismatch
    }

    #[test]
    fn gf4_multiplication_table() {
        let f = FieldCtx::new(2).unwrap();
        let x = f.elem(0b10);
        // X * X = X + 1 mod X^2+X+1
        assert_eq!(f.mul(x, x), f.elem(0b11));
        for a in f.elements() {
            assert_eq!(f.mul(f.one(), a), a);
        }
    }

    #[test]
    fn inverses_exhaustive_small_degrees() {
        // extended-gcd oracle over GF(2)[X]
        fn poly2_egcd(a: u64, b: u64) -> (u64, u64, u64) {
            if b == 0 {
                return (a, 1, 0);
            }
            let q = {
                // quotient of a by b
                let (mut a, mut q) = (a, 0u64);
                let db = poly2_degree(b);
                while a != 0 && poly2_degree(a) >= db {
                    let s = poly2_degree(a) - db;
                    q |= 1 << s;
                    a ^= b << s;
                }
                q
            };
            let r = poly2_rem(a, b);
            let (g, x, y) = poly2_egcd(b, r);
            // a = q*b + r => g = x*b + y*(a - q*b) = y*a + (x - q*y)*b
            (g, y, x ^ poly2_mul_raw(q, y))
        }
        fn poly2_mul_raw(a: u64, mut b: u64) -> u64 {
            let mut a = a as u128;
            let mut r = 0u128;
            while b != 0 {
                if b & 1 != 0 {
                    r ^= a;
                }
                a <<= 1;
                b >>= 1;
            }
            // callers keep degrees small enough to fit
            r as u64
        }

        for n in 1..=12u32 {
            let f = FieldCtx::new(n).unwrap();
            for a in f.elements().skip(1) {
                let inv = f.inv(a);
                assert_eq!(f.mul(a, inv), f.one(), "n={n} a={a}");
                // oracle route
                let (g, x, _) = poly2_egcd(a.bits(), f.modulus());
                assert_eq!(g, 1);
                assert_eq!(poly2_rem(x, f.modulus()), inv.bits(), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn field_axioms_random_samples() {
        let mut rng = SplitMix64(42);
        for n in [3u32, 7, 13, 24, 33, 40] {
            let f = FieldCtx::new(n).unwrap();
            let mask = f.size() - 1;
            for _ in 0..200 {
                let a = f.elem(rng.next_u64() & mask);
                let b = f.elem(rng.next_u64() & mask);
                let c = f.elem(rng.next_u64() & mask);
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }

    #[test]
    fn frobenius_is_ring_homomorphism() {
        let mut rng = SplitMix64(7);
        for n in [4u32, 10, 21, 40] {
            let f = FieldCtx::new(n).unwrap();
            let mask = f.size() - 1;
            for k in [0u32, 1, 3, n, 2 * n + 1] {
                for _ in 0..100 {
                    let a = f.elem(rng.next_u64() & mask);
                    let b = f.elem(rng.next_u64() & mask);
                    assert_eq!(
                        f.frobenius(f.add(a, b), k),
                        f.add(f.frobenius(a, k), f.frobenius(b, k))
                    );
                    assert_eq!(
                        f.frobenius(f.mul(a, b), k),
                        f.mul(f.frobenius(a, k), f.frobenius(b, k))
                    );
                }
            }
        }
    }

    #[test]
    fn frobenius_identity_and_order() {
        let mut rng = SplitMix64(9);
        for n in [1u32, 2, 5, 10, 17] {
            let f = FieldCtx::new(n).unwrap();
            let mask = f.size() - 1;
            for _ in 0..50 {
                let a = f.elem(rng.next_u64() & mask);
                assert_eq!(f.frobenius(a, 0), a);
                assert_eq!(f.frobenius(a, n), a);
            }
        }
    }

    #[test]
    fn trace_lands_in_subfield_exhaustive() {
        for n in 1..=12u32 {
            let f = FieldCtx::new(n).unwrap();
            for s in (1..=n).filter(|s| n % s == 0) {
                for a in f.elements() {
                    let t = f.trace_rel(a, s, n).unwrap();
                    assert_eq!(f.frobenius(t, s), t, "n={n} s={s} a={a}");
                }
            }
        }
    }

    #[test]
    fn trace_is_linear() {
        let mut rng = SplitMix64(11);
        let f = FieldCtx::new(12).unwrap();
        let mask = f.size() - 1;
        for s in [1u32, 2, 3, 4, 6] {
            for _ in 0..100 {
                let a = f.elem(rng.next_u64() & mask);
                let b = f.elem(rng.next_u64() & mask);
                let lhs = f.trace_rel(f.add(a, b), s, 12).unwrap();
                let rhs = f.add(f.trace_rel(a, s, 12).unwrap(), f.trace_rel(b, s, 12).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn trace_rejects_bad_degrees() {
        let f = FieldCtx::new(6).unwrap();
        assert!(f.trace_rel(f.one(), 4, 6).is_err());
        assert!(f.trace_rel(f.one(), 2, 6).is_ok());
    }

    #[test]
    fn mult_order_divides_group_order() {
        for n in [1u32, 4, 6, 10] {
            let f = FieldCtx::new(n).unwrap();
            for a in f.elements().skip(1) {
                let o = f.mult_order(a).unwrap();
                assert_eq!(f.group_order().max(1) % o, 0);
                assert_eq!(f.pow(a, o), f.one());
                if o > 1 {
                    assert_ne!(f.pow(a, o / largest_prime(o)), f.one());
                }
            }
        }
        fn largest_prime(o: u64) -> u64 {
            factorize(o).last().unwrap().0
        }
    }

    #[test]
    fn mult_order_of_zero_is_error() {
        let f = FieldCtx::new(4).unwrap();
        assert!(f.mult_order(f.zero()).is_err());
        assert_eq!(f.mult_order(f.one()).unwrap(), 1);
    }

    #[test]
    fn subfield_membership() {
        let f = FieldCtx::new(10).unwrap();
        assert!(f.is_in_subfield(f.zero(), 2).unwrap());
        assert!(f.is_in_subfield(f.one(), 1).unwrap());
        assert!(f.is_in_subfield(f.one(), 3).is_err());
        // count of GF(2^2) elements inside GF(2^10)
        let cnt = f.elements().filter(|&a| f.is_in_subfield(a, 2).unwrap()).count();
        assert_eq!(cnt, 4);
    }

    #[test]
    fn generator_has_full_order() {
        for n in [1u32, 2, 6, 10, 16] {
            let f = FieldCtx::new(n).unwrap();
            let g = f.generator();
            assert_eq!(f.mult_order(g).unwrap(), f.group_order().max(1));
        }
    }

    #[test]
    fn table_roundtrip() {
        let t = builtin_modulus_table();
        let text = format_modulus_table(t);
        assert_eq!(parse_modulus_table(&text).unwrap(), t);
        assert!(parse_modulus_table("3 zz").is_err());
        assert!(parse_modulus_table("2 b").is_err()); // wrong degree
    }
}

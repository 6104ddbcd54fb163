//! The trinomial family X^r (X^(a(q-1)) + X^(b(q-1)) + 1) over GF(q^2):
//! instantiation, circle root exclusion, difference polynomials, factorization
//! certificates, trace certificates, and per-degree theorem verdicts.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::arith::gcd;
use crate::gf2m::{Elem, FieldCtx};
use crate::perm::{self, ExpPoly};
use crate::poly::{expand_product, BiPoly, UniPoly};
use crate::{Error, Result};

/// Parameters (r, alpha, beta) with alpha > beta >= 1 and r >= 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct TrinomialFamily {
    r: u64,
    alpha: u64,
    beta: u64,
}

impl TrinomialFamily {
    pub fn new(r: u64, alpha: u64, beta: u64) -> Result<TrinomialFamily> {
        if r < 1 || beta < 1 || alpha <= beta {
            return Err(Error::InvalidFamily { r, alpha, beta });
        }
        Ok(TrinomialFamily { r, alpha, beta })
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    /// Raw exponents {r, r + alpha(q-1), r + beta(q-1)} before reduction.
    pub fn raw_exponents(&self, m: u32) -> [u64; 3] {
        let q1 = (1u64 << m) - 1;
        [self.r, self.r + self.alpha * q1, self.r + self.beta * q1]
    }

    /// h(X) = X^alpha + X^beta + 1.
    pub fn h_poly(&self) -> UniPoly {
        UniPoly::from_support(&[self.alpha, self.beta, 0])
    }

    /// The induced map on GF(2^(2m)); `f` must have degree 2m. Exponents are
    /// reduced modulo q^2 - 1 and collisions merge in characteristic 2.
    pub fn instantiate(&self, f: &FieldCtx, m: u32) -> ExpPoly {
        assert_eq!(f.degree(), 2 * m, "family lives over GF(2^(2m))");
        ExpPoly::from_exponents(f, &self.raw_exponents(m))
    }

    /// Convenience: build GF(2^(2m)) with the table modulus and instantiate.
    pub fn instantiate_at(&self, m: u32) -> Result<(FieldCtx, ExpPoly)> {
        let f = FieldCtx::new(2 * m)?;
        let p = self.instantiate(&f, m);
        Ok((f, p))
    }
}

impl fmt::Display for TrinomialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^{}(X^({}(q-1)) + X^({}(q-1)) + 1)", self.r, self.alpha, self.beta)
    }
}

/// Sufficient conditions under which X^a + X^b + 1 and X^a + X^(a-b) + 1 have
/// no roots on mu_(q+1).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExclusionRule {
    /// gcd(alpha + beta, q + 1) = 1
    AlphaPlusBeta,
    /// gcd(|alpha - 2 beta|, q + 1) = 1
    AlphaMinusTwoBeta,
    /// gcd(2 alpha - beta, q + 1) = 1
    TwoAlphaMinusBeta,
    /// gcd(3, q + 1) = 1
    ThreeCoprimeToCircle,
}

/// Which exclusion rules fire for a family at a given m (possibly several).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootExclusion {
    pub rules: Vec<ExclusionRule>,
}

impl RootExclusion {
    pub fn is_excluded(&self) -> bool {
        !self.rules.is_empty()
    }
}

/// Evaluate the four gcd conditions that rule out circle roots of h and of
/// its reversal. An empty rule set means "inconclusive", not "has roots".
pub fn no_roots_on_circle(fam: &TrinomialFamily, m: u32) -> RootExclusion {
    let q1 = (1u64 << m) + 1;
    let (a, b) = (fam.alpha, fam.beta);
    let mut rules = Vec::new();
    if gcd(a + b, q1) == 1 {
        rules.push(ExclusionRule::AlphaPlusBeta);
    }
    if gcd(a.abs_diff(2 * b), q1) == 1 {
        rules.push(ExclusionRule::AlphaMinusTwoBeta);
    }
    if gcd(2 * a - b, q1) == 1 {
        rules.push(ExclusionRule::TwoAlphaMinusBeta);
    }
    if gcd(3, q1) == 1 {
        rules.push(ExclusionRule::ThreeCoprimeToCircle);
    }
    RootExclusion { rules }
}

/// Cross-multiplied numerator f(X, Y) of G(X) + G(Y), where over the circle
/// G(X) = X^(r-alpha) (X^alpha + X^(alpha-beta) + 1) / h(X). Built over GF(2)
/// (every coefficient is 1), so the result reinterprets in any field. For
/// r < alpha both numerators are shifted by X^(alpha-r) Y^(alpha-r), which
/// does not change the zero set on the punctured torus.
pub fn difference_poly(fam: &TrinomialFamily, m: u32) -> Result<BiPoly> {
    if !no_roots_on_circle(fam, m).is_excluded() {
        return Err(Error::RootExclusionFailed { alpha: fam.alpha, beta: fam.beta, m });
    }
    Ok(difference_support(fam))
}

fn difference_support(fam: &TrinomialFamily) -> BiPoly {
    let (r, a, b) = (fam.r, fam.alpha, fam.beta);
    let s = a.saturating_sub(r);
    let num: [u64; 3] = [r + s - a, r + s - b, r + s];
    let den: [u64; 3] = [s, s + b, s + a];
    let mut out = BiPoly::zero();
    for &i in &num {
        for &j in &den {
            out.toggle_term(i as u32, j as u32, Elem::ONE);
            out.toggle_term(j as u32, i as u32, Elem::ONE);
        }
    }
    out
}

/// The four campaign targets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TheoremId {
    /// (r, alpha, beta) = (11, 10, 4): permutes iff m != 0 (mod 5)
    T1,
    /// (9, 8, 6): permutes iff m odd
    T2,
    /// (7, 7, 5): permutes iff m even and m != 0 (mod 3)
    T3,
    /// (9, 7, 3): never permutes for m > 3
    Nonexist,
}

impl TheoremId {
    pub const ALL: [TheoremId; 4] =
        [TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::Nonexist];

    pub fn family(self) -> TrinomialFamily {
        let (r, alpha, beta) = match self {
            TheoremId::T1 => (11, 10, 4),
            TheoremId::T2 => (9, 8, 6),
            TheoremId::T3 => (7, 7, 5),
            TheoremId::Nonexist => (9, 7, 3),
        };
        TrinomialFamily { r, alpha, beta }
    }

    /// The claimed permutation status at degree m; `None` where the statement
    /// is silent (the nonexistence claim only covers m > 3).
    pub fn predicted(self, m: u32) -> Option<bool> {
        match self {
            TheoremId::T1 => Some(m % 5 != 0),
            TheoremId::T2 => Some(m % 2 == 1),
            TheoremId::T3 => Some(m % 2 == 0 && m % 3 != 0),
            TheoremId::Nonexist => (m > 3).then_some(false),
        }
    }

    pub fn parse(s: &str) -> Option<TheoremId> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Some(TheoremId::T1),
            "t2" => Some(TheoremId::T2),
            "t3" => Some(TheoremId::T3),
            "nonexist" | "ne" => Some(TheoremId::Nonexist),
            _ => None,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoremId::T1 => "t1",
            TheoremId::T2 => "t2",
            TheoremId::T3 => "t3",
            TheoremId::Nonexist => "nonexist",
        };
        f.write_str(s)
    }
}

/// Predicted-vs-observed record for (theorem, m).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    pub m: u32,
    /// `None` for informational records (prediction out of the claimed range).
    pub predicted: Option<bool>,
    pub observed: bool,
    pub agree: bool,
    pub elapsed_ms: u64,
}

/// Compare the theorem's claim with the brute-force oracle over GF(2^(2m)).
pub fn theorem_verdict(theorem: TheoremId, m: u32) -> Result<TheoremVerdict> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    theorem_verdict_with_workers(theorem, m, workers)
}

/// As [`theorem_verdict`] with an explicit scan worker count (the verdict does
/// not depend on it). Verdicts for distinct (theorem, m) are independent and
/// safe to compute concurrently.
pub fn theorem_verdict_with_workers(
    theorem: TheoremId,
    m: u32,
    workers: usize,
) -> Result<TheoremVerdict> {
    let start = Instant::now();
    let (field, p) = theorem.family().instantiate_at(m)?;
    let observed = perm::is_permutation_bruteforce_with_workers(&field, &p, workers)?;
    let predicted = theorem.predicted(m);
    Ok(TheoremVerdict {
        theorem,
        m,
        predicted,
        observed,
        agree: predicted.map_or(true, |p| p == observed),
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Defining polynomial of the certificate constant for each theorem, as a
/// GF(2) support, together with the degree of the field it splits in.
fn certificate_root_poly(theorem: TheoremId) -> Option<(&'static [u64], u32)> {
    match theorem {
        TheoremId::T1 => Some((&[10, 6, 5, 3, 2, 1, 0], 10)),
        TheoremId::T2 => Some((&[4, 3, 0], 4)),
        TheoremId::T3 => Some((&[6, 4, 3, 1, 0], 6)),
        TheoremId::Nonexist => None,
    }
}

fn certificate_factors(theorem: TheoremId, f: &FieldCtx, b: Elem) -> Vec<BiPoly> {
    let x_plus_y = BiPoly::from_support([(1, 0), (0, 1)]);
    let quartic = |a: Elem, c: Elem| {
        let mut p = BiPoly::zero();
        p.toggle_term(2, 2, Elem::ONE);
        p.toggle_term(2, 0, a);
        p.toggle_term(0, 2, a);
        p.toggle_term(1, 1, c);
        p.toggle_term(0, 0, Elem::ONE);
        p
    };
    match theorem {
        TheoremId::T1 => {
            // coefficient exponent pairs cycle through 33 * 2^i
            let pairs = [(33, 528), (66, 33), (132, 66), (264, 132), (528, 264)];
            let mut fs = vec![x_plus_y];
            fs.extend(pairs.iter().map(|&(ea, ec)| quartic(f.pow(b, ea), f.pow(b, ec))));
            fs
        }
        TheoremId::T2 => {
            // pairs (2^(i-1), 2^(i+2)); exponents past the element order wrap
            let mut fs = vec![x_plus_y];
            fs.extend(
                (1..=4u32).map(|i| quartic(f.pow(b, 1 << (i - 1)), f.pow(b, 1 << (i + 2)))),
            );
            fs
        }
        TheoremId::T3 => {
            let b21 = f.pow(b, 21);
            let b42 = f.pow(b, 42);
            let lin = |ix: bool, c: Elem| {
                let mut p = BiPoly::zero();
                p.toggle_term(if ix { 1 } else { 0 }, if ix { 0 } else { 1 }, Elem::ONE);
                p.toggle_term(0, 0, c);
                p
            };
            vec![
                x_plus_y,
                lin(false, b21),
                lin(false, b42),
                lin(true, b21),
                lin(true, b42),
                BiPoly::from_support([(2, 1), (1, 2), (1, 0), (0, 1), (0, 0)]),
                BiPoly::from_support([(2, 2), (2, 1), (1, 2), (1, 0), (0, 1)]),
            ]
        }
        TheoremId::Nonexist => unreachable!("no certificate factors"),
    }
}

/// Outcome of checking one theorem's stated factorization against the
/// difference polynomial, quantified over all roots of the defining
/// polynomial (the constant is only pinned down up to conjugacy).
#[derive(Clone, Debug)]
pub struct FactorizationCertificate {
    pub theorem: TheoremId,
    pub m: u32,
    pub field_degree: u32,
    pub roots_tested: Vec<Elem>,
    pub satisfying_roots: Vec<Elem>,
    pub holds: bool,
}

impl FactorizationCertificate {
    /// Smallest satisfying root by bit pattern, for the report.
    pub fn smallest_root(&self) -> Option<Elem> {
        self.satisfying_roots.first().copied()
    }
}

/// Expand the stated factor product for every candidate root and compare it
/// coefficient-for-coefficient with the difference polynomial.
pub fn factorization_certificate(theorem: TheoremId, m: u32) -> Result<FactorizationCertificate> {
    let Some((root_poly, deg)) = certificate_root_poly(theorem) else {
        return Err(Error::ConjectureFailed(format!(
            "theorem {theorem} has no factorization certificate"
        )));
    };
    let fam = theorem.family();
    let target = difference_poly(&fam, m)?;
    let f = FieldCtx::new(deg)?;
    let roots = UniPoly::from_support(root_poly).roots_in_field(&f)?;
    let satisfying: Vec<Elem> = roots
        .iter()
        .copied()
        .filter(|&b| expand_product(&f, &certificate_factors(theorem, &f, b)) == target)
        .collect();
    Ok(FactorizationCertificate {
        theorem,
        m,
        field_degree: deg,
        holds: !satisfying.is_empty(),
        roots_tested: roots,
        satisfying_roots: satisfying,
    })
}

/// Per-root outcome of the relative-trace identity in GF(2^10).
#[derive(Clone, Copy, Debug)]
pub struct TraceRootReport {
    pub root: Elem,
    pub trace_of_root: Elem,
    pub trace_of_root_33: Elem,
    pub order: u64,
}

#[derive(Clone, Debug)]
pub struct TraceCertificate {
    pub m: u32,
    pub reports: Vec<TraceRootReport>,
    pub all_traces_zero: bool,
}

/// For every root b of X^10+X^6+X^5+X^3+X^2+X+1 in GF(2^10), compute the
/// relative traces of b and b^33 from the 10m-tower down to GF(2^(2m))
/// (Frobenius exponents reduced mod 10) and the multiplicative order of b.
/// Defined for gcd(5, m) = 1.
pub fn trace_certificate(m: u32) -> Result<TraceCertificate> {
    if m == 0 || gcd(5, m as u64) != 1 {
        return Err(Error::TraceCertificateDegree(m));
    }
    let f = FieldCtx::new(10)?;
    let roots = UniPoly::from_support(&[10, 6, 5, 3, 2, 1, 0]).roots_in_field(&f)?;
    let mut reports = Vec::with_capacity(roots.len());
    for b in roots {
        let t1 = f.trace_rel(b, 2 * m, 10 * m)?;
        let t2 = f.trace_rel(f.pow(b, 33), 2 * m, 10 * m)?;
        reports.push(TraceRootReport {
            root: b,
            trace_of_root: t1,
            trace_of_root_33: t2,
            order: f.mult_order(b)?,
        });
    }
    let all_zero = reports
        .iter()
        .all(|r| r.trace_of_root.is_zero() && r.trace_of_root_33.is_zero());
    Ok(TraceCertificate { m, reports, all_traces_zero: all_zero })
}

/// For odd m with 3 not dividing m, an element of order 3(q-1) is a nonzero
/// root of the theorem-3 trinomial, witnessing the converse collision with 0.
pub fn t3_converse_witness(f: &FieldCtx, m: u32) -> Option<Elem> {
    if m % 2 == 0 || m % 3 == 0 {
        return None;
    }
    assert_eq!(f.degree(), 2 * m);
    let q = 1u64 << m;
    let target = 3 * (q - 1);
    debug_assert_eq!(f.group_order() % target, 0);
    Some(f.pow(f.generator(), f.group_order() / target))
}

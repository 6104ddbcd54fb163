//! The unit circle mu_(q+1) = { u in GF(q^2)* : u^(q+1) = 1 } and the rational
//! parametrization phi: GF(q) -> mu_(q+1) \ {1}, defined for odd m.

use crate::gf2m::{Elem, FieldCtx};
use crate::poly::UniPoly;
use crate::{Error, Result};

/// GF(2^(2m)) together with its unit circle of order q + 1, q = 2^m.
#[derive(Debug, Clone)]
pub struct CircleCtx {
    big: FieldCtx,
    m: u32,
    omega: Option<Elem>,
    circle_gen: Elem,
}

impl CircleCtx {
    /// Build GF(2^(2m)) with the table modulus and locate the circle.
    pub fn new(m: u32) -> Result<CircleCtx> {
        let big = FieldCtx::new(2 * m)?;
        CircleCtx::from_field(big, m)
    }

    /// Wrap an existing GF(2^(2m)) context.
    pub fn from_field(big: FieldCtx, m: u32) -> Result<CircleCtx> {
        if big.degree() != 2 * m || m == 0 {
            return Err(Error::DegreeOutOfRange(big.degree()));
        }
        let q = 1u64 << m;
        let g = big.generator();
        let circle_gen = big.pow(g, q - 1);
        // omega: a root of X^2 + X + 1, recorded only when it lies outside
        // GF(q), i.e. for odd m; the smaller root keeps the choice canonical
        let omega = if m % 2 == 1 {
            let p = UniPoly::from_support(&[2, 1, 0]);
            let roots = p.roots_in_field(&big)?;
            debug_assert_eq!(roots.len(), 2);
            roots.first().copied()
        } else {
            None
        };
        Ok(CircleCtx { big, m, omega, circle_gen })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.big
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// q = 2^m.
    pub fn q(&self) -> u64 {
        1u64 << self.m
    }

    /// |mu_(q+1)| = q + 1.
    pub fn circle_order(&self) -> u64 {
        self.q() + 1
    }

    pub fn omega(&self) -> Option<Elem> {
        self.omega
    }

    pub fn contains(&self, u: Elem) -> bool {
        !u.is_zero() && self.big.pow(u, self.circle_order()) == Elem::ONE
    }

    /// All q + 1 circle elements, as g^(k(q-1)) for a full-order generator g.
    pub fn enumerate(&self) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.circle_order() as usize);
        let mut u = Elem::ONE;
        for _ in 0..self.circle_order() {
            out.push(u);
            u = self.big.mul(u, self.circle_gen);
        }
        debug_assert_eq!(u, Elem::ONE);
        out
    }

    /// phi(x) = (x + omega^2) / (x + omega), mapping GF(q) onto mu_(q+1)\{1}.
    pub fn phi(&self, x: Elem) -> Result<Elem> {
        let f = &self.big;
        let omega = self.omega.ok_or(Error::OmegaUnavailable(self.m))?;
        if f.frobenius(x, self.m) != x {
            return Err(Error::NotInSubfield(x));
        }
        let omega2 = f.sqr(omega);
        // x + omega never vanishes: omega is outside GF(q)
        let u = f.mul(f.add(x, omega2), f.inv(f.add(x, omega)));
        debug_assert!(self.contains(u) && u != Elem::ONE);
        Ok(u)
    }

    /// phi_inv(u) = (omega*u + omega^2) / (u + 1), inverse of [`CircleCtx::phi`].
    pub fn phi_inv(&self, u: Elem) -> Result<Elem> {
        let f = &self.big;
        let omega = self.omega.ok_or(Error::OmegaUnavailable(self.m))?;
        if !self.contains(u) {
            return Err(Error::NotOnCircle(u));
        }
        if u == Elem::ONE {
            return Err(Error::PhiInvPole);
        }
        let omega2 = f.sqr(omega);
        let x = f.mul(f.add(f.mul(omega, u), omega2), f.inv(f.add(u, Elem::ONE)));
        debug_assert_eq!(f.frobenius(x, self.m), x);
        Ok(x)
    }
}

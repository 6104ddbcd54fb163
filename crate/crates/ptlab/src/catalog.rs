//! Built-in catalog of known permutation trinomial classes of the shape
//! X^r h(X^(q-1)) over GF(2^(2m)), kept machine-readable for search
//! cross-referencing and equivalence campaigns.

use crate::family::{TheoremId, TrinomialFamily};
use crate::gf2m::FieldCtx;
use crate::perm::ExpPoly;

/// Condition on m under which a catalog row permutes GF(2^(2m)).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MCondition {
    /// m odd
    Odd,
    /// gcd(m, 3) = 1
    CoprimeTo3,
    /// m = 2 (mod 4)
    Mod4Is2,
    /// m = 2 or 4 (mod 6)
    Mod6Is2Or4,
    /// m != 0 (mod 4) and gcd(m, 3) = 1
    NotMod4AndCoprimeTo3,
    /// m even and m != 0 (mod 3)
    EvenNotMod3,
    /// m != 0 (mod 5)
    NotMod5,
}

impl MCondition {
    pub fn holds(self, m: u32) -> bool {
        match self {
            MCondition::Odd => m % 2 == 1,
            MCondition::CoprimeTo3 => m % 3 != 0,
            MCondition::Mod4Is2 => m % 4 == 2,
            MCondition::Mod6Is2Or4 => matches!(m % 6, 2 | 4),
            MCondition::NotMod4AndCoprimeTo3 => m % 4 != 0 && m % 3 != 0,
            MCondition::EvenNotMod3 => m % 2 == 0 && m % 3 != 0,
            MCondition::NotMod5 => m % 5 != 0,
        }
    }
}

/// One known class: X^r h(X^(q-1)) with h(X) = X^e0 + X^e1 + X^e2.
#[derive(Clone, Copy, Debug)]
pub struct CatalogRow {
    /// 1-based index, matching the numbering used across the literature.
    pub index: usize,
    pub r: u64,
    /// Exponents of h, descending; most rows end in 0 (constant term 1).
    pub h_exps: [u64; 3],
    pub condition: MCondition,
    pub source: &'static str,
}

impl CatalogRow {
    /// The induced map on GF(2^(2m)): exponents r + e(q-1).
    pub fn instantiate(&self, f: &FieldCtx, m: u32) -> ExpPoly {
        assert_eq!(f.degree(), 2 * m);
        let q1 = (1u64 << m) - 1;
        let exps: Vec<u64> = self.h_exps.iter().map(|&e| self.r + e * q1).collect();
        ExpPoly::from_exponents(f, &exps)
    }

    /// The (r, alpha, beta) form, when h has a constant term.
    pub fn family(&self) -> Option<TrinomialFamily> {
        let [a, b, c] = self.h_exps;
        (c == 0).then(|| TrinomialFamily::new(self.r, a, b).ok()).flatten()
    }

    pub fn label(&self) -> String {
        format!("f{}", self.index)
    }
}

/// The fifteen known classes predating the three campaign targets.
pub const KNOWN_ROWS: [CatalogRow; 15] = [
    CatalogRow { index: 1, r: 3, h_exps: [3, 1, 0], condition: MCondition::Odd, source: "Zha-Hu-Fan 2017" },
    CatalogRow { index: 2, r: 3, h_exps: [3, 2, 0], condition: MCondition::Odd, source: "Zha-Hu-Fan 2017" },
    CatalogRow { index: 3, r: 2, h_exps: [3, 2, 0], condition: MCondition::CoprimeTo3, source: "Gupta-Sharma 2016" },
    CatalogRow { index: 4, r: 4, h_exps: [3, 1, 0], condition: MCondition::CoprimeTo3, source: "Gupta-Sharma 2016" },
    CatalogRow { index: 5, r: 3, h_exps: [4, 3, 0], condition: MCondition::Odd, source: "Gupta-Sharma 2016" },
    CatalogRow { index: 6, r: 5, h_exps: [4, 1, 0], condition: MCondition::Odd, source: "Gupta-Sharma 2016" },
    CatalogRow { index: 7, r: 5, h_exps: [4, 3, 0], condition: MCondition::Mod4Is2, source: "Zha-Hu-Fan 2017" },
    CatalogRow { index: 8, r: 4, h_exps: [5, 1, 0], condition: MCondition::Mod6Is2Or4, source: "Li-Qu-Chen 2017" },
    CatalogRow { index: 9, r: 5, h_exps: [5, 1, 0], condition: MCondition::Mod4Is2, source: "Li-Qu-Chen 2017" },
    CatalogRow { index: 10, r: 5, h_exps: [5, 2, 1], condition: MCondition::Mod4Is2, source: "Zha-Hu-Fan 2017" },
    CatalogRow { index: 11, r: 5, h_exps: [5, 4, 0], condition: MCondition::Mod4Is2, source: "Zha-Hu-Fan 2017" },
    CatalogRow { index: 12, r: 5, h_exps: [6, 2, 0], condition: MCondition::NotMod4AndCoprimeTo3, source: "Li-Qu-Chen 2017" },
    CatalogRow { index: 13, r: 5, h_exps: [6, 5, 0], condition: MCondition::NotMod4AndCoprimeTo3, source: "Yadav-Gupta-Singh-Yadav 2024" },
    CatalogRow { index: 14, r: 7, h_exps: [6, 1, 0], condition: MCondition::NotMod4AndCoprimeTo3, source: "Yadav-Gupta-Singh-Yadav 2024" },
    CatalogRow { index: 15, r: 7, h_exps: [6, 4, 0], condition: MCondition::NotMod4AndCoprimeTo3, source: "Yadav-Gupta-Singh-Yadav 2024" },
];

/// Pairs of catalog indices related by the reversed-h equivalence (the second
/// member is QM equivalent to the first).
pub const EQUIVALENT_PAIRS: [(usize, usize); 5] = [(1, 2), (3, 4), (5, 6), (7, 10), (9, 11)];

pub fn row(index: usize) -> Option<&'static CatalogRow> {
    KNOWN_ROWS.get(index.checked_sub(1)?)
}

/// The m-condition for the three campaign families.
pub fn new_class_condition(theorem: TheoremId) -> Option<MCondition> {
    match theorem {
        TheoremId::T1 => Some(MCondition::NotMod5),
        TheoremId::T2 => Some(MCondition::Odd),
        TheoremId::T3 => Some(MCondition::EvenNotMod3),
        TheoremId::Nonexist => None,
    }
}

/// Label for a (r, alpha, beta) triple: a catalog row, a campaign family, or
/// `None` for something unlisted.
pub fn identify(fam: &TrinomialFamily) -> Option<String> {
    for t in [TheoremId::T1, TheoremId::T2, TheoremId::T3] {
        if t.family() == *fam {
            return Some(t.to_string());
        }
    }
    KNOWN_ROWS
        .iter()
        .find(|row| row.family().as_ref() == Some(fam))
        .map(|row| row.label())
}

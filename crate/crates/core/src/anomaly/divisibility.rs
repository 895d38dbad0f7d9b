//! 2-adic audits of the divisibility corollaries, conditional on an assumed
//! valuation of the `h_r`.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use super::AnomalyError;
use crate::modforms::solve_coefficients;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corollary {
    C3_6,
    C3_8,
    C4_4,
    C4_5,
    C4_9,
    C4_10,
}

impl Corollary {
    pub const ALL: [Corollary; 6] =
        [Corollary::C3_6, Corollary::C3_8, Corollary::C4_4, Corollary::C4_5, Corollary::C4_9, Corollary::C4_10];

    pub fn name(self) -> &'static str {
        match self {
            Corollary::C3_6 => "3.6",
            Corollary::C3_8 => "3.8",
            Corollary::C4_4 => "4.4",
            Corollary::C4_5 => "4.5",
            Corollary::C4_9 => "4.9",
            Corollary::C4_10 => "4.10",
        }
    }

    /// Claimed power of 2.
    pub fn claimed_exponent(self) -> i64 {
        match self {
            Corollary::C3_6 | Corollary::C4_4 => 4,
            Corollary::C4_9 => 5,
            Corollary::C3_8 | Corollary::C4_5 => 9,
            Corollary::C4_10 => 10,
        }
    }

    /// Whether the statement concerns the q^1 identity (`-2^{l+k+6} Σ r 2^{-6r} h_r`)
    /// rather than the q^0 one (`2^{l+k} Σ 2^{-6r} h_r`).
    fn first_order(self) -> bool {
        matches!(self, Corollary::C3_8 | Corollary::C4_5 | Corollary::C4_10)
    }
}

impl fmt::Display for Corollary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Corollary {
    type Err = AnomalyError;
    fn from_str(s: &str) -> Result<Self, AnomalyError> {
        Corollary::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| AnomalyError::Unknown(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivisibilityStatus {
    Pass,
    Gap,
}

impl DivisibilityStatus {
    pub fn name(self) -> &'static str {
        match self {
            DivisibilityStatus::Pass => "PASS",
            DivisibilityStatus::Gap => "GAP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityAudit {
    pub corollary: Corollary,
    pub m: u32,
    pub k: u32,
    pub l: u32,
    pub assumed_v2_h: i64,
    /// `(r, v2 of the coefficient of h_r)` over the summation range.
    pub terms: Vec<(u32, i64)>,
    /// `None` when the sum is empty and the quantity vanishes identically.
    pub implied_exponent: Option<i64>,
    pub claimed_exponent: i64,
    pub solve_coeffs_integral: bool,
    pub status: DivisibilityStatus,
}

impl DivisibilityAudit {
    pub fn to_json(&self) -> Value {
        json!({
            "corollary": self.corollary.name(),
            "m": self.m,
            "k": self.k,
            "l": self.l,
            "assumed_v2_h": self.assumed_v2_h,
            "terms": self.terms.iter().map(|(r, e)| json!({"r": r, "v2_coefficient": e})).collect::<Vec<_>>(),
            "implied_exponent": self.implied_exponent,
            "claimed_exponent": self.claimed_exponent,
            "solve_coeffs_integral": self.solve_coeffs_integral,
            "status": self.status.name(),
        })
    }
}

fn v2(n: u32) -> i64 {
    n.trailing_zeros() as i64
}

/// Audits one corollary at `k = 2m+1`: the smallest 2-adic valuation of the
/// coefficients `2^{l+k-6r}` (resp. `r 2^{l+k+6-6r}`, `r >= 1`), plus the
/// assumed valuation of every `h_r`, against the claimed power of 2.
pub fn divisibility_check(cor: Corollary, m: u32, l: u32, assumed_v2_h: i64) -> Result<DivisibilityAudit, AnomalyError> {
    let need = 4 * m + 2;
    if l < need {
        return Err(AnomalyError::LTooSmallForCorollary { cor: cor.name().to_string(), need, l });
    }
    if assumed_v2_h < 0 {
        return Err(AnomalyError::Unknown(format!("assumed 2-adic valuation {assumed_v2_h}")));
    }
    let k = 2 * m + 1;
    if k > super::MAX_K {
        return Err(AnomalyError::KTooLarge(k));
    }
    let base = (l + k) as i64;
    let terms: Vec<(u32, i64)> = if cor.first_order() {
        (1..=k / 2).map(|r| (r, base + 6 - 6 * r as i64 + v2(r))).collect()
    } else {
        (0..=k / 2).map(|r| (r, base - 6 * r as i64)).collect()
    };
    let implied_exponent = terms.iter().map(|&(_, e)| e + assumed_v2_h).min();
    let (_, solve_coeffs_integral) = solve_coefficients(k)?;
    let claimed_exponent = cor.claimed_exponent();
    let status = match implied_exponent {
        Some(e) if e < claimed_exponent || !solve_coeffs_integral => DivisibilityStatus::Gap,
        _ => DivisibilityStatus::Pass,
    };
    Ok(DivisibilityAudit {
        corollary: cor,
        m,
        k,
        l,
        assumed_v2_h,
        terms,
        implied_exponent,
        claimed_exponent,
        solve_coeffs_integral,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_l_outcomes() {
        let at = |c, m| divisibility_check(c, m, 4 * m + 2, 1).unwrap();
        assert_eq!(at(Corollary::C3_6, 0).implied_exponent, Some(4));
        assert_eq!(at(Corollary::C3_6, 1).implied_exponent, Some(4));
        assert_eq!(at(Corollary::C3_8, 0).implied_exponent, None);
        assert_eq!(at(Corollary::C3_8, 1).implied_exponent, Some(10));
        assert_eq!(at(Corollary::C4_10, 1).status, DivisibilityStatus::Pass);
        let gap = at(Corollary::C4_9, 0);
        assert_eq!((gap.implied_exponent, gap.status), (Some(4), DivisibilityStatus::Gap));
        for c in Corollary::ALL {
            assert!(at(c, 1).solve_coeffs_integral);
        }
    }

    #[test]
    fn premise_enforced() {
        assert!(matches!(
            divisibility_check(Corollary::C3_6, 1, 5, 1),
            Err(AnomalyError::LTooSmallForCorollary { need: 6, .. })
        ));
    }

    #[test]
    fn implied_exponent_grows_with_l() {
        for l in 6..12 {
            let a = divisibility_check(Corollary::C3_6, 1, l, 1).unwrap();
            assert_eq!(a.implied_exponent, Some(l as i64 + 3 - 6 + 1));
        }
    }
}

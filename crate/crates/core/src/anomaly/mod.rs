//! Assembly of the P-series, verification of the cancellation formulas,
//! bundle-path cross-checks and 2-adic divisibility audits.

mod divisibility;
mod pseries;
mod report;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, GeneratorTable, PolyRing};
use crate::genus::GenusError;
use crate::kvirt::KvirtError;
use crate::modforms::ModformError;
use crate::qseries::{SeriesError, UNITS_PER_Q};

pub use crate::genus::SettingKind;
pub use divisibility::{divisibility_check, Corollary, DivisibilityAudit, DivisibilityStatus};
pub use pseries::{
    build_p, build_p_bundle_path, cross_check_bundle_expansion, CrossCheck, PSeriesKind,
};
pub use report::{render_text, Check, Residual, Status, Variant, VerificationReport, SCHEMA_VERSION};
pub use verify::{cross_check_report, structural_report, verify_theorem, TheoremId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnomalyError {
    #[error("k must be at least 1 (got {0})")]
    InvalidK(u32),
    #[error("k = {0} is above the supported maximum {max}", max = MAX_K)]
    KTooLarge(u32),
    #[error("l must be at least 1 (got {0})")]
    InvalidL(u32),
    #[error("l = {0} is above the supported maximum {max}", max = MAX_L)]
    LTooLarge(u32),
    #[error("q-order {have} is insufficient for k = {k}: at least {need} is required")]
    InsufficientOrder { k: u32, have: u32, need: u32 },
    #[error("theorem {theorem} concerns {expected} settings, not {got}")]
    FamilyMismatch { theorem: String, expected: &'static str, got: &'static str },
    #[error("theorem {theorem} is stated for k = {expected} only (got {got})")]
    FixedK { theorem: String, expected: u32, got: u32 },
    #[error("corollary {cor} requires l >= 4m+2 = {need} (got l = {l})")]
    LTooSmallForCorollary { cor: String, need: u32, l: u32 },
    #[error("unknown identifier `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Modform(#[from] ModformError),
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error(transparent)]
    Kvirt(#[from] KvirtError),
}

pub const MAX_K: u32 = 8;
pub const MAX_L: u32 = 16;

/// Smallest q-order accepted for a given `k`: the half-integral coefficients
/// through `q^{N_q}` must cover the `⌊k/2⌋+1` solving orders plus at least
/// `2k+3` independently checked ones.
pub fn min_qorder(k: u32) -> u32 {
    (2 * k + 3 + k / 2).div_ceil(2)
}

pub fn default_qorder(k: u32) -> u32 {
    2 * k + 4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Setting {
    pub kind: SettingKind,
    pub k: u32,
    pub l: u32,
    #[serde(rename = "qorder")]
    pub n_q: u32,
}

impl Setting {
    pub fn new(kind: SettingKind, k: u32, l: u32, n_q: u32) -> Result<Self, AnomalyError> {
        if k == 0 {
            return Err(AnomalyError::InvalidK(k));
        }
        if k > MAX_K {
            return Err(AnomalyError::KTooLarge(k));
        }
        if l == 0 {
            return Err(AnomalyError::InvalidL(l));
        }
        if l > MAX_L {
            return Err(AnomalyError::LTooLarge(l));
        }
        let need = min_qorder(k);
        if n_q < need {
            return Err(AnomalyError::InsufficientOrder { k, have: n_q, need });
        }
        Ok(Setting { kind, k, l, n_q })
    }

    pub fn with_default_order(kind: SettingKind, k: u32, l: u32) -> Result<Self, AnomalyError> {
        Self::new(kind, k, l, default_qorder(k))
    }

    /// Top weight: `2k`, or `2k+1` in dimension `4k+2`.
    pub fn weight(&self) -> u32 {
        match self.kind {
            SettingKind::Spinc4k2 => 2 * self.k + 1,
            _ => 2 * self.k,
        }
    }

    pub fn q_bound(&self) -> i64 {
        self.n_q as i64 * UNITS_PER_Q
    }

    pub fn tm_roots(&self) -> u32 {
        match self.kind {
            SettingKind::Spinc4k2 => 2 * self.k + 1,
            _ => 2 * self.k,
        }
    }

    pub fn has_line(&self) -> bool {
        self.kind != SettingKind::Spin4k
    }

    /// Generators that can occur below the top weight.
    pub fn ring(&self) -> PolyRing {
        let half = self.weight() / 2;
        let table = GeneratorTable::normalized(self.tm_roots().min(half), self.l.min(half), self.has_line());
        PolyRing::new(table, self.weight())
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} k={} l={} qorder={}", self.kind.name(), self.k, self.l, self.n_q)
    }
}

impl FromStr for SettingKind {
    type Err = AnomalyError;
    fn from_str(s: &str) -> Result<Self, AnomalyError> {
        [SettingKind::Spin4k, SettingKind::Spinc4k, SettingKind::Spinc4k2]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AnomalyError::Unknown(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qorder_guard() {
        assert_eq!(min_qorder(1), 3);
        assert_eq!(min_qorder(2), 4);
        assert_eq!(min_qorder(3), 5);
        for k in 1..=MAX_K {
            assert!(default_qorder(k) >= min_qorder(k));
        }
        assert!(matches!(
            Setting::new(SettingKind::Spin4k, 3, 1, 3),
            Err(AnomalyError::InsufficientOrder { need: 5, .. })
        ));
        assert!(matches!(Setting::new(SettingKind::Spin4k, 0, 1, 6), Err(AnomalyError::InvalidK(0))));
    }

    #[test]
    fn weights_and_rings() {
        let s = Setting::with_default_order(SettingKind::Spinc4k2, 2, 3).unwrap();
        assert_eq!(s.weight(), 5);
        assert_eq!(s.tm_roots(), 5);
        let names: Vec<String> = s.ring().table().generators().iter().map(|g| g.name.clone()).collect();
        assert_eq!(names, ["n1_TM", "n2_TM", "n1_V", "n2_V", "u"]);
    }
}

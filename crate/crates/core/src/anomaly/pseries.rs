//! The P-series of each setting, built two independent ways: from theta
//! factors (the primary path) and from Θ-object bundle expansions.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::{AnomalyError, Setting, SettingKind};
use crate::algebra::{Family, GaussianRational, GradedPolynomial};
use crate::genus::{
    apply_constraint_series, classical_genus, eval_at_var, prod_over_roots, ClassicalGenus, PolySeries, RootFamily,
};
use crate::kvirt::{bundle_data, theta_object, LineConvention, ThetaObject, VTwist};
use crate::theta::{theta_factor, FactorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PSeriesKind {
    /// Twisted by `Δ(V) ⊗ Λ_{q^n}(Ṽ_C)`; modular over `Γ0(2)`.
    P1,
    /// Twisted by `Λ_{-q^{n-1/2}}(Ṽ_C)`; modular over `Γ^0(2)`.
    P2,
    /// Twisted by `Λ_{q^{n-1/2}}(Ṽ_C)`.
    P3,
}

impl PSeriesKind {
    pub const ALL: [PSeriesKind; 3] = [PSeriesKind::P1, PSeriesKind::P2, PSeriesKind::P3];

    pub fn name(self) -> &'static str {
        match self {
            PSeriesKind::P1 => "P1",
            PSeriesKind::P2 => "P2",
            PSeriesKind::P3 => "P3",
        }
    }
}

pub(super) fn tm_family(s: &Setting) -> RootFamily {
    RootFamily::new(Family::TM, s.tm_roots())
}

pub(super) fn v_family(s: &Setting) -> RootFamily {
    RootFamily::new(Family::V, s.l)
}

/// Constraint, then the top-weight component of every coefficient.
pub(super) fn top_series(p: &PolySeries, s: &Setting) -> Result<PolySeries, AnomalyError> {
    let c = apply_constraint_series(p, s.kind)?;
    Ok(c.map(c.ring(), |x| x.component(s.weight())))
}

fn pow2(n: u32) -> GaussianRational {
    GaussianRational::from_int(2).pow(n)
}

fn theta_path(s: &Setting, which: PSeriesKind) -> Result<PolySeries, AnomalyError> {
    let ring = s.ring();
    let w = ring.max_weight();
    let qb = s.q_bound();
    let tm = tm_family(s);
    let factor = |kind| theta_factor(kind, qb, w);
    let v_part = match which {
        PSeriesKind::P1 => prod_over_roots(&factor(FactorKind::T1), v_family(s), &ring)?.scale(&pow2(s.l)),
        PSeriesKind::P2 => prod_over_roots(&factor(FactorKind::T2), v_family(s), &ring)?,
        PSeriesKind::P3 => prod_over_roots(&factor(FactorKind::T3), v_family(s), &ring)?,
    };
    let a = factor(FactorKind::A);
    let x_part = match s.kind {
        SettingKind::Spin4k => {
            let mut acc = PolySeries::zero(&ring, qb);
            for t in [FactorKind::T1, FactorKind::T2, FactorKind::T3] {
                acc = acc.try_add(&prod_over_roots(&a.mul(&factor(t)), tm, &ring)?)?;
            }
            acc.scale(&pow2(2 * s.k))
        }
        SettingKind::Spinc4k => {
            let t123 = factor(FactorKind::T1).mul(&factor(FactorKind::T2)).mul(&factor(FactorKind::T3));
            prod_over_roots(&a, tm, &ring)?.try_mul(&eval_at_var(&t123, "u", &ring)?)?
        }
        SettingKind::Spinc4k2 => {
            let d = eval_at_var(&factor(FactorKind::D), "u", &ring)?.scale(&GaussianRational::i());
            prod_over_roots(&a, tm, &ring)?.try_mul(&d)?
        }
    };
    top_series(&x_part.try_mul(&v_part)?, s)
}

type PKey = (Setting, PSeriesKind);

/// The P-series of a setting: weight-`W` component, after the anomaly
/// condition, of the theta-factor product. Memoized.
pub fn build_p(s: &Setting, which: PSeriesKind) -> Result<PolySeries, AnomalyError> {
    static CACHE: OnceLock<Mutex<HashMap<PKey, PolySeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache lock").get(&(*s, which)) {
        return Ok(p.clone());
    }
    let p = theta_path(s, which)?;
    cache.lock().expect("cache lock").insert((*s, which), p.clone());
    Ok(p)
}

/// The same series assembled from `Â`, `exp(c/2)`, spinor characters and the
/// Chern characters of the Θ-object expansions.
pub fn build_p_bundle_path(s: &Setting, which: PSeriesKind, line: LineConvention) -> Result<PolySeries, AnomalyError> {
    let ring = s.ring();
    let qb = s.q_bound();
    let tm = tm_family(s);
    let data = bundle_data(&ring, s.tm_roots(), Some(s.l), s.has_line().then_some("u"))?;
    let twist = match which {
        PSeriesKind::P1 => VTwist::LambdaQ,
        PSeriesKind::P2 => VTwist::LambdaMinusHalf,
        PSeriesKind::P3 => VTwist::LambdaPlusHalf,
    };
    let object = |o| theta_object(o, &data, line, twist, qb).map(|b| b.ch().clone());
    let a_hat = classical_genus(ClassicalGenus::AHat, tm, &ring)?;
    let mut q = match s.kind {
        SettingKind::Spin4k => {
            let ch_dm = classical_genus(ClassicalGenus::SpinorCh, tm, &ring)?;
            let b1 = object(ThetaObject::Theta1)?.mul_coefficient(&ch_dm);
            let b23 = object(ThetaObject::Theta2)?.try_add(&object(ThetaObject::Theta3)?)?.scale(&pow2(2 * s.k));
            b1.try_add(&b23)?.mul_coefficient(&a_hat)
        }
        SettingKind::Spinc4k | SettingKind::Spinc4k2 => {
            let o = if s.kind == SettingKind::Spinc4k { ThetaObject::Theta } else { ThetaObject::ThetaStar };
            let e = classical_genus(ClassicalGenus::ExpHalfC, RootFamily::new(Family::U, 1), &ring)?;
            object(o)?.mul_coefficient(&(&a_hat * &e))
        }
    };
    if which == PSeriesKind::P1 {
        q = q.mul_coefficient(&classical_genus(ClassicalGenus::SpinorCh, v_family(s), &ring)?);
    }
    top_series(&q, s)
}

/// Outcome of comparing the two paths at one q-exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheck {
    pub setting: Setting,
    pub which: PSeriesKind,
    /// Lattice exponent (units of `q^{1/8}`).
    pub exponent: i64,
    pub line: LineConvention,
    pub residual: GradedPolynomial,
}

/// Theta-path coefficient minus bundle-path coefficient at `exponent`.
pub fn cross_check_bundle_expansion(
    s: &Setting,
    which: PSeriesKind,
    exponent: i64,
    line: LineConvention,
) -> Result<CrossCheck, AnomalyError> {
    let theta = build_p(s, which)?.coefficient(exponent)?;
    let bundle = build_p_bundle_path(s, which, line)?.coefficient(exponent)?;
    Ok(CrossCheck { setting: *s, which, exponent, line, residual: theta.try_sub(&bundle)? })
}

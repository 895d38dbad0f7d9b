//! Virtual bundles represented by rank and Chern character, with the
//! λ-ring operations needed to expand the Θ-objects as q-series.
//!
//! `Λ_t` and `S_t` are realized through Adams operations:
//! `log Λ_t(E) = Σ_m (-1)^{m-1} ψ^m(E) t^m / m` and
//! `log S_t(E) = Σ_m ψ^m(E) t^m / m`, where `ψ^m` multiplies every Chern
//! root by `m`, i.e. scales the weight-`w` part of `ch` by `m^w`.

use thiserror::Error;

use crate::algebra::{AlgebraError, Family, GaussianRational, GradedPolynomial, PolyRing};
use crate::genus::{additive_over_roots, taylor_at_var, GenusError, PolySeries, RootFamily};
use crate::qseries::{SeriesError, HALF, UNITS_PER_Q};
use crate::theta::cos_mz;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KvirtError {
    #[error("weight-0 part of ch is {found}, expected the integer rank {rank}")]
    RankMismatch { rank: i64, found: String },
    #[error("weight-0 part of ch is not an integer: {0}")]
    NonIntegralRank(String),
    #[error("Adams operations need m >= 1")]
    InvalidAdams,
    #[error("string exponent must be positive")]
    NonPositiveExponent,
    #[error("the bundle data has no `{0}` bundle")]
    MissingBundle(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Genus(#[from] GenusError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct VirtualBundle {
    rank: i64,
    ch: GradedPolynomial,
}

/// `ψ^m` on a Chern character.
pub fn adams_ch(ch: &GradedPolynomial, m: u32) -> GradedPolynomial {
    let ring = ch.ring();
    let mut out = GradedPolynomial::zero(ring);
    let m = GaussianRational::from_int(m as i64);
    for (mono, c) in ch.terms() {
        let w = ch.monomial_weight(mono);
        out = &out + &GradedPolynomial::from_monomial(ring, mono.clone(), c * &m.pow(w));
    }
    out
}

impl VirtualBundle {
    pub fn new(rank: i64, ch: GradedPolynomial) -> Result<Self, KvirtError> {
        let c0 = ch.constant_term();
        if c0 != GaussianRational::from_int(rank) {
            return Err(KvirtError::RankMismatch { rank, found: c0.to_string() });
        }
        Ok(VirtualBundle { rank, ch })
    }

    /// Reads the rank off the weight-0 part of `ch`.
    pub fn from_ch(ch: GradedPolynomial) -> Result<Self, KvirtError> {
        let c0 = ch.constant_term();
        let rank = c0.as_i64().ok_or_else(|| KvirtError::NonIntegralRank(c0.to_string()))?;
        Ok(VirtualBundle { rank, ch })
    }

    /// The trivial bundle `C^n` (negative `n` allowed).
    pub fn trivial(ring: &PolyRing, n: i64) -> Self {
        VirtualBundle { rank: n, ch: GradedPolynomial::from_int(ring, n) }
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn ch(&self) -> &GradedPolynomial {
        &self.ch
    }

    pub fn ring(&self) -> &PolyRing {
        self.ch.ring()
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, KvirtError> {
        Ok(VirtualBundle { rank: self.rank + rhs.rank, ch: self.ch.try_add(&rhs.ch)? })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, KvirtError> {
        Ok(VirtualBundle { rank: self.rank - rhs.rank, ch: self.ch.try_sub(&rhs.ch)? })
    }

    pub fn try_tensor(&self, rhs: &Self) -> Result<Self, KvirtError> {
        Ok(VirtualBundle { rank: self.rank * rhs.rank, ch: self.ch.try_mul(&rhs.ch)? })
    }

    pub fn scale_int(&self, n: i64) -> Self {
        VirtualBundle { rank: self.rank * n, ch: self.ch.scale_int(n) }
    }

    /// `E - rank E`.
    pub fn reduced(&self) -> Self {
        self.try_sub(&Self::trivial(self.ring(), self.rank)).expect("same ring")
    }

    pub fn adams(&self, m: u32) -> Result<Self, KvirtError> {
        if m == 0 {
            return Err(KvirtError::InvalidAdams);
        }
        Ok(VirtualBundle { rank: self.rank, ch: adams_ch(&self.ch, m) })
    }

    /// `Λ^n E` via `n λ^n = Σ_{i=1}^n (-1)^{i-1} ψ^i λ^{n-i}`.
    pub fn exterior_power(&self, n: u32) -> Result<Self, KvirtError> {
        let ring = self.ring();
        let mut lam: Vec<GradedPolynomial> = vec![GradedPolynomial::one(ring)];
        for j in 1..=n as usize {
            let mut acc = GradedPolynomial::zero(ring);
            for i in 1..=j {
                let t = &adams_ch(&self.ch, i as u32) * &lam[j - i];
                acc = if i % 2 == 1 { &acc + &t } else { &acc - &t };
            }
            lam.push(acc.scale(&GaussianRational::from_ratio(1, j as i64)));
        }
        Self::from_ch(lam.pop().expect("non-empty"))
    }
}

/// A q-series of virtual bundles, stored as the series of their characters.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleSeries {
    ch: PolySeries,
}

impl BundleSeries {
    pub fn from_ch(ch: PolySeries) -> Self {
        BundleSeries { ch }
    }

    pub fn ch(&self) -> &PolySeries {
        &self.ch
    }

    pub fn bound(&self) -> i64 {
        self.ch.bound()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, KvirtError> {
        Ok(BundleSeries { ch: self.ch.try_mul(&rhs.ch)? })
    }

    pub fn bundle_coefficient(&self, k: i64) -> Result<VirtualBundle, KvirtError> {
        VirtualBundle::from_ch(self.ch.coefficient(k)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Power {
    Exterior,
    Symmetric,
}

/// `log` of a single `Λ_{sign·q^a}(E)` or `S_{sign·q^a}(E)`.
fn log_single(e: &VirtualBundle, power: Power, sign: i64, a: i64, q_bound: i64) -> PolySeries {
    let mut out = PolySeries::zero(e.ring(), q_bound);
    let mut m = 1i64;
    while a * m <= q_bound {
        let mut c = GaussianRational::from_ratio(1, m);
        if sign < 0 && m % 2 == 1 {
            c = -c;
        }
        if power == Power::Exterior && m % 2 == 0 {
            c = -c;
        }
        out.add_term(a * m, &adams_ch(&e.ch, m as u32).scale(&c));
        m += 1;
    }
    out
}

/// `Λ_t(E)` at `t = sign·q^{a/8}`.
pub fn vb_lambda_t(e: &VirtualBundle, a: i64, sign: i64, q_bound: i64) -> Result<BundleSeries, KvirtError> {
    if a <= 0 {
        return Err(KvirtError::NonPositiveExponent);
    }
    Ok(BundleSeries { ch: log_single(e, Power::Exterior, sign, a, q_bound).exp()? })
}

/// `S_t(E)` at `t = sign·q^{a/8}`.
pub fn vb_s_t(e: &VirtualBundle, a: i64, sign: i64, q_bound: i64) -> Result<BundleSeries, KvirtError> {
    if a <= 0 {
        return Err(KvirtError::NonPositiveExponent);
    }
    Ok(BundleSeries { ch: log_single(e, Power::Symmetric, sign, a, q_bound).exp()? })
}

/// `log ⊗_{n>=1} X_{sign·q^{n}}(E)` (or `q^{n-1/2}` when `half`), with all
/// factors that reach below the order bound.
fn log_string(e: &VirtualBundle, power: Power, sign: i64, half: bool, q_bound: i64) -> PolySeries {
    let mut out = PolySeries::zero(e.ring(), q_bound);
    let mut n = 1i64;
    loop {
        let a = if half { (2 * n - 1) * HALF } else { n * UNITS_PER_Q };
        if a > q_bound {
            break;
        }
        out = &out + &log_single(e, power, sign, a, q_bound);
        n += 1;
    }
    out
}

/// Complexified tangent bundle, rank `2·n_roots`: `ch = Σ_j 2cos 2z_j`.
pub fn tangent_bundle(ring: &PolyRing, fam: RootFamily) -> Result<VirtualBundle, KvirtError> {
    let c: Vec<GaussianRational> = cos_mz(2, ring.max_weight()).iter().map(|x| x.scale_rational(&crate::algebra::int(2))).collect();
    VirtualBundle::new(2 * fam.n_roots as i64, additive_over_roots(&c, fam, ring)?)
}

/// `L_R ⊗ C` for the line-bundle variable: `ch = 2cos 2u`.
pub fn line_bundle_pair(ring: &PolyRing, var: &str) -> Result<VirtualBundle, KvirtError> {
    let c: Vec<GaussianRational> = cos_mz(2, ring.max_weight()).iter().map(|x| x.scale_rational(&crate::algebra::int(2))).collect();
    VirtualBundle::new(2, taylor_at_var(&c, var, ring)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaObject {
    Theta1,
    Theta2,
    Theta3,
    /// The spin^c object with three `L`-strings.
    Theta,
    /// The spin^c object with a single `Λ_{-q^m}(L)` string.
    ThetaStar,
}

/// Whether `L_R ⊗ C` enters the spin^c strings as is or reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineConvention {
    Unreduced,
    Reduced,
}

/// Extra string in `Ṽ_C` tensored onto a Θ-object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VTwist {
    None,
    /// `⊗ Λ_{q^n}(Ṽ_C)`.
    LambdaQ,
    /// `⊗ Λ_{-q^{n-1/2}}(Ṽ_C)`.
    LambdaMinusHalf,
    /// `⊗ Λ_{q^{n-1/2}}(Ṽ_C)`.
    LambdaPlusHalf,
}

/// The bundles a Θ-object is built from.
#[derive(Clone, Debug)]
pub struct BundleData {
    pub tangent: VirtualBundle,
    pub v: Option<VirtualBundle>,
    pub line: Option<VirtualBundle>,
}

pub fn theta_object(
    which: ThetaObject,
    data: &BundleData,
    line: LineConvention,
    twist: VTwist,
    q_bound: i64,
) -> Result<BundleSeries, KvirtError> {
    let t = data.tangent.reduced();
    let l = || -> Result<VirtualBundle, KvirtError> {
        let l = data.line.as_ref().ok_or(KvirtError::MissingBundle("L"))?;
        Ok(match line {
            LineConvention::Unreduced => l.clone(),
            LineConvention::Reduced => l.reduced(),
        })
    };
    let mut log = log_string(&t, Power::Symmetric, 1, false, q_bound);
    let mut add = |s: PolySeries| log = &log + &s;
    match which {
        ThetaObject::Theta1 => add(log_string(&t, Power::Exterior, 1, false, q_bound)),
        ThetaObject::Theta2 => add(log_string(&t, Power::Exterior, -1, true, q_bound)),
        ThetaObject::Theta3 => add(log_string(&t, Power::Exterior, 1, true, q_bound)),
        ThetaObject::Theta => {
            let l = l()?;
            add(log_string(&l, Power::Exterior, 1, false, q_bound));
            add(log_string(&l, Power::Exterior, -1, true, q_bound));
            add(log_string(&l, Power::Exterior, 1, true, q_bound));
        }
        ThetaObject::ThetaStar => add(log_string(&l()?, Power::Exterior, -1, false, q_bound)),
    }
    if twist != VTwist::None {
        let v = data.v.as_ref().ok_or(KvirtError::MissingBundle("V"))?.reduced();
        match twist {
            VTwist::LambdaQ => add(log_string(&v, Power::Exterior, 1, false, q_bound)),
            VTwist::LambdaMinusHalf => add(log_string(&v, Power::Exterior, -1, true, q_bound)),
            VTwist::LambdaPlusHalf => add(log_string(&v, Power::Exterior, 1, true, q_bound)),
            VTwist::None => {}
        }
    }
    Ok(BundleSeries { ch: log.exp()? })
}

/// Builds the tangent bundle of a family together with optional `V` and `L`.
pub fn bundle_data(
    ring: &PolyRing,
    tm_roots: u32,
    v_roots: Option<u32>,
    line_var: Option<&str>,
) -> Result<BundleData, KvirtError> {
    Ok(BundleData {
        tangent: tangent_bundle(ring, RootFamily::new(Family::TM, tm_roots))?,
        v: v_roots.map(|n| tangent_bundle(ring, RootFamily::new(Family::V, n))).transpose()?,
        line: line_var.map(|u| line_bundle_pair(ring, u)).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GeneratorTable;
    use proptest::prelude::*;

    fn ring() -> PolyRing {
        PolyRing::new(GeneratorTable::normalized(2, 2, true), 4)
    }

    fn data() -> BundleData {
        bundle_data(&ring(), 2, Some(2), Some("u")).unwrap()
    }

    #[test]
    fn tilde_and_unit() {
        let t = data().tangent;
        assert_eq!(t.rank(), 4);
        let red = t.reduced();
        assert_eq!(red.rank(), 0);
        assert_eq!(red.ch(), &(t.ch() - &GradedPolynomial::from_int(&ring(), 4)));
        let one = VirtualBundle::trivial(&ring(), 1);
        assert_eq!(one.try_tensor(&t).unwrap(), t);
    }

    #[test]
    fn line_square() {
        let l = data().line.unwrap();
        let sq = l.try_tensor(&l).unwrap();
        assert_eq!(sq.rank(), 4);
        assert_eq!(sq.ch(), &(l.ch() * l.ch()));
        // ψ^2 L has character 2cos 4u
        let r = ring();
        let c: Vec<GaussianRational> = cos_mz(4, 4).iter().map(|x| x.scale_rational(&crate::algebra::int(2))).collect();
        assert_eq!(l.adams(2).unwrap().ch(), &taylor_at_var(&c, "u", &r).unwrap());
    }

    #[test]
    fn lambda_of_line_pair() {
        let l = data().line.unwrap();
        let lam = vb_lambda_t(&l, 8, 1, 40).unwrap();
        assert_eq!(lam.bundle_coefficient(0).unwrap(), VirtualBundle::trivial(&ring(), 1));
        assert_eq!(lam.bundle_coefficient(8).unwrap(), l);
        let l2 = lam.bundle_coefficient(16).unwrap();
        assert_eq!(l2, VirtualBundle::trivial(&ring(), 1));
        assert_eq!(l.exterior_power(2).unwrap(), l2);
        for k in (17..=40).step_by(1) {
            assert!(lam.ch().coefficient(k).unwrap().is_zero());
        }
    }

    #[test]
    fn lambda_and_s_examples() {
        let r = ring();
        let one = VirtualBundle::trivial(&r, 1);
        let lam = vb_lambda_t(&one, 8, 1, 32).unwrap();
        assert_eq!(lam.ch().len(), 2);
        let s = vb_s_t(&one, 8, 1, 32).unwrap();
        for k in [0, 8, 16, 24, 32] {
            assert_eq!(s.bundle_coefficient(k).unwrap(), one);
        }
        let t = data().tangent.reduced();
        let lam = vb_lambda_t(&t, 4, -1, 16).unwrap();
        assert_eq!(lam.bundle_coefficient(4).unwrap(), t.scale_int(-1));
        let s = vb_s_t(&t, 8, 1, 16).unwrap();
        assert_eq!(s.bundle_coefficient(8).unwrap(), t);
        assert_eq!(s.bundle_coefficient(8).unwrap().rank(), 0);
    }

    #[test]
    fn s_inverts_lambda() {
        let t = data().tangent;
        let prod = vb_s_t(&t, 4, 1, 24).unwrap().try_mul(&vb_lambda_t(&t, 4, -1, 24).unwrap()).unwrap();
        assert_eq!(prod.ch(), &PolySeries::one(&ring(), 24));
    }

    #[test]
    fn theta_low_orders() {
        let d = data();
        let t = d.tangent.reduced();
        let th1 = theta_object(ThetaObject::Theta1, &d, LineConvention::Unreduced, VTwist::None, 16).unwrap();
        assert_eq!(th1.bundle_coefficient(8).unwrap(), t.scale_int(2));
        let th2 = theta_object(ThetaObject::Theta2, &d, LineConvention::Unreduced, VTwist::None, 16).unwrap();
        assert_eq!(th2.bundle_coefficient(4).unwrap(), t.scale_int(-1));
        let th = theta_object(ThetaObject::Theta, &d, LineConvention::Unreduced, VTwist::None, 16).unwrap();
        assert!(th.ch().coefficient(4).unwrap().is_zero());
        let l = d.line.clone().unwrap();
        let expect = t
            .try_add(&l)
            .unwrap()
            .try_add(&l.exterior_power(2).unwrap().scale_int(2))
            .unwrap()
            .try_sub(&l.try_tensor(&l).unwrap())
            .unwrap();
        assert_eq!(th.bundle_coefficient(8).unwrap(), expect);
        let ts = theta_object(ThetaObject::ThetaStar, &d, LineConvention::Unreduced, VTwist::None, 16).unwrap();
        assert_eq!(ts.bundle_coefficient(8).unwrap(), t.try_sub(&l).unwrap());
    }

    #[test]
    fn missing_bundles_are_errors() {
        let d = BundleData { v: None, line: None, ..data() };
        assert!(matches!(
            theta_object(ThetaObject::Theta, &d, LineConvention::Unreduced, VTwist::None, 8),
            Err(KvirtError::MissingBundle("L"))
        ));
        assert!(matches!(
            theta_object(ThetaObject::Theta1, &d, LineConvention::Unreduced, VTwist::LambdaQ, 8),
            Err(KvirtError::MissingBundle("V"))
        ));
    }

    fn arb_bundle() -> impl Strategy<Value = VirtualBundle> {
        (-3i64..4, prop::collection::vec(-3i64..4, 4)).prop_map(|(rank, cs)| {
            let r = ring();
            let gens: Vec<GradedPolynomial> =
                ["n1_TM", "n1_V", "u"].iter().map(|g| GradedPolynomial::generator(&r, g).unwrap()).collect();
            let mut ch = GradedPolynomial::from_int(&r, rank);
            ch = &ch + &gens[0].scale_int(cs[0]);
            ch = &ch + &gens[1].scale_int(cs[1]);
            ch = &ch + &gens[2].scale_int(cs[2]);
            ch = &ch + &(&gens[2] * &gens[0]).scale_int(cs[3]);
            VirtualBundle::new(rank, ch).unwrap()
        })
    }

    proptest! {
        #[test]
        fn tensor_is_multiplicative(e in arb_bundle(), f in arb_bundle()) {
            let t = e.try_tensor(&f).unwrap();
            prop_assert_eq!(t.rank(), e.rank() * f.rank());
            prop_assert_eq!(t.ch(), &(e.ch() * f.ch()));
        }

        #[test]
        fn lambda_is_exponential(e in arb_bundle(), f in arb_bundle()) {
            let sum = e.try_add(&f).unwrap();
            let lhs = vb_lambda_t(&sum, 4, 1, 16).unwrap();
            let rhs = vb_lambda_t(&e, 4, 1, 16).unwrap().try_mul(&vb_lambda_t(&f, 4, 1, 16).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn adams_composes(e in arb_bundle(), m in 1u32..4, n in 1u32..4) {
            prop_assert_eq!(e.adams(m).unwrap().adams(n).unwrap(), e.adams(m * n).unwrap());
        }

        #[test]
        fn s_lambda_inverse(e in arb_bundle()) {
            let prod = vb_s_t(&e, 8, 1, 16).unwrap().try_mul(&vb_lambda_t(&e, 8, -1, 16).unwrap()).unwrap();
            prop_assert_eq!(prod.ch(), &PolySeries::one(&ring(), 16));
        }
    }
}

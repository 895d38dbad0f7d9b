//! Theorem verification, bundle-path cross-checks and structural checks.

use std::fmt;
use std::str::FromStr;

use super::pseries::{build_p, cross_check_bundle_expansion, tm_family, v_family, PSeriesKind};
use super::report::{imaginary_part, Check, Residual, VerificationReport};
use super::{AnomalyError, Setting, SettingKind};
use crate::algebra::{Family, GaussianRational, GradedPolynomial};
use crate::genus::{apply_constraint, classical_genus, ClassicalGenus, PolySeries, RootFamily};
use crate::kvirt::{line_bundle_pair, tangent_bundle, LineConvention, VirtualBundle};
use crate::modforms::{decompose, transfer_check};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    T3_1,
    T3_2,
    C3_3,
    C3_4,
    T4_1,
    T4_2,
    T4_6,
    T4_8,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::C3_3,
        TheoremId::C3_4,
        TheoremId::T4_1,
        TheoremId::T4_2,
        TheoremId::T4_6,
        TheoremId::T4_8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::T3_1 => "3.1",
            TheoremId::T3_2 => "3.2",
            TheoremId::C3_3 => "3.3",
            TheoremId::C3_4 => "3.4",
            TheoremId::T4_1 => "4.1",
            TheoremId::T4_2 => "4.2",
            TheoremId::T4_6 => "4.6",
            TheoremId::T4_8 => "4.8",
        }
    }

    pub fn family(self) -> SettingKind {
        match self {
            TheoremId::T3_1 | TheoremId::T3_2 | TheoremId::C3_3 | TheoremId::C3_4 => SettingKind::Spin4k,
            TheoremId::T4_1 | TheoremId::T4_2 => SettingKind::Spinc4k,
            TheoremId::T4_6 | TheoremId::T4_8 => SettingKind::Spinc4k2,
        }
    }

    /// The `k` a corollary is stated for, if fixed.
    pub fn fixed_k(self) -> Option<u32> {
        match self {
            TheoremId::C3_3 => Some(2),
            TheoremId::C3_4 => Some(3),
            _ => None,
        }
    }

    /// Whether the identity compares the `q^1` coefficient (otherwise `q^0`).
    fn first_order(self) -> bool {
        matches!(self, TheoremId::T3_2 | TheoremId::T4_2 | TheoremId::T4_8)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = AnomalyError;
    fn from_str(s: &str) -> Result<Self, AnomalyError> {
        TheoremId::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| AnomalyError::Unknown(s.to_string()))
    }
}

fn pow2(e: i64) -> GaussianRational {
    let p = GaussianRational::from_int(2).pow(e.unsigned_abs() as u32);
    if e < 0 {
        p.inverse().expect("nonzero")
    } else {
        p
    }
}

/// Characteristic classes of one setting, truncated at its top weight.
struct Ingredients {
    s: Setting,
    a_hat: GradedPolynomial,
    ch_dm: GradedPolynomial,
    ch_dv: GradedPolynomial,
    exp_c: GradedPolynomial,
    t: VirtualBundle,
    v: VirtualBundle,
    line: Option<VirtualBundle>,
}

impl Ingredients {
    fn new(s: &Setting) -> Result<Self, AnomalyError> {
        let ring = s.ring();
        let tm = tm_family(s);
        let v = v_family(s);
        let (exp_c, line) = if s.has_line() {
            (
                classical_genus(ClassicalGenus::ExpHalfC, RootFamily::new(Family::U, 1), &ring)?,
                Some(line_bundle_pair(&ring, "u")?),
            )
        } else {
            (GradedPolynomial::one(&ring), None)
        };
        Ok(Ingredients {
            s: *s,
            a_hat: classical_genus(ClassicalGenus::AHat, tm, &ring)?,
            ch_dm: classical_genus(ClassicalGenus::SpinorCh, tm, &ring)?,
            ch_dv: classical_genus(ClassicalGenus::SpinorCh, v, &ring)?,
            exp_c,
            t: tangent_bundle(&ring, tm)?,
            v: tangent_bundle(&ring, v)?,
            line,
        })
    }

    /// `{p}`: the anomaly condition, then the top-weight component.
    fn top(&self, p: &GradedPolynomial) -> Result<GradedPolynomial, AnomalyError> {
        Ok(apply_constraint(p, self.s.kind)?.component(self.s.weight()))
    }

    fn int(&self, n: i64) -> GradedPolynomial {
        GradedPolynomial::from_int(&self.s.ring(), n)
    }

    /// `Â ch(Δ(M)) + 2^{2k+1} Â`.
    fn x_spin(&self) -> GradedPolynomial {
        &(&self.a_hat * &self.ch_dm) + &self.a_hat.scale(&pow2(2 * self.s.k as i64 + 1))
    }

    fn line_ch(&self, conv: LineConvention) -> Result<VirtualBundle, AnomalyError> {
        let l = self.line.as_ref().expect("spin^c setting carries a line bundle");
        Ok(match conv {
            LineConvention::Unreduced => l.clone(),
            LineConvention::Reduced => l.reduced(),
        })
    }
}

/// `2^{l+k} Σ 2^{-6r} h_r` and `-2^{l+k+6} Σ r 2^{-6r} h_r`.
fn right_sides(s: &Setting, h: &[GradedPolynomial]) -> (GradedPolynomial, GradedPolynomial) {
    let ring = s.ring();
    let base = (s.l + s.k) as i64;
    let mut rhs0 = GradedPolynomial::zero(&ring);
    let mut rhs1 = GradedPolynomial::zero(&ring);
    for (r, hr) in h.iter().enumerate() {
        let r = r as i64;
        rhs0 = &rhs0 + &hr.scale(&pow2(base - 6 * r));
        rhs1 = &rhs1 - &hr.scale(&pow2(base + 6 - 6 * r)).scale_int(r);
    }
    (rhs0, rhs1)
}

fn check_family(id: TheoremId, s: &Setting) -> Result<(), AnomalyError> {
    if s.kind != id.family() {
        return Err(AnomalyError::FamilyMismatch {
            theorem: id.name().to_string(),
            expected: id.family().name(),
            got: s.kind.name(),
        });
    }
    if let Some(k) = id.fixed_k() {
        if s.k != k {
            return Err(AnomalyError::FixedK { theorem: id.name().to_string(), expected: k, got: s.k });
        }
    }
    Ok(())
}

/// Runs the full pipeline for one theorem: decomposition of `P2`, transfer
/// to `P1`, comparison of the q^0 or q^1 coefficient with the stated right
/// side, and comparison with the left side built from characteristic
/// classes.
pub fn verify_theorem(id: TheoremId, s: &Setting) -> Result<VerificationReport, AnomalyError> {
    check_family(id, s)?;
    let qb = s.q_bound();
    let k = s.k;
    let p1 = build_p(s, PSeriesKind::P1)?;
    let p2 = build_p(s, PSeriesKind::P2)?;
    let dec = decompose(&p2, k, qb)?;
    let transfer = transfer_check(&p1, &dec.h, s.l, k, qb)?;
    let (rhs0, rhs1) = right_sides(s, &dec.h);
    let c0 = p1.coefficient(0)?;
    let c1 = p1.coefficient(8)?;
    let first = &c1 - &c0.scale_int(24 * k as i64);

    let mut rep = VerificationReport::new("theorem");
    rep.theorem = Some(id.name().to_string());
    rep.setting = Some(*s);
    rep.integral = dec.integral;
    rep.solve_coeffs = dec.solve_coeffs.clone();
    rep.checks.push(Check::new(
        "decomposition",
        "P2 minus its expansion in (8δ2)^{k-2r} ε2^r, to the full order",
        Residual::Series(dec.residual.clone()),
    ));
    rep.checks.push(Check::new(
        "transfer",
        "P1 minus 2^l Σ h_r (8δ1)^{k-2r} ε1^r, to the full order",
        Residual::Series(transfer),
    ));
    let ing = Ingredients::new(s)?;
    if id.first_order() {
        rep.checks.push(Check::new(
            "q1_coefficient",
            "[q^1]P1 - 24k [q^0]P1 minus -2^{l+k+6} Σ r 2^{-6r} h_r",
            Residual::Poly(&first - &rhs1),
        ));
    } else {
        rep.checks.push(Check::new(
            "q0_coefficient",
            "[q^0]P1 minus 2^{l+k} Σ 2^{-6r} h_r",
            Residual::Poly(&c0 - &rhs0),
        ));
    }
    let base = match s.kind {
        SettingKind::Spin4k => ing.ch_dv.clone(),
        _ => &(&ing.a_hat * &ing.exp_c) * &ing.ch_dv,
    };
    let w24 = ing.int(24 * k as i64);
    let v_t = ing.v.reduced();
    let t_t = ing.t.reduced();
    match id {
        TheoremId::T3_1 | TheoremId::C3_3 | TheoremId::C3_4 => {
            let lhs = ing.top(&(&ing.x_spin() * &base))?;
            rep.checks.push(Check::new(
                "identity",
                "{Â ch(Δ(M)) ch(Δ(V)) + 2^{2k+1} Â ch(Δ(V))} minus 2^{l+k} Σ 2^{-6r} h_r",
                Residual::Poly(&lhs - &rhs0),
            ));
            if id != TheoremId::T3_1 {
                rep.checks.push(corollary_check(&ing, &lhs)?);
            }
        }
        TheoremId::T3_2 => {
            let ab = &ing.a_hat * &base;
            let b1 = t_t.scale_int(2).try_add(&v_t)?;
            let b2 = t_t.try_add(&t_t.exterior_power(2)?)?.try_add(&v_t)?;
            let lhs = ing.top(
                &(&(&(&ab * &ing.ch_dm) * &(b1.ch() - &w24))
                    + &(&ab * &(b2.ch() - &w24)).scale(&pow2(2 * k as i64 + 1))),
            )?;
            rep.checks.push(Check::new(
                "identity",
                "{Â ch(Δ(M)) ch(Δ(V)) ch(2T̃ + Ṽ - 24k) + 2^{2k+1} Â ch(Δ(V)) ch(T̃ + Λ²T̃ + Ṽ - 24k)} minus -2^{l+k+6} Σ r 2^{-6r} h_r",
                Residual::Poly(&lhs - &rhs1),
            ));
        }
        TheoremId::T4_1 | TheoremId::T4_6 => {
            let lhs = ing.top(&base)?;
            rep.checks.push(Check::new(
                "identity",
                "{Â exp(c/2) ch(Δ(V))} minus 2^{l+k} Σ 2^{-6r} h_r",
                Residual::Poly(&lhs - &rhs0),
            ));
        }
        TheoremId::T4_2 | TheoremId::T4_8 => {
            let bundle = |conv| -> Result<VirtualBundle, AnomalyError> {
                let l = ing.line_ch(conv)?;
                let b = if id == TheoremId::T4_2 {
                    t_t.try_add(&l)?.try_add(&l.exterior_power(2)?.scale_int(2))?.try_sub(&l.try_tensor(&l)?)?
                } else {
                    t_t.try_sub(&l)?
                };
                Ok(b.try_add(&v_t)?)
            };
            let lhs = |conv| -> Result<GradedPolynomial, AnomalyError> {
                ing.top(&(&base * &(bundle(conv)?.ch() - &w24)))
            };
            let (desc, alt) = if id == TheoremId::T4_2 {
                (
                    "{Â exp(c/2) ch(Δ(V)) ch[T̃ + L̃ + 2Λ²L̃ - L̃⊗L̃ + Ṽ - 24k]} minus -2^{l+k+6} Σ r 2^{-6r} h_r",
                    "line bundle taken unreduced (L instead of L̃)",
                )
            } else {
                (
                    "{Â exp(c/2) ch(Δ(V)) ch[T̃ - L̃ + Ṽ - 24k]} minus -2^{l+k+6} Σ r 2^{-6r} h_r",
                    "line bundle taken unreduced (L instead of L̃)",
                )
            };
            rep.checks.push(
                Check::new("identity", desc, Residual::Poly(&lhs(LineConvention::Reduced)? - &rhs1))
                    .with_variant(alt, Residual::Poly(&lhs(LineConvention::Unreduced)? - &rhs1)),
            );
        }
    }
    if s.kind == SettingKind::Spin4k {
        let x = ing.x_spin();
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        rep.checks.push(Check::new(
            "h0_formula",
            "h0 minus (-1)^k {Â ch(Δ(M)) + 2^{2k+1} Â}",
            Residual::Poly(&dec.h[0] - &ing.top(&x)?.scale_int(sign)),
        ));
        if dec.h.len() > 1 {
            let xv = ing.top(&(&x * &(v_t.ch() + &w24)))?;
            rep.checks.push(
                Check::new(
                    "h1_formula",
                    "h1 minus (-1)^{k+1} {(Â ch(Δ(M)) + 2^{2k+1} Â) ch(Ṽ + 24k)}",
                    Residual::Poly(&dec.h[1] - &xv.scale_int(-sign)),
                )
                .with_variant("opposite overall sign", Residual::Poly(&dec.h[1] + &xv.scale_int(-sign))),
            );
        }
    }
    if s.kind == SettingKind::Spinc4k2 {
        rep.checks.push(realness_check(&p1, "p1_real")?);
        rep.checks.push(realness_check(&p2, "p2_real")?);
    }
    rep.h = dec.h;
    Ok(rep)
}

fn realness_check(p: &PolySeries, name: &str) -> Result<Check, AnomalyError> {
    Ok(Check::new(
        name,
        "imaginary parts of the coefficients in the standard basis",
        Residual::Series(imaginary_part(p)),
    ))
}

/// The k = 2 and k = 3 specializations as printed, with `ch(T_C M)` in the
/// correction term; the variant replaces it by `ch(Ṽ_C) + 4k`.
fn corollary_check(ing: &Ingredients, lhs: &GradedPolynomial) -> Result<Check, AnomalyError> {
    let s = &ing.s;
    let l = s.l as i64;
    let x = ing.x_spin();
    let top_x = ing.top(&x)?;
    let with_t = ing.top(&(&x * ing.t.ch()))?;
    let with_v = ing.top(&(&x * &(ing.v.reduced().ch() + &ing.int(4 * s.k as i64))))?;
    let (a, b, desc) = if s.k == 2 {
        (pow2(l - 1).scale_rational(&crate::algebra::int(3)), -pow2(l - 4), "3·2^{l-1} {X} - 2^{l-4} {X ch(T_C M)}")
    } else {
        (-pow2(l - 1), pow2(l - 3), "-2^{l-1} {X} + 2^{l-3} {X ch(T_C M)}")
    };
    let rhs = |corr: &GradedPolynomial| &top_x.scale(&a) + &corr.scale(&b);
    Ok(Check::new(
        "corollary",
        &format!("left side minus {desc}, X = Â ch(Δ(M)) + 2^{{2k+1}} Â"),
        Residual::Poly(lhs - &rhs(&with_t)),
    )
    .with_variant("ch(T_C M) replaced by ch(Ṽ_C) + 4k", Residual::Poly(lhs - &rhs(&with_v))))
}

/// Theta path against bundle path at q^0, q^{1/2} and q^1 for P1, P2, P3.
/// The line-bundle convention for the Θ* object is the one written in its
/// definition (unreduced); the reduced reading is recorded as a variant.
pub fn cross_check_report(s: &Setting) -> Result<VerificationReport, AnomalyError> {
    let mut rep = VerificationReport::new("crosscheck");
    rep.setting = Some(*s);
    for which in PSeriesKind::ALL {
        for e in [0, 4, 8] {
            let printed = cross_check_bundle_expansion(s, which, e, LineConvention::Unreduced)?;
            let name = format!("{}@q^({e}/8)", which.name());
            let mut check = Check::new(&name, "theta path minus bundle path", Residual::Poly(printed.residual));
            if s.kind == SettingKind::Spinc4k2 {
                let reduced = cross_check_bundle_expansion(s, which, e, LineConvention::Reduced)?;
                check = check.with_variant("Θ* built from the reduced L̃", Residual::Poly(reduced.residual));
            }
            rep.checks.push(check);
        }
    }
    Ok(rep)
}

/// Structural identities: `P3(q^{1/2}) = P2(-q^{1/2})`, vanishing in the
/// degenerate k = 1 spin case, and realness in dimension 4k+2.
pub fn structural_report(s: &Setting) -> Result<VerificationReport, AnomalyError> {
    let mut rep = VerificationReport::new("structure");
    rep.setting = Some(*s);
    let p2 = build_p(s, PSeriesKind::P2)?;
    let p3 = build_p(s, PSeriesKind::P3)?;
    rep.checks.push(Check::new(
        "p3_sign_flip",
        "P3 minus P2 with q^{1/2} -> -q^{1/2}",
        Residual::Series(p3.try_sub(&p2.sign_flip()?)?),
    ));
    if s.kind == SettingKind::Spin4k && s.k == 1 {
        let ing = Ingredients::new(s)?;
        rep.checks.push(Check::new(
            "k1_vanishing",
            "{Â ch(Δ(M)) ch(Δ(V)) + 8 Â ch(Δ(V))}",
            Residual::Poly(ing.top(&(&ing.x_spin() * &ing.ch_dv))?),
        ));
        rep.checks.push(Check::new("k1_p2_vanishing", "P2", Residual::Series(p2.clone())));
    }
    if s.kind == SettingKind::Spinc4k2 {
        rep.checks.push(realness_check(&build_p(s, PSeriesKind::P1)?, "p1_real")?);
        rep.checks.push(realness_check(&p2, "p2_real")?);
        rep.checks.push(realness_check(&p3, "p3_real")?);
    }
    Ok(rep)
}

//! Multiplicative and additive characteristic classes over a family of
//! formal roots, expressed in the elementary generators `n_i = e_i(z^2)`.
//!
//! A product `∏_j f(z_j)` of an even factor with constant term 1 is computed
//! as `exp(Σ_m L_m p_m)`, where `log f = Σ_m L_m z^{2m}` and `p_m` is the
//! m-th power sum of the `z_j^2`, rewritten in the `n_i` by Newton's
//! identities with `n_i = 0` beyond the number of roots.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::newton::power_sums_from_elementary;
use crate::algebra::{AlgebraError, Family, GaussianRational, GradedPolynomial, PolyRing};
use crate::qseries::{PuiseuxSeries, ScalarSeries, SeriesError};
use crate::theta::{cos_mz, exp_imz, sin_mz, Parity, RootFactor, ThetaError};

pub type PolySeries = PuiseuxSeries<GradedPolynomial>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error("factor must be even in the root variable")]
    NotEven,
    #[error("factor must have constant term exactly 1")]
    NonUnitConstant,
    #[error("factor known through z^{have}, weight {need} requires z^{need}")]
    ZBoundTooSmall { have: u32, need: u32 },
    #[error("the ring has no generator `{0}`")]
    MissingGenerator(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RootFamily {
    pub family: Family,
    pub n_roots: u32,
}

impl RootFamily {
    pub fn new(family: Family, n_roots: u32) -> Self {
        RootFamily { family, n_roots }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SettingKind {
    /// Spin manifold of dimension `4k`.
    Spin4k,
    /// Spin^c manifold of dimension `4k`.
    Spinc4k,
    /// Spin^c manifold of dimension `4k+2`.
    Spinc4k2,
}

impl SettingKind {
    pub fn name(self) -> &'static str {
        match self {
            SettingKind::Spin4k => "spin4k",
            SettingKind::Spinc4k => "spinc4k",
            SettingKind::Spinc4k2 => "spinc4k2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassicalGenus {
    /// `∏ z/sin z`.
    AHat,
    /// `∏ 2z cot z`.
    LHat,
    /// `∏ 2cos z`, the character of the spinor bundle.
    SpinorCh,
    /// `e^{iu}`, i.e. `exp(c/2)`.
    ExpHalfC,
}

/// The `i`-th elementary generator of a family, or zero when the ring has
/// none (index beyond the root count or the weight bound).
fn elementary(ring: &PolyRing, fam: RootFamily, i: u32) -> GradedPolynomial {
    if i > fam.n_roots {
        return GradedPolynomial::zero(ring);
    }
    match ring.table().find(fam.family, i) {
        Some(idx) => GradedPolynomial::var(ring, idx),
        None => GradedPolynomial::zero(ring),
    }
}

/// Power sums `p_1..p_m` of the squared roots, `m = W/2`.
pub fn power_sums(ring: &PolyRing, fam: RootFamily) -> Vec<GradedPolynomial> {
    let m = ring.max_weight() / 2;
    let e: Vec<GradedPolynomial> = (1..=m).map(|i| elementary(ring, fam, i)).collect();
    power_sums_from_elementary(&e, fam.n_roots as usize, ring)
}

fn check_weight_generators(ring: &PolyRing, fam: RootFamily) -> Result<(), GenusError> {
    let needed = fam.n_roots.min(ring.max_weight() / 2);
    for i in 1..=needed {
        if ring.table().find(fam.family, i).is_none() {
            return Err(GenusError::MissingGenerator(format!("{:?} #{i}", fam.family)));
        }
    }
    Ok(())
}

/// `∏_{j=1}^{n} f(z_j)` in the family's generators, truncated at the ring's
/// weight bound.
pub fn prod_over_roots(f: &RootFactor, fam: RootFamily, ring: &PolyRing) -> Result<PolySeries, GenusError> {
    if f.parity() != Parity::Even {
        return Err(GenusError::NotEven);
    }
    let w = ring.max_weight();
    if f.z_bound() < w - w % 2 {
        return Err(GenusError::ZBoundTooSmall { have: f.z_bound(), need: w });
    }
    check_weight_generators(ring, fam)?;
    let qb = f.q_bound();
    if f.at_zero() != &ScalarSeries::one(&crate::algebra::Scalars, qb) {
        return Err(GenusError::NonUnitConstant);
    }
    let m_max = (w / 2) as usize;
    // a_m = [z^{2m}] f; L = log f via m a_m = Σ_j j L_j a_{m-j}
    let a: Vec<&ScalarSeries> = (0..=m_max).map(|m| &f.slices()[2 * m]).collect();
    let mut logs: Vec<ScalarSeries> = vec![ScalarSeries::zero(&crate::algebra::Scalars, qb)];
    for m in 1..=m_max {
        let mut acc = ScalarSeries::zero(&crate::algebra::Scalars, qb);
        for j in 1..m {
            let t = (&logs[j] * a[m - j]).scale(&GaussianRational::from_int(j as i64));
            acc = &acc + &t;
        }
        let lm = a[m] - &acc.scale(&GaussianRational::from_ratio(1, m as i64));
        logs.push(lm.truncate(qb));
    }
    let p = power_sums(ring, fam);
    let mut g = PolySeries::zero(ring, qb);
    for m in 1..=m_max {
        for (k, c) in logs[m].terms() {
            g.add_term(k, &p[m - 1].scale(c));
        }
    }
    Ok(exp_nilpotent(&g, m_max))
}

/// `exp(g)` for a series whose coefficients have no weight-0 part, so that
/// `g^j` vanishes for `j > max_power`.
fn exp_nilpotent(g: &PolySeries, max_power: usize) -> PolySeries {
    let ring = g.ring().clone();
    let mut out = PolySeries::one(&ring, g.bound());
    let mut term = PolySeries::one(&ring, g.bound());
    for j in 1..=max_power {
        term = (&term * g).scale(&GaussianRational::from_ratio(1, j as i64));
        if term.is_zero() {
            break;
        }
        out = &out + &term;
    }
    out.truncate(g.bound())
}

/// `Σ_j g(z_j)` for an even Taylor series `g`.
pub fn additive_over_roots(
    g: &[GaussianRational],
    fam: RootFamily,
    ring: &PolyRing,
) -> Result<GradedPolynomial, GenusError> {
    if g.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
        return Err(GenusError::NotEven);
    }
    check_weight_generators(ring, fam)?;
    let p = power_sums(ring, fam);
    let mut out = GradedPolynomial::constant(
        ring,
        &g.first().cloned().unwrap_or_else(GaussianRational::zero) * &GaussianRational::from_int(fam.n_roots as i64),
    );
    for (m, pm) in p.iter().enumerate() {
        if let Some(c) = g.get(2 * (m + 1)) {
            out = &out + &pm.scale(c);
        }
    }
    Ok(out)
}

/// `f(u)` for the weight-1 generator `var`; odd powers allowed.
pub fn eval_at_var(f: &RootFactor, var: &str, ring: &PolyRing) -> Result<PolySeries, GenusError> {
    let u = GradedPolynomial::generator(ring, var).map_err(|_| GenusError::MissingGenerator(var.to_string()))?;
    let w = ring.max_weight();
    if f.z_bound() < w {
        return Err(GenusError::ZBoundTooSmall { have: f.z_bound(), need: w });
    }
    let mut out = PolySeries::zero(ring, f.q_bound());
    let mut power = GradedPolynomial::one(ring);
    for d in 0..=w {
        for (k, c) in f.slice(d)?.terms() {
            out.add_term(k, &power.scale(c));
        }
        power = &power * &u;
    }
    Ok(out)
}

/// Evaluates a `q`-independent Taylor series at the generator `var`.
pub fn taylor_at_var(coeffs: &[GaussianRational], var: &str, ring: &PolyRing) -> Result<GradedPolynomial, GenusError> {
    let f = RootFactor::from_z_coefficients(coeffs, ring.max_weight(), 0);
    Ok(eval_at_var(&f, var, ring)?.coefficient(0)?)
}

/// `∏_j f(z_j)` for a `q`-independent even Taylor series with constant term 1.
pub fn taylor_over_roots(
    coeffs: &[GaussianRational],
    fam: RootFamily,
    ring: &PolyRing,
) -> Result<GradedPolynomial, GenusError> {
    let f = RootFactor::from_z_coefficients(coeffs, ring.max_weight(), 0);
    Ok(prod_over_roots(&f, fam, ring)?.coefficient(0)?)
}

/// Taylor coefficients of `z/sin z` through `z^n`.
pub fn z_over_sin(n: u32) -> Vec<GaussianRational> {
    let sinc: Vec<GaussianRational> = sin_mz(1, n + 1).into_iter().skip(1).collect();
    let f = RootFactor::from_z_coefficients(&sinc, n, 0).inverse().expect("sinc(0) = 1");
    f.q0_slice()
}

fn series_product(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|d| (0..=d).fold(GaussianRational::zero(), |acc, i| &acc + &(&a[i] * &b[d - i])))
        .collect()
}

pub fn classical_genus(kind: ClassicalGenus, fam: RootFamily, ring: &PolyRing) -> Result<GradedPolynomial, GenusError> {
    let w = ring.max_weight();
    let two_n = GaussianRational::from_int(2).pow(fam.n_roots);
    match kind {
        ClassicalGenus::AHat => taylor_over_roots(&z_over_sin(w), fam, ring),
        ClassicalGenus::LHat => {
            // 2z cot z = 2 · (z/sin z) · cos z
            let f = series_product(&z_over_sin(w), &cos_mz(1, w));
            Ok(taylor_over_roots(&f, fam, ring)?.scale(&two_n))
        }
        ClassicalGenus::SpinorCh => Ok(taylor_over_roots(&cos_mz(1, w), fam, ring)?.scale(&two_n)),
        ClassicalGenus::ExpHalfC => {
            let var = ring
                .table()
                .find(Family::U, 1)
                .map(|i| ring.table().generators()[i].name.clone())
                .ok_or_else(|| GenusError::MissingGenerator("u".into()))?;
            taylor_at_var(&exp_imz(1, w), &var, ring)
        }
    }
}

/// The substitution imposed by a setting's anomaly condition, if the ring
/// carries the generator it acts on.
pub fn constraint(kind: SettingKind, ring: &PolyRing) -> Result<Option<(String, GradedPolynomial)>, GenusError> {
    let table = ring.table();
    let name_of = |fam, i| table.find(fam, i).map(|idx| table.generators()[idx].name.clone());
    let var = |fam, i| table.find(fam, i).map(|idx| GradedPolynomial::var(ring, idx));
    let n1_v = var(Family::V, 1).unwrap_or_else(|| GradedPolynomial::zero(ring));
    let u_sq = |c: i64| -> Result<GradedPolynomial, GenusError> {
        let u = var(Family::U, 1).ok_or_else(|| GenusError::MissingGenerator("u".into()))?;
        Ok((&u * &u).scale_int(c))
    };
    Ok(match kind {
        SettingKind::Spin4k => name_of(Family::V, 1).map(|n| (n, GradedPolynomial::zero(ring))),
        SettingKind::Spinc4k => match name_of(Family::TM, 1) {
            Some(n) => Some((n, &u_sq(3)? + &n1_v)),
            None => None,
        },
        SettingKind::Spinc4k2 => match name_of(Family::TM, 1) {
            Some(n) => Some((n, &u_sq(1)? + &n1_v)),
            None => None,
        },
    })
}

pub fn apply_constraint(p: &GradedPolynomial, kind: SettingKind) -> Result<GradedPolynomial, GenusError> {
    match constraint(kind, p.ring())? {
        Some((name, repl)) => Ok(p.substitute(&name, &repl)?),
        None => Ok(p.clone()),
    }
}

pub fn apply_constraint_series(p: &PolySeries, kind: SettingKind) -> Result<PolySeries, GenusError> {
    match constraint(kind, p.ring())? {
        Some((name, repl)) => p.try_map(p.ring(), |c| c.substitute(&name, &repl)).map_err(GenusError::from),
        None => Ok(p.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GeneratorTable;
    use crate::theta::{build_theta_factor, FactorKind};

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn ring(tm: u32, v: u32, u: bool, w: u32) -> PolyRing {
        PolyRing::new(GeneratorTable::normalized(tm, v, u), w)
    }

    fn tm(n: u32) -> RootFamily {
        RootFamily::new(Family::TM, n)
    }

    #[test]
    fn product_of_one_plus_square() {
        let r = ring(2, 0, false, 4);
        let f = RootFactor::from_z_coefficients(&[gr(1, 1), gr(0, 1), gr(1, 1)], 4, 0);
        let p = prod_over_roots(&f, tm(2), &r).unwrap().coefficient(0).unwrap();
        assert_eq!(p.to_string(), "1 + n1_TM + n2_TM");
    }

    #[test]
    fn a_hat_weight_two() {
        let r = ring(2, 0, false, 4);
        let a = classical_genus(ClassicalGenus::AHat, tm(2), &r).unwrap();
        assert_eq!(a.component(2).to_string(), "1/6*n1_TM");
        assert_eq!(a.component(2).to_standard_basis().to_string(), "-1/24*p1_TM");
        let theta_a = build_theta_factor(FactorKind::A, 8, 4);
        let q0 = prod_over_roots(&theta_a, tm(4), &ring(2, 0, false, 4)).unwrap().coefficient(0).unwrap();
        assert_eq!(q0.component(2).to_string(), "1/6*n1_TM");
    }

    #[test]
    fn cosine_single_root() {
        let r = ring(2, 0, false, 4);
        let p = taylor_over_roots(&cos_mz(1, 4), tm(1), &r).unwrap();
        assert_eq!(p.to_string(), "1 - 1/2*n1_TM + 1/24*n1_TM^2");
    }

    #[test]
    fn l_hat_single_root() {
        let r = ring(1, 0, false, 2);
        let p = classical_genus(ClassicalGenus::LHat, tm(1), &r).unwrap();
        assert_eq!(p.to_string(), "2 - 2/3*n1_TM");
    }

    #[test]
    fn spinor_rank() {
        let r = ring(0, 3, false, 4);
        let p = classical_genus(ClassicalGenus::SpinorCh, RootFamily::new(Family::V, 3), &r).unwrap();
        assert_eq!(p.component(0).to_string(), "8");
    }

    #[test]
    fn additive_examples() {
        let r = ring(2, 0, false, 4);
        assert_eq!(additive_over_roots(&[gr(1, 1)], tm(4), &r).unwrap().to_string(), "4");
        let z2 = [gr(0, 1), gr(0, 1), gr(1, 1)];
        assert_eq!(additive_over_roots(&z2, tm(4), &r).unwrap().to_string(), "n1_TM");
        let mut c = cos_mz(2, 4).iter().map(|x| x.scale_rational(&crate::algebra::int(2))).collect::<Vec<_>>();
        c[0] = &c[0] - &gr(2, 1);
        let p = additive_over_roots(&c, tm(4), &r).unwrap();
        assert_eq!(p.component(2).to_string(), "-4*n1_TM");
    }

    #[test]
    fn evaluation_at_u() {
        let r = ring(0, 0, true, 3);
        let t2 = build_theta_factor(FactorKind::T2, 8, 3);
        assert_eq!(eval_at_var(&t2, "u", &r).unwrap().coefficient(0).unwrap().to_string(), "1");
        let d = build_theta_factor(FactorKind::D, 8, 3);
        let s = eval_at_var(&d, "u", &r).unwrap().coefficient(0).unwrap();
        assert_eq!(s.to_string(), "u - 1/6*u^3");
        let id = s.scale(&GaussianRational::i()).to_standard_basis();
        assert!(id.is_real());
        assert_eq!(id.to_string(), "1/2*c + 1/48*c^3");
    }

    #[test]
    fn exp_half_c() {
        let r = ring(0, 0, true, 2);
        let e = classical_genus(ClassicalGenus::ExpHalfC, RootFamily::new(Family::U, 1), &r).unwrap();
        assert_eq!(e.to_standard_basis().to_string(), "1 + 1/2*c + 1/8*c^2");
    }

    #[test]
    fn rejects_bad_factors() {
        let r = ring(1, 0, false, 2);
        let odd = build_theta_factor(FactorKind::D, 8, 2);
        assert_eq!(prod_over_roots(&odd, tm(1), &r), Err(GenusError::NotEven));
        let two = RootFactor::from_z_coefficients(&[gr(2, 1)], 2, 0);
        assert_eq!(prod_over_roots(&two, tm(1), &r), Err(GenusError::NonUnitConstant));
    }

    #[test]
    fn constraints() {
        let r = ring(2, 2, true, 4);
        let n1v = GradedPolynomial::generator(&r, "n1_V").unwrap();
        let n1t = GradedPolynomial::generator(&r, "n1_TM").unwrap();
        let u = GradedPolynomial::generator(&r, "u").unwrap();
        assert!(apply_constraint(&n1v, SettingKind::Spin4k).unwrap().is_zero());
        let x = &n1t - &(&u * &u).scale_int(3);
        assert_eq!(apply_constraint(&x, SettingKind::Spinc4k).unwrap(), n1v);
        let sq = apply_constraint(&(&n1t * &n1t), SettingKind::Spinc4k2).unwrap();
        let expect = &(&u * &u) + &n1v;
        assert_eq!(sq, &expect * &expect);
    }

    #[test]
    fn multiplicativity() {
        let r = ring(3, 0, false, 6);
        let a = build_theta_factor(FactorKind::A, 16, 6);
        let t1 = build_theta_factor(FactorKind::T1, 16, 6);
        let fam = tm(3);
        let lhs = prod_over_roots(&a.mul(&t1), fam, &r).unwrap();
        let rhs = &prod_over_roots(&a, fam, &r).unwrap() * &prod_over_roots(&t1, fam, &r).unwrap();
        assert_eq!(lhs, rhs);
    }
}

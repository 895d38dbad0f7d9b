//! Level-2 modular forms: the `δ/ε` generators, the weight-`2k` bases over
//! `Γ0(2)` and `Γ^0(2)`, and the triangular decomposition of a q-series in
//! the `Γ^0(2)` basis.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::BigInt;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Coefficient, GaussianRational, GradedPolynomial, Scalars};
use crate::qseries::{PuiseuxSeries, ScalarSeries, SeriesError, HALF};
use crate::theta::{theta_null, NullKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModformError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("basis index r = {r} is outside 0..={max} for k = {k}")]
    IndexOutOfRange { k: u32, r: u32, max: u32 },
    #[error("order q^({have}/8) is too small; at least q^({need}/8) is required")]
    InsufficientOrder { have: i64, need: i64 },
    #[error("expected {expected} coefficients h_r, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("weight must be positive")]
    ZeroWeight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaEps {
    Delta1,
    Eps1,
    Delta2,
    Eps2,
}

impl DeltaEps {
    pub fn name(self) -> &'static str {
        match self {
            DeltaEps::Delta1 => "delta1",
            DeltaEps::Eps1 => "eps1",
            DeltaEps::Delta2 => "delta2",
            DeltaEps::Eps2 => "eps2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Group {
    /// `Γ0(2)`, generated by `δ1, ε1`.
    Gamma0,
    /// `Γ^0(2)`, generated by `δ2, ε2`.
    GammaUpper0,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModularBasisElement {
    pub group: Group,
    pub k: u32,
    pub r: u32,
    pub series: ScalarSeries,
}

/// Fourth power of a null value, with the stripped constant restored for `θ1`.
fn fourth_power(kind: NullKind, q_bound: i64) -> ScalarSeries {
    let t = theta_null(kind, q_bound).pow(4).expect("non-negative power");
    if kind == NullKind::Theta1 {
        t.scale(&GaussianRational::from_int(16))
    } else {
        t
    }
}

/// Memoized per `(which, q_bound)`.
pub fn delta_eps(which: DeltaEps, q_bound: i64) -> ScalarSeries {
    static CACHE: OnceLock<Mutex<HashMap<(DeltaEps, i64), ScalarSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("cache lock").get(&(which, q_bound)) {
        return s.clone();
    }
    let s = compute_delta_eps(which, q_bound);
    cache.lock().expect("cache lock").insert((which, q_bound), s.clone());
    s
}

fn compute_delta_eps(which: DeltaEps, q_bound: i64) -> ScalarSeries {
    let t1 = || fourth_power(NullKind::Theta1, q_bound);
    let t2 = || fourth_power(NullKind::Theta2, q_bound);
    let t3 = || fourth_power(NullKind::Theta3, q_bound);
    let s = match which {
        DeltaEps::Delta1 => (&t2() + &t3()).scale(&GaussianRational::from_ratio(1, 8)),
        DeltaEps::Eps1 => (&t2() * &t3()).scale(&GaussianRational::from_ratio(1, 16)),
        DeltaEps::Delta2 => (&t1() + &t3()).scale(&GaussianRational::from_ratio(-1, 8)),
        DeltaEps::Eps2 => (&t1() * &t3()).scale(&GaussianRational::from_ratio(1, 16)),
    };
    s.truncate(q_bound)
}

/// `(8δ)^{k-2r} ε^r` for the group's generators.
pub fn basis_element(group: Group, k: u32, r: u32, q_bound: i64) -> Result<ModularBasisElement, ModformError> {
    if r > k / 2 {
        return Err(ModformError::IndexOutOfRange { k, r, max: k / 2 });
    }
    let (d, e) = match group {
        Group::Gamma0 => (DeltaEps::Delta1, DeltaEps::Eps1),
        Group::GammaUpper0 => (DeltaEps::Delta2, DeltaEps::Eps2),
    };
    let eight_delta = delta_eps(d, q_bound).scale(&GaussianRational::from_int(8));
    let series = &eight_delta.pow((k - 2 * r) as i64)? * &delta_eps(e, q_bound).pow(r as i64)?;
    Ok(ModularBasisElement { group, k, r, series: series.truncate(q_bound) })
}

/// Outcome of [`decompose`].
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<C: Coefficient = GradedPolynomial> {
    pub h: Vec<C>,
    pub residual: PuiseuxSeries<C>,
    /// Row `r` expresses `h_r` in the `q^{j/2}` coefficients of the input.
    pub solve_coeffs: Vec<Vec<BigInt>>,
    pub integral: bool,
}

impl<C: Coefficient> Decomposition<C> {
    pub fn to_json(&self) -> Value {
        json!({
            "h": self.h.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "residual_zero": self.residual.is_zero(),
            "solve_coeffs": self.solve_coeffs.iter()
                .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// Smallest order bound (lattice units) accepted by [`decompose`].
pub fn min_decompose_bound(k: u32) -> i64 {
    8 * (k as i64 / 2 + 1)
}

/// Integer matrix inverting the triangular system `B[j][r] = [q^{j/2}] b_r`.
fn solve_matrix(basis: &[ScalarSeries]) -> Result<(Vec<Vec<BigInt>>, bool), ModformError> {
    let n = basis.len();
    let mut rows: Vec<Vec<GaussianRational>> = Vec::with_capacity(n);
    for r in 0..n {
        // h_r = (c_r - sum_{s<r} h_s B[r][s]) / B[r][r], as a row over c_0..c_{n-1}
        let lead = basis[r].coefficient(HALF * r as i64)?;
        let lead_inv = lead.inverse().expect("triangular basis has unit leading terms");
        let mut row = vec![GaussianRational::zero(); n];
        row[r] = GaussianRational::one();
        for s in 0..r {
            let b = basis[s].coefficient(HALF * r as i64)?;
            for j in 0..n {
                let t = &rows[s][j] * &b;
                row[j] -= &t;
            }
        }
        rows.push(row.iter().map(|c| c * &lead_inv).collect());
    }
    let mut integral = true;
    let ints = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| {
                    c.as_integer().unwrap_or_else(|| {
                        integral = false;
                        BigInt::from(0)
                    })
                })
                .collect()
        })
        .collect();
    Ok((ints, integral))
}

/// The integer matrix expressing each `h_r` through the `q^{j/2}`
/// coefficients of a weight-`2k` form, and whether it is integral.
pub fn solve_coefficients(k: u32) -> Result<(Vec<Vec<BigInt>>, bool), ModformError> {
    if k == 0 {
        return Err(ModformError::ZeroWeight);
    }
    let q_bound = min_decompose_bound(k);
    let basis: Vec<ScalarSeries> = (0..=k / 2)
        .map(|r| basis_element(Group::GammaUpper0, k, r, q_bound).map(|b| b.series))
        .collect::<Result<_, _>>()?;
    solve_matrix(&basis)
}

/// Writes `P` in the basis `(8δ2)^{k-2r} ε2^r`, solving for `h_r` from the
/// `q^{r/2}` coefficients and reporting the residual to the full order.
pub fn decompose<C: Coefficient>(
    p: &PuiseuxSeries<C>,
    k: u32,
    q_bound: i64,
) -> Result<Decomposition<C>, ModformError> {
    if k == 0 {
        return Err(ModformError::ZeroWeight);
    }
    let q_bound = q_bound.min(p.bound());
    let need = min_decompose_bound(k);
    if q_bound < need {
        return Err(ModformError::InsufficientOrder { have: q_bound, need });
    }
    p.check_lattice(HALF)?;
    let basis: Vec<ScalarSeries> = (0..=k / 2)
        .map(|r| basis_element(Group::GammaUpper0, k, r, q_bound).map(|b| b.series))
        .collect::<Result<_, _>>()?;
    let mut rest = p.truncate(q_bound);
    let mut h = Vec::with_capacity(basis.len());
    for (r, b) in basis.iter().enumerate() {
        let lead = b.coefficient(HALF * r as i64)?;
        let hr = rest.coefficient(HALF * r as i64)?.scale(&lead.inverse().expect("unit leading term"));
        let term = PuiseuxSeries::from_terms(rest.ring(), [(0, hr.clone())], q_bound).mul_scalar_series(b);
        rest = rest.try_sub(&term)?;
        h.push(hr);
    }
    let (solve_coeffs, integral) = solve_matrix(&basis)?;
    Ok(Decomposition { h, residual: rest, solve_coeffs, integral })
}

/// Residual of `P1 - 2^l Σ_r h_r (8δ1)^{k-2r} ε1^r`.
pub fn transfer_check<C: Coefficient>(
    p1: &PuiseuxSeries<C>,
    h: &[C],
    l: u32,
    k: u32,
    q_bound: i64,
) -> Result<PuiseuxSeries<C>, ModformError> {
    let expected = k as usize / 2 + 1;
    if h.len() != expected {
        return Err(ModformError::LengthMismatch { expected, got: h.len() });
    }
    let q_bound = q_bound.min(p1.bound());
    let mut rest = p1.truncate(q_bound);
    let two_l = GaussianRational::from_int(2).pow(l);
    for (r, hr) in h.iter().enumerate() {
        let b = basis_element(Group::Gamma0, k, r as u32, q_bound)?.series;
        let term = PuiseuxSeries::from_terms(rest.ring(), [(0, hr.scale(&two_l))], q_bound).mul_scalar_series(&b);
        rest = rest.try_sub(&term)?;
    }
    Ok(rest)
}

/// Sum `Σ h_r b_r` for given scalar `h_r` (used to build test inputs).
pub fn reconstruct(h: &[GaussianRational], k: u32, q_bound: i64) -> Result<ScalarSeries, ModformError> {
    let mut acc = ScalarSeries::zero(&Scalars, q_bound);
    for (r, hr) in h.iter().enumerate() {
        let b = basis_element(Group::GammaUpper0, k, r as u32, q_bound)?;
        acc = &acc + &b.series.scale(hr);
    }
    Ok(acc)
}

//! Jacobi theta functions as truncated q-expansions.
//!
//! Everything is written in the rescaled variable `z = πv`, so that
//! `e^{2π√-1 v} = e^{2iz}` and no factor of `π` ever appears. Overall
//! constants are stripped as follows:
//!
//! * `θ1(0,τ) = 2 · q^{1/8} ∏(1-q^j)(1+q^j)^2`, returned without the `2`;
//! * `θ'(0,τ) = 2π · q^{1/8} ∏(1-q^j)^3`, returned without the `2π`.
//!
//! The per-root factors are
//!
//! * `A(z)  = z θ'(0)/θ(z)`      (even, `z/sin z` at `q = 0`),
//! * `T_i(z) = θ_i(z)/θ_i(0)`    (even, `cos z`, `1`, `1` at `q = 0`),
//! * `D(z)  = π θ(z)/θ'(0)`      (odd, `sin z` at `q = 0`, and `A·D = z`).

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{GaussianRational, Scalars};
use crate::qseries::{ScalarSeries, SeriesError, HALF, UNITS_PER_Q};

/// Environment variable naming a directory for the on-disk factor cache.
pub const CACHE_ENV: &str = "THETA_ANOMALY_CACHE";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThetaError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("z-degree {degree} is beyond the factor's bound {bound}")]
    BeyondZBound { degree: u32, bound: u32 },
    #[error("unknown theta object `{0}`")]
    UnknownKind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorKind {
    A,
    T1,
    T2,
    T3,
    D,
}

impl FactorKind {
    pub const ALL: [FactorKind; 5] = [FactorKind::A, FactorKind::T1, FactorKind::T2, FactorKind::T3, FactorKind::D];

    pub fn name(self) -> &'static str {
        match self {
            FactorKind::A => "A",
            FactorKind::T1 => "T1",
            FactorKind::T2 => "T2",
            FactorKind::T3 => "T3",
            FactorKind::D => "D",
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FactorKind {
    type Err = ThetaError;
    fn from_str(s: &str) -> Result<Self, ThetaError> {
        FactorKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ThetaError::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NullKind {
    Theta1,
    Theta2,
    Theta3,
    /// `θ'(0,τ)` with `2π` stripped.
    ThetaPrime,
}

impl NullKind {
    pub const ALL: [NullKind; 4] = [NullKind::Theta1, NullKind::Theta2, NullKind::Theta3, NullKind::ThetaPrime];

    pub fn name(self) -> &'static str {
        match self {
            NullKind::Theta1 => "theta1-null",
            NullKind::Theta2 => "theta2-null",
            NullKind::Theta3 => "theta3-null",
            NullKind::ThetaPrime => "theta-prime-null",
        }
    }
}

impl FromStr for NullKind {
    type Err = ThetaError;
    fn from_str(s: &str) -> Result<Self, ThetaError> {
        NullKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ThetaError::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// A truncated series in one root variable `z` whose coefficients are
/// q-series: slice `d` holds the coefficient of `z^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootFactor {
    slices: Vec<ScalarSeries>,
    z_bound: u32,
    q_bound: i64,
    parity: Parity,
}

fn parity_of(slices: &[ScalarSeries]) -> Parity {
    let even = slices.iter().step_by(2).any(|s| !s.is_zero());
    let odd = slices.iter().skip(1).step_by(2).any(|s| !s.is_zero());
    match (even, odd) {
        (_, false) => Parity::Even,
        (false, true) => Parity::Odd,
        (true, true) => Parity::Mixed,
    }
}

impl RootFactor {
    pub fn from_slices(mut slices: Vec<ScalarSeries>, z_bound: u32, q_bound: i64) -> Self {
        slices.resize(z_bound as usize + 1, ScalarSeries::zero(&Scalars, q_bound));
        slices.truncate(z_bound as usize + 1);
        let slices: Vec<ScalarSeries> = slices.into_iter().map(|s| s.truncate(q_bound)).collect();
        let q_bound = slices.iter().map(|s| s.bound()).min().unwrap_or(q_bound);
        let parity = parity_of(&slices);
        RootFactor { slices, z_bound, q_bound, parity }
    }

    /// A factor constant in `q`, from its Taylor coefficients in `z`.
    pub fn from_z_coefficients(coeffs: &[GaussianRational], z_bound: u32, q_bound: i64) -> Self {
        let slices = coeffs
            .iter()
            .map(|c| ScalarSeries::monomial(&Scalars, 0, c.clone(), q_bound))
            .collect();
        Self::from_slices(slices, z_bound, q_bound)
    }

    pub fn one(z_bound: u32, q_bound: i64) -> Self {
        Self::from_z_coefficients(&[GaussianRational::one()], z_bound, q_bound)
    }

    pub fn z_bound(&self) -> u32 {
        self.z_bound
    }

    pub fn q_bound(&self) -> i64 {
        self.q_bound
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn slices(&self) -> &[ScalarSeries] {
        &self.slices
    }

    pub fn slice(&self, d: u32) -> Result<&ScalarSeries, ThetaError> {
        self.slices
            .get(d as usize)
            .ok_or(ThetaError::BeyondZBound { degree: d, bound: self.z_bound })
    }

    pub fn coefficient(&self, d: u32, k: i64) -> Result<GaussianRational, ThetaError> {
        Ok(self.slice(d)?.coefficient(k)?)
    }

    /// The `q^0` coefficients as a Taylor series in `z`.
    pub fn q0_slice(&self) -> Vec<GaussianRational> {
        self.slices
            .iter()
            .map(|s| s.coefficient(0).expect("q^0 is always within bound"))
            .collect()
    }

    /// The constant term in `z` as a q-series.
    pub fn at_zero(&self) -> &ScalarSeries {
        &self.slices[0]
    }

    pub fn mul(&self, rhs: &RootFactor) -> RootFactor {
        let zb = self.z_bound.min(rhs.z_bound);
        let qb = self.q_bound.min(rhs.q_bound);
        let mut out = Vec::with_capacity(zb as usize + 1);
        for d in 0..=zb as usize {
            let mut acc = ScalarSeries::zero(&Scalars, qb);
            for i in 0..=d {
                if self.slices[i].is_zero() || rhs.slices[d - i].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.slices[i] * &rhs.slices[d - i]);
            }
            out.push(acc.truncate(qb));
        }
        Self::from_slices(out, zb, qb)
    }

    pub fn inverse(&self) -> Result<RootFactor, ThetaError> {
        let g0 = self.slices[0].inverse()?;
        let qb = g0.bound().min(self.q_bound);
        let mut out: Vec<ScalarSeries> = vec![g0.truncate(qb)];
        for d in 1..=self.z_bound as usize {
            let mut acc = ScalarSeries::zero(&Scalars, qb);
            for i in 1..=d {
                if self.slices[i].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.slices[i] * &out[d - i]);
            }
            out.push((&-&acc * &out[0]).truncate(qb));
        }
        Ok(Self::from_slices(out, self.z_bound, qb))
    }

    pub fn scale(&self, c: &GaussianRational) -> RootFactor {
        let slices = self.slices.iter().map(|s| s.scale(c)).collect();
        Self::from_slices(slices, self.z_bound, self.q_bound)
    }

    /// `q^{1/2} -> -q^{1/2}` applied slice by slice.
    pub fn sign_flip(&self) -> Result<RootFactor, ThetaError> {
        let slices = self.slices.iter().map(|s| s.sign_flip()).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_slices(slices, self.z_bound, self.q_bound))
    }

    pub fn truncate(&self, z_bound: u32, q_bound: i64) -> RootFactor {
        Self::from_slices(self.slices.clone(), z_bound.min(self.z_bound), q_bound.min(self.q_bound))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "z_bound": self.z_bound,
            "q_bound": self.q_bound,
            "parity": self.parity,
            "slices": self.slices.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        })
    }

    fn from_json(v: &Value) -> Option<RootFactor> {
        let z_bound = v.get("z_bound")?.as_u64()? as u32;
        let q_bound = v.get("q_bound")?.as_i64()?;
        let mut slices = Vec::new();
        for s in v.get("slices")?.as_array()? {
            let mut terms = Vec::new();
            for pair in s.as_array()? {
                let k = pair.get(0)?.as_i64()?;
                let c: GaussianRational = pair.get(1)?.as_str()?.parse().ok()?;
                terms.push((k, c));
            }
            slices.push(ScalarSeries::from_terms(&Scalars, terms, q_bound));
        }
        (slices.len() == z_bound as usize + 1).then(|| Self::from_slices(slices, z_bound, q_bound))
    }
}

impl fmt::Display for RootFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, s) in self.slices.iter().enumerate() {
            if !s.is_zero() {
                writeln!(f, "z^{d}: {s}")?;
            }
        }
        write!(f, "O(z^{})", self.z_bound + 1)
    }
}

fn factorial(n: u32) -> GaussianRational {
    GaussianRational::from_int((1..=n as i64).product())
}

/// Taylor coefficients of `e^{imz}` through `z^z_bound`.
pub fn exp_imz(m: i64, z_bound: u32) -> Vec<GaussianRational> {
    let im = GaussianRational::new(crate::algebra::int(0), crate::algebra::int(m));
    (0..=z_bound)
        .map(|n| &im.pow(n) * &factorial(n).inverse().expect("nonzero factorial"))
        .collect()
}

/// Taylor coefficients of `cos(mz)`.
pub fn cos_mz(m: i64, z_bound: u32) -> Vec<GaussianRational> {
    let plus = exp_imz(m, z_bound);
    let minus = exp_imz(-m, z_bound);
    let half = GaussianRational::from_ratio(1, 2);
    plus.iter().zip(&minus).map(|(a, b)| &(a + b) * &half).collect()
}

/// Taylor coefficients of `sin(mz)`.
pub fn sin_mz(m: i64, z_bound: u32) -> Vec<GaussianRational> {
    let plus = exp_imz(m, z_bound);
    let minus = exp_imz(-m, z_bound);
    let minus_half_i = GaussianRational::new(crate::algebra::int(0), crate::algebra::ratio(-1, 2));
    plus.iter().zip(&minus).map(|(a, b)| &(a - b) * &minus_half_i).collect()
}

/// `2cos 2z = e^{2iz} + e^{-2iz}`; asserted real.
fn two_cos_2z(z_bound: u32) -> Vec<GaussianRational> {
    let plus = exp_imz(2, z_bound);
    let minus = exp_imz(-2, z_bound);
    let c: Vec<GaussianRational> = plus.iter().zip(&minus).map(|(a, b)| a + b).collect();
    assert!(c.iter().all(GaussianRational::is_real), "conjugate pairing must be real");
    c
}

/// `1 + s·(2cos 2z)·q^a + q^{2a}`, exponent `a` in lattice units.
fn pair_factor(sign: i64, a: i64, z_bound: u32, q_bound: i64) -> RootFactor {
    let c = two_cos_2z(z_bound);
    let s = GaussianRational::from_int(sign);
    let slices = c
        .iter()
        .enumerate()
        .map(|(d, cd)| {
            let mut terms = vec![(a, &s * cd)];
            if d == 0 {
                terms.push((0, GaussianRational::one()));
                terms.push((2 * a, GaussianRational::one()));
            }
            ScalarSeries::from_terms(&Scalars, terms, q_bound)
        })
        .collect();
    RootFactor::from_slices(slices, z_bound, q_bound)
}

/// `1 + s·q^a` as a scalar series.
fn binomial(sign: i64, a: i64, q_bound: i64) -> ScalarSeries {
    ScalarSeries::from_terms(
        &Scalars,
        [(0, GaussianRational::one()), (a, GaussianRational::from_int(sign))],
        q_bound,
    )
}

/// Exponents (lattice units) of the `j`-th factor for `j = 1..=j_max`:
/// `q^j` for integral strings, `q^{j-1/2}` for half-integral ones.
fn exponents(half: bool, j_max: i64) -> impl Iterator<Item = i64> {
    (1..=j_max).map(move |j| if half { (2 * j - 1) * HALF } else { j * UNITS_PER_Q })
}

/// Number of product factors used for a given order: one more than the
/// last factor that can still contribute.
pub fn factor_count(q_bound: i64) -> i64 {
    q_bound.div_euclid(UNITS_PER_Q) + 2
}

fn scalar_product(q_bound: i64, factors: impl Iterator<Item = (ScalarSeries, i64)>) -> ScalarSeries {
    let mut acc = ScalarSeries::one(&Scalars, q_bound);
    for (f, power) in factors {
        acc = &acc * &f.pow(power).expect("binomial powers are exact");
    }
    acc.truncate(q_bound)
}

/// Null values with the constants of the module docs stripped.
pub fn theta_null(kind: NullKind, q_bound: i64) -> ScalarSeries {
    theta_null_with(kind, q_bound, factor_count(q_bound))
}

fn theta_null_with(kind: NullKind, q_bound: i64, j_max: i64) -> ScalarSeries {
    let euler = || exponents(false, j_max).map(|a| (binomial(-1, a, q_bound), 1));
    let prod = match kind {
        NullKind::Theta1 => scalar_product(
            q_bound,
            euler().chain(exponents(false, j_max).map(|a| (binomial(1, a, q_bound), 2))),
        ),
        NullKind::Theta2 => scalar_product(
            q_bound,
            euler().chain(exponents(true, j_max).map(|a| (binomial(-1, a, q_bound), 2))),
        ),
        NullKind::Theta3 => scalar_product(
            q_bound,
            euler().chain(exponents(true, j_max).map(|a| (binomial(1, a, q_bound), 2))),
        ),
        NullKind::ThetaPrime => {
            scalar_product(q_bound, exponents(false, j_max).map(|a| (binomial(-1, a, q_bound), 3)))
        }
    };
    match kind {
        NullKind::Theta1 | NullKind::ThetaPrime => {
            let q8 = ScalarSeries::monomial(&Scalars, 1, GaussianRational::one(), q_bound);
            (&q8 * &prod).truncate(q_bound)
        }
        _ => prod,
    }
}

/// Residual of `θ'(0) = π θ1(0) θ2(0) θ3(0)` with all constants cancelled.
pub fn jacobi_check(q_bound: i64) -> ScalarSeries {
    jacobi_residual(
        &theta_null(NullKind::ThetaPrime, q_bound),
        &theta_null(NullKind::Theta1, q_bound),
        &theta_null(NullKind::Theta2, q_bound),
        &theta_null(NullKind::Theta3, q_bound),
    )
}

/// The Jacobi residual for explicitly supplied (reduced) null values.
pub fn jacobi_residual(
    theta_prime: &ScalarSeries,
    theta1: &ScalarSeries,
    theta2: &ScalarSeries,
    theta3: &ScalarSeries,
) -> ScalarSeries {
    theta_prime - &(&(theta1 * theta2) * theta3)
}

fn build_with(kind: FactorKind, q_bound: i64, z_bound: u32, j_max: i64) -> RootFactor {
    let pairs = |sign: i64, half: bool| {
        let mut acc = RootFactor::one(z_bound, q_bound);
        for a in exponents(half, j_max) {
            acc = acc.mul(&pair_factor(sign, a, z_bound, q_bound));
        }
        acc
    };
    let scalars = |sign: i64, half: bool, power: i64| {
        scalar_product(q_bound, exponents(half, j_max).map(|a| (binomial(sign, a, q_bound), power)))
    };
    let lift = |s: ScalarSeries| RootFactor::from_slices(vec![s], z_bound, q_bound);
    let inv = |f: RootFactor| f.inverse().expect("unit constant term");
    match kind {
        FactorKind::A => {
            // z/sin z = 1/(sin z / z)
            let sinc: Vec<GaussianRational> = sin_mz(1, z_bound + 1).into_iter().skip(1).collect();
            let z_over_sin = inv(RootFactor::from_z_coefficients(&sinc, z_bound, q_bound));
            z_over_sin.mul(&lift(scalars(-1, false, 2))).mul(&inv(pairs(-1, false)))
        }
        FactorKind::T1 => RootFactor::from_z_coefficients(&cos_mz(1, z_bound), z_bound, q_bound)
            .mul(&pairs(1, false))
            .mul(&lift(scalars(1, false, -2))),
        FactorKind::T2 => pairs(-1, true).mul(&lift(scalars(-1, true, -2))),
        FactorKind::T3 => pairs(1, true).mul(&lift(scalars(1, true, -2))),
        FactorKind::D => RootFactor::from_z_coefficients(&sin_mz(1, z_bound), z_bound, q_bound)
            .mul(&pairs(-1, false))
            .mul(&lift(scalars(-1, false, -2))),
    }
}

/// Builds a factor without consulting any cache.
pub fn build_theta_factor(kind: FactorKind, q_bound: i64, z_bound: u32) -> RootFactor {
    build_with(kind, q_bound, z_bound, factor_count(q_bound))
}

/// True when one more product factor leaves the factor unchanged.
pub fn factor_count_sufficient(kind: FactorKind, q_bound: i64, z_bound: u32) -> bool {
    let n = factor_count(q_bound);
    build_with(kind, q_bound, z_bound, n) == build_with(kind, q_bound, z_bound, n + 1)
}

type CacheKey = (FactorKind, i64, u32);

fn memory_cache() -> &'static Mutex<HashMap<CacheKey, Arc<RootFactor>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<RootFactor>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn disk_path((kind, q_bound, z_bound): CacheKey) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(PathBuf::from(dir).join(format!("{}-q{}-z{}.json", kind.name(), q_bound, z_bound)))
}

fn load_from_disk(key: CacheKey) -> Option<RootFactor> {
    let text = std::fs::read_to_string(disk_path(key)?).ok()?;
    let value: Value = serde_json::from_str(&text).ok()?;
    RootFactor::from_json(&value).filter(|f| f.q_bound == key.1 && f.z_bound == key.2)
}

fn store_on_disk(key: CacheKey, factor: &RootFactor) {
    let Some(path) = disk_path(key) else { return };
    if let Some(dir) = path.parent() {
        if std::fs::create_dir_all(dir).is_err() {
            return;
        }
    }
    // write-then-rename so concurrent readers never see a partial file
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    if std::fs::write(&tmp, factor.to_json().to_string()).is_ok() {
        let _ = std::fs::rename(&tmp, &path);
    }
}

/// Memoized per-root factor; also backed by a directory named in
/// [`CACHE_ENV`] when that variable is set.
pub fn theta_factor(kind: FactorKind, q_bound: i64, z_bound: u32) -> Arc<RootFactor> {
    let key = (kind, q_bound, z_bound);
    if let Some(f) = memory_cache().lock().expect("cache lock").get(&key) {
        return f.clone();
    }
    let factor = Arc::new(load_from_disk(key).unwrap_or_else(|| {
        let f = build_theta_factor(kind, q_bound, z_bound);
        store_on_disk(key, &f);
        f
    }));
    memory_cache().lock().expect("cache lock").entry(key).or_insert(factor).clone()
}

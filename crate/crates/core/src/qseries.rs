//! Truncated series in `q` with exponents on the `(1/8)·Z` lattice.
//!
//! An exponent `k` stands for `q^(k/8)`. Every series carries an order bound
//! `N`: coefficients with `k <= N` are known exactly, anything above is
//! unknown. Asking for an unknown coefficient is an error rather than zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Coefficient, GaussianRational};

/// Lattice units per power of `q`.
pub const UNITS_PER_Q: i64 = 8;
/// Lattice units of `q^(1/2)`.
pub const HALF: i64 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient rings differ")]
    RingMismatch,
    #[error("coefficient of q^({exponent}/8) is beyond the truncation order q^({bound}/8)")]
    BeyondTruncation { exponent: i64, bound: i64 },
    #[error("leading coefficient is not invertible")]
    NotInvertible,
    #[error("exponent {exponent}/8 is not a multiple of {step}/8")]
    OffLattice { exponent: i64, step: i64 },
    #[error("series must have strictly positive valuation")]
    NonPositiveValuation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxSeries<C: Coefficient> {
    ring: C::Ring,
    terms: BTreeMap<i64, C>,
    bound: i64,
}

pub type ScalarSeries = PuiseuxSeries<GaussianRational>;

impl<C: Coefficient> PuiseuxSeries<C> {
    pub fn zero(ring: &C::Ring, bound: i64) -> Self {
        PuiseuxSeries { ring: ring.clone(), terms: BTreeMap::new(), bound }
    }

    pub fn one(ring: &C::Ring, bound: i64) -> Self {
        Self::monomial(ring, 0, C::one_in(ring), bound)
    }

    pub fn monomial(ring: &C::Ring, k: i64, c: C, bound: i64) -> Self {
        let mut s = Self::zero(ring, bound);
        if k <= bound && !c.is_zero() {
            s.terms.insert(k, c);
        }
        s
    }

    pub fn from_terms(ring: &C::Ring, terms: impl IntoIterator<Item = (i64, C)>, bound: i64) -> Self {
        let mut s = Self::zero(ring, bound);
        for (k, c) in terms {
            s.add_term(k, &c);
        }
        s
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    /// Largest exponent whose coefficient is known.
    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(i64, &C)> {
        self.terms.iter().next().map(|(k, c)| (*k, c))
    }

    /// Lower bound on the true valuation.
    pub fn valuation(&self) -> i64 {
        self.leading().map_or(self.bound + 1, |(k, _)| k)
    }

    pub fn coefficient(&self, k: i64) -> Result<C, SeriesError> {
        if k > self.bound {
            return Err(SeriesError::BeyondTruncation { exponent: k, bound: self.bound });
        }
        Ok(self.terms.get(&k).cloned().unwrap_or_else(|| C::zero_in(&self.ring)))
    }

    pub(crate) fn add_term(&mut self, k: i64, c: &C) {
        if k > self.bound || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(slot) => {
                slot.add_assign_ref(c);
                if slot.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    /// Lowers the order bound to `bound` (never raises it).
    pub fn truncate(&self, bound: i64) -> Self {
        let bound = bound.min(self.bound);
        let terms = self.terms.range(..=bound).map(|(k, c)| (*k, c.clone())).collect();
        PuiseuxSeries { ring: self.ring.clone(), terms, bound }
    }

    fn check_ring(&self, other: &Self) -> Result<(), SeriesError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(SeriesError::RingMismatch)
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_ring(rhs)?;
        let mut out = self.truncate(rhs.bound);
        for (k, c) in rhs.terms.range(..=out.bound) {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_ring(rhs)?;
        self.try_add(&rhs.neg_series())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_ring(rhs)?;
        Ok(self.mul_with(rhs, |a, b| a.mul_ref(b)))
    }

    /// Product with a series over another coefficient ring, combining
    /// coefficients with `f`.
    pub fn mul_with<D: Coefficient>(&self, rhs: &PuiseuxSeries<D>, f: impl Fn(&C, &D) -> C) -> Self {
        let bound = (self.bound + rhs.valuation()).min(rhs.bound() + self.valuation());
        let mut out = Self::zero(&self.ring, bound);
        for (a, x) in &self.terms {
            for (b, y) in rhs.terms.range(..=bound - a) {
                out.add_term(a + b, &f(x, y));
            }
        }
        out
    }

    /// Multiplies by a scalar series.
    pub fn mul_scalar_series(&self, rhs: &ScalarSeries) -> Self {
        self.mul_with(rhs, |a, s| a.scale(s))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(&self.ring, self.bound);
        for (k, x) in &self.terms {
            out.add_term(*k, &x.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by `c` from the coefficient ring.
    pub fn mul_coefficient(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.ring, self.bound);
        for (k, x) in &self.terms {
            out.add_term(*k, &x.mul_ref(c));
        }
        out
    }

    pub fn neg_series(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (*k, c.neg_ref())).collect();
        PuiseuxSeries { ring: self.ring.clone(), terms, bound: self.bound }
    }

    /// Applies `f` to every coefficient, landing in `ring`.
    pub fn map<D: Coefficient>(&self, ring: &D::Ring, f: impl Fn(&C) -> D) -> PuiseuxSeries<D> {
        let mut out = PuiseuxSeries::zero(ring, self.bound);
        for (k, c) in &self.terms {
            out.add_term(*k, &f(c));
        }
        out
    }

    /// Fallible variant of [`map`](Self::map).
    pub fn try_map<D: Coefficient, E>(
        &self,
        ring: &D::Ring,
        f: impl Fn(&C) -> Result<D, E>,
    ) -> Result<PuiseuxSeries<D>, E> {
        let mut out = PuiseuxSeries::zero(ring, self.bound);
        for (k, c) in &self.terms {
            out.add_term(*k, &f(c)?);
        }
        Ok(out)
    }

    /// Multiplicative inverse; the leading coefficient must be invertible.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let (a, c0) = self.leading().ok_or(SeriesError::NotInvertible)?;
        let c0_inv = c0.inverse().ok_or(SeriesError::NotInvertible)?;
        // self = q^a g, g known through (bound - a); 1/self = q^-a / g
        let span = self.bound - a;
        let g: Vec<(i64, &C)> = self.terms.iter().map(|(k, c)| (k - a, c)).collect();
        let mut h: Vec<C> = Vec::with_capacity(span as usize + 1);
        h.push(c0_inv.clone());
        for n in 1..=span {
            let mut acc = C::zero_in(&self.ring);
            for &(j, gj) in g.iter().skip(1) {
                if j > n {
                    break;
                }
                acc.add_assign_ref(&gj.mul_ref(&h[(n - j) as usize]));
            }
            h.push(acc.mul_ref(&c0_inv).neg_ref());
        }
        let bound = self.bound - 2 * a;
        Ok(Self::from_terms(
            &self.ring,
            h.into_iter().enumerate().map(|(n, c)| (n as i64 - a, c)),
            bound,
        ))
    }

    pub fn pow(&self, m: i64) -> Result<Self, SeriesError> {
        if m < 0 {
            return self.inverse()?.pow(-m);
        }
        let mut acc = Self::one(&self.ring, self.bound.max(0));
        let mut base = self.clone();
        let mut e = m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        if m == 0 {
            acc = acc.truncate(self.bound);
        }
        Ok(acc)
    }

    /// Checks that every stored exponent is a multiple of `step` lattice units.
    pub fn check_lattice(&self, step: i64) -> Result<(), SeriesError> {
        match self.terms.keys().find(|k| *k % step != 0) {
            Some(&exponent) => Err(SeriesError::OffLattice { exponent, step }),
            None => Ok(()),
        }
    }

    /// `q^(1/2) -> -q^(1/2)`: the coefficient of `q^(m/2)` picks up `(-1)^m`.
    pub fn sign_flip(&self) -> Result<Self, SeriesError> {
        self.check_lattice(HALF)?;
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (*k, if (k / HALF) % 2 == 0 { c.clone() } else { c.neg_ref() }))
            .collect();
        Ok(PuiseuxSeries { ring: self.ring.clone(), terms, bound: self.bound })
    }

    /// `exp` of a series with strictly positive valuation, via
    /// `k F_k = sum_j j L_j F_{k-j}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if self.terms.keys().any(|k| *k <= 0) {
            return Err(SeriesError::NonPositiveValuation);
        }
        let n = self.bound.max(0);
        let mut f: Vec<C> = vec![C::one_in(&self.ring)];
        for k in 1..=n {
            let mut acc = C::zero_in(&self.ring);
            for (j, lj) in self.terms.range(..=k) {
                let t = lj.mul_ref(&f[(k - j) as usize]);
                acc.add_assign_ref(&t.scale(&GaussianRational::from_int(*j)));
            }
            f.push(acc.scale(&GaussianRational::from_ratio(1, k)));
        }
        Ok(Self::from_terms(&self.ring, f.into_iter().enumerate().map(|(k, c)| (k as i64, c)), self.bound))
    }

    /// JSON array of `[k, "coefficient"]` pairs, exponent `k` meaning `q^(k/8)`.
    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(k, c)| json!([k, c.to_string()])).collect())
    }
}

/// `q^(k/8)` with the exponent in lowest terms; empty for `k = 0`.
fn q_power(k: i64) -> String {
    let g = num::integer::gcd(k, UNITS_PER_Q);
    match (k / g, UNITS_PER_Q / g) {
        (0, _) => String::new(),
        (1, 1) => "q".to_string(),
        (n, 1) => format!("q^{n}"),
        (n, d) => format!("q^({n}/{d})"),
    }
}

impl<C: Coefficient> fmt::Display for PuiseuxSeries<C> {
    /// `c0 + c1*q^(1/2) + c2*q + ... + O(q^((N+1)/8))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.terms {
            let s = c.to_string();
            let compound = s.contains(' ') || s.contains("*i") || (s.len() > 1 && s[1..].contains('-'));
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ if compound => (false, format!("({s})")),
                _ => (false, s),
            };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let q = q_power(*k);
            let term = match (mag.as_str(), q.is_empty()) {
                (_, true) => mag,
                ("1", false) => q,
                (_, false) => format!("{mag}*{q}"),
            };
            write!(f, "{sep}{term}")?;
            first = false;
        }
        let o = q_power(self.bound + 1);
        let o = if o.is_empty() { "1".to_string() } else { o };
        write!(f, "{}O({o})", if first { "" } else { " + " })
    }
}

impl<'a, C: Coefficient> Add<&'a PuiseuxSeries<C>> for &'a PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn add(self, rhs: &PuiseuxSeries<C>) -> PuiseuxSeries<C> {
        self.try_add(rhs).expect("series ring mismatch")
    }
}

impl<'a, C: Coefficient> Sub<&'a PuiseuxSeries<C>> for &'a PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn sub(self, rhs: &PuiseuxSeries<C>) -> PuiseuxSeries<C> {
        self.try_sub(rhs).expect("series ring mismatch")
    }
}

impl<'a, C: Coefficient> Mul<&'a PuiseuxSeries<C>> for &'a PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn mul(self, rhs: &PuiseuxSeries<C>) -> PuiseuxSeries<C> {
        self.try_mul(rhs).expect("series ring mismatch")
    }
}

impl<C: Coefficient> Neg for &PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn neg(self) -> PuiseuxSeries<C> {
        self.neg_series()
    }
}

/// Scalar series from `(exponent, integer)` pairs.
pub fn scalar_series(terms: &[(i64, i64)], bound: i64) -> ScalarSeries {
    ScalarSeries::from_terms(
        &crate::algebra::Scalars,
        terms.iter().map(|&(k, c)| (k, GaussianRational::from_int(c))),
        bound,
    )
}

//! Sparse polynomials in weighted generators, truncated at a total weight.
//!
//! Generators model characteristic classes: in the normalized basis the
//! Pontryagin-type generator `n{i}_TM` (resp. `n{i}_V`) is the i-th elementary
//! symmetric function of the squared root variables and has weight `2i`; the
//! line-bundle variable `u` has weight 1. Cohomological degree is twice the
//! weight. The standard basis renames these to `p{i}_TM`, `p{i}_V` and `c` via
//! `p_i = (-4)^i n_i` and `c = 2i·u`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use super::scalar::GaussianRational;
use super::AlgebraError;

pub type Monomial = SmallVec<[u16; 8]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Family {
    /// Roots of the complexified tangent bundle.
    TM,
    /// Roots of the auxiliary real bundle `V`.
    V,
    /// The line bundle variable.
    U,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Normalized,
    Standard,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
    pub family: Family,
    /// `i` for the i-th Pontryagin-type generator, 1 for `u`/`c`.
    pub index: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, weight: u32, family: Family, index: u32) -> Self {
        Generator { name: name.into(), weight, family, index }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorTable {
    basis: Basis,
    gens: Vec<Generator>,
}

impl GeneratorTable {
    pub fn new(basis: Basis, gens: Vec<Generator>) -> Result<Self, AlgebraError> {
        for (i, g) in gens.iter().enumerate() {
            if g.weight == 0 {
                return Err(AlgebraError::InvalidTable(format!("`{}` has weight 0", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::InvalidTable(format!("duplicate name `{}`", g.name)));
            }
        }
        Ok(GeneratorTable { basis, gens })
    }

    /// Normalized table with `n1_TM..n{tm}_TM`, `n1_V..n{v}_V` and optionally `u`.
    pub fn normalized(tm: u32, v: u32, with_u: bool) -> Self {
        let mut gens = Vec::new();
        gens.extend((1..=tm).map(|i| Generator::new(format!("n{i}_TM"), 2 * i, Family::TM, i)));
        gens.extend((1..=v).map(|i| Generator::new(format!("n{i}_V"), 2 * i, Family::V, i)));
        if with_u {
            gens.push(Generator::new("u", 1, Family::U, 1));
        }
        GeneratorTable { basis: Basis::Normalized, gens }
    }

    /// The same generators renamed to standard Pontryagin/Chern classes.
    pub fn standard_counterpart(&self) -> Self {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let name = match (self.basis, g.family) {
                    (Basis::Standard, _) => g.name.clone(),
                    (_, Family::TM) => format!("p{}_TM", g.index),
                    (_, Family::V) => format!("p{}_V", g.index),
                    (_, Family::U) => "c".to_string(),
                };
                Generator { name, ..g.clone() }
            })
            .collect();
        GeneratorTable { basis: Basis::Standard, gens }
    }

    pub fn normalized_counterpart(&self) -> Self {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let name = match (self.basis, g.family) {
                    (Basis::Normalized, _) => g.name.clone(),
                    (_, Family::TM) => format!("n{}_TM", g.index),
                    (_, Family::V) => format!("n{}_V", g.index),
                    (_, Family::U) => "u".to_string(),
                };
                Generator { name, ..g.clone() }
            })
            .collect();
        GeneratorTable { basis: Basis::Normalized, gens }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Position of the `index`-th generator of `family`.
    pub fn find(&self, family: Family, index: u32) -> Option<usize> {
        self.gens.iter().position(|g| g.family == family && g.index == index)
    }
}

/// A generator table together with a truncation weight.
#[derive(Clone, Debug)]
pub struct PolyRing {
    table: Arc<GeneratorTable>,
    max_weight: u32,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.max_weight == other.max_weight
            && (Arc::ptr_eq(&self.table, &other.table) || self.table == other.table)
    }
}

impl PolyRing {
    pub fn new(table: GeneratorTable, max_weight: u32) -> Self {
        PolyRing { table: Arc::new(table), max_weight }
    }

    pub fn from_arc(table: Arc<GeneratorTable>, max_weight: u32) -> Self {
        PolyRing { table, max_weight }
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn with_max_weight(&self, max_weight: u32) -> Self {
        PolyRing { table: self.table.clone(), max_weight }
    }

    pub fn standard(&self) -> Self {
        PolyRing::new(self.table.standard_counterpart(), self.max_weight)
    }

    pub fn normalized(&self) -> Self {
        PolyRing::new(self.table.normalized_counterpart(), self.max_weight)
    }

    fn weight(&self, m: &[u16]) -> u32 {
        m.iter()
            .zip(self.table.gens.iter())
            .map(|(&e, g)| e as u32 * g.weight)
            .sum()
    }

    fn unit_monomial(&self) -> Monomial {
        SmallVec::from_elem(0, self.table.len())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradedPolynomial {
    ring: PolyRing,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl GradedPolynomial {
    pub fn zero(ring: &PolyRing) -> Self {
        GradedPolynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &PolyRing, c: GaussianRational) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(ring.unit_monomial(), c);
        }
        p
    }

    pub fn one(ring: &PolyRing) -> Self {
        Self::constant(ring, GaussianRational::one())
    }

    pub fn from_int(ring: &PolyRing, n: i64) -> Self {
        Self::constant(ring, GaussianRational::from_int(n))
    }

    /// The generator at table position `idx` (zero if it exceeds the weight bound).
    pub fn var(ring: &PolyRing, idx: usize) -> Self {
        let mut m = ring.unit_monomial();
        m[idx] = 1;
        Self::from_monomial(ring, m, GaussianRational::one())
    }

    pub fn generator(ring: &PolyRing, name: &str) -> Result<Self, AlgebraError> {
        let idx = ring
            .table
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
        Ok(Self::var(ring, idx))
    }

    pub fn from_monomial(ring: &PolyRing, m: Monomial, c: GaussianRational) -> Self {
        assert_eq!(m.len(), ring.table.len(), "monomial length");
        let mut p = Self::zero(ring);
        if !c.is_zero() && ring.weight(&m) <= ring.max_weight {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn max_weight(&self) -> u32 {
        self.ring.max_weight
    }

    pub fn table(&self) -> &GeneratorTable {
        &self.ring.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn monomial_weight(&self, m: &[u16]) -> u32 {
        self.ring.weight(m)
    }

    pub fn coefficient(&self, m: &[u16]) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Weight-0 coefficient.
    pub fn constant_term(&self) -> GaussianRational {
        self.coefficient(&self.ring.unit_monomial())
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    pub fn is_homogeneous(&self, w: u32) -> bool {
        self.terms.keys().all(|m| self.ring.weight(m) == w)
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(rhs)?;
        Ok(self + rhs)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(rhs)?;
        Ok(self - rhs)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(rhs)?;
        Ok(self * rhs)
    }

    pub(crate) fn add_assign_poly(&mut self, rhs: &Self) {
        assert!(self.ring == rhs.ring, "polynomial ring mismatch");
        for (m, c) in &rhs.terms {
            add_term(&mut self.terms, m, c);
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect();
        GradedPolynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&GaussianRational::from_int(n))
    }

    /// Homogeneous part of weight exactly `w`.
    pub fn component(&self, w: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| self.ring.weight(m) == w)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        GradedPolynomial { ring: self.ring.clone(), terms }
    }

    /// Top component at the truncation weight.
    pub fn top(&self) -> Self {
        self.component(self.ring.max_weight)
    }

    /// Re-truncates into a ring with a different weight bound over the same table.
    pub fn truncate(&self, max_weight: u32) -> Self {
        let ring = self.ring.with_max_weight(max_weight);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| ring.weight(m) <= max_weight)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        GradedPolynomial { ring, terms }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse in the truncated ring; exists iff the constant term is nonzero.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.inverse()?;
        // p = c0 (1 + r) with r nilpotent
        let r = &self.scale(&c0_inv) - &Self::one(&self.ring);
        let neg_r = -&r;
        let mut acc = Self::one(&self.ring);
        let mut power = Self::one(&self.ring);
        // every term of r has weight >= 1
        for _ in 0..self.ring.max_weight {
            power = &power * &neg_r;
            if power.is_zero() {
                break;
            }
            acc.add_assign_poly(&power);
        }
        Some(acc.scale(&c0_inv))
    }

    /// Ring homomorphism replacing generator `name` by `replacement`, which must
    /// be homogeneous of the generator's weight.
    pub fn substitute(&self, name: &str, replacement: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(replacement)?;
        let idx = self
            .ring
            .table
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
        let w = self.ring.table.gens[idx].weight;
        if !replacement.is_homogeneous(w) {
            return Err(AlgebraError::WeightMismatch { name: name.to_string(), expected: w });
        }
        let mut powers = vec![Self::one(&self.ring)];
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m[idx] as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * replacement;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest[idx] = 0;
            let base = Self::from_monomial(&self.ring, rest, c.clone());
            out.add_assign_poly(&(&base * &powers[e]));
        }
        Ok(out)
    }

    /// Applies a per-generator scaling `x_g -> s_g * y_g` into `target`, whose
    /// table must have the same shape.
    fn rescale_into(&self, target: &PolyRing, factor: impl Fn(&Generator) -> GaussianRational) -> Self {
        let factors: Vec<GaussianRational> = self.ring.table.gens.iter().map(factor).collect();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            for (e, f) in m.iter().zip(&factors) {
                if *e > 0 {
                    coeff = &coeff * &f.pow(*e as u32);
                }
            }
            if !coeff.is_zero() {
                out.terms.insert(m.clone(), coeff);
            }
        }
        out
    }

    /// Rewrites a normalized-basis polynomial in standard classes:
    /// `n_i = (-1/4)^i p_i` and `u = -(i/2) c`.
    pub fn to_standard_basis(&self) -> Self {
        if self.ring.table.basis == Basis::Standard {
            return self.clone();
        }
        let target = self.ring.standard();
        self.rescale_into(&target, |g| match g.family {
            Family::U => GaussianRational::new(super::int(0), super::ratio(-1, 2)),
            _ => GaussianRational::from_ratio(-1, 4).pow(g.index),
        })
    }

    /// Inverse of [`to_standard_basis`](Self::to_standard_basis):
    /// `p_i = (-4)^i n_i` and `c = 2i·u`.
    pub fn from_standard_basis(&self) -> Self {
        if self.ring.table.basis == Basis::Normalized {
            return self.clone();
        }
        let target = self.ring.normalized();
        self.rescale_into(&target, |g| match g.family {
            Family::U => GaussianRational::new(super::int(0), super::int(2)),
            _ => GaussianRational::from_int(-4).pow(g.index),
        })
    }

    /// Moves the polynomial onto an identical ring handle (same table contents).
    pub fn rebased(&self, ring: &PolyRing) -> Result<Self, AlgebraError> {
        if *ring != self.ring {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(GradedPolynomial { ring: ring.clone(), terms: self.terms.clone() })
    }

    fn fmt_monomial(&self, m: &[u16]) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(self.ring.table.gens.iter())
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| if *e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        parts.join("*")
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, GaussianRational>, m: &Monomial, c: &GaussianRational) {
    if let Some(slot) = terms.get_mut(m) {
        *slot += c;
        if slot.is_zero() {
            terms.remove(m);
        }
    } else if !c.is_zero() {
        terms.insert(m.clone(), c.clone());
    }
}

impl fmt::Display for GradedPolynomial {
    /// Canonical text: terms by ascending weight, then by exponent vector in
    /// descending lexicographic order; `coef*gen^e*gen` with the coefficient
    /// omitted when it is 1 and parenthesised when it has both a real and an
    /// imaginary part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<(&Monomial, &GaussianRational)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| {
            self.ring.weight(a.0).cmp(&self.ring.weight(b.0)).then_with(|| b.0.cmp(a.0))
        });
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let mono = self.fmt_monomial(m);
            let (neg, mag) = if c.is_negative_real() { (true, -c) } else { (false, c.clone()) };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let coef = if mag.is_compound() { format!("({mag})") } else { mag.to_string() };
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => f.write_str(&coef)?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{coef}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a GradedPolynomial> for &'a GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        let mut out = self.clone();
        out.add_assign_poly(rhs);
        out
    }
}

impl<'a> Sub<&'a GradedPolynomial> for &'a GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        assert!(self.ring == rhs.ring, "polynomial ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            add_term(&mut out.terms, m, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a GradedPolynomial> for &'a GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: &GradedPolynomial) -> GradedPolynomial {
        assert!(self.ring == rhs.ring, "polynomial ring mismatch");
        let ring = &self.ring;
        let maxw = ring.max_weight;
        let rhs_terms: Vec<(u32, &Monomial, &GaussianRational)> =
            rhs.terms.iter().map(|(m, c)| (ring.weight(m), m, c)).collect();
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            let w1 = ring.weight(m1);
            for &(w2, m2, c2) in &rhs_terms {
                if w1 + w2 > maxw {
                    continue;
                }
                let m: Monomial = m1.iter().zip(m2.iter()).map(|(a, b)| a + b).collect();
                add_term(&mut terms, &m, &(c1 * c2));
            }
        }
        GradedPolynomial { ring: ring.clone(), terms }
    }
}

impl Add for GradedPolynomial {
    type Output = GradedPolynomial;
    fn add(mut self, rhs: Self) -> Self {
        self.add_assign_poly(&rhs);
        self
    }
}

impl Sub for GradedPolynomial {
    type Output = GradedPolynomial;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for GradedPolynomial {
    type Output = GradedPolynomial;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        GradedPolynomial { ring: self.ring.clone(), terms }
    }
}

impl Neg for GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use proptest::prelude::*;

    fn ring(w: u32) -> PolyRing {
        PolyRing::new(GeneratorTable::normalized(2, 2, true), w)
    }

    fn gen(r: &PolyRing, name: &str) -> GradedPolynomial {
        GradedPolynomial::generator(r, name).unwrap()
    }

    fn c(r: &PolyRing, n: i64) -> GradedPolynomial {
        GradedPolynomial::from_int(r, n)
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring(4);
        let n1 = gen(&r, "n1_TM");
        let p = &(&c(&r, 1) + &n1) * &(&c(&r, 1) - &n1);
        assert_eq!(p, &c(&r, 1) - &(&n1 * &n1));

        let r2 = ring(2);
        let m1 = gen(&r2, "n1_TM");
        assert!((&m1 * &m1).is_zero());

        let k = 2;
        assert_eq!(n1.scale_int(1 << (2 * k + 1)).to_string(), "32*n1_TM");
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = gen(&ring(4), "n1_TM");
        let b = gen(&ring(6), "n1_TM");
        assert_eq!(a.try_mul(&b), Err(AlgebraError::RingMismatch));
        let other = PolyRing::new(GeneratorTable::normalized(1, 0, false), 4);
        assert_eq!(a.try_add(&gen(&other, "n1_TM")), Err(AlgebraError::RingMismatch));
    }

    #[test]
    fn components() {
        let r = ring(4);
        let n1 = gen(&r, "n1_TM");
        let p = &(&c(&r, 1) + &n1) + &(&n1 * &n1);
        assert_eq!(p.component(2), n1);
        let u = gen(&r, "u");
        let q = &u.pow(3) + &u;
        assert_eq!(q.component(3), u.pow(3));
        assert_eq!(p.component(0), c(&r, 1));
    }

    #[test]
    fn substitution_examples() {
        let r = ring(4);
        let (t, v, u) = (gen(&r, "n1_TM"), gen(&r, "n1_V"), gen(&r, "u"));
        let zero = GradedPolynomial::zero(&r);
        assert!((&v * &t).substitute("n1_V", &zero).unwrap().is_zero());

        let repl = &u.pow(2).scale_int(3) + &v;
        assert_eq!(t.substitute("n1_TM", &repl).unwrap(), repl);

        let repl = &u.pow(2) + &v;
        let sq = (&t * &t).substitute("n1_TM", &repl).unwrap();
        let expected = &(&u.pow(4) + &(&u.pow(2) * &v).scale_int(2)) + &(&v * &v);
        assert_eq!(sq, expected);
    }

    #[test]
    fn substitution_checks_weight() {
        let r = ring(4);
        let err = gen(&r, "n1_TM").substitute("n1_TM", &gen(&r, "u"));
        assert!(matches!(err, Err(AlgebraError::WeightMismatch { .. })));
        let err = gen(&r, "n1_TM").substitute("nope", &gen(&r, "u"));
        assert!(matches!(err, Err(AlgebraError::UnknownGenerator(_))));
    }

    #[test]
    fn standard_basis_examples() {
        let r = ring(4);
        assert_eq!(gen(&r, "n1_TM").to_standard_basis().to_string(), "-1/4*p1_TM");
        assert_eq!(gen(&r, "n2_TM").to_standard_basis().to_string(), "1/16*p2_TM");
        assert_eq!(gen(&r, "u").pow(2).to_standard_basis().to_string(), "-1/4*c^2");
        assert_eq!(gen(&r, "u").to_standard_basis().to_string(), "-1/2*i*c");
    }

    #[test]
    fn inverse_of_unit() {
        let r = ring(4);
        let p = &c(&r, 2) + &gen(&r, "n1_TM");
        let inv = p.inverse().unwrap();
        assert_eq!(&p * &inv, c(&r, 1));
        assert!(gen(&r, "n1_TM").inverse().is_none());
    }

    #[test]
    fn display_is_canonical() {
        let r = ring(4);
        let p = &(&gen(&r, "n1_TM").scale(&GaussianRational::from_ratio(-1, 3)) + &c(&r, 7))
            + &gen(&r, "u").scale(&GaussianRational::new(ratio(1, 2), ratio(1, 3)));
        assert_eq!(p.to_string(), "7 + (1/2+1/3*i)*u - 1/3*n1_TM");
        assert_eq!(GradedPolynomial::zero(&r).to_string(), "0");
    }

    fn arb_poly(r: PolyRing) -> impl Strategy<Value = GradedPolynomial> {
        let n = r.table().len();
        prop::collection::vec((prop::collection::vec(0u16..3, n), -5i64..=5, 1i64..=4, -2i64..=2), 0..6)
            .prop_map(move |terms| {
                let mut p = GradedPolynomial::zero(&r);
                for (m, a, b, im) in terms {
                    let coeff = GaussianRational::new(ratio(a, b), ratio(im, 1));
                    p = &p + &GradedPolynomial::from_monomial(&r, m.into_iter().collect(), coeff);
                }
                p
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(ring(6)), b in arb_poly(ring(6)), c in arb_poly(ring(6))) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn substitution_is_homomorphism(a in arb_poly(ring(6)), b in arb_poly(ring(6))) {
            let r = ring(6);
            let repl = &gen(&r, "u").pow(2).scale_int(3) + &gen(&r, "n1_V");
            let sub = |p: &GradedPolynomial| p.substitute("n1_TM", &repl).unwrap();
            prop_assert_eq!(sub(&(&a * &b)), &sub(&a) * &sub(&b));
        }

        #[test]
        fn standard_basis_roundtrip(a in arb_poly(ring(6))) {
            prop_assert_eq!(a.to_standard_basis().from_standard_basis(), a);
        }
    }
}

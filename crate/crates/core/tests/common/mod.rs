//! Brute-force oracle: products over explicit Chern roots, compared with the
//! symmetric-function engine after substituting `n_i -> e_i(z^2)`.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, One, Zero};
use theta_anomaly::algebra::{Family, GaussianRational, GeneratorTable, GradedPolynomial, PolyRing};
use theta_anomaly::genus::{classical_genus, prod_over_roots, ClassicalGenus, RootFamily};
use theta_anomaly::theta::{build_theta_factor, FactorKind, RootFactor};

pub type Q = BigRational;

/// Polynomial in explicit roots `z_1..z_n` and `q` (last slot, lattice units),
/// truncated at total z-degree `w` and q-exponent `qb`.
#[derive(Clone, Debug, PartialEq)]
pub struct Explicit {
    n: usize,
    w: u32,
    qb: i64,
    terms: BTreeMap<Vec<i64>, Q>,
}

impl Explicit {
    pub fn constant(n: usize, w: u32, qb: i64, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; n + 1], c);
        }
        Explicit { n, w, qb, terms }
    }

    pub fn add_term(&mut self, key: Vec<i64>, c: Q) {
        let deg: i64 = key[..self.n].iter().sum();
        if deg > self.w as i64 || key[self.n] > self.qb || c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn mul(&self, rhs: &Explicit) -> Explicit {
        let mut out = Explicit::constant(self.n, self.w, self.qb, Q::zero());
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let key: Vec<i64> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(key, x * y);
            }
        }
        out
    }

    /// `f(z_j)` for a factor given by `(z-degree, q-exponent) -> coefficient`.
    pub fn factor_at(n: usize, w: u32, qb: i64, j: usize, coeffs: &BTreeMap<(u32, i64), Q>) -> Explicit {
        let mut out = Explicit::constant(n, w, qb, Q::zero());
        for (&(d, k), c) in coeffs {
            let mut key = vec![0; n + 1];
            key[j] = d as i64;
            key[n] = k;
            out.add_term(key, c.clone());
        }
        out
    }

    pub fn product_over_roots(n: usize, w: u32, qb: i64, coeffs: &BTreeMap<(u32, i64), Q>) -> Explicit {
        (0..n).fold(Explicit::constant(n, w, qb, Q::one()), |acc, j| acc.mul(&Explicit::factor_at(n, w, qb, j, coeffs)))
    }

    /// `e_i(z_1^2, ..., z_n^2)`.
    pub fn elementary_sq(n: usize, w: u32, qb: i64, i: u32) -> Explicit {
        let mut out = Explicit::constant(n, w, qb, Q::zero());
        for mask in 0u32..(1 << n) {
            if mask.count_ones() == i {
                let mut key = vec![0; n + 1];
                for (j, slot) in key.iter_mut().enumerate().take(n) {
                    if mask & (1 << j) != 0 {
                        *slot = 2;
                    }
                }
                out.add_term(key, Q::one());
            }
        }
        out
    }
}

pub fn real(c: &GaussianRational) -> Q {
    assert!(c.im.is_zero(), "unexpected imaginary part");
    c.re.clone()
}

/// Substitutes `n_i -> e_i(z^2)` into an engine polynomial, placing it at `q^k`.
pub fn expand_engine(p: &GradedPolynomial, n: usize, w: u32, qb: i64, k: i64, out: &mut Explicit) {
    let gens = p.table().generators().to_vec();
    for (m, c) in p.terms() {
        let mut term = Explicit::constant(n, w, qb, real(c));
        for (idx, &e) in m.iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&Explicit::elementary_sq(n, w, qb, gens[idx].index));
            }
        }
        for (mut key, c) in term.terms {
            key[n] += k;
            out.add_term(key, c);
        }
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as i64).fold(BigInt::one(), |a, b| a * b)
}

/// Taylor coefficients of `sin z / z` and `cos z` through `z^w`.
pub fn sinc_cos(w: u32) -> (Vec<Q>, Vec<Q>) {
    let mut sinc = vec![Q::zero(); w as usize + 1];
    let mut cos = vec![Q::zero(); w as usize + 1];
    for d in (0..=w).step_by(2) {
        let sign = if d % 4 == 0 { BigInt::one() } else { -BigInt::one() };
        sinc[d as usize] = Q::new(sign.clone(), factorial(d + 1));
        cos[d as usize] = Q::new(sign, factorial(d));
    }
    (sinc, cos)
}

/// `a / b` as power series, `b[0] != 0`.
pub fn divide(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(a.len());
    for d in 0..a.len() {
        let mut acc = a[d].clone();
        for i in 1..=d {
            acc -= &b[i] * &out[d - i];
        }
        out.push(acc / &b[0]);
    }
    out
}

pub fn as_factor(coeffs: &[Q]) -> BTreeMap<(u32, i64), Q> {
    coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(d, c)| ((d as u32, 0), c.clone())).collect()
}

pub fn ring(n: u32, w: u32) -> PolyRing {
    PolyRing::new(GeneratorTable::normalized(n.min(w / 2), 0, false), w)
}


pub fn factor_table(f: &RootFactor) -> BTreeMap<(u32, i64), Q> {
    let mut out = BTreeMap::new();
    for (d, s) in f.slices().iter().enumerate() {
        for (k, c) in s.terms() {
            out.insert((d as u32, k), real(c));
        }
    }
    out
}

/// Compares the classical genera and the `A·T2` theta-factor product with the
/// explicit-root products for every `n_roots <= 3`, `W <= 6`.
pub fn brute_force_agreement() -> Result<(), String> {
    for n in 1..=3usize {
        for w in [2u32, 4, 6] {
            let (sinc, cos) = sinc_cos(w);
            let one: Vec<Q> = (0..=w).map(|d| if d == 0 { Q::one() } else { Q::zero() }).collect();
            let two = Q::from_integer(BigInt::from(2));
            let z_over_sin = divide(&one, &sinc);
            let two_z_cot: Vec<Q> = divide(&cos, &sinc).iter().map(|c| c * &two).collect();
            let two_cos: Vec<Q> = cos.iter().map(|c| c * &two).collect();
            let r = ring(n as u32, w);
            let fam = RootFamily::new(Family::TM, n as u32);
            for (kind, coeffs) in [
                (ClassicalGenus::AHat, &z_over_sin),
                (ClassicalGenus::LHat, &two_z_cot),
                (ClassicalGenus::SpinorCh, &two_cos),
            ] {
                let engine = classical_genus(kind, fam, &r).map_err(|e| e.to_string())?;
                let mut lhs = Explicit::constant(n, w, 0, Q::zero());
                expand_engine(&engine, n, w, 0, 0, &mut lhs);
                if lhs != Explicit::product_over_roots(n, w, 0, &as_factor(coeffs)) {
                    return Err(format!("{kind:?} n={n} w={w}"));
                }
            }
            let qb = 16;
            let f = build_theta_factor(FactorKind::A, qb, w).mul(&build_theta_factor(FactorKind::T2, qb, w));
            let engine = prod_over_roots(&f, fam, &r).map_err(|e| e.to_string())?;
            let mut lhs = Explicit::constant(n, w, qb, Q::zero());
            for (k, c) in engine.terms() {
                expand_engine(c, n, w, qb, k, &mut lhs);
            }
            if lhs != Explicit::product_over_roots(n, w, qb, &factor_table(&f)) {
                return Err(format!("A*T2 n={n} w={w}"));
            }
        }
    }
    Ok(())
}

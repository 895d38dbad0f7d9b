//! Newton's identities between power sums and elementary symmetric functions
//! of a fixed number of roots.

use super::{Coefficient, GaussianRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewtonDirection {
    /// Input power sums `p_1..p_m`, output elementary functions `e_1..e_m`.
    PowerSumToElementary,
    /// Input elementary functions `e_1..e_m`, output power sums `p_1..p_m`.
    ElementaryToPowerSum,
}

/// Power sums `p_1..p_m` from `e_1..e_m`, where `e_i` is taken to vanish for
/// `i > n_roots`.
pub fn power_sums_from_elementary<C: Coefficient>(e: &[C], n_roots: usize, ring: &C::Ring) -> Vec<C> {
    let zero = C::zero_in(ring);
    let elem = |i: usize| if i <= n_roots { &e[i - 1] } else { &zero };
    let mut p: Vec<C> = Vec::with_capacity(e.len());
    for m in 1..=e.len() {
        // p_m = sum_{i<m} (-1)^{i-1} e_i p_{m-i} + (-1)^{m-1} m e_m
        let mut acc = elem(m).scale(&GaussianRational::from_int(m as i64));
        if m % 2 == 0 {
            acc = acc.neg_ref();
        }
        for i in 1..m {
            let t = elem(i).mul_ref(&p[m - i - 1]);
            acc = if i % 2 == 1 { acc.add_ref(&t) } else { acc.sub_ref(&t) };
        }
        p.push(acc);
    }
    p
}

/// Elementary functions `e_1..e_m` from power sums `p_1..p_m`; `e_i` for
/// `i > n_roots` is forced to zero.
pub fn elementary_from_power_sums<C: Coefficient>(p: &[C], n_roots: usize, ring: &C::Ring) -> Vec<C> {
    let one = C::one_in(ring);
    let mut e: Vec<C> = Vec::with_capacity(p.len());
    for m in 1..=p.len() {
        if m > n_roots {
            e.push(C::zero_in(ring));
            continue;
        }
        // m e_m = sum_{i=1}^{m} (-1)^{i-1} e_{m-i} p_i
        let mut acc = C::zero_in(ring);
        for i in 1..=m {
            let prev = if i == m { &one } else { &e[m - i - 1] };
            let t = prev.mul_ref(&p[i - 1]);
            acc = if i % 2 == 1 { acc.add_ref(&t) } else { acc.sub_ref(&t) };
        }
        e.push(acc.scale(&GaussianRational::from_ratio(1, m as i64)));
    }
    e
}

pub fn newton_convert(coeffs: &[GaussianRational], n_roots: usize, direction: NewtonDirection) -> Vec<GaussianRational> {
    let ring = super::Scalars;
    match direction {
        NewtonDirection::PowerSumToElementary => elementary_from_power_sums(coeffs, n_roots, &ring),
        NewtonDirection::ElementaryToPowerSum => power_sums_from_elementary(coeffs, n_roots, &ring),
    }
}

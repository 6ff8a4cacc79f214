//! Built-in analytic functions with their exact total families.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

use super::family::{FamilyEntry, FunctionHandle, TotalFamily};
use super::multiindex::{IndexSubset, MultiIndex};
use super::point::Polar;

/// A function together with a total family for it.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub function: FunctionHandle,
    pub family: TotalFamily,
}

fn sum_of(z: &[Polar]) -> Complex64 {
    z.iter().map(|p| p.to_complex()).sum()
}

fn exp_handle(opening: Vec<f64>) -> FunctionHandle {
    FunctionHandle::new(opening, |z| sum_of(z).exp()).with_derivative(|_, z| sum_of(z).exp())
}

/// `f(z) = exp(z_1 + ... + z_n)`; every entry is the exponential of the
/// remaining variables and every scalar is 1.
pub fn exp_sum(opening: Vec<f64>, depth: u32) -> Result<Fixture> {
    let mut family = TotalFamily::new(opening.clone(), depth)?;
    for j in IndexSubset::all(family.n())? {
        for a in MultiIndex::up_to_modulus(j.len(), depth) {
            let entry = if j.is_full() {
                FamilyEntry::Scalar(Complex64::new(1.0, 0.0))
            } else {
                FamilyEntry::Function(exp_handle(family.sub_opening(&j.complement_indices())))
            };
            family.insert(j, a, entry)?;
        }
    }
    Ok(Fixture {
        function: exp_handle(opening),
        family,
    })
}

/// `sum_k c_k z^{e_k}` over the variables selected by `vars`, with its
/// derivatives in closed form.
fn monomial_sum(opening: Vec<f64>, terms: Vec<(Complex64, MultiIndex)>) -> FunctionHandle {
    let terms = Arc::new(terms);
    let for_deriv = terms.clone();
    FunctionHandle::new(opening, move |z| {
        terms
            .iter()
            .map(|(c, e)| {
                z.iter()
                    .zip(e.entries())
                    .fold(*c, |acc, (p, &k)| acc * p.powi(k as i32))
            })
            .sum()
    })
    .with_derivative(move |beta, z| {
        for_deriv
            .iter()
            .filter(|(_, e)| beta.le(e) == Some(true))
            .map(|(c, e)| {
                z.iter()
                    .zip(e.entries())
                    .zip(beta.entries())
                    .fold(*c, |acc, ((p, &k), &b)| {
                        let falling: f64 = (k - b + 1..=k).map(|x| x as f64).product();
                        acc * falling * p.powi((k - b) as i32)
                    })
            })
            .sum()
    })
}

/// Polynomial `sum_k c_k z^{e_k}` with its exact family: the entry at
/// `(J, alpha_J)` keeps the terms with `e_J = alpha_J`, scaled by `alpha_J!`.
pub fn poly(opening: Vec<f64>, depth: u32, terms: Vec<(Complex64, MultiIndex)>) -> Result<Fixture> {
    let mut family = TotalFamily::new(opening.clone(), depth)?;
    if let Some((_, e)) = terms.iter().find(|(_, e)| e.len() != family.n()) {
        return Err(Error::Invalid(alloc::format!(
            "exponent {e} does not have {} components",
            family.n()
        )));
    }
    for j in IndexSubset::all(family.n())? {
        let rest = j.complement_indices();
        for a in MultiIndex::up_to_modulus(j.len(), depth) {
            let mut kept = Vec::new();
            for (c, e) in &terms {
                if e.restrict(&j)? == a {
                    let tail = MultiIndex::new(rest.iter().map(|&k| e.entries()[k]).collect());
                    kept.push((*c * a.factorial(), tail));
                }
            }
            let entry = if j.is_full() {
                FamilyEntry::Scalar(kept.iter().map(|(c, _)| *c).sum())
            } else {
                FamilyEntry::Function(monomial_sum(family.sub_opening(&rest), kept))
            };
            family.insert(j, a, entry)?;
        }
    }
    Ok(Fixture {
        function: monomial_sum(opening, terms),
        family,
    })
}

/// Coefficients `c_{p,m}` with `g^{(p)}(z) = sum_m c_{p,m} e^{-w} w^{m + p s}`,
/// `w = z^{-1/s}`, for `g(z) = exp(-z^{-1/s})`.
fn flat_coefficients(s: f64, order: usize) -> Vec<Vec<f64>> {
    let mut rows = alloc::vec![alloc::vec![1.0]];
    for p in 0..order {
        let prev = &rows[p];
        let mut next = alloc::vec![0.0; prev.len() + 1];
        for (m, &c) in prev.iter().enumerate() {
            next[m + 1] += c / s;
            next[m] -= c * (p as f64 * s + m as f64) / s;
        }
        rows.push(next);
    }
    rows
}

fn flat_derivative(coef: &[Vec<f64>], s: f64, p: usize, z: Polar) -> Complex64 {
    let ln_w = Complex64::new(-math::ln(z.modulus) / s, -z.arg / s);
    let w = ln_w.exp();
    coef[p]
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(m, &c)| c * (-w + (m as f64 + p as f64 * s) * ln_w).exp())
        .sum()
}

/// Largest derivative order the flat fixture evaluates in closed form.
pub const FLAT_MAX_ORDER: u32 = 64;

/// `f(z) = prod_j exp(-z_j^{-1/s})` on the polysector with every opening
/// equal to `s`, paired with the null family: flat at the vertex, so every
/// entry vanishes.
pub fn gevrey_flat(s: f64, n: usize, depth: u32) -> Result<Fixture> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain {
            what: "flat fixture order s",
            value: s,
        });
    }
    let opening = alloc::vec![s; n];
    let mut family = TotalFamily::new(opening.clone(), depth)?;
    for j in IndexSubset::all(n)? {
        for a in MultiIndex::up_to_modulus(j.len(), depth) {
            let entry = if j.is_full() {
                FamilyEntry::Scalar(Complex64::new(0.0, 0.0))
            } else {
                FamilyEntry::Function(FunctionHandle::zero(
                    family.sub_opening(&j.complement_indices()),
                ))
            };
            family.insert(j, a, entry)?;
        }
    }
    let coef = Arc::new(flat_coefficients(s, FLAT_MAX_ORDER as usize));
    let function = FunctionHandle::new(opening, move |z| {
        z.iter()
            .map(|p| (-Complex64::from_polar(math::powf(p.modulus, -1.0 / s), -p.arg / s)).exp())
            .product()
    })
    .with_derivative(move |alpha, z| {
        if alpha.entries().iter().any(|&k| k > FLAT_MAX_ORDER) {
            return Complex64::new(f64::NAN, f64::NAN);
        }
        z.iter()
            .zip(alpha.entries())
            .map(|(p, &k)| flat_derivative(&coef, s, k as usize, *p))
            .product()
    });
    Ok(Fixture { function, family })
}

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

use super::family::{FamilyEntry, TotalFamily};
use super::multiindex::{IndexSubset, MultiIndex};
use super::point::{Polar, SectorPoint};

fn check_inputs(f: &TotalFamily, alpha: &MultiIndex, z: &SectorPoint) -> Result<()> {
    if alpha.len() != f.n() {
        return Err(Error::Invalid(alloc::format!(
            "order {alpha} has {} components, family has {} variables",
            alpha.len(),
            f.n()
        )));
    }
    z.require_in(f.opening())
}

fn entry_value(entry: &FamilyEntry, rest: &[Polar]) -> Complex64 {
    match entry {
        FamilyEntry::Scalar(c) => *c,
        FamilyEntry::Function(h) => h.eval_unchecked(rest),
    }
}

/// The approximant of order `alpha`:
/// `sum_{J != {}} (-1)^{#J+1} sum_{beta_J <= alpha_J - 1} f_{beta_J}(z_{J'}) z_J^{beta_J} / beta_J!`.
pub fn approximant(f: &TotalFamily, alpha: &MultiIndex, z: &SectorPoint) -> Result<Complex64> {
    check_inputs(f, alpha, z)?;
    let a = alpha.entries();
    // scaled powers z_j^k / k! for k < alpha_j
    let powers: Vec<Vec<Complex64>> = z
        .components()
        .iter()
        .zip(a)
        .map(|(zj, &aj)| {
            let w = zj.to_complex();
            let mut row = Vec::with_capacity(aj as usize);
            let mut cur = Complex64::new(1.0, 0.0);
            for k in 0..aj {
                row.push(cur);
                cur = cur * w / (k + 1) as f64;
            }
            row
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for j in IndexSubset::all(f.n())? {
        let idx = j.indices();
        if idx.iter().any(|&k| a[k] == 0) {
            continue;
        }
        let rest: Vec<Polar> = j.complement_indices().iter().map(|&k| z.0[k]).collect();
        let bound = MultiIndex::new(idx.iter().map(|&k| a[k] - 1).collect());
        let mut inner = Complex64::new(0.0, 0.0);
        for beta in bound.box_below() {
            let coef = idx
                .iter()
                .zip(beta.entries())
                .fold(Complex64::new(1.0, 0.0), |acc, (&k, &b)| {
                    acc * powers[k][b as usize]
                });
            inner += coef * entry_value(f.get(&j, &beta)?, &rest);
        }
        if j.len() % 2 == 1 {
            total += inner;
        } else {
            total -= inner;
        }
    }
    Ok(total)
}

/// Reference implementation: literal loops over subsets and multi-indices,
/// with powers and factorials recomputed for every term.
pub fn approximant_bruteforce(
    f: &TotalFamily,
    alpha: &MultiIndex,
    z: &SectorPoint,
) -> Result<Complex64> {
    check_inputs(f, alpha, z)?;
    let n = f.n();
    let mut total = Complex64::new(0.0, 0.0);
    for mask in 1u32..(1u32 << n) {
        let j = IndexSubset::new(n, mask)?;
        let idx = j.indices();
        let rest: Vec<Polar> = j.complement_indices().iter().map(|&k| z.0[k]).collect();
        let sign = if idx.len() % 2 == 1 { 1.0 } else { -1.0 };
        // enumerate beta_J with 0 <= beta_j < alpha_j by mixed-radix counting
        let radices: Vec<u32> = idx.iter().map(|&k| alpha.entries()[k]).collect();
        let count: u64 = radices.iter().map(|&r| r as u64).product();
        for code in 0..count {
            let mut c = code;
            let mut beta = Vec::with_capacity(idx.len());
            for &r in radices.iter().rev() {
                beta.push((c % r as u64) as u32);
                c /= r as u64;
            }
            beta.reverse();
            let beta = MultiIndex::new(beta);
            let value = entry_value(f.get(&j, &beta)?, &rest);
            let mut mono = Complex64::new(1.0, 0.0);
            for (&k, &b) in idx.iter().zip(beta.entries()) {
                mono *= z.0[k].powi(b as i32);
            }
            total += sign * value * mono / beta.factorial();
        }
    }
    Ok(total)
}

/// The singleton-subset entries `f_{j,m}`, `m <= depth`, keyed by `(j, m)`
/// with zero-based `j`.
pub fn first_order_family(f: &TotalFamily) -> Result<BTreeMap<(usize, u32), FamilyEntry>> {
    let mut out = BTreeMap::new();
    for j in 0..f.n() {
        let s = IndexSubset::singleton(f.n(), j)?;
        for m in 0..=f.depth() {
            out.insert((j, m), f.get(&s, &MultiIndex::new(alloc::vec![m]))?.clone());
        }
    }
    Ok(out)
}

/// The scalar entries `f_alpha`, `|alpha| <= depth`: the image of the Borel map.
pub fn borel(f: &TotalFamily) -> Result<BTreeMap<MultiIndex, Complex64>> {
    MultiIndex::up_to_modulus(f.n(), f.depth())
        .into_iter()
        .map(|a| f.scalar(&a).map(|c| (a, c)))
        .collect()
}

/// `prod_j |z_j|^{alpha_j}`.
pub(crate) fn modulus_power(z: &SectorPoint, alpha: &MultiIndex) -> f64 {
    z.components()
        .iter()
        .zip(alpha.entries())
        .map(|(p, &a)| math::powi(p.modulus, a as i32))
        .product()
}

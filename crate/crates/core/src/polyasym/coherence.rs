use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

use super::family::{FamilyEntry, FunctionHandle, TotalFamily};
use super::multiindex::{IndexSubset, MultiIndex};
use super::point::{Polar, SectorPoint};

/// Radii along which the variables in `L` approach the vertex, all on the
/// ray of argument `arg`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    pub radii: Vec<f64>,
    pub arg: f64,
}

impl Ray {
    /// `count` radii decreasing geometrically from `start` to `end`.
    pub fn geometric(start: f64, end: f64, count: usize, arg: f64) -> Self {
        let radii = if count <= 1 {
            alloc::vec![end]
        } else {
            let ratio = math::ln(end / start) / (count - 1) as f64;
            let mut r: Vec<f64> = (0..count)
                .map(|k| start * math::exp(ratio * k as f64))
                .collect();
            r[count - 1] = end;
            r
        };
        Self { radii, arg }
    }
}

/// How many of the last radii enter the extrapolation to the vertex.
const EXTRAPOLATION_POINTS: usize = 4;
/// Central-difference step as a fraction of the current radius.
const STEP_FRACTION: f64 = 0.1;

/// Distance between the limit of `D^{alpha_L} f_{alpha_J}` as `z_L -> 0`
/// along the ray, with `z_{(J u L)'}` fixed at `base`, and the entry
/// `f_{(alpha_J, alpha_L)}` at `base`.
///
/// Derivatives come from the entry's derivative evaluator when present and
/// from Richardson-extrapolated central differences otherwise. The limit is
/// obtained by polynomial extrapolation to radius zero over the last radii.
pub fn coherence_residual(
    f: &TotalFamily,
    j: &IndexSubset,
    l: &IndexSubset,
    alpha_j: &MultiIndex,
    alpha_l: &MultiIndex,
    base: &SectorPoint,
    ray: &Ray,
) -> Result<f64> {
    if !j.is_disjoint(l) {
        return Err(Error::Invalid(alloc::format!(
            "subsets {j} and {l} are not disjoint"
        )));
    }
    if alpha_l.len() != l.len() {
        return Err(Error::Invalid(alloc::format!(
            "multi-index {alpha_l} does not match subset {l}"
        )));
    }
    let jl = j.union(l)?;
    let rest = jl.complement_indices();
    base.require_in(&f.sub_opening(&rest))?;
    if ray.radii.is_empty() {
        return Err(Error::Invalid("empty ray".into()));
    }
    for k in l.indices() {
        for &r in &ray.radii {
            if !Polar::new(r, ray.arg).in_sector(f.opening()[k], 1.0) {
                return Err(Error::Domain {
                    what: "ray leaves the polysector",
                    value: r,
                });
            }
        }
    }
    let source = f.function(j, alpha_j)?;
    let merged = MultiIndex::merge(j, alpha_j, l, alpha_l)?;
    let target = match f.get(&jl, &merged)? {
        FamilyEntry::Scalar(c) => *c,
        FamilyEntry::Function(h) => h.eval_unchecked(base.components()),
    };

    // positions of L and of the base variables inside the variables of J'
    let vars = j.complement_indices();
    let in_l: Vec<Option<usize>> = vars
        .iter()
        .map(|v| l.indices().iter().position(|x| x == v))
        .collect();
    let order = MultiIndex::new(
        in_l.iter()
            .map(|p| p.map_or(0, |k| alpha_l.entries()[k]))
            .collect(),
    );
    let point_at = |r: f64| -> Vec<Polar> {
        let mut b = base.components().iter();
        in_l.iter()
            .map(|p| match p {
                Some(_) => Polar::new(r, ray.arg),
                None => *b.next().expect("base covers the remaining variables"),
            })
            .collect()
    };

    let mut values = Vec::with_capacity(ray.radii.len());
    for &r in &ray.radii {
        let v = match source.derivative_unchecked(&order, &point_at(r)) {
            Some(v) => v,
            None => finite_difference(source, &order, &in_l, &point_at(r), ray.arg, r)?,
        };
        values.push((r, v));
    }
    let tail = &values[values.len().saturating_sub(EXTRAPOLATION_POINTS)..];
    Ok((neville_at_zero(tail) - target).norm())
}

/// Richardson-extrapolated tensor central difference of order `order` in
/// the ray variables, with steps `r/10` and `r/20`.
fn finite_difference(
    h: &FunctionHandle,
    order: &MultiIndex,
    in_l: &[Option<usize>],
    at: &[Polar],
    arg: f64,
    r: f64,
) -> Result<Complex64> {
    let total = order.modulus() as u32;
    let coarse = central(h, order, in_l, at, arg, r * STEP_FRACTION, total)?;
    let fine = central(h, order, in_l, at, arg, r * STEP_FRACTION / 2.0, total)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

fn central(
    h: &FunctionHandle,
    order: &MultiIndex,
    in_l: &[Option<usize>],
    at: &[Polar],
    arg: f64,
    step: f64,
    total: u32,
) -> Result<Complex64> {
    let scale = math::powi(step, total as i32);
    if !(scale.is_normal())
        || order
            .entries()
            .iter()
            .any(|&k| k as f64 * STEP_FRACTION / 2.0 >= 1.0)
    {
        return Err(Error::Step { step, order: total });
    }
    let dirs: Vec<usize> = (0..at.len())
        .filter(|&k| in_l[k].is_some() && order.entries()[k] > 0)
        .collect();
    let radices: Vec<u32> = dirs.iter().map(|&k| order.entries()[k] + 1).collect();
    let count: u64 = radices.iter().map(|&x| x as u64).product();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pt = at.to_vec();
    for code in 0..count {
        let mut c = code;
        let mut weight = 1.0;
        for (&k, &rad) in dirs.iter().zip(&radices) {
            let i = (c % rad as u64) as u32;
            c /= rad as u64;
            let kk = order.entries()[k];
            weight *= math::binomial(kk, i) * if i.is_multiple_of(2) { 1.0 } else { -1.0 };
            let offset = (kk as f64 / 2.0 - i as f64) * step;
            pt[k] = Polar::new(at[k].modulus + offset, arg);
        }
        acc += weight * h.eval_unchecked(&pt);
    }
    // the increment is step * e^{i arg} in each differentiated variable
    Ok(acc / (Complex64::from_polar(1.0, arg * total as f64) * scale))
}

/// Value at 0 of the interpolating polynomial through `(x_i, y_i)`.
fn neville_at_zero(pts: &[(f64, Complex64)]) -> Complex64 {
    let mut p: Vec<Complex64> = pts.iter().map(|x| x.1).collect();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xm) = (pts[i].0, pts[i + m].0);
            p[i] = (p[i] * (-xm) - p[i + 1] * (-xi)) / (xi - xm);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyasym::fixtures;
    use alloc::vec;

    #[test]
    fn neville_reproduces_cubics() {
        let f = |x: f64| Complex64::new(2.0 - x + 3.0 * x * x - x * x * x, x);
        let pts: Vec<_> = [0.4, 0.3, 0.2, 0.1].iter().map(|&x| (x, f(x))).collect();
        assert!((neville_at_zero(&pts) - Complex64::new(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn exponential_family_is_coherent() {
        let fx = fixtures::exp_sum(vec![1.0, 1.0], 3).unwrap();
        let j = IndexSubset::singleton(2, 0).unwrap();
        let l = IndexSubset::singleton(2, 1).unwrap();
        let ray = Ray::geometric(1e-1, 1e-4, 8, 0.0);
        let base = SectorPoint::new(vec![]);
        let r = coherence_residual(
            &fx.family,
            &j,
            &l,
            &MultiIndex::new(vec![0]),
            &MultiIndex::new(vec![1]),
            &base,
            &ray,
        )
        .unwrap();
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn finite_differences_without_oracle() {
        // same family with the derivative evaluators stripped from the entries
        let fx = fixtures::exp_sum(vec![1.0, 1.0], 3).unwrap();
        let mut fam = fx.family.clone();
        let j = IndexSubset::singleton(2, 0).unwrap();
        let plain = FunctionHandle::new(vec![1.0], |z| z[0].to_complex().exp());
        fam.insert(j, MultiIndex::new(vec![0]), FamilyEntry::Function(plain))
            .unwrap();
        let l = IndexSubset::singleton(2, 1).unwrap();
        let ray = Ray::geometric(1e-1, 1e-4, 8, 0.3);
        for k in 1..=2 {
            let r = coherence_residual(
                &fam,
                &j,
                &l,
                &MultiIndex::new(vec![0]),
                &MultiIndex::new(vec![k]),
                &SectorPoint::new(vec![]),
                &ray,
            )
            .unwrap();
            // roundoff of a k-th difference grows like eps / h^k
            let tol = [1e-6, 1e-4][k as usize - 1];
            assert!(r < tol, "order {k}: {r}");
        }
    }

    #[test]
    fn perturbation_is_detected() {
        let fx = fixtures::exp_sum(vec![1.0, 1.0], 3).unwrap();
        let mut fam = fx.family.clone();
        let full = IndexSubset::full(2).unwrap();
        fam.insert(
            full,
            MultiIndex::new(vec![1, 1]),
            FamilyEntry::Scalar(Complex64::new(1.0 + 1e-2, 0.0)),
        )
        .unwrap();
        let j = IndexSubset::singleton(2, 0).unwrap();
        let l = IndexSubset::singleton(2, 1).unwrap();
        let ray = Ray::geometric(1e-1, 1e-4, 8, 0.0);
        let r = coherence_residual(
            &fam,
            &j,
            &l,
            &MultiIndex::new(vec![1]),
            &MultiIndex::new(vec![1]),
            &SectorPoint::new(vec![]),
            &ray,
        )
        .unwrap();
        assert!((r - 1e-2).abs() < 1e-6);
    }

    #[test]
    fn ray_outside_the_sector_is_rejected() {
        let fx = fixtures::exp_sum(vec![1.0, 0.5], 2).unwrap();
        let j = IndexSubset::singleton(2, 0).unwrap();
        let l = IndexSubset::singleton(2, 1).unwrap();
        let ray = Ray::geometric(1e-1, 1e-3, 4, 1.0);
        let err = coherence_residual(
            &fx.family,
            &j,
            &l,
            &MultiIndex::new(vec![0]),
            &MultiIndex::new(vec![1]),
            &SectorPoint::new(vec![]),
            &ray,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }
}

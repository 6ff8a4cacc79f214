use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::seqcore::WeightSequence;

use super::approx::{approximant, modulus_power};
use super::family::{FunctionHandle, TotalFamily};
use super::multiindex::MultiIndex;
use super::point::{GridSpec, SectorPoint};

/// A maximum over a sampling grid and where it was attained.
#[derive(Debug, Clone, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    /// Index into the grid's point list.
    pub argmax: usize,
    pub point: SectorPoint,
}

fn grid_max(
    points: Vec<SectorPoint>,
    mut f: impl FnMut(&SectorPoint) -> Result<f64>,
) -> Result<SupEstimate> {
    let mut best: Option<(f64, usize)> = None;
    for (k, z) in points.iter().enumerate() {
        let v = f(z)?;
        // NaN never wins, so a single bad sample cannot hide the others
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, k));
        }
    }
    let (value, argmax) = best.ok_or_else(|| Error::Invalid("empty sampling grid".into()))?;
    Ok(SupEstimate {
        value,
        argmax,
        point: points[argmax].clone(),
    })
}

/// `max_T |f(z) - App_alpha(z)| / |z|^alpha` over the grid.
pub fn remainder_sup(
    f: &FunctionHandle,
    family: &TotalFamily,
    alpha: &MultiIndex,
    grid: &GridSpec,
) -> Result<SupEstimate> {
    if f.opening() != family.opening() {
        return Err(Error::Invalid(
            "function and family live on different polysectors".into(),
        ));
    }
    let points = grid.points(family.opening())?;
    grid_max(points, |z| {
        let app = approximant(family, alpha, z)?;
        Ok((f.eval_unchecked(z.components()) - app).norm() / modulus_power(z, alpha))
    })
}

/// `max_T |D^alpha f(z)|` over the grid; needs a derivative evaluator.
pub fn deriv_sup(df: &FunctionHandle, alpha: &MultiIndex, grid: &GridSpec) -> Result<SupEstimate> {
    if !df.has_derivative() {
        return Err(Error::MissingDerivative);
    }
    if alpha.len() != df.arity() {
        return Err(Error::Invalid(alloc::format!(
            "order {alpha} does not match {} variables",
            df.arity()
        )));
    }
    let points = grid.points(df.opening())?;
    grid_max(points, |z| Ok(derivative(df, alpha, z).norm()))
}

fn derivative(df: &FunctionHandle, alpha: &MultiIndex, z: &SectorPoint) -> Complex64 {
    df.derivative_unchecked(alpha, z.components())
        .expect("derivative evaluator checked by caller")
}

/// Empirical class constant together with its per-order profile.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipEstimate {
    /// Maximum of `per_order`.
    pub a_hat: f64,
    /// Entry `j - 1` is the grid maximum of
    /// `(|D^J f(z)| / (j! M_j))^{1/j}` over `|J| = j`.
    pub per_order: Vec<f64>,
}

/// Least `A` for which `|D^J f| <= A^{|J|} |J|! M_{|J|}` holds on the
/// sampled grid for `1 <= |J| <= j_max`. Only bounded grids are sampled, so
/// the value says nothing about the unbounded part of the sector.
pub fn membership_constant(
    df: &FunctionHandle,
    m: &WeightSequence,
    grid: &GridSpec,
    j_max: u32,
) -> Result<MembershipEstimate> {
    if !df.has_derivative() {
        return Err(Error::MissingDerivative);
    }
    m.ensure_index("J_max", j_max as usize)?;
    let points = grid.points(df.opening())?;
    let mut per_order = Vec::with_capacity(j_max as usize);
    for j in 1..=j_max {
        let scale = math::ln_factorial(j as u64) + m.lm(j as usize);
        let mut best = 0.0f64;
        for alpha in MultiIndex::of_modulus(df.arity(), j) {
            for z in &points {
                let v = math::exp((math::ln(derivative(df, &alpha, z).norm()) - scale) / j as f64);
                best = best.max(v);
            }
        }
        per_order.push(best);
    }
    let a_hat = per_order.iter().copied().fold(0.0, f64::max);
    Ok(MembershipEstimate { a_hat, per_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyasym::fixtures;
    use crate::polyasym::point::Polar;
    use alloc::vec;

    #[test]
    fn flat_remainder_profile() {
        // |e^{-1/x}| / x^p peaks at x = 1/p with value (p/e)^p
        let fx = fixtures::gevrey_flat(1.0, 1, 6).unwrap();
        let grid = GridSpec {
            radial: 4001,
            angular: 1,
            ..GridSpec::default()
        };
        for p in 1..=6u32 {
            let s =
                remainder_sup(&fx.function, &fx.family, &MultiIndex::new(vec![p]), &grid).unwrap();
            let expect = math::powi(p as f64 / math::E, p as i32);
            assert!(
                (s.value - expect).abs() < 1e-5 * expect,
                "p={p}: {} vs {expect}",
                s.value
            );
            assert!((s.point.0[0].modulus - 1.0 / p as f64).abs() < 2e-3);
        }
    }

    #[test]
    fn exact_polynomial_remainder_vanishes() {
        let c = Complex64::new(0.5, -1.0);
        let fx = fixtures::poly(vec![1.0, 1.0], 6, vec![(c, MultiIndex::new(vec![1, 2]))]).unwrap();
        // away from the vertex, where dividing by |z|^alpha does not magnify roundoff
        let grid = GridSpec {
            r_min: 0.1,
            ..GridSpec::default()
        };
        let s = remainder_sup(
            &fx.function,
            &fx.family,
            &MultiIndex::new(vec![2, 3]),
            &grid,
        )
        .unwrap();
        assert!(s.value <= 1e-12);
    }

    #[test]
    fn derivative_sup_of_exponential() {
        let fx = fixtures::exp_sum(vec![1.0, 1.0], 2).unwrap();
        let grid = GridSpec::default();
        let s = deriv_sup(&fx.function, &MultiIndex::new(vec![2, 1]), &grid).unwrap();
        assert!((s.value - math::exp(2.0)).abs() < 1e-12);
        assert_eq!(s.point.0, vec![Polar::real(1.0), Polar::real(1.0)]);
        let bare = FunctionHandle::new(vec![1.0], |_| Complex64::new(1.0, 0.0));
        assert_eq!(
            deriv_sup(&bare, &MultiIndex::new(vec![1]), &grid),
            Err(Error::MissingDerivative)
        );
        let low = GridSpec {
            r_min: 1e-8,
            ..grid
        };
        assert!(matches!(
            deriv_sup(&fx.function, &MultiIndex::new(vec![1, 1]), &low),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn membership_of_simple_functions() {
        let grid = GridSpec::default();
        let zero = FunctionHandle::zero(vec![1.0]);
        let g0 = WeightSequence::gevrey(0.0, 64).unwrap();
        assert_eq!(
            membership_constant(&zero, &g0, &grid, 10).unwrap().a_hat,
            0.0
        );

        let e = fixtures::exp_sum(vec![1.0], 1).unwrap();
        let est = membership_constant(&e.function, &g0, &grid, 40).unwrap();
        // (e / j!)^{1/j} decreases to 0
        assert!((est.per_order[0] - math::E).abs() < 1e-12);
        assert!(est.per_order.windows(2).all(|w| w[1] < w[0]));
        assert!(est.per_order[39] < 0.1);

        let flat = fixtures::gevrey_flat(1.0, 1, 1).unwrap();
        let g1 = WeightSequence::gevrey(1.0, 64).unwrap();
        let fine = GridSpec {
            radial: 200,
            ..grid
        };
        let est = membership_constant(&flat.function, &g1, &fine, 60).unwrap();
        // the profile keeps rising but levels off
        let p = &est.per_order;
        assert!(p[59] - p[39] < p[39] - p[19]);
        assert!(est.a_hat < 1.25 * est.per_order[19]);
    }
}

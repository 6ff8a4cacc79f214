use std::f64::consts::PI;

use carleman_core::polyasym::{
    approximant, borel, coherence_residual, deriv_sup, remainder_sup, IndexSubset, MultiIndex,
    Polar, Ray, SectorPoint,
};
use carleman_core::Complex64;
use serde_json::Value;

use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::report::{num, nums, Obj};

use super::Section;

/// Radii along which coherence limits are extrapolated.
const RAY_START: f64 = 1e-1;
const RAY_END: f64 = 1e-4;
const RAY_POINTS: usize = 12;
/// Modulus of the variables held fixed in coherence checks.
const BASE_RADIUS: f64 = 0.5;
const SAMPLE_RADII: usize = 5;

fn alpha_json(a: &MultiIndex) -> Value {
    Value::Array(a.entries().iter().map(|&k| Value::from(k)).collect())
}

fn point_json(z: &SectorPoint) -> Value {
    Value::Array(
        z.components()
            .iter()
            .map(|p| nums([p.modulus, p.arg]))
            .collect(),
    )
}

fn complex_json(c: Complex64) -> Value {
    nums([c.re, c.im])
}

fn modulus_power(z: &SectorPoint, alpha: &MultiIndex) -> f64 {
    z.components()
        .iter()
        .zip(alpha.entries())
        .map(|(p, &k)| p.modulus.powi(k as i32))
        .product()
}

/// Diagonal sample of the grid's subpolysector: every component at the same
/// radius, arguments at the edges and on the bisector.
fn sample_points(settings: &Settings, opening: &[f64]) -> Vec<SectorPoint> {
    let g = &settings.grid;
    let step = (g.r_max / g.r_min).ln() / (SAMPLE_RADII - 1) as f64;
    let mut out = Vec::new();
    for k in 0..SAMPLE_RADII {
        let r = if k + 1 == SAMPLE_RADII {
            g.r_max
        } else {
            g.r_min * (step * k as f64).exp()
        };
        for t in [-1.0, 0.0, 1.0] {
            out.push(SectorPoint::new(
                opening
                    .iter()
                    .map(|gamma| Polar::new(r, t * g.margin * gamma * PI / 2.0))
                    .collect(),
            ));
        }
    }
    out
}

pub(super) fn run(settings: &Settings, command: &str) -> Result<Section> {
    let spec = settings.require_fixture(command)?;
    let fx = settings.build_fixture(spec)?;
    let fam = &fx.family;
    let f = &fx.function;
    let n = fam.n();
    let depth = fam.depth();
    let mut out = Section::default();
    out.set("fixture", spec.to_string());
    out.set("opening", nums(fam.opening().iter().copied()));
    out.set("n", n as u64);
    out.set("D", depth);

    let top = match &settings.order {
        Some(o) if o.len() != n => {
            return Err(CliError::config(format!(
                "order: {} entries for {n} variables",
                o.len()
            )));
        }
        Some(o) => MultiIndex::new(o.clone()),
        // largest diagonal order whose approximant stays within the depth
        None => MultiIndex::new(vec![depth / n as u32 + 1; n]),
    };
    out.set("order", alpha_json(&top));
    let mut rows = Vec::new();
    for z in sample_points(settings, fam.opening()) {
        let value = f
            .eval(z.components())
            .and_then(|fz| Ok((fz, approximant(fam, &top, &z)?)));
        let mut row = Obj::new()
            .with("alpha", alpha_json(&top))
            .with("point", point_json(&z));
        match value {
            Ok((fz, app)) => {
                row.set("f", complex_json(fz));
                row.set("approximant", complex_json(app));
                row.set("remainder", num((fz - app).norm()));
            }
            Err(e) => {
                out.failed = true;
                row.set("error", super::error_json(&e));
            }
        }
        rows.push(row.into());
    }
    out.set("approximant", Value::Array(rows));

    // coherence residuals over disjoint nonempty J, L and orders within depth
    let ray = Ray::geometric(RAY_START, RAY_END, RAY_POINTS, 0.0);
    let subsets = IndexSubset::all(n)?;
    let mut rows = Vec::new();
    for j in &subsets {
        for l in subsets.iter().filter(|l| j.is_disjoint(l)) {
            let rest = j.union(l)?.complement_indices();
            let base =
                SectorPoint::new(rest.iter().map(|_| Polar::new(BASE_RADIUS, 0.0)).collect());
            for aj in MultiIndex::up_to_modulus(j.len(), depth) {
                let room = depth - aj.modulus() as u32;
                for al in MultiIndex::up_to_modulus(l.len(), room) {
                    let mut row = Obj::new()
                        .with("J", Value::from(j.indices()))
                        .with("L", Value::from(l.indices()))
                        .with("alpha_J", alpha_json(&aj))
                        .with("alpha_L", alpha_json(&al));
                    match coherence_residual(fam, j, l, &aj, &al, &base, &ray) {
                        Ok(r) => row.set("residual", num(r)),
                        Err(e) => {
                            out.failed = true;
                            row.set("error", super::error_json(&e));
                        }
                    }
                    rows.push(row.into());
                }
            }
        }
    }
    out.set("coherence", Value::Array(rows));

    let rows = borel(fam)?
        .into_iter()
        .map(|(a, c)| {
            Obj::new()
                .with("alpha", alpha_json(&a))
                .with("value", complex_json(c))
                .into()
        })
        .collect();
    out.set("borel", Value::Array(rows));

    // remainder against derivative bound, P_hat <= Q_hat / alpha!
    let mut rows = Vec::new();
    for a in MultiIndex::up_to_modulus(n, depth) {
        let mut row = Obj::new().with("alpha", alpha_json(&a));
        let sups = remainder_sup(f, fam, &a, &settings.grid)
            .and_then(|p| Ok((p, deriv_sup(f, &a, &settings.grid)?)));
        match sups {
            Ok((p, q)) => {
                let bound = q.value / a.factorial();
                // the remainder is divided by |z|^alpha, which magnifies
                // cancellation error near the vertex
                let fz = f.eval(p.point.components())?;
                let app = approximant(fam, &a, &p.point)?;
                let floor =
                    16.0 * f64::EPSILON * (fz.norm() + app.norm()) / modulus_power(&p.point, &a);
                let status = if p.value <= bound {
                    "holds"
                } else if p.value - bound <= floor {
                    "within_roundoff"
                } else {
                    "violated"
                };
                row.set("P_hat", num(p.value));
                row.set("P_point", point_json(&p.point));
                row.set("Q_hat", num(q.value));
                row.set("bound", num(bound));
                row.set("roundoff", num(floor));
                row.set("status", status);
            }
            Err(e) => {
                out.failed = true;
                row.set("error", super::error_json(&e));
            }
        }
        rows.push(row.into());
    }
    out.set("remainder", Value::Array(rows));
    Ok(out)
}

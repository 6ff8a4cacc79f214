//! Acceptance gate: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use carleman_core::polyasym::{
    approximant, approximant_bruteforce, coherence_residual, deriv_sup, fixtures, remainder_sup,
    FamilyEntry, FunctionHandle, GridSpec, IndexSubset, MultiIndex, Polar, Ray, SectorPoint,
    TotalFamily,
};
use carleman_core::verdicts::{
    check_watson_condition, classify_series, log_integral, quasianalytic_verdict,
    s_quasianalytic_verdict, WatsonCondition,
};
use carleman_core::{
    math, Complex64, PolysectorOpening, QaKind, QaVerdict, Route, SeriesKind, Status,
    WeightSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: carleman_core::Error) -> String {
    e.to_string()
}

const RANGE: usize = 4096;
const ALPHAS: [f64; 3] = [0.5, 1.0, 2.0];

fn gammas(alpha: f64) -> [f64; 5] {
    [alpha / 2.0, 0.9 * alpha, alpha, 1.5 * alpha, 2.0 * alpha]
}

fn gevrey(alpha: f64) -> WeightSequence {
    WeightSequence::gevrey(alpha, carleman_core::seqcore::DEFAULT_GEVREY_P_MAX).unwrap()
}

fn expect_kind(v: &QaVerdict, qa: bool) -> bool {
    v.kind
        == if qa {
            QaKind::QuasiAnalytic
        } else {
            QaKind::NotQuasiAnalytic
        }
}

fn watson_lemma() -> Outcome {
    let mut n = 0;
    for alpha in ALPHAS {
        let m = gevrey(alpha);
        for g in gammas(alpha) {
            let s = PolysectorOpening::new(vec![g]).unwrap();
            let v = quasianalytic_verdict(&m, &s, RANGE).map_err(err)?;
            let route = v.series.as_ref().map(|d| d.route);
            ensure(route == Some(Route::Symbolic), || {
                format!("alpha={alpha} gamma={g}: route {route:?}")
            })?;
            ensure(expect_kind(&v, g >= alpha), || {
                format!("alpha={alpha} gamma={g}: {:?}", v.kind)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} verdicts"))
}

fn max_min_dichotomy() -> Outcome {
    let mut n = 0;
    for alpha in ALPHAS {
        let m = gevrey(alpha);
        let one = |g: f64, sqa: bool| -> Result<QaKind, String> {
            let s = PolysectorOpening::new(vec![g]).unwrap();
            let v = if sqa {
                s_quasianalytic_verdict(&m, &s, RANGE)
            } else {
                quasianalytic_verdict(&m, &s, RANGE)
            };
            v.map(|v| v.kind).map_err(err)
        };
        for g1 in gammas(alpha) {
            for g2 in gammas(alpha) {
                let s = PolysectorOpening::new(vec![g1, g2]).unwrap();
                let sqa = s_quasianalytic_verdict(&m, &s, RANGE).map_err(err)?;
                let qa = quasianalytic_verdict(&m, &s, RANGE).map_err(err)?;
                let (hi, lo) = (g1.max(g2), g1.min(g2));
                ensure(sqa.kind == one(hi, true)?, || {
                    format!("alpha={alpha} ({g1},{g2}): s_qa {:?}", sqa.kind)
                })?;
                ensure(qa.kind == one(lo, false)?, || {
                    format!("alpha={alpha} ({g1},{g2}): qa {:?}", qa.kind)
                })?;
                if qa.kind == QaKind::QuasiAnalytic {
                    ensure(sqa.kind == QaKind::QuasiAnalytic, || {
                        format!("alpha={alpha} ({g1},{g2}): QA without S_QA")
                    })?;
                }
                ensure(
                    qa.kind != QaKind::Inconclusive && sqa.kind != QaKind::Inconclusive,
                    || format!("alpha={alpha} ({g1},{g2}): inconclusive"),
                )?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} openings"))
}

const LOG_GEVREY_GRID: [(f64, f64); 5] =
    [(1.0, 0.5), (1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (2.0, 3.0)];

fn watson_condition_threshold() -> Outcome {
    let range = 1 << 14;
    for (a, b) in LOG_GEVREY_GRID {
        let m = WeightSequence::log_gevrey(a, b, carleman_core::seqcore::DEFAULT_LOG_GEVREY_P_MAX)
            .unwrap();
        let r = check_watson_condition(&m, range, 1e3).map_err(err)?;
        let expect = if b <= a {
            WatsonCondition::Holds
        } else {
            WatsonCondition::Fails
        };
        ensure(r.status == expect, || {
            format!("({a},{b}): {:?}, series {:?}", r.status, r.series.status)
        })?;
        if (a, b) == (1.0, 1.0) {
            ensure(
                r.series.status == Status::Diverges && r.series.route == Route::Symbolic,
                || {
                    format!(
                        "boundary (1,1) classified {:?} via {:?}",
                        r.series.status, r.series.route
                    )
                },
            )?;
        }
    }
    Ok(format!("{} sequences", LOG_GEVREY_GRID.len()))
}

fn growth_index_accuracy() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut cases: Vec<(String, WeightSequence, f64)> = [0.5, 1.0, 2.0, 3.0]
        .iter()
        .map(|&a| (format!("Gevrey({a})"), gevrey(a), a))
        .collect();
    for (a, b) in [(1.0, 1.0), (2.0, 1.0)] {
        let m = WeightSequence::log_gevrey(a, b, carleman_core::seqcore::DEFAULT_LOG_GEVREY_P_MAX)
            .unwrap();
        cases.push((format!("LogGevrey({a},{b})"), m, a));
    }
    for (name, m, a) in cases {
        let g = m.growth_index(RANGE, 1e3).map_err(err)?;
        let rel = (g.gamma_hat - a).abs() / a;
        ensure(rel <= 0.05, || format!("{name}: gamma_hat {}", g.gamma_hat))?;
        worst = worst.max(rel);
    }
    Ok(format!("max relative error {worst:.2e}"))
}

fn ostrowski_oracle() -> Outcome {
    let range = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut families = vec![gevrey(0.5), gevrey(1.0), gevrey(2.0)];
    for (a, b) in [(1.0, 1.0), (1.0, 2.0), (2.0, 1.0)] {
        families.push(
            WeightSequence::log_gevrey(a, b, carleman_core::seqcore::DEFAULT_LOG_GEVREY_P_MAX)
                .unwrap(),
        );
    }
    let q: Vec<f64> = (1..=range)
        .map(|p| 0.7 * math::ln(p as f64) + 0.1 * (p % 3) as f64 / (p as f64))
        .collect();
    families.push(WeightSequence::from_log_quotients(&q).unwrap());
    let mut worst: f64 = 0.0;
    for m in &families {
        for _ in 0..100 {
            let r = math::exp(rng.gen_range(math::ln(1e-2)..math::ln(1e8)));
            let fast = m.ostrowski(r, range).map_err(err)?;
            let slow = m.ostrowski_bruteforce(r, range).map_err(err)?;
            let d = (fast.log_t - slow.log_t).abs() / slow.log_t.abs().max(1.0);
            ensure(d <= 1e-12, || {
                format!("{:?} r={r}: {} vs {}", m.family(), fast.log_t, slow.log_t)
            })?;
            worst = worst.max(d);
        }
    }
    Ok(format!(
        "{} radii, max deviation {worst:.1e}",
        100 * families.len()
    ))
}

fn ostrowski_asymptotics() -> Outcome {
    let r: f64 = 1e8;
    let mut out = Vec::new();
    for alpha in [1.0, 2.0] {
        // the maximizing index is near r^{1/alpha}, so the range must reach past it
        let m = WeightSequence::gevrey(alpha, 1 << 30).unwrap();
        let v = m.ostrowski(r, 1 << 30).map_err(err)?;
        let ratio = v.log_t / math::powf(r, 1.0 / alpha);
        ensure(
            !v.saturated && (0.98 * alpha..=1.02 * alpha).contains(&ratio),
            || format!("alpha={alpha}: ratio {ratio}, saturated {}", v.saturated),
        )?;
        out.push(format!("{ratio:.4}"));
    }
    Ok(format!("ratios {}", out.join(", ")))
}

fn series_integral_agreement() -> Outcome {
    // (sequence, opening) pairs of the first three criteria
    let mut points: Vec<(String, WeightSequence, f64)> = Vec::new();
    for alpha in ALPHAS {
        for g in gammas(alpha) {
            points.push((format!("Gevrey({alpha})"), gevrey(alpha), g));
        }
    }
    for (a, b) in LOG_GEVREY_GRID {
        let m = WeightSequence::log_gevrey(a, b, carleman_core::seqcore::DEFAULT_LOG_GEVREY_P_MAX)
            .unwrap();
        for g in [a / 2.0, a, 2.0 * a] {
            points.push((format!("LogGevrey({a},{b})"), m.clone(), g));
        }
    }
    let (mut compared, mut inconclusive) = (0, 0);
    for (name, m, g) in &points {
        let series =
            classify_series(m, 1.0 / (g + 1.0), SeriesKind::Korenbljum, RANGE).map_err(err)?;
        let range = m.p_max().min(1 << 20);
        let integral = log_integral(m, g + 1.0, true, 1.0, 1e8, range).map_err(err)?;
        let (a, b) = (series.status, integral.verdict.status);
        if a == Status::Inconclusive || b == Status::Inconclusive {
            inconclusive += 1;
            continue;
        }
        ensure(a == b, || {
            format!("{name} gamma={g}: series {a:?}, integral {b:?}")
        })?;
        compared += 1;
    }
    Ok(format!(
        "{compared} agreements, {inconclusive} skipped as inconclusive, 0 disagreements"
    ))
}

fn random_point(rng: &mut ChaCha8Rng, opening: &[f64]) -> SectorPoint {
    SectorPoint::new(
        opening
            .iter()
            .map(|g| {
                Polar::new(
                    rng.gen_range(0.1..2.0),
                    rng.gen_range(-0.95..0.95) * g * math::PI / 2.0,
                )
            })
            .collect(),
    )
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A family whose entries are random affine functions of the remaining variables.
fn random_family(rng: &mut ChaCha8Rng, opening: Vec<f64>, depth: u32) -> TotalFamily {
    let n = opening.len();
    let mut fam = TotalFamily::new(opening, depth).unwrap();
    for j in IndexSubset::all(n).unwrap() {
        for a in MultiIndex::up_to_modulus(j.len(), depth) {
            let entry = if j.is_full() {
                FamilyEntry::Scalar(random_complex(rng))
            } else {
                let coef: Vec<Complex64> = (0..=n - j.len()).map(|_| random_complex(rng)).collect();
                let h = FunctionHandle::new(fam.sub_opening(&j.complement_indices()), move |z| {
                    z.iter()
                        .zip(&coef[1..])
                        .fold(coef[0], |acc, (p, c)| acc + c * p.to_complex())
                });
                FamilyEntry::Function(h)
            };
            fam.insert(j, a, entry).unwrap();
        }
    }
    fam
}

fn approximant_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let n = rng.gen_range(1..=3usize);
        let opening: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..3.0)).collect();
        let total = rng.gen_range(0..=6u32);
        let mut alpha = vec![0u32; n];
        for _ in 0..total {
            alpha[rng.gen_range(0..n)] += 1;
        }
        let alpha = MultiIndex::new(alpha);
        let fam = random_family(&mut rng, opening.clone(), 6);
        let z = random_point(&mut rng, &opening);
        let fast = approximant(&fam, &alpha, &z).map_err(err)?;
        let slow = approximant_bruteforce(&fam, &alpha, &z).map_err(err)?;
        let scale = slow.norm();
        let d = if scale == 0.0 {
            fast.norm()
        } else {
            (fast - slow).norm() / scale
        };
        ensure(d <= 1e-12, || {
            format!("case {case}: alpha {alpha}, {fast} vs {slow}")
        })?;
        worst = worst.max(d);
    }
    Ok(format!("200 cases, max relative deviation {worst:.1e}"))
}

fn coherence_fixture() -> Outcome {
    let fx = fixtures::exp_sum(vec![1.0, 1.0], 3).unwrap();
    let ray = Ray::geometric(1e-1, 1e-4, 12, 0.0);
    let base = SectorPoint::new(vec![]);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (jx, lx) in [(0usize, 1usize), (1, 0)] {
        let j = IndexSubset::singleton(2, jx).unwrap();
        let l = IndexSubset::singleton(2, lx).unwrap();
        for aj in 0..=3u32 {
            for al in 0..=3 - aj {
                let r = coherence_residual(
                    &fx.family,
                    &j,
                    &l,
                    &MultiIndex::new(vec![aj]),
                    &MultiIndex::new(vec![al]),
                    &base,
                    &ray,
                )
                .map_err(err)?;
                ensure(r < 1e-6, || {
                    format!("J={j} L={l} alpha=({aj},{al}): residual {r:e}")
                })?;
                worst = worst.max(r);
                count += 1;
            }
        }
    }
    let eps = 1e-2;
    let mut bad = fx.family.clone();
    bad.insert(
        IndexSubset::full(2).unwrap(),
        MultiIndex::new(vec![1, 1]),
        FamilyEntry::Scalar(Complex64::new(1.0 + eps, 0.0)),
    )
    .unwrap();
    let j = IndexSubset::singleton(2, 0).unwrap();
    let l = IndexSubset::singleton(2, 1).unwrap();
    let r = coherence_residual(
        &bad,
        &j,
        &l,
        &MultiIndex::new(vec![1]),
        &MultiIndex::new(vec![1]),
        &base,
        &ray,
    )
    .map_err(err)?;
    ensure((5e-3..=2e-2).contains(&r), || {
        format!("perturbed residual {r:e}")
    })?;
    Ok(format!(
        "{count} residuals, max {worst:.1e}; perturbed {r:.3e}"
    ))
}

fn remainder_derivative_inequality() -> Outcome {
    let c = |x: f64| Complex64::new(x, 0.0);
    let poly_terms = vec![
        (c(1.0), MultiIndex::new(vec![0, 0])),
        (c(0.5), MultiIndex::new(vec![2, 1])),
        (c(2.0), MultiIndex::new(vec![1, 3])),
        (c(0.25), MultiIndex::new(vec![4, 0])),
    ];
    let cases = vec![
        ("exp_sum n=1", fixtures::exp_sum(vec![1.0], 4).unwrap()),
        ("exp_sum n=2", fixtures::exp_sum(vec![1.0, 1.0], 4).unwrap()),
        (
            "poly n=2",
            fixtures::poly(vec![1.0, 1.0], 4, poly_terms).unwrap(),
        ),
        ("gevrey_flat s=1", fixtures::gevrey_flat(1.0, 1, 4).unwrap()),
        (
            "gevrey_flat s=0.5 n=2",
            fixtures::gevrey_flat(0.5, 2, 4).unwrap(),
        ),
    ];
    // f - App is a difference of O(1) values divided by |z|^alpha; the inner
    // radius keeps that roundoff (about eps / r^4) below the 1e-9 allowance
    let grid = GridSpec {
        radial: 32,
        angular: 5,
        r_min: 0.05,
        ..GridSpec::default()
    };
    let mut count = 0;
    let mut slack = f64::INFINITY;
    for (name, fx) in &cases {
        for alpha in MultiIndex::up_to_modulus(fx.family.n(), 4) {
            let p = remainder_sup(&fx.function, &fx.family, &alpha, &grid).map_err(err)?;
            let q = deriv_sup(&fx.function, &alpha, &grid).map_err(err)?;
            let bound = q.value / alpha.factorial();
            ensure(p.value <= bound + 1e-9, || {
                format!("{name} alpha={alpha}: P {} > Q/alpha! {bound}", p.value)
            })?;
            slack = slack.min(bound - p.value);
            count += 1;
        }
    }
    Ok(format!(
        "{count} (fixture, order) pairs, min slack {slack:.2e}"
    ))
}

fn axiom_suite() -> Outcome {
    let mut seqs: Vec<(String, WeightSequence)> = ALPHAS
        .iter()
        .map(|&a| (format!("Gevrey({a})"), gevrey(a)))
        .collect();
    seqs.push((
        "LogGevrey(1,1)".into(),
        WeightSequence::log_gevrey(1.0, 1.0, carleman_core::seqcore::DEFAULT_LOG_GEVREY_P_MAX)
            .unwrap(),
    ));
    for (name, m) in &seqs {
        for rep in m.check_strong_regularity(RANGE).map_err(err)? {
            ensure(rep.holds && rep.stability_flag, || {
                format!("{name}: {rep:?}")
            })?;
        }
    }
    let g0 = gevrey(0.0).check_gamma1(RANGE).map_err(err)?;
    ensure(!g0.stability_flag, || {
        format!("Gevrey(0) gamma1 reported stable: {g0:?}")
    })?;
    Ok(format!(
        "{} sequences strongly regular, Gevrey(0) gamma1 unstable",
        seqs.len()
    ))
}

type Check = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 11] = [
        (
            "watson lemma, one variable",
            watson_lemma,
            Duration::from_secs(1),
        ),
        (
            "polysector max/min dichotomy",
            max_min_dichotomy,
            Duration::from_secs(5),
        ),
        (
            "watson condition threshold",
            watson_condition_threshold,
            Duration::from_secs(10),
        ),
        (
            "growth index accuracy",
            growth_index_accuracy,
            Duration::from_secs(5),
        ),
        (
            "ostrowski oracle equivalence",
            ostrowski_oracle,
            Duration::from_secs(5),
        ),
        (
            "ostrowski asymptotics",
            ostrowski_asymptotics,
            Duration::from_secs(1),
        ),
        (
            "series/integral cross-check",
            series_integral_agreement,
            Duration::from_secs(30),
        ),
        (
            "approximant oracle",
            approximant_oracle,
            Duration::from_secs(2),
        ),
        (
            "coherence fixture",
            coherence_fixture,
            Duration::from_secs(2),
        ),
        (
            "remainder/derivative inequality",
            remainder_derivative_inequality,
            Duration::from_secs(5),
        ),
        ("axiom suite", axiom_suite, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} {:>2} {name} ({:.3}s): {detail}",
            k + 1,
            took.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

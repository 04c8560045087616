//! Bound-envelope sweeps over F_p: general sets, progressions and small
//! doubling.

use hypenergy_core::energies::{check_progression_energy, report_e_times_small_doubling};
use hypenergy_core::incidence::{bound_progression, bound_r_aa, bound_thm1, bound_thm_hyp_full};
use hypenergy_core::{rep_multiplicative, FieldContext, FpSet};
use rand::seq::index::sample;

use super::{run_tasks, Result, SuiteConfig, Task};
use crate::call;
use crate::rows::{ExperimentRow, Labels};
use crate::setspec::{seeded_rng, SetSpec};

/// Four set descriptions, filled from the config where given.
type Quad = [SetSpec; 4];

fn with_overrides(cfg: &SuiteConfig, mut q: Quad) -> Quad {
    for (slot, given) in q.iter_mut().zip([&cfg.a, &cfg.b, &cfg.c, &cfg.d]) {
        if let Some(s) = given {
            *slot = s.clone();
        }
    }
    q
}

fn isqrt(p: u64) -> u64 {
    ((p as f64).sqrt() as u64).max(1)
}

fn thm1_families(cfg: &SuiteConfig, p: u64) -> Vec<Quad> {
    let r = |n: u64, i: u64| SetSpec::Random {
        n: n.min(p - 1),
        seed: cfg.instance_seed(i),
    };
    let root = isqrt(p);
    let big = (4 * root).min(p / 2);
    let mut out = vec![
        [r(root, 0), r(root, 1), r(root, 2), r(root, 3)],
        [r(big, 4), r(big, 5), r(big, 6), r(big, 7)],
        [
            r(big, 8),
            SetSpec::first(root),
            SetSpec::first(root),
            r(big, 9),
        ],
        [
            SetSpec::first(big),
            SetSpec::first(big),
            SetSpec::first(big),
            SetSpec::first(big),
        ],
        [
            SetSpec::Explicit(vec![1]),
            SetSpec::Explicit(vec![1]),
            SetSpec::Explicit(vec![1]),
            SetSpec::Explicit(vec![1]),
        ],
    ];
    if cfg.a.is_some() || cfg.b.is_some() || cfg.c.is_some() || cfg.d.is_some() {
        out.truncate(1);
    }
    out.into_iter().map(|q| with_overrides(cfg, q)).collect()
}

pub fn thm1(cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    let mut tasks: Vec<Task> = Vec::new();
    for &p in &cfg.primes {
        for q in thm1_families(cfg, p) {
            tasks.push(Box::new(move || {
                let ctx = FieldContext::new(p)?;
                let [a, b, c, d] = [
                    q[0].realize(&ctx)?,
                    q[1].realize(&ctx)?,
                    q[2].realize(&ctx)?,
                    q[3].realize(&ctx)?,
                ];
                let labels = Labels::new(&q[0], &q[1], &q[2], &q[3]);
                let lambda = cfg.lambda;
                let basic = cfg.envelope(call!(bound_thm1(&a, &b, &c, &d, lambda))?, p);
                let full = cfg.envelope(call!(bound_thm_hyp_full(&a, &b, &c, &d, lambda))?, p);
                Ok(vec![
                    ExperimentRow::from_report("thm1", p, labels.clone(), lambda, &basic),
                    ExperimentRow::from_report("thm1/full", p, labels, lambda, &full),
                ])
            }));
        }
    }
    run_tasks(tasks, cfg.timings)
}

/// Progression lengths used by the progression sweeps.
pub const PROGRESSION_LENGTHS: &[u64] = &[10, 30, 100];

pub fn progression(cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    let mut tasks: Vec<Task> = Vec::new();
    for &p in &cfg.primes {
        for (i, &n) in PROGRESSION_LENGTHS.iter().enumerate() {
            if 2 * n >= p {
                continue;
            }
            let r = |j: u64| SetSpec::Random {
                n,
                seed: cfg.instance_seed(2 * i as u64 + j),
            };
            let q = with_overrides(cfg, [r(0), SetSpec::first(n), SetSpec::first(n), r(1)]);
            tasks.push(Box::new(move || {
                let ctx = FieldContext::new(p)?;
                let [a, b, c, d] = [
                    q[0].realize(&ctx)?,
                    q[1].realize(&ctx)?,
                    q[2].realize(&ctx)?,
                    q[3].realize(&ctx)?,
                ];
                let r = cfg.envelope(call!(bound_progression(&a, &b, &c, &d, cfg.lambda))?, p);
                let labels = Labels::new(&q[0], &q[1], &q[2], &q[3]);
                let mut rows = vec![ExperimentRow::from_report(
                    "progression",
                    p,
                    labels,
                    cfg.lambda,
                    &r,
                )];
                // the energy estimate needs unit-step progressions, so B and C stand in
                let (x, y) = (&q[1], &q[2]);
                let e = call!(check_progression_energy(&b, &c))?;
                rows.push(ExperimentRow::from_report(
                    "progression/e-times",
                    p,
                    Labels::two(x, y),
                    1,
                    &e,
                ));
                Ok(rows)
            }));
        }
    }
    run_tasks(tasks, cfg.timings)
}

/// A set with small additive doubling and a description of how it was built.
struct SmallDoubling {
    label: String,
    set: FpSet,
}

fn small_doubling_families(
    cfg: &SuiteConfig,
    ctx: &std::sync::Arc<FieldContext>,
) -> Result<Vec<SmallDoubling>> {
    let p = ctx.p();
    if let Some(a) = &cfg.a {
        return Ok(vec![SmallDoubling {
            label: a.to_string(),
            set: a.realize(ctx)?,
        }]);
    }
    let mut out = Vec::new();
    let root = isqrt(p);
    let two_thirds = ((p as f64).powf(2.0 / 3.0) as u64).min(300);
    for n in [root, two_thirds] {
        let n = n.min(p / 4).max(2);
        let spec = SetSpec::first(n);
        out.push(SmallDoubling {
            label: spec.to_string(),
            set: spec.realize(ctx)?,
        });

        // two progressions with a common step, far apart
        let half = (n / 2).max(1);
        let (x, y) = (
            SetSpec::Ap {
                start: 1,
                step: 3,
                len: half,
            },
            SetSpec::Ap {
                start: (p / 3) as i64,
                step: 3,
                len: half,
            },
        );
        if 6 * half < p / 3 {
            out.push(SmallDoubling {
                label: format!("{x}+{y}"),
                set: x.realize(ctx)?.union(&y.realize(ctx)?)?,
            });
        }

        // a random half of a progression of length 2n
        let span = (2 * n).min(p / 2);
        let mut rng = seeded_rng(cfg.instance_seed(n), p);
        let picked: Vec<i64> = sample(&mut rng, span as usize, (span / 2).max(1) as usize)
            .into_iter()
            .map(|i| 1 + 2 * i as i64)
            .collect();
        let host = SetSpec::Ap {
            start: 1,
            step: 2,
            len: span,
        };
        out.push(SmallDoubling {
            label: format!("half-of:{host}@{}", cfg.instance_seed(n)),
            set: FpSet::new(ctx, picked),
        });
    }
    Ok(out)
}

pub fn r_aa(cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    let mut tasks: Vec<Task> = Vec::new();
    for &p in &cfg.primes {
        tasks.push(Box::new(move || {
            let ctx = FieldContext::new(p)?;
            let mut rows = Vec::new();
            for fam in small_doubling_families(cfg, &ctx)? {
                let a = &fam.set;
                // the most popular nonzero product, then the configured one
                let reps = rep_multiplicative(a, a)?;
                let popular = (1..p)
                    .max_by_key(|&x| (reps.get(x), std::cmp::Reverse(x)))
                    .unwrap_or(1) as i64;
                let mut lambdas = vec![popular];
                if cfg.lambda.rem_euclid(p as i64) != popular {
                    lambdas.push(cfg.lambda);
                }
                for lambda in lambdas {
                    let r = cfg.envelope(call!(bound_r_aa(a, lambda))?, p);
                    rows.push(ExperimentRow::from_report(
                        "rAA",
                        p,
                        Labels::one(&fam.label),
                        lambda,
                        &r,
                    ));
                }
                let e = report_e_times_small_doubling(a)?;
                rows.push(ExperimentRow::from_report(
                    "rAA/e-times",
                    p,
                    Labels::one(&fam.label),
                    1,
                    &e,
                ));
            }
            Ok(rows)
        }));
    }
    run_tasks(tasks, cfg.timings)
}

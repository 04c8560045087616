//! Bilinear Kloosterman sums with weights on short intervals.

use hypenergy_core::kloosterman::{
    bound_basic, bound_thm_nm, interval_instance, point_mass_instance, saving_exponent_scan,
    KloostermanTable, ScanInstance,
};
use hypenergy_core::{BoundReport, FieldContext, RhsTerm, WeightFn};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{run_tasks, HarnessError, Result, SuiteConfig, Task, SPECTRAL_PRIME_CAP};
use crate::call;
use crate::rows::{ExperimentRow, Labels};
use crate::setspec::{seeded_rng, SetSpec};

/// Weights with their labels and the progressions `[N]+t₁`, `[M]+t₂`
/// that contain their supports.
struct Pair {
    labels: Labels,
    alpha: WeightFn,
    beta: WeightFn,
    n: u64,
    m: u64,
    t1: u64,
    t2: u64,
}

fn interval(p: u64, n: u64, t: u64, label: String, f: impl Fn(u64) -> f64) -> (WeightFn, String) {
    let mut v = vec![0.0; p as usize];
    for x in 1..=n {
        v[((x + t) % p) as usize] = f(x);
    }
    (WeightFn::from_real(p, &v), label)
}

fn signs(rng: &mut ChaCha8Rng, n: u64) -> Vec<f64> {
    (0..=n)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect()
}

/// Smallest `(t, n)` with `{t+1, …, t+n}` covering the given residues.
fn covering_interval(p: u64, elems: &[u64]) -> (u64, u64) {
    match (elems.first(), elems.last()) {
        (Some(&lo), Some(&hi)) => ((lo + p - 1) % p, hi - lo + 1),
        _ => (0, 1),
    }
}

fn pairs(cfg: &SuiteConfig, p: u64) -> Result<Vec<Pair>> {
    let ctx = FieldContext::new(p)?;
    if cfg.a.is_some() || cfg.b.is_some() {
        let spec = |s: &Option<SetSpec>| {
            s.clone()
                .unwrap_or(SetSpec::first(((p as f64).sqrt() as u64).max(1)))
        };
        let (sa, sb) = (spec(&cfg.a), spec(&cfg.b));
        let (a, b) = (sa.realize(&ctx)?, sb.realize(&ctx)?);
        let (t1, n) = covering_interval(p, a.elems());
        let (t2, m) = covering_interval(p, b.elems());
        return Ok(vec![Pair {
            labels: Labels::two(&sa, &sb),
            alpha: WeightFn::indicator(&a),
            beta: WeightFn::indicator(&b),
            n,
            m,
            t1,
            t2,
        }]);
    }

    let mut rng = seeded_rng(cfg.seed, p);
    let pf = p as f64;
    let root = pf.sqrt() as u64;
    let third = (pf.cbrt() as u64).max(1);
    let two_thirds = (pf.powf(2.0 / 3.0) as u64).max(1);
    let far = p / 2;
    let mut out = Vec::new();
    let ones = |_| 1.0;
    for (n, m, t2) in [
        (root, root, 0),
        (third, two_thirds, far),
        (two_thirds, two_thirds, 0),
    ] {
        let (alpha, la) = interval(p, n, 0, format!("interval:1..{n}"), ones);
        let (beta, lb) = interval(p, m, t2, format!("interval:{}..{}", t2 + 1, t2 + m), ones);
        out.push(Pair {
            labels: Labels::two(la, lb),
            alpha,
            beta,
            n,
            m,
            t1: 0,
            t2,
        });
    }
    for (n, m) in [(root, root), (third, two_thirds)] {
        let (sa, sb) = (signs(&mut rng, n), signs(&mut rng, m));
        let (alpha, la) = interval(p, n, 0, format!("signs:1..{n}"), |x| sa[x as usize]);
        let (beta, lb) = interval(p, m, 0, format!("signs:1..{m}"), |x| sb[x as usize]);
        out.push(Pair {
            labels: Labels::two(la, lb),
            alpha,
            beta,
            n,
            m,
            t1: 0,
            t2: 0,
        });
    }
    // α = α₁α₂ with α₁ random signs and α₂ the indicator of the middle half
    let n = root.max(4);
    let s = signs(&mut rng, n);
    let (alpha, la) = interval(p, n, 0, format!("signs*interval:1..{n}"), |x| {
        if 4 * x > n && 4 * x <= 3 * n {
            s[x as usize]
        } else {
            0.0
        }
    });
    let (beta, lb) = interval(p, n, 0, format!("interval:1..{n}"), ones);
    out.push(Pair {
        labels: Labels::two(la, lb),
        alpha,
        beta,
        n,
        m: n,
        t1: 0,
        t2: 0,
    });
    Ok(out)
}

fn scan_instances(p: u64) -> Vec<ScanInstance> {
    let root = ((p as f64).sqrt() as u64).max(1);
    vec![
        interval_instance(p, root, 0),
        interval_instance(p, root, p / 2),
        interval_instance(p, (p as f64).powf(2.0 / 3.0) as u64, 0),
        point_mass_instance(p, 0),
    ]
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    if let Some(&p) = cfg.primes.iter().find(|&&p| p > SPECTRAL_PRIME_CAP) {
        return Err(HarnessError::Config(format!(
            "kloosterman-NM supports p <= {SPECTRAL_PRIME_CAP}, got {p}"
        )));
    }
    let mut tasks: Vec<Task> = Vec::new();
    for &p in &cfg.primes {
        tasks.push(Box::new(move || {
            let ctx = FieldContext::new(p)?;
            let table = KloostermanTable::new(&ctx);
            let mut rows = Vec::new();
            for pair in pairs(cfg, p)? {
                let nm = call!(bound_thm_nm(
                    &table,
                    &pair.alpha,
                    &pair.beta,
                    pair.n,
                    pair.m,
                    pair.t1,
                    pair.t2
                ))?;
                let nm = cfg.envelope(nm, p);
                rows.push(ExperimentRow::from_report(
                    "kloosterman-NM",
                    p,
                    pair.labels.clone(),
                    1,
                    &nm,
                ));
                let basic = call!(bound_basic(&table, &pair.alpha, &pair.beta))?;
                rows.push(ExperimentRow::from_report(
                    "kloosterman-NM/basic",
                    p,
                    pair.labels,
                    1,
                    &basic,
                ));
            }
            for row in call!(saving_exponent_scan(&table, scan_instances(p)))? {
                let mut r = BoundReport::new(
                    "scan",
                    row.s_abs,
                    0.0,
                    vec![RhsTerm::new("|a|_2|b|_2", row.norm_product)],
                    p as f64 * row.norm_product,
                    1.0,
                )
                .with_exponent(row.delta);
                if row.degenerate {
                    r = r.with_note("point masses: delta is not meaningful");
                }
                let label = |t: u64| format!("interval:{}..{}", t + 1, t + row.n);
                rows.push(ExperimentRow::from_report(
                    "kloosterman-NM/scan",
                    p,
                    Labels::two(label(row.shift), label(row.shift)),
                    1,
                    &r,
                ));
            }
            Ok(rows)
        }));
    }
    run_tasks(tasks, cfg.timings)
}

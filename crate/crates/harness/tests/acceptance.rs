//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! runtime; the process fails if any criterion fails or overruns.

use std::fs::File;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hypenergy::{run_suite, write_csv, SuiteConfig};
use hypenergy_core::energies::{
    additive_energy, additive_energy_spectral, check_progression_energy, d2_quantity, e_plus_k,
    multiplicative_energy, round_to_count, t_plus_k,
};
use hypenergy_core::incidence::{count_hyperbola, count_hyperbola_via_action};
use hypenergy_core::kloosterman::{
    bilinear_form, kloosterman_sum, BilinearMethod, KloostermanTable,
};
use hypenergy_core::sl2::{
    counting_lemma_check, e_rk_group, enumerate_sl2, free_group_check, g_lambda_set,
    project_to_pgl, t_2k_integer_mode, t_k_group, trace_formula_check, transitivity_bound_check,
    Gl2, MatSet, ProjFn, ProjPoint, TransitiveAction,
};
use hypenergy_core::spectral::{dft, idft};
use hypenergy_core::{oracle, Count, FieldContext, FpSet, WeightFn};
use num_bigint::BigUint;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const SMALL_PRIMES: [u64; 12] = [7, 11, 13, 17, 19, 23, 29, 53, 61, 79, 97, 101];

fn random_set(ctx: &Arc<FieldContext>, n: usize, rng: &mut ChaCha8Rng) -> FpSet {
    let p = ctx.p() as usize;
    let idx = sample(rng, p, n.min(p));
    FpSet::from_residues(ctx, idx.into_iter().map(|x| x as u64).collect())
}

fn pow(n: usize, k: u32) -> Count {
    BigUint::from(n).pow(k)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn t2_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for i in 0..30 {
        let p = SMALL_PRIMES[i % SMALL_PRIMES.len()];
        let ctx = FieldContext::new(p).map_err(|e| e.to_string())?;
        let a = random_set(&ctx, rng.random_range(1..=12), &mut rng);
        let b = random_set(&ctx, rng.random_range(1..=12), &mut rng);
        let lambda = [1, 2, p as i64 - 1][i % 3];
        let g = g_lambda_set(&a, &b, lambda).map_err(|e| e.to_string())?;
        let t2 = t_k_group(&Gl2 { ctx: ctx.clone() }, &g, 2).map_err(|e| e.to_string())?;
        let ea = additive_energy(&a, &a).map_err(|e| e.to_string())?;
        let eb = additive_energy(&b, &b).map_err(|e| e.to_string())?;
        let formula = pow(a.len(), 2) * (eb - pow(b.len(), 2)) + pow(b.len(), 2) * ea;
        ensure(t2 == formula, || {
            format!("p={p} λ={lambda}: T2 = {t2}, formula = {formula}")
        })?;
    }
    Ok("30 instances, λ ∈ {1, 2, -1}".into())
}

fn right_energy_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for i in 0..10 {
        let p = SMALL_PRIMES[(i * 5) % SMALL_PRIMES.len()];
        let ctx = FieldContext::new(p).map_err(|e| e.to_string())?;
        let a = random_set(&ctx, rng.random_range(1..=10), &mut rng);
        let b = random_set(&ctx, rng.random_range(1..=10), &mut rng);
        let g = g_lambda_set(&a, &b, rng.random_range(1..p) as i64).map_err(|e| e.to_string())?;
        let group = Gl2 { ctx: ctx.clone() };
        for k in [2u32, 3] {
            let ea = e_plus_k(&a, k).map_err(|e| e.to_string())?;
            let eb = e_plus_k(&b, k).map_err(|e| e.to_string())?;
            let formula = pow(a.len(), 2) * (eb - pow(b.len(), k)) + pow(b.len(), k) * ea;
            let er = e_rk_group(&group, &g, k).map_err(|e| e.to_string())?;
            ensure(er == formula, || format!("p={p} k={k}: {er} vs {formula}"))?;
        }
    }
    Ok("10 instances, k ∈ {2, 3}".into())
}

fn t3_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let p = SMALL_PRIMES[(i * 7 + 3) % SMALL_PRIMES.len()];
        let ctx = FieldContext::new(p).map_err(|e| e.to_string())?;
        let a = random_set(&ctx, rng.random_range(1..=8), &mut rng);
        let b = random_set(&ctx, rng.random_range(1..=8), &mut rng);
        let g = g_lambda_set(&a, &b, 1 + i as i64).map_err(|e| e.to_string())?;
        let t3 = t_k_group(&Gl2 { ctx: ctx.clone() }, &g, 3).map_err(|e| e.to_string())?;
        let d2 = d2_quantity(&a, &b).map_err(|e| e.to_string())?;
        let rhs = BigUint::from(a.len() * b.len()) * d2 + pow(a.len(), 4) * pow(b.len(), 4);
        ensure(t3 <= rhs, || format!("p={p}: T3 = {t3} > {rhs}"))?;
        worst = worst.max(ratio(&t3, &rhs));
    }
    Ok(format!("10 instances, max T3/rhs = {worst:.3}"))
}

fn ratio(x: &BigUint, y: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN) / y.to_f64().unwrap_or(f64::NAN)
}

fn random_fn(p: u64, rng: &mut ChaCha8Rng) -> WeightFn {
    let v = (0..p)
        .map(|_| {
            if rng.random_bool(0.5) {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    WeightFn::new(p, v)
}

fn rel_err(x: Complex64, y: Complex64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1.0)
}

fn fourier_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst = 0.0f64;
    for p in [11u64, 101, 401] {
        for _ in 0..100 {
            let f = random_fn(p, &mut rng);
            let g = random_fn(p, &mut rng);
            let (ff, fg) = (
                dft(&f).map_err(|e| e.to_string())?,
                dft(&g).map_err(|e| e.to_string())?,
            );
            let inner: Complex64 = f
                .values()
                .iter()
                .zip(g.values())
                .map(|(x, y)| x * y.conj())
                .sum();
            let spec: Complex64 = ff
                .coeffs()
                .iter()
                .zip(fg.coeffs())
                .map(|(x, y)| x * y.conj())
                .sum();
            worst = worst.max(rel_err(inner * p as f64, spec));
            let fc = dft(&f.convolve(&g)).map_err(|e| e.to_string())?;
            let back = idft(&ff).map_err(|e| e.to_string())?;
            for x in 0..p {
                worst = worst.max(rel_err(fc.get(x), ff.get(x) * fg.get(x)));
                worst = worst.max(rel_err(back.get(x), f.get(x)));
            }
        }
    }
    ensure(worst <= 1e-8, || format!("max relative error {worst:e}"))?;
    Ok(format!("300 functions, max relative error {worst:.1e}"))
}

fn energy_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let primes = [11u64, 53, 101, 211, 401];
    for i in 0..50 {
        let p = primes[i % primes.len()];
        let ctx = FieldContext::new(p).map_err(|e| e.to_string())?;
        let a = random_set(&ctx, rng.random_range(1..=20), &mut rng);
        let b = random_set(&ctx, rng.random_range(1..=20), &mut rng);
        let table = additive_energy(&a, &b).map_err(|e| e.to_string())?;
        let spectral = round_to_count(additive_energy_spectral(&a, &b).map_err(|e| e.to_string())?);
        ensure(table == spectral, || {
            format!("p={p}: E+ {table} vs spectral {spectral}")
        })?;

        let small = random_set(&ctx, rng.random_range(1..=10), &mut rng);
        for k in 1..=3 {
            let fast = t_plus_k(&small, k).map_err(|e| e.to_string())?;
            let brute = oracle::t_plus_k(&small, k).map_err(|e| e.to_string())?;
            ensure(fast == brute, || {
                format!("p={p} k={k}: T+ {fast} vs {brute}")
            })?;
        }

        let fast = multiplicative_energy(&a, &b).map_err(|e| e.to_string())?;
        let brute = oracle::multiplicative_energy(&a, &b).map_err(|e| e.to_string())?;
        ensure(fast == brute, || format!("p={p}: Ex {fast} vs {brute}"))?;
    }
    Ok("50 trials of each".into())
}

fn kloosterman() -> Outcome {
    let mut worst_weil = 0.0f64;
    let mut worst_twist = 0.0f64;
    for p in [53u64, 101] {
        let ctx = FieldContext::new(p).map_err(|e| e.to_string())?;
        let weil = 2.0 * (p as f64).sqrt();
        for n in 1..p as i64 {
            for m in 1..p as i64 {
                let k = kloosterman_sum(&ctx, n, m);
                ensure(k.norm() <= weil + 1e-9, || {
                    format!("p={p}: |K({n},{m})| = {}", k.norm())
                })?;
                worst_weil = worst_weil.max(k.norm() / weil);
                let t = ctx.mul(n as u64, m as u64) as i64;
                worst_twist = worst_twist.max((k - kloosterman_sum(&ctx, t, 1)).norm());
            }
        }
    }
    ensure(worst_twist <= 1e-9, || {
        format!("K(n,m) vs K(nm,1): {worst_twist:e}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut worst_bilinear = 0.0f64;
    for i in 0..50 {
        let p = [53u64, 101, 211][i % 3];
        let ctx = FieldContext::new(p).map_err(|e| e.to_string())?;
        let table = KloostermanTable::new(&ctx);
        let (a, b) = (random_fn(p, &mut rng), random_fn(p, &mut rng));
        let direct =
            bilinear_form(&table, &a, &b, BilinearMethod::Direct).map_err(|e| e.to_string())?;
        let spectral =
            bilinear_form(&table, &a, &b, BilinearMethod::Spectral).map_err(|e| e.to_string())?;
        worst_bilinear = worst_bilinear.max(rel_err(direct, spectral));
    }
    ensure(worst_bilinear <= 1e-7, || {
        format!("bilinear forms differ by {worst_bilinear:e}")
    })?;
    Ok(format!(
        "max |K|/2√p = {worst_weil:.4}, twist error {worst_twist:.1e}, bilinear error {worst_bilinear:.1e}"
    ))
}

fn hyperbola_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for i in 0..100 {
        let p = SMALL_PRIMES[i % SMALL_PRIMES.len()];
        let ctx = FieldContext::new(p).map_err(|e| e.to_string())?;
        let mut set = || {
            let n = rng.random_range(1..=15);
            random_set(&ctx, n, &mut rng)
        };
        let (a, b, c, d) = (set(), set(), set(), set());
        let lambda = rng.random_range(1..p);
        let fast = count_hyperbola(&a, &b, &c, &d, lambda as i64).map_err(|e| e.to_string())?;
        let brute = oracle::count_hyperbola(&a, &b, &c, &d, lambda);
        let action =
            count_hyperbola_via_action(&a, &b, &c, &d, lambda as i64).map_err(|e| e.to_string())?;
        ensure(fast == brute && fast == action, || {
            format!("p={p} λ={lambda}: fast {fast}, oracle {brute}, action {action}")
        })?;
    }
    Ok("100 instances".into())
}

fn progression_energy() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for p in [101u64, 401, 1009] {
        let ctx = FieldContext::new(p).map_err(|e| e.to_string())?;
        for n in [10u64, 30, 100] {
            if n >= p {
                continue;
            }
            let a = FpSet::interval(&ctx, 1, n);
            for shift in [1i64, 7, p as i64 / 3] {
                let b = FpSet::interval(&ctx, shift, n);
                let r = check_progression_energy(&a, &b).map_err(|e| e.to_string())?;
                ensure(r.passed, || format!("p={p} N={n} shift={shift}: {r:?}"))?;
                worst = worst.max(r.exponent.unwrap_or(0.0) / r.envelope);
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} instances, max deviation/(64·|A||B|log²p) = {worst:.4}"
    ))
}

fn free_group() -> Outcome {
    let r = free_group_check(2, 2, 6, 3).map_err(|e| e.to_string())?;
    ensure(r.passed, || format!("{:?}", r.notes))?;
    Ok(format!(
        "{} words, none trivial",
        r.term("words").unwrap_or(0.0)
    ))
}

fn integer_t2k_bound() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=8i64 {
        let set: Vec<i64> = (1..=n).collect();
        for lambda in [1i64, 2] {
            for k in [1u32, 2] {
                let (_, r) = t_2k_integer_mode(&set, &set, lambda, k).map_err(|e| e.to_string())?;
                ensure(r.passed, || {
                    format!("N={n} λ={lambda} k={k}: {} > {}", r.lhs, r.rhs)
                })?;
                worst = worst.max(r.lhs / r.rhs);
            }
        }
    }
    Ok(format!("32 instances, max T/bound = {worst:.2e}"))
}

fn counting_and_transitivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for i in 0..20 {
        let p = [7u64, 11, 13, 17, 19][i % 5];
        let ctx = FieldContext::new(p).map_err(|e| e.to_string())?;
        let a = random_set(&ctx, rng.random_range(1..=5), &mut rng);
        let b = random_set(&ctx, rng.random_range(1..=5), &mut rng);
        let c = random_set(&ctx, rng.random_range(1..=p as usize), &mut rng);
        let d = random_set(&ctx, rng.random_range(1..=p as usize), &mut rng);
        let g = g_lambda_set(&a, &b, rng.random_range(1..p) as i64).map_err(|e| e.to_string())?;
        let (f1, f2) = (
            ProjFn::<i64>::indicator_set(&c),
            ProjFn::<i64>::indicator_set(&d),
        );
        for k in [1u32, 2] {
            let r = counting_lemma_check(&ctx, &g, &f1, &f2, k).map_err(|e| e.to_string())?;
            ensure(r.passed, || {
                format!("counting lemma p={p} k={k}: {:?} > {}", r.lhs_exact, r.rhs)
            })?;
        }

        let pts = |s: &FpSet| -> Vec<ProjPoint> { s.iter().map(ProjPoint::Finite).collect() };
        let maps: Vec<(u64, u64)> = (0..rng.random_range(1..=20))
            .map(|_| (rng.random_range(1..p), rng.random_range(0..p)))
            .collect();
        let r =
            transitivity_bound_check(&ctx, &TransitiveAction::Affine(maps), &pts(&c), &pts(&d), 2)
                .map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("affine p={p}: {} > {}", r.lhs, r.rhs))?;

        let mut c_pts = pts(&c);
        c_pts.push(ProjPoint::Infinity);
        let proj = TransitiveAction::Projective(project_to_pgl(&ctx, &g));
        let r = transitivity_bound_check(&ctx, &proj, &c_pts, &pts(&d), 3)
            .map_err(|e| e.to_string())?;
        ensure(r.passed, || {
            format!("projective p={p}: {} > {}", r.lhs, r.rhs)
        })?;
    }
    Ok("20 instances of each".into())
}

fn trace_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let ctx = FieldContext::new(3).map_err(|e| e.to_string())?;
    let all = enumerate_sl2(&ctx);
    for _ in 0..10 {
        let n = rng.random_range(1..=all.len());
        let set = MatSet::from_vec(
            sample(&mut rng, all.len(), n)
                .into_iter()
                .map(|j| all[j])
                .collect(),
        );
        for k in [2u32, 3] {
            let r = trace_formula_check(&ctx, &set, k).map_err(|e| e.to_string())?;
            ensure(r.passed, || {
                format!("|G|={n} k={k}: {:?} vs {}", r.lhs_exact, r.rhs)
            })?;
        }
    }
    Ok("10 subsets of SL2(F3), k ∈ {2, 3}".into())
}

fn envelope_suites() -> Outcome {
    let cfg = SuiteConfig::default();
    let mut rows = Vec::new();
    for suite in ["thm1", "progression", "rAA", "kloosterman-NM"] {
        rows.extend(run_suite(suite, &cfg).map_err(|e| e.to_string())?);
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("envelope_ratios.csv");
    let file = File::create(&path).map_err(|e| e.to_string())?;
    write_csv(&rows, file).map_err(|e| e.to_string())?;
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| r.is_failure())
        .map(|r| format!("{} p={} ratio={}", r.suite, r.p, r.ratio))
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    let worst = rows
        .iter()
        .filter(|r| r.asserted)
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(format!(
        "{} rows, max ratio {worst:.3}, written to {}",
        rows.len(),
        path.display()
    ))
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            name: "T2 energy identity",
            limit: secs(10),
            run: t2_identity,
        },
        Criterion {
            name: "right energy identity",
            limit: secs(30),
            run: right_energy_identity,
        },
        Criterion {
            name: "T3 inequality",
            limit: secs(60),
            run: t3_inequality,
        },
        Criterion {
            name: "Fourier identities",
            limit: secs(20),
            run: fourier_identities,
        },
        Criterion {
            name: "energy oracles",
            limit: secs(30),
            run: energy_oracles,
        },
        Criterion {
            name: "Kloosterman sums",
            limit: secs(60),
            run: kloosterman,
        },
        Criterion {
            name: "hyperbola count oracle",
            limit: secs(60),
            run: hyperbola_oracle,
        },
        Criterion {
            name: "progression energy",
            limit: secs(60),
            run: progression_energy,
        },
        Criterion {
            name: "free subgroup",
            limit: secs(30),
            run: free_group,
        },
        Criterion {
            name: "integer T_2k bound",
            limit: secs(120),
            run: integer_t2k_bound,
        },
        Criterion {
            name: "counting and transitivity",
            limit: secs(60),
            run: counting_and_transitivity,
        },
        Criterion {
            name: "trace formula",
            limit: secs(30),
            run: trace_formula,
        },
        Criterion {
            name: "bound envelopes",
            limit: secs(300),
            run: envelope_suites,
        },
    ];
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if elapsed > c.limit => ("FAIL", format!("over time limit of {:?}", c.limit)),
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {:>2} {status} [{:>7.2}s / {:>3}s] {}: {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            c.name
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

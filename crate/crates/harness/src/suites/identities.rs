//! Exact identities and oracle agreement on small random instances.

use std::sync::Arc;

use hypenergy_core::energies::{
    additive_energy, additive_energy_spectral, d2_quantity, e_plus_k, multiplicative_energy,
    round_to_count, t_plus_k,
};
use hypenergy_core::incidence::{count_hyperbola, count_hyperbola_via_action, deviation};
use hypenergy_core::kloosterman::{
    bilinear_form, bound_basic, kloosterman_sum, BilinearMethod, KloostermanTable,
};
use hypenergy_core::sl2::{
    action_sum, counting_lemma_check, e_lk_group, e_rk_group, enumerate_sl2, g_lambda_set,
    lower_unipotent, mobius_apply, project_to_pgl, t_k_group, trace_formula_check,
    transitivity_bound_check, unipotent_u, v_matrix, FpMat, Gl2, MatSet, ProjFn, ProjPoint,
    TransitiveAction,
};
use hypenergy_core::spectral::{dft, idft};
use hypenergy_core::{oracle, BoundReport, Count, FieldContext, FpSet, WeightFn};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{equality_report, run_tasks, tolerance_report, Result, SuiteConfig, Task};
use crate::call;
use crate::rows::{ExperimentRow, Labels};
use crate::setspec::{seeded_rng, SetSpec};

/// Identities are checked for primes up to this size.
pub const MAX_IDENTITY_PRIME: u64 = 101;
const INSTANCES_PER_PRIME: u64 = 4;
const TRACE_INSTANCES: u64 = 3;

fn random_spec(rng: &mut ChaCha8Rng, p: u64, max: u64) -> SetSpec {
    SetSpec::Random {
        n: rng.random_range(1..=max.min(p)),
        seed: rng.random(),
    }
}

fn random_fn(rng: &mut ChaCha8Rng, p: u64) -> WeightFn {
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

fn pow(n: usize, k: u32) -> Count {
    BigUint::from(n).pow(k)
}

fn int(x: Count) -> BigInt {
    BigInt::from(x)
}

struct Ctx<'a> {
    p: u64,
    lambda: i64,
    labels: Labels,
    rows: &'a mut Vec<ExperimentRow>,
}

impl Ctx<'_> {
    fn push(&mut self, check: &str, report: BoundReport) {
        let suite = format!("identities/{check}");
        self.rows.push(ExperimentRow::from_report(
            &suite,
            self.p,
            self.labels.clone(),
            self.lambda,
            &report,
        ));
    }
}

pub fn run(cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    let primes: Vec<u64> = cfg
        .primes
        .iter()
        .copied()
        .filter(|&p| p <= MAX_IDENTITY_PRIME)
        .collect();
    if primes.len() < cfg.primes.len() {
        log::info!("identities: skipping primes above {MAX_IDENTITY_PRIME}");
    }
    let mut tasks: Vec<Task> = Vec::new();
    for &p in &primes {
        for i in 0..INSTANCES_PER_PRIME {
            tasks.push(Box::new(move || instance(cfg, p, i)));
        }
    }
    for i in 0..TRACE_INSTANCES {
        tasks.push(Box::new(move || trace_instance(cfg, i)));
    }
    run_tasks(tasks, cfg.timings)
}

fn instance(cfg: &SuiteConfig, p: u64, i: u64) -> Result<Vec<ExperimentRow>> {
    let ctx = FieldContext::new(p)?;
    let mut rng = seeded_rng(cfg.instance_seed(i), p);
    let spec = |given: &Option<SetSpec>, rng: &mut ChaCha8Rng, max: u64| match given {
        Some(s) => s.clone(),
        None => random_spec(rng, p, max),
    };
    let a_spec = spec(&cfg.a, &mut rng, 12);
    let b_spec = spec(&cfg.b, &mut rng, 12);
    let c_spec = spec(&cfg.c, &mut rng, 12);
    let d_spec = spec(&cfg.d, &mut rng, 12);
    let lambda = if i == 0 {
        cfg.lambda
    } else {
        rng.random_range(1..p as i64)
    };
    let (a, b, c, d) = (
        a_spec.realize(&ctx)?,
        b_spec.realize(&ctx)?,
        c_spec.realize(&ctx)?,
        d_spec.realize(&ctx)?,
    );

    let mut rows = Vec::new();
    let mut out = Ctx {
        p,
        lambda,
        labels: Labels::two(&a_spec, &b_spec),
        rows: &mut rows,
    };
    group_energies(&mut out, &ctx, &a, &b, lambda)?;
    out.labels = Labels::one(&a_spec);
    energy_oracles(&mut out, &a, &b)?;
    out.labels = Labels::new(&a_spec, &b_spec, &c_spec, &d_spec);
    hyperbola(&mut out, &a, &b, &c, &d, lambda)?;
    out.labels = Labels::default();
    matrices(&mut out, &ctx, &mut rng)?;
    fourier(&mut out, &ctx, &mut rng)?;
    out.labels = Labels::two(&a_spec, &b_spec);
    counting(&mut out, &ctx, &a, &b, &c, &d, lambda)?;
    Ok(rows)
}

fn group_energies(
    out: &mut Ctx,
    ctx: &Arc<FieldContext>,
    a: &FpSet,
    b: &FpSet,
    lambda: i64,
) -> Result<()> {
    let group = Gl2 { ctx: ctx.clone() };
    let g = call!(g_lambda_set(a, b, lambda))?;
    let (na, nb) = (a.len(), b.len());
    let ea = call!(additive_energy(a, a))?;
    let eb = additive_energy(b, b)?;

    let t2 = call!(t_k_group(&group, &g, 2))?;
    let formula = pow(na, 2) * (&eb - pow(nb, 2)) + pow(nb, 2) * &ea;
    out.push(
        "t2-energy-formula",
        equality_report("t2", int(t2), int(formula)),
    );

    for k in [2u32, 3] {
        let ek_a = call!(e_plus_k(a, k))?;
        let ek_b = e_plus_k(b, k)?;
        let right = pow(na, 2) * (&ek_b - pow(nb, k)) + pow(nb, k) * &ek_a;
        let er = call!(e_rk_group(&group, &g, k))?;
        out.push(
            &format!("right-energy-k{k}"),
            equality_report("e-right", int(er), int(right)),
        );
        let left_bound = pow(nb, 2) * &ek_a + pow(na, k) * &ek_b;
        let el = call!(e_lk_group(&group, &g, k))?;
        out.push(
            &format!("left-energy-k{k}"),
            BoundReport::exact("e-left", int(el), int(left_bound), vec![]),
        );
    }

    if na <= 8 && nb <= 8 {
        let t3 = t_k_group(&group, &g, 3)?;
        let d2 = call!(d2_quantity(a, b))?;
        let rhs = BigUint::from(na * nb) * d2 + pow(na, 4) * pow(nb, 4);
        out.push("t3-d2", BoundReport::exact("t3", int(t3), int(rhs), vec![]));
    }
    Ok(())
}

fn energy_oracles(out: &mut Ctx, a: &FpSet, b: &FpSet) -> Result<()> {
    let e = additive_energy(a, b)?;
    out.push(
        "additive-energy-spectral",
        equality_report(
            "E+",
            int(e.clone()),
            int(round_to_count(additive_energy_spectral(a, b)?)),
        ),
    );
    out.push(
        "additive-energy-oracle",
        equality_report("E+", int(e), BigInt::from(oracle::additive_energy(a, b)?)),
    );
    let em = call!(multiplicative_energy(a, b))?;
    out.push(
        "multiplicative-energy-oracle",
        equality_report(
            "Ex",
            int(em),
            BigInt::from(oracle::multiplicative_energy(a, b)?),
        ),
    );
    if a.len() <= 10 {
        for k in [1u32, 2, 3] {
            let t = call!(t_plus_k(a, k))?;
            out.push(
                &format!("t-plus-k{k}-oracle"),
                equality_report("T+", int(t), BigInt::from(oracle::t_plus_k(a, k)?)),
            );
        }
    }
    Ok(())
}

fn hyperbola(out: &mut Ctx, a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet, lambda: i64) -> Result<()> {
    let n = call!(count_hyperbola(a, b, c, d, lambda))?;
    let slow = oracle::count_hyperbola(a, b, c, d, lambda.rem_euclid(a.p() as i64) as u64);
    out.push("hyperbola-oracle", equality_report("count", n, slow));
    out.push(
        "hyperbola-action",
        equality_report("count", n, count_hyperbola_via_action(a, b, c, d, lambda)?),
    );
    let dev = call!(deviation(a, b, c, d, lambda))?;
    let main = BigUint::from(a.len() * b.len() * c.len() * d.len());
    let recomposed = &dev * BigInt::from(a.p()) + BigInt::from(main);
    let exact =
        recomposed.is_integer() && recomposed.to_integer() == BigInt::from(n) * BigInt::from(a.p());
    let mut r = equality_report("deviation", n, n);
    r.passed = exact;
    out.push("deviation-recomposes", r);
    Ok(())
}

/// Defining relations of the unipotent and `v_b` matrices and their action.
fn matrices(out: &mut Ctx, ctx: &Arc<FieldContext>, rng: &mut ChaCha8Rng) -> Result<()> {
    let p = ctx.p() as i64;
    let mut failures = 0u64;
    for _ in 0..20 {
        let (s, t) = (rng.random_range(0..p), rng.random_range(0..p));
        let us = call!(unipotent_u(ctx, s));
        let ut = unipotent_u(ctx, t);
        failures += u64::from(us.mul(&ut, ctx) != unipotent_u(ctx, s + t));
        let ls = call!(lower_unipotent(ctx, s));
        failures += u64::from(ls.mul(&lower_unipotent(ctx, -s), ctx) != FpMat::identity());
        let lambda = rng.random_range(1..p);
        let v = call!(v_matrix(ctx, t, lambda))?;
        failures += u64::from(v.det(ctx) != ctx.reduce(lambda));
        // u_a v_b acts as x ↦ a + λ/(b - x)
        let g = unipotent_u(ctx, s).mul(&v, ctx);
        let x = rng.random_range(0..p);
        let image = call!(mobius_apply(ctx, &g, ProjPoint::Finite(x as u64)));
        let expected = match ctx.div(ctx.reduce(lambda), ctx.reduce(t - x)) {
            Some(q) => ProjPoint::Finite(ctx.add(q, ctx.reduce(s))),
            None => ProjPoint::Infinity,
        };
        failures += u64::from(image != expected);
    }
    out.push(
        "matrix-relations",
        equality_report("failures", failures, 0u64),
    );
    Ok(())
}

fn fourier(out: &mut Ctx, ctx: &Arc<FieldContext>, rng: &mut ChaCha8Rng) -> Result<()> {
    let p = ctx.p();
    let f = random_fn(rng, p);
    let g = random_fn(rng, p);
    let (ff, fg) = (dft(&f)?, dft(&g)?);
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
    out.push(
        "plancherel",
        tolerance_report("rel-err", rel_err(inner * p as f64, spec), 1e-8),
    );
    let fc = dft(&f.convolve(&g))?;
    let conv = (0..p)
        .map(|x| rel_err(fc.get(x), ff.get(x) * fg.get(x)))
        .fold(0.0, f64::max);
    out.push("convolution", tolerance_report("rel-err", conv, 1e-8));
    let back = idft(&ff)?;
    let inv = (0..p)
        .map(|x| rel_err(back.get(x), f.get(x)))
        .fold(0.0, f64::max);
    out.push("inversion", tolerance_report("rel-err", inv, 1e-8));

    let table = KloostermanTable::new(ctx);
    let weil = 2.0 * (p as f64).sqrt();
    let (mut worst_weil, mut worst_twist) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let (n, m) = (rng.random_range(1..p) as i64, rng.random_range(1..p) as i64);
        let k = call!(kloosterman_sum(ctx, n, m));
        worst_weil = worst_weil.max(k.norm() / weil);
        let nm = ctx.mul(n as u64, m as u64) as i64;
        worst_twist = worst_twist.max((k - kloosterman_sum(ctx, nm, 1)).norm());
    }
    out.push(
        "kloosterman-weil",
        tolerance_report("|K|/2sqrt(p)", worst_weil, 1.0),
    );
    out.push(
        "kloosterman-twist",
        tolerance_report("abs-err", worst_twist, 1e-9),
    );
    let direct = call!(bilinear_form(&table, &f, &g, BilinearMethod::Direct))?;
    let spectral = bilinear_form(&table, &f, &g, BilinearMethod::Spectral)?;
    out.push(
        "bilinear-two-ways",
        tolerance_report("rel-err", rel_err(direct, spectral), 1e-7),
    );
    out.push("kloosterman-basic", call!(bound_basic(&table, &f, &g))?);
    Ok(())
}

fn counting(
    out: &mut Ctx,
    ctx: &Arc<FieldContext>,
    a: &FpSet,
    b: &FpSet,
    c: &FpSet,
    d: &FpSet,
    lambda: i64,
) -> Result<()> {
    let g = g_lambda_set(a, b, lambda)?;
    let f1 = ProjFn::<i64>::indicator_set(c);
    let f2 = ProjFn::<i64>::indicator_set(d);
    for k in [1u32, 2] {
        out.push(
            &format!("counting-lemma-k{k}"),
            counting_lemma_check(ctx, &g, &f1, &f2, k)?,
        );
    }
    let complex = call!(action_sum(
        ctx,
        &g,
        &ProjFn::<Complex64>::indicator(c),
        &ProjFn::<Complex64>::indicator(d)
    ));
    let exact = hypenergy_core::sl2::action_sum_int(ctx, &g, &f1, &f2);
    out.push(
        "action-sum-int",
        tolerance_report(
            "abs-err",
            (complex.re - exact.to_f64().unwrap_or(f64::NAN)).abs(),
            1e-6,
        ),
    );

    let pts = |s: &FpSet| -> Vec<ProjPoint> { s.iter().map(ProjPoint::Finite).collect() };
    let affine: Vec<(u64, u64)> = a
        .iter()
        .filter(|&x| x != 0)
        .flat_map(|m| b.iter().map(move |t| (m, t)))
        .collect();
    if !affine.is_empty() {
        let r = call!(transitivity_bound_check(
            ctx,
            &TransitiveAction::Affine(affine),
            &pts(c),
            &pts(d),
            2
        ))?;
        out.push("transitivity-affine", r);
    }
    let projective = project_to_pgl(ctx, &g);
    let mut c_pts = pts(c);
    c_pts.push(ProjPoint::Infinity);
    let r = transitivity_bound_check(
        ctx,
        &TransitiveAction::Projective(projective),
        &c_pts,
        &pts(d),
        3,
    )?;
    out.push("transitivity-projective", r);
    Ok(())
}

/// Trace formula on random subsets of `SL₂(F₃)`.
fn trace_instance(cfg: &SuiteConfig, i: u64) -> Result<Vec<ExperimentRow>> {
    let ctx = FieldContext::new(3)?;
    let mut rng = seeded_rng(cfg.instance_seed(i), 3);
    let all = enumerate_sl2(&ctx);
    let n = rng.random_range(1..=all.len());
    let set = MatSet::from_vec(
        sample(&mut rng, all.len(), n)
            .into_iter()
            .map(|j| all[j])
            .collect(),
    );
    let mut rows = Vec::new();
    for k in [2u32, 3] {
        let r = call!(trace_formula_check(&ctx, &set, k))?;
        rows.push(ExperimentRow::from_report(
            &format!("identities/trace-formula-k{k}"),
            3,
            Labels::one(format!("sl2-subset:{n}")),
            1,
            &r,
        ));
    }
    Ok(rows)
}

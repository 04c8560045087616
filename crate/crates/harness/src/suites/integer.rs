//! Suites over Z and Q. Their rows carry `p = 0`, except the shifted-inverse
//! profile which runs over the configured primes.

use hypenergy_core::incidence::{
    bound_asym_z, bound_prop_re, int_set, q_inverse_family, rat, rat_set, rho_bound,
    shift_inverse_profile, RatSet,
};
use hypenergy_core::sl2::{
    free_group_check, t_2k_integer_mode, DEFAULT_EXPONENT_CAP, DEFAULT_WORD_LENGTH,
};
use hypenergy_core::{BoundReport, FieldContext, RhsTerm};
use num_bigint::BigInt;

use super::{run_tasks, Result, SuiteConfig, Task};
use crate::call;
use crate::rows::{ExperimentRow, Labels};
use crate::setspec::{SetSpec, SpecError};

/// Generator pairs `(s, t)` for `⟨u_s, u*_t⟩`.
pub const FREE_PAIRS: &[(i64, i64)] = &[(2, 2), (2, 3), (3, 3), (1, 4), (-2, 5)];

pub fn free_group(cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    let tasks: Vec<Task> = FREE_PAIRS
        .iter()
        .map(|&(s, t)| -> Task {
            Box::new(move || {
                let r = call!(free_group_check(
                    s,
                    t,
                    DEFAULT_WORD_LENGTH,
                    DEFAULT_EXPONENT_CAP
                ))?;
                Ok(vec![ExperimentRow::from_report(
                    "sl2-free",
                    0,
                    Labels::two(format!("u_{s}"), format!("u*_{t}")),
                    1,
                    &r,
                )])
            })
        })
        .collect();
    run_tasks(tasks, cfg.timings)
}

/// Largest `N` in the default `B = C = [N]` sweep.
pub const T2K_MAX_N: u64 = 8;

pub fn integer_t2k(cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    let mut instances: Vec<(SetSpec, SetSpec, i64)> = Vec::new();
    if cfg.b.is_some() || cfg.c.is_some() {
        let b = cfg.b.clone().unwrap_or(SetSpec::first(T2K_MAX_N));
        let c = cfg.c.clone().unwrap_or_else(|| b.clone());
        instances.push((b, c, cfg.lambda));
    } else {
        for n in 1..=T2K_MAX_N {
            for lambda in [1, 2] {
                instances.push((SetSpec::first(n), SetSpec::first(n), lambda));
            }
        }
    }
    let mut tasks: Vec<Task> = Vec::new();
    for (b, c, lambda) in instances {
        for k in [1u32, 2] {
            let (b, c) = (b.clone(), c.clone());
            tasks.push(Box::new(move || {
                let (bi, ci) = (b.integers()?, c.integers()?);
                let (_, r) = call!(t_2k_integer_mode(&bi, &ci, lambda, k))?;
                Ok(vec![ExperimentRow::from_report(
                    &format!("lemma27-Z/k{k}"),
                    0,
                    Labels::new("", &b, &c, ""),
                    lambda,
                    &r,
                )])
            }));
        }
    }
    run_tasks(tasks, cfg.timings)
}

/// `(M, N)` for the `Q ⊔ ⊔_j (Q⁻¹ + j)` family.
pub const INVERSE_FAMILY: &[(u64, u64)] = &[(2, 3), (3, 4), (4, 6)];

pub fn asym(cfg: &SuiteConfig) -> Result<Vec<ExperimentRow>> {
    let mut tasks: Vec<Task> = Vec::new();
    for &(m, n) in INVERSE_FAMILY {
        tasks.push(Box::new(move || asym_instance(cfg, m, n)));
    }
    for &p in &cfg.primes {
        tasks.push(Box::new(move || profile_instance(cfg, p)));
    }
    run_tasks(tasks, cfg.timings)
}

fn ints(spec: &Option<SetSpec>, default: SetSpec) -> Result<(SetSpec, Vec<i64>)> {
    let s = spec.clone().unwrap_or(default);
    let v = s.integers()?;
    if v.is_empty() {
        return Err(SpecError::OutOfRange {
            spec: s.to_string(),
            p: 0,
            msg: "empty set".into(),
        }
        .into());
    }
    Ok((s, v))
}

/// `{1/q − ωj}` and `{q − ωj}` for `q ∈ [2M]`, `j ∈ [N]`: every `b = ωj`
/// gives `(a+b)(b+d) = 1` for `2M` pairs.
fn shifted_inverse_pair(m: u64, n: u64, omega: i64) -> (RatSet, RatSet) {
    let q: Vec<i64> = (1..=2 * m as i64).collect();
    let shifts: Vec<i64> = (1..=n as i64).map(|j| omega * j).collect();
    let a = rat_set(
        q.iter()
            .flat_map(|&x| shifts.iter().map(move |&s| rat(x).recip() - rat(s))),
    );
    let d = rat_set(
        q.iter()
            .flat_map(|&x| shifts.iter().map(move |&s| rat(x - s))),
    );
    (a, d)
}

fn asym_instance(cfg: &SuiteConfig, m: u64, n: u64) -> Result<Vec<ExperimentRow>> {
    let family = q_inverse_family(m, n);
    let family_label = format!("q-inverse:{m},{n}");
    // B = C = −[N] so that a + b runs over Q⁻¹ and c + d over Q
    let minus = SetSpec::Interval {
        start: -(n as i64),
        end: -1,
    };
    let (bs, b) = ints(&cfg.b, minus.clone())?;
    let (cs, c) = ints(&cfg.c, minus)?;
    let mut rows = Vec::new();

    let rho = call!(rho_bound(&b, &c))?;
    let r = BoundReport::new(
        "rho",
        rho.rho,
        0.0,
        vec![RhsTerm::new("k", rho.k as f64)],
        rho.comparison,
        1.0,
    )
    .reporting_only();
    rows.push(ExperimentRow::from_report(
        "asym-Z/rho",
        0,
        Labels::new("", &bs, &cs, ""),
        1,
        &r,
    ));

    let a_int = match &cfg.a {
        Some(s) => int_set(s.integers()?),
        None => family.clone(),
    };
    let d_int = match &cfg.d {
        Some(s) => int_set(s.integers()?),
        None => family.clone(),
    };
    let label = |s: &Option<SetSpec>| s.as_ref().map_or(family_label.clone(), |x| x.to_string());
    let lambda = cfg.lambda;
    let r = call!(bound_asym_z(&a_int, &b, &c, &d_int, &rat(lambda)))?;
    rows.push(ExperimentRow::from_report(
        "asym-Z",
        0,
        Labels::new(label(&cfg.a), &bs, &cs, label(&cfg.d)),
        lambda,
        &r,
    ));

    for omega in [2i64, 3] {
        let (pa, pd) = shifted_inverse_pair(m, n, omega);
        let (pa, la) = match &cfg.a {
            Some(_) => (a_int.clone(), label(&cfg.a)),
            None => (pa, format!("inverse-shifted:{m},{n},{omega}")),
        };
        let (pd, ld) = match &cfg.d {
            Some(_) => (d_int.clone(), label(&cfg.d)),
            None => (pd, format!("shifted:{m},{n},{omega}")),
        };
        let r = call!(bound_prop_re(&pa, &pd, omega, n))?;
        rows.push(ExperimentRow::from_report(
            "asym-Z/real",
            0,
            Labels::new(la, format!("ap:{omega},{omega},{n}"), "", ld),
            1,
            &r,
        ));
    }
    Ok(rows)
}

/// `min_i |(A+i) ∩ (A+i)⁻¹|` over `i ∈ {2, …, 2N}` for `A` of the inverse
/// family reduced mod p.
fn profile_instance(cfg: &SuiteConfig, p: u64) -> Result<Vec<ExperimentRow>> {
    let ctx = FieldContext::new(p)?;
    let n = ((p as f64).cbrt() as u64).max(1);
    if 2 * n >= p {
        return Ok(vec![]);
    }
    let (label, a) = match &cfg.a {
        Some(s) => (s.to_string(), s.realize(&ctx)?),
        None => {
            // Q ⊔ ⊔_j (Q⁻¹ + j) with Q = [2N] read in F_p
            let q: Vec<u64> = (1..=2 * n).map(|x| x % p).filter(|&x| x != 0).collect();
            let mut elems: Vec<i64> = q.iter().map(|&x| x as i64).collect();
            for j in 1..=n {
                elems.extend(q.iter().map(|&x| ctx.add(ctx.inv(x), j % p) as i64));
            }
            (
                format!("q-inverse:{n},{n}"),
                hypenergy_core::FpSet::new(&ctx, elems),
            )
        }
    };
    let profile = call!(shift_inverse_profile(&a, n))?;
    let min = profile
        .rows
        .iter()
        .find(|r| r.0 == profile.argmin)
        .map_or(0, |r| r.1);
    let r = BoundReport::exact(
        "shift-inverse",
        BigInt::from(min),
        BigInt::from(a.len()),
        vec![RhsTerm::new("argmin", profile.argmin as f64)],
    )
    .reporting_only();
    let exponent = if min > 0 && n > 1 {
        (min as f64).ln() / (n as f64).ln()
    } else {
        0.0
    };
    Ok(vec![ExperimentRow::from_report(
        "asym-Z/shift-inverse",
        p,
        Labels::one(label),
        1,
        &r.with_exponent(exponent),
    )])
}

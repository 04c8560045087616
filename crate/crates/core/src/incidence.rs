//! Hyperbola incidences `#{(a+b)(c+d) = λ}` over F_p and over the rationals,
//! and evaluators for the upper bounds on them.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::energies::additive_energy;
use crate::error::{Error, Result};
use crate::modfield::{rep_additive, FpSet, Sign};
use crate::report::{envelope_log_cubed, BoundReport, RhsTerm, DEFAULT_ENVELOPE_CONSTANT};
use crate::sl2::{action_sum_int, g_lambda_set, ProjFn};

/// Largest `k` tried when maximizing in [`rho_bound`].
pub const RHO_MAX_K: u32 = 20;
/// Largest `l` tried for the refined integer-mode bounds.
pub const REFINED_MAX_L: u32 = 20;

fn card(n: usize) -> f64 {
    n as f64
}

fn nonzero_lambda(a: &FpSet, lambda: i64) -> Result<u64> {
    let l = a.ctx().reduce(lambda);
    if l == 0 {
        Err(Error::ZeroLambda)
    } else {
        Ok(l)
    }
}

/// `#{(a,b,c,d) ∈ A×B×C×D : (a+b)(c+d) = λ}` as
/// `Σ_{s≠0} r_{A+B}(s) r_{C+D}(λ/s)`.
pub fn count_hyperbola(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet, lambda: i64) -> Result<u64> {
    let ctx = a.ctx();
    for s in [b, c, d] {
        ctx.same_as(s.ctx())?;
    }
    let l = nonzero_lambda(a, lambda)?;
    let r1 = rep_additive(a, b, Sign::Plus)?;
    let r2 = rep_additive(c, d, Sign::Plus)?;
    Ok(r1
        .support()
        .filter(|&(s, _)| s != 0)
        .map(|(s, n)| n * r2.get(ctx.mul(l, ctx.inv(s))))
        .sum())
}

/// The same count via the Möbius action of `G_λ(−B, C)`:
/// `#{(g, x) : x ∈ −D, gx ∈ A}`.
pub fn count_hyperbola_via_action(
    a: &FpSet,
    b: &FpSet,
    c: &FpSet,
    d: &FpSet,
    lambda: i64,
) -> Result<u64> {
    nonzero_lambda(a, lambda)?;
    let g = g_lambda_set(&b.negate(), c, lambda)?;
    let f1 = ProjFn::indicator_set(&d.negate());
    let f2 = ProjFn::indicator_set(a);
    let n = action_sum_int(a.ctx(), &g, &f1, &f2);
    Ok(n.to_u64().expect("count is a nonnegative machine integer"))
}

fn main_term(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet) -> BigRational {
    let num = BigInt::from(a.len()) * b.len() * c.len() * d.len();
    BigRational::new(num, BigInt::from(a.p()))
}

/// `count − |A||B||C||D|/p`, exactly.
pub fn deviation(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet, lambda: i64) -> Result<BigRational> {
    let n = count_hyperbola(a, b, c, d, lambda)?;
    Ok(BigRational::from_integer(BigInt::from(n)) - main_term(a, b, c, d))
}

#[allow(clippy::too_many_arguments)]
fn hyperbola_report(
    name: &str,
    a: &FpSet,
    b: &FpSet,
    c: &FpSet,
    d: &FpSet,
    lambda: i64,
    terms: Vec<RhsTerm>,
    rhs: f64,
) -> Result<BoundReport> {
    let n = count_hyperbola(a, b, c, d, lambda)?;
    let main = main_term(a, b, c, d);
    let envelope = envelope_log_cubed(DEFAULT_ENVELOPE_CONSTANT, a.p());
    Ok(BoundReport::new(
        name,
        n as f64,
        main.to_f64().unwrap_or(f64::NAN),
        terms,
        rhs,
        envelope,
    )
    .with_lhs_exact(BigInt::from(n))
    .with_main_exact(main))
}

struct Sizes {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Sizes {
    fn of(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet) -> Self {
        Sizes {
            a: card(a.len()),
            b: card(b.len()),
            c: card(c.len()),
            d: card(d.len()),
        }
    }

    /// `|A|^{1/4}|B||C||D|^{1/2}`, the first summand of the second branch.
    fn quarter_term(&self) -> f64 {
        self.a.powf(0.25) * self.b * self.c * self.d.sqrt()
    }
}

/// Deviation against `|A|^{1/4}|B||C||D|^{1/2} + |A|^{3/4}(|B||C|)^{41/48}|D|^{1/2}`.
pub fn bound_thm1(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet, lambda: i64) -> Result<BoundReport> {
    let s = Sizes::of(a, b, c, d);
    let t1 = s.quarter_term();
    let t2 = s.a.powf(0.75) * (s.b * s.c).powf(41.0 / 48.0) * s.d.sqrt();
    hyperbola_report(
        "thm1",
        a,
        b,
        c,
        d,
        lambda,
        vec![
            RhsTerm::new("|A|^(1/4)|B||C||D|^(1/2)", t1),
            RhsTerm::new("|A|^(3/4)(|B||C|)^(41/48)|D|^(1/2)", t2),
        ],
        t1 + t2,
    )
}

/// Deviation against the minimum of the energy-dependent branches
///
/// `|D|^{1/2}|B||C| + |A||D|^{1/2}(|B||C|)^{1/3}(|B|^{1/3}E⁺(C)^{1/6} + |C|^{1/3}E⁺(B)^{1/6})`
///
/// and `|A|^{1/4}|B||C||D|^{1/2} + |A|^{3/4}(|B||C|)^{19/24}|D|^{1/2}E⁺(B,C)^{1/24}`.
pub fn bound_thm_hyp_full(
    a: &FpSet,
    b: &FpSet,
    c: &FpSet,
    d: &FpSet,
    lambda: i64,
) -> Result<BoundReport> {
    let s = Sizes::of(a, b, c, d);
    let eb = additive_energy(b, b)?.to_f64().unwrap_or(f64::INFINITY);
    let ec = additive_energy(c, c)?.to_f64().unwrap_or(f64::INFINITY);
    let ebc = additive_energy(b, c)?.to_f64().unwrap_or(f64::INFINITY);
    let bc = s.b * s.c;
    let branch1 = s.d.sqrt() * bc
        + s.a
            * s.d.sqrt()
            * bc.cbrt()
            * (s.b.cbrt() * ec.powf(1.0 / 6.0) + s.c.cbrt() * eb.powf(1.0 / 6.0));
    let branch2 = s.quarter_term()
        + s.a.powf(0.75) * bc.powf(19.0 / 24.0) * s.d.sqrt() * ebc.powf(1.0 / 24.0);
    hyperbola_report(
        "thm-hyp-full",
        a,
        b,
        c,
        d,
        lambda,
        vec![
            RhsTerm::new("branch1", branch1),
            RhsTerm::new("branch2", branch2),
            RhsTerm::new("E+(B)", eb),
            RhsTerm::new("E+(C)", ec),
            RhsTerm::new("E+(B,C)", ebc),
        ],
        branch1.min(branch2),
    )
}

/// Deviation against
/// `|A|^{1/4}|B||C||D|^{1/2} + |A|^{3/4}|D|^{1/2}(|B||C|)^{5/6}(1 + (|B||C|/p)^{1/12})`
/// for unit-step progressions `B`, `C`; other inputs give a reporting-only row.
pub fn bound_progression(
    a: &FpSet,
    b: &FpSet,
    c: &FpSet,
    d: &FpSet,
    lambda: i64,
) -> Result<BoundReport> {
    let s = Sizes::of(a, b, c, d);
    let bc = s.b * s.c;
    let t1 = s.quarter_term();
    let t2 = s.a.powf(0.75)
        * s.d.sqrt()
        * bc.powf(5.0 / 6.0)
        * (1.0 + (bc / a.p() as f64).powf(1.0 / 12.0));
    let report = hyperbola_report(
        "progression",
        a,
        b,
        c,
        d,
        lambda,
        vec![
            RhsTerm::new("|A|^(1/4)|B||C||D|^(1/2)", t1),
            RhsTerm::new("|A|^(3/4)|D|^(1/2)(|B||C|)^(5/6)(1+(|B||C|/p)^(1/12))", t2),
        ],
        t1 + t2,
    )?;
    if b.is_unit_step_progression() && c.is_unit_step_progression() {
        Ok(report)
    } else {
        Ok(report
            .with_note("premise failed: B, C are not unit-step progressions")
            .reporting_only())
    }
}

/// `r_{AA}(λ) = #{(a₁, a₂) ∈ A² : a₁a₂ = λ}`.
pub fn product_reps(a: &FpSet, lambda: i64) -> Result<u64> {
    let ctx = a.ctx();
    let l = nonzero_lambda(a, lambda)?;
    Ok(a.iter()
        .filter(|&x| x != 0 && a.contains(ctx.mul(l, ctx.inv(x))))
        .count() as u64)
}

/// `r_{AA}(λ)` against `K²|A|²/p + K^{5/4}|A|^{23/24}` with `K = |A+A|/|A|`.
///
/// The sharper `K²|A|²/p + |A|^{149/156}` is recorded as a term together with
/// both forms of its premise, `|A−A|^{92} ≤ p^{52}` and
/// `|A−A|^{117} ≤ p^{52}|2A−2A|^{25}`; only the first bound is asserted.
pub fn bound_r_aa(a: &FpSet, lambda: i64) -> Result<BoundReport> {
    if a.is_empty() {
        return Err(Error::InvalidParameter("set must be nonempty".into()));
    }
    let r = product_reps(a, lambda)?;
    let p = a.p() as f64;
    let n = card(a.len());
    let k = card(a.sumset(a)?.len()) / n;
    let diff = a.difference_set(a)?;
    let diff2 = diff.sumset(&diff)?;
    let ld = card(diff.len()).ln();
    let premise_statement = 92.0 * ld <= 52.0 * p.ln();
    let premise_proof = 117.0 * ld <= 52.0 * p.ln() + 25.0 * card(diff2.len()).ln();

    let t_main = k * k * n * n / p;
    let t_second = k.powf(1.25) * n.powf(23.0 / 24.0);
    let t_sharp = n.powf(149.0 / 156.0);
    let envelope = envelope_log_cubed(DEFAULT_ENVELOPE_CONSTANT, a.p());
    Ok(BoundReport::new(
        "rAA",
        r as f64,
        0.0,
        vec![
            RhsTerm::new("K^2|A|^2/p", t_main),
            RhsTerm::new("K^(5/4)|A|^(23/24)", t_second),
            RhsTerm::new("|A|^(149/156)", t_sharp),
            RhsTerm::new("K", k),
        ],
        t_main + t_second,
        envelope,
    )
    .with_lhs_exact(BigInt::from(r))
    .with_note(format!("premise |A-A|^92 <= p^52: {premise_statement}"))
    .with_note(format!(
        "premise |A-A|^117 <= p^52 |2A-2A|^25: {premise_proof}"
    ))
    .with_exponent(r as f64 / (t_main + t_sharp)))
}

/// For each `i ∈ {2, 4, …, 2N}`, `|(A+i) ∩ (A+i)⁻¹|`, and the minimizing `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftProfile {
    pub rows: Vec<(u64, usize)>,
    pub argmin: u64,
}

pub fn shift_inverse_profile(a: &FpSet, n: u64) -> Result<ShiftProfile> {
    if n == 0 || 2 * n >= a.p() {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= N and 2N < p, got N = {n}"
        )));
    }
    let rows: Vec<(u64, usize)> = (1..=n)
        .map(|j| {
            let i = 2 * j;
            let shifted = a.translate(i as i64);
            let size = shifted
                .inverses()
                .intersection(&shifted)
                .map(|s| s.len())
                .unwrap_or(0);
            (i, size)
        })
        .collect();
    let argmin = rows
        .iter()
        .min_by_key(|&&(i, s)| (s, i))
        .map(|r| r.0)
        .unwrap_or(2);
    Ok(ShiftProfile { rows, argmin })
}

// ---------------------------------------------------------------------------
// Integer and rational mode

/// A finite set of rationals standing in for a subset of R.
pub type RatSet = Vec<BigRational>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Sorts and removes duplicates.
pub fn rat_set(items: impl IntoIterator<Item = BigRational>) -> RatSet {
    let mut v: Vec<BigRational> = items.into_iter().collect();
    v.sort();
    v.dedup();
    v
}

pub fn int_set(items: impl IntoIterator<Item = i64>) -> RatSet {
    rat_set(items.into_iter().map(rat))
}

/// `A = Q ⊔ ⊔_{j=1}^{N} (Q⁻¹ + j)` with `Q = {1, …, 2M}`.
pub fn q_inverse_family(m: u64, n: u64) -> RatSet {
    let q: Vec<BigRational> = (1..=2 * m as i64).map(rat).collect();
    let mut out = q.clone();
    for j in 1..=n as i64 {
        out.extend(q.iter().map(|x| x.recip() + rat(j)));
    }
    rat_set(out)
}

/// `#{(a,b,c,d) : (a+b)(c+d) = λ}` over the rationals.
pub fn count_hyperbola_rational(
    a: &[BigRational],
    b: &[BigRational],
    c: &[BigRational],
    d: &[BigRational],
    lambda: &BigRational,
) -> Result<u64> {
    if lambda.is_zero() {
        return Err(Error::ZeroLambda);
    }
    let mut right: HashMap<BigRational, u64> = HashMap::new();
    for x in c {
        for y in d {
            *right.entry(x + y).or_default() += 1;
        }
    }
    let mut n = 0;
    for x in a {
        for y in b {
            let s = x + y;
            if !s.is_zero() {
                n += right.get(&(lambda / s)).copied().unwrap_or(0);
            }
        }
    }
    Ok(n)
}

/// `E⁺(B) = #{b₁ + b₂ = b₃ + b₄}` for a set of integers.
pub fn integer_additive_energy(set: &[i64]) -> u128 {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    let mut reps: HashMap<i64, u128> = HashMap::new();
    for &x in &v {
        for &y in &v {
            *reps.entry(x + y).or_default() += 1;
        }
    }
    reps.values().map(|r| r * r).sum()
}

fn dedup_ints(set: &[i64]) -> Vec<i64> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoBound {
    pub rho: f64,
    pub k: u32,
    /// `(|B|^k|C|^{k−1})^{−1/(8k−6)}` at the maximizing `k`.
    pub comparison: f64,
    pub max_k: u32,
}

/// `ρ(B,C) = max_{2≤k≤20} (E⁺(C)^{k−1}E⁺(B)^{k−2} / (|B|^{4k−6}|C|^{4k−4}))^{1/(8k−6)}`.
pub fn rho_bound(b: &[i64], c: &[i64]) -> Result<RhoBound> {
    let (b, c) = (dedup_ints(b), dedup_ints(c));
    if b.is_empty() || c.is_empty() {
        return Err(Error::InvalidParameter("rho needs nonempty sets".into()));
    }
    let lb = card(b.len()).ln();
    let lc = card(c.len()).ln();
    let leb = (integer_additive_energy(&b) as f64).ln();
    let lec = (integer_additive_energy(&c) as f64).ln();
    let mut best: Option<(f64, u32)> = None;
    for k in 2..=RHO_MAX_K {
        let kf = k as f64;
        let log =
            ((kf - 1.0) * lec + (kf - 2.0) * leb - (4.0 * kf - 6.0) * lb - (4.0 * kf - 4.0) * lc)
                / (8.0 * kf - 6.0);
        if best.is_none_or(|(v, _)| log > v) {
            best = Some((log, k));
        }
    }
    let (log, k) = best.expect("nonempty range");
    let kf = k as f64;
    let comparison = (-(kf * lb + (kf - 1.0) * lc) / (8.0 * kf - 6.0)).exp();
    Ok(RhoBound {
        rho: log.exp(),
        k,
        comparison,
        max_k: RHO_MAX_K,
    })
}

/// Count for `A, D ⊂ Q`, `B, C ⊂ Z` against
/// `sqrt(|A||D|)|B||C| · max{|D|^{−1/2}, ρ(B,C)}`.
///
/// The refined right-hand side
/// `(|B||C|)^{1/3} sqrt(|A||D|) |D|^{1/6l} (|B|²E⁺(C)^l E⁺(B)^{l−1})^{1/6l}`
/// is recorded (minimized over `l ≤ 20` satisfying
/// `|D|⁴ ≥ |B|^{4l−2}|C|^{4l}E⁺(C)^{−l}E⁺(B)^{−l+1}`) but not asserted.
/// The envelope is the bare constant 1024 since there is no prime.
pub fn bound_asym_z(
    a: &[BigRational],
    b: &[i64],
    c: &[i64],
    d: &[BigRational],
    lambda: &BigRational,
) -> Result<BoundReport> {
    let (bi, ci) = (dedup_ints(b), dedup_ints(c));
    let a = rat_set(a.iter().cloned());
    let d = rat_set(d.iter().cloned());
    let rho = rho_bound(&bi, &ci)?;
    let br = int_set(bi.iter().copied());
    let cr = int_set(ci.iter().copied());
    let n = count_hyperbola_rational(&a, &br, &cr, &d, lambda)?;

    let (na, nb, nc, nd) = (card(a.len()), card(bi.len()), card(ci.len()), card(d.len()));
    let rhs = (na * nd).sqrt() * nb * nc * nd.powf(-0.5).max(rho.rho);
    let eb = integer_additive_energy(&bi) as f64;
    let ec = integer_additive_energy(&ci) as f64;
    let mut refined: Option<(f64, u32)> = None;
    for l in 1..=REFINED_MAX_L {
        let lf = l as f64;
        let premise = 4.0 * nd.ln()
            >= (4.0 * lf - 2.0) * nb.ln() + 4.0 * lf * nc.ln()
                - lf * ec.ln()
                - (lf - 1.0) * eb.ln();
        if premise {
            let v = (nb * nc).cbrt()
                * (na * nd).sqrt()
                * nd.powf(1.0 / (6.0 * lf))
                * (nb * nb * ec.powf(lf) * eb.powf(lf - 1.0)).powf(1.0 / (6.0 * lf));
            if refined.is_none_or(|(r, _)| v < r) {
                refined = Some((v, l));
            }
        }
    }
    let mut terms = vec![
        RhsTerm::new(
            "sqrt(|A||D|)|B||C||D|^(-1/2)",
            (na * nd).sqrt() * nb * nc / nd.sqrt(),
        ),
        RhsTerm::new(
            "sqrt(|A||D|)|B||C|rho",
            (na * nd).sqrt() * nb * nc * rho.rho,
        ),
        RhsTerm::new("rho", rho.rho),
        RhsTerm::new("rho-comparison", rho.comparison),
    ];
    let mut notes = vec![format!(
        "rho maximized at k = {} over 2..={}",
        rho.k, rho.max_k
    )];
    match refined {
        Some((v, l)) => {
            terms.push(RhsTerm::new("refined", v));
            notes.push(format!("refined premise holds; best l = {l}"));
        }
        None => notes.push(format!(
            "refined premise fails for all l <= {REFINED_MAX_L}"
        )),
    }
    let mut report = BoundReport::new(
        "asym-Z",
        n as f64,
        0.0,
        terms,
        rhs,
        DEFAULT_ENVELOPE_CONSTANT,
    )
    .with_lhs_exact(BigInt::from(n))
    .with_exponent(n as f64 / rhs);
    report.notes = notes;
    Ok(report)
}

/// `#{(a,b,d) : (a+b)(b+d) = 1, b ∈ ω·[N]}` against
/// `sqrt(|A||D|) N · max{|D|^{−1/2}, N^{−1/5}}`, envelope 1024.
///
/// For the largest `l ≤ 20` with `|D|² ≥ N^l` the refined
/// `sqrt(|A||D|) N^{2/3} |D|^{1/6l}` is recorded.
pub fn bound_prop_re(
    a: &[BigRational],
    d: &[BigRational],
    omega: i64,
    n: u64,
) -> Result<BoundReport> {
    if omega.abs() < 2 {
        return Err(Error::InvalidParameter("need |omega| >= 2".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("need N >= 1".into()));
    }
    let a = rat_set(a.iter().cloned());
    let d = rat_set(d.iter().cloned());
    let one = rat(1);
    let mut count = 0u64;
    for j in 1..=n as i64 {
        let b = rat(omega * j);
        let right: HashMap<BigRational, u64> = d.iter().map(|x| (&b + x, 1)).collect();
        for x in &a {
            let s = x + &b;
            if !s.is_zero() {
                count += right.get(&(&one / s)).copied().unwrap_or(0);
            }
        }
    }
    let (na, nd, nf) = (card(a.len()), card(d.len()), n as f64);
    let rhs = (na * nd).sqrt() * nf * nd.powf(-0.5).max(nf.powf(-0.2));
    let mut terms = vec![
        RhsTerm::new("sqrt(|A||D|)N|D|^(-1/2)", (na * nd).sqrt() * nf / nd.sqrt()),
        RhsTerm::new("sqrt(|A||D|)N^(4/5)", (na * nd).sqrt() * nf.powf(0.8)),
    ];
    let l_max = (1..=REFINED_MAX_L)
        .rev()
        .find(|&l| 2.0 * nd.ln() >= l as f64 * nf.ln());
    if let Some(l) = l_max {
        let v = (na * nd).sqrt() * nf.powf(2.0 / 3.0) * nd.powf(1.0 / (6.0 * l as f64));
        terms.push(RhsTerm::new("refined", v));
    }
    Ok(BoundReport::new(
        "shifted-product",
        count as f64,
        0.0,
        terms,
        rhs,
        DEFAULT_ENVELOPE_CONSTANT,
    )
    .with_lhs_exact(BigInt::from(count))
    .with_exponent(count as f64 / rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modfield::FieldContext;
    use crate::oracle;
    use std::sync::Arc;

    fn ctx(p: u64) -> Arc<FieldContext> {
        FieldContext::new(p).unwrap()
    }

    #[test]
    fn count_examples() {
        let c = ctx(11);
        let s = |x: i64| FpSet::new(&c, [x]);
        assert_eq!(count_hyperbola(&s(1), &s(2), &s(3), &s(4), 10).unwrap(), 1);
        assert_eq!(count_hyperbola(&s(0), &s(0), &s(0), &s(0), 1).unwrap(), 0);
        assert_eq!(
            count_hyperbola(&s(1), &s(2), &s(3), &s(4), 0),
            Err(Error::ZeroLambda)
        );
    }

    #[test]
    fn full_field_count() {
        // (a+b)(c+d) = 1 over F_7: p choices of a, p of c, then s = a+b ranges
        // over F_7^* with c+d = 1/s determined, giving p²(p−1).
        let c = ctx(7);
        let f = FpSet::full(&c);
        let n = count_hyperbola(&f, &f, &f, &f, 1).unwrap();
        assert_eq!(n, oracle::count_hyperbola(&f, &f, &f, &f, 1));
        assert_eq!(n, 7 * 7 * 6);
        let dev = deviation(&f, &f, &f, &f, 1).unwrap();
        assert_eq!(dev, BigRational::from_integer((294 - 343).into()));
    }

    #[test]
    fn empty_deviation() {
        let c = ctx(13);
        let e = FpSet::empty(&c);
        let f = FpSet::interval(&c, 1, 5);
        assert!(deviation(&e, &f, &f, &f, 3).unwrap().is_zero());
    }

    #[test]
    fn action_formulation_agrees() {
        let c = ctx(13);
        let a = FpSet::new(&c, [1, 4, 5, 9]);
        let b = FpSet::new(&c, [0, 2, 3]);
        let cc = FpSet::new(&c, [6, 7, 12]);
        let d = FpSet::new(&c, [1, 2, 8, 10, 11]);
        for l in [1, 5, 12] {
            assert_eq!(
                count_hyperbola(&a, &b, &cc, &d, l).unwrap(),
                count_hyperbola_via_action(&a, &b, &cc, &d, l).unwrap()
            );
        }
    }

    #[test]
    fn shift_profile_examples() {
        let c = ctx(101);
        // A + 2 = {1, 100}
        let a = FpSet::new(&c, [-1, 98]);
        let prof = shift_inverse_profile(&a, 3).unwrap();
        assert_eq!(prof.rows[0], (2, 2));
        let prof = shift_inverse_profile(&FpSet::empty(&c), 4).unwrap();
        assert!(prof.rows.iter().all(|&(_, s)| s == 0));
        assert_eq!(prof.rows.len(), 4);
        assert!(shift_inverse_profile(&a, 0).is_err());
        assert!(shift_inverse_profile(&a, 51).is_err());
    }

    #[test]
    fn rho_examples() {
        let r = rho_bound(&[0], &[0]).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-12);
        let b: Vec<i64> = (1..=8).collect();
        let r = rho_bound(&b, &b).unwrap();
        assert!(r.rho <= r.comparison * (1.0 + 1e-12));
        let b3: Vec<i64> = b.iter().map(|x| 3 * x).collect();
        let r3 = rho_bound(&b3, &b).unwrap();
        assert!((r3.rho - r.rho).abs() < 1e-12);
        assert_eq!(integer_additive_energy(&[1, 2, 3]), 19);
    }

    #[test]
    fn rational_count_and_family() {
        let one = rat(1);
        let a = int_set([0]);
        let n = count_hyperbola_rational(&a, &int_set([1]), &int_set([0]), &int_set([1]), &one)
            .unwrap();
        assert_eq!(n, 1);
        let fam = q_inverse_family(3, 2);
        assert!(fam.len() > 6);
        assert!(fam.contains(&(BigRational::new(1.into(), 2.into()) + rat(2))));
    }

    #[test]
    fn r_aa_singleton() {
        let c = ctx(101);
        let a = FpSet::new(&c, [10]);
        assert_eq!(product_reps(&a, 100).unwrap(), 1);
        let r = bound_r_aa(&a, 100).unwrap();
        assert!(r.passed);
        assert_eq!(r.notes.len(), 2);
    }
}

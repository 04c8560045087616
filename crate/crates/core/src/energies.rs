//! Abelian energies: `E⁺`, `E^×`, `T_k⁺`, `E_k⁺`, and the sum–product
//! quantity `Σ_x r²_{(A−A)(B−B)}(x)`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modfield::{rep_additive, rep_multiplicative, FpSet, RepTable, Sign};
use crate::report::{log2, BoundReport, RhsTerm};
use crate::spectral::{dft, WeightFn};
use crate::Count;

/// Envelope for the progression-energy check, in units of `|A||B| log² p`.
pub const PROGRESSION_ENVELOPE: f64 = 64.0;
/// Envelope for the `Σ r²_{(A−A)(B−B)}` check, in units of its right-hand side.
pub const D2_ENVELOPE: f64 = 1024.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Brute,
    Table,
    Spectral,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Table => "table",
            Method::Spectral => "spectral",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub name: &'static str,
    pub value: Count,
    pub method: Method,
    pub inputs: String,
}

fn sum_of_powers(values: impl IntoIterator<Item = u64>, k: u32) -> Count {
    values
        .into_iter()
        .filter(|&v| v > 0)
        .map(|v| BigUint::from(v).pow(k))
        .sum()
}

/// `E⁺(A, B) = Σ_x r²_{A+B}(x)`.
pub fn additive_energy(a: &FpSet, b: &FpSet) -> Result<Count> {
    let r = rep_additive(a, b, Sign::Plus)?;
    Ok(sum_of_powers(r.values().iter().copied(), 2))
}

/// `E⁺(A, B) = Σ_x r_{A−A}(x) r_{B−B}(x)`.
pub fn additive_energy_by_differences(a: &FpSet, b: &FpSet) -> Result<Count> {
    let ra = rep_additive(a, a, Sign::Minus)?;
    let rb = rep_additive(b, b, Sign::Minus)?;
    Ok(ra
        .values()
        .iter()
        .zip(rb.values())
        .map(|(&x, &y)| BigUint::from(x) * y)
        .sum())
}

/// `p⁻¹ Σ_ξ |Â(ξ)|² |B̂(ξ)|²` in floating point.
pub fn additive_energy_spectral(a: &FpSet, b: &FpSet) -> Result<f64> {
    a.ctx().same_as(b.ctx())?;
    let sa = dft(&WeightFn::indicator(a))?;
    let sb = dft(&WeightFn::indicator(b))?;
    let total: f64 = sa
        .coeffs()
        .iter()
        .zip(sb.coeffs())
        .map(|(x, y)| x.norm_sqr() * y.norm_sqr())
        .sum();
    Ok(total / a.p() as f64)
}

/// Rounds a spectral energy to the nearest integer.
pub fn round_to_count(x: f64) -> Count {
    BigUint::from(x.round().max(0.0) as u128)
}

pub fn additive_energy_report(a: &FpSet, b: &FpSet, method: Method) -> Result<EnergyReport> {
    let value = match method {
        Method::Brute => crate::oracle::additive_energy(a, b)?,
        Method::Table => additive_energy(a, b)?,
        Method::Spectral => round_to_count(additive_energy_spectral(a, b)?),
    };
    Ok(EnergyReport {
        name: "E+",
        value,
        method,
        inputs: format!("|A|={}, |B|={}, p={}", a.len(), b.len(), a.p()),
    })
}

/// `E^×(A, B) = Σ_x r²_{AB}(x)`.
///
/// On F_p^* the table is an additive convolution in discrete-log
/// coordinates; pairs involving 0 all sit at `x = 0`.
pub fn multiplicative_energy(a: &FpSet, b: &FpSet) -> Result<Count> {
    let r = rep_multiplicative(a, b)?;
    Ok(sum_of_powers(r.values().iter().copied(), 2))
}

fn check_order(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "energy order k must be >= 1".into(),
        ));
    }
    Ok(())
}

/// `r_{kA}` as exact counts.
pub fn iterated_sum_reps(a: &FpSet, k: u32) -> Result<Vec<Count>> {
    check_order(k)?;
    let p = a.p() as usize;
    let mut cur: Vec<Count> = vec![Count::zero(); p];
    for x in a.iter() {
        cur[x as usize] = BigUint::from(1u8);
    }
    for _ in 1..k {
        let mut next: Vec<Count> = vec![Count::zero(); p];
        for (x, v) in cur.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for y in a.iter() {
                next[(x + y as usize) % p] += v;
            }
        }
        cur = next;
    }
    Ok(cur)
}

/// `T_k⁺(A) = #{a₁+…+a_k = a′₁+…+a′_k} = Σ_x r²_{kA}(x)`.
pub fn t_plus_k(a: &FpSet, k: u32) -> Result<Count> {
    Ok(iterated_sum_reps(a, k)?.iter().map(|v| v * v).sum())
}

/// `p⁻¹ Σ_ξ |Â(ξ)|^{2k}`.
pub fn t_plus_k_spectral(a: &FpSet, k: u32) -> Result<f64> {
    check_order(k)?;
    Ok(dft(&WeightFn::indicator(a))?.moment(2.0 * k as f64))
}

/// `E_k⁺(A) = Σ_x r^k_{A−A}(x)`.
pub fn e_plus_k(a: &FpSet, k: u32) -> Result<Count> {
    check_order(k)?;
    let r = rep_additive(a, a, Sign::Minus)?;
    Ok(sum_of_powers(r.values().iter().copied(), k))
}

/// Multiplicative convolution `R(x) = Σ_{uv = x} f(u) g(v)` of two tables.
pub fn multiplicative_convolution(
    f: &RepTable,
    g: &RepTable,
    ctx: &crate::FieldContext,
) -> Vec<u128> {
    let p = ctx.p();
    let order = p - 1;
    let total_f: u128 = f.values().iter().map(|&v| v as u128).sum();
    let total_g: u128 = g.values().iter().map(|&v| v as u128).sum();
    let (f0, g0) = (f.get(0) as u128, g.get(0) as u128);

    let mut by_log = vec![0u128; order as usize];
    let fl: Vec<(u64, u128)> = f
        .support()
        .filter(|&(x, _)| x != 0)
        .map(|(x, v)| (ctx.dlog(x), v as u128))
        .collect();
    let gl: Vec<(u64, u128)> = g
        .support()
        .filter(|&(x, _)| x != 0)
        .map(|(x, v)| (ctx.dlog(x), v as u128))
        .collect();
    for &(i, u) in &fl {
        for &(j, v) in &gl {
            by_log[((i + j) % order) as usize] += u * v;
        }
    }
    let mut out = vec![0u128; p as usize];
    for (k, &c) in by_log.iter().enumerate() {
        out[ctx.exp(k as u64) as usize] = c;
    }
    out[0] = f0 * total_g + total_f * g0 - f0 * g0;
    out
}

/// `r_{(A−A)(B−B)}` over all of F_p, zeros included.
pub fn difference_product_reps(a: &FpSet, b: &FpSet) -> Result<Vec<u128>> {
    let ra = rep_additive(a, a, Sign::Minus)?;
    let rb = rep_additive(b, b, Sign::Minus)?;
    Ok(multiplicative_convolution(&ra, &rb, a.ctx()))
}

/// `Σ_x r²_{(A−A)(B−B)}(x)`.
pub fn d2_quantity(a: &FpSet, b: &FpSet) -> Result<Count> {
    Ok(difference_product_reps(a, b)?
        .into_iter()
        .filter(|&v| v > 0)
        .map(|v| BigUint::from(v) * v)
        .sum())
}

fn card(x: usize) -> f64 {
    x as f64
}

fn count_f64(c: &Count) -> f64 {
    c.to_f64().unwrap_or(f64::INFINITY)
}

/// `|E^×(A,B) − |A|²|B|²/p| ≤ 64·|A||B|·log² p` for unit-step progressions.
pub fn check_progression_energy(a: &FpSet, b: &FpSet) -> Result<BoundReport> {
    let e = multiplicative_energy(a, b)?;
    let p = a.p();
    let (na, nb) = (a.len(), b.len());
    let main = BigRational::new(BigInt::from(na * na) * (nb * nb), BigInt::from(p));
    let dev = BigRational::from_integer(BigInt::from(e.clone())) - &main;
    let log_sq = log2(p as f64).powi(2);
    let rhs = card(na) * card(nb) * log_sq;

    let mut report = BoundReport::new(
        "progression-energy",
        count_f64(&e),
        main.to_f64().unwrap_or(f64::NAN),
        vec![RhsTerm::new("|A||B|log^2 p", rhs)],
        rhs,
        PROGRESSION_ENVELOPE,
    )
    .with_lhs_exact(BigInt::from(e))
    .with_main_exact(main);
    let abs_dev = dev.abs().to_f64().unwrap_or(f64::INFINITY);
    report.passed = abs_dev <= PROGRESSION_ENVELOPE * rhs;
    if rhs > 0.0 {
        report.exponent = Some(abs_dev / rhs);
    }
    if !(a.is_unit_step_progression() && b.is_unit_step_progression()) {
        report = report
            .with_note("premise failed: inputs are not unit-step progressions")
            .reporting_only();
    }
    Ok(report)
}

/// `Σ r²_{(A−A)(B−B)} − |A|⁴|B|⁴/p` against `(|A||B|)^{5/2} E⁺(A,B)^{1/2} log³ p`.
pub fn check_d2_bound(a: &FpSet, b: &FpSet) -> Result<BoundReport> {
    let d2 = d2_quantity(a, b)?;
    let e = additive_energy(a, b)?;
    let p = a.p();
    let (na, nb) = (card(a.len()), card(b.len()));
    let main = (na * nb).powi(4) / p as f64;
    let core = (na * nb).powf(2.5) * count_f64(&e).sqrt();
    let rhs = core * log2(p as f64).powi(3);
    Ok(BoundReport::new(
        "d2-sum-product",
        count_f64(&d2),
        main,
        vec![RhsTerm::new("(|A||B|)^(5/2) E+(A,B)^(1/2) log^3 p", rhs)],
        rhs,
        D2_ENVELOPE,
    )
    .with_lhs_exact(BigInt::from(d2)))
}

/// Reports `E^×(A) / (K^{51/26} |A|^{32/13})` with `K = |A+A|/|A|`.
///
/// Only positivity and finiteness of the ratio are asserted; the premise
/// `|A| ≤ p^{13/23} K^{25/92}` is recorded as a note.
pub fn report_e_times_small_doubling(a: &FpSet) -> Result<BoundReport> {
    if a.is_empty() {
        return Err(Error::InvalidParameter("set must be nonempty".into()));
    }
    let e = multiplicative_energy(a, a)?;
    let n = card(a.len());
    let k = card(a.sumset(a)?.len()) / n;
    let rhs = k.powf(51.0 / 26.0) * n.powf(32.0 / 13.0);
    let premise = n <= (a.p() as f64).powf(13.0 / 23.0) * k.powf(25.0 / 92.0);
    let lhs = count_f64(&e);
    let mut r = BoundReport::new(
        "e-times-small-doubling",
        lhs,
        0.0,
        vec![
            RhsTerm::new("K^(51/26)|A|^(32/13)", rhs),
            RhsTerm::new("K", k),
        ],
        rhs,
        f64::INFINITY,
    )
    .with_lhs_exact(BigInt::from(e))
    .with_note(format!("premise |A| <= p^(13/23) K^(25/92): {premise}"))
    .reporting_only();
    let ratio = lhs / rhs;
    r.passed = ratio.is_finite() && ratio > 0.0;
    r.exponent = Some(ratio);
    Ok(r)
}

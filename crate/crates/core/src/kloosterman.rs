//! Kloosterman sums `K(n,m) = Σ_{x≠0} e(nx + m/x)` and bilinear forms
//! `S(α,β) = Σ_{n,m} α(n)β(m)K(n,m)`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modfield::FieldContext;
use crate::report::{envelope_log_cubed, BoundReport, RhsTerm, DEFAULT_ENVELOPE_CONSTANT};
use crate::spectral::{dft, roots, spectrum_lq_norm, wiener_norm, WeightFn};

/// `K(t, 1)` for every `t`, from which `K(n,m) = K(nm, 1)` when `nm ≠ 0`.
#[derive(Clone, Debug)]
pub struct KloostermanTable {
    ctx: Arc<FieldContext>,
    values: Vec<f64>,
}

impl KloostermanTable {
    /// Direct `O(p²)` construction from a cosine table.
    pub fn new(ctx: &Arc<FieldContext>) -> Self {
        let p = ctx.p() as usize;
        let cos: Vec<f64> = roots(ctx.p()).iter().map(|w| w.re).collect();
        let invs: Vec<usize> = (1..p).map(|x| ctx.inv(x as u64) as usize).collect();
        let values = (0..p)
            .map(|t| {
                invs.iter()
                    .enumerate()
                    .map(|(i, &xi)| cos[(t * (i + 1) + xi) % p])
                    .sum()
            })
            .collect();
        KloostermanTable {
            ctx: Arc::clone(ctx),
            values,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// `values[t] = K(t, 1)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `K(n, m)`, with `K(0,0) = p − 1` and `K(n,0) = K(0,m) = −1` otherwise.
    pub fn get(&self, n: u64, m: u64) -> f64 {
        let p = self.ctx.p();
        match (n % p, m % p) {
            (0, 0) => (p - 1) as f64,
            (0, _) | (_, 0) => -1.0,
            (n, m) => self.values[self.ctx.mul(n, m) as usize],
        }
    }
}

/// `Σ_{x≠0} e(nx + m x⁻¹)` by direct summation with exact exponent reduction.
pub fn kloosterman_sum(ctx: &FieldContext, n: i64, m: i64) -> Complex64 {
    let p = ctx.p();
    let (n, m) = (ctx.reduce(n), ctx.reduce(m));
    let step = std::f64::consts::TAU / p as f64;
    (1..p)
        .map(|x| {
            let k = ctx.add(ctx.mul(n, x), ctx.mul(m, ctx.inv(x)));
            Complex64::from_polar(1.0, step * k as f64)
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BilinearMethod {
    /// `Σ_{n ∈ supp α} Σ_{m ∈ supp β} α(n)β(m)K(n,m)` with table lookups.
    Direct,
    /// `Σ_{x≠0} α̂(x) β̂(x⁻¹)`.
    Spectral,
}

pub fn bilinear_form(
    table: &KloostermanTable,
    alpha: &WeightFn,
    beta: &WeightFn,
    method: BilinearMethod,
) -> Result<Complex64> {
    let p = table.ctx.p();
    if alpha.p() != p || beta.p() != p {
        return Err(Error::ContextMismatch {
            left: p,
            right: if alpha.p() != p { alpha.p() } else { beta.p() },
        });
    }
    match method {
        BilinearMethod::Direct => {
            let mut s = Complex64::new(0.0, 0.0);
            for &n in alpha.support() {
                let an = alpha.values()[n];
                let mut inner = Complex64::new(0.0, 0.0);
                for &m in beta.support() {
                    inner += beta.values()[m] * table.get(n as u64, m as u64);
                }
                s += an * inner;
            }
            Ok(s)
        }
        BilinearMethod::Spectral => {
            let fa = dft(alpha)?;
            let fb = dft(beta)?;
            let ctx = &table.ctx;
            Ok((1..p).map(|x| fa.get(x) * fb.get(ctx.inv(x))).sum())
        }
    }
}

/// `|S| ≤ p‖α‖₂‖β‖₂` and `|S| ≤ 2√p‖α‖₁‖β‖₁`.
///
/// The second bound uses `|K(n,m)| ≤ 2√p`, which fails at `(0,0)`; when
/// `α(0)β(0) ≠ 0` it is recorded but not part of the verdict.
pub fn bound_basic(
    table: &KloostermanTable,
    alpha: &WeightFn,
    beta: &WeightFn,
) -> Result<BoundReport> {
    let s = bilinear_form(table, alpha, beta, BilinearMethod::Direct)?.norm();
    let p = table.ctx.p() as f64;
    let l2 = p * alpha.l2_norm() * beta.l2_norm();
    let l1 = 2.0 * p.sqrt() * alpha.l1_norm() * beta.l1_norm();
    let ramified = alpha.get(0).norm() > 0.0 && beta.get(0).norm() > 0.0;
    let slack = |b: f64| b + 1e-9 * b.max(1.0);
    let mut report = BoundReport::new(
        "kloosterman-basic",
        s,
        0.0,
        vec![
            RhsTerm::new("p|a|_2|b|_2", l2),
            RhsTerm::new("2sqrt(p)|a|_1|b|_1", l1),
        ],
        if ramified { l2 } else { l2.min(l1) },
        1.0,
    );
    report.passed = s <= slack(l2) && (ramified || s <= slack(l1));
    if ramified {
        report = report.with_note("alpha(0)beta(0) != 0: the 2sqrt(p) bound is not asserted");
    }
    Ok(report)
}

/// Whether every point of `supp f` lies in `{1, …, n} + t`.
fn supported_on(f: &WeightFn, n: u64, t: u64) -> Option<u64> {
    let p = f.p();
    f.support().iter().map(|&x| x as u64).find(|&x| {
        let off = (x + p - t % p) % p;
        off == 0 || off > n
    })
}

/// `|S(α,β)|` against the two bounds for `supp α ⊆ [N]+t₁`, `supp β ⊆ [M]+t₂`:
///
/// `‖β‖₂(‖α̂‖_{4/3} N^{7/48}M^{7/48}p^{23/24} + (‖α‖₂‖α‖₁)^{1/2}p^{3/4} + ‖α‖_W p)`,
///
/// and, when `M²N²‖α̂‖_{4/3}^{12} < p‖α‖₂^{12}`,
///
/// `‖β‖₂(‖α̂‖_{4/3}^{6/7}‖α‖₂^{1/7}N^{1/7}M^{1/7}p^{13/14} + (‖α‖₂‖α‖₁)^{1/2}p^{3/4} + ‖α̂‖_{4/3}p^{13/12})`.
///
/// `‖α̂‖_{4/3}` is taken with the normalized measure on frequencies. The
/// smaller applicable bound is used, with envelope `1024·log³p`; the exponent
/// field holds `log_p(|S| / (‖α‖₂‖β‖₂))`.
pub fn bound_thm_nm(
    table: &KloostermanTable,
    alpha: &WeightFn,
    beta: &WeightFn,
    n: u64,
    m: u64,
    t1: u64,
    t2: u64,
) -> Result<BoundReport> {
    if let Some(x) = supported_on(alpha, n, t1).or_else(|| supported_on(beta, m, t2)) {
        return Err(Error::SupportOutsideProgression(x));
    }
    let p = table.ctx.p();
    let pf = p as f64;
    let s = bilinear_form(table, alpha, beta, BilinearMethod::Spectral)?.norm();
    let a2 = alpha.l2_norm();
    let a1 = alpha.l1_norm();
    let b2 = beta.l2_norm();
    let aw = wiener_norm(alpha)?;
    let a43 = spectrum_lq_norm(alpha, 4.0 / 3.0)?;
    let (nf, mf) = (n as f64, m as f64);
    let mixed = (a2 * a1).sqrt() * pf.powf(0.75);

    let first = b2 * (a43 * (nf * mf).powf(7.0 / 48.0) * pf.powf(23.0 / 24.0) + mixed + aw * pf);
    let premise = 2.0 * (mf * nf).ln() + 12.0 * a43.ln() < pf.ln() + 12.0 * a2.ln();
    let second = b2
        * (a43.powf(6.0 / 7.0)
            * a2.powf(1.0 / 7.0)
            * (nf * mf).powf(1.0 / 7.0)
            * pf.powf(13.0 / 14.0)
            + mixed
            + a43 * pf.powf(13.0 / 12.0));
    let rhs = if premise { first.min(second) } else { first };

    let mut terms = vec![
        RhsTerm::new("bound1", first),
        RhsTerm::new("|a^|_4/3", a43),
        RhsTerm::new("|a|_W", aw),
    ];
    if premise {
        terms.push(RhsTerm::new("bound2", second));
    }
    let envelope = envelope_log_cubed(DEFAULT_ENVELOPE_CONSTANT, p);
    let norm = a2 * b2;
    let mut report = BoundReport::new("kloosterman-NM", s, 0.0, terms, rhs, envelope)
        .with_note(format!("second-bound premise: {premise}"));
    if s > 0.0 && norm > 0.0 {
        report = report.with_exponent((s / norm).ln() / pf.ln());
    }
    Ok(report)
}

/// One instance of a saving-exponent scan.
#[derive(Clone, Debug)]
pub struct ScanInstance {
    pub alpha: WeightFn,
    pub beta: WeightFn,
    pub n: u64,
    pub m: u64,
    pub shift: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub p: u64,
    pub n: u64,
    pub m: u64,
    pub shift: u64,
    pub s_abs: f64,
    pub norm_product: f64,
    /// `1 − log_p(|S| / (‖α‖₂‖β‖₂))`.
    pub delta: f64,
    /// Both weights are point masses, so `δ` says nothing.
    pub degenerate: bool,
    pub basic_bound_holds: bool,
}

/// `α = β = 1_{[N]+shift}` with `N = M`.
pub fn interval_instance(p: u64, n: u64, shift: u64) -> ScanInstance {
    let mut v = vec![0.0; p as usize];
    for x in 1..=n {
        v[((x + shift) % p) as usize] = 1.0;
    }
    let w = WeightFn::from_real(p, &v);
    ScanInstance {
        alpha: w.clone(),
        beta: w,
        n,
        m: n,
        shift,
    }
}

/// `α = β = δ_{1+shift}`.
pub fn point_mass_instance(p: u64, shift: u64) -> ScanInstance {
    let w = WeightFn::point_mass(p, 1 + shift);
    ScanInstance {
        alpha: w.clone(),
        beta: w,
        n: 1,
        m: 1,
        shift,
    }
}

pub fn saving_exponent_scan(
    table: &KloostermanTable,
    instances: impl IntoIterator<Item = ScanInstance>,
) -> Result<Vec<ScanRow>> {
    let p = table.ctx.p();
    instances
        .into_iter()
        .map(|inst| {
            let s = bilinear_form(table, &inst.alpha, &inst.beta, BilinearMethod::Spectral)?.norm();
            let norm = inst.alpha.l2_norm() * inst.beta.l2_norm();
            let delta = 1.0 - (s / norm).ln() / (p as f64).ln();
            Ok(ScanRow {
                p,
                n: inst.n,
                m: inst.m,
                shift: inst.shift,
                s_abs: s,
                norm_product: norm,
                delta,
                degenerate: inst.alpha.support().len() == 1 && inst.beta.support().len() == 1,
                basic_bound_holds: s <= p as f64 * norm * (1.0 + 1e-9),
            })
        })
        .collect()
}

//! Discrete Fourier analysis on F_p with `f̂(ξ) = Σ_x f(x) e(−ξx)` and
//! `e(x) = exp(2πix/p)`.
//!
//! Transforms are direct sums over the support (O(p·|supp f|)), which keeps
//! rounding error easy to bound. They are refused above
//! [`SpectralConfig::max_prime`] unless the cap is raised.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modfield::FpSet;

/// Values with modulus at or below this are treated as zero in supports.
pub const SUPPORT_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_MAX_PRIME: u64 = 4096;

#[derive(Clone, Copy, Debug)]
pub struct SpectralConfig {
    pub max_prime: u64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            max_prime: DEFAULT_MAX_PRIME,
        }
    }
}

impl SpectralConfig {
    fn check(&self, p: u64) -> Result<()> {
        if p > self.max_prime {
            return Err(Error::PrimeTooLarge {
                p,
                cap: self.max_prime,
            });
        }
        if self.max_prime > DEFAULT_MAX_PRIME && p > DEFAULT_MAX_PRIME {
            log::warn!(
                "direct transform at p = {p} costs O(p^2); cap raised above {DEFAULT_MAX_PRIME}"
            );
        }
        Ok(())
    }
}

/// `e(−k/p)` for `k = 0..p`.
pub(crate) fn roots(p: u64) -> Vec<Complex64> {
    (0..p)
        .map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / p as f64))
        .collect()
}

/// A complex-valued function on F_p.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFn {
    p: u64,
    values: Vec<Complex64>,
    support: Vec<usize>,
}

impl WeightFn {
    pub fn new(p: u64, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len() as u64, p, "a function on F_p needs p values");
        let support = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > SUPPORT_TOLERANCE)
            .map(|(x, _)| x)
            .collect();
        WeightFn { p, values, support }
    }

    pub fn from_real(p: u64, values: &[f64]) -> Self {
        Self::new(p, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, vec![Complex64::new(0.0, 0.0); p as usize])
    }

    /// `δ_x`.
    pub fn point_mass(p: u64, x: u64) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); p as usize];
        v[(x % p) as usize] = Complex64::new(1.0, 0.0);
        Self::new(p, v)
    }

    pub fn indicator(set: &FpSet) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); set.p() as usize];
        for x in set.iter() {
            v[x as usize] = Complex64::new(1.0, 0.0);
        }
        Self::new(set.p(), v)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn get(&self, x: u64) -> Complex64 {
        self.values[(x % self.p) as usize]
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im.abs() <= SUPPORT_TOLERANCE)
    }

    pub fn sum(&self) -> Complex64 {
        self.support.iter().map(|&x| self.values[x]).sum()
    }

    /// `(Σ_x |f(x)|^q)^{1/q}` with counting measure.
    pub fn lq_norm(&self, q: f64) -> f64 {
        self.support
            .iter()
            .map(|&x| self.values[x].norm().powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }

    pub fn l1_norm(&self) -> f64 {
        self.support.iter().map(|&x| self.values[x].norm()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.support
            .iter()
            .map(|&x| self.values[x].norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn linf_norm(&self) -> f64 {
        self.support
            .iter()
            .map(|&x| self.values[x].norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &WeightFn) -> WeightFn {
        assert_eq!(self.p, other.p);
        let v = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        WeightFn::new(self.p, v)
    }

    pub fn add(&self, other: &WeightFn) -> WeightFn {
        assert_eq!(self.p, other.p);
        let v = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        WeightFn::new(self.p, v)
    }

    /// `x ↦ conj(f(−x))`.
    pub fn conj_reflect(&self) -> WeightFn {
        let p = self.p as usize;
        let v = (0..p).map(|x| self.values[(p - x) % p].conj()).collect();
        WeightFn::new(self.p, v)
    }

    /// `(f * g)(y) = Σ_x f(x) g(y − x)`, by direct summation.
    pub fn convolve(&self, other: &WeightFn) -> WeightFn {
        assert_eq!(self.p, other.p);
        let p = self.p as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); p];
        for &x in &self.support {
            for &z in &other.support {
                out[(x + z) % p] += self.values[x] * other.values[z];
            }
        }
        WeightFn::new(self.p, out)
    }
}

/// The Fourier coefficients `f̂(ξ)`, `ξ = 0..p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    p: u64,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(p: u64, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len() as u64, p);
        Spectrum { p, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn get(&self, xi: u64) -> Complex64 {
        self.coeffs[(xi % self.p) as usize]
    }

    /// `(p⁻¹ Σ_ξ |f̂(ξ)|^q)^{1/q}`: normalized counting measure on frequencies.
    pub fn lq_norm(&self, q: f64) -> f64 {
        let s: f64 = self.coeffs.iter().map(|c| c.norm().powf(q)).sum();
        (s / self.p as f64).powf(1.0 / q)
    }

    /// `p⁻¹ Σ_ξ |f̂(ξ)|^m`, the unnormalized moment.
    pub fn moment(&self, m: f64) -> f64 {
        self.coeffs.iter().map(|c| c.norm().powf(m)).sum::<f64>() / self.p as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn dft(f: &WeightFn) -> Result<Spectrum> {
    dft_with(f, &SpectralConfig::default())
}

/// `f̂(ξ) = Σ_{x ∈ supp f} f(x) e(−ξx)`; indices `ξx mod p` are reduced
/// exactly before the root lookup.
pub fn dft_with(f: &WeightFn, cfg: &SpectralConfig) -> Result<Spectrum> {
    cfg.check(f.p)?;
    let p = f.p as usize;
    let w = roots(f.p);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); p];
    for &x in &f.support {
        let fx = f.values[x];
        let mut idx = 0usize;
        for c in coeffs.iter_mut() {
            *c += fx * w[idx];
            idx += x;
            if idx >= p {
                idx -= p;
            }
        }
    }
    Ok(Spectrum::new(f.p, coeffs))
}

pub fn idft(spec: &Spectrum) -> Result<WeightFn> {
    idft_with(spec, &SpectralConfig::default())
}

/// `f(x) = p⁻¹ Σ_ξ F(ξ) e(ξx)`.
pub fn idft_with(spec: &Spectrum, cfg: &SpectralConfig) -> Result<WeightFn> {
    cfg.check(spec.p)?;
    let p = spec.p as usize;
    let w = roots(spec.p);
    let mut out = vec![Complex64::new(0.0, 0.0); p];
    for (xi, &c) in spec.coeffs.iter().enumerate() {
        if c.norm() == 0.0 {
            continue;
        }
        let mut idx = 0usize;
        for v in out.iter_mut() {
            *v += c * w[idx].conj();
            idx += xi;
            if idx >= p {
                idx -= p;
            }
        }
    }
    let scale = 1.0 / spec.p as f64;
    Ok(WeightFn::new(
        spec.p,
        out.into_iter().map(|v| v * scale).collect(),
    ))
}

/// `‖f‖_W = p⁻¹ Σ_ξ |f̂(ξ)|`.
pub fn wiener_norm(f: &WeightFn) -> Result<f64> {
    Ok(dft(f)?.lq_norm(1.0))
}

/// `(p⁻¹ Σ_ξ |f̂(ξ)|^q)^{1/q}` for `q >= 1`; `q = 1` is the Wiener norm.
pub fn spectrum_lq_norm(f: &WeightFn, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "spectral L^q norm needs q >= 1, got {q}"
        )));
    }
    Ok(dft(f)?.lq_norm(q))
}

/// Integer numerators `p·A(x) − |A|` of the balanced function; they sum to 0.
pub fn balanced_numerators(set: &FpSet) -> Vec<i64> {
    let p = set.p() as i64;
    let n = set.len() as i64;
    let mut v = vec![-n; p as usize];
    for x in set.iter() {
        v[x as usize] += p;
    }
    v
}

/// `f_A(x) = A(x) − |A|/p`.
pub fn balanced(set: &FpSet) -> WeightFn {
    let p = set.p() as f64;
    let v: Vec<f64> = balanced_numerators(set)
        .into_iter()
        .map(|n| n as f64 / p)
        .collect();
    WeightFn::from_real(set.p(), &v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modfield::FieldContext;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn delta_and_constant() {
        let p = 31;
        let d = dft(&WeightFn::point_mass(p, 0)).unwrap();
        assert!(d.coeffs().iter().all(|c| (c - 1.0).norm() < 1e-12));

        let one = WeightFn::from_real(p, &vec![1.0; p as usize]);
        let s = dft(&one).unwrap();
        assert!((s.get(0).re - p as f64).abs() < 1e-9);
        assert!((1..p).all(|xi| s.get(xi).norm() < 1e-9));

        let back = idft(&d).unwrap();
        assert!((back.get(0) - 1.0).norm() < 1e-12);
        assert_eq!(back.support(), &[0]);

        let spike = Spectrum::new(p, {
            let mut v = vec![Complex64::new(0.0, 0.0); p as usize];
            v[0] = Complex64::new(p as f64, 0.0);
            v
        });
        let c = idft(&spike).unwrap();
        assert!(c.values().iter().all(|v| (v - 1.0).norm() < 1e-12));
    }

    #[test]
    fn parseval_interval() {
        let ctx = FieldContext::new(101).unwrap();
        let f = WeightFn::indicator(&FpSet::interval(&ctx, 1, 10));
        let s = dft(&f).unwrap();
        // independent route: direct double sum for |f̂(ξ)|²
        let mut direct = 0.0;
        for xi in 0..101u64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 1..=10u64 {
                acc += Complex64::from_polar(1.0, -TAU * ((xi * x) % 101) as f64 / 101.0);
            }
            direct += acc.norm_sqr();
        }
        let total: f64 = s.coeffs().iter().map(|c| c.norm_sqr()).sum();
        assert!(close(total, 1010.0, 1e-10));
        assert!(close(direct, 1010.0, 1e-10));
    }

    #[test]
    fn wiener_examples() {
        assert!(close(
            wiener_norm(&WeightFn::point_mass(13, 0)).unwrap(),
            1.0,
            1e-12
        ));
        let one = WeightFn::from_real(13, &[1.0; 13]);
        assert!(close(wiener_norm(&one).unwrap(), 1.0, 1e-12));
        assert!(close(
            spectrum_lq_norm(&WeightFn::point_mass(13, 4), 1.0).unwrap(),
            1.0,
            1e-12
        ));
    }

    #[test]
    fn lq_two_is_l2() {
        let ctx = FieldContext::new(53).unwrap();
        let f = WeightFn::indicator(&FpSet::new(&ctx, [1, 5, 9, 30]));
        assert!(close(spectrum_lq_norm(&f, 2.0).unwrap(), 2.0, 1e-12));
        assert!(spectrum_lq_norm(&f, 0.5).is_err());
        assert!(spectrum_lq_norm(&f, f64::NAN).is_err());
    }

    #[test]
    fn lq_four_thirds_matches_dense_sum() {
        let ctx = FieldContext::new(101).unwrap();
        let f = WeightFn::indicator(&FpSet::interval(&ctx, 1, 10));
        let mut s = 0.0;
        for xi in 0..101u64 {
            let acc: Complex64 = (1..=10u64)
                .map(|x| Complex64::from_polar(1.0, -TAU * (xi * x) as f64 / 101.0))
                .sum();
            s += acc.norm().powf(4.0 / 3.0);
        }
        let expected = (s / 101.0).powf(0.75);
        assert!(close(
            spectrum_lq_norm(&f, 4.0 / 3.0).unwrap(),
            expected,
            1e-10
        ));
    }

    #[test]
    fn balanced_function() {
        let ctx = FieldContext::new(5).unwrap();
        let f = balanced(&FpSet::new(&ctx, [0, 1]));
        let want = [0.6, 0.6, -0.4, -0.4, -0.4];
        for (x, w) in want.iter().enumerate() {
            assert!((f.get(x as u64).re - w).abs() < 1e-15);
        }
        assert_eq!(
            balanced_numerators(&FpSet::new(&ctx, [0, 1]))
                .iter()
                .sum::<i64>(),
            0
        );
        assert!(balanced(&FpSet::full(&ctx)).support().is_empty());
        assert!(balanced(&FpSet::empty(&ctx)).support().is_empty());
    }

    #[test]
    fn transform_cap() {
        let f = WeightFn::point_mass(4099, 1);
        assert!(matches!(
            dft(&f),
            Err(Error::PrimeTooLarge { p: 4099, cap: 4096 })
        ));
        let s = dft_with(&f, &SpectralConfig { max_prime: 5000 }).unwrap();
        assert!((s.get(0) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn conjugate_symmetry_for_real_input() {
        let ctx = FieldContext::new(61).unwrap();
        let f = balanced(&FpSet::new(&ctx, [2, 3, 7, 20, 44]));
        let s = dft(&f).unwrap();
        assert!(s.get(0).norm() < 1e-12);
        for xi in 1..61 {
            assert!((s.get(61 - xi) - s.get(xi).conj()).norm() < 1e-9);
        }
    }
}

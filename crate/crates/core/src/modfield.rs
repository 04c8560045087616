//! Exact arithmetic in the prime field F_p, finite subsets of F_p, and
//! representation-function tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Sets over fields up to this size carry a membership bitmap.
const BITMAP_LIMIT: u64 = 1 << 20;

/// Precomputed tables for arithmetic modulo an odd prime.
///
/// Immutable after construction; share it behind an [`Arc`].
#[derive(Clone)]
pub struct FieldContext {
    p: u64,
    inv: Vec<u64>,
    primitive_root: u64,
    dlog: Vec<u64>,
    exp: Vec<u64>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.p)
            .field("primitive_root", &self.primitive_root)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, smallest first.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl FieldContext {
    /// Builds the tables for `p`, which must be an odd prime.
    pub fn new(p: u64) -> Result<Arc<Self>> {
        if p < 3 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let factors = prime_factors(p - 1);
        let primitive_root = (2..p)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
            .expect("every prime field has a primitive root");

        let n = p as usize;
        let mut exp = vec![0u64; n - 1];
        let mut dlog = vec![0u64; n];
        let mut x = 1u64;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            dlog[x as usize] = k as u64;
            x = mul_mod(x, primitive_root, p);
        }

        let mut inv = vec![0u64; n];
        for x in 1..n {
            // g^k inverse is g^(p-1-k)
            let k = dlog[x] as usize;
            inv[x] = exp[(n - 1 - k) % (n - 1)];
        }

        Ok(Arc::new(FieldContext {
            p,
            inv,
            primitive_root,
            dlog,
            exp,
        }))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn primitive_root(&self) -> u64 {
        self.primitive_root
    }

    /// Inverse of a nonzero residue. `inv(0)` is 0 by convention.
    #[inline]
    pub fn inv(&self, x: u64) -> u64 {
        self.inv[(x % self.p) as usize]
    }

    /// Discrete logarithm to base [`primitive_root`](Self::primitive_root), for `x != 0`.
    #[inline]
    pub fn dlog(&self, x: u64) -> u64 {
        debug_assert!(!x.is_multiple_of(self.p));
        self.dlog[(x % self.p) as usize]
    }

    /// `g^k` for the primitive root `g`.
    #[inline]
    pub fn exp(&self, k: u64) -> u64 {
        self.exp[(k % (self.p - 1)) as usize]
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    /// `a / b`; `None` when `b == 0`.
    #[inline]
    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        (!b.is_multiple_of(self.p)).then(|| self.mul(a, self.inv(b)))
    }

    pub(crate) fn same_as(&self, other: &FieldContext) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }
}

/// A subset of F_p stored as strictly increasing residues.
#[derive(Clone)]
pub struct FpSet {
    ctx: Arc<FieldContext>,
    elems: Vec<u64>,
    bitmap: Option<Vec<u64>>,
}

impl PartialEq for FpSet {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p == other.ctx.p && self.elems == other.elems
    }
}

impl Eq for FpSet {}

impl fmt::Debug for FpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpSet(p={}, {:?})", self.ctx.p, self.elems)
    }
}

impl FpSet {
    /// Builds a set from arbitrary integers, reducing mod p and deduplicating.
    pub fn new<I: IntoIterator<Item = i64>>(ctx: &Arc<FieldContext>, items: I) -> Self {
        let elems = items.into_iter().map(|x| ctx.reduce(x)).collect();
        Self::from_residues(ctx, elems)
    }

    pub fn from_residues(ctx: &Arc<FieldContext>, mut elems: Vec<u64>) -> Self {
        for x in elems.iter_mut() {
            *x %= ctx.p;
        }
        elems.sort_unstable();
        elems.dedup();
        let bitmap = (ctx.p <= BITMAP_LIMIT).then(|| {
            let mut bits = vec![0u64; (ctx.p as usize).div_ceil(64)];
            for &x in &elems {
                bits[(x / 64) as usize] |= 1 << (x % 64);
            }
            bits
        });
        FpSet {
            ctx: Arc::clone(ctx),
            elems,
            bitmap,
        }
    }

    pub fn empty(ctx: &Arc<FieldContext>) -> Self {
        Self::from_residues(ctx, Vec::new())
    }

    pub fn full(ctx: &Arc<FieldContext>) -> Self {
        Self::from_residues(ctx, (0..ctx.p).collect())
    }

    /// `{start, start+1, ..., start+len-1}` reduced mod p.
    pub fn interval(ctx: &Arc<FieldContext>, start: i64, len: u64) -> Self {
        Self::progression(ctx, start, 1, len)
    }

    pub fn progression(ctx: &Arc<FieldContext>, start: i64, step: i64, len: u64) -> Self {
        Self::new(ctx, (0..len as i64).map(|j| start + j * step))
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn elems(&self) -> &[u64] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elems.iter().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        let x = x % self.ctx.p;
        match &self.bitmap {
            Some(bits) => bits[(x / 64) as usize] >> (x % 64) & 1 == 1,
            None => self.elems.binary_search(&x).is_ok(),
        }
    }

    /// Indicator function as a dense 0/1 vector of length p.
    pub fn indicator(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.ctx.p as usize];
        for &x in &self.elems {
            v[x as usize] = 1;
        }
        v
    }

    fn map(&self, f: impl Fn(u64) -> u64) -> Self {
        Self::from_residues(&self.ctx, self.elems.iter().map(|&x| f(x)).collect())
    }

    fn combine(&self, other: &FpSet, f: impl Fn(u64, u64) -> Option<u64>) -> Result<Self> {
        self.ctx.same_as(&other.ctx)?;
        let mut out = Vec::with_capacity(self.len() * other.len());
        for &a in &self.elems {
            for &b in &other.elems {
                if let Some(x) = f(a, b) {
                    out.push(x);
                }
            }
        }
        Ok(Self::from_residues(&self.ctx, out))
    }

    /// `A + B`.
    pub fn sumset(&self, other: &FpSet) -> Result<Self> {
        let ctx = &self.ctx;
        self.combine(other, |a, b| Some(ctx.add(a, b)))
    }

    /// `A - B`.
    pub fn difference_set(&self, other: &FpSet) -> Result<Self> {
        let ctx = &self.ctx;
        self.combine(other, |a, b| Some(ctx.sub(a, b)))
    }

    /// `AB`.
    pub fn product_set(&self, other: &FpSet) -> Result<Self> {
        let ctx = &self.ctx;
        self.combine(other, |a, b| Some(ctx.mul(a, b)))
    }

    /// `A/B`, skipping `b = 0`.
    pub fn quotient_set(&self, other: &FpSet) -> Result<Self> {
        let ctx = &self.ctx;
        self.combine(other, |a, b| ctx.div(a, b))
    }

    /// `m·A = {ma : a ∈ A}`.
    pub fn dilate(&self, m: i64) -> Self {
        let m = self.ctx.reduce(m);
        self.map(|x| self.ctx.mul(m, x))
    }

    /// `A + t`.
    pub fn translate(&self, t: i64) -> Self {
        let t = self.ctx.reduce(t);
        self.map(|x| self.ctx.add(x, t))
    }

    /// `-A`.
    pub fn negate(&self) -> Self {
        self.map(|x| self.ctx.neg(x))
    }

    /// `{a⁻¹ : a ∈ A, a ≠ 0}`.
    pub fn inverses(&self) -> Self {
        Self::from_residues(
            &self.ctx,
            self.elems
                .iter()
                .filter(|&&x| x != 0)
                .map(|&x| self.ctx.inv(x))
                .collect(),
        )
    }

    pub fn intersection(&self, other: &FpSet) -> Result<Self> {
        self.ctx.same_as(&other.ctx)?;
        let elems = self
            .elems
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        Ok(Self::from_residues(&self.ctx, elems))
    }

    pub fn union(&self, other: &FpSet) -> Result<Self> {
        self.ctx.same_as(&other.ctx)?;
        let mut elems = self.elems.clone();
        elems.extend_from_slice(&other.elems);
        Ok(Self::from_residues(&self.ctx, elems))
    }

    /// Whether the set is `{s, s+1, ..., s+n-1}` mod p for some `s`.
    pub fn is_unit_step_progression(&self) -> bool {
        let n = self.len() as u64;
        let p = self.ctx.p;
        if n <= 1 || n == p {
            return true;
        }
        // the unique start is the element whose predecessor is missing
        let starts: Vec<u64> = self
            .elems
            .iter()
            .copied()
            .filter(|&x| !self.contains((x + p - 1) % p))
            .collect();
        starts.len() == 1
    }
}

/// Sign for [`rep_additive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// A representation function `r(x)` tabulated over all of F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepTable {
    p: u64,
    values: Vec<u64>,
}

impl RepTable {
    pub fn from_values(p: u64, values: Vec<u64>) -> Self {
        assert_eq!(values.len() as u64, p, "table length must equal p");
        RepTable { p, values }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: u64) -> u64 {
        self.values[(x % self.p) as usize]
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Iterator over `(x, r(x))` with `r(x) > 0`.
    pub fn support(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(x, &v)| (x as u64, v))
    }
}

/// `r_{A±B}(x) = #{(a, b) ∈ A×B : a ± b = x}`.
pub fn rep_additive(a: &FpSet, b: &FpSet, sign: Sign) -> Result<RepTable> {
    let ctx = a.ctx();
    ctx.same_as(b.ctx())?;
    let mut values = vec![0u64; ctx.p() as usize];
    for x in a.iter() {
        for y in b.iter() {
            let s = match sign {
                Sign::Plus => ctx.add(x, y),
                Sign::Minus => ctx.sub(x, y),
            };
            values[s as usize] += 1;
        }
    }
    Ok(RepTable::from_values(ctx.p(), values))
}

/// `r_{AB}(x) = #{(a, b) : ab = x}`.
///
/// The nonzero part is a cyclic convolution over Z/(p-1) in discrete-log
/// coordinates; every pair with a zero coordinate lands on `x = 0`.
pub fn rep_multiplicative(a: &FpSet, b: &FpSet) -> Result<RepTable> {
    let ctx = a.ctx();
    ctx.same_as(b.ctx())?;
    let p = ctx.p();
    let order = p - 1;
    let la: Vec<u64> = a.iter().filter(|&x| x != 0).map(|x| ctx.dlog(x)).collect();
    let lb: Vec<u64> = b.iter().filter(|&x| x != 0).map(|x| ctx.dlog(x)).collect();

    let mut by_log = vec![0u64; order as usize];
    for &i in &la {
        for &j in &lb {
            by_log[((i + j) % order) as usize] += 1;
        }
    }

    let mut values = vec![0u64; p as usize];
    for (k, &c) in by_log.iter().enumerate() {
        values[ctx.exp(k as u64) as usize] = c;
    }
    let za = (a.len() - la.len()) as u64;
    let zb = (b.len() - lb.len()) as u64;
    values[0] = za * b.len() as u64 + zb * a.len() as u64 - za * zb;
    Ok(RepTable::from_values(p, values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> Arc<FieldContext> {
        FieldContext::new(p).unwrap()
    }

    #[test]
    fn inverse_tables() {
        assert_eq!(ctx(7).inv(3), 5);
        assert_eq!(ctx(5).inv(4), 4);
        let c = ctx(101);
        for x in 1..101 {
            assert_eq!(c.mul(x, c.inv(x)), 1);
        }
    }

    #[test]
    fn rejects_composites_and_even() {
        assert!(matches!(FieldContext::new(9), Err(Error::NotPrime(9))));
        assert!(FieldContext::new(2).is_err());
        assert!(FieldContext::new(1).is_err());
        assert!(FieldContext::new(0).is_err());
        let msg = FieldContext::new(9).unwrap_err().to_string();
        assert!(msg.contains("not prime"), "{msg}");
    }

    #[test]
    fn dlog_is_a_bijection() {
        for p in [3, 5, 7, 11, 101, 1009] {
            let c = ctx(p);
            let mut seen = vec![false; (p - 1) as usize];
            for x in 1..p {
                let k = c.dlog(x);
                assert!(!seen[k as usize]);
                seen[k as usize] = true;
                assert_eq!(pow_mod(c.primitive_root(), k, p), x);
            }
        }
        // smallest primitive roots
        assert_eq!(ctx(7).primitive_root(), 3);
        assert_eq!(ctx(11).primitive_root(), 2);
        assert_eq!(ctx(41).primitive_root(), 6);
    }

    #[test]
    fn set_operations() {
        let c7 = ctx(7);
        let a = FpSet::new(&c7, [1, 2]);
        let b = FpSet::new(&c7, [3]);
        assert_eq!(a.sumset(&b).unwrap().elems(), &[4, 5]);

        let c5 = ctx(5);
        let a = FpSet::new(&c5, [3, 4]);
        assert_eq!(a.sumset(&a).unwrap().elems(), &[1, 2, 3]);

        let h = FpSet::new(&c7, [1, 2, 4]);
        assert_eq!(h.product_set(&h).unwrap().elems(), &[1, 2, 4]);

        let z = FpSet::new(&c7, [0, 1]);
        assert_eq!(h.quotient_set(&z).unwrap().elems(), &[1, 2, 4]);
        assert_eq!(z.quotient_set(&z).unwrap().elems(), &[0, 1]);
        assert_eq!(h.difference_set(&h).unwrap().len(), 7);
    }

    #[test]
    fn mismatched_contexts() {
        let a = FpSet::new(&ctx(7), [1]);
        let b = FpSet::new(&ctx(11), [1]);
        assert!(matches!(
            a.sumset(&b),
            Err(Error::ContextMismatch { left: 7, right: 11 })
        ));
        assert!(rep_additive(&a, &b, Sign::Plus).is_err());
        assert!(rep_multiplicative(&a, &b).is_err());
    }

    #[test]
    fn membership_without_bitmap() {
        let c = ctx((1 << 20) + 7);
        let a = FpSet::new(&c, [5, 1 << 20, 3]);
        assert!(a.bitmap.is_none());
        assert!(a.contains(5) && a.contains(1 << 20) && !a.contains(4));
    }

    #[test]
    fn additive_reps() {
        let c = ctx(101);
        let a = FpSet::new(&c, [1, 2, 3]);
        let r = rep_additive(&a, &a, Sign::Plus).unwrap();
        assert_eq!((r.get(4), r.get(2), r.get(6)), (3, 1, 1));
        assert_eq!(r.total(), 9);

        let c7 = ctx(7);
        let z = FpSet::new(&c7, [0]);
        let r = rep_additive(&z, &z, Sign::Plus).unwrap();
        assert_eq!(r.values(), &[1, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn multiplicative_reps() {
        let c7 = ctx(7);
        let h = FpSet::new(&c7, [1, 2, 4]);
        let r = rep_multiplicative(&h, &h).unwrap();
        assert_eq!(r.values(), &[0, 3, 3, 0, 3, 0, 0]);

        let c5 = ctx(5);
        let z = FpSet::new(&c5, [0, 1]);
        let r = rep_multiplicative(&z, &z).unwrap();
        assert_eq!((r.get(0), r.get(1)), (3, 1));

        let c11 = ctx(11);
        let one = FpSet::new(&c11, [1]);
        let units = FpSet::new(&c11, 1..=10);
        let r = rep_multiplicative(&one, &units).unwrap();
        assert_eq!(r.get(0), 0);
        assert!((1..11).all(|x| r.get(x) == 1));
    }

    #[test]
    fn unit_step_progressions() {
        let c = ctx(11);
        assert!(FpSet::interval(&c, 3, 5).is_unit_step_progression());
        assert!(FpSet::interval(&c, 9, 5).is_unit_step_progression());
        assert!(!FpSet::new(&c, [1, 2, 4]).is_unit_step_progression());
        assert!(!FpSet::progression(&c, 0, 2, 4).is_unit_step_progression());
    }
}

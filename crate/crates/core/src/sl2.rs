//! 2×2 matrix families `G_λ(A, B) = {u_a v_b}`, their non-abelian energies,
//! Möbius actions on the projective line, and integer-mode (SL₂(Z)) checks.
//!
//! `T_k` counts solutions of the alternating equation
//! `a₁a₂⁻¹a₃⋯ = a_{k+1}a_{k+2}⁻¹⋯` with `k` factors per side; for odd `k`
//! the last factor on each side is not inverted.

use std::collections::HashMap;
use std::hash::Hash;
use std::ops::{AddAssign, Mul};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modfield::{FieldContext, FpSet};
use crate::report::{BoundReport, RhsTerm};
use crate::spectral::WeightFn;
use crate::Count;

/// Upper bound on `|table| · |next factor|` work in product tables.
pub const DEFAULT_PRODUCT_LIMIT: u128 = 1 << 28;

/// `[[a, b], [c, d]]` over F_p, entries reduced to `[0, p)`.
///
/// The derived ordering is lexicographic in `(a, b, c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMat {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl FpMat {
    pub fn new(ctx: &FieldContext, a: i64, b: i64, c: i64, d: i64) -> Self {
        FpMat {
            a: ctx.reduce(a),
            b: ctx.reduce(b),
            c: ctx.reduce(c),
            d: ctx.reduce(d),
        }
    }

    pub fn identity() -> Self {
        FpMat {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn det(&self, ctx: &FieldContext) -> u64 {
        ctx.sub(ctx.mul(self.a, self.d), ctx.mul(self.b, self.c))
    }

    pub fn mul(&self, o: &FpMat, ctx: &FieldContext) -> FpMat {
        let m = |x, y| ctx.mul(x, y);
        FpMat {
            a: ctx.add(m(self.a, o.a), m(self.b, o.c)),
            b: ctx.add(m(self.a, o.b), m(self.b, o.d)),
            c: ctx.add(m(self.c, o.a), m(self.d, o.c)),
            d: ctx.add(m(self.c, o.b), m(self.d, o.d)),
        }
    }

    /// `[[d, −b], [−c, a]]`.
    pub fn adjugate(&self, ctx: &FieldContext) -> FpMat {
        FpMat {
            a: self.d,
            b: ctx.neg(self.b),
            c: ctx.neg(self.c),
            d: self.a,
        }
    }

    /// Inverse; `None` for singular matrices.
    pub fn inverse(&self, ctx: &FieldContext) -> Option<FpMat> {
        let det = self.det(ctx);
        if det == 0 {
            return None;
        }
        let s = ctx.inv(det);
        let adj = self.adjugate(ctx);
        Some(FpMat {
            a: ctx.mul(adj.a, s),
            b: ctx.mul(adj.b, s),
            c: ctx.mul(adj.c, s),
            d: ctx.mul(adj.d, s),
        })
    }

    /// Representative of the class in PGL₂: first nonzero entry scaled to 1.
    pub fn pgl_normalize(&self, ctx: &FieldContext) -> FpMat {
        let lead = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|&x| x != 0)
            .unwrap_or(1);
        let s = ctx.inv(lead);
        FpMat {
            a: ctx.mul(self.a, s),
            b: ctx.mul(self.b, s),
            c: ctx.mul(self.c, s),
            d: ctx.mul(self.d, s),
        }
    }
}

/// `[[a, b], [c, d]]` over Z.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZMat {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl ZMat {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        ZMat {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &ZMat) -> ZMat {
        ZMat {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn adjugate(&self) -> ZMat {
        ZMat {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }
}

/// Group operations used by the product tables.
pub trait GroupOps {
    type Elem: Clone + Eq + Hash;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// Inverse, possibly up to a central factor shared by every element
    /// that enters an equation with balanced inverse counts.
    fn inv(&self, x: &Self::Elem) -> Self::Elem;
}

/// GL₂(F_p).
#[derive(Clone, Debug)]
pub struct Gl2 {
    pub ctx: Arc<FieldContext>,
}

impl GroupOps for Gl2 {
    type Elem = FpMat;
    fn identity(&self) -> FpMat {
        FpMat::identity()
    }
    fn mul(&self, x: &FpMat, y: &FpMat) -> FpMat {
        x.mul(y, &self.ctx)
    }
    fn inv(&self, x: &FpMat) -> FpMat {
        x.inverse(&self.ctx).expect("group elements are invertible")
    }
}

/// Integer matrices of a common determinant λ, with `g⁻¹` replaced by
/// `adj(g) = λ·g⁻¹`. Alternating equations have as many inverses on each
/// side, so the scalar cancels and solution counts are unchanged.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntAdjugate;

impl GroupOps for IntAdjugate {
    type Elem = ZMat;
    fn identity(&self) -> ZMat {
        ZMat::identity()
    }
    fn mul(&self, x: &ZMat, y: &ZMat) -> ZMat {
        x.mul(y)
    }
    fn inv(&self, x: &ZMat) -> ZMat {
        x.adjugate()
    }
}

/// A deduplicated finite set of matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct MatSet<E> {
    elems: Vec<E>,
    lambda: Option<i64>,
}

impl<E: Clone + Eq + Hash> MatSet<E> {
    pub fn from_vec(mut elems: Vec<E>) -> Self {
        let mut seen = std::collections::HashSet::new();
        elems.retain(|e| seen.insert(e.clone()));
        MatSet {
            elems,
            lambda: None,
        }
    }

    pub fn elems(&self) -> &[E] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Common determinant when built as `G_λ(A, B)`.
    pub fn lambda(&self) -> Option<i64> {
        self.lambda
    }
}

impl MatSet<FpMat> {
    /// `gG`.
    pub fn left_translate(&self, g: &FpMat, ctx: &FieldContext) -> Self {
        Self::from_vec(self.elems.iter().map(|x| g.mul(x, ctx)).collect())
    }

    /// `Gg`.
    pub fn right_translate(&self, g: &FpMat, ctx: &FieldContext) -> Self {
        Self::from_vec(self.elems.iter().map(|x| x.mul(g, ctx)).collect())
    }

    /// `G⁻¹`.
    pub fn inverses(&self, ctx: &FieldContext) -> Self {
        Self::from_vec(
            self.elems
                .iter()
                .map(|x| x.inverse(ctx).expect("invertible"))
                .collect(),
        )
    }
}

/// `u_a = [[1, a], [0, 1]]`.
pub fn unipotent_u(ctx: &FieldContext, a: i64) -> FpMat {
    FpMat::new(ctx, 1, a, 0, 1)
}

/// `u*_t = [[1, 0], [t, 1]]`.
pub fn lower_unipotent(ctx: &FieldContext, t: i64) -> FpMat {
    FpMat::new(ctx, 1, 0, t, 1)
}

/// `v_b = [[0, λ], [−1, b]]`.
pub fn v_matrix(ctx: &FieldContext, b: i64, lambda: i64) -> Result<FpMat> {
    if ctx.reduce(lambda) == 0 {
        return Err(Error::ZeroLambda);
    }
    Ok(FpMat::new(ctx, 0, lambda, -1, b))
}

/// `u_a v_b = [[−a, ab + λ], [−1, b]]`.
pub fn g_matrix(ctx: &FieldContext, a: u64, b: u64, lambda: u64) -> FpMat {
    FpMat {
        a: ctx.neg(a),
        b: ctx.add(ctx.mul(a, b), lambda),
        c: ctx.neg(1),
        d: b % ctx.p(),
    }
}

/// `G_λ(A, B) = {u_a v_b : a ∈ A, b ∈ B}`; all `|A||B|` matrices are distinct.
pub fn g_lambda_set(a: &FpSet, b: &FpSet, lambda: i64) -> Result<MatSet<FpMat>> {
    let ctx = a.ctx();
    ctx.same_as(b.ctx())?;
    let l = ctx.reduce(lambda);
    if l == 0 {
        return Err(Error::ZeroLambda);
    }
    let elems = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| g_matrix(ctx, x, y, l)))
        .collect();
    Ok(MatSet {
        elems,
        lambda: Some(l as i64),
    })
}

/// `G(A) = {u_a v_a : a ∈ A}`.
pub fn g_diag_set(a: &FpSet, lambda: i64) -> Result<MatSet<FpMat>> {
    let ctx = a.ctx();
    let l = ctx.reduce(lambda);
    if l == 0 {
        return Err(Error::ZeroLambda);
    }
    Ok(MatSet {
        elems: a.iter().map(|x| g_matrix(ctx, x, x, l)).collect(),
        lambda: Some(l as i64),
    })
}

/// Integer-mode `G_λ(B, C) = {[[−b, bc + λ], [−1, c]]}`.
pub fn g_lambda_set_int(b: &[i64], c: &[i64], lambda: i64) -> Result<MatSet<ZMat>> {
    if lambda == 0 {
        return Err(Error::ZeroLambda);
    }
    let elems = b
        .iter()
        .flat_map(|&x| c.iter().map(move |&y| ZMat::new(-x, x * y + lambda, -1, y)))
        .collect();
    let mut set = MatSet::from_vec(elems);
    set.lambda = Some(lambda);
    Ok(set)
}

/// All of SL₂(F_p), for small `p`.
pub fn enumerate_sl2(ctx: &FieldContext) -> Vec<FpMat> {
    let p = ctx.p();
    let mut out = Vec::with_capacity((p * (p * p - 1)) as usize);
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let m = FpMat { a, b, c, d };
                    if m.det(ctx) == 1 {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Product tables and energies

/// Weighted multiset of products `x₁ x₂⁻¹ x₃ x₄⁻¹ ⋯` with one factor drawn
/// from each list; factor `j` (0-based) is inverted when `j` is odd.
pub fn alternating_table<G, W>(
    group: &G,
    factors: &[&[(G::Elem, W)]],
    limit: u128,
) -> Result<HashMap<G::Elem, W>>
where
    G: GroupOps,
    W: Copy + Zero + One + Mul<Output = W> + AddAssign,
{
    let mut table: HashMap<G::Elem, W> = HashMap::new();
    table.insert(group.identity(), W::one());
    for (j, factor) in factors.iter().enumerate() {
        let work = table.len() as u128 * factor.len() as u128;
        if work > limit {
            return Err(Error::TooLarge {
                needed: work,
                limit,
            });
        }
        let step: Vec<(G::Elem, W)> = if j % 2 == 1 {
            factor.iter().map(|(e, w)| (group.inv(e), *w)).collect()
        } else {
            factor.to_vec()
        };
        let mut next: HashMap<G::Elem, W> = HashMap::with_capacity(table.len() * step.len());
        for (x, wx) in &table {
            for (y, wy) in &step {
                *next.entry(group.mul(x, y)).or_insert_with(W::zero) += *wx * *wy;
            }
        }
        table = next;
    }
    Ok(table)
}

fn unit_weights<E: Clone>(set: &[E]) -> Vec<(E, u128)> {
    set.iter().map(|e| (e.clone(), 1u128)).collect()
}

/// `T_k(A₁, …, A_{2k})` for `k >= 1`: left side uses `A₁…A_k`, right side
/// `A_{k+1}…A_{2k}`.
pub fn t_k_sets<G: GroupOps>(group: &G, sets: &[&[G::Elem]], limit: u128) -> Result<Count> {
    if sets.is_empty() || sets.len() % 2 != 0 {
        return Err(Error::InvalidParameter("T_k needs 2k sets".into()));
    }
    let k = sets.len() / 2;
    let weighted: Vec<Vec<(G::Elem, u128)>> = sets.iter().map(|s| unit_weights(s)).collect();
    let refs: Vec<&[(G::Elem, u128)]> = weighted.iter().map(|v| v.as_slice()).collect();
    let left = alternating_table(group, &refs[..k], limit)?;
    let right = if refs[..k] == refs[k..] {
        None
    } else {
        Some(alternating_table(group, &refs[k..], limit)?)
    };
    let total = match &right {
        None => left.values().map(|&v| BigUint::from(v) * v).sum(),
        Some(r) => left
            .iter()
            .filter_map(|(x, &v)| r.get(x).map(|&w| BigUint::from(v) * w))
            .sum(),
    };
    Ok(total)
}

/// `T_k(G)`; `T_1(G) = |G|²` by convention.
pub fn t_k_group<G: GroupOps>(group: &G, set: &MatSet<G::Elem>, k: u32) -> Result<Count> {
    t_k_group_with_limit(group, set, k, DEFAULT_PRODUCT_LIMIT)
}

pub fn t_k_group_with_limit<G: GroupOps>(
    group: &G,
    set: &MatSet<G::Elem>,
    k: u32,
    limit: u128,
) -> Result<Count> {
    match k {
        0 => Err(Error::InvalidParameter("T_k needs k >= 1".into())),
        1 => Ok(BigUint::from(set.len()).pow(2)),
        _ => {
            let sets: Vec<&[G::Elem]> = vec![set.elems(); 2 * k as usize];
            t_k_sets(group, &sets, limit)
        }
    }
}

/// `T_k(f₁, …, f_{2k}) = Σ_x L(x) · conj(R(x))` where `L` and `R` are the
/// weighted product tables of the two sides.
pub fn t_k_functions<G: GroupOps>(
    group: &G,
    fns: &[&[(G::Elem, Complex64)]],
    limit: u128,
) -> Result<Complex64> {
    if fns.is_empty() || fns.len() % 2 != 0 {
        return Err(Error::InvalidParameter("T_k needs 2k functions".into()));
    }
    let k = fns.len() / 2;
    let left = alternating_table(group, &fns[..k], limit)?;
    let right = alternating_table(group, &fns[k..], limit)?;
    Ok(left
        .iter()
        .filter_map(|(x, v)| right.get(x).map(|w| v * w.conj()))
        .sum())
}

/// `r_{(GG⁻¹)^m}` as a table, `m >= 1`.
pub fn r_power_table<G: GroupOps>(
    group: &G,
    set: &MatSet<G::Elem>,
    m: u32,
) -> Result<HashMap<G::Elem, u128>> {
    let w = unit_weights(set.elems());
    let factors: Vec<&[(G::Elem, u128)]> = vec![w.as_slice(); 2 * m as usize];
    alternating_table(group, &factors, DEFAULT_PRODUCT_LIMIT)
}

/// `E^R_k(G) = Σ_x r^k_{GG⁻¹}(x)`.
pub fn e_rk_group<G: GroupOps>(group: &G, set: &MatSet<G::Elem>, k: u32) -> Result<Count> {
    if k == 0 {
        return Err(Error::InvalidParameter("E^R_k needs k >= 1".into()));
    }
    let r = r_power_table(group, set, 1)?;
    Ok(r.values().map(|&v| BigUint::from(v).pow(k)).sum())
}

/// `E^L_k(G) = Σ_x r^k_{G⁻¹G}(x)`.
pub fn e_lk_group<G: GroupOps>(group: &G, set: &MatSet<G::Elem>, k: u32) -> Result<Count> {
    if k == 0 {
        return Err(Error::InvalidParameter("E^L_k needs k >= 1".into()));
    }
    let inv: Vec<(G::Elem, u128)> = set.elems().iter().map(|e| (group.inv(e), 1u128)).collect();
    // G⁻¹G = (G⁻¹)(G⁻¹)⁻¹
    let r = alternating_table(group, &[&inv, &inv], DEFAULT_PRODUCT_LIMIT)?;
    Ok(r.values().map(|&v| BigUint::from(v).pow(k)).sum())
}

// ---------------------------------------------------------------------------
// Projective line and actions

/// A point of P¹(F_p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(u64),
    Infinity,
}

impl ProjPoint {
    /// Index in `0..=p`, with ∞ at `p`.
    pub fn index(&self, p: u64) -> usize {
        match *self {
            ProjPoint::Finite(x) => (x % p) as usize,
            ProjPoint::Infinity => p as usize,
        }
    }

    pub fn from_index(i: usize, p: u64) -> Self {
        if i as u64 == p {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(i as u64)
        }
    }

    /// All `p + 1` points.
    pub fn all(p: u64) -> impl Iterator<Item = ProjPoint> {
        (0..=p as usize).map(move |i| ProjPoint::from_index(i, p))
    }
}

/// `gx = (αx + β)/(γx + δ)` with `g∞ = α/γ` and `g(−δ/γ) = ∞`.
pub fn mobius_apply(ctx: &FieldContext, g: &FpMat, x: ProjPoint) -> ProjPoint {
    let (num, den) = match x {
        ProjPoint::Finite(x) => (ctx.add(ctx.mul(g.a, x), g.b), ctx.add(ctx.mul(g.c, x), g.d)),
        ProjPoint::Infinity => (g.a, g.c),
    };
    match ctx.div(num, den) {
        Some(y) => ProjPoint::Finite(y),
        None => ProjPoint::Infinity,
    }
}

/// A function on P¹(F_p), stored with ∞ at index `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjFn<W> {
    p: u64,
    values: Vec<W>,
}

impl<W: Copy + Zero> ProjFn<W> {
    pub fn new(p: u64, values: Vec<W>) -> Self {
        assert_eq!(values.len() as u64, p + 1, "P^1(F_p) has p + 1 points");
        ProjFn { p, values }
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, vec![W::zero(); p as usize + 1])
    }

    pub fn get(&self, x: ProjPoint) -> W {
        self.values[x.index(self.p)]
    }

    pub fn values(&self) -> &[W] {
        &self.values
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl ProjFn<Complex64> {
    /// Extends a function on F_p by 0 at ∞.
    pub fn from_weight(f: &WeightFn) -> Self {
        let mut v = f.values().to_vec();
        v.push(Complex64::zero());
        Self::new(f.p(), v)
    }

    pub fn indicator(set: &FpSet) -> Self {
        Self::from_weight(&WeightFn::indicator(set))
    }
}

impl ProjFn<i64> {
    pub fn indicator_points(p: u64, points: &[ProjPoint]) -> Self {
        let mut v = vec![0i64; p as usize + 1];
        for x in points {
            v[x.index(p)] = 1;
        }
        Self::new(p, v)
    }

    pub fn indicator_set(set: &FpSet) -> Self {
        let mut v = vec![0i64; set.p() as usize + 1];
        for x in set.iter() {
            v[x as usize] = 1;
        }
        Self::new(set.p(), v)
    }

    pub fn sum_sq(&self) -> BigInt {
        self.values.iter().map(|&v| BigInt::from(v) * v).sum()
    }
}

/// Precomputed Möbius action `x ↦ gx` as an index permutation of P¹.
fn action_perm(ctx: &FieldContext, g: &FpMat) -> Vec<usize> {
    let p = ctx.p();
    ProjPoint::all(p)
        .map(|x| mobius_apply(ctx, g, x).index(p))
        .collect()
}

/// `Σ_{g ∈ G} Σ_{x ∈ P¹} f₁(x) f₂(gx)`.
pub fn action_sum(
    ctx: &FieldContext,
    set: &MatSet<FpMat>,
    f1: &ProjFn<Complex64>,
    f2: &ProjFn<Complex64>,
) -> Complex64 {
    let nz: Vec<usize> = (0..f1.values.len())
        .filter(|&i| !f1.values[i].is_zero())
        .collect();
    let p = ctx.p();
    let mut total = Complex64::zero();
    for g in set.elems() {
        for &i in &nz {
            let gx = mobius_apply(ctx, g, ProjPoint::from_index(i, p));
            total += f1.values[i] * f2.get(gx);
        }
    }
    total
}

/// Exact integer version of [`action_sum`].
pub fn action_sum_int(
    ctx: &FieldContext,
    set: &MatSet<FpMat>,
    f1: &ProjFn<i64>,
    f2: &ProjFn<i64>,
) -> BigInt {
    let p = ctx.p();
    let mut total: i128 = 0;
    for g in set.elems() {
        for (i, &v) in f1.values.iter().enumerate() {
            if v != 0 {
                let gx = mobius_apply(ctx, g, ProjPoint::from_index(i, p));
                total += v as i128 * f2.get(gx) as i128;
            }
        }
    }
    BigInt::from(total)
}

/// Both sides of the counting lemma for `k >= 1`:
/// `|σ|^{2^k} ≤ ‖f₁‖₂^{2^k} ‖f₂‖₂^{2^k−2} Σ_g r_{(GG⁻¹)^{2^{k−1}}}(g) Σ_x f₂(x) f₂(gx)`,
/// evaluated exactly for integer-valued `f₁, f₂`.
pub fn counting_lemma_check(
    ctx: &Arc<FieldContext>,
    set: &MatSet<FpMat>,
    f1: &ProjFn<i64>,
    f2: &ProjFn<i64>,
    k: u32,
) -> Result<BoundReport> {
    if k == 0 || k > 4 {
        return Err(Error::InvalidParameter(
            "counting lemma supports 1 <= k <= 4".into(),
        ));
    }
    let sigma = action_sum_int(ctx, set, f1, f2);
    let half = 1u32 << (k - 1);
    let lhs = sigma.abs().pow(2 * half);

    let group = Gl2 {
        ctx: Arc::clone(ctx),
    };
    let r = r_power_table(&group, set, half)?;
    let mut corr = BigInt::zero();
    for (g, &mult) in &r {
        let perm = action_perm(ctx, g);
        let inner: i128 = f2
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| v as i128 * f2.values[perm[i]] as i128)
            .sum();
        corr += BigInt::from(mult) * inner;
    }
    let n1 = f1.sum_sq();
    let n2 = f2.sum_sq();
    let rhs = n1.pow(half) * n2.pow(half - 1) * &corr;
    Ok(BoundReport::exact(
        format!("counting-lemma-k{k}"),
        lhs,
        rhs,
        vec![RhsTerm::new(
            "sum_g r(g) sum_x f2(x) f2(gx)",
            corr.to_f64().unwrap_or(f64::NAN),
        )],
    )
    .with_note(format!("sigma = {sigma}")))
}

/// Sharply transitive actions for which the k-transitivity lemma is checked.
#[derive(Clone, Debug)]
pub enum TransitiveAction {
    /// `x ↦ ax + b` on F_p with `a ≠ 0` (sharply 2-transitive).
    Affine(Vec<(u64, u64)>),
    /// Möbius maps on P¹ modulo scalars (sharply 3-transitive).
    Projective(Vec<FpMat>),
}

impl TransitiveAction {
    pub fn degree(&self) -> u32 {
        match self {
            TransitiveAction::Affine(_) => 2,
            TransitiveAction::Projective(_) => 3,
        }
    }
}

/// Projects invertible matrices to PGL₂ and removes duplicates.
pub fn project_to_pgl(ctx: &FieldContext, set: &MatSet<FpMat>) -> Vec<FpMat> {
    let mut out: Vec<FpMat> = set.elems().iter().map(|g| g.pgl_normalize(ctx)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `Σ_{g ∈ G} Σ_{x ∈ B} A(gx) ≤ |G|^{1−1/k} |A||B| + |G|`.
pub fn transitivity_bound_check(
    ctx: &FieldContext,
    action: &TransitiveAction,
    a: &[ProjPoint],
    b: &[ProjPoint],
    k: u32,
) -> Result<BoundReport> {
    if k != action.degree() {
        return Err(Error::InvalidParameter(format!(
            "unsupported action: {} maps are sharply {}-transitive, not {k}",
            match action {
                TransitiveAction::Affine(_) => "affine",
                TransitiveAction::Projective(_) => "projective",
            },
            action.degree()
        )));
    }
    let p = ctx.p();
    let a_ind = ProjFn::indicator_points(p, a);
    let mut a_pts = a.to_vec();
    a_pts.sort_unstable();
    a_pts.dedup();
    let mut b_pts = b.to_vec();
    b_pts.sort_unstable();
    b_pts.dedup();

    let (lhs, g_len) = match action {
        TransitiveAction::Affine(maps) => {
            let mut maps = maps.clone();
            maps.sort_unstable();
            maps.dedup();
            if maps.iter().any(|&(m, _)| m % p == 0) {
                return Err(Error::InvalidParameter("affine maps need a ≠ 0".into()));
            }
            if a_pts
                .iter()
                .chain(&b_pts)
                .any(|x| *x == ProjPoint::Infinity)
            {
                return Err(Error::InvalidParameter(
                    "the affine action lives on F_p".into(),
                ));
            }
            let mut n = 0i64;
            for &(m, t) in &maps {
                for x in &b_pts {
                    if let ProjPoint::Finite(x) = *x {
                        let y = ctx.add(ctx.mul(m, x), t);
                        n += a_ind.get(ProjPoint::Finite(y));
                    }
                }
            }
            (n, maps.len())
        }
        TransitiveAction::Projective(maps) => {
            let mut maps: Vec<FpMat> = maps.iter().map(|g| g.pgl_normalize(ctx)).collect();
            maps.sort_unstable();
            maps.dedup();
            if maps.iter().any(|g| g.det(ctx) == 0) {
                return Err(Error::InvalidParameter("singular matrix in action".into()));
            }
            let mut n = 0i64;
            for g in &maps {
                for &x in &b_pts {
                    n += a_ind.get(mobius_apply(ctx, g, x));
                }
            }
            (n, maps.len())
        }
    };
    let g = g_len as f64;
    let main = g.powf(1.0 - 1.0 / k as f64) * a_pts.len() as f64 * b_pts.len() as f64;
    let rhs = main + g;
    Ok(BoundReport::new(
        format!("k-transitive-k{k}"),
        lhs as f64,
        0.0,
        vec![
            RhsTerm::new("|G|^(1-1/k)|A||B|", main),
            RhsTerm::new("|G|", g),
        ],
        rhs,
        1.0,
    )
    .with_lhs_exact(BigInt::from(lhs)))
}

/// Largest group the trace-formula check will enumerate.
pub const MAX_TRACE_GROUP: usize = 100_000;

/// `T_k(G) = |Gr|⁻¹ tr(T^k)` with `T(g, h) = r_{GG⁻¹}(gh⁻¹)` on `Gr = SL₂(F_p)`.
pub fn trace_formula_check(
    ctx: &Arc<FieldContext>,
    set: &MatSet<FpMat>,
    k: u32,
) -> Result<BoundReport> {
    let p = ctx.p();
    let order = (p * (p * p - 1)) as usize;
    if order > MAX_TRACE_GROUP {
        return Err(Error::TooLarge {
            needed: order as u128,
            limit: MAX_TRACE_GROUP as u128,
        });
    }
    if k < 2 {
        return Err(Error::InvalidParameter("trace formula needs k >= 2".into()));
    }
    if set.elems().iter().any(|g| g.det(ctx) != 1) {
        return Err(Error::InvalidParameter("set must lie in SL_2(F_p)".into()));
    }
    let group = Gl2 {
        ctx: Arc::clone(ctx),
    };
    let elems = enumerate_sl2(ctx);
    let n = elems.len();
    let r = r_power_table(&group, set, 1)?;

    let mut op = vec![vec![0u128; n]; n];
    for (i, g) in elems.iter().enumerate() {
        for (j, h) in elems.iter().enumerate() {
            let x = g.mul(&h.inverse(ctx).expect("invertible"), ctx);
            op[i][j] = r.get(&x).copied().unwrap_or(0);
        }
    }
    let overflow = || Error::TooLarge {
        needed: u128::MAX,
        limit: u128::MAX,
    };
    let mut power = op.clone();
    for _ in 1..k {
        let mut next = vec![vec![0u128; n]; n];
        for i in 0..n {
            for (l, &v) in power[i].iter().enumerate() {
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = v.checked_mul(op[l][j]).ok_or_else(overflow)?;
                    next[i][j] = next[i][j].checked_add(t).ok_or_else(overflow)?;
                }
            }
        }
        power = next;
    }
    let trace: u128 = (0..n).map(|i| power[i][i]).sum();
    let tk = t_k_group(&group, set, k)?;
    let lhs = BigInt::from(tk) * n;
    let rhs = BigInt::from(trace);
    let mut report = BoundReport::exact(
        format!("trace-formula-k{k}"),
        lhs.clone(),
        rhs.clone(),
        vec![],
    );
    report.passed = lhs == rhs;
    Ok(report.with_note(format!("|Gr| = {n}")))
}

// ---------------------------------------------------------------------------
// Integer mode

/// One syllable of a word in `u_s` and `u*_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Syllable {
    /// `u_s^n = u_{sn}`.
    Upper(i64),
    /// `(u*_t)^m = u*_{tm}`.
    Lower(i64),
}

pub fn syllable_matrix(s: i64, t: i64, syl: Syllable) -> ZMat {
    match syl {
        Syllable::Upper(n) => ZMat::new(1, s * n, 0, 1),
        Syllable::Lower(m) => ZMat::new(1, 0, t * m, 1),
    }
}

pub fn word_product(s: i64, t: i64, word: &[Syllable]) -> ZMat {
    word.iter().fold(ZMat::identity(), |acc, &syl| {
        acc.mul(&syllable_matrix(s, t, syl))
    })
}

pub const DEFAULT_EXPONENT_CAP: i64 = 3;
pub const DEFAULT_WORD_LENGTH: usize = 6;

/// Enumerates every nonempty reduced word of at most `max_len` syllables,
/// alternating between `u_s^n` and `(u*_t)^m` with `0 < |n|, |m| ≤ exp_cap`,
/// and counts those equal to the identity.
pub fn free_group_check(s: i64, t: i64, max_len: usize, exp_cap: i64) -> Result<BoundReport> {
    let ping_pong = (s.abs() >= 2 && t.abs() >= 2) || (s * t).abs() >= 4;
    if !ping_pong {
        return Err(Error::InvalidParameter(format!(
            "u_{s}, u*_{t} need |s|,|t| >= 2 or |st| >= 4"
        )));
    }
    if exp_cap < 1 {
        return Err(Error::InvalidParameter("exponent cap must be >= 1".into()));
    }
    let exps: Vec<i64> = (-exp_cap..=exp_cap).filter(|&e| e != 0).collect();
    let mut words = 0u64;
    let mut relations = 0u64;
    let mut first_relation: Option<Vec<Syllable>> = None;

    // depth-first over (product, last kind, word)
    let mut stack: Vec<(ZMat, Option<bool>, Vec<Syllable>)> =
        vec![(ZMat::identity(), None, vec![])];
    while let Some((m, last_upper, word)) = stack.pop() {
        if word.len() == max_len {
            continue;
        }
        for upper in [true, false] {
            if last_upper == Some(upper) {
                continue;
            }
            for &e in &exps {
                let syl = if upper {
                    Syllable::Upper(e)
                } else {
                    Syllable::Lower(e)
                };
                let next = m.mul(&syllable_matrix(s, t, syl));
                let mut w = word.clone();
                w.push(syl);
                words += 1;
                if next.is_identity() {
                    relations += 1;
                    first_relation.get_or_insert_with(|| w.clone());
                }
                stack.push((next, Some(upper), w));
            }
        }
    }
    let mut report = BoundReport::exact(
        "free-subgroup",
        BigInt::from(relations),
        BigInt::zero(),
        vec![RhsTerm::new("words", words as f64)],
    )
    .with_note(format!(
        "{words} words, s={s}, t={t}, len<={max_len}, |exp|<={exp_cap}"
    ));
    if let Some(w) = first_relation {
        report = report.with_note(format!("relation: {w:?}"));
    }
    Ok(report)
}

/// `(8·max(|λ|,1))^{4k} |C|^{3k} |B|^{3k−1}`.
pub fn t2k_integer_bound(b_len: usize, c_len: usize, lambda: i64, k: u32) -> BigInt {
    let lp = BigInt::from(lambda.abs().max(1) * 8);
    lp.pow(4 * k) * BigInt::from(c_len).pow(3 * k) * BigInt::from(b_len).pow(3 * k - 1)
}

/// Whether `s ≤ ¼ log_N p`.
pub fn t2k_fp_condition(s: u32, n: u64, p: u64) -> bool {
    n >= 2 && 4.0 * s as f64 <= (p as f64).ln() / (n as f64).ln()
}

pub const MAX_INT_MODE_SET: usize = 12;

type IMat = [i64; 4];

fn imul(x: &IMat, y: &IMat) -> Option<IMat> {
    let dot = |a: i64, b: i64, c: i64, d: i64| a.checked_mul(b)?.checked_add(c.checked_mul(d)?);
    Some([
        dot(x[0], y[0], x[1], y[2])?,
        dot(x[0], y[1], x[1], y[3])?,
        dot(x[2], y[0], x[3], y[2])?,
        dot(x[2], y[1], x[3], y[3])?,
    ])
}

/// Product count above which the `k = 2` table is built in slices.
const SLICE_TARGET: usize = 1 << 21;

/// `T_{2k}(G_λ(B, C))` for `k ∈ {1, 2}` with machine-word matrices.
///
/// `T_2 = Σ r²` and `T_4 = Σ_y (Σ_{xz=y} r(x) r(z))²` with `r = r_{GG⁻¹}`
/// (adjugates in place of inverses). For `k = 2` the products `y` are
/// grouped by the residue of their top-left entry so that only one slice of
/// the table is held in memory at a time.
fn t_2k_fixed_width(b: &[i64], c: &[i64], lambda: i64, k: u32) -> Result<Count> {
    let overflow = || Error::InvalidParameter("matrix entries overflow i64".into());
    let mut g: Vec<IMat> = Vec::with_capacity(b.len() * c.len());
    for &x in b {
        for &y in c {
            let top = x
                .checked_mul(y)
                .and_then(|v| v.checked_add(lambda))
                .ok_or_else(overflow)?;
            g.push([-x, top, -1, y]);
        }
    }
    let mut r: HashMap<IMat, u64> = HashMap::new();
    for x in &g {
        for y in &g {
            let adj = [y[3], -y[1], -y[2], y[0]];
            *r.entry(imul(x, &adj).ok_or_else(overflow)?).or_default() += 1;
        }
    }
    if k == 1 {
        return Ok(r.values().map(|&v| BigUint::from(v) * v).sum());
    }
    let d: Vec<(IMat, u64)> = r.into_iter().collect();
    let slices = (d.len() * d.len() / SLICE_TARGET).max(1) as i64;
    let mut total = BigUint::zero();
    for slice in 0..slices {
        let mut table: HashMap<IMat, u64> = HashMap::new();
        for (x, rx) in &d {
            for (z, rz) in &d {
                let top = x[0]
                    .checked_mul(z[0])
                    .and_then(|v| v.checked_add(x[1].checked_mul(z[2])?))
                    .ok_or_else(overflow)?;
                if top.rem_euclid(slices) != slice {
                    continue;
                }
                *table.entry(imul(x, z).ok_or_else(overflow)?).or_default() += rx * rz;
            }
        }
        total += table
            .values()
            .map(|&v| BigUint::from(v) * v)
            .sum::<BigUint>();
    }
    Ok(total)
}

/// Exact `T_{2k}(G_λ(B, C))` over the integers, compared with
/// [`t2k_integer_bound`].
pub fn t_2k_integer_mode(
    b: &[i64],
    c: &[i64],
    lambda: i64,
    k: u32,
) -> Result<(Count, BoundReport)> {
    if lambda == 0 {
        return Err(Error::ZeroLambda);
    }
    if k == 0 || k > 2 {
        return Err(Error::InvalidParameter(
            "integer mode supports k in {1, 2}".into(),
        ));
    }
    let mut b = b.to_vec();
    b.sort_unstable();
    b.dedup();
    let mut c = c.to_vec();
    c.sort_unstable();
    c.dedup();
    if b.is_empty() || c.is_empty() || b.len() > MAX_INT_MODE_SET || c.len() > MAX_INT_MODE_SET {
        return Err(Error::InvalidParameter(format!(
            "integer mode needs 1 <= |B|, |C| <= {MAX_INT_MODE_SET}"
        )));
    }
    let t = t_2k_fixed_width(&b, &c, lambda, k)?;
    let bound = t2k_integer_bound(b.len(), c.len(), lambda, k);
    let report = BoundReport::exact(
        format!("t2k-int-k{k}"),
        BigInt::from(t.clone()),
        bound,
        vec![],
    );
    let ratio = report.lhs / report.rhs;
    Ok((t, report.with_exponent(ratio)))
}

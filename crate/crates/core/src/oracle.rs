//! Brute-force references that enumerate solution tuples directly.
//!
//! None of these share code with the fast paths they check. Sizes are capped
//! because the cost grows like `|A|^{2k}`.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::modfield::FpSet;
use crate::Count;

pub const MAX_SET: usize = 20;
pub const MAX_ORDER: u32 = 3;

fn guard(sets: &[&FpSet]) -> Result<()> {
    for s in sets {
        if s.len() > MAX_SET {
            return Err(Error::InvalidParameter(format!(
                "oracle limited to sets of size <= {MAX_SET}, got {}",
                s.len()
            )));
        }
    }
    Ok(())
}

/// `#{(a₁,a₂,b₁,b₂) : a₁ + b₁ = a₂ + b₂}` by enumerating all quadruples.
pub fn additive_energy(a: &FpSet, b: &FpSet) -> Result<Count> {
    guard(&[a, b])?;
    let p = a.p();
    let mut n = 0u64;
    for a1 in a.iter() {
        for a2 in a.iter() {
            for b1 in b.iter() {
                for b2 in b.iter() {
                    n += ((a1 + b1) % p == (a2 + b2) % p) as u64;
                }
            }
        }
    }
    Ok(BigUint::from(n))
}

/// `#{(a₁,a₂,b₁,b₂) : a₁b₁ = a₂b₂}` by enumerating all quadruples.
pub fn multiplicative_energy(a: &FpSet, b: &FpSet) -> Result<Count> {
    guard(&[a, b])?;
    let p = a.p() as u128;
    let mut n = 0u64;
    for a1 in a.iter() {
        for a2 in a.iter() {
            for b1 in b.iter() {
                for b2 in b.iter() {
                    let l = a1 as u128 * b1 as u128 % p;
                    let r = a2 as u128 * b2 as u128 % p;
                    n += (l == r) as u64;
                }
            }
        }
    }
    Ok(BigUint::from(n))
}

fn tuples(set: &FpSet, k: u32) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                set.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// `#{a₁+…+a_k = a′₁+…+a′_k}` over all `2k`-tuples.
pub fn t_plus_k(a: &FpSet, k: u32) -> Result<Count> {
    guard(&[a])?;
    if k == 0 || k > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "oracle order must be 1..={MAX_ORDER}"
        )));
    }
    let p = a.p();
    let ts = tuples(a, k);
    let sums: Vec<u64> = ts.iter().map(|t| t.iter().sum::<u64>() % p).collect();
    let mut n = 0u64;
    for x in &sums {
        for y in &sums {
            n += (x == y) as u64;
        }
    }
    Ok(BigUint::from(n))
}

/// `#{a₁−a′₁ = … = a_k−a′_k}` over all `2k`-tuples.
pub fn e_plus_k(a: &FpSet, k: u32) -> Result<Count> {
    guard(&[a])?;
    if k == 0 || k > MAX_ORDER {
        return Err(Error::InvalidParameter(format!(
            "oracle order must be 1..={MAX_ORDER}"
        )));
    }
    let p = a.p();
    let pairs: Vec<u64> = a
        .iter()
        .flat_map(|x| a.iter().map(move |y| (x + p - y) % p))
        .collect();
    let mut n = 0u64;
    // choose the common difference through the first pair, then all others
    let rec = |d: u64| -> u64 { pairs.iter().filter(|&&e| e == d).count() as u64 };
    for &d in &pairs {
        n += rec(d).pow(k - 1);
    }
    Ok(BigUint::from(n))
}

/// `Σ_x r²_{(A−A)(B−B)}(x)` via a histogram of all `(a−a′)(b−b′)`.
pub fn d2_quantity(a: &FpSet, b: &FpSet) -> Result<Count> {
    guard(&[a, b])?;
    let p = a.p() as u128;
    let mut hist: HashMap<u128, u64> = HashMap::new();
    for a1 in a.iter() {
        for a2 in a.iter() {
            let u = (a1 as u128 + p - a2 as u128) % p;
            for b1 in b.iter() {
                for b2 in b.iter() {
                    let v = (b1 as u128 + p - b2 as u128) % p;
                    *hist.entry(u * v % p).or_default() += 1;
                }
            }
        }
    }
    Ok(hist.values().map(|&c| BigUint::from(c) * c).sum())
}

/// `#{(a,b,c,d) : (a+b)(c+d) = λ}` by the quadruple loop.
pub fn count_hyperbola(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet, lambda: u64) -> u64 {
    let p = a.p() as u128;
    let lambda = lambda as u128 % p;
    let mut n = 0;
    for x in a.iter() {
        for y in b.iter() {
            let s = (x + y) as u128 % p;
            for z in c.iter() {
                for w in d.iter() {
                    n += (s * ((z + w) as u128 % p) % p == lambda) as u64;
                }
            }
        }
    }
    n
}

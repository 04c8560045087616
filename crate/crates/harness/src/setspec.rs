//! Textual set descriptions.
//!
//! ```text
//! interval:a..b          {a, a+1, …, b}
//! ap:start,step,len      {start + i·step : 0 ≤ i < len}
//! geom:g,len             {g^i : 0 ≤ i < len}
//! random:n@seed          n distinct residues, reproducible from (seed, p)
//! subgroup:d             the order-d subgroup of F_p^*
//! explicit:{e1,e2,…}
//! ```

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use hypenergy_core::modfield::pow_mod;
use hypenergy_core::{FieldContext, FpSet};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetSpec {
    Interval { start: i64, end: i64 },
    Ap { start: i64, step: i64, len: u64 },
    Geom { g: i64, len: u64 },
    Random { n: u64, seed: u64 },
    Subgroup { d: u64 },
    Explicit(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("set spec error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("{spec}: {msg} (p = {p})")]
    OutOfRange { spec: String, p: u64, msg: String },
    #[error("{0}: only defined over F_p")]
    FieldOnly(String),
    #[error("{0}: integer overflow")]
    Overflow(String),
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.err(format!("expected `{lit}`")))
        }
    }

    fn int<T: FromStr>(&mut self) -> Result<T, ParseError> {
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && c == '-'))
            .count();
        if len == 0 {
            return Err(self.err("expected an integer"));
        }
        let v = rest[..len]
            .parse()
            .map_err(|_| self.err(format!("integer out of range: {}", &rest[..len])))?;
        self.pos += len;
        Ok(v)
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.pos == self.text.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

pub fn parse_set_spec(text: &str) -> Result<SetSpec, ParseError> {
    let Some(colon) = text.find(':') else {
        return Err(ParseError {
            pos: 0,
            msg: "expected `<kind>:<parameters>`".into(),
        });
    };
    let mut c = Cursor {
        text,
        pos: colon + 1,
    };
    let spec = match &text[..colon] {
        "interval" => {
            let start = c.int()?;
            c.expect("..")?;
            let at = c.pos;
            let end = c.int()?;
            if end < start {
                return Err(ParseError {
                    pos: at,
                    msg: "interval end precedes start".into(),
                });
            }
            SetSpec::Interval { start, end }
        }
        "ap" => {
            let start = c.int()?;
            c.expect(",")?;
            let step = c.int()?;
            c.expect(",")?;
            let len = c.int()?;
            SetSpec::Ap { start, step, len }
        }
        "geom" => {
            let g = c.int()?;
            c.expect(",")?;
            let len = c.int()?;
            SetSpec::Geom { g, len }
        }
        "random" => {
            let n = c.int()?;
            c.expect("@")?;
            let seed = c.int()?;
            SetSpec::Random { n, seed }
        }
        "subgroup" => {
            let at = c.pos;
            let d: u64 = c.int()?;
            if d == 0 {
                return Err(ParseError {
                    pos: at,
                    msg: "subgroup order must be positive".into(),
                });
            }
            SetSpec::Subgroup { d }
        }
        "explicit" => {
            c.expect("{")?;
            let mut items = Vec::new();
            if !c.rest().starts_with('}') {
                loop {
                    items.push(c.int()?);
                    if c.rest().starts_with(',') {
                        c.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            c.expect("}")?;
            SetSpec::Explicit(items)
        }
        other => {
            return Err(ParseError {
                pos: 0,
                msg: format!("unknown set kind `{other}`"),
            })
        }
    };
    c.end()?;
    Ok(spec)
}

impl FromStr for SetSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_set_spec(s)
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Interval { start, end } => write!(f, "interval:{start}..{end}"),
            SetSpec::Ap { start, step, len } => write!(f, "ap:{start},{step},{len}"),
            SetSpec::Geom { g, len } => write!(f, "geom:{g},{len}"),
            SetSpec::Random { n, seed } => write!(f, "random:{n}@{seed}"),
            SetSpec::Subgroup { d } => write!(f, "subgroup:{d}"),
            SetSpec::Explicit(items) => {
                let body: Vec<String> = items.iter().map(|x| x.to_string()).collect();
                write!(f, "explicit:{{{}}}", body.join(","))
            }
        }
    }
}

/// RNG for `random:n@seed` at the prime `p`.
pub fn seeded_rng(seed: u64, p: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ p)
}

impl SetSpec {
    /// `{1, …, n}`.
    pub fn first(n: u64) -> Self {
        SetSpec::Interval {
            start: 1,
            end: n as i64,
        }
    }

    pub fn realize(&self, ctx: &Arc<FieldContext>) -> Result<FpSet, SpecError> {
        let p = ctx.p();
        let range = |msg: String| SpecError::OutOfRange {
            spec: self.to_string(),
            p,
            msg,
        };
        match *self {
            SetSpec::Interval { start, end } => {
                let len = (end - start + 1) as u64;
                if len > p {
                    return Err(range(format!("length {len} exceeds p")));
                }
                Ok(FpSet::interval(ctx, start, len))
            }
            SetSpec::Ap { start, step, len } => {
                if len > p || (len > 1 && step.rem_euclid(p as i64) == 0) {
                    return Err(range("progression wraps onto itself".into()));
                }
                Ok(FpSet::progression(ctx, start, step, len))
            }
            SetSpec::Geom { g, len } => {
                let g = ctx.reduce(g);
                if g == 0 {
                    return Err(range("ratio is zero mod p".into()));
                }
                Ok(FpSet::from_residues(
                    ctx,
                    (0..len).map(|i| pow_mod(g, i, p)).collect(),
                ))
            }
            SetSpec::Random { n, seed } => {
                if n > p {
                    return Err(range(format!("{n} elements requested")));
                }
                let mut rng = seeded_rng(seed, p);
                let idx = sample(&mut rng, p as usize, n as usize);
                Ok(FpSet::from_residues(
                    ctx,
                    idx.into_iter().map(|x| x as u64).collect(),
                ))
            }
            SetSpec::Subgroup { d } => {
                if !(p - 1).is_multiple_of(d) {
                    return Err(range(format!("{d} does not divide p - 1")));
                }
                let h = ctx.exp((p - 1) / d);
                Ok(FpSet::from_residues(
                    ctx,
                    (0..d).map(|i| pow_mod(h, i, p)).collect(),
                ))
            }
            SetSpec::Explicit(ref items) => Ok(FpSet::new(ctx, items.iter().copied())),
        }
    }

    /// The same description read over Z.
    pub fn integers(&self) -> Result<Vec<i64>, SpecError> {
        let overflow = || SpecError::Overflow(self.to_string());
        let mut v = match *self {
            SetSpec::Interval { start, end } => (start..=end).collect(),
            SetSpec::Ap { start, step, len } => (0..len as i64)
                .map(|i| {
                    i.checked_mul(step)
                        .and_then(|x| x.checked_add(start))
                        .ok_or_else(overflow)
                })
                .collect::<Result<Vec<_>, _>>()?,
            SetSpec::Geom { g, len } => {
                let mut out = Vec::with_capacity(len as usize);
                let mut x: i64 = 1;
                for i in 0..len {
                    if i > 0 {
                        x = x.checked_mul(g).ok_or_else(overflow)?;
                    }
                    out.push(x);
                }
                out
            }
            SetSpec::Explicit(ref items) => items.clone(),
            SetSpec::Random { .. } | SetSpec::Subgroup { .. } => {
                return Err(SpecError::FieldOnly(self.to_string()))
            }
        };
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }
}

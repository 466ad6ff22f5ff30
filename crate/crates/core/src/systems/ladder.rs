//! The ladder space: three fixed points 0, 1, 2 joined by two monotone
//! orbit ladders, `s_n` climbing from 0 to 1 and `t_n` climbing from 1
//! to 2, with `f(s_n) = s_{n+1}` and `f(t_n) = t_{n+1}`.
//!
//! The concrete embedding is `s_n = 2^n/(2^n+1)` and `t_n = 1 + 2^n/(2^n+1)`:
//! strictly monotone in `n` with the required limits at 0, 1 and 2, and
//! every distance an exact rational.

use num_bigint::BigInt;
use num_traits::One;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::rat::Rat;
use crate::system::{DynamicalSystem, KnownSets};
use crate::Error;

/// A point of the ladder space.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LadderPoint {
    Zero,
    One,
    Two,
    /// Lower-ladder rung `s_n`, in (0, 1).
    S(i64),
    /// Upper-ladder rung `t_n`, in (1, 2).
    T(i64),
}

impl LadderPoint {
    /// Rank of the point class along the real line.
    fn class_rank(&self) -> u8 {
        match self {
            LadderPoint::Zero => 0,
            LadderPoint::S(_) => 1,
            LadderPoint::One => 2,
            LadderPoint::T(_) => 3,
            LadderPoint::Two => 4,
        }
    }
}

impl Ord for LadderPoint {
    /// Canonical order = order of the embeddings on the real line.
    fn cmp(&self, other: &Self) -> Ordering {
        use LadderPoint::*;
        match (self, other) {
            (S(a), S(b)) | (T(a), T(b)) => a.cmp(b),
            _ => self.class_rank().cmp(&other.class_rank()),
        }
    }
}

impl PartialOrd for LadderPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LadderPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderPoint::Zero => write!(f, "0"),
            LadderPoint::One => write!(f, "1"),
            LadderPoint::Two => write!(f, "2"),
            LadderPoint::S(n) => write!(f, "s({n})"),
            LadderPoint::T(n) => write!(f, "t({n})"),
        }
    }
}

impl FromStr for LadderPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::ParsePoint(s.to_string());
        match s.trim() {
            "0" => Ok(LadderPoint::Zero),
            "1" => Ok(LadderPoint::One),
            "2" => Ok(LadderPoint::Two),
            other => {
                let (ctor, rest): (fn(i64) -> LadderPoint, &str) =
                    if let Some(r) = other.strip_prefix("s(") {
                        (LadderPoint::S, r)
                    } else if let Some(r) = other.strip_prefix("t(") {
                        (LadderPoint::T, r)
                    } else {
                        return Err(bad());
                    };
                let inner = rest.strip_suffix(')').ok_or_else(bad)?;
                Ok(ctor(inner.trim().parse().map_err(|_| bad())?))
            }
        }
    }
}

/// `2^n/(2^n+1)` as an exact rational, for any sign of `n`.
fn dyadic_sigmoid(n: i64) -> Rat {
    if n >= 0 {
        let p = BigInt::one() << n as usize;
        Rat::from_big(p.clone(), p + BigInt::one())
    } else {
        let q = BigInt::one() << (-n) as usize;
        Rat::from_big(BigInt::one(), q + BigInt::one())
    }
}

/// Exact embedding of a ladder point into [0, 2].
pub fn ladder_embed(pt: &LadderPoint) -> Rat {
    match pt {
        LadderPoint::Zero => Rat::zero(),
        LadderPoint::One => Rat::one(),
        LadderPoint::Two => Rat::from_int(2),
        LadderPoint::S(n) => dyadic_sigmoid(*n),
        LadderPoint::T(n) => Rat::one() + dyadic_sigmoid(*n),
    }
}

/// The ladder system. The formulas are fixed, so the value is a unit.
#[derive(Clone, Copy, Default, Debug)]
pub struct LadderSystem;

impl LadderSystem {
    /// Exact diameter of the space: `d(0, 2) = 2`.
    pub fn diameter() -> Rat {
        Rat::from_int(2)
    }

    /// Fixed points plus every rung with `|n| <= range` (rungs are omitted
    /// entirely at `range = 0`), in canonical order.
    pub fn sample(&self, range: u32) -> Vec<LadderPoint> {
        let mut pts = vec![LadderPoint::Zero];
        if range >= 1 {
            let r = range as i64;
            pts.extend((-r..=r).map(LadderPoint::S));
        }
        pts.push(LadderPoint::One);
        if range >= 1 {
            let r = range as i64;
            pts.extend((-r..=r).map(LadderPoint::T));
        }
        pts.push(LadderPoint::Two);
        pts
    }
}

impl DynamicalSystem for LadderSystem {
    type Point = LadderPoint;

    fn id(&self) -> String {
        "ladder".to_string()
    }

    fn eval(&self, x: &LadderPoint) -> LadderPoint {
        match x {
            LadderPoint::S(n) => LadderPoint::S(n + 1),
            LadderPoint::T(n) => LadderPoint::T(n + 1),
            fixed => *fixed,
        }
    }

    fn dist(&self, x: &LadderPoint, y: &LadderPoint) -> Rat {
        (ladder_embed(x) - ladder_embed(y)).abs()
    }

    fn inverse(&self, x: &LadderPoint) -> Option<LadderPoint> {
        Some(match x {
            LadderPoint::S(n) => LadderPoint::S(n - 1),
            LadderPoint::T(n) => LadderPoint::T(n - 1),
            fixed => *fixed,
        })
    }

    fn candidates(&self, range: u32) -> Vec<LadderPoint> {
        self.sample(range)
    }

    fn known_sets(&self) -> Option<KnownSets<LadderPoint>> {
        let fixed = vec![LadderPoint::Zero, LadderPoint::One, LadderPoint::Two];
        Some(KnownSets {
            minimal: fixed.clone(),
            nonwandering: fixed.clone(),
            chain_recurrent: fixed,
        })
    }
}

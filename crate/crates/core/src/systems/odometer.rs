//! Depth-truncated odometers.
//!
//! An odometer with periodic structure `m_1 < m_2 < ... < m_D` (with
//! `m_1 >= 2` and `m_k | m_{k+1}`) acts on residues modulo `m_D` by +1.
//! Coordinate `k` of a residue `n` is `n mod m_k`, so the coherence
//! condition between consecutive coordinates holds automatically. The
//! metric is `2^{-k*}` where `k*` is the first level at which the two
//! residues disagree; distances below `2^{-D}` are not resolvable at this
//! truncation depth and come out as 0, so callers must pick `D` strictly
//! larger than every level they reason about.

use crate::rat::Rat;
use crate::system::{DynamicalSystem, KnownSets};
use crate::Error;

/// Residue-arithmetic odometer of finite depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdometerSystem {
    levels: Vec<u64>,
}

impl OdometerSystem {
    /// Validates the periodic structure: `m_1 >= 2`, strictly increasing,
    /// each level dividing the next.
    pub fn new(levels: Vec<u64>) -> Result<Self, Error> {
        if levels.is_empty() {
            return Err(Error::PeriodicStructure("no levels given".into()));
        }
        if levels[0] < 2 {
            return Err(Error::PeriodicStructure(format!(
                "m_1 = {} but m_1 >= 2 is required",
                levels[0]
            )));
        }
        for w in levels.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::PeriodicStructure(format!(
                    "levels must strictly increase, got {} then {}",
                    w[0], w[1]
                )));
            }
            if w[1] % w[0] != 0 {
                return Err(Error::PeriodicStructure(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(OdometerSystem { levels })
    }

    /// The dyadic odometer `m_k = 2^k` of the given depth.
    pub fn dyadic(depth: u32) -> Result<Self, Error> {
        if depth == 0 || depth > 62 {
            return Err(Error::PeriodicStructure(format!(
                "dyadic depth must be in 1..=62, got {depth}"
            )));
        }
        OdometerSystem::new((1..=depth).map(|k| 1u64 << k).collect())
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// `m_D`, the full residue modulus.
    pub fn modulus(&self) -> u64 {
        *self.levels.last().unwrap()
    }

    /// `m_k` for `1 <= k <= D`.
    pub fn level_modulus(&self, k: usize) -> u64 {
        self.levels[k - 1]
    }

    pub fn residues(&self) -> Vec<u64> {
        (0..self.modulus()).collect()
    }

    /// Least level `k` with `x != y (mod m_k)`, if any.
    fn first_disagreement(&self, x: u64, y: u64) -> Option<usize> {
        self.levels
            .iter()
            .position(|&m| x % m != y % m)
            .map(|i| i + 1)
    }

    /// Forward iterate by `steps` in one residue addition.
    pub fn step_by(&self, x: u64, steps: u64) -> u64 {
        let m = self.modulus();
        (x % m + steps % m) % m
    }

    /// Backward iterate by `steps`.
    pub fn step_back(&self, x: u64, steps: u64) -> u64 {
        let m = self.modulus();
        (x % m + (m - steps % m) % m) % m
    }
}

/// `d(x, y) = 2^{-k*}` at the first disagreeing level `k*`, or 0 when the
/// residues agree at every level.
pub fn odometer_dist(sys: &OdometerSystem, x: u64, y: u64) -> Rat {
    match sys.first_disagreement(x, y) {
        Some(k) => Rat::pow2(-(k as i32)),
        None => Rat::zero(),
    }
}

impl DynamicalSystem for OdometerSystem {
    type Point = u64;

    fn id(&self) -> String {
        let levels: Vec<String> = self.levels.iter().map(|m| m.to_string()).collect();
        format!("odometer[{}]", levels.join(","))
    }

    fn eval(&self, x: &u64) -> u64 {
        (x + 1) % self.modulus()
    }

    fn dist(&self, x: &u64, y: &u64) -> Rat {
        odometer_dist(self, *x, *y)
    }

    fn inverse(&self, x: &u64) -> Option<u64> {
        Some((x + self.modulus() - 1) % self.modulus())
    }

    fn candidates(&self, _range: u32) -> Vec<u64> {
        self.residues()
    }

    fn known_sets(&self) -> Option<KnownSets<u64>> {
        // A single m_D-cycle: every residue is periodic, hence minimal,
        // non-wandering and chain recurrent.
        let all = self.residues();
        Some(KnownSets {
            minimal: all.clone(),
            nonwandering: all.clone(),
            chain_recurrent: all,
        })
    }

    fn claims_isometry(&self) -> bool {
        true
    }
}

/// Level-`k` clopen partition into the classes `C_j = {x : x = j (mod m_k)}`,
/// with exact diameter and separation certificates computed by enumeration.
#[derive(Clone, Debug)]
pub struct CylinderPartition {
    pub level: usize,
    pub classes: Vec<Vec<u64>>,
    /// Exact maximum intra-class distance.
    pub diameter: Rat,
    /// Claimed bound: `2^{-(k+1)}`, or 0 at the final level.
    pub diameter_bound: Rat,
    /// Exact minimum distance between distinct classes.
    pub separation: Rat,
    /// Claimed bound: `2^{-k}`.
    pub separation_bound: Rat,
}

pub fn cylinder_partition(sys: &OdometerSystem, level: usize) -> Result<CylinderPartition, Error> {
    let depth = sys.depth();
    if level < 1 || level > depth {
        return Err(Error::LevelOutOfRange { level, max: depth });
    }
    let mk = sys.level_modulus(level);
    let mut classes = vec![Vec::new(); mk as usize];
    for x in sys.residues() {
        classes[(x % mk) as usize].push(x);
    }

    let mut diameter = Rat::zero();
    let mut separation: Option<Rat> = None;
    for (j, class) in classes.iter().enumerate() {
        for &a in class {
            for other in classes.iter().skip(j) {
                for &b in other {
                    let d = odometer_dist(sys, a, b);
                    if std::ptr::eq(class, other) {
                        diameter = diameter.max(d);
                    } else {
                        separation = Some(match separation {
                            Some(s) => s.min(d),
                            None => d,
                        });
                    }
                }
            }
        }
    }

    let diameter_bound = if level == depth {
        Rat::zero()
    } else {
        Rat::pow2(-(level as i32 + 1))
    };
    let separation_bound = Rat::pow2(-(level as i32));
    let separation = separation.unwrap_or_else(|| Rat::from_int(1));
    debug_assert!(diameter <= diameter_bound);
    debug_assert!(separation >= separation_bound);
    Ok(CylinderPartition {
        level,
        classes,
        diameter,
        diameter_bound,
        separation,
        separation_bound,
    })
}

//! An odometer with one extra isolated point `p` mapped onto the residue 0.
//!
//! The extra point sits at distance 2 from every residue (any value > 1
//! would do; 2 keeps the triangle inequality trivially valid since the
//! odometer itself has diameter at most 1/2). The map restricted to the
//! residues is the odometer's +1; `p` itself has no preimage.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::pseudo::PseudoOrbit;
use crate::rat::Rat;
use crate::system::{DynamicalSystem, KnownSets};
use crate::systems::odometer::OdometerSystem;
use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PointedPoint {
    /// The extra pre-fixed point `p`.
    Extra,
    /// An odometer residue.
    Res(u64),
}

impl Ord for PointedPoint {
    /// Canonical order: `p` first, then the residues numerically.
    fn cmp(&self, other: &Self) -> Ordering {
        use PointedPoint::*;
        match (self, other) {
            (Extra, Extra) => Ordering::Equal,
            (Extra, Res(_)) => Ordering::Less,
            (Res(_), Extra) => Ordering::Greater,
            (Res(a), Res(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for PointedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PointedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointedPoint::Extra => write!(f, "p"),
            PointedPoint::Res(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for PointedPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "p" => Ok(PointedPoint::Extra),
            other => other
                .parse()
                .map(PointedPoint::Res)
                .map_err(|_| Error::ParsePoint(s.to_string())),
        }
    }
}

/// The pointed odometer of Example-4.1 shape.
#[derive(Clone, Debug)]
pub struct PointedOdometer {
    inner: OdometerSystem,
}

impl PointedOdometer {
    pub fn new(inner: OdometerSystem) -> Self {
        PointedOdometer { inner }
    }

    pub fn dyadic(depth: u32) -> Result<Self, Error> {
        Ok(PointedOdometer::new(OdometerSystem::dyadic(depth)?))
    }

    pub fn inner(&self) -> &OdometerSystem {
        &self.inner
    }
}

impl DynamicalSystem for PointedOdometer {
    type Point = PointedPoint;

    fn id(&self) -> String {
        format!("pointed-{}", self.inner.id())
    }

    fn eval(&self, x: &PointedPoint) -> PointedPoint {
        match x {
            PointedPoint::Extra => PointedPoint::Res(0),
            PointedPoint::Res(n) => PointedPoint::Res(self.inner.eval(n)),
        }
    }

    fn dist(&self, x: &PointedPoint, y: &PointedPoint) -> Rat {
        use PointedPoint::*;
        match (x, y) {
            (Extra, Extra) => Rat::zero(),
            (Extra, Res(_)) | (Res(_), Extra) => Rat::from_int(2),
            (Res(a), Res(b)) => self.inner.dist(a, b),
        }
    }

    fn inverse(&self, _x: &PointedPoint) -> Option<PointedPoint> {
        // Not injective: both p and the residue m_D - 1 map onto 0.
        None
    }

    fn candidates(&self, _range: u32) -> Vec<PointedPoint> {
        let mut pts = vec![PointedPoint::Extra];
        pts.extend(self.inner.residues().into_iter().map(PointedPoint::Res));
        pts
    }

    fn known_sets(&self) -> Option<KnownSets<PointedPoint>> {
        // The residues form the whole minimal, non-wandering and chain
        // recurrent sets; p is excluded (nothing maps into its 2-ball).
        let all: Vec<PointedPoint> = self.inner.residues().into_iter().map(PointedPoint::Res).collect();
        Some(KnownSets {
            minimal: all.clone(),
            nonwandering: all.clone(),
            chain_recurrent: all,
        })
    }
}

/// The pseudo orbit `(p, r, f(r), f^2(r), ...)` with `r = m_{K-1}` as a
/// residue: the single nonzero error is `e_0 = d(f(p), r) = 2^{-K}`, so the
/// window is simultaneously a `delta`-pseudo orbit for every
/// `delta >= 2^{-K}` and a limit pseudo orbit.
pub fn pointed_gamma(
    sys: &PointedOdometer,
    k_level: usize,
    window: usize,
) -> Result<PseudoOrbit<PointedOdometer>, Error> {
    let depth = sys.inner().depth();
    if k_level < 2 || k_level > depth {
        return Err(Error::Parameter(format!(
            "K must satisfy 2 <= K <= {depth}, got {k_level}"
        )));
    }
    if window < 1 {
        return Err(Error::Parameter("window must contain at least one point".into()));
    }
    let r = sys.inner().level_modulus(k_level - 1);
    let mut points = Vec::with_capacity(window);
    points.push(PointedPoint::Extra);
    if window > 1 {
        points.push(PointedPoint::Res(r));
        while points.len() < window {
            points.push(sys.eval(points.last().unwrap()));
        }
    }
    let po = PseudoOrbit::new(sys.clone(), points)?;
    let gap = Rat::pow2(-(k_level as i32));
    if window > 1 {
        po.with_schedule(vec![(0, gap), (1, Rat::zero())])
    } else {
        Ok(po)
    }
}

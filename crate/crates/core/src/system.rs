//! The dynamical-system contract and the shared checks every concrete
//! system must survive: metric axioms, nonexpansiveness/isometry, exact
//! orbit segments, and horizon-truncated adapted-metric bounds.

use std::fmt;
use std::hash::Hash;

use crate::rat::Rat;
use crate::report::VerificationReport;

/// A concrete dynamical system with exact map evaluation and an exact
/// metric. This is a closed universe: the systems in [`crate::systems`]
/// are the only implementations.
pub trait DynamicalSystem: Clone {
    type Point: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display;

    /// Stable identifier used in serialized records.
    fn id(&self) -> String;

    /// The map `f`.
    fn eval(&self, x: &Self::Point) -> Self::Point;

    /// The metric `d`. Symmetric, zero iff equal, triangle inequality;
    /// [`check_metric_axioms`] verifies this exhaustively on finite sets.
    fn dist(&self, x: &Self::Point, y: &Self::Point) -> Rat;

    /// Exact inverse of `f`, when the system has one.
    fn inverse(&self, x: &Self::Point) -> Option<Self::Point>;

    /// Finite candidate list for a region descriptor. The interpretation of
    /// `range` is system-specific: the ladder returns its fixed points plus
    /// the rungs with index magnitude at most `range`; residue systems
    /// ignore it and return every residue.
    fn candidates(&self, range: u32) -> Vec<Self::Point>;

    /// Exact descriptions of the minimal, non-wandering and chain-recurrent
    /// sets, when known for this system.
    fn known_sets(&self) -> Option<KnownSets<Self::Point>>;

    /// Whether the system claims `d(f(x),f(y)) = d(x,y)` everywhere.
    /// [`check_nonexpansive`] turns the claim into an exhaustive check.
    fn claims_isometry(&self) -> bool {
        false
    }
}

/// Exact finite enumerations of the minimal points, the non-wandering set
/// and the chain-recurrent set.
#[derive(Clone, Debug)]
pub struct KnownSets<P> {
    pub minimal: Vec<P>,
    pub nonwandering: Vec<P>,
    pub chain_recurrent: Vec<P>,
}

/// A finite forward orbit `f^0(x), ..., f^L(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSegment<P> {
    pub base: P,
    pub images: Vec<P>,
}

impl<P> OrbitSegment<P> {
    pub fn length(&self) -> usize {
        self.images.len() - 1
    }
}

/// Exact forward orbit of `x` through `f^length(x)`.
pub fn orbit<S: DynamicalSystem>(sys: &S, x: &S::Point, length: usize) -> OrbitSegment<S::Point> {
    let mut images = Vec::with_capacity(length + 1);
    images.push(x.clone());
    for _ in 0..length {
        let next = sys.eval(images.last().unwrap());
        images.push(next);
    }
    OrbitSegment { base: x.clone(), images }
}

/// Verifies symmetry, identity of indiscernibles and the triangle
/// inequality over every (ordered) pair and triple of `pts`. Failures are
/// reported with the offending tuple, never raised.
pub fn check_metric_axioms<S: DynamicalSystem>(sys: &S, pts: &[S::Point]) -> VerificationReport {
    assert!(!pts.is_empty(), "candidate list must be nonempty");
    let mut report = VerificationReport::new("core.metric-axioms", "d is a metric")
        .param("points", pts.len());

    for (i, x) in pts.iter().enumerate() {
        for (j, y) in pts.iter().enumerate() {
            let dxy = sys.dist(x, y);
            if dxy != sys.dist(y, x) {
                return report.witness("symmetry-violation", format!("({x}, {y})")).failed();
            }
            if (x == y) != dxy.is_zero() {
                return report
                    .witness("identity-violation", format!("({x}, {y}) -> {dxy}"))
                    .failed();
            }
            for z in pts.iter() {
                let through = &sys.dist(x, z) + &sys.dist(z, y);
                if dxy > through {
                    return report
                        .witness("triangle-violation", format!("({x}, {z}, {y})"))
                        .witness("direct", dxy)
                        .witness("through", through)
                        .failed();
                }
            }
            let _ = (i, j);
        }
    }
    report = report.witness("triples-checked", pts.len().pow(3));
    report.passed()
}

/// Verifies `d(f(x),f(y)) <= d(x,y)` over all pairs; when the system claims
/// to be an isometry, equality is required instead.
pub fn check_nonexpansive<S: DynamicalSystem>(sys: &S, pts: &[S::Point]) -> VerificationReport {
    assert!(!pts.is_empty(), "candidate list must be nonempty");
    let isometry = sys.claims_isometry();
    let anchor = if isometry {
        "d(f(x),f(y))=d(x,y)"
    } else {
        "d(f(x),f(y))<=d(x,y)"
    };
    let mut report = VerificationReport::new("core.nonexpansive", anchor)
        .param("points", pts.len())
        .param("isometry-required", isometry);

    for x in pts {
        for y in pts {
            let before = sys.dist(x, y);
            let after = sys.dist(&sys.eval(x), &sys.eval(y));
            let bad = if isometry { after != before } else { after > before };
            if bad {
                return report
                    .witness("pair", format!("({x}, {y})"))
                    .witness("d(x,y)", before)
                    .witness("d(f(x),f(y))", after)
                    .failed();
            }
        }
    }
    report = report.witness("pairs-checked", pts.len() * pts.len());
    report.passed()
}

/// `max_{0<=n<=horizon} d(f^n(x), f^n(y))`: a lower bound for the adapted
/// metric `sup_n d(f^n(x), f^n(y))`, exact at every horizon for isometric
/// systems.
pub fn adapted_metric_bound<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    y: &S::Point,
    horizon: usize,
) -> Rat {
    let mut a = x.clone();
    let mut b = y.clone();
    let mut best = sys.dist(&a, &b);
    for _ in 0..horizon {
        a = sys.eval(&a);
        b = sys.eval(&b);
        best = best.max(sys.dist(&a, &b));
    }
    best
}

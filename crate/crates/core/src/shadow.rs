//! Shadowing verification: exact defect profiles, brute-force and
//! certificate-based shadowing-point searches, the odometer shadowing
//! modulus with its induction property, the constructive limit-shadowing
//! point for invertible isometric systems, thick-set shadowing analytics,
//! and the pointed-odometer counterexample pipeline.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

use crate::pseudo::{density_profile, longest_run, DensityProfile, PseudoOrbit, RunReport};
use crate::rat::Rat;
use crate::report::{Status, VerificationReport};
use crate::system::DynamicalSystem;
use crate::systems::{
    ladder_embed, pointed_gamma, LadderSystem, OdometerSystem, PointedOdometer, PointedPoint,
};
use crate::Error;

/// Deterministic generator used by every seeded experiment; identical
/// seeds reproduce identical runs byte for byte.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact per-index defects `d(x_i, f^i(y))` of a shadowing candidate.
#[derive(Clone, Debug)]
pub struct ShadowDefect<P> {
    pub candidate: P,
    pub defects: Vec<Rat>,
}

impl<P> ShadowDefect<P> {
    pub fn max_defect(&self) -> Rat {
        self.defects
            .iter()
            .cloned()
            .fold(Rat::zero(), |acc, d| acc.max(d))
    }

    /// Max defect over indices >= `from`; `None` when the window ends first.
    pub fn tail_max(&self, from: usize) -> Option<Rat> {
        let tail = self.defects.get(from..)?;
        tail.iter().cloned().max()
    }

    /// Min defect over indices >= `from`.
    pub fn tail_min(&self, from: usize) -> Option<Rat> {
        let tail = self.defects.get(from..)?;
        tail.iter().cloned().min()
    }
}

/// Defect profile of `y` against the pseudo orbit, all exact.
pub fn shadow_defect<S: DynamicalSystem>(
    po: &PseudoOrbit<S>,
    y: &S::Point,
) -> ShadowDefect<S::Point> {
    let sys = po.system();
    let mut cur = y.clone();
    let mut defects = Vec::with_capacity(po.len());
    for (i, x) in po.points().iter().enumerate() {
        if i > 0 {
            cur = sys.eval(&cur);
        }
        defects.push(sys.dist(x, &cur));
    }
    ShadowDefect { candidate: y.clone(), defects }
}

/// All candidates whose max defect is <= `eps`, in candidate order.
pub fn find_shadows<S: DynamicalSystem>(
    po: &PseudoOrbit<S>,
    eps: &Rat,
    candidates: &[S::Point],
) -> Vec<S::Point> {
    candidates
        .iter()
        .filter(|y| shadow_defect(po, y).max_defect() <= *eps)
        .cloned()
        .collect()
}

/// Which side of the ladder a candidate class lives on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LadderClass {
    /// Every `s_n`; all orbits stay in the open interval (0, 1).
    SLadder,
    /// Every `t_n`; all orbits stay in the open interval (1, 2).
    TLadder,
}

/// Certificate excluding an entire candidate class: the class orbits are
/// enclosed in `interval`, and the window entry at `window_index` sits at
/// distance `margin >= eps` from the closed hull, so every member's defect
/// there strictly exceeds `eps`.
#[derive(Clone, Debug)]
pub struct ClassCertificate {
    pub class: LadderClass,
    pub interval: (Rat, Rat),
    pub window_index: usize,
    pub margin: Rat,
}

/// Outcome of a non-shadowability check: the report plus the class
/// certificates that finitize the infinite candidate universe.
#[derive(Clone, Debug)]
pub struct NoShadowOutcome {
    pub report: VerificationReport,
    pub certificates: Vec<ClassCertificate>,
}

fn class_certificate(
    po: &PseudoOrbit<LadderSystem>,
    eps: &Rat,
    class: LadderClass,
) -> Option<ClassCertificate> {
    // The enclosure is structural: each class is closed under f and its
    // embedding range is the stated open interval, so every forward orbit
    // of every member stays inside it.
    let (lo, hi) = match class {
        LadderClass::SLadder => (Rat::zero(), Rat::one()),
        LadderClass::TLadder => (Rat::one(), Rat::from_int(2)),
    };
    for (i, x) in po.points().iter().enumerate() {
        let e = ladder_embed(x);
        let margin = if e >= hi {
            &e - &hi
        } else if e <= lo {
            &lo - &e
        } else {
            continue;
        };
        if &margin >= eps {
            return Some(ClassCertificate {
                class,
                interval: (lo, hi),
                window_index: i,
                margin,
            });
        }
    }
    None
}

/// Brute-forces the fixed points and every rung with `|n| <= range`, then
/// excludes the two infinite rung tails by interval certificates. Passes
/// iff no candidate eps-shadows the window and both certificates exist; a
/// shadowing point or a missing certificate is reported, never raised.
pub fn verify_no_shadow(
    po: &PseudoOrbit<LadderSystem>,
    eps: &Rat,
    range: u32,
) -> NoShadowOutcome {
    let mut report = VerificationReport::new(
        "shadow.no-shadowing-point",
        "no point eps-shadows the delta-chain",
    )
    .param("eps", eps)
    .param("brute-force-range", range)
    .param("window", po.len());

    for y in po.system().candidates(range) {
        let defect = shadow_defect(po, &y);
        if defect.max_defect() <= *eps {
            report = report
                .witness("shadowing-point", y)
                .witness("max-defect", defect.max_defect())
                .failed();
            return NoShadowOutcome { report, certificates: Vec::new() };
        }
    }
    report = report.witness("brute-forced", po.system().candidates(range).len());

    let mut certificates = Vec::new();
    for class in [LadderClass::SLadder, LadderClass::TLadder] {
        match class_certificate(po, eps, class) {
            Some(cert) => {
                report = report.witness(
                    match class {
                        LadderClass::SLadder => "s-class-excluded-at",
                        LadderClass::TLadder => "t-class-excluded-at",
                    },
                    format!("index {} margin {}", cert.window_index, cert.margin),
                );
                certificates.push(cert);
            }
            None => {
                report = report
                    .witness(
                        "certificate-missing",
                        match class {
                            LadderClass::SLadder => "s-class",
                            LadderClass::TLadder => "t-class",
                        },
                    )
                    .failed();
                return NoShadowOutcome { report, certificates };
            }
        }
    }
    NoShadowOutcome { report: report.passed(), certificates }
}

/// The shadowing modulus of the depth-truncated odometer: the coarsest
/// cylinder level whose diameter bound is within `eps` gives
/// `delta = 2^{-(k+1)}`, half the level separation; every `delta`-pseudo
/// orbit then tracks the cylinder itinerary of its own start, hence is
/// `eps`-shadowed by it. Below level `D` resolution the modulus forces
/// exact orbits.
pub fn odometer_shadow_modulus(sys: &OdometerSystem, eps: &Rat) -> Rat {
    assert!(eps > &Rat::zero(), "eps must be positive");
    let depth = sys.depth() as i32;
    for k in 0..=depth {
        let delta = Rat::pow2(-(k + 1));
        if &delta <= eps {
            return delta;
        }
    }
    Rat::pow2(-(depth + 1))
}

/// Verifies the induction property: for every `i` up to the window length
/// and every `0 <= j <= i-1`, `d(f^{i-j}(x_j), f^{i-j-1}(x_{j+1})) <= delta`,
/// by direct exact computation of all pushed-forward pairs.
pub fn check_pi_property<S: DynamicalSystem>(
    po: &PseudoOrbit<S>,
    delta: &Rat,
) -> VerificationReport {
    let sys = po.system();
    let len = po.len();
    let report = VerificationReport::new(
        "shadow.induction-property",
        "(P_i): d(f^(i-j)(x_j), f^(i-j-1)(x_(j+1))) <= delta",
    )
    .param("delta", delta)
    .param("window", len);

    // orbits[j][a] = f^a(x_j), far enough for every (i, j) pair.
    let orbits: Vec<Vec<S::Point>> = po
        .points()
        .iter()
        .enumerate()
        .map(|(j, x)| crate::system::orbit(sys, x, len - 1 - j).images)
        .collect();

    let mut checked = 0usize;
    for i in 1..len {
        for j in 0..i {
            let a = sys.dist(&orbits[j][i - j], &orbits[j + 1][i - j - 1]);
            checked += 1;
            if &a > delta {
                return report
                    .witness("violation-at", format!("(i, j) = ({i}, {j})"))
                    .witness("value", a)
                    .failed();
            }
        }
    }
    report.witness("pairs-checked", checked).passed()
}

/// Seeded random delta-pseudo orbit: at each step the successor is drawn
/// uniformly from the candidates within `delta` of the true image. The
/// window is truncated early if no candidate qualifies.
pub fn random_delta_po<S: DynamicalSystem>(
    sys: &S,
    universe: &[S::Point],
    x0: &S::Point,
    delta: &Rat,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> PseudoOrbit<S> {
    let mut cache = HashMap::new();
    random_delta_po_cached(sys, universe, x0, delta, len, rng, &mut cache)
}

// Successor sets are stable per (image, delta); trial loops share the cache.
fn random_delta_po_cached<S: DynamicalSystem>(
    sys: &S,
    universe: &[S::Point],
    x0: &S::Point,
    delta: &Rat,
    len: usize,
    rng: &mut ChaCha8Rng,
    cache: &mut HashMap<S::Point, Vec<S::Point>>,
) -> PseudoOrbit<S> {
    assert!(len >= 1);
    let mut points = Vec::with_capacity(len);
    points.push(x0.clone());
    while points.len() < len {
        let image = sys.eval(points.last().unwrap());
        let choices = cache.entry(image.clone()).or_insert_with(|| {
            universe
                .iter()
                .filter(|c| sys.dist(&image, c) <= *delta)
                .cloned()
                .collect()
        });
        if choices.is_empty() {
            break;
        }
        let pick = rng.gen_range(0..choices.len());
        points.push(choices[pick].clone());
    }
    PseudoOrbit::new(sys.clone(), points).unwrap()
}

/// Generates `trials` seeded random delta-pseudo orbits of length `len`
/// starting at `x` and checks each one is eps-shadowed by `x` itself.
#[allow(clippy::too_many_arguments)] // mirrors the check's parameter contract
pub fn chain_continuity_check<S: DynamicalSystem>(
    sys: &S,
    universe: &[S::Point],
    x: &S::Point,
    eps: &Rat,
    delta: &Rat,
    trials: u32,
    len: usize,
    seed: u64,
) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache = HashMap::new();
    let mut failures = 0u32;
    let mut first_witness: Option<(u32, Rat)> = None;
    for trial in 0..trials {
        let po = random_delta_po_cached(sys, universe, x, delta, len, &mut rng, &mut cache);
        let max = shadow_defect(&po, x).max_defect();
        if &max > eps {
            failures += 1;
            if first_witness.is_none() {
                first_witness = Some((trial, max));
            }
        }
    }
    let mut report = VerificationReport::new(
        "shadow.chain-continuity",
        "every delta-pseudo orbit starting at x is eps-shadowed by x itself",
    )
    .param("x", x)
    .param("eps", eps)
    .param("delta", delta)
    .param("trials", trials)
    .param("len", len)
    .seeded(seed)
    .witness("failures", failures);
    if let Some((trial, max)) = first_witness {
        report = report
            .witness("first-failing-trial", trial)
            .witness("first-failure-max-defect", max);
    }
    if failures == 0 {
        report.passed()
    } else {
        report.failed()
    }
}

/// Per-level record of the constructive limit-shadowing bounds.
#[derive(Clone, Debug)]
pub struct LevelCheck {
    /// 1-based level `n`; the bound at this level is `2^{-n}`.
    pub level: usize,
    /// Schedule index `i_n`.
    pub index: usize,
    /// `max_j d(x_{i_n+j}, f^j(x_{i_n}))`, verified `<= 2^{-n}`.
    pub orbit_defect_max: Rat,
    /// `d(y_n, y_{n+1})`, verified `<= 2^{-n}`.
    pub cauchy_to_next: Option<Rat>,
    /// `max_j d(x_{i_n+j}, f^{i_n+j}(y))`, verified `<= 3 * 2^{-n}`.
    pub shadow_defect_max: Rat,
}

#[derive(Clone, Debug)]
pub struct LimitShadowOutcome {
    /// The stabilized limit point `y`.
    pub point: u64,
    /// The approximants `y_n = f^{-i_n}(x_{i_n})`.
    pub level_points: Vec<u64>,
    pub checks: Vec<LevelCheck>,
}

/// Constructs the limit shadowing point `y_n = f^{-i_n}(x_{i_n})` for a
/// scheduled pseudo orbit of the odometer (invertible and isometric), after
/// verifying the per-level tracking bounds; returns the stabilized limit
/// with all inequalities checked exactly.
pub fn limit_shadow_construct(
    sys: &OdometerSystem,
    po: &PseudoOrbit<OdometerSystem>,
) -> Result<LimitShadowOutcome, Error> {
    let schedule = po.schedule().ok_or(Error::MissingSchedule)?;
    if schedule.is_empty() {
        return Err(Error::MissingSchedule);
    }
    let points = po.points();

    // Tracking bound at each level: the whole in-window tail from i_n
    // stays 2^{-n}-close to the exact orbit of x_{i_n}.
    let mut orbit_maxes = Vec::with_capacity(schedule.len());
    for (rank, (start, _)) in schedule.iter().enumerate() {
        let level = rank + 1;
        let bound = Rat::pow2(-(level as i32));
        let mut cur = points[*start];
        let mut max = Rat::zero();
        for (j, x) in points[*start..].iter().enumerate() {
            if j > 0 {
                cur = sys.eval(&cur);
            }
            let d = sys.dist(x, &cur);
            if d > bound {
                return Err(Error::ScheduleViolation(format!(
                    "level {level}: d(x_{}, f^{j}(x_{start})) = {d} > {bound}",
                    start + j
                )));
            }
            max = max.max(d);
        }
        orbit_maxes.push(max);
    }

    let level_points: Vec<u64> = schedule
        .iter()
        .map(|(start, _)| {
            let mut cur = points[*start];
            for _ in 0..*start {
                cur = sys.inverse(&cur).ok_or(Error::NoInverse)?;
            }
            Ok(cur)
        })
        .collect::<Result<_, Error>>()?;

    for (rank, pair) in level_points.windows(2).enumerate() {
        let bound = Rat::pow2(-((rank + 1) as i32));
        let d = sys.dist(&pair[0], &pair[1]);
        if d > bound {
            return Err(Error::ScheduleViolation(format!(
                "level {}: d(y_n, y_(n+1)) = {d} > {bound}",
                rank + 1
            )));
        }
    }

    let y = *level_points.last().unwrap();
    let mut checks = Vec::with_capacity(schedule.len());
    for (rank, (start, _)) in schedule.iter().enumerate() {
        let level = rank + 1;
        let bound = Rat::from_int(3) * Rat::pow2(-(level as i32));
        let mut cur = sys.step_by(y, *start as u64);
        let mut max = Rat::zero();
        for (j, x) in points[*start..].iter().enumerate() {
            if j > 0 {
                cur = sys.eval(&cur);
            }
            let d = sys.dist(x, &cur);
            if d > bound {
                return Err(Error::ScheduleViolation(format!(
                    "level {level}: shadow defect {d} > {bound} at index {}",
                    start + j
                )));
            }
            max = max.max(d);
        }
        checks.push(LevelCheck {
            level,
            index: *start,
            orbit_defect_max: orbit_maxes[rank].clone(),
            cauchy_to_next: (rank + 1 < level_points.len())
                .then(|| sys.dist(&level_points[rank], &level_points[rank + 1])),
            shadow_defect_max: max,
        });
    }

    Ok(LimitShadowOutcome { point: y, level_points, checks })
}

/// Seeded generator of scheduled limit pseudo orbits: exact dynamics with
/// one jump of exact size `2^{-(n+1)}` at each schedule index `i_n` (no
/// jump once the size falls below the depth resolution), carrying the
/// schedule `(i_n, 2^{-n})`.
pub fn scheduled_limit_po(
    sys: &OdometerSystem,
    x0: u64,
    level_indices: &[usize],
    window: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PseudoOrbit<OdometerSystem>, Error> {
    for w in level_indices.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::ScheduleIndex(w[1]));
        }
    }
    if let Some(&last) = level_indices.last() {
        if last >= window {
            return Err(Error::ScheduleIndex(last));
        }
    }
    let depth = sys.depth();
    let mut jump_at: HashMap<usize, u64> = HashMap::new();
    for (rank, &idx) in level_indices.iter().enumerate() {
        let level = rank + 1; // jump size 2^{-(level+1)}
        if idx == 0 || level + 1 > depth {
            continue;
        }
        let base = sys.level_modulus(level);
        let ratio = sys.level_modulus(level + 1) / base;
        let multiplier = rng.gen_range(1..ratio);
        jump_at.insert(idx, base * multiplier);
    }

    let mut points = Vec::with_capacity(window);
    points.push(x0 % sys.modulus());
    for i in 1..window {
        let mut next = sys.eval(points.last().unwrap());
        if let Some(&offset) = jump_at.get(&i) {
            next = sys.step_by(next, offset);
        }
        points.push(next);
    }
    let schedule: Vec<(usize, Rat)> = level_indices
        .iter()
        .enumerate()
        .map(|(rank, &idx)| (idx, Rat::pow2(-((rank + 1) as i32))))
        .collect();
    let po = PseudoOrbit::new(sys.clone(), points)?.with_schedule(schedule)?;
    debug_assert!(po.verify_schedule());
    Ok(po)
}

/// Best thick-shadowing candidate: the one maximizing the longest run of
/// its agreement set `{i : d(x_i, f^i(y)) <= eps}`, with the density
/// profile and run report of that set.
#[derive(Clone, Debug)]
pub struct ThickShadowOutcome<P> {
    pub candidate: P,
    pub agreement: BTreeSet<usize>,
    pub density: DensityProfile,
    pub run: RunReport,
}

pub fn thick_shadow_report<S: DynamicalSystem>(
    po: &PseudoOrbit<S>,
    eps: &Rat,
    candidates: &[S::Point],
) -> ThickShadowOutcome<S::Point> {
    assert!(!candidates.is_empty(), "candidate list must be nonempty");
    let len = po.len();
    let mut best: Option<(S::Point, BTreeSet<usize>, RunReport)> = None;
    for y in candidates {
        let defect = shadow_defect(po, y);
        let agreement: BTreeSet<usize> = defect
            .defects
            .iter()
            .enumerate()
            .filter(|(_, d)| *d <= eps)
            .map(|(i, _)| i)
            .collect();
        let run = longest_run(&agreement, len);
        let better = match &best {
            Some((_, _, best_run)) => run.run_len > best_run.run_len,
            None => true,
        };
        if better {
            best = Some((y.clone(), agreement, run));
        }
    }
    let (candidate, agreement, run) = best.unwrap();
    let density = density_profile(&agreement, len);
    ThickShadowOutcome { candidate, agreement, density, run }
}

/// The full counterexample pipeline on the pointed odometer: builds the
/// window `(p, r, f(r), ...)`, verifies it is a `2^{-K}`-pseudo orbit and
/// exact after the first step, checks that `p` is the unique 1-shadowing
/// point among `p` and all residues, and confirms the defect floor
/// `d(x_j, f^j(p)) >= 2^{-K}` on the whole tail, so the 1-shadowing point
/// is not a limit shadowing point.
pub fn slimit_counterexample(
    sys: &PointedOdometer,
    k_level: usize,
    window: usize,
) -> Result<VerificationReport, Error> {
    let gamma = pointed_gamma(sys, k_level, window)?;
    let gap = Rat::pow2(-(k_level as i32));
    let mut report = VerificationReport::new(
        "shadow.slimit-counterexample",
        "every 1-shadowing point of gamma fails to be a limit shadowing point",
    )
    .param("K", k_level)
    .param("depth", sys.inner().depth())
    .param("window", window);

    if window < 2 {
        return Ok(report
            .witness("insufficient-window", "tail separation needs at least two points")
            .status(Status::InsufficientWindow));
    }

    // Stage: delta-pseudo and limit pseudo orbit shape.
    let errors = gamma.errors();
    report = report.witness("e_0", &errors[0]);
    if errors[0] != gap || errors[1..].iter().any(|e| !e.is_zero()) {
        return Ok(report.witness("stage", "error-profile").failed());
    }

    // Stage: unique 1-shadowing point.
    let candidates = sys.candidates(0);
    let shadows = find_shadows(&gamma, &Rat::one(), &candidates);
    let listed: Vec<String> = shadows.iter().map(|p| p.to_string()).collect();
    report = report
        .witness("candidates-checked", candidates.len())
        .witness("one-shadowing-points", listed.join(" "));
    if shadows != vec![PointedPoint::Extra] {
        return Ok(report.witness("stage", "unique-shadow").failed());
    }

    // Stage: defect floor along the tail of the orbit of p.
    let defect = shadow_defect(&gamma, &PointedPoint::Extra);
    let tail_min = defect.tail_min(1).expect("window has a tail");
    report = report.witness("tail-defect-min", &tail_min);
    if tail_min < gap {
        return Ok(report.witness("stage", "tail-separation").failed());
    }

    Ok(report.passed())
}

/// Enumerates every delta-pseudo orbit of the given window length over the
/// full residue alphabet and checks each one is eps-shadowed by its own
/// start. The enumeration count is reported; a blowup beyond the guard is
/// a parameter error.
pub fn exhaustive_shadow_check(
    sys: &OdometerSystem,
    delta: &Rat,
    eps: &Rat,
    window: usize,
) -> Result<VerificationReport, Error> {
    assert!(window >= 1);
    let residues = sys.residues();
    let successors: Vec<Vec<u64>> = residues
        .iter()
        .map(|&v| {
            let image = sys.eval(&v);
            residues
                .iter()
                .copied()
                .filter(|w| sys.dist(&image, w) <= *delta)
                .collect()
        })
        .collect();

    let branching = successors.iter().map(|s| s.len()).max().unwrap_or(0);
    let mut estimate = residues.len() as u128;
    for _ in 1..window {
        estimate = estimate.saturating_mul(branching as u128);
        if estimate > 5_000_000 {
            return Err(Error::Parameter(format!(
                "enumeration of ~{estimate} pseudo orbits exceeds the guard"
            )));
        }
    }

    // Depth-first enumeration over successor sets; the recursion depth is
    // the window length.
    fn enumerate(
        successors: &[Vec<u64>],
        window: usize,
        stack: &mut Vec<u64>,
        visit: &mut impl FnMut(&[u64]),
    ) {
        if stack.len() == window {
            visit(stack);
            return;
        }
        let last = *stack.last().unwrap() as usize;
        for i in 0..successors[last].len() {
            stack.push(successors[last][i]);
            enumerate(successors, window, stack, visit);
            stack.pop();
        }
    }

    let mut count = 0u64;
    let mut failures = 0u64;
    let mut first_witness: Option<String> = None;
    let mut stack: Vec<u64> = Vec::with_capacity(window);
    for &start in &residues {
        stack.push(start);
        enumerate(&successors, window, &mut stack, &mut |points| {
            count += 1;
            let po = PseudoOrbit::new(sys.clone(), points.to_vec()).unwrap();
            let max = shadow_defect(&po, &points[0]).max_defect();
            if &max > eps {
                failures += 1;
                if first_witness.is_none() {
                    let pts: Vec<String> = points.iter().map(|p| p.to_string()).collect();
                    first_witness = Some(pts.join(" "));
                }
            }
        });
        stack.pop();
    }

    let mut report = VerificationReport::new(
        "shadow.exhaustive-self-shadowing",
        "every delta-pseudo orbit is eps-shadowed by x_0",
    )
    .param("delta", delta)
    .param("eps", eps)
    .param("window", window)
    .param("depth", sys.depth())
    .witness("orbits-enumerated", count)
    .witness("failures", failures);
    if let Some(w) = first_witness {
        report = report.witness("first-failure", w);
    }
    Ok(if failures == 0 { report.passed() } else { report.failed() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo::{ergodic_po, from_orbit};
    use crate::systems::LadderPoint;
    use proptest::prelude::*;
    use rand::Rng;
    use LadderPoint::{One, Two, Zero, S, T};
    use PointedPoint::{Extra, Res};

    fn dyadic(depth: u32) -> OdometerSystem {
        OdometerSystem::dyadic(depth).unwrap()
    }

    fn pointed(depth: u32) -> PointedOdometer {
        PointedOdometer::dyadic(depth).unwrap()
    }

    #[test]
    fn exact_orbit_shadows_itself_exactly() {
        let sys = dyadic(4);
        let po = from_orbit(&sys, &3, 10);
        let defect = shadow_defect(&po, &3);
        assert!(defect.max_defect().is_zero());
    }

    #[test]
    fn gamma_defects_against_p() {
        let sys = pointed(4);
        let gamma = pointed_gamma(&sys, 2, 8).unwrap();
        let defect = shadow_defect(&gamma, &Extra);
        assert!(defect.defects[0].is_zero());
        for d in &defect.defects[1..] {
            assert_eq!(d, &Rat::new(1, 4));
        }
        // A residue candidate dies at index 0, where the window sits at p.
        let residue = shadow_defect(&gamma, &Res(2));
        assert_eq!(residue.defects[0], Rat::from_int(2));
    }

    #[test]
    fn gamma_unique_one_shadowing_point() {
        let sys = pointed(4);
        let gamma = pointed_gamma(&sys, 2, 8).unwrap();
        let shadows = find_shadows(&gamma, &Rat::one(), &sys.candidates(0));
        assert_eq!(shadows, vec![Extra]);
    }

    #[test]
    fn exact_orbit_is_the_unique_zero_shadow_on_the_odometer() {
        let sys = dyadic(4);
        let po = from_orbit(&sys, &5, 8);
        let shadows = find_shadows(&po, &Rat::zero(), &sys.residues());
        assert_eq!(shadows, vec![5]);
    }

    #[test]
    fn random_delta_po_is_shadowed_by_its_start() {
        let sys = dyadic(6);
        let eps = Rat::new(1, 4);
        let delta = odometer_shadow_modulus(&sys, &eps);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let po = random_delta_po(&sys, &sys.residues(), &9, &delta, 60, &mut rng);
            assert!(po.is_delta(&delta));
            let shadows = find_shadows(&po, &eps, &sys.residues());
            assert!(shadows.contains(&9));
        }
    }

    proptest! {
        #[test]
        fn find_shadows_is_monotone_in_eps(e1 in 0i64..8, e2 in 0i64..8, seed in 0u64..32) {
            let (lo, hi) = (e1.min(e2), e1.max(e2));
            let sys = dyadic(4);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let po = random_delta_po(&sys, &sys.residues(), &0, &Rat::new(1, 4), 12, &mut rng);
            let narrow = find_shadows(&po, &Rat::new(lo, 8), &sys.residues());
            let wide = find_shadows(&po, &Rat::new(hi, 8), &sys.residues());
            for y in &narrow {
                prop_assert!(wide.contains(y));
            }
        }
    }

    #[test]
    fn no_shadow_for_the_crossing_chain() {
        let sys = LadderSystem;
        let eps = Rat::new(1, 4);
        for delta in [Rat::new(1, 4), Rat::new(1, 16), Rat::new(1, 64)] {
            let g = crate::chains::ChainGraph::build(&sys, sys.sample(16), delta.clone()).unwrap();
            let chain = crate::chains::find_chain(&g, &Zero, &Two)
                .unwrap()
                .expect("crossing chain exists");
            let po = PseudoOrbit::new(sys, chain).unwrap();
            assert!(po.is_delta(&delta));
            let outcome = verify_no_shadow(&po, &eps, 16);
            assert!(outcome.report.is_pass(), "{}", outcome.report.text_block());
            assert_eq!(outcome.certificates.len(), 2);
            for cert in &outcome.certificates {
                assert!(cert.margin >= eps);
            }
        }
    }

    #[test]
    fn exact_orbit_reports_shadowed() {
        let sys = LadderSystem;
        let po = from_orbit(&sys, &S(0), 6);
        let outcome = verify_no_shadow(&po, &Rat::new(1, 4), 8);
        assert!(!outcome.report.is_pass());
        let text = outcome.report.text_block();
        assert!(text.contains("shadowing-point"), "{text}");
    }

    #[test]
    fn modulus_examples() {
        let sys = dyadic(6);
        assert_eq!(odometer_shadow_modulus(&sys, &Rat::new(1, 4)), Rat::new(1, 4));
        assert_eq!(odometer_shadow_modulus(&sys, &Rat::new(1, 5)), Rat::new(1, 8));
        assert_eq!(odometer_shadow_modulus(&sys, &Rat::new(1, 2)), Rat::new(1, 2));
        assert_eq!(odometer_shadow_modulus(&sys, &Rat::from_int(5)), Rat::new(1, 2));
        // Below the depth resolution the modulus forces exact orbits.
        assert_eq!(
            odometer_shadow_modulus(&sys, &Rat::new(1, 1000)),
            Rat::new(1, 128)
        );
    }

    #[test]
    fn induction_property_holds_for_odometer_pseudo_orbits() {
        let sys = dyadic(5);
        let delta = Rat::new(1, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let po = random_delta_po(&sys, &sys.residues(), &0, &delta, 25, &mut rng);
        assert!(check_pi_property(&po, &delta).is_pass());

        let exact = from_orbit(&sys, &7, 20);
        assert!(check_pi_property(&exact, &Rat::zero()).is_pass());
    }

    #[test]
    fn induction_property_fails_against_a_tighter_delta() {
        let sys = dyadic(4);
        // One step of size exactly 1/4: d(f(0), 3) = d(1, 3) = 1/4.
        let po = PseudoOrbit::new(sys, vec![0, 3, 4]).unwrap();
        let report = check_pi_property(&po, &Rat::new(1, 8));
        assert!(!report.is_pass());
        assert!(report.text_block().contains("(i, j) = (1, 0)"));
    }

    #[test]
    fn chain_continuity_holds_at_the_modulus() {
        let sys = dyadic(6);
        let eps = Rat::new(1, 4);
        let delta = odometer_shadow_modulus(&sys, &eps);
        let report =
            chain_continuity_check(&sys, &sys.residues(), &0, &eps, &delta, 200, 80, 42);
        assert!(report.is_pass(), "{}", report.text_block());

        // Zero delta means exact orbits: nothing can fail.
        let report =
            chain_continuity_check(&sys, &sys.residues(), &5, &eps, &Rat::zero(), 50, 40, 1);
        assert!(report.is_pass());
    }

    #[test]
    fn chain_continuity_fails_on_the_ladder_at_the_middle_fixed_point() {
        let sys = LadderSystem;
        let universe = sys.sample(8);
        let report = chain_continuity_check(
            &sys,
            &universe,
            &One,
            &Rat::new(1, 8),
            &Rat::new(1, 8),
            200,
            20,
            42,
        );
        assert!(!report.is_pass(), "{}", report.text_block());

        // Deterministic witness: drift up the t-ladder away from 1.
        let drift = PseudoOrbit::new(sys, vec![One, T(-3), T(-2), T(-1), T(0)]).unwrap();
        assert!(drift.is_delta(&Rat::new(1, 8)));
        let defect = shadow_defect(&drift, &One);
        assert!(defect.max_defect() > Rat::new(1, 8));
    }

    #[test]
    fn limit_shadow_of_an_exact_orbit_is_its_start() {
        let sys = dyadic(4);
        let po = from_orbit(&sys, &3, 12)
            .with_schedule(vec![(0, Rat::new(1, 2)), (4, Rat::new(1, 4))])
            .unwrap();
        let outcome = limit_shadow_construct(&sys, &po).unwrap();
        assert_eq!(outcome.point, 3);
        for check in &outcome.checks {
            assert!(check.orbit_defect_max.is_zero());
            assert!(check.shadow_defect_max.is_zero());
        }
    }

    #[test]
    fn limit_shadow_single_jump_lands_thirteen() {
        let sys = dyadic(4);
        // Orbit of 0 through index 9, then x_10 = 7, exact afterwards.
        let mut points: Vec<u64> = (0..10).collect();
        points.push(7);
        while points.len() < 20 {
            points.push(sys.eval(points.last().unwrap()));
        }
        let po = PseudoOrbit::new(sys.clone(), points)
            .unwrap()
            .with_schedule(vec![(0, Rat::new(1, 2)), (10, Rat::new(1, 4))])
            .unwrap();
        let outcome = limit_shadow_construct(&sys, &po).unwrap();
        assert_eq!(outcome.point, 13); // 7 - 10 mod 16
        assert_eq!(outcome.level_points, vec![0, 13]);
        let last = outcome.checks.last().unwrap();
        assert!(last.orbit_defect_max.is_zero());
        assert!(last.shadow_defect_max.is_zero());
    }

    #[test]
    fn limit_shadow_requires_a_schedule_and_honest_bounds() {
        let sys = dyadic(4);
        let bare = from_orbit(&sys, &0, 8);
        assert!(matches!(
            limit_shadow_construct(&sys, &bare),
            Err(Error::MissingSchedule)
        ));

        // Error of size 1/2 at index 4 breaks the level-2 tracking bound
        // when the schedule claims the tail from index 2 is 1/4-tracked.
        let mut points: Vec<u64> = (0..4).collect();
        points.push(7);
        points.push(8);
        let po = PseudoOrbit::new(sys.clone(), points)
            .unwrap()
            .with_schedule(vec![(0, Rat::new(1, 2)), (2, Rat::new(1, 4))])
            .unwrap();
        assert!(matches!(
            limit_shadow_construct(&sys, &po),
            Err(Error::ScheduleViolation(_))
        ));
    }

    #[test]
    fn scheduled_families_satisfy_all_bounds() {
        for depth in 4..=8u32 {
            let sys = dyadic(depth);
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + depth as u64);
            for trial in 0..5u64 {
                let start = rng.gen_range(0..sys.modulus());
                let gap = 6 + (trial as usize % 3);
                let levels: Vec<usize> = (1..=6).map(|n| n * gap).collect();
                let window = levels.last().unwrap() + gap + 4;
                let po = scheduled_limit_po(&sys, start, &levels, window, &mut rng).unwrap();
                assert!(po.verify_schedule());
                let outcome = limit_shadow_construct(&sys, &po).unwrap();
                for check in &outcome.checks {
                    let level_bound = Rat::pow2(-(check.level as i32));
                    assert!(check.orbit_defect_max <= level_bound);
                    if let Some(cauchy) = &check.cauchy_to_next {
                        assert!(cauchy <= &level_bound);
                    }
                    assert!(
                        check.shadow_defect_max <= Rat::from_int(3) * level_bound
                    );
                }
            }
        }
    }

    #[test]
    fn thick_shadowing_of_the_ergodic_demo() {
        let sys = dyadic(8);
        let bad: BTreeSet<usize> = (0..=6).map(|j| 1usize << j).collect();
        let (po, good) = ergodic_po(&sys, &0, 256, &bad, |_, intended| {
            sys.step_by(*intended, 2)
        });
        assert_eq!(good.final_density(), Rat::new(248, 255));

        let eps = Rat::new(1, 4);
        let outcome = thick_shadow_report(&po, &eps, &sys.residues());
        assert!(outcome.run.run_len >= 190);
        assert!(outcome.density.final_density() >= Rat::new(31, 32));

        // The tail-matching candidate y = f^{-65}(x_65) agrees on the whole
        // exact final segment.
        let tail_candidate = sys.step_back(po.points()[65], 65);
        let defect = shadow_defect(&po, &tail_candidate);
        assert!(defect.tail_max(65).unwrap().is_zero());
        assert!(defect.max_defect() <= eps);
    }

    #[test]
    fn thick_shadowing_of_gamma_tail() {
        let sys = pointed(4);
        let window = 20;
        let gamma = pointed_gamma(&sys, 2, window).unwrap();
        let residues: Vec<PointedPoint> = sys.inner().residues().into_iter().map(Res).collect();
        let outcome = thick_shadow_report(&gamma, &Rat::new(1, 8), &residues);
        // r - 1 tracks the tail from index 1 but misses p at index 0.
        assert_eq!(outcome.candidate, Res(1));
        assert_eq!(outcome.run.run_len, window - 1);
        assert_eq!(outcome.run.start, Some(1));
    }

    #[test]
    fn exact_orbit_agreement_is_the_full_window() {
        let sys = dyadic(4);
        let po = from_orbit(&sys, &6, 30);
        let outcome = thick_shadow_report(&po, &Rat::zero(), &sys.residues());
        assert_eq!(outcome.candidate, 6);
        assert_eq!(outcome.run.run_len, 30);
        assert_eq!(outcome.density.final_density(), Rat::one());
    }

    #[test]
    fn slimit_counterexample_passes_at_levels_two_and_three() {
        let sys = pointed(6);
        let report = slimit_counterexample(&sys, 2, 128).unwrap();
        assert!(report.is_pass(), "{}", report.text_block());
        let text = report.text_block();
        assert!(text.contains("witness e_0 = 1/4"));
        assert!(text.contains("tail-defect-min = 1/4"));

        let report = slimit_counterexample(&sys, 3, 64).unwrap();
        assert!(report.is_pass());
        assert!(report.text_block().contains("witness e_0 = 1/8"));
    }

    #[test]
    fn slimit_counterexample_flags_degenerate_windows_and_bad_levels() {
        let sys = pointed(6);
        let report = slimit_counterexample(&sys, 2, 1).unwrap();
        assert_eq!(report.status, Status::InsufficientWindow);
        assert!(slimit_counterexample(&sys, 1, 16).is_err());
        assert!(slimit_counterexample(&sys, 7, 16).is_err());
    }

    #[test]
    fn exhaustive_enumeration_at_depth_three() {
        let sys = dyadic(3);
        let eps = Rat::new(1, 4);
        let delta = odometer_shadow_modulus(&sys, &eps);
        assert_eq!(delta, Rat::new(1, 4));
        let report = exhaustive_shadow_check(&sys, &delta, &eps, 6).unwrap();
        assert!(report.is_pass(), "{}", report.text_block());
        // 8 starts, 4 mod-2-compatible successors at each of 5 steps.
        assert!(report
            .witnesses
            .iter()
            .any(|(k, v)| k == "orbits-enumerated" && v == "8192"));
    }

    #[test]
    fn exhaustive_enumeration_guard_trips() {
        let sys = dyadic(8);
        let err = exhaustive_shadow_check(&sys, &Rat::new(1, 2), &Rat::one(), 12);
        assert!(matches!(err, Err(Error::Parameter(_))));
    }
}

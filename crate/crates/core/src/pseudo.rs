//! Pseudo orbits over finite windows: exact orbits, chain and cycle
//! concatenations, ergodic perturbations, and tail analytics.
//!
//! A [`PseudoOrbit`] stores only its points; the one-step error sequence
//! `e_i = d(f(x_i), x_{i+1})` is recomputed from the points on every access,
//! so the profile can never drift from the data. Limit behaviour over a
//! finite window is expressed through a declared decaying schedule
//! `(i_n, b_n)`, meaning `e_i <= b_n` for all `i >= i_n`; the schedule is a
//! checkable claim attached to the object, never an assumption.

use std::collections::BTreeSet;

use crate::rat::Rat;
use crate::report::VerificationReport;
use crate::system::DynamicalSystem;
use crate::Error;

#[derive(Clone, Debug)]
pub struct PseudoOrbit<S: DynamicalSystem> {
    sys: S,
    points: Vec<S::Point>,
    schedule: Option<Vec<(usize, Rat)>>,
}

impl<S: DynamicalSystem> PseudoOrbit<S> {
    pub fn new(sys: S, points: Vec<S::Point>) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::EmptyInput("pseudo orbit needs at least one point"));
        }
        Ok(PseudoOrbit { sys, points, schedule: None })
    }

    /// Attaches a decaying error schedule: indices strictly increasing and
    /// inside the window, bounds nonincreasing. The claim itself is checked
    /// by [`PseudoOrbit::verify_schedule`].
    pub fn with_schedule(mut self, schedule: Vec<(usize, Rat)>) -> Result<Self, Error> {
        for w in schedule.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::ScheduleIndex(w[1].0));
            }
            if w[1].1 > w[0].1 {
                return Err(Error::ScheduleOrder);
            }
        }
        if let Some(last) = schedule.last() {
            if last.0 >= self.points.len() {
                return Err(Error::ScheduleIndex(last.0));
            }
        }
        self.schedule = Some(schedule);
        Ok(self)
    }

    pub fn system(&self) -> &S {
        &self.sys
    }

    pub fn points(&self) -> &[S::Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one point
    }

    pub fn schedule(&self) -> Option<&[(usize, Rat)]> {
        self.schedule.as_deref()
    }

    /// One-step errors `e_i = d(f(x_i), x_{i+1})`, recomputed from the points.
    pub fn errors(&self) -> Vec<Rat> {
        self.points
            .windows(2)
            .map(|w| self.sys.dist(&self.sys.eval(&w[0]), &w[1]))
            .collect()
    }

    pub fn max_error(&self) -> Rat {
        self.errors()
            .into_iter()
            .fold(Rat::zero(), |acc, e| acc.max(e))
    }

    /// Exact test for being a delta-pseudo orbit.
    pub fn is_delta(&self, delta: &Rat) -> bool {
        self.errors().iter().all(|e| e <= delta)
    }

    /// Checks the declared schedule against the recomputed errors.
    pub fn verify_schedule(&self) -> bool {
        let Some(schedule) = &self.schedule else {
            return true;
        };
        let errors = self.errors();
        schedule.iter().all(|(start, bound)| {
            errors.iter().skip(*start).all(|e| e <= bound)
        })
    }

    /// Structured text record: system id, serialized points, declared
    /// schedule if any.
    pub fn record(&self) -> String {
        let mut out = format!("system: {}\n", self.sys.id());
        let pts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        out.push_str(&format!("points: {}\n", pts.join(" ")));
        if let Some(schedule) = &self.schedule {
            let entries: Vec<String> = schedule
                .iter()
                .map(|(i, b)| format!("({i}, {b})"))
                .collect();
            out.push_str(&format!("schedule: {}\n", entries.join(" ")));
        }
        out
    }
}

/// The zero-error pseudo orbit: the exact orbit of `x` over `length` points.
pub fn from_orbit<S: DynamicalSystem>(sys: &S, x: &S::Point, length: usize) -> PseudoOrbit<S> {
    assert!(length >= 1, "window must contain at least one point");
    let seg = crate::system::orbit(sys, x, length - 1);
    PseudoOrbit::new(sys.clone(), seg.images).unwrap()
}

/// Concatenates chains in order. Junction errors between consecutive chains
/// are not capped; they show up in the error profile exactly where the
/// chains meet, and callers assert delta-boundedness separately.
pub fn concat_chains<S: DynamicalSystem>(
    sys: &S,
    chains: &[Vec<S::Point>],
) -> Result<PseudoOrbit<S>, Error> {
    if chains.is_empty() || chains.iter().any(|c| c.is_empty()) {
        return Err(Error::EmptyInput("concat_chains needs nonempty chains"));
    }
    let points: Vec<S::Point> = chains.iter().flatten().cloned().collect();
    PseudoOrbit::new(sys.clone(), points)
}

/// Concatenates cycles through a common designated point, eliding the
/// duplicated junction points. Each cycle `k` must be a `delta_k`-chain with
/// the bounds nonincreasing; the resulting window carries the verified
/// schedule `(start of cycle k, delta_k)`, so the suffix from cycle `k`
/// onward has max error at most `delta_k`.
pub fn cycles_concat<S: DynamicalSystem>(
    sys: &S,
    cycles: &[(Vec<S::Point>, Rat)],
) -> Result<PseudoOrbit<S>, Error> {
    if cycles.is_empty() {
        return Err(Error::EmptyInput("cycles_concat needs at least one cycle"));
    }
    let anchor = &cycles[0].0[0];
    for (k, (cycle, bound)) in cycles.iter().enumerate() {
        if cycle.len() < 2 || cycle.first() != cycle.last() || cycle.first() != Some(anchor) {
            return Err(Error::CycleEndpoint(k));
        }
        let as_chain = PseudoOrbit::new(sys.clone(), cycle.clone())?;
        let max = as_chain.max_error();
        if &max > bound {
            return Err(Error::CycleBound {
                index: k,
                max: max.to_string(),
                bound: bound.to_string(),
            });
        }
        if k > 0 && bound > &cycles[k - 1].1 {
            return Err(Error::ScheduleOrder);
        }
    }

    let mut points: Vec<S::Point> = vec![anchor.clone()];
    let mut schedule = Vec::with_capacity(cycles.len());
    for (cycle, bound) in cycles {
        schedule.push((points.len() - 1, bound.clone()));
        points.extend(cycle[1..].iter().cloned());
    }
    let po = PseudoOrbit::new(sys.clone(), points)?.with_schedule(schedule)?;
    if !po.verify_schedule() {
        return Err(Error::ScheduleViolation(
            "cycle suffix exceeds its declared bound".into(),
        ));
    }
    Ok(po)
}

/// Follows the exact dynamics except at `bad` indices, where the next point
/// is whatever `jump` picks. Returns the orbit together with the density
/// profile of the good transition indices.
pub fn ergodic_po<S: DynamicalSystem>(
    sys: &S,
    x: &S::Point,
    length: usize,
    bad: &BTreeSet<usize>,
    mut jump: impl FnMut(usize, &S::Point) -> S::Point,
) -> (PseudoOrbit<S>, DensityProfile) {
    assert!(length >= 2, "ergodic window needs at least two points");
    assert!(
        bad.iter().all(|&i| i + 1 < length),
        "bad indices must lie inside the transition range"
    );
    let mut points = Vec::with_capacity(length);
    points.push(x.clone());
    for i in 0..length - 1 {
        let intended = sys.eval(points.last().unwrap());
        let next = if bad.contains(&i) { jump(i, &intended) } else { intended };
        points.push(next);
    }
    let good: BTreeSet<usize> = (0..length - 1).filter(|i| !bad.contains(i)).collect();
    let profile = density_profile(&good, length - 1);
    (PseudoOrbit::new(sys.clone(), points).unwrap(), profile)
}

/// Running densities `|A ∩ [0, n)| / n` for `n = 1..=len`, all exact.
#[derive(Clone, Debug)]
pub struct DensityProfile {
    pub len: usize,
    pub members: Vec<usize>,
    pub densities: Vec<Rat>,
}

impl DensityProfile {
    pub fn final_density(&self) -> Rat {
        self.densities.last().cloned().unwrap_or_else(Rat::one)
    }
}

pub fn density_profile(a: &BTreeSet<usize>, len: usize) -> DensityProfile {
    assert!(a.iter().all(|&i| i < len), "subset must lie in [0, len)");
    let mut densities = Vec::with_capacity(len);
    let mut count = 0i64;
    for n in 1..=len {
        if a.contains(&(n - 1)) {
            count += 1;
        }
        densities.push(Rat::new(count, n as i64));
    }
    DensityProfile {
        len,
        members: a.iter().copied().collect(),
        densities,
    }
}

/// Longest run of consecutive indices inside `b`, with a witness start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub len: usize,
    pub run_len: usize,
    pub start: Option<usize>,
}

pub fn longest_run(b: &BTreeSet<usize>, len: usize) -> RunReport {
    assert!(b.iter().all(|&i| i < len), "subset must lie in [0, len)");
    let mut best = 0usize;
    let mut best_start = None;
    let mut current = 0usize;
    let mut current_start = 0usize;
    for i in 0..len {
        if b.contains(&i) {
            if current == 0 {
                current_start = i;
            }
            current += 1;
            if current > best {
                best = current;
                best_start = Some(current_start);
            }
        } else {
            current = 0;
        }
    }
    RunReport { len, run_len: best, start: best_start }
}

/// Distinct points occurring in the final `ceil(tail_fraction * L)` window
/// entries, in canonical order. Exact as an omega-limit set only for
/// eventually periodic tails whose period fits inside the tail; otherwise
/// an estimate.
pub fn omega_estimate<S: DynamicalSystem>(po: &PseudoOrbit<S>, tail_fraction: &Rat) -> Vec<S::Point> {
    assert!(
        tail_fraction > &Rat::zero() && tail_fraction <= &Rat::one(),
        "tail fraction must lie in (0, 1]"
    );
    let len = po.len();
    let tail_len: usize = (tail_fraction * &Rat::from_int(len as i64))
        .ceil_int()
        .try_into()
        .expect("tail length fits usize");
    let tail_len = tail_len.clamp(1, len);
    let tail: BTreeSet<S::Point> = po.points()[len - tail_len..].iter().cloned().collect();
    tail.into_iter().collect()
}

/// Checks the omega estimate of the tail against the known chain-recurrent
/// set, and reports the tail distances `d(x_i, CR)`: their suffix maxima
/// must be nonincreasing, and the first/peak/final values are recorded as
/// witnesses of the decay.
pub fn check_omega_in_cr<S: DynamicalSystem>(
    po: &PseudoOrbit<S>,
    tail_fraction: &Rat,
) -> Result<VerificationReport, Error> {
    let known = po.system().known_sets().ok_or(Error::NoKnownSets)?;
    let cr = &known.chain_recurrent;
    let omega = omega_estimate(po, tail_fraction);

    let mut report = VerificationReport::new(
        "pseudo.omega-in-cr",
        "omega(gamma) subset CR(f); d(x_i,CR(f)) -> 0",
    )
    .param("window", po.len())
    .param("tail-fraction", tail_fraction);

    if let Some(outside) = omega.iter().find(|p| !cr.contains(p)) {
        return Ok(report.witness("outside-CR", outside).failed());
    }

    let len = po.len();
    let tail_len: usize = (tail_fraction * &Rat::from_int(len as i64))
        .ceil_int()
        .try_into()
        .expect("tail length fits usize");
    let tail_len = tail_len.clamp(1, len);
    let start = len - tail_len;
    let dists: Vec<Rat> = po.points()[start..]
        .iter()
        .map(|x| {
            cr.iter()
                .map(|y| po.system().dist(x, y))
                .min()
                .expect("CR set is nonempty")
        })
        .collect();

    let mut suffix_max = dists.clone();
    for i in (0..suffix_max.len().saturating_sub(1)).rev() {
        suffix_max[i] = suffix_max[i].clone().max(suffix_max[i + 1].clone());
    }
    let nonincreasing = suffix_max.windows(2).all(|w| w[0] >= w[1]);

    report = report
        .param("tail-start", start)
        .witness("omega-size", omega.len())
        .witness("first-tail-distance", &dists[0])
        .witness("max-tail-distance", &suffix_max[0])
        .witness("final-tail-distance", dists.last().unwrap());
    Ok(if nonincreasing { report.passed() } else { report.failed() })
}

/// The lifted pseudo orbit of nearest chain-recurrent points, together with
/// the exact lift distances `d(x_i, CR)`. Ties go to the earliest point in
/// canonical order.
#[derive(Clone, Debug)]
pub struct CrLift<S: DynamicalSystem> {
    pub lifted: PseudoOrbit<S>,
    pub lift_dist: Vec<Rat>,
}

pub fn nearest_cr_lift<S: DynamicalSystem>(po: &PseudoOrbit<S>) -> Result<CrLift<S>, Error> {
    let known = po.system().known_sets().ok_or(Error::NoKnownSets)?;
    let cr = known.chain_recurrent;
    if cr.is_empty() {
        return Err(Error::NoKnownSets);
    }
    let mut lifted = Vec::with_capacity(po.len());
    let mut lift_dist = Vec::with_capacity(po.len());
    for x in po.points() {
        let mut best = cr[0].clone();
        let mut best_d = po.system().dist(x, &best);
        for y in &cr[1..] {
            let d = po.system().dist(x, y);
            if d < best_d {
                best = y.clone();
                best_d = d;
            }
        }
        lifted.push(best);
        lift_dist.push(best_d);
    }
    Ok(CrLift {
        lifted: PseudoOrbit::new(po.system().clone(), lifted)?,
        lift_dist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{LadderPoint, LadderSystem, OdometerSystem};
    use proptest::prelude::*;
    use LadderPoint::{One, Two, Zero, S, T};

    fn dyadic(depth: u32) -> OdometerSystem {
        OdometerSystem::dyadic(depth).unwrap()
    }

    #[test]
    fn exact_orbits_have_zero_errors() {
        let sys = dyadic(4);
        let po = from_orbit(&sys, &0, 5);
        assert_eq!(po.points(), &[0, 1, 2, 3, 4]);
        assert!(po.errors().iter().all(|e| e.is_zero()));

        let ladder = LadderSystem;
        assert!(from_orbit(&ladder, &One, 3).max_error().is_zero());
        let climb = from_orbit(&ladder, &S(0), 3);
        assert_eq!(climb.points(), &[S(0), S(1), S(2)]);
        assert!(climb.max_error().is_zero());
    }

    #[test]
    fn errors_recompute_bit_exactly() {
        let sys = LadderSystem;
        let po = PseudoOrbit::new(sys, vec![Zero, S(-2), S(-1), S(0), T(0)]).unwrap();
        // Independent recomputation, straight from the definition.
        let manual: Vec<Rat> = po
            .points()
            .windows(2)
            .map(|w| sys.dist(&sys.eval(&w[0]), &w[1]))
            .collect();
        assert_eq!(po.errors(), manual);
        assert_eq!(po.errors(), po.errors());
    }

    #[test]
    fn concat_chains_records_junction_errors() {
        let sys = dyadic(4);
        let po = concat_chains(&sys, &[vec![0, 1, 2, 3], vec![9, 10, 11, 12]]).unwrap();
        let errors = po.errors();
        assert_eq!(errors.len(), 7);
        assert_eq!(errors[3], Rat::new(1, 2)); // d(f(3), 9) = d(4, 9)
        for (i, e) in errors.iter().enumerate() {
            if i != 3 {
                assert!(e.is_zero());
            }
        }
    }

    #[test]
    fn concat_of_one_chain_is_identity() {
        let sys = dyadic(3);
        let chain = vec![0, 1, 5, 6];
        let single = concat_chains(&sys, std::slice::from_ref(&chain)).unwrap();
        let direct = PseudoOrbit::new(sys, chain).unwrap();
        assert_eq!(single.points(), direct.points());
        assert_eq!(single.errors(), direct.errors());
    }

    #[test]
    fn concat_chains_on_the_ladder() {
        let sys = LadderSystem;
        let po = concat_chains(
            &sys,
            &[vec![Zero, S(-2), S(-1), S(0)], vec![S(1), S(2)]],
        )
        .unwrap();
        let errors = po.errors();
        assert_eq!(errors[0], Rat::new(1, 5)); // d(f(0), s_-2) = s_-2
        assert_eq!(errors[3], Rat::zero()); // junction: d(f(s_0), s_1) = 0
        assert!(concat_chains(&sys, &[]).is_err());
    }

    proptest! {
        #[test]
        fn concat_length_is_sum_of_chain_lengths(
            chains in prop::collection::vec(prop::collection::vec(0u64..16, 1..5), 1..4)
        ) {
            let sys = dyadic(4);
            let po = concat_chains(&sys, &chains).unwrap();
            let total: usize = chains.iter().map(|c| c.len()).sum();
            prop_assert_eq!(po.len(), total);
            // Interior errors match the chains' own profiles.
            let mut offset = 0;
            let errors = po.errors();
            for chain in &chains {
                let own = PseudoOrbit::new(sys.clone(), chain.clone()).unwrap();
                for (i, e) in own.errors().iter().enumerate() {
                    prop_assert_eq!(&errors[offset + i], e);
                }
                offset += chain.len();
            }
        }
    }

    #[test]
    fn cycles_concat_through_the_upper_fixed_point() {
        let sys = LadderSystem;
        let cycles = vec![
            (vec![Two, T(3), T(4), Two], Rat::new(1, 9)),
            (vec![Two, T(5), T(6), Two], Rat::new(1, 33)),
        ];
        let po = cycles_concat(&sys, &cycles).unwrap();
        assert_eq!(po.points(), &[Two, T(3), T(4), Two, T(5), T(6), Two]);
        let errors = po.errors();
        assert_eq!(errors[0], Rat::new(1, 9)); // d(f(2), t_3) = 2 - t_3
        assert_eq!(errors[1], Rat::zero());
        assert_eq!(errors[2], Rat::new(1, 33)); // d(t_5, 2)
        assert_eq!(errors[3], Rat::new(1, 33)); // d(f(2), t_5)
        assert_eq!(errors[4], Rat::zero());
        assert_eq!(errors[5], Rat::new(1, 129)); // d(t_7, 2)
        assert_eq!(po.schedule().unwrap(), &[(0, Rat::new(1, 9)), (3, Rat::new(1, 33))]);
        assert!(po.verify_schedule());
    }

    #[test]
    fn cycles_concat_suffix_bound_holds_per_cycle() {
        let sys = LadderSystem;
        let cycles: Vec<(Vec<LadderPoint>, Rat)> = (1..=4)
            .map(|k| {
                let n = 2 * k + 1;
                (
                    vec![Two, T(n), T(n + 1), Two],
                    Rat::from_big(1.into(), (num_bigint::BigInt::from(1) << (n as usize)) + 1),
                )
            })
            .collect();
        let po = cycles_concat(&sys, &cycles).unwrap();
        let errors = po.errors();
        for (start, bound) in po.schedule().unwrap() {
            assert!(errors.iter().skip(*start).all(|e| e <= bound));
        }
    }

    #[test]
    fn trivial_and_exact_cycles() {
        let ladder = LadderSystem;
        let po = cycles_concat(
            &ladder,
            &[(vec![One, One], Rat::zero()), (vec![One, One], Rat::zero())],
        )
        .unwrap();
        assert!(po.max_error().is_zero());

        let sys = dyadic(3);
        let mut full: Vec<u64> = (0..8).collect();
        full.push(0);
        let po = cycles_concat(&sys, &[(full, Rat::zero())]).unwrap();
        assert!(po.max_error().is_zero());
        assert_eq!(po.len(), 9);
    }

    #[test]
    fn cycles_concat_rejects_bad_input() {
        let sys = LadderSystem;
        // Endpoint mismatch.
        assert!(matches!(
            cycles_concat(&sys, &[(vec![Two, T(3), One], Rat::one())]),
            Err(Error::CycleEndpoint(0))
        ));
        // Declared bound violated: the closing error of (2, t_0, 2) is
        // d(t_1, 2) = 1/3 and the opening error is 2 - t_0 = 1/2.
        assert!(matches!(
            cycles_concat(&sys, &[(vec![Two, T(0), Two], Rat::new(1, 3))]),
            Err(Error::CycleBound { .. })
        ));
        // Bounds must be nonincreasing.
        assert!(matches!(
            cycles_concat(
                &sys,
                &[
                    (vec![Two, T(5), Two], Rat::new(1, 33)),
                    (vec![Two, T(3), Two], Rat::new(1, 9)),
                ]
            ),
            Err(Error::ScheduleOrder)
        ));
    }

    #[test]
    fn ergodic_po_density_counts() {
        let sys = dyadic(8);
        let bad: BTreeSet<usize> = (0..=6).map(|j| 1usize << j).collect();
        let (po, profile) = ergodic_po(&sys, &0, 256, &bad, |_, intended| {
            sys.step_by(*intended, 2)
        });
        assert_eq!(po.len(), 256);
        assert_eq!(profile.final_density(), Rat::new(248, 255));

        let (exact, profile) = ergodic_po(&sys, &0, 64, &BTreeSet::new(), |_, p| *p);
        assert!(exact.max_error().is_zero());
        assert!(profile.densities.iter().all(|d| d == &Rat::one()));

        let all: BTreeSet<usize> = (0..9).collect();
        let (_, profile) = ergodic_po(&sys, &0, 10, &all, |_, intended| {
            sys.step_by(*intended, 1)
        });
        assert_eq!(profile.final_density(), Rat::zero());
    }

    #[test]
    fn density_profile_examples() {
        let full: BTreeSet<usize> = (0..10).collect();
        let p = density_profile(&full, 10);
        assert!(p.densities.iter().all(|d| d == &Rat::one()));

        let even: BTreeSet<usize> = (0..10).filter(|i| i % 2 == 0).collect();
        assert_eq!(density_profile(&even, 10).final_density(), Rat::new(1, 2));

        let powers: BTreeSet<usize> = (0..8).map(|j| 1usize << j).collect();
        let complement: BTreeSet<usize> = (0..256).filter(|i| !powers.contains(i)).collect();
        let p = density_profile(&complement, 256);
        assert_eq!(p.final_density(), Rat::new(31, 32));
    }

    #[test]
    fn longest_run_examples() {
        let full: BTreeSet<usize> = (0..12).collect();
        assert_eq!(longest_run(&full, 12).run_len, 12);

        let b: BTreeSet<usize> = [0, 1, 2, 5, 6, 7, 8].into_iter().collect();
        let run = longest_run(&b, 10);
        assert_eq!(run.run_len, 4);
        assert_eq!(run.start, Some(5));

        let empty = BTreeSet::new();
        let run = longest_run(&empty, 5);
        assert_eq!(run.run_len, 0);
        assert_eq!(run.start, None);
    }

    proptest! {
        // Oracle: quadratic scan over all (start, len) windows.
        #[test]
        fn longest_run_is_maximal(bits in prop::collection::vec(any::<bool>(), 0..64)) {
            let b: BTreeSet<usize> = bits.iter().enumerate().filter(|(_, x)| **x).map(|(i, _)| i).collect();
            let len = bits.len();
            let reported = longest_run(&b, len);
            let mut best = 0;
            for start in 0..len {
                for end in start..len {
                    if (start..=end).all(|i| b.contains(&i)) {
                        best = best.max(end - start + 1);
                    }
                }
            }
            prop_assert_eq!(reported.run_len, best);
            if let Some(s) = reported.start {
                prop_assert!((s..s + reported.run_len).all(|i| b.contains(&i)));
            }
        }
    }

    #[test]
    fn omega_estimate_of_periodic_tail_is_everything() {
        let sys = dyadic(3);
        let po = from_orbit(&sys, &5, 2 * 8 + 1);
        let omega = omega_estimate(&po, &Rat::new(1, 2));
        assert_eq!(omega, (0..8).collect::<Vec<u64>>());

        // Same through the pointed window: the tail is a full period of
        // the quotient cycle, so the estimate is the whole residue set and
        // lands inside the known chain-recurrent set.
        use crate::systems::{pointed_gamma, PointedOdometer, PointedPoint};
        let sys = PointedOdometer::dyadic(3).unwrap();
        let gamma = pointed_gamma(&sys, 2, 17).unwrap();
        let omega = omega_estimate(&gamma, &Rat::new(1, 2));
        assert_eq!(
            omega,
            (0..8).map(PointedPoint::Res).collect::<Vec<_>>()
        );
        let report = check_omega_in_cr(&gamma, &Rat::new(1, 2)).unwrap();
        assert!(report.is_pass(), "{}", report.text_block());
    }

    #[test]
    fn omega_estimate_of_fixed_tails() {
        let ladder = LadderSystem;
        let po = PseudoOrbit::new(ladder, vec![Zero, T(5), T(6), Two, Two, Two]).unwrap();
        assert_eq!(omega_estimate(&po, &Rat::new(1, 2)), vec![Two]);
        let fixed = from_orbit(&ladder, &One, 4);
        assert_eq!(omega_estimate(&fixed, &Rat::one()), vec![One]);
    }

    #[test]
    fn omega_in_cr_passes_for_constructed_families() {
        // Trailing trivial cycles park the tail at the fixed point, where
        // the tail-occurrence estimate is exact.
        let ladder = LadderSystem;
        let cycles = vec![
            (vec![Two, T(3), T(4), Two], Rat::new(1, 9)),
            (vec![Two, T(5), T(6), Two], Rat::new(1, 33)),
            (vec![Two, Two], Rat::zero()),
            (vec![Two, Two], Rat::zero()),
            (vec![Two, Two], Rat::zero()),
        ];
        let po = cycles_concat(&ladder, &cycles).unwrap();
        let report = check_omega_in_cr(&po, &Rat::new(1, 4)).unwrap();
        assert!(report.is_pass(), "{}", report.text_block());

        let sys = dyadic(3);
        let po = from_orbit(&sys, &0, 16);
        assert!(check_omega_in_cr(&po, &Rat::new(1, 2)).unwrap().is_pass());
    }

    #[test]
    fn nearest_cr_lift_on_the_ladder() {
        let sys = LadderSystem;
        let po = PseudoOrbit::new(sys, vec![Zero, S(-2), S(-1), S(0), S(1)]).unwrap();
        let lift = nearest_cr_lift(&po).unwrap();
        // s_0 = 1/2 ties between 0 and 1; canonical order picks 0.
        assert_eq!(lift.lifted.points(), &[Zero, Zero, Zero, Zero, One]);
        assert_eq!(
            lift.lift_dist,
            vec![
                Rat::zero(),
                Rat::new(1, 5),
                Rat::new(1, 3),
                Rat::new(1, 2),
                Rat::new(1, 3)
            ]
        );
    }

    #[test]
    fn lifted_errors_obey_the_triangle_decomposition() {
        // e'_i <= d(f(y_i), f(x_i)) + e_i + d(x_{i+1}, y_{i+1}), checked
        // term by term against the lift distances.
        let sys = LadderSystem;
        let po = PseudoOrbit::new(sys, vec![Zero, S(-2), S(-1), S(0), S(1), T(-1)]).unwrap();
        let lift = nearest_cr_lift(&po).unwrap();
        let errors = po.errors();
        let lifted_errors = lift.lifted.errors();
        for i in 0..lifted_errors.len() {
            let map_spread = sys.dist(
                &sys.eval(&lift.lifted.points()[i]),
                &sys.eval(&po.points()[i]),
            );
            let bound = &(&map_spread + &errors[i]) + &lift.lift_dist[i + 1];
            assert!(lifted_errors[i] <= bound, "index {i}");
        }
    }

    #[test]
    fn nearest_cr_lift_is_identity_inside_cr() {
        let ladder = LadderSystem;
        let po = PseudoOrbit::new(ladder, vec![Zero, One, Two]).unwrap();
        let lift = nearest_cr_lift(&po).unwrap();
        assert_eq!(lift.lifted.points(), po.points());

        let sys = dyadic(3);
        let po = concat_chains(&sys, &[vec![0, 1], vec![5, 6]]).unwrap();
        let lift = nearest_cr_lift(&po).unwrap();
        assert_eq!(lift.lifted.points(), po.points());
        assert!(lift.lift_dist.iter().all(|d| d.is_zero()));
    }

    proptest! {
        // Minimality oracle: the lift distance is the minimum over the CR set.
        #[test]
        fn lift_distance_is_minimal(indices in prop::collection::vec(-8i64..8, 1..8)) {
            let sys = LadderSystem;
            let points: Vec<LadderPoint> = indices.into_iter().map(S).collect();
            let po = PseudoOrbit::new(sys, points).unwrap();
            let lift = nearest_cr_lift(&po).unwrap();
            let cr = sys.known_sets().unwrap().chain_recurrent;
            for (x, d) in po.points().iter().zip(&lift.lift_dist) {
                let min = cr.iter().map(|y| sys.dist(x, y)).min().unwrap();
                prop_assert_eq!(d.clone(), min);
            }
        }
    }

    #[test]
    fn schedule_validation() {
        let sys = dyadic(4);
        let po = from_orbit(&sys, &0, 10);
        assert!(po
            .clone()
            .with_schedule(vec![(0, Rat::new(1, 2)), (4, Rat::new(1, 4))])
            .is_ok());
        assert!(matches!(
            po.clone().with_schedule(vec![(4, Rat::new(1, 4)), (2, Rat::new(1, 8))]),
            Err(Error::ScheduleIndex(2))
        ));
        assert!(matches!(
            po.clone().with_schedule(vec![(0, Rat::new(1, 4)), (4, Rat::new(1, 2))]),
            Err(Error::ScheduleOrder)
        ));
        assert!(matches!(
            po.with_schedule(vec![(99, Rat::one())]),
            Err(Error::ScheduleIndex(99))
        ));
    }

    #[test]
    fn record_format() {
        let sys = dyadic(3);
        let po = from_orbit(&sys, &0, 3)
            .with_schedule(vec![(0, Rat::new(1, 2))])
            .unwrap();
        let record = po.record();
        assert!(record.contains("system: odometer[2,4,8]"));
        assert!(record.contains("points: 0 1 2"));
        assert!(record.contains("schedule: (0, 1/2)"));
    }
}

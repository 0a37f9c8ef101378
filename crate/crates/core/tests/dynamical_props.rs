use std::collections::BTreeSet;

use lattice_effects::dynamical::{
    colim, commuting_square_check, filtration, project_at, Behavior, TimedDescription, Trajectory, TrajectoryLattice,
};
use lattice_effects::galois::SearchMode;
use lattice_effects::order::Budget;
use lattice_effects::random;
use proptest::prelude::*;

/// Earliest activation time of each node, by relaxation:
/// `t(i) = min over rules (max over the rule's set of t(j)) + delay`.
fn activation_times(td: &TimedDescription) -> Vec<Option<usize>> {
    let n = td.ground().len();
    let mut t: Vec<Option<usize>> = vec![None; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            for r in &td.rules()[i] {
                let ready = (0..n)
                    .filter(|&j| r.set >> j & 1 == 1)
                    .try_fold(0usize, |acc, j| t[j].map(|tj| acc.max(tj)));
                if let Some(start) = ready {
                    let fire = start + r.delay as usize;
                    if t[i].is_none_or(|old| fire < old) {
                        t[i] = Some(fire);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return t;
        }
    }
}

fn timed(seed: u64, n: usize, d_max: u32) -> TimedDescription {
    random::timed_description(&mut random::rng(seed), n, 3, d_max)
}

proptest! {
    #[test]
    fn eval_matches_activation_times(seed in any::<u64>(), n in 1usize..=5, d_max in 0u32..=3) {
        let td = timed(seed, n, d_max);
        let horizon = td.stabilization_bound();
        let times = activation_times(&td);
        let eval = td.eval(horizon).unwrap();
        for (k, &state) in eval.states.iter().enumerate() {
            let expected = (0..n).filter(|&i| times[i].is_some_and(|t| t <= k)).fold(0u32, |m, i| m | 1 << i);
            prop_assert_eq!(state, expected);
        }
        prop_assert!(times.iter().flatten().all(|&t| t <= horizon));
    }

    #[test]
    fn square_commutes(seed in any::<u64>(), n in 1usize..=5, d_max in 0u32..=3) {
        let td = timed(seed, n, d_max);
        let report = commuting_square_check(&td).unwrap();
        prop_assert!(report.pass);
        let longer = td.eval(td.stabilization_bound() + 4).unwrap();
        prop_assert_eq!(colim(&longer), report.colim_eval);
    }

    #[test]
    fn aggregation_drops_delays(seed in any::<u64>(), n in 1usize..=5, d_max in 0u32..=3) {
        let td = timed(seed, n, d_max);
        let agg = td.agg(td.stabilization_bound()).unwrap();
        let untimed = td.zero_delays().interpret().unwrap();
        prop_assert_eq!(agg.images(), untimed.images());
    }

    #[test]
    fn timed_systems_are_closure_operators(seed in any::<u64>(), n in 1usize..=2, horizon in 0usize..=3, d_max in 0u32..=3) {
        let td = timed(seed, n, d_max);
        let lattice = TrajectoryLattice::new(random::labels("n", n), horizon, &Budget::default()).unwrap();
        let op = lattice.operator(&td).unwrap();
        for (k, t) in lattice.trajectories.iter().enumerate() {
            prop_assert!(t.is_monotone());
            prop_assert!(t.leq(&lattice.trajectories[op.apply(k)]));
        }
    }

    #[test]
    fn colim_preserves_joins(a in proptest::collection::vec(0u32..32, 4), b in proptest::collection::vec(0u32..32, 4)) {
        let close = |v: Vec<u32>| Trajectory { states: v.iter().scan(0, |acc, &x| { *acc |= x; Some(*acc) }).collect() };
        let (a, b) = (close(a), close(b));
        prop_assert_eq!(colim(&a.join(&b)), colim(&a) | colim(&b));
    }

    #[test]
    fn filtrations_are_closures(sizes in proptest::collection::vec(1usize..4, 1..4), picks in proptest::collection::vec(any::<u64>(), 0..6)) {
        let behavior: Behavior = picks
            .iter()
            .map(|&x| sizes.iter().scan(x, |r, &k| { let c = (*r % k as u64) as usize; *r /= k as u64; Some(c) }).collect())
            .collect();
        let layers = filtration(&sizes, &behavior).unwrap();
        for (i, layer) in layers.iter().enumerate() {
            prop_assert!(behavior.is_subset(layer));
            prop_assert_eq!(&filtration(&sizes, layer).unwrap()[i], layer);
        }
        let all: BTreeSet<Vec<usize>> = layers.iter().skip(1).fold(layers[0].clone(), |acc, l| acc.intersection(l).cloned().collect());
        prop_assert!(behavior.is_subset(&all));
    }
}

#[test]
fn projections_hide_no_effects() {
    for n in 1..=3 {
        for horizon in 0..=3 {
            let ground = random::labels("n", n);
            let lattice = TrajectoryLattice::new(ground.clone(), horizon, &Budget::default()).unwrap();
            for i in 0..=horizon {
                let v = project_at(&lattice, ground.clone(), i).unwrap();
                assert!(v.detect_effects(SearchMode::Exhaustive, &Budget::default()).unwrap().is_empty());
            }
        }
    }
}

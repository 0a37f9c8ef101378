use lattice_effects::contagion::{merge, threshold_description, Description};
use lattice_effects::operators::closure_join;
use lattice_effects::random;
use lattice_effects::subset::Mask;
use proptest::prelude::*;

/// Fires nodes one at a time in the given order until nothing changes.
fn asynchronous(d: &Description, initial: Mask, order: &[usize]) -> Mask {
    let mut state = initial;
    loop {
        let before = state;
        for &i in order {
            if d.rules()[i].iter().any(|&r| r & !state == 0) {
                state |= 1 << i;
            }
        }
        if state == before {
            return state;
        }
    }
}

/// Least fixed point above `initial` as the intersection of all fixed points.
fn brute_closure(d: &Description, initial: Mask) -> Mask {
    let n = d.ground().len();
    (0..1u32 << n)
        .filter(|&s| s & initial == initial && d.step(s) == s)
        .fold((1 << n) - 1, |acc, s| acc & s)
}

proptest! {
    #[test]
    fn cascades_stabilize_within_ground_size(seed in any::<u64>(), n in 1usize..=6) {
        let d = random::description(&mut random::rng(seed), n, 3);
        let trace = d.cascade_trace(0);
        prop_assert!(trace.converged_at <= n);
        prop_assert_eq!(d.step(trace.last()), trace.last());
        prop_assert!(trace.states.windows(2).all(|w| w[0] & !w[1] == 0));
    }

    #[test]
    fn closure_is_least_fixed_point(seed in any::<u64>(), n in 1usize..=5, init in any::<u32>()) {
        let d = random::description(&mut random::rng(seed), n, 3);
        let init = init & ((1 << n) - 1);
        prop_assert_eq!(d.closure(init), brute_closure(&d, init));
        prop_assert_eq!(d.phenome(), brute_closure(&d, 0));
    }

    #[test]
    fn merge_matches_operator_join(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = random::rng(seed);
        let d1 = random::description(&mut rng, n, 3);
        let d2 = random::description(&mut rng, n, 3);
        let merged = merge(&d1, &d2).unwrap().interpret().unwrap();
        let joined = closure_join(&d1.interpret().unwrap(), &d2.interpret().unwrap()).unwrap();
        prop_assert_eq!(merged.images(), joined.images());
    }

    #[test]
    fn merged_phenome_contains_both(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = random::rng(seed);
        let d1 = random::description(&mut rng, n, 3);
        let d2 = random::description(&mut rng, n, 3);
        let both = merge(&d1, &d2).unwrap().phenome();
        let separate = d1.phenome() | d2.phenome();
        prop_assert_eq!(both & separate, separate);
        // the merged cascade is the closure of the union under both rule sets
        prop_assert_eq!(both, brute_closure(&merge(&d1, &d2).unwrap(), separate));
    }

    #[test]
    fn firing_order_is_irrelevant(seed in any::<u64>(), n in 1usize..=6, init in any::<u32>(), shift in 0usize..6) {
        let d = random::description(&mut random::rng(seed), n, 3);
        let init = init & ((1 << n) - 1);
        let mut order: Vec<usize> = (0..n).collect();
        order.rotate_left(shift % n);
        order.reverse();
        prop_assert_eq!(asynchronous(&d, init, &order), d.closure(init));
    }
}

#[test]
fn directed_chain_preserves_unions() {
    for n in 1..=6 {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        let thresholds = vec![1; n];
        let d = threshold_description(random::labels("c", n), &edges, &thresholds).unwrap();
        for s in 0..1u32 << n {
            for t in 0..1u32 << n {
                assert_eq!(d.closure(s | t), d.closure(s) | d.closure(t));
            }
        }
    }
}

#[test]
fn two_node_cascade() {
    let ab = vec!["A".to_string(), "B".to_string()];
    let s1 = threshold_description(ab.clone(), &[(0, 1), (1, 0)], &[2, 1]).unwrap();
    let s2 = threshold_description(ab, &[(0, 1), (1, 0)], &[0, 2]).unwrap();
    assert_eq!((s1.phenome(), s2.phenome()), (0b00, 0b01));
    let both = merge(&s1, &s2).unwrap();
    assert_eq!(both.cascade_trace(0).states, vec![0b00, 0b01, 0b11]);
}

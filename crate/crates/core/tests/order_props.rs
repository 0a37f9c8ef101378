use std::sync::Arc;

use lattice_effects::order::{map_space, Budget, Poset, Preorder};
use lattice_effects::random;
use proptest::prelude::*;

/// Least upper bound by scanning every element.
fn brute_join(p: &Poset, x: usize, y: usize) -> Option<usize> {
    let upper: Vec<usize> = p.elements().filter(|&u| p.leq(x, u) && p.leq(y, u)).collect();
    let least: Vec<usize> = upper.iter().copied().filter(|&u| upper.iter().all(|&v| p.leq(u, v))).collect();
    match least.as_slice() {
        [u] => Some(*u),
        _ => None,
    }
}

fn brute_meet(p: &Poset, x: usize, y: usize) -> Option<usize> {
    let lower: Vec<usize> = p.elements().filter(|&u| p.leq(u, x) && p.leq(u, y)).collect();
    let greatest: Vec<usize> = lower.iter().copied().filter(|&u| lower.iter().all(|&v| p.leq(v, u))).collect();
    match greatest.as_slice() {
        [u] => Some(*u),
        _ => None,
    }
}

fn any_poset() -> impl Strategy<Value = Poset> {
    (any::<u64>(), 1usize..9, 0.1f64..0.7).prop_map(|(seed, n, d)| random::poset(&mut random::rng(seed), n, d))
}

fn any_lattice() -> impl Strategy<Value = Poset> {
    any::<u64>().prop_map(|seed| random::lattice(&mut random::rng(seed), 3))
}

proptest! {
    #[test]
    fn join_and_meet_match_brute_force(p in any_poset()) {
        for x in p.elements() {
            for y in p.elements() {
                prop_assert_eq!(p.join(x, y), brute_join(&p, x, y));
                prop_assert_eq!(p.meet(x, y), brute_meet(&p, x, y));
            }
        }
    }

    #[test]
    fn join_laws(p in any_lattice()) {
        for x in p.elements() {
            prop_assert_eq!(p.join(x, x), Some(x));
            for y in p.elements() {
                prop_assert_eq!(p.join(x, y), p.join(y, x));
                prop_assert_eq!(p.join(x, y) == Some(y), p.leq(x, y));
                for z in p.elements() {
                    let left = p.join(x, y).and_then(|xy| p.join(xy, z));
                    let right = p.join(y, z).and_then(|yz| p.join(x, yz));
                    prop_assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn hasse_cover_regenerates_the_order(p in any_poset()) {
        let rebuilt = Poset::from_generators(p.labels(), &p.hasse_cover()).unwrap();
        prop_assert_eq!(&rebuilt, &p);
        for (x, y) in p.hasse_cover() {
            prop_assert!(p.lt(x, y));
            prop_assert!(!p.elements().any(|z| p.lt(x, z) && p.lt(z, y)));
        }
    }

    #[test]
    fn cocomplete_means_bottom_and_pairwise_joins(p in any_poset()) {
        let expected = p.elements().any(|b| p.elements().all(|x| p.leq(b, x)))
            && p.elements().all(|x| p.elements().all(|y| brute_join(&p, x, y).is_some()));
        prop_assert_eq!(p.is_finitely_cocomplete(), expected);
    }

    #[test]
    fn cycles_are_never_cocomplete(seed in any::<u64>(), n in 2usize..7) {
        // merge two points of a random poset into a cycle
        let p = random::poset(&mut random::rng(seed), n, 0.4);
        let mut pairs = p.hasse_cover();
        pairs.push((0, 1));
        pairs.push((1, 0));
        let cyclic = Preorder::from_generators(p.labels(), &pairs).unwrap();
        prop_assert!(cyclic.antisymmetry_witness().is_some());
        prop_assert!(!cyclic.is_finitely_cocomplete());
    }

    #[test]
    fn map_space_matches_brute_force(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut rng = random::rng(seed);
        let dom = random::poset(&mut rng, n, 0.5);
        let cod = random::poset(&mut rng, m, 0.5);
        let space = map_space(&dom, &cod, &Budget::default()).unwrap();
        // every function, as a base-m number
        let mut monotone = Vec::new();
        for code in 0..m.pow(n as u32) {
            let f: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
            if dom.elements().all(|x| dom.elements().all(|y| !dom.leq(x, y) || cod.leq(f[x], f[y]))) {
                monotone.push(f);
            }
        }
        let mut found = space.maps.clone();
        found.sort();
        monotone.sort();
        prop_assert_eq!(found, monotone);
        let pre = &space.preorder;
        for a in pre.elements() {
            prop_assert!(pre.leq(a, a));
            for b in pre.elements() {
                for c in pre.elements() {
                    prop_assert!(!(pre.leq(a, b) && pre.leq(b, c)) || pre.leq(a, c));
                }
            }
        }
    }
}

#[test]
fn powerset_of_three_has_twelve_covers() {
    let p = Poset::powerset(vec!["A".into(), "B".into(), "C".into()]).unwrap();
    // covers of the cube: pairs differing in one bit
    let mut oracle = 0;
    for x in 0..8u32 {
        for y in 0..8u32 {
            if x & !y == 0 && (y ^ x).count_ones() == 1 {
                oracle += 1;
            }
        }
    }
    assert_eq!(p.hasse_cover().len(), oracle);
    assert_eq!(oracle, 12);
}

#[test]
fn monotone_maps_compose() {
    let mut rng = random::rng(9);
    for _ in 0..20 {
        let a = Arc::new(random::poset(&mut rng, 5, 0.4));
        let b = Arc::new(random::poset(&mut rng, 4, 0.4));
        let c = Arc::new(random::poset(&mut rng, 4, 0.4));
        let f = random::monotone_map(&mut rng, a.clone(), b.clone());
        let g = random::monotone_map(&mut rng, b, c);
        let h = g.after(&f).unwrap();
        for x in a.elements() {
            assert_eq!(h.apply(x), g.apply(f.apply(x)));
        }
    }
}

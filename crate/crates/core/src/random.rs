//! Seeded generators for descriptions, posets and monotone maps.
//!
//! Everything draws from a caller-supplied [`ChaCha8Rng`], so a seed fixes
//! the output on every platform.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contagion::Description;
use crate::dynamical::{TimedDescription, TimedRule};
use crate::order::{MonotoneMap, Poset};
use crate::subset::{self, Mask};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Uniform in `0..n`.
pub fn index(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.random_range(0..n)
}

/// A subset where each of `width` members appears with probability `p`.
pub fn subset_mask(rng: &mut ChaCha8Rng, width: usize, p: f64) -> Mask {
    (0..width).filter(|_| rng.random_bool(p)).fold(0, |m, i| m | 1 << i)
}

/// Up to `max_rules` rules per node, each a sparse random subset.
pub fn description(rng: &mut ChaCha8Rng, n: usize, max_rules: usize) -> Description {
    let rules = (0..n)
        .map(|_| {
            let k = rng.random_range(0..=max_rules);
            (0..k).map(|_| subset_mask(rng, n, 0.3)).collect()
        })
        .collect();
    Description::new(labels("n", n), rules).expect("masks within the ground set")
}

pub fn timed_description(rng: &mut ChaCha8Rng, n: usize, max_rules: usize, d_max: u32) -> TimedDescription {
    let rules = (0..n)
        .map(|_| {
            let k = rng.random_range(0..=max_rules);
            (0..k)
                .map(|_| TimedRule { set: subset_mask(rng, n, 0.3), delay: rng.random_range(0..=d_max) })
                .collect()
        })
        .collect();
    TimedDescription::new(labels("n", n), rules, Some(d_max)).expect("valid timed rules")
}

/// A random partial order: `i < j` is proposed with probability `density`
/// for `i < j` as integers, then closed transitively.
pub fn poset(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Poset {
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.random_bool(density)).collect();
    Poset::from_generators(labels("p", n), &pairs).expect("acyclic generators")
}

/// A random Moore family on `width` points, as a lattice under inclusion.
pub fn lattice(rng: &mut ChaCha8Rng, width: usize) -> Poset {
    let full = subset::full_mask(width);
    let mut family: Vec<Mask> = (0..=full).filter(|_| rng.random_bool(0.4)).collect();
    family.push(full);
    loop {
        let before = family.len();
        let meets: Vec<Mask> = family.iter().flat_map(|&a| family.iter().map(move |&b| a & b)).collect();
        family.extend(meets);
        family.sort_unstable();
        family.dedup();
        if family.len() == before {
            break;
        }
    }
    let ground = labels("x", width);
    let members: Vec<usize> = family.iter().map(|&m| m as usize).collect();
    Poset::powerset(ground).and_then(|ps| ps.induced(&members)).expect("non-empty family")
}

/// A uniformly built monotone map: images are chosen along a linear
/// extension among the values above everything already forced.
pub fn monotone_map(rng: &mut ChaCha8Rng, domain: Arc<Poset>, codomain: Arc<Poset>) -> MonotoneMap {
    let order = domain.linear_extension();
    'attempt: for _ in 0..16 {
        let mut images = vec![usize::MAX; domain.len()];
        for &x in &order {
            let candidates: Vec<usize> = codomain
                .elements()
                .filter(|&y| order.iter().take_while(|&&z| z != x).all(|&z| !domain.leq(z, x) || codomain.leq(images[z], y)))
                .collect();
            match candidates.choose(rng) {
                Some(&y) => images[x] = y,
                None => continue 'attempt,
            }
        }
        return MonotoneMap::new(domain, codomain, images).expect("monotone by construction");
    }
    MonotoneMap::from_fn(domain, codomain, |_| 0).expect("constant maps are monotone")
}

//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use lattice_effects::contagion::{phenome_veil, threshold_description, zoom_in_veil};
use lattice_effects::galois::{stock, Veil};
use lattice_effects::order::Poset;
use lattice_effects::random;

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    random::labels(prefix, n)
}

pub fn ab() -> Vec<String> {
    vec!["A".to_string(), "B".to_string()]
}

/// The directed chain `c0 → c1 → …` with every threshold 1.
pub fn chain_description(n: usize) -> lattice_effects::contagion::Description {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    threshold_description(labels("c", n), &edges, &vec![1; n]).unwrap()
}

/// Every ready-made veil at the sizes the suite exercises, by name.
pub fn stock_veils() -> Vec<(String, Veil)> {
    let mut out = Vec::new();
    for n in 0..=3 {
        out.push((format!("contagion phenome |Σ|={n}"), phenome_veil(labels("n", n)).unwrap().veil));
    }
    for na in 1..=3 {
        for nb in 1..=3 {
            let (a, b) = (labels("a", na), labels("b", nb));
            out.push((format!("forall {na}x{nb}"), stock::forall_relation(&a, &b).unwrap()));
            out.push((format!("exists {na}x{nb}"), stock::exists_relation(&a, &b).unwrap()));
        }
    }
    let (s, s_prime) = (labels("s", 2), labels("t", 2));
    out.push(("behavior projection 2x2".into(), stock::behavior_projection(&s, &s_prime).unwrap()));
    out.push(("interdependence 2x2".into(), stock::interdependence(&s, &s_prime).unwrap()));
    for n in 1..=3 {
        out.push((format!("transitive closure {n}"), stock::transitive_closure(&labels("v", n)).unwrap()));
    }
    for n in 1..=4 {
        let f = chain_description(n).interpret().unwrap();
        out.push((format!("zoom-in chain {n}"), zoom_in_veil(&f).unwrap()));
    }
    let mut rng = random::rng(17);
    for k in 0..4 {
        let f = random::description(&mut rng, 3, 2).interpret().unwrap();
        out.push((format!("zoom-in random {k}"), zoom_in_veil(&f).unwrap()));
    }
    let diamond = Arc::new(Poset::powerset(ab()).unwrap());
    out.push(("identity diamond".into(), stock::identity(diamond.clone()).unwrap()));
    out.push(("constant diamond".into(), stock::constant(diamond).unwrap()));
    out
}

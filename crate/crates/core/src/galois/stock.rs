//! Ready-made veils on relations, behaviours and causal orders.
//!
//! Relations on `A × B` are subsets of pairs; pair `(a, b)` occupies bit
//! `a·|B| + b`. Carriers marked "reversed" are ordered by `⊇`, so their
//! joins are intersections.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::Veil;
use crate::order::{MonotoneMap, Poset};
use crate::subset::{self, Mask};

/// Labels `(a,b)` for the pairs of `A × B`, in bit order.
pub fn pair_labels(a: &[String], b: &[String]) -> Vec<String> {
    a.iter().flat_map(|x| b.iter().map(move |y| format!("({x},{y})"))).collect()
}

fn product_width(a: &[String], b: &[String]) -> Result<()> {
    subset::check_width(a.len() * b.len())
}

/// Rows of a relation: bit `a` set iff `keep(row a)`.
fn rows(r: Mask, na: usize, nb: usize, keep: impl Fn(Mask) -> bool) -> Mask {
    let row_mask = subset::full_mask(nb);
    (0..na).filter(|&a| keep(r >> (a * nb) & row_mask)).fold(0, |acc, a| acc | 1 << a)
}

/// `p(B)`: first coordinates of the pairs in `r`.
fn first_projection(r: Mask, na: usize, nb: usize) -> Mask {
    rows(r, na, nb, |row| row != 0)
}

/// `p'(B)`: second coordinates of the pairs in `r`.
fn second_projection(r: Mask, na: usize, nb: usize) -> Mask {
    let row_mask = subset::full_mask(nb);
    (0..na).fold(0, |acc, a| acc | (r >> (a * nb) & row_mask))
}

pub fn identity(carrier: Arc<Poset>) -> Result<Veil> {
    Veil::check(MonotoneMap::identity(carrier))
}

/// The veil that hides everything.
pub fn constant(carrier: Arc<Poset>) -> Result<Veil> {
    let point = Arc::new(Poset::point());
    Veil::check(MonotoneMap::from_fn(carrier, point, |_| 0)?)
}

/// `R ↦ { a : (a,b) ∈ R for all b }` on inclusion-ordered carriers.
pub fn forall_relation(a: &[String], b: &[String]) -> Result<Veil> {
    product_width(a, b)?;
    let (na, nb) = (a.len(), b.len());
    let full_row = subset::full_mask(nb);
    let system = Arc::new(Poset::powerset(pair_labels(a, b))?);
    let phenome = Arc::new(Poset::powerset(a.to_vec())?);
    let map = MonotoneMap::from_fn(system, phenome, |r| rows(r as Mask, na, nb, |row| row == full_row) as usize)?;
    Veil::check(map)
}

/// `R ↦ { a : (a,b) ∈ R for some b }` on reverse-inclusion carriers.
pub fn exists_relation(a: &[String], b: &[String]) -> Result<Veil> {
    product_width(a, b)?;
    let system = Arc::new(Poset::reverse_powerset(pair_labels(a, b))?);
    let phenome = Arc::new(Poset::reverse_powerset(a.to_vec())?);
    Veil::check(exists_map(a, b, system, phenome)?)
}

/// The existential projection on inclusion-ordered carriers. Not a veil
/// once `|B| ≥ 2`.
pub fn exists_projection_map(a: &[String], b: &[String]) -> Result<MonotoneMap> {
    product_width(a, b)?;
    let system = Arc::new(Poset::powerset(pair_labels(a, b))?);
    let phenome = Arc::new(Poset::powerset(a.to_vec())?);
    exists_map(a, b, system, phenome)
}

fn exists_map(a: &[String], b: &[String], system: Arc<Poset>, phenome: Arc<Poset>) -> Result<MonotoneMap> {
    let (na, nb) = (a.len(), b.len());
    MonotoneMap::from_fn(system, phenome, |r| first_projection(r as Mask, na, nb) as usize)
}

/// `B ↦ p(B)` from behaviours in `S × S'` to behaviours in `S`, both
/// ordered by `⊇`.
pub fn behavior_projection(s: &[String], s_prime: &[String]) -> Result<Veil> {
    product_width(s, s_prime)?;
    let system = Arc::new(Poset::reverse_powerset(pair_labels(s, s_prime))?);
    let phenome = Arc::new(Poset::reverse_powerset(s.to_vec())?);
    Veil::check(exists_map(s, s_prime, system, phenome)?)
}

/// Labels of the disjoint union `S ⊔ S'`; the second copy is primed.
pub fn disjoint_labels(s: &[String], s_prime: &[String]) -> Vec<String> {
    s.iter().cloned().chain(s_prime.iter().map(|x| format!("{x}'"))).collect()
}

/// `B ↦ (p(B), p'(B))`. The phenome `2^S × 2^S'` is encoded as
/// `2^(S ⊔ S')`, ordered by `⊇`.
pub fn interdependence(s: &[String], s_prime: &[String]) -> Result<Veil> {
    product_width(s, s_prime)?;
    let (na, nb) = (s.len(), s_prime.len());
    subset::check_width(na + nb)?;
    let system = Arc::new(Poset::reverse_powerset(pair_labels(s, s_prime))?);
    let phenome = Arc::new(Poset::reverse_powerset(disjoint_labels(s, s_prime))?);
    let map = MonotoneMap::from_fn(system, phenome, |r| {
        let r = r as Mask;
        (first_projection(r, na, nb) | second_projection(r, na, nb) << na) as usize
    })?;
    Veil::check(map)
}

/// Largest ground set for [`transitive_closure`]; four labels already give
/// 3994 transitive relations.
pub const MAX_CAUSAL_GROUND: usize = 4;

pub fn is_transitive(r: Mask, n: usize) -> bool {
    let has = |i: usize, j: usize| r >> (i * n + j) & 1 == 1;
    (0..n).all(|i| (0..n).all(|j| !has(i, j) || (0..n).all(|k| !has(j, k) || has(i, k))))
}

/// Warshall closure of a relation on `n` points.
pub fn warshall(mut r: Mask, n: usize) -> Mask {
    for k in 0..n {
        for i in 0..n {
            if r >> (i * n + k) & 1 == 1 {
                let row_k = r >> (k * n) & subset::full_mask(n);
                r |= row_k << (i * n);
            }
        }
    }
    r
}

/// The transitive relations on `ground`, in increasing mask order.
pub fn transitive_relations(ground: &[String]) -> Result<Vec<Mask>> {
    let n = ground.len();
    if n > MAX_CAUSAL_GROUND {
        return Err(Error::GroundSetTooLarge { size: n, cap: MAX_CAUSAL_GROUND });
    }
    Ok((0..=subset::full_mask(n * n)).filter(|&r| is_transitive(r, n)).collect())
}

/// Inclusion of the transitive relations (joined by closing the union) into
/// all relations (joined by union).
pub fn transitive_closure(ground: &[String]) -> Result<Veil> {
    subset::check_unique(ground)?;
    let relations = transitive_relations(ground)?;
    let pairs = pair_labels(ground, ground);
    let labels = relations.iter().map(|&r| subset::display(&pairs, r)).collect();
    let system = Arc::new(Poset::from_fn(labels, |x, y| subset::is_subset(relations[x], relations[y]))?);
    let phenome = Arc::new(Poset::powerset(pairs)?);
    let images = relations.iter().map(|&r| r as usize).collect();
    Veil::check(MonotoneMap::new(system, phenome, images)?)
}

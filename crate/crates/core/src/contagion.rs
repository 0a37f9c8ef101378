//! Contagion systems: rule tables, cascades and their least fixed points.
//!
//! Node `i` becomes infected once every node of some rule subset in `N(i)`
//! is infected, and stays infected forever.

use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::galois::Veil;
use crate::operators::{all_moore_families, from_moore_family_on, internal, ClosureOperator};
use crate::order::{MonotoneMap, Poset};
use crate::subset::{self, Mask};

/// A syntactic description `N : Σ → 2^(2^Σ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Description {
    ground: Vec<String>,
    /// `rules[i]` is `N(i)`, sorted and deduplicated.
    rules: Vec<Vec<Mask>>,
}

/// States `A_0 ⊆ A_1 ⊆ … ⊆ A_k` of a synchronous cascade, where `A_k` is
/// the first state that the next round leaves unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeTrace {
    pub states: Vec<Mask>,
    pub converged_at: usize,
}

impl CascadeTrace {
    pub fn last(&self) -> Mask {
        self.states[self.converged_at]
    }
}

impl Description {
    pub fn new(ground: Vec<String>, mut rules: Vec<Vec<Mask>>) -> Result<Description> {
        subset::check_width(ground.len())?;
        subset::check_unique(&ground)?;
        if rules.len() != ground.len() {
            return Err(Error::Schema(format!("{} rule lists for {} nodes", rules.len(), ground.len())));
        }
        let full = subset::full_mask(ground.len());
        for node_rules in &mut rules {
            if let Some(&bad) = node_rules.iter().find(|&&r| r & !full != 0) {
                return Err(Error::Schema(format!("rule {bad:#b} mentions a node outside the ground set")));
            }
            node_rules.sort_unstable();
            node_rules.dedup();
        }
        Ok(Description { ground, rules })
    }

    /// No rules: nothing spreads.
    pub fn empty(ground: Vec<String>) -> Result<Description> {
        let n = ground.len();
        Description::new(ground, vec![Vec::new(); n])
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn rules(&self) -> &[Vec<Mask>] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// Per-node union of the rule collections.
    pub fn merge(&self, other: &Description) -> Result<Description> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        let rules = self.rules.iter().zip(&other.rules).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
        Description::new(self.ground.clone(), rules)
    }

    /// Drops every rule that contains another rule of the same node.
    pub fn normalize(&self) -> Description {
        let rules = self
            .rules
            .iter()
            .map(|rs| rs.iter().copied().filter(|&r| !rs.iter().any(|&q| q != r && subset::is_subset(q, r))).collect())
            .collect();
        Description { ground: self.ground.clone(), rules }
    }

    /// One synchronous round.
    pub fn step(&self, state: Mask) -> Mask {
        self.rules.iter().enumerate().fold(state, |next, (i, rs)| {
            if rs.iter().any(|&r| subset::is_subset(r, state)) {
                next | 1 << i
            } else {
                next
            }
        })
    }

    pub fn cascade_trace(&self, initial: Mask) -> CascadeTrace {
        let mut states = vec![initial];
        loop {
            let current = *states.last().expect("non-empty");
            let next = self.step(current);
            if next == current {
                let converged_at = states.len() - 1;
                return CascadeTrace { states, converged_at };
            }
            states.push(next);
        }
    }

    /// Final infected set from `initial`.
    pub fn closure(&self, initial: Mask) -> Mask {
        let mut state = initial;
        loop {
            let next = self.step(state);
            if next == state {
                return state;
            }
            state = next;
        }
    }

    /// The least fixed point `f_N(∅)`.
    pub fn phenome(&self) -> Mask {
        self.closure(0)
    }

    /// `f_N` tabulated on the inclusion-ordered powerset of the ground set.
    pub fn interpret(&self) -> Result<ClosureOperator> {
        let carrier = Arc::new(Poset::powerset(self.ground.clone())?);
        self.interpret_on(carrier)
    }

    pub fn interpret_on(&self, carrier: Arc<Poset>) -> Result<ClosureOperator> {
        match carrier.as_powerset() {
            Some((g, false)) if g == self.ground.as_slice() => {}
            Some((_, false)) => return Err(Error::GroundMismatch),
            _ => return Err(Error::NotPowerset),
        }
        let images = (0..1usize << self.ground.len()).map(|s| self.closure(s as Mask) as usize).collect();
        ClosureOperator::new(carrier, images).map_err(|e| internal("f_N", e))
    }
}

pub fn interpret(d: &Description) -> Result<ClosureOperator> {
    d.interpret()
}

pub fn cascade_trace(d: &Description, initial: Mask) -> CascadeTrace {
    d.cascade_trace(initial)
}

pub fn merge(d1: &Description, d2: &Description) -> Result<Description> {
    d1.merge(d2)
}

pub fn phenome_of(d: &Description) -> Mask {
    d.phenome()
}

/// `N(i)` is every `k_i`-subset of the neighbours of `i`.
pub fn threshold_description(ground: Vec<String>, edges: &[(usize, usize)], thresholds: &[usize]) -> Result<Description> {
    let n = ground.len();
    if thresholds.len() != n {
        return Err(Error::Schema(format!("{} thresholds for {} nodes", thresholds.len(), n)));
    }
    let mut neighbours = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(Error::Schema(format!("edge ({a}, {b}) leaves the node set")));
        }
        if a != b {
            neighbours[a].push(b);
            neighbours[b].push(a);
        }
    }
    let rules = neighbours
        .iter_mut()
        .zip(thresholds)
        .map(|(nb, &k)| {
            nb.sort_unstable();
            nb.dedup();
            nb.iter().copied().combinations(k).map(|c| c.iter().fold(0 as Mask, |m, &i| m | 1 << i)).collect()
        })
        .collect();
    Description::new(ground, rules)
}

/// Largest ground set for which every closure operator is enumerated.
pub const MAX_PHENOME_VEIL_GROUND: usize = 3;

/// The least-fixed-point veil on the lattice of all closure operators.
#[derive(Clone, Debug)]
pub struct PhenomeVeil {
    pub veil: Veil,
    /// System `k` of the veil, as an operator on the powerset.
    pub systems: Vec<ClosureOperator>,
}

impl PhenomeVeil {
    pub fn index_of(&self, f: &ClosureOperator) -> Option<usize> {
        self.systems.iter().position(|g| g.images() == f.images())
    }

    pub fn index_of_description(&self, d: &Description) -> Result<usize> {
        let f = d.interpret_on(self.veil.phenome().clone())?;
        self.index_of(&f)
            .ok_or_else(|| Error::PropositionViolated("interpreted description missing from the system lattice".into()))
    }
}

/// `Φ(f) = f(∅)` from closure operators on `2^Σ`, ordered pointwise, to
/// `2^Σ`.
pub fn phenome_veil(ground: Vec<String>) -> Result<PhenomeVeil> {
    if ground.len() > MAX_PHENOME_VEIL_GROUND {
        return Err(Error::GroundSetTooLarge { size: ground.len(), cap: MAX_PHENOME_VEIL_GROUND });
    }
    let carrier = Arc::new(Poset::powerset(ground.clone())?);
    let families = all_moore_families(&ground)?;
    let systems = families
        .iter()
        .map(|m| from_moore_family_on(m, carrier.clone()))
        .collect::<Result<Vec<_>>>()?;
    let labels = families
        .iter()
        .map(|m| format!("fix{{{}}}", m.members().iter().map(|&s| subset::display(&ground, s)).join(",")))
        .collect();
    let system = Arc::new(Poset::from_fn(labels, |a, b| systems[a].leq(&systems[b]))?);
    let map = MonotoneMap::from_fn(system, carrier, |k| systems[k].apply(0))?;
    Ok(PhenomeVeil { veil: Veil::check(map)?, systems })
}

/// The inclusion of the closed sets of `f` into its carrier.
pub fn zoom_in_veil(f: &ClosureOperator) -> Result<Veil> {
    let fix = f.fixed_points(&crate::order::Budget::default())?;
    let system = Arc::new(fix.poset);
    Veil::check(MonotoneMap::new(system, f.carrier().clone(), fix.elements)?)
}

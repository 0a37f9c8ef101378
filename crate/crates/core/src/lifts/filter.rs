//! Filters (upper sets) and the lift of a map to filter lattices.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::error::{ensure_prop, Error, Result};
use crate::galois::Veil;
use crate::order::{Budget, MonotoneMap, Poset};

/// An upward-closed subset, stored by its antichain of minimal elements.
#[derive(Clone, Debug)]
pub struct Filter {
    host: Arc<Poset>,
    generators: Vec<usize>,
    extent: OnceLock<FixedBitSet>,
}

impl Filter {
    /// The upward closure of `seeds`.
    pub fn generated_by(host: Arc<Poset>, seeds: &[usize]) -> Filter {
        let generators = host.minimal_elements(seeds);
        Filter { host, generators, extent: OnceLock::new() }
    }

    pub fn from_extent(host: Arc<Poset>, extent: FixedBitSet) -> Filter {
        let members: Vec<usize> = extent.ones().collect();
        let filter = Filter::generated_by(host, &members);
        let _ = filter.extent.set(extent);
        filter
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, x: usize) -> bool {
        match self.extent.get() {
            Some(e) => e[x],
            None => self.generators.iter().any(|&g| self.host.leq(g, x)),
        }
    }

    pub fn extent(&self) -> &FixedBitSet {
        self.extent.get_or_init(|| {
            let mut e = FixedBitSet::with_capacity(self.host.len());
            for x in self.host.elements().filter(|&x| self.contains(x)) {
                e.insert(x);
            }
            e
        })
    }

    /// `self ⊇ other`, by generator domination.
    pub fn contains_filter(&self, other: &Filter) -> bool {
        other.generators.iter().all(|&g| self.contains(g))
    }

    pub fn intersection(&self, other: &Filter) -> Filter {
        let mut e = self.extent().clone();
        e.intersect_with(other.extent());
        Filter::from_extent(self.host.clone(), e)
    }

    pub fn union(&self, other: &Filter) -> Filter {
        let seeds: Vec<usize> = self.generators.iter().chain(&other.generators).copied().collect();
        Filter::generated_by(self.host.clone(), &seeds)
    }

    /// `⟨labels of generators⟩`.
    pub fn label(&self) -> String {
        format!("<{}>", self.generators.iter().map(|&g| self.host.label(g)).collect::<Vec<_>>().join(","))
    }
}

impl PartialEq for Filter {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for Filter {}

/// `⟨p⟩`, the filter of elements above `p`.
pub fn principal_filter(host: &Arc<Poset>, p: usize) -> Filter {
    Filter::generated_by(host.clone(), &[p])
}

/// All filters of a poset, ordered by reverse inclusion.
#[derive(Clone, Debug)]
pub struct FilterLattice {
    pub host: Arc<Poset>,
    pub filters: Vec<Filter>,
    pub poset: Arc<Poset>,
    index: HashMap<Vec<usize>, usize>,
}

impl FilterLattice {
    pub fn index_of(&self, f: &Filter) -> Option<usize> {
        self.index.get(&f.generators).copied()
    }

    pub fn principal(&self, p: usize) -> usize {
        self.index_of(&principal_filter(&self.host, p)).expect("every principal filter is enumerated")
    }
}

/// Enumerates the filters of `host`, deciding elements from the top down:
/// an element may join the filter only if everything above it already has.
pub fn filter_lattice(host: &Arc<Poset>, budget: &Budget) -> Result<FilterLattice> {
    let mut order = host.linear_extension();
    order.reverse();
    let n = host.len();
    let mut extents = Vec::new();
    let mut current = FixedBitSet::with_capacity(n);
    let strict_up: Vec<Vec<usize>> =
        host.elements().map(|x| host.elements().filter(|&y| host.lt(x, y)).collect()).collect();
    enumerate(&order, 0, &strict_up, &mut current, &mut extents, budget.max_elements, n)?;
    let filters: Vec<Filter> = extents.into_iter().map(|e| Filter::from_extent(host.clone(), e)).collect();
    let labels = filters.iter().map(Filter::label).collect();
    let poset = Poset::from_fn(labels, |a, b| filters[a].contains_filter(&filters[b]))
        .map_err(|e| Error::PropositionViolated(format!("filters under ⊇: {e}")))?;
    let index = filters.iter().enumerate().map(|(k, f)| (f.generators.clone(), k)).collect();
    Ok(FilterLattice { host: host.clone(), filters, poset: Arc::new(poset), index })
}

fn enumerate(
    order: &[usize],
    depth: usize,
    strict_up: &[Vec<usize>],
    current: &mut FixedBitSet,
    out: &mut Vec<FixedBitSet>,
    cap: usize,
    size: usize,
) -> Result<()> {
    if depth == order.len() {
        out.push(current.clone());
        if out.len() > cap {
            return Err(Error::PosetTooLarge { size, cap });
        }
        return Ok(());
    }
    let x = order[depth];
    enumerate(order, depth + 1, strict_up, current, out, cap, size)?;
    if strict_up[x].iter().all(|&y| current[y]) {
        current.insert(x);
        enumerate(order, depth + 1, strict_up, current, out, cap, size)?;
        current.set(x, false);
    }
    Ok(())
}

/// `J(f)` with its carriers.
#[derive(Clone, Debug)]
pub struct Lift {
    pub system: FilterLattice,
    pub phenome: FilterLattice,
    pub veil: Veil,
}

/// `J(f) : I ↦ ⟨f(I)⟩`, checked as a veil, with left adjoint `J ↦ f⁻¹(J)`.
pub fn lift_map(f: &MonotoneMap, budget: &Budget) -> Result<Lift> {
    let system = filter_lattice(f.domain(), budget)?;
    let phenome = filter_lattice(f.codomain(), budget)?;
    let q = f.codomain().clone();
    let lifted = |i: &Filter| {
        let image: Vec<usize> = i.extent().ones().map(|x| f.apply(x)).collect();
        Filter::generated_by(q.clone(), &image)
    };
    let images = system
        .filters
        .iter()
        .map(|i| phenome.index_of(&lifted(i)).ok_or_else(|| Error::PropositionViolated("lifted filter not enumerated".into())))
        .collect::<Result<Vec<_>>>()?;
    let map = MonotoneMap::new(system.poset.clone(), phenome.poset.clone(), images)
        .map_err(|e| Error::PropositionViolated(format!("J(f) is not order-preserving: {e}")))?;
    let veil = Veil::check_within(map, budget).map_err(|e| match e {
        Error::BudgetExceeded { .. } => e,
        other => Error::PropositionViolated(format!("J(f) is not a veil: {other}")),
    })?;
    for p in f.domain().elements() {
        ensure_prop!(
            veil.phi(system.principal(p)) == phenome.principal(f.apply(p)),
            "J(f)<p> differs from <f(p)> at {p}"
        );
    }
    for (k, j) in phenome.filters.iter().enumerate() {
        let preimage: Vec<usize> = f.domain().elements().filter(|&x| j.contains(f.apply(x))).collect();
        let expected = system.index_of(&Filter::generated_by(f.domain().clone(), &preimage));
        ensure_prop!(expected == Some(veil.left_adjoint(k)), "left adjoint of J(f) is not the preimage at {k}");
    }
    Ok(Lift { system, phenome, veil })
}

/// Whether the pair sustains an effect before and after lifting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EffectPair {
    pub original: bool,
    pub lifted: bool,
}

/// Compares `f(p∨p') ≠ f(p)∨f(p')` with
/// `J(f)(⟨p⟩∩⟨p'⟩) ≠ J(f)⟨p⟩ ∩ J(f)⟨p'⟩`, without enumerating filters.
pub fn lift_preserves_effects(f: &MonotoneMap, p: usize, p_prime: usize) -> Result<EffectPair> {
    let (dom, cod) = (f.domain(), f.codomain());
    if !dom.is_finitely_cocomplete() {
        return Err(Error::NotCocomplete("domain"));
    }
    if !cod.is_finitely_cocomplete() {
        return Err(Error::NotCocomplete("codomain"));
    }
    let missing = || Error::PropositionViolated("missing join in a cocomplete poset".into());
    let join = dom.join(p, p_prime).ok_or_else(missing)?;
    let image_join = cod.join(f.apply(p), f.apply(p_prime)).ok_or_else(missing)?;
    let original = f.apply(join) != image_join;
    let lift = |i: &Filter| {
        let image: Vec<usize> = i.extent().ones().map(|x| f.apply(x)).collect();
        Filter::generated_by(cod.clone(), &image)
    };
    let (a, b) = (principal_filter(dom, p), principal_filter(dom, p_prime));
    let lifted = lift(&a.intersection(&b)) != lift(&a).intersection(&lift(&b));
    ensure_prop!(original == lifted, "lift changes the effect status of ({p}, {p_prime})");
    Ok(EffectPair { original, lifted })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Arc<Poset> {
        Arc::new(Poset::chain(n).unwrap())
    }

    #[test]
    fn small_filter_lattices() {
        let b = Budget::default();
        let two = filter_lattice(&chain(2), &b).unwrap();
        assert_eq!(two.filters.len(), 3);
        assert_eq!(two.poset.hasse_cover().len(), 2);
        assert_eq!(filter_lattice(&chain(1), &b).unwrap().filters.len(), 2);
        let anti = filter_lattice(&Arc::new(Poset::antichain(2).unwrap()), &b).unwrap();
        assert_eq!(anti.filters.len(), 4);
        assert!(anti.poset.is_lattice());
    }

    #[test]
    fn principal_filters() {
        let ps = Arc::new(Poset::powerset(vec!["A".into(), "B".into()]).unwrap());
        let a = principal_filter(&ps, 0b01);
        assert_eq!(a.extent().ones().collect::<Vec<_>>(), vec![0b01, 0b11]);
        assert_eq!(principal_filter(&ps, 0).extent().count_ones(..), 4);
        assert_eq!(principal_filter(&ps, 3).extent().ones().collect::<Vec<_>>(), vec![3]);
        assert_eq!(a.intersection(&principal_filter(&ps, 0b10)), principal_filter(&ps, 3));
    }

    #[test]
    fn filter_count_is_capped() {
        let anti = Arc::new(Poset::antichain(10).unwrap());
        let err = filter_lattice(&anti, &Budget::with_elements(1000)).unwrap_err();
        assert!(matches!(err, Error::PosetTooLarge { size: 10, cap: 1000 }));
    }

    #[test]
    fn identity_lifts_to_identity() {
        let ps = Arc::new(Poset::powerset(vec!["A".into(), "B".into()]).unwrap());
        let lift = lift_map(&MonotoneMap::identity(ps), &Budget::default()).unwrap();
        let n = lift.system.filters.len();
        assert_eq!(lift.veil.map().images(), (0..n).collect::<Vec<_>>().as_slice());
    }
}

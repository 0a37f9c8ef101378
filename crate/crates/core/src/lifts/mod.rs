//! Recovering veils from arbitrary order-preserving maps.
//!
//! [`factor`] splits `f = ι ∘ g ∘ π` through a quotient of the systems and
//! the join-closure of the image; the [`filter`] lift turns any map into a
//! veil between filter lattices.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{ensure_prop, Error, Result};
use crate::galois::Veil;
use crate::order::{Budget, MonotoneMap, Poset};

pub mod filter;

pub use filter::{filter_lattice, lift_map, lift_preserves_effects, principal_filter, Filter, FilterLattice, Lift};

fn join_of(p: &Poset, x: usize, y: usize) -> Result<usize> {
    p.join(x, y).ok_or_else(|| Error::PropositionViolated(format!("missing join of {x} and {y}")))
}

/// `p ~ q` iff `f(p ∨ x) = f(q ∨ x)` for every `x`.
#[derive(Clone, Debug)]
pub struct Congruence {
    map: MonotoneMap,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_max: Vec<usize>,
}

impl Congruence {
    pub fn map(&self) -> &MonotoneMap {
        &self.map
    }

    pub fn class_of(&self, p: usize) -> usize {
        self.class_of[p]
    }

    /// Classes in order of their least member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_max(&self, c: usize) -> usize {
        self.class_max[c]
    }

    pub fn related(&self, p: usize, q: usize) -> bool {
        self.class_of[p] == self.class_of[q]
    }

    /// `c(p)`: the maximum of the class of `p`.
    pub fn closure(&self, p: usize) -> usize {
        self.class_max[self.class_of[p]]
    }
}

pub fn congruence_of(f: &MonotoneMap) -> Result<Congruence> {
    let p = f.domain();
    if !p.is_finitely_cocomplete() {
        return Err(Error::NotCocomplete("domain"));
    }
    Budget::default().check_pairs(p.len() as u128 * p.len() as u128)?;
    let mut by_signature: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(p.len());
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for a in p.elements() {
        let signature = p.elements().map(|x| join_of(p, a, x).map(|j| f.apply(j))).collect::<Result<Vec<_>>>()?;
        let next = classes.len();
        let c = *by_signature.entry(signature).or_insert(next);
        if c == next {
            classes.push(Vec::new());
        }
        classes[c].push(a);
        class_of.push(c);
    }
    let mut class_max = Vec::with_capacity(classes.len());
    for (c, members) in classes.iter().enumerate() {
        let top = p
            .join_all(members.iter().copied())
            .ok_or_else(|| Error::PropositionViolated("class without a join".into()))?;
        ensure_prop!(class_of[top] == c, "join of a congruence class left the class");
        class_max.push(top);
    }
    Ok(Congruence { map: f.clone(), class_of, classes, class_max })
}

/// `P_∼` with `C ≤ C'` iff some member of `C` lies below some member of `C'`.
pub fn quotient(c: &Congruence) -> Result<(Arc<Poset>, MonotoneMap)> {
    let p = c.map.domain();
    let labels = c
        .classes
        .iter()
        .map(|m| format!("[{}]", m.iter().map(|&x| p.label(x)).collect::<Vec<_>>().join(",")))
        .collect();
    let related = |a: usize, b: usize| c.classes[a].iter().any(|&x| c.classes[b].iter().any(|&y| p.leq(x, y)));
    let quotient = Poset::from_fn(labels, related)
        .map_err(|e| Error::PropositionViolated(format!("class order is not a partial order: {e}")))?;
    for a in quotient.elements() {
        for b in quotient.elements() {
            ensure_prop!(
                quotient.leq(a, b) == p.leq(c.class_max[a], c.class_max[b]),
                "class order differs from the order of class maxima"
            );
        }
    }
    let quotient = Arc::new(quotient);
    let pi = MonotoneMap::new(p.clone(), quotient.clone(), c.class_of.clone())?;
    for x in p.elements() {
        for y in x + 1..p.len() {
            let joined = quotient.join(pi.apply(x), pi.apply(y));
            ensure_prop!(joined == Some(pi.apply(join_of(p, x, y)?)), "π does not commute with the join of {x} and {y}");
        }
    }
    Ok((quotient, pi))
}

/// `Q̂`: the image of `f` closed under binary joins, with its inclusion.
#[derive(Clone, Debug)]
pub struct ImageSemilattice {
    pub poset: Arc<Poset>,
    /// Codomain index of each element of `poset`.
    pub elements: Vec<usize>,
    pub iota: MonotoneMap,
}

pub fn image_semilattice(f: &MonotoneMap) -> Result<ImageSemilattice> {
    let q = f.codomain();
    if !q.is_finitely_cocomplete() {
        return Err(Error::NotCocomplete("codomain"));
    }
    let mut closed: BTreeSet<usize> = f.images().iter().copied().collect();
    let mut frontier: Vec<usize> = closed.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        let current: Vec<usize> = closed.iter().copied().collect();
        for y in current {
            let j = join_of(q, x, y)?;
            if closed.insert(j) {
                frontier.push(j);
            }
        }
    }
    let elements: Vec<usize> = closed.into_iter().collect();
    let poset = Arc::new(q.induced(&elements)?);
    let iota = MonotoneMap::new(poset.clone(), q.clone(), elements.clone())?;
    for a in poset.elements() {
        for b in a + 1..poset.len() {
            let j = poset.join(a, b).map(|k| elements[k]);
            ensure_prop!(j == q.join(elements[a], elements[b]), "ι does not commute with joins");
        }
    }
    Ok(ImageSemilattice { poset, elements, iota })
}

/// `f = ι ∘ g ∘ π`.
#[derive(Clone, Debug)]
pub struct Factored {
    pub congruence: Congruence,
    pub quotient: Arc<Poset>,
    pub pi: MonotoneMap,
    pub image: ImageSemilattice,
    pub g: MonotoneMap,
}

pub fn factor(f: &MonotoneMap) -> Result<Factored> {
    let congruence = congruence_of(f)?;
    let (quotient, pi) = quotient(&congruence)?;
    let image = image_semilattice(f)?;
    let position: HashMap<usize, usize> = image.elements.iter().enumerate().map(|(k, &q)| (q, k)).collect();
    let g_images = congruence.class_max.iter().map(|&m| position[&f.apply(m)]).collect();
    let g = MonotoneMap::new(quotient.clone(), image.poset.clone(), g_images)
        .map_err(|e| Error::PropositionViolated(format!("g is not order-preserving: {e}")))?;
    ensure_prop!(pi.surjectivity_witness().is_none(), "π is not surjective");
    ensure_prop!(image.iota.injectivity_witness().is_none(), "ι is not injective");
    for p in f.domain().elements() {
        ensure_prop!(image.iota.apply(g.apply(pi.apply(p))) == f.apply(p), "ι∘g∘π differs from f at {p}");
    }
    Ok(Factored { congruence, quotient, pi, image, g })
}

impl Factored {
    /// `(f(a∨b) ≠ f(a)∨f(b), g(πa∨πb) ≠ g(πa)∨g(πb))`; the two always agree.
    pub fn effect_pair(&self, a: usize, b: usize) -> Result<(bool, bool)> {
        let f = self.congruence.map();
        let (p, q) = (f.domain(), f.codomain());
        let original = f.apply(join_of(p, a, b)?) != join_of(q, f.apply(a), f.apply(b))?;
        let (ca, cb) = (self.pi.apply(a), self.pi.apply(b));
        let image = &self.image.poset;
        let factored = self.g.apply(join_of(&self.quotient, ca, cb)?) != join_of(image, self.g.apply(ca), self.g.apply(cb))?;
        ensure_prop!(original == factored, "effect at ({a}, {b}) not mirrored by g");
        Ok((original, factored))
    }

    /// Direct V.2 check of `g`.
    pub fn g_is_veil(&self) -> bool {
        Veil::check(self.g.clone()).is_ok()
    }
}

/// For injective `f`: `g` is a veil iff `f` reflects the order.
pub fn injective_criterion(f: &MonotoneMap) -> Result<bool> {
    if let Some((a, b)) = f.injectivity_witness() {
        return Err(Error::NotInjective(a, b));
    }
    let (p, q) = (f.domain(), f.codomain());
    Ok(p.elements().all(|a| p.elements().all(|b| !q.leq(f.apply(a), f.apply(b)) || p.leq(a, b))))
}

/// For surjective `f` on a finite domain: `g` is a veil iff `f` preserves
/// meets of class maxima. The maxima are closed under meets, so the top and
/// pairwise meets suffice.
pub fn surjective_criterion(f: &MonotoneMap) -> Result<bool> {
    if let Some(q) = f.surjectivity_witness() {
        return Err(Error::NotSurjective(q));
    }
    let congruence = congruence_of(f)?;
    let (p, q) = (f.domain(), f.codomain());
    if !q.is_lattice() {
        return Err(Error::NotLattice("codomain"));
    }
    if p.top().map(|t| f.apply(t)) != q.top() {
        return Ok(false);
    }
    let maxima = &congruence.class_max;
    for (i, &a) in maxima.iter().enumerate() {
        for &b in &maxima[i + 1..] {
            let lhs = p.meet(a, b).map(|m| f.apply(m));
            if lhs != q.meet(f.apply(a), f.apply(b)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Poset> {
        Arc::new(Poset::powerset(vec!["A".into(), "B".into()]).unwrap())
    }

    fn chain(n: usize) -> Arc<Poset> {
        Arc::new(Poset::chain(n).unwrap())
    }

    fn has_a() -> MonotoneMap {
        MonotoneMap::from_fn(ab(), chain(2), |s| s & 1).unwrap()
    }

    #[test]
    fn congruence_examples() {
        let c = congruence_of(&has_a()).unwrap();
        assert_eq!(c.classes(), &[vec![0, 2], vec![1, 3]]);
        let id = congruence_of(&MonotoneMap::identity(ab())).unwrap();
        assert_eq!(id.classes().len(), 4);
        let constant = congruence_of(&MonotoneMap::from_fn(ab(), chain(2), |_| 0).unwrap()).unwrap();
        assert_eq!(constant.classes(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn quotient_examples() {
        let (q, pi) = quotient(&congruence_of(&has_a()).unwrap()).unwrap();
        assert_eq!(q.hasse_cover(), vec![(0, 1)]);
        assert_eq!(pi.images(), &[0, 1, 0, 1]);
        let (q, _) = quotient(&congruence_of(&MonotoneMap::identity(ab())).unwrap()).unwrap();
        assert_eq!(q.hasse_cover().len(), 4);
    }

    #[test]
    fn image_semilattice_adds_joins() {
        // {A} and {B} generate {A,B}
        let f = MonotoneMap::from_fn(Arc::new(Poset::antichain(2).unwrap()), ab(), |x| 1 << x).unwrap();
        // the antichain is not cocomplete, but only the codomain matters here
        let img = image_semilattice(&f).unwrap();
        assert_eq!(img.elements, vec![1, 2, 3]);
        let onto = image_semilattice(&has_a()).unwrap();
        assert_eq!(onto.elements, vec![0, 1]);
    }

    #[test]
    fn factor_of_membership_map() {
        let fac = factor(&has_a()).unwrap();
        assert_eq!(fac.g.images(), &[0, 1]);
        assert!(fac.g_is_veil());
        for a in 0..4 {
            for b in 0..4 {
                let (x, y) = fac.effect_pair(a, b).unwrap();
                assert_eq!(x, y);
            }
        }
        assert!(surjective_criterion(&has_a()).unwrap());
    }

    #[test]
    fn injective_criterion_examples() {
        let anti = Arc::new(Poset::antichain(2).unwrap());
        let into_chain = MonotoneMap::new(anti, chain(2), vec![0, 1]).unwrap();
        assert!(!injective_criterion(&into_chain).unwrap());
        assert!(injective_criterion(&MonotoneMap::identity(ab())).unwrap());
        assert!(matches!(injective_criterion(&has_a()), Err(Error::NotInjective(0, 2))));
    }

    #[test]
    fn surjective_criterion_detects_lost_meet() {
        // diamond onto a 3-chain, both atoms to the middle
        let f = MonotoneMap::new(ab(), chain(3), vec![0, 1, 1, 2]).unwrap();
        assert!(!surjective_criterion(&f).unwrap());
        assert!(!factor(&f).unwrap().g_is_veil());
        assert!(surjective_criterion(&MonotoneMap::identity(ab())).unwrap());
        let not_onto = MonotoneMap::new(chain(2), chain(3), vec![0, 2]).unwrap();
        assert!(matches!(surjective_criterion(&not_onto), Err(Error::NotSurjective(1))));
    }
}

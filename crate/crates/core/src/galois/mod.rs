//! Veils: order-preserving maps whose phenomes each have a simplest
//! explaining system, and the generative effects they hide.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_prop, Error, Result};
use crate::operators::{internal, ClosureOperator, KernelOperator};
use crate::order::{same_carrier, Budget, MonotoneMap, Poset};

pub mod stock;

/// A validated veil `Φ : System → Phenome` with its tabulated left adjoint.
#[derive(Clone, Debug)]
pub struct Veil {
    map: MonotoneMap,
    left: Vec<usize>,
}

/// A pair of systems on which the veil does not commute with joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EffectWitness {
    pub s: usize,
    pub s_prime: usize,
    /// `Φ(s ∨ s')`
    pub lhs: usize,
    /// `Φ(s) ∨ Φ(s')`
    pub rhs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

/// `Φ = ι ∘ π` through the image of `Φ`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub image: Arc<Poset>,
    /// Phenome index of each image element.
    pub image_elements: Vec<usize>,
    pub pi: Veil,
    pub iota: Veil,
}

fn require_cocomplete(p: &Poset, role: &'static str) -> Result<()> {
    if p.is_finitely_cocomplete() {
        Ok(())
    } else {
        Err(Error::NotCocomplete(role))
    }
}

/// The systems whose phenome lies above `p`.
pub fn explain(map: &MonotoneMap, p: usize) -> Vec<usize> {
    let phenome = map.codomain();
    map.domain().elements().filter(|&s| phenome.leq(p, map.apply(s))).collect()
}

impl Veil {
    /// Validates V.2 by locating the minimum of every explaining set.
    pub fn check(map: MonotoneMap) -> Result<Veil> {
        let budget = Budget::default();
        Veil::check_within(map, &budget)
    }

    pub fn check_within(map: MonotoneMap, budget: &Budget) -> Result<Veil> {
        let system = map.domain().clone();
        let phenome = map.codomain().clone();
        require_cocomplete(&system, "system poset")?;
        require_cocomplete(&phenome, "phenome poset")?;
        budget.check_pairs(system.len() as u128 * phenome.len() as u128)?;
        let mut left = Vec::with_capacity(phenome.len());
        for p in phenome.elements() {
            let explaining = explain(&map, p);
            match system.minimum_of(&explaining) {
                Ok(s) => left.push(s),
                Err(minimal) => return Err(Error::NoMinimumExplanation { phenome: p, minimal }),
            }
        }
        Ok(Veil { map, left })
    }

    pub fn map(&self) -> &MonotoneMap {
        &self.map
    }

    pub fn system(&self) -> &Arc<Poset> {
        self.map.domain()
    }

    pub fn phenome(&self) -> &Arc<Poset> {
        self.map.codomain()
    }

    #[inline]
    pub fn phi(&self, s: usize) -> usize {
        self.map.apply(s)
    }

    /// `F(p) = min { s : p ≤ Φ(s) }`.
    #[inline]
    pub fn left_adjoint(&self, p: usize) -> usize {
        self.left[p]
    }

    pub fn left_table(&self) -> &[usize] {
        &self.left
    }

    /// `F ∘ Φ`, a kernel operator on the systems.
    pub fn derived_kernel(&self) -> Result<KernelOperator> {
        let images = self.system().elements().map(|s| self.left[self.phi(s)]).collect();
        KernelOperator::new(self.system().clone(), images).map_err(|e| internal("FΦ", e))
    }

    /// `Φ ∘ F`, a closure operator on the phenomes.
    pub fn derived_closure(&self) -> Result<ClosureOperator> {
        let images = self.phenome().elements().map(|p| self.phi(self.left[p])).collect();
        ClosureOperator::new(self.phenome().clone(), images).map_err(|e| internal("ΦF", e))
    }

    /// Checks `F(p) ≤ s ⇔ p ≤ Φ(s)` on every pair.
    pub fn verify_adjunction(&self) -> Result<()> {
        let (sys, phen) = (self.system(), self.phenome());
        for p in phen.elements() {
            for s in sys.elements() {
                ensure_prop!(
                    sys.leq(self.left[p], s) == phen.leq(p, self.phi(s)),
                    "adjunction fails at phenome {p}, system {s}"
                );
            }
        }
        Ok(())
    }

    fn witness(&self, s: usize, t: usize) -> Result<Option<EffectWitness>> {
        let join = self
            .system()
            .join(s, t)
            .ok_or_else(|| Error::PropositionViolated(format!("systems {s} and {t} have no join")))?;
        let lhs = self.phi(join);
        let rhs = self
            .phenome()
            .join(self.phi(s), self.phi(t))
            .ok_or_else(|| Error::PropositionViolated(format!("phenomes of {s} and {t} have no join")))?;
        if lhs == rhs {
            return Ok(None);
        }
        ensure_prop!(self.phenome().leq(rhs, lhs), "effect at ({s}, {t}) with rhs not below lhs");
        Ok(Some(EffectWitness { s, s_prime: t, lhs, rhs }))
    }

    /// Pairs `s ≤ s'` (by index) with `Φ(s ∨ s') ≠ Φ(s) ∨ Φ(s')`, sorted.
    pub fn detect_effects(&self, mode: SearchMode, budget: &Budget) -> Result<Vec<EffectWitness>> {
        let n = self.system().len();
        let mut found = BTreeSet::new();
        match mode {
            SearchMode::Exhaustive => {
                budget.check_pairs(n as u128 * (n as u128 + 1) / 2)?;
                for s in 0..n {
                    for t in s..n {
                        if let Some(w) = self.witness(s, t)? {
                            found.insert(w);
                        }
                    }
                }
            }
            SearchMode::Sampled { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..samples {
                    let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
                    if let Some(w) = self.witness(a.min(b), a.max(b))? {
                        found.insert(w);
                    }
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    pub fn is_injective(&self) -> bool {
        self.map.injectivity_witness().is_none()
    }

    pub fn is_surjective(&self) -> bool {
        self.map.surjectivity_witness().is_none()
    }

    /// Splits `Φ` into a surjective veil onto its image and the injective
    /// inclusion of the image.
    pub fn factorize(&self) -> Result<Factorization> {
        let image_elements: Vec<usize> =
            self.map.images().iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let image = Arc::new(self.phenome().induced(&image_elements)?);
        let position = |p: usize| image_elements.binary_search(&p).expect("image element");
        let pi_map = MonotoneMap::from_fn(self.system().clone(), image.clone(), |s| position(self.phi(s)))
            .map_err(|e| Error::PropositionViolated(format!("projection onto the image: {e}")))?;
        let iota_map = MonotoneMap::new(image.clone(), self.phenome().clone(), image_elements.clone())
            .map_err(|e| Error::PropositionViolated(format!("inclusion of the image: {e}")))?;
        let as_prop = |what: &str, e: Error| Error::PropositionViolated(format!("{what} is not a veil: {e}"));
        let pi = Veil::check(pi_map).map_err(|e| as_prop("surjective factor", e))?;
        let iota = Veil::check(iota_map).map_err(|e| as_prop("injective factor", e))?;
        ensure_prop!(pi.is_surjective(), "surjective factor misses an image element");
        ensure_prop!(iota.is_injective(), "injective factor identifies two elements");
        for s in self.system().elements() {
            ensure_prop!(iota.phi(pi.phi(s)) == self.phi(s), "ι∘π differs from Φ at {s}");
        }
        Ok(Factorization { image, image_elements, pi, iota })
    }

    /// The left adjoint, as a veil between the order-dual carriers.
    pub fn dual(&self) -> Result<Veil> {
        let map = MonotoneMap::new(
            Arc::new(self.phenome().dual()),
            Arc::new(self.system().dual()),
            self.left.clone(),
        )
        .map_err(|e| Error::PropositionViolated(format!("left adjoint is not monotone: {e}")))?;
        Veil::check(map).map_err(|e| Error::PropositionViolated(format!("dual veil: {e}")))
    }
}

pub fn check_veil(map: MonotoneMap) -> Result<Veil> {
    Veil::check(map)
}

/// `v2 ∘ v1`; its left adjoint is `F1 ∘ F2`.
pub fn compose(v2: &Veil, v1: &Veil) -> Result<Veil> {
    if !same_carrier(v1.phenome(), v2.system()) {
        return Err(Error::CarrierMismatch);
    }
    let map = v2.map.after(&v1.map)?;
    let composite = Veil::check(map).map_err(|e| Error::PropositionViolated(format!("composite veil: {e}")))?;
    for q in composite.phenome().elements() {
        ensure_prop!(
            composite.left[q] == v1.left[v2.left[q]],
            "left adjoint of the composite differs from F1∘F2 at {q}"
        );
    }
    Ok(composite)
}

/// Builds a veil from meet preservation instead of explaining-set minima.
pub fn veil_by_meets(map: MonotoneMap) -> Result<Veil> {
    let budget = Budget::default();
    veil_by_meets_within(map, &budget)
}

pub fn veil_by_meets_within(map: MonotoneMap, budget: &Budget) -> Result<Veil> {
    let system = map.domain().clone();
    let phenome = map.codomain().clone();
    if !system.is_lattice() {
        return Err(Error::NotLattice("system poset"));
    }
    if !phenome.is_lattice() {
        return Err(Error::NotLattice("phenome poset"));
    }
    let n = system.len();
    budget.check_pairs(n as u128 * n as u128)?;
    let (top_s, top_p) = (system.top(), phenome.top());
    if top_s.map(|t| map.apply(t)) != top_p {
        return Err(Error::MeetNotPreserved { subset: Vec::new() });
    }
    for x in 0..n {
        for y in x + 1..n {
            let lhs = system.meet(x, y).map(|m| map.apply(m));
            let rhs = phenome.meet(map.apply(x), map.apply(y));
            if lhs != rhs {
                return Err(Error::MeetNotPreserved { subset: vec![x, y] });
            }
        }
    }
    let mut left = Vec::with_capacity(phenome.len());
    for p in phenome.elements() {
        let f = system
            .meet_all(explain(&map, p))
            .ok_or_else(|| Error::PropositionViolated(format!("explaining set of {p} has no meet")))?;
        ensure_prop!(phenome.leq(p, map.apply(f)), "meet of the explaining set of {p} does not explain it");
        left.push(f);
    }
    Ok(Veil { map, left })
}

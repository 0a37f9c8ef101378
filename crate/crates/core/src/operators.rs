//! Closure and kernel operators, fixed points and Moore families.

use std::sync::Arc;

use crate::error::{ensure_prop, Axiom, AxiomWitness, Error, Result};
use crate::order::{same_carrier, Budget, Poset};
use crate::subset::{self, Mask};

/// An inflationary, monotone, idempotent self-map.
#[derive(Clone, Debug)]
pub struct ClosureOperator {
    carrier: Arc<Poset>,
    images: Vec<usize>,
}

/// A deflationary, monotone, idempotent self-map.
#[derive(Clone, Debug)]
pub struct KernelOperator {
    carrier: Arc<Poset>,
    images: Vec<usize>,
}

/// The fixed points of an operator with the induced order.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    pub poset: Poset,
    /// Carrier index of each element of `poset`.
    pub elements: Vec<usize>,
}

#[derive(Clone, Copy)]
enum Kind {
    Closure,
    Kernel,
}

fn check_axioms(carrier: &Poset, images: &[usize], kind: Kind) -> Result<()> {
    if images.len() != carrier.len() {
        return Err(Error::MapArity { expected: carrier.len(), got: images.len() });
    }
    if let Some(&bad) = images.iter().find(|&&y| y >= carrier.len()) {
        return Err(Error::ImageOutOfRange { image: bad, len: carrier.len() });
    }
    let (extensive, monotone, idempotent) = match kind {
        Kind::Closure => (Axiom::C1, Axiom::C2, Axiom::C3),
        Kind::Kernel => (Axiom::K1, Axiom::K2, Axiom::K3),
    };
    let mut witnesses = Vec::new();
    let first_extensive = carrier.elements().find(|&p| match kind {
        Kind::Closure => !carrier.leq(p, images[p]),
        Kind::Kernel => !carrier.leq(images[p], p),
    });
    if let Some(p) = first_extensive {
        witnesses.push(AxiomWitness { axiom: extensive, elements: vec![p] });
    }
    let mut first_monotone = None;
    carrier.for_each_generating_pair(|x, y| {
        if first_monotone.is_none() && !carrier.leq(images[x], images[y]) {
            first_monotone = Some((x, y));
        }
    });
    if let Some((x, y)) = first_monotone {
        witnesses.push(AxiomWitness { axiom: monotone, elements: vec![x, y] });
    }
    if let Some(p) = carrier.elements().find(|&p| images[images[p]] != images[p]) {
        witnesses.push(AxiomWitness { axiom: idempotent, elements: vec![p] });
    }
    if witnesses.is_empty() {
        Ok(())
    } else {
        Err(Error::AxiomViolation(witnesses))
    }
}

fn fixed_points_of(carrier: &Poset, images: &[usize], budget: &Budget) -> Result<FixedPoints> {
    let elements: Vec<usize> = carrier.elements().filter(|&p| images[p] == p).collect();
    budget.check_elements(elements.len())?;
    let poset = carrier.induced(&elements)?;
    ensure_prop!(poset.is_lattice(), "fixed points of an operator do not form a complete lattice");
    Ok(FixedPoints { poset, elements })
}

fn as_inclusion_powerset(carrier: &Poset) -> Result<&[String]> {
    match carrier.as_powerset() {
        Some((ground, false)) => Ok(ground),
        _ => Err(Error::NotPowerset),
    }
}

/// Promotes an axiom failure on a constructed operator to an internal error.
pub(crate) fn internal(context: &str, err: Error) -> Error {
    match err {
        Error::AxiomViolation(_) => Error::PropositionViolated(format!("{context}: {err}")),
        other => other,
    }
}

impl ClosureOperator {
    pub fn new(carrier: Arc<Poset>, images: Vec<usize>) -> Result<ClosureOperator> {
        check_axioms(&carrier, &images, Kind::Closure)?;
        Ok(ClosureOperator { carrier, images })
    }

    pub fn from_fn(carrier: Arc<Poset>, f: impl Fn(usize) -> usize) -> Result<ClosureOperator> {
        let images = carrier.elements().map(f).collect();
        ClosureOperator::new(carrier, images)
    }

    pub fn identity(carrier: Arc<Poset>) -> ClosureOperator {
        let images = carrier.elements().collect();
        ClosureOperator { carrier, images }
    }

    #[inline]
    pub fn apply(&self, p: usize) -> usize {
        self.images[p]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn carrier(&self) -> &Arc<Poset> {
        &self.carrier
    }

    pub fn is_fixed(&self, p: usize) -> bool {
        self.images[p] == p
    }

    /// Asserts that the fixed points form a complete lattice and, on a
    /// powerset carrier, contain the full set and are closed under
    /// intersection.
    pub fn fixed_points(&self, budget: &Budget) -> Result<FixedPoints> {
        let fix = fixed_points_of(&self.carrier, &self.images, budget)?;
        if let Ok(ground) = as_inclusion_powerset(&self.carrier) {
            let full = subset::full_mask(ground.len()) as usize;
            ensure_prop!(self.is_fixed(full), "full set is not closed");
            for (i, &a) in fix.elements.iter().enumerate() {
                for &b in &fix.elements[i + 1..] {
                    ensure_prop!(self.is_fixed(a & b), "closed sets not closed under intersection");
                }
            }
        }
        Ok(fix)
    }

    /// Pointwise `self <= other`.
    pub fn leq(&self, other: &ClosureOperator) -> bool {
        same_carrier(&self.carrier, &other.carrier)
            && self.images.iter().zip(&other.images).all(|(&a, &b)| self.carrier.leq(a, b))
    }

    /// `self ∘ other`, without axiom checks.
    pub fn compose_raw(&self, other: &ClosureOperator) -> Vec<usize> {
        other.images.iter().map(|&x| self.images[x]).collect()
    }
}

impl PartialEq for ClosureOperator {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && same_carrier(&self.carrier, &other.carrier)
    }
}

impl KernelOperator {
    pub fn new(carrier: Arc<Poset>, images: Vec<usize>) -> Result<KernelOperator> {
        check_axioms(&carrier, &images, Kind::Kernel)?;
        Ok(KernelOperator { carrier, images })
    }

    pub fn from_fn(carrier: Arc<Poset>, f: impl Fn(usize) -> usize) -> Result<KernelOperator> {
        let images = carrier.elements().map(f).collect();
        KernelOperator::new(carrier, images)
    }

    #[inline]
    pub fn apply(&self, s: usize) -> usize {
        self.images[s]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn carrier(&self) -> &Arc<Poset> {
        &self.carrier
    }

    pub fn fixed_points(&self, budget: &Budget) -> Result<FixedPoints> {
        fixed_points_of(&self.carrier, &self.images, budget)
    }

    pub fn leq(&self, other: &KernelOperator) -> bool {
        same_carrier(&self.carrier, &other.carrier)
            && self.images.iter().zip(&other.images).all(|(&a, &b)| self.carrier.leq(a, b))
    }
}

impl PartialEq for KernelOperator {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && same_carrier(&self.carrier, &other.carrier)
    }
}

pub fn check_closure(carrier: Arc<Poset>, images: Vec<usize>) -> Result<ClosureOperator> {
    ClosureOperator::new(carrier, images)
}

pub fn check_kernel(carrier: Arc<Poset>, images: Vec<usize>) -> Result<KernelOperator> {
    KernelOperator::new(carrier, images)
}

/// The least closure operator above both `f` and `g`, found by iterating
/// `f ∘ g` pointwise until it stops moving.
pub fn closure_join(f: &ClosureOperator, g: &ClosureOperator) -> Result<ClosureOperator> {
    if !same_carrier(&f.carrier, &g.carrier) {
        return Err(Error::CarrierMismatch);
    }
    let bound = f.carrier.height() + 1;
    let mut images = Vec::with_capacity(f.images.len());
    for p in f.carrier.elements() {
        let mut x = p;
        let mut rounds = 0;
        loop {
            let next = f.images[g.images[x]];
            if next == x {
                break;
            }
            x = next;
            rounds += 1;
            ensure_prop!(rounds <= bound, "(fg)^n did not stabilize within {bound} rounds at {p}");
        }
        images.push(x);
    }
    ClosureOperator::new(f.carrier.clone(), images).map_err(|e| internal("join of closure operators", e))
}

/// An intersection-closed family of subsets containing the full set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreFamily {
    ground: Vec<String>,
    family: Vec<Mask>,
}

impl MooreFamily {
    pub fn new(ground: Vec<String>, mut family: Vec<Mask>) -> Result<MooreFamily> {
        subset::check_width(ground.len())?;
        subset::check_unique(&ground)?;
        let full = subset::full_mask(ground.len());
        if let Some(&bad) = family.iter().find(|&&m| m & !full != 0) {
            return Err(Error::NotMooreFamily(format!("member {bad:#b} is not a subset of the ground set")));
        }
        family.sort_unstable();
        family.dedup();
        if family.binary_search(&full).is_err() {
            return Err(Error::NotMooreFamily(format!(
                "missing the full set {}",
                subset::display(&ground, full)
            )));
        }
        for (i, &a) in family.iter().enumerate() {
            for &b in &family[i + 1..] {
                if family.binary_search(&(a & b)).is_err() {
                    return Err(Error::NotMooreFamily(format!(
                        "{} ∩ {} = {} is missing",
                        subset::display(&ground, a),
                        subset::display(&ground, b),
                        subset::display(&ground, a & b)
                    )));
                }
            }
        }
        Ok(MooreFamily { ground, family })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    /// Members in increasing mask order.
    pub fn members(&self) -> &[Mask] {
        &self.family
    }

    pub fn contains(&self, m: Mask) -> bool {
        self.family.binary_search(&m).is_ok()
    }

    pub fn intersection(&self, other: &MooreFamily) -> Result<MooreFamily> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch);
        }
        let family = self.family.iter().copied().filter(|&m| other.contains(m)).collect();
        MooreFamily::new(self.ground.clone(), family)
    }
}

pub fn to_moore_family(c: &ClosureOperator) -> Result<MooreFamily> {
    let ground = as_inclusion_powerset(&c.carrier)?;
    let family = c.carrier.elements().filter(|&p| c.is_fixed(p)).map(|p| p as Mask).collect();
    MooreFamily::new(ground.to_vec(), family)
        .map_err(|e| Error::PropositionViolated(format!("closed sets are not a Moore family: {e}")))
}

/// For each subset, the intersection of the members of `family` above it.
fn moore_closure_table(width: usize, family: impl IntoIterator<Item = Mask>) -> Vec<usize> {
    let full = subset::full_mask(width);
    let mut table = vec![full; 1 << width];
    for m in family {
        table[m as usize] = m;
    }
    for i in 0..width {
        let bit = 1usize << i;
        for s in 0..table.len() {
            if s & bit == 0 {
                table[s] &= table[s | bit];
            }
        }
    }
    table.into_iter().map(|m| m as usize).collect()
}

pub fn from_moore_family(m: &MooreFamily) -> Result<ClosureOperator> {
    let carrier = Arc::new(Poset::powerset(m.ground.clone())?);
    from_moore_family_on(m, carrier)
}

/// As [`from_moore_family`], reusing an existing powerset carrier.
pub fn from_moore_family_on(m: &MooreFamily, carrier: Arc<Poset>) -> Result<ClosureOperator> {
    if as_inclusion_powerset(&carrier)? != m.ground.as_slice() {
        return Err(Error::GroundMismatch);
    }
    let images = moore_closure_table(m.ground.len(), m.family.iter().copied());
    ClosureOperator::new(carrier, images).map_err(|e| internal("closure of a Moore family", e))
}

/// The join of two closure operators computed from their closed sets.
pub fn join_via_moore_oracle(f: &ClosureOperator, g: &ClosureOperator) -> Result<ClosureOperator> {
    if !same_carrier(&f.carrier, &g.carrier) {
        return Err(Error::CarrierMismatch);
    }
    let family = to_moore_family(f)?.intersection(&to_moore_family(g)?)?;
    from_moore_family_on(&family, f.carrier.clone())
}

/// The greatest closure operator below both: close the union of the two
/// families under intersection.
pub fn closure_meet(f: &ClosureOperator, g: &ClosureOperator) -> Result<ClosureOperator> {
    if !same_carrier(&f.carrier, &g.carrier) {
        return Err(Error::CarrierMismatch);
    }
    let ground = as_inclusion_powerset(&f.carrier)?;
    let closed = f.carrier.elements().filter(|&p| f.is_fixed(p) || g.is_fixed(p)).map(|p| p as Mask);
    let images = moore_closure_table(ground.len(), closed);
    ClosureOperator::new(f.carrier.clone(), images).map_err(|e| internal("meet of closure operators", e))
}

/// Every Moore family on `ground`, in increasing order of the family bit
/// pattern. Capped at four labels (2480 families).
pub fn all_moore_families(ground: &[String]) -> Result<Vec<MooreFamily>> {
    const CAP: usize = 4;
    if ground.len() > CAP {
        return Err(Error::GroundSetTooLarge { size: ground.len(), cap: CAP });
    }
    let n_sets = 1usize << ground.len();
    let full = n_sets - 1;
    let mut out = Vec::new();
    // bit k of `pattern` selects subset k; the full set is always present
    for rest in 0u32..(1u32 << full) {
        let pattern = rest as u64 | 1 << full;
        let closed = (0..n_sets).all(|a| {
            pattern >> a & 1 == 0 || (a + 1..n_sets).all(|b| pattern >> b & 1 == 0 || pattern >> (a & b) & 1 == 1)
        });
        if closed {
            let family = (0..n_sets).filter(|&k| pattern >> k & 1 == 1).map(|k| k as Mask).collect();
            out.push(MooreFamily { ground: ground.to_vec(), family });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Poset> {
        Arc::new(Poset::powerset(vec!["A".into(), "B".into()]).unwrap())
    }

    const A: usize = 0b01;
    const B: usize = 0b10;

    fn axioms(err: Error) -> Vec<(Axiom, Vec<usize>)> {
        match err {
            Error::AxiomViolation(ws) => ws.into_iter().map(|w| (w.axiom, w.elements)).collect(),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn closure_examples() {
        let c = ClosureOperator::from_fn(ab(), |s| s | A).unwrap();
        assert_eq!(c.images(), &[A, A, A | B, A | B]);
        let err = ClosureOperator::from_fn(ab(), |s| s & !A).unwrap_err();
        assert_eq!(axioms(err), vec![(Axiom::C1, vec![A])]);
        assert!(ClosureOperator::from_fn(ab(), |s| s).is_ok());
    }

    #[test]
    fn kernel_examples() {
        assert!(KernelOperator::from_fn(ab(), |s| s).is_ok());
        assert!(KernelOperator::from_fn(ab(), |s| s & A).is_ok());
        let err = KernelOperator::from_fn(ab(), |s| s | A).unwrap_err();
        assert_eq!(axioms(err), vec![(Axiom::K1, vec![0])]);
    }

    #[test]
    fn every_failed_axiom_is_reported() {
        // complement: not inflationary, reverses order, not idempotent
        let err = ClosureOperator::from_fn(ab(), |s| 0b11 ^ s).unwrap_err();
        let found: Vec<Axiom> = axioms(err).into_iter().map(|(a, _)| a).collect();
        assert_eq!(found, vec![Axiom::C1, Axiom::C2, Axiom::C3]);
    }

    #[test]
    fn fixed_point_examples() {
        let budget = Budget::default();
        let c = ClosureOperator::from_fn(ab(), |s| s | A).unwrap();
        let fix = c.fixed_points(&budget).unwrap();
        assert_eq!(fix.elements, vec![A, A | B]);
        assert_eq!(fix.poset.hasse_cover(), vec![(0, 1)]);
        assert_eq!(ClosureOperator::identity(ab()).fixed_points(&budget).unwrap().elements.len(), 4);
        let top = ClosureOperator::from_fn(ab(), |_| 0b11).unwrap();
        assert_eq!(top.fixed_points(&budget).unwrap().elements, vec![0b11]);
    }

    #[test]
    fn join_example() {
        let f = ClosureOperator::from_fn(ab(), |s| s | A).unwrap();
        let g = ClosureOperator::from_fn(ab(), |s| if s & A != 0 { s | B } else { s }).unwrap();
        let j = closure_join(&f, &g).unwrap();
        assert_eq!(j.apply(0), A | B);
        assert_eq!(j, join_via_moore_oracle(&f, &g).unwrap());
        assert_eq!(closure_join(&f, &ClosureOperator::identity(ab())).unwrap(), f);
        assert_eq!(closure_join(&f, &f).unwrap(), f);
    }

    #[test]
    fn oracle_example() {
        let f = ClosureOperator::from_fn(ab(), |s| s | A).unwrap();
        let g = ClosureOperator::from_fn(ab(), |s| s | B).unwrap();
        let j = join_via_moore_oracle(&f, &g).unwrap();
        assert_eq!(to_moore_family(&j).unwrap().members(), &[0b11]);
        assert_eq!(j.images(), &[0b11; 4]);
        assert_eq!(join_via_moore_oracle(&f, &ClosureOperator::identity(ab())).unwrap(), f);
    }

    #[test]
    fn moore_round_trip() {
        let f = ClosureOperator::from_fn(ab(), |s| s | A).unwrap();
        let m = to_moore_family(&f).unwrap();
        assert_eq!(m.members(), &[A as Mask, 0b11]);
        assert_eq!(from_moore_family(&m).unwrap(), f);
        let id = to_moore_family(&ClosureOperator::identity(ab())).unwrap();
        assert_eq!(id.members(), &[0, 1, 2, 3]);
        let err = MooreFamily::new(vec!["A".into(), "B".into()], vec![A as Mask]).unwrap_err();
        assert!(matches!(err, Error::NotMooreFamily(_)));
    }

    #[test]
    fn moore_family_counts() {
        let g = |n: usize| (0..n).map(|i| format!("x{i}")).collect::<Vec<_>>();
        let counts: Vec<usize> = (0..=3).map(|n| all_moore_families(&g(n)).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 7, 61]);
    }

    #[test]
    fn meet_is_greatest_lower_bound_on_two_points() {
        let carrier = ab();
        let ground = vec!["A".to_string(), "B".to_string()];
        let ops: Vec<ClosureOperator> = all_moore_families(&ground)
            .unwrap()
            .iter()
            .map(|m| from_moore_family_on(m, carrier.clone()).unwrap())
            .collect();
        for f in &ops {
            for g in &ops {
                let m = closure_meet(f, g).unwrap();
                assert!(m.leq(f) && m.leq(g));
                for h in ops.iter().filter(|h| h.leq(f) && h.leq(g)) {
                    assert!(h.leq(&m));
                }
            }
        }
    }
}

//! Finite preordered and partially ordered sets.
//!
//! Elements are identified by index; labels are for display and I/O only.
//! Two representations share one API: a dense relation matrix for explicit
//! carriers, and an implicit bit-mask representation for powersets (ordered
//! by inclusion or by reverse inclusion), which lets subset lattices reach
//! [`MAX_GROUND`](crate::subset::MAX_GROUND) labels without a matrix.

use std::collections::HashMap;
use std::ops::Deref;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use crate::error::{Error, PreorderViolation, Result};
use crate::subset::{self, Mask};

/// Enumeration caps shared by every exhaustive construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest explicit carrier (poset, map space, filter lattice).
    pub max_elements: usize,
    /// Largest number of pairs an exhaustive pair scan may visit.
    pub max_pairs: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::with_elements(4096)
    }
}

impl Budget {
    pub fn with_elements(max_elements: usize) -> Self {
        let n = max_elements as u128;
        Budget { max_elements, max_pairs: n * n }
    }

    pub fn check_elements(&self, size: usize) -> Result<()> {
        if size > self.max_elements {
            return Err(Error::SpaceTooLarge { size, cap: self.max_elements });
        }
        Ok(())
    }

    pub fn check_pairs(&self, needed: u128) -> Result<()> {
        if needed > self.max_pairs {
            return Err(Error::BudgetExceeded { needed, budget: self.max_pairs });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Dense {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    // up[x] = { y : x <= y }, down[x] = { y : y <= x }
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    up_lookup: OnceLock<HashMap<FixedBitSet, Vec<usize>>>,
    down_lookup: OnceLock<HashMap<FixedBitSet, Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Subsets {
    ground: Vec<String>,
    reversed: bool,
}

#[derive(Clone, Debug)]
enum Repr {
    Dense(Dense),
    Subsets(Subsets),
}

/// A finite set with a reflexive, transitive relation.
#[derive(Clone, Debug)]
pub struct Preorder {
    repr: Repr,
}

impl Preorder {
    /// Validates a raw relation matrix, reporting every violated axiom.
    pub fn from_matrix(labels: Vec<String>, leq: &[Vec<bool>]) -> Result<Preorder> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::RelationShape { expected: n });
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in leq.iter().enumerate() {
            for (y, &b) in row.iter().enumerate() {
                up[x].set(y, b);
            }
        }
        let mut violations = Vec::new();
        for (x, row) in up.iter().enumerate() {
            if !row[x] {
                violations.push(PreorderViolation::MissingReflexive(x));
            }
        }
        for x in 0..n {
            for y in up[x].ones() {
                if y == x {
                    continue;
                }
                let mut missing = up[y].clone();
                missing.difference_with(&up[x]);
                for z in missing.ones() {
                    violations.push(PreorderViolation::BrokenTransitivity(x, y, z));
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidPreorder(violations));
        }
        Preorder::from_up_sets(labels, up)
    }

    /// Builds the reflexive-transitive closure of a generating relation.
    pub fn from_generators(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Preorder> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter_mut().enumerate() {
            row.insert(x);
        }
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::ImageOutOfRange { image: x.max(y), len: n });
            }
            up[x].insert(y);
        }
        warshall(&mut up);
        Preorder::from_up_sets(labels, up)
    }

    /// Tabulates `leq` over all pairs and validates it.
    pub fn from_fn(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Preorder> {
        let n = labels.len();
        let matrix: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| leq(x, y)).collect()).collect();
        Preorder::from_matrix(labels, &matrix)
    }

    // Callers guarantee `up` is reflexive and transitive.
    fn from_up_sets(labels: Vec<String>, up: Vec<FixedBitSet>) -> Result<Preorder> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        Ok(Preorder {
            repr: Repr::Dense(Dense {
                labels,
                index,
                up,
                down,
                up_lookup: OnceLock::new(),
                down_lookup: OnceLock::new(),
            }),
        })
    }

    fn subsets(ground: Vec<String>, reversed: bool) -> Result<Preorder> {
        subset::check_width(ground.len())?;
        subset::check_unique(&ground)?;
        Ok(Preorder { repr: Repr::Subsets(Subsets { ground, reversed }) })
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Dense(d) => d.labels.len(),
            Repr::Subsets(s) => 1 << s.ground.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        match &self.repr {
            Repr::Dense(d) => d.up[x][y],
            Repr::Subsets(s) => {
                let (a, b) = if s.reversed { (y, x) } else { (x, y) };
                subset::is_subset(a as Mask, b as Mask)
            }
        }
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) && !self.leq(y, x)
    }

    pub fn label(&self, x: usize) -> String {
        match &self.repr {
            Repr::Dense(d) => d.labels[x].clone(),
            Repr::Subsets(s) => subset::display(&s.ground, x as Mask),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements().map(|x| self.label(x)).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        match &self.repr {
            Repr::Dense(d) => d.index.get(label).copied(),
            Repr::Subsets(_) => self.elements().find(|&x| self.label(x) == label),
        }
    }

    /// `(ground, reversed)` when this is a powerset carrier.
    pub fn as_powerset(&self) -> Option<(&[String], bool)> {
        match &self.repr {
            Repr::Subsets(s) => Some((&s.ground, s.reversed)),
            Repr::Dense(_) => None,
        }
    }

    pub fn up_set(&self, x: usize) -> FixedBitSet {
        match &self.repr {
            Repr::Dense(d) => d.up[x].clone(),
            Repr::Subsets(_) => self.collect_set(|y| self.leq(x, y)),
        }
    }

    pub fn down_set(&self, x: usize) -> FixedBitSet {
        match &self.repr {
            Repr::Dense(d) => d.down[x].clone(),
            Repr::Subsets(_) => self.collect_set(|y| self.leq(y, x)),
        }
    }

    fn collect_set(&self, keep: impl Fn(usize) -> bool) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.len());
        for y in self.elements().filter(|&y| keep(y)) {
            set.insert(y);
        }
        set
    }

    /// A linear-extension key: `x < y` implies `rank(x) < rank(y)`.
    pub fn rank(&self, x: usize) -> u32 {
        match &self.repr {
            Repr::Dense(d) => d.down[x].count_ones(..) as u32,
            Repr::Subsets(s) => {
                let ones = (x as Mask).count_ones();
                if s.reversed {
                    s.ground.len() as u32 - ones
                } else {
                    ones
                }
            }
        }
    }

    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.elements().collect();
        order.sort_by_key(|&x| (self.rank(x), x));
        order
    }

    /// Calls `f(x, y)` on a set of pairs `x <= y` whose reflexive-transitive
    /// closure is the whole relation. Enough to check monotonicity.
    pub fn for_each_generating_pair(&self, mut f: impl FnMut(usize, usize)) {
        match &self.repr {
            Repr::Dense(d) => {
                for (x, row) in d.up.iter().enumerate() {
                    for y in row.ones() {
                        if x != y {
                            f(x, y);
                        }
                    }
                }
            }
            Repr::Subsets(s) => {
                let n = s.ground.len();
                for m in 0..(1usize << n) {
                    for i in 0..n {
                        if m >> i & 1 == 0 {
                            let bigger = m | 1 << i;
                            if s.reversed {
                                f(bigger, m)
                            } else {
                                f(m, bigger)
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn dual(&self) -> Preorder {
        match &self.repr {
            Repr::Subsets(s) => Preorder {
                repr: Repr::Subsets(Subsets { ground: s.ground.clone(), reversed: !s.reversed }),
            },
            Repr::Dense(d) => Preorder {
                repr: Repr::Dense(Dense {
                    labels: d.labels.clone(),
                    index: d.index.clone(),
                    up: d.down.clone(),
                    down: d.up.clone(),
                    up_lookup: OnceLock::new(),
                    down_lookup: OnceLock::new(),
                }),
            },
        }
    }

    /// The restriction of the relation to `indices`, re-indexed in order.
    pub fn induced(&self, indices: &[usize]) -> Result<Preorder> {
        if indices.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        let k = indices.len();
        let labels = indices.iter().map(|&x| self.label(x)).collect();
        let mut up = vec![FixedBitSet::with_capacity(k); k];
        for (i, &x) in indices.iter().enumerate() {
            for (j, &y) in indices.iter().enumerate() {
                if self.leq(x, y) {
                    up[i].insert(j);
                }
            }
        }
        Preorder::from_up_sets(labels, up)
    }

    /// First pair of distinct, mutually related elements.
    pub fn antisymmetry_witness(&self) -> Option<(usize, usize)> {
        match &self.repr {
            Repr::Subsets(_) => None,
            Repr::Dense(d) => {
                for x in 0..d.up.len() {
                    let mut both = d.up[x].clone();
                    both.intersect_with(&d.down[x]);
                    if let Some(y) = both.ones().find(|&y| y != x) {
                        return Some((x.min(y), x.max(y)));
                    }
                }
                None
            }
        }
    }

    /// The unique minimum of the common upper bounds, if there is one.
    pub fn least_upper_bound(&self, x: usize, y: usize) -> Option<usize> {
        match &self.repr {
            Repr::Subsets(s) => Some(if s.reversed { x & y } else { x | y }),
            Repr::Dense(d) => {
                let mut common = d.up[x].clone();
                common.intersect_with(&d.up[y]);
                unique(d.up_lookup().get(&common))
            }
        }
    }

    pub fn greatest_lower_bound(&self, x: usize, y: usize) -> Option<usize> {
        match &self.repr {
            Repr::Subsets(s) => Some(if s.reversed { x | y } else { x & y }),
            Repr::Dense(d) => {
                let mut common = d.down[x].clone();
                common.intersect_with(&d.down[y]);
                unique(d.down_lookup().get(&common))
            }
        }
    }

    /// The unique minimum element (join of the empty set).
    pub fn minimum(&self) -> Option<usize> {
        match &self.repr {
            Repr::Subsets(s) => Some(if s.reversed { subset::full_mask(s.ground.len()) as usize } else { 0 }),
            Repr::Dense(d) => {
                let all = full_set(d.labels.len());
                unique(d.up_lookup().get(&all))
            }
        }
    }

    pub fn maximum(&self) -> Option<usize> {
        match &self.repr {
            Repr::Subsets(s) => Some(if s.reversed { 0 } else { subset::full_mask(s.ground.len()) as usize }),
            Repr::Dense(d) => {
                let all = full_set(d.labels.len());
                unique(d.down_lookup().get(&all))
            }
        }
    }

    /// True iff a minimum exists and every pair has a least upper bound.
    pub fn is_finitely_cocomplete(&self) -> bool {
        if self.minimum().is_none() {
            return false;
        }
        let cocomplete = match &self.repr {
            Repr::Subsets(_) => true,
            Repr::Dense(d) => {
                let n = d.labels.len();
                (0..n).all(|x| (x + 1..n).all(|y| self.least_upper_bound(x, y).is_some()))
            }
        };
        // a finitely cocomplete preorder is antisymmetric
        assert!(!cocomplete || self.antisymmetry_witness().is_none(), "cocomplete preorder with a cycle");
        cocomplete
    }

    pub fn into_poset(self) -> Result<Poset> {
        Poset::new(self)
    }
}

impl Dense {
    fn up_lookup(&self) -> &HashMap<FixedBitSet, Vec<usize>> {
        self.up_lookup.get_or_init(|| lookup(&self.up))
    }

    fn down_lookup(&self) -> &HashMap<FixedBitSet, Vec<usize>> {
        self.down_lookup.get_or_init(|| lookup(&self.down))
    }
}

fn lookup(rows: &[FixedBitSet]) -> HashMap<FixedBitSet, Vec<usize>> {
    let mut map: HashMap<FixedBitSet, Vec<usize>> = HashMap::with_capacity(rows.len());
    for (x, row) in rows.iter().enumerate() {
        map.entry(row.clone()).or_default().push(x);
    }
    map
}

fn unique(found: Option<&Vec<usize>>) -> Option<usize> {
    match found {
        Some(v) if v.len() == 1 => Some(v[0]),
        _ => None,
    }
}

fn full_set(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

fn warshall(up: &mut [FixedBitSet]) {
    let n = up.len();
    for k in 0..n {
        let row_k = up[k].clone();
        for row in up.iter_mut() {
            if row[k] {
                row.union_with(&row_k);
            }
        }
    }
}

impl PartialEq for Preorder {
    fn eq(&self, other: &Self) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Subsets(a), Repr::Subsets(b)) => a == b,
            (Repr::Dense(a), Repr::Dense(b)) => a.labels == b.labels && a.up == b.up,
            _ => {
                self.len() == other.len()
                    && self.elements().all(|x| self.label(x) == other.label(x))
                    && self
                        .elements()
                        .all(|x| self.elements().all(|y| self.leq(x, y) == other.leq(x, y)))
            }
        }
    }
}

/// A preorder whose relation is also antisymmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct Poset(Preorder);

impl Deref for Poset {
    type Target = Preorder;

    fn deref(&self) -> &Preorder {
        &self.0
    }
}

impl Poset {
    pub fn new(preorder: Preorder) -> Result<Poset> {
        if let Some((x, y)) = preorder.antisymmetry_witness() {
            return Err(Error::NotAntisymmetric(x, y));
        }
        Ok(Poset(preorder))
    }

    /// All subsets of `ground`, ordered by inclusion.
    pub fn powerset(ground: Vec<String>) -> Result<Poset> {
        Ok(Poset(Preorder::subsets(ground, false)?))
    }

    /// All subsets of `ground`, ordered by reverse inclusion.
    pub fn reverse_powerset(ground: Vec<String>) -> Result<Poset> {
        Ok(Poset(Preorder::subsets(ground, true)?))
    }

    pub fn from_generators(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset> {
        Poset::new(Preorder::from_generators(labels, pairs)?)
    }

    pub fn from_fn(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        Poset::new(Preorder::from_fn(labels, leq)?)
    }

    /// `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Poset> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Poset::from_fn(labels, |x, y| x <= y)
    }

    pub fn antichain(n: usize) -> Result<Poset> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Poset::from_fn(labels, |x, y| x == y)
    }

    pub fn point() -> Poset {
        Poset::chain(1).expect("one-point poset")
    }

    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        self.least_upper_bound(x, y)
    }

    pub fn meet(&self, x: usize, y: usize) -> Option<usize> {
        self.greatest_lower_bound(x, y)
    }

    pub fn bottom(&self) -> Option<usize> {
        self.minimum()
    }

    pub fn top(&self) -> Option<usize> {
        self.maximum()
    }

    /// Join of a finite family; the empty join is the bottom.
    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> Option<usize> {
        items.into_iter().try_fold(self.bottom()?, |acc, x| self.join(acc, x))
    }

    /// Meet of a finite family; the empty meet is the top.
    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> Option<usize> {
        items.into_iter().try_fold(self.top()?, |acc, x| self.meet(acc, x))
    }

    /// Finite and finitely cocomplete, hence a complete lattice.
    pub fn is_lattice(&self) -> bool {
        self.is_finitely_cocomplete()
    }

    pub fn dual(&self) -> Poset {
        Poset(self.0.dual())
    }

    pub fn induced(&self, indices: &[usize]) -> Result<Poset> {
        Ok(Poset(self.0.induced(indices)?))
    }

    /// Pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn hasse_cover(&self) -> Vec<(usize, usize)> {
        let mut covers = Vec::new();
        match &self.0.repr {
            Repr::Subsets(_) => self.for_each_generating_pair(|x, y| covers.push((x, y))),
            Repr::Dense(d) => {
                for x in 0..d.labels.len() {
                    let mut strict = d.up[x].clone();
                    strict.set(x, false);
                    let mut beyond = FixedBitSet::with_capacity(d.labels.len());
                    for z in strict.ones() {
                        let mut above_z = d.up[z].clone();
                        above_z.set(z, false);
                        beyond.union_with(&above_z);
                    }
                    strict.difference_with(&beyond);
                    covers.extend(strict.ones().map(|y| (x, y)));
                }
            }
        }
        covers.sort_unstable();
        covers
    }

    /// Number of cover steps in a longest chain.
    pub fn height(&self) -> usize {
        if let Some((ground, _)) = self.as_powerset() {
            return ground.len();
        }
        let order = self.linear_extension();
        let mut h = vec![0usize; self.len()];
        for (i, &y) in order.iter().enumerate() {
            h[y] = order[..i].iter().filter(|&&x| self.lt(x, y)).map(|&x| h[x] + 1).max().unwrap_or(0);
        }
        h.into_iter().max().unwrap_or(0)
    }

    /// Minimal elements of `set`, in index order.
    pub fn minimal_elements(&self, set: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> =
            set.iter().copied().filter(|&m| !set.iter().any(|&t| t != m && self.leq(t, m))).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The minimum of `set`, or its antichain of minimal elements.
    pub fn minimum_of(&self, set: &[usize]) -> std::result::Result<usize, Vec<usize>> {
        let Some(&cand) = set.iter().min_by_key(|&&x| (self.rank(x), x)) else {
            return Err(Vec::new());
        };
        if set.iter().all(|&t| self.leq(cand, t)) {
            Ok(cand)
        } else {
            Err(self.minimal_elements(set))
        }
    }
}

/// An order-preserving map between finite posets.
#[derive(Clone, Debug)]
pub struct MonotoneMap {
    domain: Arc<Poset>,
    codomain: Arc<Poset>,
    images: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(domain: Arc<Poset>, codomain: Arc<Poset>, images: Vec<usize>) -> Result<MonotoneMap> {
        if images.len() != domain.len() {
            return Err(Error::MapArity { expected: domain.len(), got: images.len() });
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= codomain.len()) {
            return Err(Error::ImageOutOfRange { image: bad, len: codomain.len() });
        }
        let mut witness = None;
        domain.for_each_generating_pair(|x, y| {
            if witness.is_none() && !codomain.leq(images[x], images[y]) {
                witness = Some((x, y));
            }
        });
        if let Some((x, y)) = witness {
            return Err(Error::NotMonotone(x, y));
        }
        Ok(MonotoneMap { domain, codomain, images })
    }

    pub fn from_fn(
        domain: Arc<Poset>,
        codomain: Arc<Poset>,
        f: impl Fn(usize) -> usize,
    ) -> Result<MonotoneMap> {
        let images = domain.elements().map(f).collect();
        MonotoneMap::new(domain, codomain, images)
    }

    pub fn identity(carrier: Arc<Poset>) -> MonotoneMap {
        let images = carrier.elements().collect();
        MonotoneMap { domain: carrier.clone(), codomain: carrier, images }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn domain(&self) -> &Arc<Poset> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Poset> {
        &self.codomain
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &MonotoneMap) -> Result<MonotoneMap> {
        if !same_carrier(inner.codomain(), self.domain()) {
            return Err(Error::CarrierMismatch);
        }
        let images = inner.images.iter().map(|&x| self.images[x]).collect();
        Ok(MonotoneMap { domain: inner.domain.clone(), codomain: self.codomain.clone(), images })
    }

    /// First pair of distinct elements with equal images.
    pub fn injectivity_witness(&self) -> Option<(usize, usize)> {
        let mut seen = HashMap::new();
        for (x, &y) in self.images.iter().enumerate() {
            if let Some(&first) = seen.get(&y) {
                return Some((first, x));
            }
            seen.insert(y, x);
        }
        None
    }

    /// First codomain element outside the image.
    pub fn surjectivity_witness(&self) -> Option<usize> {
        let mut hit = FixedBitSet::with_capacity(self.codomain.len());
        for &y in &self.images {
            hit.insert(y);
        }
        hit.toggle_range(..);
        hit.ones().next()
    }

    /// Pointwise order `self <= other`.
    pub fn pointwise_leq(&self, other: &MonotoneMap) -> bool {
        self.images.len() == other.images.len()
            && self.images.iter().zip(&other.images).all(|(&a, &b)| self.codomain.leq(a, b))
    }
}

impl PartialEq for MonotoneMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
            && same_carrier(&self.domain, &other.domain)
            && same_carrier(&self.codomain, &other.codomain)
    }
}

pub(crate) fn same_carrier(a: &Arc<Poset>, b: &Arc<Poset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// All order-preserving maps between two preorders, under the pointwise order.
#[derive(Clone, Debug)]
pub struct MapSpace {
    pub preorder: Preorder,
    /// `maps[k][x]` is the image of `x` under the `k`-th map.
    pub maps: Vec<Vec<usize>>,
}

pub fn map_space(domain: &Preorder, codomain: &Preorder, budget: &Budget) -> Result<MapSpace> {
    let order = domain.linear_extension();
    let mut maps = Vec::new();
    let mut current = vec![usize::MAX; domain.len()];
    extend_maps(domain, codomain, &order, 0, &mut current, &mut maps, budget)?;
    let labels = maps
        .iter()
        .map(|m| format!("[{}]", m.iter().map(|&y| codomain.label(y)).collect::<Vec<_>>().join("|")))
        .collect();
    let preorder = Preorder::from_fn(labels, |a, b| {
        maps[a].iter().zip(&maps[b]).all(|(&fa, &fb)| codomain.leq(fa, fb))
    })?;
    Ok(MapSpace { preorder, maps })
}

fn extend_maps(
    domain: &Preorder,
    codomain: &Preorder,
    order: &[usize],
    depth: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    budget: &Budget,
) -> Result<()> {
    if depth == order.len() {
        out.push(current.clone());
        return budget.check_elements(out.len());
    }
    let x = order[depth];
    for y in codomain.elements() {
        let fits = order[..depth].iter().all(|&z| {
            (!domain.leq(z, x) || codomain.leq(current[z], y))
                && (!domain.leq(x, z) || codomain.leq(y, current[z]))
        });
        if fits {
            current[x] = y;
            extend_maps(domain, codomain, order, depth + 1, current, out, budget)?;
        }
    }
    current[x] = usize::MAX;
    Ok(())
}

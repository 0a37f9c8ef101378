//! Timed contagion over a finite horizon `{0, …, T}`.
//!
//! A timed rule `(S, d)` for node `i` reads: once every node of `S` is
//! active at time `m`, node `i` is active at time `m + d`. Trajectories are
//! monotone in time, and a system maps a trajectory to the least trajectory
//! above it that is closed under every rule inside the horizon.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::contagion::Description;
use crate::error::{ensure_prop, Error, Result};
use crate::galois::Veil;
use crate::operators::{internal, ClosureOperator};
use crate::order::{map_space, Budget, MonotoneMap, Poset};
use crate::subset::{self, Mask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimedRule {
    pub set: Mask,
    pub delay: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimedDescription {
    ground: Vec<String>,
    rules: Vec<Vec<TimedRule>>,
    d_max: u32,
}

/// States `X_0 ⊆ X_1 ⊆ … ⊆ X_T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trajectory {
    pub states: Vec<Mask>,
}

impl Trajectory {
    pub fn constant(a: Mask, horizon: usize) -> Trajectory {
        Trajectory { states: vec![a; horizon + 1] }
    }

    pub fn horizon(&self) -> usize {
        self.states.len() - 1
    }

    pub fn is_monotone(&self) -> bool {
        self.states.windows(2).all(|w| subset::is_subset(w[0], w[1]))
    }

    pub fn leq(&self, other: &Trajectory) -> bool {
        self.states.iter().zip(&other.states).all(|(&a, &b)| subset::is_subset(a, b))
    }

    /// Pointwise union.
    pub fn join(&self, other: &Trajectory) -> Trajectory {
        Trajectory { states: self.states.iter().zip(&other.states).map(|(a, b)| a | b).collect() }
    }
}

/// Union over all time steps.
pub fn colim(t: &Trajectory) -> Mask {
    t.states.iter().fold(0, |acc, &x| acc | x)
}

impl TimedDescription {
    /// `d_max` defaults to the largest delay present.
    pub fn new(ground: Vec<String>, mut rules: Vec<Vec<TimedRule>>, d_max: Option<u32>) -> Result<TimedDescription> {
        subset::check_width(ground.len())?;
        subset::check_unique(&ground)?;
        if rules.len() != ground.len() {
            return Err(Error::Schema(format!("{} rule lists for {} nodes", rules.len(), ground.len())));
        }
        let full = subset::full_mask(ground.len());
        let largest = rules.iter().flatten().map(|r| r.delay).max().unwrap_or(0);
        let d_max = d_max.unwrap_or(largest);
        for r in rules.iter().flatten() {
            if r.set & !full != 0 {
                return Err(Error::Schema(format!("rule {:#b} mentions a node outside the ground set", r.set)));
            }
            if r.delay > d_max {
                return Err(Error::DelayTooLarge { delay: r.delay, d_max });
            }
        }
        for rs in &mut rules {
            rs.sort_unstable();
            rs.dedup();
        }
        Ok(TimedDescription { ground, rules, d_max })
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn rules(&self) -> &[Vec<TimedRule>] {
        &self.rules
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    /// `|Σ|·(d_max + 1)`: at most `|Σ|` activations, each at most `d_max`
    /// steps after the one enabling it.
    pub fn stabilization_bound(&self) -> usize {
        self.ground.len() * (self.d_max as usize + 1)
    }

    /// The untimed description with every delay replaced by zero.
    pub fn zero_delays(&self) -> Description {
        let rules = self.rules.iter().map(|rs| rs.iter().map(|r| r.set).collect()).collect();
        Description::new(self.ground.clone(), rules).expect("same ground and masks")
    }

    /// The least rule-closed trajectory above `a`.
    pub fn apply(&self, a: &Trajectory) -> Trajectory {
        let horizon = a.horizon();
        let mut y = a.states.clone();
        for m in 1..=horizon {
            y[m] |= y[m - 1];
        }
        loop {
            let mut changed = false;
            for m in 0..=horizon {
                for (i, rs) in self.rules.iter().enumerate() {
                    for r in rs {
                        let t = m + r.delay as usize;
                        if t <= horizon && subset::is_subset(r.set, y[m]) && y[t] >> i & 1 == 0 {
                            // activation persists from t onward
                            for state in &mut y[t..] {
                                *state |= 1 << i;
                            }
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return Trajectory { states: y };
            }
        }
    }

    /// The rule whose firing falls after the horizon, if any.
    fn pending(&self, t: &Trajectory) -> Option<(usize, TimedRule)> {
        let horizon = t.horizon();
        let last = t.states[horizon];
        for (m, &state) in t.states.iter().enumerate() {
            for (i, rs) in self.rules.iter().enumerate() {
                if last >> i & 1 == 1 {
                    continue;
                }
                if let Some(r) = rs.iter().find(|r| m + r.delay as usize > horizon && subset::is_subset(r.set, state)) {
                    return Some((i, *r));
                }
            }
        }
        None
    }

    /// The least fixed trajectory, started from the all-empty trajectory.
    pub fn eval(&self, horizon: usize) -> Result<Trajectory> {
        let t = self.apply(&Trajectory::constant(0, horizon));
        if self.pending(&t).is_some() {
            return Err(Error::HorizonTooShort { horizon });
        }
        Ok(t)
    }

    /// `a ↦ colim f(a^I)`, tabulated on the powerset.
    pub fn agg(&self, horizon: usize) -> Result<ClosureOperator> {
        let carrier = Arc::new(Poset::powerset(self.ground.clone())?);
        let images = (0..1usize << self.ground.len())
            .map(|a| colim(&self.apply(&Trajectory::constant(a as Mask, horizon))) as usize)
            .collect();
        ClosureOperator::new(carrier, images).map_err(|e| internal("agg f", e))
    }
}

pub fn timed_interpret(td: &TimedDescription, a: &Trajectory) -> Trajectory {
    td.apply(a)
}

/// Outcome of comparing `colim ∘ eval` with `eval ∘ agg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareReport {
    pub pass: bool,
    pub colim_eval: Mask,
    pub eval_agg: Mask,
}

/// `eval ∘ agg` goes through the zero-delay description, so the two sides
/// come from different engines.
pub fn commuting_square_check(td: &TimedDescription) -> Result<SquareReport> {
    let colim_eval = colim(&td.eval(td.stabilization_bound())?);
    let eval_agg = td.zero_delays().phenome();
    Ok(SquareReport { pass: colim_eval == eval_agg, colim_eval, eval_agg })
}

/// All trajectories over `{0, …, horizon}` in `2^ground`, ordered pointwise.
#[derive(Clone, Debug)]
pub struct TrajectoryLattice {
    pub poset: Arc<Poset>,
    pub trajectories: Vec<Trajectory>,
    index: HashMap<Vec<Mask>, usize>,
}

impl TrajectoryLattice {
    pub fn new(ground: Vec<String>, horizon: usize, budget: &Budget) -> Result<TrajectoryLattice> {
        let time = Poset::chain(horizon + 1)?;
        let powerset = Poset::powerset(ground)?;
        // each node picks an activation time or never
        let count = (horizon as u128 + 2).checked_pow(powerset.as_powerset().map_or(0, |(g, _)| g.len()) as u32);
        if count.is_none_or(|c| c > budget.max_elements as u128) {
            return Err(Error::SpaceTooLarge { size: count.unwrap_or(u128::MAX) as usize, cap: budget.max_elements });
        }
        let space = map_space(&time, &powerset, budget)?;
        let poset = Arc::new(space.preorder.into_poset()?);
        let trajectories: Vec<Trajectory> = space
            .maps
            .iter()
            .map(|m| Trajectory { states: m.iter().map(|&x| x as Mask).collect() })
            .collect();
        let index = trajectories.iter().enumerate().map(|(k, t)| (t.states.clone(), k)).collect();
        Ok(TrajectoryLattice { poset, trajectories, index })
    }

    pub fn index_of(&self, t: &Trajectory) -> Option<usize> {
        self.index.get(&t.states).copied()
    }

    /// The timed system as a closure operator on this lattice.
    pub fn operator(&self, td: &TimedDescription) -> Result<ClosureOperator> {
        let images = self
            .trajectories
            .iter()
            .map(|t| self.index_of(&td.apply(t)).ok_or(Error::GroundMismatch))
            .collect::<Result<Vec<_>>>()?;
        ClosureOperator::new(self.poset.clone(), images).map_err(|e| internal("timed system", e))
    }
}

/// `π_i`: keep only the frame at time `i`.
pub fn project_at(lattice: &TrajectoryLattice, ground: Vec<String>, i: usize) -> Result<Veil> {
    let horizon = lattice.trajectories[0].horizon();
    if i > horizon {
        return Err(Error::HorizonTooShort { horizon });
    }
    let phenome = Arc::new(Poset::powerset(ground)?);
    let states: Vec<usize> = lattice.trajectories.iter().map(|t| t.states[i] as usize).collect();
    let veil = Veil::check(MonotoneMap::new(lattice.poset.clone(), phenome.clone(), states)?)?;
    for p in phenome.elements() {
        let expected = Trajectory {
            states: (0..=horizon).map(|j| if j >= i { p as Mask } else { 0 }).collect(),
        };
        ensure_prop!(
            lattice.index_of(&expected) == Some(veil.left_adjoint(p)),
            "left adjoint of the projection at {i} is not the step trajectory of {p}"
        );
    }
    Ok(veil)
}

/// A behaviour: a set of tuples in `U_1 × … × U_n`, by coordinate index.
pub type Behavior = BTreeSet<Vec<usize>>;

/// Largest product universum for [`filtration`].
pub const MAX_UNIVERSUM: usize = 1 << 16;

/// `F_i B = p_i⁻¹ p_i B` for each coordinate `i` (0-based).
pub fn filtration(sizes: &[usize], behavior: &Behavior) -> Result<Vec<Behavior>> {
    let total = sizes.iter().try_fold(1usize, |acc, &k| acc.checked_mul(k)).unwrap_or(usize::MAX);
    if total > MAX_UNIVERSUM {
        return Err(Error::SpaceTooLarge { size: total, cap: MAX_UNIVERSUM });
    }
    if let Some(bad) = behavior.iter().find(|u| u.len() != sizes.len() || u.iter().zip(sizes).any(|(&x, &k)| x >= k)) {
        return Err(Error::Schema(format!("tuple {bad:?} is not in the universum")));
    }
    let universum: Vec<Vec<usize>> = sizes
        .iter()
        .fold(vec![Vec::new()], |acc, &k| {
            acc.into_iter().flat_map(|prefix| (0..k).map(move |x| [prefix.clone(), vec![x]].concat())).collect()
        });
    Ok((0..sizes.len())
        .map(|i| {
            let shadow: BTreeSet<usize> = behavior.iter().map(|u| u[i]).collect();
            universum.iter().filter(|u| shadow.contains(&u[i])).cloned().collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::SearchMode;

    fn ab() -> Vec<String> {
        vec!["A".into(), "B".into()]
    }

    const A: Mask = 0b01;
    const B: Mask = 0b10;

    fn delayed() -> TimedDescription {
        TimedDescription::new(
            ab(),
            vec![vec![TimedRule { set: 0, delay: 0 }], vec![TimedRule { set: A, delay: 2 }]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn delayed_eval() {
        let td = delayed();
        assert_eq!(td.stabilization_bound(), 6);
        let t = td.eval(6).unwrap();
        assert_eq!(t.states, vec![A, A, A | B, A | B, A | B, A | B, A | B]);
        assert!(matches!(td.eval(1), Err(Error::HorizonTooShort { horizon: 1 })));
    }

    #[test]
    fn agg_replaces_delays_by_zero() {
        let td = delayed();
        let untimed = Description::new(ab(), vec![vec![0], vec![A]]).unwrap();
        assert_eq!(td.zero_delays(), untimed);
        assert_eq!(td.agg(6).unwrap().images(), untimed.interpret().unwrap().images());
    }

    #[test]
    fn no_rules() {
        let td = TimedDescription::new(ab(), vec![vec![], vec![]], None).unwrap();
        assert_eq!(td.eval(0).unwrap().states, vec![0]);
        assert_eq!(td.agg(0).unwrap().images(), &[0, 1, 2, 3]);
        let r = commuting_square_check(&td).unwrap();
        assert_eq!((r.pass, r.colim_eval, r.eval_agg), (true, 0, 0));
    }

    #[test]
    fn square_with_unit_delays() {
        let td = TimedDescription::new(
            ab(),
            vec![vec![TimedRule { set: 0, delay: 1 }], vec![TimedRule { set: A, delay: 1 }]],
            None,
        )
        .unwrap();
        let r = commuting_square_check(&td).unwrap();
        assert!(r.pass);
        assert_eq!(r.colim_eval, A | B);
    }

    #[test]
    fn delay_cap_is_enforced() {
        let err = TimedDescription::new(ab(), vec![vec![TimedRule { set: 0, delay: 3 }], vec![]], Some(2));
        assert!(matches!(err, Err(Error::DelayTooLarge { delay: 3, d_max: 2 })));
    }

    #[test]
    fn projections_are_effect_free_veils() {
        let budget = Budget::default();
        let lattice = TrajectoryLattice::new(ab(), 2, &budget).unwrap();
        assert_eq!(lattice.trajectories.len(), 16);
        for i in 0..=2 {
            let v = project_at(&lattice, ab(), i).unwrap();
            assert!(v.detect_effects(SearchMode::Exhaustive, &budget).unwrap().is_empty());
        }
    }

    #[test]
    fn timed_system_is_a_closure_on_trajectories() {
        let lattice = TrajectoryLattice::new(ab(), 3, &Budget::default()).unwrap();
        let f = lattice.operator(&delayed()).unwrap();
        let bottom = lattice.index_of(&Trajectory::constant(0, 3)).unwrap();
        assert_eq!(lattice.trajectories[f.apply(bottom)].states, vec![A, A, A | B, A | B]);
    }

    #[test]
    fn filtration_examples() {
        let b: Behavior = [vec![0, 0]].into_iter().collect();
        let f = filtration(&[2, 2], &b).unwrap();
        assert_eq!(f[0], [vec![0, 0], vec![0, 1]].into_iter().collect());
        assert_eq!(f[1], [vec![0, 0], vec![1, 0]].into_iter().collect());
        let full: Behavior = [vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]].into_iter().collect();
        assert!(filtration(&[2, 2], &full).unwrap().iter().all(|x| *x == full));
        assert!(filtration(&[2, 2], &Behavior::new()).unwrap().iter().all(|x| x.is_empty()));
    }
}

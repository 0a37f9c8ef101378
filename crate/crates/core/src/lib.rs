//! Finite order theory for detecting generative effects.
//!
//! A *veil* is an order-preserving map from systems to phenomes in which
//! every phenome has a unique simplest explaining system. A pair of systems
//! sustains a generative effect when the phenome of their join differs from
//! the join of their phenomes. This crate builds the finite carriers, the
//! closure and kernel operators behind such effects, contagion systems and
//! their timed variants, and the quotient and filter lifts that repair maps
//! which fail to be veils.

pub mod contagion;
pub mod dot;
pub mod dynamical;
pub mod error;
pub mod galois;
pub mod io;
pub mod lifts;
pub mod operators;
pub mod order;
pub mod random;
pub mod subset;

pub use error::{Axiom, AxiomWitness, Error, PreorderViolation, Result};
pub use order::{map_space, Budget, MapSpace, MonotoneMap, Poset, Preorder};
pub use subset::Mask;
pub use galois::{check_veil, compose, veil_by_meets, EffectWitness, SearchMode, Veil};
pub use operators::{ClosureOperator, KernelOperator, MooreFamily};

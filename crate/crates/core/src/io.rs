//! JSON schemas for posets, maps, operators, descriptions and veils.
//!
//! Elements are referred to by label. Subsets of a powerset carrier may
//! also be written as arrays of ground labels, and are always emitted that
//! way.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::contagion::{phenome_veil, threshold_description, zoom_in_veil, Description};
use crate::dynamical::{project_at, TimedDescription, TimedRule, TrajectoryLattice};
use crate::error::{Error, Result};
use crate::galois::{stock, EffectWitness, Veil};
use crate::order::{Budget, MonotoneMap, Poset, Preorder};
use crate::subset;

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PosetSpec {
    Powerset {
        powerset: Vec<String>,
        #[serde(default, skip_serializing_if = "is_false")]
        reversed: bool,
    },
    /// `leq` lists generating pairs; the reflexive-transitive closure is taken.
    Explicit {
        elements: Vec<String>,
        #[serde(default)]
        leq: Vec<(String, String)>,
    },
}

impl PosetSpec {
    pub fn build_preorder(&self) -> Result<Preorder> {
        match self {
            PosetSpec::Powerset { .. } => Ok((*self.build()?).clone()),
            PosetSpec::Explicit { elements, leq } => {
                subset::check_unique(elements)?;
                let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
                let lookup = |l: &String| index.get(l.as_str()).copied().ok_or_else(|| Error::UnknownLabel(l.clone()));
                let pairs = leq.iter().map(|(a, b)| Ok((lookup(a)?, lookup(b)?))).collect::<Result<Vec<_>>>()?;
                Preorder::from_generators(elements.clone(), &pairs)
            }
        }
    }

    pub fn build(&self) -> Result<Poset> {
        match self {
            PosetSpec::Powerset { powerset, reversed: false } => Poset::powerset(powerset.clone()),
            PosetSpec::Powerset { powerset, reversed: true } => Poset::reverse_powerset(powerset.clone()),
            PosetSpec::Explicit { .. } => Poset::new(self.build_preorder()?),
        }
    }

    /// Explicit carriers are written with their Hasse cover pairs.
    pub fn describe(p: &Poset) -> PosetSpec {
        match p.as_powerset() {
            Some((ground, reversed)) => PosetSpec::Powerset { powerset: ground.to_vec(), reversed },
            None => PosetSpec::Explicit {
                elements: p.labels(),
                leq: p.hasse_cover().into_iter().map(|(a, b)| (p.label(a), p.label(b))).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Label(String),
    Members(Vec<String>),
}

pub fn resolve(p: &Poset, r: &ElementRef) -> Result<usize> {
    match (p.as_powerset(), r) {
        (Some((ground, _)), ElementRef::Members(m)) => Ok(subset::parse(ground, m)? as usize),
        (Some((ground, _)), ElementRef::Label(l)) => {
            if let Some(i) = ground.iter().position(|g| g == l) {
                return Ok(1 << i);
            }
            p.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone()))
        }
        (None, ElementRef::Label(l)) => p.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone())),
        (None, ElementRef::Members(m)) => {
            Err(Error::Schema(format!("label array {m:?} given for an element of an explicit poset")))
        }
    }
}

pub fn element_ref(p: &Poset, x: usize) -> ElementRef {
    match p.as_powerset() {
        Some((ground, _)) => ElementRef::Members(subset::labels_of(ground, x as subset::Mask)),
        None => ElementRef::Label(p.label(x)),
    }
}

fn tabulate(domain: &Poset, codomain: &Poset, pairs: &[(ElementRef, ElementRef)]) -> Result<Vec<usize>> {
    let mut images = vec![None; domain.len()];
    for (x, y) in pairs {
        let (x, y) = (resolve(domain, x)?, resolve(codomain, y)?);
        match images[x] {
            Some(prev) if prev != y => {
                return Err(Error::Schema(format!("two images given for {}", domain.label(x))));
            }
            _ => images[x] = Some(y),
        }
    }
    images
        .iter()
        .enumerate()
        .map(|(x, y)| y.ok_or_else(|| Error::Schema(format!("no image given for {}", domain.label(x)))))
        .collect()
}

fn pairs_of(domain: &Poset, codomain: &Poset, images: &[usize]) -> Vec<(ElementRef, ElementRef)> {
    images.iter().enumerate().map(|(x, &y)| (element_ref(domain, x), element_ref(codomain, y))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub domain: PosetSpec,
    pub codomain: PosetSpec,
    pub map: Vec<(ElementRef, ElementRef)>,
}

impl MapSpec {
    pub fn build(&self) -> Result<MonotoneMap> {
        let domain = Arc::new(self.domain.build()?);
        let codomain = Arc::new(self.codomain.build()?);
        let images = tabulate(&domain, &codomain, &self.map)?;
        MonotoneMap::new(domain, codomain, images)
    }

    pub fn describe(f: &MonotoneMap) -> MapSpec {
        MapSpec {
            domain: PosetSpec::describe(f.domain()),
            codomain: PosetSpec::describe(f.codomain()),
            map: pairs_of(f.domain(), f.codomain(), f.images()),
        }
    }
}

/// A self-map awaiting operator axiom checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub carrier: PosetSpec,
    pub map: Vec<(ElementRef, ElementRef)>,
}

impl OperatorSpec {
    pub fn build(&self) -> Result<(Arc<Poset>, Vec<usize>)> {
        let carrier = Arc::new(self.carrier.build()?);
        let images = tabulate(&carrier, &carrier, &self.map)?;
        Ok((carrier, images))
    }

    pub fn describe(carrier: &Poset, images: &[usize]) -> OperatorSpec {
        OperatorSpec { carrier: PosetSpec::describe(carrier), map: pairs_of(carrier, carrier, images) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RulesForm {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub rules: BTreeMap<String, Vec<Vec<String>>>,
}

/// Every `k`-subset of a node's neighbours is a rule for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdForm {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    pub thresholds: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DescriptionSpec {
    Rules(RulesForm),
    Threshold(ThresholdForm),
}

fn node_index(nodes: &[String], l: &str) -> Result<usize> {
    nodes.iter().position(|n| n == l).ok_or_else(|| Error::UnknownLabel(l.to_string()))
}

impl DescriptionSpec {
    pub fn build(&self) -> Result<Description> {
        match self {
            DescriptionSpec::Rules(RulesForm { nodes, rules }) => {
                subset::check_width(nodes.len())?;
                subset::check_unique(nodes)?;
                let mut table = vec![Vec::new(); nodes.len()];
                for (node, sets) in rules {
                    let i = node_index(nodes, node)?;
                    for s in sets {
                        table[i].push(subset::parse(nodes, s)?);
                    }
                }
                Description::new(nodes.clone(), table)
            }
            DescriptionSpec::Threshold(ThresholdForm { nodes, edges, thresholds }) => {
                subset::check_unique(nodes)?;
                let edges = edges
                    .iter()
                    .map(|(a, b)| Ok((node_index(nodes, a)?, node_index(nodes, b)?)))
                    .collect::<Result<Vec<_>>>()?;
                for key in thresholds.keys() {
                    node_index(nodes, key)?;
                }
                let ks = nodes
                    .iter()
                    .map(|n| thresholds.get(n).copied().ok_or_else(|| Error::Schema(format!("no threshold for {n}"))))
                    .collect::<Result<Vec<_>>>()?;
                threshold_description(nodes.clone(), &edges, &ks)
            }
        }
    }

    pub fn describe(d: &Description) -> DescriptionSpec {
        let rules = d
            .ground()
            .iter()
            .zip(d.rules())
            .map(|(n, rs)| (n.clone(), rs.iter().map(|&r| subset::labels_of(d.ground(), r)).collect()))
            .collect();
        DescriptionSpec::Rules(RulesForm { nodes: d.ground().to_vec(), rules })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimedRuleSpec {
    pub set: Vec<String>,
    pub delay: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimedSpec {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub rules: BTreeMap<String, Vec<TimedRuleSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_max: Option<u32>,
}

impl TimedSpec {
    pub fn build(&self) -> Result<TimedDescription> {
        subset::check_width(self.nodes.len())?;
        subset::check_unique(&self.nodes)?;
        let mut table = vec![Vec::new(); self.nodes.len()];
        for (node, rules) in &self.rules {
            let i = node_index(&self.nodes, node)?;
            for r in rules {
                table[i].push(TimedRule { set: subset::parse(&self.nodes, &r.set)?, delay: r.delay });
            }
        }
        TimedDescription::new(self.nodes.clone(), table, self.d_max)
    }
}

/// The ready-made veils, selected by the `stock` field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stock", rename_all = "snake_case", deny_unknown_fields)]
pub enum StockSpec {
    /// Least fixed points on all closure operators; `systems` names some of
    /// them by description.
    Contagion {
        nodes: Vec<String>,
        #[serde(default)]
        systems: BTreeMap<String, DescriptionSpec>,
    },
    ForallRelation { a: Vec<String>, b: Vec<String> },
    ExistsRelation { a: Vec<String>, b: Vec<String> },
    /// The existential projection under inclusion; not a veil.
    ExistsProjection { a: Vec<String>, b: Vec<String> },
    BehaviorProjection { s: Vec<String>, s_prime: Vec<String> },
    Interdependence { s: Vec<String>, s_prime: Vec<String> },
    TransitiveClosure { nodes: Vec<String> },
    ZoomIn { description: DescriptionSpec },
    Identity { carrier: PosetSpec },
    ProjectAt { nodes: Vec<String>, horizon: usize, time: usize },
}

/// A veil document: either a stock constructor or an explicit map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VeilSpec {
    Stock(StockSpec),
    Map(MapSpec),
}

impl VeilSpec {
    pub fn from_value(v: Value) -> Result<VeilSpec> {
        if v.get("stock").is_some() {
            Ok(VeilSpec::Stock(serde_json::from_value(v)?))
        } else {
            Ok(VeilSpec::Map(serde_json::from_value(v)?))
        }
    }

    /// The candidate map, plus display names for some systems.
    pub fn build(&self, budget: &Budget) -> Result<(MonotoneMap, BTreeMap<usize, String>)> {
        let plain = |v: Result<Veil>| v.map(|v| (v.map().clone(), BTreeMap::new()));
        match self {
            VeilSpec::Map(m) => Ok((m.build()?, BTreeMap::new())),
            VeilSpec::Stock(s) => match s {
                StockSpec::Contagion { nodes, systems } => {
                    let pv = phenome_veil(nodes.clone())?;
                    let mut names = BTreeMap::new();
                    for (name, d) in systems {
                        let d = d.build()?;
                        if d.ground() != nodes.as_slice() {
                            return Err(Error::GroundMismatch);
                        }
                        names.entry(pv.index_of_description(&d)?).or_insert_with(|| name.clone());
                    }
                    Ok((pv.veil.map().clone(), names))
                }
                StockSpec::ForallRelation { a, b } => plain(stock::forall_relation(a, b)),
                StockSpec::ExistsRelation { a, b } => plain(stock::exists_relation(a, b)),
                StockSpec::ExistsProjection { a, b } => Ok((stock::exists_projection_map(a, b)?, BTreeMap::new())),
                StockSpec::BehaviorProjection { s, s_prime } => plain(stock::behavior_projection(s, s_prime)),
                StockSpec::Interdependence { s, s_prime } => plain(stock::interdependence(s, s_prime)),
                StockSpec::TransitiveClosure { nodes } => plain(stock::transitive_closure(nodes)),
                StockSpec::ZoomIn { description } => plain(zoom_in_veil(&description.build()?.interpret()?)),
                StockSpec::Identity { carrier } => plain(stock::identity(Arc::new(carrier.build()?))),
                StockSpec::ProjectAt { nodes, horizon, time } => {
                    let lattice = TrajectoryLattice::new(nodes.clone(), *horizon, budget)?;
                    plain(project_at(&lattice, nodes.clone(), *time))
                }
            },
        }
    }
}

/// A witness with elements written by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub s: ElementRef,
    pub s_prime: ElementRef,
    pub lhs: ElementRef,
    pub rhs: ElementRef,
}

pub fn system_ref(veil: &Veil, names: &BTreeMap<usize, String>, s: usize) -> ElementRef {
    match names.get(&s) {
        Some(n) => ElementRef::Label(n.clone()),
        None => element_ref(veil.system(), s),
    }
}

impl WitnessRecord {
    pub fn new(veil: &Veil, names: &BTreeMap<usize, String>, w: &EffectWitness) -> WitnessRecord {
        WitnessRecord {
            s: system_ref(veil, names, w.s),
            s_prime: system_ref(veil, names, w.s_prime),
            lhs: element_ref(veil.phenome(), w.lhs),
            rhs: element_ref(veil.phenome(), w.rhs),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_round_trip() {
        let spec: PosetSpec = serde_json::from_str(r#"{"elements":["a","b","c"],"leq":[["a","b"],["b","c"]]}"#).unwrap();
        let p = spec.build().unwrap();
        assert!(p.leq(0, 2));
        let again = PosetSpec::describe(&p).build().unwrap();
        assert_eq!(p, again);
        let ps: PosetSpec = serde_json::from_str(r#"{"powerset":["A","B"]}"#).unwrap();
        assert_eq!(ps.build().unwrap().len(), 4);
    }

    #[test]
    fn unknown_label_is_reported() {
        let spec: PosetSpec = serde_json::from_str(r#"{"elements":["a"],"leq":[["a","z"]]}"#).unwrap();
        assert!(matches!(spec.build(), Err(Error::UnknownLabel(l)) if l == "z"));
    }

    #[test]
    fn descriptions_parse_both_forms() {
        let rules: DescriptionSpec =
            serde_json::from_str(r#"{"nodes":["A","B"],"rules":{"B":[["A"]],"A":[[]]}}"#).unwrap();
        let threshold: DescriptionSpec = serde_json::from_str(
            r#"{"nodes":["A","B"],"edges":[["A","B"]],"thresholds":{"A":0,"B":1}}"#,
        )
        .unwrap();
        assert_eq!(rules.build().unwrap(), threshold.build().unwrap());
        let d = rules.build().unwrap();
        assert_eq!(DescriptionSpec::describe(&d).build().unwrap(), d);
    }

    #[test]
    fn map_spec_round_trip() {
        let doc = r#"{"domain":{"powerset":["A","B"]},"codomain":{"elements":["0","1"],"leq":[["0","1"]]},
                      "map":[[[],"0"],[["A"],"1"],[["B"],"0"],[["A","B"],"1"]]}"#;
        let f = serde_json::from_str::<MapSpec>(doc).unwrap().build().unwrap();
        assert_eq!(f.images(), &[0, 1, 0, 1]);
        let back = MapSpec::describe(&f);
        assert_eq!(back.build().unwrap(), f);
        let text = serde_json::to_string(&back).unwrap();
        assert_eq!(serde_json::from_str::<MapSpec>(&text).unwrap(), back);
    }

    #[test]
    fn incomplete_map_is_a_schema_error() {
        let doc = r#"{"domain":{"powerset":["A"]},"codomain":{"powerset":["A"]},"map":[[[],[]]]}"#;
        assert!(matches!(serde_json::from_str::<MapSpec>(doc).unwrap().build(), Err(Error::Schema(_))));
    }

    #[test]
    fn stock_veil_parses() {
        let v = VeilSpec::from_value(serde_json::json!({"stock": "forall_relation", "a": ["1"], "b": ["1", "2"]})).unwrap();
        let (m, _) = v.build(&Budget::default()).unwrap();
        assert_eq!(m.domain().len(), 4);
        let bad = VeilSpec::from_value(serde_json::json!({"stock": "nonsense"}));
        assert!(matches!(bad, Err(Error::Json(_))));
    }
}

//! Finite models: domains and interpretation tables for declared entities.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::construction::Entity;
use crate::number::Number;
use crate::syntax::{Decl, KbFile};
use crate::types::{BaseType, TilType};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Model {
    pub individuals: Vec<Entity>,
    pub worlds: Vec<Arc<str>>,
    /// Time points; also the finite domain of `tau` for quantification.
    pub times: Option<Vec<Number>>,
    /// Extensions of intensions at `(name, world, time)`; `None` is an
    /// explicitly undefined cell.
    pub intensions: BTreeMap<(Arc<str>, Arc<str>, Number), Option<Entity>>,
    /// Values of non-intensional named entities.
    pub extensions: BTreeMap<Arc<str>, Option<Entity>>,
    pub actual: Option<(Arc<str>, Number)>,
}

impl Model {
    /// The model described by a knowledge base, or `None` when it declares
    /// no domains, values or actual point.
    pub fn from_kb(kb: &KbFile) -> Option<Model> {
        let mut m = Model::default();
        let mut any = false;
        let mut iota = None;
        let mut omega = None;
        for d in &kb.decls {
            match d {
                Decl::Domain { base, values } => {
                    any = true;
                    match base {
                        BaseType::Individual => iota = Some(values.clone()),
                        BaseType::World => {
                            omega = Some(values.iter().filter_map(|v| v.symbol_name().map(Arc::from)).collect())
                        }
                        BaseType::Real => {
                            m.times = Some(
                                values
                                    .iter()
                                    .filter_map(|v| match v {
                                        Entity::Number(n) => Some(n.clone()),
                                        _ => None,
                                    })
                                    .collect(),
                            )
                        }
                        BaseType::Bool => {}
                    }
                }
                Decl::Actual { world, time } => {
                    any = true;
                    m.actual = Some((world.clone(), time.clone()));
                }
                Decl::Value(mv) => {
                    any = true;
                    let name: Arc<str> = mv.name.as_str().into();
                    match &mv.at {
                        Some((w, t)) => {
                            m.intensions.insert((name, w.clone(), t.clone()), mv.value.clone());
                        }
                        None => {
                            m.extensions.insert(name, mv.value.clone());
                        }
                    }
                }
                _ => {}
            }
        }
        if !any {
            return None;
        }
        m.individuals = iota.unwrap_or_else(|| kb.symbols.individuals());
        m.worlds = omega.unwrap_or_else(|| {
            let mut ws: Vec<Arc<str>> =
                kb.symbols.worlds().iter().filter_map(|w| w.symbol_name().map(Arc::from)).collect();
            for ((_, w, _), _) in m.intensions.iter() {
                if !ws.contains(w) {
                    ws.push(w.clone());
                }
            }
            if let Some((w, _)) = &m.actual {
                if !ws.contains(w) {
                    ws.push(w.clone());
                }
            }
            ws
        });
        if m.times.is_none() {
            let mut ts: Vec<Number> = m.intensions.keys().map(|(_, _, t)| t.clone()).collect();
            if let Some((_, t)) = &m.actual {
                ts.push(t.clone());
            }
            ts.sort();
            ts.dedup();
            if !ts.is_empty() {
                m.times = Some(ts);
            }
        }
        Some(m)
    }

    /// The finite domain of a type, where one is available.
    pub fn domain(&self, ty: &TilType) -> Option<Vec<Entity>> {
        match ty {
            TilType::Base(BaseType::Bool) => Some(vec![Entity::Truth(false), Entity::Truth(true)]),
            TilType::Base(BaseType::Individual) => Some(self.individuals.clone()),
            TilType::Base(BaseType::World) => Some(self.worlds.iter().map(|w| Entity::World(w.clone())).collect()),
            TilType::Base(BaseType::Real) => {
                self.times.as_ref().map(|ts| ts.iter().cloned().map(Entity::Number).collect())
            }
            _ => None,
        }
    }

    /// `None` when the cell is undefined or absent.
    pub fn intension_at(&self, name: &str, world: &str, time: &Number) -> Option<&Entity> {
        let key = (Arc::<str>::from(name), Arc::<str>::from(world), time.clone());
        if let Some(v) = self.intensions.get(&key) {
            return v.as_ref();
        }
        // tolerate a time written in another representation
        self.intensions
            .iter()
            .find(|((n, w, t), _)| &**n == name && &**w == world && t.numeric_eq(time))
            .and_then(|(_, v)| v.as_ref())
    }

    pub fn extension(&self, name: &str) -> Option<&Entity> {
        self.extensions.get(name).and_then(Option::as_ref)
    }
}

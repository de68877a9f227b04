//! Names in scope for parsing: entities, declared variables and type
//! aliases.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::construction::{Builtin, Entity, Var};
use crate::number::Number;
use crate::types::TilType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("`{0}` is already declared")]
    Duplicate(String),
    #[error("`{0}` is a reserved name")]
    Reserved(String),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SymbolTable {
    entities: BTreeMap<String, Entity>,
    vars: BTreeMap<String, Var>,
    aliases: BTreeMap<String, TilType>,
}

impl SymbolTable {
    /// Builtins, `True`, `False`, `pi`, and the customary `w, t, w', t'`.
    pub fn standard() -> Self {
        let mut t = SymbolTable::default();
        for b in Builtin::ALL {
            t.entities.insert(b.name().to_string(), Entity::Builtin(b));
        }
        t.entities.insert("True".into(), Entity::Truth(true));
        t.entities.insert("False".into(), Entity::Truth(false));
        t.entities.insert("pi".into(), Entity::Number(Number::pi()));
        for (name, ty) in [("w", TilType::omega()), ("t", TilType::tau()), ("w'", TilType::omega()), ("t'", TilType::tau())] {
            t.vars.insert(name.into(), Var::new(name, ty));
        }
        t
    }

    pub fn is_reserved(name: &str) -> bool {
        Builtin::from_name(name).is_some() || matches!(name, "True" | "False" | "pi")
    }

    fn check_fresh(&self, name: &str) -> Result<(), SymbolError> {
        if Self::is_reserved(name) {
            return Err(SymbolError::Reserved(name.into()));
        }
        if self.entities.contains_key(name) || self.aliases.contains_key(name) {
            return Err(SymbolError::Duplicate(name.into()));
        }
        Ok(())
    }

    /// Declares `name : ty`; individuals become `Entity::Individual`, worlds
    /// `Entity::World`, everything else `Entity::Named`.
    pub fn declare(&mut self, name: &str, ty: TilType) -> Result<Entity, SymbolError> {
        self.check_fresh(name)?;
        let e = if ty == TilType::iota() {
            Entity::individual(name)
        } else if ty == TilType::omega() {
            Entity::World(name.into())
        } else {
            Entity::named(name, ty)
        };
        self.entities.insert(name.to_string(), e.clone());
        Ok(e)
    }

    pub fn declare_var(&mut self, var: Var) -> Result<(), SymbolError> {
        let name = var.name.to_string();
        if Self::is_reserved(&name) {
            return Err(SymbolError::Reserved(name));
        }
        match self.vars.get(&name) {
            Some(existing) if existing == &var => Ok(()),
            Some(_) if matches!(name.as_str(), "w" | "t" | "w'" | "t'") => {
                self.vars.insert(name, var);
                Ok(())
            }
            Some(_) => Err(SymbolError::Duplicate(name)),
            None => {
                self.vars.insert(name, var);
                Ok(())
            }
        }
    }

    pub fn declare_alias(&mut self, name: &str, ty: TilType) -> Result<(), SymbolError> {
        self.check_fresh(name)?;
        if crate::types::BaseType::from_keyword(name).is_some() {
            return Err(SymbolError::Reserved(name.into()));
        }
        self.aliases.insert(name.to_string(), ty);
        Ok(())
    }

    pub fn entity(&self, name: &str) -> Option<&Entity> {
        self.entities.get(name)
    }

    pub fn var(&self, name: &str) -> Option<&Var> {
        self.vars.get(name)
    }

    pub fn alias(&self, name: &str) -> Option<&TilType> {
        self.aliases.get(name)
    }

    /// Entities declared beyond the standard ones, in name order.
    pub fn declared_entities(&self) -> impl Iterator<Item = (&str, &Entity)> {
        self.entities
            .iter()
            .filter(|(n, _)| !Self::is_reserved(n))
            .map(|(n, e)| (n.as_str(), e))
    }

    pub fn individuals(&self) -> Vec<Entity> {
        self.entities.values().filter(|e| matches!(e, Entity::Individual(_))).cloned().collect()
    }

    pub fn worlds(&self) -> Vec<Entity> {
        self.entities.values().filter(|e| matches!(e, Entity::World(_))).cloned().collect()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.vars.values()
    }

    pub fn aliases(&self) -> impl Iterator<Item = (&str, &TilType)> {
        self.aliases.iter().map(|(n, t)| (n.as_str(), t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_table_resolves_builtins() {
        let t = SymbolTable::standard();
        assert_eq!(t.entity("Cot"), Some(&Entity::Builtin(Builtin::Cot)));
        assert_eq!(t.entity("pi"), Some(&Entity::Number(Number::pi())));
        assert_eq!(t.var("w").unwrap().ty, TilType::omega());
    }

    #[test]
    fn duplicates_and_reserved_names_rejected() {
        let mut t = SymbolTable::standard();
        assert_eq!(t.declare("Tom", TilType::iota()), Ok(Entity::individual("Tom")));
        assert_eq!(t.declare("Tom", TilType::iota()), Err(SymbolError::Duplicate("Tom".into())));
        assert_eq!(t.declare("And", TilType::iota()), Err(SymbolError::Reserved("And".into())));
        assert!(t.declare_var(Var::new("x", TilType::iota())).is_ok());
        assert!(t.declare_var(Var::new("x", TilType::tau())).is_err());
    }
}

//! Ramified type hierarchy: base types, functional types and construction
//! orders `*n`.

use std::fmt;

/// The four ground types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseType {
    /// `o`, truth values.
    Bool,
    /// `iota`, individuals.
    Individual,
    /// `tau`, real numbers doubling as times.
    Real,
    /// `omega`, possible worlds.
    World,
}

impl BaseType {
    pub fn keyword(self) -> &'static str {
        match self {
            BaseType::Bool => "o",
            BaseType::Individual => "iota",
            BaseType::Real => "tau",
            BaseType::World => "omega",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "o" => Some(BaseType::Bool),
            "iota" => Some(BaseType::Individual),
            "tau" => Some(BaseType::Real),
            "omega" => Some(BaseType::World),
            _ => None,
        }
    }
}

/// A ramified type.
///
/// `Func` stores the result first, mirroring the `(α β1 ... βm)` notation of
/// partial mappings from `β1 × ... × βm` to `α`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TilType {
    Base(BaseType),
    Func(Box<TilType>, Vec<TilType>),
    /// `*n`: the type of constructions of order `n`.
    Order(u32),
}

impl TilType {
    pub fn o() -> Self {
        TilType::Base(BaseType::Bool)
    }

    pub fn iota() -> Self {
        TilType::Base(BaseType::Individual)
    }

    pub fn tau() -> Self {
        TilType::Base(BaseType::Real)
    }

    pub fn omega() -> Self {
        TilType::Base(BaseType::World)
    }

    /// Builds `(result args...)`.
    ///
    /// Panics when `args` is empty; functional types are at least unary.
    pub fn func(result: TilType, args: Vec<TilType>) -> Self {
        assert!(!args.is_empty(), "functional type needs at least one argument");
        TilType::Func(Box::new(result), args)
    }

    pub fn order(n: u32) -> Self {
        assert!(n >= 1, "construction order starts at 1");
        TilType::Order(n)
    }

    /// `α` ↦ `((α tau) omega)`, the type of α-intensions.
    pub fn intension(of: TilType) -> Self {
        TilType::func(TilType::func(of, vec![TilType::tau()]), vec![TilType::omega()])
    }

    /// The proposition type `((o tau) omega)`.
    pub fn proposition() -> Self {
        TilType::intension(TilType::o())
    }

    /// Unwraps `((α tau) omega)` into `α`.
    pub fn intension_of(&self) -> Option<&TilType> {
        match self {
            TilType::Func(chron, args) if args.len() == 1 && args[0] == TilType::omega() => {
                match chron.as_ref() {
                    TilType::Func(inner, targs) if targs.len() == 1 && targs[0] == TilType::tau() => {
                        Some(inner)
                    }
                    _ => None,
                }
            }
            _ => None,
        }
    }

    pub fn is_bool(&self) -> bool {
        matches!(self, TilType::Base(BaseType::Bool))
    }

    /// The least `n` such that this type is a type of order `n`.
    pub fn type_order(&self) -> u32 {
        match self {
            TilType::Base(_) => 1,
            TilType::Order(n) => n + 1,
            TilType::Func(res, args) => args
                .iter()
                .map(TilType::type_order)
                .fold(res.type_order(), u32::max),
        }
    }

    /// Argument and result types when this is a functional type.
    pub fn as_func(&self) -> Option<(&TilType, &[TilType])> {
        match self {
            TilType::Func(res, args) => Some((res, args)),
            _ => None,
        }
    }

    /// Renders with the `T@tw` abbreviation applied wherever an intension
    /// type occurs.
    pub fn compact(&self) -> String {
        if let Some(inner) = self.intension_of() {
            return format!("{}@tw", inner.compact());
        }
        match self {
            TilType::Base(b) => b.keyword().to_string(),
            TilType::Order(n) => format!("*{n}"),
            TilType::Func(res, args) => {
                let mut out = format!("({}", res.compact());
                for a in args {
                    out.push(' ');
                    out.push_str(&a.compact());
                }
                out.push(')');
                out
            }
        }
    }
}

impl fmt::Display for TilType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TilType::Base(b) => f.write_str(b.keyword()),
            TilType::Order(n) => write!(f, "*{n}"),
            TilType::Func(res, args) => {
                write!(f, "({res}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proposition_renders_in_full_and_compact() {
        let p = TilType::proposition();
        assert_eq!(p.to_string(), "((o tau) omega)");
        assert_eq!(p.compact(), "o@tw");
        assert_eq!(p.intension_of(), Some(&TilType::o()));
    }

    #[test]
    fn orders() {
        assert_eq!(TilType::iota().type_order(), 1);
        assert_eq!(TilType::order(1).type_order(), 2);
        let attitude = TilType::intension(TilType::func(
            TilType::o(),
            vec![TilType::iota(), TilType::order(1)],
        ));
        assert_eq!(attitude.type_order(), 2);
        assert_eq!(attitude.compact(), "(o iota *1)@tw");
    }

    #[test]
    #[should_panic]
    fn nullary_function_type_rejected() {
        TilType::func(TilType::o(), vec![]);
    }
}

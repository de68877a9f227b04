//! Numbers of type `tau`: exact rationals, exact rational multiples of π,
//! and floats for everything transcendental.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use ordered_float::OrderedFloat;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Number {
    Rational(BigRational),
    /// `q·π` for rational `q`, kept symbolic so that domain checks such as
    /// "cotangent is undefined at π" stay exact.
    PiMultiple(BigRational),
    Float(OrderedFloat<f64>),
}

impl Number {
    pub fn int(n: i64) -> Self {
        Number::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Number::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn pi() -> Self {
        Number::PiMultiple(BigRational::one())
    }

    pub fn float(f: f64) -> Self {
        Number::Float(OrderedFloat(f))
    }

    fn normalized(self) -> Self {
        match self {
            Number::PiMultiple(q) if q.is_zero() => Number::Rational(q),
            other => other,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Number::PiMultiple(q) => q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI,
            Number::Float(f) => f.0,
        }
    }

    fn checked_float(f: f64) -> Option<Number> {
        f.is_finite().then(|| Number::float(f))
    }

    /// Numeric equality across representations.
    pub fn numeric_eq(&self, other: &Number) -> bool {
        match (self, other) {
            (Number::Rational(a), Number::Rational(b)) => a == b,
            (Number::PiMultiple(a), Number::PiMultiple(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }

    pub fn add(&self, other: &Number) -> Option<Number> {
        match (self, other) {
            (Number::Rational(a), Number::Rational(b)) => Some(Number::Rational(a + b)),
            (Number::PiMultiple(a), Number::PiMultiple(b)) => {
                Some(Number::PiMultiple(a + b).normalized())
            }
            _ => Self::checked_float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Number) -> Option<Number> {
        match (self, other) {
            (Number::Rational(a), Number::Rational(b)) => Some(Number::Rational(a - b)),
            (Number::PiMultiple(a), Number::PiMultiple(b)) => {
                Some(Number::PiMultiple(a - b).normalized())
            }
            _ => Self::checked_float(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Number) -> Option<Number> {
        match (self, other) {
            (Number::Rational(a), Number::Rational(b)) => Some(Number::Rational(a * b)),
            (Number::Rational(a), Number::PiMultiple(b))
            | (Number::PiMultiple(b), Number::Rational(a)) => {
                Some(Number::PiMultiple(a * b).normalized())
            }
            _ => Self::checked_float(self.to_f64() * other.to_f64()),
        }
    }

    /// Division; `None` where the quotient is undefined.
    pub fn div(&self, other: &Number) -> Option<Number> {
        match (self, other) {
            (_, Number::Rational(b)) if b.is_zero() => None,
            (Number::Rational(a), Number::Rational(b)) => Some(Number::Rational(a / b)),
            (Number::PiMultiple(a), Number::Rational(b)) => Some(Number::PiMultiple(a / b)),
            (Number::PiMultiple(a), Number::PiMultiple(b)) => Some(Number::Rational(a / b)),
            _ => {
                let d = other.to_f64();
                if d == 0.0 {
                    None
                } else {
                    Self::checked_float(self.to_f64() / d)
                }
            }
        }
    }

    /// Cotangent; `None` at the poles `kπ`.
    pub fn cot(&self) -> Option<Number> {
        match self {
            Number::Rational(q) if q.is_zero() => None,
            Number::PiMultiple(q) => {
                // reduce q modulo 1 (cot has period π)
                let frac = q - q.floor();
                if frac.is_zero() {
                    return None;
                }
                let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
                let half = BigRational::new(BigInt::from(1), BigInt::from(2));
                if frac == half {
                    Some(Number::int(0))
                } else if frac == quarter {
                    Some(Number::int(1))
                } else if frac == &half + &quarter {
                    Some(Number::int(-1))
                } else {
                    let t = (frac.to_f64()? * std::f64::consts::PI).tan();
                    Self::checked_float(1.0 / t)
                }
            }
            _ => {
                let t = self.to_f64().tan();
                if t == 0.0 {
                    None
                } else {
                    Self::checked_float(1.0 / t)
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Number::Rational(q) | Number::PiMultiple(q) => q.is_negative(),
            Number::Float(f) => f.0 < 0.0,
        }
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Literal syntax: `3`, `-1/2`, `pi`, `1/4pi`, `0.25`.
impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Rational(q) => fmt_rational(q, f),
            Number::PiMultiple(q) if q.is_one() => f.write_str("pi"),
            Number::PiMultiple(q) => {
                fmt_rational(q, f)?;
                f.write_str("pi")
            }
            Number::Float(x) => write!(f, "{:?}", x.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cot_is_exact_on_pi_multiples() {
        assert_eq!(Number::pi().cot(), None);
        assert_eq!(Number::int(0).cot(), None);
        let quarter = Number::pi().div(&Number::int(4)).unwrap();
        assert_eq!(quarter, Number::PiMultiple(BigRational::new(1.into(), 4.into())));
        assert_eq!(quarter.cot(), Some(Number::int(1)));
        assert_eq!(Number::pi().div(&Number::int(2)).unwrap().cot(), Some(Number::int(0)));
        let five_quarters = Number::PiMultiple(BigRational::new(5.into(), 4.into()));
        assert_eq!(five_quarters.cot(), Some(Number::int(1)));
    }

    #[test]
    fn division_by_zero_is_undefined() {
        assert_eq!(Number::int(1).div(&Number::int(0)), None);
        assert_eq!(Number::float(1.0).div(&Number::float(0.0)), None);
    }

    #[test]
    fn display_literals() {
        assert_eq!(Number::pi().to_string(), "pi");
        assert_eq!(Number::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(Number::PiMultiple(BigRational::new(1.into(), 4.into())).to_string(), "1/4pi");
        assert_eq!(Number::float(0.5).to_string(), "0.5");
        assert_eq!(Number::pi().sub(&Number::pi()).unwrap(), Number::int(0));
    }
}

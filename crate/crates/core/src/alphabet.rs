//! Finite abelian groups presented as products of cyclic groups.
//!
//! Symbols are stored as their mixed-radix index into the product, with the
//! first cyclic factor most significant. Index order is therefore the
//! lexicographic order on residue tuples, and index `0` is the identity.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest alphabet the workbench accepts.
pub const MAX_ALPHABET: u32 = 1 << 16;

/// An element of the alphabet, as a mixed-radix index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub u32);

impl Symbol {
    pub const ZERO: Symbol = Symbol(0);

    /// A different symbol: the identity, or index 1 when `self` is the identity.
    /// Valid in every alphabet since `|X| ≥ 2`.
    pub fn other(self) -> Symbol {
        if self == Symbol::ZERO {
            Symbol(1)
        } else {
            Symbol::ZERO
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlphabetDoc", into = "AlphabetDoc")]
pub struct Alphabet {
    orders: Vec<u32>,
    strides: Vec<u32>,
    size: u32,
}

#[derive(Serialize, Deserialize)]
struct AlphabetDoc {
    orders: Vec<u32>,
}

impl TryFrom<AlphabetDoc> for Alphabet {
    type Error = Error;
    fn try_from(doc: AlphabetDoc) -> Result<Self> {
        Alphabet::new(doc.orders)
    }
}

impl From<Alphabet> for AlphabetDoc {
    fn from(a: Alphabet) -> Self {
        AlphabetDoc { orders: a.orders }
    }
}

impl Alphabet {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidAlphabet("no cyclic factors".into()));
        }
        if orders.contains(&0) {
            return Err(Error::InvalidAlphabet("cyclic orders must be at least 1".into()));
        }
        let mut size: u64 = 1;
        for &o in &orders {
            size *= u64::from(o);
            if size > u64::from(MAX_ALPHABET) {
                return Err(Error::InvalidAlphabet(format!("more than {MAX_ALPHABET} symbols")));
            }
        }
        if size < 2 {
            return Err(Error::InvalidAlphabet("at least two symbols are required".into()));
        }
        let mut strides = vec![1u32; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1];
        }
        Ok(Alphabet { orders, strides, size: size as u32 })
    }

    /// The cyclic group of the given order.
    pub fn cyclic(order: u32) -> Result<Self> {
        Alphabet::new(vec![order])
    }

    pub fn binary() -> Self {
        Alphabet::cyclic(2).expect("Z_2 is a valid alphabet")
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn zero(&self) -> Symbol {
        Symbol::ZERO
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + Clone {
        (0..self.size).map(Symbol)
    }

    pub fn check(&self, s: Symbol) -> Result<Symbol> {
        if s.0 < self.size {
            Ok(s)
        } else {
            Err(Error::InvalidSymbol { symbol: s.0, size: self.size })
        }
    }

    pub fn components(&self, s: Symbol) -> Result<Vec<u32>> {
        self.check(s)?;
        Ok(self
            .orders
            .iter()
            .zip(&self.strides)
            .map(|(&o, &st)| (s.0 / st) % o)
            .collect())
    }

    pub fn from_components(&self, residues: &[u32]) -> Result<Symbol> {
        if residues.len() != self.orders.len() {
            return Err(Error::InvalidAlphabet(format!(
                "expected {} residues, got {}",
                self.orders.len(),
                residues.len()
            )));
        }
        let mut idx = 0;
        for ((&r, &o), &st) in residues.iter().zip(&self.orders).zip(&self.strides) {
            if r >= o {
                return Err(Error::InvalidSymbol { symbol: r, size: o });
            }
            idx += r * st;
        }
        Ok(Symbol(idx))
    }

    pub fn add(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn neg(&self, a: Symbol) -> Result<Symbol> {
        self.check(a)?;
        let mut idx = 0;
        for (&o, &st) in self.orders.iter().zip(&self.strides) {
            let r = (a.0 / st) % o;
            idx += ((o - r) % o) * st;
        }
        Ok(Symbol(idx))
    }

    pub(crate) fn add_unchecked(&self, a: Symbol, b: Symbol) -> Symbol {
        let mut idx = 0;
        for (&o, &st) in self.orders.iter().zip(&self.strides) {
            let r = ((a.0 / st) % o + (b.0 / st) % o) % o;
            idx += r * st;
        }
        Symbol(idx)
    }

    /// A symbol different from `s`, deterministic: the identity unless `s`
    /// is the identity, in which case symbol index 1.
    pub fn other_than(&self, s: Symbol) -> Symbol {
        s.other()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|o| format!("Z{o}")).collect();
        f.write_str(&parts.join("x"))
    }
}

/// Accepts `2`, `Z2`, `3x2`, `Z3xZ2` and `3,2`.
impl FromStr for Alphabet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let orders = s
            .split(['x', ',', '*'])
            .map(|part| {
                let t = part.trim().trim_start_matches(['Z', 'z']);
                t.parse::<u32>()
                    .map_err(|_| Error::InvalidAlphabet(format!("cannot parse factor {part:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Alphabet::new(orders)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(a: &Alphabet, r: &[u32]) -> Symbol {
        a.from_components(r).unwrap()
    }

    #[test]
    fn z2_laws() {
        let a = Alphabet::binary();
        assert_eq!(a.add(Symbol(1), Symbol(1)).unwrap(), Symbol(0));
        assert_eq!(a.add(Symbol(0), Symbol(1)).unwrap(), Symbol(1));
    }

    #[test]
    fn product_addition_is_componentwise() {
        let a = Alphabet::new(vec![3, 2]).unwrap();
        let x = sym(&a, &[2, 1]);
        assert_eq!(a.components(a.add(x, x).unwrap()).unwrap(), vec![1, 0]);
    }

    #[test]
    fn out_of_range_symbol() {
        let a = Alphabet::binary();
        assert_eq!(
            a.add(Symbol(2), Symbol(0)),
            Err(Error::InvalidSymbol { symbol: 2, size: 2 })
        );
    }

    #[test]
    fn rejects_trivial_groups() {
        assert!(Alphabet::new(vec![1]).is_err());
        assert!(Alphabet::new(vec![]).is_err());
        assert!(Alphabet::new(vec![1, 2]).is_ok());
    }

    #[test]
    fn parses_alphabet_strings() {
        assert_eq!("Z3xZ2".parse::<Alphabet>().unwrap().orders(), &[3, 2]);
        assert_eq!("2".parse::<Alphabet>().unwrap().size(), 2);
        assert!("q".parse::<Alphabet>().is_err());
    }

    /// Exhaustive group axioms for every product of cyclic groups up to 12 elements.
    #[test]
    fn group_axioms_exhaustive() {
        let mut shapes = vec![];
        for a in 2..=12u32 {
            shapes.push(vec![a]);
        }
        for a in 2..=6u32 {
            for b in 2..=6u32 {
                if a * b <= 12 {
                    shapes.push(vec![a, b]);
                }
            }
        }
        shapes.push(vec![2, 2, 2]);
        shapes.push(vec![2, 3, 2]);
        for orders in shapes {
            let g = Alphabet::new(orders).unwrap();
            let zero = g.zero();
            for x in g.symbols() {
                assert_eq!(g.add(x, zero).unwrap(), x);
                assert_eq!(g.add(x, g.neg(x).unwrap()).unwrap(), zero);
                for y in g.symbols() {
                    assert_eq!(g.add(x, y).unwrap(), g.add(y, x).unwrap());
                    for z in g.symbols() {
                        let l = g.add(g.add(x, y).unwrap(), z).unwrap();
                        let r = g.add(x, g.add(y, z).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let a = Alphabet::new(vec![3, 2]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"orders":[3,2]}"#);
        let back: Alphabet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<Alphabet>(r#"{"orders":[1]}"#).is_err());
    }
}

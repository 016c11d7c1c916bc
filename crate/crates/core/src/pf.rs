//! Coordinates, finite partial functions into the alphabet, and coordinate embeddings.

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;
use std::fmt;

/// A natural-number coordinate of the product space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coord(pub u32);

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for Coord {
    fn from(v: u32) -> Self {
        Coord(v)
    }
}

pub type CoordSet = BTreeSet<Coord>;

/// Builds a coordinate set from plain integers.
pub fn coords<I: IntoIterator<Item = u32>>(it: I) -> CoordSet {
    it.into_iter().map(Coord).collect()
}

/// A finite map from coordinates to symbols.
///
/// Ordering and hashing are structural, so sets of partial functions have a
/// canonical order (by sorted `(coord, symbol)` pairs).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PartialFunction(BTreeMap<Coord, Symbol>);

impl PartialFunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from pairs; repeated coordinates must carry the same symbol.
    pub fn from_pairs<I: IntoIterator<Item = (Coord, Symbol)>>(pairs: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (c, s) in pairs {
            if let Some(prev) = map.insert(c, s) {
                if prev != s {
                    return Err(Error::IncompatibleFunctions(c));
                }
            }
        }
        Ok(PartialFunction(map))
    }

    /// Shorthand used heavily in tests: `pf(&[(0, 1), (2, 0)])`.
    pub fn of(pairs: &[(u32, u32)]) -> Self {
        Self::from_pairs(pairs.iter().map(|&(c, s)| (Coord(c), Symbol(s))))
            .expect("literal partial function has conflicting entries")
    }

    /// The constant function on `dom` with value `s`.
    pub fn constant<'a, I: IntoIterator<Item = &'a Coord>>(dom: I, s: Symbol) -> Self {
        PartialFunction(dom.into_iter().map(|&c| (c, s)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, c: Coord) -> Option<Symbol> {
        self.0.get(&c).copied()
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.0.contains_key(&c)
    }

    pub fn insert(&mut self, c: Coord, s: Symbol) -> Option<Symbol> {
        self.0.insert(c, s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord, Symbol)> + '_ {
        self.0.iter().map(|(&c, &s)| (c, s))
    }

    pub fn domain(&self) -> impl Iterator<Item = Coord> + '_ {
        self.0.keys().copied()
    }

    pub fn domain_set(&self) -> CoordSet {
        self.0.keys().copied().collect()
    }

    pub fn min_coord(&self) -> Option<Coord> {
        self.0.keys().next().copied()
    }

    /// `self ⊆ other` as sets of pairs.
    pub fn is_subfunction_of(&self, other: &PartialFunction) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().all(|(c, s)| other.0.get(c) == Some(s))
    }

    /// First coordinate where both are defined and differ.
    pub fn conflict_with(&self, other: &PartialFunction) -> Option<Coord> {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small
            .0
            .iter()
            .find(|(c, s)| large.0.get(c).is_some_and(|t| t != *s))
            .map(|(&c, _)| c)
    }

    pub fn is_compatible(&self, other: &PartialFunction) -> bool {
        self.conflict_with(other).is_none()
    }

    pub fn domain_meets(&self, set: &CoordSet) -> bool {
        self.domain().any(|c| set.contains(&c))
    }

    pub fn domain_within(&self, set: &CoordSet) -> bool {
        self.domain().all(|c| set.contains(&c))
    }

    /// Number of domain points inside `set`.
    pub fn overlap(&self, set: &CoordSet) -> usize {
        self.domain().filter(|c| set.contains(c)).count()
    }

    pub fn union(&self, other: &PartialFunction) -> Result<PartialFunction> {
        if let Some(c) = self.conflict_with(other) {
            return Err(Error::IncompatibleFunctions(c));
        }
        let mut out = self.clone();
        out.0.extend(other.0.iter().map(|(&c, &s)| (c, s)));
        Ok(out)
    }

    pub fn restrict(&self, set: &CoordSet) -> PartialFunction {
        PartialFunction(self.0.iter().filter(|(c, _)| set.contains(c)).map(|(&c, &s)| (c, s)).collect())
    }

    pub fn without(&self, set: &CoordSet) -> PartialFunction {
        PartialFunction(self.0.iter().filter(|(c, _)| !set.contains(c)).map(|(&c, &s)| (c, s)).collect())
    }

    /// Pointwise group translation `η + v` on `dom(η)`; requires `dom(η) ⊆ dom(v)`.
    pub fn translate(&self, alphabet: &Alphabet, v: &PartialFunction) -> Result<PartialFunction> {
        let mut out = BTreeMap::new();
        for (&c, &s) in &self.0 {
            let shift = v.get(c).ok_or(Error::MissingCoordinate(c))?;
            out.insert(c, alphabet.add(s, shift)?);
        }
        Ok(PartialFunction(out))
    }

    /// Pointwise negation, used to undo a translation.
    pub fn negate(&self, alphabet: &Alphabet) -> Result<PartialFunction> {
        let mut out = BTreeMap::new();
        for (&c, &s) in &self.0 {
            out.insert(c, alphabet.neg(s)?);
        }
        Ok(PartialFunction(out))
    }

    /// `η ∘ π⁻¹`: the function on `π[dom η]` with value `η(i)` at `π(i)`.
    pub fn permute(&self, pi: &Embedding) -> Result<PartialFunction> {
        let mut out = BTreeMap::new();
        for (&c, &s) in &self.0 {
            out.insert(pi.apply(c)?, s);
        }
        Ok(PartialFunction(out))
    }

    /// `η ∘ π`: pulls a function on the range of `π` back to its domain.
    /// Points of `dom(η)` outside the range are dropped.
    pub fn pull_back(&self, pi: &Embedding) -> PartialFunction {
        PartialFunction(
            self.0
                .iter()
                .filter_map(|(&c, &s)| pi.preimage(c).map(|p| (p, s)))
                .collect(),
        )
    }

    pub fn check_symbols(&self, alphabet: &Alphabet) -> Result<()> {
        for &s in self.0.values() {
            alphabet.check(s)?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a PartialFunction {
    type Item = (&'a Coord, &'a Symbol);
    type IntoIter = btree_map::Iter<'a, Coord, Symbol>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<(Coord, Symbol)> for PartialFunction {
    /// Later entries overwrite earlier ones; use [`PartialFunction::from_pairs`]
    /// when conflicts must be detected.
    fn from_iter<T: IntoIterator<Item = (Coord, Symbol)>>(iter: T) -> Self {
        PartialFunction(iter.into_iter().collect())
    }
}

impl fmt::Display for PartialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (c, s)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}↦{s}")?;
        }
        f.write_str("}")
    }
}

/// An injective finite map between coordinate sets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Embedding {
    forward: BTreeMap<Coord, Coord>,
    backward: BTreeMap<Coord, Coord>,
}

impl Embedding {
    pub fn new<I: IntoIterator<Item = (Coord, Coord)>>(pairs: I) -> Result<Self> {
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for (a, b) in pairs {
            if let Some(prev) = forward.insert(a, b) {
                if prev != b {
                    return Err(Error::Precondition(format!("embedding maps {a} twice")));
                }
                continue;
            }
            if backward.insert(b, a).is_some() {
                return Err(Error::Precondition(format!("embedding is not injective at {b}")));
            }
        }
        Ok(Embedding { forward, backward })
    }

    pub fn identity(set: &CoordSet) -> Self {
        Embedding::new(set.iter().map(|&c| (c, c))).expect("identity is injective")
    }

    /// `i ↦ i + k` on `set`.
    pub fn shift(set: &CoordSet, k: u32) -> Self {
        Embedding::new(set.iter().map(|&c| (c, Coord(c.0 + k)))).expect("shift is injective")
    }

    pub fn apply(&self, c: Coord) -> Result<Coord> {
        self.forward.get(&c).copied().ok_or(Error::MissingCoordinate(c))
    }

    pub fn preimage(&self, c: Coord) -> Option<Coord> {
        self.backward.get(&c).copied()
    }

    pub fn domain(&self) -> CoordSet {
        self.forward.keys().copied().collect()
    }

    pub fn range(&self) -> CoordSet {
        self.backward.keys().copied().collect()
    }

    pub fn in_range(&self, c: Coord) -> bool {
        self.backward.contains_key(&c)
    }

    pub fn inverse(&self) -> Embedding {
        Embedding { forward: self.backward.clone(), backward: self.forward.clone() }
    }

    pub fn image(&self, set: &CoordSet) -> Result<CoordSet> {
        set.iter().map(|&c| self.apply(c)).collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Coord, Coord)> + '_ {
        self.forward.iter().map(|(&a, &b)| (a, b))
    }
}

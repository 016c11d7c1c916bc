//! Deterministic enumeration of total assignments on a finite window.

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::pf::{Coord, CoordSet, PartialFunction};
use std::sync::Arc;

/// The truncation universe for desk-scale checks.
pub type Window = CoordSet;

/// Caps on the exponential brute-force routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest number of points any enumeration may visit.
    pub max_points: u64,
    /// Largest constraint family the packing-number computation accepts.
    pub max_family: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_points: 1 << 24, max_family: 12 }
    }
}

impl Budget {
    pub fn with_family(self, max_family: usize) -> Self {
        Budget { max_family, ..self }
    }

    /// Fails unless `base^exp` items fit the point budget.
    pub fn check_power(&self, base: u32, exp: usize) -> Result<u64> {
        let mut total: u128 = 1;
        for _ in 0..exp {
            total *= u128::from(base);
            if total > u128::from(self.max_points) {
                return Err(Error::EnumerationTooLarge { requested: total, budget: self.max_points });
            }
        }
        Ok(total as u64)
    }
}

/// A total assignment on a window, stored densely in coordinate order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    coords: Arc<[Coord]>,
    values: Vec<Symbol>,
}

impl Assignment {
    pub fn from_pf(pf: &PartialFunction) -> Self {
        let (coords, values): (Vec<Coord>, Vec<Symbol>) = pf.iter().unzip();
        Assignment { coords: coords.into(), values }
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn get(&self, c: Coord) -> Option<Symbol> {
        self.coords.binary_search(&c).ok().map(|i| self.values[i])
    }

    /// `η ⊆ x`.
    pub fn extends(&self, eta: &PartialFunction) -> bool {
        eta.iter().all(|(c, s)| self.get(c) == Some(s))
    }

    pub fn to_pf(&self) -> PartialFunction {
        self.coords.iter().copied().zip(self.values.iter().copied()).collect()
    }

    pub fn restrict(&self, set: &CoordSet) -> PartialFunction {
        self.coords
            .iter()
            .zip(&self.values)
            .filter(|(c, _)| set.contains(c))
            .map(|(&c, &s)| (c, s))
            .collect()
    }
}

/// Odometer over `X^window`, last coordinate fastest, symbols in index order.
#[derive(Debug, Clone)]
pub struct Points {
    coords: Arc<[Coord]>,
    current: Vec<Symbol>,
    size: u32,
    done: bool,
}

impl Iterator for Points {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let out = Assignment { coords: self.coords.clone(), values: self.current.clone() };
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current[i].0 += 1;
            if self.current[i].0 < self.size {
                break;
            }
            self.current[i] = Symbol::ZERO;
        }
        Some(out)
    }
}

/// Every assignment `window → X` exactly once, in lexicographic order.
pub fn enumerate_points(alphabet: &Alphabet, window: &Window, budget: &Budget) -> Result<Points> {
    budget.check_power(alphabet.size(), window.len())?;
    let coords: Arc<[Coord]> = window.iter().copied().collect::<Vec<_>>().into();
    Ok(Points { current: vec![Symbol::ZERO; coords.len()], coords, size: alphabet.size(), done: false })
}

/// Assignments on `window` that extend `stem` (whose domain must lie inside the window).
pub fn enumerate_extensions(
    alphabet: &Alphabet,
    window: &Window,
    stem: &PartialFunction,
    budget: &Budget,
) -> Result<impl Iterator<Item = Assignment>> {
    let free: Window = window.iter().copied().filter(|c| !stem.contains(*c)).collect();
    let stem = stem.clone();
    let points = enumerate_points(alphabet, &free, budget)?;
    Ok(points.map(move |p| {
        let mut full = stem.clone();
        for (&c, &s) in p.coords().iter().zip(p.values()) {
            full.insert(c, s);
        }
        Assignment::from_pf(&full)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pf::coords;
    use std::collections::HashSet;

    #[test]
    fn counts() {
        let z2 = Alphabet::binary();
        let b = Budget::default();
        assert_eq!(enumerate_points(&z2, &coords([0]), &b).unwrap().count(), 2);
        let empty: Vec<_> = enumerate_points(&z2, &Window::new(), &b).unwrap().collect();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].to_pf().is_empty());
        let z3 = Alphabet::cyclic(3).unwrap();
        let all: HashSet<_> = enumerate_points(&z3, &coords([0, 1, 2]), &b).unwrap().map(|a| a.to_pf()).collect();
        assert_eq!(all.len(), 27);
    }

    #[test]
    fn lexicographic_order() {
        let z2 = Alphabet::binary();
        let pts: Vec<Vec<u32>> = enumerate_points(&z2, &coords([4, 7]), &Budget::default())
            .unwrap()
            .map(|a| a.values().iter().map(|s| s.0).collect())
            .collect();
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn budget_guard() {
        let z2 = Alphabet::binary();
        let tight = Budget { max_points: 8, max_family: 12 };
        assert!(enumerate_points(&z2, &coords(0..3), &tight).is_ok());
        assert!(matches!(
            enumerate_points(&z2, &coords(0..4), &tight),
            Err(Error::EnumerationTooLarge { requested: 16, budget: 8 })
        ));
    }

    #[test]
    fn extensions_fix_the_stem() {
        let z2 = Alphabet::binary();
        let stem = PartialFunction::of(&[(1, 1)]);
        let ext: Vec<_> = enumerate_extensions(&z2, &coords(0..3), &stem, &Budget::default()).unwrap().collect();
        assert_eq!(ext.len(), 4);
        assert!(ext.iter().all(|a| a.extends(&stem)));
    }
}

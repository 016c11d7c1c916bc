//! Finite fragments of conditions `(w, t₀, t₁, …)` restricted to a window.
//!
//! The stem `w` and the creature domains partition the window. Creatures are
//! kept sorted by their least coordinate; move records refer to positions in
//! that order.

mod amalgam;
mod moves;
mod project;

pub use amalgam::{amalgamate, verify_amalgam, Amalgam, AmalgamCheck, NormStep, Slack, StepKind};
pub use moves::{
    apply_move, leq_check, leq_search, leq_semantic, move_decide, move_sigma, move_sigma_bot, replay, Move, MoveCertificate,
};
pub use project::{lift, project_pi};

use crate::alphabet::Alphabet;
use crate::creatures::{Creature, Norm};
use crate::error::{Error, Result};
use crate::pf::{CoordSet, PartialFunction};
use crate::points::{enumerate_points, Assignment, Budget, Window};
use std::fmt;

/// Which forcing notion the fragment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Any creature allowed, including unconstrained ones.
    Empty,
    /// Every creature has finite norm and norms grow along the profile.
    PlusInfinity,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Empty => "q-empty",
            Flavor::PlusInfinity => "q-infty",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "q-empty" => Ok(Flavor::Empty),
            "q-infty" => Ok(Flavor::PlusInfinity),
            _ => Err(Error::Malformed(format!("unknown flavor {s:?}"))),
        }
    }
}

/// A truncated condition on an explicit window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedCondition {
    alphabet: Alphabet,
    window: Window,
    w: PartialFunction,
    creatures: Vec<Creature>,
    flavor: Flavor,
    /// Lower bounds on packing numbers by slot: creature `i` must have
    /// `n > profile[min(i, len-1)]`. Nondecreasing; empty means no bound.
    profile: Vec<u64>,
}

impl TruncatedCondition {
    /// Sorts the creatures and validates under the flavor's rules.
    pub fn new(
        alphabet: Alphabet,
        window: Window,
        w: PartialFunction,
        creatures: Vec<Creature>,
        flavor: Flavor,
        profile: Vec<u64>,
    ) -> Result<Self> {
        let p = Self::assemble(alphabet, window, w, creatures, flavor, profile);
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn assemble(
        alphabet: Alphabet,
        window: Window,
        w: PartialFunction,
        mut creatures: Vec<Creature>,
        flavor: Flavor,
        profile: Vec<u64>,
    ) -> Self {
        creatures.sort_by_key(|t| (t.min_coord(), t.z().len()));
        TruncatedCondition { alphabet, window, w, creatures, flavor, profile }
    }

    /// Same data with a replaced stem and creature list; the result is not validated.
    pub(crate) fn with_parts(&self, w: PartialFunction, creatures: Vec<Creature>) -> Self {
        Self::assemble(self.alphabet.clone(), self.window.clone(), w, creatures, self.flavor, self.profile.clone())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn w(&self) -> &PartialFunction {
        &self.w
    }

    pub fn creatures(&self) -> &[Creature] {
        &self.creatures
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn profile(&self) -> &[u64] {
        &self.profile
    }

    pub fn with_flavor(&self, flavor: Flavor, profile: Vec<u64>) -> Result<Self> {
        let mut p = self.clone();
        p.flavor = flavor;
        p.profile = profile;
        p.validate()?;
        Ok(p)
    }

    /// Structural equality of the mathematical content (window, stem, creatures).
    pub fn same_content(&self, other: &TruncatedCondition) -> bool {
        self.window == other.window && self.w == other.w && self.creatures == other.creatures
    }

    /// Partition and membership clauses shared by both flavors.
    pub fn validate_base(&self) -> Result<()> {
        let bad = |s: String| Err(Error::InvalidCondition(s));
        self.w.check_symbols(&self.alphabet)?;
        let mut covered: CoordSet = CoordSet::new();
        for c in self.w.domain() {
            if !self.window.contains(&c) {
                return bad(format!("stem coordinate {c} is outside the window"));
            }
            covered.insert(c);
        }
        for (i, t) in self.creatures.iter().enumerate() {
            if !t.is_member() {
                return bad(format!("creature {i} has packing number 0"));
            }
            for eta in t.delta() {
                eta.check_symbols(&self.alphabet)?;
            }
            for &c in t.z() {
                if !self.window.contains(&c) {
                    return bad(format!("creature {i} leaves the window at {c}"));
                }
                if !covered.insert(c) {
                    return bad(format!("coordinate {c} is covered twice"));
                }
            }
        }
        if covered.len() != self.window.len() {
            let c = self.window.iter().find(|c| !covered.contains(c)).expect("some coordinate is uncovered");
            return bad(format!("coordinate {c} is not covered"));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_base()?;
        if self.flavor == Flavor::Empty {
            return Ok(());
        }
        if self.profile.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::InvalidCondition("bound profile is not nondecreasing".into()));
        }
        for (i, t) in self.creatures.iter().enumerate() {
            let n = match t.packing() {
                Norm::Infinite => return Err(Error::InvalidCondition(format!("creature {i} has infinite norm"))),
                Norm::Finite(n) => n,
            };
            if let Some(&bound) = self.profile.get(i).or(self.profile.last()) {
                if n <= bound {
                    return Err(Error::InvalidCondition(format!("creature {i} has n = {n}, profile needs > {bound}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `x ∈ POS(p)` for a point of the window.
    pub fn pos_member(&self, x: &Assignment) -> bool {
        x.extends(&self.w) && self.creatures.iter().all(|t| t.allows(x))
    }

    /// Same test for a partial function, which must be total on the window.
    pub fn pos_member_pf(&self, x: &PartialFunction) -> Result<bool> {
        if let Some(&c) = self.window.iter().find(|&&c| !x.contains(c)) {
            return Err(Error::MissingCoordinate(c));
        }
        Ok(self.pos_member(&Assignment::from_pf(&x.restrict(&self.window))))
    }

    /// Membership of every window point in `POS(p)`, in enumeration order.
    pub fn pos_mask(&self, budget: &Budget) -> Result<Vec<bool>> {
        Ok(enumerate_points(&self.alphabet, &self.window, budget)?.map(|x| self.pos_member(&x)).collect())
    }

    pub fn pos_count(&self, budget: &Budget) -> Result<u64> {
        Ok(self.pos_mask(budget)?.into_iter().filter(|&b| b).count() as u64)
    }

    /// `|POS(p)|` from the product formula: free stem extensions times each value set.
    pub fn pos_count_product(&self, budget: &Budget) -> Result<u128> {
        let mut total: u128 = 1;
        for t in &self.creatures {
            total *= t.value_set(&self.alphabet, budget)?.len() as u128;
        }
        Ok(total)
    }
}

impl fmt::Display for TruncatedCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] w={}", self.flavor.name(), self.w)?;
        for t in &self.creatures {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Symbol;
    use crate::pf::coords;

    fn zero_creature(z: CoordSet) -> Creature {
        Creature::constant_zero(z, &Budget::default()).unwrap()
    }

    #[test]
    fn partition_checks() {
        let z2 = Alphabet::binary();
        let free = |a: u32, b: u32| Creature::unconstrained(coords(a..b)).unwrap();
        let p = TruncatedCondition::new(z2.clone(), coords(0..6), PartialFunction::new(), vec![free(0, 3), free(3, 6)], Flavor::Empty, vec![]);
        assert!(p.is_ok());
        let overlap = TruncatedCondition::new(z2.clone(), coords(0..6), PartialFunction::new(), vec![free(0, 4), free(3, 6)], Flavor::Empty, vec![]);
        assert!(matches!(overlap, Err(Error::InvalidCondition(_))));
        let infinite = TruncatedCondition::new(z2, coords(0..6), PartialFunction::new(), vec![free(0, 3), free(3, 6)], Flavor::PlusInfinity, vec![]);
        assert!(matches!(infinite, Err(Error::InvalidCondition(_))));
    }

    #[test]
    fn profile_is_enforced() {
        let z2 = Alphabet::binary();
        let cs = vec![zero_creature(coords(0..2)), zero_creature(coords(2..5))];
        let ok = TruncatedCondition::new(z2.clone(), coords(0..5), PartialFunction::new(), cs.clone(), Flavor::PlusInfinity, vec![1, 2]);
        assert!(ok.is_ok());
        let tight = TruncatedCondition::new(z2.clone(), coords(0..5), PartialFunction::new(), cs.clone(), Flavor::PlusInfinity, vec![2]);
        assert!(tight.is_err());
        let decreasing = TruncatedCondition::new(z2, coords(0..5), PartialFunction::new(), cs, Flavor::PlusInfinity, vec![1, 0]);
        assert!(decreasing.is_err());
    }

    #[test]
    fn pos_membership() {
        let z2 = Alphabet::binary();
        let w = PartialFunction::of(&[(0, 1)]);
        let p = TruncatedCondition::new(
            z2.clone(),
            coords(0..4),
            w,
            vec![Creature::unconstrained(coords(1..4)).unwrap()],
            Flavor::Empty,
            vec![],
        )
        .unwrap();
        assert_eq!(p.pos_count(&Budget::default()).unwrap(), 8);
        assert!(!p.pos_member_pf(&PartialFunction::of(&[(0, 0), (1, 0), (2, 0), (3, 0)])).unwrap());

        let q = TruncatedCondition::new(
            z2,
            coords(0..4),
            PartialFunction::of(&[(0, 1)]),
            vec![zero_creature(coords(1..4))],
            Flavor::PlusInfinity,
            vec![],
        )
        .unwrap();
        assert_eq!(q.pos_count(&Budget::default()).unwrap(), 7);
        assert_eq!(q.pos_count_product(&Budget::default()).unwrap(), 7);
        assert!(q.pos_member_pf(&PartialFunction::constant(&coords(0..4), Symbol(1))).unwrap());
    }
}

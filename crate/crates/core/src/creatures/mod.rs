//! Creatures `(z, Δ)`: a finite domain `z` and a family `Δ` of forbidden
//! partial functions on it.
//!
//! The value set is `v(z, Δ) = {x ∈ X^z : no η ∈ Δ is extended by x}` and the
//! norm is `log₈ n(z, Δ)` (see [`norm`]). An empty `Δ` gives the unconstrained
//! creature with infinite norm. A creature whose packing number is zero while
//! `Δ` is nonempty is a legal pair but not a member of the creature family
//! used in conditions; [`Creature::is_member`] tells the two apart.

pub mod norm;
mod ops;

pub use norm::{best_packing, norm_n};
pub use ops::{cut, glue, link, restrict_half, sdr, sigma_bot_member, sigma_member};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::pf::{CoordSet, Embedding, PartialFunction};
use crate::points::{enumerate_points, Assignment, Budget};
use std::collections::BTreeSet;
use std::fmt;

pub type Family = BTreeSet<PartialFunction>;

/// The packing number `n(z, Δ)`, or infinity for `Δ = ∅`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Norm {
    Finite(u64),
    Infinite,
}

impl Norm {
    pub fn finite(self) -> Option<u64> {
        match self {
            Norm::Finite(n) => Some(n),
            Norm::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Norm::Infinite
    }

    /// `log₈ n` for display only; threshold decisions use [`Norm::nor_exceeds`].
    pub fn nor(self) -> f64 {
        match self {
            Norm::Finite(0) => f64::NEG_INFINITY,
            Norm::Finite(n) => (n as f64).ln() / 8f64.ln(),
            Norm::Infinite => f64::INFINITY,
        }
    }

    /// `log₈ n > k`, decided as `n > 8^k`.
    pub fn nor_exceeds(self, k: u32) -> bool {
        match self {
            Norm::Infinite => true,
            Norm::Finite(n) => 8u64.checked_pow(k).is_some_and(|p| n > p),
        }
    }

    /// `log₈ n ≥ log₈ m − 1`, decided as `8·n ≥ m`.
    pub fn within_one_of(self, other: Norm) -> bool {
        match (self, other) {
            (Norm::Infinite, _) => true,
            (Norm::Finite(_), Norm::Infinite) => false,
            (Norm::Finite(n), Norm::Finite(m)) => u128::from(n) * 8 >= u128::from(m),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Finite(n) => write!(f, "{n}"),
            Norm::Infinite => f.write_str("INF"),
        }
    }
}

/// A creature `(z, Δ)` with its packing number cached.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Creature {
    z: CoordSet,
    delta: Family,
    n: Norm,
}

impl Creature {
    /// Checks the structural clauses and computes the packing number.
    pub fn new(z: CoordSet, delta: Family, budget: &Budget) -> Result<Self> {
        Self::check_shape(&z, &delta)?;
        let n = norm_n(delta.iter(), budget)?;
        Ok(Creature { z, delta, n })
    }

    /// The creature with no constraints and infinite norm.
    pub fn unconstrained(z: CoordSet) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidCreature("empty domain".into()));
        }
        Ok(Creature { z, delta: Family::new(), n: Norm::Infinite })
    }

    /// The single-constraint creature `(z, {0_z})`, whose packing number is `|z|`.
    pub fn constant_zero(z: CoordSet, budget: &Budget) -> Result<Self> {
        let eta = PartialFunction::constant(&z, crate::alphabet::Symbol::ZERO);
        Creature::new(z, [eta].into_iter().collect(), budget)
    }

    /// Skips the packing computation when the norm is known to carry over.
    pub(crate) fn with_norm(z: CoordSet, delta: Family, n: Norm) -> Self {
        Creature { z, delta, n }
    }

    fn check_shape(z: &CoordSet, delta: &Family) -> Result<()> {
        if z.is_empty() {
            return Err(Error::InvalidCreature("empty domain".into()));
        }
        for eta in delta {
            if eta.is_empty() {
                return Err(Error::InvalidCreature("empty partial function in Δ".into()));
            }
            if !eta.domain_within(z) {
                return Err(Error::InvalidCreature(format!("{eta} leaves the domain")));
            }
        }
        Ok(())
    }

    pub fn z(&self) -> &CoordSet {
        &self.z
    }

    pub fn delta(&self) -> &Family {
        &self.delta
    }

    /// The distinguishing datum; in this construction it is the pair itself.
    pub fn dis(&self) -> (&CoordSet, &Family) {
        (&self.z, &self.delta)
    }

    pub fn packing(&self) -> Norm {
        self.n
    }

    pub fn nor(&self) -> f64 {
        self.n.nor()
    }

    /// Member of the creature family: unconstrained, or packing number ≥ 1.
    pub fn is_member(&self) -> bool {
        match self.n {
            Norm::Infinite => true,
            Norm::Finite(n) => n >= 1,
        }
    }

    pub fn min_coord(&self) -> crate::pf::Coord {
        *self.z.iter().next().expect("creature domains are nonempty")
    }

    /// `x ∈ v(z, Δ)`; `x` must be total on `z`.
    pub fn value_member(&self, x: &PartialFunction) -> Result<bool> {
        if let Some(&c) = self.z.iter().find(|&&c| !x.contains(c)) {
            return Err(Error::MissingCoordinate(c));
        }
        Ok(!self.delta.iter().any(|eta| eta.is_subfunction_of(x)))
    }

    /// Same test for a point of a larger window (only `z` is read).
    pub fn allows(&self, x: &Assignment) -> bool {
        !self.delta.iter().any(|eta| x.extends(eta))
    }

    /// All of `v(z, Δ)`, in enumeration order.
    pub fn value_set(&self, alphabet: &Alphabet, budget: &Budget) -> Result<Vec<PartialFunction>> {
        Ok(enumerate_points(alphabet, &self.z, budget)?
            .filter(|x| self.allows(x))
            .map(|x| x.to_pf())
            .collect())
    }

    /// A member of `v(z, Δ)` built from a system of distinct representatives:
    /// each `η` is contradicted at its representative, everything else is `0`.
    pub fn witness_value(&self) -> Result<PartialFunction> {
        if self.n == Norm::Finite(0) {
            return Err(Error::NoWitness);
        }
        let reps = sdr(self.delta.iter()).map_err(|_| Error::NoWitness)?;
        let mut w = PartialFunction::constant(&self.z, crate::alphabet::Symbol::ZERO);
        for (eta, c) in reps {
            let forbidden = eta.get(c).expect("representative lies in the domain");
            if w.get(c) == Some(forbidden) {
                w.insert(c, forbidden.other());
            }
        }
        debug_assert!(self.delta.iter().all(|eta| !eta.is_subfunction_of(&w)));
        Ok(w)
    }

    /// `t + v`: every constraint shifted by `v`, so `v(z, Δ + v) = v(z, Δ) + v`.
    pub fn translate(&self, alphabet: &Alphabet, v: &PartialFunction) -> Result<Creature> {
        if let Some(&c) = self.z.iter().find(|&&c| !v.contains(c)) {
            return Err(Error::MissingCoordinate(c));
        }
        let delta = self.delta.iter().map(|eta| eta.translate(alphabet, v)).collect::<Result<Family>>()?;
        // Domains are untouched and the shift is a bijection, so the packing number carries over.
        Ok(Creature::with_norm(self.z.clone(), delta, self.n))
    }

    /// `π(t)`: domain `π[z]`, constraints `η ∘ π⁻¹`.
    pub fn permute(&self, pi: &Embedding) -> Result<Creature> {
        let z = pi.image(&self.z)?;
        let delta = self.delta.iter().map(|eta| eta.permute(pi)).collect::<Result<Family>>()?;
        Ok(Creature::with_norm(z, delta, self.n))
    }
}

impl fmt::Display for Creature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z: Vec<String> = self.z.iter().map(|c| c.to_string()).collect();
        let d: Vec<String> = self.delta.iter().map(|e| e.to_string()).collect();
        write!(f, "({{{}}}, {{{}}}; n={})", z.join(","), d.join(", "), self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Symbol;
    use crate::pf::coords;

    fn fam(items: &[PartialFunction]) -> Family {
        items.iter().cloned().collect()
    }

    #[test]
    fn nor_values() {
        assert!(Norm::Infinite.nor().is_infinite());
        assert_eq!(Norm::Finite(8).nor(), 1.0);
        assert!((Norm::Finite(3).nor() - 0.528).abs() < 1e-3);
        assert!(!Norm::Finite(3).nor_exceeds(1));
        assert!(!Norm::Finite(8).nor_exceeds(1));
        assert!(Norm::Finite(9).nor_exceeds(1));
    }

    #[test]
    fn value_sets() {
        let b = Budget::default();
        let z2 = Alphabet::binary();
        let t = Creature::new(coords([0]), fam(&[PartialFunction::of(&[(0, 0)])]), &b).unwrap();
        assert_eq!(t.value_set(&z2, &b).unwrap(), vec![PartialFunction::of(&[(0, 1)])]);

        let z = coords(0..4);
        let t = Creature::new(
            z.clone(),
            fam(&[PartialFunction::constant(&z, Symbol(0)), PartialFunction::constant(&z, Symbol(1))]),
            &b,
        )
        .unwrap();
        assert_eq!(t.value_set(&z2, &b).unwrap().len(), 14);

        let free = Creature::unconstrained(coords(0..2)).unwrap();
        assert_eq!(free.value_set(&z2, &b).unwrap().len(), 4);
        assert!(free.packing().is_infinite());
    }

    #[test]
    fn witnesses() {
        let b = Budget::default();
        let t = Creature::new(coords([0]), fam(&[PartialFunction::of(&[(0, 0)])]), &b).unwrap();
        assert_eq!(t.witness_value().unwrap(), PartialFunction::of(&[(0, 1)]));
        let free = Creature::unconstrained(coords(0..2)).unwrap();
        assert_eq!(free.witness_value().unwrap(), PartialFunction::of(&[(0, 0), (1, 0)]));
        let zero = Creature::new(
            coords(0..2),
            fam(&[PartialFunction::of(&[(0, 0)]), PartialFunction::of(&[(1, 0)]), PartialFunction::of(&[(0, 0), (1, 0)])]),
            &b,
        )
        .unwrap();
        assert_eq!(zero.witness_value(), Err(Error::NoWitness));
        assert!(!zero.is_member());
    }

    #[test]
    fn shape_errors() {
        let b = Budget::default();
        assert!(Creature::new(CoordSet::new(), Family::new(), &b).is_err());
        assert!(Creature::new(coords([0]), fam(&[PartialFunction::new()]), &b).is_err());
        assert!(Creature::new(coords([0]), fam(&[PartialFunction::of(&[(1, 0)])]), &b).is_err());
    }

    #[test]
    fn value_member_needs_total_input() {
        let t = Creature::unconstrained(coords(0..2)).unwrap();
        assert!(t.value_member(&PartialFunction::of(&[(0, 0)])).is_err());
    }

    #[test]
    fn identity_permutation_is_trivial() {
        let b = Budget::default();
        let t = Creature::constant_zero(coords(0..3), &b).unwrap();
        assert_eq!(t.permute(&Embedding::identity(t.z())).unwrap(), t);
    }
}

//! Block-partition conditions `(w, σ₀, σ₁, …)` over a finite prefix of a
//! norm sequence `⟨(n⁰_m, n¹_m) : m < M⟩`.
//!
//! `POS(p)` is the set of points extending `w` and no `σ_j`. The σ index set
//! is partitioned into blocks `V_m` for `m ≥ m*`, with
//! `|V_m| ≤ n¹_m·2^{m*}` and `|dom σ_j|·2^{m*} ≥ n⁰_m` for `j ∈ V_m`.
//! Every comparison involving a quotient is done with cleared denominators.

mod compat;
mod linked;
mod measure;
mod project;

pub use compat::{compatible, compatible_bruteforce, compatible_constructive, constructive_star, hall_select_u};
pub use linked::{amalgamate_class, class_key, is_dense_normal, normalize_dense, ClassKey};
pub use measure::{
    block_measure, null_refinement, nowhere_dense_check, nowhere_dense_witness, BlockMeasure, NowhereDense, NullRefinement,
};
pub use project::{project_pi_q, qproject, QProjection};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::pf::{Coord, CoordSet, PartialFunction};
use crate::points::{enumerate_points, Assignment, Budget, Window};
use crate::rational::{self, Rational};
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Whether the growth clauses of the sequence are enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    Strict,
    /// Waives `4 < n⁰_m`, `n¹_m < n⁰_{m+1}` and the weighted-sum clause;
    /// keeps `1 ≤ n⁰_m ≤ n¹_m`.
    Relaxed,
}

impl Strictness {
    pub fn name(self) -> &'static str {
        match self {
            Strictness::Strict => "strict",
            Strictness::Relaxed => "relaxed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Strictness::Strict),
            "relaxed" => Ok(Strictness::Relaxed),
            _ => Err(Error::Malformed(format!("unknown strictness {s:?}"))),
        }
    }
}

/// `x · 2^e`, or `None` when it does not fit in 128 bits.
pub(crate) fn times_pow2(x: u128, e: usize) -> Option<u128> {
    if x == 0 {
        return Some(0);
    }
    if e >= 128 || x.leading_zeros() < e as u32 {
        return None;
    }
    Some(x << e)
}

/// `⌈x / 2^e⌉`.
pub(crate) fn ceil_div_pow2(x: u128, e: usize) -> u128 {
    if e >= 128 {
        return u128::from(x > 0);
    }
    let d = 1u128 << e;
    x / d + u128::from(!x.is_multiple_of(d))
}

/// `⌊x / 2^e⌋`.
pub(crate) fn floor_div_pow2(x: u128, e: usize) -> u128 {
    if e >= 128 {
        0
    } else {
        x >> e
    }
}

/// Compares `value` with `base^exp`.
pub(crate) fn cmp_power(value: u128, base: u32, exp: u128) -> Ordering {
    let mut acc: u128 = 1;
    let mut i: u128 = 0;
    while i < exp {
        match acc.checked_mul(u128::from(base)) {
            Some(next) if next <= value => acc = next,
            Some(_) | None => return Ordering::Less,
        }
        i += 1;
        if base == 1 {
            break;
        }
    }
    value.cmp(&acc)
}

/// A finite prefix `⟨(n⁰_m, n¹_m) : m < M⟩` of a norm sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct NormSeqPrefix {
    pairs: Vec<(u128, u128)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum SeqViolation {
    /// `n⁰_m ≥ 1` fails; checked in both modes.
    Zero { m: usize },
    /// `4 < n⁰_m` fails.
    TooSmall { m: usize },
    /// `n⁰_m ≤ n¹_m` fails.
    Decreasing { m: usize },
    /// `n¹_m < n⁰_{m+1}` fails.
    NotIncreasing { m: usize },
    /// `2^{2(m*+2)} · Σ_{m<m*} n⁰_m·n¹_m < n⁰_{m*}` fails.
    WeightedSum { m_star: usize },
}

impl fmt::Display for SeqViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqViolation::Zero { m } => write!(f, "n0[{m}] is zero"),
            SeqViolation::TooSmall { m } => write!(f, "n0[{m}] is not above 4"),
            SeqViolation::Decreasing { m } => write!(f, "n1[{m}] < n0[{m}]"),
            SeqViolation::NotIncreasing { m } => write!(f, "n0[{}] <= n1[{m}]", m + 1),
            SeqViolation::WeightedSum { m_star } => write!(f, "weighted sum below index {m_star} reaches n0[{m_star}]"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SeqReport {
    pub violations: Vec<SeqViolation>,
    /// Failures that the relaxed mode tolerates.
    pub waived: Vec<SeqViolation>,
}

impl SeqReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl NormSeqPrefix {
    pub fn new(pairs: Vec<(u128, u128)>) -> Self {
        NormSeqPrefix { pairs }
    }

    /// The pointwise least strict prefix: `n⁰_0 = 5`, `n¹_m = n⁰_m`, and each
    /// `n⁰_{m+1}` the least value meeting both clauses. `None` past 128 bits.
    pub fn minimal_strict(len: usize) -> Option<Self> {
        let mut pairs: Vec<(u128, u128)> = Vec::with_capacity(len);
        let mut sum = BigUint::from(0u32);
        for m in 0..len {
            let weighted = (&sum << (2 * (m + 2))) + BigUint::one();
            let mut n0 = weighted;
            if let Some(&(_, prev1)) = pairs.last() {
                n0 = n0.max(BigUint::from(prev1) + BigUint::one());
            }
            n0 = n0.max(BigUint::from(5u32));
            let n0: u128 = n0.try_into().ok()?;
            sum += BigUint::from(n0) * BigUint::from(n0);
            pairs.push((n0, n0));
        }
        Some(NormSeqPrefix { pairs })
    }

    pub fn pairs(&self) -> &[(u128, u128)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn n0(&self, m: usize) -> Option<u128> {
        self.pairs.get(m).map(|p| p.0)
    }

    pub fn n1(&self, m: usize) -> Option<u128> {
        self.pairs.get(m).map(|p| p.1)
    }

    /// The finitary clauses on the prefix.
    pub fn validate(&self, strictness: Strictness) -> SeqReport {
        let mut report = SeqReport::default();
        let mut sum = BigUint::from(0u32);
        for (m, &(n0, n1)) in self.pairs.iter().enumerate() {
            if n0 == 0 {
                report.violations.push(SeqViolation::Zero { m });
            }
            let mut waivable = Vec::new();
            if n0 <= 4 {
                waivable.push(SeqViolation::TooSmall { m });
            }
            if n1 < n0 {
                report.violations.push(SeqViolation::Decreasing { m });
            }
            if let Some(&(next0, _)) = self.pairs.get(m + 1) {
                if n1 >= next0 {
                    waivable.push(SeqViolation::NotIncreasing { m });
                }
            }
            if (&sum << (2 * (m + 2))) >= BigUint::from(n0) {
                waivable.push(SeqViolation::WeightedSum { m_star: m });
            }
            sum += BigUint::from(n0) * BigUint::from(n1);
            match strictness {
                Strictness::Strict => report.violations.extend(waivable),
                Strictness::Relaxed => report.waived.extend(waivable),
            }
        }
        report
    }

    /// `n¹_m ≥ |X|^{2·n⁰_m}`: the finite stand-in for the limit clause, in
    /// the form the measure estimate needs.
    pub fn growth_at(&self, m: usize, alphabet_size: u32) -> bool {
        match self.pairs.get(m) {
            Some(&(n0, n1)) => cmp_power(n1, alphabet_size, n0.saturating_mul(2)) != Ordering::Less,
            None => false,
        }
    }

    /// Least index from which [`NormSeqPrefix::growth_at`] holds to the end of the prefix.
    pub fn growth_from(&self, alphabet_size: u32) -> Option<usize> {
        let mut from = None;
        for m in (0..self.len()).rev() {
            if !self.growth_at(m, alphabet_size) {
                break;
            }
            from = Some(m);
        }
        from
    }
}

impl fmt::Display for NormSeqPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Free-function form of [`NormSeqPrefix::validate`].
pub fn validate_seq(s: &NormSeqPrefix, strictness: Strictness) -> SeqReport {
    s.validate(strictness)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "kebab-case")]
pub enum CondViolation {
    Sequence { violation: SeqViolation },
    BadSymbol { detail: String },
    OutsideWindow { coord: u32 },
    EmptySigma { j: usize },
    SigmaOverlap { j: usize, k: usize, coord: u32 },
    StemOverlap { j: usize, coord: u32 },
    Unassigned { j: usize },
    AssignedTwice { j: usize },
    UnknownIndex { m: usize, j: usize },
    BlockBelowStar { m: usize },
    BlockBeyondPrefix { m: usize },
    BlockTooLarge { m: usize, size: usize },
    SigmaTooSmall { j: usize, m: usize, size: usize },
}

impl fmt::Display for CondViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CondViolation::Sequence { violation } => write!(f, "sequence: {violation}"),
            CondViolation::BadSymbol { detail } => f.write_str(detail),
            CondViolation::OutsideWindow { coord } => write!(f, "coordinate {coord} is outside the window"),
            CondViolation::EmptySigma { j } => write!(f, "sigma {j} is empty"),
            CondViolation::SigmaOverlap { j, k, coord } => write!(f, "sigmas {j} and {k} share coordinate {coord}"),
            CondViolation::StemOverlap { j, coord } => write!(f, "sigma {j} meets the stem at {coord}"),
            CondViolation::Unassigned { j } => write!(f, "sigma {j} is in no block"),
            CondViolation::AssignedTwice { j } => write!(f, "sigma {j} is in two blocks"),
            CondViolation::UnknownIndex { m, j } => write!(f, "block {m} names missing sigma {j}"),
            CondViolation::BlockBelowStar { m } => write!(f, "block {m} lies below m*"),
            CondViolation::BlockBeyondPrefix { m } => write!(f, "block {m} lies beyond the sequence prefix"),
            CondViolation::BlockTooLarge { m, size } => write!(f, "block {m} has {size} members, above n1[{m}]*2^m*"),
            CondViolation::SigmaTooSmall { j, m, size } => write!(f, "sigma {j} in block {m} has {size} coordinates, below n0[{m}]/2^m*"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CondReport {
    pub violations: Vec<CondViolation>,
    pub waived: Vec<SeqViolation>,
}

impl CondReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub type Blocks = BTreeMap<usize, BTreeSet<usize>>;

/// A condition truncated to a finite window and a finite σ list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QCondition {
    pub alphabet: Alphabet,
    pub window: Window,
    pub w: PartialFunction,
    pub sigmas: Vec<PartialFunction>,
    pub m_star: usize,
    /// `m ↦ V_m`; absent keys are empty blocks.
    pub blocks: Blocks,
    pub seq: NormSeqPrefix,
}

impl QCondition {
    pub fn new(
        alphabet: Alphabet,
        window: Window,
        w: PartialFunction,
        sigmas: Vec<PartialFunction>,
        m_star: usize,
        blocks: Blocks,
        seq: NormSeqPrefix,
    ) -> Self {
        QCondition { alphabet, window, w, sigmas, m_star, blocks, seq }
    }

    /// All σ's in block `m_star`, with a one-entry sequence `(1, |σ|)`.
    /// Convenient for order experiments where the sizes do not matter.
    pub fn plain(alphabet: Alphabet, window: Window, w: PartialFunction, sigmas: Vec<PartialFunction>) -> Self {
        let k = sigmas.len();
        let blocks = if k == 0 { Blocks::new() } else { Blocks::from([(0, (0..k).collect())]) };
        let seq = NormSeqPrefix::new(vec![(1, k.max(1) as u128)]);
        QCondition { alphabet, window, w, sigmas, m_star: 0, blocks, seq }
    }

    pub fn block_of(&self, j: usize) -> Option<usize> {
        self.blocks.iter().find(|(_, v)| v.contains(&j)).map(|(&m, _)| m)
    }

    /// Indices of the σ's in blocks `m` with `lo ≤ m < hi`.
    pub fn sigmas_between(&self, lo: usize, hi: usize) -> Vec<(usize, usize)> {
        self.blocks.range(lo..hi.max(lo)).flat_map(|(&m, v)| v.iter().map(move |&j| (m, j))).collect()
    }

    /// Every stem and σ coordinate.
    pub fn support(&self) -> CoordSet {
        let mut s = self.w.domain_set();
        for sigma in &self.sigmas {
            s.extend(sigma.domain());
        }
        s
    }

    pub fn validate(&self, strictness: Strictness) -> CondReport {
        let mut report = CondReport::default();
        let seq = self.seq.validate(strictness);
        report.waived = seq.waived;
        report.violations.extend(seq.violations.into_iter().map(|violation| CondViolation::Sequence { violation }));
        let v = &mut report.violations;

        if let Err(e) = self.w.check_symbols(&self.alphabet) {
            v.push(CondViolation::BadSymbol { detail: format!("stem: {e}") });
        }
        for c in self.w.domain().filter(|c| !self.window.contains(c)) {
            v.push(CondViolation::OutsideWindow { coord: c.0 });
        }
        let mut owner: BTreeMap<Coord, usize> = BTreeMap::new();
        for (j, sigma) in self.sigmas.iter().enumerate() {
            if sigma.is_empty() {
                v.push(CondViolation::EmptySigma { j });
            }
            if let Err(e) = sigma.check_symbols(&self.alphabet) {
                v.push(CondViolation::BadSymbol { detail: format!("sigma {j}: {e}") });
            }
            for c in sigma.domain() {
                if !self.window.contains(&c) {
                    v.push(CondViolation::OutsideWindow { coord: c.0 });
                }
                if self.w.contains(c) {
                    v.push(CondViolation::StemOverlap { j, coord: c.0 });
                }
                if let Some(&k) = owner.get(&c) {
                    v.push(CondViolation::SigmaOverlap { j: k, k: j, coord: c.0 });
                } else {
                    owner.insert(c, j);
                }
            }
        }

        let mut seen = vec![0usize; self.sigmas.len()];
        for (&m, members) in &self.blocks {
            if m < self.m_star {
                v.push(CondViolation::BlockBelowStar { m });
            }
            let (n0, n1) = match self.seq.pairs().get(m) {
                Some(&p) => p,
                None => {
                    if !members.is_empty() {
                        v.push(CondViolation::BlockBeyondPrefix { m });
                    }
                    continue;
                }
            };
            if let Some(cap) = times_pow2(n1, self.m_star) {
                if members.len() as u128 > cap {
                    v.push(CondViolation::BlockTooLarge { m, size: members.len() });
                }
            }
            for &j in members {
                match self.sigmas.get(j) {
                    None => v.push(CondViolation::UnknownIndex { m, j }),
                    Some(sigma) => {
                        seen[j] += 1;
                        if times_pow2(sigma.len() as u128, self.m_star).is_some_and(|scaled| scaled < n0) {
                            v.push(CondViolation::SigmaTooSmall { j, m, size: sigma.len() });
                        }
                    }
                }
            }
        }
        for (j, &count) in seen.iter().enumerate() {
            match count {
                0 => v.push(CondViolation::Unassigned { j }),
                1 => {}
                _ => v.push(CondViolation::AssignedTwice { j }),
            }
        }
        report
    }

    pub fn is_valid(&self, strictness: Strictness) -> bool {
        self.validate(strictness).ok()
    }

    pub(crate) fn require_valid(&self, strictness: Strictness, what: &str) -> Result<()> {
        let report = self.validate(strictness);
        match report.violations.first() {
            None => Ok(()),
            Some(first) => Err(Error::InvalidCondition(format!("{what}: {first}"))),
        }
    }

    /// `x ∈ POS(p)`: `x` extends `w` and no `σ_j`.
    pub fn pos_member(&self, x: &Assignment) -> bool {
        x.extends(&self.w) && !self.sigmas.iter().any(|s| x.extends(s))
    }

    pub fn pos_member_pf(&self, x: &PartialFunction) -> Result<bool> {
        if let Some(&c) = self.window.iter().find(|&&c| !x.contains(c)) {
            return Err(Error::MissingCoordinate(c));
        }
        Ok(self.pos_member(&Assignment::from_pf(&x.restrict(&self.window))))
    }

    pub fn pos_mask(&self, budget: &Budget) -> Result<Vec<bool>> {
        Ok(enumerate_points(&self.alphabet, &self.window, budget)?.map(|x| self.pos_member(&x)).collect())
    }

    pub fn pos_count(&self, budget: &Budget) -> Result<u64> {
        Ok(self.pos_mask(budget)?.into_iter().filter(|&b| b).count() as u64)
    }

    /// Uniform measure of `POS(p)` inside `X^window`: the stem cylinder times
    /// the avoidance product, by inclusion–exclusion when σ's overlap.
    pub fn pos_measure(&self, budget: &Budget) -> Result<Rational> {
        let size = self.alphabet.size();
        let stem = rational::cylinder(size, self.w.len());
        let reachable: Vec<PartialFunction> =
            self.sigmas.iter().filter(|s| s.is_compatible(&self.w)).map(|s| s.without(&self.w.domain_set())).collect();
        if reachable.iter().any(PartialFunction::is_empty) {
            return Ok(rational::int(0));
        }
        let disjoint = {
            let mut seen = CoordSet::new();
            reachable.iter().all(|s| s.domain().all(|c| seen.insert(c)))
        };
        let avoid = if disjoint {
            rational::avoid_disjoint(size, reachable.iter().map(PartialFunction::len))
        } else {
            rational::avoid_inclusion_exclusion(size, &reachable, budget.max_family)?
        };
        Ok(stem * avoid)
    }
}

impl fmt::Display for QCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w={} m*={}", self.w, self.m_star)?;
        for (m, members) in &self.blocks {
            write!(f, " V{m}:[")?;
            let parts: Vec<String> = members.iter().map(|&j| self.sigmas.get(j).map_or("?".into(), |s| s.to_string())).collect();
            write!(f, "{}]", parts.join(" "))?;
        }
        Ok(())
    }
}

/// `p ≤ q`: `w^p ⊆ w^q` and every `σ^p_i` either contains some `σ^q_j` or
/// is contradicted by `w^q`.
pub fn leq_syntactic(p: &QCondition, q: &QCondition) -> bool {
    if !p.w.is_subfunction_of(&q.w) {
        return false;
    }
    p.sigmas.iter().all(|sp| q.sigmas.iter().any(|sq| sq.is_subfunction_of(sp)) || sp.conflict_with(&q.w).is_some())
}

/// `POS(q) ⊆ POS(p)` by enumeration of the shared window.
pub fn pos_included(p: &QCondition, q: &QCondition, budget: &Budget) -> Result<bool> {
    if p.window != q.window {
        return Err(Error::Precondition("conditions live on different windows".into()));
    }
    Ok(enumerate_points(&q.alphabet, &q.window, budget)?.all(|x| !q.pos_member(&x) || p.pos_member(&x)))
}

/// `σ` contradicted at every coordinate.
pub(crate) fn contradiction(sigma: &PartialFunction) -> PartialFunction {
    sigma.iter().map(|(c, s)| (c, s.other())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Symbol;
    use crate::pf::coords;

    fn z2() -> Alphabet {
        Alphabet::binary()
    }

    #[test]
    fn sequence_examples() {
        let good = NormSeqPrefix::new(vec![(5, 5), (1601, 1601)]);
        assert!(good.validate(Strictness::Strict).ok());
        let edge = NormSeqPrefix::new(vec![(5, 5), (1600, 1600)]);
        assert_eq!(edge.validate(Strictness::Strict).violations, vec![SeqViolation::WeightedSum { m_star: 1 }]);
        let bad = NormSeqPrefix::new(vec![(5, 4), (1601, 1601)]);
        assert!(bad.validate(Strictness::Strict).violations.contains(&SeqViolation::Decreasing { m: 0 }));
        let small = NormSeqPrefix::new(vec![(4, 4), (1601, 1601)]);
        assert!(small.validate(Strictness::Strict).violations.contains(&SeqViolation::TooSmall { m: 0 }));
        let relaxed = NormSeqPrefix::new(vec![(2, 3), (7, 8)]);
        let r = relaxed.validate(Strictness::Relaxed);
        assert!(r.ok());
        assert!(r.waived.contains(&SeqViolation::TooSmall { m: 0 }));
        assert!(!relaxed.validate(Strictness::Strict).ok());
    }

    #[test]
    fn minimal_strict_is_valid_and_tight() {
        let s = NormSeqPrefix::minimal_strict(4).unwrap();
        assert!(s.validate(Strictness::Strict).ok());
        assert_eq!(s.pairs()[..2], [(5, 5), (1601, 1601)]);
        let mut lowered = s.pairs().to_vec();
        lowered[3].0 -= 1;
        lowered[3].1 -= 1;
        assert!(!NormSeqPrefix::new(lowered).validate(Strictness::Strict).ok());
        assert!(NormSeqPrefix::minimal_strict(5).is_none());
    }

    #[test]
    fn growth_clause() {
        let s = NormSeqPrefix::new(vec![(1, 3), (3, 64), (3, 63)]);
        assert!(!s.growth_at(0, 2));
        assert!(s.growth_at(1, 2));
        assert!(!s.growth_at(2, 2));
        assert_eq!(NormSeqPrefix::new(vec![(1, 3), (3, 64)]).growth_from(2), Some(1));
        assert_eq!(cmp_power(u128::MAX, 2, 200), Ordering::Less);
        assert_eq!(cmp_power(9, 3, 2), Ordering::Equal);
    }

    #[test]
    fn condition_examples() {
        let empty = QCondition::new(z2(), coords(0..3), PartialFunction::of(&[(0, 1)]), vec![], 0, Blocks::new(), NormSeqPrefix::new(vec![(5, 5)]));
        assert!(empty.validate(Strictness::Strict).ok());

        let relaxed = NormSeqPrefix::new(vec![(2, 3), (7, 8)]);
        let one = QCondition::new(
            z2(),
            coords(0..4),
            PartialFunction::new(),
            vec![PartialFunction::of(&[(0, 0), (1, 0)])],
            0,
            Blocks::from([(0, BTreeSet::from([0]))]),
            relaxed.clone(),
        );
        assert!(one.validate(Strictness::Relaxed).ok());
        assert!(!one.validate(Strictness::Strict).ok());

        let mut clash = one.clone();
        clash.w = PartialFunction::of(&[(1, 1)]);
        assert!(clash.validate(Strictness::Relaxed).violations.contains(&CondViolation::StemOverlap { j: 0, coord: 1 }));

        let mut tiny = one.clone();
        tiny.sigmas = vec![PartialFunction::of(&[(0, 0)])];
        assert!(tiny.validate(Strictness::Relaxed).violations.contains(&CondViolation::SigmaTooSmall { j: 0, m: 0, size: 1 }));

        let mut shifted = one.clone();
        shifted.m_star = 1;
        shifted.blocks = Blocks::from([(1, BTreeSet::from([0]))]);
        // 2·2 ≥ 7 fails: the block-1 bound is n⁰₁/2 = 3.5.
        assert!(!shifted.validate(Strictness::Relaxed).ok());

        let mut orphan = one;
        orphan.blocks.clear();
        assert!(orphan.validate(Strictness::Relaxed).violations.contains(&CondViolation::Unassigned { j: 0 }));
    }

    #[test]
    fn pos_and_measure() {
        let p = QCondition::plain(
            z2(),
            coords(0..5),
            PartialFunction::of(&[(0, 1)]),
            vec![PartialFunction::of(&[(1, 0), (2, 0)]), PartialFunction::of(&[(3, 1), (4, 1), ])],
        );
        let count = p.pos_count(&Budget::default()).unwrap();
        // 2^4 free points times (3/4)^2.
        assert_eq!(count, 9);
        assert_eq!(p.pos_measure(&Budget::default()).unwrap(), Rational::new(9.into(), 32.into()));
        let x = PartialFunction::of(&[(0, 1), (1, 0), (2, 0), (3, 0), (4, 0)]);
        assert!(!p.pos_member_pf(&x).unwrap());
        let free = QCondition::plain(z2(), coords(0..3), PartialFunction::new(), vec![]);
        assert_eq!(free.pos_count(&Budget::default()).unwrap(), 8);
    }

    #[test]
    fn syntactic_order_examples() {
        let sigma = PartialFunction::of(&[(1, 0), (2, 0)]);
        let p = QCondition::plain(z2(), coords(0..4), PartialFunction::of(&[(0, 1)]), vec![sigma.clone()]);
        assert!(leq_syntactic(&p, &p));
        let decided = QCondition::plain(z2(), coords(0..4), PartialFunction::of(&[(0, 1), (1, 1)]), vec![]);
        assert!(leq_syntactic(&p, &decided));
        assert!(!leq_syntactic(&decided, &p));
        let agreeing = QCondition::plain(z2(), coords(0..4), PartialFunction::of(&[(0, 1), (1, 0)]), vec![]);
        assert!(!leq_syntactic(&p, &agreeing));
        let shrunk = QCondition::plain(z2(), coords(0..4), PartialFunction::of(&[(0, 1)]), vec![PartialFunction::of(&[(1, 0)])]);
        assert!(leq_syntactic(&p, &shrunk));
        assert!(pos_included(&p, &shrunk, &Budget::default()).unwrap());
        assert_eq!(contradiction(&sigma), PartialFunction::constant(&coords([1, 2]), Symbol(1)));
    }
}

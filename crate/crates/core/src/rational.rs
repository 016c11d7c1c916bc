//! Exact product-measure computations and certified bounds on `e^{-N}`.

use crate::error::{Error, Result};
use crate::pf::PartialFunction;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Largest exponent accepted by [`exp_neg_bounds`].
pub const MAX_EXP_ARGUMENT: u64 = 1 << 16;

/// Series terms used for `e^{-1}`; the truncation error is below `1/41!`.
const EXP_TERMS: u32 = 40;

pub fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Uniform measure of a single cylinder of `d` fixed coordinates: `|X|^{-d}`.
pub fn cylinder(alphabet_size: u32, d: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(alphabet_size).pow(d as u32))
}

/// Measure of the points avoiding one cylinder of size `d`: `1 - |X|^{-d}`.
pub fn avoid_one(alphabet_size: u32, d: usize) -> Rational {
    Rational::one() - cylinder(alphabet_size, d)
}

/// Avoidance measure of a family of cylinders with pairwise disjoint domains.
pub fn avoid_disjoint<I: IntoIterator<Item = usize>>(alphabet_size: u32, sizes: I) -> Rational {
    sizes.into_iter().fold(Rational::one(), |acc, d| acc * avoid_one(alphabet_size, d))
}

/// `(1 - |X|^{-d})^count` for one block of equal-size disjoint cylinders.
pub fn avoid_block(alphabet_size: u32, d: usize, count: u64) -> Rational {
    pow(&avoid_one(alphabet_size, d), count)
}

pub fn pow(base: &Rational, mut exp: u64) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &b;
        }
        exp >>= 1;
        if exp > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// Avoidance measure for an arbitrary family by inclusion–exclusion over
/// all subfamilies; incompatible subfamilies contribute nothing.
pub fn avoid_inclusion_exclusion(alphabet_size: u32, family: &[PartialFunction], max_family: usize) -> Result<Rational> {
    if family.len() > max_family {
        return Err(Error::EnumerationTooLarge { requested: 1u128 << family.len().min(127), budget: 1u64 << max_family.min(63) });
    }
    let mut total = Rational::zero();
    for mask in 0u64..(1u64 << family.len()) {
        let mut joint = Some(PartialFunction::new());
        for (i, sigma) in family.iter().enumerate() {
            if mask >> i & 1 == 1 {
                joint = joint.and_then(|j| j.union(sigma).ok());
            }
        }
        if let Some(j) = joint {
            let term = cylinder(alphabet_size, j.len());
            if mask.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    Ok(total)
}

/// A closed interval with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Bounds on `e^{-1}` from the alternating series `Σ (-1)^i / i!`.
///
/// The terms decrease from `i = 1` on, so consecutive partial sums bracket
/// the limit: sums ending on an even index overshoot, odd ones undershoot.
pub fn exp_neg_one_bounds() -> Interval {
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut prev = Rational::zero();
    for i in 0..=EXP_TERMS {
        if i > 0 {
            term /= int(u64::from(i));
        }
        prev = sum.clone();
        if i % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
    }
    // EXP_TERMS is even: `sum` ends on a positive term, `prev` on a negative one.
    Interval { lo: prev, hi: sum }
}

/// Certified enclosure of `e^{-n}` as the `n`-th power of the `e^{-1}` enclosure.
pub fn exp_neg_bounds(n: u64) -> Result<Interval> {
    if n > MAX_EXP_ARGUMENT {
        return Err(Error::EnumerationTooLarge { requested: u128::from(n), budget: MAX_EXP_ARGUMENT });
    }
    let base = exp_neg_one_bounds();
    Ok(Interval { lo: pow(&base.lo, n), hi: pow(&base.hi, n) })
}

/// Whether `value ≤ e^{-n}` is certified, i.e. `value` is below the lower endpoint.
pub fn certified_below_exp_neg(value: &Rational, n: u64) -> Result<bool> {
    Ok(value <= &exp_neg_bounds(n)?.lo)
}

/// Fixed-point decimal rendering (truncated toward zero) with `digits` fractional digits.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (a.numer() * &scale) / a.denom();
    let int_part = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&"0".repeat(digits - frac.len()));
        s.push_str(&frac);
    }
    s
}

/// Scientific rendering with `sig` significant digits, for tiny measures.
pub fn to_scientific(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let ten = int(10);
    let mut exp: i64 = 0;
    let mut m = a.clone();
    while m >= ten {
        m /= &ten;
        exp += 1;
    }
    while m < Rational::one() {
        m *= &ten;
        exp -= 1;
    }
    let body = to_decimal(&m, sig.saturating_sub(1));
    format!("{}{}e{}", if neg { "-" } else { "" }, body, exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn single_cylinder_complement() {
        assert_eq!(avoid_one(2, 3), q(7, 8));
        assert_eq!(avoid_disjoint(2, std::iter::empty()), Rational::one());
    }

    #[test]
    fn block_power_matches_repeated_product() {
        let direct = avoid_disjoint(2, std::iter::repeat_n(3, 64));
        assert_eq!(avoid_block(2, 3, 64), direct);
        assert_eq!(avoid_block(2, 3, 64), pow(&q(7, 8), 64));
    }

    #[test]
    fn e_inverse_enclosure_is_tight() {
        let b = exp_neg_one_bounds();
        assert!(b.lo < b.hi);
        assert!(&b.hi - &b.lo < q(1, 1_000_000_000_000));
        // e^{-1} = 0.36787944117144233...
        assert_eq!(to_decimal(&b.lo, 15), "0.367879441171442");
        assert_eq!(to_decimal(&b.hi, 15), "0.367879441171442");
    }

    #[test]
    fn e_minus_eight_window() {
        let b = exp_neg_bounds(8).unwrap();
        assert!(b.lo > q(335_462, 1_000_000_000));
        assert!(b.hi < q(335_464, 1_000_000_000));
    }

    #[test]
    fn inclusion_exclusion_agrees_on_disjoint() {
        let fam = vec![PartialFunction::of(&[(0, 0), (1, 0)]), PartialFunction::of(&[(2, 1)])];
        assert_eq!(avoid_inclusion_exclusion(2, &fam, 12).unwrap(), avoid_disjoint(2, [2, 1]));
        // Overlapping, conflicting pair: {0↦0} and {0↦1} cannot both hold.
        let fam = vec![PartialFunction::of(&[(0, 0)]), PartialFunction::of(&[(0, 1)])];
        assert_eq!(avoid_inclusion_exclusion(2, &fam, 12).unwrap(), Rational::zero());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&q(7, 8), 4), "0.8750");
        assert_eq!(to_decimal(&q(1, 3), 3), "0.333");
        assert_eq!(to_scientific(&q(1, 4000), 3), "2.50e-4");
    }
}

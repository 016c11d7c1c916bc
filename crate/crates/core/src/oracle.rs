//! Brute-force reference implementations, written straight from the
//! defining formulas and sharing no code with the library routines they check.

use crate::alphabet::{Alphabet, Symbol};
use crate::conditions::TruncatedCondition;
use crate::creatures::Norm;
use crate::pf::{Coord, CoordSet, PartialFunction};
use crate::qhn::QCondition;
use std::collections::BTreeSet;

/// Largest family the packing oracle accepts; it visits `3^|Δ|` pairs of subsets.
pub const MAX_ORACLE_FAMILY: usize = 14;

fn dom_mask(eta: &PartialFunction, index: &[Coord]) -> u64 {
    eta.domain().fold(0u64, |m, c| m | 1 << index.binary_search(&c).expect("indexed"))
}

/// `n(z, Δ)`: the largest `k` such that every `Δ' ⊆ Δ` contains a subfamily
/// with pairwise disjoint domains covering at least `k·|Δ'|` coordinates.
/// `None` when the family or its support is too large for the oracle.
pub fn packing_number(delta: &[PartialFunction]) -> Option<Norm> {
    if delta.is_empty() {
        return Some(Norm::Infinite);
    }
    if delta.len() > MAX_ORACLE_FAMILY {
        return None;
    }
    let index: Vec<Coord> = delta.iter().flat_map(|e| e.domain()).collect::<BTreeSet<_>>().into_iter().collect();
    if index.len() > 64 {
        return None;
    }
    let doms: Vec<u64> = delta.iter().map(|e| dom_mask(e, &index)).collect();
    let full = (1u32 << delta.len()) - 1;

    // union[s] is the union of the domains in s; disjoint[s] says whether they are pairwise disjoint.
    let mut union = vec![0u64; full as usize + 1];
    let mut disjoint = vec![true; full as usize + 1];
    for s in 1..=full {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        disjoint[s as usize] = disjoint[rest as usize] && union[rest as usize] & doms[low] == 0;
        union[s as usize] = union[rest as usize] | doms[low];
    }
    let mut k = u64::MAX;
    for s in 1..=full {
        let mut best = 0u32;
        let mut sub = s;
        loop {
            if disjoint[sub as usize] {
                best = best.max(union[sub as usize].count_ones());
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & s;
        }
        k = k.min(u64::from(best) / u64::from(s.count_ones()));
    }
    Some(Norm::Finite(k))
}

/// Every total function `z → X`, odometer order over sorted coordinates.
pub fn all_points(a: &Alphabet, z: &CoordSet) -> Vec<PartialFunction> {
    let coords: Vec<Coord> = z.iter().copied().collect();
    let mut digits = vec![0u32; coords.len()];
    let mut out = Vec::new();
    loop {
        out.push(coords.iter().zip(&digits).map(|(&c, &d)| (c, Symbol(d))).collect());
        let mut i = coords.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < a.size() {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn extends(x: &PartialFunction, eta: &PartialFunction) -> bool {
    eta.iter().all(|(c, s)| x.get(c) == Some(s))
}

/// `v(z, Δ)`: the points of `X^z` extending no member of `Δ`.
pub fn value_set(a: &Alphabet, z: &CoordSet, delta: &[PartialFunction]) -> Vec<PartialFunction> {
    all_points(a, z).into_iter().filter(|x| !delta.iter().any(|eta| extends(x, eta))).collect()
}

pub fn truncated_pos(p: &TruncatedCondition, x: &PartialFunction) -> bool {
    extends(x, p.w()) && p.creatures().iter().all(|t| !t.delta().iter().any(|eta| extends(x, eta)))
}

pub fn qhn_pos(p: &QCondition, x: &PartialFunction) -> bool {
    extends(x, &p.w) && !p.sigmas.iter().any(|s| extends(x, s))
}

/// `POS(q) ⊆ POS(p)` over all points of the window.
pub fn qhn_included(p: &QCondition, q: &QCondition) -> bool {
    all_points(&q.alphabet, &q.window).iter().all(|x| !qhn_pos(q, x) || qhn_pos(p, x))
}

pub fn truncated_included(p: &TruncatedCondition, q: &TruncatedCondition) -> bool {
    all_points(q.alphabet(), q.window()).iter().all(|x| !truncated_pos(q, x) || truncated_pos(p, x))
}

fn add(orders: &[u32], a: &[u32], b: &[u32]) -> Vec<u32> {
    orders.iter().zip(a.iter().zip(b)).map(|(&o, (&x, &y))| (x + y) % o).collect()
}

fn tuples(orders: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &o in orders {
        out = out.into_iter().flat_map(|t| (0..o).map(move |d| [t.clone(), vec![d]].concat())).collect();
    }
    out
}

/// Checks `Alphabet::add` and `Alphabet::neg` against componentwise modular
/// arithmetic and the abelian group laws; returns the first failure.
pub fn group_laws(a: &Alphabet) -> Result<(), String> {
    let orders = a.orders();
    let elems = tuples(orders);
    let sym = |t: &Vec<u32>| a.from_components(t).map_err(|e| e.to_string());
    let zero = vec![0; orders.len()];
    for x in &elems {
        let sx = sym(x)?;
        if a.add(sx, a.zero()).map_err(|e| e.to_string())? != sx {
            return Err(format!("{x:?} + 0 != {x:?}"));
        }
        let inv = a.neg(sx).map_err(|e| e.to_string())?;
        if a.add(sx, inv).map_err(|e| e.to_string())? != sym(&zero)? {
            return Err(format!("{x:?} + (-{x:?}) != 0"));
        }
        for y in &elems {
            let sy = sym(y)?;
            let sum = a.add(sx, sy).map_err(|e| e.to_string())?;
            if sum != sym(&add(orders, x, y))? {
                return Err(format!("{x:?} + {y:?} is not componentwise"));
            }
            if sum != a.add(sy, sx).map_err(|e| e.to_string())? {
                return Err(format!("{x:?} + {y:?} does not commute"));
            }
            for z in &elems {
                let sz = sym(z)?;
                let l = a.add(sum, sz).map_err(|e| e.to_string())?;
                let r = a.add(sx, a.add(sy, sz).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                if l != r {
                    return Err(format!("({x:?} + {y:?}) + {z:?} is not associative"));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pf::coords;

    #[test]
    fn packing_small_cases() {
        let zero3 = PartialFunction::constant(&coords(0..3), Symbol(0));
        assert_eq!(packing_number(&[zero3]), Some(Norm::Finite(3)));
        let clash = [PartialFunction::of(&[(0, 0)]), PartialFunction::of(&[(0, 1)])];
        assert_eq!(packing_number(&clash), Some(Norm::Finite(0)));
        let apart = [PartialFunction::of(&[(0, 0), (1, 0)]), PartialFunction::of(&[(2, 0), (3, 1)])];
        assert_eq!(packing_number(&apart), Some(Norm::Finite(2)));
        assert_eq!(packing_number(&[]), Some(Norm::Infinite));
    }

    #[test]
    fn value_set_counts() {
        let a = Alphabet::cyclic(3).unwrap();
        assert_eq!(all_points(&a, &coords(0..3)).len(), 27);
        let v = value_set(&a, &coords(0..2), &[PartialFunction::of(&[(0, 0)])]);
        assert_eq!(v.len(), 6);
    }

    #[test]
    fn group_laws_small() {
        for orders in [vec![2], vec![3], vec![3, 2], vec![2, 2, 3]] {
            assert_eq!(group_laws(&Alphabet::new(orders).unwrap()), Ok(()));
        }
    }
}

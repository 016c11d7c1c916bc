use cwb_core::alphabet::{Alphabet, Symbol};
use cwb_core::creatures::{cut, glue, norm_n, Creature, Family, Norm};
use cwb_core::json::{self, CreatureFile, QCondDoc};
use cwb_core::oracle;
use cwb_core::pf::{Coord, CoordSet, Embedding, PartialFunction};
use cwb_core::points::Budget;
use cwb_core::qhn::{hall_select_u, leq_syntactic, NormSeqPrefix, QCondition, Strictness};
use cwb_core::rational::{self, Rational};
use num_traits::One;
use proptest::prelude::*;

fn pf(max_coord: u32, size: u32, len: std::ops::Range<usize>) -> impl Strategy<Value = PartialFunction> {
    prop::collection::btree_map(0..max_coord, 0..size, len)
        .prop_map(|m| PartialFunction::from_pairs(m.into_iter().map(|(c, s)| (Coord(c), Symbol(s)))).unwrap())
}

fn family(max_coord: u32, size: u32, members: usize) -> impl Strategy<Value = Vec<PartialFunction>> {
    prop::collection::btree_set(pf(max_coord, size, 1..4), 1..=members).prop_map(|s| s.into_iter().collect())
}

fn orders() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(2u32..6, 1..3)
}

fn creature_on(z: u32, delta: Vec<PartialFunction>) -> Creature {
    let zs: CoordSet = (0..z).map(Coord).collect();
    let fam: Family = delta.into_iter().filter(|e| e.domain_within(&zs)).collect();
    Creature::new(zs, fam, &Budget::default()).unwrap()
}

fn oracle_norm(t: &Creature) -> Norm {
    oracle::packing_number(&t.delta().iter().cloned().collect::<Vec<_>>()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn addition_is_componentwise(orders in orders(), x in any::<u32>(), y in any::<u32>()) {
        let a = Alphabet::new(orders.clone()).unwrap();
        let (sx, sy) = (Symbol(x % a.size()), Symbol(y % a.size()));
        let sum = a.components(a.add(sx, sy).unwrap()).unwrap();
        let (cx, cy) = (a.components(sx).unwrap(), a.components(sy).unwrap());
        let expected: Vec<u32> = orders.iter().zip(cx.iter().zip(&cy)).map(|(o, (p, q))| (p + q) % o).collect();
        prop_assert_eq!(sum, expected);
        prop_assert_eq!(a.add(sx, a.neg(sx).unwrap()).unwrap(), a.zero());
        prop_assert_eq!(a.from_components(&cx).unwrap(), sx);
    }

    #[test]
    fn packing_number_matches_oracle(delta in family(7, 2, 7)) {
        let got = norm_n(delta.iter(), &Budget::default()).unwrap();
        prop_assert_eq!(got, oracle::packing_number(&delta).unwrap());
    }

    #[test]
    fn packing_number_matches_oracle_over_z3(delta in family(6, 3, 6)) {
        let got = norm_n(delta.iter(), &Budget::default()).unwrap();
        prop_assert_eq!(got, oracle::packing_number(&delta).unwrap());
    }

    #[test]
    fn value_set_matches_oracle(delta in family(5, 2, 4)) {
        let a = Alphabet::binary();
        let t = creature_on(5, delta);
        let mut got = t.value_set(&a, &Budget::default()).unwrap();
        got.sort();
        let mut want = oracle::value_set(&a, t.z(), &t.delta().iter().cloned().collect::<Vec<_>>());
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn cut_sides_keep_half(delta in family(6, 2, 5), mask in 1u32..63) {
        let t = creature_on(6, delta);
        let low: CoordSet = (0..6).filter(|i| mask >> i & 1 == 1).map(Coord).collect();
        let (s0, s1) = cut(&t, &low, &Budget::default()).unwrap();
        let half = match oracle_norm(&t) { Norm::Finite(n) => Norm::Finite(n / 2), inf => inf };
        prop_assert!(oracle_norm(&s0) >= half);
        prop_assert!(oracle_norm(&s1) >= half);
        prop_assert_eq!(s0.z(), &low);
    }

    #[test]
    fn glue_is_the_minimum(d0 in family(3, 2, 3), d1 in family(3, 2, 3)) {
        let t0 = creature_on(3, d0);
        let shift = Embedding::shift(t0.z(), 3);
        let t1 = creature_on(3, d1).permute(&shift).unwrap();
        let g = glue(&[t0.clone(), t1.clone()]).unwrap();
        prop_assert_eq!(oracle_norm(&g), oracle_norm(&t0).min(oracle_norm(&t1)));
        prop_assert_eq!(g.packing(), oracle_norm(&g));
    }

    #[test]
    fn translation_round_trips(eta in pf(6, 3, 1..5), v in pf(6, 3, 6..7)) {
        let a = Alphabet::cyclic(3).unwrap();
        let there = eta.translate(&a, &v).unwrap();
        prop_assert_eq!(there.translate(&a, &v.negate(&a).unwrap()).unwrap(), eta.clone());
        prop_assert_eq!(there.domain_set(), eta.domain_set());
    }

    #[test]
    fn creature_json_round_trips(delta in family(5, 3, 4)) {
        let a = Alphabet::cyclic(3).unwrap();
        let t = creature_on(5, delta);
        let text = json::to_json(&CreatureFile::new(&a, &t));
        let back: CreatureFile = json::from_json(&text).unwrap();
        let (a2, t2) = back.decode(&Budget::default()).unwrap();
        prop_assert_eq!(a2, a);
        prop_assert_eq!(t2, t);
    }

    #[test]
    fn qcondition_json_round_trips(w in pf(4, 2, 0..3), sigmas in prop::collection::vec(pf(10, 2, 1..4), 0..4)) {
        let p = QCondition::plain(Alphabet::binary(), (0..10).map(Coord).collect(), w, sigmas);
        let text = json::to_json(&QCondDoc::new(&p));
        let back: QCondDoc = json::from_json(&text).unwrap();
        prop_assert_eq!(back.decode().unwrap(), p);
    }

    #[test]
    fn syntactic_order_is_a_preorder(
        w in prop::collection::vec(pf(8, 2, 0..3), 3),
        s in prop::collection::vec(prop::collection::vec(pf(8, 2, 2..4), 0..3), 3),
    ) {
        let window: CoordSet = (0..8).map(Coord).collect();
        let ps: Vec<QCondition> =
            w.into_iter().zip(s).map(|(w, s)| QCondition::plain(Alphabet::binary(), window.clone(), w, s)).collect();
        prop_assert!(leq_syntactic(&ps[0], &ps[0]));
        if leq_syntactic(&ps[0], &ps[1]) && leq_syntactic(&ps[1], &ps[2]) {
            prop_assert!(leq_syntactic(&ps[0], &ps[2]));
        }
        if leq_syntactic(&ps[0], &ps[1]) {
            prop_assert!(oracle::qhn_included(&ps[0], &ps[1]));
        }
    }

    #[test]
    fn pos_measure_matches_counting(w in pf(7, 2, 0..3), sigmas in prop::collection::vec(pf(7, 2, 1..4), 0..5)) {
        let p = QCondition::plain(Alphabet::binary(), (0..7).map(Coord).collect(), w, sigmas);
        let count = p.pos_count(&Budget::default()).unwrap();
        prop_assert_eq!(p.pos_measure(&Budget::default()).unwrap(), Rational::new(count.into(), 128.into()));
    }

    #[test]
    fn hall_selection_is_disjoint_and_exact(
        requests in prop::collection::vec((prop::collection::btree_set(0u32..8, 1..5), 1usize..3), 1..5),
    ) {
        let reqs: Vec<(CoordSet, usize)> = requests.iter().map(|(d, k)| (d.iter().map(|&c| Coord(c)).collect(), *k)).collect();
        // Brute force: assign each of the 8 coordinates to at most one request.
        let feasible = {
            fn go(reqs: &[(CoordSet, usize)], need: &mut Vec<usize>, c: u32) -> bool {
                if need.iter().all(|&n| n == 0) {
                    return true;
                }
                if c == 8 {
                    return false;
                }
                if go(reqs, need, c + 1) {
                    return true;
                }
                for i in 0..reqs.len() {
                    if need[i] > 0 && reqs[i].0.contains(&Coord(c)) {
                        need[i] -= 1;
                        let ok = go(reqs, need, c + 1);
                        need[i] += 1;
                        if ok {
                            return true;
                        }
                    }
                }
                false
            }
            go(&reqs, &mut reqs.iter().map(|r| r.1).collect(), 0)
        };
        match hall_select_u(&reqs) {
            Ok(us) => {
                prop_assert!(feasible);
                let mut seen = CoordSet::new();
                for (u, (dom, k)) in us.iter().zip(&reqs) {
                    prop_assert_eq!(u.len(), *k);
                    prop_assert!(u.is_subset(dom));
                    prop_assert!(u.iter().all(|&c| seen.insert(c)));
                }
            }
            Err(_) => prop_assert!(!feasible),
        }
    }

    #[test]
    fn fast_power_matches_repeated_products(num in 1u64..20, den in 1u64..20, exp in 0u64..60) {
        let base = Rational::new(num.into(), den.into());
        let slow = (0..exp).fold(Rational::one(), |acc, _| acc * &base);
        prop_assert_eq!(rational::pow(&base, exp), slow);
    }
}

#[test]
fn minimal_strict_prefixes_validate() {
    for len in 1..=4 {
        let seq = NormSeqPrefix::minimal_strict(len).unwrap();
        assert!(seq.validate(Strictness::Strict).ok(), "length {len}: {seq}");
    }
    assert!(NormSeqPrefix::minimal_strict(5).is_none());
}

#[test]
fn exp_enclosure_brackets_known_digits() {
    let e1 = rational::exp_neg_one_bounds();
    assert_eq!(rational::to_decimal(&e1.lo, 15), "0.367879441171442");
    assert_eq!(rational::to_decimal(&e1.hi, 15), "0.367879441171442");
    let b = rational::exp_neg_bounds(8).unwrap();
    assert_eq!(rational::to_decimal(&b.lo, 9), "0.000335462");
}

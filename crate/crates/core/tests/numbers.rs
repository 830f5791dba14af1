mod common;

use common::{raw_set, RawSet};
use nsd_core::{FilterOracle, HyperNat, IndexSet, NatOp, Poly, QuasiPoly, Relation};
use proptest::prelude::*;

fn hypernat() -> impl Strategy<Value = HyperNat> {
    (prop::collection::vec(0i128..20, 0..5), 1usize..=4)
        .prop_flat_map(|(prefix, period)| {
            let poly = prop::collection::vec(0i128..6, 1..=3);
            (Just(prefix), prop::collection::vec(poly, period), 0i128..4)
        })
        .prop_map(|(prefix, polys, halve)| {
            let polys = polys.iter().map(|c| Poly::from_ints(c)).collect();
            let q = QuasiPoly::new(prefix, polys).unwrap();
            let q = if halve > 1 { q.floor_div(halve) } else { q };
            HyperNat::try_from(q).unwrap()
        })
}

fn quasi() -> impl Strategy<Value = QuasiPoly> {
    (prop::collection::vec(-20i128..20, 0..4), prop::collection::vec(prop::collection::vec(-5i128..6, 1..=3), 1..=3))
        .prop_map(|(prefix, polys)| QuasiPoly::new(prefix, polys.iter().map(|c| Poly::from_ints(c)).collect()).unwrap())
}

const RELATIONS: [Relation; 6] = [Relation::Le, Relation::Lt, Relation::Eq, Relation::Ne, Relation::Ge, Relation::Gt];

proptest! {
    #[test]
    fn arithmetic_is_pointwise(x in hypernat(), y in hypernat()) {
        let sum = HyperNat::apply(NatOp::Add, &x, &y);
        let product = HyperNat::apply(NatOp::Mul, &x, &y);
        let monus = HyperNat::apply(NatOp::Monus, &x, &y);
        for n in 0..=200u64 {
            let (a, b) = (x.eval(n), y.eval(n));
            prop_assert_eq!(sum.eval(n), a + b);
            prop_assert_eq!(product.eval(n), a * b);
            prop_assert_eq!(monus.eval(n), a.saturating_sub(b));
        }
    }

    #[test]
    fn comparisons_are_pointwise(x in hypernat(), y in hypernat()) {
        for rel in RELATIONS {
            let set = x.compare(rel, &y);
            for n in 0..=200u64 {
                prop_assert_eq!(set.contains(n), rel.holds(x.eval(n) as i128, y.eval(n) as i128), "{:?} at {}", rel, n);
            }
        }
        prop_assert!(x.compare(Relation::Eq, &x).is_all());
        let le = x.compare(Relation::Le, &y);
        let gt = x.compare(Relation::Gt, &y);
        prop_assert!(le.union(&gt).is_all());
        prop_assert!(le.intersect(&gt).is_empty());
    }

    #[test]
    fn limit_is_least_bound(x in hypernat(), tower in 0u64..12) {
        let o = FilterOracle::new(tower);
        match x.limit(&o) {
            Some(k) => {
                prop_assert!(o.decide(&x.compare(Relation::Le, &HyperNat::constant(k))));
                if k > 0 {
                    prop_assert!(!o.decide(&x.compare(Relation::Le, &HyperNat::constant(k - 1))));
                }
            }
            None => {
                for k in [0u64, 1, 10, 1000] {
                    prop_assert!(!o.decide(&x.compare(Relation::Le, &HyperNat::constant(k))));
                }
            }
        }
    }

    #[test]
    fn quasi_operations_are_pointwise(x in quasi(), y in quasi(), k in 1i128..6) {
        let lt = x.compare(Relation::Lt, &y);
        let chosen = QuasiPoly::select(&lt, &x, &y);
        let (sum, diff, product) = (x.add(&y), x.sub(&y), x.mul(&y));
        let (lo, hi, abs, monus, div) = (x.min(&y), x.max(&y), x.abs(), x.monus(&y), x.floor_div(k));
        for n in 0..=150u64 {
            let (a, b) = (x.eval(n), y.eval(n));
            prop_assert_eq!(sum.eval(n), a + b);
            prop_assert_eq!(diff.eval(n), a - b);
            prop_assert_eq!(product.eval(n), a * b);
            prop_assert_eq!(lo.eval(n), a.min(b));
            prop_assert_eq!(hi.eval(n), a.max(b));
            prop_assert_eq!(abs.eval(n), a.abs());
            prop_assert_eq!(monus.eval(n), (a - b).max(0));
            prop_assert_eq!(div.eval(n), a.div_euclid(k));
            prop_assert_eq!(chosen.eval(n), if a < b { a } else { b });
        }
    }

    #[test]
    fn hypernat_json_round_trip(x in hypernat()) {
        let text = serde_json::to_string(&x).unwrap();
        let back: HyperNat = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn index_set_canonical_and_round_trip(raw in raw_set(16, 12)) {
        let s: IndexSet = raw.build();
        let text = serde_json::to_string(&s).unwrap();
        let back: IndexSet = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &s);
        let again = IndexSet::new(s.prefix_bits().to_vec(), s.period(), &s.residues()).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert!(s.period() <= raw.pattern.len() && raw.pattern.len() % s.period() == 0);
        for n in 0..100 {
            prop_assert_eq!(s.contains(n), RawSet::member(&raw, n));
        }
    }
}

#[test]
fn limit_depends_on_the_tower() {
    let x: HyperNat = serde_json::from_str(r#"{"prefix":[],"period":2,"polys":[[3],[0,1]]}"#).unwrap();
    assert_eq!(x.limit(&FilterOracle::new(0)), Some(3));
    assert_eq!(x.limit(&FilterOracle::new(1)), None);
}

#[test]
fn rational_coefficients_read_as_pairs() {
    let x: HyperNat = serde_json::from_str(r#"{"period":1,"polys":[[0,[1,2],[1,2]]]}"#).unwrap();
    let expect: Vec<u128> = (0..10u128).map(|n| (n * n + n) / 2).collect();
    let got: Vec<u128> = (0..10).map(|n| x.eval(n)).collect();
    assert_eq!(got, expect);
    assert!(serde_json::from_str::<HyperNat>(r#"{"period":1,"polys":[[[1,2]]]}"#).is_err());
    assert!(serde_json::from_str::<HyperNat>(r#"{"period":1,"polys":[[-1]]}"#).is_err());
}

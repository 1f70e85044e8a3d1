mod common;

use dcomplete::enumerate::{enum_all_posets, enum_canonical_rows, is_isomorphic};

#[test]
fn counts_match_brute_force() {
    for n in 0..=5 {
        assert_eq!(enum_canonical_rows(n).len(), common::class_count(n), "n = {n}");
    }
}

#[test]
fn representatives_are_pairwise_distinct() {
    for n in 0..=6 {
        let ps = enum_all_posets(n);
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                assert!(!is_isomorphic(&ps[i], &ps[j]));
            }
        }
    }
}

#[test]
fn every_natural_order_is_represented() {
    let reps = enum_all_posets(4);
    for m in common::natural_orders(4) {
        let p = common::poset_of(&m);
        assert_eq!(reps.iter().filter(|r| is_isomorphic(r, &p)).count(), 1);
    }
}

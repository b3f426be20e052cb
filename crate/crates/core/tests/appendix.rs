//! The published feasible 12-point plan, decoded on a stand-in travel matrix.
//! Bins, route membership and loads do not depend on travel times.

mod common;

use wastecol_core::decode::{decode, encode, repair};
use wastecol_core::model::evaluate;

#[test]
fn bins_and_routes_match_the_published_plan() {
    let p = common::appendix_surrogate();
    let c = common::appendix_chromosome();
    assert_eq!(repair(&c, &p).unwrap(), c, "published mask needs no repair");
    let s = decode(&c, &p).unwrap();
    assert_eq!(s.bin_assignment, common::APPENDIX_BINS.to_vec());
    assert_eq!(s.routes, common::appendix_routes());
    let monday = &s.loads[0][0];
    assert_eq!(monday.len(), 4);
    for (got, want) in monday.iter().zip([0.0, 5.28, 7.70, 10.36]) {
        assert!((got - want).abs() < 1e-9, "{monday:?}");
    }
    assert!((s.w_max[0] - 5.08).abs() < 1e-9);
    let rep = evaluate(&s, &p).unwrap();
    assert!(rep.feasible, "{:?}", rep.violations);
}

#[test]
fn encoding_a_decoded_plan_round_trips() {
    let p = common::appendix_surrogate();
    let s = decode(&common::appendix_chromosome(), &p).unwrap();
    let again = decode(&encode(&s, 12), &p).unwrap();
    assert_eq!(again.routes, s.routes);
    assert_eq!(again.bin_assignment, s.bin_assignment);
}

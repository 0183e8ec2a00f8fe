mod common;

use refined_chord::oracle::{sample_generic_moments, solve_all, verify_solution};
use refined_chord::{
    oracle_invariant, refined_invariant, InvariantOptions, MemoCache, OracleOptions,
    RefinedPolynomial,
};

fn poly(s: &str) -> RefinedPolynomial {
    s.parse().unwrap()
}

#[test]
fn corpus_is_broad_enough() {
    let corpus = common::corpus();
    assert!(corpus.len() >= 12);
    assert!(corpus.iter().all(|(_, d)| d.len() <= 8));
    assert!(
        corpus
            .iter()
            .filter(|(_, d)| common::has_non_primitive(d))
            .count()
            >= 3
    );
    assert!(
        corpus
            .iter()
            .filter(|(_, d)| !common::is_cp2_family(d))
            .count()
            >= 3
    );
}

#[test]
fn recursion_matches_oracle() {
    let cache = MemoCache::new();
    for (name, d) in common::corpus() {
        let expected = refined_invariant(&d, &InvariantOptions::new(&cache)).unwrap();
        let got = oracle_invariant(&d, 1, OracleOptions::default()).unwrap();
        assert_eq!(got, expected, "{name}");
    }
}

#[test]
fn frozen_values() {
    let cache = MemoCache::new();
    let n = |s: &str| {
        let d = refined_chord::cli::parse_degree(s).unwrap();
        refined_invariant(&d, &InvariantOptions::new(&cache)).unwrap()
    };
    assert_eq!(n("(0,-2),(-1,1),(1,1)"), poly("q^(1/2)+q^(-1/2)"));
    assert_eq!(n("P1xP1:2,2"), poly("q+6+q^-1"));
    assert_eq!(n("(-1,0),(0,-3),(1,3)"), poly("q+1+q^-1"));
    assert_eq!(n("(3,0),(0,3),(-3,-3)"), refined_chord::q_analog(9));
    assert_eq!(
        n("(2,1),(-1,1),(-1,-2),(0,-1),(0,1)"),
        poly("q^2+3q+4+3q^-1+q^-2")
    );
    assert_eq!(
        n("(-1,0)^2,(0,-2),(0,-1),(1,1)^2,(0,1)"),
        poly("q^(3/2)+5q^(1/2)+5q^(-1/2)+q^(-3/2)")
    );
    assert_eq!(
        n("(-1,0)^2,(0,-4),(1,2)^2"),
        poly("q^(5/2)+3q^(3/2)+4q^(1/2)+4q^(-1/2)+3q^(-3/2)+q^(-5/2)")
    );
}

#[test]
fn every_curve_checks_out() {
    for (name, d) in common::corpus().into_iter().filter(|(_, d)| d.len() <= 6) {
        let mu = sample_generic_moments(&d, 5).unwrap();
        let curves = solve_all(&d, &mu).unwrap();
        assert!(!curves.is_empty(), "{name}");
        for (t, sol) in &curves {
            verify_solution(t, &mu, sol).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

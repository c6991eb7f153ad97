mod common;

use common::lp_oracle::{beale, brute_force, duality_holds, random_lp};
use primseq::exactmath::rat;
use primseq::lp::{solve_lp, LpStatus};
use rand::SeedableRng;

#[test]
fn random_programs_match_vertex_enumeration() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(9);
    let (mut optimal, mut infeasible) = (0, 0);
    for i in 0..500 {
        let p = random_lp(&mut rng);
        let s = solve_lp(&p).unwrap();
        match brute_force(&p) {
            Some(v) => {
                assert_eq!(s.status, LpStatus::Optimal, "instance {i}");
                assert_eq!(s.objective.as_ref(), Some(&v), "instance {i}");
                assert!(duality_holds(&p, &s), "instance {i}: duality");
                optimal += 1;
            }
            None => {
                assert_eq!(s.status, LpStatus::Infeasible, "instance {i}");
                assert!(s.farkas.is_some());
                infeasible += 1;
            }
        }
    }
    assert!(optimal > 100 && infeasible > 10, "{optimal} optimal, {infeasible} infeasible");
}

#[test]
fn beale_terminates_at_optimum() {
    let p = beale();
    let s = solve_lp(&p).unwrap();
    assert_eq!(s.objective, Some(rat(-5, 4)));
    assert!(duality_holds(&p, &s));
}

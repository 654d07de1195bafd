//! Randomized properties of the phase arithmetic and the planner.

use std::f64::consts::{PI, TAU};

use holonomy::bounds::state_bound;
use holonomy::bundle::{Frame, Gate};
use holonomy::linalg::{cr, principal_phase, CMat, I1};
use holonomy::propagate::length_bound_ratio;
use holonomy::synthesis::plan_optimal_loop;
use proptest::prelude::*;

fn principal_range() -> impl Strategy<Value = f64> {
    // open at -pi, closed at pi
    prop::num::f64::NORMAL
        .prop_map(|x| x.rem_euclid(TAU))
        .prop_map(|x| if x > PI { x - TAU } else { x })
        .prop_filter("principal phases live in (-pi, pi]", |t| *t > -PI && *t <= PI)
}

proptest! {
    #[test]
    fn state_bound_stays_in_range(theta in principal_range()) {
        let b = state_bound(theta).unwrap();
        prop_assert!(b >= 0.0);
        prop_assert!(b <= PI + 1e-12);
    }

    #[test]
    fn state_bound_is_even_and_monotone(theta in principal_range()) {
        if theta > -PI && theta < PI {
            let b = state_bound(theta).unwrap();
            let b_neg = state_bound(-theta).unwrap();
            prop_assert!((b - b_neg).abs() <= 1e-12);
            let shrunk = state_bound(theta * 0.5).unwrap();
            prop_assert!(shrunk <= b + 1e-12);
        }
    }

    #[test]
    fn lifted_phase_preserves_the_bound(theta in principal_range()) {
        // the planner replaces theta by its lift into [0, 2 pi); both give the
        // same single-phase bound, so negative phases still saturate
        let lifted = if theta < 0.0 { theta + TAU } else { theta };
        let from_lift = (lifted * (TAU - lifted)).sqrt();
        let direct = state_bound(theta).unwrap();
        prop_assert!((from_lift - direct).abs() <= 1e-9);
    }

    #[test]
    fn planner_occupation_reproduces_the_phase(theta in principal_range()) {
        prop_assume!(theta.abs() > 1e-6);
        let gate = Gate::in_standard_basis(
            CMat::from_row_slice(1, 1, &[(I1 * cr(theta)).exp()]),
        ).unwrap();
        let frame = Frame::standard(2, 1).unwrap();
        let plan = plan_optimal_loop(&gate, &frame, 2, 0.0, 1.0).unwrap();
        let blk = &plan.blocks[0];
        let residual = (TAU * blk.b * blk.b - theta).rem_euclid(TAU);
        prop_assert!(residual.min(TAU - residual) <= 1e-9);
        prop_assert!(blk.a >= 0.0 && blk.b >= 0.0);
        prop_assert!((blk.a * blk.a + blk.b * blk.b - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn principal_phase_round_trips(theta in principal_range()) {
        let recovered = principal_phase((I1 * cr(theta)).exp());
        let gap = (recovered - theta + PI).rem_euclid(TAU) - PI;
        prop_assert!(gap.abs() <= 1e-9);
    }

    #[test]
    fn ratio_never_fabricates_one(length in 0.0f64..10.0, bound in 0.0f64..10.0) {
        let r = length_bound_ratio(length, bound);
        if bound > 0.0 {
            prop_assert!((r - length / bound).abs() <= 1e-15);
        } else if length > 0.0 {
            prop_assert!(r.is_infinite() && r > 0.0);
        } else {
            prop_assert!(r.is_nan());
        }
    }
}

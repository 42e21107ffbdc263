//! Property tests over the exact-rational carrier, where every law can be
//! checked with zero tolerance.

use proptest::prelude::*;

use maxplus_sldi::matrix::TropMatrix;
use maxplus_sldi::ncp::{oracle_ncp, solve_ncp, CycleTimeSet, PicInstance};
use maxplus_sldi::pteg::Pteg;
use maxplus_sldi::scalar::{Rational, Trop};
use maxplus_sldi::sldi::Sldi;
use maxplus_sldi::CircuitClass;

type S = Trop<Rational>;
type M = TropMatrix<Rational>;

fn scalar() -> impl Strategy<Value = S> {
    prop_oneof![
        2 => Just(Trop::NegInf),
        1 => Just(Trop::PosInf),
        8 => (-20i64..=20).prop_map(Trop::from_int),
    ]
}

fn finite_scalar() -> impl Strategy<Value = S> {
    prop_oneof![
        2 => Just(Trop::NegInf),
        8 => (-8i64..=8).prop_map(Trop::from_int),
    ]
}

fn matrix(n: usize) -> impl Strategy<Value = M> {
    prop::collection::vec(finite_scalar(), n * n).prop_map(move |data| {
        let mut m = M::eps(n, n);
        for (idx, v) in data.into_iter().enumerate() {
            m.set(idx / n, idx % n, v);
        }
        m
    })
}

proptest! {
    #[test]
    fn scalar_semiring_laws(a in scalar(), b in scalar(), c in scalar()) {
        // ⊕ is commutative, associative, idempotent with neutral -inf.
        prop_assert_eq!(a.oplus(b), b.oplus(a));
        prop_assert_eq!(a.oplus(b).oplus(c), a.oplus(b.oplus(c)));
        prop_assert_eq!(a.oplus(a), a);
        prop_assert_eq!(a.oplus(Trop::NegInf), a);
        // ⊗ is commutative, associative, with neutral 0 and absorbing -inf.
        prop_assert_eq!(a.otimes(b), b.otimes(a));
        prop_assert_eq!(a.otimes(b).otimes(c), a.otimes(b.otimes(c)));
        prop_assert_eq!(a.otimes(S::zero()), a);
        prop_assert_eq!(a.otimes(Trop::NegInf), Trop::NegInf);
        // Duality: a ⊠ b = -((-a) ⊗ (-b)) under the extended negation.
        prop_assert_eq!(
            a.dual_otimes(b),
            a.neg_extended().otimes(b.neg_extended()).neg_extended()
        );
        // ⊗ distributes over ⊕.
        prop_assert_eq!(a.otimes(b.oplus(c)), a.otimes(b).oplus(a.otimes(c)));
    }

    #[test]
    fn matrix_product_laws(a in matrix(3), b in matrix(3), c in matrix(3)) {
        let ab_c = a.otimes(&b).unwrap().otimes(&c).unwrap();
        let a_bc = a.otimes(&b.otimes(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let left = a.oplus(&b).unwrap().otimes(&c).unwrap();
        let right = a.otimes(&c).unwrap().oplus(&b.otimes(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let eye = M::eye(3);
        prop_assert_eq!(a.otimes(&eye).unwrap(), a.clone());
        prop_assert_eq!(eye.otimes(&a).unwrap(), a.clone());
    }

    #[test]
    fn sharp_is_an_involution(a in matrix(3)) {
        prop_assert_eq!(a.sharp().sharp(), a);
    }

    #[test]
    fn star_of_nonpositive_matrix_is_a_fixpoint(a in matrix(4)) {
        // Clamping entries to ≤ 0 rules out positive circuits.
        let g = a.map(|v| v.dual_oplus(S::zero()));
        let star = g.kleene_star().unwrap();
        let refix = M::eye(4).oplus(&g.otimes(&star).unwrap()).unwrap();
        prop_assert_eq!(&star, &refix);
        prop_assert_eq!(star.otimes(&star).unwrap(), star.clone());
        prop_assert_eq!(star.kleene_star().unwrap(), star);
    }

    #[test]
    fn solver_agrees_with_oracle(
        p in matrix(4),
        i in matrix(4),
        c in matrix(4),
    ) {
        let pic = PicInstance::new(p, i, c).unwrap();
        let fast = solve_ncp(&pic).unwrap();
        let exact = oracle_ncp(&pic, 4).unwrap();
        prop_assert_eq!(fast, exact);
    }

    #[test]
    fn solution_endpoints_match_circuit_test(
        p in matrix(3),
        i in matrix(3),
        c in matrix(3),
    ) {
        let pic = PicInstance::new(p, i, c).unwrap();
        if let CycleTimeSet::Interval { lo, hi } = solve_ncp(&pic).unwrap() {
            let one = S::from_int(1);
            // Feasible at the finite endpoints, infeasible one unit outside.
            for (lambda, expected) in [
                (lo, CircuitClass::NoPositiveCircuit),
                (hi, CircuitClass::NoPositiveCircuit),
                (lo.otimes(one.inverse().unwrap()), CircuitClass::HasPositiveCircuit),
                (hi.otimes(one), CircuitClass::HasPositiveCircuit),
            ] {
                if lambda.is_finite() {
                    let verdict = pic
                        .at_lambda(lambda)
                        .unwrap()
                        .has_positive_circuit()
                        .unwrap();
                    prop_assert_eq!(verdict, expected);
                }
            }
        }
    }
}

fn mode(n: usize) -> impl Strategy<Value = Pteg<Rational>> {
    (matrix(n), matrix(n), prop::collection::vec(0i64..=4, 2 * n * n)).prop_map(
        move |(a0, a1, slack)| {
            // B entries: +inf, or the A entry plus a non-negative slack so
            // the window stays consistent.
            let bound = |a: &M, slack: &[i64]| {
                let mut b = M::top(n, n);
                for (i, j, v) in a.entries() {
                    if v.is_finite() && slack[i * n + j] < 4 {
                        b.set(i, j, v.otimes(Trop::from_int(slack[i * n + j])));
                    }
                }
                b
            };
            let b0 = bound(&a0, &slack[..n * n]);
            let b1 = bound(&a1, &slack[n * n..]);
            Pteg::new(a0, a1, b0, b1).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_and_folded_schedule_analyses_agree(
        modes in prop::collection::vec(mode(3), 1..=3),
        picks in prop::collection::vec(0usize..3, 1..=6),
    ) {
        let sldi = Sldi::new(
            modes
                .into_iter()
                .enumerate()
                .map(|(k, g)| (format!("m{k}"), g))
                .collect(),
        )
        .unwrap();
        let count = sldi.mode_names().count();
        let sched: Vec<usize> = picks.into_iter().map(|p| p % count).collect();
        let direct = sldi.cycle_times_direct(&sched).unwrap();
        let folded = sldi.cycle_times_improved(&sched).unwrap();
        prop_assert_eq!(direct, folded);
    }

    #[test]
    fn rotating_a_schedule_preserves_cycle_times(
        modes in prop::collection::vec(mode(3), 2..=3),
        picks in prop::collection::vec(0usize..3, 2..=6),
        shift in 0usize..6,
    ) {
        let sldi = Sldi::new(
            modes
                .into_iter()
                .enumerate()
                .map(|(k, g)| (format!("m{k}"), g))
                .collect(),
        )
        .unwrap();
        let count = sldi.mode_names().count();
        let sched: Vec<usize> = picks.into_iter().map(|p| p % count).collect();
        let shift = shift % sched.len();
        let rotated: Vec<usize> = sched[shift..]
            .iter()
            .chain(&sched[..shift])
            .copied()
            .collect();
        prop_assert_eq!(
            sldi.cycle_times_improved(&sched).unwrap(),
            sldi.cycle_times_improved(&rotated).unwrap()
        );
    }

    #[test]
    fn feasible_synthesis_always_passes_the_checker(
        modes in prop::collection::vec(mode(3), 1..=2),
        picks in prop::collection::vec(0usize..2, 1..=4),
    ) {
        let sldi = Sldi::new(
            modes
                .into_iter()
                .enumerate()
                .map(|(k, g)| (format!("m{k}"), g))
                .collect(),
        )
        .unwrap();
        let count = sldi.mode_names().count();
        let sched: Vec<usize> = picks.into_iter().map(|p| p % count).collect();
        if let CycleTimeSet::Interval { lo, .. } = sldi.cycle_times_improved(&sched).unwrap() {
            if lo.is_finite() {
                let x0 = sldi.synthesize_v_periodic(&sched, lo).unwrap();
                let traj = maxplus_sldi::trajectory::unroll(&x0, sldi.n(), lo, 5).unwrap();
                let report = sldi.check_trajectory(&sched, &traj).unwrap();
                prop_assert!(report.passed(), "violation: {:?}", report.violation);
            }
        }
    }
}

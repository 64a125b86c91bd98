//! The simplex solver checked by strong duality on random programs.

use matchforge::lp::{solve, LinearProgram, LpStatus, Relation};
use matchforge::rational::{int, Rational};
use num::Zero;
use proptest::prelude::*;

type Dense = (Vec<Vec<i64>>, Vec<i64>, Vec<i64>);

fn arb_program() -> impl Strategy<Value = Dense> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(rows, cols)| {
        (
            proptest::collection::vec(proptest::collection::vec(-3i64..=5, cols), rows),
            proptest::collection::vec(-4i64..=6, rows),
            proptest::collection::vec(-2i64..=6, cols),
        )
    })
}

/// min c·x s.t. A x ≥ b, x ≥ 0.
fn primal((a, b, c): &Dense) -> LinearProgram {
    let mut lp = LinearProgram::new(c.len()).minimize(c.iter().map(|&x| int(x)).collect());
    for (row, &rhs) in a.iter().zip(b) {
        lp.push(row.iter().map(|&x| int(x)).collect(), Relation::Ge, int(rhs));
    }
    lp
}

/// max b·y s.t. Aᵀ y ≤ c, y ≥ 0, written as a minimisation of -b·y.
fn dual((a, b, c): &Dense) -> LinearProgram {
    let mut lp = LinearProgram::new(b.len()).minimize(b.iter().map(|&x| int(-x)).collect());
    for (j, &cj) in c.iter().enumerate() {
        lp.push(a.iter().map(|row| int(row[j])).collect(), Relation::Le, int(cj));
    }
    lp
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn strong_duality(p in arb_program()) {
        let (lp, dl) = (primal(&p), dual(&p));
        let (x, y) = (solve(&lp), solve(&dl));
        match x.status {
            LpStatus::Optimal => {
                prop_assert!(lp.is_feasible(&x.assignment));
                prop_assert_eq!(lp.objective_value(&x.assignment), x.value.clone());
                prop_assert_eq!(y.status, LpStatus::Optimal);
                prop_assert!(dl.is_feasible(&y.assignment));
                prop_assert_eq!(x.value, -y.value);
            }
            LpStatus::Unbounded => prop_assert_eq!(y.status, LpStatus::Infeasible),
            LpStatus::Infeasible => prop_assert!(y.status != LpStatus::Optimal),
        }
    }

    #[test]
    fn equality_rows_hold_exactly(p in arb_program()) {
        let (a, b, c) = &p;
        let mut lp = LinearProgram::new(c.len()).minimize(c.iter().map(|&x| int(x.abs())).collect());
        for (row, &rhs) in a.iter().zip(b) {
            lp.push(row.iter().map(|&x| int(x)).collect(), Relation::Eq, int(rhs));
        }
        let s = solve(&lp);
        if s.status == LpStatus::Optimal {
            prop_assert!(lp.is_feasible(&s.assignment));
            prop_assert!(s.value >= Rational::zero());
        }
    }
}

#[test]
fn degenerate_program_terminates() {
    // Beale's classic cycling example for the largest-coefficient rule.
    let r = |n: i64, d: i64| matchforge::rational::ratio(n, d);
    let mut lp = LinearProgram::new(4).minimize(vec![r(-3, 4), int(150), r(-1, 50), int(6)]);
    lp.push(vec![r(1, 4), int(-60), r(-1, 25), int(9)], Relation::Le, int(0));
    lp.push(vec![r(1, 2), int(-90), r(-1, 50), int(3)], Relation::Le, int(0));
    lp.push(vec![int(0), int(0), int(1), int(0)], Relation::Le, int(1));
    let s = solve(&lp);
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(s.value, r(-1, 20));
}

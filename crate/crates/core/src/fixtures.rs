//! Small loops shared by unit tests.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use crate::constraints::{ConstraintSystem, LinConstraint, LoopModel, Relation, VarSpace};

pub type Row<'a> = (&'a [i64], Relation, i64);

pub fn space(n: usize) -> VarSpace {
    VarSpace::new((1..=n).map(|i| format!("x{i}"))).unwrap()
}

pub fn system(vars: Vec<String>, rows: &[Row<'_>]) -> ConstraintSystem {
    ConstraintSystem::with_rows(
        vars,
        rows.iter().map(|(c, rel, b)| LinConstraint::from_ints(c, *rel, *b)).collect(),
    )
    .unwrap()
}

/// Transition relation over `x1..xn, x1'..xn'`.
pub fn clause(n: usize, rows: &[Row<'_>]) -> ConstraintSystem {
    system(space(n).columns(), rows)
}

pub fn single(n: usize, rows: &[Row<'_>]) -> LoopModel {
    LoopModel::single(space(n), clause(n, rows)).unwrap()
}

pub fn guarded(n: usize, guard: &[Row<'_>], update: &[Row<'_>]) -> LoopModel {
    LoopModel::guarded(space(n), clause(n, guard), clause(n, update)).unwrap()
}

/// `x1 >= 2, 2x1' + 1 >= x1, 2x1' <= x1, x2 = x2' + 1` over the naturals.
pub fn log2_clause() -> ConstraintSystem {
    use Relation::*;
    clause(
        2,
        &[
            (&[1, 0, 0, 0], Ge, 2),
            (&[-1, 0, 2, 0], Ge, -1),
            (&[-1, 0, 2, 0], Le, 0),
            (&[0, 1, 0, -1], Eq, 1),
        ],
    )
}

/// `while x1 >= 2 do x1 := x1 div 2; x2 := x2 + 1` with its invariant.
pub fn log2_loop() -> LoopModel {
    use Relation::*;
    guarded(
        2,
        &[(&[1, 0, 0, 0], Ge, 2)],
        &[
            (&[-1, 0, 2, 0], Le, 0),
            (&[-1, 0, 2, 0], Ge, -1),
            (&[0, 1, 0, -1], Eq, -1),
            (&[0, 0, 0, 1], Ge, 1),
        ],
    )
}

/// `x >= 0, x' = x - 1`
pub fn countdown() -> LoopModel {
    single(1, &[(&[1, 0], Relation::Ge, 0), (&[-1, 1], Relation::Eq, -1)])
}

/// `x >= 0, x' = x + 1`
pub fn diverge() -> LoopModel {
    single(1, &[(&[1, 0], Relation::Ge, 0), (&[-1, 1], Relation::Eq, 1)])
}

pub fn mu_system(with_mu0: bool, n: usize, rows: &[Row<'_>]) -> ConstraintSystem {
    system(crate::ms::param_names(n, with_mu0), rows)
}

/// Satisfiable loops over one or two variables, built around an
/// integer transition; half of them get a countdown on `x1`.
pub fn small_loop(coeff: i64) -> impl Strategy<Value = LoopModel> {
    (1usize..=2).prop_flat_map(move |n| {
        (
            proptest::collection::vec(proptest::collection::vec(-coeff..=coeff, 2 * n), 1..4),
            proptest::collection::vec(-2i64..=2, 2 * n),
            proptest::collection::vec(0i64..2, 4),
            any::<bool>(),
        )
            .prop_map(move |(rows, mut p, slack, countdown)| {
                if countdown {
                    p[n] = p[0] - 1;
                }
                let mut rs: Vec<(Vec<i64>, Relation, i64)> = rows
                    .iter()
                    .zip(slack.iter().cycle())
                    .map(|(a, s)| {
                        let ap: i64 = a.iter().zip(&p).map(|(u, v)| u * v).sum();
                        (a.clone(), Relation::Ge, ap - s)
                    })
                    .collect();
                if countdown {
                    let mut a = vec![0; 2 * n];
                    a[0] = 1;
                    rs.push((a.clone(), Relation::Ge, p[0].min(0)));
                    a[n] = -1;
                    rs.push((a, Relation::Ge, 1));
                }
                let refs: Vec<Row<'_>> = rs.iter().map(|(a, r, b)| (a.as_slice(), *r, *b)).collect();
                single(n, &refs)
            })
    })
}

/// Guarded loops whose update `x' in [Mx + d, Mx + d + w]` has a successor
/// for every state; the guard holds at an integer point.
pub fn total_guarded_loop(coeff: i64) -> impl Strategy<Value = LoopModel> {
    (1usize..=2).prop_flat_map(move |n| {
        (
            proptest::collection::vec(proptest::collection::vec(-coeff..=coeff, n), 0..3),
            proptest::collection::vec(-2i64..=2, n),
            proptest::collection::vec(proptest::collection::vec(-2i64..=2, n + 1), n),
            proptest::collection::vec(0i64..2, n),
        )
            .prop_map(move |(guard, p, upd, width)| {
                let mut g: Vec<(Vec<i64>, Relation, i64)> = guard
                    .iter()
                    .map(|a| {
                        let ap: i64 = a.iter().zip(&p).map(|(u, v)| u * v).sum();
                        let mut row = a.clone();
                        row.resize(2 * n, 0);
                        (row, Relation::Ge, ap)
                    })
                    .collect();
                let mut row = vec![0; 2 * n];
                row[0] = 1;
                g.push((row, Relation::Ge, p[0].min(0)));
                let mut u = Vec::new();
                for (i, (r, w)) in upd.iter().zip(&width).enumerate() {
                    // x_i' - (M x)_i
                    let mut row: Vec<i64> = r[..n].iter().map(|c| -c).collect();
                    row.resize(2 * n, 0);
                    row[n + i] = 1;
                    if *w == 0 {
                        u.push((row, Relation::Eq, r[n]));
                    } else {
                        u.push((row.clone(), Relation::Ge, r[n]));
                        u.push((row, Relation::Le, r[n] + w));
                    }
                }
                let gr: Vec<Row<'_>> = g.iter().map(|(a, r, b)| (a.as_slice(), *r, *b)).collect();
                let ur: Vec<Row<'_>> = u.iter().map(|(a, r, b)| (a.as_slice(), *r, *b)).collect();
                guarded(n, &gr, &ur)
            })
    })
}

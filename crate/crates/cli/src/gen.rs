//! Random loops that are satisfiable by construction: every row is built to
//! hold at a sampled integer point.

use linrank_core::arith::QVector;
use linrank_core::constraints::{ConstraintSystem, LinConstraint, LoopModel, Relation, VarSpace};
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_vars: usize,
    /// Rows of the merged `(x, x')` system, counted before equalities are split.
    pub max_rows: usize,
    /// Coefficients are drawn from `[-coef, coef]`.
    pub coef: i64,
    pub eq_prob: f64,
    /// Chance of planting a decreasing, bounded combination.
    pub decrease_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_vars: 4, max_rows: 8, coef: 5, eq_prob: 0.15, decrease_prob: 0.5 }
    }
}

fn space(n: usize) -> VarSpace {
    VarSpace::new((1..=n).map(|i| format!("x{i}"))).expect("n >= 1")
}

fn row(coeffs: &[i64], rel: Relation, rhs: i64) -> LinConstraint {
    LinConstraint::from_ints(coeffs, rel, rhs)
}

fn dot(a: &[i64], p: &[i64]) -> i64 {
    a.iter().zip(p).map(|(u, v)| u * v).sum()
}

fn nonzero_vec<R: Rng>(rng: &mut R, len: usize, coef: i64) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..len).map(|_| rng.gen_range(-coef..=coef)).collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

/// A row through or beside `p`: `a·p` is at the right side of `b`.
fn row_at<R: Rng>(rng: &mut R, a: Vec<i64>, p: &[i64], eq_prob: f64) -> LinConstraint {
    let ap = dot(&a, p);
    if rng.gen_bool(eq_prob) {
        return row(&a, Relation::Eq, ap);
    }
    let slack = rng.gen_range(0..=2);
    if rng.gen_bool(0.5) {
        row(&a, Relation::Ge, ap - slack)
    } else {
        row(&a, Relation::Le, ap + slack)
    }
}

/// A single-system loop: `x1 >= 0`, optionally a planted decrease
/// `c·x - c·x' >= 1` with `c·x` bounded below, then random rows.
pub fn random_loop<R: Rng>(rng: &mut R, cfg: &GenConfig) -> LoopModel {
    let n = rng.gen_range(1..=cfg.max_vars);
    let m = rng.gen_range(1..=cfg.max_rows);
    let mut p: Vec<i64> = (0..2 * n).map(|_| rng.gen_range(-5..=5)).collect();
    p[0] = p[0].abs();
    let mut rows = Vec::with_capacity(m);
    let mut x1 = vec![0; 2 * n];
    x1[0] = 1;
    rows.push(row(&x1, Relation::Ge, 0));
    if m >= 3 && rng.gen_bool(cfg.decrease_prob) {
        let c = nonzero_vec(rng, n, 2);
        let j = c.iter().position(|&v| v != 0).expect("nonzero");
        let d = dot(&c, &p[..n]) - dot(&c, &p[n..]);
        if d < 1 {
            let step = (1 - d + c[j].abs() - 1) / c[j].abs();
            p[n + j] -= c[j].signum() * step;
        }
        let mut dec = c.clone();
        dec.extend(c.iter().map(|v| -v));
        rows.push(row(&dec, Relation::Ge, 1));
        let mut bound = c.clone();
        bound.resize(2 * n, 0);
        let slack = rng.gen_range(0..=2);
        rows.push(row(&bound, Relation::Ge, dot(&bound, &p) - slack));
    }
    while rows.len() < m {
        let a = nonzero_vec(rng, 2 * n, cfg.coef);
        rows.push(row_at(rng, a, &p, cfg.eq_prob));
    }
    let c = ConstraintSystem::with_rows(space(n).columns(), rows).expect("rows span the columns");
    LoopModel::single(space(n), c).expect("non-strict rows")
}

/// A guarded loop whose update `x_i' in [(Mx)_i + d_i, (Mx)_i + d_i + w_i]`
/// has a successor for every state.
pub fn random_guarded_loop<R: Rng>(rng: &mut R, cfg: &GenConfig) -> LoopModel {
    let n = rng.gen_range(1..=cfg.max_vars.min(cfg.max_rows.saturating_sub(1)).max(1));
    let p: Vec<i64> = (0..n).map(|i| if i == 0 { rng.gen_range(0..=5) } else { rng.gen_range(-5..=5) }).collect();
    let mut update = Vec::new();
    let mut used = 0;
    for i in 0..n {
        let mut a: Vec<i64> = (0..n).map(|_| -rng.gen_range(-2..=2)).collect();
        a.resize(2 * n, 0);
        a[n + i] = 1;
        let d = rng.gen_range(-3..=3);
        // Intervals take two rows; keep room for one guard row per remaining variable.
        if used + 2 + (n - i - 1) < cfg.max_rows && rng.gen_bool(0.3) {
            let w = rng.gen_range(1..=2);
            update.push(row(&a, Relation::Ge, d));
            update.push(row(&a, Relation::Le, d + w));
            used += 2;
        } else {
            update.push(row(&a, Relation::Eq, d));
            used += 1;
        }
    }
    let mut guard = Vec::new();
    let mut x1 = vec![0; 2 * n];
    x1[0] = 1;
    guard.push(row(&x1, Relation::Ge, 0));
    let extra = rng.gen_range(0..=cfg.max_rows.saturating_sub(used + 1));
    for _ in 0..extra {
        let mut a = nonzero_vec(rng, n, cfg.coef);
        let r = row_at(rng, a.clone(), &p, cfg.eq_prob);
        a.resize(2 * n, 0);
        guard.push(LinConstraint::new(QVector::from_ints(&a), r.rel, r.rhs));
    }
    let sys = |rows| ConstraintSystem::with_rows(space(n).columns(), rows).expect("rows span the columns");
    LoopModel::guarded(space(n), sys(guard), sys(update)).expect("guard rows are unprimed")
}

/// Rows of the merged system before equality splitting.
pub fn row_count(l: &LoopModel) -> usize {
    l.merged().len()
}

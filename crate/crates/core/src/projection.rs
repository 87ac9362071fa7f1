//! Fourier–Motzkin projection, entailment, redundancy removal and exact
//! comparison of not-necessarily-closed polyhedra.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{QVector, Rational};
use crate::constraints::{ConstraintSystem, LinConstraint, Relation};
use crate::simplex::strict_feasible_point;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProjectionError {
    UnknownVariable(String),
    /// Entailment was asked of an empty system.
    Unsatisfiable,
}

impl fmt::Display for ProjectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionError::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            ProjectionError::Unsatisfiable => f.write_str("constraint system is unsatisfiable"),
        }
    }
}

impl core::error::Error for ProjectionError {}

fn nnc_feasible(dim: usize, vars: &[String], rows: impl IntoIterator<Item = LinConstraint>) -> bool {
    let mut s = ConstraintSystem::new(vars.to_vec());
    for r in rows {
        debug_assert_eq!(r.dim(), dim);
        s.push(r).expect("row matches variable count");
    }
    strict_feasible_point(&s).is_some()
}

pub fn is_empty(c: &ConstraintSystem) -> bool {
    strict_feasible_point(c).is_none()
}

fn row_entailed(vars: &[String], others: &[&LinConstraint], k: &LinConstraint) -> bool {
    let dim = vars.len();
    let sides: Vec<LinConstraint> = match k.complement() {
        Some(neg) => vec![neg],
        None => vec![
            LinConstraint::new(k.coeffs.clone(), Relation::Lt, k.rhs.clone()),
            LinConstraint::new(k.coeffs.clone(), Relation::Gt, k.rhs.clone()),
        ],
    };
    sides.into_iter().all(|neg| {
        !nnc_feasible(dim, vars, others.iter().map(|r| (*r).clone()).chain(core::iter::once(neg)))
    })
}

/// Whether every solution of `c` satisfies `k` (strictness respected).
pub fn entails(c: &ConstraintSystem, k: &LinConstraint) -> Result<bool, ProjectionError> {
    if is_empty(c) {
        return Err(ProjectionError::Unsatisfiable);
    }
    let others: Vec<&LinConstraint> = c.rows().iter().collect();
    Ok(row_entailed(c.vars(), &others, k))
}

/// Whether the solution set of `c1` is contained in that of `c2`.
///
/// Both systems must share the same variable list; otherwise the answer is
/// `false`.
pub fn includes(c1: &ConstraintSystem, c2: &ConstraintSystem) -> bool {
    if c1.vars() != c2.vars() {
        return false;
    }
    if is_empty(c1) {
        return true;
    }
    let others: Vec<&LinConstraint> = c1.rows().iter().collect();
    c2.rows().iter().all(|k| row_entailed(c1.vars(), &others, k))
}

/// Exact set equality of two systems over the same variables, including
/// which boundary faces are open.
pub fn equivalent(c1: &ConstraintSystem, c2: &ConstraintSystem) -> bool {
    includes(c1, c2) && includes(c2, c1)
}

/// Topological closure: the relaxed system when non-empty.
pub fn closure(c: &ConstraintSystem) -> ConstraintSystem {
    if is_empty(c) {
        ConstraintSystem::infeasible(c.vars().to_vec())
    } else {
        c.relaxed()
    }
}

/// Equality of the topological closures.
pub fn closure_equivalent(c1: &ConstraintSystem, c2: &ConstraintSystem) -> bool {
    equivalent(&closure(c1), &closure(c2))
}

/// Scales to `<`/`<=`/`=` with integer coefficients of gcd one; equalities
/// also get a positive leading coefficient. Ground rows are left as is.
fn normalize(row: &LinConstraint) -> LinConstraint {
    let mut row = row.to_upper_form();
    if row.is_ground() {
        return row;
    }
    let l = Rational::from(Rational::denominator_lcm(row.coeffs.iter()));
    let scaled = row.coeffs.scale(&l);
    let g = Rational::from(Rational::numerator_gcd(scaled.iter()));
    let mut factor = &l / &g;
    if row.rel == Relation::Eq {
        let lead = row.coeffs.iter().find(|c| !c.is_zero()).expect("non-ground row");
        if lead.is_negative() {
            factor = -factor;
        }
    }
    row.coeffs = row.coeffs.scale(&factor);
    row.rhs = &row.rhs * &factor;
    row
}

enum Cleaned {
    Rows(Vec<LinConstraint>),
    Empty,
}

/// Normalizes rows, settles ground rows and keeps only the tightest of each
/// family of parallel inequalities.
fn clean(rows: impl IntoIterator<Item = LinConstraint>) -> Cleaned {
    let mut eqs: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    let mut ineqs: BTreeMap<Vec<Rational>, (Rational, bool)> = BTreeMap::new();
    let mut order: Vec<(bool, Vec<Rational>)> = Vec::new();
    for r in rows {
        let r = normalize(&r);
        if r.is_ground() {
            if !r.rel.holds(&Rational::zero(), &r.rhs) {
                return Cleaned::Empty;
            }
            continue;
        }
        let key = r.coeffs.as_slice().to_vec();
        if r.rel == Relation::Eq {
            match eqs.get(&key) {
                Some(b) if *b != r.rhs => return Cleaned::Empty,
                Some(_) => {}
                None => {
                    order.push((true, key.clone()));
                    eqs.insert(key, r.rhs);
                }
            }
        } else {
            let strict = r.rel.is_strict();
            match ineqs.get_mut(&key) {
                Some((b, s)) => {
                    if r.rhs < *b || (r.rhs == *b && strict) {
                        *b = r.rhs;
                        *s = strict;
                    }
                }
                None => {
                    order.push((false, key.clone()));
                    ineqs.insert(key, (r.rhs, strict));
                }
            }
        }
    }
    let out = order
        .into_iter()
        .map(|(is_eq, key)| {
            if is_eq {
                let rhs = eqs[&key].clone();
                LinConstraint::new(QVector::new(key), Relation::Eq, rhs)
            } else {
                let (rhs, strict) = ineqs[&key].clone();
                let rel = if strict { Relation::Lt } else { Relation::Le };
                LinConstraint::new(QVector::new(key), rel, rhs)
            }
        })
        .collect();
    Cleaned::Rows(out)
}

fn drop_redundant_rows(vars: &[String], rows: Vec<LinConstraint>) -> Vec<LinConstraint> {
    let mut keep = vec![true; rows.len()];
    for i in 0..rows.len() {
        let others: Vec<&LinConstraint> = rows
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && keep[*j])
            .map(|(_, r)| r)
            .collect();
        if row_entailed(vars, &others, &rows[i]) {
            keep[i] = false;
        }
    }
    rows.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect()
}

/// Drops rows entailed by the remaining ones. The result has the same
/// solution set and every retained row is needed; an empty input collapses
/// to the single row `0 <= -1`.
pub fn remove_redundant(c: &ConstraintSystem) -> ConstraintSystem {
    if is_empty(c) {
        return ConstraintSystem::infeasible(c.vars().to_vec());
    }
    let rows: Vec<LinConstraint> = c
        .rows()
        .iter()
        .filter(|r| !(r.is_ground() && r.rel.holds(&Rational::zero(), &r.rhs)))
        .cloned()
        .collect();
    let kept = drop_redundant_rows(c.vars(), rows);
    ConstraintSystem::with_rows(c.vars().to_vec(), kept).expect("rows match variables")
}

fn drop_column(row: &LinConstraint, j: usize) -> LinConstraint {
    let coeffs: QVector = row
        .coeffs
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != j)
        .map(|(_, c)| c.clone())
        .collect();
    LinConstraint::new(coeffs, row.rel, row.rhs.clone())
}

/// One elimination step on normalized rows; the column `j` stays in place
/// (with zero coefficients) so indices remain stable.
fn eliminate_column(rows: Vec<LinConstraint>, j: usize) -> Vec<LinConstraint> {
    let pivot = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.rel == Relation::Eq && !r.coeffs[j].is_zero())
        .min_by_key(|(_, r)| r.coeffs.iter().filter(|c| !c.is_zero()).count())
        .map(|(i, _)| i);
    if let Some(p) = pivot {
        let e = rows[p].clone();
        let ej = e.coeffs[j].clone();
        return rows
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != p)
            .map(|(_, r)| {
                let rj = r.coeffs[j].clone();
                if rj.is_zero() {
                    return r;
                }
                // r - (rj/ej) e
                let f = &rj / &ej;
                let coeffs = r.coeffs.sub(&e.coeffs.scale(&f)).expect("same length");
                LinConstraint::new(coeffs, r.rel, &r.rhs - &(&e.rhs * &f))
            })
            .collect();
    }
    let mut out = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for r in rows {
        let s = r.coeffs[j].signum();
        match s {
            0 => out.push(r),
            1 => pos.push(r),
            _ => neg.push(r),
        }
    }
    for p in &pos {
        for q in &neg {
            let a = p.coeffs[j].clone();
            let b = -&q.coeffs[j];
            let coeffs = p.coeffs.scale(&b).add(&q.coeffs.scale(&a)).expect("same length");
            let rhs = &(&p.rhs * &b) + &(&q.rhs * &a);
            let rel = if p.rel.is_strict() || q.rel.is_strict() { Relation::Lt } else { Relation::Le };
            let mut c: Vec<Rational> = coeffs.into_vec();
            c[j] = Rational::zero();
            out.push(LinConstraint::new(QVector::new(c), rel, rhs));
        }
    }
    out
}

/// Removes variable `v` by Fourier–Motzkin (or substitution through an
/// equality containing it). Only duplicate and ground rows are pruned.
pub fn eliminate(c: &ConstraintSystem, v: &str) -> Result<ConstraintSystem, ProjectionError> {
    let j = c.var_index(v).ok_or_else(|| ProjectionError::UnknownVariable(v.into()))?;
    let vars: Vec<String> = c.vars().iter().filter(|w| w.as_str() != v).cloned().collect();
    let rows: Vec<LinConstraint> = c.rows().iter().map(normalize).collect();
    let rows = eliminate_column(rows, j);
    match clean(rows.iter().map(|r| drop_column(r, j))) {
        Cleaned::Empty => Ok(ConstraintSystem::infeasible(vars)),
        Cleaned::Rows(rows) => Ok(ConstraintSystem::with_rows(vars, rows).expect("rows match variables")),
    }
}

fn elimination_cost(rows: &[LinConstraint], j: usize) -> (bool, usize) {
    let mut pos = 0;
    let mut neg = 0;
    let mut has_eq = false;
    for r in rows {
        match r.coeffs[j].signum() {
            0 => {}
            s => {
                if r.rel == Relation::Eq {
                    has_eq = true;
                } else if s > 0 {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
        }
    }
    (!has_eq, pos * neg)
}

/// Projects rows over the full variable list onto the columns not in
/// `drop`; returns `None` when the rows are found to be empty.
fn project_component(vars: &[String], rows: Vec<LinConstraint>, drop: &[usize]) -> Option<Vec<LinConstraint>> {
    let mut rows = rows;
    let mut pending: Vec<usize> = drop.to_vec();
    while !pending.is_empty() {
        let (k, _) = pending
            .iter()
            .enumerate()
            .min_by_key(|(_, &j)| elimination_cost(&rows, j))
            .expect("pending is non-empty");
        let j = pending.swap_remove(k);
        rows = eliminate_column(rows, j);
        rows = match clean(rows) {
            Cleaned::Empty => return None,
            Cleaned::Rows(r) => r,
        };
        if rows.len() > 2 {
            if !nnc_feasible(vars.len(), vars, rows.iter().cloned()) {
                return None;
            }
            rows = drop_redundant_rows(vars, rows);
        }
    }
    Some(rows)
}

/// Projection of `c` onto the variables in `keep`, in the order given.
///
/// Dropped variables are split into groups that never share a row; each
/// group is eliminated on its own sub-system, which keeps the intermediate
/// Fourier–Motzkin systems small. The result is irredundant, with
/// inequalities written in `>=`/`>` form.
pub fn project<S: AsRef<str>>(c: &ConstraintSystem, keep: &[S]) -> Result<ConstraintSystem, ProjectionError> {
    let keep_idx: Vec<usize> = keep
        .iter()
        .map(|k| c.var_index(k.as_ref()).ok_or_else(|| ProjectionError::UnknownVariable(k.as_ref().into())))
        .collect::<Result<_, _>>()?;
    let out_vars: Vec<String> = keep.iter().map(|k| String::from(k.as_ref())).collect();
    if is_empty(c) {
        return Ok(ConstraintSystem::infeasible(out_vars));
    }
    let n = c.dim();
    let mut kept = vec![false; n];
    for &j in &keep_idx {
        kept[j] = true;
    }
    let rows: Vec<LinConstraint> = match clean(c.rows().iter().cloned()) {
        Cleaned::Empty => return Ok(ConstraintSystem::infeasible(out_vars)),
        Cleaned::Rows(r) => r,
    };

    // Union-find over dropped variables that share a row.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for r in &rows {
        let mut first: Option<usize> = None;
        for j in (0..n).filter(|&j| !kept[j] && !r.coeffs[j].is_zero()) {
            match first {
                None => first = Some(j),
                Some(f) => {
                    let (a, b) = (find(&mut parent, f), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<LinConstraint>)> = BTreeMap::new();
    let mut result: Vec<LinConstraint> = Vec::new();
    for j in (0..n).filter(|&j| !kept[j]) {
        let g = find(&mut parent, j);
        groups.entry(g).or_default().0.push(j);
    }
    for r in rows {
        match (0..n).find(|&j| !kept[j] && !r.coeffs[j].is_zero()) {
            None => result.push(r),
            Some(j) => {
                let g = find(&mut parent, j);
                groups.get_mut(&g).expect("group exists").1.push(r);
            }
        }
    }
    for (_, (cols, sub)) in groups {
        match project_component(c.vars(), sub, &cols) {
            None => return Ok(ConstraintSystem::infeasible(out_vars)),
            Some(r) => result.extend(r),
        }
    }
    let projected: Vec<LinConstraint> = result
        .into_iter()
        .map(|r| {
            let coeffs: QVector = keep_idx.iter().map(|&j| r.coeffs[j].clone()).collect();
            LinConstraint::new(coeffs, r.rel, r.rhs)
        })
        .collect();
    let rows = match clean(projected) {
        Cleaned::Empty => return Ok(ConstraintSystem::infeasible(out_vars)),
        Cleaned::Rows(r) => r,
    };
    let rows = rows
        .into_iter()
        .map(|r| if r.rel == Relation::Eq { r } else { r.negated() })
        .collect();
    let s = ConstraintSystem::with_rows(out_vars, rows).expect("rows match variables");
    Ok(remove_redundant(&s))
}

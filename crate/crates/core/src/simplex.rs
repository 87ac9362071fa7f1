//! Exact two-phase simplex over a dense rational tableau.
//!
//! Pivoting follows Bland's rule (lowest-index entering column, lowest-index
//! leaving basic variable on ratio ties), which rules out cycling on
//! degenerate problems.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{dot, QVector, Rational};
use crate::constraints::{ConstraintSystem, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpError {
    /// `dual` needs an objective to dualize.
    UnsupportedShape,
    /// The operation does not accept strict rows.
    StrictRow,
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::UnsupportedShape => f.write_str("problem shape not supported by this operation"),
            LpError::StrictRow => f.write_str("strict rows are not supported by this operation"),
        }
    }
}

impl core::error::Error for LpError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSign {
    NonNegative,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpRelation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: QVector,
    pub rel: LpRelation,
    pub rhs: Rational,
}

impl LpRow {
    pub fn holds_at(&self, point: &[Rational]) -> bool {
        let lhs = dot(self.coeffs.as_slice(), point);
        match self.rel {
            LpRelation::Le => lhs <= self.rhs,
            LpRelation::Eq => lhs == self.rhs,
            LpRelation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: QVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Option<Objective>,
    pub rows: Vec<LpRow>,
    pub signs: Vec<VarSign>,
}

impl LpProblem {
    /// Feasibility problem over `nvars` variables of the given sign.
    pub fn new(nvars: usize, sign: VarSign) -> Self {
        LpProblem { objective: None, rows: Vec::new(), signs: vec![sign; nvars] }
    }

    pub fn nvars(&self) -> usize {
        self.signs.len()
    }

    pub fn with_objective(mut self, sense: Sense, coeffs: QVector) -> Self {
        assert_eq!(coeffs.len(), self.nvars(), "objective length");
        self.objective = Some(Objective { sense, coeffs });
        self
    }

    pub fn add_row(&mut self, coeffs: QVector, rel: LpRelation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.nvars(), "row length");
        self.rows.push(LpRow { coeffs, rel, rhs });
    }

    /// Exact feasibility check of `point`, sign restrictions included.
    pub fn is_feasible_point(&self, point: &[Rational]) -> bool {
        point.len() == self.nvars()
            && self
                .signs
                .iter()
                .zip(point)
                .all(|(s, v)| *s == VarSign::Free || !v.is_negative())
            && self.rows.iter().all(|r| r.holds_at(point))
    }

    pub fn objective_at(&self, point: &[Rational]) -> Option<Rational> {
        self.objective
            .as_ref()
            .map(|o| dot(o.coeffs.as_slice(), point))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    /// `point` is feasible; `point + t·ray` stays feasible for all `t >= 0`
    /// and strictly improves the objective.
    Unbounded { point: QVector, ray: QVector },
    Optimal { point: QVector, value: Rational },
    /// Returned when the problem has no objective.
    FeasiblePoint { point: QVector },
}

impl LpOutcome {
    pub fn point(&self) -> Option<&QVector> {
        match self {
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded { point, .. }
            | LpOutcome::Optimal { point, .. }
            | LpOutcome::FeasiblePoint { point } => Some(point),
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

/// Where an original variable lives in a standard-form problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Direct(usize),
    /// `x = z[pos] - z[neg]`
    Split { pos: usize, neg: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    /// Equality rows over non-negative variables only.
    pub problem: LpProblem,
    pub columns: Vec<Column>,
    pub slack_count: usize,
    pub split_count: usize,
}

impl StandardForm {
    /// Values of the original variables from a standard-form vector.
    pub fn recover(&self, z: &[Rational]) -> QVector {
        self.columns
            .iter()
            .map(|c| match *c {
                Column::Direct(j) => z[j].clone(),
                Column::Split { pos, neg } => &z[pos] - &z[neg],
            })
            .collect()
    }
}

/// Free variables become differences of two non-negatives and every
/// inequality gains one slack.
pub fn to_standard_form(p: &LpProblem) -> StandardForm {
    let mut columns = Vec::with_capacity(p.nvars());
    let mut next = 0;
    let mut split_count = 0;
    for s in &p.signs {
        match s {
            VarSign::NonNegative => {
                columns.push(Column::Direct(next));
                next += 1;
            }
            VarSign::Free => {
                columns.push(Column::Split { pos: next, neg: next + 1 });
                next += 2;
                split_count += 1;
            }
        }
    }
    let slack_count = p.rows.iter().filter(|r| r.rel != LpRelation::Eq).count();
    let total = next + slack_count;
    let expand = |coeffs: &QVector| {
        let mut out = vec![Rational::zero(); total];
        for (c, col) in coeffs.iter().zip(&columns) {
            match *col {
                Column::Direct(j) => out[j] = c.clone(),
                Column::Split { pos, neg } => {
                    out[pos] = c.clone();
                    out[neg] = -c;
                }
            }
        }
        out
    };
    let mut problem = LpProblem::new(total, VarSign::NonNegative);
    let mut slack = next;
    for r in &p.rows {
        let mut coeffs = expand(&r.coeffs);
        match r.rel {
            LpRelation::Le => {
                coeffs[slack] = Rational::one();
                slack += 1;
            }
            LpRelation::Ge => {
                coeffs[slack] = Rational::from_integer(-1);
                slack += 1;
            }
            LpRelation::Eq => {}
        }
        problem.add_row(QVector::new(coeffs), LpRelation::Eq, r.rhs.clone());
    }
    if let Some(o) = &p.objective {
        problem.objective = Some(Objective { sense: o.sense, coeffs: QVector::new(expand(&o.coeffs)) });
    }
    StandardForm { problem, columns, slack_count, split_count }
}

struct Tableau {
    rows: Vec<Vec<Rational>>, // each row: ncols coefficients then rhs
    cost: Vec<Rational>,      // reduced costs, then minus the objective value
    basis: Vec<usize>,
    ncols: usize,
}

enum Step {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        if p != Rational::one() {
            let inv = p.recip().expect("pivot element is non-zero");
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot_row = core::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..=self.ncols).filter(|&k| !pivot_row[k].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[j].clone();
            if f.is_zero() {
                return;
            }
            for &k in &nz {
                let d = &f * &pivot_row[k];
                row[k] -= &d;
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[r] = pivot_row;
        self.basis[r] = j;
    }

    /// Runs Bland pivots over columns `< allowed` until optimal or unbounded.
    fn run(&mut self, allowed: usize) -> Step {
        loop {
            let entering = (0..allowed).find(|&j| self.cost[j].is_negative());
            let Some(j) = entering else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Step::Unbounded(j),
                Some((r, _)) => self.pivot(r, j),
            }
        }
    }

    fn solution(&self, width: usize) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); width];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < width {
                z[b] = self.rhs(i).clone();
            }
        }
        z
    }

    fn ray(&self, entering: usize, width: usize) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); width];
        d[entering] = Rational::one();
        for (i, &b) in self.basis.iter().enumerate() {
            if b < width {
                d[b] = -&self.rows[i][entering];
            }
        }
        d
    }
}

enum RawOutcome {
    Infeasible,
    Feasible(Vec<Rational>),
    Optimal(Vec<Rational>),
    Unbounded(Vec<Rational>, Vec<Rational>),
}

/// Minimizes `cost` (if any) subject to `A z = b`, `z >= 0`.
fn solve_standard(rows: &[LpRow], width: usize, cost: Option<&[Rational]>) -> RawOutcome {
    let m = rows.len();
    let mut data: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            let mut v: Vec<Rational> = r.coeffs.as_slice().to_vec();
            v.push(r.rhs.clone());
            if r.rhs.is_negative() {
                for x in v.iter_mut() {
                    *x = -&*x;
                }
            }
            v
        })
        .collect();

    // Reuse existing unit columns as the starting basis where possible.
    let mut basis = vec![usize::MAX; m];
    let mut used = vec![false; width];
    for j in 0..width {
        let mut hit = None;
        let mut unit = true;
        for (i, row) in data.iter().enumerate() {
            let v = &row[j];
            if v.is_zero() {
                continue;
            }
            if hit.is_none() && *v == Rational::one() {
                hit = Some(i);
            } else {
                unit = false;
                break;
            }
        }
        if let (true, Some(i)) = (unit, hit) {
            if basis[i] == usize::MAX && !used[j] {
                basis[i] = j;
                used[j] = true;
            }
        }
    }
    let art_rows: Vec<usize> = (0..m).filter(|&i| basis[i] == usize::MAX).collect();
    let ncols = width + art_rows.len();
    for row in data.iter_mut() {
        let rhs = row.pop().expect("row has rhs");
        row.resize(ncols, Rational::zero());
        row.push(rhs);
    }
    for (k, &i) in art_rows.iter().enumerate() {
        data[i][width + k] = Rational::one();
        basis[i] = width + k;
    }

    let mut phase1 = vec![Rational::zero(); ncols + 1];
    for &i in &art_rows {
        for (j, v) in data[i].iter().enumerate() {
            if j < width || j == ncols {
                phase1[j] -= v;
            }
        }
    }
    let mut t = Tableau { rows: data, cost: phase1, basis, ncols };
    if !art_rows.is_empty() {
        match t.run(ncols) {
            Step::Optimal => {}
            Step::Unbounded(_) => unreachable!("phase one is bounded below by zero"),
        }
        if !t.cost[ncols].is_zero() {
            return RawOutcome::Infeasible;
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= width {
                match (0..width).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => {
                        t.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }
    // Discard artificial columns.
    for row in t.rows.iter_mut() {
        let rhs = row.pop().expect("row has rhs");
        row.truncate(width);
        row.push(rhs);
    }
    t.ncols = width;

    let Some(cost) = cost else {
        return RawOutcome::Feasible(t.solution(width));
    };
    let mut reduced: Vec<Rational> = cost.to_vec();
    reduced.push(Rational::zero());
    for (i, &b) in t.basis.iter().enumerate() {
        let cb = cost[b].clone();
        if cb.is_zero() {
            continue;
        }
        for (k, v) in t.rows[i].iter().enumerate() {
            if !v.is_zero() {
                reduced[k] -= &(&cb * v);
            }
        }
    }
    t.cost = reduced;
    match t.run(width) {
        Step::Optimal => RawOutcome::Optimal(t.solution(width)),
        Step::Unbounded(j) => RawOutcome::Unbounded(t.solution(width), t.ray(j, width)),
    }
}

/// Exact LP resolution.
pub fn solve(p: &LpProblem) -> LpOutcome {
    let sf = to_standard_form(p);
    let width = sf.problem.nvars();
    let cost: Option<Vec<Rational>> = sf.problem.objective.as_ref().map(|o| match o.sense {
        Sense::Minimize => o.coeffs.as_slice().to_vec(),
        Sense::Maximize => o.coeffs.iter().map(|c| -c).collect(),
    });
    match solve_standard(&sf.problem.rows, width, cost.as_deref()) {
        RawOutcome::Infeasible => LpOutcome::Infeasible,
        RawOutcome::Feasible(z) => LpOutcome::FeasiblePoint { point: sf.recover(&z) },
        RawOutcome::Optimal(z) => {
            let point = sf.recover(&z);
            let value = p.objective_at(point.as_slice()).expect("objective present");
            LpOutcome::Optimal { point, value }
        }
        RawOutcome::Unbounded(z, d) => LpOutcome::Unbounded {
            point: sf.recover(&z),
            ray: sf.recover(&d),
        },
    }
}

/// LP dual in the textbook symmetric pairing.
///
/// `min cᵀx, Ax >= b, x >= 0` maps to `max bᵀy, Aᵀy <= c, y >= 0`; `<=`
/// rows of a minimization are negated first, equality rows give free dual
/// variables, and free primal variables give dual equalities. A maximization
/// is handled symmetrically, so `dual(dual(p))` has the same optimum as `p`.
pub fn dual(p: &LpProblem) -> Result<LpProblem, LpError> {
    let obj = p.objective.as_ref().ok_or(LpError::UnsupportedShape)?;
    // Canonical primal row orientation: >= for min, <= for max.
    let canonical = match obj.sense {
        Sense::Minimize => LpRelation::Ge,
        Sense::Maximize => LpRelation::Le,
    };
    let mut rows: Vec<(Vec<Rational>, Rational, VarSign)> = Vec::with_capacity(p.rows.len());
    for r in &p.rows {
        if r.rel == LpRelation::Eq {
            rows.push((r.coeffs.as_slice().to_vec(), r.rhs.clone(), VarSign::Free));
        } else if r.rel == canonical {
            rows.push((r.coeffs.as_slice().to_vec(), r.rhs.clone(), VarSign::NonNegative));
        } else {
            rows.push((r.coeffs.iter().map(|c| -c).collect(), -&r.rhs, VarSign::NonNegative));
        }
    }
    let (dual_sense, bound) = match obj.sense {
        Sense::Minimize => (Sense::Maximize, LpRelation::Le),
        Sense::Maximize => (Sense::Minimize, LpRelation::Ge),
    };
    let mut d = LpProblem {
        objective: None,
        rows: Vec::with_capacity(p.nvars()),
        signs: rows.iter().map(|r| r.2).collect(),
    };
    for (j, sign) in p.signs.iter().enumerate() {
        let coeffs: QVector = rows.iter().map(|r| r.0[j].clone()).collect();
        let rel = match sign {
            VarSign::NonNegative => bound,
            VarSign::Free => LpRelation::Eq,
        };
        d.add_row(coeffs, rel, obj.coeffs[j].clone());
    }
    let b: QVector = rows.iter().map(|r| r.1.clone()).collect();
    Ok(d.with_objective(dual_sense, b))
}

fn system_rows(c: &ConstraintSystem, extra: usize) -> (LpProblem, Vec<usize>) {
    let mut p = LpProblem::new(c.dim() + extra, VarSign::Free);
    let mut strict = Vec::new();
    for r in c.rows() {
        let mut coeffs = r.coeffs.as_slice().to_vec();
        coeffs.resize(c.dim() + extra, Rational::zero());
        let rel = match r.rel {
            Relation::Le | Relation::Lt => LpRelation::Le,
            Relation::Ge | Relation::Gt => LpRelation::Ge,
            Relation::Eq => LpRelation::Eq,
        };
        if r.rel.is_strict() {
            strict.push(p.rows.len());
        }
        p.add_row(QVector::new(coeffs), rel, r.rhs.clone());
    }
    (p, strict)
}

/// A point meeting every row of `c`, strict rows strictly.
///
/// Each strict row `eᵀz < f` becomes `eᵀz + s <= f` for one shared slack
/// `s ∈ [0, 1]` that is maximized; the rows are strictly satisfiable iff the
/// optimum is positive.
pub fn strict_feasible_point(c: &ConstraintSystem) -> Option<QVector> {
    if !c.has_strict() {
        return feasible_point(c);
    }
    let n = c.dim();
    let (mut p, strict) = system_rows(c, 1);
    for &i in &strict {
        let row = &mut p.rows[i];
        let mut coeffs = row.coeffs.as_slice().to_vec();
        coeffs[n] = match row.rel {
            LpRelation::Le => Rational::one(),
            _ => Rational::from_integer(-1),
        };
        row.coeffs = QVector::new(coeffs);
    }
    p.signs[n] = VarSign::NonNegative;
    let mut cap = vec![Rational::zero(); n + 1];
    cap[n] = Rational::one();
    p.add_row(QVector::new(cap.clone()), LpRelation::Le, Rational::one());
    let p = p.with_objective(Sense::Maximize, QVector::new(cap));
    match solve(&p) {
        LpOutcome::Optimal { point, value } if value.is_positive() => {
            let mut v = point.into_vec();
            v.truncate(n);
            Some(QVector::new(v))
        }
        _ => None,
    }
}

/// A point meeting every row of `c` (strict rows handled exactly).
pub fn feasible_point(c: &ConstraintSystem) -> Option<QVector> {
    if c.has_strict() {
        return strict_feasible_point(c);
    }
    let (p, _) = system_rows(c, 0);
    solve(&p).point().cloned()
}

/// Optimizes `objective · z` over a closed system with all variables free.
pub fn optimize(c: &ConstraintSystem, sense: Sense, objective: &QVector) -> Result<LpOutcome, LpError> {
    if c.has_strict() {
        return Err(LpError::StrictRow);
    }
    let (p, _) = system_rows(c, 0);
    Ok(solve(&p.with_objective(sense, objective.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::LinConstraint;
    use alloc::string::ToString;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn one_var(sign: VarSign, rows: &[(LpRelation, i64)]) -> LpProblem {
        let mut p = LpProblem::new(1, sign);
        for (rel, rhs) in rows {
            p.add_row(QVector::from_ints(&[1]), *rel, r(*rhs));
        }
        p
    }

    #[test]
    fn minimum_at_lower_bound() {
        let p = one_var(VarSign::Free, &[(LpRelation::Ge, 3)])
            .with_objective(Sense::Minimize, QVector::from_ints(&[1]));
        assert_eq!(
            solve(&p),
            LpOutcome::Optimal { point: QVector::from_ints(&[3]), value: r(3) }
        );
    }

    #[test]
    fn unbounded_with_certificate() {
        let p = one_var(VarSign::Free, &[(LpRelation::Ge, 0)])
            .with_objective(Sense::Maximize, QVector::from_ints(&[1]));
        match solve(&p) {
            LpOutcome::Unbounded { point, ray } => {
                assert!(p.is_feasible_point(point.as_slice()));
                assert!(ray[0].is_positive());
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let p = one_var(VarSign::Free, &[(LpRelation::Le, 0), (LpRelation::Ge, 1)]);
        assert_eq!(solve(&p), LpOutcome::Infeasible);
    }

    #[test]
    fn standard_form_of_free_variable_problem() {
        let p = one_var(VarSign::Free, &[(LpRelation::Le, 5)])
            .with_objective(Sense::Maximize, QVector::from_ints(&[1]));
        let sf = to_standard_form(&p);
        assert_eq!(sf.problem.nvars(), 3);
        assert_eq!((sf.split_count, sf.slack_count), (1, 1));
        assert_eq!(sf.columns, vec![Column::Split { pos: 0, neg: 1 }]);
        assert_eq!(sf.problem.rows[0].coeffs, QVector::from_ints(&[1, -1, 1]));
        assert!(sf.problem.rows.iter().all(|r| r.rel == LpRelation::Eq));
        assert!(sf.problem.signs.iter().all(|s| *s == VarSign::NonNegative));
        assert_eq!(sf.recover(&[r(4), r(1), r(2)]), QVector::from_ints(&[3]));
    }

    #[test]
    fn standard_form_fixpoint() {
        let mut p = LpProblem::new(2, VarSign::NonNegative);
        p.add_row(QVector::from_ints(&[1, 2]), LpRelation::Eq, r(4));
        let sf = to_standard_form(&p);
        assert_eq!(sf.problem, p);
        assert_eq!(sf.columns, vec![Column::Direct(0), Column::Direct(1)]);
    }

    #[test]
    fn dual_of_one_variable_min() {
        let p = one_var(VarSign::NonNegative, &[(LpRelation::Ge, 1)])
            .with_objective(Sense::Minimize, QVector::from_ints(&[1]));
        let d = dual(&p).unwrap();
        let mut expected = one_var(VarSign::NonNegative, &[(LpRelation::Le, 1)]);
        expected = expected.with_objective(Sense::Maximize, QVector::from_ints(&[1]));
        assert_eq!(d, expected);
        assert_eq!(dual(&one_var(VarSign::Free, &[])), Err(LpError::UnsupportedShape));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's classic cycling example for the largest-coefficient rule.
        let q = |n: i64, d: i64| Rational::new(n, d).unwrap();
        let mut p = LpProblem::new(4, VarSign::NonNegative);
        p.add_row(QVector::new(vec![q(1, 4), r(-60), q(-1, 25), r(9)]), LpRelation::Le, r(0));
        p.add_row(QVector::new(vec![q(1, 2), r(-90), q(-1, 50), r(3)]), LpRelation::Le, r(0));
        p.add_row(QVector::from_ints(&[0, 0, 1, 0]), LpRelation::Le, r(1));
        let p = p.with_objective(
            Sense::Minimize,
            QVector::new(vec![q(-3, 4), r(150), q(-1, 50), r(6)]),
        );
        match solve(&p) {
            LpOutcome::Optimal { point, value } => {
                assert!(p.is_feasible_point(point.as_slice()));
                assert_eq!(value, q(-1, 20));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut p = LpProblem::new(2, VarSign::NonNegative);
        p.add_row(QVector::from_ints(&[1, 1]), LpRelation::Eq, r(2));
        p.add_row(QVector::from_ints(&[2, 2]), LpRelation::Eq, r(4));
        let p = p.with_objective(Sense::Maximize, QVector::from_ints(&[1, 0]));
        assert_eq!(
            solve(&p),
            LpOutcome::Optimal { point: QVector::from_ints(&[2, 0]), value: r(2) }
        );
    }

    fn sys1(rows: &[(Relation, i64)]) -> ConstraintSystem {
        ConstraintSystem::with_rows(
            vec!["x".to_string()],
            rows.iter().map(|(rel, b)| LinConstraint::from_ints(&[1], *rel, *b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn strict_point_of_open_half_line() {
        let p = strict_feasible_point(&sys1(&[(Relation::Lt, 0)])).unwrap();
        assert!(p[0].is_negative());
        assert_eq!(p, QVector::from_ints(&[-1]));
    }

    #[test]
    fn strict_contradiction_has_no_point() {
        assert!(strict_feasible_point(&sys1(&[(Relation::Lt, 0), (Relation::Gt, 0)])).is_none());
        assert!(strict_feasible_point(&sys1(&[(Relation::Lt, 0), (Relation::Ge, 0)])).is_none());
        assert!(strict_feasible_point(&sys1(&[(Relation::Le, 0), (Relation::Ge, 0)])).is_some());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        // Bounded-feasible instances of `min cᵀx, Ax >= b, x >= 0`: b is chosen
        // so that a known point is feasible and c >= 0 bounds the objective.
        fn bounded_feasible() -> impl Strategy<Value = LpProblem> {
            (1usize..5, 1usize..6).prop_flat_map(|(n, m)| {
                (
                    proptest::collection::vec(proptest::collection::vec(-5i64..=5, n), m),
                    proptest::collection::vec(0i64..4, n),
                    proptest::collection::vec(0i64..4, m),
                    proptest::collection::vec(0i64..6, n),
                )
                    .prop_map(move |(a, x0, slack, c)| {
                        let mut p = LpProblem::new(n, VarSign::NonNegative);
                        for (row, s) in a.iter().zip(&slack) {
                            let ax: i64 = row.iter().zip(&x0).map(|(u, v)| u * v).sum();
                            p.add_row(QVector::from_ints(row), LpRelation::Ge, r(ax - s));
                        }
                        p.with_objective(Sense::Minimize, QVector::from_ints(&c))
                    })
            })
        }

        fn value(o: &LpOutcome) -> Option<Rational> {
            match o {
                LpOutcome::Optimal { value, .. } => Some(value.clone()),
                _ => None,
            }
        }

        proptest! {
            #[test]
            fn strong_duality(p in bounded_feasible()) {
                let primal = solve(&p);
                let d = dual(&p).unwrap();
                let dual_out = solve(&d);
                prop_assert!(p.is_feasible_point(primal.point().unwrap().as_slice()));
                prop_assert!(d.is_feasible_point(dual_out.point().unwrap().as_slice()));
                prop_assert_eq!(value(&primal).unwrap(), value(&dual_out).unwrap());
                let dd = dual(&d).unwrap();
                prop_assert_eq!(value(&solve(&dd)), value(&primal));
            }

            #[test]
            fn unbounded_rays_are_certificates(p in bounded_feasible()) {
                // Flip the sense: the ray, if any, must keep every row and improve.
                let mut q = p.clone();
                q.objective.as_mut().unwrap().sense = Sense::Maximize;
                if let LpOutcome::Unbounded { point, ray } = solve(&q) {
                    prop_assert!(q.is_feasible_point(point.as_slice()));
                    let moved: Vec<Rational> =
                        point.iter().zip(ray.iter()).map(|(a, b)| a + b * r(7)).collect();
                    prop_assert!(q.is_feasible_point(&moved));
                    prop_assert!(q.objective_at(ray.as_slice()).unwrap().is_positive());
                }
            }
        }
    }
}

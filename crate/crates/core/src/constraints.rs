//! Linear constraint systems, loop models, and their matrix forms.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{dot, ArithError, QMatrix, QVector, Rational};
use crate::simplex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    /// A strict relation appeared where only `<=`, `=`, `>=` are allowed.
    StrictRelation { row: usize },
    /// A guard row mentions a primed variable.
    PrimedInGuard { row: usize },
    DimensionMismatch { expected: usize, found: usize },
    DuplicateVariable(String),
    EmptyVarSpace,
    NotGuarded,
}

impl fmt::Display for ConstraintError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintError::StrictRelation { row } => {
                write!(f, "row {row}: strict inequalities are not accepted here")
            }
            ConstraintError::PrimedInGuard { row } => {
                write!(f, "guard row {row} mentions a primed variable")
            }
            ConstraintError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            ConstraintError::DuplicateVariable(v) => write!(f, "variable `{v}` declared twice"),
            ConstraintError::EmptyVarSpace => f.write_str("at least one variable is required"),
            ConstraintError::NotGuarded => f.write_str("loop model has no guard/update split"),
        }
    }
}

impl core::error::Error for ConstraintError {}

impl From<ArithError> for ConstraintError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::DimensionMismatch { expected, found } => {
                ConstraintError::DimensionMismatch { expected, found }
            }
            // Only dimension checks reach this conversion.
            _ => unreachable!("unexpected arithmetic error: {e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Lt,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }

    /// Relation obtained by multiplying both sides by -1.
    pub fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Lt => Relation::Gt,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
            Relation::Gt => Relation::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `coeffsᵀ z  rel  rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinConstraint {
    pub coeffs: QVector,
    pub rel: Relation,
    pub rhs: Rational,
}

impl LinConstraint {
    pub fn new(coeffs: QVector, rel: Relation, rhs: Rational) -> Self {
        LinConstraint { coeffs, rel, rhs }
    }

    pub fn from_ints(coeffs: &[i64], rel: Relation, rhs: i64) -> Self {
        LinConstraint::new(QVector::from_ints(coeffs), rel, Rational::from_integer(rhs))
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn lhs_at(&self, point: &[Rational]) -> Rational {
        dot(self.coeffs.as_slice(), point)
    }

    /// Exact check of the constraint at `point` (length must equal `dim`).
    pub fn holds_at(&self, point: &[Rational]) -> bool {
        debug_assert_eq!(point.len(), self.dim());
        self.rel.holds(&self.lhs_at(point), &self.rhs)
    }

    /// The same half-space written with both sides negated.
    pub fn negated(&self) -> LinConstraint {
        LinConstraint::new(
            self.coeffs.scale(&Rational::from_integer(-1)),
            self.rel.flipped(),
            -&self.rhs,
        )
    }

    /// Rewrites to `<=`/`<`/`=` orientation without changing the solution set.
    pub fn to_upper_form(&self) -> LinConstraint {
        match self.rel {
            Relation::Ge | Relation::Gt => self.negated(),
            _ => self.clone(),
        }
    }

    /// Set complement of a non-equality constraint, as a single constraint.
    pub fn complement(&self) -> Option<LinConstraint> {
        let rel = match self.rel {
            Relation::Le => Relation::Gt,
            Relation::Lt => Relation::Ge,
            Relation::Ge => Relation::Lt,
            Relation::Gt => Relation::Le,
            Relation::Eq => return None,
        };
        Some(LinConstraint::new(self.coeffs.clone(), rel, self.rhs.clone()))
    }

    /// Same constraint with strictness dropped.
    pub fn relaxed(&self) -> LinConstraint {
        let rel = match self.rel {
            Relation::Lt => Relation::Le,
            Relation::Gt => Relation::Ge,
            r => r,
        };
        LinConstraint::new(self.coeffs.clone(), rel, self.rhs.clone())
    }

    /// Renders the constraint using `names` for the columns, e.g. `mu1 - mu2 >= 1`.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (c, name) in self.coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mag != Rational::one() {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        format!("{out} {} {}", self.rel, self.rhs)
    }
}

/// Conjunction of linear constraints over an ordered list of named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSystem {
    vars: Vec<String>,
    rows: Vec<LinConstraint>,
}

impl ConstraintSystem {
    pub fn new(vars: Vec<String>) -> Self {
        ConstraintSystem { vars, rows: Vec::new() }
    }

    pub fn with_rows(vars: Vec<String>, rows: Vec<LinConstraint>) -> Result<Self, ConstraintError> {
        let mut s = ConstraintSystem::new(vars);
        for r in rows {
            s.push(r)?;
        }
        Ok(s)
    }

    /// The empty set over `vars`, written as the single ground row `0 <= -1`.
    pub fn infeasible(vars: Vec<String>) -> Self {
        let n = vars.len();
        ConstraintSystem {
            vars,
            rows: alloc::vec![LinConstraint::new(
                QVector::zeros(n),
                Relation::Le,
                Rational::from_integer(-1)
            )],
        }
    }

    pub fn push(&mut self, row: LinConstraint) -> Result<(), ConstraintError> {
        if row.dim() != self.dim() {
            return Err(ConstraintError::DimensionMismatch {
                expected: self.dim(),
                found: row.dim(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn rows(&self) -> &[LinConstraint] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn has_strict(&self) -> bool {
        self.rows.iter().any(|r| r.rel.is_strict())
    }

    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.dim() && self.rows.iter().all(|r| r.holds_at(point))
    }

    /// Conjunction of two systems over the same variables.
    pub fn conjoin(&self, other: &ConstraintSystem) -> Result<ConstraintSystem, ConstraintError> {
        if self.vars != other.vars {
            return Err(ConstraintError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(ConstraintSystem { vars: self.vars.clone(), rows })
    }

    /// Same rows with strictness dropped (the topological closure when non-empty).
    pub fn relaxed(&self) -> ConstraintSystem {
        ConstraintSystem {
            vars: self.vars.clone(),
            rows: self.rows.iter().map(LinConstraint::relaxed).collect(),
        }
    }

    /// Re-expresses the system over `vars`, a superset of the current variables.
    pub fn embed(&self, vars: &[String]) -> Option<ConstraintSystem> {
        let map: Option<Vec<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let map = map?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut c = alloc::vec![Rational::zero(); vars.len()];
                for (k, &j) in map.iter().enumerate() {
                    c[j] = r.coeffs[k].clone();
                }
                LinConstraint::new(QVector::new(c), r.rel, r.rhs.clone())
            })
            .collect();
        Some(ConstraintSystem { vars: vars.to_vec(), rows })
    }

    pub fn into_rows(self) -> Vec<LinConstraint> {
        self.rows
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&r.render(&self.vars))?;
        }
        Ok(())
    }
}

/// Ordered program variables `x1..xn`; each has a primed twin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSpace {
    names: Vec<String>,
}

impl VarSpace {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, ConstraintError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(ConstraintError::EmptyVarSpace);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ConstraintError::DuplicateVariable(n.clone()));
            }
        }
        Ok(VarSpace { names })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Column index of `name` (primed columns follow all unprimed ones).
    pub fn column(&self, name: &str, primed: bool) -> Option<usize> {
        let i = self.names.iter().position(|v| v == name)?;
        Some(if primed { self.n() + i } else { i })
    }

    /// Column names `x1..xn, x1'..xn'`.
    pub fn columns(&self) -> Vec<String> {
        let mut cols = self.names.clone();
        cols.extend(self.names.iter().map(|n| format!("{n}'")));
        cols
    }

    pub fn empty_system(&self) -> ConstraintSystem {
        ConstraintSystem::new(self.columns())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoopShape {
    Single(ConstraintSystem),
    Guarded {
        guard: ConstraintSystem,
        update: ConstraintSystem,
    },
}

/// A loop as a transition relation over `(x, x')`, either monolithic or
/// split into a guard over `x` and an update over `(x, x')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopModel {
    space: VarSpace,
    shape: LoopShape,
}

impl LoopModel {
    pub fn single(space: VarSpace, c: ConstraintSystem) -> Result<Self, ConstraintError> {
        check_columns(&space, &c)?;
        check_non_strict(&c)?;
        Ok(LoopModel { space, shape: LoopShape::Single(c) })
    }

    pub fn guarded(
        space: VarSpace,
        guard: ConstraintSystem,
        update: ConstraintSystem,
    ) -> Result<Self, ConstraintError> {
        check_columns(&space, &guard)?;
        check_columns(&space, &update)?;
        check_non_strict(&guard)?;
        check_non_strict(&update)?;
        let n = space.n();
        for (i, r) in guard.rows().iter().enumerate() {
            if r.coeffs.iter().skip(n).any(|c| !c.is_zero()) {
                return Err(ConstraintError::PrimedInGuard { row: i });
            }
        }
        Ok(LoopModel { space, shape: LoopShape::Guarded { guard, update } })
    }

    pub fn space(&self) -> &VarSpace {
        &self.space
    }

    pub fn shape(&self) -> &LoopShape {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn is_guarded(&self) -> bool {
        matches!(self.shape, LoopShape::Guarded { .. })
    }

    /// The single `(x, x')` system; guard rows first for guarded models.
    pub fn merged(&self) -> ConstraintSystem {
        match &self.shape {
            LoopShape::Single(c) => c.clone(),
            LoopShape::Guarded { guard, update } => guard
                .conjoin(update)
                .expect("guard and update share the loop columns"),
        }
    }
}

fn check_columns(space: &VarSpace, c: &ConstraintSystem) -> Result<(), ConstraintError> {
    if c.dim() != 2 * space.n() {
        return Err(ConstraintError::DimensionMismatch {
            expected: 2 * space.n(),
            found: c.dim(),
        });
    }
    Ok(())
}

fn check_non_strict(c: &ConstraintSystem) -> Result<(), ConstraintError> {
    match c.rows().iter().position(|r| r.rel.is_strict()) {
        Some(row) => Err(ConstraintError::StrictRelation { row }),
        None => Ok(()),
    }
}

/// Concatenates guard rows (lifted with zero primed coefficients) and update rows.
pub fn merge_guarded(l: &LoopModel) -> Result<ConstraintSystem, ConstraintError> {
    match l.shape() {
        LoopShape::Guarded { .. } => Ok(l.merged()),
        LoopShape::Single(_) => Err(ConstraintError::NotGuarded),
    }
}

/// `(A A') ⟨x, x'⟩ <= b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeqMatrixForm {
    pub a: QMatrix,
    pub a_primed: QMatrix,
    pub b: QVector,
}

impl LeqMatrixForm {
    pub fn nrows(&self) -> usize {
        self.b.len()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<LeqMatrixForm, ArithError> {
        Ok(LeqMatrixForm {
            a: self.a.permute_rows(perm)?,
            a_primed: self.a_primed.permute_rows(perm)?,
            b: perm.iter().map(|&p| self.b[p].clone()).collect(),
        })
    }

    /// Back to a constraint system over `space`'s columns.
    pub fn to_system(&self, space: &VarSpace) -> ConstraintSystem {
        let rows = (0..self.nrows())
            .map(|i| {
                let mut c = self.a.row(i).to_vec();
                c.extend_from_slice(self.a_primed.row(i));
                LinConstraint::new(QVector::new(c), Relation::Le, self.b[i].clone())
            })
            .collect();
        ConstraintSystem::with_rows(space.columns(), rows).expect("matrix columns match space")
    }
}

/// `A_c ⟨x, x'⟩ >= b_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeqMatrixForm {
    pub a_c: QMatrix,
    pub b_c: QVector,
}

impl GeqMatrixForm {
    pub fn nrows(&self) -> usize {
        self.b_c.len()
    }
}

// Expands into (coeffs, rhs) rows oriented as `<=` (upper) or `>=`, equalities split in two.
fn oriented_rows(
    c: &ConstraintSystem,
    upper: bool,
) -> Result<Vec<(Vec<Rational>, Rational)>, ConstraintError> {
    let mut out = Vec::with_capacity(c.len());
    let neg = |r: &LinConstraint| {
        (
            r.coeffs.iter().map(|v| -v).collect::<Vec<_>>(),
            -&r.rhs,
        )
    };
    let same = |r: &LinConstraint| (r.coeffs.as_slice().to_vec(), r.rhs.clone());
    for (i, r) in c.rows().iter().enumerate() {
        match (r.rel, upper) {
            (Relation::Lt | Relation::Gt, _) => {
                return Err(ConstraintError::StrictRelation { row: i })
            }
            (Relation::Le, true) | (Relation::Ge, false) => out.push(same(r)),
            (Relation::Ge, true) | (Relation::Le, false) => out.push(neg(r)),
            (Relation::Eq, _) => {
                out.push(same(r));
                out.push(neg(r));
            }
        }
    }
    Ok(out)
}

/// Splits equalities (the `<=` copy first) and negates `>=` rows.
pub fn to_leq_matrix(c: &ConstraintSystem) -> Result<LeqMatrixForm, ConstraintError> {
    if !c.dim().is_multiple_of(2) {
        return Err(ConstraintError::DimensionMismatch { expected: c.dim() + 1, found: c.dim() });
    }
    let n = c.dim() / 2;
    let rows = oriented_rows(c, true)?;
    let mut a = QMatrix::zeros(rows.len(), n);
    let mut a_primed = QMatrix::zeros(rows.len(), n);
    let mut b = Vec::with_capacity(rows.len());
    for (i, (coeffs, rhs)) in rows.into_iter().enumerate() {
        for (j, v) in coeffs.into_iter().enumerate() {
            if j < n {
                a.set(i, j, v);
            } else {
                a_primed.set(i, j - n, v);
            }
        }
        b.push(rhs);
    }
    Ok(LeqMatrixForm { a, a_primed, b: QVector::new(b) })
}

/// Splits equalities (the `>=` copy first) and negates `<=` rows.
pub fn to_geq_matrix(c: &ConstraintSystem) -> Result<GeqMatrixForm, ConstraintError> {
    let rows = oriented_rows(c, false)?;
    let m = rows.len();
    let mut b = Vec::with_capacity(m);
    let mut mat = Vec::with_capacity(m);
    for (coeffs, rhs) in rows {
        mat.push(coeffs);
        b.push(rhs);
    }
    Ok(GeqMatrixForm {
        a_c: QMatrix::from_rows(c.dim(), mat)?,
        b_c: QVector::new(b),
    })
}

/// Whether some rational point satisfies every row (strict rows included).
pub fn is_satisfiable(c: &ConstraintSystem) -> bool {
    simplex::feasible_point(c).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sys(vars: &[&str], rows: &[(&[i64], Relation, i64)]) -> ConstraintSystem {
        ConstraintSystem::with_rows(
            vars.iter().map(|s| s.to_string()).collect(),
            rows.iter()
                .map(|(c, r, b)| LinConstraint::from_ints(c, *r, *b))
                .collect(),
        )
        .unwrap()
    }

    fn ints(m: &QMatrix) -> Vec<Vec<i64>> {
        (0..m.nrows())
            .map(|i| m.row(i).iter().map(|v| v.to_string().parse().unwrap()).collect())
            .collect()
    }

    #[test]
    fn countdown_leq_form() {
        use Relation::*;
        // x >= 0, x' - x = -1
        let c = sys(&["x", "x'"], &[(&[1, 0], Ge, 0), (&[-1, 1], Eq, -1)]);
        let m = to_leq_matrix(&c).unwrap();
        assert_eq!(ints(&m.a), vec![vec![-1], vec![-1], vec![1]]);
        assert_eq!(ints(&m.a_primed), vec![vec![0], vec![1], vec![-1]]);
        assert_eq!(m.b, QVector::from_ints(&[0, -1, 1]));
    }

    #[test]
    fn empty_system_gives_zero_rows() {
        let c = sys(&["x", "x'"], &[]);
        let m = to_leq_matrix(&c).unwrap();
        assert_eq!((m.a.nrows(), m.a_primed.nrows(), m.b.len()), (0, 0, 0));
        assert_eq!(to_geq_matrix(&c).unwrap().nrows(), 0);
    }

    #[test]
    fn geq_form_of_simple_rows() {
        use Relation::*;
        let g = to_geq_matrix(&sys(&["x", "x'"], &[(&[1, 0], Ge, 0)])).unwrap();
        assert_eq!(ints(&g.a_c), vec![vec![1, 0]]);
        assert_eq!(g.b_c, QVector::from_ints(&[0]));

        let g = to_geq_matrix(&sys(&["x", "x'"], &[(&[1, 0], Eq, 2)])).unwrap();
        assert_eq!(ints(&g.a_c), vec![vec![1, 0], vec![-1, 0]]);
        assert_eq!(g.b_c, QVector::from_ints(&[2, -2]));
    }

    #[test]
    fn strict_rows_are_rejected_by_matrix_forms() {
        let c = sys(&["x", "x'"], &[(&[1, 0], Relation::Lt, 1)]);
        assert_eq!(to_leq_matrix(&c), Err(ConstraintError::StrictRelation { row: 0 }));
        assert_eq!(to_geq_matrix(&c), Err(ConstraintError::StrictRelation { row: 0 }));
    }

    #[test]
    fn loop_model_validation() {
        let space = VarSpace::new(["x"]).unwrap();
        let guard = sys(&["x", "x'"], &[(&[0, 1], Relation::Ge, 2)]);
        let update = sys(&["x", "x'"], &[]);
        assert_eq!(
            LoopModel::guarded(space.clone(), guard, update.clone()),
            Err(ConstraintError::PrimedInGuard { row: 0 })
        );
        let strict = sys(&["x", "x'"], &[(&[1, 0], Relation::Lt, 1)]);
        assert_eq!(
            LoopModel::single(space.clone(), strict),
            Err(ConstraintError::StrictRelation { row: 0 })
        );
        assert!(VarSpace::new(["x", "x"]).is_err());
        assert!(VarSpace::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn merge_concatenates_guard_then_update() {
        use Relation::*;
        let space = VarSpace::new(["x"]).unwrap();
        let guard = sys(&["x", "x'"], &[(&[1, 0], Ge, 2)]);
        let update = sys(&["x", "x'"], &[(&[-1, 1], Le, -1)]);
        let l = LoopModel::guarded(space.clone(), guard.clone(), update.clone()).unwrap();
        let merged = merge_guarded(&l).unwrap();
        assert_eq!(merged.rows(), &[guard.rows()[0].clone(), update.rows()[0].clone()]);

        let no_update = LoopModel::guarded(space.clone(), guard.clone(), space.empty_system()).unwrap();
        assert_eq!(merge_guarded(&no_update).unwrap(), guard);

        let single = LoopModel::single(space, update).unwrap();
        assert_eq!(merge_guarded(&single), Err(ConstraintError::NotGuarded));
    }

    #[test]
    fn satisfiability() {
        use Relation::*;
        assert!(!is_satisfiable(&sys(&["x"], &[(&[1], Ge, 1), (&[1], Le, 0)])));
        assert!(is_satisfiable(&sys(&["x"], &[])));
        assert!(!is_satisfiable(&sys(&["x"], &[(&[1], Lt, 0), (&[1], Gt, 0)])));
    }

    #[test]
    fn render_uses_names() {
        let r = LinConstraint::from_ints(&[0, 1, -2], Relation::Ge, -1);
        let names: Vec<String> = ["mu0", "mu1", "mu2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(r.render(&names), "mu1 - 2*mu2 >= -1");
        let ground = LinConstraint::from_ints(&[0, 0, 0], Relation::Le, -1);
        assert_eq!(ground.render(&names), "0 <= -1");
    }
}

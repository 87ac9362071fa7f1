//! Ranking function synthesis in the style of Podelski and Rybalchenko:
//! two multiplier vectors over the rows of `(A A') ⟨x, x'⟩ <= b`, and the
//! variant that keeps guard and update rows apart.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{dot, QMatrix, QVector, Rational};
use crate::constraints::{
    is_satisfiable, to_leq_matrix, ConstraintError, ConstraintSystem, LeqMatrixForm, LinConstraint,
    LoopModel, LoopShape, Relation,
};
use crate::ms::{param_names, AnalysisError, RankingFunction, RankingSpace, SpaceKind, Verdict};
use crate::projection::{includes, project};
use crate::simplex::{feasible_point, strict_feasible_point, LpProblem, LpRelation, Sense, VarSign};

/// Multipliers `λ₁, λ₂ >= 0` with `λ₁ᵀA' = 0`, `(λ₁ - λ₂)ᵀA = 0`,
/// `λ₂ᵀ(A + A') = 0` and `λ₂ᵀb < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrWitness {
    pub lambda1: QVector,
    pub lambda2: QVector,
}

impl PrWitness {
    /// Exact check of every defining condition against `m`.
    pub fn is_valid_for(&self, m: &LeqMatrixForm) -> bool {
        let rows = m.nrows();
        if self.lambda1.len() != rows || self.lambda2.len() != rows {
            return false;
        }
        if self.lambda1.iter().chain(self.lambda2.iter()).any(Rational::is_negative) {
            return false;
        }
        let vm = |v: &QVector, a: &QMatrix| a.vec_mat(v).expect("lengths checked");
        let l1a = vm(&self.lambda1, &m.a);
        let l2a = vm(&self.lambda2, &m.a);
        let l2ap = vm(&self.lambda2, &m.a_primed);
        vm(&self.lambda1, &m.a_primed).is_zero()
            && l1a == l2a
            && l2a.add(&l2ap).expect("same length").is_zero()
            && dot(self.lambda2.as_slice(), m.b.as_slice()).is_negative()
    }

    pub fn scaled(&self, k: &Rational) -> PrWitness {
        PrWitness { lambda1: self.lambda1.scale(k), lambda2: self.lambda2.scale(k) }
    }
}

/// Multipliers of the split form: `v₁, v₂` over guard rows, `v₃` over update rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrAltWitness {
    pub v1: QVector,
    pub v2: QVector,
    pub v3: QVector,
}

/// Guard rows `A_B x <= b_B` and update rows `A_C x + A'_C x' <= b_C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMatrixForm {
    pub a_b: QMatrix,
    pub b_b: QVector,
    pub a_c: QMatrix,
    pub a_c_primed: QMatrix,
    pub b_c: QVector,
}

impl SplitMatrixForm {
    pub fn n(&self) -> usize {
        self.a_c.ncols()
    }

    pub fn guard_rows(&self) -> usize {
        self.b_b.len()
    }

    pub fn update_rows(&self) -> usize {
        self.b_c.len()
    }
}

pub fn to_split_matrix(l: &LoopModel) -> Result<SplitMatrixForm, ConstraintError> {
    let LoopShape::Guarded { guard, update } = l.shape() else {
        return Err(ConstraintError::NotGuarded);
    };
    let g = to_leq_matrix(guard)?;
    let u = to_leq_matrix(update)?;
    Ok(SplitMatrixForm { a_b: g.a, b_b: g.b, a_c: u.a, a_c_primed: u.a_primed, b_c: u.b })
}

impl PrAltWitness {
    pub fn is_valid_for(&self, s: &SplitMatrixForm) -> bool {
        let (r, k) = (s.guard_rows(), s.update_rows());
        if self.v1.len() != r || self.v2.len() != r || self.v3.len() != k {
            return false;
        }
        if self.v1.iter().chain(self.v2.iter()).chain(self.v3.iter()).any(Rational::is_negative) {
            return false;
        }
        let vm = |v: &QVector, a: &QMatrix| a.vec_mat(v).expect("lengths checked");
        let diff = self.v1.sub(&self.v2).expect("same length");
        let a = vm(&diff, &s.a_b).sub(&vm(&self.v3, &s.a_c)).expect("n columns");
        let sum = s.a_c.add(&s.a_c_primed).expect("same shape");
        let b = vm(&self.v2, &s.a_b).add(&vm(&self.v3, &sum)).expect("n columns");
        let rhs = &dot(self.v2.as_slice(), s.b_b.as_slice()) + &dot(self.v3.as_slice(), s.b_c.as_slice());
        a.is_zero() && b.is_zero() && rhs.is_negative()
    }

    /// `λ₁ = ⟨v₁, 0⟩`, `λ₂ = ⟨v₂, v₃⟩` over guard rows followed by update rows.
    pub fn reconstruct_lambda(&self) -> PrWitness {
        let zeros = QVector::zeros(self.v3.len());
        PrWitness { lambda1: self.v1.concat(&zeros), lambda2: self.v2.concat(&self.v3) }
    }
}

fn lambda_names(m: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=m).map(|i| format!("l1_{i}")).collect();
    v.extend((1..=m).map(|i| format!("l2_{i}")));
    v
}

fn ge_zero(dim: usize, j: usize) -> LinConstraint {
    let mut e = vec![Rational::zero(); dim];
    e[j] = Rational::one();
    LinConstraint::new(QVector::new(e), Relation::Ge, Rational::zero())
}

/// The multiplier rows over a column layout of `dim` entries, with `λ₁` at
/// `l1..l1+m` and `λ₂` at `l2..l2+m`.
fn pr_rows(mf: &LeqMatrixForm, dim: usize, l1: usize, l2: usize) -> Vec<LinConstraint> {
    let (m, n) = (mf.nrows(), mf.n());
    let eq = |coeffs: Vec<Rational>| LinConstraint::new(QVector::new(coeffs), Relation::Eq, Rational::zero());
    let mut rows = Vec::new();
    for j in 0..n {
        let mut c = vec![Rational::zero(); dim];
        for i in 0..m {
            c[l1 + i] = mf.a_primed.get(i, j).clone();
        }
        rows.push(eq(c));
    }
    for j in 0..n {
        let mut c = vec![Rational::zero(); dim];
        for i in 0..m {
            c[l1 + i] = mf.a.get(i, j).clone();
            c[l2 + i] = -mf.a.get(i, j);
        }
        rows.push(eq(c));
    }
    for j in 0..n {
        let mut c = vec![Rational::zero(); dim];
        for i in 0..m {
            c[l2 + i] = mf.a.get(i, j) + mf.a_primed.get(i, j);
        }
        rows.push(eq(c));
    }
    for i in 0..m {
        rows.push(ge_zero(dim, l1 + i));
        rows.push(ge_zero(dim, l2 + i));
    }
    let mut c = vec![Rational::zero(); dim];
    for i in 0..m {
        c[l2 + i] = mf.b[i].clone();
    }
    rows.push(LinConstraint::new(QVector::new(c), Relation::Lt, Rational::zero()));
    rows
}

/// Constraints on `(λ₁, λ₂)` with the strict row `λ₂ᵀb < 0` kept strict.
pub fn build_pr_system(mf: &LeqMatrixForm) -> ConstraintSystem {
    let m = mf.nrows();
    ConstraintSystem::with_rows(lambda_names(m), pr_rows(mf, 2 * m, 0, m)).expect("rows built to size")
}

/// Same as an LP: the equalities over non-negative `(λ₁, λ₂)`, minimizing `λ₂ᵀb`.
pub fn pr_lp_problem(mf: &LeqMatrixForm) -> LpProblem {
    let m = mf.nrows();
    let mut p = LpProblem::new(2 * m, VarSign::NonNegative);
    let mut objective = None;
    for r in pr_rows(mf, 2 * m, 0, m) {
        match r.rel {
            Relation::Eq => p.add_row(r.coeffs, LpRelation::Eq, r.rhs),
            Relation::Lt => objective = Some(r.coeffs),
            _ => {}
        }
    }
    p.with_objective(Sense::Minimize, objective.expect("strict row present"))
}

/// Replaces `e < 0` by `e <= -1`, harmless since solutions scale.
fn normalize_strict(c: &ConstraintSystem) -> ConstraintSystem {
    let rows = c
        .rows()
        .iter()
        .map(|r| match r.rel {
            Relation::Lt => LinConstraint::new(r.coeffs.clone(), Relation::Le, Rational::from_integer(-1)),
            _ => r.clone(),
        })
        .collect();
    ConstraintSystem::with_rows(c.vars().to_vec(), rows).expect("same shape")
}

/// A solution of the multiplier system, if one exists.
pub fn pr_find_witness(mf: &LeqMatrixForm) -> Option<PrWitness> {
    let m = mf.nrows();
    let p = feasible_point(&normalize_strict(&build_pr_system(mf)))?;
    let w = PrWitness {
        lambda1: p.iter().take(m).cloned().collect(),
        lambda2: p.iter().skip(m).cloned().collect(),
    };
    debug_assert!(w.is_valid_for(mf));
    Some(w)
}

/// `mu = λ₂ᵀA'`, `mu0 = λ₁ᵀb`, `delta = -λ₂ᵀb`, lower bound 0.
pub fn extract_rf(w: &PrWitness, mf: &LeqMatrixForm) -> Result<RankingFunction, AnalysisError> {
    if !w.is_valid_for(mf) {
        return Err(AnalysisError::InvalidWitness);
    }
    Ok(RankingFunction {
        mu0: dot(w.lambda1.as_slice(), mf.b.as_slice()),
        mu: mf.a_primed.vec_mat(&w.lambda2).expect("lengths checked"),
        delta: -dot(w.lambda2.as_slice(), mf.b.as_slice()),
        lower_bound: Rational::zero(),
    })
}

fn leq_form(l: &LoopModel) -> LeqMatrixForm {
    to_leq_matrix(&l.merged()).expect("loop models are non-strict with paired columns")
}

pub fn pr_analyze(l: &LoopModel) -> Verdict {
    if !is_satisfiable(&l.merged()) {
        return Verdict::TriviallyTerminating;
    }
    let mf = leq_form(l);
    match pr_find_witness(&mf) {
        Some(w) => Verdict::Terminating(extract_rf(&w, &mf).expect("solver output is a witness")),
        None => Verdict::Unknown,
    }
}

/// How the constant `mu0` is tied to the bound multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offset {
    /// `mu0 >= λ₁ᵀb`: every constant that keeps the function non-negative.
    Closed,
    /// `mu0 = λ₁ᵀb` exactly.
    Exact,
}

/// The ranking function parameters `⟨mu0, mu⟩` reachable from solutions of
/// the multiplier system of `mf`.
pub fn pr_space_of_matrix(mf: &LeqMatrixForm, offset: Offset) -> ConstraintSystem {
    let (m, n) = (mf.nrows(), mf.n());
    let mut vars = lambda_names(m);
    let params = param_names(n, true);
    vars.extend(params.iter().cloned());
    let dim = 2 * m + n + 1;
    let mu0 = 2 * m;
    let mut rows = pr_rows(mf, dim, 0, m);
    let mut c = vec![Rational::zero(); dim];
    c[mu0] = Rational::one();
    for (ci, b) in c.iter_mut().zip(mf.b.iter()) {
        *ci = -b;
    }
    let rel = match offset {
        Offset::Closed => Relation::Ge,
        Offset::Exact => Relation::Eq,
    };
    rows.push(LinConstraint::new(QVector::new(c), rel, Rational::zero()));
    for j in 0..n {
        let mut c = vec![Rational::zero(); dim];
        c[mu0 + 1 + j] = Rational::one();
        for i in 0..m {
            c[m + i] = -mf.a_primed.get(i, j);
        }
        rows.push(LinConstraint::new(QVector::new(c), Relation::Eq, Rational::zero()));
    }
    let sys = ConstraintSystem::with_rows(vars, rows).expect("rows built to size");
    project(&sys, &params).expect("parameters are system variables")
}

fn require_satisfiable(l: &LoopModel) -> Result<(), AnalysisError> {
    if is_satisfiable(&l.merged()) {
        Ok(())
    } else {
        Err(AnalysisError::UnsatisfiableLoop)
    }
}

/// Every `⟨mu0, mu⟩` for which some multiplier solution certifies decrease
/// of `mu·x` and non-negativity of `mu0 + mu·x`.
pub fn pr_space(l: &LoopModel) -> Result<RankingSpace, AnalysisError> {
    require_satisfiable(l)?;
    Ok(RankingSpace { kind: SpaceKind::Pr, system: pr_space_of_matrix(&leq_form(l), Offset::Closed) })
}

/// As [`pr_space`], but `mu0` is exactly `λ₁ᵀb` rather than any larger value.
pub fn pr_space_literal(l: &LoopModel) -> Result<RankingSpace, AnalysisError> {
    require_satisfiable(l)?;
    Ok(RankingSpace { kind: SpaceKind::Pr, system: pr_space_of_matrix(&leq_form(l), Offset::Exact) })
}

/// Whether `f`'s coefficients are produced by some multiplier solution,
/// decided by one LP over the multipliers.
pub fn pr_admits(l: &LoopModel, f: &RankingFunction) -> bool {
    let mf = leq_form(l);
    let (m, n) = (mf.nrows(), mf.n());
    if f.mu.len() != n {
        return false;
    }
    let mut rows = pr_rows(&mf, 2 * m, 0, m);
    let mut c: Vec<Rational> = mf.b.iter().map(|b| -b).collect();
    c.resize(2 * m, Rational::zero());
    rows.push(LinConstraint::new(QVector::new(c), Relation::Ge, -&f.mu0));
    for j in 0..n {
        let mut c = vec![Rational::zero(); 2 * m];
        for i in 0..m {
            c[m + i] = mf.a_primed.get(i, j).clone();
        }
        rows.push(LinConstraint::new(QVector::new(c), Relation::Eq, f.mu[j].clone()));
    }
    let sys = ConstraintSystem::with_rows(lambda_names(m), rows).expect("rows built to size");
    strict_feasible_point(&sys).is_some()
}

fn alt_names(r: usize, s: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=r).map(|i| format!("v1_{i}")).collect();
    v.extend((1..=r).map(|i| format!("v2_{i}")));
    v.extend((1..=s).map(|i| format!("v3_{i}")));
    v
}

fn alt_rows(sf: &SplitMatrixForm, dim: usize) -> Vec<LinConstraint> {
    let (r, s, n) = (sf.guard_rows(), sf.update_rows(), sf.n());
    let (v1, v2, v3) = (0, r, 2 * r);
    let eq = |coeffs: Vec<Rational>| LinConstraint::new(QVector::new(coeffs), Relation::Eq, Rational::zero());
    let mut rows = Vec::new();
    for j in 0..n {
        let mut c = vec![Rational::zero(); dim];
        for i in 0..r {
            c[v1 + i] = sf.a_b.get(i, j).clone();
            c[v2 + i] = -sf.a_b.get(i, j);
        }
        for k in 0..s {
            c[v3 + k] = -sf.a_c.get(k, j);
        }
        rows.push(eq(c));
    }
    for j in 0..n {
        let mut c = vec![Rational::zero(); dim];
        for i in 0..r {
            c[v2 + i] = sf.a_b.get(i, j).clone();
        }
        for k in 0..s {
            c[v3 + k] = sf.a_c.get(k, j) + sf.a_c_primed.get(k, j);
        }
        rows.push(eq(c));
    }
    for j in 0..2 * r + s {
        rows.push(ge_zero(dim, j));
    }
    let mut c = vec![Rational::zero(); dim];
    for i in 0..r {
        c[v2 + i] = sf.b_b[i].clone();
    }
    for k in 0..s {
        c[v3 + k] = sf.b_c[k].clone();
    }
    rows.push(LinConstraint::new(QVector::new(c), Relation::Lt, Rational::zero()));
    rows
}

/// Constraints on `(v₁, v₂, v₃)` for a guarded loop.
pub fn build_pr_alt_system(l: &LoopModel) -> Result<ConstraintSystem, ConstraintError> {
    let sf = to_split_matrix(l)?;
    let (r, s) = (sf.guard_rows(), sf.update_rows());
    ConstraintSystem::with_rows(alt_names(r, s), alt_rows(&sf, 2 * r + s))
}

/// Same as an LP, minimizing `v₂ᵀb_B + v₃ᵀb_C`.
pub fn pr_alt_lp_problem(l: &LoopModel) -> Result<LpProblem, ConstraintError> {
    let sf = to_split_matrix(l)?;
    let dim = 2 * sf.guard_rows() + sf.update_rows();
    let mut p = LpProblem::new(dim, VarSign::NonNegative);
    let mut objective = None;
    for r in alt_rows(&sf, dim) {
        match r.rel {
            Relation::Eq => p.add_row(r.coeffs, LpRelation::Eq, r.rhs),
            Relation::Lt => objective = Some(r.coeffs),
            _ => {}
        }
    }
    Ok(p.with_objective(Sense::Minimize, objective.expect("strict row present")))
}

pub fn pr_alt_find_witness(l: &LoopModel) -> Result<Option<PrAltWitness>, ConstraintError> {
    let sf = to_split_matrix(l)?;
    let (r, s) = (sf.guard_rows(), sf.update_rows());
    let sys = build_pr_alt_system(l)?;
    Ok(feasible_point(&normalize_strict(&sys)).map(|p| {
        let w = PrAltWitness {
            v1: p.iter().take(r).cloned().collect(),
            v2: p.iter().skip(r).take(r).cloned().collect(),
            v3: p.iter().skip(2 * r).take(s).cloned().collect(),
        };
        debug_assert!(w.is_valid_for(&sf));
        w
    }))
}

/// Analysis through the split system; the witness is mapped back to the
/// merged multipliers before extraction.
pub fn pr_alt_analyze(l: &LoopModel) -> Result<Verdict, ConstraintError> {
    if !l.is_guarded() {
        return Err(ConstraintError::NotGuarded);
    }
    if !is_satisfiable(&l.merged()) {
        return Ok(Verdict::TriviallyTerminating);
    }
    Ok(match pr_alt_find_witness(l)? {
        Some(w) => {
            let f = extract_rf(&w.reconstruct_lambda(), &leq_form(l)).expect("reconstructed witness is valid");
            Verdict::Terminating(f)
        }
        None => Verdict::Unknown,
    })
}

/// `⟨mu0, mu⟩` with `mu = v₃ᵀA'_C` and `mu0 >= v₁ᵀb_B`.
///
/// Non-negativity is derived from the guard rows alone, so the space can
/// only match [`pr_space`] when the update admits a successor for every
/// state satisfying the guard (see [`update_is_total`]).
pub fn pr_alt_space(l: &LoopModel) -> Result<RankingSpace, AnalysisError> {
    let sf = to_split_matrix(l)?;
    require_satisfiable(l)?;
    let (r, s, n) = (sf.guard_rows(), sf.update_rows(), sf.n());
    let mut vars = alt_names(r, s);
    let params = param_names(n, true);
    vars.extend(params.iter().cloned());
    let dim = 2 * r + s + n + 1;
    let mu0 = 2 * r + s;
    let mut rows = alt_rows(&sf, dim);
    let mut c = vec![Rational::zero(); dim];
    c[mu0] = Rational::one();
    for (ci, b) in c.iter_mut().zip(sf.b_b.iter()) {
        *ci = -b;
    }
    rows.push(LinConstraint::new(QVector::new(c), Relation::Ge, Rational::zero()));
    for j in 0..n {
        let mut c = vec![Rational::zero(); dim];
        c[mu0 + 1 + j] = Rational::one();
        for k in 0..s {
            c[2 * r + k] = -sf.a_c_primed.get(k, j);
        }
        rows.push(LinConstraint::new(QVector::new(c), Relation::Eq, Rational::zero()));
    }
    let sys = ConstraintSystem::with_rows(vars, rows)?;
    let system = project(&sys, &params).expect("parameters are system variables");
    Ok(RankingSpace { kind: SpaceKind::Pr, system })
}

/// Whether every state satisfying the guard has a successor under the update.
pub fn update_is_total(l: &LoopModel) -> Result<bool, ConstraintError> {
    let LoopShape::Guarded { guard, update } = l.shape() else {
        return Err(ConstraintError::NotGuarded);
    };
    let names = l.space().names();
    let g = project(guard, names).expect("unprimed columns exist");
    let u = project(update, names).expect("unprimed columns exist");
    Ok(includes(&g, &u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::ms::{in_denormalized_space, ms_analyze, ms_space};
    use crate::projection::equivalent;
    use crate::simplex::to_standard_form;
    use Relation::*;

    fn log2_matrices() -> LeqMatrixForm {
        to_leq_matrix(&log2_loop().merged()).unwrap()
    }

    fn printed_witness() -> PrWitness {
        PrWitness {
            lambda1: QVector::from_ints(&[2, 0, 0, 0, 0, 0]),
            lambda2: QVector::from_ints(&[1, 1, 0, 0, 0, 0]),
        }
    }

    #[test]
    fn log2_matrices_match_printed_form() {
        let mf = log2_matrices();
        let a: &[&[i64]] = &[&[-1, 0], &[-1, 0], &[1, 0], &[0, 1], &[0, -1], &[0, 0]];
        let ap: &[&[i64]] = &[&[0, 0], &[2, 0], &[-2, 0], &[0, -1], &[0, 1], &[0, -1]];
        assert_eq!(mf.a, QMatrix::from_int_rows(2, a).unwrap());
        assert_eq!(mf.a_primed, QMatrix::from_int_rows(2, ap).unwrap());
        assert_eq!(mf.b, QVector::from_ints(&[-2, 0, 1, -1, 1, -1]));
    }

    #[test]
    fn printed_multipliers_solve_the_system() {
        let mf = log2_matrices();
        let w = printed_witness();
        assert!(w.is_valid_for(&mf));
        let sys = build_pr_system(&mf);
        let point = w.lambda1.concat(&w.lambda2);
        assert!(sys.satisfied_by(point.as_slice()));
        for k in [Rational::from_integer(2), Rational::new(1, 3).unwrap()] {
            let s = w.scaled(&k);
            assert!(sys.satisfied_by(s.lambda1.concat(&s.lambda2).as_slice()));
        }
        assert!(!sys.satisfied_by(w.scaled(&Rational::zero()).lambda1.concat(&QVector::zeros(6)).as_slice()));
    }

    #[test]
    fn system_without_rows_is_infeasible() {
        let c = clause(1, &[]);
        let mf = to_leq_matrix(&c).unwrap();
        let sys = build_pr_system(&mf);
        assert_eq!(sys.dim(), 0);
        assert!(strict_feasible_point(&sys).is_none());
        assert!(pr_find_witness(&mf).is_none());
    }

    #[test]
    fn extraction_from_printed_multipliers() {
        let f = extract_rf(&printed_witness(), &log2_matrices()).unwrap();
        assert_eq!(f.mu, QVector::from_ints(&[2, 0]));
        assert_eq!(f.mu0, Rational::from_integer(-4));
        assert_eq!(f.delta, Rational::from_integer(2));
        let s = ms_space(&log2_loop()).unwrap();
        assert_eq!(in_denormalized_space(&s, &f), Ok(true));
        let two = Rational::from_integer(2);
        let g = extract_rf(&printed_witness().scaled(&two), &log2_matrices()).unwrap();
        assert_eq!((g.mu, g.mu0, g.delta), (f.mu.scale(&two), &f.mu0 * &two, &f.delta * &two));
        assert!(f.certify(&log2_loop().merged()));
    }

    #[test]
    fn invalid_witness_is_rejected() {
        let mut w = printed_witness();
        w.lambda2 = QVector::from_ints(&[1, 0, 0, 0, 0, 0]);
        assert_eq!(extract_rf(&w, &log2_matrices()), Err(AnalysisError::InvalidWitness));
    }

    #[test]
    fn analysis_verdicts() {
        let Verdict::Terminating(f) = pr_analyze(&log2_loop()) else { panic!("expected a witness") };
        assert!(f.delta.is_positive());
        assert!(f.certify(&log2_loop().merged()));
        assert_eq!(pr_analyze(&diverge()), Verdict::Unknown);
        let empty = single(1, &[(&[1, 0], Ge, 1), (&[1, 0], Le, 0), (&[-1, 1], Eq, 0)]);
        assert_eq!(pr_analyze(&empty), Verdict::TriviallyTerminating);
    }

    #[test]
    fn standard_form_sizes() {
        // 3n equalities over 2m multipliers, the strict row as objective.
        let mf = log2_matrices();
        let sf = to_standard_form(&pr_lp_problem(&mf));
        assert_eq!((sf.problem.rows.len(), sf.problem.nvars()), (3 * 2, 2 * 6));
        // 2n equalities over m + 2l multipliers for the split form.
        let sf = to_standard_form(&pr_alt_lp_problem(&log2_loop()).unwrap());
        assert_eq!((sf.problem.rows.len(), sf.problem.nvars()), (2 * 2, 5 + 2));
    }

    fn log2_cone() -> ConstraintSystem {
        mu_system(true, 2, &[(&[0, 1, -1], Gt, 0), (&[0, 0, 1], Ge, 0), (&[1, 2, 0], Ge, 0)])
    }

    #[test]
    fn space_of_log2_loop() {
        let s = pr_space(&log2_loop()).unwrap();
        assert!(equivalent(&s.system, &log2_cone()));
    }

    #[test]
    fn literal_space_pins_the_constant() {
        // With mu0 tied exactly to the multipliers only mu0 = 0 is reachable.
        let l = countdown();
        let s = pr_space_literal(&l).unwrap();
        assert!(equivalent(&s.system, &mu_system(true, 1, &[(&[0, 1], Gt, 0), (&[1, 0], Eq, 0)])));
        let f = RankingFunction::normalized(Rational::one(), QVector::from_ints(&[1]));
        assert!(!s.contains(&f));
        assert!(pr_space(&l).unwrap().contains(&f));
    }

    #[test]
    fn countdown_space() {
        let l = countdown();
        let s = pr_space(&l).unwrap();
        assert!(equivalent(&s.system, &mu_system(true, 1, &[(&[0, 1], Gt, 0), (&[1, 0], Ge, 0)])));
        for k in [1, 2, 7] {
            let f = RankingFunction::normalized(Rational::zero(), QVector::from_ints(&[k]));
            assert!(s.contains(&f));
            assert!(pr_admits(&l, &f));
        }
        assert!(pr_space(&diverge()).unwrap().is_empty());
    }

    #[test]
    fn split_form_of_log2_loop() {
        let l = log2_loop();
        let sf = to_split_matrix(&l).unwrap();
        assert_eq!((sf.guard_rows(), sf.update_rows()), (1, 5));
        let w = pr_alt_find_witness(&l).unwrap().unwrap();
        assert!(w.is_valid_for(&sf));
        assert!(w.reconstruct_lambda().is_valid_for(&log2_matrices()));
        assert!(matches!(pr_alt_analyze(&l), Ok(Verdict::Terminating(_))));
        // x2' >= 1 bounds x2 beyond the guard; only the merged form sees that.
        assert!(!update_is_total(&l).unwrap());
        let (alt, full) = (pr_alt_space(&l).unwrap().system, pr_space(&l).unwrap().system);
        assert!(includes(&alt, &full) && !includes(&full, &alt));
    }

    #[test]
    fn split_form_matches_for_total_updates() {
        let l = guarded(
            2,
            &[(&[1, 0, 0, 0], Ge, 2)],
            &[(&[-1, 0, 2, 0], Le, 0), (&[-1, 0, 2, 0], Ge, -1), (&[0, 1, 0, -1], Eq, -1)],
        );
        assert!(update_is_total(&l).unwrap());
        let (alt, full) = (pr_alt_space(&l).unwrap().system, pr_space(&l).unwrap().system);
        assert!(equivalent(&alt, &full));
        assert!(equivalent(&full, &mu_system(true, 2, &[(&[0, 1, 0], Gt, 0), (&[0, 0, 1], Eq, 0), (&[1, 2, 0], Ge, 0)])));
    }

    #[test]
    fn split_form_requires_guarded_loops() {
        assert_eq!(build_pr_alt_system(&countdown()), Err(ConstraintError::NotGuarded));
        assert!(matches!(pr_alt_space(&countdown()), Err(AnalysisError::Constraint(ConstraintError::NotGuarded))));
    }

    #[test]
    fn empty_guard_leaves_update_multipliers() {
        let l = guarded(1, &[], &[(&[1, 0], Ge, 0), (&[-1, 1], Eq, -1)]);
        let sys = build_pr_alt_system(&l).unwrap();
        assert_eq!(sys.dim(), 3);
        // First row is -v3ᵀA_C = 0.
        let a_c = to_leq_matrix(&clause(1, &[(&[1, 0], Ge, 0), (&[-1, 1], Eq, -1)])).unwrap().a;
        let expected: QVector = a_c.column(0).iter().map(|v| -v).collect();
        assert_eq!(sys.rows()[0].coeffs, expected);
        assert!(!update_is_total(&l).unwrap());
    }

    #[test]
    fn guarded_countdown_space() {
        let l = guarded(1, &[(&[1, 0], Ge, 0)], &[(&[-1, 1], Eq, -1)]);
        let s = pr_alt_space(&l).unwrap();
        let f = RankingFunction::normalized(Rational::zero(), QVector::from_ints(&[1]));
        assert!(s.contains(&f));
        assert!(equivalent(&s.system, &pr_space(&l).unwrap().system));
    }

    #[test]
    fn row_permutation_keeps_the_space() {
        let mf = log2_matrices();
        let permuted = mf.permute_rows(&[5, 3, 0, 4, 1, 2]).unwrap();
        assert!(equivalent(
            &pr_space_of_matrix(&mf, Offset::Closed),
            &pr_space_of_matrix(&permuted, Offset::Closed)
        ));
    }

    #[test]
    fn analyses_agree_on_fixtures() {
        for l in [log2_loop(), countdown(), diverge()] {
            assert_eq!(pr_analyze(&l).name(), ms_analyze(&l).name());
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn witnesses_are_sound_and_scale(l in small_loop(5), k in 1i64..6) {
                let mf = to_leq_matrix(&l.merged()).unwrap();
                if let Some(w) = pr_find_witness(&mf) {
                    prop_assert!(w.is_valid_for(&mf));
                    for t in [Rational::from_integer(k), Rational::new(1, k).unwrap()] {
                        prop_assert!(w.scaled(&t).is_valid_for(&mf));
                    }
                    let f = extract_rf(&w, &mf).unwrap();
                    prop_assert!(f.certify(&l.merged()));
                    prop_assert!(pr_admits(&l, &f));
                    prop_assert!(pr_space(&l).unwrap().contains(&f));
                }
            }

            #[test]
            fn space_ignores_row_order(l in small_loop(3), seed in any::<u64>()) {
                let mf = to_leq_matrix(&l.merged()).unwrap();
                let mut perm: Vec<usize> = (0..mf.nrows()).collect();
                let mut x = seed;
                for i in (1..perm.len()).rev() {
                    x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    perm.swap(i, (x >> 33) as usize % (i + 1));
                }
                let permuted = mf.permute_rows(&perm).unwrap();
                prop_assert!(equivalent(
                    &pr_space_of_matrix(&mf, Offset::Closed),
                    &pr_space_of_matrix(&permuted, Offset::Closed)
                ));
            }

            #[test]
            fn split_form_matches_on_total_updates(l in total_guarded_loop(3)) {
                prop_assert!(update_is_total(&l).unwrap());
                if is_satisfiable(&l.merged()) {
                    let alt = pr_alt_space(&l).unwrap().system;
                    let full = pr_space(&l).unwrap().system;
                    prop_assert!(equivalent(&alt, &full));
                    prop_assert_eq!(pr_alt_analyze(&l).unwrap().name(), pr_analyze(&l).name());
                }
            }
        }
    }
}

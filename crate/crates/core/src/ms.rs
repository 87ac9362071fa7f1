//! Ranking function synthesis through LP duality: the positive-variable
//! method (SVG) and its generalization to affine ranking functions over the
//! rationals (MS).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{QVector, Rational};
use crate::constraints::{
    is_satisfiable, to_geq_matrix, ConstraintError, ConstraintSystem, GeqMatrixForm, LinConstraint,
    LoopModel, Relation,
};
use crate::projection::{entails, project, remove_redundant};
use crate::simplex::{feasible_point, strict_feasible_point, LpProblem, LpRelation, Sense, VarSign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    Constraint(ConstraintError),
    /// The operation needs a satisfiable loop.
    UnsatisfiableLoop,
    KindMismatch { expected: SpaceKind, found: SpaceKind },
    /// Clauses or spaces over different numbers of variables.
    ArityMismatch,
    /// Multipliers that do not satisfy their defining system.
    InvalidWitness,
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::Constraint(e) => write!(f, "{e}"),
            AnalysisError::UnsatisfiableLoop => f.write_str("loop constraints are unsatisfiable"),
            AnalysisError::KindMismatch { expected, found } => {
                write!(f, "expected a {expected} space, found {found}")
            }
            AnalysisError::ArityMismatch => f.write_str("inputs range over different variables"),
            AnalysisError::InvalidWitness => f.write_str("multipliers do not satisfy the system"),
        }
    }
}

impl core::error::Error for AnalysisError {}

impl From<ConstraintError> for AnalysisError {
    fn from(e: ConstraintError) -> Self {
        AnalysisError::Constraint(e)
    }
}

/// `f(x) = mu0 + mu·x`, certified to drop by at least `delta` per iteration
/// and to stay at or above `lower_bound` on every state that can iterate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingFunction {
    pub mu0: Rational,
    pub mu: QVector,
    pub delta: Rational,
    pub lower_bound: Rational,
}

impl RankingFunction {
    /// Decrease at least 1, bounded below by 0.
    pub fn normalized(mu0: Rational, mu: QVector) -> Self {
        RankingFunction { mu0, mu, delta: Rational::one(), lower_bound: Rational::zero() }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        &self.mu0 + &crate::arith::dot(self.mu.as_slice(), x)
    }

    /// Checks the two defining conditions at one transition `(x, x')`.
    pub fn holds_on(&self, x: &[Rational], x_next: &[Rational]) -> bool {
        let fx = self.eval(x);
        &fx - &self.eval(x_next) >= self.delta && fx >= self.lower_bound
    }

    /// The two implications `c ⊨ f(x) - f(x') >= delta` and
    /// `c ⊨ f(x) >= lower_bound`, decided by LP. Vacuous on empty `c`.
    pub fn certify(&self, c: &ConstraintSystem) -> bool {
        let n = self.mu.len();
        if c.dim() != 2 * n {
            return false;
        }
        if !is_satisfiable(c) {
            return true;
        }
        let mut dec: Vec<Rational> = self.mu.as_slice().to_vec();
        dec.extend(self.mu.iter().map(|v| -v));
        let mut bound: Vec<Rational> = self.mu.as_slice().to_vec();
        bound.resize(2 * n, Rational::zero());
        let decrease = LinConstraint::new(QVector::new(dec), Relation::Ge, self.delta.clone());
        let bounded = LinConstraint::new(QVector::new(bound), Relation::Ge, &self.lower_bound - &self.mu0);
        entails(c, &decrease) == Ok(true) && entails(c, &bounded) == Ok(true)
    }
}

impl fmt::Display for RankingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mu0)?;
        for (i, m) in self.mu.iter().enumerate() {
            if !m.is_zero() {
                write!(f, " + {m}*x{}", i + 1)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Svg,
    MsFull,
    MsDecreasing,
    MsBounded,
    Pr,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Svg => "svg",
            SpaceKind::MsFull => "ms-full",
            SpaceKind::MsDecreasing => "ms-decreasing",
            SpaceKind::MsBounded => "ms-bounded",
            SpaceKind::Pr => "pr",
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of ranking function parameters. Variables are `mu0, mu1..mun`,
/// except for positive-variable spaces, which have no `mu0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingSpace {
    pub kind: SpaceKind,
    pub system: ConstraintSystem,
}

impl RankingSpace {
    pub fn params(&self) -> &[String] {
        self.system.vars()
    }

    pub fn has_mu0(&self) -> bool {
        self.kind != SpaceKind::Svg
    }

    /// Number of program variables.
    pub fn n(&self) -> usize {
        self.system.dim() - usize::from(self.has_mu0())
    }

    /// Exact membership of `⟨mu0, mu⟩` (just `mu` for positive-variable spaces).
    pub fn contains(&self, f: &RankingFunction) -> bool {
        if f.mu.len() != self.n() {
            return false;
        }
        let mut p = Vec::with_capacity(self.system.dim());
        if self.has_mu0() {
            p.push(f.mu0.clone());
        }
        p.extend(f.mu.iter().cloned());
        self.system.satisfied_by(&p)
    }

    pub fn is_empty(&self) -> bool {
        crate::projection::is_empty(&self.system)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Verdict {
    Terminating(RankingFunction),
    /// The loop body is unsatisfiable.
    TriviallyTerminating,
    Unknown,
}

impl Verdict {
    pub fn witness(&self) -> Option<&RankingFunction> {
        match self {
            Verdict::Terminating(f) => Some(f),
            _ => None,
        }
    }

    /// Terminating or trivially terminating.
    pub fn proves_termination(&self) -> bool {
        !matches!(self, Verdict::Unknown)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Terminating(_) => "terminating",
            Verdict::TriviallyTerminating => "trivially-terminating",
            Verdict::Unknown => "unknown",
        }
    }
}

/// `mu0, mu1..mun`, or `mu1..mun` without the constant.
pub fn param_names(n: usize, with_mu0: bool) -> Vec<String> {
    let start = if with_mu0 { 0 } else { 1 };
    (start..=n).map(|i| format!("mu{i}")).collect()
}

fn indexed(prefix: &str, count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("{prefix}{i}")).collect()
}

fn geq_form(c: &ConstraintSystem) -> Result<(usize, GeqMatrixForm), ConstraintError> {
    if !c.dim().is_multiple_of(2) {
        return Err(ConstraintError::DimensionMismatch { expected: c.dim() + 1, found: c.dim() });
    }
    Ok((c.dim() / 2, to_geq_matrix(c)?))
}

fn unit(dim: usize, j: usize, v: Rational) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); dim];
    e[j] = v;
    e
}

fn nonneg(dim: usize, range: core::ops::Range<usize>) -> impl Iterator<Item = LinConstraint> {
    range.map(move |j| LinConstraint::new(QVector::new(unit(dim, j, Rational::one())), Relation::Ge, Rational::zero()))
}

/// `c` with every column (`x` and `x'`) restricted to be non-negative.
pub fn with_nonneg_columns(c: &ConstraintSystem) -> ConstraintSystem {
    let mut s = c.clone();
    for r in nonneg(c.dim(), 0..c.dim()) {
        s.push(r).expect("row matches columns");
    }
    s
}

/// `Aᵀy - μ <= 0` on `x` columns, `Aᵀy + μ <= 0` on `x'` columns, `-bᵀy <= -1`.
fn svg_rows(c: &ConstraintSystem) -> Result<(Vec<String>, Vec<LinConstraint>, usize), ConstraintError> {
    let (n, g) = geq_form(c)?;
    let m = g.nrows();
    let mut vars = indexed("y", m);
    vars.extend(param_names(n, false));
    let dim = m + n;
    let mut rows = Vec::with_capacity(2 * n + 1);
    for j in 0..2 * n {
        let mut coeffs: Vec<Rational> = (0..m).map(|i| g.a_c.get(i, j).clone()).collect();
        coeffs.resize(dim, Rational::zero());
        if j < n {
            coeffs[m + j] = Rational::from_integer(-1);
        } else {
            coeffs[m + j - n] = Rational::one();
        }
        rows.push(LinConstraint::new(QVector::new(coeffs), Relation::Le, Rational::zero()));
    }
    let mut last: Vec<Rational> = g.b_c.iter().map(|b| -b).collect();
    last.resize(dim, Rational::zero());
    rows.push(LinConstraint::new(QVector::new(last), Relation::Le, Rational::from_integer(-1)));
    Ok((vars, rows, m))
}

/// Constraints on `(y1..ym, mu1..mun)` whose solutions give positive linear
/// ranking functions `mu·x` of `c` over non-negative variables.
pub fn build_svg_system(c: &ConstraintSystem) -> Result<ConstraintSystem, ConstraintError> {
    let (vars, mut rows, _) = svg_rows(c)?;
    let dim = vars.len();
    rows.extend(nonneg(dim, 0..dim));
    ConstraintSystem::with_rows(vars, rows)
}

/// The same system as an LP maximizing `bᵀy`, all variables non-negative.
pub fn svg_lp_problem(c: &ConstraintSystem) -> Result<LpProblem, ConstraintError> {
    let (vars, rows, m) = svg_rows(c)?;
    let mut p = LpProblem::new(vars.len(), VarSign::NonNegative);
    let objective: QVector = rows
        .last()
        .expect("bound row present")
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, v)| if i < m { -v } else { Rational::zero() })
        .collect();
    for r in rows {
        p.add_row(r.coeffs, LpRelation::Le, r.rhs);
    }
    Ok(p.with_objective(Sense::Maximize, objective))
}

/// Decision procedure for positive linear ranking functions over `ℚ₊`.
pub fn svg_analyze(c: &ConstraintSystem) -> Result<Verdict, ConstraintError> {
    let sys = build_svg_system(c)?;
    // An empty body makes the dual system feasible too (through a Farkas
    // certificate with mu = 0), so emptiness is tested first.
    if !is_satisfiable(&with_nonneg_columns(c)) {
        return Ok(Verdict::TriviallyTerminating);
    }
    let n = c.dim() / 2;
    match feasible_point(&sys) {
        Some(p) => {
            let mu: QVector = p.iter().skip(sys.dim() - n).cloned().collect();
            Ok(Verdict::Terminating(RankingFunction::normalized(Rational::zero(), mu)))
        }
        None => Ok(Verdict::Unknown),
    }
}

/// Every `mu` (non-negative) whose `mu·x` decreases by at least 1 on `c`
/// over non-negative variables.
pub fn svg_space(c: &ConstraintSystem) -> Result<RankingSpace, AnalysisError> {
    if !is_satisfiable(&with_nonneg_columns(c)) {
        return Err(AnalysisError::UnsatisfiableLoop);
    }
    let sys = build_svg_system(c)?;
    let keep = param_names(c.dim() / 2, false);
    let system = project(&sys, &keep).expect("parameters are system variables");
    Ok(RankingSpace { kind: SpaceKind::Svg, system })
}

/// Functions ranking every clause at once: the intersection of the spaces.
pub fn svg_global_space(clauses: &[ConstraintSystem]) -> Result<RankingSpace, AnalysisError> {
    let (first, rest) = clauses.split_first().ok_or(AnalysisError::ArityMismatch)?;
    let mut acc = svg_space(first)?.system;
    for c in rest {
        if c.dim() != first.dim() {
            return Err(AnalysisError::ArityMismatch);
        }
        acc = acc.conjoin(&svg_space(c)?.system).expect("same parameter names");
    }
    Ok(RankingSpace { kind: SpaceKind::Svg, system: remove_redundant(&acc) })
}

/// The two dual systems whose joint solutions are affine ranking functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsSystems {
    /// Over `(y1..ym, mu1..mun)`: `bᵀy >= 1`, `Aᵀy = ⟨μ, -μ⟩`, `y >= 0`.
    pub decrease: ConstraintSystem,
    /// Over `(z1..z{m+2}, mu0..mun)`: `b̃ᵀz >= 0`, `Ãᵀz = ⟨μ̃, 0⟩`, `z >= 0`,
    /// where the two leading rows of `Ã` pin an extra variable to 1.
    pub bounded: ConstraintSystem,
    pub n: usize,
    pub m: usize,
}

impl MsSystems {
    /// Both systems over `(y, z, mu0, mu)`.
    pub fn conjoined(&self) -> ConstraintSystem {
        let mut vars = indexed("y", self.m);
        vars.extend(indexed("z", self.m + 2));
        vars.extend(param_names(self.n, true));
        let d = self.decrease.embed(&vars).expect("decrease variables are a subset");
        let b = self.bounded.embed(&vars).expect("bounded variables are a subset");
        d.conjoin(&b).expect("same variables")
    }
}

pub fn build_ms_systems(c: &ConstraintSystem) -> Result<MsSystems, ConstraintError> {
    let (n, g) = geq_form(c)?;
    let m = g.nrows();

    let mut dvars = indexed("y", m);
    dvars.extend(param_names(n, false));
    let ddim = m + n;
    let mut drows = Vec::new();
    let mut first = g.b_c.as_slice().to_vec();
    first.resize(ddim, Rational::zero());
    drows.push(LinConstraint::new(QVector::new(first), Relation::Ge, Rational::one()));
    for j in 0..2 * n {
        let mut coeffs: Vec<Rational> = (0..m).map(|i| g.a_c.get(i, j).clone()).collect();
        coeffs.resize(ddim, Rational::zero());
        if j < n {
            coeffs[m + j] = Rational::from_integer(-1);
        } else {
            coeffs[m + j - n] = Rational::one();
        }
        drows.push(LinConstraint::new(QVector::new(coeffs), Relation::Eq, Rational::zero()));
    }
    drows.extend(nonneg(ddim, 0..m));

    let mut bvars = indexed("z", m + 2);
    bvars.extend(param_names(n, true));
    let bdim = m + 2 + n + 1;
    let mu0 = m + 2;
    let mut brows = Vec::new();
    let mut first = vec![Rational::one(), Rational::from_integer(-1)];
    first.extend(g.b_c.iter().cloned());
    first.resize(bdim, Rational::zero());
    brows.push(LinConstraint::new(QVector::new(first), Relation::Ge, Rational::zero()));
    let mut x0 = vec![Rational::zero(); bdim];
    x0[0] = Rational::one();
    x0[1] = Rational::from_integer(-1);
    x0[mu0] = Rational::from_integer(-1);
    brows.push(LinConstraint::new(QVector::new(x0), Relation::Eq, Rational::zero()));
    for j in 0..2 * n {
        let mut coeffs = vec![Rational::zero(); 2];
        coeffs.extend((0..m).map(|i| g.a_c.get(i, j).clone()));
        coeffs.resize(bdim, Rational::zero());
        if j < n {
            coeffs[mu0 + 1 + j] = Rational::from_integer(-1);
        }
        brows.push(LinConstraint::new(QVector::new(coeffs), Relation::Eq, Rational::zero()));
    }
    brows.extend(nonneg(bdim, 0..m + 2));

    Ok(MsSystems {
        decrease: ConstraintSystem::with_rows(dvars, drows)?,
        bounded: ConstraintSystem::with_rows(bvars, brows)?,
        n,
        m,
    })
}

/// Both systems as one LP: `b̃ᵀz` is maximized and `bᵀy >= 1` kept as a row.
pub fn ms_lp_problem(c: &ConstraintSystem) -> Result<LpProblem, ConstraintError> {
    let s = build_ms_systems(c)?;
    let joint = s.conjoined();
    let (m, n) = (s.m, s.n);
    let mut signs = vec![VarSign::NonNegative; 2 * m + 2];
    signs.extend(vec![VarSign::Free; n + 1]);
    let mut p = LpProblem { objective: None, rows: Vec::new(), signs };
    let mut objective = None;
    for r in joint.rows() {
        let is_sign_row = r.rel == Relation::Ge
            && r.rhs.is_zero()
            && r.coeffs.iter().filter(|v| !v.is_zero()).count() == 1
            && r.coeffs.iter().any(|v| *v == Rational::one());
        match r.rel {
            Relation::Eq => p.add_row(r.coeffs.clone(), LpRelation::Eq, r.rhs.clone()),
            Relation::Ge if r.rhs.is_zero() && !is_sign_row && objective.is_none() => {
                objective = Some(r.coeffs.clone());
            }
            Relation::Ge if !is_sign_row => p.add_row(r.coeffs.clone(), LpRelation::Ge, r.rhs.clone()),
            _ => {}
        }
    }
    Ok(p.with_objective(Sense::Maximize, objective.expect("bounded system has its objective row")))
}

fn ms_systems_of(l: &LoopModel) -> MsSystems {
    build_ms_systems(&l.merged()).expect("loop models are non-strict with paired columns")
}

/// Decides whether an affine ranking function exists and returns one.
pub fn ms_analyze(l: &LoopModel) -> Verdict {
    let c = l.merged();
    if !is_satisfiable(&c) {
        return Verdict::TriviallyTerminating;
    }
    let joint = ms_systems_of(l).conjoined();
    match feasible_point(&joint) {
        Some(p) => {
            let n = l.n();
            let tail = &p.as_slice()[joint.dim() - n - 1..];
            let mu: QVector = tail[1..].iter().cloned().collect();
            Verdict::Terminating(RankingFunction::normalized(tail[0].clone(), mu))
        }
        None => Verdict::Unknown,
    }
}

fn require_satisfiable(l: &LoopModel) -> Result<(), AnalysisError> {
    if is_satisfiable(&l.merged()) {
        Ok(())
    } else {
        Err(AnalysisError::UnsatisfiableLoop)
    }
}

/// All `⟨mu0, mu⟩` making `mu0 + mu·x` a ranking function with decrease at
/// least 1 and lower bound 0.
pub fn ms_space(l: &LoopModel) -> Result<RankingSpace, AnalysisError> {
    require_satisfiable(l)?;
    let joint = ms_systems_of(l).conjoined();
    let system = project(&joint, &param_names(l.n(), true)).expect("parameters are system variables");
    Ok(RankingSpace { kind: SpaceKind::MsFull, system })
}

/// Candidates that decrease by at least 1 (any `mu0`).
pub fn ms_decreasing_space(l: &LoopModel) -> Result<RankingSpace, AnalysisError> {
    require_satisfiable(l)?;
    let s = ms_systems_of(l);
    let proj = project(&s.decrease, &param_names(l.n(), false)).expect("parameters are system variables");
    let system = proj.embed(&param_names(l.n(), true)).expect("mu1..mun are among mu0..mun");
    Ok(RankingSpace { kind: SpaceKind::MsDecreasing, system })
}

/// Candidates that are non-negative on every state that can iterate.
pub fn ms_bounded_space(l: &LoopModel) -> Result<RankingSpace, AnalysisError> {
    require_satisfiable(l)?;
    let s = ms_systems_of(l);
    let system = project(&s.bounded, &param_names(l.n(), true)).expect("parameters are system variables");
    Ok(RankingSpace { kind: SpaceKind::MsBounded, system })
}

/// Whether some positive multiple of `f.mu`, with any constant, lies in `s`.
pub fn in_denormalized_space(s: &RankingSpace, f: &RankingFunction) -> Result<bool, AnalysisError> {
    if s.kind != SpaceKind::MsFull {
        return Err(AnalysisError::KindMismatch { expected: SpaceKind::MsFull, found: s.kind });
    }
    if f.mu.len() != s.n() {
        return Err(AnalysisError::ArityMismatch);
    }
    let mut c = ConstraintSystem::new(vec![String::from("mu0"), String::from("t")]);
    for r in s.system.rows() {
        let scaled: Rational = r.coeffs.iter().skip(1).zip(f.mu.iter()).map(|(a, m)| a * m).sum();
        let coeffs = QVector::new(vec![r.coeffs[0].clone(), scaled]);
        c.push(LinConstraint::new(coeffs, r.rel, r.rhs.clone())).expect("two columns");
    }
    c.push(LinConstraint::from_ints(&[0, 1], Relation::Gt, 0)).expect("two columns");
    Ok(strict_feasible_point(&c).is_some())
}

//! Cross-validation of the two complete engines: their verdicts, their
//! witnesses and their spaces of ranking functions must coincide.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::{QVector, Rational};
use crate::constraints::{is_satisfiable, ConstraintSystem, LinConstraint, LoopModel, Relation};
use crate::ms::{in_denormalized_space, ms_analyze, ms_space, AnalysisError, RankingFunction, RankingSpace, SpaceKind, Verdict};
use crate::pr::{pr_admits, pr_analyze, pr_space};
use crate::projection::{closure_equivalent, equivalent, project};

/// The positive-scaling closure `{k·p : p in s, k > 0}` of an MS space.
pub fn cone_extend(s: &RankingSpace) -> Result<RankingSpace, AnalysisError> {
    if s.kind != SpaceKind::MsFull {
        return Err(AnalysisError::KindMismatch { expected: SpaceKind::MsFull, found: s.kind });
    }
    let params = s.system.vars().to_vec();
    let mut k = String::from("k");
    while params.contains(&k) {
        k.push('_');
    }
    let mut vars = params.clone();
    vars.push(k);
    let mut rows: Vec<LinConstraint> = s
        .system
        .rows()
        .iter()
        .map(|r| {
            let mut coeffs: Vec<Rational> = r.coeffs.iter().cloned().collect();
            coeffs.push(-&r.rhs);
            LinConstraint::new(QVector::new(coeffs), r.rel, Rational::zero())
        })
        .collect();
    let mut pos = QVector::zeros(params.len() + 1).into_vec();
    pos[params.len()] = Rational::one();
    rows.push(LinConstraint::new(QVector::new(pos), Relation::Gt, Rational::zero()));
    let sys = ConstraintSystem::with_rows(vars, rows)?;
    let system = project(&sys, &params).expect("parameters are system variables");
    Ok(RankingSpace { kind: SpaceKind::MsFull, system })
}

/// How the extended MS space compares with the PR space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceAgreement {
    /// Identical sets, strict faces included.
    Equal,
    /// Closures coincide but some strict face differs.
    ClosureOnly,
    Different,
    /// The loop has no transitions, so neither space is defined.
    NotApplicable,
}

impl SpaceAgreement {
    pub fn name(self) -> &'static str {
        match self {
            SpaceAgreement::Equal => "equal",
            SpaceAgreement::ClosureOnly => "closure-equal, strict faces differ",
            SpaceAgreement::Different => "different",
            SpaceAgreement::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossReport {
    pub ms: Verdict,
    pub pr: Verdict,
    pub agree: bool,
    /// `None` when MS found no witness.
    pub ms_witness_in_pr: Option<bool>,
    /// `None` when PR found no witness.
    pub pr_witness_in_ms: Option<bool>,
    pub spaces: SpaceAgreement,
}

impl CrossReport {
    /// Everything the theory predicts held.
    pub fn consistent(&self) -> bool {
        self.agree
            && self.ms_witness_in_pr != Some(false)
            && self.pr_witness_in_ms != Some(false)
            && matches!(self.spaces, SpaceAgreement::Equal | SpaceAgreement::NotApplicable)
    }

    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.agree {
            out.push(format!("verdicts differ: ms {}, pr {}", self.ms.name(), self.pr.name()));
        }
        if self.ms_witness_in_pr == Some(false) {
            out.push(String::from("ms witness outside the pr space"));
        }
        if self.pr_witness_in_ms == Some(false) {
            out.push(String::from("pr witness outside the ms space"));
        }
        if matches!(self.spaces, SpaceAgreement::ClosureOnly | SpaceAgreement::Different) {
            out.push(format!("spaces: {}", self.spaces.name()));
        }
        out
    }
}

/// Shifts the bound into the constant so that `f >= 0` is the bound condition.
fn zero_bounded(f: &RankingFunction) -> RankingFunction {
    RankingFunction {
        mu0: &f.mu0 - &f.lower_bound,
        mu: f.mu.clone(),
        delta: f.delta.clone(),
        lower_bound: Rational::zero(),
    }
}

/// Compares the extended MS space with the PR space.
pub fn compare_spaces(l: &LoopModel) -> Result<SpaceAgreement, AnalysisError> {
    if !is_satisfiable(&l.merged()) {
        return Ok(SpaceAgreement::NotApplicable);
    }
    let ext = cone_extend(&ms_space(l)?)?;
    let pr = pr_space(l)?;
    Ok(if equivalent(&ext.system, &pr.system) {
        SpaceAgreement::Equal
    } else if closure_equivalent(&ext.system, &pr.system) {
        SpaceAgreement::ClosureOnly
    } else {
        SpaceAgreement::Different
    })
}

pub fn cross_check(l: &LoopModel) -> CrossReport {
    let ms = ms_analyze(l);
    let pr = pr_analyze(l);
    let agree = ms.name() == pr.name();
    let ms_witness_in_pr = ms.witness().map(|f| pr_admits(l, &zero_bounded(f)));
    let pr_witness_in_ms = pr.witness().map(|f| {
        let s = ms_space(l).expect("loop with a witness is satisfiable");
        in_denormalized_space(&s, &zero_bounded(f)).expect("same arity")
    });
    let spaces = compare_spaces(l).expect("spaces of a loop model are well formed");
    CrossReport { ms, pr, agree, ms_witness_in_pr, pr_witness_in_ms, spaces }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::projection::entails;
    use Relation::*;

    fn ms_full(system: ConstraintSystem) -> RankingSpace {
        RankingSpace { kind: SpaceKind::MsFull, system }
    }

    #[test]
    fn cone_of_a_shifted_halfline() {
        let s = ms_full(mu_system(true, 1, &[(&[0, 1], Ge, 1)]));
        let c = cone_extend(&s).unwrap();
        assert!(equivalent(&c.system, &mu_system(true, 1, &[(&[0, 1], Gt, 0)])));
        let half = RankingFunction::normalized(Rational::zero(), QVector::new(alloc::vec![Rational::new(1, 2).unwrap()]));
        assert!(c.contains(&half));
        assert!(!s.contains(&half));
        assert!(!c.contains(&RankingFunction::normalized(Rational::zero(), QVector::zeros(1))));
    }

    #[test]
    fn cone_of_a_cone() {
        let s = ms_full(mu_system(true, 1, &[(&[0, 1], Ge, 0)]));
        assert!(equivalent(&cone_extend(&s).unwrap().system, &s.system));
    }

    #[test]
    fn cone_of_empty_space_is_empty() {
        let s = ms_full(mu_system(true, 1, &[(&[0, 1], Ge, 1), (&[0, 1], Le, 0)]));
        assert!(cone_extend(&s).unwrap().is_empty());
    }

    #[test]
    fn cone_needs_full_ms_space() {
        let s = RankingSpace { kind: SpaceKind::Pr, system: mu_system(true, 1, &[]) };
        assert_eq!(
            cone_extend(&s),
            Err(AnalysisError::KindMismatch { expected: SpaceKind::MsFull, found: SpaceKind::Pr })
        );
    }

    #[test]
    fn cone_of_log2_space() {
        let c = cone_extend(&ms_space(&log2_loop()).unwrap()).unwrap();
        let expected = mu_system(true, 2, &[(&[0, 1, -1], Gt, 0), (&[0, 0, 1], Ge, 0), (&[1, 2, 0], Ge, 0)]);
        assert!(equivalent(&c.system, &expected));
        assert!(equivalent(&cone_extend(&c).unwrap().system, &c.system));
        assert!(entails(&c.system, &LinConstraint::from_ints(&[1, 2, 0], Ge, 0)).unwrap());
    }

    #[test]
    fn log2_report() {
        let r = cross_check(&log2_loop());
        assert!(r.agree && r.consistent(), "{:?}", r.problems());
        assert_eq!((r.ms_witness_in_pr, r.pr_witness_in_ms), (Some(true), Some(true)));
        assert_eq!(r.spaces, SpaceAgreement::Equal);
    }

    #[test]
    fn diverging_report() {
        let r = cross_check(&diverge());
        assert_eq!((r.ms.clone(), r.pr.clone()), (Verdict::Unknown, Verdict::Unknown));
        assert_eq!((r.ms_witness_in_pr, r.pr_witness_in_ms), (None, None));
        assert_eq!(r.spaces, SpaceAgreement::Equal);
        assert!(r.consistent());
    }

    #[test]
    fn empty_loop_report() {
        let r = cross_check(&single(1, &[(&[1, 0], Ge, 1), (&[1, 0], Le, 0), (&[-1, 1], Eq, 0)]));
        assert_eq!((r.ms.clone(), r.pr.clone()), (Verdict::TriviallyTerminating, Verdict::TriviallyTerminating));
        assert_eq!(r.spaces, SpaceAgreement::NotApplicable);
        assert!(r.consistent() && r.problems().is_empty());
    }

    #[test]
    fn shifted_bound_is_folded_into_the_constant() {
        let f = RankingFunction {
            mu0: Rational::zero(),
            mu: QVector::from_ints(&[1]),
            delta: Rational::one(),
            lower_bound: Rational::from_integer(-3),
        };
        let g = zero_bounded(&f);
        assert_eq!((g.mu0, g.lower_bound), (Rational::from_integer(3), Rational::zero()));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn engines_agree(l in small_loop(5)) {
                let r = cross_check(&l);
                prop_assert!(r.consistent(), "{:?}", r.problems());
            }

            #[test]
            fn cone_extension_is_idempotent(l in small_loop(3)) {
                if is_satisfiable(&l.merged()) {
                    let c = cone_extend(&ms_space(&l).unwrap()).unwrap();
                    prop_assert!(equivalent(&cone_extend(&c).unwrap().system, &c.system));
                }
            }
        }
    }
}

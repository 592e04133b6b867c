//! Certified triviality decisions for triangular presentations.
//!
//! Stages run cheapest first: deduction cascade, abelianization, coset
//! enumeration. A verdict carries the certificate of the stage that decided
//! it, and [`verify`] rechecks that certificate from scratch.

pub mod abelian;
pub mod cascade;
pub mod coset;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use abelian::{abelianization, abelianization_with, AbelianizationResult, Overflow};
pub use cascade::{
    cascade_close, cascade_close_with, replay, CascadeStep, DeductionState, ReplayError, Rule,
    Term,
};
pub use coset::{coset_enumerate, coset_enumerate_words, relator_words, CosetOutcome, CosetRun};

use crate::presentation::Presentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub cascade: bool,
    pub abelianization: bool,
    /// Coset table cap; 0 skips coset enumeration.
    pub max_cosets: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            cascade: true,
            abelianization: true,
            max_cosets: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Trivial,
    Nontrivial,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Cascade,
    Abelianization,
    CosetEnumeration,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    CascadeLog {
        killed: Vec<u32>,
        steps: Vec<CascadeStep>,
    },
    ElementaryDivisors {
        divisors: Vec<u64>,
    },
    CosetTableSummary {
        order: u64,
        cosets_defined: u64,
    },
    None,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetSpent {
    pub cascade_merges: u64,
    pub cosets_defined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub stage: Stage,
    pub certificate: Certificate,
    pub budget_spent: BudgetSpent,
}

pub fn decide(p: &Presentation, budget: &Budget) -> Verdict {
    decide_with_killed(p, &[], budget)
}

/// Decides `⟨S | R ∪ {g = e : g ∈ killed}⟩`.
pub fn decide_with_killed(p: &Presentation, killed: &[u32], budget: &Budget) -> Verdict {
    let mut spent = BudgetSpent::default();
    if budget.cascade {
        let st = cascade_close_with(p, killed);
        spent.cascade_merges = st.log().len() as u64;
        if st.is_trivial() {
            return Verdict {
                outcome: Outcome::Trivial,
                stage: Stage::Cascade,
                certificate: Certificate::CascadeLog {
                    killed: killed.to_vec(),
                    steps: st.into_log(),
                },
                budget_spent: spent,
            };
        }
    }
    if budget.abelianization {
        if let Ok(ab) = abelianization_with(p, killed) {
            if ab.certifies_nontrivial() {
                return Verdict {
                    outcome: Outcome::Nontrivial,
                    stage: Stage::Abelianization,
                    certificate: Certificate::ElementaryDivisors {
                        divisors: ab.divisors,
                    },
                    budget_spent: spent,
                };
            }
        }
    }
    if budget.max_cosets > 0 {
        let run = coset_enumerate_words(p.n(), &relator_words(p, killed), budget.max_cosets);
        spent.cosets_defined = run.defined;
        if let CosetOutcome::Finite(order) = run.outcome {
            return Verdict {
                outcome: if order == 1 {
                    Outcome::Trivial
                } else {
                    Outcome::Nontrivial
                },
                stage: Stage::CosetEnumeration,
                certificate: Certificate::CosetTableSummary {
                    order,
                    cosets_defined: run.defined,
                },
                budget_spent: spent,
            };
        }
    }
    Verdict {
        outcome: Outcome::Undecided,
        stage: Stage::None,
        certificate: Certificate::None,
        budget_spent: spent,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("cascade log does not replay: {0}")]
    Replay(#[from] ReplayError),
    #[error("cascade log replays but does not reach the trivial partition")]
    NotTrivial,
    #[error("claimed elementary divisors differ from the recomputed ones")]
    DivisorMismatch,
    #[error("elementary divisors do not certify nontriviality")]
    DivisorsTrivial,
    #[error("coset enumeration does not reproduce the claimed order")]
    CosetMismatch,
    #[error("outcome and certificate disagree")]
    Inconsistent,
}

/// Rechecks the certificate of `v` against `p` without trusting the engine
/// state that produced it.
pub fn verify(p: &Presentation, v: &Verdict) -> Result<(), CertificateError> {
    verify_with_killed(p, &[], v)
}

pub fn verify_with_killed(
    p: &Presentation,
    killed: &[u32],
    v: &Verdict,
) -> Result<(), CertificateError> {
    match (&v.outcome, &v.certificate) {
        (Outcome::Trivial, Certificate::CascadeLog { killed: k, steps }) => {
            if k.as_slice() != killed {
                return Err(CertificateError::Inconsistent);
            }
            let claimed = DeductionState::from_log(p.n(), steps);
            replay(p, killed, steps, &claimed)?;
            if claimed.is_trivial() {
                Ok(())
            } else {
                Err(CertificateError::NotTrivial)
            }
        }
        (Outcome::Nontrivial, Certificate::ElementaryDivisors { divisors }) => {
            let ab = abelianization_with(p, killed).map_err(|_| CertificateError::DivisorMismatch)?;
            if &ab.divisors != divisors {
                return Err(CertificateError::DivisorMismatch);
            }
            if ab.certifies_nontrivial() {
                Ok(())
            } else {
                Err(CertificateError::DivisorsTrivial)
            }
        }
        (
            outcome @ (Outcome::Trivial | Outcome::Nontrivial),
            Certificate::CosetTableSummary {
                order,
                cosets_defined,
            },
        ) => {
            if (*order == 1) != (*outcome == Outcome::Trivial) {
                return Err(CertificateError::Inconsistent);
            }
            let words = relator_words(p, killed);
            let run = coset_enumerate_words(p.n(), &words, *cosets_defined as usize);
            if run.outcome == CosetOutcome::Finite(*order) {
                Ok(())
            } else {
                Err(CertificateError::CosetMismatch)
            }
        }
        (Outcome::Undecided, Certificate::None) => Ok(()),
        _ => Err(CertificateError::Inconsistent),
    }
}

/// Every stage run independently, for cross-stage consistency checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub cascade_trivial: bool,
    pub abelianization: Option<AbelianizationResult>,
    pub coset: CosetRun,
}

impl StageReport {
    pub fn run(p: &Presentation, killed: &[u32], max_cosets: usize) -> Self {
        StageReport {
            cascade_trivial: cascade_close_with(p, killed).is_trivial(),
            abelianization: abelianization_with(p, killed).ok(),
            coset: coset_enumerate_words(p.n(), &relator_words(p, killed), max_cosets.max(1)),
        }
    }

    pub fn certifies_trivial(&self) -> bool {
        self.cascade_trivial || self.coset.outcome == CosetOutcome::Finite(1)
    }

    pub fn certifies_nontrivial(&self) -> bool {
        self.abelianization
            .as_ref()
            .is_some_and(|a| a.certifies_nontrivial())
            || matches!(self.coset.outcome, CosetOutcome::Finite(k) if k > 1)
    }

    /// Empty when the stages agree; otherwise names of violated properties.
    pub fn contradictions(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.certifies_trivial() && self.certifies_nontrivial() {
            out.push("trivial and nontrivial certificates");
        }
        if self.cascade_trivial {
            if let CosetOutcome::Finite(k) = self.coset.outcome {
                if k != 1 {
                    out.push("cascade trivial but coset order > 1");
                }
            }
        }
        if let (CosetOutcome::Finite(k), Some(ab)) = (self.coset.outcome, &self.abelianization) {
            match ab.order() {
                Some(m) if k % m != 0 => out.push("abelian order does not divide group order"),
                None => out.push("finite group with infinite abelianization"),
                _ => {}
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::letter::Letter;

    fn pres(n: u32, words: &[&str]) -> Presentation {
        let ws = words.iter().map(|w| {
            let t: Vec<Letter> = w
                .split_whitespace()
                .map(|s| Letter::parse_token(s).unwrap())
                .collect();
            [t[0], t[1], t[2]]
        });
        Presentation::from_words(n, ws).unwrap()
    }

    #[test]
    fn cyclic_four_is_nontrivial_by_divisors() {
        let p = pres(2, &["g1 g1 g2", "g1 g1 G2"]);
        let v = decide(&p, &Budget::default());
        assert_eq!(v.outcome, Outcome::Nontrivial);
        assert_eq!(
            v.certificate,
            Certificate::ElementaryDivisors {
                divisors: alloc::vec![1, 4]
            }
        );
        verify(&p, &v).unwrap();
    }

    #[test]
    fn three_relators_trivial_by_cascade() {
        let p = pres(3, &["g1 g1 g2", "g1 g1 g3", "g1 g2 G3"]);
        let v = decide(&p, &Budget::default());
        assert_eq!(v.outcome, Outcome::Trivial);
        assert_eq!(v.stage, Stage::Cascade);
        verify(&p, &v).unwrap();
    }

    #[test]
    fn one_relator_has_infinite_abelianization() {
        let p = pres(2, &["g1 g1 g2"]);
        let v = decide(&p, &Budget::default());
        assert_eq!(
            v.certificate,
            Certificate::ElementaryDivisors {
                divisors: alloc::vec![1, 0]
            }
        );
    }

    #[test]
    fn coset_stage_decides_when_others_are_off() {
        let p = pres(1, &["g1 g1 g1"]);
        let budget = Budget {
            cascade: false,
            abelianization: false,
            max_cosets: 100,
        };
        let v = decide(&p, &budget);
        assert_eq!(v.outcome, Outcome::Nontrivial);
        assert_eq!(v.stage, Stage::CosetEnumeration);
        verify(&p, &v).unwrap();
    }

    #[test]
    fn all_stages_off_is_undecided() {
        let budget = Budget {
            cascade: false,
            abelianization: false,
            max_cosets: 0,
        };
        let v = decide(&Presentation::free(2), &budget);
        assert_eq!(v.outcome, Outcome::Undecided);
        assert_eq!(v.certificate, Certificate::None);
    }

    #[test]
    fn forged_certificates_fail_verification() {
        let p = pres(1, &["g1 g1 g1"]);
        let forged = Verdict {
            outcome: Outcome::Trivial,
            stage: Stage::CosetEnumeration,
            certificate: Certificate::CosetTableSummary {
                order: 1,
                cosets_defined: 10,
            },
            budget_spent: BudgetSpent::default(),
        };
        assert!(verify(&p, &forged).is_err());
        let wrong_div = Verdict {
            outcome: Outcome::Nontrivial,
            stage: Stage::Abelianization,
            certificate: Certificate::ElementaryDivisors {
                divisors: alloc::vec![5],
            },
            budget_spent: BudgetSpent::default(),
        };
        assert_eq!(verify(&p, &wrong_div), Err(CertificateError::DivisorMismatch));
    }

    #[test]
    fn stage_report_agrees_on_small_groups() {
        for words in [
            &["g1 g1 g1"][..],
            &["g1 g1 g2", "g1 g1 G2"][..],
            &["g1 g1 g2", "g2 g2 g1", "g1 G2 G2"][..],
        ] {
            let n = if words.len() == 1 { 1 } else { 2 };
            let r = StageReport::run(&pres(n, words), &[], 1000);
            assert!(r.contradictions().is_empty(), "{words:?}");
        }
    }
}

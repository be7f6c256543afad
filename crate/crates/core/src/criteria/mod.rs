//! Hyponormality decision procedures.
//!
//! Every checker returns a [`Verdict`]. A proof names the theorem it rests on,
//! the index ranges that were verified by exact evaluation and the tail
//! certificate for the infinite remainder. A refutation carries either an
//! explicit test function with exact negative form value or the exact index at
//! which an if-and-only-if criterion fails.

mod dispatch;
mod harmonic;
mod mellin;
mod monomial;
mod phase;
mod two_term;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::arith::PositivityVerdict;
use crate::operator::Witness;

pub use dispatch::{check, check_with, CheckOptions, CheckReport};
pub use harmonic::{check_harmonic_binomial, harmonic_binomial_from_norm};
pub use mellin::{
    check_liu_lu, check_quarter_plane, liu_lu_report, liu_lu_rows, mellin_hat, LiuLuReport, MellinCheckRow,
};
pub use monomial::{check_monomial, monomial_numerator};
pub use phase::{binomial_phase_analysis, ConditionCheck, PhaseAnalysis, PhaseAnalysisRow};
pub use two_term::{
    check_hypo_plus_cohypo, check_sum_of_hypo_monomials, construct_hypo_plus_cohypo, pair_analysis,
    ConstructionReport, CrossTermBounds, PairAnalysis, TildeBounds,
};

/// Default last `alpha` (or `k`) evaluated row by row before the tail takes over.
pub const DEFAULT_ALPHA_CHECK: i64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    /// A single monomial `a z^m zb^n` with `m >= n`.
    Monomial32,
    /// Two monomials with `m > n` and `i > j`.
    SumHypo33,
    /// `a z^m zb^n + b zb^i z^j` with `m > n`, `i > j`.
    HypoCoHypo35,
    /// The explicit hypo + cohypo family with coefficient `1/(2j + delta)`.
    Construct37,
    /// Mellin-transform criterion for fixed relative degree (if and only if).
    LiuLu41,
    /// Fixed-degree binomial with coefficients in a common quarter-plane.
    QuarterPlane43,
    /// Fixed-degree polynomial with coefficients in a common quarter-plane.
    QuarterPlane46,
    /// `z^n + alpha zb^m` (if and only if).
    HarmonicBinomial,
    /// Relative degree zero: the operator is self-adjoint.
    SelfAdjointDelta0,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub theorem_id: TheoremId,
    /// Inclusive index ranges verified by exact evaluation.
    pub ranges_checked: Vec<(i64, i64)>,
    /// Positivity certificate for the infinite tail. `None` for theorems with
    /// no infinite family to check.
    pub tail: Option<PositivityVerdict>,
}

impl Certificate {
    pub fn finite(theorem_id: TheoremId) -> Self {
        Self {
            theorem_id,
            ranges_checked: Vec::new(),
            tail: None,
        }
    }
}

/// An if-and-only-if criterion failing at an exact index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub theorem_id: TheoremId,
    pub alpha: Option<i64>,
    pub detail: String,
    /// `z^alpha` (or another explicit vector) when its form value was checked.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Refutation {
    Witness(Witness),
    CriterionViolation(Violation),
}

impl Refutation {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Refutation::Witness(w) => Some(w),
            Refutation::CriterionViolation(v) => v.witness.as_ref(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    ProvenHyponormal(Certificate),
    NotHyponormal(Refutation),
    Inconclusive(String),
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::ProvenHyponormal(_) => "ProvenHyponormal",
            Verdict::NotHyponormal(_) => "NotHyponormal",
            Verdict::Inconclusive(_) => "Inconclusive",
        }
    }

    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::ProvenHyponormal(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::NotHyponormal(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Verdict::Inconclusive(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Verdict::ProvenHyponormal(c) => Some(c),
            _ => None,
        }
    }

    pub fn theorem_id(&self) -> Option<TheoremId> {
        match self {
            Verdict::ProvenHyponormal(c) => Some(c.theorem_id),
            Verdict::NotHyponormal(Refutation::CriterionViolation(v)) => Some(v.theorem_id),
            _ => None,
        }
    }

    pub fn violation_alpha(&self) -> Option<i64> {
        match self {
            Verdict::NotHyponormal(Refutation::CriterionViolation(v)) => v.alpha,
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::NotHyponormal(r) => r.witness(),
            _ => None,
        }
    }

    pub(crate) fn inconclusive(reason: impl Into<String>) -> Self {
        Verdict::Inconclusive(reason.into())
    }
}

/// Flat JSON object:
/// `{tag, theorem_id?, violation_alpha?, witness?, ranges, tail, reason?, detail?}`.
impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("tag", self.tag())?;
        if let Some(id) = self.theorem_id() {
            map.serialize_entry("theorem_id", &id)?;
        }
        if let Some(a) = self.violation_alpha() {
            map.serialize_entry("violation_alpha", &a)?;
        }
        if let Some(w) = self.witness() {
            map.serialize_entry("witness", &WitnessJson(w))?;
        }
        match self {
            Verdict::ProvenHyponormal(c) => {
                map.serialize_entry("ranges", &c.ranges_checked)?;
                map.serialize_entry("tail", &c.tail)?;
            }
            Verdict::NotHyponormal(r) => {
                map.serialize_entry("ranges", &Vec::<(i64, i64)>::new())?;
                map.serialize_entry("tail", &None::<PositivityVerdict>)?;
                if let Refutation::CriterionViolation(v) = r {
                    map.serialize_entry("detail", &v.detail)?;
                }
            }
            Verdict::Inconclusive(reason) => {
                map.serialize_entry("ranges", &Vec::<(i64, i64)>::new())?;
                map.serialize_entry("tail", &None::<PositivityVerdict>)?;
                map.serialize_entry("reason", reason)?;
            }
        }
        map.end()
    }
}

/// `{basis, offset, entries, form_value, section_size, eigenvalue}`.
struct WitnessJson<'a>(&'a Witness);

impl Serialize for WitnessJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let w = self.0;
        let v = serde_json::to_value(&w.vector).map_err(serde::ser::Error::custom)?;
        let mut map = s.serialize_map(None)?;
        if let serde_json::Value::Object(fields) = v {
            for (k, val) in fields {
                map.serialize_entry(&k, &val)?;
            }
        }
        map.serialize_entry("form_value", &w.form_value)?;
        map.serialize_entry("section_size", &w.section_size)?;
        map.serialize_entry("eigenvalue", &w.eigenvalue)?;
        map.end()
    }
}

//! The qualitative rating scale and the expectation matrix the evaluation
//! report is compared against. The matrix cells are fixed reference data;
//! a transcription test keeps them honest against a checked-in copy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engines::MethodTag;

use super::EvalError;

/// Five-step ordinal scale plus U for "unknown". U is incomparable: it
/// never participates in ordering checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrdinalRating {
    VL,
    L,
    M,
    H,
    VH,
    U,
}

impl OrdinalRating {
    /// Position on the scale; None for U.
    pub fn rank(&self) -> Option<u8> {
        match self {
            OrdinalRating::VL => Some(0),
            OrdinalRating::L => Some(1),
            OrdinalRating::M => Some(2),
            OrdinalRating::H => Some(3),
            OrdinalRating::VH => Some(4),
            OrdinalRating::U => None,
        }
    }

    pub fn partial_cmp_rating(&self, other: &OrdinalRating) -> Option<std::cmp::Ordering> {
        Some(self.rank()?.cmp(&other.rank()?))
    }
}

impl std::fmt::Display for OrdinalRating {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            OrdinalRating::VL => "VL",
            OrdinalRating::L => "L",
            OrdinalRating::M => "M",
            OrdinalRating::H => "H",
            OrdinalRating::VH => "VH",
            OrdinalRating::U => "U",
        };
        f.write_str(name)
    }
}

/// Bin a measurement into the ordinal scale. Cuts are the lower edges of
/// L, M, H, VH; a value exactly on a cut belongs to the upper bin.
pub fn to_ordinal(value: f64, thresholds: [f64; 4]) -> Result<OrdinalRating, EvalError> {
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EvalError::InvalidArgument(format!(
            "thresholds must be strictly ascending, got {thresholds:?}"
        )));
    }
    let bin = thresholds.iter().take_while(|cut| value >= **cut).count();
    Ok([
        OrdinalRating::VL,
        OrdinalRating::L,
        OrdinalRating::M,
        OrdinalRating::H,
        OrdinalRating::VH,
    ][bin])
}

/// Measured columns of the technical table.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash,
)]
#[serde(rename_all = "snake_case")]
pub enum TechnicalCriterion {
    Precision,
    Recall,
    CoverageRatio,
    TimeComplexity,
    LogicalComplexity,
    Automation,
}

impl TechnicalCriterion {
    pub const ALL: [TechnicalCriterion; 6] = [
        TechnicalCriterion::Precision,
        TechnicalCriterion::Recall,
        TechnicalCriterion::CoverageRatio,
        TechnicalCriterion::TimeComplexity,
        TechnicalCriterion::LogicalComplexity,
        TechnicalCriterion::Automation,
    ];

    /// The four criteria the harness can actually measure.
    pub const MEASURED: [TechnicalCriterion; 4] = [
        TechnicalCriterion::Precision,
        TechnicalCriterion::Recall,
        TechnicalCriterion::CoverageRatio,
        TechnicalCriterion::TimeComplexity,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            TechnicalCriterion::Precision => "Precision",
            TechnicalCriterion::Recall => "Recall",
            TechnicalCriterion::CoverageRatio => "Coverage ratio",
            TechnicalCriterion::TimeComplexity => "Time complexity",
            TechnicalCriterion::LogicalComplexity => "Logical complexity",
            TechnicalCriterion::Automation => "Automation",
        }
    }
}

/// Reference-only columns: organizational judgments, never measured.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash,
)]
#[serde(rename_all = "snake_case")]
pub enum ManagerialCriterion {
    InvestmentCost,
    OperationalCost,
    Pervasiveness,
    StateOfDevelopment,
    DifficultyOfUse,
    Transparency,
}

impl ManagerialCriterion {
    pub const ALL: [ManagerialCriterion; 6] = [
        ManagerialCriterion::InvestmentCost,
        ManagerialCriterion::OperationalCost,
        ManagerialCriterion::Pervasiveness,
        ManagerialCriterion::StateOfDevelopment,
        ManagerialCriterion::DifficultyOfUse,
        ManagerialCriterion::Transparency,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ManagerialCriterion::InvestmentCost => "Investment cost",
            ManagerialCriterion::OperationalCost => "Operational cost",
            ManagerialCriterion::Pervasiveness => "Pervasiveness",
            ManagerialCriterion::StateOfDevelopment => "State of development",
            ManagerialCriterion::DifficultyOfUse => "Difficulty of use",
            ManagerialCriterion::Transparency => "Transparency",
        }
    }
}

/// The reference ratings: per-method expectations on the technical
/// criteria, plus the managerial/human table kept for reporting only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationMatrix {
    pub technical: BTreeMap<MethodTag, BTreeMap<TechnicalCriterion, OrdinalRating>>,
    /// Not measurable by this harness; printed verbatim, flagged as such.
    pub managerial: BTreeMap<MethodTag, BTreeMap<ManagerialCriterion, OrdinalRating>>,
}

impl ExpectationMatrix {
    pub fn reference() -> ExpectationMatrix {
        use ManagerialCriterion as MC;
        use MethodTag as Mt;
        use OrdinalRating::*;
        use TechnicalCriterion as TC;

        let technical_rows: [(Mt, [OrdinalRating; 6]); 6] = [
            (Mt::Informational, [M, H, L, L, M, H]),
            (Mt::Descriptive, [H, H, VH, VL, L, VH]),
            (Mt::Operational, [VH, H, H, M, M, VH]),
            (Mt::Denotational, [VH, H, H, VH, VH, M]),
            (Mt::Topological, [U, U, VH, H, M, H]),
            (Mt::Structural, [VH, VH, VH, VL, L, VH]),
        ];
        let managerial_rows: [(Mt, [OrdinalRating; 6]); 6] = [
            (Mt::Informational, [VL, L, H, H, M, H]),
            (Mt::Descriptive, [H, H, H, H, VL, VH]),
            (Mt::Operational, [L, M, M, M, L, VH]),
            (Mt::Denotational, [H, H, L, L, M, M]),
            (Mt::Topological, [VH, VH, L, L, VH, VH]),
            (Mt::Structural, [M, L, L, L, VL, VL]),
        ];

        let technical = technical_rows
            .into_iter()
            .map(|(method, row)| {
                (
                    method,
                    TC::ALL.into_iter().zip(row).collect::<BTreeMap<_, _>>(),
                )
            })
            .collect();
        let managerial = managerial_rows
            .into_iter()
            .map(|(method, row)| {
                (
                    method,
                    MC::ALL.into_iter().zip(row).collect::<BTreeMap<_, _>>(),
                )
            })
            .collect();
        ExpectationMatrix {
            technical,
            managerial,
        }
    }

    pub fn technical_rating(&self, method: MethodTag, criterion: TechnicalCriterion) -> OrdinalRating {
        self.technical[&method][&criterion]
    }

    pub fn managerial_rating(
        &self,
        method: MethodTag,
        criterion: ManagerialCriterion,
    ) -> OrdinalRating {
        self.managerial[&method][&criterion]
    }
}

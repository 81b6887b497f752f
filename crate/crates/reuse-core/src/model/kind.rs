//! The asset-kind taxonomy: three product categories, each with a controlled
//! subkind vocabulary.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Intermediate,
    Implemented,
    ProjectMgmtQA,
}

impl Category {
    pub const ALL: [Category; 3] = [
        Category::Intermediate,
        Category::Implemented,
        Category::ProjectMgmtQA,
    ];

    pub fn render(&self) -> &'static str {
        match self {
            Category::Intermediate => "Intermediate",
            Category::Implemented => "Implemented",
            Category::ProjectMgmtQA => "ProjectMgmtQA",
        }
    }

    /// Subkinds admitted under this category.
    pub fn vocabulary(&self) -> &'static [&'static str] {
        match self {
            Category::Intermediate => &[
                "Requirements",
                "Architectures",
                "Designs",
                "Algorithms",
                "Documentations",
            ],
            Category::Implemented => &[
                "System",
                "Frameworks",
                "UMLModels",
                "Libraries",
                "TestCases",
            ],
            Category::ProjectMgmtQA => &[
                "ProcessModels",
                "PlanningModels",
                "CostModels",
                "ReviewForms",
                "AnalysisModels",
            ],
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.render())
    }
}

/// A (category, subkind) pair. Valid kinds keep subkind inside the
/// category's vocabulary; validation reports violations rather than this
/// type enforcing them, so records read from disk can be inspected.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AssetKind {
    pub category: Category,
    pub subkind: String,
}

impl AssetKind {
    pub fn new(category: Category, subkind: impl Into<String>) -> AssetKind {
        AssetKind {
            category,
            subkind: subkind.into(),
        }
    }

    /// Default classification for pattern assets.
    pub fn pattern_default() -> AssetKind {
        AssetKind::new(Category::Implemented, "UMLModels")
    }

    pub fn in_vocabulary(&self) -> bool {
        self.category
            .vocabulary()
            .contains(&self.subkind.as_str())
    }
}

impl fmt::Display for AssetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.category, self.subkind)
    }
}

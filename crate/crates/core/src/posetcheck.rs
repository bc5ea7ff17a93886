//! Symbolic classifier for indicator modules on plane upsets.
//!
//! A support is described as a finite multiset of components, each an upset
//! of the integer plane given in closed form:
//!
//! - **principal**: all points at or above a corner `a`;
//! - **staircase_closed**: the upset of two axis rays meeting at a level
//!   point `(l,l)` — membership `x >= l or y >= l`;
//! - **staircase_punctured**: the closed staircase minus the rays
//!   themselves — membership `x >= l+1 or y >= l+1`.
//!
//! The module under study is the direct sum of the indicator modules of the
//! components. Each component is an upset, so the sum is always flat; a
//! single principal component is free by construction; and a support with a
//! point that dominates no minimal element cannot come from a projective
//! module, which is decided here without enumerating any region: staircase
//! arms descend forever, so staircases contribute no minimal elements and
//! supply such a point whenever present.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Shape of a single support component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportKind {
    Principal,
    StaircaseClosed,
    StaircasePunctured,
}

/// One upset of the integer plane in closed form. For `Principal` the
/// corner is the least point; for the staircase kinds the corner is the
/// level point `(l,l)` where the two arms meet, and must lie on the
/// diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportComponent {
    pub kind: SupportKind,
    pub corner: (i64, i64),
}

impl SupportComponent {
    /// Staircase level `l`; meaningless for principal components.
    fn level(&self) -> i64 {
        self.corner.0
    }

    /// Pointwise membership by the closed-form predicate.
    pub fn member(&self, p: (i64, i64)) -> bool {
        match self.kind {
            SupportKind::Principal => p.0 >= self.corner.0 && p.1 >= self.corner.1,
            SupportKind::StaircaseClosed => p.0 >= self.level() || p.1 >= self.level(),
            SupportKind::StaircasePunctured => p.0 > self.level() || p.1 > self.level(),
        }
    }

    /// Whether the component contains a point strictly below `c` — the
    /// domination test used for minimal elements. Staircase arms extend
    /// arbitrarily far down, so the test reduces to a coordinate bound.
    fn contains_strictly_below(&self, c: (i64, i64)) -> bool {
        match self.kind {
            SupportKind::Principal => {
                self.corner.0 <= c.0 && self.corner.1 <= c.1 && self.corner != c
            }
            SupportKind::StaircaseClosed => c.0 >= self.level() || c.1 >= self.level(),
            SupportKind::StaircasePunctured => c.0 > self.level() || c.1 > self.level(),
        }
    }
}

/// A support: the union of its components, as a nonempty multiset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportDescriptor {
    pub components: Vec<SupportComponent>,
}

/// Error from reading a descriptor file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DescriptorError {
    Json(String),
    Invalid(String),
}

impl fmt::Display for DescriptorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescriptorError::Json(msg) => write!(f, "descriptor is not valid JSON: {msg}"),
            DescriptorError::Invalid(msg) => write!(f, "invalid descriptor: {msg}"),
        }
    }
}

impl std::error::Error for DescriptorError {}

/// Parses `{"components":[{"kind":"principal","corner":[0,0]}, ...]}`,
/// requiring a nonempty list and diagonal corners on staircases.
pub fn parse_descriptor(text: &str) -> Result<SupportDescriptor, DescriptorError> {
    let desc: SupportDescriptor =
        serde_json::from_str(text).map_err(|e| DescriptorError::Json(e.to_string()))?;
    if desc.components.is_empty() {
        return Err(DescriptorError::Invalid(
            "descriptor needs at least one component".to_string(),
        ));
    }
    for (idx, c) in desc.components.iter().enumerate() {
        if c.kind != SupportKind::Principal && c.corner.0 != c.corner.1 {
            return Err(DescriptorError::Invalid(format!(
                "component {idx}: staircase corner {:?} must lie on the diagonal",
                c.corner
            )));
        }
    }
    Ok(desc)
}

/// Canonical JSON for a descriptor.
pub fn serialize_descriptor(desc: &SupportDescriptor) -> String {
    serde_json::to_string(desc).expect("descriptor serialization cannot fail")
}

impl SupportDescriptor {
    /// Pointwise membership in the union.
    pub fn member(&self, p: (i64, i64)) -> bool {
        self.components.iter().any(|c| c.member(p))
    }

    /// All minimal elements of the support, sorted. Only principal corners
    /// can be minimal; a corner survives unless some component contains a
    /// point strictly below it.
    pub fn minimal_elements(&self) -> Vec<(i64, i64)> {
        let mut minimals: Vec<(i64, i64)> = self
            .components
            .iter()
            .filter(|c| c.kind == SupportKind::Principal)
            .map(|c| c.corner)
            .filter(|&corner| {
                !self
                    .components
                    .iter()
                    .any(|other| other.contains_strictly_below(corner))
            })
            .collect();
        minimals.sort();
        minimals.dedup();
        minimals
    }
}

/// Final verdict of [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Conclusion {
    Free,
    NotProjectiveFlat,
    NoConclusion,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Free => write!(f, "FREE"),
            Conclusion::NotProjectiveFlat => write!(f, "NOT_PROJECTIVE_FLAT"),
            Conclusion::NoConclusion => write!(f, "NO_CONCLUSION"),
        }
    }
}

/// Everything [`classify`] decides about a support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Always true for this family: every component is an upset, and a
    /// direct sum of upset indicator modules is flat.
    pub flat: bool,
    /// True iff the support is a single principal component, making the
    /// module literally a shifted free module on one generator.
    pub free_by_construction: bool,
    /// True iff some support point dominates no minimal element; such a
    /// point obstructs projectivity.
    pub not_projective: bool,
    /// A support point witnessing `not_projective`, when true.
    pub witness: Option<(i64, i64)>,
    pub conclusion: Conclusion,
    /// Present when the non-projectivity verdict rests on a closed
    /// staircase: the criterion is applied literally to any component
    /// without minimal elements, closed staircases included, even though
    /// the punctured staircase is the canonical shape for this phenomenon.
    pub note: Option<String>,
}

/// Classifies the direct sum of the components' indicator modules: flat
/// always; free exactly for a single principal component; not projective
/// whenever a staircase component is present, with an explicit witness
/// point that dominates no minimal element of the support.
pub fn classify(desc: &SupportDescriptor) -> Classification {
    let free_by_construction =
        desc.components.len() == 1 && desc.components[0].kind == SupportKind::Principal;

    let first_staircase = desc
        .components
        .iter()
        .find(|c| c.kind != SupportKind::Principal);
    let not_projective = first_staircase.is_some();

    let witness = first_staircase.map(|stair| {
        let minimals = desc.minimal_elements();
        let l = stair.level();
        match minimals.iter().map(|m| m.0).min() {
            // No minimal elements at all: any interior staircase point works.
            None => (l + 1, l + 1),
            // Slide down the arm until the first coordinate undercuts every
            // minimal element; nothing at or below such a point remains.
            Some(min_x) => (min_x - 1, l + 1),
        }
    });

    let note = (not_projective
        && desc
            .components
            .iter()
            .any(|c| c.kind == SupportKind::StaircaseClosed))
    .then(|| {
        "verdict applies the no-minimal-element criterion literally; closed staircases \
         satisfy it exactly like punctured ones"
            .to_string()
    });

    let conclusion = if free_by_construction {
        Conclusion::Free
    } else if not_projective {
        Conclusion::NotProjectiveFlat
    } else {
        Conclusion::NoConclusion
    };

    Classification {
        flat: true,
        free_by_construction,
        not_projective,
        witness,
        conclusion,
        note,
    }
}

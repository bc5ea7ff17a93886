//! Freeness criteria and homogeneous basis extraction for line-indexed
//! modules.
//!
//! A module whose structure maps are all injective is free as a graded
//! module, and a basis can be read off degree by degree: start with the
//! coordinate vectors at the bottom degree, and at each following degree
//! adjoin vectors completing the image of the incoming map to a full basis
//! — the complement columns produced by elimination. [`check_criteria_1d`]
//! reports the injectivity verdicts; [`compute_basis_1d`] performs the
//! extraction and fails cleanly on the first non-injective map.

use std::fmt;

use serde::Serialize;

use crate::pmod::{BasisComputation, DegreeElement, GradedBasis, Module1d};
use crate::ratmat::Matrix;

/// Failure of the basis extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis1dError {
    /// The structure map out of this degree is not injective, so the
    /// criteria do not certify freeness and no basis is produced.
    NotInjectiveAt(i64),
}

impl fmt::Display for Basis1dError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis1dError::NotInjectiveAt(i) => write!(f, "NotInjectiveAt {i}"),
        }
    }
}

impl std::error::Error for Basis1dError {}

/// Verdict for a single structure map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapCheck1d {
    /// Source degree of the map (it targets `source + 1`).
    pub source: i64,
    pub rank: usize,
    pub source_dim: usize,
    pub injective: bool,
}

/// Injectivity verdicts for every stored map, in degree order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriteriaReport1d {
    pub checks: Vec<MapCheck1d>,
    /// True iff every stored map is injective.
    pub pass: bool,
    /// Source degree of the first failing map, if any.
    pub first_failure: Option<i64>,
    /// Present when the final stored map has rank below the top dimension:
    /// the dimensions are still growing at the window edge, so the window
    /// may cut the module off before it stabilizes.
    pub stabilization_note: Option<String>,
}

/// Checks that every structure map is injective (rank equal to the source
/// dimension). Failures are carried in the report, never raised.
pub fn check_criteria_1d(m: &Module1d) -> CriteriaReport1d {
    let window = m.window();
    let mut checks = Vec::new();
    let mut first_failure = None;
    let mut last_rank = None;
    for source in window.alpha()..window.beta() {
        let rank = m.map(source).rank();
        let source_dim = m.dim(source);
        let injective = rank == source_dim;
        if !injective && first_failure.is_none() {
            first_failure = Some(source);
        }
        checks.push(MapCheck1d {
            source,
            rank,
            source_dim,
            injective,
        });
        last_rank = Some(rank);
    }
    let stabilization_note = last_rank.and_then(|rank| {
        let top_dim = m.dim(window.beta());
        (rank < top_dim).then(|| {
            format!(
                "final map has rank {rank} but the dimension at degree {} is {top_dim}; \
                 the module is still growing at the window edge",
                window.beta()
            )
        })
    });
    CriteriaReport1d {
        pass: first_failure.is_none(),
        checks,
        first_failure,
        stabilization_note,
    }
}

/// Extracts a homogeneous basis of a module with injective structure maps.
///
/// Starts from the coordinate vectors at the bottom degree; for each map it
/// verifies injectivity by elimination and adjoins, at the target degree,
/// the complement columns of the map's image. On a non-injective map the
/// partial basis is discarded and an error names the source degree.
///
/// The returned operation count totals the entry slots touched by every
/// elementary row operation performed, across all eliminations.
pub fn compute_basis_1d(m: &Module1d) -> Result<BasisComputation<i64>, Basis1dError> {
    let window = m.window();
    let mut ops: u64 = 0;
    let mut elements = Vec::new();

    let identity = Matrix::identity(m.dim(window.alpha()));
    for c in 0..identity.cols() {
        elements.push(DegreeElement {
            degree: window.alpha(),
            vector: identity.column(c),
        });
    }

    for source in window.alpha()..window.beta() {
        let a = m.map(source);
        let first = a.rref();
        ops += first.ops;
        if first.rank < m.dim(source) {
            return Err(Basis1dError::NotInjectiveAt(source));
        }
        // The inverse of the recorded transform holds a basis of the target
        // adapted to the image: its trailing columns complete the image to
        // the full space and become the new generators at `source + 1`.
        let second = first.transform.rref();
        ops += second.ops;
        let complement = second.transform.last_columns(a.rows() - first.rank);
        for c in 0..complement.cols() {
            elements.push(DegreeElement {
                degree: source + 1,
                vector: complement.column(c),
            });
        }
    }

    Ok(BasisComputation {
        basis: GradedBasis { elements },
        ops,
    })
}

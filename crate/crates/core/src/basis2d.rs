//! Freeness criteria and homogeneous basis extraction for grid-indexed
//! modules.
//!
//! Three conditions together certify that a grid-indexed module is free as
//! a graded module and let a basis be extracted cell by cell:
//!
//! 1. **commutativity** — around every unit square the two composite paths
//!    agree ([`check_commutativity`]);
//! 2. **injectivity** — every stored structure map has full column rank
//!    ([`check_injectivity_2d`]);
//! 3. **intersection** — at every interior degree the images of the two
//!    incoming maps meet exactly in the image from the diagonal neighbour,
//!    checked through the rank identity
//!    `rank(H | V) = d_left + d_below − d_diagonal`
//!    ([`check_intersection_condition`]).
//!
//! [`compute_basis_2d`] runs the checks in that order (each assumes the
//! previous ones), stops at the first failure, and otherwise adjoins
//! complement columns degreewise: coordinate vectors at the bottom-left
//! corner, single-map complements along the bottom row and left column, and
//! complements of the concatenated incoming maps in the interior.

use std::fmt;

use serde::Serialize;

use crate::pmod::{BasisComputation, DegreeElement, GradedBasis, Module2d};
use crate::ratmat::Matrix;

/// Which of the two map families a verdict refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Horizontal => write!(f, "horizontal"),
            Direction::Vertical => write!(f, "vertical"),
        }
    }
}

/// Failure of the basis extraction; the first check to fail wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis2dError {
    /// The two composite paths around the unit square into this target
    /// degree disagree.
    NotCommutativeAt((i64, i64)),
    /// The map leaving this source degree in this direction is not
    /// injective.
    NotInjectiveAt((i64, i64), Direction),
    /// At this target degree the images of the two incoming maps overlap in
    /// more than the image from the diagonal neighbour.
    IntersectionFailAt((i64, i64)),
}

impl fmt::Display for Basis2dError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis2dError::NotCommutativeAt((i, j)) => write!(f, "NotCommutativeAt ({i},{j})"),
            Basis2dError::NotInjectiveAt((i, j), dir) => {
                write!(f, "NotInjectiveAt ({i},{j}) {dir}")
            }
            Basis2dError::IntersectionFailAt((i, j)) => write!(f, "IntersectionFailAt ({i},{j})"),
        }
    }
}

impl std::error::Error for Basis2dError {}

/// Verdict for one unit square, named by its target (top-right) degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareCheck {
    pub target: (i64, i64),
    pub commutes: bool,
}

/// Commutativity verdicts for every unit square, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutativityReport {
    pub squares: Vec<SquareCheck>,
    pub pass: bool,
    pub first_failure: Option<(i64, i64)>,
}

/// Verdict for one stored structure map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapCheck2d {
    pub source: (i64, i64),
    pub direction: Direction,
    pub rank: usize,
    pub source_dim: usize,
    pub injective: bool,
}

/// Injectivity verdicts for every stored map, row-major with the horizontal
/// map of a degree before its vertical one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectivityReport2d {
    pub maps: Vec<MapCheck2d>,
    pub pass: bool,
    pub first_failure: Option<((i64, i64), Direction)>,
}

/// Verdict for one interior degree: `rank` of the concatenated incoming
/// maps against the `expected` value `d_left + d_below − d_diagonal`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CornerCheck {
    pub target: (i64, i64),
    pub rank: usize,
    pub expected: i64,
    pub holds: bool,
}

/// Intersection verdicts for every interior degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    pub corners: Vec<CornerCheck>,
    /// True iff commutativity and injectivity both hold; when false the
    /// rank identity below no longer encodes the image intersection and the
    /// verdicts are unreliable.
    pub assumptions_hold: bool,
    pub pass: bool,
    pub first_failure: Option<(i64, i64)>,
}

/// Checks that both composite paths around every unit square agree as exact
/// matrix products.
pub fn check_commutativity(m: &Module2d) -> CommutativityReport {
    let window = m.window();
    let mut squares = Vec::new();
    let mut first_failure = None;
    for i in window.alpha() + 1..=window.beta() {
        for j in window.gamma() + 1..=window.delta() {
            let right_then_up = m
                .vmap((i, j - 1))
                .matmul(m.hmap((i - 1, j - 1)))
                .expect("shapes agree in a valid module");
            let up_then_right = m
                .hmap((i - 1, j))
                .matmul(m.vmap((i - 1, j - 1)))
                .expect("shapes agree in a valid module");
            let commutes = right_then_up == up_then_right;
            if !commutes && first_failure.is_none() {
                first_failure = Some((i, j));
            }
            squares.push(SquareCheck {
                target: (i, j),
                commutes,
            });
        }
    }
    CommutativityReport {
        pass: first_failure.is_none(),
        squares,
        first_failure,
    }
}

fn injectivity_with_ops(m: &Module2d) -> (InjectivityReport2d, u64) {
    let window = m.window();
    let mut maps = Vec::new();
    let mut first_failure = None;
    let mut ops: u64 = 0;
    let mut push = |a: &Matrix, source: (i64, i64), direction: Direction, ops: &mut u64| {
        let result = a.rref();
        *ops += result.ops;
        let source_dim = a.cols();
        let injective = result.rank == source_dim;
        if !injective && first_failure.is_none() {
            first_failure = Some((source, direction));
        }
        maps.push(MapCheck2d {
            source,
            direction,
            rank: result.rank,
            source_dim,
            injective,
        });
    };
    for i in window.alpha()..=window.beta() {
        for j in window.gamma()..=window.delta() {
            if i < window.beta() {
                push(m.hmap((i, j)), (i, j), Direction::Horizontal, &mut ops);
            }
            if j < window.delta() {
                push(m.vmap((i, j)), (i, j), Direction::Vertical, &mut ops);
            }
        }
    }
    (
        InjectivityReport2d {
            pass: first_failure.is_none(),
            maps,
            first_failure,
        },
        ops,
    )
}

/// Checks that every stored structure map has rank equal to its source
/// dimension.
pub fn check_injectivity_2d(m: &Module2d) -> InjectivityReport2d {
    injectivity_with_ops(m).0
}

fn intersection_core(m: &Module2d, assumptions_hold: bool) -> (IntersectionReport, u64) {
    let window = m.window();
    let mut corners = Vec::new();
    let mut first_failure = None;
    let mut ops: u64 = 0;
    for i in window.alpha() + 1..=window.beta() {
        for j in window.gamma() + 1..=window.delta() {
            let concat = m
                .hmap((i - 1, j))
                .hconcat(m.vmap((i, j - 1)))
                .expect("both maps target the same degree");
            let result = concat.rref();
            ops += result.ops;
            let expected =
                m.dim((i - 1, j)) as i64 + m.dim((i, j - 1)) as i64 - m.dim((i - 1, j - 1)) as i64;
            let holds = result.rank as i64 == expected;
            if !holds && first_failure.is_none() {
                first_failure = Some((i, j));
            }
            corners.push(CornerCheck {
                target: (i, j),
                rank: result.rank,
                expected,
                holds,
            });
        }
    }
    (
        IntersectionReport {
            pass: first_failure.is_none(),
            corners,
            assumptions_hold,
            first_failure,
        },
        ops,
    )
}

/// Checks the image-intersection identity at every interior degree: the
/// concatenated incoming maps must have rank `d_left + d_below −
/// d_diagonal`, which (given commutativity and injectivity) says the two
/// images meet exactly in the image from the diagonal neighbour. Both
/// prerequisite checks are re-run to set `assumptions_hold`.
pub fn check_intersection_condition(m: &Module2d) -> IntersectionReport {
    let assumptions_hold = check_commutativity(m).pass && check_injectivity_2d(m).pass;
    intersection_core(m, assumptions_hold).0
}

/// Extracts a homogeneous basis of a module satisfying all three criteria.
///
/// Runs commutativity, injectivity, and intersection checks in that order,
/// returning the first failure. On success, walks the window row-major:
/// coordinate vectors at the bottom-left degree, complements of the single
/// incoming map along the bottom row and left column, and complements of
/// the concatenated incoming maps at interior degrees.
///
/// The returned operation count totals the entry slots touched by every
/// elementary row operation performed — the injectivity and intersection
/// eliminations plus the extraction eliminations.
pub fn compute_basis_2d(m: &Module2d) -> Result<BasisComputation<(i64, i64)>, Basis2dError> {
    let commutativity = check_commutativity(m);
    if let Some(target) = commutativity.first_failure {
        return Err(Basis2dError::NotCommutativeAt(target));
    }
    let (injectivity, mut ops) = injectivity_with_ops(m);
    if let Some((source, direction)) = injectivity.first_failure {
        return Err(Basis2dError::NotInjectiveAt(source, direction));
    }
    let (intersection, intersection_ops) = intersection_core(m, true);
    ops += intersection_ops;
    if let Some(target) = intersection.first_failure {
        return Err(Basis2dError::IntersectionFailAt(target));
    }

    let window = m.window();
    let mut elements = Vec::new();
    for i in window.alpha()..=window.beta() {
        for j in window.gamma()..=window.delta() {
            if i == window.alpha() && j == window.gamma() {
                let identity = Matrix::identity(m.dim((i, j)));
                for c in 0..identity.cols() {
                    elements.push(DegreeElement {
                        degree: (i, j),
                        vector: identity.column(c),
                    });
                }
                continue;
            }
            let incoming = if j == window.gamma() {
                m.hmap((i - 1, j)).clone()
            } else if i == window.alpha() {
                m.vmap((i, j - 1)).clone()
            } else {
                m.hmap((i - 1, j))
                    .hconcat(m.vmap((i, j - 1)))
                    .expect("both maps target the same degree")
            };
            let (complement, complement_ops) = incoming.complement_columns_counted();
            ops += complement_ops;
            for c in 0..complement.cols() {
                elements.push(DegreeElement {
                    degree: (i, j),
                    vector: complement.column(c),
                });
            }
        }
    }

    Ok(BasisComputation {
        basis: GradedBasis { elements },
        ops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{betti_2d, gen_free_2d, verify_basis_2d};
    use crate::pmod::{Module2d, Window2d};
    use crate::ratmat::Rational;

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    /// 2x2 window, every dimension 1, every map multiplication by the given
    /// scalars: hmaps (bottom, top), vmaps (left, right).
    fn square_module(h_bottom: i64, h_top: i64, v_left: i64, v_right: i64) -> Module2d {
        Module2d::new(
            Window2d::new(0, 1, 0, 1).unwrap(),
            vec![vec![1, 1], vec![1, 1]],
            vec![vec![mat(&[&[h_bottom]]), mat(&[&[h_top]])]],
            vec![vec![mat(&[&[v_left]])], vec![mat(&[&[v_right]])]],
        )
        .unwrap()
    }

    fn hook_module() -> Module2d {
        Module2d::new(
            Window2d::new(0, 1, 0, 1).unwrap(),
            vec![vec![0, 1], vec![1, 1]],
            vec![vec![Matrix::zero(1, 0), mat(&[&[1]])]],
            vec![vec![Matrix::zero(1, 0)], vec![mat(&[&[1]])]],
        )
        .unwrap()
    }

    #[test]
    fn commutativity_verdicts() {
        assert!(check_commutativity(&square_module(1, 1, 1, 1)).pass);

        let twisted = square_module(1, 2, 1, 1);
        let report = check_commutativity(&twisted);
        assert!(!report.pass);
        assert_eq!(report.first_failure, Some((1, 1)));

        // A zero-dimensional corner makes the square vacuously commute.
        assert!(check_commutativity(&hook_module()).pass);
    }

    #[test]
    fn injectivity_verdicts() {
        assert!(check_injectivity_2d(&square_module(1, 1, 1, 1)).pass);
        // Maps out of a zero-dimensional piece are injective.
        assert!(check_injectivity_2d(&hook_module()).pass);

        let zeroed = square_module(0, 0, 1, 1);
        let report = check_injectivity_2d(&zeroed);
        assert!(!report.pass);
        assert_eq!(report.first_failure, Some(((0, 0), Direction::Horizontal)));
    }

    #[test]
    fn intersection_verdicts() {
        let report = check_intersection_condition(&square_module(1, 1, 1, 1));
        assert!(report.pass);
        assert!(report.assumptions_hold);
        assert_eq!(
            report.corners,
            vec![CornerCheck {
                target: (1, 1),
                rank: 1,
                expected: 1,
                holds: true,
            }]
        );

        let report = check_intersection_condition(&hook_module());
        assert!(!report.pass);
        assert!(report.assumptions_hold);
        assert_eq!(report.first_failure, Some((1, 1)));
        assert_eq!(report.corners[0].rank, 1);
        assert_eq!(report.corners[0].expected, 2);

        // Two generators at the origin: identity maps everywhere.
        let two = Module2d::new(
            Window2d::new(0, 1, 0, 1).unwrap(),
            vec![vec![2, 2], vec![2, 2]],
            vec![vec![Matrix::identity(2), Matrix::identity(2)]],
            vec![vec![Matrix::identity(2)], vec![Matrix::identity(2)]],
        )
        .unwrap();
        let report = check_intersection_condition(&two);
        assert!(report.pass);
        assert_eq!(report.corners[0].rank, 2);
        assert_eq!(report.corners[0].expected, 2);
    }

    #[test]
    fn unreliable_verdicts_are_flagged() {
        let report = check_intersection_condition(&square_module(0, 0, 1, 1));
        assert!(!report.assumptions_hold);
    }

    #[test]
    fn compute_reports_first_failing_check() {
        assert_eq!(
            compute_basis_2d(&square_module(1, 2, 1, 1)),
            Err(Basis2dError::NotCommutativeAt((1, 1)))
        );
        assert_eq!(
            compute_basis_2d(&square_module(0, 0, 1, 1)),
            Err(Basis2dError::NotInjectiveAt((0, 0), Direction::Horizontal))
        );
        assert_eq!(
            compute_basis_2d(&hook_module()),
            Err(Basis2dError::IntersectionFailAt((1, 1)))
        );
        assert_eq!(
            Basis2dError::IntersectionFailAt((1, 1)).to_string(),
            "IntersectionFailAt (1,1)"
        );
        assert_eq!(
            Basis2dError::NotInjectiveAt((0, 1), Direction::Horizontal).to_string(),
            "NotInjectiveAt (0,1) horizontal"
        );
    }

    #[test]
    fn one_generator_square_yields_one_element() {
        let result = compute_basis_2d(&square_module(1, 1, 1, 1)).unwrap();
        assert_eq!(result.basis.elements.len(), 1);
        assert_eq!(result.basis.elements[0].degree, (0, 0));
        assert_eq!(result.basis.elements[0].vector, vec![Rational::one()]);
    }

    #[test]
    fn two_generator_fixture_matches_expected_degrees() {
        let m = gen_free_2d(3, Window2d::new(0, 1, 0, 1).unwrap(), &[(0, 0), (1, 1)]);
        let result = compute_basis_2d(&m).unwrap();
        let degrees: Vec<(i64, i64)> = result.basis.elements.iter().map(|e| e.degree).collect();
        assert_eq!(degrees, vec![(0, 0), (1, 1)]);
        assert!(verify_basis_2d(&m, &result.basis));
    }

    #[test]
    fn degenerate_single_row_window_behaves_like_a_line() {
        // One row: only horizontal maps, extraction reduces to the 1D rule.
        let m = Module2d::new(
            Window2d::new(0, 2, 5, 5).unwrap(),
            vec![vec![1], vec![2], vec![2]],
            vec![vec![mat(&[&[1], &[0]])], vec![Matrix::identity(2)]],
            vec![vec![], vec![], vec![]],
        )
        .unwrap();
        let result = compute_basis_2d(&m).unwrap();
        let degrees: Vec<(i64, i64)> = result.basis.elements.iter().map(|e| e.degree).collect();
        assert_eq!(degrees, vec![(0, 5), (1, 5)]);
        assert!(verify_basis_2d(&m, &result.basis));
    }

    #[test]
    fn random_free_fixtures_verify_and_count() {
        for seed in 0..8 {
            let window = Window2d::new(0, 2, -1, 1).unwrap();
            let gens = [(0, -1), (0, -1), (1, 0), (2, 1)];
            let m = gen_free_2d(seed, window, &gens);
            assert!(check_commutativity(&m).pass, "conjugation keeps squares");
            let result = compute_basis_2d(&m).expect("free fixtures pass the criteria");
            assert!(verify_basis_2d(&m, &result.basis));
            for d in window.degrees() {
                let count = result
                    .basis
                    .elements
                    .iter()
                    .filter(|e| e.degree == d)
                    .count();
                assert_eq!(count, betti_2d(&m, d).unwrap(), "seed {seed} degree {d:?}");
                let cumulative: usize = result
                    .basis
                    .elements
                    .iter()
                    .filter(|e| e.degree.0 <= d.0 && e.degree.1 <= d.1)
                    .count();
                assert_eq!(cumulative, m.dim(d), "dimension identity at {d:?}");
            }
        }
    }
}

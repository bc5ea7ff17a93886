//! Brute-force reference computations and random free-module fixtures.
//!
//! Everything here is defined straight from first principles with rank
//! tests, independently of the extraction algorithms in [`crate::basis1d`]
//! and [`crate::basis2d`], so the two sides can be checked against each
//! other:
//!
//! - the decomposable subspace at a degree is the span of the images of all
//!   incoming structure maps, and the Betti count is its codimension;
//! - a birth set records at which lower degrees an element has a preimage;
//! - a proposed basis is verified by degreewise invertibility of the matrix
//!   of shifted basis images;
//! - [`gen_free_1d`] / [`gen_free_2d`] build literal free modules on chosen
//!   generator degrees and disguise them by conjugating every graded piece
//!   with a random invertible rational matrix, deterministically in the seed.

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::pmod::{DegreeElement, GradedBasis, Module1d, Module2d, Window1d, Window2d};
use crate::ratmat::{Matrix, Rational};

/// Errors for element-level oracle queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The element's degree lies outside the module window.
    DegreeOutOfWindow,
    /// The element's vector length does not match the dimension at its degree.
    ElementShape { expected: usize, found: usize },
    /// `represent` was called with a list that fails basis verification.
    BasisInvalid(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::DegreeOutOfWindow => write!(f, "DegreeOutOfWindow"),
            OracleError::ElementShape { expected, found } => {
                write!(f, "element vector has length {found}, expected {expected}")
            }
            OracleError::BasisInvalid(reason) => write!(f, "BasisInvalid: {reason}"),
        }
    }
}

impl std::error::Error for OracleError {}

fn check_element_1d(m: &Module1d, x: &DegreeElement<i64>) -> Result<(), OracleError> {
    if !m.window().contains(x.degree) {
        return Err(OracleError::DegreeOutOfWindow);
    }
    let expected = m.dim(x.degree);
    if x.vector.len() != expected {
        return Err(OracleError::ElementShape {
            expected,
            found: x.vector.len(),
        });
    }
    Ok(())
}

fn check_element_2d(m: &Module2d, x: &DegreeElement<(i64, i64)>) -> Result<(), OracleError> {
    if !m.window().contains(x.degree) {
        return Err(OracleError::DegreeOutOfWindow);
    }
    let expected = m.dim(x.degree);
    if x.vector.len() != expected {
        return Err(OracleError::ElementShape {
            expected,
            found: x.vector.len(),
        });
    }
    Ok(())
}

/// Concatenation of all structure maps arriving at `degree` from one step
/// below; `None` when there is no incoming map (the window minimum).
fn incoming_1d(m: &Module1d, degree: i64) -> Option<Matrix> {
    if degree == m.window().alpha() {
        None
    } else {
        Some(m.map(degree - 1).clone())
    }
}

fn incoming_2d(m: &Module2d, degree: (i64, i64)) -> Option<Matrix> {
    let (i, j) = degree;
    let window = m.window();
    let from_left = (i > window.alpha()).then(|| m.hmap((i - 1, j)).clone());
    let from_below = (j > window.gamma()).then(|| m.vmap((i, j - 1)).clone());
    match (from_left, from_below) {
        (Some(h), Some(v)) => Some(h.hconcat(&v).expect("equal target dimension")),
        (Some(h), None) => Some(h),
        (None, Some(v)) => Some(v),
        (None, None) => None,
    }
}

/// Dimension of the decomposable subspace at `degree`: the span of the
/// images of all incoming structure maps.
pub fn decomposable_dim_1d(m: &Module1d, degree: i64) -> Result<usize, OracleError> {
    if !m.window().contains(degree) {
        return Err(OracleError::DegreeOutOfWindow);
    }
    Ok(incoming_1d(m, degree).map_or(0, |a| a.rank()))
}

pub fn decomposable_dim_2d(m: &Module2d, degree: (i64, i64)) -> Result<usize, OracleError> {
    if !m.window().contains(degree) {
        return Err(OracleError::DegreeOutOfWindow);
    }
    Ok(incoming_2d(m, degree).map_or(0, |a| a.rank()))
}

/// Betti count at `degree`: how many new generators are born there,
/// `dim - decomposable_dim`.
pub fn betti_1d(m: &Module1d, degree: i64) -> Result<usize, OracleError> {
    Ok(m.dim(degree) - decomposable_dim_1d(m, degree)?)
}

pub fn betti_2d(m: &Module2d, degree: (i64, i64)) -> Result<usize, OracleError> {
    Ok(m.dim(degree) - decomposable_dim_2d(m, degree)?)
}

/// Membership of `x.vector` in the column space of `maps` by the rank test
/// rank(maps) == rank(maps | x).
fn in_column_space(maps: Option<&Matrix>, vector: &[Rational]) -> bool {
    match maps {
        None => vector.iter().all(Rational::is_zero),
        Some(a) => {
            let augmented = a
                .hconcat(&Matrix::from_column(vector.to_vec()))
                .expect("vector length matches target dimension");
            a.rank() == augmented.rank()
        }
    }
}

/// True when `x` already lies in the decomposable subspace at its degree.
pub fn is_decomposable_1d(m: &Module1d, x: &DegreeElement<i64>) -> Result<bool, OracleError> {
    check_element_1d(m, x)?;
    Ok(in_column_space(
        incoming_1d(m, x.degree).as_ref(),
        &x.vector,
    ))
}

pub fn is_decomposable_2d(
    m: &Module2d,
    x: &DegreeElement<(i64, i64)>,
) -> Result<bool, OracleError> {
    check_element_2d(m, x)?;
    Ok(in_column_space(
        incoming_2d(m, x.degree).as_ref(),
        &x.vector,
    ))
}

/// Minimal degrees (within the window) at which `x` has a preimage under the
/// composite structure maps. For an interval index this is one degree; under
/// the 2D freeness criteria it is also one degree, while failing modules can
/// produce several incomparable ones.
pub fn birth_set_minimals_1d(
    m: &Module1d,
    x: &DegreeElement<i64>,
) -> Result<Vec<i64>, OracleError> {
    check_element_1d(m, x)?;
    let mut birth = x.degree;
    for l in (m.window().alpha()..x.degree).rev() {
        let composite = m.composite_map(l, x.degree).expect("degrees in window");
        if in_column_space(Some(&composite), &x.vector) {
            birth = l;
        } else {
            break;
        }
    }
    Ok(vec![birth])
}

pub fn birth_set_minimals_2d(
    m: &Module2d,
    x: &DegreeElement<(i64, i64)>,
) -> Result<Vec<(i64, i64)>, OracleError> {
    check_element_2d(m, x)?;
    let window = m.window();
    let (xi, xj) = x.degree;
    let mut birth_set = Vec::new();
    for i in window.alpha()..=xi {
        for j in window.gamma()..=xj {
            let composite = m
                .composite_map((i, j), x.degree)
                .expect("degrees in window");
            if in_column_space(Some(&composite), &x.vector) {
                birth_set.push((i, j));
            }
        }
    }
    let minimals: Vec<(i64, i64)> = birth_set
        .iter()
        .copied()
        .filter(|&(i, j)| {
            !birth_set
                .iter()
                .any(|&(pi, pj)| pi <= i && pj <= j && (pi, pj) != (i, j))
        })
        .collect();
    Ok(minimals)
}

/// Outcome of a detailed basis verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome<D> {
    Ok,
    /// An element is unusable before any degree is examined.
    MalformedElement {
        index: usize,
        reason: String,
    },
    /// At this degree the shifted basis images fail to be a square
    /// invertible system.
    DegreeFailure {
        degree: D,
        reason: String,
    },
}

impl<D: fmt::Debug> fmt::Display for VerifyOutcome<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyOutcome::Ok => write!(f, "basis verified"),
            VerifyOutcome::MalformedElement { index, reason } => {
                write!(f, "element {index} malformed: {reason}")
            }
            VerifyOutcome::DegreeFailure { degree, reason } => {
                write!(f, "failure at degree {degree:?}: {reason}")
            }
        }
    }
}

impl<D> VerifyOutcome<D> {
    pub fn is_ok(&self) -> bool {
        matches!(self, VerifyOutcome::Ok)
    }
}

/// Matrix whose columns are the images at `target` of all basis elements of
/// degree <= `target`, in basis order. `None` if some composite is
/// unavailable (never happens for in-window degrees).
fn shifted_images_1d(m: &Module1d, basis: &GradedBasis<i64>, target: i64) -> Matrix {
    let mut columns = Matrix::zero(m.dim(target), 0);
    for e in &basis.elements {
        if e.degree <= target {
            let composite = m
                .composite_map(e.degree, target)
                .expect("degrees in window");
            let image = composite.mul_vec(&e.vector);
            columns = columns
                .hconcat(&Matrix::from_column(image))
                .expect("image lives at target degree");
        }
    }
    columns
}

fn shifted_images_2d(m: &Module2d, basis: &GradedBasis<(i64, i64)>, target: (i64, i64)) -> Matrix {
    let mut columns = Matrix::zero(m.dim(target), 0);
    for e in &basis.elements {
        if e.degree.0 <= target.0 && e.degree.1 <= target.1 {
            let composite = m
                .composite_map(e.degree, target)
                .expect("degrees in window");
            let image = composite.mul_vec(&e.vector);
            columns = columns
                .hconcat(&Matrix::from_column(image))
                .expect("image lives at target degree");
        }
    }
    columns
}

fn malformed<D>(index: usize, reason: String) -> VerifyOutcome<D> {
    VerifyOutcome::MalformedElement { index, reason }
}

/// Detailed basis verification: at every window degree the matrix of shifted
/// images of the basis elements at or below it must be square of the graded
/// dimension and invertible. This checks degreewise spanning and
/// independence at once.
pub fn verify_basis_1d_report(m: &Module1d, basis: &GradedBasis<i64>) -> VerifyOutcome<i64> {
    for (idx, e) in basis.elements.iter().enumerate() {
        if !m.window().contains(e.degree) {
            return malformed(idx, format!("degree {} outside window", e.degree));
        }
        if e.vector.len() != m.dim(e.degree) {
            return malformed(
                idx,
                format!(
                    "vector length {} but dimension at degree {} is {}",
                    e.vector.len(),
                    e.degree,
                    m.dim(e.degree)
                ),
            );
        }
        if e.vector.iter().all(Rational::is_zero) {
            return malformed(idx, "zero vector".to_string());
        }
    }
    for degree in m.window().degrees() {
        let images = shifted_images_1d(m, basis, degree);
        let expected = m.dim(degree);
        if images.cols() != expected {
            return VerifyOutcome::DegreeFailure {
                degree,
                reason: format!("{} images for dimension {expected}", images.cols()),
            };
        }
        if images.rank() != expected {
            return VerifyOutcome::DegreeFailure {
                degree,
                reason: "images are linearly dependent".to_string(),
            };
        }
    }
    VerifyOutcome::Ok
}

pub fn verify_basis_2d_report(
    m: &Module2d,
    basis: &GradedBasis<(i64, i64)>,
) -> VerifyOutcome<(i64, i64)> {
    for (idx, e) in basis.elements.iter().enumerate() {
        if !m.window().contains(e.degree) {
            return malformed(idx, format!("degree {:?} outside window", e.degree));
        }
        if e.vector.len() != m.dim(e.degree) {
            return malformed(
                idx,
                format!(
                    "vector length {} but dimension at degree {:?} is {}",
                    e.vector.len(),
                    e.degree,
                    m.dim(e.degree)
                ),
            );
        }
        if e.vector.iter().all(Rational::is_zero) {
            return malformed(idx, "zero vector".to_string());
        }
    }
    for degree in m.window().degrees() {
        let images = shifted_images_2d(m, basis, degree);
        let expected = m.dim(degree);
        if images.cols() != expected {
            return VerifyOutcome::DegreeFailure {
                degree,
                reason: format!("{} images for dimension {expected}", images.cols()),
            };
        }
        if images.rank() != expected {
            return VerifyOutcome::DegreeFailure {
                degree,
                reason: "images are linearly dependent".to_string(),
            };
        }
    }
    VerifyOutcome::Ok
}

/// True iff `basis` is a homogeneous basis of `m`.
pub fn verify_basis_1d(m: &Module1d, basis: &GradedBasis<i64>) -> bool {
    verify_basis_1d_report(m, basis).is_ok()
}

pub fn verify_basis_2d(m: &Module2d, basis: &GradedBasis<(i64, i64)>) -> bool {
    verify_basis_2d_report(m, basis).is_ok()
}

/// Unique coefficients expressing `x` over the shifted images of the basis
/// elements of degree <= deg(x), in basis order. Requires a verified basis.
pub fn represent_1d(
    m: &Module1d,
    basis: &GradedBasis<i64>,
    x: &DegreeElement<i64>,
) -> Result<Vec<Rational>, OracleError> {
    let report = verify_basis_1d_report(m, basis);
    if !report.is_ok() {
        return Err(OracleError::BasisInvalid(report.to_string()));
    }
    check_element_1d(m, x)?;
    let images = shifted_images_1d(m, basis, x.degree);
    // Verification guarantees the system is square and invertible.
    let solution = images
        .inverse()
        .expect("verified basis gives an invertible system")
        .mul_vec(&x.vector);
    Ok(solution)
}

pub fn represent_2d(
    m: &Module2d,
    basis: &GradedBasis<(i64, i64)>,
    x: &DegreeElement<(i64, i64)>,
) -> Result<Vec<Rational>, OracleError> {
    let report = verify_basis_2d_report(m, basis);
    if !report.is_ok() {
        return Err(OracleError::BasisInvalid(report.to_string()));
    }
    check_element_2d(m, x)?;
    let images = shifted_images_2d(m, basis, x.degree);
    let solution = images
        .inverse()
        .expect("verified basis gives an invertible system")
        .mul_vec(&x.vector);
    Ok(solution)
}

/// Draws a `d x d` invertible matrix with entry numerators in [-9, 9] and
/// denominators in [1, 9], resampling until invertible.
fn random_invertible(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    if d == 0 {
        return Matrix::zero(0, 0);
    }
    loop {
        let mut m = Matrix::zero(d, d);
        for r in 0..d {
            for c in 0..d {
                let num = rng.gen_range(-9i64..=9);
                let den = rng.gen_range(1i64..=9);
                m.set(r, c, Rational::new(num, den));
            }
        }
        if m.rank() == d {
            return m;
        }
    }
}

/// Deterministic free-module fixture on an interval window.
///
/// Builds the literal free module whose graded dimension at degree `i`
/// counts the generators at or below `i`, with coordinate-inclusion
/// structure maps; then conjugates each graded piece by a random invertible
/// matrix so the free structure is no longer visible in the coordinates.
/// Panics if a generator degree lies outside the window.
pub fn gen_free_1d(seed: u64, window: Window1d, generators: &[i64]) -> Module1d {
    for &g in generators {
        assert!(window.contains(g), "generator degree {g} outside window");
    }
    let mut gens = generators.to_vec();
    gens.sort();

    let dims: Vec<usize> = window
        .degrees()
        .map(|d| gens.iter().filter(|&&g| g <= d).count())
        .collect();

    // Literal inclusion maps: generator k keeps its index because gens is
    // sorted, so each map is the identity block on the already-present
    // generators padded with zero rows for the newly born ones.
    let mut plain_maps = Vec::new();
    for k in 0..window.len() - 1 {
        let (rows, cols) = (dims[k + 1], dims[k]);
        let mut a = Matrix::zero(rows, cols);
        for c in 0..cols {
            a.set(c, c, Rational::one());
        }
        plain_maps.push(a);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conjugators: Vec<Matrix> = dims
        .iter()
        .map(|&d| random_invertible(&mut rng, d))
        .collect();

    let maps: Vec<Matrix> = plain_maps
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let inv = conjugators[k].inverse().expect("conjugator is invertible");
            conjugators[k + 1]
                .matmul(a)
                .and_then(|m| m.matmul(&inv))
                .expect("shapes agree")
        })
        .collect();

    Module1d::new(window, dims, maps).expect("constructed shapes are consistent")
}

/// Deterministic free-module fixture on a rectangle window; see
/// [`gen_free_1d`]. Commutativity is preserved because both maps of every
/// square are conjugated consistently with their endpoints.
pub fn gen_free_2d(seed: u64, window: Window2d, generators: &[(i64, i64)]) -> Module2d {
    for &g in generators {
        assert!(window.contains(g), "generator degree {g:?} outside window");
    }
    let mut gens = generators.to_vec();
    gens.sort();

    let (w, h) = (window.width(), window.height());
    let count_below =
        |i: i64, j: i64| -> usize { gens.iter().filter(|&&(gi, gj)| gi <= i && gj <= j).count() };
    let dims: Vec<Vec<usize>> = (window.alpha()..=window.beta())
        .map(|i| {
            (window.gamma()..=window.delta())
                .map(|j| count_below(i, j))
                .collect()
        })
        .collect();

    // In the literal free module the basis of each graded piece is the list
    // of generators at or below that degree, ordered as in the sorted `gens`
    // list; each structure map sends a generator coordinate to itself.
    let basis_at = |i: i64, j: i64| -> Vec<usize> {
        gens.iter()
            .enumerate()
            .filter(|&(_, &(gi, gj))| gi <= i && gj <= j)
            .map(|(idx, _)| idx)
            .collect()
    };
    let inclusion = |from: (i64, i64), to: (i64, i64)| -> Matrix {
        let source = basis_at(from.0, from.1);
        let target = basis_at(to.0, to.1);
        let mut a = Matrix::zero(target.len(), source.len());
        for (col, gen_idx) in source.iter().enumerate() {
            let row = target
                .iter()
                .position(|t| t == gen_idx)
                .expect("upward inclusion keeps generators");
            a.set(row, col, Rational::one());
        }
        a
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conjugators: Vec<Vec<Matrix>> = (0..w)
        .map(|ii| {
            (0..h)
                .map(|jj| random_invertible(&mut rng, dims[ii][jj]))
                .collect()
        })
        .collect();
    let conj = |i: i64, j: i64| -> &Matrix {
        &conjugators[(i - window.alpha()) as usize][(j - window.gamma()) as usize]
    };

    let mut hmaps = Vec::new();
    for i in window.alpha()..window.beta() {
        let mut col = Vec::new();
        for j in window.gamma()..=window.delta() {
            let plain = inclusion((i, j), (i + 1, j));
            let inv = conj(i, j).inverse().expect("conjugator is invertible");
            col.push(
                conj(i + 1, j)
                    .matmul(&plain)
                    .and_then(|m| m.matmul(&inv))
                    .expect("shapes agree"),
            );
        }
        hmaps.push(col);
    }
    let mut vmaps = Vec::new();
    for i in window.alpha()..=window.beta() {
        let mut col = Vec::new();
        for j in window.gamma()..window.delta() {
            let plain = inclusion((i, j), (i, j + 1));
            let inv = conj(i, j).inverse().expect("conjugator is invertible");
            col.push(
                conj(i, j + 1)
                    .matmul(&plain)
                    .and_then(|m| m.matmul(&inv))
                    .expect("shapes agree"),
            );
        }
        vmaps.push(col);
    }

    Module2d::new(window, dims, hmaps, vmaps).expect("constructed shapes are consistent")
}

//! Data model for persistence modules on finite index windows.
//!
//! A 1D module stores dimensions `d_i` on a closed interval `[alpha, beta]`
//! and structure maps `A_i : M_i -> M_{i+1}` on its interior edges. A 2D
//! module stores dimensions on a closed rectangle and horizontal/vertical
//! maps on the grid edges. Outside the window the module is zero below and
//! stabilized by isomorphisms above; those are conventions of the model, not
//! stored data.
//!
//! Construction validates every shape, so a value of these types is always
//! internally consistent. Serialization lives in this module too; the wire
//! format is canonical JSON (see [`serialize_module`]) and satisfies
//! `parse(serialize(m)) == m` exactly.

mod io;

use std::fmt;

use crate::ratmat::{Matrix, MatrixError};

pub use io::{
    parse_basis_1d, parse_basis_2d, parse_module, serialize_basis_1d, serialize_basis_2d,
    serialize_module, serialize_module_1d, serialize_module_2d, ParseError,
};

/// A validation failure, with the offending location in the message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError(pub String);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ValidationError: {}", self.0)
    }
}

impl std::error::Error for ValidationError {}

/// Degree arguments outside the stored window, or a non-monotone pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeError {
    OutOfWindow,
    NotIncreasing,
}

impl fmt::Display for DegreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeError::OutOfWindow => write!(f, "DegreeOutOfWindow"),
            DegreeError::NotIncreasing => write!(f, "degrees are not increasing"),
        }
    }
}

impl std::error::Error for DegreeError {}

/// Closed integer interval `[alpha, beta]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window1d {
    alpha: i64,
    beta: i64,
}

impl Window1d {
    pub fn new(alpha: i64, beta: i64) -> Result<Self, ValidationError> {
        if alpha > beta {
            return Err(ValidationError(format!(
                "window [{alpha}, {beta}] has alpha > beta"
            )));
        }
        Ok(Window1d { alpha, beta })
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    /// Number of degrees in the window. Never zero: construction requires
    /// `alpha <= beta`, so every window holds at least one degree.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        (self.beta - self.alpha + 1) as usize
    }

    pub fn contains(&self, d: i64) -> bool {
        self.alpha <= d && d <= self.beta
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.alpha..=self.beta
    }

    fn offset(&self, d: i64) -> usize {
        debug_assert!(self.contains(d));
        (d - self.alpha) as usize
    }
}

/// Persistence module indexed by a closed integer interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module1d {
    window: Window1d,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl Module1d {
    /// Validates counts and shapes: `dims` has one entry per window degree
    /// and `maps[k]` is the map out of degree `alpha + k`, of shape
    /// `dims[k+1] x dims[k]`.
    pub fn new(
        window: Window1d,
        dims: Vec<usize>,
        maps: Vec<Matrix>,
    ) -> Result<Self, ValidationError> {
        if dims.len() != window.len() {
            return Err(ValidationError(format!(
                "expected {} dims for window [{}, {}], found {}",
                window.len(),
                window.alpha,
                window.beta,
                dims.len()
            )));
        }
        if maps.len() + 1 != window.len() {
            return Err(ValidationError(format!(
                "expected {} maps for window [{}, {}], found {}",
                window.len() - 1,
                window.alpha,
                window.beta,
                maps.len()
            )));
        }
        for (k, map) in maps.iter().enumerate() {
            let expected = (dims[k + 1], dims[k]);
            if (map.rows(), map.cols()) != expected {
                return Err(ValidationError(format!(
                    "map at degree {} has shape {}x{}, expected {}x{}",
                    window.alpha + k as i64,
                    map.rows(),
                    map.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        Ok(Module1d { window, dims, maps })
    }

    pub fn window(&self) -> Window1d {
        self.window
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension at a window degree. Panics outside the window.
    pub fn dim(&self, d: i64) -> usize {
        assert!(self.window.contains(d), "degree {d} outside window");
        self.dims[self.window.offset(d)]
    }

    /// Structure map out of `source` (into `source + 1`). Panics unless
    /// `alpha <= source < beta`.
    pub fn map(&self, source: i64) -> &Matrix {
        assert!(
            self.window.contains(source) && source < self.window.beta,
            "no stored map out of degree {source}"
        );
        &self.maps[self.window.offset(source)]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(0)
    }

    /// Product of the structure maps from `from` up to `to`, the identity
    /// when they coincide.
    pub fn composite_map(&self, from: i64, to: i64) -> Result<Matrix, DegreeError> {
        if !self.window.contains(from) || !self.window.contains(to) {
            return Err(DegreeError::OutOfWindow);
        }
        if from > to {
            return Err(DegreeError::NotIncreasing);
        }
        let mut acc = Matrix::identity(self.dim(from));
        for i in from..to {
            acc = self.map(i).matmul(&acc).expect("validated shapes compose");
        }
        Ok(acc)
    }
}

/// Closed integer rectangle `[alpha, beta] x [gamma, delta]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window2d {
    alpha: i64,
    beta: i64,
    gamma: i64,
    delta: i64,
}

impl Window2d {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self, ValidationError> {
        if alpha > beta || gamma > delta {
            return Err(ValidationError(format!(
                "window [{alpha}, {beta}] x [{gamma}, {delta}] is inverted"
            )));
        }
        Ok(Window2d {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    pub fn gamma(&self) -> i64 {
        self.gamma
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Degrees along the first axis.
    pub fn width(&self) -> usize {
        (self.beta - self.alpha + 1) as usize
    }

    /// Degrees along the second axis.
    pub fn height(&self) -> usize {
        (self.delta - self.gamma + 1) as usize
    }

    pub fn contains(&self, p: (i64, i64)) -> bool {
        self.alpha <= p.0 && p.0 <= self.beta && self.gamma <= p.1 && p.1 <= self.delta
    }

    /// All window degrees, first axis outermost.
    pub fn degrees(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.alpha..=self.beta).flat_map(move |i| (self.gamma..=self.delta).map(move |j| (i, j)))
    }

    fn offsets(&self, p: (i64, i64)) -> (usize, usize) {
        debug_assert!(self.contains(p));
        ((p.0 - self.alpha) as usize, (p.1 - self.gamma) as usize)
    }
}

/// Persistence module indexed by a closed integer rectangle.
///
/// `hmap(i, j)` is the horizontal map `M_{i,j} -> M_{i+1,j}` and `vmap(i, j)`
/// the vertical map `M_{i,j} -> M_{i,j+1}`; both are keyed by their source
/// degree. Commutativity of the squares is a property checked separately,
/// not a construction invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module2d {
    window: Window2d,
    dims: Vec<Vec<usize>>,
    hmaps: Vec<Vec<Matrix>>,
    vmaps: Vec<Vec<Matrix>>,
}

impl Module2d {
    /// Validates the grids: `dims[i - alpha][j - gamma]` covers the window,
    /// `hmaps` covers sources with `i < beta`, `vmaps` covers sources with
    /// `j < delta`, and every map has the shape its endpoints dictate.
    pub fn new(
        window: Window2d,
        dims: Vec<Vec<usize>>,
        hmaps: Vec<Vec<Matrix>>,
        vmaps: Vec<Vec<Matrix>>,
    ) -> Result<Self, ValidationError> {
        let (w, h) = (window.width(), window.height());
        if dims.len() != w || dims.iter().any(|col| col.len() != h) {
            return Err(ValidationError(format!(
                "dims grid must be {w} x {h} for window [{}, {}] x [{}, {}]",
                window.alpha, window.beta, window.gamma, window.delta
            )));
        }
        if hmaps.len() != w - 1 || hmaps.iter().any(|col| col.len() != h) {
            return Err(ValidationError(format!(
                "hmaps grid must be {} x {h}",
                w - 1
            )));
        }
        if vmaps.len() != w || vmaps.iter().any(|col| col.len() != h - 1) {
            return Err(ValidationError(format!(
                "vmaps grid must be {w} x {}",
                h - 1
            )));
        }
        for ii in 0..w - 1 {
            for jj in 0..h {
                let map = &hmaps[ii][jj];
                let expected = (dims[ii + 1][jj], dims[ii][jj]);
                if (map.rows(), map.cols()) != expected {
                    return Err(ValidationError(format!(
                        "hmap at ({}, {}) has shape {}x{}, expected {}x{}",
                        window.alpha + ii as i64,
                        window.gamma + jj as i64,
                        map.rows(),
                        map.cols(),
                        expected.0,
                        expected.1
                    )));
                }
            }
        }
        for ii in 0..w {
            for jj in 0..h - 1 {
                let map = &vmaps[ii][jj];
                let expected = (dims[ii][jj + 1], dims[ii][jj]);
                if (map.rows(), map.cols()) != expected {
                    return Err(ValidationError(format!(
                        "vmap at ({}, {}) has shape {}x{}, expected {}x{}",
                        window.alpha + ii as i64,
                        window.gamma + jj as i64,
                        map.rows(),
                        map.cols(),
                        expected.0,
                        expected.1
                    )));
                }
            }
        }
        Ok(Module2d {
            window,
            dims,
            hmaps,
            vmaps,
        })
    }

    pub fn window(&self) -> Window2d {
        self.window
    }

    /// Dimension at a window degree. Panics outside the window.
    pub fn dim(&self, p: (i64, i64)) -> usize {
        assert!(self.window.contains(p), "degree {p:?} outside window");
        let (ii, jj) = self.window.offsets(p);
        self.dims[ii][jj]
    }

    /// Horizontal map out of `source`. Panics unless `source.0 < beta`.
    pub fn hmap(&self, source: (i64, i64)) -> &Matrix {
        assert!(
            self.window.contains(source) && source.0 < self.window.beta,
            "no stored hmap out of {source:?}"
        );
        let (ii, jj) = self.window.offsets(source);
        &self.hmaps[ii][jj]
    }

    /// Vertical map out of `source`. Panics unless `source.1 < delta`.
    pub fn vmap(&self, source: (i64, i64)) -> &Matrix {
        assert!(
            self.window.contains(source) && source.1 < self.window.delta,
            "no stored vmap out of {source:?}"
        );
        let (ii, jj) = self.window.offsets(source);
        &self.vmaps[ii][jj]
    }

    pub fn max_dim(&self) -> usize {
        self.dims
            .iter()
            .flat_map(|col| col.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Composite along the staircase path that first moves horizontally at
    /// the source height, then vertically at the target column. All monotone
    /// paths agree exactly when the module commutes; this function does not
    /// check that.
    pub fn composite_map(&self, from: (i64, i64), to: (i64, i64)) -> Result<Matrix, DegreeError> {
        if !self.window.contains(from) || !self.window.contains(to) {
            return Err(DegreeError::OutOfWindow);
        }
        if from.0 > to.0 || from.1 > to.1 {
            return Err(DegreeError::NotIncreasing);
        }
        let mut acc = Matrix::identity(self.dim(from));
        for i in from.0..to.0 {
            acc = self
                .hmap((i, from.1))
                .matmul(&acc)
                .expect("validated shapes compose");
        }
        for j in from.1..to.1 {
            acc = self
                .vmap((to.0, j))
                .matmul(&acc)
                .expect("validated shapes compose");
        }
        Ok(acc)
    }
}

/// One homogeneous element: a coordinate vector sitting at a degree.
///
/// `D` is `i64` for interval-indexed modules and `(i64, i64)` for
/// rectangle-indexed ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeElement<D> {
    pub degree: D,
    pub vector: Vec<crate::ratmat::Rational>,
}

/// An ordered list of homogeneous elements proposed as a module basis.
///
/// Whether it actually is one is decided by `oracle::verify_basis_*`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GradedBasis<D> {
    pub elements: Vec<DegreeElement<D>>,
}

/// A parsed module of either index kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Module {
    One(Module1d),
    Two(Module2d),
}

/// Output of a basis computation: the basis plus the elimination work
/// (entry slots touched by row operations) spent extracting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisComputation<D> {
    pub basis: GradedBasis<D>,
    pub ops: u64,
}

impl From<MatrixError> for ValidationError {
    fn from(e: MatrixError) -> Self {
        ValidationError(e.to_string())
    }
}

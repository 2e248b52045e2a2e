use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform grid of `n` nodes on [x_min, x_max], endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D<T> {
    x_min: T,
    x_max: T,
    n: usize,
}

pub const MIN_POINTS: usize = 16;
pub const MAX_POINTS: usize = 4096;
pub const DEFAULT_POINTS: usize = 1024;
pub const DEFAULT_HALF_WIDTH: f64 = 16.0;

impl<T: Real> Grid1D<T> {
    pub fn new(x_min: T, x_max: T, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidParameter {
                name: "grid",
                value: (x_max - x_min).as_f64(),
                constraint: "need finite x_min < x_max",
            });
        }
        if !(MIN_POINTS..=MAX_POINTS).contains(&n) {
            return Err(Error::InvalidParameter {
                name: "n_points",
                value: n as f64,
                constraint: "grid size must lie in 16..=4096",
            });
        }
        Ok(Self { x_min, x_max, n })
    }

    /// Grid on [−half_width, half_width].
    pub fn symmetric(half_width: T, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    /// [−16, 16] with 1024 nodes.
    pub fn default_grid() -> Self {
        Self::with_points(DEFAULT_POINTS).expect("default grid is valid")
    }

    /// Default extent with a custom node count.
    pub fn with_points(n: usize) -> Result<Self> {
        Self::symmetric(T::lit(DEFAULT_HALF_WIDTH), n)
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize_lossy(self.n - 1)
    }

    #[inline]
    pub fn point(&self, i: usize) -> T {
        self.x_min + self.spacing() * T::from_usize_lossy(i)
    }

    pub fn points(&self) -> Vec<T> {
        let h = self.spacing();
        (0..self.n).map(|i| self.x_min + h * T::from_usize_lossy(i)).collect()
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.x_min && x <= self.x_max
    }

    /// Composite trapezoid rule over the nodes.
    pub fn integrate(&self, values: &[T]) -> T {
        debug_assert_eq!(values.len(), self.n);
        let inner: T = values[1..self.n - 1].iter().copied().sum();
        self.spacing() * (inner + T::lit(0.5) * (values[0] + values[self.n - 1]))
    }

    /// Same grid with twice as many intervals.
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.x_min, self.x_max, 2 * self.n - 1)
    }
}

//! Synthetic training scenes: two identical circular Gaussian humps
//! superposed on a wrapped 1-D axis, with either independent or correlated
//! object positions.
//!
//! The position support is finite (positions are integers in `[1, dim]`),
//! so the full distribution can be enumerated exactly and expectations over
//! it are plain weighted sums.

use rand::Rng;

use crate::chain::WeightedDataset;
use crate::error::SvqError;

/// How the two object positions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneMode {
    /// Both positions i.i.d. uniform on `[1, dim]`.
    Independent,
    /// First position uniform; the second offset from it by a uniform
    /// integer separation inside the configured range, wrapping circularly.
    Correlated,
}

/// Geometry and statistics of the synthetic scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    dim: usize,
    half_width: f64,
    amplitude: f64,
    mode: SceneMode,
    sep_min: usize,
    sep_max: usize,
}

/// Circular distance between two positions on a `dim`-point ring.
pub fn circular_distance(dim: usize, a: usize, b: usize) -> usize {
    let diff = a.abs_diff(b) % dim;
    diff.min(dim - diff)
}

impl SceneConfig {
    /// Default hump half-width (treated as the Gaussian sigma).
    pub const DEFAULT_HALF_WIDTH: f64 = 1.5;
    /// Default peak amplitude of one hump.
    pub const DEFAULT_AMPLITUDE: f64 = 1.0;
    /// Default input dimensionality.
    pub const DEFAULT_DIM: usize = 24;
    /// Default correlated-mode separation interval.
    pub const DEFAULT_SEPARATION: (usize, usize) = (4, 8);

    pub fn new(
        dim: usize,
        half_width: f64,
        amplitude: f64,
        mode: SceneMode,
        separation: (usize, usize),
    ) -> Result<Self, SvqError> {
        if dim < 2 {
            return Err(SvqError::invalid("scene dimension must be at least 2"));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(SvqError::invalid("half_width must be positive"));
        }
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(SvqError::invalid("amplitude must be positive"));
        }
        let (sep_min, sep_max) = separation;
        if mode == SceneMode::Correlated && (sep_min > sep_max || sep_min < 1 || sep_max > dim - 1)
        {
            return Err(SvqError::invalid(format!(
                "correlated separation range [{sep_min}, {sep_max}] must be non-empty and inside [1, {}]",
                dim - 1
            )));
        }
        Ok(SceneConfig {
            dim,
            half_width,
            amplitude,
            mode,
            sep_min,
            sep_max,
        })
    }

    /// The scene used throughout the bundled experiments: 24 components,
    /// half-width 1.5, unit amplitude.
    pub fn standard(mode: SceneMode) -> Self {
        SceneConfig::new(
            Self::DEFAULT_DIM,
            Self::DEFAULT_HALF_WIDTH,
            Self::DEFAULT_AMPLITUDE,
            mode,
            Self::DEFAULT_SEPARATION,
        )
        .expect("standard scene parameters are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn mode(&self) -> SceneMode {
        self.mode
    }

    /// Inclusive separation interval used in correlated mode.
    pub fn separation(&self) -> (usize, usize) {
        (self.sep_min, self.sep_max)
    }

    /// Map any 1-based position (possibly past `dim`) back onto `[1, dim]`.
    pub fn wrap_position(&self, p: usize) -> usize {
        (p - 1) % self.dim + 1
    }

    /// Gaussian hump profile at a circular distance.
    fn hump(&self, distance: usize) -> f64 {
        let d = distance as f64;
        (-d * d / (2.0 * self.half_width * self.half_width)).exp()
    }

    /// The training vector for objects at positions `p1` and `p2`:
    /// component `j` is the superposition of one hump centred at each
    /// position, measured with circular distance.
    pub fn vector(&self, p1: usize, p2: usize) -> Result<Vec<f64>, SvqError> {
        for p in [p1, p2] {
            if p < 1 || p > self.dim {
                return Err(SvqError::invalid(format!(
                    "object position {p} outside [1, {}]",
                    self.dim
                )));
            }
        }
        Ok((1..=self.dim)
            .map(|j| {
                self.amplitude
                    * (self.hump(circular_distance(self.dim, j, p1))
                        + self.hump(circular_distance(self.dim, j, p2)))
            })
            .collect())
    }

    /// Draw one position pair according to the mode.
    pub fn sample_positions(&self, rng: &mut impl Rng) -> (usize, usize) {
        let p1 = rng.random_range(1..=self.dim);
        let p2 = match self.mode {
            SceneMode::Independent => rng.random_range(1..=self.dim),
            SceneMode::Correlated => {
                let sep = rng.random_range(self.sep_min..=self.sep_max);
                self.wrap_position(p1 + sep)
            }
        };
        (p1, p2)
    }

    /// Enumerate the full position distribution: all `dim^2` ordered pairs
    /// in independent mode, or all `dim * |separations|` pairs in
    /// correlated mode, each with its exact probability.
    pub fn enumerate_distribution(&self) -> WeightedDataset {
        let mut items = Vec::new();
        match self.mode {
            SceneMode::Independent => {
                let prob = 1.0 / (self.dim * self.dim) as f64;
                for p1 in 1..=self.dim {
                    for p2 in 1..=self.dim {
                        items.push((self.vector(p1, p2).expect("positions in range"), prob));
                    }
                }
            }
            SceneMode::Correlated => {
                let count = self.dim * (self.sep_max - self.sep_min + 1);
                let prob = 1.0 / count as f64;
                for p1 in 1..=self.dim {
                    for sep in self.sep_min..=self.sep_max {
                        let p2 = self.wrap_position(p1 + sep);
                        items.push((self.vector(p1, p2).expect("positions in range"), prob));
                    }
                }
            }
        }
        WeightedDataset::new(items).expect("enumerated probabilities sum to 1")
    }
}

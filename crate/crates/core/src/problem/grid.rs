use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid axis {axis} must have at least 2 strictly increasing finite values")]
    Axis { axis: usize },
    #[error("grid has {found} values, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("grid values must be finite")]
    NonFinite,
    #[error("query ({x}, {y}) lies outside the grid hull")]
    OutOfHull { x: f64, y: f64 },
}

/// Values tabulated on a rectangular 2-D grid, stored row-major with the
/// first axis outermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedGrid {
    x: Vec<f64>,
    y: Vec<f64>,
    values: Vec<f64>,
}

impl TabulatedGrid {
    pub fn new(x: Vec<f64>, y: Vec<f64>, values: Vec<f64>) -> Result<Self, GridError> {
        for (axis, a) in [&x, &y].into_iter().enumerate() {
            let ok = a.len() >= 2
                && a.iter().all(|v| v.is_finite())
                && a.windows(2).all(|w| w[0] < w[1]);
            if !ok {
                return Err(GridError::Axis { axis });
            }
        }
        if values.len() != x.len() * y.len() {
            return Err(GridError::Shape { expected: x.len() * y.len(), found: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GridError::NonFinite);
        }
        Ok(Self { x, y, values })
    }

    pub fn x_axis(&self) -> &[f64] {
        &self.x
    }

    pub fn y_axis(&self) -> &[f64] {
        &self.y
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.y.len() + j]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Bilinear interpolation. Grid nodes return the stored value exactly.
    pub fn interpolate(&self, x: f64, y: f64) -> Result<f64, GridError> {
        let (i, tx) = locate(&self.x, x).ok_or(GridError::OutOfHull { x, y })?;
        let (j, ty) = locate(&self.y, y).ok_or(GridError::OutOfHull { x, y })?;
        let lerp = |a: f64, b: f64, t: f64| if t == 0.0 { a } else { a + t * (b - a) };
        let i1 = (i + 1).min(self.x.len() - 1);
        let j1 = (j + 1).min(self.y.len() - 1);
        let lo = lerp(self.at(i, j), self.at(i1, j), tx);
        let hi = lerp(self.at(i, j1), self.at(i1, j1), tx);
        Ok(lerp(lo, hi, ty))
    }
}

/// Cell index and fractional offset of `q` on a sorted axis.
fn locate(axis: &[f64], q: f64) -> Option<(usize, f64)> {
    let (first, last) = (axis[0], axis[axis.len() - 1]);
    if !(q >= first && q <= last) {
        return None;
    }
    let hi = axis.partition_point(|&a| a <= q);
    if hi == 0 {
        return Some((0, 0.0));
    }
    let i = hi - 1;
    if i + 1 == axis.len() || axis[i] == q {
        return Some((i, 0.0));
    }
    Some((i, (q - axis[i]) / (axis[i + 1] - axis[i])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid() -> TabulatedGrid {
        // f(x, y) = 10x + y on x in {0, 1, 2}, y in {0, 5}
        TabulatedGrid::new(
            vec![0.0, 1.0, 2.0],
            vec![0.0, 5.0],
            vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0],
        )
        .unwrap()
    }

    #[test]
    fn nodes_are_exact() {
        let g = grid();
        assert_eq!(g.interpolate(1.0, 5.0), Ok(15.0));
        assert_eq!(g.interpolate(2.0, 0.0), Ok(20.0));
        assert_eq!(g.interpolate(2.0, 5.0), Ok(25.0));
    }

    #[test]
    fn midpoint_is_mean() {
        let g = grid();
        assert_eq!(g.interpolate(0.5, 5.0), Ok(10.0));
        assert_eq!(g.interpolate(1.5, 2.5), Ok(17.5));
    }

    #[test]
    fn outside_hull_fails() {
        assert!(matches!(grid().interpolate(2.1, 0.0), Err(GridError::OutOfHull { .. })));
        assert!(matches!(grid().interpolate(0.0, f64::NAN), Err(GridError::OutOfHull { .. })));
    }

    #[test]
    fn rejects_bad_layout() {
        assert!(TabulatedGrid::new(vec![0.0, 0.0], vec![0.0, 1.0], vec![0.0; 4]).is_err());
        assert!(TabulatedGrid::new(vec![0.0, 1.0], vec![0.0, 1.0], vec![0.0; 3]).is_err());
        assert_eq!(grid().min(), 0.0);
        assert_eq!(grid().max(), 25.0);
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectraError};
use crate::scalar::Real;

/// Placement of the unknowns inside `[left, right]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeLayout {
    /// `t_i = left + i·h`, `i = 1..=n`, `h = (right - left)/(n + 1)`.
    /// Both endpoints carry homogeneous Dirichlet values.
    Vertex,
    /// `t_i = left + (i - ½)·h`, `i = 1..=n`, `h = (right - left)/n`.
    /// The left endpoint sits halfway between the first node and its mirror
    /// image, which is how the Neumann condition is encoded.
    CellCentered,
}

/// Uniform grid of interior points on a truncated interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    pub left: T,
    pub right: T,
    pub n: usize,
    pub h: T,
    pub layout: NodeLayout,
}

impl<T: Real> Grid<T> {
    pub fn new(left: T, right: T, n: usize, layout: NodeLayout) -> Result<Self> {
        if !(left < right) {
            return Err(SpectraError::InvalidParameter(format!(
                "grid requires left < right, got [{left}, {right}]"
            )));
        }
        if n < 3 {
            return Err(SpectraError::InvalidParameter(format!("grid needs n >= 3, got {n}")));
        }
        let cells = match layout {
            NodeLayout::Vertex => n + 1,
            NodeLayout::CellCentered => n,
        };
        let h = (right - left) / T::of_usize(cells);
        Ok(Self { left, right, n, h, layout })
    }

    /// Smallest grid of the given layout whose spacing does not exceed `h_max`.
    /// Vertex grids get an odd number of points so that symmetric intervals
    /// carry a node at their midpoint.
    pub fn with_spacing(left: T, right: T, h_max: T, layout: NodeLayout) -> Result<Self> {
        if !(h_max > T::zero()) {
            return Err(SpectraError::InvalidParameter(format!("spacing must be positive, got {h_max}")));
        }
        let cells = ((right - left) / h_max).ceil().to_usize().unwrap_or(0).max(4);
        let n = match layout {
            NodeLayout::Vertex => {
                let n = cells - 1;
                if n.is_multiple_of(2) {
                    n + 1
                } else {
                    n
                }
            }
            NodeLayout::CellCentered => cells,
        };
        Self::new(left, right, n, layout)
    }

    #[inline]
    pub fn point(&self, i: usize) -> T {
        match self.layout {
            NodeLayout::Vertex => self.left + T::of_usize(i + 1) * self.h,
            NodeLayout::CellCentered => self.left + (T::of_usize(i) + T::half()) * self.h,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(move |i| self.point(i))
    }

    /// The same interval with half the spacing.
    pub fn refined(&self) -> Self {
        let n = match self.layout {
            NodeLayout::Vertex => 2 * self.n + 1,
            NodeLayout::CellCentered => 2 * self.n,
        };
        Self::new(self.left, self.right, n, self.layout).expect("refining a valid grid")
    }

    /// `true` when the interval is symmetric about zero and the layout maps
    /// nodes onto nodes under `t -> -t`.
    pub fn is_symmetric(&self) -> bool {
        self.layout == NodeLayout::Vertex && (self.left + self.right).abs() <= T::lit(1e-12) * self.right.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_points_and_spacing() {
        let g = Grid::new(0.0f64, 1.0, 9, NodeLayout::Vertex).unwrap();
        assert!((g.h - 0.1).abs() < 1e-15);
        assert!((g.point(0) - 0.1).abs() < 1e-15);
        assert!((g.point(8) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn cell_centered_points() {
        let g = Grid::new(0.0f64, 1.0, 10, NodeLayout::CellCentered).unwrap();
        assert!((g.point(0) - 0.05).abs() < 1e-15);
        assert!((g.point(9) - 0.95).abs() < 1e-15);
    }

    #[test]
    fn refinement_halves_spacing() {
        for layout in [NodeLayout::Vertex, NodeLayout::CellCentered] {
            let g = Grid::new(-2.0f64, 3.0, 17, layout).unwrap();
            let r = g.refined();
            assert!((r.h - g.h / 2.0).abs() < 1e-15);
            assert_eq!(r.left, g.left);
            assert_eq!(r.right, g.right);
        }
    }

    #[test]
    fn spacing_constructor_respects_bound() {
        let g = Grid::with_spacing(-4.0f64, 4.0, 0.002, NodeLayout::Vertex).unwrap();
        assert!(g.h <= 0.002);
        assert_eq!(g.n % 2, 1);
        assert!(g.is_symmetric());
        assert!(g.point(g.n / 2).abs() < 1e-12);
    }

    #[test]
    fn invalid_grids() {
        assert!(Grid::new(1.0f64, 0.0, 10, NodeLayout::Vertex).is_err());
        assert!(Grid::new(0.0f64, 1.0, 2, NodeLayout::Vertex).is_err());
    }
}

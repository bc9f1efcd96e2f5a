//! Uniform cell grids over boxes in C^2 = R^4 and occupancy images.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Point2;

/// Axis-aligned box in the real coordinates `(re x, im x, re y, im y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Box4 {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl Box4 {
    pub fn new(lo: [f64; 4], hi: [f64; 4]) -> Result<Self> {
        if (0..4).any(|k| !(hi[k] > lo[k]) || !lo[k].is_finite() || !hi[k].is_finite()) {
            return Err(Error::InvalidParams("degenerate box".into()));
        }
        Ok(Self { lo, hi })
    }

    /// `[-h, h]^4`
    pub fn cube(h: f64) -> Result<Self> {
        Self::new([-h; 4], [h; 4])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid4 {
    pub bounds: Box4,
    pub cells: [usize; 4],
}

impl Grid4 {
    pub fn new(bounds: Box4, cells: [usize; 4]) -> Result<Self> {
        if cells.iter().any(|&n| n == 0) {
            return Err(Error::InvalidParams("grid needs at least one cell per axis".into()));
        }
        Ok(Self { bounds, cells })
    }

    pub fn uniform(bounds: Box4, per_axis: usize) -> Result<Self> {
        Self::new(bounds, [per_axis; 4])
    }

    pub fn total(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn multi_index(&self, mut idx: usize) -> [usize; 4] {
        let mut out = [0; 4];
        for k in 0..4 {
            out[k] = idx % self.cells[k];
            idx /= self.cells[k];
        }
        out
    }

    pub fn flat_index(&self, mi: [usize; 4]) -> usize {
        (0..4).rev().fold(0, |acc, k| acc * self.cells[k] + mi[k])
    }

    pub fn center(&self, idx: usize) -> Point2 {
        let mi = self.multi_index(idx);
        let b = &self.bounds;
        Point2::from_reals(std::array::from_fn(|k| {
            b.lo[k] + (mi[k] as f64 + 0.5) * (b.hi[k] - b.lo[k]) / self.cells[k] as f64
        }))
    }

    /// Cell containing `z`, or `None` outside the closed box.
    pub fn cell_of(&self, z: Point2) -> Option<usize> {
        let v = z.to_reals();
        let b = &self.bounds;
        let mut mi = [0; 4];
        for k in 0..4 {
            if !(v[k] >= b.lo[k] && v[k] <= b.hi[k]) {
                return None;
            }
            let t = (v[k] - b.lo[k]) / (b.hi[k] - b.lo[k]) * self.cells[k] as f64;
            mi[k] = (t as usize).min(self.cells[k] - 1);
        }
        Some(self.flat_index(mi))
    }
}

/// Marked cells of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Occupancy {
    pub grid: Grid4,
    pub marked: Vec<bool>,
}

impl Occupancy {
    pub fn count(&self) -> usize {
        self.marked.iter().filter(|&&m| m).count()
    }

    pub fn fraction(&self) -> f64 {
        if self.marked.is_empty() {
            0.0
        } else {
            self.count() as f64 / self.marked.len() as f64
        }
    }

    /// Projects onto the plane of axes `(a, b)`; a pixel is set when any
    /// cell above it is marked. Row 0 is the top (largest `b`).
    pub fn project(&self, a: usize, b: usize) -> Result<(usize, usize, Vec<bool>)> {
        if a > 3 || b > 3 || a == b {
            return Err(Error::InvalidParams("projection axes must be two distinct values in 0..4".into()));
        }
        let (w, h) = (self.grid.cells[a], self.grid.cells[b]);
        let mut img = vec![false; w * h];
        for (idx, &m) in self.marked.iter().enumerate() {
            if m {
                let mi = self.grid.multi_index(idx);
                img[(h - 1 - mi[b]) * w + mi[a]] = true;
            }
        }
        Ok((w, h, img))
    }

    /// Binary PPM (P6) of the projection; marked pixels are black.
    pub fn to_ppm(&self, a: usize, b: usize) -> Result<Vec<u8>> {
        let (w, h, img) = self.project(a, b)?;
        let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
        for m in img {
            let v = if m { 0u8 } else { 255u8 };
            out.extend_from_slice(&[v, v, v]);
        }
        Ok(out)
    }
}

/// Parses a projection-plane flag such as `"rex,imx"` or `"0,2"`.
pub fn parse_plane(s: &str) -> Result<(usize, usize)> {
    let axis = |t: &str| -> Result<usize> {
        match t.trim() {
            "rex" | "0" => Ok(0),
            "imx" | "1" => Ok(1),
            "rey" | "2" => Ok(2),
            "imy" | "3" => Ok(3),
            other => Err(Error::InvalidParams(format!("unknown axis {other:?}"))),
        }
    };
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidParams("plane must be two comma-separated axes".into()));
    }
    Ok((axis(parts[0])?, axis(parts[1])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip_and_centers() {
        let g = Grid4::new(Box4::cube(2.0).unwrap(), [3, 4, 5, 2]).unwrap();
        for idx in 0..g.total() {
            assert_eq!(g.flat_index(g.multi_index(idx)), idx);
            assert_eq!(g.cell_of(g.center(idx)), Some(idx));
        }
        assert_eq!(g.cell_of(Point2::real(2.0, 2.0)).map(|i| g.multi_index(i)[0]), Some(2));
        assert_eq!(g.cell_of(Point2::real(2.5, 0.0)), None);
    }

    #[test]
    fn ppm_header_and_size() {
        let g = Grid4::new(Box4::cube(1.0).unwrap(), [4, 1, 3, 1]).unwrap();
        let mut occ = Occupancy { grid: g, marked: vec![false; g.total()] };
        occ.marked[0] = true;
        let ppm = occ.to_ppm(0, 2).unwrap();
        assert!(ppm.starts_with(b"P6\n4 3\n255\n"));
        assert_eq!(ppm.len(), 11 + 4 * 3 * 3);
        assert_eq!(parse_plane("rex,rey").unwrap(), (0, 2));
        assert!(Box4::new([0.0; 4], [1.0, 1.0, 0.0, 1.0]).is_err());
    }
}

//! Uniform grids on the box `[-L, L]^4`.
//!
//! Binary dump layout (all little-endian):
//!
//! | bytes | content |
//! |-------|---------|
//! | 4     | magic `GB4D` |
//! | 4     | `u32` format version (1) |
//! | 4     | `u32` points per axis `n` |
//! | 8     | `f64` half-width `L` |
//! | 8·n⁴  | `f64` values, row-major with `x1` slowest |

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};

use super::NumericsError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid4D {
    half_width: f64,
    n: usize,
}

impl Grid4D {
    pub fn new(half_width: f64, n: usize) -> Result<Self, NumericsError> {
        if n < 3 {
            return Err(NumericsError::InvalidArgument(format!("grid needs at least 3 points per axis, got {n}")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(NumericsError::InvalidArgument(format!("half-width must be positive, got {half_width}")));
        }
        Ok(Grid4D { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.n.pow(4)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axis_value(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn multi_index(&self, idx: usize) -> [usize; 4] {
        let n = self.n;
        [idx / (n * n * n), (idx / (n * n)) % n, (idx / n) % n, idx % n]
    }

    pub fn point(&self, idx: usize) -> [f64; 4] {
        self.multi_index(idx).map(|i| self.axis_value(i))
    }

    /// Product trapezoid weight of a grid point, including `h^4`.
    pub fn trapezoid_weight(&self, idx: usize) -> f64 {
        let h = self.spacing();
        self.multi_index(idx)
            .iter()
            .map(|&i| if i == 0 || i == self.n - 1 { 0.5 * h } else { h })
            .product()
    }

    pub fn sample<F: Fn([f64; 4]) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.len()).map(|i| f(self.point(i))).collect()
    }

    pub fn write_csv<W: Write>(&self, values: &[f64], mut w: W) -> io::Result<()> {
        writeln!(w, "x1,x2,x3,x4,value")?;
        for (i, v) in values.iter().enumerate() {
            let p = self.point(i);
            writeln!(w, "{},{},{},{},{}", p[0], p[1], p[2], p[3], v)?;
        }
        Ok(())
    }

    pub fn write_binary<W: Write>(&self, values: &[f64], mut w: W) -> io::Result<()> {
        w.write_all(b"GB4D")?;
        w.write_all(&1u32.to_le_bytes())?;
        w.write_all(&(self.n as u32).to_le_bytes())?;
        w.write_all(&self.half_width.to_le_bytes())?;
        for v in values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> io::Result<(Grid4D, Vec<f64>)> {
        let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != b"GB4D" {
            return Err(bad("bad magic"));
        }
        let mut u = [0u8; 4];
        r.read_exact(&mut u)?;
        if u32::from_le_bytes(u) != 1 {
            return Err(bad("unsupported version"));
        }
        r.read_exact(&mut u)?;
        let n = u32::from_le_bytes(u) as usize;
        let mut f = [0u8; 8];
        r.read_exact(&mut f)?;
        let grid = Grid4D::new(f64::from_le_bytes(f), n).map_err(|e| bad(&e.to_string()))?;
        let mut values = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            r.read_exact(&mut f)?;
            values.push(f64::from_le_bytes(f));
        }
        Ok((grid, values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry() {
        let g = Grid4D::new(1.0, 3).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.point(0), [-1.0; 4]);
        assert_eq!(g.point(80), [1.0; 4]);
        assert_eq!(g.point(1), [-1.0, -1.0, -1.0, 0.0]);
        let total: f64 = (0..g.len()).map(|i| g.trapezoid_weight(i)).sum();
        assert!((total - 16.0).abs() < 1e-12);
        assert!(Grid4D::new(1.0, 2).is_err());
        assert!(Grid4D::new(-1.0, 5).is_err());
    }

    #[test]
    fn dumps_round_trip() {
        let g = Grid4D::new(2.0, 3).unwrap();
        let v = g.sample(|p| p.iter().sum());
        let mut buf = Vec::new();
        g.write_binary(&v, &mut buf).unwrap();
        assert_eq!(buf.len(), 20 + 8 * 81);
        let (g2, v2) = Grid4D::read_binary(buf.as_slice()).unwrap();
        assert_eq!((g2, v2), (g, v.clone()));
        let mut csv = Vec::new();
        g.write_csv(&v, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().nth(1), Some("-2,-2,-2,-2,-8"));
        assert_eq!(text.lines().count(), 82);
    }
}

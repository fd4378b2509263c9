//! Upper bounds `g̃(r1) = g(r1^2)`, `h̃(r1) = h(1 - r1^2)` for `|H|^2` of a
//! PMC product whose factors sit at their upper gap endpoints, and the
//! radius equation that such a product must satisfy.

use serde::Serialize;

use super::admissible_radius_intervals;
use crate::error::{Error, Result};

/// Radicands above this (negative) value count as roundoff and are clipped.
const RADICAND_CLIP: f64 = -1e-12;

fn radicand_sqrt(v: f64) -> Result<f64> {
    if v >= 0.0 {
        Ok(v.sqrt())
    } else if v > RADICAND_CLIP {
        Ok(0.0)
    } else {
        Err(Error::domain(format!("negative radicand {v}")))
    }
}

fn check_dims(m1: u32, m2: u32) -> Result<()> {
    if m1 <= 2 || m2 <= 2 {
        return Err(Error::domain("bound scan needs m1, m2 > 2"));
    }
    Ok(())
}

fn bound_fn(own: u32, m: u32, x: f64) -> Result<f64> {
    let (a, m) = (own as f64, m as f64);
    let root = radicand_sqrt((2.0 * m * x - a).powi(2) - 4.0 * (a - 1.0))?;
    let m2 = m * m;
    Ok(((a - 2.0).powi(2) - 2.0 * a * a) / (2.0 * m2 * x * x)
        + a / (m * x)
        + (a - 2.0) / (2.0 * m2) * root / (x * x)
        + (m - a / x).powi(2) / m2)
}

/// `g(x)` with `x = r1^2`.
pub fn bound_g(m1: u32, m2: u32, x: f64) -> Result<f64> {
    bound_fn(m1, m1 + m2, x)
}

/// `h(y)` with `y = r2^2`.
pub fn bound_h(m1: u32, m2: u32, y: f64) -> Result<f64> {
    bound_fn(m2, m1 + m2, y)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundScan {
    pub m1: u32,
    pub m2: u32,
    pub r1_grid: Vec<f64>,
    pub g_values: Vec<f64>,
    pub h_values: Vec<f64>,
    pub min_values: Vec<f64>,
    /// Numerical crossing of `g̃` and `h̃`, also a grid point.
    pub crossing_r1_sq: f64,
    /// `(3 m1 + m2 - 4) / (4 (m - 2))`.
    pub crossing_formula: f64,
    /// Maximum of `min(g̃, h̃)` over the grid.
    pub bound: f64,
    /// `(m - 4)^2 / m^2`.
    pub theoretical_bound: f64,
}

impl BoundScan {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["r1_sq", "g", "h", "min"])?;
        for i in 0..self.r1_grid.len() {
            csv.serialize((self.r1_grid[i], self.g_values[i], self.h_values[i], self.min_values[i]))?;
        }
        csv.flush()?;
        Ok(())
    }

    /// Largest drop of `g̃` and largest rise of `h̃` between adjacent points.
    pub fn monotonicity_violations(&self) -> (f64, f64) {
        let worst = |v: &[f64], sign: f64| {
            v.windows(2).map(|w| sign * (w[0] - w[1])).fold(0.0_f64, f64::max)
        };
        (worst(&self.g_values, 1.0), worst(&self.h_values, -1.0))
    }

    /// Grid value where `min(g̃, h̃)` peaks.
    pub fn argmax(&self) -> f64 {
        let i = self
            .min_values
            .iter()
            .enumerate()
            .fold(0, |best, (i, v)| if *v > self.min_values[best] { i } else { best });
        self.r1_grid[i]
    }
}

/// Evaluates `g̃` and `h̃` on `grid_size` uniform points of the PMC window
/// for `r1^2`, plus the bisected crossing point.
pub fn bound_scan(m1: u32, m2: u32, grid_size: usize) -> Result<BoundScan> {
    check_dims(m1, m2)?;
    if grid_size < 3 {
        return Err(Error::domain("grid_size must be at least 3"));
    }
    let window = admissible_radius_intervals(m1, m2)?.r1_pmc;
    let m = (m1 + m2) as f64;
    let gt = |x: f64| bound_g(m1, m2, x);
    let ht = |x: f64| bound_h(m1, m2, 1.0 - x);

    let (mut lo, mut hi) = (window.lo, window.hi);
    let diff = |x: f64| -> Result<f64> { Ok(gt(x)? - ht(x)?) };
    if diff(lo)? > 0.0 || diff(hi)? < 0.0 {
        return Err(Error::domain("bounds do not cross inside the window"));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if diff(mid)? <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let crossing = 0.5 * (lo + hi);

    let step = (window.hi - window.lo) / (grid_size - 1) as f64;
    let mut grid: Vec<f64> = (0..grid_size).map(|i| window.lo + step * i as f64).collect();
    grid[grid_size - 1] = window.hi;
    let at = grid.partition_point(|&x| x < crossing);
    if grid.get(at) != Some(&crossing) {
        grid.insert(at, crossing);
    }

    let g_values = grid.iter().map(|&x| gt(x)).collect::<Result<Vec<_>>>()?;
    let h_values = grid.iter().map(|&x| ht(x)).collect::<Result<Vec<_>>>()?;
    let min_values: Vec<f64> = g_values.iter().zip(&h_values).map(|(g, h)| g.min(*h)).collect();
    let bound = min_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundScan {
        m1,
        m2,
        r1_grid: grid,
        g_values,
        h_values,
        min_values,
        crossing_r1_sq: crossing,
        crossing_formula: (3.0 * m1 as f64 + m2 as f64 - 4.0) / (4.0 * (m - 2.0)),
        bound,
        theoretical_bound: (m - 4.0).powi(2) / (m * m),
    })
}

/// Line 4 of the product system with both factors at their upper gap
/// endpoint, as a function of `x = r1^2`.
pub fn first_radius_residual(m1: u32, m2: u32, x: f64) -> Result<f64> {
    check_dims(m1, m2)?;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain("r1^2 must lie in (0, 1)"));
    }
    let (a, b) = (m1 as f64, m2 as f64);
    let m = a + b;
    let y = 1.0 - x;
    let root1 = radicand_sqrt((2.0 * m * x - a).powi(2) - 4.0 * (a - 1.0))?;
    let root2 = radicand_sqrt((b + 2.0 * a - 2.0 * m * x).powi(2) - 4.0 * (b - 1.0))?;
    let t1 = y * ((a - 2.0).powi(2) - 2.0 * a * (a - m * x) + (a - 2.0) * root1) / (2.0 * x);
    let t2 = -x * ((b - 2.0).powi(2) - 2.0 * b * (m * x - a) + (b - 2.0) * root2) / (2.0 * y);
    let t3 = (1.0 - 2.0 * x) * (x / y * b * b - 2.0 * a * b + y / x * a * a);
    Ok(t1 + t2 + t3)
}

/// Zeros of [`first_radius_residual`] in the PMC window, located by a sign
/// scan over `samples` points refined by bisection.
pub fn first_radius_roots(m1: u32, m2: u32, samples: usize) -> Result<Vec<f64>> {
    check_dims(m1, m2)?;
    let window = admissible_radius_intervals(m1, m2)?.r1_pmc;
    let n = samples.max(2);
    let step = (window.hi - window.lo) / n as f64;
    let f = |x: f64| first_radius_residual(m1, m2, x);
    let mut roots = Vec::new();
    let mut prev_x = window.lo;
    let mut prev = f(prev_x)?;
    if prev == 0.0 {
        roots.push(prev_x);
    }
    for i in 1..=n {
        let x = if i == n { window.hi } else { window.lo + step * i as f64 };
        let v = f(x)?;
        if v == 0.0 {
            roots.push(x);
        } else if prev != 0.0 && (prev < 0.0) != (v < 0.0) {
            let (mut lo, mut hi, flo) = (prev_x, x, prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (f(mid)? < 0.0) == (flo < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev = v;
    }
    Ok(roots)
}

//! Extrinsic products of minimal factors inside a sphere `S^n(r)`.
//!
//! A factor is known only through its dimension `d` and the radius `a` of the
//! small sphere it is minimal in; the product sits in `S^n(r)` when
//! `sum a_i^2 = r^2`. With `eta_i` the unit position direction of factor `i`,
//! everything below is a rational function of `a_i^2` and `r^2`, which is what
//! lets the exact path reproduce the landmark values without rounding.

mod json;

pub use json::{parse_configs, AnyConfig};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Absolute tolerance on `sum a_i^2 - r^2` in binary64.
pub const RADIUS_SUM_TOL: f64 = 1e-12;

/// Default absolute tolerance on residual components.
pub const RESIDUAL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FactorSpec<S> {
    pub dim: u32,
    pub radius_sq: S,
    pub label: String,
}

impl<S: Scalar> FactorSpec<S> {
    pub fn new(dim: u32, radius_sq: S, label: impl Into<String>) -> Self {
        FactorSpec { dim, radius_sq, label: label.into() }
    }

    pub fn radius(&self) -> f64 {
        self.radius_sq.to_f64().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductConfig<S> {
    factors: Vec<FactorSpec<S>>,
    ambient_radius_sq: S,
}

impl<S: Scalar> ProductConfig<S> {
    pub fn new(factors: Vec<FactorSpec<S>>, ambient_radius_sq: S) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::domain("a product needs at least one factor"));
        }
        if !ambient_radius_sq.is_pos() {
            return Err(Error::domain("ambient radius must be positive"));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.dim == 0 {
                return Err(Error::domain(format!("factor {i} ({}) has dimension 0", f.label)));
            }
            if !f.radius_sq.is_pos() {
                return Err(Error::domain(format!("factor {i} ({}) has non-positive radius", f.label)));
            }
        }
        let sum = factors.iter().fold(S::zero(), |acc, f| acc + f.radius_sq.clone());
        let excess = sum.clone() - ambient_radius_sq.clone();
        let tol = RADIUS_SUM_TOL * ambient_radius_sq.to_f64().max(1.0);
        if !excess.is_zero_within(tol) {
            return Err(Error::domain(format!(
                "sum of squared factor radii is {} but the ambient radius squared is {} (difference {:e})",
                sum.to_f64(),
                ambient_radius_sq.to_f64(),
                excess.to_f64()
            )));
        }
        Ok(ProductConfig { factors, ambient_radius_sq })
    }

    /// Builds a config from `(dim, radius^2)` pairs with generated labels.
    pub fn from_squares(blocks: &[(u32, S)], ambient_radius_sq: S) -> Result<Self> {
        let factors = blocks
            .iter()
            .enumerate()
            .map(|(i, (d, a2))| FactorSpec::new(*d, a2.clone(), format!("F{}", i + 1)))
            .collect();
        Self::new(factors, ambient_radius_sq)
    }

    pub fn factors(&self) -> &[FactorSpec<S>] {
        &self.factors
    }

    pub fn ambient_radius_sq(&self) -> &S {
        &self.ambient_radius_sq
    }

    pub fn ambient_radius(&self) -> f64 {
        self.ambient_radius_sq.to_f64().sqrt()
    }

    /// Total dimension `m`.
    pub fn dim(&self) -> u32 {
        self.factors.iter().map(|f| f.dim).sum()
    }

    /// The same product with every radius multiplied by `s` (given as `s^2`).
    pub fn rescaled(&self, s_sq: &S) -> Result<Self> {
        let factors = self
            .factors
            .iter()
            .map(|f| FactorSpec::new(f.dim, f.radius_sq.clone() * s_sq.clone(), f.label.clone()))
            .collect();
        Self::new(factors, self.ambient_radius_sq.clone() * s_sq.clone())
    }

    pub fn to_f64(&self) -> ProductConfig<f64> {
        ProductConfig {
            factors: self
                .factors
                .iter()
                .map(|f| FactorSpec::new(f.dim, f.radius_sq.to_f64(), f.label.clone()))
                .collect(),
            ambient_radius_sq: self.ambient_radius_sq.to_f64(),
        }
    }

    fn is_unit(&self) -> bool {
        (self.ambient_radius_sq.clone() - S::one()).is_zero_within(RADIUS_SUM_TOL)
    }
}

impl ProductConfig<f64> {
    /// Builds a float config from `(dim, radius)` pairs.
    pub fn from_radii(blocks: &[(u32, f64)], ambient_radius: f64) -> Result<Self> {
        let sq: Vec<(u32, f64)> = blocks.iter().map(|&(d, a)| (d, a * a)).collect();
        Self::from_squares(&sq, ambient_radius * ambient_radius)
    }
}

impl ProductConfig<Rational> {
    pub fn from_ratios(blocks: &[(u32, i64, i64)], ambient_radius_sq: Rational) -> Result<Self> {
        let sq: Vec<(u32, Rational)> =
            blocks.iter().map(|&(d, p, q)| (d, Rational::ratio(p, q))).collect();
        Self::from_squares(&sq, ambient_radius_sq)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue<S> {
    pub value: S,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport<S> {
    /// Coefficient of `mH` on each `eta_i`.
    pub h_components: Vec<f64>,
    /// Squares of `h_components`, kept in the working arithmetic.
    pub h_components_sq: Vec<S>,
    pub h_norm_sq: S,
    /// Eigenvalue of `A_H` on each factor, in factor order.
    pub ah_eigenvalues: Vec<Eigenvalue<S>>,
}

impl<S: Scalar> CurvatureReport<S> {
    /// Eigenvalues with equal values merged, sorted in decreasing order.
    pub fn distinct_eigenvalues(&self, tol: f64) -> Vec<Eigenvalue<S>> {
        let mut out: Vec<Eigenvalue<S>> = Vec::new();
        for e in &self.ah_eigenvalues {
            match out.iter_mut().find(|o| (o.value.clone() - e.value.clone()).is_zero_within(tol)) {
                Some(o) => o.multiplicity += e.multiplicity,
                None => out.push(e.clone()),
            }
        }
        out.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap_or(std::cmp::Ordering::Equal));
        out
    }
}

/// Per-factor residuals of a characterization equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Residuals<S> {
    /// Coefficient on `eta_i`.
    pub components: Vec<f64>,
    /// The same coefficient divided by `a_i`; rational in the inputs, so it
    /// vanishes exactly in exact arithmetic.
    pub reduced: Vec<S>,
}

impl<S: Scalar> Residuals<S> {
    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Exact vanishing for rationals, `max |component| <= tol` for floats.
    pub fn vanish(&self, tol: f64) -> bool {
        if S::EXACT {
            self.reduced.iter().all(|r| r.is_zero_within(0.0))
        } else {
            self.max_abs() <= tol
        }
    }
}

struct Layout<S> {
    m: S,
    r_sq: S,
    mu: Vec<S>,
    h_norm_sq: S,
}

fn layout<S: Scalar>(config: &ProductConfig<S>) -> Layout<S> {
    let m = S::int(config.dim() as i64);
    let r_sq = config.ambient_radius_sq.clone();
    let mut mu = Vec::with_capacity(config.factors.len());
    let mut sum_sq = S::zero();
    for f in &config.factors {
        let d = S::int(f.dim as i64);
        let a_sq = f.radius_sq.clone();
        mu.push((d.clone() / a_sq.clone() - m.clone() / r_sq.clone()) / m.clone());
        let c = m.clone() * a_sq.clone() / r_sq.clone() - d;
        sum_sq = sum_sq + c.sq() / a_sq;
    }
    let h_norm_sq = sum_sq / m.sq();
    Layout { m, r_sq, mu, h_norm_sq }
}

pub fn mean_curvature<S: Scalar>(config: &ProductConfig<S>) -> CurvatureReport<S> {
    let m = S::int(config.dim() as i64);
    let r_sq = config.ambient_radius_sq.clone();
    let lay = layout(config);
    let mut h_components = Vec::new();
    let mut h_components_sq = Vec::new();
    let mut ah_eigenvalues = Vec::new();
    for (f, mu) in config.factors.iter().zip(&lay.mu) {
        let d = S::int(f.dim as i64);
        let c_times_a = m.clone() * f.radius_sq.clone() / r_sq.clone() - d;
        h_components.push(c_times_a.to_f64() / f.radius());
        h_components_sq.push(c_times_a.sq() / f.radius_sq.clone());
        ah_eigenvalues.push(Eigenvalue { value: mu.clone(), multiplicity: f.dim });
    }
    CurvatureReport { h_components, h_components_sq, h_norm_sq: lay.h_norm_sq, ah_eigenvalues }
}

/// Coefficients of `trace B(., A_H .) - (m/r^2 - lambda) H` on each `eta_i`.
pub fn lambda_residual<S: Scalar>(config: &ProductConfig<S>, lambda: &S) -> Residuals<S> {
    let Layout { m, r_sq, mu, h_norm_sq } = layout(config);
    let target = m.clone() / r_sq.clone() - lambda.clone();
    let mut components = Vec::new();
    let mut reduced = Vec::new();
    for (f, mu) in config.factors.iter().zip(mu) {
        let d = S::int(f.dim as i64);
        let a_sq = f.radius_sq.clone();
        let r = -(d.clone() * mu) / a_sq.clone() + m.clone() * h_norm_sq.clone() / r_sq.clone()
            - target.clone() * (m.clone() / r_sq.clone() - d / a_sq) / m.clone();
        components.push(f.radius() * r.to_f64());
        reduced.push(r);
    }
    Residuals { components, reduced }
}

/// Coefficients of `trace B(., A_H .) - mH` on each `eta_i`, for a product in
/// the unit sphere.
pub fn biharmonic_residual<S: Scalar>(config: &ProductConfig<S>) -> Result<Residuals<S>> {
    if !config.is_unit() {
        return Err(Error::domain(format!(
            "biharmonic_residual needs the unit sphere, got r^2 = {}; use lambda_residual, \
             or rescale radii by 1/r and lambda by r^2",
            config.ambient_radius_sq.to_f64()
        )));
    }
    Ok(lambda_residual(config, &S::zero()))
}

/// Returns `(|A_H|^2, (m/r^2 - lambda)|H|^2)`.
pub fn pmc_norm_identity<S: Scalar>(config: &ProductConfig<S>, lambda: &S) -> (S, S) {
    let Layout { m, r_sq, mu, h_norm_sq } = layout(config);
    let lhs = config
        .factors
        .iter()
        .zip(mu)
        .fold(S::zero(), |acc, (f, mu)| acc + S::int(f.dim as i64) * mu.sq());
    let rhs = (m / r_sq - lambda.clone()) * h_norm_sq;
    (lhs, rhs)
}

/// The biharmonic system in the ratios `alpha_i = a_i^2 / d_i`:
/// `alpha_i (D - 2m^2) + 2m - 1/alpha_i` with `D = sum d_j / alpha_j`.
pub fn alpha_system_residuals<S: Scalar>(config: &ProductConfig<S>) -> Result<Vec<S>> {
    if !config.is_unit() {
        return Err(Error::domain("the ratio system is stated in the unit sphere"));
    }
    let m = S::int(config.dim() as i64);
    let alphas: Vec<S> =
        config.factors.iter().map(|f| f.radius_sq.clone() / S::int(f.dim as i64)).collect();
    let big_d = config
        .factors
        .iter()
        .zip(&alphas)
        .fold(S::zero(), |acc, (f, a)| acc + S::int(f.dim as i64) / a.clone());
    let two_m = S::int(2) * m.clone();
    let shift = big_d - S::int(2) * m.sq();
    Ok(alphas
        .iter()
        .map(|a| a.clone() * shift.clone() + two_m.clone() - a.inv())
        .collect())
}

#[cfg(test)]
mod tests;

//! Finite-difference check of the bitension field for products of circles.
//!
//! The torus `S^1(b_1) x ... x S^1(b_p)` sits in `S^{2p-1}(r) ⊂ R^{2p}`,
//! `r^2 = sum b_i^2`, through `u -> (b_i cos(u_i/b_i), b_i sin(u_i/b_i))_i`.
//! The coordinates are arclength, so the induced metric is flat and
//! `τ = Π(sum ∂_i^2 φ)`, with `Π` the projection onto `T S^{2p-1}(r)`. Then
//!
//! `τ2 = sum ∇_i ∇_i τ - sum R(dφ e_i, τ) dφ e_i`,  `∇_i V = Π(∂_i V)`,
//!
//! with `R(X,Y)Z = (<Y,Z> X - <X,Z> Y) / r^2`. Nothing here uses the closed
//! forms of the other modules.
//!
//! Nested differences divide by `h^4`, which wipes out binary64, so the
//! kernels run in double-double arithmetic by default.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::geometry::ProductConfig;

pub const MIN_STEP: f64 = 1e-5;
pub const MAX_STEP: f64 = 1e-1;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Residuals below this are treated as zero when estimating the order.
pub const NOISE_FLOOR: f64 = 1e-12;

pub trait FdReal:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn of(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
}

impl FdReal for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

impl FdReal for TwoFloat {
    fn of(x: f64) -> Self {
        TwoFloat::from(x)
    }
    fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }
    fn sin(self) -> Self {
        TwoFloat::sin(self)
    }
    fn cos(self) -> Self {
        TwoFloat::cos(self)
    }
    fn sqrt(self) -> Self {
        TwoFloat::sqrt(self)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stencil {
    #[default]
    Central2,
    Central4,
}

impl Stencil {
    /// Order of the truncation error.
    pub fn order(self) -> f64 {
        match self {
            Stencil::Central2 => 2.0,
            Stencil::Central4 => 4.0,
        }
    }

    fn first(self) -> &'static [(i32, f64, f64)] {
        // (offset, numerator, denominator) of the weights times 1/h
        match self {
            Stencil::Central2 => &[(-1, -1.0, 2.0), (1, 1.0, 2.0)],
            Stencil::Central4 => &[(-2, 1.0, 12.0), (-1, -8.0, 12.0), (1, 8.0, 12.0), (2, -1.0, 12.0)],
        }
    }

    fn second(self) -> &'static [(i32, f64, f64)] {
        match self {
            Stencil::Central2 => &[(-1, 1.0, 1.0), (0, -2.0, 1.0), (1, 1.0, 1.0)],
            Stencil::Central4 => &[
                (-2, -1.0, 12.0),
                (-1, 16.0, 12.0),
                (0, -30.0, 12.0),
                (1, 16.0, 12.0),
                (2, -1.0, 12.0),
            ],
        }
    }
}

impl FromStr for Stencil {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "central2" => Ok(Stencil::Central2),
            "central4" => Ok(Stencil::Central4),
            _ => Err(Error::Parse(format!("unknown stencil {s:?}; expected central2 or central4"))),
        }
    }
}

impl fmt::Display for Stencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stencil::Central2 => "central2",
            Stencil::Central4 => "central4",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdSettings {
    pub step: f64,
    pub stencil: Stencil,
    pub sample_points: usize,
    pub seed: u64,
}

impl Default for FdSettings {
    fn default() -> Self {
        FdSettings { step: 1e-3, stencil: Stencil::Central2, sample_points: 8, seed: DEFAULT_SEED }
    }
}

impl FdSettings {
    pub fn new(step: f64, stencil: Stencil, sample_points: usize, seed: u64) -> Result<Self> {
        let s = FdSettings { step, stencil, sample_points, seed };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if !(MIN_STEP..=MAX_STEP).contains(&self.step) {
            return Err(Error::domain(format!("step must lie in [{MIN_STEP:e}, {MAX_STEP:e}], got {}", self.step)));
        }
        if self.sample_points == 0 {
            return Err(Error::domain("sample_points must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusEmbedding {
    circle_radii_sq: Vec<f64>,
    ambient_radius_sq: f64,
}

impl TorusEmbedding {
    pub fn new(circle_radii: &[f64], ambient_radius: f64) -> Result<Self> {
        let sq: Vec<f64> = circle_radii.iter().map(|b| b * b).collect();
        if circle_radii.iter().any(|b| !(*b > 0.0)) {
            return Err(Error::domain("circle radii must be positive"));
        }
        Self::from_radii_sq(&sq, ambient_radius * ambient_radius)
    }

    pub fn from_radii_sq(circle_radii_sq: &[f64], ambient_radius_sq: f64) -> Result<Self> {
        if circle_radii_sq.is_empty() {
            return Err(Error::domain("need at least one circle"));
        }
        if circle_radii_sq.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
            return Err(Error::domain("circle radii must be positive"));
        }
        let sum: f64 = circle_radii_sq.iter().sum();
        if (sum - ambient_radius_sq).abs() > 1e-14 * ambient_radius_sq.max(1.0) {
            return Err(Error::domain(format!(
                "sum of squared circle radii is {sum}, ambient radius squared is {ambient_radius_sq}"
            )));
        }
        Ok(TorusEmbedding { circle_radii_sq: circle_radii_sq.to_vec(), ambient_radius_sq })
    }

    /// Circle products only; other factor dimensions are rejected.
    pub fn from_config(config: &ProductConfig<f64>) -> Result<Self> {
        if let Some(f) = config.factors().iter().find(|f| f.dim != 1) {
            return Err(Error::domain(format!(
                "the oracle handles products of circles only; factor {:?} has dimension {}",
                f.label, f.dim
            )));
        }
        let sq: Vec<f64> = config.factors().iter().map(|f| f.radius_sq).collect();
        Self::from_radii_sq(&sq, *config.ambient_radius_sq())
    }

    pub fn circle_radii(&self) -> Vec<f64> {
        self.circle_radii_sq.iter().map(|b| b.sqrt()).collect()
    }

    pub fn ambient_radius(&self) -> f64 {
        self.ambient_radius_sq.sqrt()
    }

    pub fn dim(&self) -> usize {
        self.circle_radii_sq.len()
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.dim()
    }

    /// Same torus with `b_1` moved by `delta` and all radii rescaled back
    /// into the original sphere.
    pub fn perturbed(&self, delta: f64) -> Result<Self> {
        let mut b = self.circle_radii();
        b[0] += delta;
        let scale = self.ambient_radius_sq / b.iter().map(|x| x * x).sum::<f64>();
        let sq: Vec<f64> = b.iter().map(|x| x * x * scale).collect();
        let sum: f64 = sq.iter().sum();
        Self::from_radii_sq(&sq, sum)
    }

    pub fn to_config(&self) -> Result<ProductConfig<f64>> {
        let blocks: Vec<(u32, f64)> = self.circle_radii_sq.iter().map(|b| (1, *b)).collect();
        ProductConfig::from_squares(&blocks, self.ambient_radius_sq)
    }
}

struct Kernel<T> {
    b: Vec<T>,
    r_sq: T,
    h: T,
    stencil: Stencil,
}

type Field<T> = Vec<T>;

fn dot<T: FdReal>(a: &[T], c: &[T]) -> T {
    a.iter().zip(c).fold(T::of(0.0), |acc, (x, y)| acc + *x * *y)
}

fn axpy<T: FdReal>(acc: &mut [T], s: T, v: &[T]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = *a + s * *x;
    }
}

fn norm<T: FdReal>(v: &[T]) -> f64 {
    dot(v, v).sqrt().to_f64()
}

impl<T: FdReal> Kernel<T> {
    fn new(emb: &TorusEmbedding, step: f64, stencil: Stencil) -> Self {
        let b: Vec<T> = emb.circle_radii_sq.iter().map(|s| T::of(*s).sqrt()).collect();
        let r_sq = b.iter().fold(T::of(0.0), |acc, x| acc + *x * *x);
        Kernel { b, r_sq, h: T::of(step), stencil }
    }

    fn phi(&self, u: &[T]) -> Field<T> {
        let mut out = Vec::with_capacity(2 * u.len());
        for (b, ui) in self.b.iter().zip(u) {
            let t = *ui / *b;
            out.push(*b * t.cos());
            out.push(*b * t.sin());
        }
        out
    }

    fn project(&self, mut w: Field<T>, x: &[T]) -> Field<T> {
        let c = -(dot(&w, x) / self.r_sq);
        axpy(&mut w, c, x);
        w
    }

    fn apply(&self, f: &dyn Fn(&[T]) -> Field<T>, u: &[T], i: usize, weights: &[(i32, f64, f64)], power: i32) -> Field<T> {
        let mut scale = T::of(1.0);
        for _ in 0..power {
            scale = scale * self.h;
        }
        let mut acc: Option<Field<T>> = None;
        let mut v = u.to_vec();
        for &(k, num, den) in weights {
            v[i] = u[i] + T::of(k as f64) * self.h;
            let fv = f(&v);
            let w = T::of(num) / (T::of(den) * scale);
            match acc.as_mut() {
                None => acc = Some(fv.into_iter().map(|x| w * x).collect()),
                Some(a) => axpy(a, w, &fv),
            }
        }
        acc.expect("stencils are non-empty")
    }

    fn d1(&self, f: &dyn Fn(&[T]) -> Field<T>, u: &[T], i: usize) -> Field<T> {
        self.apply(f, u, i, self.stencil.first(), 1)
    }

    fn d2(&self, f: &dyn Fn(&[T]) -> Field<T>, u: &[T], i: usize) -> Field<T> {
        self.apply(f, u, i, self.stencil.second(), 2)
    }

    fn tension(&self, u: &[T]) -> Field<T> {
        let phi = |v: &[T]| self.phi(v);
        let mut acc = vec![T::of(0.0); 2 * u.len()];
        for i in 0..u.len() {
            axpy(&mut acc, T::of(1.0), &self.d2(&phi, u, i));
        }
        self.project(acc, &self.phi(u))
    }

    fn bitension(&self, u: &[T]) -> (Field<T>, Field<T>) {
        let x = self.phi(u);
        let tau = self.tension(u);
        let tension = |v: &[T]| self.tension(v);
        let mut acc = vec![T::of(0.0); x.len()];
        for i in 0..u.len() {
            let inner = |v: &[T]| self.project(self.d1(&tension, v, i), &self.phi(v));
            let outer = self.project(self.d1(&inner, u, i), &x);
            axpy(&mut acc, T::of(1.0), &outer);
        }
        // -sum R(X_i, τ) X_i = (sum g(e_i, e_i) τ - sum <τ, X_i> X_i) / r^2, and
        // g(e_i, e_i) = 1 exactly in arclength coordinates
        let phi = |v: &[T]| self.phi(v);
        axpy(&mut acc, T::of(u.len() as f64) / self.r_sq, &tau);
        for i in 0..u.len() {
            let xi = self.d1(&phi, u, i);
            axpy(&mut acc, -(dot(&tau, &xi) / self.r_sq), &xi);
        }
        (tau, acc)
    }
}

fn lift<T: FdReal>(angles: &[f64]) -> Vec<T> {
    angles.iter().map(|a| T::of(*a)).collect()
}

fn lower<T: FdReal>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64()).collect()
}

fn check_angles(emb: &TorusEmbedding, angles: &[f64]) -> Result<()> {
    if angles.len() != emb.dim() {
        return Err(Error::domain(format!("expected {} angles, got {}", emb.dim(), angles.len())));
    }
    Ok(())
}

/// τ at the arclength coordinates `angles`.
pub fn tension_fd(emb: &TorusEmbedding, angles: &[f64], settings: &FdSettings) -> Result<Vec<f64>> {
    tension_fd_in::<TwoFloat>(emb, angles, settings)
}

pub fn tension_fd_in<T: FdReal>(emb: &TorusEmbedding, angles: &[f64], settings: &FdSettings) -> Result<Vec<f64>> {
    settings.validate()?;
    check_angles(emb, angles)?;
    let k = Kernel::<T>::new(emb, settings.step, settings.stencil);
    Ok(lower(&k.tension(&lift::<T>(angles))))
}

/// τ2 at the arclength coordinates `angles`.
pub fn bitension_fd(emb: &TorusEmbedding, angles: &[f64], settings: &FdSettings) -> Result<Vec<f64>> {
    bitension_fd_in::<TwoFloat>(emb, angles, settings)
}

pub fn bitension_fd_in<T: FdReal>(emb: &TorusEmbedding, angles: &[f64], settings: &FdSettings) -> Result<Vec<f64>> {
    settings.validate()?;
    check_angles(emb, angles)?;
    let k = Kernel::<T>::new(emb, settings.step, settings.stencil);
    Ok(lower(&k.bitension(&lift::<T>(angles)).1))
}

/// Coordinates of the evaluation points, one full period per circle.
pub fn sample_angles(emb: &TorusEmbedding, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let periods: Vec<f64> = emb.circle_radii().iter().map(|b| std::f64::consts::TAU * b).collect();
    (0..count).map(|_| periods.iter().map(|p| rng.random::<f64>() * p).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub config: Value,
    pub lambda: f64,
    pub h: f64,
    pub stencil: Stencil,
    pub sample_points: usize,
    pub seed: u64,
    /// Largest `|τ2 - λτ|` over the samples at step `h`.
    pub max_residual: f64,
    /// The same at step `h/2`.
    pub half_step_residual: f64,
    /// `log2` of the residual ratio; absent when both are at the noise floor.
    pub order_estimate: Option<f64>,
    /// `|τ|/m`, the norm of the mean curvature vector.
    pub mean_curvature_norm: f64,
    /// Spread of `|τ|` over the samples.
    pub tension_spread: f64,
    /// Largest `|<τ, ∂_i φ>|` or `|<τ, φ>|`.
    pub max_tangency: f64,
}

struct Sweep {
    residual: f64,
    tension_min: f64,
    tension_max: f64,
    tangency: f64,
}

fn sweep<T: FdReal>(emb: &TorusEmbedding, lambda: f64, step: f64, stencil: Stencil, points: &[Vec<f64>]) -> Sweep {
    let k = Kernel::<T>::new(emb, step, stencil);
    let mut s = Sweep { residual: 0.0, tension_min: f64::INFINITY, tension_max: 0.0, tangency: 0.0 };
    let lam = T::of(lambda);
    for u in points {
        let u = lift::<T>(u);
        let (tau, mut tau2) = k.bitension(&u);
        axpy(&mut tau2, -lam, &tau);
        s.residual = s.residual.max(norm(&tau2));
        let t = norm(&tau);
        s.tension_min = s.tension_min.min(t);
        s.tension_max = s.tension_max.max(t);
        let phi = |v: &[T]| k.phi(v);
        s.tangency = s.tangency.max(dot(&tau, &k.phi(&u)).to_f64().abs());
        for i in 0..u.len() {
            s.tangency = s.tangency.max(dot(&tau, &k.d1(&phi, &u, i)).to_f64().abs());
        }
    }
    s
}

/// Checks `τ2 = λτ` on random sample points in double-double arithmetic.
pub fn verify(emb: &TorusEmbedding, lambda: Option<f64>, settings: &FdSettings) -> Result<OracleReport> {
    verify_in::<TwoFloat>(emb, lambda, settings)
}

pub fn verify_in<T: FdReal>(emb: &TorusEmbedding, lambda: Option<f64>, settings: &FdSettings) -> Result<OracleReport> {
    settings.validate()?;
    let lambda = lambda.unwrap_or(0.0);
    let points = sample_angles(emb, settings.sample_points, settings.seed);
    let full = sweep::<T>(emb, lambda, settings.step, settings.stencil, &points);
    let half = sweep::<T>(emb, lambda, settings.step / 2.0, settings.stencil, &points);
    let order_estimate = (half.residual > NOISE_FLOOR).then(|| (full.residual / half.residual).log2());
    Ok(OracleReport {
        config: emb.to_config()?.to_json(),
        lambda,
        h: settings.step,
        stencil: settings.stencil,
        sample_points: settings.sample_points,
        seed: settings.seed,
        max_residual: full.residual,
        half_step_residual: half.residual,
        order_estimate,
        mean_curvature_norm: full.tension_max / emb.dim() as f64,
        tension_spread: full.tension_max - full.tension_min,
        max_tangency: full.tangency,
    })
}

#[cfg(test)]
mod tests;

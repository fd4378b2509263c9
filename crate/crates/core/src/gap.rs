//! Closed forms for PMC λ-biharmonic immersions `M^m -> S^n(r)`.
//!
//! Write `L = λ r^2` and `D = (m - L)^2 - 4(m - 1)`. The squared mean
//! curvature of such an immersion is bounded by the roots `x1 <= x2` of
//! `m^4 x^2 + m^2 (mλ - (m-2)^2/r^2) x + (m-1) λ^2 = 0`, whose discriminant is
//! `(m^4 (m-2)^2 / r^4) D`; the roots are real exactly when `λ <= λ*` with
//! `λ* = (m - 2 sqrt(m-1)) / r^2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Quantity, Rational, Scalar};

/// Scaled tolerance on the discriminant below which `λ` counts as `λ*`.
pub const CRITICAL_TOL: f64 = 1e-10;

/// Tolerance used to recognise `x` as one of the gap endpoints.
pub const ENDPOINT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct GapParams<S> {
    pub m: u32,
    pub r_sq: S,
    pub lambda: S,
}

impl<S: Scalar> GapParams<S> {
    pub fn new(m: u32, r: S, lambda: S) -> Result<Self> {
        if !r.is_pos() {
            return Err(Error::domain("ambient radius must be positive"));
        }
        Self::with_r_sq(m, r.sq(), lambda)
    }

    pub fn with_r_sq(m: u32, r_sq: S, lambda: S) -> Result<Self> {
        if m < 2 {
            return Err(Error::domain(format!("dimension must be at least 2, got {m}")));
        }
        if !r_sq.is_pos() {
            return Err(Error::domain("ambient radius must be positive"));
        }
        Ok(GapParams { m, r_sq, lambda })
    }

    fn m(&self) -> S {
        S::int(self.m as i64)
    }

    /// `λ r^2`.
    fn scaled_lambda(&self) -> S {
        self.lambda.clone() * self.r_sq.clone()
    }

    /// `D = (m - λ r^2)^2 - 4(m - 1)`.
    pub fn reduced_discriminant(&self) -> S {
        (self.m() - self.scaled_lambda()).sq() - S::int(4 * (self.m as i64 - 1))
    }

    /// `Δ = (m^4 (m-2)^2 / r^4) D`.
    pub fn discriminant(&self) -> S {
        let m = self.m();
        let m2 = S::int(self.m as i64 - 2);
        m.sq().sq() * m2.sq() / self.r_sq.sq() * self.reduced_discriminant()
    }

    /// Whether the discriminant is zero: exactly for rationals, within the
    /// scaled tolerance `|Δ| <= 1e-10 m^4 / r^4` for floats.
    fn discriminant_vanishes(&self) -> bool {
        let scale = (self.m as f64).powi(4) / self.r_sq.to_f64().powi(2);
        self.discriminant().is_zero_within(CRITICAL_TOL * scale)
    }

    fn to_f64(&self) -> GapParams<f64> {
        GapParams { m: self.m, r_sq: self.r_sq.to_f64(), lambda: self.lambda.to_f64() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RangeKind {
    LambdaNonpositive,
    LambdaInterior,
    LambdaCritical,
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    X1,
    X2,
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x1" => Ok(Branch::X1),
            "x2" => Ok(Branch::X2),
            _ => Err(Error::Parse(format!("branch must be x1 or x2, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapResult<S> {
    pub lambda_threshold: f64,
    /// `λ*` itself when it is rational and the computation is exact.
    pub lambda_threshold_exact: Option<Rational>,
    /// `None` when infeasible.
    pub x1: Option<S>,
    pub x2: Option<S>,
    pub range_kind: RangeKind,
    pub discriminant: S,
}

/// `λ* = (m - 2 sqrt(m-1)) / r^2`.
pub fn lambda_threshold<S: Scalar>(p: &GapParams<S>) -> (f64, Option<Rational>) {
    let exact = if S::EXACT {
        S::int(p.m as i64 - 1)
            .sqrt_checked()
            .and_then(|s| ((p.m() - S::int(2) * s) / p.r_sq.clone()).exact())
    } else {
        None
    };
    let m = p.m as f64;
    ((m - 2.0 * (m - 1.0).sqrt()) / p.r_sq.to_f64(), exact)
}

/// `1/r^2 - λ/m`; negative means only minimal immersions exist.
pub fn cmc_bound<S: Scalar>(p: &GapParams<S>) -> S {
    p.r_sq.inv() - p.lambda.clone() / p.m()
}

/// `a^2 = m r^2 / (2m - λ r^2)`.
pub fn umbilical_hypersphere_radius_sq<S: Scalar>(p: &GapParams<S>) -> Result<S> {
    if !(p.scaled_lambda() < p.m()) {
        return Err(Error::domain("no proper λ-biharmonic hypersphere: λ must be below m/r^2"));
    }
    Ok(p.m() * p.r_sq.clone() / (S::int(2) * p.m() - p.scaled_lambda()))
}

pub fn umbilical_hypersphere_radius<S: Scalar>(p: &GapParams<S>) -> Result<f64> {
    Ok(umbilical_hypersphere_radius_sq(p)?.to_f64().sqrt())
}

fn classify<S: Scalar>(p: &GapParams<S>) -> RangeKind {
    if !(p.scaled_lambda() < p.m()) {
        return RangeKind::Infeasible;
    }
    if p.discriminant_vanishes() {
        return RangeKind::LambdaCritical;
    }
    if p.reduced_discriminant().is_neg() {
        return RangeKind::Infeasible;
    }
    if p.lambda.is_pos() {
        RangeKind::LambdaInterior
    } else {
        RangeKind::LambdaNonpositive
    }
}

pub fn gap_endpoints<S: Scalar>(p: &GapParams<S>) -> Result<GapResult<S>> {
    if p.m <= 2 {
        return Err(Error::domain("gap endpoints need m > 2; surfaces are handled by the product summary"));
    }
    let (lambda_threshold, lambda_threshold_exact) = lambda_threshold(p);
    let range_kind = classify(p);
    let discriminant = p.discriminant();
    let (x1, x2) = match range_kind {
        RangeKind::Infeasible => (None, None),
        _ => {
            let (x1, x2) = quadratic_roots(p, range_kind == RangeKind::LambdaCritical)?;
            (Some(x1), Some(x2))
        }
    };
    Ok(GapResult { lambda_threshold, lambda_threshold_exact, x1, x2, range_kind, discriminant })
}

/// Roots of the gap quadratic, larger one first-computed to avoid
/// cancellation; the smaller comes from the product of the roots.
fn quadratic_roots<S: Scalar>(p: &GapParams<S>, critical: bool) -> Result<(S, S)> {
    let m = p.m();
    let a = m.sq().sq();
    let b = m.sq() * (m.clone() * p.lambda.clone() - S::int(p.m as i64 - 2).sq() / p.r_sq.clone());
    let c = S::int(p.m as i64 - 1) * p.lambda.sq();
    if critical {
        let x = -b / (S::int(2) * a);
        return Ok((x.clone(), x));
    }
    let root_d = p.reduced_discriminant().try_sqrt("gap discriminant")?;
    let sqrt_delta = m.sq() * S::int(p.m as i64 - 2) / p.r_sq.clone() * root_d;
    // b <= 0 throughout the feasible region, so -b + sqrt(Δ) has no cancellation.
    let q = (sqrt_delta - b) / S::int(2);
    let x2 = q.clone() / a;
    let x1 = c / q;
    Ok((x1, x2))
}

/// `(r1^2, r2^2)` of the `L x S^1` splitting on the given branch.
pub fn splitting_radii<S: Scalar>(p: &GapParams<S>, branch: Branch) -> Result<(S, S)> {
    let gap = gap_endpoints(p)?;
    if gap.range_kind == RangeKind::Infeasible {
        return Err(Error::domain("λ above the threshold: no splitting exists"));
    }
    if branch == Branch::X1 && !p.lambda.is_pos() {
        return Err(Error::domain("branch x1 needs λ > 0"));
    }
    let root_d = if gap.range_kind == RangeKind::LambdaCritical {
        S::zero()
    } else {
        p.reduced_discriminant().try_sqrt("splitting discriminant")?
    };
    let signed = match branch {
        Branch::X2 => root_d,
        Branch::X1 => -root_d,
    };
    Ok(radii_from_root(p.m, &p.r_sq, &p.scaled_lambda(), &signed))
}

fn radii_from_root<S: Scalar>(m: u32, r_sq: &S, l: &S, signed_root: &S) -> (S, S) {
    let m = m as i64;
    let den = S::int(2) * (S::int(2 * m) - l.clone());
    let r1 = (S::int(3 * m - 2) - l.clone() - signed_root.clone()) / den.clone() * r_sq.clone();
    let r2 = (S::int(m + 2) - l.clone() + signed_root.clone()) / den * r_sq.clone();
    (r1, r2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereCircleSolution<S> {
    pub r1_sq: S,
    pub r2_sq: S,
    /// `r2^2 / r1^2`.
    pub alpha: S,
    pub case_id: u8,
    pub branch: Branch,
}

/// All `S^{m-1}(r1) x S^1(r2)` in `S^{m+1}(r)` that are proper λ-biharmonic.
///
/// Roots `α = r2^2/r1^2` of `(m-1)α^2 - (m - λr^2)α + 1 = 0` with `α > 0`
/// and `α(m-1) != 1`. Case 1 is the double root (`m > 2`), case 3 is
/// `λ = 0`, case 2 covers the remaining two-root situations. The `x2`
/// solution is listed first.
pub fn sphere_circle_solutions<S: Scalar>(m: u32, r_sq: &S, lambda: &S) -> Result<Vec<SphereCircleSolution<S>>> {
    let p = GapParams::with_r_sq(m, r_sq.clone(), lambda.clone())?;
    let mm1 = S::int(m as i64 - 1);
    let b = p.m() - p.scaled_lambda();
    let double = p.discriminant_vanishes() && m > 2;
    let d = p.reduced_discriminant();
    if !double && d.is_neg() {
        return Ok(Vec::new());
    }
    let root_d = if double { S::zero() } else { d.try_sqrt("sphere-circle discriminant")? };
    let mut candidates = vec![(Branch::X2, root_d.clone())];
    if !double {
        candidates.push((Branch::X1, -root_d));
    }
    let mut out = Vec::new();
    for (branch, signed) in candidates {
        let alpha = (b.clone() + signed.clone()) / (S::int(2) * mm1.clone());
        if !alpha.is_pos() {
            continue;
        }
        if (alpha.clone() * mm1.clone() - S::one()).is_zero_within(1e-12) {
            continue;
        }
        let case_id = if double {
            1
        } else if lambda.is_zero_within(0.0) {
            3
        } else {
            2
        };
        let r1_sq = r_sq.clone() / (S::one() + alpha.clone());
        let r2_sq = r_sq.clone() - r1_sq.clone();
        out.push(SphereCircleSolution { r1_sq, r2_sq, alpha, case_id, branch });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypersphereReduction<S> {
    pub lambda_prime: S,
    pub tau_norm_sq: S,
    pub h_iota_sq: S,
    pub feasible: bool,
}

/// Reduction of a λ-biharmonic immersion lying in a small hypersphere
/// `S^{n-1}(a)` of `S^n(r)`.
pub fn hypersphere_reduction<S: Scalar>(m: u32, a_sq: &S, r_sq: &S, lambda: &S) -> Result<HypersphereReduction<S>> {
    if !a_sq.is_pos() || !r_sq.is_pos() {
        return Err(Error::domain("radii must be positive"));
    }
    if a_sq.clone() > r_sq.clone() {
        return Err(Error::domain("hypersphere radius a must not exceed r"));
    }
    let mm = S::int(m as i64);
    let two_m = S::int(2 * m as i64);
    let lambda_prime =
        two_m.clone() * (a_sq.inv() + lambda.clone() / two_m - r_sq.inv());
    let tau_norm_sq =
        mm.sq() / r_sq.clone() * (S::int(2) - r_sq.clone() / a_sq.clone()) - mm.clone() * lambda.clone();
    let h_iota_sq = r_sq.inv() - lambda.clone() / mm;
    let feasible = !tau_norm_sq.is_neg() || tau_norm_sq.is_zero_within(1e-12);
    Ok(HypersphereReduction { lambda_prime, tau_norm_sq, h_iota_sq, feasible })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumDetail<S> {
    pub theta: S,
    pub omega: S,
    pub sigma: S,
    pub kappa_sq: S,
    pub kappa: f64,
    pub circle_radius_sq: S,
    pub circle_radius: f64,
    /// Which endpoint `x` was recognised as, if any.
    pub endpoint: Option<Branch>,
}

/// Shape-operator spectrum of `A_H` at squared mean curvature `x`.
///
/// Only meaningful at the gap endpoints; other `x` are computed anyway and
/// reported with `endpoint = None`.
pub fn spectrum_detail<S: Scalar>(p: &GapParams<S>, x: &S) -> Result<SpectrumDetail<S>> {
    let m = p.m();
    let mm1 = S::int(p.m as i64 - 1);
    let radicand = (S::int(4) * m.sq() * x.clone() + p.r_sq.clone() * p.lambda.sq()) / p.r_sq.clone();
    let w = radicand.try_sqrt("spectrum radicand")? / m.sq();
    let theta = x.clone() + w.clone();
    let omega = x.clone() - mm1.clone() * w.clone();
    let rest = m.clone() / p.r_sq.clone() - p.lambda.clone();
    let sigma_sq = (rest.clone() - m.clone() * x.clone()) * x.clone() / (m.clone() * mm1);
    let sigma = sigma_sq.try_sqrt("traceless eigenvalue radicand")?;
    if w.is_zero_within(0.0) {
        return Err(Error::domain("degenerate spectrum: theta = omega"));
    }
    let kappa_sq = omega.clone() * (rest - m * theta.clone()) / (omega.clone() - theta.clone());
    if kappa_sq.is_neg() {
        return Err(Error::domain("negative geodesic curvature squared"));
    }
    let circle_radius_sq = p.r_sq.clone() / (S::one() + kappa_sq.clone() * p.r_sq.clone());
    let endpoint = which_endpoint(p, x);
    Ok(SpectrumDetail {
        kappa: kappa_sq.to_f64().sqrt(),
        circle_radius: circle_radius_sq.to_f64().sqrt(),
        theta,
        omega,
        sigma,
        kappa_sq,
        circle_radius_sq,
        endpoint,
    })
}

fn which_endpoint<S: Scalar>(p: &GapParams<S>, x: &S) -> Option<Branch> {
    if let Ok(g) = gap_endpoints(p) {
        let hit = |e: &Option<S>| match e {
            Some(e) if S::EXACT => e == x,
            Some(e) => (e.to_f64() - x.to_f64()).abs() <= ENDPOINT_TOL,
            None => false,
        };
        return if hit(&g.x2) {
            Some(Branch::X2)
        } else if hit(&g.x1) {
            Some(Branch::X1)
        } else {
            None
        };
    }
    // Exact endpoints may be irrational; compare in binary64 instead.
    let g = gap_endpoints(&p.to_f64()).ok()?;
    let xf = x.to_f64();
    let hit = |e: Option<f64>| e.is_some_and(|e| (e - xf).abs() <= ENDPOINT_TOL);
    if hit(g.x2) {
        Some(Branch::X2)
    } else if hit(g.x1) {
        Some(Branch::X1)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EqualitySide {
    None,
    Lower,
    Upper,
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OkumuraReport {
    pub lower: f64,
    pub upper: f64,
    pub sum_cubes: f64,
    pub equality_side: EqualitySide,
}

/// Two-sided bound on `sum b_i^3` for traceless `b`:
/// `|sum b_i^3| <= (m-2)/sqrt(m(m-1)) (sum b_i^2)^{3/2}`.
pub fn okumura(b: &[f64]) -> Result<OkumuraReport> {
    let m = b.len();
    if m < 2 {
        return Err(Error::domain("need at least two values"));
    }
    let scale = b.iter().fold(1.0f64, |s, x| s.max(x.abs()));
    let trace: f64 = b.iter().sum();
    if trace.abs() > 1e-10 * scale {
        return Err(Error::domain(format!("values must sum to zero, got {trace:e}")));
    }
    let mf = m as f64;
    let norm_sq: f64 = b.iter().map(|x| x * x).sum();
    let upper = (mf - 2.0) / (mf * (mf - 1.0)).sqrt() * norm_sq.powf(1.5);
    let sum_cubes: f64 = b.iter().map(|x| x * x * x).sum();
    let mut sorted = b.to_vec();
    sorted.sort_by(f64::total_cmp);
    let tol = 1e-10 * scale;
    // m-1 equal non-negative entries give the lower bound, m-1 equal
    // non-positive entries the upper one.
    let lower_eq = sorted[m - 1] - sorted[1] <= tol && sorted[1] >= -tol;
    let upper_eq = sorted[m - 2] - sorted[0] <= tol && sorted[m - 2] <= tol;
    let equality_side = match (lower_eq, upper_eq) {
        (true, true) => EqualitySide::Both,
        (true, false) => EqualitySide::Lower,
        (false, true) => EqualitySide::Upper,
        (false, false) => EqualitySide::None,
    };
    Ok(OkumuraReport { lower: -upper, upper, sum_cubes, equality_side })
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub m: u32,
    pub r_sq: Quantity,
    pub lambda: Quantity,
    pub arithmetic: &'static str,
    pub lambda_threshold: Quantity,
    pub range_kind: RangeKind,
    pub x1: Option<Quantity>,
    pub x2: Option<Quantity>,
    pub cmc_bound: Quantity,
}

impl GapReport {
    pub fn new<S: Scalar>(p: &GapParams<S>, g: &GapResult<S>) -> Self {
        GapReport {
            m: p.m,
            r_sq: Quantity::of(&p.r_sq),
            lambda: Quantity::of(&p.lambda),
            arithmetic: if S::EXACT { "exact" } else { "float" },
            lambda_threshold: Quantity { decimal: g.lambda_threshold, rational: g.lambda_threshold_exact.clone() },
            range_kind: g.range_kind,
            x1: g.x1.as_ref().map(Quantity::of),
            x2: g.x2.as_ref().map(Quantity::of),
            cmc_bound: Quantity::of(&cmc_bound(p)),
        }
    }
}

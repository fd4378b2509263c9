//! Biharmonic products `M1 x M2 -> S^{n1}(r1) x S^{n2}(r2) -> S^n` with
//! `r1^2 + r2^2 = 1`.
//!
//! The product is proper biharmonic iff it is not harmonic, each factor is
//! λ_i-biharmonic in its own sphere with
//! `λ1 = 2 r2^2 (m1/r1^2 - m2/r2^2)` and `λ2 = 2 r1^2 (m2/r2^2 - m1/r1^2)`,
//! and `|τ1|^2/r1^2 - |τ2|^2/r2^2 + (r2^2 - r1^2)(m2/r2^2 - m1/r1^2)^2 = 0`.

mod enumerate;
mod scan;

pub use enumerate::{enumerate_factorizations, four_block_dims, CaseSolution, FactorCurvature, RemarkSigns};
pub use scan::{bound_g, bound_h, bound_scan, first_radius_residual, first_radius_roots, BoundScan};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::RADIUS_SUM_TOL;
use crate::scalar::{rational_string, Quantity, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct BiproductSpec<S> {
    pub m1: u32,
    pub m2: u32,
    pub r1_sq: S,
    pub r2_sq: S,
    pub h1_sq: S,
    pub h2_sq: S,
}

impl<S: Scalar> BiproductSpec<S> {
    pub fn new(m1: u32, m2: u32, r1_sq: S, h1_sq: S, h2_sq: S) -> Result<Self> {
        let r2_sq = S::one() - r1_sq.clone();
        check_radius(&r1_sq)?;
        if h1_sq.is_neg() || h2_sq.is_neg() {
            return Err(Error::domain("squared mean curvatures must be non-negative"));
        }
        if m1 < 1 || m2 < 1 {
            return Err(Error::domain("factor dimensions must be positive"));
        }
        Ok(BiproductSpec { m1, m2, r1_sq, r2_sq, h1_sq, h2_sq })
    }

    /// As [`BiproductSpec::new`] but with an explicit `r2^2`, which must
    /// complete `r1^2` to one.
    pub fn with_radii(m1: u32, m2: u32, r1_sq: S, r2_sq: S, h1_sq: S, h2_sq: S) -> Result<Self> {
        let gap = r1_sq.clone() + r2_sq.clone() - S::one();
        if !gap.is_zero_within(RADIUS_SUM_TOL) {
            return Err(Error::domain(format!(
                "r1^2 + r2^2 must be 1, got {}",
                (r1_sq.clone() + r2_sq.clone()).to_f64()
            )));
        }
        let mut s = Self::new(m1, m2, r1_sq, h1_sq, h2_sq)?;
        s.r2_sq = r2_sq;
        Ok(s)
    }

    fn balance(&self) -> S {
        S::int(self.m2 as i64) / self.r2_sq.clone() - S::int(self.m1 as i64) / self.r1_sq.clone()
    }
}

fn check_radius<S: Scalar>(r1_sq: &S) -> Result<()> {
    if !r1_sq.is_pos() || !(r1_sq.clone() < S::one()) {
        return Err(Error::domain(format!("r1^2 must lie in (0, 1), got {}", r1_sq.to_f64())));
    }
    Ok(())
}

/// `(λ1, λ2)` the factors must satisfy for the product to be biharmonic.
pub fn lambdas_from_radii<S: Scalar>(m1: u32, m2: u32, r1_sq: &S) -> Result<(S, S)> {
    check_radius(r1_sq)?;
    let r2_sq = S::one() - r1_sq.clone();
    let diff = S::int(m1 as i64) / r1_sq.clone() - S::int(m2 as i64) / r2_sq.clone();
    Ok((S::int(2) * r2_sq * diff.clone(), -(S::int(2) * r1_sq.clone() * diff)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiproductResidual<S> {
    pub line4: S,
    pub lambda1: S,
    pub lambda2: S,
    /// The product is not harmonic.
    pub eq1_ok: bool,
}

pub fn biproduct_residual<S: Scalar>(spec: &BiproductSpec<S>) -> BiproductResidual<S> {
    let (m1, m2) = (S::int(spec.m1 as i64), S::int(spec.m2 as i64));
    let tau1 = m1.sq() * spec.h1_sq.clone();
    let tau2 = m2.sq() * spec.h2_sq.clone();
    let balance = spec.balance();
    let line4 = tau1 / spec.r1_sq.clone() - tau2 / spec.r2_sq.clone()
        + (spec.r2_sq.clone() - spec.r1_sq.clone()) * balance.sq();
    let diff = -balance.clone();
    let lambda1 = S::int(2) * spec.r2_sq.clone() * diff.clone();
    let lambda2 = -(S::int(2) * spec.r1_sq.clone() * diff);
    let eq1_ok = spec.h1_sq.is_pos() || spec.h2_sq.is_pos() || !balance.is_zero_within(1e-12);
    BiproductResidual { line4, lambda1, lambda2, eq1_ok }
}

/// `|H|^2` of the composed immersion into `S^n`.
pub fn composed_mean_curvature<S: Scalar>(spec: &BiproductSpec<S>) -> S {
    let m = S::int((spec.m1 + spec.m2) as i64);
    let (m1, m2) = (S::int(spec.m1 as i64), S::int(spec.m2 as i64));
    (m1.sq() * spec.h1_sq.clone() + m2.sq() * spec.h2_sq.clone()
        + spec.r1_sq.clone() * spec.r2_sq.clone() * spec.balance().sq())
        / m.sq()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub closed: bool,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        if self.closed {
            self.lo <= x && x <= self.hi
        } else {
            self.lo < x && x < self.hi
        }
    }

    pub fn is_within(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusWindows {
    pub r1_cmc: Interval,
    pub r1_pmc: Interval,
    pub r2_cmc: Interval,
    pub r2_pmc: Interval,
}

fn windows_for(own: u32, other: u32) -> (Interval, Interval) {
    let m = (own + other) as f64;
    let (a, b) = (own as f64, other as f64);
    let cmc = Interval { lo: a / (2.0 * m), hi: (2.0 * a + b) / (2.0 * m), closed: false };
    let pmc = Interval {
        lo: (a + 2.0 * (a - 1.0).sqrt()) / (2.0 * m),
        hi: (2.0 * a + b - 2.0 * (b - 1.0).sqrt()) / (2.0 * m),
        closed: true,
    };
    (cmc, pmc)
}

/// Ranges of `r1^2` and `r2^2` allowed by the CMC and PMC bounds on each
/// factor.
pub fn admissible_radius_intervals(m1: u32, m2: u32) -> Result<RadiusWindows> {
    if m1 < 2 || m2 < 2 {
        return Err(Error::domain("factor dimensions must be at least 2"));
    }
    let (r1_cmc, r1_pmc) = windows_for(m1, m2);
    let (r2_cmc, r2_pmc) = windows_for(m2, m1);
    Ok(RadiusWindows { r1_cmc, r1_pmc, r2_cmc, r2_pmc })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HMaxReport<S> {
    pub h1_at_max: bool,
    pub h2_at_max: bool,
    pub composed: S,
    pub line4: S,
}

/// Whether each factor sits at its CMC bound `1/r_i^2 - λ_i/m_i`.
pub fn h_max_equivalence<S: Scalar>(m1: u32, m2: u32, r1_sq: &S, h1_sq: &S, h2_sq: &S) -> Result<HMaxReport<S>> {
    let spec = BiproductSpec::new(m1, m2, r1_sq.clone(), h1_sq.clone(), h2_sq.clone())?;
    let res = biproduct_residual(&spec);
    let max1 = spec.r1_sq.inv() - res.lambda1.clone() / S::int(m1 as i64);
    let max2 = spec.r2_sq.inv() - res.lambda2.clone() / S::int(m2 as i64);
    Ok(HMaxReport {
        h1_at_max: (h1_sq.clone() - max1).is_zero_within(1e-12),
        h2_at_max: (h2_sq.clone() - max2).is_zero_within(1e-12),
        composed: composed_mean_curvature(&spec),
        line4: res.line4,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Saturation {
    pub r1_sq: Rational,
    pub r2_sq: Rational,
    pub alphas: [Rational; 4],
    pub h_iota_sq: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeSummary {
    pub m1: u32,
    pub m2: u32,
    /// Upper end `(m-4)/m` of the continuous part, absent when only `{1}`.
    pub upper: Option<Rational>,
    pub saturation: Option<Saturation>,
}

impl RangeSummary {
    pub fn text(&self) -> String {
        match &self.upper {
            None => "{1}".to_string(),
            Some(u) => format!("(0, {}] ∪ {{1}}", rational_string(u)),
        }
    }
}

/// Possible values of `|H|` for PMC proper biharmonic `M1 x M2` with PMC
/// non-minimal factors.
pub fn summarize_range(m1: u32, m2: u32) -> Result<RangeSummary> {
    if m1 < 2 || m2 < 2 {
        return Err(Error::domain("factor dimensions must be at least 2"));
    }
    if m1 == 2 && m2 == 2 {
        return Ok(RangeSummary { m1, m2, upper: None, saturation: None });
    }
    let m = (m1 + m2) as i64;
    let a = Rational::ratio(1, 2 * (m - 2));
    let b = Rational::ratio(1, 4);
    let r1_sq = Rational::ratio(3 * m1 as i64 + m2 as i64 - 4, 4 * (m - 2));
    let saturation = Saturation {
        r2_sq: Rational::one() - r1_sq.clone(),
        r1_sq,
        alphas: [a.clone(), b.clone(), a, b],
        h_iota_sq: Rational::ratio((m - 4) * (m - 4), m * m),
    };
    Ok(RangeSummary { m1, m2, upper: Some(Rational::ratio(m - 4, m)), saturation: Some(saturation) })
}

#[derive(Serialize)]
struct SaturationOut {
    r1_sq: Quantity,
    r2_sq: Quantity,
    alphas: Vec<Quantity>,
    h_iota_sq: Quantity,
}

impl Serialize for RangeSummary {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        #[derive(Serialize)]
        struct Out {
            m1: u32,
            m2: u32,
            range: String,
            upper: Option<Quantity>,
            saturation: Option<SaturationOut>,
        }
        Out {
            m1: self.m1,
            m2: self.m2,
            range: self.text(),
            upper: self.upper.as_ref().map(Quantity::of),
            saturation: self.saturation.as_ref().map(|sat| SaturationOut {
                r1_sq: Quantity::of(&sat.r1_sq),
                r2_sq: Quantity::of(&sat.r2_sq),
                alphas: sat.alphas.iter().map(Quantity::of).collect(),
                h_iota_sq: Quantity::of(&sat.h_iota_sq),
            }),
        }
        .serialize(s)
    }
}

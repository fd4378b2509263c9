//! Solutions of the biharmonic system for a product of blocks in `S^n`.
//!
//! With `α_i = a_i^2 / d_i` the system reads
//! `α_i (D - 2m^2) + 2m - 1/α_i = 0`, `D = sum d_j / α_j`, so every `α_i` is a
//! positive root of `(2m^2 - D) z^2 - 2m z + 1 = 0`. Either all ratios equal
//! `1/m`, or the blocks split into two groups of total dimensions
//! `N1 != N2` carrying `1/(2 N1)` and `1/(2 N2)`.
//!
//! For the blocks `(m1 - 1, 1, m2 - 1, 1)` of `L1 x S^1 x L2 x S^1` the
//! enumeration order reproduces the classical list of eight cases.

use num::Zero;
use serde::Serialize;

use super::lambdas_from_radii;
use crate::gap::{gap_endpoints, Branch, GapParams, RangeKind};
use crate::geometry::{lambda_residual, mean_curvature, ProductConfig};
use crate::scalar::{Quantity, Rational, Scalar};

/// Blocks `(m1 - 1, 1, m2 - 1, 1)`.
pub fn four_block_dims(m1: u32, m2: u32) -> Vec<u32> {
    vec![m1 - 1, 1, m2 - 1, 1]
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseSolution {
    pub case_id: usize,
    /// False only for the four-block `L1 x S^1 x L2 x S^1` shape.
    pub extension: bool,
    /// Group (1 or 2) of each block; `None` for the all-equal solution.
    pub groups: Option<Vec<u8>>,
    /// Total dimensions of group 1 (the one holding block 0) and group 2.
    pub group_dims: Option<(u32, u32)>,
    pub alphas: Vec<Rational>,
    pub radii_sq: Vec<Rational>,
    /// Squared radius of the sphere holding the first half of the blocks.
    pub r1_sq: Rational,
    pub r2_sq: Rational,
    pub h_iota_sq: Rational,
    pub admissible: bool,
    pub rejection_reason: Option<String>,
    /// Present for four-block inputs with both halves non-minimal.
    pub factor_curvature: Option<FactorCurvature>,
    pub config: ProductConfig<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorCurvature {
    pub h1_sq: Rational,
    pub h2_sq: Rational,
    pub lambda1: Rational,
    pub lambda2: Rational,
    /// Each half is λ_i-biharmonic in its own sphere.
    pub factor_equations_hold: bool,
    /// Endpoint of the factor's gap interval that `h_i^2` sits at.
    pub branches: [Option<Branch>; 2],
    pub remark: Option<RemarkSigns>,
}

/// Signs of `m1^2 + m2^2 - m1 m2^2` and `m1^2 + m2^2 - m1^2 m2`, with the
/// endpoints they predict for the crossed case
/// `α1 = α4 = 1/(2 m1)`, `α2 = α3 = 1/(2 m2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemarkSigns {
    pub s1: i64,
    pub s2: i64,
    pub predicted: Option<[Branch; 2]>,
}

impl RemarkSigns {
    fn new(m1: u32, m2: u32) -> Self {
        let (a, b) = (m1 as i64, m2 as i64);
        let s1 = a * a + b * b - a * b * b;
        let s2 = a * a + b * b - a * a * b;
        let predicted = match (s1.signum(), s2.signum()) {
            (1, -1) => Some([Branch::X2, Branch::X1]),
            (-1, 1) => Some([Branch::X1, Branch::X2]),
            (-1, -1) => Some([Branch::X1, Branch::X1]),
            _ => None,
        };
        RemarkSigns { s1, s2, predicted }
    }
}

/// Bipartitions as the group holding block 0, in case-list order: groups of
/// size 2, 3, ..., k-1 in lexicographic order, then block 0 alone.
fn bipartitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 2..k {
        combinations(1, k, size - 1, &mut vec![0], &mut out);
    }
    if k >= 2 {
        out.push(vec![0]);
    }
    out
}

fn combinations(start: usize, k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    for i in start..k {
        cur.push(i);
        combinations(i + 1, k, left - 1, cur, out);
        cur.pop();
    }
}

pub fn enumerate_factorizations(dims: &[u32]) -> Vec<CaseSolution> {
    let k = dims.len();
    if k == 0 || dims.contains(&0) {
        return Vec::new();
    }
    let m: u32 = dims.iter().sum();
    let four_block = k == 4;
    let standard_shape = four_block && dims[1] == 1 && dims[3] == 1;
    let mut out = Vec::new();

    let equal = vec![Rational::ratio(1, m as i64); k];
    out.push(build(1, dims, None, equal, four_block, standard_shape));

    for (idx, group) in bipartitions(k).into_iter().enumerate() {
        let mut groups = vec![2u8; k];
        for &i in &group {
            groups[i] = 1;
        }
        let n1: u32 = group.iter().map(|&i| dims[i]).sum();
        let n2 = m - n1;
        let alphas = groups
            .iter()
            .map(|&g| Rational::ratio(1, 2 * if g == 1 { n1 } else { n2 } as i64))
            .collect();
        out.push(build(idx + 2, dims, Some((groups, n1, n2)), alphas, four_block, standard_shape));
    }
    out
}

fn build(
    case_id: usize,
    dims: &[u32],
    split: Option<(Vec<u8>, u32, u32)>,
    alphas: Vec<Rational>,
    four_block: bool,
    standard_shape: bool,
) -> CaseSolution {
    let k = dims.len();
    let radii_sq: Vec<Rational> =
        dims.iter().zip(&alphas).map(|(&d, a)| Rational::int(d as i64) * a.clone()).collect();
    let half = k.div_ceil(2);
    let r1_sq: Rational = radii_sq[..half].iter().cloned().sum();
    let r2_sq = Rational::one() - r1_sq.clone();
    let blocks: Vec<(u32, Rational)> = dims.iter().copied().zip(radii_sq.iter().cloned()).collect();
    let config = ProductConfig::from_squares(&blocks, Rational::one())
        .expect("ratios always sum to the unit sphere");
    let h_iota_sq = mean_curvature(&config).h_norm_sq;

    let rejection_reason = match &split {
        None => Some("minimal: all ratios equal".to_string()),
        Some((_, n1, n2)) if n1 == n2 => Some("equal group dimensions".to_string()),
        _ if four_block && alphas[0] == alphas[1] => Some("first factor minimal (α1 = α2)".to_string()),
        _ if four_block && alphas[2] == alphas[3] => Some("second factor minimal (α3 = α4)".to_string()),
        _ if h_iota_sq.is_zero() => Some("minimal".to_string()),
        _ => None,
    };
    let admissible = rejection_reason.is_none();
    let factor_curvature = if four_block && alphas[0] != alphas[1] && alphas[2] != alphas[3] {
        let crossed = standard_shape && alphas[0] == alphas[3] && alphas[1] == alphas[2];
        Some(factor_curvature(dims, &radii_sq, &r1_sq, crossed))
    } else {
        None
    };
    let (groups, group_dims) = match split {
        Some((g, n1, n2)) => (Some(g), Some((n1, n2))),
        None => (None, None),
    };
    CaseSolution {
        case_id,
        extension: !standard_shape,
        groups,
        group_dims,
        alphas,
        radii_sq,
        r1_sq,
        r2_sq,
        h_iota_sq,
        admissible,
        rejection_reason,
        factor_curvature,
        config,
    }
}

fn factor_curvature(dims: &[u32], radii_sq: &[Rational], r1_sq: &Rational, crossed: bool) -> FactorCurvature {
    let r2_sq = Rational::one() - r1_sq.clone();
    let m1 = dims[0] + dims[1];
    let m2 = dims[2] + dims[3];
    let f1 = ProductConfig::from_squares(&[(dims[0], radii_sq[0].clone()), (dims[1], radii_sq[1].clone())], r1_sq.clone())
        .expect("first half sums to r1^2");
    let f2 = ProductConfig::from_squares(&[(dims[2], radii_sq[2].clone()), (dims[3], radii_sq[3].clone())], r2_sq.clone())
        .expect("second half sums to r2^2");
    let h1_sq = mean_curvature(&f1).h_norm_sq;
    let h2_sq = mean_curvature(&f2).h_norm_sq;
    let (lambda1, lambda2) = lambdas_from_radii(m1, m2, r1_sq).expect("0 < r1^2 < 1");
    let factor_equations_hold =
        lambda_residual(&f1, &lambda1).vanish(0.0) && lambda_residual(&f2, &lambda2).vanish(0.0);
    let branches = [
        endpoint_of(m1, r1_sq, &lambda1, &h1_sq),
        endpoint_of(m2, &r2_sq, &lambda2, &h2_sq),
    ];
    let remark = crossed.then(|| RemarkSigns::new(m1, m2));
    FactorCurvature { h1_sq, h2_sq, lambda1, lambda2, factor_equations_hold, branches, remark }
}

fn endpoint_of(m: u32, r_sq: &Rational, lambda: &Rational, h_sq: &Rational) -> Option<Branch> {
    if m <= 2 {
        return None;
    }
    let p = GapParams::with_r_sq(m, r_sq.to_f64(), lambda.to_f64()).ok()?;
    let g = gap_endpoints(&p).ok()?;
    if g.range_kind == RangeKind::Infeasible {
        return None;
    }
    let h = h_sq.to_f64();
    let near = |x: Option<f64>| x.is_some_and(|x| (x - h).abs() <= 1e-10 * x.abs().max(1.0));
    if near(g.x2) {
        Some(Branch::X2)
    } else if near(g.x1) {
        Some(Branch::X1)
    } else {
        None
    }
}

#[derive(Serialize)]
struct FactorCurvatureOut<'a> {
    h1_sq: Quantity,
    h2_sq: Quantity,
    lambda1: Quantity,
    lambda2: Quantity,
    factor_equations_hold: bool,
    branches: [Option<Branch>; 2],
    remark: Option<&'a RemarkSigns>,
}

#[derive(Serialize)]
struct CaseSolutionOut<'a> {
    case_id: usize,
    extension: bool,
    groups: Option<&'a Vec<u8>>,
    group_dims: Option<(u32, u32)>,
    alphas: Vec<Quantity>,
    radii_sq: Vec<Quantity>,
    r1_sq: Quantity,
    r2_sq: Quantity,
    h_iota_sq: Quantity,
    admissible: bool,
    rejection_reason: Option<&'a str>,
    factor_curvature: Option<FactorCurvatureOut<'a>>,
    config: &'a ProductConfig<Rational>,
}

impl Serialize for CaseSolution {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        CaseSolutionOut {
            case_id: self.case_id,
            extension: self.extension,
            groups: self.groups.as_ref(),
            group_dims: self.group_dims,
            alphas: self.alphas.iter().map(Quantity::of).collect(),
            radii_sq: self.radii_sq.iter().map(Quantity::of).collect(),
            r1_sq: Quantity::of(&self.r1_sq),
            r2_sq: Quantity::of(&self.r2_sq),
            h_iota_sq: Quantity::of(&self.h_iota_sq),
            admissible: self.admissible,
            rejection_reason: self.rejection_reason.as_deref(),
            factor_curvature: self.factor_curvature.as_ref().map(|f| FactorCurvatureOut {
                h1_sq: Quantity::of(&f.h1_sq),
                h2_sq: Quantity::of(&f.h2_sq),
                lambda1: Quantity::of(&f.lambda1),
                lambda2: Quantity::of(&f.lambda2),
                factor_equations_hold: f.factor_equations_hold,
                branches: f.branches,
                remark: f.remark.as_ref(),
            }),
            config: &self.config,
        }
        .serialize(s)
    }
}

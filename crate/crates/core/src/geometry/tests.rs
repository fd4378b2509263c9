use super::*;
use proptest::prelude::*;

fn q(p: i64, d: i64) -> Rational {
    Rational::ratio(p, d)
}

/// Vector model: `eta_i = e_i`, position `sum a_i e_i`, and the trace of the
/// second fundamental form over factor `i` is `d_i` times the projection of
/// `-e_i / a_i` off the position direction.
struct VectorModel {
    a: Vec<f64>,
    d: Vec<f64>,
    r_sq: f64,
}

impl VectorModel {
    fn of(c: &ProductConfig<f64>) -> Self {
        VectorModel {
            a: c.factors().iter().map(|f| f.radius_sq.sqrt()).collect(),
            d: c.factors().iter().map(|f| f.dim as f64).collect(),
            r_sq: *c.ambient_radius_sq(),
        }
    }

    fn normal_of(&self, i: usize) -> Vec<f64> {
        let k = self.a.len();
        let mut v = vec![0.0; k];
        v[i] = -1.0 / self.a[i];
        let dot: f64 = (0..k).map(|j| v[j] * self.a[j]).sum();
        for j in 0..k {
            v[j] -= dot * self.a[j] / self.r_sq;
        }
        v
    }

    fn mean_curvature(&self) -> Vec<f64> {
        let k = self.a.len();
        let m: f64 = self.d.iter().sum();
        let mut h = vec![0.0; k];
        for i in 0..k {
            let n = self.normal_of(i);
            for j in 0..k {
                h[j] += self.d[i] * n[j] / m;
            }
        }
        h
    }

    fn eigenvalues(&self) -> Vec<f64> {
        let h = self.mean_curvature();
        (0..self.a.len())
            .map(|i| self.normal_of(i).iter().zip(&h).map(|(x, y)| x * y).sum())
            .collect()
    }

    fn residual(&self, lambda: f64) -> Vec<f64> {
        let k = self.a.len();
        let m: f64 = self.d.iter().sum();
        let h = self.mean_curvature();
        let mu = self.eigenvalues();
        let mut out = vec![0.0; k];
        for i in 0..k {
            let n = self.normal_of(i);
            for j in 0..k {
                out[j] += self.d[i] * mu[i] * n[j];
            }
        }
        for j in 0..k {
            out[j] -= (m / self.r_sq - lambda) * h[j];
        }
        out
    }
}

fn case3_33() -> ProductConfig<Rational> {
    ProductConfig::from_ratios(&[(2, 1, 4), (1, 1, 4), (2, 1, 4), (1, 1, 4)], q(1, 1)).unwrap()
}

#[test]
fn case3_exact_curvature() {
    let c = case3_33();
    let rep = mean_curvature(&c);
    assert_eq!(rep.h_norm_sq, q(1, 9));
    let eig = rep.distinct_eigenvalues(0.0);
    assert_eq!(
        eig,
        vec![
            Eigenvalue { value: q(1, 3), multiplicity: 4 },
            Eigenvalue { value: q(-1, 3), multiplicity: 2 }
        ]
    );
    let res = biharmonic_residual(&c).unwrap();
    assert!(res.vanish(0.0));
    assert!(res.reduced.iter().all(|r| *r == q(0, 1)));
}

#[test]
fn clifford_equal_dims_is_minimal() {
    for k in 1..6u32 {
        let c = ProductConfig::from_ratios(&[(k, 3, 2), (k, 3, 2)], q(3, 1)).unwrap();
        let rep = mean_curvature(&c);
        assert_eq!(rep.h_norm_sq, q(0, 1));
        assert!(rep.h_components.iter().all(|h| h.abs() < 1e-15));
    }
}

#[test]
fn two_spheres_at_half_radius() {
    for m1 in 1..7u32 {
        for m2 in 1..7u32 {
            let c = ProductConfig::from_ratios(&[(m1, 1, 2), (m2, 1, 2)], q(1, 1)).unwrap();
            let m = (m1 + m2) as i64;
            let diff = m1 as i64 - m2 as i64;
            assert_eq!(mean_curvature(&c).h_norm_sq, q(diff * diff, m * m));
            let res = biharmonic_residual(&c).unwrap();
            assert!(res.vanish(0.0), "({m1},{m2}) biharmonic");
            if m1 == m2 {
                assert_eq!(mean_curvature(&c).h_norm_sq, q(0, 1));
            }
        }
    }
}

#[test]
fn equal_circles_at_half_radius_are_minimal_but_not_proper() {
    let c = ProductConfig::from_ratios(&[(1, 1, 2), (1, 1, 2)], q(1, 1)).unwrap();
    assert_eq!(mean_curvature(&c).h_norm_sq, q(0, 1));
}

#[test]
fn unequal_radii_two_circles_are_not_biharmonic() {
    let c = ProductConfig::from_ratios(&[(1, 1, 3), (1, 2, 3)], q(1, 1)).unwrap();
    let res = biharmonic_residual(&c).unwrap();
    assert!(!res.vanish(0.0));
    assert!(res.max_abs() > 1e-3);
}

#[test]
fn biharmonic_needs_unit_sphere() {
    let c = ProductConfig::from_ratios(&[(1, 1, 1), (1, 1, 1)], q(2, 1)).unwrap();
    let err = biharmonic_residual(&c).unwrap_err();
    assert!(err.to_string().contains("lambda_residual"));
}

#[test]
fn rejects_unnormalized_radii() {
    let err = ProductConfig::from_ratios(&[(1, 1, 2), (1, 1, 3)], q(1, 1)).unwrap_err();
    assert!(err.to_string().contains("sum of squared factor radii"));
    let err = ProductConfig::from_radii(&[(1, 0.5), (1, 0.5)], 1.0).unwrap_err();
    assert!(matches!(err, Error::Domain(_)));
}

#[test]
fn single_factor_is_umbilical() {
    let c = ProductConfig::from_ratios(&[(4, 1, 1)], q(1, 1)).unwrap();
    let rep = mean_curvature(&c);
    assert_eq!(rep.h_norm_sq, q(0, 1));
    let c = ProductConfig::from_ratios(&[(4, 1, 2)], q(1, 2)).unwrap();
    assert_eq!(mean_curvature(&c).h_norm_sq, q(0, 1));
}

#[test]
fn sphere_circle_lambda_zero_case() {
    for m in 3..10u32 {
        let c = ProductConfig::from_ratios(&[(m - 1, 1, 2), (1, 1, 2)], q(1, 1)).unwrap();
        assert!(lambda_residual(&c, &q(0, 1)).vanish(0.0));
        let c = ProductConfig::from_ratios(&[(m - 1, 9, 2), (1, 9, 2)], q(9, 1)).unwrap();
        assert!(lambda_residual(&c, &q(0, 1)).vanish(0.0), "m={m}, r=3");
    }
}

#[test]
fn minimal_config_vanishes_for_every_lambda() {
    let c = ProductConfig::from_ratios(&[(2, 1, 2), (2, 1, 2)], q(1, 1)).unwrap();
    for l in [-5, -1, 0, 3, 7] {
        assert!(lambda_residual(&c, &q(l, 1)).vanish(0.0));
        assert_eq!(pmc_norm_identity(&c, &q(l, 1)), (q(0, 1), q(0, 1)));
    }
}

#[test]
fn two_circles_lambda_minus_two() {
    let alpha = 2.0 - 3f64.sqrt();
    let c = ProductConfig::from_squares(&[(1, 1.0 / (1.0 + alpha)), (1, alpha / (1.0 + alpha))], 1.0)
        .unwrap();
    let res = lambda_residual(&c, &-2.0);
    assert!(res.max_abs() <= 1e-12, "{:?}", res.components);
    let (lhs, rhs) = pmc_norm_identity(&c, &-2.0);
    assert!((lhs - rhs).abs() <= 1e-12);
    assert!(lambda_residual(&c, &-1.9).max_abs() > 1e-3);
}

#[test]
fn sphere_circle_critical_case_identity() {
    // m = 5, r = 1: r1^2 = (m - 1 - sqrt(m - 1)) / (m - 2) = 2/3 at lambda = 1.
    let c = ProductConfig::from_ratios(&[(4, 2, 3), (1, 1, 3)], q(1, 1)).unwrap();
    assert!(lambda_residual(&c, &q(1, 1)).vanish(0.0));
    let (lhs, rhs) = pmc_norm_identity(&c, &q(1, 1));
    assert_eq!(lhs, rhs);
}

#[test]
fn matches_vector_model_on_fixed_configs() {
    let configs = [
        ProductConfig::from_squares(&[(2, 0.25), (1, 0.25), (2, 0.25), (1, 0.25)], 1.0).unwrap(),
        ProductConfig::from_squares(&[(3, 1.1), (1, 0.4), (2, 0.5)], 2.0).unwrap(),
        ProductConfig::from_squares(&[(1, 0.3), (5, 2.7)], 3.0).unwrap(),
    ];
    for c in &configs {
        let model = VectorModel::of(c);
        let h = model.mean_curvature();
        let m = c.dim() as f64;
        let rep = mean_curvature(c);
        for (hc, hv) in rep.h_components.iter().zip(&h) {
            assert!((hc - m * hv).abs() < 1e-12);
        }
        for (e, mu) in rep.ah_eigenvalues.iter().zip(model.eigenvalues()) {
            assert!((e.value - mu).abs() < 1e-12);
        }
        for lambda in [-1.5, 0.0, 0.7] {
            let res = lambda_residual(c, &lambda);
            for (x, y) in res.components.iter().zip(model.residual(lambda)) {
                assert!((x - y).abs() < 1e-11, "{x} vs {y}");
            }
        }
    }
}

#[test]
fn ratio_system_matches_residuals() {
    let c = ProductConfig::from_ratios(&[(2, 1, 5), (1, 1, 7), (3, 23, 35)], q(1, 1)).unwrap();
    let res = biharmonic_residual(&c).unwrap();
    let sys = alpha_system_residuals(&c).unwrap();
    let m = Rational::int(c.dim() as i64);
    for ((f, r), e) in c.factors().iter().zip(&res.reduced).zip(&sys) {
        let alpha = f.radius_sq.clone() / Rational::int(f.dim as i64);
        assert_eq!(r.clone() * m.clone() * alpha, e.clone());
    }
}

#[test]
fn json_round_trip() {
    let c = case3_33();
    let v = c.to_json();
    assert_eq!(
        v,
        serde_json::json!({
            "ambient_radius": "1",
            "factors": [
                {"dim": 2, "radius": "1/2", "label": "F1"},
                {"dim": 1, "radius": "1/2", "label": "F2"},
                {"dim": 2, "radius": "1/2", "label": "F3"},
                {"dim": 1, "radius": "1/2", "label": "F4"},
            ]
        })
    );
    assert_eq!(parse_configs(&v).unwrap(), vec![AnyConfig::Exact(c)]);

    let half = ProductConfig::from_ratios(&[(2, 1, 2), (3, 1, 2)], q(1, 1)).unwrap();
    let v = half.to_json();
    assert_eq!(v["factors"][0]["radius_sq"], "1/2");
    assert_eq!(parse_configs(&v).unwrap(), vec![AnyConfig::Exact(half)]);
}

#[test]
#[allow(clippy::approx_constant)]
fn json_float_and_wrappers() {
    let v = serde_json::json!({
        "solutions": [{"config": {"ambient_radius": 1.0, "factors": [
            {"dim": 1, "radius": 0.7071067811865476}, {"dim": 1, "radius_sq": "1/2"}]}}]
    });
    let cs = parse_configs(&v).unwrap();
    assert!(matches!(cs[0], AnyConfig::Float(_)));
    assert!(parse_configs(&serde_json::json!({"factors": 3})).is_err());
    assert!(parse_configs(&serde_json::json!({"ambient_radius": 1, "factors": [{"dim": 0, "radius": 1}]}))
        .is_err());
}

fn arb_config() -> impl Strategy<Value = (Vec<u32>, Vec<f64>, f64)> {
    (1usize..6)
        .prop_flat_map(|k| {
            (
                proptest::collection::vec(1u32..6, k),
                proptest::collection::vec(0.05f64..1.0, k),
                0.3f64..3.0,
            )
        })
        .prop_map(|(d, w, r)| {
            let total: f64 = w.iter().sum();
            let sq = w.iter().map(|x| x / total * r * r).collect();
            (d, sq, r)
        })
}

fn build(d: &[u32], sq: &[f64]) -> ProductConfig<f64> {
    let factors = d.iter().zip(sq).enumerate().map(|(i, (&d, &a))| FactorSpec::new(d, a, format!("F{i}")));
    let sum: f64 = sq.iter().sum();
    ProductConfig::new(factors.collect(), sum).unwrap()
}

proptest! {
    #[test]
    fn trace_and_norm_identities((d, sq, _r) in arb_config()) {
        let c = build(&d, &sq);
        let rep = mean_curvature(&c);
        let m = c.dim() as f64;
        let trace: f64 = rep.ah_eigenvalues.iter().map(|e| e.multiplicity as f64 * e.value).sum();
        prop_assert!((trace - m * rep.h_norm_sq).abs() <= 1e-12 * (1.0 + trace.abs()));
        let by_components: f64 = rep.h_components.iter().map(|h| h * h).sum::<f64>() / (m * m);
        prop_assert!((by_components - rep.h_norm_sq).abs() <= 1e-12 * (1.0 + rep.h_norm_sq));
        let mults: u32 = rep.ah_eigenvalues.iter().map(|e| e.multiplicity).sum();
        prop_assert_eq!(mults, c.dim());
        let model: f64 = VectorModel::of(&c).mean_curvature().iter().map(|x| x * x).sum();
        prop_assert!((model - rep.h_norm_sq).abs() <= 1e-12 * (1.0 + model));
    }

    #[test]
    fn exact_trace_identity(dims in proptest::collection::vec(1u32..5, 1..5),
                            w in proptest::collection::vec(1i64..20, 4)) {
        let k = dims.len();
        let total: i64 = w[..k].iter().sum();
        let blocks: Vec<(u32, i64, i64)> = dims.iter().zip(&w).map(|(&d, &p)| (d, p, total)).collect();
        let c = ProductConfig::from_ratios(&blocks, q(1, 1)).unwrap();
        let rep = mean_curvature(&c);
        let trace = rep.ah_eigenvalues.iter().fold(q(0, 1), |acc, e| acc + Rational::int(e.multiplicity as i64) * e.value.clone());
        prop_assert_eq!(trace, Rational::int(c.dim() as i64) * rep.h_norm_sq.clone());
    }

    #[test]
    fn lambda_zero_agrees_with_biharmonic((d, sq, _r) in arb_config()) {
        let total: f64 = sq.iter().sum();
        let unit: Vec<f64> = sq.iter().map(|x| x / total).collect();
        let c = build(&d, &unit);
        let a = lambda_residual(&c, &0.0);
        let b = biharmonic_residual(&c).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn scale_covariance((d, sq, _r) in arb_config(), s in 0.2f64..5.0, lambda in -4.0f64..4.0) {
        let c = build(&d, &sq);
        let scaled = c.rescaled(&(s * s)).unwrap();
        let base = lambda_residual(&c, &lambda);
        let moved = lambda_residual(&scaled, &(lambda / (s * s)));
        for (x, y) in base.components.iter().zip(&moved.components) {
            let expect = x / (s * s * s);
            prop_assert!((y - expect).abs() <= 1e-10 * expect.abs().max(1.0), "{} vs {}", y, expect);
        }
    }
}

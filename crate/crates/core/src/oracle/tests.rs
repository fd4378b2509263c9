use super::*;
use crate::gap::sphere_circle_solutions;
use crate::geometry::mean_curvature;

fn six_circle() -> TorusEmbedding {
    let e = 1.0 / 8.0;
    TorusEmbedding::from_radii_sq(&[e, e, 0.25, e, e, 0.25], 1.0).unwrap()
}

fn three_circle() -> TorusEmbedding {
    TorusEmbedding::from_radii_sq(&[0.25, 0.25, 0.5], 1.0).unwrap()
}

fn two_circle_lambda() -> TorusEmbedding {
    let sols = sphere_circle_solutions(2, &1.0, &-2.0).unwrap();
    let s = &sols[0];
    TorusEmbedding::from_radii_sq(&[s.r1_sq, s.r2_sq], s.r1_sq + s.r2_sq).unwrap()
}

fn settings(step: f64, stencil: Stencil) -> FdSettings {
    FdSettings::new(step, stencil, 4, DEFAULT_SEED).unwrap()
}

#[test]
fn embedding_validation() {
    assert!(TorusEmbedding::new(&[0.6, 0.8], 1.0).is_ok());
    assert!(TorusEmbedding::new(&[0.6, 0.7], 1.0).is_err());
    assert!(TorusEmbedding::new(&[-0.6, 0.8], 1.0).is_err());
    assert!(TorusEmbedding::from_radii_sq(&[], 1.0).is_err());
    let sphere = ProductConfig::from_squares(&[(2, 0.5), (1, 0.5)], 1.0).unwrap();
    assert!(TorusEmbedding::from_config(&sphere).is_err());
    assert_eq!(six_circle().ambient_dim(), 12);
}

#[test]
fn settings_validation() {
    assert!(FdSettings::new(1e-6, Stencil::Central2, 1, 0).is_err());
    assert!(FdSettings::new(0.2, Stencil::Central2, 1, 0).is_err());
    assert!(FdSettings::new(1e-3, Stencil::Central2, 0, 0).is_err());
    assert_eq!("central4".parse::<Stencil>().unwrap(), Stencil::Central4);
    assert!("central3".parse::<Stencil>().is_err());
}

#[test]
fn clifford_torus_is_minimal() {
    let b = std::f64::consts::FRAC_1_SQRT_2;
    let emb = TorusEmbedding::new(&[b, b], 1.0).unwrap();
    let s = settings(1e-3, Stencil::Central2);
    let tau = tension_fd(&emb, &[0.3, 1.1], &s).unwrap();
    assert!(norm(&tau) < 1e-12);
    let r = verify(&emb, Some(3.0), &s).unwrap();
    assert!(r.max_residual < 1e-12);
    assert!(r.order_estimate.is_none());
}

#[test]
fn mean_curvature_norms() {
    let s = settings(1e-3, Stencil::Central2);
    for emb in [three_circle(), six_circle()] {
        let r = verify(&emb, None, &s).unwrap();
        assert!((r.mean_curvature_norm - 1.0 / 3.0).abs() < 1e-6, "{}", r.mean_curvature_norm);
    }
}

#[test]
fn biharmonic_tori() {
    let s = settings(1e-3, Stencil::Central2);
    for emb in [three_circle(), six_circle()] {
        let r = verify(&emb, None, &s).unwrap();
        assert!(r.max_residual <= 1e-4, "{}", r.max_residual);
        let order = r.order_estimate.unwrap();
        assert!((1.8..2.2).contains(&order), "{order}");
    }
}

/// Residuals at h = 1e-3 and h/2 from an independent 34-digit prototype
/// of the same stencils.
#[test]
fn residuals_match_high_precision_run() {
    let s = FdSettings::new(1e-3, Stencil::Central2, 1, DEFAULT_SEED).unwrap();
    for (emb, lambda, want) in [(three_circle(), 0.0, 3.33e-6), (six_circle(), 0.0, 2.67e-5), (two_circle_lambda(), -2.0, 8.49e-6)] {
        let r = verify(&emb, Some(lambda), &s).unwrap();
        assert!((r.max_residual / want - 1.0).abs() < 0.01, "{} vs {want}", r.max_residual);
        assert!((r.half_step_residual / (want / 4.0) - 1.0).abs() < 0.01);
    }
}

#[test]
fn central4_converges_faster() {
    let s = settings(1e-2, Stencil::Central4);
    let r = verify(&three_circle(), None, &s).unwrap();
    let order = r.order_estimate.unwrap();
    assert!(order >= 3.5, "{order}");
    assert!(r.max_residual < 1e-5);
    let coarse = bitension_fd(&three_circle(), &[0.1, 0.2, 0.3], &s).unwrap();
    assert!(norm(&coarse) < 1e-5);
}

#[test]
fn lambda_biharmonic_two_circles() {
    let emb = two_circle_lambda();
    let s = settings(1e-3, Stencil::Central2);
    let r = verify(&emb, Some(-2.0), &s).unwrap();
    assert!(r.max_residual <= 1e-4);
    let control = verify(&emb.perturbed(1e-2).unwrap(), Some(-2.0), &s).unwrap();
    assert!(control.max_residual >= 1e-3, "{}", control.max_residual);
}

#[test]
fn perturbed_torus_is_not_biharmonic() {
    let s = settings(1e-3, Stencil::Central2);
    let r = verify(&six_circle().perturbed(1e-2).unwrap(), None, &s).unwrap();
    assert!(r.max_residual >= 1e-3);
}

#[test]
fn homogeneity_and_tangency() {
    let s = FdSettings::new(1e-3, Stencil::Central2, 16, 7).unwrap();
    for emb in [three_circle(), six_circle(), two_circle_lambda()] {
        let r = verify(&emb, None, &s).unwrap();
        assert!(r.tension_spread <= 1e-8 * r.mean_curvature_norm.max(1e-300) * emb.dim() as f64);
        assert!(r.max_tangency <= 1e-8);
    }
}

#[test]
fn agrees_with_closed_form() {
    let s = settings(1e-3, Stencil::Central2);
    let configs = [vec![0.1, 0.9], vec![0.3, 0.3, 0.4], vec![0.05, 0.15, 0.3, 0.5], vec![0.25, 0.75]];
    for sq in configs {
        let emb = TorusEmbedding::from_radii_sq(&sq, 1.0).unwrap();
        let exact = mean_curvature(&emb.to_config().unwrap()).h_norm_sq.sqrt();
        let r = verify(&emb, None, &s).unwrap();
        // truncation error ~ h^2 / (12 b_min^2)
        assert!((r.mean_curvature_norm - exact).abs() < 1e-5, "{sq:?}");
    }
}

#[test]
fn binary64_loses_the_signal() {
    let s = settings(1e-3, Stencil::Central2);
    let dd = verify(&six_circle(), None, &s).unwrap();
    let f = verify_in::<f64>(&six_circle(), None, &s).unwrap();
    assert!(dd.order_estimate.unwrap() > 1.8);
    assert!((f.max_residual - dd.max_residual).abs() > 1e-6);
}

#[test]
fn report_is_deterministic() {
    let s = settings(1e-3, Stencil::Central2);
    let a = serde_json::to_string(&verify(&three_circle(), None, &s).unwrap()).unwrap();
    let b = serde_json::to_string(&verify(&three_circle(), None, &s).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["stencil"], "central2");
    assert_eq!(v["seed"], DEFAULT_SEED);
    assert!(v["config"]["factors"].is_array());
}


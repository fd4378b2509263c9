// Read product configurations as JSON and report their λ-biharmonic residuals.
use biharmonic::geometry::{lambda_residual, mean_curvature, parse_configs, AnyConfig};

const SAMPLE: &str = r#"[
  {"ambient_radius": 1, "factors": [{"dim": 2, "radius": "1/2"}, {"dim": 2, "radius": "1/2"}, {"dim": 1, "radius_sq": "1/2"}]},
  {"ambient_radius": 1, "factors": [{"dim": 1, "radius_sq": "1/2"}, {"dim": 1, "radius_sq": "1/2"}]},
  {"ambient_radius": 1.0, "factors": [{"dim": 2, "radius": 0.6}, {"dim": 1, "radius": 0.8}]}
]"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SAMPLE.to_string(),
    };
    for c in parse_configs(&serde_json::from_str(&text)?)? {
        match c {
            AnyConfig::Exact(c) => {
                let h = mean_curvature(&c);
                let r = lambda_residual(&c, &biharmonic::Rational::from_integer(0.into()));
                println!("exact: |H|² = {}, biharmonic residual {:e}", h.h_norm_sq, r.max_abs());
            }
            AnyConfig::Float(c) => {
                let h = mean_curvature(&c);
                let r = lambda_residual(&c, &0.0);
                println!("float: |H|² = {:.12}, biharmonic residual {:e}", h.h_norm_sq, r.max_abs());
            }
        }
    }
    Ok(())
}

// Finite-difference check of the bitension field on flat tori in spheres.
use biharmonic::oracle::{verify, FdSettings, Stencil, TorusEmbedding, DEFAULT_SEED};

fn main() -> biharmonic::Result<()> {
    let e = 1.0 / 8.0;
    let tori = [
        ("clifford", TorusEmbedding::from_radii_sq(&[0.5, 0.5], 1.0)?, None),
        ("3-circle", TorusEmbedding::new(&[0.5, 0.5, std::f64::consts::FRAC_1_SQRT_2], 1.0)?, None),
        ("6-circle", TorusEmbedding::from_radii_sq(&[e, e, 0.25, e, e, 0.25], 1.0)?, None),
    ];
    for stencil in [Stencil::Central2, Stencil::Central4] {
        let s = FdSettings::new(1e-2, stencil, 8, DEFAULT_SEED)?;
        for (name, emb, lambda) in &tori {
            let r = verify(emb, *lambda, &s)?;
            println!(
                "{name:>9} {stencil}: |H| = {:.9}, max |τ2| = {:.3e}, order {:.2}",
                r.mean_curvature_norm,
                r.max_residual,
                r.order_estimate.unwrap_or(f64::NAN)
            );
        }
    }
    Ok(())
}

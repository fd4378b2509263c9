// S^{m-1}(r1) x S^1(r2) in S^m(r) for a given λ, checked against the residual.
use biharmonic::gap::sphere_circle_solutions;
use biharmonic::geometry::lambda_residual;
use biharmonic::{ProductConfig, Rational, Scalar};

fn main() -> biharmonic::Result<()> {
    for (m, lambda) in [(5, Rational::int(1)), (4, Rational::ratio(1, 2)), (3, Rational::int(0))] {
        for s in sphere_circle_solutions(m, &Rational::int(1), &lambda)? {
            let c = ProductConfig::from_squares(&[(m - 1, s.r1_sq.clone()), (1, s.r2_sq.clone())], Rational::int(1))?;
            let res = lambda_residual(&c, &lambda);
            println!(
                "m = {m}, λ = {lambda}, {:?}: r1² = {}, r2² = {}, case {}, residual {:e}",
                s.branch, s.r1_sq, s.r2_sq, s.case_id, res.max_abs()
            );
        }
    }
    // λ = -2 on the two-circle torus is irrational, so use floats
    for s in sphere_circle_solutions(2, &1.0, &-2.0)? {
        println!("m = 2, λ = -2: r1² = {:.12}, r2² = {:.12}", s.r1_sq, s.r2_sq);
    }
    Ok(())
}

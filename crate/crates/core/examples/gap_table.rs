// Gap endpoints x1, x2 for the λ-biharmonic gap, exact where possible.
use biharmonic::gap::{gap_endpoints, GapParams};
use biharmonic::{Error, Rational, Scalar};

fn show(v: &Option<Rational>) -> String {
    v.as_ref().map_or("-".into(), |x| x.to_string())
}

fn main() -> biharmonic::Result<()> {
    println!("{:>3} {:>6} {:>12} {:>12} {:>16}", "m", "λ", "x1", "x2", "range");
    for m in 3..=8 {
        for lambda in [Rational::int(0), Rational::ratio(1, 2), Rational::int(1), Rational::int(-2)] {
            let p = GapParams::new(m, Rational::int(1), lambda.clone())?;
            match gap_endpoints(&p) {
                Ok(g) => println!("{m:>3} {:>6} {:>12} {:>12} {:>16?}", lambda.to_string(), show(&g.x1), show(&g.x2), g.range_kind),
                Err(Error::Irrational(_)) => {
                    let g = gap_endpoints(&GapParams::new(m, 1.0, lambda.to_f64())?)?;
                    let f = |x: Option<f64>| x.map_or("-".into(), |x| format!("{x:.9}"));
                    println!("{m:>3} {:>6} {:>12} {:>12} {:>16?}", lambda.to_string(), f(g.x1), f(g.x2), g.range_kind);
                }
                Err(e) => return Err(e),
            }
        }
    }
    // irrational endpoints fall back to binary64
    let p = GapParams::new(4, 1.0, 0.3)?;
    let g = gap_endpoints(&p)?;
    println!("m = 4, λ = 0.3: x1 = {:?}, x2 = {:?}", g.x1, g.x2);
    Ok(())
}

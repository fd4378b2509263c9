// Okumura's inequality on random traceless spectra and on its equality cases.
use biharmonic::gap::okumura;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> biharmonic::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut tightest = f64::INFINITY;
    for _ in 0..10_000 {
        let m = rng.random_range(3..=10usize);
        let mut b: Vec<f64> = (0..m).map(|_| rng.random::<f64>() - 0.5).collect();
        let mean = b.iter().sum::<f64>() / m as f64;
        b.iter_mut().for_each(|x| *x -= mean);
        let r = okumura(&b)?;
        let slack = (r.upper - r.sum_cubes).min(r.sum_cubes - r.lower) / r.upper;
        tightest = tightest.min(slack);
    }
    println!("10^4 random spectra, smallest relative slack {tightest:.3e}");
    for b in [vec![1.0, 1.0, -2.0], vec![-1.0, -1.0, -1.0, 3.0]] {
        let r = okumura(&b)?;
        println!("{b:?}: {} ≤ {} ≤ {}, equality {:?}", r.lower, r.sum_cubes, r.upper, r.equality_side);
    }
    Ok(())
}

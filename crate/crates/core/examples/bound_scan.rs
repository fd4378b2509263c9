// Scan the |H|^2 bound over the admissible first radius and write a CSV.
use biharmonic::product::bound_scan;

fn main() -> biharmonic::Result<()> {
    for (m1, m2) in [(3, 3), (3, 4), (4, 5), (5, 7)] {
        let s = bound_scan(m1, m2, 10_000)?;
        let (g_drop, h_rise) = s.monotonicity_violations();
        println!(
            "({m1},{m2}): crossing r1² = {:.10}, max min(g, h) = {:.12} vs {:.12}, violations {g_drop:e}/{h_rise:e}",
            s.crossing_r1_sq, s.bound, s.theoretical_bound
        );
    }
    let path = std::env::temp_dir().join("bound_scan_3_4.csv");
    let s = bound_scan(3, 4, 200)?;
    s.write_csv(std::fs::File::create(&path)?)?;
    println!("wrote {}", path.display());
    Ok(())
}

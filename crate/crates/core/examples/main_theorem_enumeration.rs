// Enumerate the biharmonic products S^{m1-1} x S^1 x S^{m2-1} x S^1 in S^{m+3}.
use biharmonic::product::{enumerate_factorizations, four_block_dims};

fn main() {
    let (m1, m2) = std::env::args()
        .nth(1)
        .and_then(|s| {
            let (a, b) = s.split_once(',')?;
            Some((a.parse().ok()?, b.parse().ok()?))
        })
        .unwrap_or((3, 4));
    for c in enumerate_factorizations(&four_block_dims(m1, m2)) {
        let alphas: Vec<String> = c.alphas.iter().map(|a| a.to_string()).collect();
        match &c.rejection_reason {
            None if c.admissible => println!(
                "case {}: α = ({}), r1² = {}, |H|² = {}",
                c.case_id,
                alphas.join(", "),
                c.r1_sq,
                c.h_iota_sq
            ),
            reason => println!("case {}: rejected ({})", c.case_id, reason.as_deref().unwrap_or("-")),
        }
    }
}

//! Mann-Whitney U on Likert responses, with the pair-counting definition
//! alongside.
//!
//!     cargo run --example mann_whitney

use fairdice::ordinal::{brute_force_u, descriptive_summary, mann_whitney_u};
use fairdice::OrdinalSample;

fn main() -> fairdice::Result<()> {
    let teachers = OrdinalSample::likert(&[1, 1, 2, 2, 2, 3, 2, 1, 4, 2, 1, 3], 5)?;
    let online = OrdinalSample::likert(&[3, 2, 4, 3, 5, 3, 2, 4, 3, 3, 1, 4, 5, 3], 5)?;
    for (name, s) in [("teachers", &teachers), ("online", &online)] {
        let sum = descriptive_summary(s);
        println!(
            "{name:<9} n={:<3} median {} modes {:?}",
            s.len(),
            sum.median,
            sum.modes
        );
    }
    let r = mann_whitney_u(&teachers, &online, 0.05)?;
    println!(
        "U_x={} U_y={} (pair count {:?})",
        r.u_x,
        r.u_y,
        brute_force_u(&teachers, &online)
    );
    println!(
        "z={:.4} p={:.5} significant at 0.05: {}",
        r.z, r.p_two_sided, r.significant
    );

    // shifting one sample away lowers p
    for shift in 0..4 {
        let moved = OrdinalSample::new(online.values().iter().map(|v| v + shift as f64).collect())?;
        println!(
            "shift {shift}: p={:.2e}",
            mann_whitney_u(&teachers, &moved, 0.05)?.p_two_sided
        );
    }
    Ok(())
}

//! Deterministic versus randomized classification of two overlapping uniform
//! classes, `Uniform[0, b]` and `Uniform[a, a + b]`. Both rules reach the same
//! expected 0-1 cost, `(b - a) / (2b)`.
//!
//!     cargo run --release --example overlap_classifiers

use fairdice::decision::{
    analytic_overlap_cost, monte_carlo_cost, overlap_deterministic, overlap_randomized,
};
use fairdice::{CostMatrix, Mixture};

fn main() -> fairdice::Result<()> {
    let (b, n, seed) = (1.0, 1_000_000, 7);
    let cost = CostMatrix::zero_one(2);
    println!(
        "{:>4}  {:>9}  {:>9}  {:>9}  {:>8}",
        "a", "analytic", "M_d", "M_r", "3 s.e."
    );
    for step in 1..=9 {
        let a = step as f64 / 10.0;
        let mixture = Mixture::shifted_uniforms(a, b)?;
        let md = monte_carlo_cost(&mixture, &cost, &overlap_deterministic(a, b)?, n, seed)?;
        let mr = monte_carlo_cost(&mixture, &cost, &overlap_randomized(a, b)?, n, seed)?;
        println!(
            "{a:>4.1}  {:>9.5}  {:>9.5}  {:>9.5}  {:>8.5}",
            analytic_overlap_cost(a, b)?,
            md.mean_cost,
            mr.mean_cost,
            3.0 * md.standard_error.max(mr.standard_error)
        );
    }
    Ok(())
}
